//! Self-describing binary snapshots of built indexes.
//!
//! Layout: magic bytes `RQK1`, a little-endian `u32` format version, then a
//! bincode-encoded kind-tagged payload carrying the raw-value dictionary and
//! the index itself.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{BuiltIndex, HarnessError};

pub const MAGIC: [u8; 4] = *b"RQK1";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Snapshot {
    /// label id -> original raw value
    pub dict: Vec<i64>,
    pub index: BuiltIndex,
}

pub fn save(mut w: impl Write, snapshot: &Snapshot) -> Result<(), HarnessError> {
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    bincode::serialize_into(&mut w, snapshot)
        .map_err(|e| HarnessError::Io(std::io::Error::other(e)))?;
    Ok(())
}

pub fn load(mut r: impl Read) -> Result<Snapshot, HarnessError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(HarnessError::VersionMismatch(format!(
            "bad magic {magic:?}, expected {MAGIC:?}"
        )));
    }
    let mut version = [0u8; 4];
    r.read_exact(&mut version)?;
    let version = u32::from_le_bytes(version);
    if version != VERSION {
        return Err(HarnessError::VersionMismatch(format!(
            "format version {version}, this build reads {VERSION}"
        )));
    }
    bincode::deserialize_from(&mut r).map_err(|e| HarnessError::Io(std::io::Error::other(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{gen, BuildParams, Instance, StructureKind};
    use crate::Probe;

    #[test]
    fn round_trip_preserves_answers() {
        let list = gen::list(120, gen::ListShape::Uniform, 9, 77);
        let tree = gen::tree(90, gen::TreeShape::Random, 6, 78);
        for kind in StructureKind::ALL {
            let instance = if kind.takes_tree() {
                Instance::Tree(tree.clone())
            } else {
                Instance::List(list.clone())
            };
            let index =
                BuiltIndex::build(kind, &instance, &BuildParams::default()).unwrap();
            let snap = Snapshot { dict: (0..32).collect(), index };
            let mut buf = Vec::new();
            save(&mut buf, &snap).unwrap();
            assert_eq!(&buf[..4], b"RQK1");
            let loaded = load(buf.as_slice()).unwrap();
            let n = instance.len() as u32;
            let mut rng = crate::harness::rng::SplitMix64::new(5);
            for _ in 0..1000 {
                let (a, b) = if kind.takes_tree() {
                    (rng.below(n as u64) as u32, rng.below(n as u64) as u32)
                } else {
                    let i = rng.below(n as u64) as u32 + 1;
                    let j = i + rng.below((n - i + 1) as u64) as u32;
                    (i, j)
                };
                let before = snap.index.answer(a, b, &mut Probe::default()).unwrap();
                let after = loaded.index.answer(a, b, &mut Probe::default()).unwrap();
                assert_eq!(before, after, "{} query ({a},{b})", kind.name());
            }
        }
    }

    #[test]
    fn version_and_magic_are_checked() {
        let list = gen::list(8, gen::ListShape::Uniform, 3, 1);
        let index = BuiltIndex::build(
            StructureKind::ModeTradeoff,
            &Instance::List(list),
            &BuildParams::default(),
        )
        .unwrap();
        let snap = Snapshot { dict: vec![0, 1, 2], index };
        let mut buf = Vec::new();
        save(&mut buf, &snap).unwrap();

        let mut wrong_magic = buf.clone();
        wrong_magic[0] = b'X';
        assert!(matches!(
            load(wrong_magic.as_slice()),
            Err(HarnessError::VersionMismatch(_))
        ));

        let mut wrong_version = buf.clone();
        wrong_version[4] = 9;
        assert!(matches!(
            load(wrong_version.as_slice()),
            Err(HarnessError::VersionMismatch(_))
        ));
    }
}
