/// Per-query instrumentation counters.
///
/// `probes` counts elementary data-structure accesses: one per table or array
/// cell read, one per search-tree node visited, one per counting query against
/// an occurrence index. `candidates` counts candidate labels examined by a
/// mode query. `comparisons` counts element comparisons made by multi-array
/// selection. Complexity assertions in the test suite read these counters
/// instead of timing anything.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Probe {
    pub probes: u64,
    pub candidates: u64,
    pub comparisons: u64,
}

impl Probe {
    #[inline]
    pub fn tick(&mut self) {
        self.probes += 1;
    }

    #[inline]
    pub fn bump(&mut self, n: u64) {
        self.probes += n;
    }

    #[inline]
    pub fn candidate(&mut self) {
        self.candidates += 1;
    }

    #[inline]
    pub fn compare(&mut self) {
        self.comparisons += 1;
    }
}

/// A built query structure with an instrumented space counter.
///
/// `words` is incremented at allocation sites during the build (array slots,
/// search-tree nodes, table cells) and never estimated from process memory,
/// so space trends are reproducible across platforms.
pub trait IndexArtifact {
    fn words(&self) -> u64;
    fn kind(&self) -> &'static str;
}
