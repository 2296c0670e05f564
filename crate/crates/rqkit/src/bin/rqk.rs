//! Command-line harness over the query structures: build snapshots, answer
//! query streams, fuzz against the oracle, benchmark, and generate
//! instances.
//!
//! Exit codes: 0 ok, 1 fuzz finding, 2 usage or input error.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::process::ExitCode;

use rqkit::harness::fuzz::{self, FuzzConfig};
use rqkit::harness::gen::{self, ListShape, TreeShape};
use rqkit::harness::{
    bench, snapshot, textio, BuildParams, BuiltIndex, HarnessError, Instance, StructureKind,
};
use rqkit::{LabeledList, LabeledTree, Probe};

const USAGE: &str = "\
usage: rqk <command> [options]

commands:
  build --kind <kind> --out <snapshot> [--epsilon E] [--blocks B] [--k K] [--arity A] <input>
  query <snapshot> [<queries>]          answers one `i j` / `u v` pair per line (stdin default)
  fuzz  [--kind <kind|all>] [--n MAX] [--instances C] [--seed S] [--self-check] [--out <repro>]
  bench [--kind <kinds|all>] [--n N1,N2,..] [--queries Q] [--epsilon E] [--k K] [--blocks B]
        [--arity A] [--seed S] [--out <csv>]
  gen   --kind <list-uniform|list-zipf|tree-random|tree-path|tree-star|tree-caterpillar>
        --n N [--distinct D] [--seed S] [--out <file>]

kinds: mode-tradeoff mode-constant mode-tree median-block median-range-tree
       median-constant median-tree

list input: one integer label per line
tree input: first line `n root`, then `node_id parent_id label` with parent 0 for the root
answers:    value<TAB>witness<TAB>probes (witness = frequency for modes, rank for medians)";

struct Args {
    positional: Vec<String>,
    flags: std::collections::HashMap<String, String>,
    switches: std::collections::HashSet<String>,
}

fn parse_args(argv: &[String]) -> Result<Args, String> {
    let mut args = Args {
        positional: Vec::new(),
        flags: Default::default(),
        switches: Default::default(),
    };
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if let Some(name) = a.strip_prefix("--") {
            if name == "self-check" {
                args.switches.insert(name.to_string());
            } else {
                let value = it
                    .next()
                    .ok_or_else(|| format!("flag --{name} expects a value"))?;
                args.flags.insert(name.to_string(), value.clone());
            }
        } else {
            args.positional.push(a.clone());
        }
    }
    Ok(args)
}

impl Args {
    fn flag(&self, name: &str) -> Option<&str> {
        self.flags.get(name).map(|s| s.as_str())
    }

    fn parse_flag<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, String> {
        match self.flag(name) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("bad value for --{name}: {v}")),
        }
    }

    fn build_params(&self) -> Result<BuildParams, String> {
        let mut p = BuildParams::default();
        if let Some(e) = self.parse_flag::<f64>("epsilon")? {
            p.epsilon = e;
        }
        p.blocks = self.parse_flag::<usize>("blocks")?;
        p.k = self.parse_flag::<usize>("k")?;
        if let Some(a) = self.parse_flag::<usize>("arity")? {
            p.arity = a;
        }
        Ok(p)
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let Some((command, rest)) = argv.split_first() else {
        eprintln!("{USAGE}");
        return ExitCode::from(2);
    };
    let args = match parse_args(rest) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("rqk: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match command.as_str() {
        "build" => cmd_build(&args),
        "query" => cmd_query(&args),
        "fuzz" => cmd_fuzz(&args),
        "bench" => cmd_bench(&args),
        "gen" => cmd_gen(&args),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            return ExitCode::SUCCESS;
        }
        other => Err(HarnessError::BadParams(format!("unknown command {other:?}"))),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rqk: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_instance(kind: StructureKind, path: &str) -> Result<(Instance, Vec<i64>), HarnessError> {
    let reader = BufReader::new(File::open(path)?);
    if kind.takes_tree() {
        let (parents, raw) = textio::parse_tree(reader)?;
        let (tree, dict) = LabeledTree::from_raw(&parents, &raw)?;
        Ok((Instance::Tree(tree), dict))
    } else {
        let raw = textio::parse_list(reader)?;
        let (list, dict) = LabeledList::from_raw(&raw)?;
        Ok((Instance::List(list), dict))
    }
}

fn cmd_build(args: &Args) -> Result<ExitCode, HarnessError> {
    let kind = args
        .flag("kind")
        .and_then(StructureKind::parse)
        .ok_or_else(|| HarnessError::BadParams("build needs a valid --kind".into()))?;
    let out = args
        .flag("out")
        .ok_or_else(|| HarnessError::BadParams("build needs --out <snapshot>".into()))?;
    let [input] = args.positional.as_slice() else {
        return Err(HarnessError::BadParams("build needs exactly one input file".into()));
    };
    let params = args.build_params().map_err(HarnessError::BadParams)?;
    let (instance, dict) = load_instance(kind, input)?;
    let index = BuiltIndex::build(kind, &instance, &params)?;
    let snap = snapshot::Snapshot { dict, index };
    snapshot::save(BufWriter::new(File::create(out)?), &snap)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_query(args: &Args) -> Result<ExitCode, HarnessError> {
    let (snap_path, queries) = match args.positional.as_slice() {
        [s] => (s, None),
        [s, q] => (s, Some(q)),
        _ => {
            return Err(HarnessError::BadParams(
                "query needs <snapshot> and optionally <queries>".into(),
            ))
        }
    };
    let snap = snapshot::load(BufReader::new(File::open(snap_path)?))?;
    let reader: Box<dyn BufRead> = match queries {
        Some(path) => Box::new(BufReader::new(File::open(path)?)),
        None => Box::new(BufReader::new(std::io::stdin())),
    };
    let is_tree = snap.index.structure_kind().takes_tree();
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (a, b) = textio::parse_query_line(&line)?;
        let n = snap.index.len() as u32;
        let (a, b) = if is_tree {
            if a > n || b > n {
                return Err(HarnessError::MalformedQuery(line));
            }
            (a - 1, b - 1)
        } else {
            if a > b || b > n {
                return Err(HarnessError::MalformedQuery(line));
            }
            (a, b)
        };
        let mut probe = Probe::default();
        let (value, witness) = snap.index.answer(a, b, &mut probe).map_err(|e| match e {
            HarnessError::Lib(core) => HarnessError::MalformedQuery(format!("{line}: {core}")),
            other => other,
        })?;
        let raw = snap
            .dict
            .get(value.0 as usize)
            .copied()
            .unwrap_or(value.0 as i64);
        writeln!(out, "{raw}\t{witness}\t{}", probe.probes)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fuzz(args: &Args) -> Result<ExitCode, HarnessError> {
    let kinds = match args.flag("kind") {
        None | Some("all") => StructureKind::ALL.to_vec(),
        Some(k) => vec![StructureKind::parse(k)
            .ok_or_else(|| HarnessError::BadParams(format!("unknown kind {k:?}")))?],
    };
    let cfg = FuzzConfig {
        kinds,
        max_n: args
            .parse_flag::<usize>("n")
            .map_err(HarnessError::BadParams)?
            .unwrap_or(120),
        instances: args
            .parse_flag::<usize>("instances")
            .map_err(HarnessError::BadParams)?
            .unwrap_or(24),
        seed: args
            .parse_flag::<u64>("seed")
            .map_err(HarnessError::BadParams)?
            .unwrap_or(0xF0CC_ACC1A),
        mutate: args.switches.contains("self-check"),
    };
    let outcome = fuzz::run(&cfg);
    print!("{}", outcome.report);
    match (outcome.failure, cfg.mutate) {
        (Some(failure), mutate) => {
            let path = args.flag("out").unwrap_or("fuzz-reproducer.txt");
            std::fs::write(path, &failure.reproducer)?;
            eprintln!("reproducer written to {path}");
            if mutate {
                // the defect was injected on purpose; catching it is the pass
                println!("self-check: injected defect detected");
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        (None, true) => {
            eprintln!("self-check: injected defect was NOT detected");
            Ok(ExitCode::from(1))
        }
        (None, false) => Ok(ExitCode::SUCCESS),
    }
}

fn cmd_bench(args: &Args) -> Result<ExitCode, HarnessError> {
    let kinds = match args.flag("kind") {
        None | Some("all") => StructureKind::ALL.to_vec(),
        Some(list) => {
            let mut kinds = Vec::new();
            for part in list.split(',').filter(|p| !p.is_empty()) {
                kinds.push(StructureKind::parse(part).ok_or_else(|| {
                    HarnessError::BadParams(format!("unknown kind {part:?}"))
                })?);
            }
            kinds
        }
    };
    let sizes = match args.flag("n") {
        None => vec![1usize << 10, 1 << 12],
        Some(list) => {
            let mut sizes = Vec::new();
            for part in list.split(',').filter(|p| !p.is_empty()) {
                sizes.push(part.parse().map_err(|_| {
                    HarnessError::BadParams(format!("bad size {part:?}"))
                })?);
            }
            sizes
        }
    };
    let cfg = bench::BenchConfig {
        kinds,
        sizes,
        params: args.build_params().map_err(HarnessError::BadParams)?,
        queries: args
            .parse_flag::<usize>("queries")
            .map_err(HarnessError::BadParams)?
            .unwrap_or(1000),
        seed: args
            .parse_flag::<u64>("seed")
            .map_err(HarnessError::BadParams)?
            .unwrap_or(1),
    };
    let rows = bench::run(&cfg)?;
    match args.flag("out") {
        Some(path) => bench::write_csv(&rows, BufWriter::new(File::create(path)?))?,
        None => bench::write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: &Args) -> Result<ExitCode, HarnessError> {
    let kind = args
        .flag("kind")
        .ok_or_else(|| HarnessError::BadParams("gen needs --kind".into()))?;
    let n = args
        .parse_flag::<usize>("n")
        .map_err(HarnessError::BadParams)?
        .ok_or_else(|| HarnessError::BadParams("gen needs --n".into()))?;
    if n == 0 {
        return Err(HarnessError::BadParams("--n must be at least 1".into()));
    }
    let distinct = args
        .parse_flag::<usize>("distinct")
        .map_err(HarnessError::BadParams)?
        .unwrap_or(0);
    let seed = args
        .parse_flag::<u64>("seed")
        .map_err(HarnessError::BadParams)?
        .unwrap_or(7);
    let mut sink: Box<dyn Write> = match args.flag("out") {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match kind {
        "list-uniform" | "list-zipf" => {
            let shape = if kind == "list-uniform" { ListShape::Uniform } else { ListShape::Zipf };
            let values = gen::list_values(n, shape, distinct, seed);
            textio::write_list(&mut sink, &values)?;
        }
        "tree-random" | "tree-path" | "tree-star" | "tree-caterpillar" => {
            let shape = match kind {
                "tree-random" => TreeShape::Random,
                "tree-path" => TreeShape::Path,
                "tree-star" => TreeShape::Star,
                _ => TreeShape::Caterpillar,
            };
            let tree = gen::tree(n, shape, distinct, seed);
            let dict: Vec<i64> = (0..tree.universe() as i64).collect();
            textio::write_tree(&mut sink, &tree, &dict)?;
        }
        other => {
            return Err(HarnessError::BadParams(format!("unknown gen kind {other:?}")));
        }
    }
    Ok(ExitCode::SUCCESS)
}
