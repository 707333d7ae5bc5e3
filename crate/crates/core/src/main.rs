use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use automset::format::{FormatError, InstanceFile, OracleCheck, ResultFile, TraceReport};
use automset::interval::{describe, to_dot, PQTree};
use automset::marked::autom_marked_int;
use automset::oracle::{
    brute_autom_marked, brute_autom_set, gen_interval_instance, gen_set_family, FamilyShape,
    OracleBudget,
};
use automset::setfamily::autom_set;
use automset::{par, Error};

#[derive(Parser)]
#[command(
    name = "automset",
    version,
    about = "Automorphism groups of colored set families and marked interval graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON)
    instance: PathBuf,
    /// Include the subgroup tower in the result
    #[arg(long)]
    trace: bool,
    /// Cross-check the result against brute force
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Automorphism group of a colored set family
    Autoset(SolveArgs),
    /// Automorphisms of an interval graph acting on its marked cliques
    Automarked(SolveArgs),
    /// PQ-tree of the graph of an instance
    Pqtree {
        instance: PathBuf,
        /// Emit Graphviz instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Compare the pipeline with brute force on seeded random instances
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Largest ground set or vertex count
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Brute-force group of an instance
    Oracle { instance: PathBuf },
}

enum Failure {
    Io(String),
    Format(FormatError),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Format(FormatError::Invalid(e))
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Format(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Format(FormatError::Parse { .. }) => 3,
            Failure::Format(FormatError::Invalid(e)) if e.is_internal() => 4,
            Failure::Format(FormatError::Invalid(_)) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(m) => m.clone(),
            Failure::Format(e) => e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(InstanceFile::parse(&text)?)
}

fn autoset(args: &SolveArgs) -> Result<String, Failure> {
    let file = load(&args.instance)?;
    if file.has_graph() {
        return Err(Error::InvalidFamily(
            "set family instances take no edges; use automarked".into(),
        )
        .into());
    }
    let family = file.family()?;
    let solved = autom_set(&family)?;
    let mut result = ResultFile::new("autoset", &file, &solved.domain, &solved.group);
    if args.trace {
        result.trace = Some(TraceReport::from(&solved.trace));
    }
    if args.oracle {
        let brute = brute_autom_set(&family, &OracleBudget::default())?;
        result.oracle = Some(OracleCheck {
            order: brute.order.to_string(),
            agrees: solved.group.same_elements(&brute.group)?,
        });
    }
    Ok(result.render())
}

fn automarked(args: &SolveArgs) -> Result<String, Failure> {
    let file = load(&args.instance)?;
    let marked = file.marked()?;
    let solved = autom_marked_int(&marked)?;
    let mut result = ResultFile::new("automarked", &file, &solved.domain, &solved.group);
    if marked.sets.entries.is_empty() {
        let w = "no marked sets: the result is the trivial group on an empty domain";
        eprintln!("warning: {w}");
        result.warnings.push(w.to_string());
    }
    if args.trace {
        result.trace = solved.trace.as_ref().map(TraceReport::from);
    }
    if args.oracle {
        let brute = brute_autom_marked(&marked, &OracleBudget::default())?;
        result.oracle = Some(OracleCheck {
            order: brute.order.to_string(),
            agrees: solved.group.same_elements(&brute.group)?,
        });
    }
    Ok(result.render())
}

#[derive(Serialize)]
struct NodeDump {
    id: usize,
    kind: String,
    children: Vec<usize>,
    inner: Vec<String>,
}

#[derive(Serialize)]
struct TreeDump {
    shape: String,
    root: usize,
    leaves: usize,
    cliques: Vec<Vec<String>>,
    nodes: Vec<NodeDump>,
}

fn pqtree(path: &Path, dot: bool) -> Result<String, Failure> {
    let g = load(path)?.graph()?;
    let tree = PQTree::build(&g)?;
    if dot {
        return Ok(to_dot(&g, &tree));
    }
    let dump = TreeDump {
        shape: describe(&g, &tree, tree.root()),
        root: tree.root(),
        leaves: tree.cliques().len(),
        cliques: tree
            .cliques()
            .iter()
            .map(|c| c.iter().map(|&v| g.label(v)).collect())
            .collect(),
        nodes: tree
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, n)| NodeDump {
                id,
                kind: format!("{:?}", n.kind),
                children: n.children.clone(),
                inner: tree.inner(id).iter().map(|&v| g.label(v)).collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&dump).unwrap() + "\n")
}

fn oracle(path: &Path) -> Result<String, Failure> {
    let file = load(path)?;
    let budget = OracleBudget::default();
    let (problem, domain, brute) = if file.has_graph() {
        let marked = file.marked()?;
        (
            "automarked",
            marked.domain(),
            brute_autom_marked(&marked, &budget)?,
        )
    } else {
        let family = file.family()?;
        let domain = automset::setfamily::MultisetDomain::of(&family);
        ("autoset", domain, brute_autom_set(&family, &budget)?)
    };
    let group = brute.group.pruned();
    Ok(ResultFile::new(problem, &file, &domain, &group).render())
}

#[derive(Default, Serialize)]
struct VerifyReport {
    instances: u64,
    set_mismatches: Vec<u64>,
    marked_mismatches: Vec<u64>,
    skipped: Vec<u64>,
    errors: Vec<String>,
    max_height: usize,
    height_violations: u64,
    index_violations: u64,
    antichain_violations: u64,
}

enum Outcome {
    Agree {
        height_ok: bool,
        index_ok: bool,
        height: usize,
        antichain_ok: bool,
    },
    Mismatch,
    Skipped,
    Failed(String),
}

fn verify_one(seed: u64, max_n: usize) -> (Outcome, Outcome) {
    let budget = OracleBudget::default();
    let shape = FamilyShape {
        max_ground: max_n.max(1),
        ..FamilyShape::default()
    };
    let family = gen_set_family(seed, &shape);
    let set_outcome = match (autom_set(&family), brute_autom_set(&family, &budget)) {
        (Ok(fast), Ok(slow)) => match fast.group.same_elements(&slow.group) {
            Ok(true) if fast.group.order() == slow.order => Outcome::Agree {
                height_ok: fast.trace.height_within_bound(),
                index_ok: fast.trace.indices_within_bound(),
                height: fast.trace.height(),
                antichain_ok: true,
            },
            _ => Outcome::Mismatch,
        },
        (_, Err(Error::BudgetExceeded(_))) => Outcome::Skipped,
        (Err(e), _) | (_, Err(e)) => Outcome::Failed(format!("set seed {seed}: {e}")),
    };
    let n = 1 + (seed as usize) % max_n.max(1);
    let marked = gen_interval_instance(seed, n, 1 + (seed as usize) % 6, 1 + (seed as usize) % 3);
    let marked_outcome = match (
        autom_marked_int(&marked),
        brute_autom_marked(&marked, &budget),
    ) {
        (Ok(fast), Ok(slow)) => match fast.group.same_elements(&slow.group) {
            Ok(true) if fast.group.order() == slow.order => Outcome::Agree {
                height_ok: true,
                index_ok: true,
                height: 0,
                antichain_ok: fast
                    .reduced
                    .as_ref()
                    .is_none_or(|r| r.antichain == r.antichain_with_nodes),
            },
            _ => Outcome::Mismatch,
        },
        (_, Err(Error::BudgetExceeded(_))) => Outcome::Skipped,
        (Err(e), _) | (_, Err(e)) => Outcome::Failed(format!("marked seed {seed}: {e}")),
    };
    (set_outcome, marked_outcome)
}

fn verify(seed: u64, count: u64, max_n: usize) -> Result<String, Failure> {
    let seeds: Vec<u64> = (seed..seed + count).collect();
    let outcomes = par::map(&seeds, |&s| (s, verify_one(s, max_n)));
    let mut report = VerifyReport {
        instances: count,
        ..VerifyReport::default()
    };
    for (s, (set, marked)) in outcomes {
        for (outcome, is_set) in [(set, true), (marked, false)] {
            match outcome {
                Outcome::Agree {
                    height_ok,
                    index_ok,
                    height,
                    antichain_ok,
                } => {
                    report.max_height = report.max_height.max(height);
                    report.height_violations += u64::from(!height_ok);
                    report.index_violations += u64::from(!index_ok);
                    report.antichain_violations += u64::from(!antichain_ok);
                }
                Outcome::Mismatch if is_set => report.set_mismatches.push(s),
                Outcome::Mismatch => report.marked_mismatches.push(s),
                Outcome::Skipped => {
                    eprintln!("notice: seed {s} exceeds the brute-force budget; skipped");
                    report.skipped.push(s);
                }
                Outcome::Failed(m) => report.errors.push(m),
            }
        }
    }
    eprintln!(
        "{} instances, {} set mismatches, {} marked mismatches, {} skipped",
        count,
        report.set_mismatches.len(),
        report.marked_mismatches.len(),
        report.skipped.len()
    );
    Ok(serde_json::to_string_pretty(&report).unwrap() + "\n")
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Autoset(a) => autoset(a),
        Command::Automarked(a) => automarked(a),
        Command::Pqtree { instance, dot } => pqtree(instance, *dot),
        Command::Verify { seed, count, max_n } => verify(*seed, *count, *max_n),
        Command::Oracle { instance } => oracle(instance),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
