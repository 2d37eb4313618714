//! The `fairsplit` command line: JSON instance files in, JSON reports out.
//!
//! Exit codes: 0 ok, 2 schema, 3 internal, 4 precondition, 5 budget.

pub mod instance;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fairsplit_core::coloring::set_partitions;
use fairsplit_core::necklace::{self, NecklaceError};
use fairsplit_core::pathsplit::{
    self, power_of_two_split, solve_cycle_split, solve_pair_split, solve_qstable_bruteforce, verify_cycle_split,
    verify_pair_split, verify_qstable_split, PathSplitError, QSTABLE_BUDGET,
};
use fairsplit_core::signkit::{compute_t, tucker_scan, Lambda, SignError};
use fairsplit_core::ColoredPath;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use instance::{InstanceFile, Kind};
use report::{
    Certificate, ContinuousReport, CycleReport, NecklaceReport, PathReport, ScanReport, StableReport, TuckerCheckReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Budget(_) => 5,
        }
    }
}

impl From<PathSplitError> for CliError {
    fn from(e: PathSplitError) -> Self {
        match e {
            PathSplitError::Internal(_) => CliError::Internal(e.to_string()),
            PathSplitError::Precondition(_) => CliError::Precondition(e.to_string()),
            PathSplitError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            PathSplitError::ZeroDivisor => CliError::Schema(e.to_string()),
        }
    }
}

impl From<NecklaceError> for CliError {
    fn from(e: NecklaceError) -> Self {
        match e {
            NecklaceError::Empty
            | NecklaceError::MissingColor { .. }
            | NecklaceError::TooFewThieves(_)
            | NecklaceError::InvalidSpec(_)
            | NecklaceError::InvalidContinuous(_) => CliError::Schema(e.to_string()),
            NecklaceError::UnsupportedRemainder { ref colors } => {
                let one_based: Vec<usize> = colors.iter().map(|c| c + 1).collect();
                CliError::Precondition(format!("remainders of colors {one_based:?} are not in {{0, 1, q-1}}"))
            }
            NecklaceError::RoundingPrecondition(_) => CliError::Precondition(e.to_string()),
            NecklaceError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            NecklaceError::NonIntegralAlpha { .. } | NecklaceError::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<SignError> for CliError {
    fn from(e: SignError) -> Self {
        match e {
            SignError::InstanceTooLarge { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fairsplit", version, about = "Fair splitting of colored paths, cycles and necklaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON result to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Instance file, or `-` for stdin.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two independent sets after removing one vertex per color.
    SplitPath(InputArgs),
    /// The same on a cycle, reporting induced cycle edges.
    SplitCycle(InputArgs),
    /// Fair necklace splitting with prescribed advantaged thieves.
    SplitNecklace {
        #[command(flatten)]
        input: InputArgs,
        /// Cap on owner patterns tried by the continuous search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// q pairwise disjoint q-stable sets.
    SplitStable {
        #[command(flatten)]
        input: InputArgs,
        /// Overrides `q` from the instance file.
        #[arg(long)]
        q: Option<usize>,
        /// Also require at most |V_j|/q vertices of color j per set.
        #[arg(long)]
        enforce_upper: bool,
        /// Cap on (q+1)^n for the exhaustive search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exhaustively checks the antipodal labeling of a path instance.
    TuckerCheck(InputArgs),
    /// Brute-force search for q-stable splits over small paths.
    ConjectureScan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = 7)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1)]
    pub max_colors: usize,
    #[arg(long)]
    pub enforce_upper: bool,
    /// Cap on (q+1)^n per instance.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Extra random instances on top of the exhaustive sweep.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print a progress line to stderr every this many instances (0: never).
    #[arg(long, default_value_t = 1000)]
    pub progress: usize,
}

/// Runs one subcommand and returns its JSON report.
pub fn run(command: &Command) -> Result<serde_json::Value, CliError> {
    match command {
        Command::SplitPath(a) => to_json(&split_path(&InstanceFile::load(&a.input)?)?),
        Command::SplitCycle(a) => to_json(&split_cycle(&InstanceFile::load(&a.input)?)?),
        Command::SplitNecklace { input, budget } => to_json(&split_necklace(&InstanceFile::load(&input.input)?, *budget)?),
        Command::SplitStable {
            input,
            q,
            enforce_upper,
            budget,
        } => to_json(&split_stable(&InstanceFile::load(&input.input)?, *q, *enforce_upper, *budget)?),
        Command::TuckerCheck(a) => to_json(&tucker_check(&InstanceFile::load(&a.input)?)?),
        Command::ConjectureScan(args) => to_json(&conjecture_scan(args)?),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

fn require(cert: &Certificate) -> Result<(), CliError> {
    if cert.verified {
        Ok(())
    } else {
        Err(CliError::Internal(format!("verifier rejected the output: {}", cert.violations.join("; "))))
    }
}

pub fn split_path(inst: &InstanceFile) -> Result<PathReport, CliError> {
    inst.expect_kind(&[Kind::Path])?;
    let path = inst.path()?;
    let split = solve_pair_split(&path)?;
    let cert = Certificate::from_result(verify_pair_split(&path, &split));
    require(&cert)?;
    Ok(PathReport::new(&split, cert))
}

pub fn split_cycle(inst: &InstanceFile) -> Result<CycleReport, CliError> {
    inst.expect_kind(&[Kind::Cycle])?;
    let cycle = inst.path()?;
    let split = solve_cycle_split(&cycle)?;
    let cert = Certificate::from_result(verify_cycle_split(&cycle, &split));
    require(&cert)?;
    Ok(CycleReport::new(&split, cert))
}

pub fn split_necklace(inst: &InstanceFile, budget: Option<u64>) -> Result<NecklaceReport, CliError> {
    inst.expect_kind(&[Kind::Necklace])?;
    let neck = inst.necklace()?;
    let q = neck.q();
    // remainders are checked before the advantage map so that an
    // unsupported instance reports exit 4 even without advantages
    let unsupported: Vec<usize> = (0..neck.num_colors())
        .filter(|&j| ![0, 1, q - 1].contains(&neck.remainder(j)))
        .collect();
    if !unsupported.is_empty() {
        return Err(NecklaceError::UnsupportedRemainder { colors: unsupported }.into());
    }
    let spec = inst.advantage_spec(&neck)?;
    let out = necklace::split_with_advantages(&neck, &spec, budget.unwrap_or(necklace::CONTINUOUS_PATTERN_BUDGET))?;
    let cert = Certificate::from_result(necklace::verify_discrete(&neck, &spec, &out.discrete));
    require(&cert)?;
    Ok(NecklaceReport {
        owner: out.discrete.owner.iter().map(|t| t + 1).collect(),
        cuts: out.discrete.cuts(),
        cut_bound: neck.cut_bound(),
        continuous: ContinuousReport::new(&out.continuous),
        cancelled: ContinuousReport::new(&out.cancelled),
        report: cert,
    })
}

pub fn split_stable(
    inst: &InstanceFile,
    q: Option<usize>,
    enforce_upper: bool,
    budget: Option<u64>,
) -> Result<StableReport, CliError> {
    inst.expect_kind(&[Kind::Path])?;
    let path = inst.path()?;
    let q = q
        .or(inst.q)
        .ok_or_else(|| CliError::Schema("q is required (instance field or --q)".into()))?;
    let (method, split) = if q.is_power_of_two() {
        ("composition", Some(power_of_two_split(&path, q)?))
    } else {
        let budget = Some(budget.unwrap_or(QSTABLE_BUDGET));
        ("brute-force", solve_qstable_bruteforce(&path, q, enforce_upper, budget)?)
    };
    let cert = split
        .as_ref()
        .map(|s| Certificate::from_result(verify_qstable_split(&path, q, s, enforce_upper)));
    if let Some(c) = &cert {
        require(c)?;
    }
    Ok(StableReport::new(q, method, enforce_upper, split.as_ref(), cert))
}

pub fn tucker_check(inst: &InstanceFile) -> Result<TuckerCheckReport, CliError> {
    inst.expect_kind(&[Kind::Path])?;
    let path = inst.path()?;
    let t = compute_t(&path)?;
    let lambda = Lambda::new(&path, t);
    let s = lambda.label_bound();
    let rep = tucker_scan(|x| lambda.label(x).ok(), path.len(), s)?;
    let outcome = if !rep.is_clean() {
        "violation"
    } else if s < path.len() {
        "lemma-contradiction"
    } else {
        "ok"
    };
    Ok(TuckerCheckReport {
        n: path.len(),
        m: path.num_colors(),
        t,
        s,
        antipodal: rep.antipodal_failures == 0,
        antipodal_failures: rep.antipodal_failures,
        complementary_pairs: rep.complementary_pairs,
        out_of_range: rep.out_of_range,
        outcome: outcome.into(),
    })
}

pub fn conjecture_scan(args: &ScanArgs) -> Result<ScanReport, CliError> {
    if args.q == 0 {
        return Err(CliError::Schema("q must be positive".into()));
    }
    let q = args.q;
    let admissible = |colors: &[usize]| {
        let m = colors.iter().max().map_or(0, |c| c + 1);
        (0..m).all(|j| colors.iter().filter(|&&c| c == j).count() + 1 >= q)
    };
    let mut instances: Vec<Vec<usize>> = Vec::new();
    for n in 1..=args.max_n {
        for m in 1..=args.max_colors.min(n) {
            instances.extend(set_partitions(n, m).into_iter().filter(|c| admissible(c)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut added = 0;
    let mut attempts = 0;
    while added < args.random && args.max_n > 0 {
        attempts += 1;
        if attempts > 1000 * (args.random + 1) {
            return Err(CliError::Precondition("no admissible random instance for these bounds".into()));
        }
        let n = rng.gen_range(1..=args.max_n);
        let m = rng.gen_range(1..=args.max_colors.min(n).max(1));
        let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
        if ColoredPath::new(colors.clone()).is_ok() && admissible(&colors) {
            instances.push(colors);
            added += 1;
        }
    }

    let budget = Some(args.budget.unwrap_or(QSTABLE_BUDGET));
    let mut found = 0;
    let mut counterexamples = Vec::new();
    for (i, colors) in instances.iter().enumerate() {
        let path = ColoredPath::new(colors.clone()).map_err(|e| CliError::Internal(e.to_string()))?;
        match solve_qstable_bruteforce(&path, q, args.enforce_upper, budget)? {
            Some(split) => {
                if let Err(v) = verify_qstable_split(&path, q, &split, args.enforce_upper) {
                    let msgs: Vec<String> = v.iter().map(pathsplit::Violation::to_string).collect();
                    return Err(CliError::Internal(msgs.join("; ")));
                }
                found += 1;
            }
            None => counterexamples.push(colors.iter().map(|c| c + 1).collect()),
        }
        if args.progress > 0 && (i + 1) % args.progress == 0 {
            eprintln!("scanned {}/{} instances, {} without a split", i + 1, instances.len(), counterexamples.len());
        }
    }
    Ok(ScanReport {
        q,
        max_n: args.max_n,
        max_colors: args.max_colors,
        enforce_upper: args.enforce_upper,
        seed: args.seed,
        random: args.random,
        instances: instances.len(),
        found,
        not_found: counterexamples.len(),
        counterexamples,
    })
}
