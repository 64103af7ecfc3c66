//! `segre`: dimensions of linear systems through double points on `(P^1)^r`,
//! secant defectivity, classification, certificates, reductions and the
//! catalecticant test.
//!
//! Exit codes: 0 non-special (or success), 2 special or defective,
//! 3 inconclusive, 1 certificate rejected or computation error, 64 bad
//! arguments.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use segre_core::catalect::{self, TensorCoefficients};
use segre_core::classify::{classify, Speciality};
use segre_core::degen::{self, CertificateNode, PlanOptions};
use segre_core::gf::{PrimeField, SUPPORTED_PRIMES};
use segre_core::interp;
use segre_core::model::{critical_range, FatPoints, LinearSystem, MultiDegree, Status};
use segre_core::reduce;
use segre_core::sweep::{self, NPolicy, SweepConfig, SweepRow};
use segre_core::{with_prime, Error};

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_SPECIAL: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "segre", version, about = "Double points on products of projective lines", propagate_version = true)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Prime field for random-point computations.
    #[arg(long, global = true, env = "SEGRE_PRIME", default_value_t = 307)]
    prime: u32,
    /// Master seed.
    #[arg(long, global = true, env = "SEGRE_SEED", default_value_t = 0)]
    seed: u64,
    /// Independent samples per dimension computation.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    retries: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for sweeps and certificate checks, 0 for all cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
}

/// A number of points, or an end of the critical range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PointCount {
    Exact(usize),
    Minus,
    Plus,
}

impl FromStr for PointCount {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "n-" | "n⁻" | "minus" => Ok(PointCount::Minus),
            "n+" | "n⁺" | "plus" => Ok(PointCount::Plus),
            _ => s.parse().map(PointCount::Exact).map_err(|_| format!("expected a count, n- or n+, got {s:?}")),
        }
    }
}

impl PointCount {
    fn resolve(self, deg: &MultiDegree) -> usize {
        let (lo, hi) = critical_range(deg);
        match self {
            PointCount::Exact(n) => n,
            PointCount::Minus => lo,
            PointCount::Plus => hi,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension of a linear system at random points.
    Dim(DimArgs),
    /// Dimension of a secant variety of the Segre-Veronese embedding.
    Secant(SecantArgs),
    /// Dimension predicted by the classification.
    Classify(DegPoints),
    /// Emit or verify a degeneration certificate.
    Certify(CertifyArgs),
    /// Reduce to projective space and apply Cremona steps.
    Reduce(ReduceArgs),
    /// Catalecticant matrix of a (2,2,2) form and the 7-secant test.
    Catalecticant(CatalecticantArgs),
    /// Dimensions over a grid of sorted degree tuples.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct DegPoints {
    /// Multi-degree, e.g. 2,2,2.
    #[arg(long, value_delimiter = ',', required = true)]
    deg: Vec<u32>,
    /// Number of double points, or n- / n+.
    #[arg(long)]
    double: PointCount,
}

#[derive(Args, Debug)]
struct DimArgs {
    /// Multi-degree on (P^1)^r, or the degree on P^r with --projective.
    #[arg(long, value_delimiter = ',', required = true)]
    deg: Vec<u32>,
    /// Number of double points, or n- / n+.
    #[arg(long, conflicts_with = "mults", required_unless_present = "mults")]
    double: Option<PointCount>,
    /// Explicit multiplicities.
    #[arg(long, value_delimiter = ',')]
    mults: Option<Vec<u32>>,
    /// Work on P^R with R = this value.
    #[arg(long, value_name = "R")]
    projective: Option<usize>,
}

#[derive(Args, Debug)]
struct SecantArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    deg: Vec<u32>,
    /// Number of points spanning the secant, or n- / n+.
    #[arg(long)]
    points: PointCount,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long, value_delimiter = ',', required_unless_present = "verify")]
    deg: Option<Vec<u32>>,
    #[arg(long, required_unless_present = "verify")]
    double: Option<PointCount>,
    /// Run the checker on the emitted certificate.
    #[arg(long)]
    check: bool,
    /// Check a certificate read from this file instead of planning one.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["deg", "double"])]
    verify: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// Multi-degree on (P^1)^r, or the degree on P^r with --projective.
    #[arg(long, value_delimiter = ',', required = true)]
    deg: Vec<u32>,
    /// Double points on (P^1)^r.
    #[arg(long, conflicts_with = "projective")]
    double: Option<PointCount>,
    /// Start on projective space.
    #[arg(long, requires = "mults")]
    projective: bool,
    /// Dimension of the projective space.
    #[arg(long = "ambient-dim", default_value_t = 3)]
    ambient_dim: usize,
    #[arg(long, value_delimiter = ',')]
    mults: Option<Vec<u32>>,
    /// Also compute the dimension of every system in the chain.
    #[arg(long)]
    dims: bool,
}

#[derive(Args, Debug)]
struct CatalecticantArgs {
    /// The 27 coefficients z_0..z_26 (integers, reduced mod the prime).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "secant_sample")]
    coeffs: Option<Vec<i64>>,
    /// Use a random sum of this many terms a^2 b^2 c^2.
    #[arg(long, required_unless_present = "coeffs")]
    secant_sample: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    r_min: usize,
    #[arg(long, default_value_t = 3)]
    r_max: usize,
    #[arg(long, default_value_t = 1)]
    d_min: u32,
    #[arg(long, default_value_t = 3)]
    d_max: u32,
    /// critical, all, minus or plus.
    #[arg(long, default_value = "critical")]
    n_policy: NPolicy,
    /// Skip cells with more sections than this.
    #[arg(long, default_value_t = 5000)]
    cap: u64,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidSystem(_)
            | Error::UnsupportedPrime(_)
            | Error::DegenerateDegrees
            | Error::NonPositiveDegree(_)
            | Error::MalformedCoordinates(_)
            | Error::UnsupportedReduction(_)
            | Error::Shape(_) => EXIT_USAGE,
            _ => EXIT_FAILED,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = cli.run;
    if !SUPPORTED_PRIMES.contains(&cfg.prime) {
        return Err(Error::UnsupportedPrime(cfg.prime as u64).into());
    }
    let p = cfg.prime;
    let outcome: Result<Outcome, Error> = match cli.command {
        Command::Dim(a) => with_prime!(p, F => Ok(cmd_dim::<F>(&cfg, a))),
        Command::Secant(a) => with_prime!(p, F => Ok(cmd_secant::<F>(&cfg, a))),
        Command::Classify(a) => Ok(cmd_classify(&cfg, a)),
        Command::Certify(a) => with_prime!(p, F => Ok(cmd_certify::<F>(&cfg, a))),
        Command::Reduce(a) => with_prime!(p, F => Ok(cmd_reduce::<F>(&cfg, a))),
        Command::Catalecticant(a) => with_prime!(p, F => Ok(cmd_catalecticant::<F>(&cfg, a))),
        Command::Sweep(a) => with_prime!(p, F => Ok(cmd_sweep::<F>(&cfg, a))),
    };
    outcome?
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn degree(deg: &[u32]) -> Result<MultiDegree, Failure> {
    Ok(MultiDegree::new(deg.to_vec())?)
}

fn check_prime(prime: u32, spec: &LinearSystem) -> Result<(), Failure> {
    let m = spec.points.max_multiplicity();
    if prime <= m {
        return Err(usage(format!("prime {prime} must exceed the largest multiplicity {m}")));
    }
    Ok(())
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::NonSpecial => EXIT_OK,
        Status::SpecialCandidate => EXIT_SPECIAL,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_dim<F: PrimeField>(cfg: &RunConfig, a: DimArgs) -> Outcome {
    let spec = match a.projective {
        Some(r) => {
            let [d] = a.deg[..] else { return Err(usage("--projective takes a single degree")) };
            let Some(m) = a.mults else { return Err(usage("--projective needs --mults")) };
            LinearSystem::projective(r, d, FatPoints::new(m))?
        }
        None => {
            let deg = degree(&a.deg)?;
            let points = match (a.double, a.mults) {
                (Some(n), _) => FatPoints::doubles(n.resolve(&deg)),
                (None, Some(m)) => FatPoints::new(m),
                (None, None) => return Err(usage("give --double or --mults")),
            };
            LinearSystem::product(deg, points)
        }
    };
    check_prime(cfg.prime, &spec)?;
    let report = interp::dim_linear_system::<F>(&spec, cfg.seed, cfg.retries as usize)?;
    let out = match cfg.format {
        Format::Json => json(&report),
        Format::Tsv => format!(
            "system\tvirtual\texpected\tcomputed\tstatus\ttrials\tseed\tprime\n{spec}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            report.virtual_dim, report.expected, report.computed, report.status, report.trials, report.seed, report.prime
        ),
    };
    Ok((out, status_code(report.status)))
}

fn cmd_secant<F: PrimeField>(cfg: &RunConfig, a: SecantArgs) -> Outcome {
    let deg = degree(&a.deg)?;
    let n = a.points.resolve(&deg);
    let report = interp::secant_dimension::<F>(&deg, n, cfg.seed, cfg.retries as usize)?;
    let out = match cfg.format {
        Format::Json => json(&report),
        Format::Tsv => format!(
            "degrees\tpoints\tsecant_dim\texpected_secant_dim\tdefective\ttrials\tseed\tprime\n{deg}\t{n}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            report.secant_dim, report.expected_secant_dim, report.defective, report.trials, report.seed, report.prime
        ),
    };
    Ok((out, if report.defective { EXIT_SPECIAL } else { EXIT_OK }))
}

fn cmd_classify(cfg: &RunConfig, a: DegPoints) -> Outcome {
    let deg = degree(&a.deg)?;
    let n = a.double.resolve(&deg);
    let c = classify(&deg, n)?;
    let out = match cfg.format {
        Format::Json => json(&c),
        Format::Tsv => {
            let family = c.family.map(|f| f.to_string()).unwrap_or_default();
            let status = match c.status {
                Speciality::NonSpecial => "non_special",
                Speciality::Special => "special",
            };
            format!("degrees\tn\tstatus\tdim\tfamily\n{deg}\t{n}\t{status}\t{}\t{family}\n", c.dim)
        }
    };
    Ok((out, if c.status == Speciality::Special { EXIT_SPECIAL } else { EXIT_OK }))
}

fn certificate_tsv(node: &CertificateNode) -> String {
    let mut out = String::from("path\trule\tdegrees\tdouble_points\tdim\n");
    for (path, n) in node.walk() {
        let d: Vec<String> = n.claim.degrees.iter().map(u32::to_string).collect();
        let rule = serde_json::to_value(n.rule).expect("serializable");
        let _ = writeln!(out, "{path}\t{}\t{}\t{}\t{}", rule.as_str().unwrap_or("?"), d.join(","), n.claim.double_points, n.claim.dim);
    }
    out
}

fn cmd_certify<F: PrimeField>(cfg: &RunConfig, a: CertifyArgs) -> Outcome {
    if let Some(path) = a.verify {
        let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let node = CertificateNode::from_json(&text).map_err(|e| usage(e.to_string()))?;
        return match degen::check_with_threads(&node, cfg.threads) {
            Ok(()) => Ok((format!("OK {}\n", node.claim), EXIT_OK)),
            Err(f) => Err(Failure { code: EXIT_FAILED, message: format!("certificate rejected at {f}") }),
        };
    }
    let (Some(d), Some(n)) = (a.deg, a.double) else { return Err(usage("give --deg and --double, or --verify")) };
    let deg = degree(&d)?;
    let n = n.resolve(&deg);
    let opts = PlanOptions { seed: cfg.seed, retries: cfg.retries as usize, ..PlanOptions::default() };
    let node = degen::plan_with::<F>(&deg, n, &opts)?;
    if a.check {
        return match degen::check_with_threads(&node, cfg.threads) {
            Ok(()) => Ok((format!("OK {}\n", node.claim), EXIT_OK)),
            Err(f) => Err(Failure { code: EXIT_FAILED, message: format!("certificate rejected at {f}") }),
        };
    }
    let out = match cfg.format {
        Format::Json => {
            let mut s = node.to_json();
            s.push('\n');
            s
        }
        Format::Tsv => certificate_tsv(&node),
    };
    Ok((out, EXIT_OK))
}

#[derive(serde::Serialize)]
struct ChainStep {
    system: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<i64>,
}

fn cmd_reduce<F: PrimeField>(cfg: &RunConfig, a: ReduceArgs) -> Outcome {
    let mut chain = Vec::new();
    let start = if a.projective {
        let [d] = a.deg[..] else { return Err(usage("--projective takes a single degree")) };
        let m = a.mults.clone().unwrap_or_default();
        LinearSystem::projective(a.ambient_dim, d, FatPoints::new(m))?
    } else {
        let deg = degree(&a.deg)?;
        let Some(n) = a.double else { return Err(usage("give --double, or --projective with --mults")) };
        let product = LinearSystem::product(deg.clone(), FatPoints::doubles(n.resolve(&deg)));
        let projective = reduce::to_projective(&product)?;
        chain.push(product);
        projective
    };
    chain.extend(reduce::greedy_cremona_chain(&start));
    for s in &chain {
        check_prime(cfg.prime, s)?;
    }
    let mut steps = Vec::with_capacity(chain.len());
    for s in &chain {
        let dim = if a.dims { Some(interp::dim_linear_system::<F>(s, cfg.seed, cfg.retries as usize)?.computed) } else { None };
        steps.push(ChainStep { system: s.to_string(), dim });
    }
    let out = match cfg.format {
        Format::Json => json(&steps),
        Format::Tsv => {
            let mut out = String::from("step\tsystem\tvirtual\tdim\n");
            for (i, (step, s)) in steps.iter().zip(&chain).enumerate() {
                let dim = step.dim.map(|d| d.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{i}\t{}\t{}\t{dim}", step.system, s.virtual_dimension());
            }
            out
        }
    };
    Ok((out, EXIT_OK))
}

#[derive(serde::Serialize)]
struct CatalecticantReport {
    matrix: Vec<Vec<u32>>,
    rank: usize,
    determinant: u32,
    on_secant: bool,
    prime: u32,
}

fn cmd_catalecticant<F: PrimeField>(cfg: &RunConfig, a: CatalecticantArgs) -> Outcome {
    let z: TensorCoefficients<F> = match (a.coeffs, a.secant_sample) {
        (Some(c), _) => {
            let vals: Vec<F> = c.iter().map(|&v| F::from_i64(v)).collect();
            TensorCoefficients::from_slice(&vals).map_err(|e| usage(e.to_string()))?
        }
        (None, Some(s)) => catalect::secant_sample::<F>(s, cfg.seed),
        (None, None) => return Err(usage("give --coeffs or --secant-sample")),
    };
    let m = catalect::catalecticant(&z)?;
    let det = m.determinant()?;
    let report = CatalecticantReport {
        matrix: (0..8).map(|i| m.row(i).iter().map(|x| x.value()).collect()).collect(),
        rank: m.rank(),
        determinant: det.value(),
        on_secant: det.value() == 0,
        prime: F::MODULUS,
    };
    let out = match cfg.format {
        Format::Json => json(&report),
        Format::Tsv => {
            let mut out = String::new();
            for row in &report.matrix {
                let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
            let _ = writeln!(out, "rank\t{}\ndeterminant\t{}\non_secant\t{}", report.rank, report.determinant, report.on_secant);
            out
        }
    };
    Ok((out, EXIT_OK))
}

fn sweep_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from("degrees\tn\tvirtual\texpected\tcomputed\tstatus\ttrials\tseed\tprime\tskipped\n");
    for row in rows {
        let d: Vec<String> = row.degrees.iter().map(u32::to_string).collect();
        let _ = match &row.report {
            Some(r) => writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t",
                d.join(","),
                row.n,
                r.virtual_dim,
                r.expected,
                r.computed,
                r.status,
                r.trials,
                r.seed,
                r.prime
            ),
            None => writeln!(out, "{}\t{}\t\t\t\t\t\t\t\t{}", d.join(","), row.n, row.skipped.as_deref().unwrap_or("")),
        };
    }
    out
}

fn cmd_sweep<F: PrimeField>(cfg: &RunConfig, a: SweepArgs) -> Outcome {
    if a.r_min > a.r_max || a.d_min > a.d_max {
        return Err(usage("empty range"));
    }
    let sc = SweepConfig {
        r_min: a.r_min,
        r_max: a.r_max,
        d_min: a.d_min,
        d_max: a.d_max,
        n_policy: a.n_policy,
        cap: a.cap,
        seed: cfg.seed,
        retries: cfg.retries as usize,
        threads: cfg.threads,
    };
    let rows = sweep::sweep::<F>(&sc)?;
    let out = match cfg.format {
        Format::Json => json(&rows),
        Format::Tsv => sweep_tsv(&rows),
    };
    Ok((out, EXIT_OK))
}
