//! The `spermat` command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 input or validation
//! error, 3 size beyond the feasibility limit.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::{ClassCache, ClassTable, EnumerationLimit};
use crate::counting::{binomial, sigma_count, CountReport};
use crate::error::{Error, Result};
use crate::matrix::binary::BinaryMatrix;
use crate::matrix::pi::{coincidence_matrix, random_pi_with, PiMatrix};
use crate::matrix::sperm::{pi_to_sigma, sigma_to_pi, SPermMatrix};
use crate::matrix::sudoku::{compose_sudoku, decompose_sudoku, SudokuMatrix};
use crate::oracle::{self, OracleLimit, OracleMode, OracleResult};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

/// When set (to anything but `0`), randomized commands refuse to run without `--seed`.
pub const CI_ENV: &str = "SPERMAT_CI";
const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "spermat",
    version,
    about = "Count disjoint pairs of S-permutation matrices and verify the counts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the row/column permutation classes of n x n binary matrices
    Classes(ClassesArgs),
    /// Evaluate xi, eta and p for one n
    Count(CountArgs),
    /// Check the formula against brute-force oracles
    Verify(VerifyArgs),
    /// Convert between S-permutation text, Pi-matrix JSON and Sudoku text
    Convert(ConvertArgs),
    /// Monte Carlo estimate of the disjointness probability
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Block size n (matrices are n^2 x n^2, classes are n x n)
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    /// Write the result here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: available cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Lift the default size limits
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Args, Debug)]
pub struct ClassesArgs {
    #[command(flatten)]
    pub common: Common,
    /// Only report classes with this many edges
    #[arg(long)]
    pub k: Option<usize>,
    /// Regenerate the cached table
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub force: bool,
    /// Decimal places for p
    #[arg(long, default_value_t = CountReport::DEFAULT_PLACES)]
    pub places: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run a Monte Carlo check with this many trials (always on for n >= 4)
    #[arg(long)]
    pub trials: Option<u64>,
    /// Random references for the fixed-reference check at n = 3
    #[arg(long, default_value_t = 20)]
    pub references: usize,
    /// Random (reference, mask) pairs for the agreement check
    #[arg(long, default_value_t = 100)]
    pub masks: usize,
    /// Also count all unordered pairs at n = 3
    #[arg(long)]
    pub all_pairs: bool,
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Pi JSON if the input starts with '{', S-permutation text otherwise
    Auto,
    Sperm,
    Pi,
    Sudoku,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    /// Input file
    #[arg(required_unless_present = "check_disjoint")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub input_format: InputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report whether two matrices are disjoint and where they coincide
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub check_disjoint: Option<Vec<PathBuf>>,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InfeasibleSize { .. } => EXIT_INFEASIBLE,
        Error::Inconsistent(_) => EXIT_MISMATCH,
        _ => EXIT_INPUT,
    }
}

fn dispatch(cmd: Command) -> Result<u8> {
    let jobs = match &cmd {
        Command::Classes(a) => a.common.jobs,
        Command::Count(a) => a.common.jobs,
        Command::Verify(a) => a.common.jobs,
        Command::Sample(a) => a.common.jobs,
        Command::Convert(_) => None,
    };
    if let Some(jobs) = jobs {
        // fails only if a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match cmd {
        Command::Classes(a) => cmd_classes(&a),
        Command::Count(a) => cmd_count(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Convert(a) => cmd_convert(&a),
        Command::Sample(a) => cmd_sample(&a),
    }
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn enumeration_limit(common: &Common) -> EnumerationLimit {
    EnumerationLimit {
        allow_large: common.allow_large,
        ..Default::default()
    }
}

fn load_table(common: &Common, force: bool) -> Result<ClassTable> {
    let limit = enumeration_limit(common);
    limit.check(common.n)?;
    if limit.is_large(common.n) {
        eprintln!(
            "warning: n={} is above the default limit {}; enumeration scans 2^{} matrices",
            common.n,
            limit.max_n,
            common.n * common.n
        );
    }
    ClassCache::from_env().load_or_build(common.n, limit, force)
}

fn resolve_seed(seed: Option<u64>) -> Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None if std::env::var(CI_ENV).is_ok_and(|v| !v.is_empty() && v != "0") => {
            Err(Error::parse(
                0,
                format!("{CI_ENV} is set: randomized commands need --seed"),
            ))
        }
        None => Ok(DEFAULT_SEED),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_classes(a: &ClassesArgs) -> Result<u8> {
    let table = load_table(&a.common, a.force)?;
    let n = table.n;
    let n2 = n * n;
    let sums = table.orbit_sums();
    let binomials: Vec<String> = (0..=n2).map(|k| binomial(n2, k).to_string()).collect();
    let sums_ok = sums
        .iter()
        .map(u64::to_string)
        .eq(binomials.iter().cloned());

    let mut shown = table.clone();
    if let Some(k) = a.k {
        shown.classes.retain(|c| c.k == k);
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "n={n} classes: {}", shown.classes.len());
    let _ = writeln!(summary, "per-k classes: {}", join(&table.counts_per_k()));
    let _ = writeln!(
        summary,
        "k-sums: {} {} C({n2},k)",
        join(&sums),
        if sums_ok { "=" } else { "!=" }
    );

    match a.common.format {
        Format::Text => {
            let mut text = summary;
            for c in &shown.classes {
                let _ = writeln!(
                    text,
                    "k={} orbit={} psi=<{}> weight={} canonical={}",
                    c.k,
                    c.orbit_size,
                    join(c.psi.as_slice()),
                    c.weight,
                    c.canonical.to_bit_strings().join("/")
                );
            }
            emit(a.common.output.as_deref(), &text)?;
        }
        Format::Json => {
            eprint!("{summary}");
            emit(a.common.output.as_deref(), &(shown.to_json() + "\n"))?;
        }
        Format::Csv => {
            eprint!("{summary}");
            emit(a.common.output.as_deref(), &shown.to_csv()?)?;
        }
    }
    Ok(if sums_ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_count(a: &CountArgs) -> Result<u8> {
    let table = load_table(&a.common, a.force)?;
    let report = CountReport::from_table(&table)?;
    match a.common.format {
        Format::Text | Format::Csv => {
            emit(
                a.common.output.as_deref(),
                &(report.summary_line(a.places) + "\n"),
            )?;
        }
        Format::Json => emit(
            a.common.output.as_deref(),
            &(report.to_json(a.places) + "\n"),
        )?,
    }
    if report.p.is_none() {
        eprintln!("note: p: {}", Error::UndefinedForN1);
    }
    Ok(EXIT_OK)
}

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn random_mask<R: Rng>(n: usize, rng: &mut R) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, rng.random::<bool>());
        }
    }
    m
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let n = a.common.n;
    let seed = resolve_seed(a.seed)?;
    let table = load_table(&a.common, a.force)?;
    let report = CountReport::from_table(&table)?;
    let sigma = sigma_count(n);
    let mut checks = Vec::new();

    let psi_ok = table
        .classes
        .iter()
        .all(|c| c.psi.vertex_count() == 2 * n && c.psi.degree_sum() == 2 * c.k);
    checks.push(Check::new(
        "psi identities",
        psi_ok,
        "sum psi = 2n, sum i*psi = 2k",
    ));
    let sums_ok = table.check_complete().is_ok();
    checks.push(Check::new(
        "orbit sums",
        sums_ok,
        format!("sum |class| = C({},k)", n * n),
    ));
    checks.push(Check::new(
        "q endpoints",
        report.q[0] == sigma && report.q[n * n] == 1u32.into(),
        format!("q(n,0)={} q(n,n^2)={}", report.q[0], report.q[n * n]),
    ));
    checks.push(Check::new(
        "eta identity",
        &report.eta * 2u32 == &sigma * &report.xi,
        format!("2*{} = {}*{}", report.eta, sigma, report.xi),
    ));

    let limit = OracleLimit { allow_large: false };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if limit.check(n).is_ok() {
        let universe = oracle::PiUniverse::new(n, limit)?;
        let references: Vec<PiMatrix> = if n <= 2 {
            oracle::enumerate_pi(n, limit)?.collect()
        } else {
            (0..a.references)
                .map(|_| random_pi_with(n, &mut rng))
                .collect()
        };
        let counts: Vec<u64> = references
            .iter()
            .map(|r| universe.count_disjoint_with(r))
            .collect::<Result<_>>()?;
        let xi = report.xi.to_string();
        let all_match = counts.iter().all(|c| c.to_string() == xi);
        checks.push(Check::new(
            "fixed-reference",
            all_match && !counts.is_empty(),
            format!(
                "{} references, counts {{{}}} vs formula xi={xi}",
                counts.len(),
                join(&dedup(&counts))
            ),
        ));
        if n <= 2 {
            let handshake: u64 = counts.iter().sum();
            let pairs = universe.count_disjoint_pairs();
            checks.push(Check::new(
                "all-pairs",
                pairs.to_string() == report.eta.to_string(),
                format!(
                    "{pairs} of C({},2) vs formula eta={}",
                    universe.len(),
                    report.eta
                ),
            ));
            checks.push(Check::new(
                "handshake",
                handshake == 2 * pairs,
                format!("sum over references {handshake} = 2*{pairs}"),
            ));
        } else if a.all_pairs {
            let (pairs, elapsed) = oracle::timed(|| universe.count_disjoint_pairs());
            checks.push(Check::new(
                "all-pairs",
                pairs.to_string() == report.eta.to_string(),
                format!(
                    "{pairs} vs formula eta={} ({} ms)",
                    report.eta,
                    elapsed.as_millis()
                ),
            ));
        }
        let mut lemma_ok = true;
        let mut tried = 0;
        for _ in 0..a.masks {
            let reference = random_pi_with(n, &mut rng);
            let mask = random_mask(n, &mut rng);
            let brute = universe.count_agreeing(&reference, &mask)?;
            lemma_ok &= brute == oracle::agreeing_closed_form(&mask);
            tried += 1;
        }
        checks.push(Check::new(
            "agreement",
            lemma_ok,
            format!("{tried} random masks: brute force = prod (n-deg)!"),
        ));
    }

    if n >= 2 && (a.trials.is_some() || limit.check(n).is_err()) {
        let trials = a.trials.unwrap_or(200_000);
        let mc = oracle::monte_carlo_p(n, trials, seed)?;
        let p = report.probability()?;
        let z = mc.z_score(p.to_f64());
        checks.push(Check::new(
            "monte-carlo",
            z.is_some_and(|z| z.abs() <= 4.0),
            format!(
                "{} trials seed {seed}: {:.6} vs {} (z={})",
                trials,
                mc.estimate,
                p.decimal(6),
                z.map_or("undefined".into(), |z| format!("{z:.3}"))
            ),
        ));
    }

    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(
            text,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(
        text,
        "verify n={n}: {passed}/{} checks passed",
        checks.len()
    );
    emit(a.common.output.as_deref(), &text)?;
    Ok(if passed == checks.len() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

fn dedup(v: &[u64]) -> Vec<u64> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn cmd_sample(a: &SampleArgs) -> Result<u8> {
    let n = a.common.n;
    let seed = resolve_seed(a.seed)?;
    let (mc, elapsed) = oracle::timed(|| oracle::monte_carlo_p(n, a.trials, seed));
    let mc = mc?;
    let formula =
        if enumeration_limit(&a.common).check(n).is_ok() && n <= EnumerationLimit::DEFAULT_MAX_N {
            let table = load_table(&a.common, false)?;
            Some(CountReport::from_table(&table)?)
        } else {
            None
        };
    match a.common.format {
        Format::Json => {
            let mut r = OracleResult::new(n, OracleMode::MonteCarlo, mc.disjoint, elapsed);
            r.monte_carlo = Some(mc.clone());
            emit(a.common.output.as_deref(), &(r.to_json() + "\n"))?;
        }
        Format::Text | Format::Csv => {
            let mut text = format!(
                "n={n} trials={} seed={seed} estimate={:.6} ± {} (disjoint={}, equal redraws={})\n",
                mc.trials,
                mc.estimate,
                mc.stderr.map_or("undefined".into(), |s| format!("{s:.6}")),
                mc.disjoint,
                mc.equal_redraws
            );
            if let Some(report) = &formula {
                let p = report.probability()?;
                let z = mc.z_score(p.to_f64());
                let _ = writeln!(
                    text,
                    "formula p={}/{} ≈ {} z={}",
                    p.numer(),
                    p.denom(),
                    p.decimal(6),
                    z.map_or("undefined".into(), |z| format!("{z:.3}"))
                );
            }
            emit(a.common.output.as_deref(), &text)?;
        }
    }
    Ok(EXIT_OK)
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn load_pi(path: &Path, format: InputFormat) -> Result<PiMatrix> {
    let text = read(path)?;
    match format {
        InputFormat::Pi => PiMatrix::from_json(&text),
        InputFormat::Sperm => Ok(sigma_to_pi(&SPermMatrix::from_text(&text)?)),
        InputFormat::Auto if text.trim_start().starts_with('{') => PiMatrix::from_json(&text),
        InputFormat::Auto => Ok(sigma_to_pi(&SPermMatrix::from_text(&text)?)),
        InputFormat::Sudoku => Err(Error::parse(
            0,
            "a Sudoku matrix is not a single S-permutation matrix",
        )),
    }
}

fn cmd_convert(a: &ConvertArgs) -> Result<u8> {
    if let Some(pair) = &a.check_disjoint {
        let p = load_pi(&pair[0], a.input_format)?;
        let q = load_pi(&pair[1], a.input_format)?;
        let coincidences = coincidence_matrix(&p, &q)?;
        let mut text = if coincidences.k() == 0 {
            "disjoint\n".to_string()
        } else {
            let at: Vec<String> = coincidences
                .ones_positions()
                .iter()
                .map(|(i, j)| format!("({},{})", i + 1, j + 1))
                .collect();
            format!("NOT disjoint; coincidences at {}\n", at.join(","))
        };
        text.push_str(&coincidences.to_string());
        emit(a.output.as_deref(), &text)?;
        return Ok(EXIT_OK);
    }

    let input = a.input.as_deref().expect("clap requires input");
    let text = read(input)?;
    let format = match a.input_format {
        InputFormat::Auto if text.trim_start().starts_with('{') => InputFormat::Pi,
        InputFormat::Auto => InputFormat::Sperm,
        f => f,
    };
    let out = match format {
        InputFormat::Pi => pi_to_sigma(&PiMatrix::from_json(&text)?).to_text(),
        InputFormat::Sperm => sigma_to_pi(&SPermMatrix::from_text(&text)?).to_json() + "\n",
        InputFormat::Sudoku => {
            let m = SudokuMatrix::from_text(&text)?;
            let family = decompose_sudoku(&m);
            if compose_sudoku(&family)? != m {
                return Err(Error::Inconsistent(
                    "decomposition does not recompose".into(),
                ));
            }
            family
                .iter()
                .map(SPermMatrix::to_text)
                .collect::<Vec<_>>()
                .join("\n")
        }
        InputFormat::Auto => unreachable!(),
    };
    emit(a.output.as_deref(), &out)?;
    Ok(EXIT_OK)
}
