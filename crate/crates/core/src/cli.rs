//! Command-line front end. [`run`] takes the argument list and output
//! streams explicitly so it can be driven from tests.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use crate::analysis::experiments::{
    mdc_density_experiment, model_ratio_experiment, prange_success_experiment, tx_distribution_experiment,
};
use crate::analysis::{bounds_report, cost_report, log2_big};
use crate::channel::{sample_error, unique_cover_rate, ErrorModel, Seed};
use crate::cover::{cover_weight_with_uniqueness, weight_distribution};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::io::{
    parse_hamming_file, parse_instance_file, parse_matrix_file, write_instance_file, write_matrix_file,
    InstanceFile,
};
use crate::limits::EnumCap;
use crate::matspace::MatrixCode;
use crate::prange::{brute_force_decode, prange_decode, DecodeStatus, DecodingInstance};
use crate::reduction::{reduce_codeword_problem, reduce_decoding_problem};

#[derive(Parser, Debug)]
#[command(name = "covermetric", version, about = "Cover-metric codes: weights, decoding, estimates and reductions")]
pub struct Cli {
    /// Worker threads for parallel experiments.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cover weight, minimal cover and uniqueness of a matrix file.
    Weight { file: PathBuf },
    /// Random code, optionally with a planted noisy codeword.
    GenCode(GenCodeArgs),
    /// Random error matrix of a given cover weight.
    GenError(GenErrorArgs),
    /// Decode an instance file.
    Decode(DecodeArgs),
    /// Closed-form cost and bound estimates.
    Estimate(EstimateArgs),
    /// Monte Carlo experiments.
    Simulate(SimulateArgs),
    /// Reduce a Hamming-metric instance to a cover-metric one.
    Reduce(ReduceArgs),
    /// Exact weight distribution by enumeration.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug)]
pub struct Dims {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModelArg {
    Simple,
    General,
}

#[derive(Args, Debug)]
pub struct GenCodeArgs {
    #[command(flatten)]
    pub dims: Dims,
    #[arg(long)]
    pub k: usize,
    /// Plant a codeword plus an error of this cover weight.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value = "simple")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenErrorArgs {
    #[command(flatten)]
    pub dims: Dims,
    #[arg(long)]
    pub t: usize,
    #[arg(long, value_enum, default_value = "simple")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Algo {
    Prange,
    Brute,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "prange")]
    pub algo: Algo,
    #[arg(long)]
    pub max_iter: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides the radius stored in the file.
    #[arg(long)]
    pub radius: Option<usize>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub dims: Dims,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub t: usize,
    /// Rate for the asymptotic constants (default k/(mn)).
    #[arg(long)]
    pub rate: Option<f64>,
    /// Relative radius for the asymptotic constants (default t/n).
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    PrangeSuccess,
    UniqueCover,
    MdcDensity,
    TxDistribution,
    ModelRatio,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub what: What,
    #[command(flatten)]
    pub dims: Dims,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ProblemArg {
    Codeword,
    Decoding,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    pub file: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub dims: Dims,
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    Ok(std::fs::write(path, text)?)
}

fn field_of(q: u64) -> Result<Field> {
    Field::from_order(q)
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| Error::domain(format!("--{name} is required here")))
}

fn model_of(kind: ModelArg, t: usize) -> ErrorModel {
    match kind {
        ModelArg::Simple => ErrorModel::simple(t),
        ModelArg::General => ErrorModel::general(t),
    }
}

/// Writes `text` to `out` when given, else appends it to stdout with the
/// seed as a comment line.
fn emit_file(buf: &mut String, out: Option<&Path>, seed: u64, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            write_file(path, text)?;
            writeln!(buf, "seed {seed}").unwrap();
            writeln!(buf, "wrote {}", path.display()).unwrap();
        }
        None => {
            writeln!(buf, "# seed {seed}").unwrap();
            buf.push_str(text);
        }
    }
    Ok(())
}

fn cmd_weight(file: &Path, buf: &mut String) -> Result<()> {
    let a = parse_matrix_file(&read(file)?)?;
    let mc = cover_weight_with_uniqueness(&a);
    let (tx, ty) = mc.split();
    writeln!(buf, "weight {}", mc.weight).unwrap();
    writeln!(buf, "split {tx} {ty}").unwrap();
    writeln!(buf, "unique {}", mc.unique.unwrap_or(false)).unwrap();
    let lines: Vec<String> = mc.cover.lines(a.rows()).iter().map(|l| l.to_string()).collect();
    writeln!(buf, "lines {}", lines.join(" ")).unwrap();
    Ok(())
}

fn cmd_gen_code(a: &GenCodeArgs, buf: &mut String) -> Result<()> {
    let f = field_of(a.dims.q)?;
    let (m, n) = (a.dims.m, a.dims.n);
    let mut rng = Seed(a.seed).rng();
    let code = MatrixCode::random(&f, m, n, a.k, &mut rng)?;
    let (received, radius) = match a.t {
        None => (None, None),
        Some(t) => {
            let q = f.order() as u16;
            let u: Vec<FieldElement> = (0..a.k).map(|_| FieldElement(rng.gen_range(0..q))).collect();
            let c = code.encode(&u)?;
            let e = sample_error(&f, m, n, &model_of(a.model, t), &mut rng, EnumCap::from_env())?;
            (Some(c.add(&e)?), Some(t))
        }
    };
    let text = write_instance_file(&InstanceFile::from_code(&code, received, radius));
    emit_file(buf, a.out.as_deref(), a.seed, &text)
}

fn cmd_gen_error(a: &GenErrorArgs, buf: &mut String) -> Result<()> {
    let f = field_of(a.dims.q)?;
    let mut rng = Seed(a.seed).rng();
    let e = sample_error(&f, a.dims.m, a.dims.n, &model_of(a.model, a.t), &mut rng, EnumCap::from_env())?;
    emit_file(buf, a.out.as_deref(), a.seed, &write_matrix_file(&e))
}

fn cmd_decode(a: &DecodeArgs, buf: &mut String) -> Result<()> {
    let file = parse_instance_file(&read(&a.file)?)?;
    let code = file.code()?;
    let received = file
        .received
        .clone()
        .ok_or_else(|| Error::domain("instance has no received matrix"))?;
    let radius = a
        .radius
        .or(file.radius)
        .ok_or_else(|| Error::domain("instance has no radius; pass --radius"))?;
    let inst = DecodingInstance::new(code, received, radius)?;
    writeln!(buf, "seed {}", a.seed).unwrap();
    match a.algo {
        Algo::Prange => {
            let out = prange_decode(&inst, a.max_iter, Seed(a.seed))?;
            let status = match out.status {
                DecodeStatus::Found => "found",
                DecodeStatus::IterationBudgetExhausted => "budget-exhausted",
            };
            writeln!(buf, "status {status}").unwrap();
            writeln!(buf, "split {} {}", out.split.erased_rows, out.split.erased_cols).unwrap();
            writeln!(buf, "iterations {}", out.iterations_used).unwrap();
            match out.residual_weight {
                Some(w) => writeln!(buf, "residual {w}").unwrap(),
                None => writeln!(buf, "residual none").unwrap(),
            }
            if let Some(c) = out.codeword {
                writeln!(buf, "codeword").unwrap();
                write!(buf, "{c}").unwrap();
            }
        }
        Algo::Brute => {
            let list = brute_force_decode(&inst, EnumCap::from_env())?;
            writeln!(buf, "status {}", if list.is_empty() { "none" } else { "found" }).unwrap();
            writeln!(buf, "candidates {}", list.len()).unwrap();
            for c in &list {
                let residual = crate::cover::weight(&inst.received.sub(c)?);
                writeln!(buf, "codeword residual {residual}").unwrap();
                write!(buf, "{c}").unwrap();
            }
        }
    }
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.6}"))
}

fn cmd_estimate(a: &EstimateArgs, buf: &mut String) -> Result<()> {
    let f = field_of(a.dims.q)?;
    let q = a.dims.q;
    let (m, n, k, t) = (a.dims.m, a.dims.n, a.k, a.t);
    let cost = cost_report(q, m, n, k, t)?;
    let rate = a.rate.unwrap_or(cost.rate);
    let tau = a.tau.unwrap_or(cost.tau);
    let (c_prange, c_prange_gv, c_cover, c_cover_gv) = if a.rate.is_some() || a.tau.is_some() {
        use crate::analysis::{c_cover as cc, c_cover_gv as ccg, c_prange as cp, c_prange_gv as cpg};
        (cp(rate, tau).ok(), cpg(q, rate).ok(), cc(rate, tau).ok(), ccg(rate).ok())
    } else {
        (cost.c_prange, cost.c_prange_gv, cost.c_cover, cost.c_cover_gv)
    };
    let s = &cost.success;
    let mut rows: Vec<(String, String)> = vec![
        ("q".into(), q.to_string()),
        ("m".into(), m.to_string()),
        ("n".into(), n.to_string()),
        ("k".into(), k.to_string()),
        ("t".into(), t.to_string()),
        ("erased_rows".into(), s.split.erased_rows.to_string()),
        ("erased_cols".into(), s.split.erased_cols.to_string()),
        ("p_success".into(), s.p_success.to_string()),
        ("p_success_f64".into(), format!("{:.6e}", s.p_f64())),
        ("p_success_lower".into(), format!("{:.6e}", s.lower_f64())),
        ("p_success_upper".into(), format!("{:.6e}", s.upper_f64())),
        ("expected_iterations".into(), format!("{:.6e}", s.expected_iterations)),
        ("log2_iterations".into(), format!("{:.6}", s.log2_inverse())),
        ("rate".into(), format!("{rate:.6}")),
        ("tau".into(), format!("{tau:.6}")),
        ("c_prange".into(), fmt_opt(c_prange)),
        ("c_prange_gv".into(), fmt_opt(c_prange_gv)),
        ("c_cover".into(), fmt_opt(c_cover)),
        ("c_cover_gv".into(), fmt_opt(c_cover_gv)),
        (
            "minrank_log_q_solutions".into(),
            cost.minrank.expected_solutions_exponent.to_string(),
        ),
        ("minrank_grs_exponent".into(), format!("{:.6}", cost.minrank.grs_exponent)),
        ("bardet_lower_log2".into(), format!("{:.6}", cost.minrank.bardet_lower_log2)),
        ("prange_upper_log2".into(), format!("{:.6}", cost.minrank.prange_upper_log2)),
        ("cover_check_cost".into(), cost.minrank.cover_check_cost.to_string()),
        ("stern_list_log2".into(), format!("{:.6}", cost.stern.list_log2)),
        ("stern_bound_log2".into(), format!("{:.6}", cost.stern.bound_log2)),
    ];
    if t >= 1 {
        let b = bounds_report(&f, m, n, t, EnumCap::from_env())?;
        rows.extend([
            ("singleton_k_max".into(), b.singleton_k_max.to_string()),
            ("ball_lower_log2".into(), format!("{:.6}", log2_big(&b.ball.lower))),
            ("ball_upper_log2".into(), format!("{:.6}", b.ball.upper_log2)),
            ("sphere_lower".into(), b.sphere_lower.to_string()),
            ("gv_rate_lower".into(), format!("{:.6}", b.gv_rate_lower)),
            ("exact_ball".into(), b.exact_ball.map_or("n/a".into(), |v| v.to_string())),
            ("exact_sphere".into(), b.exact_sphere.map_or("n/a".into(), |v| v.to_string())),
        ]);
    }
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (key, value) in &rows {
        writeln!(buf, "{key:<width$}  {value}").unwrap();
    }
    if let Some(path) = &a.csv {
        let mut csv = String::from("name,value\n");
        for (key, value) in &rows {
            writeln!(csv, "{key},{value}").unwrap();
        }
        write_file(path, &csv)?;
    }
    Ok(())
}

struct SimRecord {
    empirical: f64,
    theoretical: Option<f64>,
}

fn cmd_simulate(a: &SimulateArgs, buf: &mut String) -> Result<()> {
    let f = field_of(a.dims.q)?;
    let (m, n) = (a.dims.m, a.dims.n);
    if a.trials == 0 {
        return Err(Error::domain("trials must be positive"));
    }
    let seed = Seed(a.seed);
    writeln!(buf, "seed {}", a.seed).unwrap();
    writeln!(buf, "trials {}", a.trials).unwrap();
    let rec = match a.what {
        What::PrangeSuccess => {
            let (k, t) = (need(a.k, "k")?, need(a.t, "t")?);
            let r = prange_success_experiment(&f, m, n, k, t, a.trials, seed)?;
            writeln!(buf, "info_blocks {}", r.info_blocks).unwrap();
            writeln!(buf, "found {}", r.found).unwrap();
            writeln!(buf, "error_free_blocks {}", r.error_free_blocks).unwrap();
            writeln!(buf, "rate {:.6}", r.rate).unwrap();
            writeln!(buf, "conditional_rate {:.6}", r.conditional_rate).unwrap();
            writeln!(buf, "error_free_rate {:.6}", r.error_free_blocks as f64 / r.trials as f64).unwrap();
            writeln!(buf, "p_success {:.6}", r.predicted).unwrap();
            SimRecord {
                empirical: r.conditional_rate,
                theoretical: Some(r.predicted),
            }
        }
        What::UniqueCover => {
            let t = need(a.t, "t")?;
            let r = unique_cover_rate(&f, m, n, t, a.trials, seed)?;
            writeln!(buf, "unique {}", r.unique).unwrap();
            writeln!(buf, "rate {:.6}", r.rate).unwrap();
            writeln!(buf, "lower_bound {:.6}", r.mean_lower_bound).unwrap();
            SimRecord {
                empirical: r.rate,
                theoretical: Some(r.mean_lower_bound),
            }
        }
        What::MdcDensity => {
            let k = need(a.k, "k")?;
            let r = mdc_density_experiment(&f, m, n, k, a.trials, seed, EnumCap::from_env())?;
            writeln!(buf, "target_distance {}", r.target_distance).unwrap();
            writeln!(buf, "hits {}", r.hits).unwrap();
            writeln!(buf, "fraction {:.6}", r.fraction).unwrap();
            SimRecord {
                empirical: r.fraction,
                theoretical: None,
            }
        }
        What::TxDistribution => {
            let t = need(a.t, "t")?;
            let r = tx_distribution_experiment(&f, m, n, t, a.trials, seed)?;
            let obs: Vec<String> = r.observed.iter().map(|x| x.to_string()).collect();
            let exp: Vec<String> = r.expected.iter().map(|x| format!("{x:.1}")).collect();
            writeln!(buf, "observed {}", obs.join(" ")).unwrap();
            writeln!(buf, "expected {}", exp.join(" ")).unwrap();
            writeln!(buf, "chi_square {:.6}", r.statistic).unwrap();
            writeln!(buf, "dof {}", r.dof).unwrap();
            writeln!(buf, "p_value {:.6}", r.p_value).unwrap();
            SimRecord {
                empirical: r.statistic,
                theoretical: Some(r.p_value),
            }
        }
        What::ModelRatio => {
            let t = need(a.t, "t")?;
            let r = model_ratio_experiment(&f, m, n, t, a.trials, seed)?;
            writeln!(buf, "identity_hits {}", r.identity_hits).unwrap();
            writeln!(buf, "ones_hits {}", r.ones_hits).unwrap();
            writeln!(buf, "ratio {:.6}", r.ratio).unwrap();
            writeln!(buf, "std_error {:.6}", r.std_error).unwrap();
            writeln!(buf, "two_pow_t {}", r.claimed).unwrap();
            writeln!(buf, "exact_ratio {}", r.exact).unwrap();
            SimRecord {
                empirical: r.ratio,
                theoretical: Some(r.claimed),
            }
        }
    };
    if let Some(path) = &a.csv {
        let name = a.what.to_possible_value().unwrap().get_name().to_string();
        let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        let mut csv = String::from("what,q,m,n,k,t,empirical,theoretical,trials,seed\n");
        writeln!(
            csv,
            "{name},{},{m},{n},{},{},{:.6},{},{},{}",
            a.dims.q,
            opt(a.k),
            opt(a.t),
            rec.empirical,
            rec.theoretical.map_or(String::new(), |x| format!("{x:.6}")),
            a.trials,
            a.seed
        )
        .unwrap();
        write_file(path, &csv)?;
    }
    Ok(())
}

fn cmd_reduce(a: &ReduceArgs, buf: &mut String) -> Result<()> {
    let h = parse_hamming_file(&read(&a.file)?)?;
    let reduced = match a.problem {
        ProblemArg::Codeword => reduce_codeword_problem(&h),
        ProblemArg::Decoding => reduce_decoding_problem(&h)?,
    };
    let text = write_instance_file(&InstanceFile::from_reduced(&reduced));
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            writeln!(buf, "dims {} {} {}", reduced.m(), reduced.n(), reduced.generators.len()).unwrap();
            writeln!(buf, "wrote {}", path.display()).unwrap();
        }
        None => buf.push_str(&text),
    }
    Ok(())
}

fn cmd_enumerate(a: &EnumerateArgs, buf: &mut String) -> Result<()> {
    let f = field_of(a.dims.q)?;
    let dist = weight_distribution(&f, a.dims.m, a.dims.n, EnumCap::from_env())?;
    writeln!(buf, "weight sphere ball").unwrap();
    let mut ball = 0u64;
    for (w, c) in dist.iter().enumerate() {
        ball += c;
        writeln!(buf, "{w} {c} {ball}").unwrap();
    }
    Ok(())
}

fn dispatch(cli: &Cli, buf: &mut String) -> Result<()> {
    match &cli.command {
        Command::Weight { file } => cmd_weight(file, buf),
        Command::GenCode(a) => cmd_gen_code(a, buf),
        Command::GenError(a) => cmd_gen_error(a, buf),
        Command::Decode(a) => cmd_decode(a, buf),
        Command::Estimate(a) => cmd_estimate(a, buf),
        Command::Simulate(a) => cmd_simulate(a, buf),
        Command::Reduce(a) => cmd_reduce(a, buf),
        Command::Enumerate(a) => cmd_enumerate(a, buf),
    }
}

/// Exit code for an error: 2 for I/O, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let first = text.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(err, "{first}");
                    1
                }
            };
        }
    };
    let mut buf = String::new();
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut buf)),
            Err(e) => Err(Error::domain(e.to_string())),
        },
        None => dispatch(&cli, &mut buf),
    };
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
