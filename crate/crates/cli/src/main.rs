//! `cbradial`: Hankel trace norms, Besov norms, sweeps and certificates from the command line.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use cbradial::besov::{besov_b11, peller_disk_l1, QuadratureSpec};
use cbradial::gallery::{
    default_grid, family_symbol, growth_fit, scaled_difference, scaled_symbol, sweep_with,
    FamilySpec, GrowthModel, SweepConfig, SweepTable,
};
use cbradial::hankel::{build_hankel, schatten1};
use cbradial::seqsym::{DiscreteSymbol, Step};
use cbradial::smoothbound::{subordination_check, transfer_checks, InequalityCheck};
use cbradial::toruszd::{a_dst_l1_mc, check_prop44, check_remark_fm1, McConfig};
use cbradial::witness::{empirical_multiplier_lower, required_rank, witness_from_symbol};
use cbradial::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use report::{num, Report, Table};

#[derive(Parser, Debug)]
#[command(name = "cbradial", version, about = "Trace-class and multiplier-norm certificates for radial symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report path; standard output when absent.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "CBRADIAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Quadrature refinement budget.
    #[arg(long, global = true)]
    max_levels: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// A symbol family, either as JSON or as individual flags.
#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// Family name: heat, fejer, bochner_riesz, powerlaw.
    #[arg(long)]
    family: Option<String>,
    /// Full JSON spec `{"family": ..., "params": {...}}`, or `@path` to read one.
    #[arg(long, conflicts_with = "family")]
    spec: Option<String>,
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long)]
    r: Option<f64>,
    /// Complex parameter as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Complex exponent as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Power-law variant: one_plus or max.
    #[arg(long)]
    variant: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace norm of the Hankel matrix of a symbol or its differences.
    Schatten {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 64)]
        size: usize,
        /// 0 for the symbol itself, 1 or 2 for its step difference.
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Dyadic Besov sum and disk integral of the leading coefficients.
    Besov {
        #[command(flatten)]
        family: FamilyArgs,
        /// Number of coefficients kept.
        #[arg(long, default_value_t = 32)]
        len: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Scale sweep with bound functionals at every row.
    Certify {
        #[command(flatten)]
        family: FamilyArgs,
        /// `default` or a comma-separated list of scales.
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long, default_value_t = 256)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Sup-over-scale values for several families and a growth fit.
    Sweep {
        /// JSON array of family specs, or `@path`.
        #[arg(long)]
        specs: String,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        #[arg(long, default_value_t = 256)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        step: u64,
    },
    /// Monte Carlo L1 norms on cubes.
    Torus {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Radial coefficients a_0,a_1,... for the torus comparison.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long, default_value_t = 0.25)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        sep: f64,
    },
    /// Witness vectors on the free group and the Schur certificate.
    Witness {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Tail tolerance that fixes the truncation rank.
        #[arg(long, default_value_t = 1e-10)]
        tail_tol: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Tail, continuity, derivative and inequality checks for one family.
    Check {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        alpha: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    LinearInR,
    LogInN,
    Constant,
    AngleLinearInR,
}

impl From<ModelArg> for GrowthModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::LinearInR => GrowthModel::LinearInR,
            ModelArg::LogInN => GrowthModel::LogInN,
            ModelArg::Constant => GrowthModel::Constant,
            ModelArg::AngleLinearInR => GrowthModel::AngleLinearInR,
        }
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    /// Exit 2, no report.
    Input(anyhow::Error),
    /// Exit 1, report with the error recorded.
    Numerical(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e)
        } else {
            Failure::Input(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn read_arg(text: &str) -> anyhow::Result<String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(text.to_string()),
    }
}

/// Via `Value`: arbitrary-precision numbers do not survive untagged enums when parsed from text directly.
fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> anyhow::Result<T> {
    let value: Value = serde_json::from_str(text)?;
    Ok(serde_json::from_value(value)?)
}

fn complex_json(text: &str) -> anyhow::Result<Value> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("complex value {text:?}"))?;
    match parts.as_slice() {
        [re] => Ok(json!([re, 0.0])),
        [re, im] => Ok(json!([re, im])),
        _ => Err(anyhow!("complex value {text:?} needs one or two numbers")),
    }
}

impl FamilyArgs {
    fn spec(&self) -> anyhow::Result<FamilySpec> {
        let spec: FamilySpec = if let Some(text) = &self.spec {
            parse_json(&read_arg(text)?).context("family spec")?
        } else {
            let name = self.family.as_deref().ok_or_else(|| anyhow!("--family or --spec is required"))?;
            let mut params = Map::new();
            if let Some(n) = self.n {
                params.insert("N".into(), json!(n));
            }
            if let Some(r) = self.r {
                params.insert("r".into(), json!(r));
            }
            if let Some(z) = &self.z {
                params.insert("z".into(), complex_json(z)?);
            }
            if let Some(d) = &self.delta {
                params.insert("delta".into(), complex_json(d)?);
            }
            if let Some(v) = &self.variant {
                params.insert("variant".into(), json!(v));
            }
            serde_json::from_value(json!({ "family": name, "params": params }))
                .with_context(|| format!("family {name:?}"))?
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn step_of(step: u64) -> anyhow::Result<Step> {
    Step::try_from(step).map_err(|e| anyhow!("{e}"))
}

fn quadrature(cli: &Cli) -> anyhow::Result<QuadratureSpec> {
    let mut q = QuadratureSpec::default();
    if let Some(tol) = cli.tol {
        q.target_abs_tol = tol;
    }
    if let Some(levels) = cli.max_levels {
        q.max_refinement_levels = levels;
    }
    q.validate()?;
    Ok(q)
}

fn spec_json(spec: &FamilySpec) -> Value {
    serde_json::to_value(spec).expect("family specs serialize")
}

fn schatten(spec: &FamilySpec, size: usize, step: u64, t: f64) -> Run<Report> {
    if size == 0 {
        return Err(Failure::Input(anyhow!("--size must be positive")));
    }
    let sym: DiscreteSymbol = match step {
        0 => scaled_symbol(spec, t)?,
        s => scaled_difference(spec, t, step_of(s)?)?,
    };
    let s1 = schatten1(&build_hankel(&sym, size)?)?;
    let tail = sym.tail_s1_bound(size).max(0.0);
    let mut table = Table::new(&["size", "step", "t", "s1_lower", "s1_upper", "tail"]);
    table.push(vec![
        json!(size),
        json!(step),
        num(t),
        num(s1),
        num(s1 + tail),
        num(tail),
    ]);
    Ok(Report::new("schatten")
        .input("family", spec_json(spec))
        .input("size", json!(size))
        .input("step", json!(step))
        .input("t", num(t))
        .table(table))
}

fn besov(spec: &FamilySpec, len: usize, t: f64, q: &QuadratureSpec) -> Run<Report> {
    if len == 0 {
        return Err(Failure::Input(anyhow!("--len must be positive")));
    }
    let sym = scaled_symbol(spec, t)?;
    let coeffs = sym.eval_range(0, len as u64 - 1);
    let b11 = besov_b11(&coeffs, q)?;
    let disk = peller_disk_l1(&coeffs, q)?;
    let finite = DiscreteSymbol::finite(coeffs);
    let s1 = schatten1(&build_hankel(&finite, len)?)?;
    let mut table = Table::new(&["quantity", "value", "error"]);
    table.push(vec![json!("besov_b11"), num(b11.value), num(b11.error)]);
    table.push(vec![json!("peller_disk_l1"), num(disk.value), num(disk.error)]);
    table.push(vec![json!("hankel_s1"), num(s1), num(0.0)]);
    Ok(Report::new("besov")
        .input("family", spec_json(spec))
        .input("len", json!(len))
        .input("t", num(t))
        .input("tol", num(q.target_abs_tol))
        .table(table))
}

fn sweep_columns() -> Vec<&'static str> {
    vec![
        "t", "size", "s1_lower", "s1_upper", "bracketing_only", "extended", "alpha", "a", "b",
        "a_disc", "b_disc", "raw34", "raw36", "quadrature_error", "sup_lower", "sup_upper",
    ]
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

fn sweep_table(table: &SweepTable) -> Table {
    let mut out = Table::new(&sweep_columns());
    let (sup_lower, sup_upper) = (table.sup_lower(), table.sup_upper());
    for row in &table.rows {
        let b = row.bounds.as_ref();
        out.push(vec![
            num(row.t),
            json!(row.size),
            num(row.s1_lower),
            num(row.s1_upper),
            json!(row.bracketing_only),
            json!(row.extended),
            opt(b.map(|b| b.alpha)),
            opt(b.map(|b| b.a)),
            opt(b.map(|b| b.b)),
            opt(b.and_then(|b| b.a_disc)),
            opt(b.and_then(|b| b.b_disc)),
            opt(b.map(|b| b.raw34)),
            opt(b.and_then(|b| b.raw36)),
            opt(b.map(|b| b.quadrature_error)),
            num(sup_lower),
            num(sup_upper),
        ]);
    }
    out
}

fn parse_grid(spec: &FamilySpec, grid: &str, size: usize) -> anyhow::Result<Vec<f64>> {
    if grid == "default" {
        return Ok(default_grid(spec, size));
    }
    grid.split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("grid point {p:?}")))
        .collect()
}

fn certify(spec: &FamilySpec, grid: &str, size: usize, step: u64, alpha: Option<f64>) -> Run<Report> {
    let step_v = step_of(step)?;
    let grid_v = parse_grid(spec, grid, size)?;
    let alpha = alpha.or_else(|| spec.default_alpha());
    let cfg = SweepConfig::adaptive(size).with_alpha(alpha);
    let table = sweep_with(spec, &grid_v, step_v, &cfg)?;
    Ok(Report::new("certify")
        .input("family", spec_json(spec))
        .input("grid", json!(grid))
        .input("size", json!(size))
        .input("step", json!(step))
        .input("alpha", opt(alpha))
        .result("endpoint_sup", json!(table.endpoint_sup))
        .table(sweep_table(&table)))
}

fn sweep(specs: &str, model: Option<ModelArg>, size: usize, step: u64) -> Run<Report> {
    let step_v = step_of(step)?;
    let specs: Vec<FamilySpec> =
        parse_json(&read_arg(specs)?).context("family specs")?;
    if specs.is_empty() {
        return Err(Failure::Input(anyhow!("--specs is empty")));
    }
    for s in &specs {
        s.validate()?;
    }
    let tables = specs
        .iter()
        .map(|s| sweep_with(s, &default_grid(s, size), step_v, &SweepConfig::adaptive(size)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Table::new(&["family", "params", "sup_t", "sup_lower", "sup_upper", "endpoint_sup"]);
    for t in &tables {
        let v = spec_json(&t.spec);
        out.push(vec![
            v["family"].clone(),
            json!(v["params"].to_string()),
            num(t.sup_row().t),
            num(t.sup_lower()),
            num(t.sup_upper()),
            json!(t.endpoint_sup),
        ]);
    }
    let mut report = Report::new("sweep")
        .input("specs", Value::Array(specs.iter().map(spec_json).collect()))
        .input("size", json!(size))
        .input("step", json!(step));
    if let Some(m) = model {
        let fit = growth_fit(&tables, m.into())?;
        report = report
            .input("model", json!(format!("{m:?}")))
            .result("coefficient", num(fit.coefficient))
            .result("residual", num(fit.residual));
    }
    Ok(report.table(out))
}

fn torus(
    d: usize,
    coeffs: Option<&str>,
    (s, t): (f64, f64),
    mc: &McConfig,
    q: &QuadratureSpec,
) -> Run<Report> {
    let report = Report::new("torus")
        .input("d", json!(d))
        .input("samples", json!(mc.samples))
        .input("seed", json!(mc.seed))
        .input("sep", num(mc.sep_min));
    let mc_cols = ["quantity", "value", "std_error", "bias_bound", "quadrature_error", "samples", "rejected"];
    let mut table = Table::new(&mc_cols);
    let report = match coeffs {
        Some(text) => {
            let a: Vec<Complex64> = text
                .split(',')
                .map(|p| p.trim().parse::<f64>().map(|v| Complex64::new(v, 0.0)))
                .collect::<Result<_, _>>()
                .map_err(|e| anyhow!("--coeffs: {e}"))?;
            let p44 = check_prop44(&a, d, q, mc)?;
            let fm1 = check_remark_fm1(&a, d, q, mc)?;
            table.push(vec![
                json!("lattice_l1"),
                num(p44.lhs.value),
                num(p44.lhs.std_error),
                num(p44.lhs.bias_bound),
                num(0.0),
                json!(p44.lhs.samples),
                json!(p44.lhs.rejected),
            ]);
            for (name, e) in [("symbol_l1", p44.rhs), ("symmetric_symbol_l1", fm1.rhs)] {
                table.push(vec![
                    json!(name),
                    num(e.value),
                    num(0.0),
                    num(0.0),
                    num(e.error),
                    json!(0),
                    json!(0),
                ]);
            }
            report.input("coeffs", json!(text))
        }
        None => {
            let e = a_dst_l1_mc(s, t, d, mc)?;
            table.push(vec![
                json!("a_dst_l1"),
                num(e.value),
                num(e.std_error),
                num(e.bias_bound),
                num(0.0),
                json!(e.samples),
                json!(e.rejected),
            ]);
            report.input("s", num(s)).input("t", num(t))
        }
    };
    Ok(report.table(table))
}

fn witness(spec: &FamilySpec, radius: usize, tail_tol: f64, trials: usize, seed: u64) -> Run<Report> {
    let (phi, _) = family_symbol(spec)?;
    let k = required_rank(&phi.difference(Step::Two), tail_tol).ok_or_else(|| {
        Error::Refused {
            reason: format!("no rank reaches tail {tail_tol} for {}", phi.description()),
            required: None,
        }
    })?;
    let w = witness_from_symbol(&phi, k, radius)?;
    let residual = w.identity_residual(&phi)?;
    let max_norm = |norm: &dyn Fn(&cbradial::witness::FreeWord) -> cbradial::Result<f64>| {
        w.ball().iter().try_fold(0.0f64, |m, x| Ok::<_, Error>(m.max(norm(x)?)))
    };
    let p_max = max_norm(&|x| w.p_norm(x))?;
    let q_max = max_norm(&|y| w.q_norm(y))?;
    let lower = empirical_multiplier_lower(&phi, radius.min(5), trials, seed)?;
    let mut table = Table::new(&["quantity", "value", "error"]);
    table.push(vec![json!("certificate"), num(w.cert), num(w.tail)]);
    table.push(vec![json!("hankel_s1"), num(w.s1), num(w.tail)]);
    table.push(vec![json!("identity_residual"), num(residual), num(0.0)]);
    table.push(vec![json!("max_p_norm"), num(p_max), num(0.0)]);
    table.push(vec![json!("max_q_norm"), num(q_max), num(0.0)]);
    table.push(vec![json!("empirical_lower"), num(lower), num(0.0)]);
    Ok(Report::new("witness")
        .input("family", spec_json(spec))
        .input("radius", json!(radius))
        .input("tail_tol", num(tail_tol))
        .input("trials", json!(trials))
        .input("seed", json!(seed))
        .result("rank", json!(w.rank))
        .result("ball_size", json!(w.ball().len()))
        .table(table))
}

fn check(spec: &FamilySpec, alpha: Option<f64>) -> Run<Report> {
    let (disc, smooth) = family_symbol(spec)?;
    let mut table = Table::new(&["check", "lhs", "rhs", "error", "holds"]);
    let tail = disc.check_tail((0..2000).chain((11..40).map(|k| 1u64 << k)));
    table.push(vec![
        json!("declared tail"),
        opt(tail.map(|v| v.1)),
        opt(tail.map(|v| v.2)),
        num(0.0),
        json!(tail.is_none()),
    ]);
    if let Some(f) = smooth {
        let alpha = alpha
            .or_else(|| spec.default_alpha())
            .ok_or_else(|| anyhow!("no admissible alpha for this family; pass --alpha"))?;
        let probe = f.continuity_probe();
        // |f(x) − f(0)| must fall by three decades between x = 1e-4 and x = 1e-12
        let (first, last) = (probe[0], probe[probe.len() - 1]);
        let limit = 1e-3 * first;
        table.push(vec![json!("continuity at 0"), num(last), num(limit), num(0.0), json!(last <= limit)]);
        let points: Vec<f64> = (0..24).map(|i| 0.05 * 1.4f64.powi(i)).collect();
        if let Some(m) = f.derivative_mismatch(&points) {
            table.push(vec![json!("derivative mismatch"), num(m), num(1e-4), num(0.0), json!(m <= 1e-4)]);
        }
        let mut checks: Vec<InequalityCheck> = transfer_checks(&f, alpha)?;
        checks.extend(subordination_check(&f, alpha)?.checks());
        for c in checks {
            let holds = c.slack() + c.error >= -1e-7;
            table.push(vec![json!(c.label), num(c.lhs), num(c.rhs), num(c.error), json!(holds)]);
        }
    }
    Ok(Report::new("check")
        .input("family", spec_json(spec))
        .input("alpha", opt(alpha))
        .table(table))
}

fn run(cli: &Cli) -> Run<Report> {
    let q = quadrature(cli)?;
    match &cli.command {
        Command::Schatten { family, size, step, t } => schatten(&family.spec()?, *size, *step, *t),
        Command::Besov { family, len, t } => besov(&family.spec()?, *len, *t, &q),
        Command::Certify { family, grid, size, step, alpha } => {
            certify(&family.spec()?, grid, *size, *step, *alpha)
        }
        Command::Sweep { specs, model, size, step } => sweep(specs, *model, *size, *step),
        Command::Torus { d, coeffs, s, t, samples, sep } => {
            let mc = McConfig {
                samples: *samples,
                seed: cli.seed,
                sep_min: *sep,
            };
            torus(*d, coeffs.as_deref(), (*s, *t), &mc, &q)
        }
        Command::Witness { family, radius, tail_tol, trials } => {
            witness(&family.spec()?, *radius, *tail_tol, *trials, cli.seed)
        }
        Command::Check { family, alpha } => check(&family.spec()?, *alpha),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Schatten { .. } => "schatten",
        Command::Besov { .. } => "besov",
        Command::Certify { .. } => "certify",
        Command::Sweep { .. } => "sweep",
        Command::Torus { .. } => "torus",
        Command::Witness { .. } => "witness",
        Command::Check { .. } => "check",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let started = Instant::now();
    let (report, code) = match run(&cli) {
        Ok(r) => (r, 0),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            (Report::new(command_name(&cli.command)).failure(&e), 1)
        }
    };
    let report = report.input("seed", json!(cli.seed));
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    eprintln!("wall time {:.3}s", started.elapsed().as_secs_f64());
    ExitCode::from(code)
}
