//! The `mathieu-kit` command line.

pub mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mathieu_core::dist::MathieuDistribution;
use mathieu_core::ineq::{self, Grid, Suite};
use mathieu_core::quadrature::{eval_remark3, eval_theorem1, eval_theorem2, QuadratureSpec};
use mathieu_core::series::{
    eval_phi_star_difference, eval_series, eval_via_mittag_leffler, SequenceSpec, SeriesParams,
};
use mathieu_core::{Error, EvalResult, Method};

use output::{inputs, write_checks, write_records, CheckRow, Format, OutputRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mathieu-kit",
    version,
    about = "Generalized Mathieu series: evaluation, route comparison, inequality checks and the Mathieu distribution"
)]
pub struct Cli {
    /// Output format. CSV has a fixed header per command; floats carry 17
    /// significant digits.
    #[arg(long, value_enum, default_value = "plain", global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the series by one route.
    Eval {
        #[command(flatten)]
        point: PointArgs,
        /// series | theorem1 | remark3 | theorem2 | mittag-leffler | phi-star
        #[arg(long, default_value = "series")]
        method: Method,
    },
    /// Evaluate by several routes and report the largest pairwise deviation.
    Compare {
        #[command(flatten)]
        point: PointArgs,
        /// Comma-separated list of at least two methods.
        #[arg(long, value_delimiter = ',', required = true)]
        methods: Vec<Method>,
    },
    /// Run inequality check suites.
    Check {
        /// all | monotone | logconvex | 001 | 002 | re1 | turan | zzkk | mm | wilkins
        #[arg(long, default_value = "all")]
        suite: String,
        /// Grid overrides, e.g. "alpha=2;mu=4;nu=1;r=0.5,1". Keys: alpha,
        /// beta, mu, nu, z, r, x, h, order, lambda. Default r grid:
        /// 0.1,0.5,1,2,5,10.
        #[arg(long)]
        grid: Option<String>,
        /// Worker threads (0 = one per core).
        #[arg(long, env = "MATHIEU_KIT_JOBS", default_value_t = 0)]
        jobs: usize,
    },
    /// Query the Mathieu distribution P(X = n) ∝ n^β (ν)_n / ((n^α + r²)^μ n!).
    Dist {
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Defaults to alpha.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long)]
        r: f64,
        /// Absolute tolerance of the normalizing series.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(subcommand)]
        action: DistAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum DistAction {
    /// P(X = n).
    Pmf { n: u64 },
    /// Mean and variance.
    Moments,
    /// Characteristic function E[e^{itX}].
    Cf {
        #[arg(allow_negative_numbers = true)]
        t: f64,
    },
    /// Draw samples, one integer per line.
    Sample {
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub z: f64,
    /// Sequence a_n: power:GAMMA (a_n = n^GAMMA), gamma:GAMMA,DELTA
    /// (a_n = Γ(GAMMA·n + DELTA)) or table:PATH (one positive value per
    /// line, strictly increasing).
    #[arg(long, default_value = "power:1")]
    pub seq: String,
    /// Growth exponent assumed past the end of a table sequence.
    #[arg(long, default_value_t = 1.0)]
    pub tail_exponent: f64,
    /// Target accuracy: absolute for series routes, relative for
    /// quadrature routes.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Outer truncation for the Mittag-Leffler route.
    #[arg(long, default_value_t = 400)]
    pub m_max: usize,
}

/// A failure that ends the command with a given exit status.
#[derive(Debug)]
pub struct Failure {
    pub status: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        // Parameter and guard violations are usage errors; a numerical
        // failure at valid parameters is a plain failure.
        Failure {
            status: if e.is_parameter_error() {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            status: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: EXIT_USAGE,
        message: message.into(),
    }
}

pub fn parse_sequence(spec: &str, tail_exponent: f64) -> Result<SequenceSpec, Failure> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("bad sequence `{spec}`")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("bad number `{s}` in sequence `{spec}`")))
    };
    let seq = match kind {
        "power" => SequenceSpec::PowerOfIndex { gamma: num(rest)? },
        "gamma" => {
            let (g, d) = rest
                .split_once(',')
                .ok_or_else(|| usage("gamma sequence needs GAMMA,DELTA"))?;
            SequenceSpec::GammaArithmetic {
                gamma: num(g)?,
                delta: num(d)?,
            }
        }
        "table" => {
            let text = std::fs::read_to_string(PathBuf::from(rest))
                .map_err(|e| usage(format!("cannot read sequence table `{rest}`: {e}")))?;
            let values = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(num)
                .collect::<Result<Vec<_>, _>>()?;
            SequenceSpec::ExplicitTable {
                values,
                tail_exponent,
            }
        }
        _ => return Err(usage(format!("unknown sequence kind `{kind}`"))),
    };
    seq.validate()?;
    Ok(seq)
}

impl PointArgs {
    fn params(&self) -> Result<SeriesParams, Failure> {
        Ok(SeriesParams::new(
            self.alpha, self.beta, self.mu, self.nu, self.r, self.z,
        )?)
    }

    fn inputs(&self) -> String {
        inputs(&[
            ("alpha", self.alpha.to_string()),
            ("beta", self.beta.to_string()),
            ("mu", self.mu.to_string()),
            ("nu", self.nu.to_string()),
            ("r", self.r.to_string()),
            ("z", self.z.to_string()),
            ("seq", self.seq.clone()),
            ("tol", format!("{:e}", self.tol)),
        ])
    }
}

fn quad_spec(tol: f64) -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(tol, (0.01 * tol).max(1e-15))
}

fn evaluate(method: Method, p: &PointArgs) -> Result<EvalResult, Failure> {
    let params = p.params()?;
    let seq = parse_sequence(&p.seq, p.tail_exponent)?;
    let res = match method {
        Method::Series => eval_series(&params, &seq, p.tol)?,
        Method::Theorem1 => eval_theorem1(&params, &seq, &quad_spec(p.tol))?,
        Method::Remark3 => {
            let gamma = match seq {
                SequenceSpec::PowerOfIndex { gamma } => gamma,
                _ => return Err(usage("remark3 needs a power sequence a_n = n^(q/alpha)")),
            };
            let q = gamma * params.alpha;
            if !((q - q.round()).abs() < 1e-12 && q.round() >= 1.0) {
                return Err(usage(format!(
                    "remark3 needs gamma*alpha to be a positive integer q, got {q}"
                )));
            }
            eval_remark3(q.round() as u32, &params, &quad_spec(p.tol))?
        }
        Method::Theorem2 => {
            if params.mu != 1.5 || params.nu != 1.0 || params.z != 1.0 {
                return Err(usage("theorem2 applies only at mu = 1.5, nu = 1, z = 1"));
            }
            eval_theorem2(params.alpha, params.beta, &seq, params.r, &quad_spec(p.tol))?
        }
        Method::MittagLeffler => eval_via_mittag_leffler(&params, &seq, p.m_max, p.tol)?,
        Method::PhiStar => {
            if params.alpha != 2.0
                || params.beta != 1.0
                || params.mu != 2.0
                || seq != SequenceSpec::index()
            {
                return Err(usage(
                    "phi-star applies only at alpha = 2, beta = 1, mu = 2, a_n = n",
                ));
            }
            eval_phi_star_difference(params.nu, params.r, params.z, p.tol)?
        }
        other => return Err(usage(format!("`{other}` is not an evaluation method"))),
    };
    Ok(res)
}

fn record(command: &str, inputs: String, method: &str, r: &EvalResult, ms: f64) -> OutputRecord {
    OutputRecord {
        command: command.into(),
        inputs,
        method: method.into(),
        value_re: Some(r.value),
        value_im: None,
        error_bound: Some(r.abs_error_bound),
        terms: Some(r.terms_used as u64),
        note: String::new(),
        wall_time_ms: ms,
    }
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn cmd_eval<W: Write>(
    out: W,
    format: Format,
    point: &PointArgs,
    method: Method,
) -> Result<i32, Failure> {
    let t = Instant::now();
    let r = evaluate(method, point)?;
    let rec = record("eval", point.inputs(), method.as_str(), &r, elapsed_ms(t));
    write_records(out, format, &[rec])?;
    Ok(EXIT_OK)
}

fn cmd_compare<W: Write>(
    out: W,
    format: Format,
    point: &PointArgs,
    methods: &[Method],
) -> Result<i32, Failure> {
    if methods.len() < 2 {
        return Err(usage("compare needs at least two methods"));
    }
    let mut rows = Vec::new();
    let mut ok: Vec<EvalResult> = Vec::new();
    for &m in methods {
        let t = Instant::now();
        match evaluate(m, point) {
            Ok(r) => {
                rows.push(record(
                    "compare",
                    point.inputs(),
                    m.as_str(),
                    &r,
                    elapsed_ms(t),
                ));
                ok.push(r);
            }
            Err(f) => rows.push(OutputRecord {
                command: "compare".into(),
                inputs: point.inputs(),
                method: m.as_str().into(),
                value_re: None,
                value_im: None,
                error_bound: None,
                terms: None,
                note: format!("inapplicable: {}", f.message),
                wall_time_ms: elapsed_ms(t),
            }),
        }
    }
    if ok.len() < 2 {
        write_records(out, format, &rows)?;
        return Err(usage("fewer than two methods apply at this point"));
    }
    // Largest deviation, and the largest excess of a deviation over its
    // pair's combined budget.
    let mut dev = 0.0f64;
    let mut budget = 0.0f64;
    let mut exceeded = false;
    for (i, a) in ok.iter().enumerate() {
        for b in &ok[i + 1..] {
            let d = (a.value - b.value).abs();
            let e = a.abs_error_bound + b.abs_error_bound;
            if d > dev {
                dev = d;
                budget = e;
            }
            exceeded |= d > e;
        }
    }
    rows.push(OutputRecord {
        command: "compare".into(),
        inputs: point.inputs(),
        method: "max-deviation".into(),
        value_re: Some(dev),
        value_im: None,
        error_bound: Some(budget),
        terms: None,
        note: if exceeded {
            "deviation exceeds combined error budget".into()
        } else {
            "within combined error budgets".into()
        },
        wall_time_ms: 0.0,
    });
    write_records(out, format, &rows)?;
    Ok(if exceeded { EXIT_FAIL } else { EXIT_OK })
}

/// Applies `key=v1,v2;key=v3` overrides to a grid.
pub fn apply_grid(grid: &mut Grid, spec: &str) -> Result<(), Failure> {
    for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("bad grid entry `{part}`")))?;
        let vals = v
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| usage(format!("bad number `{x}` in grid entry `{part}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let single = || {
            if vals.len() == 1 {
                Ok(vals[0])
            } else {
                Err(usage(format!("grid key `{k}` takes a single value")))
            }
        };
        match k.trim() {
            "alpha" => grid.alpha = vals,
            "beta" => grid.beta = vals,
            "mu" => grid.mu = vals,
            "nu" => grid.nu = vals,
            "z" => grid.z = vals,
            "r" => grid.r = vals,
            "x" => grid.x = vals,
            "lambda" => grid.lambda = vals,
            "h" => grid.h = single()?,
            "order" => grid.order_max = single()? as usize,
            other => return Err(usage(format!("unknown grid key `{other}`"))),
        }
    }
    Ok(())
}

fn cmd_check<W: Write>(
    mut out: W,
    mut summary: impl Write,
    format: Format,
    suite: &str,
    grid: Option<&str>,
    jobs: usize,
) -> Result<i32, Failure> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(suite).map_err(|e| usage(e.to_string()))?]
    };
    let mut plan = Vec::new();
    for s in suites {
        let mut g = Grid::default_for(s);
        if let Some(spec) = grid {
            apply_grid(&mut g, spec)?;
        }
        plan.push((s, g));
    }
    let reports = ineq::run_suites(&plan, jobs)?;
    let rows: Vec<CheckRow> = reports.iter().map(CheckRow::from).collect();
    write_checks(&mut out, format, &rows)?;
    let (pass, fail, inconclusive) = ineq::tally(&reports);
    let line = format!(
        "summary: {} checks, {pass} pass, {fail} fail, {inconclusive} inconclusive",
        reports.len()
    );
    if format == Format::Plain {
        writeln!(out, "{line}")?;
    } else {
        writeln!(summary, "{line}")?;
    }
    Ok(if fail > 0 { EXIT_FAIL } else { EXIT_OK })
}

#[allow(clippy::too_many_arguments)]
fn cmd_dist<W: Write>(
    mut out: W,
    format: Format,
    alpha: f64,
    beta: Option<f64>,
    mu: f64,
    nu: f64,
    r: f64,
    tol: f64,
    action: &DistAction,
) -> Result<i32, Failure> {
    let beta = beta.unwrap_or(alpha);
    let t0 = Instant::now();
    let d = MathieuDistribution::new(alpha, beta, mu, nu, r, tol)?;
    let base = vec![
        ("alpha", alpha.to_string()),
        ("beta", beta.to_string()),
        ("mu", mu.to_string()),
        ("nu", nu.to_string()),
        ("r", r.to_string()),
    ];
    let with = |extra: Option<(&'static str, String)>| {
        let mut v = base.clone();
        v.extend(extra);
        inputs(&v)
    };
    let rows = match action {
        DistAction::Pmf { n } => {
            let p = d.pmf(*n)?;
            vec![OutputRecord {
                command: "dist".into(),
                inputs: with(Some(("n", n.to_string()))),
                method: "pmf".into(),
                value_re: Some(p),
                value_im: None,
                error_bound: Some(p * d.norm_error / d.normalizer + 8.0 * f64::EPSILON * p),
                terms: None,
                note: String::new(),
                wall_time_ms: elapsed_ms(t0),
            }]
        }
        DistAction::Moments => {
            let m = d.mean()?;
            let v = d.variance()?;
            let ms = elapsed_ms(t0);
            vec![
                record("dist", with(None), "mean", &m, ms),
                record("dist", with(None), "variance", &v, ms),
            ]
        }
        DistAction::Cf { t } => {
            let c = d.charfn(*t, tol)?;
            vec![OutputRecord {
                command: "dist".into(),
                inputs: with(Some(("t", t.to_string()))),
                method: "cf".into(),
                value_re: Some(c.value.re),
                value_im: Some(c.value.im),
                error_bound: Some(c.abs_error_bound),
                terms: Some(c.terms_used as u64),
                note: String::new(),
                wall_time_ms: elapsed_ms(t0),
            }]
        }
        DistAction::Sample { count, seed } => {
            for x in d.sample(*count, *seed) {
                writeln!(out, "{x}")?;
            }
            return Ok(EXIT_OK);
        }
    };
    write_records(out, format, &rows)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command line, writing results to `out` and diagnostics to
/// `err`. Returns the exit status.
pub fn run(cli: &Cli, mut out: impl Write, mut err: impl Write) -> i32 {
    let res = match &cli.command {
        Command::Eval { point, method } => cmd_eval(&mut out, cli.format, point, *method),
        Command::Compare { point, methods } => cmd_compare(&mut out, cli.format, point, methods),
        Command::Check { suite, grid, jobs } => cmd_check(
            &mut out,
            &mut err,
            cli.format,
            suite,
            grid.as_deref(),
            *jobs,
        ),
        Command::Dist {
            alpha,
            beta,
            mu,
            nu,
            r,
            tol,
            action,
        } => cmd_dist(
            &mut out, cli.format, *alpha, *beta, *mu, *nu, *r, *tol, action,
        ),
    };
    match res {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}
