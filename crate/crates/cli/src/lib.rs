//! Command-line frontend for isoframe.
//!
//! [`run`] parses an argument vector, dispatches to the library and returns
//! the exit code with the text destined for stdout and stderr.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use isoframe::arith;
use isoframe::convexity::{self, ConvexityKind, SetCheck};
use isoframe::differential;
use isoframe::exprparse::{self, Bindings};
use isoframe::integral;
use isoframe::means::{self, Weights};
use isoframe::plotgen::{self, PlotFormat};
use isoframe::{Error, ErrorCategory, Frame2D, Interval, Mapping, QuadConfig, RealFn};

/// Environment variable that overrides the quadrature tolerance.
pub const TOLERANCE_VAR: &str = "ISOFRAME_QUAD_TOL";

#[derive(Debug, Parser)]
#[command(name = "isoframe", version, about = "Calculus through pairs of monotone mappings")]
struct Cli {
    /// Print only the bare result.
    #[arg(long, global = true)]
    plain: bool,
    /// Named constant for expressions, as NAME=VALUE.
    #[arg(long = "let", value_name = "NAME=VALUE", global = true)]
    bindings: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Isomorphic arithmetic on numbers.
    Arith(ArithArgs),
    /// Weighted isomorphic mean of numbers.
    MeanNumbers(MeanNumbersArgs),
    /// Isomorphic mean of a function on an interval.
    MeanFunction(MeanFunctionArgs),
    /// Dual or metrical derivative at a point.
    Derive(DeriveArgs),
    /// Isomorphic integrals.
    Integrate(IntegrateArgs),
    /// DVI convexity classification.
    Convexity(ConvexityArgs),
    /// Randomized isomorphic convex-set check.
    ConvexSet(ConvexSetArgs),
    /// Ordering of two quasi-arithmetic means.
    CompareMeans(CompareArgs),
    /// Quasi-Stolarsky mean of two positive numbers.
    Stolarsky(StolarskyArgs),
    /// Cauchy mean value of two numbers.
    CauchyMean(CauchyArgs),
    /// Plot data on the auxiliary plane.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ArithOp {
    Add,
    Sub,
    Mul,
    Div1,
    Div2,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ArithArgs {
    op: ArithOp,
    #[arg(long)]
    g: String,
    #[arg(required = true)]
    operands: Vec<String>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct MeanNumbersArgs {
    #[arg(long)]
    g: String,
    /// Comma-separated positive weights; equal weights when omitted.
    #[arg(long)]
    weights: Option<String>,
    #[arg(required = true)]
    xs: Vec<String>,
}

#[derive(Debug, Args)]
struct Span {
    /// Interval `a,b`; `inf`, `-inf`, `pi` and `e` are accepted.
    #[arg(long, allow_hyphen_values = true)]
    interval: String,
    #[arg(long)]
    open_lo: bool,
    #[arg(long)]
    open_hi: bool,
}

#[derive(Debug, Args)]
struct MeanFunctionArgs {
    #[arg(long)]
    f: String,
    #[arg(long, default_value = "id")]
    g: String,
    #[arg(long, default_value = "id")]
    h: String,
    #[command(flatten)]
    span: Span,
    /// Report the composite class-V mean `f⁻¹(M_x|g, h∘f)` instead.
    #[arg(long)]
    composite_v: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct DeriveArgs {
    #[arg(long)]
    f: String,
    #[arg(long, default_value = "id")]
    g: String,
    #[arg(long, default_value = "id")]
    h: String,
    #[arg(long, allow_hyphen_values = true)]
    at: String,
    /// Map the dual derivative back through `h⁻¹`.
    #[arg(long)]
    metrical: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IntegralType {
    #[value(name = "1")]
    First,
    #[value(name = "2")]
    Second,
    Geometric,
    Elastic,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    #[arg(long = "type")]
    kind: IntegralType,
    #[arg(long)]
    f: String,
    #[command(flatten)]
    span: Span,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    h: Option<String>,
}

#[derive(Debug, Args)]
struct ConvexityArgs {
    #[arg(long)]
    f: String,
    #[arg(long, default_value = "id")]
    g: String,
    #[arg(long, default_value = "id")]
    h: String,
    #[command(flatten)]
    span: Span,
    /// Number of random trials for the inequality check.
    #[arg(long)]
    verify: Option<usize>,
    #[arg(long, default_value_t = convexity::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Dim {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Args)]
struct ConvexSetArgs {
    #[arg(long)]
    dim: Dim,
    /// Comparisons in `x` (and `y`) joined by `&&`.
    #[arg(long, allow_hyphen_values = true)]
    predicate: String,
    #[arg(long)]
    g: String,
    #[arg(long)]
    g2: Option<String>,
    #[arg(long, default_value_t = convexity::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = convexity::DEFAULT_SEED)]
    seed: u64,
    /// Sampling range for `x`; defaults to the domain of `g`.
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    /// Sampling range for `y`; defaults to the domain of the second mapping.
    #[arg(long, allow_hyphen_values = true)]
    region2: Option<String>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    g: String,
    #[arg(long)]
    h: String,
    #[command(flatten)]
    span: Span,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct StolarskyArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    a: String,
    b: String,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CauchyArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
    x1: String,
    x2: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    f: String,
    #[arg(long, default_value = "id")]
    g: String,
    #[arg(long, default_value = "id")]
    h: String,
    #[command(flatten)]
    span: Span,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: PathBuf,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// JSON document printed on success.
#[derive(Debug, Serialize)]
struct Report {
    value: Value,
    class: Option<String>,
    flags: Map<String, Value>,
    diagnostics: Vec<String>,
}

impl Report {
    fn new(value: Value) -> Self {
        Report {
            value,
            class: None,
            flags: Map::new(),
            diagnostics: Vec::new(),
        }
    }

    fn flag(mut self, key: &str, v: Value) -> Self {
        self.flags.insert(key.to_string(), v);
        self
    }

    fn plain(&self) -> String {
        match &self.value {
            Value::String(s) => s.clone(),
            Value::Number(n) => match n.as_f64() {
                Some(v) => format!("{v}"),
                None => n.to_string(),
            },
            other => other.to_string(),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e.category() {
        ErrorCategory::Usage => 2,
        ErrorCategory::Domain => 3,
        ErrorCategory::Numeric => 4,
    }
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let stdout = if cli.plain {
                format!("{}\n", report.plain())
            } else {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                format!("{text}\n")
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn quad_config() -> Result<QuadConfig, Error> {
    match std::env::var(TOLERANCE_VAR) {
        Ok(text) => {
            let tol: f64 = text
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{TOLERANCE_VAR}={text} is not a number")))?;
            QuadConfig::with_tolerance(tol)
        }
        Err(_) => Ok(QuadConfig::default()),
    }
}

struct Ctx {
    bindings: Bindings,
    cfg: QuadConfig,
}

impl Ctx {
    fn number(&self, text: &str) -> Result<f64, Error> {
        match text.trim() {
            "inf" | "+inf" => return Ok(f64::INFINITY),
            "-inf" => return Ok(f64::NEG_INFINITY),
            _ => {}
        }
        let e = exprparse::parse_ast(text, &[], &self.bindings)?;
        e.eval(&[])
            .ok_or_else(|| Error::InvalidInput(format!("`{text}` is not a finite number")))
    }

    fn numbers(&self, items: &[String]) -> Result<Vec<f64>, Error> {
        items.iter().map(|s| self.number(s)).collect()
    }

    fn pair(&self, text: &str) -> Result<(f64, f64), Error> {
        let (a, b) = text
            .split_once(',')
            .ok_or_else(|| Error::InvalidInput(format!("interval `{text}` must look like a,b")))?;
        let (a, b) = (self.number(a)?, self.number(b)?);
        Ok(if a <= b { (a, b) } else { (b, a) })
    }

    fn span(&self, s: &Span) -> Result<Interval, Error> {
        let (a, b) = self.pair(&s.interval)?;
        Interval::new(a, b, s.open_lo, s.open_hi)
    }

    fn region(&self, text: &Option<String>, fallback: &Interval) -> Result<Interval, Error> {
        match text {
            Some(t) => {
                let (a, b) = self.pair(t)?;
                Interval::new(a, b, false, false)
            }
            None => Ok(*fallback),
        }
    }

    fn function(&self, text: &str) -> Result<RealFn, Error> {
        exprparse::parse_expr_with(text, &self.bindings, None)
    }

    fn mapping(&self, text: &str) -> Result<Mapping, Error> {
        exprparse::parse_mapping_with(text, &self.bindings)
    }

    fn frame(&self, g: &str, h: &str) -> Result<Frame2D, Error> {
        Ok(Frame2D::new(self.mapping(g)?, self.mapping(h)?))
    }
}

fn bindings(items: &[String]) -> Result<Bindings, Error> {
    let mut out = Bindings::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("binding `{item}` must look like NAME=VALUE")))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::InvalidInput(format!("`{name}` is not a valid name")));
        }
        let v = exprparse::parse_ast(value, &[], &out)?
            .eval(&[])
            .ok_or_else(|| Error::InvalidInput(format!("`{value}` is not a finite number")))?;
        out.insert(name.to_string(), v);
    }
    Ok(out)
}

fn number(v: f64) -> Value {
    json!(v)
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    let ctx = Ctx {
        bindings: bindings(&cli.bindings)?,
        cfg: quad_config()?,
    };
    match &cli.command {
        Command::Arith(a) => arith_cmd(&ctx, a),
        Command::MeanNumbers(a) => {
            let g = ctx.mapping(&a.g)?;
            let xs = ctx.numbers(&a.xs)?;
            let w = match &a.weights {
                Some(text) => {
                    let parts: Vec<String> = text.split(',').map(str::to_string).collect();
                    Weights::new(ctx.numbers(&parts)?)?
                }
                None => Weights::equal(xs.len()),
            };
            let mut r = Report::new(number(means::mean_numbers(&xs, &w, &g)?));
            r.class = Some(means::MeanClassTag::Numbers.to_string());
            Ok(r)
        }
        Command::MeanFunction(a) => {
            let f = ctx.function(&a.f)?;
            let fr = ctx.frame(&a.g, &a.h)?;
            let iv = ctx.span(&a.span)?;
            let m = if a.composite_v {
                means::mean_composite_v(&f, &fr.g, &fr.h, &iv, &ctx.cfg)?
            } else {
                means::mean_function(&f, &iv, &fr, &ctx.cfg)?
            };
            let mut r = Report::new(number(m.value))
                .flag("generalized", json!(m.generalized))
                .flag("outside_range", json!(m.outside_range));
            r.class = Some(m.class.to_string());
            r.diagnostics = m.diagnostics;
            Ok(r)
        }
        Command::Derive(a) => {
            let f = ctx.function(&a.f)?;
            let fr = ctx.frame(&a.g, &a.h)?;
            let x = ctx.number(&a.at)?;
            let v = if a.metrical {
                differential::metrical_derivative(&f, &fr, x)?
            } else {
                differential::dual_derivative(&f, &fr, x)?
            };
            Ok(Report::new(number(v)).flag("metrical", json!(a.metrical)))
        }
        Command::Integrate(a) => integrate_cmd(&ctx, a),
        Command::Convexity(a) => convexity_cmd(&ctx, a),
        Command::ConvexSet(a) => convex_set_cmd(&ctx, a),
        Command::CompareMeans(a) => {
            let (g, h) = (ctx.mapping(&a.g)?, ctx.mapping(&a.h)?);
            let iv = ctx.span(&a.span)?;
            let verdict = means::compare_means(&g, &h, &iv)?;
            Ok(Report::new(json!(verdict.to_string())))
        }
        Command::Stolarsky(a) => {
            let v = means::quasi_stolarsky(ctx.number(&a.p)?, ctx.number(&a.q)?, ctx.number(&a.a)?, ctx.number(&a.b)?)?;
            Ok(Report::new(number(v)))
        }
        Command::CauchyMean(a) => {
            let (f, g) = (ctx.function(&a.f)?, ctx.function(&a.g)?);
            let v = means::cauchy_mean(&f, &g, ctx.number(&a.x1)?, ctx.number(&a.x2)?)?;
            Ok(Report::new(number(v)))
        }
        Command::Plot(a) => {
            let f = ctx.function(&a.f)?;
            let fr = ctx.frame(&a.g, &a.h)?;
            let iv = ctx.span(&a.span)?;
            let series = plotgen::graph_series(&f, &fr, &iv, a.samples)?;
            let (format, name) = match a.format {
                Format::Csv => (PlotFormat::Csv, "csv"),
                Format::Svg => (PlotFormat::Svg, "svg"),
            };
            plotgen::emit(std::slice::from_ref(&series), format, &a.out)?;
            let mut r = Report::new(json!(series.points.len()))
                .flag("format", json!(name))
                .flag("out", json!(a.out.display().to_string()))
                .flag("singular_points", json!(series.annotations.len()));
            for s in &series.annotations {
                r.diagnostics.push(format!("singular density at x = {}", s.x));
            }
            Ok(r)
        }
    }
}

fn arith_cmd(ctx: &Ctx, a: &ArithArgs) -> Result<Report, Error> {
    let g = ctx.mapping(&a.g)?;
    let xs = ctx.numbers(&a.operands)?;
    let two = |name: &str| -> Result<(f64, f64), Error> {
        match xs.as_slice() {
            [p, q] => Ok((*p, *q)),
            _ => Err(Error::InvalidInput(format!("{name} takes exactly two operands"))),
        }
    };
    let v = match a.op {
        ArithOp::Add => arith::iso_add(&xs, &g)?,
        ArithOp::Sub => {
            let (first, rest) = xs.split_first().expect("clap requires an operand");
            arith::iso_sub(*first, rest, &g)?
        }
        ArithOp::Mul => {
            let (p, t) = two("mul")?;
            arith::iso_mul(p, t, &g)?
        }
        ArithOp::Div1 => {
            let (p, t) = two("div1")?;
            arith::iso_div1(p, t, &g)?
        }
        ArithOp::Div2 => {
            let (p, q) = two("div2")?;
            arith::iso_div2(p, q, &g)?
        }
    };
    Ok(Report::new(number(v)))
}

fn integrate_cmd(ctx: &Ctx, a: &IntegrateArgs) -> Result<Report, Error> {
    let f = ctx.function(&a.f)?;
    let iv = ctx.span(&a.span)?;
    let need = |m: &Option<String>, flag: &str| -> Result<Mapping, Error> {
        match m {
            Some(t) => ctx.mapping(t),
            None => Err(Error::InvalidInput(format!("this integral needs --{flag}"))),
        }
    };
    let (v, kind) = match a.kind {
        IntegralType::First => (integral::iso_integral_1(&f, &iv, &need(&a.h, "h")?, &ctx.cfg)?, "1"),
        IntegralType::Second => (integral::iso_integral_2(&f, &iv, &need(&a.g, "g")?, &ctx.cfg)?, "2"),
        IntegralType::Geometric => (integral::geometric_integral(&f, &iv, &ctx.cfg)?, "geometric"),
        IntegralType::Elastic => (integral::elastic_integral(&f, &iv, &ctx.cfg)?, "elastic"),
    };
    Ok(Report::new(number(v)).flag("type", json!(kind)))
}

fn kind_name(k: ConvexityKind) -> &'static str {
    match k {
        ConvexityKind::DviConvex => "dvi-convex",
        ConvexityKind::DviConcave => "dvi-concave",
        ConvexityKind::Affine => "affine",
        ConvexityKind::Indeterminate => "indeterminate",
    }
}

fn convexity_cmd(ctx: &Ctx, a: &ConvexityArgs) -> Result<Report, Error> {
    let f = ctx.function(&a.f)?;
    let fr = ctx.frame(&a.g, &a.h)?;
    let iv = ctx.span(&a.span)?;
    let verdict = convexity::classify_dvi_convexity(&f, &fr, &iv)?;
    let mut report = Report::new(json!(kind_name(verdict.kind)))
        .flag("inequality", json!(verdict.inequality.to_string()))
        .flag("geometric_direction", json!(verdict.geometric_direction.to_string()))
        .flag("observer_direction", json!(verdict.observer_direction.to_string()))
        .flag("verified", Value::Null);
    if let Some(trials) = a.verify {
        let check = convexity::verify_dvi_inequality(&f, &fr, &iv, trials, a.seed)?;
        report = report.flag("verified", json!(check.passed()));
        if let Some(c) = check.counterexample {
            report.diagnostics.push(format!(
                "counterexample x1 = {}, x2 = {}, lambda = {}: lhs = {}, rhs = {}",
                c.x1, c.x2, c.lambda, c.lhs, c.rhs
            ));
        }
    }
    Ok(report)
}

fn convex_set_cmd(ctx: &Ctx, a: &ConvexSetArgs) -> Result<Report, Error> {
    let g = ctx.mapping(&a.g)?;
    let check = match a.dim {
        Dim::One => {
            let pred = exprparse::parse_predicate(&a.predicate, &["x"], &ctx.bindings)?;
            let region = ctx.region(&a.region, g.domain())?;
            convexity::is_convex_set_1d(|x| pred.test(&[x]), &g, &region, a.trials, a.seed)
        }
        Dim::Two => {
            let g2 = match &a.g2 {
                Some(t) => ctx.mapping(t)?,
                None => g.clone(),
            };
            let pred = exprparse::parse_predicate(&a.predicate, &["x", "y"], &ctx.bindings)?;
            let rx = ctx.region(&a.region, g.domain())?;
            let ry = ctx.region(&a.region2, g2.domain())?;
            convexity::is_convex_set_2d(|x, y| pred.test(&[x, y]), &g, &g2, (&rx, &ry), a.trials, a.seed)
        }
    };
    Ok(match check {
        SetCheck::Pass { pairs } => Report::new(json!("pass"))
            .flag("pairs", json!(pairs))
            .flag("counterexample", Value::Null),
        SetCheck::Counterexample { p1, p2, lambda, point } => Report::new(json!("counterexample"))
            .flag("pairs", Value::Null)
            .flag(
                "counterexample",
                json!({ "p1": p1, "p2": p2, "lambda": lambda, "point": point }),
            ),
    })
}
