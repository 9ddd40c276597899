//! Weighted means of numbers, means of a function under a frame, bivariate
//! quasi-Stolarsky and Cauchy means, and ordering of means.

use std::fmt;

use crate::error::{Error, Result};
use crate::mappings::{bond, compose, Frame2D, Mapping};
use crate::numerics::{
    classify_samples, integrate_traced, invert_monotone_with, Endpoint, Interval,
    shell_integral, LimitTracker, Monotonicity, QuadConfig, ShrinkPlan, MONOTONE_DEADBAND,
};
use crate::realfn::RealFn;

/// Positive weights normalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParam("weights must not be empty".into()));
        }
        if let Some(bad) = p.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidParam(format!("weight {bad} is not positive")));
        }
        let total: f64 = p.iter().sum();
        Ok(Weights(p.into_iter().map(|w| w / total).collect()))
    }

    pub fn equal(n: usize) -> Self {
        Weights(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `g⁻¹(Σ pᵢ·g(xᵢ))`.
pub fn mean_numbers(xs: &[f64], w: &Weights, g: &Mapping) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::InvalidInput("a mean needs at least two numbers".into()));
    }
    if xs.len() != w.len() {
        return Err(Error::InvalidInput(format!(
            "{} numbers but {} weights",
            xs.len(),
            w.len()
        )));
    }
    let mut u = 0.0;
    for (&x, &p) in xs.iter().zip(w.as_slice()) {
        u += p * g.apply(x)?;
    }
    let m = g.invert(u)?;
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(m.clamp(lo, hi))
}

/// Sub-class of a function mean, read off the frame and the function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanClassTag {
    Numbers,
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    CompositeV,
}

impl fmt::Display for MeanClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MeanClassTag::Numbers => "numbers",
            MeanClassTag::I => "I",
            MeanClassTag::II => "II",
            MeanClassTag::III => "III",
            MeanClassTag::IV => "IV",
            MeanClassTag::V => "V",
            MeanClassTag::VI => "VI",
            MeanClassTag::VII => "VII",
            MeanClassTag::CompositeV => "composite-V",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanReport {
    pub value: f64,
    pub class: MeanClassTag,
    /// The function is unbounded near an open end and the mean is a limit.
    pub generalized: bool,
    /// The transported mean has no continuous preimage among the values of `f`.
    pub outside_range: bool,
    pub diagnostics: Vec<String>,
}

fn agrees<A, B>(iv: &Interval, a: A, b: B) -> bool
where
    A: Fn(f64) -> Result<f64>,
    B: Fn(f64) -> Result<f64>,
{
    let pts = if iv.is_degenerate() { vec![iv.lo()] } else { iv.interior_grid(7) };
    pts.into_iter().all(|x| match (a(x), b(x)) {
        (Ok(u), Ok(v)) => (u - v).abs() <= 1e-12 * u.abs().max(v.abs()).max(1.0),
        _ => false,
    })
}

/// Class of the mean of `f` on `iv` under `fr`.
pub fn classify_mean(f: &RealFn, fr: &Frame2D, iv: &Interval) -> MeanClassTag {
    let (g, h) = (&fr.g, &fr.h);
    if g.is_identity_class() && h.is_identity_class() {
        return MeanClassTag::VI;
    }
    if g.is_identity_class() {
        return MeanClassTag::I;
    }
    if h.is_identity_class() {
        return MeanClassTag::II;
    }
    let f_is_g = f.label() == g.name() || agrees(iv, |x| f.eval(x), |x| g.apply(x));
    let h_inverts_g =
        h.name() == g.inverse_mapping().name() || agrees(iv, |x| h.apply(g.apply(x)?), Ok);
    if f_is_g && h_inverts_g {
        return MeanClassTag::VII;
    }
    if g.base() == h.base() {
        return MeanClassTag::III;
    }
    if f.is_identity() || agrees(iv, |x| f.eval(x), Ok) {
        return MeanClassTag::V;
    }
    MeanClassTag::IV
}

/// `h⁻¹((1/(g(b)−g(a)))·∫ h(f(g⁻¹(u))) du)` over `g(iv)`.
pub fn mean_function(f: &RealFn, iv: &Interval, fr: &Frame2D, cfg: &QuadConfig) -> Result<MeanReport> {
    let mut report = transported_mean(f, iv, fr, cfg)?;
    report.class = classify_mean(f, fr, iv);
    Ok(report)
}

/// Same as [`mean_function`] with the endpoints given in either order.
pub fn mean_function_between(
    f: &RealFn,
    a: Endpoint,
    b: Endpoint,
    fr: &Frame2D,
    cfg: &QuadConfig,
) -> Result<MeanReport> {
    let (a, b) = if a.x <= b.x { (a, b) } else { (b, a) };
    let iv = Interval::new(a.x, b.x, a.open, b.open)?;
    mean_function(f, &iv, fr, cfg)
}

/// `f⁻¹(M_x|g, h∘f)` for strictly monotone `f`, which satisfies
/// `f(t) = M_f|g,h`.
pub fn mean_composite_v(
    f: &RealFn,
    g: &Mapping,
    h: &Mapping,
    iv: &Interval,
    cfg: &QuadConfig,
) -> Result<MeanReport> {
    let fm = Mapping::from_monotone(&f.restrict(iv)?)?;
    let outer = compose(h, &fm)?;
    let x = RealFn::identity().restrict(iv)?;
    let mut report = transported_mean(&x, iv, &Frame2D::new(g.clone(), outer), cfg)?;
    report.class = MeanClassTag::CompositeV;
    Ok(report)
}

fn plateau_note(diagnostics: &mut Vec<String>, gap: Option<f64>) {
    if let Some(gap) = gap {
        diagnostics.push(format!("limit accepted at relative agreement {gap:.1e}"));
    }
}

fn transported_mean(f: &RealFn, iv: &Interval, fr: &Frame2D, cfg: &QuadConfig) -> Result<MeanReport> {
    cfg.validate()?;
    let (g, h) = (&fr.g, &fr.h);
    if !iv.is_subset_of(g.domain()) {
        return Err(Error::domain(
            iv.lo(),
            format!("{iv} is not inside the domain {} of {}", g.domain(), g.name()),
        ));
    }
    if !iv.is_subset_of(f.domain()) {
        return Err(Error::domain(
            iv.lo(),
            format!("{iv} is not inside the domain {} of {}", f.domain(), f.label()),
        ));
    }
    let mut report = MeanReport {
        value: f64::NAN,
        class: MeanClassTag::IV,
        generalized: false,
        outside_range: false,
        diagnostics: Vec::new(),
    };
    if iv.is_degenerate() {
        report.value = f.eval(iv.lo())?;
        return Ok(report);
    }
    let f = bond(&f.restrict(iv)?, fr)?;
    let ga = g.forward_raw(iv.lo());
    let gb = g.forward_raw(iv.hi());
    if ga.is_nan() || gb.is_nan() {
        return Err(Error::domain(iv.lo(), format!("{} has no limit at the ends of {iv}", g.name())));
    }
    let denom = gb - ga;
    if denom == 0.0 {
        return Err(Error::DegenerateFrame);
    }
    let inner = |x: f64| h.apply(f.eval(x)?);
    let m_phi = if g.has_analytic_derivative() {
        let k = |x: f64| Ok(inner(x)? * g.derivative(x)?);
        if denom.is_finite() {
            let (n, gap) = integrate_traced(&k, iv, cfg)?;
            plateau_note(&mut report.diagnostics, gap);
            n / denom
        } else {
            report.diagnostics.push("infinite generator span; ratio-of-increments limit".into());
            let d = |lo: f64, hi: f64| g.forward_raw(hi) - g.forward_raw(lo);
            let (v, gap) = increment_ratio_limit(&k, iv, d, cfg)?;
            plateau_note(&mut report.diagnostics, gap);
            v
        }
    } else {
        let e = g.image(iv)?;
        let k = |u: f64| inner(g.invert(u)?);
        if e.width().is_finite() {
            let (n, gap) = integrate_traced(&k, &e, cfg)?;
            plateau_note(&mut report.diagnostics, gap);
            n / e.width()
        } else {
            report.diagnostics.push("infinite generator span; ratio-of-increments limit".into());
            let (v, gap) = increment_ratio_limit(&k, &e, |lo, hi| hi - lo, cfg)?;
            plateau_note(&mut report.diagnostics, gap);
            v
        }
    };
    report.value = h.invert(m_phi)?;
    if !iv.is_closed() {
        report.generalized = unbounded_near_open_end(&f, iv, cfg)?;
    }
    report.outside_range = !attained_continuously(&f, iv, report.value);
    Ok(report)
}

/// Limit of `∫k / D` as the range grows, taken as the limit of the ratio of
/// increments between successive shrink levels.
fn increment_ratio_limit<K, D>(k: &K, range: &Interval, denom: D, cfg: &QuadConfig) -> Result<(f64, Option<f64>)>
where
    K: Fn(f64) -> Result<f64>,
    D: Fn(f64, f64) -> f64,
{
    let plan = ShrinkPlan::new(range, &cfg.improper_shrink)?;
    let mut tracker = LimitTracker::new(cfg);
    let (mut lo, mut hi) = plan.levels[0];
    let mut d = denom(lo, hi);
    for &(l, h) in &plan.levels[1..] {
        let dn = match shell_integral(k, (l, h), (lo, hi), cfg) {
            Ok(v) => v,
            Err(e) if tracker.roundoff_limited(&e) => break,
            Err(e) => return Err(e),
        };
        let d_next = denom(l, h);
        let dd = d_next - d;
        if dd == 0.0 || !dd.is_finite() {
            return Err(Error::DivergentImproper);
        }
        lo = l;
        hi = h;
        d = d_next;
        if let Some(v) = tracker.push(dn / dd) {
            return Ok((v, None));
        }
    }
    tracker.settle().map(|(v, gap)| (v, Some(gap)))
}

/// `|f|` keeps growing along the shrink levels toward some open end.
fn unbounded_near_open_end(f: &RealFn, iv: &Interval, cfg: &QuadConfig) -> Result<bool> {
    let plan = ShrinkPlan::new(iv, &cfg.improper_shrink)?;
    let grows = |pts: Vec<f64>| {
        let vals: Vec<f64> = pts.into_iter().filter_map(|x| f.eval(x).ok()).map(f64::abs).collect();
        if vals.len() < 4 {
            return false;
        }
        let tail = &vals[vals.len() - 4..];
        tail.windows(2).all(|w| w[1] > w[0]) && tail[3] > 4.0 * vals[0] + 1.0
    };
    let lo_side = iv.lo_open() && grows(plan.levels.iter().map(|l| l.0).collect());
    let hi_side = iv.hi_open() && grows(plan.levels.iter().map(|l| l.1).collect());
    Ok(lo_side || hi_side)
}

/// Whether `f` takes the value `m` somewhere in `iv` without jumping across it.
fn attained_continuously(f: &RealFn, iv: &Interval, m: f64) -> bool {
    let near = |v: f64| (v - m).abs() <= 1e-9 * m.abs().max(1.0);
    let samples: Vec<(f64, f64)> = iv
        .interior_grid(1025)
        .into_iter()
        .filter_map(|x| f.eval(x).ok().map(|y| (x, y)))
        .collect();
    if samples.iter().any(|s| near(s.1)) {
        return true;
    }
    for w in samples.windows(2) {
        let ((mut a, mut fa), (mut b, mut fb)) = (w[0], w[1]);
        if (fa - m) * (fb - m) > 0.0 {
            continue;
        }
        for _ in 0..60 {
            let c = 0.5 * (a + b);
            let Ok(fc) = f.eval(c) else { break };
            if near(fc) {
                return true;
            }
            if (fa - m) * (fc - m) <= 0.0 {
                b = c;
                fb = fc;
            } else {
                a = c;
                fa = fc;
            }
        }
        if (fa - fb).abs() <= 1e-6 * m.abs().max(1.0) {
            return true;
        }
    }
    false
}

/// Riemann-sum approximation of [`mean_function`] with `n` equal cells of
/// `g(iv)` tagged at their midpoints.
pub fn mean_function_oracle(f: &RealFn, iv: &Interval, fr: &Frame2D, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParam("partition count must be positive".into()));
    }
    if !iv.is_closed() || !iv.is_bounded() {
        return Err(Error::InvalidInput(format!("oracle needs a closed bounded interval, got {iv}")));
    }
    let ua = fr.g.apply(iv.lo())?;
    let ub = fr.g.apply(iv.hi())?;
    let du = (ub - ua) / n as f64;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for i in 0..n {
        let xi = ua + (i as f64 + 0.5) * du;
        let x = fr.g.invert(xi)?.clamp(iv.lo(), iv.hi());
        let v = fr.h.apply(f.eval(x)?)?;
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    fr.h.invert((sum + comp) / n as f64)
}

const BRANCH_TOL: f64 = 1e-12;

/// Quasi-Stolarsky mean `Q_{p,q}(a, b)` with the limit branches at
/// `p = 0`, `q = 0`, `p + q = 0` and `p = q`.
pub fn quasi_stolarsky(p: f64, q: f64, a: f64, b: f64) -> Result<f64> {
    check_positive(a, b)?;
    if a == b {
        return Ok(a);
    }
    let l = b.ln() - a.ln();
    let zero = |v: f64| v.abs() < BRANCH_TOL;
    let v = if zero(p) && zero(q) {
        (a * b).sqrt()
    } else if zero(p) {
        a * (f64::exp_m1(q * l) / (q * l)).powf(1.0 / q)
    } else if zero(q) {
        a * (l * (p * l).exp() / f64::exp_m1(p * l) - 1.0 / p).exp()
    } else if zero(p + q) {
        a * (f64::exp_m1(p * l) / (p * l)).powf(1.0 / p)
    } else if zero(p - q) {
        a * ((1.0 + (p * l).exp()) / 2.0).powf(1.0 / p)
    } else {
        general(p, q, a, l)
    };
    Ok(v)
}

/// The general quasi-Stolarsky expression without branch selection.
pub fn quasi_stolarsky_general(p: f64, q: f64, a: f64, b: f64) -> Result<f64> {
    check_positive(a, b)?;
    if p == 0.0 || q == 0.0 || p + q == 0.0 {
        return Err(Error::InvalidParam(format!("general form undefined at p = {p}, q = {q}")));
    }
    if a == b {
        return Err(Error::InvalidParam("general form undefined for equal arguments".into()));
    }
    Ok(general(p, q, a, b.ln() - a.ln()))
}

fn general(p: f64, q: f64, a: f64, l: f64) -> f64 {
    let s = p + q;
    a * (p * f64::exp_m1(s * l) / (s * f64::exp_m1(p * l))).powf(1.0 / q)
}

fn check_positive(a: f64, b: f64) -> Result<()> {
    for x in [a, b] {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::domain(x, "quasi-Stolarsky means need positive arguments"));
        }
    }
    Ok(())
}

/// The `t` strictly between `x1` and `x2` with `f′(t)/g′(t) = Δf/Δg`.
pub fn cauchy_mean(f: &RealFn, g: &RealFn, x1: f64, x2: f64) -> Result<f64> {
    if x1 == x2 {
        return Ok(x1);
    }
    let (a, b) = (x1.min(x2), x1.max(x2));
    let dg = g.eval(b)? - g.eval(a)?;
    if dg == 0.0 {
        return Err(Error::NoRoot);
    }
    let target = (f.eval(b)? - f.eval(a)?) / dg;
    let ratio = |t: f64| -> Result<f64> {
        let gd = g.derivative(t)?;
        if gd == 0.0 {
            return Err(Error::NotInvertible);
        }
        Ok(f.derivative(t)? / gd)
    };
    let span = Interval::open(a, b)?;
    let values = span.interior_grid(513).into_iter().map(ratio).collect::<Result<Vec<_>>>()?;
    match classify_samples(&values, MONOTONE_DEADBAND) {
        Monotonicity::Increasing | Monotonicity::Decreasing => {}
        _ => return Err(Error::NotInvertible),
    }
    let inset = 1e-9 * (b - a);
    let tol = 1e-14 * b.abs().max(1.0);
    invert_monotone_with(&ratio, target, a + inset, b - inset, tol).map_err(|e| match e {
        Error::NotBracketed { .. } => Error::NoRoot,
        other => other,
    })
}

/// Ordering of two quasi-arithmetic means that holds for every tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanOrdering {
    /// The mean under `g` never exceeds the mean under `h`.
    LessEq,
    /// The mean under `g` is never below the mean under `h`.
    GreaterEq,
    Equal,
    Indeterminate,
}

impl fmt::Display for MeanOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeanOrdering::LessEq => "<=",
            MeanOrdering::GreaterEq => ">=",
            MeanOrdering::Equal => "=",
            MeanOrdering::Indeterminate => "indeterminate",
        })
    }
}

/// Orders the means under `g` and `h` on `iv` from the monotonicity of
/// `h′/g′`, `h` and `g`.
pub fn compare_means(g: &Mapping, h: &Mapping, iv: &Interval) -> Result<MeanOrdering> {
    for m in [g, h] {
        if !iv.is_subset_of(m.domain()) {
            return Err(Error::domain(
                iv.lo(),
                format!("{iv} is not inside the domain {} of {}", m.domain(), m.name()),
            ));
        }
    }
    if iv.is_degenerate() {
        return Ok(MeanOrdering::Equal);
    }
    let mut ratio = Vec::new();
    for x in iv.interior_grid(512) {
        let gd = g.derivative(x)?;
        if gd != 0.0 {
            ratio.push(h.derivative(x)? / gd);
        }
    }
    let increasing = match classify_samples(&ratio, MONOTONE_DEADBAND) {
        Monotonicity::Constant => return Ok(MeanOrdering::Equal),
        Monotonicity::NonMonotone => return Ok(MeanOrdering::Indeterminate),
        Monotonicity::Increasing => 1,
        Monotonicity::Decreasing => 0,
    } + usize::from(g.direction().is_increasing())
        + usize::from(h.direction().is_increasing());
    Ok(if increasing % 2 == 1 { MeanOrdering::LessEq } else { MeanOrdering::GreaterEq })
}
