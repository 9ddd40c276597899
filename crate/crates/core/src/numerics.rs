//! Numerical kernels shared by every other module: intervals, adaptive
//! Gauss-Kronrod quadrature with endpoint shrinking, monotone inversion,
//! finite differences and sampled monotonicity classification.

use std::fmt;

use crate::error::{Error, Result};
use crate::realfn::RealFn;

/// One end of an oriented integration range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub x: f64,
    pub open: bool,
}

impl Endpoint {
    pub fn closed(x: f64) -> Self {
        Endpoint {
            x,
            open: !x.is_finite(),
        }
    }

    pub fn open(x: f64) -> Self {
        Endpoint { x, open: true }
    }
}

/// A connected subset of the extended real line.
///
/// Endpoints satisfy `lo <= hi`; infinite endpoints are always open and a
/// point interval is always closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_open: bool,
    hi_open: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInput("interval endpoint is NaN".into()));
        }
        if lo > hi {
            return Err(Error::InvalidInput(format!(
                "interval endpoints out of order: {lo} > {hi}"
            )));
        }
        if lo == hi && (lo_open || hi_open || !lo.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "empty interval at {lo}"
            )));
        }
        Ok(Interval {
            lo,
            hi,
            lo_open: lo_open || lo.is_infinite(),
            hi_open: hi_open || hi.is_infinite(),
        })
    }

    pub fn closed(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, false, false)
    }

    pub fn open(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, true, true)
    }

    pub fn point(a: f64) -> Result<Self> {
        Self::new(a, a, false, false)
    }

    pub fn real_line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_open: true,
            hi_open: true,
        }
    }

    /// The open half line `(0, inf)`.
    pub fn positive() -> Self {
        Interval {
            lo: 0.0,
            hi: f64::INFINITY,
            lo_open: true,
            hi_open: true,
        }
    }

    /// The closed half line `[0, inf)`.
    pub fn non_negative() -> Self {
        Interval {
            lo: 0.0,
            hi: f64::INFINITY,
            lo_open: false,
            hi_open: true,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_open(&self) -> bool {
        self.lo_open
    }

    pub fn hi_open(&self) -> bool {
        self.hi_open
    }

    pub fn start(&self) -> Endpoint {
        Endpoint {
            x: self.lo,
            open: self.lo_open,
        }
    }

    pub fn end(&self) -> Endpoint {
        Endpoint {
            x: self.hi,
            open: self.hi_open,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_closed(&self) -> bool {
        !self.lo_open && !self.hi_open
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = self.lo > other.lo || (self.lo == other.lo && (self.lo_open || !other.lo_open));
        let hi_ok = self.hi < other.hi || (self.hi == other.hi && (self.hi_open || !other.hi_open));
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_open) = if self.lo > other.lo {
            (self.lo, self.lo_open)
        } else if other.lo > self.lo {
            (other.lo, other.lo_open)
        } else {
            (self.lo, self.lo_open || other.lo_open)
        };
        let (hi, hi_open) = if self.hi < other.hi {
            (self.hi, self.hi_open)
        } else if other.hi < self.hi {
            (other.hi, other.hi_open)
        } else {
            (self.hi, self.hi_open || other.hi_open)
        };
        Interval::new(lo, hi, lo_open, hi_open).ok()
    }

    /// Maps `t` in `(0, 1)` monotonically onto the interior.
    ///
    /// Unbounded sides are compactified with `t / (1 - t)`.
    pub fn from_unit(&self, t: f64) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => self.lo + t * (self.hi - self.lo),
            (true, false) => self.lo + t / (1.0 - t),
            (false, true) => self.hi - (1.0 - t) / t,
            (false, false) => (t - 0.5) / (t * (1.0 - t)),
        }
    }

    /// `n` strictly interior sample points in increasing order.
    pub fn interior_grid(&self, n: usize) -> Vec<f64> {
        let mut pts: Vec<f64> = (0..n)
            .map(|i| self.from_unit((i as f64 + 1.0) / (n as f64 + 1.0)))
            .collect();
        pts.dedup();
        pts
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        write!(f, "{l}{}, {}{r}", fmt_bound(self.lo), fmt_bound(self.hi))
    }
}

fn fmt_bound(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

/// Geometric endpoint-shrink schedule for improper integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkSchedule {
    pub start: f64,
    pub ratio: f64,
    pub floor: f64,
}

impl Default for ShrinkSchedule {
    fn default() -> Self {
        ShrinkSchedule {
            start: 1e-2,
            ratio: 1e-1,
            floor: 1e-12,
        }
    }
}

impl ShrinkSchedule {
    /// The ε sequence from `start` down to `floor` inclusive.
    pub fn epsilons(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut eps = self.start;
        while eps >= self.floor * (1.0 - 1e-9) {
            out.push(eps);
            eps *= self.ratio;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub improper_shrink: ShrinkSchedule,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 60,
            improper_shrink: ShrinkSchedule::default(),
        }
    }
}

impl QuadConfig {
    /// Default configuration with both tolerances set to `tol`.
    pub fn with_tolerance(tol: f64) -> Result<Self> {
        let cfg = QuadConfig {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.improper_shrink;
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParam("tolerances must be positive".into()));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidParam("max_depth must be at least 1".into()));
        }
        if !(s.start > 0.0 && s.ratio > 0.0 && s.ratio < 1.0 && s.floor > 0.0 && s.floor <= s.start)
        {
            return Err(Error::InvalidParam("invalid shrink schedule".into()));
        }
        Ok(())
    }

    pub(crate) fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn eval_finite<F>(f: &F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let y = f(x)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::domain(x, "integrand is not finite"))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_finite(f, center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval_finite(f, center - dx)?;
        let f2 = eval_finite(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let err = rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h);
    Ok((res_k * half, err))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

const MAX_PANELS: usize = 20_000;

/// Globally adaptive Gauss-Kronrod on a finite range `[a, b]`, `a < b`.
///
/// The integrand is never evaluated at the endpoints themselves.
/// Returns the estimate and its error bound.
pub fn integrate_finite<F>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (v, e) = gk15(f, a, b)?;
    let mut panels = vec![Panel {
        a,
        b,
        value: v,
        error: e,
        depth: 0,
    }];
    let mut total = v;
    let mut total_err = e;
    loop {
        if total_err <= cfg.tolerance_for(total) {
            return Ok((total, total_err));
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < cfg.max_depth && p.b - p.a > 4.0 * f64::EPSILON * p.a.abs().max(p.b.abs()))
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(Error::NonConvergent(format!(
                "subdivision depth exhausted on [{a}, {b}] with error {total_err:e}"
            )));
        };
        if panels.len() >= MAX_PANELS {
            return Err(Error::NonConvergent(format!(
                "panel budget exhausted on [{a}, {b}] with error {total_err:e}"
            )));
        }
        let p = panels.swap_remove(i);
        let mid = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(f, p.a, mid)?;
        let (v2, e2) = gk15(f, mid, p.b)?;
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        panels.push(Panel {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
            depth: p.depth + 1,
        });
        panels.push(Panel {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
            depth: p.depth + 1,
        });
        if panels.len() % 64 == 0 {
            // Refresh running sums to stop drift from repeated updates.
            total = panels.iter().map(|p| p.value).sum();
            total_err = panels.iter().map(|p| p.error).sum();
        }
    }
}

/// Limit tracker for sequences produced by endpoint shrinking.
///
/// Each pushed value is accelerated with Aitken's delta-squared step; the
/// limit is accepted once two successive accelerated values agree within the
/// configured tolerance.
#[derive(Debug, Clone)]
pub struct LimitTracker {
    raw: Vec<f64>,
    accelerated: Vec<f64>,
    abs_tol: f64,
    rel_tol: f64,
}

impl LimitTracker {
    pub fn new(cfg: &QuadConfig) -> Self {
        LimitTracker {
            raw: Vec::new(),
            accelerated: Vec::new(),
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
        }
    }

    /// Adds the next term; returns the accepted limit once it has stabilized.
    pub fn push(&mut self, value: f64) -> Option<f64> {
        self.raw.push(value);
        let n = self.raw.len();
        let acc = if n >= 3 {
            let d1 = self.raw[n - 2] - self.raw[n - 3];
            let d2 = self.raw[n - 1] - self.raw[n - 2];
            let denom = d1 - d2;
            if d1 != 0.0 && (d2 / d1).abs() < 1.0 && denom != 0.0 {
                value + d2 * d2 / denom
            } else {
                value
            }
        } else {
            value
        };
        self.accelerated.push(acc);
        if n < 2 {
            return None;
        }
        let tol = self.abs_tol.max(self.rel_tol * value.abs());
        let step = (self.raw[n - 1] - self.raw[n - 2]).abs();
        if step <= tol {
            return Some(value);
        }
        if n >= 4 {
            let prev_step = (self.raw[n - 2] - self.raw[n - 3]).abs();
            let shrinking = step < prev_step;
            let a = self.accelerated[n - 1];
            let b = self.accelerated[n - 2];
            if shrinking && (a - b).abs() <= self.abs_tol.max(self.rel_tol * a.abs()) {
                return Some(a);
            }
        }
        None
    }

    /// Best available estimate when the sequence ran out.
    pub fn last(&self) -> Option<f64> {
        self.accelerated.last().copied()
    }

    /// Value at the tightest pair of successive terms and their relative gap.
    ///
    /// Roundoff near a singular endpoint can stop a convergent sequence short
    /// of the configured tolerance; the plateau is where it settled best.
    pub fn plateau(&self) -> Option<(f64, f64)> {
        self.raw
            .windows(2)
            .map(|w| (w[1], (w[1] - w[0]).abs() / w[1].abs().max(self.abs_tol)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// A quadrature failure deep in the schedule, after the sequence has
    /// started to settle, is treated as the end of usable precision.
    pub fn roundoff_limited(&self, err: &Error) -> bool {
        matches!(err, Error::NonConvergent(_)) && self.raw.len() >= 4
    }

    /// Final verdict once the sequence is exhausted: the plateau value when
    /// its relative gap is within the square root of the tolerance.
    pub fn settle(&self) -> Result<(f64, f64)> {
        match self.plateau() {
            Some((v, gap)) if gap <= self.rel_tol.sqrt() => Ok((v, gap)),
            _ => Err(Error::DivergentImproper),
        }
    }
}

/// Integral over `outer` minus `inner`, where `inner` is nested in `outer`.
pub fn shell_integral<F>(f: &F, outer: (f64, f64), inner: (f64, f64), cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut v = 0.0;
    if outer.0 < inner.0 {
        v += integrate_finite(f, outer.0, inner.0, cfg)?.0;
    }
    if outer.1 > inner.1 {
        v += integrate_finite(f, inner.1, outer.1, cfg)?.0;
    }
    Ok(v)
}

/// Inner closed endpoints `[lo_k, hi_k]` used to approach an open range.
#[derive(Debug, Clone)]
pub struct ShrinkPlan {
    pub levels: Vec<(f64, f64)>,
}

impl ShrinkPlan {
    /// Builds the nested sequence of closed subranges of `iv`.
    ///
    /// Closed finite endpoints stay fixed; open finite endpoints move in by
    /// `eps * scale`; infinite endpoints sit at distance `scale / eps`.
    pub fn new(iv: &Interval, schedule: &ShrinkSchedule) -> Result<Self> {
        let lo = iv.lo();
        let hi = iv.hi();
        let width = iv.width();
        let lo_scale = if width.is_finite() { width } else { lo.abs().max(1.0) };
        let hi_scale = if width.is_finite() { width } else { hi.abs().max(1.0) };
        let mut levels = Vec::new();
        for eps in schedule.epsilons() {
            let l = if lo.is_infinite() {
                if hi.is_finite() {
                    hi - hi.abs().max(1.0) / eps
                } else {
                    -1.0 / eps
                }
            } else if iv.lo_open() {
                lo + eps * lo_scale
            } else {
                lo
            };
            let h = if hi.is_infinite() {
                if lo.is_finite() {
                    lo + lo.abs().max(1.0) / eps
                } else {
                    1.0 / eps
                }
            } else if iv.hi_open() {
                hi - eps * hi_scale
            } else {
                hi
            };
            if !(l < h) {
                return Err(Error::InvalidInput(format!("cannot shrink {iv}")));
            }
            levels.push((l, h));
        }
        Ok(ShrinkPlan { levels })
    }
}

/// Integrates over `iv` in the lo-to-hi orientation.
pub fn integrate(f: &RealFn, iv: &Interval, cfg: &QuadConfig) -> Result<f64> {
    integrate_with(&|x| f.eval(x), iv, cfg)
}

/// Integrates between two oriented endpoints; swapping them negates the result.
pub fn integrate_between(f: &RealFn, a: Endpoint, b: Endpoint, cfg: &QuadConfig) -> Result<f64> {
    integrate_between_with(&|x| f.eval(x), a, b, cfg)
}

pub fn integrate_between_with<F>(f: &F, a: Endpoint, b: Endpoint, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a.x == b.x {
        return Ok(0.0);
    }
    if a.x > b.x {
        return integrate_between_with(f, b, a, cfg).map(|v| -v);
    }
    let iv = Interval::new(a.x, b.x, a.open, b.open)?;
    integrate_with(f, &iv, cfg)
}

/// Closure form of [`integrate`].
pub fn integrate_with<F>(f: &F, iv: &Interval, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate_traced(f, iv, cfg).map(|(v, _)| v)
}

/// Like [`integrate_with`], also returning the relative gap of the limit
/// when it was accepted at a plateau instead of at the full tolerance.
pub fn integrate_traced<F>(f: &F, iv: &Interval, cfg: &QuadConfig) -> Result<(f64, Option<f64>)>
where
    F: Fn(f64) -> Result<f64>,
{
    cfg.validate()?;
    if iv.is_degenerate() {
        return Ok((0.0, None));
    }
    if iv.is_closed() {
        return integrate_finite(f, iv.lo(), iv.hi(), cfg).map(|(v, _)| (v, None));
    }
    let plan = ShrinkPlan::new(iv, &cfg.improper_shrink)?;
    let mut tracker = LimitTracker::new(cfg);
    let (mut lo, mut hi) = plan.levels[0];
    let mut sum = integrate_finite(f, lo, hi, cfg)?.0;
    tracker.push(sum);
    for &(l, h) in &plan.levels[1..] {
        match shell_integral(f, (l, h), (lo, hi), cfg) {
            Ok(v) => sum += v,
            Err(e) if tracker.roundoff_limited(&e) => break,
            Err(e) => return Err(e),
        }
        lo = l;
        hi = h;
        if let Some(limit) = tracker.push(sum) {
            return Ok((limit, None));
        }
    }
    tracker.settle().map(|(v, gap)| (v, Some(gap)))
}

/// Which one-sided stencil to use at a boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

const FD_SHRINK: f64 = 1.4;
const FD_TABLE: usize = 12;
const FD_REL_TOL: f64 = 1e-8;

/// Default initial step `1e-4 * max(1, |x|)`.
pub fn default_step(x: f64) -> f64 {
    1e-4 * x.abs().max(1.0)
}

/// Central-difference derivative refined by Richardson extrapolation.
pub fn fd_derivative(f: &RealFn, x: f64, h0: f64) -> Result<f64> {
    fd_derivative_with(&|t| f.eval(t), x, h0)
}

pub fn fd_derivative_with<F>(f: &F, x: f64, h0: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    richardson(|h| Ok((f(x + h)? - f(x - h)?) / (2.0 * h)), h0, 2, x)
}

/// One-sided variant used at closed interval endpoints.
pub fn fd_derivative_one_sided<F>(f: &F, x: f64, h0: f64, side: Side) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let s = match side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    let fx = f(x)?;
    richardson(|h| Ok((f(x + s * h)? - fx) / (s * h)), h0, 1, x)
}

/// Neville-style Richardson tableau over steps `h0, h0/c, h0/c^2, ...`.
///
/// `order` is the power of the leading error term removed per column step
/// (2 for central differences, 1 for one-sided ones).
fn richardson<D>(diff: D, h0: f64, order: i32, x: f64) -> Result<f64>
where
    D: Fn(f64) -> Result<f64>,
{
    if !(h0 > 0.0) {
        return Err(Error::InvalidParam("finite-difference step must be positive".into()));
    }
    let mut table = vec![vec![0.0; FD_TABLE]; FD_TABLE];
    let mut h = h0;
    table[0][0] = diff(h)?;
    let mut best = table[0][0];
    let mut best_err = f64::INFINITY;
    for i in 1..FD_TABLE {
        h /= FD_SHRINK;
        table[0][i] = diff(h)?;
        let base = FD_SHRINK.powi(order);
        let mut fac = base;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            if order == 2 {
                fac *= base;
            } else {
                fac *= FD_SHRINK;
            }
            let err = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if err <= best_err {
                best_err = err;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= 2.0 * best_err {
            break;
        }
    }
    if !best.is_finite() {
        return Err(Error::domain(x, "finite difference produced a non-finite value"));
    }
    if best_err <= FD_REL_TOL * best.abs() + 1e-10 {
        Ok(best)
    } else {
        Err(Error::NonConvergent(format!(
            "finite difference at x = {x} did not settle (error {best_err:e})"
        )))
    }
}

/// Solves `f(x) = target` for monotone `f` inside `bracket`.
///
/// Unbounded bracket sides are searched by expanding steps from an interior
/// start point.
pub fn invert_monotone(f: &RealFn, target: f64, bracket: &Interval, tol: f64) -> Result<f64> {
    let eval = |x: f64| f.eval(x);
    let (a, b) = resolve_bracket(&eval, target, bracket)?;
    invert_monotone_with(&eval, target, a, b, tol)
}

/// Finds a finite closed sub-bracket of `iv` whose images straddle `target`.
pub(crate) fn resolve_bracket<F>(f: &F, target: f64, iv: &Interval) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let nudge = |x: f64, toward: f64| {
        let step = 1e-12 * x.abs().max(1.0);
        if toward > x {
            x + step
        } else {
            x - step
        }
    };
    let mid = if iv.is_bounded() {
        0.5 * (iv.lo() + iv.hi())
    } else {
        iv.from_unit(0.5)
    };
    let fm = f(mid)?;
    let lo_end = if iv.lo().is_finite() {
        Some(if iv.lo_open() { nudge(iv.lo(), mid) } else { iv.lo() })
    } else {
        None
    };
    let hi_end = if iv.hi().is_finite() {
        Some(if iv.hi_open() { nudge(iv.hi(), mid) } else { iv.hi() })
    } else {
        None
    };
    let probe = |end: Option<f64>, dir: f64| -> Result<Option<(f64, f64)>> {
        if let Some(e) = end {
            let fe = f(e)?;
            return Ok(Some((e, fe)));
        }
        let mut step = mid.abs().max(1.0);
        let mut last = None;
        for _ in 0..1100 {
            let x = mid + dir * step;
            if !x.is_finite() {
                break;
            }
            match f(x) {
                Ok(fx) => {
                    last = Some((x, fx));
                    if (fx - target) * (fm - target) <= 0.0 {
                        return Ok(last);
                    }
                }
                Err(_) => break,
            }
            step *= 2.0;
        }
        Ok(last)
    };
    let lo = probe(lo_end, -1.0)?;
    let hi = probe(hi_end, 1.0)?;
    let straddles = |p: Option<(f64, f64)>| p.map(|(_, v)| (v - target) * (fm - target) <= 0.0).unwrap_or(false);
    if fm == target {
        return Ok((mid, mid));
    }
    if straddles(lo) {
        return Ok((lo.unwrap().0, mid));
    }
    if straddles(hi) {
        return Ok((mid, hi.unwrap().0));
    }
    Err(Error::NotBracketed {
        target,
        lo: lo.map(|p| p.0).unwrap_or(iv.lo()),
        hi: hi.map(|p| p.0).unwrap_or(iv.hi()),
    })
}

/// Bisection followed by safeguarded secant refinement on `[a, b]`.
pub fn invert_monotone_with<F>(f: &F, target: f64, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    if a == b {
        let fa = f(a)?;
        if (fa - target).abs() <= tol {
            return Ok(a);
        }
        return Err(Error::NotBracketed { target, lo: a, hi: b });
    }
    let mut fa = f(a)? - target;
    let mut fb = f(b)? - target;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::NotBracketed { target, lo: a, hi: b });
    }
    let increasing = fb > fa;
    let mut prev = fa;
    for i in 1..64 {
        let x = a + (b - a) * (i as f64) / 64.0;
        let v = f(x)? - target;
        if (increasing && v <= prev) || (!increasing && v >= prev) {
            return Err(Error::NonMonotoneDetected { x });
        }
        prev = v;
    }
    if (increasing && fb <= prev) || (!increasing && fb >= prev) {
        return Err(Error::NonMonotoneDetected { x: b });
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..40 {
        if best.1.abs() <= tol {
            return Ok(best.0);
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Ok(best.0);
        }
        let fm = f(m)? - target;
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm == 0.0 {
            return Ok(m);
        }
        if fa * fm < 0.0 {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    for _ in 0..200 {
        if best.1.abs() <= tol {
            return Ok(best.0);
        }
        let mut x = b - fb * (b - a) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        if x <= a || x >= b {
            return Ok(best.0);
        }
        let fx = f(x)? - target;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        // Keep the bracket shrinking when secant steps stall on one side.
        let m = 0.5 * (a + b);
        if m > a && m < b {
            let fm = f(m)? - target;
            if fm.abs() < best.1.abs() {
                best = (m, fm);
            }
            if fa * fm < 0.0 {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
    }
    Ok(best.0)
}

/// Direction of a sampled sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
}

/// Relative dead-band under which a successive difference counts as zero.
pub const MONOTONE_DEADBAND: f64 = 1e-12;

/// Classifies a sampled sequence by the signs of its successive differences.
pub fn classify_samples(values: &[f64], deadband: f64) -> Monotonicity {
    let mut ups = 0usize;
    let mut downs = 0usize;
    for w in values.windows(2) {
        let scale = w[0].abs().max(w[1].abs());
        let d = w[1] - w[0];
        if d.abs() <= deadband * scale {
            continue;
        }
        if d > 0.0 {
            ups += 1;
        } else {
            downs += 1;
        }
    }
    match (ups, downs) {
        (0, 0) => Monotonicity::Constant,
        (_, 0) => Monotonicity::Increasing,
        (0, _) => Monotonicity::Decreasing,
        _ => Monotonicity::NonMonotone,
    }
}

/// Samples `f` at `n` interior points of `iv` and classifies its direction.
pub fn sampled_monotonicity<F>(f: &F, iv: &Interval, n: usize) -> Result<Monotonicity>
where
    F: Fn(f64) -> Result<f64>,
{
    let values = iv
        .interior_grid(n)
        .into_iter()
        .map(f)
        .collect::<Result<Vec<_>>>()?;
    Ok(classify_samples(&values, MONOTONE_DEADBAND))
}
