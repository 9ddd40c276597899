//! DVI convexity from the monotonicity of `(h∘f)′/g′`, `g` and `h`, with
//! randomized checks of the defining inequality and of isomorphic convex
//! sets.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::differential::dual_derivative;
use crate::error::{Error, Result};
use crate::mappings::{bond, Direction, Frame2D, Mapping};
use crate::means::{mean_numbers, Weights};
use crate::numerics::{classify_samples, Interval, Monotonicity, MONOTONE_DEADBAND};
use crate::realfn::RealFn;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Default number of random trials.
pub const DEFAULT_TRIALS: usize = 10_000;

/// Relative tolerance under which two sides count as equal.
pub const EQUALITY_DEADBAND: f64 = 1e-10;

const RATIO_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexityKind {
    DviConvex,
    DviConcave,
    Affine,
    Indeterminate,
}

/// Claimed relation between `f(mean_g)` and `mean_h(f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    Le,
    Ge,
    Eq,
    None,
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inequality::Le => "<=",
            Inequality::Ge => ">=",
            Inequality::Eq => "=",
            Inequality::None => "none",
        })
    }
}

impl Inequality {
    /// Whether `lhs` and `rhs` satisfy the relation up to the dead-band.
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        let slack = EQUALITY_DEADBAND * lhs.abs().max(rhs.abs()).max(1.0);
        match self {
            Inequality::Le => lhs <= rhs + slack,
            Inequality::Ge => lhs + slack >= rhs,
            Inequality::Eq => (lhs - rhs).abs() <= slack,
            Inequality::None => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometricDirection {
    ToLower,
    ToUpper,
    Straight,
    None,
}

impl fmt::Display for GeometricDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometricDirection::ToLower => "to_lower",
            GeometricDirection::ToUpper => "to_upper",
            GeometricDirection::Straight => "straight",
            GeometricDirection::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotonicityEvidence {
    pub ratio: Monotonicity,
    pub g: Direction,
    pub h: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvexityVerdict {
    pub kind: ConvexityKind,
    pub inequality: Inequality,
    /// Convexity of the transported graph on the Cartesian system: to the
    /// lower when the ratio and `g` move the same way.
    pub geometric_direction: GeometricDirection,
    /// Direction seen on the dual system, read from the inequality sign.
    pub observer_direction: GeometricDirection,
    pub evidence: MonotonicityEvidence,
}

/// Classifies `f` on `iv` under `fr` by sampling `(h∘f)′/g′`.
pub fn classify_dvi_convexity(f: &RealFn, fr: &Frame2D, iv: &Interval) -> Result<ConvexityVerdict> {
    let f = bond(&f.restrict(iv)?, fr)?;
    let mut ratio = Vec::with_capacity(RATIO_SAMPLES);
    for x in iv.interior_grid(RATIO_SAMPLES) {
        ratio.push(dual_derivative(&f, fr, x)?);
    }
    let evidence = MonotonicityEvidence {
        ratio: classify_samples(&ratio, MONOTONE_DEADBAND),
        g: fr.g.direction(),
        h: fr.h.direction(),
    };
    Ok(verdict_from(evidence))
}

fn verdict_from(evidence: MonotonicityEvidence) -> ConvexityVerdict {
    let (kind, inequality, geometric) = match evidence.ratio {
        Monotonicity::Constant => (ConvexityKind::Affine, Inequality::Eq, GeometricDirection::Straight),
        Monotonicity::NonMonotone => {
            (ConvexityKind::Indeterminate, Inequality::None, GeometricDirection::None)
        }
        r => {
            let ratio_up = r == Monotonicity::Increasing;
            let ups = usize::from(ratio_up)
                + usize::from(evidence.g.is_increasing())
                + usize::from(evidence.h.is_increasing());
            let geometric = if ratio_up == evidence.g.is_increasing() {
                GeometricDirection::ToLower
            } else {
                GeometricDirection::ToUpper
            };
            if ups % 2 == 1 {
                (ConvexityKind::DviConvex, Inequality::Le, geometric)
            } else {
                (ConvexityKind::DviConcave, Inequality::Ge, geometric)
            }
        }
    };
    let observer_direction = match inequality {
        Inequality::Le => GeometricDirection::ToLower,
        Inequality::Ge => GeometricDirection::ToUpper,
        Inequality::Eq => GeometricDirection::Straight,
        Inequality::None => GeometricDirection::None,
    };
    ConvexityVerdict {
        kind,
        inequality,
        geometric_direction: geometric,
        observer_direction,
        evidence,
    }
}

/// A sampled pair that breaks the claimed inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCounterexample {
    pub x1: f64,
    pub x2: f64,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub verdict: ConvexityVerdict,
    pub trials: usize,
    pub counterexample: Option<InequalityCounterexample>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn sample(iv: &Interval, rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let x = iv.from_unit(rng.gen::<f64>());
        if iv.contains_interior(x) {
            return x;
        }
    }
}

fn lambda(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let l = rng.gen::<f64>();
        if l > 0.0 {
            return l;
        }
    }
}

/// `f(mean_g(x₁, x₂; λ))` and `mean_h(f(x₁), f(x₂); λ)`.
pub fn dvi_sides(f: &RealFn, fr: &Frame2D, x1: f64, x2: f64, lambda: f64) -> Result<(f64, f64)> {
    let w = Weights::new(vec![lambda, 1.0 - lambda])?;
    let lhs = f.eval(mean_numbers(&[x1, x2], &w, &fr.g)?)?;
    let rhs = mean_numbers(&[f.eval(x1)?, f.eval(x2)?], &w, &fr.h)?;
    Ok((lhs, rhs))
}

/// Checks the classified inequality on `trials` random pairs and weights.
pub fn verify_dvi_inequality(
    f: &RealFn,
    fr: &Frame2D,
    iv: &Interval,
    trials: usize,
    seed: u64,
) -> Result<InequalityReport> {
    let verdict = classify_dvi_convexity(f, fr, iv)?;
    if verdict.inequality == Inequality::None {
        return Err(Error::IndeterminateMonotonicity);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x1 = sample(iv, &mut rng);
        let x2 = sample(iv, &mut rng);
        let l = lambda(&mut rng);
        let (lhs, rhs) = dvi_sides(f, fr, x1, x2, l)?;
        if !verdict.inequality.holds(lhs, rhs) {
            return Ok(InequalityReport {
                verdict,
                trials,
                counterexample: Some(InequalityCounterexample { x1, x2, lambda: l, lhs, rhs }),
            });
        }
    }
    Ok(InequalityReport { verdict, trials, counterexample: None })
}

/// Outcome of a randomized convex-set check.
#[derive(Debug, Clone, PartialEq)]
pub enum SetCheck {
    /// No counterexample among the member pairs that were tested.
    Pass { pairs: usize },
    Counterexample {
        p1: Vec<f64>,
        p2: Vec<f64>,
        lambda: f64,
        point: Vec<f64>,
    },
}

impl SetCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SetCheck::Pass { .. })
    }
}

fn draw_member<P>(region: &[Interval], pred: &P, rng: &mut ChaCha8Rng) -> Option<Vec<f64>>
where
    P: Fn(&[f64]) -> bool,
{
    for _ in 0..1000 {
        let p: Vec<f64> = region.iter().map(|iv| sample(iv, rng)).collect();
        if pred(&p) {
            return Some(p);
        }
    }
    None
}

fn check_set<P>(pred: &P, maps: &[&Mapping], region: &[Interval], trials: usize, seed: u64) -> SetCheck
where
    P: Fn(&[f64]) -> bool,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = 0;
    for _ in 0..trials {
        let (Some(p1), Some(p2)) = (draw_member(region, pred, &mut rng), draw_member(region, pred, &mut rng))
        else {
            break;
        };
        let l = lambda(&mut rng);
        let w = Weights::new(vec![l, 1.0 - l]).expect("weights in (0, 1)");
        let point: Option<Vec<f64>> = maps
            .iter()
            .enumerate()
            .map(|(i, g)| mean_numbers(&[p1[i], p2[i]], &w, g).ok())
            .collect();
        pairs += 1;
        match point {
            Some(p) if pred(&p) => {}
            Some(p) => return SetCheck::Counterexample { p1, p2, lambda: l, point: p },
            None => return SetCheck::Counterexample { p1, p2, lambda: l, point: vec![f64::NAN; maps.len()] },
        }
    }
    SetCheck::Pass { pairs }
}

/// Randomized check that `{x : member(x)}` inside `region` is closed under
/// weighted means generated by `g`.
pub fn is_convex_set_1d<P>(member: P, g: &Mapping, region: &Interval, trials: usize, seed: u64) -> SetCheck
where
    P: Fn(f64) -> bool,
{
    let pred = |p: &[f64]| member(p[0]);
    check_set(&pred, &[g], std::slice::from_ref(region), trials, seed)
}

/// Two-dimensional version of [`is_convex_set_1d`] with coordinate means
/// under `g1` and `g2`.
pub fn is_convex_set_2d<P>(
    member: P,
    g1: &Mapping,
    g2: &Mapping,
    region: (&Interval, &Interval),
    trials: usize,
    seed: u64,
) -> SetCheck
where
    P: Fn(f64, f64) -> bool,
{
    let pred = |p: &[f64]| member(p[0], p[1]);
    check_set(&pred, &[g1, g2], &[*region.0, *region.1], trials, seed)
}

/// Both sides of `n·f(∏xᵢ)` against `Σ f(xᵢⁿ)` with the relation implied by
/// the monotonicity of `x·f′(x)` on `iv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductInequality {
    pub inequality: Inequality,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn build_inequality_check(f: &RealFn, iv: &Interval, xs: &[f64]) -> Result<ProductInequality> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("no numbers supplied".into()));
    }
    let f = f.restrict(iv)?;
    let mut scaled = Vec::with_capacity(RATIO_SAMPLES);
    for x in iv.interior_grid(RATIO_SAMPLES) {
        scaled.push(x * f.derivative(x)?);
    }
    let inequality = match classify_samples(&scaled, MONOTONE_DEADBAND) {
        Monotonicity::Increasing => Inequality::Le,
        Monotonicity::Decreasing => Inequality::Ge,
        Monotonicity::Constant => Inequality::Eq,
        Monotonicity::NonMonotone => return Err(Error::IndeterminateMonotonicity),
    };
    let n = xs.len() as i32;
    let product: f64 = xs.iter().product();
    let lhs = f64::from(n) * f.eval(product)?;
    let mut rhs = 0.0;
    for &x in xs {
        rhs += f.eval(x.powi(n))?;
    }
    Ok(ProductInequality { inequality, lhs, rhs, holds: inequality.holds(lhs, rhs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{catalog, MappingParts};
    use std::sync::Arc;

    fn m(name: &str, p: &[f64]) -> Mapping {
        catalog(name, p).unwrap()
    }

    fn x() -> RealFn {
        RealFn::identity()
    }

    #[test]
    fn exp_square_frame_cases() {
        let fr = Frame2D::new(m("exp", &[]), m("pow", &[2.0]));
        let upper = Interval::new(1.0, f64::INFINITY, true, true).unwrap();
        let v = classify_dvi_convexity(&x(), &fr, &upper).unwrap();
        assert_eq!(v.kind, ConvexityKind::DviConcave);
        assert_eq!(v.inequality, Inequality::Ge);
        assert_eq!(v.geometric_direction, GeometricDirection::ToUpper);
        let lower = Interval::open(0.0, 1.0).unwrap();
        let v = classify_dvi_convexity(&x(), &fr, &lower).unwrap();
        assert_eq!(v.kind, ConvexityKind::DviConvex);
        assert_eq!(v.inequality, Inequality::Le);
        assert_eq!(v.geometric_direction, GeometricDirection::ToLower);
    }

    #[test]
    fn ordinary_convexity() {
        let sq = RealFn::new("x^2", Interval::real_line(), |x| x * x).with_derivative(|x| 2.0 * x);
        let iv = Interval::closed(-3.0, 3.0).unwrap();
        let v = classify_dvi_convexity(&sq, &Frame2D::identity(), &iv).unwrap();
        assert_eq!(v.kind, ConvexityKind::DviConvex);
        let r = verify_dvi_inequality(&sq, &Frame2D::identity(), &iv, 2000, DEFAULT_SEED).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn identity_under_equal_generators_is_affine() {
        let fr = Frame2D::new(m("ln", &[]), m("ln", &[]));
        let iv = Interval::closed(0.5, 9.0).unwrap();
        let r = verify_dvi_inequality(&x(), &fr, &iv, 2000, DEFAULT_SEED).unwrap();
        assert_eq!(r.verdict.kind, ConvexityKind::Affine);
        assert!(r.passed());
    }

    #[test]
    fn geometric_cases() {
        let logs = Frame2D::new(m("ln", &[]), m("ln", &[]));
        // Elasticity x·eˣ/eˣ = x increases.
        let exp = RealFn::new("exp", Interval::real_line(), f64::exp).with_derivative(f64::exp);
        let iv = Interval::closed(0.2, 5.0).unwrap();
        let r = verify_dvi_inequality(&exp, &logs, &iv, 2000, DEFAULT_SEED).unwrap();
        assert_eq!(r.verdict.inequality, Inequality::Le);
        assert!(r.passed());
        let shifted = RealFn::new("x-2", Interval::real_line(), |x| x - 2.0).with_derivative(|_| 1.0);
        let iv = Interval::new(2.0, f64::INFINITY, true, true).unwrap();
        let r = verify_dvi_inequality(&shifted, &logs, &iv, 2000, DEFAULT_SEED).unwrap();
        assert_eq!(r.verdict.kind, ConvexityKind::DviConcave);
        assert!(r.passed());
    }

    #[test]
    fn strict_inequality_away_from_diagonal() {
        let sq = RealFn::new("x^2", Interval::real_line(), |x| x * x);
        let (lhs, rhs) = dvi_sides(&sq, &Frame2D::identity(), 1.0, 2.0, 0.5).unwrap();
        assert!(rhs - lhs > EQUALITY_DEADBAND);
        let (lhs, rhs) = dvi_sides(&sq, &Frame2D::identity(), 1.5, 1.5, 0.3).unwrap();
        assert!(Inequality::Eq.holds(lhs, rhs));
    }

    #[test]
    fn one_dimensional_sets() {
        let id = m("id", &[]);
        let region = Interval::closed(0.0, 5.0).unwrap();
        let r = is_convex_set_1d(|x| (1.0..=2.0).contains(&x), &id, &region, 2000, DEFAULT_SEED);
        assert!(r.passed());
        let gap = |x: f64| (1.0..=2.0).contains(&x) || (3.0..=4.0).contains(&x);
        assert!(!is_convex_set_1d(gap, &id, &region, 2000, DEFAULT_SEED).passed());
        // A generator that closes the gap: g = x on [1, 2], x − 1 on [3, 4].
        let jump = Mapping::from_parts(MappingParts {
            name: "jump".into(),
            forward: Arc::new(|x| if x <= 2.0 { x } else if x >= 3.0 { x - 1.0 } else { f64::NAN }),
            inverse: Arc::new(|u| if u <= 2.0 { u } else { u + 1.0 }),
            derivative: Arc::new(|_| 1.0),
            domain: Interval::closed(1.0, 4.0).unwrap(),
            codomain: Interval::closed(1.0, 3.0).unwrap(),
            direction: Direction::Increasing,
        });
        assert!(is_convex_set_1d(gap, &jump, &region, 2000, DEFAULT_SEED).passed());
    }

    #[test]
    fn two_dimensional_sets() {
        let recip = m("recip", &[]);
        let pos = Interval::positive();
        let below = |x: f64, y: f64| x + y < 2.0 && x > 0.0 && y > 0.0;
        assert!(is_convex_set_2d(below, &recip, &recip, (&pos, &pos), 5000, DEFAULT_SEED).passed());
        let above = |x: f64, y: f64| x + y > 2.0 && x > 0.0 && y > 0.0;
        assert!(!is_convex_set_2d(above, &recip, &recip, (&pos, &pos), 5000, DEFAULT_SEED).passed());
        let ln = m("ln", &[]);
        let wedge = |x: f64, y: f64| x - y > 2.0 && x > 2.0 && y > 0.0;
        assert!(is_convex_set_2d(wedge, &ln, &ln, (&pos, &pos), 5000, DEFAULT_SEED).passed());
    }

    #[test]
    fn product_inequality() {
        let exp = RealFn::new("exp", Interval::real_line(), f64::exp).with_derivative(f64::exp);
        let r = build_inequality_check(&exp, &Interval::positive(), &[1.1, 1.2]).unwrap();
        assert_eq!(r.inequality, Inequality::Le);
        assert!(r.holds && r.lhs < r.rhs);
        let lhs = 2.0 * (1.1f64 * 1.2).exp();
        let rhs = 1.21f64.exp() + 1.44f64.exp();
        assert!((r.lhs - lhs).abs() < 1e-14 && (r.rhs - rhs).abs() < 1e-14);
        let r = build_inequality_check(&x(), &Interval::positive(), &[1.0, 1.0]).unwrap();
        assert_eq!(r.lhs, r.rhs);
        let ln = RealFn::new("ln", Interval::positive(), f64::ln).with_derivative(|x| 1.0 / x);
        let r = build_inequality_check(&ln, &Interval::open(0.0, 1.0).unwrap(), &[0.5, 0.9]).unwrap();
        assert_eq!(r.inequality, Inequality::Eq);
        assert!(r.holds);
    }
}
