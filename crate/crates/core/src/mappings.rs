//! Dimensional mappings: strictly monotone bijections with forward, inverse
//! and derivative evaluators, a built-in catalog, composition, scale-shift
//! constructions and two-dimensional frames.

use std::f64::consts::{FRAC_PI_2, LN_10};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{self, Interval};
use crate::realfn::RealFn;

pub type MapFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }

    pub fn then(self, other: Direction) -> Direction {
        if self == other {
            Direction::Increasing
        } else {
            Direction::Decreasing
        }
    }

    pub fn is_increasing(self) -> bool {
        self == Direction::Increasing
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        })
    }
}

/// A strictly monotone bijection from `domain` onto `codomain`.
#[derive(Clone)]
pub struct Mapping {
    name: String,
    base: String,
    inverse_name: String,
    forward: MapFn,
    inverse: MapFn,
    derivative: MapFn,
    analytic_derivative: bool,
    domain: Interval,
    codomain: Interval,
    direction: Direction,
    affine: Option<(f64, f64)>,
    critical_points: Vec<f64>,
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mapping")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .field("direction", &self.direction)
            .finish()
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Parts of a mapping assembled by hand.
///
/// No monotonicity check is performed; call [`Mapping::validate`] when the
/// parts come from untrusted input.
pub struct MappingParts {
    pub name: String,
    pub forward: MapFn,
    pub inverse: MapFn,
    pub derivative: MapFn,
    pub domain: Interval,
    pub codomain: Interval,
    pub direction: Direction,
}

fn arc<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> MapFn {
    Arc::new(f)
}

fn num(x: f64) -> String {
    format!("{x}")
}

impl Mapping {
    pub fn from_parts(parts: MappingParts) -> Self {
        Mapping {
            base: parts.name.clone(),
            inverse_name: format!("inv({})", parts.name),
            name: parts.name,
            forward: parts.forward,
            inverse: parts.inverse,
            derivative: parts.derivative,
            analytic_derivative: true,
            domain: parts.domain,
            codomain: parts.codomain,
            direction: parts.direction,
            affine: None,
            critical_points: Vec::new(),
        }
    }

    /// Builds a mapping from a monotone function, inverting it numerically.
    pub fn from_monotone(f: &RealFn) -> Result<Self> {
        let domain = *f.domain();
        let grid = domain.interior_grid(257);
        let first = f.eval(grid[0])?;
        let last = f.eval(*grid.last().unwrap())?;
        let direction = if last > first {
            Direction::Increasing
        } else if last < first {
            Direction::Decreasing
        } else {
            return Err(Error::NonMonotoneDetected { x: grid[0] });
        };
        // Unknown limits at open or infinite ends widen to the matching infinity.
        let end_value = |x: f64, toward_hi: bool| -> f64 {
            match f.eval_raw(x) {
                Some(v) if x.is_finite() => v,
                _ if toward_hi == direction.is_increasing() => f64::INFINITY,
                _ => f64::NEG_INFINITY,
            }
        };
        let vlo = end_value(domain.lo(), false);
        let vhi = end_value(domain.hi(), true);
        let (clo, chi, olo, ohi) = if direction.is_increasing() {
            (vlo, vhi, domain.lo_open(), domain.hi_open())
        } else {
            (vhi, vlo, domain.hi_open(), domain.lo_open())
        };
        let codomain = Interval::new(clo, chi, olo, ohi)?;
        let fwd = f.clone();
        let inv = f.clone();
        let der = f.clone();
        let m = Mapping {
            name: f.label().to_string(),
            base: f.label().to_string(),
            inverse_name: format!("inv({})", f.label()),
            forward: arc(move |x| fwd.eval_raw(x).unwrap_or(f64::NAN)),
            inverse: arc(move |u| {
                let eval = |x: f64| inv.eval(x);
                numerics::resolve_bracket(&eval, u, &domain)
                    .and_then(|(a, b)| numerics::invert_monotone_with(&eval, u, a, b, 1e-13))
                    .unwrap_or(f64::NAN)
            }),
            derivative: arc(move |x| der.derivative(x).unwrap_or(f64::NAN)),
            analytic_derivative: f.has_analytic_derivative(),
            domain,
            codomain,
            direction,
            affine: None,
            critical_points: Vec::new(),
        };
        m.check_monotone(1000)?;
        Ok(m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Name of the mapping modulo vertical scale-shifts.
    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn codomain(&self) -> &Interval {
        &self.codomain
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.analytic_derivative
    }

    /// True for the identity and its vertical scale-shifts.
    pub fn is_identity_class(&self) -> bool {
        self.base == "id"
    }

    /// Points of the domain where the derivative vanishes.
    pub fn critical_points(&self) -> &[f64] {
        &self.critical_points
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::domain(x, format!("{} is defined on {}", self.name, self.domain)));
        }
        let u = (self.forward)(x);
        if u.is_nan() {
            return Err(Error::domain(x, format!("{} is undefined here", self.name)));
        }
        Ok(u)
    }

    pub fn invert(&self, u: f64) -> Result<f64> {
        if !self.codomain.contains(u) {
            return Err(Error::RangeViolation {
                value: u,
                codomain: self.codomain.to_string(),
            });
        }
        let x = (self.inverse)(u);
        if x.is_nan() {
            return Err(Error::RangeViolation {
                value: u,
                codomain: self.codomain.to_string(),
            });
        }
        Ok(x)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::domain(x, format!("{} is defined on {}", self.name, self.domain)));
        }
        let d = (self.derivative)(x);
        if d.is_nan() {
            return Err(Error::domain(x, format!("derivative of {} is undefined here", self.name)));
        }
        Ok(d)
    }

    /// Forward evaluation without domain checks; may return infinities at
    /// open endpoints, which is how limits at the boundary are read off.
    pub fn forward_raw(&self, x: f64) -> f64 {
        (self.forward)(x)
    }

    pub fn inverse_raw(&self, u: f64) -> f64 {
        (self.inverse)(u)
    }

    /// Image of a subinterval of the domain.
    pub fn image(&self, iv: &Interval) -> Result<Interval> {
        if !iv.is_subset_of(&self.domain) {
            return Err(Error::DomainMismatch(format!(
                "{iv} is not inside the domain {} of {}",
                self.domain, self.name
            )));
        }
        let a = self.forward_raw(iv.lo());
        let b = self.forward_raw(iv.hi());
        if a.is_nan() || b.is_nan() {
            return Err(Error::DomainMismatch(format!("{} has no limit at the ends of {iv}", self.name)));
        }
        match self.direction {
            Direction::Increasing => Interval::new(a, b, iv.lo_open(), iv.hi_open()),
            Direction::Decreasing => Interval::new(b, a, iv.hi_open(), iv.lo_open()),
        }
    }

    /// Preimage of a subinterval of the codomain.
    pub fn preimage(&self, iv: &Interval) -> Result<Interval> {
        if !iv.is_subset_of(&self.codomain) {
            return Err(Error::DomainMismatch(format!(
                "{iv} is not inside the codomain {} of {}",
                self.codomain, self.name
            )));
        }
        let a = self.inverse_raw(iv.lo());
        let b = self.inverse_raw(iv.hi());
        match self.direction {
            Direction::Increasing => Interval::new(a, b, iv.lo_open(), iv.hi_open()),
            Direction::Decreasing => Interval::new(b, a, iv.hi_open(), iv.lo_open()),
        }
    }

    /// The inverse bijection, from the codomain back onto the domain.
    pub fn inverse_mapping(&self) -> Mapping {
        let fwd = self.forward.clone();
        let inv = self.inverse.clone();
        let der = self.derivative.clone();
        let inv_for_der = self.inverse.clone();
        let critical_points = self
            .critical_points
            .iter()
            .map(|&c| (self.forward)(c))
            .collect();
        Mapping {
            name: self.inverse_name.clone(),
            base: if self.affine.is_some() { "id".into() } else { self.inverse_name.clone() },
            inverse_name: self.name.clone(),
            forward: inv,
            inverse: fwd,
            derivative: arc(move |u| 1.0 / der(inv_for_der(u))),
            analytic_derivative: self.analytic_derivative,
            domain: self.codomain,
            codomain: self.domain,
            direction: self.direction,
            affine: self.affine.map(|(k, c)| (1.0 / k, -c / k)),
            critical_points,
        }
    }

    /// Sampled strict-monotonicity check over `pairs` consecutive pairs.
    pub fn check_monotone(&self, pairs: usize) -> Result<()> {
        let pts = self.domain.interior_grid(pairs + 1);
        let mut prev: Option<f64> = None;
        for &x in &pts {
            let u = self.apply(x)?;
            if let Some(p) = prev {
                let ok = match self.direction {
                    Direction::Increasing => u > p,
                    Direction::Decreasing => u < p,
                };
                if !ok {
                    return Err(Error::NonMonotoneDetected { x });
                }
            }
            prev = Some(u);
        }
        Ok(())
    }

    /// Checks monotonicity and the inverse round trip on sampled points.
    pub fn validate(&self) -> Result<()> {
        self.check_monotone(1000)?;
        for x in self.domain.interior_grid(101) {
            let u = self.apply(x)?;
            let back = self.invert(u)?;
            if (back - x).abs() > 1e-9 * x.abs().max(1.0) {
                return Err(Error::InvalidParam(format!(
                    "{} fails the inverse round trip at {x}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

struct Entry {
    name: String,
    inverse_name: String,
    forward: MapFn,
    inverse: MapFn,
    derivative: MapFn,
    domain: Interval,
    codomain: Interval,
    direction: Direction,
    affine: Option<(f64, f64)>,
    critical_points: Vec<f64>,
}

impl From<Entry> for Mapping {
    fn from(e: Entry) -> Self {
        Mapping {
            base: if e.affine.is_some() { "id".into() } else { e.name.clone() },
            name: e.name,
            inverse_name: e.inverse_name,
            forward: e.forward,
            inverse: e.inverse,
            derivative: e.derivative,
            analytic_derivative: true,
            domain: e.domain,
            codomain: e.codomain,
            direction: e.direction,
            affine: e.affine,
            critical_points: e.critical_points,
        }
    }
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 15] = [
    "id", "ln", "log10", "exp", "exp10", "recip", "pow", "affine", "sinh", "cosh", "cube", "neg",
    "db", "sin", "cos",
];

fn expect_params(name: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::InvalidParam(format!(
            "{name} takes {n} parameter(s), got {}",
            params.len()
        )));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidParam(format!("{name} parameters must be finite")));
    }
    Ok(())
}

/// Looks up a catalog mapping by name with its parameters.
pub fn catalog(name: &str, params: &[f64]) -> Result<Mapping> {
    let line = Interval::real_line();
    let pos = Interval::positive();
    let inc = Direction::Increasing;
    let dec = Direction::Decreasing;
    let simple = |n: &str, inv: &str, f: MapFn, g: MapFn, d: MapFn, dom, cod, dir| Entry {
        name: n.into(),
        inverse_name: inv.into(),
        forward: f,
        inverse: g,
        derivative: d,
        domain: dom,
        codomain: cod,
        direction: dir,
        affine: None,
        critical_points: Vec::new(),
    };
    let entry = match name {
        "id" => {
            expect_params(name, params, 0)?;
            return affine(1.0, 0.0);
        }
        "affine" => {
            expect_params(name, params, 2)?;
            return affine(params[0], params[1]);
        }
        "pow" => {
            expect_params(name, params, 1)?;
            return power(params[0]);
        }
        "cube" => {
            expect_params(name, params, 0)?;
            let mut m = power(3.0)?;
            m.name = "cube".into();
            m.base = "cube".into();
            m.inverse_name = "inv(cube)".into();
            return Ok(m);
        }
        "ln" => simple(
            "ln",
            "exp",
            arc(f64::ln),
            arc(f64::exp),
            arc(|x| 1.0 / x),
            pos,
            line,
            inc,
        ),
        "exp" => simple(
            "exp",
            "ln",
            arc(f64::exp),
            arc(f64::ln),
            arc(f64::exp),
            line,
            pos,
            inc,
        ),
        "log10" => simple(
            "log10",
            "exp10",
            arc(f64::log10),
            arc(|u| 10f64.powf(u)),
            arc(|x| 1.0 / (x * LN_10)),
            pos,
            line,
            inc,
        ),
        "exp10" => simple(
            "exp10",
            "log10",
            arc(|x| 10f64.powf(x)),
            arc(f64::log10),
            arc(|x| LN_10 * 10f64.powf(x)),
            line,
            pos,
            inc,
        ),
        "recip" => simple(
            "recip",
            "recip",
            arc(|x| 1.0 / x),
            arc(|u| 1.0 / u),
            arc(|x| -1.0 / (x * x)),
            pos,
            pos,
            dec,
        ),
        "neg" => Entry {
            affine: Some((-1.0, 0.0)),
            ..simple("neg", "neg", arc(|x| -x), arc(|u| -u), arc(|_| -1.0), line, line, dec)
        },
        "sinh" => simple(
            "sinh",
            "inv(sinh)",
            arc(f64::sinh),
            arc(f64::asinh),
            arc(f64::cosh),
            line,
            line,
            inc,
        ),
        "cosh" => Entry {
            critical_points: vec![0.0],
            ..simple(
                "cosh",
                "inv(cosh)",
                arc(f64::cosh),
                arc(f64::acosh),
                arc(f64::sinh),
                Interval::non_negative(),
                Interval::new(1.0, f64::INFINITY, false, true)?,
                inc,
            )
        },
        "db" => simple(
            "db",
            "inv(db)",
            arc(|a| 10f64.powf(0.1 * a)),
            arc(|u| 10.0 * u.log10()),
            arc(|a| 0.1 * LN_10 * 10f64.powf(0.1 * a)),
            line,
            pos,
            inc,
        ),
        "sin" => Entry {
            critical_points: vec![FRAC_PI_2],
            ..simple(
                "sin",
                "inv(sin)",
                arc(f64::sin),
                arc(f64::asin),
                arc(f64::cos),
                Interval::closed(0.0, FRAC_PI_2)?,
                Interval::closed(0.0, 1.0)?,
                inc,
            )
        },
        "cos" => Entry {
            critical_points: vec![0.0],
            ..simple(
                "cos",
                "inv(cos)",
                arc(f64::cos),
                arc(f64::acos),
                arc(|x| -x.sin()),
                Interval::closed(0.0, FRAC_PI_2)?,
                Interval::closed(0.0, 1.0)?,
                dec,
            )
        },
        other => return Err(Error::UnknownMapping(other.to_string())),
    };
    expect_params(name, params, 0)?;
    Ok(entry.into())
}

fn affine(k: f64, c: f64) -> Result<Mapping> {
    if k == 0.0 || !k.is_finite() || !c.is_finite() {
        return Err(Error::InvalidParam(format!("affine scale must be non-zero, got {k}")));
    }
    let (name, inverse_name) = if k == 1.0 && c == 0.0 {
        ("id".to_string(), "id".to_string())
    } else {
        (
            format!("affine({},{})", num(k), num(c)),
            format!("affine({},{})", num(1.0 / k), num(-c / k)),
        )
    };
    let line = Interval::real_line();
    Ok(Entry {
        name,
        inverse_name,
        forward: arc(move |x| k * x + c),
        inverse: arc(move |u| (u - c) / k),
        derivative: arc(move |_| k),
        domain: line,
        codomain: line,
        direction: if k > 0.0 { Direction::Increasing } else { Direction::Decreasing },
        affine: Some((k, c)),
        critical_points: Vec::new(),
    }
    .into())
}

fn power(p: f64) -> Result<Mapping> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::InvalidParam(format!("pow exponent must be finite and non-zero, got {p}")));
    }
    if p == 1.0 {
        let mut m = affine(1.0, 0.0)?;
        m.name = "pow(1)".into();
        m.inverse_name = "pow(1)".into();
        return Ok(m);
    }
    let name = format!("pow({})", num(p));
    let inverse_name = format!("pow({})", num(1.0 / p));
    let integer = p.fract() == 0.0 && p.abs() < 1e6;
    let dir = if p > 0.0 { Direction::Increasing } else { Direction::Decreasing };
    let derivative = arc(move |x| p * x.powf(p - 1.0));
    let entry = if integer && p > 0.0 && (p as i64) % 2 != 0 {
        let n = p as i32;
        Entry {
            name,
            inverse_name,
            forward: arc(move |x| x.powi(n)),
            inverse: if n == 3 {
                arc(f64::cbrt)
            } else {
                arc(move |u: f64| u.signum() * u.abs().powf(1.0 / p))
            },
            derivative: arc(move |x| p * x.powi(n - 1)),
            domain: Interval::real_line(),
            codomain: Interval::real_line(),
            direction: dir,
            affine: None,
            critical_points: vec![0.0],
        }
    } else if integer && p > 0.0 {
        let n = p as i32;
        Entry {
            name,
            inverse_name,
            forward: arc(move |x| x.powi(n)),
            inverse: if n == 2 { arc(f64::sqrt) } else { arc(move |u: f64| u.powf(1.0 / p)) },
            derivative: arc(move |x| p * x.powi(n - 1)),
            domain: Interval::non_negative(),
            codomain: Interval::non_negative(),
            direction: dir,
            affine: None,
            critical_points: vec![0.0],
        }
    } else {
        Entry {
            name,
            inverse_name,
            forward: arc(move |x| x.powf(p)),
            inverse: arc(move |u| u.powf(1.0 / p)),
            derivative,
            domain: Interval::positive(),
            codomain: Interval::positive(),
            direction: dir,
            affine: None,
            critical_points: Vec::new(),
        }
    };
    Ok(entry.into())
}

/// `outer ∘ inner`, with the domain cut down to where the composite is defined.
pub fn compose(outer: &Mapping, inner: &Mapping) -> Result<Mapping> {
    if let (Some((ko, co)), Some((ki, ci))) = (outer.affine, inner.affine) {
        return affine(ko * ki, ko * ci + co);
    }
    let middle = inner.codomain.intersect(&outer.domain).ok_or_else(|| {
        Error::DomainMismatch(format!(
            "image {} of {} misses the domain {} of {}",
            inner.codomain, inner.name, outer.domain, outer.name
        ))
    })?;
    if middle.is_degenerate() {
        return Err(Error::DomainMismatch(format!(
            "{} and {} only meet at a single point",
            inner.name, outer.name
        )));
    }
    let domain = inner.preimage(&middle)?;
    let codomain = outer.image(&middle)?;
    let (fo, fi) = (outer.forward.clone(), inner.forward.clone());
    let (io, ii) = (outer.inverse.clone(), inner.inverse.clone());
    let (d_o, d_i, f_i) = (outer.derivative.clone(), inner.derivative.clone(), inner.forward.clone());
    let name = format!("{}|{}", inner.name, outer.name);
    let base = if outer.affine.is_some() { inner.base.clone() } else { name.clone() };
    let mut critical_points: Vec<f64> = inner
        .critical_points
        .iter()
        .copied()
        .chain(outer.critical_points.iter().map(|&c| (inner.inverse)(c)))
        .filter(|&x| domain.contains(x))
        .collect();
    critical_points.sort_by(f64::total_cmp);
    critical_points.dedup();
    Ok(Mapping {
        inverse_name: format!("{}|{}", outer.inverse_name, inner.inverse_name),
        name,
        base,
        forward: arc(move |x| fo(fi(x))),
        inverse: arc(move |u| ii(io(u))),
        derivative: arc(move |x| d_o(f_i(x)) * d_i(x)),
        analytic_derivative: outer.analytic_derivative && inner.analytic_derivative,
        domain,
        codomain,
        direction: outer.direction.then(inner.direction),
        affine: None,
        critical_points,
    })
}

/// Vertical scale-shift `x ↦ k·m(x) + C`.
pub fn v_scaleshift(m: &Mapping, k: f64, c: f64) -> Result<Mapping> {
    if k == 0.0 || !k.is_finite() || !c.is_finite() {
        return Err(Error::InvalidParam(format!("scale must be non-zero, got {k}")));
    }
    if k == 1.0 && c == 0.0 {
        return Ok(m.clone());
    }
    compose(&affine(k, c)?, m)
}

/// Vertical scale-shift of a plain function.
pub fn v_scaleshift_fn(f: &RealFn, k: f64, c: f64) -> Result<RealFn> {
    if k == 0.0 || !k.is_finite() || !c.is_finite() {
        return Err(Error::InvalidParam(format!("scale must be non-zero, got {k}")));
    }
    let inner = f.clone();
    let mut out = RealFn::partial(
        format!("{k}*({})+{c}", f.label()),
        *f.domain(),
        move |x| inner.eval(x).ok().map(|y| k * y + c),
    );
    if f.has_analytic_derivative() {
        let inner = f.clone();
        out = out.with_partial_derivative(move |x| inner.derivative(x).ok().map(|d| k * d));
    }
    Ok(out)
}

/// Horizontal scale-shift `u ↦ f((u − C)/k)` on `k·D + C`.
pub fn h_scaleshift(f: &RealFn, k: f64, c: f64) -> Result<RealFn> {
    if k == 0.0 || !k.is_finite() || !c.is_finite() {
        return Err(Error::InvalidParam(format!("scale must be non-zero, got {k}")));
    }
    if k == 1.0 && c == 0.0 {
        return Ok(f.clone());
    }
    let d = f.domain();
    let (a, b) = (k * d.lo() + c, k * d.hi() + c);
    let domain = if k > 0.0 {
        Interval::new(a, b, d.lo_open(), d.hi_open())?
    } else {
        Interval::new(b, a, d.hi_open(), d.lo_open())?
    };
    let inner = f.clone();
    let mut out = RealFn::partial(format!("{}@h({k},{c})", f.label()), domain, move |u| {
        inner.eval((u - c) / k).ok()
    });
    if f.has_analytic_derivative() {
        let inner = f.clone();
        out = out.with_partial_derivative(move |u| inner.derivative((u - c) / k).ok().map(|v| v / k));
    }
    Ok(out)
}

/// An ordered pair of mappings acting on the independent (`g`) and
/// dependent (`h`) variables.
#[derive(Debug, Clone)]
pub struct Frame2D {
    pub g: Mapping,
    pub h: Mapping,
}

impl Frame2D {
    pub fn new(g: Mapping, h: Mapping) -> Self {
        Frame2D { g, h }
    }

    pub fn identity() -> Self {
        let id = catalog("id", &[]).expect("identity is always in the catalog");
        Frame2D { g: id.clone(), h: id }
    }

    /// The frame `(g⁻¹, h⁻¹)`.
    pub fn inverse(&self) -> Frame2D {
        Frame2D {
            g: self.g.inverse_mapping(),
            h: self.h.inverse_mapping(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.g.validate()?;
        self.h.validate()
    }
}

/// An n-tuple of mappings kept as a plain record.
#[derive(Debug, Clone, Default)]
pub struct FrameRecord {
    pub mappings: Vec<Mapping>,
}

/// Number of sample points used for bonding checks.
const BONDING_SAMPLES: usize = 257;

/// Restricts `f` to the domain of `g` and checks that sampled values of `f`
/// land in the domain of `h`.
pub(crate) fn bond(f: &RealFn, fr: &Frame2D) -> Result<RealFn> {
    let f = f.restrict(fr.g.domain()).map_err(|_| {
        Error::BondingViolation(format!(
            "domain {} of {} misses the domain {} of {}",
            f.domain(),
            f.label(),
            fr.g.domain(),
            fr.g.name()
        ))
    })?;
    if f.domain().is_degenerate() {
        return Ok(f);
    }
    for x in f.domain().interior_grid(BONDING_SAMPLES) {
        if let Ok(y) = f.eval(x) {
            if !fr.h.domain().contains(y) {
                return Err(Error::BondingViolation(format!(
                    "{}({x}) = {y} lies outside the domain {} of {}",
                    f.label(),
                    fr.h.domain(),
                    fr.h.name()
                )));
            }
        }
    }
    Ok(f)
}

/// The transported function `φ = h ∘ f ∘ g⁻¹` on `E = g(D)`.
pub fn dvi_function(f: &RealFn, fr: &Frame2D) -> Result<RealFn> {
    let f = bond(f, fr)?;
    let e = fr.g.image(f.domain())?;
    let label = format!("phi[{}; {}, {}]", f.label(), fr.g.name(), fr.h.name());
    let (f1, g1, h1) = (f.clone(), fr.g.clone(), fr.h.clone());
    let mut phi = RealFn::partial(label, e, move |u| {
        let x = g1.invert(u).ok()?;
        let y = f1.eval(x).ok()?;
        h1.apply(y).ok()
    });
    if f.has_analytic_derivative() && fr.g.has_analytic_derivative() && fr.h.has_analytic_derivative()
    {
        let (f2, g2, h2) = (f.clone(), fr.g.clone(), fr.h.clone());
        phi = phi.with_partial_derivative(move |u| {
            let x = g2.invert(u).ok()?;
            let y = f2.eval(x).ok()?;
            let gd = g2.derivative(x).ok()?;
            if gd == 0.0 {
                return None;
            }
            Some(f2.derivative(x).ok()? * h2.derivative(y).ok()? / gd)
        });
    }
    Ok(phi)
}
