//! Isomorphic integrals of the first and second type, with the geometric and
//! elastic special cases.

use crate::error::{Error, Result};
use crate::mappings::{catalog, Mapping};
use crate::numerics::{integrate_between_with, integrate_with, Endpoint, Interval, QuadConfig};
use crate::realfn::RealFn;

/// `h⁻¹(∫ h(f(x)) dx)`.
pub fn iso_integral_1(f: &RealFn, iv: &Interval, h: &Mapping, cfg: &QuadConfig) -> Result<f64> {
    let raw = integrate_with(&|x| h.apply(f.eval(x)?), iv, cfg)?;
    h.invert(raw)
}

/// How the second-type raw integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// `∫ f(x)·g′(x) dx` over the original interval.
    XSpace,
    /// `∫ f(g⁻¹(u)) du` from `g(a)` to `g(b)`.
    USpace,
}

/// The raw value `∫ f dg` before mapping back; negative when `g` reverses
/// the orientation of `iv`.
pub fn raw_integral_2(f: &RealFn, iv: &Interval, g: &Mapping, route: Route, cfg: &QuadConfig) -> Result<f64> {
    match route {
        Route::XSpace => integrate_with(&|x| Ok(f.eval(x)? * g.derivative(x)?), iv, cfg),
        Route::USpace => {
            let a = Endpoint {
                x: g.forward_raw(iv.lo()),
                open: iv.lo_open(),
            };
            let b = Endpoint {
                x: g.forward_raw(iv.hi()),
                open: iv.hi_open(),
            };
            if a.x.is_nan() || b.x.is_nan() {
                return Err(Error::domain(iv.lo(), format!("{} has no limit at the ends of {iv}", g.name())));
            }
            let a = Endpoint { open: a.open || !a.x.is_finite(), ..a };
            let b = Endpoint { open: b.open || !b.x.is_finite(), ..b };
            integrate_between_with(&|u| f.eval(g.invert(u)?), a, b, cfg)
        }
    }
}

/// `g⁻¹(∫ f(x)·g′(x) dx)`.
///
/// Uses the x-space form when `g` has an analytic derivative and the
/// substitution `u = g(x)` otherwise.
pub fn iso_integral_2(f: &RealFn, iv: &Interval, g: &Mapping, cfg: &QuadConfig) -> Result<f64> {
    let route = if g.has_analytic_derivative() { Route::XSpace } else { Route::USpace };
    let raw = raw_integral_2(f, iv, g, route, cfg)?;
    g.invert(raw)
}

/// `exp(∫ f(x)/x dx)` on a subinterval of `(0, ∞)`.
pub fn elastic_integral(f: &RealFn, iv: &Interval, cfg: &QuadConfig) -> Result<f64> {
    if !iv.is_subset_of(&Interval::positive()) {
        return Err(Error::domain(iv.lo(), format!("elastic integral needs {iv} inside (0, inf)")));
    }
    iso_integral_2(f, iv, &catalog("ln", &[])?, cfg)
}

/// `exp(∫ ln f(x) dx)`.
pub fn geometric_integral(f: &RealFn, iv: &Interval, cfg: &QuadConfig) -> Result<f64> {
    iso_integral_1(f, iv, &catalog("ln", &[])?, cfg)
}
