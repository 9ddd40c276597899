//! Isomorphic arithmetic: operate on images `g(x)` and map the result back.

use crate::error::{Error, Result};
use crate::mappings::Mapping;

fn back(g: &Mapping, u: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::RangeViolation {
            value: u,
            codomain: g.codomain().to_string(),
        });
    }
    g.invert(u)
}

/// `g⁻¹(Σ g(xᵢ))`.
pub fn iso_add(xs: &[f64], g: &Mapping) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::InvalidInput("addition needs at least two operands".into()));
    }
    let mut sum = 0.0;
    for &x in xs {
        sum += g.apply(x)?;
    }
    back(g, sum)
}

/// `g⁻¹(g(a) − Σ g(bᵢ))`.
pub fn iso_sub(a: f64, bs: &[f64], g: &Mapping) -> Result<f64> {
    if bs.is_empty() {
        return Err(Error::InvalidInput("subtraction needs at least one subtrahend".into()));
    }
    let mut u = g.apply(a)?;
    for &b in bs {
        u -= g.apply(b)?;
    }
    back(g, u)
}

/// `g⁻¹(g(a)·t)`.
pub fn iso_mul(a: f64, t: f64, g: &Mapping) -> Result<f64> {
    back(g, g.apply(a)? * t)
}

/// `g⁻¹(g(a)/t)`.
pub fn iso_div1(a: f64, t: f64, g: &Mapping) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::DivisorZero);
    }
    back(g, g.apply(a)? / t)
}

/// `g(a)/g(b)`, a plain ratio that is not mapped back.
pub fn iso_div2(a: f64, b: f64, g: &Mapping) -> Result<f64> {
    let ga = g.apply(a)?;
    let gb = g.apply(b)?;
    if gb == 0.0 {
        return Err(Error::DivisorZero);
    }
    Ok(ga / gb)
}
