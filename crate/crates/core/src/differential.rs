//! Dual derivatives, elasticity, metrical derivatives and number-axis
//! densities.

use crate::error::{Error, Result};
use crate::mappings::{catalog, Frame2D, Mapping};
use crate::realfn::RealFn;

/// `(h ∘ f)′(x) / g′(x)`.
pub fn dual_derivative(f: &RealFn, fr: &Frame2D, x: f64) -> Result<f64> {
    let gd = fr.g.derivative(x)?;
    if gd == 0.0 {
        return Err(Error::SingularGenerator { x });
    }
    let y = f.eval(x)?;
    let hd = fr.h.derivative(y)?;
    let fd = f.derivative(x)?;
    Ok(fd * hd / gd)
}

fn log_frame() -> Frame2D {
    let ln = catalog("ln", &[]).expect("ln is in the catalog");
    Frame2D::new(ln.clone(), ln)
}

/// `x·f′(x)/f(x)`, evaluated as the dual derivative under `(ln, ln)`.
pub fn elasticity(f: &RealFn, x: f64) -> Result<f64> {
    let y = f.eval(x)?;
    if y <= 0.0 {
        return Err(Error::NonPositiveValue { x });
    }
    if x <= 0.0 {
        return Err(Error::domain(x, "elasticity needs a positive argument"));
    }
    dual_derivative(f, &log_frame(), x)
}

/// `h⁻¹` of the dual derivative.
pub fn metrical_derivative(f: &RealFn, fr: &Frame2D, x: f64) -> Result<f64> {
    let d = dual_derivative(f, fr, x)?;
    fr.h.invert(d)
}

/// Metrical derivative under `(id, ln)`: `exp(f′/f)`.
pub fn exponential_derivative(f: &RealFn, x: f64) -> Result<f64> {
    let fr = Frame2D::new(catalog("id", &[])?, catalog("ln", &[])?);
    metrical_derivative(f, &fr, x)
}

/// Metrical derivative under `(ln, ln)`: `exp(x·f′/f)`.
pub fn bigeometric_derivative(f: &RealFn, x: f64) -> Result<f64> {
    metrical_derivative(f, &log_frame(), x)
}

/// A density value, or the marker for a point where the mapping derivative
/// vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Value(f64),
    Singular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub point: Vec<f64>,
    pub density: Density,
    pub mapping_derivative: f64,
}

impl DensityReport {
    pub fn is_singular(&self) -> bool {
        self.density == Density::Singular
    }

    pub fn value(&self) -> Option<f64> {
        match self.density {
            Density::Value(v) => Some(v),
            Density::Singular => None,
        }
    }
}

/// `1/g′(x)` on an isomorphic number axis.
pub fn axis_density(g: &Mapping, x: f64) -> Result<DensityReport> {
    let d = g.derivative(x)?;
    Ok(DensityReport {
        point: vec![x],
        density: if d == 0.0 { Density::Singular } else { Density::Value(1.0 / d) },
        mapping_derivative: d,
    })
}

/// `1/|g′(x)·h′(y)|` on an isomorphic plane.
pub fn plane_density(fr: &Frame2D, x: f64, y: f64) -> Result<DensityReport> {
    let d = (fr.g.derivative(x)? * fr.h.derivative(y)?).abs();
    Ok(DensityReport {
        point: vec![x, y],
        density: if d == 0.0 { Density::Singular } else { Density::Value(1.0 / d) },
        mapping_derivative: d,
    })
}
