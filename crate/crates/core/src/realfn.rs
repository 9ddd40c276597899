//! Real functions of one variable with a declared domain.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{self, Interval, Side};

/// Partial evaluator: `None` marks a point where the function is undefined.
pub type Evaluator = Arc<dyn Fn(f64) -> Option<f64> + Send + Sync>;

/// An evaluable real function with a domain and an optional analytic
/// derivative.
///
/// Evaluation fails with `DomainViolation` outside the declared interval and
/// wherever the evaluator itself is undefined (log of a non-positive value,
/// division by zero and so on), so the effective domain is the declared
/// interval intersected with the evaluator's natural domain.
#[derive(Clone)]
pub struct RealFn {
    label: String,
    domain: Interval,
    eval: Evaluator,
    derivative: Option<Evaluator>,
    identity: bool,
}

impl fmt::Debug for RealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFn")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl RealFn {
    /// Wraps a total closure; non-finite outputs are treated as undefined.
    pub fn new<F>(label: impl Into<String>, domain: Interval, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RealFn {
            label: label.into(),
            domain,
            eval: Arc::new(move |x| finite(f(x))),
            derivative: None,
            identity: false,
        }
    }

    /// Wraps a partial closure.
    pub fn partial<F>(label: impl Into<String>, domain: Interval, f: F) -> Self
    where
        F: Fn(f64) -> Option<f64> + Send + Sync + 'static,
    {
        RealFn {
            label: label.into(),
            domain,
            eval: Arc::new(move |x| f(x).and_then(finite)),
            derivative: None,
            identity: false,
        }
    }

    pub fn with_derivative<D>(mut self, d: D) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(move |x| finite(d(x))));
        self
    }

    pub fn with_partial_derivative<D>(mut self, d: D) -> Self
    where
        D: Fn(f64) -> Option<f64> + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(move |x| d(x).and_then(finite)));
        self
    }

    /// `x ↦ x` on the whole line.
    pub fn identity() -> Self {
        let mut f = RealFn::new("x", Interval::real_line(), |x| x).with_derivative(|_| 1.0);
        f.identity = true;
        f
    }

    pub fn constant(c: f64) -> Self {
        RealFn::new(format!("{c}"), Interval::real_line(), move |_| c).with_derivative(|_| 0.0)
    }

    pub(crate) fn mark_identity(mut self) -> Self {
        self.identity = true;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Same function on a narrower domain.
    pub fn restrict(&self, iv: &Interval) -> Result<Self> {
        let domain = self.domain.intersect(iv).ok_or_else(|| {
            Error::DomainMismatch(format!("{iv} does not meet the domain {}", self.domain))
        })?;
        let mut f = self.clone();
        f.domain = domain;
        Ok(f)
    }

    /// Replaces the declared domain outright.
    pub fn with_domain(mut self, iv: Interval) -> Self {
        self.domain = iv;
        self
    }

    /// Evaluates without the declared-domain check.
    pub fn eval_raw(&self, x: f64) -> Option<f64> {
        (self.eval)(x)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::domain(
                x,
                format!("{} is declared on {}", self.label, self.domain),
            ));
        }
        (self.eval)(x).ok_or_else(|| Error::domain(x, format!("{} is undefined here", self.label)))
    }

    /// Analytic derivative when available, else a finite difference.
    ///
    /// At a closed endpoint the difference is one-sided; near any endpoint the
    /// initial step is clipped so the stencil stays inside the domain.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::domain(
                x,
                format!("{} is declared on {}", self.label, self.domain),
            ));
        }
        if let Some(d) = &self.derivative {
            return d(x).ok_or_else(|| {
                Error::domain(x, format!("derivative of {} is undefined here", self.label))
            });
        }
        self.fd_derivative(x)
    }

    /// Finite-difference derivative regardless of any analytic form.
    pub fn fd_derivative(&self, x: f64) -> Result<f64> {
        let f = |t: f64| self.eval(t);
        let h0 = numerics::default_step(x);
        let iv = &self.domain;
        if x == iv.lo() && !iv.lo_open() {
            return numerics::fd_derivative_one_sided(&f, x, h0.min(0.25 * iv.width()), Side::Right);
        }
        if x == iv.hi() && !iv.hi_open() {
            return numerics::fd_derivative_one_sided(&f, x, h0.min(0.25 * iv.width()), Side::Left);
        }
        let room = (x - iv.lo()).min(iv.hi() - x);
        numerics::fd_derivative_with(&f, x, h0.min(0.5 * room))
    }
}
