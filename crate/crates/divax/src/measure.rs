//! Relative information measures as first-class values.
//!
//! A measure is anything that assigns an extended real to every valid pair
//! of its domain, for any length n >= 2, deterministically. The axiom
//! harness only sees this trait; the divergence family, its scaled copies,
//! the sum forms, reconstructed measures, and the intentionally broken
//! variants all come through here.

use crate::divergence;
use crate::qlog::Alpha;
use crate::simplex::{DistPair, DomainKind};

pub trait Measure: Send + Sync {
    fn name(&self) -> &str;

    fn domain_kind(&self) -> DomainKind;

    /// The measure's value; +infinity is allowed (closed domain, a = 1).
    /// Callers guarantee the pair matches `domain_kind`.
    fn evaluate(&self, pair: &DistPair) -> f64;
}

/// `D_n^a` as a measure, on either domain.
pub struct TsallisDivergence {
    alpha: Alpha,
    domain: DomainKind,
}

impl TsallisDivergence {
    pub fn open(alpha: Alpha) -> Self {
        Self {
            alpha,
            domain: DomainKind::Open,
        }
    }

    pub fn closed(alpha: Alpha) -> Self {
        Self {
            alpha,
            domain: DomainKind::Closed,
        }
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }
}

impl Measure for TsallisDivergence {
    fn name(&self) -> &str {
        "divergence"
    }

    fn domain_kind(&self) -> DomainKind {
        self.domain
    }

    fn evaluate(&self, pair: &DistPair) -> f64 {
        let value = match self.domain {
            DomainKind::Open => divergence::relative_entropy(pair, self.alpha),
            DomainKind::Closed => divergence::relative_entropy_closed(pair, self.alpha),
        };
        value.expect("pair domain checked by caller").value()
    }
}

/// `gamma * m` for a fixed scalar.
pub struct ScaledMeasure<M: Measure> {
    gamma: f64,
    inner: M,
    name: String,
}

impl<M: Measure> ScaledMeasure<M> {
    pub fn new(gamma: f64, inner: M, name: impl Into<String>) -> Self {
        Self {
            gamma,
            inner,
            name: name.into(),
        }
    }
}

impl<M: Measure> Measure for ScaledMeasure<M> {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain_kind(&self) -> DomainKind {
        self.inner.domain_kind()
    }

    fn evaluate(&self, pair: &DistPair) -> f64 {
        self.gamma * self.inner.evaluate(pair)
    }
}

/// An ad-hoc measure from a closure; the workhorse for tests and for the
/// broken built-ins.
pub struct FnMeasure {
    name: String,
    domain: DomainKind,
    f: Box<dyn Fn(&DistPair) -> f64 + Send + Sync>,
}

impl FnMeasure {
    pub fn new(
        name: impl Into<String>,
        domain: DomainKind,
        f: impl Fn(&DistPair) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            f: Box::new(f),
        }
    }
}

impl Measure for FnMeasure {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain_kind(&self) -> DomainKind {
        self.domain
    }

    fn evaluate(&self, pair: &DistPair) -> f64 {
        (self.f)(pair)
    }
}

impl Measure for Box<dyn Measure> {
    fn name(&self) -> &str {
        self.as_ref().name()
    }

    fn domain_kind(&self) -> DomainKind {
        self.as_ref().domain_kind()
    }

    fn evaluate(&self, pair: &DistPair) -> f64 {
        self.as_ref().evaluate(pair)
    }
}
