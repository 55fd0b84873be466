//! The relative entropy family `D_n^a`.
//!
//! Open-domain evaluation follows the defining sum
//! `-sum_i p_i ln_a(q_i / p_i)` with each ratio formed before the deformed
//! log. Closed-domain evaluation uses the algebraically identical expanded
//! power form
//!
//! ```text
//! -sum_i (p_i^a q_i^(1-a) - p_i) / (1 - a)
//! ```
//!
//! in which the zero conventions `0^a = 0^(1-a) = 0` apply directly and
//! every input stays evaluable without branches — except at `a = 1`, where
//! the Kullback-Leibler sum takes a zero term whenever `p_i = 0` and
//! diverges to +infinity when some `p_i > 0` faces `q_i = 0`.
//!
//! Sums accumulate left to right with compensation; the axiom harness
//! compares residuals at 1e-10 and must not see summation noise.

use crate::qlog::{ln_alpha, Alpha};
use crate::simplex::{pow_convention, DistPair, DomainKind};
use crate::sum::NeumaierSum;
use crate::{Error, Result};

/// A divergence value: a finite real, or +infinity.
///
/// Infinity is a value here, not an error — closed-domain axiom checks must
/// propagate it arithmetically. It arises only from closed-domain `a = 1`
/// evaluation with some `p_i > 0`, `q_i = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceValue {
    value: f64,
    finite: bool,
}

impl DivergenceValue {
    pub fn finite(value: f64) -> Self {
        debug_assert!(value.is_finite());
        Self {
            value,
            finite: true,
        }
    }

    pub fn infinite() -> Self {
        Self {
            value: f64::INFINITY,
            finite: false,
        }
    }

    /// The value as an extended real (+infinity when not finite).
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }
}

/// `D_n^a` on an open-domain pair. Always finite.
pub fn relative_entropy(pair: &DistPair, alpha: Alpha) -> Result<DivergenceValue> {
    if pair.domain_kind() != DomainKind::Open {
        return Err(Error::DomainMismatch {
            expected: DomainKind::Open,
            actual: pair.domain_kind(),
        });
    }
    let mut acc = NeumaierSum::new();
    for (&p, &q) in pair.p().entries().iter().zip(pair.q().entries()) {
        let ratio = q / p;
        acc.add(p * ln_alpha(ratio, alpha)?);
    }
    Ok(DivergenceValue::finite(-acc.value()))
}

/// `D_n^a` on a closed-domain pair under the zero conventions.
pub fn relative_entropy_closed(pair: &DistPair, alpha: Alpha) -> Result<DivergenceValue> {
    if pair.domain_kind() != DomainKind::Closed {
        return Err(Error::DomainMismatch {
            expected: DomainKind::Closed,
            actual: pair.domain_kind(),
        });
    }
    let p = pair.p().entries();
    let q = pair.q().entries();
    if alpha.is_one() {
        let mut acc = NeumaierSum::new();
        for (&pi, &qi) in p.iter().zip(q) {
            if pi == 0.0 {
                continue;
            }
            if qi == 0.0 {
                return Ok(DivergenceValue::infinite());
            }
            acc.add(pi * (pi / qi).ln());
        }
        return Ok(DivergenceValue::finite(acc.value()));
    }
    let u = 1.0 - alpha.value();
    let mut acc = NeumaierSum::new();
    for (&pi, &qi) in p.iter().zip(q) {
        acc.add(pow_convention(pi, alpha.value()) * pow_convention(qi, u) - pi);
    }
    Ok(DivergenceValue::finite(-acc.value() / u))
}

/// Dispatch on the pair's domain.
pub fn evaluate(pair: &DistPair, alpha: Alpha) -> Result<DivergenceValue> {
    match pair.domain_kind() {
        DomainKind::Open => relative_entropy(pair, alpha),
        DomainKind::Closed => relative_entropy_closed(pair, alpha),
    }
}
