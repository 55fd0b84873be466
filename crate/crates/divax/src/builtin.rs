//! Built-in measure families for the axiom suite: the divergence and its
//! scaled copy, the sum forms, and five intentionally broken variants that
//! each violate exactly one property.
//!
//! Designing a measure that fails a single axiom takes care, because the
//! properties are not independent — additivity plus expansibility imply
//! decisivity and recursivity, and on the open domain recursivity plus
//! semisymmetry plus vanishing self-distance already pin the family down.
//! Each control below dodges the implications by breaking either off the
//! sampled region of a stronger axiom or inside a degenerate slice:
//!
//! - `wrong-coefficient`: the divergence at a shifted exponent; recursivity
//!   at the suite's alpha fails, semisymmetry and self-distance survive.
//! - `swap-asymmetric`: reconstruction-generated from f(x,y) = (x-y)^2,
//!   exactly recursive by construction but not semisymmetric.
//! - `block-offset`: the divergence plus a constant once n >= 12, a length
//!   only the refined side of the additivity identity reaches.
//! - `zero-tail-bias`: a penalty that activates on trailing zero outcomes,
//!   the exact shape expansibility appends; it vanishes at the decisive
//!   point because 1 - p_1 is zero there.
//! - `certainty-spike`: a bump at the decisive point (p_1 = q_1 = 1) that
//!   interior samples never reach.

use crate::axioms::Axiom;
use crate::measure::{FnMeasure, Measure, ScaledMeasure, TsallisDivergence};
use crate::qlog::Alpha;
use crate::reconstruction::{
    sum_form_measure, InitialElement, ReconstructedMeasure, SumFormParams,
};
use crate::simplex::DomainKind;
use crate::{divergence, Result};

/// A named measure plus the axiom it is expected to fail (if any).
pub struct BuiltinMeasure {
    pub measure: Box<dyn Measure>,
    pub expected_failure: Option<Axiom>,
}

impl BuiltinMeasure {
    fn sound(measure: impl Measure + 'static) -> Self {
        Self {
            measure: Box::new(measure),
            expected_failure: None,
        }
    }

    fn broken(measure: impl Measure + 'static, target: Axiom) -> Self {
        Self {
            measure: Box::new(measure),
            expected_failure: Some(target),
        }
    }
}

/// The families expected to pass everything: `D^a` on the closed domain,
/// a scaled copy, and the open-domain sum form matching the alpha branch.
pub fn standard_measures(alpha: Alpha) -> Result<Vec<BuiltinMeasure>> {
    let mut out = vec![
        BuiltinMeasure::sound(TsallisDivergence::closed(alpha)),
        BuiltinMeasure::sound(ScaledMeasure::new(
            0.5,
            TsallisDivergence::closed(alpha),
            "scaled-divergence",
        )),
    ];
    let params = if alpha.is_one() {
        SumFormParams::log_form(alpha, 1.0, -1.0, 0.0)
    } else if alpha.is_zero() {
        SumFormParams::log_form(alpha, -1.0, 1.0, 0.0)
    } else {
        SumFormParams::power_form(alpha, 1.0, 1.0)
    };
    out.push(BuiltinMeasure::sound(sum_form_measure(params)));
    Ok(out)
}

/// The five negative controls, one per targeted axiom.
pub fn negative_controls(alpha: Alpha) -> Result<Vec<BuiltinMeasure>> {
    let shifted = Alpha::new(alpha.value() + 0.5)?;
    let wrong_coefficient = BuiltinMeasure::broken(
        FnMeasure::new("wrong-coefficient", DomainKind::Open, move |pair| {
            divergence::relative_entropy(pair, shifted)
                .expect("open pair")
                .value()
        }),
        Axiom::AlphaRecursivity,
    );

    let swap_asymmetric = BuiltinMeasure::broken(
        ReconstructedMeasure::new(
            InitialElement::new("squared-gap", |x, y| (x - y) * (x - y)),
            alpha,
            "swap-asymmetric",
        ),
        Axiom::ThreeSemisymmetry,
    );

    let block_offset = BuiltinMeasure::broken(
        FnMeasure::new("block-offset", DomainKind::Closed, move |pair| {
            let base = divergence::relative_entropy_closed(pair, alpha)
                .expect("closed pair")
                .value();
            if pair.len() >= 12 {
                base + 0.25
            } else {
                base
            }
        }),
        Axiom::GeneralizedAdditivity,
    );

    let zero_tail_bias = BuiltinMeasure::broken(
        FnMeasure::new("zero-tail-bias", DomainKind::Closed, move |pair| {
            let base = divergence::relative_entropy_closed(pair, alpha)
                .expect("closed pair")
                .value();
            let p = pair.p().entries();
            let q = pair.q().entries();
            if p[p.len() - 1] == 0.0 && q[q.len() - 1] == 0.0 {
                base + 0.5 * (1.0 - p[0])
            } else {
                base
            }
        }),
        Axiom::Expansibility,
    );

    let certainty_spike = BuiltinMeasure::broken(
        FnMeasure::new("certainty-spike", DomainKind::Closed, move |pair| {
            let base = divergence::relative_entropy_closed(pair, alpha)
                .expect("closed pair")
                .value();
            if pair.p().entries()[0] == 1.0 && pair.q().entries()[0] == 1.0 {
                base + 0.5
            } else {
                base
            }
        }),
        Axiom::Decisivity,
    );

    Ok(vec![
        wrong_coefficient,
        swap_asymmetric,
        block_offset,
        zero_tail_bias,
        certainty_spike,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{run_axiom_suite, SuiteConfig, Verdict};

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    fn suite(seed: u64) -> SuiteConfig {
        let mut config = SuiteConfig::new(seed);
        config.trials = 20;
        config
    }

    #[test]
    fn standard_measures_pass_everything() {
        for &v in &[-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
            for built in standard_measures(a(v)).unwrap() {
                let reports = run_axiom_suite(built.measure.as_ref(), a(v), &suite(1)).unwrap();
                for r in &reports {
                    assert_eq!(
                        r.verdict,
                        Verdict::Pass,
                        "alpha={v} measure={} axiom={}",
                        built.measure.name(),
                        r.axiom
                    );
                }
            }
        }
    }

    #[test]
    fn negative_controls_fail_exactly_their_target() {
        for &v in &[-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
            for built in negative_controls(a(v)).unwrap() {
                let target = built.expected_failure.unwrap();
                let reports = run_axiom_suite(built.measure.as_ref(), a(v), &suite(2)).unwrap();
                for r in &reports {
                    let expected = if r.axiom == target {
                        Verdict::Fail
                    } else {
                        Verdict::Pass
                    };
                    assert_eq!(
                        r.verdict,
                        expected,
                        "alpha={v} measure={} axiom={} residual={:e} tol={:e}",
                        built.measure.name(),
                        r.axiom,
                        r.max_residual,
                        r.tolerance_used
                    );
                    if r.axiom == target {
                        assert!(r.worst_witness.is_some());
                    }
                }
            }
        }
    }
}
