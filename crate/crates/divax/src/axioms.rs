//! Numerical verification of the functional-equation properties that
//! characterize the relative entropy family.
//!
//! Every check compares the two sides of an identity on concrete inputs and
//! returns the absolute residual. The identities are exact over the reals;
//! floating point demands an explicit comparison contract, which is the
//! mixed tolerance `abs + rel * |reference|` with the measure's value on
//! the full input as reference.
//!
//! On the closed domain a trial can push both sides to +infinity (`a = 1`
//! with missing support). Such a trial is inconclusive — it is reported as
//! an incomparable infinity and fails the suite rather than passing it.

use std::fmt;

use crate::measure::Measure;
use crate::qlog::Alpha;
use crate::simplex::{
    pow_convention, ratio_convention, DistPair, Distribution, DomainKind, SamplerConfig,
    SimplexSampler,
};
use crate::{Error, Result};

/// The six checked properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    AlphaRecursivity,
    ThreeSemisymmetry,
    GeneralizedAdditivity,
    Expansibility,
    Decisivity,
    SelfDistanceZero,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::AlphaRecursivity,
        Axiom::ThreeSemisymmetry,
        Axiom::GeneralizedAdditivity,
        Axiom::Expansibility,
        Axiom::Decisivity,
        Axiom::SelfDistanceZero,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::AlphaRecursivity => "alpha_recursivity",
            Axiom::ThreeSemisymmetry => "three_semisymmetry",
            Axiom::GeneralizedAdditivity => "generalized_additivity",
            Axiom::Expansibility => "expansibility",
            Axiom::Decisivity => "decisivity",
            Axiom::SelfDistanceZero => "self_distance_zero",
        }
    }

    /// Expansibility, decisivity and generalized additivity only make sense
    /// where zeros are admissible.
    pub fn requires_closed(self) -> bool {
        matches!(
            self,
            Axiom::GeneralizedAdditivity | Axiom::Expansibility | Axiom::Decisivity
        )
    }

    pub fn applicable(domain: DomainKind) -> Vec<Axiom> {
        Self::ALL
            .into_iter()
            .filter(|a| domain == DomainKind::Closed || !a.requires_closed())
            .collect()
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Mixed residual tolerance: a trial passes when
/// `residual <= abs + rel * |reference|`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if rel > 0.0 && abs > 0.0 && rel.is_finite() && abs.is_finite() {
            Ok(Self { rel, abs })
        } else {
            Err(Error::InvalidConfig {
                reason: format!("tolerances must be positive and finite, got rel={rel} abs={abs}"),
            })
        }
    }

    pub fn bound(&self, reference: f64) -> f64 {
        self.abs + self.rel * reference.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// The inputs of the worst trial, kept for reproduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub detail: String,
}

/// Aggregated result of one axiom over all sampled trials.
///
/// `max_residual` and `tolerance_used` belong to the most violating trial
/// (largest residual relative to its own bound), so
/// `verdict == Pass  <=>  max_residual <= tolerance_used`, unless
/// incomparable infinities occurred — those force a Fail outright.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub trials: u32,
    pub max_residual: f64,
    pub worst_witness: Option<Witness>,
    pub verdict: Verdict,
    pub tolerance_used: f64,
    pub infinite_trials: u32,
}

fn residual_between(lhs: f64, rhs: f64) -> Result<f64> {
    if lhs.is_infinite() && rhs.is_infinite() && lhs.signum() == rhs.signum() {
        return Err(Error::IncomparableInfinity);
    }
    Ok((lhs - rhs).abs())
}

fn expect_domain(m: &dyn Measure, pair: &DistPair) -> Result<()> {
    if m.domain_kind() != pair.domain_kind() {
        return Err(Error::DomainMismatch {
            expected: m.domain_kind(),
            actual: pair.domain_kind(),
        });
    }
    Ok(())
}

/// The recursion coefficient `(p1+p2)^a (q1+q2)^(1-a)` under the closed
/// conventions.
fn block_coefficient(ps: f64, qs: f64, alpha: Alpha) -> f64 {
    pow_convention(ps, alpha.value()) * pow_convention(qs, 1.0 - alpha.value())
}

fn alpha_recursivity_sides(m: &dyn Measure, alpha: Alpha, pair: &DistPair) -> Result<(f64, f64)> {
    expect_domain(m, pair)?;
    if pair.len() < 3 {
        return Err(Error::InvalidArgument {
            reason: format!("recursivity needs n >= 3, got {}", pair.len()),
        });
    }
    let lhs = m.evaluate(pair);
    let merged = pair.merge_first_two()?;
    let ps = pair.p().entries()[0] + pair.p().entries()[1];
    let qs = pair.q().entries()[0] + pair.q().entries()[1];
    let coeff = block_coefficient(ps, qs, alpha);
    let mut rhs = m.evaluate(&merged);
    if coeff != 0.0 {
        let inner = pair
            .first_block_conditional()?
            .expect("nonzero coefficient implies both block sums positive");
        rhs += coeff * m.evaluate(&inner);
    }
    Ok((lhs, rhs))
}

/// Residual of the recursivity identity
/// `I_n(p|q) = I_{n-1}(merged) + (p1+p2)^a (q1+q2)^(1-a) I_2(inner)`.
pub fn check_alpha_recursivity(m: &dyn Measure, alpha: Alpha, pair: &DistPair) -> Result<f64> {
    let (lhs, rhs) = alpha_recursivity_sides(m, alpha, pair)?;
    residual_between(lhs, rhs)
}

fn three_semisymmetry_sides(m: &dyn Measure, pair: &DistPair) -> Result<(f64, f64)> {
    expect_domain(m, pair)?;
    if pair.len() != 3 {
        return Err(Error::InvalidArgument {
            reason: format!("3-semisymmetry is defined at n = 3, got {}", pair.len()),
        });
    }
    Ok((m.evaluate(pair), m.evaluate(&pair.swapped_23()?)))
}

/// Residual of `I_3(p1,p2,p3 | q1,q2,q3) = I_3(p1,p3,p2 | q1,q3,q2)`.
pub fn check_3_semisymmetry(m: &dyn Measure, pair: &DistPair) -> Result<f64> {
    let (lhs, rhs) = three_semisymmetry_sides(m, pair)?;
    residual_between(lhs, rhs)
}

fn generalized_additivity_sides(
    m: &dyn Measure,
    alpha: Alpha,
    outer_n: usize,
    inner_m: usize,
    grid: &DistPair,
) -> Result<(f64, f64)> {
    expect_domain(m, grid)?;
    if outer_n < 2 || inner_m < 2 {
        return Err(Error::InvalidArgument {
            reason: format!("additivity needs outer and inner >= 2, got {outer_n}x{inner_m}"),
        });
    }
    if grid.len() != outer_n * inner_m {
        return Err(Error::InvalidArgument {
            reason: format!(
                "grid length {} does not match {outer_n}x{inner_m}",
                grid.len()
            ),
        });
    }
    let kind = grid.domain_kind();
    let p = grid.p().entries();
    let q = grid.q().entries();

    let mut marg_p = Vec::with_capacity(outer_n);
    let mut marg_q = Vec::with_capacity(outer_n);
    for i in 0..outer_n {
        let block = i * inner_m..(i + 1) * inner_m;
        marg_p.push(p[block.clone()].iter().sum::<f64>());
        marg_q.push(q[block].iter().sum::<f64>());
    }
    let marginals = DistPair::new(
        Distribution::validate(marg_p.clone(), kind)?,
        Distribution::validate(marg_q.clone(), kind)?,
    )?;

    let lhs = m.evaluate(grid);
    let mut rhs = m.evaluate(&marginals);
    for i in 0..outer_n {
        let coeff = block_coefficient(marg_p[i], marg_q[i], alpha);
        if coeff == 0.0 {
            continue;
        }
        let block = i * inner_m..(i + 1) * inner_m;
        let cond_p: Result<Vec<f64>> = p[block.clone()]
            .iter()
            .map(|&x| ratio_convention(x, marg_p[i]))
            .collect();
        let cond_q: Result<Vec<f64>> = q[block]
            .iter()
            .map(|&x| ratio_convention(x, marg_q[i]))
            .collect();
        let conditional = DistPair::new(
            Distribution::validate(cond_p?, kind)?,
            Distribution::validate(cond_q?, kind)?,
        )?;
        rhs += coeff * m.evaluate(&conditional);
    }
    Ok((lhs, rhs))
}

/// Residual of the two-stage refinement identity
/// `I_nm(grid) = I_n(marginals) + sum_i P_i^a Q_i^(1-a) I_m(conditional_i)`.
pub fn check_generalized_additivity(
    m: &dyn Measure,
    alpha: Alpha,
    outer_n: usize,
    inner_m: usize,
    grid: &DistPair,
) -> Result<f64> {
    let (lhs, rhs) = generalized_additivity_sides(m, alpha, outer_n, inner_m, grid)?;
    residual_between(lhs, rhs)
}

fn expansibility_sides(m: &dyn Measure, pair: &DistPair) -> Result<(f64, f64)> {
    expect_domain(m, pair)?;
    let padded = pair.append_zeros()?;
    Ok((m.evaluate(&padded), m.evaluate(pair)))
}

/// Residual of `I_{n+1}(p..0 | q..0) = I_n(p | q)`. Closed domain.
pub fn check_expansibility(m: &dyn Measure, pair: &DistPair) -> Result<f64> {
    let (lhs, rhs) = expansibility_sides(m, pair)?;
    residual_between(lhs, rhs)
}

/// `|I_2(1, 0 | 1, 0)|`. Closed domain.
pub fn check_decisivity(m: &dyn Measure) -> Result<f64> {
    if m.domain_kind() != DomainKind::Closed {
        return Err(Error::DomainMismatch {
            expected: DomainKind::Closed,
            actual: m.domain_kind(),
        });
    }
    let d = Distribution::closed(vec![1.0, 0.0])?;
    let pair = DistPair::new(d.clone(), d)?;
    Ok(m.evaluate(&pair).abs())
}

/// `|I_2(p | p)|` for a two-point distribution.
pub fn check_self_distance(m: &dyn Measure, p: &Distribution) -> Result<f64> {
    if p.len() != 2 {
        return Err(Error::InvalidArgument {
            reason: format!("self-distance is checked at n = 2, got {}", p.len()),
        });
    }
    let pair = DistPair::new(p.clone(), p.clone())?;
    expect_domain(m, &pair)?;
    Ok(m.evaluate(&pair).abs())
}

/// Suite configuration: per-trial seeds derive deterministically from
/// `seed`, so reports do not depend on evaluation order or thread count.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Trials per axiom and per size.
    pub trials: u32,
    /// Recursivity runs n in 3..=n_max, expansibility n in 2..=n_max.
    pub n_max: usize,
    /// (outer, inner) block shapes for generalized additivity.
    pub nm_combos: Vec<(usize, usize)>,
    pub tolerance: Tolerance,
    pub min_component: f64,
    pub threads: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            trials: 200,
            n_max: 8,
            nm_combos: default_nm_combos(),
            tolerance: Tolerance::default(),
            min_component: 1e-9,
            threads: 1,
        }
    }

    fn check(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig {
                reason: "trials must be >= 1".into(),
            });
        }
        if self.n_max < 3 {
            return Err(Error::InvalidConfig {
                reason: format!("n_max must be >= 3, got {}", self.n_max),
            });
        }
        if self.threads < 1 {
            return Err(Error::InvalidConfig {
                reason: "threads must be >= 1".into(),
            });
        }
        if self.nm_combos.iter().any(|&(n, m)| n < 2 || m < 2) {
            return Err(Error::InvalidConfig {
                reason: "additivity blocks need outer, inner >= 2".into(),
            });
        }
        Ok(())
    }
}

/// The (outer, inner) shapes {2,3,4}^2.
pub fn default_nm_combos() -> Vec<(usize, usize)> {
    let mut combos = Vec::new();
    for n in 2..=4 {
        for m in 2..=4 {
            combos.push((n, m));
        }
    }
    combos
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut s = splitmix64(master);
    for &p in parts {
        s = splitmix64(s ^ p);
    }
    s
}

/// Master seed for one measure's suite within a multi-measure run.
pub fn suite_seed(master: u64, measure_index: u64) -> u64 {
    derive_seed(master, &[0xC11, measure_index])
}

/// Sampling seed for one trial of a sweep outside the suite (the
/// reconstruction command uses this).
pub fn trial_seed(master: u64, alpha: Alpha, size: u64, index: u32) -> u64 {
    derive_seed(
        master,
        &[0x7EC0, alpha.value().to_bits(), size, index as u64],
    )
}

#[derive(Debug, Clone, Copy)]
struct TrialSpec {
    axiom: Axiom,
    /// Pair length for recursivity/expansibility; (outer, inner) for
    /// additivity; unused otherwise.
    size: (usize, usize),
    index: u32,
}

struct TrialOutcome {
    score: f64,
    residual: f64,
    reference: f64,
    witness: Witness,
    incomparable: bool,
}

struct TrialContext<'a> {
    measure: &'a dyn Measure,
    alpha: Alpha,
    config: &'a SuiteConfig,
}

impl TrialContext<'_> {
    fn sampler(&self, spec: &TrialSpec, n: usize) -> Result<SimplexSampler> {
        let seed = derive_seed(
            self.config.seed,
            &[
                spec.axiom.label().len() as u64 ^ axiom_tag(spec.axiom),
                self.alpha.value().to_bits(),
                spec.size.0 as u64,
                spec.size.1 as u64,
                spec.index as u64,
            ],
        );
        SimplexSampler::new(
            SamplerConfig::new(seed, n).with_min_component(self.config.min_component),
        )
    }

    fn run(&self, spec: &TrialSpec) -> Result<TrialOutcome> {
        let domain = self.measure.domain_kind();
        let (sides, witness) = match spec.axiom {
            Axiom::AlphaRecursivity => {
                let n = spec.size.0;
                let pair = self.sampler(spec, n)?.sample_pair(domain)?;
                let sides = alpha_recursivity_sides(self.measure, self.alpha, &pair);
                (sides, witness_of(&pair, format!("n={n}")))
            }
            Axiom::ThreeSemisymmetry => {
                let pair = self.sampler(spec, 3)?.sample_pair(domain)?;
                let sides = three_semisymmetry_sides(self.measure, &pair);
                (sides, witness_of(&pair, "swap coordinates 2,3".into()))
            }
            Axiom::GeneralizedAdditivity => {
                let (on, im) = spec.size;
                let grid = self.sampler(spec, on * im)?.sample_pair(domain)?;
                let sides = generalized_additivity_sides(self.measure, self.alpha, on, im, &grid);
                (sides, witness_of(&grid, format!("outer={on} inner={im}")))
            }
            Axiom::Expansibility => {
                let n = spec.size.0;
                let pair = self.sampler(spec, n)?.sample_pair(domain)?;
                let sides = expansibility_sides(self.measure, &pair);
                (sides, witness_of(&pair, format!("append zero at n={n}")))
            }
            Axiom::Decisivity => {
                let residual = check_decisivity(self.measure)?;
                let witness = Witness {
                    p: vec![1.0, 0.0],
                    q: vec![1.0, 0.0],
                    detail: "fixed point".into(),
                };
                return Ok(self.outcome(residual, 0.0, witness));
            }
            Axiom::SelfDistanceZero => {
                let p = self.sampler(spec, 2)?.sample()?;
                let p = match domain {
                    DomainKind::Open => p,
                    DomainKind::Closed => p.as_closed(),
                };
                let residual = check_self_distance(self.measure, &p)?;
                let witness = Witness {
                    p: p.entries().to_vec(),
                    q: p.entries().to_vec(),
                    detail: "two-point self pair".into(),
                };
                return Ok(self.outcome(residual, 0.0, witness));
            }
        };
        match sides {
            Ok((lhs, rhs)) => match residual_between(lhs, rhs) {
                Ok(residual) => Ok(self.outcome(residual, lhs, witness)),
                Err(Error::IncomparableInfinity) => Ok(TrialOutcome {
                    score: f64::INFINITY,
                    residual: f64::INFINITY,
                    reference: lhs,
                    witness,
                    incomparable: true,
                }),
                Err(e) => Err(e),
            },
            Err(e) => Err(e),
        }
    }

    fn outcome(&self, residual: f64, reference: f64, witness: Witness) -> TrialOutcome {
        let bound = self.config.tolerance.bound(reference);
        let score = if residual.is_finite() {
            residual / bound
        } else {
            f64::INFINITY
        };
        TrialOutcome {
            score,
            residual,
            reference,
            witness,
            incomparable: false,
        }
    }
}

fn axiom_tag(axiom: Axiom) -> u64 {
    match axiom {
        Axiom::AlphaRecursivity => 1,
        Axiom::ThreeSemisymmetry => 2,
        Axiom::GeneralizedAdditivity => 3,
        Axiom::Expansibility => 4,
        Axiom::Decisivity => 5,
        Axiom::SelfDistanceZero => 6,
    }
}

fn witness_of(pair: &DistPair, detail: String) -> Witness {
    Witness {
        p: pair.p().entries().to_vec(),
        q: pair.q().entries().to_vec(),
        detail,
    }
}

/// Run every applicable axiom on sampled instances and aggregate residuals.
///
/// Sampling is interior (strictly positive components) on both domains; the
/// closed-domain conventions are exercised by the expansibility trials
/// (which append a genuine zero), the decisivity fixed point, and by direct
/// calls to the check functions with boundary inputs.
pub fn run_axiom_suite(
    m: &dyn Measure,
    alpha: Alpha,
    config: &SuiteConfig,
) -> Result<Vec<AxiomReport>> {
    config.check()?;
    let mut specs = Vec::new();
    for axiom in Axiom::applicable(m.domain_kind()) {
        match axiom {
            Axiom::AlphaRecursivity => {
                for n in 3..=config.n_max {
                    for t in 0..config.trials {
                        specs.push(TrialSpec {
                            axiom,
                            size: (n, 0),
                            index: t,
                        });
                    }
                }
            }
            Axiom::ThreeSemisymmetry | Axiom::SelfDistanceZero => {
                for t in 0..config.trials {
                    specs.push(TrialSpec {
                        axiom,
                        size: (0, 0),
                        index: t,
                    });
                }
            }
            Axiom::GeneralizedAdditivity => {
                for &(on, im) in &config.nm_combos {
                    for t in 0..config.trials {
                        specs.push(TrialSpec {
                            axiom,
                            size: (on, im),
                            index: t,
                        });
                    }
                }
            }
            Axiom::Expansibility => {
                for n in 2..=config.n_max {
                    for t in 0..config.trials {
                        specs.push(TrialSpec {
                            axiom,
                            size: (n, 0),
                            index: t,
                        });
                    }
                }
            }
            Axiom::Decisivity => specs.push(TrialSpec {
                axiom,
                size: (0, 0),
                index: 0,
            }),
        }
    }

    let ctx = TrialContext {
        measure: m,
        alpha,
        config,
    };
    let outcomes = run_trials(&ctx, &specs)?;

    let mut reports = Vec::new();
    for axiom in Axiom::applicable(m.domain_kind()) {
        let mut trials = 0u32;
        let mut infinite_trials = 0u32;
        let mut worst: Option<&TrialOutcome> = None;
        let mut incomparable_witness: Option<&Witness> = None;
        for (spec, outcome) in specs.iter().zip(&outcomes) {
            if spec.axiom != axiom {
                continue;
            }
            trials += 1;
            if outcome.incomparable {
                infinite_trials += 1;
                incomparable_witness.get_or_insert(&outcome.witness);
                continue;
            }
            if worst.is_none_or(|w| outcome.score > w.score) {
                worst = Some(outcome);
            }
        }
        let (max_residual, tolerance_used, witness) = match worst {
            Some(w) => (
                w.residual,
                config.tolerance.bound(w.reference),
                Some(w.witness.clone()),
            ),
            None => (
                f64::INFINITY,
                config.tolerance.abs,
                incomparable_witness.cloned(),
            ),
        };
        let within = !max_residual.is_nan() && max_residual <= tolerance_used;
        let verdict = if infinite_trials > 0 || !within {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        reports.push(AxiomReport {
            axiom,
            trials,
            max_residual,
            worst_witness: witness,
            verdict,
            tolerance_used,
            infinite_trials,
        });
    }
    Ok(reports)
}

fn run_trials(ctx: &TrialContext<'_>, specs: &[TrialSpec]) -> Result<Vec<TrialOutcome>> {
    if ctx.config.threads <= 1 || specs.len() < 2 {
        return specs.iter().map(|s| ctx.run(s)).collect();
    }
    let chunk = specs.len().div_ceil(ctx.config.threads);
    let mut slots: Vec<Option<Result<TrialOutcome>>> = specs.iter().map(|_| None).collect();
    std::thread::scope(|scope| {
        for (spec_chunk, slot_chunk) in specs.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (spec, slot) in spec_chunk.iter().zip(slot_chunk.iter_mut()) {
                    *slot = Some(ctx.run(spec));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every trial slot filled"))
        .collect()
}
