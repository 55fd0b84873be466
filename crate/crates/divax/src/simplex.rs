//! Probability vectors on the open and closed simplex, validation, uniform
//! sampling, and the zero conventions used on the closed domain.
//!
//! Open domain: every entry strictly positive. Closed domain: entries may be
//! zero. Sums must land within [`SUM_TOLERANCE`] of 1; nothing is silently
//! normalized — a function that normalizes would say so in its name.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sum::neumaier_sum;
use crate::{Error, Result};

/// Absolute tolerance on |sum - 1| accepted by [`Distribution::validate`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Rejection-sampling cap before the sampler reports its configuration
/// infeasible.
const RESAMPLE_CAP: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// Entries strictly positive.
    Open,
    /// Entries nonnegative.
    Closed,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Open => write!(f, "open"),
            DomainKind::Closed => write!(f, "closed"),
        }
    }
}

/// A validated probability vector. Entries are stored exactly as given.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    entries: Vec<f64>,
    domain_kind: DomainKind,
}

impl Distribution {
    /// Membership test for the simplex, made executable. Accepts exactly the
    /// vectors of the requested domain (up to [`SUM_TOLERANCE`] on the sum);
    /// the entries are stored unmodified.
    pub fn validate(entries: Vec<f64>, domain_kind: DomainKind) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::LengthTooSmall { len: entries.len() });
        }
        for (index, &value) in entries.iter().enumerate() {
            match domain_kind {
                DomainKind::Open => {
                    if value.is_nan() || value <= 0.0 {
                        return Err(Error::NonPositiveEntry { index, value });
                    }
                }
                DomainKind::Closed => {
                    if value.is_nan() || value < 0.0 {
                        return Err(Error::NegativeEntry { index, value });
                    }
                }
            }
            if !value.is_finite() {
                return Err(Error::SumNotOne {
                    sum: f64::INFINITY,
                    tol: SUM_TOLERANCE,
                });
            }
        }
        let sum = neumaier_sum(entries.iter().copied());
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumNotOne {
                sum,
                tol: SUM_TOLERANCE,
            });
        }
        Ok(Self {
            entries,
            domain_kind,
        })
    }

    pub fn open(entries: Vec<f64>) -> Result<Self> {
        Self::validate(entries, DomainKind::Open)
    }

    pub fn closed(entries: Vec<f64>) -> Result<Self> {
        Self::validate(entries, DomainKind::Closed)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn domain_kind(&self) -> DomainKind {
        self.domain_kind
    }

    /// Reinterpret on the closed domain. Always valid: the open simplex is a
    /// subset of the closed one.
    pub fn as_closed(&self) -> Distribution {
        Distribution {
            entries: self.entries.clone(),
            domain_kind: DomainKind::Closed,
        }
    }

    /// Append a zero outcome. Closed domain only.
    pub fn append_zero(&self) -> Result<Distribution> {
        if self.domain_kind != DomainKind::Closed {
            return Err(Error::DomainMismatch {
                expected: DomainKind::Closed,
                actual: self.domain_kind,
            });
        }
        let mut entries = self.entries.clone();
        entries.push(0.0);
        Ok(Distribution {
            entries,
            domain_kind: DomainKind::Closed,
        })
    }
}

/// A pair (p, q) of equal-length, same-domain distributions — the argument
/// of every relative information measure.
#[derive(Debug, Clone, PartialEq)]
pub struct DistPair {
    p: Distribution,
    q: Distribution,
}

impl DistPair {
    pub fn new(p: Distribution, q: Distribution) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::LengthMismatch {
                p_len: p.len(),
                q_len: q.len(),
            });
        }
        if p.domain_kind() != q.domain_kind() {
            return Err(Error::DomainKindMismatch);
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &Distribution {
        &self.p
    }

    pub fn q(&self) -> &Distribution {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn domain_kind(&self) -> DomainKind {
        self.p.domain_kind()
    }

    pub fn as_closed(&self) -> DistPair {
        DistPair {
            p: self.p.as_closed(),
            q: self.q.as_closed(),
        }
    }

    /// Append a zero outcome to both sides. Closed domain only.
    pub fn append_zeros(&self) -> Result<DistPair> {
        Ok(DistPair {
            p: self.p.append_zero()?,
            q: self.q.append_zero()?,
        })
    }

    /// Swap coordinates 2 and 3 of both sides (0-based indices 1 and 2).
    pub fn swapped_23(&self) -> Result<DistPair> {
        if self.len() < 3 {
            return Err(Error::InvalidArgument {
                reason: format!("need length >= 3 to swap, got {}", self.len()),
            });
        }
        let mut p = self.p.entries.clone();
        let mut q = self.q.entries.clone();
        p.swap(1, 2);
        q.swap(1, 2);
        Ok(DistPair {
            p: Distribution {
                entries: p,
                domain_kind: self.p.domain_kind,
            },
            q: Distribution {
                entries: q,
                domain_kind: self.q.domain_kind,
            },
        })
    }

    /// Replace (p1, p2) by p1 + p2 (likewise q), dropping to length n - 1.
    pub fn merge_first_two(&self) -> Result<DistPair> {
        if self.len() < 3 {
            return Err(Error::InvalidArgument {
                reason: format!("need length >= 3 to merge, got {}", self.len()),
            });
        }
        let merge = |d: &Distribution| {
            let mut entries = Vec::with_capacity(d.len() - 1);
            entries.push(d.entries[0] + d.entries[1]);
            entries.extend_from_slice(&d.entries[2..]);
            Distribution {
                entries,
                domain_kind: d.domain_kind,
            }
        };
        Ok(DistPair {
            p: merge(&self.p),
            q: merge(&self.q),
        })
    }

    /// The two-point conditional of the first block:
    /// `(p1/(p1+p2), p2/(p1+p2) | q1/(q1+q2), q2/(q1+q2))`.
    ///
    /// Returns `None` when both block sums vanish (closed domain), in which
    /// case the recursion term carries coefficient zero and the conditional
    /// never gets evaluated. A positive block over a zero block is undefined.
    pub fn first_block_conditional(&self) -> Result<Option<DistPair>> {
        if self.len() < 3 {
            return Err(Error::InvalidArgument {
                reason: format!("need length >= 3, got {}", self.len()),
            });
        }
        let ps = self.p.entries[0] + self.p.entries[1];
        let qs = self.q.entries[0] + self.q.entries[1];
        if ps == 0.0 && qs == 0.0 {
            return Ok(None);
        }
        if ps == 0.0 || qs == 0.0 {
            // Coefficient (p1+p2)^a (q1+q2)^(1-a) is zero here as well; the
            // caller skips the term without building the conditional.
            return Ok(None);
        }
        let kind = self.domain_kind();
        let cond = |a: f64, s: f64| ratio_convention(a, s);
        let p = Distribution::validate(
            vec![cond(self.p.entries[0], ps)?, cond(self.p.entries[1], ps)?],
            kind,
        )?;
        let q = Distribution::validate(
            vec![cond(self.q.entries[0], qs)?, cond(self.q.entries[1], qs)?],
            kind,
        )?;
        DistPair::new(p, q).map(Some)
    }
}

/// Configuration for uniform simplex sampling.
#[derive(Debug, Clone, Copy)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Rejection floor on every component; keeps x^(1-a) powers sane for
    /// the alpha grids this crate tests. Must be in [0, 1/n).
    pub min_component: f64,
    pub n: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, n: usize) -> Self {
        Self {
            seed,
            min_component: 1e-9,
            n,
        }
    }

    pub fn with_min_component(mut self, min_component: f64) -> Self {
        self.min_component = min_component;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig {
                reason: format!("sampler needs n >= 2, got {}", self.n),
            });
        }
        let limit = 1.0 / self.n as f64;
        if !(self.min_component >= 0.0 && self.min_component < limit) {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "min_component {} outside [0, 1/{})",
                    self.min_component, self.n
                ),
            });
        }
        Ok(())
    }
}

/// Uniform sampler on the open simplex: normalized independent unit-rate
/// exponential variates, resampled until every component clears the floor.
/// Deterministic given the seed; not shareable — parallel use needs
/// independent instances with distinct derived seeds.
pub struct SimplexSampler {
    rng: ChaCha8Rng,
    min_component: f64,
    n: usize,
}

impl SimplexSampler {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        config.check()?;
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            min_component: config.min_component,
            n: config.n,
        })
    }

    pub fn sample(&mut self) -> Result<Distribution> {
        for _ in 0..RESAMPLE_CAP {
            let mut draws = Vec::with_capacity(self.n);
            let mut total = 0.0;
            for _ in 0..self.n {
                let u: f64 = self.rng.random();
                let e = -(-u).ln_1p(); // -ln(1 - u), exact at u -> 0
                draws.push(e);
                total += e;
            }
            if total == 0.0 {
                continue;
            }
            for d in &mut draws {
                *d /= total;
            }
            if draws.iter().all(|&d| d >= self.min_component && d > 0.0) {
                return Distribution::validate(draws, DomainKind::Open);
            }
        }
        Err(Error::ConfigInfeasible {
            attempts: RESAMPLE_CAP,
            n: self.n,
            min_component: self.min_component,
        })
    }

    /// Two independent draws as a pair, reinterpreted on `kind`.
    pub fn sample_pair(&mut self, kind: DomainKind) -> Result<DistPair> {
        let p = self.sample()?;
        let q = self.sample()?;
        let pair = DistPair::new(p, q)?;
        Ok(match kind {
            DomainKind::Open => pair,
            DomainKind::Closed => pair.as_closed(),
        })
    }
}

/// One draw with a fresh sampler; see [`SimplexSampler`] for streams.
pub fn sample_simplex(config: SamplerConfig) -> Result<Distribution> {
    SimplexSampler::new(config)?.sample()
}

/// `x^e` under the closed-domain convention `0^e = 0` for every exponent,
/// including `e <= 0`. Requires `x >= 0`.
pub fn pow_convention(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(e)
    }
}

/// `num/den` under the closed-domain convention `0/0 = 0`. A positive
/// numerator over a zero denominator is not covered and errors.
pub fn ratio_convention(num: f64, den: f64) -> Result<f64> {
    if num == 0.0 {
        Ok(0.0)
    } else if den == 0.0 {
        Err(Error::UndefinedRatio { num, den })
    } else {
        Ok(num / den)
    }
}
