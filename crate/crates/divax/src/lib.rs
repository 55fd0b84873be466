//! Relative entropies and the functional equations that pin them down.
//!
//! The library evaluates the one-parameter divergence family
//!
//! ```text
//! D_n^a(p | q) = -sum_i p_i * ln_a(q_i / p_i)
//! ```
//!
//! on probability vectors, where `ln_a` is the deformed logarithm
//! `(x^(1-a) - 1) / (1 - a)` for `a != 1` and the natural logarithm at
//! `a = 1`. At `a = 1` this is the Kullback-Leibler divergence; elsewhere it
//! is the Tsallis relative entropy.
//!
//! Around the evaluator sits a verification harness: any relative
//! information measure (a callback per `n`) can be checked numerically
//! against the algebraic properties that characterize the family up to a
//! constant factor — a-recursivity, 3-semisymmetry, generalized additivity,
//! expansibility, decisivity, and vanishing self-distance — with residual
//! reports and worst-case witnesses. A reconstruction engine rebuilds an
//! a-recursive measure for every `n` from its two-point initial element,
//! and the explicit sum-form families close the loop on the
//! characterization side.
//!
//! The `divax` binary fronts all of this: batch divergence evaluation over
//! alpha grids, axiom suites over built-in (and intentionally broken)
//! measures, and reconstruction reports, in deterministic JSON or CSV.

use thiserror::Error;

pub mod axioms;
pub mod builtin;
pub mod cli;
pub mod divergence;
pub mod measure;
pub mod qlog;
pub mod reconstruction;
pub mod report;
pub mod simplex;
pub mod sum;

pub use axioms::{
    check_3_semisymmetry, check_alpha_recursivity, check_decisivity, check_expansibility,
    check_generalized_additivity, check_self_distance, run_axiom_suite, Axiom, AxiomReport,
    SuiteConfig, Tolerance, Verdict, Witness,
};
pub use divergence::{relative_entropy, relative_entropy_closed, DivergenceValue};
pub use measure::{FnMeasure, Measure, ScaledMeasure, TsallisDivergence};
pub use qlog::{ln_alpha, ln_alpha_inverse_arg, Alpha};
pub use reconstruction::{
    reconstruct, recursion_step, shannon_information_function, sum_form_measure,
    symmetry_equation_residual, unfold_recursion, InitialElement, SumFormParams,
};
pub use simplex::{
    pow_convention, ratio_convention, sample_simplex, DistPair, Distribution, DomainKind,
    SamplerConfig, SimplexSampler,
};

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("open-domain entry at index {index} is {value}; entries must be > 0")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("closed-domain entry at index {index} is {value}; entries must be >= 0")]
    NegativeEntry { index: usize, value: f64 },

    #[error("entries sum to {sum}, deviating from 1 by more than {tol:e}")]
    SumNotOne { sum: f64, tol: f64 },

    #[error("a distribution needs at least 2 entries, got {len}")]
    LengthTooSmall { len: usize },

    #[error("paired distributions have different lengths: {p_len} vs {q_len}")]
    LengthMismatch { p_len: usize, q_len: usize },

    #[error("paired distributions live on different domains")]
    DomainKindMismatch,

    #[error("operation requires the {expected} domain, got {actual}")]
    DomainMismatch {
        expected: simplex::DomainKind,
        actual: simplex::DomainKind,
    },

    #[error("deformed logarithm is undefined for x = {x}; requires x > 0")]
    DomainError { x: f64 },

    #[error("ratio {num}/{den} has a positive numerator over zero and is undefined")]
    UndefinedRatio { num: f64, den: f64 },

    #[error("alpha must be finite, got {value}")]
    NonFiniteAlpha { value: f64 },

    #[error(
        "sampler gave up after {attempts} rejected draws (n = {n}, min_component = {min_component})"
    )]
    ConfigInfeasible {
        attempts: u32,
        n: usize,
        min_component: f64,
    },

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("both sides of the identity are +infinity; the residual is undefined")]
    IncomparableInfinity,

    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
