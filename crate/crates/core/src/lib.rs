//! Edge-triangle exponential random graphs: replica-symmetric phase diagram,
//! exact mean-field distributions, brute-force enumeration for small graphs,
//! a Glauber sampler and a statistics harness tying them together.

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod numeric;
pub mod phase;

pub use error::{Error, Result};
pub use phase::{
    classify_phase, classify_phase_with, critical_curve_h, find_stationary_points,
    find_stationary_points_with, fixed_point_residual, free_energy, limiting_variance,
    mixture_weight, mixture_weight_kappa, objective, rate_function, rate_taylor_coefficients,
    LaplaceConstants, Maximizer, ModelParams, PhasePortrait, PointKind, RateExpansion, Regime,
    StationaryPoint, Tolerances, ALPHA_C, H_C, U_C,
};

pub mod meanfield;
pub use meanfield::{
    abs_deviation_scaled, conditional_distribution, exact_distribution, laplace_check,
    mean_edge_density, scaled_fluctuation_mgf, Centering, ConditionalWindow, EdgeDensityGrid,
    EnergyScale, ExactDistribution, LaplaceCheck, MeanFieldModel, Scaling,
};

pub mod enumerate;
pub use enumerate::{
    enumerate, lee_yang_zeros, polynomial_coefficients, ComplexZero, CountTable,
    EnumerationResult, PartitionPolynomial,
};

pub mod sampler;
pub use sampler::{
    run_chain, run_chains, ChainConfig, ChainTrace, GraphState, InitialState, Sampler,
};

pub mod stats;
pub mod verify;
pub use stats::{summarize, SummaryStats};
pub use verify::{
    verify_clt, verify_critical_scaling, verify_mixture, verify_mixture_sampler, verify_rate,
    verify_rate_sampler, verify_slln, ChainBudget, CriticalSource, TheoremVerdict, VerdictRow,
};
