//! Exact functionals of finite joint laws.

mod constructions;
mod cvm;
mod functionals;
mod joint;

pub use constructions::{
    binary_joint, counterexample_r8, mix_with_point_mass, sweep_3x3, SweepReport,
};
pub use cvm::{pop_cvm_c_alpha, CdfConvention, DiscreteLaw};
pub use functionals::{
    pop_order_probs, pop_quadruple_probs, pop_quadruple_probs_enumerated, pop_tau_star,
    pop_tau_star_binary, pop_tau_star_from_probs, OrderProbs, QuadrupleProbs, MAX_ENUMERATED_CELLS,
    MAX_POSITIVE_CELLS,
};
pub use joint::{JointDistribution, Margin, PROBABILITY_SUM_TOLERANCE};
