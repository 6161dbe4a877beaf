//! Sign covariance `tau*`, its sample version `t*`, and permutation tests of
//! independence built on them.
//!
//! * [`kernels`]: the point kernels `s`, `a`, `h`, `phi` and quadruple classes.
//! * [`estimators`]: `t*`, `t*_b`, Kendall's t, chi-square, Hoeffding's H,
//!   the grade statistic D and the two-sample Cramér–von Mises distance.
//! * [`population`]: exact functionals of finite joint laws.
//! * [`permutation`]: Monte Carlo and exact permutation tests.
//! * [`dataio`]: text formats and the built-in datasets.

pub mod dataio;
pub mod error;
pub mod estimators;
pub mod kernels;
pub mod permutation;
pub mod population;

pub use dataio::{
    expand_table, parse_joint, parse_pairs, parse_table, tabulate_sample, Fixture, FixturePayload,
};
pub use error::{Error, Result};
pub use estimators::{
    cvm_statistic, dewet_d, hoeffding_h, hoeffding_h_oracle, kendall_t, pearson_chi_square, t_star,
    t_star_b, t_star_from_table, table_quadruple_contraction, ContingencyTable, EstimatorConfig,
    Method, Normalization, PairedSample,
};
pub use kernels::{
    a_kernel, a_kernel_metric, classify_quadruple, h_kernel, phi_kernel, sign_s, KernelId,
    QuadrupleClass,
};
pub use permutation::{
    exact_permutation_test, mc_stderr, permutation_test, Mode, Sidedness, StatisticId, TestResult,
};
pub use population::{
    counterexample_r8, mix_with_point_mass, pop_cvm_c_alpha, pop_quadruple_probs, pop_tau_star,
    pop_tau_star_binary, pop_tau_star_from_probs, sweep_3x3, CdfConvention, DiscreteLaw,
    JointDistribution, Margin, QuadrupleProbs, SweepReport,
};
