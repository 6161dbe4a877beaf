//! Sample statistics.

mod classical;
mod dewet;
mod sample;
mod table;
mod taustar;

pub use classical::{
    cvm_statistic, hoeffding_h, hoeffding_h_oracle, kendall_t, pearson_chi_square,
};
pub use dewet::{dewet_d, dewet_fast, dewet_naive_count};
pub use sample::{EstimatorConfig, Method, Normalization, PairedSample};
pub use table::{t_star_from_table, table_quadruple_contraction, ContingencyTable, MAX_CATEGORIES};
pub use taustar::{
    t_star, t_star_b, t_star_naive, t_star_naive_count, t_star_pairwise, t_star_pairwise_count,
    t_star_subsample, SubsampleEstimate, MAX_NAIVE_N,
};

pub(crate) use classical::hoeffding_count;
pub(crate) use dewet::{dewet_expansion, dewet_scale, GradeDistances};
pub(crate) use sample::{dense_ranks, scaled_mid_grades};
pub(crate) use table::{
    check_increasing, guard_categories, metric_sign_tensor, sign_tensor, TableContraction,
};
pub(crate) use taustar::pairwise_count;
