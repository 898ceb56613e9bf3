//! Oracles, manufactured solutions, convergence and rate measurements, and
//! the consistency checks for `z = t u'`.

mod corpus;
mod lemmas;
mod oracle;
mod rates;
mod zcheck;

pub use corpus::{corpus, corpus_forcings, CorpusEntry, CORPUS_ALPHAS};
pub use lemmas::{
    coercivity_pair, jbeta_l2_pair, jbeta_sup_pair, minkowski_pair, positivity_pair, rho_coercivity_pair, LemmaPair,
};
pub use oracle::{
    convergence_study, manufactured_source, max_node_error, mode_oracle, ConvergenceRow, ConvergenceTable,
    Manufactured, PowerMode,
};
pub use rates::{
    check_regularity_rates, fit_rate, RateFit, RateRow, RegularityConfig, RegularityReport, EXPONENT_TOL,
};
pub use zcheck::{f_bound, uz_identity_residual, z_consistency_check, ZReport};
