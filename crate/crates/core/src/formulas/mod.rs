//! Exact closed forms: the four aggregate contributions to a product
//! moment, the first-order log-ratio correction, series coefficients of the
//! single-factor moment, multinomial color identities, and the
//! log-factorial expansion lemma.

mod identities;
mod series;
mod terms;

pub use identities::{
    multinomial_identity_check, stirling_residual, LemmaInput, MultinomialIdentity,
    StirlingResidual,
};
pub use series::{moment_series_coeffs, SeriesCoeffs};
pub use terms::{
    color_symmetry_residual, disjoint_support_sum, first_order_log_ratio, marginal_product,
    restriction_kernel_ratio, shared_entry_sum, shared_line_sum, TermLabel, TermValue,
};
