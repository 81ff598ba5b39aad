//! Exact invariants of blow-up algebras of m-primary ideals in a polynomial
//! ring localized at the origin.

pub mod bigraded;
pub mod classical;
pub mod depth;
pub mod error;
pub mod filtration;
pub mod fitting;
pub mod groebner;
pub mod length;
pub mod monomial;
pub mod parse;
pub mod polynomial;
pub mod problem;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use groebner::{buchberger, normal_form, GroebnerBasis, Ideal};
pub use monomial::{monomial_compare, Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub use polynomial::{poly_add, poly_mul, Polynomial};
pub use scalar::{Field, Scalar};
pub use length::{local_length, monomial_length_oracle, is_locally_m_primary, LocalLengthResult};
pub use filtration::{generate_minimal_reduction, verify_reduction, PairContext};
pub use fitting::{fit_binomial_polynomial, BinomialPolynomial, SampleKind, SampledFunction};
pub use classical::{hilbert_coefficients, hilbert_h0, sally_coefficients, sally_length, HilbertData, SallyData};
pub use bigraded::{
    antidiagonal_total, build_report, delta_cap_p, delta_p, e0_sigma_p, k_piece_length, lambda_p,
    sigma_piece_length, BigradedReport,
};
pub use depth::{
    depth_gr, gr_presentation, is_regular_element, verify_theorems, DepthResult, GrPresentation,
    Status, Verdict,
};
pub use problem::{parse_problem, ProblemSpec, ReductionSpec};
pub use report::{
    corpus, emit_report, parse_report_json, run_command, run_corpus, Command, CorpusEntry,
    CorpusOutcome, Fixture, Format, Report, RunOptions,
};
