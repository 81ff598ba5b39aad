//! Groebner bases and ideal arithmetic.

mod basis;
mod engine;
mod ideal;
mod modular;

pub use basis::{buchberger, buchberger_in, normal_form, GroebnerBasis};
pub use ideal::{count_standard_monomials, Ideal};
