//! Exact arithmetic: rationals, number fields, polynomials, series.

mod factor;
mod field;
mod linalg;
mod mpoly;
mod nf;
mod poly;
mod ratfunc;
pub mod roots;
mod scalar;
mod series;

pub use factor::{factor_mod_p_count, factor_rational, is_irreducible, squarefree_factor};
pub use field::{
    format_rat, parse_rat, rat, rat_sqrt, rat_to_decimal, rat_to_f64, ratio, squarefree_decompose, Field, Rat,
};
pub use linalg::{bareiss_det_poly, span_rank, Matrix};
pub use mpoly::{resultant, MPoly};
pub use nf::{poly_from_power_sums, trace_sum, Alg, NumberField};
pub use poly::Poly;
pub use ratfunc::{partial_fractions, PartialFractions, RatFunc};
pub use scalar::{Scalar, ScalarSum};
pub use series::Laurent;
