//! Curve models, points and rational 1-forms.

mod differential;
mod divisor;
mod local;
mod model;
mod point;

pub use differential::{norm_poly, Differential1};
pub use divisor::{divisor_of, holomorphic_basis, rational_poles, residue_sum, residue_sum_check, third_kind, Divisor};
pub use local::{expansion, local_coefficients, ord_at, residue_at, residue_value, Chart};
pub use model::CurveModel;
pub use point::{canonical, fiber_orbits, geometric_count, orbit_set, short_label, x_minpoly, CurvePoint};
