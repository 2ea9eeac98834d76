//! Polar intersection numbers in the plane and polar linking numbers in
//! affine 3-space.

mod curveform;
mod geometry;
mod pairing;
mod points;

pub use curveform::{residue_2form_along_curve, CurveForm};
pub use geometry::{AmbientSpace, Plane};
pub use pairing::{
    boundary3, polar_intersection, polar_linking, polar_linking_sum, scale_chain, scale_cycle, verify_bounding,
    BoundingChain2, BoundingCheck, EmbeddedCycle1, Pairing, PairingTerm,
};
pub use points::{transverse_points, PointGroup};
