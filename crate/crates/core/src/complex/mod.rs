//! Polar 0- and 1-chains on curves, their boundary and homology.

mod chains;
mod homology;
mod mv;

pub use chains::{boundary1, is_admissible, poles_of, Chain0, Chain1, PuncturedCurve};
pub use homology::{
    hp0_finite_support, hp0_stabilized, hp1_punctured, hp_projective, FiniteSupport, ProjectiveHomology, Stabilized,
    SupportSampler, SupportSpace,
};
pub use mv::{mv_check, MvNode, MvPiece, MvReport};
