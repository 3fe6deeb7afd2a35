//! Wach modules over `A⁺_{K,F} = (W(F) ⊗ O_K)[[π]]` and their reductions.
//!
//! Rank-one modules are built from the `φ`-datum `(C̃, c⃗)` together with the
//! unique compatible `Γ`-action; rank-two lattices carry a distinguished
//! sub-line whose saturation in the reduction decides exactness.

mod rankone;
mod ranktwo;
mod witt;

pub use rankone::{reduce_mod_p, LambdaGamma, ReductionReport, WachContext, WachRankOne};
pub use ranktwo::{
    lift_is_open, saturation_check, ExtensionLattice, IdentityCheck, Mat2, Mat2Bar, ReducedLattice, SaturationReport,
    StructureReport, WachRankTwo,
};
pub use witt::{chi_digits_needed, gamma_pi, phi_pi, q_series, PadicSeries, WittElement, WittRing, MAX_MODULUS};
