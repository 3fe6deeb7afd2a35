//! Computations with étale `(φ, Γ)`-modules over `F((π))`.
//!
//! The crate covers finite-field arithmetic, truncated Laurent series, the
//! Frobenius and `Γ` actions on `F_{p^f} ⊗ F((π))`, rank-one modules and their
//! extension cocycles, bounded-class detection, and the reduction of rank-one
//! and rank-two Wach modules.

pub mod bounded;
pub mod cocycle;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod rankone;
pub mod series;
pub mod tate;
pub mod wach;

pub use cocycle::{Basis, CoboundaryStatus, Cocycle, DecomposeResult};
pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldSpec};
pub use rankone::{weight_profiles, RankOneModule, Sign, WeightProfile};
pub use series::{nth_root_unit, one_plus_pi_pow, LaurentSeries, PadicInteger};
pub use tate::{GammaElement, PhiTwist, Precision, TateElement, TateRing};
