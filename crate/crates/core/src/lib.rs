//! Exact computation of l-modular gamma factors for tame characters and
//! level-zero representations of GL(2) over a p-adic field.
//!
//! The crate is organised bottom-up:
//!
//! - [`cyclo`]: exact arithmetic in cyclotomic integer rings `Z[zeta_M]`
//!   (and their fraction fields, for characteristic-zero checks).
//! - [`ffield`]: deterministic finite fields with discrete-log tables,
//!   trace, norm and Frobenius.
//! - [`artin`]: truncated polynomial algebras `F_{l^d}[Y]/(Y^N)` and
//!   Laurent rational functions over them.
//! - [`reduce`]: mod-l reduction homomorphisms `Z[zeta_M] -> F_{l^d}[Y]/(Y^N)`.
//! - [`chars`]: multiplicative and additive characters, nilpotent lifts and
//!   Gauss sums.
//! - [`gamma`]: closed-form gamma factors of tame GL(1) data and level-zero
//!   GL(2) inertial supports.
//! - [`explorer`]: enumeration of supports, twisted-gamma fingerprints and
//!   the partition into gamma-factor blocks.

pub mod arith;
pub mod artin;
pub mod chars;
pub mod cyclo;
mod error;
pub mod explorer;
pub mod ffield;
pub mod gamma;
pub mod reduce;
pub mod ring;

pub use artin::{ArtinAlg, ArtinElem, Laurent, LaurentRational};
pub use chars::{AddChar, MultChar, NilCharLift, RealizedAddChar};
pub use cyclo::{CycField, CycFrac, CycInt, CycRing};
pub use error::{Error, Result};
pub use ffield::{FqElem, FqField, Subfield};
pub use gamma::{
    CompareMode, ContextScope, GammaContext, GammaFactor, InertialSupport, TameCharData,
};
pub use reduce::ReductionMap;
pub use ring::{Ring, RingElem};
