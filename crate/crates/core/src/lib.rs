//! Positive representations of free groups into SO(2n,2n-1), affine
//! deformations built from strip cocycles, Margulis invariants, and crooked
//! fundamental domains in R^{4n-1}.

pub mod numcore;
pub mod flags;
pub mod freegroup;
pub mod posrep;
pub mod cocycle;
pub mod margulis;
pub mod crooked;
