//! Crooked halfspaces in R^{4n-1}, fundamental domains bounded by translated
//! crooked hyperplanes, and point location in the resulting tiling.

mod domain;
mod halfspace;
mod mesh;
mod quadruple;
mod sign;
mod tiling;

pub use domain::{build_domain, DisjointnessReport, Domain, DomainFile, DomainWall, PairReport, PairingCheck, WallEntry};
pub use halfspace::{CrookedHalfspace, StemQuadrant};
pub use mesh::{mesh_emit, Mesh, STEM_INVOLUTION};
pub use quadruple::{quadruple_disjointness, sampled_disjointness, sampled_nesting, QuadrupleReport, SampleCheck};
pub use sign::{region_of_coordinates, region_of_signs, sign_variation, Region, SignVariation, ZeroPolicy};
pub use tiling::{
    ball_point, domain_action, interior_points, relocation_check, tile_locate, tiling_experiment, Location,
    RelocationReport, TileFailure, TilingReport,
};

use crate::cocycle::CocycleError;
use crate::flags::FlagError;
use crate::numcore::NumError;
use crate::posrep::RepError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CrookedError {
    #[error("zero vector")]
    ZeroVector,
    #[error("ambiguous membership: {context}")]
    Ambiguous { context: String },
    #[error("{0}")]
    Invalid(String),
    #[error("flags are not a positive tuple: {0}")]
    NotPositive(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("side pairing of generator {gen} is off by {residual:e}")]
    SidePairing { gen: usize, residual: f64 },
    #[error("point not located within depth {0}")]
    DepthExceeded(usize),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

impl CrookedError {
    /// Failures caused by float sign decisions near zero.
    pub fn is_numeric_ambiguity(&self) -> bool {
        matches!(
            self,
            CrookedError::Ambiguous { .. } | CrookedError::Flag(FlagError::AmbiguousSign { .. })
        )
    }
}
