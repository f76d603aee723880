//! Free groups: reduced words, Schottky generators acting on the circle, the
//! arc system dual to the generators, and crossing sequences.

mod arcs;
mod circle;
mod schottky;
mod word;

pub use arcs::{crossing_sequence, ArcSide, ArcSystem, BaseArc, BoundaryArc, Crossing};
pub use circle::{
    cyclic_sign, is_counter_clockwise, mobius_fixed_points, on_arc, same_point, sl2_inverse,
    trace, translation_length, CirclePoint,
};
pub use schottky::{CircleInterval, PingPongReport, SchottkyData, SchottkyFile};
pub use word::{conjugacy_representatives, enumerate_words, Letter, Word};

use crate::numcore::NumError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("expected a 2x2 matrix")]
    NotSl2,
    #[error("element is not hyperbolic (|trace| = {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("square root leaves the exact backend")]
    Irrational,
    #[error("invalid Schottky data: {0}")]
    Invalid(String),
}
