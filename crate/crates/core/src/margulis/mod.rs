//! Neutral vectors, Margulis invariants and the properness scan.

mod neutral;
mod scan;

pub use neutral::{
    neutral_of_element, MargulisContext, RegularCertificate, MIN_LOG_GAP, ROUTE_AGREEMENT, SPECTRAL_AGREEMENT,
};
pub use scan::{properness_scan, MargulisRecord, MargulisReport, Verdict, POSITIVITY_MARGIN};

use crate::cocycle::{AffineDeformation, CocycleError};
use crate::flags::{is_positive_tuple, FlagError, OrientedFlag};
use crate::freegroup::{GroupError, Word};
use crate::numcore::{normalized, NumError, Scalar};
use crate::posrep::RepError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MargulisError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error("{word} is not regular: {reason}")]
    NotRegular { word: String, reason: String },
    #[error("neutral vector of {word}: eigenvector {eigen:?} and flag computation {flag:?} disagree")]
    RouteDisagreement { word: String, eigen: Vec<f64>, flag: Vec<f64> },
    #[error("cannot orient the fixed flags of {word}")]
    AmbiguousOrientation { word: String },
    #[error("neutral vectors need square roots outside the exact backend")]
    Irrational,
    #[error("word {word}: {source}")]
    AtWord { word: String, source: Box<MargulisError> },
}

impl MargulisError {
    /// Failure caused by a quantity too close to zero to decide.
    pub fn is_numeric_ambiguity(&self) -> bool {
        match self {
            MargulisError::Num(NumError::AmbiguousSign { .. })
            | MargulisError::Flag(FlagError::AmbiguousSign { .. })
            | MargulisError::RouteDisagreement { .. }
            | MargulisError::AmbiguousOrientation { .. } => true,
            MargulisError::Rep(RepError::Flag(FlagError::AmbiguousSign { .. })) => true,
            MargulisError::AtWord { source, .. } => source.is_numeric_ambiguity(),
            _ => false,
        }
    }
}

/// `u(w) · x^0(rho(w))` under the form.
pub fn margulis_invariant<T: Scalar>(
    ctx: &MargulisContext<'_, T>,
    def: &AffineDeformation<T>,
    w: &Word,
) -> Result<T, MargulisError> {
    let cert = neutral_of_element(ctx, w)?;
    Ok(ctx.form().pair(&def.eval(w), &cert.neutral))
}

/// `alpha(h w h^{-1}) - alpha(w)`.
pub fn conjugacy_invariance_check<T: Scalar>(
    ctx: &MargulisContext<'_, T>,
    def: &AffineDeformation<T>,
    w: &Word,
    h: &Word,
) -> Result<f64, MargulisError> {
    let conj = h.concat(w).concat(&h.inverse());
    let a = margulis_invariant(ctx, def, &conj)?.to_f64();
    let b = margulis_invariant(ctx, def, w)?.to_f64();
    Ok(a - b)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Monotonicity {
    /// `x^0(g) · f <= x^0(h) · f`, with both sides.
    Holds { lower: f64, upper: f64 },
    Fails { lower: f64, upper: f64 },
    /// The flags `g^+, F, g^-, h^-, h^+` are not cyclically ordered.
    HypothesisViolated,
}

/// Slack allowed in the monotonicity inequality.
pub const MONOTONICITY_SLACK: f64 = 1e-10;

/// Checks `x^0(g) · f <= x^0(h) · f` for `f` on the first line of `flag`
/// when `g^+, flag, g^-, h^-, h^+` are cyclically ordered.
pub fn neutral_monotonicity_check<T: Scalar>(
    ctx: &MargulisContext<'_, T>,
    g: &Word,
    h: &Word,
    flag: &OrientedFlag<T>,
) -> Result<Monotonicity, MargulisError> {
    let cg = neutral_of_element(ctx, g)?;
    let ch = neutral_of_element(ctx, h)?;
    let order = [
        cg.attracting.clone(),
        flag.clone(),
        cg.repelling.clone(),
        ch.repelling.clone(),
        ch.attracting.clone(),
    ];
    // Coincident or nearly coincident flags cannot certify the hypothesis.
    match is_positive_tuple(&order, &ctx.tol) {
        Ok(true) => {}
        Ok(false) | Err(crate::flags::FlagError::AmbiguousSign { .. }) => return Ok(Monotonicity::HypothesisViolated),
        Err(e) => return Err(e.into()),
    }
    let f = normalized(&flag.line()).ok_or(NumError::NoConvergence)?;
    let lower = ctx.form().pair(&cg.neutral, &f).to_f64();
    let upper = ctx.form().pair(&ch.neutral, &f).to_f64();
    Ok(if lower <= upper + MONOTONICITY_SLACK {
        Monotonicity::Holds { lower, upper }
    } else {
        Monotonicity::Fails { lower, upper }
    })
}
