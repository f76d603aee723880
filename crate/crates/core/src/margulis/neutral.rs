//! Spectra, fixed flags and neutral vectors of regular elements.
//!
//! Eigenvalues come from orthogonal iteration and eigenvectors from inverse
//! iteration, both in the working precision. The lower half of the spectrum is read off the
//! inverse (`J M^T J`), whose large eigenvalues are well conditioned; the
//! small eigenvalues of a long word are otherwise lost to cancellation.

use super::MargulisError;
use crate::flags::{neutral_vector, JForm, OrientedFlag};
use crate::freegroup::{mobius_fixed_points, translation_length, ArcSide, BaseArc, SchottkyData, Word};
use crate::numcore::{dot, norm_inf, normalized, vscale, vsub, Mat, NumError, Scalar, Tolerance};
use crate::posrep::{so_inverse, BoundaryMap};

/// Consecutive eigenvalues must differ by at least this much in log scale.
pub const MIN_LOG_GAP: f64 = 1e-6;
/// Relative agreement required between the spectra of `M` and `M^{-1}`, and
/// between the neutral eigenvalue and 1.
pub const SPECTRAL_AGREEMENT: f64 = 1e-6;
/// Maximal disagreement of the eigenvector and flag computations of `x^0`.
pub const ROUTE_AGREEMENT: f64 = 1e-7;

const ITERATIONS: usize = 10;
const MAX_SUBSPACE_ITERATIONS: usize = 2000;

/// Where the neutral vectors come from.
#[derive(Clone, Copy, Debug)]
pub struct MargulisContext<'a, T> {
    pub bmap: &'a BoundaryMap<T>,
    /// When present together with a Veronese boundary map, the fixed flags
    /// are the curve's flags at the Möbius fixed points of the word.
    pub schottky: Option<&'a SchottkyData<T>>,
    pub tol: Tolerance,
}

impl<'a, T: Scalar> MargulisContext<'a, T> {
    pub fn new(bmap: &'a BoundaryMap<T>, schottky: Option<&'a SchottkyData<T>>) -> Self {
        MargulisContext {
            bmap,
            schottky,
            tol: Tolerance::for_scalar::<T>(),
        }
    }

    pub fn form(&self) -> &JForm {
        self.bmap.representation().form()
    }
}

/// Certified data of a regular element.
#[derive(Clone, Debug)]
pub struct RegularCertificate<T> {
    pub word: Word,
    /// Sorted decreasing.
    pub eigenvalues: Vec<f64>,
    pub attracting: OrientedFlag<T>,
    pub repelling: OrientedFlag<T>,
    /// `x^0`, unit spacelike, from the flag computation.
    pub neutral: Vec<T>,
    /// Smallest `ln(lambda_k / lambda_{k+1})`.
    pub min_log_gap: f64,
    /// Relative distance between the two computations of `x^0`.
    pub route_gap: f64,
    pub translation_length: f64,
}

fn not_regular(w: &Word, reason: impl Into<String>) -> MargulisError {
    MargulisError::NotRegular {
        word: w.to_string(),
        reason: reason.into(),
    }
}

/// Orthonormal basis of the span of the top `count` eigenvectors by
/// orthogonal iteration, with the Rayleigh quotients of the Schur vectors.
fn dominant_subspace<T: Scalar>(a: &Mat<T>, count: usize, w: &Word) -> Result<(Vec<T>, Vec<Vec<T>>), MargulisError> {
    let d = a.rows();
    let target = (T::EPSILON * 1e4).max(1e-28);
    let mut q: Vec<Vec<T>> = (0..count)
        .map(|j| (0..d).map(|i| T::from_f64((1.0 + (i * (j + 2)) as f64 * 0.7).cos())).collect())
        .collect();
    q = orthonormalize(q)?;
    let mut history: Vec<f64> = Vec::new();
    for _ in 0..MAX_SUBSPACE_ITERATIONS {
        let next = orthonormalize(q.iter().map(|c| a.mul_vec(c)).collect())?;
        let change = next
            .iter()
            .zip(&q)
            .map(|(x, y)| norm_inf(&vsub(x, y)))
            .fold(0.0, f64::max);
        q = next;
        history.push(change);
        // Rounding in products with large entries puts a floor under the
        // change; a stalled but small change is accepted.
        let stalled = history.len() > 10 && change > 0.5 * history[history.len() - 6] && change < 1e-10;
        if change < target || stalled {
            let values = q.iter().map(|c| dot(c, &a.mul_vec(c))).collect();
            return Ok((values, q));
        }
    }
    Err(not_regular(w, "dominant eigenvalues are not separated or not real"))
}

/// Modified Gram-Schmidt, run twice.
fn orthonormalize<T: Scalar>(mut cols: Vec<Vec<T>>) -> Result<Vec<Vec<T>>, MargulisError> {
    for _ in 0..2 {
        for k in 0..cols.len() {
            for j in 0..k {
                let p = dot(&cols[j], &cols[k]);
                cols[k] = vsub(&cols[k], &vscale(&cols[j], &p));
            }
            cols[k] = normalized(&cols[k]).ok_or(NumError::Singular)?;
        }
    }
    Ok(cols)
}

/// Largest `count` eigenpairs, which must be positive: eigenvalues from
/// orthogonal iteration, eigenvectors by inverse iteration.
fn top_eigenpairs<T: Scalar>(a: &Mat<T>, count: usize, w: &Word) -> Result<Vec<(T, Vec<T>)>, MargulisError> {
    let (values, schur) = dominant_subspace(a, count, w)?;
    let d = a.rows();
    values
        .into_iter()
        .zip(schur)
        .map(|(guess, start)| {
            if guess.to_f64() <= 0.0 {
                return Err(not_regular(w, format!("eigenvalue {} is not positive", guess.to_f64())));
            }
            let shift = guess * T::from_f64(1.0 + 1e-10);
            let shifted = a.sub(&Mat::identity(d).scale(&shift));
            let mut x = start;
            for _ in 0..ITERATIONS {
                match shifted.solve(&x) {
                    Ok(y) => x = normalized(&y).ok_or(NumError::NoConvergence)?,
                    // The shift hit the eigenvalue exactly.
                    Err(NumError::Singular) => break,
                    Err(e) => return Err(e.into()),
                }
            }
            Ok((rayleigh(a, &x), x))
        })
        .collect()
}

/// `(A x)_i / x_i` at the largest component of `x`.
fn rayleigh<T: Scalar>(a: &Mat<T>, x: &[T]) -> T {
    let ax = a.mul_vec(x);
    let i = (0..x.len())
        .max_by(|&i, &j| x[i].to_f64().abs().total_cmp(&x[j].to_f64().abs()))
        .expect("nonempty");
    ax[i].clone() / x[i].clone()
}

/// Eigenvector for the eigenvalue 1 by inverse iteration.
fn neutral_eigenvector<T: Scalar>(m: &Mat<T>) -> Result<(T, Vec<T>), MargulisError> {
    let d = m.rows();
    let shifted = m.sub(&Mat::identity(d).scale(&T::from_f64(1.0 + 1e-9)));
    let mut x: Vec<T> = (0..d).map(|i| T::from_f64(1.0 + 0.1 * i as f64)).collect();
    for _ in 0..ITERATIONS {
        match shifted.solve(&x) {
            Ok(y) => x = normalized(&y).ok_or(NumError::NoConvergence)?,
            Err(NumError::Singular) => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok((rayleigh(m, &x), x))
}

/// Leading principal minors of `C`.
fn leading_minors<T: Scalar>(c: &Mat<T>) -> Vec<T> {
    let d = c.rows();
    (1..=d)
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            c.select(&idx, &idx).expect("in range").det()
        })
        .collect()
}

/// Orient the eigenbasis `cols` (ordered from attracting to repelling
/// directions) as the limit of `rho(w)^k G` for a boundary flag `G`: the
/// `k`-th prefix takes the sign of the `k`-th leading minor of `G` in
/// eigencoordinates. The wall endpoint with the best conditioned minors is
/// used.
fn orient_limit_flag<T: Scalar>(
    cols: Vec<Vec<T>>,
    bmap: &BoundaryMap<T>,
    w: &Word,
    tol: &Tolerance,
) -> Result<OrientedFlag<T>, MargulisError> {
    let basis = Mat::from_columns(&cols)?;
    let mut best: Option<(f64, Vec<T>)> = None;
    for a in BaseArc::all(bmap.arcs().rank()) {
        for end in [ArcSide::Plus, ArcSide::Minus] {
            let g = bmap.base_flag(a, end).basis();
            let unit: Vec<Vec<T>> = g.columns().iter().map(|c| normalized(c).unwrap_or_else(|| c.clone())).collect();
            let coords = basis.solve_many(&Mat::from_columns(&unit)?)?;
            let minors = leading_minors(&coords);
            let score = minors.iter().map(|m| m.to_f64().abs()).fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, minors));
            }
        }
    }
    let (score, minors) = best.expect("at least one wall");
    if !(score > tol.eps_sign) {
        return Err(MargulisError::AmbiguousOrientation { word: w.to_string() });
    }
    let mut prev_neg = false;
    let oriented: Vec<Vec<T>> = cols
        .into_iter()
        .zip(&minors)
        .map(|(c, m)| {
            let neg = m.to_f64() < 0.0;
            let flip = neg != prev_neg;
            prev_neg = neg;
            if flip {
                c.into_iter().map(|x| -x).collect()
            } else {
                c
            }
        })
        .collect();
    Ok(OrientedFlag::from_basis_unchecked(Mat::from_columns(&oriented)?)?)
}

/// Fixed flags from the boundary curve at the Möbius fixed points.
fn curve_flags<T: Scalar>(ctx: &MargulisContext<'_, T>, w: &Word) -> Option<Result<(OrientedFlag<T>, OrientedFlag<T>), MargulisError>> {
    let s = ctx.schottky?;
    let (attr, rep) = match mobius_fixed_points(&s.word_matrix(w)) {
        Ok(p) => p,
        Err(e) => return Some(Err(e.into())),
    };
    let fa = ctx.bmap.at_point(&attr)?;
    let fr = ctx.bmap.at_point(&rep)?;
    Some(fa.and_then(|a| fr.map(|r| (a, r))).map_err(MargulisError::from))
}

/// `(p, c)` with `w = p c p^-1` and `c` cyclically reduced.
fn split_conjugator(w: &Word) -> (Word, Word) {
    let l = w.letters();
    let mut k = 0;
    while 2 * k + 1 < l.len() && l[k] == l[l.len() - 1 - k].inv() {
        k += 1;
    }
    (Word::reduce(l[..k].iter().copied()), Word::reduce(l[k..l.len() - k].iter().copied()))
}

/// Certified spectrum, fixed flags and neutral vector of `rho(w)`.
pub fn neutral_of_element<T: Scalar>(ctx: &MargulisContext<'_, T>, w: &Word) -> Result<RegularCertificate<T>, MargulisError> {
    if w.is_empty() {
        return Err(not_regular(w, "identity"));
    }
    // Conjugates p c p^-1 are badly non-normal; work with the core c and
    // carry its flags and neutral vector over by rho(p).
    let (prefix, core) = split_conjugator(w);
    if !prefix.is_empty() {
        let g = ctx.bmap.representation().image(&prefix);
        let cert = neutral_of_element(ctx, &core)?;
        return Ok(RegularCertificate {
            word: w.clone(),
            attracting: cert.attracting.transform(&g)?,
            repelling: cert.repelling.transform(&g)?,
            neutral: g.mul_vec(&cert.neutral),
            ..cert
        });
    }
    let rep = ctx.bmap.representation();
    let form = ctx.form();
    let tol = &ctx.tol;
    let d = form.dim();
    let half = form.middle();
    let m = rep.image(w);
    let minv = so_inverse(&m, form);

    let top = top_eigenpairs(&m, half, w)?;
    let bottom = top_eigenpairs(&minv, half, w)?;
    let (mid_value, mid_vector) = neutral_eigenvector(&m)?;

    for ((l, _), (mu, _)) in top.iter().zip(&bottom) {
        let (l, mu) = (l.to_f64(), mu.to_f64());
        if ((l - mu) / l).abs() > SPECTRAL_AGREEMENT {
            return Err(not_regular(w, format!("spectrum not closed under inversion: {l} vs {mu}")));
        }
    }
    if (mid_value.to_f64() - 1.0).abs() > SPECTRAL_AGREEMENT {
        return Err(not_regular(w, format!("no eigenvalue 1 (found {})", mid_value.to_f64())));
    }
    let mut eigenvalues: Vec<f64> = top.iter().map(|(l, _)| l.to_f64()).collect();
    eigenvalues.push(1.0);
    eigenvalues.extend(bottom.iter().rev().map(|(mu, _)| 1.0 / mu.to_f64()));
    let min_log_gap = eigenvalues
        .windows(2)
        .map(|p| (p[0] / p[1]).ln())
        .fold(f64::INFINITY, f64::min);
    if !(min_log_gap > MIN_LOG_GAP) {
        return Err(not_regular(w, format!("eigenvalues not separated (log gap {min_log_gap:e})")));
    }

    let mut forward: Vec<Vec<T>> = top.iter().map(|(_, v)| v.clone()).collect();
    forward.push(mid_vector.clone());
    forward.extend(bottom.iter().rev().map(|(_, v)| v.clone()));
    let backward: Vec<Vec<T>> = forward.iter().rev().cloned().collect();
    let eigen_attracting = orient_limit_flag(forward, ctx.bmap, w, tol)?;
    let eigen_repelling = orient_limit_flag(backward, ctx.bmap, w, tol)?;

    let (attracting, repelling) = match curve_flags(ctx, w) {
        Some(flags) => flags?,
        None => (eigen_attracting, eigen_repelling),
    };
    let neutral = neutral_vector(&attracting, &repelling, form, tol)?;

    // Eigen route, oriented by the flag route and normalized under J.
    let sign = if dot(&mid_vector, &neutral).to_f64() < 0.0 { -T::one() } else { T::one() };
    let v = vscale(&mid_vector, &sign);
    let norm2 = form.pair(&v, &v);
    if norm2.to_f64() <= 0.0 {
        return Err(not_regular(w, "neutral eigenvector is not spacelike"));
    }
    let v = vscale(&v, &(T::one() / norm2.sqrt().ok_or(MargulisError::Irrational)?));
    let route_gap = norm_inf(&vsub(&v, &neutral)) / norm_inf(&neutral).max(1.0);
    if !(route_gap <= ROUTE_AGREEMENT) {
        return Err(MargulisError::RouteDisagreement {
            word: w.to_string(),
            eigen: v.iter().map(Scalar::to_f64).collect(),
            flag: neutral.iter().map(Scalar::to_f64).collect(),
        });
    }

    let translation_length = match ctx.schottky {
        Some(s) => translation_length(&s.word_matrix(w))?,
        // The top eigenvalue of the curve's image is lambda^(4n-2).
        None => eigenvalues[0].ln() / (d - 1) as f64 * 2.0,
    };
    Ok(RegularCertificate {
        word: w.clone(),
        eigenvalues,
        attracting,
        repelling,
        neutral,
        min_log_gap,
        route_gap,
        translation_length,
    })
}
