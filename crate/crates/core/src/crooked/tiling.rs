//! Locating points in the tiling by translates of the domain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CrookedError, Domain};
use crate::freegroup::{enumerate_words, ArcSide, Letter, Word};
use crate::numcore::{Scalar, Tolerance};

/// `point = (rho(word), u(word)) · reduced`, with `reduced` in the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Location<T> {
    pub word: Word,
    pub depth: usize,
    pub reduced: Vec<T>,
}

fn locate_once<T: Scalar>(
    p: &[T],
    domain: &Domain<T>,
    max_depth: usize,
    tol: &Tolerance,
) -> Result<Location<T>, CrookedError> {
    let mut x = p.to_vec();
    let mut letters: Vec<Letter> = Vec::new();
    for depth in 0..=max_depth {
        let hits = domain.walls_containing(&x, tol)?;
        let a = match hits.as_slice() {
            [] => {
                return Ok(Location {
                    word: Word::reduce(letters),
                    depth,
                    reduced: x,
                })
            }
            [a] => *a,
            _ => {
                return Err(CrookedError::Ambiguous {
                    context: format!("{} walls contain the point", hits.len()),
                })
            }
        };
        if depth == max_depth {
            break;
        }
        // Beyond a_{i,+} lies the tile of g_i; pull the point back by it.
        let l = Letter::new(a.gen, a.side == ArcSide::Minus);
        x = domain.pairing(l.gen, !l.inverse).apply(&x);
        letters.push(l);
    }
    Err(CrookedError::DepthExceeded(max_depth))
}

/// Walks `p` back into the domain across the wall containing it, one wall at
/// a time. An ambiguous step is retried once with `eps_sign / 10`.
pub fn tile_locate<T: Scalar>(
    p: &[T],
    domain: &Domain<T>,
    max_depth: usize,
    tol: &Tolerance,
) -> Result<Location<T>, CrookedError> {
    if max_depth == 0 {
        return Err(CrookedError::Invalid("max depth must be at least 1".into()));
    }
    match locate_once(p, domain, max_depth, tol) {
        Err(e) if e.is_numeric_ambiguity() => locate_once(p, domain, max_depth, &tol.tightened(10.0)),
        r => r,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileFailure {
    pub index: usize,
    pub point: Vec<f64>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    pub samples: usize,
    pub radius: f64,
    pub max_depth: usize,
    pub seed: u64,
    pub located: usize,
    pub success_fraction: f64,
    /// `depth_histogram[k]` points needed `k` steps.
    pub depth_histogram: Vec<usize>,
    pub failures: Vec<TileFailure>,
    /// Located points sent back by their word and located again.
    pub uniqueness_checked: usize,
    pub uniqueness_mismatches: usize,
}

impl TilingReport {
    pub fn passed(&self) -> bool {
        self.located == self.samples && self.uniqueness_mismatches == 0
    }

    /// Failures as CSV with columns `index,reason,x0,x1,...`.
    pub fn failures_csv(&self) -> Result<String, csv::Error> {
        let mut out = csv::Writer::from_writer(Vec::new());
        let d = self.failures.first().map_or(0, |f| f.point.len());
        let mut header = vec!["index".to_string(), "reason".to_string()];
        header.extend((0..d).map(|i| format!("x{i}")));
        out.write_record(&header)?;
        for f in &self.failures {
            let mut row = vec![f.index.to_string(), f.reason.clone()];
            row.extend(f.point.iter().map(|x| format!("{x:e}")));
            out.write_record(&row)?;
        }
        let bytes = out.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Uniform point of the Euclidean ball; the stream is chosen by `index`, so
/// points do not depend on evaluation order.
pub fn ball_point(d: usize, radius: f64, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let r = radius * rng.gen::<f64>().powf(1.0 / d as f64);
    g.iter().map(|x| x * r / norm).collect()
}

/// Locates `samples` uniform points of the ball of `radius`.
pub fn tiling_experiment<T: Scalar>(
    domain: &Domain<T>,
    samples: usize,
    radius: f64,
    max_depth: usize,
    seed: u64,
    tol: &Tolerance,
) -> TilingReport {
    let d = domain.dim();
    let results: Vec<(Vec<f64>, Result<Location<T>, CrookedError>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let p = ball_point(d, radius, seed, i as u64);
            let pt: Vec<T> = p.iter().map(|&x| T::from_f64(x)).collect();
            (p, tile_locate(&pt, domain, max_depth, tol))
        })
        .collect();
    let mut histogram = vec![0usize; max_depth + 1];
    let mut failures = Vec::new();
    let mut uniqueness_checked = 0;
    let mut uniqueness_mismatches = 0;
    for (i, (p, r)) in results.iter().enumerate() {
        match r {
            Ok(loc) => {
                histogram[loc.depth] += 1;
                // Spot check: send the reduced point out again.
                if i % 10 == 0 && !loc.word.is_empty() {
                    uniqueness_checked += 1;
                    let image = domain_action(domain, &loc.word).apply(&loc.reduced);
                    match tile_locate(&image, domain, max_depth, tol) {
                        Ok(again) if again.word == loc.word => {}
                        _ => uniqueness_mismatches += 1,
                    }
                }
            }
            Err(e) => failures.push(TileFailure {
                index: i,
                point: p.clone(),
                reason: e.to_string(),
            }),
        }
    }
    while histogram.len() > 1 && histogram.last() == Some(&0) {
        histogram.pop();
    }
    let located = samples - failures.len();
    TilingReport {
        samples,
        radius,
        max_depth,
        seed,
        located,
        success_fraction: if samples == 0 { 1.0 } else { located as f64 / samples as f64 },
        depth_histogram: histogram,
        failures,
        uniqueness_checked,
        uniqueness_mismatches,
    }
}

/// The affine map of `w` composed from the side pairings.
pub fn domain_action<T: Scalar>(domain: &Domain<T>, w: &Word) -> crate::cocycle::AffineMap<T> {
    let mut m = crate::cocycle::AffineMap::identity(domain.dim());
    for l in w.letters() {
        m = m.compose(domain.pairing(l.gen, l.inverse));
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelocationReport {
    pub points: usize,
    pub words: usize,
    /// `(point index, expected word, found word or error)`.
    pub mismatches: Vec<(usize, String, String)>,
}

impl RelocationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Locating `(rho(w), u(w)) q` for interior `q` returns `w`, for every
/// reduced `w` up to `max_len`.
pub fn relocation_check<T: Scalar>(
    domain: &Domain<T>,
    interior: &[Vec<T>],
    max_len: usize,
    tol: &Tolerance,
) -> RelocationReport {
    let words = enumerate_words(domain.rank(), max_len);
    let mismatches: Vec<(usize, String, String)> = interior
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, q)| {
            words.iter().filter_map(move |w| {
                let p = domain_action(domain, w).apply(q);
                match tile_locate(&p, domain, max_len + 1, tol) {
                    Ok(loc) if &loc.word == w => None,
                    Ok(loc) => Some((i, w.to_string(), loc.word.to_string())),
                    Err(e) => Some((i, w.to_string(), e.to_string())),
                }
            })
        })
        .collect();
    RelocationReport {
        points: interior.len(),
        words: words.len(),
        mismatches,
    }
}

/// Interior points of the domain drawn from the ball, in sample order.
pub fn interior_points<T: Scalar>(
    domain: &Domain<T>,
    count: usize,
    radius: f64,
    seed: u64,
    tol: &Tolerance,
) -> Vec<Vec<T>> {
    let d = domain.dim();
    let mut out = Vec::with_capacity(count);
    let mut i = 0u64;
    while out.len() < count && i < 1_000_000 {
        let p: Vec<T> = ball_point(d, radius, seed, i).into_iter().map(T::from_f64).collect();
        if matches!(domain.is_interior(&p, tol), Ok(true)) {
            out.push(p);
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crooked::build_domain;
    use crate::crooked::domain::tests::setup;
    use crate::numcore::Dd;

    #[test]
    fn origin_is_at_depth_zero() {
        let tol = Tolerance::for_scalar::<Dd>();
        let (b, def) = setup(1, 2);
        let d = build_domain(&def, &b, &tol).unwrap();
        let loc = tile_locate(&[Dd::from(0.0); 3], &d, 4, &tol).unwrap();
        assert!(loc.word.is_empty());
        assert_eq!(loc.depth, 0);
    }

    #[test]
    fn translates_of_interior_points_are_found() {
        let tol = Tolerance::for_scalar::<Dd>();
        for n in [1, 2] {
            let (b, def) = setup(n, 2);
            let d = build_domain(&def, &b, &tol).unwrap();
            let qs = interior_points(&d, 5, 1.0, 11, &tol);
            assert_eq!(qs.len(), 5);
            let r = relocation_check(&d, &qs, 3, &tol);
            assert!(r.passed(), "n={n}: {:?}", &r.mismatches[..r.mismatches.len().min(5)]);
        }
    }

    #[test]
    fn ball_is_covered() {
        let tol = Tolerance::for_scalar::<Dd>();
        let (b, def) = setup(1, 2);
        let d = build_domain(&def, &b, &tol).unwrap();
        let r = tiling_experiment(&d, 500, 10.0, 64, 1, &tol);
        assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(3)]);
        assert_eq!(r.depth_histogram.iter().sum::<usize>(), 500);
        let r0 = tiling_experiment(&d, 20, 0.0, 4, 1, &tol);
        assert_eq!(r0.depth_histogram, vec![20]);
    }

    #[test]
    fn ball_points_are_reproducible() {
        assert_eq!(ball_point(7, 3.0, 5, 17), ball_point(7, 3.0, 5, 17));
        assert_ne!(ball_point(7, 3.0, 5, 17), ball_point(7, 3.0, 5, 18));
        let p = ball_point(3, 2.0, 1, 0);
        assert!(p.iter().map(|x| x * x).sum::<f64>() <= 4.0);
    }
}
