//! Sampled certification of disjointness and nesting of crooked halfspaces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CrookedError, CrookedHalfspace, Region};
use crate::flags::{is_positive_tuple, OrientedFlag};
use crate::numcore::{Scalar, Tolerance};

/// Outcome of sampling one halfspace against another.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleCheck {
    pub samples: usize,
    /// Sampled points that broke the claim.
    pub violations: Vec<Vec<f64>>,
    /// Points whose membership could not be decided.
    pub ambiguous: usize,
}

impl SampleCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(&mut self, other: SampleCheck) {
        self.samples += other.samples;
        self.violations.extend(other.violations);
        self.ambiguous += other.ambiguous;
    }
}

/// Every tenth sample is taken on the wall, the rest in the open halfspace,
/// so both parts of the closure are exercised.
fn closure_samples<T: Scalar>(
    h: &CrookedHalfspace<T>,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Vec<Vec<T>>, CrookedError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|k| if k % 10 == 9 { h.sample_wall(&mut rng) } else { h.sample_open(&mut rng, tol) })
        .collect()
}

fn check<T: Scalar>(
    points: Vec<Vec<T>>,
    claim: impl Fn(&[T]) -> Result<bool, CrookedError>,
) -> SampleCheck {
    let mut out = SampleCheck {
        samples: points.len(),
        ..SampleCheck::default()
    };
    for p in points {
        match claim(&p) {
            Ok(true) => {}
            Ok(false) => out.violations.push(p.iter().map(Scalar::to_f64).collect()),
            Err(e) if e.is_numeric_ambiguity() => out.ambiguous += 1,
            Err(_) => out.violations.push(p.iter().map(Scalar::to_f64).collect()),
        }
    }
    out
}

/// Sampled points of each closure lie outside the other closure.
pub fn sampled_disjointness<T: Scalar>(
    a: &CrookedHalfspace<T>,
    b: &CrookedHalfspace<T>,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<SampleCheck, CrookedError> {
    let mut out = SampleCheck::default();
    let points = closure_samples(a, samples, seed, tol)?;
    out.merge(check(points, |p| Ok(b.region(p, tol)? == Region::Outside)));
    let points = closure_samples(b, samples, seed ^ 0x9e37_79b9, tol)?;
    out.merge(check(points, |p| Ok(a.region(p, tol)? == Region::Outside)));
    Ok(out)
}

/// Sampled points of the closure of `inner` lie in the open `outer`.
pub fn sampled_nesting<T: Scalar>(
    inner: &CrookedHalfspace<T>,
    outer: &CrookedHalfspace<T>,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<SampleCheck, CrookedError> {
    let points = closure_samples(inner, samples, seed, tol)?;
    Ok(check(points, |p| Ok(outer.region(p, tol)? == Region::Inside)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadrupleReport {
    /// Closures of `H(F, G)` and `H(G', F')` meet only at the origin.
    pub disjoint: SampleCheck,
    /// The closure of `H(G, G')` lies in `H(F, F')`.
    pub nested: SampleCheck,
}

impl QuadrupleReport {
    pub fn passed(&self) -> bool {
        self.disjoint.passed() && self.nested.passed()
    }
}

/// Sampled check of the two halfspace relations of a positive quadruple
/// `(F, G, G', F')` of isotropic flags.
pub fn quadruple_disjointness<T: Scalar>(
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    g2: &OrientedFlag<T>,
    f2: &OrientedFlag<T>,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<QuadrupleReport, CrookedError> {
    let quad = [f.clone(), g.clone(), g2.clone(), f2.clone()];
    if !is_positive_tuple(&quad, tol)? {
        return Err(CrookedError::NotPositive("(F, G, G', F')".into()));
    }
    let d = f.dim();
    let zero = vec![T::zero(); d];
    let h = |x: &OrientedFlag<T>, y: &OrientedFlag<T>| CrookedHalfspace::from_flags(x, y, zero.clone(), tol);
    let (fg, gf) = (h(f, g)?, h(g2, f2)?);
    let (inner, outer) = (h(g, g2)?, h(f, f2)?);
    Ok(QuadrupleReport {
        disjoint: sampled_disjointness(&fg, &gf, samples, seed, tol)?,
        nested: sampled_nesting(&inner, &outer, samples, seed.wrapping_add(1), tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::CirclePoint;
    use crate::numcore::Dd;
    use crate::posrep::veronese_flag;

    fn curve(t: f64, n: usize) -> OrientedFlag<Dd> {
        veronese_flag(&CirclePoint::real(Dd::from(t)), n).unwrap()
    }

    fn positive_order(ts: [f64; 4], n: usize, tol: &Tolerance) -> Vec<OrientedFlag<Dd>> {
        // The curve is positive in one of the two cyclic directions.
        let flags: Vec<_> = ts.iter().map(|&t| curve(t, n)).collect();
        if is_positive_tuple(&flags, tol).unwrap() {
            flags
        } else {
            flags.into_iter().rev().collect()
        }
    }

    #[test]
    fn veronese_quadruples_are_disjoint_and_nested() {
        let tol = Tolerance::for_scalar::<Dd>();
        for n in [1, 2] {
            let q = positive_order([0.0, 1.0, 2.0, 3.0], n, &tol);
            let report = quadruple_disjointness(&q[0], &q[1], &q[2], &q[3], 400, 7, &tol).unwrap();
            assert!(report.passed(), "n={n}: {report:?}");
            assert_eq!(report.disjoint.samples, 800);
        }
    }

    #[test]
    fn repeated_flag_is_rejected() {
        let tol = Tolerance::for_scalar::<Dd>();
        let q = positive_order([0.0, 1.0, 2.0, 3.0], 1, &tol);
        let r = quadruple_disjointness(&q[0], &q[1], &q[1], &q[3], 10, 1, &tol);
        assert!(r.is_err());
    }

    #[test]
    fn stem_translations_keep_disjointness() {
        let tol = Tolerance::for_scalar::<Dd>();
        for n in [1, 2] {
            let q = positive_order([0.0, 1.0, 2.0, 3.0], n, &tol);
            let zero = vec![Dd::from(0.0); 4 * n - 1];
            let a = CrookedHalfspace::from_flags(&q[0], &q[1], zero.clone(), &tol).unwrap();
            let b = CrookedHalfspace::from_flags(&q[2], &q[3], zero, &tol).unwrap();
            let ua = a.stem_quadrant().combination(&Dd::from(0.7), &Dd::from(1.3));
            let ub = b.stem_quadrant().combination(&Dd::from(2.0), &Dd::from(0.4));
            let report = sampled_disjointness(&a.translated(&ua), &b.translated(&ub), 400, 3, &tol).unwrap();
            assert!(report.passed(), "n={n}: {report:?}");
        }
    }
}
