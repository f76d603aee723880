//! Crooked halfspaces, their stem quadrants, and sampling.

use rand::Rng;

use super::sign::{region_of_coordinates, Region, ZeroPolicy};
use super::CrookedError;
use crate::cocycle::AffineMap;
use crate::flags::{adapted_j_basis, random_flag_in_interval, JBasisPair, JForm, OrientedFlag};
use crate::numcore::{norm_inf, vadd, vscale, vsub, Mat, Scalar, Sign, Tolerance};

/// `H_E + translation`: the open halfspace of a J-basis `E`, moved.
#[derive(Clone, Debug, PartialEq)]
pub struct CrookedHalfspace<T> {
    basis: JBasisPair<T>,
    translation: Vec<T>,
}

impl<T: Scalar> CrookedHalfspace<T> {
    pub fn new(basis: JBasisPair<T>, translation: Vec<T>) -> Result<Self, CrookedError> {
        let d = basis.basis().cols();
        if translation.len() != d {
            return Err(CrookedError::Invalid(format!("translation has length {}, expected {d}", translation.len())));
        }
        JForm::from_dim(d)?;
        Ok(CrookedHalfspace { basis, translation })
    }

    /// `H(f, g) + translation`, with `f = F_E` and `g = F_Ê`.
    pub fn from_flags(
        f: &OrientedFlag<T>,
        g: &OrientedFlag<T>,
        translation: Vec<T>,
        tol: &Tolerance,
    ) -> Result<Self, CrookedError> {
        let form = JForm::from_dim(f.dim())?;
        Self::new(adapted_j_basis(f, g, &form, tol)?, translation)
    }

    /// The standard basis, untranslated.
    pub fn standard(n: usize) -> Result<Self, CrookedError> {
        let form = JForm::new(n)?;
        let d = form.dim();
        let basis = JBasisPair::new(Mat::identity(d), &form, &Tolerance::default())?;
        Self::new(basis, vec![T::zero(); d])
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn n(&self) -> usize {
        (self.dim() + 1) / 4
    }

    pub fn basis(&self) -> &JBasisPair<T> {
        &self.basis
    }

    pub fn translation(&self) -> &[T] {
        &self.translation
    }

    pub fn flags(&self) -> Result<(OrientedFlag<T>, OrientedFlag<T>), CrookedError> {
        Ok((self.basis.flag()?, self.basis.opposite_flag()?))
    }

    /// Halfspace of the opposite basis: the closure of the complement.
    pub fn opposite(&self) -> Self {
        CrookedHalfspace {
            basis: self.basis.opposite(),
            translation: self.translation.clone(),
        }
    }

    pub fn translated(&self, u: &[T]) -> Self {
        CrookedHalfspace {
            basis: self.basis.clone(),
            translation: vadd(&self.translation, u),
        }
    }

    /// Image under `x -> A x + b` with `A` preserving `J`.
    pub fn transformed(&self, map: &AffineMap<T>) -> Self {
        CrookedHalfspace {
            basis: JBasisPair::from_basis_unchecked(map.linear.mul(self.basis.basis())),
            translation: map.apply(&self.translation),
        }
    }

    /// Coordinates of `v - translation` in `E`.
    pub fn coordinates(&self, v: &[T]) -> Vec<T> {
        self.basis.coordinates(&vsub(v, &self.translation))
    }

    /// Point with the given coordinates.
    pub fn point(&self, coords: &[T]) -> Vec<T> {
        vadd(&self.basis.basis().mul_vec(coords), &self.translation)
    }

    pub fn region(&self, v: &[T], tol: &Tolerance) -> Result<Region, CrookedError> {
        region_of_coordinates(&self.coordinates(v), self.n(), tol, ZeroPolicy::Strict)
    }

    /// Region with near-zero float coordinates taken as zero; for points
    /// constructed on a wall.
    pub fn region_snapped(&self, v: &[T], tol: &Tolerance) -> Region {
        region_of_coordinates(&self.coordinates(v), self.n(), tol, ZeroPolicy::Snap).expect("snapped signs are decided")
    }

    pub fn in_open(&self, v: &[T], tol: &Tolerance) -> Result<bool, CrookedError> {
        Ok(self.region(v, tol)? == Region::Inside)
    }

    pub fn in_closed(&self, v: &[T], tol: &Tolerance) -> Result<bool, CrookedError> {
        Ok(self.region(v, tol)? != Region::Outside)
    }

    /// Translations that move the halfspace into itself.
    pub fn stem_quadrant(&self) -> StemQuadrant<T> {
        let d = self.dim();
        StemQuadrant {
            basis: self.basis.clone(),
            first: self.basis.e(0).into_iter().map(|x| -x).collect(),
            last: self.basis.e(d - 1),
        }
    }

    /// For a translation `u` with a nonzero interior coordinate, a point `v`
    /// of the closed halfspace with `v + u` outside it: `v` is zero where `u`
    /// is interior-nonzero, has equal large entries of the opposite sign on
    /// both sides, and `2n - 2` sign changes elsewhere. Adding `u` creates two
    /// more changes.
    pub fn non_stem_witness(&self, u: &[T], tol: &Tolerance) -> Option<Vec<T>> {
        let c = self.basis.coordinates(u);
        let d = c.len();
        let threshold = if T::EXACT { 0.0 } else { tol.eps_sign * norm_inf(&c).max(1.0) };
        let j = (1..d - 1).find(|&k| c[k].sign_with(threshold) != Sign::Zero)?;
        let s = c[j].sign_with(threshold).as_i8();
        let positions: Vec<usize> = (0..d).filter(|&k| k != j).collect();
        let mut changes_left = 2 * self.n() - 2;
        let mut signs = vec![1i8; d];
        for (idx, &k) in positions.iter().enumerate().skip(1) {
            let prev = positions[idx - 1];
            let flip = changes_left > 0 && !(prev == j - 1 && k == j + 1);
            signs[k] = if flip { -signs[prev] } else { signs[prev] };
            if flip {
                changes_left -= 1;
            }
        }
        if signs[j - 1] != -s {
            signs.iter_mut().for_each(|x| *x = -*x);
        }
        let big = 1.0 + 2.0 * norm_inf(&c);
        let coords: Vec<T> = (0..d)
            .map(|k| if k == j { T::zero() } else { T::from_f64(f64::from(signs[k]) * big) })
            .collect();
        Some(self.point(&coords))
    }

    /// Random point of the open halfspace: `x + c X_{2n}` with `X` a random
    /// flag in the interval from `F_E` to `F_Ê`, `x` in `X^{(2n-1)}`, `c > 0`.
    pub fn sample_open(&self, rng: &mut impl Rng, tol: &Tolerance) -> Result<Vec<T>, CrookedError> {
        let (f, g) = self.flags()?;
        let x = random_flag_in_interval(&f, &g, rng.gen(), tol)?;
        let mid = 2 * self.n() - 1;
        let mut v = vscale(&x.column(mid), &T::from_f64(log_uniform(rng)));
        for k in 0..mid {
            let c = log_uniform(rng) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            v = vadd(&v, &vscale(&x.column(k), &T::from_f64(c)));
        }
        Ok(vadd(&v, &self.translation))
    }

    /// Random point of the crooked hyperplane: random coordinates with a
    /// random set of zeros, kept when the signs put them on the wall.
    pub fn sample_wall(&self, rng: &mut impl Rng) -> Result<Vec<T>, CrookedError> {
        let d = self.dim();
        for _ in 0..10_000 {
            let coords: Vec<i64> = (0..d)
                .map(|_| if rng.gen::<bool>() { 0 } else { rng.gen_range(1..=64) * if rng.gen() { 1 } else { -1 } })
                .collect();
            let signs: Vec<Sign> = coords
                .iter()
                .map(|&c| match c.signum() {
                    1 => Sign::Pos,
                    -1 => Sign::Neg,
                    _ => Sign::Zero,
                })
                .collect();
            if coords.iter().all(|&c| c == 0) || super::sign::region_of_signs(&signs, self.n()) != Region::Wall {
                continue;
            }
            let coords: Vec<T> = coords.iter().map(|&c| T::from_ratio(c, 16)).collect();
            return Ok(self.point(&coords));
        }
        Err(CrookedError::Invalid("no wall point found".into()))
    }
}

fn log_uniform(rng: &mut impl Rng) -> f64 {
    10f64.powf(rng.gen_range(-1.0..1.0))
}

/// The cone spanned by `-e_1` and `e_d` of a J-basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StemQuadrant<T> {
    basis: JBasisPair<T>,
    first: Vec<T>,
    last: Vec<T>,
}

impl<T: Scalar> StemQuadrant<T> {
    /// `-e_1` and `e_d`.
    pub fn generators(&self) -> (&[T], &[T]) {
        (&self.first, &self.last)
    }

    /// `alpha (-e_1) + beta e_d`.
    pub fn combination(&self, alpha: &T, beta: &T) -> Vec<T> {
        vadd(&vscale(&self.first, alpha), &vscale(&self.last, beta))
    }

    /// Coordinates supported on the first and last index, first `<= 0`,
    /// last `>= 0`. Float coordinates below `eps_sign` count as zero.
    pub fn contains(&self, u: &[T], tol: &Tolerance) -> bool {
        let c = self.basis.coordinates(u);
        let d = c.len();
        let scale = norm_inf(&c).max(1.0);
        let (on_plane, signed) = if T::EXACT { (0.0, 0.0) } else { (tol.eps_eq * scale, tol.eps_sign * scale) };
        // Lying on the stem plane is an equality test.
        c[1..d - 1].iter().all(|x| x.sign_with(on_plane) == Sign::Zero)
            && c[0].sign_with(signed) != Sign::Pos
            && c[d - 1].sign_with(signed) != Sign::Neg
    }
}
