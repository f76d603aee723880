//! The irreducible representation of SL(2,R) on binary forms of degree
//! `4n-2` and the osculating flags of its rational normal curve.

use super::RepError;
use crate::flags::{is_positive_triple, FlagError, JForm, OrientedFlag};
use crate::freegroup::CirclePoint;
use crate::numcore::{Mat, Scalar, Tolerance};

/// Weight basis `b_k = sqrt(binom(m, k)) x^{m-k} y^k`, `m = 4n-2`, in which
/// the invariant form is `J`, plus the orientation sign of the curve's flags.
#[derive(Clone, Debug)]
pub struct SymPower<T> {
    n: usize,
    scales: Vec<T>,
    orientation: T,
}

fn binomial(m: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (m - i) as i64 / (i as i64 + 1))
}

/// Coefficients of `x^{m-k} y^k` in `(u_0 x + u_1 y)^a (v_0 x + v_1 y)^b`.
fn product_coefficients<T: Scalar>(u: &[T; 2], a: usize, v: &[T; 2], b: usize) -> Vec<T> {
    let mut p = vec![T::one()];
    for f in std::iter::repeat_n(u, a).chain(std::iter::repeat_n(v, b)) {
        let mut next = vec![T::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k] = next[k].clone() + c.clone() * f[0].clone();
            next[k + 1] = next[k + 1].clone() + c.clone() * f[1].clone();
        }
        p = next;
    }
    p
}

impl<T: Scalar> SymPower<T> {
    pub fn new(n: usize) -> Result<Self, RepError> {
        if n == 0 {
            return Err(FlagError::BadDimension(0).into());
        }
        let m = 4 * n - 2;
        let scales = (0..=m)
            .map(|k| T::from_i64(binomial(m, k)).sqrt().ok_or(RepError::Irrational))
            .collect::<Result<Vec<_>, _>>()?;
        let mut s = SymPower {
            n,
            scales,
            orientation: T::one(),
        };
        s.orientation = s.calibrate()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        4 * self.n - 1
    }

    /// `+1` or `-1`: the global sign that makes curve flags positively
    /// oriented and counter-clockwise triples positive.
    pub fn orientation(&self) -> &T {
        &self.orientation
    }

    fn coordinates(&self, u: &[T; 2], a: usize, v: &[T; 2], b: usize) -> Vec<T> {
        product_coefficients(u, a, v, b)
            .into_iter()
            .zip(&self.scales)
            .map(|(c, s)| c / s.clone())
            .collect()
    }

    /// Image of `g` acting on forms by linear substitution.
    pub fn image(&self, g: &Mat<T>) -> Result<Mat<T>, RepError> {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(crate::freegroup::GroupError::NotSl2.into());
        }
        let m = 4 * self.n - 2;
        let ge1 = [g[(0, 0)].clone(), g[(1, 0)].clone()];
        let ge2 = [g[(0, 1)].clone(), g[(1, 1)].clone()];
        let cols: Vec<Vec<T>> = (0..=m)
            .map(|k| {
                let s = self.scales[k].clone();
                self.coordinates(&ge1, m - k, &ge2, k)
                    .into_iter()
                    .map(|x| x * s.clone())
                    .collect()
            })
            .collect();
        Ok(Mat::from_columns(&cols)?)
    }

    /// Columns `p^{m-j} q^j` with `q` a clockwise quarter turn of the point
    /// `p`, times the orientation sign.
    pub fn curve_basis(&self, p: &CirclePoint<T>) -> Mat<T> {
        let m = 4 * self.n - 2;
        let u = [p.x.clone(), p.y.clone()];
        let v = [p.y.clone(), -p.x.clone()];
        let cols: Vec<Vec<T>> = (0..=m)
            .map(|j| {
                self.coordinates(&u, m - j, &v, j)
                    .into_iter()
                    .map(|x| x * self.orientation.clone())
                    .collect()
            })
            .collect();
        Mat::from_columns(&cols).expect("square")
    }

    pub fn flag(&self, p: &CirclePoint<T>) -> Result<OrientedFlag<T>, RepError> {
        Ok(OrientedFlag::from_basis_unchecked(self.curve_basis(&p.normalized()))?)
    }

    fn calibrate(&self) -> Result<T, RepError> {
        let tol = Tolerance::default();
        let pts: Vec<CirclePoint<T>> = [0.5, 2.5, 4.5].iter().map(|&a| CirclePoint::from_angle(a)).collect();
        let bases: Vec<Mat<T>> = pts.iter().map(|p| self.curve_basis(p)).collect();
        for sign in [T::one(), -T::one()] {
            let flags = bases
                .iter()
                .map(|b| OrientedFlag::from_basis_unchecked(b.scale(&sign)))
                .collect::<Result<Vec<_>, _>>()?;
            let oriented = bases[0].scale(&sign).det().exact_sign() == crate::numcore::Sign::Pos;
            if oriented && is_positive_triple(&flags[0], &flags[1], &flags[2], &tol)? {
                return Ok(sign);
            }
        }
        Err(RepError::Invalid("curve flags admit no consistent orientation".into()))
    }
}

/// `sigma(g)` in the weight basis; certified to preserve `J`.
pub fn sym_representation<T: Scalar>(g: &Mat<T>, n: usize) -> Result<Mat<T>, RepError> {
    let m = SymPower::new(n)?.image(g)?;
    if !JForm::new(n)?.preserves(&m, &Tolerance::default()) {
        let res = m.transpose().mul(&JForm::new(n)?.matrix()).mul(&m).sub(&JForm::new(n)?.matrix());
        return Err(RepError::NotInGroup {
            form: res.max_abs(),
            det: 0.0,
        });
    }
    Ok(m)
}

pub fn veronese_basis<T: Scalar>(p: &CirclePoint<T>, n: usize) -> Result<Mat<T>, RepError> {
    Ok(SymPower::new(n)?.curve_basis(p))
}

/// Osculating flag of the rational normal curve at `p`.
pub fn veronese_flag<T: Scalar>(p: &CirclePoint<T>, n: usize) -> Result<OrientedFlag<T>, RepError> {
    SymPower::new(n)?.flag(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::{is_isotropic_flag, is_positive_tuple, triple_margin};
    use crate::freegroup::sl2_inverse;
    use crate::numcore::{Dd, Rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sl2(rng: &mut ChaCha8Rng) -> Mat<f64> {
        let a: f64 = rng.gen_range(0.3..2.0);
        let b: f64 = rng.gen_range(-1.5..1.5);
        let c: f64 = rng.gen_range(-1.5..1.5);
        Mat::from_rows(vec![vec![a, b], vec![c, (1.0 + b * c) / a]]).unwrap()
    }

    #[test]
    fn diagonal_elements_act_by_weights() {
        let m = sym_representation(&Mat::diagonal(&[3.0, 1.0 / 3.0]), 1).unwrap();
        let expected = Mat::diagonal(&[9.0, 1.0, 1.0 / 9.0]);
        assert!(m.sub(&expected).max_abs() < 1e-14);
        let id = sym_representation(&Mat::<f64>::identity(2), 2).unwrap();
        assert!(id.sub(&Mat::identity(7)).max_abs() < 1e-15);
    }

    #[test]
    fn exact_backend_is_rejected() {
        assert!(matches!(SymPower::<Rational>::new(1), Err(RepError::Irrational)));
    }

    #[test]
    fn homomorphism_and_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=2 {
            let form = JForm::new(n).unwrap();
            let s = SymPower::<f64>::new(n).unwrap();
            for _ in 0..100 {
                let g = random_sl2(&mut rng);
                let h = random_sl2(&mut rng);
                let (sg, sh) = (s.image(&g).unwrap(), s.image(&h).unwrap());
                let prod = sg.mul(&sh);
                let scale = sg.max_abs() * sh.max_abs();
                assert!(s.image(&g.mul(&h)).unwrap().sub(&prod).max_abs() < 1e-13 * scale);
                let j: Mat<f64> = form.matrix();
                let form_res = sg.transpose().mul(&j).mul(&sg).sub(&j).max_abs();
                assert!(form_res < 1e-13 * sg.max_abs().powi(2));
                let inv = sg.mul(&s.image(&sl2_inverse(&g)).unwrap());
                assert!(inv.sub(&Mat::identity(4 * n - 1)).max_abs() < 1e-13 * scale);
            }
        }
    }

    #[test]
    fn curve_flags_are_isotropic_and_equivariant() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=2 {
            let form = JForm::new(n).unwrap();
            let s = SymPower::<f64>::new(n).unwrap();
            assert_eq!(*s.orientation(), -1.0);
            for _ in 0..20 {
                let p = CirclePoint::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
                let f = s.flag(&p).unwrap();
                assert!(is_isotropic_flag(&f, &form, &tol).unwrap());
                let g = random_sl2(&mut rng);
                let moved = s.flag(&p.mobius(&g)).unwrap();
                let pushed = f.transform(&s.image(&g).unwrap()).unwrap();
                assert!(moved.same_flag(&pushed, &tol).unwrap());
            }
            // Infinity is handled by the same formula.
            assert!(is_isotropic_flag(&s.flag(&CirclePoint::infinity()).unwrap(), &form, &tol).unwrap());
        }
    }

    #[test]
    fn counter_clockwise_points_give_positive_tuples() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=2 {
            let s = SymPower::<Dd>::new(n).unwrap();
            for _ in 0..20 {
                let mut a = rng.gen_range(0.0..std::f64::consts::TAU);
                let angles: Vec<f64> = (0..4)
                    .map(|_| {
                        a += rng.gen_range(0.6..1.6);
                        a
                    })
                    .collect();
                let flags: Vec<_> = angles.iter().map(|&a| s.flag(&CirclePoint::from_angle(a)).unwrap()).collect();
                assert!(is_positive_tuple(&flags, &tol).unwrap());
                assert!(triple_margin(&flags[0], &flags[1], &flags[2]).unwrap() > 0.0);
                let rev: Vec<_> = flags.iter().rev().cloned().collect();
                assert!(!is_positive_tuple(&rev, &tol).unwrap());
            }
        }
    }
}
