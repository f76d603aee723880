//! Schottky generators in SL(2,R) with their ping-pong intervals.

use serde::{Deserialize, Serialize};

use super::circle::{on_arc, same_point, sl2_inverse, translation_length, CirclePoint};
use super::{ArcSystem, GroupError, Letter, Word};
use crate::numcore::{mat_from_entries, mat_to_entries, Entry, Mat, MatEntries, Scalar, Sign, Tolerance};

/// Closed counter-clockwise arc of the circle from `start` to `end`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleInterval<T> {
    pub start: CirclePoint<T>,
    pub end: CirclePoint<T>,
}

impl<T: Scalar> CircleInterval<T> {
    pub fn new(start: CirclePoint<T>, end: CirclePoint<T>) -> Self {
        CircleInterval { start, end }
    }

    pub fn from_angles(start: f64, end: f64) -> Self {
        CircleInterval::new(CirclePoint::from_angle(start), CirclePoint::from_angle(end))
    }

    pub fn contains(&self, p: &CirclePoint<T>, tol: &Tolerance) -> bool {
        on_arc(p, &self.start, &self.end, tol)
    }

    /// Closed intervals share a point.
    pub fn meets(&self, other: &Self, tol: &Tolerance) -> bool {
        self.contains(&other.start, tol)
            || self.contains(&other.end, tol)
            || other.contains(&self.start, tol)
    }
}

/// Generators `g_i` with intervals: `g_i` maps the complement of `minus[i]`
/// into `plus[i]`. Generators are normalized to determinant one.
#[derive(Clone, Debug, PartialEq)]
pub struct SchottkyData<T> {
    gens: Vec<Mat<T>>,
    minus: Vec<CircleInterval<T>>,
    plus: Vec<CircleInterval<T>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PingPongReport {
    pub violations: Vec<String>,
}

impl PingPongReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<T: Scalar> SchottkyData<T> {
    pub fn new(
        gens: Vec<Mat<T>>,
        minus: Vec<CircleInterval<T>>,
        plus: Vec<CircleInterval<T>>,
    ) -> Result<Self, GroupError> {
        if gens.is_empty() || gens.len() != minus.len() || gens.len() != plus.len() {
            return Err(GroupError::Invalid(format!(
                "{} generators, {} minus intervals, {} plus intervals",
                gens.len(),
                minus.len(),
                plus.len()
            )));
        }
        let gens = gens
            .into_iter()
            .enumerate()
            .map(|(i, g)| normalize_det(g).map_err(|e| GroupError::Invalid(format!("generator {i}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, g) in gens.iter().enumerate() {
            translation_length(g).map_err(|e| GroupError::Invalid(format!("generator {i}: {e}")))?;
        }
        Ok(SchottkyData { gens, minus, plus })
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Mat<T>] {
        &self.gens
    }

    pub fn minus_interval(&self, i: usize) -> &CircleInterval<T> {
        &self.minus[i]
    }

    pub fn plus_interval(&self, i: usize) -> &CircleInterval<T> {
        &self.plus[i]
    }

    pub fn letter_matrix(&self, l: Letter) -> Mat<T> {
        let g = &self.gens[l.gen];
        if l.inverse {
            sl2_inverse(g)
        } else {
            g.clone()
        }
    }

    pub fn word_matrix(&self, w: &Word) -> Mat<T> {
        w.letters()
            .iter()
            .fold(Mat::identity(2), |acc, &l| acc.mul(&self.letter_matrix(l)))
    }

    /// Interval attached to a letter: `plus[i]` for `g_i`, `minus[i]` for its inverse.
    pub fn interval(&self, l: Letter) -> &CircleInterval<T> {
        if l.inverse {
            &self.minus[l.gen]
        } else {
            &self.plus[l.gen]
        }
    }

    /// Disjointness of all `2N` intervals and the ping-pong inclusions, checked
    /// on endpoint images.
    pub fn verify_ping_pong(&self, tol: &Tolerance) -> PingPongReport {
        let mut violations = Vec::new();
        let all: Vec<(String, &CircleInterval<T>)> = (0..self.rank())
            .flat_map(|i| {
                [
                    (format!("minus[{i}]"), &self.minus[i]),
                    (format!("plus[{i}]"), &self.plus[i]),
                ]
            })
            .collect();
        for (name, iv) in &all {
            if same_point(&iv.start, &iv.end, tol) {
                violations.push(format!("{name} is degenerate"));
            }
        }
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                if all[a].1.meets(all[b].1, tol) {
                    violations.push(format!("{} meets {}", all[a].0, all[b].0));
                }
            }
        }
        for (i, g) in self.gens.iter().enumerate() {
            // The complement of minus[i] runs from its end to its start.
            let img_first = self.minus[i].end.mobius(g);
            let img_last = self.minus[i].start.mobius(g);
            let plus = &self.plus[i];
            let inside = plus.contains(&img_first, tol)
                && plus.contains(&img_last, tol)
                && super::cyclic_sign(&plus.start, &img_first, &img_last, tol) != Sign::Neg
                && super::cyclic_sign(&img_first, &img_last, &plus.end, tol) != Sign::Neg;
            if !inside {
                violations.push(format!("generator {i} does not map the complement of minus[{i}] into plus[{i}]"));
            }
        }
        PingPongReport { violations }
    }

    /// Arc system dual to the generators: walls over the minus intervals and
    /// their images under the generators.
    pub fn arc_system(&self) -> ArcSystem<T> {
        ArcSystem::dual(self)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> SchottkyData<U> {
        let iv = |x: &CircleInterval<T>| CircleInterval::new(x.start.map(f), x.end.map(f));
        SchottkyData {
            gens: self.gens.iter().map(|g| g.map(f)).collect(),
            minus: self.minus.iter().map(iv).collect(),
            plus: self.plus.iter().map(iv).collect(),
        }
    }

    /// Rank-one group `diag(lambda, 1/lambda)` with `minus = [-r, r]` around 0
    /// and `plus` the complement of `(-lambda^2 r, lambda^2 r)`, around infinity.
    pub fn diagonal(lambda: T, r: T) -> Result<Self, GroupError> {
        let g = Mat::diagonal(&[lambda.clone(), T::one() / lambda.clone()]);
        let big = lambda.clone() * lambda * r.clone();
        SchottkyData::new(
            vec![g],
            vec![CircleInterval::new(CirclePoint::real(-r.clone()), CirclePoint::real(r))],
            vec![CircleInterval::new(CirclePoint::real(big.clone()), CirclePoint::real(-big))],
        )
    }

    /// Rank-two group with intervals of half-width `w` (radians) centered at
    /// angles `0, pi/2` (plus) and `pi, 3pi/2` (minus); requires `w < pi/4`.
    pub fn symmetric_rank2(w: f64) -> Result<Self, GroupError> {
        use std::f64::consts::{FRAC_PI_2, PI};
        if !(w > 0.0 && w < PI / 4.0) {
            return Err(GroupError::Invalid(format!("half-width {w} outside (0, pi/4)")));
        }
        let c = 1.0 / (w / 2.0).tan();
        let t: Mat<f64> = Mat::diagonal(&[c, 1.0 / c]);
        let rot = |beta: f64| {
            let (s, co) = (beta / 2.0).sin_cos();
            Mat::from_rows(vec![vec![co, s], vec![-s, co]]).expect("2x2")
        };
        let g2 = rot(FRAC_PI_2).mul(&t).mul(&rot(-FRAC_PI_2));
        let interval = |center: f64| CircleInterval::from_angles(center - w, center + w);
        let to_t = |m: &Mat<f64>| m.map(|x| T::from_f64(*x));
        SchottkyData::new(
            vec![to_t(&t), to_t(&g2)],
            vec![interval(PI), interval(3.0 * FRAC_PI_2)],
            vec![interval(0.0), interval(FRAC_PI_2)],
        )
    }

    pub fn to_file(&self) -> SchottkyFile {
        let ep = |p: &CirclePoint<T>| match (p.x.exact_string(), p.y.exact_string()) {
            (Some(_), Some(_)) if p.y.is_zero() => Endpoint::Real("inf".into()),
            (Some(_), Some(_)) => Endpoint::Real((p.x.clone() / p.y.clone()).exact_string().expect("exact")),
            _ => Endpoint::Angle(p.angle()),
        };
        let pair = |iv: &CircleInterval<T>| [ep(&iv.start), ep(&iv.end)];
        SchottkyFile {
            generators: self.gens.iter().map(mat_to_entries).collect(),
            intervals: (0..self.rank())
                .map(|i| IntervalPair {
                    minus: pair(&self.minus[i]),
                    plus: pair(&self.plus[i]),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &SchottkyFile) -> Result<Self, GroupError> {
        let bad = |e: String| GroupError::Invalid(e);
        let gens = file
            .generators
            .iter()
            .map(|m| mat_from_entries::<T>(m).map_err(bad))
            .collect::<Result<Vec<_>, _>>()?;
        let iv = |p: &[Endpoint; 2]| -> Result<CircleInterval<T>, GroupError> {
            Ok(CircleInterval::new(p[0].point()?, p[1].point()?))
        };
        let minus = file.intervals.iter().map(|p| iv(&p.minus)).collect::<Result<Vec<_>, _>>()?;
        let plus = file.intervals.iter().map(|p| iv(&p.plus)).collect::<Result<Vec<_>, _>>()?;
        SchottkyData::new(gens, minus, plus)
    }
}

/// Scales a positive-determinant 2x2 matrix to determinant one.
fn normalize_det<T: Scalar>(g: Mat<T>) -> Result<Mat<T>, String> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err("expected a 2x2 matrix".into());
    }
    let det = g.det();
    if det.exact_sign() != Sign::Pos {
        return Err(format!("determinant {} is not positive", det.to_f64()));
    }
    let root = det
        .sqrt()
        .ok_or_else(|| "determinant has no square root in this backend".to_string())?;
    Ok(g.map(|x| x.clone() / root.clone()))
}

/// Circle point in a Schottky file: a number is a disk angle in radians, a
/// string is a real coordinate on the line (`"p/q"` or `"inf"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Angle(f64),
    Real(String),
}

impl Endpoint {
    fn point<T: Scalar>(&self) -> Result<CirclePoint<T>, GroupError> {
        match self {
            Endpoint::Angle(a) if a.is_finite() => Ok(CirclePoint::from_angle(*a)),
            Endpoint::Angle(a) => Err(GroupError::Invalid(format!("bad angle {a}"))),
            Endpoint::Real(s) if s.trim() == "inf" => Ok(CirclePoint::infinity()),
            Endpoint::Real(s) => Entry::Text(s.clone())
                .to_scalar::<T>()
                .map(CirclePoint::real)
                .map_err(GroupError::Invalid),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalPair {
    pub minus: [Endpoint; 2],
    pub plus: [Endpoint; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchottkyFile {
    pub generators: Vec<MatEntries>,
    pub intervals: Vec<IntervalPair>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{Dd, Rational};

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    #[test]
    fn diagonal_rank_one_passes() {
        let tol = Tolerance::default();
        let s = SchottkyData::diagonal(q(3, 1), q(1, 2)).unwrap();
        assert!(s.verify_ping_pong(&tol).passed());
        // A plus interval that is too small fails.
        let small = SchottkyData::new(
            s.gens.clone(),
            s.minus.clone(),
            vec![CircleInterval::new(CirclePoint::real(q(10, 1)), CirclePoint::real(q(-10, 1)))],
        )
        .unwrap();
        assert!(!small.verify_ping_pong(&tol).passed());
    }

    #[test]
    fn symmetric_rank_two_passes() {
        let tol = Tolerance::default();
        let s = SchottkyData::<Dd>::symmetric_rank2(std::f64::consts::PI / 6.0).unwrap();
        let report = s.verify_ping_pong(&tol);
        assert!(report.passed(), "{:?}", report.violations);
        for g in s.generators() {
            assert!((g.det().to_f64() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn overlapping_intervals_fail() {
        let tol = Tolerance::default();
        let s = SchottkyData::<f64>::symmetric_rank2(0.5).unwrap();
        let mut minus = s.minus.clone();
        minus[1] = CircleInterval::from_angles(0.2, 1.0);
        let bad = SchottkyData::new(s.gens.clone(), minus, s.plus.clone()).unwrap();
        let report = bad.verify_ping_pong(&tol);
        assert!(report.violations.iter().any(|v| v.contains("meets")));
    }

    #[test]
    fn loading_normalizes_and_validates() {
        let two: Mat<Rational> = Mat::from_i64_rows(&[&[4, 0], &[0, 1]]);
        let s = SchottkyData::new(
            vec![two],
            vec![CircleInterval::new(CirclePoint::real(q(-1, 2)), CirclePoint::real(q(1, 2)))],
            vec![CircleInterval::new(CirclePoint::real(q(2, 1)), CirclePoint::real(q(-2, 1)))],
        )
        .unwrap();
        assert_eq!(s.gens[0], Mat::diagonal(&[q(2, 1), q(1, 2)]));
        let three: Mat<Rational> = Mat::from_i64_rows(&[&[3, 0], &[0, 1]]);
        let iv = s.minus.clone();
        assert!(SchottkyData::new(vec![three], iv.clone(), iv.clone()).is_err());
        let rot: Mat<Rational> = Mat::from_i64_rows(&[&[0, -1], &[1, 0]]);
        assert!(SchottkyData::new(vec![rot], iv.clone(), iv).is_err());
    }

    #[test]
    fn file_round_trip() {
        let s = SchottkyData::diagonal(q(3, 1), q(1, 2)).unwrap();
        let json = serde_json::to_string(&s.to_file()).unwrap();
        let file: SchottkyFile = serde_json::from_str(&json).unwrap();
        assert_eq!(SchottkyData::<Rational>::from_file(&file).unwrap(), s);

        let f = SchottkyData::<f64>::symmetric_rank2(0.6).unwrap();
        let back = SchottkyData::<f64>::from_file(&f.to_file()).unwrap();
        assert!(back.verify_ping_pong(&Tolerance::default()).passed());
    }

    #[test]
    fn word_matrices_multiply() {
        let s = SchottkyData::<f64>::symmetric_rank2(0.6).unwrap();
        let w: Word = "abA".parse().unwrap();
        let direct = s.gens[0].mul(&s.gens[1]).mul(&sl2_inverse(&s.gens[0]));
        assert!(s.word_matrix(&w).sub(&direct).max_abs() < 1e-12);
        let id = s.word_matrix(&w.concat(&w.inverse()));
        assert!(id.sub(&Mat::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn translation_length_is_a_class_function() {
        let s = SchottkyData::<f64>::symmetric_rank2(0.6).unwrap();
        for w in crate::freegroup::enumerate_words(2, 4) {
            let t = translation_length(&s.word_matrix(&w)).unwrap();
            for l in Letter::all(2) {
                let c = Word::letter(l).concat(&w).concat(&Word::letter(l.inv()));
                let tc = translation_length(&s.word_matrix(&c)).unwrap();
                assert!((t - tc).abs() < 1e-10, "{w} {l}");
            }
        }
    }
}
