//! The arc system dual to the Schottky generators and crossing sequences.
//!
//! The base tile is bounded by `2N` walls. The wall `a_{i,-}` spans the
//! interval of `g_i^{-1}` and `a_{i,+} = g_i a_{i,-}` spans the interval of
//! `g_i`. Both are lifts of one arc on the quotient, so they carry the
//! transverse orientation transported by `g_i`: `a_{i,+}` points away from
//! the base tile and `a_{i,-}` points into it. Leaving a tile through
//! `a_{i,+}` therefore counts `+1` and leaving through `a_{i,-}` counts `-1`.

use serde::{Deserialize, Serialize};

use super::circle::{same_point, CirclePoint};
use super::{GroupError, Letter, SchottkyData, Word};
use crate::numcore::{Scalar, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcSide {
    Minus,
    Plus,
}

/// One of the `2N` walls of the base tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BaseArc {
    pub gen: usize,
    pub side: ArcSide,
}

impl BaseArc {
    /// The wall crossed when leaving the base tile along `l`.
    pub fn of_letter(l: Letter) -> BaseArc {
        BaseArc {
            gen: l.gen,
            side: if l.inverse { ArcSide::Minus } else { ArcSide::Plus },
        }
    }

    pub fn all(rank: usize) -> impl Iterator<Item = BaseArc> {
        (0..rank).flat_map(|gen| {
            [ArcSide::Minus, ArcSide::Plus]
                .into_iter()
                .map(move |side| BaseArc { gen, side })
        })
    }

    /// Position in `all(rank)`.
    pub fn index(self) -> usize {
        2 * self.gen + usize::from(self.side == ArcSide::Plus)
    }

    /// Transverse sign of an outward crossing.
    pub fn outward_sign(self) -> i8 {
        match self.side {
            ArcSide::Plus => 1,
            ArcSide::Minus => -1,
        }
    }
}

impl std::fmt::Display for BaseArc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self.side {
            ArcSide::Minus => '-',
            ArcSide::Plus => '+',
        };
        write!(f, "a{}{}", self.gen + 1, s)
    }
}

/// Endpoints of an oriented wall: `plus` on the left of the transverse
/// orientation, `minus` on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryArc<T> {
    pub plus: CirclePoint<T>,
    pub minus: CirclePoint<T>,
}

impl<T: Scalar> BoundaryArc<T> {
    pub fn transform(&self, g: &crate::numcore::Mat<T>) -> BoundaryArc<T> {
        BoundaryArc {
            plus: self.plus.mobius(g),
            minus: self.minus.mobius(g),
        }
    }
}

/// Wall `prefix · arc`, crossed with transverse sign `sign`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub prefix: Word,
    pub arc: BaseArc,
    pub sign: i8,
}

impl Crossing {
    /// The same crossing seen after translating by `w`.
    pub fn translated(&self, w: &Word) -> Crossing {
        Crossing {
            prefix: w.concat(&self.prefix),
            ..self.clone()
        }
    }
}

impl std::fmt::Display for Crossing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{s}{}·{}", self.prefix, self.arc)
    }
}

/// Walls crossed by a path from the base tile to `w` times the base tile: the
/// `j`-th wall is `(l_1...l_{j-1}) · a(l_j)`.
pub fn crossing_sequence(w: &Word) -> Vec<Crossing> {
    w.letters()
        .iter()
        .enumerate()
        .map(|(j, &l)| {
            let arc = BaseArc::of_letter(l);
            Crossing {
                prefix: w.prefix(j),
                arc,
                sign: arc.outward_sign(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcSystem<T> {
    /// `[a_{i,-}, a_{i,+}]` per generator.
    arcs: Vec<[BoundaryArc<T>; 2]>,
}

impl<T: Scalar> ArcSystem<T> {
    pub fn dual(s: &SchottkyData<T>) -> Self {
        let arcs = (0..s.rank())
            .map(|i| {
                let iv = s.minus_interval(i);
                let minus = BoundaryArc {
                    plus: iv.start.clone(),
                    minus: iv.end.clone(),
                };
                let plus = minus.transform(&s.generators()[i]);
                [minus, plus]
            })
            .collect();
        ArcSystem { arcs }
    }

    /// Arc system from explicit walls; each `a_{i,+}` must be the image of
    /// `a_{i,-}` under `g_i`, endpoint by endpoint.
    pub fn from_walls(
        s: &SchottkyData<T>,
        walls: Vec<[BoundaryArc<T>; 2]>,
        tol: &Tolerance,
    ) -> Result<Self, GroupError> {
        if walls.len() != s.rank() {
            return Err(GroupError::Invalid(format!("{} wall pairs for rank {}", walls.len(), s.rank())));
        }
        for (i, [m, p]) in walls.iter().enumerate() {
            let img = m.transform(&s.generators()[i]);
            if !same_point(&img.plus, &p.plus, tol) || !same_point(&img.minus, &p.minus, tol) {
                return Err(GroupError::Invalid(format!("generator {i} does not pair its walls")));
            }
        }
        Ok(ArcSystem { arcs: walls })
    }

    pub fn rank(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, a: BaseArc) -> &BoundaryArc<T> {
        &self.arcs[a.gen][usize::from(a.side == ArcSide::Plus)]
    }

    /// Endpoints of the wall of a crossing, translated by its prefix.
    pub fn endpoints(&self, c: &Crossing, s: &SchottkyData<T>) -> BoundaryArc<T> {
        self.arc(c.arc).transform(&s.word_matrix(&c.prefix))
    }

    /// All `4N` wall endpoints in counter-clockwise order starting from
    /// `a_{1,-}`'s left endpoint.
    pub fn endpoints_ccw(&self) -> Vec<(BaseArc, ArcSide, CirclePoint<T>)> {
        let mut pts: Vec<(BaseArc, ArcSide, CirclePoint<T>)> = BaseArc::all(self.rank())
            .flat_map(|a| {
                let arc = self.arc(a);
                [(a, ArcSide::Plus, arc.plus.clone()), (a, ArcSide::Minus, arc.minus.clone())]
            })
            .collect();
        let base = pts[0].2.angle();
        let key = |p: &CirclePoint<T>| (p.angle() - base).rem_euclid(std::f64::consts::TAU);
        pts.sort_by(|a, b| key(&a.2).total_cmp(&key(&b.2)));
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{enumerate_words, is_counter_clockwise};
    use crate::numcore::{Dd, Rational};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn single_letters() {
        let c = crossing_sequence(&w("a"));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].prefix, Word::identity());
        assert_eq!(c[0].arc, BaseArc { gen: 0, side: ArcSide::Plus });
        assert_eq!(c[0].sign, 1);
        let c = crossing_sequence(&w("A"));
        assert_eq!(c[0].arc, BaseArc { gen: 0, side: ArcSide::Minus });
        assert_eq!(c[0].sign, -1);
        let c = crossing_sequence(&w("ab"));
        assert_eq!(c[1].prefix, w("a"));
        assert_eq!(c[1].arc, BaseArc { gen: 1, side: ArcSide::Plus });
    }

    #[test]
    fn inverse_letter_wall_is_translate_of_plus_wall() {
        // The wall crossed by g^{-1} is g^{-1} a_{1,+}.
        let tol = Tolerance::default();
        let s = SchottkyData::diagonal(Rational::from_i64(3), Rational::from_ratio(1, 2)).unwrap();
        let arcs = s.arc_system();
        let plus = arcs.arc(BaseArc { gen: 0, side: ArcSide::Plus });
        let back = plus.transform(&s.word_matrix(&w("A")));
        let minus = arcs.arc(BaseArc { gen: 0, side: ArcSide::Minus });
        assert!(same_point(&back.plus, &minus.plus, &tol));
        assert!(same_point(&back.minus, &minus.minus, &tol));
        assert!(ArcSystem::from_walls(&s, vec![[minus.clone(), plus.clone()]], &tol).is_ok());
        assert!(ArcSystem::from_walls(&s, vec![[plus.clone(), minus.clone()]], &tol).is_err());
    }

    #[test]
    fn walls_bound_the_base_tile() {
        // Endpoints alternate around the circle wall by wall: each wall's two
        // endpoints are adjacent.
        let s = SchottkyData::<Dd>::symmetric_rank2(std::f64::consts::PI / 6.0).unwrap();
        let arcs = s.arc_system();
        let pts = arcs.endpoints_ccw();
        assert_eq!(pts.len(), 8);
        for k in (0..8).step_by(2) {
            assert_eq!(pts[k].0, pts[k + 1].0);
        }
        let only: Vec<_> = pts.iter().map(|p| p.2.clone()).collect();
        assert!(is_counter_clockwise(&only, &Tolerance::default()));
    }

    #[test]
    fn walls_of_long_words_nest() {
        // Each crossed wall separates the previous tile from the next, so its
        // endpoints lie in the interval of the first letter.
        let tol = Tolerance::default();
        let s = SchottkyData::<Dd>::symmetric_rank2(std::f64::consts::PI / 6.0).unwrap();
        let arcs = s.arc_system();
        for word in enumerate_words(2, 4) {
            let first = s.interval(word.letters()[0]);
            for c in crossing_sequence(&word) {
                let e = arcs.endpoints(&c, &s);
                assert!(first.contains(&e.plus, &tol) && first.contains(&e.minus, &tol), "{word} {c}");
            }
        }
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, any::<bool>()), 0..8)
            .prop_map(|v| Word::reduce(v.into_iter().map(|(g, i)| Letter::new(g, i))))
    }

    proptest! {
        #[test]
        fn concatenation_splits(w1 in word_strategy(), w2 in word_strategy()) {
            let joined = w1.concat(&w2);
            prop_assume!(joined.len() == w1.len() + w2.len());
            let mut expected = crossing_sequence(&w1);
            expected.extend(crossing_sequence(&w2).iter().map(|c| c.translated(&w1)));
            prop_assert_eq!(crossing_sequence(&joined), expected);
        }

        #[test]
        fn one_crossing_per_letter(w in word_strategy()) {
            prop_assert_eq!(crossing_sequence(&w).len(), w.len());
        }
    }
}
