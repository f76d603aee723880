//! Vectors on the first lines of the boundary flags at wall endpoints.

use serde::{Deserialize, Serialize};

use super::CocycleError;
use crate::freegroup::{ArcSide, BaseArc, Word};
use crate::numcore::{normalized, vec_from_entries, vec_to_entries, vscale, vsub, Entry, Scalar, Sign, Tolerance};
use crate::posrep::{BoundaryMap, Representation};

/// `v_a^+`, `v_a^-` for the `2N` base walls. The walls `a_{i,-}` carry the
/// chosen vectors; `a_{i,+} = g_i a_{i,-}` carries their images under
/// `rho(g_i)`, so translates satisfy `v_{w a} = rho(w) v_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcVectors<T> {
    plus: Vec<Vec<T>>,
    minus: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcVectorEntry {
    pub arc: String,
    pub plus: Vec<Entry>,
    pub minus: Vec<Entry>,
}

impl<T: Scalar> ArcVectors<T> {
    /// Vectors `(v^+, v^-)` on each wall `a_{i,-}`.
    pub fn from_minus_walls(rep: &Representation<T>, chosen: Vec<(Vec<T>, Vec<T>)>) -> Result<Self, CocycleError> {
        if chosen.len() != rep.rank() {
            return Err(CocycleError::Invalid(format!("{} vector pairs for rank {}", chosen.len(), rep.rank())));
        }
        let d = rep.dim();
        let mut plus = Vec::with_capacity(2 * rep.rank());
        let mut minus = Vec::with_capacity(2 * rep.rank());
        for (i, (vp, vm)) in chosen.into_iter().enumerate() {
            if vp.len() != d || vm.len() != d {
                return Err(CocycleError::Invalid(format!("arc vectors must have length {d}")));
            }
            let g = rep.generator(i).matrix();
            let (gp, gm) = (g.mul_vec(&vp), g.mul_vec(&vm));
            // BaseArc::index order: a_{i,-} then a_{i,+}.
            plus.extend([vp, gp]);
            minus.extend([vm, gm]);
        }
        Ok(ArcVectors { plus, minus })
    }

    /// Unit positively oriented first-line vectors of the flags at the
    /// endpoints of `a_{i,-}`, times `scales[i]`.
    pub fn from_boundary(bmap: &BoundaryMap<T>, scales: &[T]) -> Result<Self, CocycleError> {
        let rank = bmap.representation().rank();
        if scales.len() != rank {
            return Err(CocycleError::Invalid(format!("{} scales for rank {rank}", scales.len())));
        }
        let unit = |a: BaseArc, end: ArcSide| -> Result<Vec<T>, CocycleError> {
            let line = bmap.base_flag(a, end).line();
            if T::EXACT {
                Ok(line)
            } else {
                normalized(&line).ok_or_else(|| CocycleError::Invalid(format!("zero line at {a}")))
            }
        };
        let chosen = (0..rank)
            .map(|gen| {
                let a = BaseArc { gen, side: ArcSide::Minus };
                Ok((unit(a, ArcSide::Plus)?, unit(a, ArcSide::Minus)?))
            })
            .collect::<Result<Vec<_>, CocycleError>>()?;
        ArcVectors::from_minus_walls(bmap.representation(), chosen)?.rescaled(scales)
    }

    pub fn rank(&self) -> usize {
        self.plus.len() / 2
    }

    pub fn vector(&self, a: BaseArc, end: ArcSide) -> &[T] {
        match end {
            ArcSide::Plus => &self.plus[a.index()],
            ArcSide::Minus => &self.minus[a.index()],
        }
    }

    /// `v_a^+ - v_a^-`.
    pub fn difference(&self, a: BaseArc) -> Vec<T> {
        vsub(&self.plus[a.index()], &self.minus[a.index()])
    }

    /// `v_{w a}^{end} = rho(w) v_a^{end}`.
    pub fn translated(&self, rep: &Representation<T>, w: &Word, a: BaseArc, end: ArcSide) -> Vec<T> {
        rep.image(w).mul_vec(self.vector(a, end))
    }

    pub fn scaled(&self, k: &T) -> Self {
        ArcVectors {
            plus: self.plus.iter().map(|v| vscale(v, k)).collect(),
            minus: self.minus.iter().map(|v| vscale(v, k)).collect(),
        }
    }

    /// Multiply the pair of generator `i` by `scales[i]`.
    pub fn rescaled(&self, scales: &[T]) -> Result<Self, CocycleError> {
        if scales.len() != self.rank() {
            return Err(CocycleError::Invalid(format!("{} scales for rank {}", scales.len(), self.rank())));
        }
        if let Some(i) = scales.iter().position(|s| s.exact_sign() != Sign::Pos) {
            return Err(CocycleError::Invalid(format!("scale {i} is not positive")));
        }
        let by_gen = |k: usize, v: &Vec<T>| vscale(v, &scales[k / 2]);
        Ok(ArcVectors {
            plus: self.plus.iter().enumerate().map(|(k, v)| by_gen(k, v)).collect(),
            minus: self.minus.iter().enumerate().map(|(k, v)| by_gen(k, v)).collect(),
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> ArcVectors<U> {
        let conv = |vs: &Vec<Vec<T>>| vs.iter().map(|v| v.iter().map(f).collect()).collect();
        ArcVectors {
            plus: conv(&self.plus),
            minus: conv(&self.minus),
        }
    }

    /// Every vector is a positive multiple of its flag's first column.
    pub fn check_positive(&self, bmap: &BoundaryMap<T>, tol: &Tolerance) -> Result<(), CocycleError> {
        for a in BaseArc::all(self.rank()) {
            for end in [ArcSide::Plus, ArcSide::Minus] {
                let line = bmap.base_flag(a, end).line();
                let v = self.vector(a, end);
                let (k, _) = line
                    .iter()
                    .enumerate()
                    .max_by(|x, y| x.1.to_f64().abs().total_cmp(&y.1.to_f64().abs()))
                    .expect("nonempty");
                let ratio = v[k].clone() / line[k].clone();
                let residual = vsub(v, &vscale(&line, &ratio));
                let scale = crate::numcore::norm_inf(v).max(1.0);
                let parallel = residual.iter().all(|x| {
                    if T::EXACT {
                        x.is_zero()
                    } else {
                        x.to_f64().abs() <= tol.eps_eq * scale
                    }
                });
                if !parallel || ratio.exact_sign() != Sign::Pos {
                    return Err(CocycleError::Invalid(format!("vector at {a} is not on the positive first line")));
                }
            }
        }
        Ok(())
    }

    /// Chosen vectors on the `a_{i,-}` walls.
    pub fn entries(&self) -> Vec<ArcVectorEntry> {
        (0..self.rank())
            .map(|gen| {
                let a = BaseArc { gen, side: ArcSide::Minus };
                ArcVectorEntry {
                    arc: a.to_string(),
                    plus: vec_to_entries(self.vector(a, ArcSide::Plus)),
                    minus: vec_to_entries(self.vector(a, ArcSide::Minus)),
                }
            })
            .collect()
    }

    pub fn from_entries(rep: &Representation<T>, entries: &[ArcVectorEntry]) -> Result<Self, CocycleError> {
        let chosen = (0..rep.rank())
            .map(|gen| {
                let name = BaseArc { gen, side: ArcSide::Minus }.to_string();
                let e = entries
                    .iter()
                    .find(|e| e.arc == name)
                    .ok_or_else(|| CocycleError::Invalid(format!("missing vectors for {name}")))?;
                Ok((
                    vec_from_entries(&e.plus).map_err(CocycleError::Invalid)?,
                    vec_from_entries(&e.minus).map_err(CocycleError::Invalid)?,
                ))
            })
            .collect::<Result<Vec<_>, CocycleError>>()?;
        ArcVectors::from_minus_walls(rep, chosen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{enumerate_words, SchottkyData};
    use crate::numcore::Dd;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bmap(n: usize) -> BoundaryMap<Dd> {
        let tol = Tolerance::default();
        let s = SchottkyData::<Dd>::symmetric_rank2(std::f64::consts::PI / 6.0).unwrap();
        let rep = Representation::fuchsian(&s, n, &tol).unwrap();
        BoundaryMap::fuchsian(rep, s.arc_system(), &tol).unwrap()
    }

    #[test]
    fn default_vectors_sit_on_the_flags() {
        let tol = Tolerance::default();
        let b = bmap(2);
        let av = ArcVectors::from_boundary(&b, &[Dd::from(1.0), Dd::from(2.0)]).unwrap();
        av.check_positive(&b, &tol).unwrap();
        let a = BaseArc { gen: 0, side: ArcSide::Minus };
        assert!((crate::numcore::norm2(av.vector(a, ArcSide::Plus)) - 1.0).abs() < 1e-14);
        assert!(av.scaled(&Dd::from(-1.0)).check_positive(&b, &tol).is_err());
        assert!(ArcVectors::from_boundary(&b, &[Dd::from(1.0), Dd::from(0.0)]).is_err());
    }

    #[test]
    fn translated_vectors_are_equivariant() {
        let tol = Tolerance::default();
        let b = bmap(1);
        let rep = b.representation();
        let av = ArcVectors::from_boundary(&b, &[Dd::from(1.0), Dd::from(1.0)]).unwrap();
        let words = enumerate_words(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let w = &words[rng.gen_range(0..words.len())];
            let a = BaseArc::all(2).nth(rng.gen_range(0..4)).unwrap();
            let v = av.translated(rep, w, a, ArcSide::Plus);
            let f = b.flag(w, a, ArcSide::Plus).unwrap();
            // Same line, positive orientation.
            let line = f.line();
            let k = (0..3).max_by(|&i, &j| line[i].to_f64().abs().total_cmp(&line[j].to_f64().abs())).unwrap();
            let r = v[k] / line[k];
            assert!(r.to_f64() > 0.0);
            let res = vsub(&v, &vscale(&line, &r));
            assert!(crate::numcore::norm_inf(&res) < tol.eps_eq * crate::numcore::norm_inf(&v));
        }
    }

    #[test]
    fn entries_round_trip() {
        let b = bmap(1);
        let av = ArcVectors::from_boundary(&b, &[Dd::from(1.0), Dd::from(3.0)]).unwrap();
        let back = ArcVectors::from_entries(b.representation(), &av.entries()).unwrap();
        for a in BaseArc::all(2) {
            let diff = vsub(&back.difference(a), &av.difference(a));
            assert!(crate::numcore::norm_inf(&diff) < 1e-14);
        }
    }
}
