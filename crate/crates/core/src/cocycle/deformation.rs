//! The affine deformation `(rho, u)` and its evaluators.

use serde::{Deserialize, Serialize};

use super::{AffineMap, ArcVectorEntry, ArcVectors, CocycleError};
use crate::freegroup::{crossing_sequence, BaseArc, Letter, Word};
use crate::numcore::{norm_inf, vadd, vec_from_entries, vec_to_entries, vneg, vscale, vsub, Entry, Scalar};
use crate::posrep::{BoundaryMap, Representation};

/// A representation together with cocycle values on every letter. When the
/// values come from arc vectors the vectors are kept for crossing sums and
/// wall displacements.
#[derive(Clone, Debug)]
pub struct AffineDeformation<T> {
    rep: Representation<T>,
    /// Indexed by `Letter::index(rank)`.
    letter_values: Vec<Vec<T>>,
    arcs: Option<ArcVectors<T>>,
}

impl<T: Scalar> AffineDeformation<T> {
    /// Values `u(g_i)`; inverses get `u(g^{-1}) = -rho(g^{-1}) u(g)`.
    pub fn from_generator_values(rep: Representation<T>, values: Vec<Vec<T>>) -> Result<Self, CocycleError> {
        if values.len() != rep.rank() {
            return Err(CocycleError::Invalid(format!("{} values for rank {}", values.len(), rep.rank())));
        }
        if values.iter().any(|v| v.len() != rep.dim()) {
            return Err(CocycleError::Invalid(format!("values must have length {}", rep.dim())));
        }
        let rank = rep.rank();
        let mut letter_values = vec![Vec::new(); 2 * rank];
        for (gen, u) in values.into_iter().enumerate() {
            let inv = Letter::new(gen, true);
            letter_values[inv.index(rank)] = vneg(&rep.letter_image(inv).mul_vec(&u));
            letter_values[Letter::new(gen, false).index(rank)] = u;
        }
        Ok(AffineDeformation {
            rep,
            letter_values,
            arcs: None,
        })
    }

    /// The strip cocycle: crossing `a_{i,+}` outward contributes
    /// `v^+ - v^-` of that wall.
    pub fn strip(rep: Representation<T>, arcs: ArcVectors<T>) -> Result<Self, CocycleError> {
        if arcs.rank() != rep.rank() {
            return Err(CocycleError::Invalid(format!("arc vectors for rank {}, representation has {}", arcs.rank(), rep.rank())));
        }
        let values = (0..rep.rank())
            .map(|gen| arcs.difference(BaseArc::of_letter(Letter::new(gen, false))))
            .collect();
        let mut def = AffineDeformation::from_generator_values(rep, values)?;
        def.arcs = Some(arcs);
        Ok(def)
    }

    /// Strip cocycle from the default unit vectors with per-generator scales.
    pub fn strip_from_boundary(bmap: &BoundaryMap<T>, scales: &[T]) -> Result<Self, CocycleError> {
        let arcs = ArcVectors::from_boundary(bmap, scales)?;
        AffineDeformation::strip(bmap.representation().clone(), arcs)
    }

    /// `u(g) = v - rho(g) v`.
    pub fn coboundary(rep: Representation<T>, v: &[T]) -> Result<Self, CocycleError> {
        if v.len() != rep.dim() {
            return Err(CocycleError::Invalid(format!("vector must have length {}", rep.dim())));
        }
        let values = (0..rep.rank())
            .map(|i| vsub(v, &rep.generator(i).matrix().mul_vec(v)))
            .collect();
        AffineDeformation::from_generator_values(rep, values)
    }

    pub fn representation(&self) -> &Representation<T> {
        &self.rep
    }

    pub fn arc_vectors(&self) -> Option<&ArcVectors<T>> {
        self.arcs.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn letter_value(&self, l: Letter) -> &[T] {
        &self.letter_values[l.index(self.rep.rank())]
    }

    pub fn generator_values(&self) -> Vec<Vec<T>> {
        (0..self.rep.rank())
            .map(|g| self.letter_value(Letter::new(g, false)).to_vec())
            .collect()
    }

    /// `u(w)` by `u(l w') = u(l) + rho(l) u(w')`, read right to left.
    pub fn eval(&self, w: &Word) -> Vec<T> {
        let mut u = vec![T::zero(); self.dim()];
        for &l in w.letters().iter().rev() {
            u = vadd(self.letter_value(l), &self.rep.letter_image(l).mul_vec(&u));
        }
        u
    }

    /// `(rho(w), u(w))`.
    pub fn affine_action(&self, w: &Word) -> AffineMap<T> {
        let mut m = AffineMap::identity(self.dim());
        for &l in w.letters().iter().rev() {
            let step = AffineMap {
                linear: self.rep.letter_image(l).clone(),
                translation: self.letter_value(l).to_vec(),
            };
            m = step.compose(&m);
        }
        m
    }

    fn require_arcs(&self) -> Result<&ArcVectors<T>, CocycleError> {
        self.arcs
            .as_ref()
            .ok_or_else(|| CocycleError::Invalid("deformation carries no arc vectors".into()))
    }

    /// Displacement of the wall `prefix · a`: the crossing sum up to the
    /// tile `prefix`, plus half of the crossing of the wall itself. Either
    /// side of a wall gives the same value.
    pub fn tilde_u(&self, prefix: &Word, a: BaseArc) -> Result<Vec<T>, CocycleError> {
        let arcs = self.require_arcs()?;
        if a.gen >= self.rep.rank() {
            return Err(CocycleError::Unreachable(format!("{prefix}·{a}")));
        }
        prefix
            .check_rank(self.rep.rank())
            .map_err(|_| CocycleError::Unreachable(format!("{prefix}·{a}")))?;
        let half = vscale(&arcs.difference(a), &(T::half() * T::from_i64(a.outward_sign().into())));
        Ok(vadd(&self.eval(prefix), &self.rep.image(prefix).mul_vec(&half)))
    }

    /// Generator values of the cocycle built from paths starting at the tile
    /// `h` instead of the base tile: `u'(g) = rho(h) S(h^{-1} g h)` where `S`
    /// is the crossing sum.
    pub fn rebased(&self, h: &Word) -> Result<AffineDeformation<T>, CocycleError> {
        let rh = self.rep.image(h);
        let values = (0..self.rep.rank())
            .map(|g| {
                let conj = h.inverse().concat(&Word::letter(Letter::new(g, false))).concat(h);
                Ok(rh.mul_vec(&crossing_sum(self, &conj)?))
            })
            .collect::<Result<Vec<_>, CocycleError>>()?;
        AffineDeformation::from_generator_values(self.rep.clone(), values)
    }

    pub fn scaled(&self, k: &T) -> AffineDeformation<T> {
        AffineDeformation {
            rep: self.rep.clone(),
            letter_values: self.letter_values.iter().map(|v| vscale(v, k)).collect(),
            arcs: self.arcs.as_ref().map(|a| a.scaled(k)),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> Result<AffineDeformation<U>, CocycleError> {
        let rep = self.rep.map(f)?;
        let values = self.generator_values().iter().map(|v| v.iter().map(f).collect()).collect();
        let mut def = AffineDeformation::from_generator_values(rep, values)?;
        if let Some(a) = &self.arcs {
            def.arcs = Some(a.map(f));
        }
        Ok(def)
    }

    /// CSV with columns `word,length,u0,...`.
    pub fn values_csv(&self, words: &[Word]) -> Result<String, CocycleError> {
        let mut out = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["word".to_string(), "length".to_string()];
        header.extend((0..self.dim()).map(|k| format!("u{k}")));
        let io = |e: csv::Error| CocycleError::Invalid(e.to_string());
        out.write_record(&header).map_err(io)?;
        for w in words {
            let mut row = vec![w.to_string(), w.len().to_string()];
            row.extend(self.eval(w).iter().map(|x| format!("{:.12e}", x.to_f64())));
            out.write_record(&row).map_err(io)?;
        }
        let bytes = out.into_inner().map_err(|e| CocycleError::Invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CocycleError::Invalid(e.to_string()))
    }

    pub fn to_file(&self, rep_path: Option<String>) -> DeformationFile {
        let kind = match &self.arcs {
            Some(a) => DeformationKind::Strip {
                scales: None,
                arc_vectors: Some(a.entries()),
            },
            None => DeformationKind::Values {
                values: self.generator_values().iter().map(|v| vec_to_entries(v)).collect(),
            },
        };
        DeformationFile { rep: rep_path, kind }
    }

    pub fn from_file(file: &DeformationFile, bmap: &BoundaryMap<T>) -> Result<Self, CocycleError> {
        let rep = bmap.representation().clone();
        let parse = |v: &[Entry]| vec_from_entries::<T>(v).map_err(CocycleError::Invalid);
        match &file.kind {
            DeformationKind::Strip { scales, arc_vectors } => {
                let arcs = match (arc_vectors, scales) {
                    (Some(entries), None) => ArcVectors::from_entries(&rep, entries)?,
                    (Some(entries), Some(s)) => {
                        let base = ArcVectors::from_entries(&rep, entries)?;
                        let s = parse(s)?;
                        base.rescaled(&s)?
                    }
                    (None, s) => {
                        let s = match s {
                            Some(s) => parse(s)?,
                            None => vec![T::one(); rep.rank()],
                        };
                        ArcVectors::from_boundary(bmap, &s)?
                    }
                };
                arcs.check_positive(bmap, &crate::numcore::Tolerance::default())?;
                AffineDeformation::strip(rep, arcs)
            }
            DeformationKind::Coboundary { vector } => AffineDeformation::coboundary(rep, &parse(vector)?),
            DeformationKind::Values { values } => {
                let values = values.iter().map(|v| parse(v)).collect::<Result<Vec<_>, _>>()?;
                AffineDeformation::from_generator_values(rep, values)
            }
        }
    }
}

/// `sum_j s_j rho(l_1...l_{j-1}) (v^+ - v^-)` over the walls crossed by `w`.
pub fn crossing_sum<T: Scalar>(def: &AffineDeformation<T>, w: &Word) -> Result<Vec<T>, CocycleError> {
    let arcs = def.require_arcs()?;
    let rep = def.representation();
    let mut total = vec![T::zero(); rep.dim()];
    let mut prefix_image = crate::numcore::Mat::identity(rep.dim());
    for (c, &l) in crossing_sequence(w).iter().zip(w.letters()) {
        let term = prefix_image.mul_vec(&arcs.difference(c.arc));
        total = if c.sign > 0 { vadd(&total, &term) } else { vsub(&total, &term) };
        prefix_image = prefix_image.mul(rep.letter_image(l));
    }
    Ok(total)
}

/// `u(w1 w2) - rho(w1) u(w2) - u(w1)` with `u(w1 w2)` evaluated on the
/// reduced product. Also returns the size of the terms for relative checks.
pub fn cocycle_identity_residual<T: Scalar>(def: &AffineDeformation<T>, w1: &Word, w2: &Word) -> (Vec<T>, f64) {
    let u12 = def.eval(&w1.concat(w2));
    let moved = def.representation().image(w1).mul_vec(&def.eval(w2));
    let u1 = def.eval(w1);
    let scale = norm_inf(&u12).max(norm_inf(&moved)).max(norm_inf(&u1)).max(1.0);
    (vsub(&vsub(&u12, &moved), &u1), scale)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DeformationKind {
    /// Strip cocycle. Without explicit vectors the unit first-line vectors
    /// are used; `scales` multiply each generator's pair.
    Strip {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scales: Option<Vec<Entry>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        arc_vectors: Option<Vec<ArcVectorEntry>>,
    },
    Coboundary {
        vector: Vec<Entry>,
    },
    Values {
        values: Vec<Vec<Entry>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationFile {
    /// Path of the representation file this deformation belongs to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<String>,
    #[serde(flatten)]
    pub kind: DeformationKind,
}
