//! Boundary flags on wall endpoints, extended equivariantly to translated walls.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use super::representation::{FlagEntry, RepFile};
use super::{Provenance, RepError, Representation, SymPower};
use crate::flags::{is_isotropic_flag, is_positive_tuple, FlagError, OrientedFlag};
use crate::freegroup::{ArcSide, ArcSystem, BaseArc, CirclePoint, SchottkyData, Word};
use crate::numcore::{mat_from_entries, mat_to_entries, Scalar, Tolerance};

type Key = (Word, BaseArc, ArcSide);

/// Flags `xi(a^+)`, `xi(a^-)` for the base walls and a memo of translates
/// `xi(w a^{+-}) = rho(w) xi(a^{+-})`. Readers share the memo; a miss is
/// recomputed and inserted, and identical recomputations are harmless.
#[derive(Debug)]
pub struct BoundaryMap<T> {
    rep: Representation<T>,
    arcs: ArcSystem<T>,
    base: HashMap<(BaseArc, ArcSide), OrientedFlag<T>>,
    curve: Option<SymPower<T>>,
    memo: RwLock<HashMap<Key, OrientedFlag<T>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FlagPingPongReport {
    pub pairs_checked: Vec<String>,
    pub violations: Vec<String>,
}

impl FlagPingPongReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn side_label(s: ArcSide) -> &'static str {
    match s {
        ArcSide::Plus => "+",
        ArcSide::Minus => "-",
    }
}

impl<T: Scalar> BoundaryMap<T> {
    /// Veronese flags at the wall endpoints of a Fuchsian representation.
    pub fn fuchsian(rep: Representation<T>, arcs: ArcSystem<T>, tol: &Tolerance) -> Result<Self, RepError> {
        if rep.provenance() != Provenance::FuchsianSym {
            return Err(RepError::Invalid("Veronese boundary map needs a Fuchsian representation".into()));
        }
        let curve = SymPower::new(rep.n())?;
        let mut base = HashMap::new();
        for a in BaseArc::all(arcs.rank()) {
            let arc = arcs.arc(a);
            base.insert((a, ArcSide::Plus), curve.flag(&arc.plus)?);
            base.insert((a, ArcSide::Minus), curve.flag(&arc.minus)?);
        }
        BoundaryMap::assemble(rep, arcs, base, Some(curve), tol)
    }

    /// Boundary flags supplied for every wall endpoint.
    pub fn from_flags(
        rep: Representation<T>,
        arcs: ArcSystem<T>,
        base: HashMap<(BaseArc, ArcSide), OrientedFlag<T>>,
        tol: &Tolerance,
    ) -> Result<Self, RepError> {
        BoundaryMap::assemble(rep, arcs, base, None, tol)
    }

    fn assemble(
        rep: Representation<T>,
        arcs: ArcSystem<T>,
        base: HashMap<(BaseArc, ArcSide), OrientedFlag<T>>,
        curve: Option<SymPower<T>>,
        tol: &Tolerance,
    ) -> Result<Self, RepError> {
        if arcs.rank() != rep.rank() {
            return Err(RepError::Invalid(format!("{} walls pairs for rank {}", arcs.rank(), rep.rank())));
        }
        for a in BaseArc::all(arcs.rank()) {
            for s in [ArcSide::Plus, ArcSide::Minus] {
                let f = base
                    .get(&(a, s))
                    .ok_or_else(|| RepError::Invalid(format!("missing flag for {a}{}", side_label(s))))?;
                if !is_isotropic_flag(f, rep.form(), tol)? {
                    return Err(FlagError::NotIsotropic(format!("{a}{}", side_label(s))).into());
                }
            }
        }
        Ok(BoundaryMap {
            rep,
            arcs,
            base,
            curve,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn representation(&self) -> &Representation<T> {
        &self.rep
    }

    pub fn arcs(&self) -> &ArcSystem<T> {
        &self.arcs
    }

    pub fn base_flag(&self, a: BaseArc, end: ArcSide) -> &OrientedFlag<T> {
        &self.base[&(a, end)]
    }

    /// `xi(w a^{end}) = rho(w) xi(a^{end})`.
    pub fn flag(&self, w: &Word, a: BaseArc, end: ArcSide) -> Result<OrientedFlag<T>, RepError> {
        if w.is_empty() {
            return Ok(self.base_flag(a, end).clone());
        }
        let key = (w.clone(), a, end);
        if let Some(f) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(f.clone());
        }
        let f = self.base_flag(a, end).transform(&self.rep.image(w))?;
        self.memo.write().expect("memo lock").insert(key, f.clone());
        Ok(f)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    /// Flag at an arbitrary circle point (Veronese maps only).
    pub fn at_point(&self, p: &CirclePoint<T>) -> Option<Result<OrientedFlag<T>, RepError>> {
        self.curve.as_ref().map(|c| c.flag(p))
    }

    /// Flag interval spanned by a base wall, as (start, end) counter-clockwise.
    fn interval(&self, a: BaseArc) -> (&OrientedFlag<T>, &OrientedFlag<T>) {
        let (p, m) = (self.base_flag(a, ArcSide::Plus), self.base_flag(a, ArcSide::Minus));
        match a.side {
            ArcSide::Plus => (m, p),
            ArcSide::Minus => (p, m),
        }
    }

    /// The generator pairs the walls' endpoint flags (`rho(g_i) xi(a_{i,-}^{+-}) =
    /// xi(a_{i,+}^{+-})`), and the closures of the wall intervals sit inside
    /// each other's opposite intervals, checked by quadruple positivity.
    pub fn verify_flag_ping_pong(&self, tol: &Tolerance) -> Result<FlagPingPongReport, RepError> {
        let mut report = FlagPingPongReport::default();
        for i in 0..self.rep.rank() {
            let g = self.rep.generator(i).matrix();
            for end in [ArcSide::Plus, ArcSide::Minus] {
                let minus = BaseArc { gen: i, side: ArcSide::Minus };
                let plus = BaseArc { gen: i, side: ArcSide::Plus };
                let image = self.base_flag(minus, end).transform(g)?;
                let name = format!("g{} {minus}{} -> {plus}{}", i + 1, side_label(end), side_label(end));
                if !image.same_flag(self.base_flag(plus, end), tol)? {
                    report.violations.push(format!("pairing fails: {name}"));
                }
                report.pairs_checked.push(name);
            }
        }
        let all: Vec<BaseArc> = BaseArc::all(self.rep.rank()).collect();
        for (x, &a) in all.iter().enumerate() {
            for &b in &all[x + 1..] {
                let (a0, a1) = self.interval(a);
                let (b0, b1) = self.interval(b);
                let quad = [b1.clone(), a0.clone(), a1.clone(), b0.clone()];
                let name = format!("closure of {a} inside opposite of {b}");
                if !is_positive_tuple(&quad, tol)? {
                    report.violations.push(name.clone());
                }
                report.pairs_checked.push(name);
            }
        }
        Ok(report)
    }

    pub fn flag_entries(&self) -> Vec<FlagEntry> {
        BaseArc::all(self.arcs.rank())
            .flat_map(|a| {
                [ArcSide::Plus, ArcSide::Minus].map(|s| FlagEntry {
                    arc: a.to_string(),
                    end: side_label(s).to_string(),
                    basis: mat_to_entries(self.base_flag(a, s).basis()),
                })
            })
            .collect()
    }

    /// Representation file carrying the Schottky data and the base flags.
    pub fn to_rep_file(&self, schottky: &SchottkyData<T>) -> RepFile {
        RepFile {
            boundary_flags: self.flag_entries(),
            schottky: Some(schottky.to_file()),
            ..self.rep.to_file()
        }
    }

    /// Inverse of [`BoundaryMap::to_rep_file`]. A Fuchsian file must agree
    /// with the image of its Schottky generators; other files need flags.
    pub fn from_rep_file(file: &RepFile, tol: &Tolerance) -> Result<(SchottkyData<T>, Self), RepError> {
        let rep = Representation::from_file(file, tol)?;
        let sfile = file
            .schottky
            .as_ref()
            .ok_or_else(|| RepError::Invalid("representation file has no Schottky data".into()))?;
        let s = SchottkyData::from_file(sfile)?;
        if s.rank() != rep.rank() {
            return Err(RepError::Invalid(format!("rank {} Schottky data for rank {}", s.rank(), rep.rank())));
        }
        let bmap = match rep.provenance() {
            Provenance::FuchsianSym => {
                let expected = Representation::fuchsian(&s, rep.n(), tol)?;
                for i in 0..rep.rank() {
                    let gap = expected.generator(i).matrix().sub(rep.generator(i).matrix()).max_abs();
                    if gap > tol.eps_eq * expected.generator(i).matrix().max_abs().max(1.0) {
                        return Err(RepError::Invalid(format!(
                            "generator {i} differs from the symmetric power of its Schottky matrix by {gap:e}"
                        )));
                    }
                }
                // The file holds rounded entries; the rebuilt matrices keep
                // full working precision.
                BoundaryMap::fuchsian(expected, s.arc_system(), tol)?
            }
            Provenance::UserSupplied => {
                let base = BoundaryMap::flags_from_entries(rep.rank(), &file.boundary_flags)?;
                BoundaryMap::from_flags(rep, s.arc_system(), base, tol)?
            }
        };
        Ok((s, bmap))
    }

    pub fn flags_from_entries(
        rank: usize,
        entries: &[FlagEntry],
    ) -> Result<HashMap<(BaseArc, ArcSide), OrientedFlag<T>>, RepError> {
        let mut out = HashMap::new();
        for a in BaseArc::all(rank) {
            for s in [ArcSide::Plus, ArcSide::Minus] {
                let e = entries
                    .iter()
                    .find(|e| e.arc == a.to_string() && e.end == side_label(s))
                    .ok_or_else(|| RepError::Invalid(format!("missing flag for {a}{}", side_label(s))))?;
                let m = mat_from_entries(&e.basis).map_err(RepError::Invalid)?;
                out.insert((a, s), OrientedFlag::from_basis_unchecked(m)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{enumerate_words, SchottkyData};
    use crate::numcore::Dd;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize) -> (SchottkyData<Dd>, BoundaryMap<Dd>) {
        let tol = Tolerance::default();
        let s = SchottkyData::<Dd>::symmetric_rank2(std::f64::consts::PI / 6.0).unwrap();
        let rep = Representation::fuchsian(&s, n, &tol).unwrap();
        let bmap = BoundaryMap::fuchsian(rep, s.arc_system(), &tol).unwrap();
        (s, bmap)
    }

    #[test]
    fn fuchsian_example_passes_flag_ping_pong() {
        for n in 1..=2 {
            let (_, bmap) = setup(n);
            let report = bmap.verify_flag_ping_pong(&Tolerance::default()).unwrap();
            assert!(report.passed(), "{:?}", report.violations);
            // 2 pairings per generator and C(4, 2) interval pairs.
            assert_eq!(report.pairs_checked.len(), 4 + 6);
        }
    }

    #[test]
    fn rep_file_round_trip() {
        let tol = Tolerance::default();
        let (s, bmap) = setup(2);
        let file = bmap.to_rep_file(&s);
        let json = serde_json::to_string(&file).unwrap();
        let (s2, b2) = BoundaryMap::<Dd>::from_rep_file(&serde_json::from_str(&json).unwrap(), &tol).unwrap();
        assert_eq!(s2.rank(), 2);
        let a = BaseArc::all(2).next().unwrap();
        let gap = b2.base_flag(a, ArcSide::Plus).basis().sub(bmap.base_flag(a, ArcSide::Plus).basis()).max_abs();
        assert!(gap < 1e-12);
        let mut bad = file.clone();
        bad.schottky = None;
        assert!(BoundaryMap::<Dd>::from_rep_file(&bad, &tol).is_err());
    }

    #[test]
    fn swapped_labels_fail() {
        let tol = Tolerance::default();
        let (s, bmap) = setup(1);
        let mut base = bmap.base.clone();
        let a = BaseArc { gen: 0, side: ArcSide::Plus };
        let p = base[&(a, ArcSide::Plus)].clone();
        let m = base[&(a, ArcSide::Minus)].clone();
        base.insert((a, ArcSide::Plus), m);
        base.insert((a, ArcSide::Minus), p);
        let swapped = BoundaryMap::from_flags(bmap.rep.clone(), s.arc_system(), base, &tol).unwrap();
        assert!(!swapped.verify_flag_ping_pong(&tol).unwrap().passed());
    }

    #[test]
    fn endpoint_flags_follow_the_circle_order() {
        let tol = Tolerance::default();
        for n in 1..=2 {
            let (_, bmap) = setup(n);
            let flags: Vec<_> = bmap
                .arcs()
                .endpoints_ccw()
                .into_iter()
                .map(|(a, end, _)| bmap.base_flag(a, end).clone())
                .collect();
            assert!(is_positive_tuple(&flags, &tol).unwrap());
        }
    }

    #[test]
    fn translated_flags_are_equivariant() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (s, bmap) = setup(2);
        let words = enumerate_words(2, 3);
        for _ in 0..100 {
            let w = &words[rng.gen_range(0..words.len())];
            let a = BaseArc::all(2).nth(rng.gen_range(0..4)).unwrap();
            let end = if rng.gen_bool(0.5) { ArcSide::Plus } else { ArcSide::Minus };
            let f = bmap.flag(w, a, end).unwrap();
            let arc = bmap.arcs().arc(a).transform(&s.word_matrix(w));
            let p = if end == ArcSide::Plus { arc.plus } else { arc.minus };
            let direct = bmap.at_point(&p).unwrap().unwrap();
            assert!(f.same_flag(&direct, &tol).unwrap(), "{w} {a}");
            assert!(is_isotropic_flag(&f, bmap.representation().form(), &tol).unwrap());
        }
        assert!(bmap.memo_len() > 0);
    }

    #[test]
    fn flag_entries_round_trip() {
        let tol = Tolerance::default();
        let (s, bmap) = setup(1);
        let base = BoundaryMap::<Dd>::flags_from_entries(2, &bmap.flag_entries()).unwrap();
        let again = BoundaryMap::from_flags(bmap.rep.clone(), s.arc_system(), base, &tol).unwrap();
        assert!(again.verify_flag_ping_pong(&tol).unwrap().passed());
    }
}
