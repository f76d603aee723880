//! The domain bounded by the translated crooked hyperplanes of the base walls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sampled_disjointness, CrookedError, CrookedHalfspace, Region, SampleCheck};
use crate::cocycle::{AffineDeformation, AffineMap};
use crate::flags::{in_interval, is_positive_tuple, FlagError, OrientedFlag};
use crate::freegroup::{ArcSide, BaseArc, Letter, Word};
use crate::numcore::{mat_to_entries, norm_inf, vec_to_entries, vsub, Entry, MatEntries, Scalar, Tolerance};
use crate::posrep::BoundaryMap;

/// The halfspace beyond one base wall, translated by the wall's displacement.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainWall<T> {
    pub arc: BaseArc,
    /// Endpoint whose flag is `F_E`; the interval from it to the other
    /// endpoint holds the boundary beyond the wall.
    pub first: ArcSide,
    pub halfspace: CrookedHalfspace<T>,
}

/// Complement of the open halfspaces beyond the `2N` base walls, with the
/// side pairings `x -> rho(g_i) x + u(g_i)`.
#[derive(Clone, Debug)]
pub struct Domain<T> {
    walls: Vec<DomainWall<T>>,
    pairings: Vec<AffineMap<T>>,
    inverse_pairings: Vec<AffineMap<T>>,
}

fn other(side: ArcSide) -> ArcSide {
    match side {
        ArcSide::Plus => ArcSide::Minus,
        ArcSide::Minus => ArcSide::Plus,
    }
}

/// Letter whose tile lies beyond the base wall.
fn crossing_letter(a: BaseArc) -> Letter {
    Letter::new(a.gen, a.side == ArcSide::Minus)
}

fn between<T: Scalar>(
    x: &OrientedFlag<T>,
    f: &OrientedFlag<T>,
    g: &OrientedFlag<T>,
    tol: &Tolerance,
) -> Result<bool, CrookedError> {
    match in_interval(x, f, g, tol) {
        Ok(b) => Ok(b),
        Err(FlagError::NotTransverse) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// Builds the halfspace `H(a) + tilde_u(a)` beyond every base wall and checks
/// that each side pairing carries the displacement of `a_{i,-}` to that of
/// `a_{i,+}`.
pub fn build_domain<T: Scalar>(
    def: &AffineDeformation<T>,
    bmap: &BoundaryMap<T>,
    tol: &Tolerance,
) -> Result<Domain<T>, CrookedError> {
    let rank = def.representation().rank();
    let mut walls = Vec::with_capacity(2 * rank);
    for a in BaseArc::all(rank) {
        let beyond = bmap.flag(&Word::letter(crossing_letter(a)), a, ArcSide::Plus)?;
        let (p, m) = (bmap.base_flag(a, ArcSide::Plus), bmap.base_flag(a, ArcSide::Minus));
        let first = if between(&beyond, p, m, tol)? {
            ArcSide::Plus
        } else if between(&beyond, m, p, tol)? {
            ArcSide::Minus
        } else {
            return Err(CrookedError::NotPositive(format!("boundary beyond {a} is in neither interval")));
        };
        let t = def.tilde_u(&Word::identity(), a)?;
        let halfspace = CrookedHalfspace::from_flags(bmap.base_flag(a, first), bmap.base_flag(a, other(first)), t, tol)?;
        walls.push(DomainWall { arc: a, first, halfspace });
    }
    let form = *def.representation().form();
    let pairings: Vec<AffineMap<T>> = (0..rank)
        .map(|i| def.affine_action(&Word::letter(Letter::new(i, false))))
        .collect();
    let inverse_pairings = pairings.iter().map(|m| m.inverse(&form)).collect();
    let domain = Domain {
        walls,
        pairings,
        inverse_pairings,
    };
    for i in 0..rank {
        let r = domain.pairing_residual(i);
        if !(r <= tol.eps_eq) {
            return Err(CrookedError::SidePairing { gen: i, residual: r });
        }
    }
    Ok(domain)
}

impl<T: Scalar> Domain<T> {
    pub fn rank(&self) -> usize {
        self.pairings.len()
    }

    pub fn dim(&self) -> usize {
        self.walls[0].halfspace.dim()
    }

    pub fn walls(&self) -> &[DomainWall<T>] {
        &self.walls
    }

    pub fn wall(&self, a: BaseArc) -> &DomainWall<T> {
        &self.walls[a.index()]
    }

    /// `x -> rho(g_i) x + u(g_i)`, or its inverse.
    pub fn pairing(&self, gen: usize, inverse: bool) -> &AffineMap<T> {
        if inverse {
            &self.inverse_pairings[gen]
        } else {
            &self.pairings[gen]
        }
    }

    /// Relative mismatch between the image of the displacement of `a_{i,-}`
    /// and the displacement of `a_{i,+}`.
    pub fn pairing_residual(&self, gen: usize) -> f64 {
        let minus = self.wall(BaseArc { gen, side: ArcSide::Minus }).halfspace.translation();
        let plus = self.wall(BaseArc { gen, side: ArcSide::Plus }).halfspace.translation();
        let image = self.pairings[gen].apply(minus);
        norm_inf(&vsub(&image, plus)) / norm_inf(plus).max(1.0)
    }

    /// Base walls whose open halfspace contains `p`.
    pub fn walls_containing(&self, p: &[T], tol: &Tolerance) -> Result<Vec<BaseArc>, CrookedError> {
        let mut out = Vec::new();
        for w in &self.walls {
            if w.halfspace.region(p, tol)? == Region::Inside {
                out.push(w.arc);
            }
        }
        Ok(out)
    }

    /// `p` lies in the closed domain.
    pub fn contains(&self, p: &[T], tol: &Tolerance) -> Result<bool, CrookedError> {
        Ok(self.walls_containing(p, tol)?.is_empty())
    }

    /// `p` lies in the domain and on none of its walls.
    pub fn is_interior(&self, p: &[T], tol: &Tolerance) -> Result<bool, CrookedError> {
        for w in &self.walls {
            if w.halfspace.region(p, tol)? != Region::Outside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sampled side pairing: wall points of `a_{i,-}` land on the wall of
    /// `a_{i,+}`, and points beyond `a_{i,-}` land on the near side of
    /// `a_{i,+}`.
    pub fn side_pairing_check(
        &self,
        samples: usize,
        seed: u64,
        tol: &Tolerance,
    ) -> Result<Vec<PairingCheck>, CrookedError> {
        (0..self.rank())
            .map(|gen| {
                let minus = &self.wall(BaseArc { gen, side: ArcSide::Minus }).halfspace;
                let plus = &self.wall(BaseArc { gen, side: ArcSide::Plus }).halfspace;
                let map = &self.pairings[gen];
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(gen as u64));
                let mut check = PairingCheck {
                    generator: gen,
                    residual: self.pairing_residual(gen),
                    wall: SampleCheck::default(),
                    beyond: SampleCheck::default(),
                };
                for _ in 0..samples {
                    let x = minus.sample_wall(&mut rng)?;
                    let y = map.apply(&x);
                    check.wall.samples += 1;
                    if plus.region_snapped(&y, tol) != Region::Wall {
                        check.wall.violations.push(y.iter().map(Scalar::to_f64).collect());
                    }
                    let x = minus.sample_open(&mut rng, tol)?;
                    let y = map.apply(&x);
                    check.beyond.samples += 1;
                    match plus.region(&y, tol) {
                        Ok(Region::Outside) => {}
                        Err(e) if e.is_numeric_ambiguity() => check.beyond.ambiguous += 1,
                        _ => check.beyond.violations.push(y.iter().map(Scalar::to_f64).collect()),
                    }
                }
                Ok(check)
            })
            .collect()
    }

    /// Pairwise disjointness of the closed halfspaces beyond the walls:
    /// sampled, and through the sufficient condition that the two far
    /// intervals are nested as a positive quadruple and each displacement
    /// lies in its halfspace's stem quadrant.
    pub fn disjointness(&self, samples: usize, seed: u64, tol: &Tolerance) -> Result<DisjointnessReport, CrookedError> {
        let pairs: Vec<(usize, usize)> = (0..self.walls.len())
            .flat_map(|i| (i + 1..self.walls.len()).map(move |j| (i, j)))
            .collect();
        let reports = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (a, b) = (&self.walls[i], &self.walls[j]);
                let sampled = sampled_disjointness(&a.halfspace, &b.halfspace, samples, seed.wrapping_add((i * 64 + j) as u64), tol)?;
                let (fa, ga) = a.halfspace.flags()?;
                let (fb, gb) = b.halfspace.flags()?;
                let nested = match is_positive_tuple(&[fa, ga, fb, gb], tol) {
                    Ok(b) => b,
                    Err(FlagError::AmbiguousSign { .. }) => false,
                    Err(e) => return Err(e.into()),
                };
                let in_stem = |w: &DomainWall<T>| w.halfspace.stem_quadrant().contains(w.halfspace.translation(), tol);
                Ok(PairReport {
                    first: a.arc.to_string(),
                    second: b.arc.to_string(),
                    sampled,
                    nested_intervals: nested,
                    stem_translations: in_stem(a) && in_stem(b),
                })
            })
            .collect::<Result<Vec<_>, CrookedError>>()?;
        Ok(DisjointnessReport { pairs: reports })
    }

    pub fn to_file(&self) -> DomainFile {
        DomainFile {
            dim: self.dim(),
            walls: self
                .walls
                .iter()
                .map(|w| WallEntry {
                    arc: w.arc.to_string(),
                    first: w.first,
                    basis: mat_to_entries(w.halfspace.basis().basis()),
                    translation: vec_to_entries(w.halfspace.translation()),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingCheck {
    pub generator: usize,
    pub residual: f64,
    pub wall: SampleCheck,
    pub beyond: SampleCheck,
}

impl PairingCheck {
    pub fn passed(&self) -> bool {
        self.wall.passed() && self.beyond.passed()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub first: String,
    pub second: String,
    pub sampled: SampleCheck,
    pub nested_intervals: bool,
    pub stem_translations: bool,
}

impl PairReport {
    pub fn algebraic(&self) -> bool {
        self.nested_intervals && self.stem_translations
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisjointnessReport {
    pub pairs: Vec<PairReport>,
}

impl DisjointnessReport {
    pub fn sampled_passed(&self) -> bool {
        self.pairs.iter().all(|p| p.sampled.passed())
    }

    pub fn algebraic_passed(&self) -> bool {
        self.pairs.iter().all(PairReport::algebraic)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallEntry {
    pub arc: String,
    pub first: ArcSide,
    /// Columns are the J-basis `E` of the halfspace.
    pub basis: MatEntries,
    pub translation: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainFile {
    pub dim: usize,
    pub walls: Vec<WallEntry>,
}
