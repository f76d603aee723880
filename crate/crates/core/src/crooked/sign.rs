//! Sign variations of coordinate vectors.

use super::CrookedError;
use crate::numcore::{Scalar, Sign, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignVariation {
    /// Sign changes with zeros signed to maximize them.
    pub upper: usize,
    /// Sign changes of the nonzero coordinates.
    pub lower: usize,
    /// Sign of the last coordinate in the maximizing assignment.
    pub last_upper: Sign,
    pub last_nonzero: Sign,
}

/// Sign variations of a sign pattern; all-zero patterns are rejected.
pub fn sign_variation(signs: &[Sign]) -> Result<SignVariation, CrookedError> {
    let nonzero: Vec<Sign> = signs.iter().copied().filter(|s| *s != Sign::Zero).collect();
    let Some(&last_nonzero) = nonzero.last() else {
        return Err(CrookedError::ZeroVector);
    };
    let lower = nonzero.windows(2).filter(|p| p[0] != p[1]).count();

    // best[0]: most changes so far ending in +, best[1]: ending in -.
    let mut best: [Option<usize>; 2] = [Some(0), Some(0)];
    for (k, s) in signs.iter().enumerate() {
        let allowed = [*s != Sign::Neg, *s != Sign::Pos];
        let prev = best;
        for t in 0..2 {
            best[t] = if !allowed[t] {
                None
            } else if k == 0 {
                Some(0)
            } else {
                let stay = prev[t];
                let switch = prev[1 - t].map(|c| c + 1);
                stay.max(switch)
            };
        }
    }
    let (plus, minus) = (best[0].unwrap_or(0), best[1].unwrap_or(0));
    // A trailing run of zeros is alternated, so the maximum is attained by
    // exactly one final sign.
    debug_assert!(best[0] != best[1]);
    let (upper, last_upper) = if best[0].is_some() && plus >= minus {
        (plus, Sign::Pos)
    } else {
        (minus, Sign::Neg)
    };
    Ok(SignVariation {
        upper,
        lower,
        last_upper,
        last_nonzero,
    })
}

/// Position relative to a crooked halfspace: in the open halfspace, on its
/// crooked hyperplane, or outside the closed halfspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Inside,
    Wall,
    Outside,
}

/// Region of a vector with the given coordinate signs in dimension `4n-1`.
/// The zero vector lies on the wall.
pub fn region_of_signs(signs: &[Sign], n: usize) -> Region {
    let bound = 2 * n - 1;
    let Ok(sv) = sign_variation(signs) else {
        return Region::Wall;
    };
    let open = sv.upper < bound || (sv.upper == bound && sv.last_upper == Sign::Pos);
    let closed = sv.lower < bound || (sv.lower == bound && sv.last_nonzero == Sign::Pos);
    match (open, closed) {
        (true, _) => Region::Inside,
        (false, true) => Region::Wall,
        (false, false) => Region::Outside,
    }
}

/// How float coordinates near zero are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroPolicy {
    /// Undecided coordinates are tried as `-`, `0` and `+`; disagreement is
    /// reported as ambiguous.
    Strict,
    /// Undecided coordinates are taken to be zero.
    Snap,
}

/// Region of a coordinate vector. Exact backends decide every sign; float
/// coordinates within `eps_sign` of zero (relative to the largest) are
/// handled by `policy`.
pub fn region_of_coordinates<T: Scalar>(
    coords: &[T],
    n: usize,
    tol: &Tolerance,
    policy: ZeroPolicy,
) -> Result<Region, CrookedError> {
    let scale = crate::numcore::norm_inf(coords);
    let threshold = if T::EXACT { 0.0 } else { tol.eps_sign * scale.max(f64::MIN_POSITIVE) };
    let mut signs: Vec<Sign> = coords.iter().map(|x| x.sign_with(threshold)).collect();
    let undecided: Vec<usize> = if T::EXACT || policy == ZeroPolicy::Snap {
        Vec::new()
    } else {
        (0..signs.len()).filter(|&i| signs[i] == Sign::Zero).collect()
    };
    if undecided.is_empty() {
        return Ok(region_of_signs(&signs, n));
    }
    let choices = [Sign::Neg, Sign::Zero, Sign::Pos];
    let mut found: Option<Region> = None;
    for code in 0..3usize.pow(undecided.len() as u32) {
        let mut c = code;
        for &i in &undecided {
            signs[i] = choices[c % 3];
            c /= 3;
        }
        let r = region_of_signs(&signs, n);
        match found {
            None => found = Some(r),
            Some(prev) if prev != r => {
                return Err(CrookedError::Ambiguous {
                    context: format!("{} coordinates near zero", undecided.len()),
                })
            }
            _ => {}
        }
    }
    Ok(found.expect("at least one assignment"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Rational;
    use proptest::prelude::*;

    fn signs(v: &[i64]) -> Vec<Sign> {
        v.iter()
            .map(|&x| match x.signum() {
                1 => Sign::Pos,
                -1 => Sign::Neg,
                _ => Sign::Zero,
            })
            .collect()
    }

    #[test]
    fn worked_examples() {
        let s = sign_variation(&signs(&[1, 0, 3])).unwrap();
        assert_eq!((s.upper, s.lower), (2, 0));
        let s = sign_variation(&signs(&[-1, 1, 2])).unwrap();
        assert_eq!((s.upper, s.lower), (1, 1));
        let s = sign_variation(&signs(&[1; 7])).unwrap();
        assert_eq!((s.upper, s.lower), (0, 0));
        assert!(matches!(sign_variation(&signs(&[0, 0, 0])), Err(CrookedError::ZeroVector)));
    }

    #[test]
    fn last_signs() {
        let s = sign_variation(&signs(&[1, 0, 0])).unwrap();
        assert_eq!((s.upper, s.last_upper, s.last_nonzero), (2, Sign::Pos, Sign::Pos));
        let s = sign_variation(&signs(&[1, 0])).unwrap();
        assert_eq!((s.upper, s.last_upper), (1, Sign::Neg));
        let s = sign_variation(&signs(&[0, 0, -2])).unwrap();
        assert_eq!((s.upper, s.lower, s.last_upper), (2, 0, Sign::Neg));
    }

    #[test]
    fn orthants_for_n1() {
        let inside = [[1, 1, 1], [-1, 1, 1], [-1, -1, 1], [-1, -1, -1]];
        for p in [-1i64, 1] {
            for q in [-1i64, 1] {
                for r in [-1i64, 1] {
                    let v = [p, q, r];
                    let want = if inside.contains(&v) { Region::Inside } else { Region::Outside };
                    assert_eq!(region_of_signs(&signs(&v), 1), want, "{v:?}");
                }
            }
        }
        assert_eq!(region_of_signs(&signs(&[1, 0, 3]), 1), Region::Wall);
        assert_eq!(region_of_signs(&signs(&[0, 0, 0]), 1), Region::Wall);
    }

    #[test]
    fn float_ambiguity_only_when_it_matters() {
        let tol = Tolerance::default();
        // (1, 0, 3): the middle sign decides.
        assert!(region_of_coordinates(&[1.0, 0.0, 3.0], 1, &tol, ZeroPolicy::Strict).is_err());
        assert_eq!(
            region_of_coordinates(&[1.0, 1e-14, 3.0], 1, &tol, ZeroPolicy::Snap).unwrap(),
            Region::Wall
        );
        // (-1, 0, 3) is inside whatever the middle sign.
        assert_eq!(
            region_of_coordinates(&[-1.0, 0.0, 3.0], 1, &tol, ZeroPolicy::Strict).unwrap(),
            Region::Inside
        );
        let exact: Vec<Rational> = [1, 0, 3].iter().map(|&x| Rational::from_integer(x.into())).collect();
        assert_eq!(region_of_coordinates(&exact, 1, &tol, ZeroPolicy::Strict).unwrap(), Region::Wall);
    }

    fn opposite_signs(s: &[Sign]) -> Vec<Sign> {
        // Coordinates in the opposite basis: (v_d, -v_{d-1}, ..., -v_2, v_1).
        let d = s.len();
        (0..d).map(|i| if i % 2 == 1 { s[d - 1 - i].flip() } else { s[d - 1 - i] }).collect()
    }

    proptest! {
        #[test]
        fn complement_identity(v in prop::collection::vec(-2i64..=2, 7), n in 1usize..=2) {
            let v = &v[..4 * n - 1];
            prop_assume!(v.iter().any(|&x| x != 0));
            let s = signs(v);
            let op = opposite_signs(&s);
            let a = sign_variation(&s).unwrap();
            let b = sign_variation(&op).unwrap();
            prop_assert_eq!(a.upper + b.lower, 4 * n - 2);
            prop_assert!(a.lower <= a.upper);
            // The open halfspace and the opposite closed halfspace partition.
            let open = region_of_signs(&s, n) == Region::Inside;
            let closed_op = region_of_signs(&op, n) != Region::Outside;
            prop_assert!(open ^ closed_op);
        }
    }
}
