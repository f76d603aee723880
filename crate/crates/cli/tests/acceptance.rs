//! Acceptance criteria, one line each. Pass a number to run a single one:
//! `cargo test --release --test acceptance -- 9`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use posaffine::cocycle::{cocycle_identity_residual, AffineDeformation, AffineMap, ArcVectors};
use posaffine::crooked::{sign_variation, region_of_signs, CrookedHalfspace, Region};
use posaffine::flags::{flag_pair, is_positive_triple, lower_unipotent_tp, opposite_basis, triple_margin, OrientedFlag};
use posaffine::freegroup::{conjugacy_representatives, enumerate_words, ArcSide, BaseArc, CirclePoint, SchottkyData};
use posaffine::margulis::{neutral_of_element, properness_scan, MargulisContext};
use posaffine::numcore::{
    is_totally_positive, is_totally_positive_brute, norm_inf, vadd, Dd, Mat, Rational, Scalar, Sign, Tolerance,
};
use posaffine::posrep::{positive_element, veronese_flag, BoundaryMap};
use posaffine_cli::pipeline;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn q(p: i64, d: i64) -> Rational {
    Rational::from_ratio(p, d)
}

fn signs(v: &[i64]) -> Vec<Sign> {
    v.iter()
        .map(|x| match x.signum() {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => Sign::Zero,
        })
        .collect()
}

fn exact_signs(v: &[Rational]) -> Vec<Sign> {
    v.iter().map(|x| x.exact_sign()).collect()
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// The bundled rank-two Schottky group, its Fuchsian representation for
/// `n` and the strip deformation with unit scales.
struct Example {
    schottky: SchottkyData<Dd>,
    bmap: BoundaryMap<Dd>,
    def: AffineDeformation<Dd>,
    tol: Tolerance,
}

fn example(n: usize) -> Example {
    let tol = Tolerance::for_scalar::<Dd>();
    let schottky = pipeline::load_schottky(&data("schottky_rank2.json")).expect("bundled Schottky data");
    let bmap = pipeline::generate(&schottky, n, &tol).expect("representation");
    let def = pipeline::strip(&bmap, None).expect("strip deformation");
    Example {
        schottky,
        bmap,
        def,
        tol,
    }
}

fn sign_variation_values() -> Verdict {
    let a = sign_variation(&signs(&[1, 0, 3])).unwrap();
    let b = sign_variation(&signs(&[-1, 1, 2])).unwrap();
    let ok = (a.upper, a.lower, b.upper, b.lower) == (2, 0, 1, 1);
    verdict(
        ok,
        format!("(1,0,3): S+={} S-={}; (-1,1,2): S+={} S-={}", a.upper, a.lower, b.upper, b.lower),
    )
}

fn orthant_partition() -> Verdict {
    let listed = [[1, 1, 1], [-1, 1, 1], [-1, -1, 1], [-1, -1, -1]];
    let mut inside = 0;
    let mut wrong = Vec::new();
    for p in [-1i64, 1] {
        for r in [-1i64, 1] {
            for s in [-1i64, 1] {
                let v = [p, r, s];
                let region = region_of_signs(&signs(&v), 1);
                let want = if listed.contains(&v) { Region::Inside } else { Region::Outside };
                if region == Region::Inside {
                    inside += 1;
                }
                if region != want {
                    wrong.push(format!("{v:?}"));
                }
            }
        }
    }
    verdict(wrong.is_empty(), format!("{inside}/8 orthants inside, mismatches {wrong:?}"))
}

fn complement_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = 0;
    let mut total = 0;
    for n in 1..=2 {
        let h = CrookedHalfspace::<Rational>::standard(n).unwrap();
        let hat = h.opposite();
        let d = 4 * n - 1;
        for _ in 0..100_000 {
            let v: Vec<Rational> = (0..d).map(|_| q(rng.gen_range(-3..=3), rng.gen_range(1..=4))).collect();
            if v.iter().all(|x| x.exact_sign() == Sign::Zero) {
                continue;
            }
            let plus = sign_variation(&exact_signs(&h.coordinates(&v))).unwrap().upper;
            let minus = sign_variation(&exact_signs(&hat.coordinates(&v))).unwrap().lower;
            total += 1;
            if plus + minus != d - 1 {
                bad += 1;
            }
        }
    }
    verdict(bad == 0, format!("{total} vectors, n in {{1,2}}, {bad} violations"))
}

fn semigroup() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=2 {
        let trials = posaffine_cli::commands::semigroup(n, 1000, 11).unwrap();
        let passed = trials.iter().filter(|t| t.passed()).count();
        ok &= passed == 1000;
        parts.push(format!("n={n}: {passed}/1000"));
    }
    verdict(ok, parts.join(", "))
}

fn tp_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = Tolerance::default();
    let mut disagreements = 0;
    let mut tp = 0;
    for k in 0..200 {
        let params: Vec<Rational> = (0..6).map(|_| q(rng.gen_range(1..=24), 8)).collect();
        let l = lower_unipotent_tp(4, &params);
        let params: Vec<Rational> = (0..6).map(|_| q(rng.gen_range(1..=24), 8)).collect();
        let u = lower_unipotent_tp(4, &params).transpose();
        let diag: Vec<Rational> = (0..4).map(|_| q(rng.gen_range(1..=16), 4)).collect();
        let mut m = l.mul(&Mat::diagonal(&diag)).mul(&u);
        match k % 4 {
            // Totally positive as built.
            0 => {}
            // Random positive entries.
            1 => m = Mat::from_fn(4, 4, |_, _| q(rng.gen_range(1..=9), 1)),
            // One entry nudged: small changes keep it positive, large ones break it.
            2 => {
                let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
                let delta = q(rng.gen_range(-40..=40), 8);
                m[(i, j)] = m[(i, j)].clone() + delta;
            }
            // Rows swapped.
            _ => {
                let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
                for c in 0..4 {
                    let t = m[(i, c)].clone();
                    m[(i, c)] = m[(j, c)].clone();
                    m[(j, c)] = t;
                }
            }
        }
        let fast = is_totally_positive(&m, &tol);
        if fast != is_totally_positive_brute(&m, &tol) {
            disagreements += 1;
        }
        tp += usize::from(fast);
    }
    verdict(disagreements == 0, format!("200 instances ({tp} TP), {disagreements} disagreements"))
}

fn random_basis(rng: &mut ChaCha8Rng, d: usize) -> Mat<Rational> {
    loop {
        let mut e = Mat::from_fn(d, d, |_, _| q(rng.gen_range(-4..=4), 1));
        let det = e.det();
        match det.exact_sign() {
            Sign::Zero => continue,
            Sign::Neg => {
                for r in 0..d {
                    e[(r, 0)] = -e[(r, 0)].clone();
                }
            }
            Sign::Pos => {}
        }
        return e;
    }
}

fn random_lower_tp(rng: &mut ChaCha8Rng, d: usize) -> Mat<Rational> {
    let params: Vec<Rational> = (0..d * (d - 1) / 2).map(|_| q(rng.gen_range(1..=16), 8)).collect();
    lower_unipotent_tp(d, &params)
}

fn flag_axioms() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tol = Tolerance::default();
    let mut violations = Vec::new();
    let mut count = 0;
    for n in 1..=2 {
        let d = 4 * n - 1;
        for _ in 0..500 {
            let e = random_basis(&mut rng, d);
            let (f, h) = flag_pair(&e).unwrap();
            let g = OrientedFlag::from_basis_unchecked(e.mul(&random_lower_tp(&mut rng, d))).unwrap();
            let k = OrientedFlag::from_basis_unchecked(opposite_basis(&e).mul(&random_lower_tp(&mut rng, d))).unwrap();
            let pos = |a: &OrientedFlag<Rational>, b: &OrientedFlag<Rational>, c: &OrientedFlag<Rational>| {
                is_positive_triple(a, b, c, &tol).unwrap()
            };
            count += 1;
            if !pos(&f, &g, &h) || !pos(&h, &k, &f) {
                violations.push("construction");
                continue;
            }
            if !(pos(&g, &h, &f) && pos(&h, &f, &g)) {
                violations.push("cyclic invariance");
            }
            if pos(&h, &g, &f) || pos(&g, &f, &h) || pos(&f, &h, &g) {
                violations.push("anti-symmetry");
            }
            // (F,G,H) and (F,H,K) positive give (F,G,K) and (G,H,K).
            if !(pos(&f, &h, &k) && pos(&f, &g, &k) && pos(&g, &h, &k)) {
                violations.push("transitivity");
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!("{count} triples, n in {{1,2}}, violations {violations:?}"),
    )
}

/// Sorted angles with every cyclic gap at least `min_gap`.
fn separated_angles(rng: &mut ChaCha8Rng, min_gap: f64) -> Vec<f64> {
    use std::f64::consts::TAU;
    loop {
        let mut a: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..TAU)).collect();
        a.sort_by(f64::total_cmp);
        let ok = (0..4).all(|i| {
            let next = if i == 3 { a[0] + TAU } else { a[i + 1] };
            next - a[i] >= min_gap
        });
        if ok {
            return a;
        }
    }
}

fn quadruple_margin(angles: &[f64], n: usize) -> f64 {
    let flags: Vec<OrientedFlag<Dd>> = angles
        .iter()
        .map(|&t| veronese_flag(&CirclePoint::from_angle(t), n).unwrap())
        .collect();
    [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        .iter()
        .map(|&(a, b, c)| triple_margin(&flags[a], &flags[b], &flags[c]).unwrap())
        .fold(f64::INFINITY, f64::min)
}

fn veronese_positivity() -> Verdict {
    // Normalized determinants at n = 2 shrink like gap^16, so the 1e-8
    // margin is asked of quadruples with gaps of at least 0.6; closer ones
    // need only be positive.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_far, mut worst_near) = (f64::INFINITY, f64::INFINITY);
    let mut failures = 0;
    for n in 1..=2 {
        for _ in 0..500 {
            let far = quadruple_margin(&separated_angles(&mut rng, 0.6), n);
            let near = quadruple_margin(&separated_angles(&mut rng, 0.1), n);
            worst_far = worst_far.min(far);
            worst_near = worst_near.min(near);
            failures += usize::from(!(far > 1e-8)) + usize::from(!(near > 0.0));
        }
    }
    verdict(
        failures == 0,
        format!(
            "1000 quadruples with gaps >= 0.6 (min normalized determinant {worst_far:.3e}), 1000 with gaps >= 0.1 (min {worst_near:.3e}), n in {{1,2}}"
        ),
    )
}

fn cocycle_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for n in 1..=2 {
        let ex = example(n);
        let words = enumerate_words(2, 4);
        for w1 in &words {
            for w2 in &words {
                let (r, scale) = cocycle_identity_residual(&ex.def, w1, w2);
                worst = worst.max(norm_inf(&r) / scale);
                pairs += 1;
            }
        }
    }
    verdict(worst < 1e-9, format!("{pairs} pairs, |w| <= 4, n in {{1,2}}, max relative residual {worst:.2e}"))
}

/// Strip vectors with the endpoints of the second wall pair exchanged.
fn corrupted(ex: &Example) -> AffineDeformation<Dd> {
    let good = ArcVectors::from_boundary(&ex.bmap, &[Dd::from(1.0), Dd::from(1.0)]).unwrap();
    let chosen = (0..2)
        .map(|gen| {
            let a = BaseArc { gen, side: ArcSide::Minus };
            let (p, m) = (good.vector(a, ArcSide::Plus).to_vec(), good.vector(a, ArcSide::Minus).to_vec());
            if gen == 1 {
                (m, p)
            } else {
                (p, m)
            }
        })
        .collect();
    let rep = ex.bmap.representation();
    AffineDeformation::strip(rep.clone(), ArcVectors::from_minus_walls(rep, chosen).unwrap()).unwrap()
}

fn margulis_scan() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=2 {
        let ex = example(n);
        let ctx = MargulisContext::new(&ex.bmap, Some(&ex.schottky));
        let scan = properness_scan(&ctx, &ex.def, 6, 0.0).unwrap();
        let positive = scan.records.iter().all(|r| r.alpha > 0.0) && scan.min_ratio > 1e-6;
        let v: Vec<Dd> = (0..4 * n - 1).map(|k| Dd::from(0.5 - k as f64)).collect();
        let cob = AffineDeformation::coboundary(ex.bmap.representation().clone(), &v).unwrap();
        let cob_scan = properness_scan(&ctx, &cob, 6, 0.0).unwrap();
        let cob_max = cob_scan.records.iter().map(|r| r.alpha.abs()).fold(0.0, f64::max);
        let bad_scan = properness_scan(&ctx, &corrupted(&ex), 6, 0.0).unwrap();
        let witness = match &bad_scan.opposite_sign_witness {
            Some((hi, lo)) => {
                let alpha = |w: &str| bad_scan.records.iter().find(|r| r.word == *w).unwrap().alpha;
                alpha(hi) > 0.0 && alpha(lo) <= 1e-9
            }
            None => false,
        };
        ok &= positive && scan.passed() && cob_max < 1e-9 && witness;
        parts.push(format!(
            "n={n}: {} classes, min alpha/t {:.4e} at {}, coboundary max |alpha| {cob_max:.1e}, corrupted witness {:?}",
            scan.words_scanned, scan.min_ratio, scan.min_ratio_word, bad_scan.opposite_sign_witness
        ));
    }
    verdict(ok, parts.join("; "))
}

fn route_agreement() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut words = 0;
    let mut errors = 0;
    for n in 1..=2 {
        let ex = example(n);
        let ctx = MargulisContext::new(&ex.bmap, Some(&ex.schottky));
        for w in conjugacy_representatives(2, 6) {
            words += 1;
            match neutral_of_element(&ctx, &w) {
                Ok(c) => worst = worst.max(c.route_gap),
                Err(_) => errors += 1,
            }
        }
    }
    verdict(
        errors == 0 && worst <= 1e-7,
        format!("{words} words, n in {{1,2}}, max route gap {worst:.2e}, {errors} errors"),
    )
}

fn stem_quadrant() -> Verdict {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut membership_bad, mut translation_bad, mut witness_bad) = (0, 0, 0);
    for n in 1..=2 {
        let d = 4 * n - 1;
        let k = (2 * n - 1usize).pow(2);
        let param = |rng: &mut ChaCha8Rng, m: usize| -> Vec<Rational> { (0..m).map(|_| q(rng.gen_range(1..=16), 8)).collect() };
        let g = positive_element(n, &param(&mut rng, k), &param(&mut rng, 2 * n - 1), &param(&mut rng, k)).unwrap();
        let t: Vec<Rational> = (0..d).map(|_| q(rng.gen_range(-8..=8), 4)).collect();
        let h = CrookedHalfspace::<Rational>::standard(n).unwrap().transformed(&AffineMap {
            linear: g.matrix().clone(),
            translation: t,
        });
        let sq = h.stem_quadrant();
        let cone = |rng: &mut ChaCha8Rng| {
            let a = if rng.gen_bool(0.2) { q(0, 1) } else { q(rng.gen_range(1..=20), 4) };
            let b = if rng.gen_bool(0.2) { q(0, 1) } else { q(rng.gen_range(1..=20), 4) };
            sq.combination(&a, &b)
        };
        let interior_nudge = |rng: &mut ChaCha8Rng, u: &[Rational]| {
            let mut c = vec![q(0, 1); d];
            c[rng.gen_range(1..d - 1)] = q(rng.gen_range(1..=9) * if rng.gen() { 1 } else { -1 }, 16);
            vadd(u, &h.basis().basis().mul_vec(&c))
        };
        for i in 0..5000 {
            let u = cone(&mut rng);
            let (u, want) = match i % 3 {
                0 => (u, true),
                1 => (interior_nudge(&mut rng, &u), false),
                // A negative coefficient on one end generator.
                _ => {
                    let neg = q(-rng.gen_range(1..=20), 4);
                    let pos = q(rng.gen_range(0..=20), 4);
                    let u = if rng.gen() { sq.combination(&neg, &pos) } else { sq.combination(&pos, &neg) };
                    (u, false)
                }
            };
            if sq.contains(&u, &tol) != want {
                membership_bad += 1;
            }
        }
        for i in 0..500 {
            let v = if i % 5 == 4 { h.sample_wall(&mut rng).unwrap() } else { h.sample_open(&mut rng, &tol).unwrap() };
            let u = cone(&mut rng);
            if !h.in_closed(&vadd(&v, &u), &tol).unwrap() {
                translation_bad += 1;
            }
        }
        for _ in 0..10 {
            let base = cone(&mut rng);
            let u = interior_nudge(&mut rng, &base);
            match h.non_stem_witness(&u, &tol) {
                Some(v) if h.in_closed(&v, &tol).unwrap() && !h.in_closed(&vadd(&v, &u), &tol).unwrap() => {}
                _ => witness_bad += 1,
            }
        }
    }
    verdict(
        membership_bad + translation_bad + witness_bad == 0,
        format!(
            "10000 membership samples ({membership_bad} wrong), 1000 translations ({translation_bad} leave), 20 converse witnesses ({witness_bad} missing)"
        ),
    )
}

fn domain_disjointness() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=2 {
        let ex = example(n);
        let (_, artifact) = pipeline::domain_checks(&ex.def, &ex.bmap, 500, Some(10_000), 12, &ex.tol).unwrap();
        let dis = artifact.disjointness.as_ref().unwrap();
        let violations: usize = dis.pairs.iter().map(|p| p.sampled.violations.len()).sum();
        let ambiguous: usize = dis.pairs.iter().map(|p| p.sampled.ambiguous).sum();
        ok &= artifact.passed() && dis.pairs.len() == 6;
        parts.push(format!(
            "n={n}: {} pairs x 2x10^4 points, {violations} violations ({ambiguous} undecided), algebraic {}, side pairing {}",
            dis.pairs.len(),
            if dis.algebraic_passed() { "pass" } else { "fail" },
            if artifact.side_pairing.iter().all(|c| c.passed()) { "pass" } else { "fail" },
        ));
    }
    verdict(ok, parts.join("; "))
}

fn tiling() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=2 {
        let ex = example(n);
        let (domain, _) = pipeline::domain_checks(&ex.def, &ex.bmap, 10, None, 13, &ex.tol).unwrap();
        let tiles = pipeline::tiling(&domain, 10_000, 10.0, 64, Some((50, 4)), 13, &ex.tol).unwrap();
        let reloc = tiles.relocation.as_ref().unwrap();
        ok &= tiles.passed() && tiles.experiment.success_fraction == 1.0;
        parts.push(format!(
            "n={n}: located {}/{} (depths {:?}), relocation {} points x {} words, {} mismatches",
            tiles.experiment.located,
            tiles.experiment.samples,
            tiles.experiment.depth_histogram,
            reloc.points,
            reloc.words,
            reloc.mismatches.len()
        ));
    }
    verdict(ok, parts.join("; "))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Verdict); 13] = [
        (1, "sign variation worked values", sign_variation_values),
        (2, "n = 1 orthant partition", orthant_partition),
        (3, "complement identity", complement_identity),
        (4, "positive semigroup certification", semigroup),
        (5, "initial-minor test matches brute force", tp_oracle),
        (6, "flag order axioms", flag_axioms),
        (7, "Veronese quadruples are positive", veronese_positivity),
        (8, "cocycle identity", cocycle_identity),
        (9, "Margulis scan with controls", margulis_scan),
        (10, "neutral vector route agreement", route_agreement),
        (11, "stem quadrant", stem_quadrant),
        (12, "domain disjointness", domain_disjointness),
        (13, "tiling", tiling),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (k, name, run) in criteria {
        if !only.is_empty() && !only.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!v.ok);
        println!(
            "criterion {k:>2} {} {name}: {} [{:.1}s]",
            if v.ok { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
