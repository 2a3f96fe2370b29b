//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_rational::BigRational;

use superbolic::geodesic::{distance, Geodesic};
use superbolic::grassmann::Supernumber;
use superbolic::minkowski::{act, to_upper_half_plane, SuperVector};
use superbolic::pairs::{classify_pair, common_perpendicular, PairClass};
use superbolic::selftest::{
    suite_branch_handling, suite_grassmann_oracle, suite_grassmann_roundtrips,
    suite_minkowski_discriminant, suite_minkowski_isometry, suite_osp_membership,
    suite_osp_structure, suite_pairs_intersection, suite_perpendicular,
    suite_trig_fermionic_control, suite_trig_laws, suite_uhp, SelftestConfig, SuiteResult,
};
use superbolic::superlinalg::{embed_sl2, u_gen};
use superbolic::trig::{triangle_report, Triangle};

fn cfg(trials: u32) -> SelftestConfig {
    SelftestConfig {
        gens: 4,
        trials,
        seed: 7,
        fermionic_scale: 0.5,
    }
}

fn report(criterion: &str, results: &[&SuiteResult]) {
    let ok = results.iter().all(|r| r.passed);
    println!(
        "[{}] {criterion}",
        if ok { "PASS" } else { "FAIL" }
    );
    for r in results {
        println!(
            "       {:<28} trials {:>6}  residual {:>10.3e}  tol {:>8.1e} {}",
            r.name, r.trials, r.max_residual, r.tolerance, r.note
        );
        assert!(
            r.passed,
            "{criterion}: suite {} residual {:e} exceeds {:e} ({})",
            r.name, r.max_residual, r.tolerance, r.note
        );
    }
}

#[test]
fn criterion_1_grassmann_kernel() {
    // 10^4 random multiply pairs against the word-concatenation oracle
    // (exact, rational mode); inversion and sqrt round trips exact in
    // rational mode and within 1e-12 in float mode.
    let oracle = suite_grassmann_oracle(&cfg(10_000));
    let roundtrips = suite_grassmann_roundtrips(&cfg(1_000));
    report(
        "criterion 1: Grassmann kernel (oracle + round trips)",
        &[&oracle, &roundtrips],
    );
}

#[test]
fn criterion_2_osp_group() {
    // 10^3 sampled elements pass osp_check at 1e-10; Berezinian is
    // multiplicative; factorization round-trips; sdet u(e1,e2) = 1 exactly.
    let membership = suite_osp_membership(&cfg(1_000));
    let structure = suite_osp_structure(&cfg(1_000));
    let e1 = Supernumber::<BigRational>::generator(4, 1).unwrap();
    let e2 = Supernumber::<BigRational>::generator(4, 2).unwrap();
    let u = u_gen(&e1, &e2).unwrap();
    assert_eq!(
        u.matrix().berezinian().unwrap(),
        Supernumber::one(4),
        "sdet u(e1,e2) must be exactly one"
    );
    report(
        "criterion 2: OSp(1|2) membership, Berezinian, factorization",
        &[&membership, &structure],
    );
}

#[test]
fn criterion_3_isometric_action() {
    // inner products preserved within 1e-9 over 10^3 triples; exact
    // discriminant invariance; the shear example lands exactly.
    let isometry = suite_minkowski_isometry(&cfg(1_000));
    let discriminant = suite_minkowski_discriminant(&cfg(200));
    let one = Supernumber::<BigRational>::one(4);
    let zero = Supernumber::<BigRational>::zero(4);
    let g = embed_sl2(&one, &one, &zero, &one).unwrap();
    let base = SuperVector::<BigRational>::bosonic(4, 1, 1, 0);
    let moved = act(&g, &base).unwrap();
    assert_eq!(moved, SuperVector::bosonic(4, 1, 2, 1));
    report(
        "criterion 3: isometric action and discriminant invariance",
        &[&isometry, &discriminant],
    );
}

#[test]
fn criterion_4_laws_of_cosines_and_sines() {
    // all three identities within 1e-9 over 10^3 fermionic triangles;
    // body-only angle cosines break the law on at least 95 percent.
    let laws = suite_trig_laws(&cfg(1_000));
    let control = suite_trig_fermionic_control(&cfg(1_000));
    report(
        "criterion 4: super laws of cosines and sines + fermionic control",
        &[&laws, &control],
    );
}

#[test]
fn criterion_5_intersection() {
    // 10^2 constructed intersecting pairs: conditions pass, the two point
    // formulas agree within 1e-10, the recovered point matches within 1e-9,
    // both cosine routes agree, and the six-fold fermion product vanishes.
    let intersection = suite_pairs_intersection(&cfg(100));
    report(
        "criterion 5: intersection conditions, point formulas, angle routes",
        &[&intersection],
    );
}

#[test]
fn criterion_6_common_perpendicular() {
    // worked pair: cosh distance exactly 2, matching the classical dual
    // pairing squared 4; random bosonic parallel pairs match the dual
    // oracle within 1e-9 with orthogonal legs (fermionic perturbations
    // included) and unit root products within 1e-12.
    let l1 = Geodesic::<BigRational>::new(
        SuperVector::bosonic(4, 1, 1, 0),
        SuperVector::bosonic(4, 1, -1, 0),
        0.0,
    )
    .unwrap();
    let l2 = Geodesic::<BigRational>::new(
        SuperVector::bosonic(4, 1, 5, 2),
        SuperVector::bosonic(4, 0, 4, 1),
        0.0,
    )
    .unwrap();
    let verdict = common_perpendicular(&l1, &l2, 0.0).unwrap();
    let perp = verdict.perpendicular.as_ref().unwrap();
    assert_eq!(perp.cosh_dist, Supernumber::from_i64(4, 2));
    let classified = classify_pair(&l1, &l2, 0.0).unwrap();
    assert_eq!(classified.tag, PairClass::Parallel);
    let dual = classified.dual_check.as_ref().unwrap();
    assert!((dual.h_inner_sq - 4.0).abs() <= 1e-12);
    assert!(dual.residual <= 1e-12);
    let random = suite_perpendicular(&cfg(100));
    report(
        "criterion 6: common perpendicular (worked pair + random + oracle)",
        &[&random],
    );
}

#[test]
fn criterion_7_bosonic_reduction() {
    // distance((1,1,0),(e,1/e,0)) = 1 within 1e-12
    let base = SuperVector::<f64>::bosonic(4, 1, 1, 0);
    let q = SuperVector::<f64>::new(
        Supernumber::scalar(4, 1f64.exp()),
        Supernumber::scalar(4, (-1f64).exp()),
        Supernumber::zero(4),
        Supernumber::zero(4),
        Supernumber::zero(4),
    )
    .unwrap();
    let d = distance(&base, &q, 1e-12).unwrap();
    assert!((d.d.as_ref().unwrap().body() - 1.0).abs() <= 1e-12);

    // right-triangle Pythagoras: cosh a = cosh^2(1) within 1e-12
    let c = SuperVector::<f64>::new(
        Supernumber::scalar(4, 1f64.cosh()),
        Supernumber::scalar(4, 1f64.cosh()),
        Supernumber::scalar(4, 1f64.sinh()),
        Supernumber::zero(4),
        Supernumber::zero(4),
    )
    .unwrap();
    let t = Triangle::new(base.clone(), q.clone(), c, 1e-9).unwrap();
    let report_t = triangle_report(&t, 1e-9).unwrap();
    assert!((report_t.cosh_sides[0].body() - 1f64.cosh().powi(2)).abs() <= 1e-12);

    // base point maps to (i, 0) exactly
    let (z, theta) = to_upper_half_plane(&base, 1e-12).unwrap();
    assert_eq!(z.body(), num_complex::Complex64::new(0.0, 1.0));
    assert!(z.soul().is_zero() && theta.is_zero());

    // Moebius equivariance within 1e-9 over 10^2 samples
    let uhp = suite_uhp(&cfg(100));
    report("criterion 7: bosonic reduction to classical geometry", &[&uhp]);
}

#[test]
fn criterion_8_branch_point_handling() {
    // 10^2 coincident-body fermionic pairs return cosh_d and omit d.
    let branch = suite_branch_handling(&cfg(100));
    report("criterion 8: arccosh branch-point handling", &[&branch]);
}
