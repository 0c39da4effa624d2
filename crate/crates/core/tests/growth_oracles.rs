//! Growth series against closed forms and character products.

use num_bigint::BigInt;
use num_traits::Pow;

use linkgrowth::alexander::alexander_polynomial;
use linkgrowth::covers::{knot_resultant_log, HomologyMethod};
use linkgrowth::growth::{run_family, FamilySpec};
use linkgrowth::linkio::{builtin_link, wirtinger, WirtingerPresentation};

fn builtin(name: &str) -> WirtingerPresentation {
    wirtinger(&builtin_link(name).unwrap()).unwrap()
}

#[test]
fn figure8_matches_the_resultant() {
    let p = builtin("figure8");
    let delta = alexander_polynomial(&p).unwrap();
    let run = run_family(&p, &FamilySpec::Cyclic(60), HomologyMethod::Relative).unwrap();
    assert!(run.failures.is_empty());
    for rec in &run.records {
        let (log, zeros) = knot_resultant_log(&delta, rec.m).unwrap();
        assert_eq!(zeros, 0);
        assert!((rec.normalized_log - log / rec.m as f64).abs() < 1e-9, "r = {}", rec.m);
    }
}

#[test]
fn trefoil_is_periodic() {
    let run = run_family(&builtin("trefoil"), &FamilySpec::Cyclic(60), HomologyMethod::Relative).unwrap();
    let recs = &run.records;
    assert_eq!(recs.len(), 60);
    for r in 6..60 {
        assert_eq!(recs[r].b, recs[r - 6].b, "r = {}", r + 1);
        assert_eq!(recs[r].betti, recs[r - 6].betti, "r = {}", r + 1);
    }
    let first: Vec<(usize, BigInt)> = recs[..6].iter().map(|r| (r.betti, r.b.clone())).collect();
    let want: Vec<(usize, BigInt)> =
        [(0, 1), (0, 3), (0, 4), (0, 3), (0, 1), (2, 1)].into_iter().map(|(b, t)| (b, BigInt::from(t))).collect();
    assert_eq!(first, want);
}

#[test]
fn whitehead_diag_family_closed_form() {
    // for Δ = (u1 - 1)(u2 - 1) the product of |Δ| over characters
    // nontrivial on both coordinates is n^(n-1) * n^(n-1)
    let run = run_family(&builtin("whitehead"), &FamilySpec::Diag(12), HomologyMethod::Relative).unwrap();
    assert!(run.failures.is_empty());
    for (n, rec) in (1u32..).zip(&run.records) {
        assert_eq!(rec.betti, 0, "n = {n}");
        assert_eq!(rec.b, BigInt::from(n).pow(2 * (n - 1)), "n = {n}");
    }
}

#[test]
fn diag_family_shape() {
    let run = run_family(&builtin("6_2^3"), &FamilySpec::Diag(8), HomologyMethod::Relative).unwrap();
    assert_eq!(run.records.len(), 8);
    for (n, rec) in (1u64..).zip(&run.records) {
        assert_eq!(rec.m, n * n);
        assert_eq!(rec.min_vec, Some(n as f64));
        assert!(rec.normalized_log >= 0.0);
    }
}
