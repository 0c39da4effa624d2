//! Acceptance suite: one PASS/FAIL line per criterion, sub-checks indented.
//! Runs without the libtest harness so every line is always printed.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linkgrowth::alexander::alexander_polynomial;
use linkgrowth::covers::{
    based_branch_equivalence, boundary_squares_to_zero, build_complex, homology, homology_relative_complex,
    knot_resultant_oracle, sigma_prime_rank, HomologyMethod, HomologySummary,
};
use linkgrowth::growth::{comparison, estimate_rate, run_family, FamilySpec, GrowthRecord};
use linkgrowth::lattices::{determinant, snf, IntMatrix, Lattice};
use linkgrowth::laurent::LaurentPoly;
use linkgrowth::linkio::{builtin_link, builtin_polynomial, wirtinger, WirtingerPresentation};
use linkgrowth::mahler::{mahler, mahler_multivariate, mahler_univariate, MahlerMethod, MahlerOptions};

const SEED: u64 = 20_240_601;

struct Check {
    ok: bool,
    note: bool,
    text: String,
}

fn check(ok: bool, text: impl Into<String>) -> Check {
    Check { ok, note: false, text: text.into() }
}

fn note(text: impl Into<String>) -> Check {
    Check { ok: true, note: true, text: text.into() }
}

fn pres(name: &str) -> WirtingerPresentation {
    wirtinger(&builtin_link(name).unwrap()).unwrap()
}

fn poly(s: &str, d: usize) -> LaurentPoly {
    LaurentPoly::parse_with_dim(s, d).unwrap()
}

fn opts() -> MahlerOptions {
    MahlerOptions::default()
}

fn criterion_1() -> Vec<Check> {
    let cases = [
        ("trefoil", "u1^2 - u1 + 1", 1),
        ("figure8", "u1^2 - 3*u1 + 1", 1),
        ("5_1^2", "1 - u1 - u2 + u1*u2", 2),
        ("6_2^2", "u1 + u2 - 1 + u1^-1 + u2^-1", 2),
        ("6_2^3", "2 - u1 - u2 + 2*u1*u2", 2),
    ];
    cases
        .iter()
        .map(|&(name, want, d)| {
            let got = alexander_polynomial(&pres(name)).unwrap();
            let want = poly(want, d).normalize();
            check(got == want, format!("{name}: {got}  (expected {want} up to units)"))
        })
        .collect()
}

fn within(name: &str, value: f64, target: f64, tol: f64) -> Check {
    let gap = (value - target).abs();
    check(gap <= tol, format!("{name}: {value:.10} vs {target} (|gap| {gap:.2e}, tolerance {tol:e})"))
}

fn criterion_2() -> Vec<Check> {
    let mut out = Vec::new();
    let fig8 = mahler_univariate(&poly("u1^2 - 3*u1 + 1", 1), &opts()).unwrap();
    out.push(check(fig8.method == MahlerMethod::Roots, "figure-8 uses the roots path"));
    out.push(within("figure-8 M", fig8.value, 1.6180340, 1e-6));
    out.push(note(format!("the larger root of u^2 - 3u + 1 is (3 + sqrt 5)/2 = {:.10}", (3.0 + 5f64.sqrt()) / 2.0)));
    let trefoil = mahler(&poly("u1^2 - u1 + 1", 1), &opts()).unwrap();
    out.push(within("trefoil M", trefoil.value, 1.0, 1e-9));
    let lehmer = mahler(&builtin_polynomial("lehmer").unwrap(), &opts()).unwrap();
    out.push(within("Lehmer M (three digits)", lehmer.value, 1.176, 1e-3));
    out.push(within("Lehmer M (high-precision value)", lehmer.value, 1.1762808182599175, 1e-8));
    let q = MahlerOptions { tol: 5e-3, ..opts() };
    let d3 = mahler(&alexander_polynomial(&pres("6_2^3")).unwrap(), &q).unwrap();
    out.push(within("6_2^3 M", d3.value, 2.0, 0.01));
    let d2 = mahler(&alexander_polynomial(&pres("6_2^2")).unwrap(), &q).unwrap();
    out.push(check(d2.method == MahlerMethod::Quadrature, "6_2^2 uses quadrature"));
    out.push(within("6_2^2 M", d2.value, 1.285, 0.01));
    out
}

fn criterion_3() -> Vec<Check> {
    let mut out = Vec::new();
    for name in ["trefoil", "figure8"] {
        let p = pres(name);
        let delta = alexander_polynomial(&p).unwrap();
        let (mut agree, mut oracle_hits, mut oracle_total) = (true, 0, 0);
        let mut detail = Vec::new();
        for r in 1..=12 {
            let lam = Lattice::cyclic(r).unwrap();
            let a = homology(&p, &lam, HomologyMethod::Direct).unwrap();
            let b = homology(&p, &lam, HomologyMethod::Relative).unwrap();
            agree &= a.same_group(&b);
            let o = knot_resultant_oracle(&delta, r as u64).unwrap();
            if o.zero_factor_count == 0 {
                oracle_total += 1;
                if o.torsion_order == b.torsion_order {
                    oracle_hits += 1;
                } else {
                    detail.push(format!("r={r}: {} vs {}", b.torsion_order, o.torsion_order));
                }
            }
        }
        out.push(check(agree, format!("{name}: direct == relative for r = 1..12")));
        out.push(check(
            oracle_hits == oracle_total,
            format!("{name}: torsion == resultant on {oracle_hits}/{oracle_total} zero-free r {}", detail.join(", ")),
        ));
    }
    out
}

fn criterion_4() -> Vec<Check> {
    let p = pres("trefoil");
    let h: Vec<HomologySummary> =
        (1..=30).map(|r| homology(&p, &Lattice::cyclic(r).unwrap(), HomologyMethod::Relative).unwrap()).collect();
    let bad: Vec<i64> = (1..=24).filter(|&r| !h[r as usize - 1].same_group(&h[r as usize + 5])).collect();
    vec![check(bad.is_empty(), format!("trefoil H1(M_r) = H1(M_r+6) for r = 1..24 (mismatches: {bad:?})"))]
}

fn criterion_5() -> Vec<Check> {
    let mut out = Vec::new();
    let p = pres("figure8");
    let run = run_family(&p, &FamilySpec::Cyclic(60), HomologyMethod::Relative).unwrap();
    out.push(check(run.failures.is_empty() && run.records.len() == 60, "figure-8 cyclic:60 series complete"));
    let reference = comparison(&p, &opts()).unwrap().log_mahler;
    let est = estimate_rate(&run.records, 10, reference).unwrap();
    let target = 1.6180f64.ln();
    let gap = (est.tail_max - target).abs();
    out.push(check(
        gap <= 0.025,
        format!("figure-8 tail_max {:.6} vs log 1.6180 = {target:.6} (|gap| {gap:.4}, tolerance 0.025)", est.tail_max),
    ));
    out.push(note(format!(
        "against the computed log M(Δ) = {:.6} the gap is {:.2e}",
        reference.unwrap(),
        est.abs_gap.unwrap()
    )));
    let p = pres("trefoil");
    let run = run_family(&p, &FamilySpec::Cyclic(60), HomologyMethod::Relative).unwrap();
    let reference = comparison(&p, &opts()).unwrap().log_mahler.unwrap();
    let est = estimate_rate(&run.records, 10, Some(reference)).unwrap();
    out.push(check(reference.abs() <= 1e-9, format!("trefoil reference log M = {reference:.2e}")));
    out.push(check(est.tail_max <= 0.03, format!("trefoil tail_max {:.6} <= 0.03", est.tail_max)));
    out
}

fn criterion_6() -> Vec<Check> {
    let mut out = Vec::new();
    let p = pres("6_2^3");
    let run = run_family(&p, &FamilySpec::Diag(12), HomologyMethod::Relative).unwrap();
    let complete = run.failures.is_empty() && run.records.len() == 12;
    out.push(check(complete, format!("6_2^3 diag:12 series complete ({} records)", run.records.len())));
    let c1_rank = p.num_generators() as u64 * 144;
    out.push(check(c1_rank <= 864, format!("C1 rank at n = 12 is {c1_rank} (<= 864)")));
    let agree = (1..=6).all(|n| {
        let lam = Lattice::scaled(n, 2).unwrap();
        let a = homology(&p, &lam, HomologyMethod::Direct).unwrap();
        let b = homology(&p, &lam, HomologyMethod::Relative).unwrap();
        a.same_group(&b)
    });
    out.push(check(agree, "direct == relative for n <= 6"));
    if complete {
        let gap = |n: usize| (run.records[n - 1].normalized_log - 2f64.ln()).abs();
        out.push(check(
            gap(12) <= 0.25,
            format!(
                "normalized_log(12) = {:.6}, |gap to log 2| {:.4} <= 0.25",
                run.records[11].normalized_log,
                gap(12)
            ),
        ));
        out.push(check(gap(12) < gap(4), format!("gap(12) {:.4} < gap(4) {:.4}", gap(12), gap(4))));
    }
    out
}

fn criterion_7() -> Vec<Check> {
    let mut out = Vec::new();
    let p = pres("5_1^2");
    let lam = Lattice::diag(&[3, 2]).unwrap();
    let sp = sigma_prime_rank(&p, &lam).unwrap();
    out.push(check(sp == 11, format!("sigma_prime_rank = {sp} (expected 11)")));
    let q = build_complex(&p, &lam).unwrap();
    out.push(check(q.num_branch_cols == 13, format!("branch columns = {} (expected 13)", q.num_branch_cols)));
    let h = homology_relative_complex(&q).unwrap();
    let diff = h.sfix_dim.unwrap() as i64 - h.betti as i64;
    out.push(check(
        diff == 5,
        format!("dim SFix - betti = {} - {} = {diff} (expected 5)", h.sfix_dim.unwrap(), h.betti),
    ));
    let m = mahler_multivariate(&alexander_polynomial(&p).unwrap(), &opts()).unwrap();
    out.push(within("M(Δ) by quadrature", m.value, 1.0, 0.02));
    let run = run_family(&p, &FamilySpec::Diag(12), HomologyMethod::Relative).unwrap();
    let worst: &GrowthRecord =
        run.records.iter().max_by(|a, b| a.normalized_log.total_cmp(&b.normalized_log)).expect("records");
    out.push(check(
        run.failures.is_empty() && worst.normalized_log <= 0.05,
        format!(
            "max normalized_log over diag n <= 12 is {:.4} at {} (bound 0.05)",
            worst.normalized_log, worst.lattice
        ),
    ));
    let last = run.records.last().unwrap();
    out.push(note(format!("at n = 12, b = {} = 12^22 and normalized_log = {:.4}", last.b, last.normalized_log)));
    out
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, max_terms: usize, span: i64, coeff: i64) -> LaurentPoly {
    let n = rng.gen_range(1..=max_terms);
    let terms: Vec<(Vec<i64>, i64)> = (0..n)
        .map(|_| ((0..dim).map(|_| rng.gen_range(-span..=span)).collect(), rng.gen_range(-coeff..=coeff)))
        .collect();
    LaurentPoly::from_terms(dim, terms)
}

fn minor_gcd_factors(a: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = (a.rows(), a.cols());
    let mut gs = vec![BigInt::from(1)];
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub = submatrix(a, &rows, &cols);
                g = g.gcd(&determinant(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        gs.push(g);
    }
    gs.windows(2).map(|w| &w[1] / &w[0]).collect()
}

fn submatrix(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            m.set(i, j, a.get(r, c).clone());
        }
    }
    m
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn criterion_8() -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut bad = 0;
    for _ in 0..300 {
        let dim = rng.gen_range(1..=3);
        let f = random_poly(&mut rng, dim, 6, 4, 20);
        if LaurentPoly::parse_with_dim(&f.to_string(), dim).ok() != Some(f) {
            bad += 1;
        }
    }
    out.push(check(bad == 0, format!("laurent print/parse round-trips: {bad}/300 failures")));

    let mut bad = 0;
    for _ in 0..300 {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntMatrix::from_rows(&rows);
        if snf(&a, false).factors != minor_gcd_factors(&a) {
            bad += 1;
        }
    }
    out.push(check(bad == 0, format!("SNF vs minor gcds on <= 4x4 matrices in [-9,9]: {bad}/300 failures")));

    let (mut bad, mut worst) = (0, 0.0f64);
    for _ in 0..100 {
        let f = random_poly(&mut rng, 1, 5, 4, 6);
        let g = random_poly(&mut rng, 1, 5, 4, 6);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let mf = mahler(&f, &opts()).unwrap().log_value;
        let mg = mahler(&g, &opts()).unwrap().log_value;
        let mfg = mahler(&f.checked_mul(&g).unwrap(), &opts()).unwrap().log_value;
        let unit = f.checked_mul(&poly("-u1^3", 1)).unwrap();
        let mu = mahler(&unit, &opts()).unwrap().log_value;
        let err = (mfg - mf - mg).abs().max((mu - mf).abs());
        worst = worst.max(err);
        if err > 1e-8 {
            bad += 1;
        }
    }
    out.push(check(bad == 0, format!("Mahler multiplicativity and unit invariance, one variable: {bad} failures (worst {worst:.1e}, tolerance 1e-8)")));

    let (mut bad, mut worst, mut cases) = (0, 0.0f64, 0);
    while cases < 8 {
        let f = random_poly(&mut rng, 2, 3, 2, 4);
        let g = random_poly(&mut rng, 2, 3, 2, 4);
        if f.is_zero() || g.is_zero() || f.num_terms() < 2 || g.num_terms() < 2 {
            continue;
        }
        cases += 1;
        let q = MahlerOptions { tol: 1e-4, ..opts() };
        let mf = mahler(&f, &q).unwrap().log_value;
        let mg = mahler(&g, &q).unwrap().log_value;
        let mfg = mahler(&f.checked_mul(&g).unwrap(), &q).unwrap().log_value;
        let err = (mfg - mf - mg).abs();
        worst = worst.max(err);
        if err > 0.02 {
            bad += 1;
        }
    }
    out.push(check(
        bad == 0,
        format!("Mahler multiplicativity, two variables: {bad}/{cases} failures (worst {worst:.1e}, tolerance 0.02)"),
    ));

    let mut complexes = 0;
    let mut bad = 0;
    for name in ["unknot", "trefoil", "figure8"] {
        let p = pres(name);
        for r in 1..=24 {
            complexes += 1;
            bad += usize::from(!boundary_squares_to_zero(&build_complex(&p, &Lattice::cyclic(r).unwrap()).unwrap()));
        }
    }
    for name in ["hopf", "5_1^2", "6_2^2", "6_2^3"] {
        let p = pres(name);
        for _ in 0..12 {
            let cols = loop {
                let v: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..=4)).collect();
                let det = v[0] * v[3] - v[1] * v[2];
                if det != 0 && det.abs() <= 40 {
                    break vec![vec![v[0], v[1]], vec![v[2], v[3]]];
                }
            };
            complexes += 1;
            let lam = Lattice::from_columns(cols).unwrap();
            bad += usize::from(!boundary_squares_to_zero(&build_complex(&p, &lam).unwrap()));
        }
    }
    out.push(check(bad == 0, format!("d1 d2 = 0 on {complexes} complexes: {bad} failures")));

    let mut bad = Vec::new();
    for name in ["trefoil", "figure8"] {
        let p = pres(name);
        for r in 1..=12 {
            if !based_branch_equivalence(&p, &Lattice::cyclic(r).unwrap()).unwrap().agree {
                bad.push(format!("{name} r={r}"));
            }
        }
    }
    out.push(check(bad.is_empty(), format!("based branch equivalence for knots r <= 12 (failures: {bad:?})")));
    out
}

fn main() {
    type Criterion = (&'static str, fn() -> Vec<Check>, Duration);
    let criteria: [Criterion; 8] = [
        ("Alexander polynomials", criterion_1, Duration::from_secs(1)),
        ("Mahler measures", criterion_2, Duration::from_secs(30)),
        ("knot covers vs resultant", criterion_3, Duration::from_secs(60)),
        ("trefoil period 6", criterion_4, Duration::from_secs(60)),
        ("growth, one variable", criterion_5, Duration::from_secs(120)),
        ("growth, two variables", criterion_6, Duration::from_secs(600)),
        ("Whitehead bookkeeping", criterion_7, Duration::from_secs(120)),
        ("property suites", criterion_8, Duration::from_secs(120)),
    ];
    let mut passed = 0;
    for (i, (title, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let checks = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let ok = in_time && checks.iter().all(|c| c.ok);
        passed += usize::from(ok);
        println!(
            "{} criterion {}: {title} ({:.2} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        for c in &checks {
            let tag = if c.note {
                "note"
            } else if c.ok {
                "ok  "
            } else {
                "FAIL"
            };
            println!("    {tag} {}", c.text);
        }
        if !in_time {
            println!("    FAIL runtime over limit");
        }
    }
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
