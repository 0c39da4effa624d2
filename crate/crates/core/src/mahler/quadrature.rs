//! Offset-grid averages of `log |f|` over the torus.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::laurent::LaurentPoly;

/// Points below this modulus are dropped from the average.
pub(crate) const ZERO_CUTOFF: f64 = 1e-300;

struct Term {
    exps: Vec<i64>,
    coeff: f64,
}

/// Mean of `log |f|` over the `K^d` points `exp(2 pi i (k + 1/2) / K)`,
/// plus the number of discarded points. Rows (first coordinate) are summed
/// in parallel and combined pairwise in a fixed order.
pub(crate) fn grid_mean(f: &LaurentPoly, k: usize) -> (f64, u64) {
    let d = f.dim();
    let terms: Vec<Term> =
        f.terms().map(|(e, c)| Term { exps: e.0.clone(), coeff: c.to_f64().unwrap_or(f64::INFINITY) }).collect();
    let two_k = 2 * k as i64;
    let table: Vec<Complex64> =
        (0..two_k).map(|j| Complex64::from_polar(1.0, std::f64::consts::PI * j as f64 / k as f64)).collect();
    // weight[v][t][kv] = value of u_v^{e_tv} at grid index kv
    let weight: Vec<Vec<Vec<Complex64>>> = (0..d)
        .map(|v| {
            terms
                .iter()
                .map(|t| (0..k as i64).map(|kv| table[(t.exps[v] * (2 * kv + 1)).rem_euclid(two_k) as usize]).collect())
                .collect()
        })
        .collect();

    let rows: Vec<(f64, u64)> = (0..k)
        .into_par_iter()
        .map(|k1| {
            let start: Vec<Complex64> =
                terms.iter().enumerate().map(|(t, term)| weight[0][t][k1] * term.coeff).collect();
            let mut acc = (0.0, 0u64);
            walk(&weight, 1, &start, k, &mut acc);
            acc
        })
        .collect();
    let discarded: u64 = rows.iter().map(|r| r.1).sum();
    let sums: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let total = (k as f64).powi(d as i32) - discarded as f64;
    (pairwise_sum(&sums) / total, discarded)
}

fn walk(weight: &[Vec<Vec<Complex64>>], level: usize, partial: &[Complex64], k: usize, acc: &mut (f64, u64)) {
    if level == weight.len() {
        let value: Complex64 = partial.iter().sum();
        let m = value.norm();
        if m < ZERO_CUTOFF {
            acc.1 += 1;
        } else {
            acc.0 += m.ln();
        }
        return;
    }
    let w = &weight[level];
    let mut next = vec![Complex64::new(0.0, 0.0); partial.len()];
    for kv in 0..k {
        for (t, p) in partial.iter().enumerate() {
            next[t] = p * w[t][kv];
        }
        walk(weight, level + 1, &next, k, acc);
    }
}

pub(crate) fn pairwise_sum(x: &[f64]) -> f64 {
    match x.len() {
        0 => 0.0,
        1 => x[0],
        n => pairwise_sum(&x[..n / 2]) + pairwise_sum(&x[n / 2..]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_grid() {
        let f = LaurentPoly::constant(2, 3);
        let (m, z) = grid_mean(&f, 64);
        assert!((m - 3f64.ln()).abs() < 1e-12);
        assert_eq!(z, 0);
    }

    #[test]
    fn pairwise_matches_plain_sum_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }

    #[test]
    fn linear_factor_has_zero_log_measure() {
        // M(u1 - 2 u2) = 2
        let f: LaurentPoly = "u1 - 2*u2".parse().unwrap();
        let (m, _) = grid_mean(&f, 128);
        assert!((m - 2f64.ln()).abs() < 1e-10);
    }
}
