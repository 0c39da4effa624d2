//! Durand–Kerner simultaneous iteration with Newton polishing.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const MAX_SWEEPS: usize = 500;
pub(crate) const RESIDUAL_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub(crate) struct RootSet {
    pub roots: Vec<Complex64>,
    /// Newton step length at each root after polishing.
    pub errors: Vec<f64>,
    /// Largest backward relative residual `|p(z)| / sum |c_k| |z|^k`.
    pub residual: f64,
    pub sweeps: usize,
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    // value, derivative, and sum |c_k| |z|^k for the backward error
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let az = z.norm();
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
        scale = scale * az + ck.abs();
    }
    (p, dp, scale)
}

fn backward(c: &[f64], z: Complex64) -> f64 {
    let (p, _, s) = horner(c, z);
    if s == 0.0 {
        0.0
    } else {
        p.norm() / s
    }
}

/// Roots of `sum c[k] z^k` (ascending, `c[0] != 0`, last entry nonzero).
pub(crate) fn find_roots(c: &[f64], seed: u64) -> RootSet {
    let n = c.len() - 1;
    if n == 0 {
        return RootSet { roots: Vec::new(), errors: Vec::new(), residual: 0.0, sweeps: 0 };
    }
    if n == 1 {
        let r = Complex64::new(-c[0] / c[1], 0.0);
        return RootSet { roots: vec![r], errors: vec![0.0], residual: backward(c, r), sweeps: 0 };
    }
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset: f64 = rng.gen_range(0.1..0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let radius = 1.0 + rng.gen_range(-0.05..0.05);
            let angle = std::f64::consts::TAU * (k as f64 + offset) / n as f64 + rng.gen_range(-0.01..0.01);
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, _, _) = horner(&monic, z[k]);
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(f64::EPSILON, 0.0);
            }
            let step = p / denom;
            z[k] -= step;
            moved = moved.max(step.norm() / (1.0 + z[k].norm()));
        }
        let res = z.iter().map(|&r| backward(c, r)).fold(0.0, f64::max);
        if res <= RESIDUAL_TOL || moved < 1e-16 {
            break;
        }
    }

    let mut errors = Vec::with_capacity(n);
    for r in z.iter_mut() {
        let mut last = f64::INFINITY;
        for _ in 0..3 {
            let (p, dp, _) = horner(c, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let len = step.norm();
            if len >= last {
                break;
            }
            *r -= step;
            last = len;
        }
        let (p, dp, _) = horner(c, *r);
        errors.push(if dp.norm() == 0.0 { f64::INFINITY } else { (p / dp).norm() });
    }
    let residual = z.iter().map(|&r| backward(c, r)).fold(0.0, f64::max);
    RootSet { roots: z, errors, residual, sweeps }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let rs = find_roots(&[1.0, -3.0, 1.0], 7);
        let mut m: Vec<f64> = rs.roots.iter().map(|r| r.re).collect();
        m.sort_by(f64::total_cmp);
        let s5 = 5f64.sqrt();
        assert!((m[0] - (3.0 - s5) / 2.0).abs() < 1e-13);
        assert!((m[1] - (3.0 + s5) / 2.0).abs() < 1e-13);
        assert!(rs.residual <= RESIDUAL_TOL);
    }

    #[test]
    fn cyclotomic_roots_on_circle() {
        // t^6 - 1 / ... : Phi_12 = t^4 - t^2 + 1
        let rs = find_roots(&[1.0, 0.0, -1.0, 0.0, 1.0], 3);
        for r in &rs.roots {
            assert!((r.norm() - 1.0).abs() < 1e-12, "{r}");
        }
    }

    #[test]
    fn seeds_agree_on_values() {
        let c = [1.0, 1.0, 0.0, -1.0, -1.0, -1.0, -1.0, -1.0, 0.0, 1.0, 1.0];
        let a = find_roots(&c, 1);
        let b = find_roots(&c, 99);
        let key = |v: &RootSet| {
            let mut x: Vec<(f64, f64)> = v.roots.iter().map(|r| (r.re, r.im)).collect();
            x.sort_by(|p, q| p.partial_cmp(q).unwrap());
            x
        };
        for (p, q) in key(&a).iter().zip(key(&b)) {
            assert!((p.0 - q.0).abs() < 1e-10 && (p.1 - q.1).abs() < 1e-10);
        }
    }
}
