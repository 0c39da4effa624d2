//! Mahler measure `M(f) = exp(integral of log |f| over the unit torus)`.
//!
//! One variable: `|c_n| prod max(|r_j|, 1)` over the roots of each
//! square-free factor. Several variables: either a monomial change of
//! basis down to one variable (when all exponents lie on a line) or an
//! offset-grid average on the torus.

mod quadrature;
mod roots;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::laurent::univariate::square_free;
use crate::laurent::{ln_abs, LaurentError, LaurentPoly};

pub const DEFAULT_TOL: f64 = 5e-3;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Roots this close to the unit circle count as lying on it.
pub const SNAP: f64 = 1e-9;
pub const GRID_SIZES: [usize; 6] = [64, 128, 256, 512, 1024, 2048];
/// Upper bound on `K^d` for a single quadrature pass.
pub const MAX_GRID_POINTS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MahlerError {
    #[error("the Mahler measure of the zero polynomial is undefined")]
    Zero,
    #[error("expected a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
    #[error("root iteration did not converge (residual {residual:e} after {sweeps} sweeps)")]
    NonConvergence { residual: f64, sweeps: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("coefficient too large for double precision")]
    Overflow,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MahlerMethod {
    Roots,
    Quadrature,
    LineReduction,
}

impl MahlerMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MahlerMethod::Roots => "roots",
            MahlerMethod::Quadrature => "quadrature",
            MahlerMethod::LineReduction => "line-reduction",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Quadrature sizes `K` visited, with the estimate of `log M` at each.
    pub grid_sizes: Vec<usize>,
    pub estimates: Vec<f64>,
    pub discarded_points: u64,
    /// Largest backward residual over all computed roots.
    pub max_residual: f64,
    pub sweeps: usize,
    pub snapped_roots: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MahlerResult {
    pub value: f64,
    pub log_value: f64,
    pub method: MahlerMethod,
    /// Estimated absolute error on `log_value`.
    pub error_bound: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MahlerOptions {
    /// Stopping tolerance on `log M` for quadrature.
    pub tol: f64,
    /// Seed for the root finder's starting points.
    pub seed: u64,
}

impl Default for MahlerOptions {
    fn default() -> Self {
        MahlerOptions { tol: DEFAULT_TOL, seed: DEFAULT_SEED }
    }
}

fn exact(c: &BigInt, method: MahlerMethod) -> MahlerResult {
    let log_value = ln_abs(c);
    let value = c.abs().to_f64().filter(|v| v.is_finite()).unwrap_or_else(|| log_value.exp());
    MahlerResult {
        value,
        log_value,
        method,
        error_bound: 0.0,
        diagnostics: Diagnostics { converged: true, ..Default::default() },
    }
}

/// Jensen's formula on each square-free factor.
pub fn mahler_univariate(f: &LaurentPoly, opts: &MahlerOptions) -> Result<MahlerResult, MahlerError> {
    if f.dim() != 1 {
        return Err(MahlerError::NotUnivariate(f.dim()));
    }
    if f.is_zero() {
        return Err(MahlerError::Zero);
    }
    if f.num_terms() == 1 {
        return Ok(exact(f.terms().next().unwrap().1, MahlerMethod::Roots));
    }
    let (_, dense) = f.to_dense_univariate()?;
    let mut log_value = 0.0;
    let mut error_bound = 0.0;
    let mut diag = Diagnostics { converged: true, ..Default::default() };
    for (factor, mult) in square_free(&dense) {
        let m = f64::from(mult);
        let lead = factor.last().expect("nonzero factor");
        log_value += m * ln_abs(lead);
        if factor.len() == 1 {
            continue;
        }
        let c: Vec<f64> = factor
            .iter()
            .map(|x| x.to_f64().filter(|v| v.is_finite()).ok_or(MahlerError::Overflow))
            .collect::<Result<_, _>>()?;
        let rs = roots::find_roots(&c, opts.seed);
        diag.sweeps = diag.sweeps.max(rs.sweeps);
        diag.max_residual = diag.max_residual.max(rs.residual);
        if rs.residual > roots::RESIDUAL_TOL {
            return Err(MahlerError::NonConvergence { residual: rs.residual, sweeps: rs.sweeps });
        }
        for (r, err) in rs.roots.iter().zip(&rs.errors) {
            let a = r.norm();
            if (a - 1.0).abs() <= SNAP {
                diag.snapped_roots += mult as usize;
                continue;
            }
            if a > 1.0 {
                log_value += m * a.ln();
                error_bound += m * err / a;
            } else if 1.0 - a < *err {
                error_bound += m * err;
            }
        }
    }
    error_bound += f64::EPSILON * (1.0 + log_value.abs()) * dense.len() as f64;
    Ok(MahlerResult { value: log_value.exp(), log_value, method: MahlerMethod::Roots, error_bound, diagnostics: diag })
}

/// Averages `log |f|` on offset grids until two successive sizes agree to
/// `tol`. Failing to reach `tol` is reported through
/// `diagnostics.converged`, not as an error.
pub fn mahler_multivariate(f: &LaurentPoly, opts: &MahlerOptions) -> Result<MahlerResult, MahlerError> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(MahlerError::BadTolerance(opts.tol));
    }
    if f.is_zero() {
        return Err(MahlerError::Zero);
    }
    if f.num_terms() == 1 {
        return Ok(exact(f.terms().next().unwrap().1, MahlerMethod::Quadrature));
    }
    let mut diag = Diagnostics::default();
    let mut error_bound = f64::INFINITY;
    for k in grid_sizes(f.dim()) {
        let (mean, discarded) = quadrature::grid_mean(f, k);
        if let Some(prev) = diag.estimates.last() {
            error_bound = (mean - prev).abs();
        }
        diag.grid_sizes.push(k);
        diag.estimates.push(mean);
        diag.discarded_points += discarded;
        if error_bound < opts.tol {
            diag.converged = true;
            break;
        }
    }
    let log_value = *diag.estimates.last().expect("at least one grid");
    Ok(MahlerResult {
        value: log_value.exp(),
        log_value,
        method: MahlerMethod::Quadrature,
        error_bound,
        diagnostics: diag,
    })
}

/// Grid sizes allowed by [`MAX_GRID_POINTS`]; at least two sizes, going
/// below 64 only when the dimension forces it.
pub fn grid_sizes(d: usize) -> Vec<usize> {
    let fits = |k: usize| (k as f64).powi(d as i32) <= MAX_GRID_POINTS as f64;
    let sizes: Vec<usize> = GRID_SIZES.iter().copied().filter(|&k| fits(k)).collect();
    if sizes.len() >= 2 {
        return sizes;
    }
    let mut k = 2usize;
    while fits(k * 2) {
        k *= 2;
    }
    vec![(k / 2).max(1), k]
}

/// If every exponent vector lies on `a + k v` with `v` primitive, returns
/// the univariate polynomial `sum c_j t^{k_j}`; `M` is unchanged because
/// `v` extends to a basis of `Z^d`.
pub fn line_reduction(f: &LaurentPoly) -> Option<LaurentPoly> {
    let exps: Vec<(&[i64], &BigInt)> = f.terms().map(|(e, c)| (e.0.as_slice(), c)).collect();
    let (base, _) = *exps.first()?;
    let diff = |e: &[i64]| -> Vec<i64> { e.iter().zip(base).map(|(a, b)| a - b).collect() };
    let w = exps.iter().map(|(e, _)| diff(e)).find(|v| v.iter().any(|x| *x != 0));
    let Some(w) = w else {
        return Some(LaurentPoly::from_terms(1, exps.iter().map(|(_, c)| (vec![0i64], (*c).clone()))));
    };
    let g = w.iter().fold(0i64, |g, x| g.gcd(x));
    let v: Vec<i64> = w.iter().map(|x| x / g).collect();
    let pivot = v.iter().position(|x| *x != 0)?;
    let mut terms = Vec::with_capacity(exps.len());
    for (e, c) in &exps {
        let delta = diff(e);
        let k = delta[pivot] / v[pivot];
        if delta.iter().zip(&v).any(|(a, b)| *a != k * b) {
            return None;
        }
        terms.push((vec![k], (*c).clone()));
    }
    Some(LaurentPoly::from_terms(1, terms))
}

/// Dispatch: roots for one variable or a line, quadrature otherwise.
pub fn mahler(f: &LaurentPoly, opts: &MahlerOptions) -> Result<MahlerResult, MahlerError> {
    if f.is_zero() {
        return Err(MahlerError::Zero);
    }
    if f.dim() == 1 {
        return mahler_univariate(f, opts);
    }
    if let Some(g) = line_reduction(f) {
        let mut r = mahler_univariate(&g, opts)?;
        r.method = MahlerMethod::LineReduction;
        return Ok(r);
    }
    mahler_multivariate(f, opts)
}

/// Roots of a univariate polynomial, listed with multiplicity.
pub fn roots(f: &LaurentPoly, seed: u64) -> Result<Vec<Complex64>, MahlerError> {
    if f.dim() != 1 {
        return Err(MahlerError::NotUnivariate(f.dim()));
    }
    if f.is_zero() {
        return Err(MahlerError::Zero);
    }
    let (_, dense) = f.to_dense_univariate()?;
    let mut out = Vec::new();
    for (factor, mult) in square_free(&dense) {
        if factor.len() <= 1 || factor.iter().all(Zero::is_zero) {
            continue;
        }
        let c: Vec<f64> = factor
            .iter()
            .map(|x| x.to_f64().filter(|v| v.is_finite()).ok_or(MahlerError::Overflow))
            .collect::<Result<_, _>>()?;
        let rs = roots::find_roots(&c, seed);
        for r in rs.roots {
            out.extend(std::iter::repeat_n(r, mult as usize));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LEHMER_M: f64 = 1.176_280_818_259_917_5;
    const SIX_TWO_TWO_M: f64 = 1.285_734_864_291_986_3;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn m(s: &str) -> MahlerResult {
        mahler(&p(s), &MahlerOptions::default()).unwrap()
    }

    #[test]
    fn figure_eight_polynomial() {
        // roots (3 +- sqrt 5)/2, so M = (3 + sqrt 5)/2
        let r = m("t^2 - 3t + 1");
        assert!((r.value - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(r.method, MahlerMethod::Roots);
    }

    #[test]
    fn cyclotomic_measure_is_one() {
        let r = m("t^2 - t + 1");
        assert_eq!(r.log_value, 0.0);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.diagnostics.snapped_roots, 2);
        assert_eq!(m("t^12 - 1").value, 1.0);
    }

    #[test]
    fn lehmer() {
        let r = m("t^10 + t^9 - t^7 - t^6 - t^5 - t^4 - t^3 + t + 1");
        assert!((r.value - LEHMER_M).abs() < 1e-12, "{}", r.value);
        assert!(r.error_bound < 1e-10);
    }

    #[test]
    fn simple_values() {
        assert_eq!(m("t - 2").value, 2.0);
        assert_eq!(m("5").value, 5.0);
        assert_eq!(mahler_multivariate(&LaurentPoly::constant(2, 5), &MahlerOptions::default()).unwrap().value, 5.0);
        assert_eq!(m("-3t^-4").value, 3.0);
        assert_eq!(m("t - 1").value, 1.0);
    }

    #[test]
    fn repeated_roots() {
        // (t - 3)^3 (t^2 - t + 1)^2
        let f = &p("t - 3").pow(3) * &p("t^2 - t + 1").pow(2);
        let r = mahler(&f, &MahlerOptions::default()).unwrap();
        assert!((r.value - 27.0).abs() < 1e-11);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(mahler(&LaurentPoly::zero(2), &MahlerOptions::default()), Err(MahlerError::Zero));
        assert_eq!(mahler_univariate(&p("u1 + u2"), &MahlerOptions::default()), Err(MahlerError::NotUnivariate(2)));
    }

    #[test]
    fn line_reduction_matches_univariate() {
        let r = m("u1^2*u2^2 - 3*u1*u2 + 1");
        assert_eq!(r.method, MahlerMethod::LineReduction);
        assert!((r.value - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        let q = mahler_multivariate(&p("u1^2*u2^2 - 3*u1*u2 + 1"), &MahlerOptions { tol: 1e-6, ..Default::default() })
            .unwrap();
        assert!((q.log_value - r.log_value).abs() < q.error_bound + r.error_bound + 1e-6);
        assert_eq!(m("u1 - 1").value, 1.0);
        assert!(line_reduction(&p("u1 + u2 + 1")).is_none());
        assert_eq!(line_reduction(&p("u1^2*u2^-2 + 1")).unwrap(), p("t^2 + 1"));
    }

    #[test]
    fn quadrature_examples() {
        let r = m("2 - u1 - u2 + 2*u1*u2");
        assert_eq!(r.method, MahlerMethod::Quadrature);
        assert!((r.value - 2.0).abs() < 0.01, "{}", r.value);
        let r = m("u1 + u2 - 1 + u1^-1 + u2^-1");
        assert!((r.value - SIX_TWO_TWO_M).abs() < 0.01, "{}", r.value);
        assert!(r.diagnostics.converged);
    }

    #[test]
    fn whitehead_measure_is_one() {
        let r = mahler_multivariate(&p("1 - u1 - u2 + u1*u2"), &MahlerOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 0.02, "{}", r.value);
    }

    #[test]
    fn grid_size_cap() {
        assert_eq!(grid_sizes(1), GRID_SIZES.to_vec());
        assert_eq!(grid_sizes(2), GRID_SIZES.to_vec());
        assert_eq!(grid_sizes(3), vec![64, 128, 256]);
        assert!(grid_sizes(6).len() == 2);
    }

    #[test]
    fn thread_count_does_not_change_quadrature() {
        let f = p("u1 + u2 - 1 + u1^-1 + u2^-1");
        let run = |n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| mahler_multivariate(&f, &MahlerOptions::default()).unwrap())
        };
        assert_eq!(run(1).log_value.to_bits(), run(4).log_value.to_bits());
    }

    fn small_uni() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(-4i64..=4, 2..7)
            .prop_filter("nonconstant", |c| c.iter().skip(1).any(|x| *x != 0) && c[0] != 0)
            .prop_map(|c| LaurentPoly::from_coeffs(&c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn multiplicative(f in small_uni(), g in small_uni()) {
            let o = MahlerOptions::default();
            let a = mahler(&f, &o).unwrap();
            let b = mahler(&g, &o).unwrap();
            let c = mahler(&(&f * &g), &o).unwrap();
            let slack = a.error_bound + b.error_bound + c.error_bound + 1e-9;
            prop_assert!((c.log_value - a.log_value - b.log_value).abs() <= slack);
        }

        #[test]
        fn unit_invariant(f in small_uni(), k in -5i64..5, neg in any::<bool>()) {
            let o = MahlerOptions::default();
            let mut g = f.shift(&[k]);
            if neg { g = -g; }
            prop_assert_eq!(mahler(&f, &o).unwrap().log_value, mahler(&g, &o).unwrap().log_value);
        }

        #[test]
        fn inversion_invariant(f in small_uni()) {
            let o = MahlerOptions::default();
            let inv = f.substitute(&[vec![-1]], 1).unwrap();
            let a = mahler(&f, &o).unwrap();
            let b = mahler(&inv, &o).unwrap();
            prop_assert!((a.log_value - b.log_value).abs() <= a.error_bound + b.error_bound + 1e-9);
        }

        #[test]
        fn kronecker_bound(f in small_uni()) {
            prop_assume!(f.content() == BigInt::from(1) || f.content() == BigInt::from(-1));
            let r = mahler(&f, &MahlerOptions::default()).unwrap();
            prop_assert!(r.log_value >= -r.error_bound);
        }

        #[test]
        fn conjugate_closed(f in small_uni()) {
            let rs = roots(&f, 11).unwrap();
            for r in &rs {
                let c = r.conj();
                prop_assert!(rs.iter().any(|s| (s - c).norm() < 1e-9 * (1.0 + c.norm())), "{}", r);
            }
        }
    }

    #[test]
    fn quadrature_symmetries() {
        let o = MahlerOptions { tol: 1e-4, ..Default::default() };
        let f = p("2 - u1 - u2 + 3*u1*u2^2");
        let a = mahler_multivariate(&f, &o).unwrap();
        let swapped = f.substitute(&[vec![0, 1], vec![1, 0]], 2).unwrap();
        let inverted = f.substitute(&[vec![-1, 0], vec![0, 1]], 2).unwrap();
        for g in [swapped, inverted] {
            let b = mahler_multivariate(&g, &o).unwrap();
            assert!((a.log_value - b.log_value).abs() <= a.error_bound + b.error_bound + 1e-9);
        }
    }
}
