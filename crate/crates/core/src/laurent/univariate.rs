//! Dense univariate helpers over `Z[t]`: primitive-PRS gcd and square-free
//! decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LaurentError, LaurentPoly};

/// Ascending coefficient vector with no trailing zeros. Empty means zero.
pub(crate) type Dense = Vec<BigInt>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(p: &[BigInt]) -> Dense {
    let c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    let mut out: Dense = p.iter().map(|x| x / &c).collect();
    if out.last().is_some_and(|l| l.is_negative()) {
        out.iter_mut().for_each(|x| *x = -&*x);
    }
    out
}

/// Pseudo-remainder of `a` by `b` (deg b >= 0).
fn prem(a: &[BigInt], b: &[BigInt]) -> Dense {
    let mut r: Dense = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] -= &lr * bk;
        }
        r = trim(r);
    }
    r
}

/// gcd in `Z[t]`, content included, leading coefficient positive.
pub(crate) fn dense_gcd(a: &[BigInt], b: &[BigInt]) -> Dense {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    if a.is_empty() {
        return normalize_sign(b);
    }
    if b.is_empty() {
        return normalize_sign(a);
    }
    let c = content(&a).gcd(&content(&b));
    let (mut x, mut y) = (primitive(&a), primitive(&b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = prem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    let mut g = primitive(&x);
    for v in g.iter_mut() {
        *v *= &c;
    }
    g
}

fn normalize_sign(mut p: Dense) -> Dense {
    if p.last().is_some_and(|l| l.is_negative()) {
        p.iter_mut().for_each(|x| *x = -&*x);
    }
    p
}

/// Exact division in `Z[t]`; `None` if it does not divide.
pub(crate) fn dense_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Dense> {
    let b = trim(b.to_vec());
    if b.is_empty() {
        return None;
    }
    let mut r = trim(a.to_vec());
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let (qc, rem) = r[dr].div_rem(&b[db]);
        if !rem.is_zero() {
            return None;
        }
        let shift = dr - db;
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] -= &qc * bk;
        }
        q[shift] = qc;
        r = trim(r);
    }
    r.is_empty().then(|| trim(q))
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Dense {
    let mut v = vec![BigInt::zero(); a.len().max(b.len())];
    for (k, x) in a.iter().enumerate() {
        v[k] += x;
    }
    for (k, y) in b.iter().enumerate() {
        v[k] -= y;
    }
    trim(v)
}

fn derivative(p: &[BigInt]) -> Dense {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
}

/// Yun square-free factorization of a primitive-or-not polynomial with
/// nonzero constant term: returns `(factor, multiplicity)` pairs whose
/// product (with multiplicities) equals `p` up to sign and integer content
/// being carried by the first returned factor.
pub(crate) fn square_free(p: &[BigInt]) -> Vec<(Dense, u32)> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return vec![(p, 1)];
    }
    let cont = content(&p);
    let prim = primitive(&p);
    let mut out: Vec<(Dense, u32)> = Vec::new();
    let dp = derivative(&prim);
    let a0 = dense_gcd(&prim, &dp);
    let mut b = dense_div_exact(&prim, &a0).expect("gcd divides");
    let mut c = dense_div_exact(&dp, &a0).expect("gcd divides derivative");
    let mut i = 1u32;
    while b.len() > 1 {
        let d = sub(&c, &derivative(&b));
        let a = dense_gcd(&b, &d);
        if a.len() > 1 {
            out.push((a.clone(), i));
        }
        b = dense_div_exact(&b, &a).expect("gcd divides");
        c = dense_div_exact(&d, &a).expect("gcd divides");
        i += 1;
    }
    if !cont.is_one() {
        out.insert(0, (vec![cont], 1));
    }
    out
}

/// gcd of two univariate Laurent polynomials, normalized.
pub fn uni_gcd(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
    if f.dim() != 1 {
        return Err(LaurentError::NotUnivariate(f.dim()));
    }
    if g.dim() != 1 {
        return Err(LaurentError::NotUnivariate(g.dim()));
    }
    let (_, a) = f.to_dense_univariate()?;
    let (_, b) = g.to_dense_univariate()?;
    let gcd = dense_gcd(&a, &b);
    Ok(LaurentPoly::from_coeffs(&gcd).normalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn dense(v: &[i64]) -> Dense {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(uni_gcd(&p("t^2 - 1"), &p("t^3 - 1")).unwrap(), p("t - 1").normalize());
        let f = p("t^2 - 3t + 1");
        assert_eq!(uni_gcd(&f, &LaurentPoly::zero(1)).unwrap(), f.normalize());
        // Euclid with content: gcd(2t^2 - 2, 4t - 4) = 2(t - 1)
        assert_eq!(uni_gcd(&p("2t^2 - 2"), &p("4t - 4")).unwrap(), p("2t - 2").normalize());
        assert_eq!(uni_gcd(&p("t^-3 + t^-2"), &p("t + 1")).unwrap(), p("t + 1"));
    }

    #[test]
    fn gcd_rejects_multivariate() {
        assert_eq!(uni_gcd(&p("u1 + u2"), &p("u1 + u2")), Err(LaurentError::NotUnivariate(2)));
    }

    #[test]
    fn exact_dense_division() {
        assert_eq!(dense_div_exact(&dense(&[-1, 0, 1]), &dense(&[-1, 1])), Some(dense(&[1, 1])));
        assert_eq!(dense_div_exact(&dense(&[1, 0, 1]), &dense(&[-1, 1])), None);
    }

    #[test]
    fn square_free_splits_repeated_factors() {
        // (t - 1)^2 (t^2 - 3t + 1)
        let f = &p("t - 1").pow(2) * &p("t^2 - 3t + 1");
        let (_, d) = f.to_dense_univariate().unwrap();
        let parts = square_free(&d);
        let mut rebuilt = LaurentPoly::one(1);
        for (q, m) in &parts {
            rebuilt = &rebuilt * &LaurentPoly::from_coeffs(q).pow(*m);
        }
        assert_eq!(rebuilt.normalize(), f.normalize());
        assert!(parts.iter().any(|(q, m)| *m == 2 && q.len() == 2));
    }

    #[test]
    fn square_free_keeps_content() {
        let f = p("6t^2 - 6");
        let (_, d) = f.to_dense_univariate().unwrap();
        let parts = square_free(&d);
        let mut rebuilt = LaurentPoly::one(1);
        for (q, m) in &parts {
            rebuilt = &rebuilt * &LaurentPoly::from_coeffs(q).pow(*m);
        }
        assert_eq!(rebuilt.normalize(), f.normalize());
    }
}
