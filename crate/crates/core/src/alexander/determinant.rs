//! Determinants over `Z[u^±1]`.

use crate::laurent::{LaurentError, LaurentPoly};

/// Fraction-free (Bareiss) elimination. Pivots are chosen with the fewest
/// terms in the current column; every division is exact.
pub fn determinant(m: &[Vec<LaurentPoly>], dim: usize) -> Result<LaurentPoly, LaurentError> {
    let n = m.len();
    if n == 0 {
        return Ok(LaurentPoly::one(dim));
    }
    for row in m {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
    }
    if n <= 3 {
        return Ok(determinant_cofactor(m, dim));
    }
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = LaurentPoly::one(dim);
    for k in 0..n {
        let pivot = (k..n).filter(|&r| !a[r][k].is_zero()).min_by_key(|&r| a[r][k].num_terms());
        let Some(p) = pivot else {
            return Ok(LaurentPoly::zero(dim));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = if prev.is_one() { num } else { num.exact_div(&prev)? };
            }
            a[i][k] = LaurentPoly::zero(dim);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Laplace expansion along the first row. Exponential; used for small
/// matrices and as a test oracle.
pub fn determinant_cofactor(m: &[Vec<LaurentPoly>], dim: usize) -> LaurentPoly {
    let n = m.len();
    match n {
        0 => LaurentPoly::one(dim),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = LaurentPoly::zero(dim);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<LaurentPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let term = &m[0][j] * &determinant_cofactor(&minor, dim);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}
