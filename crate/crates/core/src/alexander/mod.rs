//! Fox calculus on Wirtinger presentations.
//!
//! Row `r` of the Alexander matrix comes from relator
//! `x_i x_j1 x_i^-1 x_j2^-1` and holds `1 - u_t'` in column `i`, `u_t` in
//! column `j1` and `-1` in column `j2` (summed when indices coincide).
//!
//! Convention for the polynomial: for knots `Δ` is the determinant of the
//! matrix with one row and one column deleted. For links with `d >= 2`
//! components that determinant equals `(u_c - 1) Δ` where `c` is the
//! component of the deleted column, and `Δ` is the exact quotient.

mod determinant;

use thiserror::Error;

use crate::laurent::{uni_gcd, LaurentError, LaurentPoly};
use crate::linkio::WirtingerPresentation;

pub use determinant::{determinant, determinant_cofactor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlexanderError {
    #[error("presentation has a single generator; the based matrix is empty")]
    SingleGenerator,
    #[error("row {row} / column {col} out of range")]
    IndexOutOfRange { row: usize, col: usize },
    #[error("presentation has more relators ({relators}) than generators ({generators})")]
    TooManyRelators { relators: usize, generators: usize },
    #[error("no deleted column gives a determinant divisible by (u_c - 1); try another row/column choice")]
    Convention,
    #[error("higher Alexander polynomials are only implemented for knots (got {0} components)")]
    NotAKnot(usize),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderMatrix {
    pub dim: usize,
    pub generator_component: Vec<usize>,
    /// One row per relator, one column per generator.
    pub rows: Vec<Vec<LaurentPoly>>,
}

impl AlexanderMatrix {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.generator_component.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedMatrix {
    pub entries: Vec<Vec<LaurentPoly>>,
    pub deleted_row: usize,
    pub deleted_col: usize,
}

pub fn fox_matrix(pres: &WirtingerPresentation) -> AlexanderMatrix {
    let d = pres.num_components;
    let n = pres.num_generators();
    let one = LaurentPoly::one(d);
    let rows = pres
        .relators
        .iter()
        .map(|r| {
            let mut row = vec![LaurentPoly::zero(d); n];
            let u_t = LaurentPoly::var(d, r.over_component);
            let u_tp = LaurentPoly::var(d, r.under_component);
            row[r.over] = &row[r.over] + &(&one - &u_tp);
            row[r.conjugated] = &row[r.conjugated] + &u_t;
            row[r.image] = &row[r.image] - &one;
            row
        })
        .collect();
    AlexanderMatrix { dim: d, generator_component: pres.generator_component.clone(), rows }
}

/// Deletes row `i0` and column `j0` (0-based).
pub fn based_matrix(m: &AlexanderMatrix, i0: usize, j0: usize) -> Result<BasedMatrix, AlexanderError> {
    if m.num_cols() <= 1 {
        return Err(AlexanderError::SingleGenerator);
    }
    if i0 >= m.num_rows() || j0 >= m.num_cols() {
        return Err(AlexanderError::IndexOutOfRange { row: i0, col: j0 });
    }
    let entries = m
        .rows
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != i0)
        .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != j0).map(|(_, e)| e.clone()).collect())
        .collect();
    Ok(BasedMatrix { entries, deleted_row: i0, deleted_col: j0 })
}

/// Square submatrix used for the polynomial: drops column `j0` and, when the
/// matrix has as many rows as columns, row `i0`.
fn square_minor(m: &AlexanderMatrix, i0: usize, j0: usize) -> Result<Option<Vec<Vec<LaurentPoly>>>, AlexanderError> {
    let (r, n) = (m.num_rows(), m.num_cols());
    if r > n {
        return Err(AlexanderError::TooManyRelators { relators: r, generators: n });
    }
    if r + 1 < n {
        // deficiency at least two: every maximal minor vanishes
        return Ok(None);
    }
    let skip_row = if r == n { Some(i0) } else { None };
    Ok(Some(
        m.rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != skip_row)
            .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != j0).map(|(_, e)| e.clone()).collect())
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderReport {
    pub delta: LaurentPoly,
    /// Determinant of the based matrix before any division.
    pub det_r: LaurentPoly,
    pub deleted_row: usize,
    pub deleted_col: usize,
    /// Component `c` whose `(u_c - 1)` was divided out (links only).
    pub divided_component: Option<usize>,
}

impl AlexanderReport {
    pub fn convention_note(&self) -> String {
        match self.divided_component {
            None => "delta = det of the matrix with one row and one column deleted".to_string(),
            Some(c) => format!(
                "delta = det(R) / (u{} - 1), R = matrix with row {} and column {} deleted",
                c + 1,
                self.deleted_row + 1,
                self.deleted_col + 1
            ),
        }
    }
}

pub fn alexander_report(pres: &WirtingerPresentation) -> Result<AlexanderReport, AlexanderError> {
    let d = pres.num_components;
    let m = fox_matrix(pres);
    if m.num_cols() <= 1 {
        let one = LaurentPoly::one(d);
        return Ok(AlexanderReport {
            delta: one.clone(),
            det_r: one,
            deleted_row: 0,
            deleted_col: 0,
            divided_component: None,
        });
    }
    let i0 = 0;
    for j0 in 0..m.num_cols() {
        let Some(minor) = square_minor(&m, i0, j0)? else {
            let zero = LaurentPoly::zero(d);
            return Ok(AlexanderReport {
                delta: zero.clone(),
                det_r: zero,
                deleted_row: i0,
                deleted_col: j0,
                divided_component: None,
            });
        };
        let det = determinant(&minor, d)?;
        if d == 1 || det.is_zero() {
            return Ok(AlexanderReport {
                delta: det.normalize(),
                det_r: det,
                deleted_row: i0,
                deleted_col: j0,
                divided_component: (d > 1).then(|| m.generator_component[j0]),
            });
        }
        let c = m.generator_component[j0];
        let factor = &LaurentPoly::var(d, c) - &LaurentPoly::one(d);
        match det.exact_div(&factor) {
            Ok(q) => {
                return Ok(AlexanderReport {
                    delta: q.normalize(),
                    det_r: det,
                    deleted_row: i0,
                    deleted_col: j0,
                    divided_component: Some(c),
                })
            }
            Err(LaurentError::NotExact) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(AlexanderError::Convention)
}

/// The (first) Alexander polynomial, normalized.
pub fn alexander_polynomial(pres: &WirtingerPresentation) -> Result<LaurentPoly, AlexanderError> {
    Ok(alexander_report(pres)?.delta)
}

/// `Δ_i` for a knot: gcd of the `(N - i)`-minors of the based matrix.
pub fn higher_alexander_univariate(pres: &WirtingerPresentation, i: usize) -> Result<LaurentPoly, AlexanderError> {
    assert!(i >= 1, "Alexander polynomials are indexed from 1");
    if pres.num_components != 1 {
        return Err(AlexanderError::NotAKnot(pres.num_components));
    }
    let m = fox_matrix(pres);
    let n = m.num_cols();
    if n <= 1 || i >= n {
        return Ok(LaurentPoly::one(1));
    }
    if m.num_rows() < n {
        // fewer relators than generators happens only for split pieces;
        // fall back to the first polynomial for i = 1
        return if i == 1 { alexander_polynomial(pres) } else { Ok(LaurentPoly::one(1)) };
    }
    let based = based_matrix(&m, 0, 0)?;
    let size = n - 1;
    let k = size + 1 - i;
    let mut g = LaurentPoly::zero(1);
    for rows in combinations(size, k) {
        for cols in combinations(size, k) {
            let sub: Vec<Vec<LaurentPoly>> =
                rows.iter().map(|&r| cols.iter().map(|&c| based.entries[r][c].clone()).collect()).collect();
            let det = determinant(&sub, 1)?;
            g = uni_gcd(&g, &det)?;
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g.normalize())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
