//! Smith normal form, integer kernels and integer linear solves.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub factors: Vec<BigInt>,
    pub rank: usize,
    /// `(U, V)` with `U * A * V` equal to the diagonal form.
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SnfResult {
    /// Factors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }
}

/// Rounded quotient, so remainders are at most half the divisor.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // r carries the sign of b, so r - b is the other candidate remainder
    let (q, r) = a.div_mod_floor(b);
    if (&r + &r).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

fn axpy_row(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt, from: usize) {
    // rows[dst] -= q * rows[src]
    let (d, s) = if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d[from..].iter_mut().zip(&s[from..]) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn axpy_col(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt, from: usize) {
    for row in rows[from..].iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

fn swap_cols(rows: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in rows.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Dense SNF by least-absolute-value pivoting. `u` (rows x rows) and `v`
/// (cols x cols) accumulate the row and column operations when present.
fn dense_snf(
    mut a: Vec<Vec<BigInt>>,
    cols: usize,
    mut u: Option<&mut Vec<Vec<BigInt>>>,
    mut v: Option<&mut Vec<Vec<BigInt>>>,
) -> Vec<BigInt> {
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.magnitude() < a[bi][bj].magnitude()) {
                    best = Some((i, j));
                    if x.is_one() || (-x).is_one() {
                        break;
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        if let Some(u) = u.as_deref_mut() {
            u.swap(t, pi);
        }
        swap_cols(&mut a, t, pj);
        if let Some(v) = v.as_deref_mut() {
            swap_cols(v, t, pj);
        }
        loop {
            let p = a[t][t].clone();
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = round_div(&a[i][t], &p);
                    axpy_row(&mut a, i, t, &q, t);
                    if let Some(u) = u.as_deref_mut() {
                        axpy_row(u, i, t, &q, 0);
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = round_div(&a[t][j], &p);
                    axpy_col(&mut a, j, t, &q, t);
                    if let Some(v) = v.as_deref_mut() {
                        axpy_col(v, j, t, &q, 0);
                    }
                }
            }
            // a smaller remainder becomes the new pivot
            let col_min = (t + 1..rows)
                .filter(|&i| !a[i][t].is_zero())
                .min_by(|&x, &y| a[x][t].magnitude().cmp(a[y][t].magnitude()));
            let row_min = (t + 1..cols)
                .filter(|&j| !a[t][j].is_zero())
                .min_by(|&x, &y| a[t][x].magnitude().cmp(a[t][y].magnitude()));
            if let Some(i) = col_min {
                a.swap(t, i);
                if let Some(u) = u.as_deref_mut() {
                    u.swap(t, i);
                }
                continue;
            }
            if let Some(j) = row_min {
                swap_cols(&mut a, t, j);
                if let Some(v) = v.as_deref_mut() {
                    swap_cols(v, t, j);
                }
                continue;
            }
            // enforce divisibility of the remaining block
            let bad = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let m1 = -BigInt::one();
                    axpy_row(&mut a, t, i, &m1, t);
                    if let Some(u) = u.as_deref_mut() {
                        axpy_row(u, t, i, &m1, 0);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t][t..].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    diag
}

/// Smith normal form. With `want_transforms` the dense algorithm runs on the
/// whole matrix and records `U`, `V`; otherwise unit pivots are eliminated
/// sparsely first.
pub fn snf(a: &IntMatrix, want_transforms: bool) -> SnfResult {
    let (r, c) = (a.rows(), a.cols());
    if want_transforms {
        let mut u = IntMatrix::identity(r).to_rows();
        let mut v = IntMatrix::identity(c).to_rows();
        let factors = dense_snf(a.to_rows(), c, Some(&mut u), Some(&mut v));
        let rank = factors.len();
        return SnfResult {
            factors,
            rank,
            transforms: Some((IntMatrix::from_big_rows(u, r), IntMatrix::from_big_rows(v, c))),
        };
    }
    let mut sparse = SparseRows::from_dense(a);
    sparse.finish()
}

/// Smith form of a sparse matrix (no transforms).
pub fn snf_sparse(a: &SparseMatrix) -> SnfResult {
    SparseRows::from_sparse(a).finish()
}

struct SparseRows {
    rows: Vec<BTreeMap<usize, BigInt>>,
    /// Row indices with a nonzero in each column.
    col_rows: Vec<BTreeSet<usize>>,
    alive_rows: BTreeSet<usize>,
    alive_cols: BTreeSet<usize>,
    units: usize,
}

impl SparseRows {
    fn empty(r: usize, c: usize) -> Self {
        SparseRows {
            rows: vec![BTreeMap::new(); r],
            col_rows: vec![BTreeSet::new(); c],
            alive_rows: (0..r).collect(),
            alive_cols: (0..c).collect(),
            units: 0,
        }
    }

    fn from_dense(a: &IntMatrix) -> Self {
        let mut s = Self::empty(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let x = a.get(i, j);
                if !x.is_zero() {
                    s.rows[i].insert(j, x.clone());
                    s.col_rows[j].insert(i);
                }
            }
        }
        s
    }

    fn from_sparse(a: &SparseMatrix) -> Self {
        let mut s = Self::empty(a.rows(), a.cols());
        for j in 0..a.cols() {
            for &(i, v) in a.column(j) {
                s.rows[i].insert(j, BigInt::from(v));
                s.col_rows[j].insert(i);
            }
        }
        s
    }

    /// Unit entry with the smallest Markowitz cost; ties broken by position.
    fn pick_unit(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for &i in &self.alive_rows {
            let rlen = self.rows[i].len();
            for (&j, x) in &self.rows[i] {
                if !(x.is_one() || (-x).is_one()) {
                    continue;
                }
                let cost = (rlen - 1) * (self.col_rows[j].len() - 1);
                if best.is_none_or(|b| cost < b.0) {
                    best = Some((cost, i, j));
                    if cost == 0 {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|b| (b.1, b.2))
    }

    fn eliminate(&mut self, p: usize, c: usize) {
        let pivot_row = std::mem::take(&mut self.rows[p]);
        let pv = pivot_row[&c].clone();
        let others: Vec<usize> = self.col_rows[c].iter().copied().filter(|&i| i != p).collect();
        for i in others {
            // pv is +-1, so the multiplier is a_ic * pv
            let q = &self.rows[i][&c] * &pv;
            for (&j, y) in &pivot_row {
                let entry = self.rows[i].entry(j).or_insert_with(BigInt::zero);
                *entry -= &q * y;
                if entry.is_zero() {
                    self.rows[i].remove(&j);
                    self.col_rows[j].remove(&i);
                } else {
                    self.col_rows[j].insert(i);
                }
            }
        }
        for &j in pivot_row.keys() {
            self.col_rows[j].remove(&p);
        }
        self.alive_rows.remove(&p);
        self.alive_cols.remove(&c);
        self.units += 1;
    }

    fn finish(&mut self) -> SnfResult {
        while let Some((p, c)) = self.pick_unit() {
            self.eliminate(p, c);
        }
        let rows: Vec<usize> = self.alive_rows.iter().copied().filter(|&i| !self.rows[i].is_empty()).collect();
        let cols: Vec<usize> = self.alive_cols.iter().copied().filter(|&j| !self.col_rows[j].is_empty()).collect();
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let dense: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|&i| {
                let mut row = vec![BigInt::zero(); cols.len()];
                for (j, x) in &self.rows[i] {
                    row[col_pos[j]] = x.clone();
                }
                row
            })
            .collect();
        let core = dense_snf(dense, cols.len(), None, None);
        let mut factors = vec![BigInt::one(); self.units];
        factors.extend(core);
        let rank = factors.len();
        SnfResult { factors, rank, transforms: None }
    }
}

/// Integer row reduction of `a` to echelon form in its first `pivot_cols`
/// columns. Returns the pivot column of each leading row.
fn echelon(a: &mut [Vec<BigInt>], pivot_cols: usize) -> Vec<usize> {
    let n = a.len();
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for j in 0..pivot_cols {
        if r0 == n {
            break;
        }
        loop {
            let best =
                (r0..n).filter(|&i| !a[i][j].is_zero()).min_by(|&x, &y| a[x][j].magnitude().cmp(a[y][j].magnitude()));
            let Some(b) = best else { break };
            a.swap(r0, b);
            let p = a[r0][j].clone();
            let mut clean = true;
            for i in r0 + 1..n {
                if !a[i][j].is_zero() {
                    let q = round_div(&a[i][j], &p);
                    axpy_row(a, i, r0, &q, j);
                    clean &= a[i][j].is_zero();
                }
            }
            if clean {
                pivots.push(j);
                r0 += 1;
                break;
            }
        }
    }
    pivots
}

/// Columns form a Z-basis of `{x : a x = 0}`.
pub fn int_kernel(a: &IntMatrix) -> IntMatrix {
    let (r, c) = (a.rows(), a.cols());
    let mut aug: Vec<Vec<BigInt>> = (0..c)
        .map(|j| {
            let mut row: Vec<BigInt> = a.column(j);
            row.extend((0..c).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rank = echelon(&mut aug, r).len();
    let basis: Vec<Vec<BigInt>> = aug[rank..].iter().map(|row| row[r..].to_vec()).collect();
    IntMatrix::from_big_rows(basis, c).transpose()
}

/// Solves `k x = b` over the integers for `k` of full column rank.
/// `None` when no integer solution exists.
pub fn solve(k: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(k.rows(), b.rows(), "solve: row count mismatch");
    let (n, m, p) = (k.rows(), k.cols(), b.cols());
    let mut aug: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = k.row(i).to_vec();
            row.extend_from_slice(b.row(i));
            row
        })
        .collect();
    let pivots = echelon(&mut aug, m);
    assert_eq!(pivots.len(), m, "solve needs a matrix of full column rank");
    if aug[m..].iter().any(|row| row[m..].iter().any(|x| !x.is_zero())) {
        return None;
    }
    let mut x = vec![vec![BigInt::zero(); p]; m];
    for i in (0..m).rev() {
        for col in 0..p {
            let mut acc = aug[i][m + col].clone();
            for j in i + 1..m {
                if !aug[i][j].is_zero() {
                    acc -= &aug[i][j] * &x[j][col];
                }
            }
            let (q, r) = acc.div_rem(&aug[i][i]);
            if !r.is_zero() {
                return None;
            }
            x[i][col] = q;
        }
    }
    Some(IntMatrix::from_big_rows(x, p))
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    assert_eq!(n, a.cols(), "determinant needs a square matrix");
    let mut m = a.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &m[n - 1][n - 1]
    }
}
