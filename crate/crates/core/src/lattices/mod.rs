//! Finite-index sublattices `L` of `Z^d`, the quotient `G = Z^d / L`, and
//! the exact integer linear algebra behind cover homology.

mod matrix;
mod snf;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use matrix::{IntMatrix, SparseMatrix};
pub use snf::{determinant, int_kernel, snf, snf_sparse, solve, SnfResult};

/// Largest dimension accepted by [`shortest_vector`].
pub const MAX_SVP_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice basis is singular (infinite index)")]
    Singular,
    #[error("bad lattice spec {0:?}: {1}")]
    Parse(String, String),
    #[error("shortest vector enumeration supports d <= 4, got {0}")]
    DimensionTooLarge(usize),
    #[error("group order {0} does not fit in memory")]
    TooLarge(BigInt),
}

/// A sublattice of `Z^d` generated by the columns of `basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    /// `columns[k]` is the `k`-th generator, of length `d`.
    columns: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn from_columns(columns: Vec<Vec<i64>>) -> Result<Lattice, LatticeError> {
        let d = columns.len();
        if d == 0 || columns.iter().any(|c| c.len() != d) {
            return Err(LatticeError::Parse(format!("{columns:?}"), "need d columns of length d".into()));
        }
        let lat = Lattice { columns };
        if lat.index_big().is_zero() {
            return Err(LatticeError::Singular);
        }
        Ok(lat)
    }

    pub fn diag(entries: &[i64]) -> Result<Lattice, LatticeError> {
        let d = entries.len();
        Lattice::from_columns((0..d).map(|k| (0..d).map(|i| if i == k { entries[k] } else { 0 }).collect()).collect())
    }

    pub fn cyclic(r: i64) -> Result<Lattice, LatticeError> {
        Lattice::diag(&[r])
    }

    /// `n Z^d`.
    pub fn scaled(n: i64, d: usize) -> Result<Lattice, LatticeError> {
        Lattice::diag(&vec![n; d])
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    /// Basis as a `d x d` matrix whose columns generate the lattice.
    pub fn basis_matrix(&self) -> IntMatrix {
        let d = self.dim();
        let rows: Vec<Vec<i64>> = (0..d).map(|i| self.columns.iter().map(|c| c[i]).collect()).collect();
        IntMatrix::from_rows(&rows)
    }

    pub fn index_big(&self) -> BigInt {
        determinant(&self.basis_matrix()).abs()
    }

    /// `|Z^d / L|`.
    pub fn index(&self) -> u64 {
        self.index_big().to_u64().expect("index fits in u64")
    }

    pub fn scale(&self, c: i64) -> Result<Lattice, LatticeError> {
        Lattice::from_columns(self.columns.iter().map(|col| col.iter().map(|x| x * c).collect()).collect())
    }
}

impl FromStr for Lattice {
    type Err = LatticeError;

    /// `diag:a,b,...`, `cyclic:r`, `scaled:n,d` or `cols:a,b;c,d` (columns
    /// separated by `;`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| LatticeError::Parse(s.to_string(), msg.to_string());
        let (kind, body) = s.trim().split_once(':').ok_or_else(|| bad("expected KIND:VALUES"))?;
        let ints = |t: &str| -> Result<Vec<i64>, LatticeError> {
            t.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad("not an integer"))).collect()
        };
        match kind.trim() {
            "diag" => Lattice::diag(&ints(body)?),
            "cyclic" => match ints(body)?.as_slice() {
                [r] => Lattice::cyclic(*r),
                _ => Err(bad("cyclic takes one integer")),
            },
            "scaled" => match ints(body)?.as_slice() {
                [n, d] if *d >= 1 => Lattice::scaled(*n, *d as usize),
                _ => Err(bad("scaled takes n,d")),
            },
            "cols" => Lattice::from_columns(body.split(';').map(ints).collect::<Result<_, _>>()?),
            _ => Err(bad("unknown kind; use diag, cyclic, scaled or cols")),
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        let diagonal = (0..d).all(|k| (0..d).all(|i| i == k || self.columns[k][i] == 0));
        let join = |v: &[i64]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        if d == 1 {
            write!(f, "cyclic:{}", self.columns[0][0])
        } else if diagonal {
            let e: Vec<i64> = (0..d).map(|k| self.columns[k][k]).collect();
            write!(f, "diag:{}", join(&e))
        } else {
            let cols: Vec<String> = self.columns.iter().map(|c| join(c)).collect();
            write!(f, "cols:{}", cols.join(";"))
        }
    }
}

/// `G = Z^d / L` in Smith coordinates. Elements are vectors `x` with
/// `0 <= x[k] < factors[k]`, enumerated in mixed-radix order with the first
/// coordinate most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGroup {
    dim: usize,
    /// Invariant factors greater than one, each dividing the next.
    factors: Vec<u64>,
    /// Rows of `U` for the nontrivial factors: `x -> (proj x) mod factors`.
    proj: Vec<Vec<i64>>,
    order: u64,
}

/// Cap on the group order for element enumeration.
pub const MAX_GROUP_ORDER: u64 = 1 << 22;

impl QuotientGroup {
    pub fn new(lat: &Lattice) -> Result<QuotientGroup, LatticeError> {
        let d = lat.dim();
        let s = snf(&lat.basis_matrix(), true);
        if s.rank < d {
            return Err(LatticeError::Singular);
        }
        let order = s.factors.iter().product::<BigInt>();
        if order > BigInt::from(MAX_GROUP_ORDER) {
            return Err(LatticeError::TooLarge(order));
        }
        let (u, _) = s.transforms.expect("transforms requested");
        let mut factors = Vec::new();
        let mut proj = Vec::new();
        for (k, f) in s.factors.iter().enumerate() {
            let f = f.to_u64().expect("bounded by order");
            if f > 1 {
                factors.push(f);
                // reduce U's row mod f so coordinates stay small
                proj.push(u.row(k).iter().map(|x| x.mod_floor(&BigInt::from(f)).to_i64().unwrap()).collect());
            }
        }
        Ok(QuotientGroup { dim: d, factors, proj, order: order.to_u64().unwrap() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical coordinates of the class of `v in Z^d`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim, "vector length");
        self.proj
            .iter()
            .zip(&self.factors)
            .map(|(row, &f)| {
                let s: i128 = row.iter().zip(v).map(|(a, b)| *a as i128 * *b as i128).sum();
                s.rem_euclid(f as i128) as i64
            })
            .collect()
    }

    /// Class of the `t`-th standard basis vector.
    pub fn generator(&self, t: usize) -> Vec<i64> {
        let mut e = vec![0; self.dim];
        e[t] = 1;
        self.reduce(&e)
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter().zip(y).zip(&self.factors).map(|((a, b), &f)| (a + b).rem_euclid(f as i64)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.factors).map(|(a, &f)| (-a).rem_euclid(f as i64)).collect()
    }

    pub fn index_of(&self, x: &[i64]) -> usize {
        x.iter().zip(&self.factors).fold(0usize, |acc, (a, &f)| acc * f as usize + *a as usize)
    }

    pub fn element(&self, mut index: usize) -> Vec<i64> {
        let mut x = vec![0; self.factors.len()];
        for (k, &f) in self.factors.iter().enumerate().rev() {
            x[k] = (index % f as usize) as i64;
            index /= f as usize;
        }
        x
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.order as usize).map(|i| self.element(i))
    }

    /// `translate[g] = index(g + x)` for every element index `g`.
    pub fn translation(&self, x: &[i64]) -> Vec<usize> {
        self.elements().map(|g| self.index_of(&self.add(&g, x))).collect()
    }

    /// Least `n >= 1` with `n x = 0`.
    pub fn element_order(&self, x: &[i64]) -> u64 {
        x.iter().zip(&self.factors).fold(1u64, |acc, (a, &f)| acc.lcm(&(f / f.gcd(&(a.unsigned_abs() % f)))))
    }
}

fn norm_sq(v: &[i64]) -> i128 {
    v.iter().map(|x| *x as i128 * *x as i128).sum()
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

/// Pairwise size reduction until no column shortens.
fn size_reduce(cols: &mut [Vec<i64>]) {
    loop {
        let mut changed = false;
        for i in 0..cols.len() {
            for j in 0..cols.len() {
                if i == j {
                    continue;
                }
                let nj = norm_sq(&cols[j]);
                if nj == 0 {
                    continue;
                }
                let q = (dot(&cols[i], &cols[j]) as f64 / nj as f64).round() as i64;
                if q == 0 {
                    continue;
                }
                let cand: Vec<i64> = cols[i].iter().zip(&cols[j]).map(|(a, b)| a - q * b).collect();
                if norm_sq(&cand) < norm_sq(&cols[i]) {
                    cols[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Squared Euclidean length of a shortest nonzero vector, by enumeration.
pub fn shortest_vector_sq(lat: &Lattice) -> Result<i128, LatticeError> {
    Ok(shortest_vector_with_witness(lat)?.1)
}

/// A shortest nonzero vector and its squared length.
pub fn shortest_vector_with_witness(lat: &Lattice) -> Result<(Vec<i64>, i128), LatticeError> {
    let d = lat.dim();
    if d > MAX_SVP_DIM {
        return Err(LatticeError::DimensionTooLarge(d));
    }
    let mut cols = lat.columns.clone();
    size_reduce(&mut cols);
    let first = cols.iter().min_by_key(|c| norm_sq(c)).expect("d >= 1").clone();
    let best0 = norm_sq(&first);
    // |c_i| <= |row i of B^-1| * |v| for v = B c
    let reduced = Lattice { columns: cols.clone() };
    let b = reduced.basis_matrix();
    let det = determinant(&b).to_f64().unwrap();
    let radius = (best0 as f64).sqrt();
    let bounds: Vec<i64> = (0..d)
        .map(|i| {
            // row i of B^-1 is the i-th row of adj(B) / det
            let row_norm_sq: f64 = (0..d)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = (0..d)
                        .filter(|&r| r != j)
                        .map(|r| (0..d).filter(|&c| c != i).map(|c| b.get(r, c).to_i64().unwrap()).collect())
                        .collect();
                    let m = if minor.is_empty() {
                        1.0
                    } else {
                        determinant(&IntMatrix::from_rows(&minor)).to_f64().unwrap()
                    };
                    m * m
                })
                .sum();
            (radius * row_norm_sq.sqrt() / det.abs() + 1e-9).floor() as i64
        })
        .collect();
    let mut best = (first, best0);
    let mut c: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        if c.iter().any(|x| *x != 0) {
            let v: Vec<i64> = (0..d).map(|i| (0..d).map(|k| c[k] * cols[k][i]).sum()).collect();
            let n = norm_sq(&v);
            if n < best.1 {
                best = (v, n);
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return Ok(best);
            }
            if c[k] < bounds[k] {
                c[k] += 1;
                break;
            }
            c[k] = -bounds[k];
            k += 1;
        }
    }
}

/// Euclidean length of a shortest nonzero vector of `lat`.
pub fn shortest_vector(lat: &Lattice) -> Result<f64, LatticeError> {
    Ok((shortest_vector_sq(lat)? as f64).sqrt())
}
