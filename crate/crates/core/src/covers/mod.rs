//! Homology of the branched covers `M_L` attached to a finite quotient
//! `G = Z^d / L` of the link group's abelianization.
//!
//! The 2-complex `Q` has one vertex per element of `G`, one edge `(i, g)`
//! per arc and element running from `g` to `g + e_t(i)`, one 2-cell per
//! relator and element, and one branch 2-cell per coset of `<e_t(i)>` for
//! each arc. `C1` is ordered arc-major: edge `(i, g)` has index `i m + g`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattices::{
    int_kernel, shortest_vector, snf, snf_sparse, solve, Lattice, LatticeError, QuotientGroup, SparseMatrix,
    MAX_SVP_DIM,
};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::linkio::WirtingerPresentation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("lattice has dimension {lattice} but the link has {components} components")]
    DimensionMismatch { lattice: usize, components: usize },
    #[error("integer solve failed: kernel of d1 does not contain im d2")]
    Inconsistent,
    #[error("negative first Betti number ({0}); the complex is malformed")]
    NegativeBetti(i64),
    #[error("operation needs a knot (got {0} components)")]
    NotAKnot(usize),
    #[error("product {0:e} is too large to round reliably in double precision")]
    Precision(f64),
    #[error("product is not close to an integer: {0}")]
    Rounding(f64),
    #[error("the zero polynomial has no resultant")]
    ZeroPolynomial,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HomologyMethod {
    Direct,
    Relative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomologySummary {
    pub betti: usize,
    /// Torsion invariant factors, each at least 2, each dividing the next.
    #[serde(serialize_with = "crate::serde_big::vec")]
    pub invariant_factors: Vec<BigInt>,
    #[serde(serialize_with = "crate::serde_big::one")]
    pub torsion_order: BigInt,
    pub method: HomologyMethod,
    pub lattice: String,
    pub index: u64,
    /// Length of a shortest nonzero lattice vector (`None` for `d > 4`).
    pub shortest_vector: Option<f64>,
    /// Rank of `coker d2` (relative path only).
    pub sfix_dim: Option<usize>,
}

impl HomologySummary {
    /// Same group: Betti number and invariant factors agree.
    pub fn same_group(&self, other: &HomologySummary) -> bool {
        self.betti == other.betti && self.invariant_factors == other.invariant_factors
    }
}

#[derive(Debug, Clone)]
pub struct ChainComplexQ {
    pub group: QuotientGroup,
    pub lattice: Lattice,
    pub num_arcs: usize,
    pub arc_component: Vec<usize>,
    /// Order `n(i)` of `e_t(i)` in `G`, per arc.
    pub arc_order: Vec<u64>,
    /// `m x N m`.
    pub d1: SparseMatrix,
    /// `N m x (R m + branch columns)`; Wirtinger columns come first.
    pub d2: SparseMatrix,
    pub num_wirtinger_cols: usize,
    pub num_branch_cols: usize,
}

impl ChainComplexQ {
    pub fn order(&self) -> usize {
        self.group.order() as usize
    }

    pub fn c1_index(&self, arc: usize, g: usize) -> usize {
        arc * self.order() + g
    }

    pub fn c1_label(&self, index: usize) -> String {
        let m = self.order();
        format!("x{}@{:?}", index / m + 1, self.group.element(index % m))
    }

    pub fn c0_label(&self, g: usize) -> String {
        format!("{:?}", self.group.element(g))
    }
}

fn check_dims(pres: &WirtingerPresentation, lam: &Lattice) -> Result<(), CoverError> {
    if lam.dim() != pres.num_components {
        return Err(CoverError::DimensionMismatch { lattice: lam.dim(), components: pres.num_components });
    }
    Ok(())
}

/// Translation tables `shift[t][g] = index(g + e_t)`.
fn shifts(group: &QuotientGroup) -> Vec<Vec<usize>> {
    (0..group.dim()).map(|t| group.translation(&group.generator(t))).collect()
}

pub fn build_complex(pres: &WirtingerPresentation, lam: &Lattice) -> Result<ChainComplexQ, CoverError> {
    check_dims(pres, lam)?;
    let group = QuotientGroup::new(lam)?;
    let m = group.order() as usize;
    let n = pres.num_generators();
    let shift = shifts(&group);
    let comp = &pres.generator_component;
    let arc_order: Vec<u64> = comp.iter().map(|&t| group.element_order(&group.generator(t))).collect();
    let e = |arc: usize, g: usize| arc * m + g;

    let mut d1 = SparseMatrix::new(m);
    for arc in 0..n {
        for g in 0..m {
            d1.push_column(vec![(g, -1), (shift[comp[arc]][g], 1)]);
        }
    }

    let mut d2 = SparseMatrix::new(n * m);
    for r in &pres.relators {
        let (t, tp) = (r.over_component, r.under_component);
        for g in 0..m {
            d2.push_column(vec![
                (e(r.over, g), 1),
                (e(r.conjugated, shift[t][g]), 1),
                (e(r.over, shift[tp][g]), -1),
                (e(r.image, g), -1),
            ]);
        }
    }
    let num_wirtinger_cols = d2.cols();
    for arc in 0..n {
        let step = &shift[comp[arc]];
        let mut seen = vec![false; m];
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut col = Vec::new();
            let mut g = start;
            while !seen[g] {
                seen[g] = true;
                col.push((e(arc, g), 1));
                g = step[g];
            }
            d2.push_column(col);
        }
    }
    let num_branch_cols = d2.cols() - num_wirtinger_cols;
    Ok(ChainComplexQ {
        group,
        lattice: lam.clone(),
        num_arcs: n,
        arc_component: comp.clone(),
        arc_order,
        d1,
        d2,
        num_wirtinger_cols,
        num_branch_cols,
    })
}

fn summary(
    q: &ChainComplexQ,
    betti: usize,
    factors: Vec<BigInt>,
    method: HomologyMethod,
    sfix_dim: Option<usize>,
) -> HomologySummary {
    let torsion_order = factors.iter().product::<BigInt>();
    let shortest = (q.lattice.dim() <= MAX_SVP_DIM).then(|| shortest_vector(&q.lattice).ok()).flatten();
    HomologySummary {
        betti,
        invariant_factors: factors,
        torsion_order,
        method,
        lattice: q.lattice.to_string(),
        index: q.group.order(),
        shortest_vector: shortest,
        sfix_dim,
    }
}

/// `H1 = ker d1 / im d2`, by solving `K X = d2` for a kernel basis `K`.
pub fn homology_direct(q: &ChainComplexQ) -> Result<HomologySummary, CoverError> {
    let k = int_kernel(&q.d1.to_dense());
    let d2 = q.d2.to_dense();
    let (betti, factors) = if k.cols() == 0 {
        (0, Vec::new())
    } else {
        let x = solve(&k, &d2).ok_or(CoverError::Inconsistent)?;
        let s = snf(&x, false);
        (k.cols() - s.rank, s.torsion())
    };
    Ok(summary(q, betti, factors, HomologyMethod::Direct, None))
}

/// Torsion from `coker d2` on `C1`; Betti number from its rank minus
/// `m - 1`.
pub fn homology_relative_complex(q: &ChainComplexQ) -> Result<HomologySummary, CoverError> {
    let s = snf_sparse(&q.d2);
    let rho = q.d2.rows() - s.rank;
    let betti = rho as i64 - q.order() as i64 + 1;
    if betti < 0 {
        return Err(CoverError::NegativeBetti(betti));
    }
    Ok(summary(q, betti as usize, s.torsion(), HomologyMethod::Relative, Some(rho)))
}

pub fn homology_relative(pres: &WirtingerPresentation, lam: &Lattice) -> Result<HomologySummary, CoverError> {
    homology_relative_complex(&build_complex(pres, lam)?)
}

pub fn homology(
    pres: &WirtingerPresentation,
    lam: &Lattice,
    method: HomologyMethod,
) -> Result<HomologySummary, CoverError> {
    let q = build_complex(pres, lam)?;
    match method {
        HomologyMethod::Direct => homology_direct(&q),
        HomologyMethod::Relative => homology_relative_complex(&q),
    }
}

/// Modulus below which `Δ(ζ)` counts as a zero.
pub const ZERO_FACTOR: f64 = 1e-9;
/// Products beyond this are not rounded (double precision runs out).
pub const MAX_EXACT_PRODUCT: f64 = (1u64 << 50) as f64;

/// `sum_j log |Δ(ζ_r^j)|` over the nonzero factors, and the number of
/// factors with `|Δ(ζ_r^j)| < 1e-9`.
pub fn knot_resultant_log(delta: &LaurentPoly, r: u64) -> Result<(f64, usize), CoverError> {
    if delta.dim() != 1 {
        return Err(CoverError::NotAKnot(delta.dim()));
    }
    if delta.is_zero() {
        return Err(CoverError::ZeroPolynomial);
    }
    let mut log = 0.0;
    let mut zeros = 0;
    for j in 0..r {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / r as f64);
        let v = delta.eval(&[z])?.norm();
        if v < ZERO_FACTOR {
            zeros += 1;
        } else {
            log += v.ln();
        }
    }
    Ok((log, zeros))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultantOracle {
    pub torsion_order: BigInt,
    pub zero_factor_count: usize,
    pub log_abs: f64,
}

/// `|prod_j Δ(ζ_r^j)|` over the nonzero factors, rounded to an integer.
pub fn knot_resultant_oracle(delta: &LaurentPoly, r: u64) -> Result<ResultantOracle, CoverError> {
    let (log_abs, zero_factor_count) = knot_resultant_log(delta, r)?;
    let p = log_abs.exp();
    if p > MAX_EXACT_PRODUCT {
        return Err(CoverError::Precision(p));
    }
    let rounded = p.round();
    if (p - rounded).abs() >= 1e-6 * p.max(1.0) {
        return Err(CoverError::Rounding(p));
    }
    Ok(ResultantOracle { torsion_order: BigInt::from(rounded as u64), zero_factor_count, log_abs })
}

/// Number of free coordinates added by the extra generators: one per
/// `<e_t(i)>`-coset for every generator but the first.
pub fn sigma_prime_rank(pres: &WirtingerPresentation, lam: &Lattice) -> Result<u64, CoverError> {
    check_dims(pres, lam)?;
    let g = QuotientGroup::new(lam)?;
    Ok(pres.generator_component.iter().skip(1).map(|&t| g.order() / g.element_order(&g.generator(t))).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CokernelShape {
    pub rank: usize,
    #[serde(serialize_with = "crate::serde_big::vec")]
    pub torsion: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchEquivalence {
    pub with_branch: CokernelShape,
    pub without_branch: CokernelShape,
    pub agree: bool,
}

/// Compares `coker` of the based relative matrix (rows of the first arc
/// removed) with and without the branch columns.
pub fn based_branch_equivalence(pres: &WirtingerPresentation, lam: &Lattice) -> Result<BranchEquivalence, CoverError> {
    if pres.num_components != 1 {
        return Err(CoverError::NotAKnot(pres.num_components));
    }
    let q = build_complex(pres, lam)?;
    let m = q.order();
    let rows = q.d2.rows() - m;
    let based = |include_branch: bool| {
        let mut s = SparseMatrix::new(rows);
        let last = if include_branch { q.d2.cols() } else { q.num_wirtinger_cols };
        for j in 0..last {
            s.push_column(q.d2.column(j).iter().filter(|e| e.0 >= m).map(|&(i, v)| (i - m, v)).collect());
        }
        let r = snf_sparse(&s);
        CokernelShape { rank: rows - r.rank, torsion: r.torsion() }
    };
    let with_branch = based(true);
    let without_branch = based(false);
    let agree = with_branch == without_branch;
    Ok(BranchEquivalence { with_branch, without_branch, agree })
}

/// `true` if `d1 d2 = 0`.
pub fn boundary_squares_to_zero(q: &ChainComplexQ) -> bool {
    q.d1.mul(&q.d2).is_zero()
}

/// The expected number of branch columns, `sum_i m / n(i)`.
pub fn expected_branch_columns(q: &ChainComplexQ) -> u64 {
    q.arc_order.iter().map(|n| q.group.order() / n).sum()
}

/// Torsion order as the product of invariant factors, 1 when empty.
pub fn torsion_of(factors: &[BigInt]) -> BigInt {
    factors.iter().fold(BigInt::one(), |a, b| a * b)
}

/// Helper for tests and the CLI: is `x` trivial.
pub fn is_trivial(s: &HomologySummary) -> bool {
    s.betti == 0 && s.invariant_factors.is_empty() && !s.torsion_order.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexander::alexander_polynomial;
    use crate::linkio::{builtin_link, wirtinger};

    fn pres(name: &str) -> WirtingerPresentation {
        wirtinger(&builtin_link(name).unwrap()).unwrap()
    }

    fn lat(s: &str) -> Lattice {
        s.parse().unwrap()
    }

    fn both(name: &str, l: &str) -> (HomologySummary, HomologySummary) {
        let q = build_complex(&pres(name), &lat(l)).unwrap();
        (homology_direct(&q).unwrap(), homology_relative_complex(&q).unwrap())
    }

    #[test]
    fn unknot_structure() {
        let q = build_complex(&pres("unknot"), &lat("cyclic:5")).unwrap();
        assert_eq!(q.d1.rows(), 5);
        assert_eq!(q.d1.cols(), 5);
        for g in 0..5 {
            let mut want = [(g, -1), ((g + 1) % 5, 1)];
            want.sort();
            assert_eq!(q.d1.column(g), &want[..]);
        }
        assert_eq!(q.num_branch_cols, 1);
        assert_eq!(q.d2.column(0).len(), 5);
        let (a, b) = both("unknot", "cyclic:5");
        assert!(is_trivial(&a) && is_trivial(&b));
    }

    #[test]
    fn whitehead_counts() {
        let p = pres("5_1^2");
        let q = build_complex(&p, &lat("diag:3,2")).unwrap();
        assert_eq!(q.d2.rows(), 30);
        assert_eq!(q.num_wirtinger_cols, 30);
        assert_eq!(q.num_branch_cols, 13);
        assert_eq!(expected_branch_columns(&q), 13);
        assert!(boundary_squares_to_zero(&q));
        assert_eq!(sigma_prime_rank(&p, &lat("diag:3,2")).unwrap(), 11);
        let rel = homology_relative_complex(&q).unwrap();
        assert_eq!(rel.sfix_dim.unwrap() - rel.betti, 5);
        assert!(homology_direct(&q).unwrap().same_group(&rel));
    }

    #[test]
    fn small_knot_covers() {
        let (a, b) = both("trefoil", "cyclic:2");
        assert_eq!(a.torsion_order, BigInt::from(3));
        assert_eq!(a.betti, 0);
        assert!(a.same_group(&b));
        let (a, _) = both("figure8", "cyclic:3");
        assert_eq!(a.torsion_order, BigInt::from(16));
        assert_eq!(a.betti, 0);
        let (a, b) = both("trefoil", "cyclic:6");
        assert_eq!(a.betti, 2);
        assert!(a.same_group(&b));
    }

    #[test]
    fn figure8_never_has_betti() {
        for r in 1..=12 {
            let (a, b) = both("figure8", &format!("cyclic:{r}"));
            assert_eq!(a.betti, 0, "r = {r}");
            assert!(a.same_group(&b));
        }
    }

    #[test]
    fn resultant_oracle_examples() {
        let tre = alexander_polynomial(&pres("trefoil")).unwrap();
        let o = knot_resultant_oracle(&tre, 2).unwrap();
        assert_eq!((o.torsion_order, o.zero_factor_count), (BigInt::from(3), 0));
        assert_eq!(knot_resultant_oracle(&tre, 6).unwrap().zero_factor_count, 2);
        let fig = alexander_polynomial(&pres("figure8")).unwrap();
        let o = knot_resultant_oracle(&fig, 5).unwrap();
        assert_eq!((o.torsion_order, o.zero_factor_count), (BigInt::from(121), 0));
        assert!(matches!(knot_resultant_oracle(&fig, 200), Err(CoverError::Precision(_))));
        assert!(matches!(knot_resultant_oracle(&LaurentPoly::zero(1), 3), Err(CoverError::ZeroPolynomial)));
    }

    #[test]
    fn sigma_prime_for_knots() {
        assert_eq!(sigma_prime_rank(&pres("trefoil"), &lat("cyclic:7")).unwrap(), 2);
        assert_eq!(sigma_prime_rank(&pres("figure8"), &lat("cyclic:4")).unwrap(), 3);
        assert_eq!(sigma_prime_rank(&pres("unknot"), &lat("cyclic:4")).unwrap(), 0);
    }

    #[test]
    fn branch_equivalence_rejects_links() {
        assert!(matches!(based_branch_equivalence(&pres("hopf"), &lat("diag:2,2")), Err(CoverError::NotAKnot(2))));
        assert!(based_branch_equivalence(&pres("trefoil"), &lat("cyclic:4")).unwrap().agree);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            build_complex(&pres("hopf"), &lat("cyclic:3")),
            Err(CoverError::DimensionMismatch { lattice: 1, components: 2 })
        ));
    }

    #[test]
    fn hopf_covers() {
        // the complement is T^2 x I, so the cover has pi_1 = L and the
        // branch curves kill n1 e1 and n2 e2: |H1| = n1 n2 / m
        let mut specs: Vec<String> = (1..=4).flat_map(|a| (1..=4).map(move |b| format!("diag:{a},{b}"))).collect();
        specs.push("cols:2,1;-1,2".into());
        specs.push("cols:4,2;0,6".into());
        for spec in specs {
            let l = lat(&spec);
            let g = QuotientGroup::new(&l).unwrap();
            let n1 = g.element_order(&g.generator(0));
            let n2 = g.element_order(&g.generator(1));
            let (x, y) = both("hopf", &spec);
            assert!(x.same_group(&y), "{spec}");
            assert_eq!(x.betti, 0, "{spec}");
            assert_eq!(x.torsion_order, BigInt::from(n1 * n2 / g.order()), "{spec}");
        }
    }
}
