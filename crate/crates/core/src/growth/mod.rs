//! Growth series `(1/m) log b_L` over families of lattices, compared with
//! `log M(Δ)`.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alexander::{alexander_polynomial, higher_alexander_univariate, AlexanderError};
use crate::covers::{homology, CoverError, HomologyMethod};
use crate::lattices::{shortest_vector, Lattice, LatticeError, MAX_SVP_DIM};
use crate::laurent::{ln_abs, LaurentPoly};
use crate::linkio::WirtingerPresentation;
use crate::mahler::{mahler, MahlerError, MahlerOptions};

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("bad family {0:?}: expected cyclic:R, diag:N or list:SPEC|SPEC|...")]
    Family(String),
    #[error("family is empty")]
    EmptyFamily,
    #[error("cyclic families need a knot (link has {0} components)")]
    CyclicNeedsKnot(usize),
    #[error("series is empty")]
    EmptySeries,
    #[error("tail must be positive")]
    EmptyTail,
    #[error("tail {tail} exceeds series length {len}")]
    TailTooLong { tail: usize, len: usize },
    #[error("lattice {lattice} has dimension {dim} but the link has {components} components")]
    Dimension { lattice: String, dim: usize, components: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
    #[error(transparent)]
    Mahler(#[from] MahlerError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRecord {
    pub lattice: String,
    pub m: u64,
    /// `<L>`; `None` when the lattice dimension exceeds the enumeration cap.
    pub min_vec: Option<f64>,
    #[serde(
        rename = "torsion_order",
        serialize_with = "crate::serde_big::one",
        deserialize_with = "crate::serde_big::de_one"
    )]
    pub b: BigInt,
    pub betti: usize,
    pub normalized_log: f64,
}

impl GrowthRecord {
    pub fn new(lattice: &Lattice, b: BigInt, betti: usize) -> GrowthRecord {
        let m = lattice.index();
        let min_vec = (lattice.dim() <= MAX_SVP_DIM).then(|| shortest_vector(lattice).ok()).flatten();
        let normalized_log = ln_abs(&b) / m as f64;
        GrowthRecord { lattice: lattice.to_string(), m, min_vec, b, betti, normalized_log }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `rZ` for `r = 1..=R`.
    Cyclic(u64),
    /// `nZ^d` for `n = 1..=N`.
    Diag(u64),
    Explicit(Vec<Lattice>),
}

impl FamilySpec {
    /// The default family for a link with `d` components.
    pub fn default_for(d: usize, size: u64) -> FamilySpec {
        if d == 1 {
            FamilySpec::Cyclic(size)
        } else {
            FamilySpec::Diag(size)
        }
    }

    pub fn lattices(&self, d: usize) -> Result<Vec<Lattice>, GrowthError> {
        let out = match self {
            FamilySpec::Cyclic(r) => {
                if d != 1 {
                    return Err(GrowthError::CyclicNeedsKnot(d));
                }
                (1..=*r as i64).map(Lattice::cyclic).collect::<Result<Vec<_>, _>>()?
            }
            FamilySpec::Diag(n) => (1..=*n as i64).map(|n| Lattice::scaled(n, d)).collect::<Result<Vec<_>, _>>()?,
            FamilySpec::Explicit(list) => {
                if let Some(l) = list.iter().find(|l| l.dim() != d) {
                    return Err(GrowthError::Dimension { lattice: l.to_string(), dim: l.dim(), components: d });
                }
                list.clone()
            }
        };
        if out.is_empty() {
            return Err(GrowthError::EmptyFamily);
        }
        Ok(out)
    }
}

impl FromStr for FamilySpec {
    type Err = GrowthError;

    fn from_str(s: &str) -> Result<FamilySpec, GrowthError> {
        let bad = || GrowthError::Family(s.to_string());
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "cyclic" => Ok(FamilySpec::Cyclic(rest.trim().parse().map_err(|_| bad())?)),
            "diag" => Ok(FamilySpec::Diag(rest.trim().parse().map_err(|_| bad())?)),
            "list" => rest
                .split('|')
                .map(|p| p.parse::<Lattice>().map_err(GrowthError::from))
                .collect::<Result<Vec<_>, _>>()
                .map(FamilySpec::Explicit),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cyclic(r) => write!(f, "cyclic:{r}"),
            FamilySpec::Diag(n) => write!(f, "diag:{n}"),
            FamilySpec::Explicit(list) => {
                let parts: Vec<String> = list.iter().map(ToString::to_string).collect();
                write!(f, "list:{}", parts.join("|"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeFailure {
    pub lattice: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRun {
    /// Successful records in family order.
    pub records: Vec<GrowthRecord>,
    pub failures: Vec<LatticeFailure>,
}

/// One record per lattice of the family, computed in parallel on the
/// current rayon pool. Failures are collected, not propagated.
pub fn run_family(
    pres: &WirtingerPresentation,
    fam: &FamilySpec,
    method: HomologyMethod,
) -> Result<GrowthRun, GrowthError> {
    let lattices = fam.lattices(pres.num_components)?;
    let results: Vec<Result<GrowthRecord, CoverError>> = lattices
        .par_iter()
        .map(|lam| homology(pres, lam, method).map(|h| GrowthRecord::new(lam, h.torsion_order, h.betti)))
        .collect();
    let mut run = GrowthRun { records: Vec::new(), failures: Vec::new() };
    for (lam, r) in lattices.iter().zip(results) {
        match r {
            Ok(rec) => run.records.push(rec),
            Err(e) => run.failures.push(LatticeFailure { lattice: lam.to_string(), error: e.to_string() }),
        }
    }
    Ok(run)
}

/// The polynomial the growth rate is compared with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    /// `None` when no comparison polynomial is available.
    pub polynomial: Option<String>,
    /// Index `i` of the Alexander polynomial `Δ_i` used.
    pub index: usize,
    pub log_mahler: Option<f64>,
    pub error_bound: Option<f64>,
    pub note: String,
}

/// `log M(Δ)`, or for a knot with `Δ = 0` the measure of the first nonzero
/// `Δ_i`.
pub fn comparison(pres: &WirtingerPresentation, opts: &MahlerOptions) -> Result<Comparison, GrowthError> {
    let delta = alexander_polynomial(pres)?;
    let (poly, index, note) = if !delta.is_zero() {
        (Some(delta), 1, "log M of the Alexander polynomial".to_string())
    } else if pres.num_components == 1 {
        let mut found = None;
        for i in 2..=pres.num_generators().max(2) {
            let p = higher_alexander_univariate(pres, i)?;
            if !p.is_zero() {
                found = Some((p, i));
                break;
            }
        }
        match found {
            Some((p, i)) => (Some(p), i, format!("Δ = 0; comparing with the first nonzero Δ_{i}")),
            None => (None, 0, "Δ = 0 and no nonzero higher polynomial".to_string()),
        }
    } else {
        (None, 0, "Δ = 0; no comparison value for links with several components".to_string())
    };
    let measured = poly.as_ref().map(|p| mahler(p, opts)).transpose()?;
    Ok(Comparison {
        polynomial: poly.as_ref().map(LaurentPoly::to_string),
        index,
        log_mahler: measured.as_ref().map(|r| r.log_value),
        error_bound: measured.as_ref().map(|r| r.error_bound),
        note,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateEstimate {
    pub last: f64,
    /// Max of `normalized_log` over the last `tail` records.
    pub tail_max: f64,
    pub tail: usize,
    pub reference_log_m: Option<f64>,
    pub abs_gap: Option<f64>,
}

pub fn estimate_rate(
    series: &[GrowthRecord],
    tail: usize,
    reference_log_m: Option<f64>,
) -> Result<RateEstimate, GrowthError> {
    if series.is_empty() {
        return Err(GrowthError::EmptySeries);
    }
    if tail == 0 {
        return Err(GrowthError::EmptyTail);
    }
    if tail > series.len() {
        return Err(GrowthError::TailTooLong { tail, len: series.len() });
    }
    let last = series[series.len() - 1].normalized_log;
    let tail_max = series[series.len() - tail..].iter().map(|r| r.normalized_log).fold(f64::NEG_INFINITY, f64::max);
    Ok(RateEstimate { last, tail_max, tail, reference_log_m, abs_gap: reference_log_m.map(|r| (tail_max - r).abs()) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

pub const CSV_HEADER: [&str; 6] = ["lattice", "m", "min_vec", "betti", "torsion_order", "normalized_log"];

pub fn write_records<W: Write>(series: &[GrowthRecord], format: EmitFormat, out: W) -> Result<(), GrowthError> {
    match format {
        EmitFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in series {
                w.write_record([
                    r.lattice.clone(),
                    r.m.to_string(),
                    r.min_vec.map(|v| v.to_string()).unwrap_or_default(),
                    r.betti.to_string(),
                    r.b.to_string(),
                    r.normalized_log.to_string(),
                ])?;
            }
            w.flush()?;
        }
        EmitFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, series)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn emit(series: &[GrowthRecord], format: EmitFormat, path: &Path) -> Result<(), GrowthError> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_records(series, format, file)
}

pub fn read_json(text: &str) -> Result<Vec<GrowthRecord>, GrowthError> {
    Ok(serde_json::from_str(text)?)
}
