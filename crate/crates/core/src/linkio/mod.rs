//! Link diagrams and their Wirtinger presentations.
//!
//! A [`LinkDiagram`] is the combinatorial content of an oriented diagram:
//! arcs (maximal over-strands), the component of each arc, and one record
//! per crossing. [`wirtinger`] turns it into one generator per arc and one
//! relator `x_i x_j1 x_i^-1 x_j2^-1` per crossing.
//!
//! Arc and component numbers in `LinkDiagram` are 1-based (they are what
//! users read and write in JSON); everything in [`WirtingerPresentation`]
//! is 0-based.

mod pd;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pd::{parse_pd, PdCode, PdError};
pub use table::{builtin_link, builtin_polynomial, lookup, table, LinkSource, TableEntry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("unknown link name {0:?}")]
    UnknownLink(String),
    #[error("{0:?} is a polynomial-only table entry and has no diagram")]
    NoDiagram(String),
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Pd(#[from] PdError),
    #[error("diagram JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Crossing {
    pub over_arc: usize,
    pub incoming_under: usize,
    pub outgoing_under: usize,
    pub over_component: usize,
    pub under_component: usize,
    /// +1 or -1. Decides which under-arc is conjugated in the relator.
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDiagram {
    pub num_arcs: usize,
    pub num_components: usize,
    pub component_of_arc: Vec<usize>,
    pub crossings: Vec<Crossing>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoComponents,
    ArcCountMismatch { expected: usize, got: usize },
    ComponentOutOfRange { arc: usize, component: usize },
    ComponentUnused(usize),
    ArcOutOfRange { crossing: usize, arc: usize },
    BadSign { crossing: usize, sign: i8 },
    ComponentFieldMismatch { crossing: usize },
    NontrivialAbelianization { crossing: usize },
    DuplicateOutgoing { arc: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoComponents => write!(f, "diagram has no components"),
            Violation::ArcCountMismatch { expected, got } => {
                write!(f, "component_of_arc has {got} entries, expected {expected}")
            }
            Violation::ComponentOutOfRange { arc, component } => {
                write!(f, "arc {arc}: component index out of range ({component})")
            }
            Violation::ComponentUnused(c) => write!(f, "component {c} has no arcs"),
            Violation::ArcOutOfRange { crossing, arc } => {
                write!(f, "crossing {crossing}: arc {arc} out of range")
            }
            Violation::BadSign { crossing, sign } => write!(f, "crossing {crossing}: sign {sign} is not +1 or -1"),
            Violation::ComponentFieldMismatch { crossing } => {
                write!(f, "crossing {crossing}: component fields disagree with component_of_arc")
            }
            Violation::NontrivialAbelianization { crossing } => {
                write!(
                    f,
                    "crossing {crossing}: relator abelianization is nontrivial (under-arcs on different components)"
                )
            }
            Violation::DuplicateOutgoing { arc } => {
                write!(f, "arc {arc} is the outgoing under-arc of more than one crossing")
            }
        }
    }
}

impl LinkDiagram {
    /// A single unknotted circle with no crossings.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `n` split unknotted circles, one arc each.
    pub fn unlink(n: usize) -> Self {
        LinkDiagram { num_arcs: n, num_components: n, component_of_arc: (1..=n).collect(), crossings: Vec::new() }
    }

    pub fn from_json(text: &str) -> Result<Self, LinkError> {
        serde_json::from_str(text).map_err(|e| LinkError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }
}

/// Checks every structural invariant of a diagram; an empty list means valid.
pub fn validate_diagram(diag: &LinkDiagram) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = diag.num_arcs;
    let d = diag.num_components;
    if d == 0 {
        out.push(Violation::NoComponents);
    }
    if diag.component_of_arc.len() != n {
        out.push(Violation::ArcCountMismatch { expected: n, got: diag.component_of_arc.len() });
    }
    let mut used = vec![false; d];
    for (k, &c) in diag.component_of_arc.iter().enumerate() {
        if c == 0 || c > d {
            out.push(Violation::ComponentOutOfRange { arc: k + 1, component: c });
        } else {
            used[c - 1] = true;
        }
    }
    for (k, u) in used.iter().enumerate() {
        if !u {
            out.push(Violation::ComponentUnused(k + 1));
        }
    }
    let comp = |arc: usize| diag.component_of_arc.get(arc.wrapping_sub(1)).copied();
    let mut outgoing_seen = vec![false; n + 1];
    for (ci, x) in diag.crossings.iter().enumerate() {
        let cnum = ci + 1;
        let arcs = [x.over_arc, x.incoming_under, x.outgoing_under];
        let mut in_range = true;
        for &a in &arcs {
            if a == 0 || a > n {
                out.push(Violation::ArcOutOfRange { crossing: cnum, arc: a });
                in_range = false;
            }
        }
        if x.sign != 1 && x.sign != -1 {
            out.push(Violation::BadSign { crossing: cnum, sign: x.sign });
        }
        if !in_range {
            continue;
        }
        let (co, ci_, cu) = (comp(x.over_arc), comp(x.incoming_under), comp(x.outgoing_under));
        if ci_ != cu {
            out.push(Violation::NontrivialAbelianization { crossing: cnum });
        } else if co != Some(x.over_component) || ci_ != Some(x.under_component) {
            out.push(Violation::ComponentFieldMismatch { crossing: cnum });
        }
        if outgoing_seen[x.outgoing_under] {
            out.push(Violation::DuplicateOutgoing { arc: x.outgoing_under });
        }
        outgoing_seen[x.outgoing_under] = true;
    }
    out
}

/// One Wirtinger relator `x_over x_conjugated x_over^-1 x_image^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relator {
    pub over: usize,
    pub conjugated: usize,
    pub image: usize,
    pub over_component: usize,
    pub under_component: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WirtingerPresentation {
    pub num_components: usize,
    /// Component of each generator (the abelianization `x_i -> u_t(i)`).
    pub generator_component: Vec<usize>,
    pub relators: Vec<Relator>,
}

impl WirtingerPresentation {
    pub fn num_generators(&self) -> usize {
        self.generator_component.len()
    }

    /// Relators whose abelianization is not trivial.
    pub fn abelianization_failures(&self) -> Vec<usize> {
        self.relators
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                let t = &self.generator_component;
                r.over >= t.len()
                    || r.conjugated >= t.len()
                    || r.image >= t.len()
                    || t[r.conjugated] != t[r.image]
                    || t[r.over] != r.over_component
                    || t[r.conjugated] != r.under_component
            })
            .map(|(k, _)| k)
            .collect()
    }
}

/// Wirtinger presentation of a validated diagram. A positive crossing
/// conjugates the incoming under-arc into the outgoing one; a negative
/// crossing the reverse.
pub fn wirtinger(diag: &LinkDiagram) -> Result<WirtingerPresentation, LinkError> {
    let violations = validate_diagram(diag);
    if !violations.is_empty() {
        return Err(LinkError::Invalid(violations));
    }
    let relators = diag
        .crossings
        .iter()
        .map(|x| {
            let (j1, j2) =
                if x.sign > 0 { (x.incoming_under, x.outgoing_under) } else { (x.outgoing_under, x.incoming_under) };
            Relator {
                over: x.over_arc - 1,
                conjugated: j1 - 1,
                image: j2 - 1,
                over_component: x.over_component - 1,
                under_component: x.under_component - 1,
            }
        })
        .collect();
    Ok(WirtingerPresentation {
        num_components: diag.num_components,
        generator_component: diag.component_of_arc.iter().map(|c| c - 1).collect(),
        relators,
    })
}
