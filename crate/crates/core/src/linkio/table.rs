//! Built-in links.

use crate::laurent::LaurentPoly;

use super::{parse_pd, Crossing, LinkDiagram, LinkError};

#[derive(Debug, Clone, Copy)]
pub enum LinkSource {
    Unknot,
    Pd(&'static str),
    /// Hand-entered diagram records.
    Explicit(fn() -> LinkDiagram),
    /// Table entry carrying only a polynomial (no diagram).
    PolynomialOnly(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct TableEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub components: usize,
    /// Alexander polynomial in the text grammar, up to units.
    pub known_delta: &'static str,
    pub source: LinkSource,
}

const TABLE: &[TableEntry] = &[
    TableEntry { name: "unknot", aliases: &["0_1"], components: 1, known_delta: "1", source: LinkSource::Unknot },
    TableEntry {
        name: "trefoil",
        aliases: &["3_1"],
        components: 1,
        known_delta: "u1^2 - u1 + 1",
        source: LinkSource::Pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"),
    },
    TableEntry {
        name: "figure8",
        aliases: &["4_1", "figure-eight"],
        components: 1,
        known_delta: "u1^2 - 3*u1 + 1",
        source: LinkSource::Pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"),
    },
    TableEntry {
        name: "hopf",
        aliases: &["2_1^2", "L2a1"],
        components: 2,
        known_delta: "1",
        source: LinkSource::Pd("X[4,1,3,2] X[2,3,1,4]"),
    },
    TableEntry {
        name: "L5a1",
        aliases: &["5_1^2", "whitehead"],
        components: 2,
        known_delta: "1 - u1 - u2 + u1*u2",
        source: LinkSource::Explicit(whitehead),
    },
    TableEntry {
        name: "L6a1",
        aliases: &["6_2^2"],
        components: 2,
        known_delta: "u1 + u2 - 1 + u1^-1 + u2^-1",
        source: LinkSource::Pd(SIX_TWO_TWO),
    },
    TableEntry {
        name: "L6a2",
        aliases: &["6_2^3"],
        components: 2,
        known_delta: "2 - u1 - u2 + 2*u1*u2",
        source: LinkSource::Pd(SIX_TWO_THREE),
    },
    TableEntry {
        name: "lehmer-poly",
        aliases: &["lehmer"],
        components: 1,
        known_delta: LEHMER,
        source: LinkSource::PolynomialOnly(LEHMER),
    },
];

const LEHMER: &str = "u1^10 + u1^9 - u1^7 - u1^6 - u1^5 - u1^4 - u1^3 + u1 + 1";

// 4-plat closures of s2^3 s1^-2 s2 and s2^2 s1^-2 s2^2 (caps and cups on
// strands 1-2 and 3-4).
const SIX_TWO_TWO: &str = "X[12,6,7,1] X[5,11,6,12] X[10,4,11,5] X[1,9,2,10] X[8,2,9,3] X[3,7,4,8]";
const SIX_TWO_THREE: &str = "X[12,8,9,1] X[7,11,8,12] X[1,6,2,7] X[5,2,6,3] X[10,4,11,5] X[3,9,4,10]";

/// The 5-crossing Whitehead link with generators x1, x2 on the first
/// component and x3, x4, x5 on the second; relators
/// x1x3=x5x1, x3x2=x1x3, x5x4=x3x5, x4x2=x1x4, x2x4=x5x2.
fn whitehead() -> LinkDiagram {
    let x = |over, incoming_under, outgoing_under, sign| {
        let comp = |a: usize| if a <= 2 { 1 } else { 2 };
        Crossing {
            over_arc: over,
            incoming_under,
            outgoing_under,
            over_component: comp(over),
            under_component: comp(incoming_under),
            sign,
        }
    };
    LinkDiagram {
        num_arcs: 5,
        num_components: 2,
        component_of_arc: vec![1, 1, 2, 2, 2],
        crossings: vec![x(1, 5, 3, -1), x(3, 1, 2, -1), x(5, 3, 4, -1), x(4, 2, 1, 1), x(2, 4, 5, 1)],
    }
}

pub fn table() -> &'static [TableEntry] {
    TABLE
}

pub fn lookup(name: &str) -> Option<&'static TableEntry> {
    let key = name.trim();
    TABLE.iter().find(|e| e.name.eq_ignore_ascii_case(key) || e.aliases.iter().any(|a| a.eq_ignore_ascii_case(key)))
}

pub fn builtin_link(name: &str) -> Result<LinkDiagram, LinkError> {
    let entry = lookup(name).ok_or_else(|| LinkError::UnknownLink(name.to_string()))?;
    match entry.source {
        LinkSource::Unknot => Ok(LinkDiagram::unknot()),
        LinkSource::Pd(text) => Ok(parse_pd(text)?.to_diagram()?),
        LinkSource::Explicit(f) => Ok(f()),
        LinkSource::PolynomialOnly(_) => Err(LinkError::NoDiagram(entry.name.to_string())),
    }
}

/// The tabulated Alexander polynomial of a built-in entry.
pub fn builtin_polynomial(name: &str) -> Result<LaurentPoly, LinkError> {
    let entry = lookup(name).ok_or_else(|| LinkError::UnknownLink(name.to_string()))?;
    Ok(LaurentPoly::parse_with_dim(entry.known_delta, entry.components).expect("table polynomial parses"))
}
