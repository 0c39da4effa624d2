//! Planar-diagram (PD) codes.
//!
//! Each crossing is `X[a,b,c,d]`: the four edge labels read counterclockwise
//! starting from the incoming under-strand, so `a -> c` is the under-strand
//! and `b`, `d` are the two halves of the over-strand. Edge directions on
//! over-strands are propagated from the under-strand positions; a component
//! that is never an under-strand falls back to label order (`d -> b` when
//! `b` follows `d`).

use std::fmt;

use thiserror::Error;

use super::{Crossing, LinkDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("PD syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("edge label {label} appears {count} times (expected 2)")]
    Multiplicity { label: usize, count: usize },
    #[error("edge labels must be 1..{max} without gaps; {missing} is missing")]
    Gap { max: usize, missing: usize },
    #[error("edge label 0 is not allowed")]
    ZeroLabel,
    #[error("inconsistent orientation at edge {0}")]
    Orientation(usize),
    #[error("bad braid word: {0}")]
    Braid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PdCode {
    pub crossings: Vec<[usize; 4]>,
}

/// Parses `X[a,b,c,d]` tuples separated by commas or whitespace, optionally
/// wrapped in `PD[...]`.
pub fn parse_pd(text: &str) -> Result<PdCode, PdError> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let err = |pos: usize, msg: &str| PdError::Syntax { pos, msg: msg.to_string() };
    let skip = |i: &mut usize| {
        while *i < bytes.len() && (bytes[*i].1.is_whitespace() || bytes[*i].1 == ',') {
            *i += 1;
        }
    };
    let pos_of = |i: usize| bytes.get(i).map(|b| b.0).unwrap_or(text.len());
    skip(&mut i);
    let mut wrapped = false;
    if text[pos_of(i)..].starts_with("PD[") {
        wrapped = true;
        i += 3;
    }
    let mut crossings = Vec::new();
    loop {
        skip(&mut i);
        if i >= bytes.len() {
            break;
        }
        if wrapped && bytes[i].1 == ']' {
            i += 1;
            skip(&mut i);
            if i < bytes.len() {
                return Err(err(pos_of(i), "trailing input after PD[...]"));
            }
            wrapped = false;
            break;
        }
        if bytes[i].1 != 'X' {
            return Err(err(pos_of(i), "expected 'X'"));
        }
        i += 1;
        if bytes.get(i).map(|b| b.1) != Some('[') {
            return Err(err(pos_of(i), "expected '['"));
        }
        i += 1;
        let mut tuple = [0usize; 4];
        for (k, slot) in tuple.iter_mut().enumerate() {
            while i < bytes.len() && bytes[i].1.is_whitespace() {
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(err(pos_of(i), "expected a positive integer"));
            }
            let s: String = bytes[start..i].iter().map(|b| b.1).collect();
            *slot = s.parse().map_err(|_| err(pos_of(start), "integer out of range"))?;
            while i < bytes.len() && bytes[i].1.is_whitespace() {
                i += 1;
            }
            let want = if k == 3 { ']' } else { ',' };
            if bytes.get(i).map(|b| b.1) != Some(want) {
                return Err(err(pos_of(i), &format!("expected '{want}'")));
            }
            i += 1;
        }
        crossings.push(tuple);
    }
    if wrapped {
        return Err(err(text.len(), "missing closing ']'"));
    }
    let code = PdCode { crossings };
    code.check_labels()?;
    Ok(code)
}

impl PdCode {
    /// Closure of a braid on `strands` strands. Generator `k > 0` is
    /// `s_k` (left strand under), `-k` its inverse. Every strand must take
    /// part in at least one crossing.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<PdCode, PdError> {
        let mut next = strands;
        let mut pos: Vec<usize> = (0..strands).collect();
        let mut touched = vec![false; strands];
        let mut raw = Vec::with_capacity(word.len());
        for &g in word {
            let i = (g.unsigned_abs() as usize).wrapping_sub(1);
            if g == 0 || i + 1 >= strands {
                return Err(PdError::Braid(format!("generator {g} out of range for {strands} strands")));
            }
            touched[i] = true;
            touched[i + 1] = true;
            let (l_in, r_in) = (pos[i], pos[i + 1]);
            let (l_out, r_out) = (next, next + 1);
            next += 2;
            raw.push(if g > 0 { [l_in, r_in, l_out, r_out] } else { [r_in, l_out, r_out, l_in] });
            pos[i] = r_out;
            pos[i + 1] = l_out;
        }
        if let Some(k) = touched.iter().position(|t| !t) {
            return Err(PdError::Braid(format!("strand {} never crosses", k + 1)));
        }
        let mut close: Vec<usize> = (0..next).collect();
        for (k, &p) in pos.iter().enumerate() {
            close[p] = k;
        }
        let mut used: Vec<usize> = raw.iter().flatten().map(|&x| close[x]).collect();
        used.sort_unstable();
        used.dedup();
        let relabel = |x: usize| used.binary_search(&close[x]).expect("label in use") + 1;
        Ok(PdCode { crossings: raw.iter().map(|x| x.map(relabel)).collect() })
    }

    pub fn num_edges(&self) -> usize {
        self.crossings.len() * 2
    }

    fn check_labels(&self) -> Result<(), PdError> {
        let max = self.crossings.iter().flatten().copied().max().unwrap_or(0);
        let mut count = vec![0usize; max + 1];
        for &label in self.crossings.iter().flatten() {
            if label == 0 {
                return Err(PdError::ZeroLabel);
            }
            count[label] += 1;
        }
        if let Some(missing) = (1..=max).find(|&l| count[l] == 0) {
            return Err(PdError::Gap { max, missing });
        }
        for (label, &c) in count.iter().enumerate().skip(1) {
            if c != 2 {
                return Err(PdError::Multiplicity { label, count: c });
            }
        }
        Ok(())
    }

    /// Builds the oriented diagram: components, Wirtinger arcs and signs.
    /// The empty code is the unknot.
    pub fn to_diagram(&self) -> Result<LinkDiagram, PdError> {
        self.check_labels()?;
        let n = self.crossings.len();
        if n == 0 {
            return Ok(LinkDiagram::unknot());
        }
        let e = self.num_edges();
        // occurrence index = 4 * crossing + position
        let label = |occ: usize| self.crossings[occ / 4][occ % 4];
        let mut occs: Vec<Vec<usize>> = vec![Vec::new(); e + 1];
        for occ in 0..4 * n {
            occs[label(occ)].push(occ);
        }
        let mut incoming: Vec<Option<bool>> = vec![None; 4 * n];
        for c in 0..n {
            incoming[4 * c] = Some(true);
            incoming[4 * c + 2] = Some(false);
        }
        loop {
            propagate(&mut incoming, &occs, &label)?;
            let Some(c) = (0..n).find(|&c| incoming[4 * c + 1].is_none()) else {
                break;
            };
            let [_, b, _, d] = self.crossings[c];
            let d_in = d % e + 1 == b;
            incoming[4 * c + 3] = Some(d_in);
            incoming[4 * c + 1] = Some(!d_in);
        }

        let mut comp = UnionFind::new(e + 1);
        let mut arcs = UnionFind::new(e + 1);
        for &[a, b, c, d] in &self.crossings {
            comp.union(a, c);
            comp.union(b, d);
            arcs.union(b, d);
        }
        let comp_index = dense_classes(&mut comp, e);
        let arc_index = dense_classes(&mut arcs, e);
        let num_arcs = arc_index.iter().skip(1).max().copied().unwrap_or(0);
        let num_components = comp_index.iter().skip(1).max().copied().unwrap_or(0);
        let mut component_of_arc = vec![0; num_arcs];
        for label in 1..=e {
            component_of_arc[arc_index[label] - 1] = comp_index[label];
        }
        let crossings = self
            .crossings
            .iter()
            .enumerate()
            .map(|(c, &[a, b, cc, _])| Crossing {
                over_arc: arc_index[b],
                incoming_under: arc_index[a],
                outgoing_under: arc_index[cc],
                over_component: comp_index[b],
                under_component: comp_index[a],
                sign: if incoming[4 * c + 3] == Some(true) { 1 } else { -1 },
            })
            .collect();
        Ok(LinkDiagram { num_arcs, num_components, component_of_arc, crossings })
    }
}

fn propagate(
    incoming: &mut [Option<bool>],
    occs: &[Vec<usize>],
    label: &impl Fn(usize) -> usize,
) -> Result<(), PdError> {
    let mut changed = true;
    while changed {
        changed = false;
        // the two ends of an edge: one head, one tail
        for pair in occs.iter().skip(1) {
            let (x, y) = (pair[0], pair[1]);
            match (incoming[x], incoming[y]) {
                (Some(p), Some(q)) if p == q => return Err(PdError::Orientation(label(x))),
                (Some(p), None) => {
                    incoming[y] = Some(!p);
                    changed = true;
                }
                (None, Some(q)) => {
                    incoming[x] = Some(!q);
                    changed = true;
                }
                _ => {}
            }
        }
        // the over-strand passes straight through
        for c in 0..incoming.len() / 4 {
            let (x, y) = (4 * c + 1, 4 * c + 3);
            match (incoming[x], incoming[y]) {
                (Some(p), Some(q)) if p == q => return Err(PdError::Orientation(label(x))),
                (Some(p), None) => {
                    incoming[y] = Some(!p);
                    changed = true;
                }
                (None, Some(q)) => {
                    incoming[x] = Some(!q);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Maps each label 1..=e to a 1-based class index, classes ordered by their
/// smallest label.
fn dense_classes(uf: &mut UnionFind, e: usize) -> Vec<usize> {
    let mut index = vec![0usize; e + 1];
    let mut root_index = vec![0usize; e + 1];
    let mut next = 0;
    for label in 1..=e {
        let r = uf.find(label);
        if root_index[r] == 0 {
            next += 1;
            root_index[r] = next;
        }
        index[label] = root_index[r];
    }
    index
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.crossings.iter().map(|[a, b, c, d]| format!("X[{a},{b},{c},{d}]")).collect();
        write!(f, "{}", parts.join(" "))
    }
}
