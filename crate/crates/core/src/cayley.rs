//! Cayley digraphs, Cayley sum graphs and their neighborhood families.

use crate::error::{Result, VcError};
use crate::family::{FamilyKind, TranslateFamily};
use crate::group::FiniteGroup;
use crate::subset::Subset;

/// Directed graph on `0..N` with loops allowed and no multiple edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Subset>,
}

impl Digraph {
    pub fn edgeless(n: usize) -> Self {
        Digraph {
            out: vec![Subset::empty(n); n],
        }
    }

    pub fn from_out_neighborhoods(out: Vec<Subset>) -> Result<Self> {
        let n = out.len();
        for s in &out {
            VcError::check_len(n, s.universe())?;
        }
        Ok(Digraph { out })
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn out_neighborhood(&self, v: usize) -> &Subset {
        &self.out[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.out[u].insert(v);
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Subset::count).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.vertex_count()).all(|u| self.out[u].iter().all(|v| self.out[v].contains(u)))
    }

    /// One line per vertex: `v: w1 w2 ...`.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = String::new();
        for (v, nbrs) in self.out.iter().enumerate() {
            out.push_str(&v.to_string());
            out.push(':');
            for w in nbrs.iter() {
                out.push(' ');
                out.push_str(&w.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_adjacency_text(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let n = lines.len();
        let mut g = Digraph::edgeless(n);
        for (i, line) in lines.iter().enumerate() {
            let (head, tail) = line
                .split_once(':')
                .ok_or_else(|| VcError::Parse(format!("line {i}: missing ':'")))?;
            let v: usize = head
                .trim()
                .parse()
                .map_err(|_| VcError::Parse(format!("line {i}: bad vertex {head:?}")))?;
            if v != i {
                return Err(VcError::Parse(format!("line {i}: expected vertex {i}, got {v}")));
            }
            for tok in tail.split_whitespace() {
                let w: usize = tok
                    .parse()
                    .map_err(|_| VcError::Parse(format!("line {i}: bad neighbor {tok:?}")))?;
                if w >= n {
                    return Err(VcError::Parse(format!("line {i}: neighbor {w} out of range")));
                }
                g.add_edge(v, w);
            }
        }
        Ok(g)
    }
}

/// `Cay(G, A)`: `u -> v` iff `v = u·a` for some `a ∈ A`.
pub fn cayley_digraph(g: &FiniteGroup, a: &Subset) -> Result<Digraph> {
    VcError::check_len(g.order(), a.universe())?;
    let out = g
        .elements()
        .map(|u| {
            let mut s = Subset::empty(g.order());
            for x in a.iter() {
                s.insert(g.mul(u, x));
            }
            s
        })
        .collect();
    Ok(Digraph { out })
}

/// Open out-neighborhoods `{N(v)}`.
pub fn neighborhood_family(d: &Digraph) -> TranslateFamily {
    TranslateFamily::explicit(d.vertex_count(), d.out.clone(), FamilyKind::Neighborhoods)
        .expect("neighborhoods share the vertex set")
}

/// Closed neighborhoods `{N(v) ∪ {v}}`.
pub fn closed_neighborhood_family(d: &Digraph) -> TranslateFamily {
    let members = d
        .out
        .iter()
        .enumerate()
        .map(|(v, s)| {
            let mut c = s.clone();
            c.insert(v);
            c
        })
        .collect();
    TranslateFamily::explicit(d.vertex_count(), members, FamilyKind::Neighborhoods)
        .expect("neighborhoods share the vertex set")
}

/// Cayley sum graph of an abelian group: `x ~ y` iff `x + y ∈ A`, stored as
/// a symmetric digraph with a loop at `x` when `2x ∈ A`.
pub fn cayley_sum_graph(g: &FiniteGroup, a: &Subset) -> Result<Digraph> {
    VcError::check_len(g.order(), a.universe())?;
    if !g.is_abelian() {
        return Err(VcError::precondition(format!(
            "cayley sum graph needs an abelian group, {} is not",
            g.descriptor()
        )));
    }
    let n = g.order();
    let mut d = Digraph::edgeless(n);
    for x in 0..n {
        for y in 0..n {
            if a.contains(g.mul(x, y)) {
                d.add_edge(x, y);
            }
        }
    }
    Ok(d)
}
