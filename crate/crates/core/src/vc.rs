//! Exact VC-dimension.
//!
//! Each ground element `x` gets a signature: the bit-vector over distinct
//! members `F` with `x ∈ F`. A probe set `U` of size `k` partitions the
//! members into `2^k` cells by trace, and `U` is shattered iff every cell is
//! nonempty. Adding `x` to `U` splits each cell by `x`'s signature.
//!
//! The search is a depth-first branch and bound over probe sets built in
//! ascending element order. With `best` the largest shattered size found so
//! far, a probe set of size `k` can only grow into a shattered set of size
//! `best + 1` if each of its cells holds at least `2^(best + 1 - k)` members,
//! so extensions failing that count are dropped. Shattered sets are closed
//! under taking subsets, which lets each child reuse the viable extensions of
//! its parent. For translate families, left multiplication maps shattered
//! sets to shattered sets, so the identity can be fixed as the first element.
//! When automorphisms fixing `A` are known as well, the second element only
//! needs to range over one representative per orbit.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::error::{Result, VcError};
use crate::family::TranslateFamily;
use crate::subset::{words_for, Subset};

/// Largest ground set accepted by [`vc_dim_naive`].
pub const NAIVE_MAX_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Abort with [`VcError::Resource`] after this many search nodes.
    pub node_budget: Option<u64>,
    /// Abort with [`VcError::Deadline`] once this instant has passed.
    pub deadline: Option<Instant>,
    /// Per-search limit, counted from the start of each search; combined
    /// with `deadline` by taking the earlier instant.
    pub time_limit: Option<Duration>,
}

impl SearchOptions {
    pub fn with_budget(nodes: u64) -> Self {
        SearchOptions {
            node_budget: Some(nodes),
            ..Default::default()
        }
    }

    fn effective_deadline(&self, start: Instant) -> Option<Instant> {
        let local = self.time_limit.map(|d| start + d);
        match (self.deadline, local) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

const DEADLINE_STRIDE: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcOutcome {
    pub dimension: usize,
    /// A shattered set of size `dimension`.
    pub witness: Subset,
    /// Search nodes expanded.
    pub nodes: u64,
}

/// Maximum size of a shattered subset.
pub fn vc_dim(f: &TranslateFamily) -> Result<usize> {
    vc_dim_with(f, SearchOptions::default()).map(|o| o.dimension)
}

pub fn vc_dim_with(f: &TranslateFamily, opts: SearchOptions) -> Result<VcOutcome> {
    let deadline = opts.effective_deadline(Instant::now());
    let members = distinct_members(f)?;
    let n = f.universe();
    let m = members.len();
    let words = words_for(m);

    let mut sigs = vec![0u64; n * words];
    for (j, member) in members.iter().enumerate() {
        for x in member.iter() {
            sigs[x * words + j / 64] |= 1 << (j % 64);
        }
    }
    let sig_size: Vec<usize> = (0..n)
        .map(|x| {
            sigs[x * words..(x + 1) * words]
                .iter()
                .map(|w| w.count_ones() as usize)
                .sum()
        })
        .collect();
    // Elements in every member or in none are never part of a shattered set.
    let useful: Vec<usize> = (0..n)
        .filter(|&x| sig_size[x] > 0 && sig_size[x] < m)
        .collect();

    let mut search = Search {
        words,
        sigs,
        best: 0,
        best_set: Vec::new(),
        path: Vec::new(),
        nodes: 0,
        budget: opts.node_budget,
        deadline,
        levels: Vec::new(),
    };

    if let Some(&first) = useful.first() {
        search.best = 1;
        search.best_set = vec![first];
    }

    let mut all = vec![0u64; words];
    for j in 0..m {
        all[j / 64] |= 1 << (j % 64);
    }
    search.levels.push(Level {
        cells: all,
        sizes: vec![m as u32],
    });

    match f.symmetry() {
        Some((g, orbits)) if useful.contains(&g.identity()) => {
            let e = g.identity();
            let rest: Vec<usize> = useful.iter().copied().filter(|&x| x != e).collect();
            match orbits {
                None => search.descend(0, e, rest)?,
                Some(orbits) => {
                    search.visit()?;
                    search.split_level(0, e);
                    search.path.push(e);
                    search.expand_orbits(&rest, orbits)?;
                }
            }
        }
        _ => search.expand(0, &useful)?,
    }

    let witness = Subset::from_indices(n, search.best_set.iter().copied())?;
    Ok(VcOutcome {
        dimension: search.best,
        witness,
        nodes: search.nodes,
    })
}

fn distinct_members(f: &TranslateFamily) -> Result<Vec<Subset>> {
    if f.is_empty() {
        return Err(VcError::UndefinedFamily);
    }
    let mut seen = HashSet::new();
    Ok(f.members()
        .into_iter()
        .filter(|s| seen.insert(s.clone()))
        .collect())
}

struct Level {
    /// `sizes.len()` cells of `words` words each.
    cells: Vec<u64>,
    sizes: Vec<u32>,
}

struct Search {
    words: usize,
    sigs: Vec<u64>,
    best: usize,
    best_set: Vec<usize>,
    path: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    deadline: Option<Instant>,
    levels: Vec<Level>,
}

impl Search {
    fn sig(&self, x: usize) -> &[u64] {
        &self.sigs[x * self.words..(x + 1) * self.words]
    }

    /// Whether adding `x` to the probe set at `depth` leaves every cell with
    /// at least `need` members on both sides.
    fn splits(&self, depth: usize, x: usize, need: u32) -> bool {
        let level = &self.levels[depth];
        let sig = self.sig(x);
        for (c, &size) in level.sizes.iter().enumerate() {
            let cell = &level.cells[c * self.words..(c + 1) * self.words];
            let inside: u32 = cell
                .iter()
                .zip(sig)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if inside < need || size - inside < need {
                return false;
            }
        }
        true
    }

    /// Probe set of size `depth` is on `self.path`; `cands` are its possible
    /// extensions, ascending and all greater than the path's last element.
    fn expand(&mut self, depth: usize, cands: &[usize]) -> Result<()> {
        // Extensions must reach size best + 1 to matter.
        if depth + cands.len() <= self.best {
            return Ok(());
        }
        let viable: Vec<usize> = {
            let need = 1u32 << (self.best - depth).min(31);
            cands
                .iter()
                .copied()
                .filter(|&x| self.splits(depth, x, need))
                .collect()
        };
        for (i, &x) in viable.iter().enumerate() {
            if depth + (viable.len() - i) <= self.best {
                break;
            }
            self.descend(depth, x, viable[i + 1..].to_vec())?;
        }
        Ok(())
    }

    /// Second element of a probe set whose first element is fixed: one
    /// representative per orbit. A set meeting several orbits is searched
    /// under the first of them, so later representatives skip earlier orbits.
    fn expand_orbits(&mut self, cands: &[usize], orbit: &[u32]) -> Result<()> {
        let mut done = HashSet::new();
        for &c in cands {
            if done.contains(&orbit[c]) {
                continue;
            }
            // Every candidate below c lies in an orbit already done.
            let rest: Vec<usize> = cands
                .iter()
                .copied()
                .filter(|&x| x > c && !done.contains(&orbit[x]))
                .collect();
            done.insert(orbit[c]);
            if 2 + rest.len() <= self.best {
                continue;
            }
            let need = 1u32 << (self.best - 1).min(31);
            if self.splits(1, c, need) {
                self.descend(1, c, rest)?;
            }
        }
        Ok(())
    }

    fn visit(&mut self) -> Result<()> {
        self.nodes += 1;
        if let Some(budget) = self.budget {
            if self.nodes > budget {
                return Err(VcError::Resource { budget });
            }
        }
        if self.nodes % DEADLINE_STRIDE == 1 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(VcError::Deadline {
                nodes: self.nodes,
            });
        }
        Ok(())
    }

    fn descend(&mut self, depth: usize, x: usize, rest: Vec<usize>) -> Result<()> {
        self.visit()?;
        self.split_level(depth, x);
        self.path.push(x);
        if depth + 1 > self.best {
            self.best = depth + 1;
            self.best_set = self.path.clone();
        }
        let result = self.expand(depth + 1, &rest);
        self.path.pop();
        result
    }

    /// Builds the cells of level `depth + 1` by splitting level `depth` on `x`.
    fn split_level(&mut self, depth: usize, x: usize) {
        let w = self.words;
        if self.levels.len() == depth + 1 {
            self.levels.push(Level {
                cells: Vec::new(),
                sizes: Vec::new(),
            });
        }
        let (head, tail) = self.levels.split_at_mut(depth + 1);
        let parent_level = &head[depth];
        let child = &mut tail[0];
        child.cells.clear();
        child.sizes.clear();
        let sig = &self.sigs[x * w..(x + 1) * w];
        for c in 0..parent_level.sizes.len() {
            let cell = &parent_level.cells[c * w..(c + 1) * w];
            let mut inside = 0;
            for (a, b) in cell.iter().zip(sig) {
                child.cells.push(a & !b);
            }
            for (a, b) in cell.iter().zip(sig) {
                let v = a & b;
                inside += v.count_ones();
                child.cells.push(v);
            }
            child.sizes.push(parent_level.sizes[c] - inside);
            child.sizes.push(inside);
        }
    }
}

/// Exhaustive oracle: scans all `2^N` subsets for `N <= 24`.
///
/// Independent of [`vc_dim`]: traces are compressed directly from member
/// masks and no pruning or symmetry is used.
pub fn vc_dim_naive(f: &TranslateFamily) -> Result<usize> {
    let n = f.universe();
    if n > NAIVE_MAX_ORDER {
        return Err(VcError::Capacity(format!(
            "naive VC-dimension limited to ground sets of size {NAIVE_MAX_ORDER}, got {n}"
        )));
    }
    if f.is_empty() {
        return Err(VcError::UndefinedFamily);
    }
    let masks: Vec<u32> = f
        .members()
        .iter()
        .map(|m| m.iter().fold(0u32, |acc, x| acc | 1 << x))
        .collect();
    let mut best = 0;
    let mut seen = Vec::new();
    for u in 0u32..(1u32 << n) {
        let k = u.count_ones() as usize;
        if k <= best {
            continue;
        }
        seen.clear();
        seen.resize(1 << k, false);
        let mut distinct = 0;
        for &m in &masks {
            let t = compress(m, u);
            if !seen[t] {
                seen[t] = true;
                distinct += 1;
            }
        }
        if distinct == 1 << k {
            best = k;
        }
    }
    Ok(best)
}

/// Packs the bits of `value` selected by `mask` into the low bits.
fn compress(value: u32, mask: u32) -> usize {
    let mut out = 0usize;
    let mut pos = 0;
    let mut rest = mask;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        if value >> bit & 1 == 1 {
            out |= 1 << pos;
        }
        pos += 1;
        rest &= rest - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{is_shattered, FamilyKind};
    use crate::group::FiniteGroup;

    fn set(n: usize, xs: &[usize]) -> Subset {
        Subset::from_indices(n, xs.iter().copied()).unwrap()
    }

    fn translates(g: &FiniteGroup, xs: &[usize]) -> TranslateFamily {
        TranslateFamily::left_translates(g, &set(g.order(), xs)).unwrap()
    }

    #[test]
    fn trivial_families() {
        for desc in ["C1", "C7", "D4", "C2xC3"] {
            let g = FiniteGroup::from_descriptor(desc).unwrap();
            assert_eq!(vc_dim(&translates(&g, &[])).unwrap(), 0);
            let full = TranslateFamily::left_translates(&g, &Subset::full(g.order())).unwrap();
            assert_eq!(vc_dim(&full).unwrap(), 0);
            assert_eq!(vc_dim_naive(&full).unwrap(), 0);
        }
    }

    #[test]
    fn small_examples() {
        let c5 = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(vc_dim(&translates(&c5, &[0, 1])).unwrap(), 2);
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(vc_dim_naive(&translates(&c4, &[0, 1])).unwrap(), 2);
        assert_eq!(vc_dim(&translates(&c4, &[0, 1])).unwrap(), 2);
        let c3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(vc_dim_naive(&translates(&c3, &[0])).unwrap(), 1);
        assert_eq!(vc_dim(&translates(&c3, &[0])).unwrap(), 1);
    }

    #[test]
    fn witness_is_shattered() {
        let g = FiniteGroup::cyclic(31).unwrap();
        let f = translates(&g, &[0, 1, 3, 7, 8, 12, 20, 21, 25]);
        let out = vc_dim_with(&f, SearchOptions::default()).unwrap();
        assert_eq!(out.witness.count(), out.dimension);
        assert!(is_shattered(&f, &out.witness).unwrap());
    }

    #[test]
    fn empty_family_is_rejected() {
        let f = TranslateFamily::explicit(4, vec![], FamilyKind::ExplicitList).unwrap();
        assert!(matches!(vc_dim(&f), Err(VcError::UndefinedFamily)));
        assert!(matches!(vc_dim_naive(&f), Err(VcError::UndefinedFamily)));
    }

    #[test]
    fn naive_order_cap() {
        let g = FiniteGroup::cyclic(25).unwrap();
        assert!(matches!(
            vc_dim_naive(&translates(&g, &[0])),
            Err(VcError::Capacity(_))
        ));
    }

    #[test]
    fn explicit_power_set_is_fully_shattered() {
        let members: Vec<Subset> = (0u32..16)
            .map(|m| Subset::from_indices(4, (0..4).filter(|i| m >> i & 1 == 1)).unwrap())
            .collect();
        let f = TranslateFamily::explicit(4, members, FamilyKind::ExplicitList).unwrap();
        assert_eq!(vc_dim(&f).unwrap(), 4);
        assert_eq!(vc_dim_naive(&f).unwrap(), 4);
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroup::cyclic(64).unwrap();
        let f = translates(&g, &(0..64).filter(|x| x % 3 != 1 || x % 5 == 0).collect::<Vec<_>>());
        let err = vc_dim_with(&f, SearchOptions::with_budget(3)).unwrap_err();
        assert!(matches!(err, VcError::Resource { budget: 3 }));
        let past = SearchOptions {
            deadline: Some(Instant::now()),
            ..Default::default()
        };
        let instant = SearchOptions {
            time_limit: Some(Duration::ZERO),
            ..Default::default()
        };
        let g = FiniteGroup::cyclic(256).unwrap();
        let dense: Vec<usize> = (0..256).filter(|x| (x * x + 3 * x) % 7 < 4).collect();
        for opts in [past, instant] {
            assert!(matches!(
                vc_dim_with(&translates(&g, &dense), opts),
                Err(VcError::Deadline { .. })
            ));
        }
    }

    #[test]
    fn compress_bits() {
        assert_eq!(compress(0b1011, 0b1010), 0b11);
        assert_eq!(compress(0b0001, 0b1010), 0);
        assert_eq!(compress(0b1000, 0b1001), 0b10);
    }
}
