//! Set systems on a group: translate families, explicit member lists,
//! restrictions, shattering and cut-out tests.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Result, VcError};
use crate::group::FiniteGroup;
use crate::subset::Subset;

/// Widest probe set a [`Trace`] mask can describe.
pub const MAX_PROBE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    LeftTranslates,
    Neighborhoods,
    Sisask,
    ExplicitList,
}

/// A family of subsets of one group.
///
/// `LeftTranslates` stores only `(G, A)` and denotes `{tA : t ∈ G}`; every
/// other kind stores its members. Repeated members are allowed and never
/// change a result.
#[derive(Debug, Clone)]
pub struct TranslateFamily {
    kind: FamilyKind,
    universe: usize,
    group: Option<FiniteGroup>,
    base: Option<Subset>,
    members: Vec<Subset>,
    orbits: Option<Vec<u32>>,
}

/// Intersection of one member with an ordered probe set `U`: bit `i` is set
/// iff the `i`-th smallest element of `U` lies in the member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(pub u32);

impl TranslateFamily {
    pub fn left_translates(group: &FiniteGroup, base: &Subset) -> Result<Self> {
        VcError::check_len(group.order(), base.universe())?;
        Ok(TranslateFamily {
            kind: FamilyKind::LeftTranslates,
            universe: group.order(),
            group: Some(group.clone()),
            base: Some(base.clone()),
            members: Vec::new(),
            orbits: None,
        })
    }

    pub fn explicit(universe: usize, members: Vec<Subset>, kind: FamilyKind) -> Result<Self> {
        if kind == FamilyKind::LeftTranslates {
            return Err(VcError::precondition(
                "left-translate families are built from (group, base)",
            ));
        }
        for m in &members {
            VcError::check_len(universe, m.universe())?;
        }
        Ok(TranslateFamily {
            kind,
            universe,
            group: None,
            base: None,
            members,
            orbits: None,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Size of the ground set.
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        self.group.as_ref()
    }

    pub fn base(&self) -> Option<&Subset> {
        self.base.as_ref()
    }

    /// Number of members counted with multiplicity.
    pub fn len(&self) -> usize {
        match self.kind {
            FamilyKind::LeftTranslates => self.universe,
            _ => self.members.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Materialized members; for translate families member `t` is `tA`.
    pub fn members(&self) -> Vec<Subset> {
        match (&self.group, &self.base) {
            (Some(g), Some(a)) if self.kind == FamilyKind::LeftTranslates => g
                .elements()
                .map(|t| translate_unchecked(g, t, a))
                .collect(),
            _ => self.members.clone(),
        }
    }

    /// Members with duplicates removed, in first-occurrence order.
    pub fn distinct_members(&self) -> Vec<Subset> {
        let mut seen = HashSet::new();
        self.members()
            .into_iter()
            .filter(|m| seen.insert(m.clone()))
            .collect()
    }

    /// Records orbit labels of a group of automorphisms `φ` with `φ(A) = A`.
    /// Such `φ` fix the identity and map `tA` to `φ(t)A`, so they permute
    /// the shattered sets; the caller guarantees the labels are orbits.
    pub(crate) fn with_automorphism_orbits(mut self, orbits: Vec<u32>) -> Self {
        debug_assert_eq!(orbits.len(), self.universe);
        self.orbits = Some(orbits);
        self
    }

    /// The group whose left multiplication permutes the shattered sets of
    /// this family, with automorphism orbit labels when known.
    pub(crate) fn symmetry(&self) -> Option<(&FiniteGroup, Option<&[u32]>)> {
        match self.kind {
            FamilyKind::LeftTranslates => self
                .group
                .as_ref()
                .map(|g| (g, self.orbits.as_deref())),
            _ => None,
        }
    }
}

fn translate_unchecked(g: &FiniteGroup, t: usize, a: &Subset) -> Subset {
    let mut out = Subset::empty(g.order());
    for x in a.iter() {
        out.insert(g.mul(t, x));
    }
    out
}

/// `tA = {t·x : x ∈ A}`.
pub fn left_translate(g: &FiniteGroup, t: usize, a: &Subset) -> Result<Subset> {
    VcError::check_len(g.order(), a.universe())?;
    if t >= g.order() {
        return Err(VcError::Domain(format!(
            "element {t} outside group of order {}",
            g.order()
        )));
    }
    Ok(translate_unchecked(g, t, a))
}

fn probe_elements(f: &TranslateFamily, u: &Subset) -> Result<Vec<usize>> {
    VcError::check_len(f.universe(), u.universe())?;
    let elems = u.to_vec();
    if elems.len() > MAX_PROBE {
        return Err(VcError::Capacity(format!(
            "probe set of size {} exceeds trace width {MAX_PROBE}",
            elems.len()
        )));
    }
    Ok(elems)
}

fn trace_of(member: &Subset, probe: &[usize]) -> Trace {
    Trace(
        probe
            .iter()
            .enumerate()
            .filter(|&(_, &x)| member.contains(x))
            .fold(0, |m, (i, _)| m | 1 << i),
    )
}

/// The distinct traces `F ∩ U` over all members `F`.
pub fn restriction(f: &TranslateFamily, u: &Subset) -> Result<BTreeSet<Trace>> {
    let probe = probe_elements(f, u)?;
    Ok(f.members().iter().map(|m| trace_of(m, &probe)).collect())
}

/// Whether every subset of `u` is a trace.
pub fn is_shattered(f: &TranslateFamily, u: &Subset) -> Result<bool> {
    let traces = restriction(f, u)?;
    Ok(traces.len() == 1usize << u.count())
}

/// Whether some member `F` has `F ∩ U = K`.
pub fn cuts_out(f: &TranslateFamily, u: &Subset, k: &Subset) -> Result<bool> {
    VcError::check_len(f.universe(), u.universe())?;
    VcError::check_len(f.universe(), k.universe())?;
    if !k.is_subset(u)? {
        return Err(VcError::precondition("cut-out target must be a subset of U"));
    }
    Ok(f
        .members()
        .iter()
        .any(|m| m.intersection(u).is_ok_and(|t| &t == k)))
}

/// `{tA ∩ A : t ∈ A·A⁻¹}` with duplicate members removed.
pub fn sisask_family(g: &FiniteGroup, a: &Subset) -> Result<TranslateFamily> {
    VcError::check_len(g.order(), a.universe())?;
    if a.is_empty() {
        return Err(VcError::precondition("A·A⁻¹ is empty for empty A"));
    }
    let mut shifts = Subset::empty(g.order());
    for x in a.iter() {
        for y in a.iter() {
            shifts.insert(g.mul(x, g.inv(y)));
        }
    }
    let mut seen = HashSet::new();
    let members = shifts
        .iter()
        .map(|t| {
            translate_unchecked(g, t, a)
                .intersection(a)
                .expect("same universe")
        })
        .filter(|m| seen.insert(m.clone()))
        .collect();
    TranslateFamily::explicit(g.order(), members, FamilyKind::Sisask)
}
