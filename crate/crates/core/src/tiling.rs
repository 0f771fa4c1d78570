//! Greedy disjoint translates and greedy covers by right translates.
//!
//! Both constructions scan candidates in ascending element order and break
//! ties toward the smallest index, so outputs are reproducible. Each result
//! carries its certified bound and is checked against it before returning.

use crate::error::{Result, VcError};
use crate::family::left_translate;
use crate::group::FiniteGroup;
use crate::subset::Subset;

/// Representatives `s_1..s_l` whose left translates `s_i U` are pairwise
/// disjoint and maximal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub reps: Vec<usize>,
    pub probe: Subset,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// The guaranteed lower bound `N / k^2`.
    pub fn lower_bound(&self) -> f64 {
        let n = self.probe.universe() as f64;
        let k = self.probe.count() as f64;
        n / (k * k)
    }

    /// Representatives as a subset of the group.
    pub fn rep_set(&self) -> Subset {
        Subset::from_indices(self.probe.universe(), self.reps.iter().copied())
            .expect("representatives are group elements")
    }
}

/// Representatives `t_1..t_m` with `S t_1 ∪ .. ∪ S t_m = G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub reps: Vec<usize>,
    pub base: Subset,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// `(N / l)(ln l + 1)` with `l = |S|`.
    pub fn upper_bound(&self) -> f64 {
        cover_bound(self.base.universe(), self.base.count())
    }
}

pub(crate) fn cover_bound(n: usize, l: usize) -> f64 {
    let l = l as f64;
    n as f64 / l * (l.ln() + 1.0)
}

/// `AB = {a·b : a ∈ A, b ∈ B}`.
pub fn product_set(g: &FiniteGroup, a: &Subset, b: &Subset) -> Result<Subset> {
    VcError::check_len(g.order(), a.universe())?;
    VcError::check_len(g.order(), b.universe())?;
    let mut out = Subset::empty(g.order());
    for x in a.iter() {
        for y in b.iter() {
            out.insert(g.mul(x, y));
        }
    }
    Ok(out)
}

/// `A⁻¹`.
pub fn inverse_set(g: &FiniteGroup, a: &Subset) -> Result<Subset> {
    VcError::check_len(g.order(), a.universe())?;
    Subset::from_indices(g.order(), a.iter().map(|x| g.inv(x)))
}

/// `Sx = {s·x : s ∈ S}`.
pub fn right_translate(g: &FiniteGroup, s: &Subset, x: usize) -> Result<Subset> {
    VcError::check_len(g.order(), s.universe())?;
    Subset::from_indices(g.order(), s.iter().map(|y| g.mul(y, x)))
}

/// Maximal family of pairwise disjoint left translates of `u`, built by
/// accepting each `s` in index order whose translate misses all earlier ones.
pub fn greedy_disjoint_translates(g: &FiniteGroup, u: &Subset) -> Result<Packing> {
    VcError::check_len(g.order(), u.universe())?;
    if u.is_empty() {
        return Err(VcError::precondition("cannot pack translates of the empty set"));
    }
    let mut covered = Subset::empty(g.order());
    let mut reps = Vec::new();
    for s in g.elements() {
        let su = left_translate(g, s, u)?;
        if su.is_disjoint(&covered)? {
            covered.union_with(&su)?;
            reps.push(s);
        }
    }
    let packing = Packing {
        reps,
        probe: u.clone(),
    };
    // |S| >= N / |UU⁻¹| >= N / k^2
    let k = u.count();
    if packing.len() * k * k < g.order() {
        return Err(VcError::BoundViolated(format!(
            "packing of {} translates below N/k^2 = {}",
            packing.len(),
            packing.lower_bound()
        )));
    }
    Ok(packing)
}

/// Greedy cover of `G` by right translates `S t`: each round takes the `t`
/// covering the most uncovered elements, smallest index on ties.
pub fn greedy_cover(g: &FiniteGroup, s: &Subset) -> Result<Cover> {
    VcError::check_len(g.order(), s.universe())?;
    if s.is_empty() {
        return Err(VcError::precondition("the empty set covers nothing"));
    }
    let n = g.order();
    let members = s.to_vec();
    // gain[t] = |St ∩ uncovered|; y ∈ St iff t = x⁻¹y for some x ∈ S.
    let mut gain = vec![members.len(); n];
    let mut uncovered = Subset::full(n);
    let mut left = n;
    let mut reps = Vec::new();
    while left > 0 {
        let (t, best) = gain
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (t, &v)| if v > acc.1 { (t, v) } else { acc });
        debug_assert!(best > 0, "some translate always reaches an uncovered element");
        reps.push(t);
        for &x in &members {
            let y = g.mul(x, t);
            if uncovered.contains(y) {
                uncovered.remove(y);
                left -= 1;
                for &z in &members {
                    gain[g.mul(g.inv(z), y)] -= 1;
                }
            }
        }
    }
    let cover = Cover {
        reps,
        base: s.clone(),
    };
    check_cover(g, &cover)?;
    if cover.len() as f64 > cover.upper_bound() + 1e-9 {
        return Err(VcError::BoundViolated(format!(
            "greedy cover uses {} translates, bound is {}",
            cover.len(),
            cover.upper_bound()
        )));
    }
    Ok(cover)
}

/// Checks that the right translates of `cover.base` by `cover.reps` exhaust `G`.
pub fn check_cover(g: &FiniteGroup, cover: &Cover) -> Result<()> {
    let mut union = Subset::empty(g.order());
    for &t in &cover.reps {
        union.union_with(&right_translate(g, &cover.base, t)?)?;
    }
    if union.is_full() {
        Ok(())
    } else {
        Err(VcError::BoundViolated(format!(
            "{} elements left uncovered",
            g.order() - union.count()
        )))
    }
}

/// For abelian `G`: with `S` the greedy packing of `u` and `V = U U⁻¹`,
/// every element lies in `S V`, so `T = V⁻¹` covers `G` together with `S`
/// and has at most `k^2` elements.
pub fn abelian_cover_shortcut(g: &FiniteGroup, u: &Subset) -> Result<Cover> {
    if !g.is_abelian() {
        return Err(VcError::precondition(format!(
            "shortcut cover needs an abelian group, {} is not",
            g.descriptor()
        )));
    }
    let packing = greedy_disjoint_translates(g, u)?;
    let v = product_set(g, u, &inverse_set(g, u)?)?;
    let t = inverse_set(g, &v)?;
    let cover = Cover {
        reps: t.to_vec(),
        base: packing.rep_set(),
    };
    check_cover(g, &cover)?;
    let k = u.count();
    if cover.len() > k * k {
        return Err(VcError::BoundViolated(format!(
            "|T| = {} exceeds k^2 = {}",
            cover.len(),
            k * k
        )));
    }
    Ok(cover)
}
