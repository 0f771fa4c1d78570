//! Finite groups on dense element indices `0..N`.
//!
//! Structured families (cyclic, dihedral, direct products) compute the
//! multiplication on the fly; groups imported from a Cayley table keep the
//! full `N x N` table.

use std::fmt;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Axiom, Result, VcError};
use crate::sampling::SeededRng;

/// Largest supported group order.
pub const MAX_ORDER: usize = 1 << 20;

/// Above this order, associativity of an imported table is checked on a
/// fixed pseudo-random sample of triples instead of exhaustively.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 256;
const SAMPLED_TRIPLES: usize = 1 << 17;

#[derive(Clone)]
enum Repr {
    Cyclic,
    /// `n` rotations followed by `n` reflections `s r^i`.
    Dihedral(usize),
    Product(Box<FiniteGroup>, Box<FiniteGroup>),
    Table { mul: Vec<u32>, inv: Vec<u32> },
}

#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    descriptor: String,
    repr: Repr,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.descriptor, self.order)
    }
}

impl PartialEq for FiniteGroup {
    /// Same descriptor and order. Descriptors are canonical, so two groups
    /// compare equal iff they share one multiplication on indices.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.descriptor == other.descriptor
    }
}

impl FiniteGroup {
    /// `Z/nZ` under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(VcError::InvalidOrder {
                order: n,
                reason: "cyclic group needs n >= 1",
            });
        }
        check_cap(n)?;
        Ok(FiniteGroup {
            order: n,
            identity: 0,
            descriptor: format!("C{n}"),
            repr: Repr::Cyclic,
        })
    }

    /// Dihedral group of order `2n`. Indices `0..n` are the rotations `r^i`,
    /// indices `n..2n` the reflections `s r^i`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(VcError::InvalidOrder {
                order: 2 * n,
                reason: "dihedral group needs n >= 3",
            });
        }
        let order = n
            .checked_mul(2)
            .ok_or_else(|| VcError::Capacity(format!("dihedral order 2*{n} overflows")))?;
        check_cap(order)?;
        Ok(FiniteGroup {
            order,
            identity: 0,
            descriptor: format!("D{n}"),
            repr: Repr::Dihedral(n),
        })
    }

    /// Direct product `g x h`; the pair `(a, b)` has index `a * |h| + b`.
    ///
    /// The encoding is associative, so `(g x h) x k` and `g x (h x k)` index
    /// elements identically and share the descriptor `g x h x k`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let order = g
            .order
            .checked_mul(h.order)
            .filter(|&n| n <= MAX_ORDER)
            .ok_or_else(|| {
                VcError::Capacity(format!(
                    "product order {} x {} exceeds {MAX_ORDER}",
                    g.order, h.order
                ))
            })?;
        Ok(FiniteGroup {
            order,
            identity: g.identity * h.order + h.identity,
            descriptor: format!("{}x{}", g.descriptor, h.descriptor),
            repr: Repr::Product(Box::new(g.clone()), Box::new(h.clone())),
        })
    }

    /// Validates a multiplication table (`table[i][j] = i * j`) and wraps it.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(VcError::Validation {
                axiom: Axiom::Shape,
                witness: [0, 0, 0],
            });
        }
        check_cap(n)?;
        if n.checked_mul(n).is_none_or(|sq| sq > u32::MAX as usize) {
            return Err(VcError::Capacity(format!("table of order {n} too large")));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(VcError::Validation {
                    axiom: Axiom::Shape,
                    witness: [i, row.len(), n],
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(VcError::Validation {
                        axiom: Axiom::Shape,
                        witness: [i, j, v],
                    });
                }
                mul.push(v as u32);
            }
        }

        // Latin square: rows, then columns.
        let mut seen = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let v = mul[i * n + j] as usize;
                if seen[v] != usize::MAX && seen[v] / n == i {
                    return Err(VcError::Validation {
                        axiom: Axiom::LatinSquare,
                        witness: [i, seen[v] % n, j],
                    });
                }
                seen[v] = i * n + j;
            }
        }
        seen.fill(usize::MAX);
        for j in 0..n {
            for i in 0..n {
                let v = mul[i * n + j] as usize;
                if seen[v] != usize::MAX && seen[v] / n == j {
                    return Err(VcError::Validation {
                        axiom: Axiom::LatinSquare,
                        witness: [seen[v] % n, i, j],
                    });
                }
                seen[v] = j * n + i;
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e * n + a] as usize == a && mul[a * n + e] as usize == a))
            .ok_or(VcError::Validation {
                axiom: Axiom::Identity,
                witness: [0, 0, 0],
            })?;

        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[a * n + b] as usize == identity)
                .ok_or(VcError::Validation {
                    axiom: Axiom::Inverse,
                    witness: [a, identity, 0],
                })?;
            if mul[b * n + a] as usize != identity {
                return Err(VcError::Validation {
                    axiom: Axiom::Inverse,
                    witness: [a, b, identity],
                });
            }
            inv[a] = b as u32;
        }

        let m = |a: usize, b: usize| mul[a * n + b] as usize;
        let assoc = |a: usize, b: usize, c: usize| m(m(a, b), c) == m(a, m(b, c));
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(VcError::Validation {
                                axiom: Axiom::Associativity,
                                witness: [a, b, c],
                            });
                        }
                    }
                }
            }
        } else {
            let mut rng = SeededRng::new(0x7_ab1e_a55c);
            for _ in 0..SAMPLED_TRIPLES {
                let [a, b, c] = [0; 3].map(|_| rng.below(n as u64) as usize);
                if !assoc(a, b, c) {
                    return Err(VcError::Validation {
                        axiom: Axiom::Associativity,
                        witness: [a, b, c],
                    });
                }
            }
        }

        let descriptor = format!("table:{}", table_hash(&mul));
        Ok(FiniteGroup {
            order: n,
            identity,
            descriptor,
            repr: Repr::Table { mul, inv },
        })
    }

    /// Parses the text format: `N` on the first line, then `N` rows of `N`
    /// whitespace-separated indices.
    pub fn parse_cayley_table(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| VcError::Parse("empty cayley table".into()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| VcError::Parse(format!("bad order line {header:?}")))?;
        check_cap(n)?;
        let mut table = Vec::with_capacity(n);
        for (row, line) in lines.enumerate() {
            if row >= n {
                return Err(VcError::Parse(format!("more than {n} table rows")));
            }
            let entries = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| VcError::Parse(format!("row {row}: bad entry {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(entries);
        }
        if table.len() != n {
            return Err(VcError::Parse(format!(
                "expected {n} table rows, found {}",
                table.len()
            )));
        }
        FiniteGroup::from_cayley_table(&table)
    }

    pub fn load_cayley_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| VcError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        FiniteGroup::parse_cayley_table(&text)
    }

    /// Serializes in the format read by [`FiniteGroup::parse_cayley_table`].
    pub fn to_cayley_text(&self) -> String {
        let n = self.order;
        let mut out = format!("{n}\n");
        for a in 0..n {
            let row: Vec<String> = (0..n).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses descriptors such as `C12`, `D5`, `C3xC4` or `D3xC2`.
    pub fn from_descriptor(desc: &str) -> Result<Self> {
        let mut group: Option<FiniteGroup> = None;
        for factor in desc.trim().split(['x', 'X']) {
            let f = parse_factor(factor)?;
            group = Some(match group {
                None => f,
                Some(g) => FiniteGroup::direct_product(&g, &f)?,
            });
        }
        group.ok_or_else(|| VcError::Parse(format!("empty group descriptor {desc:?}")))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        match &self.repr {
            Repr::Cyclic => {
                let s = a + b;
                if s >= self.order {
                    s - self.order
                } else {
                    s
                }
            }
            &Repr::Dihedral(n) => match (a < n, b < n) {
                // r^i r^j = r^(i+j)
                (true, true) => (a + b) % n,
                // r^i s r^j = s r^(j-i)
                (true, false) => n + (b - n + n - a) % n,
                // s r^i r^j = s r^(i+j)
                (false, true) => n + (a - n + b) % n,
                // s r^i s r^j = r^(j-i)
                (false, false) => (b + n - a) % n,
            },
            Repr::Product(g, h) => {
                let k = h.order;
                g.mul(a / k, b / k) * k + h.mul(a % k, b % k)
            }
            Repr::Table { mul, .. } => mul[a * self.order + b] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Cyclic => (self.order - a) % self.order,
            &Repr::Dihedral(n) => {
                if a < n {
                    (n - a) % n
                } else {
                    a
                }
            }
            Repr::Product(g, h) => {
                let k = h.order;
                g.inv(a / k) * k + h.inv(a % k)
            }
            Repr::Table { inv, .. } => inv[a] as usize,
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Exact commutativity test.
    pub fn is_abelian(&self) -> bool {
        match &self.repr {
            Repr::Cyclic => true,
            Repr::Dihedral(_) => false,
            Repr::Product(g, h) => g.is_abelian() && h.is_abelian(),
            Repr::Table { .. } => self.non_commuting_pair().is_none(),
        }
    }

    /// First pair `(a, b)` with `ab != ba` in row-major order.
    pub fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        (0..self.order)
            .flat_map(|a| (a + 1..self.order).map(move |b| (a, b)))
            .find(|&(a, b)| self.mul(a, b) != self.mul(b, a))
    }

    /// Re-checks every group axiom on this instance: Latin square, identity,
    /// inverses and associativity (exhaustive up to order 64, sampled beyond).
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.order;
        let e = self.identity;
        let mut row = vec![false; n];
        let mut col = vec![false; n];
        for a in 0..n {
            row.fill(false);
            col.fill(false);
            for b in 0..n {
                let r = self.mul(a, b);
                let c = self.mul(b, a);
                if std::mem::replace(&mut row[r], true) || std::mem::replace(&mut col[c], true) {
                    return Err(VcError::Validation {
                        axiom: Axiom::LatinSquare,
                        witness: [a, b, r],
                    });
                }
            }
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(VcError::Validation {
                    axiom: Axiom::Identity,
                    witness: [e, a, 0],
                });
            }
            let ia = self.inv(a);
            if self.mul(a, ia) != e || self.mul(ia, a) != e {
                return Err(VcError::Validation {
                    axiom: Axiom::Inverse,
                    witness: [a, ia, e],
                });
            }
        }
        let assoc = |a, b, c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(VcError::Validation {
                                axiom: Axiom::Associativity,
                                witness: [a, b, c],
                            });
                        }
                    }
                }
            }
        } else {
            let mut rng = SeededRng::new(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                let [a, b, c] = [0; 3].map(|_| rng.below(n as u64) as usize);
                if !assoc(a, b, c) {
                    return Err(VcError::Validation {
                        axiom: Axiom::Associativity,
                        witness: [a, b, c],
                    });
                }
            }
        }
        Ok(())
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        Err(VcError::Capacity(format!(
            "group order {n} exceeds supported maximum {MAX_ORDER}"
        )))
    } else {
        Ok(())
    }
}

fn parse_factor(factor: &str) -> Result<FiniteGroup> {
    let bad = || VcError::Parse(format!("bad group factor {factor:?} (expected C<n> or D<n>)"));
    let mut chars = factor.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    match kind {
        'C' | 'c' => FiniteGroup::cyclic(n),
        'D' | 'd' => FiniteGroup::dihedral(n),
        _ => Err(bad()),
    }
}

fn table_hash(mul: &[u32]) -> String {
    let mut hasher = Sha256::new();
    for v in mul {
        hasher.update(v.to_le_bytes());
    }
    hasher.finalize()[..8]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
