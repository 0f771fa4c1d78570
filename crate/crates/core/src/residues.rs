//! Primality, r-th power residues modulo a prime, Paley digraphs and the
//! power-residue VC experiment.

use rayon::prelude::*;

use crate::cayley::{cayley_digraph, Digraph};
use crate::error::{Result, VcError};
use crate::family::TranslateFamily;
use crate::experiments::{log_base, sort_records, ExperimentRecord, Model};
use crate::group::FiniteGroup;
use crate::subset::Subset;
use crate::vc::{vc_dim_with, SearchOptions};

/// Largest prime the residue experiment accepts by default.
pub const DEFAULT_PRIME_CAP: u64 = 1009;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    BASES.iter().all(|&a| {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `{x^r mod n : 1 <= x < n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSet {
    pub modulus: u64,
    pub exponent: u64,
    /// `gcd(r, n - 1)`; the r-th and this power give the same set.
    pub effective_exponent: u64,
    pub members: Subset,
}

impl ResidueSet {
    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_prime(n: u64) -> Result<()> {
    if is_prime(n) {
        Ok(())
    } else {
        Err(VcError::precondition(format!("{n} is not prime")))
    }
}

pub fn power_residues(n: u64, r: u64) -> Result<ResidueSet> {
    check_prime(n)?;
    if r < 2 {
        return Err(VcError::Domain(format!("exponent {r} is below 2")));
    }
    let size = usize::try_from(n)
        .ok()
        .filter(|&s| s <= crate::group::MAX_ORDER)
        .ok_or_else(|| VcError::Capacity(format!("modulus {n} too large to enumerate")))?;
    let mut members = Subset::empty(size);
    for x in 1..n {
        members.insert(pow_mod(x, r, n) as usize);
    }
    Ok(ResidueSet {
        modulus: n,
        exponent: r,
        effective_exponent: gcd(r, n - 1),
        members,
    })
}

/// Cayley digraph of `Z/nZ` generated by the quadratic residues.
pub fn paley_digraph(n: u64) -> Result<Digraph> {
    power_residues_digraph(n, 2)
}

pub fn power_residues_digraph(n: u64, r: u64) -> Result<Digraph> {
    let qr = power_residues(n, r)?;
    cayley_digraph(&FiniteGroup::cyclic(n as usize)?, &qr.members)
}

/// Neighborhood family of the r-th power residue digraph, built as the
/// translate family `{t + H}` of the residue subgroup `H`. Multiplying by any
/// `q ∈ H` fixes `H`, so the cosets of `H` in the unit group are orbits of
/// automorphisms fixing the base set.
pub fn residue_family(n: u64, r: u64) -> Result<TranslateFamily> {
    let h = power_residues(n, r)?;
    let size = n as usize;
    let mut orbit = vec![u32::MAX; size];
    let mut next = 0;
    for x in 1..size {
        if orbit[x] == u32::MAX {
            for q in h.members.iter() {
                orbit[mul_mod(q as u64, x as u64, n) as usize] = next;
            }
            next += 1;
        }
    }
    let g = FiniteGroup::cyclic(size)?;
    Ok(TranslateFamily::left_translates(&g, &h.members)?.with_automorphism_orbits(orbit))
}

/// One prime of the residue experiment, normalized both by `log_2 N` and by
/// `log_r N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueRecord {
    pub n: u64,
    pub r: u64,
    pub vcdim: std::result::Result<usize, String>,
    pub ratio_log2: Option<f64>,
    pub ratio_log_r: Option<f64>,
}

impl ResidueRecord {
    /// Row in the experiments table: model `power-residue`, `r` the
    /// normalizing base, `p = 1/r` and seed and trial zero.
    pub fn to_experiment_record(&self) -> ExperimentRecord {
        let base = self.r as f64;
        ExperimentRecord::new(
            Model::PowerResidue,
            &format!("C{}", self.n),
            self.n as usize,
            1.0 / base,
            base,
            0,
            0,
            self.vcdim.clone(),
        )
    }
}

/// For each prime `N`, the exact VC-dimension of the neighborhood family of
/// the r-th power residue Cayley digraph. Bad inputs give error records and
/// the run continues. Output is sorted by `N`.
pub fn residue_experiment(
    primes: &[u64],
    r: u64,
    require_congruence: bool,
    opts: SearchOptions,
) -> Result<Vec<ResidueRecord>> {
    if r < 2 {
        return Err(VcError::Domain(format!("exponent {r} is below 2")));
    }
    let mut out: Vec<ResidueRecord> = primes
        .par_iter()
        .map(|&n| {
            let vcdim = residue_vc(n, r, require_congruence, opts).map_err(|e| e.code().to_string());
            let ratios = vcdim.as_ref().ok().map(|&v| {
                (
                    v as f64 / log_base(2.0, n as usize),
                    v as f64 / log_base(r as f64, n as usize),
                )
            });
            ResidueRecord {
                n,
                r,
                vcdim,
                ratio_log2: ratios.map(|t| t.0),
                ratio_log_r: ratios.map(|t| t.1),
            }
        })
        .collect();
    out.sort_by_key(|rec| rec.n);
    Ok(out)
}

fn residue_vc(n: u64, r: u64, require_congruence: bool, opts: SearchOptions) -> Result<usize> {
    check_prime(n)?;
    if require_congruence && !(n - 1).is_multiple_of(r) {
        return Err(VcError::precondition(format!("{n} is not 1 mod {r}")));
    }
    let dim = vc_dim_with(&residue_family(n, r)?, opts)?.dimension;
    if dim > n.ilog2() as usize {
        return Err(VcError::BoundViolated(format!("vcdim {dim} above log2 {n}")));
    }
    Ok(dim)
}

/// Residue records as experiment rows, sorted by `N`.
pub fn residue_rows(records: &[ResidueRecord]) -> Vec<ExperimentRecord> {
    let mut rows: Vec<_> = records.iter().map(ResidueRecord::to_experiment_record).collect();
    sort_records(&mut rows);
    rows
}
