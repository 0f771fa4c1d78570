//! Seeded Monte Carlo runs over random subsets, their summaries, the
//! cut-out probability estimate, and CSV/JSON serialization.
//!
//! Records are sorted by `(N, group, p, model, trial)` before they are
//! returned, so output never depends on thread scheduling. Trial `i` at order
//! `N` always samples from `SeededRng::substream(base_seed, &[N, i])`.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Result, VcError};
use crate::family::TranslateFamily;
use crate::group::FiniteGroup;
use crate::sampling::{bernoulli_subset, symmetrize, uniform_fixed_size, SeededRng};
use crate::subset::Subset;
use crate::tiling::greedy_disjoint_translates;
use crate::vc::{vc_dim_with, SearchOptions};

pub const CSV_HEADER: [&str; 11] = [
    "model", "group", "N", "p", "r", "seed", "trial", "vcdim", "log_r_N", "band", "in_band",
];

const NA: &str = "n/a";
const ERROR_PREFIX: &str = "error:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    Bernoulli,
    FixedSize,
    FixedSizeSymmetric,
    PowerResidue,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Bernoulli => "bernoulli",
            Model::FixedSize => "fixed-size",
            Model::FixedSizeSymmetric => "fixed-size-symmetric",
            Model::PowerResidue => "power-residue",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = VcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bernoulli" => Ok(Model::Bernoulli),
            "fixed-size" => Ok(Model::FixedSize),
            "fixed-size-symmetric" => Ok(Model::FixedSizeSymmetric),
            "power-residue" => Ok(Model::PowerResidue),
            _ => Err(VcError::Parse(format!("unknown model {s:?}"))),
        }
    }
}

/// Family of groups indexed by order: `C` gives `C_N`, `D` gives `D_{N/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFamily {
    Cyclic,
    Dihedral,
}

impl GroupFamily {
    pub fn make(self, n: usize) -> Result<FiniteGroup> {
        match self {
            GroupFamily::Cyclic => FiniteGroup::cyclic(n),
            GroupFamily::Dihedral if n.is_multiple_of(2) => FiniteGroup::dihedral(n / 2),
            GroupFamily::Dihedral => Err(VcError::InvalidOrder {
                order: n,
                reason: "dihedral groups have even order",
            }),
        }
    }
}

impl FromStr for GroupFamily {
    type Err = VcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(GroupFamily::Cyclic),
            "D" | "d" => Ok(GroupFamily::Dihedral),
            _ => Err(VcError::Parse(format!("unknown group family {s:?}"))),
        }
    }
}

/// One row of the experiments table. `vcdim` holds the error code when the
/// trial failed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub model: Model,
    pub group: String,
    pub n: usize,
    pub p: f64,
    pub r: f64,
    pub seed: u64,
    pub trial: u64,
    pub vcdim: std::result::Result<usize, String>,
    pub log_r_n: f64,
    pub band: Option<f64>,
    pub in_band: Option<bool>,
}

/// `1 / min(p, 1 - p)`.
pub fn r_of(p: f64) -> f64 {
    1.0 / p.min(1.0 - p)
}

/// `log_r N`.
pub fn log_base(r: f64, n: usize) -> f64 {
    (n as f64).ln() / r.ln()
}

/// Half-width `10 log_r log_r N`, undefined when `log_r N <= 1`.
pub fn band_half_width(r: f64, n: usize) -> Option<f64> {
    let l = log_base(r, n);
    (l > 1.0).then(|| 10.0 * l.ln() / r.ln())
}

impl ExperimentRecord {
    /// Fills the derived columns from `p` (or an explicit `r`) and the outcome.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        model: Model,
        group: &str,
        n: usize,
        p: f64,
        r: f64,
        seed: u64,
        trial: u64,
        vcdim: std::result::Result<usize, String>,
    ) -> Self {
        let log_r_n = log_base(r, n);
        let band = band_half_width(r, n);
        let in_band = match (&vcdim, band) {
            (Ok(v), Some(b)) => Some((*v as f64 - log_r_n).abs() <= b),
            _ => None,
        };
        ExperimentRecord {
            model,
            group: group.to_string(),
            n,
            p,
            r,
            seed,
            trial,
            vcdim,
            log_r_n,
            band,
            in_band,
        }
    }

    pub fn is_error(&self) -> bool {
        self.vcdim.is_err()
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.group.cmp(&other.group))
            .then_with(|| self.p.total_cmp(&other.p))
            .then_with(|| self.model.cmp(&other.model))
            .then_with(|| self.trial.cmp(&other.trial))
    }

    fn to_row(&self) -> [String; 11] {
        [
            self.model.to_string(),
            self.group.clone(),
            self.n.to_string(),
            self.p.to_string(),
            self.r.to_string(),
            self.seed.to_string(),
            self.trial.to_string(),
            match &self.vcdim {
                Ok(v) => v.to_string(),
                Err(code) => format!("{ERROR_PREFIX}{code}"),
            },
            self.log_r_n.to_string(),
            self.band.map_or_else(|| NA.to_string(), |b| b.to_string()),
            self.in_band.map_or_else(|| NA.to_string(), |b| b.to_string()),
        ]
    }

    fn from_row(row: &csv::StringRecord) -> Result<Self> {
        if row.len() != CSV_HEADER.len() {
            return Err(VcError::Parse(format!(
                "expected {} fields, got {}",
                CSV_HEADER.len(),
                row.len()
            )));
        }
        let f = |i: usize| &row[i];
        let vcdim = match f(7).strip_prefix(ERROR_PREFIX) {
            Some(code) => Err(code.to_string()),
            None => Ok(parse_field(f(7), "vcdim")?),
        };
        Ok(ExperimentRecord {
            model: f(0).parse()?,
            group: f(1).to_string(),
            n: parse_field(f(2), "N")?,
            p: parse_field(f(3), "p")?,
            r: parse_field(f(4), "r")?,
            seed: parse_field(f(5), "seed")?,
            trial: parse_field(f(6), "trial")?,
            vcdim,
            log_r_n: parse_field(f(8), "log_r_N")?,
            band: parse_optional(f(9), "band")?,
            in_band: parse_optional(f(10), "in_band")?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model.as_str(),
            "group": self.group,
            "N": self.n,
            "p": self.p,
            "r": finite_or_null(self.r),
            "seed": self.seed,
            "trial": self.trial,
            "vcdim": match &self.vcdim {
                Ok(v) => json!(v),
                Err(code) => json!(format!("{ERROR_PREFIX}{code}")),
            },
            "log_r_N": self.log_r_n,
            "band": self.band,
            "in_band": self.in_band,
        })
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn parse_field<T: FromStr>(s: &str, name: &str) -> Result<T> {
    s.parse()
        .map_err(|_| VcError::Parse(format!("bad {name} field {s:?}")))
}

fn parse_optional<T: FromStr>(s: &str, name: &str) -> Result<Option<T>> {
    if s == NA {
        Ok(None)
    } else {
        parse_field(s, name).map(Some)
    }
}

pub(crate) fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| a.sort_key(b));
}

fn sample(g: &FiniteGroup, model: Model, p: f64, rng: &mut SeededRng) -> Result<Subset> {
    match model {
        Model::Bernoulli => bernoulli_subset(g, p, rng),
        Model::FixedSize | Model::FixedSizeSymmetric => {
            if !(0.0..=1.0).contains(&p) {
                return Err(VcError::Domain(format!("probability {p} outside [0, 1]")));
            }
            let d = (p * g.order() as f64).round() as usize;
            let a = uniform_fixed_size(g, d, rng)?;
            if model == Model::FixedSizeSymmetric {
                symmetrize(g, &a)
            } else {
                Ok(a)
            }
        }
        Model::PowerResidue => Err(VcError::precondition(
            "power-residue records come from the residue experiment",
        )),
    }
}

fn run_trial(g: &FiniteGroup, model: Model, p: f64, rng: &mut SeededRng, opts: SearchOptions) -> Result<usize> {
    let a = sample(g, model, p, rng)?;
    let f = TranslateFamily::left_translates(g, &a)?;
    let out = vc_dim_with(&f, opts)?;
    let cap = g.order().ilog2() as usize;
    if out.dimension > cap {
        return Err(VcError::BoundViolated(format!(
            "vcdim {} exceeds log2 {} = {cap}",
            out.dimension,
            g.order()
        )));
    }
    Ok(out.dimension)
}

/// Samples `A` for every order in `sizes` and trial in `0..trials`, computes
/// the exact VC-dimension of its translate family, and records the result.
/// Per-trial failures (search budget, deadline) become error records.
pub fn run_lln(
    family: GroupFamily,
    sizes: &[usize],
    p: f64,
    trials: u64,
    base_seed: u64,
    model: Model,
    opts: SearchOptions,
) -> Result<Vec<ExperimentRecord>> {
    if trials == 0 {
        return Err(VcError::precondition("at least one trial is required"));
    }
    if model == Model::PowerResidue {
        return Err(VcError::precondition(
            "power-residue records come from the residue experiment",
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(VcError::Domain(format!("probability {p} outside [0, 1]")));
    }
    let groups = sizes
        .iter()
        .map(|&n| family.make(n))
        .collect::<Result<Vec<_>>>()?;
    let r = r_of(p);
    let jobs: Vec<(&FiniteGroup, u64)> = groups
        .iter()
        .flat_map(|g| (0..trials).map(move |i| (g, i)))
        .collect();
    let mut records: Vec<ExperimentRecord> = jobs
        .into_par_iter()
        .map(|(g, i)| {
            let mut rng = SeededRng::substream(base_seed, &[g.order() as u64, i]);
            let vcdim = run_trial(g, model, p, &mut rng, opts).map_err(|e| e.code().to_string());
            ExperimentRecord::new(model, g.descriptor(), g.order(), p, r, base_seed, i, vcdim)
        })
        .collect();
    sort_records(&mut records);
    Ok(records)
}

/// Aggregates over one `(group, N, p, model)` cell. Error records count
/// toward `trials` and `errors` only; real-valued statistics over zero
/// successful trials are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub model: Model,
    pub group: String,
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub errors: usize,
    pub mean: f64,
    /// Population standard deviation (divides by the number of values).
    pub sd: f64,
    pub mean_ratio: f64,
    /// `count(in_band = true) / trials`; `None` when the band is undefined.
    pub fraction_in_band: Option<f64>,
    pub min: Option<usize>,
    pub max: Option<usize>,
    /// Counts of each value in `0..=floor(log2 N)`.
    pub histogram: Vec<usize>,
}

pub const SUMMARY_HEADER: [&str; 13] = [
    "model",
    "group",
    "N",
    "p",
    "trials",
    "errors",
    "mean",
    "sd",
    "mean_ratio",
    "fraction_in_band",
    "min",
    "max",
    "histogram",
];

impl Summary {
    fn to_row(&self) -> [String; 13] {
        let opt = |v: Option<usize>| v.map_or_else(|| NA.to_string(), |x| x.to_string());
        [
            self.model.to_string(),
            self.group.clone(),
            self.n.to_string(),
            self.p.to_string(),
            self.trials.to_string(),
            self.errors.to_string(),
            self.mean.to_string(),
            self.sd.to_string(),
            self.mean_ratio.to_string(),
            self.fraction_in_band
                .map_or_else(|| NA.to_string(), |f| f.to_string()),
            opt(self.min),
            opt(self.max),
            self.histogram
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(";"),
        ]
    }

    pub fn to_json(&self) -> Value {
        let real = |x: f64| if x.is_nan() { Value::Null } else { json!(x) };
        json!({
            "model": self.model.as_str(),
            "group": self.group,
            "N": self.n,
            "p": self.p,
            "trials": self.trials,
            "errors": self.errors,
            "mean": real(self.mean),
            "sd": real(self.sd),
            "mean_ratio": real(self.mean_ratio),
            "fraction_in_band": self.fraction_in_band,
            "min": self.min,
            "max": self.max,
            "histogram": self.histogram,
        })
    }
}

/// Groups records by `(group, N, p, model)` and aggregates each cell.
pub fn summarize(records: &[ExperimentRecord]) -> Result<Vec<Summary>> {
    if records.is_empty() {
        return Err(VcError::precondition("nothing to summarize"));
    }
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let same_cell = |a: &ExperimentRecord, b: &ExperimentRecord| {
        a.group == b.group && a.n == b.n && a.p.total_cmp(&b.p).is_eq() && a.model == b.model
    };
    Ok(sorted
        .chunk_by(same_cell)
        .map(summarize_cell)
        .collect())
}

fn summarize_cell(cell: &[ExperimentRecord]) -> Summary {
    let first = &cell[0];
    let values: Vec<usize> = cell.iter().filter_map(|r| r.vcdim.clone().ok()).collect();
    let k = values.len() as f64;
    let mean = values.iter().sum::<usize>() as f64 / k;
    let sd = (values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / k).sqrt();
    let mean_ratio = cell
        .iter()
        .filter_map(|r| r.vcdim.as_ref().ok().map(|&v| v as f64 / r.log_r_n))
        .sum::<f64>()
        / k;
    let fraction_in_band = cell.iter().any(|r| r.in_band.is_some()).then(|| {
        cell.iter().filter(|r| r.in_band == Some(true)).count() as f64 / cell.len() as f64
    });
    let mut histogram = vec![0; first.n.ilog2() as usize + 1];
    for &v in &values {
        if v >= histogram.len() {
            histogram.resize(v + 1, 0);
        }
        histogram[v] += 1;
    }
    Summary {
        model: first.model,
        group: first.group.clone(),
        n: first.n,
        p: first.p,
        trials: cell.len(),
        errors: cell.len() - values.len(),
        mean,
        sd,
        mean_ratio,
        fraction_in_band,
        min: values.iter().copied().min(),
        max: values.iter().copied().max(),
        histogram,
    }
}

/// Monte Carlo estimate of `Pr[K is not cut out of U by the translates of A]`
/// next to the bound from the disjoint translates of `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoutEstimate {
    pub trials: u64,
    pub failures: u64,
    pub probability: f64,
    pub std_error: f64,
    /// Number of disjoint translates in the greedy packing of `U`.
    pub packing: usize,
    /// `(1 - p^|K| (1-p)^(|U|-|K|))^l`.
    pub bound: f64,
}

impl CutoutEstimate {
    /// Whether the estimate exceeds the bound by more than `sigmas` binomial
    /// standard errors, taken at the bound.
    pub fn exceeds_bound(&self, sigmas: f64) -> bool {
        let se = (self.bound * (1.0 - self.bound) / self.trials as f64).sqrt();
        self.probability > self.bound + sigmas * se
    }
}

fn cut_out_by_translates(g: &FiniteGroup, a: &Subset, u: &[usize], k: &Subset) -> bool {
    // tA ∩ U = K iff for each x in U: t⁻¹x ∈ A exactly when x ∈ K.
    g.elements().any(|t| {
        let ti = g.inv(t);
        u.iter().all(|&x| a.contains(g.mul(ti, x)) == k.contains(x))
    })
}

pub fn cutout_probability(
    g: &FiniteGroup,
    u: &Subset,
    k: &Subset,
    p: f64,
    trials: u64,
    base_seed: u64,
) -> Result<CutoutEstimate> {
    VcError::check_len(g.order(), u.universe())?;
    VcError::check_len(g.order(), k.universe())?;
    if !k.is_subset(u)? {
        return Err(VcError::precondition("K must be a subset of U"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(VcError::Domain(format!("probability {p} outside (0, 1)")));
    }
    if trials == 0 {
        return Err(VcError::precondition("at least one trial is required"));
    }
    if u.is_empty() {
        return Ok(CutoutEstimate {
            trials,
            failures: 0,
            probability: 0.0,
            std_error: 0.0,
            packing: 0,
            bound: 0.0,
        });
    }
    let packing = greedy_disjoint_translates(g, u)?.len();
    let q = p.powi(k.count() as i32) * (1.0 - p).powi((u.count() - k.count()) as i32);
    let bound = (1.0 - q).powi(packing as i32);
    let probe = u.to_vec();
    let failures = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::substream(base_seed, &[g.order() as u64, i]);
            let a = bernoulli_subset(g, p, &mut rng).expect("p checked above");
            u64::from(!cut_out_by_translates(g, &a, &probe, k))
        })
        .sum::<u64>();
    let probability = failures as f64 / trials as f64;
    Ok(CutoutEstimate {
        trials,
        failures,
        probability,
        std_error: (probability * (1.0 - probability) / trials as f64).sqrt(),
        packing,
        bound,
    })
}

/// Writes the header and one row per record.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.to_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv_string(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

pub fn emit_csv(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| VcError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(records, file).map_err(|source| VcError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_csv_str(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| VcError::Parse(e.to_string()))?
        .clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(VcError::Parse(format!("unexpected header {header:?}")));
    }
    rdr.records()
        .map(|row| {
            let row = row.map_err(|e| VcError::Parse(e.to_string()))?;
            ExperimentRecord::from_row(&row)
        })
        .collect()
}

pub fn parse_csv(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let text = std::fs::read_to_string(path).map_err(|source| VcError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv_str(&text)
}

pub fn records_to_json(records: &[ExperimentRecord]) -> Value {
    Value::Array(records.iter().map(ExperimentRecord::to_json).collect())
}

/// Summary table with a leading comment line stating the conventions.
pub fn summaries_to_csv_string(summaries: &[Summary]) -> String {
    let mut buf = b"# sd uses the population convention; histogram counts vcdim 0..=floor(log2 N)\n".to_vec();
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        w.write_record(SUMMARY_HEADER).expect("writing to memory");
        for s in summaries {
            w.write_record(s.to_row()).expect("writing to memory");
        }
        w.flush().expect("writing to memory");
    }
    String::from_utf8(buf).expect("csv output is UTF-8")
}

pub fn summaries_to_json(summaries: &[Summary]) -> Value {
    Value::Array(summaries.iter().map(Summary::to_json).collect())
}
