mod args;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use vcgroups::experiments::{
    records_to_csv_string, records_to_json, summaries_to_csv_string, summaries_to_json,
};
use vcgroups::residues::{power_residues_digraph, residue_rows};
use vcgroups::{
    abelian_cover_shortcut, bernoulli_subset, cayley_digraph, cayley_sum_graph,
    closed_neighborhood_family, cutout_probability, greedy_cover, greedy_disjoint_translates,
    is_prime, neighborhood_family, residue_experiment, run_lln, sisask_family, summarize,
    vc_dim_naive, vc_dim_with, ExperimentRecord, FiniteGroup, GroupFamily, Model, SearchOptions,
    SeededRng, Subset, TranslateFamily, VcError,
};

use args::{Cli, Command, FamilyArg, Format, Global, GroupArgs, GroupFamilyArg, ModelArg, SearchArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Runs one subcommand; `Ok(false)` means output was written but some
/// records carry errors.
fn run(cli: &Cli) -> vcgroups::Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Vcdim(a) => {
            let group = load_group(&a.group)?;
            let set = match (&a.set, a.p) {
                (Some(hex), _) => Subset::from_hex(group.order(), hex)?,
                (None, Some(p)) => bernoulli_subset(&group, p, &mut SeededRng::new(g.seed))?,
                (None, None) => {
                    return Err(VcError::Precondition("one of --set or --p is required".into()))
                }
            };
            let family = match a.family {
                FamilyArg::Translates => TranslateFamily::left_translates(&group, &set)?,
                FamilyArg::Sisask => sisask_family(&group, &set)?,
                FamilyArg::SumGraph => neighborhood_family(&cayley_sum_graph(&group, &set)?),
                FamilyArg::Closed => closed_neighborhood_family(&cayley_digraph(&group, &set)?),
            };
            let out = vc_dim_with(&family, search_options(&a.search))?;
            if a.naive {
                let naive = vc_dim_naive(&family)?;
                if naive != out.dimension {
                    return Err(VcError::BoundViolated(format!(
                        "search found {} but enumeration found {naive}",
                        out.dimension
                    )));
                }
            }
            let text = match g.format {
                Format::Csv => format!("{}\n", out.dimension),
                Format::Json => json_line(&serde_json::json!({
                    "group": group.descriptor(),
                    "set": set.to_hex(),
                    "vcdim": out.dimension,
                    "witness": out.witness.to_hex(),
                    "nodes": out.nodes,
                })),
            };
            write_output(g, &text)?;
            Ok(true)
        }
        Command::Sample(a) => {
            let family = match a.group {
                GroupFamilyArg::C => GroupFamily::Cyclic,
                GroupFamilyArg::D => GroupFamily::Dihedral,
            };
            let model = match a.model {
                ModelArg::Bernoulli => Model::Bernoulli,
                ModelArg::FixedSize => Model::FixedSize,
                ModelArg::FixedSizeSymmetric => Model::FixedSizeSymmetric,
            };
            let records = run_lln(
                family,
                &a.sizes,
                a.p,
                g.trials,
                g.seed,
                model,
                search_options(&a.search),
            )?;
            if let Some(path) = &a.summary {
                let summaries = summarize(&records)?;
                let text = match g.format {
                    Format::Csv => summaries_to_csv_string(&summaries),
                    Format::Json => json_line(&summaries_to_json(&summaries)),
                };
                write_file(path, &text)?;
            }
            emit_records(g, &records)
        }
        Command::Cutout(a) => {
            let group = load_group(&a.group)?;
            let u = Subset::from_hex(group.order(), &a.u)?;
            let k = Subset::from_hex(group.order(), &a.k)?;
            let est = cutout_probability(&group, &u, &k, a.p, g.trials, g.seed)?;
            let text = match g.format {
                Format::Csv => format!(
                    "group,u,k,p,trials,failures,probability,std_error,packing,bound\n{},{},{},{},{},{},{},{},{},{}\n",
                    group.descriptor(),
                    u.to_hex(),
                    k.to_hex(),
                    a.p,
                    est.trials,
                    est.failures,
                    est.probability,
                    est.std_error,
                    est.packing,
                    est.bound
                ),
                Format::Json => json_line(&serde_json::json!({
                    "group": group.descriptor(),
                    "u": u.to_hex(),
                    "k": k.to_hex(),
                    "p": a.p,
                    "trials": est.trials,
                    "failures": est.failures,
                    "probability": est.probability,
                    "std_error": est.std_error,
                    "packing": est.packing,
                    "bound": est.bound,
                })),
            };
            write_output(g, &text)?;
            Ok(!est.exceeds_bound(5.0))
        }
        Command::Paley(a) => {
            if a.adjacency {
                let d = power_residues_digraph(a.n, 2)?;
                write_output(g, &d.to_adjacency_text())?;
                return Ok(true);
            }
            if !is_prime(a.n) {
                return Err(VcError::Precondition(format!("{} is not prime", a.n)));
            }
            let recs = residue_experiment(&[a.n], 2, false, search_options(&a.search))?;
            emit_records(g, &residue_rows(&recs))
        }
        Command::Residue(a) => {
            let primes = parse_primes(&a.primes)?;
            let recs = residue_experiment(&primes, a.r, a.congruent, search_options(&a.search))?;
            emit_records(g, &residue_rows(&recs))
        }
        Command::Tile(a) => {
            let group = load_group(&a.group)?;
            let u = Subset::from_hex(group.order(), &a.u)?;
            let packing = greedy_disjoint_translates(&group, &u)?;
            let reps = packing.rep_set();
            let text = match g.format {
                Format::Csv => format!(
                    "group,u,reps,count,lower_bound\n{},{},{},{},{}\n",
                    group.descriptor(),
                    u.to_hex(),
                    reps.to_hex(),
                    packing.len(),
                    packing.lower_bound()
                ),
                Format::Json => json_line(&serde_json::json!({
                    "group": group.descriptor(),
                    "u": u.to_hex(),
                    "reps": reps.to_hex(),
                    "count": packing.len(),
                    "lower_bound": packing.lower_bound(),
                })),
            };
            write_output(g, &text)?;
            Ok(true)
        }
        Command::Cover(a) => {
            let group = load_group(&a.group)?;
            let (cover, bound) = match (&a.s, &a.shortcut) {
                (_, Some(hex)) => {
                    let u = Subset::from_hex(group.order(), hex)?;
                    let k = u.count();
                    (abelian_cover_shortcut(&group, &u)?, (k * k) as f64)
                }
                (Some(hex), None) => {
                    let c = greedy_cover(&group, &Subset::from_hex(group.order(), hex)?)?;
                    let b = c.upper_bound();
                    (c, b)
                }
                (None, None) => unreachable!("clap requires --s or --shortcut"),
            };
            let reps = Subset::from_indices(group.order(), cover.reps.iter().copied())?;
            let text = match g.format {
                Format::Csv => format!(
                    "group,s,reps,count,upper_bound\n{},{},{},{},{}\n",
                    group.descriptor(),
                    cover.base.to_hex(),
                    reps.to_hex(),
                    cover.len(),
                    bound
                ),
                Format::Json => json_line(&serde_json::json!({
                    "group": group.descriptor(),
                    "s": cover.base.to_hex(),
                    "reps": reps.to_hex(),
                    "count": cover.len(),
                    "upper_bound": bound,
                })),
            };
            write_output(g, &text)?;
            Ok(true)
        }
    }
}

fn load_group(a: &GroupArgs) -> vcgroups::Result<FiniteGroup> {
    match (&a.group, &a.table) {
        (_, Some(path)) => FiniteGroup::load_cayley_table(path),
        (Some(desc), None) => FiniteGroup::from_descriptor(desc),
        (None, None) => unreachable!("clap requires --group or --table"),
    }
}

fn search_options(a: &SearchArgs) -> SearchOptions {
    SearchOptions {
        node_budget: Some(a.node_budget),
        deadline: a
            .time_limit
            .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
        time_limit: a
            .trial_time_limit
            .map(|s| Duration::from_secs_f64(s.max(0.0))),
    }
}

fn parse_primes(s: &str) -> vcgroups::Result<Vec<u64>> {
    let bad = || VcError::Parse(format!("bad prime list {s:?}"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    if let Some((lo, hi)) = s.split_once("..=") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        Ok((lo..=hi).filter(|&n| is_prime(n)).collect())
    } else if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        Ok((lo..hi).filter(|&n| is_prime(n)).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

fn emit_records(g: &Global, records: &[ExperimentRecord]) -> vcgroups::Result<bool> {
    let text = match g.format {
        Format::Csv => records_to_csv_string(records),
        Format::Json => json_line(&records_to_json(records)),
    };
    write_output(g, &text)?;
    let errors = records.iter().filter(|r| r.is_error()).count();
    if errors > 0 {
        eprintln!("{errors} of {} records failed", records.len());
    }
    Ok(errors == 0)
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{v}\n")
}

fn write_output(g: &Global, text: &str) -> vcgroups::Result<()> {
    match &g.out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| VcError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn write_file(path: &Path, text: &str) -> vcgroups::Result<()> {
    std::fs::write(path, text).map_err(|source| VcError::Io {
        path: path.to_path_buf(),
        source,
    })
}
