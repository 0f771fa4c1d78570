//! One PASS/FAIL line per acceptance criterion. Lines go straight to the
//! process stderr so they show up in `cargo test` output without
//! `--nocapture`.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use vcgroups::experiments::parse_csv_str;
use vcgroups::*;

const SEED: u64 = 0;

/// Mean of vcdim / log2 N from the pilot run (seed 1, 100 trials per order).
/// The pilot could not finish N = 512, so no threshold exists there.
const PILOT_RATIO: [(usize, Option<f64>); 4] = [
    (64, Some(0.83)),
    (128, Some(0.8514)),
    (256, Some(0.85)),
    (512, None),
];
const RATIO_TOLERANCE: f64 = 0.1;

/// Standard deviation caps, pilot values 0.140, 0.196 and 0.400 with headroom.
const SD_CAP: [(usize, f64); 4] = [(64, 0.3), (128, 0.35), (256, 0.5), (512, 0.5)];

const LLN_BUDGET: Duration = Duration::from_secs(30 * 60);
const LLN_MARGIN: Duration = Duration::from_secs(30);

struct Report {
    lines: Vec<(u32, bool, String)>,
    vcdims: Vec<(usize, usize, &'static str)>,
}

impl Report {
    fn record(&mut self, id: u32, pass: bool, detail: String) {
        let line = format!(
            "criterion {id}: {} {detail}\n",
            if pass { "PASS" } else { "FAIL" }
        );
        let mut err = std::io::stderr().lock();
        err.write_all(line.as_bytes()).unwrap();
        err.flush().unwrap();
        self.lines.push((id, pass, detail));
    }

    fn vc(&mut self, n: usize, d: usize, suite: &'static str) {
        self.vcdims.push((n, d, suite));
    }
}

fn random_subset(g: &FiniteGroup, rng: &mut SeededRng) -> Subset {
    let p = 0.05 + 0.9 * rng.next_f64();
    bernoulli_subset(g, p, rng).unwrap()
}

fn pick<'a>(rng: &mut SeededRng, xs: &'a [&'a str]) -> &'a str {
    xs[rng.below(xs.len() as u64) as usize]
}

fn floor_log2(n: usize) -> usize {
    n.ilog2() as usize
}

fn criterion_1(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = SeededRng::substream(SEED, &[1]);
    let mut groups: Vec<String> = (1..=20).map(|n| format!("C{n}")).collect();
    groups.extend((3..=10).map(|n| format!("D{n}")));
    groups.extend(
        ["C2xC2", "C2xC3", "C2xC4", "C2xC2xC2", "C3xC3", "C2xC2xC4", "C4xC4", "C2xC8", "C2xD3",
         "D3xC3", "C2xD5", "C3xC5", "C2xC2xC3"]
            .map(String::from),
    );
    let refs: Vec<&str> = groups.iter().map(String::as_str).collect();
    let (mut pairs, mut bad) = (0, Vec::new());
    let mut kinds = BTreeSet::new();
    for _ in 0..240 {
        let desc = pick(&mut rng, &refs);
        let g = FiniteGroup::from_descriptor(desc).unwrap();
        kinds.insert(if desc.contains('x') { 'x' } else { desc.as_bytes()[0] as char });
        let a = random_subset(&g, &mut rng);
        let f = TranslateFamily::left_translates(&g, &a).unwrap();
        let fast = vc_dim(&f).unwrap();
        let slow = vc_dim_naive(&f).unwrap();
        rep.vc(g.order(), fast, "oracle");
        pairs += 1;
        if fast != slow {
            bad.push(format!("{desc}/{}: {fast} vs {slow}", a.to_hex()));
        }
    }
    let elapsed = start.elapsed();
    let pass = bad.is_empty() && kinds.len() == 3 && elapsed < Duration::from_secs(300);
    rep.record(
        1,
        pass,
        format!("{pairs} pairs, {} mismatches {bad:?}, {:.1}s", bad.len(), elapsed.as_secs_f64()),
    );
}

fn check_packing(g: &FiniteGroup, u: &Subset, p: &Packing) -> Result<(), String> {
    let translates: Vec<Subset> =
        p.reps.iter().map(|&s| left_translate(g, s, u).unwrap()).collect();
    for i in 0..translates.len() {
        for j in i + 1..translates.len() {
            if !translates[i].is_disjoint(&translates[j]).unwrap() {
                return Err(format!("reps {} and {} overlap", p.reps[i], p.reps[j]));
            }
        }
    }
    let mut union = Subset::empty(g.order());
    for t in &translates {
        union.union_with(t).unwrap();
    }
    for s in g.elements() {
        if !p.reps.contains(&s) && left_translate(g, s, u).unwrap().is_disjoint(&union).unwrap() {
            return Err(format!("{s} could still be added"));
        }
    }
    let k = u.count();
    if p.len() * k * k < g.order() || p.len() < g.order().div_ceil(k * k) {
        return Err(format!("only {} translates", p.len()));
    }
    Ok(())
}

fn check_cover(g: &FiniteGroup, s: &Subset, c: &Cover) -> Result<(), String> {
    let mut union = Subset::empty(g.order());
    for &t in &c.reps {
        for x in s.iter() {
            union.insert(g.mul(x, t));
        }
    }
    if !union.is_full() {
        return Err(format!("{} elements uncovered", g.order() - union.count()));
    }
    let l = s.count() as f64;
    let bound = g.order() as f64 / l * (l.ln() + 1.0);
    if c.len() as f64 > bound {
        return Err(format!("{} translates exceed {bound}", c.len()));
    }
    Ok(())
}

fn criteria_3_and_4(rep: &mut Report) {
    let mut rng = SeededRng::substream(SEED, &[3]);
    let (mut packings, mut covers, mut shortcuts) = (0, 0, 0);
    let (mut bad3, mut bad4) = (Vec::new(), Vec::new());
    for n in [32, 128, 512] {
        for g in [GroupFamily::Cyclic.make(n).unwrap(), GroupFamily::Dihedral.make(n).unwrap()] {
            for k in 1..=8 {
                for _ in 0..50 {
                    let u = uniform_fixed_size(&g, k, &mut rng).unwrap();
                    let tag = format!("{} U={}", g.descriptor(), u.to_hex());
                    let p = match greedy_disjoint_translates(&g, &u) {
                        Ok(p) => p,
                        Err(e) => {
                            bad3.push(format!("{tag}: {e}"));
                            continue;
                        }
                    };
                    packings += 1;
                    if let Err(e) = check_packing(&g, &u, &p) {
                        bad3.push(format!("{tag}: {e}"));
                    }
                    let s = p.rep_set();
                    covers += 1;
                    match greedy_cover(&g, &s) {
                        Ok(c) => {
                            if let Err(e) = check_cover(&g, &s, &c) {
                                bad4.push(format!("{tag}: {e}"));
                            }
                        }
                        Err(e) => bad4.push(format!("{tag}: {e}")),
                    }
                    if g.is_abelian() {
                        shortcuts += 1;
                        match abelian_cover_shortcut(&g, &u) {
                            Ok(c) => {
                                if let Err(e) = check_cover_plain(&g, &c) {
                                    bad4.push(format!("{tag} shortcut: {e}"));
                                } else if c.len() > k * k {
                                    bad4.push(format!("{tag} shortcut: |T| = {}", c.len()));
                                }
                            }
                            Err(e) => bad4.push(format!("{tag} shortcut: {e}")),
                        }
                    }
                }
            }
        }
    }
    rep.record(3, bad3.is_empty(), format!("{packings} packings, failures {bad3:?}"));
    rep.record(
        4,
        bad4.is_empty(),
        format!("{covers} covers, {shortcuts} shortcuts, failures {bad4:?}"),
    );
}

fn check_cover_plain(g: &FiniteGroup, c: &Cover) -> Result<(), String> {
    let mut union = Subset::empty(g.order());
    for &t in &c.reps {
        for x in c.base.iter() {
            union.insert(g.mul(x, t));
        }
    }
    if union.is_full() {
        Ok(())
    } else {
        Err(format!("{} elements uncovered", g.order() - union.count()))
    }
}

fn random_group(rng: &mut SeededRng, max: usize, abelian: bool) -> FiniteGroup {
    loop {
        let a = 1 + rng.below(max as u64) as usize;
        let b = 1 + rng.below(16) as usize;
        let desc = match rng.below(if abelian { 2 } else { 4 }) {
            0 => format!("C{a}"),
            1 => format!("C{b}xC{}", a / b),
            2 => format!("D{}", a / 2),
            _ => format!("C{b}xD{}", a / (2 * b)),
        };
        if let Ok(g) = FiniteGroup::from_descriptor(&desc) {
            if g.order() <= max {
                return g;
            }
        }
    }
}

fn criterion_5(rep: &mut Report) {
    let mut rng = SeededRng::substream(SEED, &[5]);
    let mut bad = Vec::new();
    for _ in 0..100 {
        let g = random_group(&mut rng, 256, false);
        let a = random_subset(&g, &mut rng);
        let nb: BTreeSet<Subset> =
            neighborhood_family(&cayley_digraph(&g, &a).unwrap()).members().into_iter().collect();
        let tr: BTreeSet<Subset> = g.elements().map(|t| left_translate(&g, t, &a).unwrap()).collect();
        if nb != tr {
            bad.push(format!("neighborhoods {} {}", g.descriptor(), a.to_hex()));
        }
    }
    for _ in 0..50 {
        let g = random_group(&mut rng, 64, true);
        let a = random_subset(&g, &mut rng);
        let sum = vc_dim(&neighborhood_family(&cayley_sum_graph(&g, &a).unwrap())).unwrap();
        let tr = vc_dim(&TranslateFamily::left_translates(&g, &a).unwrap()).unwrap();
        rep.vc(g.order(), sum, "sum graph");
        rep.vc(g.order(), tr, "translates");
        if sum != tr {
            bad.push(format!("sum graph {} {}: {sum} vs {tr}", g.descriptor(), a.to_hex()));
        }
    }
    for _ in 0..100 {
        let g = random_group(&mut rng, 64, false);
        let mut a = random_subset(&g, &mut rng);
        if a.is_empty() {
            a.insert(g.identity());
        }
        let s = vc_dim(&sisask_family(&g, &a).unwrap()).unwrap();
        let t = vc_dim(&TranslateFamily::left_translates(&g, &a).unwrap()).unwrap();
        rep.vc(g.order(), s, "sisask");
        rep.vc(g.order(), t, "translates");
        if s.abs_diff(t) > 1 {
            bad.push(format!("sisask {} {}: {s} vs {t}", g.descriptor(), a.to_hex()));
        }
    }
    rep.record(5, bad.is_empty(), format!("250 instances, failures {bad:?}"));
}

fn criterion_6(rep: &mut Report) {
    let budget = std::env::var("VCGROUPS_LLN_BUDGET_SECS")
        .ok()
        .and_then(|s| s.parse().ok())
        .map(Duration::from_secs)
        .unwrap_or(LLN_BUDGET);
    let start = Instant::now();
    let mut records = run_lln(
        GroupFamily::Cyclic,
        &[64, 128, 256],
        0.5,
        100,
        SEED,
        Model::Bernoulli,
        SearchOptions { node_budget: None, deadline: Some(start + budget), time_limit: None },
    )
    .unwrap();
    let left = budget.saturating_sub(start.elapsed() + LLN_MARGIN);
    records.extend(
        run_lln(
            GroupFamily::Cyclic,
            &[512],
            0.5,
            100,
            SEED,
            Model::Bernoulli,
            SearchOptions {
                node_budget: None,
                deadline: Some(start + budget),
                time_limit: Some(left / 100),
            },
        )
        .unwrap(),
    );
    let elapsed = start.elapsed();
    for r in &records {
        if let Ok(d) = r.vcdim {
            rep.vc(r.n, d, "lln");
        }
    }
    let summaries = summarize(&records).unwrap();
    let mut fails = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    let mut table = Vec::new();
    for (&(n, threshold), &(_, cap)) in PILOT_RATIO.iter().zip(&SD_CAP) {
        let s = summaries.iter().find(|s| s.n == n).unwrap();
        table.push(format!(
            "N={n} mean={:.3} ratio={:.4} sd={:.3} errors={}",
            s.mean, s.mean_ratio, s.sd, s.errors
        ));
        if s.errors > 0 {
            fails.push(format!("N={n}: {} of {} trials failed", s.errors, s.trials));
            continue;
        }
        if s.mean < prev {
            fails.push(format!("N={n}: mean decreased"));
        }
        prev = s.mean;
        match threshold {
            Some(t) if (s.mean_ratio - t).abs() > RATIO_TOLERANCE => {
                fails.push(format!("N={n}: ratio {} vs pilot {t}", s.mean_ratio))
            }
            Some(_) => {}
            None => fails.push(format!("N={n}: no pilot threshold")),
        }
        if s.sd > cap {
            fails.push(format!("N={n}: sd {} above {cap}", s.sd));
        }
    }
    if elapsed > budget {
        fails.push("over budget".into());
    }
    rep.record(
        6,
        fails.is_empty(),
        format!("{table:?} {:.0}s, failures {fails:?}", elapsed.as_secs_f64()),
    );
}

/// Probability that no translate of A meets u = {0, 1} in exactly {0},
/// by enumerating all 64 subsets of C6.
fn c6_not_cut_out(p: f64) -> f64 {
    let mut q = 0.0;
    for a in 0u32..64 {
        let has = |x: usize| a >> (x % 6) & 1 == 1;
        let cut = (0..6).any(|t| {
            // t + A contains 0 iff -t ∈ A, contains 1 iff 1 - t ∈ A
            has(6 - t) && !has(7 - t)
        });
        if !cut {
            let k = a.count_ones() as i32;
            q += p.powi(k) * (1.0 - p).powi(6 - k);
        }
    }
    q
}

fn criterion_7(rep: &mut Report) {
    let trials = 100_000;
    let mut fails = Vec::new();
    let mut detail = Vec::new();
    let cases = [
        ("C8", "01", "01", 0.5f64.powi(8)),
        ("C6", "03", "01", c6_not_cut_out(0.5)),
    ];
    for (desc, u, k, exact) in cases {
        let g = FiniteGroup::from_descriptor(desc).unwrap();
        let u = Subset::from_hex(g.order(), u).unwrap();
        let k = Subset::from_hex(g.order(), k).unwrap();
        let est = cutout_probability(&g, &u, &k, 0.5, trials, SEED).unwrap();
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        let z = (est.probability - exact) / sigma;
        detail.push(format!("{desc}: {} vs {exact:.6} (z={z:.2})", est.probability));
        if z.abs() > 5.0 {
            fails.push(desc);
        }
    }
    rep.record(7, fails.is_empty(), format!("{detail:?}, failures {fails:?}"));
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn criterion_8(rep: &mut Report) {
    let mut fails = Vec::new();
    let members = |n, r| power_residues(n, r).unwrap().members.to_vec();
    if members(5, 2) != vec![1, 4] {
        fails.push("(5,2)".to_string());
    }
    let cubes: BTreeSet<usize> = (1..13usize).map(|x| x * x * x % 13).collect();
    if members(13, 3) != cubes.into_iter().collect::<Vec<_>>() || members(13, 3) != vec![1, 5, 8, 12] {
        fails.push("(13,3)".to_string());
    }
    let mut checked = 0;
    for n in (2..=1000u64).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)) {
        for r in 2..=5 {
            checked += 1;
            if members(n, r).len() as u64 != (n - 1) / gcd(r, n - 1) {
                fails.push(format!("size ({n},{r})"));
            }
        }
    }
    let f = neighborhood_family(&paley_digraph(5).unwrap());
    let (fast, slow) = (vc_dim(&f).unwrap(), vc_dim_naive(&f).unwrap());
    rep.vc(5, fast, "paley");
    if fast != 2 || slow != 2 {
        fails.push(format!("paley 5: {fast} / {slow}"));
    }
    rep.record(8, fails.is_empty(), format!("{checked} sizes, failures {fails:?}"));
}

fn sample_csv(seed: &str) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_vcgroups"))
        .args(["sample", "--group", "C", "--sizes", "64", "--p", "0.5", "--trials", "100", "--seed", seed])
        .output()
        .unwrap();
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

fn criterion_9(rep: &mut Report) {
    let a = sample_csv("0");
    let b = sample_csv("0");
    let c = sample_csv("1");
    let dims = |t: &str| -> Vec<usize> {
        parse_csv_str(t).unwrap().into_iter().map(|r| r.vcdim.unwrap()).collect()
    };
    let (da, dc) = (dims(&a), dims(&c));
    for &d in &da {
        rep.vc(64, d, "determinism");
    }
    let changed = da.iter().zip(&dc).filter(|(x, y)| x != y).count();
    let pass = a == b && da.len() == 100 && changed > 0;
    rep.record(9, pass, format!("identical={}, {changed} of 100 vcdims changed", a == b));
}

fn criterion_2(rep: &mut Report) {
    let bad: Vec<_> = rep.vcdims.iter().filter(|&&(n, d, _)| d > floor_log2(n)).collect();
    let detail = format!("{} values, violations {bad:?}", rep.vcdims.len());
    rep.record(2, bad.is_empty(), detail);
}

#[test]
fn acceptance() {
    let mut rep = Report { lines: Vec::new(), vcdims: Vec::new() };
    criterion_1(&mut rep);
    criteria_3_and_4(&mut rep);
    criterion_5(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    criterion_9(&mut rep);
    criterion_6(&mut rep);
    criterion_2(&mut rep);
    let failed: Vec<u32> = rep.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
