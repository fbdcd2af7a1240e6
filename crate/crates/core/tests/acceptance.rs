//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances and sample sizes are the constants below.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use smc_kernel::blocks::is_negative_clique_forest;
use smc_kernel::decompose::{apply_rule6plus, apply_rule_a, decompose, DecompositionOutcome};
use smc_kernel::drivers::{assert_kernel_size, kernelize, linear_kernel_dsplit, ClassSpec, GraphClass, Outcome};
use smc_kernel::gen::{
    gen_dsplit, gen_rl, gen_split, random_clique_forest, random_signed_graph, random_with_modulator, seeded,
    solve_1star_split, transform_double, transform_non_edge_split, Partition,
};
use smc_kernel::mcwv::mcwv_cliqueforest;
use smc_kernel::oracle::{answer_exact, beta_exact, is_balanced, mcwv_exact, pt, verify_split_bound};
use smc_kernel::rules::{applicable, RuleContext};
use smc_kernel::{Instance, RuleId, Sign, SignedGraph};

use rand::Rng;

const TIGHTNESS_MAX_TIME: Duration = Duration::from_secs(1);
const BALANCE_SAMPLES: usize = 5000;
const BALANCE_MAX_N: usize = 7;
const SPLIT_BOUND_SAMPLES: usize = 1000;
const SPLIT_BOUND_MAX_N: usize = 8;
const RULE_SAMPLES: usize = 1000;
const RULE_MAX_N: usize = 10;
const RULE_MAX_TIME: Duration = Duration::from_secs(600);
const CORPUS_MAX_N: usize = 11;
const CORPUS_GRAPHS: u64 = 1500;
const LINEAR_SAMPLES: usize = 200;
const ONE_STAR_SAMPLES: usize = 500;
const ONE_STAR_MAX_N: usize = 14;
const MCWV_SAMPLES: usize = 500;
const MCWV_MAX_N: usize = 12;
const MCWV_MAX_TIME: Duration = Duration::from_millis(1);

type Outcome_ = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Outcome_) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail, ok) = match result {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("{tag} [{id:02}] {name}: {detail} ({secs:.2}s)");
    ok
}

fn connected_instances(corpus: &[SignedGraph]) -> impl Iterator<Item = Instance> + '_ {
    corpus.iter().flat_map(|g| (1..=4).map(move |k| Instance::new(g.clone(), k)))
}

/// Shipped corpus: connected simple graphs with 3..=11 vertices from three
/// families (random signed, near-clique-forest with a modulator, negative
/// clique-forests).
fn corpus() -> Vec<SignedGraph> {
    let mut out = Vec::new();
    for seed in 0..CORPUS_GRAPHS {
        let n = 3 + (seed % (CORPUS_MAX_N as u64 - 2)) as usize;
        let g = match seed % 3 {
            0 => random_signed_graph(n, 0.25 + 0.1 * (seed / 3 % 5) as f64, 0.3, seed).unwrap(),
            1 => {
                let s = 1 + (seed / 3 % 3) as usize;
                random_with_modulator(n.saturating_sub(s).max(1), s, 4, 0.4, 0.3, seed).unwrap().0
            }
            _ => random_clique_forest(n, 5, 0.1, seed).unwrap(),
        };
        if g.is_connected() && g.n() <= CORPUS_MAX_N {
            out.push(g);
        }
    }
    out
}

fn c1_tightness() -> Outcome_ {
    let start = Instant::now();
    for n in [3usize, 5, 7, 9] {
        let g = SignedGraph::complete(n, Sign::Negative);
        let beta = beta_exact(&g).map_err(|e| e.to_string())?.beta;
        ensure!(4 * beta == n * n - 1, "K{n}: 4β = {} but (n²-1) = {}", 4 * beta, n * n - 1);
        ensure!(pt(&g).quarters() == 4 * beta as i64, "K{n}: 4pt = {} ≠ 4β", pt(&g).quarters());
    }
    let t = start.elapsed();
    ensure!(t < TIGHTNESS_MAX_TIME, "took {t:?}");
    Ok("β = pt on K3, K5, K7, K9".into())
}

fn c2_balance() -> Outcome_ {
    let mut rng = seeded(2);
    let (mut done, mut unbalanced) = (0, 0);
    while done < BALANCE_SAMPLES {
        let n = rng.random_range(2..=BALANCE_MAX_N);
        let g = random_signed_graph(n, rng.random_range(0.3..0.9), 0.5, rng.random()).unwrap();
        if !g.is_connected() {
            continue;
        }
        done += 1;
        let cert = is_balanced(&g);
        let beta = beta_exact(&g).unwrap().beta;
        ensure!(cert.is_balanced() == (beta == g.m()), "disagreement on {g:?}");
        ensure!(cert.verify(&g), "certificate rejected on {g:?}");
        unbalanced += usize::from(!cert.is_balanced());
    }
    Ok(format!("{done} graphs, {unbalanced} unbalanced with verified odd-negative cycles"))
}

fn c3_split_bound() -> Outcome_ {
    let mut rng = seeded(3);
    let mut done = 0;
    while done < SPLIT_BOUND_SAMPLES {
        let n = rng.random_range(2..=SPLIT_BOUND_MAX_N);
        let g = random_signed_graph(n, rng.random_range(0.3..0.9), 0.4, rng.random()).unwrap();
        if !g.is_connected() {
            continue;
        }
        let u: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if u.is_empty() || u.len() == n {
            continue;
        }
        done += 1;
        let r = verify_split_bound(&g, &u).unwrap();
        ensure!(r.additive_holds && r.slack_holds, "violated on {g:?} with U = {u:?}: {r:?}");
    }
    Ok(format!("{done} (G, U) pairs, 0 violations"))
}

fn c4_rule_validity() -> Outcome_ {
    let start = Instant::now();
    let mut rng = seeded(4);
    let mut counts: BTreeMap<RuleId, usize> = BTreeMap::new();
    let rules = [RuleId::R8, RuleId::R9, RuleId::R10a, RuleId::R10b, RuleId::R11];
    let enough = |c: &BTreeMap<RuleId, usize>| rules.iter().all(|r| c.get(r).copied().unwrap_or(0) >= RULE_SAMPLES);
    let mut tried = 0u64;
    while !enough(&counts) {
        ensure!(start.elapsed() < RULE_MAX_TIME, "time budget exhausted with {counts:?}");
        tried += 1;
        let modulator_size = rng.random_range(1..=3);
        let forest_n = rng.random_range(2..=RULE_MAX_N - modulator_size);
        let (g, s) = random_with_modulator(
            forest_n,
            modulator_size,
            rng.random_range(2..=5),
            rng.random_range(0.2..0.7),
            0.3,
            rng.random(),
        )
        .unwrap();
        let k = rng.random_range(1..=4);
        let Ok(ctx) = RuleContext::new(Instance::new(g.clone(), k), &s) else { continue };
        let before = answer_exact(&g, k).unwrap();
        let mut seen = BTreeSet::new();
        for app in applicable(&ctx) {
            let (next, step) = app.apply(&ctx).map_err(|e| format!("{app:?} on {g:?}: {e}"))?;
            let after = answer_exact(next.graph(), next.k()).unwrap();
            ensure!(before == after, "{:?} changed the answer on {g:?}, S = {s:?}, k = {k}", step.rule);
            seen.insert(step.rule);
        }
        for r in seen {
            *counts.entry(r).or_default() += 1;
        }
    }
    let mut rule_a = 0;
    while rule_a < RULE_SAMPLES {
        let n = rng.random_range(1..RULE_MAX_N);
        let base = random_signed_graph(n, rng.random_range(0.2..0.8), 0.4, rng.random()).unwrap();
        if !base.is_connected() {
            continue;
        }
        let sign = if rng.random_bool(0.5) { Sign::Positive } else { Sign::Negative };
        let g = base.with_new_vertex(&[(rng.random_range(0..n), sign)]).unwrap();
        let k = rng.random_range(1..=4);
        let inst = Instance::new(g.clone(), k);
        let applied = apply_rule_a(&inst, n).map_err(|e| e.to_string())?;
        let after = answer_exact(&applied.instance.graph, applied.instance.k).unwrap();
        ensure!(answer_exact(&g, k).unwrap() == after, "Rule A changed the answer on {g:?}, k = {k}");
        rule_a += 1;
    }
    counts.insert(RuleId::RuleA, rule_a);
    let t = start.elapsed();
    ensure!(t < RULE_MAX_TIME, "took {t:?}");
    Ok(format!("instances per rule {counts:?} from {tried} contexts, 0 violations"))
}

fn c5_one_way(corpus: &[SignedGraph]) -> Outcome_ {
    let (mut stars, mut yes_traces) = (0, 0);
    for inst in connected_instances(corpus) {
        let g = &inst.graph;
        let truth = answer_exact(g, inst.k).unwrap();
        for v in 0..g.n() {
            let mut leaves: Vec<usize> = Vec::new();
            for w in g.neighbors(v) {
                if !g.has_opposite_pair_between(v, w) && leaves.iter().all(|&l| !g.adjacent(l, w)) {
                    leaves.push(w);
                }
            }
            if leaves.len() < 2 {
                continue;
            }
            let Ok(applied) = apply_rule6plus(&inst, v, &leaves) else { continue };
            stars += 1;
            let after = &applied.instance;
            ensure!(truth || !answer_exact(&after.graph, after.k).unwrap(), "star at {v} made NO into YES on {g:?}");
        }
        if let DecompositionOutcome::Yes { trace, .. } = decompose(&inst).map_err(|e| e.to_string())? {
            yes_traces += 1;
            ensure!(trace.replay(&inst).map_err(|e| e.to_string())?.k <= 0, "trace does not reach k <= 0");
            ensure!(truth, "decomposition certified a NO instance: {g:?}, k = {}", inst.k);
        }
    }
    Ok(format!("{stars} star deletions, {yes_traces} yes-traces, 0 violations"))
}

fn c6_decomposition(corpus: &[SignedGraph]) -> Outcome_ {
    let (mut yes, mut reduced, mut padded) = (0, 0, 0);
    for inst in connected_instances(corpus) {
        match decompose(&inst).map_err(|e| format!("{e} on {:?}, k = {}", inst.graph, inst.k))? {
            DecompositionOutcome::Yes { credit, .. } => {
                ensure!(credit >= inst.k, "credit {credit} < k");
                ensure!(answer_exact(&inst.graph, inst.k).unwrap(), "false YES on {:?}", inst.graph);
                yes += 1;
            }
            DecompositionOutcome::Reduced { modulator, padded: p, switching, switched, .. } => {
                ensure!(modulator.len() as i64 <= 3 * inst.k, "|S| = {} > 3k", modulator.len());
                ensure!(inst.graph.switch(&switching) == switched, "switched graph mismatch");
                let (rest, _) = switched.without(&modulator);
                ensure!(is_negative_clique_forest(&rest), "G - S is not a negative clique-forest");
                reduced += 1;
                padded += usize::from(!p.is_empty());
            }
        }
    }
    Ok(format!("{yes} yes, {reduced} reduced ({padded} padded), 0 stuck"))
}

fn c7_end_to_end(corpus: &[SignedGraph]) -> Outcome_ {
    let (mut yes, mut kernels) = (0, 0);
    for inst in connected_instances(corpus) {
        let truth = answer_exact(&inst.graph, inst.k).unwrap();
        let report = kernelize(&inst, &ClassSpec::general()).map_err(|e| e.to_string())?;
        let got = match &report.kernel {
            None => {
                yes += 1;
                true
            }
            Some(kernel) => {
                kernels += 1;
                ensure!(report.trace.replay(&inst).map_err(|e| e.to_string())? == *kernel, "replay mismatch");
                answer_exact(&kernel.graph, kernel.k).unwrap()
            }
        };
        ensure!(got == truth, "verdict {got} ≠ {truth} on {:?}, k = {}", inst.graph, inst.k);
    }
    Ok(format!("{} instances: {yes} yes, {kernels} kernels, 0 mismatches", yes + kernels))
}

fn c8_size_bounds() -> Outcome_ {
    let mut summary = Vec::new();
    for k in 1..=3i64 {
        let (mut kernels, mut total, mut largest, mut tightest) = (0, 0, 0, i64::MAX);
        let mut check = |g: SignedGraph, spec: ClassSpec| -> Result<(), String> {
            if !g.is_connected() {
                return Ok(());
            }
            total += 1;
            let report = kernelize(&Instance::new(g, k), &spec).map_err(|e| e.to_string())?;
            if let Some(b) = assert_kernel_size(&report, &spec).map_err(|e| e.to_string())? {
                kernels += 1;
                largest = largest.max(b.observed);
                tightest = tightest.min(b.margin);
            }
            Ok(())
        };
        for seed in 0..60u64 {
            let (ks, is, ep) = [(7, 0, 0.0), (9, 1, 0.1), (15, 2, 0.1), (21, 2, 0.05), (31, 3, 0.05), (40, 4, 0.03)]
                [seed as usize % 6];
            let (g, p) = gen_split(ks, is, ep, 0.0, seed).unwrap();
            check(g, ClassSpec::with(GraphClass::Split, Some(Partition::Split(p))))?;
            let (isz, csz): (&[usize], &[usize]) = if seed % 2 == 0 { (&[1], &[9, 7]) } else { (&[2, 1], &[11, 9, 5]) };
            let (g, p) = gen_rl(isz, csz, 0.05, 0.0, seed).unwrap();
            let class = GraphClass::Rl { r: isz.len(), l: csz.len() };
            check(g, ClassSpec::with(class, Some(Partition::Rl(p))))?;
        }
        summary.push(format!("k={k}: {kernels}/{total} kernels, max n {largest}, min margin {tightest}"));
    }
    let mut linear = 0;
    for seed in 0..200u64 {
        let d = 1 + (seed % 3) as usize;
        let (g, p) = gen_dsplit(d, 2 + (seed % 5) as usize, 2 + (seed % 7) as usize, 0.2, seed).unwrap();
        for k in 1..=3 {
            let report = linear_kernel_dsplit(&Instance::new(g.clone(), k), d, Some(&p)).map_err(|e| e.to_string())?;
            let spec = ClassSpec::with(GraphClass::Dsplit { d }, Some(Partition::Split(p.clone())));
            if assert_kernel_size(&report, &spec).map_err(|e| e.to_string())?.is_some() {
                linear += 1;
            }
        }
    }
    summary.push(format!("{linear} linear d*-split kernels below 4(d+1)k"));
    Ok(summary.join("; "))
}

fn c9_linear_threshold() -> Outcome_ {
    let mut done = 0;
    let mut seed = 0u64;
    while done < LINEAR_SAMPLES {
        seed += 1;
        ensure!(seed < 100_000, "only {done} instances generated");
        let k_size = 2 + (seed % 6) as usize;
        let i_size = 12usize.saturating_sub(k_size) + (seed % 5) as usize;
        let (g, p) = gen_dsplit(2, k_size, i_size, 0.3, seed).unwrap();
        if !(12..=16).contains(&g.n()) || !g.is_connected() {
            continue;
        }
        done += 1;
        let report = linear_kernel_dsplit(&Instance::new(g.clone(), 1), 2, Some(&p)).map_err(|e| e.to_string())?;
        ensure!(report.outcome == Outcome::Yes, "threshold did not fire at n = {}", g.n());
        ensure!(answer_exact(&g, 1).unwrap(), "oracle says NO on {g:?}");
    }
    Ok(format!("{done} connected 2*-split graphs with 12 <= n <= 16, all yes"))
}

/// Canonical form of a graph on `n <= 6` vertices: the least edge mask over
/// all relabellings.
fn canonical(n: usize, adj: &[[bool; 6]; 6]) -> u32 {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u32::MAX;
    permute(&mut perm, 0, &mut |p| {
        let mut mask = 0u32;
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if adj[p[u]][p[v]] {
                    mask |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(mask);
    });
    best
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

fn c10_hardness() -> Outcome_ {
    // Connected graphs up to isomorphism on 1..=6 vertices.
    const CONNECTED: [usize; 7] = [0, 1, 1, 2, 6, 21, 112];
    let mut checked = 0;
    for (n, &expected) in CONNECTED.iter().enumerate().skip(1) {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut classes = BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let mut adj = [[false; 6]; 6];
            let edges: Vec<(usize, usize, Sign)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &(u, v))| {
                    adj[u][v] = true;
                    adj[v][u] = true;
                    (u, v, Sign::Negative)
                })
                .collect();
            let g = SignedGraph::from_edges(n, edges).unwrap();
            if !g.is_connected() || !classes.insert(canonical(n, &adj)) {
                continue;
            }
            let cut = beta_exact(&g).unwrap().beta;
            let doubled = beta_exact(&transform_double(&g)).unwrap().beta;
            ensure!(doubled == 2 * cut, "doubling fails on {g:?}");
            if (0..n).any(|v| g.degree(v) + 1 == n) {
                continue;
            }
            let non_edges = pairs.len() - g.m();
            let (h, _) = transform_non_edge_split(&g).map_err(|e| e.to_string())?;
            let h_cut = beta_exact(&h).unwrap().beta;
            ensure!(h_cut == 2 * non_edges + cut, "split transform fails on {g:?}: {h_cut} ≠ 2·{non_edges} + {cut}");
            checked += 1;
        }
        ensure!(classes.len() == expected, "{} classes on {n} vertices", classes.len());
    }
    Ok(format!("{checked} graphs without a universal vertex, doubling on all 143 classes"))
}

fn c11_one_star() -> Outcome_ {
    let mut done = 0;
    let mut seed = 0u64;
    while done < ONE_STAR_SAMPLES {
        seed += 1;
        let k_size = 1 + (seed % 7) as usize;
        let i_size = k_size + (seed % 5) as usize;
        let (g, p) = gen_dsplit(1, k_size, i_size, 0.4, seed).unwrap();
        if g.n() > ONE_STAR_MAX_N {
            continue;
        }
        done += 1;
        let (value, assignment) = solve_1star_split(&g, &p).map_err(|e| e.to_string())?;
        let beta = beta_exact(&g).unwrap().beta as u64;
        ensure!(value == beta, "solver {value} ≠ β {beta} on {g:?}");
        let kept = smc_kernel::oracle::consistent_edge_count(&g, &assignment) as u64;
        ensure!(kept == value, "assignment keeps {kept} edges, claimed {value}");
    }
    Ok(format!("{done} 1*-split graphs with n <= {ONE_STAR_MAX_N}"))
}

fn c12_mcwv() -> Outcome_ {
    let mut rng = seeded(12);
    let mut slowest = Duration::ZERO;
    for _ in 0..MCWV_SAMPLES {
        let n = rng.random_range(1..=MCWV_MAX_N);
        let t = random_clique_forest(n, rng.random_range(2..=5), rng.random_range(0.0..0.4), rng.random()).unwrap();
        let w1: Vec<u64> = (0..n).map(|_| rng.random_range(0..6)).collect();
        let w2: Vec<u64> = (0..n).map(|_| rng.random_range(0..6)).collect();
        let exact = mcwv_exact(&t, &w1, &w2).unwrap();
        // Best of three runs, to keep scheduler noise out of the timing.
        let mut best = Duration::MAX;
        for _ in 0..3 {
            let start = Instant::now();
            let dp = mcwv_cliqueforest(&t, &w1, &w2).unwrap();
            best = best.min(start.elapsed());
            ensure!(dp == exact, "dp {dp} ≠ exact {exact} on {t:?}");
        }
        slowest = slowest.max(best);
    }
    ensure!(slowest < MCWV_MAX_TIME, "slowest instance took {slowest:?}");
    Ok(format!("{MCWV_SAMPLES} forests, slowest {slowest:?}"))
}

fn main() -> ExitCode {
    let corpus = corpus();
    println!("corpus: {} connected graphs, {} instances with k in 1..=4", corpus.len(), 4 * corpus.len());
    let results = [
        run(1, "tightness fixtures", c1_tightness),
        run(2, "balance equivalence", c2_balance),
        run(3, "two-part lower bound", c3_split_bound),
        run(4, "two-way rule validity", c4_rule_validity),
        run(5, "one-way safety", || c5_one_way(&corpus)),
        run(6, "decomposition contract", || c6_decomposition(&corpus)),
        run(7, "end-to-end kernel soundness", || c7_end_to_end(&corpus)),
        run(8, "kernel size bounds", c8_size_bounds),
        run(9, "linear-kernel yes threshold", c9_linear_threshold),
        run(10, "hardness constructions", c10_hardness),
        run(11, "1*-split solver", c11_one_star),
        run(12, "weighted-vertex DP", c12_mcwv),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
