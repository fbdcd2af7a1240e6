//! Invariant suites over a corpus of graph files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use smc_kernel::decompose::{decompose, DecompositionOutcome};
use smc_kernel::drivers::{assert_kernel_size, kernelize, ClassSpec, GraphClass, Outcome};
use smc_kernel::gen::Partition;
use smc_kernel::oracle::{answer_exact_capped, beta_exact_capped, is_balanced, pt};
use smc_kernel::rules::{applicable, RuleContext};
use smc_kernel::{Instance, SignedGraph};

use crate::record::{read_graph, read_sidecar, RunRecord, SCHEMA};
use crate::Failure;

pub const CHECKS: [&str; 6] = ["oracle", "decompose", "rules", "kernel", "bounds", "replay"];

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Tally {
    pub cases: usize,
    pub violations: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub file: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub files: usize,
    pub k_min: i64,
    pub k_max: i64,
    pub checks: BTreeMap<&'static str, Tally>,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<10} {:>8} {:>10} {:>8}\n", "check", "cases", "violations", "skipped");
        for (name, t) in &self.checks {
            out += &format!("{:<10} {:>8} {:>10} {:>8}\n", name, t.cases, t.violations, t.skipped);
        }
        out
    }
}

#[derive(Default)]
struct FileResult {
    checks: BTreeMap<&'static str, Tally>,
    violations: Vec<Violation>,
}

impl FileResult {
    fn record(&mut self, file: &Path, k: Option<i64>, check: &'static str, outcome: Result<(), String>) {
        let t = self.checks.entry(check).or_default();
        t.cases += 1;
        if let Err(detail) = outcome {
            t.violations += 1;
            self.violations.push(Violation { file: file.to_owned(), k, check, detail });
        }
    }

    fn skip(&mut self, check: &'static str) {
        self.checks.entry(check).or_default().skipped += 1;
    }
}

/// Graph files under `path`: the file itself, or every `*.sg` file of a
/// directory in name order.
pub fn corpus_files(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    if path.is_file() {
        return Ok(vec![path.to_owned()]);
    }
    let entries = fs::read_dir(path).map_err(|e| Failure::io(path, e))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "sg"))
        .collect();
    files.sort();
    Ok(files)
}

fn class_of(partition: &Partition) -> GraphClass {
    match partition {
        Partition::Split(_) => GraphClass::Split,
        Partition::Rl(rl) => GraphClass::Rl { r: rl.independent.len(), l: rl.cliques.len() },
    }
}

fn check_oracle(g: &SignedGraph, cap: usize) -> Result<(), String> {
    let cert = is_balanced(g);
    if !cert.verify(g) {
        return Err("balance certificate does not verify".into());
    }
    let beta = beta_exact_capped(g, cap).map_err(|e| e.to_string())?.beta;
    if cert.is_balanced() != (beta == g.m()) {
        return Err(format!("balance checker disagrees with β = {beta}, m = {}", g.m()));
    }
    // Opposite-sign pairs can fall below the bound.
    if !g.has_opposite_pair() && (4 * beta as i64) < pt(g).quarters() {
        return Err(format!("β = {beta} below the lower bound"));
    }
    Ok(())
}

fn check_decompose(inst: &Instance, truth: Option<bool>) -> Result<Option<(Vec<usize>, SignedGraph)>, String> {
    match decompose(inst).map_err(|e| e.to_string())? {
        DecompositionOutcome::Yes { credit, .. } => {
            if credit < inst.k {
                return Err(format!("credit {credit} below k"));
            }
            if truth == Some(false) {
                return Err("decomposition certified a no-instance".into());
            }
            Ok(None)
        }
        DecompositionOutcome::Reduced { modulator, switched, .. } => {
            if modulator.len() as i64 > 3 * inst.k {
                return Err(format!("|S| = {} exceeds 3k", modulator.len()));
            }
            Ok(Some((modulator, switched)))
        }
    }
}

fn check_rules(inst: &Instance, s: &[usize], cap: usize) -> Result<(), String> {
    let ctx = RuleContext::new(inst.clone(), s).map_err(|e| e.to_string())?;
    let before = answer_exact_capped(&inst.graph, inst.k, cap).map_err(|e| e.to_string())?;
    for app in applicable(&ctx) {
        let (next, step) = app.apply(&ctx).map_err(|e| e.to_string())?;
        let after = answer_exact_capped(next.graph(), next.k(), cap).map_err(|e| e.to_string())?;
        if before != after {
            return Err(format!("{:?} changed the answer from {before} to {after}", step.rule));
        }
    }
    Ok(())
}

fn verify_file(path: &Path, k_min: i64, k_max: i64, cap: usize) -> FileResult {
    let mut res = FileResult::default();
    let (g, _) = match read_graph(path) {
        Ok(x) => x,
        Err(e) => {
            res.record(path, None, "oracle", Err(e.to_string()));
            return res;
        }
    };
    let spec = match read_sidecar(path) {
        Ok(Some(sc)) => match sc.partition {
            Some(p) => ClassSpec::with(class_of(&p), Some(p)),
            None => ClassSpec::general(),
        },
        Ok(None) => ClassSpec::general(),
        Err(e) => {
            res.record(path, None, "bounds", Err(e.to_string()));
            ClassSpec::general()
        }
    };
    let exact = g.n() <= cap;
    if exact {
        res.record(path, None, "oracle", check_oracle(&g, cap));
    } else {
        res.skip("oracle");
    }
    if !g.is_connected() || g.has_opposite_pair() {
        for check in ["decompose", "rules", "kernel", "bounds"] {
            res.skip(check);
        }
        return res;
    }
    for k in k_min..=k_max {
        let inst = Instance::new(g.clone(), k);
        let truth = if exact { answer_exact_capped(&g, k, cap).ok() } else { None };
        match check_decompose(&inst, truth) {
            Ok(Some((s, switched))) if exact => {
                res.record(path, Some(k), "decompose", Ok(()));
                res.record(path, Some(k), "rules", check_rules(&Instance::new(switched, k), &s, cap));
            }
            other => {
                res.record(path, Some(k), "decompose", other.map(|_| ()));
                res.skip("rules");
            }
        }
        let report = match kernelize(&inst, &spec) {
            Ok(r) => r,
            Err(e) => {
                res.record(path, Some(k), "kernel", Err(e.to_string()));
                continue;
            }
        };
        let kernel_check = || -> Result<(), String> {
            if let Some(kernel) = &report.kernel {
                let replayed = report.trace.replay(&inst).map_err(|e| e.to_string())?;
                if replayed != *kernel {
                    return Err("trace replay does not reproduce the kernel".into());
                }
            }
            let Some(truth) = truth else { return Ok(()) };
            let got = match &report.kernel {
                None => true,
                Some(kernel) => answer_exact_capped(&kernel.graph, kernel.k, cap).map_err(|e| e.to_string())?,
            };
            if got != truth {
                return Err(format!("pipeline says {got}, oracle says {truth}"));
            }
            Ok(())
        };
        res.record(path, Some(k), "kernel", kernel_check());
        if spec.class == GraphClass::General {
            res.skip("bounds");
        } else {
            res.record(
                path,
                Some(k),
                "bounds",
                assert_kernel_size(&report, &spec).map(|_| ()).map_err(|e| e.to_string()),
            );
        }
    }
    res
}

pub fn verify_corpus(path: &Path, k_min: i64, k_max: i64, cap: usize) -> Result<VerifyReport, Failure> {
    let files = corpus_files(path)?;
    let results: Vec<FileResult> = files.par_iter().map(|f| verify_file(f, k_min, k_max, cap)).collect();
    let mut checks: BTreeMap<&'static str, Tally> =
        CHECKS.iter().filter(|&&c| c != "replay").map(|&c| (c, Tally::default())).collect();
    let mut violations = Vec::new();
    for r in results {
        for (name, t) in r.checks {
            let acc = checks.entry(name).or_default();
            acc.cases += t.cases;
            acc.violations += t.violations;
            acc.skipped += t.skipped;
        }
        violations.extend(r.violations);
    }
    Ok(VerifyReport { schema: SCHEMA, files: files.len(), k_min, k_max, checks, violations })
}

/// Replays the trace of a saved run against its input graph.
pub fn verify_record(graph: &Path, record: &RunRecord) -> Result<VerifyReport, Failure> {
    let (g, hash) = read_graph(graph)?;
    let mut res = FileResult::default();
    let k = Some(record.k);
    if hash != record.input.sha256 {
        res.record(
            graph,
            k,
            "replay",
            Err(format!("input hash {hash} differs from the recorded {}", record.input.sha256)),
        );
    }
    let inst = Instance::new(g, record.k);
    let outcome = match record.report.trace.replay(&inst) {
        Err(e) => Err(format!("trace does not apply: {e}")),
        Ok(replayed) => match (&record.report.outcome, &record.report.kernel) {
            (Outcome::Kernel, Some(kernel)) if replayed != *kernel => {
                Err("replay mismatch: trace does not reproduce the kernel".into())
            }
            (Outcome::Kernel, None) => Err("kernel outcome without a kernel".into()),
            _ => Ok(()),
        },
    };
    res.record(graph, k, "replay", outcome);
    let checks = res.checks;
    Ok(VerifyReport { schema: SCHEMA, files: 1, k_min: record.k, k_max: record.k, checks, violations: res.violations })
}
