//! Differential fuzzing: random instances run through pairs of routes that
//! must agree.

use std::fmt::Write as _;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use hyperarb::conditions::{ConditionId, Verdict};
use hyperarb::gen::{self, GenConfig};
use hyperarb::gpoly::{build_t, feasible};
use hyperarb::matroid::ExtendedMatroid;
use hyperarb::orientation::{exhaustive_frank_orient, frank_orient, frank_orient_via_reduction, SetFunction};
use hyperarb::packing::{find_packing, PackingSpec};
use hyperarb::{Error, Instance, Matroid, MixedHypergraph};

/// A condition evaluator; the harness takes it as a parameter so a broken
/// one can be swapped in to prove mismatches get reported.
pub type Evaluator<'a> = &'a (dyn Fn(ConditionId, &Instance, u64) -> hyperarb::Result<Verdict> + Sync);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Rotate through the three families by instance id.
    All,
    Digraph,
    MixedGraph,
    MixedHypergraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Every packing condition against exhaustive packing search.
    ConditionOracle,
    /// The two forms of the matroid-reachability condition on digraphs.
    ReachabilityForms,
    /// Direct orientation, orientation through the reduction, and
    /// exhaustive search.
    OrientationReduction,
    /// Subpartition and element-set forms of the bounded packing condition
    /// against nonemptiness of the support polyhedron.
    SupportPolyhedron,
    /// Closed-form rank of the extended matroid against its independence
    /// oracle.
    RankFormula,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::ConditionOracle, Suite::ReachabilityForms, Suite::OrientationReduction, Suite::SupportPolyhedron, Suite::RankFormula];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ConditionOracle => "condition-oracle",
            Suite::ReachabilityForms => "reachability-forms",
            Suite::OrientationReduction => "orientation-reduction",
            Suite::SupportPolyhedron => "support-polyhedron",
            Suite::RankFormula => "rank-formula",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: u64,
    pub n_max: usize,
    pub family: Family,
    pub suites: Vec<Suite>,
    pub cap: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteCounts {
    pub checked: u64,
    pub mismatches: u64,
    /// Instances abandoned at the enumeration cap.
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub id: u64,
    pub suite: Suite,
    pub detail: String,
    /// The instance as JSON, ready for replay.
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub suites: Vec<(Suite, SuiteCounts)>,
    pub mismatch_list: Vec<Mismatch>,
    pub counterexample: Option<Mismatch>,
}

impl FuzzReport {
    pub fn mismatches(&self) -> u64 {
        self.suites.iter().map(|s| s.1.mismatches).sum()
    }

    pub fn to_json(&self) -> Value {
        let c = &self.config;
        json!({
            "seed": c.seed,
            "instances": c.count,
            "n_max": c.n_max,
            "family": c.family,
            "suites": self.suites.iter().map(|(s, n)| json!({
                "suite": s, "checked": n.checked, "mismatches": n.mismatches, "skipped": n.skipped,
            })).collect::<Vec<_>>(),
            "mismatches": self.mismatches(),
            "mismatch_list": self.mismatch_list.iter().map(|m| json!({
                "id": m.id, "suite": m.suite, "detail": m.detail,
            })).collect::<Vec<_>>(),
            "counterexample": self.counterexample.as_ref().map(|m| json!({
                "id": m.id,
                "suite": m.suite,
                "detail": m.detail,
                "instance": serde_json::from_str::<Value>(&m.instance).unwrap_or(Value::Null),
            })),
        })
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!("fuzz seed {} over {} instances, up to {} vertices\n", c.seed, c.count, c.n_max);
        for (s, n) in &self.suites {
            let _ = writeln!(out, "{:<22} {} checked, {} mismatches, {} skipped", s.name(), n.checked, n.mismatches, n.skipped);
        }
        match &self.counterexample {
            None => out.push_str("no mismatches"),
            Some(m) => {
                let _ = write!(out, "first counterexample: instance {} in {}: {}\n{}", m.id, m.suite.name(), m.detail, m.instance);
            }
        }
        out
    }
}

enum Check {
    Agree,
    Differ(String),
    Skipped,
    NotApplicable,
}

fn family_of(cfg: &FuzzConfig, id: u64) -> Family {
    match cfg.family {
        Family::All => [Family::Digraph, Family::MixedGraph, Family::MixedHypergraph][(id % 3) as usize],
        f => f,
    }
}

/// The instance fuzzed under `id`: a random graph with roots, matroid and
/// bounds, plus a supermodular `h` vanishing on both ends.
pub fn instance_for(cfg: &FuzzConfig, id: u64) -> Instance {
    let mut rng = gen::rng_for(cfg.seed, id);
    let gen_cfg = match family_of(cfg, id) {
        Family::Digraph => GenConfig::digraph(cfg.n_max),
        Family::MixedGraph => GenConfig::mixed_graph(cfg.n_max),
        _ => GenConfig::mixed_hypergraph(cfg.n_max),
    };
    let inst = gen::random_instance(&mut rng, &gen_cfg);
    let h = gen::random_supermodular(&mut rng, inst.n());
    inst.with_h(h.values().to_vec()).expect("h has one value per vertex set")
}

fn skip_or(e: Error) -> Check {
    match e {
        Error::CapExceeded { .. } => Check::Skipped,
        // the instance does not meet the precondition of this route
        Error::Unsupported(_) | Error::MissingField(_) | Error::Invalid(_) => Check::NotApplicable,
        e => Check::Differ(format!("error: {e}")),
    }
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return skip_or(e),
        }
    };
}

fn condition_oracle(inst: &Instance, evaluator: Evaluator, cap: u64) -> Vec<Check> {
    ConditionId::ALL
        .iter()
        .map(|&id| {
            let Some(spec) = attempt!(PackingSpec::for_condition(id, inst)) else {
                return Check::NotApplicable;
            };
            let holds = attempt!(evaluator(id, inst, cap)).holds();
            let packing = attempt!(find_packing(&inst.graph, &spec, cap));
            if holds == packing.is_some() {
                Check::Agree
            } else if holds {
                Check::Differ(format!("{} holds but no {} packing exists", id.name(), spec.species))
            } else {
                Check::Differ(format!("{} fails but a {} packing exists", id.name(), spec.species))
            }
        })
        .collect()
}

fn reachability_forms(inst: &Instance, evaluator: Evaluator, cap: u64) -> Check {
    if !inst.graph.is_digraph() {
        return Check::NotApplicable;
    }
    let a = attempt!(evaluator(ConditionId::Kiraly, inst, cap)).holds();
    let b = attempt!(evaluator(ConditionId::GyDigraph, inst, cap)).holds();
    if a == b {
        Check::Agree
    } else {
        Check::Differ(format!("KIRALY {a}, GY_DIGRAPH {b}"))
    }
}

fn orientation_reduction(inst: &Instance, cap: u64) -> Check {
    let g = attempt!(MixedHypergraph::new(inst.n(), inst.graph.hyperedges().to_vec(), vec![]));
    let h = attempt!(SetFunction::new(inst.n(), inst.h.clone().unwrap_or_default()));
    let direct = attempt!(frank_orient(&g, &h, cap)).is_found();
    let reduced = attempt!(frank_orient_via_reduction(&g, &h, cap)).is_found();
    let exhaustive = attempt!(exhaustive_frank_orient(&g, &h, cap)).is_some();
    if direct == reduced && direct == exhaustive {
        Check::Agree
    } else {
        Check::Differ(format!("direct {direct}, through the reduction {reduced}, exhaustive {exhaustive}"))
    }
}

fn support_polyhedron(inst: &Instance, evaluator: Evaluator, cap: u64) -> Check {
    let subpartitions = attempt!(evaluator(ConditionId::Main, inst, cap)).holds();
    let elements = attempt!(evaluator(ConditionId::Lemma1b, inst, cap)).holds();
    let t = attempt!(build_t(&inst.graph, attempt!(inst.bounds())));
    let nonempty = attempt!(feasible(&t, cap)).holds();
    if subpartitions == elements && elements == nonempty {
        Check::Agree
    } else {
        Check::Differ(format!(
            "subpartition form {subpartitions}, element-set form {elements}, polyhedron nonempty {nonempty}"
        ))
    }
}

fn rank_formula(inst: &Instance, cap: u64) -> Check {
    let k = attempt!(inst.bounds()).k.max(1) as usize;
    let formula = attempt!(ExtendedMatroid::new(&inst.graph, k));
    let table = attempt!(attempt!(Matroid::extended(&inst.graph, k)).rank_table(cap));
    for z in formula.ground().all().subsets() {
        let r = attempt!(formula.formula_rank(z, cap));
        if r != table[z.0 as usize] as usize {
            return Check::Differ(format!("k={k}, elements {:?}: formula {r}, independence {}", z.iter().collect::<Vec<_>>(), table[z.0 as usize]));
        }
    }
    Check::Agree
}

fn run_instance(cfg: &FuzzConfig, evaluator: Evaluator, id: u64) -> (Instance, Vec<(Suite, Check)>) {
    let inst = instance_for(cfg, id);
    let mut out = Vec::new();
    for &suite in &cfg.suites {
        match suite {
            Suite::ConditionOracle => {
                out.extend(condition_oracle(&inst, evaluator, cfg.cap).into_iter().map(|c| (suite, c)));
            }
            Suite::ReachabilityForms => out.push((suite, reachability_forms(&inst, evaluator, cfg.cap))),
            Suite::OrientationReduction => out.push((suite, orientation_reduction(&inst, cfg.cap))),
            Suite::SupportPolyhedron => out.push((suite, support_polyhedron(&inst, evaluator, cfg.cap))),
            Suite::RankFormula => out.push((suite, rank_formula(&inst, cfg.cap))),
        }
    }
    (inst, out)
}

/// Run every selected suite on `count` instances in parallel; the report
/// depends only on the configuration.
pub fn fuzz(cfg: &FuzzConfig, evaluator: Evaluator) -> FuzzReport {
    let mut results: Vec<(u64, Instance, Vec<(Suite, Check)>)> = (0..cfg.count)
        .into_par_iter()
        .map(|id| {
            let (inst, checks) = run_instance(cfg, evaluator, id);
            (id, inst, checks)
        })
        .collect();
    results.sort_by_key(|r| r.0);
    let mut suites: Vec<Suite> = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let mut counts: Vec<(Suite, SuiteCounts)> = suites.into_iter().map(|s| (s, SuiteCounts::default())).collect();
    let mut mismatch_list = Vec::new();
    for (id, inst, checks) in results {
        let mut skipped = Vec::new();
        for (suite, check) in checks {
            let n = &mut counts.iter_mut().find(|c| c.0 == suite).expect("suite listed").1;
            match check {
                Check::Agree => n.checked += 1,
                Check::Differ(detail) => {
                    n.checked += 1;
                    n.mismatches += 1;
                    mismatch_list.push(Mismatch { id, suite, detail, instance: inst.to_json() });
                }
                // a suite with several checks per instance counts one skip
                Check::Skipped if !skipped.contains(&suite) => {
                    n.skipped += 1;
                    skipped.push(suite);
                }
                Check::Skipped | Check::NotApplicable => {}
            }
        }
    }
    let counterexample = mismatch_list.first().cloned();
    FuzzReport { config: cfg.clone(), suites: counts, mismatch_list, counterexample }
}
