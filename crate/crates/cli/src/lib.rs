//! Command-line surface: argument parsing, command dispatch, and the fuzz
//! harness.

mod fuzz;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperarb::conditions::{evaluate, matroid_induced_h, ConditionId, Verdict, Violation};
use hyperarb::gpoly::{build_t, feasible, find_integer_point};
use hyperarb::matroid::ExtendedMatroid;
use hyperarb::orientation::{mixed_orient, SetFunction};
use hyperarb::packing::{corollary1_pack, find_packing, main_pack, mrb_mixed_pack, verify, Packing, PackingSpec, Species};
use hyperarb::{Error, Instance, Matroid, DEFAULT_CAP};

pub use fuzz::{fuzz, Evaluator, Family, FuzzConfig, FuzzReport, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HSource {
    /// `h(X) = -r(S_X)` from the roots and matroid of the instance.
    MatroidInduced,
    /// The `h` table stored in the instance.
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "hyperarb", version, about = "Arborescence packings and orientations of mixed hypergraphs")]
pub struct RunConfig {
    /// Enumeration cap per operation.
    #[arg(long, global = true, env = "HYPERARB_CAP", default_value_t = DEFAULT_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a packing or orientation condition.
    Check {
        #[arg(long)]
        theorem: ConditionId,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Orient the hyperedges so every set is covered as the condition asks.
    Orient {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = HSource::MatroidInduced)]
        h: HSource,
    },
    /// Find a packing: a species name (spanning, reachability,
    /// matroid-based, mrb, brl) or a constructive pipeline (main, regular,
    /// mixed-mrb), optionally followed by `:k=..,l=..,lprime=..`.
    Pack {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Check a packing file against a species.
    Verify {
        #[arg(long)]
        packing: PathBuf,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Rank of a set: in the matroid on the root copies, or with `--k` in
    /// the extended k-hypergraphic matroid of the instance.
    Rank {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Element indices; the whole ground when omitted.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// The support polyhedron of bounded packings: a 0/1 point or its
    /// nonemptiness.
    Tpoly {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, conflicts_with = "feasible")]
        point: bool,
        #[arg(long)]
        feasible: bool,
    },
    /// Random differential testing of the cross-checks.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Family::All)]
        family: Family,
        /// Restrict to these suites; all of them when omitted.
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        /// Write the first counterexample instance here.
        #[arg(long)]
        counterexample: Option<PathBuf>,
    },
}

/// What a command prints and the status it exits with.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub status: i32,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn new(status: i32, json: Value, text: impl Into<String>) -> Self {
        Self { status, json, text: text.into() }
    }

    pub fn render(&self, output: Output) -> String {
        match output {
            Output::Json => serde_json::to_string_pretty(&self.json).expect("reports serialize"),
            Output::Text => self.text.clone(),
        }
    }
}

fn status_of(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn error_report(e: &Error) -> Report {
    Report::new(status_of(e), json!({ "error": e.to_string() }), format!("error: {e}"))
}

/// Parse `args` (program name first), run, and print; returns the exit
/// status.
pub fn main_with(args: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let report = run(&config);
    let _ = writeln!(out, "{}", report.render(config.output));
    report.status
}

pub fn run(config: &RunConfig) -> Report {
    run_with(config, &evaluate)
}

/// [`run`] with the condition evaluator the fuzz harness compares against
/// its oracles replaced.
pub fn run_with(config: &RunConfig, evaluator: Evaluator) -> Report {
    match dispatch(config, evaluator) {
        Ok(r) => r,
        Err(e) => error_report(&e),
    }
}

fn load(path: &Path) -> hyperarb::Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Instance::from_json(&text)
}

fn violation_report(what: &str, v: &Violation, inst: &Instance) -> Report {
    let body = v.to_json(inst);
    let text = format!(
        "{what}: {:?} inequality fails, {} < {}, witness {}",
        v.inequality, v.lhs, v.rhs, body["witness"]
    );
    Report::new(EXIT_FAILS, json!({ "holds": false, "violation": body }), text)
}

fn dispatch(config: &RunConfig, evaluator: Evaluator) -> hyperarb::Result<Report> {
    let cap = config.cap;
    match &config.command {
        Command::Check { theorem, instance } => {
            let inst = load(instance)?;
            let verdict: Verdict = evaluate(*theorem, &inst, cap)?;
            Ok(match verdict.violation {
                None => Report::new(
                    EXIT_OK,
                    json!({ "theorem": theorem.name(), "holds": true }),
                    format!("{} holds", theorem.name()),
                ),
                Some(v) => {
                    let mut r = violation_report(&format!("{} fails", theorem.name()), &v, &inst);
                    r.json["theorem"] = json!(theorem.name());
                    r
                }
            })
        }
        Command::Orient { instance, h } => {
            let inst = load(instance)?;
            let values = match h {
                HSource::MatroidInduced => matroid_induced_h(&inst, cap)?,
                HSource::Table => inst.h.clone().ok_or(Error::MissingField("h"))?,
            };
            let h = SetFunction::new(inst.n(), values)?;
            Ok(match mixed_orient(&inst.graph, &h, cap)? {
                hyperarb::conditions::Outcome::Found(o) => {
                    let arcs: Vec<Value> = inst
                        .graph
                        .hyperedges()
                        .iter()
                        .zip(&o.heads)
                        .map(|(&e, &head)| json!({ "hyperedge": inst.set_names(e), "head": inst.name(head) }))
                        .collect();
                    let mut text = String::from("orientation found");
                    for a in &arcs {
                        let _ = write!(text, "\n  {} -> {}", a["hyperedge"], a["head"].as_str().unwrap_or_default());
                    }
                    Report::new(EXIT_OK, json!({ "found": true, "orientation": arcs }), text)
                }
                hyperarb::conditions::Outcome::Violated(v) => violation_report("no orientation", &v, &inst),
            })
        }
        Command::Pack { spec, instance } => {
            let inst = load(instance)?;
            let spec = PackSpec::parse(spec)?;
            let inst = spec.apply(inst)?;
            let found = spec.pack(&inst, cap)?;
            Ok(match found {
                Ok(p) => {
                    let body = p.to_json(&inst);
                    let text = format!("packing with {} members\n{}", p.members.len(), serde_json::to_string_pretty(&body).unwrap());
                    Report::new(EXIT_OK, body, text)
                }
                Err(Some(v)) => violation_report("no packing", &v, &inst),
                Err(None) => Report::new(EXIT_FAILS, json!({ "found": false }), "no packing exists"),
            })
        }
        Command::Verify { packing, spec, instance } => {
            let inst = load(instance)?;
            let spec = PackSpec::parse(spec)?;
            let inst = spec.apply(inst)?;
            let text = std::fs::read_to_string(packing).map_err(|e| Error::Parse(format!("{}: {e}", packing.display())))?;
            let value: Value = serde_json::from_str(&text)?;
            let p = Packing::from_json(&inst, &value)?;
            Ok(match verify(&inst.graph, &p, &spec.species_spec(&inst)?)? {
                None => Report::new(EXIT_OK, json!({ "valid": true }), "packing is valid"),
                Some(d) => Report::new(EXIT_FAILS, json!({ "valid": false, "defect": d.to_string() }), format!("invalid: {d}")),
            })
        }
        Command::Rank { instance, k, set } => {
            let inst = load(instance)?;
            rank_report(&inst, *k, set.as_deref(), cap)
        }
        Command::Tpoly { instance, point, .. } => {
            let inst = load(instance)?;
            let t = build_t(&inst.graph, inst.bounds()?)?;
            if *point {
                return Ok(match find_integer_point(&t, cap)? {
                    Some(z) => {
                        let vector: Vec<u8> = (0..t.ground.len()).map(|i| z.contains(i) as u8).collect();
                        let elements: Vec<Value> = z
                            .iter()
                            .map(|i| {
                                let d = t.ground.dyperedge(i);
                                json!({ "tails": inst.set_names(d.tails), "head": inst.name(d.head) })
                            })
                            .collect();
                        Report::new(
                            EXIT_OK,
                            json!({ "point": vector, "elements": elements }),
                            format!("point {vector:?}"),
                        )
                    }
                    None => Report::new(EXIT_FAILS, json!({ "point": null }), "the polyhedron has no 0/1 point"),
                });
            }
            Ok(match feasible(&t, cap)?.violation {
                None => Report::new(EXIT_OK, json!({ "feasible": true }), "the polyhedron is nonempty"),
                Some(v) => {
                    let mut r = violation_report("the polyhedron is empty", &v, &inst);
                    r.json["feasible"] = json!(false);
                    r
                }
            })
        }
        Command::Fuzz { seed, count, n_max, family, suite, counterexample } => {
            if *n_max == 0 {
                return Err(Error::Invalid("--n-max must be positive".into()));
            }
            let cfg = FuzzConfig {
                seed: *seed,
                count: *count,
                n_max: *n_max,
                family: *family,
                suites: if suite.is_empty() { Suite::ALL.to_vec() } else { suite.clone() },
                cap,
            };
            let report = fuzz(&cfg, evaluator);
            if let (Some(path), Some(c)) = (counterexample, &report.counterexample) {
                std::fs::write(path, &c.instance).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            }
            let status = if report.mismatches() == 0 { EXIT_OK } else { EXIT_FAILS };
            Ok(Report::new(status, report.to_json(), report.to_text()))
        }
    }
}

fn rank_report(inst: &Instance, k: Option<usize>, set: Option<&[usize]>, cap: u64) -> hyperarb::Result<Report> {
    let pick = |len: usize| -> hyperarb::Result<hyperarb::ElementSet> {
        match set {
            None => Ok(hyperarb::ElementSet::full(len)),
            Some(items) => items
                .iter()
                .map(|&e| if e < len { Ok(e) } else { Err(Error::UnknownElement(format!("element {e}"))) })
                .collect(),
        }
    };
    match k {
        Some(k) => {
            let formula = ExtendedMatroid::new(&inst.graph, k)?;
            let z = pick(formula.ground().len())?;
            let (rank, partition) = formula.formula_rank_with_partition(z, cap)?;
            let independent = Matroid::extended(&inst.graph, k)?.rank_with(z, &mut hyperarb::Budget::new(cap))?;
            if independent != rank {
                return Err(Error::Inconsistent(format!("formula rank {rank} but independence rank {independent}")));
            }
            let blocks: Vec<Vec<String>> = partition.iter().map(|&b| inst.set_names(b)).collect();
            Ok(Report::new(
                EXIT_OK,
                json!({ "rank": rank, "elements": z.iter().collect::<Vec<_>>(), "partition": blocks }),
                format!("rank {rank}, attained by partition {blocks:?}"),
            ))
        }
        None => {
            let m = inst.matroid()?;
            let z = pick(m.len())?;
            let rank = m.rank_with(z, &mut hyperarb::Budget::new(cap))?;
            Ok(Report::new(
                EXIT_OK,
                json!({ "rank": rank, "elements": z.iter().collect::<Vec<_>>() }),
                format!("rank {rank}"),
            ))
        }
    }
}

/// A packing request: a species searched exhaustively, or one of the
/// constructive pipelines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackSpec {
    pub kind: PackKind,
    pub k: Option<i64>,
    pub l: Option<i64>,
    pub lprime: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackKind {
    Search(Species),
    Main,
    Regular,
    MixedMrb,
}

impl PackSpec {
    pub fn parse(text: &str) -> hyperarb::Result<Self> {
        let (name, params) = text.split_once(':').unwrap_or((text, ""));
        let kind = match name.trim().to_ascii_lowercase().as_str() {
            "main" => PackKind::Main,
            "regular" => PackKind::Regular,
            "mixed-mrb" => PackKind::MixedMrb,
            other => PackKind::Search(other.parse()?),
        };
        let mut spec = PackSpec { kind, k: None, l: None, lprime: None };
        for item in params.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("expected key=value, got `{item}`")))?;
            let value: i64 = value.trim().parse().map_err(|_| Error::Invalid(format!("`{value}` is not an integer")))?;
            match key.trim() {
                "k" => spec.k = Some(value),
                "l" => spec.l = Some(value),
                "lprime" => spec.lprime = Some(value),
                other => return Err(Error::Invalid(format!("unknown parameter `{other}`"))),
            }
        }
        Ok(spec)
    }

    /// Override the bounds of the instance with the given parameters.
    pub fn apply(&self, mut inst: Instance) -> hyperarb::Result<Instance> {
        if self.k.is_none() && self.l.is_none() && self.lprime.is_none() {
            return Ok(inst);
        }
        let mut b = inst.bounds()?.clone();
        b.k = self.k.unwrap_or(b.k);
        b.l = self.l.unwrap_or(b.l);
        b.lprime = self.lprime.unwrap_or(b.lprime);
        inst.bounds = Some(hyperarb::Bounds::new(b.f, b.g, b.k, b.l, b.lprime)?);
        Ok(inst)
    }

    /// The species a packing produced by this request belongs to.
    pub fn species_spec(&self, inst: &Instance) -> hyperarb::Result<PackingSpec> {
        match self.kind {
            PackKind::Search(s) => PackingSpec::from_instance(s, inst),
            PackKind::Main => PackingSpec::from_instance(Species::BoundedRegularLimited, inst),
            PackKind::Regular => Ok(PackingSpec::for_condition(ConditionId::Cor1, inst)?.expect("has a packing species")),
            PackKind::MixedMrb => PackingSpec::from_instance(Species::MatroidReachabilityBased, inst),
        }
    }

    /// The packing, or why none exists: a violated inequality when the
    /// pipeline certifies one, `None` after an exhaustive search.
    pub fn pack(&self, inst: &Instance, cap: u64) -> hyperarb::Result<Result<Packing, Option<Violation>>> {
        use hyperarb::conditions::Outcome;
        let outcome = match self.kind {
            PackKind::Search(_) => {
                return Ok(find_packing(&inst.graph, &self.species_spec(inst)?, cap)?.ok_or(None));
            }
            PackKind::Main => main_pack(&inst.graph, inst.bounds()?, cap)?,
            PackKind::Regular => {
                let k = usize::try_from(inst.bounds()?.k).map_err(|_| Error::Invalid("negative k".into()))?;
                corollary1_pack(&inst.graph, inst.roots()?, k, cap)?
            }
            PackKind::MixedMrb => {
                let m = inst.matroid.clone().ok_or(Error::MissingField("matroid"))?;
                mrb_mixed_pack(&inst.graph, inst.roots()?, m, cap)?
            }
        };
        Ok(match outcome {
            Outcome::Found(p) => Ok(p),
            Outcome::Violated(v) => Err(Some(v)),
        })
    }
}
