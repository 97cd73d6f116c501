//! Command-line front end. [`run`] parses arguments, dispatches, and
//! returns the exit status together with the text for stdout and stderr.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::{self, Enumerator, Example12Params};
use crate::error::Error;
use crate::perm::DEFAULT_INTERSECTION_THRESHOLD;
use crate::scheme::{self, AutOptions, DEFAULT_AUT_BOUND, DEFAULT_NODE_BUDGET};
use crate::sring::{SRing, SRingJson};
use crate::structure;
use crate::zn::Section;

#[derive(Debug, Parser)]
#[command(name = "schur", version, about = "Schur rings over cyclic groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub budgets: Budgets,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Budgets {
    /// Node budget of one automorphism search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: usize,
    /// Largest modulus for which automorphism groups are computed.
    #[arg(long, global = true, default_value_t = DEFAULT_AUT_BOUND)]
    pub aut_bound: usize,
    /// Largest group order enumerated when intersecting.
    #[arg(long, global = true, default_value_t = DEFAULT_INTERSECTION_THRESHOLD)]
    pub intersection_threshold: u64,
    /// Largest number of S-rings held for one modulus.
    #[arg(long, global = true, default_value_t = catalog::DEFAULT_ENTRY_BUDGET)]
    pub enum_budget: usize,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

impl Budgets {
    fn aut(&self) -> AutOptions {
        AutOptions { bound: self.aut_bound, node_budget: self.node_budget }
    }
}

#[derive(Debug, Args)]
pub struct RingInput {
    /// Ring as inline JSON: {"n"?: int, "basic_sets": [[...], ...]}.
    #[arg(long, conflicts_with = "input")]
    pub ring: Option<String>,
    /// Path of a JSON file holding the ring.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Modulus, when the JSON does not carry one.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    GroupRing,
    Rank2,
    Cyclotomic,
    Tensor,
    TensorSubgroups,
    Gwp,
    Section,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the S-ring axioms.
    Validate(RingInput),
    /// Build a ring from the standard constructions.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        /// Unit generators for `cyclotomic`.
        #[arg(long, value_delimiter = ',')]
        gens: Vec<usize>,
        /// Left operand (tensor, gwp) or the ring (section), inline JSON.
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Lattice, radical, classification and projective classes.
    Analyze(RingInput),
    /// Automorphism group of the Cayley scheme.
    Aut(RingInput),
    /// Schurity test.
    Schurity(RingInput),
    /// The one-sided non-schurity certificate on the section `U/L`.
    Nonschurity {
        #[command(flatten)]
        input: RingInput,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        l: usize,
    },
    /// All S-rings over `Z_n`, one JSON object per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// One representative per multiplier orbit.
        #[arg(long)]
        classes: bool,
    },
    /// Schurity sweep over the given moduli, one JSON report per line.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
    },
    /// Subgroup of Aut(A) with Hol/Sym actions on singular sections.
    Resolve(RingInput),
    /// The non-schurian ring over `Z_{p^2 p3 p4}`.
    Example12 {
        #[arg(long, default_value_t = 5)]
        p: usize,
        #[arg(long, default_value_t = 11)]
        p3: usize,
        #[arg(long, default_value_t = 13)]
        p4: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        /// Use distinct isomorphisms for `M1` and `M2`.
        #[arg(long)]
        distinct: bool,
        /// Include the basic sets in the report.
        #[arg(long)]
        emit_ring: bool,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn domain(msg: impl Into<String>) -> Failure {
    Failure::Domain(msg.into())
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = dispatch(&cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, &text)
            .map(|_| String::new())
            .map_err(|e| domain(format!("cannot write {}: {e}", path.display()))),
        None => Ok(text),
    });
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(Failure::Domain(m)) => Outcome { code: 1, stdout: String::new(), stderr: error_json(&m) },
        Err(Failure::Budget(m)) => Outcome { code: 2, stdout: String::new(), stderr: error_json(&m) },
    }
}

fn error_json(msg: &str) -> String {
    format!("{}\n", json!({ "error": msg }))
}

fn pretty<T: Serialize>(v: &T) -> Res<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| domain(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn parse_ring_text(text: &str, n: Option<usize>) -> Res<SRing> {
    let raw: SRingJson = serde_json::from_str(text).map_err(|e| domain(format!("malformed ring JSON: {e}")))?;
    let n = n.or(raw.n).unwrap_or_else(|| raw.basic_sets.iter().map(Vec::len).sum());
    Ok(SRing::validate(n, raw.basic_sets)?)
}

fn read_ring(input: &RingInput) -> Res<SRing> {
    let text = match (&input.ring, &input.input) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| domain(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(domain("one of --ring or --input is required")),
    };
    parse_ring_text(&text, input.n)
}

fn required<T: Copy>(v: Option<T>, name: &str) -> Res<T> {
    v.ok_or_else(|| domain(format!("--{name} is required")))
}

fn required_ring(v: &Option<String>, name: &str) -> Res<SRing> {
    let text = v.as_ref().ok_or_else(|| domain(format!("--{name} is required")))?;
    parse_ring_text(text, None)
}

fn dispatch(cli: &Cli) -> Res<String> {
    let b = &cli.budgets;
    let opts = b.aut();
    match &cli.command {
        Command::Validate(input) => {
            let a = read_ring(input)?;
            pretty(&json!({ "valid": true, "n": a.n(), "rank": a.rank() }))
        }
        Command::Construct { kind, n, gens, left, right, u, l } => {
            let a = match kind {
                Kind::GroupRing => SRing::group_ring(required(*n, "n")?),
                Kind::Rank2 => SRing::rank2(required(*n, "n")?),
                Kind::Cyclotomic => SRing::cyclotomic(required(*n, "n")?, gens)?,
                Kind::Tensor => SRing::tensor(&required_ring(left, "left")?, &required_ring(right, "right")?)?,
                Kind::TensorSubgroups => {
                    SRing::tensor_on_subgroups(&required_ring(left, "left")?, &required_ring(right, "right")?)?
                }
                Kind::Gwp => {
                    let sec = Section::new(required(*n, "n")?, required(*u, "u")?, required(*l, "l")?)?;
                    SRing::generalized_wreath(&required_ring(left, "left")?, &required_ring(right, "right")?, sec)?
                }
                Kind::Section => {
                    let a = required_ring(left, "left")?;
                    a.section_ring(Section::new(a.n(), required(*u, "u")?, required(*l, "l")?)?)?
                }
            };
            pretty(&a)
        }
        Command::Analyze(input) => {
            let a = read_ring(input)?;
            let classes: Vec<_> = structure::proj_classes(&a)?.iter().map(|c| c.report()).collect();
            pretty(&json!({
                "n": a.n(),
                "rank": a.rank(),
                "lattice": a.subgroup_lattice().orders,
                "radical": a.radical()?.d,
                "classification": a.classify()?,
                "projective_classes": classes,
            }))
        }
        Command::Aut(input) => {
            let a = read_ring(input)?;
            let aut = scheme::aut_group_with(&a, opts)?;
            pretty(&json!({
                "order": aut.order().to_string(),
                "base": aut.base,
                "nodes": aut.nodes,
                "group": aut.group.to_json(),
                "stabilizer_orbits": aut.stabilizer_orbits(),
            }))
        }
        Command::Schurity(input) => {
            let a = read_ring(input)?;
            pretty(&scheme::schurity_report(&a, opts)?)
        }
        Command::Nonschurity { input, u, l } => {
            let a = read_ring(input)?;
            let sec = Section::new(a.n(), *u, *l)?;
            pretty(&scheme::nonschurity_criterion(&a, sec, opts, b.intersection_threshold)?)
        }
        Command::Enumerate { n, classes } => {
            let mut en = Enumerator::new(b.enum_budget);
            let cat = en.catalog(*n)?;
            if *classes {
                let mut out = String::new();
                for a in cat.multiplier_classes() {
                    let line = json!({ "n": a.n(), "basic_sets": a.basic_sets(), "provenance": cat.provenance(&a) });
                    let _ = writeln!(out, "{line}");
                }
                Ok(out)
            } else {
                Ok(cat.to_jsonl())
            }
        }
        Command::Sweep { ns } => {
            let reports = catalog::schurity_sweep(ns, opts, b.jobs)?;
            let mut out = String::new();
            for r in reports {
                let _ = writeln!(out, "{}", serde_json::to_string(&r).map_err(|e| domain(e.to_string()))?);
            }
            Ok(out)
        }
        Command::Resolve(input) => {
            let a = read_ring(input)?;
            let res = structure::resolve(&a, opts)?;
            pretty(&json!({
                "order": res.group.order().to_string(),
                "verified": res.verified,
                "extended": res.extended,
                "group": res.group.to_json(),
            }))
        }
        Command::Example12 { p, p3, p4, d, distinct, emit_ring } => {
            let params = Example12Params { p: *p, p3: *p3, p4: *p4, d: *d, distinct: *distinct };
            let ex = catalog::example12(params)?;
            let cert = scheme::nonschurity_criterion(&ex.ring, ex.section, opts, b.intersection_threshold)?;
            let mut report = json!({
                "n": ex.ring.n(),
                "params": params,
                "m_generator": ex.m_gen,
                "m1_generator": ex.m1_gen,
                "m2_generator": ex.m2_gen,
                "equal_factors": ex.equal_factors,
                "rank": ex.ring.rank(),
                "lattice": ex.ring.subgroup_lattice().orders,
                "section": ex.section,
                "nonschurian_certificate": cert.holds,
                "witness": cert.witness,
            });
            if *emit_ring {
                report["ring"] = serde_json::to_value(&ex.ring).map_err(|e| domain(e.to_string()))?;
            }
            pretty(&report)
        }
    }
}
