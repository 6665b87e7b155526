//! Command-line surface: build named structures, run validators and axiom
//! suites, evaluate equations, play games, synthesize formulas, query
//! graphs, apply structure surgery and search for representations.
//!
//! Exit codes: 0 all checks pass, 1 a check failed (witness in the report),
//! 2 usage or format error, 3 budget exhausted / unknown.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::algebra::{
    make_algebra, make_algebra_unchecked, neat_reduct, ra_reduct, relativize, signature_reduct,
    structure_of_algebra, Signature,
};
use crate::element::Element;
use crate::error::{AlcError, Result};
use crate::games;
use crate::graphs;
use crate::repsearch;
use crate::structures::{self, jsonio, named, surgery, AtomStructure};
use crate::synth;
use crate::termlang::{self, suites, CheckOptions};

#[derive(Parser)]
#[command(
    name = "alc",
    version,
    about = "Finite algebras of relations: atom structures, games, axiom synthesis"
)]
struct Cli {
    /// report format: text or json
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// include wall-clock timings in the report (off keeps reports
    /// byte-identical across runs)
    #[arg(long, global = true)]
    timings: bool,
    /// seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// budget for bounded commands (samples, search steps)
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a named atom structure and write it to a file
    Build {
        #[command(subcommand)]
        what: BuildCmd,
    },
    /// Run the structure validator on a file
    Validate { file: PathBuf },
    /// Run an axiom suite on the complex algebra of a structure file
    Check {
        #[arg(long)]
        suite: String,
        file: PathBuf,
    },
    /// Check one equation on the complex algebra of a structure file
    Eval {
        #[arg(long)]
        eq: String,
        file: PathBuf,
    },
    /// Solve a representation game
    Game {
        #[command(subcommand)]
        what: GameCmd,
    },
    /// Generate formulas and equations
    Synth {
        #[command(subcommand)]
        what: SynthCmd,
    },
    /// Graph queries and generators
    Graph {
        #[command(subcommand)]
        what: GraphCmd,
    },
    /// Structure surgery and reducts
    Transform {
        #[command(subcommand)]
        what: TransformCmd,
    },
    /// Bounded-base representation search
    Represent {
        #[arg(long)]
        max_base: usize,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Basic matrices of a relation structure: induced cylindric structure
    /// and basis report
    Matrices {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The dimension-3 cylindric structure on the consistent triples
    Ca3 {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    Lyndon {
        #[arg(long)]
        u: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    Monk {
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    Anr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        psi: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Full set-algebra structure over a finite base
    Set {
        #[arg(long)]
        base: usize,
        #[arg(long)]
        dim: usize,
        /// include the coordinate-swap relations
        #[arg(long)]
        pea: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Graph-based relation structure
    Alpha {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        colours: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Graph-based polyadic-equality structure
    Eta {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum GameCmd {
    Atomic {
        #[arg(long)]
        nodes: usize,
        /// a round count or "fixpoint"
        #[arg(long)]
        rounds: String,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Element {
        #[arg(long)]
        rounds: usize,
        /// name of the starting atom
        #[arg(long)]
        atom: String,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SynthCmd {
    /// The depth-n game formula of the one-variable start network
    Psi(SynthArgs),
    /// The closed sentence over all non-zero starts
    Phi(SynthArgs),
    /// Discriminator equations of the closed sentence
    Eqs(SynthArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    depth: usize,
}

#[derive(Subcommand)]
enum GraphCmd {
    Chromatic {
        file: PathBuf,
    },
    Girth {
        file: PathBuf,
    },
    Erdos {
        #[arg(long)]
        chi: usize,
        #[arg(long)]
        girth: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a graph file
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum TransformCmd {
    Dilate {
        file: PathBuf,
        /// semicolon-separated sequences of comma-separated atom names
        #[arg(long)]
        psi: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    Twist {
        file: PathBuf,
        #[arg(long)]
        t: usize,
        /// semicolon-separated chosen atoms, one per slot
        #[arg(long)]
        xi: String,
        /// comma-separated permutation of the slots
        #[arg(long)]
        pi: String,
        /// per-slot partitions "a,b|c;d|e,f" (primed part | double-primed)
        #[arg(long)]
        parts: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    Split {
        file: PathBuf,
        #[arg(long)]
        atom: String,
        /// the atom is replaced by parts + 1 copies
        #[arg(long)]
        parts: usize,
        #[arg(long)]
        strict: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    Relativize {
        file: PathBuf,
        /// comma-separated atom names below the new unit
        #[arg(long)]
        atoms: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    Neat {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Relation-algebra reduct
    Ra {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Diagonal-free reduct
    Df {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

struct Report {
    command: Vec<String>,
    digest: Option<String>,
    seed: u64,
    outcome: serde_json::Value,
    text: Vec<String>,
    exit: i32,
    started: std::time::Instant,
}

impl Report {
    fn new(command: &[String], seed: u64) -> Report {
        Report {
            command: command.to_vec(),
            digest: None,
            seed,
            outcome: json!({}),
            text: Vec::new(),
            exit: 0,
            started: std::time::Instant::now(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn emit(self, format: &str, timings: bool) -> i32 {
        if format == "json" {
            let mut doc = json!({
                "schema": "alc-report-v1",
                "command": self.command,
                "inputs_digest": self.digest,
                "seed": self.seed,
                "outcome": self.outcome,
                "exit": self.exit,
            });
            if timings {
                doc["timings_ms"] = json!(self.started.elapsed().as_millis() as u64);
            }
            println!("{}", serde_json::to_string_pretty(&doc).expect("report"));
        } else {
            for l in &self.text {
                println!("{l}");
            }
            if timings {
                println!("elapsed: {} ms", self.started.elapsed().as_millis());
            }
        }
        self.exit
    }
}

fn fnv64(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

fn load_structure(path: &PathBuf, report: &mut Report) -> Result<AtomStructure> {
    let text = std::fs::read_to_string(path)?;
    report.digest = Some(fnv64(text.as_bytes()));
    jsonio::from_json(&text)
}

fn load_graph(path: &PathBuf, report: &mut Report) -> Result<graphs::Graph> {
    let text = std::fs::read_to_string(path)?;
    report.digest = Some(fnv64(text.as_bytes()));
    graphs::graph_from_json(&text)
}

fn write_structure(path: &PathBuf, s: &AtomStructure) -> Result<()> {
    std::fs::write(path, jsonio::to_json(s))?;
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let argv: Vec<String> = std::iter::once("alc".to_string()).chain(args).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut report = Report::new(&argv[1..], cli.seed);
    match dispatch(&cli, &mut report) {
        Ok(()) => report.emit(&cli.format, cli.timings),
        Err(AlcError::Budget(msg)) => {
            report.line(format!("unknown (budget): {msg}"));
            report.outcome = json!({"unknown": msg});
            report.exit = 3;
            report.emit(&cli.format, cli.timings)
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, report: &mut Report) -> Result<()> {
    let check_opts = CheckOptions {
        budget: cli.budget.unwrap_or(1 << 20),
        seed: cli.seed,
    };
    match &cli.cmd {
        Cmd::Build { what } => build(what, report),
        Cmd::Validate { file } => {
            let s = load_structure(file, report)?;
            let v = s.validate();
            report.outcome = json!({
                "valid": v.is_valid(),
                "violations": v.violations.iter().map(|x| json!({
                    "clause": x.clause, "witness": x.witness,
                })).collect::<Vec<_>>(),
            });
            if v.is_valid() {
                report.line("valid");
            } else {
                report.line(format!("invalid: {}", v.summary()));
                report.exit = 1;
            }
            Ok(())
        }
        Cmd::Check { suite, file } => {
            let s = load_structure(file, report)?;
            let alg = make_algebra_unchecked(&s);
            let kind: suites::SuiteKind = suite.parse()?;
            let sr = suites::axiom_suite(&alg, kind, check_opts)?;
            let mut items = Vec::new();
            for item in &sr.items {
                let status = match &item.verdict {
                    termlang::Verdict::HoldsExhaustive => json!("holds-exhaustive"),
                    termlang::Verdict::HoldsSampled { samples } => {
                        json!(format!("holds-sampled({samples})"))
                    }
                    termlang::Verdict::Fails { witness } => json!({
                        "fails": witness.iter().map(|(v, e)| {
                            (v.clone(), e.iter().collect::<Vec<usize>>())
                        }).collect::<BTreeMap<_,_>>(),
                    }),
                };
                items.push(json!({
                    "axiom": item.name,
                    "note": item.note,
                    "verdict": status,
                }));
            }
            report.outcome = json!({"suite": suite, "pass": sr.pass(), "items": items});
            if sr.pass() {
                report.line(format!("{suite} suite: pass ({} axioms)", sr.items.len()));
            } else {
                let first = sr.first_failure().expect("failing item");
                report.line(format!("{suite} suite: FAIL at {}", first.name));
                report.exit = 1;
            }
            Ok(())
        }
        Cmd::Eval { eq, file } => {
            let s = load_structure(file, report)?;
            let alg = make_algebra_unchecked(&s);
            let equation = termlang::parse_equation(eq)?;
            let verdict = termlang::check_equation(&alg, &equation, check_opts)?;
            match &verdict {
                termlang::Verdict::HoldsExhaustive => {
                    report.line("holds (exhaustive)");
                    report.outcome = json!({"verdict": "holds-exhaustive"});
                }
                termlang::Verdict::HoldsSampled { samples } => {
                    report.line(format!("holds (sampled, {samples} assignments)"));
                    report.outcome = json!({"verdict": "holds-sampled", "samples": samples});
                }
                termlang::Verdict::Fails { witness } => {
                    let w: BTreeMap<String, Vec<usize>> = witness
                        .iter()
                        .map(|(v, e)| (v.clone(), e.iter().collect()))
                        .collect();
                    report.line(format!("fails at {w:?}"));
                    report.outcome = json!({"verdict": "fails", "witness": w});
                    report.exit = 1;
                }
            }
            Ok(())
        }
        Cmd::Game { what } => game(what, cli, report),
        Cmd::Synth { what } => synth_cmd(what, report),
        Cmd::Graph { what } => graph_cmd(what, cli, report),
        Cmd::Transform { what } => transform(what, report),
        Cmd::Represent {
            max_base,
            file,
            output,
        } => {
            let s = load_structure(file, report)?;
            let alg = make_algebra_unchecked(&s);
            let opts = repsearch::RepOptions {
                step_budget: cli.budget.unwrap_or(40_000_000),
            };
            match repsearch::find_representation(&alg, *max_base, opts)? {
                repsearch::RepOutcome::Found(rep) => {
                    report.line(format!("found at base {}", rep.base));
                    report.outcome = json!({"found": true, "base": rep.base});
                    if let Some(path) = output {
                        std::fs::write(path, repsearch::representation_to_json(&rep))?;
                    }
                }
                repsearch::RepOutcome::NoneUpTo(n) => {
                    report.line(format!("none up to base {n} (not a refutation)"));
                    report.outcome = json!({"found": false, "none_up_to": n});
                    report.exit = 1;
                }
                repsearch::RepOutcome::Unknown(msg) => {
                    report.line(format!("unknown: {msg}"));
                    report.outcome = json!({"unknown": msg});
                    report.exit = 3;
                }
            }
            Ok(())
        }
        Cmd::Matrices { dim, file, output } => {
            let s = load_structure(file, report)?;
            let AtomStructure::Ra(ra) = s else {
                return Err(AlcError::InvalidParameter(
                    "matrices needs a relation structure".into(),
                ));
            };
            let (ms, induced, basis) = structures::bridge::basic_matrices(&ra, *dim)?;
            report.line(format!(
                "{} matrices, induced structure valid: {}, basis: {}",
                ms.len(),
                basis.induced_valid,
                basis.is_basis()
            ));
            report.outcome = json!({
                "matrices": ms.len(),
                "induced_valid": basis.induced_valid,
                "is_basis": basis.is_basis(),
                "missing_atom": basis.missing_atom,
                "missing_extension": basis.missing_extension,
            });
            if let Some(path) = output {
                write_structure(path, &AtomStructure::Ca(induced))?;
            }
            if !basis.is_basis() {
                report.exit = 1;
            }
            Ok(())
        }
        Cmd::Ca3 { file, output } => {
            let s = load_structure(file, report)?;
            let AtomStructure::Ra(ra) = s else {
                return Err(AlcError::InvalidParameter(
                    "ca3 needs a relation structure".into(),
                ));
            };
            let ca = structures::bridge::ca3_from_ra(&ra)?;
            report.line(format!("{} consistent triples", ca.atom_count()));
            report.outcome = json!({"atoms": ca.atom_count()});
            write_structure(output, &AtomStructure::Ca(ca))?;
            Ok(())
        }
    }
}

fn build(what: &BuildCmd, report: &mut Report) -> Result<()> {
    let (s, path) = match what {
        BuildCmd::Lyndon { u, output } => (AtomStructure::Ra(named::lyndon(*u)?), output.clone()),
        BuildCmd::Monk { k, output } => (AtomStructure::Ra(named::monk_ek(*k)?), output.clone()),
        BuildCmd::Anr { n, r, psi, output } => (
            AtomStructure::Ra(named::a_n_r(*n, *r, *psi)?),
            output.clone(),
        ),
        BuildCmd::Set {
            base,
            dim,
            pea,
            output,
        } => {
            let s = if *pea {
                AtomStructure::Pea(named::full_pea_set_structure(*base, *dim))
            } else {
                AtomStructure::Ca(named::full_ca_set_structure(*base, *dim))
            };
            (s, output.clone())
        }
        BuildCmd::Alpha {
            graph,
            colours,
            output,
        } => {
            let g = load_graph(graph, report)?;
            (
                AtomStructure::Ra(structures::graph_alg::alpha_graph(&g, *colours)?),
                output.clone(),
            )
        }
        BuildCmd::Eta { graph, dim, output } => {
            let g = load_graph(graph, report)?;
            (
                AtomStructure::Pea(structures::graph_alg::eta_graph(&g, *dim)?),
                output.clone(),
            )
        }
    };
    write_structure(&path, &s)?;
    report.line(format!(
        "wrote {} atoms to {}",
        s.atom_names().len(),
        path.display()
    ));
    report.outcome = json!({"atoms": s.atom_names().len(), "file": path.display().to_string()});
    Ok(())
}

fn game(what: &GameCmd, cli: &Cli, report: &mut Report) -> Result<()> {
    match what {
        GameCmd::Atomic {
            nodes,
            rounds,
            file,
            output,
        } => {
            let s = load_structure(file, report)?;
            let rounds = if rounds == "fixpoint" {
                games::Rounds::Fixpoint
            } else {
                games::Rounds::Finite(rounds.parse().map_err(|_| {
                    AlcError::InvalidParameter("rounds must be a number or \"fixpoint\"".into())
                })?)
            };
            let opts = games::AtomicGameOptions {
                position_budget: cli.budget.unwrap_or(500_000) as usize,
                fresh_nodes_only: false,
            };
            let sol = match s {
                AtomStructure::Ra(ra) => games::atomic_game_on_ra(&ra, *nodes, rounds, opts)?,
                AtomStructure::Ca(ca) => games::solve_atomic_game(&ca, *nodes, rounds, opts)?,
                AtomStructure::Pea(p) => games::solve_atomic_game(&p.ca, *nodes, rounds, opts)?,
                AtomStructure::Df(_) => {
                    return Err(AlcError::InvalidParameter(
                        "the atomic game needs diagonal data".into(),
                    ))
                }
            };
            report.line(format!(
                "winner: {:?} ({} positions, {} survivors)",
                sol.verdict.winner, sol.positions, sol.survivors
            ));
            report.outcome = serde_json::to_value(&sol.verdict).expect("verdict");
            if let Some(path) = output {
                std::fs::write(path, games::trace::atomic_trace_json(&sol))?;
            }
            report.exit = match sol.verdict.winner {
                games::Winner::Exists => 0,
                games::Winner::Forall => 1,
                games::Winner::Unknown => 3,
            };
            Ok(())
        }
        GameCmd::Element {
            rounds,
            atom,
            file,
            output,
        } => {
            let s = load_structure(file, report)?;
            let alg = make_algebra_unchecked(&s);
            let idx = alg
                .atom_index(atom)
                .ok_or_else(|| AlcError::UnknownAtom(atom.clone()))?;
            let opts = games::ElementGameOptions::default();
            let sol = games::solve_element_game(&alg, &alg.atom(idx), *rounds, opts)?;
            report.line(format!(
                "winner: {:?}{}",
                sol.verdict.winner,
                if sol.verdict.restricted_forall {
                    " (restricted opponent sweep)"
                } else {
                    ""
                }
            ));
            report.outcome = serde_json::to_value(&sol.verdict).expect("verdict");
            if let Some(path) = output {
                std::fs::write(path, games::trace::element_trace_json(&sol))?;
            }
            report.exit = match sol.verdict.winner {
                games::Winner::Exists => 0,
                games::Winner::Forall => 1,
                games::Winner::Unknown => 3,
            };
            Ok(())
        }
    }
}

fn synth_cmd(what: &SynthCmd, report: &mut Report) -> Result<()> {
    let budget = 1 << 22;
    match what {
        SynthCmd::Psi(args) => {
            let f = synth::psi_formula(&synth::j_x(args.dim, "x"), args.depth, args.dim, budget)?;
            report.line(synth::print_sexpr(&f));
            report.outcome = json!({"atoms": f.atom_count(), "size": f.size()});
            Ok(())
        }
        SynthCmd::Phi(args) => {
            let f = synth::phi_sentence(args.depth, args.dim, budget)?;
            report.line(synth::print_sexpr(&f));
            report.outcome = json!({"atoms": f.atom_count(), "size": f.size()});
            Ok(())
        }
        SynthCmd::Eqs(args) => {
            let f = synth::phi_sentence(args.depth, args.dim, budget)?;
            let eqs = synth::to_equation(&f, args.dim)?;
            for eq in &eqs {
                report.line(format!(
                    "{} = {}",
                    termlang::print_term(&eq.lhs),
                    termlang::print_term(&eq.rhs)
                ));
            }
            report.outcome = json!({"equations": eqs.len()});
            Ok(())
        }
    }
}

fn graph_cmd(what: &GraphCmd, cli: &Cli, report: &mut Report) -> Result<()> {
    match what {
        GraphCmd::Chromatic { file } => {
            let g = load_graph(file, report)?;
            let chi = graphs::chromatic_number(&g)?;
            report.line(format!("chromatic number: {chi}"));
            report.outcome = json!({"chromatic": chi});
            Ok(())
        }
        GraphCmd::Girth { file } => {
            let g = load_graph(file, report)?;
            let girth = graphs::girth(&g);
            match girth {
                Some(v) => report.line(format!("girth: {v}")),
                None => report.line("girth: none (forest)".to_string()),
            }
            report.outcome = json!({"girth": girth});
            Ok(())
        }
        GraphCmd::Erdos { chi, girth, output } => {
            let budget = cli.budget.unwrap_or(2000) as usize;
            match graphs::erdos_search(*chi, *girth, budget, cli.seed) {
                graphs::ErdosOutcome::Found(g) => {
                    report.line(format!(
                        "found: {} vertices, {} edges",
                        g.vertex_count(),
                        g.edge_count()
                    ));
                    report.outcome = json!({
                        "found": true,
                        "vertices": g.vertex_count(),
                        "edges": g.edge_count(),
                    });
                    if let Some(path) = output {
                        std::fs::write(path, graphs::graph_to_json(&g))?;
                    }
                }
                graphs::ErdosOutcome::Exhausted { samples } => {
                    report.line(format!(
                        "budget exhausted after {samples} samples (not a refutation)"
                    ));
                    report.outcome = json!({"found": false, "samples": samples});
                    report.exit = 3;
                }
            }
            Ok(())
        }
        GraphCmd::Gen { kind, n, p, output } => {
            let g = match kind.as_str() {
                "complete" => graphs::generate(graphs::GraphKind::Complete(*n)),
                "cycle" => graphs::generate(graphs::GraphKind::Cycle(*n)),
                "edgeless" => graphs::generate(graphs::GraphKind::Edgeless(*n)),
                "random" => graphs::generate(graphs::GraphKind::Random {
                    n: *n,
                    p: *p,
                    seed: cli.seed,
                }),
                other => {
                    return Err(AlcError::InvalidParameter(format!(
                        "unknown graph kind {other}"
                    )))
                }
            };
            std::fs::write(output, graphs::graph_to_json(&g))?;
            report.line(format!("wrote {} to {}", kind, output.display()));
            report.outcome = json!({"vertices": g.vertex_count(), "edges": g.edge_count()});
            Ok(())
        }
    }
}

fn parse_atom_list(s: &AtomStructure, text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|name| {
            let name = name.trim();
            s.atom_names()
                .iter()
                .position(|a| a == name)
                .ok_or_else(|| AlcError::UnknownAtom(name.into()))
        })
        .collect()
}

fn transform(what: &TransformCmd, report: &mut Report) -> Result<()> {
    match what {
        TransformCmd::Dilate { file, psi, output } => {
            let s = load_structure(file, report)?;
            let AtomStructure::Ca(ca) = &s else {
                return Err(AlcError::InvalidParameter(
                    "dilation acts on cylindric structures".into(),
                ));
            };
            let psis: Vec<Vec<usize>> = psi
                .split(';')
                .filter(|p| !p.is_empty())
                .map(|p| parse_atom_list(&s, p))
                .collect::<Result<_>>()?;
            let out = surgery::dilate(ca, &psis)?;
            report.line(format!("dilated to {} atoms", out.atom_count()));
            report.outcome = json!({"atoms": out.atom_count()});
            write_structure(output, &AtomStructure::Ca(out))
        }
        TransformCmd::Twist {
            file,
            t,
            xi,
            pi,
            parts,
            output,
        } => {
            let s = load_structure(file, report)?;
            let AtomStructure::Ca(ca) = &s else {
                return Err(AlcError::InvalidParameter(
                    "twisting acts on cylindric structures".into(),
                ));
            };
            let xi: Vec<usize> = xi
                .split(';')
                .map(|name| parse_atom_list(&s, name).map(|v| v[0]))
                .collect::<Result<_>>()?;
            let pi: Vec<usize> = pi
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| AlcError::InvalidParameter("bad permutation".into()))
                })
                .collect::<std::result::Result<_, _>>()?;
            let partitions: Vec<(Vec<usize>, Vec<usize>)> = parts
                .split(';')
                .map(|slot| {
                    let mut halves = slot.split('|');
                    let first = halves.next().unwrap_or("");
                    let second = halves.next().unwrap_or("");
                    let p1 = if first.trim().is_empty() {
                        Vec::new()
                    } else {
                        parse_atom_list(&s, first)?
                    };
                    let p2 = if second.trim().is_empty() {
                        Vec::new()
                    } else {
                        parse_atom_list(&s, second)?
                    };
                    Ok((p1, p2))
                })
                .collect::<Result<_>>()?;
            let params = surgery::TwistParams {
                t: *t,
                xi,
                pi,
                partitions,
            };
            let out = surgery::twist(ca, &params)?;
            report.line("twisted".to_string());
            report.outcome = json!({"atoms": out.atom_count()});
            write_structure(output, &AtomStructure::Ca(out))
        }
        TransformCmd::Split {
            file,
            atom,
            parts,
            strict,
            output,
        } => {
            let s = load_structure(file, report)?;
            let idx = parse_atom_list(&s, atom)?[0];
            let out = surgery::split_atom(&s, idx, *parts, *strict)?;
            report.line(format!("split into {} atoms", out.atom_names().len()));
            report.outcome = json!({"atoms": out.atom_names().len()});
            write_structure(output, &out)
        }
        TransformCmd::Relativize {
            file,
            atoms,
            output,
        } => {
            let s = load_structure(file, report)?;
            let alg = make_algebra_unchecked(&s);
            let unit =
                Element::from_bits(alg.atom_count(), parse_atom_list(&s, atoms)?.into_iter());
            let rl = relativize(&alg, &unit)?;
            let out = structure_of_algebra(&rl)?;
            report.line(format!(
                "relativized to {} atoms (axioms not guaranteed)",
                rl.atom_count()
            ));
            report.outcome = json!({"atoms": rl.atom_count()});
            write_structure(output, &out)
        }
        TransformCmd::Neat { file, k, output } => {
            let s = load_structure(file, report)?;
            let alg = make_algebra(&s)?;
            let nr = neat_reduct(&alg, *k)?;
            let out = structure_of_algebra(&nr)?;
            report.line(format!("neat reduct with {} atoms", nr.atom_count()));
            report.outcome = json!({"atoms": nr.atom_count()});
            write_structure(output, &out)
        }
        TransformCmd::Ra { file, output } => {
            let s = load_structure(file, report)?;
            let alg = make_algebra(&s)?;
            let ra = ra_reduct(&alg)?;
            let out = structure_of_algebra(&ra)?;
            report.line(format!("relation reduct with {} atoms", ra.atom_count()));
            report.outcome = json!({"atoms": ra.atom_count()});
            write_structure(output, &out)
        }
        TransformCmd::Df { file, output } => {
            let s = load_structure(file, report)?;
            let alg = make_algebra_unchecked(&s);
            let df = signature_reduct(&alg, Signature::Df(alg.dim()))?;
            let out = structure_of_algebra(&df)?;
            report.line("dropped the diagonal data".to_string());
            report.outcome = json!({"atoms": df.atom_count()});
            write_structure(output, &out)
        }
    }
}
