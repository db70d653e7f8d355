//! Command-line surface: spectrum, structural-drive dumps, numerical Lie
//! closure, the exact generation proof, and transition-graph export.
//!
//! Every subcommand prints one newline-terminated JSON document to stdout
//! (also on failure) and exits 0 only when all requested checks pass.
//! Identical configuration yields byte-identical output.

mod config;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use rotorlie::closure::{full_rank_check, ClosureOptions, PhysicalDriveConfig};
use rotorlie::drives::{
    drive_w1x, drive_w1y, drive_w2y, drive_w2z, sigma_pm, Circular, StructuralDrive,
};
use rotorlie::oplib::StateIndex;
use rotorlie::proof::{verify_proof, StepTag, TransitionGraph};
use rotorlie::rotor::diagonalize;

use config::{parse_polarizations, RunConfig};

#[derive(Parser)]
#[command(
    name = "rotorlie",
    about = "Drift/drive Hamiltonians and dynamical Lie algebras for J/J+1/J+1 rotational subsystems",
    version
)]
struct Cli {
    /// Flat key=value configuration file applied before flag overrides.
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Rotational constant A.
    #[arg(long)]
    a: Option<f64>,
    /// Rotational constant B.
    #[arg(long)]
    b: Option<f64>,
    /// Rotational constant C.
    #[arg(long)]
    c: Option<f64>,
    /// Dipole components mu_a,mu_b,mu_c.
    #[arg(long, value_name = "MU_A,MU_B,MU_C")]
    dipole: Option<String>,
    /// Acceptance tolerance of the numerical closure.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Block energies e_tau,e_tau',e_tau'' (rationalized at 1e-9).
    #[arg(long, value_name = "E0,E1,E2")]
    energies: Option<String>,
    /// Worker threads for closure commutator evaluation.
    #[arg(long)]
    threads: Option<usize>,
    /// Commutator budget before the closure gives up.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print asymmetric-top levels and eigenvector coefficients up to J max.
    Spectrum {
        /// Largest J to include.
        #[arg(long, default_value_t = 1)]
        j_max: u32,
        #[command(flatten)]
        overrides: Overrides,
        /// Also write the JSON document to this path.
        #[arg(long)]
        json: Option<String>,
    },
    /// Dump the structural drive operators at a given J as JSON.
    Drives {
        #[arg(long, default_value_t = 0)]
        j: u32,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        json: Option<String>,
    },
    /// Run the numerical Lie closure for a polarization choice.
    Closure {
        #[arg(long, default_value_t = 0)]
        j: u32,
        /// Four comma-separated polarizations (p1,p2 at omega1; p3,p4 at omega2).
        #[arg(long, default_value = "x,y,y,z")]
        polarizations: String,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        json: Option<String>,
    },
    /// Replay the exact six-step generation proof.
    Prove {
        #[arg(long, default_value_t = 0)]
        j: u32,
        /// Write per-step transition graphs as DOT files into this directory.
        #[arg(long)]
        dot_dir: Option<String>,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        json: Option<String>,
    },
    /// Export the transition graph of isolated elements as DOT.
    Graph {
        #[arg(long, default_value_t = 0)]
        j: u32,
        /// Stage to include edges up to (step1..step6).
        #[arg(long, default_value = "step6")]
        stage: String,
        #[command(flatten)]
        overrides: Overrides,
        /// Write the DOT text to this path instead of stdout only.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(#[from] config::ConfigError),
    #[error("{0}")]
    Rotor(#[from] rotorlie::rotor::RotorError),
    #[error("{0}")]
    Closure(#[from] rotorlie::closure::ClosureError),
    #[error("{0}")]
    Drive(#[from] rotorlie::drives::DriveError),
    #[error("unknown proof stage {0:?}")]
    BadStage(String),
    #[error("cannot write {path}: {reason}")]
    Write { path: String, reason: String },
}

fn build_config(file: Option<&str>, ov: &Overrides, j: Option<u32>) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = file {
        cfg.apply_file(path)?;
    }
    if let Some(j) = j {
        cfg.j = j;
    }
    if let Some(a) = ov.a {
        cfg.a = a;
    }
    if let Some(b) = ov.b {
        cfg.b = b;
    }
    if let Some(c) = ov.c {
        cfg.c = c;
    }
    if let Some(d) = &ov.dipole {
        cfg.apply_key("mu_a", d.split(',').next().unwrap_or(""))?;
        let parts: Vec<&str> = d.split(',').collect();
        if parts.len() != 3 {
            return Err(config::ConfigError::BadValue {
                key: "dipole".into(),
                value: d.clone(),
            }
            .into());
        }
        cfg.apply_key("mu_b", parts[1])?;
        cfg.apply_key("mu_c", parts[2])?;
    }
    if let Some(t) = ov.tolerance {
        cfg.tolerance = t;
    }
    if let Some(e) = &ov.energies {
        cfg.apply_key("energies", e)?;
    }
    if let Some(t) = ov.threads {
        cfg.threads = t;
    }
    if let Some(b) = ov.budget {
        cfg.budget = b;
    }
    Ok(cfg)
}

fn emit(json: &str, path: Option<&str>) -> Result<(), CliError> {
    println!("{json}");
    if let Some(p) = path {
        std::fs::write(p, format!("{json}\n")).map_err(|e| CliError::Write {
            path: p.to_string(),
            reason: e.to_string(),
        })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumLevel {
    j: u32,
    tau: i64,
    energy: f64,
    coefficients: Vec<f64>,
}

#[derive(Serialize)]
struct SpectrumReport {
    schema: u32,
    a: f64,
    b: f64,
    c: f64,
    levels: Vec<SpectrumLevel>,
}

fn cmd_spectrum(cfg: &RunConfig, j_max: u32) -> Result<(String, bool), CliError> {
    let constants = cfg.constants()?;
    let mut levels = Vec::new();
    for j in 0..=j_max {
        let dec = diagonalize(j, &constants)?;
        for tau in -i64::from(j)..=i64::from(j) {
            let col = (tau + i64::from(j)) as usize;
            levels.push(SpectrumLevel {
                j,
                tau,
                energy: dec.energies[col],
                coefficients: dec.coefficients.column(col).iter().copied().collect(),
            });
        }
    }
    let report = SpectrumReport { schema: 1, a: cfg.a, b: cfg.b, c: cfg.c, levels };
    Ok((serde_json::to_string(&report).unwrap(), true))
}

#[derive(Serialize)]
struct RadicalTermJson {
    radicand: u128,
    numer: String,
    denom: String,
}

#[derive(Serialize)]
struct DriveTermJson {
    kind: rotorlie::oplib::Kind,
    bra: StateIndex,
    ket: StateIndex,
    coefficient: Vec<RadicalTermJson>,
    value: f64,
}

#[derive(Serialize)]
struct DriveJson {
    label: rotorlie::drives::DriveLabel,
    terms: Vec<DriveTermJson>,
}

#[derive(Serialize)]
struct DrivesReport {
    schema: u32,
    j: u32,
    n: u32,
    drives: Vec<DriveJson>,
}

fn drive_json(d: &StructuralDrive) -> DriveJson {
    let terms = d
        .op
        .terms()
        .map(|(elem, coeff)| DriveTermJson {
            kind: elem.kind,
            bra: StateIndex::from_flat(d.j, elem.j).unwrap(),
            ket: StateIndex::from_flat(d.j, elem.k).unwrap(),
            coefficient: coeff
                .terms()
                .map(|(radicand, q)| RadicalTermJson {
                    radicand,
                    numer: q.numer().to_string(),
                    denom: q.denom().to_string(),
                })
                .collect(),
            value: coeff.to_f64(),
        })
        .collect();
    DriveJson { label: d.label, terms }
}

fn cmd_drives(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let drift = cfg.drift()?;
    let drives = vec![
        drive_json(&drive_w1x(cfg.j)),
        drive_json(&drive_w1y(cfg.j)),
        drive_json(&drive_w2y(cfg.j)),
        drive_json(&drive_w2z(cfg.j)),
        drive_json(&sigma_pm(cfg.j, &drift, Circular::Plus)?),
        drive_json(&sigma_pm(cfg.j, &drift, Circular::Minus)?),
    ];
    let report = DrivesReport {
        schema: 1,
        j: cfg.j,
        n: rotorlie::oplib::subsystem_dim(cfg.j),
        drives,
    };
    Ok((serde_json::to_string(&report).unwrap(), true))
}

#[derive(Serialize)]
struct ClosureCliReport {
    // `schema` rides along inside the flattened closure report
    j: u32,
    polarizations: Vec<&'static str>,
    full_rank: bool,
    #[serde(flatten)]
    report: rotorlie::closure::ClosureReport,
}

fn cmd_closure(cfg: &RunConfig, pols: &str) -> Result<(String, bool), CliError> {
    let polarizations = parse_polarizations(pols)?;
    let drift = cfg.drift()?;
    let opts = ClosureOptions {
        tolerance: cfg.tolerance,
        max_commutators: cfg.budget,
        threads: cfg.threads,
    };
    let physical = PhysicalDriveConfig {
        constants: cfg.constants()?,
        dipole: cfg.dipole,
        subsystem: cfg.subsystem,
    };
    let (ok, report) = full_rank_check(cfg.j, &drift, polarizations, &opts, &physical)?;
    let out = ClosureCliReport {
        j: cfg.j,
        polarizations: polarizations.iter().map(|p| p.label()).collect(),
        full_rank: ok,
        report,
    };
    Ok((serde_json::to_string(&out).unwrap(), ok))
}

fn cmd_prove(cfg: &RunConfig, dot_dir: Option<&str>) -> Result<(String, bool), CliError> {
    let drift = cfg.drift()?;
    let outcome = verify_proof(cfg.j, &drift);
    if let Some(dir) = dot_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Write {
            path: dir.to_string(),
            reason: e.to_string(),
        })?;
        for (tag, graph) in &outcome.graphs {
            let path = format!("{dir}/graph_j{}_{}.dot", cfg.j, tag.label());
            let dot = graph.to_dot(&format!("subsystem_j{}_{}", cfg.j, tag.label()));
            std::fs::write(&path, dot).map_err(|e| CliError::Write {
                path,
                reason: e.to_string(),
            })?;
        }
    }
    let pass = outcome.report.pass;
    Ok((serde_json::to_string(&outcome.report).unwrap(), pass))
}

fn cmd_graph(cfg: &RunConfig, stage: &str, out: Option<&str>) -> Result<(String, bool), CliError> {
    let tag = StepTag::parse(stage).ok_or_else(|| CliError::BadStage(stage.to_string()))?;
    let drift = cfg.drift()?;
    let outcome = verify_proof(cfg.j, &drift);
    let graph = TransitionGraph::from_isolated(cfg.j, &outcome.isolated, tag);
    let dot = graph.to_dot(&format!("subsystem_j{}_{}", cfg.j, tag.label()));
    if let Some(p) = out {
        std::fs::write(p, &dot).map_err(|e| CliError::Write {
            path: p.to_string(),
            reason: e.to_string(),
        })?;
    }
    print!("{dot}");
    Ok((String::new(), true))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Spectrum { j_max, overrides, json } => {
            let cfg = build_config(cli.config.as_deref(), overrides, None)?;
            let (doc, ok) = cmd_spectrum(&cfg, *j_max)?;
            emit(&doc, json.as_deref())?;
            Ok(ok)
        }
        Command::Drives { j, overrides, json } => {
            let cfg = build_config(cli.config.as_deref(), overrides, Some(*j))?;
            let (doc, ok) = cmd_drives(&cfg)?;
            emit(&doc, json.as_deref())?;
            Ok(ok)
        }
        Command::Closure { j, polarizations, overrides, json } => {
            let cfg = build_config(cli.config.as_deref(), overrides, Some(*j))?;
            let (doc, ok) = cmd_closure(&cfg, polarizations)?;
            emit(&doc, json.as_deref())?;
            Ok(ok)
        }
        Command::Prove { j, dot_dir, overrides, json } => {
            let cfg = build_config(cli.config.as_deref(), overrides, Some(*j))?;
            let (doc, ok) = cmd_prove(&cfg, dot_dir.as_deref())?;
            emit(&doc, json.as_deref())?;
            Ok(ok)
        }
        Command::Graph { j, stage, overrides, out } => {
            let cfg = build_config(cli.config.as_deref(), overrides, Some(*j))?;
            let (_, ok) = cmd_graph(&cfg, stage, out.as_deref())?;
            Ok(ok)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => std::process::exit(0),
        Ok(false) => std::process::exit(1),
        Err(e) => {
            // machine-readable failure document, human message on stderr
            let doc = serde_json::json!({ "schema": 1, "error": e.to_string() });
            println!("{doc}");
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
