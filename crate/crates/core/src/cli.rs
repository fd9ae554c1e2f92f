//! Command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{
    build_catalog, lookup, read_catalog, write_catalog, CatalogOptions, EntryKind,
};
use crate::claims::{verify_claims, ClaimConfig, ClaimReport};
use crate::clifford::{
    apply_circuit, clifford_generators, clifford_orbit, clifford_orbit_exact, gates_from_ops,
    standard_gates, CircuitOp,
};
use crate::entanglement::{concurrence, concurrence_sq_exact, orbit_concurrence_profile};
use crate::error::{Error, Result};
use crate::exact::rational_string;
use crate::io::{read_state_file, write_json, StateJson};
use crate::magic::{sre, xi2_exact};
use crate::optimize::{
    collect_minimizers, multistart_minimize, SearchConfig, StartMode, Xi2Objective,
};
use crate::orbit::OrbitFamily;
use crate::structure::{
    assemble_five_mub_families, complete_mub_sets, group_stabilizer_bases_into_families,
    partition_by_wh_orbit, partition_by_wh_orbit_exact,
};
use crate::wh_group::{wh_orbit, wh_orbit_exact, WhGroup};

#[derive(Debug, Parser)]
#[command(
    name = "magiclab",
    version,
    about = "Stabilizer Renyi entropy and maximal-magic states"
)]
pub struct Cli {
    /// Base seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Override the command's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Machine-readable output where a text form exists.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupKind {
    /// Tensor product of single-qubit Pauli groups.
    Qubits,
    /// WH group of a single qudit of the full dimension.
    Qudit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchMode {
    OneQubit,
    TwoQubit,
    Qudit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateSet {
    Clifford,
    /// Clifford generators plus T; the orbit is then bounded only by the cap.
    CliffordT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Uniform,
    Haar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Stabilizer,
    Magic2q,
}

#[derive(Debug, Args)]
pub struct StateArg {
    /// State file: {"dim", "amplitudes", ["denominator", "gaussian_numerators"]}.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value_t = GroupKind::Qubits)]
    pub group: GroupKind,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilizer Renyi entropy of a state.
    Sre {
        #[command(flatten)]
        state: StateArg,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Exact rational Xi_2 (alpha = 2, exact state file).
        #[arg(long)]
        exact: bool,
    },
    /// Multistart minimization of Xi_2.
    Search {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = SearchMode::TwoQubit)]
        mode: SearchMode,
        #[arg(long, default_value_t = 2000)]
        starts: usize,
        #[arg(long = "start-mode", value_enum, default_value_t = StartArg::Uniform)]
        start_mode: StartArg,
    },
    /// Clifford orbit of a seed state.
    Orbit {
        /// Seed state file.
        #[arg(long = "seed-state", alias = "seed-file")]
        seed_state: PathBuf,
        #[arg(long, value_enum, default_value_t = GateSet::Clifford)]
        gates: GateSet,
        #[arg(long, default_value_t = crate::clifford::DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
    /// WH orbit of a state.
    WhOrbit {
        #[command(flatten)]
        state: StateArg,
    },
    /// Orbit, pairing and family structure of a catalog.
    Structure {
        #[arg(long, default_value = "catalog")]
        catalog: PathBuf,
        /// Report file (same as --out).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Concurrence of a state, or the orbit profile of a catalog kind.
    Concurrence {
        #[arg(long, conflicts_with = "catalog")]
        state: Option<PathBuf>,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = KindArg::Magic2q)]
        kind: KindArg,
    },
    /// Build or query the state catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Apply a circuit file to a state.
    Apply {
        #[arg(long)]
        state: PathBuf,
        /// JSON list of {"gate":"T","qubit":1} / {"gate":"CNOT","control":0,"target":1}.
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Rerun every claim and report pass/fail.
    VerifyClaims {
        /// Include the long qudit and coverage scans.
        #[arg(long)]
        extended: bool,
        #[arg(long, default_value_t = 2000)]
        starts: usize,
        #[arg(long = "extended-starts", default_value_t = 100_000)]
        extended_starts: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    Build {
        #[arg(long, default_value = "catalog")]
        dir: PathBuf,
        /// Also scan for d = 4 qudit minimizers.
        #[arg(long)]
        extended: bool,
        #[arg(long = "qudit-starts", default_value_t = 100_000)]
        qudit_starts: usize,
    },
    Lookup {
        #[arg(long, default_value = "catalog")]
        dir: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
}

pub fn parse_args<I, T>(argv: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

/// Parses and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn group_for(dim: usize, kind: GroupKind) -> Result<WhGroup> {
    match kind {
        GroupKind::Qudit => WhGroup::qudit(dim),
        GroupKind::Qubits => {
            if dim.is_power_of_two() && dim >= 2 {
                WhGroup::qubits(dim.trailing_zeros() as usize)
            } else {
                WhGroup::qudit(dim)
            }
        }
    }
}

fn emit(cli: &Cli, value: &impl Serialize) -> Result<()> {
    match &cli.out {
        Some(path) => write_json(path, value),
        None => print_stdout(&format!("{}\n", serde_json::to_string_pretty(value)?)),
    }
}

fn print_stdout(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn orbit_json(orbit: &OrbitFamily) -> Result<Value> {
    let states: Vec<StateJson> = match &orbit.exact {
        Some(e) => e.iter().map(StateJson::from_exact).collect::<Result<_>>()?,
        None => orbit.states.iter().map(StateJson::from_pure).collect(),
    };
    Ok(json!({
        "orbit_size": orbit.size(),
        "states": states,
        "index_tuples": orbit.index_tuples(),
        "generators": orbit.generators,
    }))
}

/// Runs a parsed command; `Ok(false)` means a check failed.
pub fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Sre {
            state,
            alpha,
            exact,
        } => {
            let file = read_state_file(&state.state)?;
            let psi = file.pure()?;
            let group = group_for(psi.dim(), state.group)?;
            let v = sre(*alpha, &psi, &group)?;
            if *exact {
                if *alpha != 2.0 {
                    return Err(Error::NotExact("exact evaluation needs alpha = 2".into()));
                }
                let e = file.exact()?.ok_or_else(|| {
                    Error::NotExact("state file has no gaussian_numerators".into())
                })?;
                let xi = xi2_exact(&e, &group)?;
                emit(
                    cli,
                    &json!({"alpha": alpha, "xi": rational_string(&xi), "m": v.m}),
                )?;
            } else {
                emit(cli, &v)?;
            }
            Ok(true)
        }
        Command::Search {
            dim,
            mode,
            starts,
            start_mode,
        } => {
            let obj = match (mode, dim) {
                (SearchMode::OneQubit, 2) => Xi2Objective::one_qubit(),
                (SearchMode::TwoQubit, 4) => Xi2Objective::two_qubit(),
                (SearchMode::Qudit, d) => Xi2Objective::qudit(*d)?,
                (_, d) => {
                    return Err(Error::DimMismatch {
                        expected: if *mode == SearchMode::OneQubit { 2 } else { 4 },
                        found: *d,
                    })
                }
            };
            let mut cfg = SearchConfig::new(*starts, cli.seed);
            cfg.start = match start_mode {
                StartArg::Uniform => StartMode::Uniform,
                StartArg::Haar => StartMode::Haar,
            };
            let out = multistart_minimize(&obj, &cfg)?;
            let min = out.global_min();
            let states = match min {
                Some(m) => collect_minimizers(&out.records, m, cli.tol.unwrap_or(1e-9))?.states,
                None => Vec::new(),
            };
            emit(
                cli,
                &json!({
                    "global_min": min,
                    "n_distinct_minimizers": states.len(),
                    "accepted": out.records.len(),
                    "non_converged": out.non_converged,
                    "states": states.iter().map(StateJson::from_pure).collect::<Vec<_>>(),
                }),
            )?;
            Ok(min.is_some())
        }
        Command::Orbit {
            seed_state,
            gates,
            cap,
        } => {
            let file = read_state_file(seed_state)?;
            let psi = file.pure()?;
            let n = match psi.dim() {
                2 => 1,
                4 => 2,
                d => {
                    return Err(Error::DimMismatch {
                        expected: 4,
                        found: d,
                    })
                }
            };
            let gens = match gates {
                GateSet::Clifford => clifford_generators(n)?,
                GateSet::CliffordT => standard_gates(n)?,
            };
            let orbit = match (file.exact()?, gates) {
                (Some(e), GateSet::Clifford) => clifford_orbit_exact(&e, &gens, *cap)?,
                _ => clifford_orbit(&psi, &gens, *cap)?,
            };
            emit(cli, &orbit_json(&orbit)?)?;
            Ok(true)
        }
        Command::WhOrbit { state } => {
            let file = read_state_file(&state.state)?;
            let psi = file.pure()?;
            let group = group_for(psi.dim(), state.group)?;
            let orbit = match file.exact()? {
                Some(e) if group.supports_exact() => wh_orbit_exact(&e, &group)?,
                _ => wh_orbit(&psi, &group)?,
            };
            emit(cli, &orbit_json(&orbit)?)?;
            Ok(true)
        }
        Command::Structure { catalog, report } => {
            let report_value = structure_report(catalog)?;
            let pass = report_value["stab_orbits"] == 15
                && report_value["magic_orbits"] == 30
                && report_value["families_of_5"] == 30
                && report_value["stab_families_of_5"] == 3;
            match report.as_ref().or(cli.out.as_ref()) {
                Some(p) => write_json(p, &report_value)?,
                None => print_stdout(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report_value)?
                ))?,
            }
            Ok(pass)
        }
        Command::Concurrence {
            state,
            catalog,
            kind,
        } => {
            if let Some(path) = state {
                let file = read_state_file(path)?;
                let c = concurrence(&file.pure()?)?;
                let sq = file
                    .exact()?
                    .map(|e| concurrence_sq_exact(&e))
                    .transpose()?;
                emit(
                    cli,
                    &json!({"concurrence": c, "concurrence_sq": sq.as_ref().map(rational_string)}),
                )?;
                return Ok(true);
            }
            let dir = catalog.clone().unwrap_or_else(|| PathBuf::from("catalog"));
            let cat = read_catalog(&dir)?;
            let k = match kind {
                KindArg::Stabilizer => EntryKind::Stabilizer,
                KindArg::Magic2q => EntryKind::Magic2q,
            };
            let profile = orbit_concurrence_profile(&cat.orbits(k)?)?;
            emit(cli, &profile)?;
            Ok(true)
        }
        Command::Catalog { action } => match action {
            CatalogAction::Build {
                dir,
                extended,
                qudit_starts,
            } => {
                let mut opts = CatalogOptions::new(cli.seed);
                opts.extended = *extended;
                opts.qudit_starts = *qudit_starts;
                let cat = build_catalog(&opts)?;
                write_catalog(dir, &cat)?;
                emit(
                    cli,
                    &json!({
                        "dir": dir,
                        "stabilizer": cat.stabilizers.len(),
                        "magic2q": cat.magic2q.len(),
                        "sic1q": cat.sic1q.len(),
                        "sic4d": cat.sic4d.len(),
                        "stab_orbits": cat.pairings.stab_orbits,
                        "magic_orbits": cat.pairings.magic_orbits,
                    }),
                )?;
                Ok(true)
            }
            CatalogAction::Lookup { dir, state } => {
                let cat = read_catalog(dir)?;
                let psi = read_state_file(state)?.pure()?;
                let hit = lookup(&cat, &psi, cli.tol.unwrap_or(1e-6))?;
                emit(cli, &json!({"found": hit.is_some(), "entry": hit}))?;
                Ok(hit.is_some())
            }
        },
        Command::Apply { state, circuit } => {
            let psi = read_state_file(state)?.pure()?;
            let ops: Vec<CircuitOp> = serde_json::from_str(&fs::read_to_string(circuit)?)?;
            let n = match psi.dim() {
                2 => 1,
                4 => 2,
                d => {
                    return Err(Error::DimMismatch {
                        expected: 4,
                        found: d,
                    })
                }
            };
            let out = apply_circuit(&psi, &gates_from_ops(n, &ops)?)?;
            emit(cli, &StateJson::from_pure(&out))?;
            Ok(true)
        }
        Command::VerifyClaims {
            extended,
            starts,
            extended_starts,
        } => {
            let mut cfg = ClaimConfig::new(cli.seed);
            cfg.extended = *extended;
            cfg.starts = *starts;
            cfg.extended_starts = *extended_starts;
            let reports = verify_claims(&cfg);
            let pass = reports.iter().all(|r| r.pass);
            if cli.json {
                emit(cli, &reports)?;
            } else {
                let text = claims_table(&reports);
                match &cli.out {
                    Some(p) => fs::write(p, text)?,
                    None => print_stdout(&text)?,
                }
            }
            Ok(pass)
        }
    }
}

/// One line per claim.
pub fn claims_table(reports: &[ClaimReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!(
            "{} [{:>2}] {:<40} target={} computed={} tol={:e} ({} ms)\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.criterion,
            r.claim_id,
            r.target.value,
            r.computed,
            r.tolerance,
            r.runtime_ms
        ));
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    s.push_str(&format!("{} claims, {} failed\n", reports.len(), failed));
    s
}

/// Recomputes orbit partitions, pairings and families from a catalog.
pub fn structure_report(dir: &Path) -> Result<Value> {
    let cat = read_catalog(dir)?;
    let group = WhGroup::qubits(2)?;
    let partition = |kind| -> Result<Vec<OrbitFamily>> {
        let entries = cat.of_kind(kind);
        let exact: Option<Vec<_>> = entries.iter().map(|e| e.exact()).collect::<Result<_>>()?;
        match exact {
            Some(e) => partition_by_wh_orbit_exact(&e, &group),
            None => {
                let states: Vec<_> = entries.iter().map(|e| e.pure()).collect::<Result<_>>()?;
                partition_by_wh_orbit(&states, &group)
            }
        }
    };
    let stab = partition(EntryKind::Stabilizer)?;
    let magic = partition(EntryKind::Magic2q)?;
    let table = assemble_five_mub_families(&stab, &magic)?;
    let sets = complete_mub_sets(&stab)?;
    let (stab_families, valid_partitions) = match group_stabilizer_bases_into_families(&stab) {
        Ok(f) => (f.families.len(), f.valid_partitions),
        Err(Error::NoValidPartition) => (0, 0),
        Err(e) => return Err(e),
    };
    Ok(json!({
        "stab_orbits": stab.len(),
        "magic_orbits": magic.len(),
        "pairings": table.pairings,
        "stab_multiplicity": table.multiplicity,
        "families_of_5": table.families.iter().filter(|f| f.certificate.pass).count(),
        "stab_families_of_5": stab_families,
        "stab_valid_partitions": valid_partitions,
        "stab_complete_mub_sets": sets,
    }))
}
