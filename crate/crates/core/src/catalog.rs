//! Generated catalogs of stabilizer and maximal-magic states.
//!
//! Layout of a catalog directory:
//!
//! ```text
//! stabilizers.jsonl   60 two-qubit stabilizer states
//! magic2q.jsonl       480 two-qubit maximal-magic states
//! sic1q.jsonl         8 single-qubit SIC fiducials
//! sic4d.jsonl         d = 4 qudit minimizers (extended builds only)
//! pairings.json       orbit counts, magic/stabilizer pairings, histograms
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clifford::{
    clifford_generators, clifford_orbit, clifford_orbit_exact, DEFAULT_ORBIT_CAP,
};
use crate::entanglement::{concurrence, concurrence_sq_exact, orbit_concurrence_profile};
use crate::error::{Error, Result};
use crate::exact::{rational_string, ExactState};
use crate::io::{sig17, write_json, StateJson};
use crate::magic::{self, xi2_exact};
use crate::optimize::{
    self, collect_minimizers, multistart_minimize, SearchConfig, Xi2Objective, MINIMIZER_DEDUP_TOL,
};
use crate::orbit::{OrbitFamily, Provenance};
use crate::states::{CanonicalKey, PureState, C64};
use crate::structure::{
    assemble_five_mub_families, complete_mub_sets, group_stabilizer_bases_into_families,
    partition_by_wh_orbit, partition_by_wh_orbit_exact, partition_by_wh_orbit_tol, Pairing,
};
use crate::wh_group::WhGroup;

pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Stabilizer,
    Magic2q,
    Sic1q,
    Sic4d,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub kind: EntryKind,
    /// Position within its file.
    pub index: usize,
    #[serde(flatten)]
    pub state: StateJson,
    /// WH orbit within its kind, ordered by smallest canonical key.
    pub orbit_id: usize,
    /// Five-MUB families containing this state's basis, indexed by magic orbit.
    pub family_ids: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concurrence_sq: Option<String>,
    /// `p/q` for exact states, otherwise a decimal.
    pub xi2: String,
}

impl CatalogEntry {
    pub fn pure(&self) -> Result<PureState> {
        self.state.pure()
    }

    pub fn exact(&self) -> Result<Option<ExactState>> {
        self.state.exact()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingsFile {
    pub version: u32,
    pub stab_orbits: usize,
    pub magic_orbits: usize,
    pub pairings: Vec<Pairing>,
    /// Number of magic orbits completed by each stabilizer orbit.
    pub stab_multiplicity: Vec<usize>,
    pub families_of_5: usize,
    /// All sets of five mutually unbiased stabilizer bases.
    pub stab_complete_mub_sets: Vec<Vec<usize>>,
    /// Partitions of the stabilizer bases into disjoint five-MUB families.
    pub stab_valid_partitions: usize,
    pub stab_concurrence: BTreeMap<String, usize>,
    pub magic_concurrence: BTreeMap<String, usize>,
    pub concurrence_squared: BTreeMap<String, String>,
    pub sic1q_orbits: usize,
    pub sic4d_orbits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub stabilizers: Vec<CatalogEntry>,
    pub magic2q: Vec<CatalogEntry>,
    pub sic1q: Vec<CatalogEntry>,
    pub sic4d: Vec<CatalogEntry>,
    pub pairings: PairingsFile,
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogOptions {
    pub seed: u64,
    /// Also run the d = 4 qudit scan.
    pub extended: bool,
    pub qudit_starts: usize,
}

impl CatalogOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            extended: false,
            qudit_starts: 100_000,
        }
    }
}

/// `(i, i, i, 1) / 2`.
pub fn magic_seed() -> ExactState {
    ExactState::from_i64(&[(0, 1), (0, 1), (0, 1), (1, 0)], 2).expect("unit norm")
}

/// First single-qubit SIC fiducial, `(sqrt6 + sqrt2, (1 - i) sqrt2)` normalized.
pub fn sic1q_seed() -> PureState {
    let r2 = 2f64.sqrt();
    PureState::normalize(vec![C64::new(6f64.sqrt() + r2, 0.0), C64::new(r2, -r2)]).expect("nonzero")
}

fn exact_entries(
    kind: EntryKind,
    orbits: &[OrbitFamily],
    family_ids: &dyn Fn(usize) -> Vec<usize>,
    group: &WhGroup,
    expected_xi2: &str,
) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (orbit_id, orbit) in orbits.iter().enumerate() {
        let exact = orbit
            .exact
            .as_ref()
            .ok_or_else(|| Error::NotExact("catalog orbit without exact states".into()))?;
        for e in exact {
            let xi2 = rational_string(&xi2_exact(e, group)?);
            if xi2 != expected_xi2 {
                return Err(Error::Certification(format!(
                    "{kind:?} state {e} has Xi_2 = {xi2}"
                )));
            }
            out.push(CatalogEntry {
                kind,
                index: out.len(),
                state: StateJson::from_exact(e)?,
                orbit_id,
                family_ids: family_ids(orbit_id),
                concurrence: Some(concurrence(&e.to_pure())?),
                concurrence_sq: Some(rational_string(&concurrence_sq_exact(e)?)),
                xi2,
            });
        }
    }
    Ok(out)
}

fn float_entries(
    kind: EntryKind,
    orbits: &[OrbitFamily],
    group: &WhGroup,
) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (orbit_id, orbit) in orbits.iter().enumerate() {
        for s in &orbit.states {
            out.push(CatalogEntry {
                kind,
                index: out.len(),
                state: StateJson::from_pure(s),
                orbit_id,
                family_ids: Vec::new(),
                concurrence: None,
                concurrence_sq: None,
                xi2: sig17(magic::xi(2.0, s, group)?),
            });
        }
    }
    Ok(out)
}

/// Two-qubit stabilizer and maximal-magic orbits, both partitioned into WH
/// orbits (exact arithmetic).
pub fn two_qubit_orbits() -> Result<(Vec<OrbitFamily>, Vec<OrbitFamily>)> {
    let group = WhGroup::qubits(2)?;
    let stab = crate::structure::enumerate_stabilizers_2q()?;
    let magic = clifford_orbit_exact(&magic_seed(), &clifford_generators(2)?, DEFAULT_ORBIT_CAP)?;
    let stab_orbits =
        partition_by_wh_orbit_exact(stab.exact.as_deref().unwrap_or_default(), &group)?;
    let magic_orbits =
        partition_by_wh_orbit_exact(magic.exact.as_deref().unwrap_or_default(), &group)?;
    Ok((stab_orbits, magic_orbits))
}

/// Distinct d = 4 qudit minimizers of `Xi_2` from a seeded scan, grouped
/// into W(4) orbits.
pub fn qudit_minimizer_orbits(seed: u64, starts: usize) -> Result<Vec<OrbitFamily>> {
    let obj = Xi2Objective::qudit(4)?;
    let out = multistart_minimize(&obj, &SearchConfig::new(starts, seed))?;
    let fam = collect_minimizers(&out.records, 0.4, 1e-9)?;
    partition_by_wh_orbit_tol(&fam.states, obj.group(), MINIMIZER_DEDUP_TOL)
}

pub fn build_catalog(options: &CatalogOptions) -> Result<Catalog> {
    let g2 = WhGroup::qubits(2)?;
    let (stab_orbits, magic_orbits) = two_qubit_orbits()?;
    let table = assemble_five_mub_families(&stab_orbits, &magic_orbits)?;
    let stab_profile = orbit_concurrence_profile(&stab_orbits)?;
    let magic_profile = orbit_concurrence_profile(&magic_orbits)?;
    let complete_sets = complete_mub_sets(&stab_orbits)?;
    let stab_valid_partitions = match group_stabilizer_bases_into_families(&stab_orbits) {
        Ok(f) => f.valid_partitions,
        Err(Error::NoValidPartition) => 0,
        Err(e) => return Err(e),
    };

    let stab_families = |s: usize| -> Vec<usize> {
        table
            .pairings
            .iter()
            .filter(|p| p.stab_orbit == s)
            .map(|p| p.magic_orbit)
            .collect()
    };
    let stabilizers = exact_entries(
        EntryKind::Stabilizer,
        &stab_orbits,
        &stab_families,
        &g2,
        "1",
    )?;
    let magic2q = exact_entries(EntryKind::Magic2q, &magic_orbits, &|m| vec![m], &g2, "7/16")?;

    let g1 = WhGroup::qubits(1)?;
    let sic_orbit = clifford_orbit(&sic1q_seed(), &clifford_generators(1)?, DEFAULT_ORBIT_CAP)?;
    let sic_orbits = partition_by_wh_orbit(&sic_orbit.states, &g1)?;
    let sic1q = float_entries(EntryKind::Sic1q, &sic_orbits, &g1)?;

    let (sic4d, sic4d_orbits) = if options.extended {
        let orbits = qudit_minimizer_orbits(options.seed, options.qudit_starts)?;
        let g4 = WhGroup::qudit(4)?;
        (float_entries(EntryKind::Sic4d, &orbits, &g4)?, orbits.len())
    } else {
        (Vec::new(), 0)
    };

    let mut concurrence_squared = stab_profile.value_squared.clone();
    concurrence_squared.extend(magic_profile.value_squared.clone());
    let pairings = PairingsFile {
        version: CATALOG_VERSION,
        stab_orbits: stab_orbits.len(),
        magic_orbits: magic_orbits.len(),
        families_of_5: table.families.iter().filter(|f| f.certificate.pass).count(),
        stab_multiplicity: table.multiplicity,
        pairings: table.pairings,
        stab_complete_mub_sets: complete_sets,
        stab_valid_partitions,
        stab_concurrence: stab_profile.histogram,
        magic_concurrence: magic_profile.histogram,
        concurrence_squared,
        sic1q_orbits: sic_orbits.len(),
        sic4d_orbits,
    };
    Ok(Catalog {
        stabilizers,
        magic2q,
        sic1q,
        sic4d,
        pairings,
    })
}

fn write_jsonl(path: &Path, entries: &[CatalogEntry]) -> Result<()> {
    let mut text = String::new();
    for e in entries {
        text.push_str(&serde_json::to_string(e)?);
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

fn read_jsonl(path: &Path) -> Result<Vec<CatalogEntry>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

pub fn write_catalog(dir: &Path, catalog: &Catalog) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_jsonl(&dir.join("stabilizers.jsonl"), &catalog.stabilizers)?;
    write_jsonl(&dir.join("magic2q.jsonl"), &catalog.magic2q)?;
    write_jsonl(&dir.join("sic1q.jsonl"), &catalog.sic1q)?;
    if !catalog.sic4d.is_empty() {
        write_jsonl(&dir.join("sic4d.jsonl"), &catalog.sic4d)?;
    }
    write_json(&dir.join("pairings.json"), &catalog.pairings)
}

pub fn read_catalog(dir: &Path) -> Result<Catalog> {
    let pairings: PairingsFile =
        serde_json::from_str(&fs::read_to_string(dir.join("pairings.json"))?)?;
    if pairings.version != CATALOG_VERSION {
        return Err(Error::Format(format!(
            "unsupported catalog version {}",
            pairings.version
        )));
    }
    Ok(Catalog {
        stabilizers: read_jsonl(&dir.join("stabilizers.jsonl"))?,
        magic2q: read_jsonl(&dir.join("magic2q.jsonl"))?,
        sic1q: read_jsonl(&dir.join("sic1q.jsonl"))?,
        sic4d: read_jsonl(&dir.join("sic4d.jsonl"))?,
        pairings,
    })
}

impl Catalog {
    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.stabilizers
            .iter()
            .chain(&self.magic2q)
            .chain(&self.sic1q)
            .chain(&self.sic4d)
    }

    pub fn of_kind(&self, kind: EntryKind) -> &[CatalogEntry] {
        match kind {
            EntryKind::Stabilizer => &self.stabilizers,
            EntryKind::Magic2q => &self.magic2q,
            EntryKind::Sic1q => &self.sic1q,
            EntryKind::Sic4d => &self.sic4d,
        }
    }

    /// Entries of one kind regrouped into their orbits.
    pub fn orbits(&self, kind: EntryKind) -> Result<Vec<OrbitFamily>> {
        let entries = self.of_kind(kind);
        let n = entries.iter().map(|e| e.orbit_id + 1).max().unwrap_or(0);
        let mut grouped: Vec<Vec<&CatalogEntry>> = vec![Vec::new(); n];
        for e in entries {
            grouped[e.orbit_id].push(e);
        }
        grouped
            .into_iter()
            .map(|members| {
                let states: Vec<PureState> =
                    members.iter().map(|e| e.pure()).collect::<Result<_>>()?;
                let exact: Option<Vec<ExactState>> =
                    members.iter().map(|e| e.exact()).collect::<Result<_>>()?;
                let seed = states
                    .first()
                    .cloned()
                    .ok_or_else(|| Error::Format("empty orbit in catalog".into()))?;
                Ok(OrbitFamily {
                    seed,
                    provenance: members
                        .iter()
                        .map(|e| Provenance::Input { index: e.index })
                        .collect(),
                    states,
                    exact,
                    generators: vec![format!("{kind:?}")],
                })
            })
            .collect()
    }

    /// Index from canonical key to entry, over all kinds.
    pub fn key_index(&self) -> Result<HashMap<CanonicalKey, &CatalogEntry>> {
        self.entries()
            .map(|e| Ok((e.pure()?.canonical_key(), e)))
            .collect()
    }
}

/// Entry equal to `psi` up to phase: canonical-key hit first, then the
/// nearest entry within phase distance `tol`.
pub fn lookup<'a>(
    catalog: &'a Catalog,
    psi: &PureState,
    tol: f64,
) -> Result<Option<&'a CatalogEntry>> {
    let key = psi.canonical_key();
    let mut best: Option<(&CatalogEntry, f64)> = None;
    for e in catalog.entries() {
        let s = e.pure()?;
        if s.dim() != psi.dim() {
            continue;
        }
        if s.canonical_key() == key {
            return Ok(Some(e));
        }
        let d = s.phase_distance(psi)?;
        if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((e, d));
        }
    }
    Ok(best.map(|(e, _)| e))
}

/// Snaps `psi` onto the exact two-qubit catalog states within
/// [`optimize::SNAP_TOL`].
pub fn snap_to_catalog(catalog: &Catalog, psi: &PureState) -> Result<Option<ExactState>> {
    match lookup(catalog, psi, optimize::SNAP_TOL)? {
        Some(e) => e.exact(),
        None => Ok(None),
    }
}
