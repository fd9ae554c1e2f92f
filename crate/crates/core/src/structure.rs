//! Stabilizer enumeration, SIC and MUB certification, WH-orbit partitions and
//! the pairing of stabilizer bases with maximal-magic orbits.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::clifford::{clifford_generators, clifford_orbit_exact, DEFAULT_ORBIT_CAP};
use crate::error::{Error, Result};
use crate::exact::{ExactKey, ExactState};
use crate::orbit::{OrbitFamily, Provenance};
use crate::states::{CanonicalKey, PureState, C64};
use crate::wh_group::{expectation, wh_orbit, wh_orbit_exact, WhGroup};

/// Tolerance for orthonormality and mutual unbiasedness.
pub const MUB_TOL: f64 = 1e-10;
/// Tolerance for SIC overlaps.
pub const SIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub pass: bool,
    pub worst_deviation: f64,
}

/// An orthonormal basis of `C^D`.
#[derive(Debug, Clone)]
pub struct Basis {
    states: Vec<PureState>,
    worst_deviation: f64,
}

impl Basis {
    pub fn new(states: Vec<PureState>) -> Result<Self> {
        let d = states.first().map(PureState::dim).unwrap_or(0);
        if states.len() != d || d == 0 {
            return Err(Error::NotABasis(format!(
                "{} states in dimension {d}",
                states.len()
            )));
        }
        let mut worst = 0.0f64;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate().skip(i) {
                let ov = a.inner_product(b)?.norm();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ov - want).abs());
            }
        }
        if worst > MUB_TOL {
            return Err(Error::NotABasis(format!(
                "orthonormality deviation {worst:e}"
            )));
        }
        Ok(Self {
            states,
            worst_deviation: worst,
        })
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            states: (0..dim).map(|k| PureState::basis(dim, k)).collect(),
            worst_deviation: 0.0,
        }
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn worst_deviation(&self) -> f64 {
        self.worst_deviation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MubKind {
    Stabilizer,
    MagicOrbit,
    MixedFive,
}

#[derive(Debug, Clone)]
pub struct MubFamily {
    pub bases: Vec<Basis>,
    pub kind: MubKind,
    pub certificate: Certificate,
}

/// Largest `| |<a|b>|^2 - 1/D |` over states `a`, `b` of different bases.
pub fn certify_mub(bases: &[Basis]) -> Result<Certificate> {
    let d = bases.first().map(Basis::dim).unwrap_or(0);
    if let Some(b) = bases.iter().find(|b| b.dim() != d) {
        return Err(Error::NotABasis(format!(
            "basis of dimension {} among dimension {d}",
            b.dim()
        )));
    }
    let target = 1.0 / d as f64;
    let mut worst = 0.0f64;
    for (i, bi) in bases.iter().enumerate() {
        for bj in &bases[i + 1..] {
            for a in bi.states() {
                for b in bj.states() {
                    worst = worst.max((a.fidelity(b)? - target).abs());
                }
            }
        }
    }
    Ok(Certificate {
        pass: worst <= MUB_TOL,
        worst_deviation: worst,
    })
}

/// Pairwise check `|<a|b>|^2 = 1/(D+1)` for `D^2` states.
pub fn certify_sic(states: &[PureState]) -> Result<Certificate> {
    let d = states.first().map(PureState::dim).unwrap_or(0);
    if states.len() != d * d || d == 0 {
        return Err(Error::WrongCount {
            expected: d * d,
            found: states.len(),
        });
    }
    let target = 1.0 / (d as f64 + 1.0);
    let mut worst = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            worst = worst.max((a.fidelity(b)? - target).abs());
        }
    }
    Ok(Certificate {
        pass: worst <= SIC_TOL,
        worst_deviation: worst,
    })
}

/// Splits `states` into disjoint cliques of `size` pairwise orthogonal
/// states. Exhaustive backtracking; returns index groups.
pub fn orthogonal_cover(states: &[PureState], size: usize) -> Option<Vec<Vec<usize>>> {
    let n = states.len();
    if size == 0 || !n.is_multiple_of(size) {
        return None;
    }
    let orth: Vec<Vec<bool>> = states
        .iter()
        .map(|a| {
            states
                .iter()
                .map(|b| {
                    a.inner_product(b)
                        .map(|z| z.norm() <= MUB_TOL)
                        .unwrap_or(false)
                })
                .collect()
        })
        .collect();
    let mut used = vec![false; n];
    let mut groups = Vec::new();
    cover_rec(&orth, size, &mut used, &mut groups).then_some(groups)
}

fn cover_rec(
    orth: &[Vec<bool>],
    size: usize,
    used: &mut [bool],
    groups: &mut Vec<Vec<usize>>,
) -> bool {
    let Some(first) = used.iter().position(|u| !u) else {
        return true;
    };
    used[first] = true;
    let mut clique = vec![first];
    let found = extend_clique(orth, size, used, &mut clique, first + 1, groups);
    used[first] = false;
    found
}

fn extend_clique(
    orth: &[Vec<bool>],
    size: usize,
    used: &mut [bool],
    clique: &mut Vec<usize>,
    from: usize,
    groups: &mut Vec<Vec<usize>>,
) -> bool {
    if clique.len() == size {
        groups.push(clique.clone());
        if cover_rec(orth, size, used, groups) {
            return true;
        }
        groups.pop();
        return false;
    }
    for k in from..used.len() {
        if used[k] || !clique.iter().all(|&c| orth[c][k]) {
            continue;
        }
        used[k] = true;
        clique.push(k);
        if extend_clique(orth, size, used, clique, k + 1, groups) {
            used[k] = false;
            return true;
        }
        clique.pop();
        used[k] = false;
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiducialFailure {
    /// The WH orbit has fewer than `D^2` distinct states.
    OrbitSize { found: usize },
    /// The orbit does not split into orthonormal bases.
    NoBasisPartition,
    /// The bases are not mutually unbiased.
    NotUnbiased,
}

#[derive(Debug, Clone)]
pub struct FiducialCertificate {
    pub pass: bool,
    pub reason: Option<FiducialFailure>,
    pub bases: Vec<Basis>,
    pub worst_deviation: f64,
}

/// Whether the WH orbit of `psi` consists of `D^2` states forming `D`
/// mutually unbiased bases.
pub fn certify_wh_mub_fiducial(psi: &PureState, group: &WhGroup) -> Result<FiducialCertificate> {
    let orbit = wh_orbit(psi, group)?;
    Ok(fiducial_from_orbit(&orbit.states, group.total_dim()))
}

fn fiducial_from_orbit(states: &[PureState], d: usize) -> FiducialCertificate {
    let fail = |reason| FiducialCertificate {
        pass: false,
        reason: Some(reason),
        bases: Vec::new(),
        worst_deviation: f64::NAN,
    };
    if states.len() != d * d {
        return fail(FiducialFailure::OrbitSize {
            found: states.len(),
        });
    }
    let Some(groups) = orthogonal_cover(states, d) else {
        return fail(FiducialFailure::NoBasisPartition);
    };
    let bases: Vec<Basis> = match groups
        .iter()
        .map(|g| Basis::new(g.iter().map(|&k| states[k].clone()).collect()))
        .collect()
    {
        Ok(b) => b,
        Err(_) => return fail(FiducialFailure::NoBasisPartition),
    };
    let cert = certify_mub(&bases).expect("bases share a dimension");
    FiducialCertificate {
        pass: cert.pass,
        reason: (!cert.pass).then_some(FiducialFailure::NotUnbiased),
        bases,
        worst_deviation: cert.worst_deviation,
    }
}

/// Clifford orbit of `|00>` in exact arithmetic.
pub fn enumerate_stabilizers_2q() -> Result<OrbitFamily> {
    clifford_orbit_exact(
        &ExactState::basis(4, 0),
        &clifford_generators(2)?,
        DEFAULT_ORBIT_CAP,
    )
}

fn finish_partition(
    members: Vec<Vec<usize>>,
    states: &[PureState],
    exact: Option<&[ExactState]>,
    label: String,
) -> Vec<OrbitFamily> {
    let mut orbits: Vec<(CanonicalKey, OrbitFamily)> = members
        .into_iter()
        .map(|idx| {
            let fam = OrbitFamily {
                seed: states[idx[0]].clone(),
                states: idx.iter().map(|&k| states[k].clone()).collect(),
                exact: exact.map(|e| idx.iter().map(|&k| e[k].clone()).collect()),
                provenance: idx
                    .iter()
                    .map(|&k| Provenance::Input { index: k })
                    .collect(),
                generators: vec![label.clone()],
            };
            (fam.min_key().expect("orbits are non-empty"), fam)
        })
        .collect();
    orbits.sort_by(|a, b| a.0.cmp(&b.0));
    orbits.into_iter().map(|(_, f)| f).collect()
}

/// Disjoint WH orbits covering `states`, ordered by smallest canonical key.
/// Each member's provenance is its index in the input.
pub fn partition_by_wh_orbit(states: &[PureState], group: &WhGroup) -> Result<Vec<OrbitFamily>> {
    partition_by_wh_orbit_tol(states, group, 1e-9)
}

/// [`partition_by_wh_orbit`] matching orbit images to inputs within phase
/// distance `tol` when canonical keys differ.
pub fn partition_by_wh_orbit_tol(
    states: &[PureState],
    group: &WhGroup,
    tol: f64,
) -> Result<Vec<OrbitFamily>> {
    let index: HashMap<CanonicalKey, usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.canonical_key(), i))
        .collect();
    let find = |img: &PureState| {
        index.get(&img.canonical_key()).copied().or_else(|| {
            states
                .iter()
                .position(|s| s.equal_up_to_phase(img, tol).unwrap_or(false))
        })
    };
    let mut assigned = vec![false; states.len()];
    let mut members = Vec::new();
    for i in 0..states.len() {
        if assigned[i] {
            continue;
        }
        let orbit = wh_orbit(&states[i], group)?;
        let mut idx = Vec::with_capacity(orbit.size());
        for img in &orbit.states {
            let k = find(img).ok_or(Error::NotClosed { index: i })?;
            assigned[k] = true;
            idx.push(k);
        }
        members.push(idx);
    }
    Ok(finish_partition(members, states, None, group.label()))
}

/// [`partition_by_wh_orbit`] with exact membership tests.
pub fn partition_by_wh_orbit_exact(
    states: &[ExactState],
    group: &WhGroup,
) -> Result<Vec<OrbitFamily>> {
    let index: HashMap<ExactKey, usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.ray_key(), i))
        .collect();
    let mut assigned = vec![false; states.len()];
    let mut members = Vec::new();
    for i in 0..states.len() {
        if assigned[i] {
            continue;
        }
        let orbit = wh_orbit_exact(&states[i], group)?;
        let mut idx = Vec::new();
        for img in orbit.exact.as_deref().unwrap_or_default() {
            let k = *index
                .get(&img.ray_key())
                .ok_or(Error::NotClosed { index: i })?;
            assigned[k] = true;
            idx.push(k);
        }
        members.push(idx);
    }
    let pure: Vec<PureState> = states.iter().map(ExactState::to_pure).collect();
    Ok(finish_partition(
        members,
        &pure,
        Some(states),
        group.label(),
    ))
}

/// Orbit states split into orthonormal bases, or `NotABasis`.
pub fn orbit_bases(orbit: &OrbitFamily) -> Result<Vec<Basis>> {
    let d = orbit.dim();
    let groups = orthogonal_cover(&orbit.states, d)
        .ok_or_else(|| Error::NotABasis("orbit does not split into orthonormal bases".into()))?;
    groups
        .iter()
        .map(|g| Basis::new(g.iter().map(|&k| orbit.states[k].clone()).collect()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub magic_orbit: usize,
    pub stab_orbit: usize,
}

#[derive(Debug, Clone)]
pub struct PairingTable {
    /// One entry per magic orbit, in magic-orbit order.
    pub pairings: Vec<Pairing>,
    /// How many magic orbits each stabilizer orbit completes.
    pub multiplicity: Vec<usize>,
    /// The certified five-basis families, parallel to `pairings`.
    pub families: Vec<MubFamily>,
}

impl PairingTable {
    pub fn each_stab_used_twice(&self) -> bool {
        self.multiplicity.iter().all(|&m| m == 2)
    }
}

/// For each magic orbit (split into its bases), the unique stabilizer
/// orbit completing it to a set of `D + 1` mutually unbiased bases.
pub fn assemble_five_mub_families(
    stab_orbits: &[OrbitFamily],
    magic_orbits: &[OrbitFamily],
) -> Result<PairingTable> {
    let stab: Vec<Basis> = stab_orbits
        .iter()
        .map(|o| Basis::new(o.states.clone()))
        .collect::<Result<_>>()?;
    let mut pairings = Vec::new();
    let mut families = Vec::new();
    let mut multiplicity = vec![0; stab.len()];
    for (m, orbit) in magic_orbits.iter().enumerate() {
        let bases = orbit_bases(orbit)?;
        let mut hits = Vec::new();
        for (s, sb) in stab.iter().enumerate() {
            let mut five = bases.clone();
            five.push(sb.clone());
            let cert = certify_mub(&five)?;
            if cert.pass {
                hits.push((s, five, cert));
            }
        }
        if hits.len() != 1 {
            return Err(Error::AssociationFailure {
                magic_orbit: m,
                compatible: hits.len(),
            });
        }
        let (s, five, cert) = hits.pop().expect("one hit");
        multiplicity[s] += 1;
        pairings.push(Pairing {
            magic_orbit: m,
            stab_orbit: s,
        });
        families.push(MubFamily {
            bases: five,
            kind: MubKind::MixedFive,
            certificate: cert,
        });
    }
    Ok(PairingTable {
        pairings,
        multiplicity,
        families,
    })
}

#[derive(Debug, Clone)]
pub struct StabilizerFamilies {
    /// Orbit indices of each family, in the first valid partition found.
    pub groups: Vec<Vec<usize>>,
    pub families: Vec<MubFamily>,
    /// Number of distinct valid partitions.
    pub valid_partitions: usize,
}

/// Exhaustive search for partitions of the stabilizer bases into families
/// of `D + 1` mutually unbiased bases.
pub fn group_stabilizer_bases_into_families(
    stab_orbits: &[OrbitFamily],
) -> Result<StabilizerFamilies> {
    let bases: Vec<Basis> = stab_orbits
        .iter()
        .map(|o| Basis::new(o.states.clone()))
        .collect::<Result<_>>()?;
    let n = bases.len();
    let d = bases
        .first()
        .map(Basis::dim)
        .ok_or(Error::NoValidPartition)?;
    let k = d + 1;
    if !n.is_multiple_of(k) {
        return Err(Error::NoValidPartition);
    }
    let mu = mu_graph(&bases)?;
    let mut all = Vec::new();
    partitions_rec(&mu, k, &mut vec![false; n], &mut Vec::new(), &mut all);
    let groups = all.first().cloned().ok_or(Error::NoValidPartition)?;
    let families = groups
        .iter()
        .map(|g| {
            let fam: Vec<Basis> = g.iter().map(|&i| bases[i].clone()).collect();
            let certificate = certify_mub(&fam)?;
            Ok(MubFamily {
                bases: fam,
                kind: MubKind::Stabilizer,
                certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if families.iter().any(|f| !f.certificate.pass) {
        return Err(Error::NoValidPartition);
    }
    Ok(StabilizerFamilies {
        groups,
        families,
        valid_partitions: all.len(),
    })
}

/// Every set of `D + 1` pairwise mutually unbiased bases among the
/// stabilizer orbits, as sorted index lists in lexicographic order.
pub fn complete_mub_sets(stab_orbits: &[OrbitFamily]) -> Result<Vec<Vec<usize>>> {
    let bases: Vec<Basis> = stab_orbits
        .iter()
        .map(|o| Basis::new(o.states.clone()))
        .collect::<Result<_>>()?;
    let n = bases.len();
    let k = bases.first().map(Basis::dim).unwrap_or(0) + 1;
    let mu = mu_graph(&bases)?;
    let mut out = Vec::new();
    let mut clique = Vec::new();
    all_cliques(&mu, k, 0, n, &mut clique, &mut out);
    Ok(out)
}

fn all_cliques(
    mu: &[Vec<bool>],
    k: usize,
    from: usize,
    n: usize,
    clique: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if clique.len() == k {
        out.push(clique.clone());
        return;
    }
    for j in from..n {
        if clique.iter().all(|&c| mu[c][j]) {
            clique.push(j);
            all_cliques(mu, k, j + 1, n, clique, out);
            clique.pop();
        }
    }
}

fn mu_graph(bases: &[Basis]) -> Result<Vec<Vec<bool>>> {
    let n = bases.len();
    let mut mu = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ok = certify_mub(&[bases[i].clone(), bases[j].clone()])?.pass;
            mu[i][j] = ok;
            mu[j][i] = ok;
        }
    }
    Ok(mu)
}

fn partitions_rec(
    mu: &[Vec<bool>],
    k: usize,
    used: &mut Vec<bool>,
    current: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let Some(first) = used.iter().position(|u| !u) else {
        out.push(current.clone());
        return;
    };
    used[first] = true;
    let mut clique = vec![first];
    cliques_rec(mu, k, used, &mut clique, first + 1, current, out);
    used[first] = false;
}

fn cliques_rec(
    mu: &[Vec<bool>],
    k: usize,
    used: &mut Vec<bool>,
    clique: &mut Vec<usize>,
    from: usize,
    current: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if clique.len() == k {
        current.push(clique.clone());
        partitions_rec(mu, k, used, current, out);
        current.pop();
        return;
    }
    for j in from..used.len() {
        if used[j] || !clique.iter().all(|&c| mu[c][j]) {
            continue;
        }
        used[j] = true;
        clique.push(j);
        cliques_rec(mu, k, used, clique, j + 1, current, out);
        clique.pop();
        used[j] = false;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbelianCertificate {
    /// Group indices of the representatives stabilizing every member.
    pub operators: Vec<usize>,
    pub commuting: bool,
    pub pass: bool,
}

/// Finds the WH representatives having every member of `basis` as an
/// eigenvector with eigenvalue of modulus one, and checks that there are `D`
/// of them and that they commute.
pub fn stabilizing_subgroup(basis: &[PureState], group: &WhGroup) -> Result<AbelianCertificate> {
    let mut operators = Vec::new();
    for (k, op) in group.operators().iter().enumerate() {
        let mut all = true;
        for psi in basis {
            if (expectation(op, psi)?.norm() - 1.0).abs() > MUB_TOL {
                all = false;
                break;
            }
        }
        if all {
            operators.push(k);
        }
    }
    let ops = group.operators();
    let mut commuting = true;
    for (i, &a) in operators.iter().enumerate() {
        for &b in &operators[i + 1..] {
            let (ma, mb) = (ops[a].matrix(), ops[b].matrix());
            let diff = ma * mb - mb * ma;
            if diff.iter().any(|z: &C64| z.norm() > MUB_TOL) {
                commuting = false;
            }
        }
    }
    let pass = commuting && operators.len() == group.total_dim();
    Ok(AbelianCertificate {
        operators,
        commuting,
        pass,
    })
}
