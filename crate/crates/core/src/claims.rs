//! Reruns every structural and numerical claim and reports target, computed
//! value, tolerance and verdict for each.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{magic_seed, qudit_minimizer_orbits, sic1q_seed, two_qubit_orbits};
use crate::clifford::{
    apply_circuit, clifford_generators, clifford_orbit, clifford_orbit_exact, cnot, phase_t,
    DEFAULT_ORBIT_CAP,
};
use crate::entanglement::{concurrence, orbit_concurrence_profile, value_label};
use crate::error::{Error, Result};
use crate::exact::{rational_string, ExactState};
use crate::magic::{self, mub_bound, sic_bound, xi2_closed_1q, xi2_closed_2q, xi2_exact};
use crate::optimize::{
    bloch_amplitudes, collect_minimizers, hypersphere_amplitudes, multistart_minimize, snap_state,
    SearchConfig, Xi2Objective, SNAP_TOL,
};
use crate::states::{PureState, C64};
use crate::structure::{
    assemble_five_mub_families, certify_sic, certify_wh_mub_fiducial, complete_mub_sets,
    group_stabilizer_bases_into_families, partition_by_wh_orbit, stabilizing_subgroup,
};
use crate::wh_group::WhGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A value stated in the published analysis.
    Published,
    /// A value obtained here by an independent computation.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimTarget {
    pub value: Value,
    pub provenance: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    /// Acceptance criterion this claim belongs to.
    pub criterion: u32,
    pub description: String,
    pub target: ClaimTarget,
    pub computed: Value,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct ClaimConfig {
    pub seed: u64,
    /// Starts of the two-qubit and qudit searches.
    pub starts: usize,
    pub extended: bool,
    /// Starts of the extended scans.
    pub extended_starts: usize,
}

impl ClaimConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            starts: 2000,
            extended: false,
            extended_starts: 100_000,
        }
    }
}

struct Recorder {
    reports: Vec<ClaimReport>,
    criterion: u32,
    started: Instant,
}

impl Recorder {
    fn group(&mut self, criterion: u32) {
        self.criterion = criterion;
        self.started = Instant::now();
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        id: &str,
        description: &str,
        source: Source,
        target: Value,
        computed: Value,
        tolerance: f64,
        pass: bool,
    ) {
        self.reports.push(ClaimReport {
            claim_id: id.into(),
            criterion: self.criterion,
            description: description.into(),
            target: ClaimTarget {
                value: target,
                provenance: source,
            },
            computed,
            tolerance,
            pass,
            runtime_ms: self.started.elapsed().as_millis() as u64,
        });
    }

    fn number(
        &mut self,
        id: &str,
        description: &str,
        source: Source,
        target: f64,
        computed: f64,
        tolerance: f64,
    ) {
        let pass = (computed - target).abs() <= tolerance;
        self.push(
            id,
            description,
            source,
            json!(target),
            json!(computed),
            tolerance,
            pass,
        );
    }

    fn exact<T: Serialize + PartialEq>(
        &mut self,
        id: &str,
        description: &str,
        source: Source,
        target: T,
        computed: T,
    ) {
        let pass = target == computed;
        self.push(
            id,
            description,
            source,
            json!(target),
            json!(computed),
            0.0,
            pass,
        );
    }

    fn failed(&mut self, id: &str, err: &Error) {
        self.push(
            id,
            "claim group aborted",
            Source::Derived,
            Value::Null,
            json!(err.to_string()),
            0.0,
            false,
        );
    }
}

fn maximal_magic_state() -> PureState {
    magic_seed().to_pure()
}

fn crossover_state() -> PureState {
    let r3 = 3f64.sqrt();
    PureState::normalize(vec![
        C64::new(0.0, 0.0),
        C64::new(-1.0, r3),
        C64::new(r3, -1.0),
        C64::new(2.0, 0.0),
    ])
    .expect("nonzero")
}

/// `M_alpha(crossover state) - M_alpha((i, i, i, 1)/2)`.
pub fn crossover_difference(alpha: f64) -> Result<f64> {
    let g = WhGroup::qubits(2)?;
    Ok(magic::sre(alpha, &crossover_state(), &g)?.m
        - magic::sre(alpha, &maximal_magic_state(), &g)?.m)
}

/// Sign changes of `f` on the grid `lo, lo + step, ..., hi`, each refined by
/// bisection to `1e-10`.
pub fn sign_changes<F: Fn(f64) -> Result<f64>>(
    f: F,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<Vec<f64>> {
    let n = ((hi - lo) / step).round() as usize;
    let mut roots = Vec::new();
    let mut prev = (lo, f(lo)?);
    for k in 1..=n {
        let x = lo + step * k as f64;
        let fx = f(x)?;
        if prev.1.signum() != fx.signum() {
            let (mut a, mut b) = (prev.0, x);
            let fa_sign = prev.1.signum();
            while b - a > 1e-10 {
                let m = 0.5 * (a + b);
                if f(m)?.signum() == fa_sign {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev = (x, fx);
    }
    Ok(roots)
}

type ClaimGroup = fn(&mut Recorder, &ClaimConfig) -> Result<()>;

pub fn verify_claims(config: &ClaimConfig) -> Vec<ClaimReport> {
    let mut r = Recorder {
        reports: Vec::new(),
        criterion: 0,
        started: Instant::now(),
    };
    let groups: [(u32, &str, ClaimGroup); 14] = [
        (1, "global-min-two-qubit", two_qubit_search),
        (2, "max-M2-two-qubit", max_m2),
        (3, "clifford-orbit-480", clifford_480),
        (4, "stabilizers", stabilizers),
        (5, "magic-orbits", magic_orbits),
        (6, "five-mub-families", five_mub),
        (7, "concurrence", concurrence_claims),
        (8, "hessian-at-minimum", hessian_claims),
        (9, "circuit-t-cnot-t", circuit),
        (10, "one-qubit", one_qubit),
        (11, "qudit-d4", qudit),
        (12, "bounds", bounds),
        (13, "crossover", crossover),
        (14, "properties", properties),
    ];
    for (criterion, name, run) in groups {
        r.group(criterion);
        if let Err(e) = run(&mut r, config) {
            r.failed(&format!("{name}-error"), &e);
        }
    }
    let mut reports = r.reports;
    reports.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    reports
}

fn two_qubit_search(r: &mut Recorder, cfg: &ClaimConfig) -> Result<()> {
    let obj = Xi2Objective::two_qubit();
    let out = multistart_minimize(&obj, &SearchConfig::new(cfg.starts, cfg.seed))?;
    let best = out
        .best()
        .ok_or_else(|| Error::Certification("no accepted minimizer".into()))?;
    r.number(
        "global-min-two-qubit",
        "smallest Xi_2 over a seeded multistart search of two-qubit states",
        Source::Published,
        7.0 / 16.0,
        best.xi_value,
        1e-9,
    );
    let catalog = clifford_orbit_exact(&magic_seed(), &clifford_generators(2)?, DEFAULT_ORBIT_CAP)?;
    let exact = catalog.exact.as_deref().unwrap_or_default();
    let snapped = snap_state(&best.state, exact, SNAP_TOL);
    let xi = match snapped {
        Some(e) => rational_string(&xi2_exact(e, obj.group())?),
        None => "unsnapped".into(),
    };
    r.exact(
        "global-min-two-qubit-exact",
        "exact Xi_2 of the best minimizer snapped to a Gaussian-rational state",
        Source::Published,
        "7/16".to_string(),
        xi,
    );
    let fam = collect_minimizers(&out.records, 7.0 / 16.0, 1e-9)?;
    let unmatched = fam
        .states
        .iter()
        .filter(|s| snap_state(s, exact, SNAP_TOL).is_none())
        .count();
    r.exact(
        "search-minimizers-in-catalog",
        "collected global minimizers missing from the Clifford-orbit catalog",
        Source::Derived,
        0usize,
        unmatched,
    );
    let mut failing = 0;
    for s in &fam.states {
        let pass = match snap_state(s, exact, SNAP_TOL) {
            Some(e) => certify_wh_mub_fiducial(&e.to_pure(), obj.group())?.pass,
            None => false,
        };
        if !pass {
            failing += 1;
        }
    }
    r.exact(
        "search-minimizers-mub-fiducial",
        "snapped global minimizers failing WH-MUB fiducial certification",
        Source::Derived,
        0usize,
        failing,
    );
    if cfg.extended {
        let wide = multistart_minimize(&obj, &SearchConfig::new(cfg.extended_starts, cfg.seed))?;
        let mut curve = BTreeMap::new();
        let mut n = 1000;
        while n <= cfg.extended_starts {
            let prefix: Vec<_> = wide
                .records
                .iter()
                .filter(|x| x.start_index < n)
                .cloned()
                .collect();
            curve.insert(
                n.to_string(),
                collect_minimizers(&prefix, 7.0 / 16.0, 1e-9)?.size(),
            );
            n *= 2;
        }
        let all = collect_minimizers(&wide.records, 7.0 / 16.0, 1e-9)?;
        curve.insert(cfg.extended_starts.to_string(), all.size());
        let hit: HashSet<_> = all
            .states
            .iter()
            .filter_map(|s| snap_state(s, exact, SNAP_TOL).map(ExactState::ray_key))
            .collect();
        r.push(
            "search-coverage-480",
            "distinct catalog members reached by the extended two-qubit scan (coverage by number of starts)",
            Source::Published,
            json!(480),
            json!({"covered": hit.len(), "curve": curve}),
            0.0,
            hit.len() == 480 && all.size() == 480,
        );
    }
    Ok(())
}

fn max_m2(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let g = WhGroup::qubits(2)?;
    let m = magic::sre(2.0, &maximal_magic_state(), &g)?.m;
    r.number(
        "max-M2-two-qubit",
        "M_2 of the two-qubit maximal-magic state",
        Source::Published,
        (16.0f64 / 7.0).ln(),
        m,
        1e-9,
    );
    r.number(
        "max-M2-equals-mub-bound",
        "maximal two-qubit M_2 against the WH-MUB fiducial value for d = 4",
        Source::Published,
        mub_bound(2.0, 4)?,
        m,
        4.0 * f64::EPSILON,
    );
    Ok(())
}

fn clifford_480(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let orbit = clifford_orbit_exact(&magic_seed(), &clifford_generators(2)?, DEFAULT_ORBIT_CAP)?;
    r.exact(
        "clifford-orbit-480",
        "exact Clifford orbit size of (i, i, i, 1)/2",
        Source::Published,
        480usize,
        orbit.size(),
    );
    Ok(())
}

fn stabilizers(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let g = WhGroup::qubits(2)?;
    let stab = crate::structure::enumerate_stabilizers_2q()?;
    r.exact(
        "stabilizer-count",
        "two-qubit stabilizer states",
        Source::Published,
        60usize,
        stab.size(),
    );
    let mut non_unit = 0;
    for e in stab.exact.as_deref().unwrap_or_default() {
        if rational_string(&xi2_exact(e, &g)?) != "1" {
            non_unit += 1;
        }
    }
    r.exact(
        "stabilizer-zero-magic",
        "stabilizer states whose exact Xi_2 differs from 1",
        Source::Published,
        0usize,
        non_unit,
    );
    let (orbits, _) = two_qubit_orbits()?;
    r.exact(
        "stabilizer-wh-orbits",
        "WH orbits of the stabilizer states",
        Source::Published,
        15usize,
        orbits.len(),
    );
    let mut abelian = 0;
    for o in &orbits {
        if stabilizing_subgroup(&o.states, &g)?.pass {
            abelian += 1;
        }
    }
    r.exact(
        "stabilizer-bases-maximal-abelian",
        "stabilizer bases that are joint eigenbases of four commuting WH representatives",
        Source::Published,
        15usize,
        abelian,
    );
    let sets = complete_mub_sets(&orbits)?;
    r.push(
        "stabilizer-complete-mub-sets",
        "sets of five mutually unbiased stabilizer bases (with pairwise shared bases)",
        Source::Derived,
        Value::Null,
        json!({"count": sets.len(), "sets": sets}),
        0.0,
        !sets.is_empty(),
    );
    let found = match group_stabilizer_bases_into_families(&orbits) {
        Ok(f) => json!({"families": f.families.len(), "valid_partitions": f.valid_partitions}),
        Err(Error::NoValidPartition) => json!({"families": 0, "valid_partitions": 0}),
        Err(e) => return Err(e),
    };
    let pass = found["families"] == json!(3);
    r.push(
        "stabilizer-families-of-5",
        "disjoint grouping of the 15 stabilizer bases into 3 families of 5 MUBs",
        Source::Published,
        json!({"families": 3}),
        found,
        0.0,
        pass,
    );
    Ok(())
}

fn magic_orbits(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let g = WhGroup::qubits(2)?;
    let (_, orbits) = two_qubit_orbits()?;
    let sizes: Vec<usize> = orbits.iter().map(|o| o.size()).collect();
    r.exact(
        "magic-wh-orbits",
        "WH orbits of the maximal-magic states",
        Source::Published,
        30usize,
        orbits.len(),
    );
    r.exact(
        "magic-wh-orbit-size",
        "states per maximal-magic WH orbit",
        Source::Published,
        vec![16usize; 30],
        sizes,
    );
    let mut worst = 0.0f64;
    let mut failing = 0;
    for s in orbits.iter().flat_map(|o| &o.states) {
        let c = certify_wh_mub_fiducial(s, &g)?;
        if !c.pass {
            failing += 1;
        }
        worst = worst.max(c.worst_deviation);
    }
    r.exact(
        "magic-mub-fiducial",
        "maximal-magic states failing WH-MUB fiducial certification",
        Source::Published,
        0usize,
        failing,
    );
    r.number(
        "magic-mub-deviation",
        "worst mutual-unbiasedness deviation over all 480 fiducial certificates",
        Source::Derived,
        0.0,
        worst,
        1e-10,
    );
    Ok(())
}

fn five_mub(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let (stab, magic) = two_qubit_orbits()?;
    let table = assemble_five_mub_families(&stab, &magic)?;
    r.exact(
        "five-mub-pairings",
        "magic orbits with exactly one completing stabilizer basis",
        Source::Published,
        30usize,
        table.pairings.len(),
    );
    r.exact(
        "five-mub-stab-multiplicity",
        "magic orbits completed by each stabilizer orbit",
        Source::Published,
        vec![2usize; 15],
        table.multiplicity.clone(),
    );
    r.exact(
        "five-mub-families",
        "certified families of five MUBs",
        Source::Published,
        30usize,
        table.families.iter().filter(|f| f.certificate.pass).count(),
    );
    Ok(())
}

fn concurrence_claims(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let (stab, magic) = two_qubit_orbits()?;
    let table = assemble_five_mub_families(&stab, &magic)?;
    let sp = orbit_concurrence_profile(&stab)?;
    let mp = orbit_concurrence_profile(&magic)?;
    let half = value_label(0.5);
    let root = value_label(std::f64::consts::FRAC_1_SQRT_2);
    r.exact(
        "concurrence-stabilizer-orbits",
        "stabilizer orbits by concurrence",
        Source::Published,
        BTreeMap::from([("0".to_string(), 9usize), ("1".to_string(), 6)]),
        sp.histogram.clone(),
    );
    let values: Vec<String> = mp.histogram.keys().cloned().collect();
    r.exact(
        "concurrence-magic-values",
        "distinct concurrence values of the maximal-magic orbits",
        Source::Published,
        vec![half.clone(), root.clone()],
        values,
    );
    let mut violations = 0;
    let mut worst = 0.0f64;
    for p in &table.pairings {
        let cm = mp.per_orbit[p.magic_orbit];
        let want = if sp.per_orbit[p.stab_orbit] < 0.5 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            0.5
        };
        worst = worst.max((cm - want).abs());
        if (cm - want).abs() > 1e-10 {
            violations += 1;
        }
    }
    r.exact(
        "concurrence-pairing-rule",
        "magic orbits violating: product-paired -> 1/sqrt2, entangled-paired -> 1/2",
        Source::Published,
        0usize,
        violations,
    );
    r.exact(
        "concurrence-magic-counts",
        "maximal-magic orbits by concurrence",
        Source::Derived,
        BTreeMap::from([(half, 12usize), (root, 18)]),
        mp.histogram.clone(),
    );
    let max = magic
        .iter()
        .flat_map(|o| &o.states)
        .map(concurrence)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    r.number(
        "concurrence-magic-max",
        "largest concurrence over the 480 maximal-magic states",
        Source::Published,
        std::f64::consts::FRAC_1_SQRT_2,
        max,
        1e-10,
    );
    Ok(())
}

fn hessian_claims(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let p = [
        FRAC_PI_4, FRAC_PI_4, FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2,
    ];
    let g = magic::gradient_xi2(&p);
    let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    r.push(
        "hessian-gradient",
        "gradient norm of the closed-form Xi_2 at the two-qubit minimizer",
        Source::Published,
        json!(0.0),
        json!(gn),
        1e-9,
        gn < 1e-9,
    );
    let cert = magic::hessian_positive_definite(&p)?;
    let min = cert.min_eigenvalue();
    r.push(
        "hessian-positive-definite",
        "smallest Hessian eigenvalue at the two-qubit minimizer",
        Source::Published,
        json!({"greater_than": magic::POSITIVITY_TOL}),
        json!({"min": min, "eigenvalues": cert.eigenvalues}),
        magic::POSITIVITY_TOL,
        min > magic::POSITIVITY_TOL,
    );
    Ok(())
}

fn circuit(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let gates = [phase_t(2, 0)?, phase_t(2, 1)?, cnot(0, 1)?, phase_t(2, 1)?];
    let start = PureState::normalize(vec![C64::new(1.0, 0.0); 4])?;
    let out = apply_circuit(&start, &gates)?;
    let i = C64::new(0.0, 1.0);
    let want = PureState::normalize(vec![C64::new(1.0, 0.0), i, i, i])?;
    let d = out.phase_distance(&want)?;
    r.push(
        "circuit-t-cnot-t",
        "(1 x T) CNOT (T x T) maps (1,1,1,1)/2 to (1,i,i,i)/2 up to phase",
        Source::Published,
        json!(0.0),
        json!(d),
        1e-12,
        d <= 1e-12,
    );
    Ok(())
}

fn one_qubit(r: &mut Recorder, cfg: &ClaimConfig) -> Result<()> {
    let obj = Xi2Objective::one_qubit();
    let out = multistart_minimize(&obj, &SearchConfig::new(200, cfg.seed))?;
    let min = out
        .global_min()
        .ok_or_else(|| Error::Certification("no accepted minimizer".into()))?;
    r.number(
        "one-qubit-min",
        "smallest single-qubit Xi_2",
        Source::Published,
        2.0 / 3.0,
        min,
        1e-9,
    );
    let fam = collect_minimizers(&out.records, 2.0 / 3.0, 1e-9)?;
    r.exact(
        "one-qubit-minimizers",
        "distinct single-qubit minimizers",
        Source::Published,
        8usize,
        fam.size(),
    );
    let g1 = WhGroup::qubits(1)?;
    let parts = partition_by_wh_orbit(&fam.states, &g1)?;
    let mut sic_worst = 0.0f64;
    let mut sics = 0;
    for p in &parts {
        if p.size() == 4 {
            let c = certify_sic(&p.states)?;
            sic_worst = sic_worst.max(c.worst_deviation);
            if c.pass {
                sics += 1;
            }
        }
    }
    r.push(
        "one-qubit-two-sics",
        "WH orbits of the minimizers that certify as SICs (overlap 1/3)",
        Source::Published,
        json!(2),
        json!({"sics": sics, "orbits": parts.len(), "worst_deviation": sic_worst}),
        1e-9,
        sics == 2 && parts.len() == 2,
    );
    let theta = -2.0 * (1.0 / (2.0 + 3f64.sqrt()).sqrt()).atan();
    let psi = PureState::normalize(bloch_amplitudes(theta, 3.0 * PI / 4.0))?;
    let d = psi.phase_distance(&sic1q_seed())?;
    r.push(
        "one-qubit-analytic-minimizer",
        "closed-form single-qubit minimizer equals the first SIC fiducial up to phase",
        Source::Published,
        json!(0.0),
        json!({"phase_distance": d, "xi2": xi2_closed_1q(theta, 3.0 * PI / 4.0)}),
        1e-12,
        d <= 1e-12,
    );
    let orbit = clifford_orbit(&sic1q_seed(), &clifford_generators(1)?, DEFAULT_ORBIT_CAP)?;
    let found = orbit.states.iter().filter(|s| fam.contains(s)).count();
    r.exact(
        "one-qubit-clifford-orbit",
        "Clifford orbit of the first fiducial matched by search minimizers",
        Source::Published,
        8usize,
        found,
    );
    Ok(())
}

fn qudit(r: &mut Recorder, cfg: &ClaimConfig) -> Result<()> {
    let obj = Xi2Objective::qudit(4)?;
    let out = multistart_minimize(&obj, &SearchConfig::new(cfg.starts, cfg.seed))?;
    let min = out
        .global_min()
        .ok_or_else(|| Error::Certification("no accepted minimizer".into()))?;
    r.number(
        "qudit-min",
        "smallest Xi_2 of a single d = 4 qudit",
        Source::Published,
        0.4,
        min,
        1e-9,
    );
    if cfg.extended {
        let orbits = qudit_minimizer_orbits(cfg.seed, cfg.extended_starts)?;
        let total: usize = orbits.iter().map(|o| o.size()).sum();
        r.exact(
            "qudit-minimizers-256",
            "distinct d = 4 qudit minimizers",
            Source::Published,
            256usize,
            total,
        );
        let mut sics = 0;
        let mut worst = 0.0f64;
        for o in &orbits {
            if o.size() == 16 {
                let c = certify_sic(&o.states)?;
                worst = worst.max(c.worst_deviation);
                if c.pass {
                    sics += 1;
                }
            }
        }
        r.push(
            "qudit-sics-16x16",
            "W(4) orbits of the qudit minimizers certified as SICs",
            Source::Published,
            json!(16),
            json!({"sics": sics, "orbits": orbits.len(), "worst_deviation": worst}),
            1e-9,
            sics == 16 && orbits.len() == 16,
        );
    }
    Ok(())
}

fn bounds(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let mut gaps = BTreeMap::new();
    let mut ok = true;
    for alpha in [1.5, 2.0, 3.0, 5.0] {
        let (m, s) = (mub_bound(alpha, 4)?, sic_bound(alpha, 4)?);
        ok &= m < s;
        gaps.insert(alpha.to_string(), s - m);
    }
    r.push(
        "bound-ordering",
        "WH-MUB fiducial value below the SIC bound for d = 4",
        Source::Published,
        json!("positive gaps"),
        json!(gaps),
        0.0,
        ok,
    );
    r.number(
        "sic-bound-d4",
        "SIC bound on M_2 for d = 4",
        Source::Published,
        2.5f64.ln(),
        sic_bound(2.0, 4)?,
        4.0 * f64::EPSILON,
    );
    Ok(())
}

fn crossover(r: &mut Recorder, _: &ClaimConfig) -> Result<()> {
    let at_half = crossover_difference(0.5)?;
    let at_two = crossover_difference(2.0)?;
    r.push(
        "crossover-signs",
        "M_alpha(crossover state) - M_alpha(maximal magic) at alpha = 1/2 and alpha = 2",
        Source::Published,
        json!({"alpha_0.5": "> 0", "alpha_2": "< 0"}),
        json!({"alpha_0.5": at_half, "alpha_2": at_two}),
        0.0,
        at_half > 0.0 && at_two < 0.0,
    );
    let roots = sign_changes(crossover_difference, 1.4, 1.9, 0.01)?;
    r.push(
        "crossover-bracket",
        "single sign change of the M_alpha difference in [1.4, 1.9]",
        Source::Published,
        json!([1.4, 1.9]),
        json!(roots),
        0.0,
        roots.len() == 1,
    );
    Ok(())
}

fn properties(r: &mut Recorder, cfg: &ClaimConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g1 = WhGroup::qubits(1)?;
    let g2 = WhGroup::qubits(2)?;
    let mut worst = 0.0f64;
    for g in [&g1, &g2] {
        for _ in 0..100 {
            let psi = PureState::haar_random(g.total_dim(), &mut rng);
            worst = worst.max((magic::xi(1.0, &psi, g)? - 1.0).abs());
        }
    }
    r.number(
        "property-purity-sum",
        "(1/D) sum |<O>|^2 = 1 on random states",
        Source::Derived,
        1.0,
        1.0 + worst,
        1e-10,
    );

    let gens = crate::clifford::standard_gates(2)?;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let psi = PureState::haar_random(4, &mut rng);
        let x0 = magic::xi(2.0, &psi, &g2)?;
        for gate in gens.iter().filter(|g| g.is_clifford_gate()) {
            worst = worst.max((magic::xi(2.0, &psi.apply(gate.matrix())?, &g2)? - x0).abs());
        }
    }
    r.number(
        "property-clifford-invariance",
        "Xi_2 change under Clifford generators",
        Source::Derived,
        0.0,
        worst,
        1e-11,
    );

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let psi = PureState::haar_random(4, &mut rng);
        let c0 = concurrence(&psi)?;
        for op in g2.operators() {
            worst = worst.max((concurrence(&op.apply(&psi)?)? - c0).abs());
        }
    }
    r.number(
        "property-concurrence-wh-invariance",
        "concurrence change under WH operators",
        Source::Derived,
        0.0,
        worst,
        1e-12,
    );

    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let t: f64 = rand::Rng::random_range(&mut rng, 0.0..PI);
        let f: f64 = rand::Rng::random_range(&mut rng, 0.0..2.0 * PI);
        let direct = magic::xi(2.0, &PureState::normalize(bloch_amplitudes(t, f))?, &g1)?;
        worst = worst.max((direct - xi2_closed_1q(t, f)).abs());
        let p: [f64; 6] = std::array::from_fn(|k| {
            let hi = if k < 3 { FRAC_PI_2 } else { 2.0 * PI };
            rand::Rng::random_range(&mut rng, 0.0..hi)
        });
        let direct = magic::xi(2.0, &PureState::normalize(hypersphere_amplitudes(&p))?, &g2)?;
        worst = worst.max((direct - xi2_closed_2q(&p)).abs());
    }
    r.number(
        "property-closed-form",
        "closed forms against direct summation",
        Source::Derived,
        0.0,
        worst,
        1e-11,
    );

    let mut mismatches = 0;
    for _ in 0..20 {
        let psi = PureState::haar_random(4, &mut rng);
        let key = psi.canonical_key();
        for _ in 0..1000 {
            let phi: f64 = rand::Rng::random_range(&mut rng, 0.0..2.0 * PI);
            if psi.with_phase(phi).canonical_key() != key {
                mismatches += 1;
            }
        }
    }
    r.exact(
        "property-canonical-key-phase",
        "canonical keys changed by a global phase",
        Source::Derived,
        0usize,
        mismatches,
    );
    Ok(())
}
