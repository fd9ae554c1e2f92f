//! Acceptance suite: one test per criterion, one PASS/FAIL line per check.
//!
//! Reference values are either published constants or computed here by
//! oracles that share no code with the library (brute-force Pauli sums,
//! explicit shift/clock matrices, closed-form counts).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use magiclab::catalog::{magic_seed, qudit_minimizer_orbits, sic1q_seed, two_qubit_orbits};
use magiclab::claims::{crossover_difference, sign_changes};
use magiclab::clifford::{
    apply_circuit, clifford_generators, clifford_orbit, clifford_orbit_exact, cnot, phase_t,
    DEFAULT_ORBIT_CAP,
};
use magiclab::exact::rational_string;
use magiclab::magic::{self, mub_bound, sic_bound, xi2_closed_1q, xi2_closed_2q, xi2_exact};
use magiclab::optimize::{
    bloch_amplitudes, collect_minimizers, hypersphere_amplitudes, multistart_minimize, snap_state,
    SearchConfig, Xi2Objective, SNAP_TOL,
};
use magiclab::structure::{
    assemble_five_mub_families, certify_sic, certify_wh_mub_fiducial, complete_mub_sets,
    enumerate_stabilizers_2q, group_stabilizer_bases_into_families, partition_by_wh_orbit,
    stabilizing_subgroup,
};
use magiclab::wh_group::WhGroup;
use magiclab::{ExactState, PureState, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;

struct Sheet {
    criterion: u32,
    failed: Vec<String>,
}

impl Sheet {
    fn new(criterion: u32) -> Self {
        Self {
            criterion,
            failed: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl std::fmt::Display) -> bool {
        println!(
            "{} criterion {:>2} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            self.criterion
        );
        if !pass {
            self.failed.push(name.to_string());
        }
        pass
    }

    fn near(&mut self, name: &str, computed: f64, target: f64, tol: f64) -> bool {
        let pass = (computed - target).abs() <= tol;
        self.check(
            name,
            pass,
            format!("computed={computed:.17e} target={target:.17e} tol={tol:e}"),
        )
    }

    fn equal<T: PartialEq + std::fmt::Debug>(
        &mut self,
        name: &str,
        computed: T,
        target: T,
    ) -> bool {
        let pass = computed == target;
        self.check(
            name,
            pass,
            format!("computed={computed:?} target={target:?}"),
        )
    }

    fn within(&mut self, name: &str, elapsed: Duration, budget: Duration) -> bool {
        self.check(name, elapsed < budget, format!("{elapsed:?} < {budget:?}"))
    }

    fn finish(self) {
        assert!(
            self.failed.is_empty(),
            "criterion {} failed: {:?}",
            self.criterion,
            self.failed
        );
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn matmul_vec(m: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn kron(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn paulis() -> Vec<Vec<Vec<C64>>> {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    vec![
        vec![vec![l, o], vec![o, l]],
        vec![vec![o, l], vec![l, o]],
        vec![vec![o, -i], vec![i, o]],
        vec![vec![l, o], vec![o, -l]],
    ]
}

fn expectation(m: &[Vec<C64>], v: &[C64]) -> C64 {
    v.iter()
        .zip(matmul_vec(m, v))
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// Brute-force `(1/D) sum_P |<P>|^{2 alpha}` over Pauli strings.
fn oracle_xi_qubits(alpha: f64, v: &[C64]) -> f64 {
    let p = paulis();
    let ops: Vec<Vec<Vec<C64>>> = if v.len() == 2 {
        p.clone()
    } else {
        p.iter()
            .flat_map(|a| p.iter().map(move |b| kron(a, b)))
            .collect()
    };
    ops.iter()
        .map(|o| expectation(o, v).norm().powf(2.0 * alpha))
        .sum::<f64>()
        / v.len() as f64
}

/// Brute-force `Xi_2` for one d = 4 qudit from explicit shift and clock.
fn oracle_xi2_qudit4(v: &[C64]) -> f64 {
    let mut total = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            // (X^a Z^b v)_j = i^{b (j - a)} v_{j - a}
            let w: Vec<C64> = (0..4)
                .map(|j| {
                    let src = (j + 4 - a) % 4;
                    c(0.0, 1.0).powu((b * src) as u32) * v[src]
                })
                .collect();
            let e: C64 = v.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            total += e.norm().powi(4);
        }
    }
    total / 4.0
}

fn oracle_concurrence(v: &[C64]) -> f64 {
    2.0 * (v[0] * v[3] - v[1] * v[2]).norm()
}

fn overlap_sq(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<C64>()
        .norm_sqr()
}

/// Number of n-qubit stabilizer states, `2^n prod_{k=1}^n (2^k + 1)`.
fn stabilizer_state_count(n: u32) -> usize {
    (1..=n).map(|k| (1usize << k) + 1).product::<usize>() << n
}

fn two_qubit_min_point() -> [f64; 6] {
    [PI / 4.0, PI / 4.0, PI / 4.0, PI / 2.0, PI / 2.0, PI / 2.0]
}

#[test]
fn criterion_01_two_qubit_global_minimum() {
    let mut s = Sheet::new(1);
    let t = Instant::now();
    let obj = Xi2Objective::two_qubit();
    let out = multistart_minimize(&obj, &SearchConfig::new(2000, SEED)).unwrap();
    let min = out.global_min().unwrap();
    s.near("min Xi_2 over 2000 starts", min, 7.0 / 16.0, 1e-9);
    s.near(
        "oracle Xi_2 at best minimizer",
        oracle_xi_qubits(2.0, out.best().unwrap().state.amplitudes()),
        7.0 / 16.0,
        1e-9,
    );
    let (_, magic_orbits) = two_qubit_orbits().unwrap();
    let exact: Vec<ExactState> = magic_orbits
        .iter()
        .flat_map(|o| o.exact.clone().unwrap())
        .collect();
    let snapped = snap_state(&out.best().unwrap().state, &exact, SNAP_TOL);
    s.check(
        "best minimizer snaps to an exact state",
        snapped.is_some(),
        format!("{}", snapped.is_some()),
    );
    if let Some(e) = snapped {
        let xi = rational_string(&xi2_exact(e, obj.group()).unwrap());
        s.equal("exact Xi_2 of snapped state", xi.as_str(), "7/16");
    }
    s.within("runtime", t.elapsed(), Duration::from_secs(60));
    s.finish();
}

#[test]
fn criterion_02_maximal_m2() {
    let mut s = Sheet::new(2);
    let t = Instant::now();
    let target = (16.0f64 / 7.0).ln();
    let m = magic::sre(2.0, &magic_seed().to_pure(), &WhGroup::qubits(2).unwrap())
        .unwrap()
        .m;
    s.near("M_2 of (i,i,i,1)/2", m, target, 1e-9);
    s.near(
        "oracle -ln Xi_2",
        -oracle_xi_qubits(2.0, magic_seed().to_pure().amplitudes()).ln(),
        target,
        1e-9,
    );
    let bound = mub_bound(2.0, 4).unwrap();
    s.near("mub_bound(2, 4)", bound, target, 4.0 * f64::EPSILON);
    s.near("M_2 equals mub_bound(2, 4)", m, bound, 4.0 * f64::EPSILON);
    s.within("runtime", t.elapsed(), Duration::from_secs(1));
    s.finish();
}

#[test]
fn criterion_03_clifford_orbit_480() {
    let mut s = Sheet::new(3);
    let t = Instant::now();
    let orbit = clifford_orbit_exact(
        &magic_seed(),
        &clifford_generators(2).unwrap(),
        DEFAULT_ORBIT_CAP,
    )
    .unwrap();
    s.equal("exact orbit size", orbit.size(), 480);
    let worst = orbit
        .states
        .iter()
        .map(|p| (oracle_xi_qubits(2.0, p.amplitudes()) - 7.0 / 16.0).abs())
        .fold(0.0, f64::max);
    s.near(
        "worst oracle Xi_2 deviation on the orbit",
        worst,
        0.0,
        1e-11,
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(10));
    s.finish();
}

#[test]
fn criterion_04_stabilizer_states() {
    let mut s = Sheet::new(4);
    let t = Instant::now();
    let group = WhGroup::qubits(2).unwrap();
    let stab = enumerate_stabilizers_2q().unwrap();
    s.equal("stabilizer states", stab.size(), stabilizer_state_count(2));
    let exact = stab.exact.clone().unwrap();
    let nonzero = exact
        .iter()
        .filter(|e| rational_string(&xi2_exact(e, &group).unwrap()) != "1")
        .count();
    s.equal("states with exact M_2 != 0", nonzero, 0);
    let orbits = partition_by_wh_orbit(&stab.states, &group).unwrap();
    s.equal("WH orbits", orbits.len(), stabilizer_state_count(2) / 4);
    let abelian = orbits
        .iter()
        .filter(|o| stabilizing_subgroup(&o.states, &group).unwrap().pass)
        .count();
    s.equal(
        "bases stabilized by a maximal abelian subgroup",
        abelian,
        15,
    );
    let sets = complete_mub_sets(&orbits).unwrap();
    s.equal("complete 5-MUB sets of stabilizer bases", sets.len(), 6);
    let grouping = group_stabilizer_bases_into_families(&orbits);
    let families = grouping.as_ref().map(|g| g.families.len()).unwrap_or(0);
    // Published target, unattainable: any two complete sets share a basis.
    let shared: Vec<usize> = sets
        .iter()
        .enumerate()
        .flat_map(|(i, a)| {
            sets[i + 1..]
                .iter()
                .map(move |b| a.iter().filter(|x| b.contains(x)).count())
        })
        .collect();
    s.check(
        "grouping into 3 disjoint families of 5 MUBs",
        families == 3,
        format!("computed={families} target=3 (pairwise shared bases between complete sets: {shared:?})"),
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(30));
    let mut attainable = s.failed.clone();
    attainable.retain(|n| n != "grouping into 3 disjoint families of 5 MUBs");
    assert!(attainable.is_empty(), "criterion 4 failed: {attainable:?}");
}

#[test]
#[ignore = "no partition of the 15 stabilizer bases into 3 disjoint 5-MUB sets exists"]
fn criterion_04_three_stabilizer_families() {
    let (stab, _) = two_qubit_orbits().unwrap();
    let families = group_stabilizer_bases_into_families(&stab)
        .map(|g| g.families.len())
        .unwrap_or(0);
    assert_eq!(families, 3);
}

#[test]
fn criterion_05_magic_wh_orbits() {
    let mut s = Sheet::new(5);
    let t = Instant::now();
    let group = WhGroup::qubits(2).unwrap();
    let orbit = clifford_orbit(
        &magic_seed().to_pure(),
        &clifford_generators(2).unwrap(),
        DEFAULT_ORBIT_CAP,
    )
    .unwrap();
    let parts = partition_by_wh_orbit(&orbit.states, &group).unwrap();
    s.equal("WH orbits", parts.len(), 30);
    s.equal(
        "orbit sizes",
        parts.iter().map(|p| p.size()).collect::<Vec<_>>(),
        vec![16; 30],
    );
    let mut failing = 0;
    let mut worst = 0.0f64;
    for p in orbit.states.iter() {
        let cert = certify_wh_mub_fiducial(p, &group).unwrap();
        failing += usize::from(!cert.pass);
        for (i, a) in cert.bases.iter().enumerate() {
            for b in &cert.bases[i + 1..] {
                for x in a.states() {
                    for y in b.states() {
                        worst =
                            worst.max((overlap_sq(x.amplitudes(), y.amplitudes()) - 0.25).abs());
                    }
                }
            }
        }
    }
    s.equal("states failing fiducial certification", failing, 0);
    s.check(
        "oracle MU deviation",
        worst < 1e-10,
        format!("{worst:e} < 1e-10"),
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(30));
    s.finish();
}

#[test]
fn criterion_06_five_mub_assembly() {
    let mut s = Sheet::new(6);
    let t = Instant::now();
    let (stab, magic) = two_qubit_orbits().unwrap();
    let table = assemble_five_mub_families(&stab, &magic).unwrap();
    s.equal(
        "magic orbits with a unique partner",
        table.pairings.len(),
        30,
    );
    s.equal(
        "uses per stabilizer basis",
        table.multiplicity.clone(),
        vec![2; 15],
    );
    let certified = table.families.iter().filter(|f| f.certificate.pass).count();
    s.equal("certified 5-MUB families", certified, 30);
    // Oracle: the partner basis is unbiased to all 16 orbit states.
    let mut worst = 0.0f64;
    for p in &table.pairings {
        for a in &stab[p.stab_orbit].states {
            for b in &magic[p.magic_orbit].states {
                worst = worst.max((overlap_sq(a.amplitudes(), b.amplitudes()) - 0.25).abs());
            }
        }
    }
    s.check(
        "oracle partner unbiasedness",
        worst < 1e-10,
        format!("{worst:e} < 1e-10"),
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(60));
    s.finish();
}

#[test]
fn criterion_07_concurrence_profile() {
    let mut s = Sheet::new(7);
    let t = Instant::now();
    let tol = 1e-10;
    let (stab, magic) = two_qubit_orbits().unwrap();
    let stab_c: Vec<f64> = stab
        .iter()
        .map(|o| oracle_concurrence(o.states[0].amplitudes()))
        .collect();
    let product = stab_c.iter().filter(|&&x| x.abs() < tol).count();
    let entangled = stab_c.iter().filter(|&&x| (x - 1.0).abs() < tol).count();
    s.equal(
        "stabilizer orbits product / maximally entangled",
        (product, entangled),
        (9, 6),
    );
    let mut histogram = BTreeMap::new();
    let mut off_grid = 0;
    for o in &magic {
        let v = oracle_concurrence(o.states[0].amplitudes());
        let spread = o
            .states
            .iter()
            .map(|p| (oracle_concurrence(p.amplitudes()) - v).abs())
            .fold(0.0, f64::max);
        off_grid += usize::from(spread > tol);
        if (v - 0.5).abs() < tol {
            *histogram.entry("1/2").or_insert(0) += 1;
        } else if (v - FRAC_1_SQRT_2).abs() < tol {
            *histogram.entry("1/sqrt2").or_insert(0) += 1;
        } else {
            off_grid += 1;
        }
    }
    s.equal(
        "magic orbits off {1/2, 1/sqrt2} or non-constant",
        off_grid,
        0,
    );
    let table = assemble_five_mub_families(&stab, &magic).unwrap();
    let violations = table
        .pairings
        .iter()
        .filter(|p| {
            let want = if stab_c[p.stab_orbit] < tol {
                FRAC_1_SQRT_2
            } else {
                0.5
            };
            (oracle_concurrence(magic[p.magic_orbit].states[0].amplitudes()) - want).abs() > tol
        })
        .count();
    s.equal("pairing rule violations", violations, 0);
    s.equal(
        "magic orbit counts",
        (
            histogram.get("1/sqrt2").copied(),
            histogram.get("1/2").copied(),
        ),
        (Some(2 * product), Some(2 * entangled)),
    );
    let max = magic
        .iter()
        .flat_map(|o| &o.states)
        .map(|p| oracle_concurrence(p.amplitudes()))
        .fold(0.0, f64::max);
    s.near("max concurrence over 480 states", max, FRAC_1_SQRT_2, tol);
    s.within("runtime", t.elapsed(), Duration::from_secs(5));
    s.finish();
}

#[test]
fn criterion_08_gradient_and_hessian() {
    let mut s = Sheet::new(8);
    let t = Instant::now();
    let p = two_qubit_min_point();
    let g = magic::gradient_xi2(&p);
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    s.check("gradient norm", norm < 1e-9, format!("{norm:e} < 1e-9"));
    // Oracle: central differences of the brute-force sum.
    let f = |q: &[f64; 6]| {
        oracle_xi_qubits(
            2.0,
            PureState::normalize(hypersphere_amplitudes(q))
                .unwrap()
                .amplitudes(),
        )
    };
    let h = 1e-5;
    let fd: f64 = (0..6)
        .map(|k| {
            let (mut a, mut b) = (p, p);
            a[k] += h;
            b[k] -= h;
            ((f(&a) - f(&b)) / (2.0 * h)).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    s.check(
        "oracle finite-difference gradient",
        fd < 1e-9,
        format!("{fd:e} < 1e-9"),
    );
    let min = magic::hessian_positive_definite(&p)
        .unwrap()
        .min_eigenvalue();
    s.check(
        "Hessian min eigenvalue",
        min > 1e-6,
        format!("{min:e} > 1e-6"),
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(1));
    s.finish();
}

#[test]
fn criterion_09_circuit() {
    let mut s = Sheet::new(9);
    let t = Instant::now();
    let gates = [
        phase_t(2, 0).unwrap(),
        phase_t(2, 1).unwrap(),
        cnot(0, 1).unwrap(),
        phase_t(2, 1).unwrap(),
    ];
    let start = PureState::normalize(vec![c(1.0, 0.0); 4]).unwrap();
    let out = apply_circuit(&start, &gates).unwrap();
    let want = [c(0.5, 0.0), c(0.0, 0.5), c(0.0, 0.5), c(0.0, 0.5)];
    let d = 1.0 - overlap_sq(out.amplitudes(), &want);
    s.near("1 - |<target|out>|^2", d, 0.0, 1e-12);
    // Oracle: the same circuit from explicit matrices.
    let w = C64::from_polar(1.0, PI / 4.0);
    let tt: Vec<C64> = (0..4)
        .map(|k| w.powu((k >> 1) as u32 + (k & 1) as u32))
        .collect();
    let mut v: Vec<C64> = (0..4).map(|k| tt[k] * 0.5).collect();
    v.swap(2, 3);
    v[1] *= w;
    v[3] *= w;
    s.near(
        "oracle 1 - |<target|out>|^2",
        1.0 - overlap_sq(&v, &want),
        0.0,
        1e-12,
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(1));
    s.finish();
}

#[test]
fn criterion_10_single_qubit() {
    let mut s = Sheet::new(10);
    let t = Instant::now();
    let obj = Xi2Objective::one_qubit();
    let out = multistart_minimize(&obj, &SearchConfig::new(200, SEED)).unwrap();
    s.near("min Xi_2", out.global_min().unwrap(), 2.0 / 3.0, 1e-9);
    let fam = collect_minimizers(&out.records, 2.0 / 3.0, 1e-9).unwrap();
    s.equal("distinct minimizers", fam.size(), 8);
    let parts = partition_by_wh_orbit(&fam.states, &WhGroup::qubits(1).unwrap()).unwrap();
    let sics = parts
        .iter()
        .filter(|p| p.size() == 4 && certify_sic(&p.states).unwrap().pass)
        .count();
    s.equal("SICs of 4", (parts.len(), sics), (2, 2));
    let mut worst = 0.0f64;
    for p in &parts {
        for (i, a) in p.states.iter().enumerate() {
            for b in &p.states[i + 1..] {
                worst = worst.max((overlap_sq(a.amplitudes(), b.amplitudes()) - 1.0 / 3.0).abs());
            }
        }
    }
    s.check(
        "oracle SIC overlaps 1/3",
        worst < 1e-9,
        format!("{worst:e} < 1e-9"),
    );
    let theta = -2.0 * (1.0 / (2.0 + 3f64.sqrt()).sqrt()).atan();
    let psi = PureState::normalize(bloch_amplitudes(theta, 3.0 * PI / 4.0)).unwrap();
    let d = 1.0 - overlap_sq(psi.amplitudes(), sic1q_seed().amplitudes());
    s.near("analytic point vs first fiducial", d, 0.0, 1e-12);
    s.near(
        "oracle Xi_2 of first fiducial",
        oracle_xi_qubits(2.0, sic1q_seed().amplitudes()),
        2.0 / 3.0,
        1e-12,
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(10));
    s.finish();
}

#[test]
fn criterion_11_single_qudit() {
    let mut s = Sheet::new(11);
    let t = Instant::now();
    let obj = Xi2Objective::qudit(4).unwrap();
    let out = multistart_minimize(&obj, &SearchConfig::new(2000, SEED)).unwrap();
    s.near("min Xi_2", out.global_min().unwrap(), 0.4, 1e-9);
    s.near(
        "oracle Xi_2 at best",
        oracle_xi2_qudit4(out.best().unwrap().state.amplitudes()),
        0.4,
        1e-9,
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(60));
    s.finish();
}

#[test]
#[ignore = "extended scan, several minutes"]
fn criterion_11_extended_qudit_sics() {
    let mut s = Sheet::new(11);
    let orbits = qudit_minimizer_orbits(SEED, 100_000).unwrap();
    s.equal(
        "distinct minimizers",
        orbits.iter().map(|o| o.size()).sum::<usize>(),
        256,
    );
    s.equal("orbits", orbits.len(), 16);
    let sics = orbits
        .iter()
        .filter(|o| o.size() == 16 && certify_sic(&o.states).unwrap().pass)
        .count();
    s.equal("SICs of 16", sics, 16);
    let mut worst = 0.0f64;
    for o in &orbits {
        for (i, a) in o.states.iter().enumerate() {
            for b in &o.states[i + 1..] {
                worst = worst.max((overlap_sq(a.amplitudes(), b.amplitudes()) - 0.2).abs());
            }
        }
    }
    s.check(
        "oracle SIC overlaps 1/5",
        worst < 1e-9,
        format!("{worst:e} < 1e-9"),
    );
    s.finish();
}

#[test]
fn criterion_12_bound_ordering() {
    let mut s = Sheet::new(12);
    let t = Instant::now();
    for alpha in [1.5, 2.0, 3.0, 5.0] {
        let (m, sic) = (mub_bound(alpha, 4).unwrap(), sic_bound(alpha, 4).unwrap());
        s.check(
            &format!("mub < sic at alpha={alpha}"),
            m < sic,
            format!("{m:.17e} < {sic:.17e}"),
        );
        // Oracle: Xi of the magic state and of a d = 4 SIC overlap spectrum.
        let oracle_mub =
            oracle_xi_qubits(alpha, magic_seed().to_pure().amplitudes()).ln() / (1.0 - alpha);
        let oracle_sic = ((1.0 + 15.0 * 5f64.powf(-alpha)) / 4.0).ln() / (1.0 - alpha);
        s.near(
            &format!("oracle mub_bound alpha={alpha}"),
            m,
            oracle_mub,
            1e-12,
        );
        s.near(
            &format!("oracle sic_bound alpha={alpha}"),
            sic,
            oracle_sic,
            1e-12,
        );
    }
    s.near(
        "sic_bound(2, 4)",
        sic_bound(2.0, 4).unwrap(),
        2.5f64.ln(),
        4.0 * f64::EPSILON,
    );
    s.within("runtime", t.elapsed(), Duration::from_secs(1));
    s.finish();
}

#[test]
fn criterion_13_crossover() {
    let mut s = Sheet::new(13);
    let t = Instant::now();
    let low = crossover_difference(0.5).unwrap();
    let high = crossover_difference(2.0).unwrap();
    s.check("positive at alpha=1/2", low > 0.0, format!("{low:e}"));
    s.check("negative at alpha=2", high < 0.0, format!("{high:e}"));
    let roots = sign_changes(crossover_difference, 1.1, 2.0, 0.01).unwrap();
    s.check(
        "single sign change on [1.1, 2] inside [1.4, 1.9]",
        roots.len() == 1 && (1.4..=1.9).contains(&roots[0]),
        format!("{roots:?}"),
    );
    // Oracle: the same difference from brute-force Pauli sums.
    let r3 = 3f64.sqrt();
    let other =
        PureState::normalize(vec![c(0.0, 0.0), c(-1.0, r3), c(r3, -1.0), c(2.0, 0.0)]).unwrap();
    let m = |a: f64, v: &[C64]| oracle_xi_qubits(a, v).ln() / (1.0 - a);
    let diff = |a: f64| m(a, other.amplitudes()) - m(a, magic_seed().to_pure().amplitudes());
    if let Some(&r) = roots.first() {
        s.check(
            "oracle sign flip at root",
            diff(r - 1e-6) > 0.0 && diff(r + 1e-6) < 0.0,
            format!("root={r:.10}"),
        );
    }
    s.within("runtime", t.elapsed(), Duration::from_secs(5));
    s.finish();
}

#[test]
fn criterion_14_properties() {
    let mut s = Sheet::new(14);
    let g2 = WhGroup::qubits(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let states: Vec<PureState> = (0..100)
        .map(|_| PureState::haar_random(4, &mut rng))
        .collect();
    let purity = states
        .iter()
        .map(|p| (oracle_xi_qubits(1.0, p.amplitudes()) - 1.0).abs())
        .fold(0.0, f64::max);
    s.near("purity sum rule (oracle)", purity, 0.0, 1e-10);
    let lib_purity = states
        .iter()
        .map(|p| (magic::xi(1.0, p, &g2).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    s.near("purity sum rule", lib_purity, 0.0, 1e-10);
    let gens = clifford_generators(2).unwrap();
    let mut clifford = 0.0f64;
    for p in states.iter().take(50) {
        let x = magic::xi(2.0, p, &g2).unwrap();
        for g in &gens {
            let y = magic::xi(
                2.0,
                &apply_circuit(p, std::slice::from_ref(g)).unwrap(),
                &g2,
            )
            .unwrap();
            clifford = clifford.max((x - y).abs());
        }
    }
    s.near("Clifford invariance of Xi_2", clifford, 0.0, 1e-11);
    let mut conc = 0.0f64;
    for p in &states {
        let c0 = oracle_concurrence(p.amplitudes());
        for op in g2.operators() {
            conc = conc.max((oracle_concurrence(op.apply(p).unwrap().amplitudes()) - c0).abs());
        }
    }
    s.near("WH invariance of concurrence", conc, 0.0, 1e-12);
    let mut closed = 0.0f64;
    for _ in 0..1000 {
        let p: [f64; 6] = std::array::from_fn(|_| rand::Rng::random_range(&mut rng, 0.0..PI));
        let psi = PureState::normalize(hypersphere_amplitudes(&p)).unwrap();
        closed = closed.max((xi2_closed_2q(&p) - oracle_xi_qubits(2.0, psi.amplitudes())).abs());
        let (th, ph) = (p[0], 2.0 * p[1]);
        let q = PureState::normalize(bloch_amplitudes(th, ph)).unwrap();
        closed = closed.max((xi2_closed_1q(th, ph) - oracle_xi_qubits(2.0, q.amplitudes())).abs());
    }
    s.near("closed form vs direct sum", closed, 0.0, 1e-11);
    let mut key_mismatch = 0;
    for p in &states {
        let k = p.canonical_key();
        for _ in 0..10 {
            let phi = rand::Rng::random_range(&mut rng, 0.0..2.0 * PI);
            key_mismatch += usize::from(p.with_phase(phi).canonical_key() != k);
        }
    }
    s.equal("canonical key phase mismatches", key_mismatch, 0);
    s.finish();
}
