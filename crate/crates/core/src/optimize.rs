//! Multistart minimization of `Xi_2` over pure states.
//!
//! States are parameterized by Bloch angles (one qubit) or by three polar
//! and three azimuthal angles (dimension four, with the phase of the last
//! amplitude fixed to zero). Each start runs a Nelder-Mead descent in that
//! box, then is polished by Newton iterations in a local chart of projective
//! space: `t -> normalize(psi0 + sum_k t_k u_k)` with `u_k` a real basis of
//! the complement of `span_C(psi0)`. The chart is regular everywhere, so
//! minimizers with vanishing amplitudes (where the angle parameterization
//! degenerates) are certified as well as interior ones.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactState;
use crate::magic::{self, gradient_xi2, xi2_closed_2q};
use crate::numdiff;
use crate::orbit::{OrbitFamily, Provenance};
use crate::states::{CanonicalKey, PureState, C64};
use crate::wh_group::WhGroup;

/// Gradient norm required of an accepted minimizer.
pub const ACCEPT_GRADIENT: f64 = 1e-8;
/// Smallest Hessian eigenvalue required of an accepted minimizer.
pub const ACCEPT_MIN_EIGEN: f64 = 1e-6;
/// Phase distance under which two minimizers are the same state.
pub const MINIMIZER_DEDUP_TOL: f64 = 1e-7;
/// Phase distance within which a minimizer is snapped to an exact state.
pub const SNAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    /// One polar angle in `[0, pi]` (one qubit) or three in `[0, pi/2]`.
    pub thetas: Vec<f64>,
    /// Azimuthal angles in `[0, 2 pi)`, as many as `thetas`.
    pub phis: Vec<f64>,
}

impl ParamPoint {
    pub fn one_qubit(theta: f64, phi: f64) -> Self {
        Self {
            thetas: vec![theta],
            phis: vec![phi],
        }
    }

    /// `[theta1, theta2, theta3, phi1, phi2, phi3]`.
    pub fn two_qubit(p: [f64; 6]) -> Self {
        Self {
            thetas: p[..3].to_vec(),
            phis: p[3..].to_vec(),
        }
    }

    /// State dimension this point parameterizes.
    pub fn dim(&self) -> usize {
        if self.thetas.len() == 1 {
            2
        } else {
            4
        }
    }

    pub fn n_params(&self) -> usize {
        self.thetas.len() + self.phis.len()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.thetas.iter().chain(&self.phis).copied().collect()
    }

    /// Interprets a flat parameter vector, reflecting thetas and wrapping phis
    /// back into range.
    pub fn from_raw(x: &[f64]) -> Self {
        let half = x.len() / 2;
        let theta_period = if half == 1 { TAU } else { PI };
        let reflect = |t: f64| {
            let r = t.rem_euclid(theta_period);
            if r > theta_period / 2.0 {
                theta_period - r
            } else {
                r
            }
        };
        let wrap = |p: f64| {
            let r = p.rem_euclid(TAU);
            if r >= TAU {
                0.0
            } else {
                r
            }
        };
        Self {
            thetas: x[..half].iter().map(|&t| reflect(t)).collect(),
            phis: x[half..].iter().map(|&p| wrap(p)).collect(),
        }
    }

    pub fn as_array6(&self) -> Option<[f64; 6]> {
        (self.n_params() == 6).then(|| {
            let v = self.to_vec();
            [v[0], v[1], v[2], v[3], v[4], v[5]]
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.thetas.len(), 1 | 3) || self.thetas.len() != self.phis.len() {
            return Err(Error::Format(format!(
                "parameter point needs 1+1 or 3+3 angles, got {}+{}",
                self.thetas.len(),
                self.phis.len()
            )));
        }
        let theta_max = if self.thetas.len() == 1 {
            PI
        } else {
            FRAC_PI_2
        };
        const SLACK: f64 = 1e-12;
        for &t in &self.thetas {
            if !(-SLACK..=theta_max + SLACK).contains(&t) {
                return Err(Error::OutOfRange {
                    name: "theta",
                    value: t,
                });
            }
        }
        for &p in &self.phis {
            if !(-SLACK..TAU).contains(&p) {
                return Err(Error::OutOfRange {
                    name: "phi",
                    value: p,
                });
            }
        }
        Ok(())
    }
}

/// `(cos(theta/2), sin(theta/2) e^{i phi})` for any real angles.
pub fn bloch_amplitudes(theta: f64, phi: f64) -> Vec<C64> {
    vec![
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Four amplitudes `sin t1 sin t2 e^{i p1}, sin t1 cos t2 e^{i p2},
/// cos t1 sin t3 e^{i p3}, cos t1 cos t3` for any real angles.
pub fn hypersphere_amplitudes(p: &[f64; 6]) -> Vec<C64> {
    let [t1, t2, t3, p1, p2, p3] = *p;
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let (s3, c3) = t3.sin_cos();
    vec![
        C64::from_polar(s1 * s2, p1),
        C64::from_polar(s1 * c2, p2),
        C64::from_polar(c1 * s3, p3),
        C64::new(c1 * c3, 0.0),
    ]
}

fn raw_amplitudes(x: &[f64]) -> Vec<C64> {
    match x.len() {
        2 => bloch_amplitudes(x[0], x[1]),
        _ => hypersphere_amplitudes(&[x[0], x[1], x[2], x[3], x[4], x[5]]),
    }
}

pub fn param_to_state(p: &ParamPoint) -> Result<PureState> {
    p.validate()?;
    PureState::normalize(raw_amplitudes(&p.to_vec()))
}

/// Inverse of [`param_to_state`] up to global phase.
pub fn state_to_param(psi: &PureState) -> Result<ParamPoint> {
    let a = psi.amplitudes();
    let wrap = |x: f64| {
        let r = x.rem_euclid(TAU);
        if r >= TAU {
            0.0
        } else {
            r
        }
    };
    match a.len() {
        2 => {
            let theta = 2.0 * a[1].norm().atan2(a[0].norm());
            let phi = if a[0].norm() > 0.0 && a[1].norm() > 0.0 {
                wrap(a[1].arg() - a[0].arg())
            } else {
                0.0
            };
            Ok(ParamPoint::one_qubit(theta, phi))
        }
        4 => {
            let r = |k: usize| a[k].norm();
            let ref_phase = if r(3) > 0.0 { a[3].arg() } else { 0.0 };
            let t1 = (r(0).hypot(r(1))).atan2(r(2).hypot(r(3)));
            let t2 = r(0).atan2(r(1));
            let t3 = r(2).atan2(r(3));
            let ph = |k: usize| {
                if r(k) > 0.0 {
                    wrap(a[k].arg() - ref_phase)
                } else {
                    0.0
                }
            };
            Ok(ParamPoint::two_qubit([t1, t2, t3, ph(0), ph(1), ph(2)]))
        }
        d => Err(Error::DimMismatch {
            expected: 4,
            found: d,
        }),
    }
}

/// A smooth function of a pure state to be minimized.
pub trait StateObjective: Sync {
    fn dim(&self) -> usize;
    /// Value at the normalized amplitudes.
    fn value(&self, amps: &[C64]) -> f64;
}

/// `Xi_2` with respect to a fixed WH group.
#[derive(Debug, Clone)]
pub struct Xi2Objective {
    group: WhGroup,
}

impl Xi2Objective {
    pub fn new(group: WhGroup) -> Self {
        Self { group }
    }

    pub fn one_qubit() -> Self {
        Self::new(WhGroup::qubits(1).expect("valid dims"))
    }

    pub fn two_qubit() -> Self {
        Self::new(WhGroup::qubits(2).expect("valid dims"))
    }

    pub fn qudit(d: usize) -> Result<Self> {
        Ok(Self::new(WhGroup::qudit(d)?))
    }

    pub fn group(&self) -> &WhGroup {
        &self.group
    }
}

impl StateObjective for Xi2Objective {
    fn dim(&self) -> usize {
        self.group.total_dim()
    }

    fn value(&self, amps: &[C64]) -> f64 {
        magic::xi2_raw(amps, &self.group)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartMode {
    /// Uniform in the angle box.
    Uniform,
    /// Haar-random state, converted to angles.
    Haar,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub ftol: f64,
    pub xtol: f64,
    pub max_evals: usize,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            ftol: 1e-13,
            xtol: 1e-9,
            max_evals: 20_000,
            initial_step: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub n_starts: usize,
    pub seed: u64,
    pub start: StartMode,
    pub nelder_mead: NelderMeadOptions,
    pub newton_iters: usize,
}

impl SearchConfig {
    pub fn new(n_starts: usize, seed: u64) -> Self {
        Self {
            n_starts,
            seed,
            start: StartMode::Uniform,
            nelder_mead: NelderMeadOptions::default(),
            newton_iters: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizerRecord {
    pub start_index: usize,
    pub point: ParamPoint,
    #[serde(serialize_with = "crate::io::serialize_state")]
    pub state: PureState,
    pub xi_value: f64,
    pub gradient_norm: f64,
    pub hessian_min_eigen: f64,
    #[serde(skip)]
    pub basin: CanonicalKey,
}

impl MinimizerRecord {
    pub fn accepted(&self) -> bool {
        self.gradient_norm < ACCEPT_GRADIENT && self.hessian_min_eigen > ACCEPT_MIN_EIGEN
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Accepted minimizers in start order.
    pub records: Vec<MinimizerRecord>,
    /// Starts whose end point failed the minimizer certificate.
    pub non_converged: usize,
}

impl SearchOutcome {
    pub fn global_min(&self) -> Option<f64> {
        self.records
            .iter()
            .map(|r| r.xi_value)
            .min_by(|a, b| a.total_cmp(b))
    }

    pub fn best(&self) -> Option<&MinimizerRecord> {
        self.records
            .iter()
            .min_by(|a, b| a.xi_value.total_cmp(&b.xi_value))
    }
}

struct NmResult {
    x: Vec<f64>,
}

/// Nelder-Mead with standard coefficients. Stops when either the spread of
/// simplex values drops below `ftol` or its extent below `xtol`.
fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> NmResult {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;
    let mut order: Vec<usize> = (0..=n).collect();
    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];
        let spread = values[worst] - values[best];
        let extent = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.ftol || extent <= opts.xtol || evals >= opts.max_evals {
            return NmResult {
                x: simplex[best].clone(),
            };
        }
        let mut centroid = vec![0.0; n];
        for &k in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[k]) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < values[best] {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
        } else if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
        } else {
            let (xc, fc) = if fr < values[worst] {
                let xc = along(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            evals += 1;
            if fc < values[worst].min(fr) {
                simplex[worst] = xc;
                values[worst] = fc;
            } else {
                let xb = simplex[best].clone();
                for &k in &order[1..] {
                    for (x, b) in simplex[k].iter_mut().zip(&xb) {
                        *x = b + 0.5 * (*x - b);
                    }
                    values[k] = f(&simplex[k]);
                    evals += 1;
                }
            }
        }
    }
}

/// Local chart of projective space centred at a state.
struct Chart {
    center: Vec<C64>,
    directions: Vec<Vec<C64>>,
}

impl Chart {
    fn new(center: &PureState) -> Self {
        let psi = center.amplitudes().to_vec();
        let d = psi.len();
        let mut basis: Vec<Vec<C64>> = Vec::new();
        for k in 0..d {
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[k] = C64::new(1.0, 0.0);
            let ov: C64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, p) in v.iter_mut().zip(&psi) {
                *x -= ov * p;
            }
            for b in &basis {
                let ov: C64 = b.iter().zip(&v).map(|(a, c)| a.conj() * c).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= ov * y;
                }
            }
            let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if n > 1e-6 {
                basis.push(v.into_iter().map(|c| c / n).collect());
            }
            if basis.len() == d - 1 {
                break;
            }
        }
        let i = C64::new(0.0, 1.0);
        let directions = basis
            .iter()
            .flat_map(|b| [b.clone(), b.iter().map(|c| c * i).collect()])
            .collect();
        Self {
            center: psi,
            directions,
        }
    }

    fn point(&self, t: &[f64]) -> Vec<C64> {
        let mut v = self.center.clone();
        for (tk, u) in t.iter().zip(&self.directions) {
            for (x, y) in v.iter_mut().zip(u) {
                *x += y * *tk;
            }
        }
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|c| c / n).collect()
    }

    fn dims(&self) -> usize {
        self.directions.len()
    }
}

struct LocalCertificate {
    gradient_norm: f64,
    min_eigen: f64,
}

fn certify_in_chart<O: StateObjective + ?Sized>(obj: &O, psi: &PureState) -> LocalCertificate {
    let chart = Chart::new(psi);
    let f = |t: &[f64]| obj.value(&chart.point(t));
    let zero = vec![0.0; chart.dims()];
    let g = numdiff::central_gradient(f, &zero, numdiff::GRADIENT_STEP);
    let ev = numdiff::sorted_eigenvalues(&numdiff::hessian(f, &zero, numdiff::HESSIAN_STEP));
    LocalCertificate {
        gradient_norm: numdiff::norm(&g),
        min_eigen: ev.first().copied().unwrap_or(f64::NAN),
    }
}

/// Newton iterations in the projective chart, re-centred after every step.
/// Negative curvature is flipped so each step is a descent direction.
fn newton_polish<O: StateObjective + ?Sized>(obj: &O, start: PureState, iters: usize) -> PureState {
    let mut psi = start;
    for _ in 0..iters {
        let chart = Chart::new(&psi);
        let f = |t: &[f64]| obj.value(&chart.point(t));
        let zero = vec![0.0; chart.dims()];
        let g = numdiff::central_gradient(f, &zero, numdiff::GRADIENT_STEP);
        if numdiff::norm(&g) < 1e-11 {
            break;
        }
        let h = numdiff::hessian(f, &zero, numdiff::HESSIAN_STEP);
        let eig = SymmetricEigen::new(h);
        let gv = DVector::from_vec(g.clone());
        let mut step = DVector::zeros(chart.dims());
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let q = eig.eigenvectors.column(k);
            let coef = q.dot(&gv) / lambda.abs().max(1e-3);
            step -= q * coef;
        }
        let max_step = 0.3;
        if step.norm() > max_step {
            step *= max_step / step.norm();
        }
        let f0 = obj.value(psi.amplitudes());
        let mut accepted = None;
        let mut scale = 1.0;
        for _ in 0..30 {
            let t: Vec<f64> = step.iter().map(|s| s * scale).collect();
            let cand = chart.point(&t);
            if obj.value(&cand) <= f0 + 1e-15 {
                accepted = Some((cand, scale * step.norm()));
                break;
            }
            scale *= 0.5;
        }
        match accepted {
            Some((cand, len)) => {
                psi = PureState::normalize(cand).expect("chart points are unit norm");
                if len < 1e-13 {
                    break;
                }
            }
            None => break,
        }
    }
    psi
}

fn start_point(dim: usize, mode: StartMode, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match mode {
        StartMode::Uniform if dim == 2 => {
            vec![rng.random_range(0.0..PI), rng.random_range(0.0..TAU)]
        }
        StartMode::Uniform => {
            let mut v: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..FRAC_PI_2)).collect();
            v.extend((0..3).map(|_| rng.random_range(0.0..TAU)));
            v
        }
        StartMode::Haar => {
            let psi = PureState::haar_random(dim, rng);
            state_to_param(&psi).expect("dim is 2 or 4").to_vec()
        }
    }
}

/// Deterministic per-start generator: stream `index` of the seeded ChaCha.
pub fn start_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs one start to a certified end point.
pub fn minimize_from<O: StateObjective + ?Sized>(
    obj: &O,
    x0: &[f64],
    cfg: &SearchConfig,
    start_index: usize,
) -> MinimizerRecord {
    let f = |x: &[f64]| {
        let p = ParamPoint::from_raw(x);
        obj.value(&raw_amplitudes(&p.to_vec()))
    };
    let nm = nelder_mead(f, x0, &cfg.nelder_mead);
    let p = ParamPoint::from_raw(&nm.x);
    let coarse = PureState::normalize(raw_amplitudes(&p.to_vec()))
        .expect("parameterized states are unit norm");
    let psi = newton_polish(obj, coarse, cfg.newton_iters);
    record_for(obj, psi, start_index)
}

fn record_for<O: StateObjective + ?Sized>(
    obj: &O,
    psi: PureState,
    start_index: usize,
) -> MinimizerRecord {
    let cert = certify_in_chart(obj, &psi);
    MinimizerRecord {
        start_index,
        point: state_to_param(&psi).expect("dim checked by caller"),
        xi_value: obj.value(psi.amplitudes()),
        gradient_norm: cert.gradient_norm,
        hessian_min_eigen: cert.min_eigen,
        basin: psi.canonical_key(),
        state: psi,
    }
}

/// Seeded multistart search. Starts run in parallel; each draws from its own
/// stream so results do not depend on scheduling.
pub fn multistart_minimize<O: StateObjective>(
    obj: &O,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    if cfg.n_starts == 0 {
        return Err(Error::Format("need at least one start".into()));
    }
    let dim = obj.dim();
    if !matches!(dim, 2 | 4) {
        return Err(Error::DimMismatch {
            expected: 4,
            found: dim,
        });
    }
    let all: Vec<MinimizerRecord> = (0..cfg.n_starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = start_rng(cfg.seed, i);
            let x0 = start_point(dim, cfg.start, &mut rng);
            minimize_from(obj, &x0, cfg, i)
        })
        .collect();
    let total = all.len();
    let records: Vec<MinimizerRecord> = all.into_iter().filter(MinimizerRecord::accepted).collect();
    Ok(SearchOutcome {
        non_converged: total - records.len(),
        records,
    })
}

/// Distinct accepted minimizers with `|xi - target| <= tol`, in order of
/// first appearance.
pub fn collect_minimizers(
    records: &[MinimizerRecord],
    target: f64,
    tol: f64,
) -> Result<OrbitFamily> {
    let mut states: Vec<PureState> = Vec::new();
    let mut provenance = Vec::new();
    for (i, r) in records.iter().enumerate() {
        if !r.accepted() || (r.xi_value - target).abs() > tol {
            continue;
        }
        let dup = states.iter().any(|s| {
            s.phase_distance(&r.state)
                .map(|d| d <= MINIMIZER_DEDUP_TOL)
                .unwrap_or(false)
        });
        if !dup {
            states.push(r.state.clone());
            provenance.push(Provenance::Input { index: i });
        }
    }
    let seed = states
        .first()
        .cloned()
        .ok_or_else(|| Error::Certification(format!("no minimizer within {tol:e} of {target}")))?;
    Ok(OrbitFamily {
        seed,
        states,
        exact: None,
        provenance,
        generators: vec!["multistart".into()],
    })
}

/// Nearest exact state within `tol` in phase distance.
pub fn snap_state<'a>(
    psi: &PureState,
    candidates: &'a [ExactState],
    tol: f64,
) -> Option<&'a ExactState> {
    candidates
        .iter()
        .map(|c| (c, c.to_pure().phase_distance(psi).unwrap_or(f64::INFINITY)))
        .filter(|(_, d)| *d <= tol)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, _)| c)
}

/// Snaps every member of `family` to `candidates`; members without a match
/// within [`SNAP_TOL`] are returned in the second list (flagged).
pub fn snap_family(
    family: &OrbitFamily,
    candidates: &[ExactState],
) -> (Vec<Option<ExactState>>, Vec<usize>) {
    let pure: Vec<PureState> = candidates.iter().map(ExactState::to_pure).collect();
    let mut snapped = Vec::with_capacity(family.size());
    let mut unmatched = Vec::new();
    for (i, s) in family.states.iter().enumerate() {
        let hit = pure
            .iter()
            .enumerate()
            .map(|(k, p)| (k, p.phase_distance(s).unwrap_or(f64::INFINITY)))
            .filter(|(_, d)| *d <= SNAP_TOL)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match hit {
            Some((k, _)) => snapped.push(Some(candidates[k].clone())),
            None => {
                snapped.push(None);
                unmatched.push(i);
            }
        }
    }
    (snapped, unmatched)
}

/// Certificate for a two-qubit parameter point against the closed form of
/// `Xi_2`: accepted iff the gradient norm is below 1e-8 and the Hessian's
/// smallest eigenvalue exceeds 1e-6.
pub fn certify_isolated_minimum(p: &ParamPoint) -> Result<MinimizerRecord> {
    let arr = p
        .as_array6()
        .ok_or_else(|| Error::Format("two-qubit certificate needs six angles".into()))?;
    let state = PureState::normalize(hypersphere_amplitudes(&arr))?;
    let gradient_norm = numdiff::norm(&gradient_xi2(&arr));
    let mut record = MinimizerRecord {
        start_index: 0,
        point: p.clone(),
        xi_value: xi2_closed_2q(&arr),
        gradient_norm,
        hessian_min_eigen: f64::NAN,
        basin: state.canonical_key(),
        state,
    };
    if gradient_norm >= ACCEPT_GRADIENT {
        return Err(Error::NotAMinimum(Box::new(record)));
    }
    let cert = magic::hessian_positive_definite(&arr)?;
    record.hessian_min_eigen = cert.min_eigenvalue();
    if record.accepted() {
        Ok(record)
    } else {
        Err(Error::NotAMinimum(Box::new(record)))
    }
}

/// Full Hessian matrix of an objective in the projective chart at `psi`.
pub fn chart_hessian<O: StateObjective + ?Sized>(obj: &O, psi: &PureState) -> DMatrix<f64> {
    let chart = Chart::new(psi);
    let f = |t: &[f64]| obj.value(&chart.point(t));
    numdiff::hessian(f, &vec![0.0; chart.dims()], numdiff::HESSIAN_STEP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn st(pairs: &[(f64, f64)]) -> PureState {
        PureState::from_pairs(pairs).unwrap()
    }

    #[test]
    fn param_examples() {
        let s = param_to_state(&ParamPoint::two_qubit([
            FRAC_PI_4, FRAC_PI_4, FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2,
        ]))
        .unwrap();
        let want = st(&[(0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (1.0, 0.0)]);
        for (a, b) in s.amplitudes().iter().zip(want.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let s = param_to_state(&ParamPoint::two_qubit([0.0, 0.4, 0.0, 1.0, 2.0, 3.0])).unwrap();
        assert!(s.phase_distance(&PureState::basis(4, 3)).unwrap() < 1e-15);
        let s =
            param_to_state(&ParamPoint::two_qubit([FRAC_PI_2, 0.0, 0.3, 0.0, 0.0, 1.0])).unwrap();
        assert!(s.phase_distance(&PureState::basis(4, 1)).unwrap() < 1e-15);
        assert!(matches!(
            param_to_state(&ParamPoint::two_qubit([2.0, 0.0, 0.0, 0.0, 0.0, 0.0])),
            Err(Error::OutOfRange { name: "theta", .. })
        ));
        assert!(matches!(
            param_to_state(&ParamPoint::one_qubit(0.5, 7.0)),
            Err(Error::OutOfRange { name: "phi", .. })
        ));
    }

    #[test]
    fn state_param_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in [2, 4] {
            for _ in 0..200 {
                let psi = PureState::haar_random(dim, &mut rng);
                let p = state_to_param(&psi).unwrap();
                p.validate().unwrap();
                let back = param_to_state(&p).unwrap();
                assert!(back.phase_distance(&psi).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn wrapping_lands_in_box() {
        let p = ParamPoint::from_raw(&[-0.3, 2.0, 4.0, -1.0, 7.0, 13.0]);
        p.validate().unwrap();
        assert!((p.thetas[0] - 0.3).abs() < 1e-15);
        assert!((p.thetas[1] - (PI - 2.0)).abs() < 1e-15);
        let q = ParamPoint::from_raw(&[-0.5, -1.0]);
        q.validate().unwrap();
        assert!((q.thetas[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_start_reaches_a_minimum() {
        let obj = Xi2Objective::two_qubit();
        let cfg = SearchConfig::new(1, 0);
        let r = minimize_from(&obj, &[0.7, 0.8, 0.6, 1.4, 1.7, 1.5], &cfg, 0);
        assert!(r.accepted(), "{r:?}");
        assert!((r.xi_value - 7.0 / 16.0).abs() < 1e-10);
    }

    #[test]
    fn boundary_minimizer_is_certified() {
        // (0, i, -i, 1+i)/2 has a vanishing amplitude; the angle chart is singular there.
        let obj = Xi2Objective::two_qubit();
        let psi = st(&[(0.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0)]);
        let r = record_for(&obj, psi, 0);
        assert!(r.accepted(), "{r:?}");
    }

    #[test]
    fn reproducible_search() {
        let obj = Xi2Objective::two_qubit();
        let cfg = SearchConfig::new(40, 42);
        let a = multistart_minimize(&obj, &cfg).unwrap();
        let b = multistart_minimize(&obj, &cfg).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.non_converged, b.non_converged);
        let (min, max) = a.records.iter().fold((f64::MAX, 0.0f64), |(lo, hi), r| {
            (lo.min(r.xi_value), hi.max(r.xi_value))
        });
        assert!((min - 7.0 / 16.0).abs() < 1e-9, "{min} {max}");
    }

    #[test]
    fn one_qubit_search_finds_eight() {
        let obj = Xi2Objective::one_qubit();
        let out = multistart_minimize(&obj, &SearchConfig::new(200, 42)).unwrap();
        assert!((out.global_min().unwrap() - 2.0 / 3.0).abs() < 1e-9);
        let fam = collect_minimizers(&out.records, 2.0 / 3.0, 1e-9).unwrap();
        assert_eq!(fam.size(), 8);
    }

    #[test]
    fn haar_start_mode_runs() {
        let obj = Xi2Objective::two_qubit();
        let mut cfg = SearchConfig::new(20, 5);
        cfg.start = StartMode::Haar;
        let out = multistart_minimize(&obj, &cfg).unwrap();
        assert!(!out.records.is_empty());
    }

    #[test]
    fn certify_examples() {
        let min_point = ParamPoint::two_qubit([
            FRAC_PI_4, FRAC_PI_4, FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2,
        ]);
        let r = certify_isolated_minimum(&min_point).unwrap();
        assert!(r.hessian_min_eigen > 0.0);
        let stab = ParamPoint::two_qubit([FRAC_PI_4, FRAC_PI_4, FRAC_PI_4, 0.0, 0.0, 0.0]);
        match certify_isolated_minimum(&stab) {
            Err(Error::NotAMinimum(rec)) => {
                assert!((rec.xi_value - 1.0).abs() < 1e-15);
                assert!(rec.hessian_min_eigen < 0.0);
            }
            other => panic!("{other:?}"),
        }
        let generic = ParamPoint::two_qubit([0.3, 0.7, 1.1, 0.2, 1.3, 2.4]);
        match certify_isolated_minimum(&generic) {
            Err(Error::NotAMinimum(rec)) => assert!(rec.gradient_norm > 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn snapping() {
        let exact = vec![
            ExactState::from_i64(&[(0, 1), (0, 1), (0, 1), (1, 0)], 2).unwrap(),
            ExactState::basis(4, 0),
        ];
        let noisy = PureState::normalize(vec![
            C64::new(1e-8, 1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 1.0),
            C64::new(1.0, 0.0),
        ])
        .unwrap()
        .with_phase(0.4);
        assert_eq!(snap_state(&noisy, &exact, SNAP_TOL), Some(&exact[0]));
        let far = st(&[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert_eq!(snap_state(&far, &exact, SNAP_TOL), None);
    }
}
