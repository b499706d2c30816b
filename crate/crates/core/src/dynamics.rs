//! Density-matrix simulations: degenerate-block rotations, the
//! Jaynes–Cummings preconditioning protocol, two-level partial
//! thermalizations and the correlated-catalysis example.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::context::{Beta, GibbsContext, PopVector};
use crate::entangle::{f_raw, golden_max, thermally_entanglable};
use crate::error::{Error, Result};

pub const TAU_HERM: f64 = 1e-12;
pub const TAU_TRACE: f64 = 1e-10;
pub const TAU_PSD: f64 = 1e-10;

/// Largest allowed thermal-mode mass beyond the Fock cutoff.
pub const MAX_TAIL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        let rho = DensityMatrix { m };
        rho.check()?;
        Ok(rho)
    }

    pub fn from_populations(q: &PopVector) -> Self {
        let d = q.dim();
        let m = DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(q[i], 0.0) } else { Complex64::new(0.0, 0.0) });
        DensityMatrix { m }
    }

    fn check(&self) -> Result<()> {
        let m = &self.m;
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidDensityMatrix("matrix is not square".into()));
        }
        let herm = (m - m.adjoint()).iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        if herm > TAU_HERM {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TAU_TRACE || tr.im.abs() > TAU_TRACE {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = self.eigenvalues()[0];
        if min < -TAU_PSD {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Re-checks the invariants; used after evolution steps.
    pub fn validate(&self) -> Result<()> {
        self.check()
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// Partial transpose on the second factor of a `da × db` split.
    pub fn partial_transpose(&self, da: usize, db: usize) -> Result<DMatrix<Complex64>> {
        if da * db != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: da * db });
        }
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for a in 0..da {
            for b in 0..db {
                for a2 in 0..da {
                    for b2 in 0..db {
                        out[(a * db + b2, a2 * db + b)] = self.m[(a * db + b, a2 * db + b2)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sum of the magnitudes of the negative partial-transpose eigenvalues
    /// for a two-qubit state.
    pub fn negativity(&self) -> Result<f64> {
        let pt = self.partial_transpose(2, 2)?;
        Ok(hermitian_eigenvalues(&pt).iter().filter(|&&x| x < 0.0).map(|x| -x).sum())
    }

    pub fn min_pt_eigenvalue(&self) -> Result<f64> {
        let pt = self.partial_transpose(2, 2)?;
        Ok(hermitian_eigenvalues(&pt)[0])
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Population vector rotated inside the degenerate {|01⟩, |10⟩} block by
/// the unitary with entries cos θ, sin θ e^{iφ}.
pub fn apply_subspace_rotation(q: &PopVector, theta: f64, phi: f64) -> Result<DensityMatrix> {
    if q.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: q.dim() });
    }
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    let off = Complex64::from_polar(0.5 * (q[2] - q[1]) * (2.0 * theta).sin(), phi);
    let mut m = DensityMatrix::from_populations(q).m;
    m[(1, 1)] = Complex64::new(q[1] * c2 + q[2] * s2, 0.0);
    m[(2, 2)] = Complex64::new(q[1] * s2 + q[2] * c2, 0.0);
    m[(1, 2)] = off;
    m[(2, 1)] = off.conj();
    Ok(DensityMatrix { m })
}

// ---------------------------------------------------------------------------
// Jaynes–Cummings protocol

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InitialState {
    #[serde(rename = "00")]
    Ground,
    #[serde(rename = "11")]
    Excited,
}

impl FromStr for InitialState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "00" | "ground" => Ok(InitialState::Ground),
            "11" | "excited" => Ok(InitialState::Excited),
            _ => Err(Error::InvalidConfig(format!("initial state must be 00 or 11, got '{s}'"))),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialState::Ground => "00",
            InitialState::Excited => "11",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JcConfig {
    pub initial: InitialState,
    /// Product of inverse temperature and gap.
    pub beta_e: f64,
    /// Highest Fock level kept.
    pub n_max: usize,
    /// Coupling rate; sets the time unit.
    pub coupling: f64,
    /// Points of the time scan on [0, 20π/g].
    pub time_grid: usize,
}

impl JcConfig {
    /// Configuration with g = 1, a 2048-point scan and the smallest
    /// admissible cutoff.
    pub fn new(initial: InitialState, beta_e: f64) -> Self {
        let n_max = if beta_e > 0.0 && beta_e.is_finite() { suggested_n_max(beta_e) } else { 0 };
        JcConfig { initial, beta_e, n_max, coupling: 1.0, time_grid: 2048 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta_e > 0.0) || !self.beta_e.is_finite() {
            return Err(Error::InvalidConfig(format!("beta_E must be positive and finite, got {}", self.beta_e)));
        }
        if !(self.coupling > 0.0) || !self.coupling.is_finite() {
            return Err(Error::InvalidConfig(format!("coupling must be positive, got {}", self.coupling)));
        }
        if self.time_grid < 3 {
            return Err(Error::InvalidConfig("time grid needs at least 3 points".into()));
        }
        let tail = thermal_tail(self.beta_e, self.n_max);
        if tail >= MAX_TAIL {
            return Err(Error::TruncationTail { tail, n_max: self.n_max, suggested: suggested_n_max(self.beta_e) });
        }
        Ok(())
    }

    pub fn t_max(&self) -> f64 {
        20.0 * PI / self.coupling
    }
}

/// Thermal-mode mass above `n_max`: e^{−βE(n_max+1)}.
pub fn thermal_tail(beta_e: f64, n_max: usize) -> f64 {
    (-beta_e * (n_max as f64 + 1.0)).exp()
}

/// Smallest cutoff whose tail mass is below [`MAX_TAIL`].
pub fn suggested_n_max(beta_e: f64) -> usize {
    let mut n = ((-MAX_TAIL.ln()) / beta_e).floor().max(1.0) as usize - 1;
    while thermal_tail(beta_e, n) >= MAX_TAIL {
        n += 1;
    }
    n
}

/// Truncated, renormalized thermal Fock distribution.
pub fn thermal_mode(beta_e: f64, n_max: usize) -> Vec<f64> {
    let x = (-beta_e).exp();
    let w: Vec<f64> = (0..=n_max).map(|n| x.powi(n as i32)).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|v| v / z).collect()
}

/// Population moved into the degenerate block at time `t`: the excitation
/// probability of qubit B (ground start) or its de-excitation probability
/// (excited start), from the exact 2×2 evolution in each excitation sector.
pub fn transferred_population(cfg: &JcConfig, mode: &[f64], t: f64) -> f64 {
    let g = cfg.coupling;
    match cfg.initial {
        InitialState::Ground => mode.iter().enumerate().map(|(n, p)| p * (g * (n as f64).sqrt() * t).sin().powi(2)).sum(),
        InitialState::Excited => mode
            .iter()
            .take(mode.len() - 1)
            .enumerate()
            .map(|(n, p)| p * (g * ((n + 1) as f64).sqrt() * t).sin().powi(2))
            .sum(),
    }
}

/// Two-qubit populations after the interaction, with transferred mass `p`.
pub fn jc_populations(initial: InitialState, p: f64) -> PopVector {
    match initial {
        InitialState::Ground => PopVector::from_computed(vec![1.0 - p, p, 0.0, 0.0]),
        InitialState::Excited => PopVector::from_computed(vec![0.0, 0.0, p, 1.0 - p]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JcResult {
    pub beta_e: f64,
    pub optimal_time: f64,
    /// Population left outside the degenerate block: |00⟩ for the ground
    /// start, |11⟩ for the excited start.
    pub ground_pop: f64,
    pub negativity: f64,
}

/// Optimizes the interaction time to maximize the transferred population,
/// then applies the Bell rotation and reports the negativity.
pub fn jc_protocol(cfg: &JcConfig) -> Result<JcResult> {
    cfg.validate()?;
    let mode = thermal_mode(cfg.beta_e, cfg.n_max);
    let p_of = |t: f64| transferred_population(cfg, &mode, t);
    let n = cfg.time_grid;
    let dt = cfg.t_max() / (n - 1) as f64;
    let vals: Vec<f64> = (0..n).into_par_iter().map(|k| p_of(k as f64 * dt)).collect();

    // Refine each of the largest local maxima of the scan.
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| (k == 0 || vals[k] >= vals[k - 1]) && (k == n - 1 || vals[k] >= vals[k + 1]))
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    peaks.truncate(16);
    let (mut best_t, mut best_p) = (0.0, vals[0]);
    for k in peaks {
        let lo = k.saturating_sub(1) as f64 * dt;
        let hi = ((k + 1).min(n - 1)) as f64 * dt;
        let t = golden_max(p_of, lo, hi, 1e-12 * cfg.t_max());
        for (tt, pp) in [(t, p_of(t)), (k as f64 * dt, vals[k])] {
            if pp > best_p || (pp == best_p && tt < best_t) {
                best_t = tt;
                best_p = pp;
            }
        }
    }
    let q = jc_populations(cfg.initial, best_p);
    let rho = apply_subspace_rotation(&q, FRAC_PI_4, 0.0)?;
    Ok(JcResult {
        beta_e: cfg.beta_e,
        optimal_time: best_t,
        ground_pop: 1.0 - best_p,
        negativity: rho.negativity()?,
    })
}

/// Index of |b⟩_B ⊗ |n⟩_R in the joint qubit–mode space.
pub fn jc_index(b: usize, n: usize, n_max: usize) -> usize {
    b * (n_max + 1) + n
}

/// σ⁺ ⊗ a + σ⁻ ⊗ a† on qubit B and the truncated mode.
pub fn jc_hamiltonian(n_max: usize) -> DMatrix<f64> {
    let d = 2 * (n_max + 1);
    let mut h = DMatrix::zeros(d, d);
    for n in 1..=n_max {
        let (i, j) = (jc_index(1, n - 1, n_max), jc_index(0, n, n_max));
        h[(i, j)] = (n as f64).sqrt();
        h[(j, i)] = (n as f64).sqrt();
    }
    h
}

/// Joint qubit–mode state at time `t`, evolved with the full unitary
/// e^{−iHt} from the real eigendecomposition of H.
pub fn jc_evolve(cfg: &JcConfig, t: f64) -> Result<DensityMatrix> {
    cfg.validate()?;
    let n_max = cfg.n_max;
    let d = 2 * (n_max + 1);
    let eig = (jc_hamiltonian(n_max) * cfg.coupling).symmetric_eigen();
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let phases = DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::from_polar(1.0, -eig.eigenvalues[i] * t) } else { Complex64::new(0.0, 0.0) });
    let u = &v * phases * v.adjoint();
    let b = match cfg.initial {
        InitialState::Ground => 0,
        InitialState::Excited => 1,
    };
    let mode = thermal_mode(cfg.beta_e, n_max);
    let mut rho0 = DMatrix::zeros(d, d);
    for (n, p) in mode.iter().enumerate() {
        let k = jc_index(b, n, n_max);
        rho0[(k, k)] = Complex64::new(*p, 0.0);
    }
    let rho = &u * rho0 * u.adjoint();
    // Symmetrize away rounding so the Hermiticity check is meaningful.
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(rho)
}

/// Population of |1⟩ on qubit B in a joint qubit–mode state.
pub fn qubit_excitation(rho: &DensityMatrix, n_max: usize) -> f64 {
    (0..=n_max).map(|n| rho.m[(jc_index(1, n, n_max), jc_index(1, n, n_max))].re).sum()
}

// ---------------------------------------------------------------------------
// Partial thermalizations

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalizationStep {
    pub pair: (usize, usize),
    /// Strength 1 − e^{−rt}.
    pub lambda: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ThermalizationSchedule {
    pub steps: Vec<ThermalizationStep>,
}

/// Relative Gibbs weights of the two levels, normalized within the pair.
/// Works at β = ∞, where the lower level takes everything.
fn pair_split(ctx: &GibbsContext, i: usize, j: usize) -> (f64, f64) {
    let e = ctx.energies();
    let m = e[i].min(e[j]);
    let w = |k: usize| -> f64 {
        let de = e[k] - m;
        match ctx.beta() {
            Beta::Finite(b) => (-b * de).exp(),
            Beta::Infinite => {
                if de <= ctx.tau_deg() {
                    1.0
                } else {
                    0.0
                }
            }
        }
    };
    let (wi, wj) = (w(i), w(j));
    (wi / (wi + wj), wj / (wi + wj))
}

fn check_step(ctx: &GibbsContext, d: usize, step: &ThermalizationStep) -> Result<()> {
    let (i, j) = step.pair;
    if i == j || i >= d || j >= d || d != ctx.dim() {
        return Err(Error::InvalidPair(i, j));
    }
    if !(0.0..=1.0).contains(&step.lambda) {
        return Err(Error::OutOfRange(step.lambda));
    }
    Ok(())
}

/// Moves the pair a fraction λ of the way towards the Gibbs-conditional
/// split of its total population.
pub fn partial_thermalize(p: &PopVector, ctx: &GibbsContext, step: ThermalizationStep) -> Result<PopVector> {
    check_step(ctx, p.dim(), &step)?;
    let (i, j) = step.pair;
    let (ai, aj) = pair_split(ctx, i, j);
    let mut q = p.as_slice().to_vec();
    let s = q[i] + q[j];
    let l = step.lambda;
    q[i] = (1.0 - l) * p[i] + l * ai * s;
    q[j] = (1.0 - l) * p[j] + l * aj * s;
    Ok(PopVector::from_computed(q))
}

/// Trajectory of the schedule, starting with `p` itself.
pub fn apply_schedule(p: &PopVector, ctx: &GibbsContext, s: &ThermalizationSchedule) -> Result<Vec<PopVector>> {
    let mut out = vec![p.clone()];
    for step in &s.steps {
        let next = partial_thermalize(out.last().expect("non-empty"), ctx, *step)?;
        out.push(next);
    }
    Ok(out)
}

/// Strength reached after time `t` at unit total rate.
pub fn lambda_for_time(t: f64) -> f64 {
    -(-t).exp_m1()
}

/// Integrates the detailed-balanced two-level Lindblad dissipator for the
/// pair with RK4. Jump operators are √a |i⟩⟨j| and √b |j⟩⟨i| with a + b = 1
/// and a/b = γ_i/γ_j, so the populations relax at unit rate.
pub fn lindblad_pair_evolve(rho: &DensityMatrix, ctx: &GibbsContext, pair: (usize, usize), t: f64, steps: usize) -> Result<DensityMatrix> {
    let d = rho.dim();
    check_step(ctx, d, &ThermalizationStep { pair, lambda: 0.0 })?;
    if steps == 0 || !(t >= 0.0) {
        return Err(Error::InvalidConfig("integration needs t ≥ 0 and at least one step".into()));
    }
    let (i, j) = pair;
    let (a, b) = pair_split(ctx, i, j);
    let zero = Complex64::new(0.0, 0.0);
    let jump = |to: usize, from: usize, rate: f64| {
        let mut l = DMatrix::from_element(d, d, zero);
        l[(to, from)] = Complex64::new(rate.sqrt(), 0.0);
        l
    };
    let ops = [jump(i, j, a), jump(j, i, b)];
    let half = Complex64::new(0.5, 0.0);
    let gen = |r: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(d, d, zero);
        for l in &ops {
            let ld = l.adjoint();
            let ll = &ld * l;
            out += l * r * &ld - (&ll * r + r * &ll) * half;
        }
        out
    };
    let h = Complex64::new(t / steps as f64, 0.0);
    let mut r = rho.m.clone();
    for _ in 0..steps {
        let k1 = gen(&r);
        let k2 = gen(&(&r + &k1 * (h * half)));
        let k3 = gen(&(&r + &k2 * (h * half)));
        let k4 = gen(&(&r + &k3 * h));
        r += (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * (h / 6.0);
    }
    DensityMatrix::new(r)
}

// ---------------------------------------------------------------------------
// Markovian schedule search

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStrategy {
    Greedy,
    Beam,
}

impl FromStr for SearchStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(SearchStrategy::Greedy),
            "beam" => Ok(SearchStrategy::Beam),
            _ => Err(Error::InvalidConfig(format!("strategy must be greedy or beam, got '{s}'"))),
        }
    }
}

/// Strengths tried for every level pair.
pub const LAMBDA_GRID: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
pub const BEAM_WIDTH: usize = 8;
const IMPROVEMENT: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MtpResult {
    /// Smallest witness value along the best trajectory.
    pub best_f: f64,
    pub schedule: ThermalizationSchedule,
    pub trajectory: Vec<PopVector>,
    /// Candidate steps evaluated.
    pub evaluations: usize,
}

fn candidate_steps() -> Vec<ThermalizationStep> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for &lambda in &LAMBDA_GRID {
                out.push(ThermalizationStep { pair: (i, j), lambda });
            }
        }
    }
    out
}

#[derive(Clone)]
struct Node {
    state: PopVector,
    steps: Vec<ThermalizationStep>,
    f: f64,
}

/// Searches sequences of partial thermalizations for the most negative
/// witness. This explores a subset of Markovian thermal processes, so a
/// negative result certifies reachability while a non-negative one proves
/// nothing.
pub fn mtp_entangle_search(p: &PopVector, ctx: &GibbsContext, strategy: SearchStrategy, budget: usize) -> Result<MtpResult> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    ctx.two_qubit_gap().ok_or(Error::NotTwoQubit)?;
    ctx.check_dim(p)?;
    let cands = candidate_steps();
    let root = Node { state: p.clone(), steps: Vec::new(), f: f_raw(p.as_slice()) };
    let mut best = root.clone();
    let mut evals = 0usize;

    let expand = |node: &Node, evals: &mut usize| -> Vec<Node> {
        let mut kids = Vec::new();
        for step in &cands {
            if *evals >= budget {
                break;
            }
            *evals += 1;
            let state = partial_thermalize(&node.state, ctx, *step).expect("valid candidate step");
            let f = f_raw(state.as_slice());
            let mut steps = node.steps.clone();
            steps.push(*step);
            kids.push(Node { state, steps, f });
        }
        kids
    };

    match strategy {
        SearchStrategy::Greedy => {
            let mut cur = root;
            while evals < budget {
                let kids = expand(&cur, &mut evals);
                let Some(next) = kids.into_iter().min_by(|a, b| a.f.total_cmp(&b.f)) else { break };
                if next.f < cur.f - IMPROVEMENT {
                    cur = next;
                    best = cur.clone();
                } else {
                    break;
                }
            }
        }
        SearchStrategy::Beam => {
            let mut beam = vec![root];
            while evals < budget {
                let mut kids: Vec<Node> = Vec::new();
                for node in &beam {
                    kids.extend(expand(node, &mut evals));
                }
                if kids.is_empty() {
                    break;
                }
                kids.sort_by(|a, b| a.f.total_cmp(&b.f));
                let mut next: Vec<Node> = Vec::new();
                for k in kids {
                    if next.len() == BEAM_WIDTH {
                        break;
                    }
                    if next.iter().all(|n| n.state.max_abs_diff(&k.state) > 1e-12) {
                        next.push(k);
                    }
                }
                if next[0].f < best.f - IMPROVEMENT {
                    best = next[0].clone();
                }
                let stalled = next.len() == beam.len()
                    && next.iter().all(|n| beam.iter().any(|b| b.state.max_abs_diff(&n.state) <= 1e-12));
                if stalled {
                    break;
                }
                beam = next;
            }
        }
    }

    let schedule = ThermalizationSchedule { steps: best.steps };
    let trajectory = apply_schedule(p, ctx, &schedule)?;
    let best_f = trajectory.iter().map(|q| f_raw(q.as_slice())).fold(f64::INFINITY, f64::min);
    Ok(MtpResult { best_f, schedule, trajectory, evaluations: evals })
}

// ---------------------------------------------------------------------------
// Correlated catalysis

type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

/// Product basis of A, B, C sorted by energy, with labels read as ABC.
pub const CATALYSIS_BASIS: [&str; 8] = ["000", "100", "010", "001", "110", "101", "011", "111"];

/// The energy-preserving permutation: basis state `c` is sent to `r` for
/// each (r, c).
pub const CATALYSIS_PERMUTATION: [(usize, usize); 8] = [(0, 0), (1, 1), (3, 2), (2, 3), (6, 4), (4, 5), (5, 6), (7, 7)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalysisReport {
    /// Final system populations (|00⟩, |01⟩, |10⟩, |11⟩) as exact fractions.
    pub sigma_ab: Vec<String>,
    pub sigma_c: Vec<String>,
    pub system_matches: bool,
    pub catalyst_restored: bool,
    pub output_diagonal: bool,
    pub unitary_commutes: bool,
    pub initial_in_te: bool,
    pub final_in_te: bool,
    pub pass: bool,
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Checks the catalysis example in exact arithmetic. Returns an error
/// naming the first failed property.
pub fn verify_catalysis() -> Result<CatalysisReport> {
    let rho_ab = [q(2, 5), q(1, 4), q(33, 100), q(1, 50)];
    let omega = [q(73, 100), q(27, 100)];
    let expected_ab = [q(949, 2000), q(613, 5000), q(771, 2500), q(189, 2000)];
    let bit = |s: &str, k: usize| (s.as_bytes()[k] - b'0') as usize;
    let ab_index = |s: &str| 2 * bit(s, 0) + bit(s, 1);

    let zero = q(0, 1);
    let mut u = [[0i64; 8]; 8];
    for (r, c) in CATALYSIS_PERMUTATION {
        u[r][c] = 1;
    }
    let h: [i64; 8] = CATALYSIS_BASIS.map(|s| s.bytes().filter(|&b| b == b'1').count() as i64);

    // [H, U] = 0 with H diagonal: (H U − U H)_{rc} = (h_r − h_c) U_{rc}.
    let unitary_commutes = (0..8).all(|r| (0..8).all(|c| (h[r] - h[c]) * u[r][c] == 0));
    let is_perm = (0..8).all(|r| u[r].iter().sum::<i64>() == 1 && (0..8).map(|k| u[k][r]).sum::<i64>() == 1);

    let joint: Vec<Q> = CATALYSIS_BASIS.iter().map(|s| rho_ab[ab_index(s)] * omega[bit(s, 2)]).collect();
    // σ = U ρ Uᵀ with ρ diagonal.
    let mut sigma = [[zero; 8]; 8];
    for r in 0..8 {
        for c in 0..8 {
            sigma[r][c] = (0..8).map(|k| Q::from_integer(u[r][k] * u[c][k]) * joint[k]).sum();
        }
    }
    let output_diagonal = (0..8).all(|r| (0..8).all(|c| r == c || sigma[r][c] == zero));

    let mut sigma_ab = [zero; 4];
    let mut sigma_c = [zero; 2];
    for (k, s) in CATALYSIS_BASIS.iter().enumerate() {
        sigma_ab[ab_index(s)] += sigma[k][k];
        sigma_c[bit(s, 2)] += sigma[k][k];
    }
    let system_matches = sigma_ab == expected_ab;
    let catalyst_restored = sigma_c == omega;

    let ctx = GibbsContext::two_qubit(1.0, Beta::Finite(0.0))?;
    let initial = PopVector::new(rho_ab.map(to_f64).to_vec())?;
    let fin = PopVector::new(sigma_ab.map(to_f64).to_vec())?;
    let initial_in_te = thermally_entanglable(&initial, &ctx)?;
    let final_in_te = thermally_entanglable(&fin, &ctx)?;

    let checks = [
        (is_perm && unitary_commutes, "U does not commute with H"),
        (output_diagonal, "output is not diagonal"),
        (system_matches, "system populations differ from the expected final state"),
        (catalyst_restored, "catalyst is not restored"),
        (!initial_in_te, "initial state is thermally entanglable"),
        (final_in_te, "final state is not thermally entanglable"),
    ];
    if let Some((_, msg)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::CatalysisFailed((*msg).into()));
    }
    Ok(CatalysisReport {
        sigma_ab: sigma_ab.iter().map(|x| x.to_string()).collect(),
        sigma_c: sigma_c.iter().map(|x| x.to_string()).collect(),
        system_matches,
        catalyst_restored,
        output_diagonal,
        unitary_commutes,
        initial_in_te,
        final_in_te,
        pass: true,
    })
}
