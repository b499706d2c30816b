//! Two-qubit entanglement witnesses and thermal entanglability.
//!
//! Populations are ordered |00⟩, |01⟩, |10⟩, |11⟩. Rotations inside the
//! degenerate {|01⟩, |10⟩} block are free; the smallest partial-transpose
//! eigenvalue reachable that way is negative exactly when
//! f(q) = 4 q₁ q₄ − (q₂ − q₃)² is negative.
//!
//! Thermal entanglability reduces to the sign of f at a single extreme point
//! of the future cone, the one with β-ordering (2,1,3,4). The brute-force
//! check over every extreme point is kept alongside as an oracle.

use std::f64::consts::FRAC_PI_4;

use itertools::Itertools;
use serde::Serialize;

use crate::context::{Beta, BetaOrdering, GibbsContext, PopVector};
use crate::error::{Error, Result};
use crate::majorization::{curve_unchecked, extreme_from_curve, future_cone};

/// Strictness band around f = 0; the boundary counts as non-entanglable.
pub const TAU_F: f64 = 1e-12;

/// Relative bracket width at which critical-temperature bisection stops.
pub const ROOT_REL_TOL: f64 = 1e-12;

fn check_dim(q: &PopVector, d: usize) -> Result<()> {
    if q.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: q.dim() });
    }
    Ok(())
}

pub(crate) fn f_raw(q: &[f64]) -> f64 {
    let d23 = q[1] - q[2];
    4.0 * q[0] * q[3] - d23 * d23
}

/// f(q) = 4 q₁ q₄ − (q₂ − q₃)².
pub fn witness_f(q: &PopVector) -> Result<f64> {
    check_dim(q, 4)?;
    Ok(f_raw(q.as_slice()))
}

/// Smallest eigenvalue of the partial transpose after rotating the
/// degenerate block by `theta`.
pub fn min_ppt_eigenvalue(q: &PopVector, theta: f64) -> Result<f64> {
    check_dim(q, 4)?;
    let q = q.as_slice();
    let s = (2.0 * theta).sin();
    let d23 = q[1] - q[2];
    let d14 = q[0] - q[3];
    Ok(0.5 * ((q[0] + q[3]) - (d23 * d23 * s * s + d14 * d14).sqrt()))
}

pub fn is_subspace_entanglable(q: &PopVector) -> Result<bool> {
    Ok(witness_f(q)? < -TAU_F)
}

fn negativity_raw(q: &[f64]) -> f64 {
    let g = 0.5 * ((q[0] - q[3]).hypot(q[1] - q[2]) - (q[0] + q[3]));
    if f_raw(q) < 0.0 {
        g.max(0.0)
    } else {
        0.0
    }
}

/// Largest negativity reachable by a degenerate-block rotation.
pub fn max_negativity(q: &PopVector) -> Result<f64> {
    check_dim(q, 4)?;
    Ok(negativity_raw(q.as_slice()))
}

fn require_two_qubit(ctx: &GibbsContext) -> Result<f64> {
    ctx.two_qubit_gap().ok_or(Error::NotTwoQubit)
}

/// The extreme point of the future cone with ordering (2,1,3,4).
pub fn pi_star_point(p: &PopVector, ctx: &GibbsContext) -> Result<PopVector> {
    require_two_qubit(ctx)?;
    ctx_check(p, ctx)?;
    let lp = curve_unchecked(p.as_slice(), ctx.gamma());
    Ok(extreme_from_curve(&lp, ctx.gamma(), BetaOrdering::pi_star().as_slice()))
}

fn ctx_check(p: &PopVector, ctx: &GibbsContext) -> Result<()> {
    if p.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch { expected: ctx.dim(), got: p.dim() });
    }
    Ok(())
}

/// f at the (2,1,3,4) extreme point.
pub fn thermal_witness(p: &PopVector, ctx: &GibbsContext) -> Result<f64> {
    Ok(f_raw(pi_star_point(p, ctx)?.as_slice()))
}

/// Fast decision used by volume estimates and bisection.
pub fn thermally_entanglable(p: &PopVector, ctx: &GibbsContext) -> Result<bool> {
    Ok(thermal_witness(p, ctx)? < -TAU_F)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub f_value: f64,
    pub f_star: f64,
    #[serde(rename = "in_E")]
    pub in_e: bool,
    #[serde(rename = "in_TE")]
    pub in_te: bool,
    /// Largest negativity over the future cone.
    pub max_negativity: f64,
    /// Rotation angle of the degenerate block that attains it.
    pub optimal_theta: f64,
    pub pi_star_point: PopVector,
    /// State of the cone attaining `max_negativity`.
    pub max_negativity_state: PopVector,
}

/// Full classification of `p`: subspace and thermal verdicts plus the
/// largest negativity reachable by thermal operations.
pub fn is_thermally_entanglable(p: &PopVector, ctx: &GibbsContext) -> Result<WitnessReport> {
    let star = pi_star_point(p, ctx)?;
    let f_value = f_raw(p.as_slice());
    let f_star = f_raw(star.as_slice());
    let best = max_negativity_over_cone(p, ctx)?;
    Ok(WitnessReport {
        f_value,
        f_star,
        in_e: f_value < -TAU_F,
        in_te: f_star < -TAU_F,
        max_negativity: best.value,
        optimal_theta: FRAC_PI_4,
        pi_star_point: star,
        max_negativity_state: best.state,
    })
}

/// Oracle for the single-point test: the state is thermally non-entanglable
/// iff f ≥ −τ_f at every extreme point of the cone. At β = 0 the extreme
/// points are the level permutations of `p`, so they are enumerated directly.
pub fn tne_bruteforce(p: &PopVector, ctx: &GibbsContext) -> Result<bool> {
    require_two_qubit(ctx)?;
    ctx_check(p, ctx)?;
    if ctx.beta() == Beta::Finite(0.0) {
        let q = p.as_slice();
        return Ok((0..4).permutations(4).all(|perm| {
            let r: Vec<f64> = perm.iter().map(|&i| q[i]).collect();
            f_raw(&r) >= -TAU_F
        }));
    }
    let lp = curve_unchecked(p.as_slice(), ctx.gamma());
    Ok((0..4).permutations(4).all(|perm| f_raw(extreme_from_curve(&lp, ctx.gamma(), &perm).as_slice()) >= -TAU_F))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeNegativity {
    pub value: f64,
    pub state: PopVector,
}

/// Unclipped negativity: non-negative exactly when f ≤ 0.
fn negativity_surrogate(q: &[f64]) -> f64 {
    0.5 * ((q[0] - q[3]).hypot(q[1] - q[2]) - (q[0] + q[3]))
}

fn surrogate_gradient(q: &[f64]) -> [f64; 4] {
    let (a, b) = (q[0] - q[3], q[1] - q[2]);
    let r = a.hypot(b);
    let (ua, ub) = if r > 0.0 { (a / r, b / r) } else { (0.0, 0.0) };
    [0.5 * (ua - 1.0), 0.5 * ub, -0.5 * ub, 0.5 * (-ua - 1.0)]
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

struct ConeProblem<'a> {
    vertices: &'a [[f64; 4]],
}

impl ConeProblem<'_> {
    fn point(&self, w: &[f64]) -> [f64; 4] {
        let mut q = [0.0; 4];
        for (wi, v) in w.iter().zip(self.vertices) {
            for k in 0..4 {
                q[k] += wi * v[k];
            }
        }
        q
    }

    fn value(&self, w: &[f64]) -> f64 {
        negativity_surrogate(&self.point(w))
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let gq = surrogate_gradient(&self.point(w));
        self.vertices.iter().map(|v| (0..4).map(|k| v[k] * gq[k]).sum()).collect()
    }

    /// Projected gradient ascent with step adaptation.
    fn ascend(&self, mut w: Vec<f64>) -> (Vec<f64>, f64) {
        const STEP_TOL: f64 = 1e-8;
        let mut val = self.value(&w);
        let mut step = 1.0;
        for _ in 0..5000 {
            let g = self.gradient(&w);
            let trial: Vec<f64> = w.iter().zip(&g).map(|(wi, gi)| wi + step * gi).collect();
            let trial = project_simplex(&trial);
            let moved = trial.iter().zip(&w).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            let tv = self.value(&trial);
            if tv > val {
                w = trial;
                val = tv;
                step = (step * 1.5).min(1e3);
                if moved < STEP_TOL {
                    break;
                }
            } else {
                step *= 0.5;
                if step < 1e-12 || moved < STEP_TOL {
                    break;
                }
            }
        }
        (w, val)
    }

    /// Coordinate refinement: move mass towards single vertices by golden
    /// section along each segment w → e_j.
    fn refine(&self, mut w: Vec<f64>, mut val: f64) -> (Vec<f64>, f64) {
        let n = self.vertices.len();
        for _ in 0..20 {
            let mut improved = false;
            for j in 0..n {
                let base = w.clone();
                let along = |t: f64| {
                    let mut x: Vec<f64> = base.iter().map(|wi| (1.0 - t) * wi).collect();
                    x[j] += t;
                    x
                };
                let t = golden_max(|t| self.value(&along(t)), 0.0, 1.0, 1e-10);
                for t in [t, 1.0] {
                    let x = along(t);
                    let v = self.value(&x);
                    if v > val + 1e-15 {
                        w = x;
                        val = v;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        (w, val)
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Largest negativity over the future thermal cone, by multi-start projected
/// ascent over barycentric weights of the cone's extreme points (one start
/// per vertex plus the barycentre) followed by coordinate refinement.
pub fn max_negativity_over_cone(p: &PopVector, ctx: &GibbsContext) -> Result<ConeNegativity> {
    require_two_qubit(ctx)?;
    let cone = future_cone(p, ctx)?;
    let vertices: Vec<[f64; 4]> = cone
        .extremes()
        .iter()
        .map(|(_, q)| [q[0], q[1], q[2], q[3]])
        .collect();
    let n = vertices.len();
    let problem = ConeProblem { vertices: &vertices };
    let mut starts: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut w = vec![0.0; n];
            w[j] = 1.0;
            w
        })
        .collect();
    starts.push(vec![1.0 / n as f64; n]);

    let mut best: Option<(Vec<f64>, f64)> = None;
    for w0 in starts {
        let (w, v) = problem.ascend(w0);
        let (w, v) = problem.refine(w, v);
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((w, v));
        }
    }
    let (w, _) = best.expect("cone has at least one extreme point");
    let state = PopVector::from_computed(problem.point(&w).to_vec());
    let value = negativity_raw(state.as_slice());
    Ok(ConeNegativity { value, state })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalTemps {
    /// Hot critical inverse temperature (entanglable for β < β_C1).
    pub beta_c1: Option<f64>,
    /// Cold critical inverse temperature (entanglable for β > β_C2).
    pub beta_c2: Option<f64>,
    /// β_S − log 3 / E.
    pub approx_c1: f64,
    /// β_S + log 3 / E.
    pub approx_c2: f64,
}

/// Upper end of the Δ range where the hot-system extreme point has the
/// (D4) form: 1 > Δ + Δ².
pub fn golden_delta() -> f64 {
    (5.0_f64.sqrt() - 1.0) / 2.0
}

/// Z_S² f(p⋆) on the hot-system branch Δ + Δ² < 1, as a function of
/// Δ = e^{−βE}, where p⋆ = (1 + (Δ_S − Δ)(1 + Δ), Δ_S(1 + Δ_S − Δ), Δ, Δ²)/Z_S.
pub fn hot_branch_witness(delta_s: f64, delta: f64) -> f64 {
    let a = (delta_s - delta) * (1.0 + delta_s);
    -a * a + 4.0 * delta * delta * (1.0 + delta_s - (1.0 - delta_s) * delta - delta * delta)
}

/// Closed-form hot critical Boltzmann weight Δ_C1.
pub fn cold_system_critical_delta(delta_s: f64) -> f64 {
    delta_s * (1.0 + 2.0 * (1.0 + delta_s * delta_s).sqrt() - 2.0 * delta_s)
}

/// Critical ambient temperatures for a thermal initial state at `beta_s`.
pub fn critical_temps_thermal(beta_s: f64, gap: f64) -> Result<CriticalTemps> {
    if !(gap > 0.0) || !gap.is_finite() {
        return Err(Error::NonPositiveGap(gap));
    }
    if !(beta_s >= 0.0) || !beta_s.is_finite() {
        return Err(Error::NegativeBeta(beta_s));
    }
    let ds = (-beta_s * gap).exp();
    let log3 = 3.0_f64.ln() / gap;

    let dc1 = cold_system_critical_delta(ds);
    let beta_c1 = (dc1 <= 1.0).then(|| -dc1.ln() / gap);

    let hi = ds.min(golden_delta());
    let beta_c2 = if hi > 0.0 && hot_branch_witness(ds, hi) > 0.0 {
        let (mut lo, mut hi) = (0.0_f64, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hot_branch_witness(ds, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-17 * hi {
                break;
            }
        }
        Some(-(0.5 * (lo + hi)).ln() / gap)
    } else {
        None
    };

    Ok(CriticalTemps { beta_c1, beta_c2, approx_c1: beta_s - log3, approx_c2: beta_s + log3 })
}

/// Inverse temperatures in `beta_range` where f(p⋆(β)) changes sign,
/// located by an `n_scan`-point scan and bisection.
pub fn critical_temps_general(p: &PopVector, gap: f64, beta_range: (f64, f64), n_scan: usize) -> Result<Vec<f64>> {
    let (lo, hi) = beta_range;
    if !(lo < hi) || !(lo >= 0.0) || !hi.is_finite() || n_scan < 2 {
        return Err(Error::EmptyRange(lo, hi));
    }
    check_dim(p, 4)?;
    if !(gap > 0.0) {
        return Err(Error::NonPositiveGap(gap));
    }
    let witness = |beta: f64| -> f64 {
        let ctx = GibbsContext::two_qubit(gap, Beta::Finite(beta)).expect("validated gap and beta");
        let lp = curve_unchecked(p.as_slice(), ctx.gamma());
        f_raw(extreme_from_curve(&lp, ctx.gamma(), BetaOrdering::pi_star().as_slice()).as_slice())
    };
    let grid: Vec<f64> = (0..n_scan)
        .map(|j| lo + (hi - lo) * j as f64 / (n_scan - 1) as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&b| witness(b)).collect();
    let mut roots = Vec::new();
    for j in 0..n_scan - 1 {
        let (mut a, mut b) = (grid[j], grid[j + 1]);
        let (fa, fb) = (values[j], values[j + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        let neg_at_a = fa < 0.0;
        while b - a > ROOT_REL_TOL * b.abs().max(1e-300) {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if (witness(m) < 0.0) == neg_at_a {
                a = m;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    if values[n_scan - 1] == 0.0 {
        roots.push(grid[n_scan - 1]);
    }
    Ok(roots)
}

/// Witnesses for a qubit–qutrit system with level layout
/// (0, E, E, 2E, 2E, 3E): levels |00⟩, |01⟩, |10⟩, |02⟩, |11⟩, |12⟩.
pub fn qubit_qutrit_witnesses(p: &PopVector) -> Result<(f64, f64)> {
    check_dim(p, 6)?;
    let p = p.as_slice();
    let d23 = p[1] - p[2];
    let d45 = p[3] - p[4];
    let f1 = 4.0 * p[0] * p[3].min(p[4]) - d23 * d23;
    let f2 = 4.0 * p[5] * p[1].min(p[2]) - d45 * d45;
    Ok((f1, f2))
}

pub fn is_qubit_qutrit_entanglable(p: &PopVector) -> Result<bool> {
    let (f1, f2) = qubit_qutrit_witnesses(p)?;
    Ok(f1 < -TAU_F || f2 < -TAU_F)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::beta_order;

    fn pv(v: &[f64]) -> PopVector {
        PopVector::new(v.to_vec()).unwrap()
    }

    fn ctx(beta: f64) -> GibbsContext {
        GibbsContext::two_qubit(1.0, Beta::Finite(beta)).unwrap()
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness_f(&pv(&[0.0, 0.5, 0.5, 0.0])).unwrap(), 0.0);
        assert_eq!(witness_f(&pv(&[0.0, 1.0, 0.0, 0.0])).unwrap(), -1.0);
        let q = pv(&[949.0 / 2000.0, 613.0 / 5000.0, 771.0 / 2500.0, 189.0 / 2000.0]);
        assert!((witness_f(&q).unwrap() - 0.14483936).abs() < 1e-12);
        assert_eq!(witness_f(&pv(&[0.5, 0.5])), Err(Error::DimensionMismatch { expected: 4, got: 2 }));
    }

    #[test]
    fn ppt_eigenvalue_examples() {
        let q = pv(&[0.1, 0.3, 0.2, 0.4]);
        assert!((min_ppt_eigenvalue(&q, 0.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((min_ppt_eigenvalue(&pv(&[0.0, 1.0, 0.0, 0.0]), FRAC_PI_4).unwrap() + 0.5).abs() < 1e-15);
        for theta in [0.0, 0.3, 1.0, 2.5] {
            assert!((min_ppt_eigenvalue(&PopVector::uniform(4), theta).unwrap() - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn subspace_entanglability() {
        for beta in [0.0, 0.5, 3.0] {
            assert!(!is_subspace_entanglable(&ctx(beta).gibbs_state()).unwrap());
        }
        assert!(is_subspace_entanglable(&pv(&[0.0, 1.0, 0.0, 0.0])).unwrap());
        assert!(!is_subspace_entanglable(&pv(&[0.4, 0.25, 0.33, 0.02])).unwrap());
    }

    #[test]
    fn negativity_examples() {
        assert_eq!(max_negativity(&pv(&[0.0, 1.0, 0.0, 0.0])).unwrap(), 0.5);
        assert_eq!(max_negativity(&PopVector::uniform(4)).unwrap(), 0.0);
        // ½[√(0.05² + 0.75²) − 0.15]
        let n = max_negativity(&pv(&[0.1, 0.8, 0.05, 0.05])).unwrap();
        assert!((n - 0.5 * (0.565_f64.sqrt() - 0.15)).abs() < 1e-15);
        assert!((n - 0.3008327).abs() < 1e-6);
    }

    #[test]
    fn catalysis_states_classification() {
        let c = ctx(0.0);
        let initial = pv(&[0.4, 0.25, 0.33, 0.02]);
        assert!(!thermally_entanglable(&initial, &c).unwrap());
        assert!(tne_bruteforce(&initial, &c).unwrap());
        let fin = pv(&[949.0 / 2000.0, 613.0 / 5000.0, 771.0 / 2500.0, 189.0 / 2000.0]);
        assert!(thermally_entanglable(&fin, &c).unwrap());
        assert!(!tne_bruteforce(&fin, &c).unwrap());
    }

    #[test]
    fn ground_state_f_star() {
        for beta in [0.5, 1.0, 2.0] {
            let f = thermal_witness(&pv(&[1.0, 0.0, 0.0, 0.0]), &ctx(beta)).unwrap();
            assert!((f + (-2.0 * beta).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn report_fields() {
        let r = is_thermally_entanglable(&pv(&[1.0, 0.0, 0.0, 0.0]), &ctx(1.0)).unwrap();
        assert!(r.in_te && !r.in_e);
        assert!(r.max_negativity > 0.0);
        assert!(f_raw(r.max_negativity_state.as_slice()) < 0.0);
        assert!(matches!(
            is_thermally_entanglable(&pv(&[0.5, 0.5]), &GibbsContext::new(vec![0.0, 1.0], Beta::Finite(1.0)).unwrap()),
            Err(Error::NotTwoQubit)
        ));
    }

    #[test]
    fn bruteforce_examples() {
        assert!(tne_bruteforce(&ctx(0.7).gibbs_state(), &ctx(0.7)).unwrap());
        assert!(!tne_bruteforce(&pv(&[0.0, 0.0, 0.0, 1.0]), &ctx(0.0)).unwrap());
    }

    #[test]
    fn counterexample_state() {
        let eps = 0.01;
        let p = pv(&[eps, 1.0 - eps - eps * eps, 0.0, eps * eps]);
        let c = ctx(1.0);
        assert_eq!(beta_order(&p, &c).unwrap().one_based(), vec![2, 1, 4, 3]);
        assert!(witness_f(&p).unwrap() < thermal_witness(&p, &c).unwrap());
    }

    #[test]
    fn cone_negativity_examples() {
        let top = max_negativity_over_cone(&pv(&[0.0, 0.0, 0.0, 1.0]), &ctx(1.5)).unwrap();
        assert!((top.value - 0.5).abs() < 1e-12);
        let g = max_negativity_over_cone(&ctx(0.8).gibbs_state(), &ctx(0.8)).unwrap();
        assert_eq!(g.value, 0.0);
        let d = (-1.0_f64).exp();
        let cand = max_negativity(&pv(&[1.0 - d, d, 0.0, 0.0])).unwrap();
        assert!((cand - 0.049628).abs() < 1e-6);
        let ground = max_negativity_over_cone(&pv(&[1.0, 0.0, 0.0, 0.0]), &ctx(1.0)).unwrap();
        assert!(ground.value >= cand - 1e-12 && ground.value < 0.5);
    }

    #[test]
    fn simplex_projection() {
        let w = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(w.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
    }

    #[test]
    fn critical_temps_examples() {
        let ct = critical_temps_thermal(5.0, 1.0).unwrap();
        let expected = 5.0 - (1.0 + 2.0 * (-5.0_f64).exp() * ((10.0_f64).exp() + 1.0).sqrt() - 2.0 * (-5.0_f64).exp()).ln();
        assert!((ct.beta_c1.unwrap() - expected).abs() < 1e-12);
        assert!((ct.beta_c1.unwrap() - 3.9058746).abs() < 1e-7);
        assert!(ct.beta_c1.unwrap() < ct.beta_c2.unwrap());
        assert!((ct.approx_c1 - (5.0 - 3.0_f64.ln())).abs() < 1e-15);
        assert_eq!(critical_temps_thermal(1.0, 0.0), Err(Error::NonPositiveGap(0.0)));
    }

    #[test]
    fn hot_branch_matches_extreme_point() {
        for (bs, b) in [(1.0, 1.5), (2.0, 4.0), (5.0, 6.1), (0.3, 0.9)] {
            let (ds, d) = ((-bs as f64).exp(), (-b as f64).exp());
            assert!(d + d * d < 1.0);
            let p = ctx(bs).gibbs_state();
            let zs = (1.0 + ds) * (1.0 + ds);
            let f = thermal_witness(&p, &ctx(b)).unwrap();
            assert!((zs * zs * f - hot_branch_witness(ds, d)).abs() < 1e-14);
        }
    }

    #[test]
    fn critical_temps_large_beta_limit() {
        let ct = critical_temps_thermal(30.0, 1.0).unwrap();
        assert!((ct.beta_c1.unwrap() - (30.0 - 3.0_f64.ln())).abs() < 1e-8);
        assert!((ct.beta_c2.unwrap() - (30.0 + 3.0_f64.ln())).abs() < 1e-8);
    }

    #[test]
    fn critical_temps_general_examples() {
        let top = critical_temps_general(&pv(&[0.0, 0.0, 0.0, 1.0]), 1.0, (0.0, 5.0), 50).unwrap();
        assert!(top.is_empty());
        let p = pv(&[0.12, 0.38, 0.12, 0.38]);
        let roots = critical_temps_general(&p, 1.0, (0.0, 2.0), 200).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 0.21).abs() < 0.02);
        assert!(critical_temps_general(&p, 1.0, (1.0, 1.0), 10).is_err());
    }

    #[test]
    fn qutrit_examples() {
        let (f1, _) = qubit_qutrit_witnesses(&pv(&[0.0, 0.5, 0.0, 0.0, 0.5, 0.0])).unwrap();
        assert_eq!(f1, -0.25);
        let (f1, f2) = qubit_qutrit_witnesses(&PopVector::uniform(6)).unwrap();
        assert!((f1 - 1.0 / 9.0).abs() < 1e-15 && (f2 - 1.0 / 9.0).abs() < 1e-15);
        let p = pv(&[0.5, 0.1, 0.1, 0.1, 0.1, 0.1]);
        let (f1, f2) = qubit_qutrit_witnesses(&p).unwrap();
        assert!((f1 - 0.2).abs() < 1e-15 && (f2 - 0.04).abs() < 1e-15);
        assert!(!is_qubit_qutrit_entanglable(&p).unwrap());
        assert!(qubit_qutrit_witnesses(&PopVector::uniform(4)).is_err());
    }
}
