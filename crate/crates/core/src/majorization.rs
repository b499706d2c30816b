//! Thermomajorization curves, the thermomajorization preorder and future
//! thermal cones.
//!
//! A curve is stored as its elbow list starting at (0, 0). Levels with a
//! vanishing Gibbs weight produce zero-width segments; they are always
//! ranked first (or last, when empty), so they appear as a single vertical
//! jump at x = 0. Evaluating at x = 0 returns the top of that jump, which
//! makes the curve the upper boundary of a closed set.

use itertools::Itertools;
use serde::Serialize;

use crate::context::{beta_order_unchecked, BetaOrdering, GibbsContext, PopVector};
use crate::error::{Error, Result};

/// Comparison tolerance for curves and cone membership.
pub const TAU_CMP: f64 = 1e-10;

/// Largest dimension for which all d! extreme points are enumerated.
pub const MAX_CONE_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermoCurve {
    elbows: Vec<(f64, f64)>,
    #[serde(skip)]
    segments: Vec<Segment>,
    #[serde(skip)]
    jump: f64,
}

/// One positive-width piece of a curve spanning `[x0, x1]`
/// with slope p/γ.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Segment {
    x0: f64,
    x1: f64,
    gamma: f64,
    slope: f64,
}

impl ThermoCurve {
    pub fn elbows(&self) -> &[(f64, f64)] {
        &self.elbows
    }

    /// Curve value at `x ∈ [0, 1]`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfRange(x));
        }
        Ok(self.value_at(x))
    }

    pub(crate) fn value_at(&self, x: f64) -> f64 {
        let e = &self.elbows;
        if x <= 0.0 {
            return e.iter().take_while(|(ex, _)| *ex <= 0.0).map(|(_, y)| *y).fold(0.0, f64::max);
        }
        if x >= 1.0 {
            return e[e.len() - 1].1;
        }
        // first elbow with ex >= x; elbows[0].x == 0 < x so k >= 1
        let k = e.partition_point(|(ex, _)| *ex < x);
        let (x0, y0) = e[k - 1];
        let (x1, y1) = e[k];
        if x1 <= x0 {
            return y1;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// True when this curve lies on or above `other` everywhere, up to τ_cmp.
    /// Both curves are piecewise linear, so the union of elbow abscissae
    /// is a sufficient test set.
    pub fn dominates(&self, other: &ThermoCurve) -> bool {
        self.elbows
            .iter()
            .chain(&other.elbows)
            .all(|&(x, _)| self.value_at(x) >= other.value_at(x) - TAU_CMP)
    }
}

/// Σ γ_i over the levels flagged in `mask`, always summed in ascending
/// level order so that equal level sets give bit-identical abscissae.
fn set_sum(gamma: &[f64], mask: &[bool]) -> f64 {
    gamma.iter().zip(mask).filter(|(_, m)| **m).map(|(g, _)| g).sum()
}

/// Thermomajorization curve of `p` relative to the Gibbs vector of `ctx`.
pub fn curve(p: &PopVector, ctx: &GibbsContext) -> Result<ThermoCurve> {
    ctx.check_dim(p)?;
    Ok(curve_unchecked(p.as_slice(), ctx.gamma()))
}

pub(crate) fn curve_unchecked(p: &[f64], gamma: &[f64]) -> ThermoCurve {
    let order = beta_order_unchecked(p, gamma);
    let mut elbows = Vec::with_capacity(p.len() + 1);
    let mut segments = Vec::with_capacity(p.len());
    let mut mask = vec![false; p.len()];
    elbows.push((0.0, 0.0));
    let mut jump = 0.0;
    let (mut x, mut y) = (0.0, 0.0);
    for &i in order.as_slice() {
        mask[i] = true;
        y += p[i];
        if gamma[i] == 0.0 {
            // zero-width segment: a vertical jump at x = 0, or a no-op for
            // empty levels at the end
            if x == 0.0 {
                jump += p[i];
            }
            match elbows.len() {
                1 => elbows.push((x, y)),
                _ => {
                    if let Some(last) = elbows.last_mut() {
                        last.1 = y;
                    }
                }
            }
            continue;
        }
        let x1 = set_sum(gamma, &mask);
        segments.push(Segment { x0: x, x1, gamma: gamma[i], slope: p[i] / gamma[i] });
        x = x1;
        elbows.push((x, y));
    }
    if let Some(last) = elbows.last_mut() {
        *last = (1.0, 1.0);
    }
    ThermoCurve { elbows, segments, jump }
}

/// `p ≻_β q`: the curve of `p` dominates the curve of `q`.
pub fn thermo_majorizes(p: &PopVector, q: &PopVector, ctx: &GibbsContext) -> Result<bool> {
    ctx.check_dim(p)?;
    ctx.check_dim(q)?;
    let lp = curve_unchecked(p.as_slice(), ctx.gamma());
    let lq = curve_unchecked(q.as_slice(), ctx.gamma());
    Ok(lp.dominates(&lq))
}

/// The tightly thermomajorized state with β-ordering `target`: its elbows
/// sit at the cumulative Gibbs weights of `target` and on the curve of `p`.
pub fn extreme_point(p: &PopVector, ctx: &GibbsContext, target: &BetaOrdering) -> Result<PopVector> {
    ctx.check_dim(p)?;
    if target.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: target.len() });
    }
    let lp = curve_unchecked(p.as_slice(), ctx.gamma());
    Ok(extreme_from_curve(&lp, ctx.gamma(), target.as_slice()))
}

/// Populations are integrals of the curve slope over each target interval,
/// so small tail populations keep full relative precision.
pub(crate) fn extreme_from_curve(lp: &ThermoCurve, gamma: &[f64], target: &[usize]) -> PopVector {
    let mut q = vec![0.0; gamma.len()];
    let mut mask = vec![false; gamma.len()];
    let mut a = 0.0;
    let mut jump_left = lp.jump > 0.0;
    for &level in target {
        mask[level] = true;
        let g = gamma[level];
        if g == 0.0 {
            if a == 0.0 && jump_left {
                q[level] = lp.jump;
                jump_left = false;
            }
            continue;
        }
        let b = set_sum(gamma, &mask);
        let mut mass = 0.0;
        if a == 0.0 && jump_left {
            mass += lp.jump;
            jump_left = false;
        }
        for s in &lp.segments {
            if s.x1 <= a {
                continue;
            }
            if s.x0 >= b {
                break;
            }
            let len = if s.x0 >= a && s.x1 <= b {
                s.gamma
            } else if a >= s.x0 && b <= s.x1 {
                g
            } else {
                b.min(s.x1) - a.max(s.x0)
            };
            mass += s.slope * len;
        }
        q[level] = mass;
        a = b;
    }
    PopVector::from_computed(q)
}

/// Future thermal cone: deduplicated extreme points labelled by the first
/// ordering (in lexicographic enumeration) that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalCone {
    origin: PopVector,
    ctx: GibbsContext,
    extremes: Vec<(BetaOrdering, PopVector)>,
}

impl ThermalCone {
    pub fn origin(&self) -> &PopVector {
        &self.origin
    }

    pub fn context(&self) -> &GibbsContext {
        &self.ctx
    }

    pub fn extremes(&self) -> &[(BetaOrdering, PopVector)] {
        &self.extremes
    }

    /// Membership by thermomajorization, equivalent to lying in the hull of
    /// the extreme points.
    pub fn contains(&self, q: &PopVector) -> Result<bool> {
        thermo_majorizes(&self.origin, q, &self.ctx)
    }
}

pub fn future_cone(p: &PopVector, ctx: &GibbsContext) -> Result<ThermalCone> {
    ctx.check_dim(p)?;
    let d = p.dim();
    if d > MAX_CONE_DIM {
        return Err(Error::DimensionTooLarge(d));
    }
    let lp = curve_unchecked(p.as_slice(), ctx.gamma());
    let candidates: Vec<(Vec<usize>, PopVector)> = (0..d)
        .permutations(d)
        .map(|perm| {
            let q = extreme_from_curve(&lp, ctx.gamma(), &perm);
            (perm, q)
        })
        .collect();

    // Sort candidate indices lexicographically by population, then merge
    // neighbours within τ_cmp.
    let mut idx: Vec<usize> = (0..candidates.len()).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (candidates[a].1.as_slice(), candidates[b].1.as_slice());
        pa.iter()
            .zip(pb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut keep = vec![false; candidates.len()];
    let mut rep: Option<usize> = None;
    for &i in &idx {
        match rep {
            Some(r) if candidates[r].1.max_abs_diff(&candidates[i].1) <= TAU_CMP => {
                // lowest enumeration index in the run becomes the label
                if i < r {
                    keep[r] = false;
                    keep[i] = true;
                    rep = Some(i);
                }
            }
            _ => {
                keep[i] = true;
                rep = Some(i);
            }
        }
    }
    let extremes = candidates
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|((perm, q), _)| (BetaOrdering::new(perm).expect("enumerated permutation"), q))
        .collect();
    Ok(ThermalCone { origin: p.clone(), ctx: ctx.clone(), extremes })
}

/// Same as `cone.contains(q)`.
pub fn cone_contains(cone: &ThermalCone, q: &PopVector) -> Result<bool> {
    cone.contains(q)
}
