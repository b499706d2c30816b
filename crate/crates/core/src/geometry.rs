//! Volumes of entanglability sets, the bisection boundary of the thermally
//! non-entanglable set, and the boundary of the subspace non-entanglable set.
//!
//! Monte Carlo draws are split into fixed blocks of [`BLOCK_SIZE`] samples.
//! Block `k` uses stream `k` of a ChaCha8 generator keyed by the seed, so
//! estimates do not depend on how many worker threads process the blocks.

pub mod hull;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::{GibbsContext, PopVector};
use crate::entangle::{f_raw, thermally_entanglable, TAU_F};
use crate::error::{Error, Result};
use crate::majorization::{curve_unchecked, TAU_CMP};

pub use hull::{convex_hull_export, Mesh};

/// Samples per deterministic RNG stream.
pub const BLOCK_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetId {
    E,
    NE,
    TNE,
    #[serde(rename = "ENT_CONE")]
    EntCone,
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetId::E => "E",
            SetId::NE => "NE",
            SetId::TNE => "TNE",
            SetId::EntCone => "ENT_CONE",
        })
    }
}

impl FromStr for SetId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "E" => Ok(SetId::E),
            "NE" => Ok(SetId::NE),
            "TNE" => Ok(SetId::TNE),
            "ENT_CONE" | "ENT-CONE" => Ok(SetId::EntCone),
            _ => Err(Error::InvalidConfig(format!("unknown set '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub fraction: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl VolumeEstimate {
    fn from_hits(hits: u64, n: u64, seed: u64) -> Self {
        let fraction = hits as f64 / n as f64;
        let std_error = (fraction * (1.0 - fraction) / n as f64).sqrt();
        VolumeEstimate { fraction, std_error, n_samples: n, seed }
    }

    /// Standard error of the difference of two independent estimates.
    pub fn joint_sigma(&self, other: &VolumeEstimate) -> f64 {
        self.std_error.hypot(other.std_error)
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn draw_simplex(rng: &mut ChaCha8Rng, buf: &mut [f64]) {
    let mut sum = 0.0;
    for x in buf.iter_mut() {
        *x = rng.sample::<f64, _>(Exp1);
        sum += *x;
    }
    buf.iter_mut().for_each(|x| *x /= sum);
}

/// Deterministic stream of i.i.d. uniform points of the (d−1)-simplex.
#[derive(Debug, Clone)]
pub struct SimplexStream {
    d: usize,
    remaining: usize,
    seed: u64,
    block: u64,
    in_block: usize,
    rng: ChaCha8Rng,
}

impl Iterator for SimplexStream {
    type Item = PopVector;

    fn next(&mut self) -> Option<PopVector> {
        if self.remaining == 0 {
            return None;
        }
        if self.in_block == BLOCK_SIZE {
            self.block += 1;
            self.in_block = 0;
            self.rng = block_rng(self.seed, self.block);
        }
        let mut v = vec![0.0; self.d];
        draw_simplex(&mut self.rng, &mut v);
        self.in_block += 1;
        self.remaining -= 1;
        Some(PopVector::from_computed(v))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for SimplexStream {}

/// Uniform samples from normalized exponential draws. The stream is the
/// same one [`volume_of`] consumes.
pub fn sample_simplex(d: usize, n: usize, seed: u64) -> Result<SimplexStream> {
    if d < 2 {
        return Err(Error::InvalidConfig(format!("simplex dimension must be at least 2, got {d}")));
    }
    Ok(SimplexStream { d, remaining: n, seed, block: 0, in_block: 0, rng: block_rng(seed, 0) })
}

/// Counts, in parallel over blocks, the samples satisfying `pred`.
fn count_hits<F>(d: usize, n: u64, seed: u64, pred: F) -> u64
where
    F: Fn(&[f64]) -> bool + Sync,
{
    let blocks = n.div_ceil(BLOCK_SIZE as u64);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = (n - b * BLOCK_SIZE as u64).min(BLOCK_SIZE as u64);
            let mut buf = vec![0.0; d];
            let mut hits = 0u64;
            for _ in 0..len {
                draw_simplex(&mut rng, &mut buf);
                if pred(&buf) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

/// Monte Carlo volume fraction of the chosen set inside the two-qubit
/// simplex. `origin` is required for [`SetId::EntCone`], the entangled part
/// of the origin's future thermal cone.
pub fn volume_of(set: SetId, ctx: &GibbsContext, origin: Option<&PopVector>, n: u64, seed: u64) -> Result<VolumeEstimate> {
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    ctx.two_qubit_gap().ok_or(Error::NotTwoQubit)?;
    let hits = match set {
        SetId::E => count_hits(4, n, seed, |q| f_raw(q) < -TAU_F),
        SetId::NE => count_hits(4, n, seed, |q| f_raw(q) >= -TAU_F),
        SetId::TNE => count_hits(4, n, seed, |q| {
            !thermally_entanglable(&PopVector::from_computed(q.to_vec()), ctx).expect("validated context")
        }),
        SetId::EntCone => {
            let origin = origin.ok_or(Error::MissingOrigin)?;
            ctx.check_dim(origin)?;
            let lp = curve_unchecked(origin.as_slice(), ctx.gamma());
            count_hits(4, n, seed, |q| {
                f_raw(q) < -TAU_F && lp.dominates(&curve_unchecked(q, ctx.gamma()))
            })
        }
    };
    Ok(VolumeEstimate::from_hits(hits, n, seed))
}

/// Lattice points (i, j, k, l)/m on the boundary of the 3-simplex, i.e. the
/// union of the four facet triangulations with shared edges counted once.
pub fn boundary_grid(m: usize) -> Result<Vec<PopVector>> {
    if m == 0 {
        return Err(Error::InvalidConfig("grid resolution must be positive".into()));
    }
    let mut pts = Vec::new();
    for i in 0..=m {
        for j in 0..=m - i {
            for k in 0..=m - i - j {
                let l = m - i - j - k;
                if [i, j, k, l].contains(&0) {
                    let v = [i, j, k, l].map(|c| c as f64 / m as f64);
                    pts.push(PopVector::from_computed(v.to_vec()));
                }
            }
        }
    }
    Ok(pts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPoint {
    /// Midpoint of the final bracket.
    pub point: PopVector,
    /// Bracket end classified non-entanglable.
    pub inner: PopVector,
    /// Bracket end classified entanglable.
    pub outer: PopVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCloud {
    pub points: Vec<BoundaryPoint>,
    pub grid_resolution: usize,
    pub iterations: usize,
}

impl BoundaryCloud {
    pub fn positions(&self) -> Vec<PopVector> {
        self.points.iter().map(|b| b.point.clone()).collect()
    }
}

/// The single boundary grid state that is not thermally entanglable,
/// (1, Δ, Δ, 0)/(1 + 2Δ) with Δ = e^{−βE}.
pub fn exceptional_point(ctx: &GibbsContext) -> Result<PopVector> {
    let g = ctx.gamma();
    ctx.two_qubit_gap().ok_or(Error::NotTwoQubit)?;
    let z = g[0] + g[1] + g[2];
    Ok(PopVector::from_computed(vec![g[0] / z, g[1] / z, g[2] / z, 0.0]))
}

/// Approximate boundary of the thermally non-entanglable set. Each grid
/// state on the simplex boundary is joined to the Gibbs state and the segment
/// is bisected `iters` times with the single-extreme-point test; the bracket
/// midpoints form the cloud. At β = ∞ the set is the ground state alone.
pub fn tne_boundary(ctx: &GibbsContext, grid: usize, iters: usize) -> Result<BoundaryCloud> {
    ctx.two_qubit_gap().ok_or(Error::NotTwoQubit)?;
    if ctx.beta().is_infinite() {
        let g = PopVector::basis(4, 0);
        let point = BoundaryPoint { point: g.clone(), inner: g.clone(), outer: g };
        return Ok(BoundaryCloud { points: vec![point], grid_resolution: grid, iterations: iters });
    }
    let gamma = ctx.gibbs_state();
    let skip = exceptional_point(ctx)?;
    let grid_pts: Vec<PopVector> = boundary_grid(grid)?
        .into_iter()
        .filter(|p| p.max_abs_diff(&skip) > TAU_CMP)
        .collect();
    let te = |p: &PopVector| thermally_entanglable(p, ctx).expect("validated context");
    let points = grid_pts
        .par_iter()
        .filter(|p| te(p))
        .map(|p_o| {
            let mut outer = p_o.clone();
            let mut inner = gamma.clone();
            for _ in 0..iters {
                let mid = outer.mix(&inner, 0.5);
                if te(&mid) {
                    outer = mid;
                } else {
                    inner = mid;
                }
            }
            BoundaryPoint { point: outer.mix(&inner, 0.5), inner, outer }
        })
        .collect();
    Ok(BoundaryCloud { points, grid_resolution: grid, iterations: iters })
}

/// Roots p₃ of f(p₁, p₂, p₃, 1 − p₁ − p₂ − p₃) = 0, as (minus, plus).
/// These are unclipped; see [`ne_boundary_valid_roots`].
pub fn ne_boundary_p3(p1: f64, p2: f64) -> Result<(f64, f64)> {
    let disc = p1 - 2.0 * p1 * p2;
    if !p1.is_finite() || !p2.is_finite() || p1 < 0.0 || p2 > 0.5 || disc < 0.0 {
        return Err(Error::RootDomain(format!("p1 = {p1}, p2 = {p2}")));
    }
    let s = 2.0 * disc.sqrt();
    let c = p2 - 2.0 * p1;
    Ok((c - s, c + s))
}

/// The roots of [`ne_boundary_p3`] that give a valid state, i.e. lie in
/// [0, 1 − p₁ − p₂], deduplicated.
pub fn ne_boundary_valid_roots(p1: f64, p2: f64) -> Result<Vec<f64>> {
    let (lo, hi) = ne_boundary_p3(p1, p2)?;
    let top = 1.0 - p1 - p2;
    let eps = 1e-14;
    let mut out: Vec<f64> = [lo, hi]
        .into_iter()
        .filter(|r| *r >= -eps && *r <= top + eps)
        .map(|r| r.clamp(0.0, top.max(0.0)))
        .collect();
    out.dedup_by(|a, b| (*a - *b).abs() <= eps);
    Ok(out)
}

/// Embeds a two-qubit population vector in R³, mapping the levels to the
/// vertices (±1, ±1, ±1)/2 with an even number of minus signs. The image is
/// a regular tetrahedron with volume 1/3.
pub fn embed(p: &PopVector) -> [f64; 3] {
    const V: [[f64; 3]; 4] = [[0.5, 0.5, 0.5], [0.5, -0.5, -0.5], [-0.5, 0.5, -0.5], [-0.5, -0.5, 0.5]];
    let mut x = [0.0; 3];
    for (pi, v) in p.as_slice().iter().zip(V) {
        for k in 0..3 {
            x[k] += pi * v[k];
        }
    }
    x
}

/// Volume of the embedded simplex.
pub const SIMPLEX_VOLUME: f64 = 1.0 / 3.0;

/// Hull volume of the cloud as a fraction of the simplex volume.
pub fn hull_volume_fraction(cloud: &BoundaryCloud) -> Result<f64> {
    Ok(convex_hull_export(cloud)?.volume() / SIMPLEX_VOLUME)
}
