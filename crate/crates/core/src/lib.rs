//! Entanglability of energy-incoherent multi-qubit states under thermal
//! operations.
//!
//! The crate is organized bottom-up:
//!
//! - [`context`]: Gibbs contexts, population vectors, β-orderings and the
//!   degenerate-subspace structure of non-interacting Hamiltonians.
//! - [`majorization`]: thermomajorization curves, the preorder they induce
//!   and future thermal cones.
//! - [`entangle`]: the two-qubit witness, negativity, the single-extreme-point
//!   entanglability test and its brute-force oracle, critical temperatures,
//!   and qubit–qutrit witnesses.
//! - [`geometry`]: seeded Monte Carlo volumes, the bisection boundary of the
//!   thermally non-entanglable set and convex-hull export.
//! - [`dynamics`]: density matrices, the Jaynes–Cummings preconditioning
//!   protocol, two-level partial thermalizations and the catalysis check.

pub mod context;
pub mod dynamics;
pub mod entangle;
pub mod error;
pub mod geometry;
pub mod majorization;

pub use context::{
    beta_order, decompose_subspaces, make_context, Beta, BetaOrdering, GibbsContext, PopVector,
    StateSpec, SubspaceDecomposition,
};
pub use dynamics::{
    apply_schedule, apply_subspace_rotation, jc_protocol, mtp_entangle_search, verify_catalysis, CatalysisReport,
    DensityMatrix, InitialState, JcConfig, JcResult, MtpResult, SearchStrategy, ThermalizationSchedule,
    ThermalizationStep,
};
pub use entangle::{
    critical_temps_general, critical_temps_thermal, is_subspace_entanglable, is_thermally_entanglable, max_negativity,
    max_negativity_over_cone, min_ppt_eigenvalue, pi_star_point, qubit_qutrit_witnesses, thermal_witness,
    thermally_entanglable, tne_bruteforce, witness_f, CriticalTemps, WitnessReport, TAU_F,
};
pub use error::{Error, Result};
pub use geometry::{
    boundary_grid, convex_hull_export, ne_boundary_p3, sample_simplex, tne_boundary, volume_of, BoundaryCloud, Mesh,
    SetId, VolumeEstimate,
};
pub use majorization::{cone_contains, curve, extreme_point, future_cone, thermo_majorizes, ThermalCone, ThermoCurve};
