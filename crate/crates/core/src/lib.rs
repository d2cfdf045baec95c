//! Photon-vacuum-mediated entanglement between two honeycomb-lattice layers
//! in a planar microcavity.
//!
//! The crate computes the equal-time cavity photon propagator, the
//! second-order two-layer density matrix it generates, and the entanglement
//! measures of that state (von Neumann entropy of the reduced layers,
//! mutual information, purity, Wootters concurrence), together with the
//! closed-form coefficient block that determines all of them.
//!
//! Every closed form is backed by an independent brute-force oracle in
//! [`oracle`]: the density matrix against a direct operator-algebra
//! assembly, the concurrence against the numeric spin-flip spectrum, the
//! band algebra against its defining identities. [`sweep`] reproduces the
//! reference figure datasets as CSV; [`config`] parses run configurations
//! for the command-line front end.

// validation guards are written `!(x > 0.0)` on purpose: unlike `x <= 0.0`
// they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod band_ops;
pub mod cavity;
pub mod chi;
pub mod concurrence;
pub mod config;
pub mod constants;
pub mod density;
pub mod electron;
pub mod entropy;
pub mod error;
pub mod material;
pub mod oracle;
pub mod sweep;

pub use cavity::CavityGeometry;
pub use chi::{band_energies, ChiPair};
pub use concurrence::{
    concurrence_closed_form, concurrence_from_coefficients, concurrence_identical,
    concurrence_report, saturation_threshold, spin_flip_eigen_sqrts, spin_flip_eigenvalues,
    wootters_concurrence, ConcurrenceReport,
};
pub use config::{parse_config, RunConfig};
pub use density::{
    admissibility, compute_coefficients, compute_coefficients_momenta,
    compute_coefficients_normalized, purity, reduce, reduced_from_coefficients, rho_total,
    Admissibility, DensityMatrix, DensityMatrixRecord, LayerConfig, PropagatorMomenta,
    RhoCoefficients,
};
pub use electron::{ElectronState, Sign};
pub use entropy::{
    entropy_asymmetry, entropy_exact, entropy_expansion, entropy_rate, entropy_report,
    mutual_information, EntropyReport,
};
pub use error::{Error, Result};
pub use material::{builtin_presets, preset, Material, MaterialPreset, PresetSource};
pub use oracle::{
    central_difference, dyson_rho, eigen_oracle, richardson_derivative, run_verification,
    sample_config, CheckKind, CheckResult, SampledConfig, VerificationReport,
};
pub use sweep::{figure_recipe, figure_verdicts, recipe_names, render_csv, run_sweep, SweepSpec};
