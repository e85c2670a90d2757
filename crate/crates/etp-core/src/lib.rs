//! Quantum interaction of free electrons with one or two optical modes,
//! including the second-order (two-photon) processes.
//!
//! The crate models the joint electron-photon state on truncated energy
//! ladders, computes the first- and second-order quantum coupling constants
//! from sampled near-field profiles, evolves states under the scattering
//! operator by two independent routes (closed-form coefficient series and a
//! dense matrix-exponential oracle), and extracts spectra, coincidence
//! tables, entanglement measures, Kapitza-Dirac diffraction patterns and
//! two-mode (nonlinear-Compton) photon statistics.
//!
//! The two evolution routes are deliberately redundant: the series and the
//! matrix exponential share no numerical machinery, so agreement between
//! them validates both.

pub mod bessel;
pub mod constants;
pub mod coupling;
mod dd;
pub mod error;
pub mod expm;
pub mod linalg;
pub mod observables;
pub mod oracle;
pub mod ponderomotive;
pub mod quadrature;
pub mod series;
pub mod state;

pub use coupling::{
    assemble_coupling_set, first_order_coupling, ponderomotive_coupling, second_order_coupling,
    CouplingSet, FieldProfile,
};
pub use error::{Error, Result};
pub use observables::{
    coincidence_table, electron_spectrum, photon_joint_distribution, purity, reduced_density,
    von_neumann_entropy, CoincidenceTable, DensityMatrix, Subsystem,
};
pub use oracle::{
    build_single_mode_generator, build_two_mode_generator, evolve, evolve_split, Evolved,
    Generator,
};
pub use ponderomotive::{kd_eta, kd_momentum_distribution, KdDistribution, StandingWaveParams};
pub use series::{
    coherent_coefficients, compton_coefficients, strong_field_coefficients, vacuum_coefficients,
    SeriesControl,
};
pub use state::{
    coherent_joint_state, coherent_two_mode_state, electron_kinematics, fock_joint_state,
    vacuum_joint_state, vacuum_two_mode_state, ElectronParams, JointState, TruncationConfig,
};
