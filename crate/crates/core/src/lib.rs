//! Simulation of driven–dissipative Rydberg-atom systems under unconventional
//! Rydberg pumping: model construction, Lindblad integration, steady-state
//! analysis and a registry of reproducible experiments.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod models;
pub mod observables;
pub mod parallel;

pub use dynamics::{
    evolve_master, evolve_unitary, hamiltonian_at, lindblad_rhs, rotating_frame, HamiltonianTerm, IntegratorConfig,
    LindbladChannel, Method, Trajectory,
};
pub use error::{Result, SimError};
pub use hilbert::{kron, ComplexOperator, DensityMatrix, LevelScheme, ProductBasis, PureState};
pub use observables::{
    fidelity_sqrt, liouvillian_matrix, overlap_amplitude, population, steady_states, trajectory_deviation,
    ObservableSpec, SteadyStateReport,
};
