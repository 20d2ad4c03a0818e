//! Exact simulation of the Ising spin-star dephasing channel.
//!
//! A central qubit coupled by Ising interactions to a thermal bath of N
//! non-interacting spins realizes an exactly solvable dephasing channel.
//! This crate builds the channel (partition function, coherence factor,
//! Kraus operators, joint system-reference state) and evaluates its
//! classical, quantum, and entanglement-assisted capacities in closed
//! form, alongside brute-force oracles that recompute every analytic
//! quantity by direct 2^N enumeration and dense eigendecomposition.
//!
//! The crate is organized around the scalar that controls everything:
//! the coherence ratio `|Pi_N(t)|/Z`, evaluated in the log domain so
//! baths of hundreds of spins are no harder than one.
//!
//! * [`numerics`]: small Hermitian eigensolver and entropy functions.
//! * [`model`]: the channel itself, both product-form and brute-force.
//! * [`capacity`]: the capacity formulas and their cross-checks.
//! * [`ensemble`]: seeded random-bath averages and limiting cases.

pub mod capacity;
pub mod ensemble;
pub mod error;
pub mod model;
pub mod numerics;

pub use capacity::{
    appendix_cross_check, capacity_point, chi_eigenvalues, classical_capacity,
    entanglement_assisted_classical, entanglement_assisted_quantum, entanglement_cost,
    limited_entanglement_capacity, limited_entanglement_from_ratio, quantum_capacity,
    quantum_capacity_from_ratio, theta_from_budget, AppendixTerms, CapacityPoint,
    EntanglementBudget,
};
pub use ensemble::{
    ensemble_average, equal_coupling_coherence, low_temperature_saturation_check, model_rng,
    recurrence_period, sample_random_model, short_time_flatness_check, EnsembleConfig,
    EnsembleResult,
};
pub use error::{Error, Result};
pub use model::{
    apply_channel, coherence_factor, coherence_factor_bruteforce, joint_state, kraus_set,
    log_partition_function, partition_function, CoherenceFactor, KrausOperator, KrausSet,
    ModelSpec, BRUTE_FORCE_MAX_BATH,
};
pub use numerics::{
    binary_entropy, eigenvalues_hermitian, von_neumann_entropy, HermitianOperator, Spectrum,
};

/// Complex scalar used throughout (re-exported from `num-complex`).
pub use num_complex::Complex64;
