//! Unital qubit channels: Choi spectra, canonical form, local unitary
//! equivalence, mixed-unitary decompositions and Bloch-ellipsoid geometry.
//!
//! ```
//! use unital_core::{canonicalize, QubitChannel, DEFAULT_TOL};
//!
//! let ch = QubitChannel::depolarizing();
//! let can = canonicalize(&ch, DEFAULT_TOL).unwrap();
//! assert!(can.spectrum.lambdas.iter().all(|l| (l - 0.5).abs() < 1e-12));
//! ```

pub mod bloch;
pub mod canonical;
pub mod channel;
pub mod error;
pub mod json;
pub mod linalg;
pub mod mixed_unitary;

pub use bloch::{
    is_channel_scaling, ordered_cone_decomposition, ordered_cone_test, scaling_equivalent,
    scaling_from_spectrum, spectrum_from_scaling, tetra_coordinates, BlochScaling,
    ConeDecomposition, ScalingCheck, TetraCoordinates,
};
pub use canonical::{
    canonicalize, pauli_permute, unitarily_equivalent, Canonicalization, Equivalence,
    PauliPermutation,
};
pub use channel::{
    from_choi, random_unital_channel, random_unitary, BlochAffineForm, ChoiForm, ChoiSpectrum,
    KrausForm, PauliMixingForm, QubitChannel, ValidationReport,
};
pub use error::{Error, Result};
pub use linalg::{
    adjoint_action, hermitian_eigen4, kron, su2_from_so3, Complex, ComplexMatrix2, ComplexMatrix4,
    RealMatrix3, DEFAULT_TOL,
};
pub use mixed_unitary::{
    average_of_four, decompose, majorizes, pinch_chain, rebalance_pair, solve_phases, verify,
    PinchStep, UnitaryDecomposition, VerificationReport, WeightVector,
};
