use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("matrix is not Hermitian (‖A − A*‖_F = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not unitary (‖U*U − I‖_F = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is not a rotation (‖RᵗR − I‖_F = {orthogonality_defect:e}, det = {det})")]
    NotRotation { orthogonality_defect: f64, det: f64 },

    #[error("Choi matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("map is not unital (‖Φ(I) − I‖_F = {defect:e})")]
    NotUnital { defect: f64 },

    #[error("map is not trace preserving (max |tr Φ(E_ij) − δ_ij| = {defect:e})")]
    NotTracePreserving { defect: f64 },

    #[error("map is not Hermitian preserving (‖C − C*‖_F = {defect:e})")]
    NotHermitianPreserving { defect: f64 },

    #[error("map is not a channel (smallest Choi eigenvalue {min_eigenvalue})")]
    NotChannel { min_eigenvalue: f64 },

    #[error("verification residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualExceeded { residual: f64, tol: f64 },

    #[error("weights are not majorized: prefix {prefix} sums to {lhs} > {rhs}")]
    NotMajorized { prefix: usize, lhs: f64, rhs: f64 },

    #[error("vector totals differ: {lhs} vs {rhs}")]
    SumMismatch { lhs: f64, rhs: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("scaling lies outside the tetrahedron (witness {witness:?})")]
    NotInTetrahedron { witness: [f64; 4] },

    #[error("scaling lies outside the ordered cone (1 + d3 − d1 − d2 = {slack})")]
    NotInCone { slack: f64 },

    #[error("scaling is not ordered as d1 ≥ d2 ≥ |d3|: {d:?}")]
    OrderingViolated { d: [f64; 3] },

    #[error("bad coefficients: {0}")]
    BadCoefficients(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}
