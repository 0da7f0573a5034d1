//! Hecke modules on blocks, Verdier duality, KLV polynomials and transition matrices.

mod checks;
mod klv;
mod transition;
mod module;
mod pairing;
mod verdier;

pub use checks::{
    block_checks, check_dual_max_column, check_generic_row, check_inverse_transpose,
    check_one_between, check_pairing, check_parity_domination, compute_block, compute_lambda,
    lambda_checks, BlockComputation, CheckName, CheckOutcome, LambdaComputation,
};
pub use klv::{
    check_klv, compute_side, compute_twisted_klv, compute_untwisted_klv, solve_klv, KLVTable,
    SideComputation,
};
pub use module::{check_duality, HeckeElem, HeckeModule, Vector};
pub use pairing::{
    irreducible_whit, pairing_eval, sheaf_element, whittaker_normalize, whittaker_sign,
};
pub use transition::{
    integer_inverse, transition_matrices, whit_sign, IntMatrix, TransitionKind, TransitionMatrix,
    Transitions,
};
pub use verdier::{apply_verdier, check_verdier, verdier_matrix, DualityMatrix};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("IncompleteTable: {0}")]
    IncompleteTable(String),
    #[error("BlockMismatch: {0}")]
    BlockMismatch(String),
    #[error("quadrel violated at ({kappa}, {xi})")]
    QuadRel { kappa: String, xi: String },
    #[error("eigenvalue law violated at ({kappa}, {xi})")]
    Eigen { kappa: String, xi: String },
    #[error("NonInvolutive: {0}")]
    NonInvolutive(String),
    #[error("NotEquivariant: Verdier dual does not commute with T̂ at {0}")]
    NotEquivariant(String),
    #[error("DegreeViolation: {0}")]
    DegreeViolation(String),
    #[error("KLV structure violated: {0}")]
    KlvStructure(String),
    #[error("NotThetaFixed: {0}")]
    NotThetaFixed(String),
    #[error("NotInvertible: {0}")]
    NotInvertible(String),
    #[error("Underdetermined: {0}")]
    Underdetermined(String),
    #[error("duality equivariance violated at ({kappa}, {xi1}, {xi2})")]
    Duality {
        kappa: String,
        xi1: String,
        xi2: String,
    },
}
