//! Singular rank-2 Poisson structures on 4-dimensional charts: exact
//! polynomial tensor calculus, a Casimir-driven bracket builder, local
//! models at Lefschetz and fold singularities, leaf geometry, Hamiltonian
//! flows and the contrasting near-symplectic form.

pub mod bracket;
pub mod error;
pub mod leaf;
pub mod linalg;
pub mod models;
pub mod multivector;
pub mod near_symplectic;
pub mod report;
pub mod sampling;
pub mod symbolic;

pub use bracket::{
    bracket, build_flaschka_ratiu, compare_conformal, conformal_rescale, hamiltonian_vector_field,
    is_casimir, jacobiator, verify_jacobi, ConformalVerdict, PoissonStructure, Verdict,
};
pub use error::{Error, Result};
pub use leaf::{
    area_form_ratio, covector_lift, integrate_hamiltonian, leaf_form, leaf_frame, scaling_fit,
    ApproachPath, LeafFrame, LeafTrajectory, ScalingFit, StepPolicy,
};
pub use models::{
    classify_singular_set, fold_model, involution_poisson_check, lefschetz_model, sl2_check,
    InvolutionReport, ModelDescriptor, ModelKind, SingularSetReport,
};
pub use multivector::{Chart, DifferentialForm, Interval, MultivectorField};
pub use near_symplectic::{
    build_near_symplectic, check_near_symplectic, contrast_report, ContrastReport,
    NearSymplecticForm, NearSymplecticReport,
};
pub use sampling::{GridAxis, GridSpec};
pub use symbolic::{Polynomial, Rational, ScalarField};
