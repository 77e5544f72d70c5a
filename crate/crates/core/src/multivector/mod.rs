//! Antisymmetric contravariant and covariant tensor fields on a chart.

mod bivector;
mod chart;
mod tensor;

pub use bivector::{
    anchor, anchor_covector, anchor_field, bivector_matrix, bivector_matrix_exact, pair_bivector,
    pair_covectors, rank_at, rank_at_exact, schouten_self_bracket,
};
pub use chart::{Chart, Interval};
#[allow(unused_imports)]
pub(crate) use tensor::permutations;
pub use tensor::{
    levi_civita, AltTensor, Contravariant, Covariant, DifferentialForm, MultivectorField, Variance,
};
