//! Fixtures shared by the benchmarks.

use foliation_core::symbolic::parse_polynomial;
use foliation_core::{
    fold_model, lefschetz_model, GridAxis, GridSpec, PoissonStructure, ScalarField,
};

pub fn lefschetz() -> PoissonStructure {
    lefschetz_model(ScalarField::one(4)).expect("model builds")
}

pub fn fold_with_bump() -> PoissonStructure {
    let k = parse_polynomial("1 + x1^2", 4, &["theta", "x1", "x2", "x3"]).expect("parses");
    fold_model(ScalarField::exact(k), true).expect("model builds")
}

/// `nodes` points per axis on `[-1, 1]^4`.
pub fn cube_grid(nodes: usize) -> GridSpec {
    GridSpec::new(vec![GridAxis::closed(-1.0, 1.0, nodes); 4])
}
