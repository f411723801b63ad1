pub mod heisenberg;
pub mod lattice;
pub mod sl2;
pub mod tensor;
pub mod virasoro;

use crate::engine::build_model;
use crate::model::VOAModel;
use crate::scalar::Scalar;

/// Virasoro model L(c, 0) truncated at the cutoff.
pub fn virasoro(c: Scalar, cutoff: u32) -> VOAModel {
    build_model(&virasoro::VirasoroEngine::new(c), cutoff)
}

/// Rank-one Heisenberg model truncated at the cutoff.
pub fn heisenberg(cutoff: u32) -> VOAModel {
    build_model(&heisenberg::HeisenbergEngine::new(), cutoff)
}

/// Affine sl2 at positive integer level k, truncated at the cutoff.
pub fn sl2(k: i64, cutoff: u32) -> VOAModel {
    build_model(&sl2::Sl2Engine::new(k), cutoff)
}

/// Even rank-one lattice model with <alpha, alpha> = norm.
pub fn lattice(norm: i64, cutoff: u32) -> VOAModel {
    build_model(&lattice::LatticeEngine::new(norm), cutoff)
}
