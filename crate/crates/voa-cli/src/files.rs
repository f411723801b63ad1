//! Model and generator files.  Model files carry a content fingerprint
//! over the canonical JSON of the model body; readers recompute and
//! compare it before trusting the content.

use serde::{Deserialize, Serialize};
use std::path::Path;

use voa_core::model::{ModelFile, VOAModel};
use voa_core::scalar::Scalar;
use voa_core::sparse::SparseMatrix;
use voa_core::GradedVector;

pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
pub struct ModelEnvelope {
    pub fingerprint: String,
    pub model: ModelFile,
}

pub fn write_model(path: &Path, model: &VOAModel) -> Result<(), InputError> {
    let env = ModelEnvelope {
        fingerprint: model.fingerprint(),
        model: model.to_file(),
    };
    std::fs::write(path, voa_core::json::to_canonical_string(&env))?;
    Ok(())
}

pub fn read_model(path: &Path) -> Result<VOAModel, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let env: ModelEnvelope = serde_json::from_str(&text)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let model = VOAModel::from_file(env.model)?;
    let actual = model.fingerprint();
    if actual != env.fingerprint {
        return Err(InputError(format!(
            "{}: fingerprint mismatch (file says {}, content hashes to {actual})",
            path.display(),
            env.fingerprint
        )));
    }
    Ok(model)
}

/// Generator input for the subalgebra command.  `vectors` feeds close and
/// coset; `exp_zero_modes` names generator fields whose zero-mode
/// exponentials act as automorphisms; `automorphisms` gives explicit
/// per-level dense matrices.
#[derive(Serialize, Deserialize, Default)]
pub struct GeneratorsFile {
    #[serde(default)]
    pub vectors: Vec<GradedVector>,
    #[serde(default)]
    pub exp_zero_modes: Vec<String>,
    #[serde(default)]
    pub automorphisms: Vec<Vec<Vec<Vec<Scalar>>>>,
}

pub fn read_generators(path: &Path) -> Result<GeneratorsFile, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn dense_to_sparse(rows: &[Vec<Scalar>], ncols: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(rows.len(), ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, v.clone());
            }
        }
    }
    m
}

pub fn sparse_to_dense(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    (0..m.nrows)
        .map(|i| (0..m.ncols).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Output of the subalgebra command: the subspace in parent coordinates
/// plus its projected conformal data.
#[derive(Serialize)]
pub struct SubalgebraFile {
    pub parent: String,
    pub parent_fingerprint: String,
    pub op: String,
    pub dims: Vec<usize>,
    pub basis: Vec<Vec<Vec<Scalar>>>,
    pub conformal_vector: GradedVector,
    pub central_charge: Scalar,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub automorphism_notes: Vec<String>,
}
