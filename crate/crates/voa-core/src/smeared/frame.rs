//! Orthonormal frames for the level spaces of a unitary model.

use nalgebra::{DMatrix, DVector};

use crate::error::VoaError;
use crate::model::VOAModel;
use crate::sparse::SparseMatrix;
use crate::GradedVector;

/// Per-level change of basis that turns each Gram matrix into the identity.
///
/// With G = Q diag(lam) Q^T, frame coordinates are x' = diag(lam)^{1/2} Q^T x,
/// so the scalar product becomes the standard one and adjoints become
/// conjugate transposes.
pub struct OrthoFrame {
    pub dims: Vec<usize>,
    offsets: Vec<usize>,
    to_frame: Vec<DMatrix<f64>>,
    from_frame: Vec<DMatrix<f64>>,
}

fn dense_f64(m: &SparseMatrix) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows, m.ncols);
    for i in 0..m.nrows {
        for (&j, v) in m.row(i) {
            out[(i, j)] = v.to_f64();
        }
    }
    out
}

impl OrthoFrame {
    /// Requires every Gram matrix to be positive definite.
    pub fn new(model: &VOAModel) -> Result<Self, VoaError> {
        let mut dims = Vec::new();
        let mut offsets = Vec::new();
        let mut to_frame = Vec::new();
        let mut from_frame = Vec::new();
        let mut off = 0usize;
        for l in 0..=model.cutoff {
            let d = model.dim(l);
            dims.push(d);
            offsets.push(off);
            off += d;
            if d == 0 {
                to_frame.push(DMatrix::zeros(0, 0));
                from_frame.push(DMatrix::zeros(0, 0));
                continue;
            }
            let g = dense_f64(&model.gram[l as usize]);
            let eig = nalgebra::SymmetricEigen::new(g);
            let max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
            if eig.eigenvalues.iter().any(|&v| v <= 1e-9 * max.max(1.0)) {
                return Err(VoaError::Check(format!(
                    "Gram matrix at level {l} is not positive definite"
                )));
            }
            let q = eig.eigenvectors;
            let half: Vec<f64> = eig.eigenvalues.iter().map(|v| v.sqrt()).collect();
            let mut tf = q.transpose();
            for (i, h) in half.iter().enumerate() {
                for j in 0..d {
                    tf[(i, j)] *= h;
                }
            }
            let mut ff = q;
            for (j, h) in half.iter().enumerate() {
                for i in 0..d {
                    ff[(i, j)] /= h;
                }
            }
            to_frame.push(tf);
            from_frame.push(ff);
        }
        Ok(OrthoFrame {
            dims,
            offsets,
            to_frame,
            from_frame,
        })
    }

    pub fn total_dim(&self) -> usize {
        self.offsets.last().map_or(0, |o| o + self.dims.last().unwrap())
    }

    pub fn offset(&self, level: u32) -> usize {
        self.offsets[level as usize]
    }

    /// Global frame coordinates of an exact graded vector.
    pub fn vector(&self, v: &GradedVector) -> DVector<f64> {
        let mut out = DVector::zeros(self.total_dim());
        for (&l, coords) in &v.levels {
            let tf = &self.to_frame[l as usize];
            let x = DVector::from_iterator(coords.len(), coords.iter().map(|c| c.to_f64()));
            let y = tf * x;
            let off = self.offsets[l as usize];
            for (i, val) in y.iter().enumerate() {
                out[off + i] = *val;
            }
        }
        out
    }

    /// Frame-coordinate block of a level-to-level matrix.
    pub fn conjugate(&self, target: u32, source: u32, m: &SparseMatrix) -> DMatrix<f64> {
        &self.to_frame[target as usize] * dense_f64(m) * &self.from_frame[source as usize]
    }
}
