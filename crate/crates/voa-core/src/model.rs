//! Level-truncated model: graded basis, exact Gram matrices, and the
//! structure-constant table over the admissible mode window.

use crate::error::VoaError;
use crate::graded::GradedVector;
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type ModeMatrix = SparseMatrix;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub name: String,
    pub weight: u32,
    /// generator index of the adjoint field
    pub adjoint: usize,
    pub vector: GradedVector,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureEntry {
    pub a: u32,
    pub n: i64,
    pub b: u32,
    pub out: Vec<(u32, Scalar)>,
}

/// Serialization image of a model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub name: String,
    pub cutoff: u32,
    pub central_charge: Scalar,
    pub level_dims: Vec<usize>,
    pub basis_labels: Vec<Vec<String>>,
    /// per level, row-major
    pub gram: Vec<Vec<Scalar>>,
    /// sorted by (a, n, b); only nonzero products
    pub structure: Vec<StructureEntry>,
    pub conformal_vector: GradedVector,
    pub generators: Vec<GeneratorInfo>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct VOAModel {
    pub name: String,
    pub cutoff: u32,
    pub central_charge: Scalar,
    pub level_dims: Vec<usize>,
    pub basis_labels: Vec<Vec<String>>,
    pub gram: Vec<SparseMatrix>,
    pub table: BTreeMap<(u32, i64, u32), Vec<(u32, Scalar)>>,
    pub conformal_vector: GradedVector,
    pub generators: Vec<GeneratorInfo>,
    pub metadata: BTreeMap<String, String>,
    offsets: Vec<u32>,
}

pub const FORMAT_VERSION: u32 = 1;

impl VOAModel {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        name: String,
        cutoff: u32,
        central_charge: Scalar,
        level_dims: Vec<usize>,
        basis_labels: Vec<Vec<String>>,
        gram: Vec<SparseMatrix>,
        table: BTreeMap<(u32, i64, u32), Vec<(u32, Scalar)>>,
        conformal_vector: GradedVector,
        generators: Vec<GeneratorInfo>,
        metadata: BTreeMap<String, String>,
    ) -> Self {
        let offsets = Self::offsets_from_dims(&level_dims);
        VOAModel {
            name,
            cutoff,
            central_charge,
            level_dims,
            basis_labels,
            gram,
            table,
            conformal_vector,
            generators,
            metadata,
            offsets,
        }
    }

    fn offsets_from_dims(dims: &[usize]) -> Vec<u32> {
        let mut o = vec![0u32];
        for d in dims {
            o.push(o.last().unwrap() + *d as u32);
        }
        o
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap() as usize
    }

    pub fn global_index(&self, level: u32, idx: usize) -> u32 {
        self.offsets[level as usize] + idx as u32
    }

    pub fn split_global(&self, g: u32) -> (u32, usize) {
        let l = self
            .offsets
            .iter()
            .rposition(|&o| o <= g)
            .expect("offsets start at 0")
            .min(self.level_dims.len() - 1);
        debug_assert!((g - self.offsets[l]) < self.level_dims[l] as u32);
        (l as u32, (g - self.offsets[l]) as usize)
    }

    pub fn dim(&self, level: u32) -> usize {
        self.level_dims
            .get(level as usize)
            .copied()
            .unwrap_or(0)
    }

    pub fn basis_vector(&self, level: u32, idx: usize) -> GradedVector {
        GradedVector::basis(level, idx, self.dim(level))
    }

    pub fn vacuum(&self) -> GradedVector {
        self.basis_vector(0, 0)
    }

    /// Whether a_(n) b lands inside the truncation window for basis
    /// vectors at the given levels.
    pub fn in_window(&self, la: u32, n: i64, lb: u32) -> bool {
        let target = la as i64 + lb as i64 - n - 1;
        (0..=self.cutoff as i64).contains(&target)
    }

    /// Structure constants of a_(n) b for basis vectors (original mode
    /// convention).  None when the product leaves the window.
    pub fn product_basis(
        &self,
        la: u32,
        ia: usize,
        n: i64,
        lb: u32,
        ib: usize,
    ) -> Option<GradedVector> {
        if !self.in_window(la, n, lb) {
            return None;
        }
        let target = (la as i64 + lb as i64 - n - 1) as u32;
        let a = self.global_index(la, ia);
        let b = self.global_index(lb, ib);
        let mut out = GradedVector::zero();
        if let Some(entries) = self.table.get(&(a, n, b)) {
            let dim = self.dim(target);
            for (i, v) in entries {
                out.add_term(target, *i as usize, dim, v.clone());
            }
        }
        Some(out)
    }

    /// Bilinear extension of the product to graded vectors.
    pub fn product(
        &self,
        a: &GradedVector,
        n: i64,
        b: &GradedVector,
    ) -> Result<GradedVector, VoaError> {
        let mut out = GradedVector::zero();
        for (la, ia, ca) in a.terms() {
            for (lb, ib, cb) in b.terms() {
                let target = la as i64 + lb as i64 - n - 1;
                if target < 0 {
                    continue;
                }
                match self.product_basis(la, ia, n, lb, ib) {
                    None => {
                        return Err(VoaError::OutOfWindow {
                            la,
                            n,
                            lb,
                            cutoff: self.cutoff,
                        })
                    }
                    Some(p) => {
                        let c = ca * cb;
                        out.add_scaled(&p, &c);
                    }
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Matrix of a_(n) from one source level (original mode convention).
    /// Requires homogeneous a.
    pub fn mode_matrix(
        &self,
        a: &GradedVector,
        n: i64,
        source_level: u32,
    ) -> Result<SparseMatrix, VoaError> {
        let wa = a
            .homogeneous_level()
            .ok_or(VoaError::NotHomogeneous)?;
        let target = wa as i64 + source_level as i64 - n - 1;
        if !(0..=self.cutoff as i64).contains(&target) {
            return Err(VoaError::OutOfWindow {
                la: wa,
                n,
                lb: source_level,
                cutoff: self.cutoff,
            });
        }
        let mut m =
            SparseMatrix::zeros(self.dim(target as u32), self.dim(source_level));
        for ib in 0..self.dim(source_level) {
            let b = self.basis_vector(source_level, ib);
            let col = self.product(a, n, &b)?;
            if let Some(coords) = col.coords(target as u32) {
                for (i, v) in coords.iter().enumerate() {
                    if !v.is_zero() {
                        m.set(i, ib, v.clone());
                    }
                }
            }
        }
        Ok(m)
    }

    /// Matrix of the homogeneous mode a_m = a_(m + wt a - 1).
    pub fn hom_mode_matrix(
        &self,
        a: &GradedVector,
        m: i64,
        source_level: u32,
    ) -> Result<SparseMatrix, VoaError> {
        let wa = a
            .homogeneous_level()
            .ok_or(VoaError::NotHomogeneous)?;
        self.mode_matrix(a, m + wa as i64 - 1, source_level)
    }

    /// Matrix of L_n = nu_(n+1) from one source level.
    pub fn l_matrix(&self, n: i64, source_level: u32) -> Result<SparseMatrix, VoaError> {
        self.mode_matrix(&self.conformal_vector.clone(), n + 1, source_level)
    }

    /// L_n applied to a graded vector.
    pub fn apply_l(&self, n: i64, v: &GradedVector) -> Result<GradedVector, VoaError> {
        self.product(&self.conformal_vector.clone(), n + 1, v)
    }

    /// Scalar product from the stored Gram matrices.
    pub fn scalar_product(&self, u: &GradedVector, v: &GradedVector) -> Scalar {
        let mut acc = Scalar::zero();
        for (&l, cu) in &u.levels {
            if let Some(cv) = v.coords(l) {
                let g = &self.gram[l as usize];
                for (i, a) in cu.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (&j, gij) in g.row(i) {
                        acc += a * &(gij * &cv[j]);
                    }
                }
            }
        }
        acc
    }

    pub fn norm_sq(&self, v: &GradedVector) -> Scalar {
        self.scalar_product(v, v)
    }

    /// Graded dimensions up to max_level.
    pub fn character(&self, max_level: u32) -> Vec<usize> {
        (0..=max_level.min(self.cutoff) as usize)
            .map(|l| self.level_dims[l])
            .collect()
    }

    pub fn to_file(&self) -> ModelFile {
        let structure: Vec<StructureEntry> = self
            .table
            .iter()
            .map(|(&(a, n, b), out)| StructureEntry {
                a,
                n,
                b,
                out: out.clone(),
            })
            .collect();
        let gram: Vec<Vec<Scalar>> = self
            .gram
            .iter()
            .map(|g| {
                let d = g.nrows;
                let mut flat = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        flat.push(g.get(i, j));
                    }
                }
                flat
            })
            .collect();
        ModelFile {
            format_version: FORMAT_VERSION,
            name: self.name.clone(),
            cutoff: self.cutoff,
            central_charge: self.central_charge.clone(),
            level_dims: self.level_dims.clone(),
            basis_labels: self.basis_labels.clone(),
            gram,
            structure,
            conformal_vector: self.conformal_vector.clone(),
            generators: self.generators.clone(),
            metadata: self.metadata.clone(),
        }
    }

    pub fn from_file(f: ModelFile) -> Result<Self, VoaError> {
        if f.format_version != FORMAT_VERSION {
            return Err(VoaError::Format(format!(
                "unsupported format_version {}",
                f.format_version
            )));
        }
        if f.level_dims.len() != f.cutoff as usize + 1 {
            return Err(VoaError::Format(
                "level_dims must have cutoff+1 entries".into(),
            ));
        }
        if f.basis_labels.len() != f.level_dims.len()
            || f.basis_labels
                .iter()
                .zip(&f.level_dims)
                .any(|(ls, &d)| ls.len() != d)
        {
            return Err(VoaError::Format("basis_labels shape mismatch".into()));
        }
        if f.gram.len() != f.level_dims.len() {
            return Err(VoaError::Format("gram must cover every level".into()));
        }
        let mut gram = Vec::new();
        for (l, flat) in f.gram.iter().enumerate() {
            let d = f.level_dims[l];
            if flat.len() != d * d {
                return Err(VoaError::Format(format!(
                    "gram at level {l} is not {d}x{d}"
                )));
            }
            let mut g = SparseMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    let v = flat[i * d + j].clone();
                    if !v.is_zero() {
                        g.set(i, j, v);
                    }
                }
            }
            gram.push(g);
        }
        let total: usize = f.level_dims.iter().sum();
        let mut table = BTreeMap::new();
        for e in &f.structure {
            if e.a as usize >= total || e.b as usize >= total {
                return Err(VoaError::Format("structure index out of range".into()));
            }
            table.insert((e.a, e.n, e.b), e.out.clone());
        }
        Ok(VOAModel::assemble(
            f.name,
            f.cutoff,
            f.central_charge,
            f.level_dims,
            f.basis_labels,
            gram,
            table,
            f.conformal_vector,
            f.generators,
            f.metadata,
        ))
    }

    pub fn to_canonical_json(&self) -> String {
        crate::json::to_canonical_string(&self.to_file())
    }

    pub fn fingerprint(&self) -> String {
        crate::json::sha256_hex(self.to_canonical_json().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_global_roundtrip() {
        let dims = vec![1usize, 0, 1, 1, 2];
        let m = VOAModel::assemble(
            "t".into(),
            4,
            Scalar::one(),
            dims.clone(),
            vec![
                vec!["1".into()],
                vec![],
                vec!["a".into()],
                vec!["b".into()],
                vec!["c".into(), "d".into()],
            ],
            (0..5).map(|l| SparseMatrix::identity(dims[l])).collect(),
            BTreeMap::new(),
            GradedVector::zero(),
            vec![],
            BTreeMap::new(),
        );
        assert_eq!(m.total_dim(), 5);
        for l in [0u32, 2, 3, 4] {
            for i in 0..m.dim(l) {
                let g = m.global_index(l, i);
                assert_eq!(m.split_global(g), (l, i));
            }
        }
    }
}
