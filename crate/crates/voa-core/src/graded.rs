//! Graded vectors over the level-truncated basis of a model.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Map from level to per-level data.
pub type LevelMap<T> = BTreeMap<u32, T>;

/// Vector in a graded space, stored per level as dense coordinates
/// relative to the model basis of that level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct GradedVector {
    pub levels: LevelMap<Vec<Scalar>>,
}

impl GradedVector {
    pub fn zero() -> Self {
        GradedVector {
            levels: BTreeMap::new(),
        }
    }

    pub fn basis(level: u32, idx: usize, dim: usize) -> Self {
        let mut coords = vec![Scalar::zero(); dim];
        coords[idx] = Scalar::one();
        let mut levels = BTreeMap::new();
        levels.insert(level, coords);
        GradedVector { levels }
    }

    pub fn is_zero(&self) -> bool {
        self.levels
            .values()
            .all(|c| c.iter().all(|x| x.is_zero()))
    }

    /// The single level of a homogeneous vector; None for 0 or mixed.
    pub fn homogeneous_level(&self) -> Option<u32> {
        let mut found = None;
        for (&lvl, coords) in &self.levels {
            if coords.iter().any(|x| !x.is_zero()) {
                if found.is_some() {
                    return None;
                }
                found = Some(lvl);
            }
        }
        found
    }

    pub fn coords(&self, level: u32) -> Option<&Vec<Scalar>> {
        self.levels.get(&level)
    }

    pub fn add_term(&mut self, level: u32, idx: usize, dim: usize, v: Scalar) {
        if v.is_zero() {
            return;
        }
        let coords = self
            .levels
            .entry(level)
            .or_insert_with(|| vec![Scalar::zero(); dim]);
        coords[idx] = &coords[idx] + &v;
    }

    pub fn add_scaled(&mut self, other: &GradedVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (&lvl, coords) in &other.levels {
            let dst = self
                .levels
                .entry(lvl)
                .or_insert_with(|| vec![Scalar::zero(); coords.len()]);
            assert_eq!(dst.len(), coords.len(), "dimension mismatch");
            for (d, s) in dst.iter_mut().zip(coords) {
                *d = &*d + &(c * s);
            }
        }
    }

    pub fn scale(&mut self, c: &Scalar) {
        for coords in self.levels.values_mut() {
            for x in coords.iter_mut() {
                *x = &*x * c;
            }
        }
    }

    pub fn prune(&mut self) {
        self.levels
            .retain(|_, coords| coords.iter().any(|x| !x.is_zero()));
    }

    /// Iterate nonzero terms as (level, index, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (u32, usize, &Scalar)> {
        self.levels.iter().flat_map(|(&lvl, coords)| {
            coords
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(move |(i, x)| (lvl, i, x))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_scale_prune() {
        let mut v = GradedVector::basis(2, 0, 3);
        let w = GradedVector::basis(2, 1, 3);
        v.add_scaled(&w, &Scalar::from_int(2));
        v.add_term(1, 0, 1, Scalar::from_int(5));
        assert_eq!(v.homogeneous_level(), None);
        v.add_term(1, 0, 1, Scalar::from_int(-5));
        v.prune();
        assert_eq!(v.homogeneous_level(), Some(2));
        assert_eq!(
            v.coords(2).unwrap(),
            &vec![Scalar::one(), Scalar::from_int(2), Scalar::zero()]
        );
    }
}
