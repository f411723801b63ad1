//! Tensor product of two built models, assembled directly from the factor
//! structure tables: (a (x) b)_(n) (c (x) d) = sum_p (a_(p) c) (x)
//! (b_(n-1-p) d), with Kronecker Gram matrices.

use crate::graded::GradedVector;
use crate::model::{GeneratorInfo, VOAModel};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;
use std::collections::BTreeMap;

/// index of the tensor basis at one level: (left level, left idx, right
/// level, right idx), ordered by left level then the two indices
fn tensor_basis(a: &VOAModel, b: &VOAModel, level: u32) -> Vec<(u32, usize, u32, usize)> {
    let mut out = Vec::new();
    for l1 in 0..=level {
        let l2 = level - l1;
        for i1 in 0..a.dim(l1) {
            for i2 in 0..b.dim(l2) {
                out.push((l1, i1, l2, i2));
            }
        }
    }
    out
}

pub fn tensor(a: &VOAModel, b: &VOAModel, cutoff: u32) -> VOAModel {
    assert!(
        cutoff <= a.cutoff && cutoff <= b.cutoff,
        "tensor cutoff cannot exceed either factor"
    );
    let bases: Vec<Vec<(u32, usize, u32, usize)>> =
        (0..=cutoff).map(|l| tensor_basis(a, b, l)).collect();
    let level_dims: Vec<usize> = bases.iter().map(|v| v.len()).collect();
    let offsets: Vec<u32> = {
        let mut o = vec![0u32];
        for d in &level_dims {
            let last = *o.last().unwrap();
            o.push(last + *d as u32);
        }
        o
    };
    let pos_at: Vec<BTreeMap<(u32, usize, u32, usize), usize>> = bases
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, &k)| (k, i)).collect())
        .collect();

    let labels: Vec<Vec<String>> = bases
        .iter()
        .map(|v| {
            v.iter()
                .map(|&(l1, i1, l2, i2)| {
                    format!(
                        "{}|{}",
                        a.basis_labels[l1 as usize][i1], b.basis_labels[l2 as usize][i2]
                    )
                })
                .collect()
        })
        .collect();

    let mut gram = Vec::new();
    for base in &bases {
        let d = base.len();
        let mut g = SparseMatrix::zeros(d, d);
        for (i, &(l1, i1, l2, i2)) in base.iter().enumerate() {
            for (j, &(m1, j1, m2, j2)) in base.iter().enumerate() {
                if l1 != m1 || l2 != m2 {
                    continue;
                }
                let v = &a.gram[l1 as usize].get(i1, j1) * &b.gram[l2 as usize].get(i2, j2);
                if !v.is_zero() {
                    g.set(i, j, v);
                }
            }
        }
        gram.push(g);
    }

    let mut structure: BTreeMap<(u32, i64, u32), Vec<(u32, Scalar)>> = BTreeMap::new();
    for la in 0..=cutoff {
        for (ia, &(l1, i1, l2, i2)) in bases[la as usize].iter().enumerate() {
            let a_glob = offsets[la as usize] + ia as u32;
            for lb in 0..=cutoff {
                for (ib, &(m1, j1, m2, j2)) in bases[lb as usize].iter().enumerate() {
                    let b_glob = offsets[lb as usize] + ib as u32;
                    let n_hi = la as i64 + lb as i64 - 1;
                    for n in (n_hi - cutoff as i64)..=n_hi {
                        let target = (n_hi - n) as u32;
                        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                        // p ranges so that both factor targets are >= 0
                        for p in (n - l2 as i64 - m2 as i64)..=(l1 as i64 + m1 as i64 - 1)
                        {
                            let left = a.product_basis(l1, i1, p, m1, j1);
                            let right = b.product_basis(l2, i2, n - 1 - p, m2, j2);
                            let (Some(left), Some(right)) = (left, right) else {
                                continue;
                            };
                            let t1 = (l1 as i64 + m1 as i64 - p - 1) as u32;
                            let t2 = target - t1;
                            let (Some(lc), Some(rc)) =
                                (left.coords(t1), right.coords(t2))
                            else {
                                continue;
                            };
                            for (x1, c1) in lc.iter().enumerate() {
                                if c1.is_zero() {
                                    continue;
                                }
                                for (x2, c2) in rc.iter().enumerate() {
                                    if c2.is_zero() {
                                        continue;
                                    }
                                    let pos = pos_at[target as usize]
                                        [&(t1, x1, t2, x2)];
                                    let e = acc.entry(pos).or_insert_with(Scalar::zero);
                                    *e = &*e + &(c1 * c2);
                                }
                            }
                        }
                        let entries: Vec<(u32, Scalar)> = acc
                            .into_iter()
                            .filter(|(_, v)| !v.is_zero())
                            .map(|(i, v)| (i as u32, v))
                            .collect();
                        if !entries.is_empty() {
                            structure.insert((a_glob, n, b_glob), entries);
                        }
                    }
                }
            }
        }
    }

    // nu = nu_A (x) vac + vac (x) nu_B
    let mut conformal = GradedVector::zero();
    if let Some(nu_a) = a.conformal_vector.coords(2) {
        for (i1, c) in nu_a.iter().enumerate() {
            if !c.is_zero() {
                let pos = pos_at[2][&(2, i1, 0, 0)];
                conformal.add_term(2, pos, level_dims[2], c.clone());
            }
        }
    }
    if let Some(nu_b) = b.conformal_vector.coords(2) {
        for (i2, c) in nu_b.iter().enumerate() {
            if !c.is_zero() {
                let pos = pos_at[2][&(0, 0, 2, i2)];
                conformal.add_term(2, pos, level_dims[2], c.clone());
            }
        }
    }

    // factor generators embed as g (x) vac and vac (x) g
    let mut generators = Vec::new();
    let n_left = a.generators.len();
    for g in &a.generators {
        let mut vector = GradedVector::zero();
        for (l, i, c) in g.vector.terms() {
            let pos = pos_at[l as usize][&(l, i, 0, 0)];
            vector.add_term(l, pos, level_dims[l as usize], c.clone());
        }
        generators.push(GeneratorInfo {
            name: format!("{}|1", g.name),
            weight: g.weight,
            adjoint: g.adjoint,
            vector,
        });
    }
    for g in &b.generators {
        let mut vector = GradedVector::zero();
        for (l, i, c) in g.vector.terms() {
            let pos = pos_at[l as usize][&(0, 0, l, i)];
            vector.add_term(l, pos, level_dims[l as usize], c.clone());
        }
        generators.push(GeneratorInfo {
            name: format!("1|{}", g.name),
            weight: g.weight,
            adjoint: n_left + g.adjoint,
            vector,
        });
    }

    let mut metadata = BTreeMap::new();
    metadata.insert("family".into(), "tensor".into());
    metadata.insert("left".into(), a.name.clone());
    metadata.insert("right".into(), b.name.clone());

    VOAModel::assemble(
        format!("{}(x){}", a.name, b.name),
        cutoff,
        &a.central_charge + &b.central_charge,
        level_dims,
        labels,
        gram,
        structure,
        conformal,
        generators,
        metadata,
    )
}
