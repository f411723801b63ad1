//! Unitarity data: the normalized invariant bilinear form, the PCT
//! operator, adjoints of modes, and exact positivity of the Gram
//! matrices.

use crate::error::VoaError;
use crate::graded::GradedVector;
use crate::model::VOAModel;
use crate::scalar::Scalar;
use crate::sparse::{symmetric_inertia, Inertia, SparseMatrix};

/// The invariant bilinear form (. , .) per level, normalized by
/// (vac, vac) = 1.
#[derive(Clone, Debug)]
pub struct InvariantForm {
    pub matrices: Vec<SparseMatrix>,
}

impl InvariantForm {
    pub fn pair(&self, u: &GradedVector, v: &GradedVector) -> Scalar {
        let mut acc = Scalar::zero();
        for (l, i, cu) in u.terms() {
            if let Some(cv) = v.coords(l) {
                let f = &self.matrices[l as usize];
                for (&j, fij) in f.row(i) {
                    acc += cu * &(fij * &cv[j]);
                }
            }
        }
        acc
    }
}

/// Solve for the invariant form level by level from the structure table.
/// Every generator must be quasi-primary; the overdetermined system's
/// consistency is itself the invariance verification.
pub fn invariant_form(model: &VOAModel) -> Result<InvariantForm, VoaError> {
    // existence precondition: L_1 kills level 1
    if model.cutoff >= 1 && model.dim(1) > 0 {
        let l1 = model.l_matrix(1, 1)?;
        if !(0..l1.nrows).all(|i| l1.row_is_zero(i)) {
            return Err(VoaError::Check(
                "no invariant form: L_1 does not annihilate level 1".into(),
            ));
        }
    }
    for g in &model.generators {
        let lg = model.apply_l(1, &g.vector)?;
        if !lg.is_zero() {
            return Err(VoaError::Check(format!(
                "generator {} is not quasi-primary",
                g.name
            )));
        }
    }

    let mut matrices = vec![SparseMatrix::identity(model.dim(0))];
    for l in 1..=model.cutoff {
        let dim = model.dim(l);
        if dim == 0 {
            matrices.push(SparseMatrix::zeros(0, 0));
            continue;
        }
        // rows: v = g_{-m} b ranging over generators and 1 <= m <= l
        let mut coeff_rows: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs_rows: Vec<Vec<Scalar>> = Vec::new();
        for g in &model.generators {
            let d = g.weight;
            for m in 1..=l as i64 {
                let src = l as i64 - m;
                if src < 0 || model.dim(src as u32) == 0 {
                    continue;
                }
                let src = src as u32;
                let raise = model.hom_mode_matrix(&g.vector, -m, src)?;
                let lower = model.hom_mode_matrix(&g.vector, m, l)?;
                let sign = if d % 2 == 0 {
                    Scalar::one()
                } else {
                    -Scalar::one()
                };
                for ib in 0..model.dim(src) {
                    // v = g_{-m} e_ib, coefficients down the column
                    let v: Vec<Scalar> = (0..dim).map(|i| raise.get(i, ib)).collect();
                    if v.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    // rhs_j = (-1)^d (e_ib, g_m e_j)
                    let f_src = &matrices[src as usize];
                    let mut rhs = Vec::with_capacity(dim);
                    for j in 0..dim {
                        let mut acc = Scalar::zero();
                        for i2 in 0..model.dim(src) {
                            let c = lower.get(i2, j);
                            if !c.is_zero() {
                                acc += &f_src.get(ib, i2) * &c;
                            }
                        }
                        rhs.push(&sign * &acc);
                    }
                    coeff_rows.push(v);
                    rhs_rows.push(rhs);
                }
            }
        }
        let c = SparseMatrix::from_dense(&coeff_rows);
        if c.rank() < dim {
            return Err(VoaError::Check(format!(
                "generator modes do not span level {l}"
            )));
        }
        let mut f = SparseMatrix::zeros(dim, dim);
        for j in 0..dim {
            let b: Vec<Scalar> = rhs_rows.iter().map(|r| r[j].clone()).collect();
            let col = c.solve(&b).ok_or_else(|| {
                VoaError::Check(format!(
                    "invariance relations inconsistent at level {l}"
                ))
            })?;
            for (i, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    f.set(i, j, v);
                }
            }
        }
        // invariant forms are symmetric
        if f.to_dense() != f.transpose().to_dense() {
            return Err(VoaError::Check(format!("form not symmetric at level {l}")));
        }
        matrices.push(f);
    }
    Ok(InvariantForm { matrices })
}

/// PCT operator and its verification results.
#[derive(Clone, Debug)]
pub struct Pct {
    pub matrices: Vec<SparseMatrix>,
    pub involution_ok: bool,
    pub vacuum_ok: bool,
    pub conformal_ok: bool,
    pub automorphism_ok: bool,
    pub antiunitary_ok: bool,
}

impl Pct {
    pub fn passed(&self) -> bool {
        self.involution_ok
            && self.vacuum_ok
            && self.conformal_ok
            && self.automorphism_ok
            && self.antiunitary_ok
    }

    pub fn apply(&self, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (l, coords) in v.levels.iter() {
            let img = self.matrices[*l as usize].apply(coords);
            let dim = img.len();
            for (i, x) in img.into_iter().enumerate() {
                out.add_term(*l, i, dim, x);
            }
        }
        out.prune();
        out
    }
}

/// theta = G^{-1} F per level, with the involution, automorphism, and
/// antiunitarity properties verified exactly.
pub fn pct_operator(model: &VOAModel, form: &InvariantForm) -> Result<Pct, VoaError> {
    let mut matrices = Vec::new();
    for l in 0..=model.cutoff {
        let dim = model.dim(l);
        let g = &model.gram[l as usize];
        let f = &form.matrices[l as usize];
        let mut theta = SparseMatrix::zeros(dim, dim);
        for j in 0..dim {
            let b: Vec<Scalar> = (0..dim).map(|i| f.get(i, j)).collect();
            let col = g
                .solve(&b)
                .ok_or_else(|| VoaError::Solve(format!("gram singular at level {l}")))?;
            for (i, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    theta.set(i, j, v);
                }
            }
        }
        matrices.push(theta);
    }

    let involution_ok = matrices.iter().enumerate().all(|(l, t)| {
        t.matmul(t).to_dense() == SparseMatrix::identity(model.dim(l as u32)).to_dense()
    });
    let vacuum_ok = matrices[0].get(0, 0) == Scalar::one();
    let pct = Pct {
        matrices,
        involution_ok,
        vacuum_ok,
        conformal_ok: false,
        automorphism_ok: false,
        antiunitary_ok: false,
    };

    let mut nu_img = pct.apply(&model.conformal_vector);
    nu_img.add_scaled(&model.conformal_vector, &-Scalar::one());
    nu_img.prune();
    let conformal_ok = nu_img.is_zero();

    // theta(a_(n) b) = (theta a)_(n) (theta b) over the whole window
    let mut automorphism_ok = true;
    'auto: for la in 0..=model.cutoff {
        for ia in 0..model.dim(la) {
            let a = model.basis_vector(la, ia);
            let ta = pct.apply(&a);
            for lb in 0..=model.cutoff {
                for ib in 0..model.dim(lb) {
                    let b = model.basis_vector(lb, ib);
                    let tb = pct.apply(&b);
                    let hi = la as i64 + lb as i64 - 1;
                    for n in (hi - model.cutoff as i64)..=hi {
                        let lhs = pct.apply(&model.product_basis(la, ia, n, lb, ib).unwrap());
                        let rhs = model.product(&ta, n, &tb).expect("window");
                        let mut d = lhs;
                        d.add_scaled(&rhs, &-Scalar::one());
                        d.prune();
                        if !d.is_zero() {
                            automorphism_ok = false;
                            break 'auto;
                        }
                    }
                }
            }
        }
    }

    // <theta x | theta y> = <y | x>: theta^T G theta = G
    let antiunitary_ok = (0..=model.cutoff as usize).all(|l| {
        let g = &model.gram[l];
        let t = &pct.matrices[l];
        t.transpose().matmul(g).matmul(t).to_dense() == g.to_dense()
    });

    Ok(Pct {
        conformal_ok,
        automorphism_ok,
        antiunitary_ok,
        ..pct
    })
}

/// Matrix of the adjoint (a_n)^+ = (-1)^{wt a} sum_j (L_1^j theta a)_{-n}
/// / j!  from one source level (homogeneous mode indices).
pub fn adjoint_mode_matrix(
    model: &VOAModel,
    pct: &Pct,
    a: &GradedVector,
    n: i64,
    source_level: u32,
) -> Result<SparseMatrix, VoaError> {
    let d = a.homogeneous_level().ok_or(VoaError::NotHomogeneous)?;
    let target = source_level as i64 + n;
    if !(0..=model.cutoff as i64).contains(&target) {
        return Err(VoaError::OutOfWindow {
            la: d,
            n: -n,
            lb: source_level,
            cutoff: model.cutoff,
        });
    }
    let mut cur = pct.apply(a);
    let mut fact = Scalar::one();
    let mut out = SparseMatrix::zeros(model.dim(target as u32), model.dim(source_level));
    let mut j = 0i64;
    loop {
        if cur.is_zero() {
            break;
        }
        if j > 0 {
            fact = &fact / &Scalar::from_int(j);
        }
        let m = model.hom_mode_matrix(&cur, -n, source_level)?.scaled(&fact);
        out.sub_assign(&m.scaled(&-Scalar::one()));
        if cur.homogeneous_level() == Some(0) {
            break;
        }
        cur = model.apply_l(1, &cur)?;
        j += 1;
    }
    if d % 2 == 1 {
        out = out.scaled(&-Scalar::one());
    }
    Ok(out)
}

/// Verify <a_n x | y> = <x | (a_n)^+ y> for every generator mode over the
/// window.
pub fn check_adjoint_pairing(model: &VOAModel, pct: &Pct) -> Vec<String> {
    let mut failures = Vec::new();
    let cut = model.cutoff as i64;
    for g in &model.generators {
        for s in 0..=model.cutoff {
            for n in -cut..=cut {
                let t = s as i64 - n;
                if !(0..=cut).contains(&t) {
                    continue;
                }
                let m = model
                    .hom_mode_matrix(&g.vector, n, s)
                    .expect("mode in window");
                let adj = adjoint_mode_matrix(model, pct, &g.vector, n, t as u32)
                    .expect("adjoint in window");
                let lhs = m.transpose().matmul(&model.gram[t as usize]);
                let rhs = model.gram[s as usize].matmul(&adj);
                if lhs.to_dense() != rhs.to_dense() && failures.len() < 10 {
                    failures.push(format!("generator {} mode {n} level {s}", g.name));
                }
            }
        }
    }
    failures
}

/// theta(g) = (-1)^{wt g} adj(g) connects the PCT image of a generator to
/// its declared adjoint field.
pub fn check_generator_adjoints(model: &VOAModel, pct: &Pct) -> Vec<String> {
    let mut failures = Vec::new();
    for g in &model.generators {
        let adj = &model.generators[g.adjoint];
        let mut img = pct.apply(&g.vector);
        let sign = if g.weight % 2 == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        };
        img.add_scaled(&adj.vector, &-sign);
        img.prune();
        if !img.is_zero() {
            failures.push(g.name.clone());
        }
    }
    failures
}

#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub inertia: Vec<Inertia>,
    pub positive_definite: bool,
    pub first_nonpositive_level: Option<u32>,
    /// (level, coordinates, exact norm) of a nonpositive-norm vector
    pub witness: Option<(u32, Vec<Scalar>, Scalar)>,
}

/// Exact inertia of every level Gram matrix, with a nonpositive witness
/// when one exists.
pub fn gram_positivity(model: &VOAModel) -> PositivityReport {
    let mut inertia = Vec::new();
    let mut first = None;
    let mut witness = None;
    for l in 0..=model.cutoff {
        let g = &model.gram[l as usize];
        let i = symmetric_inertia(g);
        if (i.negative > 0 || i.zero > 0) && first.is_none() {
            first = Some(l);
            if let Some(w) = &i.nonpositive_witness {
                let gw = g.apply(w);
                let norm = w
                    .iter()
                    .zip(&gw)
                    .map(|(a, b)| a * b)
                    .fold(Scalar::zero(), |acc, x| acc + x);
                witness = Some((l, w.clone(), norm));
            }
        }
        inertia.push(i);
    }
    PositivityReport {
        positive_definite: first.is_none(),
        first_nonpositive_level: first,
        inertia,
        witness,
    }
}

/// Verification verdict for a candidate automorphism given as one matrix
/// per level.
#[derive(Clone, Debug)]
pub struct AutomorphismReport {
    pub automorphism_ok: bool,
    pub conformal_fixed: bool,
    pub bilinear_ok: bool,
    pub sesquilinear_ok: bool,
}

/// Check that per-level matrices define a vertex algebra automorphism
/// fixing nu, and whether they preserve the invariant bilinear form and
/// the scalar product.
pub fn check_automorphism(
    model: &VOAModel,
    form: &InvariantForm,
    maps: &[SparseMatrix],
) -> AutomorphismReport {
    let apply = |v: &GradedVector| -> GradedVector {
        let mut out = GradedVector::zero();
        for (l, coords) in v.levels.iter() {
            let img = maps[*l as usize].apply(coords);
            let dim = img.len();
            for (i, x) in img.into_iter().enumerate() {
                out.add_term(*l, i, dim, x);
            }
        }
        out.prune();
        out
    };

    let mut automorphism_ok = true;
    'outer: for la in 0..=model.cutoff {
        for ia in 0..model.dim(la) {
            let ga = apply(&model.basis_vector(la, ia));
            for lb in 0..=model.cutoff {
                for ib in 0..model.dim(lb) {
                    let gb = apply(&model.basis_vector(lb, ib));
                    let hi = la as i64 + lb as i64 - 1;
                    for n in (hi - model.cutoff as i64)..=hi {
                        let lhs =
                            apply(&model.product_basis(la, ia, n, lb, ib).unwrap());
                        let rhs = model.product(&ga, n, &gb).expect("window");
                        let mut d = lhs;
                        d.add_scaled(&rhs, &-Scalar::one());
                        d.prune();
                        if !d.is_zero() {
                            automorphism_ok = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
    }

    let mut nu = apply(&model.conformal_vector);
    nu.add_scaled(&model.conformal_vector, &-Scalar::one());
    nu.prune();
    let conformal_fixed = nu.is_zero();

    let bilinear_ok = (0..=model.cutoff as usize).all(|l| {
        let f = &form.matrices[l];
        let m = &maps[l];
        m.transpose().matmul(f).matmul(m).to_dense() == f.to_dense()
    });
    let sesquilinear_ok = (0..=model.cutoff as usize).all(|l| {
        let g = &model.gram[l];
        let m = &maps[l];
        m.transpose().matmul(g).matmul(m).to_dense() == g.to_dense()
    });

    AutomorphismReport {
        automorphism_ok,
        conformal_fixed,
        bilinear_ok,
        sesquilinear_ok,
    }
}
