//! Mechanical verification of the vertex algebra axioms on a built model:
//! exhaustive Borcherds identity sweeps over the admissible window,
//! vacuum and translation axioms, Virasoro commutation relations, the
//! quasi-primary decomposition, locality orders, and conformal vector
//! shifts.

use crate::error::VoaError;
use crate::graded::GradedVector;
use crate::model::VOAModel;
use crate::scalar::Scalar;
use rayon::prelude::*;

/// Admissibility of one Borcherds instance: every product needed by the
/// identity stays inside the truncation window.
pub fn borcherds_admissible(
    model: &VOAModel,
    la: u32,
    lb: u32,
    lc: u32,
    m: i64,
    n: i64,
    k: i64,
) -> bool {
    let cut = model.cutoff as i64;
    let t = la as i64 + lb as i64 + lc as i64 - m - n - k - 2;
    (0..=cut).contains(&t)
        && la as i64 + lb as i64 - n - 1 <= cut
        && lb as i64 + lc as i64 - k - 1 <= cut
        && la as i64 + lc as i64 - m - 1 <= cut
}

/// Left side minus right side of the Borcherds identity
///
///   sum_j C(m,j) (a_(n+j) b)_(m+k-j) c
///     = sum_j (-1)^j C(n,j) [ a_(m+n-j) (b_(k+j) c)
///                             - (-1)^n b_(n+k-j) (a_(m+j) c) ]
///
/// for basis vectors, assuming admissibility.
#[allow(clippy::too_many_arguments)]
pub fn borcherds_residual(
    model: &VOAModel,
    (la, ia): (u32, usize),
    (lb, ib): (u32, usize),
    (lc, ic): (u32, usize),
    m: i64,
    n: i64,
    k: i64,
) -> Result<GradedVector, VoaError> {
    let a = model.basis_vector(la, ia);
    let b = model.basis_vector(lb, ib);
    let c = model.basis_vector(lc, ic);

    let mut res = GradedVector::zero();

    // LHS
    let jmax_l = la as i64 + lb as i64 - n - 1;
    for j in 0..=jmax_l.max(-1) {
        let coef = Scalar::binomial(m, j as u32);
        if coef.is_zero() {
            continue;
        }
        let u = match model.product_basis(la, ia, n + j, lb, ib) {
            Some(u) => u,
            None => continue,
        };
        let w = model.product(&u, m + k - j, &c)?;
        res.add_scaled(&w, &coef);
    }

    // RHS, subtracted
    let jmax_1 = lb as i64 + lc as i64 - k - 1;
    for j in 0..=jmax_1.max(-1) {
        let mut coef = Scalar::binomial(n, j as u32);
        if coef.is_zero() {
            continue;
        }
        if j % 2 == 1 {
            coef = -coef;
        }
        let v = match model.product_basis(lb, ib, k + j, lc, ic) {
            Some(v) => v,
            None => continue,
        };
        let w = model.product(&a, m + n - j, &v)?;
        res.add_scaled(&w, &(-coef));
    }
    let jmax_2 = la as i64 + lc as i64 - m - 1;
    let n_sign = n.rem_euclid(2) == 1;
    for j in 0..=jmax_2.max(-1) {
        let mut coef = Scalar::binomial(n, j as u32);
        if coef.is_zero() {
            continue;
        }
        // (-1)^j (-1)^n, and this block enters the residual with +
        if (j % 2 == 1) != n_sign {
            coef = -coef;
        }
        let v = match model.product_basis(la, ia, m + j, lc, ic) {
            Some(v) => v,
            None => continue,
        };
        let w = model.product(&b, n + k - j, &v)?;
        res.add_scaled(&w, &coef);
    }
    res.prune();
    Ok(res)
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub identities: u64,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive Borcherds sweep: every basis triple and every admissible
/// (m, n, k).
pub fn borcherds_sweep(model: &VOAModel) -> SweepReport {
    borcherds_sweep_capped(model, model.cutoff)
}

/// Borcherds sweep with the a and b levels capped at `max_level`.
pub fn borcherds_sweep_capped(model: &VOAModel, max_level: u32) -> SweepReport {
    let cut = model.cutoff;
    let top = max_level.min(cut);
    let mut triples: Vec<((u32, usize), (u32, usize))> = Vec::new();
    for la in 0..=top {
        for ia in 0..model.dim(la) {
            for lb in 0..=top {
                for ib in 0..model.dim(lb) {
                    triples.push(((la, ia), (lb, ib)));
                }
            }
        }
    }
    let results: Vec<(u64, Vec<String>)> = triples
        .par_iter()
        .map(|&((la, ia), (lb, ib))| {
            let mut count = 0u64;
            let mut failures = Vec::new();
            for lc in 0..=cut {
                for ic in 0..model.dim(lc) {
                    let sum = la as i64 + lb as i64 + lc as i64;
                    for n in (la as i64 + lb as i64 - 1 - cut as i64)
                        ..=(la as i64 + lb as i64 - 1)
                    {
                        for k in (lb as i64 + lc as i64 - 1 - cut as i64)
                            ..=(lb as i64 + lc as i64 - 1)
                        {
                            for m in (la as i64 + lc as i64 - 1 - cut as i64)
                                ..=(la as i64 + lc as i64 - 1)
                            {
                                let t = sum - m - n - k - 2;
                                if !(0..=cut as i64).contains(&t) {
                                    continue;
                                }
                                count += 1;
                                let r = borcherds_residual(
                                    model,
                                    (la, ia),
                                    (lb, ib),
                                    (lc, ic),
                                    m,
                                    n,
                                    k,
                                )
                                .expect("admissible instance stays in window");
                                if !r.is_zero() && failures.len() < 5 {
                                    failures.push(format!(
                                        "({la},{ia}) ({lb},{ib}) ({lc},{ic}) m={m} n={n} k={k}"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            (count, failures)
        })
        .collect();
    let mut identities = 0;
    let mut failures = Vec::new();
    for (c, f) in results {
        identities += c;
        for x in f {
            if failures.len() < 10 {
                failures.push(x);
            }
        }
    }
    SweepReport {
        identities,
        failures,
    }
}

/// Vacuum axioms read off the structure table: creation, annihilation,
/// identity property of Y(vac, z), and translation on the vacuum.
pub fn check_vacuum(model: &VOAModel) -> Vec<String> {
    let mut failures = Vec::new();
    let cut = model.cutoff;
    for la in 0..=cut {
        for ia in 0..model.dim(la) {
            let a = model.basis_vector(la, ia);
            // a_(-1) vac = a, a_(n) vac = 0 for n >= 0
            for n in (la as i64 - 1 - cut as i64)..=(la as i64 - 1) {
                if let Some(p) = model.product_basis(la, ia, n, 0, 0) {
                    let expect = if n == -1 {
                        a.clone()
                    } else if n >= 0 {
                        GradedVector::zero()
                    } else {
                        continue;
                    };
                    let mut d = p.clone();
                    d.add_scaled(&expect, &-Scalar::one());
                    d.prune();
                    if !d.is_zero() {
                        failures.push(format!("creation axiom at ({la},{ia}) n={n}"));
                    }
                }
            }
            // vac_(n) a = delta_{n,-1} a
            for n in (la as i64 - 1 - cut as i64)..=(la as i64 - 1) {
                if let Some(p) = model.product_basis(0, 0, n, la, ia) {
                    let expect = if n == -1 {
                        a.clone()
                    } else {
                        GradedVector::zero()
                    };
                    let mut d = p.clone();
                    d.add_scaled(&expect, &-Scalar::one());
                    d.prune();
                    if !d.is_zero() {
                        failures.push(format!("vacuum identity at ({la},{ia}) n={n}"));
                    }
                }
            }
        }
    }
    failures
}

/// Translation axiom (T a)_(n) = -n a_(n-1) with T = L_{-1}, checked on
/// every basis pair over the admissible window.
pub fn check_translation(model: &VOAModel) -> Vec<String> {
    let mut failures = Vec::new();
    let cut = model.cutoff;
    for la in 0..cut {
        for ia in 0..model.dim(la) {
            let a = model.basis_vector(la, ia);
            let ta = model.apply_l(-1, &a).expect("T stays in window below cutoff");
            for lb in 0..=cut {
                for ib in 0..model.dim(lb) {
                    let b = model.basis_vector(lb, ib);
                    // (Ta)_(n) b has source levels (la+1, lb)
                    let hi = la as i64 + 1 + lb as i64 - 1;
                    for n in (hi - cut as i64)..=hi {
                        // a_(n-1) b must also be in window: same target
                        let lhs = match model.product(&ta, n, &b) {
                            Ok(v) => v,
                            Err(_) => continue,
                        };
                        let rhs = match model.product(&a, n - 1, &b) {
                            Ok(v) => v,
                            Err(_) => continue,
                        };
                        let mut d = lhs.clone();
                        d.add_scaled(&rhs, &Scalar::from_int(n));
                        d.prune();
                        if !d.is_zero() && failures.len() < 10 {
                            failures
                                .push(format!("(T a)_({n}) at ({la},{ia}),({lb},{ib})"));
                        }
                    }
                }
            }
        }
    }
    failures
}

/// Central charge read from the model: 2 <vac | L_2 L_{-2} vac>.
pub fn extract_central_charge(model: &VOAModel) -> Result<Scalar, VoaError> {
    if model.cutoff < 2 {
        return Err(VoaError::Check("cutoff below 2".into()));
    }
    let v = model.apply_l(-2, &model.vacuum())?;
    let u = model.apply_l(2, &v)?;
    Ok(&model.scalar_product(&model.vacuum(), &u) * &Scalar::from_int(2))
}

/// Virasoro commutators for the modes of an arbitrary weight-two vector
/// against a claimed central charge, on every source level where all
/// three matrices exist.  The zero vector has zero modes.
pub fn virasoro_mode_failures(
    model: &VOAModel,
    nu: &GradedVector,
    c: &Scalar,
) -> Result<Vec<String>, VoaError> {
    if !nu.is_zero() && nu.homogeneous_level() != Some(2) {
        return Err(VoaError::Check("conformal vector must sit at level 2".into()));
    }
    let cut = model.cutoff as i64;
    let lmat = |m: i64, l: u32| -> Result<crate::sparse::SparseMatrix, VoaError> {
        if nu.is_zero() {
            let target = (l as i64 - m) as u32;
            Ok(crate::sparse::SparseMatrix::zeros(
                model.dim(target),
                model.dim(l),
            ))
        } else {
            model.mode_matrix(nu, m + 1, l)
        }
    };
    let mut failures = Vec::new();
    for m in -cut..=cut {
        for n in -cut..=cut {
            for l in 0..=cut {
                let ln_ok = (0..=cut).contains(&(l - n));
                let lm_ok = (0..=cut).contains(&(l - m));
                let lnm_ok = (0..=cut).contains(&(l - n - m));
                if !(ln_ok && lm_ok && lnm_ok) {
                    continue;
                }
                let lvl = l as u32;
                let a = lmat(m, (l - n) as u32)?.matmul(&lmat(n, lvl)?);
                let b = lmat(n, (l - m) as u32)?.matmul(&lmat(m, lvl)?);
                let mut comm = a.clone();
                comm.sub_assign(&b);
                let mut rhs = lmat(m + n, lvl)?.scaled(&Scalar::from_int(m - n));
                if m + n == 0 {
                    let central = c * &Scalar::ratio(m * m * m - m, 12);
                    for i in 0..rhs.nrows {
                        let v = &rhs.get(i, i) + &central;
                        rhs.set(i, i, v);
                    }
                }
                if comm.to_dense() != rhs.to_dense() && failures.len() < 10 {
                    failures.push(format!("[L_{m}, L_{n}] at level {l}"));
                }
            }
        }
    }
    Ok(failures)
}

/// Virasoro commutation relations of the modes of the stored conformal
/// vector, on every source level where all three matrices exist, plus
/// L_0 = level grading.
pub fn check_virasoro(model: &VOAModel) -> Vec<String> {
    let mut failures = Vec::new();
    for l in 0..=model.cutoff {
        let li = model.dim(l);
        let l0 = model.l_matrix(0, l).expect("L_0 in window");
        let mut expect = crate::sparse::SparseMatrix::zeros(li, li);
        for i in 0..li {
            expect.set(i, i, Scalar::from_int(l as i64));
        }
        if l0.to_dense() != expect.to_dense() {
            failures.push(format!("L_0 not the grading at level {l}"));
        }
    }
    match virasoro_mode_failures(model, &model.conformal_vector, &model.central_charge)
    {
        Ok(mut f) => failures.append(&mut f),
        Err(e) => failures.push(e.to_string()),
    }
    failures
}

/// Basis of quasi-primaries (ker L_1) at one level, as rows in level
/// coordinates.
pub fn quasi_primary_basis(
    model: &VOAModel,
    level: u32,
) -> crate::sparse::SparseMatrix {
    if level == 0 {
        return crate::sparse::SparseMatrix::identity(model.dim(0));
    }
    let l1 = model.l_matrix(1, level).expect("L_1 lowers within window");
    l1.kernel_basis()
}

/// Primary vectors: ker L_1 intersect ker L_2.
pub fn primary_basis(model: &VOAModel, level: u32) -> crate::sparse::SparseMatrix {
    if level < 2 {
        return quasi_primary_basis(model, level);
    }
    let l1 = model.l_matrix(1, level).expect("in window");
    let l2 = model.l_matrix(2, level).expect("in window");
    let stacked = l1.stack(&l2);
    stacked.kernel_basis()
}

/// Each level splits as quasi-primaries (+) T(previous level); verify the
/// dimension count and that the two pieces intersect trivially.
pub fn check_qp_decomposition(model: &VOAModel, level: u32) -> Result<(), String> {
    if level == 0 {
        return Ok(());
    }
    let qp = quasi_primary_basis(model, level);
    let t = model
        .l_matrix(-1, level - 1)
        .map_err(|e| e.to_string())?
        .transpose();
    // rows of t are images of the previous-level basis under T
    let dim = model.dim(level);
    let total = qp.stack(&t);
    let rank = total.rank();
    if qp.nrows + t.rank() != rank {
        return Err(format!(
            "QP (+) T V_{} not direct at level {level}",
            level - 1
        ));
    }
    if rank != dim {
        return Err(format!(
            "QP (+) T V_{} does not fill level {level}: {rank} of {dim}",
            level - 1
        ));
    }
    Ok(())
}

/// Smallest N with sum_{j<=N} (-1)^j C(N,j)
/// [a_(m+N-j), b_(k+j)] = 0 across the admissible window, together with
/// the order read from products: 1 + max { p >= 0 : a_(p) b != 0 }.
pub fn locality_order(
    model: &VOAModel,
    (la, ia): (u32, usize),
    (lb, ib): (u32, usize),
) -> (Option<u32>, u32) {
    let cut = model.cutoff as i64;
    let a = model.basis_vector(la, ia);
    let b = model.basis_vector(lb, ib);

    let mut n_prod = 0u32;
    for p in 0..=(la as i64 + lb as i64 - 1) {
        if let Some(v) = model.product_basis(la, ia, p, lb, ib) {
            if !v.is_zero() {
                n_prod = p as u32 + 1;
            }
        }
    }

    'outer: for n_try in 0..=(2 * model.cutoff + 2) {
        let nn = n_try as i64;
        for lc in 0..=model.cutoff {
            for ic in 0..model.dim(lc) {
                let c = model.basis_vector(lc, ic);
                // m: every a_(m+N-j) c with j <= N inside the window
                let m_hi = la as i64 + lc as i64 - 1 - nn;
                let m_lo = la as i64 + lc as i64 - 1 - cut;
                let k_hi = lb as i64 + lc as i64 - 1;
                let k_lo = lb as i64 + lc as i64 - 1 - cut;
                for m in m_lo..=m_hi {
                    for k in k_lo..=k_hi {
                        let t = la as i64 + lb as i64 + lc as i64 - m - k - nn - 2;
                        if !(0..=cut).contains(&t) {
                            continue;
                        }
                        let mut acc = GradedVector::zero();
                        for j in 0..=nn {
                            let mut coef = Scalar::binomial(nn, j as u32);
                            if j % 2 == 1 {
                                coef = -coef;
                            }
                            let bv = match model.product(&b, k + j, &c) {
                                Ok(v) => v,
                                Err(_) => continue 'outer,
                            };
                            let term1 = match model.product(&a, m + nn - j, &bv) {
                                Ok(v) => v,
                                Err(_) => continue 'outer,
                            };
                            let av = match model.product(&a, m + nn - j, &c) {
                                Ok(v) => v,
                                Err(_) => continue 'outer,
                            };
                            let term2 = match model.product(&b, k + j, &av) {
                                Ok(v) => v,
                                Err(_) => continue 'outer,
                            };
                            acc.add_scaled(&term1, &coef);
                            acc.add_scaled(&term2, &(-coef));
                        }
                        acc.prune();
                        if !acc.is_zero() {
                            continue 'outer;
                        }
                    }
                }
            }
        }
        return (Some(n_try), n_prod);
    }
    (None, n_prod)
}

/// Conformal vector shift by T a for a weight-one vector a: extract the
/// new central charge, verify the Virasoro relations of the shifted
/// modes, and recover a as L~_1 nu~ / 2.
pub struct ShiftCheck {
    pub new_central_charge: Scalar,
    pub virasoro_ok: bool,
    pub recovered_ok: bool,
}

pub fn check_conformal_shift(
    model: &VOAModel,
    a: &GradedVector,
) -> Result<ShiftCheck, VoaError> {
    if a.homogeneous_level() != Some(1) {
        return Err(VoaError::Check("shift vector must have weight one".into()));
    }
    let vac = model.vacuum();
    let ta = model.product(a, -2, &vac)?;
    let mut nu = model.conformal_vector.clone();
    nu.add_scaled(&ta, &Scalar::one());

    // c~ = 2 <vac | nu~_(3) nu~>
    let top = model.product(&nu, 3, &nu)?;
    let c_new = &model.scalar_product(&vac, &top) * &Scalar::from_int(2);

    // shifted modes on every level where the window allows
    let virasoro_ok = virasoro_mode_failures(model, &nu, &c_new)?.is_empty();

    // recovery: L_1 nu~ = 2 a with the original modes
    let mut rec = model.apply_l(1, &nu)?;
    rec.scale(&Scalar::ratio(1, 2));
    let mut diff = rec;
    diff.add_scaled(a, &-Scalar::one());
    diff.prune();
    let recovered_ok = diff.is_zero();

    Ok(ShiftCheck {
        new_central_charge: c_new,
        virasoro_ok,
        recovered_ok,
    })
}
