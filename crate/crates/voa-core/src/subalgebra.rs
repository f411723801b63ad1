//! Unitary subalgebras on the truncation window: saturation closure,
//! orthogonal projections, projected conformal vectors, cosets, and fixed
//! points of finite automorphism lists.

use crate::axioms;
use crate::error::VoaError;
use crate::graded::GradedVector;
use crate::model::VOAModel;
use crate::scalar::Scalar;
use crate::sparse::{rational_spectrum, SparseMatrix};
use crate::unitarity::{check_automorphism, AutomorphismReport, InvariantForm, Pct};

/// Graded subspace of a parent model satisfying the unitary-subalgebra
/// closure properties on the window.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub parent: String,
    pub dims: Vec<usize>,
    /// Rows are basis vectors in parent coordinates, one reduced
    /// row-echelon matrix per level.
    pub basis: Vec<SparseMatrix>,
    /// Orthogonal projection onto the subspace for the parent scalar
    /// product, one matrix per level.
    pub projection: Vec<SparseMatrix>,
}

impl Subalgebra {
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Basis row as a homogeneous graded vector.
    pub fn basis_vector(&self, level: u32, idx: usize) -> GradedVector {
        let b = &self.basis[level as usize];
        let mut out = GradedVector::zero();
        for (&j, v) in b.row(idx) {
            out.add_term(level, j, b.ncols, v.clone());
        }
        out
    }

    pub fn contains(&self, v: &GradedVector) -> bool {
        for (&l, coords) in &v.levels {
            let mut c = coords.clone();
            reduce_against(&self.basis[l as usize], &mut c);
            if c.iter().any(|x| !x.is_zero()) {
                return false;
            }
        }
        true
    }

    /// e_W v, levelwise.
    pub fn project(&self, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (&l, coords) in &v.levels {
            let img = self.projection[l as usize].apply(coords);
            let dim = img.len();
            for (i, x) in img.into_iter().enumerate() {
                out.add_term(l, i, dim, x);
            }
        }
        out.prune();
        out
    }
}

/// Subtract the projections onto rref rows, leaving the residue.
fn reduce_against(basis: &SparseMatrix, v: &mut [Scalar]) {
    for i in 0..basis.nrows {
        let Some((&p, _)) = basis.row(i).iter().next() else {
            continue;
        };
        let c = v[p].clone();
        if c.is_zero() {
            continue;
        }
        for (&j, x) in basis.row(i) {
            let sub = &c * x;
            v[j] = &v[j] - &sub;
        }
    }
}

/// Grow an rref span by one vector; true when the rank increased.
fn span_insert(span: &mut SparseMatrix, v: &[Scalar]) -> bool {
    let mut r = v.to_vec();
    reduce_against(span, &mut r);
    if r.iter().all(Scalar::is_zero) {
        return false;
    }
    let mut grown = SparseMatrix::zeros(span.nrows + 1, span.ncols);
    for i in 0..span.nrows {
        for (&j, x) in span.row(i) {
            grown.set(i, j, x.clone());
        }
    }
    for (j, x) in r.iter().enumerate() {
        if !x.is_zero() {
            grown.set(span.nrows, j, x.clone());
        }
    }
    grown.rref();
    *span = grown;
    true
}

fn insert_components(spans: &mut [SparseMatrix], v: &GradedVector) -> bool {
    let mut grew = false;
    for (&l, coords) in &v.levels {
        grew |= span_insert(&mut spans[l as usize], coords);
    }
    grew
}

/// Echelonize per-level spans and attach the orthogonal projections.
fn from_spans(model: &VOAModel, spans: Vec<SparseMatrix>) -> Result<Subalgebra, VoaError> {
    let mut dims = Vec::new();
    let mut basis = Vec::new();
    let mut projection = Vec::new();
    for (l, span) in spans.into_iter().enumerate() {
        let d = model.dim(l as u32);
        let mut m = span;
        let pivots = m.rref();
        let k = pivots.len();
        let mut b = SparseMatrix::zeros(k, d);
        for i in 0..k {
            for (&j, v) in m.row(i) {
                b.set(i, j, v.clone());
            }
        }
        let e = if k == 0 {
            SparseMatrix::zeros(d, d)
        } else {
            let g = &model.gram[l];
            let bg = b.matmul(g);
            let small = bg.matmul(&b.transpose());
            if small.rank() != k {
                return Err(VoaError::Check(format!(
                    "scalar product degenerate on the level {l} subspace"
                )));
            }
            let mut x = SparseMatrix::zeros(k, d);
            for j in 0..d {
                let col: Vec<Scalar> = (0..k).map(|i| bg.get(i, j)).collect();
                let sol = small.solve(&col).expect("full-rank system");
                for (i, v) in sol.into_iter().enumerate() {
                    if !v.is_zero() {
                        x.set(i, j, v);
                    }
                }
            }
            b.transpose().matmul(&x)
        };
        dims.push(k);
        basis.push(b);
        projection.push(e);
    }
    Ok(Subalgebra {
        parent: model.name.clone(),
        dims,
        basis,
        projection,
    })
}

/// Smallest in-window subspace containing the vacuum and the generators,
/// closed under products, theta, L_1 and L_{-1} (and hence under adjoint
/// modes), built by saturation until the per-level ranks stabilize.
/// Products are scanned with n descending from the top of the window.
pub fn close_unitary_subalgebra(
    model: &VOAModel,
    pct: &Pct,
    generators: &[GradedVector],
) -> Result<Subalgebra, VoaError> {
    let cutoff = model.cutoff;
    let mut spans: Vec<SparseMatrix> = (0..=cutoff)
        .map(|l| SparseMatrix::zeros(0, model.dim(l)))
        .collect();
    insert_components(&mut spans, &model.vacuum());
    for g in generators {
        insert_components(&mut spans, g);
    }
    loop {
        let mut snap: Vec<(u32, GradedVector)> = Vec::new();
        for l in 0..=cutoff {
            let span = &spans[l as usize];
            for i in 0..span.nrows {
                let mut v = GradedVector::zero();
                for (&j, x) in span.row(i) {
                    v.add_term(l, j, span.ncols, x.clone());
                }
                snap.push((l, v));
            }
        }
        let mut grew = false;
        for (lu, u) in &snap {
            grew |= insert_components(&mut spans, &pct.apply(u));
            if *lu >= 1 {
                grew |= insert_components(&mut spans, &model.apply_l(1, u)?);
            }
            if *lu < cutoff {
                grew |= insert_components(&mut spans, &model.apply_l(-1, u)?);
            }
        }
        for (lu, u) in &snap {
            for (lv, v) in &snap {
                let hi = *lu as i64 + *lv as i64 - 1;
                let lo = hi - cutoff as i64;
                for n in (lo..=hi).rev() {
                    grew |= insert_components(&mut spans, &model.product(u, n, v)?);
                }
            }
        }
        if !grew {
            break;
        }
    }
    from_spans(model, spans)
}

/// Closure invariants of a subalgebra: the vacuum, in-window product
/// closure, stability under theta, L_1 and L_{-1}, the projection
/// identities, and exact commutation of e_W with L_{-1}, L_0, L_1 and
/// theta.
pub fn check_subalgebra(
    model: &VOAModel,
    pct: &Pct,
    sub: &Subalgebra,
) -> Result<(), VoaError> {
    let cutoff = model.cutoff;
    if sub.dims.len() != cutoff as usize + 1 {
        return Err(VoaError::Check("level count mismatch".into()));
    }
    if !sub.contains(&model.vacuum()) {
        return Err(VoaError::Check("vacuum missing".into()));
    }
    for l in 0..=cutoff {
        let li = l as usize;
        let e = &sub.projection[li];
        let b = &sub.basis[li];
        let g = &model.gram[li];
        if e.matmul(e) != *e {
            return Err(VoaError::Check(format!("e_W not idempotent at level {l}")));
        }
        if e.transpose().matmul(g) != g.matmul(e) {
            return Err(VoaError::Check(format!(
                "e_W not self-adjoint at level {l}"
            )));
        }
        if e.matmul(&b.transpose()) != b.transpose() {
            return Err(VoaError::Check(format!(
                "e_W not the identity on W at level {l}"
            )));
        }
        if e.rank() != sub.dims[li] {
            return Err(VoaError::Check(format!("e_W rank differs at level {l}")));
        }
        let th = &pct.matrices[li];
        if th.matmul(e) != e.matmul(th) {
            return Err(VoaError::Check(format!("[theta, e_W] != 0 at level {l}")));
        }
    }
    for n in [-1i64, 0, 1] {
        for l in 0..=cutoff {
            let t = l as i64 - n;
            if !(0..=cutoff as i64).contains(&t) {
                continue;
            }
            let ln = model.l_matrix(n, l)?;
            let lhs = sub.projection[t as usize].matmul(&ln);
            let rhs = ln.matmul(&sub.projection[l as usize]);
            if lhs != rhs {
                return Err(VoaError::Check(format!(
                    "[L_{n}, e_W] != 0 from level {l}"
                )));
            }
        }
    }
    let mut rows: Vec<(u32, GradedVector)> = Vec::new();
    for l in 0..=cutoff {
        for i in 0..sub.dims[l as usize] {
            rows.push((l, sub.basis_vector(l, i)));
        }
    }
    for (lu, u) in &rows {
        if !sub.contains(&pct.apply(u)) {
            return Err(VoaError::Check(format!("theta leaves W at level {lu}")));
        }
        if *lu >= 1 && !sub.contains(&model.apply_l(1, u)?) {
            return Err(VoaError::Check(format!("L_1 leaves W at level {lu}")));
        }
        if *lu < cutoff && !sub.contains(&model.apply_l(-1, u)?) {
            return Err(VoaError::Check(format!("L_{{-1}} leaves W at level {lu}")));
        }
    }
    for (lu, u) in &rows {
        for (lv, v) in &rows {
            let hi = *lu as i64 + *lv as i64 - 1;
            for n in (hi - cutoff as i64)..=hi {
                let p = model.product(u, n, v)?;
                if !sub.contains(&p) {
                    return Err(VoaError::Check(format!(
                        "W not closed: level {lu} times level {lv} at mode {n}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// e_W Y(a, z) e_W = Y(e_W a, z) e_W as in-window matrix identities, for
/// every parent basis vector a.
pub fn check_projection_vertex_identity(
    model: &VOAModel,
    sub: &Subalgebra,
) -> Result<(), VoaError> {
    let cutoff = model.cutoff;
    for la in 0..=cutoff {
        for ia in 0..model.dim(la) {
            let a = model.basis_vector(la, ia);
            let pa = sub.project(&a);
            for l in 0..=cutoff {
                let hi = la as i64 + l as i64 - 1;
                for n in (hi - cutoff as i64)..=hi {
                    let t = (hi - n) as usize;
                    let m = model.mode_matrix(&a, n, l)?;
                    let lhs = sub.projection[t]
                        .matmul(&m)
                        .matmul(&sub.projection[l as usize]);
                    let rhs = if pa.is_zero() {
                        SparseMatrix::zeros(model.dim(t as u32), model.dim(l))
                    } else {
                        model
                            .mode_matrix(&pa, n, l)?
                            .matmul(&sub.projection[l as usize])
                    };
                    if lhs != rhs {
                        return Err(VoaError::Check(format!(
                            "projected vertex identity fails at level {la} \
                             index {ia}, mode {n}, source {l}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// nu_W = e_W nu together with its central charge.  Verifies the Virasoro
/// commutators of the projected modes over the whole window and that
/// L^W_n agrees with L_n on W for n = -1, 0, 1.
pub fn projected_conformal_vector(
    model: &VOAModel,
    sub: &Subalgebra,
) -> Result<(GradedVector, Scalar), VoaError> {
    let nu_w = sub.project(&model.conformal_vector);
    let top = model.product(&nu_w, 3, &nu_w)?;
    let c_w = &model.scalar_product(&model.vacuum(), &top) * &Scalar::from_int(2);
    let failures = axioms::virasoro_mode_failures(model, &nu_w, &c_w)?;
    if let Some(f) = failures.first() {
        return Err(VoaError::Check(format!("projected modes: {f}")));
    }
    for n in [-1i64, 0, 1] {
        for l in 0..=model.cutoff {
            let t = l as i64 - n;
            if !(0..=model.cutoff as i64).contains(&t) {
                continue;
            }
            let mut diff = if nu_w.is_zero() {
                SparseMatrix::zeros(model.dim(t as u32), model.dim(l))
            } else {
                model.mode_matrix(&nu_w, n + 1, l)?
            };
            diff.sub_assign(&model.l_matrix(n, l)?);
            if !diff.matmul(&sub.basis[l as usize].transpose()).is_zero() {
                return Err(VoaError::Check(format!(
                    "L^W_{n} differs from L_{n} on W at level {l}"
                )));
            }
        }
    }
    Ok((nu_w, c_w))
}

/// Joint in-window kernel of all a_(j) with a in the W basis and j >= 0.
/// The result is verified against the closure invariants and the exact
/// split nu = nu_W + nu_{W^c}.
pub fn coset_subalgebra(
    model: &VOAModel,
    pct: &Pct,
    sub: &Subalgebra,
) -> Result<Subalgebra, VoaError> {
    let cutoff = model.cutoff;
    let mut spans = Vec::new();
    for l in 0..=cutoff {
        let d = model.dim(l);
        let mut cond = SparseMatrix::zeros(0, d);
        for la in 0..=cutoff {
            for i in 0..sub.dims[la as usize] {
                let a = sub.basis_vector(la, i);
                let j_hi = la as i64 + l as i64 - 1;
                let j_lo = (j_hi - cutoff as i64).max(0);
                for j in j_lo..=j_hi {
                    let m = model.mode_matrix(&a, j, l)?;
                    if !m.is_zero() {
                        cond = cond.stack(&m);
                    }
                }
            }
        }
        spans.push(cond.kernel_basis());
    }
    let coset = from_spans(model, spans)?;
    check_subalgebra(model, pct, &coset)?;
    let (nu_w, _) = projected_conformal_vector(model, sub)?;
    let (nu_c, _) = projected_conformal_vector(model, &coset)?;
    let mut diff = model.conformal_vector.clone();
    diff.add_scaled(&nu_w, &-Scalar::one());
    diff.add_scaled(&nu_c, &-Scalar::one());
    diff.prune();
    if !diff.is_zero() {
        return Err(VoaError::Check(
            "conformal vector does not split over the coset pair".into(),
        ));
    }
    Ok(coset)
}

/// The projected L_0 pair of a coset decomposition: exact complementary
/// sum to the grading, and diagonalizability with non-negative rational
/// spectra at every level.
pub fn check_coset_l0_spectra(
    model: &VOAModel,
    nu_w: &GradedVector,
    nu_c: &GradedVector,
) -> Result<(), VoaError> {
    for l in 0..=model.cutoff {
        let d = model.dim(l);
        let mw = if nu_w.is_zero() {
            SparseMatrix::zeros(d, d)
        } else {
            model.mode_matrix(nu_w, 1, l)?
        };
        let mc = if nu_c.is_zero() {
            SparseMatrix::zeros(d, d)
        } else {
            model.mode_matrix(nu_c, 1, l)?
        };
        let mut sum = mw.clone();
        sum.add_assign(&mc);
        sum.sub_assign(&SparseMatrix::identity(d).scaled(&Scalar::from_int(l as i64)));
        if !sum.is_zero() {
            return Err(VoaError::Check(format!(
                "L^W_0 + L^(W^c)_0 differs from the grading at level {l}"
            )));
        }
        for (tag, m) in [("W", &mw), ("W^c", &mc)] {
            let spec = rational_spectrum(m).ok_or_else(|| {
                VoaError::Check(format!(
                    "projected L_0 for {tag} at level {l} lacks a rational \
                     diagonalization"
                ))
            })?;
            if spec.iter().any(Scalar::is_negative) {
                return Err(VoaError::Check(format!(
                    "negative projected conformal weight for {tag} at level {l}"
                )));
            }
        }
    }
    Ok(())
}

/// Joint fixed space of a finite list of automorphisms, one matrix per
/// level each.  Every element must fix nu and preserve the invariant
/// bilinear form; whether it also preserves the scalar product is
/// reported per element.  The fixed space itself is verified against the
/// unitary closure invariants.
pub fn fixed_point_subalgebra(
    model: &VOAModel,
    form: &InvariantForm,
    pct: &Pct,
    elements: &[Vec<SparseMatrix>],
) -> Result<(Subalgebra, Vec<AutomorphismReport>), VoaError> {
    let mut reports = Vec::new();
    for maps in elements {
        let r = check_automorphism(model, form, maps);
        if !(r.automorphism_ok && r.conformal_fixed && r.bilinear_ok) {
            return Err(VoaError::Check(
                "group element is not an automorphism fixing nu and the \
                 bilinear form"
                    .into(),
            ));
        }
        reports.push(r);
    }
    let mut spans = Vec::new();
    for l in 0..=model.cutoff {
        let d = model.dim(l);
        let mut cond = SparseMatrix::zeros(0, d);
        for maps in elements {
            let mut m = maps[l as usize].clone();
            m.sub_assign(&SparseMatrix::identity(d));
            if !m.is_zero() {
                cond = cond.stack(&m);
            }
        }
        spans.push(cond.kernel_basis());
    }
    let sub = from_spans(model, spans)?;
    check_subalgebra(model, pct, &sub)?;
    Ok((sub, reports))
}

/// Exponential of the weight-preserving zero mode of a homogeneous
/// vector, one matrix per level.  The mode must be nilpotent levelwise,
/// as root-vector zero modes are on bounded charge ranges.
pub fn exp_zero_mode(
    model: &VOAModel,
    a: &GradedVector,
) -> Result<Vec<SparseMatrix>, VoaError> {
    let mut out = Vec::new();
    for l in 0..=model.cutoff {
        let d = model.dim(l);
        let n = model.hom_mode_matrix(a, 0, l)?;
        let mut sum = SparseMatrix::identity(d);
        let mut term = SparseMatrix::identity(d);
        let mut k = 1i64;
        loop {
            term = n.matmul(&term).scaled(&Scalar::from_int(k).recip());
            if term.is_zero() {
                break;
            }
            sum.add_assign(&term);
            k += 1;
            if k as usize > d + 1 {
                return Err(VoaError::Check(format!(
                    "zero mode is not nilpotent at level {l}"
                )));
            }
        }
        out.push(sum);
    }
    Ok(out)
}

/// Per-level matrices of the algebra map sending each generator to the
/// given image: every basis label is a word of negatively moded
/// generators applied to the vacuum, and the column is that word in the
/// image fields.  The result is a candidate for check_automorphism.
pub fn automorphism_from_generator_images(
    model: &VOAModel,
    images: &[GradedVector],
) -> Result<Vec<SparseMatrix>, VoaError> {
    if images.len() != model.generators.len() {
        return Err(VoaError::Check("one image per generator required".into()));
    }
    for (g, img) in model.generators.iter().zip(images) {
        if !img.is_zero() && img.homogeneous_level() != Some(g.weight) {
            return Err(VoaError::Check(format!(
                "image of {} must be homogeneous of weight {}",
                g.name, g.weight
            )));
        }
    }
    let mut out = Vec::new();
    for l in 0..=model.cutoff {
        let d = model.dim(l);
        let mut m = SparseMatrix::zeros(d, d);
        for (col, label) in model.basis_labels[l as usize].iter().enumerate() {
            let word = parse_label(model, label)?;
            let mut v = model.vacuum();
            for &(gen, hom) in word.iter().rev() {
                let wt = model.generators[gen].weight as i64;
                v = model.product(&images[gen], hom + wt - 1, &v)?;
            }
            if let Some(coords) = v.coords(l) {
                for (i, x) in coords.iter().enumerate() {
                    if !x.is_zero() {
                        m.set(i, col, x.clone());
                    }
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// Parse a basis label into (generator index, homogeneous mode) letters,
/// matching the longest generator name.
fn parse_label(model: &VOAModel, label: &str) -> Result<Vec<(usize, i64)>, VoaError> {
    if label == "1" {
        return Ok(Vec::new());
    }
    let mut word = Vec::new();
    for token in label.split_whitespace() {
        let mut found: Option<(usize, i64)> = None;
        for (gi, g) in model.generators.iter().enumerate() {
            let Some(rest) = token.strip_prefix(g.name.as_str()) else {
                continue;
            };
            let Ok(mode) = rest.parse::<i64>() else {
                continue;
            };
            if mode >= 0 {
                continue;
            }
            let longer = found
                .map(|(pg, _)| model.generators[pg].name.len() < g.name.len())
                .unwrap_or(true);
            if longer {
                found = Some((gi, mode));
            }
        }
        match found {
            Some(x) => word.push(x),
            None => {
                return Err(VoaError::Check(format!(
                    "basis label {label} is not a generator word"
                )))
            }
        }
    }
    Ok(word)
}
