//! Unitary subalgebra closure, projections, cosets, and fixed points.

use voa_core::graded::GradedVector;
use voa_core::models;
use voa_core::models::tensor::tensor;
use voa_core::subalgebra;
use voa_core::unitarity;
use voa_core::Scalar;

fn s(p: i64, q: i64) -> Scalar {
    Scalar::ratio(p, q)
}

#[test]
fn closure_trivial_and_full() {
    let m = models::heisenberg(4);
    let form = unitarity::invariant_form(&m).unwrap();
    let pct = unitarity::pct_operator(&m, &form).unwrap();

    // no generators: the vacuum line
    let w = subalgebra::close_unitary_subalgebra(&m, &pct, &[]).unwrap();
    assert_eq!(w.dims, vec![1, 0, 0, 0, 0]);
    subalgebra::check_subalgebra(&m, &pct, &w).unwrap();
    let (nu_w, c_w) = subalgebra::projected_conformal_vector(&m, &w).unwrap();
    assert!(nu_w.is_zero());
    assert_eq!(c_w, s(0, 1));

    // the current generates the whole Fock space
    let a = m.generators[0].vector.clone();
    let w = subalgebra::close_unitary_subalgebra(&m, &pct, &[a]).unwrap();
    assert_eq!(w.dims, m.level_dims);
    let (nu_w, c_w) = subalgebra::projected_conformal_vector(&m, &w).unwrap();
    assert_eq!(nu_w, m.conformal_vector);
    assert_eq!(c_w, m.central_charge);
}

#[test]
fn virasoro_closure_from_scaled_conformal_vector() {
    // closure from any nonzero level-2 vector fills L(c, 0)
    for c in [s(1, 2), s(1, 1)] {
        let m = models::virasoro(c.clone(), 5);
        let form = unitarity::invariant_form(&m).unwrap();
        let pct = unitarity::pct_operator(&m, &form).unwrap();
        let mut gen = m.conformal_vector.clone();
        gen.scale(&s(5, 3));
        let w = subalgebra::close_unitary_subalgebra(&m, &pct, &[gen]).unwrap();
        assert_eq!(w.dims, m.level_dims, "c = {c}");
        subalgebra::check_subalgebra(&m, &pct, &w).unwrap();
    }
}

#[test]
fn heisenberg_flip_fixed_points() {
    let m = models::heisenberg(6);
    let form = unitarity::invariant_form(&m).unwrap();
    let pct = unitarity::pct_operator(&m, &form).unwrap();

    let mut neg_a = m.generators[0].vector.clone();
    neg_a.scale(&s(-1, 1));
    let flip = subalgebra::automorphism_from_generator_images(&m, &[neg_a]).unwrap();

    // the image construction reproduces the parity diagonal
    for (l, mat) in flip.iter().enumerate() {
        for (i, label) in m.basis_labels[l].iter().enumerate() {
            let parts = if label == "1" {
                0
            } else {
                label.split_whitespace().count()
            };
            let expect = if parts % 2 == 0 { s(1, 1) } else { s(-1, 1) };
            assert_eq!(mat.get(i, i), expect);
        }
    }

    let (fixed, reports) =
        subalgebra::fixed_point_subalgebra(&m, &form, &pct, &[flip]).unwrap();
    // partitions with an even number of parts
    assert_eq!(fixed.dims, vec![1, 0, 1, 1, 3, 3, 6]);
    assert!(reports[0].sesquilinear_ok);
    subalgebra::check_projection_vertex_identity(&m, &fixed).unwrap();

    let (nu_w, c_w) = subalgebra::projected_conformal_vector(&m, &fixed).unwrap();
    assert_eq!(nu_w, m.conformal_vector);
    assert_eq!(c_w, s(1, 1));
}

#[test]
fn tensor_factor_coset_recovers_complement() {
    let h = models::heisenberg(4);
    let m = tensor(&h, &h, 4);
    let form = unitarity::invariant_form(&m).unwrap();
    let pct = unitarity::pct_operator(&m, &form).unwrap();

    let left = m
        .generators
        .iter()
        .find(|g| g.name == "a|1")
        .unwrap()
        .vector
        .clone();
    let w = subalgebra::close_unitary_subalgebra(&m, &pct, &[left]).unwrap();
    assert_eq!(w.dims, vec![1, 1, 2, 3, 5]);
    subalgebra::check_subalgebra(&m, &pct, &w).unwrap();
    subalgebra::check_projection_vertex_identity(&m, &w).unwrap();

    let (nu_w, c_w) = subalgebra::projected_conformal_vector(&m, &w).unwrap();
    assert_eq!(c_w, s(1, 1));

    let coset = subalgebra::coset_subalgebra(&m, &pct, &w).unwrap();
    assert_eq!(coset.dims, vec![1, 1, 2, 3, 5]);
    let right = &m.generators.iter().find(|g| g.name == "1|a").unwrap().vector;
    assert!(coset.contains(right));
    assert!(!coset.contains(&w.basis_vector(1, 0)));

    let (nu_c, c_c) = subalgebra::projected_conformal_vector(&m, &coset).unwrap();
    assert_eq!(&c_w + &c_c, m.central_charge);
    subalgebra::check_coset_l0_spectra(&m, &nu_w, &nu_c).unwrap();

    let mut sum = nu_w.clone();
    sum.add_scaled(&nu_c, &Scalar::one());
    assert_eq!(sum, m.conformal_vector);
}

#[test]
fn sl2_virasoro_coset_is_vacuum_line() {
    let m = models::sl2(1, 4);
    let form = unitarity::invariant_form(&m).unwrap();
    let pct = unitarity::pct_operator(&m, &form).unwrap();

    let w =
        subalgebra::close_unitary_subalgebra(&m, &pct, &[m.conformal_vector.clone()])
            .unwrap();
    // L(1, 0) inside sl2 level 1: partitions into parts >= 2
    assert_eq!(w.dims, vec![1, 0, 1, 1, 2]);

    let coset = subalgebra::coset_subalgebra(&m, &pct, &w).unwrap();
    assert_eq!(coset.dims, vec![1, 0, 0, 0, 0]);

    let (nu_w, c_w) = subalgebra::projected_conformal_vector(&m, &w).unwrap();
    let (nu_c, c_c) = subalgebra::projected_conformal_vector(&m, &coset).unwrap();
    assert_eq!(nu_w, m.conformal_vector);
    assert!(nu_c.is_zero());
    assert_eq!(c_w, s(1, 1));
    assert_eq!(c_c, s(0, 1));
    subalgebra::check_coset_l0_spectra(&m, &nu_w, &nu_c).unwrap();
}

#[test]
fn sl2_singlets_from_unipotent_pair() {
    let m = models::sl2(1, 4);
    let form = unitarity::invariant_form(&m).unwrap();
    let pct = unitarity::pct_operator(&m, &form).unwrap();

    let e = m.generators.iter().find(|g| g.name == "e").unwrap();
    let f = m.generators.iter().find(|g| g.name == "f").unwrap();
    let exp_e = subalgebra::exp_zero_mode(&m, &e.vector).unwrap();
    let exp_f = subalgebra::exp_zero_mode(&m, &f.vector).unwrap();

    let (fixed, reports) =
        subalgebra::fixed_point_subalgebra(&m, &form, &pct, &[exp_e, exp_f]).unwrap();
    // coefficients of (1 - q) p(q): the joint kernel of e_0 and f_0
    assert_eq!(fixed.dims, vec![1, 0, 1, 1, 2]);
    // complexified one-parameter samples preserve the bilinear form but
    // not the scalar product
    for r in &reports {
        assert!(r.automorphism_ok && r.conformal_fixed && r.bilinear_ok);
        assert!(!r.sesquilinear_ok);
    }

    // the fixed space is exactly the Virasoro subalgebra of the Sugawara
    // vector
    let w =
        subalgebra::close_unitary_subalgebra(&m, &pct, &[m.conformal_vector.clone()])
            .unwrap();
    for l in 0..fixed.basis.len() {
        assert_eq!(fixed.basis[l], w.basis[l], "level {l}");
    }
}

#[test]
fn generator_images_identity_and_weyl() {
    let m = models::sl2(1, 3);
    let form = unitarity::invariant_form(&m).unwrap();

    let idents: Vec<GradedVector> =
        m.generators.iter().map(|g| g.vector.clone()).collect();
    let id_maps = subalgebra::automorphism_from_generator_images(&m, &idents).unwrap();
    for (l, mat) in id_maps.iter().enumerate() {
        assert_eq!(*mat, voa_core::SparseMatrix::identity(m.dim(l as u32)));
    }

    // Weyl involution: e -> -f, h -> -h, f -> -e
    let vec_of = |name: &str| {
        m.generators
            .iter()
            .find(|g| g.name == name)
            .unwrap()
            .vector
            .clone()
    };
    let neg = |mut v: GradedVector| {
        v.scale(&s(-1, 1));
        v
    };
    let weyl = subalgebra::automorphism_from_generator_images(
        &m,
        &[neg(vec_of("f")), neg(vec_of("h")), neg(vec_of("e"))],
    )
    .unwrap();
    let r = unitarity::check_automorphism(&m, &form, &weyl);
    assert!(
        r.automorphism_ok && r.conformal_fixed && r.bilinear_ok && r.sesquilinear_ok
    );
}
