//! Invariant form, PCT, adjoints, and Gram positivity across the model
//! families.

use voa_core::models;
use voa_core::unitarity;
use voa_core::Scalar;

fn s(p: i64, q: i64) -> Scalar {
    Scalar::ratio(p, q)
}

#[test]
fn invariant_form_values() {
    // (nu, nu) = c/2 in every family
    let cases = vec![
        (models::virasoro(s(1, 2), 5), s(1, 4)),
        (models::heisenberg(5), s(1, 2)),
        (models::sl2(1, 4), s(1, 2)),
        (models::lattice(2, 4), s(1, 2)),
    ];
    for (m, expect) in cases {
        let f = unitarity::invariant_form(&m).unwrap();
        let nu = &m.conformal_vector;
        assert_eq!(f.pair(nu, nu), expect, "{}", m.name);
        let vac = m.vacuum();
        assert_eq!(f.pair(&vac, &vac), s(1, 1), "{}", m.name);
    }

    // (a, a) = -1 for the free boson: theta flips the sign of a
    let h = models::heisenberg(5);
    let f = unitarity::invariant_form(&h).unwrap();
    let a = &h.generators[0].vector;
    assert_eq!(f.pair(a, a), s(-1, 1));
}

#[test]
fn pct_operator_four_families() {
    for m in [
        models::virasoro(s(1, 2), 5),
        models::heisenberg(5),
        models::sl2(1, 4),
        models::lattice(2, 4),
    ] {
        let f = unitarity::invariant_form(&m).unwrap();
        let pct = unitarity::pct_operator(&m, &f).unwrap();
        assert!(pct.involution_ok, "{}: theta^2 != 1", m.name);
        assert!(pct.vacuum_ok, "{}: theta vac != vac", m.name);
        assert!(pct.conformal_ok, "{}: theta nu != nu", m.name);
        assert!(pct.automorphism_ok, "{}: theta not an automorphism", m.name);
        assert!(pct.antiunitary_ok, "{}: theta not antiunitary", m.name);
        assert!(
            unitarity::check_generator_adjoints(&m, &pct).is_empty(),
            "{}",
            m.name
        );
    }
}

#[test]
fn pct_images_of_generators() {
    // theta a = -a for the free boson
    let h = models::heisenberg(4);
    let f = unitarity::invariant_form(&h).unwrap();
    let pct = unitarity::pct_operator(&h, &f).unwrap();
    let a = &h.generators[0].vector;
    let mut img = pct.apply(a);
    img.add_scaled(a, &Scalar::one());
    img.prune();
    assert!(img.is_zero(), "theta a != -a");

    // theta e = -f, theta h = -h for affine sl2
    let m = models::sl2(1, 3);
    let f = unitarity::invariant_form(&m).unwrap();
    let pct = unitarity::pct_operator(&m, &f).unwrap();
    let e = &m.generators[0].vector;
    let h_gen = &m.generators[1].vector;
    let fv = &m.generators[2].vector;
    let mut img = pct.apply(e);
    img.add_scaled(fv, &Scalar::one());
    img.prune();
    assert!(img.is_zero(), "theta e != -f");
    let mut img = pct.apply(h_gen);
    img.add_scaled(h_gen, &Scalar::one());
    img.prune();
    assert!(img.is_zero(), "theta h != -h");

    // theta e^{alpha} = -e^{-alpha} at norm 2 (weight 1)
    let l = models::lattice(2, 4);
    let f = unitarity::invariant_form(&l).unwrap();
    let pct = unitarity::pct_operator(&l, &f).unwrap();
    let ep = &l.generators[1].vector;
    let em = &l.generators[2].vector;
    let mut img = pct.apply(ep);
    img.add_scaled(em, &Scalar::one());
    img.prune();
    assert!(img.is_zero(), "theta e+ != -e-");
}

#[test]
fn adjoint_pairings() {
    for m in [
        models::virasoro(s(1, 2), 5),
        models::heisenberg(5),
        models::sl2(1, 3),
        models::lattice(2, 4),
    ] {
        let f = unitarity::invariant_form(&m).unwrap();
        let pct = unitarity::pct_operator(&m, &f).unwrap();
        let fails = unitarity::check_adjoint_pairing(&m, &pct);
        assert!(fails.is_empty(), "{}: {:?}", m.name, fails);
    }
}

#[test]
fn l_mode_adjoints() {
    // (L_n)^+ = L_{-n}
    let m = models::virasoro(s(1, 2), 6);
    let f = unitarity::invariant_form(&m).unwrap();
    let pct = unitarity::pct_operator(&m, &f).unwrap();
    for n in -4i64..=4 {
        for src in 0..=6u32 {
            let t = src as i64 - n;
            if !(0..=6).contains(&t) {
                continue;
            }
            let adj = unitarity::adjoint_mode_matrix(
                &m,
                &pct,
                &m.conformal_vector,
                n,
                t as u32,
            )
            .unwrap();
            let expect = m.l_matrix(-n, t as u32).unwrap();
            assert_eq!(adj.to_dense(), expect.to_dense(), "n = {n}, src = {src}");
        }
    }
}

#[test]
fn positivity_unitary_and_nonunitary() {
    for c in [s(1, 2), s(7, 10), s(1, 1), s(2, 1)] {
        let m = models::virasoro(c.clone(), 6);
        let rep = unitarity::gram_positivity(&m);
        assert!(rep.positive_definite, "c = {c}");
    }
    for m in [models::heisenberg(6), models::sl2(1, 4), models::lattice(2, 4)] {
        let rep = unitarity::gram_positivity(&m);
        assert!(rep.positive_definite, "{}", m.name);
    }

    // c = -22/5 has a negative-norm vector by level 2
    let m = models::virasoro(s(-22, 5), 4);
    let rep = unitarity::gram_positivity(&m);
    assert!(!rep.positive_definite);
    let first = rep.first_nonpositive_level.unwrap();
    assert!(first <= 4, "witness must appear by level 4, found {first}");
    assert_eq!(first, 2);
    let (lvl, _, norm) = rep.witness.unwrap();
    assert_eq!(lvl, 2);
    assert_eq!(norm, s(-11, 5));
}

#[test]
fn heisenberg_flip_is_unitary_automorphism() {
    // a -> -a extends to words by parity of the part count
    let h = models::heisenberg(5);
    let f = unitarity::invariant_form(&h).unwrap();
    let maps: Vec<voa_core::SparseMatrix> = (0..=5u32)
        .map(|l| {
            let labels = &h.basis_labels[l as usize];
            let mut m = voa_core::SparseMatrix::zeros(labels.len(), labels.len());
            for (i, lab) in labels.iter().enumerate() {
                let parts = if lab == "1" {
                    0
                } else {
                    lab.split(' ').count()
                };
                let v = if parts % 2 == 0 {
                    Scalar::one()
                } else {
                    -Scalar::one()
                };
                m.set(i, i, v);
            }
            m
        })
        .collect();
    let rep = unitarity::check_automorphism(&h, &f, &maps);
    assert!(rep.automorphism_ok);
    assert!(rep.conformal_fixed);
    assert!(rep.bilinear_ok);
    assert!(rep.sesquilinear_ok);
}
