//! Axiom verification on small truncations of every family.

use voa_core::axioms;
use voa_core::models;
use voa_core::Scalar;

fn s(p: i64, q: i64) -> Scalar {
    Scalar::ratio(p, q)
}

#[test]
fn borcherds_sweep_small_models() {
    let m = models::heisenberg(4);
    let rep = axioms::borcherds_sweep(&m);
    assert!(rep.passed(), "heisenberg: {:?}", rep.failures);
    assert!(rep.identities > 0);

    let m = models::virasoro(s(1, 2), 4);
    let rep = axioms::borcherds_sweep(&m);
    assert!(rep.passed(), "virasoro: {:?}", rep.failures);

    let m = models::sl2(1, 3);
    let rep = axioms::borcherds_sweep(&m);
    assert!(rep.passed(), "sl2: {:?}", rep.failures);

    let m = models::lattice(2, 3);
    let rep = axioms::borcherds_sweep(&m);
    assert!(rep.passed(), "lattice: {:?}", rep.failures);
}

#[test]
fn borcherds_sweep_tensor() {
    let h = models::heisenberg(3);
    let t = models::tensor::tensor(&h, &h, 3);
    let rep = axioms::borcherds_sweep(&t);
    assert!(rep.passed(), "tensor: {:?}", rep.failures);
}

#[test]
fn vacuum_translation_virasoro() {
    for m in [
        models::heisenberg(5),
        models::virasoro(s(1, 2), 5),
        models::lattice(2, 4),
        models::sl2(1, 4),
    ] {
        assert!(axioms::check_vacuum(&m).is_empty(), "{}", m.name);
        assert!(axioms::check_translation(&m).is_empty(), "{}", m.name);
        assert!(axioms::check_virasoro(&m).is_empty(), "{}", m.name);
        let c = axioms::extract_central_charge(&m).unwrap();
        assert_eq!(c, m.central_charge, "{}", m.name);
    }
}

#[test]
fn quasi_primary_decomposition() {
    let m = models::virasoro(s(1, 2), 6);
    for l in 0..=6 {
        axioms::check_qp_decomposition(&m, l).unwrap();
    }
    // quasi-primary dimensions at c = 1/2: one at level 0, nu at 2, none
    // at 3, one new at 4 (L_{-2}^2 combination), none at 5, one at 6
    let dims: Vec<usize> = (0..=6)
        .map(|l| axioms::quasi_primary_basis(&m, l).nrows)
        .collect();
    assert_eq!(dims, vec![1, 0, 1, 0, 1, 0, 1]);

    let h = models::heisenberg(6);
    for l in 0..=6 {
        axioms::check_qp_decomposition(&h, l).unwrap();
    }
}

#[test]
fn locality_orders() {
    // free boson: [a_m, a_n] = m delta, N(a, a) = 2
    let h = models::heisenberg(4);
    let (n_comm, n_prod) = axioms::locality_order(&h, (1, 0), (1, 0));
    assert_eq!(n_comm, Some(2));
    assert_eq!(n_prod, 2);

    // virasoro: N(nu, nu) = 4 (central term)
    let v = models::virasoro(s(1, 2), 5);
    let (n_comm, n_prod) = axioms::locality_order(&v, (2, 0), (2, 0));
    assert_eq!(n_comm, Some(4));
    assert_eq!(n_prod, 4);

    // lattice norm 2: N(e^alpha, e^{-alpha}) = 2, and e^alpha is local
    // with itself at order 0 in the OPE sense (product regular):
    // (z-w)^{-<a,a>} ~ (z-w)^{-2} so commutator order is 2... checked
    // against the product order read from the table
    let l = models::lattice(2, 4);
    // generator e^alpha sits at level 1 for norm 2; find its index
    let idx_p = l.generators.iter().position(|g| g.name == "e+").unwrap();
    let gp = &l.generators[idx_p];
    let (lv, ix, _) = gp.vector.terms().next().unwrap();
    let em = &l.generators[l.generators.iter().position(|g| g.name == "e-").unwrap()];
    let (lv2, ix2, _) = em.vector.terms().next().unwrap();
    let (n_comm, n_prod) = axioms::locality_order(&l, (lv, ix), (lv2, ix2));
    assert_eq!(n_comm, Some(2));
    assert_eq!(n_prod, 2);
}

#[test]
fn conformal_shift_free_boson() {
    let h = models::heisenberg(6);
    // a = lambda alpha with lambda = 1/2: c~ = 1 - 12 lambda^2 = -2
    let mut a = h.generators[0].vector.clone();
    a.scale(&s(1, 2));
    let chk = axioms::check_conformal_shift(&h, &a).unwrap();
    assert_eq!(chk.new_central_charge, s(-2, 1));
    assert!(chk.virasoro_ok);
    assert!(chk.recovered_ok);

    // lambda = 1: c~ = -11
    let a = h.generators[0].vector.clone();
    let chk = axioms::check_conformal_shift(&h, &a).unwrap();
    assert_eq!(chk.new_central_charge, s(-11, 1));
    assert!(chk.virasoro_ok);
    assert!(chk.recovered_ok);
}
