//! Model construction against independently computed graded dimensions
//! and norms.

use voa_core::models;
use voa_core::Scalar;

fn s(p: i64, q: i64) -> Scalar {
    Scalar::ratio(p, q)
}

#[test]
fn virasoro_dimensions_after_quotient() {
    // (central charge, expected graded dims 0..=6)
    let cases: Vec<(Scalar, Vec<usize>)> = vec![
        (s(1, 2), vec![1, 0, 1, 1, 2, 2, 3]),
        (s(7, 10), vec![1, 0, 1, 1, 2, 2, 4]),
        (s(1, 1), vec![1, 0, 1, 1, 2, 2, 4]),
        (s(2, 1), vec![1, 0, 1, 1, 2, 2, 4]),
        (s(0, 1), vec![1, 0, 0, 0, 0, 0, 0]),
    ];
    for (c, dims) in cases {
        let m = models::virasoro(c.clone(), 6);
        assert_eq!(m.level_dims, dims, "c = {c}");
    }
}

#[test]
fn virasoro_c_minus_22_5_keeps_negative_norms() {
    // the quotient removes the radical only; negative-norm directions
    // survive (this is the Lee-Yang vacuum character)
    let m = models::virasoro(s(-22, 5), 6);
    assert_eq!(m.level_dims, vec![1, 0, 1, 1, 1, 1, 2]);
    assert_eq!(m.norm_sq(&m.conformal_vector), s(-11, 5));
}

#[test]
fn virasoro_norms() {
    let m = models::virasoro(s(1, 2), 6);
    let nu = &m.conformal_vector;
    assert_eq!(m.norm_sq(nu), s(1, 4), "<nu|nu> = c/2");
    let vac = m.vacuum();
    assert_eq!(m.norm_sq(&vac), s(1, 1));
}

#[test]
fn heisenberg_dimensions() {
    let m = models::heisenberg(6);
    assert_eq!(m.level_dims, vec![1, 1, 2, 3, 5, 7, 11]);
    let nu = &m.conformal_vector;
    assert_eq!(m.norm_sq(nu), s(1, 2), "<nu|nu> = c/2 at c = 1");
}

#[test]
fn sl2_dimensions_and_sugawara() {
    let m = models::sl2(1, 4);
    assert_eq!(m.level_dims, vec![1, 3, 4, 7, 13]);
    assert_eq!(m.central_charge, s(1, 1));
    assert_eq!(m.norm_sq(&m.conformal_vector), s(1, 2));

    let m2 = models::sl2(2, 3);
    assert_eq!(m2.level_dims, vec![1, 3, 9, 15]);
    assert_eq!(m2.central_charge, s(3, 2));
    assert_eq!(m2.norm_sq(&m2.conformal_vector), s(3, 4));
}

#[test]
fn lattice_dimensions() {
    let m = models::lattice(2, 4);
    assert_eq!(m.level_dims, vec![1, 3, 4, 7, 13]);
    assert_eq!(m.norm_sq(&m.conformal_vector), s(1, 2));

    let m4 = models::lattice(4, 4);
    assert_eq!(m4.level_dims, vec![1, 1, 4, 5, 9]);
    assert_eq!(m4.norm_sq(&m4.conformal_vector), s(1, 2));
}

#[test]
fn tensor_dimensions() {
    let h = models::heisenberg(4);
    let t = models::tensor::tensor(&h, &h, 4);
    assert_eq!(t.level_dims, vec![1, 2, 5, 10, 20]);
    assert_eq!(t.central_charge, s(2, 1));
    assert_eq!(t.norm_sq(&t.conformal_vector), s(1, 1), "<nu|nu> = c/2 at c = 2");
}

#[test]
fn model_serialization_roundtrip() {
    let m = models::virasoro(s(1, 2), 4);
    let json = m.to_canonical_json();
    let file: voa_core::ModelFile = serde_json::from_str(&json).unwrap();
    let m2 = voa_core::VOAModel::from_file(file).unwrap();
    assert_eq!(m2.to_canonical_json(), json);
    assert_eq!(m.fingerprint(), m2.fingerprint());
    assert_eq!(m2.level_dims, m.level_dims);
}
