//! The four batch check suites.  Each builds a list of records; the
//! caller assembles them into a report.

use serde_json::json;

use voa_core::axioms;
use voa_core::model::VOAModel;
use voa_core::scalar::Scalar;
use voa_core::smeared::energy::energy_bound_witness;
use voa_core::smeared::ladder;
use voa_core::smeared::operators::{adjoint_residual, covariance_residual};
use voa_core::smeared::wightman::wightman_residual;
use voa_core::smeared::{goodman_wallach_check, OrthoFrame, SampleSpec, SmearedField, TestFunction};
use voa_core::subalgebra;
use voa_core::unitarity::{self, invariant_form, pct_operator};
use voa_core::{GradedVector, VoaError};

use crate::report::{timed, timed_try, CheckRecord};

/// Fixed rotation angle for the covariance records; any non-lattice value
/// exercises all the phases.
const COVARIANCE_ANGLE: f64 = 0.7361;

pub fn axioms_suite(
    model: &VOAModel,
    max_level: Option<u32>,
) -> Result<Vec<CheckRecord>, VoaError> {
    let cutoff = model.cutoff as i64;
    let cap = max_level.unwrap_or(model.cutoff).min(model.cutoff);
    let mut recs = vec![
        timed(|| {
            CheckRecord::exact(
                "axioms/vacuum",
                "vacuum creation and identity mode act as required",
                cutoff,
                axioms::check_vacuum(model).is_empty(),
            )
        }),
        timed(|| {
            CheckRecord::exact(
                "axioms/translation",
                "L_{-1} satisfies the derivative mode relation",
                cutoff,
                axioms::check_translation(model).is_empty(),
            )
        }),
        timed(|| {
            CheckRecord::exact(
                "axioms/virasoro_modes",
                "conformal modes satisfy the Virasoro relations",
                cutoff,
                axioms::check_virasoro(model).is_empty(),
            )
        }),
        timed(|| {
            let sweep = axioms::borcherds_sweep_capped(model, cap);
            CheckRecord::exact(
                "axioms/borcherds",
                "Borcherds identity holds for every in-window basis triple",
                cap as i64,
                sweep.passed(),
            )
            .with_details(json!({
                "identities": sweep.identities,
                "failures": sweep.failures,
            }))
        }),
    ];
    recs.push(timed(|| {
        let mut orders = serde_json::Map::new();
        let mut pass = true;
        for (i, gi) in model.generators.iter().enumerate() {
            for gj in model.generators.iter().skip(i) {
                let a = (gi.weight, basis_index(&gi.vector));
                let b = (gj.weight, basis_index(&gj.vector));
                let (ord, window) = axioms::locality_order(model, a, b);
                pass &= ord.is_some();
                orders.insert(
                    format!("{},{}", gi.name, gj.name),
                    json!({ "order": ord, "window": window }),
                );
            }
        }
        CheckRecord::exact(
            "axioms/locality_orders",
            "every generator pair has a finite commutator order",
            cutoff,
            pass,
        )
        .with_details(serde_json::Value::Object(orders))
    }));
    recs.push(timed(|| {
        let mut failures = Vec::new();
        for l in 0..=cap {
            if let Err(e) = axioms::check_qp_decomposition(model, l) {
                failures.push(e);
            }
        }
        CheckRecord::exact(
            "axioms/quasi_primary_split",
            "each level splits into quasi-primaries plus L_{-1} images",
            cap as i64,
            failures.is_empty(),
        )
        .with_details(json!({ "failures": failures }))
    }));
    Ok(recs)
}

/// Basis index of a generator vector; shipped families use plain basis
/// vectors for generators.
fn basis_index(v: &GradedVector) -> usize {
    if let Some(l) = v.homogeneous_level() {
        if let Some(coords) = v.levels.get(&l) {
            for (i, x) in coords.iter().enumerate() {
                if !x.is_zero() {
                    return i;
                }
            }
        }
    }
    0
}

pub fn unitarity_suite(model: &VOAModel) -> Result<Vec<CheckRecord>, VoaError> {
    let cutoff = model.cutoff as i64;
    let mut recs = Vec::new();

    recs.push(timed(|| {
        let rep = unitarity::gram_positivity(model);
        let minors: Vec<_> = rep
            .inertia
            .iter()
            .enumerate()
            .map(|(l, i)| {
                json!({
                    "level": l,
                    "positive": i.positive,
                    "negative": i.negative,
                    "zero": i.zero,
                })
            })
            .collect();
        let mut details = json!({ "inertia": minors });
        if let Some((l, coords, norm)) = &rep.witness {
            details["nonpositive_witness"] = json!({
                "level": l,
                "coordinates": coords,
                "norm": norm,
            });
        }
        CheckRecord::exact(
            "unitarity/gram_positivity",
            "every level Gram matrix is positive definite",
            cutoff,
            rep.positive_definite,
        )
        .with_details(details)
    }));

    let form = match invariant_form(model) {
        Ok(f) => {
            recs.push(CheckRecord::exact(
                "unitarity/invariant_form",
                "normalized invariant bilinear form exists and is unique",
                cutoff,
                true,
            ));
            f
        }
        Err(e) => {
            recs.push(
                CheckRecord::exact(
                    "unitarity/invariant_form",
                    "normalized invariant bilinear form exists and is unique",
                    cutoff,
                    false,
                )
                .with_details(json!({ "error": e.to_string() })),
            );
            return Ok(recs);
        }
    };

    match pct_operator(model, &form) {
        Ok(pct) => {
            recs.push(timed(|| {
                let theta: Vec<_> = pct
                    .matrices
                    .iter()
                    .map(crate::files::sparse_to_dense)
                    .collect();
                CheckRecord::exact(
                    "unitarity/pct",
                    "theta is an antiunitary involution fixing vacuum and nu",
                    cutoff,
                    pct.passed(),
                )
                .with_details(json!({ "theta": theta }))
            }));
            recs.push(timed(|| {
                CheckRecord::exact(
                    "unitarity/adjoint_pairing",
                    "mode adjoints pair exactly against the scalar product",
                    cutoff,
                    unitarity::check_adjoint_pairing(model, &pct).is_empty(),
                )
            }));
            recs.push(timed(|| {
                CheckRecord::exact(
                    "unitarity/generator_adjoints",
                    "declared generator adjoints match theta",
                    cutoff,
                    unitarity::check_generator_adjoints(model, &pct).is_empty(),
                )
            }));
        }
        Err(e) => recs.push(
            CheckRecord::exact(
                "unitarity/pct",
                "theta is an antiunitary involution fixing vacuum and nu",
                cutoff,
                false,
            )
            .with_details(json!({ "error": e.to_string() })),
        ),
    }
    Ok(recs)
}

pub fn subalgebra_suite(model: &VOAModel) -> Result<Vec<CheckRecord>, VoaError> {
    let cutoff = model.cutoff as i64;
    let form = invariant_form(model)?;
    let pct = pct_operator(model, &form)?;
    let mut recs = Vec::new();

    let nu = model.conformal_vector.clone();
    let w = subalgebra::close_unitary_subalgebra(model, &pct, &[nu])?;
    recs.push(timed(|| {
        CheckRecord::exact(
            "subalgebra/virasoro_closure",
            "closure of nu is theta- and mode-stable and holds the vacuum",
            cutoff,
            subalgebra::check_subalgebra(model, &pct, &w).is_ok(),
        )
        .with_details(json!({ "dims": w.dims }))
    }));

    let (nu_w, c_w) = subalgebra::projected_conformal_vector(model, &w)?;
    recs.push(timed(|| {
        let mut diff = nu_w.clone();
        diff.add_scaled(&model.conformal_vector, &Scalar::from_int(-1));
        diff.prune();
        CheckRecord::exact(
            "subalgebra/conformal_projection",
            "projected conformal vector of the nu closure is nu itself",
            cutoff,
            diff.is_zero() && c_w == model.central_charge,
        )
        .with_details(json!({ "c_w": c_w }))
    }));

    let coset = subalgebra::coset_subalgebra(model, &pct, &w)?;
    let (nu_c, c_c) = subalgebra::projected_conformal_vector(model, &coset)?;
    recs.push(timed(|| {
        let mut split = nu_w.clone();
        split.add_scaled(&nu_c, &Scalar::one());
        split.add_scaled(&model.conformal_vector, &Scalar::from_int(-1));
        split.prune();
        let charges = &c_w + &c_c == model.central_charge;
        let spectra = subalgebra::check_coset_l0_spectra(model, &nu_w, &nu_c).is_ok();
        CheckRecord::exact(
            "subalgebra/coset_split",
            "nu splits exactly across the subalgebra and its coset",
            cutoff,
            split.is_zero() && charges && spectra,
        )
        .with_details(json!({ "coset_dims": coset.dims, "c_coset": c_c }))
    }));
    Ok(recs)
}

pub fn smeared_suite(
    model: &VOAModel,
    window: i64,
    seed: u64,
) -> Result<Vec<CheckRecord>, VoaError> {
    let cutoff = model.cutoff as i64;
    let mut recs = Vec::new();
    let frame = match OrthoFrame::new(model) {
        Ok(f) => f,
        Err(e) => {
            recs.push(
                CheckRecord::exact(
                    "smeared/frame",
                    "level Gram matrices admit an orthonormal frame",
                    cutoff,
                    false,
                )
                .with_details(json!({ "error": e.to_string() })),
            );
            return Ok(recs);
        }
    };
    let form = invariant_form(model)?;
    let pct = pct_operator(model, &form)?;
    let spec = SampleSpec {
        seed,
        ..SampleSpec::default()
    };

    recs.push(timed(|| match goodman_wallach_check(model) {
        Ok(rep) => CheckRecord::exact(
            "smeared/goodman_wallach",
            "||L_n a|| <= sqrt(c/2)(|n|+1)^{3/2} ||(L_0+1)a|| on the window",
            cutoff,
            rep.violations.is_empty(),
        )
        .with_details(json!({
            "checked": rep.checked,
            "max_ratio": rep.max_ratio,
            "violations": rep.violations,
        })),
        Err(e) => CheckRecord::exact(
            "smeared/goodman_wallach",
            "||L_n a|| <= sqrt(c/2)(|n|+1)^{3/2} ||(L_0+1)a|| on the window",
            cutoff,
            false,
        )
        .with_details(json!({ "error": e.to_string() })),
    }));

    let bump = TestFunction::bump(0.0, std::f64::consts::PI, window)?;
    let mut fields: Vec<(String, GradedVector)> = model
        .generators
        .iter()
        .map(|g| (g.name.clone(), g.vector.clone()))
        .collect();
    if !fields.iter().any(|(n, _)| n == "nu") {
        fields.push(("nu".into(), model.conformal_vector.clone()));
    }

    for (name, v) in &fields {
        recs.push(timed_try(|| {
            let r = adjoint_residual(model, &frame, &pct, v, &bump)?;
            Ok::<_, VoaError>(CheckRecord::residual(
                &format!("smeared/adjoint/{name}"),
                "smeared adjoint matches the PCT-conjugated smearing",
                window,
                r,
                1e-12,
            ))
        })?);
        recs.push(timed_try(|| {
            let r = covariance_residual(model, &frame, v, &bump, COVARIANCE_ANGLE)?;
            Ok::<_, VoaError>(CheckRecord::residual(
                &format!("smeared/covariance/{name}"),
                "smeared operator transforms covariantly under rotation",
                window,
                r,
                1e-12,
            ))
        })?);

        if model.cutoff >= 2 {
            recs.push(timed_try(|| {
                let weight = v.homogeneous_level().unwrap_or(1).max(1);
                let full = energy_bound_witness(model, &frame, v, name, weight, 1, spec)?;
                let capped = energy_bound_witness(
                    model,
                    &frame,
                    v,
                    name,
                    weight,
                    1,
                    SampleSpec {
                        max_level: Some(model.cutoff - 1),
                        ..spec
                    },
                )?;
                let drift = if full.m > 0.0 {
                    ((full.m - capped.m) / full.m).max(0.0)
                } else {
                    0.0
                };
                Ok::<_, VoaError>(
                    CheckRecord::residual(
                        &format!("smeared/ebound/{name}"),
                        "energy-bound witness is stable when the top level is dropped",
                        cutoff,
                        drift,
                        0.05,
                    )
                    .with_details(json!({
                        "m": full.m,
                        "m_without_top_level": capped.m,
                        "s": full.s,
                        "k": full.k,
                        "max_mode": full.max_mode,
                        "max_level": full.max_level,
                        "samples": full.samples,
                    })),
                )
            })?);
        }
    }

    // locality of smeared pairs with disjoint supports, on the vacuum
    let qp: Vec<(&str, &GradedVector)> = fields
        .iter()
        .filter(|(_, v)| model.apply_l(1, v).map(|w| w.is_zero()).unwrap_or(false))
        .map(|(n, v)| (n.as_str(), v))
        .collect();
    let f = TestFunction::bump(0.0, 1.0, window)?;
    let g = TestFunction::bump(2.0, 3.0, window)?;
    for (i, (na, a)) in qp.iter().enumerate() {
        for (nb, b) in qp.iter().skip(i) {
            let wa = a.homogeneous_level().unwrap_or(0);
            let wb = b.homogeneous_level().unwrap_or(0);
            if wa + wb > model.cutoff + 1 {
                continue;
            }
            recs.push(timed_try(|| {
                let rep = wightman_residual(
                    model,
                    &frame,
                    SmearedField {
                        vector: a,
                        function: &f,
                    },
                    SmearedField {
                        vector: b,
                        function: &g,
                    },
                    &model.vacuum(),
                    spec,
                )?;
                Ok::<_, VoaError>(
                    CheckRecord::residual(
                        &format!("smeared/wightman/{na},{nb}"),
                        "smeared commutator vanishes for disjoint supports",
                        window,
                        rep.residual,
                        rep.declared_bound,
                    )
                    .with_details(json!({
                        "locality_order": rep.locality_order,
                        "declared_bound": rep.declared_bound,
                    })),
                )
            })?);
        }
    }

    // single-field module checks keyed by the distinct quasi-primary weights
    let mut weights: Vec<u32> = qp
        .iter()
        .filter_map(|(_, v)| v.homogeneous_level())
        .filter(|d| *d > 0)
        .collect();
    weights.sort_unstable();
    weights.dedup();
    for d in weights {
        // inner path and series path truncate compatibly at window - d
        let n_max = window - d as i64;
        if n_max < 8 {
            continue;
        }
        let n_max = n_max.min(200) as usize;
        recs.push(timed_try(|| {
            let lad = ladder::ladder_module(d, n_max)?;
            let f2 = TestFunction::bump(1.0, 3.0, window)?;
            let s = ladder::symplectic_form(&lad, 1.0, &bump, &f2)?;
            let si = ladder::symplectic_inner_path(&lad, 1.0, &bump, &f2, n_max);
            Ok::<_, VoaError>(
                CheckRecord::residual(
                    &format!("smeared/symplectic/d{d}"),
                    "mode-series and scalar-product paths to the symplectic form agree",
                    n_max as i64 + d as i64,
                    (s - si).abs(),
                    1e-10,
                )
                .with_details(json!({ "series": s, "inner": si })),
            )
        })?);

        recs.push(timed_try(|| {
            let rep = ladder::bisognano_wichmann_residual(d, &bump, n_max, 12.0)?;
            Ok::<_, VoaError>(
                CheckRecord::residual(
                    &format!("smeared/bw/d{d}"),
                    "modular flow matches reflection on the spectral window",
                    rep.n_max as i64,
                    rep.residual,
                    1e-3,
                )
                .with_details(json!({
                    "n_max": rep.n_max,
                    "residual_half": rep.residual_half,
                    "kept": rep.kept,
                })),
            )
        })?);
    }
    Ok(recs)
}
