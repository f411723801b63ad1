//! Energy estimates: the Virasoro mode bounds and per-field witnesses.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::extract_central_charge;
use crate::error::VoaError;
use crate::model::VOAModel;
use crate::scalar::Scalar;
use crate::smeared::frame::OrthoFrame;
use crate::GradedVector;

/// Exact sweep of ||L_n a||^2 <= (c/2)(|n|+1)^3 ||(L_0+1)a||^2 over the
/// basis. Both sides are rational, so the comparison carries no slack.
pub struct GoodmanWallachReport {
    pub central_charge: Scalar,
    pub checked: usize,
    pub violations: Vec<String>,
    pub max_ratio: f64,
}

pub fn goodman_wallach_check(model: &VOAModel) -> Result<GoodmanWallachReport, VoaError> {
    let c = extract_central_charge(model)?;
    if !c.is_positive() {
        return Err(VoaError::Check(
            "energy estimates need a positive central charge".into(),
        ));
    }
    let half_c = &c * &Scalar::ratio(1, 2);
    let mut checked = 0usize;
    let mut violations = Vec::new();
    let mut max_ratio = 0.0f64;
    for l in 0..=model.cutoff {
        for idx in 0..model.dim(l) {
            let a = model.basis_vector(l, idx);
            let norm_a = model.norm_sq(&a);
            for n in (l as i64 - model.cutoff as i64)..=(l as i64) {
                let la = model.apply_l(n, &a)?;
                let lhs = model.norm_sq(&la);
                let weight = Scalar::from_int(n.abs() + 1).pow(3)
                    * Scalar::from_int(l as i64 + 1).pow(2);
                let rhs = &(&half_c * &weight) * &norm_a;
                checked += 1;
                if rhs.is_positive() {
                    max_ratio = max_ratio.max(lhs.to_f64() / rhs.to_f64());
                }
                if lhs > rhs {
                    violations.push(format!(
                        "||L_{n} {}||^2 exceeds the bound at level {l}",
                        model.basis_labels[l as usize][idx]
                    ));
                }
            }
        }
    }
    Ok(GoodmanWallachReport {
        central_charge: c,
        checked,
        violations,
        max_ratio,
    })
}

/// Observed energy-bound constant for one field: the largest value of
/// ||a_n b|| / ((|n|+1)^s ||(L_0+1)^k b||) over sampled modes and vectors.
#[derive(Clone, Debug)]
pub struct EnergyBoundWitness {
    pub field: String,
    pub s: u32,
    pub k: u32,
    pub m: f64,
    pub samples: usize,
    pub max_mode: i64,
    pub max_level: u32,
}

/// How the witness samples vectors: every basis vector of every level plus
/// `extra_per_level` random unit vectors from a fixed-seed generator.
/// `max_level` restricts the sampled levels, for stability comparisons.
#[derive(Clone, Copy)]
pub struct SampleSpec {
    pub extra_per_level: usize,
    pub seed: u64,
    pub max_level: Option<u32>,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            extra_per_level: 8,
            seed: 0,
            max_level: None,
        }
    }
}

pub fn energy_bound_witness(
    model: &VOAModel,
    frame: &OrthoFrame,
    a: &GradedVector,
    field: &str,
    s: u32,
    k: u32,
    spec: SampleSpec,
) -> Result<EnergyBoundWitness, VoaError> {
    a.homogeneous_level().ok_or(VoaError::NotHomogeneous)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut best = (0.0f64, 0i64, 0u32);
    let mut samples = 0usize;
    let top = spec.max_level.unwrap_or(model.cutoff).min(model.cutoff);
    for l in 0..=top {
        let d = frame.dims[l as usize];
        if d == 0 {
            continue;
        }
        let randoms: Vec<DVector<f64>> = (0..spec.extra_per_level)
            .map(|_| {
                let mut v = DVector::from_fn(d, |_, _| gaussian(&mut rng));
                let n = v.norm();
                if n > 0.0 {
                    v /= n;
                }
                v
            })
            .collect();
        for n in (l as i64 - model.cutoff as i64)..=(l as i64) {
            let tgt = (l as i64 - n) as u32;
            let block = frame.conjugate(tgt, l, &model.hom_mode_matrix(a, n, l)?);
            let denom =
                (n.abs() as f64 + 1.0).powi(s as i32) * (l as f64 + 1.0).powi(k as i32);
            for j in 0..d {
                let ratio = block.column(j).norm() / denom;
                samples += 1;
                if ratio > best.0 {
                    best = (ratio, n, l);
                }
            }
            for b in &randoms {
                let ratio = (&block * b).norm() / denom;
                samples += 1;
                if ratio > best.0 {
                    best = (ratio, n, l);
                }
            }
        }
    }
    Ok(EnergyBoundWitness {
        field: field.to_string(),
        s,
        k,
        m: best.0,
        samples,
        max_mode: best.1,
        max_level: best.2,
    })
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen::<f64>().max(1e-300);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}
