//! Smeared vertex operators Y(a,f) as dense complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::VoaError;
use crate::model::VOAModel;
use crate::smeared::frame::OrthoFrame;
use crate::smeared::testfn::TestFunction;
use crate::unitarity::Pct;
use crate::GradedVector;

/// Y(a,f) = sum_n f_n a_n over the whole truncated space, in frame
/// coordinates. The homogeneous mode a_n maps level l to level l - n, so
/// every block within the level window is reachable; the Fourier window must
/// cover all level differences.
pub fn smeared_matrix(
    model: &VOAModel,
    frame: &OrthoFrame,
    a: &GradedVector,
    f: &TestFunction,
) -> Result<DMatrix<Complex64>, VoaError> {
    a.homogeneous_level().ok_or(VoaError::NotHomogeneous)?;
    if f.window < model.cutoff as i64 {
        return Err(VoaError::Check(format!(
            "Fourier window {} cannot resolve all mode transfers up to cutoff {}",
            f.window, model.cutoff
        )));
    }
    let dim = frame.total_dim();
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for src in 0..=model.cutoff {
        if frame.dims[src as usize] == 0 {
            continue;
        }
        for tgt in 0..=model.cutoff {
            if frame.dims[tgt as usize] == 0 {
                continue;
            }
            let n = src as i64 - tgt as i64;
            let c = f.coeff(n);
            if c.norm() == 0.0 {
                continue;
            }
            let m = model.hom_mode_matrix(a, n, src)?;
            let block = frame.conjugate(tgt, src, &m);
            let (ro, co) = (frame.offset(tgt), frame.offset(src));
            for i in 0..block.nrows() {
                for j in 0..block.ncols() {
                    let v = block[(i, j)];
                    if v != 0.0 {
                        out[(ro + i, co + j)] += c * v;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Relative residual of the adjoint relation: the conjugate transpose of
/// Y(a,f) against (-1)^{d_a} Y(theta a, conj f).
pub fn adjoint_residual(
    model: &VOAModel,
    frame: &OrthoFrame,
    pct: &Pct,
    a: &GradedVector,
    f: &TestFunction,
) -> Result<f64, VoaError> {
    let wa = a.homogeneous_level().ok_or(VoaError::NotHomogeneous)?;
    let y = smeared_matrix(model, frame, a, f)?;
    let theta_a = pct.apply(a);
    let z = smeared_matrix(model, frame, &theta_a, &f.conj())?;
    let sign = if wa % 2 == 0 { 1.0 } else { -1.0 };
    let lhs = z * Complex64::new(sign, 0.0);
    let rhs = y.adjoint();
    let scale = frobenius(&y).max(1e-300);
    Ok(frobenius(&(lhs - rhs)) / scale)
}

/// Relative residual of rotation covariance:
/// e^{itL0} Y(a,f) e^{-itL0} against Y(a, f_t).
pub fn covariance_residual(
    model: &VOAModel,
    frame: &OrthoFrame,
    a: &GradedVector,
    f: &TestFunction,
    t: f64,
) -> Result<f64, VoaError> {
    let y = smeared_matrix(model, frame, a, f)?;
    let yt = smeared_matrix(model, frame, a, &f.rotate(t))?;
    let dim = frame.total_dim();
    let mut conj = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for src in 0..=model.cutoff {
        for tgt in 0..=model.cutoff {
            let phase = Complex64::from_polar(1.0, t * (tgt as f64 - src as f64));
            let (ro, co) = (frame.offset(tgt), frame.offset(src));
            for i in 0..frame.dims[tgt as usize] {
                for j in 0..frame.dims[src as usize] {
                    conj[(ro + i, co + j)] = y[(ro + i, co + j)] * phase;
                }
            }
        }
    }
    let scale = frobenius(&y).max(1e-300);
    Ok(frobenius(&(conj - yt)) / scale)
}
