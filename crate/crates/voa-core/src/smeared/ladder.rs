//! The irreducible sl(2) module generated by one quasi-primary vector:
//! the a^n = L_{-1}^n a / n! ladder, smeared vectors a(f), the symplectic
//! form of the one-particle net, and the modular-flow residual.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::VoaError;
use crate::scalar::Scalar;
use crate::smeared::testfn::{Neumaier, TestFunction};

/// Exact data of the lowest-weight-d module: norms and L_1 action on the
/// ladder, derived from the commutation relations rather than assumed.
pub struct LadderModule {
    pub d: u32,
    /// ||a^n||^2 with ||a|| = 1.
    pub norms_sq: Vec<Scalar>,
    /// L_1 a^n = l1_coeffs[n] a^{n-1} (entry 0 unused).
    pub l1_coeffs: Vec<Scalar>,
}

/// Builds the ladder by the operator recursion: with t_n the coefficient in
/// L_1 L_{-1}^n a = t_n L_{-1}^{n-1} a, the commutator [L_1, L_{-1}] = 2 L_0
/// gives t_n = t_{n-1} + 2(d + n - 1), and the norms follow from
/// <L_{-1}x | L_{-1}x> = <x | L_1 L_{-1} x>.
pub fn ladder_module(d: u32, n_max: usize) -> Result<LadderModule, VoaError> {
    if d == 0 {
        return Err(VoaError::Check(
            "trivial module: weight zero has no ladder".into(),
        ));
    }
    let mut norms_sq = vec![Scalar::one()];
    let mut l1_coeffs = vec![Scalar::zero()];
    let mut t = Scalar::zero();
    let mut g = Scalar::one();
    for n in 1..=n_max {
        t += Scalar::from_int(2 * (d as i64 + n as i64 - 1));
        g = &g * &t;
        let nf = Scalar::factorial(n as u32);
        norms_sq.push(&g * &(&nf * &nf).recip());
        l1_coeffs.push(&t * &Scalar::from_int(n as i64).recip());
    }
    Ok(LadderModule {
        d,
        norms_sq,
        l1_coeffs,
    })
}

/// Element of the module as coefficients over the a^n basis.
#[derive(Clone, Debug)]
pub struct ModuleVector {
    pub d: u32,
    pub coeffs: Vec<Complex64>,
}

impl ModuleVector {
    /// Inner product, antilinear in self; the a^n are orthogonal.
    pub fn inner(&self, other: &ModuleVector, ladder: &LadderModule) -> Complex64 {
        let mut re = Neumaier::default();
        let mut im = Neumaier::default();
        for (n, (x, y)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            let z = x.conj() * y * ladder.norms_sq[n].to_f64();
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value())
    }

    pub fn norm(&self, ladder: &LadderModule) -> f64 {
        self.inner(self, ladder).re.max(0.0).sqrt()
    }
}

/// a(f) = sum_n f_{-n-d} a^n, truncated at n_max.
pub fn a_of_f(
    ladder: &LadderModule,
    f: &TestFunction,
    n_max: usize,
) -> ModuleVector {
    let d = ladder.d as i64;
    ModuleVector {
        d: ladder.d,
        coeffs: (0..=n_max).map(|n| f.coeff(-(n as i64) - d)).collect(),
    }
}

/// The odd polynomial with p_d(n) = C(d+n-1, n-d) at integers:
/// p_d(x) = x (x^2-1)(x^2-4)...(x^2-(d-1)^2) / (2d-1)!.
pub fn p_polynomial(d: u32) -> Result<Vec<Scalar>, VoaError> {
    if d == 0 {
        return Err(VoaError::Check("weight must be positive".into()));
    }
    let mut p = vec![Scalar::zero(), Scalar::one()];
    for k in 1..d as i64 {
        let k2 = Scalar::from_int(k * k);
        let mut q = vec![Scalar::zero(); p.len() + 2];
        for (i, coef) in p.iter().enumerate() {
            q[i + 2] += coef.clone();
            q[i] += -&(coef * &k2);
        }
        p = q;
    }
    let scale = Scalar::factorial(2 * d - 1).recip();
    Ok(p.into_iter().map(|c| &c * &scale).collect())
}

pub fn p_eval(p: &[Scalar], x: i64) -> Scalar {
    let xs = Scalar::from_int(x);
    let mut acc = Scalar::zero();
    for c in p.iter().rev() {
        acc = &(&acc * &xs) + c;
    }
    acc
}

/// Fourier-sum form of Im(a(f1) | a(f2)):
/// (||a||^2 / 4i) sum_m (f1_m f2_{-m} - f2_m f1_{-m}) p_d(m).
pub fn symplectic_form(
    ladder: &LadderModule,
    norm_a: f64,
    f1: &TestFunction,
    f2: &TestFunction,
) -> Result<f64, VoaError> {
    if !f1.is_real() || !f2.is_real() {
        return Err(VoaError::Check(
            "symplectic form needs real test functions".into(),
        ));
    }
    let p = p_polynomial(ladder.d)?;
    let window = f1.window.min(f2.window);
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for m in -window..=window {
        let pm = p_eval(&p, m).to_f64();
        if pm == 0.0 {
            continue;
        }
        let z = (f1.coeff(m) * f2.coeff(-m) - f2.coeff(m) * f1.coeff(-m)) * pm;
        re.add(z.re);
        im.add(z.im);
    }
    let total = Complex64::new(re.value(), im.value()) * Complex64::new(0.0, -0.25);
    Ok(total.re * norm_a * norm_a)
}

/// Direct evaluation Im(a(f1) | a(f2)) on the truncated ladder.
pub fn symplectic_inner_path(
    ladder: &LadderModule,
    norm_a: f64,
    f1: &TestFunction,
    f2: &TestFunction,
    n_max: usize,
) -> f64 {
    let v1 = a_of_f(ladder, f1, n_max);
    let v2 = a_of_f(ladder, f2, n_max);
    v1.inner(&v2, ladder).im * norm_a * norm_a
}

pub struct BwReport {
    pub residual: f64,
    pub residual_half: f64,
    pub n_max: usize,
    pub lambda_cut: f64,
    pub kept: usize,
    pub kept_half: usize,
}

/// Modular-flow residual: K = i pi (L_1 - L_{-1}) on the truncated ladder,
/// compared against reflection. In the phase-rotated orthonormal basis
/// (-i)^n a^n / ||a^n||, K becomes the real symmetric tridiagonal with
/// off-diagonal -pi sqrt(m(2d+m-1)). The flow e^{K/2} is evaluated on the
/// spectral window |lambda| <= lambda_cut: the truncated top of the spectrum
/// is a boundary artifact whose exponential swamps the identity, while on
/// the window the residual
///   || e^{lambda/2} s1 - (-1)^d s2 || / ||a(f)||
/// (s1, s2 the eigencomponents of a(f) and a(f o j)) converges with n_max.
/// The half-size residual is reported to exhibit that convergence.
pub fn bisognano_wichmann_residual(
    d: u32,
    f: &TestFunction,
    n_max: usize,
    lambda_cut: f64,
) -> Result<BwReport, VoaError> {
    if d == 0 {
        return Err(VoaError::Check(
            "trivial module: weight zero has no ladder".into(),
        ));
    }
    let Some((t1, t2)) = f.support else {
        return Err(VoaError::Check(
            "test function must declare a support arc".into(),
        ));
    };
    if !(t1 >= -1e-12 && t2 <= std::f64::consts::PI + 1e-12 && t1 < t2) {
        return Err(VoaError::Check(
            "support must lie in the upper semicircle".into(),
        ));
    }
    if f.window < n_max as i64 + d as i64 {
        return Err(VoaError::Check(format!(
            "window {} too small for ladder truncation {}",
            f.window, n_max
        )));
    }
    let (residual, kept) = bw_at(d, f, n_max, lambda_cut);
    let (residual_half, kept_half) = bw_at(d, f, n_max / 2, lambda_cut);
    Ok(BwReport {
        residual,
        residual_half,
        n_max,
        lambda_cut,
        kept,
        kept_half,
    })
}

fn bw_at(d: u32, f: &TestFunction, n_max: usize, lambda_cut: f64) -> (f64, usize) {
    let dim = n_max + 1;
    let di = d as i64;
    let phase = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    let mut v = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    let mut u = v.clone();
    for n in 0..dim {
        let w = Scalar::binomial(2 * di + n as i64 - 1, n as u32).to_f64().sqrt();
        let ph = phase[n % 4];
        v[n] = f.coeff(-(n as i64) - di) * w * ph;
        u[n] = f.coeff(n as i64 + di) * w * ph;
    }
    let vnorm = v.norm();
    if vnorm == 0.0 {
        return (0.0, 0);
    }
    let mut j = DMatrix::zeros(dim, dim);
    for m in 1..dim {
        let g = -std::f64::consts::PI
            * ((m as f64) * (2.0 * d as f64 + m as f64 - 1.0)).sqrt();
        j[(m - 1, m)] = g;
        j[(m, m - 1)] = g;
    }
    let eig = nalgebra::SymmetricEigen::new(j);
    let qt = eig.eigenvectors.transpose();
    let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut acc = 0.0f64;
    let mut kept = 0usize;
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam.abs() > lambda_cut {
            continue;
        }
        kept += 1;
        let mut s1 = Complex64::new(0.0, 0.0);
        let mut s2 = Complex64::new(0.0, 0.0);
        for n in 0..dim {
            let q = qt[(i, n)];
            s1 += v[n] * q;
            s2 += u[n] * q;
        }
        let r = s1 * (lam / 2.0).exp() - s2 * sign;
        acc += r.norm_sqr();
    }
    (acc.sqrt() / vnorm, kept)
}
