//! Test functions on the circle as finite Fourier tables.

use num_complex::Complex64;

use crate::error::VoaError;

/// Compensated (Neumaier) accumulator for long float sums.
#[derive(Clone, Copy, Default)]
pub(crate) struct Neumaier {
    s: f64,
    c: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, t: f64) {
        let u = self.s + t;
        if self.s.abs() >= t.abs() {
            self.c += (self.s - u) + t;
        } else {
            self.c += (t - u) + self.s;
        }
        self.s = u;
    }

    pub(crate) fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// A smooth function on S^1 held through its Fourier coefficients.
///
/// Coefficients are kept on an extended range `|n| <= ext` (4x the declared
/// window for quadrature-built functions) so tails past the window can be
/// estimated from computed data; `coeff` itself truncates at `window`.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub window: i64,
    ext: i64,
    coeffs: Vec<Complex64>,
    /// Declared support arc (theta1, theta2), if any.
    pub support: Option<(f64, f64)>,
    /// Per-coefficient quadrature/rounding allowance folded into tail bounds.
    alias_floor: f64,
}

impl TestFunction {
    fn slot(&self, n: i64) -> usize {
        (n + self.ext) as usize
    }

    /// Fourier coefficient within the declared window; zero outside it.
    pub fn coeff(&self, n: i64) -> Complex64 {
        if n.abs() > self.window {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[self.slot(n)]
        }
    }

    fn raw(&self, n: i64) -> Complex64 {
        if n.abs() > self.ext {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[self.slot(n)]
        }
    }

    /// Standard bump exp(-1/(1-x^2)) mapped affinely onto the arc
    /// (theta1, theta2), sampled by composite Simpson quadrature.
    ///
    /// The rule uses at least 4096 subintervals and scales with the extended
    /// coefficient range so aliasing stays below double rounding.
    pub fn bump(theta1: f64, theta2: f64, window: i64) -> Result<Self, VoaError> {
        let len = theta2 - theta1;
        if window < 1 {
            return Err(VoaError::Check("window must be at least 1".into()));
        }
        if !(len > 0.0 && len < 2.0 * std::f64::consts::PI - 1e-9) {
            return Err(VoaError::Check(
                "bump arc must have length in (0, 2*pi)".into(),
            ));
        }
        let ext = 4 * window;
        let pts = (8 * ext as usize).max(4096);
        let h = len / pts as f64;
        let scale = h / 3.0 / (2.0 * std::f64::consts::PI);
        let mut ts = Vec::with_capacity(pts + 1);
        let mut gs = Vec::with_capacity(pts + 1);
        for i in 0..=pts {
            let t = theta1 + len * i as f64 / pts as f64;
            let x = (2.0 * t - theta1 - theta2) / len;
            let v = if x.abs() < 1.0 {
                (-1.0 / (1.0 - x * x)).exp()
            } else {
                0.0
            };
            let w = if i == 0 || i == pts {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            ts.push(t);
            gs.push(v * w * scale);
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (2 * ext + 1) as usize];
        for n in 0..=ext {
            let mut re = Neumaier::default();
            let mut im = Neumaier::default();
            for (t, g) in ts.iter().zip(&gs) {
                let (s, c) = (-(n as f64) * t).sin_cos();
                re.add(g * c);
                im.add(g * s);
            }
            let z = Complex64::new(re.value(), im.value());
            coeffs[(n + ext) as usize] = z;
            coeffs[(ext - n) as usize] = z.conj();
        }
        Ok(TestFunction {
            window,
            ext,
            coeffs,
            support: Some((theta1, theta2)),
            alias_floor: 1e-15,
        })
    }

    /// Trigonometric polynomial from explicit coefficients (exact, no tail).
    pub fn from_coeffs(
        pairs: &[(i64, Complex64)],
        window: i64,
        support: Option<(f64, f64)>,
    ) -> Result<Self, VoaError> {
        if window < 0 {
            return Err(VoaError::Check("window must be non-negative".into()));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (2 * window + 1) as usize];
        for &(n, z) in pairs {
            if n.abs() > window {
                return Err(VoaError::Check(format!(
                    "mode {n} outside window {window}"
                )));
            }
            coeffs[(n + window) as usize] += z;
        }
        Ok(TestFunction {
            window,
            ext: window,
            coeffs,
            support,
            alias_floor: 0.0,
        })
    }

    /// Single Fourier mode e_n.
    pub fn mode(n: i64, window: i64) -> Result<Self, VoaError> {
        Self::from_coeffs(&[(n, Complex64::new(1.0, 0.0))], window, None)
    }

    /// Complex conjugate function: coefficients conj(f_{-n}).
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for n in -self.ext..=self.ext {
            out.coeffs[self.slot(n)] = self.raw(-n).conj();
        }
        out
    }

    /// Composition with the circle inversion j(z) = 1/z: coefficients f_{-n}.
    pub fn compose_inversion(&self) -> Self {
        let mut out = self.clone();
        for n in -self.ext..=self.ext {
            out.coeffs[self.slot(n)] = self.raw(-n);
        }
        out.support = self.support.map(|(a, b)| (-b, -a));
        out
    }

    /// Rotated function f_t with coefficients e^{-int} f_n.
    pub fn rotate(&self, t: f64) -> Self {
        let mut out = self.clone();
        for n in -self.ext..=self.ext {
            out.coeffs[self.slot(n)] =
                self.raw(n) * Complex64::from_polar(1.0, -(n as f64) * t);
        }
        out.support = self.support.map(|(a, b)| (a + t, b + t));
        out
    }

    /// Whether the table describes a real-valued function.
    pub fn is_real(&self) -> bool {
        let m = self
            .coeffs
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
            .max( 1.0);
        (0..=self.ext)
            .all(|n| (self.raw(-n) - self.raw(n).conj()).norm() <= 1e-12 * m)
    }

    /// Windowed norm sum_{|n| <= window} (|n|+1)^s |f_n|.
    pub fn fourier_norm(&self, s: u32) -> f64 {
        let mut acc = Neumaier::default();
        for n in -self.window..=self.window {
            let a = self.coeff(n).norm();
            if a != 0.0 {
                acc.add((n.unsigned_abs() as f64 + 1.0).powi(s as i32) * a);
            }
        }
        acc.value()
    }

    /// Estimated bound on sum_{|n| > window} (|n|+1)^s |f_n|.
    ///
    /// Built from the computed extended range plus a geometric continuation
    /// of the last octave and the quadrature rounding allowance. For exact
    /// trigonometric polynomials the tail is identically zero.
    pub fn tail_bound(&self, s: u32) -> f64 {
        if self.ext == self.window && self.alias_floor == 0.0 {
            return 0.0;
        }
        let weight = |n: i64| (n.unsigned_abs() as f64 + 1.0).powi(s as i32);
        let mut base = Neumaier::default();
        for n in (self.window + 1)..=self.ext {
            base.add(weight(n) * (self.raw(n).norm() + self.raw(-n).norm()));
        }
        let octave = |lo: i64, hi: i64| {
            let mut acc = Neumaier::default();
            for n in (lo + 1)..=hi {
                acc.add(weight(n) * (self.raw(n).norm() + self.raw(-n).norm()));
            }
            acc.value()
        };
        let b1 = octave(self.ext / 2, 3 * self.ext / 4);
        let b2 = octave(3 * self.ext / 4, self.ext);
        let cont = if b1 > 0.0 && b2 > 0.0 {
            let r = (b2 / b1).min(0.95);
            b2 * (r / (1.0 - r)).min(20.0)
        } else {
            0.0
        };
        let alias = self.alias_floor
            * 2.0
            * (self.ext as f64 + 1.0).powi(s as i32 + 1)
            / (s as f64 + 1.0);
        base.value() + cont + alias
    }

    /// Parse "bump:theta1,theta2" (angles may use pi expressions) or
    /// "mode:n".
    pub fn parse(text: &str, window: i64) -> Result<Self, VoaError> {
        let bad = || VoaError::Check(format!("cannot parse test function '{text}'"));
        let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
        match kind {
            "bump" => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                Self::bump(parse_angle(a)?, parse_angle(b)?, window)
            }
            "mode" => {
                let n: i64 = rest.trim().parse().map_err(|_| bad())?;
                Self::mode(n, window)
            }
            _ => Err(bad()),
        }
    }
}

/// Angles like "0", "1.25", "pi", "2pi", "pi/2", "3pi/4", "-pi/6".
pub fn parse_angle(text: &str) -> Result<f64, VoaError> {
    let s = text.trim();
    let bad = || VoaError::Check(format!("cannot parse angle '{s}'"));
    let (body, sign) = match s.strip_prefix('-') {
        Some(r) => (r, -1.0),
        None => (s.strip_prefix('+').unwrap_or(s), 1.0),
    };
    if let Some(pos) = body.find("pi") {
        let (pre, post) = (&body[..pos], &body[pos + 2..]);
        let num: f64 = if pre.is_empty() {
            1.0
        } else {
            pre.parse().map_err(|_| bad())?
        };
        let den: f64 = match post.strip_prefix('/') {
            Some(d) => d.parse().map_err(|_| bad())?,
            None if post.is_empty() => 1.0,
            None => return Err(bad()),
        };
        if den == 0.0 {
            return Err(bad());
        }
        Ok(sign * num * std::f64::consts::PI / den)
    } else {
        body.parse::<f64>().map(|v| sign * v).map_err(|_| bad())
    }
}

/// Whether both functions declare supports and the closed arcs do not
/// overlap on the circle (touching endpoints count as disjoint).
pub fn supports_declared_disjoint(f: &TestFunction, g: &TestFunction) -> bool {
    let (Some((a1, b1)), Some((a2, b2))) = (f.support, g.support) else {
        return false;
    };
    let tau = 2.0 * std::f64::consts::PI;
    let (l1, l2) = (b1 - a1, b2 - a2);
    if !(l1 > 0.0 && l1 < tau && l2 > 0.0 && l2 < tau) {
        return false;
    }
    // shift the second arc start into [a1, a1 + 2*pi)
    let s2 = a1 + (a2 - a1).rem_euclid(tau);
    s2 >= a1 + l1 && s2 + l2 <= a1 + tau
}
