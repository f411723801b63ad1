//! Exact sparse linear algebra: reduced row echelon form, kernels,
//! radical quotients, and symmetric inertia with congruence witnesses.

use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse matrix over exact rationals, stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<BTreeMap<usize, Scalar>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![BTreeMap::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.ncols]; self.nrows];
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                out[i][j] = v.clone();
            }
        }
        out
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i].get(&j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, Scalar> {
        &self.rows[i]
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.rows[i].is_empty()
    }

    /// rows[dst] += c * rows[src]
    fn row_axpy(&mut self, dst: usize, src: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let src_row: Vec<(usize, Scalar)> =
            self.rows[src].iter().map(|(j, v)| (*j, v.clone())).collect();
        for (j, v) in src_row {
            let cur = self.get(dst, j);
            self.set(dst, j, cur + c * &v);
        }
    }

    fn row_scale(&mut self, i: usize, c: &Scalar) {
        let row: Vec<usize> = self.rows[i].keys().copied().collect();
        for j in row {
            let v = self.get(i, j);
            self.set(i, j, &v * c);
        }
    }

    /// In-place reduced row echelon form.  The pivot of each step is the
    /// first remaining row whose leading entry sits in the first not yet
    /// cleared column.  Returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.ncols {
            let Some(pr) = (next_row..self.nrows)
                .find(|&r| !self.get(r, col).is_zero())
            else {
                continue;
            };
            self.rows.swap(next_row, pr);
            let inv = self.get(next_row, col).recip();
            self.row_scale(next_row, &inv);
            for r in 0..self.nrows {
                if r != next_row {
                    let c = -self.get(r, col);
                    self.row_axpy(r, next_row, &c);
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == self.nrows {
                break;
            }
        }
        pivots
    }

    /// Pivot columns and a basis of the right kernel.
    pub fn rref_kernel(&self) -> (Vec<usize>, Vec<Vec<Scalar>>) {
        let mut work = self.clone();
        let pivots = work.rref();
        let pivot_set: Vec<usize> = pivots.clone();
        let mut kernel = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.ncols];
            v[free] = Scalar::one();
            for (r, &pc) in pivot_set.iter().enumerate() {
                v[pc] = -work.get(r, free);
            }
            kernel.push(v);
        }
        (pivots, kernel)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zeros(self.ncols, self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                t.set(j, i, v.clone());
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, rhs.nrows, "shape mismatch");
        let mut out = SparseMatrix::zeros(self.nrows, rhs.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for (&k, a) in row {
                for (&j, b) in &rhs.rows[k] {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.ncols, v.len(), "shape mismatch");
        let mut out = vec![Scalar::zero(); self.nrows];
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (&j, a) in row {
                acc += a * &v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> SparseMatrix {
        let mut out = self.clone();
        for i in 0..out.nrows {
            out.row_scale(i, c);
        }
        out
    }

    /// self -= rhs, elementwise.
    pub fn sub_assign(&mut self, rhs: &SparseMatrix) {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        for (i, row) in rhs.rows.iter().enumerate() {
            for (&j, v) in row {
                let cur = self.get(i, j);
                self.set(i, j, cur - v.clone());
            }
        }
    }

    /// Vertical stack: self on top of other (same column count).
    pub fn stack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.ncols, "shape mismatch");
        let mut out = SparseMatrix::zeros(self.nrows + other.nrows, self.ncols);
        out.rows[..self.nrows].clone_from_slice(&self.rows);
        out.rows[self.nrows..].clone_from_slice(&other.rows);
        out
    }

    /// Basis of the right kernel, one vector per row.
    pub fn kernel_basis(&self) -> SparseMatrix {
        let (_, kernel) = self.rref_kernel();
        let mut out = SparseMatrix::zeros(kernel.len(), self.ncols);
        for (i, v) in kernel.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    out.set(i, j, x.clone());
                }
            }
        }
        out
    }

    /// self += rhs, elementwise.
    pub fn add_assign(&mut self, rhs: &SparseMatrix) {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        for (i, row) in rhs.rows.iter().enumerate() {
            for (&j, v) in row {
                let cur = self.get(i, j);
                self.set(i, j, cur + v.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    /// Solve A x = b; None when inconsistent.  For singular A the solution
    /// with zero free coordinates is returned.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.nrows, b.len(), "shape mismatch");
        let mut aug = SparseMatrix::zeros(self.nrows, self.ncols + 1);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                aug.set(i, j, v.clone());
            }
            aug.set(i, self.ncols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.ncols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.ncols);
        }
        Some(x)
    }
}

/// Result of quotienting a graded piece by the radical of its Gram matrix.
#[derive(Clone, Debug)]
pub struct RadicalQuotient {
    /// Indices of the retained standard basis vectors (the pivot columns
    /// of the row-reduced Gram), in basis order.
    pub kept: Vec<usize>,
    /// Basis of the radical in the original coordinates.
    pub radical: Vec<Vec<Scalar>>,
}

/// Quotient by the radical of a symmetric pairing matrix.  The retained
/// complement is spanned by the standard basis vectors at the pivot columns.
pub fn quotient_by_radical(gram: &SparseMatrix) -> RadicalQuotient {
    assert_eq!(gram.nrows, gram.ncols, "gram must be square");
    let (pivots, kernel) = gram.rref_kernel();
    RadicalQuotient {
        kept: pivots,
        radical: kernel,
    }
}

/// Inertia of a symmetric matrix under congruence.
#[derive(Clone, Debug, PartialEq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    /// A vector v with v^T G v <= 0 when one exists (witnessing failure of
    /// positive definiteness), in the original coordinates.
    pub nonpositive_witness: Option<Vec<Scalar>>,
}

/// Symmetric Gaussian elimination with diagonal pivoting; a hyperbolic
/// basis change handles all-zero diagonals.  Exact, congruence-invariant.
pub fn symmetric_inertia(gram: &SparseMatrix) -> Inertia {
    assert_eq!(gram.nrows, gram.ncols, "gram must be square");
    let n = gram.nrows;
    let mut m = gram.to_dense();
    // transform[i] expresses the current i-th basis vector in original
    // coordinates, so diagonal pivots are witnessed exactly
    let mut transform: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut e = vec![Scalar::zero(); n];
            e[i] = Scalar::one();
            e
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut inertia = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
        nonpositive_witness: None,
    };
    while let Some(&first) = active.first() {
        let piv = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => {
                let j = active
                    .iter()
                    .copied()
                    .find(|&j| j != first && !m[first][j].is_zero());
                match j {
                    None => {
                        inertia.zero += 1;
                        if inertia.nonpositive_witness.is_none() {
                            inertia.nonpositive_witness =
                                Some(transform[first].clone());
                        }
                        active.retain(|&i| i != first);
                        continue;
                    }
                    Some(j) => {
                        // e_first += e_j makes the diagonal entry nonzero
                        for row in m.iter_mut() {
                            let add = row[j].clone();
                            row[first] = &row[first] + &add;
                        }
                        let row_j = m[j].clone();
                        for (t, a) in m[first].iter_mut().zip(row_j) {
                            *t = &*t + &a;
                        }
                        let add = transform[j].clone();
                        for (t, a) in transform[first].iter_mut().zip(add) {
                            *t = &*t + &a;
                        }
                        continue;
                    }
                }
            }
        };
        let d = m[piv][piv].clone();
        if d.is_positive() {
            inertia.positive += 1;
        } else {
            inertia.negative += 1;
            if inertia.nonpositive_witness.is_none() {
                inertia.nonpositive_witness = Some(transform[piv].clone());
            }
        }
        active.retain(|&i| i != piv);
        for &r in &active {
            let c = &m[r][piv] / &d;
            if c.is_zero() {
                continue;
            }
            let scaled: Vec<Scalar> = m[piv].iter().map(|v| &c * v).collect();
            for (t, s) in m[r].iter_mut().zip(scaled) {
                *t = &*t - &s;
            }
            let sub_t: Vec<Scalar> =
                transform[piv].iter().map(|t| &c * t).collect();
            for (t, s) in transform[r].iter_mut().zip(sub_t) {
                *t = &*t - &s;
            }
        }
        for &r in &active {
            m[r][piv] = Scalar::zero();
            m[piv][r] = Scalar::zero();
        }
    }
    inertia
}

fn poly_trim(p: &mut Vec<Scalar>) {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
}

fn poly_deriv(p: &[Scalar]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &Scalar::from_int(k as i64))
        .collect();
    poly_trim(&mut out);
    out
}

/// Euclidean remainder, coefficients indexed by degree.
fn poly_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] / lead;
        for i in 0..=db {
            let sub = &q * &b[i];
            r[k + i] = &r[k + i] - &sub;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut x = a.to_vec();
    poly_trim(&mut x);
    let mut y = b.to_vec();
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        let inv = lead.recip();
        for c in &mut x {
            *c = &*c * &inv;
        }
    }
    x
}

impl SparseMatrix {
    /// Monic minimal polynomial, coefficients indexed by degree.
    pub fn minimal_polynomial(&self) -> Vec<Scalar> {
        assert_eq!(self.nrows, self.ncols, "square matrices only");
        let d = self.nrows;
        if d == 0 {
            return vec![Scalar::one()];
        }
        let mut pows = vec![SparseMatrix::identity(d)];
        loop {
            let k = pows.len();
            assert!(k <= d, "dependence must appear by degree d");
            pows.push(self.matmul(pows.last().unwrap()));
            let mut stacked = SparseMatrix::zeros(k + 1, d * d);
            for (r, p) in pows.iter().enumerate() {
                for (i, row) in p.rows.iter().enumerate() {
                    for (&j, v) in row {
                        stacked.set(r, i * d + j, v.clone());
                    }
                }
            }
            if stacked.rank() == k + 1 {
                continue;
            }
            // powers 0..k-1 are independent, so the kernel is one line
            // with a nonzero top coefficient
            let ker = stacked.transpose().kernel_basis();
            let mut coeffs: Vec<Scalar> = (0..=k).map(|i| ker.get(0, i)).collect();
            let inv = coeffs[k].recip();
            for c in &mut coeffs {
                *c = &*c * &inv;
            }
            return coeffs;
        }
    }
}

fn divisors_of(n: &num_bigint::BigInt) -> Option<Vec<i64>> {
    use num_traits::{Signed, ToPrimitive};
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as i64);
            out.push((n / d) as i64);
        }
        d += 1;
    }
    Some(out)
}

/// One rational root of a monic polynomial with rational coefficients,
/// found by divisor trial after clearing denominators.
fn rational_root(p: &[Scalar]) -> Option<Scalar> {
    if p[0].is_zero() {
        return Some(Scalar::zero());
    }
    use num_integer::Integer;
    let mut lcm = num_bigint::BigInt::from(1);
    for c in p {
        lcm = lcm.lcm(c.denom());
    }
    let scale = Scalar::from_bigint(&lcm);
    let a0 = (&p[0] * &scale).numer().clone();
    let an = (&p[p.len() - 1] * &scale).numer().clone();
    for s in divisors_of(&a0)? {
        for t in divisors_of(&an)? {
            for sign in [1i64, -1] {
                let cand = Scalar::ratio(sign * s, t);
                let mut acc = Scalar::zero();
                for c in p.iter().rev() {
                    acc = &(&acc * &cand) + c;
                }
                if acc.is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Divide a monic polynomial by (x - r); remainder must vanish.
fn deflate(p: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let n = p.len() - 1;
    let mut out = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &(&carry * r);
        out[i] = carry.clone();
    }
    out
}

/// Roots of the minimal polynomial when the matrix is diagonalizable with
/// all-rational spectrum: squarefree minimal polynomial splitting into
/// rational linear factors.  None when either condition fails or the
/// divisor search would need to factor oversized integers.
pub fn rational_spectrum(m: &SparseMatrix) -> Option<Vec<Scalar>> {
    let p = m.minimal_polynomial();
    if p.len() == 1 {
        return Some(Vec::new());
    }
    let g = poly_gcd(&p, &poly_deriv(&p));
    if g.len() != 1 {
        return None;
    }
    let mut q = p;
    let mut roots = Vec::new();
    while q.len() > 1 {
        let r = rational_root(&q)?;
        q = deflate(&q, &r);
        roots.push(r);
    }
    roots.sort();
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rref_pivots_first_nonzero_column() {
        let mut m = SparseMatrix::from_dense(&[
            vec![s(0), s(2), s(4)],
            vec![s(1), s(1), s(1)],
            vec![s(1), s(3), s(5)],
        ]);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.get(0, 0), s(1));
        assert_eq!(m.get(0, 2), s(-1));
        assert_eq!(m.get(1, 2), s(2));
        assert!(m.row_is_zero(2));
    }

    #[test]
    fn kernel_and_quotient() {
        let g = SparseMatrix::from_dense(&[
            vec![s(1), s(1), s(0)],
            vec![s(1), s(1), s(0)],
            vec![s(0), s(0), s(2)],
        ]);
        let (pivots, kernel) = g.rref_kernel();
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(kernel, vec![vec![s(-1), s(1), s(0)]]);
        let q = quotient_by_radical(&g);
        assert_eq!(q.kept, vec![0, 2]);
        assert_eq!(q.radical.len(), 1);
    }

    #[test]
    fn solve_consistent() {
        let a = SparseMatrix::from_dense(&[vec![s(2), s(1)], vec![s(1), s(3)]]);
        let x = a.solve(&[s(5), s(10)]).unwrap();
        assert_eq!(a.apply(&x), vec![s(5), s(10)]);
    }

    #[test]
    fn inertia_signs_and_witness() {
        let g = SparseMatrix::from_dense(&[
            vec![s(2), s(0), s(0)],
            vec![s(0), s(-3), s(0)],
            vec![s(0), s(0), s(0)],
        ]);
        let i = symmetric_inertia(&g);
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 1));
        let w = i.nonpositive_witness.unwrap();
        let gw = g.apply(&w);
        let quad: Scalar = w
            .iter()
            .zip(&gw)
            .map(|(a, b)| a * b)
            .fold(Scalar::zero(), |acc, x| acc + x);
        assert!(!quad.is_positive());
    }

    #[test]
    fn inertia_hyperbolic() {
        let g = SparseMatrix::from_dense(&[vec![s(0), s(1)], vec![s(1), s(0)]]);
        let i = symmetric_inertia(&g);
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
    }

    #[test]
    fn minimal_polynomial_of_projector() {
        // diag(1, 1, 0) has minimal polynomial x^2 - x
        let m = SparseMatrix::from_dense(&[
            vec![s(1), s(0), s(0)],
            vec![s(0), s(1), s(0)],
            vec![s(0), s(0), s(0)],
        ]);
        assert_eq!(m.minimal_polynomial(), vec![s(0), s(-1), s(1)]);
    }

    #[test]
    fn rational_spectrum_reads_eigenvalues() {
        let m = SparseMatrix::from_dense(&[
            vec![Scalar::ratio(1, 2), s(0), s(0)],
            vec![s(0), s(3), s(1)],
            vec![s(0), s(0), s(3)],
        ]);
        // the nilpotent block makes x = 3 a double root of the minimal
        // polynomial, so the matrix is not diagonalizable
        assert_eq!(rational_spectrum(&m), None);

        let d = SparseMatrix::from_dense(&[
            vec![Scalar::ratio(1, 2), s(1), s(0)],
            vec![s(0), s(3), s(0)],
            vec![s(0), s(0), s(3)],
        ]);
        assert_eq!(
            rational_spectrum(&d),
            Some(vec![Scalar::ratio(1, 2), s(3)])
        );

        // companion matrix of x^2 - 2: irrational spectrum
        let c = SparseMatrix::from_dense(&[vec![s(0), s(2)], vec![s(1), s(0)]]);
        assert_eq!(rational_spectrum(&c), None);
    }
}
