//! Rank-one even lattice vertex algebra: L = Z alpha with
//! <alpha, alpha> = 2n.  Basis words are alpha_{-k1} ... alpha_{-kr} e^{s
//! alpha} across charge sectors s, with the cocycle chosen trivially (rank
//! one admits the constant choice).
//!
//! The exponential generators act through the standard vertex operator
//! Y(e^{eps alpha}, z) = E^-(z) E^+(z) shift z^{2 n eps s}, expanded
//! exactly over partitions.

use crate::engine::{state_add, GenSpec, WordEngine, WordState};
use crate::models::virasoro::partitions;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// (charge sector, alpha partition, descending)
pub type LatticeWord = (i32, Vec<u32>);

pub struct LatticeEngine {
    /// <alpha, alpha> = 2n
    n: i64,
    gens: Vec<GenSpec>,
}

impl LatticeEngine {
    /// norm must be a positive even integer, norm = 2n.
    pub fn new(norm: i64) -> Self {
        assert!(norm > 0 && norm % 2 == 0, "lattice norm must be even and positive");
        let n = norm / 2;
        let gens = vec![
            GenSpec {
                name: "a".into(),
                weight: 1,
                adjoint: 0,
            },
            GenSpec {
                name: "e+".into(),
                weight: n as u32,
                adjoint: 2,
            },
            GenSpec {
                name: "e-".into(),
                weight: n as u32,
                adjoint: 1,
            },
        ];
        LatticeEngine { n, gens }
    }

    pub fn norm(&self) -> i64 {
        2 * self.n
    }

    fn alpha_act(&self, m: i64, w: &LatticeWord) -> WordState<LatticeWord> {
        let (s, lam) = w;
        let mut out = WordState::new();
        match m.cmp(&0) {
            std::cmp::Ordering::Less => {
                let k = (-m) as u32;
                let pos = lam.iter().position(|&p| p < k).unwrap_or(lam.len());
                let mut nl = lam.clone();
                nl.insert(pos, k);
                out.insert((*s, nl), Scalar::one());
            }
            std::cmp::Ordering::Equal => {
                let c = Scalar::from_int(2 * self.n * *s as i64);
                if !c.is_zero() {
                    out.insert(w.clone(), c);
                }
            }
            std::cmp::Ordering::Greater => {
                let k = m as u32;
                let mult = lam.iter().filter(|&&p| p == k).count();
                if mult > 0 {
                    let pos = lam.iter().position(|&p| p == k).unwrap();
                    let mut nl = lam.clone();
                    nl.remove(pos);
                    out.insert(
                        (*s, nl),
                        Scalar::from_int(2 * self.n * m * mult as i64),
                    );
                }
            }
        }
        out
    }

    /// (e^{eps alpha})_(p) applied to a sector word, exact expansion of
    /// the two exponentials.
    fn vertex_act(&self, eps: i64, p: i64, w: &LatticeWord) -> WordState<LatticeWord> {
        let (s, lam) = w;
        let mut out = WordState::new();
        // multiplicity map of lam
        let mut mults: BTreeMap<u32, u32> = BTreeMap::new();
        for &k in lam {
            *mults.entry(k).or_insert(0) += 1;
        }
        let parts: Vec<(u32, u32)> = mults.into_iter().collect();
        // enumerate sub-multisets mu of lam (the annihilation half)
        let mut stack: Vec<(usize, Vec<u32>, Scalar)> =
            vec![(0, Vec::new(), Scalar::one())];
        let mut subs: Vec<(Vec<u32>, Scalar)> = Vec::new();
        while let Some((i, taken, coef)) = stack.pop() {
            if i == parts.len() {
                subs.push((taken, coef));
                continue;
            }
            let (k, mult) = parts[i];
            let mut c = coef.clone();
            for j in 0..=mult {
                if j > 0 {
                    // one more alpha_k: (-eps/k) * 2nk * (mult - j + 1) / j
                    c = &c
                        * &(Scalar::from_int(-eps * 2 * self.n)
                            * Scalar::from_int((mult - j + 1) as i64)
                            / Scalar::from_int(j as i64));
                }
                let mut t = taken.clone();
                for _ in 0..j {
                    t.push(k);
                }
                stack.push((i + 1, t, c.clone()));
            }
        }
        let s_new = *s + eps as i32;
        for (mu, mu_coef) in subs {
            let d_total = -p - 1 - 2 * self.n * eps * *s as i64 + mu.iter().sum::<u32>() as i64;
            if d_total < 0 {
                continue;
            }
            // lam minus mu
            let mut lam_rem = lam.clone();
            for k in &mu {
                let pos = lam_rem.iter().position(|p| p == k).unwrap();
                lam_rem.remove(pos);
            }
            // creation half: partitions nu of d_total
            for nu in partitions(d_total as u32, 1) {
                let mut nu_coef = Scalar::one();
                let mut mults_nu: BTreeMap<u32, u32> = BTreeMap::new();
                for &k in &nu {
                    *mults_nu.entry(k).or_insert(0) += 1;
                }
                for (&k, &m) in &mults_nu {
                    for j in 1..=m {
                        nu_coef = &nu_coef
                            * &(Scalar::ratio(eps, k as i64) / Scalar::from_int(j as i64));
                    }
                }
                let mut nl = lam_rem.clone();
                nl.extend_from_slice(&nu);
                nl.sort_unstable_by(|a, b| b.cmp(a));
                state_add(&mut out, &(s_new, nl), &mu_coef * &nu_coef);
            }
        }
        out
    }
}

impl WordEngine for LatticeEngine {
    type Word = LatticeWord;

    fn name(&self) -> String {
        format!("lattice_norm={}", 2 * self.n)
    }

    fn central_charge(&self) -> Scalar {
        Scalar::one()
    }

    fn generators(&self) -> &[GenSpec] {
        &self.gens
    }

    fn words_at_level(&self, level: u32) -> Vec<LatticeWord> {
        let mut out = Vec::new();
        let mut sectors = vec![0i32];
        let mut s = 1i32;
        while self.n * (s as i64) * (s as i64) <= level as i64 {
            sectors.push(s);
            sectors.push(-s);
            s += 1;
        }
        for s in sectors {
            let base = (self.n * (s as i64) * (s as i64)) as u32;
            for lam in partitions(level - base, 1) {
                out.push((s, lam));
            }
        }
        out
    }

    fn word_level(&self, w: &LatticeWord) -> u32 {
        let (s, lam) = w;
        lam.iter().sum::<u32>() + (self.n * (*s as i64) * (*s as i64)) as u32
    }

    fn label(&self, w: &LatticeWord) -> String {
        let (s, lam) = w;
        let mut parts: Vec<String> = lam.iter().map(|k| format!("a-{k}")).collect();
        if *s != 0 {
            parts.push(format!("V{s}"));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    fn act(&self, gen: usize, m: i64, w: &LatticeWord) -> WordState<LatticeWord> {
        match gen {
            0 => self.alpha_act(m, w),
            1 => self.vertex_act(1, m + self.n - 1, w),
            2 => self.vertex_act(-1, m + self.n - 1, w),
            _ => unreachable!("lattice has three generators"),
        }
    }

    fn peel(&self, w: &LatticeWord) -> Option<(usize, i64, LatticeWord)> {
        let (s, lam) = w;
        if let Some((&k, rest)) = lam.split_first() {
            return Some((0, -(k as i64), (*s, rest.to_vec())));
        }
        match s.cmp(&0) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some((
                1,
                -self.n * (2 * *s as i64 - 1),
                (*s - 1, Vec::new()),
            )),
            std::cmp::Ordering::Less => Some((
                2,
                -self.n * (-2 * *s as i64 - 1),
                (*s + 1, Vec::new()),
            )),
        }
    }

    fn conformal_state(&self) -> WordState<LatticeWord> {
        let mut st = WordState::new();
        st.insert((0, vec![1, 1]), Scalar::ratio(1, 4 * self.n));
        st
    }

    fn generator_word(&self, gen: usize) -> LatticeWord {
        match gen {
            0 => (0, vec![1]),
            1 => (1, Vec::new()),
            2 => (-1, Vec::new()),
            _ => unreachable!(),
        }
    }

    fn metadata(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("family".into(), "lattice".into());
        m.insert("norm".into(), (2 * self.n).to_string());
        m.insert("cocycle".into(), "trivial".into());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_dimensions() {
        let eng = LatticeEngine::new(2);
        let expect = [1usize, 3, 4, 7, 13];
        for (l, e) in expect.iter().enumerate() {
            assert_eq!(eng.words_at_level(l as u32).len(), *e, "level {l}");
        }
        let eng4 = LatticeEngine::new(4);
        let expect4 = [1usize, 1, 4, 5, 9];
        for (l, e) in expect4.iter().enumerate() {
            assert_eq!(eng4.words_at_level(l as u32).len(), *e, "level {l}");
        }
    }

    #[test]
    fn vertex_operator_basics() {
        let eng = LatticeEngine::new(2);
        // (e^alpha)_(-1) |0> = e^alpha
        let st = eng.vertex_act(1, -1, &(0, vec![]));
        assert_eq!(st.len(), 1);
        assert_eq!(st[&(1, vec![])], Scalar::one());
        // (e^alpha)_(-2) |0> = alpha_{-1} e^alpha  (translation covariance)
        let st = eng.vertex_act(1, -2, &(0, vec![]));
        assert_eq!(st[&(1, vec![1])], Scalar::one());
        // (e^alpha)_(1) e^{-alpha} = |0> at norm 2
        let st = eng.vertex_act(1, 1, &(-1, vec![]));
        assert_eq!(st[&(0, vec![])], Scalar::one());
        // (e^alpha)_(-3) e^{alpha} = e^{2 alpha} at norm 2
        let st = eng.vertex_act(1, -3, &(1, vec![]));
        assert_eq!(st[&(2, vec![])], Scalar::one());
    }
}
