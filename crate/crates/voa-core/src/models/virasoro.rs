//! Virasoro vertex algebra at central charge c, spanned by words
//! L_{-k1} ... L_{-kr} |0> with k1 >= ... >= kr >= 2.

use crate::engine::{state_add, GenSpec, WordEngine, WordState};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

pub struct VirasoroEngine {
    c: Scalar,
    gens: Vec<GenSpec>,
}

impl VirasoroEngine {
    pub fn new(c: Scalar) -> Self {
        VirasoroEngine {
            c,
            gens: vec![GenSpec {
                name: "nu".into(),
                weight: 2,
                adjoint: 0,
            }],
        }
    }

    /// L_m applied to a canonical word, straightened back into canonical
    /// words.  Creation letters are re-inserted recursively; they do not
    /// commute.
    fn apply(&self, m: i64, w: &[u32]) -> WordState<Vec<u32>> {
        let mut out = WordState::new();
        if w.is_empty() {
            if m <= -2 {
                out.insert(vec![(-m) as u32], Scalar::one());
            }
            return out;
        }
        let k = w[0] as i64;
        if m <= -k {
            // canonical prepend: parts stay non-increasing
            let mut nw = Vec::with_capacity(w.len() + 1);
            nw.push((-m) as u32);
            nw.extend_from_slice(w);
            out.insert(nw, Scalar::one());
            return out;
        }
        let rest = &w[1..];
        // [L_m, L_{-k}] = (m + k) L_{m-k} + c/12 (m^3 - m) delta_{m,k}
        let coef = Scalar::from_int(m + k);
        if !coef.is_zero() {
            for (w2, c2) in self.apply(m - k, rest) {
                state_add(&mut out, &w2, &coef * &c2);
            }
        }
        if m == k {
            let central = &self.c * &Scalar::ratio(m * m * m - m, 12);
            if !central.is_zero() {
                state_add(&mut out, &rest.to_vec(), central);
            }
        }
        // L_{-k} (L_m rest)
        for (w2, c2) in self.apply(m, rest) {
            for (w3, c3) in self.apply(-k, &w2) {
                state_add(&mut out, &w3, &c2 * &c3);
            }
        }
        out
    }
}

/// Partitions of `total` into parts `>= min_part`, each non-increasing,
/// ordered with the largest first part first.
pub fn partitions(total: u32, min_part: u32) -> Vec<Vec<u32>> {
    fn rec(total: u32, max_part: u32, min_part: u32, out: &mut Vec<Vec<u32>>, acc: &mut Vec<u32>) {
        if total == 0 {
            out.push(acc.clone());
            return;
        }
        let hi = total.min(max_part);
        if hi < min_part {
            return;
        }
        for p in (min_part..=hi).rev() {
            acc.push(p);
            rec(total - p, p, min_part, out, acc);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    rec(total, total.max(1), min_part, &mut out, &mut acc);
    out
}

impl WordEngine for VirasoroEngine {
    type Word = Vec<u32>;

    fn name(&self) -> String {
        format!("virasoro_c={}", self.c)
    }

    fn central_charge(&self) -> Scalar {
        self.c.clone()
    }

    fn generators(&self) -> &[GenSpec] {
        &self.gens
    }

    fn words_at_level(&self, level: u32) -> Vec<Vec<u32>> {
        partitions(level, 2)
    }

    fn word_level(&self, w: &Vec<u32>) -> u32 {
        w.iter().sum()
    }

    fn label(&self, w: &Vec<u32>) -> String {
        if w.is_empty() {
            "1".into()
        } else {
            w.iter()
                .map(|k| format!("L-{k}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    fn act(&self, _gen: usize, m: i64, w: &Vec<u32>) -> WordState<Vec<u32>> {
        self.apply(m, w)
    }

    fn peel(&self, w: &Vec<u32>) -> Option<(usize, i64, Vec<u32>)> {
        w.split_first()
            .map(|(&k, rest)| (0, -(k as i64), rest.to_vec()))
    }

    fn conformal_state(&self) -> WordState<Vec<u32>> {
        let mut st = WordState::new();
        st.insert(vec![2], Scalar::one());
        st
    }

    fn generator_word(&self, _gen: usize) -> Vec<u32> {
        vec![2]
    }

    fn metadata(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("family".into(), "virasoro".into());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts_match() {
        // partitions with parts >= 2, levels 0..=10
        let expect = [1usize, 0, 1, 1, 2, 2, 4, 4, 7, 8, 12];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(partitions(n as u32, 2).len(), *e, "level {n}");
        }
        // unrestricted partitions, levels 0..=10
        let expect1 = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, e) in expect1.iter().enumerate() {
            assert_eq!(partitions(n as u32, 1).len(), *e, "level {n}");
        }
    }

    #[test]
    fn virasoro_bracket_on_vacuum() {
        let eng = VirasoroEngine::new(Scalar::ratio(1, 2));
        // L_2 L_{-2} |0> = c/2 |0>
        let st = eng.apply(2, &[2]);
        assert_eq!(st.len(), 1);
        assert_eq!(st[&vec![]], Scalar::ratio(1, 4));
        // L_0 L_{-2} |0> = 2 L_{-2}|0>
        let st = eng.apply(0, &[2]);
        assert_eq!(st[&vec![2]], Scalar::from_int(2));
        // L_{-2} L_{-3}|0> straightens to L_{-3}L_{-2} + L_{-5}
        let st = eng.apply(-2, &[3]);
        assert_eq!(st[&vec![3, 2]], Scalar::one());
        assert_eq!(st[&vec![5]], Scalar::one());
        assert_eq!(st.len(), 2);
    }
}
