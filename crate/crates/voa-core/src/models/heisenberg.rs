//! Rank-one Heisenberg vertex algebra: one weight-one field a with
//! [a_m, a_n] = m delta_{m+n,0}, words a_{-k1} ... a_{-kr} |0> with
//! k1 >= ... >= kr >= 1.

use crate::engine::{GenSpec, WordEngine, WordState};
use crate::models::virasoro::partitions;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

pub struct HeisenbergEngine {
    gens: Vec<GenSpec>,
}

impl HeisenbergEngine {
    pub fn new() -> Self {
        HeisenbergEngine {
            gens: vec![GenSpec {
                name: "a".into(),
                weight: 1,
                adjoint: 0,
            }],
        }
    }
}

impl Default for HeisenbergEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl WordEngine for HeisenbergEngine {
    type Word = Vec<u32>;

    fn name(&self) -> String {
        "heisenberg".into()
    }

    fn central_charge(&self) -> Scalar {
        Scalar::one()
    }

    fn generators(&self) -> &[GenSpec] {
        &self.gens
    }

    fn words_at_level(&self, level: u32) -> Vec<Vec<u32>> {
        partitions(level, 1)
    }

    fn word_level(&self, w: &Vec<u32>) -> u32 {
        w.iter().sum()
    }

    fn label(&self, w: &Vec<u32>) -> String {
        if w.is_empty() {
            "1".into()
        } else {
            w.iter()
                .map(|k| format!("a-{k}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    fn act(&self, _gen: usize, m: i64, w: &Vec<u32>) -> WordState<Vec<u32>> {
        let mut out = WordState::new();
        match m.cmp(&0) {
            std::cmp::Ordering::Less => {
                // creation: insert keeping parts non-increasing
                let k = (-m) as u32;
                let pos = w.iter().position(|&p| p < k).unwrap_or(w.len());
                let mut nw = w.clone();
                nw.insert(pos, k);
                out.insert(nw, Scalar::one());
            }
            std::cmp::Ordering::Equal => {}
            std::cmp::Ordering::Greater => {
                // a_m picks off one part equal to m with coefficient
                // m * (number of such parts)
                let k = m as u32;
                let mult = w.iter().filter(|&&p| p == k).count();
                if mult > 0 {
                    let pos = w.iter().position(|&p| p == k).unwrap();
                    let mut nw = w.clone();
                    nw.remove(pos);
                    out.insert(nw, Scalar::from_int(m) * Scalar::from_int(mult as i64));
                }
            }
        }
        out
    }

    fn peel(&self, w: &Vec<u32>) -> Option<(usize, i64, Vec<u32>)> {
        w.split_first()
            .map(|(&k, rest)| (0, -(k as i64), rest.to_vec()))
    }

    fn conformal_state(&self) -> WordState<Vec<u32>> {
        let mut st = WordState::new();
        st.insert(vec![1, 1], Scalar::ratio(1, 2));
        st
    }

    fn generator_word(&self, _gen: usize) -> Vec<u32> {
        vec![1]
    }

    fn metadata(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("family".into(), "heisenberg".into());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_relations() {
        let eng = HeisenbergEngine::new();
        // a_1 a_{-1}|0> = |0>
        let st = eng.act(0, 1, &vec![1]);
        assert_eq!(st[&vec![]], Scalar::one());
        // a_2 on a_{-2}a_{-2}|0> = 4 a_{-2}|0>
        let st = eng.act(0, 2, &vec![2, 2]);
        assert_eq!(st[&vec![2]], Scalar::from_int(4));
        // creation keeps canonical order
        let st = eng.act(0, -2, &vec![3, 1]);
        assert_eq!(st[&vec![3, 2, 1]], Scalar::one());
    }
}
