//! Affine sl2 at positive integer level k, with B(h,h) = 2, B(e,f) = 1
//! and [a_m, b_n] = [a,b]_{m+n} + m k B(a,b) delta_{m+n,0}.
//!
//! Words are PBW monomials in letters x_{-j}: modes sorted with deeper
//! modes first, and e < h < f among letters of the same depth.

use crate::engine::{state_add, GenSpec, WordEngine, WordState};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

pub const E: u8 = 0;
pub const H: u8 = 1;
pub const F: u8 = 2;

const NAMES: [&str; 3] = ["e", "h", "f"];

/// Letter x_{-k} stored as (k, x).
pub type Letter = (u32, u8);

fn bracket(a: u8, b: u8) -> Option<(u8, i64)> {
    match (a, b) {
        (H, E) => Some((E, 2)),
        (E, H) => Some((E, -2)),
        (H, F) => Some((F, -2)),
        (F, H) => Some((F, 2)),
        (E, F) => Some((H, 1)),
        (F, E) => Some((H, -1)),
        _ => None,
    }
}

fn killing(a: u8, b: u8) -> i64 {
    match (a, b) {
        (E, F) | (F, E) => 1,
        (H, H) => 2,
        _ => 0,
    }
}

/// letter order used by canonical words: deeper modes first, e < h < f
/// at equal depth
fn precedes((k1, g1): Letter, (k2, g2): Letter) -> bool {
    k1 > k2 || (k1 == k2 && g1 <= g2)
}

pub struct Sl2Engine {
    k: i64,
    gens: Vec<GenSpec>,
}

impl Sl2Engine {
    pub fn new(k: i64) -> Self {
        assert!(k > 0, "level must be a positive integer");
        let gens = vec![
            GenSpec {
                name: "e".into(),
                weight: 1,
                adjoint: 2,
            },
            GenSpec {
                name: "h".into(),
                weight: 1,
                adjoint: 1,
            },
            GenSpec {
                name: "f".into(),
                weight: 1,
                adjoint: 0,
            },
        ];
        Sl2Engine { k, gens }
    }

    pub fn level(&self) -> i64 {
        self.k
    }

    fn apply(&self, x: u8, m: i64, w: &[Letter]) -> WordState<Vec<Letter>> {
        let mut out = WordState::new();
        if w.is_empty() {
            if m < 0 {
                out.insert(vec![((-m) as u32, x)], Scalar::one());
            }
            return out;
        }
        let (k2, g2) = w[0];
        if m < 0 && precedes(((-m) as u32, x), (k2, g2)) {
            let mut nw = Vec::with_capacity(w.len() + 1);
            nw.push(((-m) as u32, x));
            nw.extend_from_slice(w);
            out.insert(nw, Scalar::one());
            return out;
        }
        let rest = &w[1..];
        // [x_m, b_{-k2}] acting on rest
        if let Some((g3, c3)) = bracket(x, g2) {
            let coef = Scalar::from_int(c3);
            for (w2, c2) in self.apply(g3, m - k2 as i64, rest) {
                state_add(&mut out, &w2, &coef * &c2);
            }
        }
        if m == k2 as i64 {
            let central = Scalar::from_int(m * self.k * killing(x, g2));
            if !central.is_zero() {
                state_add(&mut out, &rest.to_vec(), central);
            }
        }
        // b_{-k2} (x_m rest)
        for (w2, c2) in self.apply(x, m, rest) {
            for (w3, c3) in self.apply(g2, -(k2 as i64), &w2) {
                state_add(&mut out, &w3, &c2 * &c3);
            }
        }
        out
    }
}

impl WordEngine for Sl2Engine {
    type Word = Vec<Letter>;

    fn name(&self) -> String {
        format!("sl2_k={}", self.k)
    }

    fn central_charge(&self) -> Scalar {
        Scalar::ratio(3 * self.k, self.k + 2)
    }

    fn generators(&self) -> &[GenSpec] {
        &self.gens
    }

    fn words_at_level(&self, level: u32) -> Vec<Vec<Letter>> {
        fn rec(
            remaining: u32,
            prev: Option<Letter>,
            acc: &mut Vec<Letter>,
            out: &mut Vec<Vec<Letter>>,
        ) {
            if remaining == 0 {
                out.push(acc.clone());
                return;
            }
            for k in (1..=remaining).rev() {
                for g in [E, H, F] {
                    if let Some(p) = prev {
                        if !precedes(p, (k, g)) {
                            continue;
                        }
                    }
                    acc.push((k, g));
                    rec(remaining - k, Some((k, g)), acc, out);
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        let mut acc = Vec::new();
        rec(level, None, &mut acc, &mut out);
        out
    }

    fn word_level(&self, w: &Vec<Letter>) -> u32 {
        w.iter().map(|&(k, _)| k).sum()
    }

    fn label(&self, w: &Vec<Letter>) -> String {
        if w.is_empty() {
            "1".into()
        } else {
            w.iter()
                .map(|&(k, g)| format!("{}-{}", NAMES[g as usize], k))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    fn act(&self, gen: usize, m: i64, w: &Vec<Letter>) -> WordState<Vec<Letter>> {
        self.apply(gen as u8, m, w)
    }

    fn peel(&self, w: &Vec<Letter>) -> Option<(usize, i64, Vec<Letter>)> {
        w.split_first()
            .map(|(&(k, g), rest)| (g as usize, -(k as i64), rest.to_vec()))
    }

    fn conformal_state(&self) -> WordState<Vec<Letter>> {
        // Sugawara: nu = (e_{-1}f_{-1} + f_{-1}e_{-1} + h_{-1}h_{-1}/2) / (2(k+2))
        let den = 2 * (self.k + 2);
        let mut st = WordState::new();
        st.insert(vec![(1, E), (1, F)], Scalar::ratio(2, den));
        st.insert(vec![(2, H)], Scalar::ratio(-1, den));
        st.insert(vec![(1, H), (1, H)], Scalar::ratio(1, 2 * den));
        st
    }

    fn generator_word(&self, gen: usize) -> Vec<Letter> {
        vec![(1, gen as u8)]
    }

    fn metadata(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("family".into(), "affine_sl2".into());
        m.insert("level".into(), self.k.to_string());
        m.insert("normalization".into(), "B(h,h)=2".into());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pbw_counts() {
        let eng = Sl2Engine::new(1);
        let expect = [1usize, 3, 9, 22];
        for (l, e) in expect.iter().enumerate() {
            assert_eq!(eng.words_at_level(l as u32).len(), *e, "level {l}");
        }
    }

    #[test]
    fn affine_relations() {
        let eng = Sl2Engine::new(1);
        // e_1 f_{-1}|0> = h_0|0> + 1*k*B(e,f)|0> = k|0>
        let st = eng.apply(E, 1, &[(1, F)]);
        assert_eq!(st.len(), 1);
        assert_eq!(st[&vec![]], Scalar::one());
        // h_1 h_{-1}|0> = 2k|0>
        let st = eng.apply(H, 1, &[(1, H)]);
        assert_eq!(st[&vec![]], Scalar::from_int(2));
        // f_{-1} e_{-1}|0> = e_{-1}f_{-1}|0> - h_{-2}|0>
        let st = eng.apply(F, -1, &[(1, E)]);
        assert_eq!(st[&vec![(1, E), (1, F)]], Scalar::one());
        assert_eq!(st[&vec![(2, H)]], -Scalar::one());
        assert_eq!(st.len(), 2);
    }
}
