//! Word engines: each model family acts on a space of construction words
//! rooted at the vacuum.  A generic pipeline turns an engine into a
//! level-truncated model with exact Gram matrices, the radical quotient,
//! and a fully populated structure-constant table.
//!
//! Mode conventions: `act` and `peel` use homogeneous indices
//! (`a_n = a_(n + wt(a) - 1)`, so `a_n` maps level `l` to `l - n`); the
//! structure table and `word_product` use the original indices `a_(n)`.

use crate::graded::GradedVector;
use crate::model::{GeneratorInfo, VOAModel};
use crate::scalar::Scalar;
use crate::sparse::{quotient_by_radical, SparseMatrix};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub name: String,
    pub weight: u32,
    /// index of the adjoint generator: (g_n)^+ = adj(g)_{-n} in
    /// homogeneous indexing
    pub adjoint: usize,
}

/// Linear combination of words.
pub type WordState<W> = BTreeMap<W, Scalar>;
type ProdMemo<W> = BTreeMap<(W, i64, W), WordState<W>>;

pub fn state_add<W: Ord + Clone>(state: &mut WordState<W>, w: &W, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = state.entry(w.clone()).or_insert_with(Scalar::zero);
    *entry = &*entry + &c;
    if entry.is_zero() {
        state.remove(w);
    }
}

pub trait WordEngine {
    type Word: Clone + Ord + std::fmt::Debug;

    fn name(&self) -> String;
    fn central_charge(&self) -> Scalar;
    fn generators(&self) -> &[GenSpec];
    /// Canonically ordered basis words of one level of the word space.
    fn words_at_level(&self, level: u32) -> Vec<Self::Word>;
    fn word_level(&self, w: &Self::Word) -> u32;
    fn label(&self, w: &Self::Word) -> String;
    /// Homogeneous mode g_m applied to a word.
    fn act(&self, gen: usize, m: i64, w: &Self::Word) -> WordState<Self::Word>;
    /// Outermost letter of a word: w = g_m w' with m <= -1 homogeneous.
    /// None exactly for the vacuum word.
    fn peel(&self, w: &Self::Word) -> Option<(usize, i64, Self::Word)>;
    /// Conformal vector as a word state at level 2.
    fn conformal_state(&self) -> WordState<Self::Word>;
    /// The word representing one generator (at level = its weight).
    fn generator_word(&self, gen: usize) -> Self::Word;
    fn metadata(&self) -> BTreeMap<String, String> {
        BTreeMap::new()
    }
}

struct BuildCtx<'a, E: WordEngine> {
    engine: &'a E,
    words: Vec<Vec<E::Word>>,
    pair_memo: BTreeMap<(E::Word, E::Word), Scalar>,
    prod_memo: ProdMemo<E::Word>,
}

impl<'a, E: WordEngine> BuildCtx<'a, E> {
    fn new(engine: &'a E, cutoff: u32) -> Self {
        let words: Vec<Vec<E::Word>> = (0..=cutoff)
            .map(|l| engine.words_at_level(l))
            .collect();
        BuildCtx {
            engine,
            words,
            pair_memo: BTreeMap::new(),
            prod_memo: BTreeMap::new(),
        }
    }

    fn act_state(
        &self,
        gen: usize,
        m: i64,
        state: &WordState<E::Word>,
    ) -> WordState<E::Word> {
        let mut out = WordState::new();
        for (w, c) in state {
            for (w2, c2) in self.engine.act(gen, m, w) {
                state_add(&mut out, &w2, c * &c2);
            }
        }
        out
    }

    /// Scalar product of two words, by peeling the first and moving its
    /// adjoint mode across.
    fn pair(&mut self, w1: &E::Word, w2: &E::Word) -> Scalar {
        if self.engine.word_level(w1) != self.engine.word_level(w2) {
            return Scalar::zero();
        }
        let key = if w1 <= w2 {
            (w1.clone(), w2.clone())
        } else {
            (w2.clone(), w1.clone())
        };
        if let Some(v) = self.pair_memo.get(&key) {
            return v.clone();
        }
        let (a, b) = key.clone();
        let value = match self.engine.peel(&a) {
            None => {
                if self.engine.peel(&b).is_none() {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
            Some((gen, m, rest)) => {
                let adj = self.engine.generators()[gen].adjoint;
                let lowered = self.engine.act(adj, -m, &b);
                let mut acc = Scalar::zero();
                for (w, c) in lowered {
                    acc += &c * &self.pair(&rest, &w);
                }
                acc
            }
        };
        self.pair_memo.insert(key, value.clone());
        value
    }

    fn pair_state(&mut self, w: &E::Word, state: &WordState<E::Word>) -> Scalar {
        let mut acc = Scalar::zero();
        for (w2, c) in state {
            acc += c * &self.pair(w, w2);
        }
        acc
    }

    /// a_(n) b in the original mode convention, computed recursively from
    /// engine actions through the iterate formula.  Exact in word space.
    fn word_product(
        &mut self,
        a: &E::Word,
        n: i64,
        b: &E::Word,
    ) -> WordState<E::Word> {
        let key = (a.clone(), n, b.clone());
        if let Some(v) = self.prod_memo.get(&key) {
            return v.clone();
        }
        let value = match self.engine.peel(a) {
            None => {
                // vacuum: 1_(n) b = delta_{n,-1} b
                let mut out = WordState::new();
                if n == -1 {
                    state_add(&mut out, b, Scalar::one());
                }
                out
            }
            Some((gen, m_hom, rest)) => {
                let d = self.engine.generators()[gen].weight;
                let m = m_hom + d as i64 - 1;
                // (g_(m) w)_(n) c = sum_j (-1)^j C(m,j)
                //   [ g_(m-j)(w_(n+j) c) - (-1)^m w_(m+n-j)(g_(j) c) ]
                let mut out = WordState::new();
                let lw = self.engine.word_level(&rest) as i64;
                let lc = self.engine.word_level(b) as i64;
                let jmax = std::cmp::max(lw + lc - n, d as i64 + lc);
                let m_sign = if m.rem_euclid(2) == 0 {
                    Scalar::one()
                } else {
                    -Scalar::one()
                };
                for j in 0..=jmax.max(0) {
                    let cmj = Scalar::binomial(m, j as u32);
                    let j_sign = if j % 2 == 0 {
                        Scalar::one()
                    } else {
                        -Scalar::one()
                    };
                    let coef = &j_sign * &cmj;
                    if !coef.is_zero() {
                        let inner = self.word_product(&rest, n + j, b);
                        if !inner.is_empty() {
                            let outer = self.act_state(
                                gen,
                                (m - j) - d as i64 + 1,
                                &inner,
                            );
                            for (w, c) in outer {
                                state_add(&mut out, &w, &coef * &c);
                            }
                        }
                        let inner2 = self.engine.act(gen, j - d as i64 + 1, b);
                        if !inner2.is_empty() {
                            let mut st = WordState::new();
                            for (w, c) in &inner2 {
                                for (w2, c2) in
                                    self.word_product(&rest, m + n - j, w)
                                {
                                    state_add(&mut st, &w2, c * &c2);
                                }
                            }
                            for (w, c) in st {
                                let v = &(&coef * &m_sign) * &c;
                                state_add(&mut out, &w, -v);
                            }
                        }
                    }
                }
                out
            }
        };
        self.prod_memo.insert(key, value.clone());
        value
    }

}

/// Build a level-truncated model from a word engine: enumerate words,
/// compute the exact Gram per level, quotient by its radical, and populate
/// the structure-constant table over the admissible mode window.
pub fn build_model<E: WordEngine>(engine: &E, cutoff: u32) -> VOAModel {
    let mut ctx = BuildCtx::new(engine, cutoff);

    let mut grams_full = Vec::new();
    for l in 0..=cutoff {
        let ws = ctx.words[l as usize].clone();
        let dim = ws.len();
        let mut g = SparseMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = ctx.pair(&ws[i], &ws[j]);
                if !v.is_zero() {
                    g.set(i, j, v.clone());
                    g.set(j, i, v);
                }
            }
        }
        grams_full.push(g);
    }

    let mut kept: Vec<Vec<usize>> = Vec::new();
    for g in &grams_full {
        let q = quotient_by_radical(g);
        kept.push(q.kept);
    }
    if !kept[0].contains(&0) {
        panic!("vacuum fell into the radical");
    }

    let level_dims: Vec<usize> = kept.iter().map(|k| k.len()).collect();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for (l, ks) in kept.iter().enumerate() {
        labels.push(
            ks.iter()
                .map(|&i| engine.label(&ctx.words[l][i]))
                .collect(),
        );
    }

    let mut gram_public: Vec<SparseMatrix> = Vec::new();
    for (l, ks) in kept.iter().enumerate() {
        let d = ks.len();
        let mut g = SparseMatrix::zeros(d, d);
        for (i2, &i) in ks.iter().enumerate() {
            for (j2, &j) in ks.iter().enumerate() {
                let v = grams_full[l].get(i, j);
                if !v.is_zero() {
                    g.set(i2, j2, v);
                }
            }
        }
        gram_public.push(g);
    }

    // per-level inverse of the kept Gram, for reduction of word states
    let mut gram_inv: Vec<Option<SparseMatrix>> = Vec::new();
    for g in &gram_public {
        if g.nrows == 0 {
            gram_inv.push(None);
            continue;
        }
        let mut cols = Vec::new();
        for i in 0..g.nrows {
            let mut e = vec![Scalar::zero(); g.nrows];
            e[i] = Scalar::one();
            cols.push(g.solve(&e).expect("kept gram is invertible"));
        }
        let mut inv = SparseMatrix::zeros(g.nrows, g.nrows);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    inv.set(i, j, v.clone());
                }
            }
        }
        gram_inv.push(Some(inv));
    }

    // reduce a word state at one level to public coordinates:
    // x = G_kept^{-1} (<kept_i | v>)_i
    let reduce = |ctx: &mut BuildCtx<E>,
                      state: &WordState<E::Word>|
     -> GradedVector {
        let mut by_level: BTreeMap<u32, WordState<E::Word>> = BTreeMap::new();
        for (w, c) in state {
            let l = ctx.engine.word_level(w);
            state_add(by_level.entry(l).or_default(), w, c.clone());
        }
        let mut out = GradedVector::zero();
        for (l, st) in by_level {
            assert!(l <= cutoff, "state escapes the truncation window");
            let ks = kept[l as usize].clone();
            if ks.is_empty() {
                continue;
            }
            let mut rhs = Vec::with_capacity(ks.len());
            for &i in &ks {
                let w = ctx.words[l as usize][i].clone();
                rhs.push(ctx.pair_state(&w, &st));
            }
            let inv = gram_inv[l as usize].as_ref().unwrap();
            let coords = inv.apply(&rhs);
            for (i, v) in coords.into_iter().enumerate() {
                out.add_term(l, i, ks.len(), v);
            }
        }
        out.prune();
        out
    };

    // structure table over the admissible window
    let mut structure: BTreeMap<(u32, i64, u32), Vec<(u32, Scalar)>> =
        BTreeMap::new();
    let offsets: Vec<u32> = {
        let mut o = vec![0u32];
        for d in &level_dims {
            let last = *o.last().unwrap();
            o.push(last + *d as u32);
        }
        o
    };
    for la in 0..=cutoff {
        for (ia, &wa_idx) in kept[la as usize].iter().enumerate() {
            let wa = ctx.words[la as usize][wa_idx].clone();
            let a_glob = offsets[la as usize] + ia as u32;
            for lb in 0..=cutoff {
                for (ib, &wb_idx) in kept[lb as usize].iter().enumerate() {
                    let wb = ctx.words[lb as usize][wb_idx].clone();
                    let b_glob = offsets[lb as usize] + ib as u32;
                    let n_hi = la as i64 + lb as i64 - 1;
                    let n_lo = n_hi - cutoff as i64;
                    for n in n_lo..=n_hi {
                        let prod = ctx.word_product(&wa, n, &wb);
                        let reduced = reduce(&mut ctx, &prod);
                        let target = (n_hi - n) as u32;
                        if let Some(coords) = reduced.coords(target) {
                            let entries: Vec<(u32, Scalar)> = coords
                                .iter()
                                .enumerate()
                                .filter(|(_, v)| !v.is_zero())
                                .map(|(i, v)| (i as u32, v.clone()))
                                .collect();
                            if !entries.is_empty() {
                                structure.insert((a_glob, n, b_glob), entries);
                            }
                        }
                    }
                }
            }
        }
    }

    let conformal_vector = reduce(&mut ctx, &engine.conformal_state());

    let generators: Vec<GeneratorInfo> = engine
        .generators()
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let w = engine.generator_word(i);
            let mut st = WordState::new();
            state_add(&mut st, &w, Scalar::one());
            GeneratorInfo {
                name: spec.name.clone(),
                weight: spec.weight,
                adjoint: spec.adjoint,
                vector: reduce(&mut ctx, &st),
            }
        })
        .collect();

    VOAModel::assemble(
        engine.name(),
        cutoff,
        engine.central_charge(),
        level_dims,
        labels,
        gram_public,
        structure,
        conformal_vector,
        generators,
        engine.metadata(),
    )
}
