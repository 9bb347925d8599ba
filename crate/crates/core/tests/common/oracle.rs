//! A dense cobar complex for `A_*` at `p = 3` through internal degree 15,
//! where `A_*` is spanned by `τ_0^a τ_1^b ξ_1^n`.

use std::collections::HashMap;

use adams_core::cobar::CobarComplex;
use adams_core::hopf::{SteenrodAlgebra, SteenrodMonomial};

use super::{binomial, dense_rank};

pub const P: u32 = 3;
/// Largest internal degree the monomials above span.
pub const DEGREE_LIMIT: u32 = 15;

pub type Mono = (u32, u32, u32);

pub fn deg((a, b, n): Mono) -> u32 {
    a + 5 * b + 4 * n
}

/// Reduced coproduct from `Δτ_0 = τ_0⊗1 + 1⊗τ_0`, `Δτ_1 = τ_1⊗1 + ξ_1⊗τ_0 + 1⊗τ_1`,
/// `Δξ_1 = ξ_1⊗1 + 1⊗ξ_1`, expanded term by term with the Koszul sign.
pub fn reduced_coproduct((a, b, n): Mono) -> Vec<(Mono, Mono, i64)> {
    let mut out: HashMap<(Mono, Mono), i64> = HashMap::new();
    let tau0_choices: &[u8] = if a == 1 { &[0, 1] } else { &[2] };
    let tau1_choices: &[u8] = if b == 1 { &[0, 1, 2] } else { &[3] };
    for &c0 in tau0_choices {
        for &c1 in tau1_choices {
            for i in 0..=n {
                // c0: 0 left, 1 right; c1: 0 τ_1⊗1, 1 ξ_1⊗τ_0, 2 1⊗τ_1
                let right_tau0 = u32::from(c0 == 1) + u32::from(c1 == 1);
                if right_tau0 > 1 {
                    continue;
                }
                let left = (u32::from(c0 == 0), u32::from(c1 == 0), i + u32::from(c1 == 1));
                let right = (right_tau0, u32::from(c1 == 2), n - i);
                let sign = if c0 == 1 && c1 == 0 { -1 } else { 1 };
                *out.entry((left, right)).or_insert(0) += sign * binomial(n, i) as i64;
            }
        }
    }
    out.into_iter()
        .filter(|((l, r), c)| deg(*l) > 0 && deg(*r) > 0 && c.rem_euclid(P as i64) != 0)
        .map(|((l, r), c)| (l, r, c))
        .collect()
}

pub struct Oracle {
    pub letters: Vec<Mono>,
    /// Words of each `(s, t)`, as letter indices.
    pub words: HashMap<(u32, u32), Vec<Vec<usize>>>,
    pub index: HashMap<Vec<usize>, usize>,
    coproducts: Vec<Vec<(usize, usize, i64)>>,
}

impl Oracle {
    /// Words of length `≤ s_max + 1` and degree `≤ t_max`.
    pub fn new(s_max: u32, t_max: u32) -> Self {
        assert!(t_max <= DEGREE_LIMIT);
        let mut letters = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for n in 0..=t_max / 4 {
                    let m = (a, b, n);
                    if deg(m) > 0 && deg(m) <= t_max {
                        letters.push(m);
                    }
                }
            }
        }
        let pos: HashMap<Mono, usize> = letters.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let coproducts = letters
            .iter()
            .map(|&m| reduced_coproduct(m).into_iter().map(|(l, r, c)| (pos[&l], pos[&r], c)).collect())
            .collect();
        let mut words: HashMap<(u32, u32), Vec<Vec<usize>>> = HashMap::new();
        words.insert((0, 0), vec![vec![]]);
        for s in 1..=s_max + 1 {
            for t in 0..=t_max {
                let mut list = Vec::new();
                for (i, &m) in letters.iter().enumerate() {
                    if deg(m) <= t {
                        for mut w in words.get(&(s - 1, t - deg(m))).cloned().unwrap_or_default() {
                            w.push(i);
                            list.push(w);
                        }
                    }
                }
                words.insert((s, t), list);
            }
        }
        let index = words.values().flat_map(|l| l.iter().enumerate().map(|(i, w)| (w.clone(), i))).collect();
        Oracle {
            letters,
            words,
            index,
            coproducts,
        }
    }

    pub fn dim(&self, s: u32, t: u32) -> usize {
        self.words.get(&(s, t)).map_or(0, |l| l.len())
    }

    fn d_word(&self, w: &[usize], t: u32) -> Vec<u32> {
        let s = w.len() as u32;
        let mut out = vec![0i64; self.dim(s + 1, t)];
        for (i, &a) in w.iter().enumerate() {
            let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
            for &(l, r, c) in &self.coproducts[a] {
                let mut nw = w[..i].to_vec();
                nw.push(l);
                nw.push(r);
                nw.extend_from_slice(&w[i + 1..]);
                out[self.index[&nw]] += sign * c;
            }
        }
        out.into_iter().map(|c| c.rem_euclid(P as i64) as u32).collect()
    }

    /// Rows are the images of the basis words of `(s, t)`.
    pub fn d_matrix(&self, s: u32, t: u32) -> Vec<Vec<u32>> {
        self.words.get(&(s, t)).map_or_else(Vec::new, |l| l.iter().map(|w| self.d_word(w, t)).collect())
    }

    pub fn rank(&self, s: u32, t: u32) -> usize {
        if self.dim(s, t) == 0 || self.dim(s + 1, t) == 0 {
            return 0;
        }
        dense_rank(P, self.d_matrix(s, t))
    }

    pub fn ext_dim(&self, s: u32, t: u32) -> usize {
        let incoming = if s == 0 { 0 } else { self.rank(s - 1, t) };
        self.dim(s, t) - self.rank(s, t) - incoming
    }
}

fn to_mono(m: &SteenrodMonomial) -> Mono {
    let ext = m.exterior();
    let poly = m.poly();
    assert!(poly.iter().skip(1).all(|&e| e == 0), "{m} outside the oracle range");
    (u32::from(ext.contains(&0)), u32::from(ext.contains(&1)), poly.first().copied().unwrap_or(0))
}

/// Compares `cx` with the oracle on every `(s, t)` with `s ≤ s_max`,
/// `t ≤ t_max`: cochain and Ext dimensions, and that the class
/// representatives are oracle cocycles independent modulo boundaries.
pub fn check_adams_complex(cx: &CobarComplex, alg: &SteenrodAlgebra, s_max: u32, t_max: u32) -> Result<(), String> {
    let oracle = Oracle::new(s_max, t_max);
    let letter_pos: HashMap<Mono, usize> = oracle.letters.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    for s in 0..=s_max {
        for t in 0..=t_max {
            if cx.dim(s, t) != oracle.dim(s, t) {
                return Err(format!("({s},{t}): {} cochains, oracle has {}", cx.dim(s, t), oracle.dim(s, t)));
            }
            let dim = oracle.ext_dim(s, t);
            let group = cx.ext(s, t).map_err(|e| e.to_string())?;
            if group.dim() != dim {
                return Err(format!("({s},{t}): Ext has dimension {}, oracle has {dim}", group.dim()));
            }
            if dim == 0 {
                continue;
            }
            let slice = cx.slice(s, t).map_err(|e| e.to_string())?;
            let reps: Vec<Vec<u32>> = group
                .classes()
                .iter()
                .map(|class| {
                    let mut v = vec![0u32; oracle.dim(s, t)];
                    for (i, c) in class.representative.iter() {
                        let word: Vec<usize> = slice.basis[i as usize][1..]
                            .iter()
                            .map(|&id| letter_pos[&to_mono(alg.monomial(id))])
                            .collect();
                        v[oracle.index[&word]] = c;
                    }
                    v
                })
                .collect();
            let d = oracle.d_matrix(s, t);
            for (j, rep) in reps.iter().enumerate() {
                for col in 0..oracle.dim(s + 1, t) {
                    let entry: u64 = rep.iter().zip(&d).map(|(&c, row)| u64::from(c * row[col])).sum();
                    if !entry.is_multiple_of(u64::from(P)) {
                        return Err(format!("({s},{t})#{j} is not a cocycle"));
                    }
                }
            }
            let boundaries = if s == 0 { Vec::new() } else { oracle.d_matrix(s - 1, t) };
            let b_rank = if boundaries.is_empty() { 0 } else { dense_rank(P, boundaries.clone()) };
            let mut all = boundaries;
            all.extend(reps);
            if dense_rank(P, all) != b_rank + dim {
                return Err(format!("({s},{t}): representatives are dependent modulo boundaries"));
            }
        }
    }
    Ok(())
}
