//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use aligndist::{Alphabet, LetterString, Scoring, Symbol};
use rand::Rng;

/// One alignment found by exhaustive recursion: its score (summed column by
/// column from the left) and its pair counts.
#[derive(Debug, Clone)]
pub struct Enumerated {
    pub score: f64,
    pub counts: Vec<u32>,
    pub columns: Vec<(Symbol, Symbol)>,
}

fn pair_index(k: usize, u: Symbol, v: Symbol) -> usize {
    let code = |s: Symbol| match s {
        Symbol::Letter(a) => a as usize,
        Symbol::Gap => k,
    };
    code(u) * (k + 1) + code(v)
}

fn value(s: &Scoring, u: Symbol, v: Symbol) -> f64 {
    s.score_vector()[pair_index(s.alphabet().len(), u, v)]
}

/// Every alignment of `x` and `y`, by recursion over the three possible
/// first columns.
pub fn all_alignments(x: &[u8], y: &[u8], scoring: &Scoring) -> Vec<Enumerated> {
    let k = scoring.alphabet().len();
    let mut out = Vec::new();
    let mut columns = Vec::new();
    recurse(x, y, scoring, k, &mut columns, &mut out);
    out
}

fn recurse(x: &[u8], y: &[u8], s: &Scoring, k: usize, columns: &mut Vec<(Symbol, Symbol)>, out: &mut Vec<Enumerated>) {
    if x.is_empty() && y.is_empty() {
        let mut counts = vec![0u32; (k + 1) * (k + 1) - 1];
        let mut score = 0.0;
        for &(u, v) in columns.iter() {
            counts[pair_index(k, u, v)] += 1;
            score += value(s, u, v);
        }
        out.push(Enumerated { score, counts, columns: columns.clone() });
        return;
    }
    if let (Some(&a), Some(&b)) = (x.first(), y.first()) {
        columns.push((Symbol::Letter(a), Symbol::Letter(b)));
        recurse(&x[1..], &y[1..], s, k, columns, out);
        columns.pop();
    }
    if let Some(&a) = x.first() {
        columns.push((Symbol::Letter(a), Symbol::Gap));
        recurse(&x[1..], y, s, k, columns, out);
        columns.pop();
    }
    if let Some(&b) = y.first() {
        columns.push((Symbol::Gap, Symbol::Letter(b)));
        recurse(x, &y[1..], s, k, columns, out);
        columns.pop();
    }
}

pub fn ties(a: f64, best: f64) -> bool {
    (best - a).abs() <= 1e-9 * (1.0 + best.abs())
}

/// Brute-force optimum, the distinct count vectors of optimal alignments,
/// and the number of optimal alignments.
pub fn brute_force(x: &LetterString, y: &LetterString, scoring: &Scoring) -> (f64, BTreeSet<Vec<u32>>, usize) {
    let all = all_alignments(x.letters(), y.letters(), scoring);
    let best = all.iter().map(|e| e.score).fold(f64::NEG_INFINITY, f64::max);
    let optimal: Vec<&Enumerated> = all.iter().filter(|e| ties(e.score, best)).collect();
    let set = optimal.iter().map(|e| e.counts.clone()).collect();
    (best, set, optimal.len())
}

pub fn random_string<R: Rng>(alphabet: &Alphabet, n: usize, rng: &mut R) -> LetterString {
    let k = alphabet.len() as u8;
    LetterString::from_indices(alphabet, (0..n).map(|_| rng.random_range(0..k)).collect()).unwrap()
}

/// Either a continuous random table or a small-integer one (which produces
/// genuine ties between different count vectors).
pub fn random_scoring<R: Rng>(alphabet: &Alphabet, rng: &mut R) -> Scoring {
    let dim = alphabet.dim();
    let values: Vec<f64> = if rng.random_bool(0.5) {
        (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
    } else {
        (0..dim).map(|_| rng.random_range(-2i32..=2) as f64).collect()
    };
    Scoring::new(alphabet.clone(), values).unwrap()
}
