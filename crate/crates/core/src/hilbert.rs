//! Hilbert series of monomial quotients.
//!
//! For a monomial ideal `M ⊆ S = k[x_0..x_{n-1}]` the Hilbert series of `S/M`
//! is `K(t) / (1-t)^n`. `K` is computed by the pivot recursion
//! `K(M) = K(M + (x)) + t·K(M : x)`, which bottoms out once the generators are
//! pairwise coprime.

use serde::{Deserialize, Serialize};

use crate::ring::{binomial, Monomial, MAX_VARS};

/// Integer polynomial in `t`, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KPolynomial {
    pub coeffs: Vec<i64>,
}

impl KPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        KPolynomial { coeffs }
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at `t = 1`.
    pub fn at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Largest `e` with `(1-t)^e | K`, and the quotient.
    pub fn strip_one_minus_t(&self) -> (usize, Vec<i64>) {
        let mut cur = self.coeffs.clone();
        let mut e = 0;
        while !cur.is_empty() {
            match divide_one_minus_t(&cur) {
                Some(q) => {
                    cur = q;
                    e += 1;
                }
                None => break,
            }
        }
        (e, cur)
    }

    /// `dim_k (S/M)_d` for a ring with `n` variables.
    pub fn hilbert_function(&self, n: usize, d: i64) -> i64 {
        if d < 0 {
            return 0;
        }
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let k = d - i as i64;
                if k < 0 {
                    0
                } else if n == 0 {
                    c * i64::from(k == 0)
                } else {
                    c * binomial(n as i64 - 1 + k, k) as i64
                }
            })
            .sum()
    }
}

/// Exact division by `1 - t`; `None` if `1` is not a root.
pub fn divide_one_minus_t(p: &[i64]) -> Option<Vec<i64>> {
    if p.iter().sum::<i64>() != 0 {
        return None;
    }
    // p = (1 - t) q  =>  q_i = sum_{j <= i} p_j
    let mut q = Vec::with_capacity(p.len().saturating_sub(1));
    let mut acc = 0;
    for &c in &p[..p.len().saturating_sub(1)] {
        acc += c;
        q.push(acc);
    }
    while q.last() == Some(&0) {
        q.pop();
    }
    Some(q)
}

fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(acc: &mut Vec<i64>, b: &[i64], shift: usize) {
    if acc.len() < b.len() + shift {
        acc.resize(b.len() + shift, 0);
    }
    for (i, y) in b.iter().enumerate() {
        acc[i + shift] += y;
    }
}

/// Drops generators divisible by another one; the result is sorted.
pub fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| (m.degree(), m.exponents(MAX_VARS)));
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// K-polynomial of `S/M` for the monomial ideal generated by `gens`.
pub fn k_polynomial(gens: &[Monomial]) -> KPolynomial {
    KPolynomial::new(numerator(minimalize(gens.to_vec())))
}

fn numerator(gens: Vec<Monomial>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return Vec::new();
    }
    // count occurrences of each variable among the generators
    let mut counts = [0usize; MAX_VARS];
    for g in &gens {
        for (v, c) in counts.iter_mut().enumerate() {
            if g.exponent(v) > 0 {
                *c += 1;
            }
        }
    }
    let (pivot, &best) = counts.iter().enumerate().max_by_key(|(v, c)| (**c, std::cmp::Reverse(*v))).unwrap();
    if best <= 1 {
        // pairwise coprime: product of (1 - t^deg)
        let mut acc = vec![1];
        for g in &gens {
            let mut f = vec![0; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = mul(&acc, &f);
        }
        return acc;
    }
    let x = Monomial::var(pivot);
    let mut plus: Vec<Monomial> = gens.iter().filter(|g| g.exponent(pivot) == 0).copied().collect();
    plus.push(x);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| match g.div(&x) {
            Some(q) => q,
            None => *g,
        })
        .collect();
    let mut out = numerator(minimalize(plus));
    let rest = numerator(minimalize(colon));
    add_into(&mut out, &rest, 1);
    out
}

/// Hilbert data of `S/M` derived from its K-polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    /// Numerator of the Hilbert series over `(1-t)^n`.
    pub numerator: Vec<i64>,
    /// Krull dimension of the quotient.
    pub dimension: usize,
    /// Codimension `n - dimension`.
    pub codimension: usize,
    /// `K / (1-t)^codim`, present when every entry is nonnegative.
    pub h_vector: Option<Vec<i64>>,
    /// `h(1)`, the multiplicity.
    pub multiplicity: i64,
    /// Set when the reduced numerator has negative entries, which rules out
    /// the Cohen–Macaulay property.
    pub not_cohen_macaulay: bool,
}

impl HilbertData {
    pub fn from_k_polynomial(n: usize, k: &KPolynomial) -> Self {
        let (e, reduced) = k.strip_one_minus_t();
        let codim = e;
        let dimension = n.saturating_sub(codim);
        let multiplicity: i64 = reduced.iter().sum();
        let negative = reduced.iter().any(|&c| c < 0);
        HilbertData {
            numerator: k.coeffs.clone(),
            dimension,
            codimension: codim,
            h_vector: if negative { None } else { Some(reduced) },
            multiplicity,
            not_cohen_macaulay: negative,
        }
    }

    /// The h-vector with negative entries allowed.
    pub fn h_polynomial(&self) -> Vec<i64> {
        let mut cur = self.numerator.clone();
        for _ in 0..self.codimension {
            cur = divide_one_minus_t(&cur).expect("codimension divides the numerator");
        }
        cur
    }
}
