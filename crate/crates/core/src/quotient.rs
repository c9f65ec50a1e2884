//! Graded quotient rings `R = S/I` as finite-dimensional pieces.
//!
//! `R_d` has the standard monomials of degree `d` (those outside the initial
//! ideal) as basis. Multiplication by each variable is stored degreewise as
//! sparse columns.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{GroebnerBasis, IdealHandle};
use crate::linalg::{self, SparseVec};
use crate::ring::{Monomial, PolyRing, Polynomial};

#[derive(Debug, Clone)]
pub struct QuotientRing<F: Field> {
    ring: PolyRing<F>,
    gb: GroebnerBasis<F>,
    basis: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, u32>>,
    /// `mult[d][s][b]`: coordinates of `x_s · basis[d][b]` in `R_{d+1}`.
    mult: Vec<Vec<Vec<SparseVec<F::Elem>>>>,
    artinian: bool,
}

impl<F: Field> QuotientRing<F> {
    /// The Artinian quotient `S/I`, all degrees.
    pub fn new(ideal: &IdealHandle<F>) -> Result<Self> {
        if !ideal.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        if !ideal.is_artinian() {
            return Err(Error::NotArtinian);
        }
        Ok(Self::build(ideal, None))
    }

    /// `S/I` in degrees `<= max_degree`; works for any homogeneous ideal.
    pub fn truncated(ideal: &IdealHandle<F>, max_degree: u32) -> Result<Self> {
        if !ideal.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        Ok(Self::build(ideal, Some(max_degree)))
    }

    fn build(ideal: &IdealHandle<F>, cap: Option<u32>) -> Self {
        let ring = ideal.ring().clone();
        let gb = ideal.groebner().clone();
        let n = ring.nvars();
        let leads = gb.leading_monomials();
        let standard = |m: &Monomial| !leads.iter().any(|l| l.divides(m));
        let mut basis: Vec<Vec<Monomial>> = Vec::new();
        let mut cur: Vec<Monomial> = if standard(&Monomial::one()) { vec![Monomial::one()] } else { Vec::new() };
        let mut d = 0;
        while !cur.is_empty() && cap.is_none_or(|c| d <= c) {
            cur.sort_by(|a, b| ring.cmp(b, a));
            basis.push(cur.clone());
            let mut next: Vec<Monomial> = Vec::new();
            for m in &cur {
                for s in 0..n {
                    let x = m.mul(&Monomial::var(s));
                    if standard(&x) {
                        next.push(x);
                    }
                }
            }
            next.sort_by(|a, b| ring.cmp(b, a));
            next.dedup();
            cur = next;
            d += 1;
        }
        let artinian = cur.is_empty();
        let index: Vec<HashMap<Monomial, u32>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect())
            .collect();
        let mut q = QuotientRing {
            ring,
            gb,
            basis,
            index,
            mult: Vec::new(),
            artinian,
        };
        let top = q.basis.len();
        let mut mult = Vec::with_capacity(top);
        for d in 0..top {
            let mut per_var = Vec::with_capacity(n);
            for s in 0..n {
                let cols = q.basis[d]
                    .iter()
                    .map(|m| {
                        let x = m.mul(&Monomial::var(s));
                        if d + 1 >= top {
                            // beyond the stored range: zero when Artinian, dropped when truncated
                            return Vec::new();
                        }
                        if let Some(&i) = q.index[d + 1].get(&x) {
                            return vec![(i, q.ring.field().one())];
                        }
                        let nf = q.gb.normal_form(&q.ring.term(x, q.ring.field().one()));
                        q.encode_homogeneous(&nf)
                    })
                    .collect();
                per_var.push(cols);
            }
            mult.push(per_var);
        }
        q.mult = mult;
        q
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn groebner(&self) -> &GroebnerBasis<F> {
        &self.gb
    }

    pub fn is_artinian(&self) -> bool {
        self.artinian
    }

    /// Largest degree with a stored nonzero piece (the socle degree when Artinian).
    pub fn top_degree(&self) -> usize {
        self.basis.len().saturating_sub(1)
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.basis.get(d as usize).map_or(0, |b| b.len())
        }
    }

    pub fn hilbert_function(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    pub fn basis(&self, d: usize) -> &[Monomial] {
        self.basis.get(d).map_or(&[], |b| b.as_slice())
    }

    /// Coordinates of a polynomial already in normal form and homogeneous.
    fn encode_homogeneous(&self, nf: &Polynomial<F>) -> SparseVec<F::Elem> {
        let Some(d) = nf.degree() else { return Vec::new() };
        let idx = &self.index[d as usize];
        linalg::normalize(self.field(), nf.terms().iter().map(|(m, c)| (idx[m], c.clone())).collect())
    }

    /// Coordinates in `R_d` of a homogeneous polynomial of degree `d`.
    pub fn encode(&self, f: &Polynomial<F>) -> SparseVec<F::Elem> {
        let nf = self.gb.normal_form(f);
        match nf.degree() {
            Some(d) if (d as usize) < self.basis.len() => self.encode_homogeneous(&nf),
            _ => Vec::new(),
        }
    }

    pub fn decode(&self, d: usize, v: &[(u32, F::Elem)]) -> Polynomial<F> {
        self.ring
            .from_terms(v.iter().map(|(i, c)| (self.basis[d][*i as usize], c.clone())).collect())
    }

    /// `x_s · v` for `v` in `R_d`.
    pub fn mul_var(&self, d: usize, s: usize, v: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
        match self.mult.get(d) {
            Some(tab) => linalg::apply(self.field(), &tab[s], v),
            None => Vec::new(),
        }
    }

    /// Columns of multiplication by `x_s` from `R_d` to `R_{d+1}`.
    pub fn mult_table(&self, d: usize, s: usize) -> &[SparseVec<F::Elem>] {
        self.mult.get(d).map_or(&[], |t| t[s].as_slice())
    }

    /// `f · v` for a homogeneous `f` of degree `a` and `v` in `R_d`, landing in `R_{d+a}`.
    pub fn mul_form(&self, f: &Polynomial<F>, d: usize, v: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
        let k = self.field();
        let mut acc: Vec<(u32, F::Elem)> = Vec::new();
        for (m, c) in f.terms() {
            let mut w: SparseVec<F::Elem> = v.to_vec();
            let mut deg = d;
            for s in 0..self.nvars() {
                for _ in 0..m.exponent(s) {
                    w = self.mul_var(deg, s, &w);
                    deg += 1;
                }
            }
            acc.extend(w.into_iter().map(|(i, x)| (i, k.mul(&x, c))));
        }
        linalg::normalize(k, acc)
    }
}
