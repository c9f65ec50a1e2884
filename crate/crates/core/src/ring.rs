//! Standard graded polynomial rings.
//!
//! A [`PolyRing`] is a context object: it owns the coefficient field, the
//! variable names and the monomial order, and all polynomial arithmetic goes
//! through it. [`Polynomial`] values are plain term lists kept in canonical
//! form (strictly descending in the ring's order, no zero coefficients).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};

/// Hard cap on the number of variables of a ring.
pub const MAX_VARS: usize = 16;

/// An exponent vector. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::default();
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::default();
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            assert!(e <= u8::MAX as u32, "exponent overflow");
            *slot = e as u8;
        }
        m
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.exps[..n].iter().map(|&e| e as u32).collect()
    }

    pub fn set_exponent(&mut self, i: usize, e: u32) {
        assert!(e <= u8::MAX as u32, "exponent overflow");
        self.exps[i] = e as u8;
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::default();
        for i in 0..MAX_VARS {
            let (s, overflow) = self.exps[i].overflowing_add(other.exps[i]);
            assert!(!overflow, "exponent overflow");
            out.exps[i] = s;
        }
        out
    }

    /// `self | other`
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other | self`.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Monomial::default();
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].checked_sub(other.exps[i])?;
        }
        Some(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::default();
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].max(other.exps[i]);
        }
        out
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::default();
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].min(other.exps[i]);
        }
        out
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i` set iff variable `i` occurs.
    pub fn support(&self) -> u32 {
        let mut s = 0u32;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                s |= 1 << i;
            }
        }
        s
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e > 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// Term orders on monomials. Variables are ordered `x0 > x1 > ... > x_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Lex,
    Grlex,
    /// Weight order eliminating the last `block` variables: compare their
    /// total degree first, then break ties by grevlex.
    Elimination { block: usize },
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial, n: usize) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(a, b, n),
            MonomialOrder::Grlex => a.degree().cmp(&b.degree()).then_with(|| lex(a, b, n)),
            MonomialOrder::Grevlex => grevlex(a, b, n),
            MonomialOrder::Elimination { block } => {
                let wa: u32 = (n - block..n).map(|i| a.exponent(i)).sum();
                let wb: u32 = (n - block..n).map(|i| b.exponent(i)).sum();
                wa.cmp(&wb).then_with(|| grevlex(a, b, n))
            }
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "grevlex" => Ok(MonomialOrder::Grevlex),
            "lex" => Ok(MonomialOrder::Lex),
            "grlex" => Ok(MonomialOrder::Grlex),
            other => Err(Error::Usage(format!("unknown monomial order {other:?}"))),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Grlex => write!(f, "grlex"),
            MonomialOrder::Elimination { block } => write!(f, "elim({block})"),
        }
    }
}

#[inline]
fn lex(a: &Monomial, b: &Monomial, n: usize) -> Ordering {
    for i in 0..n {
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[inline]
fn grevlex(a: &Monomial, b: &Monomial, n: usize) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..n).rev() {
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// Serializable description of a ring, as written in file headers and reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub variable_count: usize,
    pub field: FieldDescriptor,
    pub variable_names: Vec<String>,
    pub order: MonomialOrder,
}

/// Polynomial ring context `k[x0, ..., x_{n-1}]`, standard graded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing<F: Field> {
    field: F,
    names: Vec<String>,
    order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    /// Ring with variables `x0..x_{n-1}` and grevlex order.
    pub fn new(field: F, n: usize) -> Result<Self> {
        Self::with_names(field, default_names("x", n))
    }

    pub fn with_names(field: F, names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Usage("a ring needs at least one variable".into()));
        }
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Usage(format!("duplicate variable name {a:?}")));
            }
            let ok = a.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Usage(format!("invalid variable name {a:?}")));
            }
        }
        Ok(PolyRing {
            field,
            names,
            order: MonomialOrder::Grevlex,
        })
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing {
            field: self.field.clone(),
            names: self.names.clone(),
            order,
        }
    }

    /// Same ring with extra variables appended.
    pub fn extended(&self, extra: &[&str], order: MonomialOrder) -> Result<Self> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.to_string()));
        Ok(Self::with_names(self.field.clone(), names)?.with_order(order))
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn descriptor(&self) -> RingDescriptor {
        RingDescriptor {
            variable_count: self.nvars(),
            field: self.field.descriptor(),
            variable_names: self.names.clone(),
            order: self.order,
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.compare(a, b, self.names.len())
    }

    pub fn zero(&self) -> Polynomial<F> {
        Polynomial { terms: Vec::new() }
    }

    pub fn one(&self) -> Polynomial<F> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Polynomial<F> {
        self.term(Monomial::one(), c)
    }

    pub fn var(&self, i: usize) -> Polynomial<F> {
        assert!(i < self.nvars());
        self.term(Monomial::var(i), self.field.one())
    }

    pub fn term(&self, m: Monomial, c: F::Elem) -> Polynomial<F> {
        if self.field.is_zero(&c) {
            self.zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Canonical polynomial from an arbitrary term list (merges duplicates).
    pub fn from_terms(&self, terms: Vec<(Monomial, F::Elem)>) -> Polynomial<F> {
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = self.field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut out: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .collect();
        out.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Polynomial { terms: out }
    }

    /// Builds `sum c * x^e` from integer data, e.g. `&[(1, &[2, 0]), (-1, &[0, 2])]`.
    pub fn from_int_terms(&self, terms: &[(i64, &[u32])]) -> Polynomial<F> {
        self.from_terms(
            terms
                .iter()
                .map(|(c, e)| (Monomial::from_exponents(e), self.field.from_i64(*c)))
                .collect(),
        )
    }

    pub fn is_canonical(&self, f: &Polynomial<F>) -> bool {
        f.terms.iter().all(|(m, c)| {
            !self.field.is_zero(c) && (self.nvars()..MAX_VARS).all(|i| m.exponent(i) == 0)
        }) && f
            .terms
            .windows(2)
            .all(|w| self.cmp(&w[0].0, &w[1].0) == Ordering::Greater)
    }

    pub fn add(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        self.combine(f, g, false)
    }

    pub fn sub(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        self.combine(f, g, true)
    }

    fn combine(&self, f: &Polynomial<F>, g: &Polynomial<F>, negate: bool) -> Polynomial<F> {
        let k = &self.field;
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            let (mf, cf) = &f.terms[i];
            let (mg, cg) = &g.terms[j];
            match self.cmp(mf, mg) {
                Ordering::Greater => {
                    out.push((*mf, cf.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mg, if negate { k.neg(cg) } else { cg.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { k.sub(cf, cg) } else { k.add(cf, cg) };
                    if !k.is_zero(&c) {
                        out.push((*mf, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(f.terms[i..].iter().cloned());
        out.extend(
            g.terms[j..]
                .iter()
                .map(|(m, c)| (*m, if negate { k.neg(c) } else { c.clone() })),
        );
        Polynomial { terms: out }
    }

    pub fn neg(&self, f: &Polynomial<F>) -> Polynomial<F> {
        Polynomial {
            terms: f.terms.iter().map(|(m, c)| (*m, self.field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, f: &Polynomial<F>, c: &F::Elem) -> Polynomial<F> {
        if self.field.is_zero(c) {
            return self.zero();
        }
        Polynomial {
            terms: f.terms.iter().map(|(m, a)| (*m, self.field.mul(a, c))).collect(),
        }
    }

    /// `c * m * f`; order is preserved because monomial orders are multiplicative.
    pub fn mul_term(&self, f: &Polynomial<F>, m: &Monomial, c: &F::Elem) -> Polynomial<F> {
        if self.field.is_zero(c) {
            return self.zero();
        }
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        if f.is_zero() || g.is_zero() {
            return self.zero();
        }
        let (small, large) = if f.terms.len() <= g.terms.len() { (f, g) } else { (g, f) };
        let mut acc = self.zero();
        for (m, c) in &small.terms {
            acc = self.add(&acc, &self.mul_term(large, m, c));
        }
        acc
    }

    pub fn pow(&self, f: &Polynomial<F>, e: u32) -> Polynomial<F> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// Random homogeneous form of degree `d` with every monomial present.
    pub fn random_form<R: rand::Rng + ?Sized>(&self, d: u32, rng: &mut R) -> Polynomial<F> {
        let terms = monomials_of_degree(self.nvars(), d)
            .into_iter()
            .map(|m| (m, self.field.random(rng)))
            .collect();
        self.from_terms(terms)
    }

    /// Re-sorts `f` (from a ring with the same variables) into this ring's order.
    pub fn import(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let mut terms = f.terms.clone();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Polynomial { terms }
    }

    /// Substitutes variable `i` of the source by variable `map[i]` of this ring.
    pub fn rename_vars(&self, f: &Polynomial<F>, map: &[usize]) -> Polynomial<F> {
        let n = self.nvars();
        self.from_terms(
            f.terms
                .iter()
                .map(|(m, c)| {
                    let mut out = Monomial::one();
                    for (i, &target) in map.iter().enumerate() {
                        assert!(target < n);
                        let e = m.exponent(i);
                        if e > 0 {
                            out.set_exponent(target, out.exponent(target) + e);
                        }
                    }
                    (out, c.clone())
                })
                .collect(),
        )
    }

    /// Substitutes each variable `x_i` by the polynomial `images[i]` of `target`.
    pub fn substitute(
        &self,
        f: &Polynomial<F>,
        target: &PolyRing<F>,
        images: &[Polynomial<F>],
    ) -> Polynomial<F> {
        assert_eq!(images.len(), self.nvars());
        let mut acc = target.zero();
        for (m, c) in &f.terms {
            let mut t = target.constant(c.clone());
            for (i, img) in images.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    t = target.mul(&t, &target.pow(img, e));
                }
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            match m.exponent(i) {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Canonical text form, accepted back by the polynomial parser.
    pub fn format(&self, f: &Polynomial<F>) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in f.terms.iter().enumerate() {
            let cs = self.field.format(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&self.format_monomial(m));
            }
        }
        out
    }
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// All monomials of degree `d` in `n` variables, in lex-descending order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur.set_exponent(i, left);
            out.push(*cur);
            cur.set_exponent(i, 0);
            return;
        }
        for e in (0..=left).rev() {
            cur.set_exponent(i, e);
            rec(n, i + 1, left - e, cur, out);
        }
        cur.set_exponent(i, 0);
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    rec(n, 0, d, &mut Monomial::one(), &mut out);
    out
}

/// `binom(n + d - 1, d)`, the dimension of `S_d` in `n` variables.
pub fn count_monomials(n: usize, d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    if n == 0 {
        return u64::from(d == 0);
    }
    binomial((n as i64) + d - 1, d)
}

/// Binomial coefficient with the convention `binom(a, b) = 0` unless `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> u64 {
    if b < 0 || a < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// A polynomial in canonical form relative to some [`PolyRing`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F: Field> {
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Polynomial<F> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|(t, _)| t.degree() == d)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&F::Elem> {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c)
    }

    /// Wraps a term list already in canonical form for `ring`.
    pub(crate) fn from_sorted_terms(terms: Vec<(Monomial, F::Elem)>) -> Self {
        Polynomial { terms }
    }

    pub fn monic(&self, field: &F) -> Polynomial<F> {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = field.inv(lc).expect("nonzero leading coefficient");
                Polynomial {
                    terms: self.terms.iter().map(|(m, c)| (*m, field.mul(c, &inv))).collect(),
                }
            }
        }
    }
}

/// Graded free module `⊕ S(-d_k)`: basis element `e_k` sits in degree `degrees[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedFreeModule {
    pub degrees: Vec<i32>,
}

impl GradedFreeModule {
    pub fn new(degrees: Vec<i32>) -> Self {
        GradedFreeModule { degrees }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// `dim_k F_d`.
    pub fn dim_in_degree(&self, n: usize, d: i64) -> u64 {
        self.degrees
            .iter()
            .map(|&a| count_monomials(n, d - a as i64))
            .sum()
    }
}

/// Element of a graded free module, as a coordinate vector of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement<F: Field> {
    pub coords: Vec<Polynomial<F>>,
}

impl<F: Field> ModuleElement<F> {
    pub fn new(coords: Vec<Polynomial<F>>) -> Self {
        ModuleElement { coords }
    }

    pub fn zero(ring: &PolyRing<F>, rank: usize) -> Self {
        ModuleElement {
            coords: vec![ring.zero(); rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Degree in the graded module, `None` if zero or inhomogeneous.
    pub fn degree(&self, module: &GradedFreeModule) -> Option<i32> {
        let mut deg = None;
        for (c, &shift) in self.coords.iter().zip(&module.degrees) {
            if c.is_zero() {
                continue;
            }
            if !c.is_homogeneous() {
                return None;
            }
            let d = c.degree().unwrap() as i32 + shift;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, module: &GradedFreeModule) -> bool {
        self.is_zero() || self.degree(module).is_some()
    }

    /// `sum_k coords[k] * gens[k]`.
    pub fn dot(&self, ring: &PolyRing<F>, gens: &[Polynomial<F>]) -> Polynomial<F> {
        assert_eq!(self.coords.len(), gens.len());
        let mut acc = ring.zero();
        for (c, g) in self.coords.iter().zip(gens) {
            if !c.is_zero() && !g.is_zero() {
                acc = ring.add(&acc, &ring.mul(c, g));
            }
        }
        acc
    }

    /// `sum_k coords[k] * columns[k]` for columns in another free module.
    pub fn apply(&self, ring: &PolyRing<F>, columns: &[ModuleElement<F>], target_rank: usize) -> ModuleElement<F> {
        assert_eq!(self.coords.len(), columns.len());
        let mut acc = ModuleElement::zero(ring, target_rank);
        for (c, col) in self.coords.iter().zip(columns) {
            if c.is_zero() {
                continue;
            }
            for (a, entry) in acc.coords.iter_mut().zip(&col.coords) {
                if !entry.is_zero() {
                    *a = ring.add(a, &ring.mul(c, entry));
                }
            }
        }
        acc
    }
}

/// Square alternating matrix of linear forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingMatrix<F: Field> {
    entries: Vec<Vec<Polynomial<F>>>,
}

impl<F: Field> AlternatingMatrix<F> {
    /// Rejects anything that is not alternating with homogeneous linear entries.
    pub fn new(ring: &PolyRing<F>, entries: Vec<Vec<Polynomial<F>>>) -> Result<Self> {
        let m = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::NotAlternating(format!("row {i} has length {}", row.len())));
            }
            if !row[i].is_zero() {
                return Err(Error::NotAlternating(format!("nonzero diagonal entry ({i},{i})")));
            }
            for (j, e) in row.iter().enumerate() {
                if ring.add(e, &entries[j][i]).is_zero() {
                    if !e.is_zero() && !(e.is_homogeneous() && e.degree() == Some(1)) {
                        return Err(Error::NotAlternating(format!(
                            "entry ({i},{j}) is not a linear form"
                        )));
                    }
                } else {
                    return Err(Error::NotAlternating(format!(
                        "entry ({j},{i}) is not the negative of ({i},{j})"
                    )));
                }
            }
        }
        Ok(AlternatingMatrix { entries })
    }

    /// From the strictly upper triangular entries listed row by row.
    pub fn from_upper(ring: &PolyRing<F>, m: usize, upper: Vec<Polynomial<F>>) -> Result<Self> {
        if upper.len() != m * (m.saturating_sub(1)) / 2 {
            return Err(Error::NotAlternating(format!(
                "expected {} upper entries for size {m}, got {}",
                m * (m.saturating_sub(1)) / 2,
                upper.len()
            )));
        }
        let mut entries = vec![vec![ring.zero(); m]; m];
        let mut it = upper.into_iter();
        for i in 0..m {
            for j in i + 1..m {
                let e = it.next().unwrap();
                entries[j][i] = ring.neg(&e);
                entries[i][j] = e;
            }
        }
        Self::new(ring, entries)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial<F> {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Polynomial<F>>] {
        &self.entries
    }

    /// `M * v` for a column vector `v`.
    pub fn apply(&self, ring: &PolyRing<F>, v: &[Polynomial<F>]) -> Vec<Polynomial<F>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)))
            })
            .collect()
    }

    /// Columns as module elements, i.e. the map `S(-1)^m -> S^m`.
    pub fn columns(&self) -> Vec<ModuleElement<F>> {
        let m = self.size();
        (0..m)
            .map(|j| ModuleElement::new((0..m).map(|i| self.entries[i][j].clone()).collect()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn ring(n: usize) -> PolyRing<Rationals> {
        PolyRing::new(Rationals, n).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(2);
        let f = r.add(&r.var(0), &r.var(1));
        let g = r.sub(&r.var(0), &r.var(1));
        let p = r.mul(&f, &g);
        assert_eq!(r.format(&p), "x0^2 - x1^2");
        assert!(p.is_homogeneous());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn binomial_q() {
        let r = ring(7);
        let i = 4usize;
        let q = r.sub(
            &r.mul(&r.var(i), &r.var(i)),
            &r.mul(&r.var(i - 1), &r.var(i - 3)),
        );
        assert_eq!(q.len(), 2);
        assert_eq!(r.format(&q), "-x1*x3 + x4^2");
        let f = r.random_form(2, &mut rand::thread_rng());
        assert!(r.add(&f, &r.neg(&f)).is_zero());
    }

    #[test]
    fn order_examples() {
        let x0x2 = Monomial::from_exponents(&[1, 0, 1]);
        let x1sq = Monomial::from_exponents(&[0, 2, 0]);
        assert_eq!(MonomialOrder::Grevlex.compare(&x1sq, &x0x2, 3), Ordering::Greater);
        assert_eq!(MonomialOrder::Grlex.compare(&x1sq, &x0x2, 3), Ordering::Less);
        let x0 = Monomial::var(0);
        let x1_5 = Monomial::from_exponents(&[0, 5]);
        assert_eq!(MonomialOrder::Lex.compare(&x0, &x1_5, 2), Ordering::Greater);
        for o in [MonomialOrder::Lex, MonomialOrder::Grlex, MonomialOrder::Grevlex] {
            assert_eq!(o.compare(&x1_5, &x1_5, 2), Ordering::Equal);
        }
        // elimination: anything with t beats anything without
        let e = MonomialOrder::Elimination { block: 1 };
        let t = Monomial::var(2);
        let big = Monomial::from_exponents(&[5, 5, 0]);
        assert_eq!(e.compare(&t, &big, 3), Ordering::Greater);
    }

    #[test]
    fn alternating_validation() {
        let r = ring(3);
        let a = r.var(0);
        let ok = AlternatingMatrix::new(&r, vec![vec![r.zero(), a.clone()], vec![r.neg(&a), r.zero()]]);
        assert!(ok.is_ok());
        let bad = AlternatingMatrix::new(&r, vec![vec![r.zero(), a.clone()], vec![a.clone(), r.zero()]]);
        assert!(matches!(bad, Err(Error::NotAlternating(_))));
        let diag = AlternatingMatrix::new(&r, vec![vec![a.clone()]]);
        assert!(diag.is_err());
        let quad = r.mul(&a, &a);
        let nonlinear = AlternatingMatrix::new(&r, vec![vec![r.zero(), quad.clone()], vec![r.neg(&quad), r.zero()]]);
        assert!(nonlinear.is_err());
    }

    #[test]
    fn counting() {
        assert_eq!(count_monomials(7, 4), 210);
        assert_eq!(monomials_of_degree(7, 4).len(), 210);
        assert_eq!(monomials_of_degree(3, 0), vec![Monomial::one()]);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, -1), 0);
        assert_eq!(binomial(2, 3), 0);
    }

    fn monomial(n: usize) -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..4, n).prop_map(|e| Monomial::from_exponents(&e))
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(a in monomial(4), b in monomial(4), c in monomial(4)) {
            for o in [MonomialOrder::Lex, MonomialOrder::Grlex, MonomialOrder::Grevlex,
                      MonomialOrder::Elimination { block: 1 }] {
                prop_assert_eq!(o.compare(&a, &b, 4), o.compare(&a.mul(&c), &b.mul(&c), 4));
                prop_assert_ne!(o.compare(&a.mul(&c), &Monomial::one(), 4), Ordering::Less);
                prop_assert_eq!(o.compare(&a, &b, 4), o.compare(&b, &a, 4).reverse());
                if o.compare(&a, &b, 4) == Ordering::Equal { prop_assert_eq!(a, b); }
            }
        }

        #[test]
        fn orders_are_transitive(a in monomial(3), b in monomial(3), c in monomial(3)) {
            for o in [MonomialOrder::Lex, MonomialOrder::Grlex, MonomialOrder::Grevlex] {
                if o.compare(&a, &b, 3) != Ordering::Less && o.compare(&b, &c, 3) != Ordering::Less {
                    prop_assert_ne!(o.compare(&a, &c, 3), Ordering::Less);
                }
            }
        }

        #[test]
        fn homogeneous_products_add_degrees(s1 in 0u64..1000, s2 in 0u64..1000, d1 in 0u32..4, d2 in 0u32..4) {
            use rand::SeedableRng;
            let r = PolyRing::new(PrimeField::default(), 4).unwrap();
            let f = r.random_form(d1, &mut rand_chacha::ChaCha8Rng::seed_from_u64(s1));
            let g = r.random_form(d2, &mut rand_chacha::ChaCha8Rng::seed_from_u64(s2));
            let p = r.mul(&f, &g);
            prop_assert!(r.is_canonical(&p));
            prop_assert!(p.is_homogeneous());
            if !p.is_zero() { prop_assert_eq!(p.degree(), Some(d1 + d2)); }
            prop_assert_eq!(r.mul(&f, &g), r.mul(&g, &f));
        }
    }
}
