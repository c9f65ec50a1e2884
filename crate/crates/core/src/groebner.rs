//! Buchberger's algorithm for ideals and submodules of free modules.
//!
//! Vectors are lists of terms `(monomial, component, coefficient)` sorted
//! strictly descending in a [`TermOrder`]. Pairs are processed by lowest sugar
//! degree, with the Gebauer–Möller installation of the product and chain
//! criteria. The result is always the reduced, monic basis.

use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{self, MonomialTable};
use crate::hilbert::{self, KPolynomial};
use crate::ring::{GradedFreeModule, ModuleElement, Monomial, MonomialOrder, PolyRing, Polynomial};

pub type ModVec<E> = Vec<(Monomial, u32, E)>;

/// How monomial orders extend to free modules. Lower component indices count
/// as larger.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ModuleOrder {
    /// Compare monomials first, then components.
    #[default]
    TermOverPosition,
    /// Compare components first, then monomials.
    PositionOverTerm,
    /// `m e_i > n e_j` iff `m·lead_i > n·lead_j`, ties broken by component.
    Schreyer(Vec<Monomial>),
}

/// A term order on `⊕ S e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    pub monomial: MonomialOrder,
    pub nvars: usize,
    pub module: ModuleOrder,
}

impl TermOrder {
    pub fn new(monomial: MonomialOrder, nvars: usize, module: ModuleOrder) -> Self {
        TermOrder { monomial, nvars, module }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, ca: u32, b: &Monomial, cb: u32) -> Ordering {
        let mono = |x: &Monomial, y: &Monomial| self.monomial.compare(x, y, self.nvars);
        match &self.module {
            ModuleOrder::TermOverPosition => mono(a, b).then(cb.cmp(&ca)),
            ModuleOrder::PositionOverTerm => cb.cmp(&ca).then_with(|| mono(a, b)),
            ModuleOrder::Schreyer(leads) => {
                let la = a.mul(&leads[ca as usize]);
                let lb = b.mul(&leads[cb as usize]);
                mono(&la, &lb).then(cb.cmp(&ca))
            }
        }
    }

    fn sort(&self, v: &mut ModVec<impl Clone>) {
        v.sort_by(|x, y| self.cmp(&y.0, y.1, &x.0, x.1));
    }
}

/// Converts a module element to a sorted term vector.
pub fn to_modvec<F: Field>(order: &TermOrder, v: &ModuleElement<F>) -> ModVec<F::Elem> {
    let mut out: ModVec<F::Elem> = Vec::new();
    for (comp, p) in v.coords.iter().enumerate() {
        for (m, c) in p.terms() {
            out.push((*m, comp as u32, c.clone()));
        }
    }
    order.sort(&mut out);
    out
}

pub fn from_modvec<F: Field>(ring: &PolyRing<F>, rank: usize, v: &ModVec<F::Elem>) -> ModuleElement<F> {
    let mut coords: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); rank];
    for (m, comp, c) in v {
        coords[*comp as usize].push((*m, c.clone()));
    }
    ModuleElement::new(coords.into_iter().map(|t| ring.from_terms(t)).collect())
}

fn poly_to_modvec<F: Field>(f: &Polynomial<F>) -> ModVec<F::Elem> {
    f.terms().iter().map(|(m, c)| (*m, 0, c.clone())).collect()
}

/// `a - c * q * b`, where `b`'s terms keep their relative order after the shift.
fn sub_shifted<F: Field>(
    order: &TermOrder,
    k: &F,
    a: &[(Monomial, u32, F::Elem)],
    c: &F::Elem,
    q: &Monomial,
    b: &[(Monomial, u32, F::Elem)],
) -> ModVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bj: Option<Monomial> = b.first().map(|t| t.0.mul(q));
    while i < a.len() {
        let Some(mb) = bj else { break };
        let (ma, ca, xa) = &a[i];
        let (_, cb, xb) = &b[j];
        match order.cmp(ma, *ca, &mb, *cb) {
            Ordering::Greater => {
                out.push((*ma, *ca, xa.clone()));
                i += 1;
            }
            Ordering::Less => {
                out.push((mb, *cb, k.neg(&k.mul(c, xb))));
                j += 1;
                bj = b.get(j).map(|t| t.0.mul(q));
            }
            Ordering::Equal => {
                let v = k.sub_mul(xa, c, xb);
                if !k.is_zero(&v) {
                    out.push((*ma, *ca, v));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(|t| t.0.mul(q));
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for (m, comp, x) in &b[j..] {
        out.push((m.mul(q), *comp, k.neg(&k.mul(c, x))));
    }
    out
}

#[derive(Debug, Clone)]
struct Element<F: Field> {
    v: ModVec<F::Elem>,
    lead: Monomial,
    comp: u32,
    mask: u32,
    sugar: i32,
    active: bool,
}

impl<F: Field> Element<F> {
    fn new(v: ModVec<F::Elem>, sugar: i32) -> Self {
        let (lead, comp) = (v[0].0, v[0].1);
        Element {
            lead,
            comp,
            mask: lead.support(),
            sugar,
            active: true,
            v,
        }
    }
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: i32,
}

/// Records how basis elements are combined during reduction.
trait Recorder<F: Field> {
    /// Called when `coef * q * basis[j]` is subtracted.
    fn step(&mut self, j: usize, coef: &F::Elem, q: &Monomial);
}

struct NoRecord;
impl<F: Field> Recorder<F> for NoRecord {
    fn step(&mut self, _: usize, _: &F::Elem, _: &Monomial) {}
}

struct Engine<'a, F: Field> {
    ring: &'a PolyRing<F>,
    order: &'a TermOrder,
    shifts: &'a [i32],
    ideal_mode: bool,
    basis: Vec<Element<F>>,
    /// Combination of input generators for each basis element.
    track: Option<Vec<Vec<Polynomial<F>>>>,
    ngens: usize,
}

impl<'a, F: Field> Engine<'a, F> {
    fn sugar_of(&self, v: &ModVec<F::Elem>) -> i32 {
        v.iter()
            .map(|(m, c, _)| m.degree() as i32 + self.shifts.get(*c as usize).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    fn find_reducer(&self, m: &Monomial, comp: u32, active_only: bool, skip: Option<usize>) -> Option<usize> {
        let mask = m.support();
        self.basis.iter().enumerate().position(|(idx, g)| {
            (g.active || !active_only)
                && Some(idx) != skip
                && g.comp == comp
                && g.mask & !mask == 0
                && g.lead.divides(m)
        })
    }

    /// Full reduction of `v` by the active basis (skipping `skip`).
    fn reduce<R: Recorder<F>>(&self, mut v: ModVec<F::Elem>, skip: Option<usize>, rec: &mut R) -> ModVec<F::Elem> {
        let k = self.ring.field();
        let mut pos = 0;
        while pos < v.len() {
            let (m, comp, c) = (v[pos].0, v[pos].1, v[pos].2.clone());
            match self.find_reducer(&m, comp, true, skip) {
                Some(j) => {
                    let g = &self.basis[j];
                    let q = m.div(&g.lead).unwrap();
                    rec.step(j, &c, &q);
                    let rest = sub_shifted(self.order, k, &v[pos..], &c, &q, &g.v);
                    v.truncate(pos);
                    v.extend(rest);
                }
                None => pos += 1,
            }
        }
        v
    }

    fn make_monic(&self, v: &mut ModVec<F::Elem>) -> F::Elem {
        let k = self.ring.field();
        let inv = k.inv(&v[0].2).expect("nonzero lead");
        for t in v.iter_mut() {
            t.2 = k.mul(&t.2, &inv);
        }
        inv
    }

    fn track_combine(&self, base: Vec<Polynomial<F>>, steps: &[(usize, F::Elem, Monomial)], scale: &F::Elem) -> Vec<Polynomial<F>> {
        let r = self.ring;
        let track = self.track.as_ref().unwrap();
        let mut t = base;
        for (j, c, q) in steps {
            for (a, b) in t.iter_mut().zip(&track[*j]) {
                if !b.is_zero() {
                    *a = r.sub(a, &r.mul_term(b, q, c));
                }
            }
        }
        t.iter().map(|p| r.scale(p, scale)).collect()
    }

    /// Inserts a nonzero, reduced vector and updates the pair set.
    fn install(&mut self, mut v: ModVec<F::Elem>, sugar: i32, t: Option<Vec<Polynomial<F>>>, steps: Vec<(usize, F::Elem, Monomial)>, pairs: &mut Vec<Pair>) {
        let inv = self.make_monic(&mut v);
        if let Some(base) = t {
            let combined = self.track_combine(base, &steps, &inv);
            self.track.as_mut().unwrap().push(combined);
        }
        let h = Element::<F>::new(v, sugar);
        let hidx = self.basis.len();

        // Gebauer–Möller update
        let mut cands: Vec<Pair> = Vec::new();
        for (g_idx, g) in self.basis.iter().enumerate() {
            if !g.active || g.comp != h.comp {
                continue;
            }
            let lcm = h.lead.lcm(&g.lead);
            let sugar = (h.sugar + lcm.degree() as i32 - h.lead.degree() as i32)
                .max(g.sugar + lcm.degree() as i32 - g.lead.degree() as i32);
            cands.push(Pair { i: g_idx, j: hidx, lcm, sugar });
        }
        let coprime = |p: &Pair| self.ideal_mode && self.basis[p.i].lead.is_coprime(&h.lead);
        let mut kept: Vec<Pair> = Vec::new();
        for idx in 0..cands.len() {
            let p = &cands[idx];
            let later = cands[idx + 1..].iter().any(|q| q.lcm.divides(&p.lcm));
            let earlier = kept.iter().any(|q| q.lcm.divides(&p.lcm));
            if coprime(p) || !(later || earlier) {
                kept.push(p.clone());
            }
        }
        kept.retain(|p| !coprime(p));
        pairs.retain(|p| {
            let gi = &self.basis[p.i];
            if gi.comp != h.comp {
                return true;
            }
            let gj = &self.basis[p.j];
            !(h.lead.divides(&p.lcm) && gi.lead.lcm(&h.lead) != p.lcm && gj.lead.lcm(&h.lead) != p.lcm)
        });
        pairs.extend(kept);
        for g in self.basis.iter_mut() {
            if g.active && g.comp == h.comp && h.lead.divides(&g.lead) {
                g.active = false;
            }
        }
        self.basis.push(h);
    }

    fn spoly(&self, p: &Pair) -> ModVec<F::Elem> {
        let k = self.ring.field();
        let gi = &self.basis[p.i];
        let gj = &self.basis[p.j];
        let qi = p.lcm.div(&gi.lead).unwrap();
        let qj = p.lcm.div(&gj.lead).unwrap();
        let a: ModVec<F::Elem> = gi.v.iter().map(|(m, c, x)| (m.mul(&qi), *c, x.clone())).collect();
        sub_shifted(self.order, k, &a, &k.one(), &qj, &gj.v)
    }

    fn run(&mut self, gens: Vec<ModVec<F::Elem>>) {
        let r = self.ring;
        let mut pairs: Vec<Pair> = Vec::new();
        // insert inputs in ascending order of sugar and lead
        let mut order: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].is_empty()).collect();
        order.sort_by(|&a, &b| {
            self.sugar_of(&gens[a])
                .cmp(&self.sugar_of(&gens[b]))
                .then_with(|| self.order.cmp(&gens[a][0].0, gens[a][0].1, &gens[b][0].0, gens[b][0].1))
                .then(a.cmp(&b))
        });
        for idx in order {
            let sugar = self.sugar_of(&gens[idx]);
            let mut steps = StepLog(Vec::new());
            let v = self.reduce(gens[idx].clone(), None, &mut steps);
            if v.is_empty() {
                continue;
            }
            let base = self.track.as_ref().map(|_| {
                let mut t = vec![r.zero(); self.ngens];
                t[idx] = r.one();
                t
            });
            self.install(v, sugar, base, steps.0, &mut pairs);
        }
        while !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    let (p, q) = (&pairs[a], &pairs[b]);
                    p.sugar
                        .cmp(&q.sugar)
                        .then_with(|| p.lcm.degree().cmp(&q.lcm.degree()))
                        .then((p.j, p.i).cmp(&(q.j, q.i)))
                })
                .unwrap();
            let p = pairs.swap_remove(best);
            let s = self.spoly(&p);
            let mut steps = StepLog(Vec::new());
            let v = self.reduce(s, None, &mut steps);
            if v.is_empty() {
                continue;
            }
            let base = self.track.as_ref().map(|track| {
                let gi = &self.basis[p.i];
                let gj = &self.basis[p.j];
                let qi = p.lcm.div(&gi.lead).unwrap();
                let qj = p.lcm.div(&gj.lead).unwrap();
                let one = r.field().one();
                track[p.i]
                    .iter()
                    .zip(&track[p.j])
                    .map(|(a, b)| r.sub(&r.mul_term(a, &qi, &one), &r.mul_term(b, &qj, &one)))
                    .collect()
            });
            self.install(v, p.sugar, base, steps.0, &mut pairs);
        }
    }

    /// Interreduces the active elements and returns them sorted ascending.
    fn finish(mut self) -> (Vec<ModVec<F::Elem>>, Option<Vec<Vec<Polynomial<F>>>>) {
        let r = self.ring;
        let active: Vec<usize> = (0..self.basis.len()).filter(|&i| self.basis[i].active).collect();
        let mut out: Vec<(ModVec<F::Elem>, Option<Vec<Polynomial<F>>>)> = Vec::new();
        for &i in &active {
            let mut steps = StepLog(Vec::new());
            let v = self.reduce(self.basis[i].v.clone(), Some(i), &mut steps);
            let t = self.track.as_ref().map(|track| self.track_combine(track[i].clone(), &steps.0, &r.field().one()));
            out.push((v, t));
        }
        // replace in place so later reductions see reduced tails (result is unique anyway)
        for (&i, (v, _)) in active.iter().zip(&out) {
            self.basis[i].v = v.clone();
        }
        let order = self.order;
        out.sort_by(|a, b| order.cmp(&a.0[0].0, a.0[0].1, &b.0[0].0, b.0[0].1));
        let tracked = self.track.is_some();
        let (vs, ts): (Vec<_>, Vec<_>) = out.into_iter().unzip();
        (vs, if tracked { Some(ts.into_iter().map(Option::unwrap).collect()) } else { None })
    }
}

#[derive(Default)]
struct StepLog<E>(Vec<(usize, E, Monomial)>);

impl<F: Field> Recorder<F> for StepLog<F::Elem> {
    fn step(&mut self, j: usize, coef: &F::Elem, q: &Monomial) {
        self.0.push((j, coef.clone(), *q));
    }
}

/// A reduced Gröbner basis.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<F: Field> {
    ring: PolyRing<F>,
    order: TermOrder,
    rank: usize,
    shifts: Vec<i32>,
    elems: Vec<ModVec<F::Elem>>,
}

impl<F: Field> GroebnerBasis<F> {
    /// Basis of the ideal generated by `gens`, in the ring's monomial order.
    pub fn ideal(ring: &PolyRing<F>, gens: &[Polynomial<F>]) -> Self {
        let order = TermOrder::new(ring.order(), ring.nvars(), ModuleOrder::TermOverPosition);
        let vs = gens.iter().map(poly_to_modvec).collect();
        Self::compute(ring, order, 1, vec![0], vs, false).0
    }

    /// Basis of a submodule of `⊕ S(-shifts[k])`.
    pub fn module(ring: &PolyRing<F>, module: &GradedFreeModule, gens: &[ModuleElement<F>], module_order: ModuleOrder) -> Self {
        let order = TermOrder::new(ring.order(), ring.nvars(), module_order);
        let vs = gens.iter().map(|g| to_modvec(&order, g)).collect();
        Self::compute(ring, order, module.rank(), module.degrees.clone(), vs, false).0
    }

    /// Like [`GroebnerBasis::module`], also returning for each basis element
    /// its coefficients on the input generators.
    pub fn module_tracked(
        ring: &PolyRing<F>,
        module: &GradedFreeModule,
        gens: &[ModuleElement<F>],
        module_order: ModuleOrder,
    ) -> (Self, Vec<Vec<Polynomial<F>>>) {
        let order = TermOrder::new(ring.order(), ring.nvars(), module_order);
        let vs = gens.iter().map(|g| to_modvec(&order, g)).collect();
        let (gb, t) = Self::compute(ring, order, module.rank(), module.degrees.clone(), vs, true);
        (gb, t.unwrap())
    }

    fn compute(
        ring: &PolyRing<F>,
        order: TermOrder,
        rank: usize,
        shifts: Vec<i32>,
        gens: Vec<ModVec<F::Elem>>,
        track: bool,
    ) -> (Self, Option<Vec<Vec<Polynomial<F>>>>) {
        let ngens = gens.len();
        let mut engine = Engine {
            ring,
            order: &order,
            shifts: &shifts,
            ideal_mode: rank == 1,
            basis: Vec::new(),
            track: if track { Some(Vec::new()) } else { None },
            ngens,
        };
        engine.run(gens);
        let (elems, t) = engine.finish();
        (
            GroebnerBasis {
                ring: ring.clone(),
                order: order.clone(),
                rank,
                shifts,
                elems,
            },
            t,
        )
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.rank == 1 && self.elems.iter().any(|v| v[0].0.is_one())
    }

    pub fn elements(&self) -> Vec<ModuleElement<F>> {
        self.elems.iter().map(|v| from_modvec(&self.ring, self.rank, v)).collect()
    }

    /// Basis elements as polynomials (ideal case).
    pub fn polynomials(&self) -> Vec<Polynomial<F>> {
        assert_eq!(self.rank, 1);
        self.elems
            .iter()
            .map(|v| Polynomial::from_sorted_terms(v.iter().map(|(m, _, c)| (*m, c.clone())).collect()))
            .collect()
    }

    /// Leading terms as `(monomial, component)`.
    pub fn leading_terms(&self) -> Vec<(Monomial, u32)> {
        self.elems.iter().map(|v| (v[0].0, v[0].1)).collect()
    }

    /// Leading monomials (ideal case).
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elems.iter().map(|v| v[0].0).collect()
    }

    fn engine(&self) -> Engine<'_, F> {
        Engine {
            ring: &self.ring,
            order: &self.order,
            shifts: &self.shifts,
            ideal_mode: self.rank == 1,
            basis: self.elems.iter().map(|v| Element::new(v.clone(), 0)).collect(),
            track: None,
            ngens: 0,
        }
    }

    pub fn normal_form_vec(&self, v: ModVec<F::Elem>) -> ModVec<F::Elem> {
        self.engine().reduce(v, None, &mut NoRecord)
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let order = TermOrder::new(self.ring.order(), self.ring.nvars(), self.order.module.clone());
        let mut v = poly_to_modvec(f);
        order.sort(&mut v);
        let r = self.normal_form_vec(v);
        Polynomial::from_sorted_terms(r.into_iter().map(|(m, _, c)| (m, c)).collect())
    }

    pub fn normal_form_element(&self, v: &ModuleElement<F>) -> ModuleElement<F> {
        let r = self.normal_form_vec(to_modvec(&self.order, v));
        from_modvec(&self.ring, self.rank, &r)
    }

    /// Remainder and quotients `q` with `v = sum_l q_l * basis_l + remainder`.
    pub fn divide(&self, v: &ModuleElement<F>) -> (ModuleElement<F>, Vec<Polynomial<F>>) {
        let mut log = StepLog(Vec::new());
        let rem = self.engine().reduce(to_modvec(&self.order, v), None, &mut log);
        let mut qs: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); self.elems.len()];
        for (j, c, q) in log.0 {
            qs[j].push((q, c));
        }
        let qs = qs.into_iter().map(|t| self.ring.from_terms(t)).collect();
        (from_modvec(&self.ring, self.rank, &rem), qs)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_element(&self, v: &ModuleElement<F>) -> bool {
        self.normal_form_element(v).is_zero()
    }

    /// Checks Buchberger's criterion: every S-vector reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let e = self.engine();
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                if e.basis[i].comp != e.basis[j].comp {
                    continue;
                }
                let p = Pair {
                    i,
                    j,
                    lcm: e.basis[i].lead.lcm(&e.basis[j].lead),
                    sugar: 0,
                };
                if !e.reduce(e.spoly(&p), None, &mut NoRecord).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Checks the reduced-basis conditions.
    pub fn is_reduced(&self) -> bool {
        let k = self.ring.field();
        let e = self.engine();
        self.elems.iter().enumerate().all(|(i, v)| {
            k.is_one(&v[0].2)
                && v.iter()
                    .all(|(m, c, _)| e.find_reducer(m, *c, false, Some(i)).is_none())
        })
    }
}

/// Generators of the first syzygy module of `gens` (elements of `module`),
/// as elements of `⊕ S(-deg gens[k])`. Homogeneous input yields a minimal
/// generating set.
pub fn syzygies<F: Field>(ring: &PolyRing<F>, module: &GradedFreeModule, gens: &[ModuleElement<F>]) -> (GradedFreeModule, Vec<ModuleElement<F>>) {
    let m = gens.len();
    let source = GradedFreeModule::new(gens.iter().map(|g| g.degree(module).unwrap_or(0)).collect());
    let (gb, t) = GroebnerBasis::module_tracked(ring, module, gens, ModuleOrder::TermOverPosition);
    let basis = gb.elements();
    let nb = basis.len();
    let one = ring.field().one();
    let mut syz: Vec<ModuleElement<F>> = Vec::new();
    // relations among basis elements, transported to the generators
    let push_relation = |coeffs: Vec<Polynomial<F>>, out: &mut Vec<ModuleElement<F>>| {
        let mut v = vec![ring.zero(); m];
        for (c, row) in coeffs.iter().zip(&t) {
            if c.is_zero() {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a = ring.add(a, &ring.mul(c, b));
            }
        }
        out.push(ModuleElement::new(v));
    };
    let leads = gb.leading_terms();
    for i in 0..nb {
        for j in i + 1..nb {
            if leads[i].1 != leads[j].1 {
                continue;
            }
            let lcm = leads[i].0.lcm(&leads[j].0);
            let qi = lcm.div(&leads[i].0).unwrap();
            let qj = lcm.div(&leads[j].0).unwrap();
            let s = ModuleElement::new(
                basis[i]
                    .coords
                    .iter()
                    .zip(&basis[j].coords)
                    .map(|(a, b)| ring.sub(&ring.mul_term(a, &qi, &one), &ring.mul_term(b, &qj, &one)))
                    .collect(),
            );
            let (rem, mut q) = gb.divide(&s);
            debug_assert!(rem.is_zero());
            for qq in q.iter_mut() {
                *qq = ring.neg(qq);
            }
            q[i] = ring.add(&q[i], &ring.term(qi, one.clone()));
            q[j] = ring.sub(&q[j], &ring.term(qj, one.clone()));
            push_relation(q, &mut syz);
        }
    }
    for (k, g) in gens.iter().enumerate() {
        let (rem, q) = gb.divide(g);
        debug_assert!(rem.is_zero());
        let mut rel = Vec::new();
        push_relation(q, &mut rel);
        let mut v = rel.pop().unwrap();
        v.coords = v.coords.iter().map(|p| ring.neg(p)).collect();
        v.coords[k] = ring.add(&v.coords[k], &ring.one());
        syz.push(v);
    }
    syz.retain(|s| !s.is_zero());
    let homogeneous = gens.iter().all(|g| g.is_homogeneous(module)) && syz.iter().all(|s| s.is_homogeneous(&source));
    if homogeneous {
        let mut table = MonomialTable::new(ring.nvars());
        syz = graded::minimal_generators_graded(ring, &mut table, &source, &syz);
    }
    (source, syz)
}

/// Generators of `A ∩ B` by elimination of an auxiliary variable.
pub fn intersect<F: Field>(ring: &PolyRing<F>, a: &[Polynomial<F>], b: &[Polynomial<F>]) -> Result<Vec<Polynomial<F>>> {
    let mut aux = String::from("t");
    while ring.names().contains(&aux) {
        aux.push('_');
    }
    let ext = ring.extended(&[&aux], MonomialOrder::Elimination { block: 1 })?;
    let t = ext.var(ring.nvars());
    let one_minus_t = ext.sub(&ext.one(), &t);
    let mut gens = Vec::new();
    for f in a {
        gens.push(ext.mul(&t, &ext.import(f)));
    }
    for f in b {
        gens.push(ext.mul(&one_minus_t, &ext.import(f)));
    }
    let gb = GroebnerBasis::ideal(&ext, &gens);
    let tvar = ring.nvars();
    Ok(gb
        .polynomials()
        .into_iter()
        .filter(|p| p.terms().iter().all(|(m, _)| m.exponent(tvar) == 0))
        .map(|p| ring.import(&p))
        .collect())
}

/// Exact quotient `f / g`; `None` if `g` does not divide `f`.
pub fn divide_exact<F: Field>(ring: &PolyRing<F>, f: &Polynomial<F>, g: &Polynomial<F>) -> Option<Polynomial<F>> {
    let k = ring.field();
    let (lg, cg) = (g.leading_monomial()?, g.leading_coefficient()?);
    let cinv = k.inv(cg)?;
    let mut rest = f.clone();
    let mut quot = Vec::new();
    while let (Some(m), Some(c)) = (rest.leading_monomial().copied(), rest.leading_coefficient().cloned()) {
        let q = m.div(lg)?;
        let coef = k.mul(&c, &cinv);
        rest = ring.sub(&rest, &ring.mul_term(g, &q, &coef));
        quot.push((q, coef));
    }
    Some(ring.from_terms(quot))
}

/// `(A : f)`.
pub fn colon_poly<F: Field>(ring: &PolyRing<F>, a: &[Polynomial<F>], f: &Polynomial<F>) -> Result<Vec<Polynomial<F>>> {
    if f.is_zero() {
        return Ok(vec![ring.one()]);
    }
    let inter = intersect(ring, a, std::slice::from_ref(f))?;
    Ok(inter
        .iter()
        .map(|p| divide_exact(ring, p, f).expect("intersection with (f) is divisible by f"))
        .collect())
}

/// `(A : B)` as the intersection of the `(A : b)`.
pub fn colon<F: Field>(ring: &PolyRing<F>, a: &[Polynomial<F>], b: &[Polynomial<F>]) -> Result<Vec<Polynomial<F>>> {
    let mut acc: Option<Vec<Polynomial<F>>> = None;
    for f in b {
        let c = colon_poly(ring, a, f)?;
        acc = Some(match acc {
            None => c,
            Some(prev) => intersect(ring, &prev, &c)?,
        });
    }
    Ok(acc.unwrap_or_else(|| vec![ring.one()]))
}

/// Krull dimension of `S/M` for the monomial ideal generated by `leads`,
/// via maximal sets of independent variables.
pub fn monomial_dimension(n: usize, leads: &[Monomial]) -> Result<usize> {
    if leads.iter().any(|m| m.is_one()) {
        return Err(Error::UnitIdeal);
    }
    let supports: Vec<u32> = leads.iter().map(|m| m.support()).collect();
    let mut best = 0;
    for set in 0u32..(1u32 << n) {
        let size = set.count_ones() as usize;
        if size <= best {
            continue;
        }
        if supports.iter().all(|s| s & !set != 0) {
            best = size;
        }
    }
    Ok(best)
}

/// Ideal with lazily computed, cached invariants.
#[derive(Debug)]
pub struct IdealHandle<F: Field> {
    ring: PolyRing<F>,
    gens: Vec<Polynomial<F>>,
    gb: OnceLock<GroebnerBasis<F>>,
    kpoly: OnceLock<KPolynomial>,
    dims: OnceLock<Result<(usize, usize)>>,
}

impl<F: Field> Clone for IdealHandle<F> {
    fn clone(&self) -> Self {
        IdealHandle {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            gb: self.gb.clone(),
            kpoly: self.kpoly.clone(),
            dims: self.dims.clone(),
        }
    }
}

impl<F: Field> IdealHandle<F> {
    pub fn new(ring: &PolyRing<F>, gens: Vec<Polynomial<F>>) -> Self {
        IdealHandle {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            gb: OnceLock::new(),
            kpoly: OnceLock::new(),
            dims: OnceLock::new(),
        }
    }

    pub fn zero(ring: &PolyRing<F>) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    /// Replaces the generators and drops every cached invariant.
    pub fn set_generators(&mut self, gens: Vec<Polynomial<F>>) {
        *self = Self::new(&self.ring, gens);
    }

    pub fn add_generators(&mut self, more: Vec<Polynomial<F>>) {
        let mut gens = std::mem::take(&mut self.gens);
        gens.extend(more);
        self.set_generators(gens);
    }

    pub fn has_cached_basis(&self) -> bool {
        self.gb.get().is_some()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn groebner(&self) -> &GroebnerBasis<F> {
        self.gb.get_or_init(|| GroebnerBasis::ideal(&self.ring, &self.gens))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.groebner().contains(f)
    }

    pub fn contains_ideal(&self, other: &IdealHandle<F>) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &IdealHandle<F>) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().is_unit()
    }

    /// Numerator of the Hilbert series of `S/I` over `(1-t)^n`.
    pub fn k_polynomial(&self) -> &KPolynomial {
        self.kpoly
            .get_or_init(|| hilbert::k_polynomial(&self.groebner().leading_monomials()))
    }

    /// `(dim S/I, height I)`.
    pub fn dimension(&self) -> Result<(usize, usize)> {
        self.dims
            .get_or_init(|| {
                let d = monomial_dimension(self.ring.nvars(), &self.groebner().leading_monomials())?;
                Ok((d, self.ring.nvars() - d))
            })
            .clone()
    }

    pub fn height(&self) -> Result<usize> {
        self.dimension().map(|d| d.1)
    }

    pub fn is_artinian(&self) -> bool {
        matches!(self.dimension(), Ok((0, _)))
    }

    /// Minimal homogeneous generators, degree by degree.
    pub fn minimal_generators(&self) -> Result<Vec<Polynomial<F>>> {
        if !self.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        let mut table = MonomialTable::new(self.ring.nvars());
        let module = GradedFreeModule::new(vec![0]);
        let elems = graded::as_elements(&self.gens);
        Ok(graded::minimal_generators_graded(&self.ring, &mut table, &module, &elems)
            .into_iter()
            .map(|mut e| e.coords.pop().unwrap())
            .collect())
    }

    /// Ideal generated by the minimal generators.
    pub fn minimalized(&self) -> Result<IdealHandle<F>> {
        Ok(IdealHandle::new(&self.ring, self.minimal_generators()?))
    }

    pub fn colon_poly(&self, f: &Polynomial<F>) -> Result<IdealHandle<F>> {
        Ok(IdealHandle::new(&self.ring, colon_poly(&self.ring, &self.gens, f)?))
    }

    pub fn colon(&self, other: &IdealHandle<F>) -> Result<IdealHandle<F>> {
        Ok(IdealHandle::new(&self.ring, colon(&self.ring, &self.gens, &other.gens)?))
    }

    pub fn sum(&self, other: &IdealHandle<F>) -> IdealHandle<F> {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        IdealHandle::new(&self.ring, g)
    }

    pub fn intersect(&self, other: &IdealHandle<F>) -> Result<IdealHandle<F>> {
        Ok(IdealHandle::new(&self.ring, intersect(&self.ring, &self.gens, &other.gens)?))
    }

    /// Same ideal in a ring with another monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> IdealHandle<F> {
        let r = self.ring.with_order(order);
        let gens = self.gens.iter().map(|g| r.import(g)).collect();
        IdealHandle::new(&r, gens)
    }

    /// Image under the variable permutation `x_i -> x_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize]) -> IdealHandle<F> {
        let gens = self.gens.iter().map(|g| self.ring.rename_vars(g, perm)).collect();
        IdealHandle::new(&self.ring, gens)
    }

    /// Generators of the degree-`d` part of `I` (a vector-space basis).
    pub fn degree_part(&self, d: u32) -> Vec<Polynomial<F>> {
        let gb = self.groebner();
        let mut table = MonomialTable::new(self.ring.nvars());
        let mut span = crate::linalg::Echelon::new(self.ring.field());
        let piece = graded::DegreePiece::new(&mut table, &GradedFreeModule::new(vec![0]), d as i64);
        let mut out = Vec::new();
        for g in gb.polynomials() {
            let Some(dg) = g.degree() else { continue };
            if dg > d || !g.is_homogeneous() {
                continue;
            }
            let mons = table.basis((d - dg) as i64).to_vec();
            for m in mons {
                let p = self.ring.mul_term(&g, &m, &self.ring.field().one());
                let v = piece.encode(&mut table, self.ring.field(), &ModuleElement::new(vec![p.clone()]));
                if span.insert(v) {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Whether `seq` is a regular sequence on `S/J`, tested by `(J_i : f_i) = J_i`.
pub fn is_regular_sequence<F: Field>(seq: &[Polynomial<F>], modulo: &IdealHandle<F>) -> Result<bool> {
    let ring = modulo.ring();
    let mut all = modulo.generators().to_vec();
    all.extend(seq.iter().cloned());
    if IdealHandle::new(ring, all).is_unit() {
        return Ok(false);
    }
    let mut current = modulo.clone();
    for f in seq {
        if current.contains(f) {
            return Ok(false);
        }
        let col = current.colon_poly(f)?;
        if !current.contains_ideal(&col) {
            return Ok(false);
        }
        current.add_generators(vec![f.clone()]);
    }
    Ok(true)
}
