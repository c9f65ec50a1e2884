//! Degreewise linear algebra on graded free modules.
//!
//! The degree-`d` piece of `⊕ S(-a_k)` has basis `m·e_k` with `m` running over
//! the monomials of degree `d - a_k`. Coordinates are laid out summand by
//! summand, monomials in the order of [`monomials_of_degree`].

use std::collections::HashMap;

use crate::field::Field;
use crate::linalg::{self, Echelon, SparseVec};
use crate::ring::{monomials_of_degree, GradedFreeModule, ModuleElement, Monomial, PolyRing, Polynomial};

/// Monomial bases of `S_d`, with reverse lookup.
#[derive(Debug, Clone)]
pub struct MonomialTable {
    n: usize,
    basis: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, u32>>,
}

impl MonomialTable {
    pub fn new(n: usize) -> Self {
        MonomialTable {
            n,
            basis: Vec::new(),
            index: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    fn ensure(&mut self, d: usize) {
        while self.basis.len() <= d {
            let deg = self.basis.len() as u32;
            let b = monomials_of_degree(self.n, deg);
            let idx = b.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
            self.basis.push(b);
            self.index.push(idx);
        }
    }

    /// Monomials of degree `d` (empty for negative `d`).
    pub fn basis(&mut self, d: i64) -> &[Monomial] {
        if d < 0 {
            return &[];
        }
        self.ensure(d as usize);
        &self.basis[d as usize]
    }

    pub fn dim(&mut self, d: i64) -> usize {
        self.basis(d).len()
    }

    pub fn index_of(&mut self, m: &Monomial) -> u32 {
        let d = m.degree() as usize;
        self.ensure(d);
        self.index[d][m]
    }
}

/// Coordinates of the degree-`d` piece of a graded free module.
#[derive(Debug, Clone)]
pub struct DegreePiece {
    pub degree: i64,
    offsets: Vec<u32>,
    pub dim: usize,
}

impl DegreePiece {
    pub fn new(table: &mut MonomialTable, module: &GradedFreeModule, d: i64) -> Self {
        let mut offsets = Vec::with_capacity(module.rank());
        let mut acc = 0u32;
        for &a in &module.degrees {
            offsets.push(acc);
            acc += table.dim(d - a as i64) as u32;
        }
        DegreePiece {
            degree: d,
            offsets,
            dim: acc as usize,
        }
    }

    pub fn coordinate(&self, table: &mut MonomialTable, comp: usize, m: &Monomial) -> u32 {
        self.offsets[comp] + table.index_of(m)
    }

    /// Coordinate vector of a homogeneous element of this degree.
    pub fn encode<F: Field>(&self, table: &mut MonomialTable, k: &F, v: &ModuleElement<F>) -> SparseVec<F::Elem> {
        let mut out = Vec::new();
        for (comp, p) in v.coords.iter().enumerate() {
            for (m, c) in p.terms() {
                out.push((self.coordinate(table, comp, m), c.clone()));
            }
        }
        linalg::normalize(k, out)
    }

    pub fn decode<F: Field>(
        &self,
        table: &mut MonomialTable,
        ring: &PolyRing<F>,
        module: &GradedFreeModule,
        v: &[(u32, F::Elem)],
    ) -> ModuleElement<F> {
        let mut coords: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); module.rank()];
        for (idx, c) in v {
            let comp = match self.offsets.binary_search(idx) {
                Ok(mut p) => {
                    // skip empty summands sharing the offset
                    while p + 1 < self.offsets.len() && self.offsets[p + 1] == *idx {
                        p += 1;
                    }
                    p
                }
                Err(p) => p - 1,
            };
            let local = (idx - self.offsets[comp]) as i64;
            let m = table.basis(self.degree - module.degrees[comp] as i64)[local as usize];
            coords[comp].push((m, c.clone()));
        }
        ModuleElement::new(coords.into_iter().map(|t| ring.from_terms(t)).collect())
    }

    /// Basis elements `m·e_k` as `(k, m)`.
    pub fn basis(&self, table: &mut MonomialTable, module: &GradedFreeModule) -> Vec<(usize, Monomial)> {
        let mut out = Vec::with_capacity(self.dim);
        for (k, &a) in module.degrees.iter().enumerate() {
            for m in table.basis(self.degree - a as i64) {
                out.push((k, *m));
            }
        }
        out
    }
}

/// `m · v` for a module element.
pub fn shift_element<F: Field>(ring: &PolyRing<F>, v: &ModuleElement<F>, m: &Monomial) -> ModuleElement<F> {
    let one = ring.field().one();
    ModuleElement::new(v.coords.iter().map(|p| ring.mul_term(p, m, &one)).collect())
}

/// Images of the degree-`d` basis of `source` under the map whose `k`-th
/// column is `columns[k]` (an element of `target`), in target coordinates.
pub fn map_in_degree<F: Field>(
    ring: &PolyRing<F>,
    table: &mut MonomialTable,
    source: &GradedFreeModule,
    target: &GradedFreeModule,
    columns: &[ModuleElement<F>],
    d: i64,
) -> (DegreePiece, DegreePiece, Vec<SparseVec<F::Elem>>) {
    let sp = DegreePiece::new(table, source, d);
    let tp = DegreePiece::new(table, target, d);
    let mut images = Vec::with_capacity(sp.dim);
    for (k, m) in sp.basis(table, source) {
        let img = shift_element(ring, &columns[k], &m);
        images.push(tp.encode(table, ring.field(), &img));
    }
    (sp, tp, images)
}

/// Basis of the kernel of `source -> target` in degree `d`.
pub fn kernel_in_degree<F: Field>(
    ring: &PolyRing<F>,
    table: &mut MonomialTable,
    source: &GradedFreeModule,
    target: &GradedFreeModule,
    columns: &[ModuleElement<F>],
    d: i64,
) -> Vec<ModuleElement<F>> {
    let (sp, _, images) = map_in_degree(ring, table, source, target, columns, d);
    linalg::kernel(ring.field(), &images)
        .into_iter()
        .map(|v| sp.decode(table, ring, source, &v))
        .collect()
}

/// Span of `S_{d - deg g} · g` over the given homogeneous elements, as an echelon
/// in the coordinates of `piece`.
pub fn span_in_degree<F: Field>(
    ring: &PolyRing<F>,
    table: &mut MonomialTable,
    piece: &DegreePiece,
    elems: &[(i64, ModuleElement<F>)],
) -> Echelon<F> {
    let mut e = Echelon::new(ring.field());
    for (deg, g) in elems {
        if *deg > piece.degree {
            continue;
        }
        let mons: Vec<Monomial> = table.basis(piece.degree - deg).to_vec();
        for m in mons {
            let v = piece.encode(table, ring.field(), &shift_element(ring, g, &m));
            e.insert(v);
        }
    }
    e
}

/// Minimal homogeneous generators of the submodule generated by `elems`,
/// chosen greedily in order of degree and then input position.
pub fn minimal_generators_graded<F: Field>(
    ring: &PolyRing<F>,
    table: &mut MonomialTable,
    module: &GradedFreeModule,
    elems: &[ModuleElement<F>],
) -> Vec<ModuleElement<F>> {
    let mut withdeg: Vec<(i64, usize)> = elems
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.degree(module).map(|d| (d as i64, i)))
        .collect();
    withdeg.sort();
    let mut chosen: Vec<(i64, ModuleElement<F>)> = Vec::new();
    let mut i = 0;
    while i < withdeg.len() {
        let d = withdeg[i].0;
        let piece = DegreePiece::new(table, module, d);
        let mut span = span_in_degree(ring, table, &piece, &chosen);
        while i < withdeg.len() && withdeg[i].0 == d {
            let g = &elems[withdeg[i].1];
            if span.insert(piece.encode(table, ring.field(), g)) {
                chosen.push((d, g.clone()));
            }
            i += 1;
        }
    }
    chosen.into_iter().map(|(_, g)| g).collect()
}

/// Polynomials viewed as elements of the rank-one module `S`.
pub fn as_elements<F: Field>(polys: &[Polynomial<F>]) -> Vec<ModuleElement<F>> {
    polys.iter().map(|p| ModuleElement::new(vec![p.clone()])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn encode_decode_round_trip() {
        let r = PolyRing::new(Rationals, 3).unwrap();
        let mut t = MonomialTable::new(3);
        let module = GradedFreeModule::new(vec![1, 2, 2]);
        let v = ModuleElement::new(vec![
            r.from_int_terms(&[(2, &[1, 1, 0]), (-1, &[0, 0, 2])]),
            r.from_int_terms(&[(3, &[0, 1, 0])]),
            r.zero(),
        ]);
        assert_eq!(v.degree(&module), Some(3));
        let piece = DegreePiece::new(&mut t, &module, 3);
        assert_eq!(piece.dim, 6 + 3 + 3);
        let enc = piece.encode(&mut t, r.field(), &v);
        assert_eq!(piece.decode(&mut t, &r, &module, &enc), v);
    }

    #[test]
    fn koszul_kernel_on_two_variables() {
        let r = PolyRing::new(Rationals, 2).unwrap();
        let mut t = MonomialTable::new(2);
        let source = GradedFreeModule::new(vec![1, 1]);
        let target = GradedFreeModule::new(vec![0]);
        let cols = as_elements(&[r.var(0), r.var(1)]);
        assert!(kernel_in_degree(&r, &mut t, &source, &target, &cols, 1).is_empty());
        let ker = kernel_in_degree(&r, &mut t, &source, &target, &cols, 2);
        assert_eq!(ker.len(), 1);
        let gens = [r.var(0), r.var(1)];
        assert!(ker[0].dot(&r, &gens).is_zero());
    }

    #[test]
    fn minimal_generators_drop_redundant() {
        let r = PolyRing::new(Rationals, 2).unwrap();
        let mut t = MonomialTable::new(2);
        let x2 = r.mul(&r.var(0), &r.var(0));
        let x3 = r.mul(&x2, &r.var(0));
        let xy = r.mul(&r.var(0), &r.var(1));
        let gens = as_elements(&[x3, xy.clone(), x2.clone(), r.add(&x2, &xy)]);
        let module = GradedFreeModule::new(vec![0]);
        let min = minimal_generators_graded(&r, &mut t, &module, &gens);
        assert_eq!(min.len(), 2);
    }
}
