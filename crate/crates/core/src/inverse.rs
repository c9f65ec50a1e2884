//! Macaulay inverse systems under the contraction action.
//!
//! Inverse polynomials live in a [`PolyRing`] whose variables are named
//! `y0..` and mirror the `x` variables of `S` index by index. The action is
//! `x^a · y^b = y^(b-a)` when `a <= b` componentwise and `0` otherwise.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{self, MonomialTable};
use crate::groebner::IdealHandle;
use crate::linalg::{self, SparseVec};
use crate::ring::{default_names, GradedFreeModule, Monomial, PolyRing, Polynomial};

/// Ring of inverse polynomials in `y0..y_{n-1}`.
pub fn inverse_ring<F: Field>(field: F, n: usize) -> Result<PolyRing<F>> {
    PolyRing::with_names(field, default_names("y", n))
}

/// Polynomial ring `x0..x_{n-1}` dual to `dring`.
pub fn acting_ring<F: Field>(dring: &PolyRing<F>) -> Result<PolyRing<F>> {
    PolyRing::with_names(dring.field().clone(), default_names("x", dring.nvars()))
}

/// `f · g` for `f` in `S` and `g` in `D`; the result lies in `dring`.
pub fn contract<F: Field>(dring: &PolyRing<F>, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
    let k = dring.field();
    let mut terms = Vec::new();
    for (a, ca) in f.terms() {
        for (b, cb) in g.terms() {
            if let Some(q) = b.div(a) {
                terms.push((q, k.mul(ca, cb)));
            }
        }
    }
    dring.from_terms(terms)
}

fn contract_monomial<F: Field>(dring: &PolyRing<F>, a: &Monomial, g: &Polynomial<F>) -> Polynomial<F> {
    dring.from_terms(g.terms().iter().filter_map(|(b, c)| b.div(a).map(|q| (q, c.clone()))).collect())
}

fn homogeneous_degree<F: Field>(g: &Polynomial<F>) -> Result<u32> {
    if g.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !g.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    Ok(g.degree().unwrap())
}

/// Minimal generators of `(0 :_S F_1, ..., F_m)` for homogeneous inverse
/// polynomials, as an ideal of `sring`.
pub fn annihilator<F: Field>(sring: &PolyRing<F>, dring: &PolyRing<F>, forms: &[Polynomial<F>]) -> Result<IdealHandle<F>> {
    if forms.is_empty() || forms.iter().all(|g| g.is_zero()) {
        return Err(Error::ZeroInput);
    }
    if sring.nvars() != dring.nvars() {
        return Err(Error::RingMismatch("inverse polynomials need the same number of variables".into()));
    }
    let forms: Vec<&Polynomial<F>> = forms.iter().filter(|g| !g.is_zero()).collect();
    let degs = forms.iter().map(|g| homogeneous_degree(g)).collect::<Result<Vec<u32>>>()?;
    let top = *degs.iter().max().unwrap();
    let n = sring.nvars();
    let k = sring.field();
    let mut table = MonomialTable::new(n);
    let module = GradedFreeModule::new(vec![0]);
    let mut kernel_elems = Vec::new();
    for d in 1..=top + 1 {
        let source: Vec<Monomial> = table.basis(d as i64).to_vec();
        // target: ⊕_k D_{r_k - d}, laid out summand after summand
        let mut offsets = Vec::new();
        let mut acc = 0u32;
        for &r in &degs {
            offsets.push(acc);
            acc += table.dim(r as i64 - d as i64) as u32;
        }
        let mut images: Vec<SparseVec<F::Elem>> = Vec::with_capacity(source.len());
        for a in &source {
            let mut v = Vec::new();
            for (idx, g) in forms.iter().enumerate() {
                for (m, c) in contract_monomial(dring, a, g).terms() {
                    v.push((offsets[idx] + table.index_of(m), c.clone()));
                }
            }
            images.push(linalg::normalize(k, v));
        }
        for rel in linalg::kernel(k, &images) {
            let p = sring.from_terms(rel.into_iter().map(|(j, c)| (source[j as usize], c)).collect());
            kernel_elems.push(graded::as_elements(&[p]).pop().unwrap());
        }
    }
    let gens = graded::minimal_generators_graded(sring, &mut table, &module, &kernel_elems);
    Ok(IdealHandle::new(sring, gens.into_iter().map(|e| e.coords.into_iter().next().unwrap()).collect()))
}

/// `(0 :_D I)` in degree `e`: inverse polynomials killed by every generator.
pub fn dual_in_degree<F: Field>(dring: &PolyRing<F>, ideal: &IdealHandle<F>, e: u32) -> Vec<Polynomial<F>> {
    let k = dring.field();
    let mut table = MonomialTable::new(dring.nvars());
    let basis: Vec<Monomial> = table.basis(e as i64).to_vec();
    let gens = ideal.generators();
    let mut offsets = Vec::new();
    let mut acc = 0u32;
    for g in gens {
        offsets.push(acc);
        acc += table.dim(e as i64 - g.degree().unwrap_or(0) as i64) as u32;
    }
    let images: Vec<SparseVec<F::Elem>> = basis
        .iter()
        .map(|b| {
            let y = dring.term(*b, k.one());
            let mut v = Vec::new();
            for (idx, g) in gens.iter().enumerate() {
                for (m, c) in contract(dring, g, &y).terms() {
                    v.push((offsets[idx] + table.index_of(m), c.clone()));
                }
            }
            linalg::normalize(k, v)
        })
        .collect();
    linalg::kernel(k, &images)
        .into_iter()
        .map(|rel| dring.from_terms(rel.into_iter().map(|(j, c)| (basis[j as usize], c)).collect()))
        .collect()
}

/// Minimal generators of the inverse system `(0 :_D I)` in degrees
/// `<= degree_bound`. The ideal must be homogeneous and Artinian.
pub fn dual_module<F: Field>(dring: &PolyRing<F>, ideal: &IdealHandle<F>, degree_bound: u32) -> Result<Vec<Polynomial<F>>> {
    if !ideal.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    if !ideal.is_artinian() {
        return Err(Error::NotArtinian);
    }
    let k = dring.field();
    let n = dring.nvars();
    let mut table = MonomialTable::new(n);
    let mut out = Vec::new();
    let mut above: Vec<Polynomial<F>> = Vec::new();
    for e in (0..=degree_bound).rev() {
        let here = dual_in_degree(dring, ideal, e);
        // the part of degree e reachable by contracting degree e + 1
        let mut span = linalg::Echelon::new(k);
        for g in &above {
            for i in 0..n {
                let c = contract_monomial(dring, &Monomial::var(i), g);
                span.insert(encode(&mut table, k, &c));
            }
        }
        for g in &here {
            if span.insert(encode(&mut table, k, g)) {
                out.push(g.clone());
            }
        }
        above = here;
    }
    out.reverse();
    Ok(out)
}

fn encode<F: Field>(table: &mut MonomialTable, k: &F, p: &Polynomial<F>) -> SparseVec<F::Elem> {
    linalg::normalize(k, p.terms().iter().map(|(m, c)| (table.index_of(m), c.clone())).collect())
}

/// `F_c = Σ_{i ∈ Z/c} y_i y_{i+1} y_{i+2}^2`.
pub fn family_f<F: Field>(field: F, c: usize) -> Result<(PolyRing<F>, Polynomial<F>)> {
    if c < 3 {
        return Err(Error::TooFewVariables { need: 3, got: c });
    }
    let dring = inverse_ring(field, c)?;
    let one = dring.field().one();
    let terms = (0..c)
        .map(|i| {
            let mut e = vec![0u32; c];
            e[i] += 1;
            e[(i + 1) % c] += 1;
            e[(i + 2) % c] += 2;
            (Monomial::from_exponents(&e), one.clone())
        })
        .collect();
    let f = dring.from_terms(terms);
    Ok((dring, f))
}

/// `G = F_6 + y0 y5 y4^2 + y0 y5^3`.
pub fn example_g<F: Field>(field: F) -> Result<(PolyRing<F>, Polynomial<F>)> {
    let (dring, f) = family_f(field, 6)?;
    let extra = dring.from_int_terms(&[(1, &[1, 0, 0, 0, 2, 1]), (1, &[1, 0, 0, 0, 0, 3])]);
    let g = dring.add(&f, &extra);
    Ok((dring, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::parse_io::parse_polynomial;
    use proptest::prelude::*;

    #[test]
    fn contraction_basics() {
        let d = inverse_ring(Rationals, 2).unwrap();
        let s = acting_ring(&d).unwrap();
        let y0 = d.var(0);
        assert_eq!(contract(&d, &s.var(0), &y0), d.one());
        assert!(contract(&d, &s.var(1), &y0).is_zero());
        let y = parse_polynomial("y0^2*y1 + 3 y1^3", &d).unwrap();
        let x = parse_polynomial("x1", &s).unwrap();
        assert_eq!(contract(&d, &x, &y), parse_polynomial("y0^2 + 3 y1^2", &d).unwrap());
    }

    #[test]
    fn family_contractions() {
        let (d, f) = family_f(Rationals, 7).unwrap();
        assert_eq!(f.len(), 7);
        let s = acting_ring(&d).unwrap();
        let i = 3;
        let xi = s.var(i);
        // x_i F = y_{i+1}y_{i+2}^2 + y_{i-1}y_{i+1}^2 + y_{i-2}y_{i-1}y_i
        let expect = parse_polynomial("y4*y5^2 + y2*y4^2 + y1*y2*y3", &d).unwrap();
        assert_eq!(contract(&d, &xi, &f), expect);
        let xx = s.mul(&s.var(i), &s.var(i + 2));
        assert_eq!(contract(&d, &xx, &f), parse_polynomial("y4*y5", &d).unwrap());
        let adj = s.mul(&s.var(i), &s.var(i + 1));
        assert_eq!(contract(&d, &adj, &f), parse_polynomial("y5^2 + y2*y4", &d).unwrap());
        // y_{i+1}^2 shows up in x_{i-1}x_i F only
        let prev = s.mul(&s.var(i - 1), &s.var(i));
        assert_eq!(contract(&d, &prev, &f), parse_polynomial("y4^2 + y1*y3", &d).unwrap());
    }

    #[test]
    fn annihilator_of_power() {
        let d = inverse_ring(Rationals, 1).unwrap();
        let s = acting_ring(&d).unwrap();
        let y = d.mul(&d.var(0), &d.var(0));
        let ann = annihilator(&s, &d, &[y.clone()]).unwrap();
        assert_eq!(ann.generators().len(), 1);
        assert_eq!(s.format(&ann.generators()[0]), "x0^3");
        let dual = dual_module(&d, &ann, 4).unwrap();
        assert_eq!(dual.len(), 1);
        assert_eq!(dual[0].monic(d.field()), y);
        assert!(matches!(annihilator(&s, &d, &[d.zero()]), Err(Error::ZeroInput)));
    }

    #[test]
    fn dual_of_complete_intersection() {
        let d = inverse_ring(Rationals, 2).unwrap();
        let s = acting_ring(&d).unwrap();
        let i = IdealHandle::new(&s, vec![parse_polynomial("x0^2", &s).unwrap(), parse_polynomial("x1^2", &s).unwrap()]);
        let dual = dual_module(&d, &i, 5).unwrap();
        assert_eq!(dual, vec![parse_polynomial("y0*y1", &d).unwrap()]);
        let not_artinian = IdealHandle::new(&s, vec![parse_polynomial("x0^2", &s).unwrap()]);
        assert!(matches!(dual_module(&d, &not_artinian, 3), Err(Error::NotArtinian)));
    }

    #[test]
    fn family_seven_generators() {
        let (d, f) = family_f(PrimeField::default(), 7).unwrap();
        let s = acting_ring(&d).unwrap();
        let ann = annihilator(&s, &d, &[f.clone()]).unwrap();
        let gens = ann.generators();
        assert_eq!(gens.len(), 14);
        assert!(gens.iter().all(|g| g.degree() == Some(2)));
        // the 7 monomials x_i x_j with cyclic distance at least 3
        let monomials = gens.iter().filter(|g| g.len() == 1).count();
        assert_eq!(monomials, 7);
        let dual = dual_module(&d, &ann, 5).unwrap();
        assert_eq!(dual.len(), 1);
        assert_eq!(dual[0].monic(d.field()), f.monic(d.field()));
    }

    #[test]
    fn example_g_shape() {
        let (d, g) = example_g(Rationals).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.degree(), Some(4));
        assert!(g.is_homogeneous());
        let s = acting_ring(&d).unwrap();
        let ann = annihilator(&s, &d, &[g]).unwrap();
        assert_eq!(ann.generators().len(), 9);
        assert!(ann.generators().iter().all(|q| q.degree() == Some(2)));
        let (_, f6) = family_f(Rationals, 6).unwrap();
        let ann6 = annihilator(&s, &d, &[f6]).unwrap();
        let mut degs: Vec<u32> = ann6.generators().iter().map(|q| q.degree().unwrap()).collect();
        degs.sort();
        assert_eq!(degs, [2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3]);
    }

    fn small_form() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, 3), -5i64..5), 1..5)
    }

    proptest! {
        #[test]
        fn action_is_associative(f in small_form(), g in small_form(), h in small_form()) {
            let d = inverse_ring(PrimeField::new(101).unwrap(), 3).unwrap();
            let s = acting_ring(&d).unwrap();
            let mk = |r: &PolyRing<PrimeField>, t: &[(Vec<u32>, i64)]| r.from_terms(t.iter().map(|(e, c)| (Monomial::from_exponents(e), r.field().from_i64(*c))).collect());
            let (f, g, h) = (mk(&s, &f), mk(&s, &g), mk(&d, &h));
            let lhs = contract(&d, &s.mul(&f, &g), &h);
            let rhs = contract(&d, &f, &contract(&d, &g, &h));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn annihilator_round_trip(t in proptest::collection::vec((proptest::collection::vec(0u32..4, 3), 1i64..7), 1..5)) {
            // homogenize to degree 3 by keeping only degree-3 terms, falling back to y0^3
            let d = inverse_ring(PrimeField::new(101).unwrap(), 3).unwrap();
            let s = acting_ring(&d).unwrap();
            let mut terms: Vec<_> = t.iter().filter(|(e, _)| e.iter().sum::<u32>() == 3).map(|(e, c)| (Monomial::from_exponents(e), d.field().from_i64(*c))).collect();
            if terms.is_empty() { terms.push((Monomial::from_exponents(&[3, 0, 0]), 1)); }
            let f = d.from_terms(terms);
            let ann = annihilator(&s, &d, &[f.clone()]).unwrap();
            prop_assert!(ann.is_artinian());
            let dual = dual_module(&d, &ann, 4).unwrap();
            prop_assert_eq!(dual.len(), 1);
            prop_assert_eq!(dual[0].monic(d.field()), f.monic(d.field()));
            let again = annihilator(&s, &d, &dual).unwrap();
            prop_assert!(again.equals(&ann));
            // socle is one-dimensional in degree 3
            let h = crate::hilbert::HilbertData::from_k_polynomial(3, ann.k_polynomial());
            let hv = h.h_vector.unwrap();
            prop_assert_eq!(hv.len(), 4);
            prop_assert_eq!(hv[3], 1);
        }
    }
}
