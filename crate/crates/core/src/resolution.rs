//! Free resolutions, Betti tables and the numerical checks built on them.
//!
//! Two independent routes give Betti numbers:
//!
//! * [`free_resolution`] iterates minimal syzygies over `S`;
//! * [`betti_table_artinian`] computes `Tor^S_i(R, k)_j` as the homology of
//!   the Koszul complex `∧^i k^n ⊗ R_{j-i}` of an Artinian `R = S/I`.
//!
//! Hilbert data comes from the initial ideal and never from a resolution.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::as_elements;
use crate::groebner::{syzygies, IdealHandle};
use crate::hilbert::{HilbertData, KPolynomial};
use crate::linalg::{self, SparseVec};
pub use crate::parse_io::BettiTable;
use crate::quotient::QuotientRing;
use crate::ring::{binomial, GradedFreeModule, ModuleElement, PolyRing};

/// `0 <- F_0 <- F_1 <- ... <- F_l`, with `maps[i]` the columns of `F_{i+1} -> F_i`.
#[derive(Debug, Clone)]
pub struct FreeResolution<F: Field> {
    pub ring: PolyRing<F>,
    pub modules: Vec<GradedFreeModule>,
    pub maps: Vec<Vec<ModuleElement<F>>>,
    pub minimal: bool,
}

impl<F: Field> FreeResolution<F> {
    pub fn length(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn betti(&self) -> BettiTable {
        let mut t = BettiTable::new();
        for (i, m) in self.modules.iter().enumerate() {
            for &a in &m.degrees {
                t.set(i, a as i64, t.get(i, a as i64) + 1);
            }
        }
        t
    }

    /// Every composite `F_{i+2} -> F_{i+1} -> F_i` vanishes.
    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| {
            let rank = w[0].first().map_or(0, |c| c.coords.len());
            w[1].iter().all(|col| col.apply(&self.ring, &w[0], rank).is_zero())
        })
    }

    /// No map has a nonzero constant entry.
    pub fn entries_in_maximal_ideal(&self) -> bool {
        self.maps
            .iter()
            .flatten()
            .flat_map(|c| &c.coords)
            .all(|p| p.terms().iter().all(|(m, _)| !m.is_one()))
    }
}

/// Minimal graded free resolution of `S/I` for homogeneous `I`, up to
/// `length_bound` steps (the number of variables suffices).
pub fn free_resolution<F: Field>(ideal: &IdealHandle<F>, length_bound: usize) -> Result<FreeResolution<F>> {
    let ring = ideal.ring().clone();
    let gens = ideal.minimal_generators()?;
    let mut modules = vec![GradedFreeModule::new(vec![0])];
    let mut maps: Vec<Vec<ModuleElement<F>>> = Vec::new();
    let mut current = as_elements(&gens);
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let mut step = 0;
    while !current.is_empty() && step < length_bound.max(1) {
        let target = modules.last().unwrap().clone();
        let (source, syz) = syzygies(&ring, &target, &current);
        modules.push(source);
        maps.push(current);
        current = syz;
        step += 1;
    }
    let mut res = FreeResolution {
        ring,
        modules,
        maps,
        minimal: false,
    };
    res.minimal = res.entries_in_maximal_ideal();
    Ok(res)
}

/// Subsets of `0..n` of each size, as bitmasks in increasing order, with
/// their positions.
struct Subsets {
    levels: Vec<Vec<u32>>,
    position: HashMap<u32, u32>,
}

impl Subsets {
    fn new(n: usize) -> Self {
        let mut levels = vec![Vec::new(); n + 1];
        for mask in 0u32..(1 << n) {
            levels[mask.count_ones() as usize].push(mask);
        }
        let mut position = HashMap::new();
        for level in &levels {
            for (p, &m) in level.iter().enumerate() {
                position.insert(m, p as u32);
            }
        }
        Subsets { levels, position }
    }
}

/// Columns of the Koszul differential `∧^i ⊗ R_r -> ∧^{i-1} ⊗ R_{r+1}`.
fn koszul_columns<F: Field>(q: &QuotientRing<F>, subsets: &Subsets, i: usize, r: usize) -> (usize, Vec<SparseVec<F::Elem>>) {
    let k = q.field();
    let n = q.nvars();
    let h_next = q.dim(r as i64 + 1);
    let nrows = subsets.levels[i - 1].len() * h_next;
    let mut cols = Vec::with_capacity(subsets.levels[i].len() * q.dim(r as i64));
    for &mask in &subsets.levels[i] {
        for b in 0..q.dim(r as i64) {
            let mut v: Vec<(u32, F::Elem)> = Vec::new();
            let mut t = 0;
            for s in 0..n {
                if mask & (1 << s) == 0 {
                    continue;
                }
                let face = subsets.position[&(mask & !(1 << s))] as usize;
                let base = (face * h_next) as u32;
                for (idx, c) in &q.mult_table(r, s)[b] {
                    let c = if t % 2 == 0 { c.clone() } else { k.neg(c) };
                    v.push((base + idx, c));
                }
                t += 1;
            }
            cols.push(linalg::normalize(k, v));
        }
    }
    (nrows, cols)
}

/// Graded Betti numbers of an Artinian `R = S/I` over `S`, from the
/// homology of the Koszul complex on the variables with coefficients in `R`.
pub fn betti_table_artinian<F: Field>(q: &QuotientRing<F>) -> Result<BettiTable> {
    if !q.is_artinian() {
        return Err(Error::NotArtinian);
    }
    let n = q.nvars();
    let top = q.top_degree();
    let subsets = Subsets::new(n);
    // rank[i][r] for d: ∧^i ⊗ R_r -> ∧^{i-1} ⊗ R_{r+1}
    let mut rank = vec![vec![0usize; top + 2]; n + 2];
    for i in 1..=n {
        for r in 0..top {
            let (nrows, cols) = koszul_columns(q, &subsets, i, r);
            rank[i][r] = linalg::rank_of_columns(q.field(), nrows, &cols);
        }
    }
    let mut t = BettiTable::new();
    for i in 0..=n {
        for r in 0..=top {
            let dim = binomial(n as i64, i as i64) as usize * q.dim(r as i64);
            let into = if r >= 1 { rank[i + 1][r - 1] } else { 0 };
            let b = dim - rank[i][r] - into;
            t.set(i, (i + r) as i64, b as u64);
        }
    }
    Ok(t)
}

/// Betti table of `S/I`: Koszul homology when `S/I` is Artinian, a minimal
/// free resolution otherwise.
pub fn betti_table<F: Field>(ideal: &IdealHandle<F>) -> Result<BettiTable> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if !ideal.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    if ideal.is_artinian() {
        betti_table_artinian(&QuotientRing::new(ideal)?)
    } else {
        Ok(free_resolution(ideal, ideal.ring().nvars())?.betti())
    }
}

/// Hilbert data of `S/I`, read off the initial ideal.
pub fn hilbert<F: Field>(ideal: &IdealHandle<F>) -> Result<HilbertData> {
    if !ideal.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    Ok(HilbertData::from_k_polynomial(ideal.ring().nvars(), ideal.k_polynomial()))
}

/// `Σ_i (-1)^i β_{i,j}` equals the `t^j` coefficient of the K-polynomial for every `j`.
pub fn euler_identity_check(t: &BettiTable, k: &KPolynomial) -> bool {
    let sums = t.alternating_sums();
    let top = sums.keys().copied().max().unwrap_or(0).max(k.coeffs.len() as i64);
    (0..=top).all(|j| sums.get(&j).copied().unwrap_or(0) == k.coeff(j as usize))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinReport {
    pub cohen_macaulay: bool,
    pub codimension: usize,
    pub projective_dimension: usize,
    pub cm_type: u64,
    pub regularity: i64,
    pub betti_symmetric: bool,
    pub h_vector: Option<Vec<i64>>,
    pub h_symmetric: bool,
    pub multiplicity: i64,
    pub gorenstein: bool,
}

/// Gorenstein checks from a Betti table and Hilbert data of the same ring.
pub fn gorenstein_report(t: &BettiTable, h: &HilbertData) -> GorensteinReport {
    let pd = t.projective_dimension();
    let c = h.codimension;
    let reg = t.regularity();
    let cm = pd == c && !h.not_cohen_macaulay;
    let cm_type = t.total(pd);
    let betti_symmetric = t.entries.iter().all(|(&(i, j), &v)| {
        i <= c && t.get(c - i, c as i64 + reg - j) == v
    });
    let h_symmetric = h.h_vector.as_ref().is_some_and(|v| v.iter().eq(v.iter().rev()));
    GorensteinReport {
        cohen_macaulay: cm,
        codimension: c,
        projective_dimension: pd,
        cm_type,
        regularity: reg,
        betti_symmetric,
        h_vector: h.h_vector.clone(),
        h_symmetric,
        multiplicity: h.multiplicity,
        gorenstein: cm && cm_type == 1 && betti_symmetric && h_symmetric,
    }
}

pub fn gorenstein_diagnostics<F: Field>(ideal: &IdealHandle<F>) -> Result<GorensteinReport> {
    Ok(gorenstein_report(&betti_table(ideal)?, &hilbert(ideal)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub regularity: i64,
    pub projective_dimension: usize,
    pub complete_intersection: bool,
    /// `reg <= pd`
    pub bound_holds: bool,
    /// equality exactly for complete intersections
    pub equality_matches: bool,
}

/// `reg <= pd` with equality iff complete intersection, for a quadratic
/// Cohen–Macaulay `S/I` with the given Betti table.
pub fn regularity_report(t: &BettiTable, h: &HilbertData) -> Result<RegularityReport> {
    let quadratic = t.entries.keys().all(|&(i, j)| i != 1 || j == 2) && t.total(1) > 0;
    let pd = t.projective_dimension();
    if !quadratic {
        return Err(Error::PreconditionUnmet("ideal is not generated by quadrics".into()));
    }
    if pd != h.codimension || h.not_cohen_macaulay {
        return Err(Error::PreconditionUnmet("quotient is not Cohen-Macaulay".into()));
    }
    let reg = t.regularity();
    let ci = t.total(1) as usize == h.codimension;
    Ok(RegularityReport {
        regularity: reg,
        projective_dimension: pd,
        complete_intersection: ci,
        bound_holds: reg <= pd as i64,
        equality_matches: (reg == pd as i64) == ci,
    })
}

pub fn regularity_bound_check<F: Field>(ideal: &IdealHandle<F>) -> Result<RegularityReport> {
    regularity_report(&betti_table(ideal)?, &hilbert(ideal)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::inverse;
    use crate::parse_io::parse_polynomial;

    fn ideal<F: Field>(r: &PolyRing<F>, gens: &[&str]) -> IdealHandle<F> {
        IdealHandle::new(r, gens.iter().map(|g| parse_polynomial(g, r).unwrap()).collect())
    }

    #[test]
    fn koszul_complex_of_variables() {
        let r = PolyRing::new(Rationals, 3).unwrap();
        let i = ideal(&r, &["x0", "x1", "x2"]);
        let res = free_resolution(&i, 3).unwrap();
        assert!(res.is_complex());
        assert!(res.minimal);
        assert_eq!(res.betti(), BettiTable::from_rows(&[&[1, 3, 3, 1]]));
        assert_eq!(betti_table(&i).unwrap(), res.betti());
    }

    #[test]
    fn two_routes_agree() {
        let r = PolyRing::new(Rationals, 3).unwrap();
        for gens in [
            vec!["x0^2", "x1^2", "x2^2"],
            vec!["x0^2", "x0*x1", "x1^2", "x2^2", "x1*x2"],
            vec!["x0^2 - x1*x2", "x1^2 - x0*x2", "x2^2 - x0*x1", "x0*x1*x2"],
            vec!["x0^3", "x1^2", "x2^2", "x0*x1*x2"],
        ] {
            let i = ideal(&r, &gens);
            let res = free_resolution(&i, 3).unwrap();
            assert!(res.is_complex());
            assert!(res.minimal);
            let kos = betti_table_artinian(&QuotientRing::new(&i).unwrap()).unwrap();
            assert_eq!(res.betti(), kos, "{gens:?}");
            assert!(euler_identity_check(&kos, i.k_polynomial()));
        }
    }

    #[test]
    fn quadratic_ci_regularity() {
        let r = PolyRing::new(Rationals, 3).unwrap();
        let i = ideal(&r, &["x0^2", "x1^2", "x2^2"]);
        let rep = regularity_bound_check(&i).unwrap();
        assert_eq!((rep.regularity, rep.projective_dimension), (3, 3));
        assert!(rep.complete_intersection && rep.bound_holds && rep.equality_matches);
        let h = hilbert(&i).unwrap();
        assert_eq!(h.h_vector, Some(vec![1, 3, 3, 1]));
        let g = gorenstein_diagnostics(&i).unwrap();
        assert!(g.gorenstein);
    }

    #[test]
    fn non_gorenstein_examples() {
        let r = PolyRing::new(Rationals, 2).unwrap();
        let i = ideal(&r, &["x0^2", "x0*x1"]);
        let g = gorenstein_diagnostics(&i).unwrap();
        assert!(!g.cohen_macaulay);
        assert!(!g.gorenstein);
        let j = ideal(&r, &["x0^2", "x0*x1", "x1^2"]);
        let g = gorenstein_diagnostics(&j).unwrap();
        assert!(g.cohen_macaulay);
        assert_eq!(g.cm_type, 2);
        assert!(!g.gorenstein);
        assert!(matches!(regularity_bound_check(&i), Err(Error::PreconditionUnmet(_))));
    }

    #[test]
    fn family_seven_table() {
        let (d, f) = inverse::family_f(PrimeField::default(), 7).unwrap();
        let s = inverse::acting_ring(&d).unwrap();
        let i = inverse::annihilator(&s, &d, &[f]).unwrap();
        let t = betti_table(&i).unwrap();
        let expected = BettiTable::from_rows(&[
            &[1],
            &[0, 14, 21],
            &[0, 0, 36, 126, 126, 36],
            &[0, 0, 0, 0, 0, 21, 14],
            &[0, 0, 0, 0, 0, 0, 0, 1],
        ]);
        assert_eq!(t, expected);
        let h = hilbert(&i).unwrap();
        assert!(euler_identity_check(&t, i.k_polynomial()));
        let g = gorenstein_report(&t, &h);
        assert!(g.gorenstein);
        let reg = regularity_report(&t, &h).unwrap();
        assert_eq!((reg.regularity, reg.projective_dimension), (4, 7));
        assert!(!reg.complete_intersection && reg.equality_matches);
    }
}
