//! Pfaffians, deviation-two Gorenstein ideals, linkage, tensor products and
//! the codimension/regularity grid.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};
use crate::groebner::{is_regular_sequence, IdealHandle};
use crate::hilbert::HilbertData;
use crate::inverse;
use crate::parse_io::BettiTable;
use crate::resolution;
use crate::ring::{binomial, default_names, AlternatingMatrix, PolyRing, Polynomial};

/// Pfaffian of the principal submatrix on the index set `mask`.
fn pfaffian_on<F: Field>(
    ring: &PolyRing<F>,
    m: &AlternatingMatrix<F>,
    mask: u32,
    memo: &mut HashMap<u32, Polynomial<F>>,
) -> Polynomial<F> {
    if mask == 0 {
        return ring.one();
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let idx: Vec<usize> = (0..32).filter(|&i| mask >> i & 1 == 1).collect();
    let first = idx[0];
    let mut acc = ring.zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let a = m.entry(first, j);
        if a.is_zero() {
            continue;
        }
        let rest = pfaffian_on(ring, m, mask & !(1 << first) & !(1 << j), memo);
        let term = ring.mul(a, &rest);
        acc = if pos % 2 == 1 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Pfaffian by expansion along the first row.
pub fn pfaffian<F: Field>(ring: &PolyRing<F>, m: &AlternatingMatrix<F>) -> Result<Polynomial<F>> {
    let n = m.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    Ok(pfaffian_on(ring, m, ((1u64 << n) - 1) as u32, &mut HashMap::new()))
}

/// `pf_k = (-1)^(k+1) Pf(M with row and column k removed)`, `k` counted from 0.
/// With this sign `M · pf = 0`.
pub fn submaximal_pfaffians<F: Field>(ring: &PolyRing<F>, m: &AlternatingMatrix<F>) -> Result<Vec<Polynomial<F>>> {
    let n = m.size();
    if n % 2 == 0 {
        return Err(Error::EvenSize(n));
    }
    let full = ((1u64 << n) - 1) as u32;
    let mut memo = HashMap::new();
    let pf: Vec<Polynomial<F>> = (0..n)
        .map(|k| {
            let p = pfaffian_on(ring, m, full & !(1 << k), &mut memo);
            if k % 2 == 0 { ring.neg(&p) } else { p }
        })
        .collect();
    debug_assert!(m.apply(ring, &pf).iter().all(|e| e.is_zero()));
    Ok(pf)
}

/// Determinant of a square polynomial matrix by Laplace expansion, memoized on column sets.
pub fn determinant<F: Field>(ring: &PolyRing<F>, rows: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    fn go<F: Field>(
        ring: &PolyRing<F>,
        rows: &[Vec<Polynomial<F>>],
        cols: u32,
        memo: &mut HashMap<u32, Polynomial<F>>,
    ) -> Polynomial<F> {
        let r = rows.len() - cols.count_ones() as usize;
        if r == rows.len() {
            return ring.one();
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = ring.zero();
        let mut pos = 0;
        for j in 0..rows.len() {
            if cols >> j & 1 == 0 {
                continue;
            }
            let a = &rows[r][j];
            if !a.is_zero() {
                let t = ring.mul(a, &go(ring, rows, cols & !(1 << j), memo));
                acc = if pos % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
            }
            pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let n = rows.len();
    go(ring, rows, ((1u64 << n) - 1) as u32, &mut HashMap::new())
}

/// `I = Pf(M) + (q_6, ..., q_{c+2})` for a 5×5 alternating `M` of linear forms.
#[derive(Debug, Clone)]
pub struct DeviationTwoSpec<F: Field> {
    pub matrix: AlternatingMatrix<F>,
    pub extra_quadrics: Vec<Polynomial<F>>,
}

impl<F: Field> DeviationTwoSpec<F> {
    pub fn new(matrix: AlternatingMatrix<F>, extra_quadrics: Vec<Polynomial<F>>) -> Result<Self> {
        if matrix.size() != 5 {
            return Err(Error::PreconditionUnmet(format!("need a 5x5 matrix, got size {}", matrix.size())));
        }
        if extra_quadrics.iter().any(|q| !q.is_homogeneous() || q.degree() != Some(2)) {
            return Err(Error::NotQuadratic);
        }
        Ok(DeviationTwoSpec { matrix, extra_quadrics })
    }

    /// The intended codimension `3 + #extra`.
    pub fn codimension(&self) -> usize {
        3 + self.extra_quadrics.len()
    }
}

/// Random instance in `c` variables: dense linear entries and `c - 3` dense quadrics.
pub fn random_deviation_two<F: Field>(field: F, c: usize, seed: u64) -> Result<(PolyRing<F>, DeviationTwoSpec<F>)> {
    if c < 3 {
        return Err(Error::TooFewVariables { need: 3, got: c });
    }
    let ring = PolyRing::new(field, c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper = (0..10).map(|_| ring.random_form(1, &mut rng)).collect();
    let m = AlternatingMatrix::from_upper(&ring, 5, upper)?;
    let extra = (3..c).map(|_| ring.random_form(2, &mut rng)).collect();
    let spec = DeviationTwoSpec::new(m, extra)?;
    Ok((ring, spec))
}

/// Betti table predicted for a quadratic Gorenstein ring with `c = reg + 1`.
pub fn deviation_two_betti(c: usize) -> BettiTable {
    let c = c as i64;
    let mut t = BettiTable::new();
    t.set(0, 0, 1);
    for i in 1..=c {
        let lin = 5 * binomial(c - 3, i - 1) + binomial(c - 3, i);
        let sub = 5 * binomial(c - 3, i - 2) + binomial(c - 3, i - 3);
        if lin > 0 {
            t.set(i as usize, 2 * i, lin);
        }
        if sub > 0 {
            t.set(i as usize, 2 * i - 1, sub);
        }
    }
    t
}

/// `h_i = C(c-1, i) + C(c-3, i-1)`.
pub fn deviation_two_h_vector(c: usize) -> Vec<i64> {
    let c = c as i64;
    (0..c).map(|i| (binomial(c - 1, i) + binomial(c - 3, i - 1)) as i64).collect()
}

/// `h_i = C(c, i) - C(c-2, i-2)`.
pub fn aci_h_vector(c: usize) -> Vec<i64> {
    let c = c as i64;
    (0..c).map(|i| binomial(c, i) as i64 - binomial(c - 2, i - 2) as i64).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationTwoReport {
    pub codimension: usize,
    pub pfaffian_height: usize,
    pub extras_regular: bool,
    pub height: usize,
    pub betti: BettiTable,
    pub betti_matches: bool,
    pub multiplicity: i64,
    pub multiplicity_matches: bool,
    pub regularity: i64,
    pub field: FieldDescriptor,
    /// First failed check, if any.
    pub failure: Option<String>,
}

impl DeviationTwoReport {
    pub fn valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Builds `I = Pf(M) + (extras)` and checks it against the structure theorem.
/// A failed check is recorded in the report, not returned as an error.
pub fn build_deviation_two<F: Field>(ring: &PolyRing<F>, spec: &DeviationTwoSpec<F>) -> Result<(IdealHandle<F>, DeviationTwoReport)> {
    let c = spec.codimension();
    let pf = submaximal_pfaffians(ring, &spec.matrix)?;
    let pf_ideal = IdealHandle::new(ring, pf.clone());
    let pfaffian_height = if pf_ideal.is_unit() { ring.nvars() + 1 } else { pf_ideal.height()? };
    let extras_regular = pfaffian_height == 3 && is_regular_sequence(&spec.extra_quadrics, &pf_ideal)?;
    let mut gens = pf;
    gens.extend(spec.extra_quadrics.iter().cloned());
    let ideal = IdealHandle::new(ring, gens);
    let height = if ideal.is_unit() { ring.nvars() + 1 } else { ideal.height()? };
    let mut failure = None;
    let mut fail = |msg: String| {
        if failure.is_none() {
            failure = Some(msg);
        }
    };
    if pfaffian_height != 3 {
        fail(format!("height of the Pfaffian ideal is {pfaffian_height}, not 3"));
    }
    if !extras_regular {
        fail("extra quadrics are not a regular sequence modulo the Pfaffians".into());
    }
    if height != c {
        fail(format!("height of I is {height}, expected {c}"));
    }
    let (betti, multiplicity, regularity) = if height == c {
        let t = resolution::betti_table(&ideal)?;
        let h = resolution::hilbert(&ideal)?;
        let reg = t.regularity();
        (t, h.multiplicity, reg)
    } else {
        (BettiTable::new(), 0, 0)
    };
    let expected = deviation_two_betti(c);
    let betti_matches = betti == expected;
    let multiplicity_matches = multiplicity == 5 << (c - 3);
    if height == c && !betti_matches {
        fail("Betti table differs from the deviation-two closed form".into());
    }
    if height == c && !multiplicity_matches {
        fail(format!("multiplicity {multiplicity}, expected {}", 5 << (c - 3)));
    }
    let report = DeviationTwoReport {
        codimension: c,
        pfaffian_height,
        extras_regular,
        height,
        betti,
        betti_matches,
        multiplicity,
        multiplicity_matches,
        regularity,
        field: ring.field().descriptor(),
        failure,
    };
    Ok((ideal, report))
}

#[derive(Debug, Clone)]
pub struct ArtinianReduction<F: Field> {
    pub ideal: IdealHandle<F>,
    /// Images of the original variables, linear forms in the new ring.
    pub images: Vec<Polynomial<F>>,
    pub attempts: usize,
}

const REDUCTION_ATTEMPTS: usize = 8;

/// Cuts `S/I` down by general linear forms until it is Artinian, keeping the
/// h-polynomial. Refuses when no attempt preserves it.
pub fn artinian_reduction<F: Field>(ideal: &IdealHandle<F>, seed: u64) -> Result<ArtinianReduction<F>> {
    if !ideal.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let ring = ideal.ring();
    let n = ring.nvars();
    let h = resolution::hilbert(ideal)?;
    if h.dimension == 0 {
        return Ok(ArtinianReduction {
            ideal: ideal.clone(),
            images: (0..n).map(|i| ring.var(i)).collect(),
            attempts: 0,
        });
    }
    if h.not_cohen_macaulay {
        return Err(Error::PreconditionUnmet("quotient is not Cohen-Macaulay".into()));
    }
    let target = PolyRing::new(ring.field().clone(), h.codimension)?.with_order(ring.order());
    let want = h.h_polynomial();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=REDUCTION_ATTEMPTS {
        let images: Vec<Polynomial<F>> = (0..n).map(|_| target.random_form(1, &mut rng)).collect();
        let gens = ideal.generators().iter().map(|g| ring.substitute(g, &target, &images)).collect();
        let reduced = IdealHandle::new(&target, gens);
        let hr = HilbertData::from_k_polynomial(target.nvars(), reduced.k_polynomial());
        if hr.dimension == 0 && hr.h_polynomial() == want {
            return Ok(ArtinianReduction { ideal: reduced, images, attempts: attempt });
        }
    }
    Err(Error::PreconditionUnmet(format!(
        "no general linear section over {} preserved the h-polynomial in {REDUCTION_ATTEMPTS} attempts; the field may be too small",
        ring.field().descriptor()
    )))
}

/// `c` general combinations of the quadric generators of `I`, where `c = hgt I`.
pub fn general_quadric_ci<F: Field>(ideal: &IdealHandle<F>, seed: u64) -> Result<IdealHandle<F>> {
    let ring = ideal.ring();
    let quadrics: Vec<&Polynomial<F>> = ideal.generators().iter().filter(|g| g.degree() == Some(2)).collect();
    let c = ideal.height()?;
    if quadrics.len() < c {
        return Err(Error::PreconditionUnmet(format!("{} quadrics cannot contain a complete intersection of height {c}", quadrics.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = ring.field();
    let gens = (0..c)
        .map(|_| quadrics.iter().fold(ring.zero(), |acc, q| ring.add(&acc, &ring.scale(q, &k.random(&mut rng)))))
        .collect();
    Ok(IdealHandle::new(ring, gens))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub codimension: usize,
    pub h_i: Vec<i64>,
    pub h_j: Vec<i64>,
    pub cohen_macaulay: bool,
    /// `h_i(S/I) = C(c, i) - h_{c-i}(S/J)` for every `i`; `None` when `S/I` is not CM.
    pub identity_holds: Option<bool>,
    /// `(L : J) = I`.
    pub involution: bool,
}

/// `J = (L : I)` for a quadratic complete intersection `L ⊆ I` of the same height.
pub fn link<F: Field>(l: &IdealHandle<F>, i: &IdealHandle<F>) -> Result<(IdealHandle<F>, LinkReport)> {
    if l.ring() != i.ring() {
        return Err(Error::RingMismatch("L and I live in different rings".into()));
    }
    if !i.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    let lg: Vec<Polynomial<F>> = l.generators().iter().filter(|g| !g.is_zero()).cloned().collect();
    if lg.iter().any(|g| !g.is_homogeneous() || g.degree() != Some(2)) {
        return Err(Error::PreconditionUnmet("L is not generated by quadrics".into()));
    }
    if l.is_unit() || i.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let c = l.height()?;
    if c != lg.len() {
        return Err(Error::PreconditionUnmet(format!("L has {} generators but height {c}; not a complete intersection", lg.len())));
    }
    if i.height()? != c {
        return Err(Error::PreconditionUnmet(format!("hgt L = {c} but hgt I = {}", i.height()?)));
    }
    if !i.contains_ideal(l) {
        return Err(Error::PreconditionUnmet("L is not contained in I".into()));
    }
    if l.contains_ideal(i) {
        return Err(Error::PreconditionUnmet("I = L, so (L : I) is the unit ideal".into()));
    }
    let j = l.colon(i)?;
    let hi = resolution::hilbert(i)?;
    let hj = resolution::hilbert(&j)?;
    let h_i = hi.h_polynomial();
    let h_j = hj.h_polynomial();
    let cm = !hi.not_cohen_macaulay && hi.codimension == c;
    let identity_holds = cm.then(|| {
        let at = |v: &[i64], k: i64| if k < 0 { 0 } else { v.get(k as usize).copied().unwrap_or(0) };
        let top = (c as i64).max(h_i.len() as i64);
        (0..=top).all(|k| at(&h_i, k) == binomial(c as i64, k) as i64 - at(&h_j, c as i64 - k))
    });
    let involution = l.colon(&j)?.equals(i);
    Ok((j, LinkReport { codimension: c, h_i, h_j, cohen_macaulay: cm, identity_holds, involution }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HFamily {
    AlmostCompleteIntersection,
    DeviationTwo,
}

/// Whether the h-vector of `S/I` is the closed form of `family` for its codimension.
pub fn hvector_checks<F: Field>(ideal: &IdealHandle<F>, family: HFamily) -> bool {
    let Ok(h) = resolution::hilbert(ideal) else { return false };
    let Some(v) = h.h_vector else { return false };
    let expected = match family {
        HFamily::AlmostCompleteIntersection => aci_h_vector(h.codimension),
        HFamily::DeviationTwo => deviation_two_h_vector(h.codimension),
    };
    let trim = |mut w: Vec<i64>| {
        while w.last() == Some(&0) {
            w.pop();
        }
        w
    };
    trim(v) == trim(expected)
}

/// `I + I'` in a ring on the disjoint union of the variables.
pub fn tensor_product<F: Field>(a: &IdealHandle<F>, b: &IdealHandle<F>) -> Result<IdealHandle<F>> {
    let (ra, rb) = (a.ring(), b.ring());
    if ra.field() != rb.field() {
        return Err(Error::RingMismatch("ideals over different fields".into()));
    }
    let (n, m) = (ra.nvars(), rb.nvars());
    let mut names: Vec<String> = ra.names().to_vec();
    names.extend(rb.names().iter().cloned());
    let ring = match PolyRing::with_names(ra.field().clone(), names) {
        Ok(r) => r,
        Err(Error::Usage(_)) => PolyRing::with_names(ra.field().clone(), default_names("x", n + m))?,
        Err(e) => return Err(e),
    }
    .with_order(ra.order());
    let left: Vec<usize> = (0..n).collect();
    let right: Vec<usize> = (n..n + m).collect();
    let mut gens: Vec<Polynomial<F>> = a.generators().iter().map(|g| ring.rename_vars(g, &left)).collect();
    gens.extend(b.generators().iter().map(|g| ring.rename_vars(g, &right)));
    Ok(IdealHandle::new(&ring, gens))
}

/// `(x^2)` in one variable, the quadratic Gorenstein ring `k[x]/(x^2)`.
pub fn dual_numbers<F: Field>(field: F) -> Result<IdealHandle<F>> {
    let r = PolyRing::with_names(field, vec!["e".into()])?;
    let x = r.var(0);
    Ok(IdealHandle::new(&r, vec![r.mul(&x, &x)]))
}

/// Answer to "is every quadratic Gorenstein ring of codimension `c` and
/// regularity `r` Koszul?".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridStatus {
    Yes,
    No,
    Unknown,
    /// No quadratic Gorenstein ring has these invariants.
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessBase {
    /// `(0 : F_c)` for the family `F_c`, `c >= 7`.
    FamilyF(usize),
    /// `(0 : G)`, codimension 6.
    ExampleG,
}

/// A non-Koszul base ring tensored with `copies` factors `k[x]/(x^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub base: WitnessBase,
    pub copies: usize,
}

impl Witness {
    pub fn describe(&self) -> String {
        let base = match self.base {
            WitnessBase::FamilyF(c) => format!("(0 : F_{c})"),
            WitnessBase::ExampleG => "(0 : G)".to_string(),
        };
        match self.copies {
            0 => base,
            k => format!("{base} ⊗ (k[x]/(x^2))^{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCell {
    pub c: usize,
    pub r: usize,
    pub status: GridStatus,
    pub reason: String,
    pub witness: Option<Witness>,
}

pub fn grid_cell(c: usize, r: usize) -> GridCell {
    let cell = |status, reason: &str, witness| GridCell { c, r, status, reason: reason.to_string(), witness };
    if c < r || (r <= 1 && c != r) {
        return cell(GridStatus::Empty, "no quadratic Gorenstein ring with these invariants", None);
    }
    if c == r {
        return cell(GridStatus::Yes, "complete intersection of quadrics", None);
    }
    if r == 2 {
        return cell(GridStatus::Yes, "regularity two (cited)", None);
    }
    if c == r + 1 {
        return cell(GridStatus::Yes, "c = r + 1: Pfaffian structure with regular quadrics", None);
    }
    if r == 3 && c == 5 {
        return cell(GridStatus::Yes, "codimension five (cited)", None);
    }
    if r == 3 && c <= 8 {
        return cell(GridStatus::Unknown, "open", None);
    }
    if r == 3 {
        return cell(GridStatus::No, "idealization construction (cited; no witness built here)", None);
    }
    let base_c = c - (r - 4);
    let base = if base_c == 6 { WitnessBase::ExampleG } else { WitnessBase::FamilyF(base_c) };
    let w = Witness { base, copies: r - 4 };
    cell(GridStatus::No, "non-Koszul witness", Some(w))
}

pub fn grid(c_max: usize, r_max: usize) -> Vec<GridCell> {
    (0..=r_max).flat_map(|r| (0..=c_max).map(move |c| grid_cell(c, r))).collect()
}

/// The base ring of a witness, before tensoring.
pub fn witness_base<F: Field>(field: F, base: WitnessBase) -> Result<IdealHandle<F>> {
    let (d, f) = match base {
        WitnessBase::FamilyF(c) => inverse::family_f(field, c)?,
        WitnessBase::ExampleG => inverse::example_g(field)?,
    };
    let s = inverse::acting_ring(&d)?;
    inverse::annihilator(&s, &d, &[f])?.minimalized()
}

pub fn witness_ideal<F: Field>(field: F, w: &Witness) -> Result<IdealHandle<F>> {
    let mut acc = witness_base(field.clone(), w.base)?;
    let e = dual_numbers(field)?;
    for _ in 0..w.copies {
        acc = tensor_product(&acc, &e)?;
    }
    Ok(acc)
}
