//! Koszul certificates for graded quotients `R = S/I`.
//!
//! [`resolve_residue_field`] builds a minimal graded free resolution of
//! `k = R/R_+` over an Artinian `R` step by step, using degreewise kernels
//! of maps between free `R`-modules. Only generators of `F_i` in internal
//! degree `<= i + slack` are kept. A kernel element in degree `j` never
//! involves a minimal generator of degree `j` with a scalar coefficient, so
//! the truncation leaves every reported entry exact.
//!
//! A `NotKoszul` verdict is a proof. `KoszulUpTo(N)` is only evidence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};
use crate::graded::{self, MonomialTable};
use crate::groebner::IdealHandle;
use crate::linalg::{self, Echelon, SparseVec};
pub use crate::quotient::QuotientRing;
use crate::parse_io::BettiTable;
use crate::ring::{binomial, GradedFreeModule, ModuleElement, Monomial, PolyRing, Polynomial};

/// A free `R`-module `⊕ R(-a_k)` with its degreewise coordinate layout.
#[derive(Debug, Clone, Default)]
struct FreeR {
    degrees: Vec<usize>,
}

impl FreeR {
    /// `(offset, dim)` of every summand in degree `j`, and the total.
    fn layout<F: Field>(&self, q: &QuotientRing<F>, j: usize) -> (Vec<(u32, usize)>, usize) {
        let mut acc = 0usize;
        let parts = self
            .degrees
            .iter()
            .map(|&a| {
                let d = if j >= a { q.dim((j - a) as i64) } else { 0 };
                let o = (acc as u32, d);
                acc += d;
                o
            })
            .collect();
        (parts, acc)
    }
}

/// `m · v` for `v` a homogeneous element of degree `a` in `module`.
fn mul_monomial<F: Field>(q: &QuotientRing<F>, module: &FreeR, a: usize, v: &[(u32, F::Elem)], m: &Monomial) -> SparseVec<F::Elem> {
    let (src, _) = module.layout(q, a);
    let e = m.degree() as usize;
    let (dst, _) = module.layout(q, a + e);
    let mut out = Vec::new();
    let mut pos = 0;
    for (l, &(off, dim)) in src.iter().enumerate() {
        let start = pos;
        while pos < v.len() && (v[pos].0 as usize) < off as usize + dim {
            pos += 1;
        }
        if start == pos {
            continue;
        }
        let mut w: SparseVec<F::Elem> = v[start..pos].iter().map(|(i, c)| (i - off, c.clone())).collect();
        let mut deg = a - module.degrees[l];
        for s in 0..q.nvars() {
            for _ in 0..m.exponent(s) {
                w = q.mul_var(deg, s, &w);
                deg += 1;
            }
        }
        out.extend(w.into_iter().map(|(i, c)| (i + dst[l].0, c)));
    }
    out
}

/// Graded Betti numbers `β^R_{i,j}(k)` for `i <= steps`, `j <= i + slack`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueBetti {
    pub table: BettiTable,
    pub steps: usize,
    pub slack: usize,
}

impl ResidueBetti {
    /// First off-diagonal entry in the order of `i`, then `j`.
    pub fn first_off_diagonal(&self) -> Option<(usize, i64, u64)> {
        self.table.triples().into_iter().find(|&(i, j, v)| j != i as i64 && v > 0)
    }

    /// Degree up to which the tracked entries determine the Euler characteristic.
    pub fn euler_degree(&self) -> usize {
        self.steps.min(self.slack + 2)
    }
}

/// Partial minimal resolution of the residue field over an Artinian `R`.
pub fn resolve_residue_field<F: Field>(q: &QuotientRing<F>, steps: usize, slack: usize) -> Result<ResidueBetti> {
    if !q.is_artinian() {
        return Err(Error::NotArtinian);
    }
    let k = q.field();
    let mut table = BettiTable::new();
    table.set(0, 0, 1);
    let h1 = q.dim(1);
    if steps == 0 || h1 == 0 {
        return Ok(ResidueBetti { table, steps, slack });
    }
    // F_1 = R(-1)^{h1} -> F_0 = R sending e_b to the b-th basis element of R_1
    let mut target = FreeR { degrees: vec![0] };
    let mut source = FreeR { degrees: vec![1; h1] };
    let mut images: Vec<SparseVec<F::Elem>> = (0..h1).map(|b| vec![(b as u32, k.one())]).collect();
    table.set(1, 1, h1 as u64);
    for i in 2..=steps {
        let cap = i + slack;
        let mut gens: Vec<(usize, SparseVec<F::Elem>)> = Vec::new();
        let min_deg = source.degrees.iter().copied().min().unwrap_or(cap + 1);
        for j in min_deg..=cap {
            let (src, dim_src) = source.layout(q, j);
            if dim_src == 0 {
                continue;
            }
            // matrix of d in degree j
            let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(dim_src);
            for (l, &a) in source.degrees.iter().enumerate() {
                if j < a {
                    continue;
                }
                for m in q.basis(j - a) {
                    cols.push(linalg::normalize(k, mul_monomial(q, &target, a, &images[l], m)));
                }
                debug_assert_eq!(cols.len(), src[l].0 as usize + src[l].1);
            }
            let ker = linalg::kernel(k, &cols);
            if ker.is_empty() {
                continue;
            }
            // part of the kernel generated by earlier generators
            let mut span = Echelon::new(k);
            for (a, g) in &gens {
                for m in q.basis(j - a) {
                    span.insert(linalg::normalize(k, mul_monomial(q, &source, *a, g, m)));
                }
            }
            let mut fresh = 0u64;
            let mut new_gens = Vec::new();
            for v in ker {
                if span.insert(v.clone()) {
                    new_gens.push((j, v));
                    fresh += 1;
                }
            }
            gens.extend(new_gens);
            table.set(i, j as i64, fresh);
        }
        target = source;
        source = FreeR {
            degrees: gens.iter().map(|(a, _)| *a).collect(),
        };
        images = gens.into_iter().map(|(_, v)| v).collect();
        if images.is_empty() {
            break;
        }
    }
    Ok(ResidueBetti { table, steps, slack })
}

/// `Σ_i (-1)^i β^R_{i,j}(k) t^j` times the Hilbert series of `R` is `1`, checked
/// in degrees `<= degree`.
pub fn residue_euler_check(b: &ResidueBetti, hilbert: &[usize], degree: usize) -> bool {
    let sums = b.table.alternating_sums();
    (0..=degree).all(|d| {
        let c: i64 = (0..=d)
            .map(|j| sums.get(&(j as i64)).copied().unwrap_or(0) * hilbert.get(d - j).copied().unwrap_or(0) as i64)
            .sum();
        c == i64::from(d == 0)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    KoszulUpTo(usize),
    NotKoszul { i: usize, j: i64, beta: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulCertificate {
    pub verdict: Verdict,
    pub betti_over_r: BettiTable,
    pub steps: usize,
    pub slack: usize,
    pub field: FieldDescriptor,
}

/// Koszul certificate for `S/I`, `I` homogeneous with Artinian quotient.
pub fn koszul_certificate<F: Field>(ideal: &IdealHandle<F>, steps: usize, slack: usize) -> Result<KoszulCertificate> {
    let field = ideal.ring().field().descriptor();
    let gens = ideal.minimal_generators()?;
    let mut high: Vec<u32> = gens.iter().filter_map(|g| g.degree()).filter(|&d| d >= 3).collect();
    high.sort();
    if let Some(&d) = high.first() {
        // a minimal generator of degree d >= 3 gives β^R_{2,d}(k) > 0
        let mut t = BettiTable::new();
        let count = high.iter().filter(|&&e| e == d).count() as u64;
        t.set(2, d as i64, count);
        return Ok(KoszulCertificate {
            verdict: Verdict::NotKoszul { i: 2, j: d as i64, beta: count },
            betti_over_r: t,
            steps,
            slack,
            field,
        });
    }
    let q = QuotientRing::new(ideal)?;
    let b = resolve_residue_field(&q, steps, slack)?;
    let verdict = match b.first_off_diagonal() {
        Some((i, j, beta)) => Verdict::NotKoszul { i, j, beta },
        None => Verdict::KoszulUpTo(steps),
    };
    Ok(KoszulCertificate {
        verdict,
        betti_over_r: b.table,
        steps,
        slack,
        field,
    })
}

/// A quadratic syzygy outside the module generated by linear and Koszul syzygies.
#[derive(Debug, Clone)]
pub struct ObstructionWitness<F: Field> {
    pub generators: Vec<Polynomial<F>>,
    pub syzygy: ModuleElement<F>,
    pub syzygies_in_degree_4: usize,
    pub z_in_degree_4: usize,
}

/// Degree-4 data for the quadratic generators `gens`: the syzygy kernel and
/// the subspace `Z_4`.
struct DegreeFour<F: Field> {
    table: MonomialTable,
    piece: graded::DegreePiece,
    kernel: Vec<ModuleElement<F>>,
    z: Echelon<F>,
}

fn degree_four<F: Field>(ring: &PolyRing<F>, gens: &[Polynomial<F>]) -> DegreeFour<F> {
    let m = gens.len();
    let mut table = MonomialTable::new(ring.nvars());
    let module = GradedFreeModule::new(vec![2; m]);
    let target = GradedFreeModule::new(vec![0]);
    let cols = graded::as_elements(gens);
    let linear = graded::kernel_in_degree(ring, &mut table, &module, &target, &cols, 3);
    let kernel = graded::kernel_in_degree(ring, &mut table, &module, &target, &cols, 4);
    let piece = graded::DegreePiece::new(&mut table, &module, 4);
    let mut z_elems: Vec<(i64, ModuleElement<F>)> = linear.into_iter().map(|v| (3, v)).collect();
    for a in 0..m {
        for b in a + 1..m {
            let mut coords = vec![ring.zero(); m];
            coords[a] = gens[b].clone();
            coords[b] = ring.neg(&gens[a]);
            z_elems.push((4, ModuleElement::new(coords)));
        }
    }
    let z = graded::span_in_degree(ring, &mut table, &piece, &z_elems);
    DegreeFour {
        table,
        piece,
        kernel,
        z,
    }
}

fn quadratic_generators<F: Field>(ideal: &IdealHandle<F>) -> Result<Vec<Polynomial<F>>> {
    let gens = ideal.minimal_generators()?;
    if gens.is_empty() || gens.iter().any(|g| g.degree() != Some(2)) {
        return Err(Error::NotQuadratic);
    }
    Ok(gens)
}

/// Looks for a degree-4 first syzygy of the minimal quadrics of `I` outside
/// `Z_4 = S_1·(linear syzygies) + (Koszul syzygies)`.
pub fn syzygy_obstruction<F: Field>(ideal: &IdealHandle<F>) -> Result<Option<ObstructionWitness<F>>> {
    let gens = quadratic_generators(ideal)?;
    obstruction_for_generators(ideal.ring(), &gens)
}

/// [`syzygy_obstruction`] for an explicit list of quadrics.
pub fn obstruction_for_generators<F: Field>(ring: &PolyRing<F>, gens: &[Polynomial<F>]) -> Result<Option<ObstructionWitness<F>>> {
    if gens.iter().any(|g| g.degree() != Some(2) || !g.is_homogeneous()) {
        return Err(Error::NotQuadratic);
    }
    let mut d4 = degree_four(ring, gens);
    let k = ring.field();
    let syz4 = d4.kernel.len();
    let z4 = d4.z.rank();
    for v in &d4.kernel {
        let enc = d4.piece.encode(&mut d4.table, k, v);
        if !d4.z.contains(&enc) {
            return Ok(Some(ObstructionWitness {
                generators: gens.to_vec(),
                syzygy: v.clone(),
                syzygies_in_degree_4: syz4,
                z_in_degree_4: z4,
            }));
        }
    }
    Ok(None)
}

/// Checks a witness: `gens · s = 0` and `s` is not in `Z_4`.
pub fn verify_witness<F: Field>(ring: &PolyRing<F>, gens: &[Polynomial<F>], s: &ModuleElement<F>) -> bool {
    if s.coords.len() != gens.len() || !s.dot(ring, gens).is_zero() {
        return false;
    }
    if s.degree(&GradedFreeModule::new(vec![2; gens.len()])) != Some(4) {
        return false;
    }
    let mut d4 = degree_four(ring, gens);
    let enc = d4.piece.encode(&mut d4.table, ring.field(), s);
    !d4.z.contains(&enc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundVerdict {
    NotKoszul { beta_2_4: u64, bound: u64 },
    Inconclusive { beta_2_4: u64, bound: u64 },
}

/// `β^S_{2,4}(R) > C(β^S_{1,2}(R), 2)` rules out Koszulness for quadratic `I`.
pub fn degree2_betti_bound(t: &BettiTable) -> Result<BoundVerdict> {
    if t.entries.keys().any(|&(i, j)| i == 1 && j != 2) {
        return Err(Error::NotQuadratic);
    }
    let g = t.get(1, 2);
    let b = t.get(2, 4);
    let bound = binomial(g as i64, 2);
    Ok(if b > bound {
        BoundVerdict::NotKoszul { beta_2_4: b, bound }
    } else {
        BoundVerdict::Inconclusive { beta_2_4: b, bound }
    })
}
