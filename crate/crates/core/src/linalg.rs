//! Sparse linear algebra over an exact field.
//!
//! Vectors are sorted lists of `(index, nonzero coefficient)`. An [`Echelon`]
//! keeps rows in semi-echelon form: each row is monic at its first index and
//! no two rows share a first index. Reduction is exact, and the outcome does
//! not depend on anything but the insertion order.

use std::collections::HashMap;

use crate::field::{Field, FieldDescriptor, Scalar};

pub type SparseVec<E> = Vec<(u32, E)>;

/// `a - c * b` for sparse vectors.
pub fn sub_scaled<F: Field>(k: &F, a: &[(u32, F::Elem)], c: &F::Elem, b: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ia, ca) = &a[i];
        let (ib, cb) = &b[j];
        if ia < ib {
            out.push((*ia, ca.clone()));
            i += 1;
        } else if ib < ia {
            out.push((*ib, k.neg(&k.mul(c, cb))));
            j += 1;
        } else {
            let v = k.sub_mul(ca, c, cb);
            if !k.is_zero(&v) {
                out.push((*ia, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(ib, cb)| (*ib, k.neg(&k.mul(c, cb)))));
    out
}

pub fn scale<F: Field>(k: &F, a: &[(u32, F::Elem)], c: &F::Elem) -> SparseVec<F::Elem> {
    a.iter().map(|(i, x)| (*i, k.mul(x, c))).collect()
}

/// Sorts and merges an unsorted list of entries, dropping zeros.
pub fn normalize<F: Field>(k: &F, mut v: Vec<(u32, F::Elem)>) -> SparseVec<F::Elem> {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d = k.add(d, &c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !k.is_zero(c));
    out
}

/// Semi-echelon basis of a subspace, optionally tracking how each row was
/// built from the inserted vectors.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    field: F,
    rows: Vec<SparseVec<F::Elem>>,
    pivots: HashMap<u32, usize>,
    track: Option<Vec<SparseVec<F::Elem>>>,
    inserted: u32,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F) -> Self {
        Echelon {
            field: field.clone(),
            rows: Vec::new(),
            pivots: HashMap::new(),
            track: None,
            inserted: 0,
        }
    }

    /// Echelon that records, for every row, its combination of inserted vectors.
    pub fn tracking(field: &F) -> Self {
        Echelon {
            track: Some(Vec::new()),
            ..Self::new(field)
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Reduces `v` until its first index is not a pivot. Tail entries may
    /// still sit on pivot columns.
    fn reduce_head(&self, mut v: SparseVec<F::Elem>, mut t: Option<&mut SparseVec<F::Elem>>) -> SparseVec<F::Elem> {
        let k = &self.field;
        while let Some((i, c)) = v.first() {
            let Some(&r) = self.pivots.get(i) else { break };
            let c = c.clone();
            v = sub_scaled(k, &v, &c, &self.rows[r]);
            if let (Some(t), Some(track)) = (t.as_deref_mut(), &self.track) {
                *t = sub_scaled(k, t, &c, &track[r]);
            }
        }
        v
    }

    /// Fully reduced form of `v` modulo the span: no entry on a pivot column.
    pub fn reduce(&self, v: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.reduce_full(v, None)
    }

    fn reduce_full(&self, mut v: SparseVec<F::Elem>, mut t: Option<&mut SparseVec<F::Elem>>) -> SparseVec<F::Elem> {
        let mut done: SparseVec<F::Elem> = Vec::new();
        loop {
            v = self.reduce_head(v, t.as_deref_mut());
            if v.is_empty() {
                return done;
            }
            // entries before the next pivot column are final
            let split = v
                .iter()
                .position(|(i, _)| self.pivots.contains_key(i))
                .unwrap_or(v.len());
            done.extend(v.drain(..split));
        }
    }

    pub fn contains(&self, v: &[(u32, F::Elem)]) -> bool {
        self.reduce(v.to_vec()).is_empty()
    }

    /// Adds `v` to the span. Returns `true` if it was independent.
    /// With tracking on, a dependent vector's relation is returned through
    /// [`Echelon::insert_tracked`] instead.
    pub fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        self.insert_tracked(v).is_ok()
    }

    /// Like [`Echelon::insert`]; on dependence returns the combination of
    /// inserted vectors (by insertion number) that vanishes.
    pub fn insert_tracked(&mut self, v: SparseVec<F::Elem>) -> Result<(), SparseVec<F::Elem>> {
        let k = self.field.clone();
        let id = self.inserted;
        self.inserted += 1;
        let mut t: SparseVec<F::Elem> = if self.track.is_some() {
            vec![(id, k.one())]
        } else {
            Vec::new()
        };
        let v = self.reduce_head(v, Some(&mut t));
        if v.is_empty() {
            return Err(t);
        }
        let inv = k.inv(&v[0].1).expect("nonzero head");
        let v = scale(&k, &v, &inv);
        self.pivots.insert(v[0].0, self.rows.len());
        self.rows.push(v);
        if let Some(track) = &mut self.track {
            track.push(scale(&k, &t, &inv));
        }
        Ok(())
    }
}

/// Rank of the span of `rows`.
pub fn rank<F: Field>(k: &F, rows: impl IntoIterator<Item = SparseVec<F::Elem>>) -> usize {
    let mut e = Echelon::new(k);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of the kernel of the map sending the `j`-th standard basis vector to
/// `images[j]`. Each kernel vector is expressed in source coordinates.
pub fn kernel<F: Field>(k: &F, images: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    let mut e = Echelon::tracking(k);
    let mut out = Vec::new();
    for v in images {
        if let Err(rel) = e.insert_tracked(v.clone()) {
            out.push(rel);
        }
    }
    out
}

/// Applies a map given by column images to a sparse source vector.
pub fn apply<F: Field>(k: &F, images: &[SparseVec<F::Elem>], v: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
    let mut acc = Vec::new();
    for (j, c) in v {
        for (i, x) in &images[*j as usize] {
            acc.push((*i, k.mul(c, x)));
        }
    }
    normalize(k, acc)
}

/// Rank of the matrix with the given sparse columns, `nrows` rows.
///
/// Over `GF(p)` with `p < 2^28` and enough entries this switches to a dense
/// blocked elimination; otherwise it uses [`Echelon`].
pub fn rank_of_columns<F: Field>(k: &F, nrows: usize, cols: &[SparseVec<F::Elem>]) -> usize {
    let ncols = cols.len();
    if nrows == 0 || ncols == 0 {
        return 0;
    }
    if let FieldDescriptor::PrimeField(p) = k.descriptor() {
        if p < (1 << 28) && nrows * ncols >= DENSE_THRESHOLD {
            // vectors of the shorter length
            let (count, len) = if nrows <= ncols { (ncols, nrows) } else { (nrows, ncols) };
            let mut m = vec![0u64; count * len];
            for (j, col) in cols.iter().enumerate() {
                for (i, x) in col {
                    let v = residue(k, x);
                    if nrows <= ncols {
                        m[j * len + *i as usize] = v;
                    } else {
                        m[*i as usize * len + j] = v;
                    }
                }
            }
            return dense_rank_mod(m, count, len, p);
        }
    }
    rank(k, cols.iter().cloned())
}

const DENSE_THRESHOLD: usize = 20_000;

fn residue<F: Field>(k: &F, x: &F::Elem) -> u64 {
    match k.to_scalar(x) {
        Scalar::Residue { value, .. } => value,
        Scalar::Rational(_) => unreachable!("prime field element"),
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Rank of `count` row vectors of length `len` stored row-major, entries in
/// `[0, p)`. Rows are processed in panels; pivots found in a panel are made
/// mutually reduced and then applied to all later rows in one sweep, with
/// reduction mod `p` deferred until an entry is read.
pub fn dense_rank_mod(mut m: Vec<u64>, count: usize, len: usize, p: u64) -> usize {
    const PANEL: usize = 32;
    assert!(p < (1 << 28), "modulus too large for deferred reduction");
    let step = PANEL as u128 * ((p - 1) as u128).pow(2);
    let mut bound = (p - 1) as u128;
    let mut rank = 0;
    let mut start = 0;
    let mut pivot_rows: Vec<u32> = Vec::with_capacity(PANEL * len);
    let mut pivot_cols: Vec<usize> = Vec::with_capacity(PANEL);
    while start < count && rank < len {
        let end = (start + PANEL).min(count);
        pivot_rows.clear();
        pivot_cols.clear();
        for r in start..end {
            let row = &mut m[r * len..(r + 1) * len];
            for x in row.iter_mut() {
                *x %= p;
            }
            // reduce by the pivots of this panel
            for (k, &c) in pivot_cols.iter().enumerate() {
                let f = row[c];
                if f != 0 {
                    let g = p - f;
                    let piv = &pivot_rows[k * len..(k + 1) * len];
                    for (x, y) in row.iter_mut().zip(piv) {
                        *x = (*x + g * *y as u64) % p;
                    }
                }
            }
            let Some(c) = row.iter().position(|&x| x != 0) else { continue };
            let inv = pow_mod(row[c], p - 2, p);
            let new: Vec<u32> = row.iter().map(|&x| (x * inv % p) as u32).collect();
            // keep earlier panel pivots reduced on the new pivot column
            for k in 0..pivot_cols.len() {
                let f = pivot_rows[k * len + c] as u64;
                if f != 0 {
                    let g = p - f;
                    for (x, y) in pivot_rows[k * len..(k + 1) * len].iter_mut().zip(&new) {
                        *x = ((*x as u64 + g * *y as u64) % p) as u32;
                    }
                }
            }
            pivot_rows.extend_from_slice(&new);
            pivot_cols.push(c);
        }
        rank += pivot_cols.len();
        if pivot_cols.is_empty() {
            start = end;
            continue;
        }
        let npiv = pivot_cols.len();
        if bound + step >= u64::MAX as u128 {
            for x in m[end * len..].iter_mut() {
                *x %= p;
            }
            bound = (p - 1) as u128;
        }
        bound += step;
        for r in end..count {
            let row = &mut m[r * len..(r + 1) * len];
            let mut factors = [0u64; PANEL];
            let mut any = false;
            for (f, &c) in factors.iter_mut().zip(&pivot_cols) {
                let v = row[c] % p;
                if v != 0 {
                    *f = p - v;
                    any = true;
                }
            }
            if !any {
                continue;
            }
            for k in 0..npiv {
                let g = factors[k];
                if g == 0 {
                    continue;
                }
                let piv = &pivot_rows[k * len..(k + 1) * len];
                for (x, y) in row.iter_mut().zip(piv) {
                    *x += g * *y as u64;
                }
            }
        }
        start = end;
    }
    rank.min(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn q(v: &[i64]) -> SparseVec<num_rational::BigRational> {
        let k = Rationals;
        normalize(&k, v.iter().enumerate().map(|(i, x)| (i as u32, k.from_i64(*x))).collect())
    }

    #[test]
    fn rank_and_kernel() {
        let k = Rationals;
        let cols = vec![q(&[1, 2, 3]), q(&[2, 4, 6]), q(&[0, 1, 1]), q(&[1, 3, 4])];
        assert_eq!(rank(&k, cols.clone()), 2);
        let ker = kernel(&k, &cols);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(apply(&k, &cols, v).is_empty());
        }
    }

    #[test]
    fn reduce_is_canonical() {
        let k = Rationals;
        let mut e = Echelon::new(&k);
        e.insert(q(&[1, 1, 0]));
        e.insert(q(&[0, 1, 1]));
        let a = e.reduce(q(&[0, 0, 1]));
        let b = e.reduce(q(&[1, 0, 0]));
        assert_eq!(a, b);
        assert!(e.contains(&q(&[1, 2, 1])));
        assert!(!e.contains(&q(&[0, 0, 1])) || e.rank() == 3);
    }

    fn dense_rank(rows: &[Vec<u64>], p: u64) -> usize {
        // plain Gaussian elimination as an independent oracle
        let mut m: Vec<Vec<u64>> = rows.to_vec();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..ncols {
            let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, piv);
            let k = PrimeField::new(p).unwrap();
            let inv = k.inv(&m[r][c]).unwrap();
            for i in 0..m.len() {
                if i != r && m[i][c] != 0 {
                    let f = k.mul(&m[i][c], &inv);
                    for j in 0..ncols {
                        m[i][j] = k.sub(&m[i][j], &k.mul(&f, &m[r][j]));
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn dense_kernel_large_modulus() {
        use rand::{Rng, SeedableRng};
        let p = (1u64 << 27..1 << 28).rev().find(|&q| crate::field::is_prime(q)).unwrap();
        let k = PrimeField::new(p).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        // 600 rows of length 40 spanning a 25-dimensional space
        let basis: Vec<Vec<u64>> = (0..25).map(|_| (0..40).map(|_| rng.gen_range(0..p)).collect()).collect();
        let rows: Vec<Vec<u64>> = (0..600)
            .map(|_| {
                let mut r = vec![0u64; 40];
                for b in &basis {
                    let c = rng.gen_range(0..p);
                    for (x, y) in r.iter_mut().zip(b) {
                        *x = k.add(x, &k.mul(&c, y));
                    }
                }
                r
            })
            .collect();
        let flat: Vec<u64> = rows.iter().flatten().copied().collect();
        assert_eq!(dense_rank_mod(flat, 600, 40, p), 25);
        let cols: Vec<SparseVec<u64>> = rows.iter().map(|r| normalize(&k, r.iter().enumerate().map(|(i, x)| (i as u32, *x)).collect())).collect();
        assert_eq!(rank_of_columns(&k, 40, &cols), 25);
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(rows in proptest::collection::vec(proptest::collection::vec(0u64..5, 6), 1..8)) {
            let k = PrimeField::new(5).unwrap();
            let sparse: Vec<_> = rows.iter().map(|r| normalize(&k, r.iter().enumerate().map(|(i, x)| (i as u32, *x)).collect())).collect();
            prop_assert_eq!(rank(&k, sparse.clone()), dense_rank(&rows, 5));
            let ker = kernel(&k, &sparse);
            prop_assert_eq!(ker.len() + rank(&k, sparse.clone()), rows.len());
            for v in &ker { prop_assert!(apply(&k, &sparse, v).is_empty()); }
        }

        #[test]
        fn dense_kernel_matches_oracle(rows in proptest::collection::vec(proptest::collection::vec(0u64..7, 1..90), 1..90), width in 1usize..90) {
            let p = 7;
            let rows: Vec<Vec<u64>> = rows.into_iter().map(|mut r| { r.resize(width, 0); r }).collect();
            let flat: Vec<u64> = rows.iter().flatten().copied().collect();
            prop_assert_eq!(dense_rank_mod(flat, rows.len(), width, p), dense_rank(&rows, p));
        }
    }
}
