//! Subspaces of PG(N,q) in canonical reduced-row-echelon form.
//!
//! Two subspaces are equal exactly when their canonical bases are equal, so
//! [`Subspace`] derives `Eq`, `Hash` and `Ord` from the basis bytes. The empty
//! subspace has no rows and projective dimension −1.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{param, Error, Result};
use crate::gf::{Felt, FieldCtx};
use crate::linalg;

/// Default cap on the number of subspaces any single enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A vector of PG(N,q) coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PVector(pub Vec<Felt>);

impl PVector {
    pub fn from_values(field: &FieldCtx, values: &[u8]) -> Result<Self> {
        values
            .iter()
            .map(|&v| field.elem(v))
            .collect::<Result<Vec<_>>>()
            .map(PVector)
    }

    /// Unit vector `e_i` of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![Felt::ZERO; len];
        v[i] = Felt::ONE;
        PVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn coords(&self) -> &[Felt] {
        &self.0
    }

    /// Scales so the first nonzero coordinate is 1. Zero vectors are returned unchanged.
    pub fn normalized(&self, field: &FieldCtx) -> PVector {
        let mut v = self.0.clone();
        if let Some(lead) = v.iter().find(|x| !x.is_zero()).copied() {
            field.scale(&mut v, field.inv_nz(lead));
        }
        PVector(v)
    }

    pub fn add(&self, field: &FieldCtx, other: &PVector) -> PVector {
        PVector(self.0.iter().zip(&other.0).map(|(&a, &b)| field.add(a, b)).collect())
    }
}

/// A projective subspace, stored as its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Felt>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(pdim {}; ", self.pdim())?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            for x in row {
                write!(f, "{}", x.0)?;
            }
        }
        write!(f, ")")
    }
}

impl Subspace {
    /// Projective dimension N of the ambient PG(N,q).
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn width(&self) -> usize {
        self.ambient + 1
    }

    /// Vector-space dimension (number of basis rows).
    pub fn rank(&self) -> usize {
        self.rows.len() / self.width()
    }

    /// Projective dimension; −1 for the empty subspace.
    pub fn pdim(&self) -> i32 {
        self.rank() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Flat row-major canonical basis.
    pub fn basis(&self) -> &[Felt] {
        &self.rows
    }

    pub fn rows(&self) -> std::slice::Chunks<'_, Felt> {
        self.rows.chunks(self.ambient + 1)
    }

    pub fn row_vectors(&self) -> Vec<PVector> {
        self.rows().map(|r| PVector(r.to_vec())).collect()
    }

    /// Canonical basis as raw field indices, row-major.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.rows.iter().map(|x| x.0).collect()
    }

    pub(crate) fn from_canonical(ambient: usize, rows: Vec<Felt>) -> Self {
        debug_assert_eq!(rows.len() % (ambient + 1), 0);
        Subspace { ambient, rows }
    }
}

/// PG(N,q) together with its field and enumeration cap.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: FieldCtx,
    dim: usize,
    cap: u64,
}

impl ProjectiveSpace {
    pub fn new(field: FieldCtx, dim: usize) -> Self {
        ProjectiveSpace {
            field,
            dim,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> usize {
        self.dim + 1
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn check(&self, s: &Subspace) -> Result<()> {
        if s.ambient != self.dim {
            return Err(Error::AmbientMismatch {
                expected: self.dim,
                found: s.ambient,
            });
        }
        Ok(())
    }

    pub fn empty(&self) -> Subspace {
        Subspace::from_canonical(self.dim, Vec::new())
    }

    pub fn full(&self) -> Subspace {
        let w = self.width();
        let mut rows = vec![Felt::ZERO; w * w];
        for i in 0..w {
            rows[i * w + i] = Felt::ONE;
        }
        Subspace::from_canonical(self.dim, rows)
    }

    /// Span of the unit vectors `e_i`, `i ∈ idx`.
    pub fn coordinate_subspace(&self, idx: &[usize]) -> Subspace {
        let rows: Vec<PVector> = idx.iter().map(|&i| PVector::unit(self.width(), i)).collect();
        self.canonicalize(&rows).expect("unit vectors have the ambient width")
    }

    /// Canonical subspace spanned by the given vectors.
    pub fn canonicalize(&self, rows: &[PVector]) -> Result<Subspace> {
        let w = self.width();
        let mut flat = Vec::with_capacity(rows.len() * w);
        for r in rows {
            if r.len() != w {
                return param(format!("row of length {} in PG({},q), expected {}", r.len(), self.dim, w));
            }
            flat.extend_from_slice(&r.0);
        }
        Ok(self.from_flat(flat))
    }

    /// Canonical subspace spanned by flat row-major rows of the ambient width.
    pub fn from_flat(&self, mut flat: Vec<Felt>) -> Subspace {
        linalg::rref(&self.field, self.width(), &mut flat);
        Subspace::from_canonical(self.dim, flat)
    }

    pub fn point(&self, v: &PVector) -> Result<Subspace> {
        if v.is_zero() {
            return param("the zero vector is not a projective point");
        }
        self.canonicalize(std::slice::from_ref(v))
    }

    pub fn span(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        self.check(a)?;
        self.check(b)?;
        let mut flat = a.rows.clone();
        flat.extend_from_slice(&b.rows);
        Ok(self.from_flat(flat))
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self, a: &Subspace) -> Result<Subspace> {
        self.check(a)?;
        let ns = linalg::null_space(&self.field, self.width(), &a.rows);
        Ok(self.from_flat(ns))
    }

    pub fn intersect(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        // (a ∩ b) = ann(ann(a) + ann(b))
        let aa = self.annihilator(a)?;
        let ab = self.annihilator(b)?;
        let sum = self.span(&aa, &ab)?;
        self.annihilator(&sum)
    }

    /// True iff `a` and `b` share a projective point.
    pub fn meets(&self, a: &Subspace, b: &Subspace) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(linalg::rowspaces_meet(&self.field, self.width(), &a.rows, &b.rows))
    }

    /// Projective dimension of `a ∩ b` via the dimension formula.
    pub fn meet_pdim(&self, a: &Subspace, b: &Subspace) -> Result<i32> {
        self.check(a)?;
        self.check(b)?;
        let mut flat = a.rows.clone();
        flat.extend_from_slice(&b.rows);
        let span_rank = linalg::rank(&self.field, self.width(), &flat);
        Ok((a.rank() + b.rank()) as i32 - span_rank as i32 - 1)
    }

    /// True iff `inner ⊆ outer`.
    pub fn contains(&self, outer: &Subspace, inner: &Subspace) -> Result<bool> {
        Ok(self.meet_pdim(inner, outer)? == inner.pdim())
    }

    pub fn contains_vector(&self, s: &Subspace, v: &PVector) -> Result<bool> {
        self.check(s)?;
        let mut flat = s.rows.clone();
        flat.extend_from_slice(&v.0);
        Ok(linalg::rank(&self.field, self.width(), &flat) == s.rank())
    }

    /// Number of `d`-spaces inside `ambient`, as a Gaussian binomial.
    pub fn count_subspaces(&self, ambient: &Subspace, d: i32) -> BigInt {
        gauss_binom(ambient.rank() as i64, d as i64 + 1, self.field.q() as u64)
            .expect("field order is at least 2")
    }

    /// RREF pivot patterns for `d`-spaces of an ambient of vector dimension
    /// `r`, in lexicographic order. Each pattern indexes an independent slice of
    /// the enumeration.
    pub fn pivot_patterns(r: usize, d: i32) -> Vec<Vec<usize>> {
        let s = (d + 1) as usize;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(s);
        fn rec(start: usize, r: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == s {
                out.push(cur.clone());
                return;
            }
            for c in start..=(r - (s - cur.len())) {
                cur.push(c);
                rec(c + 1, r, s, cur, out);
                cur.pop();
            }
        }
        if s <= r {
            rec(0, r, s, &mut cur, &mut out);
        }
        out
    }

    /// All `d`-spaces of `ambient` with the given coefficient pivot pattern.
    pub fn enumerate_pattern(&self, ambient: &Subspace, pattern: &[usize]) -> Vec<Subspace> {
        let r = ambient.rank();
        let s = pattern.len();
        let w = self.width();
        let q = self.field.q() as u8;
        let mut is_pivot = vec![false; r];
        for &p in pattern {
            is_pivot[p] = true;
        }
        // free slots (row, col) in the s×r coefficient matrix
        let free: Vec<(usize, usize)> = pattern
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| ((p + 1)..r).filter(|&c| !is_pivot[c]).map(move |c| (i, c)))
            .collect();
        let mut coeff = vec![Felt::ZERO; s * r];
        for (i, &p) in pattern.iter().enumerate() {
            coeff[i * r + p] = Felt::ONE;
        }
        let mut digits = vec![0u8; free.len()];
        let mut out = Vec::new();
        loop {
            for (&(i, c), &d) in free.iter().zip(&digits) {
                coeff[i * r + c] = Felt(d);
            }
            let mut flat = vec![Felt::ZERO; s * w];
            for i in 0..s {
                for (j, brow) in ambient.rows().enumerate() {
                    let c = coeff[i * r + j];
                    if !c.is_zero() {
                        self.field.axpy(&mut flat[i * w..(i + 1) * w], c, brow);
                    }
                }
            }
            out.push(self.from_flat(flat));
            // odometer, last slot fastest
            let mut k = digits.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < q {
                    break;
                }
                digits[k] = 0;
            }
        }
    }

    /// Every `d`-space contained in `ambient`, each exactly once, in a fixed order.
    pub fn enumerate_subspaces(&self, ambient: &Subspace, d: i32) -> Result<Vec<Subspace>> {
        self.check(ambient)?;
        if d < -1 || d > ambient.pdim() {
            return param(format!("subspace dimension {d} outside -1..={}", ambient.pdim()));
        }
        let total = self.count_subspaces(ambient, d);
        if total > BigInt::from(self.cap) {
            return Err(Error::Infeasible {
                what: format!("{d}-spaces of a {}-space over GF({})", ambient.pdim(), self.field.q()),
                size: total.to_string(),
                cap: self.cap,
            });
        }
        if d == -1 {
            return Ok(vec![self.empty()]);
        }
        Ok(Self::pivot_patterns(ambient.rank(), d)
            .iter()
            .flat_map(|pat| self.enumerate_pattern(ambient, pat))
            .collect())
    }

    /// Calls `f` once per projective point of the row space of `basis`, which
    /// must be in RREF. Each vector passed is normalized (leading entry 1).
    pub fn for_each_point_of(&self, basis: &[Felt], mut f: impl FnMut(&[Felt])) {
        let w = self.width();
        let r = basis.len() / w;
        let q = self.field.q() as u8;
        let mut v = vec![Felt::ZERO; w];
        for lead in 0..r {
            // coefficient 1 on row `lead`, zeros before, free digits after
            let tail = r - lead - 1;
            let mut digits = vec![0u8; tail];
            loop {
                v.copy_from_slice(&basis[lead * w..(lead + 1) * w]);
                for (t, &d) in digits.iter().enumerate() {
                    if d != 0 {
                        let row = lead + 1 + t;
                        self.field.axpy(&mut v, Felt(d), &basis[row * w..(row + 1) * w]);
                    }
                }
                f(&v);
                let mut k = tail;
                let done = loop {
                    if k == 0 {
                        break true;
                    }
                    k -= 1;
                    digits[k] += 1;
                    if digits[k] < q {
                        break false;
                    }
                    digits[k] = 0;
                };
                if done {
                    break;
                }
            }
        }
    }

    /// All points of PG(N,q).
    pub fn points(&self) -> Result<Vec<Subspace>> {
        self.enumerate_subspaces(&self.full(), 0)
    }
}

fn big_pow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// Gaussian binomial `[n choose k]_q`: the number of `k`-dimensional vector
/// subspaces of GF(q)^n. Zero when `k < 0` or `k > n`.
pub fn gauss_binom(n: i64, k: i64, q: u64) -> Result<BigInt> {
    if q < 2 {
        return param(format!("Gaussian binomial needs q >= 2, got {q}"));
    }
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc *= big_pow(q, (n + 1 - i) as u64) - 1;
        let den = big_pow(q, i as u64) - 1;
        let (quo, rem) = acc.div_rem(&den);
        assert!(rem.is_zero(), "inexact Gaussian binomial step");
        acc = quo;
    }
    Ok(acc)
}

/// Counts `j`-spaces of PG(n,q) skew to the coordinate `k`-space `⟨e_0..e_k⟩`
/// by direct enumeration.
pub fn count_skew_subspaces_oracle(n: usize, k: usize, j: usize, q: u32, cap: u64) -> Result<BigInt> {
    if k > n || j > n {
        return param(format!("need 0 <= k, j <= n, got n={n} k={k} j={j}"));
    }
    let space = ProjectiveSpace::new(FieldCtx::new(q)?, n).with_cap(cap);
    let fixed = space.coordinate_subspace(&(0..=k).collect::<Vec<_>>());
    let all = space.enumerate_subspaces(&space.full(), j as i32)?;
    let mut count = 0u64;
    for s in &all {
        if !space.meets(&fixed, s)? {
            count += 1;
        }
    }
    Ok(BigInt::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(n: usize, q: u32) -> ProjectiveSpace {
        ProjectiveSpace::new(FieldCtx::new(q).unwrap(), n)
    }

    fn vecs(space: &ProjectiveSpace, rows: &[&[u8]]) -> Vec<PVector> {
        rows.iter()
            .map(|r| PVector::from_values(space.field(), r).unwrap())
            .collect()
    }

    /// Gaussian binomial via the q-Pascal recurrence.
    fn gauss_pascal(n: i64, k: i64, q: u64) -> BigInt {
        if k < 0 || k > n {
            return BigInt::zero();
        }
        if k == 0 || k == n {
            return BigInt::one();
        }
        gauss_pascal(n - 1, k - 1, q) + big_pow(q, k as u64) * gauss_pascal(n - 1, k, q)
    }

    #[test]
    fn canonicalize_edge_cases() {
        let s = pg(5, 3);
        let e = s.canonicalize(&[]).unwrap();
        assert_eq!(e.pdim(), -1);
        let v = vecs(&s, &[&[0, 2, 1, 0, 0, 1]]);
        let p = s.canonicalize(&[v[0].clone(), v[0].clone()]).unwrap();
        assert_eq!(p.pdim(), 0);
        assert_eq!(p.basis()[1], Felt::ONE);
        let bad = vecs(&s, &[&[1, 0, 0]]);
        assert!(s.canonicalize(&bad).is_err());
    }

    #[test]
    fn invertible_matrix_spans_everything() {
        let s = pg(3, 5);
        let rows = vecs(&s, &[&[0, 0, 0, 2], &[0, 0, 3, 1], &[0, 4, 1, 1], &[1, 2, 0, 0]]);
        assert_eq!(s.canonicalize(&rows).unwrap(), s.full());
    }

    #[test]
    fn two_lines_through_a_point() {
        let s = pg(3, 2);
        let l1 = s.canonicalize(&vecs(&s, &[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        let l2 = s.canonicalize(&vecs(&s, &[&[1, 0, 0, 0], &[0, 0, 1, 0]])).unwrap();
        let p = s.intersect(&l1, &l2).unwrap();
        assert_eq!(p, s.coordinate_subspace(&[0]));
        assert_eq!(s.span(&l1, &l2).unwrap().pdim(), 2);
        assert_eq!(s.intersect(&l1, &l1).unwrap(), l1);
        assert!(s.meets(&l1, &l2).unwrap());
    }

    #[test]
    fn complementary_planes_are_skew() {
        for q in [2, 3, 4] {
            let s = pg(5, q);
            let a = s.coordinate_subspace(&[0, 1, 2]);
            let b = s.coordinate_subspace(&[3, 4, 5]);
            assert!(!s.meets(&a, &b).unwrap());
            assert_eq!(s.meet_pdim(&a, &b).unwrap(), -1);
        }
    }

    #[test]
    fn gauss_binom_values() {
        assert_eq!(gauss_binom(3, 1, 2).unwrap(), BigInt::from(7));
        assert_eq!(gauss_binom(4, 2, 2).unwrap(), BigInt::from(35));
        assert_eq!(gauss_binom(4, 2, 3).unwrap(), BigInt::from(130));
        assert_eq!(gauss_binom(7, 0, 5).unwrap(), BigInt::one());
        assert_eq!(gauss_binom(3, 4, 2).unwrap(), BigInt::zero());
        assert_eq!(gauss_binom(3, -1, 2).unwrap(), BigInt::zero());
        assert!(gauss_binom(3, 1, 1).is_err());
        for q in 2..=9 {
            for n in 0..=9 {
                for k in -1..=n + 1 {
                    assert_eq!(gauss_binom(n, k, q).unwrap(), gauss_pascal(n, k, q), "[{n} {k}]_{q}");
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_gauss_binom() {
        for n in 0..=5usize {
            for q in [2u32, 3, 4] {
                if n == 5 && q == 4 {
                    continue; // 4^9-ish lines; covered by the acceptance-scale run
                }
                let s = pg(n, q);
                for d in -1..=n as i32 {
                    let all = s.enumerate_subspaces(&s.full(), d).unwrap();
                    assert_eq!(BigInt::from(all.len()), s.count_subspaces(&s.full(), d), "PG({n},{q}) d={d}");
                    let mut sorted = all.clone();
                    sorted.sort();
                    sorted.dedup();
                    assert_eq!(sorted.len(), all.len());
                    assert!(all.iter().all(|x| x.pdim() == d));
                }
            }
        }
    }

    #[test]
    fn enumeration_inside_a_subspace() {
        let s = pg(4, 3);
        let amb = s
            .canonicalize(&vecs(&s, &[&[1, 1, 0, 2, 0], &[0, 1, 1, 0, 1], &[2, 0, 0, 1, 1]]))
            .unwrap();
        for d in 0..=2 {
            let subs = s.enumerate_subspaces(&amb, d).unwrap();
            assert_eq!(BigInt::from(subs.len()), gauss_binom(3, d as i64 + 1, 3).unwrap());
            for x in &subs {
                assert!(s.contains(&amb, x).unwrap());
            }
        }
        assert_eq!(s.enumerate_subspaces(&amb, 2).unwrap(), vec![amb.clone()]);
        assert!(s.enumerate_subspaces(&amb, 3).is_err());
    }

    #[test]
    fn enumeration_cap() {
        let s = pg(5, 3).with_cap(100);
        assert!(matches!(s.enumerate_subspaces(&s.full(), 1), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn skew_oracle_examples() {
        assert_eq!(count_skew_subspaces_oracle(2, 0, 1, 2, DEFAULT_ENUMERATION_CAP).unwrap(), BigInt::from(4));
        assert_eq!(count_skew_subspaces_oracle(3, 0, 1, 2, DEFAULT_ENUMERATION_CAP).unwrap(), BigInt::from(28));
        for k in 0..=3 {
            assert!(count_skew_subspaces_oracle(3, k, 3, 3, DEFAULT_ENUMERATION_CAP).unwrap().is_zero());
        }
    }
}
