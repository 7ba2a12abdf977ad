//! The hyperbolic quadric Q+(2m+1,q) with the standard form
//! `Q(x) = x0·x1 + x2·x3 + … + x_{2m}·x_{2m+1}` and its generators.

pub mod cache;
pub mod oracle;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::formulas;
use crate::gf::{Felt, FieldCtx};
use crate::linalg;
use crate::projgeom::{PVector, ProjectiveSpace, Subspace};

/// Default cap on the number of generators an enumeration may produce.
pub const DEFAULT_GENERATOR_CAP: u64 = 20_000;

/// Class bit of a generator: 0 for the class of the reference generator
/// `⟨e0, e2, …, e2m⟩`, 1 for the other class.
pub type ClassLabel = u8;

/// The standard hyperbolic quadric in PG(2m+1,q).
#[derive(Clone, Debug)]
pub struct QuadricModel {
    m: usize,
    space: ProjectiveSpace,
}

impl QuadricModel {
    pub fn new(m: usize, q: u32) -> Result<Self> {
        Ok(Self::with_field(m, FieldCtx::new(q)?))
    }

    pub fn with_field(m: usize, field: FieldCtx) -> Self {
        QuadricModel {
            m,
            space: ProjectiveSpace::new(field, 2 * m + 1),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.space.field().q()
    }

    pub fn field(&self) -> &FieldCtx {
        self.space.field()
    }

    pub fn space(&self) -> &ProjectiveSpace {
        &self.space
    }

    fn check_len(&self, v: &[Felt]) -> Result<()> {
        if v.len() != self.space.width() {
            return param(format!("vector of length {} on Q+({},q)", v.len(), self.space.dim()));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn form_raw(&self, x: &[Felt]) -> Felt {
        let f = self.field();
        x.chunks_exact(2)
            .fold(Felt::ZERO, |acc, p| f.add(acc, f.mul(p[0], p[1])))
    }

    #[inline]
    pub(crate) fn bilin_raw(&self, x: &[Felt], y: &[Felt]) -> Felt {
        let f = self.field();
        x.chunks_exact(2).zip(y.chunks_exact(2)).fold(Felt::ZERO, |acc, (a, b)| {
            f.add(acc, f.add(f.mul(a[0], b[1]), f.mul(a[1], b[0])))
        })
    }

    pub fn eval_form(&self, v: &PVector) -> Result<Felt> {
        self.check_len(v.coords())?;
        Ok(self.form_raw(v.coords()))
    }

    /// Polarization `b(u,v) = Q(u+v) − Q(u) − Q(v)`.
    pub fn bilin(&self, u: &PVector, v: &PVector) -> Result<Felt> {
        self.check_len(u.coords())?;
        self.check_len(v.coords())?;
        Ok(self.bilin_raw(u.coords(), v.coords()))
    }

    fn check_ambient(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.space.dim() {
            return Err(Error::AmbientMismatch {
                expected: self.space.dim(),
                found: s.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Q vanishes on every point of `s`. Checked on basis rows plus pairwise
    /// polarization, which is exact in every characteristic.
    pub fn is_singular_subspace(&self, s: &Subspace) -> Result<bool> {
        self.check_ambient(s)?;
        let rows: Vec<&[Felt]> = s.rows().collect();
        for (i, r) in rows.iter().enumerate() {
            if !self.form_raw(r).is_zero() {
                return Ok(false);
            }
            for r2 in &rows[i + 1..] {
                if !self.bilin_raw(r, r2).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `{x : b(x, s) = 0}` for any subspace `s`.
    pub fn perp(&self, s: &Subspace) -> Result<Subspace> {
        self.check_ambient(s)?;
        // b(x, y) = x · J y, where J swaps each coordinate pair
        let mut swapped: Vec<Felt> = s.basis().to_vec();
        for pair in swapped.chunks_exact_mut(2) {
            pair.swap(0, 1);
        }
        let js = self.space.from_flat(swapped);
        self.space.annihilator(&js)
    }

    /// Tangent space at a totally singular subspace: its perp, of projective
    /// dimension `2m − pdim(s)`.
    pub fn tangent_space(&self, s: &Subspace) -> Result<Subspace> {
        if !self.is_singular_subspace(s)? {
            return Err(Error::NotSingular);
        }
        self.perp(s)
    }

    /// `⟨e0, e2, …, e2m⟩`, the generator defining class 0.
    pub fn reference_generator(&self) -> Subspace {
        let idx: Vec<usize> = (0..=self.m).map(|i| 2 * i).collect();
        self.space.coordinate_subspace(&idx)
    }

    /// `⟨e0, e2, …, e2k⟩`, a singular `k`-space inside the reference generator.
    pub fn reference_subspace(&self, k: i32) -> Result<Subspace> {
        if k < -1 || k > self.m as i32 {
            return param(format!("no singular {k}-space in Q+({},{})", 2 * self.m + 1, self.q()));
        }
        let idx: Vec<usize> = (0..=k).map(|i| 2 * i as usize).collect();
        Ok(self.space.coordinate_subspace(&idx))
    }

    /// The reference generator with its last `swaps` basis vectors e_{2i}
    /// replaced by e_{2i+1}. It meets the reference generator in an
    /// `(m − swaps)`-space and has class `swaps mod 2`.
    pub fn swapped_generator(&self, swaps: usize) -> Result<Subspace> {
        if swaps > self.m + 1 {
            return param(format!("cannot swap {swaps} of {} basis vectors", self.m + 1));
        }
        let idx: Vec<usize> = (0..=self.m)
            .map(|i| if i + swaps > self.m { 2 * i + 1 } else { 2 * i })
            .collect();
        Ok(self.space.coordinate_subspace(&idx))
    }

    /// All singular points, in canonical order.
    pub fn singular_points(&self) -> Result<Vec<Subspace>> {
        let full = self.space.full();
        let mut out = Vec::new();
        self.space.for_each_point_of(full.basis(), |v| {
            if self.form_raw(v).is_zero() {
                out.push(self.space.from_flat(v.to_vec()));
            }
        });
        out.sort();
        Ok(out)
    }

    /// Totally singular extensions of `s` by one dimension.
    fn extensions(&self, s: &Subspace, out: &mut impl FnMut(Subspace)) -> Result<()> {
        let w = self.space.width();
        let perp = self.perp(s)?;
        // reduce the perp against s so that only representatives of perp/s remain
        let pivots = linalg::pivots(w, s.basis());
        let mut comp: Vec<Felt> = perp.basis().to_vec();
        for row in comp.chunks_mut(w) {
            for (srow, &p) in s.rows().zip(&pivots) {
                let c = row[p];
                if !c.is_zero() {
                    self.field().axpy(row, self.field().neg(c), srow);
                }
            }
        }
        linalg::rref(self.field(), w, &mut comp);
        self.space.for_each_point_of(&comp, |x| {
            if self.form_raw(x).is_zero() {
                let mut flat = s.basis().to_vec();
                flat.extend_from_slice(x);
                out(self.space.from_flat(flat));
            }
        });
        Ok(())
    }

    /// Every totally singular `k`-space, `−1 ≤ k ≤ m`, in canonical order.
    /// Built level by level: each singular `(i+1)`-space is a singular
    /// `i`-space extended by a singular point of its perp.
    pub fn enumerate_singular(&self, k: i32, cap: u64) -> Result<Vec<Subspace>> {
        if k < -1 || k > self.m as i32 {
            return param(format!("singular subspaces of Q+({},q) have dimension -1..={}", self.space.dim(), self.m));
        }
        let mut level = vec![self.space.empty()];
        for _ in 0..=k {
            let next: HashSet<Subspace> = level
                .par_iter()
                .map(|s| {
                    let mut found = Vec::new();
                    self.extensions(s, &mut |t| found.push(t))?;
                    Ok(found)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            if next.len() as u64 > cap {
                return Err(Error::Infeasible {
                    what: format!("singular subspaces of Q+({},{})", self.space.dim(), self.q()),
                    size: format!(">{}", next.len()),
                    cap,
                });
            }
            level = next.into_iter().collect();
            level.sort();
        }
        Ok(level)
    }

    /// Complete generator list with class labels.
    pub fn enumerate_generators(&self, cap: u64) -> Result<GeneratorSet> {
        let expected = formulas::num_generators(self.m as u32, self.q() as u64);
        if expected > BigInt::from(cap) {
            return Err(Error::Infeasible {
                what: format!("generators of Q+({},{})", self.space.dim(), self.q()),
                size: expected.to_string(),
                cap,
            });
        }
        // intermediate levels can exceed the generator count by a small factor
        let gens = self.enumerate_singular(self.m as i32, cap.saturating_mul(64))?;
        GeneratorSet::from_generators(self.clone(), gens)
    }

    /// Class label of a generator relative to the reference generator.
    pub fn class_of(&self, g: &Subspace) -> Result<ClassLabel> {
        let d = self.space.meet_pdim(g, &self.reference_generator())?;
        Ok(if (d - self.m as i32).rem_euclid(2) == 0 { 0 } else { 1 })
    }
}

/// Largest vector universe, in bits, for which generators carry vector sets.
const MAX_VECSET_BITS: u64 = 1 << 18;

/// Bitset of every vector in the row space of `g`, vectors indexed by their
/// base-q digits.
fn vector_set(field: &FieldCtx, g: &Subspace, words: usize) -> Vec<u64> {
    let q = field.q() as usize;
    let width = g.width();
    let rows: Vec<&[Felt]> = g.rows().collect();
    let mut set = vec![0u64; words];
    let mut coeffs = vec![0u8; rows.len()];
    let mut v = vec![Felt::ZERO; width];
    loop {
        let idx = v.iter().rev().fold(0usize, |acc, x| acc * q + x.value() as usize);
        set[idx / 64] |= 1 << (idx % 64);
        let mut k = 0;
        loop {
            if k == rows.len() {
                return set;
            }
            let old = Felt(coeffs[k]);
            coeffs[k] = (coeffs[k] + 1) % q as u8;
            let delta = field.sub(Felt(coeffs[k]), old);
            field.axpy(&mut v, delta, rows[k]);
            if coeffs[k] != 0 {
                break;
            }
            k += 1;
        }
    }
}

/// Exact `log_q(x)` for a power of `q`.
fn ilog(x: u64, q: u64) -> u32 {
    let e = x.ilog(q);
    debug_assert_eq!(q.pow(e), x);
    e
}

/// Pairwise intersection dimensions for every ordered pair of generators.
#[derive(Clone, Debug)]
pub struct IntersectionTable {
    n: usize,
    pdims: Vec<i8>,
}

impl IntersectionTable {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.pdims[i * self.n + j] as i32
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i8] {
        &self.pdims[i * self.n..(i + 1) * self.n]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// All generators of a quadric, with class labels and an index from
/// canonical subspace to position.
#[derive(Debug)]
pub struct GeneratorSet {
    model: QuadricModel,
    gens: Vec<Subspace>,
    labels: Vec<ClassLabel>,
    index: HashMap<Subspace, usize>,
    /// Per generator, a bitset over all vectors of GF(q)^{2m+2} marking the
    /// vectors it contains; empty when the ambient is too large.
    vecsets: Vec<u64>,
    words: usize,
    table: OnceLock<IntersectionTable>,
}

impl GeneratorSet {
    /// Wraps a generator list, sorting it into canonical order and checking
    /// that every entry is a totally singular `m`-space without duplicates.
    pub fn from_generators(model: QuadricModel, mut gens: Vec<Subspace>) -> Result<Self> {
        gens.sort();
        gens.dedup();
        for g in &gens {
            if g.pdim() != model.m as i32 || !model.is_singular_subspace(g)? {
                return param("generator list contains a subspace that is not a generator");
            }
        }
        let labels = gens
            .iter()
            .map(|g| model.class_of(g))
            .collect::<Result<Vec<_>>>()?;
        let index = gens.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let width = model.space.width() as u32;
        let universe = (model.q() as u64).checked_pow(width).filter(|&u| u <= MAX_VECSET_BITS);
        let (vecsets, words) = match universe {
            Some(u) => {
                let words = (u as usize).div_ceil(64);
                let sets: Vec<Vec<u64>> = gens
                    .par_iter()
                    .map(|g| vector_set(model.field(), g, words))
                    .collect();
                (sets.concat(), words)
            }
            None => (Vec::new(), 0),
        };
        Ok(GeneratorSet {
            model,
            gens,
            labels,
            index,
            vecsets,
            words,
            table: OnceLock::new(),
        })
    }

    pub fn model(&self) -> &QuadricModel {
        &self.model
    }

    pub fn m(&self) -> usize {
        self.model.m
    }

    pub fn q(&self) -> u32 {
        self.model.q()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Subspace] {
        &self.gens
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.gens[i]
    }

    pub fn label(&self, i: usize) -> ClassLabel {
        self.labels[i]
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn position(&self, g: &Subspace) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn require(&self, g: &Subspace) -> Result<usize> {
        self.position(g).ok_or(Error::UnknownGenerator)
    }

    /// Indices of the generators in class `c`.
    pub fn class_members(&self, c: ClassLabel) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == c).collect()
    }

    fn compute_pdim(&self, i: usize, j: usize) -> i32 {
        if self.words > 0 {
            let w = self.words;
            let a = &self.vecsets[i * w..(i + 1) * w];
            let b = &self.vecsets[j * w..(j + 1) * w];
            // the common vectors form a subspace of q^rank elements
            let common: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
            return ilog(common as u64, self.model.q() as u64) as i32 - 1;
        }
        self.model
            .space
            .meet_pdim(&self.gens[i], &self.gens[j])
            .expect("generators share the ambient")
    }

    /// Intersection dimensions for all pairs, computed once in parallel.
    pub fn intersection_table(&self) -> &IntersectionTable {
        self.table.get_or_init(|| {
            let n = self.len();
            let mut pdims = vec![0i8; n * n];
            pdims.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = self.compute_pdim(i, j) as i8;
                }
            });
            IntersectionTable { n, pdims }
        })
    }

    #[inline]
    pub fn meet_pdim(&self, i: usize, j: usize) -> i32 {
        match self.table.get() {
            Some(t) => t.get(i, j),
            None => self.compute_pdim(i, j),
        }
    }

    #[inline]
    pub fn meets(&self, i: usize, j: usize) -> bool {
        self.meet_pdim(i, j) >= 0
    }

    /// Projective dimension of `gens[i] ∩ s` for an arbitrary subspace `s`.
    pub fn meet_pdim_with(&self, i: usize, s: &Subspace) -> Result<i32> {
        self.model.space.meet_pdim(&self.gens[i], s)
    }

    /// Indices of the generators containing `s`.
    pub fn generators_through(&self, s: &Subspace) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            if self.meet_pdim_with(i, s)? == s.pdim() {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// How many generators meet `pivot` in exactly a `j`-space, for each
    /// `j ∈ {−1, …, m}`.
    pub fn intersection_profile(&self, pivot: &Subspace) -> Result<BTreeMap<i32, usize>> {
        let p = self.require(pivot)?;
        let mut profile: BTreeMap<i32, usize> = (-1..=self.m() as i32).map(|j| (j, 0)).collect();
        for i in 0..self.len() {
            *profile.entry(self.meet_pdim(p, i)).or_default() += 1;
        }
        Ok(profile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(m: usize, q: u32) -> QuadricModel {
        QuadricModel::new(m, q).unwrap()
    }

    fn unit(model: &QuadricModel, idx: &[usize]) -> PVector {
        let mut v = vec![Felt::ZERO; model.space().width()];
        for &i in idx {
            v[i] = Felt::ONE;
        }
        PVector(v)
    }

    #[test]
    fn form_examples() {
        for q in [2, 3, 4] {
            let md = model(2, q);
            assert_eq!(md.eval_form(&unit(&md, &[0])).unwrap(), Felt::ZERO);
            assert_eq!(md.eval_form(&unit(&md, &[0, 1])).unwrap(), Felt::ONE);
            assert_eq!(md.bilin(&unit(&md, &[0]), &unit(&md, &[1])).unwrap(), Felt::ONE);
            assert_eq!(md.bilin(&unit(&md, &[0]), &unit(&md, &[2])).unwrap(), Felt::ZERO);
            assert!(md.eval_form(&PVector(vec![Felt::ZERO; 3])).is_err());
        }
    }

    #[test]
    fn polarization_identity() {
        for q in [2, 3, 4, 5] {
            let md = model(1, q);
            let f = md.field().clone();
            let pts = md.space().points().unwrap();
            for a in &pts {
                for b in &pts {
                    let u = &a.row_vectors()[0];
                    let v = &b.row_vectors()[0];
                    let lhs = md.bilin(u, v).unwrap();
                    let sum = u.add(&f, v);
                    let rhs = f.sub(
                        f.sub(md.eval_form(&sum).unwrap(), md.eval_form(u).unwrap()),
                        md.eval_form(v).unwrap(),
                    );
                    assert_eq!(lhs, rhs);
                    assert_eq!(lhs, md.bilin(v, u).unwrap());
                }
            }
        }
    }

    #[test]
    fn singular_subspace_examples() {
        let md = model(2, 3);
        assert!(md.is_singular_subspace(&md.reference_generator()).unwrap());
        assert!(!md.is_singular_subspace(&md.space().coordinate_subspace(&[0, 1])).unwrap());
        assert!(md.is_singular_subspace(&md.space().empty()).unwrap());
    }

    #[test]
    fn tangent_space_dimensions() {
        let md = model(2, 2);
        let p = md.space().coordinate_subspace(&[0]);
        assert_eq!(md.tangent_space(&p).unwrap().pdim(), 4);
        let g = md.reference_generator();
        assert_eq!(md.tangent_space(&g).unwrap(), g);
        assert_eq!(md.tangent_space(&md.space().empty()).unwrap().pdim(), 5);
        assert!(matches!(
            md.tangent_space(&md.space().coordinate_subspace(&[0, 1])),
            Err(Error::NotSingular)
        ));
    }

    #[test]
    fn swapped_generators() {
        let md = model(4, 2);
        let r = md.reference_generator();
        assert_eq!(md.reference_subspace(4).unwrap(), r);
        assert_eq!(md.reference_subspace(-1).unwrap().pdim(), -1);
        assert!(md.reference_subspace(5).is_err());
        for s in 0..=5 {
            let g = md.swapped_generator(s).unwrap();
            assert!(md.is_singular_subspace(&g).unwrap());
            assert_eq!(g.pdim(), 4);
            assert_eq!(md.space().meet_pdim(&r, &g).unwrap(), 4 - s as i32);
            assert_eq!(md.class_of(&g).unwrap() as usize, s % 2);
        }
    }

    #[test]
    fn singular_point_counts() {
        // |Q+(2m+1,q)| = (q^{m+1} - 1)(q^m + 1)/(q - 1)
        for (m, q) in [(1usize, 2u32), (1, 3), (2, 2), (2, 3), (3, 2), (4, 2), (3, 3), (4, 3)] {
            let md = model(m, q);
            let q = q as u64;
            let expected = (q.pow(m as u32 + 1) - 1) * (q.pow(m as u32) + 1) / (q - 1);
            assert_eq!(md.singular_points().unwrap().len() as u64, expected, "m={m} q={q}");
        }
    }

    #[test]
    fn small_generator_sets() {
        for (m, q, n) in [(0usize, 2u32, 2usize), (1, 3, 8), (2, 2, 30), (2, 3, 80)] {
            let gs = model(m, q).enumerate_generators(DEFAULT_GENERATOR_CAP).unwrap();
            assert_eq!(gs.len(), n);
            assert_eq!(gs.class_members(0).len(), n / 2);
            assert_eq!(gs.label(gs.position(&gs.model().reference_generator()).unwrap()), 0);
        }
    }

    #[test]
    fn generator_cap() {
        let md = model(4, 5);
        assert!(matches!(md.enumerate_generators(DEFAULT_GENERATOR_CAP), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn profile_q5_2() {
        let gs = model(2, 2).enumerate_generators(DEFAULT_GENERATOR_CAP).unwrap();
        let first = gs.intersection_profile(gs.get(0)).unwrap();
        assert_eq!(first[&-1], 8);
        assert_eq!(first[&2], 1);
        assert_eq!(first.values().sum::<usize>(), 30);
        for g in gs.generators() {
            assert_eq!(gs.intersection_profile(g).unwrap(), first);
        }
        let not_a_generator = gs.model().space().coordinate_subspace(&[0, 1, 2]);
        assert!(matches!(gs.intersection_profile(&not_a_generator), Err(Error::UnknownGenerator)));
    }
}
