//! Erdős–Ko–Rado sets of generators: the known constructions, the pairwise
//! intersection and maximality predicates, and clique-based classification.

pub mod classify;
pub mod clique;
pub mod sample;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::projgeom::Subspace;
use crate::quadric::{ClassLabel, GeneratorSet};

pub use classify::{classify_small, CliqueKind, Classification};
pub use clique::{maximal_cliques, IntersectionGraph, DEFAULT_CLIQUE_CAP};

/// How an [`EkrSet`] was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Every generator of one class.
    OneClass { class: ClassLabel },
    /// A generator plus every generator of the other class meeting it.
    Second { pi: Subspace },
    /// Every generator through a point.
    PointPencil { point: Subspace },
    /// Generators of `primary` meeting `tau` in dimension ≥ `j` and generators
    /// of the other class meeting `tau` in dimension ≥ `dim τ − j`.
    I { tau: Subspace, j: i32, primary: ClassLabel },
    /// Generators of π's class not skew to τ or meeting π in dimension ≥ 2,
    /// plus generators of the other class through τ meeting π in a hyperplane.
    II { pi: Subspace, tau: Subspace },
    /// Two generators of one class meeting in a `(2n−4)`-space plus every
    /// generator of the other class meeting both.
    III { pi: Subspace, pi2: Subspace },
    /// An arbitrary member list.
    AdHoc,
}

impl Construction {
    pub fn name(&self) -> &'static str {
        match self {
            Construction::OneClass { .. } => "one-class",
            Construction::Second { .. } => "second",
            Construction::PointPencil { .. } => "point-pencil",
            Construction::I { .. } => "I",
            Construction::II { .. } => "II",
            Construction::III { .. } => "III",
            Construction::AdHoc => "ad-hoc",
        }
    }

    /// Named defining subspaces and scalar parameters.
    fn params(&self) -> Vec<ExportParam> {
        let sub = |name: &str, s: &Subspace| ExportParam {
            name: name.to_string(),
            value: None,
            basis: Some(s.rows().map(|r| r.iter().map(|x| x.value()).collect()).collect()),
        };
        let num = |name: &str, v: i64| ExportParam {
            name: name.to_string(),
            value: Some(v),
            basis: None,
        };
        match self {
            Construction::OneClass { class } => vec![num("class", *class as i64)],
            Construction::Second { pi } => vec![sub("pi", pi)],
            Construction::PointPencil { point } => vec![sub("point", point)],
            Construction::I { tau, j, primary } => vec![
                sub("tau", tau),
                num("k", tau.pdim() as i64),
                num("j", *j as i64),
                num("primary_class", *primary as i64),
            ],
            Construction::II { pi, tau } => vec![sub("pi", pi), sub("tau", tau), num("k", tau.pdim() as i64)],
            Construction::III { pi, pi2 } => vec![sub("pi", pi), sub("pi2", pi2)],
            Construction::AdHoc => Vec::new(),
        }
    }
}

/// A set of generators given by sorted indices into a [`GeneratorSet`].
#[derive(Clone, Debug)]
pub struct EkrSet<'a> {
    gs: &'a GeneratorSet,
    members: Vec<usize>,
    construction: Construction,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportParam {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<u8>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportQuadric {
    pub m: usize,
    pub q: u32,
}

/// JSON export shape of an [`EkrSet`].
#[derive(Clone, Debug, Serialize)]
pub struct ExportedSet {
    pub quadric: ExportQuadric,
    pub tag: String,
    pub params: Vec<ExportParam>,
    pub member_indices: Vec<usize>,
}

impl<'a> EkrSet<'a> {
    /// An untagged set; indices are sorted and deduplicated.
    pub fn ad_hoc(gs: &'a GeneratorSet, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.last().is_some_and(|&i| i >= gs.len()) {
            return param("member index out of range");
        }
        Ok(EkrSet { gs, members, construction: Construction::AdHoc })
    }

    fn tagged(gs: &'a GeneratorSet, construction: Construction, keep: impl Fn(usize) -> bool + Sync) -> Self {
        let members = (0..gs.len()).into_par_iter().filter(|&i| keep(i)).collect();
        EkrSet { gs, members, construction }
    }

    pub fn generator_set(&self) -> &'a GeneratorSet {
        self.gs
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// The same members without `i`, as an untagged set.
    pub fn without(&self, i: usize) -> EkrSet<'a> {
        let members = self.members.iter().copied().filter(|&x| x != i).collect();
        EkrSet { gs: self.gs, members, construction: Construction::AdHoc }
    }

    /// First pair of disjoint members in lexicographic order, if any.
    pub fn disjoint_pair(&self) -> Option<(usize, usize)> {
        let t = self.gs.intersection_table();
        let ms = &self.members;
        (0..ms.len()).into_par_iter().find_map_first(|x| {
            let row = t.row(ms[x]);
            ms[x + 1..].iter().find(|&&y| row[y] < 0).map(|&y| (ms[x], y))
        })
    }

    /// Every two members meet.
    pub fn is_ekr(&self) -> bool {
        self.disjoint_pair().is_none()
    }

    /// Smallest generator outside the set meeting every member, if any.
    /// Errors when the set is not EKR.
    pub fn extension(&self) -> Result<Option<usize>> {
        if let Some((a, b)) = self.disjoint_pair() {
            return Err(Error::NotEkr(a, b));
        }
        let t = self.gs.intersection_table();
        Ok((0..self.gs.len()).into_par_iter().find_first(|&c| {
            if self.contains(c) {
                return false;
            }
            let row = t.row(c);
            self.members.iter().all(|&x| row[x] >= 0)
        }))
    }

    /// No generator outside the set meets all members.
    pub fn is_maximal(&self) -> Result<bool> {
        Ok(self.extension()?.is_none())
    }

    pub fn export(&self) -> ExportedSet {
        ExportedSet {
            quadric: ExportQuadric { m: self.gs.m(), q: self.gs.q() },
            tag: self.construction.name().to_string(),
            params: self.construction.params(),
            member_indices: self.members.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.export())?)
    }
}

/// `n` for Q+(4n+1,q); the constructions need an even generator dimension.
pub fn half_rank(gs: &GeneratorSet) -> Result<i64> {
    if !gs.m().is_multiple_of(2) || gs.m() == 0 {
        return param(format!("EKR constructions need Q+(4n+1,q) with n >= 1, got m = {}", gs.m()));
    }
    Ok(gs.m() as i64 / 2)
}

pub fn one_class(gs: &GeneratorSet, class: ClassLabel) -> Result<EkrSet<'_>> {
    half_rank(gs)?;
    if class > 1 {
        return param(format!("class label must be 0 or 1, got {class}"));
    }
    Ok(EkrSet::tagged(gs, Construction::OneClass { class }, |i| gs.label(i) == class))
}

pub fn second<'a>(gs: &'a GeneratorSet, pi: &Subspace) -> Result<EkrSet<'a>> {
    half_rank(gs)?;
    let p = gs.require(pi)?;
    let t = gs.intersection_table();
    let class = gs.label(p);
    Ok(EkrSet::tagged(gs, Construction::Second { pi: pi.clone() }, |i| {
        i == p || (gs.label(i) != class && t.get(p, i) >= 0)
    }))
}

pub fn point_pencil<'a>(gs: &'a GeneratorSet, point: &Subspace) -> Result<EkrSet<'a>> {
    half_rank(gs)?;
    if point.pdim() != 0 || !gs.model().is_singular_subspace(point)? {
        return Err(Error::NotSingular);
    }
    let through = gs.generators_through(point)?;
    let mut s = EkrSet::ad_hoc(gs, through)?;
    s.construction = Construction::PointPencil { point: point.clone() };
    Ok(s)
}

/// Family I. `primary` defaults to the class of τ when τ is a generator and
/// to class 0 otherwise.
pub fn family_i<'a>(gs: &'a GeneratorSet, tau: &Subspace, j: i32, primary: Option<ClassLabel>) -> Result<EkrSet<'a>> {
    half_rank(gs)?;
    if !gs.model().is_singular_subspace(tau)? || tau.is_empty() {
        return Err(Error::NotSingular);
    }
    let k = tau.pdim();
    if j < 0 || j > k {
        return param(format!("need 0 <= j <= k = {k}, got j = {j}"));
    }
    let primary = match primary {
        Some(c) if c > 1 => return param(format!("class label must be 0 or 1, got {c}")),
        Some(c) => c,
        None if k == gs.m() as i32 => gs.label(gs.require(tau)?),
        None => 0,
    };
    let dims = meet_dims(gs, tau)?;
    Ok(EkrSet::tagged(
        gs,
        Construction::I { tau: tau.clone(), j, primary },
        |i| {
            let need = if gs.label(i) == primary { j } else { k - j };
            dims[i] >= need
        },
    ))
}

/// Family II for a generator π and a `k`-space τ ⊆ π, `0 ≤ k ≤ 2n − 2`.
pub fn family_ii<'a>(gs: &'a GeneratorSet, pi: &Subspace, tau: &Subspace) -> Result<EkrSet<'a>> {
    let n = half_rank(gs)?;
    let p = gs.require(pi)?;
    let k = tau.pdim();
    if k < 0 || k as i64 > 2 * n - 2 {
        return param(format!("need 0 <= dim tau <= 2n-2 = {}, got {k}", 2 * n - 2));
    }
    if !gs.model().space().contains(pi, tau)? {
        return param("tau must lie in pi");
    }
    let class = gs.label(p);
    let t = gs.intersection_table();
    let dims = meet_dims(gs, tau)?;
    let hyper = 2 * n as i32 - 1;
    Ok(EkrSet::tagged(
        gs,
        Construction::II { pi: pi.clone(), tau: tau.clone() },
        |i| {
            if gs.label(i) == class {
                dims[i] >= 0 || t.get(p, i) >= 2
            } else {
                dims[i] == k && t.get(p, i) == hyper
            }
        },
    ))
}

/// Family III for two generators of one class meeting in a `(2n−4)`-space.
pub fn family_iii<'a>(gs: &'a GeneratorSet, pi: &Subspace, pi2: &Subspace) -> Result<EkrSet<'a>> {
    let n = half_rank(gs)?;
    if n < 2 {
        return param("family III needs n >= 2");
    }
    let a = gs.require(pi)?;
    let b = gs.require(pi2)?;
    let t = gs.intersection_table();
    if gs.label(a) != gs.label(b) || t.get(a, b) as i64 != 2 * n - 4 {
        return param(format!("need two generators of one class meeting in a {}-space", 2 * n - 4));
    }
    let class = gs.label(a);
    Ok(EkrSet::tagged(
        gs,
        Construction::III { pi: pi.clone(), pi2: pi2.clone() },
        |i| i == a || i == b || (gs.label(i) != class && t.get(a, i) >= 0 && t.get(b, i) >= 0),
    ))
}

fn meet_dims(gs: &GeneratorSet, s: &Subspace) -> Result<Vec<i32>> {
    (0..gs.len())
        .into_par_iter()
        .map(|i| gs.meet_pdim_with(i, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::{QuadricModel, DEFAULT_GENERATOR_CAP};

    fn q5(q: u32) -> GeneratorSet {
        QuadricModel::new(2, q).unwrap().enumerate_generators(DEFAULT_GENERATOR_CAP).unwrap()
    }

    #[test]
    fn small_constructions() {
        let gs = q5(2);
        let oc = one_class(&gs, 0).unwrap();
        assert_eq!(oc.len(), 15);
        assert!(oc.is_ekr());
        assert!(oc.is_maximal().unwrap());

        let pi = gs.get(0).clone();
        let s = second(&gs, &pi).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.is_maximal().unwrap());
        let p0 = gs.require(&pi).unwrap();
        let reduced = s.without(p0);
        assert!(reduced.extension().unwrap().is_some());

        let point = gs.model().space().coordinate_subspace(&[0]);
        let pp = point_pencil(&gs, &point).unwrap();
        assert_eq!(pp.len(), 6);
        assert!(pp.is_maximal().unwrap());
    }

    #[test]
    fn i_aliases_on_small_quadric() {
        let gs = q5(3);
        let tau = gs.get(5).clone();
        let cls = gs.label(5);
        let i0 = family_i(&gs, &tau, 0, None).unwrap();
        assert_eq!(i0.members(), one_class(&gs, cls).unwrap().members());
        let i2 = family_i(&gs, &tau, 2, None).unwrap();
        assert_eq!(i2.members(), second(&gs, &tau).unwrap().members());
        let point = gs.model().space().coordinate_subspace(&[2]);
        let i00 = family_i(&gs, &point, 0, None).unwrap();
        assert_eq!(i00.members(), point_pencil(&gs, &point).unwrap().members());
    }

    #[test]
    fn witnesses() {
        let gs = q5(2);
        let t = gs.intersection_table();
        let b = (1..gs.len()).find(|&b| t.get(0, b) < 0).unwrap();
        let pair = EkrSet::ad_hoc(&gs, vec![b, 0]).unwrap();
        assert_eq!(pair.disjoint_pair(), Some((0, b)));
        assert!(matches!(pair.is_maximal(), Err(Error::NotEkr(0, _))));
        assert!(EkrSet::ad_hoc(&gs, vec![3]).unwrap().is_ekr());
    }

    #[test]
    fn rejects_bad_parameters() {
        let odd = QuadricModel::new(1, 2).unwrap().enumerate_generators(DEFAULT_GENERATOR_CAP).unwrap();
        assert!(one_class(&odd, 0).is_err());
        let gs = q5(2);
        let line = gs.model().space().coordinate_subspace(&[0, 1]);
        assert!(matches!(point_pencil(&gs, &gs.model().space().coordinate_subspace(&[0, 2])), Err(Error::NotSingular)));
        assert!(matches!(family_i(&gs, &line, 0, None), Err(Error::NotSingular)));
        assert!(family_iii(&gs, gs.get(0), gs.get(1)).is_err());
    }

    #[test]
    fn export_shape() {
        let gs = q5(2);
        let s = second(&gs, gs.get(3)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json().unwrap()).unwrap();
        assert_eq!(v["quadric"]["m"], 2);
        assert_eq!(v["tag"], "second");
        assert_eq!(v["params"][0]["name"], "pi");
        assert_eq!(v["member_indices"].as_array().unwrap().len(), 8);
    }
}
