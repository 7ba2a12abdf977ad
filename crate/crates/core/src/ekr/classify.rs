//! Classification of the maximal EKR sets of Q+(5,q) via maximal cliques of
//! the meets-graph, plus the size bound and ordering checks built on it.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::clique::{maximal_cliques, IntersectionGraph};
use crate::error::{param, Result};
use crate::formulas;
use crate::projgeom::Subspace;
use crate::quadric::GeneratorSet;
use crate::report::Row;

const ANCHOR_CLASSIFY: &str = "maximal EKR sets of Q+(5,q)";
const ANCHOR_BOUND: &str = "bound on the third largest";
const ANCHOR_ORDER: &str = "two largest maximal EKR sets";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CliqueKind {
    /// All generators of one class.
    OneClass,
    /// All generators meeting a fixed generator in at least a line.
    FixedGenerator,
    /// All generators through a point.
    PointPencil,
}

impl CliqueKind {
    pub const ALL: [CliqueKind; 3] = [CliqueKind::OneClass, CliqueKind::FixedGenerator, CliqueKind::PointPencil];

    pub fn name(self) -> &'static str {
        match self {
            CliqueKind::OneClass => "one-class",
            CliqueKind::FixedGenerator => "fixed-generator",
            CliqueKind::PointPencil => "point-pencil",
        }
    }
}

/// Every maximal clique with the list of kinds it matches (exactly one when
/// the classification is complete).
#[derive(Clone, Debug)]
pub struct Classification {
    pub q: u32,
    pub cliques: Vec<Vec<usize>>,
    pub matches: Vec<Vec<CliqueKind>>,
}

fn common_subspace(gs: &GeneratorSet, members: &[usize]) -> Result<Subspace> {
    let space = gs.model().space();
    let mut acc = gs.get(members[0]).clone();
    for &i in &members[1..] {
        acc = space.intersect(&acc, gs.get(i))?;
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

fn kinds_of(gs: &GeneratorSet, clique: &[usize]) -> Result<Vec<CliqueKind>> {
    let t = gs.intersection_table();
    let mut out = Vec::new();
    if clique.iter().all(|&i| gs.label(i) == gs.label(clique[0])) {
        out.push(CliqueKind::OneClass);
    }
    if (0..gs.len()).any(|g| clique.iter().all(|&i| t.get(g, i) >= 1)) {
        out.push(CliqueKind::FixedGenerator);
    }
    if !common_subspace(gs, clique)?.is_empty() {
        out.push(CliqueKind::PointPencil);
    }
    Ok(out)
}

/// Enumerates the maximal cliques of the meets-graph of Q+(5,q) and matches
/// each against the three known kinds.
pub fn classify_small(gs: &GeneratorSet, cap: usize) -> Result<Classification> {
    if gs.m() != 2 {
        return param(format!("classification is for Q+(5,q), got m = {}", gs.m()));
    }
    let graph = IntersectionGraph::from_generators(gs, cap)?;
    let cliques = maximal_cliques(&graph);
    let matches = cliques
        .iter()
        .map(|c| kinds_of(gs, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Classification { q: gs.q(), cliques, matches })
}

impl Classification {
    fn of_kind(&self, kind: CliqueKind) -> impl Iterator<Item = &Vec<usize>> {
        self.cliques
            .iter()
            .zip(&self.matches)
            .filter(move |(_, m)| m.as_slice() == [kind])
            .map(|(c, _)| c)
    }

    /// Cliques matching no kind or more than one.
    pub fn unmatched(&self) -> Vec<usize> {
        (0..self.cliques.len()).filter(|&i| self.matches[i].len() != 1).collect()
    }

    /// `(count, sizes)` of the cliques of one kind.
    pub fn tally(&self, kind: CliqueKind) -> (usize, BTreeSet<usize>) {
        let sizes: Vec<usize> = self.of_kind(kind).map(Vec::len).collect();
        (sizes.len(), sizes.into_iter().collect())
    }

    /// Distinct clique sizes, largest first.
    pub fn distinct_sizes(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.cliques.iter().map(Vec::len).collect();
        set.into_iter().rev().collect()
    }

    fn params(&self) -> String {
        format!("m=2 q={}", self.q)
    }

    /// Clique counts and sizes per kind against the closed forms.
    pub fn rows(&self) -> Result<Vec<Row>> {
        let q = self.q as u64;
        let points: BigInt = (formulas::qpow(q, 3) - 1) * (formulas::qpow(q, 2) + 1) / (q - 1);
        let gens = formulas::num_generators(2, q);
        let expected = [
            (CliqueKind::OneClass, BigInt::from(2), formulas::size_one_class(1, q)?),
            (CliqueKind::FixedGenerator, gens.clone(), formulas::size_second(1, q)?),
            (CliqueKind::PointPencil, points.clone(), formulas::size_point_pencil(1, q)?),
        ];
        let mut rows = vec![
            Row::equality(
                "maximal-cliques",
                self.params(),
                (BigInt::from(2) + &gens + &points).to_string(),
                self.cliques.len().to_string(),
                ANCHOR_CLASSIFY,
            ),
            Row::equality("unmatched-cliques", self.params(), 0, self.unmatched().len(), ANCHOR_CLASSIFY),
        ];
        for (kind, count, size) in expected {
            let (n, sizes) = self.tally(kind);
            let observed = match sizes.len() {
                0 => "none".to_string(),
                1 => sizes.iter().next().unwrap().to_string(),
                _ => format!("{sizes:?}"),
            };
            let p = format!("{} kind={}", self.params(), kind.name());
            rows.push(Row::equality("clique-count", p.clone(), count.to_string(), n.to_string(), ANCHOR_CLASSIFY));
            rows.push(Row::equality("clique-size", p, size.to_string(), observed, ANCHOR_CLASSIFY));
        }
        Ok(rows)
    }

    /// Every maximal clique other than a full class or a fixed-generator set
    /// is within the bound, and the bound is attained.
    pub fn bound_rows(&self) -> Result<Vec<Row>> {
        let bound = formulas::upper_bound_third(1, self.q as u64)?;
        let largest_other = self
            .cliques
            .iter()
            .zip(&self.matches)
            .filter(|(_, m)| !m.contains(&CliqueKind::OneClass) && !m.contains(&CliqueKind::FixedGenerator))
            .map(|(c, _)| c.len())
            .max()
            .unwrap_or(0);
        let observed = BigInt::from(largest_other);
        Ok(vec![
            Row::new(
                "third-bound",
                self.params(),
                &bound,
                &observed,
                observed <= bound,
                ANCHOR_BOUND,
            ),
            Row::equality("third-bound-attained", self.params(), bound.to_string(), observed.to_string(), ANCHOR_BOUND),
        ])
    }

    /// The largest size is a full class, the second largest is the
    /// fixed-generator set, everything else is strictly smaller.
    pub fn ordering_rows(&self) -> Result<Vec<Row>> {
        let q = self.q as u64;
        let sizes = self.distinct_sizes();
        let get = |i: usize| sizes.get(i).map_or("none".to_string(), usize::to_string);
        let rest_max = sizes.get(2).copied();
        Ok(vec![
            Row::equality("largest", self.params(), formulas::size_one_class(1, q)?.to_string(), get(0), ANCHOR_ORDER),
            Row::equality("second-largest", self.params(), formulas::size_second(1, q)?.to_string(), get(1), ANCHOR_ORDER),
            Row::new(
                "rest-smaller",
                self.params(),
                format!("< {}", get(1)),
                get(2),
                sizes.len() >= 2 && rest_max.is_none_or(|r| r < sizes[1]),
                ANCHOR_ORDER,
            ),
        ])
    }
}
