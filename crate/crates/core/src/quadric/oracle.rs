//! Brute-force counts over an enumerated generator set, used to check the
//! closed forms in [`crate::formulas`].

use rayon::prelude::*;

use super::{ClassLabel, GeneratorSet};
use crate::error::Result;
use crate::projgeom::Subspace;

/// Generators skew to both `a` and `b`.
pub fn skew_to_both(gs: &GeneratorSet, a: usize, b: usize) -> usize {
    let t = gs.intersection_table();
    (0..gs.len())
        .filter(|&i| t.get(a, i) < 0 && t.get(b, i) < 0)
        .count()
}

/// Generators meeting `a` but skew to `b`.
pub fn meeting_first_only(gs: &GeneratorSet, a: usize, b: usize) -> usize {
    let t = gs.intersection_table();
    (0..gs.len())
        .filter(|&i| t.get(a, i) >= 0 && t.get(b, i) < 0)
        .count()
}

/// Generators skew to at least one of `a`, `b`.
pub fn missing_either(gs: &GeneratorSet, a: usize, b: usize) -> usize {
    let t = gs.intersection_table();
    (0..gs.len())
        .filter(|&i| t.get(a, i) < 0 || t.get(b, i) < 0)
        .count()
}

/// Generators of class `class` skew to the subspace `s`.
pub fn skew_in_class(gs: &GeneratorSet, s: &Subspace, class: ClassLabel) -> Result<usize> {
    let hits = (0..gs.len())
        .into_par_iter()
        .filter(|&i| gs.label(i) == class)
        .map(|i| gs.meet_pdim_with(i, s).map(|d| usize::from(d < 0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.into_iter().sum())
}

/// All pairs `(a, b)` with `a < b` whose intersection has projective
/// dimension `j`, in lexicographic order.
pub fn pairs_with_meet(gs: &GeneratorSet, j: i32) -> Vec<(usize, usize)> {
    let t = gs.intersection_table();
    (0..gs.len())
        .flat_map(|a| (a + 1..gs.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| t.get(a, b) == j)
        .collect()
}

/// Partners `b` of a fixed generator `a` with `pdim(a ∩ b) = j`.
pub fn partners_with_meet(gs: &GeneratorSet, a: usize, j: i32) -> Vec<usize> {
    let row = gs.intersection_table().row(a);
    (0..gs.len()).filter(|&b| b != a && row[b] as i32 == j).collect()
}
