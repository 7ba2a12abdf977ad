//! Seeded sampling of construction parameters. The same seed always yields
//! the same parameters.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Result};
use crate::gf::Felt;
use crate::projgeom::Subspace;
use crate::quadric::{oracle, GeneratorSet};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generator_index(gs: &GeneratorSet, rng: &mut SampleRng) -> usize {
    rng.gen_range(0..gs.len())
}

/// A random `k`-dimensional subspace of `s`.
pub fn subspace_of(gs: &GeneratorSet, s: &Subspace, k: i32, rng: &mut SampleRng) -> Result<Subspace> {
    if k < -1 || k > s.pdim() {
        return param(format!("no {k}-space inside a {}-space", s.pdim()));
    }
    let space = gs.model().space();
    let field = space.field();
    let q = field.q() as u8;
    loop {
        let mut flat = Vec::with_capacity((k + 1) as usize * s.width());
        for _ in 0..=k {
            let mut v = vec![Felt::ZERO; s.width()];
            for row in s.rows() {
                let c = Felt(rng.gen_range(0..q));
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = field.add(*x, field.mul(c, r));
                }
            }
            flat.extend(v);
        }
        let sub = space.from_flat(flat);
        if sub.pdim() == k {
            return Ok(sub);
        }
    }
}

/// A random singular `k`-space, taken inside a random generator.
pub fn singular_subspace(gs: &GeneratorSet, k: i32, rng: &mut SampleRng) -> Result<Subspace> {
    let g = generator_index(gs, rng);
    subspace_of(gs, gs.get(g), k, rng)
}

/// A generator and a `k`-space inside it.
pub fn generator_with_subspace(gs: &GeneratorSet, k: i32, rng: &mut SampleRng) -> Result<(Subspace, Subspace)> {
    let g = gs.get(generator_index(gs, rng)).clone();
    let tau = subspace_of(gs, &g, k, rng)?;
    Ok((g, tau))
}

/// Two generators meeting in exactly a `j`-space.
pub fn pair_with_meet(gs: &GeneratorSet, j: i32, rng: &mut SampleRng) -> Result<(usize, usize)> {
    // every generator has partners at each admissible dimension, so a few tries suffice
    for _ in 0..64 {
        let a = generator_index(gs, rng);
        if let Some(&b) = oracle::partners_with_meet(gs, a, j).choose(rng) {
            return Ok((a, b));
        }
    }
    param(format!("no pair of generators meeting in a {j}-space"))
}
