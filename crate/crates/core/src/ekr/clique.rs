//! The meets-graph on generators and maximal clique enumeration
//! (Bron–Kerbosch with Tomita pivoting over a degeneracy ordering).

use crate::error::{Error, Result};
use crate::quadric::GeneratorSet;

/// Default vertex cap for clique search.
pub const DEFAULT_CLIQUE_CAP: usize = 200;

/// Symmetric adjacency bit-matrix; no self-loops are stored.
#[derive(Clone, Debug)]
pub struct IntersectionGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

type Bits = Vec<u64>;

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn clear_bit(set: &mut [u64], i: usize) {
    set[i / 64] &= !(1 << (i % 64));
}

fn and(a: &[u64], b: &[u64]) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn count_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&w| w == 0)
}

fn ones(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

impl IntersectionGraph {
    /// Vertices are generators, adjacent when they meet. Fails when the
    /// generator count exceeds `cap`.
    pub fn from_generators(gs: &GeneratorSet, cap: usize) -> Result<Self> {
        if gs.len() > cap {
            return Err(Error::Infeasible {
                what: "maximal clique search".into(),
                size: gs.len().to_string(),
                cap: cap as u64,
            });
        }
        let t = gs.intersection_table();
        let mut g = Self::empty(gs.len());
        for i in 0..gs.len() {
            for j in i + 1..gs.len() {
                if t.get(i, j) >= 0 {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        IntersectionGraph { n, words, adj: vec![0; n * words] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n, "vertex out of range");
        if a != b {
            let w = self.words;
            set_bit(&mut self.adj[a * w..(a + 1) * w], b);
            set_bit(&mut self.adj[b * w..(b + 1) * w], a);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    fn nbrs(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        bit(self.nbrs(a), b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Vertices in degeneracy order (repeatedly remove a minimum-degree
    /// vertex, lowest index on ties).
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .expect("vertex left");
            removed[v] = true;
            order.push(v);
            for u in ones(self.nbrs(v)) {
                if !removed[u] {
                    deg[u] -= 1;
                }
            }
        }
        order
    }

    fn expand(&self, r: &mut Vec<usize>, mut p: Bits, mut x: Bits, out: &mut Vec<Vec<usize>>) {
        if is_zero(&p) {
            if is_zero(&x) {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        let pivot = ones(&p)
            .chain(ones(&x))
            .max_by_key(|&u| (count_and(&p, self.nbrs(u)), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let candidates: Vec<usize> = ones(&p).filter(|&v| !self.adjacent(pivot, v)).collect();
        for v in candidates {
            r.push(v);
            self.expand(r, and(&p, self.nbrs(v)), and(&x, self.nbrs(v)), out);
            r.pop();
            clear_bit(&mut p, v);
            set_bit(&mut x, v);
        }
    }
}

/// Every maximal clique exactly once, each sorted, listed in lexicographic order.
pub fn maximal_cliques(g: &IntersectionGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let order = g.degeneracy_order();
    let mut later = vec![u64::MAX; g.words];
    for v in g.n..g.words * 64 {
        clear_bit(&mut later, v);
    }
    let mut earlier = vec![0u64; g.words];
    for &v in &order {
        clear_bit(&mut later, v);
        let p = and(&later, g.nbrs(v));
        let x = and(&earlier, g.nbrs(v));
        g.expand(&mut vec![v], p, x, &mut out);
        set_bit(&mut earlier, v);
    }
    out.sort();
    out
}
