//! Row reduction over GF(q) on flat row-major matrices, plus a bit-packed
//! GF(2) path. Matrices are `&[Felt]` slices of `rows * width` entries.

use crate::gf::{Felt, FieldCtx};

/// Reduces `m` (row-major, `width` columns) to reduced row echelon form in
/// place, drops zero rows and returns the rank.
pub fn rref(field: &FieldCtx, width: usize, m: &mut Vec<Felt>) -> usize {
    if width == 0 {
        m.clear();
        return 0;
    }
    let nrows = m.len() / width;
    let mut rank = 0;
    for col in 0..width {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !m[r * width + col].is_zero()) else {
            continue;
        };
        if piv != rank {
            for c in 0..width {
                m.swap(piv * width + c, rank * width + c);
            }
        }
        let inv = field.inv_nz(m[rank * width + col]);
        field.scale(&mut m[rank * width..(rank + 1) * width], inv);
        let pivot_row: Vec<Felt> = m[rank * width..(rank + 1) * width].to_vec();
        for r in 0..nrows {
            if r == rank {
                continue;
            }
            let c = m[r * width + col];
            if !c.is_zero() {
                let neg = field.neg(c);
                field.axpy(&mut m[r * width..(r + 1) * width], neg, &pivot_row);
            }
        }
        rank += 1;
    }
    m.truncate(rank * width);
    rank
}

/// Rank of a matrix without modifying it.
pub fn rank(field: &FieldCtx, width: usize, m: &[Felt]) -> usize {
    if field.q() == 2 && width <= 64 {
        let mut bits: Vec<u64> = m.chunks(width).map(pack_row).collect();
        return rank_bits(&mut bits);
    }
    let mut tmp = m.to_vec();
    rref(field, width, &mut tmp)
}

/// Pivot column of each row of a matrix already in RREF.
pub fn pivots(width: usize, m: &[Felt]) -> Vec<usize> {
    m.chunks(width)
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("zero row in RREF"))
        .collect()
}

/// Basis of `{x : m·x = 0}` for `m` in RREF, one vector per free column.
pub fn null_space(field: &FieldCtx, width: usize, m: &[Felt]) -> Vec<Felt> {
    let piv = pivots(width, m);
    let mut is_pivot = vec![false; width];
    for &p in &piv {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..width).filter(|&c| !is_pivot[c]) {
        let start = out.len();
        out.resize(start + width, Felt::ZERO);
        out[start + free] = Felt::ONE;
        for (r, &p) in piv.iter().enumerate() {
            out[start + p] = field.neg(m[r * width + free]);
        }
    }
    out
}

/// Returns true iff the rows of `b` together with the rows of `a` (an RREF
/// basis) are linearly dependent, i.e. the row spaces share a nonzero vector.
/// Exits as soon as a dependency appears.
pub fn rowspaces_meet(field: &FieldCtx, width: usize, a: &[Felt], b: &[Felt]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    if field.q() == 2 && width <= 64 {
        let mut basis: Vec<u64> = a.chunks(width).map(pack_row).collect();
        return b.chunks(width).any(|row| !insert_bits(&mut basis, pack_row(row)));
    }
    // echelon basis kept as (pivot column, normalized row)
    let mut basis: Vec<(usize, Vec<Felt>)> = Vec::with_capacity((a.len() + b.len()) / width);
    let insert = |row: &[Felt], basis: &mut Vec<(usize, Vec<Felt>)>| -> bool {
        let mut v = row.to_vec();
        for (p, brow) in basis.iter() {
            let c = v[*p];
            if !c.is_zero() {
                field.axpy(&mut v, field.neg(c), brow);
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = field.inv_nz(v[p]);
                field.scale(&mut v, inv);
                for (_, brow) in basis.iter_mut() {
                    let c = brow[p];
                    if !c.is_zero() {
                        field.axpy(brow, field.neg(c), &v);
                    }
                }
                basis.push((p, v));
                true
            }
        }
    };
    for row in a.chunks(width) {
        insert(row, &mut basis);
    }
    b.chunks(width).any(|row| !insert(row, &mut basis))
}

/// Packs a GF(2) row into a bit mask, column `i` at bit `i`.
#[inline]
pub fn pack_row(row: &[Felt]) -> u64 {
    row.iter()
        .enumerate()
        .fold(0u64, |acc, (i, x)| acc | ((x.0 as u64 & 1) << i))
}

/// Inserts `v` into an XOR basis whose members have distinct lowest set bits.
/// Returns false when `v` reduces to zero.
#[inline]
pub fn insert_bits(basis: &mut Vec<u64>, mut v: u64) -> bool {
    for &b in basis.iter() {
        let low = b & b.wrapping_neg();
        if v & low != 0 {
            v ^= b;
        }
    }
    if v == 0 {
        return false;
    }
    let low = v & v.wrapping_neg();
    for b in basis.iter_mut() {
        if *b & low != 0 {
            *b ^= v;
        }
    }
    basis.push(v);
    true
}

/// GF(2) rank of packed rows; the slice is clobbered.
#[inline]
pub fn rank_bits(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let v = rows[i];
        if v == 0 {
            continue;
        }
        let low = v & v.wrapping_neg();
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> FieldCtx {
        FieldCtx::new(q).unwrap()
    }

    fn row(v: &[u8]) -> Vec<Felt> {
        v.iter().map(|&x| Felt(x)).collect()
    }

    #[test]
    fn rref_gf3() {
        let gf = f(3);
        let mut m = row(&[2, 1, 0, 1, 2, 0, 0, 0, 1]);
        // rows (2,1,0),(1,2,0),(0,0,1): second = 2*first over GF(3)
        let r = rref(&gf, 3, &mut m);
        assert_eq!(r, 2);
        assert_eq!(m, row(&[1, 2, 0, 0, 0, 1]));
    }

    #[test]
    fn null_space_is_annihilator() {
        let gf = f(5);
        let mut m = row(&[1, 2, 3, 4, 0, 1, 1, 2]);
        rref(&gf, 4, &mut m);
        let ns = null_space(&gf, 4, &m);
        assert_eq!(ns.len() / 4, 2);
        for a in m.chunks(4) {
            for b in ns.chunks(4) {
                assert_eq!(gf.dot(a, b), Felt::ZERO);
            }
        }
    }

    #[test]
    fn bit_path_matches_generic() {
        let gf = f(2);
        let m = row(&[1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1, 0]);
        let mut generic = m.clone();
        assert_eq!(rref(&gf, 4, &mut generic), rank(&gf, 4, &m));
        assert_eq!(rank(&gf, 4, &m), 2);
    }

    #[test]
    fn meet_detection() {
        for q in [2, 3] {
            let gf = f(q);
            let a = row(&[1, 0, 0, 0, 0, 1, 0, 0]);
            let b = row(&[0, 1, 0, 0, 0, 0, 1, 0]);
            let c = row(&[0, 0, 1, 0, 0, 0, 0, 1]);
            assert!(rowspaces_meet(&gf, 4, &a, &b));
            assert!(!rowspaces_meet(&gf, 4, &a, &c));
            assert!(!rowspaces_meet(&gf, 4, &a, &[]));
        }
    }
}
