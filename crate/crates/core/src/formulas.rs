//! Closed-form counts for generators of hyperbolic quadrics and the sizes of
//! the known Erdős–Ko–Rado families, evaluated exactly.
//!
//! Dimensions are projective (the empty space has dimension −1). `n` is the
//! half-rank of Q+(4n+1,q); `m` is the generator dimension of Q+(2m+1,q).
//! Every division is exact and asserted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{param, Result};
use crate::projgeom::gauss_binom;

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return param(format!("field order must be at least 2, got {q}"));
    }
    Ok(())
}

/// `q^e` for a non-negative exponent.
pub(crate) fn qpow(q: u64, e: i64) -> BigInt {
    assert!(e >= 0, "negative exponent {e}");
    num_traits::pow(BigInt::from(q), e as usize)
}

/// `[n choose k]_q` for validated `q`.
fn qbin(n: i64, k: i64, q: u64) -> BigInt {
    gauss_binom(n, k, q).expect("q validated by caller")
}

/// `∏_{i=lo..=hi} (q^i + 1)`, 1 when the range is empty.
pub(crate) fn prod_plus(q: u64, lo: i64, hi: i64) -> BigInt {
    (lo..=hi).map(|i| qpow(q, i) + 1).product()
}

/// `∏_{k=1..=t} (q^{2k−1} − 1)`, 1 when `t ≤ 0`.
pub(crate) fn prod_odd_minus(q: u64, t: i64) -> BigInt {
    (1..=t).map(|k| qpow(q, 2 * k - 1) - 1).product()
}

fn choose2(x: i64) -> i64 {
    x * (x - 1) / 2
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    let (quo, rem) = num.div_rem(den);
    assert!(rem.is_zero(), "inexact division {num} / {den}");
    quo
}

fn half(x: BigInt) -> BigInt {
    exact_div(x, &BigInt::from(2))
}

/// Number of generators of Q+(2m+1,q): `∏_{i=0..m} (q^i + 1)`.
pub fn num_generators(m: u32, q: u64) -> BigInt {
    prod_plus(q, 0, m as i64)
}

/// Number of `j`-spaces of PG(n,q) skew to a fixed `k`-space.
pub fn skew_subspace_count(n: i64, k: i64, j: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if !(0..=n).contains(&k) || !(0..=n).contains(&j) {
        return param(format!("need 0 <= k, j <= n, got n={n} k={k} j={j}"));
    }
    Ok(qpow(q, (k + 1) * (j + 1)) * qbin(n - k, j + 1, q))
}

/// Generators of Q+(2m+1,q) skew to both members of a pair of generators
/// meeting in a `j`-space. Zero when `m − j` is odd.
pub fn skew_to_pair(m: i64, j: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if j < 0 || j > m {
        return param(format!("need 0 <= j <= m, got m={m} j={j}"));
    }
    if (m - j) % 2 != 0 {
        return Ok(BigInt::zero());
    }
    let e = 2 * choose2((m + j) / 2 + 1) - choose2(j + 1);
    Ok(qpow(q, e) * prod_odd_minus(q, (m - j) / 2))
}

/// Generators of Q+(4n+1,q) meeting the first member of a same-class pair
/// (meeting in a `j`-space) but skew to the second.
pub fn meeting_first_only(n: i64, j: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if n < 0 || j < 0 || j > 2 * n || j % 2 != 0 {
        return param(format!("need even j with 0 <= j <= 2n, got n={n} j={j}"));
    }
    let mut sum = BigInt::zero();
    for i in j / 2..n {
        sum += qpow(q, (2 * n - 2 * i) * (j + 1))
            * qbin(2 * n - j, 2 * n - 2 * i, q)
            * skew_to_pair(2 * i, j, q)?;
    }
    Ok(sum)
}

/// Generators of Q+(4n+1,q) skew to at least one member of a same-class pair
/// meeting in a `2(n−t)`-space.
pub fn missing_either(n: i64, t: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if t < 0 || t > n {
        return param(format!("need 0 <= t <= n, got n={n} t={t}"));
    }
    let lead = 2 * n * n + n - t * t;
    let mut sum = qpow(q, lead) * prod_odd_minus(q, t);
    for i in 1..=t {
        // the inner power q^{i²+i−2it} may be negative on its own
        let e = lead + i * i + i - 2 * i * t;
        sum += 2 * qbin(2 * t, 2 * i, q) * qpow(q, e) * prod_odd_minus(q, t - i);
    }
    Ok(sum)
}

/// The part of [`missing_either`] that does not depend on `n`:
/// `missing_either(n, t, q) = q^{(n+t)(2n−2t+1)} · missing_either_core(t, q)`.
pub fn missing_either_core(t: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if t < 1 {
        return param(format!("need t >= 1, got {t}"));
    }
    let mut sum = qpow(q, t * t - t) * prod_odd_minus(q, t);
    for i in 0..t {
        sum += 2 * qbin(2 * t, 2 * i, q) * qpow(q, i * i - i) * prod_odd_minus(q, i);
    }
    Ok(sum)
}

/// Generators of one class of Q+(2m+1,q) skew to a fixed singular `k`-space,
/// `−1 ≤ k < m`.
pub fn skew_in_class(m: i64, k: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if k < -1 || k >= m {
        return param(format!("need -1 <= k < m, got m={m} k={k}"));
    }
    let e = exact_div(BigInt::from((k + 1) * (2 * m - k)), &BigInt::from(2));
    let e: i64 = e.try_into().expect("small exponent");
    Ok(half(prod_plus(q, 0, m - k - 1) * qpow(q, e)))
}

/// [`skew_in_class`] evaluated by inclusion–exclusion over the subspaces of
/// the fixed `k`-space.
pub fn skew_in_class_recursive(m: i64, k: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if k < -1 || k >= m {
        return param(format!("need -1 <= k < m, got m={m} k={k}"));
    }
    let mut acc = half(prod_plus(q, 0, m));
    for i in 0..=k {
        acc -= qbin(k + 1, i + 1, q) * skew_in_class_recursive(m - i - 1, k - i - 1, q)?;
    }
    Ok(acc)
}

fn check_n(n: i64) -> Result<()> {
    if n < 1 {
        return param(format!("need n >= 1, got {n}"));
    }
    Ok(())
}

/// One full generator class of Q+(4n+1,q).
pub fn size_one_class(n: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    check_n(n)?;
    Ok(prod_plus(q, 1, 2 * n))
}

/// A generator together with every generator of the other class meeting it.
pub fn size_second(n: i64, q: u64) -> Result<BigInt> {
    Ok(size_one_class(n, q)? - qpow(q, 2 * n * n + n) + 1)
}

/// All generators through a fixed point.
pub fn size_point_pencil(n: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    check_n(n)?;
    Ok(prod_plus(q, 0, 2 * n - 1))
}

/// Family I with a fixed singular `k`-space τ: generators of one class
/// meeting τ in dimension at least `j`, plus generators of the other class
/// meeting τ in dimension at least `k − j`. Sizes at `k = 2n` are taken from
/// the equal families at `k = 2n − 1` (or the one-class family when `j = 0`).
pub fn size_i(n: i64, k: i64, j: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    check_n(n)?;
    if j < 0 || j > k || k > 2 * n {
        return param(format!("need 0 <= j <= k <= 2n, got n={n} k={k} j={j}"));
    }
    if k == 2 * n {
        if j == 0 {
            return size_one_class(n, q);
        }
        let jj = (j + 1) / 2;
        return size_i(n, 2 * n - 1, 2 * jj - 1, q);
    }
    let term = |i: i64| {
        let e = (k - i) * (4 * n - k - i - 1);
        qbin(k + 1, i + 1, q) * qpow(q, e / 2)
    };
    let bracket: BigInt = (j..=k).map(term).sum::<BigInt>() + (k - j..=k).map(term).sum::<BigInt>();
    Ok(half(prod_plus(q, 0, 2 * n - k - 1) * bracket))
}

/// Family I with `j = k`, in product form. Valid for `0 ≤ k ≤ 2n − 1`.
pub fn size_i_kk(n: i64, k: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    check_n(n)?;
    if k < 0 || k > 2 * n - 1 {
        return param(format!("need 0 <= k <= 2n-1, got n={n} k={k}"));
    }
    let e = (k + 1) * (4 * n - k) / 2;
    let removed = half((qpow(q, e) - 1) * prod_plus(q, 0, 2 * n - k - 1));
    Ok(prod_plus(q, 1, 2 * n) - removed)
}

/// Family II with a generator π and a `k`-space τ inside it, `0 ≤ k ≤ 2n − 2`.
pub fn size_ii(n: i64, k: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    check_n(n)?;
    if k < 0 || k > 2 * n - 2 {
        return param(format!("need 0 <= k <= 2n-2, got n={n} k={k}"));
    }
    let mut sum = BigInt::zero();
    for i in 1..=n {
        sum += qbin(2 * n + 1, 2 * i + 1, q) * qpow(q, choose2(2 * (n - i)));
    }
    sum += qbin(k + 1, 1, q) * qpow(q, 2 * n * n - n);
    sum += qbin(2 * n - k, 1, q);
    Ok(sum)
}

/// Expanded form of `size_ii(n, 2n − 2, q)`.
pub fn size_ii_top(n: i64, q: u64) -> Result<BigInt> {
    let big = 2 * n * n + n;
    Ok(size_one_class(n, q)? - qpow(q, big) - qpow(q, big - 1) + q + 1)
}

/// Expanded form of `size_ii(n, 0, q)`.
pub fn size_ii_bottom(n: i64, q: u64) -> Result<BigInt> {
    let num = (qpow(q, 2 * n) - 1) * (qpow(q, 2 * n * n - n + 1) - 1);
    Ok(size_one_class(n, q)? - exact_div(num, &BigInt::from(q - 1)))
}

/// Family III: two generators of one class meeting in a `(2n−4)`-space plus
/// every generator of the other class meeting both. Needs `n ≥ 2`.
pub fn size_iii(n: i64, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if n < 2 {
        return param(format!("need n >= 2, got {n}"));
    }
    Ok(size_one_class(n, q)? - qpow(q, 2 * n * n + n - 6) * missing_either_core(2, q)? + 2)
}

/// Upper bound on a maximal EKR set that is neither a full class nor of the
/// second kind: `2∏(q^k+1) − 2·min_t missing_either(n,t,q)`. The minimum is
/// attained at `t = 1`; that is asserted.
pub fn upper_bound_third(n: i64, q: u64) -> Result<BigInt> {
    let total = size_one_class(n, q)?;
    let values = (1..=n).map(|t| missing_either(n, t, q)).collect::<Result<Vec<_>>>()?;
    let min = values.iter().min().expect("n >= 1").clone();
    assert_eq!(min, values[0], "minimum over t not attained at t = 1");
    Ok(2 * total - 2 * min)
}

/// Both sides of `q^{2n²+n} + 2q^{2n²+n−1} + 1 > ∏_{k=1..2n}(q^k+1)`.
pub fn key_inequality_sides(n: i64, q: u64) -> Result<(BigInt, BigInt)> {
    check_q(q)?;
    check_n(n)?;
    let big = 2 * n * n + n;
    let lhs = qpow(q, big) + 2 * qpow(q, big - 1) + 1;
    Ok((lhs, prod_plus(q, 1, 2 * n)))
}

/// Both sides of `∏_{i=s..t}(q^i+1) ≤ (q^s+2)·q^{C(t+1,2)−C(s+1,2)}`.
pub fn product_bound_sides(s: i64, t: i64, q: u64) -> Result<(BigInt, BigInt)> {
    check_q(q)?;
    if s < 0 || s > t {
        return param(format!("need 0 <= s <= t, got s={s} t={t}"));
    }
    let rhs = (qpow(q, s) + 2) * qpow(q, choose2(t + 1) - choose2(s + 1));
    Ok((prod_plus(q, s, t), rhs))
}

/// Both sides of the q-binomial theorem `∏_{l<n}(1 + q^l x) = Σ_l q^{C(l,2)}[n,l]_q x^l`
/// at `x = num / q^shift`, multiplied through by `q^{shift·n}`.
pub fn qbinomial_theorem_sides(n: i64, q: u64, num: u64, shift: i64) -> Result<(BigInt, BigInt)> {
    check_q(q)?;
    if n < 0 || shift < 0 {
        return param(format!("need n, shift >= 0, got n={n} shift={shift}"));
    }
    let x = BigInt::from(num);
    let lhs: BigInt = (0..n).map(|l| qpow(q, shift) + qpow(q, l) * &x).product();
    let rhs: BigInt = (0..=n)
        .map(|l| {
            qpow(q, choose2(l)) * qbin(n, l, q) * num_traits::pow(x.clone(), l as usize) * qpow(q, shift * (n - l))
        })
        .sum();
    Ok((lhs, rhs))
}

/// Construction sizes with the power of `q` giving their order of growth.
pub fn growth_orders(n: i64, q: u64) -> Result<Vec<(String, BigInt, i64)>> {
    let big = 2 * n * n + n;
    let mut out = vec![
        ("one-class".to_string(), size_one_class(n, q)?, big),
        ("second".to_string(), size_second(n, q)?, big - 1),
        ("point-pencil".to_string(), size_point_pencil(n, q)?, 2 * n * n - n),
        (format!("II k={}", 2 * n - 2), size_ii(n, 2 * n - 2, q)?, big - 2),
        ("II k=0".to_string(), size_ii(n, 0, q)?, big - 3),
    ];
    for k in 0..2 * n {
        out.push((format!("I k=j={k}"), size_i_kk(n, k, q)?, 2 * n * n - n + k));
    }
    if n >= 2 {
        out.push(("III".to_string(), size_iii(n, q)?, big - 2));
    }
    Ok(out)
}

/// Convenience: `q^{C(m+1,2)}`, the count of generators skew to a fixed one
/// on Q+(2m+1,q) with `m` even.
pub fn skew_to_generator(m: i64, q: u64) -> BigInt {
    qpow(q, choose2(m + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// Evaluates an integer polynomial given as (exponent, coefficient) pairs.
    fn poly(q: u64, terms: &[(i64, i64)]) -> BigInt {
        terms.iter().map(|&(e, c)| qpow(q, e) * c).sum()
    }

    #[test]
    fn generator_counts() {
        assert_eq!(num_generators(0, 5), b(2));
        assert_eq!(num_generators(2, 2), b(30));
        assert_eq!(num_generators(2, 3), b(80));
        assert_eq!(num_generators(4, 2), b(4590));
    }

    #[test]
    fn skew_subspace_values() {
        assert_eq!(skew_subspace_count(2, 0, 1, 2).unwrap(), b(4));
        assert_eq!(skew_subspace_count(3, 0, 1, 2).unwrap(), b(28));
        assert_eq!(skew_subspace_count(3, 1, 2, 3).unwrap(), b(0));
        assert!(skew_subspace_count(3, 4, 0, 2).is_err());
    }

    #[test]
    fn skew_to_pair_values() {
        assert_eq!(skew_to_pair(2, 2, 2).unwrap(), b(8));
        assert_eq!(skew_to_pair(2, 1, 3).unwrap(), b(0));
        assert_eq!(skew_to_pair(2, 0, 2).unwrap(), b(4));
        for m in 0..6 {
            for q in [2, 3, 5] {
                assert_eq!(skew_to_pair(m, m, q).unwrap(), skew_to_generator(m, q));
            }
        }
        assert!(skew_to_pair(2, -1, 2).is_err());
        assert!(skew_to_pair(2, 3, 2).is_err());
    }

    #[test]
    fn meeting_first_only_values() {
        for q in [2, 3, 4, 7] {
            assert_eq!(meeting_first_only(1, 0, q).unwrap(), qpow(q, 2));
            assert_eq!(meeting_first_only(3, 6, q).unwrap(), b(0));
        }
        assert!(meeting_first_only(2, 1, 2).is_err());
    }

    #[test]
    fn missing_either_values() {
        assert_eq!(missing_either(1, 1, 2).unwrap(), b(12));
        for n in 1..5 {
            for q in [2, 3, 4, 5] {
                let big = 2 * n * n + n;
                assert_eq!(missing_either(n, 0, q).unwrap(), qpow(q, big));
                assert_eq!(missing_either(n, 1, q).unwrap(), (q + 1) * qpow(q, big - 1));
            }
        }
    }

    #[test]
    fn core_polynomials() {
        for q in 2..=17u64 {
            assert_eq!(missing_either_core(1, q).unwrap(), poly(q, &[(1, 1), (0, 1)]));
            assert_eq!(missing_either_core(2, q).unwrap(), poly(q, &[(6, 1), (5, 1), (3, 1), (2, -1)]));
            assert_eq!(
                missing_either_core(3, q).unwrap(),
                poly(q, &[(15, 1), (14, 1), (12, 1), (11, -1), (10, 1), (9, -1), (7, -1), (6, 1)])
            );
        }
        assert_eq!(missing_either_core(2, 2).unwrap(), b(100));
        assert!(missing_either_core(0, 2).is_err());
    }

    #[test]
    fn skew_in_class_values() {
        for q in [2, 3, 4] {
            assert_eq!(skew_in_class(2, 0, q).unwrap(), (q + 1) * qpow(q, 2));
            for m in 0..6 {
                assert_eq!(skew_in_class(m, -1, q).unwrap(), half(num_generators(m as u32, q)));
                for k in -1..m {
                    assert_eq!(skew_in_class(m, k, q).unwrap(), skew_in_class_recursive(m, k, q).unwrap());
                }
            }
        }
        assert!(skew_in_class(2, 2, 2).is_err());
    }

    #[test]
    fn family_sizes_small() {
        for q in [2u64, 3, 4, 5] {
            let qq = b(q as i64);
            assert_eq!(size_one_class(1, q).unwrap(), &qq * &qq * &qq + &qq * &qq + &qq + 1);
            assert_eq!(size_second(1, q).unwrap(), &qq * &qq + &qq + 2);
            assert_eq!(size_point_pencil(1, q).unwrap(), 2 * &qq + 2);
        }
        assert_eq!(size_one_class(2, 2).unwrap(), b(2295));
        assert_eq!(size_second(2, 2).unwrap(), b(1272));
        assert_eq!(size_point_pencil(2, 2).unwrap(), b(270));
        assert_eq!(size_i_kk(2, 2, 2).unwrap(), b(762));
        assert_eq!(size_ii(2, 2, 2).unwrap(), b(762));
        assert_eq!(size_ii(2, 0, 2).unwrap(), b(390));
        assert_eq!(size_iii(2, 2).unwrap(), b(697));
        assert!(size_iii(1, 2).is_err());
        assert!(size_ii(2, 3, 2).is_err());
    }

    #[test]
    fn family_i_aliases() {
        for n in 1..4 {
            for q in [2, 3, 4] {
                assert_eq!(size_i(n, 2 * n, 0, q).unwrap(), size_one_class(n, q).unwrap());
                assert_eq!(size_i(n, 2 * n, 2 * n, q).unwrap(), size_second(n, q).unwrap());
                assert_eq!(size_i_kk(n, 0, q).unwrap(), size_point_pencil(n, q).unwrap());
                for k in 0..2 * n {
                    assert_eq!(size_i(n, k, k, q).unwrap(), size_i_kk(n, k, q).unwrap());
                    for j in 0..=k {
                        assert_eq!(size_i(n, k, j, q).unwrap(), size_i(n, k, k - j, q).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn family_ii_expansions() {
        for n in 1..5 {
            for q in [2, 3, 4, 5, 7] {
                assert_eq!(size_ii(n, 2 * n - 2, q).unwrap(), size_ii_top(n, q).unwrap());
                assert_eq!(size_ii(n, 0, q).unwrap(), size_ii_bottom(n, q).unwrap());
            }
        }
    }

    #[test]
    fn key_inequality_at_two() {
        let (lhs, rhs) = key_inequality_sides(2, 2).unwrap();
        assert_eq!((lhs, rhs), (b(2049), b(2295)));
        let (lhs, rhs) = key_inequality_sides(1, 3).unwrap();
        assert_eq!((lhs, rhs), (b(46), b(40)));
    }

    #[test]
    fn third_bound_small() {
        assert_eq!(upper_bound_third(1, 2).unwrap(), b(6));
        assert_eq!(upper_bound_third(1, 3).unwrap(), b(8));
        assert_eq!(upper_bound_third(1, 4).unwrap(), b(10));
    }

    #[test]
    fn qbinomial_theorem_small() {
        let (lhs, rhs) = qbinomial_theorem_sides(3, 2, 1, 0).unwrap();
        assert_eq!(lhs, b(30));
        assert_eq!(rhs, b(30));
        let (lhs, rhs) = qbinomial_theorem_sides(4, 3, 1, 2).unwrap();
        assert_eq!(lhs, rhs);
    }
}
