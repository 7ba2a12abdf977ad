//! Verification suites: closed forms against brute-force counts on
//! enumerated quadrics, cross-identities, and inequality grids. Each suite
//! returns report rows; a row is fine when [`Row::ok`] holds.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;

use crate::ekr::{self, sample, EkrSet};
use crate::error::Result;
use crate::formulas::{self as f, qpow};
use crate::projgeom::{count_skew_subspaces_oracle, gauss_binom, ProjectiveSpace, Subspace};
use crate::quadric::{oracle, GeneratorSet, QuadricModel};
use crate::report::Row;

const A_GENS: &str = "generator count";
const A_SKEW_SUB: &str = "skew subspaces count";
const A_SKEW_PAIR: &str = "generators skew to a pair";
const A_MEET_ONE: &str = "generators meeting one of a pair";
const A_MISS: &str = "generators missing one of a pair";
const A_CORE: &str = "n-free core of the missing count";
const A_SKEW_CLASS: &str = "generators of a class skew to a subspace";
const A_QBINOM: &str = "q-binomial theorem";
const A_LADDER: &str = "core ladder inequality";
const A_KEY: &str = "key inequality";
const A_PRODUCT: &str = "product bound inequality";
const A_SIZES: &str = "EKR family sizes";
const A_STRUCT: &str = "quadric structure";
const A_GROWTH: &str = "growth orders";
const A_ORDER: &str = "two largest maximal EKR sets";

/// Field orders used by the formula grids.
pub const GRID_Q: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Generator sets up to this size are checked over every parameter choice;
/// larger ones are sampled.
pub const EXHAUSTIVE_LIMIT: usize = 400;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Parameter choices per case on large generator sets.
    pub samples: usize,
    /// Run maximality scans in the construction suite.
    pub check_maximal: bool,
    /// Fill the `micros` column.
    pub timing: bool,
    /// Enumeration cap for the skew-subspace oracle.
    pub cap: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 1,
            samples: 24,
            check_maximal: true,
            timing: false,
            cap: crate::projgeom::DEFAULT_ENUMERATION_CAP,
        }
    }
}

fn timed(opts: &SuiteOptions, body: impl FnOnce() -> Result<Row>) -> Result<Row> {
    let start = Instant::now();
    let row = body()?;
    let micros = if opts.timing { start.elapsed().as_micros() as u64 } else { 0 };
    Ok(row.with_micros(micros))
}

/// One value when all observations agree, otherwise the distinct values.
fn observed(values: impl IntoIterator<Item = usize>) -> String {
    let set: BTreeSet<usize> = values.into_iter().collect();
    match set.len() {
        0 => "none".into(),
        1 => set.into_iter().next().unwrap().to_string(),
        _ => format!("mixed{set:?}"),
    }
}

fn qm(gs: &GeneratorSet) -> String {
    format!("m={} q={}", gs.m(), gs.q())
}

fn exhaustive(gs: &GeneratorSet) -> bool {
    gs.len() <= EXHAUSTIVE_LIMIT
}

// ---------------------------------------------------------------------------
// counts on an enumerated quadric

/// Generator count and class halves.
pub fn enumeration_rows(gs: &GeneratorSet) -> Vec<Row> {
    let total = f::num_generators(gs.m() as u32, gs.q() as u64);
    let zeros = gs.labels().iter().filter(|&&l| l == 0).count();
    vec![
        Row::equality("num_generators", qm(gs), total.to_string(), gs.len().to_string(), A_GENS),
        Row::equality("class_split", qm(gs), format!("{0}/{0}", gs.len() / 2), format!("{zeros}/{}", gs.len() - zeros), A_GENS),
    ]
}

/// Skew-subspace counts in PG(n,q) against enumeration for every
/// `0 ≤ k, j ≤ n ≤ n_max` within the cap.
pub fn skew_subspace_rows(n_max: usize, qs: &[u32], opts: &SuiteOptions) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &q in qs {
        for n in 0..=n_max {
            for k in 0..=n {
                for j in 0..=n {
                    let size = gauss_binom(n as i64 + 1, j as i64 + 1, q as u64)?;
                    if size > BigInt::from(opts.cap) {
                        continue;
                    }
                    rows.push(timed(opts, || {
                        let closed = f::skew_subspace_count(n as i64, k as i64, j as i64, q as u64)?;
                        let brute = count_skew_subspaces_oracle(n, k, j, q, opts.cap)?;
                        Ok(Row::equality(
                            "skew_subspace_count",
                            format!("n={n} k={k} j={j} q={q}"),
                            closed.to_string(),
                            brute.to_string(),
                            A_SKEW_SUB,
                        ))
                    })?);
                }
            }
        }
    }
    Ok(rows)
}

/// Pairs meeting in a `j`-space: all of them on small sets, else a seeded sample.
fn pairs_for(gs: &GeneratorSet, j: i32, opts: &SuiteOptions) -> Result<Vec<(usize, usize)>> {
    if j == gs.m() as i32 {
        let n = if exhaustive(gs) { gs.len() } else { opts.samples.min(gs.len()) };
        let mut rng = sample::rng(opts.seed ^ 0x5eed);
        return Ok((0..n)
            .map(|i| if exhaustive(gs) { i } else { sample::generator_index(gs, &mut rng) })
            .map(|a| (a, a))
            .collect());
    }
    if exhaustive(gs) {
        return Ok(oracle::pairs_with_meet(gs, j));
    }
    let mut rng = sample::rng(opts.seed ^ (j as u64 + 17));
    (0..opts.samples).map(|_| sample::pair_with_meet(gs, j, &mut rng)).collect()
}

/// Brute-force counts for pairs of generators: skew to both, meeting the
/// first only, and missing either.
pub fn pair_count_rows(gs: &GeneratorSet, opts: &SuiteOptions) -> Result<Vec<Row>> {
    let m = gs.m() as i64;
    let q = gs.q() as u64;
    let mut rows = Vec::new();
    for j in 0..=m {
        let pairs = pairs_for(gs, j as i32, opts)?;
        rows.push(timed(opts, || {
            let closed = f::skew_to_pair(m, j, q)?;
            let seen = observed(pairs.iter().map(|&(a, b)| oracle::skew_to_both(gs, a, b)));
            Ok(Row::equality(
                "skew_to_pair",
                format!("{} j={j} pairs={}", qm(gs), pairs.len()),
                closed.to_string(),
                seen,
                A_SKEW_PAIR,
            ))
        })?);
    }
    if m % 2 != 0 {
        return Ok(rows);
    }
    let n = m / 2;
    for j in (0..=m).step_by(2) {
        let pairs = pairs_for(gs, j as i32, opts)?;
        rows.push(timed(opts, || {
            let closed = f::meeting_first_only(n, j, q)?;
            let seen = observed(pairs.iter().map(|&(a, b)| oracle::meeting_first_only(gs, a, b)));
            Ok(Row::equality(
                "meeting_first_only",
                format!("n={n} q={q} j={j} pairs={}", pairs.len()),
                closed.to_string(),
                seen,
                A_MEET_ONE,
            ))
        })?);
    }
    for t in 0..=n {
        let pairs = pairs_for(gs, (2 * (n - t)) as i32, opts)?;
        rows.push(timed(opts, || {
            let closed = f::missing_either(n, t, q)?;
            let seen = observed(pairs.iter().map(|&(a, b)| oracle::missing_either(gs, a, b)));
            Ok(Row::equality(
                "missing_either",
                format!("n={n} q={q} t={t} pairs={}", pairs.len()),
                closed.to_string(),
                seen,
                A_MISS,
            ))
        })?);
    }
    Ok(rows)
}

/// Singular `k`-spaces to test: all on small quadrics, else seeded samples.
fn singular_subspaces(gs: &GeneratorSet, k: i32, opts: &SuiteOptions) -> Result<Vec<Subspace>> {
    if k < 0 {
        return Ok(vec![gs.model().space().empty()]);
    }
    if exhaustive(gs) {
        return gs.model().enumerate_singular(k, opts.cap);
    }
    let mut rng = sample::rng(opts.seed ^ (k as u64 + 101));
    (0..opts.samples).map(|_| sample::singular_subspace(gs, k, &mut rng)).collect()
}

/// Per-class counts of generators skew to a singular `k`-space, and their
/// doubling over both classes.
pub fn skew_in_class_rows(gs: &GeneratorSet, opts: &SuiteOptions) -> Result<Vec<Row>> {
    let m = gs.m() as i64;
    let q = gs.q() as u64;
    let mut rows = Vec::new();
    for k in -1..m {
        let subs = singular_subspaces(gs, k as i32, opts)?;
        let mut per_class = [Vec::new(), Vec::new()];
        let mut totals = Vec::new();
        let start = Instant::now();
        for s in &subs {
            let a = oracle::skew_in_class(gs, s, 0)?;
            let b = oracle::skew_in_class(gs, s, 1)?;
            per_class[0].push(a);
            per_class[1].push(b);
            totals.push(a + b);
        }
        let micros = if opts.timing { start.elapsed().as_micros() as u64 } else { 0 };
        let closed = f::skew_in_class(m, k, q)?;
        for (c, seen) in per_class.into_iter().enumerate() {
            rows.push(
                Row::equality(
                    "skew_in_class",
                    format!("{} k={k} class={c} subspaces={}", qm(gs), subs.len()),
                    closed.to_string(),
                    observed(seen),
                    A_SKEW_CLASS,
                )
                .with_micros(micros),
            );
        }
        rows.push(Row::equality(
            "skew_total",
            format!("{} k={k} subspaces={}", qm(gs), subs.len()),
            (&closed * 2u32).to_string(),
            observed(totals),
            A_SKEW_CLASS,
        ));
    }
    Ok(rows)
}

/// Class parity rule, meet profile, cone counts and tangent spaces.
pub fn structure_rows(gs: &GeneratorSet, opts: &SuiteOptions) -> Result<Vec<Row>> {
    let m = gs.m() as i32;
    let q = gs.q() as u64;
    let t = gs.intersection_table();
    let mut rows = Vec::new();

    let parity_violations = (0..gs.len())
        .flat_map(|a| (0..gs.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| (gs.label(a) == gs.label(b)) != ((t.get(a, b) - m).rem_euclid(2) == 0))
        .count();
    rows.push(Row::equality("class_parity_violations", qm(gs), 0, parity_violations, A_STRUCT));

    // generators meeting a fixed one in exactly a j-space: pick the j-space
    // inside it, then a generator of the quotient skew to the rest
    let mut profiles = BTreeSet::new();
    for a in 0..gs.len() {
        let mut counts = vec![0usize; m as usize + 2];
        for &d in t.row(a) {
            counts[(d + 1) as usize] += 1;
        }
        profiles.insert(counts);
    }
    let expected: Vec<BigInt> = (-1..=m)
        .map(|j| {
            let mj = (m - j) as i64;
            gauss_binom(m as i64 + 1, j as i64 + 1, q).map(|g| g * qpow(q, mj * (mj - 1) / 2))
        })
        .collect::<Result<_>>()?;
    rows.push(Row::equality("meet_profiles_distinct", qm(gs), 1, profiles.len(), A_STRUCT));
    let profile = profiles.into_iter().next().unwrap_or_default();
    for (idx, j) in (-1..=m).enumerate() {
        rows.push(Row::equality(
            "meet_profile",
            format!("{} j={j}", qm(gs)),
            expected[idx].to_string(),
            profile.get(idx).copied().unwrap_or(0).to_string(),
            A_STRUCT,
        ));
    }
    rows.push(Row::equality(
        "skew_to_generator",
        qm(gs),
        f::skew_to_generator(m as i64, q).to_string(),
        profile.first().copied().unwrap_or(0).to_string(),
        A_STRUCT,
    ));

    let model = gs.model();
    let points = if exhaustive(gs) || gs.q() == 2 { Some(model.singular_points()?) } else { None };
    for i in 0..=m {
        let subs = singular_subspaces(gs, i, &SuiteOptions { samples: opts.samples.min(6), ..opts.clone() })?;
        let through = subs
            .iter()
            .map(|s| gs.generators_through(s).map(|v| v.len()))
            .collect::<Result<Vec<_>>>()?;
        let closed = if i == m { BigInt::from(1) } else { f::num_generators((m - i - 1) as u32, q) };
        rows.push(Row::equality(
            "generators_through",
            format!("{} i={i} subspaces={}", qm(gs), subs.len()),
            closed.to_string(),
            observed(through),
            A_STRUCT,
        ));
        let tangent_dims = subs
            .iter()
            .map(|s| model.tangent_space(s).map(|t| t.pdim() as usize))
            .collect::<Result<Vec<_>>>()?;
        rows.push(Row::equality(
            "tangent_dim",
            format!("{} i={i}", qm(gs)),
            (2 * m - i).to_string(),
            observed(tangent_dims),
            A_STRUCT,
        ));
        if let Some(points) = &points {
            // quadric points in the tangent space are exactly those spanning a
            // singular subspace with s
            let mut bad = 0;
            for s in subs.iter().take(4) {
                let tan = model.tangent_space(s)?;
                for p in points {
                    let inside = model.space().contains(&tan, p)?;
                    let joined = model.is_singular_subspace(&model.space().span(s, p)?)?;
                    bad += usize::from(inside != joined);
                }
            }
            rows.push(Row::equality("tangent_points_mismatch", format!("{} i={i}", qm(gs)), 0, bad, A_STRUCT));
        }
    }
    Ok(rows)
}

/// Everything checkable on one enumerated quadric.
pub fn counts_suite(gs: &GeneratorSet, opts: &SuiteOptions) -> Result<Vec<Row>> {
    let mut rows = enumeration_rows(gs);
    rows.extend(pair_count_rows(gs, opts)?);
    rows.extend(skew_in_class_rows(gs, opts)?);
    rows.extend(structure_rows(gs, opts)?);
    Ok(rows)
}

// ---------------------------------------------------------------------------
// identities and anchored values

/// Cross-identities between the closed forms on `n ≤ n_max` and [`GRID_Q`].
pub fn identity_rows(n_max: i64) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &q in &GRID_Q {
        for n in 1..=n_max {
            for t in 0..=n {
                let w = f::missing_either(n, t, q)?;
                let j = 2 * (n - t);
                let split: BigInt = f::skew_to_pair(2 * n, j, q)? + f::meeting_first_only(n, j, q)? * 2u32;
                rows.push(Row::equality("missing_either=skew_to_pair+2*meeting_first_only", format!("n={n} t={t} q={q}"), w.to_string(), split.to_string(), A_MISS));
                if t >= 1 {
                    let scaled = qpow(q, (n + t) * (2 * n - 2 * t + 1)) * f::missing_either_core(t, q)?;
                    rows.push(Row::equality("missing_either=q^e*core", format!("n={n} t={t} q={q}"), w.to_string(), scaled.to_string(), A_CORE));
                }
            }
            for k in 0..2 * n {
                rows.push(Row::equality(
                    "size_i(k,k)=size_i_kk",
                    format!("n={n} k={k} q={q}"),
                    f::size_i_kk(n, k, q)?.to_string(),
                    f::size_i(n, k, k, q)?.to_string(),
                    A_SIZES,
                ));
                for j in 0..=k {
                    rows.push(Row::equality(
                        "size_i(k,j)=size_i(k,k-j)",
                        format!("n={n} k={k} j={j} q={q}"),
                        f::size_i(n, k, j, q)?.to_string(),
                        f::size_i(n, k, k - j, q)?.to_string(),
                        A_SIZES,
                    ));
                }
            }
            let pairs: [(&str, BigInt, BigInt); 6] = [
                ("size_i_kk(2n-2)=size_ii(2n-2)", f::size_i_kk(n, 2 * n - 2, q)?, f::size_ii(n, 2 * n - 2, q)?),
                ("size_i_kk(0)=size_point_pencil", f::size_i_kk(n, 0, q)?, f::size_point_pencil(n, q)?),
                ("size_ii(2n-2)=expanded", f::size_ii(n, 2 * n - 2, q)?, f::size_ii_top(n, q)?),
                ("size_ii(0)=expanded", f::size_ii(n, 0, q)?, f::size_ii_bottom(n, q)?),
                ("size_i(2n,2n)=size_second", f::size_i(n, 2 * n, 2 * n, q)?, f::size_second(n, q)?),
                (
                    "size_second=one_class-skew_to_pair+1",
                    f::size_second(n, q)?,
                    f::size_one_class(n, q)? - f::skew_to_pair(2 * n, 2 * n, q)? + 1,
                ),
            ];
            for (name, a, b) in pairs {
                rows.push(Row::equality(name, format!("n={n} q={q}"), a.to_string(), b.to_string(), A_SIZES));
            }
            if n >= 2 {
                let back: BigInt = f::size_iii(n, q)? + qpow(q, 2 * n * n + n - 6) * f::missing_either_core(2, q)? - 2;
                rows.push(Row::equality("size_iii_rearranged", format!("n={n} q={q}"), f::size_one_class(n, q)?.to_string(), back.to_string(), A_SIZES));
            }
        }
        for m in 0..=2 * n_max {
            for k in -1..m {
                rows.push(Row::equality(
                    "skew_in_class=recursion",
                    format!("m={m} k={k} q={q}"),
                    f::skew_in_class(m, k, q)?.to_string(),
                    f::skew_in_class_recursive(m, k, q)?.to_string(),
                    A_SKEW_CLASS,
                ));
            }
        }
        for n in 0..=6 {
            for m in 0..=4 {
                for num in [1, q] {
                    let (lhs, rhs) = f::qbinomial_theorem_sides(n, q, num, m)?;
                    rows.push(Row::equality(
                        "qbinomial_theorem",
                        format!("n={n} q={q} x={num}/q^{m}"),
                        lhs.to_string(),
                        rhs.to_string(),
                        A_QBINOM,
                    ));
                }
            }
        }
    }
    Ok(rows)
}

/// Values with a known closed polynomial or numeric form.
pub fn anchored_value_rows() -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let polys: [(i64, &[(i64, i64)]); 3] = [
        (1, &[(1, 1), (0, 1)]),
        (2, &[(6, 1), (5, 1), (3, 1), (2, -1)]),
        (3, &[(15, 1), (14, 1), (12, 1), (11, -1), (10, 1), (9, -1), (7, -1), (6, 1)]),
    ];
    // 16 evaluation points fix a polynomial of degree at most 15
    for (t, terms) in polys {
        let mismatches = (2..=17u64)
            .filter(|&q| {
                let expect: BigInt = terms.iter().map(|&(e, c)| qpow(q, e) * c).sum();
                f::missing_either_core(t, q).map(|v| v != expect).unwrap_or(true)
            })
            .count();
        rows.push(Row::equality("core_polynomial", format!("t={t} q=2..17"), 0, mismatches, A_CORE));
    }
    for &q in &GRID_Q {
        for n in 1..=6 {
            let big = 2 * n * n + n;
            rows.push(Row::equality(
                "missing_either(t=1)",
                format!("n={n} q={q}"),
                ((q + 1) * qpow(q, big - 1)).to_string(),
                f::missing_either(n, 1, q)?.to_string(),
                A_ORDER,
            ));
        }
        for m in 0..=10 {
            rows.push(Row::equality(
                "skew_to_pair(j=m)",
                format!("m={m} q={q}"),
                qpow(q, m * (m + 1) / 2).to_string(),
                f::skew_to_pair(m, m, q)?.to_string(),
                A_SKEW_PAIR,
            ));
        }
    }
    let (lhs, rhs) = f::key_inequality_sides(2, 2)?;
    rows.push(Row::equality("key_inequality_sides", "n=2 q=2", "2049 < 2295".to_string(), format!("{lhs} < {rhs}"), A_KEY));
    Ok(rows)
}

// ---------------------------------------------------------------------------
// inequalities

/// The key inequality fails exactly for `q = 2, n ≥ 2`.
pub fn key_inequality_expected_to_fail(n: i64, q: u64) -> bool {
    q == 2 && n >= 2
}

pub fn ladder_rows(t_max: i64, qs: impl IntoIterator<Item = u64>) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for q in qs {
        for t in 1..=t_max {
            let lhs = f::missing_either_core(t + 1, q)?;
            let rhs = qpow(q, 4 * t + 1) * f::missing_either_core(t, q)?;
            rows.push(Row::new("core_ladder", format!("t={t} q={q}"), format!("> {rhs}"), &lhs, lhs > rhs, A_LADDER));
        }
    }
    Ok(rows)
}

pub fn key_inequality_rows(n_max: i64, qs: impl IntoIterator<Item = u64>) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for q in qs {
        for n in 1..=n_max {
            let (lhs, rhs) = f::key_inequality_sides(n, q)?;
            let rel = if lhs > rhs { '>' } else if lhs < rhs { '<' } else { '=' };
            let row = Row::new(
                "key_inequality",
                format!("n={n} q={q}"),
                "lhs > rhs",
                format!("{lhs} {rel} {rhs}"),
                lhs > rhs,
                A_KEY,
            );
            rows.push(if key_inequality_expected_to_fail(n, q) { row.expecting_failure() } else { row });
        }
    }
    Ok(rows)
}

pub fn product_bound_rows(t_max: i64, qs: impl IntoIterator<Item = u64>) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for q in qs {
        for t in 0..=t_max {
            for s in 0..=t {
                if (s, q) == (0, 3) {
                    continue;
                }
                let (lhs, rhs) = f::product_bound_sides(s, t, q)?;
                rows.push(Row::new("product_bound", format!("s={s} t={t} q={q}"), format!("<= {rhs}"), &lhs, lhs <= rhs, A_PRODUCT));
            }
        }
    }
    Ok(rows)
}

/// Monotonicity of the family sizes, the ordering chain for `q ≥ 3`, and
/// growth orders.
pub fn family_order_rows(n_max: i64) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for &q in &GRID_Q[..4] {
            for k in 0..2 * n {
                for j in 0..k {
                    let grows = f::size_i(n, k, j + 1, q)? > f::size_i(n, k, j, q)?;
                    let predicted = 2 * j + 1 - k > 0;
                    rows.push(Row::equality("size_i_step_up", format!("n={n} k={k} j={j} q={q}"), predicted, grows, A_SIZES));
                }
            }
            for k in 1..=2 * n - 2 {
                let grows = f::size_ii(n, k, q)? > f::size_ii(n, k - 1, q)?;
                rows.push(Row::equality("size_ii_step_up", format!("n={n} k={k} q={q}"), true, grows, A_SIZES));
            }
            if (2..=3).contains(&n) {
                let (a, b) = (f::size_i_kk(n, 2 * n - 2, q)?, f::size_iii(n, q)?);
                rows.push(Row::new("size_i_kk(2n-2)>size_iii", format!("n={n} q={q}"), format!("> {b}"), &a, a > b, A_SIZES));
            }
        }
        for &q in &GRID_Q[1..] {
            let one = f::size_one_class(n, q)?;
            let second = f::size_second(n, q)?;
            let mut others = vec![f::size_point_pencil(n, q)?];
            for k in 0..=2 * n - 2 {
                others.push(f::size_ii(n, k, q)?);
                for j in 0..=k {
                    others.push(f::size_i(n, k, j, q)?);
                }
            }
            for j in 1..2 * n - 1 {
                others.push(f::size_i(n, 2 * n - 1, j, q)?);
            }
            if n >= 2 {
                others.push(f::size_iii(n, q)?);
            }
            let rest = others.into_iter().max().expect("nonempty");
            rows.push(Row::new(
                "ordering_chain",
                format!("n={n} q={q}"),
                "one > second > rest",
                format!("{one} > {second} > {rest}"),
                one > second && second > rest,
                A_ORDER,
            ));
        }
        rows.extend(growth_rows(n)?);
    }
    Ok(rows)
}

/// `size(q)/q^e` is non-increasing over [`GRID_Q`] and ends in `[1/2, 4]`.
fn growth_rows(n: i64) -> Result<Vec<Row>> {
    let per_q = GRID_Q.iter().map(|&q| f::growth_orders(n, q)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (idx, (name, _, e)) in per_q[0].iter().enumerate() {
        // at n = 1 the k = 0 family coincides with k = 2n − 2 and grows faster
        if n == 1 && name == "II k=0" {
            continue;
        }
        let mut ok = true;
        for w in 0..GRID_Q.len() - 1 {
            let (q0, q1) = (GRID_Q[w], GRID_Q[w + 1]);
            let (s0, s1) = (&per_q[w][idx].1, &per_q[w + 1][idx].1);
            ok &= s1 * qpow(q0, *e) <= s0 * qpow(q1, *e);
        }
        let last = &per_q[GRID_Q.len() - 1][idx].1;
        let qe = qpow(9, *e);
        ok &= 2 * last >= qe && *last <= 4 * &qe;
        rows.push(Row::new("growth_order", format!("n={n} {name} e={e}"), "ratio falls into [1/2,4]", ok, ok, A_GROWTH));
    }
    Ok(rows)
}

pub fn inequality_rows() -> Result<Vec<Row>> {
    let mut rows = ladder_rows(8, 2..=9)?;
    rows.extend(key_inequality_rows(6, 2..=9)?);
    rows.extend(product_bound_rows(10, 3..=9)?);
    rows.extend(family_order_rows(4)?);
    Ok(rows)
}

// ---------------------------------------------------------------------------
// constructions

struct Tally {
    sizes: Vec<usize>,
    not_ekr: usize,
    not_maximal: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { sizes: Vec::new(), not_ekr: 0, not_maximal: 0 }
    }

    fn add(&mut self, s: &EkrSet<'_>, check_maximal: bool) -> Result<()> {
        self.sizes.push(s.len());
        if !s.is_ekr() {
            self.not_ekr += 1;
        } else if check_maximal && !s.is_maximal()? {
            self.not_maximal += 1;
        }
        Ok(())
    }

    fn rows(self, name: &str, params: String, closed: BigInt, check_maximal: bool) -> Vec<Row> {
        let count = self.sizes.len();
        let mut rows = vec![
            Row::equality(&format!("size_{name}"), format!("{params} instances={count}"), closed.to_string(), observed(self.sizes), A_SIZES),
            Row::equality(&format!("ekr_{name}"), params.clone(), 0, self.not_ekr, A_SIZES),
        ];
        if check_maximal {
            rows.push(Row::equality(&format!("maximal_{name}"), params, 0, self.not_maximal, A_SIZES));
        }
        rows
    }
}

/// Builds every construction (all parameters on small quadrics, seeded
/// samples otherwise) and checks size, EKR property and maximality.
pub fn construction_rows(gs: &GeneratorSet, opts: &SuiteOptions) -> Result<Vec<Row>> {
    let n = ekr::half_rank(gs)?;
    let q = gs.q() as u64;
    let all = exhaustive(gs);
    let maximal = opts.check_maximal;
    let mut rng = sample::rng(opts.seed);
    let mut rows = Vec::new();
    let base = qm(gs);

    let mut t = Tally::new();
    for c in 0..2 {
        t.add(&ekr::one_class(gs, c)?, maximal)?;
    }
    rows.extend(t.rows("one_class", base.clone(), f::size_one_class(n, q)?, maximal));

    let gens: Vec<usize> = if all {
        (0..gs.len()).collect()
    } else {
        (0..opts.samples).map(|_| sample::generator_index(gs, &mut rng)).collect()
    };
    let mut t = Tally::new();
    for &g in &gens {
        t.add(&ekr::second(gs, gs.get(g))?, maximal)?;
    }
    rows.extend(t.rows("second", base.clone(), f::size_second(n, q)?, maximal));

    let points = singular_subspaces(gs, 0, opts)?;
    let mut t = Tally::new();
    for p in &points {
        t.add(&ekr::point_pencil(gs, p)?, maximal)?;
    }
    rows.extend(t.rows("point_pencil", base.clone(), f::size_point_pencil(n, q)?, maximal));

    for k in 0..=2 * n {
        let taus = singular_subspaces(gs, k as i32, opts)?;
        for j in 0..=k {
            let mut t = Tally::new();
            let mut swapped_mismatch = 0;
            for tau in &taus {
                if k == 2 * n {
                    t.add(&ekr::family_i(gs, tau, j as i32, None)?, maximal)?;
                    continue;
                }
                for primary in 0..2 {
                    let s = ekr::family_i(gs, tau, j as i32, Some(primary))?;
                    let mirror = ekr::family_i(gs, tau, (k - j) as i32, Some(1 - primary))?;
                    swapped_mismatch += usize::from(s.members() != mirror.members());
                    t.add(&s, maximal)?;
                }
            }
            let params = format!("{base} k={k} j={j}");
            rows.extend(t.rows("family_i", params.clone(), f::size_i(n, k, j, q)?, maximal));
            if k < 2 * n {
                rows.push(Row::equality("family_i_class_swap_mismatch", params, 0, swapped_mismatch, A_SIZES));
            }
        }
    }

    for k in 0..=2 * n - 2 {
        let pairs: Vec<(Subspace, Subspace)> = if all {
            let space = gs.model().space();
            let mut v = Vec::new();
            for g in gs.generators() {
                for tau in space.enumerate_subspaces(g, k as i32)? {
                    v.push((g.clone(), tau));
                }
            }
            v
        } else {
            (0..opts.samples)
                .map(|_| sample::generator_with_subspace(gs, k as i32, &mut rng))
                .collect::<Result<_>>()?
        };
        let mut t = Tally::new();
        let mut differs_from_i = 0;
        for (pi, tau) in &pairs {
            let s = ekr::family_ii(gs, pi, tau)?;
            if k == 2 * n - 2 {
                let class = gs.label(gs.require(pi)?);
                let i_set = ekr::family_i(gs, tau, 0, Some(class))?;
                differs_from_i += usize::from(i_set.members() != s.members());
            }
            t.add(&s, maximal)?;
        }
        let params = format!("{base} k={k}");
        rows.extend(t.rows("family_ii", params.clone(), f::size_ii(n, k, q)?, maximal));
        if k == 2 * n - 2 {
            rows.push(Row::equality("family_ii_equals_family_i", params, 0, differs_from_i, A_SIZES));
        }
    }
    if n >= 2 {
        let pairs: Vec<(usize, usize)> = if all {
            oracle::pairs_with_meet(gs, (2 * n - 4) as i32)
                .into_iter()
                .filter(|&(a, b)| gs.label(a) == gs.label(b))
                .collect()
        } else {
            (0..opts.samples)
                .map(|_| sample::pair_with_meet(gs, (2 * n - 4) as i32, &mut rng))
                .collect::<Result<_>>()?
        };
        let mut t = Tally::new();
        for &(a, b) in &pairs {
            t.add(&ekr::family_iii(gs, gs.get(a), gs.get(b))?, maximal)?;
        }
        rows.extend(t.rows("family_iii", base.clone(), f::size_iii(n, q)?, maximal));
        let (i0, ii0) = (f::size_i_kk(n, 0, q)?, f::size_ii(n, 0, q)?);
        rows.push(Row::new("size_i_kk(0)!=size_ii(0)", format!("n={n} q={q}"), &i0, &ii0, i0 != ii0, A_SIZES));
    }
    Ok(rows)
}

/// Clique classification of Q+(5,q), the third-size bound and the ordering.
pub fn classification_rows(gs: &GeneratorSet, cap: usize) -> Result<Vec<Row>> {
    let c = ekr::classify_small(gs, cap)?;
    let mut rows = c.rows()?;
    rows.extend(c.bound_rows()?);
    rows.extend(c.ordering_rows()?);
    Ok(rows)
}

/// Enumerates Q+(2m+1,q) with the default caps.
pub fn generator_set(m: usize, q: u32) -> Result<GeneratorSet> {
    QuadricModel::new(m, q)?.enumerate_generators(crate::quadric::DEFAULT_GENERATOR_CAP)
}

/// Every projective space used by the skew-subspace suite lives here.
pub fn projective_space(n: usize, q: u32) -> Result<ProjectiveSpace> {
    Ok(ProjectiveSpace::new(crate::gf::FieldCtx::new(q)?, n))
}
