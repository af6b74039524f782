//! Independent oracles and property suites shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ybh_core::links::random_braids;
use ybh_core::*;

pub type Check = Result<(), String>;

/// Every builtin that is a Rump right quasigroup, with its size.
pub fn rump_builtins() -> Vec<FiniteMagma> {
    let mut specs: Vec<String> = (1..=6).map(|n| format!("cyclic:{n}")).collect();
    specs.extend((1..=4).map(|n| format!("trivial:{n}")));
    specs.extend(["dihedral:2", "dihedral:4", "alexander:4:3", "alexander:9:4", "x4", "x16"].map(String::from));
    specs
        .iter()
        .map(|s| FiniteMagma::builtin(s).unwrap().with_name(s.as_str()))
        .inspect(|m| assert!(m.is_rump(), "{:?}", m.name()))
        .collect()
}

fn label(m: &FiniteMagma) -> &str {
    m.name().unwrap_or("?")
}

// ---------------------------------------------------------------------------
// Smith normal form by determinantal divisors.

fn det_bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect()).collect()
}

/// Rank and invariant factors `d_k / d_{k-1}`, with `d_k` the gcd of the
/// `k × k` minors.
pub fn snf_by_minors(a: &[Vec<i64>]) -> (usize, Vec<BigUint>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c] as i128).collect()).collect();
                g = g.gcd(&det_bareiss(minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    let factors = divisors
        .windows(2)
        .map(|w| BigUint::from((w[1] / w[0]) as u128))
        .filter(|d| *d != BigUint::from(1u8))
        .collect();
    (divisors.len() - 1, factors)
}

pub fn random_matrix(rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    let density = rng.gen_range(0.2..=1.0);
    (0..rows)
        .map(|_| (0..cols).map(|_| if rng.gen_bool(density) { rng.gen_range(-5..=5) } else { 0 }).collect())
        .collect()
}

pub fn snf_matches_minors(a: &[Vec<i64>]) -> Check {
    let snf = smith_normal_form(&SparseIntMatrix::from_dense(a));
    let (rank, factors) = snf_by_minors(a);
    if snf.rank != rank || snf.invariant_factors != factors {
        return Err(format!("{a:?}: sparse gives rank {} {:?}, minors give rank {rank} {factors:?}", snf.rank, snf.invariant_factors));
    }
    Ok(())
}

pub fn snf_oracle_suite(count: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).try_for_each(|_| snf_matches_minors(&random_matrix(&mut rng)))
}

// ---------------------------------------------------------------------------
// ∂₃ from the explicit six-term expansion.

/// `∂(x, y, z) = (y, z) − (y(x/y), z((x/y)/z)) − (x/y, z) + (x, z(y/z))
///  + (x/(z(y/z)), y/z) − (x, y)`.
pub fn six_term(m: &FiniteMagma, x: u32, y: u32, z: u32) -> SignedTupleSum {
    let d = |a, b| m.right_divide(a, b).unwrap();
    let xy = d(x, y);
    let yz = d(y, z);
    let zyz = m.op(z, yz);
    SignedTupleSum::from_terms([
        (1, vec![y, z]),
        (-1, vec![m.op(y, xy), m.op(z, d(xy, z))]),
        (-1, vec![xy, z]),
        (1, vec![x, zyz]),
        (1, vec![d(x, zyz), yz]),
        (-1, vec![x, y]),
    ])
}

pub fn six_term_suite(triples_per_magma: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in rump_builtins() {
        let cx = ChainComplex::from_magma(&m).unwrap();
        let d3 = cx.boundary_matrix(3, Theory::Yb).unwrap();
        let tb = TupleBasis::new(m.size(), 3).unwrap();
        let tb2 = TupleBasis::new(m.size(), 2).unwrap();
        let n = m.size() as u32;
        for _ in 0..triples_per_magma {
            let t = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
            let column = SignedTupleSum::from_terms(d3.column(tb.rank(&t) as usize).map(|(r, v)| (v, tb2.unrank(r))));
            let expected = six_term(&m, t[0], t[1], t[2]);
            if column != expected || cx.boundary_of(&t) != expected {
                return Err(format!("{} at {t:?}: matrix {column}, formula {expected}", label(&m)));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Exhaustive right quasigroups.

fn permutations(m: usize) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for i in 0..m {
            let mut q = p.clone();
            q.insert(i, (m - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// Every right quasigroup on `0..m`: column `y` is a permutation `x ↦ xy`.
pub fn right_quasigroups(m: usize) -> impl Iterator<Item = FiniteMagma> {
    let perms = permutations(m);
    let total = perms.len().pow(m as u32);
    (0..total).map(move |mut code| {
        let mut table = vec![0u32; m * m];
        for y in 0..m {
            let p = &perms[code % perms.len()];
            code /= perms.len();
            for x in 0..m {
                table[x * m + y] = p[x];
            }
        }
        FiniteMagma::from_zero_based(m, table, None).unwrap()
    })
}

/// The Rump magmas among all right quasigroups of order `m`.
pub fn rump_magmas(m: usize) -> Vec<FiniteMagma> {
    right_quasigroups(m).filter(FiniteMagma::is_rump).collect()
}

/// Number of isomorphism classes: smallest relabelled table as the key.
pub fn isomorphism_classes(magmas: &[FiniteMagma]) -> usize {
    let mut keys = std::collections::BTreeSet::new();
    for magma in magmas {
        let m = magma.size();
        let key = permutations(m)
            .iter()
            .map(|p| {
                // table of p(x)·p(y) = p(xy)
                let mut t = vec![0u32; m * m];
                for x in 0..m as u32 {
                    for y in 0..m as u32 {
                        t[p[x as usize] as usize * m + p[y as usize] as usize] = p[magma.op(x, y) as usize];
                    }
                }
                t
            })
            .min()
            .unwrap();
        keys.insert(key);
    }
    keys.len()
}

// ---------------------------------------------------------------------------
// Property suites.

pub fn boundary_suite() -> Check {
    for m in rump_builtins() {
        let n_max = match m.size() {
            s if s <= 4 => 5,
            s if s <= 6 => 4,
            _ => 3,
        };
        let report = ChainComplex::from_magma(&m).unwrap().verify(n_max).unwrap();
        if !report.boundary_squared_zero || report.degenerate_subcomplex != Some(true) {
            return Err(format!("{}: {:?}", label(&m), report.counterexamples));
        }
        if report.kappa_asserted && report.kappa_chain_map != Some(true) {
            return Err(format!("{}: kappa is not a chain map", label(&m)));
        }
    }
    Ok(())
}

pub fn kappa_suite() -> Check {
    for n in 2..=6 {
        let m = FiniteMagma::builtin(&format!("cyclic:{n}")).unwrap();
        let cx = ChainComplex::from_magma(&m).unwrap();
        let degree = if n <= 4 { 5 } else { 4 };
        if let Some(c) = cx.kappa_chain_map_failure(degree).unwrap() {
            return Err(format!("cyclic:{n}: {c}"));
        }
    }
    for m in rump_builtins().into_iter().filter(|m| m.size() <= 4) {
        let cx = ChainComplex::from_magma(&m).unwrap();
        for n in 1..=4 {
            let tb = TupleBasis::new(m.size(), n).unwrap();
            for idx in 0..tb.len() as u32 {
                let t = tb.unrank(idx);
                let mut rest = SignedTupleSum::from_terms([(1, t.clone())]);
                rest.add_sum(-1, &cx.kappa(&t).unwrap());
                let bad = rest.terms().find(|(_, s)| !cx.is_degenerate_tuple(s).unwrap()).map(|(_, s)| s.to_vec());
                if let Some(s) = bad {
                    return Err(format!("{}: (id - κ){t:?} has non-degenerate term {s:?}", label(&m)));
                }
            }
        }
    }
    Ok(())
}

pub fn identity_suite() -> Check {
    for m in rump_builtins() {
        let failures = m.rump_identity_failures().unwrap();
        if !failures.is_empty() {
            return Err(format!("{}: {failures:?}", label(&m)));
        }
        // exactly one y with x(y/x) = y, namely xx
        for x in 0..m.size() as u32 {
            let ys: Vec<u32> =
                (0..m.size() as u32).filter(|&y| m.op(x, m.right_divide(y, x).unwrap()) == y).collect();
            if ys != [m.square(x)] {
                return Err(format!("{}: solutions {ys:?} for x={x}", label(&m)));
            }
        }
    }
    Ok(())
}

pub fn roundtrip_suite() -> Check {
    let mut magmas = rump_builtins();
    for m in 1..=3 {
        magmas.extend(rump_magmas(m));
    }
    for m in &magmas {
        let r = from_rump(m).unwrap();
        let report = verify_solution(&r);
        if !(report.ybe && report.involutive && report.right_nondegenerate) {
            return Err(format!("{}: {report:?}", label(m)));
        }
        if to_rump(&r).unwrap() != *m || from_rump(&to_rump(&r).unwrap()).unwrap() != r {
            return Err(format!("{}: roundtrip failed", label(m)));
        }
    }
    // solutions to magmas: every involutive right non-degenerate solution on two points
    for code in 0u32..256 {
        let pairs: Vec<(u32, u32)> = (0..4).map(|i| ((code >> (2 * i)) & 1, (code >> (2 * i + 1)) & 1)).collect();
        let r = YBMap::new(2, pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect()).unwrap();
        let report = verify_solution(&r);
        if report.ybe && report.involutive && report.right_nondegenerate {
            let m = to_rump(&r).map_err(|e| format!("{r:?}: {e}"))?;
            if !m.is_rump() || from_rump(&m).unwrap() != r {
                return Err(format!("{r:?}: does not come from a Rump magma"));
            }
        }
    }
    Ok(())
}

/// Prop. 1.2 over every Rump magma of order at most `max_order`.
pub fn divisibility_suite(max_order: usize) -> Check {
    for m in 1..=max_order {
        for magma in rump_magmas(m) {
            let s = magma.structure_report();
            let left = verify_solution(&from_rump(&magma).unwrap()).left_nondegenerate;
            if !s.uniquely_2_divisible || !s.delta_bijective || left != s.uniquely_2_divisible {
                return Err(format!("{magma:?}: {s:?}, left non-degenerate {left}"));
            }
        }
    }
    Ok(())
}

pub fn family_suite() -> Check {
    for n in 2..=12u64 {
        let dihedral = FiniteMagma::builtin(&format!("dihedral:{n}")).unwrap();
        if dihedral.is_rump() != (4 % n == 0) {
            return Err(format!("dihedral:{n}"));
        }
        for t in 1..n {
            if t.gcd(&n) != 1 {
                continue;
            }
            let alexander = FiniteMagma::builtin(&format!("alexander:{n}:{t}")).unwrap();
            let annihilates = ((1 + n - t) % n).pow(2) % n == 0;
            if alexander.is_rump() != annihilates {
                return Err(format!("alexander:{n}:{t}"));
            }
        }
        let cyclic = FiniteMagma::builtin(&format!("cyclic:{n}")).unwrap();
        if !cyclic.is_rump() || !is_cyclic_rack(&cyclic) {
            return Err(format!("cyclic:{n}"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Links.

/// Nonzero normalized 2-cocycles mod 2 from the cohomology generators.
pub fn mod_two_cocycles(m: &FiniteMagma) -> Vec<CocycleTable> {
    let cx = ChainComplex::from_magma(m).unwrap();
    let c = cohomology(&cx, 2, Theory::Normalized, 2, Limits::default()).unwrap();
    c.cocycles.iter().map(|g| CocycleTable::from_cochain(g, m.size()).unwrap()).collect()
}

/// 50 random braids with at most 4 strands and 8 letters; 10 conjugations
/// and both stabilizations each.
pub fn markov_suite(spec: &str, extra: &[CocycleTable], seed: u64) -> Check {
    let m = FiniteMagma::builtin(spec).unwrap();
    let mut tables = mod_two_cocycles(&m);
    tables.extend(extra.iter().cloned());
    if tables.is_empty() {
        return Err(format!("{spec}: no cocycles"));
    }
    for phi in &tables {
        phi.verify(&m).map_err(|e| format!("{spec}: {e}"))?;
    }
    for (i, braid) in random_braids(seed, 50, 4, 8).iter().enumerate() {
        let phi = &tables[i % tables.len()];
        let report = markov_check(&m, phi, braid, 10, seed + i as u64).unwrap();
        if let Some(f) = report.failures.first() {
            return Err(format!("{spec}: {} gives {} instead of {}", f.moved, f.found, f.expected));
        }
        if report.moves_checked != 12 {
            return Err(format!("{spec}: {} moves", report.moves_checked));
        }
    }
    Ok(())
}

pub fn example_suite() -> Check {
    let c4 = FiniteMagma::builtin("cyclic:4").unwrap();
    let phi = CocycleTable::parse("builtin:product-mod:2", 4).unwrap();
    for n in 1..=3 {
        let value = invariant(&c4, &phi, &BraidWord::power(2 * (2 * n - 1))).map_err(|e| e.to_string())?;
        if value != GroupRingElement::from_counts(2, [(0, 8), (1, 8)]) {
            return Err(format!("n={n}: {value}"));
        }
    }
    let unlink = invariant(&c4, &phi, &parse_braid("", Some(2)).unwrap()).map_err(|e| e.to_string())?;
    if unlink != GroupRingElement::from_counts(2, [(0, 16)]) {
        return Err(format!("unlink: {unlink}"));
    }
    Ok(())
}
