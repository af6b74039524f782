//! Exact Smith normal form of sparse integer matrices, over `Z` and over
//! `Z/p^k`.
//!
//! The matrix is diagonalized by sparse elimination. Pivots are taken from
//! the shortest rows holding an entry of least norm (units first), so the
//! ±1-heavy boundary matrices collapse with little fill-in. A non-dividing
//! pivot triggers Euclidean steps until the pivot divides its row and column.
//! The resulting diagonal need not be a divisibility chain; invariant factors
//! are recovered by gcd/lcm normalization.
//!
//! Over `Z` the elimination first runs on checked `i64` and restarts on
//! `BigInt` if any intermediate value overflows.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::sparse::SparseIntMatrix;

/// Euclidean-style coefficient ring driving the eliminator.
pub(crate) trait PivotRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn lift(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Pivot preference; smaller is better, units are minimal.
    fn norm(&self, a: &Self::Elem) -> u64;
    /// `(q, r)` with `b = q·a + r` where `r = 0` or `r` is strictly smaller
    /// than `a`. `None` on overflow.
    fn div_rem(&self, b: &Self::Elem, a: &Self::Elem) -> Option<(Self::Elem, Self::Elem)>;
    /// `x - q·y`, `None` on overflow.
    fn sub_mul(&self, x: &Self::Elem, q: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem>;
}

/// `Z` on checked machine words.
pub(crate) struct CheckedIntegers;

impl PivotRing for CheckedIntegers {
    type Elem = i64;

    fn lift(&self, v: i64) -> i64 {
        v
    }

    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }

    fn norm(&self, a: &i64) -> u64 {
        a.unsigned_abs()
    }

    fn div_rem(&self, b: &i64, a: &i64) -> Option<(i64, i64)> {
        let (mut q, mut r) = (b.checked_div_euclid(*a)?, b.checked_rem_euclid(*a)?);
        // centre the remainder to keep entries small
        let abs_a = a.checked_abs()?;
        if r.checked_mul(2)? > abs_a {
            r -= abs_a;
            q = if *a > 0 { q.checked_add(1)? } else { q.checked_sub(1)? };
        }
        Some((q, r))
    }

    fn sub_mul(&self, x: &i64, q: &i64, y: &i64) -> Option<i64> {
        x.checked_sub(q.checked_mul(*y)?)
    }
}

/// `Z` on arbitrary-precision integers.
pub(crate) struct BigIntegers;

impl PivotRing for BigIntegers {
    type Elem = BigInt;

    fn lift(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn norm(&self, a: &BigInt) -> u64 {
        a.abs().to_u64().unwrap_or(u64::MAX)
    }

    fn div_rem(&self, b: &BigInt, a: &BigInt) -> Option<(BigInt, BigInt)> {
        let (mut q, mut r) = b.div_mod_floor(a);
        // div_mod_floor gives r with the sign of a
        let abs_a = a.abs();
        let abs_r = r.abs();
        if &abs_r * 2u32 > abs_a {
            if a.is_positive() {
                r -= &abs_a;
                q += 1;
            } else {
                r += &abs_a;
                q += 1;
            }
        }
        Some((q, r))
    }

    fn sub_mul(&self, x: &BigInt, q: &BigInt, y: &BigInt) -> Option<BigInt> {
        Some(x - q * y)
    }
}

/// `Z/p^k` with `p^k < 2^32`; elements are residues.
pub(crate) struct PrimePowerRing {
    p: u64,
    k: u32,
    modulus: u64,
}

impl PrimePowerRing {
    pub(crate) fn new(p: u64, k: u32) -> Result<Self> {
        let modulus = p
            .checked_pow(k)
            .filter(|&q| q < 1 << 32 && k >= 1)
            .ok_or_else(|| Error::Unsupported(format!("modulus {p}^{k} is out of range")))?;
        Ok(Self { p, k, modulus })
    }

    pub(crate) fn modulus(&self) -> u64 {
        self.modulus
    }

    pub(crate) fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut a = a;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub(crate) fn inverse(&self, a: u64) -> u64 {
        // a is a unit; extended Euclid
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.modulus as i64, a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        t.rem_euclid(self.modulus as i64) as u64
    }

    pub(crate) fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }
}

impl PivotRing for PrimePowerRing {
    type Elem = u64;

    fn lift(&self, v: i64) -> u64 {
        self.reduce(v)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn norm(&self, a: &u64) -> u64 {
        self.valuation(*a) as u64
    }

    fn div_rem(&self, b: &u64, a: &u64) -> Option<(u64, u64)> {
        let (va, vb) = (self.valuation(*a), self.valuation(*b));
        if vb < va {
            return Some((0, *b));
        }
        let pa = self.p.pow(va);
        let unit_a = a / pa;
        // b / p^va is exact since vb >= va
        let q = (b / pa) % self.modulus * self.inverse(unit_a % self.modulus) % self.modulus;
        Some((q, 0))
    }

    fn sub_mul(&self, x: &u64, q: &u64, y: &u64) -> Option<u64> {
        let prod = q * y % self.modulus;
        Some((x + self.modulus - prod) % self.modulus)
    }
}

/// Sparse row-oriented eliminator.
pub(crate) struct Eliminator<'r, R: PivotRing> {
    ring: &'r R,
    rows: Vec<Vec<(u32, R::Elem)>>,
    alive: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    version: Vec<u32>,
    heap: BinaryHeap<Reverse<(u64, u32, u32, u32)>>,
    diagonal: Vec<R::Elem>,
}

impl<'r, R: PivotRing> Eliminator<'r, R> {
    /// Rows are sparse vectors over `ncols` columns with sorted indices.
    pub(crate) fn new(ring: &'r R, ncols: usize, input: impl IntoIterator<Item = Vec<(u32, i64)>>) -> Self {
        let mut rows = Vec::new();
        for row in input {
            let row: Vec<(u32, R::Elem)> = row
                .into_iter()
                .map(|(c, v)| (c, ring.lift(v)))
                .filter(|(_, v)| !ring.is_zero(v))
                .collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
        let mut col_rows = vec![Vec::new(); ncols];
        let mut col_count = vec![0u32; ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c as usize].push(r as u32);
                col_count[*c as usize] += 1;
            }
        }
        let n = rows.len();
        let mut elim = Self {
            ring,
            rows,
            alive: vec![true; n],
            col_rows,
            col_count,
            version: vec![0; n],
            heap: BinaryHeap::with_capacity(n),
            diagonal: Vec::new(),
        };
        for r in 0..n {
            elim.push(r as u32);
        }
        elim
    }

    fn push(&mut self, r: u32) {
        let row = &self.rows[r as usize];
        let norm = row.iter().map(|(_, v)| self.ring.norm(v)).min().unwrap_or(0);
        self.heap.push(Reverse((norm, row.len() as u32, self.version[r as usize], r)));
    }

    fn value(&self, r: u32, c: u32) -> Option<&R::Elem> {
        let row = &self.rows[r as usize];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
    }

    /// Runs to completion and returns the (unnormalized) diagonal.
    pub(crate) fn run(mut self) -> Result<Vec<R::Elem>> {
        while let Some(Reverse((_, _, ver, r))) = self.heap.pop() {
            let ri = r as usize;
            if !self.alive[ri] || self.version[ri] != ver {
                continue;
            }
            if self.rows[ri].is_empty() {
                self.alive[ri] = false;
                continue;
            }
            let c = self.choose_column(r);
            self.pivot(r, c)?;
        }
        Ok(self.diagonal)
    }

    fn choose_column(&self, r: u32) -> u32 {
        let row = &self.rows[r as usize];
        row.iter()
            .min_by_key(|(c, v)| (self.ring.norm(v), self.col_count[*c as usize]))
            .map(|e| e.0)
            .expect("non-empty row")
    }

    /// `rows[target] -= q · pivot_row`, keeping column bookkeeping exact.
    fn row_sub(&mut self, target: u32, q: &R::Elem, pivot_row: &[(u32, R::Elem)]) -> Result<()> {
        let old = std::mem::take(&mut self.rows[target as usize]);
        let mut out = Vec::with_capacity(old.len() + pivot_row.len());
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < pivot_row.len() {
            let ci = old.get(i).map_or(u32::MAX, |e| e.0);
            let cj = pivot_row.get(j).map_or(u32::MAX, |e| e.0);
            if ci < cj {
                out.push(old[i].clone());
                i += 1;
            } else if cj < ci {
                let zero = self.ring.lift(0);
                let v = self.ring.sub_mul(&zero, q, &pivot_row[j].1).ok_or(Error::Overflow)?;
                if !self.ring.is_zero(&v) {
                    self.col_count[cj as usize] += 1;
                    self.col_rows[cj as usize].push(target);
                    out.push((cj, v));
                }
                j += 1;
            } else {
                let v = self.ring.sub_mul(&old[i].1, q, &pivot_row[j].1).ok_or(Error::Overflow)?;
                if self.ring.is_zero(&v) {
                    self.col_count[ci as usize] -= 1;
                } else {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[target as usize] = out;
        Ok(())
    }

    fn pivot(&mut self, mut r: u32, mut c: u32) -> Result<()> {
        let mut touched: Vec<u32> = Vec::new();
        loop {
            // clear column c below/above the pivot
            let a = self.value(r, c).expect("pivot present").clone();
            let mut others = std::mem::take(&mut self.col_rows[c as usize]);
            others.sort_unstable();
            others.dedup();
            others.retain(|&o| o != r && self.alive[o as usize] && self.value(o, c).is_some());
            let pivot_row = std::mem::take(&mut self.rows[r as usize]);
            let mut best: Option<(u64, u32)> = None;
            let mut remaining = vec![r];
            for &o in &others {
                let b = self.value(o, c).expect("checked").clone();
                let (q, rem) = self.ring.div_rem(&b, &a).ok_or(Error::Overflow)?;
                if !self.ring.is_zero(&q) {
                    self.row_sub(o, &q, &pivot_row)?;
                }
                touched.push(o);
                if !self.ring.is_zero(&rem) {
                    remaining.push(o);
                    let n = self.ring.norm(&rem);
                    if best.is_none_or(|(bn, _)| n < bn) {
                        best = Some((n, o));
                    }
                }
            }
            self.rows[r as usize] = pivot_row;
            self.col_rows[c as usize] = remaining;
            if let Some((_, o)) = best {
                touched.push(r);
                r = o;
                continue;
            }

            // column c now holds only the pivot: reduce row r by column operations
            let row = std::mem::take(&mut self.rows[r as usize]);
            let mut reduced = Vec::with_capacity(row.len());
            let mut best_col: Option<(u64, u32)> = None;
            for (j, b) in row {
                if j == c {
                    reduced.push((j, b));
                    continue;
                }
                let (_, rem) = self.ring.div_rem(&b, &a).ok_or(Error::Overflow)?;
                if self.ring.is_zero(&rem) {
                    self.col_count[j as usize] -= 1;
                } else {
                    let n = self.ring.norm(&rem);
                    if best_col.is_none_or(|(bn, _)| n < bn) {
                        best_col = Some((n, j));
                    }
                    reduced.push((j, rem));
                }
            }
            self.rows[r as usize] = reduced;
            if let Some((_, j)) = best_col {
                c = j;
                continue;
            }

            self.diagonal.push(a);
            self.alive[r as usize] = false;
            self.rows[r as usize] = Vec::new();
            self.col_count[c as usize] = 0;
            self.col_rows[c as usize] = Vec::new();
            break;
        }
        touched.sort_unstable();
        touched.dedup();
        for o in touched {
            if self.alive[o as usize] {
                self.version[o as usize] += 1;
                self.push(o);
            }
        }
        Ok(())
    }
}

/// Rank and invariant factors (those `> 1`, ascending in divisibility order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    pub invariant_factors: Vec<BigUint>,
}

/// Columns of `a` as eliminator rows, with exact duplicates (up to sign)
/// removed; they span the same lattice.
fn generator_rows(a: &SparseIntMatrix, canonical_sign: bool) -> Vec<Vec<(u32, i64)>> {
    let mut cols: Vec<Vec<(u32, i64)>> = (0..a.cols())
        .map(|c| a.column(c).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .map(|mut c| {
            if canonical_sign && c[0].1 < 0 {
                c.iter_mut().for_each(|e| e.1 = -e.1);
            }
            c
        })
        .collect();
    cols.sort_unstable();
    cols.dedup();
    cols
}

/// Converts a diagonal into invariant factors `d_1 | d_2 | …`, dropping units.
pub fn invariant_factors(diagonal: impl IntoIterator<Item = BigUint>) -> Vec<BigUint> {
    let mut d: Vec<BigUint> = diagonal.into_iter().filter(|x| !x.is_one() && !x.is_zero()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|x| !x.is_one());
    d
}

/// Exact Smith normal form over `Z`.
pub fn smith_normal_form(a: &SparseIntMatrix) -> SmithForm {
    let rows = generator_rows(a, true);
    let diagonal: Vec<BigUint> = match Eliminator::new(&CheckedIntegers, a.rows(), rows.iter().cloned()).run() {
        Ok(diag) => diag.into_iter().map(|v| BigUint::from(v.unsigned_abs())).collect(),
        Err(_) => Eliminator::new(&BigIntegers, a.rows(), rows)
            .run()
            .expect("big integer elimination cannot overflow")
            .into_iter()
            .map(|v| v.magnitude().clone())
            .collect(),
    };
    SmithForm { rank: diagonal.len(), invariant_factors: invariant_factors(diagonal) }
}

/// Smith form over `Z/p^k`: the valuations of the nonzero diagonal entries.
/// Valuation 0 entries are units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSmithForm {
    pub p: u64,
    pub k: u32,
    pub valuations: Vec<u32>,
}

impl LocalSmithForm {
    /// Number of nonzero diagonal entries.
    pub fn nonzero(&self) -> usize {
        self.valuations.len()
    }

    /// Diagonal entries `p^v` with `0 < v < k`.
    pub fn proper_divisors(&self) -> impl Iterator<Item = u64> + '_ {
        self.valuations.iter().filter(|&&v| v > 0).map(move |&v| self.p.pow(v))
    }
}

/// Smith form of `a` reduced modulo `p^k`.
pub fn smith_normal_form_mod_prime_power(a: &SparseIntMatrix, p: u64, k: u32) -> Result<LocalSmithForm> {
    let ring = PrimePowerRing::new(p, k)?;
    let rows = generator_rows(a, false);
    let diagonal = Eliminator::new(&ring, a.rows(), rows).run()?;
    let mut valuations: Vec<u32> = diagonal.iter().map(|&d| ring.valuation(d)).collect();
    valuations.sort_unstable();
    Ok(LocalSmithForm { p, k, valuations })
}

/// Rank over `GF(p)`.
pub fn rank_mod_prime(a: &SparseIntMatrix, p: u64) -> Result<usize> {
    Ok(smith_normal_form_mod_prime_power(a, p, 1)?.nonzero())
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
