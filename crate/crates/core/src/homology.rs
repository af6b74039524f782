//! Integral and mod-`m` (co)homology of the Yang-Baxter complexes, cocycle
//! bases and the splitting check `H^YB ≅ H^NYB ⊕ H^D`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteMagma;
use crate::complex::{ChainComplex, Theory, TupleBasis};
use crate::error::{Error, Result};
use crate::snf::{
    factorize, invariant_factors, smith_normal_form, smith_normal_form_mod_prime_power, PrimePowerRing, SmithForm,
};
use crate::sparse::SparseIntMatrix;

/// A finitely generated abelian group `Z^r ⊕ Z_{d_1} ⊕ … ⊕ Z_{d_k}` with
/// `1 < d_1 | d_2 | … | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl AbelianGroupInvariants {
    /// Builds the group from any cyclic decomposition; factors are normalized.
    pub fn new(free_rank: usize, cyclic_orders: &[u64]) -> Self {
        Self::from_cyclic(free_rank, cyclic_orders.iter().map(|&d| BigUint::from(d)))
    }

    pub fn from_cyclic(free_rank: usize, orders: impl IntoIterator<Item = BigUint>) -> Self {
        Self { free_rank, torsion: invariant_factors(orders) }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic(self.free_rank + other.free_rank, self.torsion.iter().chain(&other.torsion).cloned())
    }

    /// Number of invariant factors divisible by `p`.
    pub fn torsion_divisible_by(&self, p: u64) -> usize {
        self.torsion.iter().filter(|d| (*d % p).to_u64() == Some(0)).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let torsion = self
            .torsion
            .iter()
            .map(|d| serde_json::Value::Number(serde_json::Number::from_str(&d.to_string()).expect("integer")))
            .collect();
        serde_json::json!({ "rank": self.free_rank, "torsion": serde_json::Value::Array(torsion) })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad group JSON `{value}`"));
        let rank = value.get("rank").and_then(|r| r.as_u64()).ok_or_else(bad)? as usize;
        let torsion = value
            .get("torsion")
            .and_then(|t| t.as_array())
            .ok_or_else(bad)?
            .iter()
            .map(|d| match d {
                serde_json::Value::Number(n) => BigUint::from_str(&n.to_string()).map_err(|_| bad()),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_cyclic(rank, torsion))
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            parts.push(if run == 1 { format!("Z_{d}") } else { format!("Z_{d}^{run}") });
            i += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl FromStr for AbelianGroupInvariants {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad group `{s}`"));
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut free_rank = 0;
        let mut torsion = Vec::new();
        for part in s.split('+').map(str::trim) {
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            if base == "Z" {
                free_rank += exp;
            } else if let Some(order) = base.strip_prefix("Z_") {
                let d = BigUint::from_str(order).map_err(|_| bad())?;
                if d <= BigUint::one() {
                    return Err(bad());
                }
                torsion.extend(std::iter::repeat_n(d, exp));
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic(free_rank, torsion))
    }
}

/// Coefficients of a (co)homology computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Modulo(u64),
}

impl Coefficients {
    /// `0` means the integers.
    pub fn from_modulus(m: u64) -> Result<Self> {
        match m {
            0 => Ok(Coefficients::Integers),
            1 => Err(Error::Unsupported("modulus must be 0 (integers) or at least 2".into())),
            m => Ok(Coefficients::Modulo(m)),
        }
    }
}

/// Size cap on boundary matrices.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Largest number of columns of `∂_{n+1}` (that is, `m^{n+1}`).
    pub max_columns: u64,
    pub force: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_columns: 1 << 16, force: false }
    }
}

impl Limits {
    pub fn forced() -> Self {
        Self { force: true, ..Self::default() }
    }

    fn check(&self, m: usize, n: usize) -> Result<()> {
        let cols = (m as u64).checked_pow(n as u32);
        match cols {
            Some(c) if self.force || c <= self.max_columns => Ok(()),
            _ => Err(Error::ResourceLimit(format!(
                "∂_{n} over {m} elements needs {m}^{n} columns (cap {}; use force)",
                self.max_columns
            ))),
        }
    }
}

/// `(theory, degree, p, k)`.
type LocalKey = (Theory, usize, u64, u32);

/// Computes and caches boundary Smith forms for one complex.
pub struct HomologyCalculator<'a> {
    complex: &'a ChainComplex,
    limits: Limits,
    integral: HashMap<(Theory, usize), SmithForm>,
    local: HashMap<LocalKey, (usize, Vec<u64>)>,
}

impl<'a> HomologyCalculator<'a> {
    pub fn new(complex: &'a ChainComplex, limits: Limits) -> Self {
        Self { complex, limits, integral: HashMap::new(), local: HashMap::new() }
    }

    fn boundary(&self, n: usize, theory: Theory) -> Result<SparseIntMatrix> {
        self.limits.check(self.complex.size(), n)?;
        self.complex.boundary_matrix(n, theory)
    }

    fn dim(&self, n: usize, theory: Theory) -> Result<usize> {
        Ok(self.complex.basis(n, theory)?.len())
    }

    /// Smith form of `∂_n` over `Z`.
    pub fn boundary_smith(&mut self, n: usize, theory: Theory) -> Result<&SmithForm> {
        if !self.integral.contains_key(&(theory, n)) {
            let snf = smith_normal_form(&self.boundary(n, theory)?);
            self.integral.insert((theory, n), snf);
        }
        Ok(&self.integral[&(theory, n)])
    }

    /// `(nonzero diagonal count, proper divisors p^v)` of `∂_n` mod `p^k`.
    fn boundary_local(&mut self, n: usize, theory: Theory, p: u64, k: u32) -> Result<(usize, Vec<u64>)> {
        let key = (theory, n, p, k);
        if !self.local.contains_key(&key) {
            let local = smith_normal_form_mod_prime_power(&self.boundary(n, theory)?, p, k)?;
            self.local.insert(key, (local.nonzero(), local.proper_divisors().collect()));
        }
        Ok(self.local[&key].clone())
    }

    pub fn homology(&mut self, n: usize, theory: Theory, coefficients: Coefficients) -> Result<AbelianGroupInvariants> {
        if n == 0 {
            return Err(Error::IndexOutOfRange { index: 0, max: usize::MAX });
        }
        self.limits.check(self.complex.size(), n + 1)?;
        let dim = self.dim(n, theory)?;
        match coefficients {
            Coefficients::Integers => {
                let rank_in = self.boundary_smith(n, theory)?.rank;
                let out = self.boundary_smith(n + 1, theory)?.clone();
                Ok(AbelianGroupInvariants { free_rank: dim - rank_in - out.rank, torsion: out.invariant_factors })
            }
            Coefficients::Modulo(m) => {
                let mut orders = Vec::new();
                for (p, k) in factorize(m) {
                    let (nz_in, div_in) = self.boundary_local(n, theory, p, k)?;
                    let (nz_out, div_out) = self.boundary_local(n + 1, theory, p, k)?;
                    let full = p.pow(k);
                    orders.extend(std::iter::repeat_n(full, dim - nz_in - nz_out));
                    orders.extend(div_in);
                    orders.extend(div_out);
                }
                Ok(AbelianGroupInvariants::new(0, &orders))
            }
        }
    }
}

/// `H_n` of one theory; a thin wrapper over [`HomologyCalculator`].
pub fn homology(
    complex: &ChainComplex,
    n: usize,
    theory: Theory,
    coefficients: Coefficients,
    limits: Limits,
) -> Result<AbelianGroupInvariants> {
    HomologyCalculator::new(complex, limits).homology(n, theory, coefficients)
}

/// A cochain on the theory's basis of `C_n`, valued in `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub modulus: u64,
    pub theory: Theory,
    /// `(tuple rank, value)` for the basis tuples, in basis order.
    pub values: Vec<(u32, u64)>,
}

/// `H^n(C; Z/m)` together with a generating set of the `n`-cocycles.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub group: AbelianGroupInvariants,
    pub cocycles: Vec<Cochain>,
}

/// Largest `dim C_n · dim C_{n+1}` for which explicit cocycles are produced.
const MAX_DENSE_ENTRIES: usize = 1 << 26;

pub fn cohomology(complex: &ChainComplex, n: usize, theory: Theory, modulus: u64, limits: Limits) -> Result<Cohomology> {
    if modulus < 2 {
        return Err(Error::Unsupported("cohomology needs a modulus >= 2".into()));
    }
    // over Z/m the cohomology of a free complex is isomorphic to its homology
    let group = homology(complex, n, theory, Coefficients::Modulo(modulus), limits)?;
    let cols = complex.basis(n, theory)?;
    let rows = complex.basis(n + 1, theory)?;
    if cols.len().saturating_mul(rows.len().max(1)) > MAX_DENSE_ENTRIES && !limits.force {
        return Err(Error::ResourceLimit(format!(
            "explicit cocycles need a dense {}x{} matrix",
            rows.len(),
            cols.len()
        )));
    }
    let boundary = complex.boundary_matrix(n + 1, theory)?;
    let mut generators: Vec<Vec<u64>> = Vec::new();
    for (p, k) in factorize(modulus) {
        let q = p.pow(k);
        let idempotent = crt_idempotent(q, modulus / q);
        for g in left_kernel_mod_prime_power(&boundary, cols.len(), p, k)? {
            generators.push(g.iter().map(|&x| (x as u128 * idempotent as u128 % modulus as u128) as u64).collect());
        }
    }
    let cocycles = generators
        .into_iter()
        .filter(|g| g.iter().any(|&x| x != 0))
        .map(|g| Cochain { degree: n, modulus, theory, values: cols.iter().copied().zip(g).collect() })
        .collect();
    Ok(Cohomology { group, cocycles })
}

/// `e ≡ 1 (mod q)`, `e ≡ 0 (mod r)` for coprime `q, r`.
fn crt_idempotent(q: u64, r: u64) -> u64 {
    if r == 1 {
        return 1;
    }
    // r · (r⁻¹ mod q)
    let inv = (1..q).find(|&x| (r % q) * x % q == 1).unwrap_or(0);
    r * inv % (q * r)
}

/// Generators of `{φ : φ ∘ ∂ = 0}` over `Z/p^k`, with `φ` indexed by the
/// rows of `boundary`.
fn left_kernel_mod_prime_power(boundary: &SparseIntMatrix, dim: usize, p: u64, k: u32) -> Result<Vec<Vec<u64>>> {
    let ring = PrimePowerRing::new(p, k)?;
    let modulus = ring.modulus();
    // A = ∂ᵀ: one row per column of ∂, one column per cochain coordinate
    let mut a: Vec<Vec<u64>> = (0..boundary.cols())
        .map(|c| {
            let mut row = vec![0u64; dim];
            for (r, v) in boundary.column(c) {
                row[r as usize] = ring.reduce(v);
            }
            row
        })
        .filter(|row| row.iter().any(|&x| x != 0))
        .collect();
    // columns of v track the column operations applied to a
    let mut v: Vec<Vec<u64>> = (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
    let mut pivots: Vec<u32> = Vec::new();
    let mut t = 0;
    while t < a.len().min(dim) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let val = ring.valuation(x);
                    if best.is_none_or(|b| val < b.0) {
                        best = Some((val, i, j));
                    }
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((val, i, j)) = best else { break };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        for row in v.iter_mut() {
            row.swap(t, j);
        }
        let scale = p.pow(val);
        let unit_inv = ring.inverse(a[t][t] / scale);
        let pivot_row = a[t].clone();
        for row in a.iter_mut().skip(t + 1) {
            if row[t] != 0 {
                let f = row[t] / scale % modulus * unit_inv % modulus;
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(t) {
                    *x = (*x + modulus - f * y % modulus) % modulus;
                }
            }
        }
        for jj in t + 1..dim {
            let x = a[t][jj];
            if x != 0 {
                let f = x / scale % modulus * unit_inv % modulus;
                a[t][jj] = 0;
                for row in v.iter_mut() {
                    row[jj] = (row[jj] + modulus - f * row[t] % modulus) % modulus;
                }
            }
        }
        pivots.push(val);
        t += 1;
    }
    let mut out = Vec::new();
    for j in 0..dim {
        let factor = match pivots.get(j) {
            Some(&0) => continue,
            Some(&val) => p.pow(k - val),
            None => 1,
        };
        out.push(v.iter().map(|row| row[j] * factor % modulus).collect());
    }
    Ok(out)
}

/// A 2-cochain `φ: X × X → Z/m` given on all pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleTable {
    size: usize,
    modulus: u64,
    values: Vec<u64>,
}

impl CocycleTable {
    pub fn new(size: usize, modulus: u64, values: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Cocycle("modulus must be at least 2".into()));
        }
        if values.len() != size * size || values.iter().any(|&v| v >= modulus) {
            return Err(Error::Cocycle(format!("need {} values in 0..{modulus}", size * size)));
        }
        Ok(Self { size, modulus, values })
    }

    pub fn zero(size: usize, modulus: u64) -> Self {
        Self { size, modulus, values: vec![0; size * size] }
    }

    pub fn from_fn(size: usize, modulus: u64, f: impl Fn(u32, u32) -> u64) -> Self {
        let values = (0..size * size).map(|i| f((i / size) as u32, (i % size) as u32) % modulus).collect();
        Self { size, modulus, values }
    }

    /// `φ(x, y) = x·y mod k` on the integer representatives `0..m`.
    pub fn product_mod(size: usize, k: u64) -> Self {
        Self::from_fn(size, k, |x, y| x as u64 * y as u64)
    }

    /// Parses `builtin:product-mod:k`, `builtin:zero:k`, or the cocycle file
    /// format: `mod m`, then `x y v` lines (0-based); missing pairs are 0.
    pub fn parse(spec_or_text: &str, size: usize) -> Result<Self> {
        if let Some(rest) = spec_or_text.strip_prefix("builtin:") {
            let (kind, k) = rest.rsplit_once(':').ok_or_else(|| Error::Parse(format!("bad cocycle `{spec_or_text}`")))?;
            let k: u64 = k.parse().map_err(|_| Error::Parse(format!("bad modulus in `{spec_or_text}`")))?;
            if k < 2 {
                return Err(Error::Cocycle("modulus must be at least 2".into()));
            }
            return match kind {
                "product-mod" => Ok(Self::product_mod(size, k)),
                "zero" => Ok(Self::zero(size, k)),
                _ => Err(Error::Parse(format!("unknown builtin cocycle `{kind}`"))),
            };
        }
        let mut lines = spec_or_text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty cocycle file".into()))?;
        let modulus: u64 = header
            .strip_prefix("mod")
            .and_then(|m| m.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `mod m`, got `{header}`")))?;
        let mut table = Self::zero(size, modulus.max(2));
        if modulus < 2 {
            return Err(Error::Cocycle("modulus must be at least 2".into()));
        }
        for line in lines {
            let f: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad cocycle line `{line}`"))))
                .collect::<Result<_>>()?;
            let [x, y, v] = f[..] else {
                return Err(Error::Parse(format!("bad cocycle line `{line}`")));
            };
            if x as usize >= size || y as usize >= size || v >= modulus {
                return Err(Error::Parse(format!("cocycle entry `{line}` out of range")));
            }
            table.values[x as usize * size + y as usize] = v;
        }
        Ok(table)
    }

    /// File format rendering; zero pairs omitted.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("mod {}\n", self.modulus);
        for x in 0..self.size {
            for y in 0..self.size {
                let v = self.values[x * self.size + y];
                if v != 0 {
                    out.push_str(&format!("{x} {y} {v}\n"));
                }
            }
        }
        out
    }

    /// The table of a normalized or full 2-cochain.
    pub fn from_cochain(cochain: &Cochain, size: usize) -> Result<Self> {
        if cochain.degree != 2 {
            return Err(Error::Cocycle(format!("degree {} cochain is not a 2-cochain", cochain.degree)));
        }
        let mut table = Self::zero(size, cochain.modulus);
        for &(rank, v) in &cochain.values {
            table.values[rank as usize] = v;
        }
        Ok(table)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn value(&self, x: u32, y: u32) -> u64 {
        self.values[x as usize * self.size + y as usize]
    }

    /// Checks `φ(x·x, x) = 0` for all `x` and `φ ∘ ∂_3 = 0` on every triple,
    /// i.e. that `φ` is a normalized 2-cocycle.
    pub fn verify(&self, magma: &FiniteMagma) -> Result<()> {
        if magma.size() != self.size {
            return Err(Error::Cocycle(format!("table is for {} elements, magma has {}", self.size, magma.size())));
        }
        for x in 0..self.size as u32 {
            if self.value(magma.square(x), x) != 0 {
                return Err(Error::Cocycle(format!("not normalized: φ({}, {}) ≠ 0", magma.square(x), x)));
            }
        }
        let complex = ChainComplex::from_magma(magma)?;
        let d3 = complex.boundary_matrix(3, Theory::Yb)?;
        let tb = TupleBasis::new(self.size, 3)?;
        let m = self.modulus as i128;
        let failure = (0..d3.cols()).into_par_iter().find_first(|&c| {
            let total: i128 = d3.column(c).map(|(r, v)| v as i128 * self.values[r as usize] as i128).sum();
            total.rem_euclid(m) != 0
        });
        if let Some(c) = failure {
            return Err(Error::Cocycle(format!("coboundary nonzero at {:?}", tb.unrank(c as u32))));
        }
        Ok(())
    }
}

/// One degree of a splitting report.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingRow {
    pub degree: usize,
    pub yb: String,
    pub degenerate: String,
    pub normalized: String,
    pub splits: bool,
    #[serde(skip)]
    pub groups: [AbelianGroupInvariants; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    /// Splitting is a theorem for cyclic racks and a conjecture otherwise.
    pub cyclic_rack: bool,
    pub rows: Vec<SplittingRow>,
}

impl SplittingReport {
    pub fn all_split(&self) -> bool {
        self.rows.iter().all(|r| r.splits)
    }
}

/// Integral `H^YB`, `H^D`, `H^NYB` for `n = 1..=n_max` and whether
/// `H^YB ≅ H^NYB ⊕ H^D` in each degree.
pub fn splitting_report(magma: &FiniteMagma, n_max: usize, limits: Limits) -> Result<SplittingReport> {
    let complex = ChainComplex::from_magma(magma)?;
    limits.check(magma.size(), n_max + 1)?;
    let per_theory: Vec<Vec<AbelianGroupInvariants>> = Theory::ALL
        .par_iter()
        .map(|&theory| {
            let mut calc = HomologyCalculator::new(&complex, limits);
            (1..=n_max).map(|n| calc.homology(n, theory, Coefficients::Integers)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = (0..n_max)
        .map(|i| {
            let (yb, d, nyb) = (&per_theory[0][i], &per_theory[1][i], &per_theory[2][i]);
            SplittingRow {
                degree: i + 1,
                yb: yb.to_string(),
                degenerate: d.to_string(),
                normalized: nyb.to_string(),
                splits: *yb == nyb.direct_sum(d),
                groups: [yb.clone(), d.clone(), nyb.clone()],
            }
        })
        .collect();
    Ok(SplittingReport { cyclic_rack: is_cyclic_rack(magma), rows })
}

/// `x·y = σ(x)` for a single `m`-cycle `σ`.
pub fn is_cyclic_rack(magma: &FiniteMagma) -> bool {
    let m = magma.size() as u32;
    let rows_constant = (0..m).all(|x| (0..m).all(|y| magma.op(x, y) == magma.op(x, 0)));
    if !rows_constant {
        return false;
    }
    let mut x = 0;
    for step in 1..=m {
        x = magma.op(x, 0);
        if x == 0 {
            return step == m;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(spec: &str) -> ChainComplex {
        ChainComplex::from_magma(&FiniteMagma::builtin(spec).unwrap()).unwrap()
    }

    fn h(spec: &str, n: usize, theory: Theory, coefficients: Coefficients) -> AbelianGroupInvariants {
        homology(&cx(spec), n, theory, coefficients, Limits::default()).unwrap()
    }

    #[test]
    fn rendering() {
        let g = AbelianGroupInvariants::new(10, &[2, 4]);
        assert_eq!(g.to_string(), "Z^10 + Z_2 + Z_4");
        assert_eq!(AbelianGroupInvariants::new(1, &[2, 2, 2]).to_string(), "Z + Z_2^3");
        assert_eq!(AbelianGroupInvariants::trivial().to_string(), "0");
        assert_eq!(AbelianGroupInvariants::new(0, &[3, 2]).to_string(), "Z_6");
        assert_eq!("Z^10 + Z_2 + Z_4".parse::<AbelianGroupInvariants>().unwrap(), g);
        assert_eq!("Z_2^2 + Z".parse::<AbelianGroupInvariants>().unwrap(), AbelianGroupInvariants::new(1, &[2, 2]));
        assert!("Q".parse::<AbelianGroupInvariants>().is_err());
        assert!("Z_1".parse::<AbelianGroupInvariants>().is_err());
        assert_eq!(g.to_json().to_string(), r#"{"rank":10,"torsion":[2,4]}"#);
        assert_eq!(AbelianGroupInvariants::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn cyclic_four_low_degrees() {
        assert_eq!(h("cyclic:4", 1, Theory::Yb, Coefficients::Integers), AbelianGroupInvariants::new(1, &[4]));
        assert_eq!(h("cyclic:4", 2, Theory::Yb, Coefficients::Integers), AbelianGroupInvariants::new(4, &[]));
        assert_eq!(h("cyclic:4", 1, Theory::Degenerate, Coefficients::Integers), AbelianGroupInvariants::trivial());
    }

    #[test]
    fn singleton() {
        for n in 1..5 {
            assert_eq!(h("trivial:1", n, Theory::Yb, Coefficients::Integers), AbelianGroupInvariants::new(1, &[]));
            let expected = if n == 1 { AbelianGroupInvariants::new(1, &[]) } else { AbelianGroupInvariants::trivial() };
            assert_eq!(h("trivial:1", n, Theory::Normalized, Coefficients::Integers), expected);
        }
    }

    #[test]
    fn modular_matches_universal_coefficients() {
        for spec in ["cyclic:4", "x4", "dihedral:4"] {
            for theory in Theory::ALL {
                for n in 1..4 {
                    let here = h(spec, n, theory, Coefficients::Integers);
                    let below = if n > 1 { h(spec, n - 1, theory, Coefficients::Integers) } else { AbelianGroupInvariants::trivial() };
                    for p in [2u64, 3, 4, 6] {
                        let modular = h(spec, n, theory, Coefficients::Modulo(p));
                        let mut orders = vec![p; here.free_rank];
                        for d in here.torsion.iter().chain(&below.torsion) {
                            let g = num_integer::Integer::gcd(&d.to_u64().unwrap(), &p);
                            orders.push(g);
                        }
                        assert_eq!(modular, AbelianGroupInvariants::new(0, &orders), "{spec} {theory} n={n} mod {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn resource_cap() {
        let limits = Limits { max_columns: 64, force: false };
        let err = homology(&cx("cyclic:4"), 3, Theory::Yb, Coefficients::Integers, limits);
        assert!(matches!(err, Err(Error::ResourceLimit(_))));
        let forced = Limits { max_columns: 64, force: true };
        assert!(homology(&cx("cyclic:4"), 3, Theory::Yb, Coefficients::Integers, forced).is_ok());
    }

    #[test]
    fn product_cocycle_is_in_kernel() {
        let magma = FiniteMagma::builtin("cyclic:4").unwrap();
        let phi = CocycleTable::product_mod(4, 2);
        phi.verify(&magma).unwrap();
        let bad = CocycleTable::from_fn(4, 2, |x, _| x as u64);
        assert!(matches!(bad.verify(&magma), Err(Error::Cocycle(_))));
    }

    #[test]
    fn cohomology_mod_two() {
        let complex = cx("cyclic:4");
        let result = cohomology(&complex, 2, Theory::Normalized, 2, Limits::default()).unwrap();
        assert_eq!(result.group, AbelianGroupInvariants::new(0, &[2, 2, 2, 2]));
        let magma = FiniteMagma::builtin("cyclic:4").unwrap();
        for c in &result.cocycles {
            CocycleTable::from_cochain(c, 4).unwrap().verify(&magma).unwrap();
        }
        // the cocycles span a space of dimension dim Z^2 = 4 + rank δ_1
        assert!(result.cocycles.len() >= 4);
    }

    #[test]
    fn cohomology_singleton_degree_one() {
        let complex = cx("trivial:1");
        for m in [2, 5] {
            let result = cohomology(&complex, 1, Theory::Yb, m, Limits::default()).unwrap();
            assert_eq!(result.cocycles.len(), 1);
            assert_eq!(result.cocycles[0].values, vec![(0, 1)]);
        }
    }

    #[test]
    fn cocycle_file_format() {
        let phi = CocycleTable::product_mod(4, 2);
        let text = phi.to_file_string();
        assert_eq!(CocycleTable::parse(&text, 4).unwrap(), phi);
        assert_eq!(CocycleTable::parse("builtin:product-mod:2", 4).unwrap(), phi);
        assert!(CocycleTable::parse("mod 2\n9 0 1\n", 4).is_err());
        assert!(CocycleTable::parse("mod 1\n", 4).is_err());
        assert!(CocycleTable::parse("builtin:nope:2", 4).is_err());
    }

    #[test]
    fn cyclic_rack_detection() {
        assert!(is_cyclic_rack(&FiniteMagma::builtin("cyclic:5").unwrap()));
        assert!(!is_cyclic_rack(&FiniteMagma::builtin("x4").unwrap()));
        assert!(!is_cyclic_rack(&FiniteMagma::builtin("trivial:3").unwrap()));
        assert!(is_cyclic_rack(&FiniteMagma::builtin("trivial:1").unwrap()));
    }

    #[test]
    fn splitting_small() {
        let report = splitting_report(&FiniteMagma::builtin("cyclic:4").unwrap(), 3, Limits::default()).unwrap();
        assert!(report.cyclic_rack && report.all_split());
        assert_eq!(report.rows[2].yb, "Z^16 + Z_4");
        assert_eq!(report.rows[2].normalized, "Z^9 + Z_4");
        assert_eq!(report.rows[2].degenerate, "Z^7");
    }
}
