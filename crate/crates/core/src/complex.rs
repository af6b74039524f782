//! The set-theoretic Yang-Baxter chain complex of a solution, its degenerate
//! subcomplex and the normalized quotient, as sparse boundary matrices over
//! tuple bases.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteMagma;
use crate::error::{Error, Result};
use crate::solution::{from_rump, to_rump, YBMap};
use crate::sparse::{normalize_column, SparseIntMatrix};

/// Which complex a boundary or homology group refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Theory {
    /// The full complex `C^YB`.
    Yb,
    /// The degenerate subcomplex `C^D`.
    Degenerate,
    /// The normalized quotient `C^YB / C^D`.
    Normalized,
}

impl Theory {
    pub const ALL: [Theory; 3] = [Theory::Yb, Theory::Degenerate, Theory::Normalized];

    pub fn label(&self) -> &'static str {
        match self {
            Theory::Yb => "YB",
            Theory::Degenerate => "D",
            Theory::Normalized => "NYB",
        }
    }
}

impl FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "yb" => Ok(Theory::Yb),
            "d" | "deg" | "degenerate" => Ok(Theory::Degenerate),
            "nyb" | "normalized" => Ok(Theory::Normalized),
            _ => Err(Error::Parse(format!("unknown theory `{s}` (expected yb, d or nyb)"))),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Big-endian ranking of `n`-tuples over `{0, …, m-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleBasis {
    pub m: usize,
    pub n: usize,
}

impl TupleBasis {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        match (m as u64).checked_pow(n as u32) {
            Some(len) if len <= u32::MAX as u64 => Ok(Self { m, n }),
            _ => Err(Error::ResourceLimit(format!("{m}^{n} tuples do not fit a 32-bit index"))),
        }
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn rank(&self, t: &[u32]) -> u32 {
        t.iter().fold(0u32, |acc, &x| acc * self.m as u32 + x)
    }

    #[inline]
    pub fn unrank_into(&self, mut index: u32, out: &mut [u32]) {
        for slot in out.iter_mut().rev() {
            *slot = index % self.m as u32;
            index /= self.m as u32;
        }
    }

    pub fn unrank(&self, index: u32) -> Vec<u32> {
        let mut out = vec![0; self.n];
        self.unrank_into(index, &mut out);
        out
    }
}

/// A chain: integer combination of distinct tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedTupleSum {
    terms: BTreeMap<Vec<u32>, i64>,
}

impl SignedTupleSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Vec<u32>)>) -> Self {
        let mut sum = Self::new();
        for (c, t) in terms {
            sum.add(c, t);
        }
        sum
    }

    pub fn add(&mut self, coefficient: i64, tuple: Vec<u32>) {
        if coefficient == 0 {
            return;
        }
        match self.terms.entry(tuple) {
            Entry::Vacant(e) => {
                e.insert(coefficient);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coefficient;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_sum(&mut self, scale: i64, other: &SignedTupleSum) {
        for (t, &c) in &other.terms {
            self.add(scale * c, t.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &[u32])> {
        self.terms.iter().map(|(t, &c)| (c, t.as_slice()))
    }

    pub fn coefficient(&self, tuple: &[u32]) -> i64 {
        self.terms.get(tuple).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Extends a map on basis tuples linearly.
    pub fn map_linear(&self, f: impl Fn(&[u32]) -> SignedTupleSum) -> SignedTupleSum {
        let mut out = SignedTupleSum::new();
        for (c, t) in self.terms() {
            out.add_sum(c, &f(t));
        }
        out
    }
}

impl fmt::Display for SignedTupleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (c, t)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.unsigned_abs();
            let coeff = if mag == 1 { String::new() } else { mag.to_string() };
            let body: Vec<String> = t.iter().map(u32::to_string).collect();
            write!(f, "{sign}{coeff}({})", body.join(","))?;
        }
        Ok(())
    }
}

/// A solution together with, when it comes from a Rump right quasigroup,
/// the squaring map used by degeneracies and `κ`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    solution: YBMap,
    squares: Option<Vec<u32>>,
}

/// A failed check with the tuple that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub degree: usize,
    pub tuple: Vec<u32>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.tuple.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "{} fails in degree {} at ({})", self.check, self.degree, t.join(","))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexReport {
    pub max_degree: usize,
    pub boundary_squared_zero: bool,
    pub degenerate_subcomplex: Option<bool>,
    /// Asserted for cyclic racks, reported otherwise.
    pub kappa_chain_map: Option<bool>,
    pub kappa_asserted: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl ChainComplex {
    /// Complex of an arbitrary map; degenerate and normalized theories are
    /// available only if the map is the solution of a Rump right quasigroup.
    pub fn new(solution: YBMap) -> Self {
        let squares = to_rump(&solution)
            .ok()
            .filter(FiniteMagma::is_rump)
            .filter(|m| from_rump(m).is_ok_and(|r| r == solution))
            .map(|m| squares_of(&m));
        Self { solution, squares }
    }

    pub fn from_magma(magma: &FiniteMagma) -> Result<Self> {
        let solution = from_rump(magma)?;
        Ok(Self { solution, squares: Some(squares_of(magma)) })
    }

    pub fn solution(&self) -> &YBMap {
        &self.solution
    }

    pub fn size(&self) -> usize {
        self.solution.size()
    }

    pub fn is_rump(&self) -> bool {
        self.squares.is_some()
    }

    fn squares(&self) -> Result<&[u32]> {
        self.squares.as_deref().ok_or(Error::NotRumpSolution)
    }

    fn check_face_index(i: usize, t: &[u32]) -> Result<()> {
        if i == 0 || i > t.len() {
            return Err(Error::IndexOutOfRange { index: i, max: t.len() });
        }
        Ok(())
    }

    /// `d^l_i`: apply `R` at positions `(i-1, i)`, …, `(1, 2)` and drop the
    /// first coordinate.
    pub fn face_l(&self, i: usize, t: &[u32]) -> Result<Vec<u32>> {
        Self::check_face_index(i, t)?;
        let mut buf = t.to_vec();
        self.face_l_in_place(i, &mut buf);
        buf.remove(0);
        Ok(buf)
    }

    /// `d^r_i`: apply `R` at positions `(i, i+1)`, …, `(n-1, n)` and drop the
    /// last coordinate.
    pub fn face_r(&self, i: usize, t: &[u32]) -> Result<Vec<u32>> {
        Self::check_face_index(i, t)?;
        let mut buf = t.to_vec();
        self.face_r_in_place(i, &mut buf);
        buf.pop();
        Ok(buf)
    }

    #[inline]
    fn face_l_in_place(&self, i: usize, buf: &mut [u32]) {
        for p in (0..i - 1).rev() {
            let (a, b) = self.solution.apply(buf[p], buf[p + 1]);
            buf[p] = a;
            buf[p + 1] = b;
        }
    }

    #[inline]
    fn face_r_in_place(&self, i: usize, buf: &mut [u32]) {
        for p in i - 1..buf.len() - 1 {
            let (a, b) = self.solution.apply(buf[p], buf[p + 1]);
            buf[p] = a;
            buf[p + 1] = b;
        }
    }

    /// `∂ t = Σ (-1)^{i+1} (d^l_i t - d^r_i t)` as a chain. Zero for `n = 1`
    /// since `C_0 = 0`.
    pub fn boundary_of(&self, t: &[u32]) -> SignedTupleSum {
        let mut out = SignedTupleSum::new();
        if t.len() < 2 {
            return out;
        }
        for i in 1..=t.len() {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            out.add(sign, self.face_l(i, t).expect("index in range"));
            out.add(-sign, self.face_r(i, t).expect("index in range"));
        }
        out
    }

    /// Pushes the boundary of `t` as `(rank of (n-1)-tuple, coefficient)`.
    fn boundary_ranks(&self, t: &[u32], buf: &mut Vec<u32>, out: &mut Vec<(u32, i64)>) {
        let n = t.len();
        let basis = TupleBasis { m: self.size(), n: n - 1 };
        for i in 1..=n {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            buf.clear();
            buf.extend_from_slice(t);
            self.face_l_in_place(i, buf);
            out.push((basis.rank(&buf[1..]), sign));
            buf.clear();
            buf.extend_from_slice(t);
            self.face_r_in_place(i, buf);
            out.push((basis.rank(&buf[..n - 1]), -sign));
        }
    }

    /// True iff some adjacent pair is `(a·a, a)`.
    pub fn is_degenerate_tuple(&self, t: &[u32]) -> Result<bool> {
        let squares = self.squares()?;
        Ok(t.windows(2).any(|w| w[0] == squares[w[1] as usize]))
    }

    /// Tuple ranks spanning `C_n` of the given theory, in increasing order.
    pub fn basis(&self, n: usize, theory: Theory) -> Result<Vec<u32>> {
        if n == 0 {
            return Ok(Vec::new());
        }
        let tb = TupleBasis::new(self.size(), n)?;
        if theory == Theory::Yb {
            return Ok((0..tb.len() as u32).collect());
        }
        let squares = self.squares()?;
        let want_degenerate = theory == Theory::Degenerate;
        let out = (0..tb.len() as u32)
            .into_par_iter()
            .filter(|&idx| {
                let mut buf = [0u32; 32];
                let t = &mut buf[..n];
                tb.unrank_into(idx, t);
                let degenerate = t.windows(2).any(|w| w[0] == squares[w[1] as usize]);
                degenerate == want_degenerate
            })
            .collect();
        Ok(out)
    }

    /// The matrix of `∂_n` for a theory: columns are the theory's basis of
    /// `C_n`, rows its basis of `C_{n-1}` (both in increasing tuple rank).
    pub fn boundary_matrix(&self, n: usize, theory: Theory) -> Result<SparseIntMatrix> {
        if n == 0 {
            return Err(Error::IndexOutOfRange { index: 0, max: usize::MAX });
        }
        if n > 32 {
            return Err(Error::ResourceLimit(format!("degree {n} too large")));
        }
        let cols = self.basis(n, theory)?;
        if n == 1 {
            return Ok(SparseIntMatrix::zeros(0, cols.len()));
        }
        let rows = self.basis(n - 1, theory)?;
        let row_len = self.size().pow(n as u32 - 1);
        let position: Option<Vec<u32>> = (theory != Theory::Yb).then(|| {
            let mut pos = vec![u32::MAX; row_len];
            for (i, &r) in rows.iter().enumerate() {
                pos[r as usize] = i as u32;
            }
            pos
        });
        let tb = TupleBasis::new(self.size(), n)?;
        let columns: Vec<Vec<(u32, i64)>> = cols
            .par_iter()
            .map_init(
                || (vec![0u32; n], Vec::with_capacity(n), Vec::with_capacity(2 * n)),
                |(t, buf, out), &idx| {
                    tb.unrank_into(idx, t);
                    out.clear();
                    self.boundary_ranks(t, buf, out);
                    // faces of a degenerate tuple cancel down to degenerate ones
                    normalize_column(out);
                    match &position {
                        None => out.clone(),
                        Some(pos) => out
                            .iter()
                            .filter_map(|&(r, v)| {
                                let p = pos[r as usize];
                                debug_assert!(
                                    p != u32::MAX || theory == Theory::Normalized,
                                    "degenerate boundary left the subcomplex"
                                );
                                (p != u32::MAX).then_some((p, v))
                            })
                            .collect(),
                    }
                },
            )
            .collect();
        SparseIntMatrix::from_columns(rows.len(), columns)
    }

    /// `κ(x_1, …, x_n) = (x_1 - x_2x_2) ⊗ … ⊗ (x_{n-1} - x_nx_n) ⊗ x_n`.
    pub fn kappa(&self, t: &[u32]) -> Result<SignedTupleSum> {
        let squares = self.squares()?;
        Ok(kappa_with(squares, t))
    }

    /// Checks `∂∂ = 0` in every theory, closure of the degenerate subcomplex
    /// and the chain-map property of `κ` for degrees `2..=n_max`.
    pub fn verify(&self, n_max: usize) -> Result<ComplexReport> {
        let mut counterexamples = Vec::new();
        let theories: &[Theory] = if self.is_rump() { &Theory::ALL } else { &[Theory::Yb] };
        let m = self.size();
        for n in 2..=n_max.max(2) {
            for &theory in theories {
                let outer = self.boundary_matrix(n, theory)?;
                let inner = self.boundary_matrix(n - 1, theory)?;
                let product = inner.mul(&outer)?;
                let first = product.entries().next();
                if let Some((_, c, _)) = first {
                    let cols = self.basis(n, theory)?;
                    counterexamples.push(Counterexample {
                        check: format!("boundary squared zero ({theory})"),
                        degree: n,
                        tuple: TupleBasis::new(m, n)?.unrank(cols[c]),
                    });
                }
            }
            if self.is_rump() {
                let yb = self.boundary_matrix(n, Theory::Yb)?;
                let tb_in = TupleBasis::new(m, n)?;
                let tb_out = TupleBasis::new(m, n - 1)?;
                let squares = self.squares()?;
                let degenerate = |t: &[u32]| t.windows(2).any(|w| w[0] == squares[w[1] as usize]);
                for c in 0..yb.cols() {
                    let t = tb_in.unrank(c as u32);
                    if !degenerate(&t) {
                        continue;
                    }
                    if yb.column(c).any(|(r, _)| !degenerate(&tb_out.unrank(r))) {
                        counterexamples.push(Counterexample {
                            check: "degenerate subcomplex closure".into(),
                            degree: n,
                            tuple: t,
                        });
                        break;
                    }
                }
            }
        }
        let degenerate_subcomplex = self
            .is_rump()
            .then(|| !counterexamples.iter().any(|c| c.check.starts_with("degenerate")));
        let kappa_asserted = self.squares.as_deref().is_some_and(is_cyclic_rack_squares)
            && (0..m as u32).all(|x| (0..m as u32).all(|y| self.solution.apply(x, y) == self.cyclic_r(x, y)));
        let mut kappa_chain_map = None;
        if self.is_rump() {
            let failure = self.kappa_chain_map_failure(n_max)?;
            kappa_chain_map = Some(failure.is_none());
            if let (true, Some(c)) = (kappa_asserted, failure) {
                counterexamples.push(c);
            }
        }
        Ok(ComplexReport {
            max_degree: n_max,
            boundary_squared_zero: !counterexamples.iter().any(|c| c.check.starts_with("boundary")),
            degenerate_subcomplex,
            kappa_chain_map,
            kappa_asserted,
            counterexamples,
        })
    }

    fn cyclic_r(&self, x: u32, y: u32) -> (u32, u32) {
        // for x·y = σ(x): R(x, y) = (σ(y), σ⁻¹(x))
        let squares = self.squares.as_deref().expect("rump");
        let inverse = squares.iter().position(|&s| s == x).expect("permutation") as u32;
        (squares[y as usize], inverse)
    }

    /// First tuple with `∂κ ≠ κ∂`, if any, in degrees `2..=n_max`.
    pub fn kappa_chain_map_failure(&self, n_max: usize) -> Result<Option<Counterexample>> {
        let squares = self.squares()?;
        for n in 2..=n_max {
            let tb = TupleBasis::new(self.size(), n)?;
            let failure = (0..tb.len() as u32).into_par_iter().find_first(|&idx| {
                let t = tb.unrank(idx);
                let lhs = kappa_with(squares, &t).map_linear(|s| self.boundary_of(s));
                let rhs = self.boundary_of(&t).map_linear(|s| kappa_with(squares, s));
                lhs != rhs
            });
            if let Some(idx) = failure {
                return Ok(Some(Counterexample { check: "kappa chain map".into(), degree: n, tuple: tb.unrank(idx) }));
            }
        }
        Ok(None)
    }
}

fn squares_of(magma: &FiniteMagma) -> Vec<u32> {
    (0..magma.size() as u32).map(|x| magma.square(x)).collect()
}

/// A Rump magma whose squaring map is one `m`-cycle and whose rows are
/// constant is a cyclic rack; the row-constancy is checked by the caller
/// through the solution.
fn is_cyclic_rack_squares(squares: &[u32]) -> bool {
    let m = squares.len();
    let mut x = 0u32;
    for step in 1..=m {
        x = squares[x as usize];
        if x == 0 {
            return step == m;
        }
    }
    false
}

fn kappa_with(squares: &[u32], t: &[u32]) -> SignedTupleSum {
    let n = t.len();
    let mut out = SignedTupleSum::new();
    if n == 0 {
        return out;
    }
    for subset in 0u64..(1u64 << (n - 1)) {
        let mut tuple = t.to_vec();
        for j in 0..n - 1 {
            if subset >> j & 1 == 1 {
                tuple[j] = squares[t[j + 1] as usize];
            }
        }
        let sign = if subset.count_ones() % 2 == 0 { 1 } else { -1 };
        out.add(sign, tuple);
    }
    out
}
