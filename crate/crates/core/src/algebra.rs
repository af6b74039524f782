//! Finite magmas and Rump right quasigroups.
//!
//! Elements are `0..m` internally. Cayley-table files and the CLI use
//! 1-based labels.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};

/// A finite set with a binary operation given by its Cayley table.
#[derive(Clone, Debug)]
pub struct FiniteMagma {
    size: usize,
    /// Row-major: `table[x * size + y] = x·y`.
    table: Vec<u32>,
    /// `div[x * size + y] = x/y` when every right translation is a permutation.
    div: Option<Vec<u32>>,
    name: Option<String>,
}

/// A pair `(x, y)` violating a named identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub check: &'static str,
    pub pair: (u32, u32),
}

impl PartialEq for FiniteMagma {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.table == other.table
    }
}

impl Eq for FiniteMagma {}

/// Exhaustively computed structural flags of a magma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub right_quasigroup: bool,
    pub left_quasigroup: bool,
    pub latin: bool,
    pub rump: bool,
    pub rack: bool,
    pub quandle: bool,
    pub uniquely_2_divisible: bool,
    pub delta_bijective: bool,
}

fn is_permutation(values: impl Iterator<Item = u32>, m: usize) -> bool {
    let mut seen = vec![false; m];
    for v in values {
        let v = v as usize;
        if v >= m || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl FiniteMagma {
    /// Builds a magma from a 0-based row-major table.
    pub fn from_zero_based(size: usize, table: Vec<u32>, name: Option<String>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidTable("empty magma".into()));
        }
        if table.len() != size * size {
            return Err(Error::InvalidTable(format!("expected {} entries, got {}", size * size, table.len())));
        }
        if let Some(bad) = table.iter().find(|&&v| v as usize >= size) {
            return Err(Error::InvalidTable(format!("entry {} out of range", bad + 1)));
        }
        let mut magma = Self { size, table, div: None, name };
        magma.div = magma.build_division();
        Ok(magma)
    }

    /// Builds a magma from rows of 1-based entries (`rows[x][y] = x·y`).
    pub fn from_table(rows: &[Vec<u32>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(m * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidTable(format!("row {} has {} entries, expected {m}", i + 1, row.len())));
            }
            for &v in row {
                if v == 0 || v as usize > m {
                    return Err(Error::InvalidTable(format!("entry {v} outside 1..={m}")));
                }
                table.push(v - 1);
            }
        }
        Self::from_zero_based(m, table, None)
    }

    /// Parses the Cayley-table file format: the order on the first line, then
    /// one row of 1-based products per line. `#` starts a comment.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing order line".into()))?;
        let m: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad order `{header}`")))?;
        let mut rows = Vec::with_capacity(m);
        for line in lines {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad entry `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != m {
            return Err(Error::InvalidTable(format!("expected {m} rows, got {}", rows.len())));
        }
        Self::from_table(&rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut magma = Self::parse_table(&text)?;
        magma.name = Some(path.display().to_string());
        Ok(magma)
    }

    /// Renders the magma in the Cayley-table file format.
    pub fn to_table_string(&self) -> String {
        let mut out = format!("{}\n", self.size);
        for x in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|y| (self.op(x as u32, y as u32) + 1).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Rows of 1-based products, as printed in a Cayley table.
    pub fn rows_one_based(&self) -> Vec<Vec<u32>> {
        (0..self.size)
            .map(|x| (0..self.size).map(|y| self.op(x as u32, y as u32) + 1).collect())
            .collect()
    }

    /// Constructs a magma from a spec string: `cyclic:n`, `dihedral:n`,
    /// `alexander:n:t`, `trivial:n`, `x4`, `x16` or `file:PATH`.
    pub fn builtin(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let arg = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| Error::UnknownSpec(spec.to_string()))?
                .parse::<usize>()
                .map_err(|_| Error::UnknownSpec(spec.to_string()))
        };
        let named = |m: FiniteMagma| m.with_name(spec);
        match parts[0] {
            "cyclic" if parts.len() == 2 => {
                let n = positive(arg(1)?, spec)?;
                Self::from_fn(n, |x, _| (x + 1) % n).map(named)
            }
            "dihedral" if parts.len() == 2 => {
                let n = positive(arg(1)?, spec)?;
                Self::from_fn(n, |x, y| (2 * y + n - x) % n).map(named)
            }
            "alexander" if parts.len() == 3 => {
                let n = positive(arg(1)?, spec)?;
                let t = arg(2)? % n;
                if num_integer::gcd(t, n) != 1 {
                    return Err(Error::Unsupported(format!("t = {t} is not a unit modulo {n}")));
                }
                let one_minus_t = (1 + n - t) % n;
                Self::from_fn(n, |x, y| (t * x + one_minus_t * y) % n).map(named)
            }
            "trivial" if parts.len() == 2 => {
                let n = positive(arg(1)?, spec)?;
                Self::from_fn(n, |x, _| x).map(named)
            }
            "x4" if parts.len() == 1 => x4().map(named),
            "x16" if parts.len() == 1 => x16().map(named),
            "file" if parts.len() >= 2 => Self::load(&spec[5..]),
            _ => Err(Error::UnknownSpec(spec.to_string())),
        }
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..n * n).map(|i| f(i / n, i % n) as u32).collect();
        Self::from_zero_based(n, table, None)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `x·y`.
    #[inline]
    pub fn op(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize * self.size + y as usize]
    }

    /// `x·x`.
    #[inline]
    pub fn square(&self, x: u32) -> u32 {
        self.op(x, x)
    }

    /// The unique `z` with `z·y = x`.
    pub fn right_divide(&self, x: u32, y: u32) -> Result<u32> {
        match &self.div {
            Some(div) => Ok(div[x as usize * self.size + y as usize]),
            None => Err(Error::NotRightQuasigroup),
        }
    }

    /// Right division without the quasigroup check; panics if division is
    /// undefined.
    #[inline]
    pub(crate) fn div_unchecked(&self, x: u32, y: u32) -> u32 {
        self.div.as_ref().expect("right quasigroup")[x as usize * self.size + y as usize]
    }

    fn build_division(&self) -> Option<Vec<u32>> {
        let m = self.size;
        let mut div = vec![u32::MAX; m * m];
        for y in 0..m {
            for z in 0..m {
                let x = self.table[z * m + y] as usize;
                if div[x * m + y] != u32::MAX {
                    return None;
                }
                div[x * m + y] = z as u32;
            }
        }
        Some(div)
    }

    pub fn is_right_quasigroup(&self) -> bool {
        self.div.is_some()
    }

    pub fn is_left_quasigroup(&self) -> bool {
        let m = self.size;
        (0..m).all(|x| is_permutation(self.table[x * m..(x + 1) * m].iter().copied(), m))
    }

    /// Right quasigroup satisfying `(zx)(yx) = (zy)(xy)` for all triples.
    pub fn is_rump(&self) -> bool {
        if !self.is_right_quasigroup() {
            return false;
        }
        let m = self.size as u32;
        (0..m).all(|x| {
            (0..m).all(|y| {
                let (yx, xy) = (self.op(y, x), self.op(x, y));
                (0..m).all(|z| self.op(self.op(z, x), yx) == self.op(self.op(z, y), xy))
            })
        })
    }

    /// Right self-distributive right quasigroup.
    pub fn is_rack(&self) -> bool {
        if !self.is_right_quasigroup() {
            return false;
        }
        let m = self.size as u32;
        (0..m).all(|a| {
            (0..m).all(|b| (0..m).all(|c| self.op(self.op(a, b), c) == self.op(self.op(a, c), self.op(b, c))))
        })
    }

    pub fn is_quandle(&self) -> bool {
        self.is_rack() && (0..self.size as u32).all(|a| self.square(a) == a)
    }

    /// The squaring map is a bijection.
    pub fn is_uniquely_2_divisible(&self) -> bool {
        is_permutation((0..self.size as u32).map(|x| self.square(x)), self.size)
    }

    /// `(x, y) -> (xy, yx)` is a bijection of `X × X`.
    pub fn is_delta_bijective(&self) -> bool {
        let m = self.size;
        is_permutation(
            (0..(m * m) as u32).map(|i| {
                let (x, y) = (i / m as u32, i % m as u32);
                self.op(x, y) * m as u32 + self.op(y, x)
            }),
            m * m,
        )
    }

    /// Scans the identities every Rump right quasigroup satisfies:
    /// `(xx)(y/(xx)) = zz` with `z = x((y/(xx))/x)`, `(xx)/(y(x/y)) = (x/y)(x/y)`,
    /// `y = xx` as the only solution of `x(y/x) = y`, and `Δ(diag) = diag`.
    /// Returns the first failure of each kind.
    pub fn rump_identity_failures(&self) -> Result<Vec<IdentityFailure>> {
        if !self.is_right_quasigroup() {
            return Err(Error::NotRightQuasigroup);
        }
        let m = self.size as u32;
        let mut failures = Vec::new();
        let mut first = |check: &'static str, pair: Option<(u32, u32)>| {
            if let Some(pair) = pair {
                failures.push(IdentityFailure { check, pair });
            }
        };
        let pairs = || (0..m).flat_map(|x| (0..m).map(move |y| (x, y)));
        let d = |a, b| self.div_unchecked(a, b);
        first(
            "square shift",
            pairs().find(|&(x, y)| {
                let xx = self.square(x);
                let z = self.op(x, d(d(y, xx), x));
                self.op(xx, d(y, xx)) != self.square(z)
            }),
        );
        first(
            "square of quotient",
            pairs().find(|&(x, y)| d(self.square(x), self.op(y, d(x, y))) != self.square(d(x, y))),
        );
        first("unique fixed quotient", pairs().find(|&(x, y)| (self.op(x, d(y, x)) == y) != (y == self.square(x))));
        let mut on_diagonal = vec![false; m as usize];
        for x in 0..m {
            on_diagonal[self.square(x) as usize] = true;
        }
        first("diagonal image", on_diagonal.iter().position(|&hit| !hit).map(|x| (x as u32, x as u32)));
        Ok(failures)
    }

    pub fn structure_report(&self) -> StructureReport {
        let right_quasigroup = self.is_right_quasigroup();
        let left_quasigroup = self.is_left_quasigroup();
        let rack = self.is_rack();
        StructureReport {
            right_quasigroup,
            left_quasigroup,
            latin: right_quasigroup && left_quasigroup,
            rump: self.is_rump(),
            rack,
            quandle: rack && (0..self.size as u32).all(|a| self.square(a) == a),
            uniquely_2_divisible: self.is_uniquely_2_divisible(),
            delta_bijective: self.is_delta_bijective(),
        }
    }
}

fn positive(n: usize, spec: &str) -> Result<usize> {
    if n == 0 {
        Err(Error::UnknownSpec(spec.to_string()))
    } else {
        Ok(n)
    }
}

impl fmt::Display for FiniteMagma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table_string())
    }
}

/// The affine magma `x*y = φx + ψy + c` on `GF(q)^dim`.
///
/// The vector `(a_1, …, a_k)` gets the 0-based index `Σ d(a_i) q^{k-i}` where
/// `d` is [`FieldElement::digit`].
pub fn affine_magma(
    q: u32,
    phi: &[Vec<FieldElement>],
    psi: &[Vec<FieldElement>],
    c: &[FieldElement],
) -> Result<FiniteMagma> {
    let field = GaloisField::new(q)?;
    let dim = c.len();
    let square = |a: &[Vec<FieldElement>]| a.len() == dim && a.iter().all(|row| row.len() == dim);
    if dim == 0 || !square(phi) || !square(psi) {
        return Err(Error::Unsupported("affine data must be a k×k, k×k, k triple with k >= 1".into()));
    }
    let all = phi.iter().chain(psi).flatten().chain(c);
    if all.into_iter().any(|e| e.field() != field) {
        return Err(Error::Unsupported(format!("affine data must lie in GF({q})")));
    }
    let size = (q as usize).pow(dim as u32);
    let vector = |index: usize| -> Vec<FieldElement> {
        let mut v = vec![field.zero(); dim];
        let mut rest = index;
        for slot in v.iter_mut().rev() {
            *slot = field.from_digit((rest % q as usize) as u32).expect("digit < q");
            rest /= q as usize;
        }
        v
    };
    let index = |v: &[FieldElement]| -> u32 { v.iter().fold(0u32, |acc, e| acc * q + e.digit()) };
    let apply = |a: &[Vec<FieldElement>], v: &[FieldElement]| -> Vec<FieldElement> {
        a.iter()
            .map(|row| row.iter().zip(v).fold(field.zero(), |acc, (&r, &x)| acc + r * x))
            .collect()
    };
    let vectors: Vec<_> = (0..size).map(vector).collect();
    let left: Vec<_> = vectors.iter().map(|v| apply(phi, v)).collect();
    let right: Vec<_> = vectors.iter().map(|v| apply(psi, v)).collect();
    let mut table = Vec::with_capacity(size * size);
    for lx in &left {
        for ry in &right {
            let sum: Vec<_> = (0..dim).map(|i| lx[i] + ry[i] + c[i]).collect();
            table.push(index(&sum));
        }
    }
    FiniteMagma::from_zero_based(size, table, None)
}

/// `Aff(GF(2)^2, [[1,0],[1,1]], [[0,1],[1,0]], 0)`, an affine Rump
/// quasigroup of order 4.
pub fn x4() -> Result<FiniteMagma> {
    let f = GaloisField::new(2)?;
    let (o, l) = (f.zero(), f.one());
    affine_magma(2, &[vec![l, o], vec![l, l]], &[vec![o, l], vec![l, o]], &[o, o])
}

/// `Aff(GF(4)^2, [[0,u],[u^2,0]], [[0,1],[1,0]], 0)`, an affine Rump
/// quasigroup of order 16.
pub fn x16() -> Result<FiniteMagma> {
    let f = GaloisField::new(4)?;
    let (o, l, u) = (f.zero(), f.one(), f.primitive());
    affine_magma(4, &[vec![o, u], vec![u * u, o]], &[vec![o, l], vec![l, o]], &[o, o])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn magma(spec: &str) -> FiniteMagma {
        FiniteMagma::builtin(spec).unwrap()
    }

    #[test]
    fn table_ingestion() {
        let rows = vec![vec![1, 3, 2, 4], vec![2, 4, 1, 3], vec![4, 2, 3, 1], vec![3, 1, 4, 2]];
        let m = FiniteMagma::from_table(&rows).unwrap();
        assert_eq!(m.op(0, 1), 2);
        assert_eq!(m, x4().unwrap());

        let one = FiniteMagma::from_table(&[vec![1]]).unwrap();
        assert_eq!(one.op(0, 0), 0);

        let constant = FiniteMagma::from_table(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(!constant.structure_report().right_quasigroup);
        assert!(constant.right_divide(0, 0).is_err());
    }

    #[test]
    fn table_errors() {
        assert!(FiniteMagma::from_table(&[vec![1, 2], vec![1]]).is_err());
        assert!(FiniteMagma::from_table(&[vec![1, 3], vec![1, 2]]).is_err());
        assert!(FiniteMagma::from_table(&[vec![0, 1], vec![1, 2]]).is_err());
        assert!(FiniteMagma::parse_table("2\n1 2\n").is_err());
        assert!(FiniteMagma::parse_table("x\n").is_err());
    }

    #[test]
    fn table_file_roundtrip() {
        let text = "# X4\n4\n1 3 2 4\n2 4 1 3 # row two\n4 2 3 1\n3 1 4 2\n";
        let m = FiniteMagma::parse_table(text).unwrap();
        assert_eq!(FiniteMagma::parse_table(&m.to_table_string()).unwrap(), m);
        assert_eq!(m, magma("x4"));
    }

    #[test]
    fn builtins() {
        let c4 = magma("cyclic:4");
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(c4.op(x, y), (x + 1) % 4);
            }
        }
        let t3 = magma("trivial:3");
        assert!((0..3).all(|x| (0..3).all(|y| t3.op(x, y) == x)));
        let x16 = magma("x16");
        // 1-based: 2·1 = 9, 1·3 = 9, 2·3 = 1, 1·2 = 5
        assert_eq!(x16.op(1, 0), 8);
        assert_eq!(x16.op(0, 2), 8);
        assert_eq!(x16.op(1, 2), 0);
        assert_eq!(x16.op(0, 1), 4);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(FiniteMagma::builtin("nope:3"), Err(Error::UnknownSpec(_))));
        assert!(FiniteMagma::builtin("cyclic").is_err());
        assert!(FiniteMagma::builtin("cyclic:0").is_err());
        assert!(FiniteMagma::builtin("alexander:4:2").is_err());
        assert!(FiniteMagma::builtin("file:/definitely/missing").is_err());
    }

    #[test]
    fn affine_trivial() {
        let f = GaloisField::new(2).unwrap();
        let m = affine_magma(2, &[vec![f.one()]], &[vec![f.zero()]], &[f.zero()]).unwrap();
        assert_eq!(m, magma("trivial:2"));
    }

    #[test]
    fn affine_errors() {
        let f = GaloisField::new(2).unwrap();
        assert!(affine_magma(6, &[vec![f.one()]], &[vec![f.zero()]], &[f.zero()]).is_err());
        assert!(affine_magma(2, &[vec![f.one(), f.one()]], &[vec![f.zero()]], &[f.zero()]).is_err());
        let g = GaloisField::new(3).unwrap();
        assert!(affine_magma(2, &[vec![g.one()]], &[vec![f.zero()]], &[f.zero()]).is_err());
    }

    #[test]
    fn right_division() {
        let c4 = magma("cyclic:4");
        assert_eq!(c4.right_divide(2, 0).unwrap(), 1);
        let t5 = magma("trivial:5");
        assert_eq!(t5.right_divide(3, 1).unwrap(), 3);
        let x4 = magma("x4");
        assert_eq!(x4.right_divide(2, 1).unwrap(), 0);
        for spec in ["x4", "x16", "dihedral:5", "alexander:9:4"] {
            let m = magma(spec);
            let n = m.size() as u32;
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(m.right_divide(m.op(x, y), y).unwrap(), x);
                    assert_eq!(m.op(m.right_divide(x, y).unwrap(), y), x);
                }
            }
        }
    }

    #[test]
    fn rump_examples() {
        assert!(magma("cyclic:5").is_rump());
        assert!(!magma("dihedral:3").is_rump());
        assert!(magma("dihedral:4").is_rump());
        assert!(magma("alexander:4:3").is_rump());
        assert!(!magma("alexander:3:2").is_rump());
        assert!(!FiniteMagma::from_table(&[vec![1, 1], vec![1, 1]]).unwrap().is_rump());
    }

    #[test]
    fn reports() {
        let x4 = magma("x4").structure_report();
        assert!(x4.rump && !x4.rack && x4.uniquely_2_divisible);
        let r4 = magma("dihedral:4").structure_report();
        assert!(r4.rump && r4.quandle && r4.rack);
        let c4 = magma("cyclic:4").structure_report();
        assert!(c4.rack && !c4.quandle && !c4.left_quasigroup && !c4.latin);
        for spec in ["cyclic:3", "x4", "x16", "dihedral:7", "trivial:3", "alexander:8:5"] {
            let r = magma(spec).structure_report();
            assert_eq!(r.latin, r.left_quasigroup && r.right_quasigroup);
            assert!(!r.quandle || r.rack);
            if r.rump {
                assert!(r.uniquely_2_divisible, "{spec}");
            }
        }
    }

    #[test]
    fn rump_identities() {
        for spec in ["cyclic:5", "x4", "x16", "dihedral:4", "trivial:3", "alexander:9:4"] {
            assert_eq!(magma(spec).rump_identity_failures().unwrap(), vec![], "{spec}");
        }
        assert!(!magma("dihedral:3").rump_identity_failures().unwrap().is_empty());
    }
}
