//! Set-theoretic Yang-Baxter maps and the correspondence with Rump right
//! quasigroups: `R(x, y) = (y(x/y), x/y)` and back via `xy = R₂(−, y)⁻¹(x)`.

use serde::Serialize;

use crate::algebra::FiniteMagma;
use crate::error::{Error, Result};

/// A map `X × X → X × X` stored as its two component tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YBMap {
    size: usize,
    r1: Vec<u32>,
    r2: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionReport {
    pub ybe: bool,
    pub involutive: bool,
    pub left_nondegenerate: bool,
    pub right_nondegenerate: bool,
    pub bijective: bool,
}

impl YBMap {
    /// Builds a map from 0-based row-major tables `r1[x*m+y]`, `r2[x*m+y]`.
    pub fn new(size: usize, r1: Vec<u32>, r2: Vec<u32>) -> Result<Self> {
        if size == 0 || r1.len() != size * size || r2.len() != size * size {
            return Err(Error::InvalidTable("component tables must be m×m".into()));
        }
        if r1.iter().chain(&r2).any(|&v| v as usize >= size) {
            return Err(Error::InvalidTable("component entry out of range".into()));
        }
        Ok(Self { size, r1, r2 })
    }

    /// The flip `(x, y) ↦ (y, x)`.
    pub fn swap(size: usize) -> Self {
        let r1 = (0..size * size).map(|i| (i % size) as u32).collect();
        let r2 = (0..size * size).map(|i| (i / size) as u32).collect();
        Self { size, r1, r2 }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn apply(&self, x: u32, y: u32) -> (u32, u32) {
        let i = x as usize * self.size + y as usize;
        (self.r1[i], self.r2[i])
    }

    /// `R₁`, written ν in the face-map formulas.
    #[inline]
    pub fn r1(&self, x: u32, y: u32) -> u32 {
        self.r1[x as usize * self.size + y as usize]
    }

    /// `R₂`, written μ in the face-map formulas.
    #[inline]
    pub fn r2(&self, x: u32, y: u32) -> u32 {
        self.r2[x as usize * self.size + y as usize]
    }
}

/// The involutive right non-degenerate solution of a Rump right quasigroup.
pub fn from_rump(magma: &FiniteMagma) -> Result<YBMap> {
    if !magma.is_rump() {
        return Err(Error::NotRump);
    }
    Ok(from_right_quasigroup(magma))
}

/// `R(x, y) = (y(x/y), x/y)` for any right quasigroup; only a solution when
/// the magma is Rump.
pub(crate) fn from_right_quasigroup(magma: &FiniteMagma) -> YBMap {
    let m = magma.size();
    let mut r1 = Vec::with_capacity(m * m);
    let mut r2 = Vec::with_capacity(m * m);
    for x in 0..m as u32 {
        for y in 0..m as u32 {
            let q = magma.div_unchecked(x, y);
            r1.push(magma.op(y, q));
            r2.push(q);
        }
    }
    YBMap { size: m, r1, r2 }
}

/// The magma `xy = z` where `R₂(z, y) = x`.
pub fn to_rump(r: &YBMap) -> Result<FiniteMagma> {
    let m = r.size;
    let mut table = vec![u32::MAX; m * m];
    for y in 0..m {
        for z in 0..m {
            let x = r.r2[z * m + y] as usize;
            if table[x * m + y] != u32::MAX {
                return Err(Error::NotRightNondegenerate);
            }
            table[x * m + y] = z as u32;
        }
    }
    FiniteMagma::from_zero_based(m, table, None)
}

/// Exhaustive check of the Yang-Baxter equation, involutivity and
/// non-degeneracy.
pub fn verify(r: &YBMap) -> SolutionReport {
    let m = r.size as u32;
    let ybe = (0..m).all(|x| {
        (0..m).all(|y| {
            (0..m).all(|z| {
                // (R×Id)(Id×R)(R×Id)
                let (a, b) = r.apply(x, y);
                let (b, c) = r.apply(b, z);
                let (a, b) = r.apply(a, b);
                let lhs = (a, b, c);
                // (Id×R)(R×Id)(Id×R)
                let (b, c) = r.apply(y, z);
                let (a, b) = r.apply(x, b);
                let (b, c) = r.apply(b, c);
                lhs == (a, b, c)
            })
        })
    });
    let involutive = (0..m).all(|x| (0..m).all(|y| {
        let (a, b) = r.apply(x, y);
        r.apply(a, b) == (x, y)
    }));
    let perm = |f: &dyn Fn(u32) -> u32| {
        let mut seen = vec![false; m as usize];
        (0..m).all(|i| !std::mem::replace(&mut seen[f(i) as usize], true))
    };
    let left_nondegenerate = (0..m).all(|x| perm(&|y| r.r1(x, y)));
    let right_nondegenerate = (0..m).all(|y| perm(&|x| r.r2(x, y)));
    let mut seen = vec![false; (m * m) as usize];
    let bijective = (0..m).all(|x| {
        (0..m).all(|y| {
            let (a, b) = r.apply(x, y);
            !std::mem::replace(&mut seen[(a * m + b) as usize], true)
        })
    });
    SolutionReport { ybe, involutive, left_nondegenerate, right_nondegenerate, bijective }
}
