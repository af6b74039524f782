//! Small finite fields `GF(q)`, `q <= 9`.
//!
//! Elements are packed as base-`p` digit strings: the coefficient of `u^i`
//! sits at digit `i`, where `u` is the class of the indeterminate modulo a
//! fixed primitive polynomial. For prime `q` the field is plain `Z/p`.

use std::fmt;

use crate::error::{Error, Result};

/// A supported field `GF(p^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaloisField {
    p: u8,
    k: u8,
    /// `u^k = sum reduction[i] u^i`.
    reduction: [u8; 3],
}

/// An element of a [`GaloisField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: GaloisField,
    packed: u8,
}

impl GaloisField {
    /// The field of order `q`. Supported: 2, 3, 4, 5, 7, 8, 9.
    pub fn new(q: u32) -> Result<Self> {
        let (p, k, reduction) = match q {
            2 => (2, 1, [0, 0, 0]),
            3 => (3, 1, [0, 0, 0]),
            5 => (5, 1, [0, 0, 0]),
            7 => (7, 1, [0, 0, 0]),
            // u^2 = u + 1
            4 => (2, 2, [1, 1, 0]),
            // u^3 = u + 1
            8 => (2, 3, [1, 1, 0]),
            // u^2 = 2u + 1, i.e. x^2 + x + 2
            9 => (3, 2, [1, 2, 0]),
            _ => return Err(Error::Unsupported(format!("finite field of order {q} is not supported"))),
        };
        Ok(Self { p, k, reduction })
    }

    pub fn characteristic(&self) -> u32 {
        self.p as u32
    }

    pub fn degree(&self) -> u32 {
        self.k as u32
    }

    pub fn order(&self) -> u32 {
        (self.p as u32).pow(self.k as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: *self, packed: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: *self, packed: 1 }
    }

    /// The fixed primitive element (`u` for extension fields, the least
    /// primitive root for prime fields).
    pub fn primitive(&self) -> FieldElement {
        let packed = if self.k > 1 {
            self.p
        } else {
            match self.p {
                2 => 1,
                3 => 2,
                5 => 2,
                7 => 3,
                _ => unreachable!(),
            }
        };
        FieldElement { field: *self, packed }
    }

    /// Element from base-`p` digits, constant term first.
    pub fn from_coords(&self, coords: &[u8]) -> Result<FieldElement> {
        if coords.len() != self.k as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!("bad coordinates {coords:?} for GF({})", self.order())));
        }
        let packed = coords.iter().rev().fold(0u8, |acc, &c| acc * self.p + c);
        Ok(FieldElement { field: *self, packed })
    }

    /// Element with packed value `v` (`0 <= v < q`).
    pub fn element(&self, v: u32) -> Result<FieldElement> {
        if v >= self.order() {
            return Err(Error::Parse(format!("{v} is not an element of GF({})", self.order())));
        }
        Ok(FieldElement { field: *self, packed: v as u8 })
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |v| FieldElement { field: *self, packed: v as u8 })
    }

    /// Element with table index `d`: inverse of [`FieldElement::digit`].
    pub fn from_digit(&self, d: u32) -> Result<FieldElement> {
        if d >= self.order() {
            return Err(Error::Parse(format!("digit {d} out of range for GF({})", self.order())));
        }
        if self.k == 1 || d == 0 {
            return self.element(d);
        }
        Ok(self.primitive().pow(d - 1))
    }

    fn coords(&self, packed: u8) -> [u8; 3] {
        let mut out = [0u8; 3];
        let mut v = packed;
        for c in out.iter_mut().take(self.k as usize) {
            *c = v % self.p;
            v /= self.p;
        }
        out
    }

    fn pack(&self, coords: &[u8; 3]) -> u8 {
        coords[..self.k as usize].iter().rev().fold(0u8, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u8, b: u8) -> u8 {
        let (x, y) = (self.coords(a), self.coords(b));
        let mut s = [0u8; 3];
        for i in 0..self.k as usize {
            s[i] = (x[i] + y[i]) % self.p;
        }
        self.pack(&s)
    }

    fn neg(&self, a: u8) -> u8 {
        let x = self.coords(a);
        let mut s = [0u8; 3];
        for i in 0..self.k as usize {
            s[i] = (self.p - x[i]) % self.p;
        }
        self.pack(&s)
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        let k = self.k as usize;
        let p = self.p as u32;
        let (x, y) = (self.coords(a), self.coords(b));
        let mut prod = [0u32; 5];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] as u32 * y[j] as u32) % p;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                prod[d - k + i] = (prod[d - k + i] + c * self.reduction[i] as u32) % p;
            }
        }
        let mut out = [0u8; 3];
        for i in 0..k {
            out[i] = prod[i] as u8;
        }
        self.pack(&out)
    }
}

impl FieldElement {
    pub fn field(&self) -> GaloisField {
        self.field
    }

    /// Base-`p` coordinates, constant term first.
    pub fn coords(&self) -> Vec<u8> {
        self.field.coords(self.packed)[..self.field.k as usize].to_vec()
    }

    pub fn packed(&self) -> u32 {
        self.packed as u32
    }

    pub fn is_zero(&self) -> bool {
        self.packed == 0
    }

    /// Table index: the residue for prime fields; `0 -> 0` and `u^j -> j + 1`
    /// for extension fields.
    pub fn digit(&self) -> u32 {
        if self.field.k == 1 || self.packed == 0 {
            return self.packed as u32;
        }
        let u = self.field.primitive();
        let mut acc = self.field.one();
        for j in 0..self.field.order() - 1 {
            if acc == *self {
                return j + 1;
            }
            acc = acc * u;
        }
        unreachable!("primitive element generates the multiplicative group")
    }

    pub fn pow(self, mut e: u32) -> FieldElement {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(self.field.order() - 2))
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        FieldElement { field: self.field, packed: self.field.add(self.packed, rhs.packed) }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        FieldElement { field: self.field, packed: self.field.neg(self.packed) }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        FieldElement { field: self.field, packed: self.field.mul(self.packed, rhs.packed) }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            return write!(f, "{}", self.packed);
        }
        match self.digit() {
            0 => write!(f, "0"),
            1 => write!(f, "1"),
            2 => write!(f, "u"),
            d => write!(f, "u^{}", d - 1),
        }
    }
}
