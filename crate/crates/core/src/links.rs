//! Braid closures colored by a Rump right quasigroup and the cocycle
//! state-sum invariant `Φ(L) = Σ_colorings Σ_crossings ε φ(x, y)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::FiniteMagma;
use crate::error::{Error, Result};
use crate::homology::CocycleTable;
use crate::solution::{from_rump, YBMap};

/// Largest `m^k` enumerated when counting colorings.
pub const MAX_COLORING_VECTORS: u64 = 1 << 26;

/// A braid on `strands` strands; `+i` is `σ_i`, `-i` is `σ_i⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Parse("a braid needs at least one strand".into()));
        }
        for &e in &letters {
            if e == 0 {
                return Err(Error::Parse("braid letters must be nonzero".into()));
            }
            if e.unsigned_abs() as usize >= strands {
                return Err(Error::Parse(format!("letter {e} needs more than {strands} strands")));
            }
        }
        Ok(Self { strands, letters })
    }

    /// `σ_1^e` on two strands.
    pub fn power(e: i32) -> Self {
        let letter = if e < 0 { -1 } else { 1 };
        Self { strands: 2, letters: vec![letter; e.unsigned_abs() as usize] }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self { strands: self.strands, letters: self.letters.iter().rev().map(|e| -e).collect() }
    }

    /// `u · self · u⁻¹`; `u` must not use more strands.
    pub fn conjugate(&self, u: &BraidWord) -> Result<Self> {
        if u.strands > self.strands {
            return Err(Error::Parse("conjugating braid has too many strands".into()));
        }
        let letters = u.letters.iter().chain(&self.letters).chain(&u.inverse().letters).copied().collect();
        Ok(Self { strands: self.strands, letters })
    }

    /// `self · σ_k^{±1}` on `k + 1` strands.
    pub fn stabilize(&self, positive: bool) -> Self {
        let k = self.strands as i32;
        let mut letters = self.letters.clone();
        letters.push(if positive { k } else { -k });
        Self { strands: self.strands + 1, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.letters.iter().map(i32::to_string).collect();
        write!(f, "[{}] on {} strands", letters.join(" "), self.strands)
    }
}

/// Parses whitespace-separated nonzero integers. Without `strands` the
/// braid has `1 + max |e|` strands.
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    let letters = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i32>().map_err(|_| Error::Parse(format!("bad braid letter `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    let needed = 1 + letters.iter().map(|e| e.unsigned_abs() as usize).max().unwrap_or(0);
    BraidWord::new(strands.unwrap_or(needed), letters)
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_braid(s, None)
    }
}

/// A signed crossing weight `ε φ(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightTerm {
    pub sign: i8,
    pub pair: (u32, u32),
}

/// Runs colors top to bottom through the braid.
pub fn propagate_with(r: &YBMap, braid: &BraidWord, top: &[u32], mut on_crossing: impl FnMut(WeightTerm)) -> Vec<u32> {
    let mut colors = top.to_vec();
    for &e in &braid.letters {
        let i = e.unsigned_abs() as usize - 1;
        let (a, b) = (colors[i], colors[i + 1]);
        let image = r.apply(a, b);
        if e > 0 {
            on_crossing(WeightTerm { sign: 1, pair: (a, b) });
        } else {
            on_crossing(WeightTerm { sign: -1, pair: image });
        }
        colors[i] = image.0;
        colors[i + 1] = image.1;
    }
    colors
}

/// Bottom colors and the crossing weight terms for the given top colors.
pub fn propagate(magma: &FiniteMagma, braid: &BraidWord, top: &[u32]) -> Result<(Vec<u32>, Vec<WeightTerm>)> {
    let r = from_rump(magma)?;
    check_top(&r, braid, top)?;
    let mut terms = Vec::with_capacity(braid.len());
    let bottom = propagate_with(&r, braid, top, |t| terms.push(t));
    Ok((bottom, terms))
}

fn check_top(r: &YBMap, braid: &BraidWord, top: &[u32]) -> Result<()> {
    if top.len() != braid.strands {
        return Err(Error::Parse(format!("need {} colors, got {}", braid.strands, top.len())));
    }
    if let Some(&c) = top.iter().find(|&&c| c as usize >= r.size()) {
        return Err(Error::IndexOutOfRange { index: c as usize, max: r.size() - 1 });
    }
    Ok(())
}

fn vector_count(m: usize, k: usize) -> Result<u64> {
    match (m as u64).checked_pow(k as u32) {
        Some(n) if n <= MAX_COLORING_VECTORS => Ok(n),
        _ => Err(Error::ResourceLimit(format!("{m}^{k} coloring vectors exceed {MAX_COLORING_VECTORS}"))),
    }
}

fn unrank(mut index: u64, m: usize, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % m as u64) as u32;
        index /= m as u64;
    }
}

/// All top color vectors that the braid returns unchanged, in lexicographic order.
pub fn colorings(magma: &FiniteMagma, braid: &BraidWord) -> Result<Vec<Vec<u32>>> {
    let r = from_rump(magma)?;
    let m = r.size();
    let total = vector_count(m, braid.strands)?;
    Ok((0..total)
        .into_par_iter()
        .map_init(
            || vec![0u32; braid.strands],
            |top, index| {
                unrank(index, m, top);
                (propagate_with(&r, braid, top, |_| {}) == *top).then(|| top.to_vec())
            },
        )
        .flatten_iter()
        .collect())
}

/// An element `Σ n_a (a)` of `Z[Z_m]` with non-negative coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    pub modulus: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl GroupRingElement {
    pub fn new(modulus: u64) -> Self {
        Self { modulus, counts: BTreeMap::new() }
    }

    pub fn from_counts(modulus: u64, counts: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut out = Self::new(modulus);
        for (a, n) in counts {
            out.add(a, n);
        }
        out
    }

    pub fn add(&mut self, value: u64, count: u64) {
        if count > 0 {
            *self.counts.entry(value % self.modulus).or_insert(0) += count;
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (a, n) in other.counts {
            self.add(a, n);
        }
        self
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map = self.counts.iter().map(|(a, n)| (a.to_string(), serde_json::Value::from(*n))).collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(modulus: u64, value: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad group ring JSON `{value}`"));
        let map = value.as_object().ok_or_else(bad)?;
        let mut out = Self::new(modulus);
        for (k, v) in map {
            let a: u64 = k.parse().map_err(|_| bad())?;
            if a >= modulus {
                return Err(bad());
            }
            out.add(a, v.as_u64().ok_or_else(bad)?);
        }
        Ok(out)
    }

    /// Parses `8(0)+8(1)`; a bare `(a)` has coefficient 1 and `0` is empty.
    pub fn parse(modulus: u64, text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad group ring element `{text}`"));
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Self::new(modulus);
        if text == "0" {
            return Ok(out);
        }
        for term in text.split('+') {
            let (coef, rest) = term.split_once('(').ok_or_else(bad)?;
            let value = rest.strip_suffix(')').ok_or_else(bad)?;
            let n = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| bad())? };
            let a: u64 = value.parse().map_err(|_| bad())?;
            if a >= modulus {
                return Err(bad());
            }
            out.add(a, n);
        }
        Ok(out)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.counts.iter().map(|(a, n)| format!("{n}({a})")).collect();
        f.write_str(&terms.join("+"))
    }
}

/// `Φ` of the closure of `braid`; refuses `φ` unless it is a normalized 2-cocycle.
pub fn invariant(magma: &FiniteMagma, phi: &CocycleTable, braid: &BraidWord) -> Result<GroupRingElement> {
    phi.verify(magma)?;
    invariant_unchecked(magma, phi, braid)
}

/// `Φ` without validating `φ`; the result need not be a link invariant.
pub fn invariant_unchecked(magma: &FiniteMagma, phi: &CocycleTable, braid: &BraidWord) -> Result<GroupRingElement> {
    let r = from_rump(magma)?;
    if phi.size() != r.size() {
        return Err(Error::Cocycle(format!("table is for {} elements, magma has {}", phi.size(), r.size())));
    }
    let m = r.size();
    let modulus = phi.modulus();
    let total = vector_count(m, braid.strands)?;
    let tallies = (0..total)
        .into_par_iter()
        .fold(
            || (vec![0u32; braid.strands], vec![0u64; modulus as usize]),
            |(mut top, mut tally), index| {
                unrank(index, m, &mut top);
                let mut weight = 0u64;
                let bottom = propagate_with(&r, braid, &top, |t| {
                    let v = phi.value(t.pair.0, t.pair.1);
                    weight = if t.sign > 0 { (weight + v) % modulus } else { (weight + modulus - v) % modulus };
                });
                if bottom == top {
                    tally[weight as usize] += 1;
                }
                (top, tally)
            },
        )
        .map(|(_, tally)| tally)
        .reduce(
            || vec![0u64; modulus as usize],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(GroupRingElement::from_counts(modulus, tallies.into_iter().enumerate().map(|(a, n)| (a as u64, n))))
}

/// One Markov move that changed `Φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovFailure {
    pub moved: BraidWord,
    pub expected: GroupRingElement,
    pub found: GroupRingElement,
}

#[derive(Clone, Debug)]
pub struct MarkovReport {
    pub invariant: GroupRingElement,
    pub moves_checked: usize,
    pub failures: Vec<MarkovFailure>,
}

impl MarkovReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A random braid word on `strands` strands with at most `max_len` letters.
pub fn random_braid(rng: &mut impl Rng, strands: usize, max_len: usize) -> BraidWord {
    let len = rng.gen_range(0..=max_len);
    let letters = if strands < 2 {
        Vec::new()
    } else {
        (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) { i } else { -i }
            })
            .collect()
    };
    BraidWord { strands, letters }
}

/// `count` reproducible random braids with `1..=max_strands` strands.
pub fn random_braids(seed: u64, count: usize, max_strands: usize, max_len: usize) -> Vec<BraidWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let strands = rng.gen_range(1..=max_strands.max(1));
            random_braid(&mut rng, strands, max_len)
        })
        .collect()
}

/// Compares `Φ(braid)` with `Φ` after `trials` random conjugations and both
/// stabilizations. `φ` is not validated, so non-cocycles can be probed.
pub fn markov_check(magma: &FiniteMagma, phi: &CocycleTable, braid: &BraidWord, trials: usize, seed: u64) -> Result<MarkovReport> {
    let expected = invariant_unchecked(magma, phi, braid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moves: Vec<BraidWord> = (0..trials)
        .map(|_| {
            let u = random_braid(&mut rng, braid.strands, 4);
            braid.conjugate(&u).expect("same strand count")
        })
        .collect();
    moves.push(braid.stabilize(true));
    moves.push(braid.stabilize(false));
    let mut failures = Vec::new();
    for moved in &moves {
        let found = invariant_unchecked(magma, phi, moved)?;
        if found != expected {
            failures.push(MarkovFailure { moved: moved.clone(), expected: expected.clone(), found });
        }
    }
    Ok(MarkovReport { invariant: expected, moves_checked: moves.len(), failures })
}
