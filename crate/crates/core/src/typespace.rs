//! Finite alphabets and types (point measures of fixed mass).
//!
//! A [`TypeVector`] of mass `m` over an alphabet of size `k` counts how
//! often each symbol occurs in a sequence of length `m`. Types are ordered
//! lexicographically on their count tuples, first symbol most significant;
//! this is the order every enumeration in the crate uses.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Ordered list of distinct symbol labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Arc<[String]>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::input("alphabet must have at least one symbol"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::input(format!("duplicate alphabet symbol {s:?}")));
            }
        }
        Ok(Alphabet {
            symbols: symbols.into(),
        })
    }

    /// Alphabet `{0, 1, ..., k-1}` labelled by decimal strings.
    pub fn numbered(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == label)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.symbols.iter()).finish()
    }
}

/// Counts per symbol; the mass is the total count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeVector {
    counts: Vec<u32>,
}

impl TypeVector {
    pub fn new(counts: Vec<u32>) -> Self {
        TypeVector { counts }
    }

    pub fn zero(k: usize) -> Self {
        TypeVector { counts: vec![0; k] }
    }

    /// `mass * delta_symbol` over an alphabet of size `k`.
    pub fn point(k: usize, symbol: usize, mass: u32) -> Self {
        let mut counts = vec![0; k];
        counts[symbol] = mass;
        TypeVector { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, symbol: usize) -> u32 {
        self.counts[symbol]
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    pub fn mass(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &TypeVector) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Symbols with a nonzero count, in alphabet order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.k()).filter(|&a| self.counts[a] > 0).collect()
    }

    /// Nonzero counts in alphabet order.
    pub fn profile(&self) -> Vec<u32> {
        self.counts.iter().copied().filter(|&c| c > 0).collect()
    }
}

impl fmt::Display for TypeVector {
    /// The `c1:c2:...:ck` wire form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for TypeVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(':')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::input(format!("bad type string {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TypeVector { counts })
    }
}

/// All types of the given mass over `k` symbols, in increasing
/// lexicographic order.
pub fn enumerate_types_k(k: usize, mass: u32) -> Vec<TypeVector> {
    let mut out = Vec::new();
    let mut counts = vec![0u32; k];
    fill(&mut counts, 0, mass, &mut out);
    out
}

fn fill(counts: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<TypeVector>) {
    let k = counts.len();
    if k == 0 {
        if remaining == 0 {
            out.push(TypeVector::new(Vec::new()));
        }
        return;
    }
    if pos == k - 1 {
        counts[pos] = remaining;
        out.push(TypeVector::new(counts.to_vec()));
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        fill(counts, pos + 1, remaining - c, out);
    }
    counts[pos] = 0;
}

pub fn enumerate_types(alphabet: &Alphabet, mass: u32) -> Vec<TypeVector> {
    enumerate_types_k(alphabet.len(), mass)
}

/// Number of types of mass `m` over `k` symbols: `C(m + k - 1, k - 1)`.
pub fn type_count(k: usize, mass: u32) -> u128 {
    if k == 0 {
        return u128::from(mass == 0);
    }
    let n = u128::from(mass) + k as u128 - 1;
    let r = (k as u128 - 1).min(u128::from(mass));
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Types `mu <= nu` of mass `m`, in increasing lexicographic order.
pub fn sub_types(nu: &TypeVector, m: u32) -> Vec<TypeVector> {
    let k = nu.k();
    let mut out = Vec::new();
    if m > nu.mass() {
        return out;
    }
    let mut counts = vec![0u32; k];
    // suffix capacity lets us prune branches that cannot reach mass m
    let mut suffix = vec![0u32; k + 1];
    for a in (0..k).rev() {
        suffix[a] = suffix[a + 1] + nu.count(a);
    }
    sub_fill(nu, &suffix, &mut counts, 0, m, &mut out);
    out
}

fn sub_fill(
    nu: &TypeVector,
    suffix: &[u32],
    counts: &mut [u32],
    pos: usize,
    remaining: u32,
    out: &mut Vec<TypeVector>,
) {
    if pos == counts.len() {
        if remaining == 0 {
            out.push(TypeVector::new(counts.to_vec()));
        }
        return;
    }
    let rest = suffix[pos + 1];
    let lo = remaining.saturating_sub(rest);
    let hi = remaining.min(nu.count(pos));
    for c in lo..=hi {
        counts[pos] = c;
        sub_fill(nu, suffix, counts, pos + 1, remaining - c, out);
    }
    counts[pos] = 0;
}

/// `|S^N(nu)| = N! / prod nu(a)!`, the number of sequences of type `nu`.
pub fn multiset_count(nu: &TypeVector) -> BigUint {
    // product of binomials avoids the large factorials
    let mut acc = BigUint::one();
    let mut running = 0u32;
    for &c in nu.counts() {
        running += c;
        acc *= binomial(running, c);
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Type of a sequence of symbol indices.
pub fn type_of(sequence: &[usize], alphabet: &Alphabet) -> Result<TypeVector> {
    let mut counts = vec![0u32; alphabet.len()];
    for &s in sequence {
        let slot = counts.get_mut(s).ok_or_else(|| {
            Error::input(format!(
                "symbol index {s} out of range for alphabet of size {}",
                alphabet.len()
            ))
        })?;
        *slot += 1;
    }
    Ok(TypeVector::new(counts))
}

/// Enumerated types of one mass with a reverse index.
#[derive(Clone, Debug)]
pub struct TypeSpace {
    k: usize,
    mass: u32,
    types: Vec<TypeVector>,
    index: HashMap<TypeVector, usize>,
}

impl TypeSpace {
    pub fn new(k: usize, mass: u32) -> Self {
        let types = enumerate_types_k(k, mass);
        let index = types
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        TypeSpace {
            k,
            mass,
            types,
            index,
        }
    }

    /// Like [`TypeSpace::new`] but refuses to enumerate more than `cap` types.
    pub fn with_cap(k: usize, mass: u32, cap: u128) -> Result<Self> {
        let size = type_count(k, mass);
        if size > cap {
            return Err(Error::Capacity {
                what: "type space",
                size,
                cap,
            });
        }
        Ok(Self::new(k, mass))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mass(&self) -> u32 {
        self.mass
    }

    pub fn types(&self) -> &[TypeVector] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn index_of(&self, t: &TypeVector) -> Option<usize> {
        self.index.get(t).copied()
    }
}
