//! Ground sets, subsets and the two vertex models of the discrete hypercube.
//!
//! A vertex of `{1,-1}^t` is a [`SignVector`]; a vertex of `{0,1}^t` is a
//! [`BinaryVector`]. Both are stored as a bitmask over coordinates, bit
//! `e - 1` standing for coordinate `e`. For a sign vector the mask is its
//! negative part, for a binary vector it is the set of `1` entries. Subsets of
//! the ground set use the same encoding, so iterating masks `0..2^t` visits
//! subsets (and vertices) in a fixed, deterministic order.

use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};

/// Largest ground set the bitmask encoding supports.
pub const MAX_T: usize = 30;

/// The ground set `E_t = {1, ..., t}`, `t >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroundSet(usize);

impl GroundSet {
    pub fn new(t: usize) -> Result<Self> {
        if t < 3 {
            return Err(invalid(format!("ground set size t = {t} is below 3")));
        }
        if t > MAX_T {
            return Err(invalid(format!("ground set size t = {t} exceeds {MAX_T}")));
        }
        Ok(GroundSet(t))
    }

    #[inline]
    pub fn t(self) -> usize {
        self.0
    }

    /// Mask with every coordinate set.
    #[inline]
    pub fn full_mask(self) -> u32 {
        full_mask(self.0)
    }

    /// Number of vertices, `2^t`.
    #[inline]
    pub fn vertex_count(self) -> u64 {
        1u64 << self.0
    }

    /// All vertices of `{1,-1}^t` in increasing negative-part mask order.
    pub fn vertices(self) -> impl Iterator<Item = SignVector> {
        (0..(1u32 << self.0)).map(move |m| SignVector::from_mask(self, m))
    }

    /// All subsets of `E_t` in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = GroundSubset> {
        (0..(1u32 << self.0)).map(move |m| GroundSubset::from_mask(self, m))
    }

    /// The all-ones vertex `T^(+)`.
    pub fn positive(self) -> SignVector {
        SignVector::from_mask(self, 0)
    }
}

#[inline]
pub(crate) fn full_mask(t: usize) -> u32 {
    if t >= 32 {
        u32::MAX
    } else {
        (1u32 << t) - 1
    }
}

/// A vertex of `{1,-1}^t`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    t: GroundSet,
    neg: u32,
}

impl SignVector {
    /// Builds a sign vector whose negative part is `neg_mask`.
    pub fn from_mask(t: GroundSet, neg_mask: u32) -> Self {
        SignVector { t, neg: neg_mask & t.full_mask() }
    }

    pub fn from_entries(entries: &[i8]) -> Result<Self> {
        let t = GroundSet::new(entries.len())?;
        let mut neg = 0u32;
        for (i, &v) in entries.iter().enumerate() {
            match v {
                1 => {}
                -1 => neg |= 1 << i,
                other => return Err(invalid(format!("entry {other} at coordinate {} is not +1 or -1", i + 1))),
            }
        }
        Ok(SignVector { t, neg })
    }

    /// Parses the `+`/`-` notation, coordinates read left to right.
    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(invalid(format!("unexpected character {other:?} in vertex string"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SignVector::from_entries(&entries)
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.t
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.t.t()
    }

    /// Bitmask of the negative part.
    #[inline]
    pub fn neg_mask(&self) -> u32 {
        self.neg
    }

    /// Entry at coordinate `e` (1-based).
    #[inline]
    pub fn entry(&self, e: usize) -> i8 {
        if self.neg >> (e - 1) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn entries(&self) -> Vec<i8> {
        (1..=self.t()).map(|e| self.entry(e)).collect()
    }

    pub fn negative_part(&self) -> GroundSubset {
        GroundSubset::from_mask(self.t, self.neg)
    }

    pub fn positive_part(&self) -> GroundSubset {
        GroundSubset::from_mask(self.t, !self.neg & self.t.full_mask())
    }

    /// `|T^-|`.
    #[inline]
    pub fn neg_count(&self) -> usize {
        self.neg.count_ones() as usize
    }

    /// Flips the sign of coordinate `e`.
    #[inline]
    pub fn flip(&self, e: usize) -> Self {
        SignVector { t: self.t, neg: self.neg ^ (1 << (e - 1)) }
    }

    /// Hamming distance.
    pub fn distance(&self, other: &SignVector) -> Result<usize> {
        check_same_len(self.t(), other.t())?;
        Ok((self.neg ^ other.neg).count_ones() as usize)
    }

    /// Standard scalar product, summed entry by entry.
    pub fn scalar_product(&self, other: &SignVector) -> Result<i64> {
        check_same_len(self.t(), other.t())?;
        Ok((1..=self.t()).map(|e| i64::from(self.entry(e)) * i64::from(other.entry(e))).sum())
    }

    /// `(1/2)(T^(+) - T)`.
    pub fn to_binary(&self) -> BinaryVector {
        BinaryVector { t: self.t, ones: self.neg }
    }
}

impl std::ops::Neg for SignVector {
    type Output = SignVector;

    fn neg(self) -> SignVector {
        SignVector { t: self.t, neg: !self.neg & self.t.full_mask() }
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in 1..=self.t() {
            f.write_str(if self.entry(e) == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

fn check_same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(invalid(format!("length mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// A vertex of `{0,1}^t`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BinaryVector {
    t: GroundSet,
    ones: u32,
}

impl BinaryVector {
    pub fn from_mask(t: GroundSet, ones: u32) -> Self {
        BinaryVector { t, ones: ones & t.full_mask() }
    }

    pub fn from_entries(entries: &[u8]) -> Result<Self> {
        let t = GroundSet::new(entries.len())?;
        let mut ones = 0u32;
        for (i, &v) in entries.iter().enumerate() {
            match v {
                0 => {}
                1 => ones |= 1 << i,
                other => return Err(invalid(format!("entry {other} at coordinate {} is not 0 or 1", i + 1))),
            }
        }
        Ok(BinaryVector { t, ones })
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.t.t()
    }

    #[inline]
    pub fn ones_mask(&self) -> u32 {
        self.ones
    }

    #[inline]
    pub fn entry(&self, e: usize) -> u8 {
        (self.ones >> (e - 1) & 1) as u8
    }

    pub fn entries(&self) -> Vec<u8> {
        (1..=self.t()).map(|e| self.entry(e)).collect()
    }

    /// Number of `1` entries, computed as `<B, T^(+)>`.
    pub fn hamming_weight(&self) -> usize {
        (1..=self.t()).map(|e| usize::from(self.entry(e))).sum()
    }

    pub fn dot(&self, other: &BinaryVector) -> Result<i64> {
        check_same_len(self.t(), other.t())?;
        Ok((1..=self.t()).map(|e| i64::from(self.entry(e)) * i64::from(other.entry(e))).sum())
    }

    /// `T^(+) - 2B`.
    pub fn to_sign(&self) -> SignVector {
        SignVector { t: self.t, neg: self.ones }
    }
}

/// A subset of `E_t`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSubset {
    t: GroundSet,
    mask: u32,
}

/// Closed interval `[start, end]` of the ground set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl GroundSubset {
    pub fn from_mask(t: GroundSet, mask: u32) -> Self {
        GroundSubset { t, mask: mask & t.full_mask() }
    }

    pub fn from_members(t: GroundSet, members: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &e in members {
            if e == 0 || e > t.t() {
                return Err(invalid(format!("member {e} outside [1, {}]", t.t())));
            }
            mask |= 1 << (e - 1);
        }
        Ok(GroundSubset { t, mask })
    }

    pub fn empty(t: GroundSet) -> Self {
        GroundSubset { t, mask: 0 }
    }

    /// The initial segment `[1, s]`.
    pub fn prefix(t: GroundSet, s: usize) -> Self {
        GroundSubset::from_mask(t, full_mask(s.min(t.t())))
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.t
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        self.mask
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        e >= 1 && e <= self.t.t() && self.mask >> (e - 1) & 1 == 1
    }

    pub fn members(&self) -> Vec<usize> {
        (1..=self.t.t()).filter(|&e| self.contains(e)).collect()
    }

    pub fn intersection(&self, other: &GroundSubset) -> GroundSubset {
        GroundSubset::from_mask(self.t, self.mask & other.mask)
    }

    pub fn union(&self, other: &GroundSubset) -> GroundSubset {
        GroundSubset::from_mask(self.t, self.mask | other.mask)
    }

    pub fn difference(&self, other: &GroundSubset) -> GroundSubset {
        GroundSubset::from_mask(self.t, self.mask & !other.mask)
    }

    pub fn symmetric_difference(&self, other: &GroundSubset) -> GroundSubset {
        GroundSubset::from_mask(self.t, self.mask ^ other.mask)
    }

    pub fn complement(&self) -> GroundSubset {
        GroundSubset::from_mask(self.t, !self.mask)
    }

    /// Image under `e -> t + 1 - e`.
    pub fn reversed(&self) -> GroundSubset {
        GroundSubset::from_mask(self.t, reverse_mask(self.mask, self.t.t()))
    }

    /// Maximal runs of consecutive members, in increasing order.
    pub fn intervals(&self) -> Vec<Interval> {
        let t = self.t.t();
        let mut out = Vec::new();
        let mut e = 1;
        while e <= t {
            if self.contains(e) {
                let start = e;
                while e < t && self.contains(e + 1) {
                    e += 1;
                }
                out.push(Interval { start, end: e });
            }
            e += 1;
        }
        out
    }

    /// Number of maximal intervals; zero for the empty set.
    #[inline]
    pub fn rho(&self) -> usize {
        run_count(self.mask)
    }

    /// The vertex `_{-A}T^(+)`.
    pub fn negate_at(&self) -> SignVector {
        SignVector::from_mask(self.t, self.mask)
    }
}

impl fmt::Display for GroundSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.members().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for GroundSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroundSubset{self}")
    }
}

impl Serialize for GroundSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

/// Number of maximal runs of set bits.
#[inline]
pub fn run_count(mask: u32) -> usize {
    (mask & !(mask << 1)).count_ones() as usize
}

/// Mirrors the low `t` bits.
#[inline]
pub fn reverse_mask(mask: u32, t: usize) -> u32 {
    mask.reverse_bits() >> (32 - t)
}

/// `_{-A}T^(+)` for a subset given as a member list.
pub fn negate_at(a: &GroundSubset, t: GroundSet) -> Result<SignVector> {
    if a.ground() != t {
        return Err(invalid(format!("subset lives on t = {}, requested t = {}", a.ground().t(), t.t())));
    }
    Ok(a.negate_at())
}

pub fn negative_part(v: &SignVector) -> GroundSubset {
    v.negative_part()
}

/// `(intervals, rho)` of a subset.
pub fn interval_decomposition(a: &GroundSubset) -> (Vec<Interval>, usize) {
    let iv = a.intervals();
    let rho = iv.len();
    (iv, rho)
}

/// Dissimilarity `s - |A ∩ B|` of two `s`-subsets.
pub fn dissimilarity(a: &GroundSubset, b: &GroundSubset, s: usize) -> Result<usize> {
    if a.len() != s || b.len() != s {
        return Err(invalid(format!("dissimilarity needs |A| = |B| = {s}, got {} and {}", a.len(), b.len())));
    }
    Ok(s - a.intersection(b).len())
}
