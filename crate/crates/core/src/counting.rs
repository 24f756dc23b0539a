//! Exact counting primitives.
//!
//! All counts are arbitrary precision. Smirnov words (no two equal adjacent
//! letters) are counted by a memoized recursion over the remaining Parikh
//! vector; [`smirnov_bruteforce`] is an independent generator-and-filter
//! oracle for it.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// An exact nonnegative count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CountValue(BigUint);

impl CountValue {
    pub fn zero() -> Self {
        CountValue(BigUint::zero())
    }

    pub fn one() -> Self {
        CountValue(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn pow2(e: u32) -> Self {
        CountValue(BigUint::one() << e)
    }
}

impl From<u64> for CountValue {
    fn from(v: u64) -> Self {
        CountValue(BigUint::from(v))
    }
}

impl From<BigUint> for CountValue {
    fn from(v: BigUint) -> Self {
        CountValue(v)
    }
}

impl fmt::Display for CountValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for CountValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for CountValue {
    /// JSON number when it fits in 64 bits, decimal string otherwise.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Add for CountValue {
    type Output = CountValue;
    fn add(self, rhs: CountValue) -> CountValue {
        CountValue(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a CountValue> for CountValue {
    type Output = CountValue;
    fn add(self, rhs: &'a CountValue) -> CountValue {
        CountValue(self.0 + &rhs.0)
    }
}

impl AddAssign<&CountValue> for CountValue {
    fn add_assign(&mut self, rhs: &CountValue) {
        self.0 += &rhs.0;
    }
}

impl Mul for CountValue {
    type Output = CountValue;
    fn mul(self, rhs: CountValue) -> CountValue {
        CountValue(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a CountValue> for CountValue {
    type Output = CountValue;
    fn mul(self, rhs: &'a CountValue) -> CountValue {
        CountValue(self.0 * &rhs.0)
    }
}

impl std::iter::Sum for CountValue {
    fn sum<I: Iterator<Item = CountValue>>(iter: I) -> Self {
        iter.fold(CountValue::zero(), |a, b| a + b)
    }
}

/// `binom(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> CountValue {
    if n < 0 || k < 0 || k > n {
        return CountValue::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    CountValue(acc)
}

/// `binom(n, k)` in 64 bits; `None` when out of range or on overflow.
pub fn binomial_u64(n: i64, k: i64) -> Option<u64> {
    if n < 0 || k < 0 || k > n {
        return Some(0);
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// `c(m; n) = binom(n-1, m-1)`, the number of compositions of `n` into `m`
/// positive parts.
pub fn compositions(m: i64, n: i64) -> Result<CountValue> {
    if m < 1 || n < 1 {
        return Err(invalid(format!("c(m; n) needs m, n >= 1, got m = {m}, n = {n}")));
    }
    Ok(binomial(n - 1, m - 1))
}

/// Compositions with the conventions a product formula needs: `c(0; 0) = 1`,
/// zero for any other nonpositive argument.
pub fn composition_count(m: i64, n: i64) -> CountValue {
    if m == 0 && n == 0 {
        return CountValue::one();
    }
    if m < 1 || n < 1 {
        return CountValue::zero();
    }
    binomial(n - 1, m - 1)
}

/// Ways to pick `k` of `n` objects in a row, no two consecutive.
pub fn kaplansky(n: i64, k: i64) -> CountValue {
    binomial(n - k + 1, k)
}

/// `F_n` with `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fibonacci(n: u64) -> CountValue {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    CountValue(a)
}

/// Letters of the Smirnov alphabets, in the order fixing Parikh indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Letter {
    Theta = 0,
    Alpha = 1,
    Beta = 2,
    Gamma = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Theta, Letter::Alpha, Letter::Beta, Letter::Gamma];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Letter::Theta => "theta",
            Letter::Alpha => "alpha",
            Letter::Beta => "beta",
            Letter::Gamma => "gamma",
        }
    }
}

/// Letter multiplicities of a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ParikhVector(pub Vec<u32>);

impl ParikhVector {
    pub fn new(counts: Vec<u32>) -> Self {
        ParikhVector(counts)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

fn check_query(alphabet: usize, parikh: &ParikhVector, first: usize, last: usize) -> Result<()> {
    if alphabet == 0 {
        return Err(invalid("alphabet must be nonempty"));
    }
    if parikh.len() != alphabet {
        return Err(invalid(format!("Parikh vector has {} entries, alphabet has {alphabet} letters", parikh.len())));
    }
    if first >= alphabet || last >= alphabet {
        return Err(invalid(format!("letters must lie in [0, {alphabet}), got {first} and {last}")));
    }
    Ok(())
}

/// Memoized Smirnov word counter. Not shared across threads; create one per
/// worker.
#[derive(Debug, Default)]
pub struct SmirnovCounter {
    memo: HashMap<(Vec<u32>, usize, usize), CountValue>,
}

impl SmirnovCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Words with multiplicities `parikh`, no equal neighbours, starting with
    /// `first` and ending with `last`.
    pub fn count(&mut self, alphabet: usize, parikh: &ParikhVector, first: usize, last: usize) -> Result<CountValue> {
        check_query(alphabet, parikh, first, last)?;
        if parikh.0[first] == 0 || parikh.0[last] == 0 {
            return Ok(CountValue::zero());
        }
        let mut rest = parikh.0.clone();
        rest[first] -= 1;
        Ok(self.tail(rest, first, last))
    }

    fn tail(&mut self, counts: Vec<u32>, prev: usize, last: usize) -> CountValue {
        if counts.iter().all(|&c| c == 0) {
            return if prev == last { CountValue::one() } else { CountValue::zero() };
        }
        let key = (counts, prev, last);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (counts, prev, last) = key;
        let mut total = CountValue::zero();
        for c in 0..counts.len() {
            if c == prev || counts[c] == 0 {
                continue;
            }
            let mut next = counts.clone();
            next[c] -= 1;
            total += &self.tail(next, c, last);
        }
        self.memo.insert((counts, prev, last), total.clone());
        total
    }
}

/// One-shot Smirnov count with a fresh memo table.
pub fn smirnov_count(alphabet: usize, parikh: &ParikhVector, first: usize, last: usize) -> Result<CountValue> {
    SmirnovCounter::new().count(alphabet, parikh, first, last)
}

/// Largest word length [`smirnov_bruteforce`] will enumerate.
pub const BRUTEFORCE_MAX_LEN: u32 = 12;

/// Counts Smirnov words by generating every arrangement of the multiset and
/// filtering.
pub fn smirnov_bruteforce(alphabet: usize, parikh: &ParikhVector, first: usize, last: usize) -> Result<CountValue> {
    check_query(alphabet, parikh, first, last)?;
    if parikh.total() > BRUTEFORCE_MAX_LEN {
        return Err(Error::Refused(format!(
            "brute force limited to words of length {BRUTEFORCE_MAX_LEN}, got {}",
            parikh.total()
        )));
    }
    let mut word: Vec<usize> =
        parikh.0.iter().enumerate().flat_map(|(letter, &n)| std::iter::repeat_n(letter, n as usize)).collect();
    if word.is_empty() {
        return Ok(CountValue::zero());
    }
    let mut hits = 0u64;
    loop {
        let smirnov = word.windows(2).all(|w| w[0] != w[1]);
        if smirnov && word[0] == first && word[word.len() - 1] == last {
            hits += 1;
        }
        if !next_permutation(&mut word) {
            break;
        }
    }
    Ok(CountValue::from(hits))
}

/// Lexicographic successor in place; false once the last arrangement is passed.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
