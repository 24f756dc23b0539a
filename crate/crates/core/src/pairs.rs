//! Counts of ordered vertex pairs by distance, orthogonality and negative-part
//! size, in the whole cube and inside one Johnson layer.
//!
//! Every closed form has a brute-force counterpart named `oracle_*` that walks
//! all ordered pairs of masks. Oracles refuse `t > ORACLE_MAX_T`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::counting::{binomial, CountValue};
use crate::error::{invalid, Error, Result};
use crate::hypercube::{full_mask, GroundSet};

/// Largest `t` accepted by the enumeration oracles.
pub const ORACLE_MAX_T: usize = 10;

fn ground(t: usize) -> Result<GroundSet> {
    GroundSet::new(t)
}

fn even_t(t: usize) -> Result<()> {
    ground(t)?;
    if !t.is_multiple_of(2) {
        return Err(invalid(format!("t must be even, got {t}")));
    }
    Ok(())
}

fn range(name: &str, v: usize, lo: usize, hi: usize) -> Result<()> {
    if v < lo || v > hi {
        return Err(invalid(format!("{name} = {v} outside [{lo}, {hi}]")));
    }
    Ok(())
}

fn b(n: usize, k: usize) -> CountValue {
    binomial(n as i64, k as i64)
}

/// Ordered pairs `(X, Y)` with `d(X, Y) = k`.
pub fn pairs_at_distance(t: usize, k: usize) -> Result<CountValue> {
    ground(t)?;
    range("k", k, 0, t)?;
    Ok(CountValue::pow2(t as u32) * b(t, k))
}

/// Ordered pairs with `<X, Y> = 0`.
pub fn orthogonal_pairs(t: usize) -> Result<CountValue> {
    even_t(t)?;
    Ok(CountValue::pow2(t as u32) * b(t, t / 2))
}

/// Number of `Z` orthogonal to both members of a fixed orthogonal pair.
pub fn mutual_orthogonal_count(t: usize) -> Result<CountValue> {
    even_t(t)?;
    if !t.is_multiple_of(4) {
        return Ok(CountValue::zero());
    }
    let c = b(t / 2, t / 4);
    Ok(c.clone() * c)
}

/// Ordered pairs with `|X^-| = j'`, `|Y^-| = j''` and `d(X, Y) = k`.
pub fn pairs_with_negparts_at_distance(t: usize, j1: usize, j2: usize, k: usize) -> Result<CountValue> {
    ground(t)?;
    range("j'", j1, 0, t)?;
    range("j''", j2, 0, t)?;
    range("k", k, 0, t)?;
    Ok(negparts_product(t as i64, j1 as i64, j2 as i64, k as i64))
}

fn negparts_product(t: i64, j1: i64, j2: i64, k: i64) -> CountValue {
    if (j1 + j2 + k) % 2 != 0 {
        return CountValue::zero();
    }
    binomial(t, k) * binomial(t - k, (j1 + j2 - k) / 2) * binomial(k, (j1 - j2 + k) / 2)
}

/// Orthogonal ordered pairs with `|X^-| = j'` and `|Y^-| = j''`.
pub fn orthogonal_pairs_with_negparts(t: usize, j1: usize, j2: usize) -> Result<CountValue> {
    even_t(t)?;
    range("j'", j1, 0, t)?;
    range("j''", j2, 0, t)?;
    Ok(negparts_product(t as i64, j1 as i64, j2 as i64, (t / 2) as i64))
}

/// Ordered pairs of `s`-subsets with `|A - B| = i`.
pub fn johnson_layer_pairs(t: usize, s: usize, i: usize) -> Result<CountValue> {
    ground(t)?;
    range("s", s, 1, t)?;
    range("i", i, 0, s.min(t - s))?;
    Ok(b(t, 2 * i) * b(t - 2 * i, s - i) * b(2 * i, i))
}

/// Orthogonal ordered pairs of vertices whose negative parts both have size `s`.
pub fn johnson_orthogonal_pairs(t: usize, s: usize) -> Result<CountValue> {
    ground(t)?;
    range("s", s, 1, t)?;
    if !t.is_multiple_of(4) || 4 * s < t || 4 * s > 3 * t {
        return Ok(CountValue::zero());
    }
    Ok(b(t, t / 2) * b(t / 2, s - t / 4) * b(t / 2, t / 4))
}

/// Number of `s`-layer vertices orthogonal to both members of a fixed
/// orthogonal pair in that layer.
pub fn johnson_mutual_count(t: usize, s: usize) -> Result<CountValue> {
    ground(t)?;
    if !t.is_multiple_of(4) || 4 * s < t || 4 * s > 3 * t {
        return Err(invalid(format!("needs 4 | t and t/4 <= s <= 3t/4, got t = {t}, s = {s}")));
    }
    let (q, s) = (t / 4, s as i64);
    let q = q as i64;
    let lo = 0.max(s - 2 * q);
    let hi = q.min(s - q);
    Ok((lo..=hi)
        .map(|c| {
            let last = binomial(q, s - q - c);
            binomial(s - q, c) * binomial(3 * q - s, q - c) * last.clone() * last
        })
        .sum())
}

fn oracle_ground(t: usize) -> Result<u32> {
    ground(t)?;
    if t > ORACLE_MAX_T {
        return Err(Error::Refused(format!("pair oracles are limited to t <= {ORACLE_MAX_T}, got {t}")));
    }
    Ok(full_mask(t))
}

#[inline]
fn orthogonal(x: u32, y: u32, t: usize) -> bool {
    2 * (x ^ y).count_ones() as usize == t
}

fn count_pairs(t: usize, keep: impl Fn(u32, u32) -> bool) -> Result<CountValue> {
    let full = oracle_ground(t)?;
    let mut n = 0u64;
    for x in 0..=full {
        for y in 0..=full {
            if keep(x, y) {
                n += 1;
            }
        }
    }
    Ok(n.into())
}

pub fn oracle_pairs_at_distance(t: usize, k: usize) -> Result<CountValue> {
    count_pairs(t, |x, y| (x ^ y).count_ones() as usize == k)
}

pub fn oracle_orthogonal_pairs(t: usize) -> Result<CountValue> {
    count_pairs(t, |x, y| orthogonal(x, y, t))
}

pub fn oracle_pairs_with_negparts_at_distance(t: usize, j1: usize, j2: usize, k: usize) -> Result<CountValue> {
    count_pairs(t, |x, y| {
        x.count_ones() as usize == j1 && y.count_ones() as usize == j2 && (x ^ y).count_ones() as usize == k
    })
}

pub fn oracle_orthogonal_pairs_with_negparts(t: usize, j1: usize, j2: usize) -> Result<CountValue> {
    count_pairs(t, |x, y| x.count_ones() as usize == j1 && y.count_ones() as usize == j2 && orthogonal(x, y, t))
}

pub fn oracle_johnson_layer_pairs(t: usize, s: usize, i: usize) -> Result<CountValue> {
    count_pairs(t, |x, y| {
        x.count_ones() as usize == s && y.count_ones() as usize == s && (x & !y).count_ones() as usize == i
    })
}

pub fn oracle_johnson_orthogonal_pairs(t: usize, s: usize) -> Result<CountValue> {
    count_pairs(t, |x, y| x.count_ones() as usize == s && y.count_ones() as usize == s && orthogonal(x, y, t))
}

/// Number of `z` in `pool` orthogonal to both `x` and `y`.
pub fn mutual_count_for(x: u32, y: u32, t: usize, pool: &[u32]) -> u64 {
    pool.iter().filter(|&&z| orthogonal(z, x, t) && orthogonal(z, y, t)).count() as u64
}

/// Distinct values of the mutual count over every orthogonal pair drawn from
/// `pool`.
fn mutual_values(t: usize, pool: &[u32]) -> BTreeSet<u64> {
    let mut seen = BTreeSet::new();
    for &x in pool {
        for &y in pool {
            if orthogonal(x, y, t) {
                seen.insert(mutual_count_for(x, y, t, pool));
            }
        }
    }
    seen
}

fn single_value(t: usize, seen: BTreeSet<u64>) -> Result<CountValue> {
    match seen.len() {
        0 => Ok(CountValue::zero()),
        1 => Ok(seen.into_iter().next().unwrap_or(0).into()),
        _ => Err(Error::Internal(format!("mutual count is not constant at t = {t}: {seen:?}"))),
    }
}

/// Mutual count over all orthogonal pairs in the cube; errors if it varies.
pub fn oracle_mutual_orthogonal_count(t: usize) -> Result<CountValue> {
    even_t(t)?;
    let full = oracle_ground(t)?;
    let pool: Vec<u32> = (0..=full).collect();
    single_value(t, mutual_values(t, &pool))
}

/// Mutual count over all orthogonal pairs in layer `s`; errors if it varies.
pub fn oracle_johnson_mutual_count(t: usize, s: usize) -> Result<CountValue> {
    let full = oracle_ground(t)?;
    range("s", s, 1, t)?;
    let pool: Vec<u32> = (0..=full).filter(|m| m.count_ones() as usize == s).collect();
    single_value(t, mutual_values(t, &pool))
}

/// The statistics accepted by [`evaluate`] and [`oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStatistic {
    Distance,
    Orthogonal,
    Mutual,
    NegpartDistance,
    NegpartOrthogonal,
    JohnsonLayer,
    JohnsonOrthogonal,
    JohnsonMutual,
}

impl PairStatistic {
    pub const ALL: [PairStatistic; 8] = [
        PairStatistic::Distance,
        PairStatistic::Orthogonal,
        PairStatistic::Mutual,
        PairStatistic::NegpartDistance,
        PairStatistic::NegpartOrthogonal,
        PairStatistic::JohnsonLayer,
        PairStatistic::JohnsonOrthogonal,
        PairStatistic::JohnsonMutual,
    ];

    /// Whether the statistic is defined at ground-set size `t`.
    pub fn admits(self, t: usize) -> bool {
        match self {
            PairStatistic::Orthogonal | PairStatistic::Mutual | PairStatistic::NegpartOrthogonal => t.is_multiple_of(2),
            PairStatistic::JohnsonOrthogonal | PairStatistic::JohnsonMutual => t.is_multiple_of(4),
            _ => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairStatistic::Distance => "distance",
            PairStatistic::Orthogonal => "orthogonal",
            PairStatistic::Mutual => "mutual",
            PairStatistic::NegpartDistance => "negpart-distance",
            PairStatistic::NegpartOrthogonal => "negpart-orthogonal",
            PairStatistic::JohnsonLayer => "johnson-layer",
            PairStatistic::JohnsonOrthogonal => "johnson-orthogonal",
            PairStatistic::JohnsonMutual => "johnson-mutual",
        }
    }
}

impl fmt::Display for PairStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairStatistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PairStatistic::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| invalid(format!("unknown pair statistic {s:?}")))
    }
}

/// Parameters of one pair count. Fields a statistic does not use stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PairQuery {
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_prime: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_dblprime: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
}

impl PairQuery {
    pub fn new(t: usize) -> Self {
        PairQuery { t, ..Default::default() }
    }
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| invalid(format!("parameter {name} is required")))
}

/// Closed-form value of `stat` at `q`.
pub fn evaluate(stat: PairStatistic, q: &PairQuery) -> Result<CountValue> {
    let t = q.t;
    match stat {
        PairStatistic::Distance => pairs_at_distance(t, need(q.k, "k")?),
        PairStatistic::Orthogonal => orthogonal_pairs(t),
        PairStatistic::Mutual => mutual_orthogonal_count(t),
        PairStatistic::NegpartDistance => {
            pairs_with_negparts_at_distance(t, need(q.j_prime, "j'")?, need(q.j_dblprime, "j''")?, need(q.k, "k")?)
        }
        PairStatistic::NegpartOrthogonal => {
            orthogonal_pairs_with_negparts(t, need(q.j_prime, "j'")?, need(q.j_dblprime, "j''")?)
        }
        PairStatistic::JohnsonLayer => johnson_layer_pairs(t, need(q.s, "s")?, need(q.i, "i")?),
        PairStatistic::JohnsonOrthogonal => johnson_orthogonal_pairs(t, need(q.s, "s")?),
        PairStatistic::JohnsonMutual => johnson_mutual_count(t, need(q.s, "s")?),
    }
}

/// Brute-force value of `stat` at `q`.
pub fn oracle(stat: PairStatistic, q: &PairQuery) -> Result<CountValue> {
    let t = q.t;
    match stat {
        PairStatistic::Distance => oracle_pairs_at_distance(t, need(q.k, "k")?),
        PairStatistic::Orthogonal => oracle_orthogonal_pairs(t),
        PairStatistic::Mutual => oracle_mutual_orthogonal_count(t),
        PairStatistic::NegpartDistance => oracle_pairs_with_negparts_at_distance(
            t,
            need(q.j_prime, "j'")?,
            need(q.j_dblprime, "j''")?,
            need(q.k, "k")?,
        ),
        PairStatistic::NegpartOrthogonal => {
            oracle_orthogonal_pairs_with_negparts(t, need(q.j_prime, "j'")?, need(q.j_dblprime, "j''")?)
        }
        PairStatistic::JohnsonLayer => oracle_johnson_layer_pairs(t, need(q.s, "s")?, need(q.i, "i")?),
        PairStatistic::JohnsonOrthogonal => oracle_johnson_orthogonal_pairs(t, need(q.s, "s")?),
        PairStatistic::JohnsonMutual => oracle_johnson_mutual_count(t, need(q.s, "s")?),
    }
}

/// Completes `partial` over every admissible value of the parameters it
/// leaves unset.
pub fn sweep_queries(stat: PairStatistic, partial: &PairQuery) -> Vec<PairQuery> {
    let t = partial.t;
    let opts = |v: Option<usize>, lo: usize, hi: usize| -> Vec<usize> {
        match v {
            Some(v) => vec![v],
            None if lo <= hi => (lo..=hi).collect(),
            None => Vec::new(),
        }
    };
    let mut out = Vec::new();
    if !stat.admits(t) {
        return out;
    }
    match stat {
        PairStatistic::Distance => {
            for k in opts(partial.k, 0, t) {
                out.push(PairQuery { k: Some(k), ..PairQuery::new(t) });
            }
        }
        PairStatistic::Orthogonal | PairStatistic::Mutual => out.push(PairQuery::new(t)),
        PairStatistic::NegpartDistance | PairStatistic::NegpartOrthogonal => {
            for j1 in opts(partial.j_prime, 0, t) {
                for j2 in opts(partial.j_dblprime, 0, t) {
                    let base = PairQuery { j_prime: Some(j1), j_dblprime: Some(j2), ..PairQuery::new(t) };
                    if stat == PairStatistic::NegpartOrthogonal {
                        out.push(base);
                    } else {
                        for k in opts(partial.k, 0, t) {
                            out.push(PairQuery { k: Some(k), ..base });
                        }
                    }
                }
            }
        }
        PairStatistic::JohnsonLayer => {
            for s in opts(partial.s, 1, t) {
                for i in opts(partial.i, 0, s.min(t.saturating_sub(s))) {
                    out.push(PairQuery { s: Some(s), i: Some(i), ..PairQuery::new(t) });
                }
            }
        }
        PairStatistic::JohnsonOrthogonal => {
            for s in opts(partial.s, t.div_ceil(4), 3 * t / 4) {
                out.push(PairQuery { s: Some(s), ..PairQuery::new(t) });
            }
        }
        PairStatistic::JohnsonMutual => {
            for s in opts(partial.s, t.div_ceil(4), 3 * t / 4) {
                out.push(PairQuery { s: Some(s), ..PairQuery::new(t) });
            }
        }
    }
    out
}

/// One evaluated query, with the oracle value when it was computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairRow {
    pub statistic: PairStatistic,
    #[serde(flatten)]
    pub query: PairQuery,
    pub closed_form: CountValue,
    pub oracle: Option<CountValue>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

/// Evaluates `q`, adding the oracle value when `with_oracle` is set.
pub fn pair_row(stat: PairStatistic, q: &PairQuery, with_oracle: bool) -> Result<PairRow> {
    let closed_form = evaluate(stat, q)?;
    let oracle = if with_oracle { Some(oracle(stat, q)?) } else { None };
    let matches = oracle.as_ref().map(|o| *o == closed_form);
    Ok(PairRow { statistic: stat, query: *q, closed_form, oracle, matches })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> CountValue {
        v.into()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(pairs_at_distance(3, 0).unwrap(), c(8));
        assert_eq!(pairs_at_distance(3, 1).unwrap(), c(24));
        assert_eq!(oracle_pairs_at_distance(3, 1).unwrap(), c(24));
        assert!(pairs_at_distance(3, 4).is_err());
        assert_eq!(orthogonal_pairs(4).unwrap(), c(96));
        assert_eq!(oracle_orthogonal_pairs(4).unwrap(), c(96));
        assert_eq!(orthogonal_pairs(6).unwrap(), c(1280));
        assert!(orthogonal_pairs(5).is_err());
    }

    #[test]
    fn mutual_examples() {
        assert_eq!(mutual_orthogonal_count(4).unwrap(), c(4));
        assert_eq!(mutual_orthogonal_count(6).unwrap(), c(0));
        assert_eq!(mutual_orthogonal_count(8).unwrap(), c(36));
        let (x, y) = (0u32, 0b1100u32);
        assert_eq!(mutual_count_for(x, y, 4, &(0..16).collect::<Vec<_>>()), 4);
        assert!(mutual_orthogonal_count(7).is_err());
    }

    #[test]
    fn negpart_examples() {
        assert_eq!(pairs_with_negparts_at_distance(3, 1, 1, 2).unwrap(), c(6));
        assert_eq!(pairs_with_negparts_at_distance(3, 1, 1, 1).unwrap(), c(0));
        assert_eq!(pairs_with_negparts_at_distance(4, 2, 2, 0).unwrap(), c(6));
        assert_eq!(orthogonal_pairs_with_negparts(4, 1, 2).unwrap(), c(0));
        assert_eq!(
            orthogonal_pairs_with_negparts(4, 1, 1).unwrap(),
            oracle_orthogonal_pairs_with_negparts(4, 1, 1).unwrap()
        );
        assert_eq!(
            orthogonal_pairs_with_negparts(6, 2, 2).unwrap(),
            oracle_orthogonal_pairs_with_negparts(6, 2, 2).unwrap()
        );
    }

    #[test]
    fn johnson_examples() {
        assert_eq!(johnson_layer_pairs(4, 2, 1).unwrap(), c(24));
        assert_eq!(johnson_layer_pairs(5, 2, 2).unwrap(), c(30));
        for t in 3..=8 {
            for s in 1..=t {
                assert_eq!(johnson_layer_pairs(t, s, 0).unwrap(), binomial(t as i64, s as i64));
            }
        }
        assert!(johnson_layer_pairs(4, 3, 2).is_err());
        assert_eq!(johnson_orthogonal_pairs(4, 1).unwrap(), c(12));
        assert_eq!(oracle_johnson_orthogonal_pairs(4, 1).unwrap(), c(12));
        assert_eq!(johnson_orthogonal_pairs(6, 2).unwrap(), c(0));
        assert_eq!(johnson_mutual_count(4, 1).unwrap(), c(2));
        assert!(johnson_mutual_count(6, 2).is_err());
        assert!(johnson_mutual_count(8, 1).is_err());
    }

    #[test]
    fn oracle_refuses_large_t() {
        assert!(matches!(oracle_orthogonal_pairs(12), Err(Error::Refused(_))));
    }

    #[test]
    fn statistic_names_round_trip() {
        for s in PairStatistic::ALL {
            assert_eq!(s.name().parse::<PairStatistic>().unwrap(), s);
        }
        assert!("nope".parse::<PairStatistic>().is_err());
    }

    #[test]
    fn sweep_fills_missing_parameters() {
        let q = PairQuery::new(4);
        assert_eq!(sweep_queries(PairStatistic::Distance, &q).len(), 5);
        assert_eq!(sweep_queries(PairStatistic::JohnsonMutual, &q).len(), 3);
        let fixed = PairQuery { k: Some(2), ..q };
        assert_eq!(sweep_queries(PairStatistic::NegpartDistance, &fixed).len(), 25);
    }
}
