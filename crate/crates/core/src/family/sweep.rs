use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::cases::{closed_form_with, ClosedForm, Transform};
use super::{BoundaryPattern, FamilyKind, StatKey};
use crate::counting::{CountValue, SmirnovCounter};
use crate::error::{invalid, Error, Result};
use crate::hypercube::{full_mask, GroundSet};

pub const DEFAULT_ORACLE_BOUND: usize = 8;
pub const MAX_ORACLE_BOUND: usize = 10;

/// Largest `t` an exhaustive sweep may run at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBound(usize);

impl OracleBound {
    pub fn new(limit: usize) -> Result<Self> {
        if !(3..=MAX_ORACLE_BOUND).contains(&limit) {
            return Err(invalid(format!("oracle bound must lie in [3, {MAX_ORACLE_BOUND}], got {limit}")));
        }
        Ok(OracleBound(limit))
    }

    pub fn limit(self) -> usize {
        self.0
    }

    pub fn check(self, t: usize) -> Result<()> {
        GroundSet::new(t)?;
        if t > self.0 {
            return Err(Error::Refused(format!(
                "t = {t} exceeds the oracle bound {}; raise it with --oracle-bound (at most {MAX_ORACLE_BOUND})",
                self.0
            )));
        }
        Ok(())
    }
}

impl Default for OracleBound {
    fn default() -> Self {
        OracleBound(DEFAULT_ORACLE_BOUND)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatTable {
    pub family: FamilyKind,
    pub t: usize,
    pub provenance: Provenance,
    #[serde(serialize_with = "rows_as_list")]
    pub rows: BTreeMap<StatKey, CountValue>,
}

fn rows_as_list<S: serde::Serializer>(
    rows: &BTreeMap<StatKey, CountValue>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row<'a> {
        key: &'a StatKey,
        count: &'a CountValue,
    }
    s.collect_seq(rows.iter().map(|(key, count)| Row { key, count }))
}

impl StatTable {
    pub fn total(&self) -> CountValue {
        self.rows.values().cloned().sum()
    }

    pub fn get(&self, key: &StatKey) -> CountValue {
        self.rows.get(key).cloned().unwrap_or_default()
    }
}

/// Tallies the key of every member pair among all `4^t` ordered pairs.
pub fn oracle_table(t: usize, kind: FamilyKind, bound: OracleBound) -> Result<StatTable> {
    bound.check(t)?;
    let full = full_mask(t);
    let counts = (0..=full)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<StatKey, u64>, a| {
            for b in 0..=full {
                if let Some(key) = kind.key_of(a, b, t) {
                    *acc.entry(key).or_default() += 1;
                }
            }
            acc
        })
        .reduce(BTreeMap::new, |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_default() += v;
            }
            x
        });
    Ok(StatTable {
        family: kind,
        t,
        provenance: Provenance::Oracle,
        rows: counts.into_iter().map(|(k, v)| (k, v.into())).collect(),
    })
}

fn odd_up_to(limit: usize) -> impl Iterator<Item = usize> + Clone {
    (1..=limit).step_by(2)
}

/// Odd `ℓ` values a block of `size` elements can carry: `ρ <= size` forces
/// `ℓ <= 2 size + 1`.
fn ells_for(size: usize, t: usize) -> Vec<usize> {
    odd_up_to(t.min(2 * size + 1)).collect()
}

/// Every key of `kind` at `t` whose sizes satisfy the family's constraints,
/// over all 16 patterns and all odd `ℓ` values a closed form could need.
pub fn candidate_keys(kind: FamilyKind, t: usize) -> Vec<StatKey> {
    let mut out = Vec::new();
    let mut push_sizes = |j1: usize, j2: usize, j: Option<usize>| {
        let base = StatKey { t, j_prime: j1, j_dblprime: j2, j, ..StatKey::default() };
        let mut shapes: Vec<StatKey> = Vec::new();
        match kind {
            FamilyKind::Partition => {
                for lp in ells_for(j1, t) {
                    for lpp in ells_for(j2, t) {
                        shapes.push(StatKey { ell_prime: Some(lp), ell_dblprime: Some(lpp), ..base });
                    }
                }
            }
            FamilyKind::DisjointNotCovering => {
                for lp in ells_for(j1, t) {
                    for lpp in ells_for(j2, t) {
                        for l in ells_for(t - j1 - j2, t) {
                            shapes.push(StatKey { ell_prime: Some(lp), ell_dblprime: Some(lpp), ell: Some(l), ..base });
                        }
                    }
                }
            }
            FamilyKind::IntersectCover3 => {
                for lc in ells_for(j1 + j2 - t, t) {
                    for lp in ells_for(t - j2, t) {
                        for lpp in ells_for(t - j1, t) {
                            shapes.push(StatKey {
                                ell_cap: Some(lc),
                                ell_prime: Some(lp),
                                ell_dblprime: Some(lpp),
                                ..base
                            });
                        }
                    }
                }
            }
            FamilyKind::IntersectCover2 => {
                for lc in ells_for(j1 + j2 - t, t) {
                    for ld in ells_for(2 * t - j1 - j2, t) {
                        shapes.push(StatKey { ell_cap: Some(lc), ell_delta: Some(ld), ..base });
                    }
                }
            }
            FamilyKind::IntersectNotCover4 => {
                let j = j.unwrap_or_default();
                for l in ells_for(t - (j1 + j2 - j), t) {
                    for lp in ells_for(j1 - j, t) {
                        for lpp in ells_for(j2 - j, t) {
                            for lc in ells_for(j, t) {
                                shapes.push(StatKey {
                                    ell: Some(l),
                                    ell_prime: Some(lp),
                                    ell_dblprime: Some(lpp),
                                    ell_cap: Some(lc),
                                    ..base
                                });
                            }
                        }
                    }
                }
            }
            FamilyKind::IntersectNotCover3 => {
                let j = j.unwrap_or_default();
                for l in ells_for(t - (j1 + j2 - j), t) {
                    for ld in ells_for(j1 + j2 - 2 * j, t) {
                        for lc in ells_for(j, t) {
                            shapes.push(StatKey { ell: Some(l), ell_delta: Some(ld), ell_cap: Some(lc), ..base });
                        }
                    }
                }
            }
        }
        for shape in shapes {
            for pattern in BoundaryPattern::all() {
                out.push(StatKey { pattern, ..shape });
            }
        }
    };
    match kind {
        FamilyKind::Partition => {
            for j1 in 1..t {
                push_sizes(j1, t - j1, None);
            }
        }
        FamilyKind::DisjointNotCovering => {
            for j1 in 1..t {
                for j2 in 1..t - j1 {
                    push_sizes(j1, j2, None);
                }
            }
        }
        FamilyKind::IntersectCover3 | FamilyKind::IntersectCover2 => {
            for j1 in 1..t {
                for j2 in (t + 1 - j1)..t {
                    push_sizes(j1, j2, None);
                }
            }
        }
        FamilyKind::IntersectNotCover4 | FamilyKind::IntersectNotCover3 => {
            for j in 1..t {
                for j1 in j + 1..t {
                    for j2 in j + 1..t {
                        if j1 + j2 - j < t {
                            push_sizes(j1, j2, Some(j));
                        }
                    }
                }
            }
        }
    }
    out
}

/// One compared key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub family: FamilyKind,
    pub key: StatKey,
    /// `None` when no case item reaches the key's pattern.
    pub closed_form: Option<CountValue>,
    pub item: Option<&'static str>,
    pub transform: Option<Transform>,
    pub oracle: CountValue,
}

impl SweepRow {
    pub fn matches(&self) -> bool {
        self.closed_form.as_ref() == Some(&self.oracle)
    }

    fn cells(&self) -> Vec<String> {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let k = &self.key;
        vec![
            self.family.tag().to_string(),
            k.t.to_string(),
            k.pattern.a.label().to_string(),
            k.pattern.b.label().to_string(),
            k.j_prime.to_string(),
            k.j_dblprime.to_string(),
            opt(k.j),
            opt(k.ell_prime),
            opt(k.ell_dblprime),
            opt(k.ell_cap),
            opt(k.ell_delta),
            opt(k.ell),
            self.closed_form.as_ref().map_or_else(|| "uncovered".to_string(), |v| v.to_string()),
            self.oracle.to_string(),
            self.matches().to_string(),
        ]
    }
}

impl Serialize for SweepRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Flat<'a> {
            family: FamilyKind,
            t: usize,
            pattern_a: &'static str,
            pattern_b: &'static str,
            j_prime: usize,
            j_dblprime: usize,
            j: Option<usize>,
            ell_prime: Option<usize>,
            ell_dblprime: Option<usize>,
            ell_cap: Option<usize>,
            ell_delta: Option<usize>,
            ell: Option<usize>,
            closed_form: Option<&'a CountValue>,
            oracle: &'a CountValue,
            #[serde(rename = "match")]
            matches: bool,
            item: Option<&'static str>,
            transform: Option<Transform>,
        }
        let k = &self.key;
        Flat {
            family: self.family,
            t: k.t,
            pattern_a: k.pattern.a.label(),
            pattern_b: k.pattern.b.label(),
            j_prime: k.j_prime,
            j_dblprime: k.j_dblprime,
            j: k.j,
            ell_prime: k.ell_prime,
            ell_dblprime: k.ell_dblprime,
            ell_cap: k.ell_cap,
            ell_delta: k.ell_delta,
            ell: k.ell,
            closed_form: self.closed_form.as_ref(),
            oracle: &self.oracle,
            matches: self.matches(),
            item: self.item,
            transform: self.transform,
        }
        .serialize(s)
    }
}

pub const CSV_HEADER: [&str; 15] = [
    "family",
    "t",
    "pattern_a",
    "pattern_b",
    "j_prime",
    "j_dblprime",
    "j",
    "ell_prime",
    "ell_dblprime",
    "ell_cap",
    "ell_delta",
    "ell",
    "closed_form",
    "oracle",
    "match",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub family: FamilyKind,
    pub t: usize,
    /// Ordered pairs in the family.
    pub oracle_pairs: CountValue,
    pub matched: usize,
    pub mismatched: usize,
    /// Keys with oracle pairs but no case item.
    pub uncovered_nonempty: usize,
    /// Candidate keys with no case item and no pairs.
    pub uncovered_empty: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn all_match(&self) -> bool {
        self.mismatched == 0 && self.uncovered_nonempty == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.matches())
    }
}

/// Compares closed forms against the oracle on every key that is nonzero on
/// either side.
pub fn full_sweep(t: usize, kind: FamilyKind, bound: OracleBound) -> Result<SweepReport> {
    let oracle = oracle_table(t, kind, bound)?;
    let mut grid = candidate_keys(kind, t);
    let known: BTreeSet<StatKey> = grid.iter().copied().collect();
    grid.extend(oracle.rows.keys().filter(|k| !known.contains(k)).copied());

    let evaluated: Vec<(StatKey, ClosedForm)> = grid
        .par_iter()
        .map_init(SmirnovCounter::new, |sm, key| closed_form_with(kind, key, sm).map(|cf| (*key, cf)))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut uncovered_empty = 0;
    for (key, cf) in evaluated {
        let observed = oracle.get(&key);
        let row = match cf {
            ClosedForm::Value { value, item, transform } => {
                if value.is_zero() && observed.is_zero() {
                    continue;
                }
                SweepRow {
                    family: kind,
                    key,
                    closed_form: Some(value),
                    item: Some(item),
                    transform: Some(transform),
                    oracle: observed,
                }
            }
            ClosedForm::Uncovered => {
                if observed.is_zero() {
                    uncovered_empty += 1;
                    continue;
                }
                SweepRow { family: kind, key, closed_form: None, item: None, transform: None, oracle: observed }
            }
        };
        rows.push(row);
    }
    rows.sort_by_key(|a| a.key);
    let matched = rows.iter().filter(|r| r.matches()).count();
    let uncovered_nonempty = rows.iter().filter(|r| r.closed_form.is_none()).count();
    Ok(SweepReport {
        family: kind,
        t,
        oracle_pairs: oracle.total(),
        matched,
        mismatched: rows.len() - matched - uncovered_nonempty,
        uncovered_nonempty,
        uncovered_empty,
        rows,
    })
}

/// Writes rows as CSV with [`CSV_HEADER`]; absent parameters are empty cells.
pub fn write_csv<'a, W: Write>(rows: impl IntoIterator<Item = &'a SweepRow>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Internal(format!("csv output failed: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.write_record(row.cells()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Internal(format!("csv output failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::EndSet;

    #[test]
    fn bound_policy() {
        assert!(OracleBound::new(11).is_err());
        assert!(matches!(
            oracle_table(9, FamilyKind::DisjointNotCovering, OracleBound::default()),
            Err(Error::Refused(_))
        ));
        assert!(oracle_table(9, FamilyKind::DisjointNotCovering, OracleBound::new(9).unwrap()).is_ok());
    }

    #[test]
    fn partition_table_total() {
        for t in 3..=8 {
            let table = oracle_table(t, FamilyKind::Partition, OracleBound::default()).unwrap();
            assert_eq!(table.total(), ((1u64 << t) - 2).into());
        }
    }

    #[test]
    fn cover3_anchor_row() {
        let table = oracle_table(4, FamilyKind::IntersectCover3, OracleBound::default()).unwrap();
        let key = StatKey {
            t: 4,
            pattern: BoundaryPattern::new(EndSet::First, EndSet::Last),
            j_prime: 2,
            j_dblprime: 3,
            ell_cap: Some(3),
            ell_prime: Some(1),
            ell_dblprime: Some(1),
            ..StatKey::default()
        };
        assert_eq!(table.get(&key), 1.into());
    }

    #[test]
    fn small_sweeps_match() {
        for kind in FamilyKind::ALL {
            for t in 3..=6 {
                let r = full_sweep(t, kind, OracleBound::default()).unwrap();
                let bad: Vec<_> = r.failures().take(3).collect();
                assert!(r.all_match(), "{kind} t={t}: {bad:?}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let r = full_sweep(3, FamilyKind::Partition, OracleBound::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&r.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let first = lines.next().unwrap();
        assert!(first.starts_with("partition,3,"));
        assert!(first.contains(",,"), "absent parameters are empty: {first}");
    }
}
