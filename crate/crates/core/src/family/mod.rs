//! Statistics of ordered set pairs `(A, B)` grouped by how they intersect and
//! whether they cover the ground set.
//!
//! Each pair is summarised by a [`StatKey`]: its [`BoundaryPattern`], the
//! block sizes, and the q-values of the blocks that matter for its family.
//! [`closed_form`] evaluates the product formulas from a declarative case
//! table; [`oracle_table`] tallies keys over all `4^t` pairs.

mod cases;
mod sweep;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cycle::q_of_mask;
use crate::error::{invalid, Error, Result};
use crate::hypercube::{full_mask, GroundSubset};

pub use cases::{
    case_items, closed_form, split_factor, symmetry_extend, unsplit_product, CaseItem, ClosedForm, Transform,
};
pub use sweep::{
    candidate_keys, full_sweep, oracle_table, write_csv, OracleBound, Provenance, StatTable, SweepReport, SweepRow,
    CSV_HEADER, DEFAULT_ORACLE_BOUND, MAX_ORACLE_BOUND,
};

/// `X ∩ {1, t}` for one member of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndSet {
    Neither,
    First,
    Last,
    Both,
}

impl EndSet {
    pub const ALL: [EndSet; 4] = [EndSet::Neither, EndSet::First, EndSet::Last, EndSet::Both];

    pub fn of_mask(mask: u32, t: usize) -> Self {
        let first = mask & 1 != 0;
        let last = mask & (1 << (t - 1)) != 0;
        EndSet::from_flags(first, last)
    }

    pub fn from_flags(first: bool, last: bool) -> Self {
        match (first, last) {
            (false, false) => EndSet::Neither,
            (true, false) => EndSet::First,
            (false, true) => EndSet::Last,
            (true, true) => EndSet::Both,
        }
    }

    pub fn has_first(self) -> bool {
        matches!(self, EndSet::First | EndSet::Both)
    }

    pub fn has_last(self) -> bool {
        matches!(self, EndSet::Last | EndSet::Both)
    }

    /// Image under `e -> t + 1 - e`.
    pub fn reversed(self) -> Self {
        EndSet::from_flags(self.has_last(), self.has_first())
    }

    pub fn label(self) -> &'static str {
        match self {
            EndSet::Neither => "{}",
            EndSet::First => "{1}",
            EndSet::Last => "{t}",
            EndSet::Both => "{1,t}",
        }
    }
}

impl fmt::Display for EndSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for EndSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// `(A ∩ {1,t}, B ∩ {1,t})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BoundaryPattern {
    pub a: EndSet,
    pub b: EndSet,
}

impl BoundaryPattern {
    pub const fn new(a: EndSet, b: EndSet) -> Self {
        BoundaryPattern { a, b }
    }

    pub fn of_masks(a: u32, b: u32, t: usize) -> Self {
        BoundaryPattern { a: EndSet::of_mask(a, t), b: EndSet::of_mask(b, t) }
    }

    /// All 16 ordered patterns.
    pub fn all() -> impl Iterator<Item = BoundaryPattern> {
        EndSet::ALL.into_iter().flat_map(|a| EndSet::ALL.into_iter().map(move |b| BoundaryPattern { a, b }))
    }

    pub fn reversed(self) -> Self {
        BoundaryPattern { a: self.a.reversed(), b: self.b.reversed() }
    }

    pub fn swapped(self) -> Self {
        BoundaryPattern { a: self.b, b: self.a }
    }
}

impl fmt::Display for BoundaryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// The six families of ordered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    /// Disjoint, nonempty, covering.
    Partition,
    /// Disjoint, nonempty, not covering.
    DisjointNotCovering,
    /// Intersecting Sperner pair that covers, keyed by `A∩B`, `A-B`, `B-A`.
    IntersectCover3,
    /// Intersecting Sperner pair that covers, keyed by `A∩B`, `A△B`.
    IntersectCover2,
    /// Intersecting Sperner pair that does not cover, keyed by the
    /// complement, `A-B`, `B-A`, `A∩B`.
    IntersectNotCover4,
    /// Intersecting Sperner pair that does not cover, keyed by the
    /// complement, `A△B`, `A∩B`.
    IntersectNotCover3,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 6] = [
        FamilyKind::Partition,
        FamilyKind::DisjointNotCovering,
        FamilyKind::IntersectCover3,
        FamilyKind::IntersectCover2,
        FamilyKind::IntersectNotCover4,
        FamilyKind::IntersectNotCover3,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FamilyKind::Partition => "partition",
            FamilyKind::DisjointNotCovering => "disjoint-noncover",
            FamilyKind::IntersectCover3 => "intersect-cover3",
            FamilyKind::IntersectCover2 => "intersect-cover2",
            FamilyKind::IntersectNotCover4 => "intersect-noncover4",
            FamilyKind::IntersectNotCover3 => "intersect-noncover3",
        }
    }

    /// Whether keys of this family carry `j = |A ∩ B|`.
    pub fn uses_j(self) -> bool {
        matches!(self, FamilyKind::IntersectNotCover4 | FamilyKind::IntersectNotCover3)
    }

    /// Membership test on raw masks.
    pub fn contains(self, a: u32, b: u32, t: usize) -> bool {
        let full = full_mask(t);
        let (ja, jb) = (a.count_ones(), b.count_ones());
        let cap = (a & b).count_ones();
        let cup = (a | b).count_ones();
        let sperner = ja.max(jb) < cup;
        match self {
            FamilyKind::Partition => a != 0 && b != 0 && cap == 0 && (a | b) == full,
            FamilyKind::DisjointNotCovering => a != 0 && b != 0 && cap == 0 && (a | b) != full,
            FamilyKind::IntersectCover3 | FamilyKind::IntersectCover2 => cap > 0 && sperner && (a | b) == full,
            FamilyKind::IntersectNotCover4 | FamilyKind::IntersectNotCover3 => cap > 0 && sperner && (a | b) != full,
        }
    }

    /// Key of `(a, b)` in this family, or `None` when the pair is not a member.
    pub fn key_of(self, a: u32, b: u32, t: usize) -> Option<StatKey> {
        if !self.contains(a, b, t) {
            return None;
        }
        let full = full_mask(t);
        let q = |m: u32| Some(q_of_mask(m, t));
        let mut key = StatKey {
            t,
            pattern: BoundaryPattern::of_masks(a, b, t),
            j_prime: a.count_ones() as usize,
            j_dblprime: b.count_ones() as usize,
            ..StatKey::default()
        };
        match self {
            FamilyKind::Partition => {
                key.ell_prime = q(a);
                key.ell_dblprime = q(b);
            }
            FamilyKind::DisjointNotCovering => {
                key.ell_prime = q(a);
                key.ell_dblprime = q(b);
                key.ell = q(a | b);
            }
            FamilyKind::IntersectCover3 => {
                key.ell_cap = q(a & b);
                key.ell_prime = q(a & !b & full);
                key.ell_dblprime = q(b & !a & full);
            }
            FamilyKind::IntersectCover2 => {
                key.ell_cap = q(a & b);
                key.ell_delta = q(a ^ b);
            }
            FamilyKind::IntersectNotCover4 => {
                key.j = Some((a & b).count_ones() as usize);
                key.ell_prime = q(a & !b & full);
                key.ell_dblprime = q(b & !a & full);
                key.ell_cap = q(a & b);
                key.ell = q(a | b);
            }
            FamilyKind::IntersectNotCover3 => {
                key.j = Some((a & b).count_ones() as usize);
                key.ell_delta = q(a ^ b);
                key.ell_cap = q(a & b);
                key.ell = q(a | b);
            }
        }
        Some(key)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL.into_iter().find(|k| k.tag() == s).ok_or_else(|| invalid(format!("unknown family {s:?}")))
    }
}

impl Serialize for FamilyKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Parameters identifying one row of a family table. Parameters the family
/// does not use are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StatKey {
    pub t: usize,
    pub pattern: BoundaryPattern,
    pub j_prime: usize,
    pub j_dblprime: usize,
    pub j: Option<usize>,
    pub ell_prime: Option<usize>,
    pub ell_dblprime: Option<usize>,
    pub ell_cap: Option<usize>,
    pub ell_delta: Option<usize>,
    pub ell: Option<usize>,
}

impl Default for StatKey {
    fn default() -> Self {
        StatKey {
            t: 0,
            pattern: BoundaryPattern::new(EndSet::Neither, EndSet::Neither),
            j_prime: 0,
            j_dblprime: 0,
            j: None,
            ell_prime: None,
            ell_dblprime: None,
            ell_cap: None,
            ell_delta: None,
            ell: None,
        }
    }
}

impl StatKey {
    fn ells(&self) -> [(&'static str, Option<usize>); 5] {
        [
            ("ell_prime", self.ell_prime),
            ("ell_dblprime", self.ell_dblprime),
            ("ell_cap", self.ell_cap),
            ("ell_delta", self.ell_delta),
            ("ell", self.ell),
        ]
    }

    /// Image under ground-set reversal: endpoint roles swap, everything else
    /// is unchanged.
    pub fn reversed(&self) -> StatKey {
        StatKey { pattern: self.pattern.reversed(), ..*self }
    }

    /// Image under `(A, B) -> (B, A)`.
    pub fn swapped(&self) -> StatKey {
        StatKey {
            pattern: self.pattern.swapped(),
            j_prime: self.j_dblprime,
            j_dblprime: self.j_prime,
            ell_prime: self.ell_dblprime,
            ell_dblprime: self.ell_prime,
            ..*self
        }
    }
}

/// Every set the family formulas refer to, with its size and q-value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedSets {
    pub intersection: GroundSubset,
    pub union: GroundSubset,
    pub a_minus_b: GroundSubset,
    pub b_minus_a: GroundSubset,
    pub symmetric_difference: GroundSubset,
    pub complement_of_union: GroundSubset,
    pub q_a: usize,
    pub q_b: usize,
    pub q_intersection: usize,
    pub q_union: usize,
    pub q_a_minus_b: usize,
    pub q_b_minus_a: usize,
    pub q_symmetric_difference: usize,
}

/// Family memberships of one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairClass {
    pub pattern: BoundaryPattern,
    /// Empty when the pair lies in no family.
    pub memberships: Vec<(FamilyKind, StatKey)>,
    pub sets: DerivedSets,
}

impl PairClass {
    pub fn key(&self, kind: FamilyKind) -> Option<&StatKey> {
        self.memberships.iter().find(|(k, _)| *k == kind).map(|(_, key)| key)
    }

    pub fn in_any_family(&self) -> bool {
        !self.memberships.is_empty()
    }
}

pub fn classify_pair(a: &GroundSubset, b: &GroundSubset) -> Result<PairClass> {
    if a.ground() != b.ground() {
        return Err(invalid(format!("ground sets differ: t = {} and t = {}", a.ground().t(), b.ground().t())));
    }
    let t = a.ground().t();
    let (ma, mb) = (a.mask(), b.mask());
    let q = |s: &GroundSubset| q_of_mask(s.mask(), t);
    let sets = {
        let intersection = a.intersection(b);
        let union = a.union(b);
        let a_minus_b = a.difference(b);
        let b_minus_a = b.difference(a);
        let symmetric_difference = a.symmetric_difference(b);
        let complement_of_union = union.complement();
        DerivedSets {
            q_a: q(a),
            q_b: q(b),
            q_intersection: q(&intersection),
            q_union: q(&union),
            q_a_minus_b: q(&a_minus_b),
            q_b_minus_a: q(&b_minus_a),
            q_symmetric_difference: q(&symmetric_difference),
            intersection,
            union,
            a_minus_b,
            b_minus_a,
            symmetric_difference,
            complement_of_union,
        }
    };
    let memberships = FamilyKind::ALL.into_iter().filter_map(|k| k.key_of(ma, mb, t).map(|key| (k, key))).collect();
    Ok(PairClass { pattern: BoundaryPattern::of_masks(ma, mb, t), memberships, sets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::GroundSet;

    fn set(t: usize, m: &[usize]) -> GroundSubset {
        GroundSubset::from_members(GroundSet::new(t).unwrap(), m).unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = classify_pair(&set(3, &[1]), &set(3, &[2, 3])).unwrap();
        let k = c.key(FamilyKind::Partition).unwrap();
        assert_eq!(c.memberships.len(), 1);
        assert_eq!(k.pattern, BoundaryPattern::new(EndSet::First, EndSet::Last));
        assert_eq!((k.j_prime, k.j_dblprime, k.ell_prime, k.ell_dblprime), (1, 2, Some(1), Some(1)));

        let c = classify_pair(&set(4, &[1, 2]), &set(4, &[2, 3, 4])).unwrap();
        let k = c.key(FamilyKind::IntersectCover3).unwrap();
        assert_eq!(k.pattern, BoundaryPattern::new(EndSet::First, EndSet::Last));
        assert_eq!((k.ell_cap, k.ell_prime, k.ell_dblprime), (Some(3), Some(1), Some(1)));
        assert!(c.key(FamilyKind::IntersectCover2).is_some());

        let c = classify_pair(&set(4, &[1]), &set(4, &[4])).unwrap();
        let k = c.key(FamilyKind::DisjointNotCovering).unwrap();
        assert_eq!((k.ell_prime, k.ell_dblprime, k.ell), (Some(1), Some(1), Some(3)));
    }

    #[test]
    fn nested_pairs_are_out_of_family() {
        let c = classify_pair(&set(4, &[2]), &set(4, &[2, 3])).unwrap();
        assert!(!c.in_any_family());
        let c = classify_pair(&set(4, &[]), &set(4, &[2, 3])).unwrap();
        assert!(!c.in_any_family());
    }

    #[test]
    fn families_are_disjoint_up_to_key_choice() {
        for t in 3..=6 {
            let full = full_mask(t);
            for a in 0..=full {
                for b in 0..=full {
                    let n = [
                        FamilyKind::Partition,
                        FamilyKind::DisjointNotCovering,
                        FamilyKind::IntersectCover3,
                        FamilyKind::IntersectNotCover4,
                    ]
                    .into_iter()
                    .filter(|k| k.contains(a, b, t))
                    .count();
                    assert!(n <= 1);
                    assert_eq!(
                        FamilyKind::IntersectCover3.contains(a, b, t),
                        FamilyKind::IntersectCover2.contains(a, b, t)
                    );
                }
            }
        }
    }

    #[test]
    fn family_tags_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.tag().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("cover".parse::<FamilyKind>().is_err());
    }
}
