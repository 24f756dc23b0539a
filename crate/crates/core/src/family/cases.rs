//! The case table: one row per case item, giving the boundary pattern,
//! the Smirnov end letters and the sign in each `(ℓ ± 1)/2` argument.

use serde::Serialize;

use super::{BoundaryPattern, EndSet, FamilyKind, StatKey};
use crate::counting::{binomial, composition_count, CountValue, Letter, ParikhVector, SmirnovCounter};
use crate::error::{invalid, Result};

use EndSet::{Both as FL, First as F, Last as L, Neither as N};
use Letter::{Alpha as A, Beta as B, Gamma as G, Theta as T};

/// One case item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseItem {
    pub item: &'static str,
    pub pattern: BoundaryPattern,
    /// End letters of the Smirnov factor; `None` for families without one.
    pub ends: Option<(Letter, Letter)>,
    /// Sign per block, in the family's block order.
    pub signs: &'static [i8],
}

const fn item(
    item: &'static str,
    a: EndSet,
    b: EndSet,
    ends: Option<(Letter, Letter)>,
    signs: &'static [i8],
) -> CaseItem {
    CaseItem { item, pattern: BoundaryPattern::new(a, b), ends, signs }
}

// Blocks: A, B.
const PARTITION: &[CaseItem] = &[item("i", F, L, None, &[1, 1]), item("ii", FL, N, None, &[1, -1])];

// Blocks (letters): complement (theta), A (alpha), B (beta).
const DISJOINT_NOT_COVERING: &[CaseItem] = &[
    item("i", N, N, Some((T, T)), &[1, -1, -1]),
    item("ii", FL, N, Some((A, A)), &[-1, 1, -1]),
    item("iii", N, L, Some((T, B)), &[1, -1, 1]),
    item("iv", F, N, Some((A, T)), &[1, 1, -1]),
    item("v", F, L, Some((A, B)), &[-1, 1, 1]),
];

// Blocks: A∩B (theta), A-B (alpha), B-A (beta).
const INTERSECT_COVER3: &[CaseItem] = &[
    item("i", F, FL, Some((T, B)), &[1, -1, 1]),
    item("ii", F, L, Some((A, B)), &[-1, 1, 1]),
    item("iii", FL, FL, Some((T, T)), &[1, -1, -1]),
    item("iv", FL, N, Some((A, A)), &[-1, 1, -1]),
    item("v", FL, L, Some((A, T)), &[1, 1, -1]),
];

// Blocks: A∩B, A△B.
const INTERSECT_COVER2: &[CaseItem] = &[
    item("i", F, FL, None, &[1, 1]),
    item("ii", F, L, None, &[-1, 1]),
    item("iii", FL, FL, None, &[1, -1]),
    item("iv", FL, N, None, &[-1, 1]),
    item("v", FL, L, None, &[1, 1]),
];

// Blocks: complement (theta), A-B (alpha), B-A (beta), A∩B (gamma).
const INTERSECT_NOT_COVER4: &[CaseItem] = &[
    item("i", F, F, Some((G, T)), &[1, -1, -1, 1]),
    item("ii", F, FL, Some((G, B)), &[-1, -1, 1, 1]),
    item("iii", F, N, Some((A, T)), &[1, 1, -1, -1]),
    item("iv", F, L, Some((A, B)), &[-1, 1, 1, -1]),
    item("v", FL, FL, Some((G, G)), &[-1, -1, -1, 1]),
    item("vi", FL, N, Some((A, A)), &[-1, 1, -1, -1]),
    item("vii", FL, L, Some((A, G)), &[-1, 1, -1, 1]),
    item("viii", N, N, Some((T, T)), &[1, -1, -1, -1]),
    item("ix", N, L, Some((T, B)), &[1, -1, 1, -1]),
    item("x", L, L, Some((T, G)), &[1, -1, -1, 1]),
];

// Blocks: complement (theta), A△B (alpha), A∩B (beta).
const INTERSECT_NOT_COVER3: &[CaseItem] = &[
    item("i", F, F, Some((B, T)), &[1, -1, 1]),
    item("ii", F, FL, Some((B, A)), &[-1, 1, 1]),
    item("iii", F, N, Some((A, T)), &[1, 1, -1]),
    item("iv", F, L, Some((A, A)), &[-1, 1, -1]),
    item("v", FL, FL, Some((B, B)), &[-1, -1, 1]),
    item("vi", FL, N, Some((A, A)), &[-1, 1, -1]),
    item("vii", FL, L, Some((A, B)), &[-1, 1, 1]),
    item("viii", N, N, Some((T, T)), &[1, -1, -1]),
    item("ix", N, L, Some((T, A)), &[1, 1, -1]),
    item("x", L, L, Some((T, B)), &[1, -1, 1]),
];

/// The case items of `kind`, in table order.
pub fn case_items(kind: FamilyKind) -> &'static [CaseItem] {
    match kind {
        FamilyKind::Partition => PARTITION,
        FamilyKind::DisjointNotCovering => DISJOINT_NOT_COVERING,
        FamilyKind::IntersectCover3 => INTERSECT_COVER3,
        FamilyKind::IntersectCover2 => INTERSECT_COVER2,
        FamilyKind::IntersectNotCover4 => INTERSECT_NOT_COVER4,
        FamilyKind::IntersectNotCover3 => INTERSECT_NOT_COVER3,
    }
}

fn find_item(kind: FamilyKind, pattern: BoundaryPattern) -> Option<&'static CaseItem> {
    case_items(kind).iter().find(|c| c.pattern == pattern)
}

/// A symmetry of the pair space that preserves every family and every
/// q-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    Identity,
    Reverse,
    Swap,
    ReverseSwap,
}

impl Transform {
    pub const ALL: [Transform; 4] = [Transform::Identity, Transform::Reverse, Transform::Swap, Transform::ReverseSwap];

    pub fn apply(self, key: &StatKey) -> StatKey {
        match self {
            Transform::Identity => *key,
            Transform::Reverse => key.reversed(),
            Transform::Swap => key.swapped(),
            Transform::ReverseSwap => key.reversed().swapped(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transform::Identity => "identity",
            Transform::Reverse => "reverse",
            Transform::Swap => "swap",
            Transform::ReverseSwap => "reverse-swap",
        }
    }
}

/// Maps `key` onto a pattern some case item covers, or `None` when no
/// symmetry reaches one. Picks the earliest listed item; ties go to the
/// first transform in [`Transform::ALL`].
pub fn symmetry_extend(kind: FamilyKind, key: &StatKey) -> Option<(StatKey, Transform, &'static CaseItem)> {
    let items = case_items(kind);
    Transform::ALL
        .into_iter()
        .filter_map(|tr| {
            let image = tr.apply(key);
            let pos = items.iter().position(|c| c.pattern == image.pattern)?;
            Some((pos, image, tr, &items[pos]))
        })
        .min_by_key(|&(pos, _, tr, _)| (pos, tr))
        .map(|(_, image, tr, it)| (image, tr, it))
}

/// Result of evaluating a key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ClosedForm {
    Value { value: CountValue, item: &'static str, transform: Transform },
    Uncovered,
}

impl ClosedForm {
    pub fn value(&self) -> Option<&CountValue> {
        match self {
            ClosedForm::Value { value, .. } => Some(value),
            ClosedForm::Uncovered => None,
        }
    }
}

fn need(v: Option<usize>, name: &str, kind: FamilyKind) -> Result<i64> {
    v.map(|x| x as i64).ok_or_else(|| invalid(format!("{kind} keys need {name}")))
}

/// `(ℓ, size)` per block, in the case table's block order.
fn blocks(kind: FamilyKind, key: &StatKey) -> Result<Vec<(i64, i64)>> {
    let t = key.t as i64;
    let (j1, j2) = (key.j_prime as i64, key.j_dblprime as i64);
    let ell_p = || need(key.ell_prime, "ell_prime", kind);
    let ell_pp = || need(key.ell_dblprime, "ell_dblprime", kind);
    let ell_cap = || need(key.ell_cap, "ell_cap", kind);
    let ell_delta = || need(key.ell_delta, "ell_delta", kind);
    let ell = || need(key.ell, "ell", kind);
    let j = || need(key.j, "j", kind);
    Ok(match kind {
        FamilyKind::Partition => vec![(ell_p()?, j1), (ell_pp()?, j2)],
        FamilyKind::DisjointNotCovering => vec![(ell()?, t - j1 - j2), (ell_p()?, j1), (ell_pp()?, j2)],
        FamilyKind::IntersectCover3 => vec![(ell_cap()?, j1 + j2 - t), (ell_p()?, t - j2), (ell_pp()?, t - j1)],
        FamilyKind::IntersectCover2 => vec![(ell_cap()?, j1 + j2 - t), (ell_delta()?, 2 * t - j1 - j2)],
        FamilyKind::IntersectNotCover4 => {
            let j = j()?;
            vec![(ell()?, t - (j1 + j2 - j)), (ell_p()?, j1 - j), (ell_pp()?, j2 - j), (ell_cap()?, j)]
        }
        FamilyKind::IntersectNotCover3 => {
            let j = j()?;
            vec![(ell()?, t - (j1 + j2 - j)), (ell_delta()?, j1 + j2 - 2 * j), (ell_cap()?, j)]
        }
    })
}

fn validate(key: &StatKey) -> Result<()> {
    for (name, v) in key.ells() {
        if let Some(v) = v {
            if v % 2 == 0 || v > key.t {
                return Err(invalid(format!("{name} = {v} must be odd and in [1, {}]", key.t)));
            }
        }
    }
    Ok(())
}

/// The conditional equalities some families impose on a nonempty row.
fn equalities_hold(kind: FamilyKind, key: &StatKey) -> bool {
    match kind {
        FamilyKind::Partition => key.ell_prime == key.ell_dblprime,
        FamilyKind::IntersectCover2 => key.ell_cap == key.ell_delta,
        _ => true,
    }
}

fn product_for(kind: FamilyKind, key: &StatKey, it: &CaseItem, smirnov: &mut SmirnovCounter) -> Result<CountValue> {
    if !equalities_hold(kind, key) {
        return Ok(CountValue::zero());
    }
    let blocks = blocks(kind, key)?;
    debug_assert_eq!(blocks.len(), it.signs.len());
    let rho: Vec<i64> = blocks.iter().zip(it.signs).map(|(&(ell, _), &s)| (ell + i64::from(s)) / 2).collect();
    let mut value = CountValue::one();
    for (&r, &(_, size)) in rho.iter().zip(&blocks) {
        let c = composition_count(r, size);
        if c.is_zero() {
            return Ok(c);
        }
        value = value * c;
    }
    if let Some((first, last)) = it.ends {
        let parikh = ParikhVector::new(rho.iter().map(|&r| r as u32).collect());
        value = value * smirnov.count(parikh.len(), &parikh, first.index(), last.index())?;
    }
    Ok(value)
}

/// Product for the item covering `key.pattern`, without
/// symmetry extension or split factor. `None` when no item lists the pattern.
pub fn unsplit_product(kind: FamilyKind, key: &StatKey) -> Result<Option<CountValue>> {
    validate(key)?;
    match find_item(kind, key.pattern) {
        Some(it) => product_for(kind, key, it, &mut SmirnovCounter::new()).map(Some),
        None => Ok(None),
    }
}

/// Number of ordered pairs `(A, B)` sharing one `(A∩B, A△B)` configuration:
/// the endpoints the pattern places in `A-B` or `B-A` are fixed, the other
/// elements of `A△B` are free. Equals 1 for the four families keyed by
/// `A-B` and `B-A` separately.
pub fn split_factor(kind: FamilyKind, key: &StatKey) -> Result<CountValue> {
    let (t, j1, j2) = (key.t as i64, key.j_prime as i64, key.j_dblprime as i64);
    let (delta, a_only) = match kind {
        FamilyKind::IntersectCover2 => (2 * t - j1 - j2, t - j2),
        FamilyKind::IntersectNotCover3 => {
            let j = need(key.j, "j", kind)?;
            (j1 + j2 - 2 * j, j1 - j)
        }
        _ => return Ok(CountValue::one()),
    };
    let p = key.pattern;
    let e_a = i64::from(p.a.has_first() && !p.b.has_first()) + i64::from(p.a.has_last() && !p.b.has_last());
    let e_b = i64::from(p.b.has_first() && !p.a.has_first()) + i64::from(p.b.has_last() && !p.a.has_last());
    Ok(binomial(delta - e_a - e_b, a_only - e_a))
}

/// Closed-form count for `key`, via a symmetry when its pattern is not
/// listed directly.
pub fn closed_form(kind: FamilyKind, key: &StatKey) -> Result<ClosedForm> {
    closed_form_with(kind, key, &mut SmirnovCounter::new())
}

pub(crate) fn closed_form_with(kind: FamilyKind, key: &StatKey, smirnov: &mut SmirnovCounter) -> Result<ClosedForm> {
    validate(key)?;
    if kind.uses_j() != key.j.is_some() {
        return Err(invalid(format!("{kind} keys {} j", if kind.uses_j() { "need" } else { "do not take" })));
    }
    let Some((image, transform, it)) = symmetry_extend(kind, key) else {
        return Ok(ClosedForm::Uncovered);
    };
    let value = product_for(kind, &image, it, smirnov)? * split_factor(kind, &image)?;
    Ok(ClosedForm::Value { value, item: it.item, transform })
}

#[cfg(test)]
/// Checks the table itself: every family's items list distinct patterns and
/// carry one sign per block.
pub(crate) fn table_is_well_formed() -> std::result::Result<(), crate::error::Error> {
    use crate::error::Error;
    for kind in FamilyKind::ALL {
        let items = case_items(kind);
        let width = blocks(kind, &dummy_key(kind))?.len();
        for (i, it) in items.iter().enumerate() {
            if it.signs.len() != width || it.signs.iter().any(|s| s.abs() != 1) {
                return Err(Error::Internal(format!("{kind} item {} has malformed signs", it.item)));
            }
            if items[..i].iter().any(|o| o.pattern == it.pattern) {
                return Err(Error::Internal(format!("{kind} lists {} twice", it.pattern)));
            }
            if it.ends.is_some() != !matches!(kind, FamilyKind::Partition | FamilyKind::IntersectCover2) {
                return Err(Error::Internal(format!("{kind} item {} has the wrong Smirnov factor", it.item)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
fn dummy_key(kind: FamilyKind) -> StatKey {
    StatKey {
        t: 3,
        j: kind.uses_j().then_some(1),
        ell_prime: Some(1),
        ell_dblprime: Some(1),
        ell_cap: Some(1),
        ell_delta: Some(1),
        ell: Some(1),
        ..StatKey::default()
    }
}
