use std::collections::HashMap;

use serde::Serialize;

use super::poset::{meet, IntersectionPoset};
use crate::cycle::{change_of_basis, decompose_distinguished, Decomposition, SymmetricCycle};
use crate::error::{invalid, Result};
use crate::hypercube::{GroundSubset, SignVector};

/// One identity that did not hold, with both sides as evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: &'static str,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "violations", rename_all = "kebab-case")]
pub enum Check {
    Pass,
    /// The instance falls outside the identity's hypothesis.
    Skipped,
    Fail(Vec<Violation>),
}

impl Check {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }

    pub fn failed(&self) -> bool {
        matches!(self, Check::Fail(_))
    }
}

#[derive(Default)]
struct Tally(Vec<Violation>);

impl Tally {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, identity: &'static str, lhs: T, rhs: T) {
        if lhs != rhs {
            self.0.push(Violation { identity, lhs: format!("{lhs:?}"), rhs: format!("{rhs:?}") });
        }
    }

    fn finish(self) -> Check {
        if self.0.is_empty() {
            Check::Pass
        } else {
            Check::Fail(self.0)
        }
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn x_of_set(a: &GroundSubset, d: &SymmetricCycle) -> Result<Vec<i64>> {
    Ok(d.decompose(&a.negate_at())?.x.as_integers())
}

/// Valuation law for `A -> x(_{-A}T⁺, D)`, given the x-vector of any mask.
pub(crate) fn valuation_law(a: u32, b: u32, distinguished: bool, x: impl Fn(u32) -> Vec<i64>) -> Check {
    let mut tally = Tally::default();
    let (xa, xb, xcap, xcup) = (x(a), x(b), x(a & b), x(a | b));
    tally.eq("x(A) + x(B) = x(A∩B) + x(A∪B)", add(&xa, &xb), add(&xcap, &xcup));
    tally.eq("x(A∩B) + x(A△B) = x(∅) + x(A∪B)", add(&xcap, &x(a ^ b)), add(&x(0), &xcup));
    if distinguished && a & b == 0 {
        let mut sigma = vec![0i64; xa.len()];
        sigma[0] = 1;
        tally.eq("x(A) + x(B) = σ(1) + x(A⊔B)", add(&xa, &xb), add(&sigma, &xcup));
    }
    tally.finish()
}

pub fn check_valuation(a: &GroundSubset, b: &GroundSubset, d: &SymmetricCycle) -> Result<Check> {
    if a.ground() != d.ground() || b.ground() != d.ground() {
        return Err(invalid("sets and cycle live on different ground sets"));
    }
    let t = d.ground();
    let mut memo: HashMap<u32, Vec<i64>> = HashMap::new();
    for m in [a.mask(), b.mask(), a.mask() & b.mask(), a.mask() | b.mask(), a.mask() ^ b.mask(), 0] {
        memo.insert(m, x_of_set(&GroundSubset::from_mask(t, m), d)?);
    }
    Ok(valuation_law(a.mask(), b.mask(), d.is_distinguished(), |m| memo[&m].clone()))
}

/// Both union formulas, plus agreement of μ with its inclusion-exclusion
/// evaluation.
pub(crate) fn moebius_law(family: &[GroundSubset], x: impl Fn(u32) -> Vec<i64>) -> Result<Check> {
    let poset = IntersectionPoset::new(family)?;
    let t = family[0].ground().t();
    let mut tally = Tally::default();
    let union = x(poset.top().mask());

    let mut subset_form = vec![0i64; t];
    for s in 1u32..1 << family.len() {
        let sign = if s.count_ones() % 2 == 0 { -1 } else { 1 };
        for (acc, v) in subset_form.iter_mut().zip(x(meet(family, s).mask())) {
            *acc += sign * v;
        }
    }
    tally.eq("x(∪A) = -Σ_S (-1)^|S| x(∩_S A)", union.clone(), subset_form);

    let mut mu_form = vec![0i64; t];
    for (b, mu) in poset.mu_values() {
        for (acc, v) in mu_form.iter_mut().zip(x(b.mask())) {
            *acc -= mu * v;
        }
    }
    tally.eq("x(∪A) = -Σ_B μ(B,1̂) x(B)", union, mu_form);

    let mu: Vec<i64> = poset.mu_values().map(|(_, m)| m).collect();
    tally.eq("μ(B,1̂) = Σ_{∩_S = B} (-1)^|S|", mu, poset.inclusion_exclusion_coefficients());
    Ok(tally.finish())
}

pub fn check_moebius(family: &[GroundSubset], d: &SymmetricCycle) -> Result<Check> {
    if family.iter().any(|a| a.ground() != d.ground()) {
        return Err(invalid("family and cycle live on different ground sets"));
    }
    let t = d.ground();
    let mut memo: HashMap<u32, Vec<i64>> = HashMap::new();
    let mut x = |m: u32| -> Result<Vec<i64>> {
        if let Some(v) = memo.get(&m) {
            return Ok(v.clone());
        }
        let v = x_of_set(&GroundSubset::from_mask(t, m), d)?;
        memo.insert(m, v.clone());
        Ok(v)
    };
    // Precompute everything the law can ask for, then evaluate infallibly.
    let poset = IntersectionPoset::new(family)?;
    x(poset.top().mask())?;
    for b in poset.elements() {
        x(b.mask())?;
    }
    moebius_law(family, |m| memo[&m].clone())
}

fn neg_total(dec: &Decomposition) -> i64 {
    dec.members.iter().map(|q| q.neg_count() as i64).sum()
}

fn dist(a: &SignVector, b: &SignVector) -> i64 {
    (a.neg_mask() ^ b.neg_mask()).count_ones() as i64
}

fn scalar(a: &SignVector, b: &SignVector) -> i64 {
    a.t() as i64 - 2 * dist(a, b)
}

pub(crate) fn negpart_law(dec: &Decomposition) -> Check {
    let tope = &dec.owner;
    let t = tope.t() as i64;
    let q = dec.q() as i64;
    let neg = tope.neg_count() as i64;
    let sq = neg_total(dec);
    let sd: i64 = dec.members.iter().map(|m| dist(tope, m)).sum();
    let mut tally = Tally::default();
    tally.eq("2Σ|Q⁻| = 2|T⁻| + (q-1)t", 2 * sq, 2 * neg + (q - 1) * t);
    tally.eq("q·t = t - 2|T⁻| + 2Σ|Q⁻|", q * t, t - 2 * neg + 2 * sq);
    tally.eq("Σd(T,Q) = -|T⁻| + Σ|Q⁻|", sd, -neg + sq);
    tally.eq("2Σd(T,Q) = (q-1)t", 2 * sd, (q - 1) * t);
    tally.eq("Σ|Q⁻| = |T⁻|⌈q/2⌉ + |T⁺|⌊q/2⌋", sq, neg * ((q + 1) / 2) + (t - neg) * (q / 2));
    for e in 1..=tope.t() {
        let hits = dec.members.iter().filter(|m| m.entry(e) < 0).count() as i64;
        let want = if tope.entry(e) < 0 { (q + 1) / 2 } else { q / 2 };
        tally.eq("|{Q : Q(e) = -1}| = ⌈q/2⌉ on T⁻, ⌊q/2⌋ on T⁺", hits, want);
    }
    tally.finish()
}

pub fn check_negpart_identities(tope: &SignVector, d: &SymmetricCycle) -> Result<Check> {
    Ok(negpart_law(&d.decompose(tope)?))
}

/// Pairwise sums over `Q(T, D)` and the scalar-product identity in one of
/// two readings of its leading term.
pub(crate) struct PairSums {
    pub t: i64,
    pub q: i64,
    pub neg: i64,
    pub sq: i64,
    pub sd_tq: i64,
    pub sd_pairs: i64,
    pub ss_pairs: i64,
}

impl PairSums {
    pub fn of(dec: &Decomposition) -> Self {
        let m = &dec.members;
        let mut sd_pairs = 0;
        let mut ss_pairs = 0;
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                sd_pairs += dist(&m[i], &m[j]);
                ss_pairs += scalar(&m[i], &m[j]);
            }
        }
        PairSums {
            t: dec.owner.t() as i64,
            q: dec.q() as i64,
            neg: dec.owner.neg_count() as i64,
            sq: neg_total(dec),
            sd_tq: m.iter().map(|x| dist(&dec.owner, x)).sum(),
            sd_pairs,
            ss_pairs,
        }
    }

    /// `t (1 - |T⁻|/t + Σ|Q⁻|/t)(-|T⁻| + Σ|Q⁻|)`, scaled by `t`.
    fn product(&self) -> i64 {
        (self.t - self.neg + self.sq) * (-self.neg + self.sq)
    }

    /// `t Σ⟨Q^i,Q^j⟩ = C(q,2) t² - 2 t (...)(...)`.
    pub fn scalar_product_form_holds(&self) -> bool {
        self.t * self.ss_pairs == self.q * (self.q - 1) / 2 * self.t * self.t - 2 * self.product()
    }

    /// The same with the leading term read as `q t`.
    pub fn scalar_product_form_with_qt_holds(&self) -> bool {
        self.t * self.ss_pairs == self.q * self.t * self.t - 2 * self.product()
    }
}

pub(crate) fn pairwise_law(dec: &Decomposition, on_cycle: bool) -> Check {
    if on_cycle {
        return Check::Skipped;
    }
    let s = PairSums::of(dec);
    let (t, q) = (s.t, s.q);
    let mut tally = Tally::default();
    tally.eq("4Σ_{i<j} d(Q^i,Q^j) = (q²-1)t", 4 * s.sd_pairs, (q * q - 1) * t);
    tally.eq("t·q² = t + 4Σ_{i<j} d(Q^i,Q^j)", t * q * q, t + 4 * s.sd_pairs);
    tally.eq("2Σ_{i<j} d(Q^i,Q^j) = (q+1)Σd(T,Q)", 2 * s.sd_pairs, (q + 1) * s.sd_tq);
    tally.eq("t·Σ_{i<j} d = (t-|T⁻|+Σ|Q⁻|)(-|T⁻|+Σ|Q⁻|)", t * s.sd_pairs, s.product());
    tally.eq("2Σ_{i<j}⟨Q^i,Q^j⟩ = (1-q)t", 2 * s.ss_pairs, (1 - q) * t);
    tally.eq("q·t = t - 2Σ_{i<j}⟨Q^i,Q^j⟩", q * t, t - 2 * s.ss_pairs);
    tally.eq("t·Σ_{i<j}⟨⟩ = C(q,2)t² - 2(t-|T⁻|+Σ|Q⁻|)(-|T⁻|+Σ|Q⁻|)", s.scalar_product_form_holds(), true);
    tally.finish()
}

pub fn check_pairwise_identities(tope: &SignVector, d: &SymmetricCycle) -> Result<Check> {
    Ok(pairwise_law(&d.decompose(tope)?, d.contains(tope)))
}

pub(crate) fn two_tope_law(d1: &Decomposition, d2: &Decomposition) -> Check {
    let t = d1.owner.t() as i64;
    let cross: i64 = d1.members.iter().flat_map(|a| d2.members.iter().map(move |b| dist(a, b))).sum();
    let lhs = 2 * (-dist(&d1.owner, &d2.owner) + cross);
    let rhs = (d1.q() as i64 * d2.q() as i64 - 1) * t;
    let mut tally = Tally::default();
    tally.eq("2(-d(T',T'') + ΣΣ d(Q',Q'')) = (q'q''-1)t", lhs, rhs);
    tally.finish()
}

pub fn check_two_tope(t1: &SignVector, t2: &SignVector, d: &SymmetricCycle) -> Result<Check> {
    Ok(two_tope_law(&d.decompose(t1)?, &d.decompose(t2)?))
}

/// Binary images of the vertex, the cycle and the decomposition.
pub(crate) fn coherent_law(dec: &Decomposition, d: &SymmetricCycle) -> Check {
    let tope = dec.owner;
    let t = tope.t();
    let full = tope.ground().full_mask();
    let mut tally = Tally::default();
    let bin = tope.to_binary();
    tally.eq("to_sign(to_binary(T)) = T", bin.to_sign(), tope);

    let images: Vec<u32> = d.vertices().iter().map(|v| v.to_binary().ones_mask()).collect();
    for k in 0..t {
        tally.eq("D̃^{k+t} = T⁺ - D̃^k", images[k + t], full & !images[k]);
    }
    for k in 0..2 * t {
        tally.eq("consecutive D̃ differ in one bit", (images[k] ^ images[(k + 1) % (2 * t)]).count_ones(), 1);
    }

    let q = dec.q() as i64;
    let mut rhs = vec![-(q - 1) / 2; t];
    for m in &dec.members {
        let img = m.to_binary();
        if img.ones_mask() == 0 {
            continue;
        }
        for (acc, v) in rhs.iter_mut().zip(img.entries()) {
            *acc += i64::from(v);
        }
    }
    let lhs: Vec<i64> = bin.entries().into_iter().map(i64::from).collect();
    tally.eq("T̃ = -½(q̃-1)T⁺ + Σ_{Q̃≠0} Q̃", lhs, rhs);
    tally.finish()
}

pub fn check_coherent_maps(tope: &SignVector, d: &SymmetricCycle) -> Result<Check> {
    Ok(coherent_law(&d.decompose(tope)?, d))
}

pub fn check_weight_equivalences(x: &SignVector, y: &SignVector) -> Result<Check> {
    let t = x.t();
    if y.t() != t {
        return Err(invalid("vertices of different lengths"));
    }
    if !t.is_multiple_of(2) {
        return Err(invalid(format!("weight equivalences need even t, got {t}")));
    }
    let (bx, by) = (x.to_binary(), y.to_binary());
    let (hx, hy) = (bx.hamming_weight() as i64, by.hamming_weight() as i64);
    let dot = bx.dot(&by)?;
    let orth = x.scalar_product(y)? == 0;
    let ti = t as i64;
    let mut tally = Tally::default();
    tally.eq("⟨X,Y⟩ = 0 ⇔ 4⟨X̃,Ỹ⟩ = 2(hwt X̃ + hwt Ỹ) - t", orth, 4 * dot == 2 * (hx + hy) - ti);
    if t.is_multiple_of(4) {
        let lhs = x.neg_count() == y.neg_count() && orth;
        let rhs = hx == hy && 4 * dot == 4 * hx - ti;
        tally.eq("|X⁻| = |Y⁻| = s, ⟨X,Y⟩ = 0 ⇔ hwt = s, ⟨X̃,Ỹ⟩ = s - t/4", lhs, rhs);
    }
    Ok(tally.finish())
}

pub(crate) fn circular_law(dec: &Decomposition, d: &SymmetricCycle) -> Check {
    let mut tally = Tally::default();
    for s in 0..2 * d.t() as i64 {
        let sum = d.shifted_sum(&dec.q_indices, s);
        tally.eq("Σ_j D^{(i_j+s) mod 2t} ∈ {1,-1}^t", sum.iter().all(|v| v.abs() == 1), true);
    }
    tally.finish()
}

pub fn check_circular_translations(tope: &SignVector, d: &SymmetricCycle) -> Result<Check> {
    Ok(circular_law(&d.decompose(tope)?, d))
}

pub(crate) fn change_of_basis_law(dec: &Decomposition, d: &SymmetricCycle, r: &SymmetricCycle) -> Result<Check> {
    let tope = &dec.owner;
    let via_r = decompose_distinguished(tope);
    let mut tally = Tally::default();
    tally.eq("x(T,D) = x(T,R)·M(R)M(D)⁻¹", change_of_basis(&via_r.x, r, d)?, dec.x.clone());
    tally.eq("x(T,R) = x(T,D)·M(D)M(R)⁻¹", change_of_basis(&dec.x, d, r)?, via_r.x.clone());
    let total: i64 = dec.members.iter().map(|m| scalar(tope, m)).sum();
    tally.eq("Σ⟨T,Q⟩ = t", total, tope.t() as i64);
    Ok(tally.finish())
}

pub fn check_change_of_basis(tope: &SignVector, d: &SymmetricCycle) -> Result<Check> {
    let r = SymmetricCycle::distinguished(d.ground());
    change_of_basis_law(&d.decompose(tope)?, d, &r)
}

/// Every odd subset of `V(D)` whose sum is a vertex, grouped by that vertex.
pub struct OddSubsetTable {
    by_vertex: HashMap<u32, Vec<u64>>,
}

/// Largest `t` for which [`OddSubsetTable`] enumerates all `4^t` subsets.
pub const MINIMALITY_MAX_T: usize = 10;

impl OddSubsetTable {
    pub fn new(d: &SymmetricCycle) -> Result<Self> {
        let t = d.t();
        if t > MINIMALITY_MAX_T {
            return Err(crate::error::Error::Refused(format!(
                "exhaustive subset search is limited to t <= {MINIMALITY_MAX_T}"
            )));
        }
        let n = 2 * t;
        let verts: Vec<Vec<i8>> = d.vertices().iter().map(|v| v.entries()).collect();
        let mut sums = vec![0i8; (1usize << n) * t];
        let mut by_vertex: HashMap<u32, Vec<u64>> = HashMap::new();
        for s in 1usize..1 << n {
            let low = s.trailing_zeros() as usize;
            let prev = s & (s - 1);
            for e in 0..t {
                sums[s * t + e] = sums[prev * t + e] + verts[low][e];
            }
            if s.count_ones() % 2 == 1 {
                let row = &sums[s * t..(s + 1) * t];
                if row.iter().all(|v| v.abs() == 1) {
                    let neg = row.iter().enumerate().filter(|(_, &v)| v < 0).fold(0u32, |m, (e, _)| m | 1 << e);
                    by_vertex.entry(neg).or_default().push(s as u64);
                }
            }
        }
        Ok(OddSubsetTable { by_vertex })
    }

    /// Inclusion-minimal subsets summing to the vertex with negative mask `neg`.
    pub fn minimal(&self, neg: u32) -> Vec<u64> {
        let all = self.by_vertex.get(&neg).map(Vec::as_slice).unwrap_or(&[]);
        all.iter().copied().filter(|&s| !all.iter().any(|&o| o != s && o & s == o)).collect()
    }
}

pub(crate) fn minimality_law(dec: &Decomposition, table: &OddSubsetTable) -> Check {
    let expected: u64 = dec.q_indices.iter().fold(0, |m, &i| m | 1 << i);
    let mut tally = Tally::default();
    tally.eq(
        "Q(T,D) is the unique minimal odd subset summing to T",
        table.minimal(dec.owner.neg_mask()),
        vec![expected],
    );
    tally.finish()
}

pub fn check_minimality(tope: &SignVector, d: &SymmetricCycle, table: &OddSubsetTable) -> Result<Check> {
    Ok(minimality_law(&d.decompose(tope)?, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::GroundSet;

    fn g(t: usize) -> GroundSet {
        GroundSet::new(t).unwrap()
    }

    fn set(t: usize, m: &[usize]) -> GroundSubset {
        GroundSubset::from_members(g(t), m).unwrap()
    }

    #[test]
    fn valuation_example() {
        let r = SymmetricCycle::distinguished(g(3));
        assert_eq!(x_of_set(&set(3, &[1]), &r).unwrap(), vec![0, 1, 0]);
        assert_eq!(x_of_set(&set(3, &[2]), &r).unwrap(), vec![1, -1, 1]);
        assert_eq!(x_of_set(&set(3, &[1, 2]), &r).unwrap(), vec![0, 0, 1]);
        assert!(check_valuation(&set(3, &[1]), &set(3, &[2]), &r).unwrap().passed());
        assert!(check_valuation(&set(3, &[1, 3]), &set(3, &[1, 3]), &r).unwrap().passed());
    }

    #[test]
    fn moebius_examples() {
        let r = SymmetricCycle::distinguished(g(3));
        assert!(check_moebius(&[set(3, &[2])], &r).unwrap().passed());
        assert!(check_moebius(&[set(3, &[1]), set(3, &[2])], &r).unwrap().passed());
        assert!(check_moebius(&[set(3, &[1, 2]), set(3, &[2]), set(3, &[2, 3])], &r).unwrap().passed());
    }

    #[test]
    fn negpart_and_pairwise_example() {
        let r = SymmetricCycle::distinguished(g(3));
        let tope = SignVector::parse("-+-").unwrap();
        let dec = r.decompose(&tope).unwrap();
        assert_eq!(neg_total(&dec), 5);
        let s = PairSums::of(&dec);
        assert_eq!((s.sd_pairs, s.ss_pairs), (6, -3));
        assert!(check_negpart_identities(&tope, &r).unwrap().passed());
        assert!(check_pairwise_identities(&tope, &r).unwrap().passed());
        let plus = g(3).positive();
        assert_eq!(check_pairwise_identities(&plus, &r).unwrap(), Check::Skipped);
        assert!(check_negpart_identities(&plus, &r).unwrap().passed());
    }

    #[test]
    fn two_tope_example() {
        let r = SymmetricCycle::distinguished(g(3));
        let a = SignVector::parse("-+-").unwrap();
        let plus = g(3).positive();
        let da = r.decompose(&a).unwrap();
        let cross: i64 = da.members.iter().map(|m| dist(m, &plus)).sum();
        assert_eq!(cross, 5);
        assert!(check_two_tope(&a, &plus, &r).unwrap().passed());
        assert!(check_two_tope(&plus, &plus, &r).unwrap().passed());
    }

    #[test]
    fn coherent_and_weight_examples() {
        let r = SymmetricCycle::distinguished(g(3));
        assert!(check_coherent_maps(&SignVector::parse("-+-").unwrap(), &r).unwrap().passed());
        assert!(check_coherent_maps(&g(3).positive(), &r).unwrap().passed());
        let x = g(4).positive();
        let y = SignVector::parse("++--").unwrap();
        assert!(check_weight_equivalences(&x, &y).unwrap().passed());
        assert!(check_weight_equivalences(&x, &x).unwrap().passed());
        let z = g(3).positive();
        assert!(check_weight_equivalences(&z, &z).is_err());
    }

    #[test]
    fn minimality_small() {
        let r = SymmetricCycle::distinguished(g(3));
        let table = OddSubsetTable::new(&r).unwrap();
        for v in g(3).vertices() {
            assert!(check_minimality(&v, &r, &table).unwrap().passed(), "{v}");
        }
    }

    #[test]
    fn qt_scalar_form_fails_for_large_q() {
        let r = SymmetricCycle::distinguished(g(5));
        let tope = SignVector::parse("-+-+-").unwrap();
        let dec = r.decompose(&tope).unwrap();
        assert_eq!(dec.q(), 5);
        let s = PairSums::of(&dec);
        assert!(s.scalar_product_form_holds());
        assert!(!s.scalar_product_form_with_qt_holds());
    }
}
