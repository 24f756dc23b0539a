use serde::Serialize;

use crate::error::{invalid, Result};
use crate::hypercube::GroundSubset;

/// All intersections of nonempty subfamilies, ordered by inclusion, with a
/// formal greatest element standing for the empty intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionPoset {
    family: Vec<GroundSubset>,
    /// Distinct intersections, by ascending mask.
    elements: Vec<GroundSubset>,
    /// `mu[i] = μ(elements[i], 1̂)`.
    mu: Vec<i64>,
}

impl IntersectionPoset {
    pub fn new(family: &[GroundSubset]) -> Result<Self> {
        let first = family.first().ok_or_else(|| invalid("family must be nonempty"))?;
        if family.len() > 16 {
            return Err(invalid("families are limited to 16 members"));
        }
        if family.iter().any(|a| a.ground() != first.ground()) {
            return Err(invalid("family members live on different ground sets"));
        }
        let mut elements: Vec<GroundSubset> = (1u32..1 << family.len()).map(|s| meet(family, s)).collect();
        elements.sort_by_key(|e| e.mask());
        elements.dedup();

        // Strict supersets are larger, so descending size sees every C > B first.
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(elements[i].len()));
        let mut mu = vec![0i64; elements.len()];
        for &i in &order {
            let b = elements[i].mask();
            let above: i64 =
                (0..elements.len()).filter(|&j| j != i && elements[j].mask() & b == b).map(|j| mu[j]).sum();
            // μ(1̂, 1̂) = 1 contributes to every sum.
            mu[i] = -(1 + above);
        }
        Ok(IntersectionPoset { family: family.to_vec(), elements, mu })
    }

    pub fn family(&self) -> &[GroundSubset] {
        &self.family
    }

    /// Elements below the top, by ascending mask.
    pub fn elements(&self) -> &[GroundSubset] {
        &self.elements
    }

    /// `∪ A`, the set the top element stands for.
    pub fn top(&self) -> GroundSubset {
        self.family.iter().skip(1).fold(self.family[0], |acc, a| acc.union(a))
    }

    /// `μ(B, 1̂)`, or `None` when `b` is not an intersection.
    pub fn mu(&self, b: &GroundSubset) -> Option<i64> {
        self.elements.iter().position(|e| e == b).map(|i| self.mu[i])
    }

    pub fn mu_values(&self) -> impl Iterator<Item = (&GroundSubset, i64)> {
        self.elements.iter().zip(self.mu.iter().copied())
    }

    /// `Σ_{S : ∩_S = B} (-1)^{|S|}` for each element, by direct enumeration.
    pub fn inclusion_exclusion_coefficients(&self) -> Vec<i64> {
        let mut coeff = vec![0i64; self.elements.len()];
        for s in 1u32..1 << self.family.len() {
            let m = meet(&self.family, s);
            let i = self.elements.iter().position(|e| *e == m).expect("every meet is an element");
            coeff[i] += if s.count_ones() % 2 == 0 { 1 } else { -1 };
        }
        coeff
    }
}

/// `∩_{i ∈ s} A_i` for a nonempty index mask `s`.
pub(crate) fn meet(family: &[GroundSubset], s: u32) -> GroundSubset {
    let mut it = family.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).map(|(_, a)| *a);
    let first = it.next().expect("nonempty index set");
    it.fold(first, |acc, a| acc.intersection(&a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::GroundSet;

    fn set(m: &[usize]) -> GroundSubset {
        GroundSubset::from_members(GroundSet::new(4).unwrap(), m).unwrap()
    }

    #[test]
    fn single_set() {
        let p = IntersectionPoset::new(&[set(&[1, 2])]).unwrap();
        assert_eq!(p.elements().len(), 1);
        assert_eq!(p.mu(&set(&[1, 2])), Some(-1));
    }

    #[test]
    fn two_disjoint_sets() {
        let p = IntersectionPoset::new(&[set(&[1]), set(&[2])]).unwrap();
        assert_eq!(p.mu(&set(&[1])), Some(-1));
        assert_eq!(p.mu(&set(&[2])), Some(-1));
        assert_eq!(p.mu(&set(&[])), Some(1));
        assert_eq!(p.top(), set(&[1, 2]));
    }

    #[test]
    fn mu_matches_inclusion_exclusion() {
        let fam = [set(&[1, 2, 3]), set(&[2, 3]), set(&[3, 4]), set(&[1, 3, 4])];
        let p = IntersectionPoset::new(&fam).unwrap();
        let mu: Vec<i64> = p.mu_values().map(|(_, m)| m).collect();
        assert_eq!(mu, p.inclusion_exclusion_coefficients());
    }

    #[test]
    fn empty_family_rejected() {
        assert!(IntersectionPoset::new(&[]).is_err());
    }
}
