//! Symmetric cycles in the hypercube graph and the decomposition of vertices
//! with respect to them.
//!
//! A symmetric cycle is a `2t`-cycle `(D^0, ..., D^{2t-1})` with
//! `D^{k+t} = -D^k`. Its first `t` vertices form a basis of `R^t`, so every
//! vertex `T` has a unique coordinate row `x` with `T = x M(D)`, where `M(D)`
//! stacks `D^0, ..., D^{t-1}`. The coordinates lie in `{-1, 0, 1}`, and the
//! nonzero ones select the decomposition set `Q(T, D) = {x_i D^{i-1}}`,
//! whose members sum to `T`.

use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hypercube::{GroundSet, GroundSubset, SignVector};
use crate::linalg::{determinant, RatMatrix, Rational};

/// The matrix `M(D)` together with its exact inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleMatrix {
    rows: Vec<Vec<i64>>,
    det: i128,
    inverse: RatMatrix,
}

impl CycleMatrix {
    fn new(basis: &[SignVector]) -> Result<Self> {
        let rows: Vec<Vec<i64>> = basis.iter().map(|v| v.entries().into_iter().map(i64::from).collect()).collect();
        let det = determinant(&rows);
        if det == 0 {
            return Err(invalid("first half of the cycle is not a basis"));
        }
        let inverse = RatMatrix::from_integer_rows(&rows)
            .inverse()
            .ok_or_else(|| Error::Internal("nonzero determinant but no inverse".into()))?;
        Ok(CycleMatrix { rows, det, inverse })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn determinant(&self) -> i128 {
        self.det
    }

    pub fn inverse(&self) -> &RatMatrix {
        &self.inverse
    }

    pub fn as_rational(&self) -> RatMatrix {
        RatMatrix::from_integer_rows(&self.rows)
    }
}

/// A symmetric `2t`-cycle of the hypercube graph `H(t,2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricCycle {
    t: GroundSet,
    vertices: Vec<SignVector>,
    flip_order: Vec<usize>,
    matrix: Arc<CycleMatrix>,
}

impl SymmetricCycle {
    /// The distinguished cycle `R`: `R^0 = T^(+)`, `R^s` negative on `[1, s]`.
    pub fn distinguished(t: GroundSet) -> Self {
        let identity: Vec<usize> = (1..=t.t()).collect();
        SymmetricCycle::make(t.positive(), &identity).expect("identity flip order is a permutation")
    }

    /// The cycle through `start` that flips coordinates in the order
    /// `flip_order[0], flip_order[1], ...`, repeated once more for the
    /// antipodal half.
    pub fn make(start: SignVector, flip_order: &[usize]) -> Result<Self> {
        let t = start.ground();
        let n = t.t();
        if flip_order.len() != n {
            return Err(invalid(format!("flip order has {} entries, expected {n}", flip_order.len())));
        }
        let mut seen = vec![false; n + 1];
        for &e in flip_order {
            if e == 0 || e > n || seen[e] {
                return Err(invalid(format!("flip order {flip_order:?} is not a permutation of [1, {n}]")));
            }
            seen[e] = true;
        }
        let mut vertices = Vec::with_capacity(2 * n);
        let mut cur = start;
        vertices.push(cur);
        for k in 1..2 * n {
            cur = cur.flip(flip_order[(k - 1) % n]);
            vertices.push(cur);
        }
        let matrix = Arc::new(CycleMatrix::new(&vertices[..n])?);
        let cycle = SymmetricCycle { t, vertices, flip_order: flip_order.to_vec(), matrix };
        debug_assert!(cycle.check_invariants().is_ok());
        Ok(cycle)
    }

    /// Validates an explicit vertex sequence and recovers its flip order.
    pub fn from_vertices(vertices: Vec<SignVector>) -> Result<Self> {
        let n = vertices.len() / 2;
        if n < 3 || vertices.len() != 2 * n {
            return Err(invalid("a symmetric cycle needs 2t vertices with t >= 3"));
        }
        let t = vertices[0].ground();
        if t.t() != n || vertices.iter().any(|v| v.ground() != t) {
            return Err(invalid("cycle vertices must all have length t = half the cycle length"));
        }
        let mut flip_order = Vec::with_capacity(n);
        for k in 1..=n {
            let diff = vertices[k - 1].neg_mask() ^ vertices[k].neg_mask();
            if diff.count_ones() != 1 {
                return Err(invalid(format!("vertices {} and {k} are not adjacent", k - 1)));
            }
            flip_order.push(diff.trailing_zeros() as usize + 1);
        }
        let cycle = SymmetricCycle::make(vertices[0], &flip_order)?;
        if cycle.vertices != vertices {
            return Err(invalid("vertex sequence violates the antipodal law or adjacency"));
        }
        Ok(cycle)
    }

    /// A cycle with uniformly random start vertex and flip order.
    pub fn random<R: Rng + ?Sized>(t: GroundSet, rng: &mut R) -> Self {
        let start = SignVector::from_mask(t, rng.gen::<u32>() & t.full_mask());
        let mut order: Vec<usize> = (1..=t.t()).collect();
        order.shuffle(rng);
        SymmetricCycle::make(start, &order).expect("shuffled order is a permutation")
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.t
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.t.t()
    }

    pub fn vertices(&self) -> &[SignVector] {
        &self.vertices
    }

    /// `D^{k mod 2t}`.
    #[inline]
    pub fn vertex(&self, k: usize) -> SignVector {
        self.vertices[k % self.vertices.len()]
    }

    pub fn flip_order(&self) -> &[usize] {
        &self.flip_order
    }

    pub fn matrix(&self) -> &CycleMatrix {
        &self.matrix
    }

    pub fn contains(&self, v: &SignVector) -> bool {
        self.vertices.contains(v)
    }

    pub fn is_distinguished(&self) -> bool {
        self.vertices[0] == self.t.positive() && self.flip_order.iter().enumerate().all(|(i, &e)| e == i + 1)
    }

    /// Checks the antipodal law, adjacency, distinctness and the basis
    /// property.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.t();
        let v = &self.vertices;
        if v.len() != 2 * n {
            return Err(invalid("wrong number of vertices"));
        }
        for k in 0..n {
            if v[k + n] != -v[k] {
                return Err(invalid(format!("D^{} != -D^{k}", k + n)));
            }
        }
        for k in 0..2 * n {
            let next = v[(k + 1) % (2 * n)];
            if v[k].distance(&next)? != 1 {
                return Err(invalid(format!("D^{k} and its successor are not adjacent")));
            }
        }
        let mut masks: Vec<u32> = v.iter().map(|x| x.neg_mask()).collect();
        masks.sort_unstable();
        masks.dedup();
        if masks.len() != 2 * n {
            return Err(invalid("cycle vertices are not pairwise distinct"));
        }
        if self.matrix.determinant() == 0 {
            return Err(invalid("first half of the cycle is not a basis"));
        }
        Ok(())
    }

    /// Cycle index of `x_i D^{i-1}` for coordinate `i` (1-based) and sign `x_i`.
    #[inline]
    fn member_index(&self, i: usize, sign: i8) -> usize {
        if sign > 0 {
            i - 1
        } else {
            i - 1 + self.t()
        }
    }

    /// General decomposition by exact rational solve of `x M(D) = T`.
    pub fn decompose(&self, tope: &SignVector) -> Result<Decomposition> {
        if tope.ground() != self.t {
            return Err(invalid(format!("vertex has length {}, cycle lives on t = {}", tope.t(), self.t())));
        }
        let row: Vec<Rational> = tope.entries().into_iter().map(|v| Rational::from_integer(i128::from(v))).collect();
        let sol = self.matrix.inverse().left_mul(&row);
        let coords = rational_to_signs(&sol)?;
        let x = XVector::new(coords)?;
        let dec = Decomposition::from_x(self, *tope, x);
        if dec.sum_of_members() != dec.owner.entries().iter().map(|&v| i64::from(v)).collect::<Vec<_>>() {
            return Err(Error::Internal(format!("decomposition of {tope} does not sum back")));
        }
        Ok(dec)
    }

    /// Sum of the cycle vertices at `indices`, cyclically shifted by `shift`.
    pub fn shifted_sum(&self, indices: &[usize], shift: i64) -> Vec<i64> {
        let len = self.vertices.len() as i64;
        let mut acc = vec![0i64; self.t()];
        for &i in indices {
            let k = (i as i64 + shift).rem_euclid(len) as usize;
            for (a, v) in acc.iter_mut().zip(self.vertices[k].entries()) {
                *a += i64::from(v);
            }
        }
        acc
    }

    /// Circular translation of a decomposition: `sum_j D^{(i_j + s) mod 2t}`,
    /// always a vertex of the hypercube.
    pub fn circular_translate(&self, dec: &Decomposition, shift: i64) -> SignVector {
        let sum = self.shifted_sum(&dec.q_indices, shift);
        let entries: Vec<i8> = sum
            .iter()
            .map(|&v| {
                assert!(v == 1 || v == -1, "circular translate left the hypercube: {sum:?}");
                v as i8
            })
            .collect();
        SignVector::from_entries(&entries).expect("length t >= 3")
    }
}

fn rational_to_signs(sol: &[Rational]) -> Result<Vec<i8>> {
    sol.iter()
        .map(|r| {
            if !r.is_integer() {
                return Err(Error::Internal(format!("non-integral coordinate {r}")));
            }
            match r.to_integer().to_i8() {
                Some(v @ -1..=1) => Ok(v),
                _ => Err(Error::Internal(format!("coordinate {r} outside {{-1,0,1}}"))),
            }
        })
        .collect()
}

/// A coordinate row in `{-1, 0, 1}^t` with odd support.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XVector {
    coords: Vec<i8>,
}

impl XVector {
    pub fn new(coords: Vec<i8>) -> Result<Self> {
        if coords.iter().any(|&c| !(-1..=1).contains(&c)) {
            return Err(invalid(format!("x-vector {coords:?} has entries outside {{-1,0,1}}")));
        }
        let support = coords.iter().filter(|&&c| c != 0).count();
        if support % 2 == 0 {
            return Err(invalid(format!("x-vector {coords:?} has even support")));
        }
        Ok(XVector { coords })
    }

    /// `sigma(1) = (1, 0, ..., 0)`.
    pub fn unit(t: GroundSet) -> Self {
        let mut coords = vec![0; t.t()];
        coords[0] = 1;
        XVector { coords }
    }

    pub fn coords(&self) -> &[i8] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// 1-based indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        self.coords.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i + 1).collect()
    }

    pub fn q(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 0).count()
    }

    pub fn as_integers(&self) -> Vec<i64> {
        self.coords.iter().map(|&c| i64::from(c)).collect()
    }
}

impl fmt::Debug for XVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XVector{:?}", self.coords)
    }
}

impl fmt::Display for XVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for XVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// `Q(T, D)`: the decomposition of a vertex with respect to a symmetric cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub owner: SignVector,
    pub x: XVector,
    /// Cycle indices in `[0, 2t)`, ascending.
    pub q_indices: Vec<usize>,
    /// The vertices `D^i` for `i` in `q_indices`, same order.
    pub members: Vec<SignVector>,
}

impl Decomposition {
    fn from_x(cycle: &SymmetricCycle, owner: SignVector, x: XVector) -> Self {
        let mut q_indices: Vec<usize> = x
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| cycle.member_index(i + 1, c))
            .collect();
        q_indices.sort_unstable();
        let members = q_indices.iter().map(|&i| cycle.vertex(i)).collect();
        Decomposition { owner, x, q_indices, members }
    }

    /// `q(T) = |Q(T, D)|`.
    #[inline]
    pub fn q(&self) -> usize {
        self.q_indices.len()
    }

    pub fn sum_of_members(&self) -> Vec<i64> {
        let mut acc = vec![0i64; self.owner.t()];
        for m in &self.members {
            for (a, v) in acc.iter_mut().zip(m.entries()) {
                *a += i64::from(v);
            }
        }
        acc
    }
}

/// Decomposition with respect to `R` straight from the coordinates of `T`:
/// `x_1 = (T(1) + T(t)) / 2`, `x_e = (T(e) - T(e-1)) / 2`.
pub fn decompose_distinguished(tope: &SignVector) -> Decomposition {
    let t = tope.t();
    let mut coords = Vec::with_capacity(t);
    coords.push((tope.entry(1) + tope.entry(t)) / 2);
    for e in 2..=t {
        coords.push((tope.entry(e) - tope.entry(e - 1)) / 2);
    }
    let x = XVector { coords };
    let mut q_indices: Vec<usize> =
        x.coords.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| if c > 0 { i } else { i + t }).collect();
    q_indices.sort_unstable();
    let members = q_indices.iter().map(|&k| distinguished_vertex(tope.ground(), k)).collect();
    Decomposition { owner: *tope, x, q_indices, members }
}

/// `R^k` without building the cycle.
pub fn distinguished_vertex(t: GroundSet, k: usize) -> SignVector {
    let n = t.t();
    let k = k % (2 * n);
    let prefix = GroundSubset::prefix(t, k % n).negate_at();
    if k < n {
        prefix
    } else {
        -prefix
    }
}

/// `q(A)` with respect to `R`, read off the boundary differences of the
/// characteristic vector. Equals `|Q(_{-A}T^(+), R)|`.
#[inline]
pub fn q_of_mask(mask: u32, t: usize) -> usize {
    let top = 1u32 << (t - 1);
    let first = mask & 1 != 0;
    let last = mask & top != 0;
    // x_1 is nonzero iff T(1) = T(t); x_e is nonzero iff coordinates e-1, e differ.
    let boundary = ((mask ^ (mask >> 1)) & (top - 1)).count_ones() as usize;
    boundary + usize::from(first == last)
}

pub fn q_of_set(a: &GroundSubset) -> usize {
    q_of_mask(a.mask(), a.ground().t())
}

/// Exact `M(D1) M(D2)^{-1}`.
pub fn transition_matrix(from: &SymmetricCycle, to: &SymmetricCycle) -> Result<RatMatrix> {
    if from.ground() != to.ground() {
        return Err(invalid("cycles live on different ground sets"));
    }
    Ok(from.matrix().as_rational().mul(to.matrix().inverse()))
}

/// `x(T, D2) = x(T, D1) M(D1) M(D2)^{-1}`.
pub fn change_of_basis(x: &XVector, from: &SymmetricCycle, to: &SymmetricCycle) -> Result<XVector> {
    if x.len() != from.t() {
        return Err(invalid("x-vector length differs from the cycle's t"));
    }
    let p = transition_matrix(from, to)?;
    let row: Vec<Rational> = x.coords().iter().map(|&c| Rational::from_integer(i128::from(c))).collect();
    let out = p.left_mul(&row);
    if out.iter().all(Zero::is_zero) {
        return Err(Error::Internal("change of basis produced the zero row".into()));
    }
    XVector::new(rational_to_signs(&out)?).map_err(|e| Error::Internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(t: usize) -> GroundSet {
        GroundSet::new(t).unwrap()
    }

    fn sv(e: &[i8]) -> SignVector {
        SignVector::from_entries(e).unwrap()
    }

    #[test]
    fn distinguished_cycle_t3() {
        let r = SymmetricCycle::distinguished(g(3));
        let got: Vec<Vec<i8>> = r.vertices().iter().map(|v| v.entries()).collect();
        assert_eq!(
            got,
            vec![vec![1, 1, 1], vec![-1, 1, 1], vec![-1, -1, 1], vec![-1, -1, -1], vec![1, -1, -1], vec![1, 1, -1],]
        );
        assert_eq!(r.vertex(4), -r.vertex(1));
        assert!(r.is_distinguished());
        for t in 3..=10 {
            let r = SymmetricCycle::distinguished(g(t));
            assert_eq!(r.vertex(t), -g(t).positive());
            for k in 0..2 * t {
                assert_eq!(r.vertex(k), distinguished_vertex(g(t), k));
            }
        }
    }

    #[test]
    fn make_cycle_examples() {
        let t = g(3);
        assert_eq!(SymmetricCycle::make(t.positive(), &[1, 2, 3]).unwrap(), SymmetricCycle::distinguished(t));
        let rev = SymmetricCycle::make(t.positive(), &[3, 2, 1]).unwrap();
        assert_eq!(rev.vertex(1).entries(), vec![1, 1, -1]);
        assert!(SymmetricCycle::make(t.positive(), &[1, 1, 2]).is_err());
        assert!(SymmetricCycle::make(t.positive(), &[1, 2]).is_err());
        assert!(SymmetricCycle::make(t.positive(), &[0, 1, 2]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..=8 {
            for _ in 0..20 {
                let c = SymmetricCycle::random(g(n), &mut rng);
                c.check_invariants().unwrap();
                assert_eq!(c.vertex(n), -c.vertex(0));
            }
        }
    }

    #[test]
    fn from_vertices_validates() {
        let r = SymmetricCycle::distinguished(g(4));
        assert_eq!(SymmetricCycle::from_vertices(r.vertices().to_vec()).unwrap(), r);
        let mut bad = r.vertices().to_vec();
        bad.swap(1, 2);
        assert!(SymmetricCycle::from_vertices(bad).is_err());
        let mut antipodal_broken = r.vertices().to_vec();
        antipodal_broken[7] = antipodal_broken[6];
        assert!(SymmetricCycle::from_vertices(antipodal_broken).is_err());
    }

    #[test]
    fn decompose_examples() {
        let t = g(3);
        let r = SymmetricCycle::distinguished(t);
        let d = r.decompose(&t.positive()).unwrap();
        assert_eq!(d.x, XVector::unit(t));
        assert_eq!(d.q(), 1);

        let d = r.decompose(&sv(&[-1, 1, -1])).unwrap();
        assert_eq!(d.x.coords(), &[-1, 1, -1]);
        assert_eq!(d.q_indices, vec![1, 3, 5]);
        assert_eq!(d.q(), 3);

        let d = r.decompose(&sv(&[-1, 1, 1])).unwrap();
        assert_eq!(d.x.coords(), &[0, 1, 0]);
        assert_eq!(d.q(), 1);

        assert!(r.decompose(&sv(&[1, 1, 1, 1])).is_err());
    }

    #[test]
    fn fast_path_examples() {
        assert_eq!(decompose_distinguished(&sv(&[1, 1, 1])).x.coords(), &[1, 0, 0]);
        assert_eq!(decompose_distinguished(&sv(&[-1, 1, -1])).x.coords(), &[-1, 1, -1]);
        let d = decompose_distinguished(&sv(&[1, -1, 1]));
        assert_eq!(d.x.coords(), &[1, -1, 1]);
        assert_eq!(d.q(), 3);
    }

    #[test]
    fn fast_path_matches_solver() {
        for n in 3..=10 {
            let r = SymmetricCycle::distinguished(g(n));
            for v in g(n).vertices() {
                assert_eq!(decompose_distinguished(&v), r.decompose(&v).unwrap(), "{v}");
            }
        }
    }

    #[test]
    fn q_of_set_examples() {
        let t = g(3);
        assert_eq!(q_of_set(&GroundSubset::empty(t)), 1);
        assert_eq!(q_of_set(&GroundSubset::from_members(t, &[2]).unwrap()), 3);
        assert_eq!(q_of_set(&GroundSubset::from_members(t, &[1]).unwrap()), 1);
        for n in 3..=10 {
            for a in g(n).subsets() {
                assert_eq!(q_of_set(&a), decompose_distinguished(&a.negate_at()).q(), "{a}");
            }
        }
    }

    #[test]
    fn change_of_basis_examples() {
        let t = g(3);
        let r = SymmetricCycle::distinguished(t);
        let rev = SymmetricCycle::make(t.positive(), &[3, 2, 1]).unwrap();
        let x = r.decompose(&sv(&[-1, 1, -1])).unwrap().x;
        assert_eq!(change_of_basis(&x, &r, &r).unwrap(), x);
        assert_eq!(change_of_basis(&XVector::unit(t), &r, &rev).unwrap(), rev.decompose(&t.positive()).unwrap().x);
        assert_eq!(change_of_basis(&x, &r, &rev).unwrap(), rev.decompose(&sv(&[-1, 1, -1])).unwrap().x);
    }

    #[test]
    fn circular_translate_examples() {
        let t = g(3);
        let r = SymmetricCycle::distinguished(t);
        let owner = sv(&[-1, 1, -1]);
        let d = r.decompose(&owner).unwrap();
        assert_eq!(r.circular_translate(&d, 0), owner);
        assert_eq!(r.circular_translate(&d, 3), -owner);
        let shifted = r.circular_translate(&d, 1);
        assert_eq!(shifted.t(), 3);
        assert_eq!(r.circular_translate(&d, -1), r.circular_translate(&d, 5));
    }

    #[test]
    fn xvector_rejects_even_support() {
        assert!(XVector::new(vec![1, 1, 0]).is_err());
        assert!(XVector::new(vec![2, 0, 0]).is_err());
        assert_eq!(XVector::new(vec![1, -1, 1]).unwrap().support(), vec![1, 2, 3]);
    }
}
