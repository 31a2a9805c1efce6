//! Normal coordinates, zero sets and admissibility.
//!
//! Coordinate convention for a triangulation with `n` tetrahedra: the block
//! `7i..7i+7` belongs to tetrahedron `i`. Positions `7i..7i+3` count the
//! triangle types cutting off vertices 0, 1, 2, 3. Positions `7i+4`, `7i+5`,
//! `7i+6` count the quadrilateral types separating the vertex pairs
//! `{0,1}|{2,3}`, `{0,2}|{1,3}` and `{0,3}|{1,2}` respectively.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::num::{dot, gcd_all, scalar, Scalar};

/// Number of normal coordinates per tetrahedron.
pub const COORDS_PER_TET: usize = 7;

/// Offset of the first quadrilateral coordinate inside a tetrahedron block.
pub const QUAD_OFFSET: usize = 4;

/// Quadrilateral type (0, 1 or 2) separating vertex `a` and `b` from the
/// other two vertices.
pub fn quad_type(a: usize, b: usize) -> usize {
    debug_assert!(a < 4 && b < 4 && a != b);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        _ => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch: expected {expected} coordinates, found {found}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub found: usize,
}

/// An integer point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector<T>(Vec<T>);

impl<T: Scalar> IntVector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        IntVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&c| scalar(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![T::zero(); dim])
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = T::one();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn dot(&self, h: &[T]) -> T {
        dot(&self.0, h)
    }

    pub fn add(&self, other: &Self) -> Self {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn scale(&self, k: &T) -> Self {
        IntVector(self.0.iter().map(|a| a.clone() * k.clone()).collect())
    }

    /// `self <= other` in every coordinate.
    pub fn le_componentwise(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn coordinate_sum(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, c| acc + c.clone())
    }

    pub fn gcd(&self) -> T {
        gcd_all(&self.0)
    }

    /// Divides by the coordinate gcd, giving the smallest integer vector on
    /// the same ray. The zero vector is returned unchanged.
    pub fn primitive(&self) -> Self {
        let g = self.gcd();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntVector(self.0.iter().map(|c| c.clone() / g.clone()).collect())
    }

    pub fn zero_set(&self) -> ZeroSet {
        zero_set(self)
    }

    /// Converts to another scalar type, failing if a coordinate does not fit.
    pub fn convert<U: Scalar>(&self) -> Option<IntVector<U>> {
        self.0
            .iter()
            .map(|c| c.to_i128().and_then(U::from_i128))
            .collect::<Option<Vec<_>>>()
            .map(IntVector)
    }
}

impl<T> std::ops::Index<usize> for IntVector<T> {
    type Output = T;
    fn index(&self, k: usize) -> &T {
        &self.0[k]
    }
}

/// Space-separated decimal coordinates (the surface line format).
impl<T: fmt::Display> fmt::Display for IntVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Packed bitmask over coordinate positions. Bit `k` set means coordinate
/// `k` vanishes on the represented face.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroSet {
    len: usize,
    words: Vec<u64>,
}

impl ZeroSet {
    fn word_count(len: usize) -> usize {
        len.div_ceil(64)
    }

    pub fn empty(len: usize) -> Self {
        ZeroSet { len, words: vec![0; Self::word_count(len)] }
    }

    pub fn full(len: usize) -> Self {
        let mut z = ZeroSet { len, words: vec![u64::MAX; Self::word_count(len)] };
        z.trim();
        z
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut z = Self::empty(len);
        for k in indices {
            z.insert(k);
        }
        z
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn insert(&mut self, k: usize) {
        assert!(k < self.len, "bit {k} out of range for zero set of length {}", self.len);
        self.words[k / 64] |= 1u64 << (k % 64);
    }

    #[inline]
    pub fn remove(&mut self, k: usize) {
        assert!(k < self.len);
        self.words[k / 64] &= !(1u64 << (k % 64));
    }

    #[inline]
    pub fn contains(&self, k: usize) -> bool {
        k < self.len && self.words[k / 64] & (1u64 << (k % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        ZeroSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        ZeroSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn complement(&self) -> Self {
        let mut z = ZeroSet { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        z.trim();
        z
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_strict_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    /// Positions of `mask` that are not in `self`.
    fn missing_from(&self, mask: &Self) -> usize {
        self.words
            .iter()
            .zip(&mask.words)
            .map(|(a, m)| (m & !a).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&k| self.contains(k))
    }

    /// Lowercase hex, most significant word first, bit `k` = `2^k`.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let word = self.words.get(d / 16).copied().unwrap_or(0);
            let nibble = (word >> ((d % 16) * 4)) & 0xf;
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }
}

impl fmt::Debug for ZeroSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZeroSet{{")?;
        for (i, k) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "}}")
    }
}

/// Zero set of a single vector: bit `k` set iff `x[k] == 0`.
pub fn zero_set<T: Scalar>(x: &IntVector<T>) -> ZeroSet {
    let mut z = ZeroSet::empty(x.len());
    for (k, c) in x.coords().iter().enumerate() {
        if c.is_zero() {
            z.insert(k);
        }
    }
    z
}

/// Groups of coordinates of which at most one may be nonzero.
///
/// For a triangulation these are the quadrilateral triples of each
/// tetrahedron; arbitrary groups are accepted so the algorithms can run on
/// generic cones as well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    dim: usize,
    masks: Vec<ZeroSet>,
}

impl Admissibility {
    /// Quadrilateral constraints for `tets` tetrahedra in `R^{7·tets}`.
    pub fn quadrilateral(tets: usize) -> Self {
        let dim = COORDS_PER_TET * tets;
        let groups = (0..tets).map(|t| {
            let base = COORDS_PER_TET * t + QUAD_OFFSET;
            vec![base, base + 1, base + 2]
        });
        Self::from_groups(dim, groups)
    }

    /// No constraint at all: every point of the cone is admissible.
    pub fn unconstrained(dim: usize) -> Self {
        Admissibility { dim, masks: Vec::new() }
    }

    pub fn from_groups<I, G>(dim: usize, groups: I) -> Self
    where
        I: IntoIterator<Item = G>,
        G: IntoIterator<Item = usize>,
    {
        let masks = groups
            .into_iter()
            .map(|g| ZeroSet::from_indices(dim, g))
            .filter(|m| m.count() > 1)
            .collect();
        Admissibility { dim, masks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_trivial(&self) -> bool {
        self.masks.is_empty()
    }

    /// For every coordinate, the constraint group containing it (if any).
    pub fn group_of_coordinate(&self) -> Vec<Option<usize>> {
        let mut groups = vec![None; self.dim];
        for (g, m) in self.masks.iter().enumerate() {
            for k in m.iter() {
                groups[k] = Some(g);
            }
        }
        groups
    }

    pub fn is_admissible_vector<T: Scalar>(&self, x: &IntVector<T>) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        self.masks.iter().all(|m| m.iter().filter(|&k| !x[k].is_zero()).count() <= 1)
    }

    /// At most one position of every group lies outside `z`.
    pub fn is_admissible_zeroset(&self, z: &ZeroSet) -> bool {
        debug_assert_eq!(z.len(), self.dim);
        self.masks.iter().all(|m| z.missing_from(m) <= 1)
    }
}

/// Quadrilateral constraints on a vector of length `7n`.
pub fn is_admissible_vector<T: Scalar>(x: &IntVector<T>) -> bool {
    assert_eq!(x.len() % COORDS_PER_TET, 0, "normal vectors have length 7n");
    Admissibility::quadrilateral(x.len() / COORDS_PER_TET).is_admissible_vector(x)
}

/// Quadrilateral constraints on a zero set of length `7n`.
pub fn is_admissible_zeroset(z: &ZeroSet) -> bool {
    assert_eq!(z.len() % COORDS_PER_TET, 0, "zero sets have length 7n");
    Admissibility::quadrilateral(z.len() / COORDS_PER_TET).is_admissible_zeroset(z)
}

/// Dense integer matrix; the cone it describes is `{x : Ax = 0, x >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix<T> {
    cols: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn new(cols: usize, rows: Vec<Vec<T>>) -> Result<Self, DimensionMismatch> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(DenseMatrix { cols, rows })
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Result<Self, DimensionMismatch> {
        Self::new(cols, rows.iter().map(|r| r.iter().map(|&v| scalar(v)).collect()).collect())
    }

    pub fn empty(cols: usize) -> Self {
        DenseMatrix { cols, rows: Vec::new() }
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Rows reordered as `order[0], order[1], ...`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        DenseMatrix { cols: self.cols, rows: order.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    /// The first `k` rows.
    pub fn truncated(&self, k: usize) -> Self {
        DenseMatrix { cols: self.cols, rows: self.rows[..k].to_vec() }
    }

    pub fn annihilates(&self, x: &IntVector<T>) -> Result<bool, DimensionMismatch> {
        if x.len() != self.cols {
            return Err(DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok(self.rows.iter().all(|r| dot(r, x.coords()).is_zero()))
    }
}

/// A deduplicated set of integer vectors, iterated in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BasisSet<T: Ord>(BTreeSet<IntVector<T>>);

impl<T: Scalar> BasisSet<T> {
    pub fn new() -> Self {
        BasisSet(BTreeSet::new())
    }

    pub fn unit_vectors(dim: usize) -> Self {
        (0..dim).map(|k| IntVector::unit(dim, k)).collect()
    }

    pub fn insert(&mut self, v: IntVector<T>) -> bool {
        self.0.insert(v)
    }

    pub fn contains(&self, v: &IntVector<T>) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &IntVector<T>> {
        self.0.iter()
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = IntVector<T>>) {
        self.0.extend(other)
    }

    pub fn to_vec(&self) -> Vec<IntVector<T>> {
        self.0.iter().cloned().collect()
    }

    /// One vector per line in the surface listing format.
    pub fn to_listing(&self) -> String {
        let mut out = String::new();
        for v in &self.0 {
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }
}

impl<T: Scalar> FromIterator<IntVector<T>> for BasisSet<T> {
    fn from_iter<I: IntoIterator<Item = IntVector<T>>>(iter: I) -> Self {
        BasisSet(iter.into_iter().collect())
    }
}

impl<T: Scalar> IntoIterator for BasisSet<T> {
    type Item = IntVector<T>;
    type IntoIter = std::collections::btree_set::IntoIter<IntVector<T>>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a, T: Scalar> IntoIterator for &'a BasisSet<T> {
    type Item = &'a IntVector<T>;
    type IntoIter = std::collections::btree_set::Iter<'a, IntVector<T>>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> IntVector<BigInt> {
        IntVector::from_i64(xs)
    }

    #[test]
    fn zero_set_examples() {
        assert_eq!(zero_set(&v(&[0; 7])), ZeroSet::full(7));
        let e5 = IntVector::<BigInt>::unit(7, 5);
        assert_eq!(zero_set(&e5), ZeroSet::from_indices(7, [0, 1, 2, 3, 4, 6]));
        assert_eq!(zero_set(&v(&[1, 0, 2, 0, 0, 0, 3])), ZeroSet::from_indices(7, [1, 3, 4, 5]));
    }

    #[test]
    fn admissible_vector_examples() {
        assert!(is_admissible_vector(&v(&[1, 1, 1, 1, 5, 0, 0])));
        assert!(!is_admissible_vector(&v(&[0, 0, 0, 0, 1, 1, 0])));
        assert!(is_admissible_vector(&v(&[0; 14])));
    }

    #[test]
    fn admissible_zeroset_examples() {
        assert!(is_admissible_zeroset(&ZeroSet::full(7)));
        assert!(is_admissible_zeroset(&ZeroSet::from_indices(7, [4, 5])));
        assert!(!is_admissible_zeroset(&ZeroSet::from_indices(7, [4])));
    }

    #[test]
    fn quad_types_partition_pairs() {
        assert_eq!(quad_type(0, 1), 0);
        assert_eq!(quad_type(3, 2), 0);
        assert_eq!(quad_type(0, 2), 1);
        assert_eq!(quad_type(1, 3), 1);
        assert_eq!(quad_type(0, 3), 2);
        assert_eq!(quad_type(2, 1), 2);
    }

    #[test]
    fn matching_trivial_cases() {
        let a = DenseMatrix::<BigInt>::from_i64(3, &[&[1, -1, 0]]).unwrap();
        assert!(a.annihilates(&v(&[0, 0, 0])).unwrap());
        assert!(a.annihilates(&v(&[2, 2, 7])).unwrap());
        assert!(!a.annihilates(&v(&[1, 0, 0])).unwrap());
        assert!(DenseMatrix::<BigInt>::empty(3).annihilates(&v(&[4, 0, 1])).unwrap());
        assert!(a.annihilates(&v(&[1, 1])).is_err());
    }

    #[test]
    fn hex_dump() {
        assert_eq!(ZeroSet::from_indices(7, [0, 1, 2, 3]).to_hex(), "0f");
        assert_eq!(ZeroSet::full(7).to_hex(), "7f");
        assert_eq!(ZeroSet::from_indices(70, [69]).to_hex().len(), 18);
    }

    #[test]
    fn full_set_is_trimmed() {
        let z = ZeroSet::full(70);
        assert_eq!(z.count(), 70);
        assert_eq!(z.complement().count(), 0);
    }

    fn nonneg_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => 1i64..5], len)
    }

    proptest! {
        #[test]
        fn zero_set_of_sum_is_intersection(x in nonneg_vec(14), y in nonneg_vec(14)) {
            let (x, y) = (v(&x), v(&y));
            prop_assert_eq!(zero_set(&x.add(&y)), zero_set(&x).intersection(&zero_set(&y)));
        }

        #[test]
        fn admissibility_is_support_monotone(x in nonneg_vec(14), mask in prop::collection::vec(any::<bool>(), 14)) {
            let x = v(&x);
            let y = IntVector::new(x.coords().iter().zip(&mask)
                .map(|(c, &keep)| if keep { c.clone() } else { BigInt::from(0) }).collect());
            if is_admissible_vector(&x) {
                prop_assert!(is_admissible_vector(&y));
            }
        }

        #[test]
        fn vector_and_zeroset_admissibility_agree(x in nonneg_vec(21)) {
            let x = v(&x);
            prop_assert_eq!(is_admissible_vector(&x), is_admissible_zeroset(&zero_set(&x)));
        }
    }
}
