//! Bit-parallel linear algebra over GF(2).
//!
//! A [`BitSubset`] is both a subset of the ground set `[n]` and its
//! characteristic vector in GF(2)^n, so the parity of an intersection is the
//! inner product of two vectors. [`Gf2Subspace`] keeps subspaces in reduced
//! row echelon form (pivot = lowest set coordinate), which makes equality of
//! subspaces a plain basis comparison.
//!
//! Elements are 0-based internally; the human-facing formats convert to the
//! 1-based `[n] = {1, ..., n}` convention at the boundary.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Default cap on the dimension accepted by [`Gf2Subspace::enumerate`].
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

type Words = SmallVec<[u64; 1]>;

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(n: usize) -> u64 {
    match n % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A subset of `[n]`, stored as packed membership bits.
///
/// Ground sets up to 64 points live in a single inline word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSubset {
    words: Words,
    ground_size: usize,
}

impl BitSubset {
    /// The empty set over a ground set of size `n`.
    ///
    /// # Panics
    /// Panics if `n == 0`.
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "ground size must be at least 1");
        Self {
            words: smallvec::smallvec![0; word_count(n)],
            ground_size: n,
        }
    }

    /// The whole ground set `[n]`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        *s.words.last_mut().unwrap() &= tail_mask(n);
        s
    }

    /// Builds a subset from 0-based element indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        let mut s = Self::empty(n);
        for e in elements {
            if e >= n {
                return Err(Error::ElementOutOfRange {
                    element: e + 1,
                    ground_size: n,
                });
            }
            s.insert(e);
        }
        Ok(s)
    }

    /// Builds a subset from 1-based element labels, as used in files and on
    /// the command line.
    pub fn from_labels(n: usize, labels: &[usize]) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > n) {
            return Err(Error::ElementOutOfRange {
                element: bad,
                ground_size: n,
            });
        }
        Self::from_indices(n, labels.iter().map(|l| l - 1))
    }

    /// Single-word constructor; bit `i` of `bits` is element `i` (0-based).
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        if n < WORD_BITS && bits >> n != 0 {
            return Err(Error::ElementOutOfRange {
                element: (WORD_BITS - bits.leading_zeros() as usize),
                ground_size: n,
            });
        }
        let mut s = Self::empty(n);
        s.words[0] = bits;
        Ok(s)
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The membership bits as one word, when `n <= 64`.
    #[inline]
    pub fn as_bits(&self) -> Option<u64> {
        (self.words.len() == 1).then(|| self.words[0])
    }

    #[inline]
    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        e < self.ground_size && (self.words[e / WORD_BITS] >> (e % WORD_BITS)) & 1 == 1
    }

    /// # Panics
    /// Panics if `e` is outside the ground set.
    #[inline]
    pub fn insert(&mut self, e: usize) {
        assert!(e < self.ground_size, "element {e} out of range");
        self.words[e / WORD_BITS] |= 1u64 << (e % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, e: usize) {
        if e < self.ground_size {
            self.words[e / WORD_BITS] &= !(1u64 << (e % WORD_BITS));
        }
    }

    /// Flips membership of `e` (vector addition of a unit vector).
    #[inline]
    pub fn toggle(&mut self, e: usize) {
        assert!(e < self.ground_size, "element {e} out of range");
        self.words[e / WORD_BITS] ^= 1u64 << (e % WORD_BITS);
    }

    /// Lowest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// 0-based elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD_BITS + b)
            })
        })
    }

    /// 1-based labels in increasing order.
    pub fn labels(&self) -> Vec<usize> {
        self.iter().map(|e| e + 1).collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ground_size != other.ground_size {
            return Err(Error::DimensionMismatch {
                expected: self.ground_size,
                found: other.ground_size,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.ground_size, other.ground_size);
        Self {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
            ground_size: self.ground_size,
        }
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a & b))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a | b))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a & !b))
    }

    /// Symmetric difference, i.e. vector addition over GF(2).
    pub fn sym_diff(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a ^ b))
    }

    /// In-place vector addition. Ground sizes must agree.
    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.ground_size, other.ground_size);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= *b;
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.ground_size == other.ground_size
            && self
                .words
                .iter()
                .zip(other.words.iter())
                .all(|(a, b)| a & !b == 0)
    }

    /// `|self ∩ other|`; ground sizes must agree.
    #[inline]
    pub fn intersection_size(&self, other: &Self) -> usize {
        debug_assert_eq!(self.ground_size, other.ground_size);
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Unchecked inner product; ground sizes must agree.
    #[inline]
    pub fn parity_with(&self, other: &Self) -> bool {
        debug_assert_eq!(self.ground_size, other.ground_size);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }
}

/// The GF(2) inner product `<u, v>`, equal to `|u ∩ v| mod 2`.
pub fn inner_parity(u: &BitSubset, v: &BitSubset) -> Result<bool> {
    u.check_same(v)?;
    Ok(u.parity_with(v))
}

impl Ord for BitSubset {
    /// Ground size first, then the membership bits read as an unsigned
    /// integer (element 1 is the least significant bit).
    fn cmp(&self, other: &Self) -> Ordering {
        self.ground_size
            .cmp(&other.ground_size)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, l) in self.labels().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for BitSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.ground_size)
    }
}

/// A subspace of GF(2)^n held as a reduced row echelon basis.
///
/// Each basis row has a pivot (its lowest set coordinate), pivots strictly
/// increase down the basis, and no other row has a 1 in a pivot column.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gf2Subspace {
    basis: Vec<BitSubset>,
    ground_size: usize,
}

impl Gf2Subspace {
    /// The zero subspace of GF(2)^n.
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "ground size must be at least 1");
        Self {
            basis: Vec::new(),
            ground_size: n,
        }
    }

    /// All of GF(2)^n.
    pub fn full(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| BitSubset::from_indices(n, [i]).unwrap())
            .collect();
        Self {
            basis,
            ground_size: n,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn basis(&self) -> &[BitSubset] {
        &self.basis
    }

    fn pivot(row: &BitSubset) -> usize {
        row.first().expect("basis rows are nonzero")
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is a member.
    fn reduce(&self, v: &mut BitSubset) {
        for row in &self.basis {
            if v.contains(Self::pivot(row)) {
                v.xor_assign(row);
            }
        }
    }

    /// Adds `v` to the spanning set, keeping the basis reduced. Returns
    /// whether the dimension grew.
    fn absorb(&mut self, mut v: BitSubset) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.first() else {
            return false;
        };
        for row in self.basis.iter_mut() {
            if row.contains(p) {
                row.xor_assign(&v);
            }
        }
        let at = self.basis.partition_point(|r| Self::pivot(r) < p);
        self.basis.insert(at, v);
        true
    }

    pub fn contains(&self, v: &BitSubset) -> Result<bool> {
        self.check(v)?;
        let mut v = v.clone();
        self.reduce(&mut v);
        Ok(v.is_empty())
    }

    fn check(&self, v: &BitSubset) -> Result<()> {
        if v.ground_size() != self.ground_size {
            return Err(Error::DimensionMismatch {
                expected: self.ground_size,
                found: v.ground_size(),
            });
        }
        Ok(())
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        for row in &self.basis {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `W ⊆ W^⊥`: every pair of basis vectors (including a vector with
    /// itself) has even inner product.
    pub fn is_self_orthogonal(&self) -> bool {
        self.basis
            .iter()
            .enumerate()
            .all(|(i, u)| self.basis[i..].iter().all(|v| !u.parity_with(v)))
    }

    /// Every vector of the subspace exactly once, in Gray-code order over the
    /// coefficient masks (starting from zero).
    pub fn enumerate(&self, cap: usize) -> Result<Vec<BitSubset>> {
        let d = self.dim();
        if d > cap {
            return Err(Error::EnumerationTooLarge { dim: d, cap });
        }
        let total = 1usize << d;
        let mut out = Vec::with_capacity(total);
        let mut cur = BitSubset::empty(self.ground_size);
        out.push(cur.clone());
        for i in 1..total {
            cur.xor_assign(&self.basis[i.trailing_zeros() as usize]);
            out.push(cur.clone());
        }
        Ok(out)
    }
}

fn common_ground(vectors: &[BitSubset]) -> Result<Option<usize>> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    let n = first.ground_size();
    for v in vectors {
        if v.ground_size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.ground_size(),
            });
        }
    }
    Ok(Some(n))
}

/// Span of a list of vectors over GF(2)^n.
///
/// An empty list has no ground size to infer, so `n` is passed explicitly;
/// it must agree with the vectors.
pub fn span(n: usize, vectors: &[BitSubset]) -> Result<Gf2Subspace> {
    if n == 0 {
        return Err(Error::EmptyGround);
    }
    if let Some(g) = common_ground(vectors)? {
        if g != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g,
            });
        }
    }
    let mut w = Gf2Subspace::zero(n);
    for v in vectors {
        w.absorb(v.clone());
    }
    Ok(w)
}

/// Rank of a list of vectors.
pub fn rank(n: usize, vectors: &[BitSubset]) -> Result<usize> {
    span(n, vectors).map(|w| w.dim())
}

/// The space of coefficient vectors `ε ∈ GF(2)^m` with `Σ ε_i v_i = 0`,
/// where `m = vectors.len()`.
pub fn nullspace(vectors: &[BitSubset]) -> Result<Gf2Subspace> {
    let m = vectors.len();
    if common_ground(vectors)?.is_none() {
        return Err(Error::Argument(
            "nullspace of an empty vector list has no coefficient space".into(),
        ));
    }
    // Echelon rows paired with the combination of inputs that produced them.
    let mut rows: Vec<(BitSubset, BitSubset)> = Vec::new();
    let mut relations = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut v = v.clone();
        let mut combo = BitSubset::empty(m);
        combo.insert(i);
        for (row, row_combo) in &rows {
            if v.contains(row.first().unwrap()) {
                v.xor_assign(row);
                combo.xor_assign(row_combo);
            }
        }
        match v.first() {
            None => relations.push(combo),
            Some(p) => {
                for (row, row_combo) in rows.iter_mut() {
                    if row.contains(p) {
                        row.xor_assign(&v);
                        row_combo.xor_assign(&combo);
                    }
                }
                rows.push((v, combo));
            }
        }
    }
    span(m, &relations)
}

/// Kernel of the functional `w ↦ <w, v>` restricted to `w`.
///
/// Equals `w` when the functional vanishes on it; otherwise has dimension
/// `dim(w) - 1`.
pub fn kernel_of_functional(w: &Gf2Subspace, v: &BitSubset) -> Result<Gf2Subspace> {
    w.check(v)?;
    let Some(odd) = w.basis.iter().position(|b| b.parity_with(v)) else {
        return Ok(w.clone());
    };
    let pivot_row = &w.basis[odd];
    let gens: Vec<BitSubset> = w
        .basis
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != odd)
        .map(|(_, b)| {
            let mut b = b.clone();
            if b.parity_with(v) {
                b.xor_assign(pivot_row);
            }
            b
        })
        .collect();
    span(w.ground_size, &gens)
}

/// `U^⊥ = { x : <x, u> = 0 for all u ∈ U }`.
pub fn orthogonal_complement(u: &Gf2Subspace) -> Gf2Subspace {
    let n = u.ground_size;
    let pivots: Vec<usize> = u.basis.iter().map(Gf2Subspace::pivot).collect();
    let mut gens = Vec::with_capacity(n - pivots.len());
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut x = BitSubset::empty(n);
        x.insert(free);
        for (row, &p) in u.basis.iter().zip(&pivots) {
            if row.contains(free) {
                x.insert(p);
            }
        }
        gens.push(x);
    }
    span(n, &gens).expect("generators share the ground size")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, labels: &[usize]) -> BitSubset {
        BitSubset::from_labels(n, labels).unwrap()
    }

    #[test]
    fn inner_parity_examples() {
        assert!(inner_parity(&s(4, &[1, 2]), &s(4, &[2, 3])).unwrap());
        assert!(!inner_parity(&s(4, &[]), &s(4, &[1, 2, 3])).unwrap());
        assert!(inner_parity(&s(4, &[1, 2, 3]), &s(4, &[1, 2, 3])).unwrap());
        assert!(matches!(
            inner_parity(&s(4, &[1]), &s(5, &[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multiword_layout() {
        let a = BitSubset::from_indices(130, [0, 64, 129]).unwrap();
        let b = BitSubset::from_indices(130, [64, 129, 5]).unwrap();
        assert_eq!(a.words().len(), 3);
        assert_eq!(a.cardinality(), 3);
        assert_eq!(a.intersection_size(&b), 2);
        assert!(!a.parity_with(&b));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(BitSubset::full(130).cardinality(), 130);
        assert!(a < b);
    }

    #[test]
    fn label_bounds() {
        assert!(BitSubset::from_labels(3, &[4]).is_err());
        assert!(BitSubset::from_labels(3, &[0]).is_err());
        assert!(BitSubset::from_bits(3, 0b1000).is_err());
        assert_eq!(s(3, &[1, 3]).as_bits(), Some(0b101));
    }

    #[test]
    fn ordering_is_integer_value() {
        let mut v = vec![s(3, &[1, 2]), s(3, &[3]), s(3, &[]), s(3, &[2])];
        v.sort();
        assert_eq!(v, vec![s(3, &[]), s(3, &[2]), s(3, &[1, 2]), s(3, &[3])]);
    }

    #[test]
    fn span_examples() {
        assert_eq!(span(2, &[s(2, &[1]), s(2, &[2])]).unwrap().dim(), 2);
        assert_eq!(span(2, &[s(2, &[1, 2]), s(2, &[1, 2])]).unwrap().dim(), 1);
        assert_eq!(span(2, &[]).unwrap(), Gf2Subspace::zero(2));
        assert!(span(3, &[s(2, &[1])]).is_err());
    }

    #[test]
    fn rref_shape() {
        let w = span(5, &[s(5, &[2, 3, 5]), s(5, &[1, 2]), s(5, &[3, 4])]).unwrap();
        let pivots: Vec<_> = w.basis().iter().map(|b| b.first().unwrap()).collect();
        assert!(pivots.windows(2).all(|p| p[0] < p[1]));
        for (i, row) in w.basis().iter().enumerate() {
            for (j, other) in w.basis().iter().enumerate() {
                if i != j {
                    assert!(!other.contains(pivots[i]));
                }
            }
            assert!(w.contains(row).unwrap());
        }
    }

    #[test]
    fn nullspace_examples() {
        let v = s(3, &[1, 3]);
        let ns = nullspace(&[v.clone(), v]).unwrap();
        assert!(ns.contains(&s(2, &[1, 2])).unwrap());

        // {1},{2},{3},{1,2,3} over n = 3: brute force over all 16 coefficient
        // vectors finds only 0 and (1,1,1,1).
        let vs = [s(3, &[1]), s(3, &[2]), s(3, &[3]), s(3, &[1, 2, 3])];
        let brute: Vec<u64> = (0u64..16)
            .filter(|mask| {
                let mut acc = BitSubset::empty(3);
                for (i, v) in vs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        acc.xor_assign(v);
                    }
                }
                acc.is_empty()
            })
            .collect();
        assert_eq!(brute, vec![0, 0b1111]);
        let ns = nullspace(&vs).unwrap();
        assert_eq!(ns.dim(), 1);
        assert_eq!(ns.basis()[0], s(4, &[1, 2, 3, 4]));

        let indep = [s(4, &[1, 2]), s(4, &[2, 3]), s(4, &[4])];
        assert_eq!(nullspace(&indep).unwrap().dim(), 0);
        assert!(nullspace(&[]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let w = span(2, &[s(2, &[1]), s(2, &[2])]).unwrap();
        let k = kernel_of_functional(&w, &s(2, &[1])).unwrap();
        assert_eq!(k, span(2, &[s(2, &[2])]).unwrap());

        let w = span(4, &[s(4, &[1, 2])]).unwrap();
        assert_eq!(kernel_of_functional(&w, &s(4, &[3, 4])).unwrap(), w);
    }

    #[test]
    fn complement_extremes() {
        assert_eq!(
            orthogonal_complement(&Gf2Subspace::zero(5)),
            Gf2Subspace::full(5)
        );
        assert_eq!(
            orthogonal_complement(&Gf2Subspace::full(5)),
            Gf2Subspace::zero(5)
        );
        let u = span(6, &[s(6, &[1, 2, 3]), s(6, &[3, 4])]).unwrap();
        let c = orthogonal_complement(&u);
        assert_eq!(c.dim(), 4);
        for x in c.basis() {
            for y in u.basis() {
                assert!(!x.parity_with(y));
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let z = Gf2Subspace::zero(3)
            .enumerate(DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert_eq!(z, vec![BitSubset::empty(3)]);
        let w = span(3, &[s(3, &[1]), s(3, &[2, 3])]).unwrap();
        let all = w.enumerate(DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(all.len(), 4);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
        assert!(matches!(
            Gf2Subspace::full(30).enumerate(DEFAULT_ENUMERATION_CAP),
            Err(Error::EnumerationTooLarge { dim: 30, cap: 24 })
        ));
    }
}
