//! Set families over a common ground set and their intersection statistics.
//!
//! The central quantity is [`op`]: the number of unordered pairs of distinct
//! members whose intersection has odd size. Alongside it live the exact-size
//! pair count `c_{k,t}`, shadows, links, the oddtown/eventown validators and
//! a few structural helpers (maximal eventown subfamilies, the bipartite
//! cross-intersection pattern).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::combin::{binomial, Combinations};
use crate::error::{arg, Error, Result};
use crate::gf2::BitSubset;

/// Families at least this large count odd pairs in parallel.
const PARALLEL_OP_THRESHOLD: usize = 512;

/// Default size cap for the exact maximum-eventown search.
pub const DEFAULT_EXACT_CAP: usize = 128;

/// An ordered, duplicate-free list of subsets of `[n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground_size: usize,
    members: Vec<BitSubset>,
}

impl SetFamily {
    /// An empty family over `[n]`.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        Ok(Self {
            ground_size: n,
            members: Vec::new(),
        })
    }

    /// Builds a family, rejecting duplicates and foreign ground sizes.
    pub fn new(n: usize, members: Vec<BitSubset>) -> Result<Self> {
        let mut fam = Self::empty(n)?;
        fam.members.reserve(members.len());
        let mut seen = HashSet::with_capacity(members.len());
        for m in members {
            if m.ground_size() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.ground_size(),
                });
            }
            if !seen.insert(m.clone()) {
                return Err(Error::DuplicateMember(m.to_string()));
            }
            fam.members.push(m);
        }
        Ok(fam)
    }

    /// Builds a family from 1-based label lists.
    pub fn from_labels(n: usize, sets: &[&[usize]]) -> Result<Self> {
        let members = sets
            .iter()
            .map(|s| BitSubset::from_labels(n, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, members)
    }

    /// Appends a member; fails on duplicates.
    pub fn push(&mut self, set: BitSubset) -> Result<()> {
        if set.ground_size() != self.ground_size {
            return Err(Error::DimensionMismatch {
                expected: self.ground_size,
                found: set.ground_size(),
            });
        }
        if self.members.contains(&set) {
            return Err(Error::DuplicateMember(set.to_string()));
        }
        self.members.push(set);
        Ok(())
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    #[inline]
    pub fn members(&self) -> &[BitSubset] {
        &self.members
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &BitSubset) -> bool {
        self.members.contains(set)
    }

    /// The same members sorted by [`BitSubset`] order.
    pub fn canonical(&self) -> Self {
        let mut members = self.members.clone();
        members.sort();
        Self {
            ground_size: self.ground_size,
            members,
        }
    }

    /// The members at the given positions, in the order given.
    pub fn subfamily(&self, indices: &[usize]) -> Result<Self> {
        let members = indices
            .iter()
            .map(|&i| {
                self.members
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Argument(format!("member index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ground_size, members)
    }

    /// Members satisfying `keep`, order preserved.
    pub fn filter(&self, keep: impl Fn(&BitSubset) -> bool) -> Self {
        Self {
            ground_size: self.ground_size,
            members: self.members.iter().filter(|m| keep(m)).cloned().collect(),
        }
    }

    /// Family union (members of `self` first, then new members of `other`).
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.ground_size != other.ground_size {
            return Err(Error::DimensionMismatch {
                expected: self.ground_size,
                found: other.ground_size,
            });
        }
        let mut out = self.clone();
        let seen: HashSet<&BitSubset> = self.members.iter().collect();
        out.members
            .extend(other.members.iter().filter(|m| !seen.contains(m)).cloned());
        Ok(out)
    }

    /// Applies a permutation of the ground set (`perm[i]` is the image of
    /// 0-based element `i`) to every member.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.ground_size;
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return arg("not a permutation of the ground set");
        }
        let members = self
            .members
            .iter()
            .map(|m| BitSubset::from_indices(n, m.iter().map(|e| perm[e])))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, members)
    }

    /// Common member size, if the family is uniform and nonempty.
    pub fn uniform_size(&self) -> Option<usize> {
        let k = self.members.first()?.cardinality();
        self.members
            .iter()
            .all(|m| m.cardinality() == k)
            .then_some(k)
    }

    fn require_uniform(&self) -> Result<Option<usize>> {
        let Some(first) = self.members.first() else {
            return Ok(None);
        };
        let k = first.cardinality();
        for (i, m) in self.members.iter().enumerate() {
            let c = m.cardinality();
            if c != k {
                return Err(Error::NotUniform {
                    member: i + 1,
                    expected: k,
                    found: c,
                });
            }
        }
        Ok(Some(k))
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}] ", self.ground_size)?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Odd-intersection statistics of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpReport {
    pub op_count: u64,
    /// Index pairs `(i, j)`, `i < j`, in ascending order; present when asked for.
    pub pairs: Option<Vec<(usize, usize)>>,
    /// `op_count / C(|family|, 2)`; undefined below two members.
    pub density: Option<Ratio<u64>>,
}

fn odd_partners(members: &[BitSubset], i: usize) -> impl Iterator<Item = usize> + '_ {
    let a = &members[i];
    (i + 1..members.len()).filter(move |&j| a.parity_with(&members[j]))
}

/// Counts unordered pairs of members with odd intersection.
pub fn op(family: &SetFamily, materialize_pairs: bool) -> OpReport {
    let members = family.members();
    let len = members.len();
    let (op_count, pairs) = if materialize_pairs {
        let per_row: Vec<Vec<(usize, usize)>> = if len >= PARALLEL_OP_THRESHOLD {
            (0..len)
                .into_par_iter()
                .map(|i| odd_partners(members, i).map(|j| (i, j)).collect())
                .collect()
        } else {
            (0..len)
                .map(|i| odd_partners(members, i).map(|j| (i, j)).collect())
                .collect()
        };
        let pairs: Vec<_> = per_row.into_iter().flatten().collect();
        (pairs.len() as u64, Some(pairs))
    } else {
        let count = if len >= PARALLEL_OP_THRESHOLD {
            (0..len)
                .into_par_iter()
                .map(|i| odd_partners(members, i).count() as u64)
                .sum()
        } else {
            (0..len)
                .map(|i| odd_partners(members, i).count() as u64)
                .sum()
        };
        (count, None)
    };
    let density = (len >= 2).then(|| Ratio::new(op_count, pairs_of(len)));
    OpReport {
        op_count,
        pairs,
        density,
    }
}

fn pairs_of(len: usize) -> u64 {
    (len as u64) * (len as u64 - 1) / 2
}

/// `op(family) / C(|family|, 2)` as an exact fraction.
pub fn op_density(family: &SetFamily) -> Result<Ratio<u64>> {
    if family.len() < 2 {
        return arg("density needs at least two members");
    }
    Ok(op(family, false).density.expect("len >= 2"))
}

/// Number of unordered pairs in a `k`-uniform family meeting in exactly `t`
/// points.
pub fn c_kt(family: &SetFamily, t: usize) -> Result<u64> {
    let Some(k) = family.require_uniform()? else {
        return Ok(0);
    };
    if t >= k {
        return arg(format!(
            "t = {t} must be smaller than the member size k = {k}"
        ));
    }
    let m = family.members();
    let mut count = 0u64;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if m[i].intersection_size(&m[j]) == t {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// All `k`-subsets of members, sorted and duplicate-free.
pub fn shadow(family: &SetFamily, k: usize) -> Result<SetFamily> {
    let n = family.ground_size();
    if let Some((i, m)) = family
        .members()
        .iter()
        .enumerate()
        .find(|(_, m)| k >= m.cardinality())
    {
        return arg(format!(
            "shadow size {k} must be below every member size; member {} has size {}",
            i + 1,
            m.cardinality()
        ));
    }
    let mut out = BTreeSet::new();
    for m in family.members() {
        let elems: Vec<usize> = m.iter().collect();
        for c in Combinations::new(elems.len(), k) {
            out.insert(BitSubset::from_indices(n, c.iter().map(|&i| elems[i]))?);
        }
    }
    SetFamily::new(n, out.into_iter().collect())
}

/// `{ F \ a : F ∈ family, a ⊆ F }`, in member order.
pub fn link(family: &SetFamily, a: &BitSubset) -> Result<SetFamily> {
    let n = family.ground_size();
    if a.ground_size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ground_size(),
        });
    }
    let members = family
        .members()
        .iter()
        .filter(|f| a.is_subset_of(f))
        .map(|f| f.difference(a))
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(n, members)
}

fn subsets_of_ground(n: usize, size: usize) -> impl Iterator<Item = BitSubset> {
    Combinations::new(n, size).map(move |c| BitSubset::from_indices(n, c).expect("indices < n"))
}

fn require_k_uniform(family: &SetFamily, k: usize) -> Result<()> {
    if let Some((i, m)) = family
        .members()
        .iter()
        .enumerate()
        .find(|(_, m)| m.cardinality() != k)
    {
        return Err(Error::NotUniform {
            member: i + 1,
            expected: k,
            found: m.cardinality(),
        });
    }
    Ok(())
}

/// Both sides of the link double count for a `k`-uniform family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkIdentity {
    /// `C(k, k-3) · |family|`.
    pub lhs: u128,
    /// Sum of link sizes over all `(k-3)`-subsets of the ground set.
    pub rhs: u128,
    pub holds: bool,
}

/// Evaluates `C(k,k-3)·|F| = Σ_{|A|=k-3} |F(A)|` with each side computed
/// independently.
pub fn check_link_identity(family: &SetFamily, k: usize) -> Result<LinkIdentity> {
    if k < 3 {
        return arg("link identity needs k >= 3");
    }
    require_k_uniform(family, k)?;
    let lhs = binomial(k as u64, (k - 3) as u64) * family.len() as u128;
    let mut rhs = 0u128;
    for a in subsets_of_ground(family.ground_size(), k - 3) {
        rhs += link(family, &a)?.len() as u128;
    }
    Ok(LinkIdentity {
        lhs,
        rhs,
        holds: lhs == rhs,
    })
}

/// The three quantities of the link-based application chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApplicationBound {
    /// `c_{k,k-2}(F) · (k-2)`.
    pub lhs: u128,
    /// `Σ_{|A|=k-3} op(F(A))`.
    pub mid: u128,
    /// `3 · s · C(k,3)`.
    pub rhs: u128,
    /// `lhs >= mid`; unconditional.
    pub lhs_ge_mid: bool,
    /// `mid >= rhs`; only expected under the odd-supersaturation conjecture.
    pub mid_ge_rhs: bool,
}

pub fn check_application_bound(family: &SetFamily, k: usize, s: u64) -> Result<ApplicationBound> {
    if k < 4 {
        return arg("application bound needs k >= 4");
    }
    require_k_uniform(family, k)?;
    let lhs = c_kt(family, k - 2)? as u128 * (k as u128 - 2);
    let mut mid = 0u128;
    for a in subsets_of_ground(family.ground_size(), k - 3) {
        mid += op(&link(family, &a)?, false).op_count as u128;
    }
    let rhs = 3 * s as u128 * binomial(k as u64, 3);
    Ok(ApplicationBound {
        lhs,
        mid,
        rhs,
        lhs_ge_mid: lhs >= mid,
        mid_ge_rhs: mid >= rhs,
    })
}

fn pairwise_even(members: &[BitSubset]) -> bool {
    (0..members.len()).all(|i| odd_partners(members, i).next().is_none())
}

/// Even member sizes and even pairwise intersections.
pub fn is_eventown(family: &SetFamily) -> bool {
    family.members().iter().all(|m| m.cardinality() % 2 == 0) && pairwise_even(family.members())
}

/// Odd member sizes and even pairwise intersections.
pub fn is_oddtown(family: &SetFamily) -> bool {
    family.members().iter().all(|m| m.cardinality() % 2 == 1) && pairwise_even(family.members())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventownStrategy {
    /// Maximal with respect to the family: nothing else can be added.
    Greedy,
    /// Maximum size, by exhaustive clique search.
    Exact,
}

/// An eventown subfamily of an even-sized family, in member order.
///
/// `Greedy` scans members in order and keeps each one compatible with all
/// kept so far. `Exact` returns a largest eventown subfamily (the
/// lexicographically first by member index among the largest) and refuses
/// families above `cap` members.
pub fn maximal_eventown_subfamily(
    family: &SetFamily,
    strategy: EventownStrategy,
    cap: usize,
) -> Result<SetFamily> {
    if let Some((i, m)) = family
        .members()
        .iter()
        .enumerate()
        .find(|(_, m)| m.cardinality() % 2 == 1)
    {
        return Err(Error::OddMember {
            member: i + 1,
            size: m.cardinality(),
        });
    }
    let members = family.members();
    let chosen: Vec<usize> = match strategy {
        EventownStrategy::Greedy => {
            let mut kept: Vec<usize> = Vec::new();
            for (i, m) in members.iter().enumerate() {
                if kept.iter().all(|&j| !members[j].parity_with(m)) {
                    kept.push(i);
                }
            }
            kept
        }
        EventownStrategy::Exact => {
            if members.len() > cap {
                return Err(Error::Resource(format!(
                    "exact eventown search over {} members exceeds cap {cap}",
                    members.len()
                )));
            }
            max_clique(members.len(), |i, j| !members[i].parity_with(&members[j]))
        }
    };
    family.subfamily(&chosen)
}

/// Lexicographically first maximum clique, by simple branch and bound.
fn max_clique(len: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let words = len.div_ceil(64).max(1);
    let mut adj = vec![0u64; len * words];
    for i in 0..len {
        for j in 0..len {
            if i != j && adjacent(i, j) {
                adj[i * words + j / 64] |= 1 << (j % 64);
            }
        }
    }

    struct Ctx<'a> {
        adj: &'a [u64],
        words: usize,
        best: Vec<usize>,
        current: Vec<usize>,
    }

    fn count(bits: &[u64]) -> usize {
        bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn expand(ctx: &mut Ctx<'_>, candidates: Vec<u64>) {
        if ctx.current.len() > ctx.best.len() {
            ctx.best = ctx.current.clone();
        }
        let mut cand = candidates;
        while let Some(v) = first_bit(&cand) {
            if ctx.current.len() + count(&cand) <= ctx.best.len() {
                return;
            }
            cand[v / 64] &= !(1 << (v % 64));
            let row = &ctx.adj[v * ctx.words..(v + 1) * ctx.words];
            let next: Vec<u64> = cand.iter().zip(row).map(|(a, b)| a & b).collect();
            ctx.current.push(v);
            expand(ctx, next);
            ctx.current.pop();
        }
    }

    fn first_bit(bits: &[u64]) -> Option<usize> {
        bits.iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    let mut all = vec![0u64; words];
    for v in 0..len {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut ctx = Ctx {
        adj: &adj,
        words,
        best: Vec::new(),
        current: Vec::new(),
    };
    expand(&mut ctx, all);
    ctx.best
}

/// True iff `|X_i ∩ Y_i|` is odd for every `i` and `|X_i ∩ Y_j|` is even for
/// every `i != j`.
pub fn bipartite_oddtown_check(xs: &SetFamily, ys: &SetFamily) -> Result<bool> {
    if xs.len() != ys.len() {
        return arg(format!(
            "bipartite check needs equal lengths, got {} and {}",
            xs.len(),
            ys.len()
        ));
    }
    if xs.ground_size() != ys.ground_size() {
        return Err(Error::DimensionMismatch {
            expected: xs.ground_size(),
            found: ys.ground_size(),
        });
    }
    Ok(xs.members().iter().enumerate().all(|(i, x)| {
        ys.members()
            .iter()
            .enumerate()
            .all(|(j, y)| x.parity_with(y) == (i == j))
    }))
}
