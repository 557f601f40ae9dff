//! Explicit families: the twin extremal eventown families and their
//! augmentations, the singleton and disjoint-`K_4^(3)` oddtown families, the
//! small named examples, and Steiner systems.
//!
//! Generators refuse parameters outside the ranges where their odd-pair
//! counts are known, rather than quietly producing something else.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combin::{binomial, Combinations};
use crate::error::{arg, Error, Result};
use crate::format;
use crate::gf2::BitSubset;
use crate::setfamily::{shadow, SetFamily};

/// How augmenting members are picked when any choice would do.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Selector {
    /// The smallest candidates in [`BitSubset`] order.
    #[default]
    Lexicographic,
    /// A uniformly random choice driven by the seed.
    Seeded(u64),
}

impl Selector {
    fn pick(self, mut pool: Vec<BitSubset>, s: usize) -> Vec<BitSubset> {
        pool.sort();
        match self {
            Selector::Lexicographic => pool.truncate(s),
            Selector::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut idx = sample(&mut rng, pool.len(), s).into_vec();
                idx.sort_unstable();
                pool = idx.into_iter().map(|i| pool[i].clone()).collect();
            }
        }
        pool
    }
}

fn require_div4(n: usize, what: &str) -> Result<()> {
    if n == 0 || !n.is_multiple_of(4) {
        return arg(format!("{what} needs n divisible by 4, got n = {n}"));
    }
    Ok(())
}

/// 1-based label of point `r` (1..=4) in block `i` (1-based).
fn point(i: usize, r: usize) -> usize {
    4 * (i - 1) + r
}

fn unions_of(n: usize, blocks: &[BitSubset]) -> SetFamily {
    let mut members: Vec<BitSubset> = (0u64..1 << blocks.len())
        .map(|mask| {
            let mut acc = BitSubset::empty(n);
            for (j, b) in blocks.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    acc.xor_assign(b);
                }
            }
            acc
        })
        .collect();
    members.sort();
    SetFamily::new(n, members).expect("disjoint block unions are distinct")
}

/// The two extremal eventown families built from pairs inside each 4-block:
/// `a` uses the pairs `{x1,x2},{x3,x4}`, `b` the pairs `{x1,x4},{x2,x3}`.
/// Both contain every union of pairs, `2^(n/2)` sets each, sorted.
pub fn eventown_pair(n: usize) -> Result<(SetFamily, SetFamily)> {
    require_div4(n, "eventown pair")?;
    let l = n / 4;
    let mut a_blocks = Vec::with_capacity(2 * l);
    let mut b_blocks = Vec::with_capacity(2 * l);
    for i in 1..=l {
        let pair = |r1, r2| BitSubset::from_labels(n, &[point(i, r1), point(i, r2)]).unwrap();
        a_blocks.push(pair(1, 2));
        a_blocks.push(pair(3, 4));
        b_blocks.push(pair(1, 4));
        b_blocks.push(pair(2, 3));
    }
    Ok((unions_of(n, &a_blocks), unions_of(n, &b_blocks)))
}

/// The members of `b` that are not in `a`.
pub fn eventown_extras(n: usize) -> Result<Vec<BitSubset>> {
    let (a, b) = eventown_pair(n)?;
    Ok(b.members()
        .iter()
        .filter(|x| !a.contains(x))
        .cloned()
        .collect())
}

/// Family `a` of [`eventown_pair`] plus `s` members of `b \ a`; it has
/// `2^(n/2) + s` members and `s · 2^(n/2 - 1)` odd pairs.
pub fn eventown_plus(n: usize, s: usize, selector: Selector) -> Result<SetFamily> {
    require_div4(n, "eventown_plus")?;
    let (k, l) = (n / 2, n / 4);
    let max_s = (1usize << k) - (1usize << l);
    if s == 0 || s > max_s {
        return arg(format!(
            "eventown_plus needs 1 <= s <= {max_s} at n = {n}, got s = {s}"
        ));
    }
    let (mut fam, _) = eventown_pair(n)?;
    for x in selector.pick(eventown_extras(n)?, s) {
        fam.push(x)?;
    }
    Ok(fam)
}

/// `{{1}, ..., {n}}`.
pub fn singletons(n: usize) -> Result<SetFamily> {
    if n == 0 {
        return Err(Error::EmptyGround);
    }
    SetFamily::new(
        n,
        (0..n)
            .map(|i| BitSubset::from_indices(n, [i]).unwrap())
            .collect(),
    )
}

/// All four triples inside each block `{4i-3, ..., 4i}`, sorted.
pub fn disjoint_k4_triples(n: usize) -> Result<SetFamily> {
    require_div4(n, "disjoint K4 triples")?;
    let mut members = Vec::with_capacity(n);
    for i in 1..=n / 4 {
        for skip in 1..=4 {
            let labels: Vec<usize> = (1..=4)
                .filter(|&r| r != skip)
                .map(|r| point(i, r))
                .collect();
            members.push(BitSubset::from_labels(n, &labels)?);
        }
    }
    members.sort();
    SetFamily::new(n, members)
}

/// Singletons plus `s` triples from [`disjoint_k4_triples`]; `n + s`
/// members with `3s` odd pairs.
pub fn oddtown_plus(n: usize, s: usize, selector: Selector) -> Result<SetFamily> {
    require_div4(n, "oddtown_plus")?;
    if s == 0 || s > n {
        return arg(format!("oddtown_plus needs 1 <= s <= {n}, got s = {s}"));
    }
    let mut fam = singletons(n)?;
    for x in selector.pick(disjoint_k4_triples(n)?.members().to_vec(), s) {
        fam.push(x)?;
    }
    Ok(fam)
}

/// Six triples over `[5]` with three odd pairs and no oddtown subfamily of
/// size five.
pub fn example_x5() -> SetFamily {
    SetFamily::from_labels(
        5,
        &[
            &[1, 2, 3],
            &[1, 4, 5],
            &[1, 2, 4],
            &[1, 3, 5],
            &[1, 3, 4],
            &[1, 2, 5],
        ],
    )
    .unwrap()
}

/// All triples of `[4]` plus `{1,3,5}` and `{3,4,5}`: six triples over `[5]`
/// with four odd pairs.
pub fn example_f1() -> SetFamily {
    SetFamily::from_labels(
        5,
        &[
            &[1, 2, 3],
            &[1, 2, 4],
            &[1, 3, 4],
            &[2, 3, 4],
            &[1, 3, 5],
            &[3, 4, 5],
        ],
    )
    .unwrap()
}

/// For odd `k >= 5`: the `k`-subsets of `[k+1]`, the `k`-subsets of
/// `[k+2, 2k+2]`, and `[k-2] ∪ {k+2, k+3}`. Ground set `[2k+2]`, `2k+3`
/// members, five odd pairs.
pub fn example_f2(k: usize) -> Result<SetFamily> {
    if k < 5 || k.is_multiple_of(2) {
        return arg(format!("example_f2 needs odd k >= 5, got k = {k}"));
    }
    let n = 2 * k + 2;
    let mut members = Vec::with_capacity(n + 1);
    for offset in [0, k + 1] {
        for skip in 0..=k {
            members.push(BitSubset::from_indices(
                n,
                (0..=k).filter(|&r| r != skip).map(|r| offset + r),
            )?);
        }
    }
    let mut extra: Vec<usize> = (1..=k - 2).collect();
    extra.extend([k + 2, k + 3]);
    members.push(BitSubset::from_labels(n, &extra)?);
    SetFamily::new(n, members)
}

/// A validated Steiner system `S(n, k, t)`: every `t`-subset of `[n]` lies in
/// exactly one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerSystem {
    n: usize,
    k: usize,
    t: usize,
    blocks: SetFamily,
}

impl SteinerSystem {
    /// Validates exhaustively over all `C(n, t)` subsets. The first
    /// offending `t`-set (in lexicographic order of its elements) is named
    /// in the error.
    pub fn new(n: usize, k: usize, t: usize, blocks: SetFamily) -> Result<Self> {
        if !(t < k && k <= n) {
            return arg(format!(
                "Steiner parameters need t < k <= n, got ({n},{k},{t})"
            ));
        }
        if blocks.ground_size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: blocks.ground_size(),
            });
        }
        if let Some((i, b)) = blocks
            .members()
            .iter()
            .enumerate()
            .find(|(_, b)| b.cardinality() != k)
        {
            return Err(Error::NotUniform {
                member: i + 1,
                expected: k,
                found: b.cardinality(),
            });
        }
        let mut cover: HashMap<BitSubset, usize> = HashMap::new();
        for b in blocks.members() {
            let elems: Vec<usize> = b.iter().collect();
            for c in Combinations::new(k, t) {
                let tset = BitSubset::from_indices(n, c.iter().map(|&i| elems[i]))?;
                *cover.entry(tset).or_default() += 1;
            }
        }
        for c in Combinations::new(n, t) {
            let tset = BitSubset::from_indices(n, c)?;
            let count = cover.get(&tset).copied().unwrap_or(0);
            if count != 1 {
                return Err(Error::SteinerCover {
                    n,
                    k,
                    t,
                    tset: tset.to_string(),
                    count,
                });
            }
        }
        Ok(Self { n, k, t, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn blocks(&self) -> &SetFamily {
        &self.blocks
    }

    /// The `j`-shadow of the blocks.
    pub fn shadow(&self, j: usize) -> Result<SetFamily> {
        shadow(&self.blocks, j)
    }

    /// The `(k-1)`-sets that meet some block in `k-2` points and are not in
    /// the `(k-1)`-shadow; sorted.
    ///
    /// For `S(n, k+1, k-2)` these are the candidate additions to the shadow
    /// construction whose pair counts are studied in the `t = k-2` problem.
    pub fn augmenting_sets(&self) -> Result<Vec<BitSubset>> {
        let j = self.k - 1;
        let shadow = self.shadow(j)?;
        let in_shadow: BTreeSet<&BitSubset> = shadow.members().iter().collect();
        let mut out = BTreeSet::new();
        for b in self.blocks.members() {
            let elems: Vec<usize> = b.iter().collect();
            for c in Combinations::new(elems.len(), j - 1) {
                for x in (0..self.n).filter(|&x| !b.contains(x)) {
                    let a =
                        BitSubset::from_indices(self.n, c.iter().map(|&i| elems[i]).chain([x]))?;
                    if !in_shadow.contains(&a) {
                        out.insert(a);
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// `S(n, 4, 1)`: the partition of `[n]` into consecutive 4-blocks.
pub fn steiner_partition(n: usize) -> Result<SteinerSystem> {
    require_div4(n, "Steiner partition")?;
    let blocks = (1..=n / 4)
        .map(|i| BitSubset::from_labels(n, &[point(i, 1), point(i, 2), point(i, 3), point(i, 4)]))
        .collect::<Result<Vec<_>>>()?;
    SteinerSystem::new(n, 4, 1, SetFamily::new(n, blocks)?)
}

/// Reads a Steiner block file and validates it against the expected
/// parameters.
pub fn load_steiner(path: &Path, n: usize, k: usize, t: usize) -> Result<SteinerSystem> {
    let sys = read_steiner(path)?;
    if (sys.n, sys.k, sys.t) != (n, k, t) {
        return arg(format!(
            "{} declares S({},{},{}), expected S({n},{k},{t})",
            path.display(),
            sys.n,
            sys.k,
            sys.t
        ));
    }
    Ok(sys)
}

/// Reads a Steiner block file using the parameters from its header.
pub fn read_steiner(path: &Path) -> Result<SteinerSystem> {
    let text = std::fs::read_to_string(path)?;
    let (n, k, t, blocks) = format::parse_steiner(&text, Some(path))?;
    SteinerSystem::new(n, k, t, blocks)
}

/// Size of the `k`-shadow of an `S(n, k+1, k-2)`,
/// `6 / (k(k-1)) · C(n, k-2)`, when that is an integer.
pub fn steiner_shadow_size(n: usize, k: usize) -> Option<u128> {
    if k < 2 {
        return None;
    }
    let num = 6 * binomial(n as u64, (k - 2) as u64);
    let den = (k * (k - 1)) as u128;
    num.is_multiple_of(den).then(|| num / den)
}
