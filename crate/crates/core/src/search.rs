//! Exact and heuristic minimization of pair statistics over families of a
//! prescribed size.
//!
//! A search fixes a candidate pool (all even-sized, all odd-sized, or all
//! `k`-sized subsets of `[n]`, sorted by [`BitSubset`] order) and a symmetric
//! conflict relation on it (odd intersection for `op`, intersection of size
//! exactly `t` for `c_{k,t}`). A family is an increasing index combination
//! of `m` pool members; its objective is the number of conflicting pairs.
//!
//! Each pool member carries a precomputed conflict row, so the number of
//! conflicts between a candidate and the current partial family is one
//! masked popcount per word.
//!
//! # Determinism
//!
//! Work is split into prefixes of the combination tree. Every prefix is
//! explored depth-first in lexicographic order. A subtree is cut when its
//! lower bound is strictly above the shared incumbent value, or at least the
//! best value already found inside the same prefix (which is
//! lexicographically earlier). The lexicographically least optimal witness
//! therefore survives in whichever prefix holds it, and the final reduction
//! picks the least `(value, indices)` pair. Results do not depend on the
//! thread count or on scheduling.

use std::cmp::Ordering as CmpOrdering;
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::combin::{binomial, Combinations};
use crate::constructions::{eventown_pair, eventown_plus, oddtown_plus, singletons, Selector};
use crate::error::{arg, Error, Result};
use crate::gf2::BitSubset;
use crate::setfamily::SetFamily;

/// Largest candidate pool accepted (the conflict matrix is pool² bits).
pub const MAX_POOL: usize = 1 << 14;

/// Default node budget.
pub const DEFAULT_MAX_NODES: u64 = 1_000_000_000;

/// Default wall-clock budget.
pub const DEFAULT_MAX_TIME: Duration = Duration::from_secs(600);

/// Environment variables overriding the default budgets.
pub const ENV_MAX_NODES: &str = "ODDTOWN_BUDGET_NODES";
pub const ENV_MAX_SECS: &str = "ODDTOWN_BUDGET_SECS";

const FLUSH_EVERY: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyClass {
    /// Even-sized subsets, ∅ included.
    Even,
    Odd,
    /// All subsets of the given size.
    Uniform(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Pairs with odd intersection.
    Op,
    /// Pairs with intersection of exactly this size.
    Ckt(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Plain enumeration of every combination.
    Exhaustive,
    BranchAndBound,
    /// Seeded hill climbing over single-member swaps; never certifies
    /// optimality.
    LocalSearch {
        seed: u64,
        restarts: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: DEFAULT_MAX_NODES,
            max_time: DEFAULT_MAX_TIME,
        }
    }
}

impl Budget {
    /// Defaults, overridden by `ODDTOWN_BUDGET_NODES` / `ODDTOWN_BUDGET_SECS`
    /// when set to valid integers.
    pub fn from_env() -> Self {
        let mut b = Self::default();
        if let Some(v) = std::env::var(ENV_MAX_NODES)
            .ok()
            .and_then(|v| v.parse().ok())
        {
            b.max_nodes = v;
        }
        if let Some(v) = std::env::var(ENV_MAX_SECS)
            .ok()
            .and_then(|v| v.parse().ok())
        {
            b.max_time = Duration::from_secs(v);
        }
        b
    }
}

/// Optional lower bounds used by branch and bound. Both are sound; either
/// can be switched off without changing the optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    /// Every completion adds at least the sum of the smallest per-candidate
    /// conflict counts against the fixed partial family.
    pub conflict: bool,
    /// For `op`: a family of size `m` has at least `m - M` odd pairs, where
    /// `M` is the largest eventown (`2^⌊n/2⌋`) or oddtown (`n`) family size
    /// for the parity of the class.
    pub deficiency: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            conflict: true,
            deficiency: true,
        }
    }
}

/// Parameters of one search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    pub m: usize,
    pub class: FamilyClass,
    pub objective: Objective,
    pub mode: Mode,
    pub budget: Budget,
    pub threads: usize,
    /// Restrict to families containing a fixed representative of the
    /// smallest member size; sound because the objectives are invariant
    /// under permutations of the ground set.
    pub symmetry: bool,
    pub bounds: Bounds,
}

impl SearchSpec {
    /// Branch and bound on `op`, one thread, default budgets; symmetry
    /// reduction on for even classes with `n >= 6`.
    pub fn new(n: usize, m: usize, class: FamilyClass) -> Self {
        Self {
            n,
            m,
            class,
            objective: Objective::Op,
            mode: Mode::BranchAndBound,
            budget: Budget::from_env(),
            threads: 1,
            symmetry: matches!(class, FamilyClass::Even) && n >= 6,
            bounds: Bounds::default(),
        }
    }

    pub fn objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn symmetry(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }

    pub fn bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Number of subsets of `[n]` in the class.
    pub fn class_size(&self) -> u128 {
        match self.class {
            FamilyClass::Even | FamilyClass::Odd => 1u128 << (self.n - 1),
            FamilyClass::Uniform(k) => binomial(self.n as u64, k as u64),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 64 {
            return arg(format!("search supports 1 <= n <= 64, got n = {}", self.n));
        }
        if self.m == 0 {
            return arg("family size m must be at least 1");
        }
        if self.threads == 0 {
            return arg("thread count must be at least 1");
        }
        if let FamilyClass::Uniform(k) = self.class {
            if k > self.n {
                return arg(format!("uniform size k = {k} exceeds n = {}", self.n));
            }
        }
        match (self.objective, self.class) {
            (Objective::Op, _) => {}
            (Objective::Ckt(t), FamilyClass::Uniform(k)) if t < k => {}
            (Objective::Ckt(t), FamilyClass::Uniform(k)) => {
                return arg(format!("c(k,t) needs t < k, got k = {k}, t = {t}"))
            }
            (Objective::Ckt(_), _) => return arg("c(k,t) objective needs a uniform class"),
        }
        let size = self.class_size();
        if self.m as u128 > size {
            return arg(format!(
                "m = {} exceeds the {size} subsets available in the class",
                self.m
            ));
        }
        if size > MAX_POOL as u128 {
            return Err(Error::Resource(format!(
                "candidate pool of {size} sets exceeds the limit {MAX_POOL}"
            )));
        }
        Ok(())
    }

    /// Echo of the spec for reports.
    pub fn to_json(&self) -> Value {
        let class = match self.class {
            FamilyClass::Even => json!("even"),
            FamilyClass::Odd => json!("odd"),
            FamilyClass::Uniform(k) => json!({ "uniform": k }),
        };
        let objective = match self.objective {
            Objective::Op => json!("op"),
            Objective::Ckt(t) => json!({ "ckt": t }),
        };
        let mode = match self.mode {
            Mode::Exhaustive => json!("exhaustive"),
            Mode::BranchAndBound => json!("bnb"),
            Mode::LocalSearch { seed, restarts } => {
                json!({ "local": { "seed": seed, "restarts": restarts } })
            }
        };
        json!({
            "n": self.n,
            "m": self.m,
            "class": class,
            "objective": objective,
            "mode": mode,
            "threads": self.threads,
            "symmetry": self.symmetry,
            "bounds": self.bounds,
            "budget": {
                "max_nodes": self.budget.max_nodes,
                "max_secs": self.budget.max_time.as_secs_f64(),
            },
        })
    }
}

/// Outcome of a search.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_value: u64,
    pub witness: SetFamily,
    /// The search space was covered completely (directly or by sound
    /// pruning), so `best_value` is the true minimum.
    pub optimal: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    pub spec: SearchSpec,
}

impl SearchResult {
    /// The result document: `best_value`, `witness` (1-based label lists),
    /// `optimal`, `nodes_explored`, `elapsed_ms`, `spec`.
    pub fn to_json(&self) -> Value {
        json!({
            "best_value": self.best_value,
            "witness": witness_labels(&self.witness),
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "spec": self.spec.to_json(),
        })
    }
}

fn witness_labels(f: &SetFamily) -> Vec<Vec<usize>> {
    f.members().iter().map(BitSubset::labels).collect()
}

/// The candidate pool and its conflict matrix.
pub struct Pool {
    n: usize,
    sets: Vec<BitSubset>,
    stride: usize,
    rows: Vec<u64>,
}

impl Pool {
    pub fn build(n: usize, class: FamilyClass, objective: Objective) -> Result<Self> {
        let mut sets: Vec<BitSubset> = match class {
            FamilyClass::Even | FamilyClass::Odd => {
                let want = u32::from(matches!(class, FamilyClass::Odd));
                (0u64..1 << n)
                    .filter(|b| b.count_ones() % 2 == want)
                    .map(|b| BitSubset::from_bits(n, b))
                    .collect::<Result<_>>()?
            }
            FamilyClass::Uniform(k) => Combinations::new(n, k)
                .map(|c| BitSubset::from_indices(n, c))
                .collect::<Result<_>>()?,
        };
        sets.sort();
        let len = sets.len();
        if len > MAX_POOL {
            return Err(Error::Resource(format!(
                "pool of {len} sets exceeds {MAX_POOL}"
            )));
        }
        let stride = len.div_ceil(64).max(1);
        let mut rows = vec![0u64; len * stride];
        for i in 0..len {
            for j in i + 1..len {
                let hit = match objective {
                    Objective::Op => sets[i].parity_with(&sets[j]),
                    Objective::Ckt(t) => sets[i].intersection_size(&sets[j]) == t,
                };
                if hit {
                    rows[i * stride + j / 64] |= 1 << (j % 64);
                    rows[j * stride + i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(Self {
            n,
            sets,
            stride,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[BitSubset] {
        &self.sets
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn conflicts(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    /// Conflicts between candidate `c` and the members marked in `chosen`.
    #[inline]
    fn conflicts_with(&self, c: usize, chosen: &[u64]) -> u32 {
        self.row(c)
            .iter()
            .zip(chosen)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    pub fn index_of(&self, set: &BitSubset) -> Option<usize> {
        self.sets.binary_search(set).ok()
    }

    /// Objective value of a family given by pool indices.
    pub fn value_of(&self, picks: &[usize]) -> u64 {
        let mut v = 0;
        for (a, &i) in picks.iter().enumerate() {
            for &j in &picks[a + 1..] {
                v += u64::from(self.conflicts(i, j));
            }
        }
        v
    }

    fn family(&self, picks: &[usize]) -> SetFamily {
        let mut picks = picks.to_vec();
        picks.sort_unstable();
        SetFamily::new(
            self.n,
            picks.iter().map(|&i| self.sets[i].clone()).collect(),
        )
        .expect("distinct pool members")
    }
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn clear_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] &= !(1 << (i % 64));
}

fn has_bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

/// Set bits at positions `>= start`, increasing.
fn bits_from(bits: &[u64], start: usize) -> impl Iterator<Item = usize> + '_ {
    let first = start / 64;
    bits.iter()
        .enumerate()
        .skip(first)
        .flat_map(move |(wi, &w)| {
            let mut w = if wi == first && !start.is_multiple_of(64) {
                w & (u64::MAX << (start % 64))
            } else {
                w
            };
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
}

fn count_from(bits: &[u64], start: usize) -> usize {
    bits_from(bits, start).count()
}

/// A slice of the search space: families containing `forced` whose other
/// members come from `allowed`.
#[derive(Clone, Debug)]
struct Branch {
    forced: Vec<usize>,
    allowed: Vec<u64>,
}

impl Branch {
    fn free(&self, m: usize) -> usize {
        m - self.forced.len()
    }
}

fn branches(pool: &Pool, m: usize, symmetry: bool) -> Vec<Branch> {
    let stride = pool.stride;
    let mut out = Vec::new();
    if !symmetry {
        let mut allowed = vec![0u64; stride];
        for i in 0..pool.len() {
            set_bit(&mut allowed, i);
        }
        out.push(Branch {
            forced: Vec::new(),
            allowed,
        });
        return out;
    }
    // Split by the smallest member size c. Any family whose smallest member
    // has size c can be permuted so that it contains {1, ..., c}.
    let mut sizes: Vec<usize> = pool.sets.iter().map(BitSubset::cardinality).collect();
    sizes.sort_unstable();
    sizes.dedup();
    for c in sizes {
        let rep = BitSubset::from_indices(pool.n, 0..c).expect("c <= n");
        let Some(r) = pool.index_of(&rep) else {
            continue;
        };
        let mut allowed = vec![0u64; stride];
        let mut count = 0;
        for (i, s) in pool.sets.iter().enumerate() {
            if i != r && s.cardinality() >= c {
                set_bit(&mut allowed, i);
                count += 1;
            }
        }
        if count + 1 >= m {
            out.push(Branch {
                forced: vec![r],
                allowed,
            });
        }
    }
    out
}

/// One unit of parallel work: a branch and a fixed prefix of free picks.
#[derive(Clone, Debug)]
struct Item {
    branch: usize,
    prefix: Vec<usize>,
}

const SPLIT_DEPTH: usize = 2;

/// Whether an item was fully explored, and its best `(value, indices)`.
type ItemOutcome = (bool, Option<(u64, Vec<usize>)>);

fn work_items(branches: &[Branch], m: usize) -> Vec<Item> {
    let mut items = Vec::new();
    for (bi, b) in branches.iter().enumerate() {
        let free = b.free(m);
        let d = free.min(SPLIT_DEPTH);
        let allowed: Vec<usize> = bits_from(&b.allowed, 0).collect();
        for c in Combinations::new(allowed.len(), d) {
            let last = c.last().copied();
            let after = last.map_or(allowed.len(), |l| allowed.len() - l - 1);
            if after + d < free {
                continue;
            }
            items.push(Item {
                branch: bi,
                prefix: c.iter().map(|&i| allowed[i]).collect(),
            });
        }
    }
    items
}

struct Shared<'a> {
    pool: &'a Pool,
    m: usize,
    prune: bool,
    conflict_bound: bool,
    floor: u64,
    global_best: AtomicU64,
    nodes: AtomicU64,
    aborted: AtomicBool,
    max_nodes: u64,
    flush_every: u64,
    deadline: Instant,
}

struct Worker<'s, 'p> {
    shared: &'s Shared<'p>,
    chosen: Vec<u64>,
    picks: Vec<usize>,
    best: u64,
    witness: Option<Vec<usize>>,
    pending: u64,
    scratch: Vec<Vec<(usize, u32)>>,
    select: Vec<u32>,
}

impl<'s, 'p> Worker<'s, 'p> {
    fn new(shared: &'s Shared<'p>) -> Self {
        Self {
            shared,
            chosen: vec![0; shared.pool.stride],
            picks: Vec::with_capacity(shared.m),
            best: u64::MAX,
            witness: None,
            pending: 0,
            scratch: vec![Vec::new(); shared.m + 1],
            select: Vec::new(),
        }
    }

    fn forget_best(&mut self) {
        self.best = u64::MAX;
        self.witness = None;
    }

    fn flush(&mut self) {
        let s = self.shared;
        let total = s.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if total >= s.max_nodes || Instant::now() >= s.deadline {
            s.aborted.store(true, Ordering::Relaxed);
        }
    }

    #[inline]
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= self.shared.flush_every {
            self.flush();
        }
        self.shared.aborted.load(Ordering::Relaxed)
    }

    #[inline]
    fn cut(&self, lb: u64) -> bool {
        self.shared.prune
            && (lb >= self.best || lb > self.shared.global_best.load(Ordering::Relaxed))
    }

    /// Explores one item. Returns false if the budget ran out inside it.
    fn run(&mut self, branch: &Branch, prefix: &[usize]) -> bool {
        self.chosen.iter_mut().for_each(|w| *w = 0);
        self.picks.clear();
        for &i in branch.forced.iter().chain(prefix) {
            set_bit(&mut self.chosen, i);
            self.picks.push(i);
        }
        let value = self.shared.pool.value_of(&self.picks);
        let start = prefix.last().map_or(0, |&l| l + 1);
        let remaining = branch.free(self.shared.m) - prefix.len();
        self.dfs(&branch.allowed, value, start, remaining, 0);
        !self.shared.aborted.load(Ordering::Relaxed)
    }

    fn dfs(&mut self, allowed: &[u64], value: u64, start: usize, remaining: usize, depth: usize) {
        if self.tick() {
            return;
        }
        let shared = self.shared;
        if remaining == 0 {
            if value < self.best {
                self.best = value;
                let mut w = self.picks.clone();
                w.sort_unstable();
                self.witness = Some(w);
                shared.global_best.fetch_min(value, Ordering::Relaxed);
            }
            return;
        }
        let mut cands = std::mem::take(&mut self.scratch[depth]);
        cands.clear();
        cands.extend(
            bits_from(allowed, start).map(|c| (c, shared.pool.conflicts_with(c, &self.chosen))),
        );
        if cands.len() < remaining {
            self.scratch[depth] = cands;
            return;
        }
        if shared.prune {
            let mut lb = value;
            if shared.conflict_bound {
                self.select.clear();
                self.select.extend(cands.iter().map(|&(_, k)| k));
                if remaining < self.select.len() {
                    self.select.select_nth_unstable(remaining - 1);
                }
                lb += self.select[..remaining]
                    .iter()
                    .map(|&k| u64::from(k))
                    .sum::<u64>();
            }
            if self.cut(lb.max(shared.floor)) {
                self.scratch[depth] = cands;
                return;
            }
        }
        let last = cands.len() - remaining;
        for &(c, k) in &cands[..=last] {
            let child = value + u64::from(k);
            if self.cut(child.max(shared.floor)) {
                continue;
            }
            set_bit(&mut self.chosen, c);
            self.picks.push(c);
            self.dfs(allowed, child, c + 1, remaining - 1, depth + 1);
            self.picks.pop();
            clear_bit(&mut self.chosen, c);
            if shared.aborted.load(Ordering::Relaxed) {
                break;
            }
        }
        self.scratch[depth] = cands;
    }
}

/// Lower bound on the objective of any family in the class of size `m`.
fn deficiency_floor(spec: &SearchSpec) -> u64 {
    if spec.objective != Objective::Op {
        return 0;
    }
    let eventown_max = || 1u64.checked_shl((spec.n / 2) as u32).unwrap_or(u64::MAX);
    let max_free = match spec.class {
        FamilyClass::Even => eventown_max(),
        FamilyClass::Odd => spec.n as u64,
        FamilyClass::Uniform(k) if k % 2 == 1 => spec.n as u64,
        FamilyClass::Uniform(_) => eventown_max(),
    };
    (spec.m as u64).saturating_sub(max_free)
}

/// Progress record for resuming an interrupted exact search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    /// Echo of the spec the checkpoint belongs to.
    pub spec: Value,
    /// Indices of fully explored work items.
    pub completed: Vec<usize>,
    pub incumbent: Option<Incumbent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incumbent {
    pub value: u64,
    pub witness: Vec<Vec<usize>>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: Some(path.to_path_buf()),
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Minimum of `op` over the spec's class.
pub fn min_op(spec: &SearchSpec) -> Result<SearchResult> {
    if spec.objective != Objective::Op {
        return arg("min_op needs the op objective");
    }
    run(spec)
}

/// Minimum of `c_{k,t}` over a `k`-uniform class.
pub fn min_ckt(spec: &SearchSpec) -> Result<SearchResult> {
    if !matches!(spec.objective, Objective::Ckt(_)) {
        return arg("min_ckt needs a c(k,t) objective");
    }
    run(spec)
}

/// Hill climbing with `restarts` seeded starts. The first start is an
/// explicit construction when one of the right size exists. The result is
/// never marked optimal.
pub fn local_search(spec: &SearchSpec, seed: u64, restarts: usize) -> Result<SearchResult> {
    run(&spec.clone().mode(Mode::LocalSearch { seed, restarts }))
}

/// Runs a search of any mode and objective.
pub fn run(spec: &SearchSpec) -> Result<SearchResult> {
    run_with_checkpoint(spec, None).map(|(r, _)| r)
}

/// Runs an exact search, optionally resuming from a checkpoint. The returned
/// checkpoint lists the work items finished in this and earlier runs.
pub fn run_with_checkpoint(
    spec: &SearchSpec,
    resume: Option<&Checkpoint>,
) -> Result<(SearchResult, Checkpoint)> {
    spec.validate()?;
    let started = Instant::now();
    let pool = Pool::build(spec.n, spec.class, spec.objective)?;
    if let Mode::LocalSearch { seed, restarts } = spec.mode {
        let r = run_local(spec, &pool, seed, restarts, started)?;
        let cp = Checkpoint {
            spec: spec.to_json(),
            completed: Vec::new(),
            incumbent: Some(Incumbent {
                value: r.best_value,
                witness: witness_labels(&r.witness),
            }),
        };
        return Ok((r, cp));
    }

    let branches = branches(&pool, spec.m, spec.symmetry);
    if branches.is_empty() {
        return arg("no family of the requested size survives the symmetry reduction");
    }
    let exhaustive = spec.mode == Mode::Exhaustive;
    if exhaustive {
        let leaves: u128 = branches
            .iter()
            .map(|b| binomial(count_from(&b.allowed, 0) as u64, b.free(spec.m) as u64))
            .sum();
        if leaves > spec.budget.max_nodes as u128 {
            return Err(Error::Resource(format!(
                "exhaustive enumeration of {leaves} families exceeds the node budget {}",
                spec.budget.max_nodes
            )));
        }
    }

    // Seed with the first combination of the first branch.
    let b0 = &branches[0];
    let mut seed_picks = b0.forced.clone();
    seed_picks.extend(bits_from(&b0.allowed, 0).take(b0.free(spec.m)));
    seed_picks.sort_unstable();
    let mut candidates: Vec<(u64, Vec<usize>)> = vec![(pool.value_of(&seed_picks), seed_picks)];

    let spec_echo = spec.to_json();
    if let Some(cp) = resume {
        if cp.spec != spec_echo {
            return arg("checkpoint belongs to a different search spec");
        }
        if let Some(inc) = &cp.incumbent {
            let picks = inc
                .witness
                .iter()
                .map(|labels| {
                    let set = BitSubset::from_labels(spec.n, labels)?;
                    pool.index_of(&set).ok_or_else(|| {
                        Error::Argument("checkpoint witness outside the pool".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut picks = picks;
            picks.sort_unstable();
            candidates.push((pool.value_of(&picks), picks));
        }
    }

    let items = work_items(&branches, spec.m);
    let mut skip = vec![false; items.len()];
    if let Some(cp) = resume {
        for &i in &cp.completed {
            if let Some(s) = skip.get_mut(i) {
                *s = true;
            }
        }
    }

    let shared = Shared {
        pool: &pool,
        m: spec.m,
        prune: !exhaustive,
        conflict_bound: spec.bounds.conflict,
        floor: if spec.bounds.deficiency {
            deficiency_floor(spec)
        } else {
            0
        },
        global_best: AtomicU64::new(candidates.iter().map(|c| c.0).min().unwrap()),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        max_nodes: spec.budget.max_nodes,
        flush_every: FLUSH_EVERY.min(spec.budget.max_nodes.max(1)),
        deadline: started + spec.budget.max_time,
    };

    let outcomes: Vec<ItemOutcome> = if spec.threads == 1 {
        sequential(&shared, &branches, &items, &skip)
    } else {
        let tp = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?;
        tp.install(|| {
            items
                .par_iter()
                .zip(skip.par_iter())
                .map_init(
                    || Worker::new(&shared),
                    |w, (item, &skip)| {
                        if skip {
                            return (true, None);
                        }
                        w.forget_best();
                        let complete = w.run(&branches[item.branch], &item.prefix);
                        (complete, w.witness.take().map(|p| (w.best, p)))
                    },
                )
                .collect()
        })
    };

    let mut completed: Vec<usize> = Vec::new();
    for (i, (complete, best)) in outcomes.into_iter().enumerate() {
        if complete {
            completed.push(i);
        }
        if let Some(b) = best {
            candidates.push(b);
        }
    }
    let optimal = completed.len() == items.len();
    let (best_value, picks) = candidates
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("seed candidate present");
    let witness = pool.family(&picks);
    let checkpoint = Checkpoint {
        spec: spec_echo,
        completed,
        incumbent: Some(Incumbent {
            value: best_value,
            witness: witness_labels(&witness),
        }),
    };
    let result = SearchResult {
        best_value,
        witness,
        optimal,
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        elapsed: started.elapsed(),
        spec: spec.clone(),
    };
    Ok((result, checkpoint))
}

/// Single-threaded pass over the items in order. Within a branch the best
/// value carries across items, since earlier items hold lexicographically
/// earlier families.
fn sequential(
    shared: &Shared<'_>,
    branches: &[Branch],
    items: &[Item],
    skip: &[bool],
) -> Vec<ItemOutcome> {
    let mut w = Worker::new(shared);
    let mut out = Vec::with_capacity(items.len());
    let mut current_branch = usize::MAX;
    for (item, &skip) in items.iter().zip(skip) {
        if item.branch != current_branch {
            current_branch = item.branch;
            w.forget_best();
        }
        if skip || shared.aborted.load(Ordering::Relaxed) {
            out.push((skip, None));
            continue;
        }
        let before = w.best;
        let complete = w.run(&branches[item.branch], &item.prefix);
        let found = (w.best < before).then(|| (w.best, w.witness.clone().unwrap()));
        out.push((complete, found));
    }
    w.flush();
    out
}

/// An explicit construction of the right size for the class, as pool indices.
fn construction_start(spec: &SearchSpec, pool: &Pool) -> Option<Vec<usize>> {
    let (n, m) = (spec.n, spec.m);
    if spec.objective != Objective::Op || n % 4 != 0 {
        return None;
    }
    let fam = match spec.class {
        FamilyClass::Even => {
            let base = 1usize.checked_shl((n / 2) as u32)?;
            match m.cmp(&base) {
                CmpOrdering::Equal => eventown_pair(n).ok()?.0,
                CmpOrdering::Greater => eventown_plus(n, m - base, Selector::Lexicographic).ok()?,
                CmpOrdering::Less => return None,
            }
        }
        FamilyClass::Odd => match m.cmp(&n) {
            CmpOrdering::Equal => singletons(n).ok()?,
            CmpOrdering::Greater => oddtown_plus(n, m - n, Selector::Lexicographic).ok()?,
            CmpOrdering::Less => return None,
        },
        FamilyClass::Uniform(_) => return None,
    };
    fam.members().iter().map(|s| pool.index_of(s)).collect()
}

fn run_local(
    spec: &SearchSpec,
    pool: &Pool,
    seed: u64,
    restarts: usize,
    started: Instant,
) -> Result<SearchResult> {
    let restarts = restarts.max(1);
    let deadline = started + spec.budget.max_time;
    let nodes = AtomicU64::new(0);
    let construction = construction_start(spec, pool);
    let climb = |r: usize| -> (u64, Vec<usize>) {
        let start = match (&construction, r) {
            (Some(c), 0) => c.clone(),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(r as u64);
                sample(&mut rng, pool.len(), spec.m).into_vec()
            }
        };
        hill_climb(pool, start, &nodes, spec.budget.max_nodes, deadline)
    };
    let runs: Vec<(u64, Vec<usize>)> = if spec.threads == 1 {
        (0..restarts).map(climb).collect()
    } else {
        let tp = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?;
        tp.install(|| (0..restarts).into_par_iter().map(climb).collect())
    };
    let (best_value, picks) = runs
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("at least one restart");
    Ok(SearchResult {
        best_value,
        witness: pool.family(&picks),
        optimal: false,
        nodes_explored: nodes.load(Ordering::Relaxed),
        elapsed: started.elapsed(),
        spec: spec.clone(),
    })
}

/// Steepest descent over swaps (one member out, one candidate in). Ties go to
/// the smallest `(out, in)` pair, so runs are reproducible.
fn hill_climb(
    pool: &Pool,
    start: Vec<usize>,
    nodes: &AtomicU64,
    max_nodes: u64,
    deadline: Instant,
) -> (u64, Vec<usize>) {
    let p = pool.len();
    let mut chosen = vec![0u64; pool.stride];
    for &i in &start {
        set_bit(&mut chosen, i);
    }
    let mut conf: Vec<i64> = (0..p)
        .map(|c| i64::from(pool.conflicts_with(c, &chosen)))
        .collect();
    let mut value = pool.value_of(&start);
    let mut members = start;
    members.sort_unstable();
    loop {
        let visited = nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if visited >= max_nodes || Instant::now() >= deadline {
            break;
        }
        let outside_min = (0..p)
            .filter(|&c| !has_bit(&chosen, c))
            .map(|c| conf[c])
            .min();
        let Some(outside_min) = outside_min else {
            break;
        };
        // A swap x -> c changes the value by conf[c] - conf[x] - [c ~ x], so
        // only candidates within one of the minimum can be best for any x.
        let near: Vec<usize> = (0..p)
            .filter(|&c| !has_bit(&chosen, c) && conf[c] <= outside_min + 1)
            .collect();
        let mut best: Option<(i64, usize, usize)> = None;
        for &x in &members {
            for &c in &near {
                let delta = conf[c] - conf[x] - i64::from(pool.conflicts(c, x));
                if delta < 0 && best.is_none_or(|(d, _, _)| delta < d) {
                    best = Some((delta, x, c));
                }
            }
        }
        let Some((delta, x, c)) = best else {
            break;
        };
        clear_bit(&mut chosen, x);
        set_bit(&mut chosen, c);
        for (j, cj) in conf.iter_mut().enumerate() {
            *cj += i64::from(pool.conflicts(c, j)) - i64::from(pool.conflicts(x, j));
        }
        value = (value as i64 + delta) as u64;
        let pos = members.iter().position(|&i| i == x).unwrap();
        members.remove(pos);
        let at = members.partition_point(|&i| i < c);
        members.insert(at, c);
    }
    (value, members)
}

/// The statements that can be checked against the exact minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    /// Even sets, `m = 2^⌊n/2⌋ + s`, `s ∈ {1,2}`: `op >= s·2^(⌊n/2⌋-1)`.
    ThmEven,
    /// Odd sets, `m = n + 1`: `op >= 3`.
    ThmOdd,
    /// As `ThmEven` for `3 <= s <= 2^⌊n/2⌋ - 2^⌊n/4⌋` (conjectured).
    ConjEven,
    /// Odd sets, `m = n + s`, `1 <= s <= n`: `op >= 3s` (conjectured).
    ConjOdd,
    /// Odd `k`-uniform sets, `m = n + s`: `op >= 4` for `k = 3`, else `>= 5`
    /// (open).
    ProbUniform,
}

impl Statement {
    pub fn name(self) -> &'static str {
        match self {
            Statement::ThmEven => "thm-even",
            Statement::ThmOdd => "thm-odd",
            Statement::ConjEven => "conj-even",
            Statement::ConjOdd => "conj-odd",
            Statement::ProbUniform => "prob-uniform",
        }
    }

    /// Proven statements; a counterexample to one of these means a bug.
    pub fn is_theorem(self) -> bool {
        matches!(self, Statement::ThmEven | Statement::ThmOdd)
    }

    /// The `(class, m, bound)` instance for the given parameters.
    pub fn instance(self, n: usize, s: usize, k: usize) -> Result<(FamilyClass, usize, u64)> {
        if n == 0 || n > 64 {
            return arg(format!("n must be in 1..=64, got {n}"));
        }
        let half = n / 2;
        let pow = |e: usize| 1u64.checked_shl(e as u32).unwrap_or(u64::MAX);
        match self {
            Statement::ThmEven | Statement::ConjEven => {
                let ok = match self {
                    Statement::ThmEven => s == 1 || s == 2,
                    _ => s >= 3 && (s as u64) <= pow(half).saturating_sub(pow(n / 4)),
                };
                if !ok {
                    return arg(format!(
                        "{} is stated for {}; got s = {s} at n = {n}",
                        self.name(),
                        if self == Statement::ThmEven {
                            "s in {1, 2}".to_string()
                        } else {
                            format!("3 <= s <= {}", pow(half).saturating_sub(pow(n / 4)))
                        }
                    ));
                }
                let m = pow(half) as usize + s;
                let bound = s as u64 * if half == 0 { 0 } else { pow(half - 1) };
                Ok((FamilyClass::Even, m, bound))
            }
            Statement::ThmOdd => {
                if s != 1 {
                    return arg(format!(
                        "thm-odd is stated for m = n + 1 (s = 1), got s = {s}"
                    ));
                }
                Ok((FamilyClass::Odd, n + 1, 3))
            }
            Statement::ConjOdd => {
                if s == 0 || s > n {
                    return arg(format!(
                        "conj-odd is stated for 1 <= s <= n = {n}, got s = {s}"
                    ));
                }
                Ok((FamilyClass::Odd, n + s, 3 * s as u64))
            }
            Statement::ProbUniform => {
                if k < 3 || k.is_multiple_of(2) || k > n {
                    return arg(format!(
                        "prob-uniform needs odd k with 3 <= k <= n, got k = {k}"
                    ));
                }
                if s == 0 {
                    return arg("prob-uniform needs s >= 1 (m = n + s)");
                }
                Ok((FamilyClass::Uniform(k), n + s, if k == 3 { 4 } else { 5 }))
            }
        }
    }
}

impl std::str::FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "thm-even" => Statement::ThmEven,
            "thm-odd" => Statement::ThmOdd,
            "conj-even" => Statement::ConjEven,
            "conj-odd" => Statement::ConjOdd,
            "prob-uniform" => Statement::ProbUniform,
            other => return arg(format!("unknown statement `{other}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// The minimum is strictly above the bound.
    Holds,
    /// The minimum equals the bound.
    Tight,
    /// A family below the bound was found.
    Counterexample,
    /// The budget ran out before the minimum was certified.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub statement: Statement,
    pub n: usize,
    pub s: usize,
    pub k: Option<usize>,
    pub m: usize,
    pub bound: u64,
    pub verdict: Verdict,
    pub result: SearchResult,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "statement": self.statement.name(),
            "theorem": self.statement.is_theorem(),
            "n": self.n,
            "s": self.s,
            "k": self.k,
            "m": self.m,
            "bound": self.bound,
            "minimum": self.result.best_value,
            "optimal": self.result.optimal,
            "holds": matches!(self.verdict, Verdict::Holds | Verdict::Tight),
            "verdict": self.verdict,
            "witness": witness_labels(&self.result.witness),
            "nodes_explored": self.result.nodes_explored,
            "elapsed_ms": self.result.elapsed.as_millis() as u64,
        })
    }
}

/// Computes the minimum for the statement's instance and compares it with
/// the claimed bound. `base` supplies mode, threads, budget and symmetry;
/// its `n`, `m`, class and objective are replaced.
pub fn verify_theorem(
    statement: Statement,
    n: usize,
    s: usize,
    k: usize,
    base: Option<&SearchSpec>,
) -> Result<VerificationReport> {
    let (class, m, bound) = statement.instance(n, s, k)?;
    let mut spec = SearchSpec::new(n, m, class);
    if let Some(b) = base {
        spec.mode = b.mode;
        spec.threads = b.threads;
        spec.budget = b.budget;
        spec.symmetry = b.symmetry;
        spec.bounds = b.bounds;
    }
    let result = min_op(&spec)?;
    let verdict = if result.best_value < bound {
        Verdict::Counterexample
    } else if !result.optimal {
        Verdict::Inconclusive
    } else if result.best_value == bound {
        Verdict::Tight
    } else {
        Verdict::Holds
    };
    if verdict == Verdict::Counterexample && statement.is_theorem() {
        log::error!(
            "{} at n = {n}, s = {s}: found op = {} below the proven bound {bound}; this is a bug",
            statement.name(),
            result.best_value
        );
    }
    Ok(VerificationReport {
        statement,
        n,
        s,
        k: matches!(class, FamilyClass::Uniform(_)).then_some(k),
        m,
        bound,
        verdict,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_f1, example_x5};
    use crate::setfamily::{c_kt, op};

    fn exact(n: usize, m: usize, class: FamilyClass, mode: Mode) -> SearchResult {
        run(&SearchSpec::new(n, m, class).mode(mode)).unwrap()
    }

    #[test]
    fn bits_from_skips_prefix() {
        let bits = [0b1011u64, 0b1];
        assert_eq!(bits_from(&bits, 0).collect::<Vec<_>>(), vec![0, 1, 3, 64]);
        assert_eq!(bits_from(&bits, 2).collect::<Vec<_>>(), vec![3, 64]);
        assert_eq!(bits_from(&bits, 64).collect::<Vec<_>>(), vec![64]);
        assert_eq!(count_from(&bits, 65), 0);
    }

    #[test]
    fn pool_sizes_and_order() {
        let p = Pool::build(4, FamilyClass::Even, Objective::Op).unwrap();
        assert_eq!(p.len(), 8);
        assert!(p.sets().windows(2).all(|w| w[0] < w[1]));
        let p = Pool::build(5, FamilyClass::Uniform(3), Objective::Ckt(1)).unwrap();
        assert_eq!(p.len(), 10);
        assert!(!p.conflicts(0, 0));
    }

    #[test]
    fn odd_n3_m4_single_family() {
        let r = exact(3, 4, FamilyClass::Odd, Mode::Exhaustive);
        assert_eq!(r.best_value, 3);
        assert!(r.optimal);
        assert_eq!(r.witness.len(), 4);
    }

    #[test]
    fn even_n4_m5() {
        for mode in [Mode::Exhaustive, Mode::BranchAndBound] {
            let r = exact(4, 5, FamilyClass::Even, mode);
            assert_eq!(r.best_value, 2);
            assert!(r.optimal);
            assert_eq!(op(&r.witness, false).op_count, 2);
        }
    }

    #[test]
    fn odd_n5_m6_matches_x5() {
        let r = exact(5, 6, FamilyClass::Odd, Mode::BranchAndBound);
        assert_eq!(r.best_value, 3);
        assert_eq!(op(&example_x5(), false).op_count, r.best_value);
    }

    #[test]
    fn ckt_examples() {
        let spec = SearchSpec::new(5, 5, FamilyClass::Uniform(4)).objective(Objective::Ckt(2));
        assert_eq!(min_ckt(&spec).unwrap().best_value, 0);

        // Six triples of [5] through a common point meet in one point only
        // for the three complementary pairs, so the minimum is 3, below
        // op(example_f1()) = 4.
        let spec = SearchSpec::new(5, 6, FamilyClass::Uniform(3)).objective(Objective::Ckt(1));
        let r = min_ckt(&spec).unwrap();
        assert_eq!(r.best_value, brute_min_ckt(5, 3, 1, 6));
        assert_eq!(r.best_value, 3);
        assert_eq!(c_kt(&example_f1(), 1).unwrap(), 4);
        assert_eq!(c_kt(&r.witness, 1).unwrap(), 3);
        let star: Vec<Vec<usize>> = r.witness.members().iter().map(BitSubset::labels).collect();
        assert_eq!(
            star,
            vec![
                vec![1, 2, 3],
                vec![1, 2, 4],
                vec![1, 3, 4],
                vec![1, 2, 5],
                vec![1, 3, 5],
                vec![1, 4, 5]
            ]
        );
    }

    /// Minimum of c_{k,t} over all m-subsets of the k-sets of [n], by plain
    /// u64 masks.
    fn brute_min_ckt(n: usize, k: u32, t: u32, m: usize) -> u64 {
        let sets: Vec<u64> = (0u64..1 << n).filter(|b| b.count_ones() == k).collect();
        Combinations::new(sets.len(), m)
            .map(|c| {
                let mut v = 0;
                for (i, &a) in c.iter().enumerate() {
                    for &b in &c[i + 1..] {
                        v += u64::from((sets[a] & sets[b]).count_ones() == t);
                    }
                }
                v
            })
            .min()
            .unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(run(&SearchSpec::new(3, 5, FamilyClass::Odd)).is_err());
        assert!(run(&SearchSpec::new(3, 0, FamilyClass::Odd)).is_err());
        assert!(
            run(&SearchSpec::new(4, 2, FamilyClass::Even).objective(Objective::Ckt(1))).is_err()
        );
        assert!(
            run(&SearchSpec::new(4, 2, FamilyClass::Uniform(2)).objective(Objective::Ckt(2)))
                .is_err()
        );
        assert!(min_ckt(&SearchSpec::new(4, 2, FamilyClass::Uniform(2))).is_err());
        assert!(matches!(
            run(&SearchSpec::new(20, 3, FamilyClass::Even)),
            Err(Error::Resource(_))
        ));
        let tiny = Budget {
            max_nodes: 10,
            max_time: DEFAULT_MAX_TIME,
        };
        assert!(matches!(
            run(&SearchSpec::new(5, 6, FamilyClass::Odd)
                .mode(Mode::Exhaustive)
                .budget(tiny)),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn budget_exhaustion_keeps_incumbent() {
        let tiny = Budget {
            max_nodes: 1,
            max_time: DEFAULT_MAX_TIME,
        };
        let spec = SearchSpec::new(6, 9, FamilyClass::Even)
            .symmetry(false)
            .budget(tiny);
        let r = run(&spec).unwrap();
        assert!(!r.optimal);
        assert_eq!(r.witness.len(), 9);
        assert_eq!(op(&r.witness, false).op_count, r.best_value);
    }

    #[test]
    fn checkpoint_resume_reaches_same_optimum() {
        let full = run(&SearchSpec::new(5, 7, FamilyClass::Odd)).unwrap();
        let tiny = Budget {
            max_nodes: 5000,
            max_time: DEFAULT_MAX_TIME,
        };
        let spec = SearchSpec::new(5, 7, FamilyClass::Odd).budget(tiny);
        let (first, mut cp) = run_with_checkpoint(&spec, None).unwrap();
        let mut rounds = 0;
        let mut last = first;
        while !last.optimal {
            let (r, next) = run_with_checkpoint(&spec, Some(&cp)).unwrap();
            last = r;
            cp = next;
            rounds += 1;
            assert!(rounds < 1000);
        }
        assert_eq!(last.best_value, full.best_value);
        assert_eq!(last.witness, full.witness);

        let other = SearchSpec::new(5, 6, FamilyClass::Odd);
        assert!(run_with_checkpoint(&other, Some(&cp)).is_err());
    }

    #[test]
    fn local_search_from_construction() {
        let spec = SearchSpec::new(8, 17, FamilyClass::Even).mode(Mode::LocalSearch {
            seed: 1,
            restarts: 2,
        });
        let r = run(&spec).unwrap();
        assert!(!r.optimal);
        assert!(r.best_value <= 8);
        assert_eq!(op(&r.witness, false).op_count, r.best_value);
    }

    #[test]
    fn local_search_n12_reaches_construction_value() {
        let spec = SearchSpec::new(12, 65, FamilyClass::Even);
        let r = local_search(&spec, 7, 100).unwrap();
        assert!(r.best_value <= 32, "{}", r.best_value);
        assert_eq!(op(&r.witness, false).op_count, r.best_value);
        assert_eq!(r.witness.len(), 65);
    }

    #[test]
    fn local_search_is_reproducible() {
        let spec = SearchSpec::new(6, 10, FamilyClass::Even).mode(Mode::LocalSearch {
            seed: 42,
            restarts: 5,
        });
        let a = run(&spec).unwrap();
        let b = run(&spec).unwrap();
        let c = run(&spec.clone().threads(3)).unwrap();
        assert_eq!((a.best_value, &a.witness), (b.best_value, &b.witness));
        assert_eq!((a.best_value, &a.witness), (c.best_value, &c.witness));
    }

    #[test]
    fn statement_instances() {
        assert_eq!(
            Statement::ThmEven.instance(4, 1, 0).unwrap(),
            (FamilyClass::Even, 5, 2)
        );
        assert_eq!(
            Statement::ThmEven.instance(5, 2, 0).unwrap(),
            (FamilyClass::Even, 6, 4)
        );
        assert_eq!(
            Statement::ThmOdd.instance(4, 1, 0).unwrap(),
            (FamilyClass::Odd, 5, 3)
        );
        assert_eq!(
            Statement::ConjOdd.instance(5, 2, 0).unwrap(),
            (FamilyClass::Odd, 7, 6)
        );
        assert_eq!(
            Statement::ConjEven.instance(8, 3, 0).unwrap(),
            (FamilyClass::Even, 19, 24)
        );
        assert_eq!(
            Statement::ProbUniform.instance(5, 1, 3).unwrap(),
            (FamilyClass::Uniform(3), 6, 4)
        );
        assert!(Statement::ThmEven.instance(4, 3, 0).is_err());
        assert!(Statement::ConjEven.instance(4, 3, 0).is_err());
        assert!(Statement::ConjOdd.instance(4, 5, 0).is_err());
        assert!(Statement::ProbUniform.instance(6, 1, 4).is_err());
        assert!("nope".parse::<Statement>().is_err());
        assert_eq!("conj-odd".parse::<Statement>().unwrap(), Statement::ConjOdd);
    }

    #[test]
    fn verify_small_theorems() {
        let r = verify_theorem(Statement::ThmOdd, 4, 1, 0, None).unwrap();
        assert_eq!((r.result.best_value, r.verdict), (3, Verdict::Tight));
        let r = verify_theorem(Statement::ThmEven, 4, 2, 0, None).unwrap();
        assert_eq!((r.result.best_value, r.verdict), (4, Verdict::Tight));
    }

    #[test]
    fn json_shape() {
        let r = exact(4, 5, FamilyClass::Even, Mode::BranchAndBound);
        let v = r.to_json();
        for key in [
            "best_value",
            "witness",
            "optimal",
            "nodes_explored",
            "elapsed_ms",
            "spec",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["best_value"], 2);
        assert!(v["witness"]
            .as_array()
            .unwrap()
            .iter()
            .all(|s| s.is_array()));
    }
}
