//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use oddtown_core::combin::Combinations;
use oddtown_core::constructions::{
    disjoint_k4_triples, eventown_pair, eventown_plus, example_f1, example_f2, example_x5,
    oddtown_plus, Selector,
};
use oddtown_core::gf2::{
    kernel_of_functional, nullspace, orthogonal_complement, rank, span, BitSubset,
};
use oddtown_core::search::{
    run, verify_theorem, FamilyClass, Mode, SearchResult, SearchSpec, Statement, Verdict,
};
use oddtown_core::setfamily::{
    bipartite_oddtown_check, check_application_bound, check_link_identity, is_eventown, op,
    op_density, SetFamily,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Check = fn() -> Outcome;

fn op_of(f: &SetFamily) -> u64 {
    op(f, false).op_count
}

fn exhaustive(n: usize, m: usize, class: FamilyClass) -> SearchResult {
    run(&SearchSpec::new(n, m, class)
        .mode(Mode::Exhaustive)
        .symmetry(false))
    .unwrap()
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn ac1_constructions() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut expect = |what: String, got: u64, want: u64| {
        checked += 1;
        if got != want {
            bad.push(format!("{what}: op {got} != {want}"));
        }
    };
    expect("x5".into(), op_of(&example_x5()), 3);
    expect("f1".into(), op_of(&example_f1()), 4);
    for k in [5, 7] {
        expect(format!("f2({k})"), op_of(&example_f2(k).unwrap()), 5);
    }
    for n in [4usize, 8, 12] {
        let max_s = (1usize << (n / 2)) - (1usize << (n / 4));
        for s in 1..=max_s {
            let f = eventown_plus(n, s, Selector::Lexicographic).unwrap();
            expect(
                format!("eventown_plus({n},{s})"),
                op_of(&f),
                s as u64 * (1 << (n / 2 - 1)),
            );
        }
    }
    for n in [4usize, 8, 12, 16] {
        for s in 1..=n {
            let f = oddtown_plus(n, s, Selector::Lexicographic).unwrap();
            expect(format!("oddtown_plus({n},{s})"), op_of(&f), 3 * s as u64);
        }
    }
    let elapsed = start.elapsed();
    let pass = bad.is_empty() && within(elapsed, Duration::from_secs(5));
    outcome(
        pass,
        format!(
            "{checked} construction values exact, {} mismatches {bad:?}, {elapsed:.2?} (< 5s)",
            bad.len()
        ),
    )
}

fn ac2_even_theorem() -> Outcome {
    let start = Instant::now();
    let a = exhaustive(4, 5, FamilyClass::Even);
    let b = exhaustive(4, 6, FamilyClass::Even);
    let small = start.elapsed();
    let small_ok = a.optimal && b.optimal && a.best_value == 2 && b.best_value == 4;

    let c = verify_theorem(Statement::ThmEven, 5, 1, 0, None).unwrap();
    let c_ok = c.result.optimal
        && c.result.best_value >= 2
        && matches!(c.verdict, Verdict::Holds | Verdict::Tight);

    let big_start = Instant::now();
    let spec = SearchSpec::new(6, 9, FamilyClass::Even).symmetry(true);
    let d = verify_theorem(Statement::ThmEven, 6, 1, 0, Some(&spec)).unwrap();
    let big = big_start.elapsed();
    let d_ok = d.result.optimal
        && d.result.best_value >= 4
        && matches!(d.verdict, Verdict::Holds | Verdict::Tight)
        && within(big, Duration::from_secs(600));

    let pass = small_ok && within(small, Duration::from_secs(1)) && c_ok && d_ok;
    outcome(
        pass,
        format!(
            "even n=4: m=5 -> {}, m=6 -> {} in {small:.2?} (< 1s); n=5 m=5 min {} vs 2 {:?}; \
             n=6 m=9 min {} vs 4 {:?} in {big:.2?} (< 600s, {} nodes)",
            a.best_value,
            b.best_value,
            c.result.best_value,
            c.verdict,
            d.result.best_value,
            d.verdict,
            d.result.nodes_explored
        ),
    )
}

fn ac3_odd_theorem() -> Outcome {
    let start = Instant::now();
    let values: Vec<(usize, usize, u64, bool)> = [(3, 4), (4, 5), (5, 6)]
        .into_iter()
        .map(|(n, m)| {
            let r = exhaustive(n, m, FamilyClass::Odd);
            (n, m, r.best_value, r.optimal)
        })
        .collect();
    let elapsed = start.elapsed();
    let pass =
        values.iter().all(|&(_, _, v, o)| v == 3 && o) && within(elapsed, Duration::from_secs(10));
    outcome(
        pass,
        format!("odd minima (n, m, min, optimal) {values:?} in {elapsed:.2?} (< 10s)"),
    )
}

fn ac4_odd_conjecture() -> Outcome {
    let start = Instant::now();
    let base = SearchSpec::new(1, 1, FamilyClass::Odd).mode(Mode::Exhaustive);
    let mut lines = Vec::new();
    let mut all_decided = true;
    for (n, s) in [(4, 2), (4, 3), (5, 2)] {
        let r = verify_theorem(Statement::ConjOdd, n, s, 0, Some(&base)).unwrap();
        all_decided &= r.result.optimal && r.verdict != Verdict::Inconclusive;
        let finding = if r.verdict == Verdict::Counterexample {
            " (finding)"
        } else {
            ""
        };
        lines.push(format!(
            "n={n} m={} min {} vs {} {:?}{finding}",
            r.m, r.result.best_value, r.bound, r.verdict
        ));
    }
    let elapsed = start.elapsed();
    outcome(
        all_decided && within(elapsed, Duration::from_secs(300)),
        format!("{} in {elapsed:.2?} (< 300s)", lines.join("; ")),
    )
}

fn ac5_uniform_problem() -> Outcome {
    let start = Instant::now();
    let r = run(&SearchSpec::new(5, 6, FamilyClass::Uniform(3)).mode(Mode::Exhaustive)).unwrap();
    let elapsed = start.elapsed();
    let f1 = example_f1();
    let f1_optimal = op_of(&f1) == r.best_value;
    let pass =
        r.optimal && r.best_value == 4 && f1_optimal && within(elapsed, Duration::from_secs(1));
    outcome(
        pass,
        format!(
            "3-uniform n=5 m=6 min {} (expected 4), op(f1) = {}, f1 optimal: {f1_optimal}, \
             witness {}, {elapsed:.2?} (< 1s)",
            r.best_value,
            op_of(&f1),
            r.witness
        ),
    )
}

fn random_uniform(rng: &mut ChaCha8Rng, k: usize, max_n: usize, max_len: usize) -> SetFamily {
    let n = rng.gen_range(k + 1..=max_n);
    let all: Vec<Vec<usize>> = Combinations::new(n, k).collect();
    let len = rng.gen_range(1..=all.len().min(max_len));
    let members = sample(rng, all.len(), len)
        .into_iter()
        .map(|i| BitSubset::from_indices(n, all[i].iter().copied()).unwrap())
        .collect();
    SetFamily::new(n, members).unwrap()
}

fn all_k_subsets(n: usize, k: usize) -> SetFamily {
    SetFamily::new(
        n,
        Combinations::new(n, k)
            .map(|c| BitSubset::from_indices(n, c).unwrap())
            .collect(),
    )
    .unwrap()
}

fn ac6_link_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = vec![
        (all_k_subsets(5, 4), 4),
        (disjoint_k4_triples(8).unwrap(), 3),
    ];
    for i in 0..100 {
        let k = 3 + i % 3;
        cases.push((random_uniform(&mut rng, k, 10, 40), k));
    }
    let failures: Vec<String> = cases
        .iter()
        .filter_map(|(f, k)| {
            let r = check_link_identity(f, *k).unwrap();
            (!r.holds).then(|| format!("{f:?}: {} != {}", r.lhs, r.rhs))
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "{} families, {} failures {failures:?}",
            cases.len(),
            failures.len()
        ),
    )
}

fn ac7_application_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0;
    for i in 0..1000 {
        let k = 4 + i % 2;
        let f = random_uniform(&mut rng, k, 10, 40);
        let r = check_application_bound(&f, k, 1).unwrap();
        if !(r.lhs_ge_mid && r.lhs >= r.mid) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("1000 families, {failures} with (k-2)c(k,k-2) < sum of link op"),
    )
}

fn random_vectors(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<BitSubset> {
    (0..count)
        .map(|_| BitSubset::from_bits(n, rng.gen::<u64>() & ((1u64 << n) - 1)).unwrap())
        .collect()
}

fn ac8_gf2_properties() -> Outcome {
    const TRIALS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = [0usize; 4];
    for _ in 0..TRIALS {
        let n = rng.gen_range(1..=12);
        let count = rng.gen_range(1..=14);
        let vs = random_vectors(&mut rng, n, count);

        // rank-nullity on the n x count matrix with the vectors as columns
        let r = rank(n, &vs).unwrap();
        if r + nullspace(&vs).unwrap().dim() != count {
            failures[0] += 1;
        }

        let u = span(n, &vs[..count.min(4)]).unwrap();
        if orthogonal_complement(&orthogonal_complement(&u)) != u {
            failures[1] += 1;
        }

        let w = span(n, &vs).unwrap();
        let v = random_vectors(&mut rng, n, 1).pop().unwrap();
        let nonzero = w.basis().iter().any(|b| b.parity_with(&v));
        let ker = kernel_of_functional(&w, &v).unwrap();
        let want = if nonzero { w.dim() - 1 } else { w.dim() };
        if ker.dim() != want {
            failures[2] += 1;
        }

        // Greedy eventown family from random even sets.
        let mut fam: Vec<BitSubset> = Vec::new();
        for _ in 0..3 * n {
            let c = random_vectors(&mut rng, n, 1).pop().unwrap();
            if c.cardinality().is_multiple_of(2)
                && !fam.contains(&c)
                && fam.iter().all(|f| !f.parity_with(&c))
            {
                fam.push(c);
            }
        }
        let ev = SetFamily::new(n, fam.clone()).unwrap();
        let w = span(n, &fam).unwrap();
        let self_dual = w.is_subspace_of(&orthogonal_complement(&w)).unwrap();
        if !(is_eventown(&ev) && self_dual && w.dim() <= n / 2) {
            failures[3] += 1;
        }
    }
    outcome(
        failures.iter().all(|&f| f == 0),
        format!(
            "{TRIALS} trials each: rank-nullity {}, complement involution {}, kernel dimension {}, \
             eventown self-orthogonality {} failures",
            failures[0], failures[1], failures[2], failures[3]
        ),
    )
}

fn ac9_bipartite_oddtown() -> Outcome {
    let start = Instant::now();
    let odd = |a: u8, b: u8| (a & b).count_ones() % 2 == 1;
    let pairs: Vec<(u8, u8)> = (0u8..8)
        .flat_map(|x| (0u8..8).map(move |y| (x, y)))
        .collect();
    let is_pattern = |p: &[(u8, u8)]| {
        p.iter().enumerate().all(|(i, &(x, _))| {
            p.iter()
                .enumerate()
                .all(|(j, &(_, y))| odd(x, y) == (i == j))
        })
    };
    let mut size3 = None;
    for a in &pairs {
        for b in &pairs {
            for c in &pairs {
                if size3.is_none() && is_pattern(&[*a, *b, *c]) {
                    size3 = Some([*a, *b, *c]);
                }
            }
        }
    }
    let mut size4 = 0u64;
    for a in &pairs {
        for b in &pairs {
            for c in &pairs {
                for d in &pairs {
                    if is_pattern(&[*a, *b, *c, *d]) {
                        size4 += 1;
                    }
                }
            }
        }
    }
    let size3_ok = size3.is_some_and(|p| {
        let fam = |sel: fn(&(u8, u8)) -> u8| {
            SetFamily::new(
                3,
                p.iter()
                    .map(|q| BitSubset::from_bits(3, sel(q) as u64).unwrap())
                    .collect(),
            )
        };
        match (fam(|q| q.0), fam(|q| q.1)) {
            (Ok(xs), Ok(ys)) => bipartite_oddtown_check(&xs, &ys).unwrap(),
            _ => false,
        }
    });
    let elapsed = start.elapsed();
    outcome(
        size4 == 0 && size3_ok && within(elapsed, Duration::from_secs(60)),
        format!(
            "n=3: {size4} patterns of size 4 among 64^4 tuples, size-3 pattern exists: {size3_ok}, \
             {elapsed:.2?} (< 60s)"
        ),
    )
}

fn ac10_densities() -> Outcome {
    let even = |n: usize| {
        SetFamily::new(
            n,
            (0u64..1 << n)
                .filter(|b| b.count_ones() % 2 == 0)
                .map(|b| BitSubset::from_bits(n, b).unwrap())
                .collect(),
        )
        .unwrap()
    };
    let d6 = op_density(&even(6)).unwrap();
    let d8 = op_density(&even(8)).unwrap();
    let (a, b) = eventown_pair(8).unwrap();
    let dab = op_density(&a.union(&b).unwrap()).unwrap();
    let in_window = |d: Ratio<u64>, lo: (u64, u64), hi: (u64, u64)| {
        Ratio::new(lo.0, lo.1) < d && d < Ratio::new(hi.0, hi.1)
    };
    let pass = in_window(d6, (2, 5), (1, 2))
        && in_window(d8, (2, 5), (1, 2))
        && d6 < d8
        && in_window(dab, (1, 5), (3, 10));
    outcome(
        pass,
        format!("even sets n=6: {d6}, n=8: {d8} in (2/5, 1/2) increasing; A u B at n=8: {dab} in (1/5, 3/10)"),
    )
}

fn ac11_determinism() -> Outcome {
    let instances: Vec<(usize, usize, FamilyClass)> = vec![
        (4, 5, FamilyClass::Even),
        (4, 6, FamilyClass::Even),
        (5, 5, FamilyClass::Even),
        (3, 4, FamilyClass::Odd),
        (4, 5, FamilyClass::Odd),
        (5, 6, FamilyClass::Odd),
        (4, 6, FamilyClass::Odd),
        (4, 7, FamilyClass::Odd),
        (5, 7, FamilyClass::Odd),
        (5, 6, FamilyClass::Uniform(3)),
        (6, 9, FamilyClass::Even),
    ];
    let mut bad = Vec::new();
    for (n, m, class) in instances {
        let raw = SearchSpec::new(n, m, class).symmetry(false);
        let reference = run(&raw.clone().mode(Mode::Exhaustive)).unwrap();
        let key = |r: &SearchResult| (r.best_value, r.witness.clone(), r.optimal);
        for threads in [1, 2, 8] {
            for mode in [Mode::Exhaustive, Mode::BranchAndBound] {
                let r = run(&raw.clone().mode(mode).threads(threads)).unwrap();
                if key(&r) != key(&reference) {
                    bad.push(format!("n={n} m={m} {class:?} {mode:?} threads={threads}"));
                }
            }
        }
        let sym = SearchSpec::new(n, m, class).symmetry(true);
        let sym_ref = run(&sym).unwrap();
        if sym_ref.best_value != reference.best_value {
            bad.push(format!("n={n} m={m} {class:?} symmetry value"));
        }
        for threads in [2, 8] {
            let r = run(&sym.clone().threads(threads)).unwrap();
            if key(&r) != key(&sym_ref) {
                bad.push(format!("n={n} m={m} {class:?} symmetry threads={threads}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("11 instances x threads {{1,2,8}} x modes, mismatches {bad:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 11] = [
        ("AC1 construction values", ac1_constructions),
        ("AC2 even-class minimum", ac2_even_theorem),
        ("AC3 odd-class minimum", ac3_odd_theorem),
        ("AC4 odd-class excess probe", ac4_odd_conjecture),
        ("AC5 3-uniform minimum", ac5_uniform_problem),
        ("AC6 link double count", ac6_link_identity),
        ("AC7 link op chain", ac7_application_chain),
        ("AC8 GF(2) properties", ac8_gf2_properties),
        ("AC9 bipartite oddtown n=3", ac9_bipartite_oddtown),
        ("AC10 op densities", ac10_densities),
        ("AC11 determinism", ac11_determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let o = check();
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
