use std::time::Duration;

use log::info;
use oddtown_core::constructions::{
    disjoint_k4_triples, eventown_pair, eventown_plus, example_f1, example_f2, example_x5,
    oddtown_plus, read_steiner, singletons, steiner_partition, steiner_shadow_size, Selector,
    SteinerSystem,
};
use oddtown_core::format::{format_family, read_family, write_family};
use oddtown_core::search::{
    self, verify_theorem, Bounds, Budget, Checkpoint, FamilyClass, Mode, Objective, SearchSpec,
    Statement, Verdict,
};
use oddtown_core::setfamily::{
    c_kt, check_application_bound, check_link_identity, is_eventown, is_oddtown, op, SetFamily,
};
use oddtown_core::{Error, Result};
use serde_json::{json, Value};

use crate::exit;
use crate::output::Report;
use crate::{
    AnalyzeArgs, ClassArg, ConstructArgs, EngineArgs, ExactModeArg, FamilyName, ModeArg,
    ObjectiveArg, SearchArgs, StatementArg, SteinerArgs, Toggle, VerifyArgs,
};

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

fn need(value: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    value.ok_or_else(|| Error::Argument(format!("{family} needs --{flag}")))
}

fn family_summary(f: &SetFamily) -> Value {
    json!({
        "n": f.ground_size(),
        "size": f.len(),
        "op": op(f, false).op_count,
        "uniform": f.uniform_size(),
        "eventown": is_eventown(f),
        "oddtown": is_oddtown(f),
    })
}

fn build_family(a: &ConstructArgs) -> Result<SetFamily> {
    let selector = a.seed.map_or(Selector::Lexicographic, Selector::Seeded);
    let name = value_name(&a.family);
    let n = || need(a.n, "n", &name);
    let s = || need(a.s, "s", &name);
    match a.family {
        FamilyName::EventownA => Ok(eventown_pair(n()?)?.0),
        FamilyName::EventownB => Ok(eventown_pair(n()?)?.1),
        FamilyName::EventownPlus => eventown_plus(n()?, s()?, selector),
        FamilyName::Singletons => singletons(n()?),
        FamilyName::K4Triples => disjoint_k4_triples(n()?),
        FamilyName::OddtownPlus => oddtown_plus(n()?, s()?, selector),
        FamilyName::X5 => Ok(example_x5()),
        FamilyName::F1 => Ok(example_f1()),
        FamilyName::F2 => example_f2(need(a.k, "k", &name)?),
        FamilyName::SteinerPartition => Ok(steiner_partition(n()?)?.blocks().clone()),
    }
}

fn value_name(v: &impl clap::ValueEnum) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

pub fn construct(a: &ConstructArgs) -> Result<Report> {
    let fam = build_family(a)?;
    let mut body = family_summary(&fam);
    body["family"] = json!(value_name(&a.family));
    match &a.out {
        Some(path) => {
            write_family(path, &fam)?;
            body["out"] = json!(path.display().to_string());
            Ok(Report::new(body, exit::OK))
        }
        None => Ok(Report {
            body,
            exit: exit::OK,
            family_text: Some(format_family(&fam)),
        }),
    }
}

pub fn analyze(a: &AnalyzeArgs) -> Result<Report> {
    let fam = read_family(&a.input)?;
    let report = op(&fam, a.pairs);
    let mut body = family_summary(&fam);
    if let Some(pairs) = report.pairs {
        body["pairs"] = json!(pairs
            .iter()
            .map(|&(i, j)| [i + 1, j + 1])
            .collect::<Vec<_>>());
    }
    if let Some(t) = a.ckt {
        body["ckt"] = json!({ "t": t, "count": c_kt(&fam, t)? });
    }
    if a.density {
        let d = oddtown_core::setfamily::op_density(&fam)?;
        body["density"] = json!({
            "exact": d.to_string(),
            "value": *d.numer() as f64 / *d.denom() as f64,
        });
    }
    if let Some(k) = a.links {
        let id = check_link_identity(&fam, k)?;
        body["link_identity"] = json!({
            "lhs": id.lhs.to_string(),
            "rhs": id.rhs.to_string(),
            "holds": id.holds,
        });
        if k >= 4 {
            let chain = check_application_bound(&fam, k, a.s)?;
            body["link_op_chain"] = json!({
                "s": a.s,
                "lhs": chain.lhs.to_string(),
                "mid": chain.mid.to_string(),
                "rhs": chain.rhs.to_string(),
                "lhs_ge_mid": chain.lhs_ge_mid,
                "mid_ge_rhs": chain.mid_ge_rhs,
            });
        }
    }
    Ok(Report::new(body, exit::OK))
}

fn apply_engine(mut spec: SearchSpec, e: &EngineArgs) -> SearchSpec {
    let mut budget = Budget::default();
    if let Some(n) = e.budget_nodes {
        budget.max_nodes = n;
    }
    if let Some(s) = e.budget_secs {
        budget.max_time = Duration::from_secs(s);
    }
    spec = spec.threads(e.threads).budget(budget).bounds(Bounds {
        conflict: !e.no_conflict_bound,
        deficiency: !e.no_deficiency_bound,
    });
    match e.symmetry {
        Toggle::Auto => spec,
        Toggle::On => spec.symmetry(true),
        Toggle::Off => spec.symmetry(false),
    }
}

fn search_spec(a: &SearchArgs) -> Result<SearchSpec> {
    let class = match (a.class, a.k) {
        (ClassArg::Even, _) => FamilyClass::Even,
        (ClassArg::Odd, _) => FamilyClass::Odd,
        (ClassArg::Uniform, Some(k)) => FamilyClass::Uniform(k),
        (ClassArg::Uniform, None) => return usage("--class uniform needs --k"),
    };
    let objective = match (a.objective, a.t) {
        (ObjectiveArg::Op, None) => Objective::Op,
        (ObjectiveArg::Op, Some(_)) => return usage("--t only applies to --objective ckt"),
        (ObjectiveArg::Ckt, Some(t)) => Objective::Ckt(t),
        (ObjectiveArg::Ckt, None) => return usage("--objective ckt needs --t"),
    };
    let mode = match a.mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Bnb => Mode::BranchAndBound,
        ModeArg::Local => Mode::LocalSearch {
            seed: a.seed,
            restarts: a.restarts,
        },
    };
    let spec = SearchSpec::new(a.n, a.m, class)
        .objective(objective)
        .mode(mode);
    Ok(apply_engine(spec, &a.engine))
}

pub fn search(a: &SearchArgs) -> Result<Report> {
    let spec = search_spec(a)?;
    let local = matches!(spec.mode, Mode::LocalSearch { .. });
    if local && (a.checkpoint.is_some() || a.resume.is_some()) {
        return usage("--checkpoint and --resume apply to exhaustive and bnb modes");
    }
    let resume = a.resume.as_deref().map(Checkpoint::load).transpose()?;
    let (result, checkpoint) = search::run_with_checkpoint(&spec, resume.as_ref())?;
    info!(
        "search finished: best {} optimal {} after {} nodes",
        result.best_value, result.optimal, result.nodes_explored
    );
    if let Some(path) = &a.checkpoint {
        checkpoint.save(path)?;
    }
    let code = if result.optimal || local {
        exit::OK
    } else {
        exit::INCONCLUSIVE
    };
    Ok(Report::new(result.to_json(), code))
}

pub fn verify(a: &VerifyArgs) -> Result<Report> {
    let statement = match a.statement {
        StatementArg::ThmEven => Statement::ThmEven,
        StatementArg::ThmOdd => Statement::ThmOdd,
        StatementArg::ConjEven => Statement::ConjEven,
        StatementArg::ConjOdd => Statement::ConjOdd,
        StatementArg::ProbUniform => Statement::ProbUniform,
    };
    let mode = match a.mode {
        ExactModeArg::Exhaustive => Mode::Exhaustive,
        ExactModeArg::Bnb => Mode::BranchAndBound,
    };
    // n, m and class are filled in from the statement.
    let (class, _, _) = statement.instance(a.n, a.s, a.k)?;
    let base = apply_engine(SearchSpec::new(a.n, 1, class).mode(mode), &a.engine);
    let report = verify_theorem(statement, a.n, a.s, a.k, Some(&base))?;
    let code = match report.verdict {
        Verdict::Holds | Verdict::Tight => exit::OK,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
        Verdict::Counterexample => exit::REFUTED,
    };
    Ok(Report::new(report.to_json(), code))
}

fn shadow_report(sys: &SteinerSystem, k: usize, a: &SteinerArgs) -> Result<Value> {
    let sh = sys.shadow(k)?;
    // The closed form counts the k-shadow of an S(n, k+1, k-2).
    let expected = (sys.k() == k + 1 && sys.t() + 2 == k)
        .then(|| steiner_shadow_size(sys.n(), k))
        .flatten();
    let mut v = json!({
        "k": k,
        "size": sh.len(),
        "expected": expected.map(|e| e as u64),
        "matches_expected": expected.map(|e| e == sh.len() as u128),
    });
    if let Some(path) = &a.out {
        write_family(path, &sh)?;
        v["out"] = json!(path.display().to_string());
    }
    Ok(v)
}

pub fn steiner(a: &SteinerArgs) -> Result<Report> {
    let loaded = match (&a.validate, a.partition, a.n) {
        (Some(path), _, _) => read_steiner(path),
        (None, true, Some(n)) => steiner_partition(n),
        _ => return usage("steiner needs --validate <path> or --partition --n <n>"),
    };
    let sys = match loaded {
        Ok(sys) => sys,
        Err(Error::SteinerCover {
            n,
            k,
            t,
            tset,
            count,
        }) => {
            let body = json!({
                "valid": false,
                "n": n,
                "k": k,
                "t": t,
                "offending_set": tset,
                "covered": count,
                "error": format!("{tset} lies in {count} blocks, expected exactly 1"),
            });
            return Ok(Report::new(body, exit::REFUTED));
        }
        Err(e) => return Err(e),
    };
    let mut body = json!({
        "valid": true,
        "n": sys.n(),
        "k": sys.k(),
        "t": sys.t(),
        "blocks": sys.blocks().len(),
    });
    if let Some(k) = a.shadow {
        body["shadow"] = shadow_report(&sys, k, a)?;
    }
    Ok(Report::new(body, exit::OK))
}
