//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcsp_cli::commands::{self, Options};
use vcsp_cli::formats::{read_json, FpolyFile};
use vcsp_core::blp::{check_tightness, extract_labeling};
use vcsp_core::fpoly::{
    admits, find_symmetric_fpoly, FractionalPolymorphism, Operation, SymmetricSearch,
};
use vcsp_core::lift::{lift_to, ProofAudit};
use vcsp_core::ratlp::{self, LinearProgram, LpOutcome};
use vcsp_core::stp::{acyclify, stp_to_submodular, tournament_to_pair, MultimorphismPair, Tournament};
use vcsp_core::{catalog, Caps, CostFunction, Domain, Instance, Language, Rational};
use vcsp_oracles::lp::Verdict;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> std::result::Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn dom(d: usize) -> Domain {
    Domain::new(d).unwrap()
}

fn cut_lang() -> Language<Rational> {
    Language::new(dom(2)).with("cut", catalog::cut(dom(2))).unwrap()
}

fn tables(lang: &Language<Rational>) -> Vec<vcsp_oracles::vcsp::Table> {
    lang.functions().iter().map(|f| (f.arity(), f.table().to_vec())).collect()
}

fn oracle_admits(lang: &Language<Rational>, rho: &FractionalPolymorphism<Rational>) -> bool {
    let support: Vec<_> = rho
        .support()
        .iter()
        .map(|(g, w)| (g.ops().iter().map(|op| op.table().to_vec()).collect(), w.clone()))
        .collect();
    vcsp_oracles::vcsp::admits(lang.domain().size(), &tables(lang), rho.arity_in(), &support)
}

fn oracle_admits_pair(lang: &Language<Rational>, pair: &MultimorphismPair) -> bool {
    vcsp_oracles::vcsp::admits_pair(lang.domain().size(), &tables(lang), pair.meet().table(), pair.join().table())
}

fn binary_seed() -> FractionalPolymorphism<Rational> {
    FractionalPolymorphism::from_operations([
        (Operation::min(dom(2), 2), q(1, 2)),
        (Operation::max(dom(2), 2), q(1, 2)),
    ])
    .unwrap()
}

/// `yᵀA <= 0` and `yᵀb > 0`, recomputed entry by entry.
fn farkas_holds(lp: &LinearProgram<Rational>, y: &[Rational]) -> bool {
    let zero = q(0, 1);
    let columns_ok = (0..lp.cols()).all(|j| {
        let s: Rational = lp.a().iter().zip(y).map(|(row, yi)| row[j].clone() * yi.clone()).sum();
        s <= zero
    });
    let yb: Rational = lp.b().iter().zip(y).map(|(b, yi)| b.clone() * yi.clone()).sum();
    y.len() == lp.rows() && columns_ok && yb > zero
}

fn criterion_1() -> Check {
    let ws = common::Workspace::new();
    let cut = ws.write("cut.json", &common::cut_language());
    let eq = ws.write("eq.json", &common::eq_language());
    let out = ws.path("omega.json");
    let opts = Options::default();

    let start = Instant::now();
    let feasible = commands::check_language(&cut, 2, Some(&out), &opts).map_err(|e| e.to_string())?;
    let t_cut = start.elapsed();
    ensure(feasible.code == 0 && feasible.report.starts_with("FEASIBLE"), || {
        format!("cut: exit {} report {}", feasible.code, feasible.report)
    })?;
    let omega = read_json::<FpolyFile>(&out).and_then(|f| f.to_fpoly()).map_err(|e| e.to_string())?;
    ensure(omega.is_symmetric() && oracle_admits(&cut_lang(), &omega), || {
        "cut: returned fractional polymorphism fails the oracle".into()
    })?;

    let start = Instant::now();
    let infeasible = commands::check_language(&eq, 2, None, &opts).map_err(|e| e.to_string())?;
    let t_eq = start.elapsed();
    ensure(infeasible.code == 1 && infeasible.report.starts_with("INFEASIBLE"), || {
        format!("eq: exit {}", infeasible.code)
    })?;
    ensure(infeasible.report.contains("\"verified\": true"), || "eq: certificate not verified".into())?;
    let eq_lang = Language::new(dom(2)).with("eq", catalog::equality(dom(2))).unwrap();
    let SymmetricSearch::Infeasible(proof) =
        find_symmetric_fpoly(&eq_lang, 2, &Caps::default()).map_err(|e| e.to_string())?
    else {
        return Err("eq: library search reported feasible".into());
    };
    ensure(farkas_holds(&proof.lp, &proof.farkas), || "eq: Farkas vector fails recomputation".into())?;
    within(t_cut, Duration::from_secs(1), "cut check")?;
    within(t_eq, Duration::from_secs(1), "eq check")?;
    Ok(format!(
        "cut FEASIBLE ({} operations, {t_cut:.2?}), eq INFEASIBLE ({} multipliers, {t_eq:.2?})",
        omega.support().len(),
        proof.active_rows().count()
    ))
}

fn criterion_2() -> Check {
    let lang = cut_lang();
    let caps = Caps::default();
    let start = Instant::now();
    let mut sizes = Vec::new();
    for m in [3, 4] {
        let lifted = lift_to(&lang, &binary_seed(), m, &caps).map_err(|e| e.to_string())?;
        ensure(lifted.arity_in() == m && lifted.is_symmetric(), || format!("m={m}: not symmetric"))?;
        ensure(oracle_admits(&lang, &lifted), || format!("m={m}: oracle rejects the lift"))?;
        ensure(admits(&lang, &lifted, caps.admits).unwrap_or(false), || format!("m={m}: library rejects the lift"))?;
        sizes.push(format!("m={m}: {} operations", lifted.support().len()));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120), "lifting")?;
    Ok(format!("{} ({elapsed:.2?})", sizes.join(", ")))
}

fn criterion_3() -> Check {
    let lang = cut_lang();
    let audit = ProofAudit::new(&binary_seed(), &Caps::default()).map_err(|e| e.to_string())?;
    ensure(audit.graph.arity() == 3, || "graph arity is not 3".into())?;
    for cert in &audit.certificates {
        ensure(cert.check(&audit.graph), || format!("certificate for sink {:?} fails", cert.sink))?;
    }
    let counts = audit.run(&lang, 5).map_err(|e| e.to_string())?;
    let perms = counts.iter().find(|(name, _)| *name == "permutation closure").map(|c| c.1);
    ensure(perms == Some(audit.graph.len() * 6), || format!("permutation closure covered {perms:?}"))?;
    let steps = counts.iter().find(|(name, _)| *name == "single steps").map(|c| c.1);
    ensure(steps == Some(5), || format!("single steps checked {steps:?}"))?;
    let summary: Vec<String> = counts.iter().map(|(name, n)| format!("{name} {n}")).collect();
    Ok(format!(
        "{} vertices, {} sinks; {}",
        audit.graph.len(),
        audit.decomposition.sinks.len(),
        summary.join(", ")
    ))
}

fn cut_with_unaries() -> Arc<Language<Rational>> {
    let mut lang = cut_lang();
    for (name, f) in catalog::zero_one_unaries(dom(2)) {
        lang.push(name, f).unwrap();
    }
    Arc::new(lang)
}

fn oracle_minimum(inst: &Instance<Rational>) -> Rational {
    let terms: Vec<_> = inst
        .terms()
        .iter()
        .map(|t| {
            let f = inst.term_function(t);
            ((f.arity(), f.table().to_vec()), t.scope.clone())
        })
        .collect();
    vcsp_oracles::vcsp::minimum(inst.domain().size(), inst.nodes(), &terms).0
}

fn seeded_instances() -> Vec<Instance<Rational>> {
    let lang = cut_with_unaries();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..100)
        .map(|_| {
            let nodes = rng.random_range(2..=6);
            let terms = rng.random_range(0..=10);
            Instance::random(lang.clone(), nodes, terms, rng.random()).unwrap()
        })
        .collect()
}

fn criterion_4() -> Check {
    let caps = Caps::default();
    let start = Instant::now();
    for (i, inst) in seeded_instances().iter().enumerate() {
        let t = check_tightness(inst, &caps).map_err(|e| e.to_string())?;
        let expected = oracle_minimum(inst);
        ensure(t.integral == expected, || format!("instance {i}: brute force {} vs oracle {expected}", t.integral))?;
        ensure(t.blp == expected, || format!("instance {i}: BLP {} vs minimum {expected}", t.blp))?;
    }
    let elapsed = start.elapsed();
    let eq: Arc<Language<Rational>> = Arc::new(Language::new(dom(2)).with("eq", catalog::equality(dom(2))).unwrap());
    let mut triangle = Instance::new(eq, 3);
    for scope in [[0, 1], [1, 2], [0, 2]] {
        triangle.add_named_term("eq", scope.to_vec()).unwrap();
    }
    let t = check_tightness(&triangle, &caps).map_err(|e| e.to_string())?;
    ensure(t.blp == q(0, 1) && t.integral == q(1, 1) && t.gap == q(1, 1), || {
        format!("eq triangle: BLP {}, integral {}", t.blp, t.integral)
    })?;
    within(elapsed, Duration::from_secs(60), "100 instances")?;
    Ok(format!("100/100 tight ({elapsed:.2?}); eq triangle BLP 0, integral 1, gap 1"))
}

fn criterion_5() -> Check {
    let caps = Caps::default();
    let mut rounded = 0;
    for (i, inst) in seeded_instances().iter().enumerate() {
        let t = check_tightness(inst, &caps).map_err(|e| e.to_string())?;
        if !t.is_tight() {
            continue;
        }
        let x = extract_labeling(inst, &caps).map_err(|e| format!("instance {i}: {e}"))?;
        let cost = inst.evaluate(&x).map_err(|e| e.to_string())?;
        ensure(cost == t.blp, || format!("instance {i}: labeling costs {cost}, BLP {}", t.blp))?;
        rounded += 1;
    }
    Ok(format!("{rounded} labelings with cost equal to the BLP optimum"))
}

fn all_tournaments(d: usize) -> Vec<Tournament> {
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
    vcsp_oracles::all_tuples(2, pairs.len())
        .into_iter()
        .map(|bits| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(bits)
                .map(|(&(a, b), bit)| if bit == 0 { (a, b) } else { (b, a) })
                .collect();
            Tournament::new(dom(d), &edges).unwrap()
        })
        .collect()
}

fn audit_acyclify(t: &Tournament) -> std::result::Result<usize, String> {
    let d = t.size();
    let plan = acyclify(t);
    ensure(plan.flips.len() <= d * d.saturating_sub(1) / 2, || format!("{} flips on {d} labels", plan.flips.len()))?;
    let mut current = t.clone();
    for f in &plan.flips {
        ensure(
            current.has_edge(f.from, f.to) && current.has_edge(f.to, f.witness) && current.has_edge(f.witness, f.from),
            || format!("flip {f:?} is not on a 3-cycle"),
        )?;
        current.reverse(f.from, f.to).map_err(|e| e.to_string())?;
    }
    let cyclic = (0..d).any(|a| (0..d).any(|b| (0..d).any(|c| current.has_edge(a, b) && current.has_edge(b, c) && current.has_edge(c, a))));
    ensure(!cyclic && current == plan.tournament, || "result still has a 3-cycle".into())?;
    Ok(plan.flips.len())
}

fn scrambled_language(d: usize, seed: u64) -> (Vec<usize>, Language<Rational>) {
    let (order, functions) = vcsp_oracles::stp::scrambled_submodular(d, seed);
    let mut lang = Language::new(dom(d));
    for (i, (n, t)) in functions.into_iter().enumerate() {
        lang.push(format!("f{i}"), CostFunction::new(dom(d), n, t).unwrap()).unwrap();
    }
    (order, lang)
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut tournaments = 0;
    let mut flips = 0;
    for d in 1..=4 {
        for t in all_tournaments(d) {
            flips += audit_acyclify(&t)?;
            tournaments += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let t = Tournament::from_fn(dom(5), |_, _| rng.random_bool(0.5));
        flips += audit_acyclify(&t)?;
        tournaments += 1;
    }
    let cap = Caps::default().admits;
    let mut replays = 0;
    let mut replayed_flips = 0;
    for seed in 0..50u64 {
        let d = 2 + (seed % 2) as usize;
        let (hidden, lang) = scrambled_language(d, seed);
        let mut starts = vec![MultimorphismPair::from_order(dom(d), &hidden).unwrap()];
        starts.extend(
            all_tournaments(d)
                .iter()
                .map(tournament_to_pair)
                .filter(|p| oracle_admits_pair(&lang, p)),
        );
        for pair in starts {
            let result = stp_to_submodular(&lang, &pair, cap).map_err(|e| format!("seed {seed}: {e}"))?;
            for step in &result.steps {
                ensure(oracle_admits_pair(&lang, &step.intermediate) && oracle_admits_pair(&lang, &step.flipped), || {
                    format!("seed {seed}: a flip lost admittance")
                })?;
            }
            let (meet, join) = vcsp_oracles::stp::min_max_under(&result.order);
            ensure(vcsp_oracles::vcsp::admits_pair(d, &tables(&lang), &meet, &join), || {
                format!("seed {seed}: recovered order {:?} is not submodular", result.order)
            })?;
            replays += 1;
            replayed_flips += result.steps.len();
        }
        // Cyclic tournaments are only admitted by modular languages, so
        // also replay them on the language's unary part.
        let unary = Language::new(dom(d)).with("u", lang.function(0).clone()).unwrap();
        for t in all_tournaments(d).iter().filter(|t| !t.is_acyclic()) {
            let result = stp_to_submodular(&unary, &tournament_to_pair(t), cap).map_err(|e| format!("seed {seed}: {e}"))?;
            for step in &result.steps {
                ensure(oracle_admits_pair(&unary, &step.intermediate) && oracle_admits_pair(&unary, &step.flipped), || {
                    format!("seed {seed}: a flip lost admittance on the unary part")
                })?;
            }
            replays += 1;
            replayed_flips += result.steps.len();
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "tournament suite")?;
    Ok(format!(
        "{tournaments} tournaments acyclified with {flips} valid flips; 50 languages, {replays} runs, {replayed_flips} verified flips ({elapsed:.2?})"
    ))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let entry = |rng: &mut ChaCha8Rng| q(rng.random_range(-6..=6), rng.random_range(1..=8));
    let mut tally = [0usize; 3];
    for i in 0..500 {
        let n = rng.random_range(1..=4);
        let rows = rng.random_range(0..=3);
        let a: Vec<Vec<Rational>> = (0..rows).map(|_| (0..n).map(|_| entry(&mut rng)).collect()).collect();
        let b: Vec<Rational> = (0..rows).map(|_| entry(&mut rng)).collect();
        let c: Vec<Rational> = (0..n).map(|_| entry(&mut rng)).collect();
        let lp = LinearProgram::new(a.clone(), b.clone(), c.clone()).map_err(|e| e.to_string())?;
        let outcome = ratlp::solve(&lp);
        ensure(ratlp::verify_outcome(&lp, &outcome), || format!("LP {i}: certificate fails"))?;
        let expected = vcsp_oracles::lp::solve(&a, &b, &c);
        match (&outcome, &expected) {
            (LpOutcome::Optimal { value, .. }, Verdict::Optimal(v)) if value == v => tally[0] += 1,
            (LpOutcome::Infeasible { farkas }, Verdict::Infeasible) => {
                ensure(farkas_holds(&lp, farkas), || format!("LP {i}: Farkas vector fails recomputation"))?;
                tally[1] += 1;
            }
            (LpOutcome::Unbounded { .. }, Verdict::Unbounded) => tally[2] += 1,
            _ => return Err(format!("LP {i}: solver {outcome:?}, oracle {expected:?}")),
        }
    }
    Ok(format!(
        "500/500 agree ({} optimal, {} infeasible, {} unbounded)",
        tally[0], tally[1], tally[2]
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("decision procedure", criterion_1),
        ("constructive lifting", criterion_2),
        ("mapping graph proof objects", criterion_3),
        ("BLP tightness", criterion_4),
        ("rounding", criterion_5),
        ("tournament flips", criterion_6),
        ("LP core", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(msg)
        });
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
