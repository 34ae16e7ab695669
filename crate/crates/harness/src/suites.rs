use std::collections::{BTreeMap, BTreeSet};

use cylinder::{build_closed_digraphs, build_cylinder, interval, is_skew_symmetric, to_dot, ClosedDigraph, ClosedVertex, Label};
use formula_core::{brute_force_sat_with_cap, evaluate, exhaustive_sat, solve_2sat, Clause, CnfFormula, Literal, Status};
use linearize::{branchings, linearize, preserves_labels};
use nested::{lin_search, max_nested, max_nested_bruteforce, minimize_three_way, three_way_check, valid_paths};
use pivot_transform::{certify_equisat, complete, expand, pivoted_to_cnf, to_pivoted};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::random::{random_3cnf, random_cnf, random_labeled_dag, random_nested, random_pivoted};

const KEPT_DETAILS: usize = 10;

/// Outcome of one property suite.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    /// Failures here are hard failures in strict mode.
    pub strict: bool,
    pub cases: usize,
    pub failures: usize,
    pub stats: BTreeMap<String, u64>,
    /// The first few failures, each with a reproducing instance.
    pub details: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str, strict: bool) -> Self {
        Self {
            name: name.to_string(),
            strict,
            ..Self::default()
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.details.len() < KEPT_DETAILS {
                self.details.push(detail());
            }
        }
    }

    fn bump(&mut self, key: &str) {
        *self.stats.entry(key.to_string()).or_default() += 1;
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn two_sat_case(f: &CnfFormula) -> Result<Status, String> {
    let out = solve_2sat(f).map_err(|e| e.to_string())?;
    let truth = exhaustive_sat(f).is_some();
    match out.verdict.status {
        Status::Sat if truth => {
            let w = out.verdict.witness.as_ref().ok_or("SAT without a model")?;
            if !evaluate(f, w).unwrap_or(false) {
                return Err("model does not satisfy".into());
            }
            Ok(Status::Sat)
        }
        Status::Unsat if !truth => {
            let c = out.contradiction.as_ref().ok_or("UNSAT without a contradiction")?;
            if !c.replays(f) {
                return Err("contradiction does not replay".into());
            }
            Ok(Status::Unsat)
        }
        s => Err(format!("solver {s}, enumeration {}", if truth { "SAT" } else { "UNSAT" })),
    }
}

/// The 2-SAT solver against enumeration on every family of at most six one- or
/// two-literal clauses over three atoms, then on `random` instances with up to 12 atoms.
pub fn two_sat_suite(seed: u64, random: usize) -> SuiteReport {
    let mut report = SuiteReport::new("two-sat", true);
    let mut pool = Vec::new();
    for a in 1..=3u32 {
        for na in [false, true] {
            pool.push(Clause::new(&[Literal::new(a, na).expect("atom")]).expect("clause").expect("non-tautology"));
            for b in a + 1..=3 {
                for nb in [false, true] {
                    let lits = [Literal::new(a, na).expect("atom"), Literal::new(b, nb).expect("atom")];
                    pool.push(Clause::new(&lits).expect("clause").expect("non-tautology"));
                }
            }
        }
    }
    fn subsets(pool: &[Clause], max: usize, start: usize, cur: &mut Vec<Clause>, visit: &mut impl FnMut(&[Clause])) {
        visit(cur);
        if cur.len() == max {
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i].clone());
            subsets(pool, max, i + 1, cur, visit);
            cur.pop();
        }
    }
    subsets(&pool, 6, 0, &mut Vec::new(), &mut |cs| {
        let f = CnfFormula::new(3, cs.to_vec()).expect("valid clauses");
        let r = two_sat_case(&f);
        report.bump("exhaustive");
        if let Ok(s) = &r {
            report.bump(&format!("exhaustive.{s}"));
        }
        report.record(r.is_ok(), || format!("{}: {f}", r.clone().unwrap_err()));
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let f = random_cnf(&mut rng, 1, 12, 2, 40);
        let r = two_sat_case(&f);
        report.bump("random");
        if let Ok(s) = &r {
            report.bump(&format!("random.{s}"));
        }
        report.record(r.is_ok(), || format!("{}: {f}", r.clone().unwrap_err()));
    }
    report
}

/// Oracle verdicts of random 3-CNF formulas against their pivoted forms, before and
/// after completion.
pub fn equisat_suite(seed: u64, count: usize, max_atoms: u32, cap: u32) -> SuiteReport {
    let mut report = SuiteReport::new("equisat", true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x65_71);
    for _ in 0..count {
        let f = random_3cnf(&mut rng, max_atoms, 60);
        let pf = to_pivoted(&f);
        let cert = certify_equisat(&f, &pf, cap);
        let done = certify_equisat(&f, &complete(&pf), cap);
        report.bump(&format!("input.{}", cert.original_status));
        report.record(cert.agree && done.agree, || {
            format!(
                "input {}, pivoted {}, completed {}: {f}",
                cert.original_status, cert.pivoted_status, done.pivoted_status
            )
        });
    }
    report
}

/// Completion keeps the oracle verdict on random pivoted formulas, half drawn directly and
/// half produced by the transform.
pub fn completion_suite(seed: u64, count: usize, cap: u32) -> SuiteReport {
    let mut report = SuiteReport::new("completion", true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x63_6f);
    for i in 0..count {
        let pf = if i % 2 == 0 { random_pivoted(&mut rng) } else { to_pivoted(&random_3cnf(&mut rng, 8, 30)) };
        let done = complete(&pf);
        let before = brute_force_sat_with_cap(&expand(&pf), cap).status;
        let after = pivoted_to_cnf(&done).map(|cnf| brute_force_sat_with_cap(&cnf, cap).status);
        report.bump(&format!("verdict.{before}"));
        if !pf.is_complete() {
            report.bump("incomplete-input");
        }
        let ok = before != Status::Abort && after.as_ref() == Ok(&before) && complete(&done) == done;
        report.record(ok, || format!("before {before}, after {after:?}: {}", expand(&pf)));
    }
    report
}

fn plain_closed(g: &cylinder::LabeledDigraph<u32>) -> ClosedDigraph {
    let g = g.map_vertices(|&v| ClosedVertex::plain(Literal::pos(v + 1)));
    ClosedDigraph::from_dag(g).expect("generated acyclic")
}

/// Structural invariants on `count` random formulas and as many random labeled DAGs:
/// cylinder skew symmetry, loop-free intervals, branching-free linearization that keeps
/// labels, and the label discipline of the nested search.
pub fn structural_suite(seed: u64, count: usize, budget_scale: f64) -> Vec<SuiteReport> {
    let mut skew = SuiteReport::new("skew-symmetry", true);
    let mut loops = SuiteReport::new("interval-loop-freedom", true);
    let mut branch = SuiteReport::new("no-branchings", true);
    let mut labels = SuiteReport::new("label-preservation", true);
    let mut discipline = SuiteReport::new("nested-label-discipline", true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x73_74);

    let mut check_closed = |c: &ClosedDigraph, base: u32, origin: &dyn Fn() -> String| {
        let lin = match linearize(c, base, budget_scale) {
            Ok(lin) => lin,
            Err(_) => {
                branch.bump("aborted");
                return;
            }
        };
        branch.record(branchings(&lin.graph).is_empty(), || format!("branching left in {}", origin()));
        labels.record(preserves_labels(c, &lin), || format!("labels changed in {}", origin()));
        let cols: Vec<Vec<Label>> = lin.columns.iter().map(|c| c.labels.clone()).collect();
        match lin_search(&cols) {
            Ok(out) => {
                let ok = out.finals.iter().all(|(w, d)| {
                    d.respects_label_discipline() && d.edges().all(|(_, v, _)| out.column_of[v] < out.column_of[*w])
                });
                discipline.record(ok, || format!("final nested digraph breaks the discipline in {}", origin()));
            }
            Err(_) => discipline.bump("aborted"),
        }
    };

    for _ in 0..count {
        let f = random_3cnf(&mut rng, 8, 24);
        let pf = complete(&to_pivoted(&f));
        let cyl = build_cylinder(&pf).expect("completed");
        skew.record(is_skew_symmetric(&cyl), || format!("cylinder of {f}"));
        let lits: BTreeSet<Literal> = cyl.vertices().copied().collect();
        for &p in &lits {
            if lits.contains(&p.negate()) {
                let iv = interval(&cyl, &p, &p.negate());
                loops.record(iv.graph.is_acyclic(), || format!("interval [{p}, {}] of {f}", p.negate()));
            }
        }
        for c in build_closed_digraphs(&cyl) {
            check_closed(&c, pf.m(), &|| format!("a closed digraph of {f}"));
        }
        let dag = random_labeled_dag(&mut rng, 9, 3);
        let c = plain_closed(&dag);
        check_closed(&c, 3, &|| format!("random DAG {}", to_dot("g", &c.graph)));
    }
    vec![skew, loops, branch, labels, discipline]
}

/// The exact nested filter against path enumeration on tiny digraphs: same result, every
/// valid path kept, every kept edge on a valid path.
pub fn nested_maximality_suite(seed: u64, count: usize) -> SuiteReport {
    let mut report = SuiteReport::new("max-nested-maximality", true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e_65);
    for _ in 0..count {
        let g = random_nested(&mut rng, 10);
        let depth = rng.gen_range(1..=4);
        let fast = match max_nested(&g, depth) {
            Ok((fast, _)) => fast,
            Err(e) => {
                report.record(false, || format!("{e} at depth {depth}: {g:?}"));
                continue;
            }
        };
        let slow = max_nested_bruteforce(&g, depth);
        let before: BTreeSet<Vec<usize>> = valid_paths(&g, depth).into_iter().collect();
        let after: BTreeSet<Vec<usize>> = valid_paths(&fast, depth).into_iter().collect();
        let used: BTreeSet<(usize, usize)> = after.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1]))).collect();
        let kept: BTreeSet<(usize, usize)> = fast.edges().map(|(u, v, _)| (u, v)).collect();
        if !fast.is_empty() {
            report.bump("non-empty");
        }
        report.record(fast == slow && before == after && used == kept, || format!("depth {depth}: {g:?}"));
    }
    report
}

/// The three equivalent statements about a closed digraph on `count` digraphs: closed
/// digraphs of small random formulas, topped up with random labeled DAGs. Each
/// disagreement is reported with an edge-minimal witness.
pub fn three_way_suite(seed: u64, count: usize, chain_cap: usize) -> SuiteReport {
    let mut report = SuiteReport::new("three-way", false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x74_77);
    let mut from_formulas = 0;
    while report.cases < count {
        let mut graphs: Vec<(String, cylinder::LabeledDigraph<ClosedVertex>)> = Vec::new();
        if from_formulas < count / 2 {
            let f = random_3cnf(&mut rng, 6, 14);
            let pf = complete(&to_pivoted(&f));
            if pf.m() > 16 {
                continue;
            }
            let cyl = build_cylinder(&pf).expect("completed");
            for c in build_closed_digraphs(&cyl) {
                if c.num_edges() > 0 {
                    graphs.push((format!("closed digraph of {f}"), c.graph));
                }
            }
            from_formulas += graphs.len();
            report.stats.insert("from-formulas".into(), from_formulas as u64);
        } else {
            let g = random_labeled_dag(&mut rng, 8, 3);
            if g.num_edges() > 0 {
                graphs.push(("random DAG".into(), plain_closed(&g).graph));
            }
        }
        for (origin, g) in graphs {
            match three_way_check(&g, chain_cap) {
                Ok(r) => {
                    if r.no_antichain {
                        report.bump("no-antichain");
                    }
                    report.record(r.consistent(), || {
                        let w = minimize_three_way(&g, chain_cap);
                        format!("{origin}: {r:?}; minimized witness {}", to_dot("witness", &w))
                    });
                }
                Err(_) => report.bump("chain-cap"),
            }
        }
    }
    report
}
