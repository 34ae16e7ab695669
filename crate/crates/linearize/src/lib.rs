//! Linearization: rewrites a closed digraph until every vertex has at most one predecessor
//! and one successor, so the result splits into columns (top-to-root paths).
//!
//! Roots and tops are lifted first (one copy per incident edge). Then branchings are
//! multiplied bottom-up. Each multiplication gets a fresh pair `p`; edges below the copies
//! gain `+p` and edges above them gain `¬p`.

use std::collections::BTreeSet;
use std::fmt;

use cylinder::{ClosedDigraph, ClosedVertex, Label, LabeledDigraph};
use formula_core::Counters;
use pivot_transform::Entry;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinearizeError {
    #[error("linearization blowup: {rewrites} rewrites exceed the 10(|V|+|E|)^2 budget of {budget}")]
    Blowup { rewrites: u64, budget: u64 },
}

/// A vertex of the rewritten digraph: a unique id plus the closed-digraph vertex it copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinVertex {
    pub id: u32,
    pub origin: ClosedVertex,
}

impl fmt::Display for LinVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.origin, self.id)
    }
}

/// Fresh pair introduced while multiplying the branching `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreshPair {
    pub pivot: u32,
    pub origin: ClosedVertex,
    pub copies: u32,
}

/// One top-to-root path of the linearized digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub vertices: Vec<LinVertex>,
    pub labels: Vec<Label>,
}

impl Column {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The path in the closed digraph this column copies.
    pub fn project(&self) -> Vec<ClosedVertex> {
        self.vertices.iter().map(|v| v.origin).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Linearized {
    pub graph: LabeledDigraph<LinVertex>,
    pub columns: Vec<Column>,
    pub fresh: Vec<FreshPair>,
    /// Highest pivot index not created here; fresh pairs are numbered above it.
    pub base: u32,
    pub counters: Counters,
    /// Snapshots after each rewrite stage, kept only when tracing.
    pub steps: Vec<(String, LabeledDigraph<LinVertex>)>,
}

impl Linearized {
    /// Distinct labels over all columns.
    pub fn distinct_labels(&self) -> BTreeSet<Label> {
        self.columns.iter().flat_map(|c| c.labels.iter().cloned()).collect()
    }
}

/// Budget on counted rewrites: `10·(|V|+|E|)²·scale`.
pub fn rewrite_budget(g: &LabeledDigraph<ClosedVertex>, scale: f64) -> u64 {
    let size = (g.num_vertices() + g.num_edges()) as f64;
    (10.0 * size * size * scale).max(1.0) as u64
}

/// Highest pivot index occurring in any label.
pub fn max_pivot(g: &LabeledDigraph<ClosedVertex>) -> u32 {
    g.edges().flat_map(|(_, _, l)| l.iter().map(|e| e.pivot)).max().unwrap_or(0)
}

/// Role of a vertex. A top or root with two or more edges is also a branching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VertexClass {
    pub top: bool,
    pub root: bool,
    pub branching: bool,
}

impl VertexClass {
    /// One edge in, one edge out.
    pub fn is_internal(&self) -> bool {
        !self.top && !self.root && !self.branching
    }
}

pub fn classify<V: Ord + Clone>(g: &LabeledDigraph<V>) -> std::collections::BTreeMap<V, VertexClass> {
    g.vertices()
        .map(|v| {
            let (i, o) = (g.in_degree(v), g.out_degree(v));
            let class = VertexClass {
                top: i == 0,
                root: o == 0,
                branching: i > 1 || o > 1,
            };
            (v.clone(), class)
        })
        .collect()
}

/// Edges leaving a proper ancestor of `sites` (`Up`) and edges entering a proper
/// descendant (`Down`). In an acyclic digraph the two sets are disjoint.
pub fn up_down<V: Ord + Clone>(g: &LabeledDigraph<V>, sites: &[V]) -> (BTreeSet<(V, V)>, BTreeSet<(V, V)>) {
    let mut above = g.backward_closure_of(sites);
    let mut below = g.forward_closure_of(sites);
    for c in sites {
        above.remove(c);
        below.remove(c);
    }
    let mut up = BTreeSet::new();
    let mut down = BTreeSet::new();
    for (a, b, _) in g.edges() {
        if above.contains(a) {
            up.insert((a.clone(), b.clone()));
        } else if below.contains(b) {
            down.insert((a.clone(), b.clone()));
        }
    }
    (up, down)
}

/// Non-top, non-root vertices with two or more predecessors or successors.
pub fn branchings<V: Ord + Clone>(g: &LabeledDigraph<V>) -> Vec<V> {
    g.vertices()
        .filter(|v| {
            let (i, o) = (g.in_degree(v), g.out_degree(v));
            i > 0 && o > 0 && (i > 1 || o > 1)
        })
        .cloned()
        .collect()
}

/// Linearizes `closed`, numbering fresh pairs above `base` (at least the largest pivot in
/// any label).
pub fn linearize(closed: &ClosedDigraph, base: u32, budget_scale: f64) -> Result<Linearized, LinearizeError> {
    linearize_traced(closed, base, budget_scale, false)
}

/// Like [`linearize`]; with `trace` set, a snapshot is kept after every stage.
pub fn linearize_traced(
    closed: &ClosedDigraph,
    base: u32,
    budget_scale: f64,
    trace: bool,
) -> Result<Linearized, LinearizeError> {
    let base = base.max(max_pivot(&closed.graph));
    let mut lin = Linearizer::new(closed, base, rewrite_budget(&closed.graph, budget_scale), trace);
    lin.snapshot("input".into());
    lin.lift_roots();
    lin.snapshot("lift-roots".into());
    lin.lift_tops();
    lin.snapshot("lift-tops".into());
    lin.check()?;
    while let Some(u) = lin.lowest_branching() {
        lin.multiply(u);
        lin.snapshot(format!("multiply-{}", u.origin));
        lin.check()?;
    }
    lin.lift_tops();
    lin.snapshot("final-lift".into());
    lin.check()?;
    Ok(lin.finish())
}

struct Linearizer {
    g: LabeledDigraph<LinVertex>,
    next_id: u32,
    base: u32,
    fresh: Vec<FreshPair>,
    rewrites: u64,
    budget: u64,
    counters: Counters,
    steps: Option<Vec<(String, LabeledDigraph<LinVertex>)>>,
}

impl Linearizer {
    fn new(closed: &ClosedDigraph, base: u32, budget: u64, trace: bool) -> Self {
        let mut next_id = 0;
        let mut ids = std::collections::BTreeMap::new();
        for v in closed.graph.vertices() {
            ids.insert(*v, LinVertex { id: next_id, origin: *v });
            next_id += 1;
        }
        let g = closed.graph.map_vertices(|v| ids[v]);
        let mut counters = Counters::new();
        counters.set("lin.input_vertices", g.num_vertices() as u64);
        counters.set("lin.input_edges", g.num_edges() as u64);
        counters.set("lin.budget", budget);
        Self {
            g,
            next_id,
            base,
            fresh: Vec::new(),
            rewrites: 0,
            budget,
            counters,
            steps: trace.then(Vec::new),
        }
    }

    fn snapshot(&mut self, name: String) {
        if let Some(steps) = &mut self.steps {
            steps.push((name, self.g.clone()));
        }
    }

    fn check(&mut self) -> Result<(), LinearizeError> {
        self.counters.max("lin.max_vertices", self.g.num_vertices() as u64);
        self.counters.max("lin.max_edges", self.g.num_edges() as u64);
        if self.rewrites > self.budget {
            log::debug!("linearization aborted after {} rewrites", self.rewrites);
            return Err(LinearizeError::Blowup {
                rewrites: self.rewrites,
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn copy_of(&mut self, v: &LinVertex) -> LinVertex {
        let c = LinVertex {
            id: self.next_id,
            origin: v.origin,
        };
        self.next_id += 1;
        self.rewrites += 1;
        self.g.add_vertex(c);
        c
    }

    fn edge(&mut self, u: LinVertex, v: LinVertex, label: Label) {
        self.rewrites += 1;
        self.g.add_edge(u, v, label);
    }

    fn lift_roots(&mut self) {
        for r in self.g.roots() {
            let preds: Vec<LinVertex> = self.g.predecessors(&r).copied().collect();
            if preds.len() < 2 {
                continue;
            }
            for x in preds {
                let label = self.g.label(&x, &r).cloned().expect("edge");
                let c = self.copy_of(&r);
                self.edge(x, c, label);
            }
            self.g.remove_vertex(&r);
            self.counters.add("lin.lifts", 1);
        }
    }

    fn lift_tops(&mut self) {
        for t in self.g.tops() {
            let succs: Vec<LinVertex> = self.g.successors(&t).copied().collect();
            if succs.len() < 2 {
                continue;
            }
            for y in succs {
                let label = self.g.label(&t, &y).cloned().expect("edge");
                let c = self.copy_of(&t);
                self.edge(c, y, label);
            }
            self.g.remove_vertex(&t);
            self.counters.add("lin.lifts", 1);
        }
    }

    /// Smallest branching with no branching below it.
    fn lowest_branching(&self) -> Option<LinVertex> {
        let is_branching: BTreeSet<LinVertex> = branchings(&self.g).into_iter().collect();
        if is_branching.is_empty() {
            return None;
        }
        let order = self.g.topological_order().expect("linearization keeps the digraph acyclic");
        let mut below: BTreeSet<LinVertex> = BTreeSet::new();
        let mut candidates = Vec::new();
        for v in order.iter().rev() {
            let has_below = self.g.successors(v).any(|w| below.contains(w));
            if is_branching.contains(v) && !has_below {
                candidates.push(*v);
            }
            if has_below || is_branching.contains(v) {
                below.insert(*v);
            }
        }
        candidates.into_iter().min()
    }

    fn is_linear(&self, v: &LinVertex) -> bool {
        self.g.in_degree(v) == 1 && self.g.out_degree(v) == 1
    }

    /// Path `w, x₁, …, x_k` with `w` a top or branching and each `xᵢ` linear, ending at a
    /// predecessor of `u`.
    fn in_branch(&self, x: LinVertex) -> Vec<LinVertex> {
        let mut path = vec![x];
        let mut cur = x;
        while self.is_linear(&cur) {
            cur = *self.g.predecessors(&cur).next().expect("linear vertex");
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Path `y, …, root` of linear vertices.
    fn out_branch(&self, y: LinVertex) -> Vec<LinVertex> {
        let mut path = vec![y];
        let mut cur = y;
        while self.g.out_degree(&cur) > 0 {
            debug_assert!(self.is_linear(&cur), "branching below the chosen branching");
            cur = *self.g.successors(&cur).next().expect("successor");
            path.push(cur);
        }
        path
    }

    fn label(&self, u: &LinVertex, v: &LinVertex) -> Label {
        self.g.label(u, v).cloned().expect("edge")
    }

    fn multiply(&mut self, u: LinVertex) {
        let ins: Vec<Vec<LinVertex>> = self.g.predecessors(&u).copied().collect::<Vec<_>>().into_iter().map(|x| self.in_branch(x)).collect();
        let outs: Vec<Vec<LinVertex>> = self.g.successors(&u).copied().collect::<Vec<_>>().into_iter().map(|y| self.out_branch(y)).collect();
        let (t, n) = (ins.len(), outs.len());
        let m = t.max(n);
        let mut copies = Vec::with_capacity(m);
        let mut in_used = vec![false; t];
        let mut out_used = vec![false; n];
        for i in 0..m {
            let cu = self.copy_of(&u);
            copies.push(cu);

            let branch = &ins[i % t];
            let last = *branch.last().expect("non-empty branch");
            let into_u = self.label(&last, &u);
            if !in_used[i % t] {
                in_used[i % t] = true;
                self.edge(last, cu, into_u);
            } else {
                let mut prev = branch[0];
                for k in 1..branch.len() {
                    let x = self.copy_of(&branch[k]);
                    let l = self.label(&branch[k - 1], &branch[k]);
                    self.edge(prev, x, l);
                    prev = x;
                }
                self.edge(prev, cu, into_u);
            }

            let branch = &outs[i % n];
            let from_u = self.label(&u, &branch[0]);
            if !out_used[i % n] {
                out_used[i % n] = true;
                self.edge(cu, branch[0], from_u);
            } else {
                let mut prev = self.copy_of(&branch[0]);
                self.edge(cu, prev, from_u);
                for k in 1..branch.len() {
                    let x = self.copy_of(&branch[k]);
                    let l = self.label(&branch[k - 1], &branch[k]);
                    self.edge(prev, x, l);
                    prev = x;
                }
            }
        }
        self.g.remove_vertex(&u);

        let pivot = self.base + self.fresh.len() as u32 + 1;
        self.fresh.push(FreshPair {
            pivot,
            origin: u.origin,
            copies: m as u32,
        });
        let (up, down) = up_down(&self.g, &copies);
        for (a, b) in up {
            self.g.label_mut(&a, &b).expect("edge").insert(Entry::neg(pivot));
            self.rewrites += 1;
        }
        for (a, b) in down {
            self.g.label_mut(&a, &b).expect("edge").insert(Entry::pos(pivot));
            self.rewrites += 1;
        }
        self.counters.add("lin.branchings", 1);
        self.counters.max("lin.max_copies", m as u64);
    }

    fn finish(mut self) -> Linearized {
        let mut columns = Vec::new();
        for top in self.g.tops() {
            if self.g.out_degree(&top) == 0 {
                continue;
            }
            let mut vertices = vec![top];
            let mut labels = Vec::new();
            let mut cur = top;
            while let Some(next) = self.g.successors(&cur).next().copied() {
                debug_assert_eq!(self.g.out_degree(&cur), 1);
                labels.push(self.label(&cur, &next));
                vertices.push(next);
                cur = next;
            }
            columns.push(Column { vertices, labels });
        }
        self.counters.set("lin.rewrites", self.rewrites);
        self.counters.set("lin.columns", columns.len() as u64);
        self.counters.set("lin.fresh_pairs", self.fresh.len() as u64);
        self.counters.set("lin.vertices", self.g.num_vertices() as u64);
        self.counters.set("lin.edges", self.g.num_edges() as u64);
        Linearized {
            graph: self.g,
            columns,
            fresh: self.fresh,
            base: self.base,
            counters: self.counters,
            steps: self.steps.unwrap_or_default(),
        }
    }
}

/// True iff every edge copies an edge of `closed`, its label restricted to pivots up to
/// `lin.base` equals the original label, and every other entry belongs to a registered
/// fresh pair.
pub fn preserves_labels(closed: &ClosedDigraph, lin: &Linearized) -> bool {
    let fresh: BTreeSet<u32> = lin.fresh.iter().map(|f| f.pivot).collect();
    lin.graph.edges().all(|(u, v, l)| {
        let kept: Label = l.iter().filter(|e| e.pivot <= lin.base).copied().collect();
        closed.graph.label(&u.origin, &v.origin) == Some(&kept)
            && l.iter().all(|e| e.pivot <= lin.base || fresh.contains(&e.pivot))
    })
}
