//! Graph and integer-programming machinery: simple-cycle enumeration,
//! an exact 0/1 maximizer for packing constraints, and topological sorting.
//!
//! Graphs are successor lists indexed `0..n`; lists need not be sorted.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Tarjan's strongly connected components, each sorted, in reverse topological order.
pub fn strongly_connected_components(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, next successor slot)
        let mut work = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut slot)) = work.last_mut() {
            if let Some(&w) = succ[v].get(*slot) {
                *slot += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("component members are on the stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// True when the graph has no directed cycle, self-loops included.
pub fn is_acyclic(succ: &[Vec<usize>]) -> bool {
    succ.iter().enumerate().all(|(v, ws)| !ws.contains(&v))
        && strongly_connected_components(succ).iter().all(|c| c.len() == 1)
}

/// Simple directed cycles, each starting at its smallest vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleSet {
    pub cycles: Vec<Vec<usize>>,
    /// Set when enumeration stopped at the cap.
    pub truncated: bool,
}

impl CycleSet {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Error if enumeration was cut short.
    pub fn complete(self, cap: usize) -> Result<Self> {
        if self.truncated {
            Err(Error::CycleCapExceeded { cap })
        } else {
            Ok(self)
        }
    }
}

struct Johnson<'a> {
    succ: &'a [Vec<usize>],
    start: usize,
    in_scope: Vec<bool>,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    path: Vec<usize>,
    found: CycleSet,
    cap: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, v: usize) {
        let mut todo = vec![v];
        while let Some(u) = todo.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                todo.append(&mut self.blocked_by[u]);
            }
        }
    }

    fn circuit(&mut self, v: usize) -> bool {
        let mut closed = false;
        self.path.push(v);
        self.blocked[v] = true;
        for &w in &self.succ[v] {
            if self.found.truncated {
                break;
            }
            if !self.in_scope[w] {
                continue;
            }
            if w == self.start {
                if self.found.cycles.len() == self.cap {
                    self.found.truncated = true;
                    break;
                }
                self.found.cycles.push(self.path.clone());
                closed = true;
            } else if !self.blocked[w] && self.circuit(w) {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &w in &self.succ[v] {
                if self.in_scope[w] && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.path.pop();
        closed
    }
}

/// Johnson's enumeration of all simple cycles, stopping once more than `cap` exist.
pub fn enumerate_simple_cycles(succ: &[Vec<usize>], cap: usize) -> CycleSet {
    let n = succ.len();
    let mut sorted: Vec<Vec<usize>> = succ.to_vec();
    for ws in &mut sorted {
        ws.sort_unstable();
        ws.dedup();
    }
    let mut j = Johnson {
        succ: &sorted,
        start: 0,
        in_scope: vec![false; n],
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        path: Vec::new(),
        found: CycleSet::default(),
        cap,
    };
    for start in 0..n {
        // the strongly connected piece of start within vertices >= start
        let forward = reach(&sorted, start, |v| v >= start);
        let mut pred = vec![Vec::new(); n];
        for (v, ws) in sorted.iter().enumerate().skip(start) {
            for &w in ws {
                if w >= start {
                    pred[w].push(v);
                }
            }
        }
        let backward = reach(&pred, start, |v| v >= start);
        let mut any = false;
        for v in 0..n {
            j.in_scope[v] = forward[v] && backward[v];
            j.blocked[v] = false;
            j.blocked_by[v].clear();
            any |= j.in_scope[v] && v != start;
        }
        if !any && !sorted[start].contains(&start) {
            continue;
        }
        j.start = start;
        j.circuit(start);
        if j.found.truncated {
            break;
        }
    }
    j.found
}

fn reach(adj: &[Vec<usize>], from: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut todo = vec![from];
    seen[from] = true;
    while let Some(v) = todo.pop() {
        for &w in &adj[v] {
            if allowed(w) && !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    seen
}

/// A linear packing constraint on binary variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// At most `len - 1` of the variables may be one.
    CycleCover(Vec<usize>),
    /// The two variables may not both be one.
    PairExclusion(usize, usize),
}

/// Maximize a nonnegative weighted sum of binary variables under packing constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroOneProgram {
    pub weights: Vec<u64>,
    pub constraints: Vec<Constraint>,
}

/// An optimal assignment and its objective value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub assignment: Vec<bool>,
    pub objective: u64,
}

impl ZeroOneProgram {
    pub fn new(weights: Vec<u64>) -> Self {
        ZeroOneProgram { weights, constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    pub fn add_cycle_cover(&mut self, vars: Vec<usize>) {
        self.constraints.push(Constraint::CycleCover(vars));
    }

    pub fn add_pair_exclusion(&mut self, u: usize, v: usize) {
        self.constraints.push(Constraint::PairExclusion(u, v));
    }

    pub fn objective(&self, assignment: &[bool]) -> u64 {
        self.weights.iter().zip(assignment).filter(|(_, &x)| x).map(|(w, _)| w).sum()
    }

    pub fn is_feasible(&self, assignment: &[bool]) -> bool {
        self.normalized()
            .map(|rows| rows.iter().all(|(vars, limit)| vars.iter().filter(|&&v| assignment[v]).count() <= *limit))
            .unwrap_or(false)
    }

    /// Constraints as deduplicated `(sorted variables, bound on ones)` rows.
    fn normalized(&self) -> Result<Vec<(Vec<usize>, usize)>> {
        let n = self.num_vars();
        let mut rows: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &self.constraints {
            let (mut vars, limit) = match c {
                Constraint::CycleCover(vs) => {
                    let mut vs = vs.clone();
                    vs.sort_unstable();
                    vs.dedup();
                    if vs.is_empty() {
                        return Err(Error::InvalidStructure("empty cycle constraint".into()));
                    }
                    let limit = vs.len() - 1;
                    (vs, limit)
                }
                Constraint::PairExclusion(u, v) if u == v => (vec![*u], 0),
                Constraint::PairExclusion(u, v) => (vec![*u.min(v), *u.max(v)], 1),
            };
            if let Some(&bad) = vars.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidStructure(format!("constraint names variable {bad} of {n}")));
            }
            vars.shrink_to_fit();
            let entry = rows.entry(vars).or_insert(limit);
            *entry = (*entry).min(limit);
        }
        Ok(rows.into_iter().collect())
    }
}

/// Exact maximizer; among optimal assignments returns the lexicographically least.
pub fn solve_max_binary(p: &ZeroOneProgram) -> Result<Solution> {
    let n = p.num_vars();
    let rows = p.normalized()?;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (vars, _) in &rows {
        for w in vars.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        members.entry(r).or_default().push(v);
    }
    let mut comp_rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, (vars, _)) in rows.iter().enumerate() {
        let r = find(&mut parent, vars[0]);
        comp_rows.entry(r).or_default().push(k);
    }
    let mut assignment = vec![false; n];
    for (root, vars) in members {
        let local_rows: Vec<(Vec<usize>, usize)> = comp_rows
            .get(&root)
            .map(|ks| {
                ks.iter()
                    .map(|&k| {
                        let (vs, limit) = &rows[k];
                        let local = vs.iter().map(|v| vars.binary_search(v).expect("same component")).collect();
                        (local, *limit)
                    })
                    .collect()
            })
            .unwrap_or_default();
        let weights: Vec<u64> = vars.iter().map(|&v| p.weights[v]).collect();
        let best = ComponentSearch::new(&weights, &local_rows).run();
        for (k, &v) in vars.iter().enumerate() {
            assignment[v] = best[k];
        }
    }
    let objective = p.objective(&assignment);
    Ok(Solution { assignment, objective })
}

struct ComponentSearch<'a> {
    weights: &'a [u64],
    rows: &'a [(Vec<usize>, usize)],
    rows_of: Vec<Vec<usize>>,
    ones: Vec<usize>,
    // number of saturated rows containing each variable
    saturated: Vec<usize>,
    assign: Vec<bool>,
    value: u64,
    // total weight of unassigned variables that could still be set to one
    free_weight: u64,
    best_value: i128,
    best: Vec<bool>,
}

impl<'a> ComponentSearch<'a> {
    fn new(weights: &'a [u64], rows: &'a [(Vec<usize>, usize)]) -> Self {
        let m = weights.len();
        let mut rows_of = vec![Vec::new(); m];
        for (k, (vars, _)) in rows.iter().enumerate() {
            for &v in vars {
                rows_of[v].push(k);
            }
        }
        let mut saturated = vec![0; m];
        for (vars, limit) in rows {
            if *limit == 0 {
                for &v in vars {
                    saturated[v] += 1;
                }
            }
        }
        let free_weight = (0..m).filter(|&v| saturated[v] == 0).map(|v| weights[v]).sum();
        ComponentSearch {
            weights,
            rows,
            rows_of,
            ones: vec![0; rows.len()],
            saturated,
            assign: vec![false; m],
            value: 0,
            free_weight,
            best_value: -1,
            best: vec![false; m],
        }
    }

    /// Greedy feasible value by decreasing weight, used as the initial bar.
    fn greedy_value(&self) -> u64 {
        let m = self.weights.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.weights[v]), v));
        let mut ones = vec![0; self.rows.len()];
        let mut total = 0;
        for v in order {
            if self.rows_of[v].iter().all(|&k| ones[k] < self.rows[k].1) {
                for &k in &self.rows_of[v] {
                    ones[k] += 1;
                }
                total += self.weights[v];
            }
        }
        total
    }

    fn run(mut self) -> Vec<bool> {
        // leaves must reach the greedy value; the first such leaf in lexicographic
        // order that is never beaten is the lexicographically least optimum
        self.best_value = self.greedy_value() as i128 - 1;
        self.descend(0);
        self.best
    }

    fn descend(&mut self, k: usize) {
        if (self.value + self.free_weight) as i128 <= self.best_value {
            return;
        }
        if k == self.weights.len() {
            self.best_value = self.value as i128;
            self.best.copy_from_slice(&self.assign);
            return;
        }
        let free = self.saturated[k] == 0;
        if free {
            self.free_weight -= self.weights[k];
        }
        self.descend(k + 1);
        if free {
            self.assign[k] = true;
            self.value += self.weights[k];
            let mut newly_full = Vec::new();
            for &r in &self.rows_of[k] {
                self.ones[r] += 1;
                if self.ones[r] == self.rows[r].1 {
                    newly_full.push(r);
                }
            }
            for &r in &newly_full {
                for &u in &self.rows[r].0 {
                    self.saturated[u] += 1;
                    if self.saturated[u] == 1 && u > k {
                        self.free_weight -= self.weights[u];
                    }
                }
            }
            self.descend(k + 1);
            for &r in &newly_full {
                for &u in &self.rows[r].0 {
                    self.saturated[u] -= 1;
                    if self.saturated[u] == 0 && u > k {
                        self.free_weight += self.weights[u];
                    }
                }
            }
            for &r in &self.rows_of[k] {
                self.ones[r] -= 1;
            }
            self.value -= self.weights[k];
            self.assign[k] = false;
            self.free_weight += self.weights[k];
        }
    }
}

/// Depth-first topological order.
///
/// Vertices are emitted once all their predecessors are, exploring roots and
/// predecessors in increasing index order.
pub fn topological_sort(succ: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    for ps in &mut pred {
        ps.sort_unstable();
        ps.dedup();
    }
    // 0 = unseen, 1 = on the current path, 2 = emitted
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (v, ref mut slot)) = work.last_mut() {
            if let Some(&u) = pred[v].get(*slot) {
                *slot += 1;
                match state[u] {
                    0 => {
                        state[u] = 1;
                        work.push((u, 0));
                    }
                    1 => return Err(Error::Cyclic),
                    _ => {}
                }
                continue;
            }
            state[v] = 2;
            order.push(v);
            work.pop();
        }
    }
    Ok(order)
}
