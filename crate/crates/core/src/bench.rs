//! Random instance generation and batch measurement.
//!
//! Instances follow a simple protocol: for each length, draw uniform random
//! sequences, sample several random structures with `n/5` pairs on each, and
//! compare every two structures of the same sequence.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conflict_graph::build_conflict_digraph;
use crate::error::{Error, Result};
use crate::optimize::enumerate_simple_cycles;
use crate::pkms2::pk_ms2_trajectory;
use crate::structures::{BasePair, RnaSequence, SecondaryStructure, DEFAULT_THETA};
use crate::trajectory::{
    ms2_branch_and_bound, ms2_exact, ms2_greedy, ms2_near_optimal, Ms2Options, Trajectory,
};

/// Fresh restarts allowed before a structure request is abandoned.
pub const MAX_RESTARTS: usize = 10_000;

/// Uniform i.i.d. nucleotides.
pub fn gen_random_sequence<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<RnaSequence> {
    if n == 0 {
        return Err(Error::Parse("sequence length must be positive".into()));
    }
    let bases = (0..n).map(|_| *b"ACGU".choose(rng).expect("four bases")).collect();
    Ok(RnaSequence::from_bases(bases))
}

fn admissible_pairs(seq: &RnaSequence, theta: usize) -> Vec<BasePair> {
    let n = seq.len();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + theta + 1)..=n {
            if seq.can_pair(i, j) {
                out.push(BasePair::new(i, j));
            }
        }
    }
    out
}

/// Largest number of nested canonical pairs the sequence can hold.
pub fn max_nested_pairs(seq: &RnaSequence, theta: usize) -> usize {
    let n = seq.len();
    // best[i][j] over positions i..=j, 1-based, zero when the span is too short
    let mut best = vec![vec![0usize; n + 2]; n + 2];
    for span in (theta + 1)..n {
        for i in 1..=(n - span) {
            let j = i + span;
            let mut v = best[i][j - 1];
            for k in i..(j - theta) {
                if seq.can_pair(k, j) {
                    let left = if k > i { best[i][k - 1] } else { 0 };
                    v = v.max(left + 1 + best[k + 1][j - 1]);
                }
            }
            best[i][j] = v;
        }
    }
    if n == 0 { 0 } else { best[1][n] }
}

/// Samples `num_pairs` pairs uniformly from the live list of compatible pairs,
/// starting over whenever the list runs dry.
pub fn gen_random_structure<R: Rng + ?Sized>(
    seq: &RnaSequence,
    num_pairs: usize,
    theta: usize,
    rng: &mut R,
) -> Result<SecondaryStructure> {
    let n = seq.len();
    if num_pairs == 0 {
        return SecondaryStructure::new(n, [], theta, false);
    }
    if num_pairs > n / 2 {
        return Err(Error::Infeasible(format!("{num_pairs} pairs cannot fit in {n} positions")));
    }
    let all = admissible_pairs(seq, theta);
    if all.is_empty() || max_nested_pairs(seq, theta) < num_pairs {
        return Err(Error::Infeasible(format!("sequence cannot hold {num_pairs} nested pairs")));
    }
    for _ in 0..MAX_RESTARTS {
        let mut live = all.clone();
        let mut chosen = Vec::with_capacity(num_pairs);
        while chosen.len() < num_pairs && !live.is_empty() {
            let p = live[rng.gen_range(0..live.len())];
            live.retain(|q| *q != p && !q.touches(&p) && !q.crosses(&p));
            chosen.push(p);
        }
        if chosen.len() == num_pairs {
            return SecondaryStructure::new(n, chosen, theta, false);
        }
    }
    Err(Error::Infeasible(format!("no structure with {num_pairs} pairs after {MAX_RESTARTS} restarts")))
}

/// A distance algorithm the benchmark can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Near,
    Greedy,
    Bnb,
    Pk,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Exact, Method::Near, Method::Greedy, Method::Bnb, Method::Pk];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Near => "near",
            Method::Greedy => "greedy",
            Method::Bnb => "bnb",
            Method::Pk => "pk",
        }
    }

    /// Runs the method; the crossing-tolerant variant ignores `options`.
    pub fn run(self, s: &SecondaryStructure, t: &SecondaryStructure, options: &Ms2Options) -> Result<Trajectory> {
        match self {
            Method::Exact => ms2_exact(s, t, options),
            Method::Near => ms2_near_optimal(s, t, options),
            Method::Greedy => ms2_greedy(s, t, options),
            Method::Bnb => ms2_branch_and_bound(s, t, options),
            Method::Pk => pk_ms2_trajectory(s, t),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method '{s}'")))
    }
}

/// Which instances to generate and which methods to run on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchmarkConfig {
    pub start: usize,
    pub stop: usize,
    pub step: usize,
    pub seqs_per_length: usize,
    pub structs_per_seq: usize,
    /// Pairs per structure; `None` means `n / 5`.
    pub pairs_per_structure: Option<usize>,
    pub seed: u64,
    pub max_cycles: usize,
    pub methods: Vec<Method>,
    pub workers: usize,
    pub theta: usize,
    /// Record wall time; off keeps output byte-reproducible.
    pub timing: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            start: 10,
            stop: 150,
            step: 10,
            seqs_per_length: 25,
            structs_per_seq: 20,
            pairs_per_structure: None,
            seed: 0,
            max_cycles: Ms2Options::default().max_cycles,
            methods: vec![Method::Exact],
            workers: 1,
            theta: DEFAULT_THETA,
            timing: false,
        }
    }
}

impl BenchmarkConfig {
    pub fn lengths(&self) -> Vec<usize> {
        (self.start..=self.stop).step_by(self.step.max(1)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.step == 0 {
            return Err(Error::Parse("length step must be positive".into()));
        }
        if self.start == 0 || self.start > self.stop {
            return Err(Error::Parse(format!("bad length range {}:{}", self.start, self.stop)));
        }
        if self.methods.is_empty() {
            return Err(Error::Parse("no methods selected".into()));
        }
        for n in self.lengths() {
            if self.pairs_for(n) > n / 2 {
                return Err(Error::Parse(format!("too many pairs for length {n}")));
            }
        }
        Ok(())
    }

    fn pairs_for(&self, n: usize) -> usize {
        self.pairs_per_structure.unwrap_or(n / 5)
    }

    /// Records the configuration produces.
    pub fn expected_records(&self) -> usize {
        let per_seq = self.structs_per_seq * self.structs_per_seq.saturating_sub(1) / 2;
        self.lengths().len() * self.seqs_per_length * per_seq * self.methods.len()
    }
}

/// One method on one instance. Empty optional fields mean the method gave up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchmarkRecord {
    pub id: String,
    pub n: usize,
    pub method: Method,
    pub distance: Option<usize>,
    pub removals: Option<usize>,
    pub additions: Option<usize>,
    pub shifts: Option<usize>,
    pub nodes: usize,
    pub edges: usize,
    pub cycles: usize,
    pub truncated: bool,
    pub micros: u64,
}

/// A structure pair with its label.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub s: SecondaryStructure,
    pub t: SecondaryStructure,
}

/// Structures for one sequence slot, redrawing the sequence until it can host them.
fn sample_slot(config: &BenchmarkConfig, n: usize, slot: usize) -> Result<Vec<SecondaryStructure>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(((n as u64) << 32) | slot as u64);
    let k = config.pairs_for(n);
    for _ in 0..MAX_RESTARTS {
        let seq = gen_random_sequence(n, &mut rng)?;
        match (0..config.structs_per_seq)
            .map(|_| gen_random_structure(&seq, k, config.theta, &mut rng))
            .collect::<Result<Vec<_>>>()
        {
            Ok(structures) => return Ok(structures),
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Infeasible(format!("no sequence of length {n} hosts {k} pairs")))
}

/// All instances of the configuration, in output order.
pub fn generate_instances(config: &BenchmarkConfig) -> Result<Vec<Instance>> {
    config.validate()?;
    let mut out = Vec::with_capacity(config.expected_records() / config.methods.len().max(1));
    for n in config.lengths() {
        for slot in 0..config.seqs_per_length {
            let structures = sample_slot(config, n, slot)?;
            for a in 0..structures.len() {
                for b in (a + 1)..structures.len() {
                    out.push(Instance {
                        id: format!("{n}-{slot}-{a}-{b}"),
                        s: structures[a].clone(),
                        t: structures[b].clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn measure(inst: &Instance, config: &BenchmarkConfig) -> Result<Vec<BenchmarkRecord>> {
    let options = Ms2Options { max_cycles: config.max_cycles, ..Ms2Options::default() };
    let g = build_conflict_digraph(&inst.s, &inst.t)?;
    let cycles = enumerate_simple_cycles(g.adjacency(), config.max_cycles);
    let mut out = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let clock = Instant::now();
        let result = method.run(&inst.s, &inst.t, &options);
        let micros = if config.timing { clock.elapsed().as_micros() as u64 } else { 0 };
        let traj = match result {
            Ok(traj) => Some(traj),
            Err(Error::CycleCapExceeded { .. } | Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let counts = traj.as_ref().map(Trajectory::counts);
        out.push(BenchmarkRecord {
            id: inst.id.clone(),
            n: inst.s.len(),
            method,
            distance: traj.as_ref().map(Trajectory::distance),
            removals: counts.map(|c| c.removals),
            additions: counts.map(|c| c.additions),
            shifts: counts.map(|c| c.shifts),
            nodes: g.len(),
            edges: g.edge_count(),
            cycles: cycles.len(),
            truncated: cycles.truncated,
            micros,
        });
    }
    Ok(out)
}

/// Generates the instances and runs every configured method on each.
///
/// Records come out in instance order, then method order, whatever the worker count.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<Vec<BenchmarkRecord>> {
    let instances = generate_instances(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::Unsupported(e.to_string()))?;
    let nested: Vec<Vec<BenchmarkRecord>> =
        pool.install(|| instances.par_iter().map(|inst| measure(inst, config)).collect::<Result<_>>())?;
    Ok(nested.into_iter().flatten().collect())
}

/// Writes the records as CSV with a header row.
pub fn write_csv<W: Write>(records: &[BenchmarkRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record([
            "id", "n", "method", "distance", "removals", "additions", "shifts", "nodes", "edges", "cycles",
            "truncated", "micros",
        ])
        .map_err(|e| Error::Unsupported(e.to_string()))?;
    }
    for r in records {
        w.serialize(r).map_err(|e| Error::Unsupported(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Unsupported(e.to_string()))
}
