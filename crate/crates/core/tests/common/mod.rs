//! Independent oracles: breadth-first search over the full move graph.
//!
//! States are bitmasks over every pair `(i,j)` with `j - i > theta`, so they
//! only fit for short sequences (at most 256 candidate pairs).

#![allow(dead_code)]

use std::collections::HashMap;

use ms2path::{BasePair, SecondaryStructure};
use rand::Rng;

type Bits = [u64; 4];

fn has(bits: &Bits, k: usize) -> bool {
    bits[k / 64] >> (k % 64) & 1 == 1
}

fn with(mut bits: Bits, k: usize, on: bool) -> Bits {
    if on {
        bits[k / 64] |= 1 << (k % 64);
    } else {
        bits[k / 64] &= !(1 << (k % 64));
    }
    bits
}

fn disjoint(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

pub struct MoveGraph {
    pairs: Vec<BasePair>,
    index: HashMap<BasePair, usize>,
    /// Pairs that may not coexist with each pair.
    conflicts: Vec<Bits>,
    /// Pairs sharing exactly one position with each pair.
    touching: Vec<Vec<usize>>,
}

impl MoveGraph {
    /// `allow_crossing` admits pseudoknotted intermediates.
    pub fn new(n: usize, theta: usize, allow_crossing: bool) -> Self {
        let mut pairs = Vec::new();
        for i in 1..=n {
            for j in (i + theta + 1)..=n {
                pairs.push(BasePair::new(i, j));
            }
        }
        assert!(pairs.len() <= 256, "too many candidate pairs for a bitmask");
        let index = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut conflicts = vec![[0u64; 4]; pairs.len()];
        let mut touching = vec![Vec::new(); pairs.len()];
        for (a, p) in pairs.iter().enumerate() {
            for (b, q) in pairs.iter().enumerate() {
                if a == b {
                    continue;
                }
                let shared = [q.i, q.j].iter().filter(|&&x| p.contains(x)).count();
                let cross = !allow_crossing && p.crosses(q);
                if shared > 0 || cross {
                    conflicts[a] = with(conflicts[a], b, true);
                }
                if shared == 1 {
                    touching[a].push(b);
                }
            }
        }
        MoveGraph { pairs, index, conflicts, touching }
    }

    pub fn encode(&self, s: &SecondaryStructure) -> Bits {
        s.pairs().fold([0; 4], |acc, p| with(acc, self.index[p], true))
    }

    fn neighbours(&self, state: Bits, out: &mut Vec<Bits>) {
        out.clear();
        for a in 0..self.pairs.len() {
            if has(&state, a) {
                let without = with(state, a, false);
                out.push(without);
                for &b in &self.touching[a] {
                    if !has(&without, b) && disjoint(&without, &self.conflicts[b]) {
                        out.push(with(without, b, true));
                    }
                }
            } else if disjoint(&state, &self.conflicts[a]) {
                out.push(with(state, a, true));
            }
        }
    }

    /// Length of a shortest path, growing the smaller frontier first.
    pub fn distance(&self, s: &SecondaryStructure, t: &SecondaryStructure) -> usize {
        let (a, b) = (self.encode(s), self.encode(t));
        if a == b {
            return 0;
        }
        let mut seen = [HashMap::from([(a, 0usize)]), HashMap::from([(b, 0usize)])];
        let mut frontier = [vec![a], vec![b]];
        let mut depth = [0usize, 0usize];
        let mut buf = Vec::new();
        loop {
            let side = usize::from(frontier[1].len() < frontier[0].len());
            assert!(!frontier[side].is_empty(), "move graph is connected");
            depth[side] += 1;
            let mut next = Vec::new();
            let mut best = usize::MAX;
            for &u in &frontier[side] {
                self.neighbours(u, &mut buf);
                for &v in &buf {
                    if let Some(&d) = seen[1 - side].get(&v) {
                        best = best.min(depth[side] + d);
                    }
                    if !seen[side].contains_key(&v) {
                        seen[side].insert(v, depth[side]);
                        next.push(v);
                    }
                }
            }
            if best != usize::MAX {
                return best;
            }
            frontier[side] = next;
        }
    }
}

/// A random nested structure with at most `max_pairs` pairs, built by rejection.
pub fn random_structure<R: Rng>(rng: &mut R, n: usize, max_pairs: usize, theta: usize) -> SecondaryStructure {
    let target = rng.gen_range(0..=max_pairs);
    let mut s = SecondaryStructure::empty(n);
    let mut pairs = Vec::new();
    for _ in 0..50 {
        if pairs.len() == target {
            break;
        }
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(1..=n);
        let (i, j) = (i.min(j), i.max(j));
        if j - i <= theta {
            continue;
        }
        let p = BasePair::new(i, j);
        let mut trial = pairs.clone();
        trial.push((p.i, p.j));
        if let Ok(next) = SecondaryStructure::new(n, trial.iter().map(|&(a, b)| BasePair::new(a, b)), theta, false) {
            s = next;
            pairs = trial;
        }
    }
    s
}
