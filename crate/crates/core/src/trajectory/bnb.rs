use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::exact::require_nested;
use super::{add_remaining, Move, Ms2Options, Trajectory};
use crate::error::{Error, Result};
use crate::pkms2::pk_distance_tables;
use crate::structures::{base_pair_distance, BasePair, SecondaryStructure};

type Bits = Vec<u64>;

struct Node {
    state: Bits,
    parent: usize,
    step: Option<Move>,
}

struct Space<'a> {
    n: usize,
    pairs: Vec<BasePair>,
    in_t: Vec<bool>,
    t: &'a SecondaryStructure,
}

impl Space<'_> {
    fn has(bits: &Bits, k: usize) -> bool {
        bits[k / 64] >> (k % 64) & 1 == 1
    }

    fn flip(bits: &mut Bits, k: usize) {
        bits[k / 64] ^= 1 << (k % 64);
    }

    fn partners(&self, bits: &Bits) -> Vec<usize> {
        let mut pt = vec![0; self.n + 1];
        for (k, p) in self.pairs.iter().enumerate() {
            if Self::has(bits, k) {
                pt[p.i] = p.j;
                pt[p.j] = p.i;
            }
        }
        pt
    }

    fn lower_bound(&self, bits: &Bits) -> usize {
        pk_distance_tables(&self.partners(bits), self.t.partner_table())
    }

    /// Children reachable by removing or shifting one pair that `t` lacks.
    fn children(&self, bits: &Bits) -> Vec<(Bits, Move)> {
        let pt = self.partners(bits);
        let present: Vec<usize> = (0..self.pairs.len()).filter(|&k| Self::has(bits, k)).collect();
        let mut out = Vec::new();
        for &k in present.iter().filter(|&&k| !self.in_t[k]) {
            let p = self.pairs[k];
            let mut next = bits.clone();
            Self::flip(&mut next, k);
            out.push((next.clone(), Move::Remove(p)));
            for (q_ix, q) in self.pairs.iter().enumerate() {
                if !self.in_t[q_ix] || Self::has(bits, q_ix) || !p.touches(q) {
                    continue;
                }
                let fresh = if p.contains(q.i) { q.j } else { q.i };
                if pt[fresh] != 0 {
                    continue;
                }
                let crosses = present.iter().any(|&r| r != k && self.pairs[r].crosses(q));
                if !crosses {
                    let mut shifted = next.clone();
                    Self::flip(&mut shifted, q_ix);
                    out.push((shifted, Move::Shift { from: p, to: *q }));
                }
            }
        }
        out
    }
}

/// Best-first search for a provably shortest trajectory; meant for small instances.
///
/// Additions are deferred to the end, where they are always legal. The
/// crossing-tolerant distance bounds the remaining cost from below.
pub fn ms2_branch_and_bound(
    s: &SecondaryStructure,
    t: &SecondaryStructure,
    options: &Ms2Options,
) -> Result<Trajectory> {
    require_nested(s, t)?;
    let mut pairs: Vec<BasePair> = s.pairs().chain(t.pairs()).copied().collect();
    pairs.sort();
    pairs.dedup();
    let space = Space { n: s.len(), in_t: pairs.iter().map(|p| t.contains(p)).collect(), pairs, t };
    let mut start = vec![0u64; space.pairs.len().div_ceil(64).max(1)];
    for (k, p) in space.pairs.iter().enumerate() {
        if s.contains(p) {
            Space::flip(&mut start, k);
        }
    }

    // removals and additions alone reach this length
    let incumbent = base_pair_distance(s, t)?;
    let mut arena = vec![Node { state: start.clone(), parent: usize::MAX, step: None }];
    let mut best_g: HashMap<Bits, usize> = HashMap::from([(start.clone(), 0)]);
    let mut heap = BinaryHeap::from([Reverse((space.lower_bound(&start), Reverse(0usize), 0usize))]);
    let mut goal = None;
    let mut expansions = 0usize;
    while let Some(Reverse((f, Reverse(g), idx))) = heap.pop() {
        if f >= incumbent {
            break;
        }
        if best_g.get(&arena[idx].state).is_some_and(|&b| b < g) {
            continue;
        }
        expansions += 1;
        if expansions > options.node_budget {
            return Err(Error::BudgetExceeded { budget: options.node_budget });
        }
        let state = arena[idx].state.clone();
        let done = (0..space.pairs.len()).all(|k| space.in_t[k] || !Space::has(&state, k));
        if done {
            // the bound is exact here: every missing pair costs one addition
            goal = Some(idx);
            break;
        }
        for (child, mv) in space.children(&state) {
            let cg = g + 1;
            let cf = cg + space.lower_bound(&child);
            if cf >= incumbent || best_g.get(&child).is_some_and(|&b| b <= cg) {
                continue;
            }
            best_g.insert(child.clone(), cg);
            arena.push(Node { state: child, parent: idx, step: Some(mv) });
            let id = arena.len() - 1;
            heap.push(Reverse((cf, Reverse(cg), id)));
        }
    }

    let mut moves = Vec::new();
    let mut cur = s.clone();
    match goal {
        Some(mut idx) => {
            while let Some(mv) = arena[idx].step {
                moves.push(mv);
                idx = arena[idx].parent;
            }
            moves.reverse();
            for mv in &moves {
                super::apply_in_place(&mut cur, mv, false)?;
            }
        }
        None => {
            super::remove_leftovers(&mut cur, t, |_| false, &mut moves)?;
        }
    }
    add_remaining(s, &mut cur, t, &mut moves)?;
    Ok(Trajectory::new(s.clone(), moves, false))
}
