use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::{add_remaining, apply_in_place, remove_leftovers, strip_untouched, Move, Ms2Options, Trajectory};
use crate::conflict_graph::{build_conflict_digraph_with, detect_closed_2cycles, ClosedTwoCycle, ConflictDigraph, TripletNode};
use crate::error::{Error, Result};
use crate::optimize::{enumerate_simple_cycles, solve_max_binary, topological_sort, ZeroOneProgram};
use crate::structures::{check_same_length, BasePair, SecondaryStructure};

/// Size of the conflict digraph an exact run worked on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub cycles: usize,
    pub truncated: bool,
    pub closed_two_cycles: usize,
}

/// Wall time of the expensive phases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub cycle_enumeration: Duration,
    pub solve: Duration,
    pub ordering: Duration,
}

/// An exact trajectory with the intermediate artifacts that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactReport {
    pub trajectory: Trajectory,
    pub graph: GraphStats,
    /// Shifts performed, in execution order.
    pub shifts: Vec<TripletNode>,
    pub timings: PhaseTimings,
}

pub(crate) fn require_nested(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<()> {
    check_same_length(s, t)?;
    for (name, x) in [("source", s), ("target", t)] {
        if let Some((p, q)) = x.find_crossing() {
            return Err(Error::InvalidStructure(format!("{name} pairs {p} and {q} cross")));
        }
    }
    Ok(())
}

/// Outcome of choosing a conflict-free set of shifts.
pub(crate) struct Selection {
    /// Selected node indices in an order compatible with the edges.
    pub order: Vec<usize>,
    pub cycles: usize,
    pub cycle_time: Duration,
    pub solve_time: Duration,
    pub order_time: Duration,
}

/// Maximum set of shifts that can all be executed, via the cycle-cover program.
pub(crate) fn select_shifts(g: &ConflictDigraph, closed: &[ClosedTwoCycle], max_cycles: usize) -> Result<Selection> {
    let clock = Instant::now();
    let cycles = enumerate_simple_cycles(g.adjacency(), max_cycles).complete(max_cycles)?;
    let cycle_time = clock.elapsed();

    let clock = Instant::now();
    let nodes = g.nodes();
    // one extra shift always outweighs every preference bonus
    let unit = closed.len() as u64 + 1;
    let mut program = ZeroOneProgram::new(vec![unit; nodes.len()]);
    let mut covers = BTreeSet::new();
    for c in &cycles.cycles {
        let mut set = c.clone();
        set.sort_unstable();
        covers.insert(set);
    }
    for set in covers {
        program.add_cycle_cover(set);
    }
    for (u, a) in nodes.iter().enumerate() {
        for (v, b) in nodes.iter().enumerate().skip(u + 1) {
            // shared pair, or opposite corners of a closed 2-cycle
            if a.overlap(b) >= 2 {
                program.add_pair_exclusion(u, v);
            }
        }
    }
    for c in closed {
        if let Some(k) = g.index_of(&c.nodes[0]) {
            program.weights[k] += 1;
        }
    }
    let solution = solve_max_binary(&program)?;
    let solve_time = clock.elapsed();

    let clock = Instant::now();
    let keep: Vec<usize> = (0..nodes.len()).filter(|&k| solution.assignment[k]).collect();
    let order = topological_sort(&g.induced(&keep))?.into_iter().map(|k| keep[k]).collect();
    Ok(Selection { order, cycles: cycles.len(), cycle_time, solve_time, order_time: clock.elapsed() })
}

/// Minimum-length trajectory between two nested structures.
pub fn ms2_exact(s: &SecondaryStructure, t: &SecondaryStructure, options: &Ms2Options) -> Result<Trajectory> {
    Ok(ms2_exact_report(s, t, options)?.trajectory)
}

/// [`ms2_exact`] together with graph sizes, the executed shifts and phase timings.
pub fn ms2_exact_report(s: &SecondaryStructure, t: &SecondaryStructure, options: &Ms2Options) -> Result<ExactReport> {
    require_nested(s, t)?;
    let mut moves = Vec::new();
    let mut cur = strip_untouched(s, t, &mut moves)?;
    let g = build_conflict_digraph_with(&cur, t, options.relation, options.locality)?;
    let closed = detect_closed_2cycles(s, t)?;
    let selection = select_shifts(&g, &closed, options.max_cycles)?;
    let shifts: Vec<TripletNode> = selection.order.iter().map(|&k| g.nodes()[k]).collect();

    let shifted: BTreeSet<BasePair> = shifts.iter().map(TripletNode::s_pair).collect();
    remove_leftovers(&mut cur, t, |p| shifted.contains(p), &mut moves)?;
    for v in &shifts {
        let mv = Move::Shift { from: v.s_pair(), to: v.t_pair() };
        apply_in_place(&mut cur, &mv, false)?;
        moves.push(mv);
    }
    add_remaining(s, &mut cur, t, &mut moves)?;

    Ok(ExactReport {
        trajectory: Trajectory::new(s.clone(), moves, false),
        graph: GraphStats {
            nodes: g.len(),
            edges: g.edge_count(),
            cycles: selection.cycles,
            truncated: false,
            closed_two_cycles: closed.len(),
        },
        shifts,
        timings: PhaseTimings {
            cycle_enumeration: selection.cycle_time,
            solve: selection.solve_time,
            ordering: selection.order_time,
        },
    })
}
