use std::collections::BTreeSet;

use super::exact::{require_nested, select_shifts};
use super::{add_remaining, guarded_shift, remove_leftovers, strip_untouched, Move, Ms2Options, Trajectory};
use crate::conflict_graph::{
    build_coarse_digraph, detect_closed_2cycles, triplet_nodes, CoarseDigraph, ConflictDigraph, EdgeRelation,
};
use crate::error::Result;
use crate::optimize::{enumerate_simple_cycles, solve_max_binary, topological_sort, ZeroOneProgram};
use crate::partition::{equivalence_classes, partition_positions};
use crate::structures::{BasePair, SecondaryStructure};

fn coarse_of(cur: &SecondaryStructure, t: &SecondaryStructure) -> Result<CoarseDigraph> {
    let part = partition_positions(cur, t)?;
    Ok(build_coarse_digraph(equivalence_classes(cur, t, &part.a_union_b())?))
}

/// Pairs to remove so that the lightest set of coarse arcs disappears.
fn cut_pairs(coarse: &CoarseDigraph, cycles: &[Vec<usize>]) -> Result<BTreeSet<BasePair>> {
    let weights = coarse.arcs.iter().map(|a| a.weight() as u64).collect();
    let mut program = ZeroOneProgram::new(weights);
    for c in cycles {
        let arcs = (0..c.len())
            .map(|k| {
                let (from, to) = (c[k], c[(k + 1) % c.len()]);
                coarse
                    .arcs
                    .binary_search_by(|a| (a.from, a.to).cmp(&(from, to)))
                    .expect("cycle steps follow arcs")
            })
            .collect();
        program.add_cycle_cover(arcs);
    }
    let kept = solve_max_binary(&program)?.assignment;
    Ok(coarse
        .arcs
        .iter()
        .zip(kept)
        .filter(|(_, keep)| !keep)
        .flat_map(|(a, _)| a.crossing_pairs.iter().copied())
        .collect())
}

/// Class-by-class approximation of [`super::ms2_exact`] that scales to long sequences.
///
/// Crossings between classes are broken with a weighted arc cut on the coarse
/// digraph; each class is then solved exactly in topological order.
pub fn ms2_near_optimal(s: &SecondaryStructure, t: &SecondaryStructure, options: &Ms2Options) -> Result<Trajectory> {
    require_nested(s, t)?;
    let mut moves = Vec::new();
    let mut cur = strip_untouched(s, t, &mut moves)?;

    // removing pairs refines classes, which can close new coarse cycles
    let coarse = loop {
        let coarse = coarse_of(&cur, t)?;
        let cycles = enumerate_simple_cycles(&coarse.adjacency(), options.max_cycles).complete(options.max_cycles)?;
        if cycles.is_empty() {
            break coarse;
        }
        for p in cut_pairs(&coarse, &cycles.cycles)? {
            if cur.contains(&p) {
                cur.remove(&p)?;
                moves.push(Move::Remove(p));
            }
        }
    };

    let order = topological_sort(&coarse.adjacency())?;
    let closed = detect_closed_2cycles(s, t)?;
    for ci in order {
        let class = &coarse.classes[ci];
        let nodes = triplet_nodes(&cur, t)?
            .into_iter()
            .filter(|v| class.contains(v.y))
            .filter(|v| options.locality.is_none_or(|d| v.displacement() <= d))
            .collect();
        let local = ConflictDigraph::from_nodes(nodes, EdgeRelation::Strict);
        let selection = select_shifts(&local, &closed, options.max_cycles)?;
        let shifted: BTreeSet<BasePair> = selection.order.iter().map(|&k| local.nodes()[k].s_pair()).collect();
        let in_class = |p: &BasePair| class.contains(p.i);
        remove_leftovers(&mut cur, t, |p| !in_class(p) || shifted.contains(p), &mut moves)?;
        for &k in &selection.order {
            guarded_shift(&mut cur, &local.nodes()[k], &mut moves)?;
        }
        remove_leftovers(&mut cur, t, |p| !in_class(p), &mut moves)?;
    }
    remove_leftovers(&mut cur, t, |_| false, &mut moves)?;
    add_remaining(s, &mut cur, t, &mut moves)?;
    Ok(Trajectory::new(s.clone(), moves, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{base_pair_distance, DEFAULT_THETA};
    use crate::testutil::arb_structure;
    use crate::trajectory::{ms2_exact, verify_trajectory};
    use proptest::prelude::*;

    fn db(text: &str) -> SecondaryStructure {
        SecondaryStructure::parse_dot_bracket(text, DEFAULT_THETA, false).unwrap()
    }

    #[test]
    fn bistable_matches_exact() {
        let s = db("((((((....)))))).........");
        let t = db(".....((((((((....))))))))");
        let traj = ms2_near_optimal(&s, &t, &Ms2Options::default()).unwrap();
        assert_eq!(traj.distance(), 11);
        verify_trajectory(&s, &t, &traj, false).unwrap();
        assert_eq!(ms2_near_optimal(&s, &s, &Ms2Options::default()).unwrap().distance(), 0);
    }

    #[test]
    fn collosoma_is_valid() {
        let s = db(".......................((((((((((((.....)))))..)))))))..");
        let t = db(".......((((((..(((((.((((...)))).)))))..))).))).........");
        let traj = ms2_near_optimal(&s, &t, &Ms2Options::default()).unwrap();
        verify_trajectory(&s, &t, &traj, false).unwrap();
        assert!(traj.distance() >= 20);
    }

    proptest! {
        #[test]
        fn bounded_by_exact_and_bp(s in arb_structure(24), t in arb_structure(24)) {
            let opts = Ms2Options::default();
            let near = ms2_near_optimal(&s, &t, &opts).unwrap();
            prop_assert!(verify_trajectory(&s, &t, &near, false).is_ok());
            let exact = ms2_exact(&s, &t, &opts).unwrap();
            prop_assert!(exact.distance() <= near.distance());
            prop_assert!(near.distance() <= base_pair_distance(&s, &t).unwrap());
        }
    }
}
