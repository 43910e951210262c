use super::exact::require_nested;
use super::{add_remaining, guarded_shift, remove_leftovers, strip_untouched, Move, Ms2Options, Trajectory};
use crate::conflict_graph::{build_conflict_digraph_with, EdgeRelation};
use crate::error::Result;
use crate::optimize::{enumerate_simple_cycles, topological_sort};
use crate::structures::SecondaryStructure;

/// Breaks conflict cycles by repeatedly dropping the shift lying on the most cycles.
pub fn ms2_greedy(s: &SecondaryStructure, t: &SecondaryStructure, options: &Ms2Options) -> Result<Trajectory> {
    require_nested(s, t)?;
    let mut moves = Vec::new();
    let mut cur = strip_untouched(s, t, &mut moves)?;
    let g = build_conflict_digraph_with(&cur, t, EdgeRelation::Strict, options.locality)?;
    let cycles = enumerate_simple_cycles(g.adjacency(), options.max_cycles).complete(options.max_cycles)?;

    let mut alive = vec![true; g.len()];
    let mut open: Vec<&Vec<usize>> = cycles.cycles.iter().collect();
    while !open.is_empty() {
        let mut hits = vec![0usize; g.len()];
        for c in &open {
            for &v in c.iter() {
                hits[v] += 1;
            }
        }
        // ties go to the earliest node
        let victim = (0..g.len()).max_by_key(|&v| (hits[v], std::cmp::Reverse(v))).expect("open cycles have vertices");
        alive[victim] = false;
        open.retain(|c| !c.contains(&victim));
        let p = g.nodes()[victim].s_pair();
        if cur.contains(&p) {
            cur.remove(&p)?;
            moves.push(Move::Remove(p));
        }
    }

    let keep: Vec<usize> = (0..g.len()).filter(|&v| alive[v]).collect();
    for k in topological_sort(&g.induced(&keep))? {
        guarded_shift(&mut cur, &g.nodes()[keep[k]], &mut moves)?;
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
    use crate::trajectory::{bookkeeping_holds, ms2_exact, verify_trajectory};
    use proptest::prelude::*;

    fn db(text: &str) -> SecondaryStructure {
        SecondaryStructure::parse_dot_bracket(text, DEFAULT_THETA, false).unwrap()
    }

    #[test]
    fn acyclic_instance_needs_no_deletions() {
        let s = db("((((((....)))))).........");
        let t = db(".....((((((((....))))))))");
        let traj = ms2_greedy(&s, &t, &Ms2Options::default()).unwrap();
        assert_eq!(traj.distance(), 11);
        verify_trajectory(&s, &t, &traj, false).unwrap();
        assert_eq!(ms2_greedy(&s, &s, &Ms2Options::default()).unwrap().distance(), 0);
    }

    #[test]
    fn toy_with_cycles() {
        let s = db("(((...)))(((.....)))");
        let t = db(".......(((.......)))");
        let traj = ms2_greedy(&s, &t, &Ms2Options::default()).unwrap();
        verify_trajectory(&s, &t, &traj, false).unwrap();
        assert!(traj.distance() >= ms2_exact(&s, &t, &Ms2Options::default()).unwrap().distance());
    }

    proptest! {
        #[test]
        fn between_exact_and_bp(s in arb_structure(24), t in arb_structure(24)) {
            let opts = Ms2Options::default();
            let greedy = ms2_greedy(&s, &t, &opts).unwrap();
            prop_assert!(verify_trajectory(&s, &t, &greedy, false).is_ok());
            prop_assert!(bookkeeping_holds(&s, &t, &greedy).unwrap());
            let exact = ms2_exact(&s, &t, &opts).unwrap();
            prop_assert!(exact.distance() <= greedy.distance());
            prop_assert!(greedy.distance() <= base_pair_distance(&s, &t).unwrap());
        }
    }
}
