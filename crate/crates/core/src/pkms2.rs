//! Shortest trajectories when intermediates may contain pseudoknots.
//!
//! Each equivalence class is solved on its own by a fixed sweep along its
//! canonical walk, so the distance is a sum of per-class terms.

use crate::error::Result;
use crate::partition::{equivalence_classes, partition_positions, EquivalenceClass, PathType};
use crate::structures::{check_same_length, BasePair, SecondaryStructure};
use crate::trajectory::{Move, Trajectory};

/// Moves turning the class's `s` pairs into its `t` pairs.
pub fn path_subroutine(class: &EquivalenceClass) -> Vec<Move> {
    let w = &class.walk;
    let m = w.len();
    let half = m / 2;
    let pair = |a: usize, b: usize| BasePair::new(a, b);
    let shift = |from: BasePair, to: BasePair| Move::Shift { from, to };
    let mut moves = Vec::with_capacity(half + 1);
    match class.path_type {
        PathType::SEnds => {
            // walk = b1 a1 b2 a2 ... bk ak
            let b = |i: usize| w[2 * (i - 1)];
            let a = |i: usize| w[2 * (i - 1) + 1];
            moves.push(Move::Remove(pair(b(half), a(half))));
            for i in (1..half).rev() {
                moves.push(shift(pair(b(i), a(i)), pair(a(i), b(i + 1))));
            }
        }
        PathType::SFirst => {
            // walk = b0 a1 b1 ... ak bk
            let b = |i: usize| w[2 * i];
            let a = |i: usize| w[2 * i - 1];
            for i in (1..=half).rev() {
                moves.push(shift(pair(b(i - 1), a(i)), pair(a(i), b(i))));
            }
        }
        PathType::TFirst => {
            // walk = a0 b1 a1 ... bk ak
            let a = |i: usize| w[2 * i];
            let b = |i: usize| w[2 * i - 1];
            for i in 1..=half {
                moves.push(shift(pair(b(i), a(i)), pair(a(i - 1), b(i))));
            }
        }
        PathType::TEnds | PathType::Cycle => {
            // walk = a1 b1 a2 b2 ... ak bk
            let a = |i: usize| w[2 * (i - 1)];
            let b = |i: usize| w[2 * i - 1];
            if class.path_type == PathType::Cycle {
                moves.push(Move::Remove(pair(b(half), a(1))));
            }
            for i in 1..half {
                moves.push(shift(pair(b(i), a(i + 1)), pair(a(i), b(i))));
            }
            moves.push(Move::Add(pair(a(half), b(half))));
        }
    }
    moves
}

/// Shortest trajectory allowing crossing intermediates.
///
/// Untouched pairs of `s` go first, then each class in order of its smallest
/// position, then untouched pairs of `t`.
pub fn pk_ms2_trajectory(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<Trajectory> {
    let part = partition_positions(s, t)?;
    let mut moves: Vec<Move> = part.bp1.iter().map(|&p| Move::Remove(p)).collect();
    for class in equivalence_classes(s, t, &part.a_union_b0())? {
        moves.extend(path_subroutine(&class));
    }
    moves.extend(part.bp2.iter().map(|&p| Move::Add(p)));
    Ok(Trajectory::new(s.clone(), moves, true))
}

/// Length of the shortest crossing-tolerant trajectory.
pub fn pk_ms2_distance(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<usize> {
    check_same_length(s, t)?;
    Ok(pk_distance_tables(s.partner_table(), t.partner_table()))
}

/// Sum over components of differing positions of the larger pair count, plus one per cycle.
pub(crate) fn pk_distance_tables(sp: &[usize], tp: &[usize]) -> usize {
    let n = sp.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 1..n {
        if sp[i] == tp[i] {
            continue;
        }
        for j in [sp[i], tp[i]] {
            if j != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut s_count = vec![0usize; n];
    let mut t_count = vec![0usize; n];
    let mut size = vec![0usize; n];
    for i in 1..n {
        if sp[i] == tp[i] {
            continue;
        }
        let r = find(&mut parent, i);
        size[r] += 1;
        if sp[i] > i {
            s_count[r] += 1;
        }
        if tp[i] > i {
            t_count[r] += 1;
        }
    }
    (1..n)
        .filter(|&r| size[r] > 0)
        .map(|r| {
            // a cycle has as many pairs of each kind as half its positions
            let cycle = s_count[r] == t_count[r] && 2 * s_count[r] == size[r];
            s_count[r].max(t_count[r]) + usize::from(cycle)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::PathType;
    use crate::structures::{hamming_distance, DEFAULT_THETA};
    use crate::testutil::arb_structure;
    use crate::trajectory::verify_trajectory;
    use proptest::prelude::*;

    fn db(text: &str) -> SecondaryStructure {
        SecondaryStructure::parse_dot_bracket(text, DEFAULT_THETA, false).unwrap()
    }

    #[test]
    fn bistable_pk_distance() {
        let s = db("((((((....)))))).........");
        let t = db(".....((((((((....))))))))");
        assert_eq!(pk_ms2_distance(&s, &t).unwrap(), 11);
        let traj = pk_ms2_trajectory(&s, &t).unwrap();
        assert_eq!(traj.distance(), 11);
        verify_trajectory(&s, &t, &traj, true).unwrap();
        assert_eq!(pk_ms2_distance(&s, &s).unwrap(), 0);
    }

    #[test]
    fn subroutine_examples() {
        let s = db("((((((....)))))).........");
        let t = db(".....((((((((....))))))))");
        let part = partition_positions(&s, &t).unwrap();
        let classes = equivalence_classes(&s, &t, &part.a_union_b0()).unwrap();
        assert_eq!(
            path_subroutine(&classes[0]),
            vec![Move::Shift { from: BasePair::new(4, 13), to: BasePair::new(13, 18) }]
        );

        let lone = SecondaryStructure::from_pairs(12, &[(2, 9)]).unwrap();
        let e = SecondaryStructure::empty(12);
        let part = partition_positions(&lone, &e).unwrap();
        let classes = equivalence_classes(&lone, &e, &part.a_union_b()).unwrap();
        assert_eq!(path_subroutine(&classes[0]), vec![Move::Remove(BasePair::new(2, 9))]);

        let s = SecondaryStructure::from_pairs(15, &[(1, 15), (5, 10)]).unwrap();
        let t = SecondaryStructure::from_pairs(15, &[(1, 5), (10, 15)]).unwrap();
        let part = partition_positions(&s, &t).unwrap();
        let classes = equivalence_classes(&s, &t, &part.a_union_b()).unwrap();
        assert_eq!(classes[0].path_type, PathType::Cycle);
        let moves = path_subroutine(&classes[0]);
        assert_eq!(moves.len(), 3);
        assert!(matches!(moves[0], Move::Remove(_)));
        assert!(matches!(moves[1], Move::Shift { .. }));
        assert!(matches!(moves[2], Move::Add(_)));
        assert_eq!(pk_ms2_distance(&s, &t).unwrap(), 3);
        verify_trajectory(&s, &t, &pk_ms2_trajectory(&s, &t).unwrap(), true).unwrap();
    }

    #[test]
    fn hamming_identity_fails_globally_with_odd_classes() {
        // two odd classes: the global floor overcounts by one
        let s = db("((((((....)))))).........");
        let t = db(".....((((((((....))))))))");
        assert_eq!(hamming_distance(&s, &t).unwrap() / 2, 12);
        assert_eq!(pk_ms2_distance(&s, &t).unwrap(), 11);
    }

    proptest! {
        #[test]
        fn per_class_identities(s in arb_structure(30), t in arb_structure(30)) {
            let part = partition_positions(&s, &t).unwrap();
            let classes = equivalence_classes(&s, &t, &part.a_union_b()).unwrap();
            let mut by_max = 0;
            let mut by_hamming = 0;
            for c in &classes {
                let moves = path_subroutine(c);
                let cost = c.s_pairs.len().max(c.t_pairs.len()) + usize::from(c.path_type == PathType::Cycle);
                prop_assert_eq!(moves.len(), cost);
                by_max += cost;
                // every class member differs between s and t
                by_hamming += c.len() / 2 + usize::from(c.path_type == PathType::Cycle);
            }
            let d = pk_ms2_distance(&s, &t).unwrap();
            prop_assert_eq!(d, by_max);
            prop_assert_eq!(d, by_hamming);
            let reduced = equivalence_classes(&s, &t, &part.a_union_b0()).unwrap();
            let lemma: usize = part.bp1.len() + part.bp2.len()
                + reduced
                    .iter()
                    .map(|c| c.s_pairs.len().max(c.t_pairs.len()) + usize::from(c.path_type == PathType::Cycle))
                    .sum::<usize>();
            prop_assert_eq!(d, lemma);
            let traj = pk_ms2_trajectory(&s, &t).unwrap();
            prop_assert_eq!(traj.distance(), d);
            prop_assert!(verify_trajectory(&s, &t, &traj, true).is_ok());
        }
    }
}
