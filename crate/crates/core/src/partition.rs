//! Position partition and red/green equivalence classes of a structure pair.
//!
//! Positions split into four groups: both structures pair the position
//! differently (A), exactly one pairs it (B), neither does (C), or both use the
//! same pair (D). Linking positions through the pairs of either structure
//! groups A∪B into alternating paths and cycles.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structures::{check_same_length, BasePair, SecondaryStructure};

/// The A/B/C/D split of `1..=n` plus the untouched pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionPartition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub d: Vec<usize>,
    /// Positions of `b` outside the untouched pairs.
    pub b0: Vec<usize>,
    /// Positions of pairs of `s` untouched by `t`.
    pub b1: Vec<usize>,
    /// Positions of pairs of `t` untouched by `s`.
    pub b2: Vec<usize>,
    /// Pairs of `s` whose positions are unpaired in `t`.
    pub bp1: Vec<BasePair>,
    /// Pairs of `t` whose positions are unpaired in `s`.
    pub bp2: Vec<BasePair>,
}

impl PositionPartition {
    /// Sorted A∪B.
    pub fn a_union_b(&self) -> Vec<usize> {
        merge(&self.a, &self.b)
    }

    /// Sorted A∪B0.
    pub fn a_union_b0(&self) -> Vec<usize> {
        merge(&self.a, &self.b0)
    }
}

fn merge(x: &[usize], y: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = x.iter().chain(y).copied().collect();
    v.sort_unstable();
    v
}

pub fn partition_positions(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<PositionPartition> {
    check_same_length(s, t)?;
    let sp = s.partner_table();
    let tp = t.partner_table();
    let mut part = PositionPartition {
        a: vec![],
        b: vec![],
        c: vec![],
        d: vec![],
        b0: vec![],
        b1: vec![],
        b2: vec![],
        bp1: vec![],
        bp2: vec![],
    };
    for i in 1..=s.len() {
        match (sp[i], tp[i]) {
            (0, 0) => part.c.push(i),
            (x, y) if x == y => part.d.push(i),
            (0, _) | (_, 0) => part.b.push(i),
            _ => part.a.push(i),
        }
    }
    part.bp1 = s.pairs().filter(|p| tp[p.i] == 0 && tp[p.j] == 0).copied().collect();
    part.bp2 = t.pairs().filter(|p| sp[p.i] == 0 && sp[p.j] == 0).copied().collect();
    part.b1 = merge(&[], &part.bp1.iter().flat_map(|p| [p.i, p.j]).collect::<Vec<_>>());
    part.b2 = merge(&[], &part.bp2.iter().flat_map(|p| [p.i, p.j]).collect::<Vec<_>>());
    part.b0 = part
        .b
        .iter()
        .copied()
        .filter(|x| part.b1.binary_search(x).is_err() && part.b2.binary_search(x).is_err())
        .collect();
    Ok(part)
}

/// Shape of an equivalence class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PathType {
    /// Even path whose two ends are paired only in `s`.
    SEnds = 1,
    /// Odd path starting at an `s`-only end.
    SFirst = 2,
    /// Odd path starting at a `t`-only end.
    TFirst = 3,
    /// Even path whose two ends are paired only in `t`.
    TEnds = 4,
    /// Alternating cycle.
    Cycle = 5,
}

impl PathType {
    pub fn number(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for PathType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A maximal alternating path or cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceClass {
    /// Members in increasing order.
    pub members: Vec<usize>,
    /// Members in traversal order from the canonical start.
    pub walk: Vec<usize>,
    pub path_type: PathType,
    /// Pairs of `s` with both ends in the class.
    pub s_pairs: Vec<BasePair>,
    /// Pairs of `t` with both ends in the class.
    pub t_pairs: Vec<BasePair>,
}

impl EquivalenceClass {
    pub fn min(&self) -> usize {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }
}

impl fmt::Display for EquivalenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.walk.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}} type={}", items.join(","), self.path_type)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Classes of `universe` under the pairs of `s` and `t`, sorted by minimum member.
///
/// Only pairs with both ends in `universe` link positions.
pub fn equivalence_classes(
    s: &SecondaryStructure,
    t: &SecondaryStructure,
    universe: &[usize],
) -> Result<Vec<EquivalenceClass>> {
    check_same_length(s, t)?;
    let n = s.len();
    let mut inside = vec![false; n + 1];
    for &x in universe {
        inside[x] = true;
    }
    let mut sets = DisjointSets::new(n + 1);
    for &x in universe {
        for y in [s.partner_table()[x], t.partner_table()[x]] {
            if y != 0 && inside[y] {
                sets.union(x, y);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n + 1];
    let mut sorted: Vec<usize> = universe.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for x in sorted {
        let root = sets.find(x);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(x);
    }
    groups.into_iter().map(|members| classify_members(members, s, t)).collect()
}

/// Type and canonical walk of a class given by its members.
pub fn classify_path_type(
    members: &[usize],
    s: &SecondaryStructure,
    t: &SecondaryStructure,
) -> Result<(PathType, Vec<usize>)> {
    let class = classify_members(members.to_vec(), s, t)?;
    Ok((class.path_type, class.walk))
}

fn classify_members(
    mut members: Vec<usize>,
    s: &SecondaryStructure,
    t: &SecondaryStructure,
) -> Result<EquivalenceClass> {
    members.sort_unstable();
    let within = |table: &[usize], x: usize| {
        let y = table[x];
        (y != 0 && members.binary_search(&y).is_ok()).then_some(y)
    };
    let sp = s.partner_table();
    let tp = t.partner_table();
    let s_only: Vec<usize> = members.iter().copied().filter(|&x| within(tp, x).is_none()).collect();
    let t_only: Vec<usize> = members.iter().copied().filter(|&x| within(sp, x).is_none()).collect();
    let m = members.len();
    let inconsistent = || {
        Error::InvalidStructure(format!("positions {members:?} do not form an alternating path or cycle"))
    };
    if m < 2 {
        return Err(inconsistent());
    }
    // (type, start, first step uses s)
    let (path_type, start, s_first) = match (m % 2, s_only.len(), t_only.len()) {
        (0, 0, 0) if m > 0 => (PathType::Cycle, members[0], false),
        (0, 2, 0) => (PathType::SEnds, s_only[0], true),
        (0, 0, 2) => (PathType::TEnds, t_only[0], false),
        (1, 1, 1) if s_only[0] < t_only[0] => (PathType::SFirst, s_only[0], true),
        (1, 1, 1) => (PathType::TFirst, t_only[0], false),
        _ => return Err(inconsistent()),
    };
    let mut walk = vec![start];
    let mut use_s = s_first;
    let mut cur = start;
    while let Some(next) = within(if use_s { sp } else { tp }, cur) {
        if next == start {
            break;
        }
        walk.push(next);
        cur = next;
        use_s = !use_s;
        if walk.len() > m {
            return Err(inconsistent());
        }
    }
    if walk.len() != m {
        return Err(inconsistent());
    }
    let restrict = |st: &SecondaryStructure, table: &[usize]| -> Vec<BasePair> {
        st.pairs()
            .filter(|p| within(table, p.i) == Some(p.j))
            .copied()
            .collect()
    };
    let s_pairs = restrict(s, sp);
    let t_pairs = restrict(t, tp);
    Ok(EquivalenceClass { members, walk, path_type, s_pairs, t_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::DEFAULT_THETA;
    use crate::testutil::arb_structure;
    use proptest::prelude::*;

    fn db(text: &str) -> SecondaryStructure {
        SecondaryStructure::parse_dot_bracket(text, DEFAULT_THETA, false).unwrap()
    }

    fn bistable() -> (SecondaryStructure, SecondaryStructure) {
        (db("((((((....))))))........."), db(".....((((((((....))))))))"))
    }

    fn bp(list: &[(usize, usize)]) -> Vec<BasePair> {
        list.iter().map(|&(i, j)| BasePair::new(i, j)).collect()
    }

    #[test]
    fn bistable_partition() {
        let (s, t) = bistable();
        let p = partition_positions(&s, &t).unwrap();
        assert_eq!(p.a, vec![6, 11, 12, 13]);
        assert_eq!(p.c, vec![17]);
        assert!(p.d.is_empty());
        assert_eq!(p.bp1, bp(&[(1, 16), (2, 15), (3, 14)]));
        assert_eq!(p.bp2, bp(&[(7, 24), (8, 23), (9, 22), (10, 21)]));
        assert_eq!(p.b0, vec![4, 5, 18, 19, 20, 25]);
        assert_eq!(p.b.len(), 20);
    }

    #[test]
    fn identical_structures() {
        let (s, _) = bistable();
        let p = partition_positions(&s, &s).unwrap();
        assert!(p.a.is_empty() && p.b.is_empty());
        assert_eq!(p.d.len(), 12);
        assert_eq!(p.c.len(), 13);
        assert!(equivalence_classes(&s, &s, &p.a_union_b()).unwrap().is_empty());
    }

    #[test]
    fn four_cycle() {
        let s = SecondaryStructure::from_pairs(15, &[(1, 15), (5, 10)]).unwrap();
        let t = SecondaryStructure::from_pairs(15, &[(1, 5), (10, 15)]).unwrap();
        let p = partition_positions(&s, &t).unwrap();
        assert_eq!(p.a, vec![1, 5, 10, 15]);
        assert!(p.b.is_empty() && p.d.is_empty());
        assert_eq!(p.c.len(), 11);
        let classes = equivalence_classes(&s, &t, &p.a_union_b()).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].path_type, PathType::Cycle);
        assert_eq!(classes[0].walk, vec![1, 5, 10, 15]);
    }

    #[test]
    fn bistable_classes() {
        let (s, t) = bistable();
        let p = partition_positions(&s, &t).unwrap();
        let classes = equivalence_classes(&s, &t, &p.a_union_b0()).unwrap();
        let got: Vec<(Vec<usize>, u8)> =
            classes.iter().map(|c| (c.walk.clone(), c.path_type.number())).collect();
        assert_eq!(
            got,
            vec![(vec![4, 13, 18], 2), (vec![5, 12, 19], 2), (vec![20, 11, 6, 25], 4)]
        );
        assert_eq!(classes[2].members, vec![6, 11, 20, 25]);
        assert_eq!(classes[0].to_string(), "{4,13,18} type=2");
    }

    #[test]
    fn isolated_pairs() {
        let s = SecondaryStructure::from_pairs(12, &[(1, 6)]).unwrap();
        let t = SecondaryStructure::from_pairs(12, &[(7, 12)]).unwrap();
        let p = partition_positions(&s, &t).unwrap();
        assert_eq!(p.b1, vec![1, 6]);
        assert_eq!(p.b2, vec![7, 12]);
        let classes = equivalence_classes(&s, &t, &p.a_union_b()).unwrap();
        assert_eq!(classes[0].path_type, PathType::SEnds);
        assert_eq!(classes[1].path_type, PathType::TEnds);
        assert!(equivalence_classes(&s, &t, &p.a_union_b0()).unwrap().is_empty());
    }

    #[test]
    fn rejects_broken_class() {
        let s = SecondaryStructure::from_pairs(12, &[(1, 6)]).unwrap();
        let t = SecondaryStructure::empty(12);
        assert!(classify_path_type(&[1, 6, 9], &s, &t).is_err());
        assert_eq!(classify_path_type(&[1, 6], &s, &t).unwrap().0, PathType::SEnds);
    }

    proptest! {
        #[test]
        fn class_invariants(
            s in arb_structure(28),
            t in arb_structure(28),
        ) {
            let p = partition_positions(&s, &t).unwrap();
            let mut all: Vec<usize> = [&p.a, &p.b, &p.c, &p.d].iter().flat_map(|v| v.iter().copied()).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (1..=28).collect::<Vec<_>>());
            prop_assert_eq!(p.b0.len() + p.b1.len() + p.b2.len(), p.b.len());
            prop_assert_eq!(p.bp1.len() * 2, p.b1.len());
            prop_assert_eq!(p.bp2.len() * 2, p.b2.len());
            let universe = p.a_union_b();
            let classes = equivalence_classes(&s, &t, &universe).unwrap();
            prop_assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), universe.len());
            for c in &classes {
                let ends = [c.walk[0], *c.walk.last().unwrap()];
                match c.path_type {
                    PathType::Cycle => {
                        prop_assert_eq!(c.len() % 2, 0);
                        prop_assert!(c.members.iter().all(|x| p.a.contains(x)));
                    }
                    _ => {
                        // B members sit only at path ends; A members only inside
                        for (k, x) in c.walk.iter().enumerate() {
                            let end = k == 0 || k + 1 == c.len();
                            prop_assert_eq!(p.b.contains(x), end);
                        }
                        prop_assert!(ends.iter().all(|x| p.b.contains(x)));
                    }
                }
                let parity_ok = match c.path_type {
                    PathType::SEnds | PathType::TEnds | PathType::Cycle => c.len() % 2 == 0,
                    PathType::SFirst | PathType::TFirst => c.len() % 2 == 1,
                };
                prop_assert!(parity_ok);
            }
        }

        #[test]
        fn removal_refines_classes(
            s in arb_structure(28),
            t in arb_structure(28),
            pick in 0usize..100,
        ) {
            prop_assume!(!s.is_empty());
            let victim = *s.pairs().nth(pick % s.num_pairs()).unwrap();
            let mut smaller = s.clone();
            smaller.remove(&victim).unwrap();
            let before = equivalence_classes(&s, &t, &partition_positions(&s, &t).unwrap().a_union_b()).unwrap();
            let after = equivalence_classes(&smaller, &t, &partition_positions(&smaller, &t).unwrap().a_union_b()).unwrap();
            // every new class sits inside an old class or consists of freshly exposed positions
            for c in &after {
                let home = before.iter().find(|b| b.contains(c.members[0]));
                if let Some(home) = home {
                    prop_assert!(c.members.iter().all(|x| home.contains(*x)));
                } else {
                    prop_assert!(c.members.iter().all(|x| victim.contains(*x) || before.iter().all(|b| !b.contains(*x))));
                }
            }
        }
    }
}
