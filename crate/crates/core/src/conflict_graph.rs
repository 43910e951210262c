//! Conflict digraph over candidate shift moves.
//!
//! A node `(x, y, z)` stands for shifting the pair `{y, z}` of `s` onto the
//! pair `{x, y}` of `t` around the pivot `y`. An edge `u -> v` says that
//! shift `u` has to happen before shift `v`, because the pair `u` releases
//! touches or crosses the pair `v` creates.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{equivalence_classes, partition_positions, EquivalenceClass, PathType};
use crate::structures::{check_same_length, BasePair, SecondaryStructure};

/// A candidate shift `{y, z} -> {x, y}` with pivot `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TripletNode {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl TripletNode {
    pub fn new(x: usize, y: usize, z: usize) -> Self {
        debug_assert!(x != y && y != z && x != z);
        TripletNode { x, y, z }
    }

    /// Pair created in `t`.
    pub fn t_pair(&self) -> BasePair {
        BasePair::new(self.x, self.y)
    }

    /// Pair released from `s`.
    pub fn s_pair(&self) -> BasePair {
        BasePair::new(self.y, self.z)
    }

    pub fn positions(&self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }

    /// Number of shared positions.
    pub fn overlap(&self, other: &TripletNode) -> usize {
        self.positions().iter().filter(|p| other.positions().contains(p)).count()
    }

    /// Distance travelled by the moving endpoint.
    pub fn displacement(&self) -> usize {
        self.x.abs_diff(self.z)
    }

    /// Shape of the shift by relative order of `x`, `y`, `z`, numbered 1 to 6.
    pub fn node_type(&self) -> u8 {
        let (x, y, z) = (self.x, self.y, self.z);
        if x < y && y < z {
            1
        } else if z < y && y < x {
            2
        } else if y < z && z < x {
            3
        } else if y < x && x < z {
            4
        } else if z < x && x < y {
            5
        } else {
            6
        }
    }
}

impl Ord for TripletNode {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x, self.z).cmp(&(other.y, other.x, other.z))
    }
}

impl PartialOrd for TripletNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TripletNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// Which pairs of shifts are joined by an edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeRelation {
    /// Nodes overlapping in at most one position, released pair touching or crossing created pair.
    #[default]
    Strict,
    /// Released pair touching or crossing created pair, with no overlap filter.
    Unfiltered,
}

impl FromStr for EdgeRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(EdgeRelation::Strict),
            "unfiltered" => Ok(EdgeRelation::Unfiltered),
            other => Err(Error::Parse(format!("unknown edge relation '{other}'"))),
        }
    }
}

/// Whether `u -> v` is an edge.
pub fn has_conflict_edge(u: &TripletNode, v: &TripletNode, relation: EdgeRelation) -> bool {
    if u == v {
        return false;
    }
    let released = u.s_pair();
    let created = v.t_pair();
    let conflict = released.touches(&created) || released.crosses(&created);
    match relation {
        EdgeRelation::Strict => u.overlap(v) <= 1 && conflict,
        EdgeRelation::Unfiltered => conflict,
    }
}

/// All shift candidates between `s` and `t`, in node order.
pub fn triplet_nodes(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<Vec<TripletNode>> {
    check_same_length(s, t)?;
    let sp = s.partner_table();
    let tp = t.partner_table();
    let mut nodes: Vec<TripletNode> = (1..=s.len())
        .filter(|&y| sp[y] != 0 && tp[y] != 0 && sp[y] != tp[y])
        .map(|y| TripletNode::new(tp[y], y, sp[y]))
        .collect();
    nodes.sort();
    Ok(nodes)
}

/// Digraph on shift candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictDigraph {
    nodes: Vec<TripletNode>,
    succ: Vec<Vec<usize>>,
}

impl ConflictDigraph {
    /// Builds the edges among `nodes`, which are sorted into node order first.
    pub fn from_nodes(mut nodes: Vec<TripletNode>, relation: EdgeRelation) -> Self {
        nodes.sort();
        nodes.dedup();
        let succ = nodes
            .iter()
            .map(|u| {
                (0..nodes.len())
                    .filter(|&k| has_conflict_edge(u, &nodes[k], relation))
                    .collect()
            })
            .collect();
        ConflictDigraph { nodes, succ }
    }

    pub fn nodes(&self) -> &[TripletNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Successor lists by node index.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Edges as index pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    pub fn index_of(&self, node: &TripletNode) -> Option<usize> {
        self.nodes.binary_search(node).ok()
    }

    /// Successor lists of the subgraph induced by `keep`, reindexed by position in `keep`.
    pub fn induced(&self, keep: &[usize]) -> Vec<Vec<usize>> {
        let mut slot = vec![usize::MAX; self.nodes.len()];
        for (k, &v) in keep.iter().enumerate() {
            slot[v] = k;
        }
        keep.iter()
            .map(|&v| {
                self.succ[v]
                    .iter()
                    .filter(|&&w| slot[w] != usize::MAX)
                    .map(|&w| slot[w])
                    .collect()
            })
            .collect()
    }

    /// Graphviz rendering with one node per shift, labelled `(x,y,z)`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph conflict {\n");
        for (k, v) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{k} [label=\"{v}\"];\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  n{u} -> n{v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Conflict digraph with the strict edge relation.
pub fn build_conflict_digraph(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<ConflictDigraph> {
    build_conflict_digraph_with(s, t, EdgeRelation::Strict, None)
}

/// Conflict digraph with a chosen relation, optionally dropping shifts that move farther than `locality`.
pub fn build_conflict_digraph_with(
    s: &SecondaryStructure,
    t: &SecondaryStructure,
    relation: EdgeRelation,
    locality: Option<usize>,
) -> Result<ConflictDigraph> {
    let nodes = triplet_nodes(s, t)?
        .into_iter()
        .filter(|v| locality.is_none_or(|d| v.displacement() <= d))
        .collect();
    Ok(ConflictDigraph::from_nodes(nodes, relation))
}

/// Orientation of a closed 2-cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TwoCycleCase {
    /// `t` holds `(a1,a2),(a3,a4)`; `s` holds `(a1,a4),(a2,a3)`.
    A,
    /// `s` holds `(a1,a2),(a3,a4)`; `t` holds `(a1,a4),(a2,a3)`.
    B,
}

/// A four-position alternating cycle whose shifts pairwise overlap in two positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClosedTwoCycle {
    pub positions: [usize; 4],
    pub case: TwoCycleCase,
    /// `v1..v4`; `v1` is the shift used after the opening removal.
    pub nodes: [TripletNode; 4],
}

impl ClosedTwoCycle {
    fn new(a: [usize; 4], case: TwoCycleCase) -> Self {
        let [a1, a2, a3, a4] = a;
        let nodes = match case {
            TwoCycleCase::A => [
                TripletNode::new(a1, a2, a3),
                TripletNode::new(a3, a4, a1),
                TripletNode::new(a2, a1, a4),
                TripletNode::new(a4, a3, a2),
            ],
            TwoCycleCase::B => [
                TripletNode::new(a1, a4, a3),
                TripletNode::new(a4, a1, a2),
                TripletNode::new(a2, a3, a4),
                TripletNode::new(a3, a2, a1),
            ],
        };
        ClosedTwoCycle { positions: a, case, nodes }
    }

    /// Pair of `s` removed to open the cycle.
    pub fn opening_removal(&self) -> BasePair {
        let [a1, a2, _, a4] = self.positions;
        match self.case {
            TwoCycleCase::A => BasePair::new(a1, a4),
            TwoCycleCase::B => BasePair::new(a1, a2),
        }
    }
}

/// All closed 2-cycles, in order of smallest position.
pub fn detect_closed_2cycles(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<Vec<ClosedTwoCycle>> {
    let part = partition_positions(s, t)?;
    let classes = equivalence_classes(s, t, &part.a_union_b())?;
    let has = |st: &SecondaryStructure, i: usize, j: usize| st.partner(i) == Some(j);
    Ok(classes
        .iter()
        .filter(|c| c.len() == 4 && c.path_type == PathType::Cycle)
        .filter_map(|c| {
            let a = [c.members[0], c.members[1], c.members[2], c.members[3]];
            let [a1, a2, a3, a4] = a;
            let nested = |outer: &SecondaryStructure, inner: &SecondaryStructure| {
                has(inner, a1, a2) && has(inner, a3, a4) && has(outer, a1, a4) && has(outer, a2, a3)
            };
            if nested(s, t) {
                Some(ClosedTwoCycle::new(a, TwoCycleCase::A))
            } else if nested(t, s) {
                Some(ClosedTwoCycle::new(a, TwoCycleCase::B))
            } else {
                None
            }
        })
        .collect())
}

/// Where the target's pivot lies relative to the source's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeDirection {
    Forward,
    Backward,
    TwoCycle,
}

/// Direction and node types of a crossing edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeClass {
    pub direction: EdgeDirection,
    pub source_type: u8,
    pub target_type: u8,
}

/// Classifies `u -> v` under the crossing-only relation; `None` if that edge is absent.
pub fn classify_edge(u: &TripletNode, v: &TripletNode) -> Option<EdgeClass> {
    let crossing = |a: &TripletNode, b: &TripletNode| a.s_pair().crosses(&b.t_pair());
    if !crossing(u, v) {
        return None;
    }
    let direction = if crossing(v, u) {
        EdgeDirection::TwoCycle
    } else if u.y < v.y {
        EdgeDirection::Forward
    } else {
        EdgeDirection::Backward
    };
    Some(EdgeClass { direction, source_type: u.node_type(), target_type: v.node_type() })
}

/// An arc between classes, carrying the crossing `s` pairs of its source class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseArc {
    pub from: usize,
    pub to: usize,
    /// Pairs of `s` inside class `from` crossing some pair of `t` inside class `to`.
    pub crossing_pairs: Vec<BasePair>,
}

impl CoarseArc {
    pub fn weight(&self) -> usize {
        self.crossing_pairs.len()
    }
}

/// Digraph on equivalence classes; arcs between distinct classes only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseDigraph {
    pub classes: Vec<EquivalenceClass>,
    /// Arcs sorted by `(from, to)`.
    pub arcs: Vec<CoarseArc>,
}

impl CoarseDigraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.classes.len()];
        for a in &self.arcs {
            succ[a.from].push(a.to);
        }
        succ
    }

    pub fn arc(&self, from: usize, to: usize) -> Option<&CoarseArc> {
        self.arcs
            .binary_search_by(|a| (a.from, a.to).cmp(&(from, to)))
            .ok()
            .map(|k| &self.arcs[k])
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph coarse {\n");
        for (k, c) in self.classes.iter().enumerate() {
            out.push_str(&format!("  c{k} [label=\"{c}\"];\n"));
        }
        for a in &self.arcs {
            out.push_str(&format!("  c{} -> c{} [label=\"{}\"];\n", a.from, a.to, a.weight()));
        }
        out.push_str("}\n");
        out
    }
}

/// Coarse digraph over `classes`, which are taken in the given order.
pub fn build_coarse_digraph(classes: Vec<EquivalenceClass>) -> CoarseDigraph {
    let mut arcs = Vec::new();
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            if i == j {
                continue;
            }
            let crossing_pairs: Vec<BasePair> = ci
                .s_pairs
                .iter()
                .filter(|p| cj.t_pairs.iter().any(|q| p.crosses(q)))
                .copied()
                .collect();
            if !crossing_pairs.is_empty() {
                arcs.push(CoarseArc { from: i, to: j, crossing_pairs });
            }
        }
    }
    CoarseDigraph { classes, arcs }
}

/// Coarse digraph of the classes of A∪B.
pub fn coarse_digraph_of(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<CoarseDigraph> {
    let part = partition_positions(s, t)?;
    Ok(build_coarse_digraph(equivalence_classes(s, t, &part.a_union_b())?))
}
