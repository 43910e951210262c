//! Moves, trajectories, replay and validation, and the MS2 path algorithms.

mod bnb;
mod exact;
mod format;
mod greedy;
mod near;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structures::{base_pair_distance, check_same_length, BasePair, SecondaryStructure};

pub use bnb::ms2_branch_and_bound;
pub use exact::{ms2_exact, ms2_exact_report, ExactReport, GraphStats, PhaseTimings};
pub use format::{parse_text_trajectory, render_json, render_text, TextHeader};
pub use greedy::ms2_greedy;
pub use near::ms2_near_optimal;

/// One elementary step of a refolding trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Move {
    Add(BasePair),
    Remove(BasePair),
    /// Replace `from` by `to`; the two pairs share exactly one position.
    Shift { from: BasePair, to: BasePair },
}

impl Move {
    /// Builds a shift, checking that exactly one endpoint moves.
    pub fn shift(from: BasePair, to: BasePair) -> Result<Move> {
        if !from.touches(&to) {
            return Err(Error::IllegalMove(format!(
                "shift {from} -> {to} must keep exactly one position"
            )));
        }
        Ok(Move::Shift { from, to })
    }

    /// The fixed position of a shift.
    pub fn pivot(&self) -> Option<usize> {
        match self {
            Move::Shift { from, to } => [from.i, from.j].into_iter().find(|&p| to.contains(p)),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Add(p) => write!(f, "add {p}"),
            Move::Remove(p) => write!(f, "remove {p}"),
            Move::Shift { from, to } => write!(f, "{from} -> {to}"),
        }
    }
}

/// Move-count breakdown.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveCounts {
    pub removals: usize,
    pub additions: usize,
    pub shifts: usize,
}

/// Ordered moves applied to an initial structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub initial: SecondaryStructure,
    pub moves: Vec<Move>,
    /// Whether intermediates may contain crossing pairs.
    pub allow_pk: bool,
}

impl Trajectory {
    pub fn new(initial: SecondaryStructure, moves: Vec<Move>, allow_pk: bool) -> Self {
        Trajectory { initial, moves, allow_pk }
    }

    /// Number of moves.
    pub fn distance(&self) -> usize {
        self.moves.len()
    }

    pub fn counts(&self) -> MoveCounts {
        let mut c = MoveCounts::default();
        for m in &self.moves {
            match m {
                Move::Add(_) => c.additions += 1,
                Move::Remove(_) => c.removals += 1,
                Move::Shift { .. } => c.shifts += 1,
            }
        }
        c
    }

    /// Every structure along the way, starting with the initial one.
    pub fn replay(&self) -> Result<Vec<SecondaryStructure>> {
        let mut cur = self.initial.clone();
        let mut states = vec![cur.clone()];
        for (k, m) in self.moves.iter().enumerate() {
            apply_in_place(&mut cur, m, self.allow_pk)
                .map_err(|e| Error::IllegalMove(format!("step {}: {e}", k + 1)))?;
            states.push(cur.clone());
        }
        Ok(states)
    }

    /// Structure reached after the last move.
    pub fn final_structure(&self) -> Result<SecondaryStructure> {
        let mut cur = self.initial.clone();
        for (k, m) in self.moves.iter().enumerate() {
            apply_in_place(&mut cur, m, self.allow_pk)
                .map_err(|e| Error::IllegalMove(format!("step {}: {e}", k + 1)))?;
        }
        Ok(cur)
    }
}

/// Successor of `s` under `mv`.
pub fn apply_move(s: &SecondaryStructure, mv: &Move, allow_pk: bool) -> Result<SecondaryStructure> {
    let mut next = s.clone();
    apply_in_place(&mut next, mv, allow_pk)?;
    Ok(next)
}

pub(crate) fn apply_in_place(s: &mut SecondaryStructure, mv: &Move, allow_pk: bool) -> Result<()> {
    match mv {
        Move::Add(p) => s.insert(*p, allow_pk),
        Move::Remove(p) => s.remove(p),
        Move::Shift { from, to } => {
            if !from.touches(to) {
                return Err(Error::IllegalMove(format!(
                    "shift {from} -> {to} must keep exactly one position"
                )));
            }
            s.remove(from)?;
            if let Err(e) = s.insert(*to, allow_pk) {
                s.insert(*from, true).expect("restoring a removed pair");
                return Err(e);
            }
            Ok(())
        }
    }
}

/// Replays `traj` from `s` and checks that it ends at `t` with valid intermediates.
pub fn verify_trajectory(
    s: &SecondaryStructure,
    t: &SecondaryStructure,
    traj: &Trajectory,
    allow_pk: bool,
) -> Result<()> {
    check_same_length(s, t)?;
    if traj.initial != *s {
        return Err(Error::IllegalMove("trajectory does not start at the source".into()));
    }
    let replay = Trajectory { allow_pk, ..traj.clone() };
    let end = replay.final_structure()?;
    if end != *t {
        return Err(Error::IllegalMove("trajectory does not end at the target".into()));
    }
    Ok(())
}

/// Whether each pair of `s` and `t` is touched at most once, so
/// `removals + additions + 2 * shifts` equals the base pair distance.
pub fn bookkeeping_holds(s: &SecondaryStructure, t: &SecondaryStructure, traj: &Trajectory) -> Result<bool> {
    let c = traj.counts();
    Ok(c.removals + c.additions + 2 * c.shifts == base_pair_distance(s, t)?)
}

/// Options shared by the MS2 algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ms2Options {
    /// Allow a shift only when its moving endpoint travels at most this far.
    pub locality: Option<usize>,
    /// Abort cycle enumeration beyond this many cycles.
    pub max_cycles: usize,
    /// Edge rule of the conflict digraph.
    pub relation: crate::conflict_graph::EdgeRelation,
    /// Expansion budget of the branch-and-bound search.
    pub node_budget: usize,
}

impl Default for Ms2Options {
    fn default() -> Self {
        Ms2Options {
            locality: None,
            max_cycles: 50_000_000,
            relation: crate::conflict_graph::EdgeRelation::Strict,
            node_budget: 10_000_000,
        }
    }
}

/// Drops pairs of `s` that no pair of `t` touches, recording the removals.
pub(crate) fn strip_untouched(
    s: &SecondaryStructure,
    t: &SecondaryStructure,
    moves: &mut Vec<Move>,
) -> Result<SecondaryStructure> {
    let mut cur = s.clone();
    let untouched: Vec<BasePair> = s
        .pairs()
        .filter(|p| !t.is_paired(p.i) && !t.is_paired(p.j))
        .copied()
        .collect();
    for p in untouched {
        cur.remove(&p)?;
        moves.push(Move::Remove(p));
    }
    Ok(cur)
}

/// Adds the missing pairs of `t`: untouched ones first, then the rest, each group sorted.
pub(crate) fn add_remaining(
    original_s: &SecondaryStructure,
    cur: &mut SecondaryStructure,
    t: &SecondaryStructure,
    moves: &mut Vec<Move>,
) -> Result<()> {
    let missing: Vec<BasePair> = t.pairs().filter(|p| !cur.contains(p)).copied().collect();
    let (untouched, rest): (Vec<BasePair>, Vec<BasePair>) = missing
        .into_iter()
        .partition(|p| !original_s.is_paired(p.i) && !original_s.is_paired(p.j));
    for p in untouched.into_iter().chain(rest) {
        cur.insert(p, false)?;
        moves.push(Move::Add(p));
    }
    Ok(())
}

/// Executes the shift of `v` if still meaningful, clearing a pair that blocks its new endpoint.
///
/// When the shift remains illegal its source pair is removed instead, so the
/// final addition phase can finish the job.
pub(crate) fn guarded_shift(
    cur: &mut SecondaryStructure,
    v: &crate::conflict_graph::TripletNode,
    moves: &mut Vec<Move>,
) -> Result<()> {
    let (from, to) = (v.s_pair(), v.t_pair());
    if !cur.contains(&from) || cur.contains(&to) {
        return Ok(());
    }
    if let Some(q) = cur.partner(v.x) {
        let blocker = BasePair::new(v.x, q);
        cur.remove(&blocker)?;
        moves.push(Move::Remove(blocker));
    }
    let mv = Move::Shift { from, to };
    if apply_in_place(cur, &mv, false).is_ok() {
        moves.push(mv);
    } else {
        cur.remove(&from)?;
        moves.push(Move::Remove(from));
    }
    Ok(())
}

/// Removes every remaining pair that `t` lacks, in sorted order.
pub(crate) fn remove_leftovers(
    cur: &mut SecondaryStructure,
    t: &SecondaryStructure,
    keep: impl Fn(&BasePair) -> bool,
    moves: &mut Vec<Move>,
) -> Result<()> {
    let doomed: Vec<BasePair> = cur.pairs().filter(|p| !t.contains(p) && !keep(p)).copied().collect();
    for p in doomed {
        cur.remove(&p)?;
        moves.push(Move::Remove(p));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::DEFAULT_THETA;

    fn db(text: &str) -> SecondaryStructure {
        SecondaryStructure::parse_dot_bracket(text, DEFAULT_THETA, false).unwrap()
    }

    fn bp(i: usize, j: usize) -> BasePair {
        BasePair::new(i, j)
    }

    fn bistable_listing() -> Vec<Move> {
        vec![
            Move::Remove(bp(1, 16)),
            Move::Remove(bp(2, 15)),
            Move::Remove(bp(3, 14)),
            Move::Shift { from: bp(4, 13), to: bp(13, 18) },
            Move::Shift { from: bp(5, 12), to: bp(12, 19) },
            Move::Shift { from: bp(6, 11), to: bp(11, 20) },
            Move::Add(bp(7, 24)),
            Move::Add(bp(8, 23)),
            Move::Add(bp(9, 22)),
            Move::Add(bp(10, 21)),
            Move::Add(bp(6, 25)),
        ]
    }

    #[test]
    fn apply_examples() {
        let s = db("((((((....)))))).........");
        let next = apply_move(&s, &Move::Remove(bp(1, 16)), false).unwrap();
        assert_eq!(next, db(".(((((....))))).........."));
        let step3 = db("...(((....)))............");
        let step4 = apply_move(&step3, &Move::Shift { from: bp(4, 13), to: bp(13, 18) }, false).unwrap();
        assert_eq!(step4, db("....((....))(....)......."));
        let e = SecondaryStructure::empty(8);
        assert_eq!(apply_move(&e, &Move::Add(bp(1, 8)), false).unwrap().num_pairs(), 1);
    }

    #[test]
    fn illegal_moves() {
        let s = db("((....))..........");
        assert!(apply_move(&s, &Move::Remove(bp(3, 8)), false).is_err());
        assert!(apply_move(&s, &Move::Add(bp(1, 12)), false).is_err());
        // crossing addition is rejected unless pseudoknots are allowed
        assert!(apply_move(&s, &Move::Add(bp(5, 14)), false).is_err());
        assert!(apply_move(&s, &Move::Add(bp(5, 14)), true).is_ok());
        assert!(Move::shift(bp(1, 8), bp(2, 9)).is_err());
        assert!(apply_move(&s, &Move::Shift { from: bp(2, 7), to: bp(2, 6) }, false).is_ok());
        let crossing = Move::Shift { from: bp(2, 7), to: bp(7, 12) };
        assert!(apply_move(&s, &crossing, false).is_err());
        assert!(apply_move(&s, &crossing, true).is_ok());
        assert!(apply_move(&s, &Move::Shift { from: bp(2, 7), to: bp(3, 12) }, false).is_err());
    }

    #[test]
    fn verifies_bistable_listing() {
        let s = db("((((((....)))))).........");
        let t = db(".....((((((((....))))))))");
        let traj = Trajectory::new(s.clone(), bistable_listing(), false);
        assert!(verify_trajectory(&s, &t, &traj, false).is_ok());
        assert_eq!(traj.counts(), MoveCounts { removals: 3, additions: 5, shifts: 3 });
        assert!(bookkeeping_holds(&s, &t, &traj).unwrap());

        let mut swapped = bistable_listing();
        swapped.swap(0, 3);
        let traj = Trajectory::new(s.clone(), swapped, false);
        assert!(verify_trajectory(&s, &t, &traj, false).is_err());

        let empty = Trajectory::new(s.clone(), vec![], false);
        assert!(verify_trajectory(&s, &s, &empty, false).is_ok());
        assert!(verify_trajectory(&s, &t, &empty, false).is_err());
    }

    #[test]
    fn move_display() {
        assert_eq!(Move::Remove(bp(1, 16)).to_string(), "remove (1,16)");
        assert_eq!(Move::Add(bp(6, 25)).to_string(), "add (6,25)");
        let m = Move::Shift { from: bp(4, 13), to: bp(13, 18) };
        assert_eq!(m.to_string(), "(4,13) -> (13,18)");
        assert_eq!(m.pivot(), Some(13));
    }
}
