//! Text listings and JSON for trajectories.
//!
//! A text listing looks like
//!
//! ```text
//! UGUACCGGAAGGUGCGAAUCUUCCG
//! 1234567890123456789012345
//!
//! s: ((((((....)))))).........
//! t: .....((((((((....))))))))
//!
//!  0. ((((((....)))))).........	initial
//!  1. .(((((....)))))..........	remove (1,16)
//! ...
//!
//! Number of base pair removals: 3
//! Number of base pair additions: 5
//! Number of base pair shifts: 3
//! MS2 Distance: 11
//! ```

use std::fmt::Write as _;

use serde::Serialize;

use super::exact::GraphStats;
use super::{Move, MoveCounts, Trajectory};
use crate::error::{Error, Result};
use crate::structures::{BasePair, SecondaryStructure};

/// Optional lines printed above the trajectory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TextHeader {
    pub sequence: Option<String>,
    pub graph: Option<GraphStats>,
}

/// Renders the numbered listing followed by the move breakdown.
pub fn render_text(traj: &Trajectory, target: &SecondaryStructure, header: &TextHeader) -> Result<String> {
    let mut out = String::new();
    if let Some(seq) = &header.sequence {
        let ruler: String = (1..=seq.len()).map(|k| char::from(b'0' + (k % 10) as u8)).collect();
        let _ = writeln!(out, "{seq}\n{ruler}\n");
    }
    if let Some(g) = &header.graph {
        let _ = writeln!(out, "Number of Nodes: {}", g.nodes);
        let _ = writeln!(out, "Number of edges: {}", g.edges);
        let _ = writeln!(out, "Number of cycles: {}", g.cycles);
    }
    let _ = writeln!(out, "s: {}", traj.initial.to_dot_bracket()?);
    let _ = writeln!(out, "t: {}\n", target.to_dot_bracket()?);

    let width = traj.moves.len().to_string().len().max(2);
    for (k, state) in traj.replay()?.iter().enumerate() {
        let note = match k {
            0 => "initial".to_string(),
            _ => traj.moves[k - 1].to_string(),
        };
        let _ = writeln!(out, "{k:>width$}. {}\t{note}", state.to_dot_bracket()?);
    }
    let c = traj.counts();
    let _ = writeln!(out, "\nNumber of base pair removals: {}", c.removals);
    let _ = writeln!(out, "Number of base pair additions: {}", c.additions);
    let _ = writeln!(out, "Number of base pair shifts: {}", c.shifts);
    let _ = writeln!(out, "MS2 Distance: {}", traj.distance());
    Ok(out)
}

#[derive(Serialize)]
struct JsonReport<'a> {
    initial: String,
    target: String,
    distance: usize,
    counts: MoveCounts,
    moves: &'a [Move],
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<&'a GraphStats>,
}

/// Pretty-printed JSON with the move list and breakdown.
pub fn render_json(traj: &Trajectory, target: &SecondaryStructure, graph: Option<&GraphStats>) -> Result<String> {
    let report = JsonReport {
        initial: traj.initial.to_dot_bracket()?,
        target: target.to_dot_bracket()?,
        distance: traj.distance(),
        counts: traj.counts(),
        moves: &traj.moves,
        graph,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn parse_pair(text: &str) -> Result<BasePair> {
    let bad = || Error::Parse(format!("malformed pair '{text}'"));
    let inner = text.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 || a == b {
        return Err(bad());
    }
    Ok(BasePair::new(a, b))
}

fn parse_move(text: &str) -> Result<Move> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("remove") {
        return Ok(Move::Remove(parse_pair(rest)?));
    }
    if let Some(rest) = text.strip_prefix("add") {
        return Ok(Move::Add(parse_pair(rest)?));
    }
    let (from, to) = text
        .split_once("->")
        .ok_or_else(|| Error::Parse(format!("unknown move '{text}'")))?;
    Move::shift(parse_pair(from)?, parse_pair(to)?)
}

/// Reads the numbered lines of a listing back into a trajectory.
///
/// Each listed structure must match the replayed one.
pub fn parse_text_trajectory(text: &str, theta: usize) -> Result<Trajectory> {
    let mut steps = Vec::new();
    for line in text.lines() {
        let Some((index, rest)) = line.trim_start().split_once(". ") else { continue };
        let Ok(index) = index.parse::<usize>() else { continue };
        let (structure, note) = rest
            .split_once('\t')
            .ok_or_else(|| Error::Parse(format!("step {index} has no annotation")))?;
        if index != steps.len() {
            return Err(Error::Parse(format!("expected step {}, found {index}", steps.len())));
        }
        steps.push((structure.trim().to_string(), note.to_string()));
    }
    let (first, _) = steps.first().ok_or_else(|| Error::Parse("no numbered steps".into()))?;
    let allow_pk = steps.iter().any(|(db, _)| db.contains('['));
    let initial = SecondaryStructure::parse_dot_bracket(first, theta, false)?;
    let moves = steps[1..].iter().map(|(_, note)| parse_move(note)).collect::<Result<Vec<_>>>()?;
    let traj = Trajectory::new(initial, moves, allow_pk);
    for (k, (state, (db, _))) in traj.replay()?.iter().zip(&steps).enumerate() {
        if state.to_dot_bracket()? != *db {
            return Err(Error::Parse(format!("step {k} does not match its move")));
        }
    }
    Ok(traj)
}
