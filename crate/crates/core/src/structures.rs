//! RNA sequences, secondary structures and elementary distances.
//!
//! Positions are 1-based throughout the public interface.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum number of unpaired bases enclosed by a hairpin.
pub const DEFAULT_THETA: usize = 3;

/// A base pair `(i, j)` with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BasePair {
    pub i: usize,
    pub j: usize,
}

impl BasePair {
    /// Builds the pair with its endpoints in increasing order.
    pub fn new(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b, "a base pair needs two distinct positions");
        if a < b {
            BasePair { i: a, j: b }
        } else {
            BasePair { i: b, j: a }
        }
    }

    pub fn contains(&self, p: usize) -> bool {
        self.i == p || self.j == p
    }

    /// The endpoint opposite `p`, if `p` is an endpoint.
    pub fn other(&self, p: usize) -> Option<usize> {
        if p == self.i {
            Some(self.j)
        } else if p == self.j {
            Some(self.i)
        } else {
            None
        }
    }

    /// True when the pairs share exactly one position.
    pub fn touches(&self, o: &BasePair) -> bool {
        let shared = [self.i, self.j]
            .iter()
            .filter(|&&p| o.contains(p))
            .count();
        shared == 1
    }

    /// True when the pairs form a pseudoknot, `i < k < j < l` in some order.
    pub fn crosses(&self, o: &BasePair) -> bool {
        (self.i < o.i && o.i < self.j && self.j < o.j) || (o.i < self.i && self.i < o.j && o.j < self.j)
    }
}

impl fmt::Display for BasePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// A nucleotide string over `A`, `C`, `G`, `U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RnaSequence {
    bases: Vec<u8>,
}

impl RnaSequence {
    pub fn parse(text: &str) -> Result<Self> {
        let bases: Vec<u8> = text.trim().bytes().map(|b| b.to_ascii_uppercase()).collect();
        if bases.is_empty() {
            return Err(Error::Parse("empty sequence".into()));
        }
        if let Some((k, &b)) = bases.iter().enumerate().find(|(_, b)| !b"ACGU".contains(b)) {
            return Err(Error::Parse(format!(
                "invalid nucleotide '{}' at position {}",
                b as char,
                k + 1
            )));
        }
        Ok(RnaSequence { bases })
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Nucleotide at 1-based position `i`.
    pub fn base(&self, i: usize) -> u8 {
        self.bases[i - 1]
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.bases).expect("sequence is ASCII")
    }

    /// Watson-Crick or GU wobble pair between positions `i` and `j`.
    pub fn can_pair(&self, i: usize, j: usize) -> bool {
        matches!(
            (self.base(i), self.base(j)),
            (b'A', b'U') | (b'U', b'A') | (b'G', b'C') | (b'C', b'G') | (b'G', b'U') | (b'U', b'G')
        )
    }

    pub(crate) fn from_bases(bases: Vec<u8>) -> Self {
        RnaSequence { bases }
    }
}

impl fmt::Display for RnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Integer-valued view of a structure: `value(i) = j` if `i` pairs with `j`, else 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingFunction {
    values: Vec<usize>,
}

impl PairingFunction {
    pub fn get(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values for positions `1..=n`, stored at indices `0..n`.
    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// A set of base pairs over positions `1..=len`.
///
/// Equality compares length and pairs only.
#[derive(Clone, Debug)]
pub struct SecondaryStructure {
    len: usize,
    theta: usize,
    allow_pk: bool,
    pairs: BTreeSet<BasePair>,
    // partner[p] for p in 1..=len, 0 when unpaired; index 0 unused
    partner: Vec<usize>,
}

impl PartialEq for SecondaryStructure {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.pairs == other.pairs
    }
}

impl Eq for SecondaryStructure {}

impl SecondaryStructure {
    /// The open chain of length `len`.
    pub fn empty(len: usize) -> Self {
        SecondaryStructure {
            len,
            theta: DEFAULT_THETA,
            allow_pk: false,
            pairs: BTreeSet::new(),
            partner: vec![0; len + 1],
        }
    }

    /// Validates and builds a structure from a pair list.
    pub fn new<I>(len: usize, pairs: I, theta: usize, allow_pk: bool) -> Result<Self>
    where
        I: IntoIterator<Item = BasePair>,
    {
        let mut s = SecondaryStructure { theta, allow_pk, ..Self::empty(len) };
        for p in pairs {
            s.check_pair_shape(&p)?;
            if s.partner[p.i] != 0 || s.partner[p.j] != 0 {
                return Err(Error::InvalidStructure(format!("base triple at pair {p}")));
            }
            s.link(p);
        }
        if !allow_pk {
            if let Some((a, b)) = s.find_crossing() {
                return Err(Error::InvalidStructure(format!("pairs {a} and {b} cross")));
            }
        }
        Ok(s)
    }

    /// Pseudoknot-free structure with the default hairpin gap.
    pub fn from_pairs(len: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(len, pairs.iter().map(|&(a, b)| BasePair::new(a, b)), DEFAULT_THETA, false)
    }

    /// Parses dot-bracket text; square brackets mark a second, crossing layer.
    pub fn parse_dot_bracket(text: &str, theta: usize, allow_pk: bool) -> Result<Self> {
        let text = text.trim();
        let mut round = Vec::new();
        let mut square = Vec::new();
        let mut pairs = Vec::new();
        for (k, c) in text.chars().enumerate() {
            let pos = k + 1;
            match c {
                '.' => {}
                '(' => round.push(pos),
                ')' => {
                    let open = round
                        .pop()
                        .ok_or_else(|| Error::Parse(format!("unmatched ')' at position {pos}")))?;
                    pairs.push(BasePair::new(open, pos));
                }
                '[' | ']' if !allow_pk => {
                    return Err(Error::Parse(format!(
                        "'{c}' at position {pos} requires pseudoknots to be allowed"
                    )))
                }
                '[' => square.push(pos),
                ']' => {
                    let open = square
                        .pop()
                        .ok_or_else(|| Error::Parse(format!("unmatched ']' at position {pos}")))?;
                    pairs.push(BasePair::new(open, pos));
                }
                other => {
                    return Err(Error::Parse(format!("invalid character '{other}' at position {pos}")))
                }
            }
        }
        if let Some(p) = round.last().or(square.last()) {
            return Err(Error::Parse(format!("unmatched opening bracket at position {p}")));
        }
        Self::new(text.chars().count(), pairs, theta, allow_pk)
    }

    /// Dot-bracket text; crossing pairs go to a square-bracket layer.
    pub fn to_dot_bracket(&self) -> Result<String> {
        let mut layers: [Vec<BasePair>; 2] = [Vec::new(), Vec::new()];
        for p in &self.pairs {
            let slot = layers
                .iter()
                .position(|layer| layer.iter().all(|q| !q.crosses(p)))
                .ok_or_else(|| {
                    Error::Unsupported(format!("pair {p} needs a third bracket layer"))
                })?;
            layers[slot].push(*p);
        }
        let mut out = vec!['.'; self.len];
        for (layer, (open, close)) in layers.iter().zip([('(', ')'), ('[', ']')]) {
            for p in layer {
                out[p.i - 1] = open;
                out[p.j - 1] = close;
            }
        }
        Ok(out.into_iter().collect())
    }

    pub fn pairing_function(&self) -> PairingFunction {
        PairingFunction { values: self.partner[1..].to_vec() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn allows_pseudoknots(&self) -> bool {
        self.allow_pk
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Pairs in increasing order.
    pub fn pairs(&self) -> impl Iterator<Item = &BasePair> + '_ {
        self.pairs.iter()
    }

    pub fn contains(&self, p: &BasePair) -> bool {
        self.pairs.contains(p)
    }

    /// Partner of position `i`, if paired.
    pub fn partner(&self, i: usize) -> Option<usize> {
        match self.partner[i] {
            0 => None,
            j => Some(j),
        }
    }

    /// Partner table indexed by position, 0 for unpaired; index 0 is unused.
    pub fn partner_table(&self) -> &[usize] {
        &self.partner
    }

    pub fn is_paired(&self, i: usize) -> bool {
        self.partner[i] != 0
    }

    /// Checks that every pair is canonical for `seq`.
    pub fn check_sequence(&self, seq: &RnaSequence) -> Result<()> {
        if seq.len() != self.len {
            return Err(Error::LengthMismatch { left: seq.len(), right: self.len });
        }
        match self.pairs.iter().find(|p| !seq.can_pair(p.i, p.j)) {
            Some(p) => Err(Error::InvalidStructure(format!(
                "pair {p} is not canonical ({}-{})",
                seq.base(p.i) as char,
                seq.base(p.j) as char
            ))),
            None => Ok(()),
        }
    }

    /// Some pair of crossing base pairs, if any.
    pub fn find_crossing(&self) -> Option<(BasePair, BasePair)> {
        let mut stack: Vec<usize> = Vec::new();
        for pos in 1..=self.len {
            let q = self.partner[pos];
            if q > pos {
                stack.push(pos);
            } else if q != 0 {
                let top = *stack.last().expect("opening position was pushed");
                if top != q {
                    return Some((BasePair::new(top, self.partner[top]), BasePair::new(q, pos)));
                }
                stack.pop();
            }
        }
        None
    }

    /// Same pairs, reinterpreted with another pseudoknot flag.
    pub fn with_pseudoknots(&self, allow_pk: bool) -> Result<Self> {
        Self::new(self.len, self.pairs.iter().copied(), self.theta, allow_pk)
    }

    /// Whether `p` could be added without creating a triple or, unless allowed, a crossing.
    pub fn can_insert(&self, p: &BasePair, allow_pk: bool) -> Result<()> {
        self.check_pair_shape(p)?;
        if self.pairs.contains(p) {
            return Err(Error::IllegalMove(format!("pair {p} is already present")));
        }
        for pos in [p.i, p.j] {
            if self.partner[pos] != 0 {
                return Err(Error::IllegalMove(format!(
                    "adding {p} creates a base triple at position {pos}"
                )));
            }
        }
        if !allow_pk {
            if let Some(q) = self.crossing_partner(p) {
                return Err(Error::IllegalMove(format!("adding {p} crosses {q}")));
            }
        }
        Ok(())
    }

    /// A present pair crossing `p`, found by scanning the interior of `p`.
    pub fn crossing_partner(&self, p: &BasePair) -> Option<BasePair> {
        ((p.i + 1)..p.j).find_map(|k| {
            let q = self.partner[k];
            (q != 0 && (q < p.i || q > p.j)).then(|| BasePair::new(k, q))
        })
    }

    pub(crate) fn insert(&mut self, p: BasePair, allow_pk: bool) -> Result<()> {
        self.can_insert(&p, allow_pk)?;
        self.link(p);
        Ok(())
    }

    pub(crate) fn remove(&mut self, p: &BasePair) -> Result<()> {
        if !self.pairs.remove(p) {
            return Err(Error::IllegalMove(format!("pair {p} is not present")));
        }
        self.partner[p.i] = 0;
        self.partner[p.j] = 0;
        Ok(())
    }

    fn link(&mut self, p: BasePair) {
        self.partner[p.i] = p.j;
        self.partner[p.j] = p.i;
        self.pairs.insert(p);
    }

    fn check_pair_shape(&self, p: &BasePair) -> Result<()> {
        if p.i < 1 || p.j > self.len || p.i >= p.j {
            return Err(Error::InvalidStructure(format!(
                "pair {p} lies outside positions 1..={}",
                self.len
            )));
        }
        if p.j - p.i <= self.theta {
            return Err(Error::InvalidStructure(format!(
                "pair {p} encloses fewer than {} unpaired positions",
                self.theta
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_same_length(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<()> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch { left: s.len(), right: t.len() });
    }
    Ok(())
}

/// Size of the symmetric difference of the pair sets.
pub fn base_pair_distance(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<usize> {
    check_same_length(s, t)?;
    Ok(s.pairs.symmetric_difference(&t.pairs).count())
}

/// Number of positions whose partners differ.
pub fn hamming_distance(s: &SecondaryStructure, t: &SecondaryStructure) -> Result<usize> {
    check_same_length(s, t)?;
    Ok((1..=s.len()).filter(|&i| s.partner[i] != t.partner[i]).count())
}

/// Contents of a structure-pair file: optional `>` header, sequence (or `-`), `s`, `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructurePair {
    pub header: Option<String>,
    pub sequence: Option<RnaSequence>,
    pub s: SecondaryStructure,
    pub t: SecondaryStructure,
}

impl StructurePair {
    /// Blank lines are ignored; bracket layers are accepted, so nested-only
    /// algorithms reject crossing input themselves.
    pub fn parse(text: &str, theta: usize) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
        let header = lines.next_if(|l| l.starts_with('>')).map(|l| l[1..].trim().to_string());
        let mut next = |what: &str| lines.next().ok_or_else(|| Error::Parse(format!("missing {what} line")));
        let seq_line = next("sequence")?;
        let s_line = next("first structure")?;
        let t_line = next("second structure")?;
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line '{extra}'")));
        }
        let sequence = match seq_line {
            "-" => None,
            text => Some(RnaSequence::parse(text)?),
        };
        let read = |line: &str| {
            let x = SecondaryStructure::parse_dot_bracket(line, theta, true)?;
            match x.find_crossing() {
                Some(_) => Ok(x),
                None => x.with_pseudoknots(false),
            }
        };
        let (s, t) = (read(s_line)?, read(t_line)?);
        check_same_length(&s, &t)?;
        if let Some(seq) = &sequence {
            if seq.len() != s.len() {
                return Err(Error::LengthMismatch { left: seq.len(), right: s.len() });
            }
        }
        Ok(StructurePair { header, sequence, s, t })
    }
}
