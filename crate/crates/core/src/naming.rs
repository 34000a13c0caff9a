//! Crossing names.
//!
//! Every letter of a word is labelled by the pair of strands it crosses,
//! identified by their initial positions, together with a rank counting the
//! earlier crossings of that same pair. For positive words the rank is the
//! plain crossing count; for signed words it is the running linking number:
//! a positive crossing is named `L + 1` and then raises `L`, a negative
//! crossing is named `L` and then lowers it. A cancelling pair `σ σ⁻¹` or
//! `σ⁻¹ σ` therefore carries one name with both signs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{apply_move, check_move, BraidWord, Move, MoveKind, Sign};

/// Name of one crossing: strands `p < q`, rank `a`, crossing sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NameEntry {
    pub p: usize,
    pub q: usize,
    pub a: i64,
    pub sign: Sign,
}

impl NameEntry {
    pub fn new(p: usize, q: usize, a: i64, sign: Sign) -> NameEntry {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        NameEntry { p, q, a, sign }
    }

    pub fn positive(p: usize, q: usize, a: i64) -> NameEntry {
        NameEntry::new(p, q, a, Sign::Positive)
    }

    pub fn strands(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// The same name with the opposite sign.
    pub fn inverse(&self) -> NameEntry {
        NameEntry {
            sign: self.sign.flip(),
            ..*self
        }
    }
}

impl fmt::Display for NameEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N({},{},{})", self.p, self.q, self.a)?;
        if self.sign == Sign::Negative {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl FromStr for NameEntry {
    type Err = Error;

    /// Accepts `N(p,q,a)` and `N(p,q,a)^-1`.
    fn from_str(s: &str) -> Result<NameEntry> {
        let bad = || Error::Data(format!("malformed name {s:?}, expected N(p,q,a) or N(p,q,a)^-1"));
        let s = s.trim();
        let (body, sign) = match s.strip_suffix("^-1") {
            Some(body) => (body, Sign::Negative),
            None => (s, Sign::Positive),
        };
        let inner = body
            .strip_prefix("N(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [p, q, a] = parts.as_slice() else {
            return Err(bad());
        };
        let p: usize = p.parse().map_err(|_| bad())?;
        let q: usize = q.parse().map_err(|_| bad())?;
        let a: i64 = a.parse().map_err(|_| bad())?;
        if p == 0 || q == 0 || p == q {
            return Err(bad());
        }
        Ok(NameEntry::new(p, q, a, sign))
    }
}

/// How two names relate through their strand pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// Both names belong to the same strand pair.
    SamePair,
    /// No strand in common.
    Disjoint,
    /// Exactly one strand in common; `median` when that strand is the
    /// middle value of the three strands involved.
    Shared { common: usize, median: bool },
}

impl PairClass {
    pub fn of(x: &NameEntry, y: &NameEntry) -> PairClass {
        if x.strands() == y.strands() {
            return PairClass::SamePair;
        }
        let xs = [x.p, x.q];
        let common = xs.iter().copied().find(|s| *s == y.p || *s == y.q);
        match common {
            None => PairClass::Disjoint,
            Some(c) => {
                let other_x = if x.p == c { x.q } else { x.p };
                let other_y = if y.p == c { y.q } else { y.p };
                let lo = other_x.min(other_y);
                let hi = other_x.max(other_y);
                PairClass::Shared {
                    common: c,
                    median: lo < c && c < hi,
                }
            }
        }
    }

    pub fn is_median(&self) -> bool {
        matches!(self, PairClass::Shared { median: true, .. })
    }
}

/// Unordered pair of names, stored with the smaller name first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NamePair(NameEntry, NameEntry);

impl NamePair {
    pub fn new(x: NameEntry, y: NameEntry) -> NamePair {
        if x <= y {
            NamePair(x, y)
        } else {
            NamePair(y, x)
        }
    }

    pub fn first(&self) -> NameEntry {
        self.0
    }

    pub fn second(&self) -> NameEntry {
        self.1
    }

    pub fn class(&self) -> PairClass {
        PairClass::of(&self.0, &self.1)
    }
}

impl fmt::Display for NamePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// Names of the crossings of a word, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NameSequence {
    pub strand_count: usize,
    pub entries: Vec<NameEntry>,
}

impl NameSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, NameEntry> {
        self.entries.iter()
    }
}

impl fmt::Display for NameSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl Serialize for NameSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

/// Name sequence of a positive word; signed words are rejected.
pub fn name_sequence(w: &BraidWord) -> Result<NameSequence> {
    if !w.is_positive() {
        return Err(Error::NonPositive(format!(
            "name_sequence needs a positive word, got \"{w}\"; use signed_name_sequence"
        )));
    }
    Ok(signed_name_sequence(w))
}

pub fn signed_name_sequence(w: &BraidWord) -> NameSequence {
    let n = w.strand_count();
    let mut position_to_name: Vec<usize> = (1..=n).collect();
    // linking counter per strand pair, indexed by (p - 1) * n + (q - 1)
    let mut link = vec![0i64; n * n];
    let mut entries = Vec::with_capacity(w.len());
    for l in w.letters() {
        let i = l.generator();
        let x = position_to_name[i - 1];
        let y = position_to_name[i];
        let (p, q) = if x < y { (x, y) } else { (y, x) };
        let counter = &mut link[(p - 1) * n + (q - 1)];
        let a = match l.sign() {
            Sign::Positive => {
                *counter += 1;
                *counter
            }
            Sign::Negative => {
                let a = *counter;
                *counter -= 1;
                a
            }
        };
        entries.push(NameEntry { p, q, a, sign: l.sign() });
        position_to_name.swap(i - 1, i);
    }
    NameSequence {
        strand_count: n,
        entries,
    }
}

pub type NameMultiset = BTreeMap<NameEntry, usize>;

pub fn name_multiset(w: &BraidWord) -> NameMultiset {
    let mut out = NameMultiset::new();
    for e in signed_name_sequence(w).entries {
        *out.entry(e).or_insert(0) += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaShape {
    Reverse3,
    Reverse2,
    InsertPair,
    DeletePair,
}

/// Effect of one move on the name sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveDelta {
    pub kind: MoveKind,
    /// 1-based entry indices touched by the move; for an insertion they
    /// refer to the new sequence, otherwise to the old one.
    pub affected_range: RangeInclusive<usize>,
    pub shape: DeltaShape,
    /// Pairs of names whose relative order changed.
    pub flipped_pairs: BTreeSet<NamePair>,
    /// The cancelling pair created or removed by a free move, in sequence order.
    pub cancelled: Option<(NameEntry, NameEntry)>,
}

fn inconsistent(w: &BraidWord, m: &Move, what: &str) -> Error {
    Error::Internal(format!("{m} on \"{w}\": {what}"))
}

/// Computes both name sequences around `m` and checks they differ exactly
/// by the reversal (relation moves) or the cancelling pair (free moves) the
/// move should produce. Any other difference is reported as an internal error.
pub fn move_delta(w: &BraidWord, m: &Move) -> Result<MoveDelta> {
    check_move(w, m)?;
    let after_word = apply_move(w, m)?;
    let before = signed_name_sequence(w).entries;
    let after = signed_name_sequence(&after_word).entries;
    let at = m.pos() - 1;

    match m.kind() {
        MoveKind::Hexagon | MoveKind::Commutation => {
            let width = if m.kind() == MoveKind::Hexagon { 3 } else { 2 };
            let window = at..at + width;
            if before.len() != after.len()
                || before[..at] != after[..at]
                || before[window.end..] != after[window.end..]
            {
                return Err(inconsistent(w, m, "entries outside the move window changed"));
            }
            let mut reversed = before[window.clone()].to_vec();
            reversed.reverse();
            if after[window.clone()] != reversed[..] {
                return Err(inconsistent(w, m, "move window is not a reversal"));
            }
            let touched = &before[window];
            let mut flipped = BTreeSet::new();
            for i in 0..touched.len() {
                for j in i + 1..touched.len() {
                    flipped.insert(NamePair::new(touched[i], touched[j]));
                }
            }
            let classes: Vec<PairClass> = flipped.iter().map(NamePair::class).collect();
            let shape = if width == 3 {
                let shared = classes
                    .iter()
                    .filter(|c| matches!(c, PairClass::Shared { .. }))
                    .count();
                let medians = classes.iter().filter(|c| c.is_median()).count();
                if flipped.len() != 3 || shared != 3 || medians != 1 {
                    return Err(inconsistent(
                        w,
                        m,
                        "hexagon must flip three shared pairs, exactly one median",
                    ));
                }
                DeltaShape::Reverse3
            } else {
                if flipped.len() != 1 || classes[0] != PairClass::Disjoint {
                    return Err(inconsistent(w, m, "commutation must flip one disjoint pair"));
                }
                DeltaShape::Reverse2
            };
            Ok(MoveDelta {
                kind: m.kind(),
                affected_range: m.pos()..=m.pos() + width - 1,
                shape,
                flipped_pairs: flipped,
                cancelled: None,
            })
        }
        MoveKind::FreeDelete | MoveKind::FreeInsert => {
            let (long, short, shape) = if m.kind() == MoveKind::FreeDelete {
                (&before, &after, DeltaShape::DeletePair)
            } else {
                (&after, &before, DeltaShape::InsertPair)
            };
            if long.len() != short.len() + 2
                || long[..at] != short[..at]
                || long[at + 2..] != short[at..]
            {
                return Err(inconsistent(w, m, "free move changed entries outside the pair"));
            }
            let (x, y) = (long[at], long[at + 1]);
            if y != x.inverse() {
                return Err(inconsistent(w, m, "inserted/deleted entries do not cancel"));
            }
            Ok(MoveDelta {
                kind: m.kind(),
                affected_range: m.pos()..=m.pos() + 1,
                shape,
                flipped_pairs: BTreeSet::new(),
                cancelled: Some((x, y)),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{parse_word, InsertOrder};

    fn w(text: &str, n: usize) -> BraidWord {
        parse_word(text, Some(n)).unwrap()
    }

    fn n(p: usize, q: usize, a: i64) -> NameEntry {
        NameEntry::positive(p, q, a)
    }

    fn ninv(p: usize, q: usize, a: i64) -> NameEntry {
        NameEntry::new(p, q, a, Sign::Negative)
    }

    #[test]
    fn positive_sequences() {
        let s = name_sequence(&w("1 2 1", 3)).unwrap();
        assert_eq!(s.entries, vec![n(1, 2, 1), n(1, 3, 1), n(2, 3, 1)]);
        assert!(name_sequence(&w("", 3)).unwrap().is_empty());
        assert!(matches!(name_sequence(&w("1 -1", 2)), Err(Error::NonPositive(_))));
        assert_eq!(
            name_sequence(&w("1 1 2 1 1 2", 3)).unwrap().to_string(),
            "N(1,2,1) N(1,2,2) N(2,3,1) N(1,3,1) N(1,3,2) N(2,3,2)"
        );
    }

    #[test]
    fn signed_sequences() {
        let s = signed_name_sequence(&parse_word("1 -2 -2 -2 2 1", None).unwrap());
        assert_eq!(
            s.entries,
            vec![n(1, 2, 1), ninv(1, 3, 0), ninv(1, 3, -1), ninv(1, 3, -2), n(1, 3, -2), n(1, 2, 2)]
        );
        let s = signed_name_sequence(&w("1 -1", 2));
        assert_eq!(s.entries, vec![n(1, 2, 1), ninv(1, 2, 1)]);
        let pos = w("1 2 1", 3);
        assert_eq!(signed_name_sequence(&pos), name_sequence(&pos).unwrap());
    }

    #[test]
    fn multisets() {
        let expected: NameMultiset = [(n(1, 2, 1), 1), (n(1, 3, 1), 1), (n(2, 3, 1), 1)]
            .into_iter()
            .collect();
        assert_eq!(name_multiset(&w("1 2 1", 3)), expected);
        assert_eq!(name_multiset(&w("2 1 2", 3)), expected);
        assert_ne!(
            name_sequence(&w("1 2 1", 3)).unwrap(),
            name_sequence(&w("2 1 2", 3)).unwrap()
        );
        assert!(name_multiset(&w("", 3)).is_empty());
    }

    #[test]
    fn text_forms() {
        assert_eq!(n(1, 3, -2).to_string(), "N(1,3,-2)");
        assert_eq!(ninv(1, 3, 0).to_string(), "N(1,3,0)^-1");
        assert_eq!("N(1,3,0)^-1".parse::<NameEntry>().unwrap(), ninv(1, 3, 0));
        assert_eq!("N(3, 1, 2)".parse::<NameEntry>().unwrap(), n(1, 3, 2));
        assert!("N(1,1,2)".parse::<NameEntry>().is_err());
        assert!("M(1,2,2)".parse::<NameEntry>().is_err());
        assert_eq!(
            serde_json::to_string(&ninv(1, 3, 0)).unwrap(),
            r#"{"p":1,"q":3,"a":0,"sign":-1}"#
        );
    }

    #[test]
    fn pair_classes() {
        assert_eq!(PairClass::of(&n(1, 2, 1), &n(1, 2, 3)), PairClass::SamePair);
        assert_eq!(PairClass::of(&n(1, 2, 1), &n(3, 4, 1)), PairClass::Disjoint);
        assert_eq!(
            PairClass::of(&n(1, 2, 1), &n(2, 3, 1)),
            PairClass::Shared { common: 2, median: true }
        );
        assert_eq!(
            PairClass::of(&n(1, 2, 1), &n(1, 3, 1)),
            PairClass::Shared { common: 1, median: false }
        );
        assert_eq!(
            PairClass::of(&n(1, 3, 1), &n(2, 3, 1)),
            PairClass::Shared { common: 3, median: false }
        );
    }

    #[test]
    fn hexagon_delta() {
        let d = move_delta(&w("1 2 1", 3), &Move::Hexagon { pos: 1 }).unwrap();
        assert_eq!(d.shape, DeltaShape::Reverse3);
        assert_eq!(d.affected_range, 1..=3);
        assert_eq!(d.flipped_pairs.len(), 3);
        assert_eq!(
            name_sequence(&w("2 1 2", 3)).unwrap().entries,
            vec![n(2, 3, 1), n(1, 3, 1), n(1, 2, 1)]
        );
    }

    #[test]
    fn commutation_delta() {
        let d = move_delta(&w("1 3", 4), &Move::Commutation { pos: 1 }).unwrap();
        assert_eq!(d.shape, DeltaShape::Reverse2);
        let pairs: Vec<_> = d.flipped_pairs.iter().copied().collect();
        assert_eq!(pairs, vec![NamePair::new(n(1, 2, 1), n(3, 4, 1))]);
        assert_eq!(pairs[0].class(), PairClass::Disjoint);
    }

    #[test]
    fn free_deltas() {
        let d = move_delta(&w("1 -1", 2), &Move::FreeDelete { pos: 1 }).unwrap();
        assert_eq!(d.shape, DeltaShape::DeletePair);
        assert_eq!(d.cancelled, Some((n(1, 2, 1), ninv(1, 2, 1))));
        assert!(d.flipped_pairs.is_empty());

        let m = Move::FreeInsert { pos: 2, generator: 2, order: InsertOrder::NegThenPos };
        let d = move_delta(&w("1 2", 3), &m).unwrap();
        assert_eq!(d.shape, DeltaShape::InsertPair);
        // strands 1 and 3 sit at positions 2, 3 after σ1
        assert_eq!(d.cancelled, Some((ninv(1, 3, 0), n(1, 3, 0))));
    }

    #[test]
    fn inapplicable_moves_are_rejected() {
        assert!(matches!(
            move_delta(&w("1 2", 3), &Move::Hexagon { pos: 1 }),
            Err(Error::Inapplicable { .. })
        ));
    }
}
