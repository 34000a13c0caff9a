//! Braid words, strand bookkeeping and the elementary rewriting moves.
//!
//! Letters are 1-based: generator `i` is the crossing of the strands at
//! positions `i` and `i + 1`, and a word on `n` strands uses generators
//! `1..=n-1`. Text form is whitespace-separated signed integers, `-i`
//! standing for the inverse of generator `i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i64::deserialize(d)? {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(serde::de::Error::custom(format!(
                "sign must be 1 or -1, got {other}"
            ))),
        }
    }
}

/// One signed generator `σ_i^{±1}`, stored as a nonzero signed index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, sign: Sign) -> Letter {
        assert!(generator >= 1, "generator indices start at 1");
        let g = generator as i32;
        match sign {
            Sign::Positive => Letter(g),
            Sign::Negative => Letter(-g),
        }
    }

    pub fn positive(generator: usize) -> Letter {
        Letter::new(generator, Sign::Positive)
    }

    pub fn negative(generator: usize) -> Letter {
        Letter::new(generator, Sign::Negative)
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn sign(self) -> Sign {
        if self.0 > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn to_signed(self) -> i64 {
        i64::from(self.0)
    }
}

/// A braid word on a fixed number of strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WordRepr", into = "WordRepr")]
pub struct BraidWord {
    strand_count: usize,
    letters: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct WordRepr {
    n: usize,
    letters: Vec<i64>,
}

impl TryFrom<WordRepr> for BraidWord {
    type Error = Error;

    fn try_from(repr: WordRepr) -> Result<Self> {
        BraidWord::from_signed(repr.n, &repr.letters)
    }
}

impl From<BraidWord> for WordRepr {
    fn from(w: BraidWord) -> Self {
        WordRepr {
            n: w.strand_count,
            letters: w.to_signed(),
        }
    }
}

impl BraidWord {
    pub fn new(strand_count: usize, letters: Vec<Letter>) -> Result<BraidWord> {
        if strand_count < 2 {
            return Err(Error::Data(format!(
                "strand count must be at least 2, got {strand_count}"
            )));
        }
        if let Some((idx, l)) = letters
            .iter()
            .enumerate()
            .find(|(_, l)| l.generator() >= strand_count)
        {
            return Err(Error::Parse {
                index: idx + 1,
                token: l.to_signed().to_string(),
                reason: format!("generator out of range for {strand_count} strands"),
            });
        }
        Ok(BraidWord {
            strand_count,
            letters,
        })
    }

    pub fn empty(strand_count: usize) -> Result<BraidWord> {
        BraidWord::new(strand_count, Vec::new())
    }

    /// Builds a word from signed generator indices (`-i` is the inverse of `σ_i`).
    pub fn from_signed(strand_count: usize, letters: &[i64]) -> Result<BraidWord> {
        let mut out = Vec::with_capacity(letters.len());
        for (idx, &v) in letters.iter().enumerate() {
            if v == 0 || v.unsigned_abs() > i32::MAX as u64 {
                return Err(Error::Parse {
                    index: idx + 1,
                    token: v.to_string(),
                    reason: "generator must be a nonzero index".into(),
                });
            }
            let sign = if v > 0 { Sign::Positive } else { Sign::Negative };
            out.push(Letter::new(v.unsigned_abs() as usize, sign));
        }
        BraidWord::new(strand_count, out)
    }

    /// Positive word from unsigned generator indices.
    pub fn positive(strand_count: usize, generators: &[usize]) -> Result<BraidWord> {
        if let Some(idx) = generators.iter().position(|&g| g == 0) {
            return Err(Error::Parse {
                index: idx + 1,
                token: "0".into(),
                reason: "generator must be a nonzero index".into(),
            });
        }
        BraidWord::new(
            strand_count,
            generators.iter().map(|&g| Letter::positive(g)).collect(),
        )
    }

    pub fn strand_count(&self) -> usize {
        self.strand_count
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.is_positive())
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.to_signed()).collect()
    }

    /// Sum of the letter signs; every braid relation preserves it.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign().value()).sum()
    }

    pub(crate) fn from_parts_unchecked(strand_count: usize, letters: Vec<Letter>) -> BraidWord {
        BraidWord {
            strand_count,
            letters,
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.to_signed())?;
        }
        Ok(())
    }
}

/// Parses whitespace-separated nonzero integers into a word.
///
/// Without an explicit strand count the word gets one more strand than its
/// largest generator index (and never fewer than two).
pub fn parse_word(text: &str, strand_count: Option<usize>) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for (idx, token) in text.split_whitespace().enumerate() {
        let v: i64 = token.parse().map_err(|_| Error::Parse {
            index: idx + 1,
            token: token.to_string(),
            reason: "not an integer".into(),
        })?;
        if v == 0 || v.unsigned_abs() > i32::MAX as u64 {
            return Err(Error::Parse {
                index: idx + 1,
                token: token.to_string(),
                reason: "generator must be a nonzero index".into(),
            });
        }
        letters.push(v);
    }
    let needed = letters
        .iter()
        .map(|v| v.unsigned_abs() as usize + 1)
        .max()
        .unwrap_or(2)
        .max(2);
    let n = strand_count.unwrap_or(needed);
    BraidWord::from_signed(n, &letters)
}

pub fn format_word(w: &BraidWord) -> String {
    w.to_string()
}

/// Which strand sits at each position: entry `k - 1` is the name (initial
/// position) of the strand currently at position `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrandState(Vec<usize>);

impl StrandState {
    pub fn identity(strand_count: usize) -> StrandState {
        StrandState((1..=strand_count).collect())
    }

    /// Name of the strand at 1-based position `pos`.
    pub fn name_at(&self, pos: usize) -> usize {
        self.0[pos - 1]
    }

    /// Exchanges positions `generator` and `generator + 1`.
    pub fn cross(&mut self, generator: usize) {
        self.0.swap(generator - 1, generator);
    }

    pub fn position_to_name(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &name)| name == k + 1)
    }
}

impl fmt::Display for StrandState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, name) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}")?;
        }
        f.write_str(")")
    }
}

/// States before and after every letter: `len + 1` entries starting with the identity.
pub fn strand_trace(w: &BraidWord) -> Vec<StrandState> {
    let mut state = StrandState::identity(w.strand_count);
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(state.clone());
    for l in &w.letters {
        state.cross(l.generator());
        out.push(state.clone());
    }
    out
}

pub fn permutation_of(w: &BraidWord) -> StrandState {
    let mut state = StrandState::identity(w.strand_count);
    for l in &w.letters {
        state.cross(l.generator());
    }
    state
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InsertOrder {
    /// `σ_i σ_i⁻¹`
    #[serde(rename = "pn")]
    PosThenNeg,
    /// `σ_i⁻¹ σ_i`
    #[serde(rename = "np")]
    NegThenPos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Hexagon,
    Commutation,
    FreeDelete,
    FreeInsert,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::Hexagon => "hexagon",
            MoveKind::Commutation => "commutation",
            MoveKind::FreeDelete => "free_delete",
            MoveKind::FreeInsert => "free_insert",
        }
    }

    pub fn is_relation(self) -> bool {
        matches!(self, MoveKind::Hexagon | MoveKind::Commutation)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One elementary rewriting step at a 1-based letter position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// `σ_i^ε σ_j^ε σ_i^ε → σ_j^ε σ_i^ε σ_j^ε` with `|i - j| = 1`.
    Hexagon { pos: usize },
    /// `σ_i^ε σ_j^δ → σ_j^δ σ_i^ε` with `|i - j| ≥ 2`.
    Commutation { pos: usize },
    /// Removes a cancelling pair.
    FreeDelete { pos: usize },
    /// Inserts a cancelling pair before letter `pos` (`pos = len + 1` appends).
    FreeInsert {
        pos: usize,
        generator: usize,
        order: InsertOrder,
    },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Hexagon { .. } => MoveKind::Hexagon,
            Move::Commutation { .. } => MoveKind::Commutation,
            Move::FreeDelete { .. } => MoveKind::FreeDelete,
            Move::FreeInsert { .. } => MoveKind::FreeInsert,
        }
    }

    pub fn pos(&self) -> usize {
        match *self {
            Move::Hexagon { pos }
            | Move::Commutation { pos }
            | Move::FreeDelete { pos }
            | Move::FreeInsert { pos, .. } => pos,
        }
    }

    fn sort_key(&self) -> (usize, MoveKind, usize, Option<InsertOrder>) {
        match *self {
            Move::FreeInsert {
                pos,
                generator,
                order,
            } => (pos, MoveKind::FreeInsert, generator, Some(order)),
            other => (other.pos(), other.kind(), 0, None),
        }
    }

    /// The move that undoes `self`, given the word `self` is applied to.
    pub fn inverse_on(&self, before: &BraidWord) -> Result<Move> {
        check_move(before, self)?;
        Ok(match *self {
            Move::Hexagon { .. } | Move::Commutation { .. } => *self,
            Move::FreeDelete { pos } => {
                let first = before.letters[pos - 1];
                Move::FreeInsert {
                    pos,
                    generator: first.generator(),
                    order: if first.is_positive() {
                        InsertOrder::PosThenNeg
                    } else {
                        InsertOrder::NegThenPos
                    },
                }
            }
            Move::FreeInsert { pos, .. } => Move::FreeDelete { pos },
        })
    }
}

impl PartialOrd for Move {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Enumeration order: position, then kind (hexagon < commutation <
/// free_delete < free_insert), then generator and insert order.
impl Ord for Move {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::FreeInsert {
                pos,
                generator,
                order,
            } => {
                let o = match order {
                    InsertOrder::PosThenNeg => "pn",
                    InsertOrder::NegThenPos => "np",
                };
                write!(f, "free_insert@{pos}[{generator},{o}]")
            }
            other => write!(f, "{}@{}", other.kind(), other.pos()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MoveOptions {
    /// Also list every free insertion (one per position, generator and order).
    pub free_insert: bool,
}

pub(crate) fn is_hexagon(letters: &[Letter], at: usize) -> bool {
    match letters.get(at..at + 3) {
        Some(&[a, b, c]) => {
            a == c
                && a.sign() == b.sign()
                && a.generator().abs_diff(b.generator()) == 1
        }
        _ => false,
    }
}

pub(crate) fn is_commutation(letters: &[Letter], at: usize) -> bool {
    match letters.get(at..at + 2) {
        Some(&[a, b]) => a.generator().abs_diff(b.generator()) >= 2,
        _ => false,
    }
}

pub(crate) fn is_cancelling(letters: &[Letter], at: usize) -> bool {
    match letters.get(at..at + 2) {
        Some(&[a, b]) => a == b.inverse(),
        _ => false,
    }
}

/// Hexagon and commutation moves only, in enumeration order.
pub(crate) fn push_relation_moves(letters: &[Letter], out: &mut Vec<Move>) {
    for at in 0..letters.len() {
        if is_hexagon(letters, at) {
            out.push(Move::Hexagon { pos: at + 1 });
        }
        if is_commutation(letters, at) {
            out.push(Move::Commutation { pos: at + 1 });
        }
    }
}

pub(crate) fn push_moves(
    letters: &[Letter],
    strand_count: usize,
    opts: MoveOptions,
    out: &mut Vec<Move>,
) {
    for at in 0..=letters.len() {
        if is_hexagon(letters, at) {
            out.push(Move::Hexagon { pos: at + 1 });
        }
        if is_commutation(letters, at) {
            out.push(Move::Commutation { pos: at + 1 });
        }
        if is_cancelling(letters, at) {
            out.push(Move::FreeDelete { pos: at + 1 });
        }
        if opts.free_insert {
            for generator in 1..strand_count {
                for order in [InsertOrder::PosThenNeg, InsertOrder::NegThenPos] {
                    out.push(Move::FreeInsert {
                        pos: at + 1,
                        generator,
                        order,
                    });
                }
            }
        }
    }
}

/// Moves applicable to `w`, free insertions excluded.
pub fn applicable_moves(w: &BraidWord) -> Vec<Move> {
    applicable_moves_with(w, MoveOptions::default())
}

pub fn applicable_moves_with(w: &BraidWord, opts: MoveOptions) -> Vec<Move> {
    let mut out = Vec::new();
    push_moves(&w.letters, w.strand_count, opts, &mut out);
    out
}

/// Hexagon and commutation moves of `w`.
pub fn relation_moves(w: &BraidWord) -> Vec<Move> {
    let mut out = Vec::new();
    push_relation_moves(&w.letters, &mut out);
    out
}

fn inapplicable(m: &Move, reason: impl Into<String>) -> Error {
    Error::Inapplicable {
        kind: m.kind().as_str(),
        pos: m.pos(),
        reason: reason.into(),
    }
}

pub fn check_move(w: &BraidWord, m: &Move) -> Result<()> {
    let letters = &w.letters;
    let pos = m.pos();
    if pos == 0 {
        return Err(inapplicable(m, "positions are 1-based"));
    }
    let at = pos - 1;
    match *m {
        Move::Hexagon { .. } => {
            if !is_hexagon(letters, at) {
                return Err(inapplicable(
                    m,
                    "expected σ_i^e σ_j^e σ_i^e with |i-j| = 1 and equal signs",
                ));
            }
        }
        Move::Commutation { .. } => {
            if !is_commutation(letters, at) {
                return Err(inapplicable(m, "expected σ_i σ_j with |i-j| >= 2"));
            }
        }
        Move::FreeDelete { .. } => {
            if !is_cancelling(letters, at) {
                return Err(inapplicable(m, "expected a cancelling pair σ_i σ_i^-1"));
            }
        }
        Move::FreeInsert { generator, .. } => {
            if pos > letters.len() + 1 {
                return Err(inapplicable(
                    m,
                    format!("insert position beyond word length {}", letters.len()),
                ));
            }
            if generator == 0 || generator >= w.strand_count {
                return Err(inapplicable(
                    m,
                    format!("generator {generator} out of range for {} strands", w.strand_count),
                ));
            }
        }
    }
    Ok(())
}

/// Rewrites `letters` in place; the move must already be known to apply.
pub(crate) fn apply_unchecked(letters: &mut Vec<Letter>, m: &Move) {
    let at = m.pos() - 1;
    match *m {
        Move::Hexagon { .. } => {
            let (a, b) = (letters[at], letters[at + 1]);
            letters[at] = b;
            letters[at + 1] = a;
            letters[at + 2] = b;
        }
        Move::Commutation { .. } => letters.swap(at, at + 1),
        Move::FreeDelete { .. } => {
            letters.drain(at..at + 2);
        }
        Move::FreeInsert {
            generator, order, ..
        } => {
            let (x, y) = match order {
                InsertOrder::PosThenNeg => (Letter::positive(generator), Letter::negative(generator)),
                InsertOrder::NegThenPos => (Letter::negative(generator), Letter::positive(generator)),
            };
            letters.splice(at..at, [x, y]);
        }
    }
}

pub fn apply_move(w: &BraidWord, m: &Move) -> Result<BraidWord> {
    check_move(w, m)?;
    let mut letters = w.letters.clone();
    apply_unchecked(&mut letters, m);
    Ok(BraidWord::from_parts_unchecked(w.strand_count, letters))
}
