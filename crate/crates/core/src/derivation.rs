//! Derivations between equivalent words, their separatrix flip analysis and
//! optimality certificates, plus the two word families with quadratic
//! distance and an explicit derivation for the first of them.
//!
//! A derivation stands in for a van Kampen diagram: its rows are the name
//! sequences of the successive words, and the separatrix of a name is its
//! track through those rows. Two separatrices cross between consecutive
//! rows exactly when the corresponding names swap order there.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{exact_distance, lower_bound, DistanceResult, SearchLimits};
use crate::naming::{move_delta, NameEntry, NamePair, PairClass};
use crate::word::{apply_move, BraidWord, InsertOrder, Move, MoveKind};

/// A start word and the moves applied to it in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    start: BraidWord,
    moves: Vec<Move>,
}

impl Derivation {
    pub fn new(start: BraidWord, moves: Vec<Move>) -> Derivation {
        Derivation { start, moves }
    }

    pub fn start(&self) -> &BraidWord {
        &self.start
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn strand_count(&self) -> usize {
        self.start.strand_count()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn count(&self, kind: MoveKind) -> usize {
        self.moves.iter().filter(|m| m.kind() == kind).count()
    }

    /// Every intermediate word `w_0, …, w_k`.
    pub fn validate(&self) -> Result<Vec<BraidWord>> {
        validate_derivation(self)
    }

    /// Final word of the derivation.
    pub fn end(&self) -> Result<BraidWord> {
        let mut cur = self.start.clone();
        for (i, m) in self.moves.iter().enumerate() {
            cur = apply_move(&cur, m).map_err(|e| step_error(i, e))?;
        }
        Ok(cur)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("derivations always serialize")
    }

    pub fn from_json(text: &str) -> Result<Derivation> {
        serde_json::from_str(text).map_err(|e| Error::Data(format!("derivation file: {e}")))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRepr {
    kind: MoveKind,
    pos: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<InsertOrder>,
}

impl From<&Move> for MoveRepr {
    fn from(m: &Move) -> Self {
        let (generator, order) = match *m {
            Move::FreeInsert {
                generator, order, ..
            } => (Some(generator), Some(order)),
            _ => (None, None),
        };
        MoveRepr {
            kind: m.kind(),
            pos: m.pos(),
            generator,
            order,
        }
    }
}

impl TryFrom<MoveRepr> for Move {
    type Error = String;

    fn try_from(r: MoveRepr) -> std::result::Result<Move, String> {
        let extra = r.generator.is_some() || r.order.is_some();
        match r.kind {
            MoveKind::FreeInsert => match (r.generator, r.order) {
                (Some(generator), Some(order)) => Ok(Move::FreeInsert {
                    pos: r.pos,
                    generator,
                    order,
                }),
                _ => Err("free_insert needs generator and order".into()),
            },
            _ if extra => Err(format!("{} takes no generator or order", r.kind)),
            MoveKind::Hexagon => Ok(Move::Hexagon { pos: r.pos }),
            MoveKind::Commutation => Ok(Move::Commutation { pos: r.pos }),
            MoveKind::FreeDelete => Ok(Move::FreeDelete { pos: r.pos }),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DerivationRepr {
    n: usize,
    start: Vec<i64>,
    moves: Vec<MoveRepr>,
}

impl Serialize for Derivation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DerivationRepr {
            n: self.strand_count(),
            start: self.start.to_signed(),
            moves: self.moves.iter().map(MoveRepr::from).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Derivation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = DerivationRepr::deserialize(d)?;
        let start = BraidWord::from_signed(repr.n, &repr.start).map_err(D::Error::custom)?;
        let moves = repr
            .moves
            .into_iter()
            .map(Move::try_from)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(Derivation { start, moves })
    }
}

fn step_error(index: usize, e: Error) -> Error {
    Error::InvalidStep {
        index: index + 1,
        source: Box::new(e),
    }
}

/// Replays the derivation and returns `w_0, …, w_k`, failing at the first
/// inapplicable move (1-based index).
pub fn validate_derivation(d: &Derivation) -> Result<Vec<BraidWord>> {
    let mut words = Vec::with_capacity(d.moves.len() + 1);
    words.push(d.start.clone());
    for (i, m) in d.moves.iter().enumerate() {
        let next = apply_move(words.last().expect("non-empty"), m).map_err(|e| step_error(i, e))?;
        words.push(next);
    }
    Ok(words)
}

/// How often each pair of separatrices crosses along a derivation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeparatrixReport {
    /// Flip counts of the pairs that flipped at least once.
    pub flips: BTreeMap<NamePair, u64>,
    pub disjoint_flips: u64,
    pub shared_flips: u64,
    pub median_flips: u64,
    pub max_flip_count: u64,
    pub hexagons: usize,
    pub commutations: usize,
}

impl SeparatrixReport {
    pub fn flip_count(&self, x: NameEntry, y: NameEntry) -> u64 {
        self.flips.get(&NamePair::new(x, y)).copied().unwrap_or(0)
    }

    pub fn total_flips(&self) -> u64 {
        self.flips.values().sum()
    }
}

fn require_positive_words(words: &[BraidWord]) -> Result<()> {
    if let Some((t, w)) = words.iter().enumerate().find(|(_, w)| !w.is_positive()) {
        return Err(Error::NonPositive(format!("word {t} of the derivation is \"{w}\"")));
    }
    Ok(())
}

pub fn separatrix_report(d: &Derivation) -> Result<SeparatrixReport> {
    let words = validate_derivation(d)?;
    require_positive_words(&words)?;
    let mut report = SeparatrixReport::default();
    for (i, (w, m)) in words.iter().zip(&d.moves).enumerate() {
        let delta = move_delta(w, m).map_err(|e| step_error(i, e))?;
        match m.kind() {
            MoveKind::Hexagon => report.hexagons += 1,
            MoveKind::Commutation => report.commutations += 1,
            _ => {}
        }
        for pair in delta.flipped_pairs {
            match pair.class() {
                PairClass::Disjoint => report.disjoint_flips += 1,
                PairClass::Shared { median, .. } => {
                    report.shared_flips += 1;
                    if median {
                        report.median_flips += 1;
                    }
                }
                PairClass::SamePair => {
                    return Err(Error::Internal(format!(
                        "step {} flipped two names of one strand pair: {pair}",
                        i + 1
                    )))
                }
            }
            let c = report.flips.entry(pair).or_insert(0);
            *c += 1;
            report.max_flip_count = report.max_flip_count.max(*c);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMethod {
    /// No two separatrices cross twice.
    FlipCriterion,
    /// Length equals the inversion lower bound of the endpoints.
    BoundMatch,
}

impl fmt::Display for CertificateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateMethod::FlipCriterion => "flip_criterion",
            CertificateMethod::BoundMatch => "bound_match",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    CertifiedOptimal {
        distance: usize,
        method: CertificateMethod,
    },
    /// Neither sufficient condition holds; `gap` is length minus the best bound.
    Inconclusive { gap: u64 },
}

impl Certificate {
    pub fn is_optimal(&self) -> bool {
        matches!(self, Certificate::CertifiedOptimal { .. })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::CertifiedOptimal { distance, method } => {
                write!(f, "certified_optimal {distance} ({method})")
            }
            Certificate::Inconclusive { gap } => write!(f, "inconclusive gap={gap}"),
        }
    }
}

#[derive(Serialize)]
struct CertificateRepr {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<CertificateMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<u64>,
}

impl Serialize for Certificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Certificate::CertifiedOptimal { distance, method } => CertificateRepr {
                status: "certified_optimal",
                distance: Some(distance),
                method: Some(method),
                gap: None,
            },
            Certificate::Inconclusive { gap } => CertificateRepr {
                status: "inconclusive",
                distance: None,
                method: None,
                gap: Some(gap),
            },
        }
        .serialize(s)
    }
}

/// Tries the flip criterion first, then the lower-bound match.
///
/// With every pair flipping at most once, each flipped pair is inverted
/// between the endpoints, so the commutations account for exactly the
/// disjoint inversions and the hexagons for exactly the median ones: the
/// length equals `bound_simple`.
pub fn optimality_certificate(d: &Derivation) -> Result<Certificate> {
    let report = separatrix_report(d)?;
    let end = d.end()?;
    let lb = lower_bound(&d.start, &end)?;
    let (Some(bound), Some(bound_simple)) = (lb.bound, lb.bound_simple) else {
        return Err(Error::Internal(
            "endpoints of a derivation have different name multisets".into(),
        ));
    };
    let length = d.len() as u64;
    if report.max_flip_count <= 1 {
        if length != bound_simple {
            return Err(Error::Internal(format!(
                "no pair flips twice, yet length {length} differs from bound {bound_simple}"
            )));
        }
        return Ok(Certificate::CertifiedOptimal {
            distance: d.len(),
            method: CertificateMethod::FlipCriterion,
        });
    }
    if length == bound || length == bound_simple {
        return Ok(Certificate::CertifiedOptimal {
            distance: d.len(),
            method: CertificateMethod::BoundMatch,
        });
    }
    Ok(Certificate::Inconclusive {
        gap: length.saturating_sub(bound.max(bound_simple)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `σ1^{2m} (σ2 σ1² σ2)^m`
    Prop1Left,
    /// `(σ2 σ1² σ2)^m σ1^{2m}`
    Prop1Right,
    /// `σ2^{2m} (σ1 σ2² σ1)^m`
    LcmRight,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Prop1Left => "prop1_left",
            FamilyKind::Prop1Right => "prop1_right",
            FamilyKind::LcmRight => "lcm_right",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyKind> {
        match s {
            "prop1_left" => Ok(FamilyKind::Prop1Left),
            "prop1_right" => Ok(FamilyKind::Prop1Right),
            "lcm_right" => Ok(FamilyKind::LcmRight),
            other => Err(Error::Data(format!(
                "unknown family {other:?} (expected prop1_left, prop1_right or lcm_right)"
            ))),
        }
    }
}

/// The 3-strand word of the given family, of length `6m`.
pub fn family_word(kind: FamilyKind, m: usize) -> Result<BraidWord> {
    if m < 1 {
        return Err(Error::Data("family parameter m must be at least 1".into()));
    }
    let chunk = |g: usize| std::iter::repeat_n(g, 2 * m);
    let block = |outer: usize, inner: usize| {
        std::iter::repeat_n([outer, inner, inner, outer], m)
            .flatten()
    };
    let gens: Vec<usize> = match kind {
        FamilyKind::Prop1Left => chunk(1).chain(block(2, 1)).collect(),
        FamilyKind::Prop1Right => block(2, 1).chain(chunk(1)).collect(),
        FamilyKind::LcmRight => chunk(2).chain(block(1, 2)).collect(),
    };
    BraidWord::positive(3, &gens)
}

/// Four hexagons carrying `σ1²` across one `σ2σ1²σ2` block:
/// `1 1 2 1 1 2 → 1 2 1 2 1 2 → 2 1 2 2 1 2 → 2 1 2 1 2 1 → 2 1 1 2 1 1`.
/// Offsets are relative to the window start and stay inside the window.
const WINDOW_MACRO: [usize; 4] = [1, 0, 3, 2];

/// A derivation of `4m²` hexagons from `prop1_left(m)` to `prop1_right(m)`.
///
/// The `σ1²` chunks are moved right one at a time, rightmost chunk first,
/// each across all `m` blocks.
pub fn grid_derivation(m: usize) -> Result<Derivation> {
    let start = family_word(FamilyKind::Prop1Left, m)?;
    let mut moves = Vec::with_capacity(4 * m * m);
    for chunk in (0..m).rev() {
        for block in 0..m {
            let window = 2 * chunk + 1 + 4 * block;
            moves.extend(WINDOW_MACRO.iter().map(|off| Move::Hexagon { pos: window + off }));
        }
    }
    Ok(Derivation::new(start, moves))
}

/// A shortest derivation from `prop1_left(m)` to `lcm_right(m)`, found by
/// search; `None` when the limits bind first.
pub fn lcm_derivation(m: usize, limits: &SearchLimits) -> Result<Option<Derivation>> {
    let left = family_word(FamilyKind::Prop1Left, m)?;
    let right = family_word(FamilyKind::LcmRight, m)?;
    match exact_distance(&left, &right, limits)? {
        DistanceResult::Exact { witness, .. } => Ok(Some(witness)),
        DistanceResult::Unknown { .. } => Ok(None),
        DistanceResult::NotEquivalent => Err(Error::Internal(format!(
            "\"{left}\" and \"{right}\" should be equivalent"
        ))),
    }
}
