//! Equivalence, exact combinatorial distance and inversion lower bounds.
//!
//! Positive words are searched inside their relation class (hexagon and
//! commutation moves only). The class is finite because every relation
//! preserves length, so the search either meets the target or exhausts it.
//! Signed words also use free insertions and deletions, under a cap on the
//! intermediate word length; that search is only a semi-decision.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::naming::{name_multiset, name_sequence, NameEntry, PairClass};
use crate::word::{
    apply_unchecked, permutation_of, push_moves, push_relation_moves, BraidWord,
    Letter, Move, MoveOptions,
};

pub const DEFAULT_MAX_STATES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Total number of distinct words the search may store.
    pub max_states: usize,
    /// Longest distance searched for; `None` is unbounded.
    pub max_depth: Option<usize>,
    /// Cap on intermediate word length, required for signed searches.
    pub max_word_length: Option<usize>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_states: DEFAULT_MAX_STATES,
            max_depth: None,
            max_word_length: None,
        }
    }
}

impl SearchLimits {
    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = Some(max_depth);
        self
    }

    pub fn with_max_word_length(mut self, max_word_length: usize) -> Self {
        self.max_word_length = Some(max_word_length);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceResult {
    /// Shortest distance with a witness derivation of exactly that many moves.
    Exact { distance: usize, witness: Derivation },
    NotEquivalent,
    Unknown { reason: String },
}

impl DistanceResult {
    pub fn distance(&self) -> Option<usize> {
        match self {
            DistanceResult::Exact { distance, .. } => Some(*distance),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            DistanceResult::Exact { .. } => "exact",
            DistanceResult::NotEquivalent => "not_equivalent",
            DistanceResult::Unknown { .. } => "unknown",
        }
    }
}

impl fmt::Display for DistanceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceResult::Exact { distance, .. } => write!(f, "exact {distance}"),
            DistanceResult::NotEquivalent => f.write_str("not_equivalent"),
            DistanceResult::Unknown { reason } => write!(f, "unknown {reason}"),
        }
    }
}

#[derive(Serialize)]
struct DistanceRepr<'a> {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a Derivation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
}

impl Serialize for DistanceResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            DistanceResult::Exact { distance, witness } => DistanceRepr {
                status: self.status(),
                distance: Some(*distance),
                witness: Some(witness),
                reason: None,
            },
            DistanceResult::NotEquivalent => DistanceRepr {
                status: self.status(),
                distance: None,
                witness: None,
                reason: None,
            },
            DistanceResult::Unknown { reason } => DistanceRepr {
                status: self.status(),
                distance: None,
                witness: None,
                reason: Some(reason),
            },
        };
        repr.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    NotEquivalent,
    Unknown(String),
}

fn same_strands(w: &BraidWord, w2: &BraidWord) -> Result<()> {
    if w.strand_count() != w2.strand_count() {
        return Err(Error::StrandCountMismatch {
            left: w.strand_count(),
            right: w2.strand_count(),
        });
    }
    Ok(())
}

fn require_positive(w: &BraidWord) -> Result<()> {
    if !w.is_positive() {
        return Err(Error::NonPositive(format!("\"{w}\"")));
    }
    Ok(())
}

/// Cheap invariants shared by every word in a positive relation class.
fn positive_classes_differ(w: &BraidWord, w2: &BraidWord) -> bool {
    w.len() != w2.len()
        || permutation_of(w) != permutation_of(w2)
        || name_multiset(w) != name_multiset(w2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassEnumeration {
    /// Every word of the class, in breadth-first discovery order.
    Complete(Vec<BraidWord>),
    Truncated { states: usize },
}

enum Explore {
    Reached,
    Exhausted(Vec<Rc<[Letter]>>),
    Limit,
}

/// Plain breadth-first exploration of the positive relation class of `start`.
fn explore(start: &BraidWord, target: Option<&[Letter]>, max_states: usize) -> Explore {
    let first: Rc<[Letter]> = start.letters().into();
    if target == Some(&first[..]) {
        return Explore::Reached;
    }
    let mut seen: HashSet<Rc<[Letter]>> = HashSet::new();
    let mut order = vec![first.clone()];
    seen.insert(first.clone());
    let mut queue = VecDeque::from([first]);
    let mut moves = Vec::new();
    while let Some(cur) = queue.pop_front() {
        moves.clear();
        push_relation_moves(&cur, &mut moves);
        for m in &moves {
            let mut next = cur.to_vec();
            apply_unchecked(&mut next, m);
            if seen.contains(&next[..]) {
                continue;
            }
            if target == Some(&next[..]) {
                return Explore::Reached;
            }
            if seen.len() >= max_states {
                return Explore::Limit;
            }
            let next: Rc<[Letter]> = next.into();
            seen.insert(next.clone());
            order.push(next.clone());
            queue.push_back(next);
        }
    }
    Explore::Exhausted(order)
}

/// All positive words reachable from `w` by hexagon and commutation moves.
pub fn equivalence_class(w: &BraidWord, limits: &SearchLimits) -> Result<ClassEnumeration> {
    require_positive(w)?;
    Ok(match explore(w, None, limits.max_states) {
        Explore::Exhausted(words) => ClassEnumeration::Complete(
            words
                .iter()
                .map(|l| BraidWord::from_parts_unchecked(w.strand_count(), l.to_vec()))
                .collect(),
        ),
        Explore::Limit => ClassEnumeration::Truncated {
            states: limits.max_states,
        },
        Explore::Reached => unreachable!("no target given"),
    })
}

/// Decides whether two positive words are related by braid relations by
/// exploring the class of `w` until `w2` shows up.
pub fn equivalent(w: &BraidWord, w2: &BraidWord, limits: &SearchLimits) -> Result<Equivalence> {
    same_strands(w, w2)?;
    require_positive(w)?;
    require_positive(w2)?;
    if positive_classes_differ(w, w2) {
        return Ok(Equivalence::NotEquivalent);
    }
    Ok(match explore(w, Some(w2.letters()), limits.max_states) {
        Explore::Reached => Equivalence::Equivalent,
        Explore::Exhausted(_) => Equivalence::NotEquivalent,
        Explore::Limit => Equivalence::Unknown(format!("max_states {} reached", limits.max_states)),
    })
}

struct Node {
    word: Rc<[Letter]>,
    parent: u32,
    via: Option<Move>,
}

struct Side {
    nodes: Vec<Node>,
    index: HashMap<Rc<[Letter]>, u32>,
    frontier: Vec<u32>,
    depth: usize,
}

impl Side {
    fn new(start: &[Letter]) -> Side {
        let word: Rc<[Letter]> = start.into();
        let mut index = HashMap::new();
        index.insert(word.clone(), 0);
        Side {
            nodes: vec![Node {
                word,
                parent: 0,
                via: None,
            }],
            index,
            frontier: vec![0],
            depth: 0,
        }
    }

    /// Moves from the root to `id`, in order.
    fn path_to(&self, mut id: u32) -> Vec<(Rc<[Letter]>, Move)> {
        let mut out = Vec::new();
        while let Some(m) = self.nodes[id as usize].via {
            let parent = self.nodes[id as usize].parent;
            out.push((self.nodes[parent as usize].word.clone(), m));
            id = parent;
        }
        out.reverse();
        out
    }
}

enum Search {
    Found(Vec<Move>),
    Exhausted,
    Limit(String),
}

/// Bidirectional breadth-first search. Layers are expanded whole, always on
/// the side with the smaller frontier (forward on ties); neighbours come in
/// move enumeration order, so results and witnesses are deterministic.
///
/// Before each expansion the two visited sets are disjoint, so the distance
/// is larger than the sum of the two radii; the first collision therefore
/// closes a shortest path.
fn bidirectional<F>(
    strand_count: usize,
    start: &[Letter],
    goal: &[Letter],
    limits: &SearchLimits,
    neighbours: F,
) -> Search
where
    F: Fn(&[Letter], &mut Vec<Move>),
{
    if start == goal {
        return Search::Found(Vec::new());
    }
    let mut sides = [Side::new(start), Side::new(goal)];
    let mut moves = Vec::new();
    let mut scratch: Vec<Letter> = Vec::new();
    loop {
        if sides[0].frontier.is_empty() || sides[1].frontier.is_empty() {
            return Search::Exhausted;
        }
        if let Some(max_depth) = limits.max_depth {
            if sides[0].depth + sides[1].depth + 1 > max_depth {
                return Search::Limit(format!("max_depth {max_depth} reached"));
            }
        }
        let a = usize::from(sides[1].frontier.len() < sides[0].frontier.len());
        let b = 1 - a;
        let frontier = std::mem::take(&mut sides[a].frontier);
        let mut next_frontier = Vec::new();
        for &u in &frontier {
            let word = sides[a].nodes[u as usize].word.clone();
            moves.clear();
            neighbours(&word, &mut moves);
            for m in &moves {
                scratch.clear();
                scratch.extend_from_slice(&word);
                apply_unchecked(&mut scratch, m);
                if sides[a].index.contains_key(&scratch[..]) {
                    continue;
                }
                if let Some(&v) = sides[b].index.get(&scratch[..]) {
                    let (fwd_node, bwd_node, bridge) = if a == 0 {
                        (u, v, *m)
                    } else {
                        (v, u, invert_on(strand_count, &word, m))
                    };
                    return Search::Found(splice_path(strand_count, &sides, fwd_node, bridge, bwd_node));
                }
                if sides[0].nodes.len() + sides[1].nodes.len() >= limits.max_states {
                    return Search::Limit(format!("max_states {} reached", limits.max_states));
                }
                let id = sides[a].nodes.len() as u32;
                let stored: Rc<[Letter]> = scratch.as_slice().into();
                sides[a].index.insert(stored.clone(), id);
                sides[a].nodes.push(Node {
                    word: stored,
                    parent: u,
                    via: Some(*m),
                });
                next_frontier.push(id);
            }
        }
        sides[a].frontier = next_frontier;
        sides[a].depth += 1;
    }
}

fn invert_on(strand_count: usize, before: &[Letter], m: &Move) -> Move {
    let w = BraidWord::from_parts_unchecked(strand_count, before.to_vec());
    m.inverse_on(&w).expect("stored move applies to its parent word")
}

/// Forward path to `fwd_node`, then `bridge`, then the backward tree walked
/// from `bwd_node` up to the goal.
fn splice_path(
    strand_count: usize,
    sides: &[Side; 2],
    fwd_node: u32,
    bridge: Move,
    bwd_node: u32,
) -> Vec<Move> {
    let mut out: Vec<Move> = sides[0].path_to(fwd_node).into_iter().map(|(_, m)| m).collect();
    out.push(bridge);
    for (parent_word, m) in sides[1].path_to(bwd_node).iter().rev() {
        out.push(invert_on(strand_count, parent_word, m));
    }
    out
}

fn run_search<F>(
    w: &BraidWord,
    w2: &BraidWord,
    limits: &SearchLimits,
    neighbours: F,
    exhausted_means_inequivalent: bool,
) -> DistanceResult
where
    F: Fn(&[Letter], &mut Vec<Move>),
{
    match bidirectional(w.strand_count(), w.letters(), w2.letters(), limits, neighbours) {
        Search::Found(moves) => DistanceResult::Exact {
            distance: moves.len(),
            witness: Derivation::new(w.clone(), moves),
        },
        Search::Exhausted if exhausted_means_inequivalent => DistanceResult::NotEquivalent,
        Search::Exhausted => DistanceResult::Unknown {
            reason: format!(
                "reachable words exhausted under max_word_length {}",
                limits.max_word_length.unwrap_or(0)
            ),
        },
        Search::Limit(reason) => DistanceResult::Unknown { reason },
    }
}

/// Shortest number of hexagon/commutation moves between two positive words.
pub fn exact_distance(w: &BraidWord, w2: &BraidWord, limits: &SearchLimits) -> Result<DistanceResult> {
    same_strands(w, w2)?;
    require_positive(w)?;
    require_positive(w2)?;
    if positive_classes_differ(w, w2) {
        return Ok(DistanceResult::NotEquivalent);
    }
    Ok(run_search(
        w,
        w2,
        limits,
        push_relation_moves,
        true,
    ))
}

/// Shortest derivation using relation moves and free insertions/deletions,
/// with every intermediate word at most `limits.max_word_length` long.
pub fn exact_distance_general(
    w: &BraidWord,
    w2: &BraidWord,
    limits: &SearchLimits,
) -> Result<DistanceResult> {
    same_strands(w, w2)?;
    let cap = limits
        .max_word_length
        .ok_or_else(|| Error::Data("max_word_length must be set for signed searches".into()))?;
    if w.len() > cap || w2.len() > cap {
        return Err(Error::Data(format!(
            "max_word_length {cap} is shorter than an input word"
        )));
    }
    if permutation_of(w) != permutation_of(w2) || w.exponent_sum() != w2.exponent_sum() {
        return Ok(DistanceResult::NotEquivalent);
    }
    let n = w.strand_count();
    Ok(run_search(
        w,
        w2,
        limits,
        |letters, out| {
            let opts = MoveOptions {
                free_insert: letters.len() + 2 <= cap,
            };
            push_moves(letters, n, opts, out)
        },
        false,
    ))
}

/// Inversion counts between the name sequences of two equivalent positive
/// words, and the distance bounds they imply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub multiset_equal: bool,
    /// Inverted pairs of names on disjoint strand pairs.
    pub disjoint: u64,
    /// Inverted pairs sharing exactly one strand.
    pub shared: u64,
    /// Shared inverted pairs whose common strand is the median of the three.
    pub median: u64,
    /// `disjoint + median`; `None` when the multisets differ.
    pub bound_simple: Option<u64>,
    /// `disjoint + max(median, ceil(shared / 3))`.
    pub bound: Option<u64>,
}

impl fmt::Display for LowerBoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<u64>| v.map_or_else(|| "undefined".to_string(), |v| v.to_string());
        write!(
            f,
            "multiset_equal={} disjoint={} shared={} median={} bound_simple={} bound={}",
            self.multiset_equal,
            self.disjoint,
            self.shared,
            self.median,
            show(self.bound_simple),
            show(self.bound)
        )
    }
}

/// Each commutation flips exactly one disjoint pair and each hexagon flips
/// three shared pairs, one of them median. A pair inverted between the two
/// endpoints must flip an odd number of times, which gives
/// `#commutations >= disjoint`, `#hexagons >= median` and
/// `3 * #hexagons >= shared`.
pub fn lower_bound(w: &BraidWord, w2: &BraidWord) -> Result<LowerBoundReport> {
    same_strands(w, w2)?;
    let s1 = name_sequence(w)?;
    let s2 = name_sequence(w2)?;
    if name_multiset(w) != name_multiset(w2) {
        return Ok(LowerBoundReport {
            multiset_equal: false,
            disjoint: 0,
            shared: 0,
            median: 0,
            bound_simple: None,
            bound: None,
        });
    }
    // names of a positive word are pairwise distinct
    let rank_in_second: HashMap<NameEntry, usize> =
        s2.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let order: Vec<usize> = s1.iter().map(|e| rank_in_second[e]).collect();

    let (mut disjoint, mut shared, mut median) = (0u64, 0u64, 0u64);
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] < order[j] {
                continue;
            }
            let (x, y) = (&s1.entries[i], &s1.entries[j]);
            match PairClass::of(x, y) {
                PairClass::SamePair => {
                    return Err(Error::Internal(format!(
                        "names {x} and {y} of one strand pair appear in opposite orders"
                    )))
                }
                PairClass::Disjoint => disjoint += 1,
                PairClass::Shared { median: m, .. } => {
                    shared += 1;
                    if m {
                        median += 1;
                    }
                }
            }
        }
    }
    Ok(LowerBoundReport {
        multiset_equal: true,
        disjoint,
        shared,
        median,
        bound_simple: Some(disjoint + median),
        bound: Some(disjoint + median.max(shared.div_ceil(3))),
    })
}

/// Applies `steps` relation moves chosen uniformly at random (seeded) and
/// returns the resulting word with the derivation that produced it.
pub fn random_equivalent_pair(w: &BraidWord, steps: usize, seed: u64) -> (BraidWord, Derivation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = w.letters().to_vec();
    let mut trace = Vec::with_capacity(steps);
    let mut moves = Vec::new();
    for _ in 0..steps {
        moves.clear();
        push_relation_moves(&cur, &mut moves);
        if moves.is_empty() {
            break;
        }
        let m = moves[rng.gen_range(0..moves.len())];
        apply_unchecked(&mut cur, &m);
        trace.push(m);
    }
    (
        BraidWord::from_parts_unchecked(w.strand_count(), cur),
        Derivation::new(w.clone(), trace),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn w(text: &str, n: usize) -> BraidWord {
        parse_word(text, Some(n)).unwrap()
    }

    #[test]
    fn equivalence_examples() {
        let l = SearchLimits::default();
        assert_eq!(equivalent(&w("1 2 1", 3), &w("2 1 2", 3), &l).unwrap(), Equivalence::Equivalent);
        assert_eq!(equivalent(&w("1 2", 3), &w("2 1", 3), &l).unwrap(), Equivalence::NotEquivalent);
        assert_eq!(equivalent(&w("1 3", 4), &w("3 1", 4), &l).unwrap(), Equivalence::Equivalent);
        assert!(matches!(
            equivalent(&w("1", 3), &w("1", 4), &l),
            Err(Error::StrandCountMismatch { .. })
        ));
    }

    #[test]
    fn distance_examples() {
        let l = SearchLimits::default();
        let r = exact_distance(&w("1 1 2 1 1 2", 3), &w("2 1 1 2 1 1", 3), &l).unwrap();
        assert_eq!(r.distance(), Some(4));
        let x = w("1 2 1 2", 3);
        assert_eq!(exact_distance(&x, &x, &l).unwrap().distance(), Some(0));
        assert_eq!(
            exact_distance(&w("1 2", 3), &w("2 1", 3), &l).unwrap(),
            DistanceResult::NotEquivalent
        );
        assert!(matches!(
            exact_distance(&w("1 -1", 3), &w("", 3), &l),
            Err(Error::NonPositive(_))
        ));
    }

    #[test]
    fn limits_produce_unknown() {
        let a = w("1 1 1 1 2 1 1 2 2 1 1 2", 3);
        let b = w("2 1 1 2 2 1 1 2 1 1 1 1", 3);
        let tight = SearchLimits::default().with_max_states(10);
        assert!(matches!(
            exact_distance(&a, &b, &tight).unwrap(),
            DistanceResult::Unknown { .. }
        ));
        let shallow = SearchLimits::default().with_max_depth(5);
        assert!(matches!(
            exact_distance(&a, &b, &shallow).unwrap(),
            DistanceResult::Unknown { .. }
        ));
        assert!(matches!(
            equivalent(&a, &b, &tight).unwrap(),
            Equivalence::Unknown(_)
        ));
    }

    #[test]
    fn general_distance_examples() {
        let l = SearchLimits::default().with_max_word_length(4);
        assert_eq!(
            exact_distance_general(&w("1 -1", 2), &w("", 2), &l).unwrap().distance(),
            Some(1)
        );
        assert_eq!(
            exact_distance_general(&w("", 2), &w("1 -1", 2), &l).unwrap().distance(),
            Some(1)
        );
        assert_eq!(
            exact_distance_general(&w("1", 3), &w("2", 3), &l).unwrap(),
            DistanceResult::NotEquivalent
        );
        assert!(exact_distance_general(&w("1", 3), &w("2", 3), &SearchLimits::default()).is_err());
        // σ1 σ2 σ1^-1 = σ2^-1 σ1 σ2 needs a detour through longer words
        let r = exact_distance_general(
            &w("1 2 -1", 3),
            &w("-2 1 2", 3),
            &SearchLimits::default().with_max_word_length(7),
        )
        .unwrap();
        let d = r.distance().expect("conjugates are equal in B_3");
        match r {
            DistanceResult::Exact { witness, .. } => {
                let words = witness.validate().unwrap();
                assert_eq!(words.last().unwrap(), &w("-2 1 2", 3));
                assert_eq!(witness.len(), d);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn lower_bound_small_pair() {
        let r = lower_bound(&w("1 1 2 1 1 2", 3), &w("2 1 1 2 1 1", 3)).unwrap();
        assert!(r.multiset_equal);
        assert_eq!((r.disjoint, r.median, r.shared), (0, 4, 8));
        assert_eq!(r.bound, Some(4));
        assert_eq!(r.bound_simple, Some(4));

        let x = w("1 2 1 3", 4);
        let r = lower_bound(&x, &x).unwrap();
        assert_eq!((r.disjoint, r.shared, r.median, r.bound), (0, 0, 0, Some(0)));

        let r = lower_bound(&w("1 2", 3), &w("2 1", 3)).unwrap();
        assert!(!r.multiset_equal);
        assert_eq!(r.bound, None);
    }

    #[test]
    fn report_json() {
        let r = lower_bound(&w("1 3", 4), &w("3 1", 4)).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"multiset_equal":true,"disjoint":1,"shared":0,"median":0,"bound_simple":1,"bound":1}"#
        );
    }

    #[test]
    fn random_pairs() {
        let x = w("1 2 1", 3);
        let (y, d) = random_equivalent_pair(&x, 0, 7);
        assert_eq!(y, x);
        assert!(d.is_empty());
        let (y, d) = random_equivalent_pair(&x, 1, 7);
        assert_eq!(y, w("2 1 2", 3));
        assert_eq!(d.len(), 1);
        let (y, d) = random_equivalent_pair(&w("1 1", 3), 5, 7);
        assert_eq!(y, w("1 1", 3));
        assert!(d.is_empty());
        assert_eq!(random_equivalent_pair(&x, 9, 3), random_equivalent_pair(&x, 9, 3));
    }

    #[test]
    fn class_enumeration() {
        match equivalence_class(&w("1 2 1", 3), &SearchLimits::default()).unwrap() {
            ClassEnumeration::Complete(words) => {
                assert_eq!(words, vec![w("1 2 1", 3), w("2 1 2", 3)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
