//! Crossing names of braid words and the combinatorial distance between
//! equivalent positive braid words.
//!
//! * [`word`]: braid words, strand positions and elementary moves.
//! * [`naming`]: name sequences and the effect of a move on them.
//! * [`metric`]: equivalence, exact distance by search, inversion lower bounds.
//! * [`derivation`]: derivation traces, separatrix flips, optimality certificates.
//! * [`render`]: SVG braid diagrams and separatrix charts.

pub mod derivation;
pub mod error;
pub mod metric;
pub mod naming;
pub mod render;
pub mod word;

pub use derivation::{
    family_word, grid_derivation, lcm_derivation, optimality_certificate, separatrix_report,
    validate_derivation, Certificate, CertificateMethod, Derivation, FamilyKind, SeparatrixReport,
};
pub use error::{Error, Result};
pub use metric::{
    equivalence_class, equivalent, exact_distance, exact_distance_general, lower_bound,
    random_equivalent_pair, ClassEnumeration, DistanceResult, Equivalence, LowerBoundReport,
    SearchLimits,
};
pub use naming::{
    move_delta, name_multiset, name_sequence, signed_name_sequence, DeltaShape, MoveDelta,
    NameEntry, NameMultiset, NamePair, NameSequence, PairClass,
};
pub use render::{render_braid_diagram, render_derivation_chart, RenderOptions};
pub use word::{
    applicable_moves, applicable_moves_with, apply_move, format_word, parse_word, permutation_of,
    relation_moves, strand_trace, BraidWord, InsertOrder, Letter, Move, MoveKind, MoveOptions,
    Sign, StrandState,
};
