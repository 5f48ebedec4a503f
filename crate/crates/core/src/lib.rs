//! Decides local threshold testability of deterministic finite automata.
//!
//! Two independent deciders are provided:
//!
//! * [`ltt::check_ltt`] evaluates graph conditions on the transition graph
//!   and its square in `O(n⁴g)` time and `O(n³)` space;
//! * [`semigroup::semigroup_verdict`] builds the transition semigroup and
//!   checks aperiodicity together with `eafuebf = ebfueaf` for idempotents
//!   `e`, `f`.
//!
//! Both report failures with witnesses that can be replayed
//! ([`ltt::revalidate`], [`semigroup::revalidate`]).
//!
//! ```
//! use ltt_core::{check_ltt, parse_automaton, semigroup_verdict, DEFAULT_CAP};
//!
//! // "contains the factor ab"
//! let a = parse_automaton("3 2\na b\n1 0\n1 2\n2 2\n").unwrap().complete_with_sink();
//! assert!(check_ltt(&a).is_ltt());
//! assert!(semigroup_verdict(&a, DEFAULT_CAP).unwrap().is_ltt());
//! ```

pub mod automaton;
pub mod bits;
pub mod campaign;
pub mod graph;
pub mod ltt;
pub mod random;
pub mod report;
pub mod semigroup;
pub mod verdict;

pub use automaton::{parse_automaton, Automaton, CompleteAutomaton, ParseError};
pub use ltt::{check_ltt, check_ltt_profiled, Analysis, SccEntry, TripleSccTable};
pub use report::RunReport;
pub use semigroup::{
    build_semigroup, parse_cayley, semigroup_verdict, SemigroupError, TransitionSemigroup,
    DEFAULT_CAP,
};
pub use verdict::{Condition, GraphWitness, SemigroupWitness, Verdict, Witness};
