//! Differential campaigns: run the graph checker and the semigroup oracle
//! side by side and collect every disagreement.

use crate::automaton::CompleteAutomaton;
use crate::ltt::check_ltt;
use crate::random::{all_automata, random_automaton, XorShift64Star};
use crate::semigroup::{semigroup_verdict, SemigroupError};
use crate::verdict::Verdict;

#[derive(Debug, Clone)]
pub struct Disagreement {
    pub automaton: CompleteAutomaton,
    pub graph: Verdict,
    pub semigroup: Verdict,
}

#[derive(Debug, Clone, Default)]
pub struct DiffSummary {
    pub checked: usize,
    pub agreements: usize,
    /// Automata judged LTT by both deciders.
    pub ltt_count: usize,
    /// Automata skipped because the semigroup exceeded the cap.
    pub capacity_skipped: usize,
    pub disagreements: Vec<Disagreement>,
}

impl DiffSummary {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }

    fn record(&mut self, a: CompleteAutomaton, cap: usize) {
        let graph = check_ltt(&a);
        match semigroup_verdict(&a, cap) {
            Err(SemigroupError::CapacityExceeded { .. }) => self.capacity_skipped += 1,
            Ok(semigroup) => {
                self.checked += 1;
                if graph.is_ltt() == semigroup.is_ltt() {
                    self.agreements += 1;
                    self.ltt_count += usize::from(graph.is_ltt());
                } else {
                    self.disagreements.push(Disagreement {
                        automaton: a,
                        graph,
                        semigroup,
                    });
                }
            }
        }
    }

    pub fn merge(&mut self, other: DiffSummary) {
        self.checked += other.checked;
        self.agreements += other.agreements;
        self.ltt_count += other.ltt_count;
        self.capacity_skipped += other.capacity_skipped;
        self.disagreements.extend(other.disagreements);
        self.disagreements.sort_by(|a, b| {
            (
                a.automaton.n_states(),
                a.automaton.n_labels(),
                a.automaton.table(),
            )
                .cmp(&(
                    b.automaton.n_states(),
                    b.automaton.n_labels(),
                    b.automaton.table(),
                ))
        });
    }
}

pub fn diff_automata<I>(automata: I, cap: usize) -> DiffSummary
where
    I: IntoIterator<Item = CompleteAutomaton>,
{
    let mut summary = DiffSummary::default();
    for a in automata {
        summary.record(a, cap);
    }
    summary
}

/// Every automaton with `1..=n_max` states and `1..=g_max` labels.
pub fn exhaustive(n_max: usize, g_max: usize) -> impl Iterator<Item = CompleteAutomaton> {
    (1..=n_max).flat_map(move |n| (1..=g_max).flat_map(move |g| all_automata(n, g)))
}

/// `trials` automata; each draws its state count in `1..=n_max` and label
/// count in `1..=g_max` before its table, all from one generator.
pub fn random_trials(
    n_max: usize,
    g_max: usize,
    trials: usize,
    seed: u64,
) -> impl Iterator<Item = CompleteAutomaton> {
    let mut rng = XorShift64Star::new(seed);
    (0..trials).map(move |_| {
        let n = 1 + rng.below(n_max);
        let g = 1 + rng.below(g_max);
        random_automaton(&mut rng, n, g)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::DEFAULT_CAP;

    #[test]
    fn exhaustive_two_states_one_label() {
        let s = diff_automata(exhaustive(2, 1), DEFAULT_CAP);
        assert_eq!(s.checked, 5);
        assert!(s.is_clean());
    }

    #[test]
    fn random_trials_are_reproducible() {
        let a: Vec<_> = random_trials(5, 3, 20, 11).collect();
        let b: Vec<_> = random_trials(5, 3, 20, 11).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| x.n_states() <= 5 && x.n_labels() <= 3));
    }

    #[test]
    fn capacity_skips_are_counted() {
        let s = diff_automata(exhaustive(3, 2), 3);
        assert!(s.capacity_skipped > 0);
        assert_eq!(s.checked + s.capacity_skipped, 1 + 1 + 4 + 16 + 27 + 729);
    }
}
