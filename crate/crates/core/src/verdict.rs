//! Decision outcomes shared by the graph checker and the semigroup oracle.

use std::fmt;
use std::str::FromStr;

/// The check that rejected an automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// A cycle pair of mutually reachable, distinct states.
    C1,
    /// A cycle pair `(p, s)` reaching `(q, t)` with `q ⋡ t`.
    C2,
    /// An ill-defined `SCC(p, q, s)`.
    C3,
    /// `SCC(p, q, r₁) ≠ SCC(p, q, r₂)` for `r₁, r₂` reached alongside the same `q₁`.
    L15,
    /// `SCC(p, q, r₁) ≠ SCC(p, r, q₁)`.
    C4,
    /// A transformation whose powers cycle with period at least two.
    Aperiodicity,
    /// A falsifying assignment of `eafuebf = ebfueaf`.
    Identity,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::C1,
        Condition::C2,
        Condition::C3,
        Condition::L15,
        Condition::C4,
        Condition::Aperiodicity,
        Condition::Identity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
            Condition::L15 => "L15",
            Condition::C4 => "C4",
            Condition::Aperiodicity => "APERIODICITY",
            Condition::Identity => "IDENTITY",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown condition `{s}`"))
    }
}

/// States falsifying one of the graph conditions.
///
/// `t1`/`t2` are members of the two compared (or one ill-defined) SCC
/// entries that are not mutually reachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphWitness {
    C1 {
        p: usize,
        q: usize,
    },
    C2 {
        p: usize,
        s: usize,
        q: usize,
        t: usize,
        r: usize,
    },
    C3 {
        p: usize,
        q: usize,
        s: usize,
        r: usize,
        t1: usize,
        t2: usize,
    },
    L15 {
        p: usize,
        q: usize,
        r: usize,
        q1: usize,
        r1: usize,
        r2: usize,
        t1: usize,
        t2: usize,
    },
    C4 {
        p: usize,
        q: usize,
        r: usize,
        q1: usize,
        r1: usize,
        t1: usize,
        t2: usize,
    },
}

impl GraphWitness {
    pub fn condition(&self) -> Condition {
        match self {
            GraphWitness::C1 { .. } => Condition::C1,
            GraphWitness::C2 { .. } => Condition::C2,
            GraphWitness::C3 { .. } => Condition::C3,
            GraphWitness::L15 { .. } => Condition::L15,
            GraphWitness::C4 { .. } => Condition::C4,
        }
    }

    /// Named states in the order they are listed above.
    pub fn states(&self) -> Vec<(&'static str, usize)> {
        match *self {
            GraphWitness::C1 { p, q } => vec![("p", p), ("q", q)],
            GraphWitness::C2 { p, s, q, t, r } => {
                vec![("p", p), ("s", s), ("q", q), ("t", t), ("r", r)]
            }
            GraphWitness::C3 { p, q, s, r, t1, t2 } => vec![
                ("p", p),
                ("q", q),
                ("s", s),
                ("r", r),
                ("t1", t1),
                ("t2", t2),
            ],
            GraphWitness::L15 {
                p,
                q,
                r,
                q1,
                r1,
                r2,
                t1,
                t2,
            } => vec![
                ("p", p),
                ("q", q),
                ("r", r),
                ("q1", q1),
                ("r1", r1),
                ("r2", r2),
                ("t1", t1),
                ("t2", t2),
            ],
            GraphWitness::C4 {
                p,
                q,
                r,
                q1,
                r1,
                t1,
                t2,
            } => vec![
                ("p", p),
                ("q", q),
                ("r", r),
                ("q1", q1),
                ("r1", r1),
                ("t1", t1),
                ("t2", t2),
            ],
        }
    }
}

/// A semigroup element together with a shortest word (label indices) producing it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementRef {
    pub index: usize,
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SemigroupWitness {
    /// `s^k ≠ s^(k+1)` for every `k`; the powers of `s` cycle with `period ≥ 2`.
    NonAperiodic { element: ElementRef, period: usize },
    /// Idempotents `e`, `f` and elements `a`, `u`, `b` with `eafuebf ≠ ebfueaf`.
    Identity {
        e: ElementRef,
        f: ElementRef,
        a: ElementRef,
        u: ElementRef,
        b: ElementRef,
    },
}

impl SemigroupWitness {
    pub fn condition(&self) -> Condition {
        match self {
            SemigroupWitness::NonAperiodic { .. } => Condition::Aperiodicity,
            SemigroupWitness::Identity { .. } => Condition::Identity,
        }
    }

    pub fn elements(&self) -> Vec<(&'static str, &ElementRef)> {
        match self {
            SemigroupWitness::NonAperiodic { element, .. } => vec![("s", element)],
            SemigroupWitness::Identity { e, f, a, u, b } => {
                vec![("e", e), ("f", f), ("a", a), ("u", u), ("b", b)]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    Graph(GraphWitness),
    Semigroup(SemigroupWitness),
}

impl Witness {
    pub fn condition(&self) -> Condition {
        match self {
            Witness::Graph(w) => w.condition(),
            Witness::Semigroup(w) => w.condition(),
        }
    }

    /// `name` / rendered value pairs; words are spelled with `labels`.
    pub fn named_items(&self, labels: &[String]) -> Vec<(String, String)> {
        match self {
            Witness::Graph(w) => w
                .states()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            Witness::Semigroup(w) => {
                let mut items: Vec<(String, String)> = w
                    .elements()
                    .into_iter()
                    .map(|(k, el)| {
                        (
                            k.to_string(),
                            format!("{}/{}", el.index, spell(&el.word, labels)),
                        )
                    })
                    .collect();
                if let SemigroupWitness::NonAperiodic { period, .. } = w {
                    items.push(("period".to_string(), period.to_string()));
                }
                items
            }
        }
    }
}

/// Concatenates labels; multi-character labels are separated by dots.
pub fn spell(word: &[usize], labels: &[String]) -> String {
    let single = labels.iter().all(|l| l.chars().count() == 1);
    let parts: Vec<&str> = word
        .iter()
        .map(|&i| labels.get(i).map_or("?", String::as_str))
        .collect();
    if single {
        parts.concat()
    } else {
        parts.join(".")
    }
}

/// Outcome of a decision procedure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Verdict {
    failure: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { failure: None }
    }

    pub fn fail(witness: Witness) -> Self {
        Verdict {
            failure: Some(witness),
        }
    }

    pub fn is_ltt(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failed_condition(&self) -> Option<Condition> {
        self.failure.as_ref().map(Witness::condition)
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.failure.as_ref()
    }
}

impl From<Option<GraphWitness>> for Verdict {
    fn from(w: Option<GraphWitness>) -> Self {
        Verdict {
            failure: w.map(Witness::Graph),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => f.write_str("locally threshold testable"),
            Some(w) => {
                write!(
                    f,
                    "not locally threshold testable (condition {})",
                    w.condition()
                )?;
                if let Witness::Graph(g) = w {
                    let parts: Vec<String> =
                        g.states().iter().map(|(k, v)| format!("{k}={v}")).collect();
                    write!(f, ": {}", parts.join(" "))?;
                }
                Ok(())
            }
        }
    }
}
