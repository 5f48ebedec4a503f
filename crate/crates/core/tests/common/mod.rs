//! Brute-force reference implementations shared by the integration suites.
//!
//! Nothing here touches the graph engine: reachability is closure by
//! repeated boolean matrix squaring, the square graph is rebuilt from the
//! transition table, and every condition is a literal nested loop over the
//! quantified states.

#![allow(dead_code, clippy::needless_range_loop)]

use ltt_core::random::{random_automaton, XorShift64Star};
use ltt_core::{CompleteAutomaton, GraphWitness, SccEntry, TransitionSemigroup};

pub type BoolMatrix = Vec<Vec<bool>>;

/// Reflexive-transitive closure of an adjacency matrix by squaring.
pub fn closure_by_squaring(adj: &BoolMatrix) -> BoolMatrix {
    let n = adj.len();
    let mut m = adj.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    loop {
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if m[i][k] {
                    for j in 0..n {
                        if m[k][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        if next == m {
            return m;
        }
        m = next;
    }
}

pub fn adjacency(a: &CompleteAutomaton) -> BoolMatrix {
    let n = a.n_states();
    let mut adj = vec![vec![false; n]; n];
    for p in 0..n {
        for l in 0..a.n_labels() {
            adj[p][a.step(p, l)] = true;
        }
    }
    adj
}

/// Everything the literal condition loops need.
pub struct Oracle {
    pub n: usize,
    pub reach: BoolMatrix,
    /// Pair reachability, indexed `[p * n + q][p' * n + q']`.
    pub reach2: BoolMatrix,
    pub cyc: Vec<bool>,
    pub cyc2: BoolMatrix,
}

impl Oracle {
    pub fn new(a: &CompleteAutomaton) -> Self {
        let n = a.n_states();
        let g = a.n_labels();
        let adj = adjacency(a);
        let reach = closure_by_squaring(&adj);
        let mut adj2 = vec![vec![false; n * n]; n * n];
        for p in 0..n {
            for q in 0..n {
                for l in 0..g {
                    adj2[p * n + q][a.step(p, l) * n + a.step(q, l)] = true;
                }
            }
        }
        let reach2 = closure_by_squaring(&adj2);
        // fixed by a nonempty word: some successor leads back
        let cyc = (0..n)
            .map(|p| (0..n).any(|x| adj[p][x] && reach[x][p]))
            .collect();
        let mut cyc2 = vec![vec![false; n]; n];
        for p in 0..n {
            for q in 0..n {
                let v = p * n + q;
                cyc2[p][q] = (0..n * n).any(|x| adj2[v][x] && reach2[x][v]);
            }
        }
        Oracle {
            n,
            reach,
            reach2,
            cyc,
            cyc2,
        }
    }

    pub fn pair_reaches(&self, from: (usize, usize), to: (usize, usize)) -> bool {
        self.reach2[from.0 * self.n + from.1][to.0 * self.n + to.1]
    }

    pub fn equivalent(&self, p: usize, q: usize) -> bool {
        self.reach[p][q] && self.reach[q][p]
    }

    pub fn condition1(&self) -> Option<GraphWitness> {
        for p in 0..self.n {
            for q in 0..self.n {
                if self.cyc2[p][q] && p != q && self.equivalent(p, q) {
                    return Some(GraphWitness::C1 { p, q });
                }
            }
        }
        None
    }

    pub fn condition2(&self) -> Option<GraphWitness> {
        let n = self.n;
        for p in 0..n {
            for s in 0..n {
                for q in 0..n {
                    for t in 0..n {
                        for r in 0..n {
                            if self.cyc2[p][s]
                                && self.pair_reaches((p, s), (q, t))
                                && self.reach[p][r]
                                && self.reach[r][s]
                                && self.cyc2[r][t]
                                && !self.reach[q][t]
                            {
                                return Some(GraphWitness::C2 { p, s, q, t, r });
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// `{t : (p, s) ⪰ (q, t), q ⪰ t, (q, t) cyclic}` in ascending order.
    pub fn members(&self, p: usize, q: usize, s: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&t| self.pair_reaches((p, s), (q, t)) && self.reach[q][t] && self.cyc2[q][t])
            .collect()
    }

    pub fn qualifies(&self, p: usize, q: usize, s: usize) -> bool {
        self.cyc2[p][s]
            && self.reach[p][s]
            && self.reach[p][q]
            && (0..self.n).any(|r| self.cyc2[q][r] && self.reach[p][r] && self.reach[r][s])
    }

    pub fn entry(&self, p: usize, q: usize, s: usize) -> OracleEntry {
        if !self.qualifies(p, q, s) {
            return OracleEntry::Empty;
        }
        let t = self.members(p, q, s);
        let Some(&t1) = t.first() else {
            return OracleEntry::Empty;
        };
        match t.iter().find(|&&t2| !self.equivalent(t1, t2)) {
            Some(&t2) => OracleEntry::IllDefined { t1, t2 },
            None => OracleEntry::Class(t1),
        }
    }

    pub fn table(&self) -> Vec<OracleEntry> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for q in 0..n {
                for s in 0..n {
                    out.push(self.entry(p, q, s));
                }
            }
        }
        out
    }

    pub fn condition3(&self, table: &[OracleEntry]) -> Option<GraphWitness> {
        let n = self.n;
        table.iter().enumerate().find_map(|(i, e)| match *e {
            OracleEntry::IllDefined { t1, t2 } => {
                let (p, q, s) = (i / (n * n), i / n % n, i % n);
                let r = (0..n)
                    .find(|&r| self.cyc2[q][r] && self.reach[p][r] && self.reach[r][s])
                    .unwrap();
                Some(GraphWitness::C3 { p, q, s, r, t1, t2 })
            }
            _ => None,
        })
    }

    fn defined(&self, table: &[OracleEntry], p: usize, q: usize, s: usize) -> Option<usize> {
        match table[(p * self.n + q) * self.n + s] {
            OracleEntry::Class(t) => Some(t),
            _ => None,
        }
    }

    /// Two defined entries name the same component.
    fn same(&self, x: usize, y: usize) -> bool {
        self.equivalent(x, y)
    }

    pub fn lemma15(&self, table: &[OracleEntry]) -> Option<GraphWitness> {
        let n = self.n;
        for q in 0..n {
            for r in 0..n {
                if !self.cyc2[q][r] {
                    continue;
                }
                for p in 0..n {
                    if !(self.cyc[p] && self.reach[p][q] && self.reach[p][r]) {
                        continue;
                    }
                    for q1 in 0..n {
                        for r1 in 0..n {
                            for r2 in 0..n {
                                let premise = self.pair_reaches((q, r), (q1, r1))
                                    && self.pair_reaches((q, r), (q1, r2))
                                    && self.cyc2[q1][r1]
                                    && self.cyc2[q1][r2]
                                    && self.cyc2[p][r1]
                                    && self.cyc2[p][r2];
                                if !premise {
                                    continue;
                                }
                                if let (Some(x1), Some(x2)) =
                                    (self.defined(table, p, q, r1), self.defined(table, p, q, r2))
                                {
                                    if !self.same(x1, x2) {
                                        return Some(GraphWitness::L15 {
                                            p,
                                            q,
                                            r,
                                            q1,
                                            r1,
                                            r2,
                                            t1: x1,
                                            t2: x2,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn condition4(&self, table: &[OracleEntry]) -> Option<GraphWitness> {
        let n = self.n;
        for q in 0..n {
            for r in 0..n {
                if !self.cyc2[q][r] {
                    continue;
                }
                for p in 0..n {
                    if !(self.cyc[p] && self.reach[p][q] && self.reach[p][r]) {
                        continue;
                    }
                    for q1 in 0..n {
                        for r1 in 0..n {
                            let premise = self.cyc2[p][q1]
                                && self.cyc2[p][r1]
                                && self.pair_reaches((q, r), (q1, r1));
                            if !premise {
                                continue;
                            }
                            if let (Some(x), Some(y)) =
                                (self.defined(table, p, q, r1), self.defined(table, p, r, q1))
                            {
                                if !self.same(x, y) {
                                    return Some(GraphWitness::C4 {
                                        p,
                                        q,
                                        r,
                                        q1,
                                        r1,
                                        t1: x,
                                        t2: y,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// All stages in order; the first failure.
    pub fn verdict(&self) -> Option<GraphWitness> {
        let table = self.table();
        self.condition1()
            .or_else(|| self.condition2())
            .or_else(|| self.condition3(&table))
            .or_else(|| self.lemma15(&table))
            .or_else(|| self.condition4(&table))
    }
}

/// Oracle form of a table entry: a defined entry is named by its smallest member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleEntry {
    Empty,
    Class(usize),
    IllDefined { t1: usize, t2: usize },
}

/// Exact agreement of an implementation entry with the oracle entry, where a
/// component id matches a class when the class representative lies in it.
pub fn entry_matches(
    entry: SccEntry,
    oracle: OracleEntry,
    component_of: impl Fn(usize) -> usize,
) -> bool {
    match (entry, oracle) {
        (SccEntry::Empty, OracleEntry::Empty) => true,
        (SccEntry::Component(c), OracleEntry::Class(t)) => component_of(t) == c as usize,
        (SccEntry::IllDefined { t1, t2 }, OracleEntry::IllDefined { t1: u1, t2: u2 }) => {
            (t1 as usize, t2 as usize) == (u1, u2)
        }
        _ => false,
    }
}

/// Literal five-fold loop over idempotents `e`, `f` and elements `a`, `u`, `b`.
pub fn identity_literal(s: &TransitionSemigroup) -> Option<[usize; 5]> {
    let idempotents: Vec<usize> = (0..s.len()).filter(|&e| s.multiply(e, e) == e).collect();
    let prod = |xs: &[usize]| xs[1..].iter().fold(xs[0], |acc, &x| s.multiply(acc, x));
    for &e in &idempotents {
        for &f in &idempotents {
            for a in 0..s.len() {
                for u in 0..s.len() {
                    for b in 0..s.len() {
                        if prod(&[e, a, f, u, e, b, f]) != prod(&[e, b, f, u, e, a, f]) {
                            return Some([e, f, a, u, b]);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Aperiodicity by the definition: the power sequence of every element
/// reaches some `s^k` with `s^(k+1) = s^k`.
pub fn aperiodic_by_powers(s: &TransitionSemigroup) -> bool {
    (0..s.len()).all(|x| {
        let mut power = x;
        for _ in 0..=s.len() {
            let next = s.multiply(power, x);
            if next == power {
                return true;
            }
            power = next;
        }
        false
    })
}

/// Seeded random automata with `1..=n_max` states and `1..=g_max` labels.
pub fn seeded(seed: u64, count: usize, n_max: usize, g_max: usize) -> Vec<CompleteAutomaton> {
    let mut rng = XorShift64Star::new(seed);
    (0..count)
        .map(|_| {
            let n = 1 + rng.below(n_max);
            let g = 1 + rng.below(g_max);
            random_automaton(&mut rng, n, g)
        })
        .collect()
}

/// Random automata whose transitions never decrease the state index, so
/// every component of the transition graph is a single state.
pub fn seeded_triangular(
    seed: u64,
    count: usize,
    n_max: usize,
    g_max: usize,
) -> Vec<CompleteAutomaton> {
    let mut rng = XorShift64Star::new(seed);
    (0..count)
        .map(|_| {
            let n = 1 + rng.below(n_max);
            let g = 1 + rng.below(g_max);
            let delta: Vec<usize> = (0..n * g)
                .map(|i| {
                    let p = i / g;
                    p + rng.below(n - p)
                })
                .collect();
            CompleteAutomaton::from_table(n, g, &delta).unwrap()
        })
        .collect()
}
