//! Graph-theoretic decision procedure for local threshold testability.
//!
//! Works on the complete transition graph `Γ` of an automaton and its square
//! `Γ²`. Notation used throughout:
//!
//! * `p ⪰ q`: `q` is reachable from `p` in `Γ` (possibly by the empty word),
//!   `p ~ q` when both directions hold;
//! * a *cycle pair* `(p, q)` is a node of `Γ²` fixed by some nonempty word;
//! * `SCC(p, q, s)` is the component of `Γ` holding every `t` with
//!   `(p, s) ⪰ (q, t)` in `Γ²`, `q ⪰ t` and `(q, t)` a cycle pair. It is only
//!   formed when `(p, s)` is a cycle pair, `p ⪰ s`, `p ⪰ q`, and some `r`
//!   satisfies `p ⪰ r ⪰ s` with `(q, r)` a cycle pair; otherwise it is empty.
//!
//! The automaton passes iff
//!
//! 1. no cycle pair `(p, q)` has `p ~ q` with `p ≠ q`;
//! 2. for every cycle pair `(p, s)`, every `(q, t)` reachable from it, and
//!    some `r` with `p ⪰ r ⪰ s` and `(r, t)` a cycle pair: `q ⪰ t`;
//! 3. every `SCC(p, q, s)` lies inside a single component;
//! 4. for every cycle pair `(q, r)`, cycle state `p` with `p ⪰ q`, `p ⪰ r`,
//!    and `(q₁, r₁)` reachable from `(q, r)` with `(p, q₁)`, `(p, r₁)` cycle
//!    pairs: `SCC(p, q, r₁) = SCC(p, r, q₁)` whenever both are nonempty.
//!
//! Before condition 4 a consistency check runs: for the same `(q, r)` and
//! `p`, all nonempty `SCC(p, q, r₁)` with `(q₁, r₁)` reachable from `(q, r)`,
//! `(q₁, r₁)` and `(p, r₁)` cycle pairs, must agree for a fixed `q₁`.
//!
//! Pair reachability is never tabulated; each source gets its own
//! `O(n²g)` search, which keeps the whole procedure in `O(n⁴g)` time and
//! `O(n³)` space.

use std::time::{Duration, Instant};

use crate::automaton::CompleteAutomaton;
use crate::bits::{first_common, BitMatrix, BitSet, Ones};
use crate::graph::{
    cycle_states, pair_cycle_states, product_square, reachability, scc, PairNode, PairSearch,
    ProductGraph, ReachabilityTable, SccDecomposition,
};
use crate::verdict::{GraphWitness, Verdict};

/// Everything the conditions are evaluated against.
pub struct Analysis {
    n: usize,
    scc: SccDecomposition,
    cycle: BitSet,
    reach: ReachabilityTable,
    product: ProductGraph,
    pair_scc: SccDecomposition,
    pair_cycle: BitMatrix,
}

impl Analysis {
    pub fn new(a: &CompleteAutomaton) -> Self {
        Self::timed(a, &mut Timings::default())
    }

    fn timed(a: &CompleteAutomaton, timings: &mut Timings) -> Self {
        let clock = Instant::now();
        let scc_gamma = scc(a);
        let cycle = cycle_states(&scc_gamma);
        let product = product_square(a);
        let pair_scc = scc(&product);
        let pair_cycle = pair_cycle_states(&product, &pair_scc);
        timings.scc = clock.elapsed();

        let clock = Instant::now();
        let reach = reachability(a);
        timings.reachability = clock.elapsed();

        Analysis {
            n: a.n_states(),
            scc: scc_gamma,
            cycle,
            reach,
            product,
            pair_scc,
            pair_cycle,
        }
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    pub fn scc(&self) -> &SccDecomposition {
        &self.scc
    }

    pub fn pair_scc(&self) -> &SccDecomposition {
        &self.pair_scc
    }

    pub fn reach(&self) -> &ReachabilityTable {
        &self.reach
    }

    pub fn product(&self) -> &ProductGraph {
        &self.product
    }

    /// Cycle states of `Γ`.
    pub fn cycle_states(&self) -> &BitSet {
        &self.cycle
    }

    pub fn is_cycle_state(&self, p: usize) -> bool {
        self.cycle.contains(p)
    }

    /// Cycle states of `Γ²`; symmetric.
    pub fn cycle_pairs(&self) -> &BitMatrix {
        &self.pair_cycle
    }

    pub fn is_cycle_pair(&self, p: usize, q: usize) -> bool {
        self.pair_cycle.get(p, q)
    }

    /// Members of `SCC(p, q, s)` before the well-definedness check:
    /// `{t : (p, s) ⪰ (q, t), q ⪰ t, (q, t) cycle pair}`, ignoring whether
    /// the triple qualifies at all.
    pub fn scc_members(&self, search: &mut PairSearch<'_>, p: usize, q: usize, s: usize) -> BitSet {
        let reached = search.search(PairNode::new(p, s));
        let mut set = reached.row_set(q);
        set.intersect_with(self.reach.from_row(q));
        set.intersect_with(self.pair_cycle.row(q));
        set
    }

    /// `{r : p ⪰ r ⪰ s}` as a bit row.
    fn between(&self, p: usize, s: usize) -> BitSet {
        let mut set = BitSet::from_words(self.n, self.reach.from_row(p));
        set.intersect_with(self.reach.to_row(s));
        set
    }

    /// Cycle states `p` with `p ⪰ q` and `p ⪰ r`.
    fn common_ancestors(&self, q: usize, r: usize) -> BitSet {
        let mut set = self.cycle.clone();
        set.intersect_with(self.reach.to_row(q));
        set.intersect_with(self.reach.to_row(r));
        set
    }

    fn heap_bytes(&self) -> usize {
        self.reach.heap_bytes()
            + self.product.heap_bytes()
            + self.pair_cycle.heap_bytes()
            + (self.n + self.n * self.n) * 2 * std::mem::size_of::<u32>()
    }
}

/// Condition 1: a cycle pair of distinct, mutually reachable states. `O(n²)`.
pub fn check_condition1(an: &Analysis) -> Option<GraphWitness> {
    let n = an.n;
    for p in 0..n {
        for q in an.pair_cycle.row_ones(p) {
            if p != q && an.scc.same_component(p, q) {
                return Some(GraphWitness::C1 { p, q });
            }
        }
    }
    None
}

/// Condition 2. For each cycle pair `(p, s)` the admissible `t` (those with
/// some `r`, `p ⪰ r ⪰ s`, `(r, t)` cyclic) are collected once, then a single
/// pair search finds every reachable `(q, t)` with `q ⋡ t`.
pub fn check_condition2(an: &Analysis) -> Option<GraphWitness> {
    let n = an.n;
    let mut search = PairSearch::new(&an.product);
    let mut targets = BitSet::new(n);
    for p in 0..n {
        for s in an.pair_cycle.row_ones(p) {
            let middle = an.between(p, s);
            if middle.is_empty() {
                continue;
            }
            targets.clear();
            for r in middle.iter() {
                targets.union_with(an.pair_cycle.row(r));
            }
            if targets.is_empty() {
                continue;
            }
            let reached = search.search(PairNode::new(p, s));
            for q in 0..n {
                let t = Ones::new(reached.row(q))
                    .find(|&t| targets.contains(t) && !an.reach.reaches(q, t));
                if let Some(t) = t {
                    let r = first_common(&[middle.words(), an.pair_cycle.row(t)])
                        .expect("t was admitted through some r");
                    return Some(GraphWitness::C2 { p, s, q, t, r });
                }
            }
        }
    }
    None
}

/// Entry of the `SCC(p, q, s)` table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SccEntry {
    /// No qualifying `r`, or an empty member set.
    Empty,
    /// All members lie in this component of `Γ`.
    Component(u32),
    /// Two members from different components.
    IllDefined { t1: u32, t2: u32 },
}

impl SccEntry {
    pub fn component(self) -> Option<usize> {
        match self {
            SccEntry::Component(c) => Some(c as usize),
            _ => None,
        }
    }
}

/// Dense `n³` table of `SCC(p, q, s)`, indexed `(p, q, s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSccTable {
    n: usize,
    entries: Vec<SccEntry>,
}

impl TripleSccTable {
    pub fn new(n: usize) -> Self {
        TripleSccTable {
            n,
            entries: vec![SccEntry::Empty; n * n * n],
        }
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, s: usize) -> SccEntry {
        self.entries[(p * self.n + q) * self.n + s]
    }

    pub fn set(&mut self, p: usize, q: usize, s: usize, entry: SccEntry) {
        self.entries[(p * self.n + q) * self.n + s] = entry;
    }

    /// Lexicographically first ill-defined triple.
    pub fn first_ill_defined(&self) -> Option<(usize, usize, usize, usize, usize)> {
        self.entries.iter().enumerate().find_map(|(i, e)| match *e {
            SccEntry::IllDefined { t1, t2 } => {
                let (p, q, s) = (i / (self.n * self.n), i / self.n % self.n, i % self.n);
                Some((p, q, s, t1 as usize, t2 as usize))
            }
            _ => None,
        })
    }

    pub fn heap_bytes(&self) -> usize {
        self.entries.len() * std::mem::size_of::<SccEntry>()
    }
}

/// Fills the `SCC(p, q, s)` table with one pair search per cycle pair
/// `(p, s)`, `p ⪰ s`.
pub fn compute_scc_table(an: &Analysis) -> TripleSccTable {
    let n = an.n;
    let mut table = TripleSccTable::new(n);
    let mut search = PairSearch::new(&an.product);
    let mut members = BitSet::new(n);
    for p in 0..n {
        for s in an.pair_cycle.row_ones(p) {
            if !an.reach.reaches(p, s) {
                continue;
            }
            let middle = an.between(p, s);
            let reached = search.search(PairNode::new(p, s));
            for q in Ones::new(an.reach.from_row(p)) {
                if first_common(&[an.pair_cycle.row(q), middle.words()]).is_none() {
                    continue;
                }
                members.clear();
                members.union_with(reached.row(q));
                members.intersect_with(an.reach.from_row(q));
                members.intersect_with(an.pair_cycle.row(q));
                table.set(p, q, s, classify(&an.scc, &members));
            }
        }
    }
    table
}

fn classify(scc: &SccDecomposition, members: &BitSet) -> SccEntry {
    let mut it = members.iter();
    let Some(t1) = it.next() else {
        return SccEntry::Empty;
    };
    let c = scc.component(t1);
    match it.find(|&t| scc.component(t) != c) {
        Some(t2) => SccEntry::IllDefined {
            t1: t1 as u32,
            t2: t2 as u32,
        },
        None => SccEntry::Component(c as u32),
    }
}

/// Condition 3 from a computed table.
pub fn check_condition3(an: &Analysis, table: &TripleSccTable) -> Option<GraphWitness> {
    let (p, q, s, t1, t2) = table.first_ill_defined()?;
    let middle = an.between(p, s);
    let r = first_common(&[middle.words(), an.pair_cycle.row(q)]).expect("entry qualified");
    Some(GraphWitness::C3 { p, q, s, r, t1, t2 })
}

/// For each `(p, q)`: the `r₁` with `(p, r₁)` cyclic and `SCC(p, q, r₁)`
/// nonempty, and whether all those entries share one component.
struct DefinedEntries {
    n: usize,
    defined: BitMatrix,
    first: Vec<u32>,
    mixed: BitSet,
}

impl DefinedEntries {
    const NONE: u32 = u32::MAX;

    fn new(an: &Analysis, table: &TripleSccTable) -> Self {
        let n = an.n;
        let mut defined = BitMatrix::new(n * n, n);
        let mut first = vec![Self::NONE; n * n];
        let mut mixed = BitSet::new(n * n);
        for p in 0..n {
            for q in 0..n {
                let row = p * n + q;
                for r1 in an.pair_cycle.row_ones(p) {
                    if let SccEntry::Component(c) = table.get(p, q, r1) {
                        defined.set(row, r1);
                        if first[row] == Self::NONE {
                            first[row] = c;
                        } else if first[row] != c {
                            mixed.insert(row);
                        }
                    }
                }
            }
        }
        DefinedEntries {
            n,
            defined,
            first,
            mixed,
        }
    }

    fn row(&self, p: usize, q: usize) -> &[u64] {
        self.defined.row(p * self.n + q)
    }

    fn is_empty(&self, p: usize, q: usize) -> bool {
        self.first[p * self.n + q] == Self::NONE
    }

    fn is_mixed(&self, p: usize, q: usize) -> bool {
        self.mixed.contains(p * self.n + q)
    }

    /// The shared component when the entries for `(p, q)` are uniform.
    fn uniform(&self, p: usize, q: usize) -> Option<u32> {
        let c = self.first[p * self.n + q];
        (c != Self::NONE && !self.is_mixed(p, q)).then_some(c)
    }

    fn heap_bytes(&self) -> usize {
        self.defined.heap_bytes() + self.first.len() * 4 + self.mixed.words().len() * 8
    }
}

fn smallest_member(
    an: &Analysis,
    search: &mut PairSearch<'_>,
    p: usize,
    q: usize,
    s: usize,
) -> usize {
    an.scc_members(search, p, q, s)
        .first()
        .expect("defined entries have members")
}

/// Consistency check preceding condition 4.
pub fn check_lemma15(an: &Analysis, table: &TripleSccTable) -> Option<GraphWitness> {
    lemma15_with(an, table, &DefinedEntries::new(an, table))
}

fn lemma15_with(
    an: &Analysis,
    table: &TripleSccTable,
    defined: &DefinedEntries,
) -> Option<GraphWitness> {
    let n = an.n;
    let mut search = PairSearch::new(&an.product);
    let mut candidates = BitSet::new(n);
    for q in 0..n {
        for r in an.pair_cycle.row_ones(q) {
            let ancestors = an.common_ancestors(q, r);
            // Uniform (p, q) rows cannot disagree with themselves.
            if !ancestors.iter().any(|p| defined.is_mixed(p, q)) {
                continue;
            }
            let reached = search.search(PairNode::new(q, r)).clone();
            for p in ancestors.iter().filter(|&p| defined.is_mixed(p, q)) {
                for q1 in 0..n {
                    candidates.clear();
                    candidates.union_with(reached.row(q1));
                    candidates.intersect_with(an.pair_cycle.row(q1));
                    candidates.intersect_with(defined.row(p, q));
                    let mut it = candidates.iter();
                    let Some(r1) = it.next() else { continue };
                    let c1 = table.get(p, q, r1);
                    if let Some(r2) = it.find(|&r2| table.get(p, q, r2) != c1) {
                        let t1 = smallest_member(an, &mut search, p, q, r1);
                        let t2 = smallest_member(an, &mut search, p, q, r2);
                        return Some(GraphWitness::L15 {
                            p,
                            q,
                            r,
                            q1,
                            r1,
                            r2,
                            t1,
                            t2,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Condition 4.
///
/// When the nonempty entries of both `(p, q)` and `(p, r)` are uniform the
/// comparison reduces to one component pair plus a reachability test per
/// `q₁`; otherwise the admissible `r₁` are scanned.
pub fn check_condition4(an: &Analysis, table: &TripleSccTable) -> Option<GraphWitness> {
    condition4_with(an, table, &DefinedEntries::new(an, table))
}

fn condition4_with(
    an: &Analysis,
    table: &TripleSccTable,
    defined: &DefinedEntries,
) -> Option<GraphWitness> {
    let n = an.n;
    let mut search = PairSearch::new(&an.product);
    for q in 0..n {
        for r in an.pair_cycle.row_ones(q) {
            let mut reached: Option<BitMatrix> = None;
            for p in an.common_ancestors(q, r).iter() {
                if defined.is_empty(p, q) || defined.is_empty(p, r) {
                    continue;
                }
                let x_uniform = defined.uniform(p, q);
                let y_uniform = defined.uniform(p, r);
                if x_uniform.is_some() && x_uniform == y_uniform {
                    continue;
                }
                let reached =
                    reached.get_or_insert_with(|| search.search(PairNode::new(q, r)).clone());
                // q₁ ranges over (p, q₁) cyclic with SCC(p, r, q₁) nonempty.
                for q1 in Ones::new(defined.row(p, r)) {
                    let y = table.get(p, r, q1);
                    let r1 = match x_uniform {
                        Some(x) if SccEntry::Component(x) == y => None,
                        Some(_) => first_common(&[reached.row(q1), defined.row(p, q)]),
                        None => Ones::new(reached.row(q1)).find(|&r1| {
                            defined.defined.get(p * n + q, r1) && table.get(p, q, r1) != y
                        }),
                    };
                    if let Some(r1) = r1 {
                        let t1 = smallest_member(an, &mut search, p, q, r1);
                        let t2 = smallest_member(an, &mut search, p, r, q1);
                        return Some(GraphWitness::C4 {
                            p,
                            q,
                            r,
                            q1,
                            r1,
                            t1,
                            t2,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Wall-clock time per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Timings {
    pub scc: Duration,
    pub reachability: Duration,
    pub condition1: Duration,
    pub condition2: Duration,
    pub condition3: Duration,
    pub lemma15: Duration,
    pub condition4: Duration,
}

/// Timings plus the largest auxiliary structures built.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckProfile {
    pub timings: Timings,
    /// Bytes held by reachability, the product graph and cycle-pair tables.
    pub graph_bytes: usize,
    /// Bytes of the `SCC(p, q, s)` table, zero if never built.
    pub triple_table_bytes: usize,
    /// Bytes of per-`(p, q)` summaries used by the last two checks.
    pub summary_bytes: usize,
}

/// Runs conditions 1, 2, 3, the consistency check and condition 4 in that
/// order and stops at the first failure.
pub fn check_ltt(a: &CompleteAutomaton) -> Verdict {
    check_ltt_profiled(a).0
}

pub fn check_ltt_profiled(a: &CompleteAutomaton) -> (Verdict, CheckProfile) {
    let mut profile = CheckProfile::default();
    let verdict = run_checks(a, &mut profile, true);
    (verdict, profile)
}

/// Like [`check_ltt_profiled`] but evaluates every stage even after a
/// failure; the reported verdict is still the first failure.
pub fn check_ltt_exhaustive(a: &CompleteAutomaton) -> (Verdict, CheckProfile) {
    let mut profile = CheckProfile::default();
    let verdict = run_checks(a, &mut profile, false);
    (verdict, profile)
}

fn run_checks(a: &CompleteAutomaton, profile: &mut CheckProfile, early_exit: bool) -> Verdict {
    if a.n_labels() == 0 {
        return Verdict::pass();
    }
    let an = Analysis::timed(a, &mut profile.timings);
    profile.graph_bytes = an.heap_bytes();
    let mut first: Option<GraphWitness> = None;
    let mut record = |w: Option<GraphWitness>| {
        if first.is_none() {
            first = w;
        }
        early_exit && first.is_some()
    };

    let clock = Instant::now();
    let stop = record(check_condition1(&an));
    profile.timings.condition1 = clock.elapsed();
    if stop {
        return first.into();
    }

    let clock = Instant::now();
    let stop = record(check_condition2(&an));
    profile.timings.condition2 = clock.elapsed();
    if stop {
        return first.into();
    }

    let clock = Instant::now();
    let table = compute_scc_table(&an);
    profile.triple_table_bytes = table.heap_bytes();
    let stop = record(check_condition3(&an, &table));
    profile.timings.condition3 = clock.elapsed();
    if stop {
        return first.into();
    }

    let clock = Instant::now();
    let defined = DefinedEntries::new(&an, &table);
    profile.summary_bytes = defined.heap_bytes();
    let stop = record(lemma15_with(&an, &table, &defined));
    profile.timings.lemma15 = clock.elapsed();
    if stop {
        return first.into();
    }

    let clock = Instant::now();
    record(condition4_with(&an, &table, &defined));
    profile.timings.condition4 = clock.elapsed();
    first.into()
}

/// Re-checks a witness from scratch against reachability, cycle sets and
/// fresh pair searches: the premises of the violated condition must hold
/// and its conclusion must fail.
pub fn revalidate(witness: &GraphWitness, an: &Analysis) -> bool {
    let n = an.n;
    let reach = &an.reach;
    let cyc2 = |a: usize, b: usize| an.is_cycle_pair(a, b);
    let pair_reaches = |from: (usize, usize), to: (usize, usize)| {
        crate::graph::reachable_from(PairNode::new(from.0, from.1), &an.product).get(to.0, to.1)
    };
    // t ∈ SCC(p, q, s) member set
    let member = |p: usize, q: usize, s: usize, t: usize| {
        pair_reaches((p, s), (q, t)) && reach.reaches(q, t) && cyc2(q, t)
    };
    let in_range = witness.states().iter().all(|&(_, v)| v < n);
    if !in_range {
        return false;
    }
    match *witness {
        GraphWitness::C1 { p, q } => cyc2(p, q) && p != q && reach.equivalent(p, q),
        GraphWitness::C2 { p, s, q, t, r } => {
            cyc2(p, s)
                && pair_reaches((p, s), (q, t))
                && reach.reaches(p, r)
                && reach.reaches(r, s)
                && cyc2(r, t)
                && !reach.reaches(q, t)
        }
        GraphWitness::C3 { p, q, s, r, t1, t2 } => {
            cyc2(p, s)
                && reach.reaches(p, s)
                && reach.reaches(p, q)
                && cyc2(q, r)
                && reach.reaches(p, r)
                && reach.reaches(r, s)
                && member(p, q, s, t1)
                && member(p, q, s, t2)
                && !reach.equivalent(t1, t2)
        }
        GraphWitness::L15 {
            p,
            q,
            r,
            q1,
            r1,
            r2,
            t1,
            t2,
        } => {
            cyc2(q, r)
                && an.is_cycle_state(p)
                && reach.reaches(p, q)
                && reach.reaches(p, r)
                && pair_reaches((q, r), (q1, r1))
                && pair_reaches((q, r), (q1, r2))
                && cyc2(q1, r1)
                && cyc2(q1, r2)
                && cyc2(p, r1)
                && cyc2(p, r2)
                && member(p, q, r1, t1)
                && member(p, q, r2, t2)
                && !reach.equivalent(t1, t2)
        }
        GraphWitness::C4 {
            p,
            q,
            r,
            q1,
            r1,
            t1,
            t2,
        } => {
            cyc2(q, r)
                && an.is_cycle_state(p)
                && reach.reaches(p, q)
                && reach.reaches(p, r)
                && cyc2(p, q1)
                && cyc2(p, r1)
                && pair_reaches((q, r), (q1, r1))
                && member(p, q, r1, t1)
                && member(p, r, q1, t2)
                && !reach.equivalent(t1, t2)
        }
    }
}
