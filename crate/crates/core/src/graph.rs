//! Strongly connected components, reachability and the square product graph.

use std::fmt::Write as _;

use crate::automaton::CompleteAutomaton;
use crate::bits::{BitMatrix, BitSet};

/// A complete labelled graph: every node has exactly one successor per label.
pub trait LabeledGraph {
    fn node_count(&self) -> usize;
    fn label_count(&self) -> usize;
    /// Successors of `v`, one per label, in label order.
    fn successors(&self, v: usize) -> &[u32];
}

impl LabeledGraph for CompleteAutomaton {
    fn node_count(&self) -> usize {
        self.n_states()
    }

    fn label_count(&self) -> usize {
        self.n_labels()
    }

    fn successors(&self, v: usize) -> &[u32] {
        let g = self.n_labels();
        &self.table()[v * g..(v + 1) * g]
    }
}

/// Maximal strongly connected components of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    comp_of: Vec<u32>,
    has_internal_edge: Vec<bool>,
}

impl SccDecomposition {
    pub fn component(&self, v: usize) -> usize {
        self.comp_of[v] as usize
    }

    pub fn component_count(&self) -> usize {
        self.has_internal_edge.len()
    }

    pub fn node_count(&self) -> usize {
        self.comp_of.len()
    }

    /// True iff some edge starts and ends inside component `c`.
    pub fn has_internal_edge(&self, c: usize) -> bool {
        self.has_internal_edge[c]
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.comp_of[u] == self.comp_of[v]
    }

    /// One `node component_id` pair per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (v, c) in self.comp_of.iter().enumerate() {
            writeln!(out, "{v} {c}").unwrap();
        }
        out
    }
}

/// Tarjan's algorithm with an explicit stack; linear in nodes plus edges.
///
/// Component ids come out in reverse topological order of the condensation.
pub fn scc<G: LabeledGraph + ?Sized>(graph: &G) -> SccDecomposition {
    const UNVISITED: u32 = u32::MAX;
    let n = graph.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp_of = vec![UNVISITED; n];
    let mut stack: Vec<u32> = Vec::new();
    // (node, next successor position)
    let mut frames: Vec<(u32, u32)> = Vec::new();
    let mut next_index = 0u32;
    let mut comp_count = 0u32;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        frames.push((root as u32, 0));

        while let Some(frame) = frames.last_mut() {
            let v = frame.0 as usize;
            let succ = graph.successors(v);
            if let Some(&w) = succ.get(frame.1 as usize) {
                frame.1 += 1;
                let w = w as usize;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    frames.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap() as usize;
                    on_stack[w] = false;
                    comp_of[w] = comp_count;
                    if w == v {
                        break;
                    }
                }
                comp_count += 1;
            }
            if let Some(parent) = frames.last() {
                let u = parent.0 as usize;
                low[u] = low[u].min(low[v]);
            }
        }
    }

    let mut has_internal_edge = vec![false; comp_count as usize];
    for v in 0..n {
        let c = comp_of[v];
        if graph
            .successors(v)
            .iter()
            .any(|&w| comp_of[w as usize] == c)
        {
            has_internal_edge[c as usize] = true;
        }
    }
    SccDecomposition {
        comp_of,
        has_internal_edge,
    }
}

/// Nodes fixed by some nonempty word: members of components with an internal edge.
pub fn cycle_states(d: &SccDecomposition) -> BitSet {
    let mut set = BitSet::new(d.node_count());
    for v in 0..d.node_count() {
        if d.has_internal_edge(d.component(v)) {
            set.insert(v);
        }
    }
    set
}

/// Reflexive-transitive reachability over the states of an automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityTable {
    forward: BitMatrix,
    backward: BitMatrix,
}

impl ReachabilityTable {
    pub fn n_states(&self) -> usize {
        self.forward.rows()
    }

    /// `p ⪰ q`: some (possibly empty) word leads from `p` to `q`.
    #[inline]
    pub fn reaches(&self, p: usize, q: usize) -> bool {
        self.forward.get(p, q)
    }

    /// Mutual reachability.
    pub fn equivalent(&self, p: usize, q: usize) -> bool {
        self.reaches(p, q) && self.reaches(q, p)
    }

    /// States reachable from `p`, as a bit row.
    pub fn from_row(&self, p: usize) -> &[u64] {
        self.forward.row(p)
    }

    /// States that reach `q`, as a bit row.
    pub fn to_row(&self, q: usize) -> &[u64] {
        self.backward.row(q)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.forward
    }

    pub fn heap_bytes(&self) -> usize {
        self.forward.heap_bytes() + self.backward.heap_bytes()
    }
}

/// One breadth-first search per state; `O(n²g)` time, `n²` bits per direction.
pub fn reachability<G: LabeledGraph + ?Sized>(graph: &G) -> ReachabilityTable {
    let n = graph.node_count();
    let mut forward = BitMatrix::new(n, n);
    let mut queue = Vec::with_capacity(n);
    for p in 0..n {
        queue.clear();
        forward.set(p, p);
        queue.push(p);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &w in graph.successors(v) {
                if forward.set(p, w as usize) {
                    queue.push(w as usize);
                }
            }
        }
    }
    let backward = forward.transpose();
    ReachabilityTable { forward, backward }
}

/// A vertex of the square product graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairNode {
    pub first: usize,
    pub second: usize,
}

impl PairNode {
    pub fn new(first: usize, second: usize) -> Self {
        PairNode { first, second }
    }
}

/// The direct product of an automaton with itself: `(p, q) -σ-> (pσ, qσ)`.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    n: usize,
    g: usize,
    succ: Vec<u32>,
}

impl ProductGraph {
    pub fn n_states(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn index(&self, node: PairNode) -> usize {
        node.first * self.n + node.second
    }

    #[inline]
    pub fn node(&self, index: usize) -> PairNode {
        PairNode::new(index / self.n, index % self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.succ.len()
    }

    pub fn heap_bytes(&self) -> usize {
        self.succ.len() * std::mem::size_of::<u32>()
    }
}

impl LabeledGraph for ProductGraph {
    fn node_count(&self) -> usize {
        self.n * self.n
    }

    fn label_count(&self) -> usize {
        self.g
    }

    fn successors(&self, v: usize) -> &[u32] {
        &self.succ[v * self.g..(v + 1) * self.g]
    }
}

pub fn product_square(a: &CompleteAutomaton) -> ProductGraph {
    let n = a.n_states();
    let g = a.n_labels();
    let mut succ = Vec::with_capacity(n * n * g);
    for p in 0..n {
        for q in 0..n {
            for l in 0..g {
                succ.push((a.step(p, l) * n + a.step(q, l)) as u32);
            }
        }
    }
    ProductGraph { n, g, succ }
}

/// Cycle states of the product graph, as an `n × n` matrix.
pub fn pair_cycle_states(product: &ProductGraph, d: &SccDecomposition) -> BitMatrix {
    let n = product.n_states();
    let mut m = BitMatrix::new(n, n);
    for v in cycle_states(d).iter() {
        let node = product.node(v);
        m.set(node.first, node.second);
    }
    m
}

/// Reusable scratch for single-source searches in the product graph.
///
/// The result is an `n × n` matrix with bit `(q, t)` set iff `(q, t)` is
/// reachable from the source. Each search is `O(n²g)`.
pub struct PairSearch<'a> {
    product: &'a ProductGraph,
    reached: BitMatrix,
    queue: Vec<u32>,
}

impl<'a> PairSearch<'a> {
    pub fn new(product: &'a ProductGraph) -> Self {
        let n = product.n_states();
        PairSearch {
            product,
            reached: BitMatrix::new(n, n),
            queue: Vec::with_capacity(n * n),
        }
    }

    pub fn search(&mut self, source: PairNode) -> &BitMatrix {
        let n = self.product.n_states();
        self.reached.clear();
        self.queue.clear();
        self.reached.set(source.first, source.second);
        self.queue.push(self.product.index(source) as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head] as usize;
            head += 1;
            for &w in self.product.successors(v) {
                let w = w as usize;
                if self.reached.set(w / n, w % n) {
                    self.queue.push(w as u32);
                }
            }
        }
        &self.reached
    }

    pub fn heap_bytes(&self) -> usize {
        self.reached.heap_bytes() + self.queue.capacity() * std::mem::size_of::<u32>()
    }
}

/// All pairs reachable from `source` in the product graph, including itself.
pub fn reachable_from(source: PairNode, product: &ProductGraph) -> BitMatrix {
    PairSearch::new(product).search(source).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::CompleteAutomaton;

    fn table(n: usize, g: usize, delta: &[usize]) -> CompleteAutomaton {
        CompleteAutomaton::from_table(n, g, delta).unwrap()
    }

    #[test]
    fn two_cycle_is_one_cyclic_component() {
        let a = table(2, 1, &[1, 0]);
        let d = scc(&a);
        assert_eq!(d.component_count(), 1);
        assert!(d.same_component(0, 1));
        assert!(d.has_internal_edge(0));
    }

    #[test]
    fn path_into_sink_splits_components() {
        let a = crate::automaton::parse_automaton("2 1\na\n1\n-\n")
            .unwrap()
            .complete_with_sink();
        let d = scc(&a);
        assert_eq!(d.component_count(), 3);
        let cyc = cycle_states(&d);
        assert_eq!(cyc.iter().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn cycle_state_cases() {
        // 0 self-loop; 1 <-> 2; 3 -> 0 only.
        let a = table(4, 1, &[0, 2, 1, 0]);
        let cyc = cycle_states(&scc(&a));
        assert_eq!(cyc.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn reachability_basics() {
        let one = reachability(&table(1, 1, &[0]));
        assert!(one.reaches(0, 0));
        let r = reachability(&table(2, 1, &[1, 1]));
        assert!(r.reaches(0, 1));
        assert!(!r.reaches(1, 0));
        assert!(r.reaches(1, 1));
        assert_eq!(r.to_row(1)[0], 0b11);
    }

    #[test]
    fn product_of_single_state() {
        let p = product_square(&table(1, 3, &[0, 0, 0]));
        assert_eq!(p.node_count(), 1);
        assert_eq!(p.successors(0), [0, 0, 0]);
    }

    #[test]
    fn product_applies_letter_componentwise() {
        let p = product_square(&table(2, 1, &[1, 0]));
        let from = p.index(PairNode::new(0, 1));
        assert_eq!(p.node(p.successors(from)[0] as usize), PairNode::new(1, 0));
        assert_eq!(p.node_count(), 4);
        assert_eq!(p.edge_count(), 4);
    }

    #[test]
    fn self_loop_source_reaches_only_itself() {
        let a = table(2, 2, &[0, 0, 1, 1]);
        let p = product_square(&a);
        let r = reachable_from(PairNode::new(1, 1), &p);
        assert_eq!(r.count(), 1);
        assert!(r.get(1, 1));
    }

    #[test]
    fn diagonal_stays_diagonal() {
        let a = table(3, 2, &[1, 2, 2, 0, 0, 1]);
        let p = product_square(&a);
        for s in 0..3 {
            let r = reachable_from(PairNode::new(s, s), &p);
            for q in 0..3 {
                for t in 0..3 {
                    if r.get(q, t) {
                        assert_eq!(q, t);
                    }
                }
            }
        }
    }

    #[test]
    fn dump_format() {
        let d = scc(&table(2, 1, &[1, 0]));
        assert_eq!(d.dump(), "0 0\n1 0\n");
    }
}
