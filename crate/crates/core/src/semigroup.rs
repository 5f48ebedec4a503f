//! Transition semigroups: closure, aperiodicity and the identity
//! `eafuebf = ebfueaf` over idempotents `e`, `f`.
//!
//! Products compose in word order: `(x·y)(p) = y(x(p))`, i.e. states are
//! acted on from the right.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{default_labels, CompleteAutomaton};
use crate::verdict::{ElementRef, SemigroupWitness, Verdict, Witness};

/// Default bound on the number of elements built.
pub const DEFAULT_CAP: usize = 200_000;

/// Environment variable overriding [`DEFAULT_CAP`] in the command-line tool.
pub const CAP_ENV: &str = "LTT_SEMIGROUP_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("semigroup exceeds the cap of {cap} elements (reached {reached})")]
    CapacityExceeded { cap: usize, reached: usize },
}

/// A total map on `0..degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transformation {
    image: Vec<u32>,
}

impl Transformation {
    pub fn new(image: Vec<u32>) -> Self {
        let n = image.len() as u32;
        assert!(image.iter().all(|&x| x < n), "image out of range");
        Transformation { image }
    }

    pub fn identity(degree: usize) -> Self {
        Transformation {
            image: (0..degree as u32).collect(),
        }
    }

    /// The action of one label of an automaton.
    pub fn of_label(a: &CompleteAutomaton, label: usize) -> Self {
        Transformation {
            image: (0..a.n_states()).map(|p| a.step(p, label) as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn apply(&self, p: usize) -> usize {
        self.image[p] as usize
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        Transformation {
            image: compose(&self.image, &other.image),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.image.iter().all(|&x| self.image[x as usize] == x)
    }

    /// Length of the longest cycle in the functional graph; `1` iff some
    /// power `s^k` equals `s^(k+1)`.
    pub fn max_cycle_length(&self) -> usize {
        cycle_lengths(&self.image).into_iter().max().unwrap_or(1)
    }
}

fn compose(first: &[u32], second: &[u32]) -> Vec<u32> {
    first.iter().map(|&x| second[x as usize]).collect()
}

/// Lengths of the cycles of a map, one per cycle.
fn cycle_lengths(image: &[u32]) -> Vec<usize> {
    let n = image.len();
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state = vec![0u8; n];
    let mut lengths = Vec::new();
    let mut path = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        path.clear();
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = image[v] as usize;
        }
        if state[v] == 1 {
            let pos = path.iter().position(|&x| x == v).unwrap();
            lengths.push(path.len() - pos);
        }
        for &x in &path {
            state[x] = 2;
        }
    }
    lengths
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

const NO_PARENT: u32 = u32::MAX;

/// A finite transformation semigroup with its right Cayley graph over a
/// fixed generating set.
#[derive(Debug, Clone)]
pub struct TransitionSemigroup {
    degree: usize,
    labels: Vec<String>,
    images: Vec<u32>,
    lookup: HashMap<Box<[u32]>, u32>,
    generators: Vec<u32>,
    gen_edges: Vec<u32>,
    // (element, generator) whose product first produced this element
    parent: Vec<(u32, u32)>,
    idempotents: Vec<u32>,
}

impl TransitionSemigroup {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of points acted upon.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Element produced by each generator.
    pub fn generator_element(&self, generator: usize) -> usize {
        self.generators[generator] as usize
    }

    pub fn image(&self, element: usize) -> &[u32] {
        &self.images[element * self.degree..(element + 1) * self.degree]
    }

    pub fn element(&self, element: usize) -> Transformation {
        Transformation {
            image: self.image(element).to_vec(),
        }
    }

    pub fn index_of(&self, image: &[u32]) -> Option<usize> {
        self.lookup.get(image).map(|&i| i as usize)
    }

    /// Right multiplication by a generator.
    pub fn gen_edge(&self, element: usize, generator: usize) -> usize {
        self.gen_edges[element * self.generators.len() + generator] as usize
    }

    pub fn multiply(&self, x: usize, y: usize) -> usize {
        let product = compose(self.image(x), self.image(y));
        self.index_of(&product)
            .expect("semigroup closed under multiplication")
    }

    /// A shortest generator word for `element`.
    pub fn word(&self, element: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut e = element;
        loop {
            let (parent, generator) = self.parent[e];
            word.push(generator as usize);
            if parent == NO_PARENT {
                break;
            }
            e = parent as usize;
        }
        word.reverse();
        word
    }

    pub fn element_ref(&self, element: usize) -> ElementRef {
        ElementRef {
            index: element,
            word: self.word(element),
        }
    }

    /// Product of the generators along `word`; `None` for the empty word.
    pub fn evaluate(&self, word: &[usize]) -> Option<usize> {
        let (&first, rest) = word.split_first()?;
        Some(
            rest.iter()
                .fold(self.generator_element(first), |e, &g| self.gen_edge(e, g)),
        )
    }

    pub fn idempotents(&self) -> &[u32] {
        &self.idempotents
    }

    pub fn heap_bytes(&self) -> usize {
        self.images.len() * 4 * 2 + self.gen_edges.len() * 4 + self.parent.len() * 8
    }

    fn insert(&mut self, image: Vec<u32>, parent: (u32, u32)) -> (usize, bool) {
        if let Some(&i) = self.lookup.get(image.as_slice()) {
            return (i as usize, false);
        }
        let index = self.parent.len();
        self.images.extend_from_slice(&image);
        self.lookup.insert(image.into_boxed_slice(), index as u32);
        self.parent.push(parent);
        (index, true)
    }

    fn finish(&mut self) {
        self.idempotents = (0..self.len())
            .filter(|&e| {
                let img = self.image(e);
                img.iter().all(|&x| img[x as usize] == x)
            })
            .map(|e| e as u32)
            .collect();
    }

    /// `elements × generators` matrix; a `generators` line is written only
    /// when generator `j` is not element `j`. One comment per element
    /// gives its shortest word.
    pub fn to_cayley_text(&self) -> String {
        let g = self.n_generators();
        let mut out = String::new();
        writeln!(out, "{} {}", self.len(), g).unwrap();
        if self
            .generators
            .iter()
            .enumerate()
            .any(|(j, &e)| e as usize != j)
        {
            let gens: Vec<String> = self.generators.iter().map(u32::to_string).collect();
            writeln!(out, "generators {}", gens.join(" ")).unwrap();
        }
        for e in 0..self.len() {
            writeln!(
                out,
                "# {e} {}",
                crate::verdict::spell(&self.word(e), &self.labels)
            )
            .unwrap();
        }
        for e in 0..self.len() {
            let row: Vec<String> = (0..g).map(|l| self.gen_edge(e, l).to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }
}

/// Breadth-first closure of the label transformations under right
/// multiplication by labels. Elements come out ordered by shortest word length.
pub fn build_semigroup(
    a: &CompleteAutomaton,
    cap: usize,
) -> Result<TransitionSemigroup, SemigroupError> {
    let g = a.n_labels();
    let letters: Vec<Vec<u32>> = (0..g)
        .map(|l| Transformation::of_label(a, l).image)
        .collect();
    close(a.n_states(), a.labels().to_vec(), &letters, cap)
}

fn close(
    degree: usize,
    labels: Vec<String>,
    letters: &[Vec<u32>],
    cap: usize,
) -> Result<TransitionSemigroup, SemigroupError> {
    let g = letters.len();
    let mut s = TransitionSemigroup {
        degree,
        labels,
        images: Vec::new(),
        lookup: HashMap::new(),
        generators: Vec::with_capacity(g),
        gen_edges: Vec::new(),
        parent: Vec::new(),
        idempotents: Vec::new(),
    };
    for (l, letter) in letters.iter().enumerate() {
        let (index, _) = s.insert(letter.clone(), (NO_PARENT, l as u32));
        s.generators.push(index as u32);
    }
    if s.len() > cap {
        return Err(SemigroupError::CapacityExceeded {
            cap,
            reached: s.len(),
        });
    }
    let mut next = 0;
    while next < s.len() {
        for (l, letter) in letters.iter().enumerate() {
            let product = compose(s.image(next), letter);
            let (index, fresh) = s.insert(product, (next as u32, l as u32));
            s.gen_edges.push(index as u32);
            if fresh && s.len() > cap {
                return Err(SemigroupError::CapacityExceeded {
                    cap,
                    reached: s.len(),
                });
            }
        }
        next += 1;
    }
    s.finish();
    Ok(s)
}

/// `None` iff every element has `s^k = s^(k+1)` for some `k`. The witness
/// is the first element whose powers cycle; its period is the lcm of the
/// cycle lengths of its map.
pub fn check_aperiodicity(s: &TransitionSemigroup) -> Option<SemigroupWitness> {
    for e in 0..s.len() {
        let lengths = cycle_lengths(s.image(e));
        if lengths.iter().any(|&l| l > 1) {
            let period = lengths.into_iter().fold(1, |acc, l| acc / gcd(acc, l) * l);
            return Some(SemigroupWitness::NonAperiodic {
                element: s.element_ref(e),
                period,
            });
        }
    }
    None
}

/// `None` iff `eafuebf = ebfueaf` for all idempotents `e`, `f` and all
/// elements `a`, `u`, `b`.
///
/// `x = eaf` ranges exactly over `eSf` (since `e·eaf·f = eaf`), so per
/// idempotent pair the check is `xuy = yux` for `x, y ∈ eSf`, `u ∈ S`.
pub fn check_identity(s: &TransitionSemigroup) -> Option<SemigroupWitness> {
    let n = s.degree;
    let mut xu = vec![0u32; n];
    let mut yu = vec![0u32; n];
    for &e in &s.idempotents {
        let e = e as usize;
        for &f in &s.idempotents {
            let f = f as usize;
            // eSf with the first a producing each member
            let mut members: Vec<(usize, usize)> = Vec::new();
            let mut seen = HashMap::new();
            for a in 0..s.len() {
                let eaf = compose(&compose(s.image(e), s.image(a)), s.image(f));
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(eaf) {
                    let x = s.index_of(slot.key()).expect("closed");
                    slot.insert(());
                    members.push((x, a));
                }
            }
            for (i, &(x, a)) in members.iter().enumerate() {
                for &(y, b) in &members[i + 1..] {
                    let (xi, yi) = (s.image(x), s.image(y));
                    for u in 0..s.len() {
                        let ui = s.image(u);
                        for p in 0..n {
                            xu[p] = ui[xi[p] as usize];
                            yu[p] = ui[yi[p] as usize];
                        }
                        if (0..n).any(|p| yi[xu[p] as usize] != xi[yu[p] as usize]) {
                            return Some(SemigroupWitness::Identity {
                                e: s.element_ref(e),
                                f: s.element_ref(f),
                                a: s.element_ref(a),
                                u: s.element_ref(u),
                                b: s.element_ref(b),
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Aperiodicity, then the identity.
pub fn verdict_of(s: &TransitionSemigroup) -> Verdict {
    match check_aperiodicity(s).or_else(|| check_identity(s)) {
        None => Verdict::pass(),
        Some(w) => Verdict::fail(Witness::Semigroup(w)),
    }
}

pub fn semigroup_verdict(a: &CompleteAutomaton, cap: usize) -> Result<Verdict, SemigroupError> {
    if a.n_labels() == 0 {
        return Ok(Verdict::pass());
    }
    Ok(verdict_of(&build_semigroup(a, cap)?))
}

/// Replays a witness through the generator transformations only: words are
/// re-evaluated letter by letter and the failing property recomputed.
pub fn revalidate(witness: &SemigroupWitness, s: &TransitionSemigroup) -> bool {
    let letters: Vec<&[u32]> = (0..s.n_generators())
        .map(|l| s.image(s.generator_element(l)))
        .collect();
    let eval = |word: &[usize]| -> Option<Vec<u32>> {
        let (&first, rest) = word.split_first()?;
        if first >= letters.len() || rest.iter().any(|&l| l >= letters.len()) {
            return None;
        }
        Some(
            rest.iter()
                .fold(letters[first].to_vec(), |acc, &l| compose(&acc, letters[l])),
        )
    };
    match witness {
        SemigroupWitness::NonAperiodic { element, .. } => {
            let Some(x) = eval(&element.word) else {
                return false;
            };
            // s^k ≠ s^(k+1) for k up to |S| rules out every k.
            let mut power = x.clone();
            for _ in 0..=s.len() {
                let next = compose(&power, &x);
                if next == power {
                    return false;
                }
                power = next;
            }
            true
        }
        SemigroupWitness::Identity { e, f, a, u, b } => {
            let parts: Option<Vec<Vec<u32>>> =
                [e, f, a, u, b].iter().map(|el| eval(&el.word)).collect();
            let Some(parts) = parts else {
                return false;
            };
            let [e, f, a, u, b] = <[Vec<u32>; 5]>::try_from(parts).unwrap();
            let idem = |x: &[u32]| compose(x, x) == x;
            let product = |xs: &[&Vec<u32>]| {
                xs[1..]
                    .iter()
                    .fold(xs[0].clone(), |acc, x| compose(&acc, x))
            };
            let lhs = product(&[&e, &a, &f, &u, &e, &b, &f]);
            let rhs = product(&[&e, &b, &f, &u, &e, &a, &f]);
            idem(&e) && idem(&f) && lhs != rhs
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: element index {value} out of range for {count} elements")]
    OutOfRange {
        line: usize,
        value: usize,
        count: usize,
    },
    #[error("element {0} is not generated by the generators")]
    NotGenerated(usize),
    #[error("products are inconsistent: element {element} times generator {generator}")]
    Inconsistent { element: usize, generator: usize },
}

/// Parses an `elements × generators` matrix: row `i`, column `j` holds the
/// product of element `i` with generator `j`. Generator `j` is element `j`
/// unless a `generators <i_0> ... <i_{g-1}>` line follows the header.
///
/// The result acts on `elements + 1` points (right multiplication on the
/// semigroup with an identity adjoined), which is faithful, so aperiodicity
/// and identities carry over unchanged. Element indices are preserved.
pub fn parse_cayley(text: &str) -> Result<TransitionSemigroup, CayleyError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let mut it = lines.iter().peekable();
    let syntax = |line: usize, message: String| CayleyError::Syntax { line, message };
    let (hline, header) = it
        .next()
        .ok_or_else(|| syntax(1, "missing header".into()))?;
    let dims: Vec<usize> = header
        .iter()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            syntax(
                *hline,
                "header must be `<n_elements> <n_generators>`".into(),
            )
        })?;
    let [m, g] = dims[..] else {
        return Err(syntax(
            *hline,
            "header must be `<n_elements> <n_generators>`".into(),
        ));
    };
    if m == 0 || g == 0 {
        return Err(syntax(
            *hline,
            "need at least one element and one generator".into(),
        ));
    }
    let index = |line: usize, tok: &str| -> Result<usize, CayleyError> {
        let value: usize = tok
            .parse()
            .map_err(|_| syntax(line, format!("`{tok}` is not an element index")))?;
        if value >= m {
            return Err(CayleyError::OutOfRange {
                line,
                value,
                count: m,
            });
        }
        Ok(value)
    };

    let mut generators: Vec<usize> = (0..g).collect();
    if let Some((line, toks)) = it.peek() {
        if toks[0] == "generators" {
            if toks.len() != g + 1 {
                return Err(syntax(*line, format!("expected {g} generator indices")));
            }
            generators = toks[1..]
                .iter()
                .map(|t| index(*line, t))
                .collect::<Result<_, _>>()?;
            it.next();
        } else if g > m {
            return Err(syntax(
                *line,
                format!("{g} generators but only {m} elements"),
            ));
        }
    }

    let mut table = Vec::with_capacity(m * g);
    for row in 0..m {
        let (line, toks) = it.next().ok_or_else(|| {
            syntax(
                lines.last().map_or(1, |l| l.0),
                format!("missing row {row}"),
            )
        })?;
        if toks.len() != g {
            return Err(syntax(
                *line,
                format!("expected {g} entries, found {}", toks.len()),
            ));
        }
        for t in toks {
            table.push(index(*line, t)?);
        }
    }
    if let Some((line, _)) = it.next() {
        return Err(syntax(*line, "unexpected trailing line".into()));
    }

    // Right action of each generator on elements plus the adjoined identity `m`.
    let letters: Vec<Vec<u32>> = (0..g)
        .map(|j| {
            let mut img: Vec<u32> = (0..m).map(|x| table[x * g + j] as u32).collect();
            img.push(generators[j] as u32);
            img
        })
        .collect();
    let s = close(m + 1, default_labels(g), &letters, usize::MAX).expect("no cap");

    // Every listed element must be generated, and its action must send the
    // identity to itself; then the closure is exactly the listed semigroup.
    let mut by_element = vec![usize::MAX; m];
    for e in 0..s.len() {
        let x = s.image(e)[m] as usize;
        if by_element[x] != usize::MAX {
            // two distinct actions claiming the same element
            let (parent, generator) = s.parent[e];
            return Err(CayleyError::Inconsistent {
                element: if parent == NO_PARENT {
                    x
                } else {
                    s.image(parent as usize)[m] as usize
                },
                generator: generator as usize,
            });
        }
        by_element[x] = e;
    }
    if let Some(missing) = by_element.iter().position(|&e| e == usize::MAX) {
        return Err(CayleyError::NotGenerated(missing));
    }
    for x in 0..m {
        for j in 0..g {
            if s.image(s.gen_edge(by_element[x], j))[m] as usize != table[x * g + j] {
                return Err(CayleyError::Inconsistent {
                    element: x,
                    generator: j,
                });
            }
        }
    }

    // Reorder into file order.
    let mut out = TransitionSemigroup {
        degree: m + 1,
        labels: s.labels.clone(),
        images: Vec::with_capacity(m * (m + 1)),
        lookup: HashMap::new(),
        generators: generators.iter().map(|&x| x as u32).collect(),
        gen_edges: table.iter().map(|&x| x as u32).collect(),
        parent: vec![(NO_PARENT, 0); m],
        idempotents: Vec::new(),
    };
    for (x, &e) in by_element.iter().enumerate() {
        let img = s.image(e).to_vec();
        out.images.extend_from_slice(&img);
        out.lookup.insert(img.into_boxed_slice(), x as u32);
        let (parent, generator) = s.parent[e];
        let parent = if parent == NO_PARENT {
            NO_PARENT
        } else {
            s.image(parent as usize)[m]
        };
        out.parent[x] = (parent, generator);
    }
    out.finish();
    Ok(out)
}
