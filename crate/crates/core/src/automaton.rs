//! Deterministic automata as labelled transition graphs.
//!
//! Text format (lines starting with `#` are comments, blank lines ignored):
//!
//! ```text
//! <n_states> <n_labels>
//! <label_0> ... <label_{g-1}>
//! <target or -> ... (one row of g tokens per state)
//! ```
//!
//! Rows may be followed by optional annotation lines `initial <state>`,
//! `accepting <state>...` and `names <name>...`. They are preserved through
//! parsing and serialization but play no part in any decision procedure.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

/// Token marking an undefined transition.
pub const MISSING: &str = "-";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header `<n_states> <n_labels>`")]
    MissingHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("automaton must have at least one state")]
    NoStates,
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("expected {expected} cells, found {found}")]
    RowLength { expected: usize, found: usize },
    #[error("missing transition rows: expected {expected}, found {found}")]
    MissingRows { expected: usize, found: usize },
    #[error("cell `{0}` is neither a state index nor `-`")]
    BadCell(String),
    #[error("state {value} out of range for {n_states} states")]
    StateOutOfRange { value: usize, n_states: usize },
    #[error("unrecognized line `{0}`")]
    Unexpected(String),
    #[error("names annotation lists {found} names for {expected} states")]
    NameCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("automaton must have at least one state")]
    NoStates,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("transition table has {found} cells, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("transition ({state}, {label}) targets state {target} out of range")]
    TargetOutOfRange {
        state: usize,
        label: usize,
        target: usize,
    },
    #[error("state {0} out of range")]
    StateOutOfRange(usize),
    #[error("{found} state names given for {expected} states")]
    NameCount { expected: usize, found: usize },
}

/// Labels `a`..`z`, then `l26`, `l27`, ...
pub fn default_labels(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("l{i}")
            }
        })
        .collect()
}

/// A deterministic automaton whose transition function may be partial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    n_states: usize,
    labels: Vec<String>,
    delta: Vec<Option<u32>>,
    state_names: Option<Vec<String>>,
    initial: Option<usize>,
    accepting: Vec<usize>,
}

impl Automaton {
    /// `delta` is row-major: entry `state * labels.len() + label`.
    pub fn new(
        n_states: usize,
        labels: Vec<String>,
        delta: Vec<Option<usize>>,
    ) -> Result<Self, AutomatonError> {
        if n_states == 0 {
            return Err(AutomatonError::NoStates);
        }
        check_distinct(&labels)?;
        let g = labels.len();
        if delta.len() != n_states * g {
            return Err(AutomatonError::TableSize {
                expected: n_states * g,
                found: delta.len(),
            });
        }
        let mut cells = Vec::with_capacity(delta.len());
        for (i, cell) in delta.into_iter().enumerate() {
            if let Some(target) = cell {
                if target >= n_states {
                    return Err(AutomatonError::TargetOutOfRange {
                        state: i / g,
                        label: i % g,
                        target,
                    });
                }
            }
            cells.push(cell.map(|t| t as u32));
        }
        Ok(Automaton {
            n_states,
            labels,
            delta: cells,
            state_names: None,
            initial: None,
            accepting: Vec::new(),
        })
    }

    pub fn with_state_names(mut self, names: Vec<String>) -> Result<Self, AutomatonError> {
        if names.len() != self.n_states {
            return Err(AutomatonError::NameCount {
                expected: self.n_states,
                found: names.len(),
            });
        }
        self.state_names = Some(names);
        Ok(self)
    }

    pub fn with_initial(mut self, state: usize) -> Result<Self, AutomatonError> {
        if state >= self.n_states {
            return Err(AutomatonError::StateOutOfRange(state));
        }
        self.initial = Some(state);
        Ok(self)
    }

    pub fn with_accepting(mut self, states: Vec<usize>) -> Result<Self, AutomatonError> {
        if let Some(&bad) = states.iter().find(|&&s| s >= self.n_states) {
            return Err(AutomatonError::StateOutOfRange(bad));
        }
        self.accepting = states;
        Ok(self)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn state_names(&self) -> Option<&[String]> {
        self.state_names.as_deref()
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn transition(&self, state: usize, label: usize) -> Option<usize> {
        self.delta[state * self.labels.len() + label].map(|t| t as usize)
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(Option::is_some)
    }

    /// Serializes to the text format; `parse` of the result reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let g = self.labels.len();
        writeln!(out, "{} {}", self.n_states, g).unwrap();
        writeln!(out, "{}", self.labels.join(" ")).unwrap();
        for p in 0..self.n_states {
            let row: Vec<String> = (0..g)
                .map(|l| match self.transition(p, l) {
                    Some(t) => t.to_string(),
                    None => MISSING.to_string(),
                })
                .collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        if let Some(i) = self.initial {
            writeln!(out, "initial {i}").unwrap();
        }
        if !self.accepting.is_empty() {
            let acc: Vec<String> = self.accepting.iter().map(usize::to_string).collect();
            writeln!(out, "accepting {}", acc.join(" ")).unwrap();
        }
        if let Some(names) = &self.state_names {
            writeln!(out, "names {}", names.join(" ")).unwrap();
        }
        out
    }

    /// Adds a sink state if any transition is undefined.
    pub fn complete_with_sink(&self) -> CompleteAutomaton {
        let g = self.labels.len();
        let sink = if self.is_complete() {
            None
        } else {
            Some(self.n_states)
        };
        let n = self.n_states + usize::from(sink.is_some());
        let mut delta = Vec::with_capacity(n * g);
        for cell in &self.delta {
            delta.push(cell.unwrap_or_else(|| sink.unwrap() as u32));
        }
        if let Some(s) = sink {
            delta.extend(std::iter::repeat_n(s as u32, g));
        }
        let state_names = self.state_names.as_ref().map(|names| {
            let mut names = names.clone();
            if sink.is_some() {
                names.push("sink".to_string());
            }
            names
        });
        CompleteAutomaton {
            n_states: n,
            labels: self.labels.clone(),
            delta,
            sink,
            state_names,
            initial: self.initial,
            accepting: self.accepting.clone(),
        }
    }
}

impl FromStr for Automaton {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_automaton(s)
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn check_distinct(labels: &[String]) -> Result<(), AutomatonError> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(AutomatonError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// A whitespace token with its 1-based column.
struct Token<'a> {
    column: usize,
    text: &'a str,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn error(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.number,
            column,
            kind,
        }
    }

    fn end_column(&self) -> usize {
        self.tokens
            .last()
            .map(|t| t.column + t.text.chars().count())
            .unwrap_or(1)
    }
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (col, (idx, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col, idx)),
            (true, Some((c, i))) => {
                tokens.push(Token {
                    column: c + 1,
                    text: &line[i..idx],
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, i)) = start {
        tokens.push(Token {
            column: c + 1,
            text: &line[i..],
        });
    }
    tokens
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .map(|(i, l)| Line {
            number: i + 1,
            tokens: tokenize(l),
        })
        .filter(|l| !l.tokens.is_empty())
        .collect()
}

fn parse_index(line: &Line<'_>, tok: &Token<'_>, bound: usize) -> Result<usize, ParseError> {
    let value: usize = tok
        .text
        .parse()
        .map_err(|_| line.error(tok.column, ParseErrorKind::BadCell(tok.text.to_string())))?;
    if value >= bound {
        return Err(line.error(
            tok.column,
            ParseErrorKind::StateOutOfRange {
                value,
                n_states: bound,
            },
        ));
    }
    Ok(value)
}

/// Parses the `states X labels` matrix format.
pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.iter();
    let header = it.next().ok_or(ParseError {
        line: text.lines().count().max(1),
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    if header.tokens.len() != 2 {
        return Err(header.error(
            header
                .tokens
                .get(2)
                .map_or(header.end_column(), |t| t.column),
            ParseErrorKind::BadHeader(format!(
                "expected two integers, found {} tokens",
                header.tokens.len()
            )),
        ));
    }
    let mut dims = [0usize; 2];
    for (slot, tok) in dims.iter_mut().zip(&header.tokens) {
        *slot = tok.text.parse().map_err(|_| {
            header.error(
                tok.column,
                ParseErrorKind::BadHeader(format!("`{}` is not a non-negative integer", tok.text)),
            )
        })?;
    }
    let [n, g] = dims;
    if n == 0 {
        return Err(header.error(header.tokens[0].column, ParseErrorKind::NoStates));
    }

    let mut labels = Vec::with_capacity(g);
    if g > 0 {
        let line = it.next().ok_or(ParseError {
            line: header.number + 1,
            column: 1,
            kind: ParseErrorKind::LabelCount {
                expected: g,
                found: 0,
            },
        })?;
        if line.tokens.len() != g {
            return Err(line.error(
                1,
                ParseErrorKind::LabelCount {
                    expected: g,
                    found: line.tokens.len(),
                },
            ));
        }
        for tok in &line.tokens {
            if labels.iter().any(|l: &String| l == tok.text) {
                return Err(line.error(
                    tok.column,
                    ParseErrorKind::DuplicateLabel(tok.text.to_string()),
                ));
            }
            labels.push(tok.text.to_string());
        }
    }

    let mut delta = Vec::with_capacity(n * g);
    if g > 0 {
        for row in 0..n {
            let line = it.next().ok_or(ParseError {
                line: lines.last().map_or(1, |l| l.number),
                column: 1,
                kind: ParseErrorKind::MissingRows {
                    expected: n,
                    found: row,
                },
            })?;
            if line.tokens.len() != g {
                return Err(line.error(
                    line.tokens.get(g).map_or(line.end_column(), |t| t.column),
                    ParseErrorKind::RowLength {
                        expected: g,
                        found: line.tokens.len(),
                    },
                ));
            }
            for tok in &line.tokens {
                if tok.text == MISSING {
                    delta.push(None);
                } else {
                    delta.push(Some(parse_index(line, tok, n)?));
                }
            }
        }
    }

    let mut automaton = Automaton::new(n, labels, delta).expect("validated during parsing");
    for line in it {
        let head = &line.tokens[0];
        let rest = &line.tokens[1..];
        match head.text {
            "initial" if rest.len() == 1 => {
                automaton.initial = Some(parse_index(line, &rest[0], n)?);
            }
            "accepting" => {
                automaton.accepting = rest
                    .iter()
                    .map(|t| parse_index(line, t, n))
                    .collect::<Result<_, _>>()?;
            }
            "names" => {
                if rest.len() != n {
                    return Err(line.error(
                        head.column,
                        ParseErrorKind::NameCount {
                            expected: n,
                            found: rest.len(),
                        },
                    ));
                }
                automaton.state_names = Some(rest.iter().map(|t| t.text.to_string()).collect());
            }
            _ => {
                let joined: Vec<&str> = line.tokens.iter().map(|t| t.text).collect();
                return Err(line.error(head.column, ParseErrorKind::Unexpected(joined.join(" "))));
            }
        }
    }
    Ok(automaton)
}

/// An automaton with a total transition function, possibly after sink completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteAutomaton {
    n_states: usize,
    labels: Vec<String>,
    delta: Vec<u32>,
    sink: Option<usize>,
    state_names: Option<Vec<String>>,
    initial: Option<usize>,
    accepting: Vec<usize>,
}

impl CompleteAutomaton {
    /// Builds a complete automaton from a row-major table with default labels.
    pub fn from_table(
        n_states: usize,
        n_labels: usize,
        delta: &[usize],
    ) -> Result<Self, AutomatonError> {
        let cells = delta.iter().map(|&t| Some(t)).collect();
        let a = Automaton::new(n_states, default_labels(n_labels), cells)?;
        Ok(a.complete_with_sink())
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn step(&self, state: usize, label: usize) -> usize {
        self.delta[state * self.labels.len() + label] as usize
    }

    /// Row-major transition table.
    pub fn table(&self) -> &[u32] {
        &self.delta
    }

    pub fn sink_added(&self) -> bool {
        self.sink.is_some()
    }

    pub fn sink_index(&self) -> Option<usize> {
        self.sink
    }

    /// Display name of a state: its annotated name or its index.
    pub fn state_name(&self, state: usize) -> String {
        match &self.state_names {
            Some(names) => names[state].clone(),
            None => state.to_string(),
        }
    }

    /// Image of `state` under a word given as label indices.
    pub fn run(&self, state: usize, word: &[usize]) -> usize {
        word.iter().fold(state, |p, &l| self.step(p, l))
    }

    /// Back to a plain automaton; the sink, if any, becomes an ordinary state.
    pub fn to_automaton(&self) -> Automaton {
        Automaton {
            n_states: self.n_states,
            labels: self.labels.clone(),
            delta: self.delta.iter().map(|&t| Some(t)).collect(),
            state_names: self.state_names.clone(),
            initial: self.initial,
            accepting: self.accepting.clone(),
        }
    }

    /// Completing an already complete automaton changes nothing.
    pub fn complete_with_sink(&self) -> CompleteAutomaton {
        self.clone()
    }

    /// Relabels states: state `p` becomes `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> CompleteAutomaton {
        assert_eq!(perm.len(), self.n_states);
        let g = self.labels.len();
        let mut delta = vec![0u32; self.delta.len()];
        for p in 0..self.n_states {
            for l in 0..g {
                delta[perm[p] * g + l] = perm[self.step(p, l)] as u32;
            }
        }
        CompleteAutomaton {
            n_states: self.n_states,
            labels: self.labels.clone(),
            delta,
            sink: self.sink.map(|s| perm[s]),
            state_names: None,
            initial: self.initial.map(|s| perm[s]),
            accepting: self.accepting.iter().map(|&s| perm[s]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Automaton {
        parse_automaton(text).unwrap()
    }

    #[test]
    fn smallest_input() {
        let a = parse("1 1\na\n0\n");
        assert_eq!(a.n_states(), 1);
        assert_eq!(a.labels(), ["a"]);
        assert_eq!(a.transition(0, 0), Some(0));
    }

    #[test]
    fn two_cycle() {
        let a = parse("2 1\na\n1\n0\n");
        assert_eq!(a.transition(0, 0), Some(1));
        assert_eq!(a.transition(1, 0), Some(0));
        assert!(a.is_complete());
    }

    #[test]
    fn missing_cell() {
        let a = parse("2 1\na\n1\n-\n");
        assert_eq!(a.transition(0, 0), Some(1));
        assert_eq!(a.transition(1, 0), None);
        assert!(!a.is_complete());
    }

    #[test]
    fn comments_and_annotations() {
        let text =
            "# mod-2 counter\n2 1\n# labels\na\n1\n0\n\ninitial 0\naccepting 1\nnames even odd\n";
        let a = parse(text);
        assert_eq!(a.initial(), Some(0));
        assert_eq!(a.accepting(), [1]);
        assert_eq!(a.state_names().unwrap(), ["even", "odd"]);
        assert_eq!(parse(&a.to_text()), a);
    }

    #[test]
    fn empty_alphabet() {
        let a = parse("3 0\n");
        assert_eq!(a.n_labels(), 0);
        assert!(a.is_complete());
        assert_eq!(parse(&a.to_text()), a);
    }

    fn err(text: &str) -> ParseError {
        parse_automaton(text).unwrap_err()
    }

    #[test]
    fn malformed_header() {
        let e = err("2\na\n1\n0\n");
        assert_eq!((e.line, e.column), (1, 2));
        assert!(matches!(e.kind, ParseErrorKind::BadHeader(_)));
        let e = err("x 1\n");
        assert_eq!((e.line, e.column), (1, 1));
        assert!(matches!(err("").kind, ParseErrorKind::MissingHeader));
        assert!(matches!(err("0 1\na\n").kind, ParseErrorKind::NoStates));
    }

    #[test]
    fn bad_cells_name_line_and_column() {
        let e = err("2 2\na b\n1 0\n0  x\n");
        assert_eq!((e.line, e.column), (4, 4));
        assert_eq!(e.kind, ParseErrorKind::BadCell("x".into()));

        let e = err("2 1\na\n2\n0\n");
        assert_eq!((e.line, e.column), (3, 1));
        assert_eq!(
            e.kind,
            ParseErrorKind::StateOutOfRange {
                value: 2,
                n_states: 2
            }
        );

        let e = err("2 1\na\n-1\n0\n");
        assert_eq!(e.kind, ParseErrorKind::BadCell("-1".into()));
    }

    #[test]
    fn duplicate_labels() {
        let e = err("1 2\na a\n0 0\n");
        assert_eq!((e.line, e.column), (2, 3));
        assert_eq!(e.kind, ParseErrorKind::DuplicateLabel("a".into()));
    }

    #[test]
    fn row_shape_errors() {
        assert!(matches!(
            err("2 2\na b\n0 1 1\n0 0\n").kind,
            ParseErrorKind::RowLength {
                expected: 2,
                found: 3
            }
        ));
        assert!(matches!(
            err("2 1\na\n0\n").kind,
            ParseErrorKind::MissingRows {
                expected: 2,
                found: 1
            }
        ));
        assert!(matches!(
            err("1 1\na\n0\nbogus\n").kind,
            ParseErrorKind::Unexpected(_)
        ));
    }

    #[test]
    fn complete_is_noop_on_total_automaton() {
        let a = parse("2 1\na\n1\n0\n");
        let c = a.complete_with_sink();
        assert!(!c.sink_added());
        assert_eq!(c.n_states(), 2);
        assert_eq!(c.to_automaton(), a);
    }

    #[test]
    fn sink_completion() {
        let c = parse("2 1\na\n1\n-\n").complete_with_sink();
        assert!(c.sink_added());
        assert_eq!(c.sink_index(), Some(2));
        assert_eq!(c.n_states(), 3);
        assert_eq!(c.step(1, 0), 2);
        assert_eq!(c.step(2, 0), 2);
    }

    #[test]
    fn sink_completion_of_empty_table() {
        let c = parse("1 1\na\n-\n").complete_with_sink();
        assert_eq!(c.n_states(), 2);
        assert_eq!((c.step(0, 0), c.step(1, 0)), (1, 1));
    }

    #[test]
    fn completion_is_idempotent() {
        let c = parse("3 2\na b\n1 -\n- 2\n0 0\n").complete_with_sink();
        let cc = c.to_automaton().complete_with_sink();
        assert!(!cc.sink_added());
        assert_eq!(cc.table(), c.table());
        assert_eq!(c.complete_with_sink(), c);
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(
            Automaton::new(1, vec!["a".into(), "a".into()], vec![Some(0), Some(0)]),
            Err(AutomatonError::DuplicateLabel("a".into()))
        );
        assert!(matches!(
            Automaton::new(1, vec!["a".into()], vec![Some(1)]),
            Err(AutomatonError::TargetOutOfRange { target: 1, .. })
        ));
        assert!(CompleteAutomaton::from_table(2, 1, &[1]).is_err());
    }

    #[test]
    fn default_label_names() {
        let labels = default_labels(28);
        assert_eq!(labels[0], "a");
        assert_eq!(labels[25], "z");
        assert_eq!(labels[27], "l27");
    }
}
