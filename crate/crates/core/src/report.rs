//! Run reports in a line-oriented `key=value` format.
//!
//! ```text
//! input=examples/mod2.aut
//! states=2
//! labels=1
//! sink_added=false
//! graph.ltt=false
//! graph.condition=C1
//! graph.witness=p:0 q:1
//! semigroup.ltt=false
//! semigroup.condition=APERIODICITY
//! semigroup.witness=s:0/a period:2
//! semigroup.size=2
//! agreement=true
//! time.scc_us=4
//! bytes.triple_table=0
//! ```
//!
//! `time.*` and `bytes.*` keys are informational and may be absent.

use std::fmt;

use thiserror::Error;

use crate::verdict::{Condition, Verdict};

/// Outcome of one decider, in printable form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeciderReport {
    pub is_ltt: bool,
    pub condition: Option<Condition>,
    pub witness: Vec<(String, String)>,
}

impl DeciderReport {
    pub fn from_verdict(v: &Verdict, labels: &[String]) -> Self {
        DeciderReport {
            is_ltt: v.is_ltt(),
            condition: v.failed_condition(),
            witness: v
                .witness()
                .map(|w| w.named_items(labels))
                .unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunReport {
    pub input: String,
    pub n_states: usize,
    pub n_labels: usize,
    pub sink_added: bool,
    pub graph: Option<DeciderReport>,
    pub semigroup: Option<DeciderReport>,
    pub semigroup_size: Option<usize>,
    /// Phase name and elapsed microseconds.
    pub timings: Vec<(String, u64)>,
    /// Structure name and bytes held.
    pub table_bytes: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("line {0}: expected `key=value`")]
    NotKeyValue(usize),
    #[error("line {line}: bad value for `{key}`")]
    BadValue { line: usize, key: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing key `{0}`")]
    Missing(&'static str),
}

/// Exit statuses of the `check` command.
pub mod exit {
    pub const LTT: u8 = 0;
    pub const NOT_LTT: u8 = 1;
    pub const ERROR: u8 = 2;
    pub const DISAGREEMENT: u8 = 3;
}

impl RunReport {
    /// True iff every decider that ran returned the same answer.
    pub fn agreement(&self) -> bool {
        match (&self.graph, &self.semigroup) {
            (Some(g), Some(s)) => g.is_ltt == s.is_ltt,
            _ => true,
        }
    }

    pub fn is_ltt(&self) -> Option<bool> {
        self.graph
            .as_ref()
            .or(self.semigroup.as_ref())
            .map(|d| d.is_ltt)
    }

    pub fn exit_status(&self) -> u8 {
        if !self.agreement() {
            exit::DISAGREEMENT
        } else if self.is_ltt() == Some(false) {
            exit::NOT_LTT
        } else {
            exit::LTT
        }
    }

    pub fn to_kv(&self) -> String {
        let mut lines = vec![
            format!("input={}", self.input),
            format!("states={}", self.n_states),
            format!("labels={}", self.n_labels),
            format!("sink_added={}", self.sink_added),
        ];
        for (name, d) in [("graph", &self.graph), ("semigroup", &self.semigroup)] {
            let Some(d) = d else { continue };
            lines.push(format!("{name}.ltt={}", d.is_ltt));
            if let Some(c) = d.condition {
                lines.push(format!("{name}.condition={c}"));
            }
            if !d.witness.is_empty() {
                let items: Vec<String> =
                    d.witness.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                lines.push(format!("{name}.witness={}", items.join(" ")));
            }
        }
        if let Some(size) = self.semigroup_size {
            lines.push(format!("semigroup.size={size}"));
        }
        lines.push(format!("agreement={}", self.agreement()));
        for (k, us) in &self.timings {
            lines.push(format!("time.{k}_us={us}"));
        }
        for (k, b) in &self.table_bytes {
            lines.push(format!("bytes.{k}={b}"));
        }
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    pub fn from_kv(text: &str) -> Result<Self, ReportError> {
        fn parse<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ReportError> {
            v.parse().map_err(|_| ReportError::BadValue {
                line,
                key: key.to_string(),
            })
        }
        let mut report = RunReport::default();
        let mut seen_input = false;
        let mut agreement: Option<(usize, bool)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let (key, value) = raw.split_once('=').ok_or(ReportError::NotKeyValue(line))?;
            match key {
                "input" => {
                    report.input = value.to_string();
                    seen_input = true;
                }
                "states" => report.n_states = parse(line, key, value)?,
                "labels" => report.n_labels = parse(line, key, value)?,
                "sink_added" => report.sink_added = parse(line, key, value)?,
                "agreement" => agreement = Some((line, parse(line, key, value)?)),
                "semigroup.size" => report.semigroup_size = Some(parse(line, key, value)?),
                _ => {
                    if let Some(phase) = key
                        .strip_prefix("time.")
                        .and_then(|k| k.strip_suffix("_us"))
                    {
                        report
                            .timings
                            .push((phase.to_string(), parse(line, key, value)?));
                    } else if let Some(name) = key.strip_prefix("bytes.") {
                        report
                            .table_bytes
                            .push((name.to_string(), parse(line, key, value)?));
                    } else if let Some((decider, field)) = key.split_once('.') {
                        let slot = match decider {
                            "graph" => &mut report.graph,
                            "semigroup" => &mut report.semigroup,
                            _ => return Err(ReportError::UnknownKey(key.to_string())),
                        };
                        let d = slot.get_or_insert(DeciderReport {
                            is_ltt: true,
                            condition: None,
                            witness: Vec::new(),
                        });
                        match field {
                            "ltt" => d.is_ltt = parse(line, key, value)?,
                            "condition" => d.condition = Some(parse(line, key, value)?),
                            "witness" => {
                                d.witness = value
                                    .split_whitespace()
                                    .map(|item| {
                                        item.split_once(':')
                                            .map(|(k, v)| (k.to_string(), v.to_string()))
                                            .ok_or(ReportError::BadValue {
                                                line,
                                                key: key.to_string(),
                                            })
                                    })
                                    .collect::<Result<_, _>>()?;
                            }
                            _ => return Err(ReportError::UnknownKey(key.to_string())),
                        }
                    } else {
                        return Err(ReportError::UnknownKey(key.to_string()));
                    }
                }
            }
        }
        if !seen_input {
            return Err(ReportError::Missing("input"));
        }
        if let Some((line, flag)) = agreement {
            if flag != report.agreement() {
                return Err(ReportError::BadValue {
                    line,
                    key: "agreement".into(),
                });
            }
        }
        Ok(report)
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} states, {} labels",
            self.input, self.n_states, self.n_labels
        )?;
        if self.sink_added {
            write!(f, " (sink added)")?;
        }
        writeln!(f)?;
        for (name, d) in [("graph", &self.graph), ("semigroup", &self.semigroup)] {
            let Some(d) = d else { continue };
            write!(f, "  {name:<9} ")?;
            if d.is_ltt {
                writeln!(f, "locally threshold testable")?;
            } else {
                let items: Vec<String> =
                    d.witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(
                    f,
                    "NOT locally threshold testable, condition {} [{}]",
                    d.condition.map_or("?", Condition::as_str),
                    items.join(" ")
                )?;
            }
        }
        if let Some(size) = self.semigroup_size {
            writeln!(f, "  semigroup size {size}")?;
        }
        if self.graph.is_some() && self.semigroup.is_some() {
            writeln!(
                f,
                "  deciders {}",
                if self.agreement() {
                    "agree"
                } else {
                    "DISAGREE"
                }
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        RunReport {
            input: "dir/a=b.aut".into(),
            n_states: 3,
            n_labels: 2,
            sink_added: true,
            graph: Some(DeciderReport {
                is_ltt: false,
                condition: Some(Condition::C2),
                witness: vec![("p".into(), "0".into()), ("s".into(), "2".into())],
            }),
            semigroup: Some(DeciderReport {
                is_ltt: false,
                condition: Some(Condition::Identity),
                witness: vec![("e".into(), "3/ab".into())],
            }),
            semigroup_size: Some(9),
            timings: vec![("scc".into(), 12)],
            table_bytes: vec![("triple_table".into(), 324)],
        }
    }

    #[test]
    fn kv_round_trip() {
        let r = sample();
        assert_eq!(RunReport::from_kv(&r.to_kv()).unwrap(), r);
    }

    #[test]
    fn exit_statuses() {
        let mut r = sample();
        assert_eq!(r.exit_status(), exit::NOT_LTT);
        r.semigroup.as_mut().unwrap().is_ltt = true;
        assert_eq!(r.exit_status(), exit::DISAGREEMENT);
        r.graph.as_mut().unwrap().is_ltt = true;
        assert_eq!(r.exit_status(), exit::LTT);
        r.graph = None;
        r.semigroup = None;
        assert_eq!(r.exit_status(), exit::LTT);
    }

    #[test]
    fn kv_rejects_garbage() {
        assert_eq!(
            RunReport::from_kv("nonsense"),
            Err(ReportError::NotKeyValue(1))
        );
        assert_eq!(
            RunReport::from_kv("states=1"),
            Err(ReportError::Missing("input"))
        );
        assert!(RunReport::from_kv("input=x\nbogus.key=1").is_err());
        assert!(RunReport::from_kv("input=x\ngraph.ltt=maybe").is_err());
        assert!(
            RunReport::from_kv("input=x\ngraph.ltt=true\nsemigroup.ltt=false\nagreement=true")
                .is_err()
        );
    }
}
