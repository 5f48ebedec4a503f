use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ltt_core::campaign::{diff_automata, exhaustive, random_trials, DiffSummary};
use ltt_core::random::{random_automaton, XorShift64Star};
use ltt_core::report::{exit, DeciderReport};
use ltt_core::semigroup::{verdict_of, CAP_ENV};
use ltt_core::{
    build_semigroup, check_ltt_profiled, parse_automaton, parse_cayley, CompleteAutomaton,
    RunReport, TransitionSemigroup, Verdict, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(
    name = "ltt",
    version,
    about = "Decide local threshold testability of a DFA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an automaton is locally threshold testable.
    ///
    /// Exit status: 0 LTT, 1 not LTT, 2 error, 3 the deciders disagree.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Graph)]
        mode: Mode,
        /// Largest semigroup to build before giving up.
        #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// The input is a Cayley table rather than an automaton; implies
        /// `--mode semigroup`.
        #[arg(long)]
        cayley: bool,
    },
    /// Write seeded random complete automata, one file each.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run both deciders over many automata and report disagreements.
    ///
    /// Exit status 0 iff no disagreement was found.
    Diff {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        g_max: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every automaton up to the bounds instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Directory receiving one file per disagreeing automaton.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Cayley table of the transition semigroup.
    Semigroup {
        file: PathBuf,
        #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Graph,
    Semigroup,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Kv,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check {
            file,
            mode,
            cap,
            format,
            cayley,
        } => {
            let report = if cayley {
                if mode == Mode::Both {
                    bail!("a Cayley table supports only the semigroup decider");
                }
                check_cayley(&file)?
            } else {
                check_automaton(&file, mode, cap)?
            };
            match format {
                Format::Human => print!("{report}"),
                Format::Kv => print!("{}", report.to_kv()),
            }
            Ok(report.exit_status())
        }
        Command::Random {
            n,
            g,
            count,
            seed,
            out,
        } => {
            if n == 0 {
                bail!("--n must be positive");
            }
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut rng = XorShift64Star::new(seed);
            for i in 0..count {
                let a = random_automaton(&mut rng, n, g);
                let path = out.join(format!("random_{seed}_{i:04}.aut"));
                fs::write(&path, a.to_automaton().to_text())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            println!("wrote {count} automata to {}", out.display());
            Ok(0)
        }
        Command::Diff {
            n_max,
            g_max,
            trials,
            seed,
            exhaustive: enumerate,
            cap,
            out,
        } => {
            if n_max == 0 || g_max == 0 {
                bail!("--n-max and --g-max must be positive");
            }
            let summary = if enumerate {
                diff_automata(exhaustive(n_max, g_max), cap)
            } else {
                diff_automata(random_trials(n_max, g_max, trials, seed), cap)
            };
            print_summary(&summary);
            if let Some(dir) = out {
                dump_disagreements(&summary, &dir)?;
            }
            Ok(if summary.is_clean() { 0 } else { 1 })
        }
        Command::Semigroup { file, cap } => {
            let a = load(&file)?;
            let s = build_semigroup(&a, cap)?;
            print!("{}", s.to_cayley_text());
            Ok(0)
        }
    }
}

fn load(path: &Path) -> Result<CompleteAutomaton> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let a = parse_automaton(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(a.complete_with_sink())
}

fn check_automaton(path: &Path, mode: Mode, cap: usize) -> Result<RunReport> {
    let a = load(path)?;
    let mut report = RunReport {
        input: path.display().to_string(),
        n_states: a.n_states(),
        n_labels: a.n_labels(),
        sink_added: a.sink_added(),
        ..RunReport::default()
    };
    if mode != Mode::Semigroup {
        let (verdict, profile) = check_ltt_profiled(&a);
        report.graph = Some(DeciderReport::from_verdict(&verdict, a.labels()));
        let t = profile.timings;
        report.timings = [
            ("scc", t.scc),
            ("reachability", t.reachability),
            ("condition1", t.condition1),
            ("condition2", t.condition2),
            ("condition3", t.condition3),
            ("lemma15", t.lemma15),
            ("condition4", t.condition4),
        ]
        .into_iter()
        .map(|(k, d)| (k.to_string(), d.as_micros() as u64))
        .collect();
        report.table_bytes = vec![
            ("graph".to_string(), profile.graph_bytes),
            ("triple_table".to_string(), profile.triple_table_bytes),
            ("summaries".to_string(), profile.summary_bytes),
        ];
    }
    if mode != Mode::Graph {
        let s = build_semigroup(&a, cap)?;
        add_semigroup(&mut report, &s, &verdict_of(&s));
    }
    Ok(report)
}

fn check_cayley(path: &Path) -> Result<RunReport> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let s = parse_cayley(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mut report = RunReport {
        input: path.display().to_string(),
        n_states: s.len(),
        n_labels: s.n_generators(),
        ..RunReport::default()
    };
    add_semigroup(&mut report, &s, &verdict_of(&s));
    Ok(report)
}

fn add_semigroup(report: &mut RunReport, s: &TransitionSemigroup, verdict: &Verdict) {
    report.semigroup = Some(DeciderReport::from_verdict(verdict, s.labels()));
    report.semigroup_size = Some(s.len());
}

fn print_summary(summary: &DiffSummary) {
    println!("checked      {}", summary.checked);
    println!("agreements   {}", summary.agreements);
    println!("ltt          {}", summary.ltt_count);
    println!("cap skipped  {}", summary.capacity_skipped);
    println!("disagreements {}", summary.disagreements.len());
    for d in &summary.disagreements {
        println!(
            "  {:?}: graph {} semigroup {}",
            d.automaton.table(),
            d.graph,
            d.semigroup
        );
    }
}

fn dump_disagreements(summary: &DiffSummary, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (i, d) in summary.disagreements.iter().enumerate() {
        let path = dir.join(format!("disagreement_{i:04}.aut"));
        let text = format!(
            "# graph: {}\n# semigroup: {}\n{}",
            d.graph,
            d.semigroup,
            d.automaton.to_automaton().to_text()
        );
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
