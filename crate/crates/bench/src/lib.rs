//! Complexity sweeps for the graph checker.
//!
//! Space is taken from the checker's own accounting of the structures it
//! builds, so no allocator instrumentation is needed here.

use std::time::Instant;

use ltt_core::ltt::check_ltt_exhaustive;
use ltt_core::random::{random_automaton, XorShift64Star};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    /// Median wall-clock seconds of a full evaluation.
    pub seconds: f64,
    /// Median bytes held by graph tables, the triple table and summaries.
    pub bytes: f64,
}

/// Runs every stage on `reps` random automata per size and keeps medians.
pub fn sweep(sizes: &[usize], g: usize, reps: usize, seed: u64) -> Vec<SweepPoint> {
    assert!(reps > 0);
    let mut rng = XorShift64Star::new(seed);
    sizes
        .iter()
        .map(|&n| {
            let mut secs = Vec::with_capacity(reps);
            let mut bytes = Vec::with_capacity(reps);
            for _ in 0..reps {
                let a = random_automaton(&mut rng, n, g);
                let clock = Instant::now();
                let (_, profile) = check_ltt_exhaustive(&a);
                secs.push(clock.elapsed().as_secs_f64());
                bytes.push(
                    (profile.graph_bytes + profile.triple_table_bytes + profile.summary_bytes)
                        as f64,
                );
            }
            SweepPoint {
                n,
                seconds: median(&mut secs),
                bytes: median(&mut bytes),
            }
        })
        .collect()
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

pub fn time_exponent(points: &[SweepPoint]) -> f64 {
    log_log_slope(
        &points
            .iter()
            .map(|p| (p.n as f64, p.seconds))
            .collect::<Vec<_>>(),
    )
}

pub fn space_exponent(points: &[SweepPoint]) -> f64 {
    log_log_slope(
        &points
            .iter()
            .map(|p| (p.n as f64, p.bytes))
            .collect::<Vec<_>>(),
    )
}
