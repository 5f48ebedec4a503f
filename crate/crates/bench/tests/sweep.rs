use ltt_bench::{log_log_slope, space_exponent, sweep};

#[test]
fn slope_of_exact_power_law() {
    let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0]
        .iter()
        .map(|&x: &f64| (x, 5.0 * x.powi(3)))
        .collect();
    assert!((log_log_slope(&pts) - 3.0).abs() < 1e-9);
}

#[test]
fn space_grows_at_most_cubically() {
    let points = sweep(&[8, 16, 32], 2, 3, 5);
    assert_eq!(points.iter().map(|p| p.n).collect::<Vec<_>>(), [8, 16, 32]);
    assert!(points.iter().all(|p| p.bytes > 0.0 && p.seconds >= 0.0));
    assert!(space_exponent(&points) <= 3.3);
}
