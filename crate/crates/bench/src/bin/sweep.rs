use ltt_bench::{space_exponent, sweep, time_exponent};

fn main() {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("sizes must be integers"))
        .collect();
    let sizes = if args.is_empty() {
        vec![10, 20, 40, 80]
    } else {
        args
    };
    let points = sweep(&sizes, 2, 3, 1);
    println!("{:>6} {:>12} {:>14}", "n", "ms", "bytes");
    for p in &points {
        println!("{:>6} {:>12.3} {:>14.0}", p.n, p.seconds * 1e3, p.bytes);
    }
    println!("time exponent  {:.2}", time_exponent(&points));
    println!("space exponent {:.2}", space_exponent(&points));
}
