//! Reproducible random automata and exhaustive enumeration.
//!
//! The generator is xorshift64* seeded through one round of splitmix64, so
//! every implementation of the same recipe draws the same automata:
//!
//! ```text
//! seed:  z = seed + 0x9E3779B97F4A7C15
//!        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!        state = z ^ (z >> 31), or 0x9E3779B97F4A7C15 if that is 0
//! next:  x ^= x >> 12; x ^= x << 25; x ^= x >> 27
//!        return x * 0x2545F4914F6CDD1D
//! below(n) = high 64 bits of next() * n   (128-bit product)
//! ```
//!
//! A random automaton with `n` states and `g` labels draws `below(n)` for each
//! `(state, label)` in row-major order.

use crate::automaton::CompleteAutomaton;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        XorShift64Star {
            state: if z == 0 { 0x9E37_79B9_7F4A_7C15 } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((u128::from(self.next_u64()) * n as u128) >> 64) as usize
    }
}

pub fn random_automaton(rng: &mut XorShift64Star, n: usize, g: usize) -> CompleteAutomaton {
    assert!(n >= 1, "need at least one state");
    let delta: Vec<usize> = (0..n * g).map(|_| rng.below(n)).collect();
    CompleteAutomaton::from_table(n, g, &delta).expect("targets in range")
}

/// Every complete automaton with `n` states and `g` labels, `n^(n·g)` in
/// total, in lexicographic order of the row-major table.
pub fn all_automata(n: usize, g: usize) -> AllAutomata {
    AllAutomata {
        n,
        g,
        next: Some(vec![0; n * g]),
    }
}

pub struct AllAutomata {
    n: usize,
    g: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for AllAutomata {
    type Item = CompleteAutomaton;

    fn next(&mut self) -> Option<CompleteAutomaton> {
        let table = self.next.take()?;
        let a = CompleteAutomaton::from_table(self.n, self.g, &table).expect("targets in range");
        let mut succ = table;
        // odometer, last cell fastest
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.n {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let mut a = XorShift64Star::new(7);
        let mut b = XorShift64Star::new(7);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(XorShift64Star::new(8).next_u64(), xs[0]);
    }

    #[test]
    fn frozen_sequence() {
        let mut r = XorShift64Star::new(0);
        let first: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        assert_eq!(
            first,
            [
                0x7bbc_b40d_5506_82d0,
                0xde7f_e413_d00c_c9fd,
                0xb3c6_3835_3c66_8c91
            ]
        );
        let a = random_automaton(&mut XorShift64Star::new(42), 3, 2);
        assert_eq!(a.table(), [0, 1, 1, 0, 2, 1]);
    }

    #[test]
    fn below_is_in_range() {
        let mut r = XorShift64Star::new(1);
        for n in 1..20 {
            for _ in 0..100 {
                assert!(r.below(n) < n);
            }
        }
    }

    #[test]
    fn single_state_random_automaton() {
        let a = random_automaton(&mut XorShift64Star::new(0), 1, 1);
        assert_eq!(a.table(), [0]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_automata(2, 1).count(), 4);
        assert_eq!(all_automata(2, 2).count(), 16);
        assert_eq!(all_automata(3, 1).count(), 27);
        assert_eq!(all_automata(1, 3).count(), 1);
        let tables: Vec<Vec<u32>> = all_automata(2, 1).map(|a| a.table().to_vec()).collect();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
