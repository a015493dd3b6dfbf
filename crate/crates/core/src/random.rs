//! Random filtered complexes with known homology, for testing reduction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::f2::BitMatrix;
use crate::structure::BorderedStructure;

/// A filtered complex on `n` generators, built as a sum of isolated dots and
/// arrows and then scrambled by a random filtered change of basis.
///
/// Generators are totally ordered by (level, index) and every arrow goes
/// strictly down in that order, so the result is acyclic and never raises
/// the filtration.
pub fn filtered_complex(n: usize, seed: u64) -> BorderedStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = rng.random_range(0..=4);
    let mut levels: Vec<i32> = (0..n).map(|_| rng.random_range(0..=span)).collect();
    levels.sort();

    // direct sum of arrows i -> j with i above j in the total order
    let mut m = BitMatrix::zeros(n, n);
    let mut free: Vec<usize> = (0..n).collect();
    let pairs = if n >= 2 { rng.random_range(0..=n / 2) } else { 0 };
    for _ in 0..pairs {
        if free.len() < 2 {
            break;
        }
        let a = free.swap_remove(rng.random_range(0..free.len()));
        let b = free.swap_remove(rng.random_range(0..free.len()));
        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
        m.set(lo, hi, true);
    }

    // conjugate by elementary operations e_x -> e_x + e_y with y below x
    let ops = if n >= 2 { 3 * n } else { 0 };
    for _ in 0..ops {
        let x = rng.random_range(1..n);
        let y = rng.random_range(0..x);
        for r in 0..n {
            if m.get(r, y) {
                m.flip(r, x);
            }
        }
        for c in 0..n {
            if m.get(x, c) {
                m.flip(y, c);
            }
        }
    }

    let mut s = BorderedStructure::complex();
    for (i, &a) in levels.iter().enumerate() {
        s.add_generator(format!("g{i:02}"), vec![], a).expect("fresh names");
    }
    for c in 0..n {
        for r in 0..n {
            if m.get(r, c) {
                s.toggle_arrow(c, r);
            }
        }
    }
    s
}
