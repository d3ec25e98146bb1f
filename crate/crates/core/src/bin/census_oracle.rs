//! Unpruned census oracle: counts solution pairs by running a plain double
//! loop over every σ table and every τ table, testing the braid relation by
//! literal triple composition. No pruning, no sharing with the backtracking
//! enumerator — this is the independent reference the enumerator is checked
//! against. The resulting counts are persisted under `fixtures/`.
//!
//! Usage: `census-oracle [n ...]` (defaults to `2 3`). Prints a JSON object
//! mapping each `n` to its count.

use rayon::prelude::*;

/// Advances a base-`n` odometer; false when it wraps around.
fn advance(table: &mut [usize], n: usize) -> bool {
    for cell in table.iter_mut().rev() {
        *cell += 1;
        if *cell < n {
            return true;
        }
        *cell = 0;
    }
    false
}

fn braid_holds(n: usize, sigma: &[usize], tau: &[usize]) -> bool {
    let r = |x: usize, y: usize| (sigma[x * n + y], tau[x * n + y]);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                // left side: (id×r)(r×id)(id×r)
                let (a, b) = r(y, z);
                let (c, d) = r(x, a);
                let (e, f) = r(d, b);
                // right side: (r×id)(id×r)(r×id)
                let (g, h) = r(x, y);
                let (i, j) = r(h, z);
                let (k, l) = r(g, i);
                if (c, e, f) != (k, l, j) {
                    return false;
                }
            }
        }
    }
    true
}

fn all_tables(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut table = vec![0usize; n * n];
    loop {
        out.push(table.clone());
        if !advance(&mut table, n) {
            return out;
        }
    }
}

fn count_solutions(n: usize) -> u64 {
    let tables = all_tables(n);
    tables
        .par_iter()
        .map(|sigma| {
            let mut count = 0u64;
            let mut tau = vec![0usize; n * n];
            loop {
                if braid_holds(n, sigma, &tau) {
                    count += 1;
                }
                if !advance(&mut tau, n) {
                    return count;
                }
            }
        })
        .sum()
}

fn main() {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("carrier sizes must be integers"))
        .collect();
    let sizes = if args.is_empty() { vec![2, 3] } else { args };
    let mut out = String::from("{\n");
    for (i, &n) in sizes.iter().enumerate() {
        let start = std::time::Instant::now();
        let count = count_solutions(n);
        eprintln!("n={n}: {count} solutions ({:.1}s)", start.elapsed().as_secs_f64());
        out.push_str(&format!("  \"{n}\": {count}"));
        out.push_str(if i + 1 < sizes.len() { ",\n" } else { "\n" });
    }
    out.push_str("}\n");
    print!("{out}");
}
