//! Regenerates `data/ceiling_v1.json`: for each degree pair up to 8, the
//! largest `||R|| delta^2` and `||S|| delta^2` seen over seeded normalized
//! pairs with `delta >= 0.05`, times a safety multiplier.
//!
//!     cargo run --release -p bezout-core --example gen_ceiling > crates/core/data/ceiling_v1.json

use bezout_core::backends::{CeilingEntry, CeilingTable};
use bezout_core::harness::{instance_rng, random_polynomial};
use bezout_core::roots::find_roots;
use bezout_core::separation::delta_value;
use bezout_core::sylvester::{build, solve_rhs};
use bezout_core::Polynomial;
use rayon::prelude::*;

const SEED: u64 = 0x5eed_ce11;
const PER_PAIR: usize = 10_000;
const MAX_DEGREE: usize = 8;
const DELTA_FLOOR: f64 = 0.05;
const MULTIPLIER: f64 = 10.0;

fn ratio(seed: u64, index: usize, n: usize, k: usize) -> Option<f64> {
    let mut rng = instance_rng(seed, index);
    let a = random_polynomial(&mut rng, n);
    let b = random_polynomial(&mut rng, k);
    let ra = find_roots(&a).ok()?;
    let rb = find_roots(&b).ok()?;
    let (delta, _) = delta_value(&a, &b, &ra, &rb);
    if delta < DELTA_FLOOR {
        return None;
    }
    let sol = solve_rhs(&build(&a, &b).ok()?, &Polynomial::one()).ok()?;
    let norm = sol.r.coeff_norm().value().max(sol.s.coeff_norm().value());
    Some(norm * delta * delta)
}

fn main() {
    let mut entries = Vec::new();
    for n in 1..=MAX_DEGREE {
        for k in 1..=MAX_DEGREE {
            let seed = SEED ^ ((n as u64) << 40) ^ ((k as u64) << 32);
            let limit = PER_PAIR * 200;
            let mut accepted = Vec::with_capacity(PER_PAIR);
            let mut next = 0;
            while accepted.len() < PER_PAIR && next < limit {
                let chunk = 4 * (PER_PAIR - accepted.len()) + 64;
                let batch: Vec<f64> = (next..next + chunk)
                    .into_par_iter()
                    .filter_map(|i| ratio(seed, i, n, k))
                    .collect();
                accepted.extend(batch);
                next += chunk;
            }
            accepted.truncate(PER_PAIR);
            let max_ratio = accepted.iter().copied().fold(0.0, f64::max);
            eprintln!(
                "N={n} K={k}: {} accepted, max ratio {max_ratio:.4e}",
                accepted.len()
            );
            entries.push(CeilingEntry {
                n,
                k,
                max_ratio,
                ceiling: MULTIPLIER * max_ratio,
            });
        }
    }
    let table = CeilingTable {
        version: 1,
        label: format!("empirical: {MULTIPLIER} x max ratio over {PER_PAIR} pairs per degree pair, not a proven constant"),
        seed: SEED,
        instances_per_pair: PER_PAIR,
        delta_floor: DELTA_FLOOR,
        multiplier: MULTIPLIER,
        entries,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&table).expect("table serializes")
    );
}
