//! Randomized rank of the rigidity matrix over a prime field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// The Mersenne prime 2^61 - 1.
pub const PRIME: u64 = (1 << 61) - 1;

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

pub(crate) fn inv(a: u64) -> u64 {
    pow(a, PRIME - 2)
}

/// Rank mod p of the `m x 2n` rigidity matrix at a placement whose
/// coordinates are drawn uniformly from the field with a generator seeded
/// by `seed`. Equals the generic rank with high probability; can only
/// undershoot.
pub fn matrix_rank_oracle(g: &Graph, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<[u64; 2]> = (0..g.n()).map(|_| [rng.gen_range(0..PRIME), rng.gen_range(0..PRIME)]).collect();
    rigidity_rank_mod_p(g, &coords)
}

/// Rank mod p of the rigidity matrix at the given coordinates (already
/// reduced into the field).
pub fn rigidity_rank_mod_p(g: &Graph, coords: &[[u64; 2]]) -> usize {
    let cols = 2 * g.n();
    let mut rows: Vec<Vec<u64>> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let mut row = vec![0u64; cols];
            for k in 0..2 {
                let d = sub(coords[u][k], coords[v][k]);
                row[2 * u + k] = d;
                row[2 * v + k] = sub(0, d);
            }
            row
        })
        .collect();
    rank_mod_p(&mut rows, cols)
}

fn rank_mod_p(rows: &mut [Vec<u64>], cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let scale = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = mul(*x, scale);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = sub(*x, mul(f, p));
            }
        }
        rank += 1;
    }
    rank
}
