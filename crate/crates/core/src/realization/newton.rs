use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{measure_lengths, standard_position, EdgeLengths, Placement, RealizationError};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Target for the largest `|measured - d| / d`.
    pub tolerance: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { max_iterations: 200, tolerance: 1e-10 }
    }
}

/// Jacobian of the squared-length map: row `ab` holds `2(p_a - p_b)` in the
/// columns of `a` and its negative in those of `b`.
pub fn rigidity_jacobian(g: &Graph, p: &Placement) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(g.m(), 2 * g.n());
    for (row, &(a, b)) in g.edges().iter().enumerate() {
        for k in 0..2 {
            let diff = 2.0 * (p.coords[a][k] - p.coords[b][k]);
            j[(row, 2 * a + k)] = diff;
            j[(row, 2 * b + k)] = -diff;
        }
    }
    j
}

/// Per-edge weights `1 / max(d_e, floor)` so that residuals are relative.
fn weights(d: &[f64]) -> Vec<f64> {
    let floor = d.iter().copied().fold(0.0, f64::max).max(1.0) * 1e-12;
    d.iter().map(|&x| 1.0 / x.max(floor)).collect()
}

fn relative_residual(g: &Graph, p: &Placement, d: &[f64], w: &[f64]) -> (DVector<f64>, f64) {
    let r = DVector::from_iterator(
        g.m(),
        g.edges().iter().zip(d).zip(w).map(|((&(a, b), &want), &wt)| (p.squared_distance(a, b) - want) * wt),
    );
    let max = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (r, max)
}

/// Damped Gauss–Newton on `d_G(p) = d`, starting from `p0` moved into
/// standard position on the first edge (its ends stay pinned there). The
/// result is in that frame.
pub fn newton_refine(g: &Graph, d: &EdgeLengths, p0: &Placement) -> Result<Placement, RealizationError> {
    newton_refine_with(g, d, p0, NewtonOptions::default())
}

pub fn newton_refine_with(
    g: &Graph,
    d: &EdgeLengths,
    p0: &Placement,
    opts: NewtonOptions,
) -> Result<Placement, RealizationError> {
    let d = d.aligned_to(g)?.d;
    measure_lengths(g, p0)?;
    let Some(&(v1, v2)) = g.edges().first() else {
        return Ok(p0.clone());
    };
    let mut p = standard_position(p0, v1, v2)?;
    // Unknowns: every coordinate except both of v1 and the x of v2.
    let free: Vec<usize> = (0..2 * g.n()).filter(|&c| c != 2 * v1 && c != 2 * v1 + 1 && c != 2 * v2).collect();
    let w = weights(&d);
    let (mut r, mut res) = relative_residual(g, &p, &d, &w);
    let mut lambda = 1e-3;
    for _ in 0..opts.max_iterations {
        if res < opts.tolerance {
            return Ok(p);
        }
        let full = rigidity_jacobian(g, &p);
        let mut j = DMatrix::zeros(g.m(), free.len());
        for (col, &c) in free.iter().enumerate() {
            for row in 0..g.m() {
                j[(row, col)] = full[(row, c)] * w[row];
            }
        }
        let jt = j.transpose();
        let jtj = &jt * &j;
        let grad = &jt * &r;
        let cost = r.norm_squared();
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for i in 0..free.len() {
                a[(i, i)] += lambda * (jtj[(i, i)] + 1e-9);
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let step = chol.solve(&(-&grad));
            let mut trial = p.clone();
            for (col, &c) in free.iter().enumerate() {
                trial.coords[c / 2][c % 2] += step[col];
            }
            let (tr, tres) = relative_residual(g, &trial, &d, &w);
            if tr.norm_squared() < cost {
                p = trial;
                r = tr;
                res = tres;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    if res < opts.tolerance {
        Ok(p)
    } else {
        Err(RealizationError::NotConverged { residual: res })
    }
}

/// Seeded random start in a box scaled to the lengths.
pub(super) fn random_start(n: usize, d: &[f64], rng: &mut ChaCha8Rng) -> Placement {
    let scale = d.iter().copied().fold(0.0, f64::max).sqrt().max(1e-9);
    Placement::new((0..n).map(|_| [rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)]).collect())
}

/// `newton_refine` from up to `restarts` seeded random starts; the first
/// success wins.
pub fn newton_solve(g: &Graph, d: &EdgeLengths, seed: u64, restarts: usize) -> Result<Placement, RealizationError> {
    let mut found = newton_candidates(g, d, seed, 1, restarts)?;
    match found.pop() {
        Some(p) => Ok(p),
        None => Err(RealizationError::Inconsistent(format!("no start out of {restarts} converged"))),
    }
}

/// Up to `want` pairwise non-congruent solutions from up to `restarts` starts.
pub(super) fn newton_candidates(
    g: &Graph,
    d: &EdgeLengths,
    seed: u64,
    want: usize,
    restarts: usize,
) -> Result<Vec<Placement>, RealizationError> {
    let d = d.aligned_to(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Placement> = Vec::new();
    for _ in 0..restarts {
        let start = random_start(g.n(), &d.d, &mut rng);
        let Ok(p) = newton_refine(g, &d, &start) else { continue };
        if !out.iter().any(|q| congruent(q, &p, 1e-6)) {
            out.push(p);
            if out.len() >= want {
                break;
            }
        }
    }
    Ok(out)
}

/// All pairwise squared distances agree to relative tolerance `tol`.
pub(super) fn congruent(p: &Placement, q: &Placement, tol: f64) -> bool {
    let n = p.len();
    let scale = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| p.squared_distance(a, b)).fold(0.0, f64::max);
    (0..n).all(|a| {
        (a + 1..n).all(|b| (p.squared_distance(a, b) - q.squared_distance(a, b)).abs() <= tol * scale.max(1e-300))
    })
}
