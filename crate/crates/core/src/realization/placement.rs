use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Placement, RealizationError};
use crate::graph::{Graph, Vertex};
use crate::rigidity::{generic_rank, inv_mod_p, rigidity_rank_mod_p, PRIME};

/// Placement with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactPlacement {
    #[serde(serialize_with = "ser_rationals")]
    pub coords: Vec<[BigRational; 2]>,
}

fn ser_rationals<S: serde::Serializer>(coords: &[[BigRational; 2]], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(coords.len()))?;
    for [x, y] in coords {
        seq.serialize_element(&[x.to_string(), y.to_string()])?;
    }
    seq.end()
}

impl ExactPlacement {
    pub fn to_float(&self) -> Placement {
        Placement::new(self.coords.iter().map(|[x, y]| [to_f64(x), to_f64(y)]).collect())
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Standard-position placement with coordinates `c * sqrt(r)`: the rational
/// multipliers `coords` and the single radicand `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalPlacement {
    pub radicand: BigRational,
    pub coords: Vec<[BigRational; 2]>,
}

impl RadicalPlacement {
    /// Exact squared distance, which is rational.
    pub fn squared_distance(&self, a: Vertex, b: Vertex) -> BigRational {
        let dx = &self.coords[a][0] - &self.coords[b][0];
        let dy = &self.coords[a][1] - &self.coords[b][1];
        &self.radicand * (&dx * &dx + &dy * &dy)
    }

    pub fn to_float(&self) -> Placement {
        let root = to_f64(&self.radicand).sqrt();
        Placement::new(self.coords.iter().map(|[x, y]| [to_f64(x) * root, to_f64(y) * root]).collect())
    }
}

/// Seeded placement with random rational coordinates in `(-10, 10)`,
/// numerators and denominators above 2^62. Re-drawn until all coordinates
/// differ and the rigidity matrix reaches the generic rank (checked mod p,
/// which can only underestimate the rational rank).
pub fn random_generic_placement(g: &Graph, seed: u64) -> ExactPlacement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = generic_rank(g);
    loop {
        let mut coords = Vec::with_capacity(g.n());
        let mut residues = Vec::with_capacity(g.n());
        let mut ok = true;
        for _ in 0..g.n() {
            let mut point: [BigRational; 2] = [BigRational::zero(), BigRational::zero()];
            let mut res = [0u64; 2];
            for k in 0..2 {
                let den: u64 = rng.gen_range(1u64 << 62..1u64 << 63);
                let num: i128 = rng.gen_range(-10 * den as i128 + 1..10 * den as i128);
                let (dm, nm) = (den % PRIME, num.rem_euclid(PRIME as i128) as u64);
                if dm == 0 {
                    ok = false;
                }
                res[k] = ((nm as u128 * inv_mod_p(dm.max(1)) as u128) % PRIME as u128) as u64;
                point[k] = BigRational::new(BigInt::from(num), BigInt::from(den));
            }
            coords.push(point);
            residues.push(res);
        }
        let mut all: Vec<&BigRational> = coords.iter().flatten().collect();
        all.sort();
        ok &= all.windows(2).all(|w| w[0] != w[1]);
        if ok && rigidity_rank_mod_p(g, &residues) == target {
            return ExactPlacement { coords };
        }
    }
}

pub fn measure_lengths_exact(g: &Graph, p: &ExactPlacement) -> Result<Vec<BigRational>, RealizationError> {
    if p.coords.len() < g.n() {
        return Err(RealizationError::MissingCoordinate { have: p.coords.len(), need: g.n() });
    }
    Ok(g.edges()
        .iter()
        .map(|&(a, b)| {
            let dx = &p.coords[a][0] - &p.coords[b][0];
            let dy = &p.coords[a][1] - &p.coords[b][1];
            &dx * &dx + &dy * &dy
        })
        .collect())
}

/// Moves `v1` to the origin and `v2` onto the positive y-axis by a proper
/// rigid motion.
pub fn standard_position(p: &Placement, v1: Vertex, v2: Vertex) -> Result<Placement, RealizationError> {
    let n = p.coords.len();
    if v1 >= n || v2 >= n {
        return Err(RealizationError::MissingCoordinate { have: n, need: v1.max(v2) + 1 });
    }
    let [ox, oy] = p.coords[v1];
    let (x, y) = (p.coords[v2][0] - ox, p.coords[v2][1] - oy);
    let d0 = x.hypot(y);
    if d0 == 0.0 {
        return Err(RealizationError::Coincident(v1, v2));
    }
    let (c, s) = (y / d0, x / d0);
    let mut coords: Vec<[f64; 2]> = p
        .coords
        .iter()
        .map(|&[px, py]| {
            let (a, b) = (px - ox, py - oy);
            [a * c - b * s, a * s + b * c]
        })
        .collect();
    coords[v1] = [0.0, 0.0];
    coords[v2] = [0.0, d0];
    Ok(Placement::new(coords))
}

/// Exact form of `standard_position`: every coordinate becomes a rational
/// multiple of `sqrt(|p(v2) - p(v1)|^2)`.
pub fn standard_position_exact(p: &ExactPlacement, v1: Vertex, v2: Vertex) -> Result<RadicalPlacement, RealizationError> {
    let n = p.coords.len();
    if v1 >= n || v2 >= n {
        return Err(RealizationError::MissingCoordinate { have: n, need: v1.max(v2) + 1 });
    }
    let [ox, oy] = &p.coords[v1];
    let x = &p.coords[v2][0] - ox;
    let y = &p.coords[v2][1] - oy;
    let r = &x * &x + &y * &y;
    if r.is_zero() {
        return Err(RealizationError::Coincident(v1, v2));
    }
    let coords = p
        .coords
        .iter()
        .map(|[px, py]| {
            let (a, b) = (px - ox, py - oy);
            [(&a * &y - &b * &x) / &r, (&a * &x + &b * &y) / &r]
        })
        .collect();
    Ok(RadicalPlacement { radicand: r, coords })
}

/// The four placements `(±x, ±y)` of `q`, identity first.
pub fn sign_flips(q: &Placement) -> [Placement; 4] {
    let flip = |sx: f64, sy: f64| Placement::new(q.coords.iter().map(|&[x, y]| [sx * x, sy * y]).collect());
    [flip(1.0, 1.0), flip(-1.0, 1.0), flip(1.0, -1.0), flip(-1.0, -1.0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::realization::measure_lengths;

    #[test]
    fn generic_triangle() {
        let p = random_generic_placement(&complete(3), 1);
        let mut all: Vec<&BigRational> = p.coords.iter().flatten().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 6);
        let d = measure_lengths_exact(&complete(3), &p).unwrap();
        let (a, b, c) = (&d[0], &d[1], &d[2]);
        // Sixteen times the squared area, by Heron in squared lengths.
        let heron = BigRational::from_integer(2.into()) * (a * b + b * c + c * a) - (a * a + b * b + c * c);
        assert!(heron > BigRational::zero());
        assert_eq!(random_generic_placement(&complete(3), 1), p);
        assert_ne!(random_generic_placement(&complete(3), 2), p);
        assert_eq!(random_generic_placement(&complete(1), 9).coords.len(), 1);
    }

    #[test]
    fn standard_position_of_a_345_frame() {
        let p = Placement::new(vec![[0.0, 0.0], [3.0, 4.0], [1.0, 0.0]]);
        let q = standard_position(&p, 0, 1).unwrap();
        assert_eq!(q.coords[1], [0.0, 5.0]);
        assert!((q.coords[2][0] - 0.8).abs() < 1e-15 && (q.coords[2][1] - 0.6).abs() < 1e-15);
        assert_eq!(standard_position(&q, 0, 1).unwrap(), q);
        assert_eq!(standard_position(&p, 0, 0), Err(RealizationError::Coincident(0, 0)));
    }

    #[test]
    fn exact_standard_position_keeps_distances() {
        let g = complete(5);
        let p = random_generic_placement(&g, 4);
        let q = standard_position_exact(&p, 2, 4).unwrap();
        assert!(q.coords[2][0].is_zero() && q.coords[2][1].is_zero());
        assert!(q.coords[4][0].is_zero());
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            assert_eq!(q.squared_distance(a, b), measure_lengths_exact(&g, &p).unwrap()[i]);
        }
        let qf = q.to_float();
        let pf = p.to_float();
        let (dp, dq) = (measure_lengths(&g, &pf).unwrap(), measure_lengths(&g, &qf).unwrap());
        assert!(dp.max_relative_residual(&dq) < 1e-12);
    }

    #[test]
    fn flips_are_congruent() {
        let p = random_generic_placement(&complete(4), 3).to_float();
        let q = standard_position(&p, 0, 1).unwrap();
        let d = measure_lengths(&complete(4), &q).unwrap();
        for f in sign_flips(&q) {
            assert!(d.max_relative_residual(&measure_lengths(&complete(4), &f).unwrap()) < 1e-12);
        }
    }
}
