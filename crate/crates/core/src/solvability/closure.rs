use std::collections::HashMap;
use std::sync::OnceLock;

use super::SolvabilityError;
use crate::graph::{Edge, Graph};
use crate::rigidity::{is_globally_rigid, is_rigid};

pub const MAX_CLOSURE_VERTICES: usize = 7;

/// Every member of the solvable family whose vertices lie in `{0, .., n-1}`.
///
/// Graphs are edge masks over the pairs of `K_n`. Seeds are the globally
/// rigid graphs on each vertex subset; the gluing operations are then
/// applied to every pair of members meeting in exactly two vertices until
/// nothing new appears.
#[derive(Debug, Clone)]
pub struct FamilyClosure {
    n: usize,
    pairs: Vec<Edge>,
    member: Vec<bool>,
}

impl FamilyClosure {
    pub fn build(n: usize) -> Result<FamilyClosure, SolvabilityError> {
        if n > MAX_CLOSURE_VERTICES {
            return Err(SolvabilityError::TooLarge { n, max: MAX_CLOSURE_VERTICES });
        }
        let pairs: Vec<Edge> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut fc = FamilyClosure { n, pairs, member: vec![false; 1 << (n * (n.max(1) - 1) / 2)] };
        let mut by_vertices: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut queue = Vec::new();
        let mut rigid_memo: HashMap<u32, bool> = HashMap::new();
        for mask in 1..fc.member.len() as u32 {
            if fc.is_seed(mask) {
                fc.member[mask as usize] = true;
                by_vertices.entry(fc.vertex_mask(mask)).or_default().push(mask);
                queue.push(mask);
            }
        }

        while let Some(g1) = queue.pop() {
            let v1 = fc.vertex_mask(g1);
            let partners: Vec<(u32, u32)> = by_vertices
                .iter()
                .filter(|(&v2, _)| (v1 & v2).count_ones() == 2)
                .flat_map(|(&v2, ms)| ms.iter().map(move |&g2| (g2, v2)))
                .collect();
            for (g2, v2) in partners {
                for out in fc.combine(g1, v1, g2, v2, &mut rigid_memo) {
                    if !fc.member[out as usize] {
                        fc.member[out as usize] = true;
                        by_vertices.entry(fc.vertex_mask(out)).or_default().push(out);
                        queue.push(out);
                    }
                }
            }
        }
        Ok(fc)
    }

    /// Closure for `n` vertices, built once per process.
    pub fn shared(n: usize) -> Result<&'static FamilyClosure, SolvabilityError> {
        static CACHE: [OnceLock<FamilyClosure>; MAX_CLOSURE_VERTICES + 1] = [const { OnceLock::new() }; MAX_CLOSURE_VERTICES + 1];
        let slot = CACHE.get(n).ok_or(SolvabilityError::TooLarge { n, max: MAX_CLOSURE_VERTICES })?;
        Ok(slot.get_or_init(|| FamilyClosure::build(n).expect("size checked")))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether `g` (on exactly the vertices `0..n`) belongs to the family.
    pub fn contains(&self, g: &Graph) -> bool {
        if g.n() != self.n {
            return false;
        }
        if g.n() == 1 {
            return true;
        }
        let mask = g.edges().iter().fold(0u32, |m, &(a, b)| m | 1 << self.pair_index(a, b));
        self.vertex_mask(mask).count_ones() as usize == self.n && self.member[mask as usize]
    }

    /// Number of members spanning all `n` vertices.
    pub fn spanning_members(&self) -> usize {
        let full = (1u32 << self.n) - 1;
        (0..self.member.len() as u32).filter(|&m| self.member[m as usize] && self.vertex_mask(m) == full).count()
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        // Row-major over a < b.
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    fn vertex_mask(&self, mask: u32) -> u32 {
        self.bits(mask).fold(0, |vm, (a, b)| vm | 1 << a | 1 << b)
    }

    fn bits(&self, mut mask: u32) -> impl Iterator<Item = Edge> + '_ {
        std::iter::from_fn(move || {
            (mask != 0).then(|| {
                let i = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                self.pairs[i]
            })
        })
    }

    fn to_graph(&self, mask: u32) -> Graph {
        let vm = self.vertex_mask(mask);
        let mut local = vec![usize::MAX; self.n];
        let mut k = 0;
        for (v, slot) in local.iter_mut().enumerate() {
            if vm >> v & 1 == 1 {
                *slot = k;
                k += 1;
            }
        }
        Graph::new(k, self.bits(mask).map(|(a, b)| (local[a], local[b]))).expect("mask is a simple graph")
    }

    /// Seeds are tested in increasing mask order. Adding an edge on the same
    /// vertex set preserves global rigidity, so a mask inherits seed status
    /// from any one-edge-smaller seed on the same vertices.
    fn is_seed(&self, mask: u32) -> bool {
        let vm = self.vertex_mask(mask);
        let mut rest = mask;
        while rest != 0 {
            let sub = mask & !(1 << rest.trailing_zeros());
            rest &= rest - 1;
            if self.member[sub as usize] && self.vertex_mask(sub) == vm {
                return true;
            }
        }
        let k = vm.count_ones();
        let m = mask.count_ones();
        // Cheap necessary conditions before the full test: K2/K3 are complete,
        // larger globally rigid graphs need 2k - 2 edges and minimum degree 3.
        if k <= 3 {
            return m == k * (k - 1) / 2;
        }
        if m < 2 * k - 2 {
            return false;
        }
        let mut degree = [0u8; MAX_CLOSURE_VERTICES];
        for (a, b) in self.bits(mask) {
            degree[a] += 1;
            degree[b] += 1;
        }
        if degree.iter().any(|&d| d == 1 || d == 2) {
            return false;
        }
        is_globally_rigid(&self.to_graph(mask))
    }

    /// Results of operations (a), (b) and (c) on a pair meeting in two vertices.
    fn combine(&self, g1: u32, v1: u32, g2: u32, v2: u32, rigid_memo: &mut HashMap<u32, bool>) -> Vec<u32> {
        if v1.count_ones() < 3 || v2.count_ones() < 3 {
            return Vec::new();
        }
        let shared = v1 & v2;
        let u = shared.trailing_zeros() as usize;
        let v = (shared & (shared - 1)).trailing_zeros() as usize;
        let e = 1u32 << self.pair_index(u, v);
        let mut out = vec![g1 | g2];
        let (in1, in2) = (g1 & e != 0, g2 & e != 0);
        if in1 {
            out.push((g1 & !e) | g2);
        }
        if in2 {
            out.push(g1 | (g2 & !e));
        }
        if in1 && in2 {
            let (r1, r2) = (g1 & !e, g2 & !e);
            let mut spans = |r: u32, vm: u32| {
                self.vertex_mask(r) == vm && *rigid_memo.entry(r).or_insert_with(|| is_rigid(&self.to_graph(r)))
            };
            if spans(r1, v1) && spans(r2, v2) {
                out.push(r1 | r2);
            }
        }
        out
    }
}

/// Membership of `g` in the solvable family, by forward closure.
pub fn f_closure_oracle(g: &Graph) -> Result<bool, SolvabilityError> {
    Ok(FamilyClosure::shared(g.n())?.contains(g))
}
