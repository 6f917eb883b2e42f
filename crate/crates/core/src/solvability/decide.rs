use std::collections::HashMap;

use super::{CertNode, Decision, Mode, SolvabilityError, Step, Verdict};
use crate::connectivity::{components_avoiding, enumerate_2_separations, is_k_connected, separating_cut_vertices, TwoSeparation};
use crate::decomposition::to_host;
use crate::graph::{edge, Edge, Graph, Piece, Vertex};
use crate::planarity::is_planar;
use crate::rigidity::{is_rigid, redundancy, RedundancyReport};

/// How a node is split. Indices point into the node's separation list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Plan {
    Edge(usize),
    Rigid(usize),
    /// `nonrigid` is 1 or 2, the side that is not rigid.
    Triangle { index: usize, nonrigid: u8, w: Vertex },
    Stuck { index: usize, nonrigid: u8 },
}

/// A node graph in host ids together with its separations.
pub(super) struct Node {
    pub seps: Vec<TwoSeparation>,
    rigid_sides: Vec<(bool, bool)>,
}

impl Node {
    /// `edges` must span a rigid, 2-connected graph on at least four vertices.
    pub fn new(edges: &[Edge]) -> Node {
        let piece = Piece::from_host_edges(edges, &[]);
        let seps: Vec<TwoSeparation> = enumerate_2_separations(&piece.graph)
            .expect("rigid graphs on 3+ vertices are 2-connected")
            .iter()
            .map(|s| to_host(s, &piece.origin))
            .collect();
        let rigid_sides =
            seps.iter().map(|s| (rigid_edges(&s.side1), rigid_edges(&s.side2))).collect();
        Node { seps, rigid_sides }
    }

    fn nonrigid_side(&self, i: usize) -> Option<u8> {
        match self.rigid_sides[i] {
            (false, _) => Some(1),
            (true, false) => Some(2),
            (true, true) => None,
        }
    }

    fn cut_vertex(&self, i: usize, side: u8) -> Option<Vertex> {
        let s = &self.seps[i];
        let h = Piece::from_host_edges(side_edges(s, side), &[]);
        let (u, v) = s.separator;
        let local = |x| h.local_of(x).expect("separator lies on both sides");
        separating_cut_vertices(&h.graph, local(u), local(v))
            .expect("separator vertices lie on the side")
            .first()
            .map(|&w| h.origin[w])
    }

    /// The plan for separation `i`, or `None` when it supports no sound split.
    pub fn plan_for(&self, i: usize) -> Option<Plan> {
        if self.seps[i].separator_is_edge() {
            return Some(Plan::Edge(i));
        }
        match self.nonrigid_side(i) {
            None => Some(Plan::Rigid(i)),
            Some(side) => self.cut_vertex(i, side).map(|w| Plan::Triangle { index: i, nonrigid: side, w }),
        }
    }

    /// Edge separators first, then rigid pairs, then the separation with the
    /// smallest non-rigid side.
    pub fn default_plan(&self) -> Plan {
        if let Some(i) = self.seps.iter().position(|s| s.separator_is_edge()) {
            return Plan::Edge(i);
        }
        if let Some(i) = (0..self.seps.len()).find(|&i| self.nonrigid_side(i).is_none()) {
            return Plan::Rigid(i);
        }
        let (index, nonrigid) = (0..self.seps.len())
            .map(|i| (i, self.nonrigid_side(i).expect("no rigid pair left")))
            .min_by_key(|&(i, side)| {
                let s = &self.seps[i];
                let vs = if side == 1 { &s.vertex_side1 } else { &s.vertex_side2 };
                (vs.len(), s.separator)
            })
            .expect("a graph that is not 3-connected has a 2-separation");
        match self.cut_vertex(index, nonrigid) {
            Some(w) => Plan::Triangle { index, nonrigid, w },
            None => Plan::Stuck { index, nonrigid },
        }
    }
}

fn side_edges(s: &TwoSeparation, side: u8) -> &[Edge] {
    if side == 1 {
        &s.side1
    } else {
        &s.side2
    }
}

pub(super) fn rigid_edges(edges: &[Edge]) -> bool {
    is_rigid(&Piece::from_host_edges(edges, &[]).graph)
}

pub(super) fn sorted(mut es: Vec<Edge>) -> Vec<Edge> {
    es.sort_unstable();
    es.dedup();
    es
}

pub(super) fn vertices_of(edges: &[Edge]) -> Vec<Vertex> {
    let mut vs: Vec<Vertex> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Splits `H1` at `w` into the part through `u` and the part through `v`.
pub(super) fn split_at_cut_vertex(h1: &[Edge], u: Vertex, w: Vertex) -> (Vec<Edge>, Vec<Edge>) {
    let piece = Piece::from_host_edges(h1, &[]);
    let local = |x| piece.local_of(x).expect("vertex of H1");
    let mut removed = vec![false; piece.graph.n()];
    removed[local(w)] = true;
    let comps = components_avoiding(&piece.graph, &removed);
    let with_u = comps.iter().find(|c| c.contains(&local(u))).expect("u lies in H1 - w");
    let mut part_u = Vec::new();
    let mut part_v = Vec::new();
    for &(a, b) in h1 {
        let in_u = |x: Vertex| x == w || with_u.contains(&local(x));
        if in_u(a) && in_u(b) {
            part_u.push((a, b));
        } else {
            part_v.push((a, b));
        }
    }
    (sorted(part_u), sorted(part_v))
}

/// Redundancy report of the graph spanned by `edges`, in host ids.
pub(super) fn host_redundancy(edges: &[Edge]) -> RedundancyReport {
    let piece = Piece::from_host_edges(edges, &[]);
    let r = redundancy(&piece.graph);
    let host = |es: &[Edge]| sorted(es.iter().map(|&(a, b)| edge(piece.origin[a], piece.origin[b])).collect());
    RedundancyReport {
        rank: r.rank,
        redundant_edges: host(&r.redundant_edges),
        components: r.components.iter().map(|c| host(c)).collect(),
        trivial_components: host(&r.trivial_components),
    }
}

/// Builds a node's step from its solved children.
type MakeStep = Box<dyn FnOnce(Vec<CertNode>) -> Step>;

struct Decider {
    memo: HashMap<Vec<Edge>, CertNode>,
}

impl Decider {
    fn solve(&mut self, edges: Vec<Edge>, forced: Option<usize>) -> Result<CertNode, SolvabilityError> {
        if forced.is_none() {
            if let Some(hit) = self.memo.get(&edges) {
                return Ok(hit.clone());
            }
        }
        let node = self.solve_fresh(&edges, forced)?;
        if forced.is_none() {
            self.memo.insert(edges, node.clone());
        }
        Ok(node)
    }

    fn solve_fresh(&mut self, edges: &[Edge], forced: Option<usize>) -> Result<CertNode, SolvabilityError> {
        let vertices = vertices_of(edges);
        let leaf = |verdict, step| CertNode { vertices: vertices.clone(), edges: edges.to_vec(), verdict, step };
        if vertices.len() <= 3 && forced.is_none() {
            return Ok(leaf(Verdict::Yes, Step::SmallLeaf));
        }
        let g = Piece::from_host_edges(edges, &[]).graph;
        if is_k_connected(&g, 3) && forced.is_none() {
            return Ok(if redundancy(&g).trivial_components.is_empty() {
                leaf(Verdict::Yes, Step::GloballyRigidLeaf)
            } else {
                leaf(Verdict::No, Step::NotRedundantlyRigid { redundancy: host_redundancy(edges) })
            });
        }

        let node = Node::new(edges);
        let plan = match forced {
            Some(i) => i
                .lt(&node.seps.len())
                .then(|| node.plan_for(i))
                .flatten()
                .ok_or(SolvabilityError::InadmissibleSplit(i))?,
            None => node.default_plan(),
        };
        let with_uv = |es: &[Edge], uv: Edge| sorted(es.iter().copied().chain([uv]).collect());
        let (parts, make): (Vec<Vec<Edge>>, MakeStep) = match plan {
            Plan::Edge(i) => {
                let s = &node.seps[i];
                let uv = s.separator;
                (vec![sorted(s.side1.clone()), with_uv(&s.side2, uv)], Box::new(move |children| Step::EdgeSplit { separator: uv, children }))
            }
            Plan::Rigid(i) => {
                let s = &node.seps[i];
                let uv = s.separator;
                (vec![with_uv(&s.side1, uv), with_uv(&s.side2, uv)], Box::new(move |children| Step::RigidSplit { separator: uv, children }))
            }
            Plan::Triangle { index, nonrigid, w } => {
                let s = &node.seps[index];
                let (u, v) = s.separator;
                let (h1u, h1v) = split_at_cut_vertex(side_edges(s, nonrigid), u, w);
                let h2 = sorted(side_edges(s, 3 - nonrigid).to_vec());
                (vec![h1u, h1v, h2], Box::new(move |children| Step::TriangleSplit { u, v, w, children }))
            }
            Plan::Stuck { index, nonrigid } => {
                let s = &node.seps[index];
                let side = if nonrigid == 1 { &s.vertex_side1 } else { &s.vertex_side2 };
                return Ok(leaf(Verdict::No, Step::Stuck { separator: s.separator, nonrigid_side: side.clone() }));
            }
        };
        let mut children = Vec::with_capacity(parts.len());
        let mut verdict = Verdict::Yes;
        for part in parts {
            if !rigid_edges(&part) {
                return Err(SolvabilityError::TheoryViolation(format!("split part {part:?} is not rigid")));
            }
            let child = self.solve(part, None)?;
            verdict = verdict.and(child.verdict);
            children.push(child);
        }
        Ok(CertNode { vertices, edges: edges.to_vec(), verdict, step: make(children) })
    }
}

fn check_input(g: &Graph) -> Result<(), SolvabilityError> {
    if g.n() == 0 {
        return Err(SolvabilityError::Empty);
    }
    if !is_rigid(g) {
        return Err(SolvabilityError::NotRigid);
    }
    Ok(())
}

fn run(g: &Graph, forced: Option<usize>) -> Result<Decision, SolvabilityError> {
    check_input(g)?;
    let certificate = if g.n() == 1 {
        CertNode { vertices: vec![0], edges: vec![], verdict: Verdict::Yes, step: Step::SmallLeaf }
    } else {
        Decider { memo: HashMap::new() }.solve(g.sorted_edges(), forced)?
    };
    // Split parts of a planar graph stay planar, so planarity of the input
    // settles the mode for the whole tree.
    let mode = if is_planar(g) { Mode::Exact } else { Mode::Conjectural };
    let witness = certificate.first_failure().cloned();
    Ok(Decision { verdict: certificate.verdict, mode, certificate, witness })
}

pub fn decide_solvability(g: &Graph) -> Result<Decision, SolvabilityError> {
    run(g, None)
}

/// Indices into `enumerate_2_separations(g)` at which the recursion may
/// soundly start. Empty for 3-connected graphs and graphs on at most three
/// vertices.
pub fn admissible_first_splits(g: &Graph) -> Result<Vec<usize>, SolvabilityError> {
    check_input(g)?;
    if g.n() <= 3 || is_k_connected(g, 3) {
        return Ok(Vec::new());
    }
    let node = Node::new(&g.sorted_edges());
    Ok((0..node.seps.len()).filter(|&i| node.plan_for(i).is_some()).collect())
}

/// Like `decide_solvability`, but the root is split at separation `index`
/// of `enumerate_2_separations(g)`.
pub fn decide_with_first_split(g: &Graph, index: usize) -> Result<Decision, SolvabilityError> {
    check_input(g)?;
    if g.n() <= 3 || is_k_connected(g, 3) {
        return Err(SolvabilityError::InadmissibleSplit(index));
    }
    run(g, Some(index))
}
