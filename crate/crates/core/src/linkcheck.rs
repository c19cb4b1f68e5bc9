//! Link of a vertex, built straight from a triangle presentation.
//!
//! The triples act as length-3 relators a_i a_j a_k, so around a vertex
//! of the complex each generator contributes an outgoing and an incoming
//! edge endpoint. The link is the bipartite graph with out_i ~ in_k
//! whenever some (i, j, k) is a triple. For genuine building quotients
//! this graph must be the incidence graph of the projective plane:
//! (q+1)-biregular with girth exactly 6.

use crate::graph::BipartiteGraph;
use crate::tripres::TrianglePres;

/// Bipartite link graph: left vertices out_i, right vertices in_k.
#[derive(Debug, Clone)]
pub struct LinkGraph {
    q: u64,
    v: u64,
    graph: BipartiteGraph,
}

impl LinkGraph {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }
}

/// Scans the full triple set once; edge (out_i, in_k) appears for each
/// triple (i, j, k), and condition 3 on the rotated pair (k, i) makes the
/// witnessing j unique, so the link has exactly v(q+1) edges.
pub fn build_link(t: &TrianglePres) -> LinkGraph {
    let v = t.v();
    let mut graph = BipartiteGraph::new(
        format!("link_q{}", t.q()),
        "out",
        "in",
        v as usize,
        v as usize,
    );
    for [i, _, k] in t.full() {
        graph.add_edge(i as usize, k as usize);
    }
    graph.finish();
    LinkGraph {
        q: t.q(),
        v,
        graph,
    }
}

/// Number of triples whose first coordinate is i: the triangles sharing
/// the edge labeled a_i, always q+1.
pub fn edge_triangle_count(t: &TrianglePres, i: u64) -> usize {
    t.full().iter().filter(|tr| tr[0] == i).count()
}

/// All 6-cycles of the link, in the graph module's canonical form.
pub fn six_cycles(link: &LinkGraph) -> Vec<[u32; 6]> {
    link.graph.six_cycles()
}

/// Checks the explicit isomorphism onto the plane's incidence graph:
/// out_i maps to point i and in_k to line alpha(k), so adjacency must
/// coincide with incidence everywhere.
pub fn matches_incidence_graph(link: &LinkGraph, t: &TrianglePres) -> bool {
    let v = link.v;
    let plane = t.alpha().plane();
    (0..v).all(|i| {
        (0..v).all(|k| {
            link.graph.has_edge(i as usize, k as usize)
                == plane.incident(i, t.alpha().of(k))
        })
    })
}
