//! Small bipartite graph structure shared by the plane incidence graph and
//! the presentation link graph: degree checks, exact girth, canonical 6-cycle
//! enumeration, DOT and edge-list export.

use std::collections::VecDeque;

/// Undirected bipartite graph. Left and right vertices are indexed from 0
/// in their own ranges; label prefixes name them in exports.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    name: String,
    left_label: String,
    right_label: String,
    adj_left: Vec<Vec<u32>>,
    adj_right: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    pub fn new(
        name: impl Into<String>,
        left_label: impl Into<String>,
        right_label: impl Into<String>,
        left_count: usize,
        right_count: usize,
    ) -> Self {
        BipartiteGraph {
            name: name.into(),
            left_label: left_label.into(),
            right_label: right_label.into(),
            adj_left: vec![Vec::new(); left_count],
            adj_right: vec![Vec::new(); right_count],
        }
    }

    pub fn add_edge(&mut self, l: usize, r: usize) {
        self.adj_left[l].push(r as u32);
        self.adj_right[r].push(l as u32);
    }

    /// Sorts and deduplicates adjacency lists; call once after construction.
    pub fn finish(&mut self) {
        for list in self.adj_left.iter_mut().chain(self.adj_right.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
    }

    pub fn left_count(&self) -> usize {
        self.adj_left.len()
    }
    pub fn right_count(&self) -> usize {
        self.adj_right.len()
    }
    pub fn vertex_count(&self) -> usize {
        self.left_count() + self.right_count()
    }
    pub fn edge_count(&self) -> usize {
        self.adj_left.iter().map(Vec::len).sum()
    }
    pub fn neighbors_of_left(&self, l: usize) -> &[u32] {
        &self.adj_left[l]
    }
    pub fn neighbors_of_right(&self, r: usize) -> &[u32] {
        &self.adj_right[r]
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.adj_left[l].binary_search(&(r as u32)).is_ok()
    }

    /// Every vertex on both sides has degree exactly d.
    pub fn is_biregular(&self, d: usize) -> bool {
        self.adj_left.iter().all(|a| a.len() == d) && self.adj_right.iter().all(|a| a.len() == d)
    }

    fn neighbors_flat(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let left = self.left_count();
        let (list, offset): (&[u32], usize) = if v < left {
            (&self.adj_left[v], left)
        } else {
            (&self.adj_right[v - left], 0)
        };
        list.iter().map(move |&w| w as usize + offset)
    }

    /// Exact girth by BFS from every vertex; None when the graph is a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            parent.iter_mut().for_each(|p| *p = usize::MAX);
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    // No shorter cycle can be found deeper than b/2.
                    if dist[u] * 2 >= b {
                        continue;
                    }
                }
                for w in self.neighbors_flat(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w && parent[w] != u {
                        let len = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// All 6-cycles [l0, r0, l1, r1, l2, r2] (alternating sides), each
    /// geometric cycle exactly once: l0 is the least left vertex on the cycle
    /// and r0 < r2 fixes the direction.
    pub fn six_cycles(&self) -> Vec<[u32; 6]> {
        let mut out = Vec::new();
        for l0 in 0..self.left_count() as u32 {
            for &r0 in &self.adj_left[l0 as usize] {
                for &l1 in &self.adj_right[r0 as usize] {
                    if l1 <= l0 {
                        continue;
                    }
                    for &r1 in &self.adj_left[l1 as usize] {
                        if r1 == r0 {
                            continue;
                        }
                        for &l2 in &self.adj_right[r1 as usize] {
                            if l2 <= l0 || l2 == l1 {
                                continue;
                            }
                            for &r2 in &self.adj_left[l2 as usize] {
                                if r2 == r1 || r2 <= r0 {
                                    continue;
                                }
                                if self.has_edge(l0 as usize, r2 as usize) {
                                    out.push([l0, r0, l1, r1, l2, r2]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn left_name(&self, l: u32) -> String {
        format!("{}{}", self.left_label, l)
    }
    fn right_name(&self, r: u32) -> String {
        format!("{}{}", self.right_label, r)
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("graph {} {{\n", self.name);
        for (l, nbrs) in self.adj_left.iter().enumerate() {
            for &r in nbrs {
                s.push_str(&format!(
                    "  {} -- {};\n",
                    self.left_name(l as u32),
                    self.right_name(r)
                ));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (l, nbrs) in self.adj_left.iter().enumerate() {
            for &r in nbrs {
                s.push_str(&format!(
                    "{} {}\n",
                    self.left_name(l as u32),
                    self.right_name(r)
                ));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// C6 as a bipartite graph: lefts {0,1,2}, rights {0,1,2}.
    fn hexagon() -> BipartiteGraph {
        let mut g = BipartiteGraph::new("hex", "a", "b", 3, 3);
        for (l, r) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)] {
            g.add_edge(l, r);
        }
        g.finish();
        g
    }

    #[test]
    fn hexagon_girth_and_cycles() {
        let g = hexagon();
        assert_eq!(g.girth(), Some(6));
        let cycles = g.six_cycles();
        assert_eq!(cycles.len(), 1);
        assert!(g.is_biregular(2));
    }

    #[test]
    fn four_cycle_girth() {
        let mut g = BipartiteGraph::new("c4", "a", "b", 2, 2);
        for (l, r) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            g.add_edge(l, r);
        }
        g.finish();
        assert_eq!(g.girth(), Some(4));
        assert!(g.six_cycles().is_empty());
    }

    #[test]
    fn tree_has_no_girth() {
        let mut g = BipartiteGraph::new("path", "a", "b", 2, 1);
        g.add_edge(0, 0);
        g.add_edge(1, 0);
        g.finish();
        assert_eq!(g.girth(), None);
    }

    #[test]
    fn exports_are_deterministic() {
        let g = hexagon();
        let dot = g.to_dot();
        assert!(dot.starts_with("graph hex {"));
        assert!(dot.contains("a0 -- b0;"));
        assert_eq!(g.to_edge_list().lines().count(), 6);
    }
}
