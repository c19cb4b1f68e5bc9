//! The cyclic projective plane of a perfect difference set: points are Z/vZ,
//! line i is the translate i + D, and x lies on line i iff x - i ∈ D. Affine
//! maps of the point space give the plane's labeled collineations and its
//! correlations (incidence-reversing maps into the plane of cD).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::pds::{gcd, DiffSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPlane {
    base: DiffSet,
}

impl CyclicPlane {
    pub fn q(&self) -> u64 {
        self.base.q()
    }
    pub fn v(&self) -> u64 {
        self.base.v()
    }
    pub fn base(&self) -> &DiffSet {
        &self.base
    }

    /// x lies on line i iff x - i ∈ D.
    pub fn incident(&self, point: u64, line: u64) -> bool {
        self.base.contains((point + self.v() - line % self.v()) % self.v())
    }

    /// Point set of line i, sorted.
    pub fn line(&self, i: u64) -> Vec<u64> {
        let v = self.v();
        let mut pts: Vec<u64> = self.base.elems().iter().map(|&d| (d + i) % v).collect();
        pts.sort_unstable();
        pts
    }

    /// Indices of the q+1 lines through a point, ascending.
    pub fn lines_through(&self, point: u64) -> Vec<u64> {
        (0..self.v()).filter(|&i| self.incident(point, i)).collect()
    }

    /// The line index whose point set equals `pts`, if any.
    pub fn line_index_of(&self, pts: &[u64]) -> Option<u64> {
        let mut sorted = pts.to_vec();
        sorted.sort_unstable();
        (0..self.v()).find(|&i| self.line(i) == sorted)
    }
}

/// Witnesses from the exhaustive axiom check.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneAxioms {
    pub q: u64,
    pub v: u64,
    /// Four points, no three collinear.
    pub quadrilateral: [u64; 4],
    pub line_size: u64,
    pub point_degree: u64,
}

/// Builds the plane and exhaustively checks: two distinct points lie on
/// exactly one common line, two distinct lines meet in exactly one point,
/// and a four-point quadrilateral exists (no three on a line).
pub fn build_plane(d: &DiffSet) -> Result<CyclicPlane> {
    let plane = CyclicPlane { base: d.clone() };
    check_axioms(&plane)?;
    Ok(plane)
}

pub fn check_axioms(plane: &CyclicPlane) -> Result<PlaneAxioms> {
    let v = plane.v() as usize;
    let q = plane.q();
    // Incidence matrix point x line.
    let mut inc = vec![false; v * v];
    for x in 0..v {
        for i in 0..v {
            inc[x * v + i] = plane.incident(x as u64, i as u64);
        }
    }
    for x in 0..v {
        let deg = (0..v).filter(|&i| inc[x * v + i]).count() as u64;
        if deg != q + 1 {
            return Err(Error::Internal(format!("point {x} lies on {deg} lines")));
        }
    }
    for i in 0..v {
        let size = (0..v).filter(|&x| inc[x * v + i]).count() as u64;
        if size != q + 1 {
            return Err(Error::Internal(format!("line {i} has {size} points")));
        }
    }
    for x in 0..v {
        for y in x + 1..v {
            let common = (0..v).filter(|&i| inc[x * v + i] && inc[y * v + i]).count();
            if common != 1 {
                return Err(Error::Internal(format!(
                    "points {x}, {y} lie on {common} common lines"
                )));
            }
        }
    }
    for i in 0..v {
        for j in i + 1..v {
            let common = (0..v).filter(|&x| inc[x * v + i] && inc[x * v + j]).count();
            if common != 1 {
                return Err(Error::Internal(format!(
                    "lines {i}, {j} meet in {common} points"
                )));
            }
        }
    }
    let quadrilateral = find_quadrilateral(plane)?;
    Ok(PlaneAxioms {
        q,
        v: plane.v(),
        quadrilateral,
        line_size: q + 1,
        point_degree: q + 1,
    })
}

/// First four points (greedy) with no three collinear.
fn find_quadrilateral(plane: &CyclicPlane) -> Result<[u64; 4]> {
    let v = plane.v();
    let collinear = |a: u64, b: u64, c: u64| -> bool {
        (0..v).any(|i| plane.incident(a, i) && plane.incident(b, i) && plane.incident(c, i))
    };
    let (p1, p2) = (0u64, 1u64);
    let p3 = (2..v)
        .find(|&c| !collinear(p1, p2, c))
        .ok_or_else(|| Error::Internal("no point off the first line".into()))?;
    let p4 = (2..v)
        .find(|&d| {
            d != p3 && !collinear(p1, p2, d) && !collinear(p1, p3, d) && !collinear(p2, p3, d)
        })
        .ok_or_else(|| Error::Internal("no fourth quadrilateral point".into()))?;
    Ok([p1, p2, p3, p4])
}

/// Bipartite point/line incidence graph: left = points, right = line indices.
pub fn incidence_graph(plane: &CyclicPlane) -> BipartiteGraph {
    let v = plane.v() as usize;
    let mut g = BipartiteGraph::new(format!("incidence_q{}", plane.q()), "p", "l", v, v);
    for x in 0..v {
        for i in 0..v {
            if plane.incident(x as u64, i as u64) {
                g.add_edge(x, i);
            }
        }
    }
    g.finish();
    g
}

/// Affine maps of the labeled plane. A collineation applies x ↦ u·x + a to
/// points and the same formula to line indices. A correlation sends point x
/// to the line indexed a - c·x and line j to the point a - c·j of the target
/// plane, whose base line is cD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlaneMap {
    Collineation { u: u64, a: u64 },
    Correlation { c: u64, a: u64 },
}

impl PlaneMap {
    pub fn collineation(u: u64, a: u64) -> Self {
        PlaneMap::Collineation { u, a }
    }
    pub fn correlation(c: u64, a: u64) -> Self {
        PlaneMap::Correlation { c, a }
    }
}

/// True iff the map is a collineation of the labeled plane: incidence of
/// (x, j) matches incidence of (u·x+a, u·j+a) for every pair, both ways.
/// A correlation variant is not a collineation and returns false.
pub fn check_collineation(plane: &CyclicPlane, map: &PlaneMap) -> bool {
    let &PlaneMap::Collineation { u, a } = map else {
        return false;
    };
    let v = plane.v();
    if gcd(u, v) != 1 {
        return false;
    }
    for x in 0..v {
        for j in 0..v {
            let img_x = (u * x + a) % v;
            let img_j = (u * j + a) % v;
            if plane.incident(x, j) != plane.incident(img_x, img_j) {
                return false;
            }
        }
    }
    true
}

/// The base line of the correlation's target plane.
pub fn correlation_target(plane: &CyclicPlane, c: u64) -> DiffSet {
    plane.base().scale(c)
}

/// True iff the map reverses incidence into the plane of cD: x on line j
/// exactly when the image point a - c·j lies on the image line a - c·x there.
pub fn check_correlation(plane: &CyclicPlane, map: &PlaneMap) -> bool {
    let &PlaneMap::Correlation { c, a } = map else {
        return false;
    };
    let v = plane.v();
    if gcd(c, v) != 1 {
        return false;
    }
    let target = correlation_target(plane, c);
    let target_incident =
        |point: u64, line: u64| target.contains((point + v - line % v) % v);
    for x in 0..v {
        for j in 0..v {
            let img_line = (a + v - (c * x) % v) % v;
            let img_point = (a + v - (c * j) % v) % v;
            if plane.incident(x, j) != target_incident(img_point, img_line) {
                return false;
            }
        }
    }
    true
}

/// Correlation x ↦ line(-c·x) of the plane of cD, verified exhaustively.
/// Valid for every unit c; a non-unit is rejected.
pub fn build_correlation(plane: &CyclicPlane, c: u64) -> Result<PlaneMap> {
    if gcd(c, plane.v()) != 1 {
        return Err(Error::InvalidCorrelation {
            c,
            reason: format!("gcd({c}, {}) > 1", plane.v()),
        });
    }
    let map = PlaneMap::correlation(c, 0);
    if !check_correlation(plane, &map) {
        return Err(Error::InvalidCorrelation {
            c,
            reason: "incidence reversal failed".into(),
        });
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pds::multiplier_report;

    fn ds(q: u64, elems: &[u64]) -> DiffSet {
        DiffSet::new(q, elems).unwrap()
    }

    #[test]
    fn lines_of_the_q2_plane() {
        let plane = build_plane(&ds(2, &[1, 2, 4])).unwrap();
        assert_eq!(plane.line(3), vec![0, 4, 5]);
        assert_eq!(plane.line(0), vec![1, 2, 4]);
        assert_eq!(plane.lines_through(0).len(), 3);
        assert_eq!(plane.line_index_of(&[0, 4, 5]), Some(3));
        assert_eq!(plane.line_index_of(&[0, 1, 2]), None);
    }

    #[test]
    fn axioms_hold_for_small_orders() {
        for (q, elems) in [
            (2u64, vec![1u64, 2, 4]),
            (3, vec![0, 1, 3, 9]),
            (4, vec![0, 1, 4, 14, 16]),
        ] {
            let plane = build_plane(&ds(q, &elems)).unwrap();
            let report = check_axioms(&plane).unwrap();
            assert_eq!(report.line_size, q + 1);
            let quad = report.quadrilateral;
            assert_eq!(
                quad.iter().collect::<std::collections::BTreeSet<_>>().len(),
                4
            );
        }
    }

    #[test]
    fn incidence_graph_shape() {
        let plane = build_plane(&ds(2, &[1, 2, 4])).unwrap();
        let g = incidence_graph(&plane);
        assert_eq!(g.vertex_count(), 14);
        assert_eq!(g.edge_count(), 21);
        assert!(g.is_biregular(3));
        assert_eq!(g.girth(), Some(6));
        assert_eq!(g.six_cycles().len(), 28);
    }

    #[test]
    fn incidence_graph_girth_q3() {
        let plane = build_plane(&ds(3, &[0, 1, 3, 9])).unwrap();
        let g = incidence_graph(&plane);
        assert_eq!(g.vertex_count(), 26);
        assert!(g.is_biregular(4));
        assert_eq!(g.girth(), Some(6));
    }

    #[test]
    fn shift_is_a_collineation() {
        let plane = build_plane(&ds(2, &[1, 2, 4])).unwrap();
        assert!(check_collineation(&plane, &PlaneMap::collineation(1, 1)));
    }

    #[test]
    fn fixing_multiplier_is_a_collineation() {
        let plane = build_plane(&ds(2, &[1, 2, 4])).unwrap();
        for u in [2u64, 4] {
            assert!(check_collineation(&plane, &PlaneMap::collineation(u, 0)));
        }
    }

    #[test]
    fn non_fixing_multiplier_is_not_a_labeled_collineation() {
        // 2·{0,1,3} = {0,1,3} + 6, a translate but not the set itself, so the
        // index map j ↦ 2j misses.
        let plane = build_plane(&ds(2, &[0, 1, 3])).unwrap();
        assert!(!check_collineation(&plane, &PlaneMap::collineation(2, 0)));
    }

    #[test]
    fn correlations_exist_for_every_unit() {
        for (q, elems) in [(2u64, vec![1u64, 2, 4]), (3, vec![0, 1, 3, 9])] {
            let plane = build_plane(&ds(q, &elems)).unwrap();
            for c in crate::pds::units(plane.v()) {
                let map = build_correlation(&plane, c).unwrap();
                assert!(check_correlation(&plane, &map));
            }
        }
        let plane = build_plane(&ds(2, &[1, 2, 4])).unwrap();
        assert!(build_correlation(&plane, 0).is_err());
    }

    #[test]
    fn self_correlation_targets_iff_multiplier() {
        let d = ds(2, &[1, 2, 4]);
        let plane = build_plane(&d).unwrap();
        let fixing = multiplier_report(&d).unwrap().fixed_by;
        for c in crate::pds::units(plane.v()) {
            let same_labeled_plane = correlation_target(&plane, c) == d;
            assert_eq!(same_labeled_plane, c == 1 || fixing.contains(&c));
        }
    }

    #[test]
    fn correlations_compose_to_collineations() {
        let d = ds(2, &[1, 2, 4]);
        let plane = build_plane(&d).unwrap();
        let v = plane.v();
        for (c1, c2) in [(1u64, 1u64), (2, 3), (3, 5), (6, 4)] {
            let mid = build_plane(&correlation_target(&plane, c1)).unwrap();
            build_correlation(&plane, c1).unwrap();
            build_correlation(&mid, c2).unwrap();
            // Composite: x ↦ c1c2·x on points and line indices, into the
            // plane of c1c2·D.
            let u = (c1 * c2) % v;
            let dst = d.scale(u);
            for (x, j) in [(0u64, 0u64), (1, 3), (5, 2), (6, 6), (4, 1)] {
                let lhs = plane.incident(x, j);
                let img_x = (u * x) % v;
                let img_j = (u * j) % v;
                let rhs = dst.contains((img_x + v - img_j) % v);
                assert_eq!(lhs, rhs, "c1={c1} c2={c2} x={x} j={j}");
            }
        }
    }
}
