//! Embedded multigraphs: signed rotation systems, face tracing, Euler genus,
//! duals and embedding-preserving contraction.

mod contract;
mod digraph;
mod embedding;
mod faces;
pub mod format;

use thiserror::Error;

pub use contract::{ContractionMap, EdgeFate};
pub use digraph::{Arc, EmbeddedDigraph};
pub use embedding::{ArcId, EdgeEnd, EdgeId, Embedding, Sign, VertexId};
pub use faces::{DualGraph, Face, FaceSet, FlagMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
    #[error("underlying graph is not connected")]
    Disconnected,
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("arc {arc} has negative or non-finite cost {cost}")]
    NegativeCost { arc: usize, cost: f64 },
    #[error("arc/edge mismatch: {0}")]
    ArcMismatch(String),
    #[error("edge {0} is a self-loop and cannot be contracted")]
    ContractLoop(EdgeId),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Builds and validates an instance from an `ATSPE-1` document.
pub fn build_embedding(text: &str) -> Result<EmbeddedDigraph, GraphError> {
    format::parse(text)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    const TRIANGLE_TEXT: &str = "atspe 1
# bidirected unit triangle
vertices 3
arc 0 0 1 1
arc 1 1 0 1
arc 2 1 2 1
arc 3 2 1 1
arc 4 2 0 1
arc 5 0 2 1
edge 0 0 1
edge 1 2 3
edge 2 4 5
rot 0 0.0 2.1
rot 1 0.1 1.0
rot 2 1.1 2.0
";

    #[test]
    fn parses_planar_triangle() {
        let g = build_embedding(TRIANGLE_TEXT).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.embedding().euler_characteristic(), 2);
    }

    #[test]
    fn rejects_one_way_cut() {
        // nothing enters vertex 0
        let text = TRIANGLE_TEXT.replace("edge 0 0 1", "edge 0 0 -").replace("edge 2 4 5", "edge 2 - 5");
        let text = text.replace("arc 1 1 0 1\n", "").replace("arc 4 2 0 1\n", "");
        let text = text
            .replace("arc 2 1 2", "arc 1 1 2")
            .replace("arc 3 2 1", "arc 2 2 1")
            .replace("arc 5 0 2", "arc 3 0 2")
            .replace("edge 1 2 3", "edge 1 1 2")
            .replace("edge 2 - 5", "edge 2 - 3");
        assert_eq!(build_embedding(&text).unwrap_err(), GraphError::NotStronglyConnected);
    }

    #[test]
    fn rejects_duplicate_edge_end() {
        let text = TRIANGLE_TEXT.replace("rot 1 0.1 1.0", "rot 1 0.1 0.1 1.0");
        assert!(matches!(build_embedding(&text), Err(GraphError::MalformedRotation(_))));
        let text = TRIANGLE_TEXT.replace("rot 1 0.1 1.0", "rot 1 1.0");
        assert!(matches!(build_embedding(&text), Err(GraphError::MalformedRotation(_))));
    }

    #[test]
    fn rejects_negative_cost() {
        let text = TRIANGLE_TEXT.replace("arc 3 2 1 1", "arc 3 2 1 -2");
        assert!(matches!(build_embedding(&text), Err(GraphError::NegativeCost { arc: 3, .. })));
    }

    #[test]
    fn rejects_arc_against_its_edge() {
        let text = TRIANGLE_TEXT.replace("edge 0 0 1", "edge 0 1 0");
        assert!(matches!(build_embedding(&text), Err(GraphError::ArcMismatch(_))));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let g = build_embedding(TRIANGLE_TEXT).unwrap();
        let text = format::write(&g);
        let h = format::parse(&text).unwrap();
        assert_eq!(g, h);
        assert_eq!(format::write(&h), text);
    }

    #[test]
    fn triangle_has_two_faces_of_size_three() {
        let faces = triangle().faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.faces().iter().all(|f| f.len() == 3));
        assert_eq!(triangle().euler_genus(), 0);
    }

    #[test]
    fn projective_loop_traces_one_face_of_size_two() {
        let g = projective_loop();
        let faces = g.faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces.face(0).len(), 2);
        assert_eq!(g.euler_genus(), 1);
        assert!(!g.is_orientable());
    }

    #[test]
    fn plus_loop_is_planar() {
        let g = Embedding::new(vec![ends(&[(0, 0), (0, 1)])], vec![Sign::Plus]).unwrap();
        assert_eq!(g.faces().len(), 2);
        assert_eq!(g.euler_genus(), 0);
    }

    #[test]
    fn torus_bouquet_traces_a_single_face() {
        let g = torus_bouquet();
        let faces = g.faces();
        assert_eq!(faces.len(), 1);
        // four edge traversals, i.e. all eight flags in one orbit
        assert_eq!(faces.face(0).len(), 4);
        assert_eq!(g.flag_map().len(), 8);
        assert_eq!(g.euler_genus(), 2);
        assert!(g.is_orientable());
    }

    #[test]
    fn lone_vertex_is_a_sphere() {
        let g = Embedding::new(vec![Vec::new()], Vec::new()).unwrap();
        assert_eq!(g.faces().len(), 1);
        assert_eq!(g.euler_genus(), 0);
    }

    #[test]
    fn dual_of_triangle_is_theta_graph() {
        let dual = triangle().dual();
        let d = &dual.embedding;
        assert_eq!(d.num_vertices(), 2);
        assert_eq!(d.num_edges(), 3);
        assert!((0..3).all(|e| !d.is_loop(e)));
        assert_eq!(d.degree(0), 3);
        assert_eq!(d.degree(1), 3);
        assert_eq!(d.euler_genus(), 0);
        assert!(d.dual().embedding.is_isomorphic(&triangle()));
    }

    #[test]
    fn bigon_face_has_degree_two_dual_vertex() {
        // two vertices joined by two parallel edges on the sphere: two bigons
        let g = Embedding::new(vec![ends(&[(0, 0), (1, 0)]), ends(&[(1, 1), (0, 1)])], vec![Sign::Plus; 2])
            .unwrap();
        let dual = g.dual();
        assert_eq!(dual.faces.len(), 2);
        for f in 0..2 {
            assert_eq!(dual.faces.face(f).len(), 2);
            assert_eq!(dual.degree(f), 2);
        }
    }

    #[test]
    fn dual_degree_matches_face_length() {
        for g in [triangle(), projective_loop(), torus_bouquet()] {
            let dual = g.dual();
            for (f, face) in dual.faces.faces().iter().enumerate() {
                assert_eq!(dual.degree(f), face.len());
            }
            assert!(dual.embedding.dual().embedding.is_isomorphic(&g));
            assert_eq!(dual.embedding.euler_characteristic(), g.euler_characteristic());
        }
    }

    #[test]
    fn switching_preserves_isomorphism_class() {
        let g = torus_bouquet().with_edge((0, 0), (0, 2), Sign::Minus).unwrap();
        let s = g.switched(0);
        assert!(g.is_isomorphic(&s));
        assert_eq!(g.euler_genus(), s.euler_genus());
        assert!(!triangle().is_isomorphic(&torus_bouquet()));
    }

    #[test]
    fn contracting_triangle_edge_leaves_parallel_pair() {
        let (g, map) = triangle().contract_edges(&[0]).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.endpoints(0), [g.endpoints(1)[1], g.endpoints(1)[0]]);
        assert_eq!(g.euler_characteristic(), 2);
        assert_eq!(map.edge_fate, vec![EdgeFate::Contracted, EdgeFate::Kept(0), EdgeFate::Kept(1)]);
        assert!(map.is_surjective());
        assert_eq!(map.vertex_map[0], map.vertex_map[1]);
    }

    #[test]
    fn contracting_full_ribbon_removes_it() {
        // u=0, v=1 with three parallel edges; a pendant vertex 2 hangs off v
        let g = Embedding::new(
            vec![ends(&[(0, 0), (1, 0), (2, 0)]), ends(&[(2, 1), (1, 1), (0, 1), (3, 0)]), ends(&[(3, 1)])],
            vec![Sign::Plus; 4],
        )
        .unwrap();
        let (h, map) = g.contract_edges(&[0, 1, 2]).unwrap();
        assert_eq!(h.num_vertices(), 2);
        assert_eq!(h.num_edges(), 1);
        assert_eq!(map.vertex_map[0], map.vertex_map[1]);
        assert_eq!(map.edge_fate[3], EdgeFate::Kept(0));
        assert_eq!(h.euler_genus(), g.euler_genus());
    }

    #[test]
    fn contracting_a_loop_is_rejected() {
        let g = torus_bouquet();
        assert_eq!(g.contract_edges(&[0]).unwrap_err(), GraphError::ContractLoop(0));
    }

    #[test]
    fn contracting_twisted_edge_keeps_genus() {
        // triangle with one twisted edge plus a chord loop: genus is preserved
        let g = triangle().with_signature(1, Sign::Minus);
        let eg = g.euler_genus();
        let (h, _) = g.contract_edges(&[1]).unwrap();
        assert_eq!(h.euler_genus(), eg);
        let (h, _) = g.contract_edges(&[0]).unwrap();
        assert_eq!(h.euler_genus(), eg);
    }

    #[test]
    fn contraction_maps_compose() {
        let g = triangle();
        let (g1, m1) = g.contract_edges(&[0]).unwrap();
        let (g2, m2) = g1.contract_edges(&[0]).unwrap();
        let total = m1.then(&m2);
        assert_eq!(g2.num_vertices(), 1);
        assert!(total.is_surjective());
        assert_eq!(total.vertex_map, vec![0, 0, 0]);
        assert_eq!(total.edge_fate[0], EdgeFate::Contracted);
        assert_eq!(total.edge_fate[1], EdgeFate::Contracted);
        assert_eq!(total.edge_fate[2], EdgeFate::BecameLoop(0));
    }

    #[test]
    fn digraph_contraction_reroutes_arcs() {
        let g = bidirected(triangle(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let (h, _) = g.contract_edges(&[0]).unwrap();
        assert_eq!(h.num_arcs(), 4);
        assert!(h.is_strongly_connected());
        assert_eq!(h.arcs().iter().map(|a| a.cost).collect::<Vec<_>>(), vec![3.0, 4.0, 5.0, 6.0]);
    }
}
