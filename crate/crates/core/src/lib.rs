//! Approximation pipeline for asymmetric TSP on digraphs embedded in a
//! surface of small Euler genus.

pub mod circulation;
pub mod cuts;
pub mod harness;
pub mod heldkarp_lp;
pub mod maxflow;
pub mod paths;
pub mod ribbons;
pub mod surface_graph;
pub mod thin_forest;
pub mod tour;
