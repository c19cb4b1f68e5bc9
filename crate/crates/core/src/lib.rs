//! Perfect difference sets of prime-power order q inside Z/(q²+q+1), the cyclic
//! projective planes they describe, and the triangle presentations plus group
//! presentations built on top of them.
//!
//! The modules follow the data flow: [`gf`] realizes GF(q³) and the relative
//! trace, [`pds`] produces and analyzes the difference sets, [`plane`] checks
//! the plane axioms and affine maps, [`tripres`] builds triangle presentations
//! from multiplier orbits, [`grouppres`] and [`linkcheck`] derive group
//! presentations and the local bipartite link, and [`pipeline`] wires the whole
//! chain into reproducible file output.

pub mod catalog;
pub mod error;
pub mod gf;
pub mod graph;
pub mod grouppres;
pub mod linkcheck;
pub mod pds;
pub mod pipeline;
pub mod plane;
pub mod tripres;

pub use error::{Error, Result};
