//! Combinatorics and exact equivariant cohomology of abstract GKM graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: graphs, weights, connections and independence;
//! * [`faces`]: totally geodesic faces and the face poset;
//! * [`topology`]: order complexes, rational homology and the acyclicity screen;
//! * [`structure`]: monodromy, colorings, facets and the dual simplicial poset;
//! * [`poly`] and [`cohomology`]: GKM classes, Thom classes, the linear form
//!   `η` and Hilbert series;
//! * [`linalg`]: the exact rank engine shared by everything above.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod cohomology;
pub mod faces;
pub mod fixtures;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod rational;
pub mod structure;
pub mod topology;

pub use model::{parse_graph, GkmGraph, GraphError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/faces.md")]
    mod faces {}
    #[doc = include_str!("../../../book/src/screen.md")]
    mod screen {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
}
