//! Gottlieb groups, fibre-restricted Gottlieb groups and the invariants
//! built from them.
//!
//! All subspaces live in `Hom(W, Q)` with coordinates labelled `w*`.
//!
//! ```
//! use rht_core::invariants::gottlieb;
//! use rht_core::model::parse_model;
//!
//! let x = parse_model("gen w1 3\ngen w2 3\ngen w3 4\ngen w4 7\nd w4 = w3^2\n").unwrap();
//! assert_eq!(gottlieb(&x).unwrap().basis(), ["w1*", "w2*", "w4*"]);
//! ```

mod depth;
mod gottlieb;
mod les;
mod toral;

pub use depth::{
    depth_of_subspaces, depth_over_catalog, distinct_subspaces, finiteness_gate,
    realized_subspaces, same_fiber, DepthResult,
};
pub use gottlieb::{
    connecting_image, connecting_images, der_homology, fibre_gottlieb, gottlieb, DerHomology,
    GottliebResult, Provenance,
};
pub use les::{les_check, LesNode, LesReport};
pub use toral::{toral_certificate, ToralCertificate, Verdict};
