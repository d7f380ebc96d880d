//! Catalogs of fibrations, their Gottlieb posets, enumeration over a base
//! and report rendering.

mod catalog;
mod enumerate;
mod poset;
mod render;

pub use catalog::Catalog;
pub use enumerate::{admissible_monomials, enumerate_fibrations, EnumerateOptions};
pub use poset::{build_poset, Poset, PosetNode};
pub use render::{degree_report, degree_table, render, DegreeEntry, Format};
