//! Finite incidence pregeometries, their quotients, and exact deciders for
//! the properties that govern whether flags lift from a quotient.
//!
//! ```
//! use geoq::constructions::ssg;
//!
//! let g = ssg(4, 3).unwrap();
//! assert!(g.is_geometry().holds());
//! assert_eq!(g.chambers().len(), 24);
//! ```

pub mod constructions;
pub mod coset;
pub mod diagram;
pub mod error;
pub mod format;
pub mod geometry;
pub mod graph;
pub mod iso;
pub mod perm;
pub mod quotient;
pub mod random;
pub mod report;
pub mod reproduce;
pub mod shadow;
pub mod suites;
pub mod tits;

pub use error::{GeoError, Result};
pub use geometry::{Distance, ElementId, Embedded, Flag, Pregeometry, PregeometryBuilder, TypeId, TypeSet, Verdict};
pub use perm::{PermGroup, Permutation};
pub use quotient::{Partition, Projection};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/pregeometries.md")]
    mod pregeometries {}
    #[doc = include_str!("../../../book/src/quotients.md")]
    mod quotients {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/tits.md")]
    mod tits {}
    #[doc = include_str!("../../../book/src/cosets.md")]
    mod cosets {}
    #[doc = include_str!("../../../book/src/diagrams.md")]
    mod diagrams {}
    #[doc = include_str!("../../../book/src/shadows.md")]
    mod shadows {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
