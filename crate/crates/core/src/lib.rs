//! Exchange-stable and envy-free seat arrangements on paths and cycles.

pub mod constructions;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod judge;
pub mod polyclass;
pub mod profile;
pub mod randomized;
pub mod search;

pub use error::{Error, Result};
pub use judge::{Criterion, Witness, WitnessKind};
pub use profile::{Arrangement, ClassStructure, PreferenceProfile, Topology, TopologyKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/judging.md")]
    mod judging {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/random.md")]
    mod random {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
