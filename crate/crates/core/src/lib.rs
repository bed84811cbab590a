//! Finite monoids, their actions, and the Galois correspondence between
//! submonoids and subfunctors of the forgetful functor over a site of
//! actions.
//!
//! Modules build on each other bottom-up: [`finset`] supplies finite sets
//! and their cartesian closed structure, [`monoid`] the algebra, [`actions`]
//! the category of actions and its functors, [`ends`] internal Nats and the
//! End monoid, and [`galois`] the fix relation with `Inv` and `Stab`.

pub mod actions;
pub mod ends;
pub mod error;
pub mod finset;
pub mod fixtures;
pub mod galois;
pub mod monoid;
pub mod sampling;
pub mod search;

pub use actions::{canonical_site, MAction, Site, SiteSpec};
pub use error::{Error, Result};
pub use finset::{Elem, FinMap, FinSet};
pub use galois::Subfunctor;
pub use monoid::{Monoid, MonoidHom, Submonoid};
