//! Constructive suborbits of p-torus actions.
//!
//! Finite groups `Z_p^α` acting by commuting orthogonal maps are represented
//! explicitly by [`GroupWitness`]es. The crate builds such witnesses for
//! Euclidean point sets ([`euclid`]) and for triangles on the unit sphere
//! ([`sphere`]), checks them with [`verify_witness`], and hosts the numerical
//! side of a few related statements: the distance gap between `S²` and torus
//! orbits ([`torus`]), Knaster-type searches over Stiefel frames
//! ([`knaster`]) and the determinant certificate for circle triples
//! ([`certificate`]).

pub mod certificate;
pub mod cli;
pub mod error;
pub mod euclid;
pub mod geometry;
pub mod io;
pub mod knaster;
pub mod lp;
pub mod primes;
pub mod sphere;
pub mod torus;
pub mod witness;

pub use error::{Error, Result};
pub use geometry::{
    direct_sum, gram_of_unit_config, regular_pgon, squared_distances, PointConfiguration,
    SquaredDistanceMatrix, UnitGram,
};
pub use witness::{verify_witness, ClaimFrame, GroupWitness, VerificationReport};
