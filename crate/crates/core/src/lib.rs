//! Exact computation in iterated wreath products of cyclic groups, realised
//! as automorphism groups of finite rooted trees.
//!
//! The crate covers
//!
//! - portrait arithmetic ([`TreeAutomorphism`]): products, inverses,
//!   commutators, sections, leaf actions;
//! - membership tests for the Sylow 2-subgroups `B_k` of `S_{2^k}` and `G_k`
//!   of `A_{2^k}` and their derived subgroups ([`membership`]);
//! - explicit single-commutator decompositions of derived-subgroup elements
//!   ([`commutator`]);
//! - a brute-force oracle over leaf permutations and subgroup closures
//!   ([`oracle`]), and named verification suites built on it ([`verify`]).

pub mod commutator;
pub mod error;
pub mod leaf;
pub mod membership;
pub mod oracle;
pub mod portrait;
pub mod signature;
pub mod verify;

pub use commutator::CommutatorWitness;
pub use error::{Error, Result};
pub use leaf::LeafPermutation;
pub use membership::{SubgroupKind, SubgroupSpec};
pub use oracle::{ElementSet, Oracle};
pub use portrait::{LevelIndexVector, TreeAutomorphism};
pub use signature::WreathSignature;
