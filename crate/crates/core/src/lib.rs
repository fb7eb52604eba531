//! Additions on fixed-length digit vectors.
//!
//! Every composition `m = t_1 + ... + t_r` turns `A_b^m` (length-`m` vectors
//! of base-`b` digits) into the product group `Z/b^{t_1} x ... x Z/b^{t_r}`:
//! components of length one add without carry, longer components add with
//! carry. Each component may additionally be scaled by a unit of
//! `Z/b^{t_i}`.
//!
//! - [`digits`]: digit vectors and the positional integer maps.
//! - [`schemes`]: compositions, twists and the resulting operations.
//! - [`combinatorics`]: exact counts of compositions, partitions, units and schemes.
//! - [`verify`]: brute-force axiom checks, table census, isomorphism classes.
//! - [`cipher`]: a key-selected block combiner.
//! - [`cli`]: the `digitadd` command line.

pub mod cipher;
pub mod cli;
pub mod combinatorics;
pub mod digits;
pub mod error;
pub mod schemes;
pub mod verify;

pub use digits::{dig_radix, int_radix, Base, DigitVector};
pub use error::{Error, Result};
pub use schemes::{AdditionScheme, AxiomReport, Composition, OperationTable, TwistVector};
