//! The SU(2) Casson–Lin invariant `h₂` of 2-component links presented as
//! closures of 2-strand braids.
//!
//! The computation runs through traceless SU(2) representations of the free
//! group, the ε-twisted braid action, the pillowcase
//! `{(a, b, c, d) ∈ C_i⁴ | ab = cd}/conj`, and an oriented intersection count
//! of the diagonal curve against the graph of the braid action.
//!
//! ```
//! use casson_lin::{braid::parse_braid, cassonlin::casson_lin_h2};
//!
//! let hopf = parse_braid("s1^2", 2).unwrap();
//! let result = casson_lin_h2(&hopf).unwrap();
//! assert_eq!(result.h2, -1);
//! assert_eq!(result.lk, 1);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod braid;
pub mod cassonlin;
pub mod cli;
pub mod error;
pub mod orientation;
pub mod pillowcase;
pub mod quat;
pub mod repspace;

mod sign;

pub use error::{Error, Result};
pub use sign::Sign;
