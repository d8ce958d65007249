//! Exact character theory of small finite general linear groups, together
//! with a decision engine for Galois distinction of tame supercuspidal
//! representations of `GL_n` over a p-adic field.
//!
//! Layers, bottom to top:
//!
//! * [`ffield`]: canonical finite fields with compatible subfield embeddings.
//! * [`mchar`]: multiplicative characters of `F_{q^n}^x` as exponents.
//! * [`glgroup`]: `GL_n(F_q)` elements, conjugacy classes and subgroups.
//! * [`chartab`]: exact cyclotomic character tables, induction and
//!   distinction multiplicities.
//! * [`localtower`] and [`verdict`]: tame tower invariants and the
//!   distinguished / omega-distinguished decision.
//! * [`cli`]: the `gldist` batch front end.

pub mod arith;
pub mod chartab;
pub mod cli;
pub mod error;
pub mod ffield;
pub mod glgroup;
pub mod localtower;
pub mod mchar;
pub mod selftest;
pub mod survey;
pub mod verdict;

pub use error::{Error, Result};
