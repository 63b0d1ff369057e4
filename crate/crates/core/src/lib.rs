//! Exact-arithmetic Chevalley groups over commutative rings.
//!
//! The crate builds semisimple group schemes as faithful matrix groups over
//! exact rings (ℤ, ℚ, ℤ/m, F_q, ℤ[vars]), parametrizes their Bruhat cells,
//! and implements the twisted-conjugation cross-section of a cell together
//! with its constructive inverse via braid-move transport. Everything is
//! deterministic and enumerable at small scale so that the structural claims
//! can be verified exhaustively over small finite rings and symbolically
//! over ℤ.

pub mod braid;
pub mod chevalley;
pub mod crosssec;
pub mod intpoly;
pub mod matrix;
pub mod polyfam;
pub mod rings;
pub mod rootdata;
pub mod weyl;
