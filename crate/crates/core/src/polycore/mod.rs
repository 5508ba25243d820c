//! Exact polynomial and matrix data types shared by every other module.

pub mod interp;
pub mod matrix;
pub mod mpoly;
pub mod parse;
pub mod pencil;
pub mod trig;
pub mod unipoly;

pub use matrix::Mat;
pub use mpoly::{BivarPoly, MPoly, TriPoly};
pub use parse::{parse_poly, parse_poly3, parse_unipoly};
pub use pencil::{Pencil, Pencil3};
pub use trig::{TrigMatrix, TrigPoly};
pub use unipoly::UniPoly;
