//! Constructions and exact verification for degree 3-critical graphs, 1-3
//! trees and their leaf-leaf path lengths, and k-avoiding odd-even sequences.

mod bits;

pub mod acceptance;
pub mod family;
pub mod graph;
pub mod sequences;
pub mod spectra;
pub mod trees;
