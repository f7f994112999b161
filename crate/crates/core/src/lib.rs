//! Exact Milnor K-theory of finite fields and rational function fields,
//! tame symbols and Weil reciprocity on the projective line, level-1 framed
//! correspondences with the symbol maps between them, and the framing-matrix
//! normalization calculus.

pub mod cli;
pub mod field;
pub mod framed;
pub mod framing;
pub mod milnor;
pub mod reciprocity;
pub mod selftest;
