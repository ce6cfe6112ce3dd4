pub mod backends;
pub mod harness;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod regions;
pub mod roots;
pub mod separation;
pub mod solution;
pub mod sylvester;

pub use num_complex::Complex64;
pub use poly::{CoeffNorm, Polynomial};
pub use roots::{find_roots, RootSet};
pub use solution::{Backend, BezoutSolution};
