//! Exact arithmetic: prime fields and their extensions, sparse polynomials
//! over F_p, polynomial matrices, and small rational matrices for the
//! integral forms.

pub mod field;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use field::{field_ratio, freshman_split, is_power_of, is_prime, ExtElem, ExtField, Field, PrimeField};
pub use matrix::PolyMatrix;
pub use poly::{Poly, Var, A, B, LAMBDA, X, Y};
pub use rational::{QMatrix, Q};
