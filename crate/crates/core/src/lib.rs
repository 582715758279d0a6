//! Simply typed lambda calculus with products: βη-equality, finite models, typed Böhm-out
//! separation and the collapse of cartesian closed categories under an unprovable equation.

pub mod ccc;
pub mod models;
pub mod normalize;
pub mod numerals;
pub mod products;
pub mod random;
pub mod separator;
pub mod syntax;
