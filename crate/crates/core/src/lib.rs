//! BNS invariants Σ¹ and Σ² of wreath products and direct products.
//!
//! [`engine`] decides membership symbolically with a three-valued verdict and
//! an audit trace; [`lab`] checks a few of those answers by brute force on
//! Cayley graphs; [`omega`] derives Ω¹ and twisted-conjugacy consequences;
//! [`dsl`] and [`report`] are the textual front end.

pub mod catalog;
pub mod character;
pub mod dsl;
pub mod engine;
pub mod group;
pub mod lab;
pub mod omega;
pub mod rational;
pub mod report;
