//! Exact and numerical toolkit for delay differential equations
//!
//! ```text
//! w(z+1) - w(z-1) + a(z) w'(z)/w(z) = P(z, w(z)) / Q(z, w(z))
//! ```
//!
//! with rational coefficients. The symbolic layers ([`constfield`],
//! [`ratfun`], [`expoly`], [`ddeq`], [`synthesis`]) verify entire solutions
//! of the form `H(z)e^{dz} + r(z)` exactly, reduce and classify equations, and
//! construct solution families. [`nevanlinna`] measures growth and value
//! distribution of candidate solutions numerically, and [`frontend`] provides
//! the text syntax and report types used by the command-line tool.

pub mod constfield;
pub mod corpus;
pub mod ddeq;
pub mod error;
pub mod expoly;
pub mod frontend;
pub mod linsolve;
pub mod nevanlinna;
pub mod poly;
pub mod ratfun;
pub mod synthesis;

pub use constfield::{ConstExpr, ZeroVerdict};
pub use ddeq::{DelayEquation, ReducedForm, WPoly, WRational};
pub use error::{Error, Result};
pub use expoly::{ExpoPoly, ExpoRational};
pub use ratfun::{Poly, RatFun};
