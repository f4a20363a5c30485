//! Exact classification of `E6`/`E7`/`E8` singularities of bivariate germs.
//!
//! A germ is given by its Taylor jet at the origin ([`PolyJet`]). The crate
//! decides the type from the homogeneous parts of degree 3, 4 and 5 using
//! exact rational arithmetic, records a [`Certificate`] justifying the
//! verdict, reduces the jet to a pre-normal form through explicit shears,
//! splits it along the solution of `∂₂²φ = 0`, and finally evaluates the
//! root-extraction charts in floating point to check the reduction against
//! the normal forms `±y1⁴ + y2³`, `y2·y1³ + y2³` and `y1⁵ + y2³`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod classify;
pub mod error;
pub mod forms;
pub mod jet;
pub mod normal_form;
pub mod order;
pub mod rational;
pub mod series;
pub mod verify;


pub use classify::{check_critical_origin, classify, Certificate, Reason, Sign, Verdict};
pub use error::Error;
pub use forms::{BinaryForm, LinearForm};
pub use jet::{PolyJet, PolyMap2, StepKind, TransformStep};
pub use order::Order;
pub use rational::Rational;
pub use series::{Decomposition, PowerSeries1};
pub use normal_form::Reduction;
pub use verify::{Chart, VerifyReport};


