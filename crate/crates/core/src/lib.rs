//! Link determinants, rational tangle calculus and skein-derivation
//! certificates for tangle insertions.

pub mod certify;
pub mod cli;
pub mod coloring;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod skein;
pub mod tangle;

pub use certify::{Certificate, OrientedTarget, Verdict};
pub use diagram::{CrossingSite, LinkDiagram, Smoothing};
pub use error::{Error, Result};
pub use skein::{Coefficients, FareyPair, SkeinTriple, TangleTemplate};
pub use tangle::{ConnectivityClass, ContinuedFraction, OrientationClass, TangleFraction, TangleWord};
