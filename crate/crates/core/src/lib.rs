//! Cone-ordered subspaces of R^n, their hyperspaces of closed sets, and
//! numerical probes for Fell, Vietoris and Hausdorff convergence.

// `!(x > 0.0)` guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod geom;
pub mod hyperspace;
pub mod order;
pub mod props;
pub mod repro;
pub mod report;
pub mod scene;
pub mod setrep;
pub mod window;

pub use geom::{Point, Tolerance};
pub use order::ConeOrder;
pub use scene::Scene;
pub use setrep::{ImplicitClosedSet, PointCloud};
pub use window::Window;
