//! Row insertion, the limit curves of a marked value's trajectory, and the
//! Monte Carlo and series machinery used to compare them.

pub mod asymptotics;
pub mod io;
pub mod limit_curves;
pub mod random_model;
pub mod tableau;
pub mod trajectory;
pub mod verify;

pub use limit_curves::{CurvePoint, LimitCurves};
pub use tableau::{rsk, BoxPosition, BumpingRoute, Partition, Permutation, Tableau};
pub use trajectory::{Trajectory, TrajectoryConfig};
