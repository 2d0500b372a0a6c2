pub mod laurent;
pub mod matrix;
pub mod rational;
pub mod ring;
pub mod series;
pub mod wedge;

pub use laurent::QLaurent;
pub use matrix::Matrix;
pub use rational::Rational;
pub use ring::Ring;
pub use series::{SeriesRing, TruncatedSeries};
