pub mod cech;
pub mod gauge;
pub mod linalg;
pub mod presymplectic;
pub mod scalar;
pub mod weyl;

pub use num_bigint::BigInt as Integer;
pub use num_rational::BigRational as Rational;

pub type IntMatrix = linalg::Matrix<Integer>;
pub type RatMatrix = linalg::Matrix<Rational>;
