//! Exact rational scalars and a few conversion helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::matrix::Matrix;

/// Arbitrary-precision rational; always kept in lowest terms with a
/// positive denominator by `num_rational`.
pub type Rational = BigRational;

/// Dense matrix of arbitrary-precision rationals.
pub type RationalMatrix = Matrix<Rational>;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}

pub fn matrix_to_f64(m: &RationalMatrix) -> Matrix<f64> {
    m.map(to_f64)
}

/// Serialize as "p/q", or "p" when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
