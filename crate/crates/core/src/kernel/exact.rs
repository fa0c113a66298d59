//! Exact construction of the potential kernel on the wedge 0 ≤ y ≤ x.
//!
//! Every kernel value on Z² lies in the ring Q + Q·(1/π), and the
//! harmonicity relations propagate that form: starting from the seeds
//!
//! ```text
//! a(0,0) = 0     a(1,0) = 1     a(1,1) = 4/π
//! ```
//!
//! the whole wedge follows from
//!
//! ```text
//! a(x+1,0) = 4a(x,0) − a(x−1,0) − 2a(x,1)              (axis)
//! a(x+1,y) = 4a(x,y) − a(x−1,y) − a(x,y+1) − a(x,y−1)  (1 ≤ y ≤ x−1)
//! a(x+1,x) = 2a(x,x) − a(x,x−1)                        (next to diagonal)
//! a(x+1,x+1) = a(x,x) + (4/π)/(2x+1)                   (diagonal)
//! ```
//!
//! carried out in exact `BigRational` arithmetic on the two components.
//! The only approximation in the whole module is the final conversion to
//! `f64`, which uses a high-precision rational 1/π from Machin's formula
//! and a careful big-rational-to-float routine; the conversion error is
//! far below [`EXACT_ACCURACY`]. Components grow like 4^x, hence the big
//! integers; the values themselves stay logarithmic, the growth cancels
//! exactly in the rational arithmetic.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Guaranteed absolute accuracy of [`ExactKernel::value`]. The true
/// conversion error is below 1e−14 for every radius within the cap; the
/// claim keeps an order-of-magnitude margin.
pub const EXACT_ACCURACY: f64 = 1e-13;

/// Largest supported wedge radius.
pub const MAX_EXACT_RADIUS: i64 = 200;

/// Bits of precision carried by the rational 1/π.
const INV_PI_BITS: u64 = 700;

/// A number of the form `rational + inv_pi · (1/π)`, both parts exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactValue {
    pub rational: BigRational,
    pub inv_pi: BigRational,
}

impl ExactValue {
    fn zero() -> Self {
        ExactValue {
            rational: BigRational::zero(),
            inv_pi: BigRational::zero(),
        }
    }

    fn from_integers(rational: i64, inv_pi: i64) -> Self {
        ExactValue {
            rational: BigRational::from_integer(rational.into()),
            inv_pi: BigRational::from_integer(inv_pi.into()),
        }
    }

    /// Integer linear combination Σ cᵢ·vᵢ, the shape of every recurrence.
    fn linear(terms: &[(i64, &ExactValue)]) -> Self {
        let mut out = ExactValue::zero();
        for (c, v) in terms {
            let c = BigRational::from_integer((*c).into());
            out.rational += &c * &v.rational;
            out.inv_pi += &c * &v.inv_pi;
        }
        out
    }

    /// Exactly zero in both components.
    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.inv_pi.is_zero()
    }

    /// Convert using the supplied rational approximation of 1/π. The
    /// combination is done in exact rational arithmetic, so the huge,
    /// cancelling components never meet floating point.
    pub fn to_f64(&self, inv_pi: &BigRational) -> f64 {
        rational_to_f64(&(&self.rational + &self.inv_pi * inv_pi))
    }
}

/// Convert a big rational to the closest representable `f64` (up to a
/// couple of ulps): align the quotient to a 64-bit window, divide
/// exactly, then scale back.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let negative = q.is_negative();
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    let mantissa = if shift >= 0 {
        (num.clone() << shift as usize) / den
    } else {
        num / (den.clone() << (-shift) as usize)
    };
    let scaled = mantissa.to_f64().unwrap() * 2f64.powi(-shift as i32);
    if negative {
        -scaled
    } else {
        scaled
    }
}

/// Σ_{j≥0} (−1)^j / ((2j+1)·q^{2j+1}), truncated once the next term is
/// below 2^{−bits−8}; the alternating-series remainder is below the first
/// omitted term.
fn arctan_recip(q: u64, bits: u64) -> BigRational {
    let q2 = BigInt::from(q * q);
    let mut power = BigInt::from(q);
    let mut j = 0u64;
    let mut sum = BigRational::zero();
    loop {
        let denom = BigInt::from(2 * j + 1) * &power;
        if denom.bits() > bits + 8 {
            return sum;
        }
        let term = BigRational::new(BigInt::one(), denom);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &q2;
        j += 1;
    }
}

/// Rational 1/π to roughly `bits` bits, via π = 16·atan(1/5) − 4·atan(1/239).
pub fn inv_pi_rational(bits: u64) -> BigRational {
    let pi = BigRational::from_integer(16.into()) * arctan_recip(5, bits)
        - BigRational::from_integer(4.into()) * arctan_recip(239, bits);
    pi.recip()
}

/// The exact kernel on the closed ball of Chebyshev radius `radius`,
/// stored on the fundamental wedge and folded out by the 8 symmetries.
pub struct ExactKernel {
    radius: i64,
    /// `wedge[x][y]` for 0 ≤ y ≤ x ≤ radius.
    wedge: Vec<Vec<ExactValue>>,
    inv_pi: BigRational,
}

impl ExactKernel {
    pub fn build(radius: i64) -> Result<Self> {
        if radius < 0 {
            return Err(Error::InvalidParameter(format!(
                "radius must be nonnegative, got {radius}"
            )));
        }
        if radius > MAX_EXACT_RADIUS {
            return Err(Error::CapExceeded(format!(
                "kernel radius {radius} exceeds cap {MAX_EXACT_RADIUS}"
            )));
        }
        let mut wedge = vec![vec![ExactValue::zero()]];
        if radius >= 1 {
            wedge.push(vec![
                ExactValue::from_integers(1, 0),
                ExactValue::from_integers(0, 4),
            ]);
        }
        for x in 1..radius {
            let xs = x as usize;
            let mut column = Vec::with_capacity(xs + 2);
            column.push(ExactValue::linear(&[
                (4, &wedge[xs][0]),
                (-1, &wedge[xs - 1][0]),
                (-2, &wedge[xs][1]),
            ]));
            for y in 1..xs {
                column.push(ExactValue::linear(&[
                    (4, &wedge[xs][y]),
                    (-1, &wedge[xs - 1][y]),
                    (-1, &wedge[xs][y + 1]),
                    (-1, &wedge[xs][y - 1]),
                ]));
            }
            column.push(ExactValue::linear(&[
                (2, &wedge[xs][xs]),
                (-1, &wedge[xs][xs - 1]),
            ]));
            let mut diagonal = wedge[xs][xs].clone();
            diagonal.inv_pi += BigRational::new(4.into(), (2 * x + 1).into());
            column.push(diagonal);
            wedge.push(column);
        }
        Ok(ExactKernel {
            radius,
            wedge,
            inv_pi: inv_pi_rational(INV_PI_BITS),
        })
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// Exact value at (x, y), folded onto the wedge.
    pub fn value_exact(&self, x: i64, y: i64) -> Result<&ExactValue> {
        let (mut u, mut v) = (x.unsigned_abs() as i64, y.unsigned_abs() as i64);
        if u < v {
            std::mem::swap(&mut u, &mut v);
        }
        if u > self.radius {
            return Err(Error::OutOfRange(format!(
                "({x},{y}) outside kernel radius {}",
                self.radius
            )));
        }
        Ok(&self.wedge[u as usize][v as usize])
    }

    /// Floating-point value, accurate to [`EXACT_ACCURACY`].
    pub fn value(&self, x: i64, y: i64) -> Result<f64> {
        Ok(self.value_exact(x, y)?.to_f64(&self.inv_pi))
    }

    pub fn accuracy(&self) -> f64 {
        EXACT_ACCURACY
    }

    /// Σ_{w∼z} a(w) − 4·a(z), exactly. Zero off the origin; 4 at it.
    pub fn laplacian_exact(&self, x: i64, y: i64) -> Result<ExactValue> {
        let center = self.value_exact(x, y)?;
        Ok(ExactValue::linear(&[
            (1, self.value_exact(x + 1, y)?),
            (1, self.value_exact(x - 1, y)?),
            (1, self.value_exact(x, y + 1)?),
            (1, self.value_exact(x, y - 1)?),
            (-4, center),
        ]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::series::series_kernel;
    use std::f64::consts::PI;

    #[test]
    fn machin_inverse_pi_matches_f64_pi() {
        let inv_pi = inv_pi_rational(INV_PI_BITS);
        let as_f64 = rational_to_f64(&inv_pi);
        assert!((as_f64 * PI - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn rational_conversion_spot_checks() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(rational_to_f64(&half), 0.5);
        let third = BigRational::new((-1).into(), 3.into());
        assert!((rational_to_f64(&third) - (-1.0 / 3.0)).abs() <= f64::EPSILON);
        let big = BigInt::from(1u8) << 200usize;
        let near_one = BigRational::new(&big + BigInt::one(), big);
        assert_eq!(rational_to_f64(&near_one), 1.0);
        assert_eq!(rational_to_f64(&BigRational::zero()), 0.0);
    }

    #[test]
    fn low_order_values_have_the_expected_exact_form() {
        let kernel = ExactKernel::build(4).unwrap();
        let expect = [
            ((0, 0), ExactValue::from_integers(0, 0)),
            ((1, 0), ExactValue::from_integers(1, 0)),
            ((1, 1), ExactValue::from_integers(0, 4)),
            ((2, 0), ExactValue::from_integers(4, -8)),
            ((2, 1), ExactValue::from_integers(-1, 8)),
            ((3, 0), ExactValue::from_integers(17, -48)),
        ];
        for ((x, y), value) in expect {
            assert_eq!(kernel.value_exact(x, y).unwrap(), &value, "at ({x},{y})");
        }
        let diag = kernel.value_exact(2, 2).unwrap();
        assert!(diag.rational.is_zero());
        assert_eq!(diag.inv_pi, BigRational::new(16.into(), 3.into()));
    }

    #[test]
    fn f64_values_match_closed_forms() {
        let kernel = ExactKernel::build(3).unwrap();
        let cases = [
            ((1, 0), 1.0),
            ((1, 1), 4.0 / PI),
            ((2, 0), 4.0 - 8.0 / PI),
            ((2, 1), 8.0 / PI - 1.0),
            ((2, 2), 16.0 / (3.0 * PI)),
            ((3, 0), 17.0 - 48.0 / PI),
        ];
        for ((x, y), want) in cases {
            let got = kernel.value(x, y).unwrap();
            assert!((got - want).abs() <= 1e-13, "a({x},{y}) = {got}, want {want}");
        }
    }

    #[test]
    fn laplacian_is_exactly_zero_off_origin_and_four_at_it() {
        let radius = 8;
        let kernel = ExactKernel::build(radius).unwrap();
        for x in -(radius - 1)..=(radius - 1) {
            for y in -(radius - 1)..=(radius - 1) {
                let lap = kernel.laplacian_exact(x, y).unwrap();
                if x == 0 && y == 0 {
                    assert_eq!(lap, ExactValue::from_integers(4, 0));
                } else {
                    assert!(lap.is_zero(), "nonzero laplacian at ({x},{y}): {lap:?}");
                }
            }
        }
    }

    #[test]
    fn symmetry_fold_returns_identical_values() {
        let kernel = ExactKernel::build(5).unwrap();
        let reference = kernel.value_exact(3, 2).unwrap().clone();
        for (x, y) in [(2, 3), (-3, 2), (3, -2), (-2, -3), (-3, -2)] {
            assert_eq!(kernel.value_exact(x, y).unwrap(), &reference);
        }
    }

    #[test]
    fn agrees_with_the_series_oracle() {
        let kernel = ExactKernel::build(15).unwrap();
        let points = [
            (1, 0),
            (2, 2),
            (3, 1),
            (5, 0),
            (4, 4),
            (7, 2),
            (9, 5),
            (11, 11),
            (15, 0),
            (13, 8),
        ];
        for (x, y) in points {
            let oracle = series_kernel(x, y, 1e-9).unwrap();
            let exact = kernel.value(x, y).unwrap();
            assert!(
                (exact - oracle.value).abs() <= oracle.error_bound + EXACT_ACCURACY,
                "exact {exact} vs series {} at ({x},{y})",
                oracle.value
            );
        }
    }

    #[test]
    fn radius_cap_and_bounds_errors() {
        assert!(matches!(
            ExactKernel::build(MAX_EXACT_RADIUS + 1),
            Err(Error::CapExceeded(_))
        ));
        assert!(ExactKernel::build(-1).is_err());
        let kernel = ExactKernel::build(2).unwrap();
        assert!(matches!(
            kernel.value(3, 0),
            Err(Error::OutOfRange(_))
        ));
    }
}
