//! Exact nonnegative reals of the few shapes the metrics produce.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `0`, `e^{-n}`, a positive rational, or the square root of a positive
/// rational that is not a square.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExactReal {
    Zero,
    ExpNeg(u32),
    Rational(BigRational),
    Sqrt(BigRational),
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

impl ExactReal {
    pub fn rational(q: BigRational) -> ExactReal {
        assert!(!q.is_negative(), "distances are nonnegative");
        if q.is_zero() {
            ExactReal::Zero
        } else {
            ExactReal::Rational(q)
        }
    }

    /// `sqrt(q)` for `q ≥ 0`.
    pub fn sqrt(q: BigRational) -> ExactReal {
        assert!(!q.is_negative(), "square root of a negative number");
        if q.is_zero() {
            return ExactReal::Zero;
        }
        match (exact_sqrt(q.numer()), exact_sqrt(q.denom())) {
            (Some(a), Some(b)) => ExactReal::Rational(BigRational::new(a, b)),
            _ => ExactReal::Sqrt(q),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Zero)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Zero => 0.0,
            ExactReal::ExpNeg(n) => (-(*n as f64)).exp(),
            ExactReal::Rational(q) => q.to_f64().unwrap_or(f64::INFINITY),
            ExactReal::Sqrt(q) => q.to_f64().unwrap_or(f64::INFINITY).sqrt(),
        }
    }

    pub fn max(self, other: ExactReal) -> ExactReal {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Exact text: `0`, `exp(-n)`, `p/q` or `sqrt(p/q)`.
    pub fn symbolic(&self) -> String {
        match self {
            ExactReal::Zero => "0".into(),
            ExactReal::ExpNeg(n) => format!("exp(-{n})"),
            ExactReal::Rational(q) => q.to_string(),
            ExactReal::Sqrt(q) => format!("sqrt({q})"),
        }
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    /// Exact within a shape and between rationals and square roots.
    /// `e^{-n}` is transcendental, so it never equals a nonzero algebraic
    /// value and a floating comparison decides those cases.
    fn cmp(&self, other: &Self) -> Ordering {
        use ExactReal::*;
        match (self, other) {
            (Zero, Zero) => Ordering::Equal,
            (Zero, _) => Ordering::Less,
            (_, Zero) => Ordering::Greater,
            (ExpNeg(a), ExpNeg(b)) => b.cmp(a),
            (Rational(a), Rational(b)) => a.cmp(b),
            (Sqrt(a), Sqrt(b)) => a.cmp(b),
            (Rational(a), Sqrt(b)) => (a * a).cmp(b),
            (Sqrt(a), Rational(b)) => a.cmp(&(b * b)),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .expect("finite values"),
        }
    }
}

impl fmt::Display for ExactReal {
    /// Symbolic form with a decimal rendering, e.g. `exp(-4) = 0.0183156`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Zero => write!(f, "0"),
            _ => write!(f, "{} = {:.7}", self.symbolic(), self.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rational;

    #[test]
    fn ordering_across_shapes() {
        let e4 = ExactReal::ExpNeg(4);
        assert!(ExactReal::Zero < e4);
        assert!(e4 < ExactReal::ExpNeg(3));
        assert!(e4 < ExactReal::rational(rational(1, 50)));
        assert!(e4 > ExactReal::rational(rational(1, 60)));
        assert_eq!(ExactReal::sqrt(rational(9, 4)), ExactReal::rational(rational(3, 2)));
        assert!(ExactReal::sqrt(rational(2, 1)) > ExactReal::rational(rational(7, 5)));
        assert!(ExactReal::sqrt(rational(2, 1)) < ExactReal::rational(rational(3, 2)));
        assert_eq!(e4.to_string(), "exp(-4) = 0.0183156");
    }
}
