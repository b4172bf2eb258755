use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Rational, Scalar};
use crate::error::Error;

/// Polynomial in the horizontal-dimer weight `alpha` with integer coefficients.
///
/// `coeffs[i]` is the coefficient of `alpha^i`; trailing zeros are stripped, so
/// the zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlphaPoly {
    coeffs: Vec<BigInt>,
}

impl AlphaPoly {
    pub fn zero() -> Self {
        AlphaPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        AlphaPoly::from_coeffs(vec![BigInt::from(c)])
    }

    /// The monomial `c * alpha^deg`.
    pub fn monomial(c: i64, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = BigInt::from(c);
        AlphaPoly::from_coeffs(coeffs)
    }

    pub fn alpha() -> Self {
        AlphaPoly::monomial(1, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AlphaPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        AlphaPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, deg: usize) -> BigInt {
        self.coeffs.get(deg).cloned().unwrap_or_default()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner
        let mut acc = Rational::integer(0);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Rational::from_integer(c.clone());
        }
        acc
    }

    /// Value at `alpha = 1`, the sum of the coefficients.
    pub fn sum_coeffs(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn add(&self, other: &AlphaPoly) -> AlphaPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i);
                let b = other.coeffs.get(i);
                match (a, b) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => BigInt::zero(),
                }
            })
            .collect();
        AlphaPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> AlphaPoly {
        AlphaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &AlphaPoly) -> AlphaPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &AlphaPoly) -> AlphaPoly {
        if self.is_zero() || other.is_zero() {
            return AlphaPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        AlphaPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> AlphaPoly {
        AlphaPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Coefficients as decimal strings, ascending degree.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coeff_strings<S: AsRef<str>>(items: &[S]) -> Result<AlphaPoly, Error> {
        let coeffs = items
            .iter()
            .map(|s| {
                BigInt::from_str(s.as_ref().trim())
                    .map_err(|_| Error::Parse(format!("bad coefficient {:?}", s.as_ref())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AlphaPoly::from_coeffs(coeffs))
    }
}

impl fmt::Display for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match deg {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if deg == 1 {
                        write!(f, "a")?;
                    } else {
                        write!(f, "a^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlphaPoly({self})")
    }
}

impl Scalar for AlphaPoly {
    fn zero() -> Self {
        AlphaPoly::zero()
    }
    fn one() -> Self {
        AlphaPoly::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        AlphaPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        AlphaPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        AlphaPoly::neg(self)
    }
    fn from_i64(v: i64) -> Self {
        AlphaPoly::constant(v)
    }
}
