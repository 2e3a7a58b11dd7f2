//! Rational-input normalization: scale each row of the program by the LCM
//! of its denominators to obtain an equivalent integer instance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::KnapsackInstance;
use crate::num::parse_decimal;

/// A nonnegative rational `numer / denom`, not necessarily in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational {
    pub numer: BigUint,
    pub denom: BigUint,
}

impl Rational {
    pub fn new(numer: BigUint, denom: BigUint) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self { numer, denom })
    }

    pub fn integer(n: BigUint) -> Self {
        Self { numer: n, denom: BigUint::one() }
    }

    /// `self * scale`, which must be integral.
    fn scaled(&self, scale: &BigUint) -> BigUint {
        &self.numer * (scale / &self.denom)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

/// Accepts `"p"` or `"p/q"` with canonical decimal components.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((p, q)) => Rational::new(parse_decimal(p)?, parse_decimal(q)?),
            None => Ok(Rational::integer(parse_decimal(s)?)),
        }
    }
}

/// Integer instance plus the factor applied to each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rationalized {
    pub instance: KnapsackInstance,
    /// Multiplier of the packing row (weights and capacity).
    pub weight_scale: BigUint,
    /// Multiplier of the objective row (values and target).
    pub value_scale: BigUint,
}

fn row_lcm<'a>(row: impl IntoIterator<Item = &'a Rational>) -> Result<BigUint> {
    row.into_iter().try_fold(BigUint::one(), |acc, r| {
        if r.denom.is_zero() {
            Err(Error::ZeroDenominator)
        } else {
            Ok(acc.lcm(&r.denom))
        }
    })
}

pub fn rationalize(
    weights: &[Rational],
    values: &[Rational],
    capacity: &Rational,
    target: &Rational,
) -> Result<Rationalized> {
    let weight_scale = row_lcm(weights.iter().chain(std::iter::once(capacity)))?;
    let value_scale = row_lcm(values.iter().chain(std::iter::once(target)))?;
    let instance = KnapsackInstance::new(
        weights.iter().map(|w| w.scaled(&weight_scale)).collect(),
        values.iter().map(|v| v.scaled(&value_scale)).collect(),
        capacity.scaled(&weight_scale),
        target.scaled(&value_scale),
    )?;
    Ok(Rationalized { instance, weight_scale, value_scale })
}
