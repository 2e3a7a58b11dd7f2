//! Exact integer helpers shared by the reductions and the JSON layer.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest binomial coefficient of order `m`, i.e. `binomial(m, floor(m/2))`.
pub fn binomial_peak(m: u32) -> BigUint {
    let k = m / 2;
    let mut acc = BigUint::one();
    // C(m, i) = C(m, i-1) * (m - i + 1) / i stays integral at every step.
    for i in 1..=k {
        acc *= BigUint::from(m - i + 1);
        acc /= BigUint::from(i);
    }
    acc
}

/// Number of significant bits; zero has bit length 0.
pub fn bit_len(x: &BigUint) -> u64 {
    x.bits()
}

/// Parses a canonical unsigned decimal string: ASCII digits only, no sign,
/// no leading zeros except for `"0"` itself.
pub fn parse_decimal(s: &str) -> Result<BigUint> {
    if s.is_empty() {
        return Err(Error::Parse("empty integer literal".into()));
    }
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a decimal integer: {s:?}")));
    }
    if s.len() > 1 && s.starts_with('0') {
        return Err(Error::Parse(format!("leading zero in {s:?}")));
    }
    BigUint::parse_bytes(s.as_bytes(), 10)
        .ok_or_else(|| Error::Parse(format!("not a decimal integer: {s:?}")))
}
