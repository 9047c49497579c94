//! Exact rational time values.
//!
//! All schedule times are `Ratio<i128>`. Serialized form is always `"p/q"`,
//! parsing also accepts a bare integer `"p"`.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

pub fn frac(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(int(s.parse().map_err(|_| bad())?)),
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// `⌈r⌉` as an integer.
pub fn ceil_i128(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Serde adapter for `Rational` fields as `"p/q"` strings.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}
