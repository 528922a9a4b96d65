//! Exact rationals, always rendered as `p/q`.

use num_rational::Ratio;
use serde::Serializer;

pub type Rational = Ratio<i64>;

/// `p/q` in lowest terms, including integers (`4/1`).
pub fn fmt_ratio(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(q))
}
