//! Exact rational values shared by every closed-form formula.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type ExactScalar = BigRational;

pub fn int<T: Into<BigInt>>(v: T) -> ExactScalar {
    BigRational::from_integer(v.into())
}

/// `num / den` reduced. Panics when `den` is zero.
pub fn ratio<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> ExactScalar {
    BigRational::new(num.into(), den.into())
}

/// Binomial coefficient C(n, k); zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// C(n, 2) as a machine integer.
pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Sum of edge lengths of the complete graph on `n` vertices, (n+1)n(n-1)/6.
pub fn complete_graph_d(n: u64) -> u64 {
    if n < 2 {
        return 0;
    }
    (n + 1) * n * (n - 1) / 6
}

pub fn to_f64(x: &ExactScalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders as `p/q`, or `p` when the value is an integer.
pub fn render(x: &ExactScalar) -> String {
    x.to_string()
}

/// Decimal rendering with up to `digits` fractional digits, computed exactly
/// and then rounded half away from zero.
pub fn render_decimal(x: &ExactScalar, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x * int(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let (whole, frac) = rounded.abs().div_rem(&scale);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        let frac = format!("{:0>width$}", frac.to_string(), width = digits);
        let frac = frac.trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        // C(C(13,2), 39) does not fit in 64 bits.
        assert!(binomial(78, 39) > BigInt::from(u64::MAX));
    }

    #[test]
    fn rationals_are_reduced() {
        let x = ratio(2168, 10);
        assert_eq!(render(&x), "1084/5");
        assert_eq!(render(&int(96)), "96");
        assert_eq!(render_decimal(&x, 6), "216.8");
        assert_eq!(render_decimal(&ratio(-2, 3), 3), "-0.667");
        assert_eq!(render_decimal(&int(7), 4), "7");
    }

    #[test]
    fn complete_graph_sum() {
        assert_eq!(complete_graph_d(4), 10);
        assert_eq!(complete_graph_d(1), 0);
        assert_eq!(complete_graph_d(17), 816);
    }
}
