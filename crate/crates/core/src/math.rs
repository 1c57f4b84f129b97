//! Small integer helpers.

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
///
/// Saturates at `u64::MAX`; every caller in this crate stays far below that.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Signed variant used where the upper index may be negative in a formula;
/// any negative argument yields zero.
pub fn binomial_i(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}

/// `q^e`, or `None` on overflow.
pub fn checked_pow(q: u64, e: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

/// `ceil(a / b)` for `b > 0`.
pub fn div_ceil(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(9, 4), 126);
        assert_eq!(binomial(4, 6), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
        assert_eq!(binomial_i(-1, 0), 0);
        assert_eq!(binomial_i(5, 2), 10);
    }

    #[test]
    fn pow_overflow() {
        assert_eq!(checked_pow(2, 10), Some(1024));
        assert_eq!(checked_pow(3, 0), Some(1));
        assert_eq!(checked_pow(2, 64), None);
    }
}
