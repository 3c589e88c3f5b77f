//! Fixed 12-significant-digit number rendering shared by reports and JSON.

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let r: f64 = s.parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Renders with exactly 12 significant digits, in positional notation for
/// moderate magnitudes and scientific notation otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    let exp = r.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{r:.decimals$}")
    } else {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_sig(0.5), "0.500000000000");
        assert_eq!(fmt_sig(1.0), "1.00000000000");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_sig(0.0), "0.00000000000");
        assert_eq!(fmt_sig(-0.0), "0.00000000000");
        assert_eq!(fmt_sig(-1e-17), "-1.00000000000e-17");
        assert_eq!(fmt_sig(0.99999999999999), "1.00000000000");
        assert_eq!(fmt_sig(123456.0), "123456.000000");
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(std::f64::consts::FRAC_1_SQRT_2), 0.707106781187);
        assert_eq!(round_sig(-0.0), 0.0);
        assert!(round_sig(-0.0).is_sign_positive());
    }
}
