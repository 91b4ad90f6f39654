/// Formats `v` with 12 significant digits, like C's `%.12g`.
pub fn format_real(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    // Rounding to 12 digits first fixes the exponent after any carry.
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_real(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(-0.25), "-0.25");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(1e-7), "1e-7");
        assert_eq!(format_real(123456789012345.0), "1.23456789012e14");
        assert_eq!(format_real(999999999999.9), "1e12");
        assert_eq!(format_real(0.000123456789012345), "0.000123456789012");
        assert_eq!(format_real(f64::NAN), "NaN");
    }

    #[test]
    fn parses_back_within_precision() {
        for &v in &[1.0 / 3.0, 2.0f64.sqrt() * 1e20, -7.25e-9, 0.8230338] {
            let back: f64 = format_real(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-11, "{v}");
        }
    }
}
