//! Decimal rendering for CSV and JSON: 15 significant digits, ties rounded
//! half to even on the exact binary value.

/// `x` with 15 significant digits, positional notation for moderate
/// magnitudes and `d.ddde±x` otherwise. Trailing zeros are trimmed.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    if !(-6..15).contains(&exp) {
        let m = trim(&format!("{}.{}", &digits[..1], &digits[1..]));
        return format!("{sign}{m}e{exp}");
    }
    let body = if exp >= 0 {
        let point = exp as usize + 1;
        format!("{}.{}", &digits[..point], &digits[point..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{}", trim(&body))
}

fn trim(s: &str) -> String {
    if !s.contains('.') {
        return s.into();
    }
    s.trim_end_matches('0').trim_end_matches('.').into()
}

/// `x` rounded to the value [`sig15`] prints.
pub fn round15(x: f64) -> f64 {
    sig15(x).parse().unwrap_or(x)
}
