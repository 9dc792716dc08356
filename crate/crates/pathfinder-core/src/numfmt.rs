//! Shared numeric formatting for file emission.
//!
//! All floating-point values written to CSV or the event log go through
//! [`sig12`] so that re-reading an emitted file is stable: parsing the
//! string and formatting it again reproduces the same bytes.

/// Formats `x` with `digits` significant digits, preferring positional
/// notation for moderate magnitudes and falling back to scientific form.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("exponent");
    // Keep positional form while it stays readable.
    if exp < -4 || exp >= digits as i32 + 4 {
        return trim_mantissa(mantissa, exp);
    }
    let neg = mantissa.starts_with('-');
    let body: String = mantissa
        .chars()
        .filter(|c| c.is_ascii_digit())
        .collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp >= 0 {
        let int_len = exp as usize + 1;
        if int_len >= body.len() {
            out.push_str(&body);
            out.extend(std::iter::repeat('0').take(int_len - body.len()));
        } else {
            out.push_str(&body[..int_len]);
            let frac = body[int_len..].trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        }
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat('0').take((-exp - 1) as usize));
        out.push_str(body.trim_end_matches('0'));
    }
    out
}

fn trim_mantissa(mantissa: &str, exp: i32) -> String {
    let trimmed = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{trimmed}e{exp}")
}

/// Twelve significant digits, the emission precision used across the toolkit.
pub fn sig12(x: f64) -> String {
    sig(x, 12)
}
