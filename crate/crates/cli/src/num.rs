//! Locale-independent number formatting with 17 significant digits, the
//! equivalent of C's `%.17g`.

/// Formats `x` like `printf("%.17g", x)`. Non-finite values become `nan`,
/// `inf` or `-inf`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs());
    }
    let decimals = (16 - exp) as usize;
    strip_zeros(&format!("{x:.decimals$}")).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A JSON number carrying the exact `%.17g` text; `None` for non-finite
/// input, which callers serialize as `null`.
pub fn json_number(x: f64) -> Option<serde_json::Number> {
    if !x.is_finite() {
        return None;
    }
    Some(g17(x).parse().expect("%.17g output is a valid JSON number"))
}

pub fn json_value(x: f64) -> serde_json::Value {
    json_number(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        let cases = [
            (0.2, "0.20000000000000001"),
            (1.0, "1"),
            (0.5, "0.5"),
            (-2.5, "-2.5"),
            (1e-5, "1.0000000000000001e-05"),
            (1e-4, "0.0001"),
            (123456.0, "123456"),
            (1e17, "1e+17"),
            (1e16, "10000000000000000"),
            (std::f64::consts::PI, "3.1415926535897931"),
            (1e300, "1.0000000000000001e+300"),
            (5e-324, "4.9406564584124654e-324"),
        ];
        for (x, want) in cases {
            assert_eq!(g17(x), want, "{x:e}");
        }
    }

    #[test]
    fn round_trips() {
        let mut x = 0.123_456_789_f64;
        for _ in 0..2000 {
            x = (x * 7.31 + 0.17).fract() * 10f64.powi((x * 40.0) as i32 - 20);
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_preserves_digits() {
        let v = serde_json::json!({ "v": json_value(0.2), "n": json_value(f64::NAN) });
        assert_eq!(v.to_string(), r#"{"n":null,"v":0.20000000000000001}"#);
    }
}
