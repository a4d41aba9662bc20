//! Rounding of the decimal numbers inside formatted semiring values.

/// Rewrites every decimal token in `text` (a token with a fraction or an
/// exponent) to `digits` significant digits, then prints the rounded value in
/// its shortest form. Log-domain values (after `log:`) are rounded to
/// `digits - 1` decimal places instead, since their error is absolute.
/// Integers, variable indices and exponents of monomials are left alone.
/// `digits == 0` returns `text` unchanged.
pub fn round_decimals(text: &str, digits: usize) -> String {
    if digits == 0 {
        return text.to_string();
    }
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let attached = i > 0 && (bytes[i - 1].is_ascii_alphanumeric() || matches!(bytes[i - 1], b'^' | b'_'));
        if !c.is_ascii_digit() || attached {
            out.push(c as char);
            i += 1;
            continue;
        }
        let end = token_end(bytes, i);
        let token = &text[i..end];
        match token.parse::<f64>() {
            Ok(x) if token.contains(['.', 'e', 'E']) => {
                let log = text[..i].ends_with("log:") || text[..i].ends_with("log:-");
                let r = round(x, digits, log);
                if r == "0" && out.ends_with('-') && !out.ends_with(" -") {
                    out.pop();
                }
                out.push_str(&r);
            }
            _ => out.push_str(token),
        }
        i = end;
    }
    out
}

fn token_end(bytes: &[u8], start: usize) -> usize {
    let mut j = start;
    while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
        j += 1;
    }
    if j < bytes.len() && matches!(bytes[j], b'e' | b'E') {
        let mut k = j + 1;
        if k < bytes.len() && matches!(bytes[k], b'+' | b'-') {
            k += 1;
        }
        if k < bytes.len() && bytes[k].is_ascii_digit() {
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            j = k;
        }
    }
    j
}

fn round(x: f64, digits: usize, absolute: bool) -> String {
    let text = if absolute { format!("{:.*}", digits - 1, x) } else { format!("{:.*e}", digits - 1, x) };
    let rounded: f64 = text.parse().unwrap_or(x);
    format!("{}", rounded + 0.0)
}
