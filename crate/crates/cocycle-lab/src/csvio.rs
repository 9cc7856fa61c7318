//! Minimal CSV emission helpers shared by the sweep commands and figure
//! generators: RFC 4180 quoting and a fixed 6-significant-digit float format
//! so that identical inputs produce byte-identical files.

use std::io::Write;

/// Formats a float with 6 significant digits, trimming trailing zeros, in the
/// style of printf `%g`.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let mut s = if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        let t = format!("{:.5e}", x);
        // Normalize Rust's "1.23450e2" into "1.2345e+02".
        let (mant, e) = t.split_once('e').expect("exponent marker");
        let ev: i32 = e.parse().expect("exponent value");
        let mant = trim_zeros(mant);
        return format!("{}e{}{:02}", mant, if ev < 0 { '-' } else { '+' }, ev.abs());
    };
    if s.contains('.') {
        s = trim_zeros(&s).to_string();
    }
    s
}

fn trim_zeros(s: &str) -> &str {
    if !s.contains('.') {
        return s;
    }
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').unwrap_or(s)
}

/// Quotes a field per RFC 4180 when it contains a comma, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes one CSV row with a trailing newline.
pub fn write_row<W: Write>(w: &mut W, fields: &[&str]) -> std::io::Result<()> {
    let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    writeln!(w, "{}", row.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_fixed_range() {
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(1.0), "1");
        assert_eq!(fmt_sig6(-0.223144), "-0.223144");
        assert_eq!(fmt_sig6(24.242727), "24.2427");
        assert_eq!(fmt_sig6(0.458548498), "0.458548");
        assert_eq!(fmt_sig6(0.1), "0.1");
        assert_eq!(fmt_sig6(21.6), "21.6");
        assert_eq!(fmt_sig6(123456.0), "123456");
    }

    #[test]
    fn sig6_sci_range() {
        assert_eq!(fmt_sig6(1.234567e8), "1.23457e+08");
        assert_eq!(fmt_sig6(-3.2e-7), "-3.2e-07");
        assert_eq!(fmt_sig6(1e6), "1e+06");
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn rows() {
        let mut buf = Vec::new();
        write_row(&mut buf, &["E", "bound"]).unwrap();
        write_row(&mut buf, &["-2", "0.727312"]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "E,bound\n-2,0.727312\n");
    }
}
