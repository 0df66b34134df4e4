use std::io::Write;

/// Formats with nine significant digits, `.` as decimal separator and no
/// locale dependence. Plain notation for exponents in `[-5, 9)`, scientific
/// otherwise.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..9).contains(&exp) {
        format!("{x:.prec$}", prec = (8 - exp) as usize)
    } else {
        sci
    }
}

pub fn write_table<W: Write>(out: W, header: &[String], rows: &[Vec<String>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(1.0), "1.00000000");
        assert_eq!(sig9(0.0), "0.00000000");
        assert_eq!(sig9(-90.0), "-90.0000000");
        assert_eq!(sig9(14.4775121859), "14.4775122");
        assert_eq!(sig9(0.000123), "0.000123000000");
        assert_eq!(sig9(1.0e-7), "1.00000000e-7");
        assert_eq!(sig9(123456789012.0), "1.23456789e11");
        // rounding that bumps the exponent
        assert_eq!(sig9(9.999999999), "10.0000000");
    }

    #[test]
    fn parses_back_within_half_unit_in_ninth_digit() {
        for x in [0.123456789123, 0.999999999, 1.23456789987, 1e-3 / 7.0] {
            let y: f64 = sig9(x).parse().unwrap();
            assert!((x - y).abs() <= 5e-9 * x.abs());
        }
    }
}
