//! Text formatting shared by the CSV writers.

/// Formats a real with 17 significant digits.
pub fn real(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.16e}", x)
    }
}

/// Joins already formatted fields into one CSV line terminated by LF.
pub fn row<S: AsRef<str>>(fields: &[S]) -> String {
    let mut line = fields.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        let x = 0.1_f64 + 0.2;
        let s = real(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
        let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
    }

    #[test]
    fn specials() {
        assert_eq!(real(f64::INFINITY), "inf");
        assert_eq!(row(&["a", "b"]), "a,b\n");
    }
}
