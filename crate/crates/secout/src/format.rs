//! Number formatting shared by tables and CSV files.
//!
//! Values are rounded to 12 significant digits and then printed as the
//! shortest decimal that reads back to the rounded value, so output is stable
//! across platforms and diffs stay small.

/// Printed for values that are not defined for a scenario.
pub const NOT_APPLICABLE: &str = "NA";

pub fn number(v: f64) -> String {
    if v.is_nan() {
        return NOT_APPLICABLE.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("float formatting round-trips");
    if (1e-5..1e15).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn optional(v: Option<f64>) -> String {
    v.map_or_else(|| NOT_APPLICABLE.to_string(), number)
}

/// `v` as the value its printed form denotes.
pub fn as_printed(v: f64) -> f64 {
    number(v).parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(number(0.1 + 0.2), "0.3");
        assert_eq!(number(1.0 / 3.0), "0.333333333333");
        assert_eq!(number(2.0 / 3.0), "0.666666666667");
        assert_eq!(number(123456.7890123456), "123456.789012");
        assert_eq!(number(0.445720013), "0.445720013");
        assert_eq!(number(1.5e-5), "0.000015");
        assert_eq!(number(1.23456789012345e-9), "1.23456789012e-9");
        assert_eq!(number(-2.5), "-2.5");
        assert_eq!(number(40.0), "40");
        assert_eq!(number(1e20), "1e20");
    }

    #[test]
    fn special_values() {
        assert_eq!(number(0.0), "0");
        assert_eq!(number(-0.0), "0");
        assert_eq!(number(f64::NAN), "NA");
        assert_eq!(optional(None), "NA");
        assert_eq!(number(f64::INFINITY), "inf");
    }

    #[test]
    fn printed_values_read_back() {
        for v in [0.1 + 0.2, 5.000000000001, 1.0 / 7.0, 3e-7] {
            assert_eq!(number(as_printed(v)), number(v));
        }
        assert_eq!(as_printed(0.1 + 0.2), 0.3);
    }
}
