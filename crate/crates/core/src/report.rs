//! Number formatting and CSV assembly for persisted artifacts.

use serde::Serialize;
use serde_json::value::RawValue;

use crate::symbolic::{format_rational, Rational};

/// `x` with 17 significant digits in scientific notation. Non-finite values
/// are written as `nan`, `inf` or `-inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// JSON number with 17 significant digits (`null` for non-finite values).
pub fn json_f64(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        fmt_f64(x)
    } else {
        "null".into()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

/// Serializes an `f64` field through [`json_f64`].
pub fn serialize_f64<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    json_f64(*x).serialize(s)
}

/// Serializes a list of `f64` through [`json_f64`].
pub fn serialize_f64_vec<S: serde::Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    xs.iter()
        .map(|&x| json_f64(x))
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Serializes an optional list of `f64` through [`json_f64`].
pub fn serialize_opt_f64_vec<S: serde::Serializer>(
    xs: &Option<Vec<f64>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    xs.as_ref()
        .map(|v| v.iter().map(|&x| json_f64(x)).collect::<Vec<_>>())
        .serialize(s)
}

/// Rational as a `num/den` string.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Comma-separated table with LF line endings and a fixed header.
#[derive(Clone, Debug)]
pub struct Csv {
    width: usize,
    out: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Csv {
            width: header.len(),
            out,
        }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cells: Vec<S> = cells.into_iter().collect();
        debug_assert_eq!(cells.len(), self.width);
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.out.push_str(c.as_ref());
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
