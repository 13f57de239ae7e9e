//! Byte-stable rendering of numbers for CSV and JSON.

use modn_core::Complex64;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// 17 significant digits, lowercase scientific notation.
pub fn fixed(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float that serializes through [`fixed`]; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(fixed(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cplx {
    pub re: Num,
    pub im: Num,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Self {
            re: Num(z.re),
            im: Num(z.im),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types always serialize");
    text.push('\n');
    text
}

/// One CSV row; fields are never quoted since none contain separators.
pub fn csv_row<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = fields
        .into_iter()
        .map(|f| f.as_ref().to_owned())
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_format_shape() {
        assert_eq!(fixed(1.0), "1.0000000000000000e0");
        assert_eq!(fixed(-0.0078125), "-7.8125000000000000e-3");
        assert_eq!(fixed(1f64.cosh()), "1.5430806348152437e0");
    }

    #[test]
    fn json_numbers_are_fixed_and_parse_back() {
        let text = serde_json::to_string(&Cplx::from(Complex64::new(0.1, -3.0))).unwrap();
        assert_eq!(
            text,
            r#"{"re":1.0000000000000001e-1,"im":-3.0000000000000000e0}"#
        );
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["re"].as_f64(), Some(0.1));
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
    }
}
