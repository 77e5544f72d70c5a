use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::value::{to_raw_value, RawValue};

use foliation_core::report::json_f64;
use foliation_core::symbolic::format_rational;
use foliation_core::Rational;

/// One named verification with its measured values, kept in insertion
/// order.
#[derive(Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub exact: bool,
    values: Vec<(String, Box<RawValue>)>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, exact: bool) -> Self {
        Check {
            name: name.into(),
            pass,
            exact,
            values: Vec::new(),
        }
    }

    pub fn num(mut self, key: &str, x: f64) -> Self {
        self.values.push((key.into(), json_f64(x)));
        self
    }

    pub fn rational(self, key: &str, r: &Rational) -> Self {
        self.text(key, &format_rational(r))
    }

    pub fn text(self, key: &str, s: &str) -> Self {
        self.value(key, &s)
    }

    pub fn point(mut self, key: &str, x: &[f64]) -> Self {
        let items: Vec<Box<RawValue>> = x.iter().map(|&v| json_f64(v)).collect();
        self.values
            .push((key.into(), to_raw_value(&items).expect("serializable")));
        self
    }

    pub fn value<T: Serialize + ?Sized>(mut self, key: &str, v: &T) -> Self {
        self.values
            .push((key.into(), to_raw_value(v).expect("serializable")));
        self
    }
}

struct Values<'a>(&'a [(String, Box<RawValue>)]);

impl Serialize for Values<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("name", &self.name)?;
        map.serialize_entry("pass", &self.pass)?;
        map.serialize_entry("exact", &self.exact)?;
        map.serialize_entry("values", &Values(&self.values))?;
        map.end()
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub schema: u32,
    pub command: String,
    pub scenario: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
}

impl Summary {
    pub fn new(command: &str, scenario: &str, seed: u64) -> Self {
        Summary {
            schema: 1,
            command: command.into(),
            scenario: scenario.into(),
            seed,
            passed: true,
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.pass;
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_summary_passes() {
        let s = Summary::new("flow", "fold", 0);
        assert!(s.passed);
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["checks"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn values_keep_order() {
        let c = Check::new("x", true, true).num("b", 0.5).text("a", "q");
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(
            json,
            r#"{"name":"x","pass":true,"exact":true,"values":{"b":5.0000000000000000e-1,"a":"q"}}"#
        );
    }
}
