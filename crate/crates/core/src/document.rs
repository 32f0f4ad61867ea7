//! Instance documents: JSON with ascending integer coefficient arrays and
//! rationals as `"a/b"` strings. Diagnostics name the offending JSON path,
//! or the line and column for syntax errors.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::config::Mode;
use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, parse_rational};
use crate::polyfield::IntPoly;
use crate::sequence::{HGInstance, Problem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceDocument {
    pub p: IntPoly,
    pub q: IntPoly,
    pub u0: BigRational,
    pub t: BigRational,
    pub problem: Problem,
    pub mode: Option<Mode>,
}

const FIELDS: [&str; 6] = ["p", "q", "u0", "t", "problem", "mode"];

fn at(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn integer(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(n.to_string().parse().expect("integer literal"))
        }
        Value::Number(n) => Err(at(path, format!("{n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| at(path, format!("{s:?} is not an integer"))),
        other => Err(at(
            path,
            format!("expected an integer, found {}", kind(other)),
        )),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn poly(v: &Value, path: &str) -> Result<IntPoly> {
    let Value::Array(items) = v else {
        return Err(at(
            path,
            format!("expected a coefficient array, found {}", kind(v)),
        ));
    };
    let cs = items
        .iter()
        .enumerate()
        .map(|(i, c)| integer(c, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let f = IntPoly::new(cs);
    if f.is_zero() {
        return Err(at(path, "the zero polynomial"));
    }
    Ok(f)
}

fn rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            parse_rational(s).map_err(|_| at(path, format!("{s:?} is not a rational \"a/b\"")))
        }
        Value::Number(_) => integer(v, path).map(BigRational::from_integer),
        other => Err(at(
            path,
            format!("expected a rational string, found {}", kind(other)),
        )),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| at("$", format!("missing field {name:?}")))
}

impl InstanceDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_value(&parse_json(text)?)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let Value::Object(obj) = v else {
            return Err(at("$", format!("expected an object, found {}", kind(v))));
        };
        if let Some(k) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(at(&format!("$.{k}"), "unknown field"));
        }
        let problem = match field(obj, "problem")? {
            Value::String(s) if s == "membership" => Problem::Membership,
            Value::String(s) if s == "threshold" => Problem::Threshold,
            other => {
                return Err(at(
                    "$.problem",
                    format!("expected \"membership\" or \"threshold\", found {other}"),
                ))
            }
        };
        let mode = match obj.get("mode") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(
                s.parse::<Mode>()
                    .map_err(|_| at("$.mode", format!("unknown mode {s:?}")))?,
            ),
            Some(other) => {
                return Err(at(
                    "$.mode",
                    format!("expected a string, found {}", kind(other)),
                ))
            }
        };
        let doc = InstanceDocument {
            p: poly(field(obj, "p")?, "$.p")?,
            q: poly(field(obj, "q")?, "$.q")?,
            u0: rational(field(obj, "u0")?, "$.u0")?,
            t: rational(field(obj, "t")?, "$.t")?,
            problem,
            mode,
        };
        doc.instance().map_err(|e| at("$", e))?;
        Ok(doc)
    }

    pub fn instance(&self) -> Result<HGInstance> {
        HGInstance::new(
            self.p.clone(),
            self.q.clone(),
            self.u0.clone(),
            self.t.clone(),
            self.problem,
        )
    }

    pub fn from_instance(inst: &HGInstance, mode: Option<Mode>) -> Self {
        InstanceDocument {
            p: inst.p.clone(),
            q: inst.q.clone(),
            u0: inst.u0.clone(),
            t: inst.t.clone(),
            problem: inst.problem,
            mode,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "p": coeffs_json(&self.p),
            "q": coeffs_json(&self.q),
            "u0": format_rational(&self.u0),
            "t": format_rational(&self.t),
            "problem": self.problem.to_string(),
        });
        if let Some(m) = self.mode {
            v["mode"] = json!(m.as_str());
        }
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }
}

/// Coefficients as JSON numbers, or strings beyond 64 bits.
pub fn coeffs_json(f: &IntPoly) -> Value {
    Value::Array(
        f.coeffs()
            .iter()
            .map(|c| match i64::try_from(c) {
                Ok(k) => json!(k),
                Err(_) => json!(c.to_string()),
            })
            .collect(),
    )
}

/// A polynomial file: a bare coefficient array or an object with `"poly"`.
pub fn parse_poly_document(text: &str) -> Result<IntPoly> {
    let v = parse_json(text)?;
    match &v {
        Value::Array(_) => poly(&v, "$"),
        Value::Object(obj) => poly(field(obj, "poly")?, "$.poly"),
        other => Err(at(
            "$",
            format!("expected an array or an object, found {}", kind(other)),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    const GAUSS13: &str =
        r#"{"p": [13, -4, 1], "q": [5, -4, 1], "u0": "1", "t": "1/13", "problem": "membership"}"#;

    #[test]
    fn parses_and_round_trips() {
        let d = InstanceDocument::parse(GAUSS13).unwrap();
        assert_eq!(d.t, rat(1, 13));
        assert_eq!(d.mode, None);
        assert_eq!(InstanceDocument::parse(&d.to_json()).unwrap(), d);
        let big = r#"{"p": ["123456789012345678901234567890", 1], "q": [2, 1], "u0": "-3/4", "t": 2,
                      "problem": "threshold", "mode": "conditional"}"#;
        let d = InstanceDocument::parse(big).unwrap();
        assert_eq!(d.mode, Some(Mode::Conditional));
        assert_eq!(InstanceDocument::parse(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn diagnostics_name_the_position() {
        let e = InstanceDocument::parse(
            r#"{"p": [1, 2.5], "q": [1], "u0": "1", "t": "1", "problem": "membership"}"#,
        );
        assert!(e.unwrap_err().to_string().contains("$.p[1]"));
        let e = InstanceDocument::parse("{\"p\": [1,\n 2,, 3]}")
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = InstanceDocument::parse(
            r#"{"p": [1], "q": [1], "u0": "1/0", "t": "1", "problem": "membership"}"#,
        );
        assert!(e.unwrap_err().to_string().contains("$.u0"));
        let e = InstanceDocument::parse(
            r#"{"p": [1], "q": [1], "u0": "1", "t": "1", "problem": "both"}"#,
        );
        assert!(e.unwrap_err().to_string().contains("$.problem"));
        let e = InstanceDocument::parse(
            r#"{"p": [-2, 1], "q": [1], "u0": "1", "t": "1", "problem": "membership"}"#,
        );
        assert!(e.unwrap_err().to_string().contains("p vanishes"));
        let e = InstanceDocument::parse(
            r#"{"p": [1], "q": [1], "u0": "1", "t": "1", "problem": "membership", "x": 1}"#,
        );
        assert!(e.unwrap_err().to_string().contains("$.x"));
    }

    #[test]
    fn polynomial_files() {
        assert_eq!(
            parse_poly_document("[1, 0, -1]").unwrap(),
            IntPoly::from_i64(&[1, 0, -1])
        );
        assert_eq!(
            parse_poly_document(r#"{"poly": [1, -1, 1]}"#).unwrap(),
            IntPoly::from_i64(&[1, -1, 1])
        );
        assert!(parse_poly_document("[0]").is_err());
    }
}
