//! JSON result records.

use serde_json::{json, Map, Value};
use shintani_core::exact::format_rational;
use shintani_core::padic::PadicScalar;
use shintani_core::Rational;

pub const SCHEMA: &str = "shintani-kit/1";

/// One run's output; `ok = false` signals a contract violation.
#[derive(Clone, Debug)]
pub struct Record {
    pub task: &'static str,
    pub input: Value,
    pub values: Value,
    pub certificates: Map<String, Value>,
    pub ok: bool,
}

impl Record {
    pub fn new(task: &'static str, input: Value) -> Self {
        Record { task, input, values: Value::Null, certificates: Map::new(), ok: true }
    }

    /// Records a boolean certificate; a false one fails the run.
    pub fn certify(&mut self, name: &str, pass: bool) {
        self.certificates.insert(name.to_string(), Value::Bool(pass));
        self.ok &= pass;
    }

    pub fn note(&mut self, name: &str, v: Value) {
        self.certificates.insert(name.to_string(), v);
    }

    pub fn to_json(&self, elapsed_ms: u128) -> Value {
        json!({
            "schema": SCHEMA,
            "task": self.task,
            "input": self.input,
            "values": self.values,
            "certificates": self.certificates,
            "ok": self.ok,
            "timing": { "elapsed_ms": elapsed_ms as u64 },
        })
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// `{residue, p, M, guard}` with the residue taken mod `p^{M − guard}`.
pub fn padic(v: &PadicScalar, requested: u32) -> Value {
    let guard = requested.saturating_sub(v.precision);
    json!({ "residue": v.value, "p": v.p, "M": requested, "guard": guard })
}

pub fn rational_vec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use shintani_core::exact::rat;

    #[test]
    fn padic_values_carry_precision() {
        let v = PadicScalar::new(5, 3, 4);
        assert_eq!(padic(&v, 6), json!({"residue": 5, "p": 3, "M": 6, "guard": 2}));
        assert_eq!(rational(&rat(-1, 12)), json!("-1/12"));
    }

    #[test]
    fn false_certificate_fails_the_record() {
        let mut r = Record::new("zeta", Value::Null);
        r.certify("a", true);
        assert!(r.ok);
        r.certify("b", false);
        assert!(!r.ok);
        assert_eq!(r.to_json(0)["schema"], SCHEMA);
    }
}
