//! JSON conventions: exact rationals as {"num", "den"}, floats as 17-digit decimal strings.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::arith::{Bqf, Rational};
use crate::stats::float17;

pub const SCHEMA: u32 = 1;

pub fn big(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

pub fn rat(q: &Rational) -> Value {
    json!({"num": big(q.numer()), "den": big(q.denom())})
}

pub fn flt(x: f64) -> Value {
    Value::String(float17(x))
}

pub fn cpx(z: Complex64) -> Value {
    json!({"re": flt(z.re), "im": flt(z.im)})
}

pub fn form(f: &Bqf) -> Value {
    json!([big(&f.a), big(&f.b), big(&f.c)])
}

pub fn envelope(command: &str, params: Value, results: Vec<Value>) -> Value {
    json!({"schema": SCHEMA, "command": command, "params": params, "results": results})
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
