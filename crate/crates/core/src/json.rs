use serde_json::Value;

use crate::scalar::IntScalar;

/// Integers become JSON numbers when they fit in an `i64`, decimal strings
/// otherwise.
pub(crate) fn int<T: IntScalar>(v: &T) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

pub(crate) fn ints<T: IntScalar>(vs: &[T]) -> Value {
    Value::Array(vs.iter().map(int).collect())
}
