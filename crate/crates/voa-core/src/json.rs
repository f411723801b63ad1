//! Canonical JSON: object keys sorted, floats printed with 17 significant
//! digits, LF line endings, trailing newline.  Reports and model files are
//! emitted through this path so byte-identical reruns hash identically.

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io;

struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize any value to canonical JSON text.
pub fn to_canonical_string<T: Serialize>(v: &T) -> String {
    // Round-trip through Value: serde_json's Map preserves insertion order,
    // so rebuild every object with sorted keys first.
    let val = serde_json::to_value(v).expect("serialize");
    let val = sort_keys(val);
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, CanonicalFormatter);
    val.serialize(&mut ser).expect("canonical serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("json is utf8")
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = serde_json::Map::new();
            for (k, val) in entries {
                out.insert(k, sort_keys(val));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_sorted_and_floats_fixed() {
        let v = json!({"b": 1, "a": {"z": 0.1, "y": 2.0}});
        let s = to_canonical_string(&v);
        assert_eq!(
            s,
            "{\"a\":{\"y\":2.0000000000000000e0,\"z\":1.0000000000000001e-1},\"b\":1}\n"
        );
    }

    #[test]
    fn deterministic_hash() {
        let v = json!({"x": [1, 2, 3]});
        let a = sha256_hex(to_canonical_string(&v).as_bytes());
        let b = sha256_hex(to_canonical_string(&v).as_bytes());
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
    }
}
