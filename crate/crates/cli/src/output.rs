//! Deterministic artifact emission.
//!
//! Every command writes exactly one artifact — JSON or CSV — to stdout or to
//! `--output`. Identical inputs must produce byte-identical artifacts, so
//! everything here is order-stable: JSON objects come from structs (field
//! order fixed) or sorted maps, CSV headers are fixed strings, and every
//! float is printed in decimal scientific notation with 17 significant
//! digits, which round-trips `f64` exactly.

use std::io;

use serde::Serialize;

/// Version stamp carried by every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;

/// One float, 17 significant digits, decimal scientific form.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON formatter that prints every float via [`f17`]. Non-finite values
/// (which no healthy report contains) degrade to `null` so the artifact
/// stays parseable.
struct Float17;

impl serde_json::ser::Formatter for Float17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, f64::from(value))
    }
}

/// Envelope around every JSON artifact: schema stamp, the subcommand that
/// produced it, the inputs it ran with, and the result payload.
#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    pub inputs: serde_json::Value,
    pub result: T,
}

/// Serialize a value as a single-line JSON artifact with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out)?)
}

/// Quote a CSV field when it contains a separator, quote, or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Assemble a CSV artifact from a fixed header and row fields.
pub fn csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::with_capacity(header.len() + rows.len() * 32);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let escaped: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&escaped.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_significant_digits() {
        assert_eq!(f17(0.5), "5.0000000000000000e-1");
        assert_eq!(f17(1.0 / 3.0), "3.3333333333333331e-1");
        // Round-trip exactness: 17 significant digits recover the bits.
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, 2.25e-300, -7.1e88] {
            assert_eq!(f17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_floats_use_the_fixed_format() {
        #[derive(Serialize)]
        struct Probe {
            x: f64,
            n: usize,
        }
        let s = to_json(&Probe { x: 0.25, n: 3 }).unwrap();
        assert_eq!(s, "{\"x\":2.5000000000000000e-1,\"n\":3}\n");
    }

    #[test]
    fn csv_fields_escape_separators() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        let table = csv("k,v", &[vec!["1".into(), "x,y".into()]]);
        assert_eq!(table, "k,v\n1,\"x,y\"\n");
    }
}
