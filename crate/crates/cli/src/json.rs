//! A small deterministic JSON writer.
//!
//! `serde_json` renders floats in shortest-round-trip form, which is
//! correct but varies in width; the output contract pins every number to
//! 17 significant digits so files can be compared byte-for-byte. This
//! writer renders floats uniformly (`{:.16e}`), keeps object keys in
//! insertion order, maps non-finite floats to `null`, and pretty-prints
//! with lists of scalars kept on one line.

/// The fixed 17-significant-digit rendering used for every float the tool
/// emits, in JSON and CSV alike.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON value with insertion-ordered object keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    /// Rendered via [`fmt_f64`]; non-finite values render as `null`.
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn num_or_null(x: f64) -> Json {
        if x.is_finite() {
            Json::Num(x)
        } else {
            Json::Null
        }
    }

    /// Complex number as a fixed `[re, im]` pair.
    pub fn complex(re: f64, im: f64) -> Json {
        Json::Arr(vec![Json::Num(re), Json::Num(im)])
    }

    pub fn floats(values: impl IntoIterator<Item = f64>) -> Json {
        Json::Arr(values.into_iter().map(Json::Num).collect())
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Json::Arr(_) | Json::Obj(_))
    }

    /// Pretty rendering with a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Num(x) => {
                if x.is_finite() {
                    out.push_str(&fmt_f64(*x));
                } else {
                    out.push_str("null");
                }
            }
            Json::Str(s) => write_escaped(out, s),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Arr(items) if items.iter().all(Json::is_scalar) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Json::Arr(items) => {
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                    if i + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                push_indent(out, indent);
                out.push(']');
            }
            Json::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Json::Obj(fields) => {
                out.push_str("{\n");
                for (i, (key, value)) in fields.iter().enumerate() {
                    push_indent(out, indent + 1);
                    write_escaped(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                    if i + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_render_at_17_significant_digits() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.25), "-2.5000000000000000e-1");
        assert_eq!(
            fmt_f64(std::f64::consts::PI),
            "3.1415926535897931e0"
        );
    }

    #[test]
    fn rendered_floats_round_trip() {
        for x in [1.0, -1.0 / 3.0, 1e-300, 2.3e17, f64::MIN_POSITIVE] {
            let parsed: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(parsed, x, "{x} rendered as {}", fmt_f64(x));
        }
    }

    #[test]
    fn scalar_arrays_stay_on_one_line() {
        let v = Json::Obj(vec![
            ("name", Json::Str("grid".into())),
            ("values", Json::floats([1.0, 2.0])),
            ("empty", Json::Arr(vec![])),
        ]);
        let text = v.render();
        assert!(text.contains("\"values\": [1.0000000000000000e0, 2.0000000000000000e0]"));
        assert!(text.contains("\"empty\": []"));
    }

    #[test]
    fn nested_arrays_break_across_lines() {
        let v = Json::Arr(vec![Json::floats([1.0]), Json::floats([2.0])]);
        let text = v.render();
        assert_eq!(text, "[\n  [1.0000000000000000e0],\n  [2.0000000000000000e0]\n]\n");
    }

    #[test]
    fn non_finite_floats_become_null() {
        let v = Json::Arr(vec![Json::Num(f64::INFINITY), Json::Num(f64::NAN)]);
        assert_eq!(v.render(), "[null, null]\n");
    }

    #[test]
    fn strings_are_escaped() {
        let v = Json::Str("a\"b\\c\nd".into());
        assert_eq!(v.render(), "\"a\\\"b\\\\c\\nd\"\n");
    }

    #[test]
    fn output_is_valid_json() {
        let v = Json::Obj(vec![
            ("multiplicity", Json::Int(3)),
            ("values", Json::floats([0.5, f64::INFINITY])),
            ("label", Json::Str("x\ty".into())),
            ("nested", Json::Obj(vec![("flag", Json::Bool(true))])),
        ]);
        let reparsed: serde_json::Value = serde_json::from_str(&v.render()).unwrap();
        assert_eq!(reparsed["multiplicity"], 3);
        assert_eq!(reparsed["values"][1], serde_json::Value::Null);
    }
}
