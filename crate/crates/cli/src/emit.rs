//! Report serialization.
//!
//! CSV columns are `statement_id, domain, inputs, lhs, rhs, margin,
//! tolerance, pass, err`, with the inputs packed as `name=value;…` in
//! emission order. JSON output is one object per line with the same field
//! names and `inputs` as an object. Floats carry 17 significant digits;
//! non-finite values are `NaN`/`inf` in CSV and `null` in JSON.

use std::fmt;
use std::io::Write;

use bergman_core::VerificationReport;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub const CSV_HEADER: [&str; 9] =
    ["statement_id", "domain", "inputs", "lhs", "rhs", "margin", "tolerance", "pass", "err"];

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
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

fn json_float(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format_float(x) } else { "null".into() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

struct Inputs<'a>(&'a [(String, f64)]);

impl Serialize for Inputs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, &json_float(*v))?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct JsonOut<'a> {
    statement_id: &'a str,
    domain: &'a str,
    inputs: Inputs<'a>,
    lhs: Box<RawValue>,
    rhs: Box<RawValue>,
    margin: Box<RawValue>,
    tolerance: Box<RawValue>,
    pass: bool,
    err: Box<RawValue>,
}

pub fn to_json(r: &VerificationReport) -> String {
    let out = JsonOut {
        statement_id: &r.statement_id,
        domain: &r.domain,
        inputs: Inputs(&r.inputs),
        lhs: json_float(r.lhs),
        rhs: json_float(r.rhs),
        margin: json_float(r.margin),
        tolerance: json_float(r.tolerance),
        pass: r.pass,
        err: json_float(r.err),
    };
    serde_json::to_string(&out).expect("report serializes")
}

// Keeps the object's key order, which a map type would not.
struct OrderedInputs(Vec<(String, f64)>);

impl<'de> Deserialize<'de> for OrderedInputs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = OrderedInputs;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object of named numbers")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> Result<OrderedInputs, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, Option<f64>>()? {
                    out.push((k, v.unwrap_or(f64::NAN)));
                }
                Ok(OrderedInputs(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonIn {
    statement_id: String,
    domain: String,
    inputs: OrderedInputs,
    lhs: Option<f64>,
    rhs: Option<f64>,
    margin: Option<f64>,
    tolerance: Option<f64>,
    pass: bool,
    err: Option<f64>,
}

pub fn from_json(line: &str) -> Result<VerificationReport, serde_json::Error> {
    let j: JsonIn = serde_json::from_str(line)?;
    let nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
    Ok(VerificationReport {
        statement_id: j.statement_id,
        domain: j.domain,
        inputs: j.inputs.0,
        lhs: nan(j.lhs),
        rhs: nan(j.rhs),
        margin: nan(j.margin),
        tolerance: nan(j.tolerance),
        pass: j.pass,
        err: nan(j.err),
    })
}

pub fn csv_record(r: &VerificationReport) -> Vec<String> {
    let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={}", format_float(*v))).collect();
    vec![
        r.statement_id.clone(),
        r.domain.clone(),
        inputs.join(";"),
        format_float(r.lhs),
        format_float(r.rhs),
        format_float(r.margin),
        format_float(r.tolerance),
        r.pass.to_string(),
        format_float(r.err),
    ]
}

/// Streams reports to a sink; the CSV header goes out with the first call.
pub struct Emitter<W: Write> {
    format: Format,
    csv: Option<csv::Writer<W>>,
    raw: Option<W>,
    header_done: bool,
}

impl<W: Write> Emitter<W> {
    pub fn new(sink: W, format: Format) -> Self {
        match format {
            Format::Csv => Emitter { format, csv: Some(csv::Writer::from_writer(sink)), raw: None, header_done: false },
            Format::Json => Emitter { format, csv: None, raw: Some(sink), header_done: false },
        }
    }

    fn sink_error(e: impl fmt::Display) -> CliError {
        CliError::Io(format!("cannot write report: {e}"))
    }

    pub fn header(&mut self) -> Result<(), CliError> {
        if self.header_done {
            return Ok(());
        }
        self.header_done = true;
        if let Some(w) = self.csv.as_mut() {
            w.write_record(CSV_HEADER).map_err(Self::sink_error)?;
        }
        Ok(())
    }

    pub fn emit(&mut self, r: &VerificationReport) -> Result<(), CliError> {
        self.header()?;
        match self.format {
            Format::Csv => {
                let w = self.csv.as_mut().expect("csv writer");
                w.write_record(csv_record(r)).map_err(Self::sink_error)
            }
            Format::Json => {
                let w = self.raw.as_mut().expect("json sink");
                writeln!(w, "{}", to_json(r)).map_err(Self::sink_error)
            }
        }
    }

    pub fn finish(self) -> Result<W, CliError> {
        match (self.csv, self.raw) {
            (Some(w), _) => w.into_inner().map_err(|e| Self::sink_error(e.error())),
            (None, Some(mut w)) => {
                w.flush().map_err(Self::sink_error)?;
                Ok(w)
            }
            (None, None) => unreachable!("emitter always owns a sink"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        VerificationReport::new("thm1.upper", "ball2")
            .input("w1_re", 0.1)
            .input("w1_im", -1.0 / 3.0)
            .input("delta_w", 1e-6)
            .tolerance(1e-9)
            .at_most(2.0 / 3.0, 22.746254627672363)
            .error_estimate(1.5e-14)
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(-0.0), "-0.0000000000000000e0");
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
        let mut bad = r.clone();
        bad.lhs = f64::NAN;
        bad.pass = false;
        let back = from_json(&to_json(&bad)).unwrap();
        assert!(back.lhs.is_nan() && !back.pass && to_json(&bad).contains("\"lhs\":null"));
    }

    #[test]
    fn csv_header_once() {
        let mut e = Emitter::new(Vec::new(), Format::Csv);
        e.emit(&sample()).unwrap();
        e.emit(&sample()).unwrap();
        let text = String::from_utf8(e.finish().unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert!(lines[1].starts_with("thm1.upper,ball2,w1_re=1.0000000000000001e-1;"));
        assert!(lines[1].contains(",true,"));
        // Parsing the float columns recovers the exact values.
        let cols: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cols[3].parse::<f64>().unwrap(), 2.0 / 3.0);
    }
}
