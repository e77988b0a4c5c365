//! CSV and JSON artifacts.
//!
//! Every float is written with 12 significant digits, in fixed notation
//! when its decimal exponent lies in `-5..12` and scientific otherwise.
//! Lines end in LF. JSON objects have their keys in alphabetical order.

use std::io::{self, BufRead, Write};

use serde::Serialize;

use crate::curve::{CoincidenceCurve, ParameterScan};
use crate::error::{Error, Result};

pub const DELAY_HEADER: &str = "delay_ps,rate";
pub const LENGTH_HEADER: &str = "cavity_length_mm,rate";
pub const REFLECTANCE_HEADER: &str = "reflectance,rate";

const PS: f64 = 1e-12;
const MM: f64 = 1e-3;

/// Formats `value` with exactly 12 significant digits.
pub fn format_sig12(value: f64) -> String {
    if value == 0.0 {
        return "0.00000000000".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{value:.11e}");
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-5..12).contains(&exponent) {
        format!("{:.*}", (11 - exponent) as usize, value)
    } else {
        sci
    }
}

fn write_rows<W: Write>(
    mut out: W,
    header: &str,
    rows: impl Iterator<Item = (f64, f64)>,
) -> io::Result<()> {
    writeln!(out, "{header}")?;
    for (x, y) in rows {
        writeln!(out, "{},{}", format_sig12(x), format_sig12(y))?;
    }
    out.flush()
}

/// Writes a delay sweep with the delay in picoseconds.
pub fn write_curve_csv<W: Write>(curve: &CoincidenceCurve, out: W) -> io::Result<()> {
    write_rows(out, DELAY_HEADER, curve.iter().map(|(d, r)| (d / PS, r)))
}

/// Writes a cavity-length scan with the length in millimetres.
pub fn write_length_scan_csv<W: Write>(scan: &ParameterScan, out: W) -> io::Result<()> {
    let rows = scan
        .values
        .iter()
        .zip(&scan.rates)
        .map(|(l, r)| (l / MM, *r));
    write_rows(out, LENGTH_HEADER, rows)
}

pub fn write_reflectance_scan_csv<W: Write>(scan: &ParameterScan, out: W) -> io::Result<()> {
    let rows = scan.values.iter().copied().zip(scan.rates.iter().copied());
    write_rows(out, REFLECTANCE_HEADER, rows)
}

/// Parses a `delay_ps,rate` file back into a curve (delays in seconds).
pub fn read_curve_csv<R: BufRead>(input: R) -> Result<CoincidenceCurve> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .map_err(|e| Error::Parse(e.to_string()))?;
    if header.trim_end() != DELAY_HEADER {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let mut delays = Vec::new();
    let mut rates = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let (d, r) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected two fields", lineno + 2)))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))
        };
        delays.push(parse(d)? * PS);
        rates.push(parse(r)?);
    }
    CoincidenceCurve::new(delays, rates)
}

struct Sig12Formatter;

impl serde_json::ser::Formatter for Sig12Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_sig12(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serialises `value` as a single line of JSON with sorted keys.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let tree = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig12Formatter);
    tree.serialize(&mut ser)
        .map_err(|e| Error::Parse(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.0), "0.00000000000");
        assert_eq!(format_sig12(-0.0), "0.00000000000");
        assert_eq!(format_sig12(1.0), "1.00000000000");
        assert_eq!(format_sig12(0.1), "0.100000000000");
        assert_eq!(format_sig12(-1.0), "-1.00000000000");
        assert_eq!(format_sig12(0.09 / 0.51), "0.176470588235");
        assert_eq!(format_sig12(0.404838), "0.404838000000");
        assert_eq!(format_sig12(1.35039), "1.35039000000");
        assert_eq!(format_sig12(123456.0), "123456.000000");
        assert_eq!(format_sig12(9.999999999999e-2), "0.100000000000");
        assert_eq!(format_sig12(1.5e-7), "1.50000000000e-7");
        assert_eq!(format_sig12(2.5e13), "2.50000000000e13");
    }

    #[test]
    fn sig12_always_has_twelve_digits() {
        for &v in &[
            std::f64::consts::PI,
            2.2e-5,
            1e-5,
            9.9e11,
            0.00012345678901234,
            42.0,
        ] {
            let s = format_sig12(v);
            let mantissa = s.split('e').next().unwrap();
            let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
            let significant = digits.trim_start_matches('0');
            assert_eq!(significant.len(), 12, "{v} -> {s}");
        }
    }

    #[test]
    fn json_sorted_keys_and_precision() {
        let mut m = HashMap::new();
        m.insert("zeta", 0.5);
        m.insert("alpha", 0.176470588235294);
        m.insert("mid", 1.0);
        let s = to_json_string(&m).unwrap();
        assert_eq!(
            s,
            "{\"alpha\":0.176470588235,\"mid\":1.00000000000,\"zeta\":0.500000000000}\n"
        );
    }

    #[test]
    fn csv_rejects_bad_header() {
        let data = "delay,rate\n0,1\n";
        assert!(read_curve_csv(data.as_bytes()).is_err());
        let data = "delay_ps,rate\n0;1\n";
        assert!(read_curve_csv(data.as_bytes()).is_err());
    }
}
