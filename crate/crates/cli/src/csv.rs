use std::io::{self, Write};

/// Significant digits in every numeric cell.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// A table with a fixed header; each row is `(values, status)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvCurve {
    pub header: Vec<String>,
    pub rows: Vec<(Vec<f64>, String)>,
}

impl CsvCurve {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            header: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|(_, s)| s != "ok").count()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{},status", self.header.join(","))?;
        for (values, status) in &self.rows {
            debug_assert_eq!(values.len(), self.header.len());
            let cells: Vec<String> = values.iter().map(|&v| format_number(v)).collect();
            writeln!(out, "{},{}", cells.join(","), status)?;
        }
        out.flush()
    }
}

impl std::fmt::Display for CsvCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut buf = Vec::new();
        self.write_to(&mut buf).map_err(|_| std::fmt::Error)?;
        f.write_str(std::str::from_utf8(&buf).map_err(|_| std::fmt::Error)?)
    }
}

/// C's `%.12g`: shortest of fixed and scientific notation, trailing zeros
/// removed.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let p = SIGNIFICANT_DIGITS;
    // Exponent after rounding to p digits.
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
