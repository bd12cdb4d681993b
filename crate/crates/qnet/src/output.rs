//! Result rows and their CSV, JSON and table renderings.

use std::io::Write;
use std::str::FromStr;

use qnet_core::ratecalc::Ratio;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format {other:?} (csv, json, table)")),
        }
    }
}

/// Per-trial protocol log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolRow {
    pub trial_id: u64,
    pub protocol: String,
    /// `(xx, zz)` pairs as `"xz"` digit pairs, space separated.
    pub outcome_bits: String,
    pub success: bool,
    pub residual_frame: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeRow {
    pub code_id: String,
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub p: f64,
    pub trials: u64,
    pub logical_failures: u64,
    pub avg_iterations: f64,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnillRow {
    pub code_id: String,
    pub p_c: f64,
    pub p_g: f64,
    pub p_eff: f64,
    pub meas_flip_p: f64,
    pub trials: u64,
    pub logical_failures: u64,
    pub failure_rate: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRow {
    pub mode: String,
    pub m: usize,
    #[serde(rename = "F_end")]
    pub f_end: f64,
    pub survival: f64,
    #[serde(rename = "latency_T")]
    pub latency_t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateRow {
    pub code_id: String,
    pub n: u64,
    pub k: u64,
    #[serde(rename = "Q")]
    pub q: u64,
    pub blocks: u64,
    /// Exact value: a terminating decimal when there is one, else `a/b`.
    #[serde(rename = "rate_per_T")]
    pub rate_per_t: String,
    pub p_eff: f64,
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(CliError::runtime)?;
    }
    w.into_inner().map_err(CliError::runtime)
}

fn to_table<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let csv_bytes = to_csv(rows)?;
    let mut rd = csv::ReaderBuilder::new().has_headers(false).from_reader(csv_bytes.as_slice());
    let cells: Vec<Vec<String>> = rd
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()
        .map_err(CliError::runtime)?;
    let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| cells.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = Vec::new();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(out)
}

pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows).map_err(CliError::runtime)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Table => to_table(rows),
    }
}

/// Renders a rational exactly: `39/2` gives `19.5`, `1/3` stays `1/3`.
pub fn render_ratio(r: Ratio<u64>) -> String {
    let (n, d) = (*r.numer(), *r.denom());
    let mut rest = d;
    for f in [2, 5] {
        while rest % f == 0 {
            rest /= f;
        }
    }
    if rest != 1 {
        return format!("{n}/{d}");
    }
    let whole = n / d;
    let mut rem = n % d;
    if rem == 0 {
        return whole.to_string();
    }
    let mut s = format!("{whole}.");
    while rem != 0 {
        rem *= 10;
        s.push(char::from(b'0' + (rem / d) as u8));
        rem %= d;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(render_ratio(Ratio::new(39, 2)), "19.5");
        assert_eq!(render_ratio(Ratio::new(1419, 1)), "1419");
        assert_eq!(render_ratio(Ratio::new(0, 4)), "0");
        assert_eq!(render_ratio(Ratio::new(946, 13)), "946/13");
        assert_eq!(render_ratio(Ratio::new(3, 8)), "0.375");
        assert_eq!(render_ratio(Ratio::new(6, 4)), "1.5");
    }

    #[test]
    fn csv_headers_follow_the_schemas() {
        let row = ChainRow {
            mode: "physical".into(),
            m: 4,
            f_end: 0.5,
            survival: 1.0,
            latency_t: 20.0,
        };
        let text = String::from_utf8(to_csv(&[row]).unwrap()).unwrap();
        assert_eq!(text, "mode,m,F_end,survival,latency_T\nphysical,4,0.5,1.0,20.0\n");
        let rate = RateRow {
            code_id: "surface:17".into(),
            n: 289,
            k: 1,
            q: 68200,
            blocks: 78,
            rate_per_t: "19.5".into(),
            p_eff: 0.0,
        };
        let text = String::from_utf8(to_csv(&[rate]).unwrap()).unwrap();
        assert!(text.starts_with("code_id,n,k,Q,blocks,rate_per_T,p_eff\n"));
    }

    #[test]
    fn table_is_aligned() {
        let rows = [
            ProtocolRow {
                trial_id: 0,
                protocol: "swap".into(),
                outcome_bits: "01".into(),
                success: true,
                residual_frame: "I".into(),
            },
            ProtocolRow {
                trial_id: 10,
                protocol: "teleport".into(),
                outcome_bits: "11".into(),
                success: false,
                residual_frame: "X".into(),
            },
        ];
        let t = String::from_utf8(render(&rows, Format::Table).unwrap()).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].find("protocol"), lines[1].find("swap"));
        let json: serde_json::Value = serde_json::from_slice(&render(&rows, Format::Json).unwrap()).unwrap();
        assert_eq!(json[1]["protocol"], "teleport");
    }
}
