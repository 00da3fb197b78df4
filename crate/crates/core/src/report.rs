//! CSV/JSON artifacts: profiles, check reports, scans and coefficient tables.
//!
//! Floats are written with `{:.16e}` (17 significant digits), which round-trips
//! every finite `f64`. JSON cannot carry non-finite numbers, so a metric of
//! `inf` is written as `null` and read back as `inf`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::asymptotics::FarFieldFit;
use crate::error::{Result, SolitonError};
use crate::model::ModelParams;
use crate::profile::RadialProfile;
use crate::verify::{CheckReport, GradientScanReport};

pub(crate) mod nullable {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = SolitonError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(SolitonError::InvalidArgument(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsOut {
    pub n: usize,
    pub alpha: f64,
}

impl From<&ModelParams> for ParamsOut {
    fn from(p: &ModelParams) -> Self {
        ParamsOut {
            n: p.n(),
            alpha: p.alpha(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOut {
    pub window: [f64; 2],
    pub samples: usize,
    pub fitted_leading: f64,
    pub expected_leading: f64,
    pub fitted_second: f64,
    pub expected_second: f64,
    #[serde(rename = "fitted_C1")]
    pub fitted_c1: Option<f64>,
    pub residual_norm: f64,
    pub condition: f64,
}

impl From<&FarFieldFit> for FitOut {
    fn from(f: &FarFieldFit) -> Self {
        FitOut {
            window: [f.window.0, f.window.1],
            samples: f.samples,
            fitted_leading: f.fitted_leading,
            expected_leading: f.expected_leading,
            fitted_second: f.fitted_second,
            expected_second: f.expected_second,
            fitted_c1: f.fitted_c1,
            residual_norm: f.residual_norm,
            condition: f.condition,
        }
    }
}

/// Parsed form of a JSON check report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub params: ParamsOut,
    pub checks: Vec<CheckReport>,
    pub fit: Option<FitOut>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

/// Serializes checks (and optionally the fit) for one parameter pair.
pub fn emit_report(
    params: &ModelParams,
    reports: &[CheckReport],
    fit: Option<&FarFieldFit>,
    format: Format,
) -> String {
    match format {
        Format::Json => to_json(&ReportDocument {
            params: params.into(),
            checks: reports.to_vec(),
            fit: fit.map(FitOut::from),
        }),
        Format::Csv => {
            let mut out = String::from("name,pass,metric,tolerance\n");
            for r in reports {
                writeln!(out, "{},{},{:.16e},{:.16e}", r.name, r.pass, r.metric, r.tolerance)
                    .unwrap();
            }
            out
        }
    }
}

pub fn parse_report(text: &str) -> Result<ReportDocument> {
    serde_json::from_str(text).map_err(|e| SolitonError::Parse(e.to_string()))
}

/// Profile columns `t,r,dr,ddr`.
pub fn profile_csv(profile: &RadialProfile) -> String {
    let mut out = String::from("t,r,dr,ddr\n");
    for i in 0..profile.len() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            profile.grid[i], profile.r[i], profile.dr[i], profile.ddr[i]
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileOut {
    pub params: ParamsOut,
    pub tol: f64,
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub dr: Vec<f64>,
    pub ddr: Vec<f64>,
}

pub fn emit_profile(profile: &RadialProfile, format: Format) -> String {
    match format {
        Format::Csv => profile_csv(profile),
        Format::Json => to_json(&ProfileOut {
            params: (&profile.params).into(),
            tol: profile.tol,
            t: profile.grid.clone(),
            r: profile.r.clone(),
            dr: profile.dr.clone(),
            ddr: profile.ddr.clone(),
        }),
    }
}

/// Rows `[t, r, dr, ddr]` of a profile CSV.
pub fn parse_profile_csv(text: &str) -> Result<Vec<[f64; 4]>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("t,r,dr,ddr") => {}
        other => {
            return Err(SolitonError::Parse(format!(
                "expected header 't,r,dr,ddr', found {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(SolitonError::Parse(format!(
                    "line {}: expected 4 columns, found {}",
                    k + 2,
                    cols.len()
                )));
            }
            let mut row = [0.0; 4];
            for (slot, c) in row.iter_mut().zip(cols) {
                *slot = c
                    .parse()
                    .map_err(|e| SolitonError::Parse(format!("line {}: {e}", k + 2)))?;
            }
            Ok(row)
        })
        .collect()
}

pub fn emit_fit(fit: &FarFieldFit, format: Format) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                params: ParamsOut,
                fit: FitOut,
            }
            to_json(&Doc {
                params: (&fit.params).into(),
                fit: fit.into(),
            })
        }
        Format::Csv => {
            let mut out = String::new();
            out.push_str(TABLE_HEADER);
            out.push('\n');
            out.push_str(&table_row(fit));
            out
        }
    }
}

const TABLE_HEADER: &str = "n,alpha,t_lo,t_hi,fitted_leading,expected_leading,fitted_second,expected_second,fitted_C1,residual_norm";

fn table_row(fit: &FarFieldFit) -> String {
    let c1 = fit
        .fitted_c1
        .map(|v| format!("{v:.16e}"))
        .unwrap_or_default();
    format!(
        "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}\n",
        fit.params.n(),
        fit.params.alpha(),
        fit.window.0,
        fit.window.1,
        fit.fitted_leading,
        fit.expected_leading,
        fit.fitted_second,
        fit.expected_second,
        c1,
        fit.residual_norm
    )
}

/// One row per fit, in the order given.
pub fn emit_table(fits: &[FarFieldFit], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("{TABLE_HEADER}\n");
            for f in fits {
                out.push_str(&table_row(f));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                params: ParamsOut,
                fit: FitOut,
            }
            let rows: Vec<Row> = fits
                .iter()
                .map(|f| Row {
                    params: (&f.params).into(),
                    fit: f.into(),
                })
                .collect();
            to_json(&rows)
        }
    }
}

pub fn emit_scan(params: &ModelParams, scan: &GradientScanReport, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("center_offset,radius,M,grad_norm,ratio\n");
            for s in &scan.samples {
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    s.center_offset, s.radius, s.m, s.grad_norm, s.ratio
                )
                .unwrap();
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                params: ParamsOut,
                #[serde(flatten)]
                scan: &'a GradientScanReport,
            }
            to_json(&Doc {
                params: params.into(),
                scan,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::solve_profile;

    fn params() -> ModelParams {
        ModelParams::new(4, 1.0).unwrap()
    }

    #[test]
    fn empty_report_is_valid_json() {
        let text = emit_report(&params(), &[], None, Format::Json);
        assert!(text.ends_with('\n'));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["checks"].as_array().unwrap().len(), 0);
        assert_eq!(v["params"]["n"], 4);
    }

    #[test]
    fn key_order_is_stable() {
        let reps = vec![CheckReport::new("a", 0.5, 1.0, "d".into())];
        let text = emit_report(&params(), &reps, None, Format::Json);
        let pos = |k: &str| text.find(k).unwrap();
        assert!(pos("\"params\"") < pos("\"checks\"") && pos("\"checks\"") < pos("\"fit\""));
        assert!(pos("\"name\"") < pos("\"pass\"") && pos("\"pass\"") < pos("\"metric\""));
        assert!(pos("\"metric\"") < pos("\"tolerance\""));
    }

    #[test]
    fn round_trip_including_infinite_metric() {
        let reps = vec![
            CheckReport::new("a", 1.25e-11, 1e-8, "x".into()),
            CheckReport::new("b", f64::INFINITY, 0.02, String::new()),
            CheckReport::new("c", -3.0e-4, -f64::MIN_POSITIVE, "strict".into()),
        ];
        let text = emit_report(&params(), &reps, None, Format::Json);
        let back = parse_report(&text).unwrap();
        assert_eq!(back.checks, reps);
        assert!(text.contains("null"));
        assert!(parse_report("{").is_err());
    }

    #[test]
    fn profile_csv_counts_and_round_trips() {
        let prof = solve_profile(&params(), 2.0, 1e-8).unwrap().truncated(0.0);
        let three = RadialProfile {
            grid: vec![0.0, 0.5, 1.0],
            r: vec![0.0, 0.1, 1.0 / 3.0],
            dr: vec![0.0, 0.2, 0.7],
            ddr: vec![0.25, 0.3, 0.4],
            ..prof
        };
        let text = profile_csv(&three);
        assert_eq!(text.lines().count(), 4);
        assert!(text.ends_with('\n'));
        let rows = parse_profile_csv(&text).unwrap();
        assert_eq!(rows[2], [1.0, 1.0 / 3.0, 0.7, 0.4]);
        assert!(parse_profile_csv("t,r\n").is_err());
        assert!(parse_profile_csv("t,r,dr,ddr\n1,2,3\n").is_err());
    }

    #[test]
    fn seventeen_significant_digits() {
        let v = 0.1f64 + 0.2;
        let s = format!("{v:.16e}");
        assert_eq!(s.parse::<f64>().unwrap(), v);
        assert_eq!(s.split('e').next().unwrap().replace('.', "").len(), 17);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
