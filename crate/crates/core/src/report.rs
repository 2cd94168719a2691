//! Serialized forms of [`WindowReport`]s: JSON, a CSV summary, plot data
//! and the human-readable table.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::scaling::{DegreeCount, FitOutcome, WindowReport};

#[derive(Debug, Serialize)]
struct WindowRecord<'a> {
    name: &'a str,
    n: usize,
    first_label: &'a str,
    last_label: &'a str,
    edge_count: usize,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    lambda_p: Option<f64>,
    intercept: Option<f64>,
    r_squared: Option<f64>,
    points_used: Option<usize>,
    k_min: Option<usize>,
    k_max: Option<usize>,
    distribution: &'a [DegreeCount],
}

impl<'a> From<&'a WindowReport> for WindowRecord<'a> {
    fn from(r: &'a WindowReport) -> Self {
        let fit = r.fit.fit();
        let reason = match &r.fit {
            FitOutcome::Unavailable { reason } => Some(reason.as_str()),
            FitOutcome::Ok(_) => None,
        };
        Self {
            name: &r.window_name,
            n: r.sample_count,
            first_label: &r.first_label,
            last_label: &r.last_label,
            edge_count: r.edge_count,
            status: status(&r.fit),
            reason,
            lambda_p: fit.map(|f| f.lambda_p),
            intercept: fit.map(|f| f.intercept),
            r_squared: fit.map(|f| f.r_squared),
            points_used: fit.map(|f| f.points_used),
            k_min: fit.map(|f| f.k_min_used),
            k_max: fit.map(|f| f.k_max_used),
            distribution: &r.distribution.entries,
        }
    }
}

fn status(fit: &FitOutcome) -> &'static str {
    match fit {
        FitOutcome::Ok(_) => "ok",
        FitOutcome::Unavailable { .. } => "fit_unavailable",
    }
}

/// JSON array with one object per window, in window order.
pub fn to_json(reports: &[WindowReport]) -> String {
    let records: Vec<WindowRecord> = reports.iter().map(WindowRecord::from).collect();
    let mut s = serde_json::to_string_pretty(&records).expect("report records serialize");
    s.push('\n');
    s
}

/// `name,n,lambda_p,r_squared,status`; empty cells where no fit exists.
pub fn to_summary_csv(reports: &[WindowReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "n", "lambda_p", "r_squared", "status"])
        .expect("in-memory write");
    for r in reports {
        let fit = r.fit.fit();
        w.write_record([
            r.window_name.clone(),
            r.sample_count.to_string(),
            fit.map_or(String::new(), |f| f.lambda_p.to_string()),
            fit.map_or(String::new(), |f| f.r_squared.to_string()),
            status(&r.fit).to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Two-column `k P(k)` text.
pub fn distribution_plot_data(report: &WindowReport) -> String {
    let mut s = String::from("# k P(k)\n");
    for e in &report.distribution.entries {
        let _ = writeln!(s, "{} {}", e.k, e.p);
    }
    s
}

/// Two-column `log2(1/k) log2 P(k)` text.
pub fn loglog_plot_data(report: &WindowReport) -> String {
    let mut s = String::from("# log2(1/k) log2(P(k))\n");
    for p in report.points() {
        let _ = writeln!(s, "{} {}", p.x, p.y);
    }
    s
}

/// Fixed-width table: window, n, λ_p to two decimals, r², status.
pub fn summary_table(reports: &[WindowReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.window_name.chars().count())
        .chain(std::iter::once(6))
        .max()
        .unwrap_or(6);
    let mut s = format!(
        "{:<width$}  {:>7}  {:>8}  {:>6}  status\n",
        "window", "n", "lambda_p", "r2"
    );
    for r in reports {
        let (lambda, r2) = match r.fit.fit() {
            Some(f) => (format!("{:.2}", f.lambda_p), format!("{:.3}", f.r_squared)),
            None => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            s,
            "{:<width$}  {:>7}  {:>8}  {:>6}  {}",
            r.window_name,
            r.sample_count,
            lambda,
            r2,
            status(&r.fit)
        );
    }
    s
}

/// Filesystem-safe stem for per-window files.
pub fn file_stem(name: &str) -> String {
    let stem: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if stem.is_empty() {
        "window".into()
    } else {
        stem
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    PlotData,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "plotdata" => Ok(Self::PlotData),
            other => Err(format!(
                "unknown format {other:?} (expected json|csv|plotdata)"
            )),
        }
    }
}

/// Writes the requested formats into `dir` and returns the paths written.
pub fn write_outputs(
    dir: &Path,
    reports: &[WindowReport],
    formats: &[OutputFormat],
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    for format in formats {
        match format {
            OutputFormat::Json => put("report.json".into(), to_json(reports))?,
            OutputFormat::Csv => put("summary.csv".into(), to_summary_csv(reports))?,
            OutputFormat::PlotData => {
                for (i, r) in reports.iter().enumerate() {
                    let stem = format!("{:02}_{}", i + 1, file_stem(&r.window_name));
                    put(format!("{stem}.pk.dat"), distribution_plot_data(r))?;
                    put(format!("{stem}.loglog.dat"), loglog_plot_data(r))?;
                }
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::{analyze_series, AnalysisConfig};
    use crate::series_io::TimeSeries;

    fn sample_reports() -> Vec<WindowReport> {
        let cfg = AnalysisConfig {
            min_length: 2,
            ..AnalysisConfig::default()
        };
        let noisy = TimeSeries::from_values(vec![
            3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0, 8.0, 9.0, 7.0, 9.0, 3.0,
        ])
        .unwrap();
        let line = TimeSeries::from_values((0..5).map(f64::from).collect()).unwrap();
        vec![
            analyze_series("1990-1993", &noisy, &cfg).unwrap(),
            analyze_series("flat line", &line, &cfg).unwrap(),
        ]
    }

    #[test]
    fn json_has_one_object_per_window() {
        let reports = sample_reports();
        let v: serde_json::Value = serde_json::from_str(&to_json(&reports)).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["name"], "1990-1993");
        assert_eq!(arr[0]["n"], 16);
        assert_eq!(arr[0]["status"], "ok");
        assert_eq!(
            arr[0]["lambda_p"].as_f64(),
            reports[0].fit.lambda_p(),
            "full precision survives"
        );
        assert_eq!(arr[1]["status"], "fit_unavailable");
        assert!(arr[1]["lambda_p"].is_null());
        assert_eq!(arr[1]["distribution"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn csv_summary_rows() {
        let csv = to_summary_csv(&sample_reports());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "name,n,lambda_p,r_squared,status");
        assert!(lines[1].starts_with("1990-1993,16,"));
        assert_eq!(lines[2], "flat line,5,,,fit_unavailable");
    }

    #[test]
    fn table_rounds_lambda() {
        let reports = sample_reports();
        let table = summary_table(&reports);
        let expected = format!("{:.2}", reports[0].fit.lambda_p().unwrap());
        assert!(table.lines().nth(1).unwrap().contains(&expected));
        assert!(table.lines().nth(2).unwrap().contains("fit_unavailable"));
    }

    #[test]
    fn plot_data_columns() {
        let r = &sample_reports()[1];
        assert_eq!(distribution_plot_data(r), "# k P(k)\n1 0.4\n2 0.6\n");
        let ll = loglog_plot_data(r);
        assert_eq!(ll.lines().nth(1).unwrap(), format!("0 {}", 0.4f64.log2()));
    }

    #[test]
    fn stems_are_sanitized() {
        assert_eq!(file_stem("2010-2013"), "2010-2013");
        assert_eq!(file_stem("a/b c"), "a_b_c");
        assert_eq!(file_stem(""), "window");
    }
}
