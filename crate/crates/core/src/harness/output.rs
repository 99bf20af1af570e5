//! Result serialization. CSV rows carry only deterministic fields, so a
//! fixed seed produces byte-identical files across runs and machines; JSON
//! additionally carries timing and summary statistics.

use std::io::Write;

use super::config::OutputFormat;
use super::experiment::ExperimentSummary;
use super::grid::AnalysisRow;
use super::snapshot::{SnapshotRow, SNAPSHOT_ALGORITHMS};
use super::HarnessError;

fn io_err(e: std::io::Error) -> HarnessError {
    HarnessError::Io { path: "<output>".to_string(), source: e }
}

/// Shortest decimal form that parses back to exactly the same f64.
fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn write_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n").map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// Per-trial records. The CSV layout is one row per trial with positional
/// size columns named after the configured algorithms; wall-clock timing is
/// deliberately omitted there.
pub fn write_experiment(
    out: &mut dyn Write,
    format: OutputFormat,
    summary: &ExperimentSummary,
) -> Result<(), HarnessError> {
    match format {
        OutputFormat::Json => write_json(out, summary),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let mut header = vec!["trial".to_string()];
            header.extend(summary.algorithms.iter().map(|a| format!("size_{}", a.name)));
            for fixed in ["max_matching", "hall_bound", "l2_error", "edgeless"] {
                header.push(fixed.to_string());
            }
            w.write_record(&header)?;
            for r in &summary.records {
                let mut rec = vec![r.trial_index.to_string()];
                rec.extend(r.sizes.iter().map(usize::to_string));
                rec.push(r.max_matching.to_string());
                rec.push(r.hall_bound.to_string());
                rec.push(fmt_f64(r.l2_error));
                rec.push(r.edgeless.to_string());
                w.write_record(&rec)?;
            }
            w.flush().map_err(io_err)?;
            drop(w);
            out.flush().map_err(io_err)
        }
    }
}

/// Analytic grid rows: one line per cell, parameter columns first.
pub fn write_analysis(
    out: &mut dyn Write,
    format: OutputFormat,
    rows: &[AnalysisRow],
) -> Result<(), HarnessError> {
    match format {
        OutputFormat::Json => write_json(out, &rows),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            if let Some(first) = rows.first() {
                let mut header: Vec<&str> =
                    first.params.iter().map(|(k, _)| k.as_str()).collect();
                header.extend(["mpd_expected", "hall_bound", "ratio"]);
                w.write_record(&header)?;
                for r in rows {
                    let mut rec: Vec<String> =
                        r.params.iter().map(|(_, v)| v.clone()).collect();
                    rec.push(fmt_f64(r.mpd_expected));
                    rec.push(fmt_f64(r.hall_bound));
                    rec.push(fmt_f64(r.ratio));
                    w.write_record(&rec)?;
                }
            }
            w.flush().map_err(io_err)?;
            drop(w);
            out.flush().map_err(io_err)
        }
    }
}

/// Snapshot pipeline rows: one line per later snapshot.
pub fn write_snapshot(
    out: &mut dyn Write,
    format: OutputFormat,
    rows: &[SnapshotRow],
) -> Result<(), HarnessError> {
    match format {
        OutputFormat::Json => write_json(out, &rows),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let mut header = vec!["path".to_string(), "l2_error".into(), "max_matching".into()];
            header.extend(SNAPSHOT_ALGORITHMS.iter().map(|a| format!("{a}_ratio")));
            w.write_record(&header)?;
            for r in rows {
                w.write_record(&[
                    r.path.clone(),
                    fmt_f64(r.l2_error),
                    r.max_matching.to_string(),
                    fmt_f64(r.mpd_ratio),
                    fmt_f64(r.mindegree_ratio),
                    fmt_f64(r.ranking_ratio),
                ])?;
            }
            w.flush().map_err(io_err)?;
            drop(w);
            out.flush().map_err(io_err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::experiment::{AlgorithmSummary, TrialRecord};

    fn tiny_summary() -> ExperimentSummary {
        ExperimentSummary {
            trials: 2,
            master_seed: 9,
            edgeless_trials: 0,
            algorithms: vec![
                AlgorithmSummary {
                    name: "mpd".into(),
                    mean_ratio: 0.75,
                    std_ratio: 0.25,
                    mean_size: 1.5,
                },
                AlgorithmSummary {
                    name: "ranking".into(),
                    mean_ratio: 0.5,
                    std_ratio: 0.0,
                    mean_size: 1.0,
                },
            ],
            records: vec![
                TrialRecord {
                    trial_index: 0,
                    sizes: vec![2, 1],
                    max_matching: 2,
                    hall_bound: 2,
                    l2_error: 0.5,
                    wall_ms: 0.123,
                    edgeless: false,
                },
                TrialRecord {
                    trial_index: 1,
                    sizes: vec![1, 1],
                    max_matching: 2,
                    hall_bound: 3,
                    l2_error: 0.0625,
                    wall_ms: 0.456,
                    edgeless: false,
                },
            ],
        }
    }

    #[test]
    fn experiment_csv_layout_is_stable() {
        let mut buf = Vec::new();
        write_experiment(&mut buf, OutputFormat::Csv, &tiny_summary()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let want = "trial,size_mpd,size_ranking,max_matching,hall_bound,l2_error,edgeless\n\
                    0,2,1,2,2,0.5,false\n\
                    1,1,1,2,3,0.0625,false\n";
        assert_eq!(text, want);
    }

    #[test]
    fn experiment_csv_omits_wall_clock() {
        let mut a = Vec::new();
        let mut summary = tiny_summary();
        write_experiment(&mut a, OutputFormat::Csv, &summary).unwrap();
        summary.records[0].wall_ms = 999.0;
        let mut b = Vec::new();
        write_experiment(&mut b, OutputFormat::Csv, &summary).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn experiment_json_round_trips() {
        let mut buf = Vec::new();
        write_experiment(&mut buf, OutputFormat::Json, &tiny_summary()).unwrap();
        let parsed: ExperimentSummary = serde_json::from_slice(&buf).unwrap();
        assert_eq!(parsed.trials, 2);
        assert_eq!(parsed.records[0].sizes, vec![2, 1]);
        assert_eq!(parsed.records[0].wall_ms, 0.123);
        assert_eq!(parsed.algorithms[1].name, "ranking");
    }

    #[test]
    fn analysis_csv_has_param_columns() {
        let rows = vec![AnalysisRow {
            params: vec![
                ("alpha".to_string(), "0.5".to_string()),
                ("lambda".to_string(), "10".to_string()),
            ],
            mpd_expected: 0.9,
            hall_bound: 0.95,
            ratio: 0.9473684210526316,
        }];
        let mut buf = Vec::new();
        write_analysis(&mut buf, OutputFormat::Csv, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "alpha,lambda,mpd_expected,hall_bound,ratio");
        let data = lines.next().unwrap();
        assert!(data.starts_with("0.5,10,0.9,0.95,"));
        let ratio_text = data.rsplit(',').next().unwrap();
        assert_eq!(ratio_text.parse::<f64>().unwrap(), 0.9473684210526316);
    }

    #[test]
    fn empty_analysis_produces_empty_csv() {
        let mut buf = Vec::new();
        write_analysis(&mut buf, OutputFormat::Csv, &[]).unwrap();
        assert!(buf.is_empty());
    }

    #[test]
    fn snapshot_csv_layout() {
        let rows = vec![SnapshotRow {
            path: "later.edges".to_string(),
            l2_error: 1.5,
            max_matching: 7,
            mpd_ratio: 0.875,
            mindegree_ratio: 0.75,
            ranking_ratio: 0.625,
        }];
        let mut buf = Vec::new();
        write_snapshot(&mut buf, OutputFormat::Csv, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let want = "path,l2_error,max_matching,mpd_ratio,mindegree_ratio,ranking_ratio\n\
                    later.edges,1.5,7,0.875,0.75,0.625\n";
        assert_eq!(text, want);
    }
}
