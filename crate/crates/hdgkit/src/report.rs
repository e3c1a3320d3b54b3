//! CSV outputs. Reals are written with 6 significant digits in `%g` style.

use std::fs::File;
use std::path::Path;

use hdgkit_core::eval::{AblationRow, ConfusionMatrix, PlanOutcome, SweepCell, SweepGrid};
use hdgkit_core::FeatureLayout;

use crate::error::{Error, Result};

/// Formats like C's `%.6g`: fixed notation for exponents in `[-4, 6)`, otherwise
/// scientific with at least two exponent digits; trailing zeros are dropped.
pub fn fmt_g6(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..6).contains(&exp) {
        trim_zeros(format!("{:.*}", (5 - exp) as usize, v))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::format(path, format!("{other:?}")),
    }
}

pub fn class_name(c: usize) -> String {
    format!("class{c}")
}

/// One row per sample: the id then every feature column.
pub fn write_features_csv<'a>(
    path: &Path,
    layout: &FeatureLayout,
    rows: impl IntoIterator<Item = (&'a str, &'a [f64])>,
) -> Result<()> {
    let err = csv_err(path);
    let mut w = writer(path)?;
    let mut header = vec!["sample_id".to_string()];
    header.extend(layout.column_names());
    w.write_record(&header).map_err(&err)?;
    for (id, values) in rows {
        let mut record = Vec::with_capacity(values.len() + 1);
        record.push(id.to_string());
        record.extend(values.iter().map(|&v| fmt_g6(v)));
        w.write_record(&record).map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `C+1` by `C+1`: the corner cell is `truth\predicted`, then class names on both axes.
pub fn write_confusion_csv(path: &Path, cm: &ConfusionMatrix) -> Result<()> {
    let err = csv_err(path);
    let mut w = writer(path)?;
    let c = cm.num_classes();
    let mut header = vec!["truth\\predicted".to_string()];
    header.extend((0..c).map(class_name));
    w.write_record(&header).map_err(&err)?;
    for t in 0..c {
        let mut record = vec![class_name(t)];
        record.extend(cm.row(t).iter().map(u64::to_string));
        w.write_record(&record).map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// One row per plan with its accuracy, or the reason it was skipped.
pub fn write_summary_csv(path: &Path, outcomes: &[PlanOutcome], num_classes: usize) -> Result<()> {
    let err = csv_err(path);
    let mut w = writer(path)?;
    let mut header: Vec<String> = ["plan", "descriptor", "status", "average_accuracy", "kept_features", "total_features"]
        .map(String::from)
        .to_vec();
    header.extend((0..num_classes).map(|c| format!("accuracy_{}", class_name(c))));
    header.push("note".into());
    w.write_record(&header).map_err(&err)?;
    for (i, o) in outcomes.iter().enumerate() {
        let mut record = vec![i.to_string(), o.descriptor().to_string()];
        match o {
            PlanOutcome::Completed(r) => {
                record.extend([
                    "completed".into(),
                    fmt_g6(r.average_accuracy),
                    r.kept_features.to_string(),
                    r.total_features.to_string(),
                ]);
                record.extend(
                    r.per_class_accuracy
                        .iter()
                        .map(|a| a.map(fmt_g6).unwrap_or_default()),
                );
                record.push(String::new());
            }
            PlanOutcome::Skipped { reason, .. } => {
                record.extend(["skipped".into(), String::new(), String::new(), String::new()]);
                record.extend((0..num_classes).map(|_| String::new()));
                record.push(reason.clone());
            }
        }
        w.write_record(&record).map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_ablation_csv(path: &Path, rows: &[AblationRow]) -> Result<()> {
    let err = csv_err(path);
    let mut w = writer(path)?;
    w.write_record(["components", "feature_len", "mean_accuracy", "completed_plans", "failure"])
        .map_err(&err)?;
    for r in rows {
        w.write_record([
            r.components.to_string(),
            r.feature_len.to_string(),
            r.mean_accuracy.map(fmt_g6).unwrap_or_default(),
            r.completed_plans.to_string(),
            r.failure.clone().unwrap_or_default(),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Rows are tree counts, columns alpha values; failed cells read `failed`.
pub fn write_sweep_csv(path: &Path, grid: &SweepGrid) -> Result<()> {
    let err = csv_err(path);
    let mut w = writer(path)?;
    let mut header = vec!["trees\\alpha".to_string()];
    header.extend(grid.alphas.iter().map(|&a| fmt_g6(a)));
    w.write_record(&header).map_err(&err)?;
    for (ti, &t) in grid.trees.iter().enumerate() {
        let mut record = vec![t.to_string()];
        for ai in 0..grid.alphas.len() {
            record.push(match grid.cell(ti, ai) {
                SweepCell::Ok { mean_accuracy } => fmt_g6(*mean_accuracy),
                SweepCell::Failed { .. } => "failed".into(),
            });
        }
        w.write_record(&record).map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `sample_id, true_label, predicted` then the normalized vote share of every class.
pub fn write_predictions_csv(
    path: &Path,
    num_classes: usize,
    rows: &[(String, usize, usize, Vec<f64>)],
) -> Result<()> {
    let err = csv_err(path);
    let mut w = writer(path)?;
    let mut header: Vec<String> = ["sample_id", "true_label", "predicted"].map(String::from).to_vec();
    header.extend((0..num_classes).map(|c| format!("votes_{}", class_name(c))));
    w.write_record(&header).map_err(&err)?;
    for (id, truth, pred, votes) in rows {
        let mut record = vec![id.clone(), truth.to_string(), pred.to_string()];
        record.extend(votes.iter().map(|&v| fmt_g6(v)));
        w.write_record(&record).map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
