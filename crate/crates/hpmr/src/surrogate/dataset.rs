//! Sample datasets: CSV schema, outlier filtering, standardization, and the
//! input/QoI correlation matrix.

use super::SurrogateError;
use crate::design::DesignPoint;
use crate::physics::QoIBundle;

pub const DATASET_CSV_HEADER: &str = "x_ca,x_B10,x_fh,x_pp,x_e,x_cr,x_mr,lifetime_y,sdm_pcm,fq,fdh,qavg_mw_m2,qmax_mw_m2,itc_lo,itc_hi,lcoe_foak_usd_mwh,lcoe_noak_usd_mwh,seed,oracle_id";

pub const DESIGN_COLUMN_NAMES: [&str; 7] = ["x_ca", "x_B10", "x_fh", "x_pp", "x_e", "x_cr", "x_mr"];
pub const QOI_COLUMN_NAMES: [&str; 8] = [
    "lifetime_y",
    "sdm_pcm",
    "fq",
    "fdh",
    "qavg_mw_m2",
    "qmax_mw_m2",
    "itc_lo",
    "itc_hi",
];

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub design: DesignPoint,
    pub qois: QoIBundle,
    /// FOAK LCOE; absent for non-starters, which get no ledger.
    pub lcoe_foak: Option<f64>,
    pub lcoe_noak: Option<f64>,
    pub seed: u64,
    pub oracle_id: String,
}

impl DatasetRow {
    pub fn qoi_array(&self) -> [f64; 8] {
        let q = &self.qois;
        [
            q.lifetime_years,
            q.sdm_pcm,
            q.f_q,
            q.f_delta_h,
            q.q_avg_mw_m2,
            q.q_max_mw_m2,
            q.itc_low_pcm_k,
            q.itc_high_pcm_k,
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub rows: Vec<DatasetRow>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Serializes to CSV. `comments` become leading `#` lines (config hash,
    /// seed, and the like).
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str(DATASET_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let q = r.qoi_array();
            out.push_str(&r.design.to_csv_row());
            for v in q {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push_str(&format!(
                ",{},{},{},{}\n",
                fmt_opt(r.lcoe_foak),
                fmt_opt(r.lcoe_noak),
                r.seed,
                r.oracle_id
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, SurrogateError> {
        let mut rows = Vec::new();
        let mut saw_header = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !saw_header {
                if line != DATASET_CSV_HEADER {
                    let got: Vec<&str> = line.split(',').collect();
                    let missing: Vec<&str> = DATASET_CSV_HEADER
                        .split(',')
                        .filter(|c| !got.contains(c))
                        .collect();
                    let detail = if missing.is_empty() {
                        "unexpected column order".to_string()
                    } else {
                        format!("missing column(s) {}", missing.join(", "))
                    };
                    return Err(SurrogateError::Schema(format!(
                        "line {}: {detail}",
                        lineno + 1
                    )));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 19 {
                return Err(SurrogateError::Schema(format!(
                    "line {}: expected 19 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let num = |i: usize| -> Result<f64, SurrogateError> {
                fields[i].parse::<f64>().map_err(|_| {
                    SurrogateError::Schema(format!(
                        "line {}: field {} ({:?}) is not a number",
                        lineno + 1,
                        i,
                        fields[i]
                    ))
                })
            };
            let opt = |i: usize| -> Result<Option<f64>, SurrogateError> {
                if fields[i].is_empty() {
                    Ok(None)
                } else {
                    num(i).map(Some)
                }
            };
            let design = DesignPoint::from_array([
                num(0)?,
                num(1)?,
                num(2)?,
                num(3)?,
                num(4)?,
                num(5)?,
                num(6)?,
            ]);
            let qois = QoIBundle {
                lifetime_years: num(7)?,
                sdm_pcm: num(8)?,
                f_q: num(9)?,
                f_delta_h: num(10)?,
                q_avg_mw_m2: num(11)?,
                q_max_mw_m2: num(12)?,
                itc_low_pcm_k: num(13)?,
                itc_high_pcm_k: num(14)?,
            };
            rows.push(DatasetRow {
                design,
                qois,
                lcoe_foak: opt(15)?,
                lcoe_noak: opt(16)?,
                seed: fields[17].parse().map_err(|_| {
                    SurrogateError::Schema(format!("line {}: bad seed", lineno + 1))
                })?,
                oracle_id: fields[18].to_string(),
            });
        }
        if !saw_header {
            return Err(SurrogateError::Schema("missing header".into()));
        }
        Ok(Self { rows })
    }

    pub fn design_matrix(&self) -> Vec<[f64; 7]> {
        self.rows.iter().map(|r| r.design.as_array()).collect()
    }

    pub fn qoi_column(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.qoi_array()[index]).collect()
    }
}

/// Drops rows with a negative cost or any non-finite QoI; rows without a
/// ledger (non-starters) stay, they carry QoI signal. Returns the filtered
/// dataset and the number of removed rows.
pub fn filter_outliers(raw: &Dataset) -> Result<(Dataset, usize), SurrogateError> {
    let rows: Vec<DatasetRow> = raw
        .rows
        .iter()
        .filter(|r| {
            let cost_ok = match (r.lcoe_foak, r.lcoe_noak) {
                (Some(f), _) if f < 0.0 || !f.is_finite() => false,
                (_, Some(n)) if n < 0.0 || !n.is_finite() => false,
                _ => true,
            };
            cost_ok && r.qois.all_finite()
        })
        .cloned()
        .collect();
    if rows.is_empty() {
        return Err(SurrogateError::EmptyAfterFilter);
    }
    let removed = raw.rows.len() - rows.len();
    Ok((Dataset { rows }, removed))
}

/// Per-column standardization statistics.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Fits column means and standard deviations; every retained column must
    /// have positive variance.
    pub fn fit(columns: &[Vec<f64>]) -> Result<Self, SurrogateError> {
        let mut mean = Vec::with_capacity(columns.len());
        let mut std = Vec::with_capacity(columns.len());
        for (i, col) in columns.iter().enumerate() {
            let n = col.len() as f64;
            let m = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
            if var <= 0.0 {
                return Err(SurrogateError::ZeroVariance(i));
            }
            mean.push(m);
            std.push(var.sqrt());
        }
        Ok(Self { mean, std })
    }

    /// Like `fit`, but pins the scale to 1 for zero-variance columns instead
    /// of erroring. Model inputs use this; a constant column then simply
    /// carries no signal.
    pub fn fit_tolerant(columns: &[Vec<f64>]) -> Self {
        let mut mean = Vec::with_capacity(columns.len());
        let mut std = Vec::with_capacity(columns.len());
        for col in columns {
            let n = col.len() as f64;
            let m = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
            mean.push(m);
            std.push(if var > 0.0 { var.sqrt() } else { 1.0 });
        }
        Self { mean, std }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn inverse(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| v * s + m)
            .collect()
    }

    /// Scalar helpers for single-target models.
    pub fn transform_scalar(&self, v: f64) -> f64 {
        (v - self.mean[0]) / self.std[0]
    }

    pub fn inverse_scalar(&self, v: f64) -> f64 {
        v * self.std[0] + self.mean[0]
    }
}

/// Pearson correlations between the 7 design inputs and the 8 QoIs.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    /// values[i][j]: input i vs QoI j.
    pub values: Vec<Vec<f64>>,
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, SurrogateError> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
        sxy += (a - mx) * (b - my);
    }
    if sxx <= 0.0 {
        return Err(SurrogateError::ZeroVariance(0));
    }
    if syy <= 0.0 {
        return Err(SurrogateError::ZeroVariance(1));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

pub fn correlation_matrix(dataset: &Dataset) -> Result<CorrelationMatrix, SurrogateError> {
    if dataset.len() < 3 {
        return Err(SurrogateError::TooFewRows(dataset.len(), 3));
    }
    let designs = dataset.design_matrix();
    let mut values = Vec::with_capacity(7);
    for i in 0..7 {
        let xi: Vec<f64> = designs.iter().map(|d| d[i]).collect();
        let mut row = Vec::with_capacity(8);
        for j in 0..8 {
            row.push(pearson(&xi, &dataset.qoi_column(j))?);
        }
        values.push(row);
    }
    Ok(CorrelationMatrix { values })
}

impl CorrelationMatrix {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("input");
        for q in QOI_COLUMN_NAMES {
            out.push(',');
            out.push_str(q);
        }
        out.push('\n');
        for (i, name) in DESIGN_COLUMN_NAMES.iter().enumerate() {
            out.push_str(name);
            for v in &self.values[i] {
                out.push_str(&format!(",{v:.4}"));
            }
            out.push('\n');
        }
        out
    }
}
