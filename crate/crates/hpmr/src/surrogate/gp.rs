//! Gaussian-process regression with an RBF kernel, exact inference through a
//! Cholesky factorization, and hyperparameter selection by log marginal
//! likelihood over a documented grid.

use super::dataset::Standardizer;
use super::SurrogateError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpHyper {
    pub signal_variance: f64,
    /// Shared RBF length scale on standardized inputs.
    pub length_scale: f64,
    pub noise_variance: f64,
}

/// Grid searched when fitting.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GpSearchConfig {
    pub length_scales: Vec<f64>,
    pub signal_variances: Vec<f64>,
    pub noise_variances: Vec<f64>,
}

impl Default for GpSearchConfig {
    fn default() -> Self {
        Self {
            length_scales: vec![0.7, 1.0, 1.5, 2.2, 3.3, 5.0],
            signal_variances: vec![0.8, 1.5],
            noise_variances: vec![1e-6, 1e-4, 1e-2],
        }
    }
}

/// Lower-triangular Cholesky factor stored row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct Chol {
    n: usize,
    l: Vec<f64>,
}

impl Chol {
    /// Factorizes a symmetric matrix, escalating diagonal jitter from 1e-10
    /// to 1e-6 before giving up.
    fn factor(a: &[f64], n: usize) -> Result<Self, SurrogateError> {
        let mut jitter = 1e-10;
        loop {
            match Self::try_factor(a, n, jitter) {
                Ok(c) => return Ok(c),
                Err(_) if jitter < 1e-6 => jitter *= 100.0,
                Err(e) => return Err(e),
            }
        }
    }

    fn try_factor(a: &[f64], n: usize, jitter: f64) -> Result<Self, SurrogateError> {
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = a[i * n + j];
                if i == j {
                    sum += jitter;
                }
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= 0.0 {
                        return Err(SurrogateError::NotPositiveDefinite(jitter));
                    }
                    l[i * n + j] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Ok(Self { n, l })
    }

    /// Solves L z = b.
    fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                z[i] -= self.l[i * n + k] * z[k];
            }
            z[i] /= self.l[i * n + i];
        }
        z
    }

    /// Solves L^T x = z.
    fn backward(&self, z: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = z.to_vec();
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= self.l[k * n + i] * x[k];
            }
            x[i] /= self.l[i * n + i];
        }
        x
    }

    fn log_det_half(&self) -> f64 {
        (0..self.n).map(|i| self.l[i * self.n + i].ln()).sum()
    }
}

/// A fitted single-target GP. Inputs and target are standardized internally;
/// predictions come back in natural units.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GpModel {
    pub hyper: GpHyper,
    x_std: Standardizer,
    y_std: Standardizer,
    /// Standardized training inputs, row-major n x d.
    x_train: Vec<f64>,
    dim: usize,
    /// alpha = (K + sn I)^-1 y, on standardized targets.
    alpha: Vec<f64>,
    #[serde(skip)]
    chol: Option<Chol>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn kernel_matrix(x: &[f64], n: usize, d: usize, h: &GpHyper) -> Vec<f64> {
    let inv = 1.0 / (2.0 * h.length_scale * h.length_scale);
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        k[i * n + i] = h.signal_variance + h.noise_variance;
        for j in 0..i {
            let v = h.signal_variance * (-sq_dist(&x[i * d..(i + 1) * d], &x[j * d..(j + 1) * d]) * inv).exp();
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

fn log_marginal_likelihood(chol: &Chol, alpha: &[f64], y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let fit: f64 = alpha.iter().zip(y).map(|(a, b)| a * b).sum();
    -0.5 * fit - chol.log_det_half() - 0.5 * n * (2.0 * std::f64::consts::PI).ln()
}

/// Target standardizer that tolerates a constant target by pinning the
/// scale to 1; the model then predicts the constant mean everywhere.
fn target_standardizer(y: &[f64]) -> Standardizer {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Standardizer {
        mean: vec![mean],
        std: vec![if var > 0.0 { var.sqrt() } else { 1.0 }],
    }
}

impl GpModel {
    /// Fits with a fixed hyperparameter set.
    pub fn fit_fixed(
        x: &[Vec<f64>],
        y: &[f64],
        hyper: GpHyper,
    ) -> Result<Self, SurrogateError> {
        let n = x.len();
        if n < 2 || n != y.len() {
            return Err(SurrogateError::TooFewRows(n, 2));
        }
        let d = x[0].len();
        let cols: Vec<Vec<f64>> = (0..d).map(|j| x.iter().map(|r| r[j]).collect()).collect();
        let x_std = Standardizer::fit_tolerant(&cols);
        let y_std = target_standardizer(y);

        let mut xs = Vec::with_capacity(n * d);
        for r in x {
            xs.extend(x_std.transform(r));
        }
        let ys: Vec<f64> = y.iter().map(|&v| y_std.transform_scalar(v)).collect();

        let k = kernel_matrix(&xs, n, d, &hyper);
        let chol = Chol::factor(&k, n)?;
        let alpha = chol.backward(&chol.forward(&ys));
        Ok(Self {
            hyper,
            x_std,
            y_std,
            x_train: xs,
            dim: d,
            alpha,
            chol: Some(chol),
        })
    }

    /// Grid-searches the hyperparameters by log marginal likelihood, then
    /// refits at the best point.
    pub fn fit(
        x: &[Vec<f64>],
        y: &[f64],
        search: &GpSearchConfig,
    ) -> Result<Self, SurrogateError> {
        let n = x.len();
        if n < 10 || n != y.len() {
            return Err(SurrogateError::TooFewRows(n, 10));
        }
        let d = x[0].len();
        let cols: Vec<Vec<f64>> = (0..d).map(|j| x.iter().map(|r| r[j]).collect()).collect();
        let x_std = Standardizer::fit_tolerant(&cols);
        let y_std = target_standardizer(y);
        let mut xs = Vec::with_capacity(n * d);
        for r in x {
            xs.extend(x_std.transform(r));
        }
        let ys: Vec<f64> = y.iter().map(|&v| y_std.transform_scalar(v)).collect();

        let mut best: Option<(f64, GpHyper, Chol, Vec<f64>)> = None;
        for &ls in &search.length_scales {
            for &sv in &search.signal_variances {
                for &nv in &search.noise_variances {
                    let hyper = GpHyper {
                        signal_variance: sv,
                        length_scale: ls,
                        noise_variance: nv,
                    };
                    let k = kernel_matrix(&xs, n, d, &hyper);
                    let Ok(chol) = Chol::factor(&k, n) else {
                        continue;
                    };
                    let alpha = chol.backward(&chol.forward(&ys));
                    let lml = log_marginal_likelihood(&chol, &alpha, &ys);
                    if best.as_ref().map_or(true, |(b, ..)| lml > *b) {
                        best = Some((lml, hyper, chol, alpha));
                    }
                }
            }
        }
        let (_, hyper, chol, alpha) =
            best.ok_or(SurrogateError::NotPositiveDefinite(1e-6))?;
        Ok(Self {
            hyper,
            x_std,
            y_std,
            x_train: xs,
            dim: d,
            alpha,
            chol: Some(chol),
        })
    }

    /// Rebuilds the kernel factorization after deserialization.
    pub fn refactorize(&mut self) -> Result<(), SurrogateError> {
        let n = self.alpha.len();
        let k = kernel_matrix(&self.x_train, n, self.dim, &self.hyper);
        self.chol = Some(Chol::factor(&k, n)?);
        Ok(())
    }

    fn kernel_vector(&self, xs: &[f64]) -> Vec<f64> {
        let n = self.alpha.len();
        let inv = 1.0 / (2.0 * self.hyper.length_scale * self.hyper.length_scale);
        (0..n)
            .map(|i| {
                self.hyper.signal_variance
                    * (-sq_dist(&self.x_train[i * self.dim..(i + 1) * self.dim], xs) * inv).exp()
            })
            .collect()
    }

    /// Predictive mean and latent variance at one point.
    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        let xs = self.x_std.transform(x);
        let k_star = self.kernel_vector(&xs);
        let mean_std: f64 = k_star.iter().zip(&self.alpha).map(|(a, b)| a * b).sum();
        let var_std = match &self.chol {
            Some(chol) => {
                let v = chol.forward(&k_star);
                (self.hyper.signal_variance - v.iter().map(|x| x * x).sum::<f64>()).max(0.0)
            }
            None => self.hyper.signal_variance,
        };
        (
            self.y_std.inverse_scalar(mean_std),
            var_std * self.y_std.std[0] * self.y_std.std[0],
        )
    }
}
