//! Two-stage QoI regression: random-forest feature ranking, a Gaussian
//! process stage for lifetime/SDM/F_dh, and an MLP stage for peak heat flux
//! over the augmented input space, with k-fold validation and the
//! input/QoI correlation matrix.

pub mod dataset;
pub mod gp;
pub mod kfold;
pub mod mlp;
pub mod rf;
pub mod two_stage;

use thiserror::Error;

pub use dataset::{correlation_matrix, filter_outliers, Dataset, DatasetRow, Standardizer};
pub use gp::{GpModel, GpSearchConfig};
pub use kfold::{kfold_r2, CvReport};
pub use mlp::{Mlp, MlpConfig};
pub use rf::{rf_feature_importance, RandomForest, RfConfig};
pub use two_stage::{SurrogateQoIs, TwoStageConfig, TwoStagePredictor};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SurrogateError {
    #[error("dataset schema problem: {0}")]
    Schema(String),
    #[error("no rows left after outlier filtering")]
    EmptyAfterFilter,
    #[error("column {0} has zero variance")]
    ZeroVariance(usize),
    #[error("need at least {1} rows, got {0}")]
    TooFewRows(usize, usize),
    #[error("target has zero variance")]
    DegenerateTarget,
    #[error("kernel matrix not positive definite even with jitter {0}")]
    NotPositiveDefinite(f64),
    #[error("training diverged (seed {seed}, epoch {epoch})")]
    Diverged { seed: u64, epoch: usize },
    #[error("fold count {0} must be at least 2")]
    BadFoldCount(usize),
}
