//! Random-forest regression with impurity-based feature importance, used to
//! rank inputs before the GP/MLP stages.

use super::SurrogateError;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct RfConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Features tried per split; 0 means ceil(d/3).
    pub mtry: usize,
    pub seed: u64,
}

impl Default for RfConfig {
    fn default() -> Self {
        Self {
            n_trees: 200,
            max_depth: 12,
            min_samples_leaf: 5,
            mtry: 0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomForest {
    trees: Vec<Tree>,
    /// Normalized impurity importance, summing to 1.
    importance: Vec<f64>,
}

struct SplitResult {
    feature: usize,
    threshold: f64,
    score: f64,
}

fn sum_sq(idx: &[usize], y: &[f64]) -> (f64, f64) {
    let mut s = 0.0;
    let mut q = 0.0;
    for &i in idx {
        s += y[i];
        q += y[i] * y[i];
    }
    (s, q)
}

fn best_split(
    idx: &mut [usize],
    x: &[Vec<f64>],
    y: &[f64],
    features: &[usize],
    min_leaf: usize,
) -> Option<SplitResult> {
    let n = idx.len();
    let (sum, sq) = sum_sq(idx, y);
    let parent_sse = sq - sum * sum / n as f64;
    let mut best: Option<SplitResult> = None;

    for &f in features {
        idx.sort_unstable_by(|&a, &b| x[a][f].partial_cmp(&x[b][f]).unwrap());
        let mut left_sum = 0.0;
        let mut left_sq = 0.0;
        for split in 1..n {
            let i = idx[split - 1];
            left_sum += y[i];
            left_sq += y[i] * y[i];
            if split < min_leaf || n - split < min_leaf {
                continue;
            }
            let (lo, hi) = (x[idx[split - 1]][f], x[idx[split]][f]);
            if lo == hi {
                continue;
            }
            let right_sum = sum - left_sum;
            let right_sq = sq - left_sq;
            let sse = (left_sq - left_sum * left_sum / split as f64)
                + (right_sq - right_sum * right_sum / (n - split) as f64);
            let score = parent_sse - sse;
            if score > best.as_ref().map_or(1e-12, |b| b.score) {
                best = Some(SplitResult {
                    feature: f,
                    threshold: 0.5 * (lo + hi),
                    score,
                });
            }
        }
    }
    best
}

fn grow(
    nodes: &mut Vec<Node>,
    importance: &mut [f64],
    idx: &mut Vec<usize>,
    x: &[Vec<f64>],
    y: &[f64],
    depth: usize,
    cfg: &RfConfig,
    mtry: usize,
    rng: &mut ChaCha8Rng,
) -> usize {
    let mean = idx.iter().map(|&i| y[i]).sum::<f64>() / idx.len() as f64;
    if depth >= cfg.max_depth || idx.len() < 2 * cfg.min_samples_leaf {
        nodes.push(Node::Leaf { value: mean });
        return nodes.len() - 1;
    }
    let d = x[0].len();
    let mut features: Vec<usize> = (0..d).collect();
    features.shuffle(rng);
    features.truncate(mtry);

    match best_split(idx, x, y, &features, cfg.min_samples_leaf) {
        None => {
            nodes.push(Node::Leaf { value: mean });
            nodes.len() - 1
        }
        Some(split) => {
            importance[split.feature] += split.score;
            let (mut left_idx, mut right_idx): (Vec<usize>, Vec<usize>) = idx
                .iter()
                .partition(|&&i| x[i][split.feature] <= split.threshold);
            let me = nodes.len();
            nodes.push(Node::Leaf { value: mean }); // placeholder
            let left = grow(nodes, importance, &mut left_idx, x, y, depth + 1, cfg, mtry, rng);
            let right = grow(nodes, importance, &mut right_idx, x, y, depth + 1, cfg, mtry, rng);
            nodes[me] = Node::Split {
                feature: split.feature,
                threshold: split.threshold,
                left,
                right,
            };
            me
        }
    }
}

impl RandomForest {
    /// Fits an ensemble of CART regression trees on bootstrap samples with
    /// random feature subsets per split.
    pub fn fit(x: &[Vec<f64>], y: &[f64], cfg: &RfConfig) -> Result<Self, SurrogateError> {
        let n = x.len();
        if n < 2 || n != y.len() {
            return Err(SurrogateError::TooFewRows(n, 2));
        }
        let mean = y.iter().sum::<f64>() / n as f64;
        if y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() <= 0.0 {
            return Err(SurrogateError::DegenerateTarget);
        }
        let d = x[0].len();
        let mtry = if cfg.mtry == 0 {
            d.div_ceil(3).max(1)
        } else {
            cfg.mtry.min(d)
        };

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut trees = Vec::with_capacity(cfg.n_trees);
        let mut importance = vec![0.0; d];
        for _ in 0..cfg.n_trees {
            let mut idx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let mut nodes = Vec::new();
            grow(
                &mut nodes,
                &mut importance,
                &mut idx,
                x,
                y,
                0,
                cfg,
                mtry,
                &mut rng,
            );
            trees.push(Tree { nodes });
        }
        let total: f64 = importance.iter().sum();
        if total > 0.0 {
            for v in &mut importance {
                *v /= total;
            }
        }
        Ok(Self { trees, importance })
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict(x)).sum::<f64>() / self.trees.len() as f64
    }

    pub fn importance(&self) -> &[f64] {
        &self.importance
    }
}

/// Features ranked by impurity importance, descending.
pub fn rf_feature_importance(
    x: &[Vec<f64>],
    y: &[f64],
    cfg: &RfConfig,
) -> Result<Vec<(usize, f64)>, SurrogateError> {
    if x.len() < 50 {
        return Err(SurrogateError::TooFewRows(x.len(), 50));
    }
    let forest = RandomForest::fit(x, y, cfg)?;
    let mut ranked: Vec<(usize, f64)> = forest.importance().iter().cloned().enumerate().collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    Ok(ranked)
}

/// Takes the top min(limit, available) features from a ranking.
pub fn select_top(ranked: &[(usize, f64)], limit: usize) -> Vec<usize> {
    ranked.iter().take(limit).map(|&(i, _)| i).collect()
}
