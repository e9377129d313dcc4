//! Random forest of CART regression trees.
//!
//! Each tree sees a bootstrap resample of the rows. A node splits on the
//! (feature, threshold) pair that minimizes the summed squared error of its
//! children, with thresholds at midpoints between consecutive distinct values.
//! Candidates are scanned feature by feature in index order and by ascending
//! threshold, and only a strictly better candidate replaces the incumbent, so
//! ties go to the lowest feature index and then the lowest threshold.
//!
//! Per-feature sorted row orders are computed once per tree and partitioned
//! stably at every split, which keeps a node's split search linear in its
//! size.

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_fit_input, Predictor};
use crate::error::Result;
use crate::seed::{derive_seed, rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` grows until leaves are pure or cannot be split.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features examined per split; `None` means all of them.
    pub max_features: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: None,
            min_samples_leaf: 1,
            max_features: None,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        value: f64,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    /// Root at index 0.
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestState {
    pub trees: Vec<Tree>,
    pub bootstrap_seeds: Vec<u64>,
    n_features: usize,
    y_min: f64,
    y_max: f64,
}

impl ForestState {
    /// Per-tree predictions for one row.
    pub fn tree_predictions(&self, row: &[f64]) -> Vec<f64> {
        self.trees.iter().map(|t| t.predict_row(row)).collect()
    }
}

struct TreeBuilder<'a> {
    /// Column-major copy of the bootstrap sample.
    columns: Vec<Vec<f64>>,
    y: Vec<f64>,
    params: &'a ForestParams,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
    /// `orders[j]` lists sample positions sorted by feature `j`; every node
    /// owns the same `start..end` window in each list.
    orders: Vec<Vec<usize>>,
    goes_left: Vec<bool>,
    scratch: Vec<usize>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl<'a> TreeBuilder<'a> {
    fn new(x: &DMatrix<f64>, y: &[f64], rows: &[usize], params: &'a ForestParams, rng: ChaCha8Rng) -> Self {
        let columns: Vec<Vec<f64>> = (0..x.ncols())
            .map(|j| rows.iter().map(|&r| x[(r, j)]).collect())
            .collect();
        let orders = columns
            .iter()
            .map(|col| {
                let mut idx: Vec<usize> = (0..rows.len()).collect();
                idx.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
                idx
            })
            .collect();
        TreeBuilder {
            y: rows.iter().map(|&r| y[r]).collect(),
            goes_left: vec![false; rows.len()],
            scratch: Vec::with_capacity(rows.len()),
            columns,
            params,
            rng,
            nodes: Vec::new(),
            orders,
        }
    }

    fn leaf_value(&self, start: usize, end: usize) -> f64 {
        let members = &self.orders[0][start..end];
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &i in members {
            let v = self.y[i];
            lo = lo.min(v);
            hi = hi.max(v);
            sum += v;
        }
        // the rounded mean can stray an ulp outside the member range
        (sum / members.len() as f64).clamp(lo, hi)
    }

    fn best_split(&mut self, start: usize, end: usize) -> Option<Candidate> {
        let n = end - start;
        let min_leaf = self.params.min_samples_leaf.max(1);
        if n < 2 * min_leaf {
            return None;
        }
        let p = self.columns.len();
        let features: Vec<usize> = match self.params.max_features {
            Some(k) if k < p => {
                let mut f = sample(&mut self.rng, p, k.max(1)).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..p).collect(),
        };

        let total: f64 = self.orders[0][start..end].iter().map(|&i| self.y[i]).sum();
        // Maximizing sum_l^2/n_l + sum_r^2/n_r minimizes the children's SSE.
        let parent_score = total * total / n as f64;
        let mut best: Option<Candidate> = None;
        for &j in &features {
            let order = &self.orders[j][start..end];
            let col = &self.columns[j];
            let mut left_sum = 0.0;
            for k in 0..n - 1 {
                left_sum += self.y[order[k]];
                let (a, b) = (col[order[k]], col[order[k + 1]]);
                if a == b {
                    continue;
                }
                let n_left = k + 1;
                if n_left < min_leaf || n - n_left < min_leaf {
                    continue;
                }
                let right_sum = total - left_sum;
                let score = left_sum * left_sum / n_left as f64 + right_sum * right_sum / (n - n_left) as f64;
                if best.as_ref().is_none_or(|c| score > c.score) {
                    let mut threshold = 0.5 * (a + b);
                    if threshold >= b {
                        threshold = a;
                    }
                    best = Some(Candidate { feature: j, threshold, score });
                }
            }
        }
        best.filter(|c| c.score > parent_score)
    }

    /// Stable partition of every order window into left then right; returns
    /// the split position.
    fn partition(&mut self, start: usize, end: usize, feature: usize, threshold: f64) -> usize {
        let col = &self.columns[feature];
        for &i in &self.orders[feature][start..end] {
            self.goes_left[i] = col[i] <= threshold;
        }
        let mut mid = start;
        for order in &mut self.orders {
            self.scratch.clear();
            let window = &mut order[start..end];
            let mut w = 0;
            for k in 0..window.len() {
                let i = window[k];
                if self.goes_left[i] {
                    window[w] = i;
                    w += 1;
                } else {
                    self.scratch.push(i);
                }
            }
            window[w..].copy_from_slice(&self.scratch);
            mid = start + w;
        }
        mid
    }

    fn is_pure(&self, start: usize, end: usize) -> bool {
        let members = &self.orders[0][start..end];
        let first = self.y[members[0]];
        members.iter().all(|&i| self.y[i] == first)
    }

    fn build(mut self) -> Tree {
        let n = self.y.len();
        self.nodes.push(Node::Leaf { value: 0.0 });
        // (node slot, start, end, depth)
        let mut stack = vec![(0usize, 0usize, n, 0usize)];
        while let Some((slot, start, end, depth)) = stack.pop() {
            let depth_ok = self.params.max_depth.is_none_or(|d| depth < d);
            let split = if depth_ok && !self.is_pure(start, end) {
                self.best_split(start, end)
            } else {
                None
            };
            match split {
                None => self.nodes[slot] = Node::Leaf { value: self.leaf_value(start, end) },
                Some(c) => {
                    let mid = self.partition(start, end, c.feature, c.threshold);
                    let left = self.nodes.len();
                    let right = left + 1;
                    self.nodes.push(Node::Leaf { value: 0.0 });
                    self.nodes.push(Node::Leaf { value: 0.0 });
                    self.nodes[slot] = Node::Split {
                        feature: c.feature,
                        threshold: c.threshold,
                        left,
                        right,
                    };
                    stack.push((right, mid, end, depth + 1));
                    stack.push((left, start, mid, depth + 1));
                }
            }
        }
        Tree { nodes: self.nodes }
    }
}

/// Fits one tree on the given rows (duplicates allowed).
pub fn fit_tree(x: &DMatrix<f64>, y: &[f64], rows: &[usize], params: &ForestParams, seed: u64) -> Tree {
    TreeBuilder::new(x, y, rows, params, rng(seed)).build()
}

pub fn rf_fit(x: &DMatrix<f64>, y: &[f64], params: &ForestParams, seed: u64) -> Result<ForestState> {
    check_fit_input("RF", x, y, 2)?;
    if params.n_trees == 0 {
        return Err(crate::Error::Parameter("RF needs at least one tree".into()));
    }
    let n = y.len();
    let bootstrap_seeds: Vec<u64> = (0..params.n_trees as u64).map(|t| derive_seed(seed, &[t])).collect();
    let trees = bootstrap_seeds
        .par_iter()
        .map(|&tree_seed| {
            let mut r = rng(tree_seed);
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| r.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            TreeBuilder::new(x, y, &rows, params, r).build()
        })
        .collect();
    let (y_min, y_max) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Ok(ForestState {
        trees,
        bootstrap_seeds,
        n_features: x.ncols(),
        y_min,
        y_max,
    })
}

impl Predictor for ForestState {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_unchecked(&self, x: &DMatrix<f64>) -> Vec<f64> {
        let mut row = vec![0.0; x.ncols()];
        (0..x.nrows())
            .map(|i| {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = x[(i, j)];
                }
                let sum: f64 = self.trees.iter().map(|t| t.predict_row(&row)).sum();
                (sum / self.trees.len() as f64).clamp(self.y_min, self.y_max)
            })
            .collect()
    }
}
