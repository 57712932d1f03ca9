//! Agglomerative hierarchical clustering with unweighted average linkage
//! (UPGMA), plus the two dissimilarities used to feed it.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::rmt::CorrelationMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("clustering needs at least 2 items, got {n}")]
    TooFewLeaves { n: usize },
    #[error("{labels} labels for a {n}x{n} distance matrix")]
    LabelMismatch { labels: usize, n: usize },
    #[error("invalid distance matrix: {0}")]
    InvalidDistances(String),
}

/// Symmetric, zero-diagonal, non-negative dissimilarities (row-major).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self, ClusterError> {
        if entries.len() != n * n {
            return Err(ClusterError::InvalidDistances(format!("{} entries for n = {n}", entries.len())));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(ClusterError::InvalidDistances(format!("non-zero diagonal at {i}")));
            }
            for j in 0..i {
                let d = entries[i * n + j];
                if !(d >= 0.0 && d.is_finite()) {
                    return Err(ClusterError::InvalidDistances(format!("entry ({i},{j}) = {d}")));
                }
                if d != entries[j * n + i] {
                    return Err(ClusterError::InvalidDistances(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(DistanceMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

fn pairwise(n: usize, f: impl Fn(usize, usize) -> f64) -> DistanceMatrix {
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = f(i, j);
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    DistanceMatrix { n, entries }
}

/// Euclidean distance between rows of the correlation matrix, each row read
/// as a feature vector.
pub fn dissimilarity_rows(corr: &CorrelationMatrix) -> DistanceMatrix {
    pairwise(corr.n(), |i, j| corr.row(i).iter().zip(corr.row(j)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
}

/// `sqrt(2 (1 - C_ij))`.
pub fn correlation_distance(corr: &CorrelationMatrix) -> DistanceMatrix {
    pairwise(corr.n(), |i, j| (2.0 * (1.0 - corr.get(i, j))).max(0.0).sqrt())
}

/// One agglomeration step. Nodes `0..N` are leaves; merge `k` creates node `N + k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dendrogram {
    leaves: Vec<String>,
    merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn root(&self) -> usize {
        2 * self.leaves.len() - 2
    }

    /// Leaf indices below `node`, ascending.
    pub fn members(&self, node: usize) -> Vec<usize> {
        let n = self.leaves.len();
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(id) = stack.pop() {
            if id < n {
                out.push(id);
            } else {
                let m = &self.merges[id - n];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out.sort_unstable();
        out
    }

    fn height(&self, node: usize) -> f64 {
        let n = self.leaves.len();
        if node < n {
            0.0
        } else {
            self.merges[node - n].height
        }
    }

    /// Newick text with branch lengths equal to the drop in merge height
    /// between a node and its parent; leaves sit at height zero.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_newick(self.root(), &mut out);
        out.push(';');
        out
    }

    fn write_newick(&self, node: usize, out: &mut String) {
        let n = self.leaves.len();
        if node < n {
            out.push_str(&newick_label(&self.leaves[node]));
            return;
        }
        let m = &self.merges[node - n];
        out.push('(');
        for (k, child) in [m.left, m.right].into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            self.write_newick(child, out);
            let _ = write!(out, ":{}", m.height - self.height(child));
        }
        out.push(')');
    }

    /// Every node used once, sizes consistent, heights non-decreasing.
    pub fn is_well_formed(&self) -> bool {
        let n = self.leaves.len();
        if n < 2 || self.merges.len() != n - 1 {
            return false;
        }
        let mut used = vec![false; 2 * n - 1];
        let mut size = vec![1usize; 2 * n - 1];
        let mut prev = 0.0_f64;
        for (k, m) in self.merges.iter().enumerate() {
            let id = n + k;
            for child in [m.left, m.right] {
                if child >= id || used[child] {
                    return false;
                }
                used[child] = true;
            }
            size[id] = size[m.left] + size[m.right];
            if size[id] != m.size || m.height < prev - 1e-12 * prev.abs().max(1.0) {
                return false;
            }
            prev = m.height;
        }
        size[2 * n - 2] == n && !used[2 * n - 2]
    }
}

fn newick_label(label: &str) -> String {
    if label.chars().any(|c| c.is_whitespace() || "()[]':;,".contains(c)) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

/// UPGMA over `distances`. The inter-cluster distance is the mean of all
/// cross-pair distances between original items. Among equal minima the
/// lexicographically smallest `(left, right)` node pair merges first.
pub fn agglomerate<S: AsRef<str>>(distances: &DistanceMatrix, labels: &[S]) -> Result<Dendrogram, ClusterError> {
    let n = distances.n();
    if labels.len() != n {
        return Err(ClusterError::LabelMismatch { labels: labels.len(), n });
    }
    if n < 2 {
        return Err(ClusterError::TooFewLeaves { n });
    }
    let total = 2 * n - 1;
    // cross-pair distance sums between every pair of nodes, indexed by node id
    let mut sums = vec![0.0; total * total];
    for i in 0..n {
        for j in 0..n {
            sums[i * total + j] = distances.get(i, j);
        }
    }
    let mut size = vec![1usize; total];
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for (ia, &a) in active.iter().enumerate() {
            for &b in &active[ia + 1..] {
                let avg = sums[a * total + b] / (size[a] * size[b]) as f64;
                if best.is_none_or(|(h, _, _)| avg < h) {
                    best = Some((avg, a, b));
                }
            }
        }
        let (height, a, b) = best.expect("at least two active clusters");
        let id = n + step;
        size[id] = size[a] + size[b];
        active.retain(|&c| c != a && c != b);
        for &c in &active {
            let s = sums[a * total + c] + sums[b * total + c];
            sums[id * total + c] = s;
            sums[c * total + id] = s;
        }
        active.push(id);
        merges.push(Merge { left: a, right: b, height, size: size[id] });
    }

    let labels = labels.iter().map(|l| l.as_ref().to_string()).collect();
    Ok(Dendrogram { leaves: labels, merges })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergeStep {
    pub members: Vec<String>,
    pub height: f64,
}

/// Merges in height order with their resolved member labels.
pub fn merge_order(dend: &Dendrogram) -> Vec<MergeStep> {
    let n = dend.leaves.len();
    let mut steps: Vec<MergeStep> = (0..dend.merges.len())
        .map(|k| MergeStep {
            members: dend.members(n + k).into_iter().map(|i| dend.leaves[i].clone()).collect(),
            height: dend.merges[k].height,
        })
        .collect();
    steps.sort_by(|x, y| x.height.total_cmp(&y.height));
    steps
}
