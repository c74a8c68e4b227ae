//! Finite momentum sets in `2 pi Z^3` closed under `p -> -p`.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{require, Result};

/// Ordered momenta `p = 2 pi n`, with `p = 0` at index 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSet {
    labels: Vec<[i64; 3]>,
    #[serde(skip)]
    index: HashMap<[i64; 3], usize>,
}

fn neg(n: [i64; 3]) -> [i64; 3] {
    [-n[0], -n[1], -n[2]]
}

fn norm2(n: &[i64; 3]) -> i64 {
    n[0] * n[0] + n[1] * n[1] + n[2] * n[2]
}

impl ModeSet {
    /// From integer labels `n` (momentum `2 pi n`). Zero is inserted if
    /// missing; the set must be closed under negation and free of duplicates.
    pub fn from_labels(labels: &[[i64; 3]]) -> Result<Self> {
        let mut all = vec![[0, 0, 0]];
        all.extend(labels.iter().copied().filter(|n| *n != [0, 0, 0]));
        let mut index = HashMap::new();
        for (i, n) in all.iter().enumerate() {
            require(index.insert(*n, i).is_none(), || format!("duplicate mode {n:?}"))?;
        }
        for n in &all {
            require(index.contains_key(&neg(*n)), || format!("mode set must contain -p for p = 2 pi {n:?}"))?;
        }
        Ok(Self { labels: all, index })
    }

    /// All `p in 2 pi Z^3` with `|p| <= p_max`, ordered by `(|p|, lexicographic)`.
    pub fn ball(p_max: f64) -> Result<Self> {
        require(p_max >= 0.0, || format!("p_max must be nonnegative, got {p_max}"))?;
        let m = (p_max / (2.0 * PI) + 1e-9).floor() as i64;
        let limit = (p_max / (2.0 * PI)).powi(2) + 1e-9;
        let mut labels = Vec::new();
        for x in -m..=m {
            for y in -m..=m {
                for z in -m..=m {
                    if (norm2(&[x, y, z]) as f64) <= limit {
                        labels.push([x, y, z]);
                    }
                }
            }
        }
        labels.sort_by_key(|n| (norm2(n), *n));
        Self::from_labels(&labels)
    }

    /// The chain `{2 pi k e_1 : |k| <= k_max}`.
    pub fn axial(k_max: i64) -> Result<Self> {
        require(k_max >= 0, || "k_max must be nonnegative".into())?;
        let mut labels = Vec::new();
        for k in 1..=k_max {
            labels.push([k, 0, 0]);
            labels.push([-k, 0, 0]);
        }
        Self::from_labels(&labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> [i64; 3] {
        self.labels[i]
    }

    pub fn labels(&self) -> &[[i64; 3]] {
        &self.labels
    }

    pub fn find(&self, n: [i64; 3]) -> Option<usize> {
        self.index.get(&n).copied()
    }

    /// Index of `-p`.
    pub fn negative(&self, i: usize) -> usize {
        self.index[&neg(self.labels[i])]
    }

    /// Index of `p_i + p_j` if present.
    pub fn sum(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (self.labels[i], self.labels[j]);
        self.find([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    }

    /// Index of `p_i - p_j` if present.
    pub fn difference(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (self.labels[i], self.labels[j]);
        self.find([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
    }

    pub fn momentum(&self, i: usize) -> f64 {
        2.0 * PI * (norm2(&self.labels[i]) as f64).sqrt()
    }

    pub fn momentum_squared(&self, i: usize) -> f64 {
        4.0 * PI * PI * norm2(&self.labels[i]) as f64
    }

    /// Indices of nonzero modes with `lo <= |p| <= hi`.
    pub fn shell_range(&self, lo: f64, hi: f64) -> Vec<usize> {
        (1..self.len()).filter(|&i| (lo..=hi).contains(&self.momentum(i))).collect()
    }
}
