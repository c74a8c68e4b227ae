//! Occupation-number bases: fixed-N particle spaces, truncated excitation
//! spaces, and particle spaces of variable number.

use std::collections::HashMap;

use serde::Serialize;

use super::modes::ModeSet;
use crate::error::{require, Error, Result};

/// Default bound on the basis dimension.
pub const DEFAULT_DIMENSION_CAP: usize = 200_000;

/// Which Hilbert space the occupation vectors span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    /// `sum_p n_p = N`.
    Particles,
    /// Excitations only: `n_0 = 0` and `sum_{p != 0} n_p <= N`.
    Excitations,
    /// All particle numbers `0..=N`.
    Grand,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisOptions {
    pub cap: usize,
    /// Keep only states with this total momentum (integer label).
    pub momentum: Option<[i64; 3]>,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_DIMENSION_CAP, momentum: None }
    }
}

/// Occupation vectors ordered by `(N_+, lexicographic)`.
#[derive(Debug, Clone, Serialize)]
pub struct FockBasis {
    pub n: usize,
    pub space: Space,
    pub modes: ModeSet,
    pub momentum: Option<[i64; 3]>,
    states: Vec<Vec<u8>>,
    sectors: Vec<usize>,
    #[serde(skip)]
    index: HashMap<Vec<u8>, usize>,
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// All vectors of `slots` nonnegative entries summing to `total`, lexicographic.
fn compositions(total: usize, slots: usize, out: &mut Vec<Vec<u8>>, prefix: &mut Vec<u8>, budget: usize) -> bool {
    if slots == 0 {
        if total == 0 {
            if out.len() >= budget {
                return false;
            }
            out.push(prefix.clone());
        }
        return true;
    }
    if slots == 1 {
        prefix.push(total as u8);
        let ok = compositions(0, 0, out, prefix, budget);
        prefix.pop();
        return ok;
    }
    for first in 0..=total {
        prefix.push(first as u8);
        let ok = compositions(total - first, slots - 1, out, prefix, budget);
        prefix.pop();
        if !ok {
            return false;
        }
    }
    true
}

impl FockBasis {
    pub fn particles(n: usize, modes: &ModeSet) -> Result<Self> {
        Self::new(n, modes, Space::Particles, BasisOptions::default())
    }

    pub fn excitations(n: usize, modes: &ModeSet) -> Result<Self> {
        Self::new(n, modes, Space::Excitations, BasisOptions::default())
    }

    pub fn new(n: usize, modes: &ModeSet, space: Space, opts: BasisOptions) -> Result<Self> {
        require(n >= 1, || "N must be at least 1".into())?;
        require(n <= u8::MAX as usize, || format!("N = {n} exceeds the supported occupation range"))?;
        let m = modes.len();
        let full = match space {
            Space::Particles | Space::Excitations => binomial((n + m - 1) as u128, (m - 1) as u128),
            Space::Grand => binomial((n + m) as u128, m as u128),
        };
        // Enumeration itself is bounded so that momentum filtering stays affordable.
        let raw_cap = if opts.momentum.is_some() { opts.cap.saturating_mul(50) } else { opts.cap };
        if full > raw_cap as u128 {
            return Err(Error::DimensionOverflow { dimension: full.min(usize::MAX as u128) as usize, cap: opts.cap });
        }
        let mut states = Vec::new();
        let mut sectors = Vec::new();
        for excited in 0..=n {
            let mut rest = Vec::new();
            compositions(excited, m - 1, &mut rest, &mut Vec::new(), usize::MAX);
            let zero_counts: Vec<usize> = match space {
                Space::Particles => vec![n - excited],
                Space::Excitations => vec![0],
                Space::Grand => (0..=n - excited).collect(),
            };
            let mut block = Vec::new();
            for z in zero_counts {
                for r in &rest {
                    let mut v = Vec::with_capacity(m);
                    v.push(z as u8);
                    v.extend_from_slice(r);
                    if let Some(target) = opts.momentum {
                        if total_momentum(modes, &v) != target {
                            continue;
                        }
                    }
                    block.push(v);
                }
            }
            block.sort();
            for v in block {
                states.push(v);
                sectors.push(excited);
            }
        }
        if states.len() > opts.cap {
            return Err(Error::DimensionOverflow { dimension: states.len(), cap: opts.cap });
        }
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self { n, space, modes: modes.clone(), momentum: opts.momentum, states, sectors, index })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &[u8] {
        &self.states[i]
    }

    pub fn find(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// `N_+ = sum_{p != 0} n_p` of basis state `i`.
    pub fn sector(&self, i: usize) -> usize {
        self.sectors[i]
    }

    pub fn sectors(&self) -> &[usize] {
        &self.sectors
    }

    /// Total particle number of each basis state (including the zero mode).
    pub fn particle_numbers(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.iter().map(|&x| x as f64).sum()).collect()
    }

    /// Index of the state with every particle in the condensate (or the
    /// vacuum, for the excitation space).
    pub fn condensate(&self) -> Option<usize> {
        let mut v = vec![0u8; self.modes.len()];
        if self.space == Space::Particles {
            v[0] = self.n as u8;
        }
        self.find(&v)
    }

    /// Basis vector `e_i`.
    pub fn unit(&self, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        v[i] = 1.0;
        v
    }
}

pub(crate) fn total_momentum(modes: &ModeSet, occ: &[u8]) -> [i64; 3] {
    let mut p = [0i64; 3];
    for (i, &k) in occ.iter().enumerate() {
        let l = modes.label(i);
        for d in 0..3 {
            p[d] += k as i64 * l[d];
        }
    }
    p
}
