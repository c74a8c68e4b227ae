//! Second-quantised operators assembled from words of creation, annihilation
//! and condensate-depletion factors.

use rayon::prelude::*;
use serde::Serialize;

use super::basis::{FockBasis, Space};
use super::sparse::SparseOperator;
use crate::error::{require, Result};
use crate::potential::{RadialInteraction, ScaledPotential};


/// One letter of an operator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    Create(usize),
    Annihilate(usize),
    /// Multiplication by `sqrt((N - N_+)/N)` on the current state.
    Depletion,
}

/// A product of letters; the last letter acts first.
pub type Word = Vec<Letter>;

pub fn adjoint(word: &[Letter]) -> Word {
    word.iter()
        .rev()
        .map(|l| match *l {
            Letter::Create(i) => Letter::Annihilate(i),
            Letter::Annihilate(i) => Letter::Create(i),
            Letter::Depletion => Letter::Depletion,
        })
        .collect()
}

/// `b*_p = a*_p sqrt((N - N_+)/N)`.
pub fn b_dag(i: usize) -> Word {
    vec![Letter::Create(i), Letter::Depletion]
}

/// `b_p = sqrt((N - N_+)/N) a_p`.
pub fn b(i: usize) -> Word {
    vec![Letter::Depletion, Letter::Annihilate(i)]
}

pub fn concat(words: &[Word]) -> Word {
    words.concat()
}

/// Apply `word` to the occupation vector `occ`; `None` if the result vanishes.
fn apply(word: &[Letter], occ: &[u8], n: usize, space: Space) -> Option<(Vec<u8>, f64)> {
    let mut v: Vec<i32> = occ.iter().map(|&x| x as i32).collect();
    let mut amp = 1.0;
    for letter in word.iter().rev() {
        match *letter {
            Letter::Annihilate(i) => {
                if v[i] == 0 {
                    return None;
                }
                amp *= (v[i] as f64).sqrt();
                v[i] -= 1;
            }
            Letter::Create(i) => {
                v[i] += 1;
                amp *= (v[i] as f64).sqrt();
            }
            Letter::Depletion => {
                let excited: i32 = v[1..].iter().sum();
                let left = n as i32 - excited;
                if left <= 0 {
                    return None;
                }
                amp *= (left as f64 / n as f64).sqrt();
            }
        }
    }
    if space == Space::Excitations && v[0] != 0 {
        return None;
    }
    let out: Option<Vec<u8>> = v.iter().map(|&x| u8::try_from(x).ok()).collect();
    out.map(|o| (o, amp))
}

/// Sum of `coefficient * word` terms.
#[derive(Debug, Clone, Default)]
pub struct OperatorSum {
    pub terms: Vec<(f64, Word)>,
}

impl OperatorSum {
    pub fn push(&mut self, c: f64, w: Word) {
        if c != 0.0 {
            self.terms.push((c, w));
        }
    }

    /// Add `c (w - w^dagger)`.
    pub fn push_antihermitian(&mut self, c: f64, w: Word) {
        let a = adjoint(&w);
        self.push(c, w);
        self.push(-c, a);
    }

    /// Matrix of the sum on `basis`. Results falling outside the basis (above
    /// the excitation cap, or outside a momentum sector) are discarded.
    pub fn build(&self, basis: &FockBasis) -> SparseOperator {
        if basis.space == Space::Excitations {
            debug_assert!(self.terms.iter().all(|(_, w)| !w.contains(&Letter::Create(0)) && !w.contains(&Letter::Annihilate(0))));
        }
        let columns: Vec<Vec<(usize, usize, f64)>> = (0..basis.dim())
            .into_par_iter()
            .map(|col| {
                let occ = basis.state(col);
                let mut out = Vec::new();
                for (c, w) in &self.terms {
                    if let Some((target, amp)) = apply(w, occ, basis.n, basis.space) {
                        if let Some(row) = basis.find(&target) {
                            out.push((row, col, c * amp));
                        }
                    }
                }
                out
            })
            .collect();
        SparseOperator::from_triplets(basis.dim(), columns.into_iter().flatten().collect())
    }
}

/// Single-word operator.
pub fn word_operator(basis: &FockBasis, w: Word) -> SparseOperator {
    let mut s = OperatorSum::default();
    s.push(1.0, w);
    s.build(basis)
}

/// `N_+` as a diagonal matrix.
pub fn excitation_number(basis: &FockBasis) -> SparseOperator {
    SparseOperator::diagonal(&basis.sectors().iter().map(|&k| k as f64).collect::<Vec<_>>())
}

/// Terms of the kinetic-plus-pair Hamiltonian and the number of index triples
/// whose fourth leg fell outside the mode set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamiltonianReport {
    pub terms: usize,
    pub dropped_terms: usize,
}

/// `sum_p p^2 a*_p a_p + (kappa/2N) sum V^(r/N^beta) a*_{p+r} a*_q a_p a_{q+r}`,
/// restricted to momentum-conserving terms with all legs in the mode set.
pub fn build_hamiltonian(pot: &ScaledPotential, basis: &FockBasis) -> Result<(SparseOperator, HamiltonianReport)> {
    build_hamiltonian_with(|k| pot.fourier_transform(k), basis)
}

/// As [`build_hamiltonian`] with the pair kernel `W(|r|) = (kappa/N) V^(r/N^beta)` given directly.
pub fn build_hamiltonian_with<F: Fn(f64) -> Result<f64>>(kernel: F, basis: &FockBasis) -> Result<(SparseOperator, HamiltonianReport)> {
    require(basis.space != Space::Excitations, || "the Hamiltonian acts on a particle space".into())?;
    let modes = &basis.modes;
    let m = modes.len();
    let mut sum = OperatorSum::default();
    for i in 1..m {
        sum.push(modes.momentum_squared(i), vec![Letter::Create(i), Letter::Annihilate(i)]);
    }
    let mut dropped = 0;
    // a*_k a*_l a_i a_j with p_k = p_i + r, p_l = p_j - r.
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let (pi, pj, pk) = (modes.label(i), modes.label(j), modes.label(k));
                let r = [pk[0] - pi[0], pk[1] - pi[1], pk[2] - pi[2]];
                let Some(l) = modes.find([pj[0] - r[0], pj[1] - r[1], pj[2] - r[2]]) else {
                    dropped += 1;
                    continue;
                };
                let r_abs = 2.0 * std::f64::consts::PI * ((r[0] * r[0] + r[1] * r[1] + r[2] * r[2]) as f64).sqrt();
                let w = 0.5 * kernel(r_abs)?;
                sum.push(w, vec![Letter::Create(k), Letter::Create(l), Letter::Annihilate(i), Letter::Annihilate(j)]);
            }
        }
    }
    let report = HamiltonianReport { terms: sum.terms.len(), dropped_terms: dropped };
    let mut h = sum.build(basis);
    h.hermitian = h.asymmetry() < 1e-12;
    Ok((h, report))
}

/// The relabelling `U_N` from the N-particle basis onto the excitation basis.
pub fn excitation_map(particles: &FockBasis, excitations: &FockBasis) -> Result<SparseOperator> {
    require(particles.space == Space::Particles && excitations.space == Space::Excitations, || "excitation_map needs a particle and an excitation basis".into())?;
    require(particles.n == excitations.n && particles.dim() == excitations.dim(), || "bases describe different systems".into())?;
    let mut t = Vec::with_capacity(particles.dim());
    for col in 0..particles.dim() {
        let mut occ = particles.state(col).to_vec();
        occ[0] = 0;
        let row = excitations.find(&occ).ok_or_else(|| crate::error::Error::Internal("excitation state missing".into()))?;
        t.push((row, col, 1.0));
    }
    let mut u = SparseOperator::from_triplets(particles.dim(), t);
    u.block_diagonal = true;
    Ok(u)
}

/// `1/2 sum_p c_p (b*_p b*_{-p} - b_p b_{-p})` over the nonzero modes.
pub fn pair_generator(coeffs: &[f64], basis: &FockBasis) -> Result<SparseOperator> {
    require(basis.space == Space::Excitations, || "pair generators act on the excitation space".into())?;
    let modes = &basis.modes;
    require(coeffs.len() == modes.len(), || format!("expected {} coefficients, got {}", modes.len(), coeffs.len()))?;
    for i in 1..modes.len() {
        let j = modes.negative(i);
        require((coeffs[i] - coeffs[j]).abs() <= 1e-14 * coeffs[i].abs().max(1.0), || format!("kernel not symmetric under p -> -p at mode {:?}", modes.label(i)))?;
    }
    let mut sum = OperatorSum::default();
    for i in 1..modes.len() {
        let j = modes.negative(i);
        sum.push_antihermitian(0.5 * coeffs[i], concat(&[b_dag(i), b_dag(j)]));
    }
    Ok(sum.build(basis))
}

/// Weights of the cubic generator.
#[derive(Debug, Clone, PartialEq)]
pub enum CubicWeights {
    /// `eta_r [b*_{r+v} a*_{-r} a_v - h.c.]`.
    Plain,
    /// `eta_r [sigma_v b*_{r+v} b*_{-r} (gamma_v b_v + sigma_v b*_{-v}) - h.c.]`
    /// with `gamma_v = cosh(k_v)`, `sigma_v = sinh(k_v)` for the given kernel `k`.
    Dressed(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicReport {
    pub terms: usize,
    pub dropped_terms: usize,
}

/// `A = N^{-1/2} sum_{r in P_H, v in P_L} eta_r [ ... - h.c.]`.
pub fn build_cubic_generator(eta: &[f64], high: &[usize], low: &[usize], weights: &CubicWeights, basis: &FockBasis) -> Result<(SparseOperator, CubicReport)> {
    require(basis.space == Space::Excitations, || "the cubic generator acts on the excitation space".into())?;
    let modes = &basis.modes;
    require(eta.len() == modes.len(), || "eta must have one entry per mode".into())?;
    require(high.iter().chain(low).all(|&i| i > 0 && i < modes.len()), || "P_H and P_L must be nonzero modes".into())?;
    require(high.iter().all(|i| !low.contains(i)), || "P_H and P_L must be disjoint".into())?;
    let scale = 1.0 / (basis.n as f64).sqrt();
    let mut sum = OperatorSum::default();
    let mut dropped = 0;
    for &r in high {
        for &v in low {
            let Some(rv) = modes.sum(r, v) else {
                dropped += 1;
                continue;
            };
            if rv == 0 {
                dropped += 1;
                continue;
            }
            let mr = modes.negative(r);
            let c = scale * eta[r];
            match weights {
                CubicWeights::Plain => {
                    sum.push_antihermitian(c, concat(&[b_dag(rv), vec![Letter::Create(mr), Letter::Annihilate(v)]]));
                }
                CubicWeights::Dressed(k) => {
                    require(k.len() == modes.len(), || "dressing kernel must have one entry per mode".into())?;
                    let (g, s) = (k[v].cosh(), k[v].sinh());
                    let mv = modes.negative(v);
                    sum.push_antihermitian(c * s * g, concat(&[b_dag(rv), b_dag(mr), b(v)]));
                    sum.push_antihermitian(c * s * s, concat(&[b_dag(rv), b_dag(mr), b_dag(mv)]));
                }
            }
        }
    }
    let report = CubicReport { terms: sum.terms.len(), dropped_terms: dropped };
    Ok((sum.build(basis), report))
}
