//! Classical Bayes and Jeffrey (soft-evidence) updates.
//!
//! With a forward process `φ(b|a)`, prior `γ(a)` and soft evidence `r(b)`,
//! the posterior is `q(a) = Σ_b φ(b|a)γ(a) / (Σ_a' φ(b|a')γ(a')) · r(b)`.
//! Extending the prior with a hidden variable `c` that the forward process
//! ignores leaves the posterior marginal on `a` unchanged.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Normalization tolerance for distributions and stochastic columns.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution { reason: "empty" });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution {
                reason: "negative or non-finite weight",
            });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidProbabilities { sum });
        }
        Ok(Self { weights })
    }

    /// Point mass on `k` out of `n` outcomes.
    pub fn point(n: usize, k: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[k] = 1.0;
        Self { weights }
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Column-stochastic matrix `φ(b|a)`, rows indexed by `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    n_out: usize,
    n_in: usize,
    entries: Vec<f64>,
}

impl StochasticMatrix {
    /// `entries[b * n_in + a] = φ(b|a)`.
    pub fn new(n_out: usize, n_in: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n_out * n_in {
            return Err(Error::DimensionMismatch {
                context: "stochastic matrix storage",
                expected: n_out * n_in,
                found: entries.len(),
            });
        }
        if entries.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution {
                reason: "negative or non-finite transition probability",
            });
        }
        for a in 0..n_in {
            let sum: f64 = (0..n_out).map(|b| entries[b * n_in + a]).sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::InvalidProbabilities { sum });
            }
        }
        Ok(Self {
            n_out,
            n_in,
            entries,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self {
            n_out: n,
            n_in: n,
            entries,
        }
    }

    /// Binary symmetric channel with flip probability `flip`.
    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        Self::new(2, 2, vec![1.0 - flip, flip, flip, 1.0 - flip])
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    /// `φ(b|a)`.
    pub fn get(&self, b: usize, a: usize) -> f64 {
        self.entries[b * self.n_in + a]
    }
}

/// Distribution over pairs `(a, c)`, stored with `a` major.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    n_a: usize,
    n_c: usize,
    dist: Distribution,
}

impl JointDistribution {
    pub fn new(n_a: usize, n_c: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n_a * n_c {
            return Err(Error::DimensionMismatch {
                context: "joint distribution storage",
                expected: n_a * n_c,
                found: weights.len(),
            });
        }
        Ok(Self {
            n_a,
            n_c,
            dist: Distribution::new(weights)?,
        })
    }

    pub fn independent(a: &Distribution, c: &Distribution) -> Self {
        let weights = a
            .weights()
            .iter()
            .flat_map(|pa| c.weights().iter().map(move |pc| pa * pc))
            .collect();
        Self {
            n_a: a.len(),
            n_c: c.len(),
            dist: Distribution { weights },
        }
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    pub fn get(&self, a: usize, c: usize) -> f64 {
        self.dist.weights[a * self.n_c + c]
    }

    pub fn weights(&self) -> &[f64] {
        self.dist.weights()
    }

    pub fn marginal_a(&self) -> Distribution {
        let weights = (0..self.n_a)
            .map(|a| (0..self.n_c).map(|c| self.get(a, c)).sum())
            .collect();
        Distribution { weights }
    }
}

fn check_dims(prior_len: usize, forward: &StochasticMatrix, evidence: &Distribution) -> Result<()> {
    if forward.n_in() != prior_len {
        return Err(Error::DimensionMismatch {
            context: "forward process input",
            expected: prior_len,
            found: forward.n_in(),
        });
    }
    if evidence.len() != forward.n_out() {
        return Err(Error::DimensionMismatch {
            context: "evidence alphabet",
            expected: forward.n_out(),
            found: evidence.len(),
        });
    }
    Ok(())
}

/// Jeffrey update `q(a)` of a prior on `a` given soft evidence on `b`.
///
/// Outcomes with zero evidence are skipped even when their predicted
/// probability vanishes.
pub fn jeffrey_update(prior: &Distribution, forward: &StochasticMatrix, evidence: &Distribution) -> Result<Distribution> {
    check_dims(prior.len(), forward, evidence)?;
    let mut q = vec![0.0; prior.len()];
    for (b, &r) in evidence.weights().iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let predicted: f64 = (0..prior.len()).map(|a| forward.get(b, a) * prior.weights[a]).sum();
        if predicted <= 0.0 {
            return Err(Error::UnsupportedEvidence { outcome: b });
        }
        for (a, qa) in q.iter_mut().enumerate() {
            *qa += forward.get(b, a) * prior.weights[a] / predicted * r;
        }
    }
    Ok(Distribution { weights: q })
}

/// Standard Bayes posterior for a single observed outcome.
pub fn bayes_update(prior: &Distribution, forward: &StochasticMatrix, observed: usize) -> Result<Distribution> {
    jeffrey_update(prior, forward, &Distribution::point(forward.n_out(), observed))
}

/// Jeffrey update of a joint prior `γ(a, c)` under a forward process that
/// depends only on `a`.
pub fn jeffrey_update_extended(
    prior_joint: &JointDistribution,
    forward: &StochasticMatrix,
    evidence: &Distribution,
) -> Result<JointDistribution> {
    check_dims(prior_joint.n_a, forward, evidence)?;
    let (n_a, n_c) = (prior_joint.n_a, prior_joint.n_c);
    let mut q = vec![0.0; n_a * n_c];
    for (b, &r) in evidence.weights().iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let mut predicted = 0.0;
        for a in 0..n_a {
            for c in 0..n_c {
                predicted += forward.get(b, a) * prior_joint.get(a, c);
            }
        }
        if predicted <= 0.0 {
            return Err(Error::UnsupportedEvidence { outcome: b });
        }
        for a in 0..n_a {
            for c in 0..n_c {
                q[a * n_c + c] += forward.get(b, a) * prior_joint.get(a, c) / predicted * r;
            }
        }
    }
    Ok(JointDistribution {
        n_a,
        n_c,
        dist: Distribution { weights: q },
    })
}
