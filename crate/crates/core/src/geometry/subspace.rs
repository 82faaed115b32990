use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// A `k`-dimensional linear subspace of `R^n` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceSpec {
    pub ambient_dim: usize,
    pub dim: usize,
    pub basis: Vec<Vec<f64>>,
}

impl SubspaceSpec {
    pub fn new(ambient_dim: usize, basis: Vec<Vec<f64>>) -> Result<SubspaceSpec> {
        let s = SubspaceSpec { ambient_dim, dim: basis.len(), basis };
        if s.basis.iter().any(|b| b.len() != ambient_dim) {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: s.basis[0].len() });
        }
        if s.orthonormality_defect() > 1e-12 {
            return Err(Error::InvalidBody("subspace basis is not orthonormal".into()));
        }
        Ok(s)
    }

    /// The span of the first `k` coordinate axes.
    pub fn coordinate(n: usize, k: usize) -> SubspaceSpec {
        let basis = (0..k).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        SubspaceSpec { ambient_dim: n, dim: k, basis }
    }

    /// Largest entry of `|BᵀB − I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, u) in self.basis.iter().enumerate() {
            for (b, v) in self.basis.iter().enumerate() {
                let d: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }

    /// Coordinates of the orthogonal projection of `x` in the basis.
    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| b.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
    }

    /// Embeds subspace coordinates back into `R^n`.
    pub fn embed(&self, c: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient_dim];
        for (b, ci) in self.basis.iter().zip(c) {
            for (o, bi) in out.iter_mut().zip(b) {
                *o += ci * bi;
            }
        }
        out
    }

    /// An orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Vec<Vec<f64>> {
        let n = self.ambient_dim;
        let mut basis = self.basis.clone();
        let mut out = Vec::new();
        for j in 0..n {
            let mut v: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            for _ in 0..2 {
                for b in &basis {
                    let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= d * bi;
                    }
                }
            }
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nv > 1e-8 {
                for x in v.iter_mut() {
                    *x /= nv;
                }
                basis.push(v.clone());
                out.push(v);
            }
            if basis.len() == n {
                break;
            }
        }
        out
    }
}

/// Haar-random `k`-subspace of `R^n`: Gram–Schmidt on Gaussian vectors.
pub fn random_subspace_with<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> SubspaceSpec {
    loop {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut ok = true;
        for _ in 0..k {
            let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            for _ in 0..2 {
                for b in &basis {
                    let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= d * bi;
                    }
                }
            }
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nv < 1e-10 {
                ok = false;
                break;
            }
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
        if ok {
            return SubspaceSpec { ambient_dim: n, dim: k, basis };
        }
    }
}

/// Deterministic Haar-random subspace for `1 ≤ k < n ≤ 3`.
pub fn random_subspace(n: usize, k: usize, seed: u64) -> Result<SubspaceSpec> {
    if !(1 <= k && k < n && n <= 3) {
        return Err(Error::Range(format!("random subspaces need 1 ≤ k < n ≤ 3, got n={n}, k={k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_subspace_with(&mut rng, n, k))
}
