//! Model parameters shared by every layer of the computation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the n:m conversion Hamiltonian `H = eps*s_z + v*s_x`.
///
/// `m` particles of type A convert into `n` particles of type B, with the
/// conserved number `N = n a†a + m b†b`. Constructed only through
/// [`ModelSpec::new`], which enforces `N` to be a positive multiple of `m*n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelSpec", into = "RawModelSpec")]
pub struct ModelSpec {
    m: u32,
    n: u32,
    particles: u64,
    eps: f64,
    v: f64,
}

#[derive(Serialize, Deserialize)]
struct RawModelSpec {
    m: u32,
    n: u32,
    #[serde(rename = "N")]
    particles: u64,
    eps: f64,
    v: f64,
    #[serde(default, skip_deserializing)]
    eta: f64,
}

impl TryFrom<RawModelSpec> for ModelSpec {
    type Error = Error;

    fn try_from(raw: RawModelSpec) -> Result<Self> {
        ModelSpec::new(raw.m, raw.n, raw.particles, raw.eps, raw.v)
    }
}

impl From<ModelSpec> for RawModelSpec {
    fn from(spec: ModelSpec) -> Self {
        RawModelSpec {
            m: spec.m,
            n: spec.n,
            particles: spec.particles,
            eps: spec.eps,
            v: spec.v,
            eta: spec.eta(),
        }
    }
}

impl ModelSpec {
    pub fn new(m: u32, n: u32, particles: u64, eps: f64, v: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidModel("m must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidModel("n must be at least 1".into()));
        }
        let mn = u64::from(m) * u64::from(n);
        if particles < mn {
            return Err(Error::InvalidModel(format!(
                "N must be at least m·n = {mn} (got N = {particles})"
            )));
        }
        if particles % mn != 0 {
            return Err(Error::InvalidModel(format!(
                "N must be a multiple of m·n = {mn} (got N = {particles})"
            )));
        }
        if !eps.is_finite() || !v.is_finite() {
            return Err(Error::InvalidModel("eps and v must be finite".into()));
        }
        Ok(ModelSpec {
            m,
            n,
            particles,
            eps,
            v,
        })
    }

    /// Spec with `N` chosen so that the Fock subspace has dimension `dim`.
    pub fn with_dim(m: u32, n: u32, dim: usize, eps: f64, v: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidModel("dimension must be at least 2".into()));
        }
        let mn = u64::from(m) * u64::from(n);
        ModelSpec::new(m, n, mn * (dim as u64 - 1), eps, v)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Conserved particle number `N`.
    pub fn particles(&self) -> u64 {
        self.particles
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn mn(&self) -> u64 {
        u64::from(self.m) * u64::from(self.n)
    }

    /// `N / (m n)`, the largest Fock index.
    pub fn max_index(&self) -> u64 {
        self.particles / self.mn()
    }

    /// Dimension `N/(mn) + 1` of the invariant subspace.
    pub fn dim(&self) -> usize {
        self.max_index() as usize + 1
    }

    /// Effective Planck constant `1 / (N/(mn) + 1)`.
    pub fn eta(&self) -> f64 {
        1.0 / self.dim() as f64
    }

    /// `N / (2 m n)`, the largest eigenvalue of `s_z`.
    pub fn half_index(&self) -> f64 {
        self.particles as f64 / (2.0 * self.mn() as f64)
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        ModelSpec { eps, ..*self }
    }

    pub fn with_particles(&self, particles: u64) -> Result<Self> {
        ModelSpec::new(self.m, self.n, particles, self.eps, self.v)
    }

    /// Same model with the roles of the two species exchanged.
    pub fn swapped(&self) -> Self {
        ModelSpec {
            m: self.n,
            n: self.m,
            ..*self
        }
    }
}
