//! Seed-driven generation of structured random instances.
//!
//! All randomness comes from an embedded SplitMix64 generator so that a
//! `(config, stream_seed)` pair reproduces the same matrices bit-for-bit on
//! any platform. Per-trial streams are derived from the master seed by
//! [`stream_seed`]:
//!
//! ```text
//! stream_seed(master, i) = mix64(master + mix64((i + 1) * 0x9E3779B97F4A7C15))
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer and arithmetic wraps mod 2^64.
//! Gaussians use Box-Muller on two consecutive uniforms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, HermitianMatrix};
use crate::means::MatrixMean;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream seed for trial `index` under `master`.
pub fn stream_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(mix64(index.wrapping_add(1).wrapping_mul(GOLDEN))))
}

/// SplitMix64: a 64-bit counter pushed through [`mix64`].
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard complex Gaussian: real and imaginary parts i.i.d. `N(0, 1/2)`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1]
        let u2 = self.next_f64();
        let r = (-u1.ln()).sqrt(); // sqrt(-2 ln u1) / sqrt(2)
        let theta = 2.0 * PI * u2;
        Complex64::new(r * theta.cos(), r * theta.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Structure {
    PositiveDefinite,
    NormalComplex,
    HermitianIndefinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseMode {
    /// Phases uniform on `[0, 2 pi)`.
    Uniform,
    /// Phases in `{0, pi}`: real spectra of mixed sign.
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapMode {
    /// Spectrum of `B` inside `[0.5, 1]`, spectrum of `A` inside `[2, 3]`.
    BelowA,
    /// Spectrum of `A` inside `[0.5, 1]`, spectrum of `B` inside `[2, 3]`.
    AboveA,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub dim: usize,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub structure: Structure,
    pub master_seed: u64,
}

impl GeneratorConfig {
    pub fn new(dim: usize, m: f64, big_m: f64, structure: Structure, master_seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if !(m > 0.0) || !(big_m >= m) || !big_m.is_finite() {
            return Err(Error::InvalidInterval {
                lo: m,
                hi: big_m,
                reason: "need 0 < m <= M".into(),
            });
        }
        Ok(Self {
            dim,
            m,
            big_m,
            structure,
            master_seed,
        })
    }

    pub fn stream(&self, trial: u64) -> u64 {
        stream_seed(self.master_seed, trial)
    }

    fn expect(&self, s: Structure) -> Result<()> {
        if self.structure != s {
            return Err(Error::InvalidInput(format!(
                "generator expects {s:?}, config has {:?}",
                self.structure
            )));
        }
        Ok(())
    }

    /// Magnitudes uniform on `[m, M]` with both endpoints forced when `dim >= 2`.
    fn magnitudes(&self, rng: &mut SplitMix64) -> Vec<f64> {
        let n = self.dim;
        let mut v: Vec<f64> = (0..n).map(|_| rng.uniform(self.m, self.big_m)).collect();
        if n >= 2 {
            v[0] = self.big_m;
            v[n - 1] = self.m;
        }
        v
    }
}

/// Haar unitary: Gram-Schmidt on a complex Gaussian matrix. The triangular
/// factor then has a positive real diagonal, which makes the QR
/// factorization unique and the distribution exactly Haar.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| rng.complex_gaussian()).collect())
        .collect();
    for j in 0..dim {
        // Two passes of modified Gram-Schmidt keep orthogonality at round-off level.
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..dim {
                    let qk = cols[k][i];
                    cols[j][i] -= proj * qk;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

fn conjugate_diag(u: &ComplexMatrix, diag: &[Complex64]) -> ComplexMatrix {
    let d = ComplexMatrix::from_diag(diag);
    &(u * &d) * &u.adjoint()
}

/// `U diag(lambda) U*` with `lambda` uniform on `[m, M]`, endpoints attained.
pub fn random_pd(config: &GeneratorConfig, seed: u64) -> Result<HermitianMatrix> {
    config.expect(Structure::PositiveDefinite)?;
    let mut rng = SplitMix64::new(seed);
    let lambda = config.magnitudes(&mut rng);
    let u = random_unitary(config.dim, rng.next_u64());
    let d: Vec<Complex64> = lambda.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(HermitianMatrix::from_matrix(&conjugate_diag(&u, &d)))
}

pub fn random_normal(config: &GeneratorConfig, seed: u64) -> Result<ComplexMatrix> {
    random_normal_with_phases(config, seed, PhaseMode::Uniform)
}

/// `U diag(z) U*` with `|z_j|` uniform on `[m, M]` (endpoints attained).
pub fn random_normal_with_phases(config: &GeneratorConfig, seed: u64, phases: PhaseMode) -> Result<ComplexMatrix> {
    config.expect(Structure::NormalComplex)?;
    let mut rng = SplitMix64::new(seed);
    let mags = config.magnitudes(&mut rng);
    let z: Vec<Complex64> = mags
        .iter()
        .map(|&r| {
            let theta = match phases {
                PhaseMode::Uniform => 2.0 * PI * rng.next_f64(),
                PhaseMode::Real => {
                    if rng.next_u64() >> 63 == 1 {
                        PI
                    } else {
                        0.0
                    }
                }
            };
            if theta == 0.0 {
                Complex64::new(r, 0.0)
            } else if theta == PI {
                Complex64::new(-r, 0.0)
            } else {
                Complex64::from_polar(r, theta)
            }
        })
        .collect();
    let u = random_unitary(config.dim, rng.next_u64());
    Ok(conjugate_diag(&u, &z))
}

/// Hermitian with eigenvalues `±lambda`, `lambda` uniform on `[m, M]`, random signs.
pub fn random_hermitian(config: &GeneratorConfig, seed: u64) -> Result<HermitianMatrix> {
    config.expect(Structure::HermitianIndefinite)?;
    let mut rng = SplitMix64::new(seed);
    let mags = config.magnitudes(&mut rng);
    let d: Vec<Complex64> = mags
        .iter()
        .map(|&r| {
            let s = if rng.next_u64() >> 63 == 1 { -1.0 } else { 1.0 };
            Complex64::new(s * r, 0.0)
        })
        .collect();
    let u = random_unitary(config.dim, rng.next_u64());
    Ok(HermitianMatrix::from_matrix(&conjugate_diag(&u, &d)))
}

/// Positive definite pair with disjoint spectra (gap at least 1).
pub fn random_gap_pair(dim: usize, mode: GapMode, seed: u64) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let low = GeneratorConfig::new(dim, 0.5, 1.0, Structure::PositiveDefinite, 0)?;
    let high = GeneratorConfig::new(dim, 2.0, 3.0, Structure::PositiveDefinite, 0)?;
    let seed_a = stream_seed(seed, 0);
    let seed_b = stream_seed(seed, 1);
    Ok(match mode {
        GapMode::BelowA => (random_pd(&high, seed_a)?, random_pd(&low, seed_b)?),
        GapMode::AboveA => (random_pd(&low, seed_a)?, random_pd(&high, seed_b)?),
    })
}

/// Rescales both operands by `c = lambda_max(A σ B)` so that the top
/// eigenvalue of the rescaled mean is 1 (homogeneity of the mean).
pub fn normalize_for_contraction(
    sigma: &MatrixMean,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let c = eigh(&sigma.apply(a, b)?)?.max();
    if !(c > 0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: c });
    }
    Ok((a.scale(1.0 / c), b.scale(1.0 / c)))
}
