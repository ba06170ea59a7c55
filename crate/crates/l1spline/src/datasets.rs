//! Test problems: Heaviside, multiscale steps and sine, sampled on an even
//! grid with seeded Gaussian noise.
//!
//! Noise comes from the ChaCha20 stream cipher (20 rounds, RFC 8439 block
//! function) keyed with the 64-bit seed in little-endian order followed by
//! 24 zero bytes, stream 0, counter 0. Each 64-bit output word `w` gives the
//! uniform `(w >> 11) · 2⁻⁵³`; pairs `(u₁, u₂)` go through Box–Muller as
//! `√(−2 ln(1 − u₁)) · (cos 2πu₂, sin 2πu₂)`, both normals used in order.

use std::f64::consts::{PI, TAU};

use l1spline_core::{DataSet, Heaviside, Steps, TargetFunction};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    /// 0 left of `jump`, 1 at and right of it.
    Heaviside { jump: f64 },
    /// `levels[k]` between `edges[k-1]` and `edges[k]`.
    MultiscaleSteps { edges: Vec<f64>, levels: Vec<f64> },
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Noise {
    pub mean: f64,
    pub std_dev: f64,
}

impl Noise {
    pub const NONE: Noise = Noise {
        mean: 0.0,
        std_dev: 0.0,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub shape: Shape,
    pub domain: (f64, f64),
    pub samples: usize,
    pub noise: Noise,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Heaviside on `[0, 1]` with the jump at 0.5.
    pub fn heaviside(samples: usize, std_dev: f64, seed: u64) -> Self {
        Self {
            shape: Shape::Heaviside { jump: 0.5 },
            domain: (0.0, 1.0),
            samples,
            noise: Noise { mean: 0.0, std_dev },
            seed,
        }
    }

    /// `sin x` on `[0, 2π]`.
    pub fn sine(samples: usize, std_dev: f64, seed: u64) -> Self {
        Self {
            shape: Shape::Sine,
            domain: (0.0, TAU),
            samples,
            noise: Noise { mean: 0.0, std_dev },
            seed,
        }
    }

    /// Plateaus `levels` of equal width on `domain`.
    pub fn multiscale(domain: (f64, f64), levels: Vec<f64>, samples: usize, noise: Noise, seed: u64) -> Self {
        let k = levels.len();
        let edges = (1..k).map(|j| domain.0 + (domain.1 - domain.0) * j as f64 / k as f64).collect();
        Self {
            shape: Shape::MultiscaleSteps { edges, levels },
            domain,
            samples,
            noise,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::usage(format!("domain [{a}, {b}] must satisfy a < b")));
        }
        if self.samples < 2 {
            return Err(Error::usage("a dataset needs at least 2 samples"));
        }
        if !(self.noise.std_dev >= 0.0) || !self.noise.std_dev.is_finite() || !self.noise.mean.is_finite() {
            return Err(Error::usage("noise must have finite mean and standard deviation ≥ 0"));
        }
        self.target().map(|_| ())
    }

    /// The noise-free function the samples are drawn from.
    pub fn target(&self) -> Result<Target> {
        Ok(match &self.shape {
            Shape::Heaviside { jump } => Target::Heaviside(heaviside(self.domain, *jump)?),
            Shape::MultiscaleSteps { edges, levels } => {
                if edges.iter().any(|&e| !(e > self.domain.0 && e < self.domain.1)) {
                    return Err(Error::usage("step edges must lie inside the domain"));
                }
                Target::Steps(Steps::new(edges.clone(), levels.clone())?)
            }
            Shape::Sine => Target::Sine,
        })
    }
}

/// Base functions of the generators, usable as continuous fit targets.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Heaviside(Heaviside),
    Steps(Steps),
    Sine,
}

impl TargetFunction for Target {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Target::Heaviside(h) => h.eval(x),
            Target::Steps(s) => s.eval(x),
            Target::Sine => x.sin(),
        }
    }

    fn breakpoints(&self) -> &[f64] {
        match self {
            Target::Heaviside(h) => h.breakpoints(),
            Target::Steps(s) => s.breakpoints(),
            Target::Sine => &[],
        }
    }
}

/// Unit step on `domain` jumping at `jump`, which must be interior.
pub fn heaviside(domain: (f64, f64), jump: f64) -> Result<Heaviside> {
    Ok(Heaviside::new(domain, jump)?)
}

/// Evenly spaced samples of the spec's function plus its noise.
pub fn generate(spec: &GeneratorSpec) -> Result<DataSet> {
    spec.validate()?;
    let f = spec.target()?;
    let (a, b) = spec.domain;
    let last = spec.samples - 1;
    let x: Vec<f64> = (0..spec.samples)
        .map(|k| if k == last { b } else { a + (b - a) * k as f64 / last as f64 })
        .collect();
    let mut noise = Gaussian::new(spec.seed);
    let Noise { mean, std_dev } = spec.noise;
    let y = x
        .iter()
        .map(|&t| {
            let base = f.eval(t);
            if std_dev == 0.0 && mean == 0.0 {
                base
            } else {
                base + mean + std_dev * noise.next()
            }
        })
        .collect();
    Ok(DataSet::new(x, y)?)
}

/// Standard normal deviates, see the module docs.
struct Gaussian {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl Gaussian {
    fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        Self {
            rng: ChaCha20Rng::from_seed(key),
            spare: None,
        }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_heaviside_is_exact() {
        let d = generate(&GeneratorSpec::heaviside(100, 0.0, 1)).unwrap();
        assert_eq!(d.len(), 100);
        assert_eq!(d.x()[0], 0.0);
        assert_eq!(d.x()[99], 1.0);
        assert!(d.points().all(|(x, y)| y == if x < 0.5 { 0.0 } else { 1.0 }));
    }

    #[test]
    fn noise_is_seeded() {
        let spec = GeneratorSpec::heaviside(100, 0.03, 7);
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        let other = generate(&GeneratorSpec { seed: 8, ..spec.clone() }).unwrap();
        assert_ne!(a, other);
        let h = heaviside((0.0, 1.0), 0.5).unwrap();
        let mean = a.points().map(|(x, y)| y - h.eval(x)).sum::<f64>() / 100.0;
        assert!(mean.abs() <= 3.0 * 0.03 / 10.0, "{mean}");
    }

    #[test]
    fn normals_have_unit_spread() {
        let mut g = Gaussian::new(42);
        let z: Vec<f64> = (0..20_000).map(|_| g.next()).collect();
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / z.len() as f64;
        assert!(mean.abs() < 0.03, "{mean}");
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }

    #[test]
    fn sine_stays_in_band() {
        let sigma = 0.05;
        for seed in 0..20 {
            let d = generate(&GeneratorSpec::sine(300, sigma, seed)).unwrap();
            assert!(d.y().iter().all(|&y| y.abs() <= 1.0 + 5.0 * sigma), "seed {seed}");
        }
    }

    #[test]
    fn multiscale_levels() {
        let spec = GeneratorSpec::multiscale((0.0, 3.0), vec![0.0, 100.0, 0.0], 31, Noise::NONE, 0);
        let d = generate(&spec).unwrap();
        assert_eq!(d.y()[5], 0.0);
        assert_eq!(d.y()[15], 100.0);
        assert_eq!(d.y()[25], 0.0);
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&GeneratorSpec::heaviside(1, 0.0, 0)).is_err());
        assert!(generate(&GeneratorSpec::heaviside(10, -1.0, 0)).is_err());
        let mut s = GeneratorSpec::heaviside(10, 0.0, 0);
        s.shape = Shape::Heaviside { jump: 1.0 };
        assert!(generate(&s).is_err());
        s.domain = (1.0, 0.0);
        assert!(generate(&s).is_err());
    }

    #[test]
    fn heaviside_target() {
        let h = heaviside((0.0, 1.0), 0.5).unwrap();
        assert_eq!(h.eval(0.49), 0.0);
        assert_eq!(h.eval(0.5), 1.0);
        assert!(heaviside((0.0, 1.0), 0.0).is_err());
    }
}
