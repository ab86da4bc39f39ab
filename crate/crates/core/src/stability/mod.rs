//! Seeded perturbations of exact solutions, audits of the explicit
//! δ-inequalities used in the stability argument, and growth experiments on
//! balls of increasing radius.

mod bounds;
mod dichotomy;
mod scan;

pub use bounds::{
    audit_centrality_bound, audit_chain_bound, audit_mg_shift_bound, audit_parity_bound, audit_sine_addition_bound,
    stability_audits, BoundRow, DeltaChoice, StabilityReport,
};
pub use dichotomy::{
    dichotomy_experiment, fit_family, BallCandidate, BallEquation, BallSigma, DichotomyReport, DichotomyRow, FamilyFit, Growth,
};
pub use scan::{growth_case_scan, CaseScan, ScanBranch, ScanCheck};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::families::SolutionPair;
use crate::feq::{residual_wilson, FeqError, ResidualReport};
use crate::function::{FunctionError, GroupFunction, C};
use crate::groups::{BallDomain, Domain, FiniteGroup, GroupError, IDENTITY};
use crate::morphisms::{enumerate_characters, Character, Involution, MorphismError};
use crate::tolerances::SLOPE_TOL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilityError {
    #[error(transparent)]
    Feq(#[from] FeqError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("epsilon must be finite and nonnegative, got {0}")]
    BadEpsilon(f64),
    #[error("measured residual {measured:e} exceeds the triangle bound {bound:e}")]
    TriangleBound { measured: f64, bound: f64 },
    #[error("need at least two radii in strictly increasing order")]
    BadRadii,
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseShape {
    /// Independent values uniform in the disk of radius ε.
    UniformDisk,
    /// `ε` added at the identity only.
    SinglePoint,
    /// `ε·e^{iθ}·ψ` for a random unitary character `ψ`.
    CharacterPhase,
}

impl NoiseShape {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "uniform-disk" => Some(Self::UniformDisk),
            "single-point" => Some(Self::SinglePoint),
            "character-phase" => Some(Self::CharacterPhase),
            _ => None,
        }
    }
}

impl fmt::Display for NoiseShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UniformDisk => "uniform-disk",
            Self::SinglePoint => "single-point",
            Self::CharacterPhase => "character-phase",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseTarget {
    F,
    G,
    Both,
}

impl NoiseTarget {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "f" => Some(Self::F),
            "g" => Some(Self::G),
            "both" => Some(Self::Both),
            _ => None,
        }
    }
}

impl fmt::Display for NoiseTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::F => "f",
            Self::G => "g",
            Self::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub shape: NoiseShape,
    pub target: NoiseTarget,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self { epsilon: 1e-2, seed: 0, shape: NoiseShape::UniformDisk, target: NoiseTarget::Both }
    }
}

/// Domains that can supply random unitary characters for phase noise.
pub trait PhaseSource: Domain {
    fn random_unitary_character(&self, rng: &mut ChaCha8Rng) -> GroupFunction;
}

impl PhaseSource for FiniteGroup {
    fn random_unitary_character(&self, rng: &mut ChaCha8Rng) -> GroupFunction {
        let chars = enumerate_characters(self);
        chars[rng.random_range(0..chars.len())].values().clone()
    }
}

impl PhaseSource for BallDomain {
    fn random_unitary_character(&self, rng: &mut ChaCha8Rng) -> GroupFunction {
        let z: Vec<C> = (0..self.abelian_rank())
            .map(|_| C::from_polar(1.0, std::f64::consts::TAU * rng.random::<f64>()))
            .collect();
        match Character::exponential(self, &z) {
            Ok(psi) => psi.values().clone(),
            Err(_) => GroupFunction::constant(self.size(), C::new(1.0, 0.0)),
        }
    }
}

fn disk_sample(rng: &mut ChaCha8Rng, radius: f64) -> C {
    let r = radius * rng.random::<f64>().sqrt();
    C::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
}

/// Noise of sup norm at most `epsilon`.
fn noise<D: PhaseSource + ?Sized>(domain: &D, shape: NoiseShape, epsilon: f64, rng: &mut ChaCha8Rng) -> Vec<C> {
    let n = domain.size();
    match shape {
        NoiseShape::UniformDisk => (0..n).map(|_| disk_sample(rng, epsilon)).collect(),
        NoiseShape::SinglePoint => {
            let mut v = vec![C::new(0.0, 0.0); n];
            v[IDENTITY] = C::new(epsilon, 0.0);
            v
        }
        NoiseShape::CharacterPhase => {
            let phase = C::from_polar(epsilon, std::f64::consts::TAU * rng.random::<f64>());
            let psi = domain.random_unitary_character(rng);
            psi.values().iter().map(|p| phase * p).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub pair: SolutionPair,
    /// Sup of the Wilson residual of the perturbed pair.
    pub measured_delta: f64,
    /// `δ₀ + ε_f(1 + sup|χ| + 2 sup|g|) + 2ε_g sup|f| + 2ε_f ε_g`, which
    /// `measured_delta` never exceeds.
    pub triangle_bound: f64,
    pub residual: ResidualReport,
}

/// Adds seeded noise of sup norm `≤ ε` to `f`, `g` or both and measures the
/// residual. The noise for `f` is always drawn before the noise for `g`, so
/// the target does not change either stream.
pub fn perturb<D: PhaseSource + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &Character,
    pair: &SolutionPair,
    config: &PerturbationConfig,
) -> Result<Perturbation, StabilityError> {
    let eps = config.epsilon;
    if !eps.is_finite() || eps < 0.0 {
        return Err(StabilityError::BadEpsilon(eps));
    }
    let base = residual_wilson(domain, sigma, chi.values(), &pair.f, &pair.g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let df = noise(domain, config.shape, eps, &mut rng);
    let dg = noise(domain, config.shape, eps, &mut rng);
    let (eps_f, eps_g) = match config.target {
        NoiseTarget::F => (eps, 0.0),
        NoiseTarget::G => (0.0, eps),
        NoiseTarget::Both => (eps, eps),
    };
    let n = domain.size();
    let f = if eps_f > 0.0 { GroupFunction::from_fn(n, |x| pair.f[x] + df[x]) } else { pair.f.clone() };
    let g = if eps_g > 0.0 { GroupFunction::from_fn(n, |x| pair.g[x] + dg[x]) } else { pair.g.clone() };

    let residual = residual_wilson(domain, sigma, chi.values(), &f, &g)?;
    let chi_sup = chi.values().sup_norm();
    let triangle_bound = base.sup
        + eps_f * (1.0 + chi_sup + 2.0 * pair.g.sup_norm())
        + 2.0 * eps_g * pair.f.sup_norm()
        + 2.0 * eps_f * eps_g;
    // rounding in the sweep itself
    let slack = 1e-12 * residual.scale.max(1.0);
    if residual.sup > triangle_bound + slack {
        return Err(StabilityError::TriangleBound { measured: residual.sup, bound: triangle_bound });
    }
    Ok(Perturbation {
        pair: SolutionPair::external(f, g),
        measured_delta: residual.sup,
        triangle_bound,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    /// `(ε, measured δ)` in the order given.
    pub points: Vec<(f64, f64)>,
    /// `(δ_k/δ_{k+1}) / (ε_k/ε_{k+1})` for consecutive points.
    pub ratios: Vec<f64>,
}

impl SlopeReport {
    /// Every ratio within [`SLOPE_TOL`] of 1.
    pub fn linear(&self) -> bool {
        !self.ratios.is_empty() && self.ratios.iter().all(|r| (r - 1.0).abs() <= SLOPE_TOL)
    }
}

/// Measured δ for each ε with everything else in `config` fixed.
pub fn delta_slope<D: PhaseSource + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &Character,
    pair: &SolutionPair,
    config: &PerturbationConfig,
    epsilons: &[f64],
) -> Result<SlopeReport, StabilityError> {
    let mut points = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        let p = perturb(domain, sigma, chi, pair, &PerturbationConfig { epsilon, ..*config })?;
        points.push((epsilon, p.measured_delta));
    }
    let ratios = points
        .windows(2)
        .map(|w| {
            let (e0, d0) = w[0];
            let (e1, d1) = w[1];
            if d1 == 0.0 || e1 == 0.0 {
                f64::NAN
            } else {
                (d0 / d1) / (e0 / e1)
            }
        })
        .collect();
    Ok(SlopeReport { points, ratios })
}
