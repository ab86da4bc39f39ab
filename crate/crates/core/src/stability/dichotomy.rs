//! Bounded-or-exponential experiments on balls of increasing radius.
//!
//! Growth is read off `sup |f(x) - f(e)|` per radius. Shifting by a constant
//! does not change boundedness, and it keeps an affine offset such as
//! `x₁ + 5` from hiding linear growth.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::StabilityError;
use crate::feq::{EquationPreset, EquationTag};
use crate::function::{GroupFunction, C};
use crate::groups::{BallDomain, Domain, GroupKind, IDENTITY};
use crate::morphisms::{Character, Involution};
use crate::report::{fmt_f64, CsvTable, Record};
use crate::tolerances::{FLAT_FACTOR, GROWTH_FACTOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallSigma {
    Identity,
    /// Inverts every generator, see [`Involution::negation`].
    Negation,
}

impl BallSigma {
    pub fn build(self, ball: &BallDomain) -> Result<Involution, StabilityError> {
        Ok(match self {
            BallSigma::Identity => Involution::identity(ball),
            BallSigma::Negation => Involution::negation(ball)?,
        })
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "id" | "identity" => Some(BallSigma::Identity),
            "neg" | "negation" => Some(BallSigma::Negation),
            _ => None,
        }
    }

    /// Sign of the abelian coordinates of `σ(x)` relative to those of `x`.
    fn coord_sign(self) -> i32 {
        match self {
            BallSigma::Identity => 1,
            BallSigma::Negation => -1,
        }
    }
}

impl fmt::Display for BallSigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BallSigma::Identity => "id",
            BallSigma::Negation => "neg",
        })
    }
}

/// An equation preset described independently of the radius, so it can be
/// rebuilt on every ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallEquation {
    pub tag: EquationTag,
    pub sigma: BallSigma,
    /// Parameters of an exponential `χ`, one per abelian coordinate; empty
    /// means `χ = 1`.
    pub chi: Vec<C>,
}

impl BallEquation {
    pub fn new(tag: EquationTag, sigma: BallSigma) -> Self {
        Self { tag, sigma, chi: Vec::new() }
    }

    pub fn chi_on(&self, ball: &BallDomain) -> Result<Character, StabilityError> {
        Ok(if self.chi.is_empty() { Character::trivial(ball) } else { Character::exponential(ball, &self.chi)? })
    }

    pub fn preset(&self, ball: &BallDomain) -> Result<EquationPreset, StabilityError> {
        Ok(EquationPreset::new(ball, self.tag, self.sigma.build(ball)?, self.chi_on(ball)?)?)
    }

    fn chi_param(&self, i: usize) -> C {
        self.chi.get(i).copied().unwrap_or(C::new(1.0, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    Bounded,
    Growing,
    Inconclusive,
}

impl Growth {
    /// Every consecutive ratio at least [`GROWTH_FACTOR`] is growth, every
    /// one at most [`FLAT_FACTOR`] is bounded, anything else is inconclusive.
    pub fn classify(sups: &[f64]) -> Growth {
        let ratios: Vec<f64> = sups.windows(2).map(|w| ratio(w[0], w[1])).collect();
        if ratios.iter().all(|&r| r >= GROWTH_FACTOR) {
            Growth::Growing
        } else if ratios.iter().all(|&r| r <= FLAT_FACTOR) {
            Growth::Bounded
        } else {
            Growth::Inconclusive
        }
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Growth::Bounded => "bounded",
            Growth::Growing => "growing",
            Growth::Inconclusive => "inconclusive",
        })
    }
}

fn ratio(prev: f64, next: f64) -> f64 {
    if prev > 0.0 {
        next / prev
    } else if next > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// `sup |f(x) - f(e)|`.
pub(super) fn centered_sup(f: &GroupFunction) -> f64 {
    let e = f[IDENTITY];
    f.values().iter().map(|v| (v - e).norm()).fold(0.0, f64::max)
}

pub(super) fn check_radii(radii: &[usize]) -> Result<(), StabilityError> {
    if radii.len() < 2 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(StabilityError::BadRadii);
    }
    Ok(())
}

/// Test functions on balls, rebuilt consistently at every radius.
#[derive(Debug, Clone, PartialEq)]
pub enum BallCandidate {
    /// `x ↦ z_1^{x_1}···z_d^{x_d}` on the abelian coordinates.
    Exponential(Vec<C>),
    /// `center` plus seeded noise uniform in the disk of radius `amplitude`.
    /// Each element's value depends only on the seed and its normal form,
    /// so nested balls agree.
    Noise { seed: u64, amplitude: f64, center: C },
}

impl BallCandidate {
    pub fn build(&self, ball: &BallDomain) -> Result<GroupFunction, StabilityError> {
        match self {
            BallCandidate::Exponential(z) => Ok(Character::exponential(ball, z)?.values().clone()),
            BallCandidate::Noise { seed, amplitude, center } => Ok(GroupFunction::from_fn(ball.size(), |x| {
                let mut rng = ChaCha8Rng::seed_from_u64(form_seed(*seed, ball.normal_form(x)));
                let r = amplitude * rng.random::<f64>().sqrt();
                center + C::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
            })),
        }
    }
}

fn form_seed(seed: u64, form: &[i64]) -> u64 {
    form.iter().fold(seed ^ form.len() as u64, |h, &c| ChaCha8Rng::seed_from_u64(h ^ c as u64).random())
}

/// Which closed-form family a fit targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Member {
    /// `m`
    Multiplicative,
    /// `(m + χ·m∘σ)/2`
    Symmetrized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyFit {
    /// Parameters `z_i` of the fitted exponential `m`.
    pub params: Vec<C>,
    /// ℓ²-optimal multiple of the family member.
    pub scale: C,
    /// `sup|f - scale·h| / sup|f|`; 0 for `f = 0`.
    pub distance: f64,
}

/// Abelian coordinates of the positive generators: element `i` has a 1 in
/// coordinate `i` and zeros elsewhere.
fn positive_generators(ball: &BallDomain) -> Vec<Option<usize>> {
    let kind: GroupKind = ball.kind();
    let d = kind.abelian_rank();
    (0..d)
        .map(|i| {
            kind.generators().into_iter().find_map(|g| {
                let c = kind.abelian_coords(&g);
                let unit = c.iter().enumerate().all(|(j, &v)| v == i64::from(j == i));
                if unit {
                    ball.find(&g)
                } else {
                    None
                }
            })
        })
        .collect()
}

/// Best member of an exponential family, with `z_i` read off the values at
/// the generators.
pub(super) fn fit_member(
    ball: &BallDomain,
    member: Member,
    sigma: BallSigma,
    chi: &[C],
    f: &GroupFunction,
) -> FamilyFit {
    let d = ball.abelian_rank();
    let one = C::new(1.0, 0.0);
    let chi_at = |i: usize| chi.get(i).copied().unwrap_or(one);
    let fe = f[IDENTITY];
    let gens = positive_generators(ball);

    let options: Vec<Vec<C>> = (0..d)
        .map(|i| {
            let w = match (gens[i], fe.norm() > 0.0) {
                (Some(x), true) => f[x] / fe,
                _ => one,
            };
            let c = chi_at(i);
            let roots = match (member, sigma) {
                (Member::Multiplicative, _) => vec![w],
                (Member::Symmetrized, BallSigma::Identity) => {
                    if (one + c).norm() > 1e-12 {
                        vec![2.0 * w / (one + c)]
                    } else {
                        vec![w]
                    }
                }
                (Member::Symmetrized, BallSigma::Negation) => {
                    let s = (w * w - c).sqrt();
                    vec![w + s, w - s]
                }
            };
            let roots: Vec<C> = roots.into_iter().filter(|z| z.norm() > 0.0 && z.is_finite()).collect();
            if roots.is_empty() {
                vec![one]
            } else {
                roots
            }
        })
        .collect();

    let coords: Vec<Vec<i64>> = (0..ball.size()).map(|x| ball.abelian_coords(x)).collect();
    let norm_f = f.sup_norm();
    let mut best: Option<FamilyFit> = None;
    let combos: usize = options.iter().map(Vec::len).product();
    for mut k in 0..combos {
        let params: Vec<C> = options
            .iter()
            .map(|o| {
                let z = o[k % o.len()];
                k /= o.len();
                z
            })
            .collect();
        let h: Vec<C> = coords
            .iter()
            .map(|c| {
                let m = |sign: i32| c.iter().zip(&params).fold(one, |acc, (&k, &z)| acc * z.powi(sign * k as i32));
                match member {
                    Member::Multiplicative => m(1),
                    Member::Symmetrized => {
                        let chi_x = c.iter().enumerate().fold(one, |acc, (i, &k)| acc * chi_at(i).powi(k as i32));
                        (m(1) + chi_x * m(sigma.coord_sign())) / 2.0
                    }
                }
            })
            .collect();
        let hh: f64 = h.iter().map(|v| v.norm_sqr()).sum();
        let scale = if hh > 0.0 { h.iter().zip(f.values()).map(|(a, b)| a.conj() * b).sum::<C>() / hh } else { one };
        let distance = if norm_f == 0.0 {
            0.0
        } else {
            h.iter().zip(f.values()).map(|(a, b)| (b - scale * a).norm()).fold(0.0, f64::max) / norm_f
        };
        if best.as_ref().is_none_or(|b| distance < b.distance) {
            best = Some(FamilyFit { params, scale, distance });
        }
    }
    best.expect("at least one parameter combination")
}

/// Fits the closed-form family of an `f`-only preset: `m` for the
/// symmetrized Cauchy equation and `(m + χ·m∘σ)/2` for the d'Alembert ones.
pub fn fit_family(ball: &BallDomain, eq: &BallEquation, f: &GroupFunction) -> Result<FamilyFit, StabilityError> {
    f.check_domain(ball)?;
    let member = match eq.tag {
        EquationTag::SymmetrizedCauchy => Member::Multiplicative,
        EquationTag::DAlembertVariant | EquationTag::ClassicDAlembert => Member::Symmetrized,
        tag => return Err(StabilityError::Unsupported(format!("no single-function family for {tag}"))),
    };
    let chi: Vec<C> = (0..ball.abelian_rank()).map(|i| eq.chi_param(i)).collect();
    Ok(fit_member(ball, member, eq.sigma, &chi, f))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyRow {
    pub radius: usize,
    pub size: usize,
    pub sup_f: f64,
    /// Equal to `sup_f`: the `f`-only presets have `g = f`.
    pub sup_g: f64,
    pub delta: f64,
    pub fit: FamilyFit,
    /// Growth against the previous radius; `None` on the first row.
    pub label: Option<Growth>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyReport {
    pub kind: GroupKind,
    pub equation: BallEquation,
    pub rows: Vec<DichotomyRow>,
    pub growth: Growth,
}

impl DichotomyReport {
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["radius", "sup_f", "sup_g", "delta", "dist_to_family", "branch_label"]);
        for r in &self.rows {
            t.push(vec![
                r.radius.to_string(),
                fmt_f64(r.sup_f),
                fmt_f64(r.sup_g),
                fmt_f64(r.delta),
                fmt_f64(r.fit.distance),
                r.label.map_or_else(|| "-".to_string(), |g| g.to_string()),
            ]);
        }
        t
    }

    pub fn to_records(&self) -> Vec<Record> {
        let rows = self.rows.iter().map(|r| {
            Record::new("dichotomy")
                .int("radius", r.radius as i64)
                .int("size", r.size as i64)
                .num("sup_f", r.sup_f)
                .num("sup_g", r.sup_g)
                .num("delta", r.delta)
                .num("dist_to_family", r.fit.distance)
                .complexes("fit_params", &r.fit.params)
                .str("branch_label", &r.label.map_or_else(|| "-".to_string(), |g| g.to_string()))
        });
        let tail = Record::new("growth").str("group", &self.kind.to_string()).str("branch", &self.growth.to_string());
        rows.chain(std::iter::once(tail)).collect()
    }
}

/// Measures `δ`, the sup norm and the distance to the closed-form family of
/// `candidate` on each ball, and classifies its growth.
pub fn dichotomy_experiment(
    kind: GroupKind,
    radii: &[usize],
    eq: &BallEquation,
    candidate: impl Fn(&BallDomain) -> Result<GroupFunction, StabilityError>,
) -> Result<DichotomyReport, StabilityError> {
    check_radii(radii)?;
    if eq.tag.needs_g() {
        return Err(StabilityError::Unsupported(format!("{} needs a second function", eq.tag)));
    }
    let mut rows: Vec<DichotomyRow> = Vec::new();
    let mut centered = Vec::new();
    for &radius in radii {
        let ball = BallDomain::new(kind, radius)?;
        let f = candidate(&ball)?;
        f.check_domain(&ball)?;
        let delta = eq.preset(&ball)?.residual(&ball, &f, None)?.sup;
        let fit = fit_family(&ball, eq, &f)?;
        let c = centered_sup(&f);
        let label = centered.last().map(|&prev| Growth::classify(&[prev, c]));
        centered.push(c);
        let sup = f.sup_norm();
        rows.push(DichotomyRow { radius, size: ball.size(), sup_f: sup, sup_g: sup, delta, fit, label });
    }
    Ok(DichotomyReport { kind, equation: eq.clone(), rows, growth: Growth::classify(&centered) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1() -> GroupKind {
        GroupKind::IntegerLattice(1)
    }

    #[test]
    fn powers_of_two_are_exact_and_growing() {
        let eq = BallEquation::new(EquationTag::SymmetrizedCauchy, BallSigma::Identity);
        let cand = BallCandidate::Exponential(vec![C::new(2.0, 0.0)]);
        let report = dichotomy_experiment(z1(), &[4, 8, 12, 16], &eq, |b| cand.build(b)).unwrap();
        assert_eq!(report.growth, Growth::Growing);
        for r in &report.rows {
            assert_eq!(r.delta, 0.0);
            assert_eq!(r.fit.distance, 0.0);
        }
        assert_eq!(report.rows[3].sup_f, 65536.0);
        assert_eq!(report.to_table().rows().len(), 4);
    }

    #[test]
    fn cosh_fits_the_dalembert_family() {
        let eq = BallEquation::new(EquationTag::DAlembertVariant, BallSigma::Negation);
        let report = dichotomy_experiment(z1(), &[4, 8, 12, 16], &eq, |b| {
            let m = Character::exponential(b, &[C::new(3.0, 0.0)])?;
            let inv = Involution::negation(b)?;
            Ok(GroupFunction::from_fn(b.size(), |x| (m.at(x) + m.at(inv.apply(x))) / 2.0))
        })
        .unwrap();
        assert_eq!(report.growth, Growth::Growing);
        for r in &report.rows {
            assert!(r.fit.distance < 1e-12, "{r:?}");
            assert!(r.delta <= 1e-9 * r.sup_f * r.sup_f);
        }
    }

    #[test]
    fn bounded_noise_is_flat_and_reproducible() {
        let eq = BallEquation::new(EquationTag::DAlembertVariant, BallSigma::Negation);
        let cand = BallCandidate::Noise { seed: 7, amplitude: 0.5, center: C::new(1.0, 0.0) };
        let a = dichotomy_experiment(z1(), &[4, 8, 12, 16], &eq, |b| cand.build(b)).unwrap();
        let b = dichotomy_experiment(z1(), &[4, 8, 12, 16], &eq, |b| cand.build(b)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.growth, Growth::Bounded);
        assert!(a.rows.iter().all(|r| r.delta > 0.0));
    }

    #[test]
    fn nested_balls_share_noise() {
        let cand = BallCandidate::Noise { seed: 3, amplitude: 1.0, center: C::new(0.0, 0.0) };
        let small = BallDomain::new(GroupKind::IntegerLattice(2), 2).unwrap();
        let big = BallDomain::new(GroupKind::IntegerLattice(2), 5).unwrap();
        let (fs, fb) = (cand.build(&small).unwrap(), cand.build(&big).unwrap());
        for x in 0..small.size() {
            let y = big.find(small.normal_form(x)).unwrap();
            assert_eq!(fs[x], fb[y]);
        }
    }

    #[test]
    fn classification_and_errors() {
        assert_eq!(Growth::classify(&[1.0, 2.0, 4.0]), Growth::Growing);
        assert_eq!(Growth::classify(&[0.0, 0.0]), Growth::Bounded);
        assert_eq!(Growth::classify(&[1.0, 1.3]), Growth::Inconclusive);
        let eq = BallEquation::new(EquationTag::WilsonVariant, BallSigma::Identity);
        let cand = BallCandidate::Exponential(vec![C::new(2.0, 0.0)]);
        assert!(matches!(
            dichotomy_experiment(z1(), &[4, 8], &eq, |b| cand.build(b)),
            Err(StabilityError::Unsupported(_))
        ));
        assert_eq!(dichotomy_experiment(z1(), &[4], &eq, |b| cand.build(b)), Err(StabilityError::BadRadii));
        assert_eq!(BallSigma::parse(&BallSigma::Negation.to_string()), Some(BallSigma::Negation));
    }
}
