//! The functional equations as residual evaluators, plus the derived
//! quantities used throughout: `m_g`, section functions `f_a`, even/odd
//! parts and the translation/conjugation operators.

use std::fmt;

use thiserror::Error;

use crate::function::{GroupFunction, C};
use crate::groups::{Domain, GroupElement};
use crate::morphisms::{compatibility_witness, Character, Involution};
use crate::par::map_rows;
use crate::report::Record;
use crate::tolerances::{RESIDUAL_TOL_BALL, RESIDUAL_TOL_FINITE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeqError {
    #[error("{what} has {found} values but the domain has {expected} elements")]
    LengthMismatch { what: &'static str, expected: usize, found: usize },
    #[error("character fails chi(x sigma(x)) = 1 at x = {0}")]
    Incompatible(GroupElement),
    #[error("{what} needs a product outside the domain at element {at}")]
    OutsideDomain { what: &'static str, at: GroupElement },
    #[error("the {0} equation needs a second function g")]
    MissingG(EquationTag),
}

/// Outcome of a residual sweep over all pairs `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// Largest pointwise residual modulus over evaluated pairs.
    pub sup: f64,
    /// First pair (row-major) attaining `sup`; `None` if nothing was evaluated.
    pub argmax: Option<(GroupElement, GroupElement)>,
    pub pairs: usize,
    /// Pairs skipped because a needed product left the ball.
    pub skipped: usize,
    /// Largest modulus of any single term, for relative comparisons.
    pub scale: f64,
}

impl ResidualReport {
    /// Absolute test `sup <= tol`.
    pub fn within(&self, tol: f64) -> bool {
        self.sup <= tol
    }

    /// Relative test `sup <= tol·max(1, scale)`.
    pub fn within_relative(&self, tol: f64) -> bool {
        self.sup <= tol * self.scale.max(1.0)
    }

    /// Zero test: absolute [`RESIDUAL_TOL_FINITE`] on closed domains,
    /// relative [`RESIDUAL_TOL_BALL`] on balls.
    pub fn is_zero_on<D: Domain + ?Sized>(&self, domain: &D) -> bool {
        if domain.is_closed() {
            self.within(RESIDUAL_TOL_FINITE)
        } else {
            self.within_relative(RESIDUAL_TOL_BALL)
        }
    }

    pub fn to_record(&self, check: &str) -> Record {
        let (ax, ay) = self.argmax.map_or((-1, -1), |(x, y)| (x as i64, y as i64));
        Record::new("residual")
            .str("check", check)
            .num("sup", self.sup)
            .int("argmax_x", ax)
            .int("argmax_y", ay)
            .int("pairs", self.pairs as i64)
            .int("skipped", self.skipped as i64)
    }
}

/// Sweeps all pairs; `term(x, y)` returns the residual and the largest term
/// modulus, or `None` when the pair cannot be evaluated.
pub(crate) fn sweep_pairs(
    n: usize,
    term: impl Fn(GroupElement, GroupElement) -> Option<(C, f64)> + Sync + Send,
) -> ResidualReport {
    let rows = map_rows(n, |x| {
        let mut best = (0.0f64, None);
        let (mut pairs, mut skipped, mut scale) = (0usize, 0usize, 0.0f64);
        for y in 0..n {
            match term(x, y) {
                Some((r, s)) => {
                    pairs += 1;
                    scale = scale.max(s);
                    let v = r.norm();
                    if best.1.is_none() || v > best.0 {
                        best = (v, Some((x, y)));
                    }
                }
                None => skipped += 1,
            }
        }
        (best, pairs, skipped, scale)
    });
    let mut report = ResidualReport { sup: 0.0, argmax: None, pairs: 0, skipped: 0, scale: 0.0 };
    for ((v, arg), pairs, skipped, scale) in rows {
        report.pairs += pairs;
        report.skipped += skipped;
        report.scale = report.scale.max(scale);
        if arg.is_some() && (report.argmax.is_none() || v > report.sup) {
            report.sup = v;
            report.argmax = arg;
        }
    }
    report
}

fn check_len<D: Domain + ?Sized>(domain: &D, what: &'static str, len: usize) -> Result<(), FeqError> {
    if len == domain.size() {
        Ok(())
    } else {
        Err(FeqError::LengthMismatch { what, expected: domain.size(), found: len })
    }
}

fn max3(a: C, b: C, c: C) -> f64 {
    a.norm().max(b.norm()).max(c.norm())
}

/// `f(xy) + χ(y)f(σ(y)x) - 2f(x)g(y)` at one pair, if both products are in the domain.
#[inline]
pub fn wilson_residual_at<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &GroupFunction,
    f: &GroupFunction,
    g: &GroupFunction,
    x: GroupElement,
    y: GroupElement,
) -> Option<C> {
    let xy = domain.mul(x, y)?;
    let syx = domain.mul(sigma.apply(y), x)?;
    Some(f[xy] + chi[y] * f[syx] - 2.0 * f[x] * g[y])
}

/// Residual of `f(xy) + χ(y)f(σ(y)x) = 2f(x)g(y)`.
///
/// On balls a pair is evaluated only when `xy` and `σ(y)x` are both inside.
pub fn residual_wilson<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &GroupFunction,
    f: &GroupFunction,
    g: &GroupFunction,
) -> Result<ResidualReport, FeqError> {
    check_len(domain, "sigma", sigma.map().len())?;
    check_len(domain, "chi", chi.len())?;
    check_len(domain, "f", f.len())?;
    check_len(domain, "g", g.len())?;
    Ok(sweep_pairs(domain.size(), |x, y| {
        let xy = domain.mul(x, y)?;
        let syx = domain.mul(sigma.apply(y), x)?;
        let (a, b, c) = (f[xy], chi[y] * f[syx], 2.0 * f[x] * g[y]);
        Some((a + b - c, max3(a, b, c)))
    }))
}

/// Residual of `f(xy) + χ(y)f(σ(y)x) = 2f(x)f(y)`.
pub fn residual_dalembert<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &GroupFunction,
    f: &GroupFunction,
) -> Result<ResidualReport, FeqError> {
    residual_wilson(domain, sigma, chi, f, f)
}

/// Residual of `f(xy) + f(yx) = 2f(x)f(y)`.
pub fn residual_symmetrized_cauchy<D: Domain + ?Sized>(
    domain: &D,
    f: &GroupFunction,
) -> Result<ResidualReport, FeqError> {
    check_len(domain, "f", f.len())?;
    Ok(sweep_pairs(domain.size(), |x, y| {
        let xy = domain.mul(x, y)?;
        let yx = domain.mul(y, x)?;
        let (a, b, c) = (f[xy], f[yx], 2.0 * f[x] * f[y]);
        Some((a + b - c, max3(a, b, c)))
    }))
}

/// Residual of `f(xy) + χ(y)f(xσ(y)) = 2f(x)g(y)`.
pub fn residual_classic_wilson<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &GroupFunction,
    f: &GroupFunction,
    g: &GroupFunction,
) -> Result<ResidualReport, FeqError> {
    check_len(domain, "sigma", sigma.map().len())?;
    check_len(domain, "chi", chi.len())?;
    check_len(domain, "f", f.len())?;
    check_len(domain, "g", g.len())?;
    Ok(sweep_pairs(domain.size(), |x, y| {
        let xy = domain.mul(x, y)?;
        let xsy = domain.mul(x, sigma.apply(y))?;
        let (a, b, c) = (f[xy], chi[y] * f[xsy], 2.0 * f[x] * g[y]);
        Some((a + b - c, max3(a, b, c)))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquationTag {
    /// `f(xy) + χ(y)f(σ(y)x) = 2f(x)g(y)`
    WilsonVariant,
    /// `f(xy) + χ(y)f(σ(y)x) = 2f(x)f(y)`
    DAlembertVariant,
    /// `f(xy) + f(yx) = 2f(x)f(y)`
    SymmetrizedCauchy,
    /// `f(xy) + χ(y)f(xσ(y)) = 2f(x)f(y)`
    ClassicDAlembert,
    /// `f(xy) + χ(y)f(xσ(y)) = 2f(x)g(y)`
    ClassicWilson,
}

impl EquationTag {
    pub const ALL: [EquationTag; 5] = [
        EquationTag::WilsonVariant,
        EquationTag::DAlembertVariant,
        EquationTag::SymmetrizedCauchy,
        EquationTag::ClassicDAlembert,
        EquationTag::ClassicWilson,
    ];

    pub fn needs_g(self) -> bool {
        matches!(self, EquationTag::WilsonVariant | EquationTag::ClassicWilson)
    }

    /// Whether the preset requires `χ(xσ(x)) = 1`.
    pub fn needs_compatible_chi(self) -> bool {
        matches!(self, EquationTag::WilsonVariant | EquationTag::DAlembertVariant)
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "wilson" | "wilsonvariant" => Some(EquationTag::WilsonVariant),
            "dalembert" | "dalembertvariant" => Some(EquationTag::DAlembertVariant),
            "cauchy" | "symmetrizedcauchy" => Some(EquationTag::SymmetrizedCauchy),
            "classicdalembert" => Some(EquationTag::ClassicDAlembert),
            "classicwilson" => Some(EquationTag::ClassicWilson),
            _ => None,
        }
    }
}

impl fmt::Display for EquationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EquationTag::WilsonVariant => "wilson",
            EquationTag::DAlembertVariant => "dalembert",
            EquationTag::SymmetrizedCauchy => "symmetrized-cauchy",
            EquationTag::ClassicDAlembert => "classic-dalembert",
            EquationTag::ClassicWilson => "classic-wilson",
        };
        f.write_str(s)
    }
}

/// An equation together with the involution and character it uses.
#[derive(Debug, Clone)]
pub struct EquationPreset {
    tag: EquationTag,
    sigma: Involution,
    chi: Character,
}

impl EquationPreset {
    /// Rejects an incompatible `χ` for the presets that require compatibility.
    pub fn new<D: Domain + ?Sized>(
        domain: &D,
        tag: EquationTag,
        sigma: Involution,
        chi: Character,
    ) -> Result<Self, FeqError> {
        check_len(domain, "sigma", sigma.map().len())?;
        check_len(domain, "chi", chi.values().len())?;
        if tag.needs_compatible_chi() {
            if let Some(x) = compatibility_witness(domain, &sigma, &chi) {
                return Err(FeqError::Incompatible(x));
            }
        }
        Ok(Self { tag, sigma, chi })
    }

    pub fn tag(&self) -> EquationTag {
        self.tag
    }

    pub fn sigma(&self) -> &Involution {
        &self.sigma
    }

    pub fn chi(&self) -> &Character {
        &self.chi
    }

    /// `g` is required by the Wilson presets and ignored otherwise.
    pub fn residual<D: Domain + ?Sized>(
        &self,
        domain: &D,
        f: &GroupFunction,
        g: Option<&GroupFunction>,
    ) -> Result<ResidualReport, FeqError> {
        let chi = self.chi.values();
        match self.tag {
            EquationTag::WilsonVariant => {
                let g = g.ok_or(FeqError::MissingG(self.tag))?;
                residual_wilson(domain, &self.sigma, chi, f, g)
            }
            EquationTag::DAlembertVariant => residual_dalembert(domain, &self.sigma, chi, f),
            EquationTag::SymmetrizedCauchy => residual_symmetrized_cauchy(domain, f),
            EquationTag::ClassicDAlembert => residual_classic_wilson(domain, &self.sigma, chi, f, f),
            EquationTag::ClassicWilson => {
                let g = g.ok_or(FeqError::MissingG(self.tag))?;
                residual_classic_wilson(domain, &self.sigma, chi, f, g)
            }
        }
    }
}

fn complete(what: &'static str, partial: Vec<Option<C>>) -> Result<GroupFunction, FeqError> {
    partial
        .iter()
        .position(Option::is_none)
        .map_or_else(
            || Ok(GroupFunction::from_fn(partial.len(), |i| partial[i].unwrap())),
            |at| Err(FeqError::OutsideDomain { what, at }),
        )
}

/// `m_g(x) = 2g(x)² - g(x²)` where `x²` lies in the domain.
pub fn companion_mg_partial<D: Domain + ?Sized>(domain: &D, g: &GroupFunction) -> Vec<Option<C>> {
    (0..domain.size())
        .map(|x| domain.square(x).map(|xx| 2.0 * g[x] * g[x] - g[xx]))
        .collect()
}

/// `m_g(x) = 2g(x)² - g(x²)`; fails if some square leaves the domain.
pub fn companion_mg<D: Domain + ?Sized>(domain: &D, g: &GroupFunction) -> Result<GroupFunction, FeqError> {
    check_len(domain, "g", g.len())?;
    complete("m_g", companion_mg_partial(domain, g))
}

/// `f_a(y) = f(ay) - f(a)g(y)` where `ay` lies in the domain.
pub fn section_function_partial<D: Domain + ?Sized>(
    domain: &D,
    f: &GroupFunction,
    g: &GroupFunction,
    a: GroupElement,
) -> Vec<Option<C>> {
    (0..domain.size())
        .map(|y| domain.mul(a, y).map(|ay| f[ay] - f[a] * g[y]))
        .collect()
}

/// `f_a(y) = f(ay) - f(a)g(y)`.
pub fn section_function<D: Domain + ?Sized>(
    domain: &D,
    f: &GroupFunction,
    g: &GroupFunction,
    a: GroupElement,
) -> Result<GroupFunction, FeqError> {
    check_len(domain, "f", f.len())?;
    check_len(domain, "g", g.len())?;
    complete("section function", section_function_partial(domain, f, g, a))
}

/// `f_e = (f + χ·f∘σ)/2` and `f_o = (f - χ·f∘σ)/2`.
pub fn parity_parts(
    f: &GroupFunction,
    sigma: &Involution,
    chi: &GroupFunction,
) -> (GroupFunction, GroupFunction) {
    let n = f.len();
    let reflected = GroupFunction::from_fn(n, |x| chi[x] * f[sigma.apply(x)]);
    let even = GroupFunction::from_fn(n, |x| (f[x] + reflected[x]) * 0.5);
    let odd = GroupFunction::from_fn(n, |x| (f[x] - reflected[x]) * 0.5);
    (even, odd)
}

/// `x ↦ h(σ(y)·x·y)`.
pub fn conjugate_shift<D: Domain + ?Sized>(
    domain: &D,
    h: &GroupFunction,
    sigma: &Involution,
    y: GroupElement,
) -> Result<GroupFunction, FeqError> {
    check_len(domain, "h", h.len())?;
    let sy = sigma.apply(y);
    complete(
        "conjugate shift",
        (0..domain.size()).map(|x| domain.mul_all(&[sy, x, y]).map(|p| h[p])).collect(),
    )
}

/// `x ↦ h(σ(y)·x)`.
pub fn left_shift<D: Domain + ?Sized>(
    domain: &D,
    h: &GroupFunction,
    sigma: &Involution,
    y: GroupElement,
) -> Result<GroupFunction, FeqError> {
    check_len(domain, "h", h.len())?;
    let sy = sigma.apply(y);
    complete("left shift", (0..domain.size()).map(|x| domain.mul(sy, x).map(|p| h[p])).collect())
}

/// `x ↦ h(x·y)`.
pub fn right_shift<D: Domain + ?Sized>(
    domain: &D,
    h: &GroupFunction,
    y: GroupElement,
) -> Result<GroupFunction, FeqError> {
    check_len(domain, "h", h.len())?;
    complete("right shift", (0..domain.size()).map(|x| domain.mul(x, y).map(|p| h[p])).collect())
}

/// `ǧ(x) = g(x⁻¹)`.
pub fn inverse_composed<D: Domain + ?Sized>(domain: &D, g: &GroupFunction) -> GroupFunction {
    GroupFunction::from_fn(g.len(), |x| g[domain.inv(x)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{BallDomain, FiniteGroup, GroupKind};
    use crate::morphisms::{enumerate_characters, enumerate_involutions, MorphismLaw};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    /// Z4 with σ(k) = -k and χ(k) = i^k.
    fn z4_instance() -> (FiniteGroup, Involution, GroupFunction) {
        let z4 = FiniteGroup::cyclic(4);
        let sigma = Involution::inversion(&z4);
        let chi = GroupFunction::from_fn(4, |k| c(0.0, 1.0).powi(k as i32));
        (z4, sigma, chi)
    }

    #[test]
    fn z4_wilson_instance() {
        let (z4, sigma, chi) = z4_instance();
        let g = GroupFunction::new(vec![c(1.0, 0.0), c(0.5, 0.5), c(0.0, 0.0), c(0.5, -0.5)]).unwrap();
        let f = g.scale(c(2.0, 0.0));
        let r = residual_wilson(&z4, &sigma, &chi, &f, &g).unwrap();
        assert!(r.sup < 1e-15);
        assert_eq!(r.pairs, 16);
        assert_eq!(r.skipped, 0);
        assert!(residual_dalembert(&z4, &sigma, &chi, &g).unwrap().sup < 1e-15);

        let mut bumped = f.values().to_vec();
        bumped[1] += 0.1;
        let bumped = GroupFunction::new(bumped).unwrap();
        let r = residual_wilson(&z4, &sigma, &chi, &bumped, &g).unwrap();
        assert!(r.sup > 0.0);
        assert!(r.sup <= 0.1 * (2.0 + 2.0 * g.sup_norm()) + 1e-15);
    }

    #[test]
    fn zero_and_trivial_cases() {
        let s3 = FiniteGroup::symmetric(3);
        let id = Involution::identity(&s3);
        let one = GroupFunction::constant(6, c(1.0, 0.0));
        let g = GroupFunction::from_fn(6, |x| c(x as f64, -(x as f64)));
        assert_eq!(residual_wilson(&s3, &id, &one, &GroupFunction::zeros(6), &g).unwrap().sup, 0.0);
        assert_eq!(residual_dalembert(&s3, &id, &one, &one).unwrap().sup, 0.0);

        let z2 = FiniteGroup::cyclic(2);
        let half = GroupFunction::constant(2, c(0.5, 0.0));
        let one = GroupFunction::constant(2, c(1.0, 0.0));
        let r = residual_dalembert(&z2, &Involution::identity(&z2), &one, &half).unwrap();
        assert!((r.sup - 0.5).abs() < 1e-15);
        assert_eq!(r.argmax, Some((0, 0)));
    }

    #[test]
    fn symmetrized_cauchy() {
        let s3 = FiniteGroup::symmetric(3);
        for chi in enumerate_characters(&s3) {
            assert!(residual_symmetrized_cauchy(&s3, chi.values()).unwrap().sup < 1e-15);
        }
        assert_eq!(residual_symmetrized_cauchy(&s3, &GroupFunction::zeros(6)).unwrap().sup, 0.0);
        let half_trace = GroupFunction::from_fn(6, |x| {
            let order = s3.element_order(x);
            c([0.0, 1.0, 0.0, -0.5][order], 0.0)
        });
        let r = residual_symmetrized_cauchy(&s3, &half_trace).unwrap();
        assert!(r.sup > 0.1);
        // two distinct transpositions multiply to a 3-cycle: |-1/2 - 1/2 - 0| = 1
        let t: Vec<usize> = (0..6).filter(|&x| s3.element_order(x) == 2).collect();
        let (s, u) = (t[0], t[1]);
        let at = half_trace[s3.op(s, u)] + half_trace[s3.op(u, s)] - 2.0 * half_trace[s] * half_trace[u];
        assert!((at.norm() - 1.0).abs() < 1e-15);
        assert!(r.sup >= at.norm());
    }

    #[test]
    fn companion_function() {
        let z6 = FiniteGroup::cyclic(6);
        let g = GroupFunction::from_fn(6, |k| c((std::f64::consts::PI * k as f64 / 3.0).cos(), 0.0));
        let mg = companion_mg(&z6, &g).unwrap();
        assert!(mg.values().iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-14));
        assert!(companion_mg(&z6, &GroupFunction::zeros(6)).unwrap().is_zero(0.0));
        for chi in enumerate_characters(&FiniteGroup::symmetric(3)) {
            let mg = companion_mg(&FiniteGroup::symmetric(3), chi.values()).unwrap();
            assert!(mg.distance(&chi.values().times(chi.values())) < 1e-15);
        }
        let ball = BallDomain::new(GroupKind::IntegerLattice(1), 2).unwrap();
        let g = GroupFunction::constant(ball.size(), c(1.0, 0.0));
        assert!(companion_mg(&ball, &g).is_err());
        let partial = companion_mg_partial(&ball, &g);
        assert_eq!(partial.iter().filter(|v| v.is_some()).count(), 3);
    }

    #[test]
    fn sections_and_parity() {
        let (z4, sigma, chi) = z4_instance();
        let g = GroupFunction::new(vec![c(1.0, 0.0), c(0.5, 0.5), c(0.0, 0.0), c(0.5, -0.5)]).unwrap();
        let f = g.scale(c(3.0, 1.0));
        let fe = section_function(&z4, &f, &g, 0).unwrap();
        assert!(fe.is_zero(1e-15));
        let (even, odd) = parity_parts(&f, &sigma, &chi);
        assert!((&even + &odd).distance(&f) < 1e-15);
        assert!(odd.is_zero(1e-15));
    }

    #[test]
    fn conjugation_composes() {
        for name in ["S3", "D4", "Q8", "Z4"] {
            let g = FiniteGroup::catalog(name).unwrap();
            let h = GroupFunction::from_fn(g.order(), |x| c(x as f64, (x * x) as f64));
            for law in [MorphismLaw::Automorphism, MorphismLaw::AntiAutomorphism] {
                for sigma in enumerate_involutions(&g, law).unwrap() {
                    if !sigma.is_homomorphism() && !sigma.is_antihomomorphism() {
                        continue;
                    }
                    for y in 0..g.order() {
                        for z in 0..g.order() {
                            // μ(yz) = μ(y)∘μ(z) needs σ anti-multiplicative:
                            // σ(yz)·x·yz = σ(z)σ(y)·x·y·z
                            if !sigma.is_antihomomorphism() {
                                continue;
                            }
                            let lhs = conjugate_shift(&g, &h, &sigma, g.op(y, z)).unwrap();
                            let inner = conjugate_shift(&g, &h, &sigma, z).unwrap();
                            let rhs = conjugate_shift(&g, &inner, &sigma, y).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
            // left and right translations commute
            let sigma = Involution::identity(&g);
            for y in 0..g.order() {
                for z in 0..g.order() {
                    let lr = right_shift(&g, &left_shift(&g, &h, &sigma, y).unwrap(), z).unwrap();
                    let rl = left_shift(&g, &right_shift(&g, &h, z).unwrap(), &sigma, y).unwrap();
                    assert_eq!(lr, rl);
                }
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let z4 = FiniteGroup::cyclic(4);
        let h = GroupFunction::from_fn(4, |x| c(x as f64, 0.0));
        let inv = Involution::inversion(&z4);
        for y in 0..4 {
            assert_eq!(conjugate_shift(&z4, &h, &inv, y).unwrap(), h);
        }
        let s3 = FiniteGroup::symmetric(3);
        let inv = Involution::inversion(&s3);
        let h = GroupFunction::from_fn(6, |x| c(x as f64, 0.0));
        assert_eq!(conjugate_shift(&s3, &h, &inv, 0).unwrap(), h);
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let shifted = conjugate_shift(&s3, &h, &inv, t).unwrap();
        for x in 0..6 {
            let conj = s3.op(s3.op(s3.inverse(t), x), t);
            assert_eq!(shifted[x], h[conj]);
        }
    }

    #[test]
    fn ball_skips_boundary_pairs() {
        let ball = BallDomain::new(GroupKind::IntegerLattice(1), 3).unwrap();
        let neg = Involution::negation(&ball).unwrap();
        let one = GroupFunction::constant(ball.size(), c(1.0, 0.0));
        let r = residual_wilson(&ball, &neg, &one, &one, &one).unwrap();
        assert_eq!(r.pairs + r.skipped, 49);
        assert!(r.skipped > 0);
        assert_eq!(r.sup, 0.0);
        assert!(r.is_zero_on(&ball));
    }

    #[test]
    fn presets() {
        let z4 = FiniteGroup::cyclic(4);
        let chars = enumerate_characters(&z4);
        let id = Involution::identity(&z4);
        let err = EquationPreset::new(&z4, EquationTag::WilsonVariant, id.clone(), chars[1].clone()).unwrap_err();
        assert_eq!(err, FeqError::Incompatible(1));
        let p = EquationPreset::new(&z4, EquationTag::SymmetrizedCauchy, id.clone(), chars[1].clone()).unwrap();
        assert_eq!(p.residual(&z4, chars[3].values(), None).unwrap().sup, 0.0);
        let p = EquationPreset::new(&z4, EquationTag::WilsonVariant, id, chars[0].clone()).unwrap();
        assert!(matches!(p.residual(&z4, chars[0].values(), None), Err(FeqError::MissingG(_))));
        for tag in EquationTag::ALL {
            assert_eq!(EquationTag::parse(&tag.to_string()), Some(tag));
        }
    }

    #[test]
    fn report_record() {
        let z2 = FiniteGroup::cyclic(2);
        let one = GroupFunction::constant(2, c(1.0, 0.0));
        let r = residual_dalembert(&z2, &Involution::identity(&z2), &one, &one).unwrap();
        let line = r.to_record("dalembert").render();
        assert!(line.contains("\"pairs\":4"));
        assert!(line.contains("\"skipped\":0"));
    }
}
