//! Branch detection for Wilson-variant pairs `(f, g)` on balls of increasing
//! radius.
//!
//! The growth of `f` and `g` picks the candidate branch, then each branch's
//! structural claims are checked on the largest ball:
//!
//! - (i): `f = 0`.
//! - (ii): `f` and `g` bounded.
//! - (iii): `f` unbounded and `g` bounded. `g` is multiplicative with
//!   `g = χ·g∘σ`, and `f - a·g` stays bounded for an additive `a`.
//! - (iv): both unbounded. The first of these that fits wins:
//!   - iv-1: `g` multiplicative and `f = f(e)·g`.
//!   - iv-2: `g` multiplicative and `f = (a + b)·g` with `a∘σ = -a`.
//!   - iv-3: `g = (m + χ·m∘σ)/2` with `f` in the span of `m`, `m∘σ` and
//!     `χ·m∘σ`.

use std::fmt;

use faer::Mat;

use super::dichotomy::{centered_sup, check_radii, fit_member, Member};
use super::{BallSigma, Growth, StabilityError};
use crate::feq::residual_wilson;
use crate::function::{GroupFunction, C};
use crate::groups::{BallDomain, Domain, GroupKind, IDENTITY};
use crate::linalg::least_squares_complex;
use crate::morphisms::Character;
use crate::report::{fmt_f64, CsvTable, Record};
use crate::tolerances::FIT_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanBranch {
    ZeroF,
    Bounded,
    AdditiveTimesG,
    MultipleOfG,
    AdditiveTimesCharacter,
    Exponential,
    Inconclusive,
}

impl fmt::Display for ScanBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanBranch::ZeroF => "i",
            ScanBranch::Bounded => "ii",
            ScanBranch::AdditiveTimesG => "iii",
            ScanBranch::MultipleOfG => "iv-1",
            ScanBranch::AdditiveTimesCharacter => "iv-2",
            ScanBranch::Exponential => "iv-3",
            ScanBranch::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanCheck {
    pub name: &'static str,
    /// Relative sup residual, or for growth checks the last consecutive
    /// sup ratio.
    pub value: f64,
    pub passed: bool,
}

impl ScanCheck {
    fn fit(name: &'static str, value: f64) -> Self {
        Self { name, value, passed: value <= FIT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseScan {
    pub kind: GroupKind,
    pub radii: Vec<usize>,
    pub sup_f: Vec<f64>,
    pub sup_g: Vec<f64>,
    /// Wilson residual sup per radius.
    pub deltas: Vec<f64>,
    pub f_growth: Growth,
    pub g_growth: Growth,
    pub branch: ScanBranch,
    /// Every check that was run, in order, including those of branches that
    /// were tried and rejected.
    pub checks: Vec<ScanCheck>,
    /// Coefficients of the recovered additive map.
    pub additive: Option<Vec<C>>,
    /// Constant `b` of `f ≈ (a + b)·g`.
    pub offset: Option<C>,
    /// Parameters of the recovered exponential `m`.
    pub exponential: Option<Vec<C>>,
}

impl CaseScan {
    pub fn to_records(&self) -> Vec<Record> {
        let mut out: Vec<Record> = self
            .radii
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                Record::new("scan_radius")
                    .int("radius", r as i64)
                    .num("sup_f", self.sup_f[i])
                    .num("sup_g", self.sup_g[i])
                    .num("delta", self.deltas[i])
            })
            .collect();
        out.extend(self.checks.iter().map(|c| {
            Record::new("scan_check").str("name", c.name).num("value", c.value).boolean("pass", c.passed)
        }));
        let mut tail = Record::new("scan")
            .str("group", &self.kind.to_string())
            .str("f_growth", &self.f_growth.to_string())
            .str("g_growth", &self.g_growth.to_string())
            .str("branch", &self.branch.to_string());
        if let Some(a) = &self.additive {
            tail = tail.complexes("additive", a);
        }
        if let Some(b) = self.offset {
            tail = tail.complexes("offset", &[b]);
        }
        if let Some(m) = &self.exponential {
            tail = tail.complexes("exponential", m);
        }
        out.push(tail);
        out
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["radius", "sup_f", "sup_g", "delta", "branch_label"]);
        for (i, &r) in self.radii.iter().enumerate() {
            t.push(vec![
                r.to_string(),
                fmt_f64(self.sup_f[i]),
                fmt_f64(self.sup_g[i]),
                fmt_f64(self.deltas[i]),
                self.branch.to_string(),
            ]);
        }
        t
    }
}

/// `sup_x |u(x)| / max(1, sup_x scale(x))` over the ball.
fn rel_single(ball: &BallDomain, term: impl Fn(usize) -> (C, f64)) -> f64 {
    let (mut sup, mut scale) = (0.0f64, 1.0f64);
    for x in 0..ball.size() {
        let (v, s) = term(x);
        sup = sup.max(v.norm());
        scale = scale.max(s);
    }
    sup / scale
}

/// `g(xy) = g(x)g(y)` on every pair whose product lies in the ball.
fn multiplicative_residual(ball: &BallDomain, g: &GroupFunction) -> f64 {
    let (mut sup, mut scale) = (0.0f64, 1.0f64);
    for x in 0..ball.size() {
        for y in 0..ball.size() {
            if let Some(xy) = ball.mul(x, y) {
                let p = g[x] * g[y];
                sup = sup.max((g[xy] - p).norm());
                scale = scale.max(g[xy].norm()).max(p.norm());
            }
        }
    }
    sup / scale
}

/// Least-squares fit of `f` by the columns, with the relative sup residual.
fn fit_columns(f: &GroupFunction, cols: &[Vec<C>]) -> Option<(Vec<C>, f64)> {
    let n = f.len();
    let a = Mat::from_fn(n, cols.len(), |i, j| cols[j][i]);
    let x = least_squares_complex(&a, f.values())?;
    let sup = (0..n)
        .map(|i| (f[i] - cols.iter().zip(&x).map(|(c, xj)| c[i] * xj).sum::<C>()).norm())
        .fold(0.0, f64::max);
    Some((x, sup / f.sup_norm().max(f64::MIN_POSITIVE)))
}

fn coords(ball: &BallDomain) -> Vec<Vec<i64>> {
    (0..ball.size()).map(|x| ball.abelian_coords(x)).collect()
}

/// Columns `k_i(x)·g(x)` followed by `g(x)`.
fn additive_columns(ball: &BallDomain, g: &GroupFunction) -> Vec<Vec<C>> {
    let c = coords(ball);
    let mut cols: Vec<Vec<C>> =
        (0..ball.abelian_rank()).map(|i| (0..ball.size()).map(|x| c[x][i] as f64 * g[x]).collect()).collect();
    cols.push(g.values().to_vec());
    cols
}

fn additive_values(ball: &BallDomain, a: &[C]) -> Vec<C> {
    coords(ball).iter().map(|k| k.iter().zip(a).map(|(&ki, ai)| ki as f64 * ai).sum()).collect()
}

/// Detects the growth branch of `(f, g)` and checks its claims on the
/// largest ball. `pair` is called once per radius.
pub fn growth_case_scan(
    kind: GroupKind,
    radii: &[usize],
    sigma: BallSigma,
    chi: &[C],
    pair: impl Fn(&BallDomain) -> Result<(GroupFunction, GroupFunction), StabilityError>,
) -> Result<CaseScan, StabilityError> {
    check_radii(radii)?;
    let mut balls = Vec::new();
    let (mut sup_f, mut sup_g, mut deltas) = (Vec::new(), Vec::new(), Vec::new());
    let (mut cf, mut cg) = (Vec::new(), Vec::new());
    for &radius in radii {
        let ball = BallDomain::new(kind, radius)?;
        let (f, g) = pair(&ball)?;
        f.check_domain(&ball)?;
        g.check_domain(&ball)?;
        let character = if chi.is_empty() { Character::trivial(&ball) } else { Character::exponential(&ball, chi)? };
        deltas.push(residual_wilson(&ball, &sigma.build(&ball)?, character.values(), &f, &g)?.sup);
        sup_f.push(f.sup_norm());
        sup_g.push(g.sup_norm());
        cf.push(centered_sup(&f));
        cg.push(centered_sup(&g));
        balls.push((ball, f, g, character));
    }
    let (f_growth, g_growth) = (Growth::classify(&cf), Growth::classify(&cg));
    let mut scan = CaseScan {
        kind,
        radii: radii.to_vec(),
        sup_f,
        sup_g,
        deltas,
        f_growth,
        g_growth,
        branch: ScanBranch::Inconclusive,
        checks: Vec::new(),
        additive: None,
        offset: None,
        exponential: None,
    };

    let (ball, f, g, character) = balls.last().expect("at least two radii");
    if f.is_zero(1e-12) {
        scan.branch = ScanBranch::ZeroF;
        return Ok(scan);
    }
    let inv = sigma.build(ball)?;
    let chi_v = character.values();
    let structural = || {
        [
            ScanCheck::fit("g multiplicative", multiplicative_residual(ball, g)),
            ScanCheck::fit(
                "g = chi g∘sigma",
                rel_single(ball, |x| (g[x] - chi_v[x] * g[inv.apply(x)], g[x].norm())),
            ),
        ]
    };
    let all = |c: &[ScanCheck]| c.iter().all(|c| c.passed);

    match (f_growth, g_growth) {
        (Growth::Bounded, Growth::Bounded) => scan.branch = ScanBranch::Bounded,
        (Growth::Growing, Growth::Bounded) => {
            let mut checks = structural().to_vec();
            if let Some((x, _)) = fit_columns(f, &additive_columns(ball, g)) {
                let d = ball.abelian_rank();
                let a = x[..d].to_vec();
                // f - a·g on every radius, with `a` fitted on the largest ball
                let rest: Vec<f64> = balls
                    .iter()
                    .map(|(b, fb, gb, _)| {
                        let av = additive_values(b, &a);
                        (0..b.size()).map(|i| (fb[i] - av[i] * gb[i]).norm()).fold(0.0, f64::max)
                    })
                    .collect();
                let last = rest.windows(2).last().map_or(1.0, |w| if w[0] > 0.0 { w[1] / w[0] } else { 1.0 });
                checks.push(ScanCheck {
                    name: "f - a g bounded",
                    value: last,
                    passed: Growth::classify(&rest) == Growth::Bounded,
                });
                scan.additive = Some(a);
                scan.offset = Some(x[d]);
            } else {
                checks.push(ScanCheck { name: "additive fit", value: f64::INFINITY, passed: false });
            }
            if all(&checks) {
                scan.branch = ScanBranch::AdditiveTimesG;
            }
            scan.checks = checks;
        }
        (Growth::Growing, Growth::Growing) => {
            let base = structural();
            scan.checks.extend(base.iter().cloned());
            if all(&base) {
                let fe = f[IDENTITY];
                let one = rel_single(ball, |x| (f[x] - fe * g[x], f[x].norm()));
                scan.checks.push(ScanCheck::fit("f = f(e) g", one));
                if one <= FIT_TOL {
                    scan.branch = ScanBranch::MultipleOfG;
                    return Ok(scan);
                }
                if let Some((x, res)) = fit_columns(f, &additive_columns(ball, g)) {
                    let d = ball.abelian_rank();
                    let odd = match sigma {
                        BallSigma::Negation => 0.0,
                        BallSigma::Identity => x[..d].iter().map(|v| v.norm()).fold(0.0, f64::max),
                    };
                    let checks = [ScanCheck::fit("f = (a + b) g", res), ScanCheck::fit("a∘sigma = -a", odd)];
                    scan.checks.extend(checks.iter().cloned());
                    if all(&checks) {
                        scan.additive = Some(x[..d].to_vec());
                        scan.offset = Some(x[d]);
                        scan.branch = ScanBranch::AdditiveTimesCharacter;
                        return Ok(scan);
                    }
                }
            }
            let chi_params: Vec<C> = if chi.is_empty() { vec![C::new(1.0, 0.0); ball.abelian_rank()] } else { chi.to_vec() };
            let fit = fit_member(ball, Member::Symmetrized, sigma, &chi_params, g);
            scan.checks.push(ScanCheck::fit("g = (m + chi m∘sigma)/2", fit.distance));
            if fit.distance <= FIT_TOL {
                let m = Character::exponential(ball, &fit.params)?;
                let m_s: Vec<C> = (0..ball.size()).map(|x| m.at(inv.apply(x))).collect();
                let mut cols = vec![m.values().values().to_vec(), m_s.clone()];
                if !character.is_trivial() {
                    cols.push((0..ball.size()).map(|x| chi_v[x] * m_s[x]).collect());
                }
                let res = fit_columns(f, &cols).map_or(f64::INFINITY, |(_, r)| r);
                scan.checks.push(ScanCheck::fit("f in span(m, m∘sigma, chi m∘sigma)", res));
                if res <= FIT_TOL {
                    scan.exponential = Some(fit.params);
                    scan.branch = ScanBranch::Exponential;
                }
            }
        }
        _ => {}
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::AdditiveMap;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn affine_times_one_is_additive_branch() {
        let scan = growth_case_scan(GroupKind::IntegerLattice(2), &[2, 4, 8, 16], BallSigma::Negation, &[], |b| {
            let a = AdditiveMap::new(vec![c(1.0), c(0.0)]).values(b)?;
            Ok((a.map(|v| v + 5.0), GroupFunction::constant(b.size(), c(1.0))))
        })
        .unwrap();
        assert_eq!(scan.branch, ScanBranch::AdditiveTimesG, "{scan:?}");
        let a = scan.additive.unwrap();
        assert!((a[0] - c(1.0)).norm() < 1e-9 && a[1].norm() < 1e-9);
        assert!((scan.offset.unwrap() - c(5.0)).norm() < 1e-9);
        assert!(scan.deltas.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn hyperbolic_pair_recovers_the_exponential() {
        // f = 2·2^k, g = (2^k + 2^-k)/2 on Z
        let scan = growth_case_scan(GroupKind::IntegerLattice(1), &[4, 8, 12, 16], BallSigma::Negation, &[], |b| {
            let m = Character::exponential(b, &[c(2.0)])?;
            let inv = BallSigma::Negation.build(b)?;
            let g = GroupFunction::from_fn(b.size(), |x| (m.at(x) + m.at(inv.apply(x))) / 2.0);
            Ok((m.values().scale(c(2.0)), g))
        })
        .unwrap();
        assert_eq!(scan.branch, ScanBranch::Exponential, "{scan:?}");
        let z = scan.exponential.unwrap()[0];
        assert!((z - c(2.0)).norm() < 1e-9 || (z - c(0.5)).norm() < 1e-9);
    }

    #[test]
    fn other_branches() {
        let z1 = GroupKind::IntegerLattice(1);
        let radii = [4, 8, 12, 16];
        let zero = growth_case_scan(z1, &radii, BallSigma::Identity, &[], |b| {
            Ok((GroupFunction::zeros(b.size()), GroupFunction::constant(b.size(), c(3.0))))
        })
        .unwrap();
        assert_eq!(zero.branch, ScanBranch::ZeroF);

        let unitary = growth_case_scan(z1, &radii, BallSigma::Identity, &[], |b| {
            let m = Character::exponential(b, &[C::from_polar(1.0, 0.7)])?;
            Ok((m.values().scale(c(2.0)), m.values().clone()))
        })
        .unwrap();
        assert_eq!(unitary.branch, ScanBranch::Bounded);

        let multiple = growth_case_scan(z1, &radii, BallSigma::Identity, &[], |b| {
            let m = Character::exponential(b, &[c(3.0)])?;
            Ok((m.values().scale(c(-1.5)), m.values().clone()))
        })
        .unwrap();
        assert_eq!(multiple.branch, ScanBranch::MultipleOfG, "{multiple:?}");

        // with σ = -x, m = 2^k and χ = 4^k give m = χ·m∘σ
        let odd = growth_case_scan(z1, &radii, BallSigma::Negation, &[c(4.0)], |b| {
            let m = Character::exponential(b, &[c(2.0)])?;
            let a = AdditiveMap::new(vec![c(1.0)]).values(b)?;
            Ok((a.map(|v| v + 0.5).times(m.values()), m.values().clone()))
        })
        .unwrap();
        assert_eq!(odd.branch, ScanBranch::AdditiveTimesCharacter, "{odd:?}");
    }

    #[test]
    fn slow_growth_is_inconclusive() {
        let scan = growth_case_scan(GroupKind::IntegerLattice(1), &[4, 5, 7], BallSigma::Identity, &[], |b| {
            Ok((AdditiveMap::new(vec![c(1.0)]).values(b)?, GroupFunction::constant(b.size(), c(1.0))))
        })
        .unwrap();
        assert_eq!(scan.branch, ScanBranch::Inconclusive);
        assert_eq!(scan.f_growth, Growth::Inconclusive);
    }
}
