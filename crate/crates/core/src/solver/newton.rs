//! Formula-free search for solutions of `f(xy) + χ(y)f(σ(y)x) = 2f(x)f(y)`.
//!
//! `x = y = e` gives `2f(e) = 2f(e)²`, so `f(e) ∈ {0, 1}`. With `f(e) = 0`,
//! `y = e` gives `2f(x) = 0`, leaving only `f = 0`. For `f(e) = 1` the
//! remaining `n - 1` values are found by damped Gauss–Newton
//! (Levenberg–Marquardt) on the `n²` quadratic equations from many seeded
//! random starts. Descents that stall in a valley away from every root
//! (on S3 there is one along the 2-dim character) are kicked out with a
//! seeded perturbation a bounded number of times.

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SolverError, BRUTE_FORCE_MAX_ORDER};
use crate::function::{GroupFunction, C};
use crate::groups::{FiniteGroup, IDENTITY};
use crate::linalg::solve_square;
use crate::morphisms::{compatibility_witness, Character, Involution};
use crate::par::map_items;
use crate::tolerances::{DEDUP_TOL, NEWTON_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceConfig {
    pub starts: usize,
    pub seed: u64,
    /// Iterations per descent.
    pub max_iterations: usize,
    /// Random perturbations, drawn from the same disk as the starts, allowed
    /// per start after a descent stalls away from a root.
    pub kicks: usize,
    /// Starting values are uniform in the disk of this radius.
    pub radius: f64,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self { starts: 200, seed: 0, max_iterations: 400, kicks: 10, radius: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceReport {
    /// Distinct solutions, `f = 0` first, then in order of discovery.
    pub solutions: Vec<GroupFunction>,
    pub starts: usize,
    pub converged: usize,
}

impl BruteForceReport {
    /// More than half of the starts failed to converge.
    pub fn flagged(&self) -> bool {
        2 * self.converged < self.starts
    }
}

struct System<'a> {
    group: &'a FiniteGroup,
    sigma: &'a Involution,
    chi: &'a [C],
}

impl System<'_> {
    fn residual(&self, f: &[C]) -> Vec<C> {
        let n = self.group.order();
        (0..n * n)
            .map(|row| {
                let (x, y) = (row / n, row % n);
                f[self.group.op(x, y)] + self.chi[y] * f[self.group.op(self.sigma.apply(y), x)] - 2.0 * f[x] * f[y]
            })
            .collect()
    }

    /// Derivatives with respect to `f(1), ..., f(n-1)`; `f(e)` is pinned.
    fn jacobian(&self, f: &[C]) -> Mat<C> {
        let n = self.group.order();
        let mut j = Mat::zeros(n * n, n - 1);
        let mut add = |row: usize, z: usize, v: C| {
            if z != IDENTITY {
                j[(row, z - 1)] += v;
            }
        };
        for x in 0..n {
            for y in 0..n {
                let row = x * n + y;
                add(row, self.group.op(x, y), C::new(1.0, 0.0));
                add(row, self.group.op(self.sigma.apply(y), x), self.chi[y]);
                add(row, x, -2.0 * f[y]);
                add(row, y, -2.0 * f[x]);
            }
        }
        j
    }

    fn sup(r: &[C]) -> f64 {
        r.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn norm_sqr(r: &[C]) -> f64 {
        r.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Levenberg–Marquardt from `start`. Stops early once the squared
    /// residual drops by less than 10% over [`STALL_WINDOW`] iterations.
    fn descend(&self, start: Vec<C>, max_iterations: usize) -> (Vec<C>, bool) {
        let n = self.group.order();
        let mut f = start;
        let mut r = self.residual(&f);
        let mut lambda = 1e-3;
        let mut checkpoint = Self::norm_sqr(&r);
        for it in 0..max_iterations {
            if Self::sup(&r) <= NEWTON_TOL {
                return (f, true);
            }
            if it > 0 && it % STALL_WINDOW == 0 {
                let now = Self::norm_sqr(&r);
                if now > 0.9 * checkpoint {
                    break;
                }
                checkpoint = now;
            }
            let j = self.jacobian(&f);
            let mut normal = j.adjoint() * &j;
            let rhs: Vec<C> = (0..n - 1)
                .map(|k| -(0..r.len()).map(|row| j[(row, k)].conj() * r[row]).sum::<C>())
                .collect();
            for i in 0..n - 1 {
                normal[(i, i)] += C::new(lambda, 0.0);
            }
            let Some(step) = solve_square(&normal, &rhs) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = f.clone();
            for i in 1..n {
                trial[i] += step[i - 1];
            }
            let tr = self.residual(&trial);
            if Self::norm_sqr(&tr) < Self::norm_sqr(&r) {
                f = trial;
                r = tr;
                lambda = (lambda / 3.0).max(1e-15);
            } else {
                lambda *= 4.0;
                if lambda > 1e12 {
                    break;
                }
            }
        }
        let ok = Self::sup(&r) <= NEWTON_TOL;
        (f, ok)
    }

    /// Descent with up to `config.kicks` random perturbations out of
    /// non-root stationary valleys.
    fn solve(&self, start: &Start, config: &BruteForceConfig) -> Option<Vec<C>> {
        let mut rng = ChaCha8Rng::seed_from_u64(start.kick_seed);
        let mut f = start.point.clone();
        for round in 0..=config.kicks {
            if round > 0 {
                for z in f.iter_mut().skip(1) {
                    *z += disk_sample(&mut rng, config.radius);
                }
            }
            let (end, ok) = self.descend(f, config.max_iterations);
            if ok {
                return Some(end);
            }
            f = end;
        }
        None
    }
}

const STALL_WINDOW: usize = 25;

struct Start {
    point: Vec<C>,
    kick_seed: u64,
}

/// Uniform in the disk of the given radius.
fn disk_sample(rng: &mut ChaCha8Rng, radius: f64) -> C {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    C::from_polar(r, theta)
}

/// All solutions of the d'Alembert variant on a small group, found without
/// the closed-form family.
pub fn brute_force_dalembert(
    group: &FiniteGroup,
    sigma: &Involution,
    chi: &Character,
    config: &BruteForceConfig,
) -> Result<BruteForceReport, SolverError> {
    let n = group.order();
    if n > BRUTE_FORCE_MAX_ORDER {
        return Err(SolverError::TooLarge(n));
    }
    if let Some(x) = compatibility_witness(group, sigma, chi) {
        return Err(SolverError::Incompatible(x));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let starts: Vec<Start> = (0..config.starts)
        .map(|_| {
            let mut point = vec![C::new(1.0, 0.0); n];
            for z in point.iter_mut().skip(1) {
                *z = disk_sample(&mut rng, config.radius);
            }
            Start { point, kick_seed: rng.random() }
        })
        .collect();

    let system = System { group, sigma, chi: chi.values().values() };
    let results = if n == 1 {
        // nothing to solve for: f = (1) either works or not
        let ok = System::sup(&system.residual(&[C::new(1.0, 0.0)])) <= NEWTON_TOL;
        starts.iter().map(|s| ok.then(|| s.point.clone())).collect()
    } else {
        map_items(&starts, |s| system.solve(s, config))
    };

    let mut solutions = vec![GroupFunction::zeros(n)];
    let mut converged = 0;
    for f in results.into_iter().flatten() {
        converged += 1;
        let f = GroupFunction::from_fn(n, |i| f[i]);
        if solutions.iter().all(|s| s.distance(&f) > DEDUP_TOL) {
            solutions.push(f);
        }
    }
    Ok(BruteForceReport { solutions, starts: config.starts, converged })
}

/// Set equality up to [`DEDUP_TOL`] in sup norm.
pub fn same_solution_set(a: &[GroupFunction], b: &[GroupFunction]) -> bool {
    let covered = |x: &[GroupFunction], y: &[GroupFunction]| {
        x.iter().all(|f| y.iter().any(|h| f.distance(h) <= DEDUP_TOL))
    };
    covered(a, b) && covered(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::dalembert_family;
    use crate::morphisms::enumerate_multiplicative;

    #[test]
    fn z2_recovers_three_solutions() {
        let z2 = FiniteGroup::cyclic(2);
        let id = Involution::identity(&z2);
        let report =
            brute_force_dalembert(&z2, &id, &Character::trivial(&z2), &BruteForceConfig::default()).unwrap();
        assert!(!report.flagged());
        let expected = vec![
            GroupFunction::zeros(2),
            GroupFunction::from_real(&[1.0, 1.0]),
            GroupFunction::from_real(&[1.0, -1.0]),
        ];
        assert!(same_solution_set(&report.solutions, &expected), "{:?}", report.solutions);
    }

    #[test]
    fn z3_matches_formula() {
        let z3 = FiniteGroup::cyclic(3);
        let id = Involution::identity(&z3);
        let one = Character::trivial(&z3);
        let report = brute_force_dalembert(&z3, &id, &one, &BruteForceConfig::default()).unwrap();
        let formula: Vec<GroupFunction> =
            enumerate_multiplicative(&z3).iter().map(|m| dalembert_family(&z3, m, &one, &id)).collect();
        assert_eq!(report.solutions.len(), 4);
        assert!(same_solution_set(&report.solutions, &formula));
    }

    #[test]
    fn rejects_large_groups() {
        let s4 = FiniteGroup::symmetric(4);
        let err = brute_force_dalembert(
            &s4,
            &Involution::identity(&s4),
            &Character::trivial(&s4),
            &BruteForceConfig::default(),
        );
        assert_eq!(err.unwrap_err(), SolverError::TooLarge(24));
    }
}
