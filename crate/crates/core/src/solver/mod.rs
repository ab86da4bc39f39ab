//! Direct solution of the Wilson variant on finite groups.
//!
//! For fixed `g` the equation is linear in `f`, so its solutions are the
//! kernel of an `n² × n` system. Candidate `g`'s come from the d'Alembert
//! family (a nonzero `f` forces `g` to solve the d'Alembert variant), and the
//! kernels are compared against the closed-form families.

mod audit;
mod newton;

pub use audit::{anti_candidates, audit_anti_solution, AuditReport, AuditRow};
pub use newton::{brute_force_dalembert, same_solution_set, BruteForceConfig, BruteForceReport};

use faer::Mat;
use thiserror::Error;

use crate::families::{dalembert_family, family_members, FamilyError, SolutionPair};
use crate::feq::{residual_wilson, FeqError};
use crate::function::{GroupFunction, C};
use crate::groups::{FiniteGroup, GroupElement};
use crate::linalg::{kernel, orthonormal_span, projection_residual, LinalgError};
use crate::morphisms::{compatibility_witness, enumerate_multiplicative, Character, Involution};
use crate::par::map_items;
use crate::report::{CsvTable, Record};
use crate::tolerances::{RESIDUAL_TOL_FINITE, SPAN_TOL};

/// Largest group the multistart d'Alembert search accepts.
pub const BRUTE_FORCE_MAX_ORDER: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Rank(#[from] LinalgError),
    #[error("character fails chi(x sigma(x)) = 1 at x = {0}")]
    Incompatible(GroupElement),
    #[error(transparent)]
    Feq(#[from] FeqError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("group of order {0} is too large for the multistart search (max {BRUTE_FORCE_MAX_ORDER})")]
    TooLarge(usize),
    #[error("audit needs a nonzero f")]
    NotApplicable,
}

/// One candidate `g` with the kernel of the linear system in `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionEntry {
    pub g: GroupFunction,
    /// Orthonormal basis of `{f : (f, g) solves the equation}`.
    pub f_basis: Vec<GroupFunction>,
}

impl SolutionEntry {
    pub fn f_dim(&self) -> usize {
        self.f_basis.len()
    }
}

/// Solutions grouped by `g`. Pairs with `f = 0` and arbitrary `g` always
/// exist and are not listed.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub entries: Vec<SolutionEntry>,
}

impl SolutionSet {
    pub fn total_f_dim(&self) -> usize {
        self.entries.iter().map(SolutionEntry::f_dim).sum()
    }

    pub fn to_records(&self) -> Vec<Record> {
        let mut out = vec![Record::new("solution")
            .int("entry", -1)
            .str("g", "arbitrary")
            .int("f_dim", 0)
            .str("note", "f = 0 solves for every g")];
        for (i, e) in self.entries.iter().enumerate() {
            out.push(
                Record::new("solution")
                    .int("entry", i as i64)
                    .complexes("g", e.g.values())
                    .int("f_dim", e.f_dim() as i64),
            );
            for (j, f) in e.f_basis.iter().enumerate() {
                out.push(
                    Record::new("basis")
                        .int("entry", i as i64)
                        .int("index", j as i64)
                        .complexes("f", f.values()),
                );
            }
        }
        out
    }
}

/// Rows indexed by `(x, y)`: `e_{xy} + χ(y)·e_{σ(y)x} - 2g(y)·e_x`.
pub fn wilson_system(group: &FiniteGroup, sigma: &Involution, chi: &GroupFunction, g: &GroupFunction) -> Mat<C> {
    let n = group.order();
    let mut a = Mat::zeros(n * n, n);
    for x in 0..n {
        for y in 0..n {
            let row = x * n + y;
            a[(row, group.op(x, y))] += C::new(1.0, 0.0);
            a[(row, group.op(sigma.apply(y), x))] += chi[y];
            a[(row, x)] -= 2.0 * g[y];
        }
    }
    a
}

fn to_vector(f: &GroupFunction) -> Vec<C> {
    f.values().to_vec()
}

fn from_vector(v: &Vec<C>) -> GroupFunction {
    GroupFunction::from_fn(v.len(), |i| v[i])
}

/// Orthonormal basis of every `f` solving the equation with the given `g`;
/// empty means only `f = 0`.
pub fn solve_f_given_g(
    group: &FiniteGroup,
    sigma: &Involution,
    chi: &GroupFunction,
    g: &GroupFunction,
) -> Result<Vec<GroupFunction>, SolverError> {
    g.check_domain(group).map_err(|_| FeqError::LengthMismatch {
        what: "g",
        expected: group.order(),
        found: g.len(),
    })?;
    let basis = kernel(&wilson_system(group, sigma, chi, g))?;
    Ok(basis.iter().map(from_vector).collect())
}

fn require_compatible(group: &FiniteGroup, sigma: &Involution, chi: &Character) -> Result<(), SolverError> {
    match compatibility_witness(group, sigma, chi) {
        Some(x) => Err(SolverError::Incompatible(x)),
        None => Ok(()),
    }
}

/// Distinct nonzero `(m + χ·m∘σ)/2` over all multiplicative `m`.
pub fn dalembert_candidates(group: &FiniteGroup, sigma: &Involution, chi: &Character) -> Vec<GroupFunction> {
    let mut out: Vec<GroupFunction> = Vec::new();
    for m in enumerate_multiplicative(group) {
        push_distinct(&mut out, dalembert_family(group, &m, chi, sigma));
    }
    out
}

fn push_distinct(list: &mut Vec<GroupFunction>, g: GroupFunction) {
    if !g.is_zero(SPAN_TOL) && list.iter().all(|h| h.distance(&g) > SPAN_TOL) {
        list.push(g);
    }
}

/// Kernels for every d'Alembert-family `g`.
pub fn enumerate_solutions(
    group: &FiniteGroup,
    sigma: &Involution,
    chi: &Character,
) -> Result<SolutionSet, SolverError> {
    enumerate_solutions_with(group, sigma, chi, &[])
}

/// As [`enumerate_solutions`], with extra candidate `g`'s (e.g. from the
/// multistart search or half-traces) appended after deduplication.
pub fn enumerate_solutions_with(
    group: &FiniteGroup,
    sigma: &Involution,
    chi: &Character,
    extra: &[GroupFunction],
) -> Result<SolutionSet, SolverError> {
    require_compatible(group, sigma, chi)?;
    let mut candidates = dalembert_candidates(group, sigma, chi);
    for g in extra {
        push_distinct(&mut candidates, g.clone());
    }
    let solved = map_items(&candidates, |g| solve_f_given_g(group, sigma, chi.values(), g));
    let mut entries = Vec::with_capacity(candidates.len());
    for (g, basis) in candidates.into_iter().zip(solved) {
        entries.push(SolutionEntry { g, f_basis: basis? });
    }
    Ok(SolutionSet { entries })
}

/// Span comparison between the kernel and the family members for one `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessRow {
    pub g: GroupFunction,
    pub solver_dim: usize,
    pub family_dim: usize,
    /// Worst relative distance of a kernel vector from the family span.
    pub solver_outside_family: f64,
    /// Worst relative distance of a family `f` from the kernel.
    pub family_outside_solver: f64,
    /// First offending family member (index into the members list), if any.
    pub witness: Option<usize>,
}

impl CompletenessRow {
    pub fn matched(&self) -> bool {
        self.solver_dim == self.family_dim
            && self.solver_outside_family <= SPAN_TOL
            && self.family_outside_solver <= SPAN_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub rows: Vec<CompletenessRow>,
    /// Family members whose `g` matched none of the candidates.
    pub orphans: Vec<usize>,
}

impl CompletenessReport {
    pub fn passed(&self) -> bool {
        self.orphans.is_empty() && self.rows.iter().all(CompletenessRow::matched)
    }

    pub fn g_count(&self) -> usize {
        self.rows.len()
    }

    pub fn total_f_dim(&self) -> usize {
        self.rows.iter().map(|r| r.solver_dim).sum()
    }

    pub fn to_records(&self) -> Vec<Record> {
        let mut out: Vec<Record> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let rec = Record::new("completeness")
                    .int("entry", i as i64)
                    .int("solver_dim", r.solver_dim as i64)
                    .int("family_dim", r.family_dim as i64)
                    .num("solver_outside_family", r.solver_outside_family)
                    .num("family_outside_solver", r.family_outside_solver)
                    .boolean("match", r.matched());
                match r.witness {
                    Some(w) => rec.int("witness_member", w as i64),
                    None => rec,
                }
            })
            .collect();
        for &o in &self.orphans {
            out.push(Record::new("completeness").str("issue", "family g not among candidates").int("witness_member", o as i64));
        }
        out
    }

    /// One summary row: group, sigma, chi, #g, total f dim, match.
    pub fn summary_table(&self, group: &str, sigma: &str, chi: &str) -> CsvTable {
        let mut t = CsvTable::new(&["group", "sigma", "chi", "g_count", "f_dim_total", "match"]);
        t.push(vec![
            group.to_string(),
            sigma.to_string(),
            chi.to_string(),
            self.g_count().to_string(),
            self.total_f_dim().to_string(),
            if self.passed() { "PASS" } else { "FAIL" }.to_string(),
        ]);
        t
    }
}

/// Checks that the kernels and the closed-form families span the same
/// spaces, `g` by `g`.
pub fn completeness_check(
    group: &FiniteGroup,
    sigma: &Involution,
    chi: &Character,
) -> Result<CompletenessReport, SolverError> {
    completeness_check_with(group, sigma, chi, &[])
}

/// As [`completeness_check`] with additional pairs treated as if they were
/// family members; used for negative controls.
pub fn completeness_check_with(
    group: &FiniteGroup,
    sigma: &Involution,
    chi: &Character,
    injected: &[SolutionPair],
) -> Result<CompletenessReport, SolverError> {
    let set = enumerate_solutions(group, sigma, chi)?;
    let mut members = family_members(group, sigma, chi, &enumerate_multiplicative(group), &[]);
    members.extend(injected.iter().cloned());

    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); set.entries.len()];
    let mut orphans = Vec::new();
    for (i, p) in members.iter().enumerate() {
        if p.f.is_zero(RESIDUAL_TOL_FINITE) {
            continue;
        }
        match set.entries.iter().position(|e| e.g.distance(&p.g) <= SPAN_TOL) {
            Some(k) => assigned[k].push(i),
            None => orphans.push(i),
        }
    }

    let rows = set
        .entries
        .iter()
        .zip(&assigned)
        .map(|(entry, idx)| {
            let family_vectors: Vec<Vec<C>> = idx.iter().map(|&i| to_vector(&members[i].f)).collect();
            let family_span = orthonormal_span(&family_vectors);
            let solver_vectors: Vec<Vec<C>> = entry.f_basis.iter().map(to_vector).collect();
            let solver_outside_family = solver_vectors
                .iter()
                .map(|v| projection_residual(&family_span, v))
                .fold(0.0, f64::max);
            let mut family_outside_solver = 0.0f64;
            let mut witness = None;
            for (&i, v) in idx.iter().zip(&family_vectors) {
                let r = projection_residual(&solver_vectors, v);
                if r > family_outside_solver {
                    family_outside_solver = r;
                    if r > SPAN_TOL {
                        witness = Some(i);
                    }
                }
            }
            CompletenessRow {
                g: entry.g.clone(),
                solver_dim: entry.f_dim(),
                family_dim: family_span.len(),
                solver_outside_family,
                family_outside_solver,
                witness,
            }
        })
        .collect();
    Ok(CompletenessReport { rows, orphans })
}

/// Residual sweep used to double-check kernel vectors.
pub fn kernel_residual(
    group: &FiniteGroup,
    sigma: &Involution,
    chi: &GroupFunction,
    entry: &SolutionEntry,
) -> Result<f64, SolverError> {
    let mut worst = 0.0f64;
    for f in &entry.f_basis {
        worst = worst.max(residual_wilson(group, sigma, chi, f, &entry.g)?.sup);
    }
    Ok(worst)
}
