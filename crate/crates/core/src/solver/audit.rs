//! Property audit for solutions with an anti-automorphism `σ`.
//!
//! No classification is available in that setting, so exact solutions found
//! by the kernel solver are checked against the structural identities they
//! must satisfy.

use super::{dalembert_candidates, SolverError};
use crate::families::{standard_half_trace, SolutionPair};
use crate::feq::{companion_mg, parity_parts};
use crate::function::{GroupFunction, C};
use crate::groups::{FiniteGroup, GroupElement, IDENTITY};
use crate::morphisms::{Character, Involution};
use crate::report::{CsvTable, Record};
use crate::tolerances::AUDIT_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub name: &'static str,
    pub max_violation: f64,
    /// Elements attaining the worst violation.
    pub witness: Vec<GroupElement>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditRow> {
        self.rows.iter().filter(|r| !r.passed)
    }

    pub fn row(&self, name: &str) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_records(&self) -> Vec<Record> {
        self.rows
            .iter()
            .map(|r| {
                Record::new("audit")
                    .str("property", r.name)
                    .boolean("pass", r.passed)
                    .num("max_violation", r.max_violation)
                    .ints("witness", &r.witness)
            })
            .collect()
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["property", "pass", "max_violation", "witness"]);
        for r in &self.rows {
            let w: Vec<String> = r.witness.iter().map(|x| x.to_string()).collect();
            t.push(vec![
                r.name.to_string(),
                r.passed.to_string(),
                crate::report::fmt_f64(r.max_violation),
                w.join(" "),
            ]);
        }
        t
    }
}

/// Tracks the first element tuple with the largest violation.
struct Worst {
    value: f64,
    witness: Vec<GroupElement>,
}

impl Worst {
    fn new() -> Self {
        Self { value: 0.0, witness: Vec::new() }
    }

    fn see(&mut self, v: f64, at: &[GroupElement]) {
        if v > self.value || self.witness.is_empty() {
            self.value = v;
            self.witness = at.to_vec();
        }
    }

    fn row(self, name: &'static str) -> AuditRow {
        AuditRow { name, passed: self.value <= AUDIT_TOL, max_violation: self.value, witness: self.witness }
    }
}

fn single(n: usize, name: &'static str, v: impl Fn(GroupElement) -> f64) -> AuditRow {
    let mut w = Worst::new();
    for x in 0..n {
        w.see(v(x), &[x]);
    }
    w.row(name)
}

fn pairs(n: usize, name: &'static str, v: impl Fn(GroupElement, GroupElement) -> f64) -> AuditRow {
    let mut w = Worst::new();
    for x in 0..n {
        for y in 0..n {
            w.see(v(x, y), &[x, y]);
        }
    }
    w.row(name)
}

/// Audits an exact solution pair with `σ` an anti-automorphism.
///
/// Properties, each to [`AUDIT_TOL`]:
/// `g(e) = 1`, `g` central, `g = χ·g∘σ`, `g = m_g·ǧ`, `m_g` multiplicative,
/// `χ(y)f(σ(y)xy) = m_g(y)f(x)`, `χ(y)f(σ(y)x) = m_g(y)f(xy⁻¹)`,
/// `g(xy) + m_g(y)g(xy⁻¹) = 2g(x)g(y)`, `f(xy) + m_g(y)f(xy⁻¹) = 2f(x)g(y)`,
/// `f_e = f(e)·g`, `f_o(xy) + f_o(yx) = 2f_o(x)g(y) + 2f_o(y)g(x)`, and for
/// `σ` = inversion `χ(x⁻¹)·m_g(x) ∈ {±1}`.
pub fn audit_anti_solution(
    group: &FiniteGroup,
    sigma: &Involution,
    chi: &Character,
    pair: &SolutionPair,
) -> Result<AuditReport, SolverError> {
    let (f, g) = (&pair.f, &pair.g);
    if f.is_zero(AUDIT_TOL) {
        return Err(SolverError::NotApplicable);
    }
    let n = group.order();
    let op = |a, b| group.op(a, b);
    let inv = |a| group.inverse(a);
    let s = |a| sigma.apply(a);
    let chi = chi.values();
    let mg = companion_mg(group, g)?;
    let (fe, fo) = parity_parts(f, sigma, chi);
    let one = C::new(1.0, 0.0);

    let mut rows = vec![
        single(1, "g(e) = 1", |_| (g[IDENTITY] - one).norm()),
        pairs(n, "g central", |x, y| (g[op(x, y)] - g[op(y, x)]).norm()),
        single(n, "g = chi g∘sigma", |x| (g[x] - chi[x] * g[s(x)]).norm()),
        single(n, "g = m_g ǧ", |x| (g[x] - mg[x] * g[inv(x)]).norm()),
        pairs(n, "m_g multiplicative", |x, y| (mg[op(x, y)] - mg[x] * mg[y]).norm()),
        pairs(n, "chi(y) f(sigma(y) x y) = m_g(y) f(x)", |x, y| {
            (chi[y] * f[op(op(s(y), x), y)] - mg[y] * f[x]).norm()
        }),
        pairs(n, "chi(y) f(sigma(y) x) = m_g(y) f(x y^-1)", |x, y| {
            (chi[y] * f[op(s(y), x)] - mg[y] * f[op(x, inv(y))]).norm()
        }),
        pairs(n, "g(xy) + m_g(y) g(xy^-1) = 2 g(x) g(y)", |x, y| {
            (g[op(x, y)] + mg[y] * g[op(x, inv(y))] - 2.0 * g[x] * g[y]).norm()
        }),
        pairs(n, "f(xy) + m_g(y) f(xy^-1) = 2 f(x) g(y)", |x, y| {
            (f[op(x, y)] + mg[y] * f[op(x, inv(y))] - 2.0 * f[x] * g[y]).norm()
        }),
        single(n, "f_e = f(e) g", |x| (fe[x] - f[IDENTITY] * g[x]).norm()),
        pairs(n, "f_o(xy) + f_o(yx) = 2 f_o(x) g(y) + 2 f_o(y) g(x)", |x, y| {
            (fo[op(x, y)] + fo[op(y, x)] - 2.0 * fo[x] * g[y] - 2.0 * fo[y] * g[x]).norm()
        }),
    ];
    if sigma.is_inversion(group) {
        rows.push(single(n, "chi(x^-1) m_g(x) in {+1, -1}", |x| {
            let v = chi[inv(x)] * mg[x];
            (v - one).norm().min((v + one).norm())
        }));
    }
    Ok(AuditReport { rows })
}

/// Candidate `g`'s for the anti-automorphism solver: the d'Alembert-family
/// functions plus the standard half-trace where one is known.
pub fn anti_candidates(group: &FiniteGroup, sigma: &Involution, chi: &Character) -> Vec<GroupFunction> {
    let mut out = dalembert_candidates(group, sigma, chi);
    if let Some((h, _)) = standard_half_trace(group) {
        if out.iter().all(|g| g.distance(&h) > AUDIT_TOL) {
            out.push(h);
        }
    }
    out
}
