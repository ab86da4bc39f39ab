//! Closed-form solution families of the Wilson variant and of the
//! d'Alembert variant, each re-verified by a residual sweep on construction.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::feq::{residual_dalembert, residual_wilson, FeqError};
use crate::function::{GroupFunction, C};
use crate::groups::{Domain, FiniteGroup, GroupElement, IDENTITY};
use crate::morphisms::{compatibility_witness, enumerate_characters, AdditiveMap, Character, Involution, MultiplicativeFunction};
use crate::report::fmt_f64;
use crate::tolerances::CHARACTER_TOL;

/// Nonzero sample values for the free constant `c`.
pub const C_SAMPLES: [C; 4] = [C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(0.0, 1.0), C::new(1.0, 1.0)];

/// Sample values for `f(e)`.
pub const FE_SAMPLES: [C; 5] =
    [C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(0.0, 1.0), C::new(1.0, 1.0), C::new(0.0, 0.0)];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("character fails chi(x sigma(x)) = 1 at x = {0}")]
    Incompatible(GroupElement),
    #[error("condition {condition} fails at x = {at}")]
    ConditionViolated { condition: &'static str, at: GroupElement },
    #[error("the constant c must be nonzero")]
    ZeroC,
    #[error("constructed pair has residual {sup:e}; a precondition does not hold")]
    ResidualCheck { sup: f64 },
    #[error(transparent)]
    Feq(#[from] FeqError),
    #[error("malformed solution file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    /// `f = 0`, `g` arbitrary.
    CaseI,
    /// `g = (m + χ·m∘σ)/2`, `f = f(e)·g`.
    CaseII,
    /// `g = (m + χ·m∘σ)/2`, `f = (c + f(e)/2)·m - (c - f(e)/2)·m∘σ`.
    CaseIII,
    /// `g = m`, `f = (a + f(e))·m`.
    CaseIV,
    /// `f = (m + χ·m∘σ)/2` for the d'Alembert variant.
    DAlembert,
    /// Supplied from outside, e.g. a solver kernel vector.
    External,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::CaseI => "case-i",
            FamilyTag::CaseII => "case-ii",
            FamilyTag::CaseIII => "case-iii",
            FamilyTag::CaseIV => "case-iv",
            FamilyTag::DAlembert => "dalembert",
            FamilyTag::External => "external",
        })
    }
}

impl FamilyTag {
    pub fn parse(s: &str) -> Option<Self> {
        [
            FamilyTag::CaseI,
            FamilyTag::CaseII,
            FamilyTag::CaseIII,
            FamilyTag::CaseIV,
            FamilyTag::DAlembert,
            FamilyTag::External,
        ]
        .into_iter()
        .find(|t| t.to_string() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FamilyParams {
    pub c: Option<C>,
    pub f_at_e: Option<C>,
    pub additive: Vec<C>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair {
    pub f: GroupFunction,
    pub g: GroupFunction,
    pub tag: FamilyTag,
    pub params: FamilyParams,
}

impl SolutionPair {
    /// Wraps a pair without any residual check.
    pub fn external(f: GroupFunction, g: GroupFunction) -> Self {
        Self { f, g, tag: FamilyTag::External, params: FamilyParams::default() }
    }

    /// Family tag, parameter lines, then the `f` and `g` function blocks.
    pub fn to_text(&self) -> String {
        let mut out = format!("family {}\n", self.tag);
        let pair = |v: C| format!("{} {}", fmt_f64(v.re), fmt_f64(v.im));
        if let Some(c) = self.params.c {
            let _ = writeln!(out, "c {}", pair(c));
        }
        if let Some(fe) = self.params.f_at_e {
            let _ = writeln!(out, "f_at_e {}", pair(fe));
        }
        if !self.params.additive.is_empty() {
            let body: Vec<String> = self.params.additive.iter().map(|&v| pair(v)).collect();
            let _ = writeln!(out, "additive {}", body.join(" "));
        }
        out.push_str("f\n");
        out.push_str(&self.f.to_text());
        out.push_str("g\n");
        out.push_str(&self.g.to_text());
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FamilyError> {
        let bad = |m: &str| FamilyError::Parse(m.to_string());
        let mut tag = FamilyTag::External;
        let mut params = FamilyParams::default();
        let mut lines = text.lines();
        let complex_list = |rest: &str| -> Result<Vec<C>, FamilyError> {
            let nums: Vec<f64> = rest
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| bad("bad number")))
                .collect::<Result<_, _>>()?;
            if nums.len() % 2 != 0 {
                return Err(bad("odd number of components"));
            }
            Ok(nums.chunks(2).map(|p| C::new(p[0], p[1])).collect())
        };
        for line in lines.by_ref() {
            let line = line.trim();
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "" => {}
                "family" => tag = FamilyTag::parse(rest.trim()).ok_or_else(|| bad("unknown family tag"))?,
                "c" => params.c = complex_list(rest)?.first().copied(),
                "f_at_e" => params.f_at_e = complex_list(rest)?.first().copied(),
                "additive" => params.additive = complex_list(rest)?,
                "f" => break,
                _ => return Err(bad(&format!("unexpected line `{line}`"))),
            }
        }
        let rest: Vec<&str> = lines.collect();
        let split = rest.iter().position(|l| l.trim() == "g").ok_or_else(|| bad("missing g block"))?;
        let f = GroupFunction::from_text(&rest[..split].join("\n")).map_err(|e| bad(&e.to_string()))?;
        let g = GroupFunction::from_text(&rest[split + 1..].join("\n")).map_err(|e| bad(&e.to_string()))?;
        if f.len() != g.len() {
            return Err(bad("f and g have different lengths"));
        }
        Ok(Self { f, g, tag, params })
    }
}

fn require_compatible<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &Character,
) -> Result<(), FamilyError> {
    match compatibility_witness(domain, sigma, chi) {
        Some(x) => Err(FamilyError::Incompatible(x)),
        None => Ok(()),
    }
}

fn verify<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &Character,
    pair: SolutionPair,
) -> Result<SolutionPair, FamilyError> {
    let report = residual_wilson(domain, sigma, chi.values(), &pair.f, &pair.g)?;
    if report.is_zero_on(domain) {
        Ok(pair)
    } else {
        Err(FamilyError::ResidualCheck { sup: report.sup })
    }
}

/// `(m + χ·m∘σ)/2`.
fn symmetrize<D: Domain + ?Sized>(
    domain: &D,
    m: &MultiplicativeFunction,
    chi: &Character,
    sigma: &Involution,
) -> GroupFunction {
    GroupFunction::from_fn(domain.size(), |x| (m.at(x) + chi.at(x) * m.at(sigma.apply(x))) * 0.5)
}

/// `f = 0` with any `g`.
pub fn family_case_i(g: GroupFunction) -> SolutionPair {
    SolutionPair {
        f: GroupFunction::zeros(g.len()),
        g,
        tag: FamilyTag::CaseI,
        params: FamilyParams::default(),
    }
}

/// `g = (m + χ·m∘σ)/2`, `f = f(e)·g`.
pub fn family_case_ii<D: Domain + ?Sized>(
    domain: &D,
    m: &MultiplicativeFunction,
    chi: &Character,
    sigma: &Involution,
    f_at_e: C,
) -> Result<SolutionPair, FamilyError> {
    require_compatible(domain, sigma, chi)?;
    let g = symmetrize(domain, m, chi, sigma);
    let f = g.scale(f_at_e);
    let params = FamilyParams { f_at_e: Some(f_at_e), ..Default::default() };
    verify(domain, sigma, chi, SolutionPair { f, g, tag: FamilyTag::CaseII, params })
}

/// `g = (m + χ·m∘σ)/2`, `f = (c + f(e)/2)·m - (c - f(e)/2)·m∘σ`, subject to
/// `(χ - 1)·m = (χ - 1)·m∘σ` pointwise and `c ≠ 0`.
pub fn family_case_iii<D: Domain + ?Sized>(
    domain: &D,
    m: &MultiplicativeFunction,
    chi: &Character,
    sigma: &Involution,
    c: C,
    f_at_e: C,
) -> Result<SolutionPair, FamilyError> {
    if c.norm() == 0.0 {
        return Err(FamilyError::ZeroC);
    }
    require_compatible(domain, sigma, chi)?;
    let one = C::new(1.0, 0.0);
    if let Some(at) = (0..domain.size()).find(|&x| {
        let (mx, msx) = (m.at(x), m.at(sigma.apply(x)));
        ((chi.at(x) - one) * (mx - msx)).norm() > CHARACTER_TOL * mx.norm().max(msx.norm()).max(1.0)
    }) {
        return Err(FamilyError::ConditionViolated { condition: "(chi-1)m = (chi-1)m∘sigma", at });
    }
    let g = symmetrize(domain, m, chi, sigma);
    let (alpha, beta) = (c + f_at_e * 0.5, c - f_at_e * 0.5);
    let f = GroupFunction::from_fn(domain.size(), |x| alpha * m.at(x) - beta * m.at(sigma.apply(x)));
    let params = FamilyParams { c: Some(c), f_at_e: Some(f_at_e), ..Default::default() };
    verify(domain, sigma, chi, SolutionPair { f, g, tag: FamilyTag::CaseIII, params })
}

/// `g = m`, `f = (a + f(e))·m`, subject to `m = χ·m∘σ` and `m·(a∘σ + a) = 0`.
pub fn family_case_iv<D: Domain + ?Sized>(
    domain: &D,
    m: &MultiplicativeFunction,
    chi: &Character,
    sigma: &Involution,
    a: &AdditiveMap,
    f_at_e: C,
) -> Result<SolutionPair, FamilyError> {
    require_compatible(domain, sigma, chi)?;
    let a_values = a.values(domain).map_err(|_| FamilyError::ConditionViolated {
        condition: "a additive on the domain",
        at: IDENTITY,
    })?;
    for x in 0..domain.size() {
        let (mx, msx) = (m.at(x), m.at(sigma.apply(x)));
        let scale = mx.norm().max(msx.norm()).max(1.0);
        if (mx - chi.at(x) * msx).norm() > CHARACTER_TOL * scale {
            return Err(FamilyError::ConditionViolated { condition: "m = chi·m∘sigma", at: x });
        }
        let sym = a_values[sigma.apply(x)] + a_values[x];
        if (mx * sym).norm() > CHARACTER_TOL * scale * a_values[x].norm().max(1.0) {
            return Err(FamilyError::ConditionViolated { condition: "m(a∘sigma + a) = 0", at: x });
        }
    }
    let g = m.values();
    let f = GroupFunction::from_fn(domain.size(), |x| (a_values[x] + f_at_e) * m.at(x));
    let params =
        FamilyParams { f_at_e: Some(f_at_e), additive: a.coefficients().to_vec(), ..Default::default() };
    verify(domain, sigma, chi, SolutionPair { f, g, tag: FamilyTag::CaseIV, params })
}

/// The two pairs `f = m` and `f = χ·m∘σ`, both with `g = (m + χ·m∘σ)/2`.
///
/// Both solve the equation whenever `σ` is a homomorphism. When `χ ≠ 1` and
/// `m ≠ χ·m∘σ` they span a plane that cases (ii)-(iv) only partly cover.
pub fn character_pair<D: Domain + ?Sized>(
    domain: &D,
    m: &MultiplicativeFunction,
    chi: &Character,
    sigma: &Involution,
) -> Result<[SolutionPair; 2], FamilyError> {
    require_compatible(domain, sigma, chi)?;
    let g = symmetrize(domain, m, chi, sigma);
    let twisted = GroupFunction::from_fn(domain.size(), |x| chi.at(x) * m.at(sigma.apply(x)));
    let pair = |f| verify(domain, sigma, chi, SolutionPair::external(f, g.clone()));
    Ok([pair(m.values())?, pair(twisted)?])
}

/// `f = (m + χ·m∘σ)/2`, a solution of `f(xy) + χ(y)f(σ(y)x) = 2f(x)f(y)`.
pub fn dalembert_family<D: Domain + ?Sized>(
    domain: &D,
    m: &MultiplicativeFunction,
    chi: &Character,
    sigma: &Involution,
) -> GroupFunction {
    symmetrize(domain, m, chi, sigma)
}

/// The same as [`dalembert_family`] but re-checked against the residual.
pub fn dalembert_pair<D: Domain + ?Sized>(
    domain: &D,
    m: &MultiplicativeFunction,
    chi: &Character,
    sigma: &Involution,
) -> Result<SolutionPair, FamilyError> {
    require_compatible(domain, sigma, chi)?;
    let f = dalembert_family(domain, m, chi, sigma);
    let report = residual_dalembert(domain, sigma, chi.values(), &f)?;
    if !report.is_zero_on(domain) {
        return Err(FamilyError::ResidualCheck { sup: report.sup });
    }
    Ok(SolutionPair { g: f.clone(), f, tag: FamilyTag::DAlembert, params: FamilyParams::default() })
}

/// Wraps user-supplied values as a candidate `g`; no residual guarantee.
pub fn half_trace_candidate<D: Domain + ?Sized>(domain: &D, values: Vec<C>) -> Result<GroupFunction, FamilyError> {
    if values.len() != domain.size() {
        return Err(FeqError::LengthMismatch { what: "candidate", expected: domain.size(), found: values.len() }
            .into());
    }
    GroupFunction::new(values).map_err(|e| FamilyError::Parse(e.to_string()))
}

/// Half the trace of the two-dimensional irreducible representation,
/// together with its determinant character, for `S3`, `D4` and `Q8`.
///
/// By Cayley–Hamilton `A + det(A)·A⁻¹ = tr(A)·I`, so the half-trace solves
/// `g(xy) + det(y)·g(y⁻¹x) = 2g(x)g(y)`: the d'Alembert variant with
/// `σ` = inversion and `χ = det`. Only on `Q8` is `det` trivial.
pub fn standard_half_trace(group: &FiniteGroup) -> Option<(GroupFunction, Character)> {
    let n = group.order();
    let central = |x: GroupElement| (0..n).all(|y| group.op(x, y) == group.op(y, x));
    let g = match group.name() {
        "S3" => GroupFunction::from_fn(n, |x| match group.element_order(x) {
            1 => C::new(1.0, 0.0),
            2 => C::new(0.0, 0.0),
            _ => C::new(-0.5, 0.0),
        }),
        "D4" | "Q8" => {
            let z = (1..n).find(|&x| central(x) && (0..n).any(|y| group.op(y, y) == x))?;
            GroupFunction::from_fn(n, |x| match x {
                IDENTITY => C::new(1.0, 0.0),
                _ if x == z => C::new(-1.0, 0.0),
                _ => C::new(0.0, 0.0),
            })
        }
        _ => return None,
    };
    // reflections are exactly the non-central involutions in these groups
    let det = enumerate_characters(group).into_iter().find(|chi| {
        (0..n).all(|x| {
            let reflection = group.element_order(x) == 2 && !central(x);
            chi.at(x) == C::new(if reflection { -1.0 } else { 1.0 }, 0.0)
        })
    })?;
    Some((g, det))
}

/// Every case (ii)–(iv) member over the given multiplicative functions and
/// the sample sets for `c` and `f(e)`. Members whose preconditions fail are
/// left out; additive maps are taken from `additive` (empty on finite groups
/// means only `a = 0`).
pub fn family_members<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &Character,
    multiplicative: &[MultiplicativeFunction],
    additive: &[AdditiveMap],
) -> Vec<SolutionPair> {
    let mut out = Vec::new();
    let zero_map = AdditiveMap::zero();
    let maps: Vec<&AdditiveMap> = std::iter::once(&zero_map).chain(additive).collect();
    for m in multiplicative {
        for &fe in &FE_SAMPLES {
            if let Ok(p) = family_case_ii(domain, m, chi, sigma, fe) {
                out.push(p);
            }
            for &c in &C_SAMPLES {
                if let Ok(p) = family_case_iii(domain, m, chi, sigma, c, fe) {
                    out.push(p);
                }
            }
            for a in &maps {
                if let Ok(p) = family_case_iv(domain, m, chi, sigma, a, fe) {
                    out.push(p);
                }
            }
        }
    }
    out
}
