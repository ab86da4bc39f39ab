//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain strings and numbers and returns a JSON string, so
//! the page needs no bindings beyond `JSON.parse`.

use feqlab::families::{family_case_ii, standard_half_trace, SolutionPair};
use feqlab::feq::EquationTag;
use feqlab::morphisms::{enumerate_multiplicative, Character, Involution};
use feqlab::stability::{
    dichotomy_experiment, perturb, stability_audits, BallCandidate, BallEquation, BallSigma, DeltaChoice,
    NoiseShape, NoiseTarget, PerturbationConfig,
};
use feqlab::{FiniteGroup, GroupKind, C, IDENTITY};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn sigma_of(group: &FiniteGroup, sigma: &str) -> Result<Involution, String> {
    match sigma {
        "id" => Ok(Involution::identity(group)),
        "inv" => Ok(Involution::inversion(group)),
        s => Err(format!("sigma must be id or inv, got `{s}`")),
    }
}

/// The half-trace when `m` is negative and the group has one, otherwise
/// the case-(ii) pair of the `m`-th multiplicative function with `f(e) = 1`.
fn base_pair(group: &FiniteGroup, sigma: &Involution, m: i32) -> Result<(SolutionPair, Character), String> {
    if m < 0 {
        let (g, det) = standard_half_trace(group).ok_or("this group has no 2-dimensional half-trace")?;
        return Ok((SolutionPair::external(g.clone(), g), det));
    }
    let all = enumerate_multiplicative(group);
    let m = all.get(m as usize).ok_or("m index out of range")?;
    let chi = Character::trivial(group);
    let pair = family_case_ii(group, m, &chi, sigma, C::new(1.0, 0.0)).map_err(err)?;
    Ok((pair, chi))
}

fn noise(epsilon: f64, seed: u64) -> PerturbationConfig {
    PerturbationConfig { epsilon, seed, shape: NoiseShape::UniformDisk, target: NoiseTarget::Both }
}

pub fn residual_heatmap_json(group: &str, sigma: &str, m: i32, epsilon: f64, seed: u64) -> Result<String, String> {
    let g = FiniteGroup::catalog(group).map_err(err)?;
    let s = sigma_of(&g, sigma)?;
    let (base, chi) = base_pair(&g, &s, m)?;
    let p = perturb(&g, &s, &chi, &base, &noise(epsilon, seed)).map_err(err)?;
    let (f, h) = (&p.pair.f, &p.pair.g);
    let n = g.order();
    let cells: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| (f[g.op(x, y)] + chi.at(y) * f[g.op(s.apply(y), x)] - 2.0 * f[x] * h[y]).norm())
                .collect()
        })
        .collect();
    let labels: Vec<&str> = (0..n).map(|x| g.label(x)).collect();
    Ok(json!({ "labels": labels, "cells": cells, "delta": p.measured_delta }).to_string())
}

pub fn audit_sweep_json(group: &str, sigma: &str, m: i32, epsilons: &str, seed: u64) -> Result<String, String> {
    let g = FiniteGroup::catalog(group).map_err(err)?;
    let s = sigma_of(&g, sigma)?;
    let (base, chi) = base_pair(&g, &s, m)?;
    let mut rows = Vec::new();
    for eps in epsilons.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let eps: f64 = eps.parse().map_err(|_| format!("bad epsilon `{eps}`"))?;
        let p = perturb(&g, &s, &chi, &base, &noise(eps, seed)).map_err(err)?;
        let r = stability_audits(&g, &s, &chi, &p.pair.f, &p.pair.g, DeltaChoice::Measured, IDENTITY).map_err(err)?;
        for row in &r.rows {
            rows.push(json!({
                "epsilon": eps,
                "delta": r.measured_delta,
                "name": row.name,
                "max_violation": row.max_violation,
                "pass": row.passed(),
            }));
        }
    }
    Ok(serde_json::Value::Array(rows).to_string())
}

pub fn dichotomy_curve_json(ball: &str, radii: &str, equation: &str, sigma: &str, candidate: &str) -> Result<String, String> {
    let kind = GroupKind::parse(ball).ok_or_else(|| format!("unknown ball group `{ball}`"))?;
    let radii: Vec<usize> = radii
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("bad radius `{t}`")))
        .collect::<Result<_, _>>()?;
    let tag = EquationTag::parse(equation).ok_or_else(|| format!("unknown equation `{equation}`"))?;
    let sigma = BallSigma::parse(sigma).ok_or("sigma must be id or neg")?;
    let eq = BallEquation::new(tag, sigma);
    let cand = match candidate.split_once(':') {
        Some(("exp", z)) => {
            let z: f64 = z.parse().map_err(|_| format!("bad base `{z}`"))?;
            BallCandidate::Exponential(vec![C::new(z, 0.0); kind.abelian_rank()])
        }
        Some(("noise", seed)) => BallCandidate::Noise {
            seed: seed.parse().map_err(|_| format!("bad seed `{seed}`"))?,
            amplitude: 0.5,
            center: C::new(1.0, 0.0),
        },
        _ => return Err("candidate must be exp:Z or noise:SEED".into()),
    };
    let report = dichotomy_experiment(kind, &radii, &eq, |b| cand.build(b)).map_err(err)?;
    let rows: Vec<_> = report
        .rows
        .iter()
        .map(|r| json!({ "radius": r.radius, "sup_f": r.sup_f, "delta": r.delta, "distance": r.fit.distance }))
        .collect();
    Ok(json!({ "rows": rows, "growth": report.growth.to_string() }).to_string())
}

/// `|f(xy) + χ(y)f(σ(y)x) - 2f(x)g(y)|` for a perturbed exact pair, as a
/// JSON object `{labels, cells, delta}`.
#[wasm_bindgen]
pub fn residual_heatmap(group: &str, sigma: &str, m: i32, epsilon: f64, seed: u32) -> Result<String, JsError> {
    residual_heatmap_json(group, sigma, m, epsilon, seed.into()).map_err(|e| JsError::new(&e))
}

/// Stability audit rows for each comma-separated ε.
#[wasm_bindgen]
pub fn audit_sweep(group: &str, sigma: &str, m: i32, epsilons: &str, seed: u32) -> Result<String, JsError> {
    audit_sweep_json(group, sigma, m, epsilons, seed.into()).map_err(|e| JsError::new(&e))
}

/// Sup norm, residual and distance to the closed-form family per radius.
#[wasm_bindgen]
pub fn dichotomy_curve(
    ball: &str,
    radii: &str,
    equation: &str,
    sigma: &str,
    candidate: &str,
) -> Result<String, JsError> {
    dichotomy_curve_json(ball, radii, equation, sigma, candidate).map_err(|e| JsError::new(&e))
}

/// Number of multiplicative functions on a catalog group, including zero,
/// for filling the page's menus.
#[wasm_bindgen]
pub fn multiplicative_count(group: &str) -> Result<u32, JsError> {
    let g = FiniteGroup::catalog(group).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(enumerate_multiplicative(&g).len() as u32)
}
