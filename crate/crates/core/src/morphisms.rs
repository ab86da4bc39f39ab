//! Involutive morphisms, characters, multiplicative functions and additive maps.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::function::{parse_value_lines, GroupFunction, C};
use crate::groups::{BallDomain, Domain, FiniteGroup, GroupElement, GroupKind, IDENTITY};
use crate::report::fmt_f64;
use crate::roots::RootOfUnity;
use crate::tolerances::CHARACTER_TOL;

/// Default cap on partial extensions tried while searching involutions.
pub const DEFAULT_SEARCH_BUDGET: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MorphismError {
    #[error("map has {found} entries but the domain has {expected} elements")]
    LengthMismatch { expected: usize, found: usize },
    #[error("map is not involutive at element {0}")]
    NotInvolutive(GroupElement),
    #[error("map breaks the {law} law at ({x}, {y})")]
    LawViolated { law: &'static str, x: GroupElement, y: GroupElement },
    #[error("involution search exceeded its budget of {0} extensions")]
    BudgetExceeded(usize),
    #[error("character values are not multiplicative at ({0}, {1})")]
    NotMultiplicative(GroupElement, GroupElement),
    #[error("character vanishes at element {0}")]
    Vanishes(GroupElement),
    #[error("character fails chi(x sigma(x)) = 1 at x = {0}")]
    Incompatible(GroupElement),
    #[error("{0}")]
    Unsupported(String),
    #[error("malformed morphism file: {0}")]
    Parse(String),
}

/// Which product law a map is asked to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphismLaw {
    /// `σ(xy) = σ(x)σ(y)`
    Automorphism,
    /// `σ(xy) = σ(y)σ(x)`
    AntiAutomorphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvolutionKind {
    Automorphism,
    AntiAutomorphism,
    Identity,
    Inversion,
}

/// A self-inverse map of the domain that preserves or reverses products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    map: Vec<GroupElement>,
    kind: InvolutionKind,
    homomorphic: bool,
    antihomomorphic: bool,
}

impl Involution {
    /// Validates `σ∘σ = id` and the product law implied by `kind`.
    ///
    /// On balls the law is only checked on pairs whose products stay inside.
    pub fn new<D: Domain + ?Sized>(
        domain: &D,
        map: Vec<GroupElement>,
        kind: InvolutionKind,
    ) -> Result<Self, MorphismError> {
        let n = domain.size();
        if map.len() != n {
            return Err(MorphismError::LengthMismatch { expected: n, found: map.len() });
        }
        if let Some(x) = (0..n).find(|&x| map[x] >= n || map[map[x]] != x) {
            return Err(MorphismError::NotInvolutive(x));
        }
        let homomorphic = law_witness(domain, &map, MorphismLaw::Automorphism);
        let antihomomorphic = law_witness(domain, &map, MorphismLaw::AntiAutomorphism);
        let required = match kind {
            InvolutionKind::Automorphism | InvolutionKind::Identity => {
                homomorphic.map(|(x, y)| ("automorphism", x, y))
            }
            InvolutionKind::AntiAutomorphism | InvolutionKind::Inversion => {
                antihomomorphic.map(|(x, y)| ("anti-automorphism", x, y))
            }
        };
        if let Some((law, x, y)) = required {
            return Err(MorphismError::LawViolated { law, x, y });
        }
        if kind == InvolutionKind::Identity && (0..n).any(|x| map[x] != x) {
            return Err(MorphismError::Unsupported("identity kind on a non-identity map".into()));
        }
        if kind == InvolutionKind::Inversion && (0..n).any(|x| map[x] != domain.inv(x)) {
            return Err(MorphismError::Unsupported("inversion kind on a non-inversion map".into()));
        }
        Ok(Self {
            map,
            kind,
            homomorphic: homomorphic.is_none(),
            antihomomorphic: antihomomorphic.is_none(),
        })
    }

    pub fn identity<D: Domain + ?Sized>(domain: &D) -> Self {
        Self::new(domain, (0..domain.size()).collect(), InvolutionKind::Identity)
            .expect("identity is an involutive automorphism")
    }

    pub fn inversion<D: Domain + ?Sized>(domain: &D) -> Self {
        Self::new(domain, (0..domain.size()).map(|x| domain.inv(x)).collect(), InvolutionKind::Inversion)
            .expect("inversion is an involutive anti-automorphism")
    }

    /// The automorphism inverting every generator: `x ↦ -x` on `Z^d`,
    /// `(a,b,c) ↦ (-a,-b,c)` on the Heisenberg group, and letter inversion
    /// on free groups.
    pub fn negation(ball: &BallDomain) -> Result<Self, MorphismError> {
        let kind = ball.kind();
        let map = ball
            .map_forms(|e| match kind {
                GroupKind::IntegerLattice(_) => e.iter().map(|c| -c).collect(),
                GroupKind::DiscreteHeisenberg => vec![-e[0], -e[1], e[2]],
                GroupKind::FreeGroup(_) => e.iter().map(|l| -l).collect(),
            })
            .map_err(|e| MorphismError::Unsupported(e.to_string()))?;
        Self::new(ball, map, InvolutionKind::Automorphism)
    }

    #[inline]
    pub fn apply(&self, x: GroupElement) -> GroupElement {
        self.map[x]
    }

    pub fn map(&self) -> &[GroupElement] {
        &self.map
    }

    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }

    /// `σ(xy) = σ(x)σ(y)` holds on the domain.
    pub fn is_homomorphism(&self) -> bool {
        self.homomorphic
    }

    /// `σ(xy) = σ(y)σ(x)` holds on the domain.
    pub fn is_antihomomorphism(&self) -> bool {
        self.antihomomorphic
    }

    pub fn is_inversion<D: Domain + ?Sized>(&self, domain: &D) -> bool {
        (0..domain.size()).all(|x| self.map[x] == domain.inv(x))
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Morphism file: one `index → index` line per element.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, y) in self.map.iter().enumerate() {
            let _ = writeln!(out, "{x} → {y}");
        }
        out
    }

    /// Reads a morphism file; the kind is inferred from the laws the map satisfies.
    pub fn from_text<D: Domain + ?Sized>(domain: &D, text: &str) -> Result<Self, MorphismError> {
        let mut map = vec![usize::MAX; domain.size()];
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (l, r) = line
                .split_once('→')
                .or_else(|| line.split_once("->"))
                .ok_or_else(|| MorphismError::Parse(format!("missing arrow in `{line}`")))?;
            let parse = |s: &str| {
                s.trim().parse::<usize>().map_err(|_| MorphismError::Parse(format!("bad index in `{line}`")))
            };
            let (x, y) = (parse(l)?, parse(r)?);
            if x >= map.len() {
                return Err(MorphismError::Parse(format!("index {x} out of range")));
            }
            map[x] = y;
        }
        if map.contains(&usize::MAX) {
            return Err(MorphismError::Parse("map does not cover every element".into()));
        }
        let identity = map.iter().enumerate().all(|(i, &x)| i == x);
        let inversion = map.iter().enumerate().all(|(i, &x)| x == domain.inv(i));
        let kind = if identity {
            InvolutionKind::Identity
        } else if inversion {
            InvolutionKind::Inversion
        } else if law_witness(domain, &map, MorphismLaw::Automorphism).is_none() {
            InvolutionKind::Automorphism
        } else {
            InvolutionKind::AntiAutomorphism
        };
        Self::new(domain, map, kind)
    }
}

/// First pair `(x, y)` breaking the law, if any.
fn law_witness<D: Domain + ?Sized>(
    domain: &D,
    map: &[GroupElement],
    law: MorphismLaw,
) -> Option<(GroupElement, GroupElement)> {
    let n = domain.size();
    for x in 0..n {
        for y in 0..n {
            let Some(xy) = domain.mul(x, y) else { continue };
            let image = match law {
                MorphismLaw::Automorphism => domain.mul(map[x], map[y]),
                MorphismLaw::AntiAutomorphism => domain.mul(map[y], map[x]),
            };
            match image {
                Some(v) if v == map[xy] => {}
                Some(_) => return Some((x, y)),
                None if domain.is_closed() => return Some((x, y)),
                None => {}
            }
        }
    }
    None
}

/// All involutions of `group` obeying `law`, found by assigning images to a
/// generating set and extending along the Cayley graph.
///
/// Identity (for automorphisms) or inversion (for anti-automorphisms) comes
/// first; the rest are sorted by their element maps.
pub fn enumerate_involutions(
    group: &FiniteGroup,
    law: MorphismLaw,
) -> Result<Vec<Involution>, MorphismError> {
    enumerate_involutions_with_budget(group, law, DEFAULT_SEARCH_BUDGET)
}

pub fn enumerate_involutions_with_budget(
    group: &FiniteGroup,
    law: MorphismLaw,
    budget: usize,
) -> Result<Vec<Involution>, MorphismError> {
    let gens = group.generators();
    let n = group.order();
    let candidates: Vec<Vec<GroupElement>> = gens
        .iter()
        .map(|&g| {
            let ord = group.element_order(g);
            (0..n).filter(|&x| group.element_order(x) == ord).collect()
        })
        .collect();

    let mut found = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    let mut spent = 0usize;
    search(group, law, &gens, &candidates, &mut images, &mut spent, budget, &mut found)?;

    let mut out = Vec::new();
    for map in found {
        if (0..n).any(|x| map[map[x]] != x) {
            continue;
        }
        let kind = if map.iter().enumerate().all(|(i, &x)| i == x) {
            InvolutionKind::Identity
        } else if map.iter().enumerate().all(|(i, &x)| x == group.inverse(i)) {
            InvolutionKind::Inversion
        } else {
            match law {
                MorphismLaw::Automorphism => InvolutionKind::Automorphism,
                MorphismLaw::AntiAutomorphism => InvolutionKind::AntiAutomorphism,
            }
        };
        // the Inversion kind asserts the anti law; on abelian groups it is
        // also found while searching automorphisms
        let kind = match (kind, law) {
            (InvolutionKind::Inversion, MorphismLaw::Automorphism) => InvolutionKind::Automorphism,
            (InvolutionKind::Identity, MorphismLaw::AntiAutomorphism) => InvolutionKind::AntiAutomorphism,
            (k, _) => k,
        };
        out.push(Involution::new(group, map, kind)?);
    }
    let special = match law {
        MorphismLaw::Automorphism => InvolutionKind::Identity,
        MorphismLaw::AntiAutomorphism => InvolutionKind::Inversion,
    };
    out.sort_by(|a, b| (a.kind != special, &a.map).cmp(&(b.kind != special, &b.map)));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    group: &FiniteGroup,
    law: MorphismLaw,
    gens: &[GroupElement],
    candidates: &[Vec<GroupElement>],
    images: &mut Vec<GroupElement>,
    spent: &mut usize,
    budget: usize,
    found: &mut Vec<Vec<GroupElement>>,
) -> Result<(), MorphismError> {
    let k = images.len();
    if k > 0 {
        *spent += 1;
        if *spent > budget {
            return Err(MorphismError::BudgetExceeded(budget));
        }
        let Some(partial) = extend(group, law, &gens[..k], images) else {
            return Ok(());
        };
        if k == gens.len() {
            let mut seen = vec![false; group.order()];
            if partial.iter().all(|&v| v != usize::MAX && !std::mem::replace(&mut seen[v], true)) {
                found.push(partial);
            }
            return Ok(());
        }
    } else if gens.is_empty() {
        found.push(vec![IDENTITY]);
        return Ok(());
    }
    for &img in &candidates[k] {
        images.push(img);
        search(group, law, gens, candidates, images, spent, budget, found)?;
        images.pop();
    }
    Ok(())
}

/// Extends generator images over the generated subgroup; `None` on conflict
/// or when two elements collide.
fn extend(
    group: &FiniteGroup,
    law: MorphismLaw,
    gens: &[GroupElement],
    images: &[GroupElement],
) -> Option<Vec<GroupElement>> {
    let n = group.order();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[IDENTITY] = IDENTITY;
    used[IDENTITY] = true;
    let mut queue = VecDeque::from([IDENTITY]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = group.op(x, g);
            let value = match law {
                MorphismLaw::Automorphism => group.op(map[x], img),
                MorphismLaw::AntiAutomorphism => group.op(img, map[x]),
            };
            if map[y] == usize::MAX {
                if std::mem::replace(&mut used[value], true) {
                    return None;
                }
                map[y] = value;
                queue.push_back(y);
            } else if map[y] != value {
                return None;
            }
        }
    }
    Some(map)
}

/// A homomorphism into the nonzero complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    values: GroupFunction,
    exact: Option<Vec<RootOfUnity>>,
    unitary: bool,
}

impl Character {
    pub fn trivial<D: Domain + ?Sized>(domain: &D) -> Self {
        let n = domain.size();
        Self {
            values: GroupFunction::constant(n, C::new(1.0, 0.0)),
            exact: Some(vec![RootOfUnity::ONE; n]),
            unitary: true,
        }
    }

    fn from_exact(exact: Vec<RootOfUnity>) -> Self {
        let values = GroupFunction::from_fn(exact.len(), |i| exact[i].to_complex());
        Self { values, exact: Some(exact), unitary: true }
    }

    /// `x ↦ z_1^{x_1}···z_d^{x_d}` over the domain's abelian coordinates.
    /// Unitary iff every `|z_i| = 1`.
    pub fn exponential<D: Domain + ?Sized>(domain: &D, z: &[C]) -> Result<Self, MorphismError> {
        if z.len() != domain.abelian_rank() {
            return Err(MorphismError::Unsupported(format!(
                "expected {} parameters, got {}",
                domain.abelian_rank(),
                z.len()
            )));
        }
        if z.iter().any(|v| v.norm() == 0.0) {
            return Err(MorphismError::Vanishes(IDENTITY));
        }
        let values = GroupFunction::from_fn(domain.size(), |x| {
            let coords = domain.abelian_coords(x);
            coords.iter().zip(z).fold(C::new(1.0, 0.0), |acc, (&k, &zi)| acc * zi.powi(k as i32))
        });
        let unitary = z.iter().all(|v| (v.norm() - 1.0).abs() <= CHARACTER_TOL);
        Ok(Self { values, exact: None, unitary })
    }

    /// Wraps externally supplied values after checking multiplicativity on
    /// every in-domain pair (tolerance relative to the product magnitude).
    pub fn from_values<D: Domain + ?Sized>(domain: &D, values: GroupFunction) -> Result<Self, MorphismError> {
        values.check_domain(domain).map_err(|_| MorphismError::LengthMismatch {
            expected: domain.size(),
            found: values.len(),
        })?;
        if let Some(x) = (0..values.len()).find(|&x| values[x].norm() == 0.0) {
            return Err(MorphismError::Vanishes(x));
        }
        let n = domain.size();
        for x in 0..n {
            for y in 0..n {
                if let Some(xy) = domain.mul(x, y) {
                    let prod = values[x] * values[y];
                    if (values[xy] - prod).norm() > CHARACTER_TOL * prod.norm().max(1.0) {
                        return Err(MorphismError::NotMultiplicative(x, y));
                    }
                }
            }
        }
        let unitary = values.values().iter().all(|v| (v.norm() - 1.0).abs() <= CHARACTER_TOL);
        Ok(Self { values, exact: None, unitary })
    }

    pub fn values(&self) -> &GroupFunction {
        &self.values
    }

    pub fn exact(&self) -> Option<&[RootOfUnity]> {
        self.exact.as_deref()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    #[inline]
    pub fn at(&self, x: GroupElement) -> C {
        self.values[x]
    }

    pub fn is_trivial(&self) -> bool {
        match &self.exact {
            Some(e) => e.iter().all(RootOfUnity::is_one),
            None => self.values.values().iter().all(|v| (v - C::new(1.0, 0.0)).norm() <= CHARACTER_TOL),
        }
    }

    /// Character file: one `re im` line per element.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.values.values() {
            let _ = writeln!(out, "{} {}", fmt_f64(v.re), fmt_f64(v.im));
        }
        out
    }

    pub fn from_text<D: Domain + ?Sized>(domain: &D, text: &str) -> Result<Self, MorphismError> {
        let values = parse_value_lines(text.lines().filter(|l| !l.trim().is_empty()))
            .map_err(|e| MorphismError::Parse(e.to_string()))?;
        let values = GroupFunction::new(values).map_err(|e| MorphismError::Parse(e.to_string()))?;
        Self::from_values(domain, values)
    }
}

/// All characters of a finite group, via the abelianization.
///
/// Characters are listed lexicographically by the exponents assigned to the
/// abelianization's generators; on `Z_n` this gives `k ↦ exp(2πi·jk/n)` for
/// `j = 0..n`.
pub fn enumerate_characters(group: &FiniteGroup) -> Vec<Character> {
    let (quotient, projection) = group.abelianization();
    let gens = quotient.generators();
    let orders: Vec<u64> = gens.iter().map(|&g| quotient.element_order(g) as u64).collect();
    let mut out = Vec::new();
    let mut exponents = vec![0u64; gens.len()];
    loop {
        let images: Vec<RootOfUnity> =
            exponents.iter().zip(&orders).map(|(&j, &o)| RootOfUnity::new(j as i64, o)).collect();
        if let Some(chi) = extend_character(&quotient, &gens, &images) {
            let lifted = projection.iter().map(|&p| chi[p]).collect();
            out.push(Character::from_exact(lifted));
        }
        // odometer, first generator most significant
        let mut i = gens.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exponents[i] += 1;
            if exponents[i] < orders[i] {
                break;
            }
            exponents[i] = 0;
        }
    }
}

fn extend_character(
    group: &FiniteGroup,
    gens: &[GroupElement],
    images: &[RootOfUnity],
) -> Option<Vec<RootOfUnity>> {
    let n = group.order();
    let mut values: Vec<Option<RootOfUnity>> = vec![None; n];
    values[IDENTITY] = Some(RootOfUnity::ONE);
    let mut queue = VecDeque::from([IDENTITY]);
    while let Some(x) = queue.pop_front() {
        let vx = values[x].unwrap();
        for (&g, &img) in gens.iter().zip(images) {
            let y = group.op(x, g);
            let v = vx * img;
            match values[y] {
                None => {
                    values[y] = Some(v);
                    queue.push_back(y);
                }
                Some(w) if w != v => return None,
                Some(_) => {}
            }
        }
    }
    values.into_iter().collect()
}

/// Characters with `χ(x·σ(x)) = 1` for every `x`.
///
/// Exact root-of-unity comparison when available; otherwise tolerance
/// [`CHARACTER_TOL`]. The test uses `χ(x)χ(σ(x))`, which equals `χ(xσ(x))`
/// and stays defined on balls.
pub fn compatible_characters<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    characters: &[Character],
) -> Vec<Character> {
    characters
        .iter()
        .filter(|chi| compatibility_witness(domain, sigma, chi).is_none())
        .cloned()
        .collect()
}

/// First `x` with `χ(x·σ(x)) ≠ 1`.
pub fn compatibility_witness<D: Domain + ?Sized>(
    domain: &D,
    sigma: &Involution,
    chi: &Character,
) -> Option<GroupElement> {
    (0..domain.size()).find(|&x| match chi.exact() {
        Some(e) => !(e[x] * e[sigma.apply(x)]).is_one(),
        None => (chi.at(x) * chi.at(sigma.apply(x)) - C::new(1.0, 0.0)).norm() > CHARACTER_TOL,
    })
}

/// `m(xy) = m(x)m(y)`; on a group either identically zero or a character.
#[derive(Debug, Clone, PartialEq)]
pub enum MultiplicativeFunction {
    Zero(usize),
    Nonzero(Character),
}

impl MultiplicativeFunction {
    pub fn values(&self) -> GroupFunction {
        match self {
            MultiplicativeFunction::Zero(n) => GroupFunction::zeros(*n),
            MultiplicativeFunction::Nonzero(chi) => chi.values().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MultiplicativeFunction::Zero(_))
    }

    pub fn len(&self) -> usize {
        match self {
            MultiplicativeFunction::Zero(n) => *n,
            MultiplicativeFunction::Nonzero(chi) => chi.values().len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn at(&self, x: GroupElement) -> C {
        match self {
            MultiplicativeFunction::Zero(_) => C::new(0.0, 0.0),
            MultiplicativeFunction::Nonzero(chi) => chi.at(x),
        }
    }
}

/// The zero function followed by every character.
pub fn enumerate_multiplicative(group: &FiniteGroup) -> Vec<MultiplicativeFunction> {
    std::iter::once(MultiplicativeFunction::Zero(group.order()))
        .chain(enumerate_characters(group).into_iter().map(MultiplicativeFunction::Nonzero))
        .collect()
}

/// `a(x) = Σ c_i·x_i` over the domain's abelian coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveMap {
    coefficients: Vec<C>,
}

impl AdditiveMap {
    pub fn new(coefficients: Vec<C>) -> Self {
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self { coefficients: Vec::new() }
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval<D: Domain + ?Sized>(&self, domain: &D, x: GroupElement) -> C {
        if self.coefficients.is_empty() {
            return C::new(0.0, 0.0);
        }
        let coords = domain.abelian_coords(x);
        coords.iter().zip(&self.coefficients).map(|(&k, c)| c * k as f64).sum()
    }

    pub fn values<D: Domain + ?Sized>(&self, domain: &D) -> Result<GroupFunction, MorphismError> {
        if !self.coefficients.is_empty() && self.coefficients.len() != domain.abelian_rank() {
            return Err(MorphismError::Unsupported(format!(
                "additive map has {} coefficients, domain rank is {}",
                self.coefficients.len(),
                domain.abelian_rank()
            )));
        }
        Ok(GroupFunction::from_fn(domain.size(), |x| self.eval(domain, x)))
    }
}

/// Basis of the additive maps: empty on finite groups, coordinate forms on
/// lattices, `(a,b,c) ↦ a, b` on the Heisenberg group and exponent sums on
/// free groups.
pub fn additive_maps_basis<D: Domain + ?Sized>(domain: &D) -> Vec<AdditiveMap> {
    let r = domain.abelian_rank();
    (0..r)
        .map(|i| {
            let mut c = vec![C::new(0.0, 0.0); r];
            c[i] = C::new(1.0, 0.0);
            AdditiveMap::new(c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::CATALOG;

    /// Brute force over all identity-preserving bijections.
    fn brute_force_involutions(g: &FiniteGroup, law: MorphismLaw) -> Vec<Vec<usize>> {
        let n = g.order();
        let mut rest: Vec<usize> = (1..n).collect();
        let mut out = Vec::new();
        permute(&mut rest, 0, &mut |perm| {
            let mut map = vec![0];
            map.extend_from_slice(perm);
            let ok_law = (0..n).all(|x| {
                (0..n).all(|y| {
                    let lhs = map[g.op(x, y)];
                    match law {
                        MorphismLaw::Automorphism => lhs == g.op(map[x], map[y]),
                        MorphismLaw::AntiAutomorphism => lhs == g.op(map[y], map[x]),
                    }
                })
            });
            if ok_law && (0..n).all(|x| map[map[x]] == x) {
                out.push(map);
            }
        });
        out.sort();
        out
    }

    fn permute(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            visit(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, visit);
            v.swap(k, i);
        }
    }

    #[test]
    fn involution_counts() {
        let z4 = FiniteGroup::cyclic(4);
        let autos = enumerate_involutions(&z4, MorphismLaw::Automorphism).unwrap();
        assert_eq!(autos.len(), 2);
        assert_eq!(autos[0].kind(), InvolutionKind::Identity);
        assert_eq!(autos[1].map(), &[0, 3, 2, 1]);

        let s3 = FiniteGroup::symmetric(3);
        let autos = enumerate_involutions(&s3, MorphismLaw::Automorphism).unwrap();
        assert_eq!(autos.len(), 4);
        let antis = enumerate_involutions(&s3, MorphismLaw::AntiAutomorphism).unwrap();
        assert_eq!(antis.len(), 4);
        assert_eq!(antis[0].kind(), InvolutionKind::Inversion);
        assert!(antis.iter().all(|s| s.is_antihomomorphism() && !s.is_homomorphism()));
    }

    #[test]
    fn involutions_match_brute_force() {
        for name in ["Z1", "Z2", "Z4", "Z6", "Z2xZ2", "S3", "D4", "Q8", "Z2xZ4"] {
            let g = FiniteGroup::catalog(name).unwrap();
            for law in [MorphismLaw::Automorphism, MorphismLaw::AntiAutomorphism] {
                let mut got: Vec<Vec<usize>> =
                    enumerate_involutions(&g, law).unwrap().iter().map(|s| s.map().to_vec()).collect();
                got.sort();
                assert_eq!(got, brute_force_involutions(&g, law), "{name} {law:?}");
            }
        }
    }

    #[test]
    fn involution_laws_hold_exhaustively() {
        for name in CATALOG {
            let g = FiniteGroup::catalog(name).unwrap();
            for law in [MorphismLaw::Automorphism, MorphismLaw::AntiAutomorphism] {
                let invs = enumerate_involutions(&g, law).unwrap();
                let special = match law {
                    MorphismLaw::Automorphism => Involution::identity(&g),
                    MorphismLaw::AntiAutomorphism => Involution::inversion(&g),
                };
                assert_eq!(invs[0].map(), special.map(), "{name}");
                for s in &invs {
                    for x in 0..g.order() {
                        assert_eq!(s.apply(s.apply(x)), x);
                        for y in 0..g.order() {
                            let expect = match law {
                                MorphismLaw::Automorphism => g.op(s.apply(x), s.apply(y)),
                                MorphismLaw::AntiAutomorphism => g.op(s.apply(y), s.apply(x)),
                            };
                            assert_eq!(s.apply(g.op(x, y)), expect);
                        }
                    }
                }
                if law == MorphismLaw::Automorphism {
                    let inversion_is_auto = invs.iter().any(|s| s.is_inversion(&g));
                    assert_eq!(inversion_is_auto, g.is_abelian(), "{name}");
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s4 = FiniteGroup::symmetric(4);
        let err = enumerate_involutions_with_budget(&s4, MorphismLaw::Automorphism, 3).unwrap_err();
        assert_eq!(err, MorphismError::BudgetExceeded(3));
    }

    #[test]
    fn character_counts() {
        let z4 = FiniteGroup::cyclic(4);
        let chars = enumerate_characters(&z4);
        assert_eq!(chars.len(), 4);
        for (m, chi) in chars.iter().enumerate() {
            for k in 0..4 {
                let expected = C::new(0.0, 1.0).powi((m * k) as i32);
                assert!((chi.at(k) - expected).norm() < 1e-15);
            }
        }
        assert_eq!(enumerate_characters(&FiniteGroup::symmetric(3)).len(), 2);
        assert_eq!(enumerate_characters(&FiniteGroup::quaternion()).len(), 4);
    }

    #[test]
    fn characters_are_exactly_multiplicative() {
        for name in CATALOG {
            let g = FiniteGroup::catalog(name).unwrap();
            let chars = enumerate_characters(&g);
            assert_eq!(chars.len(), g.abelianization().0.order());
            assert_eq!(enumerate_multiplicative(&g).len(), 1 + chars.len());
            for chi in &chars {
                let e = chi.exact().unwrap();
                assert!(chi.is_unitary());
                for x in 0..g.order() {
                    assert!((chi.at(x).norm() - 1.0).abs() < 1e-15);
                    for y in 0..g.order() {
                        assert_eq!(e[g.op(x, y)], e[x] * e[y]);
                    }
                }
            }
        }
    }

    #[test]
    fn compatibility_filter() {
        let z4 = FiniteGroup::cyclic(4);
        let chars = enumerate_characters(&z4);
        let inv = Involution::inversion(&z4);
        assert_eq!(compatible_characters(&z4, &inv, &chars), chars);
        let id = Involution::identity(&z4);
        let kept = compatible_characters(&z4, &id, &chars);
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0], chars[0]);
        assert_eq!(kept[1], chars[2]);
        assert_eq!(compatibility_witness(&z4, &id, &chars[1]), Some(1));

        let z2 = FiniteGroup::cyclic(2);
        let chars = enumerate_characters(&z2);
        assert_eq!(compatible_characters(&z2, &Involution::identity(&z2), &chars).len(), 2);

        for name in CATALOG {
            let g = FiniteGroup::catalog(name).unwrap();
            let chars = enumerate_characters(&g);
            assert_eq!(compatible_characters(&g, &Involution::inversion(&g), &chars), chars);
        }
    }

    #[test]
    fn multiplicative_lists() {
        assert_eq!(enumerate_multiplicative(&FiniteGroup::cyclic(2)).len(), 3);
        assert_eq!(enumerate_multiplicative(&FiniteGroup::symmetric(3)).len(), 3);
        let z1 = enumerate_multiplicative(&FiniteGroup::cyclic(1));
        assert_eq!(z1.len(), 2);
        assert!(z1[0].is_zero());
        assert_eq!(z1[1].at(0), C::new(1.0, 0.0));
    }

    #[test]
    fn additive_bases() {
        assert!(additive_maps_basis(&FiniteGroup::cyclic(6)).is_empty());
        let z2 = BallDomain::new(GroupKind::IntegerLattice(2), 3).unwrap();
        let basis = additive_maps_basis(&z2);
        assert_eq!(basis.len(), 2);
        let x = z2.find(&[2, -1]).unwrap();
        assert_eq!(basis[0].eval(&z2, x), C::new(2.0, 0.0));
        assert_eq!(basis[1].eval(&z2, x), C::new(-1.0, 0.0));

        let h = BallDomain::new(GroupKind::DiscreteHeisenberg, 4).unwrap();
        let basis = additive_maps_basis(&h);
        assert_eq!(basis.len(), 2);
        // additivity on every in-ball pair, and the center is killed
        let z = h.find(&[0, 0, 1]).unwrap();
        for a in &basis {
            assert_eq!(a.eval(&h, z), C::new(0.0, 0.0));
            for x in 0..h.size() {
                for y in 0..h.size() {
                    if let Some(xy) = h.mul(x, y) {
                        assert_eq!(a.eval(&h, xy), a.eval(&h, x) + a.eval(&h, y));
                    }
                }
            }
        }
        // the central coordinate is a commutator: [x, y] = (0, 0, 1)
        let x = h.find(&[1, 0, 0]).unwrap();
        let y = h.find(&[0, 1, 0]).unwrap();
        let comm = h.mul_all(&[x, y, h.inv(x), h.inv(y)]).unwrap();
        assert_eq!(comm, z);
    }

    #[test]
    fn ball_involutions() {
        let h = BallDomain::new(GroupKind::DiscreteHeisenberg, 3).unwrap();
        let neg = Involution::negation(&h).unwrap();
        assert!(neg.is_homomorphism());
        let inv = Involution::inversion(&h);
        assert!(inv.is_antihomomorphism());
        assert!(!inv.is_homomorphism());

        let f2 = BallDomain::new(GroupKind::FreeGroup(2), 3).unwrap();
        assert!(Involution::negation(&f2).unwrap().is_homomorphism());
    }

    #[test]
    fn lattice_exponentials() {
        let b = BallDomain::new(GroupKind::IntegerLattice(1), 3).unwrap();
        let chi = Character::exponential(&b, &[C::new(2.0, 0.0)]).unwrap();
        assert!(!chi.is_unitary());
        assert_eq!(chi.at(b.find(&[-3]).unwrap()), C::new(0.125, 0.0));
        let u = Character::exponential(&b, &[C::from_polar(1.0, 0.3)]).unwrap();
        assert!(u.is_unitary());
        assert!(Character::exponential(&b, &[C::new(0.0, 0.0)]).is_err());
        let neg = Involution::negation(&b).unwrap();
        assert!(compatibility_witness(&b, &neg, &chi).is_none());
        assert!(compatibility_witness(&b, &Involution::identity(&b), &u).is_some());
    }

    #[test]
    fn files_round_trip() {
        let s3 = FiniteGroup::symmetric(3);
        let antis = enumerate_involutions(&s3, MorphismLaw::AntiAutomorphism).unwrap();
        let back = Involution::from_text(&s3, &antis[2].to_text()).unwrap();
        assert_eq!(back.map(), antis[2].map());
        assert!(back.is_antihomomorphism());
        assert!(Involution::from_text(&s3, "0 -> 1\n").is_err());

        let chars = enumerate_characters(&FiniteGroup::cyclic(4));
        let back = Character::from_text(&FiniteGroup::cyclic(4), &chars[1].to_text()).unwrap();
        assert_eq!(back.values(), chars[1].values());
        let bad = "1 0\n0 1\n1 0\n1 0\n";
        assert!(Character::from_text(&FiniteGroup::cyclic(4), bad).is_err());
    }
}
