//! Turning selector strings into groups, involutions, characters and pairs.

use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use feqlab::families::{family_case_ii, standard_half_trace, SolutionPair};
use feqlab::morphisms::{
    enumerate_characters, enumerate_involutions, enumerate_multiplicative, Character, Involution, MorphismLaw,
    MultiplicativeFunction,
};
use feqlab::{BallDomain, FiniteGroup, GroupKind, C};

use crate::CliError;

#[derive(Args, Debug, Clone)]
pub struct DomainArgs {
    /// Catalog group, e.g. Z4, Z2xZ4, S3, D4, Q8.
    #[arg(long)]
    pub group: Option<String>,
    /// Cayley table file, one row of element indices per line.
    #[arg(long)]
    pub group_file: Option<PathBuf>,
    /// Infinite group whose word-length ball is used: Z^d, H3 or Fr.
    #[arg(long, conflicts_with_all = ["group", "group_file"])]
    pub ball: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
    /// id, inv, aut:K or anti:K on finite groups; id, neg or inv on balls.
    #[arg(long, default_value = "inv")]
    pub sigma: String,
    /// Morphism file (`x → σ(x)` per line); overrides --sigma.
    #[arg(long)]
    pub sigma_file: Option<PathBuf>,
    /// Index into the character list on finite groups; comma-separated
    /// exponential parameters such as `1,0.6+0.8i` on balls.
    #[arg(long)]
    pub chi: Option<String>,
    /// Character file, one value per line; overrides --chi.
    #[arg(long)]
    pub chi_file: Option<PathBuf>,
}

pub enum Space {
    Finite(FiniteGroup),
    Ball(BallDomain),
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))
}

pub fn complex_list(s: &str) -> Result<Vec<C>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| C::from_str(t).map_err(|_| CliError::invalid(format!("`{t}` is not a complex number"))))
        .collect()
}

pub fn complex(s: &str) -> Result<C, CliError> {
    match complex_list(s)?.as_slice() {
        [z] => Ok(*z),
        _ => Err(CliError::invalid(format!("expected one complex number, got `{s}`"))),
    }
}

fn index(s: &str, what: &str, len: usize) -> Result<usize, CliError> {
    let k: usize = s.trim().parse().map_err(|_| CliError::invalid(format!("{what} selector `{s}` is not an index")))?;
    if k >= len {
        return Err(CliError::invalid(format!("{what} index {k} out of range (0..{len})")));
    }
    Ok(k)
}

impl DomainArgs {
    pub fn space(&self) -> Result<Space, CliError> {
        match &self.ball {
            Some(kind) => {
                let kind = GroupKind::parse(kind)
                    .ok_or_else(|| CliError::invalid(format!("unknown ball group `{kind}` (use Z^d, H3 or Fr)")))?;
                Ok(Space::Ball(BallDomain::new(kind, self.radius).map_err(CliError::invalid)?))
            }
            None => Ok(Space::Finite(self.finite()?)),
        }
    }

    pub fn finite(&self) -> Result<FiniteGroup, CliError> {
        if self.ball.is_some() {
            return Err(CliError::invalid("this command needs a finite group (--group or --group-file)"));
        }
        match (&self.group, &self.group_file) {
            (_, Some(path)) => {
                let name = path.file_stem().map_or("G".into(), |s| s.to_string_lossy().to_string());
                FiniteGroup::from_cayley_text(&name, &read(path)?).map_err(CliError::invalid)
            }
            (Some(name), None) => FiniteGroup::catalog(name).map_err(CliError::invalid),
            (None, None) => Err(CliError::invalid("missing --group")),
        }
    }

    pub fn finite_sigma(&self, group: &FiniteGroup) -> Result<Involution, CliError> {
        if let Some(path) = &self.sigma_file {
            return Involution::from_text(group, &read(path)?).map_err(CliError::invalid);
        }
        match self.sigma.as_str() {
            "id" => Ok(Involution::identity(group)),
            "inv" => Ok(Involution::inversion(group)),
            s => {
                let (law, k) = match s.split_once(':') {
                    Some(("aut", k)) => (MorphismLaw::Automorphism, k),
                    Some(("anti", k)) => (MorphismLaw::AntiAutomorphism, k),
                    _ => return Err(CliError::invalid(format!("unknown sigma selector `{s}`"))),
                };
                let all = enumerate_involutions(group, law).map_err(CliError::invalid)?;
                let k = index(k, "sigma", all.len())?;
                Ok(all[k].clone())
            }
        }
    }

    pub fn ball_sigma(&self, ball: &BallDomain) -> Result<Involution, CliError> {
        if let Some(path) = &self.sigma_file {
            return Involution::from_text(ball, &read(path)?).map_err(CliError::invalid);
        }
        match self.sigma.as_str() {
            "id" => Ok(Involution::identity(ball)),
            "inv" => Ok(Involution::inversion(ball)),
            "neg" => Involution::negation(ball).map_err(CliError::invalid),
            s => Err(CliError::invalid(format!("unknown sigma selector `{s}` for a ball (use id, neg or inv)"))),
        }
    }

    /// `default` is used when neither --chi nor --chi-file is given.
    pub fn finite_chi(&self, group: &FiniteGroup, default: Option<Character>) -> Result<Character, CliError> {
        if let Some(path) = &self.chi_file {
            return Character::from_text(group, &read(path)?).map_err(CliError::invalid);
        }
        match (&self.chi, default) {
            (None, Some(d)) => Ok(d),
            (sel, _) => {
                let all = enumerate_characters(group);
                let k = index(sel.as_deref().unwrap_or("0"), "chi", all.len())?;
                Ok(all[k].clone())
            }
        }
    }

    pub fn ball_chi(&self, ball: &BallDomain) -> Result<Character, CliError> {
        if let Some(path) = &self.chi_file {
            return Character::from_text(ball, &read(path)?).map_err(CliError::invalid);
        }
        match self.chi_params()? {
            p if p.is_empty() => Ok(Character::trivial(ball)),
            p => Character::exponential(ball, &p).map_err(CliError::invalid),
        }
    }

    /// Exponential parameters of χ on balls; empty means χ = 1.
    pub fn chi_params(&self) -> Result<Vec<C>, CliError> {
        complex_list(self.chi.as_deref().unwrap_or(""))
    }
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Pair file with `f` and `g` blocks; overrides --base.
    #[arg(long)]
    pub pair: Option<PathBuf>,
    /// Exact pair to start from: case-ii or half-trace (finite groups).
    #[arg(long, default_value = "case-ii")]
    pub base: String,
    /// Multiplicative m for case-ii: an index into the list of
    /// multiplicative functions (finite) or exponential parameters (ball).
    #[arg(long)]
    pub m: Option<String>,
    /// f(e) for case-ii.
    #[arg(long, default_value = "1")]
    pub fe: String,
}

impl PairArgs {
    pub fn load(&self) -> Result<Option<SolutionPair>, CliError> {
        match &self.pair {
            Some(path) => Ok(Some(SolutionPair::from_text(&read(path)?).map_err(CliError::invalid)?)),
            None => Ok(None),
        }
    }

    /// The character a half-trace base forces, if that base is selected.
    pub fn forced_chi(&self, group: &FiniteGroup) -> Result<Option<Character>, CliError> {
        if self.pair.is_some() || self.base != "half-trace" {
            return Ok(None);
        }
        let (_, det) = standard_half_trace(group)
            .ok_or_else(|| CliError::invalid(format!("{} has no 2-dimensional half-trace", group.name())))?;
        Ok(Some(det))
    }

    pub fn finite_pair(
        &self,
        group: &FiniteGroup,
        sigma: &Involution,
        chi: &Character,
    ) -> Result<SolutionPair, CliError> {
        if let Some(p) = self.load()? {
            return Ok(p);
        }
        match self.base.as_str() {
            "half-trace" => {
                let (g, det) = standard_half_trace(group)
                    .ok_or_else(|| CliError::invalid(format!("{} has no 2-dimensional half-trace", group.name())))?;
                if det.values().distance(chi.values()) > 1e-12 {
                    return Err(CliError::invalid("the half-trace solves the equation only with chi = det"));
                }
                Ok(SolutionPair::external(g.clone(), g))
            }
            "case-ii" => {
                let all = enumerate_multiplicative(group);
                let k = index(self.m.as_deref().unwrap_or("0"), "m", all.len())?;
                family_case_ii(group, &all[k], chi, sigma, complex(&self.fe)?).map_err(CliError::invalid)
            }
            b => Err(CliError::invalid(format!("unknown base `{b}` (use case-ii or half-trace)"))),
        }
    }

    pub fn ball_pair(&self, ball: &BallDomain, sigma: &Involution, chi: &Character) -> Result<SolutionPair, CliError> {
        if let Some(p) = self.load()? {
            return Ok(p);
        }
        if self.base != "case-ii" {
            return Err(CliError::invalid(format!("base `{}` is not available on balls", self.base)));
        }
        let params = complex_list(self.m.as_deref().unwrap_or(""))?;
        let m = if params.is_empty() {
            Character::trivial(ball)
        } else {
            Character::exponential(ball, &params).map_err(CliError::invalid)?
        };
        family_case_ii(ball, &MultiplicativeFunction::Nonzero(m), chi, sigma, complex(&self.fe)?)
            .map_err(CliError::invalid)
    }
}
