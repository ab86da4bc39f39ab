use clap::Args;
use feqlab::families::{character_pair, SolutionPair};
use feqlab::feq::EquationTag;
use feqlab::morphisms::{
    compatibility_witness, compatible_characters, enumerate_characters, enumerate_involutions,
    enumerate_multiplicative, Character, Involution, MorphismLaw,
};
use feqlab::report::{fmt_f64, CsvTable, Record};
use feqlab::solver::{
    anti_candidates, audit_anti_solution, completeness_check_with, enumerate_solutions, enumerate_solutions_with,
    SolverError,
};
use feqlab::stability::{
    delta_slope, dichotomy_experiment, growth_case_scan, perturb as perturb_pair, stability_audits, BallCandidate,
    BallEquation, BallSigma, DeltaChoice, NoiseShape, NoiseTarget, PerturbationConfig, PhaseSource,
};
use feqlab::groups::CATALOG;
use feqlab::{BallDomain, Domain, FiniteGroup, GroupKind};

use crate::select::{complex, complex_list, DomainArgs, PairArgs, Space};
use crate::{CliError, Output, OutputArgs};

const PASS: u8 = 0;
const FAILED: u8 = 2;

fn solver_error(e: SolverError) -> CliError {
    match e {
        SolverError::Rank(r) => CliError::ambiguous(r),
        e => CliError::invalid(e),
    }
}

fn check_compatible<D: Domain + ?Sized>(domain: &D, sigma: &Involution, chi: &Character) -> Result<(), CliError> {
    match compatibility_witness(domain, sigma, chi) {
        Some(x) => Err(CliError::invalid(format!("chi(x sigma(x)) != 1 at x = {x}; chi is not compatible with sigma"))),
        None => Ok(()),
    }
}

fn failed(what: &str) -> u8 {
    eprintln!("FAIL: {what}");
    FAILED
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    /// Describe one group instead of listing all.
    #[arg(long)]
    pub group: Option<String>,
    /// List the involutive automorphisms and anti-automorphisms.
    #[arg(long)]
    pub morphisms: bool,
    /// List the characters.
    #[arg(long)]
    pub characters: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn involutions(g: &FiniteGroup, law: MorphismLaw) -> Result<Vec<Involution>, CliError> {
    enumerate_involutions(g, law).map_err(CliError::invalid)
}

fn law_name(law: MorphismLaw) -> &'static str {
    match law {
        MorphismLaw::Automorphism => "aut",
        MorphismLaw::AntiAutomorphism => "anti",
    }
}

pub fn catalog(args: &CatalogArgs, out: &mut Output) -> Result<u8, CliError> {
    let Some(name) = &args.group else {
        let mut t = CsvTable::new(&["group", "order", "abelian", "involutive_aut", "involutive_anti", "characters"]);
        for &name in CATALOG {
            let g = FiniteGroup::catalog(name).map_err(CliError::invalid)?;
            let aut = involutions(&g, MorphismLaw::Automorphism)?.len();
            let anti = involutions(&g, MorphismLaw::AntiAutomorphism)?.len();
            let chars = enumerate_characters(&g).len();
            out.records.push(
                Record::new("group")
                    .str("name", name)
                    .int("order", g.order() as i64)
                    .boolean("abelian", g.is_abelian())
                    .int("involutive_aut", aut as i64)
                    .int("involutive_anti", anti as i64)
                    .int("characters", chars as i64),
            );
            t.push(vec![
                name.to_string(),
                g.order().to_string(),
                g.is_abelian().to_string(),
                aut.to_string(),
                anti.to_string(),
                chars.to_string(),
            ]);
        }
        for kind in [GroupKind::IntegerLattice(1), GroupKind::DiscreteHeisenberg, GroupKind::FreeGroup(2)] {
            out.records.push(Record::new("ball_group").str("name", &kind.to_string()));
        }
        out.tables.push(t);
        return Ok(PASS);
    };

    let g = FiniteGroup::catalog(name).map_err(CliError::invalid)?;
    let aut = involutions(&g, MorphismLaw::Automorphism)?;
    let anti = involutions(&g, MorphismLaw::AntiAutomorphism)?;
    let chars = enumerate_characters(&g);
    out.records.push(
        Record::new("group")
            .str("name", g.name())
            .int("order", g.order() as i64)
            .boolean("abelian", g.is_abelian())
            .int("involutive_aut", aut.len() as i64)
            .int("involutive_anti", anti.len() as i64)
            .int("characters", chars.len() as i64),
    );
    if args.morphisms {
        let mut t = CsvTable::new(&["selector", "map"]);
        for (law, list) in [(MorphismLaw::Automorphism, &aut), (MorphismLaw::AntiAutomorphism, &anti)] {
            for (k, s) in list.iter().enumerate() {
                let selector = format!("{}:{k}", law_name(law));
                out.records.push(Record::new("involution").str("selector", &selector).ints("map", s.map()));
                let map: Vec<String> = s.map().iter().map(usize::to_string).collect();
                t.push(vec![selector, map.join(" ")]);
            }
        }
        out.tables.push(t);
    }
    if args.characters {
        let mut t = CsvTable::new(&["index", "values"]);
        for (k, c) in chars.iter().enumerate() {
            out.records.push(Record::new("character").int("index", k as i64).complexes("values", c.values().values()));
            let vals: Vec<String> =
                c.values().values().iter().map(|v| format!("{}{:+}i", fmt_f64(v.re), v.im)).collect();
            t.push(vec![k.to_string(), vals.join(" ")]);
        }
        out.tables.push(t);
    }
    Ok(PASS)
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Add the pairs f = m and f = χ·m∘σ to the closed-form families.
    #[arg(long)]
    pub character_pairs: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn solve(args: &SolveArgs, out: &mut Output) -> Result<u8, CliError> {
    let g = args.domain.finite()?;
    let sigma = args.domain.finite_sigma(&g)?;
    if !sigma.is_homomorphism() {
        return Err(CliError::invalid("completeness needs an automorphism sigma; use `audit` for anti-automorphisms"));
    }
    let chi = args.domain.finite_chi(&g, None)?;
    check_compatible(&g, &sigma, &chi)?;

    let set = enumerate_solutions(&g, &sigma, &chi).map_err(solver_error)?;
    out.records.extend(set.to_records());
    let injected: Vec<SolutionPair> = if args.character_pairs {
        enumerate_multiplicative(&g)
            .iter()
            .filter(|m| !m.is_zero())
            .filter_map(|m| character_pair(&g, m, &chi, &sigma).ok())
            .flatten()
            .collect()
    } else {
        Vec::new()
    };
    let report = completeness_check_with(&g, &sigma, &chi, &injected).map_err(solver_error)?;
    out.records.extend(report.to_records());
    let sigma_label = args.domain.sigma_file.as_ref().map_or(args.domain.sigma.clone(), |p| p.display().to_string());
    let chi_label = args.domain.chi.clone().unwrap_or_else(|| "0".into());
    out.tables.push(report.summary_table(g.name(), &sigma_label, &chi_label));
    let pass = report.passed();
    out.records.push(Record::new("summary").str("check", "completeness").boolean("pass", pass));
    Ok(if pass { PASS } else { failed("completeness mismatch") })
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Audit this pair instead of the solver's solutions.
    #[arg(long)]
    pub pair: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn audit(args: &AuditArgs, out: &mut Output) -> Result<u8, CliError> {
    let g = args.domain.finite()?;
    let sigma = args.domain.finite_sigma(&g)?;
    if !sigma.is_antihomomorphism() {
        return Err(CliError::invalid("the audit needs an anti-automorphism sigma"));
    }
    let explicit = args.domain.chi.is_some() || args.domain.chi_file.is_some() || args.pair.is_some();
    let characters = if explicit {
        let chi = args.domain.finite_chi(&g, None)?;
        check_compatible(&g, &sigma, &chi)?;
        vec![(args.domain.chi.clone().unwrap_or_else(|| "0".into()), chi)]
    } else {
        let all = enumerate_characters(&g);
        compatible_characters(&g, &sigma, &all)
            .into_iter()
            .map(|c| (all.iter().position(|a| *a == c).unwrap_or(0).to_string(), c))
            .collect()
    };

    let mut t = CsvTable::new(&["chi", "pair", "property", "pass", "max_violation", "witness"]);
    let mut all_pass = true;
    let mut audited = 0;
    for (label, chi) in &characters {
        let pairs: Vec<SolutionPair> = match &args.pair {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
                vec![SolutionPair::from_text(&text).map_err(CliError::invalid)?]
            }
            None => {
                let set = enumerate_solutions_with(&g, &sigma, chi, &anti_candidates(&g, &sigma, chi))
                    .map_err(solver_error)?;
                set.entries
                    .iter()
                    .flat_map(|e| e.f_basis.iter().map(|f| SolutionPair::external(f.clone(), e.g.clone())))
                    .collect()
            }
        };
        for pair in pairs {
            let report = match audit_anti_solution(&g, &sigma, chi, &pair) {
                Ok(r) => r,
                Err(SolverError::NotApplicable) => continue,
                Err(e) => return Err(solver_error(e)),
            };
            all_pass &= report.passed();
            for rec in report.to_records() {
                out.records.push(rec.str("chi", label).int("pair", audited));
            }
            for row in &report.rows {
                let w: Vec<String> = row.witness.iter().map(usize::to_string).collect();
                t.push(vec![
                    label.clone(),
                    audited.to_string(),
                    row.name.to_string(),
                    row.passed.to_string(),
                    fmt_f64(row.max_violation),
                    w.join(" "),
                ]);
            }
            audited += 1;
        }
    }
    out.tables.push(t);
    out.records.push(Record::new("summary").str("check", "audit").int("pairs", audited).boolean("pass", all_pass));
    Ok(if all_pass { PASS } else { failed("audit property violated") })
}

#[derive(Args, Debug, Clone)]
pub struct NoiseArgs {
    /// uniform-disk, single-point or character-phase.
    #[arg(long, default_value = "uniform-disk")]
    pub shape: String,
    /// Which function is perturbed: f, g or both.
    #[arg(long, default_value = "both")]
    pub target: String,
}

impl NoiseArgs {
    fn config(&self, epsilon: f64, seed: u64) -> Result<PerturbationConfig, CliError> {
        let shape = NoiseShape::parse(&self.shape)
            .ok_or_else(|| CliError::invalid(format!("unknown noise shape `{}`", self.shape)))?;
        let target = NoiseTarget::parse(&self.target)
            .ok_or_else(|| CliError::invalid(format!("unknown noise target `{}`", self.target)))?;
        Ok(PerturbationConfig { epsilon, seed, shape, target })
    }
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long, default_value_t = 1e-2)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Write the perturbed pair here.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Domain, σ, χ and base pair resolved from the shared flags.
fn with_setup<R>(
    domain: &DomainArgs,
    pair: &PairArgs,
    run: impl FnOnce(&dyn Setup) -> Result<R, CliError>,
) -> Result<R, CliError> {
    match domain.space()? {
        Space::Finite(g) => {
            let sigma = domain.finite_sigma(&g)?;
            let chi = domain.finite_chi(&g, pair.forced_chi(&g)?)?;
            check_compatible(&g, &sigma, &chi)?;
            let base = pair.finite_pair(&g, &sigma, &chi)?;
            run(&Resolved { domain: g, sigma, chi, base })
        }
        Space::Ball(b) => {
            let sigma = domain.ball_sigma(&b)?;
            let chi = domain.ball_chi(&b)?;
            check_compatible(&b, &sigma, &chi)?;
            let base = pair.ball_pair(&b, &sigma, &chi)?;
            run(&Resolved { domain: b, sigma, chi, base })
        }
    }
}

struct Resolved<D> {
    domain: D,
    sigma: Involution,
    chi: Character,
    base: SolutionPair,
}

/// Object-safe view of [`Resolved`] so both domain types share one code path.
trait Setup {
    fn name(&self) -> String;
    fn perturb(&self, config: &PerturbationConfig) -> Result<feqlab::stability::Perturbation, CliError>;
    fn audits(&self, pair: &SolutionPair, delta: DeltaChoice, section: usize) -> Result<feqlab::stability::StabilityReport, CliError>;
    fn slope(&self, config: &PerturbationConfig, epsilons: &[f64]) -> Result<feqlab::stability::SlopeReport, CliError>;
}

impl<D: PhaseSource> Setup for Resolved<D> {
    fn name(&self) -> String {
        self.domain.name()
    }

    fn perturb(&self, config: &PerturbationConfig) -> Result<feqlab::stability::Perturbation, CliError> {
        perturb_pair(&self.domain, &self.sigma, &self.chi, &self.base, config).map_err(CliError::invalid)
    }

    fn audits(
        &self,
        pair: &SolutionPair,
        delta: DeltaChoice,
        section: usize,
    ) -> Result<feqlab::stability::StabilityReport, CliError> {
        if section >= self.domain.size() {
            return Err(CliError::invalid(format!("section point {section} is outside the domain")));
        }
        pair.f.check_domain(&self.domain).map_err(CliError::invalid)?;
        pair.g.check_domain(&self.domain).map_err(CliError::invalid)?;
        stability_audits(&self.domain, &self.sigma, &self.chi, &pair.f, &pair.g, delta, section)
            .map_err(CliError::invalid)
    }

    fn slope(&self, config: &PerturbationConfig, epsilons: &[f64]) -> Result<feqlab::stability::SlopeReport, CliError> {
        delta_slope(&self.domain, &self.sigma, &self.chi, &self.base, config, epsilons).map_err(CliError::invalid)
    }
}

pub fn perturb(args: &PerturbArgs, out: &mut Output) -> Result<u8, CliError> {
    let config = args.noise.config(args.epsilon, args.seed)?;
    with_setup(&args.domain, &args.pair, |s| {
        let p = s.perturb(&config)?;
        let mut rec = Record::new("perturbation")
            .str("domain", &s.name())
            .num("epsilon", config.epsilon)
            .int("seed", config.seed as i64)
            .str("shape", &config.shape.to_string())
            .str("target", &config.target.to_string())
            .num("measured_delta", p.measured_delta)
            .num("triangle_bound", p.triangle_bound);
        match &args.out {
            Some(path) => {
                std::fs::write(path, p.pair.to_text())
                    .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
                rec = rec.str("pair_file", &path.display().to_string());
            }
            None => rec = rec.complexes("f", p.pair.f.values()).complexes("g", p.pair.g.values()),
        }
        out.records.push(rec);
        Ok(PASS)
    })
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Comma-separated noise levels.
    #[arg(long, default_value = "1e-1,1e-2,1e-3")]
    pub epsilon: String,
    /// Comma-separated seeds.
    #[arg(long, default_value = "42")]
    pub seed: String,
    /// Use this δ in the bounds instead of the measured residual.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Base point of the sine-addition audit.
    #[arg(long, default_value_t = 0)]
    pub section: usize,
    /// Comma-separated radii for the growth scan (balls only).
    #[arg(long)]
    pub radii: Option<String>,
    /// Run the bounded-or-exponential experiment for --candidate instead.
    #[arg(long)]
    pub dichotomy: bool,
    /// Equation for the growth experiment: symmetrized-cauchy, dalembert or
    /// classic-dalembert.
    #[arg(long, default_value = "dalembert")]
    pub equation: String,
    /// exp:z1,z2,... or noise:SEED:AMPLITUDE[:CENTER].
    #[arg(long, default_value = "exp:2")]
    pub candidate: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::invalid(format!("bad {what} `{t}`"))))
        .collect()
}

fn ball_sigma(s: &str) -> Result<BallSigma, CliError> {
    BallSigma::parse(s).ok_or_else(|| CliError::invalid(format!("sigma `{s}` is not available here (use id or neg)")))
}

fn candidate(s: &str) -> Result<BallCandidate, CliError> {
    let bad = || CliError::invalid(format!("bad candidate `{s}` (use exp:z1,... or noise:SEED:AMPLITUDE[:CENTER])"));
    match s.split_once(':') {
        Some(("exp", z)) => Ok(BallCandidate::Exponential(complex_list(z)?)),
        Some(("noise", rest)) => {
            let parts: Vec<&str> = rest.split(':').collect();
            let (seed, amp, center) = match parts.as_slice() {
                [s, a] => (*s, *a, "0"),
                [s, a, c] => (*s, *a, *c),
                _ => return Err(bad()),
            };
            Ok(BallCandidate::Noise {
                seed: seed.parse().map_err(|_| bad())?,
                amplitude: amp.parse().map_err(|_| bad())?,
                center: complex(center)?,
            })
        }
        _ => Err(bad()),
    }
}

fn ball_kind(domain: &DomainArgs) -> Result<GroupKind, CliError> {
    let name = domain.ball.as_deref().ok_or_else(|| CliError::invalid("growth runs need --ball"))?;
    GroupKind::parse(name).ok_or_else(|| CliError::invalid(format!("unknown ball group `{name}`")))
}

fn dichotomy(args: &StabilityArgs, out: &mut Output) -> Result<u8, CliError> {
    let kind = ball_kind(&args.domain)?;
    let radii: Vec<usize> = list(args.radii.as_deref().unwrap_or("4,8,12,16"), "radius")?;
    let tag = EquationTag::parse(&args.equation)
        .ok_or_else(|| CliError::invalid(format!("unknown equation `{}`", args.equation)))?;
    let eq = BallEquation { tag, sigma: ball_sigma(&args.domain.sigma)?, chi: args.domain.chi_params()? };
    let cand = candidate(&args.candidate)?;
    let report = dichotomy_experiment(kind, &radii, &eq, |b| cand.build(b)).map_err(CliError::invalid)?;
    out.records.extend(report.to_records());
    out.tables.push(report.to_table());
    Ok(PASS)
}

pub fn stability(args: &StabilityArgs, out: &mut Output) -> Result<u8, CliError> {
    if args.dichotomy {
        return dichotomy(args, out);
    }
    let epsilons: Vec<f64> = list(&args.epsilon, "epsilon")?;
    let seeds: Vec<u64> = list(&args.seed, "seed")?;
    if epsilons.is_empty() || seeds.is_empty() {
        return Err(CliError::invalid("need at least one epsilon and one seed"));
    }
    let delta = args.delta.map_or(DeltaChoice::Measured, DeltaChoice::Override);
    let mut t = CsvTable::new(&["epsilon", "seed", "delta", "name", "bound", "max_violation", "witness", "pass"]);
    let mut all_pass = true;

    with_setup(&args.domain, &args.pair, |s| {
        for &seed in &seeds {
            for &eps in &epsilons {
                let p = s.perturb(&args.noise.config(eps, seed)?)?;
                let report = s.audits(&p.pair, delta, args.section)?;
                all_pass &= report.passed();
                for rec in report.to_records() {
                    out.records.push(rec.num("epsilon", eps).int("seed", seed as i64));
                }
                for r in &report.rows {
                    let w: Vec<String> = r.witness.iter().map(usize::to_string).collect();
                    t.push(vec![
                        fmt_f64(eps),
                        seed.to_string(),
                        fmt_f64(report.delta),
                        r.name.to_string(),
                        r.bound_formula.to_string(),
                        fmt_f64(r.max_violation),
                        w.join(" "),
                        r.passed().to_string(),
                    ]);
                }
            }
            if epsilons.len() > 1 {
                let slope = s.slope(&args.noise.config(epsilons[0], seed)?, &epsilons)?;
                out.records.push(
                    Record::new("slope")
                        .int("seed", seed as i64)
                        .boolean("linear", slope.linear())
                        .str("ratios", &slope.ratios.iter().map(|r| fmt_f64(*r)).collect::<Vec<_>>().join(" ")),
                );
            }
        }
        Ok(())
    })?;
    out.tables.push(t);

    if let Some(radii) = &args.radii {
        if args.pair.pair.is_some() {
            return Err(CliError::invalid("the growth scan rebuilds the pair per radius and cannot use --pair"));
        }
        let kind = ball_kind(&args.domain)?;
        let radii: Vec<usize> = list(radii, "radius")?;
        let sigma = ball_sigma(&args.domain.sigma)?;
        let chi = args.domain.chi_params()?;
        for &seed in &seeds {
            for &eps in &epsilons {
                let config = args.noise.config(eps, seed)?;
                let build = |b: &BallDomain| -> Result<_, feqlab::stability::StabilityError> {
                    let run = || -> Result<_, CliError> {
                        let s = sigma.build(b).map_err(CliError::invalid)?;
                        let c = args.domain.ball_chi(b)?;
                        let base = args.pair.ball_pair(b, &s, &c)?;
                        let p = perturb_pair(b, &s, &c, &base, &config).map_err(CliError::invalid)?;
                        Ok((p.pair.f, p.pair.g))
                    };
                    run().map_err(|e| feqlab::stability::StabilityError::Unsupported(e.message))
                };
                let scan = growth_case_scan(kind, &radii, sigma, &chi, build).map_err(CliError::invalid)?;
                for rec in scan.to_records() {
                    out.records.push(rec.num("epsilon", eps).int("seed", seed as i64));
                }
            }
        }
    }
    out.records.push(Record::new("summary").str("check", "stability bounds").boolean("pass", all_pass));
    Ok(if all_pass { PASS } else { failed("stability bound violated") })
}
