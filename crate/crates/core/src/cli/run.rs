use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::cauchy::{builtin_sequence, validate_modulated_seq, CauchyError, CauchyFrame, ModulatedSeq, Verdict};
use crate::completion::{completion_frame, completion_presentation, gamma_hom, CompletionError, CompletionFrame};
use crate::frame::{check_frame_axioms, FiniteFrame};
use crate::instances::Instance;
use crate::limit::{
    approximate, constant_map_check, cut_axioms, dedekind_extract, frobenius_check, q_sharp_well_defined,
    qstar_well_defined, BasicSpace, Budget, FrobeniusVerdict, LimitError,
};
use crate::presentation::{build_site, coverage_iso_check, Horizon, PresentationError, Site, DEFAULT_BUDGET};
use crate::uniform::{
    check_reflection_lemma, decimal, format_rational, metric_uniformity, parse_rational, uniform_reflection,
    validate_uniformity, UniformityBase, UniformityViolation,
};

use super::report::{Check, Format, RunReport};
use super::spec::{load_instance, raw_order, read_document, read_file, resolve_base, resolve_metric, SpecError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check a spec file or a sequence and report every violation.
    Validate,
    /// Compute the completion and compare it with the uniform reflection.
    Complete,
    /// The limit map on generators respects the completion relations.
    CheckQstar,
    /// q# is monotone and respects the truncated Cauchy relations.
    CheckQsharp,
    /// q#(1) = 1, q# q* ≤ id and Frobenius equality at K and K+1.
    CheckFrobenius,
    /// The constant map factors γ*, and γ* satisfies the reflection lemma.
    CheckGamma,
    /// The suplattice and frame presented by the completion site agree.
    CheckCoverage,
    /// A rational interval of the given width in the limit's filter.
    Approx,
    /// The Dedekind cut of the limit on a sample grid.
    Cut,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Complete => "complete",
            Command::CheckQstar => "check-qstar",
            Command::CheckQsharp => "check-qsharp",
            Command::CheckFrobenius => "check-frobenius",
            Command::CheckGamma => "check-gamma",
            Command::CheckCoverage => "check-coverage",
            Command::Approx => "approx",
            Command::Cut => "cut",
        }
    }
}

/// Checks and computations for finite uniform locales, their completions,
/// and limits of modulated Cauchy sequences.
#[derive(Debug, Clone, Parser)]
#[command(name = "ucomplete", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Spec file (JSON) or built-in instance name.
    pub spec: Option<String>,
    /// Truncation horizon K.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Size budget for enumerated lattices and basic opens.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Search depth for point-level queries and sequence validation.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Interval width for `approx`, as a decimal or `n/d`.
    #[arg(long, default_value = "1e-6")]
    pub precision: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Built-in sequence `const:q`, `newton-sqrt:q` or `exp-series:q`.
    #[arg(long)]
    pub seq: Option<String>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Internal(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Spec(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Internal(_) | CliError::Io(_) => 5,
        }
    }
}

impl From<PresentationError> for CliError {
    fn from(e: PresentationError) -> CliError {
        match e {
            PresentationError::SizeBudgetExceeded { .. } => CliError::Budget(e.to_string()),
            e => CliError::Internal(e.to_string()),
        }
    }
}

impl From<CompletionError> for CliError {
    fn from(e: CompletionError) -> CliError {
        match e {
            CompletionError::Presentation(p) => p.into(),
            CompletionError::InvalidUniformity(m) => SpecError::Validation(m).into(),
            e => CliError::Internal(e.to_string()),
        }
    }
}

impl From<CauchyError> for CliError {
    fn from(e: CauchyError) -> CliError {
        match e {
            CauchyError::Presentation(p) => p.into(),
            CauchyError::InvalidSequence(m) => SpecError::Validation(m).into(),
            e => CliError::Internal(e.to_string()),
        }
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> CliError {
        match e {
            LimitError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            LimitError::Uncertified(_) => SpecError::Validation(e.to_string()).into(),
            LimitError::Presentation(p) => p.into(),
            LimitError::Completion(c) => c.into(),
            LimitError::Cauchy(c) => c.into(),
            e => CliError::Internal(e.to_string()),
        }
    }
}

struct Ctx {
    instance: Instance,
    horizon: Horizon,
    budget: usize,
}

fn context(cli: &Cli) -> Result<Ctx, CliError> {
    let arg = cli
        .spec
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{} needs a spec file or instance name", cli.command.name())))?;
    let spec = load_instance(arg)?;
    let k = cli.horizon.or(spec.horizon).unwrap_or(2);
    let horizon = Horizon::new(k).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Ctx {
        instance: spec.instance,
        horizon,
        budget: cli.budget.or(spec.budget).unwrap_or(DEFAULT_BUDGET),
    })
}

fn sequence(cli: &Cli) -> Result<ModulatedSeq<BigRational>, CliError> {
    let s = cli
        .seq
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{} needs --seq", cli.command.name())))?;
    Ok(builtin_sequence(s)?)
}

/// Runs a command and returns its report; failures of the checks are in
/// the report, errors are inputs or budgets that stop the run.
pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = match cli.command {
        Command::Validate => validate(cli)?,
        Command::Complete => complete(&context(cli)?)?,
        Command::CheckQstar => check_qstar(&context(cli)?)?,
        Command::CheckQsharp => check_qsharp(&context(cli)?)?,
        Command::CheckFrobenius => check_frobenius(&context(cli)?)?,
        Command::CheckGamma => check_gamma(&context(cli)?)?,
        Command::CheckCoverage => check_coverage(&context(cli)?)?,
        Command::Approx => approx(cli)?,
        Command::Cut => cut(cli)?,
    };
    report.finish();
    report.elapsed = Some(start.elapsed());
    Ok(report)
}

/// Runs, writes the report, and returns the exit status.
pub fn main_with(cli: &Cli) -> i32 {
    let result = run(cli).and_then(|report| {
        let text = report.render(cli.format);
        match &cli.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(report)
    });
    match result {
        Ok(report) if report.passed() => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn validate(cli: &Cli) -> Result<RunReport, CliError> {
    match (&cli.spec, &cli.seq) {
        (Some(path), None) => validate_spec(path),
        (None, Some(_)) => validate_sequence(cli),
        _ => Err(CliError::Usage("validate takes a spec file or --seq, not both".into())),
    }
}

fn violation_id(v: &UniformityViolation) -> &'static str {
    match v {
        UniformityViolation::NotACover { .. } => "uniformity/covers",
        UniformityViolation::NotStrong { .. } => "uniformity/strong",
        UniformityViolation::NotDirected { .. } => "uniformity/directed",
        UniformityViolation::BadWitness { .. } => "uniformity/star witnesses",
    }
}

fn uniformity_checks(report: &mut RunReport, f: &FiniteFrame, base: &UniformityBase) {
    let r = validate_uniformity(base, f);
    for id in ["uniformity/covers", "uniformity/strong", "uniformity/directed", "uniformity/star witnesses"] {
        let failing: Vec<String> = r
            .violations
            .iter()
            .filter(|v| violation_id(v) == id)
            .map(|v| v.to_string())
            .collect();
        match failing.first() {
            Some(w) => report.push(Check::new(id, false, w.clone())),
            None => report.push(Check::new(id, true, format!("{} covers", base.len()))),
        }
    }
    if r.is_valid() {
        if r.irregular.is_empty() {
            report.note("uniform: every open is the join of the opens uniformly below it");
        } else {
            let names: Vec<&str> = r.irregular.iter().map(|&u| f.name(u)).collect();
            report.note(format!("pre-uniform only; irregular opens: {}", names.join(", ")));
        }
    }
}

fn validate_spec(arg: &str) -> Result<RunReport, CliError> {
    if let Ok(spec) = load_instance(arg) {
        let mut report = RunReport::new("validate", &spec.instance.name, None);
        report.push(Check::new("frame axioms", true, format!("{} elements", spec.instance.frame.len())));
        uniformity_checks(&mut report, &spec.instance.frame, &spec.instance.base);
        return Ok(report);
    }
    let path = Path::new(arg);
    let doc = read_document(&read_file(path)?)?;
    let name = doc
        .name
        .clone()
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_default();
    let mut report = RunReport::new("validate", &name, None);
    match (&doc.frame, &doc.uniformity, &doc.metric) {
        (Some(fs), Some(us), None) => {
            let order = raw_order(fs)?;
            let axioms = check_frame_axioms(&order).map_err(|e| SpecError::Validation(e.to_string()))?;
            match axioms.violations.first() {
                Some(v) => {
                    report.push(Check::new("frame axioms", false, v.to_string()));
                    return Ok(report);
                }
                None => report.push(Check::new("frame axioms", true, format!("{} elements", order.len()))),
            }
            let f = FiniteFrame::new(order).map_err(|e| SpecError::Validation(e.to_string()))?;
            match resolve_base(&f, us) {
                Ok(base) => {
                    report.push(Check::new("uniformity/references", true, "all cover members resolve"));
                    uniformity_checks(&mut report, &f, &base);
                }
                Err(e) => report.push(Check::new("uniformity/references", false, e.to_string())),
            }
        }
        (None, None, Some(ms)) => {
            let (space, schedule) = resolve_metric(ms)?;
            match space.check() {
                Ok(()) => report.push(Check::new("metric axioms", true, format!("{} points", space.points.len()))),
                Err(e) => {
                    report.push(Check::new("metric axioms", false, e.to_string()));
                    return Ok(report);
                }
            }
            match metric_uniformity(&space, &schedule) {
                Ok((f, base)) => {
                    report.push(Check::new("metric schedule", true, format!("{} radii", schedule.len())));
                    uniformity_checks(&mut report, &f, &base);
                }
                Err(e) => report.push(Check::new("metric schedule", false, e.to_string())),
            }
        }
        _ => {
            return Err(SpecError::Validation("expected `frame` with `uniformity`, or `metric`".into()).into());
        }
    }
    Ok(report)
}

fn validate_sequence(cli: &Cli) -> Result<RunReport, CliError> {
    let p = sequence(cli)?;
    let depth = cli.depth.unwrap_or(8);
    let mut report = RunReport::new("validate", &p.name, None);
    match validate_modulated_seq(&p, depth)? {
        Verdict::Certified => report.push(Check::new("cauchy", true, format!("certified for j < {depth}"))),
        Verdict::SampledOk { depth } => {
            report.push(Check::new("cauchy", true, format!("samples agree for j < {depth}; not certified")))
        }
        Verdict::Refuted { j, n, n2, reason } => {
            report.push(Check::new("cauchy", false, format!("j={j}, n={n}, n'={n2}: {reason}")))
        }
    }
    if let Some(c) = &p.certificate {
        report.note(format!("certificate: {}", c.describe()));
    }
    Ok(report)
}

fn completion(ctx: &Ctx) -> Result<CompletionFrame, CliError> {
    Ok(completion_frame(&ctx.instance.frame, &ctx.instance.base, ctx.budget)?)
}

fn complete(ctx: &Ctx) -> Result<RunReport, CliError> {
    let (f, base) = (&ctx.instance.frame, &ctx.instance.base);
    let cf = completion(ctx)?;
    let g = gamma_hom(&cf, f, base)?;
    let refl = uniform_reflection(f, base).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut report = RunReport::new("complete", &ctx.instance.name, None);
    report.push(Check::new("γ* injective", g.injective, if g.injective { "distinct images" } else { "two opens share an image" }));
    report.push(Check::new("γ* dense", g.dense, if g.dense { "only 0 maps to 0" } else { "a nonzero open maps to 0" }));
    let mut image = g.table.clone();
    image.sort_unstable();
    image.dedup();
    let onto = image == refl.elements;
    let detail = if onto {
        format!("{} opens", image.len())
    } else {
        let missing: Vec<&str> = refl.elements.iter().filter(|e| !image.contains(e)).map(|&e| f.name(e)).collect();
        format!("image misses {}", missing.join(", "))
    };
    report.push(Check::new("γ* onto the uniform reflection", onto, detail));
    report.note(format!("completion has {} opens, realized as {}", cf.frame().len(), cf.cif.realization()));
    for a in f.elements() {
        report.note(format!("γ*([{}∈F]) = {}", f.name(a), f.name(g.table[cf.gen(a)])));
    }
    Ok(report)
}

fn check_qstar(ctx: &Ctx) -> Result<RunReport, CliError> {
    let (f, base) = (&ctx.instance.frame, &ctx.instance.base);
    let cfr = CauchyFrame::new(f, base, ctx.horizon, ctx.budget)?;
    let mut report = RunReport::new("check-qstar", &ctx.instance.name, Some(ctx.horizon.k()));
    for case in qstar_well_defined(f, base, &cfr)? {
        report.push(Check::from_case("q* respects ", &case));
    }
    report.note(format!("truncated Cauchy frame has {} models", cfr.models.model_count()));
    Ok(report)
}

fn check_qsharp(ctx: &Ctx) -> Result<RunReport, CliError> {
    let (f, base) = (&ctx.instance.frame, &ctx.instance.base);
    let cf = completion(ctx)?;
    let space = BasicSpace::new(f, base, &cf, ctx.horizon, ctx.budget)?;
    let mut report = RunReport::new("check-qsharp", &ctx.instance.name, Some(ctx.horizon.k()));
    for case in q_sharp_well_defined(&space) {
        report.push(Check::from_case("q# ", &case));
    }
    report.note(format!("{} basic opens", space.len()));
    Ok(report)
}

fn frobenius_checks(report: &mut RunReport, v: &FrobeniusVerdict) {
    let prefix = format!("K={}/", v.horizon.k());
    report.push(Check::new(
        format!("{prefix}q#(1) = 1"),
        v.top_preserved,
        if v.top_preserved { "holds" } else { "q#(1) ≠ 1" },
    ));
    report.push(Check::from_case(&prefix, &v.retraction));
    report.push(Check::from_case(&prefix, &v.frobenius_ge));
    report.push(Check::from_case(&prefix, &v.frobenius_le));
    report.push(Check::from_case(&prefix, &v.full_retraction));
    report.push(Check::from_case(&prefix, &v.full_ge));
    report.push(Check::from_case(&prefix, &v.full_le));
}

fn check_frobenius(ctx: &Ctx) -> Result<RunReport, CliError> {
    let (f, base) = (&ctx.instance.frame, &ctx.instance.base);
    let cf = completion(ctx)?;
    let r = frobenius_check(f, base, &cf, ctx.horizon, ctx.budget)?;
    let mut report = RunReport::new("check-frobenius", &ctx.instance.name, Some(ctx.horizon.k()));
    frobenius_checks(&mut report, &r.at);
    frobenius_checks(&mut report, &r.next);
    let stable = r.horizon_stable();
    report.push(Check::new(
        "horizon stability",
        stable,
        format!(
            "K={} {}, K={} {}",
            r.at.horizon.k(),
            if r.at.holds() { "holds" } else { "fails" },
            r.next.horizon.k(),
            if r.next.holds() { "holds" } else { "fails" }
        ),
    ));
    report.note(format!("{} and {} basic opens", r.at.basics, r.next.basics));
    Ok(report)
}

fn check_gamma(ctx: &Ctx) -> Result<RunReport, CliError> {
    let (f, base) = (&ctx.instance.frame, &ctx.instance.base);
    let cf = completion(ctx)?;
    let cfr = CauchyFrame::new(f, base, ctx.horizon, ctx.budget)?;
    let c = constant_map_check(f, base, &cfr)?;
    let mut report = RunReport::new("check-gamma", &ctx.instance.name, Some(ctx.horizon.k()));
    report.push(Check::from_case("", &c.relations));
    report.push(Check::from_case("", &c.composite));
    let g = gamma_hom(&cf, f, base)?;
    let r = check_reflection_lemma(cf.frame(), &cf.base, f, &g.table);
    let detail = if r.holds() {
        format!("{} opens fixed", g.table.len())
    } else if !r.hypotheses_hold {
        "completion not uniform or γ* not injective".to_string()
    } else if let Some(&a) = r.image_not_fixed.first() {
        format!("{} is in the image but not fixed", f.name(a))
    } else {
        format!("{} is fixed but not in the image", f.name(r.fixed_not_in_image[0]))
    };
    report.push(Check::new("reflection lemma for γ", r.holds(), detail));
    Ok(report)
}

/// The listed rules with their meet-stable closure added: the same frame,
/// and a coverage that satisfies the refinement hypothesis.
fn meet_stable(site: &Site) -> Result<Site, PresentationError> {
    let n = site.len();
    let leq = (0..n).map(|a| (0..n).map(|b| site.leq(a, b)).collect()).collect();
    let mut rules: Vec<(usize, Vec<usize>, String)> = site
        .rules()
        .iter()
        .map(|r| (r.elem, r.family.clone(), r.label.clone()))
        .collect();
    for (e, fam) in site.saturated_rules() {
        rules.push((*e, fam.clone(), "meet-stable".to_string()));
    }
    Site::new(site.names().to_vec(), leq, rules)
}

fn coverage_check(report: &mut RunReport, id: &str, site: &Site, budget: usize) -> Result<bool, CliError> {
    match coverage_iso_check(site, budget) {
        Ok(r) => {
            let detail = match &r.failure {
                Some(w) => w.clone(),
                None => format!("{} elements on both sides", r.frame_size),
            };
            report.push(Check::new(id, r.holds(), detail));
            Ok(true)
        }
        Err(e @ PresentationError::HypothesisViolated { .. }) => {
            report.note(format!("{id}: {e}"));
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn check_coverage(ctx: &Ctx) -> Result<RunReport, CliError> {
    let (f, base) = (&ctx.instance.frame, &ctx.instance.base);
    let site = build_site(&completion_presentation(f, base))?;
    let mut report = RunReport::new("check-coverage", &ctx.instance.name, None);
    report.note(format!("site has {} elements and {} rules", site.len(), site.rules().len()));
    if !coverage_check(&mut report, "suplattice ≅ frame, listed rules", &site, ctx.budget)? {
        let closed = meet_stable(&site)?;
        if !coverage_check(&mut report, "suplattice ≅ frame, meet-stable rules", &closed, ctx.budget)? {
            report.push(Check::new("coverage hypothesis", false, "fails even for the meet-stable rules"));
        }
    }
    Ok(report)
}

fn digits_for(precision: &BigRational) -> usize {
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut d = 0;
    let mut scale = BigRational::from_integer(BigInt::from(1));
    while &scale > precision && d < 60 {
        scale /= &ten;
        d += 1;
    }
    d + 2
}

fn approx(cli: &Cli) -> Result<RunReport, CliError> {
    let p = sequence(cli)?;
    let precision = parse_rational(&cli.precision)
        .filter(|q| q.is_positive())
        .ok_or_else(|| CliError::Usage(format!("precision `{}` is not a positive rational", cli.precision)))?;
    let (lo, hi, w) = approximate(&p, &precision)?;
    let width = &hi - &lo;
    let mut report = RunReport::new("approx", &p.name, None);
    report.push(Check::new(
        "interval width",
        width <= precision,
        format!("[{}, {}] has width {}", format_rational(&lo), format_rational(&hi), format_rational(&width)),
    ));
    let digits = digits_for(&precision);
    report.note(format!("lower {}", decimal(&lo, digits)));
    report.note(format!("upper {}", decimal(&hi, digits)));
    report.note(format!("witness: s({}) at base index {}, star {}", w.k, w.j, w.outer));
    Ok(report)
}

/// `{-4, -4 + 1/8, …, 4}`.
pub fn sample_grid() -> Vec<BigRational> {
    (-32..=32).map(|i| BigRational::new(BigInt::from(i), BigInt::from(8))).collect()
}

fn cut(cli: &Cli) -> Result<RunReport, CliError> {
    let p = sequence(cli)?;
    let mut budget = Budget::default();
    if let Some(d) = cli.depth {
        budget.depth = d.max(1);
    }
    let oracle = dedekind_extract(&p, budget)?;
    let samples = sample_grid();
    let mut report = RunReport::new("cut", &p.name, None);
    for case in cut_axioms(&oracle, &samples)? {
        report.push(Check::from_case("", &case));
    }
    report.note(format!(
        "bracket ({}, {})",
        format_rational(&oracle.lower),
        format_rational(&oracle.upper)
    ));
    let mut greatest_l = None;
    let mut least_u = None;
    for r in &samples {
        if oracle.in_l(r)?.is_yes() {
            greatest_l = Some(r.clone());
        }
        if least_u.is_none() && oracle.in_u(r)?.is_yes() {
            least_u = Some(r.clone());
        }
    }
    if let Some(r) = greatest_l {
        report.note(format!("greatest sample in L: {}", format_rational(&r)));
    }
    if let Some(r) = least_u {
        report.note(format!("least sample in U: {}", format_rational(&r)));
    }
    Ok(report)
}
