//! Command implementations behind the `igusa` binary and their JSON reports.
//!
//! Every command returns a serializable value or a [`CommandError`] carrying a
//! stable exit code: 2 parse, 3 unsupported input, 4 resource cap,
//! 5 inconsistency.

use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    analyze_edges, arithmetic_nondegeneracy_check, candidate_poles_global, ArithError, CandidateSet, EdgeArith,
};
use crate::expsum::{
    decay_report, exp_sum_denef_many, exp_sum_direct, DecayOptions, DecayReport, ExpSumError, ExpSumResult,
    DEFAULT_POINT_BUDGET,
};
use crate::frac::{serde_q, serde_q_vec, Q};
use crate::geom::{
    conical_subdivision, kouchnirenko_check, newton_polygon, refine_to_simple, refinement_rays, Cone, GeomError,
    GeomNewtonPolygon, NondegeneracyReport,
};
use crate::padic::{enumerate_characters, is_prime, measure_level_sets, Character, MeasureOptions, PadicError};
use crate::poly::{parse_poly, ParseError, Poly};
use crate::zeta::{
    fit_rational, golden_character_series, golden_example_forms, zeta_series, FitError, FitOptions, FitOutcome,
    GoldenCase, GoldenParams, RationalFunctionT, ZetaError, ZetaSeries,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest prime accepted by `analyze`.
pub const MAX_ANALYZE_PRIME: u64 = 97;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("resource cap: {0}")]
    Resource(String),
    #[error("inconsistency: {0}")]
    Inconsistent(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Parse(_) => 2,
            CommandError::Unsupported(_) => 3,
            CommandError::Resource(_) => 4,
            CommandError::Inconsistent(_) => 5,
        }
    }
}

impl From<ParseError> for CommandError {
    fn from(e: ParseError) -> Self {
        CommandError::Parse(e.to_string())
    }
}

impl From<GeomError> for CommandError {
    fn from(e: GeomError) -> Self {
        CommandError::Unsupported(e.to_string())
    }
}

impl From<ArithError> for CommandError {
    fn from(e: ArithError) -> Self {
        CommandError::Unsupported(e.to_string())
    }
}

impl From<PadicError> for CommandError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::CellBudget { .. } | PadicError::PrecisionTooLarge { .. } => {
                CommandError::Resource(e.to_string())
            }
            _ => CommandError::Unsupported(e.to_string()),
        }
    }
}

impl From<ZetaError> for CommandError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::Padic(e) => e.into(),
            e => CommandError::Unsupported(e.to_string()),
        }
    }
}

impl From<ExpSumError> for CommandError {
    fn from(e: ExpSumError) -> Self {
        match e {
            ExpSumError::Budget { .. } => CommandError::Resource(e.to_string()),
            ExpSumError::Padic(e) => e.into(),
            ExpSumError::Zeta(e) => e.into(),
            ExpSumError::Arith(e) => e.into(),
            e => CommandError::Unsupported(e.to_string()),
        }
    }
}

impl From<FitError> for CommandError {
    fn from(e: FitError) -> Self {
        CommandError::Unsupported(e.to_string())
    }
}

fn parse_input(text: &str) -> Result<Poly, CommandError> {
    Ok(parse_poly(text)?)
}

fn check_prime(p: u64) -> Result<(), CommandError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CommandError::Unsupported(format!("{p} is not prime")))
    }
}

fn check_strict(f: &Poly, strict: bool) -> Result<(), CommandError> {
    if f.is_zero() {
        return Err(CommandError::Unsupported("the zero polynomial".into()));
    }
    if strict && !f.constant_term().is_zero() {
        return Err(CommandError::Unsupported("f(0, 0) != 0".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub input: String,
    pub prime: u64,
    pub monomial: bool,
    pub polygon: GeomNewtonPolygon,
    pub fan: Vec<Cone>,
    pub simple_fan: Vec<Cone>,
    pub refinement_rays: Vec<(u64, u64)>,
    pub edges: Vec<EdgeArith>,
    pub kouchnirenko: NondegeneracyReport,
    pub arithmetic_nondegeneracy: NondegeneracyReport,
    pub candidates: CandidateSet,
    #[serde(with = "serde_q")]
    pub beta: Q,
    /// Factor pairs `(A, B)` used as the default fit basis.
    pub fit_basis: Vec<(u64, u64)>,
}

/// Candidate factor pairs, `(1, 1)`, and `(a1 + a2, m(a))` for each ray added by
/// the simple refinement.
pub fn default_fit_basis(f: &Poly, p: u64) -> Result<Vec<(u64, u64)>, CommandError> {
    let poly = newton_polygon(f)?;
    let fan = conical_subdivision(&poly);
    let simple = refine_to_simple(&fan);
    let mut basis = candidate_poles_global(f, p)?.factor_pairs();
    if !basis.contains(&(1, 1)) {
        basis.insert(0, (1, 1));
    }
    for a in refinement_rays(&fan, &simple) {
        let pair = (a.0 + a.1, poly.m_value(a));
        if pair.1 > 0 && !basis.contains(&pair) {
            basis.push(pair);
        }
    }
    Ok(basis)
}

pub fn cmd_analyze(text: &str, p: u64, strict: bool) -> Result<AnalysisReport, CommandError> {
    let f = parse_input(text)?;
    check_prime(p)?;
    if p > MAX_ANALYZE_PRIME {
        return Err(CommandError::Resource(format!("p = {p} exceeds the residue-field scan cap {MAX_ANALYZE_PRIME}")));
    }
    check_strict(&f, strict)?;
    let polygon = newton_polygon(&f)?;
    let fan = conical_subdivision(&polygon);
    let simple_fan = refine_to_simple(&fan);
    let candidates = candidate_poles_global(&f, p)?;
    Ok(AnalysisReport {
        tool_version: TOOL_VERSION.to_string(),
        input: f.to_string(),
        prime: p,
        monomial: f.is_monomial(),
        refinement_rays: refinement_rays(&fan, &simple_fan),
        edges: analyze_edges(&f, p)?,
        kouchnirenko: kouchnirenko_check(&f, p)?,
        arithmetic_nondegeneracy: arithmetic_nondegeneracy_check(&f, p)?,
        beta: candidates.beta.clone(),
        fit_basis: default_fit_basis(&f, p)?,
        candidates,
        polygon,
        fan,
        simple_fan,
    })
}

/// `triv`, `all`, or `c{c}k{k}` (the character sending the fixed generator to
/// `exp(2πi k / φ(p^c))`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChiSpec {
    Triv,
    All,
    One { conductor: u32, k: u64 },
}

impl FromStr for ChiSpec {
    type Err = CommandError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "triv" => return Ok(ChiSpec::Triv),
            "all" => return Ok(ChiSpec::All),
            _ => {}
        }
        let bad = || CommandError::Parse(format!("bad character {s:?} (expected triv, all or c<c>k<k>)"));
        let rest = s.strip_prefix('c').ok_or_else(bad)?;
        let (c, k) = rest.split_once('k').ok_or_else(bad)?;
        Ok(ChiSpec::One { conductor: c.parse().map_err(|_| bad())?, k: k.parse().map_err(|_| bad())? })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaReport {
    pub input: String,
    pub p: u64,
    pub k_max: u32,
    pub c: u32,
    #[serde(with = "serde_q")]
    pub tail: Q,
    pub series: Vec<ZetaSeries>,
}

pub fn cmd_zeta(
    text: &str,
    p: u64,
    k_max: u32,
    c: u32,
    chi: &ChiSpec,
    strict: bool,
    opts: &MeasureOptions,
) -> Result<ZetaReport, CommandError> {
    let f = parse_input(text)?;
    check_prime(p)?;
    check_strict(&f, strict)?;
    if c == 0 {
        return Err(CommandError::Unsupported("angular depth c must be at least 1".into()));
    }
    let chars = match chi {
        ChiSpec::Triv => vec![Character::trivial(p)],
        ChiSpec::All => enumerate_characters(p, c)?,
        ChiSpec::One { conductor, k } => vec![Character::new(p, *conductor, *k)?],
    };
    let table = measure_level_sets(&f, p, k_max, c, opts)?;
    let series = chars.iter().map(|chi| zeta_series(&table, chi)).collect::<Result<Vec<_>, _>>()?;
    Ok(ZetaReport { input: f.to_string(), p, k_max, c, tail: table.tail.clone(), series })
}

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub input: String,
    pub p: u64,
    pub k_max: u32,
    pub basis: Vec<(u64, u64)>,
    #[serde(with = "serde_q_vec")]
    pub series: Vec<Q>,
    pub outcome: FitOutcome,
    #[serde(with = "serde_q_vec")]
    pub poles: Vec<Q>,
}

pub fn cmd_fit(
    text: &str,
    p: u64,
    k_max: u32,
    basis: Option<Vec<(u64, u64)>>,
    fit: &FitOptions,
    strict: bool,
    opts: &MeasureOptions,
) -> Result<FitReport, CommandError> {
    let f = parse_input(text)?;
    check_prime(p)?;
    check_strict(&f, strict)?;
    let basis = match basis {
        Some(b) => b,
        None => default_fit_basis(&f, p)?,
    };
    let table = measure_level_sets(&f, p, k_max, 1, opts)?;
    let series = zeta_series(&table, &Character::trivial(p))?.rational_coeffs().expect("trivial character");
    let outcome = fit_rational(&series, p, &basis, fit)?;
    let poles = match &outcome {
        FitOutcome::Consistent { function, .. } => function.pole_real_parts(),
        FitOutcome::Inconsistent { .. } => Vec::new(),
    };
    Ok(FitReport { input: f.to_string(), p, k_max, basis, series, outcome, poles })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Direct,
    Denef,
    Both,
}

impl FromStr for MethodChoice {
    type Err = CommandError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(MethodChoice::Direct),
            "denef" => Ok(MethodChoice::Denef),
            "both" => Ok(MethodChoice::Both),
            _ => Err(CommandError::Parse(format!("bad method {s:?} (expected direct, denef or both)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpSumRecord {
    pub m: u32,
    pub u: u64,
    pub direct: Option<ExpSumResult>,
    pub denef: Option<ExpSumResult>,
    /// `|direct − denef|` when both are present.
    pub difference: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpSumReport {
    pub input: String,
    pub p: u64,
    pub records: Vec<ExpSumRecord>,
    pub decay: Option<DecayReport>,
}

/// Tolerance on top of the reported error bound when both methods run.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-8;

#[allow(clippy::too_many_arguments)]
pub fn cmd_expsum(
    text: &str,
    p: u64,
    m: u32,
    units: Option<Vec<u64>>,
    method: MethodChoice,
    decay_up_to: Option<u32>,
    strict: bool,
    opts: &MeasureOptions,
) -> Result<ExpSumReport, CommandError> {
    let f = parse_input(text)?;
    check_prime(p)?;
    check_strict(&f, strict)?;
    let units = match units {
        Some(u) => u,
        None => (1..p).collect(),
    };
    let denef = match method {
        MethodChoice::Direct => None,
        _ => Some(exp_sum_denef_many(&f, p, m, &units, opts)?),
    };
    let mut records = Vec::new();
    for (i, &u) in units.iter().enumerate() {
        let direct = match method {
            MethodChoice::Denef => None,
            _ => Some(exp_sum_direct(&f, p, m, u, DEFAULT_POINT_BUDGET)?),
        };
        let dn = denef.as_ref().map(|d| d[i].clone());
        let difference = match (&direct, &dn) {
            (Some(a), Some(b)) => Some((a.value() - b.value()).norm()),
            _ => None,
        };
        if let (Some(d), Some(b)) = (difference, &dn) {
            if d > b.error_bound + CROSS_CHECK_TOLERANCE {
                return Err(CommandError::Inconsistent(format!(
                    "m={m} u={u}: |direct - denef| = {d:e} exceeds the bound {:e}",
                    b.error_bound
                )));
            }
        }
        records.push(ExpSumRecord { m, u, direct, denef: dn, difference });
    }
    let decay = match decay_up_to {
        Some(mm) => Some(decay_report(&f, p, mm, &DecayOptions::default())?),
        None => None,
    };
    Ok(ExpSumReport { input: f.to_string(), p, records, decay })
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldenReport {
    pub q: u64,
    pub case: GoldenCase,
    pub form: RationalFunctionT,
    #[serde(with = "serde_q_vec")]
    pub expansion: Vec<Q>,
    /// First coefficient where the oracle and the combined closed forms differ.
    pub check: Option<GoldenCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldenCheck {
    pub k_max: u32,
    pub characters: usize,
    pub first_mismatch: Option<(String, usize)>,
}

pub fn cmd_golden(
    q: u64,
    case: GoldenCase,
    params: &GoldenParams,
    k_max: u32,
    check: bool,
    opts: &MeasureOptions,
) -> Result<GoldenReport, CommandError> {
    check_prime(q)?;
    let form = golden_example_forms(q, case, params);
    let expansion = form.series(k_max as usize);
    let check = if check { Some(golden_check(q, k_max, opts)?) } else { None };
    if let Some(GoldenCheck { first_mismatch: Some((chi, k)), .. }) = &check {
        return Err(CommandError::Inconsistent(format!("closed forms and oracle differ for {chi} at t^{k}")));
    }
    Ok(GoldenReport { q, case, form, expansion, check })
}

/// Compares [`golden_character_series`] with the oracle for every character of
/// conductor one.
pub fn golden_check(p: u64, k_max: u32, opts: &MeasureOptions) -> Result<GoldenCheck, CommandError> {
    let f = crate::zeta::example_polynomial();
    let table = measure_level_sets(&f, p, k_max, 1, opts)?;
    let chars = enumerate_characters(p, 1)?;
    let mut first_mismatch = None;
    for chi in &chars {
        let oracle = zeta_series(&table, chi)?;
        let closed = golden_character_series(chi, k_max as usize)?;
        let bad = (0..=k_max as usize).find(|&k| {
            let mut d = oracle.coeffs[k].clone();
            for (idx, c) in closed[k].coeffs().iter().enumerate() {
                d.add_term(idx as u64, &-c.clone());
            }
            !d.is_zero()
        });
        if let Some(k) = bad {
            first_mismatch = Some((chi.to_string(), k));
            break;
        }
    }
    Ok(GoldenCheck { k_max, characters: chars.len(), first_mismatch })
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub tool_version: String,
    pub checks: Vec<SelftestCheck>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Quick consistency checks on the running example and two small curves.
pub fn cmd_selftest(opts: &MeasureOptions) -> Result<SelftestReport, CommandError> {
    let example = "(y^3-x^2)^2+x^4*y^4";
    let mut checks = Vec::new();

    let r = cmd_analyze(example, 5, true)?;
    let expected: Vec<Q> =
        [(-5, 12), (-9, 20), (-1, 2), (-1, 1)].iter().map(|&(a, b)| Q::new(a.into(), b.into())).collect();
    checks.push(SelftestCheck {
        name: "candidate poles",
        pass: r.candidates.values == expected,
        detail: r.candidates.values.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
    });
    let gens: Vec<Vec<(u64, u64)>> = r.simple_fan.iter().map(|c| c.generators.clone()).collect();
    let table1 = vec![
        vec![(0, 1)],
        vec![(0, 1), (1, 1)],
        vec![(1, 1)],
        vec![(1, 1), (3, 2)],
        vec![(3, 2)],
        vec![(3, 2), (2, 1)],
        vec![(2, 1)],
        vec![(2, 1), (1, 0)],
        vec![(1, 0)],
    ];
    checks.push(SelftestCheck { name: "simple fan", pass: gens == table1, detail: format!("{} cones", gens.len()) });

    let g = golden_check(5, 12, opts)?;
    checks.push(SelftestCheck {
        name: "closed forms vs oracle",
        pass: g.first_mismatch.is_none(),
        detail: format!("{} characters through t^12", g.characters),
    });

    let f = parse_input(example)?;
    let table = measure_level_sets(&f, 5, 4, 2, opts)?;
    let wild: Vec<Character> = enumerate_characters(5, 2)?.into_iter().filter(Character::wild).collect();
    let vanish = wild.iter().all(|chi| zeta_series(&table, chi).map(|z| z.all_zero()).unwrap_or(false));
    checks.push(SelftestCheck {
        name: "wild characters vanish",
        pass: vanish,
        detail: format!("{} characters", wild.len()),
    });

    let fit = cmd_fit("y^2-x^3", 3, 16, Some(vec![(1, 1), (5, 6)]), &FitOptions::default(), true, opts)?;
    checks.push(SelftestCheck {
        name: "rational fit",
        pass: fit.outcome.is_consistent(),
        detail: fit.poles.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
    });

    let mut worst: f64 = 0.0;
    for m in 1..=2 {
        let e = cmd_expsum(example, 5, m, None, MethodChoice::Both, None, true, opts);
        match e {
            Ok(rep) => worst = rep.records.iter().filter_map(|r| r.difference).fold(worst, f64::max),
            Err(_) => worst = f64::INFINITY,
        }
    }
    checks.push(SelftestCheck {
        name: "exponential sums",
        pass: worst <= CROSS_CHECK_TOLERANCE,
        detail: format!("max |direct - denef| = {worst:e}"),
    });
    Ok(SelftestReport { tool_version: TOOL_VERSION.to_string(), checks })
}
