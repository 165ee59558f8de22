//! Runs the verification suites for one parameter point.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

use opuc_core::algebra::{derive_representation, verify_central_extension, verify_relations_functional, verify_relations_matrix, y_eigencheck};
use opuc_core::cmv::{verify_gevp_and_five_term, verify_reflection_rows};
use opuc_core::dunkl::{lambda_n, selfadjoint_residual, verify_bispectral};
use opuc_core::moments::{orthogonality_check, verify_exact_moments, Weight};
use opuc_core::szego::{verify_classical_match, verify_dep_and_pq_identity, verify_symmetry_and_positivity, verify_three_term, verify_transforms, SzegoPair};
use opuc_core::{Family, Params, Rational, Result, Scalar, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bispectral,
    Cmv,
    Algebra,
    Szego,
    Moments,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Bispectral, Suite::Cmv, Suite::Algebra, Suite::Szego, Suite::Moments];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bispectral => "bispectral",
            Suite::Cmv => "cmv",
            Suite::Algebra => "algebra",
            Suite::Szego => "szego",
            Suite::Moments => "moments",
            Suite::All => "all",
        }
    }

    /// Expands `all` and removes duplicates, keeping a fixed order.
    pub fn expand(selected: &[Suite]) -> Vec<Suite> {
        let mut out: Vec<Suite> = if selected.contains(&Suite::All) {
            Suite::EACH.to_vec()
        } else {
            selected.to_vec()
        };
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameter point, kept as text-parseable rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub alpha: Rational,
    pub beta: Rational,
}

impl Point {
    pub fn params(&self) -> Result<Params> {
        Params::new(self.alpha.clone(), self.beta.clone())
    }
}

impl FromStr for Point {
    type Err = String;

    /// `alpha beta` or `alpha,beta`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
        let [a, b] = parts.as_slice() else {
            return Err(format!("expected `alpha beta`, got {s:?}"));
        };
        let parse = |t: &str| opuc_core::parse_rational(t).map_err(|e| e.to_string());
        Ok(Self {
            alpha: parse(a)?,
            beta: parse(b)?,
        })
    }
}

/// Grid file: one `alpha beta` pair per line, `#` starts a comment.
pub fn parse_grid(text: &str) -> std::result::Result<Vec<Point>, String> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| line.parse().map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub n: usize,
    pub quad_order: usize,
    pub tol: f64,
    /// Index of a Verblunsky parameter to push by `+1/100` in the recurrence.
    pub corrupt: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub alpha: String,
    pub beta: String,
    #[serde(flatten)]
    pub report: VerificationReport,
}

fn family(p: &Params, n: usize, cfg: &SuiteConfig) -> Result<Family> {
    match cfg.corrupt {
        Some(i) => Family::build_perturbed(p, n, i, Rational::ratio(1, 100)),
        None => Family::build(p, n),
    }
}

/// Runs `suites` at one point. Errors are construction failures, not
/// identity failures; those land in the reports.
pub fn run(point: &Point, suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<SuiteResult>> {
    let p = point.params()?;
    let mut out = Vec::new();
    for &suite in suites {
        let reports = match suite {
            Suite::Bispectral => bispectral(&p, cfg)?,
            Suite::Cmv => cmv(&p, cfg)?,
            Suite::Algebra => algebra(&p, cfg)?,
            Suite::Szego => szego(&p, cfg)?,
            Suite::Moments => moments(&p, cfg)?,
            Suite::All => unreachable!("expanded before running"),
        };
        out.extend(reports.into_iter().map(|report| SuiteResult {
            suite,
            alpha: point.alpha.to_string(),
            beta: point.beta.to_string(),
            report,
        }));
    }
    Ok(out)
}

fn bispectral(p: &Params, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let fam = family(p, cfg.n, cfg)?;
    let (rep, _) = verify_bispectral(&fam)?;
    let mut sa = VerificationReport::numeric("self-adjoint", "|<K psi_n, psi_m> - <psi_n, K psi_m>| <= tol");
    if *p != Params::single_moment() {
        sa.identity.push_str(" (extended)");
    }
    let top = cfg.n.min(6);
    for n in 0..=top {
        for m in n..=top {
            let v = selfadjoint_residual(fam.psi(n), fam.psi(m), p, cfg.quad_order)?;
            sa.check_small(n as i64, format!("(n, m) = ({n}, {m})"), v, cfg.tol);
        }
    }
    Ok(vec![rep, sa])
}

fn cmv(p: &Params, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let fam = family(p, cfg.n, cfg)?;
    let mut out = verify_reflection_rows(&fam)?;
    out.extend(verify_gevp_and_five_term(&fam)?);
    Ok(out)
}

fn algebra(p: &Params, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut derived = VerificationReport::exact(
        "derivation",
        "lambda_n, a_n solved from {K, M1}, {K, M2} = closed forms, lambda_0 = 0",
    );
    let rep = derive_representation(&p.alpha, &p.beta, cfg.n)?;
    for n in 0..=cfg.n {
        let ok = rep.lambda[n] == lambda_n(p, n) && rep.a[n] == p.verblunsky(n)?;
        derived.record(n as i64, ok, format!("lambda = {}", rep.lambda[n]), rep.a[n].to_string());
    }
    let size = (cfg.n + 1).max(3);
    let d = cfg.n.clamp(2, 10);
    let mut out = vec![derived];
    for (mut rep, tag) in verify_relations_functional(p, d)?
        .into_iter()
        .map(|r| (r, " (functional)"))
        .chain(verify_relations_matrix(p, size)?.into_iter().map(|r| (r, " (matrix)")))
    {
        rep.identity.push_str(tag);
        out.push(rep);
    }
    out.extend(verify_central_extension(p, d, size)?);
    let fam = family(p, cfg.n.max(5), cfg)?;
    let pair = SzegoPair::build(&fam, (fam.max_index() - 3) / 2)?;
    out.extend(y_eigencheck(&fam, &pair)?);
    Ok(out)
}

fn szego(p: &Params, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let fam = family(p, cfg.n.max(5), cfg)?;
    let half = (fam.max_index() - 3) / 2;
    let pair = SzegoPair::build(&fam, half)?;
    let mut out = verify_three_term(&pair);
    out.extend(verify_transforms(&fam, &pair, half)?);
    out.extend(verify_classical_match(&fam, half)?);
    out.extend(verify_dep_and_pq_identity(&fam, half)?);
    out.extend(verify_symmetry_and_positivity(&pair));
    Ok(out)
}

fn moments(p: &Params, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let top = cfg.n.min(12);
    let fam = family(p, top, cfg)?;
    let mut out = vec![orthogonality_check(&fam, &Weight::Jacobi(p.clone()), top, cfg.quad_order, cfg.tol)?];
    if let Some(w) = exact_weight(p) {
        out.extend(verify_exact_moments(&fam, &w, top)?);
    }
    Ok(out)
}

/// The Jacobi weights whose normalized moments are rational.
pub fn exact_weight(p: &Params) -> Option<Weight<Rational>> {
    if *p == Params::single_moment() {
        Some(Weight::SingleMoment(Rational::from_int(1)))
    } else if *p == Params::free() {
        Some(Weight::Lebesgue)
    } else {
        None
    }
}
