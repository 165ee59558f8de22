//! Trigonometric moments, Toeplitz determinants, the determinantal
//! construction of `Phi_n`, and the quadrature-based orthogonality harness.
//!
//! Every weight is normalized to `sigma_0 = 1`. Lebesgue and single-moment
//! weights have exact rational moments; general Jacobi weights go through
//! quadrature in `f64`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::opuc::{JacobiParams, OpucFamily};
use crate::quadrature::Rule;
use crate::report::VerificationReport;
use crate::scalar::Scalar;

pub const MIN_QUAD_ORDER: usize = 64;
const MAX_QUAD_ORDER: usize = 1024;
/// Two successive orders must agree to this (relative to `max(1, |I|)`).
pub const QUAD_AGREEMENT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Weight<T> {
    /// `(1 - cos t)^(alpha + 1/2) (1 + cos t)^(beta + 1/2)`
    Jacobi(JacobiParams<T>),
    /// `(1 - xi cos t) / (2 pi)`, `|xi| <= 1`
    SingleMoment(T),
    Lebesgue,
}

impl<T: Scalar> Weight<T> {
    pub fn single_moment(xi: T) -> Result<Self> {
        if xi.abs() > T::one() {
            return Err(Error::InvalidArgument(format!("single-moment weight needs |xi| <= 1, got {xi}")));
        }
        Ok(Self::SingleMoment(xi))
    }

    /// Pointwise value at angle `t` (unnormalized).
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Jacobi(p) => {
                let (a, b) = (p.alpha.to_f64_lossy(), p.beta.to_f64_lossy());
                let c = t.cos();
                (1.0 - c).max(0.0).powf(a + 0.5) * (1.0 + c).max(0.0).powf(b + 0.5)
            }
            Self::SingleMoment(xi) => (1.0 - xi.to_f64_lossy() * t.cos()) / (2.0 * std::f64::consts::PI),
            Self::Lebesgue => 1.0,
        }
    }

    /// Exact normalized moment, when the weight has a finite Fourier series
    /// we know in closed form.
    pub fn exact_moment(&self, n: i64) -> Option<T> {
        match self {
            Self::Lebesgue => Some(if n == 0 { T::one() } else { T::zero() }),
            Self::SingleMoment(xi) => Some(match n.abs() {
                0 => T::one(),
                1 => -(xi.clone() / T::from_int(2)),
                _ => T::zero(),
            }),
            Self::Jacobi(_) => None,
        }
    }

    /// True when the weight is a trigonometric polynomial, so the periodic
    /// trapezoidal rule integrates polynomial integrands exactly.
    fn is_smooth(&self) -> bool {
        match self {
            Self::Jacobi(p) => [&p.alpha, &p.beta].into_iter().all(|x| {
                let e = x.to_f64_lossy() + 0.5;
                e >= 0.0 && e.fract() == 0.0
            }),
            _ => true,
        }
    }

    fn rule(&self, order: usize) -> Result<Rule> {
        match self {
            Self::Jacobi(p) if !self.is_smooth() => {
                Rule::gauss_jacobi(order, p.alpha.to_f64_lossy(), p.beta.to_f64_lossy())
            }
            _ => Ok(Rule::trapezoid(order, |t| self.eval(t))),
        }
    }
}

/// Normalized integrals `int f w / int w` with automatic order doubling.
pub struct Integrator<'w, T> {
    weight: &'w Weight<T>,
    order: usize,
    lo: Rule,
    hi: Rule,
}

impl<'w, T: Scalar> Integrator<'w, T> {
    pub fn new(weight: &'w Weight<T>, quad_order: usize) -> Result<Self> {
        if quad_order < MIN_QUAD_ORDER {
            return Err(Error::InvalidArgument(format!(
                "quadrature order {quad_order} below minimum {MIN_QUAD_ORDER}"
            )));
        }
        Ok(Self {
            weight,
            order: quad_order,
            lo: weight.rule(quad_order)?,
            hi: weight.rule(2 * quad_order)?,
        })
    }

    /// Current (settled) order of the finer rule.
    pub fn order(&self) -> usize {
        2 * self.order
    }

    pub fn normalized(&mut self, f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
        loop {
            let a = self.lo.integrate(&f) / self.lo.mass();
            let b = self.hi.integrate(&f) / self.hi.mass();
            let diff = (a - b).norm();
            if diff <= QUAD_AGREEMENT * b.norm().max(1.0) {
                return Ok(b);
            }
            if 2 * self.order >= MAX_QUAD_ORDER {
                return Err(Error::QuadratureUnconverged {
                    order: self.order,
                    next: 2 * self.order,
                    difference: diff,
                });
            }
            self.order *= 2;
            self.lo = std::mem::replace(&mut self.hi, self.weight.rule(2 * self.order)?);
        }
    }

    /// `int u(e^{it}) v(e^{-it}) w(t) dt / int w(t) dt`.
    pub fn pairing(&mut self, u: &LaurentPoly<T>, v: &LaurentPoly<T>) -> Result<f64> {
        // Convert once; the integrand is evaluated at every node.
        let (u, v) = (u.map_coeffs(T::to_f64_lossy), v.map_coeffs(T::to_f64_lossy));
        Ok(self
            .normalized(|t| u.eval_unit_circle(t) * v.eval_unit_circle(-t))?
            .re)
    }
}

/// One-shot normalized pairing.
pub fn pairing<T: Scalar>(u: &LaurentPoly<T>, v: &LaurentPoly<T>, w: &Weight<T>, quad_order: usize) -> Result<f64> {
    Integrator::new(w, quad_order)?.pairing(u, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Moment<T> {
    Exact(T),
    Quadrature(f64),
}

impl<T: Scalar> Moment<T> {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(v) => v.to_f64_lossy(),
            Self::Quadrature(v) => *v,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            Self::Exact(_) => Provenance::Exact,
            Self::Quadrature(_) => Provenance::Quadrature,
        }
    }
}

/// Normalized moment `sigma_n`; exact when the weight allows it.
pub fn sigma<T: Scalar>(w: &Weight<T>, n: i64, quad_order: usize) -> Result<Moment<T>> {
    if let Some(v) = w.exact_moment(n) {
        return Ok(Moment::Exact(v));
    }
    let mut integ = Integrator::new(w, quad_order)?;
    let v = integ.normalized(|t| Complex64::from_polar(1.0, n as f64 * t))?;
    Ok(Moment::Quadrature(v.re))
}

/// `sigma_{-N}..=sigma_N` with per-entry provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSeq<T> {
    entries: BTreeMap<i64, (T, Provenance)>,
}

impl<T: Scalar> MomentSeq<T> {
    /// Exact moments up to `|n| <= max`, or `None` for weights that need
    /// quadrature.
    pub fn exact(w: &Weight<T>, max: usize) -> Option<Self> {
        let max = max as i64;
        let entries = (-max..=max)
            .map(|n| Some((n, (w.exact_moment(n)?, Provenance::Exact))))
            .collect::<Option<_>>()?;
        Some(Self { entries })
    }

    pub fn from_values(values: impl IntoIterator<Item = (i64, T)>, provenance: Provenance) -> Self {
        Self {
            entries: values.into_iter().map(|(n, v)| (n, (v, provenance))).collect(),
        }
    }

    pub fn get(&self, n: i64) -> Result<&T> {
        self.entries.get(&n).map(|(v, _)| v).ok_or(Error::MissingMoment(n))
    }

    pub fn provenance(&self, n: i64) -> Option<Provenance> {
        self.entries.get(&n).map(|(_, p)| *p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &T, Provenance)> + '_ {
        self.entries.iter().map(|(n, (v, p))| (*n, v, *p))
    }

    /// `sigma_{-n} == sigma_n` for every stored pair.
    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|(n, (v, _))| self.entries.get(&-n).is_none_or(|(u, _)| u == v))
    }
}

impl MomentSeq<f64> {
    /// Quadrature moments up to `|n| <= max` for any weight.
    pub fn quadrature<T: Scalar>(w: &Weight<T>, max: usize, quad_order: usize) -> Result<Self> {
        let mut integ = Integrator::new(w, quad_order)?;
        let mut entries = BTreeMap::new();
        for n in 0..=max as i64 {
            let v = integ.normalized(|t| Complex64::from_polar(1.0, n as f64 * t))?.re;
            entries.insert(n, (v, Provenance::Quadrature));
            entries.insert(-n, (v, Provenance::Quadrature));
        }
        Ok(Self { entries })
    }
}

/// Determinant by Gaussian elimination with largest-magnitude pivots.
pub fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let Some(piv) = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
        else {
            return T::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * p.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / p.clone();
            for c in col..n {
                let v = m[col][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    det
}

/// `Delta_n = det(sigma_{k-j})_{j,k<n}`, with `Delta_0 = 1`. Must be positive.
pub fn toeplitz_delta<T: Scalar>(m: &MomentSeq<T>, n: usize) -> Result<T> {
    let mut rows = Vec::with_capacity(n);
    for j in 0..n as i64 {
        rows.push((0..n as i64).map(|k| m.get(k - j).cloned()).collect::<Result<Vec<_>>>()?);
    }
    let d = determinant(rows);
    if d <= T::zero() {
        return Err(Error::NonPositive {
            n,
            value: d.to_string(),
        });
    }
    Ok(d)
}

/// `Phi_n` as the bordered Toeplitz determinant (last row `1, z, ..., z^n`)
/// divided by `Delta_n`, expanded along the last row.
pub fn determinantal_phi<T: Scalar>(m: &MomentSeq<T>, n: usize) -> Result<LaurentPoly<T>> {
    let delta = match toeplitz_delta(m, n) {
        Ok(d) => d,
        Err(Error::NonPositive { value, .. }) if value == T::zero().to_string() => {
            return Err(Error::SingularDelta { n })
        }
        Err(e) => return Err(e),
    };
    let top: Vec<Vec<T>> = (0..n as i64)
        .map(|r| (0..=n as i64).map(|c| m.get(c - r).cloned()).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut out = LaurentPoly::zero();
    for j in 0..=n {
        let minor: Vec<Vec<T>> = top
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let mut cof = determinant(minor);
        if (n + j) % 2 == 1 {
            cof = -cof;
        }
        out = &out + &LaurentPoly::monomial(j as i64, cof / delta.clone());
    }
    Ok(out)
}

/// Numeric orthogonality of `Phi_0..=Phi_{n_max}` against `w`: off-diagonal
/// pairings below `tol`, diagonal ones within `tol` (relative) of `h_n`.
pub fn orthogonality_check<T: Scalar>(
    fam: &OpucFamily<T>,
    w: &Weight<T>,
    n_max: usize,
    quad_order: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::numeric(
        "orthogonality",
        "int Phi_n(e^it) Phi_m(e^-it) w dt / int w dt = h_n delta_nm",
    );
    let mut integ = Integrator::new(w, quad_order)?;
    let n_max = n_max.min(fam.max_index());
    for n in 0..=n_max {
        for m in 0..=n_max {
            let v = integ.pairing(fam.phi(n), fam.phi(m))?;
            let detail = format!("(n, m) = ({n}, {m})");
            if n == m {
                let h = fam.h(n).to_f64_lossy();
                rep.check_small(n as i64, detail, (v - h) / h, tol);
            } else {
                rep.check_small(n as i64, detail, v, tol);
            }
        }
    }
    Ok(rep)
}

/// Exact cross-checks available for weights with exact moments: moment
/// symmetry, `Delta_n > 0`, `Delta_{n+1} / Delta_n = h_n`, and the
/// determinantal `Phi_n` against the recurrence.
pub fn verify_exact_moments<T: Scalar>(fam: &OpucFamily<T>, w: &Weight<T>, n_max: usize) -> Result<Vec<VerificationReport>> {
    let n_max = n_max.min(fam.max_index());
    let m = MomentSeq::exact(w, n_max + 1)
        .ok_or_else(|| Error::InvalidArgument("weight has no exact moments".into()))?;
    let mut sym = VerificationReport::exact("moment-symmetry", "sigma_-n = sigma_n");
    for n in 0..=(n_max as i64 + 1) {
        sym.record(n, m.get(n)? == m.get(-n)?, "", m.get(n)?.to_string());
    }
    let mut pos = VerificationReport::exact("toeplitz-positive", "Delta_n > 0");
    let mut ratio = VerificationReport::exact("toeplitz-ratio", "Delta_{n+1} / Delta_n = h_n");
    let mut det_phi = VerificationReport::exact("determinantal-phi", "bordered Toeplitz Phi_n = Szego Phi_n");
    let mut deltas = Vec::with_capacity(n_max + 2);
    for n in 0..=n_max + 1 {
        match toeplitz_delta(&m, n) {
            Ok(d) => {
                pos.record(n as i64, true, "", d.to_string());
                deltas.push(d);
            }
            Err(e) => {
                pos.record(n as i64, false, e.to_string(), "");
                return Ok(vec![sym, pos]);
            }
        }
    }
    for n in 0..=n_max {
        let q = deltas[n + 1].clone() / deltas[n].clone();
        ratio.check_equal(n as i64, &q, fam.h(n));
        let phi = determinantal_phi(&m, n)?;
        det_phi.check_zero(n as i64, &(&phi - fam.phi(n)));
    }
    Ok(vec![sym, pos, ratio, det_phi])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Family, Laurent, Params, Rational};

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    #[test]
    fn closed_form_moments() {
        assert_eq!(sigma(&Weight::<Rational>::Lebesgue, 5, 64).unwrap(), Moment::Exact(r(0, 1)));
        let sm = Weight::single_moment(r(1, 1)).unwrap();
        assert_eq!(sigma(&sm, 1, 64).unwrap(), Moment::Exact(r(-1, 2)));
        assert_eq!(sigma(&sm, -1, 64).unwrap(), Moment::Exact(r(-1, 2)));
        assert_eq!(sigma(&sm, 2, 64).unwrap(), Moment::Exact(r(0, 1)));
        assert!(Weight::single_moment(r(3, 2)).is_err());
    }

    #[test]
    fn jacobi_quadrature_reproduces_single_moment() {
        let w = Weight::Jacobi(Params::single_moment());
        let s1 = sigma(&w, 1, 64).unwrap();
        assert_eq!(s1.provenance(), Provenance::Quadrature);
        assert!((s1.to_f64() + 0.5).abs() < 1e-12);
        assert!(sigma(&w, 2, 64).unwrap().to_f64().abs() < 1e-12);
        assert!(sigma(&w, 1, 8).is_err());
    }

    #[test]
    fn singular_weights_use_gauss_jacobi() {
        // alpha + 1/2 < 0: integrable singularity at t = 0.
        let p = Params::new(r(-7, 10), r(3, 10)).unwrap();
        let w = Weight::Jacobi(p.clone());
        let fam = Family::build(&p, 8).unwrap();
        let rep = orthogonality_check(&fam, &w, 8, 64, 1e-10).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn toeplitz_small_values() {
        let sm = MomentSeq::exact(&Weight::single_moment(r(1, 1)).unwrap(), 4).unwrap();
        assert_eq!(toeplitz_delta(&sm, 1).unwrap(), r(1, 1));
        assert_eq!(toeplitz_delta(&sm, 2).unwrap(), r(3, 4));
        let d3 = toeplitz_delta(&sm, 3).unwrap();
        assert_eq!(d3 / r(3, 4), r(2, 3));
        let leb = MomentSeq::exact(&Weight::<Rational>::Lebesgue, 6).unwrap();
        assert!((0..6).all(|n| toeplitz_delta(&leb, n).unwrap() == r(1, 1)));
        assert!(sm.is_symmetric());
    }

    #[test]
    fn non_positive_toeplitz_is_flagged() {
        let bad = MomentSeq::from_values([(0, r(1, 1)), (1, r(2, 1)), (-1, r(2, 1))], Provenance::Exact);
        assert!(matches!(toeplitz_delta(&bad, 2), Err(Error::NonPositive { n: 2, .. })));
        let singular = MomentSeq::from_values([(0, r(1, 1)), (1, r(1, 1)), (-1, r(1, 1))], Provenance::Exact);
        assert!(matches!(determinantal_phi(&singular, 2), Err(Error::SingularDelta { n: 2 })));
    }

    #[test]
    fn determinantal_polynomials() {
        let sm = MomentSeq::exact(&Weight::single_moment(r(1, 1)).unwrap(), 4).unwrap();
        assert_eq!(
            determinantal_phi(&sm, 1).unwrap(),
            Laurent::from_dense(0, vec![r(1, 2), r(1, 1)])
        );
        assert_eq!(
            determinantal_phi(&sm, 2).unwrap(),
            Laurent::from_dense(0, vec![r(1, 3), r(2, 3), r(1, 1)])
        );
        let leb = MomentSeq::exact(&Weight::<Rational>::Lebesgue, 5).unwrap();
        for k in 0..5 {
            assert_eq!(determinantal_phi(&leb, k).unwrap(), Laurent::z_pow(k as i64));
        }
    }

    #[test]
    fn exact_pipeline_single_moment() {
        let fam = Family::build(&Params::single_moment(), 8).unwrap();
        let reps = verify_exact_moments(&fam, &Weight::single_moment(r(1, 1)).unwrap(), 8).unwrap();
        assert_eq!(reps.len(), 4);
        assert!(reps.iter().all(VerificationReport::passed), "{reps:?}");
    }

    #[test]
    fn orthogonality_small_cases() {
        let fam = Family::build(&Params::single_moment(), 4).unwrap();
        let w = Weight::Jacobi(Params::single_moment());
        let v00 = pairing(fam.phi(0), fam.phi(0), &w, 64).unwrap();
        assert!((v00 - 1.0).abs() < 1e-12);
        let v20 = pairing(fam.phi(2), fam.phi(0), &w, 128).unwrap();
        assert!(v20.abs() < 1e-10);
        let p = Params::new(r(1, 1), r(2, 1)).unwrap();
        let fam = Family::build(&p, 4).unwrap();
        let v33 = pairing(fam.phi(3), fam.phi(3), &Weight::Jacobi(p), 64).unwrap();
        let h3 = fam.h(3).to_f64_lossy();
        assert!(((v33 - h3) / h3).abs() < 1e-10);
    }

    #[test]
    fn quadrature_moments_are_symmetric() {
        let w = Weight::Jacobi(Params::new(r(0, 1), r(0, 1)).unwrap());
        let m = MomentSeq::quadrature(&w, 6, 64).unwrap();
        assert!(m.is_symmetric());
        assert!((m.get(0).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(m.provenance(3), Some(Provenance::Quadrature));
        // float Toeplitz ratio tracks the exact norms
        let fam = Family::build(&Params::new(r(0, 1), r(0, 1)).unwrap(), 6).unwrap();
        for n in 0..6 {
            let q = toeplitz_delta(&m, n + 1).unwrap() / toeplitz_delta(&m, n).unwrap();
            assert!((q - fam.h(n).to_f64_lossy()).abs() < 1e-10);
        }
    }
}
