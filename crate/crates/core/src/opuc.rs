//! Jacobi OPUC: Verblunsky parameters, the Szegő recurrence, the reversed
//! polynomial, normalizations, the CMV basis and the Laurent polynomials
//! `psi_n`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

/// Value of the Verblunsky parameter at index -1, assumed by the Szegő map.
pub const A_MINUS_ONE: i64 = -1;

/// The pair `(alpha, beta)` parameterizing the Jacobi OPUC family with weight
/// `(1 - cos t)^(alpha + 1/2) (1 + cos t)^(beta + 1/2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiParams<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Scalar> JacobiParams<T> {
    /// Requires `alpha > -1` and `beta > -1`.
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let minus_one = -T::one();
        if alpha <= minus_one {
            return Err(Error::ParamDomain {
                name: "alpha",
                value: alpha.to_string(),
            });
        }
        if beta <= minus_one {
            return Err(Error::ParamDomain {
                name: "beta",
                value: beta.to_string(),
            });
        }
        Ok(Self { alpha, beta })
    }

    /// `(alpha, beta) = (1/2, -1/2)`: weight `1 - cos t`.
    pub fn single_moment() -> Self {
        Self {
            alpha: T::ratio(1, 2),
            beta: T::ratio(-1, 2),
        }
    }

    /// `alpha = beta = -1/2`: Lebesgue measure, `Phi_n = z^n`.
    pub fn free() -> Self {
        Self {
            alpha: T::ratio(-1, 2),
            beta: T::ratio(-1, 2),
        }
    }

    /// `alpha + beta + 1`, the constant that recurs throughout.
    pub fn s(&self) -> T {
        self.alpha.clone() + self.beta.clone() + T::one()
    }

    pub fn diff(&self) -> T {
        self.alpha.clone() - self.beta.clone()
    }

    /// Closed-form Verblunsky parameter `a_n`.
    pub fn verblunsky(&self, n: usize) -> Result<T> {
        verblunsky_jacobi(self, n)
    }

    pub fn verblunsky_seq(&self, len: usize) -> Result<Vec<T>> {
        (0..len).map(|n| self.verblunsky(n)).collect()
    }

    /// Shifted pair `(alpha + 1, beta + 1)`.
    pub fn raised(&self) -> Self {
        Self {
            alpha: self.alpha.clone() + T::one(),
            beta: self.beta.clone() + T::one(),
        }
    }
}

/// `a_n = -(alpha + 1/2 + (-1)^(n+1) (beta + 1/2)) / (n + alpha + beta + 2)`.
pub fn verblunsky_jacobi<T: Scalar>(p: &JacobiParams<T>, n: usize) -> Result<T> {
    let half = T::ratio(1, 2);
    let b = p.beta.clone() + half.clone();
    let signed_b = if n % 2 == 1 { b } else { -b };
    let num = p.alpha.clone() + half + signed_b;
    let den = T::from_int(n as i64) + p.alpha.clone() + p.beta.clone() + T::from_int(2);
    if den.is_zero() {
        return Err(Error::ParamOutOfRange {
            index: n,
            value: "undefined (zero denominator)".into(),
        });
    }
    let a = -(num / den);
    if a.abs() >= T::one() {
        return Err(Error::ParamOutOfRange {
            index: n,
            value: a.to_string(),
        });
    }
    Ok(a)
}

/// `z^n f(1/z)` for `f` supported in `[0, n]` (coefficient reversal).
pub fn star<T: Scalar>(f: &LaurentPoly<T>, n: i64) -> Result<LaurentPoly<T>> {
    if !f.supported_in(0, n) {
        return Err(Error::BadSupport {
            poly: f.to_string(),
            degree: n,
        });
    }
    Ok(f.reflect().shift(n))
}

/// One Szegő step `Phi_{n+1} = z Phi_n - a_n Phi_n^*` (real parameters).
pub fn szego_advance<T: Scalar>(phi_n: &LaurentPoly<T>, a_n: &T, n: i64) -> Result<LaurentPoly<T>> {
    debug_assert!(phi_n.coeff(n).is_one(), "Phi_n must be monic of degree n");
    let reversed = star(phi_n, n)?;
    Ok(&phi_n.mul_z() - &reversed.scale(a_n))
}

/// CMV basis: `chi_0 = 1`, `chi_{2k-1} = z^k`, `chi_{2k} = z^-k`.
pub fn chi_basis<T: Scalar>(n: usize) -> LaurentPoly<T> {
    LaurentPoly::z_pow(chi_exponent(n))
}

/// Dual CMV basis `chi_n(1/z)`.
pub fn chi_star<T: Scalar>(n: usize) -> LaurentPoly<T> {
    LaurentPoly::z_pow(-chi_exponent(n))
}

pub fn chi_exponent(n: usize) -> i64 {
    let n = n as i64;
    if n % 2 == 1 {
        (n + 1) / 2
    } else {
        -n / 2
    }
}

/// Position of `z^k` in the CMV ordering.
pub fn chi_index(k: i64) -> usize {
    match k {
        0 => 0,
        k if k > 0 => (2 * k - 1) as usize,
        k => (-2 * k) as usize,
    }
}

/// Coordinates of `f` in the CMV basis, keyed by CMV index.
pub fn chi_expansion<T: Scalar>(f: &LaurentPoly<T>) -> BTreeMap<usize, T> {
    f.terms().map(|(k, c)| (chi_index(k), c.clone())).collect()
}

/// `(1/(n+1)) sum_{k<=n} (k+1) z^k`, the closed form at `(1/2, -1/2)`.
pub fn single_moment_phi<T: Scalar>(n: usize) -> LaurentPoly<T> {
    let scale = T::ratio(1, n as i64 + 1);
    LaurentPoly::from_terms((0..=n as i64).map(|k| (k, T::from_int(k + 1) * scale.clone())))
}

/// `psi_{2m} = z^m Phi_{2m}(1/z)`, `psi_{2m+1} = z^-m Phi_{2m+1}(z)`.
pub fn psi_from_phi<T: Scalar>(phi: &LaurentPoly<T>, index: usize) -> LaurentPoly<T> {
    let m = (index / 2) as i64;
    if index % 2 == 0 {
        phi.reflect().shift(m)
    } else {
        phi.shift(-m)
    }
}

/// Monic OPUC `Phi_0..=Phi_N`, their Verblunsky parameters, norms and CMV
/// Laurent polynomials.
#[derive(Clone)]
pub struct OpucFamily<T> {
    params: Option<JacobiParams<T>>,
    max_index: usize,
    phi: Vec<LaurentPoly<T>>,
    a: Vec<T>,
    h: Vec<T>,
    psi: Vec<LaurentPoly<T>>,
}

impl<T: Scalar> OpucFamily<T> {
    /// Jacobi family through index `n_max`.
    pub fn build(params: &JacobiParams<T>, n_max: usize) -> Result<Self> {
        let a = params.verblunsky_seq(n_max + 1)?;
        let mut fam = Self::from_verblunsky(a, n_max)?;
        fam.params = Some(params.clone());
        Ok(fam)
    }

    /// Family generated by an arbitrary real sequence with `|a_n| < 1`;
    /// needs `a_0..=a_{n_max}`.
    pub fn from_verblunsky(a: Vec<T>, n_max: usize) -> Result<Self> {
        if a.len() < n_max + 1 {
            return Err(Error::InvalidArgument(format!(
                "need {} Verblunsky parameters, got {}",
                n_max + 1,
                a.len()
            )));
        }
        check_verblunsky(&a)?;
        let phi = run_recurrence(&a, n_max, None)?;
        Ok(Self::assemble(None, a, phi, n_max))
    }

    /// Jacobi family whose recurrence runs with `a_index + delta` in place
    /// of `a_index`, while the stored Verblunsky table and norms keep the
    /// closed-form values. Used as a negative control: every check that
    /// ties the polynomials to the table must notice the defect.
    pub fn build_perturbed(params: &JacobiParams<T>, n_max: usize, index: usize, delta: T) -> Result<Self> {
        let a = params.verblunsky_seq(n_max + 1)?;
        let phi = run_recurrence(&a, n_max, Some((index, delta)))?;
        Ok(Self::assemble(Some(params.clone()), a, phi, n_max))
    }

    fn assemble(params: Option<JacobiParams<T>>, a: Vec<T>, phi: Vec<LaurentPoly<T>>, n_max: usize) -> Self {
        let mut h = Vec::with_capacity(n_max + 1);
        h.push(T::one());
        for k in 0..n_max {
            let prev = h[k].clone();
            h.push(prev * (T::one() - a[k].square()));
        }
        let psi = phi.iter().enumerate().map(|(n, p)| psi_from_phi(p, n)).collect();
        Self {
            params,
            max_index: n_max,
            phi,
            a,
            h,
            psi,
        }
    }

    pub fn params(&self) -> Option<&JacobiParams<T>> {
        self.params.as_ref()
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn phi(&self, n: usize) -> &LaurentPoly<T> {
        &self.phi[n]
    }

    pub fn phis(&self) -> &[LaurentPoly<T>] {
        &self.phi
    }

    pub fn psi(&self, n: usize) -> &LaurentPoly<T> {
        &self.psi[n]
    }

    pub fn psis(&self) -> &[LaurentPoly<T>] {
        &self.psi
    }

    pub fn a(&self, n: usize) -> &T {
        &self.a[n]
    }

    pub fn verblunsky(&self) -> &[T] {
        &self.a
    }

    /// `a_i` with the boundary convention `a_{-1} = -1`. Indices below -1
    /// are never needed: every formula multiplies them by `1 + a_{-1} = 0`.
    pub fn a_ext(&self, i: i64) -> T {
        match i {
            -1 => T::from_int(A_MINUS_ONE),
            i if i >= 0 => self.a[i as usize].clone(),
            _ => panic!("a_{i} requested; only a_{{-1}} is defined below zero"),
        }
    }

    pub fn h(&self, n: usize) -> &T {
        &self.h[n]
    }

    pub fn norms(&self) -> &[T] {
        &self.h
    }

    /// Orthonormal `phi_n = Phi_n / sqrt(h_n)`, necessarily in floating point.
    pub fn orthonormal_phi(&self, n: usize) -> LaurentPoly<f64> {
        let s = self.h[n].to_f64_lossy().sqrt();
        self.phi[n].map_coeffs(|c| c.to_f64_lossy() / s)
    }

    /// `(n, a_n, h_n, psi_n)` rows in text form for tabular output.
    pub fn table(&self) -> Vec<FamilyRow> {
        (0..=self.max_index)
            .map(|n| FamilyRow {
                n,
                a: self.a[n].to_string(),
                h: self.h[n].to_string(),
                psi: self.psi[n].to_string(),
            })
            .collect()
    }
}

impl<T: Scalar> std::fmt::Debug for OpucFamily<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OpucFamily")
            .field("params", &self.params)
            .field("max_index", &self.max_index)
            .field("phi", &self.phi)
            .field("a", &self.a)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyRow {
    pub n: usize,
    pub a: String,
    pub h: String,
    pub psi: String,
}

fn check_verblunsky<T: Scalar>(a: &[T]) -> Result<()> {
    for (i, v) in a.iter().enumerate() {
        if v.abs() >= T::one() {
            return Err(Error::ParamOutOfRange {
                index: i,
                value: v.to_string(),
            });
        }
    }
    Ok(())
}

fn run_recurrence<T: Scalar>(a: &[T], n_max: usize, perturb: Option<(usize, T)>) -> Result<Vec<LaurentPoly<T>>> {
    let mut phi = Vec::with_capacity(n_max + 1);
    phi.push(LaurentPoly::one());
    for n in 0..n_max {
        let mut an = a[n].clone();
        if let Some((idx, delta)) = &perturb {
            if *idx == n {
                an = an + delta.clone();
            }
        }
        let next = szego_advance(&phi[n], &an, n as i64)?;
        phi.push(next);
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Laurent, Rational};

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    #[test]
    fn verblunsky_special_cases() {
        let sm = JacobiParams::<Rational>::single_moment();
        for n in 0..50 {
            assert_eq!(sm.verblunsky(n).unwrap(), r(-1, n as i64 + 2));
        }
        let free = JacobiParams::<Rational>::free();
        assert!((0..20).all(|n| free.verblunsky(n).unwrap() == r(0, 1)));
        let legendre = JacobiParams::new(r(0, 1), r(0, 1)).unwrap();
        assert_eq!(legendre.verblunsky(1).unwrap(), r(-1, 3));
        assert_eq!(legendre.verblunsky(0).unwrap(), r(0, 1));
    }

    #[test]
    fn parameter_domain_is_enforced() {
        assert!(matches!(
            JacobiParams::new(r(-1, 1), r(0, 1)),
            Err(Error::ParamDomain { name: "alpha", .. })
        ));
        assert!(JacobiParams::new(r(0, 1), r(-3, 2)).is_err());
        assert!(JacobiParams::new(r(-99, 100), r(-99, 100)).is_ok());
    }

    #[test]
    fn out_of_range_verblunsky_is_rejected() {
        // Outside the constructor's domain the closed form can leave the disk.
        let p = JacobiParams {
            alpha: r(-3, 2),
            beta: r(0, 1),
        };
        assert!(matches!(p.verblunsky(0), Err(Error::ParamOutOfRange { index: 0, .. })));
        assert!(OpucFamily::from_verblunsky(vec![r(1, 2), r(1, 1)], 1).is_err());
    }

    #[test]
    fn reversed_polynomial() {
        assert_eq!(star(&Laurent::one(), 0).unwrap(), Laurent::one());
        let f = Laurent::from_dense(0, vec![r(1, 2), r(1, 1)]);
        assert_eq!(star(&f, 1).unwrap(), Laurent::from_dense(0, vec![r(1, 1), r(1, 2)]));
        assert_eq!(star(&star(&f, 3).unwrap(), 3).unwrap(), f);
        assert!(matches!(star(&Laurent::z_pow(-1), 2), Err(Error::BadSupport { .. })));
    }

    #[test]
    fn szego_steps_match_single_moment_rows() {
        let phi1 = szego_advance(&Laurent::one(), &r(-1, 2), 0).unwrap();
        assert_eq!(phi1, Laurent::from_dense(0, vec![r(1, 2), r(1, 1)]));
        let phi2 = szego_advance(&phi1, &r(-1, 3), 1).unwrap();
        assert_eq!(phi2, Laurent::from_dense(0, vec![r(1, 3), r(2, 3), r(1, 1)]));
        let free = szego_advance(&phi2, &r(0, 1), 2).unwrap();
        assert_eq!(free, phi2.mul_z());
    }

    #[test]
    fn single_moment_closed_form() {
        assert_eq!(single_moment_phi::<Rational>(0), Laurent::one());
        assert_eq!(
            single_moment_phi::<Rational>(3),
            Laurent::from_dense(0, vec![r(1, 4), r(2, 4), r(3, 4), r(1, 1)])
        );
        let fam = OpucFamily::build(&JacobiParams::single_moment(), 40).unwrap();
        for n in 0..=40 {
            assert_eq!(fam.phi(n), &single_moment_phi(n));
        }
        assert_eq!(fam.h(1), &r(3, 4));
        assert_eq!(fam.h(2), &r(2, 3));
        assert_eq!(
            fam.psi(2),
            &Laurent::from_terms([(-1, r(1, 1)), (0, r(2, 3)), (1, r(1, 3))])
        );
    }

    #[test]
    fn free_family_is_the_cmv_basis() {
        let fam = OpucFamily::build(&JacobiParams::<Rational>::free(), 12).unwrap();
        for n in 0..=12 {
            assert_eq!(fam.phi(n), &Laurent::z_pow(n as i64));
            assert_eq!(fam.psi(n), &chi_basis(n));
        }
    }

    #[test]
    fn cmv_basis_layout() {
        assert_eq!(chi_basis::<Rational>(3), Laurent::z_pow(2));
        assert_eq!(chi_basis::<Rational>(4), Laurent::z_pow(-2));
        assert_eq!(chi_star::<Rational>(1), chi_basis(2));
        for n in 0..30 {
            assert_eq!(chi_index(chi_exponent(n)), n);
        }
    }

    #[test]
    fn family_invariants() {
        let p = JacobiParams::new(r(1, 1), r(2, 1)).unwrap();
        let fam = OpucFamily::build(&p, 25).unwrap();
        for n in 0..=25 {
            let phi = fam.phi(n);
            assert_eq!(phi.max_exp(), Some(n as i64));
            assert_eq!(phi.coeff(n as i64), r(1, 1));
            assert!(fam.h(n) > &r(0, 1));
            let m = (n / 2) as i64;
            let hi = if n % 2 == 0 { m } else { m + 1 };
            assert!(fam.psi(n).supported_in(-m, hi));
            // psi_n lies in span(chi_0..chi_n) with a nonzero chi_n coefficient
            let exp = chi_expansion(fam.psi(n));
            assert_eq!(exp.keys().next_back(), Some(&n));
        }
    }

    #[test]
    fn perturbed_family_changes_only_the_polynomials() {
        let p = JacobiParams::<Rational>::single_moment();
        let good = OpucFamily::build(&p, 6).unwrap();
        let bad = OpucFamily::build_perturbed(&p, 6, 2, r(1, 100)).unwrap();
        assert_eq!(good.verblunsky(), bad.verblunsky());
        assert_eq!(good.phi(2), bad.phi(2));
        assert_ne!(good.phi(3), bad.phi(3));
    }

    #[test]
    fn float_family_tracks_exact_one() {
        let exact = OpucFamily::build(&JacobiParams::new(r(1, 1), r(2, 1)).unwrap(), 10).unwrap();
        let float = OpucFamily::build(&JacobiParams::new(1.0f64, 2.0).unwrap(), 10).unwrap();
        for n in 0..=10 {
            for (k, c) in exact.phi(n).terms() {
                assert!((float.phi(n).coeff(k) - c.to_f64_lossy()).abs() < 1e-12);
            }
        }
    }
}
