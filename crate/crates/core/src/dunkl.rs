//! The first-order Dunkl-type operator
//! `K = theta + z((a+b+1)z + a-b) / (1 - z^2) (R - I)`
//! with `theta = z d/dz` and `(Rf)(z) = f(1/z)`, and its eigenvalues on the
//! CMV Laurent polynomials.
//!
//! Relation to nonsymmetric Jacobi polynomials: `psi_{2n}` corresponds to
//! `E_n` and `psi_{2n-1}` to `E_{-n}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::moments::{Integrator, Weight};
use crate::opuc::{JacobiParams, OpucFamily};
use crate::report::VerificationReport;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct DunklOperator<T> {
    params: JacobiParams<T>,
    /// `z((a+b+1)z + a-b)`
    numerator: LaurentPoly<T>,
    /// `1 - z^2`
    denominator: LaurentPoly<T>,
}

impl<T: Scalar> std::fmt::Debug for DunklOperator<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DunklOperator").field("params", &self.params).finish()
    }
}

impl<T: Scalar> DunklOperator<T> {
    pub fn new(params: &JacobiParams<T>) -> Self {
        let numerator = LaurentPoly::from_terms([(1, params.diff()), (2, params.s())]);
        let denominator = LaurentPoly::from_terms([(0, T::one()), (2, -T::one())]);
        Self {
            params: params.clone(),
            numerator,
            denominator,
        }
    }

    pub fn params(&self) -> &JacobiParams<T> {
        &self.params
    }

    /// `K f`, exactly. `Rf - f` vanishes at `z = +-1`, so the division by
    /// `1 - z^2` always closes; a remainder means the input was corrupted.
    pub fn apply(&self, f: &LaurentPoly<T>) -> Result<LaurentPoly<T>> {
        let diff = &f.reflect() - f;
        let q = (&self.numerator * &diff).div_exact(&self.denominator)?;
        Ok(&f.theta() + &q)
    }

    pub fn eigenvalue(&self, n: usize) -> T {
        lambda_n(&self.params, n)
    }
}

pub fn apply_k<T: Scalar>(f: &LaurentPoly<T>, p: &JacobiParams<T>) -> Result<LaurentPoly<T>> {
    DunklOperator::new(p).apply(f)
}

/// The single-moment operator `theta + z/(1-z) (R - I)`, written
/// independently of [`DunklOperator`] so the two can be compared.
pub fn apply_single_moment<T: Scalar>(f: &LaurentPoly<T>) -> Result<LaurentPoly<T>> {
    let diff = &f.reflect() - f;
    let one_minus_z = LaurentPoly::from_terms([(0, T::one()), (1, -T::one())]);
    let q = diff.mul_z().div_exact(&one_minus_z)?;
    Ok(&f.theta() + &q)
}

/// `lambda_n = -n/2` for even `n`, `(n+1)/2 + a + b + 1` for odd `n`.
pub fn lambda_n<T: Scalar>(p: &JacobiParams<T>, n: usize) -> T {
    if n % 2 == 0 {
        -T::ratio(n as i64, 2)
    } else {
        T::ratio(n as i64 + 1, 2) + p.s()
    }
}

/// Single-moment eigenvalues: `-n/2` (even), `(n+3)/2` (odd).
pub fn lambda_single_moment<T: Scalar>(n: usize) -> T {
    if n % 2 == 0 {
        -T::ratio(n as i64, 2)
    } else {
        T::ratio(n as i64 + 3, 2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRecord {
    pub n: usize,
    pub lambda: String,
    pub residual_is_zero: bool,
}

/// `K psi_n - lambda_n psi_n = 0` for every `n` in the family, plus the
/// per-`n` records.
pub fn verify_bispectral<T: Scalar>(fam: &OpucFamily<T>) -> Result<(VerificationReport, Vec<EigenRecord>)> {
    let params = fam
        .params()
        .ok_or_else(|| Error::InvalidArgument("bispectrality needs Jacobi parameters".into()))?;
    let k = DunklOperator::new(params);
    let mut rep = VerificationReport::exact("bispectral", "K psi_n = lambda_n psi_n");
    let mut records = Vec::with_capacity(fam.max_index() + 1);
    for n in 0..=fam.max_index() {
        let psi = fam.psi(n);
        let lambda = k.eigenvalue(n);
        let detail = format!("lambda = {lambda}");
        let ok = match k.apply(psi) {
            Ok(kpsi) => rep.check_zero_with(n as i64, detail, &(&kpsi - &psi.scale(&lambda))),
            Err(e) => rep.record(n as i64, false, detail, e.to_string()),
        };
        records.push(EigenRecord {
            n,
            lambda: lambda.to_string(),
            residual_is_zero: ok,
        });
    }
    Ok((rep, records))
}

/// `|<Kf, g> - <f, Kg>|` with
/// `<u, v> = int u(e^{it}) v(e^{-it}) w(t) dt / int w(t) dt`.
pub fn selfadjoint_residual<T: Scalar>(
    f: &LaurentPoly<T>,
    g: &LaurentPoly<T>,
    p: &JacobiParams<T>,
    quad_order: usize,
) -> Result<f64> {
    let k = DunklOperator::new(p);
    let kf = k.apply(f)?;
    let kg = k.apply(g)?;
    let w = Weight::Jacobi(p.clone());
    let mut integ = Integrator::new(&w, quad_order)?;
    let lhs = integ.pairing(&kf, g)?;
    let rhs = integ.pairing(f, &kg)?;
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opuc::{chi_basis, chi_expansion};
    use crate::{Family, Laurent, Params, Rational};
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn grid() -> Vec<Params> {
        [(1, 2, -1, 2), (-1, 2, -1, 2), (0, 1, 0, 1), (1, 1, 2, 1), (3, 2, 1, 2), (-1, 2, 3, 2)]
            .into_iter()
            .map(|(a, b, c, d)| Params::new(r(a, b), r(c, d)).unwrap())
            .collect()
    }

    #[test]
    fn constants_are_in_the_kernel() {
        for p in grid() {
            assert!(apply_k(&Laurent::one(), &p).unwrap().is_zero());
        }
    }

    #[test]
    fn single_moment_psi1() {
        let psi1 = Laurent::from_dense(0, vec![r(1, 2), r(1, 1)]);
        let out = apply_k(&psi1, &Params::single_moment()).unwrap();
        assert_eq!(out, psi1.scale(&r(2, 1)));
    }

    #[test]
    fn free_case_is_theta() {
        let p = Params::free();
        for k in -6..=6 {
            let f = Laurent::z_pow(k);
            assert_eq!(apply_k(&f, &p).unwrap(), f.theta());
        }
        let f: Laurent = "1/3*z^-2 + 5 - 7/4*z^3".parse().unwrap();
        assert_eq!(apply_k(&f, &p).unwrap(), f.theta());
    }

    #[test]
    fn eigenvalues() {
        let p = Params::new(r(1, 1), r(2, 1)).unwrap();
        assert_eq!(lambda_n(&p, 4), r(-2, 1));
        assert_eq!(lambda_n(&p, 0), r(0, 1));
        assert_eq!(lambda_n(&Params::single_moment(), 3), r(3, 1));
        for n in 0..=100 {
            assert_eq!(lambda_n(&Params::single_moment(), n), lambda_single_moment::<Rational>(n));
        }
    }

    #[test]
    fn specialization_matches_single_moment_operator() {
        let p = Params::single_moment();
        for k in -20..=20 {
            let f = Laurent::z_pow(k);
            assert_eq!(apply_k(&f, &p).unwrap(), apply_single_moment(&f).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn triangular_on_chi_basis() {
        for p in grid() {
            let k = DunklOperator::new(&p);
            for n in 0..=16 {
                let out = k.apply(&chi_basis::<Rational>(n)).unwrap();
                let top = chi_expansion(&out).keys().copied().max().unwrap_or(0);
                assert!(top <= n, "chi_{n} maps to chi_{top}");
            }
        }
    }

    #[test]
    fn bispectral_on_grid() {
        for p in grid() {
            let fam = Family::build(&p, 12).unwrap();
            let (rep, recs) = verify_bispectral(&fam).unwrap();
            assert!(rep.passed(), "{p:?}: {:?}", rep.failures);
            assert_eq!(recs.len(), 13);
            assert!(recs.iter().all(|r| r.residual_is_zero));
        }
    }

    #[test]
    fn corrupted_family_breaks_bispectrality() {
        let p = Params::new(r(1, 1), r(2, 1)).unwrap();
        let fam = Family::build_perturbed(&p, 8, 3, r(1, 100)).unwrap();
        let (rep, _) = verify_bispectral(&fam).unwrap();
        assert!(!rep.passed());
        assert!(rep.failures.iter().all(|f| f.index >= 4));
    }

    #[test]
    fn self_adjoint_numerically() {
        let sm = Params::single_moment();
        let fam = Family::build(&sm, 3).unwrap();
        assert!(selfadjoint_residual(fam.psi(1), fam.psi(3), &sm, 128).unwrap() < 1e-10);
        let f: Laurent = "z^-1 + 2 + 3*z^2".parse().unwrap();
        assert!(selfadjoint_residual(&f, &f, &sm, 64).unwrap() < 1e-12);
        let p = Params::new(r(1, 2), r(1, 2)).unwrap();
        assert!(selfadjoint_residual(&Laurent::z_pow(1), &Laurent::z_pow(2), &p, 64).unwrap() < 1e-10);
        let p = Params::new(r(-1, 3), r(2, 5)).unwrap();
        let g: Laurent = "z^-2 - z".parse().unwrap();
        assert!(selfadjoint_residual(&f, &g, &p, 64).unwrap() < 1e-10);
        assert!(selfadjoint_residual(&f, &g, &p, 32).is_err());
    }

    proptest! {
        #[test]
        fn output_stays_laurent(coeffs in prop::collection::vec(-20i64..20, 1..9), lo in -4i64..2,
                                a in -9i64..20, b in -9i64..20) {
            let p = Params::new(r(a, 10), r(b, 10)).unwrap();
            let f = Laurent::from_dense(lo, coeffs.into_iter().map(|c| r(c, 1)).collect());
            let k = DunklOperator::new(&p);
            let out = k.apply(&f);
            prop_assert!(out.is_ok());
            // linearity
            let two = f.scale(&r(2, 1));
            prop_assert_eq!(k.apply(&two).unwrap(), out.unwrap().scale(&r(2, 1)));
        }
    }
}
