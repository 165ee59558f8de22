//! The Szegő map from the Jacobi OPUC to monic orthogonal polynomials on
//! `[-2, 2]`, in the variable `x(z) = z + 1/z`.
//!
//! Polynomials in `x` are kept as reflection-symmetric Laurent polynomials
//! in `z`; equality in `x` is equality in `z`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::opuc::{JacobiParams, OpucFamily};
use crate::report::VerificationReport;
use crate::scalar::Scalar;

/// `x(z) = z + 1/z`.
pub fn x_of_z<T: Scalar>() -> LaurentPoly<T> {
    LaurentPoly::from_terms([(-1, T::one()), (1, T::one())])
}

/// `z - 1/z`.
pub fn w_of_z<T: Scalar>() -> LaurentPoly<T> {
    LaurentPoly::from_terms([(-1, -T::one()), (1, T::one())])
}

/// A Laurent polynomial with `f(1/z) = f(z)`.
#[derive(Clone, PartialEq)]
pub struct SymmetricLaurent<T>(LaurentPoly<T>);

impl<T: Scalar> std::fmt::Debug for SymmetricLaurent<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymmetricLaurent({})", self.0)
    }
}

impl<T: Scalar> std::fmt::Display for SymmetricLaurent<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl<T: Scalar> SymmetricLaurent<T> {
    pub fn new(poly: LaurentPoly<T>) -> Result<Self> {
        if poly.reflect() != poly {
            return Err(Error::InvalidArgument(format!("{poly} is not invariant under z -> 1/z")));
        }
        Ok(Self(poly))
    }

    pub fn poly(&self) -> &LaurentPoly<T> {
        &self.0
    }

    pub fn into_inner(self) -> LaurentPoly<T> {
        self.0
    }

    /// Degree in `x`, i.e. the top power of `z`.
    pub fn degree(&self) -> Option<i64> {
        self.0.max_exp()
    }

    /// Substitutes `x = z + 1/z` into `sum_k c_k x^k`.
    pub fn from_x_coeffs(coeffs: &[T]) -> Self {
        let x = x_of_z::<T>();
        let mut out = LaurentPoly::zero();
        for c in coeffs.iter().rev() {
            out = &(&out * &x) + &LaurentPoly::constant(c.clone());
        }
        Self(out)
    }
}

/// `P_0 = 1`, `P_n = z^{1-n} Phi_{2n-1}(z) + z^{n-1} Phi_{2n-1}(1/z)`.
pub fn build_p<T: Scalar>(fam: &OpucFamily<T>, n: usize) -> Result<SymmetricLaurent<T>> {
    if n == 0 {
        return Ok(SymmetricLaurent(LaurentPoly::one()));
    }
    let phi = family_phi(fam, 2 * n - 1)?;
    let k = n as i64 - 1;
    SymmetricLaurent::new(&phi.shift(-k) + &phi.reflect().shift(k))
}

/// `Q_n = (z^{-n} Phi_{2n+1}(z) - z^n Phi_{2n+1}(1/z)) / (z - 1/z)`.
pub fn build_q<T: Scalar>(fam: &OpucFamily<T>, n: usize) -> Result<SymmetricLaurent<T>> {
    let phi = family_phi(fam, 2 * n + 1)?;
    let k = n as i64;
    let num = &phi.shift(-k) - &phi.reflect().shift(k);
    SymmetricLaurent::new(num.div_exact(&w_of_z())?)
}

fn family_phi<T: Scalar>(fam: &OpucFamily<T>, index: usize) -> Result<&LaurentPoly<T>> {
    if index > fam.max_index() {
        return Err(Error::InvalidArgument(format!(
            "Phi_{index} needed but the family stops at {}",
            fam.max_index()
        )));
    }
    Ok(fam.phi(index))
}

/// Three-term recurrence coefficients of the `P` and `Q` chains:
/// `x P_n = P_{n+1} + b_n P_n + u_n P_{n-1}`, likewise with tildes for `Q`.
/// `u[0]` and `ut[0]` multiply `P_{-1} = 0` and are stored as zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecCoeffs<T> {
    pub b: Vec<T>,
    pub u: Vec<T>,
    pub bt: Vec<T>,
    pub ut: Vec<T>,
}

/// Coefficients for `n = 0..=n_max`, with the convention `a_{-1} = -1`.
///
/// `b_0` formally involves `a_{-2}`, multiplied by `1 + a_{-1} = 0`; it is
/// never read.
pub fn rec_coeffs<T: Scalar>(fam: &OpucFamily<T>, n_max: usize) -> Result<RecCoeffs<T>> {
    let needed = 2 * n_max + 2;
    if needed > fam.max_index() {
        return Err(Error::InvalidArgument(format!(
            "a_{needed} needed but the family stops at {}",
            fam.max_index()
        )));
    }
    let one = T::one();
    let a = |i: i64| fam.a_ext(i);
    let mut out = RecCoeffs {
        b: Vec::new(),
        u: Vec::new(),
        bt: Vec::new(),
        ut: Vec::new(),
    };
    for n in 0..=n_max as i64 {
        let plus = one.clone() + a(2 * n - 1);
        let lower = if plus.is_zero() {
            T::zero()
        } else {
            a(2 * n - 2) * plus.clone()
        };
        out.b.push(a(2 * n) * (one.clone() - a(2 * n - 1)) - lower);
        out.bt.push(a(2 * n) * (one.clone() - a(2 * n + 1)) - a(2 * n + 2) * (one.clone() + a(2 * n + 1)));
        if n == 0 {
            out.u.push(T::zero());
            out.ut.push(T::zero());
        } else {
            out.u.push(plus.clone() * (one.clone() - a(2 * n - 3)) * (one.clone() - a(2 * n - 2).square()));
            out.ut.push(plus * (one.clone() - a(2 * n + 1)) * (one.clone() - a(2 * n).square()));
        }
    }
    Ok(out)
}

/// The `P` and `Q` chains for `n = 0..=n_max + 1` and the recurrence
/// coefficients for `n = 0..=n_max`.
#[derive(Clone, PartialEq)]
pub struct SzegoPair<T> {
    pub p: Vec<SymmetricLaurent<T>>,
    pub q: Vec<SymmetricLaurent<T>>,
    pub coeffs: RecCoeffs<T>,
}

impl<T: Scalar> std::fmt::Debug for SzegoPair<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SzegoPair")
            .field("p", &self.p)
            .field("q", &self.q)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> SzegoPair<T> {
    /// Needs the family built to index `2 n_max + 3`.
    pub fn build(fam: &OpucFamily<T>, n_max: usize) -> Result<Self> {
        let p = (0..=n_max + 1).map(|n| build_p(fam, n)).collect::<Result<_>>()?;
        let q = (0..=n_max + 1).map(|n| build_q(fam, n)).collect::<Result<_>>()?;
        Ok(Self {
            p,
            q,
            coeffs: rec_coeffs(fam, n_max)?,
        })
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.b.len() - 1
    }

    pub fn p(&self, n: usize) -> &LaurentPoly<T> {
        self.p[n].poly()
    }

    pub fn q(&self, n: usize) -> &LaurentPoly<T> {
        self.q[n].poly()
    }

    /// `F_n = (z - 1/z) Q_{n-1}`, the antisymmetric partner of `P_n`.
    pub fn f(&self, n: usize) -> LaurentPoly<T> {
        &w_of_z() * self.q(n - 1)
    }

    /// CSV-friendly rows `(n, b, u, bt, ut)`.
    pub fn coeff_rows(&self) -> Vec<CoeffRow> {
        (0..=self.n_max())
            .map(|n| CoeffRow {
                n,
                b: self.coeffs.b[n].to_string(),
                u: self.coeffs.u[n].to_string(),
                bt: self.coeffs.bt[n].to_string(),
                ut: self.coeffs.ut[n].to_string(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffRow {
    pub n: usize,
    pub b: String,
    pub u: String,
    pub bt: String,
    pub ut: String,
}

fn three_term_residual<T: Scalar>(
    next: &LaurentPoly<T>,
    cur: &LaurentPoly<T>,
    prev: Option<&LaurentPoly<T>>,
    b: &T,
    u: &T,
) -> LaurentPoly<T> {
    let mut lhs = next + &cur.scale(b);
    if let Some(prev) = prev {
        lhs = &lhs + &prev.scale(u);
    }
    &lhs - &(&x_of_z() * cur)
}

/// Reads `b_n, u_n` off `x P_n - P_{n+1}` (top two powers of `z`), with
/// the leftover as a residual.
pub fn fit_coeffs<T: Scalar>(
    next: &LaurentPoly<T>,
    cur: &LaurentPoly<T>,
    prev: Option<&LaurentPoly<T>>,
    n: i64,
) -> (T, T, LaurentPoly<T>) {
    let r = &(&x_of_z() * cur) - next;
    let b = r.coeff(n);
    let r = &r - &cur.scale(&b);
    match prev {
        Some(prev) => {
            let u = r.coeff(n - 1);
            let rest = &r - &prev.scale(&u);
            (b, u, rest)
        }
        None => (b, T::zero(), r),
    }
}

/// Both three-term recurrences, and the coefficients fitted from the chains
/// against those computed from the Verblunsky parameters.
pub fn verify_three_term<T: Scalar>(pair: &SzegoPair<T>) -> Vec<VerificationReport> {
    let c = &pair.coeffs;
    let mut rp = VerificationReport::exact("rec-P", "P_{n+1} + b_n P_n + u_n P_{n-1} = x P_n");
    let mut rq = VerificationReport::exact("rec-Q", "Q_{n+1} + bt_n Q_n + ut_n Q_{n-1} = x Q_n");
    let mut fit = VerificationReport::exact("rec-fitted", "(b_n, u_n) from the P chain = (b_n, u_n) from a_k");
    for n in 0..=pair.n_max() {
        let prev = |v: &[SymmetricLaurent<T>]| (n > 0).then(|| v[n - 1].poly().clone());
        let pp = prev(&pair.p);
        let pq = prev(&pair.q);
        rp.check_zero(n as i64, &three_term_residual(pair.p(n + 1), pair.p(n), pp.as_ref(), &c.b[n], &c.u[n]));
        rq.check_zero(n as i64, &three_term_residual(pair.q(n + 1), pair.q(n), pq.as_ref(), &c.bt[n], &c.ut[n]));
        let (b, u, rest) = fit_coeffs(pair.p(n + 1), pair.p(n), pp.as_ref(), n as i64);
        let ok = b == c.b[n] && u == c.u[n] && rest.is_zero();
        fit.record(n as i64, ok, format!("fitted b = {b}, u = {u}"), rest.to_string());
    }
    vec![rp, rq, fit]
}

/// The Christoffel, Geronimus and inverse-map identities for
/// `n = 1..=n_max` (`0..=n_max` where `n = 0` makes sense). Needs the
/// pair built to at least `n_max` and the family to index `2 n_max`.
pub fn verify_transforms<T: Scalar>(
    fam: &OpucFamily<T>,
    pair: &SzegoPair<T>,
    n_max: usize,
) -> Result<Vec<VerificationReport>> {
    if n_max > pair.n_max() || 2 * n_max > fam.max_index() {
        return Err(Error::InvalidArgument(format!("transforms to n = {n_max} need a larger family")));
    }
    let one = T::one();
    let two = T::from_int(2);
    let half = T::ratio(1, 2);
    let a = |i: i64| fam.a_ext(i);
    let x = x_of_z::<T>();
    let w = w_of_z::<T>();
    let w2 = &w * &w;

    let mut christoffel = VerificationReport::exact(
        "christoffel-Q-P",
        "(z-1/z)^2 Q_{n-1} = P_{n+1} + (a_{2n}+a_{2n-2})(1-a_{2n-1}) P_n - (1-a_{2n-1})(1-a_{2n-3})(1-a_{2n-2}^2) P_{n-1}",
    );
    let mut christoffel_x = VerificationReport::exact(
        "christoffel-Q-P-x",
        "(z-1/z)^2 Q_{n-1} = (x + 2 a_{2n-2}) P_n - 2 (1-a_{2n-3})(1-a_{2n-2}^2) P_{n-1}",
    );
    let mut geronimus = VerificationReport::exact(
        "geronimus",
        "P_n = Q_n - (1+a_{2n-1})(a_{2n}+a_{2n-2}) Q_{n-1} - (1+a_{2n-1})(1+a_{2n-3})(1-a_{2n-2}^2) Q_{n-2}",
    );
    let mut psi_pq = VerificationReport::exact(
        "psi-from-PQ",
        "psi_{2n-1} = (P_n + F_n)/2, psi_{2n} = ((1-a_{2n-1}) P_n - (1+a_{2n-1}) F_n)/2",
    );
    let mut psi_pp = VerificationReport::exact(
        "psi-from-PP",
        "(z-1/z) psi_{2n-1} = (z + a_{2n-2}) P_n - (1-a_{2n-3})(1-a_{2n-2}^2) P_{n-1}, \
         (z-1/z) psi_{2n} = -(a_{2n-1} z + 1/z + a_{2n-2}(1+a_{2n-1})) P_n + (1+a_{2n-1})(1-a_{2n-3})(1-a_{2n-2}^2) P_{n-1}",
    );
    let mut pq_psi = VerificationReport::exact(
        "PQ-from-psi",
        "P_n = psi_{2n} + (1+a_{2n-1}) psi_{2n-1}, F_n = -psi_{2n} + (1-a_{2n-1}) psi_{2n-1}",
    );

    for n in 0..=n_max {
        let ni = n as i64;
        let p = pair.p(n);
        let mut g = pair.q(n).clone();
        if n >= 1 {
            g = &g - &pair.q(n - 1).scale(&((one.clone() + a(2 * ni - 1)) * (a(2 * ni) + a(2 * ni - 2))));
        }
        if n >= 2 {
            let c = (one.clone() + a(2 * ni - 1)) * (one.clone() + a(2 * ni - 3)) * (one.clone() - a(2 * ni - 2).square());
            g = &g - &pair.q(n - 2).scale(&c);
        }
        geronimus.check_zero(ni, &(p - &g));
        if n == 0 {
            continue;
        }

        let (a1, a2, a3) = (a(2 * ni - 1), a(2 * ni - 2), a(2 * ni - 3));
        let norm_prev = (one.clone() - a3.clone()) * (one.clone() - a2.square());
        let lhs = &w2 * pair.q(n - 1);
        let rhs = LaurentPoly::linear_combination([
            (one.clone(), pair.p(n + 1)),
            ((a(2 * ni) + a2.clone()) * (one.clone() - a1.clone()), p),
            (-(one.clone() - a1.clone()) * norm_prev.clone(), pair.p(n - 1)),
        ]);
        christoffel.check_zero(ni, &(&lhs - &rhs));
        let shifted_x = &x + &LaurentPoly::constant(two.clone() * a2.clone());
        let rhs = &(&shifted_x * p) - &pair.p(n - 1).scale(&(two.clone() * norm_prev.clone()));
        christoffel_x.check_zero(ni, &(&lhs - &rhs));

        let f = pair.f(n);
        let odd = fam.psi(2 * n - 1);
        let even = fam.psi(2 * n);
        let r_odd = odd - &(p + &f).scale(&half);
        let r_even = even - &(&p.scale(&(one.clone() - a1.clone())) - &f.scale(&(one.clone() + a1.clone()))).scale(&half);
        check_both(&mut psi_pq, ni, [("odd", &r_odd), ("even", &r_even)]);

        let odd_rhs = &(&LaurentPoly::from_terms([(0, a2.clone()), (1, one.clone())]) * p) - &pair.p(n - 1).scale(&norm_prev);
        let even_mult = LaurentPoly::from_terms([
            (-1, one.clone()),
            (0, a2.clone() * (one.clone() + a1.clone())),
            (1, a1.clone()),
        ]);
        let even_rhs = &pair.p(n - 1).scale(&((one.clone() + a1.clone()) * norm_prev.clone())) - &(&even_mult * p);
        let r_odd = &(&w * odd) - &odd_rhs;
        let r_even = &(&w * even) - &even_rhs;
        check_both(&mut psi_pp, ni, [("odd", &r_odd), ("even", &r_even)]);

        let p_rhs = even + &odd.scale(&(one.clone() + a1.clone()));
        let f_rhs = &odd.scale(&(one.clone() - a1.clone())) - even;
        check_both(&mut pq_psi, ni, [("P", &(p - &p_rhs)), ("F", &(&f - &f_rhs))]);
    }
    Ok(vec![christoffel, christoffel_x, geronimus, psi_pq, psi_pp, pq_psi])
}

/// One checked index for two residuals; failures name the part that broke.
fn check_both<T: Scalar>(rep: &mut VerificationReport, index: i64, parts: [(&str, &LaurentPoly<T>); 2]) {
    let bad: Vec<_> = parts.iter().filter(|(_, r)| !r.is_zero()).collect();
    let detail = bad.iter().map(|(l, _)| *l).collect::<Vec<_>>().join(", ");
    let residual = bad.iter().map(|(_, r)| r.to_string()).collect::<Vec<_>>().join("; ");
    rep.record(index, bad.is_empty(), detail, residual);
}

/// Monic Jacobi polynomial `2^n p_n^{(alpha, beta)}(x/2)` on `[-2, 2]`, as
/// power-basis coefficients in `x` (lowest first), from the standard monic
/// recurrence on `[-1, 1]`.
pub fn classical_jacobi_oracle<T: Scalar>(p: &JacobiParams<T>, n: usize) -> Vec<T> {
    let (al, be) = (p.alpha.clone(), p.beta.clone());
    let ab = al.clone() + be.clone();
    let two = T::from_int(2);
    let four = T::from_int(4);
    let mut prev: Vec<T> = Vec::new();
    let mut cur = vec![T::one()];
    for k in 0..n {
        let kk = T::from_int(k as i64);
        let s = two.clone() * kk.clone() + ab.clone();
        let b = if k == 0 {
            (be.clone() - al.clone()) / (ab.clone() + two.clone())
        } else {
            (be.square() - al.square()) / (s.clone() * (s.clone() + two.clone()))
        };
        let c = match k {
            0 => T::zero(),
            1 => {
                four.clone() * (T::one() + al.clone()) * (T::one() + be.clone())
                    / ((ab.clone() + two.clone()).square() * (ab.clone() + T::from_int(3)))
            }
            _ => {
                four.clone() * kk.clone() * (kk.clone() + al.clone()) * (kk.clone() + be.clone()) * (kk.clone() + ab.clone())
                    / (s.square() * (s.clone() + T::one()) * (s.clone() - T::one()))
            }
        };
        // P_{k+1} = (x - 2 B_k) P_k - 4 C_k P_{k-1}
        let mut next = vec![T::zero(); k + 2];
        for (i, ci) in cur.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + ci.clone();
            next[i] = next[i].clone() - two.clone() * b.clone() * ci.clone();
        }
        for (i, ci) in prev.iter().enumerate() {
            next[i] = next[i].clone() - four.clone() * c.clone() * ci.clone();
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `P_n` against the classical Jacobi polynomial with `(alpha, beta)` and
/// `Q_n` against `(alpha + 1, beta + 1)`, for `n = 0..=n_max`.
pub fn verify_classical_match<T: Scalar>(fam: &OpucFamily<T>, n_max: usize) -> Result<Vec<VerificationReport>> {
    let params = family_params(fam)?;
    let raised = params.raised();
    let mut rp = VerificationReport::exact("classical-P", "P_n(x) = 2^n monic P_n^(alpha,beta)(x/2)");
    let mut rq = VerificationReport::exact("classical-Q", "Q_n(x) = 2^n monic P_n^(alpha+1,beta+1)(x/2)");
    for n in 0..=n_max {
        let want = SymmetricLaurent::from_x_coeffs(&classical_jacobi_oracle(params, n));
        rp.check_zero(n as i64, &(build_p(fam, n)?.poly() - want.poly()));
        let want = SymmetricLaurent::from_x_coeffs(&classical_jacobi_oracle(&raised, n));
        rq.check_zero(n as i64, &(build_q(fam, n)?.poly() - want.poly()));
    }
    Ok(vec![rp, rq])
}

fn family_params<T: Scalar>(fam: &OpucFamily<T>) -> Result<&JacobiParams<T>> {
    fam.params()
        .ok_or_else(|| Error::InvalidArgument("this check needs Jacobi parameters".into()))
}

/// The hypergeometric equation for `P_n(x(z))` multiplied through by
/// `z^2 - 1`:
/// `(z^2-1)(theta^2 - theta) P + ((a+b+2) z^2 + 2(a-b) z + a+b) theta P = n(n+a+b+1)(z^2-1) P`,
/// and `theta P_n = n (z - 1/z) Q_{n-1}`.
pub fn verify_dep_and_pq_identity<T: Scalar>(fam: &OpucFamily<T>, n_max: usize) -> Result<Vec<VerificationReport>> {
    let params = family_params(fam)?;
    let ab = params.alpha.clone() + params.beta.clone();
    let two = T::from_int(2);
    let z2m1 = LaurentPoly::from_terms([(0, -T::one()), (2, T::one())]);
    let first = LaurentPoly::from_terms([
        (0, ab.clone()),
        (1, two.clone() * params.diff()),
        (2, ab.clone() + two),
    ]);
    let mut dep = VerificationReport::exact(
        "DEP",
        "(z^2-1)(theta^2-theta)P_n + ((a+b+2)z^2 + 2(a-b)z + a+b) theta P_n = n(n+a+b+1)(z^2-1) P_n",
    );
    let mut rel = VerificationReport::exact("rel-PQ", "theta P_n(x(z)) = n (z - 1/z) Q_{n-1}(x(z))");
    for n in 0..=n_max {
        let p = build_p(fam, n)?.into_inner();
        let t1 = p.theta();
        let t2 = t1.theta();
        let lhs = &(&z2m1 * &(&t2 - &t1)) + &(&first * &t1);
        let nn = T::from_int(n as i64);
        let eig = nn.clone() * (nn.clone() + ab.clone() + T::one());
        dep.check_zero(n as i64, &(&lhs - &(&z2m1 * &p).scale(&eig)));
        if n >= 1 {
            let q = build_q(fam, n - 1)?.into_inner();
            rel.check_zero(n as i64, &(&t1 - &(&w_of_z() * &q).scale(&nn)));
        }
    }
    Ok(vec![dep, rel])
}

/// `R P_n = P_n`, `R F_n = -F_n`, and `u_n, ut_n > 0` for `n >= 1`.
pub fn verify_symmetry_and_positivity<T: Scalar>(pair: &SzegoPair<T>) -> Vec<VerificationReport> {
    let mut sym = VerificationReport::exact("reflection-parity", "R P_n = P_n, R F_n = -F_n");
    let mut pos = VerificationReport::exact("positivity", "u_n > 0, ut_n > 0 (n >= 1)");
    for n in 0..=pair.n_max() {
        let p = pair.p(n);
        let mut residual = &p.reflect() - p;
        if n >= 1 {
            let f = pair.f(n);
            residual = &residual + &(&f.reflect() + &f);
            let (u, ut) = (&pair.coeffs.u[n], &pair.coeffs.ut[n]);
            pos.record(n as i64, *u > T::zero() && *ut > T::zero(), format!("u = {u}"), ut.to_string());
        }
        sym.check_zero(n as i64, &residual);
    }
    vec![sym, pos]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Family, Laurent, Params, Rational};

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn params(a: (i64, i64), b: (i64, i64)) -> Params {
        Params::new(r(a.0, a.1), r(b.0, b.1)).unwrap()
    }

    fn grid() -> Vec<Params> {
        vec![
            params((1, 2), (-1, 2)),
            params((-1, 2), (-1, 2)),
            params((0, 1), (0, 1)),
            params((1, 1), (2, 1)),
            params((3, 2), (1, 2)),
            params((-1, 2), (3, 2)),
        ]
    }

    #[test]
    fn first_polynomials() {
        let sm = Family::build(&Params::single_moment(), 5).unwrap();
        assert_eq!(build_p(&sm, 1).unwrap().into_inner(), "z^-1 + 1 + z".parse::<Laurent>().unwrap());
        let leg = Family::build(&params((0, 1), (0, 1)), 5).unwrap();
        assert_eq!(build_p(&leg, 1).unwrap().into_inner(), x_of_z());
        for fam in [&sm, &leg] {
            assert_eq!(build_q(fam, 0).unwrap().into_inner(), Laurent::one());
        }
        assert!(build_q(&leg, 3).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let leg = Family::build(&params((0, 1), (0, 1)), 8).unwrap();
        let c = rec_coeffs(&leg, 2).unwrap();
        assert_eq!(c.u[1], r(4, 3));
        assert_eq!(c.b[0], r(0, 1));
        let sm = Family::build(&Params::single_moment(), 8).unwrap();
        assert_eq!(rec_coeffs(&sm, 2).unwrap().b[0], r(-1, 1));
        let free = Family::build(&Params::free(), 12).unwrap();
        let c = rec_coeffs(&free, 4).unwrap();
        assert!(c.b.iter().all(|b| *b == r(0, 1)));
        assert_eq!(c.u[1], r(2, 1));
        assert!(c.u[2..].iter().all(|u| *u == r(1, 1)));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(classical_jacobi_oracle(&params((0, 1), (0, 1)), 1), vec![r(0, 1), r(1, 1)]);
        assert_eq!(classical_jacobi_oracle(&params((0, 1), (0, 1)), 2), vec![r(-4, 3), r(0, 1), r(1, 1)]);
        let p = params((1, 1), (2, 1));
        // x - 2 (beta - alpha) / (alpha + beta + 2)
        assert_eq!(classical_jacobi_oracle(&p, 1), vec![r(-2, 5), r(1, 1)]);
        assert_eq!(classical_jacobi_oracle(&p, 0), vec![r(1, 1)]);
    }

    #[test]
    fn recurrences_and_transforms_on_grid() {
        for p in grid() {
            let fam = Family::build(&p, 23).unwrap();
            let pair = SzegoPair::build(&fam, 10).unwrap();
            for rep in verify_three_term(&pair)
                .into_iter()
                .chain(verify_transforms(&fam, &pair, 8).unwrap())
                .chain(verify_classical_match(&fam, 10).unwrap())
                .chain(verify_dep_and_pq_identity(&fam, 10).unwrap())
                .chain(verify_symmetry_and_positivity(&pair))
            {
                assert!(rep.passed(), "{p:?} {}: {:?}", rep.identity, rep.failures);
            }
        }
    }

    #[test]
    fn literal_even_inverse_map_sign_fails() {
        // With the overall sign of the even line flipped the identity no
        // longer holds for any n >= 1.
        let fam = Family::build(&params((1, 1), (2, 1)), 13).unwrap();
        let pair = SzegoPair::build(&fam, 5).unwrap();
        for n in 1..=5usize {
            let ni = n as i64;
            let a = |i: i64| fam.a_ext(i);
            let one = r(1, 1);
            let mult = Laurent::from_terms([
                (-1, one.clone()),
                (0, a(2 * ni - 2) * (one.clone() + a(2 * ni - 1))),
                (1, a(2 * ni - 1)),
            ]);
            let c = (one.clone() + a(2 * ni - 1)) * (one.clone() - a(2 * ni - 3)) * (one.clone() - a(2 * ni - 2).square());
            let literal = &(&mult * pair.p(n)) - &pair.p(n - 1).scale(&c);
            let residual = &(&w_of_z() * fam.psi(2 * n)) - &literal;
            assert!(!residual.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn fitted_coefficients_detect_corruption() {
        let p = params((1, 1), (2, 1));
        let fam = Family::build_perturbed(&p, 15, 4, r(1, 100)).unwrap();
        let pair = SzegoPair::build(&fam, 5).unwrap();
        let reps = verify_three_term(&pair);
        assert!(!reps.iter().all(VerificationReport::passed));
    }

    #[test]
    fn symmetric_wrapper_rejects_asymmetric_input() {
        assert!(SymmetricLaurent::new(Laurent::z_pow(1)).is_err());
        assert!(SymmetricLaurent::new(x_of_z::<Rational>()).is_ok());
        let x2 = SymmetricLaurent::<Rational>::from_x_coeffs(&[r(0, 1), r(0, 1), r(1, 1)]);
        assert_eq!(x2.poly(), &"z^-2 + 2 + z^2".parse::<Laurent>().unwrap());
        assert_eq!(x2.degree(), Some(2));
    }
}
