//! The circle Jacobi algebra generated by `K`, `M1`, `M2`:
//! `{K, M1} = g1 M1 + g2 I`, `{K, M2} = g3 M2 + g4 I`, `M1^2 = M2^2 = I`.
//!
//! Relations are checked on a finite basis in two realizations: the
//! functional one (`K` the Dunkl operator, `M1 = R`, `M2 = zR`) on monomials,
//! and the degree one (`K` diagonal, `M1`, `M2` the block matrices) on unit
//! vectors. The matrix map reverses products, but every relation checked
//! here (anticommutators, double commutators, `[X, M1]`) is invariant under
//! that reversal.

use serde::Serialize;

use crate::cmv::{build_m1, build_m2, BandedOperator, TruncatedVector};
use crate::dunkl::{lambda_n, DunklOperator};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::opuc::{JacobiParams, OpucFamily};
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::szego::SzegoPair;

/// Structure constants of `{K, M1} = g1 M1 + g2 I`, `{K, M2} = g3 M2 + g4 I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraParams<T> {
    pub g1: T,
    pub g2: T,
    pub g3: T,
    pub g4: T,
}

impl<T: Scalar> AlgebraParams<T> {
    pub fn is_nondegenerate(&self) -> bool {
        self.g3 != self.g1 && !self.g2.is_zero()
    }

    /// The constants already in canonical form for `(alpha, beta)`.
    pub fn canonical(alpha: &T, beta: &T) -> Self {
        let s = alpha.clone() + beta.clone() + T::one();
        Self {
            g1: s.clone(),
            g2: -s.clone(),
            g3: s + T::one(),
            g4: alpha.clone() - beta.clone(),
        }
    }
}

/// `K -> mu K + nu I` turns the relations into
/// `{K, M1} = (a+b+1)(M1 - I)`, `{K, M2} = (a+b+2) M2 + (a-b) I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalForm<T> {
    pub alpha: T,
    pub beta: T,
    pub mu: T,
    pub nu: T,
}

impl<T: Scalar> CanonicalForm<T> {
    /// The constants obtained by applying `K -> mu K + nu I` to `g`.
    pub fn transformed(&self, g: &AlgebraParams<T>) -> AlgebraParams<T> {
        let two_nu = T::from_int(2) * self.nu.clone();
        AlgebraParams {
            g1: self.mu.clone() * g.g1.clone() + two_nu.clone(),
            g2: self.mu.clone() * g.g2.clone(),
            g3: self.mu.clone() * g.g3.clone() + two_nu,
            g4: self.mu.clone() * g.g4.clone(),
        }
    }

    /// `(alpha, beta)` as Jacobi parameters, when both exceed `-1`.
    pub fn params(&self) -> Result<JacobiParams<T>> {
        JacobiParams::new(self.alpha.clone(), self.beta.clone())
    }
}

pub fn canonicalize<T: Scalar>(g: &AlgebraParams<T>) -> Result<CanonicalForm<T>> {
    if g.g3 == g.g1 {
        return Err(Error::Degenerate(format!("g3 = g1 = {}", g.g1)));
    }
    if g.g2.is_zero() {
        return Err(Error::Degenerate("g2 = 0".into()));
    }
    let two = T::from_int(2);
    let mu = T::one() / (g.g3.clone() - g.g1.clone());
    let s = -(mu.clone() * g.g2.clone());
    let diff = mu.clone() * g.g4.clone();
    let nu = (s.clone() - mu.clone() * g.g1.clone()) / two.clone();
    let alpha = (s.clone() - T::one() + diff.clone()) / two.clone();
    let beta = (s - T::one() - diff) / two;
    let out = CanonicalForm { alpha, beta, mu, nu };
    if out.transformed(g) != AlgebraParams::canonical(&out.alpha, &out.beta) {
        return Err(Error::InconsistentSystem("canonical form does not round-trip".into()));
    }
    Ok(out)
}

/// Structure constants of the quadratic Jacobi algebra
/// `[K1,[K1,K2]] = a K1^2 + d K1 + e1 I`,
/// `[K2,[K2,K1]] = a {K1,K2} + c K1 + d K2 + e2 I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QJParams<T> {
    pub a: T,
    pub c: T,
    pub d: T,
    pub e1: T,
    pub e2: T,
}

/// Constants realized by `X = M2 M1 + M1 M2`, `Y = K^2 - (a+b+1) K`; the
/// extra central term `2(b-a) M1` sits outside these.
pub fn qj_params<T: Scalar>(p: &JacobiParams<T>) -> QJParams<T> {
    let ab = p.alpha.clone() + p.beta.clone();
    QJParams {
        a: T::from_int(2),
        c: ab.clone() * (ab + T::from_int(2)),
        d: T::zero(),
        e1: T::from_int(-8),
        e2: T::from_int(2) * p.diff() * p.s(),
    }
}

/// Coefficient of the central `M1` term in the second relation, `2(b-a)`.
pub fn central_coefficient<T: Scalar>(p: &JacobiParams<T>) -> T {
    T::from_int(-2) * p.diff()
}

/// `lambda_0..=lambda_n` and `a_0..=a_n` solved from the entrywise
/// anticommutator relations with `K` diagonal and `M1`, `M2` in block form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Representation<T> {
    pub lambda: Vec<T>,
    pub a: Vec<T>,
}

/// `c0 + c1 lambda_0`.
#[derive(Debug, Clone, PartialEq)]
struct Affine<T> {
    c0: T,
    c1: T,
}

impl<T: Scalar> Affine<T> {
    /// `k - self`
    fn reflect_about(&self, k: T) -> Self {
        Self {
            c0: k - self.c0.clone(),
            c1: -self.c1.clone(),
        }
    }

    fn at(&self, lambda0: &T) -> T {
        self.c0.clone() + self.c1.clone() * lambda0.clone()
    }
}

/// Solves the relations in the order the structure dictates:
///
/// 1. off-diagonal entries of the `M2` block at `(2n, 2n+1)` give
///    `lambda_{2n} + lambda_{2n+1} = a+b+2`, those of the `M1` block at
///    `(2n+1, 2n+2)` give `lambda_{2n+1} + lambda_{2n+2} = a+b+1`
///    (the factor `1 - a_k^2` is nonzero by nondegeneracy), so every
///    `lambda_k` is affine in the unknown `lambda_0`;
/// 2. the `[1]` corner of `M1` gives `2 lambda_0 = 0`;
/// 3. each remaining diagonal entry is linear in one `a_n`.
pub fn derive_representation<T: Scalar>(alpha: &T, beta: &T, n: usize) -> Result<Representation<T>> {
    let s = alpha.clone() + beta.clone() + T::one();
    let diff = alpha.clone() - beta.clone();
    let two = T::from_int(2);

    let mut sym = vec![Affine {
        c0: T::zero(),
        c1: T::one(),
    }];
    for k in 0..=n {
        let sum = if k % 2 == 0 { s.clone() + T::one() } else { s.clone() };
        sym.push(sym[k].reflect_about(sum));
    }

    // {K, M1}(0, 0): 2 lambda_0 = (a+b+1)(1 - 1)
    let lead = two.clone() * sym[0].c1.clone();
    let rest = two.clone() * sym[0].c0.clone();
    if lead.is_zero() {
        return Err(Error::InconsistentSystem("corner equation does not fix lambda_0".into()));
    }
    let lambda0 = -rest / lead;
    let mut lambda: Vec<T> = sym.iter().map(|l| l.at(&lambda0)).collect();

    let solve = |num: T, den: T, what: &str| -> Result<T> {
        if den.is_zero() {
            Err(Error::InconsistentSystem(format!("{what}: zero coefficient")))
        } else {
            Ok(num / den)
        }
    };
    let mut a = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let (lk, lk1) = (&lambda[k], &lambda[k + 1]);
        let (top, bottom) = if k % 2 == 0 {
            // M2 block: 2 l_k a = (s+1) a + (a-b);  -2 l_{k+1} a = -(s+1) a + (a-b)
            (
                solve(diff.clone(), two.clone() * lk.clone() - s.clone() - T::one(), "M2 upper diagonal")?,
                solve(diff.clone(), s.clone() + T::one() - two.clone() * lk1.clone(), "M2 lower diagonal")?,
            )
        } else {
            // M1 block: 2 l_k a = s (a - 1);  -2 l_{k+1} a = s (-a - 1)
            (
                solve(-s.clone(), two.clone() * lk.clone() - s.clone(), "M1 upper diagonal")?,
                solve(-s.clone(), s.clone() - two.clone() * lk1.clone(), "M1 lower diagonal")?,
            )
        };
        if top != bottom {
            return Err(Error::InconsistentSystem(format!("a_{k}: {top} from one diagonal, {bottom} from the other")));
        }
        if top.abs() >= T::one() {
            return Err(Error::InconsistentSystem(format!("a_{k} = {top} violates |a| < 1")));
        }
        a.push(top);
    }
    lambda.truncate(n + 1);
    Ok(Representation { lambda, a })
}

/// A concrete representation of `K`, `M1`, `M2` on some vector space, with
/// a finite set of basis vectors to test relations on.
pub trait Realization<T: Scalar> {
    type Elem: Clone;

    fn k(&self, v: &Self::Elem) -> Result<Self::Elem>;
    fn m1(&self, v: &Self::Elem) -> Self::Elem;
    fn m2(&self, v: &Self::Elem) -> Self::Elem;
    fn combine(&self, terms: &[(T, &Self::Elem)]) -> Self::Elem;
    /// `Ok(true)` for zero, `Ok(false)` for nonzero, `Err` when the
    /// truncation leaves nothing trustworthy to compare.
    fn zero_state(&self, v: &Self::Elem) -> Option<bool>;
    fn describe(&self, v: &Self::Elem) -> String;
    fn basis(&self) -> Vec<(i64, Self::Elem)>;
    fn params(&self) -> &JacobiParams<T>;

    fn x(&self, v: &Self::Elem) -> Self::Elem {
        let a = self.m2(&self.m1(v));
        let b = self.m1(&self.m2(v));
        self.combine(&[(T::one(), &a), (T::one(), &b)])
    }

    fn y(&self, v: &Self::Elem) -> Result<Self::Elem> {
        let kv = self.k(v)?;
        let kkv = self.k(&kv)?;
        Ok(self.combine(&[(T::one(), &kkv), (-self.params().s(), &kv)]))
    }
}

/// Operators in `z` on Laurent polynomials, tested on `z^k`, `|k| <= d`.
pub struct Functional<T> {
    params: JacobiParams<T>,
    op: DunklOperator<T>,
    degree: i64,
}

impl<T: Scalar> Functional<T> {
    pub fn new(params: &JacobiParams<T>, degree: usize) -> Self {
        Self {
            params: params.clone(),
            op: DunklOperator::new(params),
            degree: degree as i64,
        }
    }
}

impl<T: Scalar> Realization<T> for Functional<T> {
    type Elem = LaurentPoly<T>;

    fn k(&self, v: &LaurentPoly<T>) -> Result<LaurentPoly<T>> {
        self.op.apply(v)
    }

    fn m1(&self, v: &LaurentPoly<T>) -> LaurentPoly<T> {
        v.reflect()
    }

    fn m2(&self, v: &LaurentPoly<T>) -> LaurentPoly<T> {
        v.reflect().mul_z()
    }

    fn combine(&self, terms: &[(T, &LaurentPoly<T>)]) -> LaurentPoly<T> {
        LaurentPoly::linear_combination(terms.iter().map(|(c, v)| (c.clone(), *v)))
    }

    fn zero_state(&self, v: &LaurentPoly<T>) -> Option<bool> {
        Some(v.is_zero())
    }

    fn describe(&self, v: &LaurentPoly<T>) -> String {
        v.to_string()
    }

    fn basis(&self) -> Vec<(i64, LaurentPoly<T>)> {
        (-self.degree..=self.degree).map(|k| (k, LaurentPoly::z_pow(k))).collect()
    }

    fn params(&self) -> &JacobiParams<T> {
        &self.params
    }
}

/// `K = diag(lambda_0..lambda_{N-1})` with the `N x N` cuts of `M1`, `M2`,
/// tested on unit vectors; only rows a finite cut reproduces are compared.
pub struct MatrixRealization<T> {
    params: JacobiParams<T>,
    k: BandedOperator<T>,
    m1: BandedOperator<T>,
    m2: BandedOperator<T>,
}

impl<T: Scalar> MatrixRealization<T> {
    pub fn new(params: &JacobiParams<T>, size: usize) -> Result<Self> {
        let a = params.verblunsky_seq(size)?;
        Ok(Self {
            params: params.clone(),
            k: BandedOperator::diagonal((0..size).map(|n| lambda_n(params, n)).collect()),
            m1: build_m1(&a, size)?,
            m2: build_m2(&a, size)?,
        })
    }

    pub fn size(&self) -> usize {
        self.k.size()
    }

    /// `X = M2 M1 + M1 M2` as a matrix.
    pub fn x_matrix(&self) -> BandedOperator<T> {
        let a = self.m2.mul(&self.m1);
        let b = self.m1.mul(&self.m2);
        BandedOperator::linear_combination(&[(T::one(), &a), (T::one(), &b)])
    }
}

impl<T: Scalar> Realization<T> for MatrixRealization<T> {
    type Elem = TruncatedVector<T>;

    fn k(&self, v: &TruncatedVector<T>) -> Result<TruncatedVector<T>> {
        Ok(self.k.apply(v))
    }

    fn m1(&self, v: &TruncatedVector<T>) -> TruncatedVector<T> {
        self.m1.apply(v)
    }

    fn m2(&self, v: &TruncatedVector<T>) -> TruncatedVector<T> {
        self.m2.apply(v)
    }

    fn combine(&self, terms: &[(T, &TruncatedVector<T>)]) -> TruncatedVector<T> {
        TruncatedVector::linear_combination(terms)
    }

    fn zero_state(&self, v: &TruncatedVector<T>) -> Option<bool> {
        (v.valid > 0).then(|| v.is_zero_on_valid())
    }

    fn describe(&self, v: &TruncatedVector<T>) -> String {
        v.entries
            .range(..v.valid)
            .map(|(i, x)| format!("[{i}] {x}"))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn basis(&self) -> Vec<(i64, TruncatedVector<T>)> {
        (0..self.size())
            .map(|j| (j as i64, TruncatedVector::unit(j, self.size())))
            .collect()
    }

    fn params(&self) -> &JacobiParams<T> {
        &self.params
    }
}

fn sweep<T: Scalar, R: Realization<T>>(
    r: &R,
    mut rep: VerificationReport,
    detail: &str,
    residual: impl Fn(&R, &R::Elem) -> Result<R::Elem>,
) -> VerificationReport {
    for (index, v) in r.basis() {
        match residual(r, &v) {
            Ok(res) => match r.zero_state(&res) {
                Some(ok) => {
                    rep.record(index, ok, detail, r.describe(&res));
                }
                None => rep.skip(index),
            },
            Err(e) => {
                rep.record(index, false, format!("{detail}: operator application failed"), e.to_string());
            }
        }
    }
    rep
}

fn commutator<T: Scalar, R: Realization<T>>(
    r: &R,
    v: &R::Elem,
    a: impl Fn(&R::Elem) -> Result<R::Elem>,
    b: impl Fn(&R::Elem) -> Result<R::Elem>,
) -> Result<R::Elem> {
    let ab = a(&b(v)?)?;
    let ba = b(&a(v)?)?;
    Ok(r.combine(&[(T::one(), &ab), (-T::one(), &ba)]))
}

fn km1_residual<T: Scalar, R: Realization<T>>(r: &R, v: &R::Elem) -> Result<R::Elem> {
    let s = r.params().s();
    let a = r.k(&r.m1(v))?;
    let b = r.m1(&r.k(v)?);
    let m = r.m1(v);
    Ok(r.combine(&[(T::one(), &a), (T::one(), &b), (-s.clone(), &m), (s, v)]))
}

fn km2_residual<T: Scalar, R: Realization<T>>(r: &R, v: &R::Elem) -> Result<R::Elem> {
    let p = r.params();
    let a = r.k(&r.m2(v))?;
    let b = r.m2(&r.k(v)?);
    let m = r.m2(v);
    Ok(r.combine(&[(T::one(), &a), (T::one(), &b), (-(p.s() + T::one()), &m), (-p.diff(), v)]))
}

/// `{K, M1} = (a+b+1)(M1 - I)` and `{K, M2} = (a+b+2) M2 + (a-b) I` on the
/// realization's basis.
pub fn verify_relations<T: Scalar, R: Realization<T>>(r: &R) -> Vec<VerificationReport> {
    vec![
        sweep(
            r,
            VerificationReport::exact("KM12-1", "{K, M1} = (a+b+1)(M1 - I)"),
            "",
            km1_residual::<T, R>,
        ),
        sweep(
            r,
            VerificationReport::exact("KM12-2", "{K, M2} = (a+b+2) M2 + (a-b) I"),
            "",
            km2_residual::<T, R>,
        ),
    ]
}

/// Matrix realization of size `n`. Needs `n >= 3`.
pub fn verify_relations_matrix<T: Scalar>(p: &JacobiParams<T>, n: usize) -> Result<Vec<VerificationReport>> {
    if n < 3 {
        return Err(Error::InvalidArgument("matrix relations need N >= 3".into()));
    }
    Ok(verify_relations(&MatrixRealization::new(p, n)?))
}

/// Functional realization on `z^k`, `|k| <= d`. Needs `d >= 1`.
pub fn verify_relations_functional<T: Scalar>(p: &JacobiParams<T>, d: usize) -> Result<Vec<VerificationReport>> {
    if d < 1 {
        return Err(Error::InvalidArgument("functional relations need d >= 1".into()));
    }
    Ok(verify_relations(&Functional::new(p, d)))
}

/// Basis index with the images `X v` and `Y v`.
pub type XYImage<E> = (i64, E, E);

/// `X` and `Y` on the realization's basis.
pub fn build_xy<T: Scalar, R: Realization<T>>(r: &R) -> Result<Vec<XYImage<R::Elem>>> {
    r.basis()
        .into_iter()
        .map(|(i, v)| Ok((i, r.x(&v), r.y(&v)?)))
        .collect()
}

/// `[X, M1] = [Y, M1] = 0`, `[X,[X,Y]] = 2 X^2 - 8 I` and
/// `[Y,[Y,X]] = 2{X,Y} + (a+b)(a+b+2) X + 2(b-a) M1 + 2(a-b)(a+b+1) I`.
pub fn verify_central_extension_in<T: Scalar, R: Realization<T>>(r: &R) -> Vec<VerificationReport> {
    let qj = qj_params(r.params());
    let central = central_coefficient(r.params());
    let x = |v: &R::Elem| Ok(r.x(v));
    let y = |v: &R::Elem| r.y(v);
    let m1 = |v: &R::Elem| Ok(r.m1(v));

    let cm = sweep(r, VerificationReport::exact("CM", "[X, M1] = [Y, M1] = 0"), "[X, M1]", |r, v| {
        commutator(r, v, x, m1)
    });
    let cm = sweep(r, cm, "[Y, M1]", |r, v| commutator(r, v, y, m1));

    let jr1 = sweep(r, VerificationReport::exact("JR1", "[X,[X,Y]] = 2 X^2 - 8 I"), "", |r, v| {
        let xy = |w: &R::Elem| commutator(r, w, x, y);
        let lhs = commutator(r, v, x, xy)?;
        let xx = r.x(&r.x(v));
        Ok(r.combine(&[(T::one(), &lhs), (-qj.a.clone(), &xx), (-qj.e1.clone(), v)]))
    });

    let jr2 = sweep(
        r,
        VerificationReport::exact(
            "JR2",
            "[Y,[Y,X]] = 2{X,Y} + (a+b)(a+b+2) X + 2(b-a) M1 + 2(a-b)(a+b+1) I",
        ),
        "",
        |r, v| {
            let yx = |w: &R::Elem| commutator(r, w, y, x);
            let lhs = commutator(r, v, y, yx)?;
            let xy = r.x(&r.y(v)?);
            let yx_ = r.y(&r.x(v))?;
            let xv = r.x(v);
            let mv = r.m1(v);
            Ok(r.combine(&[
                (T::one(), &lhs),
                (-qj.a.clone(), &xy),
                (-qj.a.clone(), &yx_),
                (-qj.c.clone(), &xv),
                (-central.clone(), &mv),
                (-qj.e2.clone(), v),
            ]))
        },
    );
    vec![cm, jr1, jr2]
}

/// Both realizations (`|k| <= d` and matrices of size `matrix_size`), plus
/// the cross-realization check that functional `X` on `psi_n` matches row
/// `n` of the matrix `X`.
pub fn verify_central_extension<T: Scalar>(
    p: &JacobiParams<T>,
    d: usize,
    matrix_size: usize,
) -> Result<Vec<VerificationReport>> {
    if d < 2 || matrix_size < 3 {
        return Err(Error::InvalidArgument("central extension checks need d >= 2 and N >= 3".into()));
    }
    let func = Functional::new(p, d);
    let mat = MatrixRealization::new(p, matrix_size)?;
    let mut out = Vec::new();
    for mut rep in verify_central_extension_in(&func) {
        rep.identity.push_str(" (functional)");
        out.push(rep);
    }
    for mut rep in verify_central_extension_in(&mat) {
        rep.identity.push_str(" (matrix)");
        out.push(rep);
    }
    out.push(cross_check_x(p, &mat)?);
    Ok(out)
}

fn cross_check_x<T: Scalar>(p: &JacobiParams<T>, mat: &MatrixRealization<T>) -> Result<VerificationReport> {
    let fam = OpucFamily::build(p, mat.size() - 1)?;
    let func = Functional::new(p, 0);
    let xm = mat.x_matrix();
    let mut rep = VerificationReport::exact("X-cross", "X psi_n = sum_c X[n, c] psi_c, X = z + 1/z");
    for n in 0..mat.size() {
        if n >= xm.valid_rows() {
            rep.skip(n as i64);
            continue;
        }
        let image = LaurentPoly::linear_combination(xm.row(n).map(|(c, v)| (v.clone(), fam.psi(c))));
        let direct = func.x(fam.psi(n));
        let mult = &LaurentPoly::from_terms([(-1, T::one()), (1, T::one())]) * fam.psi(n);
        let residual = &(&direct - &image) + &(&direct - &mult);
        rep.check_zero(n as i64, &residual);
    }
    Ok(rep)
}

/// `Lambda_n = lambda_n^2 - (a+b+1) lambda_n`.
pub fn big_lambda<T: Scalar>(p: &JacobiParams<T>, n: usize) -> T {
    let l = lambda_n(p, n);
    l.square() - p.s() * l
}

/// The `Y` eigenproblem: `Lambda_{2n-1} = Lambda_{2n} = n(a+b+n+1)`,
/// `Y psi_n = Lambda_n psi_n`, `Y P_n = Lambda_{2n} P_n`,
/// `Y F_n = Lambda_{2n} F_n`, `R P_n = P_n`, `R F_n = -F_n`.
pub fn y_eigencheck<T: Scalar>(fam: &OpucFamily<T>, pair: &SzegoPair<T>) -> Result<Vec<VerificationReport>> {
    let p = fam
        .params()
        .ok_or_else(|| Error::InvalidArgument("Y eigencheck needs Jacobi parameters".into()))?;
    let func = Functional::new(p, 0);
    let mut lam = VerificationReport::exact("Lambda", "Lambda_{2n-1} = Lambda_{2n} = n(a+b+n+1)");
    let mut ypsi = VerificationReport::exact("Ypsi", "Y psi_n = Lambda_n psi_n");
    let mut ypf = VerificationReport::exact("YPF", "Y P_n = Lambda_{2n} P_n, Y F_n = Lambda_{2n} F_n");
    let mut parity = VerificationReport::exact("RPF", "R P_n = P_n, R F_n = -F_n");

    for n in 0..=fam.max_index() {
        let y = func.y(fam.psi(n))?;
        ypsi.check_zero(n as i64, &(&y - &fam.psi(n).scale(&big_lambda(p, n))));
    }
    let half = (pair.p.len() - 1).min(fam.max_index() / 2);
    for n in 0..=half {
        let nn = T::from_int(n as i64);
        let want = nn.clone() * (p.alpha.clone() + p.beta.clone() + nn + T::one());
        let even = big_lambda(p, 2 * n);
        let ok = even == want && (n == 0 || big_lambda(p, 2 * n - 1) == want);
        lam.record(n as i64, ok, format!("expected {want}"), even.to_string());

        let pn = pair.p(n);
        let mut residual = &func.y(pn)? - &pn.scale(&want);
        let mut sym = &pn.reflect() - pn;
        if n >= 1 {
            let f = pair.f(n);
            residual = &residual + &(&func.y(&f)? - &f.scale(&want));
            sym = &sym + &(&f.reflect() + &f);
        }
        ypf.check_zero(n as i64, &residual);
        parity.check_zero(n as i64, &sym);
    }
    Ok(vec![lam, ypsi, ypf, parity])
}
