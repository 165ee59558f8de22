//! Sparse Laurent polynomials with real (field) coefficients.
//!
//! Coefficients are restricted to the real line, so the "conjugate
//! coefficients" map that appears in the OPUC theory is the identity and is
//! never materialized.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finitely supported map `exponent -> coefficient`. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<T> {
    coeffs: BTreeMap<i64, T>,
}

impl<T: Scalar> Default for LaurentPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: T) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `z^exp` with unit coefficient.
    pub fn z_pow(exp: i64) -> Self {
        Self::monomial(exp, T::one())
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, T)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    /// Dense constructor: `coeffs[i]` multiplies `z^(lowest + i)`.
    pub fn from_dense(lowest: i64, coeffs: Vec<T>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| (lowest + i as i64, c)))
    }

    fn add_term(&mut self, k: i64, c: T) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> T {
        self.coeffs.get(&k).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `[min_exp, max_exp]`, or `None` for the zero polynomial.
    pub fn window(&self) -> Option<(i64, i64)> {
        Some((self.min_exp()?, self.max_exp()?))
    }

    /// True when every exponent lies in `[lo, hi]`.
    pub fn supported_in(&self, lo: i64, hi: i64) -> bool {
        self.window().is_none_or(|(a, b)| lo <= a && b <= hi)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, v.clone() * c.clone()))
                .collect(),
        }
    }

    /// `f(z) -> f(1/z)`.
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (-k, v.clone())).collect(),
        }
    }

    /// `f(z) -> z^s f(z)`.
    pub fn shift(&self, s: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (k + s, v.clone())).collect(),
        }
    }

    pub fn mul_z(&self) -> Self {
        self.shift(1)
    }

    /// Euler operator `z d/dz`: the coefficient of `z^k` is multiplied by `k`.
    pub fn theta(&self) -> Self {
        Self::from_terms(
            self.coeffs
                .iter()
                .map(|(k, v)| (*k, v.clone() * T::from_int(*k))),
        )
    }

    /// Plain derivative `d/dz`.
    pub fn derivative(&self) -> Self {
        self.theta().shift(-1)
    }

    /// `sum_i c_i f_i`.
    pub fn linear_combination<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (T, &'a Self)>,
    {
        let mut out = Self::zero();
        for (c, f) in terms {
            for (k, v) in &f.coeffs {
                out.add_term(*k, c.clone() * v.clone());
            }
        }
        out
    }

    /// Exact quotient `q` with `q * d == self`.
    ///
    /// After stripping powers of `z` the divisor has a nonzero constant term,
    /// so Laurent divisibility reduces to polynomial divisibility.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let not_divisible = || Error::NotDivisible {
            dividend: self.to_string(),
            divisor: d.to_string(),
        };
        let (d_lo, d_hi) = d.window().ok_or_else(not_divisible)?;
        let Some((f_lo, _)) = self.window() else {
            return Ok(Self::zero());
        };
        let divisor = d.shift(-d_lo);
        let d_deg = d_hi - d_lo;
        let lead = divisor.coeff(d_deg);
        let mut rem = self.shift(-f_lo);
        let mut quotient = Self::zero();
        while let Some(top) = rem.max_exp() {
            if top < d_deg {
                return Err(not_divisible());
            }
            let c = rem.coeff(top) / lead.clone();
            let step = top - d_deg;
            for (k, v) in &divisor.coeffs {
                rem.add_term(k + step, -(c.clone() * v.clone()));
            }
            quotient.add_term(step, c);
        }
        Ok(quotient.shift(f_lo - d_lo))
    }

    pub fn eval(&self, z0: &T) -> Result<T> {
        if z0.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let inv = T::one() / z0.clone();
        let mut acc = T::zero();
        for (k, c) in &self.coeffs {
            let base = if *k >= 0 { z0.clone() } else { inv.clone() };
            acc = acc + c.clone() * pow(&base, k.unsigned_abs());
        }
        Ok(acc)
    }

    /// Floating-point value at `z = e^{i theta}`.
    pub fn eval_unit_circle(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, c)| Complex64::from_polar(c.to_f64_lossy(), *k as f64 * theta))
            .sum()
    }

    /// Coefficient-wise conversion into another field.
    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LaurentPoly<U> {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(k, c)| (*k, f(c))))
    }
}

fn pow<T: Scalar>(base: &T, mut e: u64) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        e >>= 1;
    }
    acc
}

impl<'a, T: Scalar> Add<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn add(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Sub<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn sub(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Mul<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn mul(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr<LaurentPoly<T>> for LaurentPoly<T> {
            type Output = LaurentPoly<T>;
            fn $m(self, rhs: LaurentPoly<T>) -> LaurentPoly<T> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, T: Scalar> $tr<&'a LaurentPoly<T>> for LaurentPoly<T> {
            type Output = LaurentPoly<T>;
            fn $m(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        -&self
    }
}

/// Canonical text form, increasing exponents: `1/3*z^-1 + 2/3 + 1/3*z`.
impl<T: Scalar> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag.is_one();
            match *k {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("z")?,
                1 => write!(f, "{mag}*z")?,
                _ if unit => write!(f, "z^{k}")?,
                _ => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl<T: Scalar + FromStr> FromStr for LaurentPoly<T> {
    type Err = Error;

    /// Inverse of the canonical `Display` form.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse Laurent polynomial `{s}`"));
        let mut tokens = s.split_whitespace();
        let mut out = Self::zero();
        let mut sign = T::one();
        let mut expect_term = true;
        while let Some(tok) = tokens.next() {
            if !expect_term {
                sign = match tok {
                    "+" => T::one(),
                    "-" => -T::one(),
                    _ => return Err(bad()),
                };
                expect_term = true;
                continue;
            }
            let (neg, body) = match tok.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, tok),
            };
            let (coef_txt, zpart) = match body.split_once('*') {
                Some((c, z)) => (Some(c), Some(z)),
                None if body.starts_with('z') => (None, Some(body)),
                None => (Some(body), None),
            };
            let coef = match coef_txt {
                Some(c) => c.parse::<T>().map_err(|_| bad())?,
                None => T::one(),
            };
            let exp = match zpart {
                None => 0,
                Some("z") => 1,
                Some(z) => z
                    .strip_prefix("z^")
                    .and_then(|e| e.parse::<i64>().ok())
                    .ok_or_else(bad)?,
            };
            let mut c = sign.clone() * coef;
            if neg {
                c = -c;
            }
            out.add_term(exp, c);
            expect_term = false;
        }
        if expect_term && !out.is_zero() {
            return Err(bad());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Laurent, Rational};
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn lp(lowest: i64, c: &[(i64, i64)]) -> Laurent {
        Laurent::from_dense(lowest, c.iter().map(|&(p, q)| r(p, q)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let a = lp(0, &[(1, 2), (1, 1)]);
        let b = lp(0, &[(-1, 2), (1, 1)]);
        assert_eq!(&a * &b, lp(0, &[(-1, 4), (0, 1), (1, 1)]));
    }

    #[test]
    fn additive_identity_and_scaling() {
        let f = lp(0, &[(1, 3), (2, 3), (1, 1)]);
        assert_eq!(&f + &Laurent::zero(), f);
        assert_eq!(f.scale(&r(3, 1)), lp(0, &[(1, 1), (2, 1), (3, 1)]));
        assert!(f.scale(&r(0, 1)).is_zero());
    }

    #[test]
    fn reflection_and_shift() {
        assert_eq!(Laurent::z_pow(1).reflect(), Laurent::z_pow(-1));
        assert_eq!(
            lp(0, &[(1, 1), (2, 1), (3, 1)]).reflect(),
            lp(-2, &[(3, 1), (2, 1), (1, 1)])
        );
        assert_eq!(Laurent::one().mul_z(), Laurent::z_pow(1));
        assert_eq!(lp(-1, &[(1, 1), (2, 1)]).mul_z(), lp(0, &[(1, 1), (2, 1)]));
        // (ZR)^2 = I
        let f = lp(-2, &[(1, 1), (0, 1), (5, 7), (-1, 3)]);
        assert_eq!(f.reflect().mul_z().reflect().mul_z(), f);
    }

    #[test]
    fn euler_operator() {
        assert!(Laurent::one().theta().is_zero());
        assert_eq!(Laurent::z_pow(3).theta(), Laurent::monomial(3, r(3, 1)));
        assert_eq!(Laurent::z_pow(-2).theta(), Laurent::monomial(-2, r(-2, 1)));
    }

    #[test]
    fn exact_division() {
        let d = lp(0, &[(1, 1), (0, 1), (-1, 1)]);
        assert_eq!(d.div_exact(&d).unwrap(), Laurent::one());
        let f = Laurent::z_pow(-1) - Laurent::z_pow(1);
        assert_eq!(f.div_exact(&d).unwrap(), Laurent::z_pow(-1));
        let g = lp(0, &[(1, 1), (1, 1)]);
        assert!(matches!(g.div_exact(&d), Err(Error::NotDivisible { .. })));
        assert!(Laurent::zero().div_exact(&d).unwrap().is_zero());
        assert!(g.div_exact(&Laurent::zero()).is_err());
    }

    #[test]
    fn evaluation() {
        let f = lp(0, &[(1, 2), (1, 1)]);
        assert_eq!(f.eval(&r(1, 1)).unwrap(), r(3, 2));
        assert_eq!(Laurent::z_pow(-1).eval(&r(2, 1)).unwrap(), r(1, 2));
        let phi2 = lp(0, &[(1, 3), (2, 3), (1, 1)]);
        assert_eq!(phi2.eval(&r(1, 1)).unwrap(), r(2, 1));
        assert_eq!(f.eval(&r(0, 1)), Err(Error::ZeroArgument));
    }

    #[test]
    fn canonical_text() {
        let f = lp(-1, &[(1, 3), (2, 3), (1, 3)]);
        assert_eq!(f.to_string(), "1/3*z^-1 + 2/3 + 1/3*z");
        let g = lp(-1, &[(-1, 1), (0, 1), (1, 1), (-5, 2)]);
        assert_eq!(g.to_string(), "-z^-1 + z - 5/2*z^2");
        assert_eq!(Laurent::zero().to_string(), "0");
        assert_eq!("1/3*z^-1 + 2/3 + 1/3*z".parse::<Laurent>().unwrap(), f);
        assert_eq!(g.to_string().parse::<Laurent>().unwrap(), g);
        assert!("0".parse::<Laurent>().unwrap().is_zero());
        assert!("1 +".parse::<Laurent>().is_err());
    }

    #[test]
    fn float_instantiation() {
        let f: LaurentPoly<f64> = LaurentPoly::from_dense(0, vec![0.5, 1.0]);
        assert_eq!(f.eval(&1.0).unwrap(), 1.5);
        let z = f.eval_unit_circle(0.0);
        assert!((z.re - 1.5).abs() < 1e-15 && z.im.abs() < 1e-15);
    }

    fn arb_poly() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((-6i64..=6, -9i64..=9, 1i64..=5), 0..6)
            .prop_map(|t| Laurent::from_terms(t.into_iter().map(|(k, p, q)| (k, r(p, q)))))
    }

    fn arb_nonzero() -> impl Strategy<Value = Laurent> {
        arb_poly().prop_filter("nonzero", |f| !f.is_zero())
    }

    proptest! {
        #[test]
        fn reflect_is_ring_involution(f in arb_poly(), g in arb_poly()) {
            prop_assert_eq!(f.reflect().reflect(), f.clone());
            prop_assert_eq!((&f * &g).reflect(), &f.reflect() * &g.reflect());
        }

        #[test]
        fn theta_is_a_derivation(f in arb_poly(), g in arb_poly()) {
            let lhs = (&f * &g).theta();
            let rhs = &(&f.theta() * &g) + &(&f * &g.theta());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn division_inverts_multiplication(f in arb_poly(), d in arb_nonzero()) {
            prop_assert_eq!((&f * &d).div_exact(&d).unwrap(), f);
        }

        #[test]
        fn coefficients_stay_reduced(f in arb_poly(), g in arb_poly()) {
            use num_integer::Integer;
            for (_, c) in (&f * &g).terms() {
                prop_assert!(c.numer().gcd(c.denom()) == num_bigint::BigInt::from(1));
                prop_assert!(c.denom() > &num_bigint::BigInt::from(0));
                prop_assert!(!num_traits::Zero::is_zero(c));
            }
        }

        #[test]
        fn text_form_round_trips(f in arb_poly()) {
            prop_assert_eq!(f.to_string().parse::<Laurent>().unwrap(), f);
        }
    }
}
