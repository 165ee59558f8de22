//! Reflection matrices `M1`, `M2`, the pentadiagonal CMV matrix `C = M1 M2`,
//! and row-wise checks of the CMV recurrence against `psi_n`.
//!
//! Matrices are finite cuts of semi-infinite operators. Each one carries
//! `valid_rows`: rows `0..valid_rows` agree entry-for-entry with the
//! semi-infinite operator, the rest are boundary artifacts of the cut and are
//! never used to decide an identity.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::opuc::OpucFamily;
use crate::report::VerificationReport;
use crate::scalar::Scalar;

/// A diagonal block `[start, start + len)` of a block-diagonal matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpan {
    pub start: usize,
    pub len: usize,
    /// `false` when the truncation cut the block short.
    pub complete: bool,
}

#[derive(Clone)]
pub struct BandedOperator<T> {
    size: usize,
    bandwidth: usize,
    entries: BTreeMap<(usize, usize), T>,
    blocks: Vec<BlockSpan>,
    valid_rows: usize,
}

impl<T: Scalar> std::fmt::Debug for BandedOperator<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BandedOperator")
            .field("size", &self.size)
            .field("bandwidth", &self.bandwidth)
            .field("valid_rows", &self.valid_rows)
            .field("blocks", &self.blocks)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> PartialEq for BandedOperator<T> {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.entries == other.entries
    }
}

impl<T: Scalar> BandedOperator<T> {
    pub fn identity(size: usize) -> Self {
        Self::diagonal(vec![T::one(); size])
    }

    pub fn diagonal(values: Vec<T>) -> Self {
        let size = values.len();
        let mut op = Self::empty(size, 0);
        for (i, v) in values.into_iter().enumerate() {
            op.set(i, i, v);
        }
        op.valid_rows = size;
        op
    }

    fn empty(size: usize, bandwidth: usize) -> Self {
        Self {
            size,
            bandwidth,
            entries: BTreeMap::new(),
            blocks: Vec::new(),
            valid_rows: size,
        }
    }

    fn set(&mut self, r: usize, c: usize, v: T) {
        debug_assert!(r.abs_diff(c) <= self.bandwidth);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Declared bandwidth: entries satisfy `|row - col| <= bandwidth`.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Largest `|row - col|` over the stored nonzero entries.
    pub fn structural_bandwidth(&self) -> usize {
        self.entries.keys().map(|(r, c)| r.abs_diff(*c)).max().unwrap_or(0)
    }

    pub fn valid_rows(&self) -> usize {
        self.valid_rows
    }

    pub fn blocks(&self) -> &[BlockSpan] {
        &self.blocks
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero `(col, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.entries.range((r, 0)..(r + 1, 0)).map(|((_, c), v)| (*c, v))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &T)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.size, rhs.size, "operator sizes differ");
        let mut out = Self::empty(self.size, self.bandwidth + rhs.bandwidth);
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for ((r, k), a) in &self.entries {
            for (c, b) in rhs.row(*k) {
                let e = acc.entry((*r, c)).or_insert_with(T::zero);
                *e = e.clone() + a.clone() * b.clone();
            }
        }
        for ((r, c), v) in acc {
            out.set(r, c, v);
        }
        out.valid_rows = self.valid_rows.min(rhs.valid_rows.saturating_sub(self.bandwidth));
        out
    }

    /// `sum_i c_i A_i` over operators of equal size.
    pub fn linear_combination(terms: &[(T, &Self)]) -> Self {
        let size = terms.first().map_or(0, |(_, op)| op.size);
        let bandwidth = terms.iter().map(|(_, op)| op.bandwidth).max().unwrap_or(0);
        let valid = terms.iter().map(|(_, op)| op.valid_rows).min().unwrap_or(size);
        let mut out = Self::empty(size, bandwidth);
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (c, op) in terms {
            assert_eq!(op.size, size, "operator sizes differ");
            for (k, v) in &op.entries {
                let e = acc.entry(*k).or_insert_with(T::zero);
                *e = e.clone() + c.clone() * v.clone();
            }
        }
        for ((r, col), v) in acc {
            out.set(r, col, v);
        }
        out.valid_rows = valid;
        out
    }

    /// `A v` for a truncated coordinate vector.
    pub fn apply(&self, v: &TruncatedVector<T>) -> TruncatedVector<T> {
        let mut out = BTreeMap::new();
        for ((r, c), a) in &self.entries {
            if let Some(x) = v.entries.get(c) {
                let e = out.entry(*r).or_insert_with(T::zero);
                *e = e.clone() + a.clone() * x.clone();
            }
        }
        out.retain(|_, x: &mut T| !x.is_zero());
        TruncatedVector {
            entries: out,
            valid: self.valid_rows.min(v.valid.saturating_sub(self.bandwidth)),
        }
    }

    /// True when the valid rows coincide with those of the identity.
    pub fn is_identity_on_valid_rows(&self) -> bool {
        (0..self.valid_rows).all(|r| {
            let mut row = self.row(r);
            matches!((row.next(), row.next()), (Some((c, v)), None) if c == r && v.is_one())
        })
    }

    pub fn to_f64_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.size, self.size);
        for ((r, c), v) in &self.entries {
            m[(*r, *c)] = v.to_f64_lossy();
        }
        m
    }
}

/// Coordinate vector whose entries `0..valid` are trustworthy.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedVector<T> {
    pub entries: BTreeMap<usize, T>,
    pub valid: usize,
}

impl<T: Scalar> TruncatedVector<T> {
    pub fn unit(index: usize, size: usize) -> Self {
        Self {
            entries: BTreeMap::from([(index, T::one())]),
            valid: size,
        }
    }

    pub fn linear_combination(terms: &[(T, &Self)]) -> Self {
        let valid = terms.iter().map(|(_, v)| v.valid).min().unwrap_or(0);
        let mut entries: BTreeMap<usize, T> = BTreeMap::new();
        for (c, v) in terms {
            for (i, x) in &v.entries {
                let e = entries.entry(*i).or_insert_with(T::zero);
                *e = e.clone() + c.clone() * x.clone();
            }
        }
        entries.retain(|_, x| !x.is_zero());
        Self { entries, valid }
    }

    /// Zero on every trustworthy coordinate.
    pub fn is_zero_on_valid(&self) -> bool {
        self.entries.range(..self.valid).next().is_none()
    }
}

fn checked_parameter<T: Scalar>(a: &[T], i: usize) -> Result<T> {
    let v = a.get(i).ok_or_else(|| {
        Error::InvalidArgument(format!("Verblunsky parameter a_{i} needed but not supplied"))
    })?;
    if v.abs() >= T::one() {
        return Err(Error::BadVerblunsky {
            index: i,
            value: v.to_string(),
        });
    }
    Ok(v.clone())
}

/// Block-diagonal involution with 2x2 blocks `(a, 1; 1 - a^2, -a)` starting
/// at `first_pair`, `first_pair + 2`, ...; a leading `[1]` when
/// `first_pair == 1`.
fn reflection_matrix<T: Scalar>(a: &[T], size: usize, first_pair: usize) -> Result<BandedOperator<T>> {
    if size == 0 {
        return Err(Error::InvalidArgument("matrix size must be at least 1".into()));
    }
    let mut op = BandedOperator::empty(size, 1);
    if first_pair == 1 {
        op.set(0, 0, T::one());
        op.blocks.push(BlockSpan {
            start: 0,
            len: 1,
            complete: true,
        });
    }
    let mut start = first_pair;
    while start < size {
        let an = checked_parameter(a, start)?;
        op.set(start, start, an.clone());
        if start + 1 < size {
            op.set(start, start + 1, T::one());
            op.set(start + 1, start, T::one() - an.square());
            op.set(start + 1, start + 1, -an);
            op.blocks.push(BlockSpan {
                start,
                len: 2,
                complete: true,
            });
        } else {
            op.blocks.push(BlockSpan {
                start,
                len: 1,
                complete: false,
            });
            op.valid_rows = start;
        }
        start += 2;
    }
    Ok(op)
}

/// `M1 = [1] + (a_1, 1; 1-a_1^2, -a_1) + (a_3, ...) + ...`, cut to `size`.
pub fn build_m1<T: Scalar>(a: &[T], size: usize) -> Result<BandedOperator<T>> {
    reflection_matrix(a, size, 1)
}

/// `M2 = (a_0, 1; 1-a_0^2, -a_0) + (a_2, ...) + ...`, cut to `size`.
pub fn build_m2<T: Scalar>(a: &[T], size: usize) -> Result<BandedOperator<T>> {
    reflection_matrix(a, size, 0)
}

/// `C = M1 M2`, pentadiagonal.
pub fn cmv_matrix<T: Scalar>(a: &[T], size: usize) -> Result<BandedOperator<T>> {
    let c = build_m1(a, size)?.mul(&build_m2(a, size)?);
    debug_assert!(c.structural_bandwidth() <= 2);
    Ok(c)
}

fn row_image<T: Scalar>(op: &BandedOperator<T>, r: usize, psi: &[LaurentPoly<T>]) -> LaurentPoly<T> {
    LaurentPoly::linear_combination(op.row(r).map(|(c, v)| (v.clone(), &psi[c])))
}

fn family_matrices<T: Scalar>(fam: &OpucFamily<T>) -> Result<(BandedOperator<T>, BandedOperator<T>)> {
    let size = fam.max_index() + 1;
    Ok((build_m1(fam.verblunsky(), size)?, build_m2(fam.verblunsky(), size)?))
}

/// `R psi = M1 psi` and `ZR psi = M2 psi`, row by row on valid rows.
pub fn verify_reflection_rows<T: Scalar>(fam: &OpucFamily<T>) -> Result<Vec<VerificationReport>> {
    let (m1, m2) = family_matrices(fam)?;
    let psi = fam.psis();
    let mut r1 = VerificationReport::exact("reflection-M1", "psi_n(1/z) = sum_m (M1)_nm psi_m(z)");
    let mut r2 = VerificationReport::exact("reflection-M2", "z psi_n(1/z) = sum_m (M2)_nm psi_m(z)");
    for n in 0..psi.len() {
        if n < m1.valid_rows() {
            r1.check_zero(n as i64, &(&psi[n].reflect() - &row_image(&m1, n, psi)));
        } else {
            r1.skip(n as i64);
        }
        if n < m2.valid_rows() {
            r2.check_zero(n as i64, &(&psi[n].reflect().mul_z() - &row_image(&m2, n, psi)));
        } else {
            r2.skip(n as i64);
        }
    }
    Ok(vec![r1, r2])
}

/// `M2 psi = z M1 psi` and `C psi = z psi`, row by row on valid rows.
pub fn verify_gevp_and_five_term<T: Scalar>(fam: &OpucFamily<T>) -> Result<Vec<VerificationReport>> {
    let (m1, m2) = family_matrices(fam)?;
    let c = m1.mul(&m2);
    let psi = fam.psis();
    let mut gevp = VerificationReport::exact("gevp", "M2 psi = z M1 psi");
    let mut five = VerificationReport::exact("cmv-recurrence", "C psi = z psi, C = M1 M2");
    for n in 0..psi.len() {
        if n < m1.valid_rows().min(m2.valid_rows()) {
            let lhs = row_image(&m2, n, psi);
            let rhs = row_image(&m1, n, psi).mul_z();
            gevp.check_zero(n as i64, &(&lhs - &rhs));
        } else {
            gevp.skip(n as i64);
        }
        if n < c.valid_rows() {
            five.check_zero(n as i64, &(&row_image(&c, n, psi) - &psi[n].mul_z()));
        } else {
            five.skip(n as i64);
        }
    }
    Ok(vec![gevp, five])
}

/// Eigenvalues of the floating-point image of `op`, sorted by argument.
pub fn truncated_spectrum<T: Scalar>(op: &BandedOperator<T>) -> Result<Vec<Complex64>> {
    let m = op.to_f64_matrix();
    let schur = Schur::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::ConvergenceFailure(format!("Schur iteration on {}x{}", op.size(), op.size())))?;
    let mut eig: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|x, y| x.arg().total_cmp(&y.arg()).then(x.norm().total_cmp(&y.norm())));
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opuc::JacobiParams;
    use crate::{Family, Params, Rational};
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn sm_a(len: usize) -> Vec<Rational> {
        Params::single_moment().verblunsky_seq(len).unwrap()
    }

    #[test]
    fn m1_single_moment_small() {
        let m1 = build_m1(&sm_a(4), 3).unwrap();
        assert_eq!(m1.get(0, 0), r(1, 1));
        assert_eq!(m1.get(1, 1), r(-1, 3));
        assert_eq!(m1.get(1, 2), r(1, 1));
        assert_eq!(m1.get(2, 1), r(8, 9));
        assert_eq!(m1.get(2, 2), r(1, 3));
        assert_eq!(m1.valid_rows(), 3);
        assert!(m1.mul(&m1).is_identity_on_valid_rows());
        assert!(m1.mul(&m1) == BandedOperator::identity(3));
    }

    #[test]
    fn m2_single_moment_small() {
        let m2 = build_m2(&sm_a(2), 2).unwrap();
        assert_eq!(m2.get(0, 0), r(-1, 2));
        assert_eq!(m2.get(0, 1), r(1, 1));
        assert_eq!(m2.get(1, 0), r(3, 4));
        assert_eq!(m2.get(1, 1), r(1, 2));
        assert!(m2.mul(&m2) == BandedOperator::identity(2));
    }

    #[test]
    fn free_case_blocks_are_swaps() {
        let zeros = vec![r(0, 1); 6];
        let m1 = build_m1(&zeros, 5).unwrap();
        let m2 = build_m2(&zeros, 4).unwrap();
        let swaps1 = [(0, 0), (1, 2), (2, 1), (3, 4), (4, 3)];
        assert_eq!(m1.entries().count(), swaps1.len());
        assert!(swaps1.iter().all(|&(i, j)| m1.get(i, j) == r(1, 1)));
        let swaps2 = [(0, 1), (1, 0), (2, 3), (3, 2)];
        assert_eq!(m2.entries().count(), swaps2.len());
        assert!(swaps2.iter().all(|&(i, j)| m2.get(i, j) == r(1, 1)));
    }

    #[test]
    fn cut_blocks_are_flagged() {
        let m1 = build_m1(&sm_a(6), 4).unwrap();
        assert_eq!(m1.valid_rows(), 3);
        assert!(!m1.blocks().last().unwrap().complete);
        let m2 = build_m2(&sm_a(6), 5).unwrap();
        assert_eq!(m2.valid_rows(), 4);
    }

    #[test]
    fn bad_sequences_are_rejected() {
        assert!(matches!(
            build_m2(&[r(1, 1), r(0, 1)], 2),
            Err(Error::BadVerblunsky { index: 0, .. })
        ));
        assert!(build_m1(&[r(0, 1)], 3).is_err());
    }

    #[test]
    fn cmv_corner_entry() {
        let c = cmv_matrix(&sm_a(6), 5).unwrap();
        assert_eq!(c.get(0, 0), r(-1, 2));
        assert_eq!(c.get(0, 1), r(1, 1));
        assert!(c.structural_bandwidth() <= 2);
    }

    #[test]
    fn reflection_rows_small_cases() {
        let fam = Family::build(&Params::single_moment(), 4).unwrap();
        // psi_1(1/z) = a_1 psi_1(z) + psi_2(z)
        let lhs = fam.psi(1).reflect();
        let rhs = &fam.psi(1).scale(&r(-1, 3)) + fam.psi(2);
        assert_eq!(lhs, rhs);
        for rep in verify_reflection_rows(&fam).unwrap() {
            assert!(rep.passed(), "{rep:?}");
        }
        let free = Family::build(&Params::free(), 8).unwrap();
        for rep in verify_reflection_rows(&free).unwrap() {
            assert!(rep.passed());
        }
    }

    #[test]
    fn gevp_and_recurrence_rows() {
        let fam = Family::build(&Params::single_moment(), 8).unwrap();
        let reps = verify_gevp_and_five_term(&fam).unwrap();
        assert!(reps.iter().all(VerificationReport::passed));
        let five = &reps[1];
        assert!((1..=6).all(|n| five.indices_checked.contains(&n)));
        let p = JacobiParams::new(r(1, 1), r(2, 1)).unwrap();
        let fam = Family::build(&p, 24).unwrap();
        let reps = verify_gevp_and_five_term(&fam).unwrap();
        assert!(reps.iter().all(VerificationReport::passed));
        assert!((1..=20).all(|n| reps[1].indices_checked.contains(&n)));
    }

    #[test]
    fn free_truncation_is_nilpotent() {
        // A cut of M1 M2 always ends in a 1x1 remnant a_k = 0 here, so the
        // free-case truncation is a nilpotent shift rather than a unitary.
        let zeros = vec![r(0, 1); 8];
        for size in 2..8 {
            let c = cmv_matrix(&zeros, size).unwrap();
            let mut power = c.clone();
            for _ in 1..size {
                power = power.mul(&c);
            }
            assert!(power.entries().next().is_none(), "C^{size} != 0");
            let spec = truncated_spectrum(&c).unwrap();
            assert_eq!(spec.len(), size);
            assert!(spec.iter().all(|z| z.norm() <= 1.0 + 1e-10));
        }
    }

    #[test]
    fn spectrum_single_entry_and_contraction() {
        let spec = truncated_spectrum(&cmv_matrix(&sm_a(2), 1).unwrap()).unwrap();
        assert_eq!(spec.len(), 1);
        assert!((spec[0] - Complex64::new(-0.5, 0.0)).norm() < 1e-14);
        let spec = truncated_spectrum(&cmv_matrix(&sm_a(22), 21).unwrap()).unwrap();
        assert_eq!(spec.len(), 21);
        assert!(spec.iter().all(|z| z.norm() <= 1.0 + 1e-10));
        assert!(spec.windows(2).all(|w| w[0].arg() <= w[1].arg()));
    }

    fn arb_sequence() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-19i64..=19, 20i64..=40), 52).prop_map(|v| v.into_iter().map(|(p, q)| r(p, q)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn complete_blocks_square_to_identity(a in arb_sequence(), size in 1usize..50) {
            let m1 = build_m1(&a, size).unwrap();
            let m2 = build_m2(&a, size).unwrap();
            prop_assert!(m1.mul(&m1).is_identity_on_valid_rows());
            prop_assert!(m2.mul(&m2).is_identity_on_valid_rows());
        }

        #[test]
        fn cmv_is_pentadiagonal(a in arb_sequence(), size in 2usize..=50) {
            prop_assert!(cmv_matrix(&a, size).unwrap().structural_bandwidth() <= 2);
        }

        #[test]
        fn recurrence_holds_for_any_real_sequence(a in arb_sequence()) {
            let fam = Family::from_verblunsky(a, 15).unwrap();
            for rep in verify_reflection_rows(&fam).unwrap().iter().chain(&verify_gevp_and_five_term(&fam).unwrap()) {
                prop_assert!(rep.passed(), "{:?}", rep);
            }
        }
    }
}
