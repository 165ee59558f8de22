//! Quadrature rules on the unit circle for even weights.
//!
//! Two rules are used:
//! * the periodic trapezoidal rule, exact for trigonometric polynomials of
//!   degree below the node count, used when the weight itself is smooth;
//! * Gauss-Jacobi after the substitution `t = cos(theta)`, which turns
//!   `(1 - cos)^(a + 1/2) (1 + cos)^(b + 1/2) d theta` on `[0, pi]` into
//!   `(1 - t)^a (1 + t)^b dt` on `[-1, 1]`. The endpoint singularities of the
//!   weight become the Jacobi weight itself, so the rule stays exact for
//!   trigonometric polynomials of degree `< 2 * order` whatever `a, b > -1`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes `theta_i` and weights `w_i` with `sum_i w_i f(theta_i)` approximating
/// `int_0^{2 pi} f(theta) w(theta) d theta`.
#[derive(Debug, Clone)]
pub struct Rule {
    nodes: Vec<(f64, f64)>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.nodes.iter().map(|&(t, w)| f(t) * w).sum()
    }

    pub fn mass(&self) -> f64 {
        self.nodes.iter().map(|&(_, w)| w).sum()
    }

    /// Periodic trapezoidal rule with `order` equispaced nodes, the weight
    /// folded into the node weights.
    pub fn trapezoid(order: usize, weight: impl Fn(f64) -> f64) -> Self {
        let h = 2.0 * PI / order as f64;
        let nodes = (0..order)
            .map(|j| {
                let t = h * j as f64;
                (t, h * weight(t))
            })
            .collect();
        Self { nodes }
    }

    /// Gauss-Jacobi rule for `(1 - cos)^(alpha + 1/2) (1 + cos)^(beta + 1/2)`
    /// with `order` nodes in `t`, mirrored to `+-theta`. The overall constant
    /// of the weights is arbitrary; callers normalize by [`Rule::mass`].
    /// Rules are memoized per `(order, alpha, beta)`.
    pub fn gauss_jacobi(order: usize, alpha: f64, beta: f64) -> Result<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u64, u64), Rule>>> = OnceLock::new();
        let key = (order, alpha.to_bits(), beta.to_bits());
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(rule.clone());
        }
        let rule = Self::gauss_jacobi_uncached(order, alpha, beta)?;
        cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, rule.clone());
        Ok(rule)
    }

    fn gauss_jacobi_uncached(order: usize, alpha: f64, beta: f64) -> Result<Self> {
        let (t, w) = golub_welsch(order, alpha, beta)?;
        let mut nodes = Vec::with_capacity(2 * order);
        for (ti, wi) in t.into_iter().zip(w) {
            let theta = ti.clamp(-1.0, 1.0).acos();
            nodes.push((theta, wi));
            nodes.push((-theta, wi));
        }
        Ok(Self { nodes })
    }
}

/// Monic recurrence coefficients `(B_k, C_k)` of the Jacobi polynomials on
/// `[-1, 1]`: `p_{k+1} = (t - B_k) p_k - C_k p_{k-1}`.
pub fn jacobi_recurrence(k: usize, alpha: f64, beta: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let kf = k as f64;
    let s = 2.0 * kf + ab;
    let b = if k == 0 {
        (beta - alpha) / (ab + 2.0)
    } else {
        (beta * beta - alpha * alpha) / (s * (s + 2.0))
    };
    let c = match k {
        0 => 0.0,
        1 => 4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0).powi(2) * (ab + 3.0)),
        _ => 4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0)),
    };
    (b, c)
}

/// Nodes and (unnormalized) weights from the eigen-decomposition of the
/// Jacobi matrix.
fn golub_welsch(order: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be positive".into()));
    }
    let mut j = DMatrix::<f64>::zeros(order, order);
    for k in 0..order {
        let (b, _) = jacobi_recurrence(k, alpha, beta);
        j[(k, k)] = b;
        if k + 1 < order {
            let (_, c) = jacobi_recurrence(k + 1, alpha, beta);
            let off = c.sqrt();
            j[(k, k + 1)] = off;
            j[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::try_new(j, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::ConvergenceFailure(format!("Gauss-Jacobi nodes at order {order}")))?;
    let nodes = eig.eigenvalues.iter().copied().collect();
    let weights = (0..order).map(|i| eig.eigenvectors[(0, i)].powi(2)).collect();
    Ok((nodes, weights))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_is_exact_for_trig_polynomials() {
        let rule = Rule::trapezoid(16, |_| 1.0);
        let m = rule.mass();
        assert!((m - 2.0 * PI).abs() < 1e-13);
        for k in 1..16 {
            let v = rule.integrate(|t| Complex64::from_polar(1.0, k as f64 * t));
            assert!(v.norm() < 1e-13, "k = {k}: {v}");
        }
    }

    #[test]
    fn gauss_jacobi_matches_trapezoid_on_smooth_weight() {
        // (1 - cos)^1 (1 + cos)^0: alpha = 1/2, beta = -1/2
        let w = |t: f64| 1.0 - t.cos();
        let tr = Rule::trapezoid(64, w);
        let gj = Rule::gauss_jacobi(32, 0.5, -0.5).unwrap();
        for k in 0..10 {
            let f = |t: f64| Complex64::from_polar(1.0, k as f64 * t);
            let a = tr.integrate(f) / tr.mass();
            let b = gj.integrate(f) / gj.mass();
            assert!((a - b).norm() < 1e-13, "k = {k}: {a} vs {b}");
        }
        let s1 = gj.integrate(|t| Complex64::from_polar(1.0, t)) / gj.mass();
        assert!((s1.re + 0.5).abs() < 1e-13);
    }

    #[test]
    fn legendre_recurrence_values() {
        let (b0, _) = jacobi_recurrence(0, 0.0, 0.0);
        let (_, c1) = jacobi_recurrence(1, 0.0, 0.0);
        assert_eq!(b0, 0.0);
        assert!((c1 - 1.0 / 3.0).abs() < 1e-15);
    }
}
