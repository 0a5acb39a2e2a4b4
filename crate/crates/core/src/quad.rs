//! One-dimensional quadrature rules on `[0, 1]` and `[a, b]`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::numctx::ln_gamma_f64;

/// A node of the tanh-sinh rule on `(0, 1)`.
///
/// Both `x` and its complement `c = 1 - x` are stored, each computed
/// without cancellation, together with their logarithms and the log of the
/// Jacobian factor `h * pi * cosh(tau)` (the remaining `x * c` factor of
/// the Jacobian is left to the caller so it can be merged with endpoint
/// exponents).
#[derive(Debug, Clone, Copy)]
pub struct TsNode {
    pub x: f64,
    pub c: f64,
    pub ln_x: f64,
    pub ln_c: f64,
    pub ln_jac: f64,
}

/// `ln(1 + e^s)` without overflow.
pub fn softplus(s: f64) -> f64 {
    if s > 35.0 {
        s + (-s).exp()
    } else if s < -35.0 {
        s.exp()
    } else {
        s.exp().ln_1p()
    }
}

/// Tanh-sinh nodes `x = 1 / (1 + exp(-pi sinh tau))` at `tau = i h`, `|i| <= n_half`,
/// with `h = tau_max / n_half`.
pub fn tanh_sinh(n_half: usize, tau_max: f64) -> Vec<TsNode> {
    let n_half = n_half.max(1);
    let h = tau_max / n_half as f64;
    let pi = std::f64::consts::PI;
    (-(n_half as i64)..=n_half as i64)
        .map(|i| {
            let tau = i as f64 * h;
            let s = pi * tau.sinh();
            let ln_x = -softplus(-s);
            let ln_c = -softplus(s);
            TsNode { x: ln_x.exp(), c: ln_c.exp(), ln_x, ln_c, ln_jac: (h * pi * tau.cosh()).ln() }
        })
        .collect()
}

/// `tau` at which the tanh-sinh variable reaches `-ln x = u`.
pub fn tau_for_depth(u: f64) -> f64 {
    (u / std::f64::consts::PI).asinh()
}

/// Gauss–Jacobi rule for `int_0^1 f(x) x^p (1-x)^q dx` with `p, q > -1`.
///
/// Returns `(nodes, weights)` sorted by node.
pub fn gauss_jacobi01(n: usize, p: f64, q: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(p > -1.0 && q > -1.0, "Jacobi exponents must exceed -1");
    let n = n.max(1);
    // On [-1, 1] the weight is (1-t)^alpha (1+t)^beta with x = (1+t)/2.
    let (alpha, beta) = (q, p);
    let ab = alpha + beta;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let fi = i as f64;
        m[(i, i)] = if i == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * fi + ab) * (2.0 * fi + ab + 2.0))
        };
        if i + 1 < n {
            let j = fi + 1.0;
            let b2 = if i == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * j * (j + alpha) * (j + beta) * (j + ab)
                    / ((2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0))
            };
            m[(i, i + 1)] = b2.sqrt();
            m[(i + 1, i)] = b2.sqrt();
        }
    }
    // Total mass of x^p (1-x)^q on [0, 1].
    let ln_mu0 = ln_gamma_f64(p + 1.0) + ln_gamma_f64(q + 1.0) - ln_gamma_f64(p + q + 2.0);
    let mu0 = ln_mu0.exp();
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            ((1.0 + eig.eigenvalues[i]) / 2.0, mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi01(n, 0.0, 0.0);
    let len = b - a;
    (x.iter().map(|t| a + len * t).collect(), w.iter().map(|v| v * len).collect())
}

/// Neumaier-compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10, 0.0, 2.0);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(7)).sum();
        assert!((s - 256.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_reproduces_beta_moments() {
        // int x^{p+1} (1-x)^q = B(p+2, q+1)
        for &(p, q) in &[(-0.5, -0.5), (0.3, -0.7), (2.0, 1.5), (-0.9, 0.0)] {
            let (x, w) = gauss_jacobi01(12, p, q);
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x).sum();
            let want = (ln_gamma_f64(p + 2.0) + ln_gamma_f64(q + 1.0) - ln_gamma_f64(p + q + 3.0)).exp();
            assert!((s - want).abs() < 1e-13 * want, "p={p} q={q}: {s} vs {want}");
        }
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularities() {
        // int_0^1 x^{-0.7} (1-x)^{-0.4} dx = B(0.3, 0.6)
        let (a, b) = (0.3, 0.9);
        let want = (ln_gamma_f64(a) + ln_gamma_f64(b - a) - ln_gamma_f64(b)).exp();
        let nodes = tanh_sinh(80, tau_for_depth(40.0 / 0.3));
        let s: f64 = nodes.iter().map(|n| (n.ln_jac + a * n.ln_x + (b - a) * n.ln_c).exp()).sum();
        assert!((s - want).abs() < 1e-12 * want, "{s} vs {want}");
    }

    #[test]
    fn complements_are_accurate() {
        for n in tanh_sinh(20, 3.0) {
            assert!((n.x + n.c - 1.0).abs() < 4.0 * f64::EPSILON);
        }
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-16);
        assert_eq!(softplus(800.0), 800.0);
    }
}
