//! Multiple Euler-type integrals over the unit cube.
//!
//! ```text
//! J_k(a, b) = int_{[0,1]^k} prod_j x_j^{a_j-1} (1-x_j)^{b_j-a_j-1} / Q_k(x)^{a_0} dx
//! Q_k(x)    = 1 - (1 - (... (1 - (1 - x_k) x_{k-1}) ...) x_2) x_1
//! ```
//!
//! `Q_k` is evaluated internally through `Q_k = (1-x_1) + x_1 x_2 Q_{k-2}(x_3, ..)`,
//! a sum of non-negative terms that stays accurate when `Q_k` is tiny and
//! whose logarithm can be formed without underflow. Each term is a
//! monomial in the coordinates and their complements, which is also what
//! [`singularity_margin`] uses to decide convergence at the cube's corners.
//!
//! Quadrature is a tensor product of tanh-sinh rules by default (the
//! integrand has non-separable corner singularities which Gauss–Jacobi
//! rules resolve poorly); a Gauss–Jacobi tensor rule is available through
//! [`QuadRule`]. Monte Carlo samples each coordinate from its Beta weight
//! via a ratio of Gamma variates, so complements `1 - x_j` are never
//! formed by subtraction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::numctx::{ln_beta_f64, HPReal, PrecisionContext};
use crate::quad::{gauss_jacobi01, tanh_sinh, tau_for_depth, KahanSum, TsNode};

/// Largest dimension handled by tensor-product quadrature.
pub const MAX_QUAD_DIM: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralError {
    #[error("a and b must have the same positive length (got {a} and {b})")]
    Arity { a: usize, b: usize },
    #[error("parameter {0} is not finite")]
    NonFinite(f64),
    #[error("coordinate {index}: need a > 0 and b - a > 0 (a = {a}, b = {b})")]
    NotIntegrable { index: usize, a: f64, b: f64 },
    #[error("integral diverges at a corner of the cube (exponent margin {margin:.4})")]
    Divergent { margin: f64 },
    #[error("tensor quadrature supports k <= {MAX_QUAD_DIM} (got k = {0})")]
    DimensionTooLarge(usize),
    #[error("invalid S-integral parameters: {0}")]
    SParams(String),
    #[error("invalid Monte Carlo configuration: {0}")]
    McConfig(String),
}

/// Parameters `(a_0; a_1..a_k; b_1..b_k)` of `J_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ABParams {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl ABParams {
    /// Validates lengths and the endpoint integrability `a_j > 0`, `b_j > a_j`.
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self, IntegralError> {
        if a.len() != b.len() || a.is_empty() {
            return Err(IntegralError::Arity { a: a.len(), b: b.len() });
        }
        if let Some(bad) = std::iter::once(a0).chain(a.iter().copied()).chain(b.iter().copied()).find(|x| !x.is_finite()) {
            return Err(IntegralError::NonFinite(bad));
        }
        for (j, (&aj, &bj)) in a.iter().zip(&b).enumerate() {
            if !(aj > 0.0 && bj - aj > 0.0) {
                return Err(IntegralError::NotIntegrable { index: j + 1, a: aj, b: bj });
            }
        }
        Ok(Self { a0, a, b })
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// `ln prod_j B(a_j, b_j - a_j)`: the total mass of the coordinate weights.
    pub fn ln_weight_mass(&self) -> f64 {
        self.a.iter().zip(&self.b).map(|(&a, &b)| ln_beta_f64(a, b - a)).sum()
    }
}

/// How `Q_k` is evaluated by [`eval_q`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QVariant {
    /// `1 - x_1 (1 - x_2 (1 - ... (1 - x_k)))`, innermost bracket first.
    Nested,
    /// `Q_k(x) = 1 - x_1 Q_{k-1}(x_2, ..., x_k)`.
    RecursiveFront,
    /// `Q_k(x) = Q_{k-1}(x_1, ..., x_{k-1}) + (-1)^k x_1 ... x_k`.
    RecursiveBack,
}

/// `Q_k(x)`; `Q_0 = 1`.
pub fn eval_q(x: &[f64], variant: QVariant) -> f64 {
    match variant {
        QVariant::Nested => x.iter().rev().fold(1.0, |q, &xj| 1.0 - xj * q),
        QVariant::RecursiveFront => match x.split_first() {
            None => 1.0,
            Some((x1, rest)) => 1.0 - x1 * eval_q(rest, QVariant::RecursiveFront),
        },
        QVariant::RecursiveBack => match x.split_last() {
            None => 1.0,
            Some((_, init)) => {
                let prod: f64 = x.iter().product();
                let sign = if x.len() % 2 == 0 { 1.0 } else { -1.0 };
                eval_q(init, QVariant::RecursiveBack) + sign * prod
            }
        },
    }
}

/// `Q_k` from coordinates and their complements as a sum of non-negative terms.
pub fn q_positive(x: &[f64], c: &[f64]) -> f64 {
    let k = x.len();
    // q[i] = Q_{k-i}(x_{i+1}, ..., x_k), built from the back.
    let mut q_next2 = 1.0; // q[i+2]
    let mut q_next = if k > 0 { 1.0 } else { return 1.0 }; // q[k] = 1
    for i in (0..k).rev() {
        let qi = if i + 1 == k { c[i] } else { c[i] + x[i] * x[i + 1] * q_next2 };
        q_next2 = q_next;
        q_next = qi;
    }
    q_next
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Q_k` from the logarithms of coordinates and complements.
pub fn ln_q_positive(ln_x: &[f64], ln_c: &[f64]) -> f64 {
    let k = ln_x.len();
    if k == 0 {
        return 0.0;
    }
    let mut l_next2 = 0.0;
    let mut l_next = 0.0;
    for i in (0..k).rev() {
        let li = if i + 1 == k { ln_c[i] } else { log_add(ln_c[i], ln_x[i] + ln_x[i + 1] + l_next2) };
        l_next2 = l_next;
        l_next = li;
    }
    l_next
}

/// The integrand of `J_k` at an interior point.
pub fn integrand(ab: &ABParams, x: &[f64]) -> f64 {
    assert_eq!(x.len(), ab.k(), "point dimension must equal k");
    let c: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
    let mut ln_w = 0.0;
    for j in 0..ab.k() {
        ln_w += (ab.a[j] - 1.0) * x[j].ln() + (ab.b[j] - ab.a[j] - 1.0) * c[j].ln();
    }
    (ln_w - ab.a0 * q_positive(x, &c).ln()).exp()
}

/// Exponent vectors of the monomials of `Q_k` near the cube vertex `v`.
///
/// The terms of `Q_k` are `x_1 ... x_{i-1} (1 - x_i)` for odd `i <= k`, plus
/// `x_1 ... x_k` when `k` is even. Near a vertex each factor is either
/// bounded away from zero or comparable to the distance `d_j` to the vertex.
fn vertex_monomials(k: usize, v: &[bool]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let x_exp = |j: usize| if v[j] { 0.0 } else { 1.0 };
    let c_exp = |j: usize| if v[j] { 1.0 } else { 0.0 };
    let mut i = 0;
    while i < k {
        let mut m = vec![0.0; k];
        for (j, mj) in m.iter_mut().enumerate().take(i) {
            *mj = x_exp(j);
        }
        m[i] = c_exp(i);
        out.push(m);
        i += 2;
    }
    if k % 2 == 0 {
        out.push((0..k).map(x_exp).collect());
    }
    out
}

/// Minimum over `w in [0,1]^k` with `max w = 1` of `max_m (l_m . w)`, by a
/// grid search with a Lipschitz correction. Returns (grid minimum, correction).
fn facet_min(lines: &[Vec<f64>], k: usize) -> (f64, f64) {
    let g = match k {
        1 => 2,
        2 => 201,
        3 => 41,
        4 => 17,
        5 => 9,
        _ => 5,
    };
    let lip = lines.iter().map(|l| l.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let corr = lip * 0.5 / (g as f64 - 1.0).max(1.0);
    let mut best = f64::INFINITY;
    let mut w = vec![0.0; k];
    for fixed in 0..k {
        let free: Vec<usize> = (0..k).filter(|&j| j != fixed).collect();
        let total = (g as usize).pow(free.len() as u32);
        for idx in 0..total {
            let mut r = idx;
            for &j in &free {
                w[j] = (r % g) as f64 / (g as f64 - 1.0);
                r /= g;
            }
            w[fixed] = 1.0;
            let val = lines
                .iter()
                .map(|l| l.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            best = best.min(val);
        }
    }
    (best, if k == 1 { 0.0 } else { corr })
}

/// Convergence margin of `J_k` at the corners of the cube.
///
/// Along a path approaching a vertex with distances `d_j = exp(-U w_j)`,
/// the integrand times the volume element decays like `exp(-U phi(w))` where
/// `phi(w) = max over monomials m of Q_k of (alpha - a_0 m) . w` and `alpha_j`
/// is the weight exponent at that end of coordinate `j`. The integral
/// converges iff `phi > 0` on every such path; the returned value is the
/// smallest `phi` over all vertices and directions normalised by `max w = 1`.
/// It is positive iff the integral converges (up to the grid resolution).
pub fn singularity_margin(ab: &ABParams) -> f64 {
    singularity_margin_detail(ab).0
}

/// The margin and a conservative lower bound accounting for grid resolution.
fn singularity_margin_detail(ab: &ABParams) -> (f64, f64) {
    let k = ab.k();
    let mut best = f64::INFINITY;
    let mut best_safe = f64::INFINITY;
    for mask in 0..(1u32 << k) {
        let v: Vec<bool> = (0..k).map(|j| mask >> j & 1 == 1).collect();
        let alpha: Vec<f64> = (0..k).map(|j| if v[j] { ab.b[j] - ab.a[j] } else { ab.a[j] }).collect();
        let lines: Vec<Vec<f64>> = vertex_monomials(k, &v)
            .into_iter()
            .map(|m| alpha.iter().zip(&m).map(|(al, mj)| al - ab.a0 * mj).collect())
            .collect();
        let (m, corr) = facet_min(&lines, k);
        best = best.min(m);
        best_safe = best_safe.min(if m > 2.0 * corr { m - corr } else { m / 2.0 });
    }
    (best, best_safe)
}

/// Tensor-product rule used by [`eval_j_quad_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadRule {
    TanhSinh,
    GaussJacobi,
}

/// Result of a quadrature evaluation.
#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: HPReal,
    /// `|I(2n) - I(n)| / |I(2n)|`.
    pub rel_err: f64,
    pub nodes_per_dim: usize,
    pub rule: QuadRule,
    /// Convergence margin from [`singularity_margin`].
    pub margin: f64,
}

/// `J_k` by tensor tanh-sinh quadrature with `nodes_per_dim` coarse nodes
/// and the doubled rule for the error estimate.
pub fn eval_j_quad(ab: &ABParams, nodes_per_dim: usize, ctx: &PrecisionContext) -> Result<QuadResult, IntegralError> {
    eval_j_quad_with(ab, QuadRule::TanhSinh, nodes_per_dim, ctx)
}

pub fn eval_j_quad_with(
    ab: &ABParams,
    rule: QuadRule,
    nodes_per_dim: usize,
    ctx: &PrecisionContext,
) -> Result<QuadResult, IntegralError> {
    let k = ab.k();
    if k > MAX_QUAD_DIM {
        return Err(IntegralError::DimensionTooLarge(k));
    }
    let (margin, safe) = singularity_margin_detail(ab);
    if !(margin > 0.0) {
        return Err(IntegralError::Divergent { margin });
    }
    let n = nodes_per_dim.max(2);
    let (coarse, fine) = match rule {
        QuadRule::TanhSinh => {
            let tol = ctx.rel_tol().max(1e-17) * 1e-2;
            let depth = (tol.recip().ln() + 5.0) / safe;
            let tau_max = tau_for_depth(depth.min(1e5));
            let half = n.div_ceil(2);
            (ts_tensor(ab, half, tau_max), ts_tensor(ab, 2 * half, tau_max))
        }
        QuadRule::GaussJacobi => (gj_tensor(ab, n), gj_tensor(ab, 2 * n)),
    };
    let rel_err = if fine == 0.0 { (fine - coarse).abs() } else { ((fine - coarse) / fine).abs() };
    Ok(QuadResult { value: ctx.real(fine), rel_err, nodes_per_dim: n, rule, margin })
}

/// Doubles the node count from `start` until the error estimate drops
/// below `target` or `max_nodes` is reached.
pub fn eval_j_adaptive(
    ab: &ABParams,
    target: f64,
    start: usize,
    max_nodes: usize,
    ctx: &PrecisionContext,
) -> Result<QuadResult, IntegralError> {
    let mut n = start.max(4);
    loop {
        let r = eval_j_quad(ab, n, ctx)?;
        if r.rel_err < target || 2 * n > max_nodes {
            return Ok(r);
        }
        n *= 2;
    }
}

/// Per-dimension node data with the coordinate weight folded into `ln_w`.
struct DimNodes {
    ln_w: Vec<f64>,
    ln_x: Vec<f64>,
    ln_c: Vec<f64>,
    x: Vec<f64>,
    c: Vec<f64>,
}

fn ts_dim(nodes: &[TsNode], a: f64, b: f64) -> DimNodes {
    DimNodes {
        ln_w: nodes.iter().map(|n| n.ln_jac + a * n.ln_x + (b - a) * n.ln_c).collect(),
        ln_x: nodes.iter().map(|n| n.ln_x).collect(),
        ln_c: nodes.iter().map(|n| n.ln_c).collect(),
        x: nodes.iter().map(|n| n.x).collect(),
        c: nodes.iter().map(|n| n.c).collect(),
    }
}

fn ts_tensor(ab: &ABParams, half: usize, tau_max: f64) -> f64 {
    let nodes = tanh_sinh(half, tau_max);
    let dims: Vec<DimNodes> = (0..ab.k()).map(|j| ts_dim(&nodes, ab.a[j], ab.b[j])).collect();
    tensor_sum(&dims, ab.a0)
}

fn gj_tensor(ab: &ABParams, n: usize) -> f64 {
    let dims: Vec<DimNodes> = (0..ab.k())
        .map(|j| {
            let (x, w) = gauss_jacobi01(n, ab.a[j] - 1.0, ab.b[j] - ab.a[j] - 1.0);
            let c: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
            DimNodes {
                ln_w: w.iter().map(|v| v.ln()).collect(),
                ln_x: x.iter().map(|v| v.ln()).collect(),
                ln_c: c.iter().map(|v| v.ln()).collect(),
                x,
                c,
            }
        })
        .collect();
    tensor_sum(&dims, ab.a0)
}

/// `sum over the tensor grid of exp(sum_j ln_w_j - a0 ln Q)`, parallel over
/// the first coordinate and reduced in index order.
fn tensor_sum(dims: &[DimNodes], a0: f64) -> f64 {
    let k = dims.len();
    let n0 = dims[0].x.len();
    let partials: Vec<f64> = (0..n0)
        .into_par_iter()
        .map(|i0| {
            let mut acc = KahanSum::default();
            let sizes: Vec<usize> = dims.iter().map(|d| d.x.len()).collect();
            let mut idx = vec![0usize; k];
            idx[0] = i0;
            let mut x = vec![0.0; k];
            let mut c = vec![0.0; k];
            let mut lx = vec![0.0; k];
            let mut lc = vec![0.0; k];
            loop {
                let mut lw = 0.0;
                for j in 0..k {
                    let d = &dims[j];
                    let i = idx[j];
                    lw += d.ln_w[i];
                    x[j] = d.x[i];
                    c[j] = d.c[i];
                    lx[j] = d.ln_x[i];
                    lc[j] = d.ln_c[i];
                }
                if lw > -745.0 - a0.abs() * 800.0 {
                    let q = q_positive(&x, &c);
                    let lq = if q > 1e-280 { q.ln() } else { ln_q_positive(&lx, &lc) };
                    let v = (lw - a0 * lq).exp();
                    acc.add(v);
                }
                // advance the odometer over dimensions 1..k
                let mut j = k;
                loop {
                    if j <= 1 {
                        return acc.value();
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < sizes[j] {
                        break;
                    }
                    idx[j] = 0;
                }
            }
        })
        .collect();
    let mut total = KahanSum::default();
    for p in partials {
        total.add(p);
    }
    total.value()
}

/// Monte Carlo configuration; results depend only on these three values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub chunks: u32,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, chunks: u32) -> Result<Self, IntegralError> {
        if samples == 0 {
            return Err(IntegralError::McConfig("samples must be positive".into()));
        }
        if chunks == 0 {
            return Err(IntegralError::McConfig("chunks must be positive".into()));
        }
        Ok(Self { samples, seed, chunks })
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McResult {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let mean = self.mean + d * o.n as f64 / n as f64;
        let m2 = self.m2 + o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n as f64 - 1.0) / self.n as f64).sqrt()
        }
    }
}

/// Samples `(x_j, 1 - x_j)` from the Beta(a_j, b_j - a_j) weights and averages `f(x, c)`.
fn beta_sampled_mean<F>(a: &[f64], b: &[f64], mc: &McConfig, f: F) -> Moments
where
    F: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    let k = a.len();
    let chunks = mc.chunks as u64;
    let per = mc.samples / chunks;
    let extra = mc.samples % chunks;
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let n = per + u64::from(ci < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_stream(ci);
            let ga: Vec<Gamma<f64>> = a.iter().map(|&s| Gamma::new(s, 1.0).expect("positive shape")).collect();
            let gb: Vec<Gamma<f64>> =
                a.iter().zip(b).map(|(&s, &t)| Gamma::new(t - s, 1.0).expect("positive shape")).collect();
            let mut x = vec![0.0; k];
            let mut c = vec![0.0; k];
            let mut m = Moments::default();
            for _ in 0..n {
                for j in 0..k {
                    let (u, v) = loop {
                        let u = ga[j].sample(&mut rng);
                        let v = gb[j].sample(&mut rng);
                        if u + v > 0.0 {
                            break (u, v);
                        }
                    };
                    let s = u + v;
                    x[j] = u / s;
                    c[j] = v / s;
                }
                m.push(f(&x, &c));
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// `J_k` by importance-sampled Monte Carlo.
///
/// For `k = 1` the factor `Q_1^{-a_0} = (1-x)^{-a_0}` is folded into the
/// Beta weight, so the estimate is the exact Beta value with zero error.
pub fn eval_j_mc(ab: &ABParams, mc: &McConfig) -> Result<McResult, IntegralError> {
    if ab.k() == 1 {
        let rest = ab.b[0] - ab.a[0] - ab.a0;
        if !(rest > 0.0) {
            return Err(IntegralError::Divergent { margin: rest });
        }
        return Ok(McResult { estimate: ln_beta_f64(ab.a[0], rest).exp(), stderr: 0.0, samples: mc.samples, seed: mc.seed });
    }
    let margin = singularity_margin(ab);
    if !(margin > 0.0) {
        return Err(IntegralError::Divergent { margin });
    }
    let a0 = ab.a0;
    let m = beta_sampled_mean(&ab.a, &ab.b, mc, |x, c| (-a0 * q_positive(x, c).ln()).exp());
    let mass = ab.ln_weight_mass().exp();
    Ok(McResult { estimate: mass * m.mean, stderr: mass * m.stderr(), samples: mc.samples, seed: mc.seed })
}

/// Parameters of `S(z) = int prod_j x_j^{a_j-1}(1-x_j)^{b_j-a_j-1} / prod_i (1 - z x_1...x_{r_i})^{c_i} dx`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub r: Vec<usize>,
    pub z: f64,
}

impl SParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>, r: Vec<usize>, z: f64) -> Result<Self, IntegralError> {
        // Reuse the coordinate checks of J_k.
        ABParams::new(0.0, a.clone(), b.clone())?;
        let k = a.len();
        if c.len() != r.len() || r.is_empty() {
            return Err(IntegralError::SParams(format!("c and r must have the same positive length (got {} and {})", c.len(), r.len())));
        }
        if r[0] < 1 || r.windows(2).any(|w| w[0] >= w[1]) || *r.last().expect("non-empty") != k {
            return Err(IntegralError::SParams(format!("r must satisfy 1 <= r_1 < ... < r_m = k = {k} (got {r:?})")));
        }
        if !z.is_finite() || z > 1.0 {
            return Err(IntegralError::SParams(format!("z must be a real number <= 1 (got {z})")));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(IntegralError::SParams("c must be finite".into()));
        }
        Ok(Self { a, b, c, r, z })
    }
}

/// `1 - z x_1 ... x_r` without cancellation for `z <= 1`.
fn one_minus_z_prod(z: f64, x: &[f64], c: &[f64], r: usize) -> f64 {
    if z <= 0.0 {
        let p: f64 = x[..r].iter().product();
        return 1.0 - z * p;
    }
    // 1 - x_1...x_r = c_1 + x_1 (1 - x_2...x_r), accumulated from the back
    let mut one_minus_p = 0.0;
    for j in (0..r).rev() {
        one_minus_p = c[j] + x[j] * one_minus_p;
    }
    (1.0 - z) + z * one_minus_p
}

/// `S(z)` by importance-sampled Monte Carlo.
pub fn eval_s_mc(sp: &SParams, mc: &McConfig) -> Result<McResult, IntegralError> {
    let m = beta_sampled_mean(&sp.a, &sp.b, mc, |x, c| {
        let mut ln = 0.0;
        for (ci, &ri) in sp.c.iter().zip(&sp.r) {
            ln -= ci * one_minus_z_prod(sp.z, x, c, ri).ln();
        }
        ln.exp()
    });
    let mass: f64 = sp.a.iter().zip(&sp.b).map(|(&a, &b)| ln_beta_f64(a, b - a)).sum::<f64>().exp();
    Ok(McResult { estimate: mass * m.mean, stderr: mass * m.stderr(), samples: mc.samples, seed: mc.seed })
}
