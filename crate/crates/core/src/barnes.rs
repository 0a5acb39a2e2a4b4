//! Euler integral, Barnes contour integral and Gauss series for
//!
//! ```text
//! int_0^1 x^{a-1} (1-x)^{b-a-1} (1 - z x)^{-a0} dx
//!   = Gamma(b-a)/Gamma(a0) * 1/(2 pi i) int_{Re t = -t0} Gamma(a0+t) Gamma(a+t) Gamma(-t) / Gamma(b+t) (-z)^t dt
//!   = Gamma(b-a)/Gamma(a0) * sum_nu Gamma(a0+nu) Gamma(a+nu) / (nu! Gamma(b+nu)) z^nu
//! ```
//!
//! and the dimension-reducing relation obtained by applying it to the last
//! coordinate of `J_k`, which replaces `(-z)^t` by `e^{eps pi i t}` times
//! `J_{k-1}` with all parameters shifted by `t`.
//!
//! # Contour
//!
//! With `(-z)^t = |z|^t e^{i s pi t}` for `z in (0, 1]` the integrand decays
//! like `e^{-2 pi |Im t|}` on one side of the real axis and only
//! algebraically on the other. The slow half of the vertical line is
//! therefore swung onto the horizontal ray `Im t = -s Y0`, `Re t >= -t0`,
//! which crosses no pole; there `e^{i s pi t} Gamma(-t)` reduces to
//! `-2 pi i / ((1 - e^{-2 i s pi t}) Gamma(1+t))` times a sign, a smooth
//! function with ripple of relative size `e^{-2 pi Y0}`. The far part of
//! the ray is compactified by `x = X0 / v` and integrated with tanh-sinh.
//! When `z < 0` (or `eps = 0`) both halves decay exponentially and the
//! plain truncated line is used.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hyperseries;
use crate::multint::{self, ABParams, IntegralError};
use crate::numctx::{self, HPReal, NumError, PrecisionContext};
use crate::quad::{gauss_jacobi01, gauss_legendre, tanh_sinh, tau_for_depth};

/// Height of the horizontal ray on the slowly decaying side.
const RAY_HEIGHT: f64 = 4.0;
/// Abscissa where the ray switches to the compactified tail.
const RAY_SPLIT: f64 = 24.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BarnesError {
    #[error("strip condition violated: {0}")]
    Strip(String),
    #[error("parameter condition violated: {0}")]
    Params(String),
    #[error("truncated tail {tail:.3e} exceeds tolerance {tol:.3e}; increase T")]
    Truncation { tail: f64, tol: f64 },
    #[error("branch choices disagree: {plus} vs {minus}")]
    BranchMismatch { plus: f64, minus: f64 },
    #[error("epsilon {eps} is not allowed for k = {k}")]
    Epsilon { eps: i8, k: usize },
    #[error("series at |z| = 1 diverges: need b - a0 - a > 0 (z = 1) or > -1 (z = -1)")]
    Divergent,
    #[error("series did not converge within the term budget")]
    NotConverged,
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Contour placement and resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourConfig {
    /// The line is `Re t = -t0`.
    pub t0: f64,
    /// Truncation height on exponentially decaying halves; `None` picks it from the tolerance.
    pub t_max: Option<f64>,
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
}

impl ContourConfig {
    pub fn new(t0: f64) -> Self {
        Self { t0, t_max: None, nodes: 20 }
    }

    /// Truncation height `(2/pi) ln(1/tol) + 10`.
    pub fn height(&self, tol: f64) -> f64 {
        self.t_max.unwrap_or(2.0 / std::f64::consts::PI * tol.recip().ln() + 10.0)
    }
}

/// The sign choice `eps_k`: zero for even `k`, `+1` or `-1` for odd `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EpsilonSign(i8);

impl EpsilonSign {
    pub fn new(k: usize, value: i8) -> Result<Self, BarnesError> {
        let ok = if k % 2 == 0 { value == 0 } else { value == 1 || value == -1 };
        if ok {
            Ok(Self(value))
        } else {
            Err(BarnesError::Epsilon { eps: value, k })
        }
    }

    pub fn value(self) -> i8 {
        self.0
    }
}

fn check_beta(a: f64, b: f64) -> Result<(), BarnesError> {
    if !(a > 0.0 && b - a > 0.0) {
        return Err(BarnesError::Params(format!("need a > 0 and b - a > 0 (a = {a}, b = {b})")));
    }
    Ok(())
}

/// `int_0^1 x^{a-1} (1-x)^{b-a-1} (1 - z x)^{-a0} dx` by Gauss–Jacobi quadrature.
pub fn euler_side(a0: f64, a: f64, b: f64, z: f64, ctx: &PrecisionContext) -> Result<HPReal, BarnesError> {
    check_beta(a, b)?;
    if !(z <= 1.0) {
        return Err(BarnesError::Params(format!("z must be <= 1 (got {z})")));
    }
    let value = if z == 1.0 {
        // The factor (1-x)^{-a0} joins the weight; the rule is then exact.
        let q = b - a - a0 - 1.0;
        if !(q > -1.0) {
            return Err(BarnesError::Divergent);
        }
        let (_, w) = gauss_jacobi01(1, a - 1.0, q);
        w[0]
    } else {
        let f = |n: usize| {
            let (x, w) = gauss_jacobi01(n, a - 1.0, b - a - 1.0);
            x.iter().zip(&w).map(|(x, w)| w * (1.0 - z * x).powf(-a0)).sum::<f64>()
        };
        let mut n = 32;
        let mut prev = f(n);
        loop {
            let next = f(2 * n);
            n *= 2;
            if (next - prev).abs() <= 1e-15 * next.abs() || n >= 1024 {
                break next;
            }
            prev = next;
        }
    };
    Ok(ctx.real(value))
}

/// `Gamma(b-a)/Gamma(a0) sum_nu Gamma(a0+nu) Gamma(a+nu) / (nu! Gamma(b+nu)) z^nu` for `|z| <= 1`.
pub fn gauss_2f1_side(a0: f64, a: f64, b: f64, z: f64, ctx: &PrecisionContext) -> Result<HPReal, BarnesError> {
    check_beta(a, b)?;
    if !(z.abs() <= 1.0) {
        return Err(BarnesError::Params(format!("|z| must be <= 1 (got {z})")));
    }
    let p = ctx.working_bits();
    let hp = |x: f64| HPReal::from_f64(x, p);
    // nu = 0 term: Gamma(a) Gamma(b-a) / Gamma(b)
    let seed = hyperseries::signed_gamma_quotient(&[hp(a), &hp(b) - &hp(a)], &[hp(b)], ctx)
        .map_err(|e| BarnesError::Params(e.to_string()))?;
    let (ha0, ha, hb, hz) = (hp(a0), hp(a), hp(b), hp(z));
    let beta = &(&(&ha0 + &ha) - &hb) - 1.0;
    let mut term = seed;
    let mut nu = 0u64;
    let mut next = move || {
        let out = term.clone();
        let n = HPReal::from_i64(nu as i64, p);
        let num = &(&(&ha0 + &n) * &(&ha + &n)) * &hz;
        let den = &(&n + 1.0) * &(&hb + &n);
        term = &term * &(&num / &den);
        nu += 1;
        out
    };
    if z.abs() < 1.0 {
        let mut sum = HPReal::from_i64(0, p);
        let mut small = 0;
        for _ in 0..ctx.max_terms() {
            let t = next();
            sum = &sum + &t;
            if t.abs().to_f64() <= ctx.rel_tol() * sum.abs().to_f64() {
                small += 1;
                if small >= 3 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
        return Err(BarnesError::NotConverged);
    }
    // At z = 1 the terms must be summable; at z = -1 they only need to vanish.
    let bound = if z > 0.0 { -1.0 } else { 0.0 };
    if !(beta.to_f64() < bound) {
        return Err(BarnesError::Divergent);
    }
    let ex = if z > 0.0 {
        hyperseries::extrapolate(&mut next, &beta, 16, ctx.max_terms(), ctx.rel_tol(), p)
    } else {
        // terms alternate in sign: average consecutive partial sums
        let t0 = next();
        let mut pending = &t0 * 0.5;
        let mut head = Some(pending.clone());
        let mut pair = move || {
            let odd = next();
            let half = &next() * 0.5;
            let g = &(&pending + &odd) + &half;
            pending = half;
            match head.take() {
                Some(h) => &g + &h,
                None => g,
            }
        };
        let beta = &beta - 2.0;
        hyperseries::extrapolate(&mut pair, &beta, 8, ctx.max_terms() / 2, ctx.rel_tol(), p)
    };
    if !ex.converged {
        return Err(BarnesError::NotConverged);
    }
    Ok(ex.value)
}

/// `ln Gamma(z)` for complex `z` off the poles (any branch of the logarithm;
/// only `exp` of sums of these values is used).
pub fn ln_gamma_c(z: C64) -> C64 {
    let mut z = z;
    let mut prod = C64::new(1.0, 0.0);
    let mut shift = C64::new(0.0, 0.0);
    while z.re < 12.0 {
        prod *= z;
        z += 1.0;
        if prod.norm() > 1e150 {
            shift += prod.ln();
            prod = C64::new(1.0, 0.0);
        }
    }
    shift += prod.ln();
    let inv = z.inv();
    let inv2 = inv * inv;
    // Stirling coefficients B_{2m} / (2m (2m-1)), m = 1..7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let mut series = C64::new(0.0, 0.0);
    let mut pow = inv;
    for c in C {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

/// Bernoulli polynomial `B_m(x)` for `m <= 10`.
fn bernoulli_poly(m: usize, x: f64) -> f64 {
    const B: [f64; 11] =
        [1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0, 0.0, 5.0 / 66.0];
    let mut binom = 1.0;
    let mut sum = 0.0;
    for k in 0..=m {
        sum += binom * B[k] * x.powi((m - k) as i32);
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    sum
}

/// `sum ln Gamma(t + num_i) - sum ln Gamma(t + den_i)` with equally many
/// terms on both sides. For large `|t|` the leading Stirling terms cancel
/// analytically, which keeps the difference accurate where the individual
/// logarithms are huge.
fn ln_gamma_ratio_c(t: C64, num: &[f64], den: &[f64]) -> C64 {
    debug_assert_eq!(num.len(), den.len());
    if t.norm() < 1e3 {
        let a: C64 = num.iter().map(|&v| ln_gamma_c(t + v)).sum();
        let b: C64 = den.iter().map(|&v| ln_gamma_c(t + v)).sum();
        return a - b;
    }
    // ln Gamma(t + a) ~ (t + a - 1/2) ln t - t + ln(2 pi)/2 + sum_n (-1)^{n+1} B_{n+1}(a) / (n (n+1) t^n)
    let shift: f64 = num.iter().sum::<f64>() - den.iter().sum::<f64>();
    let mut out = t.ln() * shift;
    let inv = t.inv();
    let mut pow = inv;
    for n in 1..=9usize {
        let c: f64 = num.iter().map(|&a| bernoulli_poly(n + 1, a)).sum::<f64>()
            - den.iter().map(|&a| bernoulli_poly(n + 1, a)).sum::<f64>();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        out += pow * (sign * c / (n * (n + 1)) as f64);
        pow *= inv;
    }
    out
}

/// Barnes integral value with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarnesValue {
    pub value: f64,
    /// Imaginary part of the computed integral (zero in exact arithmetic).
    pub imag: f64,
    /// Bound on the truncated contour tails.
    pub tail_bound: f64,
    /// Value obtained with the opposite branch choice, when both apply.
    pub other_branch: Option<f64>,
    pub height: f64,
}

/// How the contour is laid out for a given integrand.
struct Plan {
    t0: f64,
    height: f64,
    /// `None`: both halves decay exponentially. `Some(s)`: the half with
    /// `s * Im t < 0` decays slowly and is bent onto the ray `Im t = -s Y0`.
    bend: Option<i8>,
    /// Real singularities left of the line, used to size panels.
    left: Vec<f64>,
    gl_nodes: usize,
    /// Exponential decay rate on the truncated halves, for the tail bound.
    decay: f64,
    /// Algebraic decay exponent (positive) of the integrand along the ray.
    ray_decay: f64,
    tol: f64,
}

/// `(1/2 pi i) int G(t) dt` over the (possibly bent) contour.
fn contour_integral<G>(plan: &Plan, g: G) -> (C64, f64, usize)
where
    G: Fn(C64) -> C64 + Sync,
{
    let t0 = plan.t0;
    let dist = |t: C64| -> f64 {
        let mut d = f64::INFINITY;
        for &p in &plan.left {
            d = d.min((t - C64::new(p, 0.0)).norm());
        }
        // poles of Gamma(-t) at 0, 1, 2, ...
        let n = t.re.round().max(0.0);
        d.min((t - C64::new(n, 0.0)).norm())
    };
    let (y_lo, y_hi) = match plan.bend {
        None => (-plan.height, plan.height),
        Some(s) if s > 0 => (-RAY_HEIGHT, plan.height),
        Some(_) => (-plan.height, RAY_HEIGHT),
    };
    // (point, weight) pairs with weight including dt / (2 pi i)
    let mut pts: Vec<(C64, C64)> = Vec::new();
    let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
    let push_panels = |pts: &mut Vec<(C64, C64)>, start: f64, end: f64, at: &dyn Fn(f64) -> C64, dt: C64| {
        let mut y = start;
        while y < end {
            let w = dist(at(y)).min(dist(at((y + 1.0).min(end)))).clamp(1e-3, 1.0);
            let y1 = (y + w).min(end);
            let (xs, ws) = gauss_legendre(plan.gl_nodes, y, y1);
            for (s, w) in xs.into_iter().zip(ws) {
                pts.push((at(s), dt * w / two_pi_i));
            }
            y = y1;
        }
    };
    let vertical = |y: f64| C64::new(-t0, y);
    push_panels(&mut pts, y_lo, y_hi, &vertical, C64::new(0.0, 1.0));
    if let Some(s) = plan.bend {
        let im = -(s as f64) * RAY_HEIGHT;
        let sign = -(s as f64);
        let ray = move |x: f64| C64::new(x, im);
        push_panels(&mut pts, -t0, RAY_SPLIT, &ray, C64::new(sign, 0.0));
        // x = X0 / v on v in (0, 1)
        let margin = (plan.ray_decay - 1.0).max(0.05);
        let depth = (plan.tol.recip().ln() + 3.0) / margin;
        let nodes = tanh_sinh(48, tau_for_depth(depth.min(700.0)));
        for n in nodes {
            let v = n.x;
            let x = RAY_SPLIT / v;
            // dv weight = jac * v * (1 - v); dx = X0 / v^2 dv
            let w = (n.ln_jac + n.ln_x + n.ln_c).exp() * RAY_SPLIT / (v * v);
            if w.is_finite() && x.is_finite() {
                pts.push((C64::new(x, im), C64::new(sign * w, 0.0) / two_pi_i));
            }
        }
    }
    let vals: Vec<C64> = pts.par_iter().map(|(t, w)| g(*t) * w).collect();
    let mut re = crate::quad::KahanSum::default();
    let mut imag = crate::quad::KahanSum::default();
    for v in &vals {
        re.add(v.re);
        imag.add(v.im);
    }
    // Tails beyond the truncation height on exponentially decaying halves.
    let mut tail = 0.0;
    let ends: Vec<f64> = match plan.bend {
        None => vec![-plan.height, plan.height],
        Some(s) if s > 0 => vec![plan.height],
        Some(_) => vec![-plan.height],
    };
    for y in ends {
        tail += g(C64::new(-t0, y)).norm() / plan.decay / (2.0 * std::f64::consts::PI);
    }
    (C64::new(re.value(), imag.value()), tail, pts.len())
}

fn check_strip(a0: f64, a: f64, t0: f64) -> Result<(), BarnesError> {
    if !(t0 > 0.0 && a0 > t0 && a > t0) {
        return Err(BarnesError::Strip(format!("need a0 > t0 > 0 and a > t0 (a0 = {a0}, a = {a}, t0 = {t0})")));
    }
    Ok(())
}

/// The Barnes-integral side for a single branch choice `s` (ignored for `z < 0`).
fn barnes_branch(a0: f64, a: f64, b: f64, z: f64, s: i8, cc: &ContourConfig, tol: f64) -> (BarnesValue, C64) {
    let ln_abs_z = z.abs().ln();
    let arg = if z > 0.0 { s as f64 * std::f64::consts::PI } else { 0.0 };
    let ln_pre = numctx::ln_gamma_f64(b - a) - numctx::ln_gamma_f64(a0);
    let g = move |t: C64| -> C64 {
        let mut l = ln_gamma_c(t + a0) + ln_gamma_c(t + a) - ln_gamma_c(t + b) + t * ln_abs_z + ln_pre;
        if z > 0.0 && (t.im * s as f64) < 0.0 {
            // e^{i s pi t} Gamma(-t) = -pi e^{i s pi t} / (sin(pi t) Gamma(1+t))
            //                         = -2 pi i s / ((1 - e^{-2 i s pi t}) Gamma(1+t))
            let e = (C64::new(0.0, -2.0 * s as f64 * std::f64::consts::PI) * t).exp();
            let l = ln_gamma_ratio_c(t, &[a0, a], &[b, 1.0]) + t * ln_abs_z + ln_pre;
            let factor = C64::new(0.0, -2.0 * std::f64::consts::PI * s as f64) / (C64::new(1.0, 0.0) - e);
            return l.exp() * factor;
        }
        l += ln_gamma_c(-t) + C64::new(0.0, arg) * t;
        l.exp()
    };
    let plan = Plan {
        t0: cc.t0,
        height: cc.height(tol),
        bend: if z > 0.0 { Some(s) } else { None },
        left: vec![-a0, -a],
        gl_nodes: cc.nodes,
        decay: if z > 0.0 { 2.0 * std::f64::consts::PI } else { std::f64::consts::PI },
        ray_decay: b - a0 - a + 1.0,
        tol,
    };
    let (v, tail, _) = contour_integral(&plan, g);
    (BarnesValue { value: v.re, imag: v.im, tail_bound: tail, other_branch: None, height: plan.height }, v)
}

/// Contour-integral side for nonzero `z <= 1`; for `z in (0, 1]` both
/// branches `arg(-z) = +pi` and `-pi` are evaluated and must agree.
pub fn barnes_side(
    a0: f64,
    a: f64,
    b: f64,
    z: f64,
    cc: &ContourConfig,
    ctx: &PrecisionContext,
) -> Result<BarnesValue, BarnesError> {
    check_beta(a, b)?;
    check_strip(a0, a, cc.t0)?;
    if !(b > a0 + a) {
        return Err(BarnesError::Params(format!("need b > a0 + a (a0 = {a0}, a = {a}, b = {b})")));
    }
    if z == 0.0 || !(z <= 1.0) {
        return Err(BarnesError::Params(format!("z must be nonzero and <= 1 (got {z})")));
    }
    let tol = ctx.rel_tol().max(1e-14);
    let (mut plus, _) = barnes_branch(a0, a, b, z, 1, cc, tol);
    let scale = plus.value.abs().max(f64::MIN_POSITIVE);
    if plus.tail_bound > tol * scale.max(1e-300) && plus.tail_bound > 1e-14 * scale {
        return Err(BarnesError::Truncation { tail: plus.tail_bound, tol: tol * scale });
    }
    if z > 0.0 {
        let (minus, _) = barnes_branch(a0, a, b, z, -1, cc, tol);
        if (plus.value - minus.value).abs() > 1e-10 * scale.max(1.0) {
            return Err(BarnesError::BranchMismatch { plus: plus.value, minus: minus.value });
        }
        plus.other_branch = Some(minus.value);
        plus.tail_bound = plus.tail_bound.max(minus.tail_bound);
    }
    Ok(plus)
}

/// Node counts for the inner integrals of [`lemma3_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma3Settings {
    /// Coarse nodes per dimension for the left-hand `J_k` (refined adaptively).
    pub outer_nodes: usize,
    /// Tanh-sinh half-width of the inner `J_{k-1}` rule at each contour node.
    pub inner_half: usize,
    pub tol: f64,
}

impl Default for Lemma3Settings {
    fn default() -> Self {
        Self { outer_nodes: 32, inner_half: 40, tol: 1e-8 }
    }
}

/// Both sides of the dimension-reducing relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma3Value {
    pub lhs: f64,
    pub rhs: f64,
    pub rhs_imag: f64,
    pub tail_bound: f64,
    /// Set when `b_k = a_0 + a_k` exactly, where the Gamma factor alone decays like `1/t`.
    pub boundary: bool,
}

/// `J_{k-1}(a0+t; a_1+t..; b_1+t..)` at complex `t` by tanh-sinh quadrature.
fn j_shifted(ab: &ABParams, t: C64, nodes: &[crate::quad::TsNode]) -> C64 {
    let k = ab.k();
    let n = nodes.len();
    let total = n.pow(k as u32);
    let (a, b, a0) = (ab.a(), ab.b(), ab.a0());
    let mut re = crate::quad::KahanSum::default();
    let mut im = crate::quad::KahanSum::default();
    let mut lx = vec![0.0; k];
    let mut lc = vec![0.0; k];
    let mut x = vec![0.0; k];
    let mut c = vec![0.0; k];
    for idx in 0..total {
        let mut r = idx;
        let mut lw = 0.0;
        let mut lp = 0.0;
        for j in 0..k {
            let nd = &nodes[r % n];
            r /= n;
            lw += nd.ln_jac + a[j] * nd.ln_x + (b[j] - a[j]) * nd.ln_c;
            lp += nd.ln_x;
            lx[j] = nd.ln_x;
            lc[j] = nd.ln_c;
            x[j] = nd.x;
            c[j] = nd.c;
        }
        let q = multint::q_positive(&x, &c);
        let lq = if q > 1e-280 { q.ln() } else { multint::ln_q_positive(&lx, &lc) };
        let e = C64::new(lw - a0 * lq, 0.0) + t * (lp - lq);
        if e.re < -745.0 {
            continue;
        }
        let v = e.exp();
        re.add(v.re);
        im.add(v.im);
    }
    C64::new(re.value(), im.value())
}

/// Evaluates `J_k(ab)` directly and through the contour integral over `t` of
/// `Gamma(b_k-a_k)/Gamma(a0) Gamma(a0+t) Gamma(a_k+t) Gamma(-t) / Gamma(b_k+t)
/// e^{eps pi i t} J_{k-1}(shifted by t)`.
pub fn lemma3_check(
    ab: &ABParams,
    eps: EpsilonSign,
    cc: &ContourConfig,
    settings: &Lemma3Settings,
    ctx: &PrecisionContext,
) -> Result<Lemma3Value, BarnesError> {
    let k = ab.k();
    if k < 2 {
        return Err(BarnesError::Params("the relation needs k >= 2".into()));
    }
    let eps = EpsilonSign::new(k, eps.value())?;
    let (a0, ak, bk) = (ab.a0(), ab.a()[k - 1], ab.b()[k - 1]);
    check_strip(a0, ak, cc.t0)?;
    if bk < a0 + ak {
        return Err(BarnesError::Params(format!("need b_k >= a0 + a_k (b_k = {bk}, a0 + a_k = {})", a0 + ak)));
    }
    // The inner integral must converge on the line Re t = -t0.
    let inner = ABParams::new(a0, ab.a()[..k - 1].to_vec(), ab.b()[..k - 1].to_vec())?;
    let shifted = ABParams::new(
        a0 - cc.t0,
        inner.a().iter().map(|v| v - cc.t0).collect(),
        inner.b().iter().map(|v| v - cc.t0).collect(),
    )
    .map_err(|e| BarnesError::Strip(format!("inner integral at Re t = -t0: {e}")))?;
    let margin = multint::singularity_margin(&shifted);
    if !(margin > 0.0) {
        return Err(BarnesError::Strip(format!("inner integral diverges at Re t = -t0 (margin {margin:.3})")));
    }

    let lhs = multint::eval_j_adaptive(ab, settings.tol * 0.1, settings.outer_nodes, 512, ctx)?;
    let lhs = lhs.value.to_f64();

    let tol = settings.tol;
    let depth = (tol.recip().ln() + 5.0) / margin.min(1.0);
    // Finer inner rules as |Im t| grows, since (P/Q)^{i Im t} oscillates.
    let rules: Vec<_> =
        (1..=4).map(|m| tanh_sinh(settings.inner_half * m, tau_for_depth(depth))).collect();
    let rule_for = |t: C64| &rules[((t.im.abs() / 3.0) as usize).min(3)];
    // |J_{k-1}(t)| <= J_{k-1}(Re t); on the line this is a single constant.
    let line_bound = j_shifted(&inner, C64::new(-cc.t0, 0.0), &rules[1]).re;
    let skip_below = 1e-3 * tol * lhs.abs();
    let ln_pre = numctx::ln_gamma_f64(bk - ak) - numctx::ln_gamma_f64(a0);
    let s = eps.value();
    let g = |t: C64| -> C64 {
        let mut l = ln_gamma_c(t + a0) + ln_gamma_c(t + ak) - ln_gamma_c(t + bk) + ln_pre;
        let factor = if s != 0 && (t.im * s as f64) < 0.0 {
            let e = (C64::new(0.0, -2.0 * s as f64 * std::f64::consts::PI) * t).exp();
            l = ln_gamma_ratio_c(t, &[a0, ak], &[bk, 1.0]) + ln_pre;
            C64::new(0.0, -2.0 * std::f64::consts::PI * s as f64) / (C64::new(1.0, 0.0) - e)
        } else {
            l += ln_gamma_c(-t) + C64::new(0.0, s as f64 * std::f64::consts::PI) * t;
            C64::new(1.0, 0.0)
        };
        let kernel = l.exp() * factor;
        if t.re == -cc.t0 && kernel.norm() * line_bound < skip_below {
            return C64::new(0.0, 0.0);
        }
        kernel * j_shifted(&inner, t, rule_for(t))
    };
    let plan = Plan {
        t0: cc.t0,
        height: cc.height(tol),
        bend: if s == 0 { None } else { Some(s) },
        left: std::iter::once(-a0).chain(ab.a().iter().map(|v| -v)).collect(),
        gl_nodes: cc.nodes,
        decay: if s == 0 { std::f64::consts::PI } else { 2.0 * std::f64::consts::PI },
        ray_decay: bk - a0 - ak + 1.0 + (ab.b()[0] - ab.a()[0]).min(1.0),
        tol,
    };
    let (v, tail, _) = contour_integral(&plan, g);
    Ok(Lemma3Value { lhs, rhs: v.re, rhs_imag: v.im, tail_bound: tail, boundary: bk == a0 + ak })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numctx::make_context;

    fn ctx() -> PrecisionContext {
        make_context(128, 1e-20).unwrap()
    }

    #[test]
    fn complex_log_gamma() {
        let z = C64::new(0.5, 0.0);
        assert!((ln_gamma_c(z).re - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        // |Gamma(iy)|^2 = pi / (y sinh(pi y))
        let y = 3.0;
        let g = ln_gamma_c(C64::new(0.0, y)).exp().norm_sqr();
        let want = std::f64::consts::PI / (y * (std::f64::consts::PI * y).sinh());
        assert!((g - want).abs() < 1e-13 * want);
        // recurrence across the real axis
        let z = C64::new(-2.3, 0.7);
        let lhs = ln_gamma_c(z + 1.0).exp();
        let rhs = ln_gamma_c(z).exp() * z;
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
    }

    #[test]
    fn gamma_ratio_expansion_matches_direct() {
        let t = C64::new(1500.0, -4.0);
        let direct = ln_gamma_c(t + 0.6) + ln_gamma_c(t + 0.8) - ln_gamma_c(t + 2.4) - ln_gamma_c(t + 1.0);
        let asym = ln_gamma_ratio_c(t, &[0.6, 0.8], &[2.4, 1.0]);
        assert!((direct - asym).norm() < 1e-11, "{direct} {asym}");
        assert!((bernoulli_poly(3, 0.3) - (0.027 - 1.5 * 0.09 + 0.5 * 0.3)).abs() < 1e-15);
    }

    #[test]
    fn euler_examples() {
        let c = ctx();
        assert!((euler_side(1.0, 1.0, 2.0, 0.0, &c).unwrap().to_f64() - 1.0).abs() < 1e-14);
        assert!((euler_side(1.0, 1.0, 2.0, 0.5, &c).unwrap().to_f64() - 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((euler_side(1.0, 1.0, 2.0, -1.0, &c).unwrap().to_f64() - 2f64.ln()).abs() < 1e-14);
        assert!((euler_side(1.0, 2.0, 4.0, 1.0, &c).unwrap().to_f64() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn gauss_examples() {
        let c = ctx();
        let v = gauss_2f1_side(1.0, 1.0, 2.0, 0.5, &c).unwrap();
        assert!((v.to_f64() - 2.0 * 2f64.ln()).abs() < 1e-15);
        let v = gauss_2f1_side(2.0, 1.5, 5.0, 0.0, &c).unwrap();
        let want = (numctx::ln_gamma_f64(1.5) + numctx::ln_gamma_f64(3.5) - numctx::ln_gamma_f64(5.0)).exp();
        assert!((v.to_f64() - want).abs() < 1e-14 * want);
        assert!((v.to_f64() - 0.122_718_463_030_851_3).abs() < 1e-15);
        let v = gauss_2f1_side(1.0, 2.0, 4.0, 1.0, &c).unwrap();
        assert!((v.to_f64() - 0.5).abs() < 1e-15, "{v}");
        let v = gauss_2f1_side(1.0, 1.0, 2.0, -1.0, &c).unwrap();
        assert!((v.to_f64() - 2f64.ln()).abs() < 1e-15, "{v}");
        assert!(matches!(gauss_2f1_side(1.0, 1.0, 2.0, 1.0, &c), Err(BarnesError::Divergent)));
    }

    #[test]
    fn barnes_examples() {
        let c = ctx();
        let v = barnes_side(1.0, 1.0, 2.0, 0.5, &ContourConfig::new(0.5), &c);
        // b = a0 + a here, outside the strict condition
        assert!(v.is_err());
        let v = barnes_side(1.0, 1.0, 2.5, 0.5, &ContourConfig::new(0.5), &c).unwrap();
        let e = euler_side(1.0, 1.0, 2.5, 0.5, &c).unwrap().to_f64();
        assert!((v.value - e).abs() < 1e-10, "{v:?} vs {e}");
        let v = barnes_side(1.0, 1.0, 2.5, -1.0, &ContourConfig::new(0.5), &c).unwrap();
        let e = euler_side(1.0, 1.0, 2.5, -1.0, &c).unwrap().to_f64();
        assert!((v.value - e).abs() < 1e-10, "{v:?} vs {e}");
        let v = barnes_side(0.5, 0.7, 2.1, 0.3, &ContourConfig::new(0.3), &c).unwrap();
        let e = euler_side(0.5, 0.7, 2.1, 0.3, &c).unwrap().to_f64();
        assert!((v.value - e).abs() < 1e-10, "{v:?} vs {e}");
        assert!((v.other_branch.unwrap() - e).abs() < 1e-10);
    }

    #[test]
    fn barnes_at_z_one() {
        let c = ctx();
        let v = barnes_side(0.6, 0.8, 2.4, 1.0, &ContourConfig::new(0.4), &c).unwrap();
        let e = euler_side(0.6, 0.8, 2.4, 1.0, &c).unwrap().to_f64();
        assert!((v.value - e).abs() < 1e-9 * e, "{v:?} vs {e}");
    }

    #[test]
    fn strip_and_epsilon_validation() {
        let c = ctx();
        assert!(matches!(barnes_side(1.0, 1.0, 2.5, 0.5, &ContourConfig::new(1.2), &c), Err(BarnesError::Strip(_))));
        assert!(EpsilonSign::new(2, 1).is_err());
        assert!(EpsilonSign::new(3, 0).is_err());
        assert!(EpsilonSign::new(3, -1).is_ok());
    }

    #[test]
    fn lemma3_k2_unit() {
        let c = ctx();
        let ab = ABParams::new(1.0, vec![1.0, 1.0], vec![2.0, 2.0]).unwrap();
        let r = lemma3_check(&ab, EpsilonSign::new(2, 0).unwrap(), &ContourConfig::new(0.5), &Lemma3Settings::default(), &c)
            .unwrap();
        let z2 = 1.644_934_066_848_226_4;
        assert!((r.lhs - z2).abs() < 1e-9, "{r:?}");
        assert!((r.rhs - z2).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn lemma3_k3_both_signs() {
        let c = ctx();
        let ab = ABParams::new(1.0, vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]).unwrap();
        let z3 = 1.202_056_903_159_594_3;
        for eps in [1, -1] {
            let r = lemma3_check(&ab, EpsilonSign::new(3, eps).unwrap(), &ContourConfig::new(0.5), &Lemma3Settings::default(), &c)
                .unwrap();
            assert!((r.lhs - 2.0 * z3).abs() < 1e-9, "{r:?}");
            assert!((r.rhs - 2.0 * z3).abs() < 1e-6, "eps {eps}: {r:?}");
            assert!(r.rhs_imag.abs() < 1e-6, "{r:?}");
        }
    }
}
