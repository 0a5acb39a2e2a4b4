//! Very-well-poised hypergeometric series.
//!
//! For parameters `(h0; h1, ..., hk)` the series is
//!
//! ```text
//! F_k(h) = sum_{mu >= 0} (h0 + 2 mu) * prod_{j=0}^{k} Gamma(h_j + mu) / Gamma(1 + h0 - h_j + mu)
//!                        * (-1)^{(k+1) mu}
//! ```
//!
//! The term ratio tends to `(-1)^{k+1}`, so the series converges only
//! algebraically: the summand behaves like `mu^e` with
//! `e = 1 + sum_{j=0}^{k} (2 h_j - h0 - 1)`. Partial sums are therefore
//! accelerated by Richardson extrapolation on a doubling sequence of
//! truncation points, eliminating the tail terms `M^(e+1)`, `M^e`, ... one
//! at a time. The alternating case (`k` even) first groups consecutive
//! terms in pairs, which turns it into a non-alternating series whose
//! summand decays one power faster.

use serde::Serialize;
use thiserror::Error;

use crate::numctx::{self, HPReal, NumError, PrecisionContext};

/// Relative slack below which an evaluation is flagged as slowly convergent.
pub const SLOW_MARGIN: f64 = 0.05;

/// Maximum number of Richardson columns.
const MAX_COLUMNS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("the series needs at least {min} lower parameters (got {got})")]
    Arity { min: usize, got: usize },
    #[error("parameter {0} is not finite")]
    NonFinite(f64),
    #[error("gamma pole at argument {arg} (parameter index {index})")]
    Pole { index: usize, arg: f64 },
    #[error("series diverges: summand exponent {exponent:.6} must be below {bound}")]
    Divergent { exponent: f64, bound: f64 },
    #[error("convergence precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Parameters `(h0; h1, ..., hk)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HParams {
    h0: f64,
    h: Vec<f64>,
}

impl HParams {
    /// Builds a parameter vector with at least two lower parameters.
    pub fn new(h0: f64, h: Vec<f64>) -> Result<Self, SeriesError> {
        if h.len() < 2 {
            return Err(SeriesError::Arity { min: 2, got: h.len() });
        }
        if let Some(bad) = std::iter::once(h0).chain(h.iter().copied()).find(|x| !x.is_finite()) {
            return Err(SeriesError::NonFinite(bad));
        }
        Ok(Self { h0, h })
    }

    /// Parses `h0,h1,...,hk`.
    pub fn from_slice(v: &[f64]) -> Result<Self, SeriesError> {
        match v.split_first() {
            Some((h0, rest)) => Self::new(*h0, rest.to_vec()),
            None => Err(SeriesError::Arity { min: 2, got: 0 }),
        }
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn lower(&self) -> &[f64] {
        &self.h
    }

    /// Number of lower parameters.
    pub fn k(&self) -> usize {
        self.h.len()
    }

    /// `h_j` for `j = 0..=k`.
    pub fn get(&self, j: usize) -> f64 {
        if j == 0 { self.h0 } else { self.h[j - 1] }
    }

    /// All parameters `h0, h1, ..., hk` as one vector.
    pub fn to_vec(&self) -> Vec<f64> {
        std::iter::once(self.h0).chain(self.h.iter().copied()).collect()
    }

    /// Whether the summand carries the sign `(-1)^mu`.
    pub fn alternating(&self) -> bool {
        (self.k() + 1) % 2 == 1
    }

    /// Exponent `e` of the algebraic decay `|term(mu)| ~ C mu^e`.
    pub fn decay_exponent(&self) -> f64 {
        1.0 + (0..=self.k()).map(|j| 2.0 * self.get(j) - self.h0 - 1.0).sum::<f64>()
    }

    /// The decay exponent computed at context precision.
    fn decay_exponent_hp(&self, p: usize) -> HPReal {
        let mut e = HPReal::from_i64(1, p);
        let h0 = HPReal::from_f64(self.h0, p);
        for j in 0..=self.k() {
            let hj = HPReal::from_f64(self.get(j), p);
            e = &(&e + &(&hj * 2.0)) - &(&h0 + 1.0);
        }
        e
    }

    /// Convergence slack normalised like the theorem's condition on the
    /// sum of lower parameters: positive iff the series converges.
    pub fn convergence_margin(&self) -> f64 {
        let e = self.decay_exponent();
        let bound = if self.alternating() { 0.0 } else { -1.0 };
        (bound - e) / (self.k() as f64 - 1.0)
    }
}

/// Outcome of the theorem conditions for a rank-`k` parameter vector
/// `(h0; h1, ..., h_{k+2})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub rank: usize,
    pub cond5_ok: bool,
    pub cond6_ok: bool,
    pub cond7_ok: bool,
    pub margin5: f64,
    /// Smallest slack among the inequalities `1 + h0 - h_{j+1} > h_j > 0`, j = 2..=k+1.
    pub margin6: f64,
}

impl ConditionReport {
    pub fn all_ok(&self) -> bool {
        self.cond5_ok && self.cond6_ok && self.cond7_ok
    }

    /// Whether the slack in the sum condition is small enough to make
    /// summation slow.
    pub fn slow_convergence(&self) -> bool {
        self.margin5 < SLOW_MARGIN
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Checks the three theorem conditions for `hp`, read as
/// `(h0; h1, ..., h_{k+2})` with rank `k = hp.k() - 2`:
///
/// * sum: `1 + h0 > 2/(k+1) * sum h_j`
/// * chain: `1 + h0 - h_{j+1} > h_j > 0` for `j = 2..=k+1`
/// * poles: `h1` and `h_{k+2}` are not non-positive integers
pub fn check_conditions(hp: &HParams) -> ConditionReport {
    let n = hp.k();
    let rank = n - 2;
    let sum: f64 = hp.lower().iter().sum();
    let margin5 = 1.0 + hp.h0() - 2.0 / (rank as f64 + 1.0) * sum;
    let mut margin6 = f64::INFINITY;
    for j in 2..=rank + 1 {
        let hj = hp.get(j);
        let upper = 1.0 + hp.h0() - hp.get(j + 1) - hj;
        margin6 = margin6.min(hj).min(upper);
    }
    ConditionReport {
        rank,
        cond5_ok: margin5 > 0.0,
        cond6_ok: margin6 > 0.0,
        cond7_ok: !is_nonpositive_integer(hp.get(1)) && !is_nonpositive_integer(hp.get(n)),
        margin5,
        margin6,
    }
}

/// The closed rational expression `term(mu+1) / term(mu)`.
pub fn term_ratio(hp: &HParams, mu: u64, ctx: &PrecisionContext) -> HPReal {
    let p = ctx.working_bits();
    let m = HPReal::from_i64(mu as i64, p);
    let h0 = HPReal::from_f64(hp.h0(), p);
    let mut num = &(&h0 + &(&m * 2.0)) + 2.0;
    let mut den = &h0 + &(&m * 2.0);
    for j in 0..=hp.k() {
        let hj = HPReal::from_f64(hp.get(j), p);
        num = &num * &(&hj + &m);
        den = &den * &(&(&(&h0 - &hj) + 1.0) + &m);
    }
    let r = &num / &den;
    if hp.alternating() { -r } else { r }
}

/// Log-magnitude and sign of the gamma product `prod_j Gamma(h_j + mu) / Gamma(1 + h0 - h_j + mu)`.
fn gamma_product(hp: &HParams, mu: u64, ctx: &PrecisionContext) -> Result<(HPReal, i8), SeriesError> {
    let p = ctx.working_bits();
    let mut log = HPReal::from_i64(0, p);
    let mut sign = 1i8;
    for j in 0..=hp.k() {
        let up = hp.get(j) + mu as f64;
        let down = 1.0 + hp.h0() - hp.get(j) + mu as f64;
        for (arg, index) in [(up, j), (down, j)] {
            if is_nonpositive_integer(arg) {
                return Err(SeriesError::Pole { index, arg });
            }
        }
        let mu_hp = HPReal::from_i64(mu as i64, p);
        let hj = HPReal::from_f64(hp.get(j), p);
        let up_hp = &hj + &mu_hp;
        let down_hp = &(&(&HPReal::from_f64(hp.h0(), p) - &hj) + 1.0) + &mu_hp;
        let (lu, su) = numctx::log_gamma_signed(&up_hp, ctx)?;
        let (ld, sd) = numctx::log_gamma_signed(&down_hp, ctx)?;
        log = &(&log + &lu) - &ld;
        sign *= su * sd;
    }
    Ok((log, sign))
}

/// The signed summand with index `mu`, evaluated directly from gamma values.
pub fn series_term(hp: &HParams, mu: u64, ctx: &PrecisionContext) -> Result<HPReal, SeriesError> {
    let p = ctx.working_bits();
    let (log, sign) = gamma_product(hp, mu, ctx)?;
    let lead = &HPReal::from_f64(hp.h0(), p) + &HPReal::from_i64(2 * mu as i64, p);
    let mut t = &lead * &log.exp();
    if sign < 0 {
        t = -t;
    }
    if hp.alternating() && mu % 2 == 1 {
        t = -t;
    }
    Ok(t)
}

/// Value of a series evaluation together with its diagnostics.
#[derive(Debug, Clone)]
pub struct SeriesValue {
    pub value: HPReal,
    pub converged: bool,
    /// Set when the convergence slack is below [`SLOW_MARGIN`].
    pub slow_convergence: bool,
    /// Set for alternating series whose terms do not tend to zero; the
    /// value is then the limit of averaged partial sums (the Abel sum).
    pub abel_summed: bool,
    /// Number of summands added.
    pub terms: usize,
    /// Magnitude of the last extrapolation correction.
    pub error_estimate: f64,
}

/// Sums `hp` to the context tolerance.
#[allow(non_snake_case)]
pub fn eval_F(hp: &HParams, ctx: &PrecisionContext) -> Result<SeriesValue, SeriesError> {
    let p = ctx.working_bits();
    let e = hp.decay_exponent();
    let bound = if hp.alternating() { 1.0 } else { -1.0 };
    if !(e < bound) {
        return Err(SeriesError::Divergent { exponent: e, bound });
    }
    let (log, sign) = gamma_product(hp, 0, ctx)?;
    let mut prod = log.exp();
    if sign < 0 {
        prod = -prod;
    }

    // Recurrence on the gamma product: multiply by prod_j (h_j + mu) / (1 + h0 - h_j + mu).
    let h0 = HPReal::from_f64(hp.h0(), p);
    let mut ups: Vec<HPReal> = (0..=hp.k()).map(|j| HPReal::from_f64(hp.get(j), p)).collect();
    let mut downs: Vec<HPReal> = ups.iter().map(|hj| &(&h0 - hj) + 1.0).collect();
    let mut lead = h0.clone();
    let alternating = hp.alternating();
    let mut mu = 0u64;
    let mut next_term = move || {
        let mut t = &lead * &prod;
        if alternating && mu % 2 == 1 {
            t = -t;
        }
        let mut num = ups[0].clone();
        let mut den = downs[0].clone();
        for j in 1..ups.len() {
            num = &num * &ups[j];
            den = &den * &downs[j];
        }
        prod = &prod * &(&num / &den);
        for x in ups.iter_mut().chain(downs.iter_mut()) {
            *x = &*x + 1.0;
        }
        lead = &lead + 2.0;
        mu += 1;
        t
    };

    let scale = hp.to_vec().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let m0 = 8 + (2.0 * scale).ceil() as usize;
    let beta = hp.decay_exponent_hp(p);
    let ex = if alternating {
        // Averaged pair sums: t(0)/2 + sum_nu [t(2nu)/2 + t(2nu+1) + t(2nu+2)/2].
        // The partial sums equal (S_{2M} + S_{2M+1}) / 2, which converge for
        // e < 1 and whose tail starts at M^(e-1).
        let t0 = next_term();
        let mut pending = &t0 * 0.5;
        let mut first = Some(pending.clone());
        let mut pair = move || {
            let odd = next_term();
            let half_next = &next_term() * 0.5;
            let g = &(&pending + &odd) + &half_next;
            pending = half_next;
            match first.take() {
                Some(head) => &g + &head,
                None => g,
            }
        };
        let beta = &beta - 2.0;
        extrapolate(&mut pair, &beta, m0.div_ceil(2), ctx.max_terms() / 2, ctx.rel_tol(), p)
    } else {
        extrapolate(&mut next_term, &beta, m0, ctx.max_terms(), ctx.rel_tol(), p)
    };
    let terms = if alternating { 2 * ex.terms } else { ex.terms };
    Ok(SeriesValue {
        value: ex.value,
        converged: ex.converged,
        slow_convergence: hp.convergence_margin() < SLOW_MARGIN,
        abel_summed: alternating && e >= 0.0,
        terms,
        error_estimate: ex.err,
    })
}

pub(crate) struct Extrapolated {
    pub value: HPReal,
    pub err: f64,
    pub terms: usize,
    pub converged: bool,
}

/// Limit of `sum_{n>=0} g(n)` where `g(n) ~ n^beta (c0 + c1/n + ...)` with `beta < -1`.
///
/// Partial sums at `M_j = m0 * 2^j` feed a Richardson table that removes the
/// tail terms `M^(beta+1-i)` for `i = 0, 1, ...`.
pub(crate) fn extrapolate(
    next: &mut dyn FnMut() -> HPReal,
    beta: &HPReal,
    m0: usize,
    max_terms: usize,
    rel_tol: f64,
    p: usize,
) -> Extrapolated {
    let ln2 = HPReal::from_i64(2, p).ln();
    let factors: Vec<HPReal> =
        (0..MAX_COLUMNS).map(|i| (&(&(beta + 1.0) - (i as f64)) * &ln2).exp()).collect();
    let mut sum = HPReal::from_i64(0, p);
    let mut count = 0usize;
    let mut target = m0.max(1);
    let mut prev: Vec<HPReal> = Vec::new();
    let mut prev_diag: Option<HPReal> = None;
    let mut err = f64::INFINITY;
    let mut hits = 0;
    loop {
        while count < target {
            sum = &sum + &next();
            count += 1;
        }
        let width = (prev.len() + 1).min(MAX_COLUMNS);
        let mut row = Vec::with_capacity(width);
        row.push(sum.clone());
        for i in 1..width {
            let f = &factors[i - 1];
            let num = &row[i - 1] - &(f * &prev[i - 1]);
            let den = &HPReal::from_i64(1, p) - f;
            row.push(&num / &den);
        }
        let diag = row[width - 1].clone();
        if let Some(pd) = &prev_diag {
            let d = (&diag - pd).abs().to_f64();
            let scale = diag.abs().to_f64();
            err = d;
            if d <= rel_tol * scale || d == 0.0 {
                hits += 1;
                if hits >= 2 || d == 0.0 {
                    return Extrapolated { value: diag, err, terms: count, converged: true };
                }
            } else {
                hits = 0;
            }
        }
        prev_diag = Some(diag);
        prev = row;
        if target.saturating_mul(2) > max_terms {
            let value = prev_diag.expect("at least one row");
            return Extrapolated { value, err, terms: count, converged: false };
        }
        target *= 2;
    }
}

/// Closed form of the three-parameter series:
/// `Gamma(h1) Gamma(h2) Gamma(h3) Gamma(1+h0-h1-h2-h3) /
///  (Gamma(1+h0-h1-h2) Gamma(1+h0-h1-h3) Gamma(1+h0-h2-h3))`.
#[allow(non_snake_case)]
pub fn dougall_F3(h0: f64, h1: f64, h2: f64, h3: f64, ctx: &PrecisionContext) -> Result<HPReal, SeriesError> {
    if !(1.0 + h0 > h1 + h2 + h3) {
        return Err(SeriesError::Precondition(format!(
            "1 + h0 = {} must exceed h1 + h2 + h3 = {}",
            1.0 + h0,
            h1 + h2 + h3
        )));
    }
    for (i, h) in [h1, h2, h3].into_iter().enumerate() {
        if is_nonpositive_integer(h) {
            return Err(SeriesError::Pole { index: i + 1, arg: h });
        }
    }
    let p = ctx.working_bits();
    let hp = |x: f64| HPReal::from_f64(x, p);
    let one_h0 = &hp(h0) + 1.0;
    let (x1, x2, x3) = (hp(h1), hp(h2), hp(h3));
    let numer = [x1.clone(), x2.clone(), x3.clone(), &(&(&one_h0 - &x1) - &x2) - &x3];
    let denom = [&(&one_h0 - &x1) - &x2, &(&one_h0 - &x1) - &x3, &(&one_h0 - &x2) - &x3];
    signed_gamma_quotient(&numer, &denom, ctx)
}

/// `prod Gamma(numer) / prod Gamma(denom)` with signs; a pole in the
/// denominator makes the quotient zero.
pub fn signed_gamma_quotient(numer: &[HPReal], denom: &[HPReal], ctx: &PrecisionContext) -> Result<HPReal, SeriesError> {
    let p = ctx.working_bits();
    let mut log = HPReal::from_i64(0, p);
    let mut sign = 1i8;
    for (i, x) in numer.iter().enumerate() {
        let xf = x.to_f64();
        if is_nonpositive_integer(xf) && (x - &HPReal::from_f64(xf, p)).is_zero() {
            return Err(SeriesError::Pole { index: i, arg: xf });
        }
        let (l, s) = numctx::log_gamma_signed(x, ctx)?;
        log = &log + &l;
        sign *= s;
    }
    for x in denom {
        let xf = x.to_f64();
        if is_nonpositive_integer(xf) && (x - &HPReal::from_f64(xf, p)).is_zero() {
            return Ok(HPReal::from_i64(0, p));
        }
        let (l, s) = numctx::log_gamma_signed(x, ctx)?;
        log = &log - &l;
        sign *= s;
    }
    let v = log.exp();
    Ok(if sign < 0 { -v } else { v })
}

/// `Gamma(1+h0-h1-h2) / (Gamma(h1) Gamma(h2)) * F_2(h0; h1, h2)`, which is
/// identically 1 wherever the series converges.
#[allow(non_snake_case)]
pub fn check_F2_normalization(h0: f64, h1: f64, h2: f64, ctx: &PrecisionContext) -> Result<HPReal, SeriesError> {
    let hp = HParams::new(h0, vec![h1, h2])?;
    for (i, h) in [h1, h2].into_iter().enumerate() {
        if is_nonpositive_integer(h) {
            return Err(SeriesError::Pole { index: i + 1, arg: h });
        }
    }
    let f = eval_F(&hp, ctx)?;
    let p = ctx.working_bits();
    let pre = signed_gamma_quotient(
        &[&(&HPReal::from_f64(1.0 + h0, p) - &HPReal::from_f64(h1, p)) - &HPReal::from_f64(h2, p)],
        &[HPReal::from_f64(h1, p), HPReal::from_f64(h2, p)],
        ctx,
    )?;
    Ok(&pre * &f.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numctx::make_context;

    fn ctx() -> PrecisionContext {
        make_context(128, 1e-20).unwrap()
    }

    fn close(a: &HPReal, b: f64, tol: f64) -> bool {
        ((a.to_f64() - b) / b).abs() < tol
    }

    const ZETA2: f64 = 1.644_934_066_848_226_4;
    const ZETA3: f64 = 1.202_056_903_159_594_2;

    #[test]
    fn arity_is_enforced() {
        assert!(HParams::new(1.0, vec![1.0]).is_err());
        assert!(HParams::new(f64::NAN, vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn condition_examples() {
        let r = check_conditions(&HParams::new(5.0, vec![1.0, 1.0, 1.0]).unwrap());
        assert!(r.all_ok());
        assert_eq!(r.rank, 1);
        assert_eq!(r.margin5, 3.0);
        let r = check_conditions(&HParams::new(2.0, vec![1.0; 5]).unwrap());
        assert!(r.all_ok());
        assert_eq!(r.margin5, 0.5);
        let r = check_conditions(&HParams::new(1.0, vec![1.0, 1.0, 1.0]).unwrap());
        assert!(!r.cond5_ok);
        assert!(r.margin5 <= 0.0);
        let r = check_conditions(&HParams::new(5.0, vec![0.0, 1.0, 1.0]).unwrap());
        assert!(!r.cond7_ok);
        let r = check_conditions(&HParams::new(2.0, vec![1.0, 1.0, 2.5, 1.0, 1.0]).unwrap());
        assert!(!r.cond6_ok);
    }

    #[test]
    fn term_examples() {
        let c = ctx();
        let hp = HParams::new(2.0, vec![1.0; 5]).unwrap();
        assert!(close(&series_term(&hp, 0, &c).unwrap(), 2.0, 1e-30));
        assert!(close(&series_term(&hp, 1, &c).unwrap(), 0.25, 1e-30));
        // 5 * Gamma(5)/Gamma(1) * (Gamma(1)/Gamma(5))^3 = 5/576
        let hp = HParams::new(5.0, vec![1.0; 3]).unwrap();
        assert!(close(&series_term(&hp, 0, &c).unwrap(), 5.0 / 576.0, 1e-15));
    }

    #[test]
    fn series_examples() {
        let c = ctx();
        let v = eval_F(&HParams::new(2.0, vec![1.0; 5]).unwrap(), &c).unwrap();
        assert!(v.converged);
        let z3 = numctx::zeta_const(3, &c).unwrap();
        let want = &z3 * 2.0;
        assert!(((&v.value - &want) / want).abs().to_f64() < 1e-19, "{}", v.value);

        let v = eval_F(&HParams::new(2.0, vec![1.0; 4]).unwrap(), &c).unwrap();
        let z2 = numctx::zeta_const(2, &c).unwrap();
        assert!(((&v.value - &z2) / z2).abs().to_f64() < 1e-19, "{}", v.value);

        let v = eval_F(&HParams::new(5.0, vec![1.0; 3]).unwrap(), &c).unwrap();
        assert!(close(&v.value, 1.0 / 108.0, 1e-18));
        assert!(close(&v.value, 2.0 * ZETA3 / 2.0 / ZETA3 / 108.0, 1e-15));
    }

    #[test]
    fn divergence_is_rejected() {
        let c = ctx();
        let err = eval_F(&HParams::new(1.0, vec![1.0; 3]).unwrap(), &c).unwrap_err();
        assert!(matches!(err, SeriesError::Divergent { .. }));
    }

    #[test]
    fn dougall_examples() {
        let c = ctx();
        assert!(close(&dougall_F3(5.0, 1.0, 1.0, 1.0, &c).unwrap(), 1.0 / 108.0, 1e-30));
        assert!(close(&dougall_F3(3.0, 1.0, 1.0, 1.0, &c).unwrap(), 1.0, 1e-30));
        assert!(close(&dougall_F3(5.0, 2.0, 1.0, 1.0, &c).unwrap(), 1.0 / 24.0, 1e-30));
        assert!(dougall_F3(1.0, 1.0, 1.0, 1.0, &c).is_err());
    }

    #[test]
    fn normalization_examples() {
        let c = ctx();
        for (h0, h1, h2) in [(3.0, 1.0, 1.0), (4.0, 1.0, 1.0), (3.0, 1.5, 1.0)] {
            let v = check_F2_normalization(h0, h1, h2, &c).unwrap();
            assert!((v.to_f64() - 1.0).abs() < 1e-18, "({h0},{h1},{h2}) -> {v}");
        }
    }

    #[test]
    fn ratio_matches_direct_terms() {
        let c = ctx();
        let hp = HParams::new(3.7, vec![0.9, 1.3, 0.4, 1.1]).unwrap();
        for mu in 0..20 {
            let a = series_term(&hp, mu + 1, &c).unwrap();
            let b = series_term(&hp, mu, &c).unwrap();
            let r = term_ratio(&hp, mu, &c);
            assert!((&(&a / &b) - &r).abs().to_f64() < 1e-25 * r.abs().to_f64());
        }
    }

    #[test]
    fn zeta2_unaffected_by_doubling_cap() {
        let c1 = PrecisionContext::with_max_terms(128, 1e-20, 1 << 14).unwrap();
        let c2 = PrecisionContext::with_max_terms(128, 1e-20, 1 << 15).unwrap();
        let hp = HParams::new(2.0, vec![1.0; 4]).unwrap();
        let a = eval_F(&hp, &c1).unwrap();
        let b = eval_F(&hp, &c2).unwrap();
        assert!(a.converged);
        assert!(((&a.value - &b.value) / b.value.clone()).abs().to_f64() < 1e-20);
        assert!(close(&a.value, ZETA2, 1e-15));
    }

    #[test]
    fn slow_flag_near_boundary() {
        let c = make_context(64, 1e-8).unwrap();
        let hp = HParams::new(2.0, vec![1.19; 5]).unwrap();
        let v = eval_F(&hp, &c).unwrap();
        assert!(v.slow_convergence);
    }
}
