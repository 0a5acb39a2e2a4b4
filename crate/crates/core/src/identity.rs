//! The correspondence between the series parameters `h` and the integral
//! parameters `(a, b)`, a numerical verifier for `J_k = prefactor * F_{k+2}`,
//! and the finite group of parameter transformations.
//!
//! For rank `k` the series has lower parameters `h_1..h_{k+2}` and
//!
//! ```text
//! a_0 = h_1,  a_j = h_{j+1},  b_j = 1 + h_0 - h_{j+2}     (j = 1..k)
//! J_k(a; b) = prod_{j=1}^{k+1} Gamma(1 + h_0 - h_j - h_{j+1}) / (Gamma(h_1) Gamma(h_{k+2})) * F_{k+2}(h)
//! ```
//!
//! # The involution `c`
//!
//! `Q_k` depends on the last two coordinates only through
//! `(1 - x_k) x_{k-1}`, which the swap `(x_{k-1}, x_k) -> (1 - x_k, 1 - x_{k-1})`
//! preserves. The coordinate weights trade places, so
//!
//! ```text
//! a'_{k-1} = b_k - a_k,  b'_{k-1} = b_k,  a'_k = b_{k-1} - a_{k-1},  b'_k = b_{k-1}
//! ```
//!
//! with every other parameter fixed. The equal-sum pattern
//! `b_j + a_{j+1} = const` survives, and pulling back through the
//! correspondence gives on `h`:
//!
//! ```text
//! h_0'     = 1 + 2 h_0 - h_k - h_{k+1} - h_{k+2}
//! h_k'     = 1 + h_0 - h_{k+1} - h_{k+2}
//! h_{k+1}' = 1 + h_0 - h_k - h_{k+1}
//! h_{k+2}' = 1 + h_0 - h_k - h_{k+2}
//! ```

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::hyperseries::{self, check_conditions, ConditionReport, HParams, SeriesError};
use crate::multint::{self, ABParams, IntegralError, McConfig};
use crate::numctx::{ExactRational, HPReal, NumError, PrecisionContext};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentityError {
    #[error("expected {expected} lower parameters, got {got}")]
    Arity { expected: String, got: usize },
    #[error("well-poised pattern b_j + a_(j+1) = const fails at j = {index}: {left} vs {right}")]
    NotWellPoised { index: usize, left: f64, right: f64 },
    #[error("theorem conditions fail: {0:?}")]
    Conditions(ConditionReport),
    #[error("the involution c is only available for k = 2 and k = 3 (got {0})")]
    NoInvolution(usize),
    #[error("group closure exceeded {0} elements")]
    ClosureCap(usize),
    #[error("affine map is singular")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("not a permutation of 1..={0}")]
    BadPermutation(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Rank `k` of a series parameter vector with `k + 2` lower parameters.
pub fn rank_of(h: &HParams) -> Result<usize, IdentityError> {
    h.k()
        .checked_sub(2)
        .filter(|&k| k >= 1)
        .ok_or(IdentityError::Arity { expected: "at least 3".into(), got: h.k() })
}

pub fn h_to_ab(h: &HParams) -> Result<ABParams, IdentityError> {
    let k = rank_of(h)?;
    let a = (1..=k).map(|j| h.get(j + 1)).collect();
    let b = (1..=k).map(|j| 1.0 + h.h0() - h.get(j + 2)).collect();
    Ok(ABParams::new(h.get(1), a, b)?)
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
}

/// Inverse of [`h_to_ab`]; for `k = 1` uses the convention `h_0 = a_1 + b_1 - 1`.
pub fn ab_to_h(ab: &ABParams) -> Result<HParams, IdentityError> {
    let (a, b, k) = (ab.a(), ab.b(), ab.k());
    for j in 1..k.saturating_sub(1) {
        let (left, right) = (b[0] + a[1], b[j] + a[j + 1]);
        if !close(left, right) {
            return Err(IdentityError::NotWellPoised { index: j + 1, left, right });
        }
    }
    let h0 = if k >= 2 { b[0] + a[1] - 1.0 } else { a[0] + b[0] - 1.0 };
    let mut lower = vec![ab.a0()];
    lower.extend_from_slice(a);
    lower.push(1.0 + h0 - b[k - 1]);
    Ok(HParams::new(h0, lower)?)
}

/// `ln` and sign of `prod_{j=1}^{k+1} Gamma(1 + h_0 - h_j - h_{j+1}) / (Gamma(h_1) Gamma(h_{k+2}))`.
pub fn theorem_prefactor(h: &HParams, ctx: &PrecisionContext) -> Result<HPReal, IdentityError> {
    let k = rank_of(h)?;
    let p = ctx.working_bits();
    let hp = |x: f64| HPReal::from_f64(x, p);
    let h0 = hp(h.h0());
    let numer: Vec<HPReal> =
        (1..=k + 1).map(|j| &(&h0 + 1.0) - &(&hp(h.get(j)) + &hp(h.get(j + 1)))).collect();
    let denom = vec![hp(h.get(1)), hp(h.get(k + 2))];
    Ok(hyperseries::signed_gamma_quotient(&numer, &denom, ctx)?)
}

/// How the integral side is evaluated by [`verify_theorem`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifySettings {
    /// Relative agreement required when the integral is computed by quadrature.
    pub quad_tol: f64,
    pub quad_start: usize,
    pub quad_max: usize,
    /// Monte Carlo is used for `k > max_quad_k`.
    pub max_quad_k: usize,
    pub mc: McConfig,
    /// Acceptance band in standard errors for Monte Carlo.
    pub mc_sigmas: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            quad_tol: 1e-8,
            quad_start: 32,
            quad_max: 256,
            max_quad_k: 3,
            mc: McConfig { samples: 10_000_000, seed: 42, chunks: 16 },
            mc_sigmas: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhsMethod {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// Quadrature error estimate (relative) or Monte Carlo standard error (absolute).
    pub rhs_error: f64,
    pub method: RhsMethod,
    pub pass: bool,
    pub conditions: ConditionReport,
}

/// Evaluates both sides of `J_k(h_to_ab(h)) = prefactor * F_{k+2}(h)`.
pub fn verify_theorem(h: &HParams, ctx: &PrecisionContext, settings: &VerifySettings) -> Result<TheoremCheck, IdentityError> {
    let k = rank_of(h)?;
    let conditions = check_conditions(h);
    if !conditions.all_ok() {
        return Err(IdentityError::Conditions(conditions));
    }
    let f = hyperseries::eval_F(h, ctx)?;
    let lhs = (&theorem_prefactor(h, ctx)? * &f.value).to_f64();
    let ab = h_to_ab(h)?;
    let (rhs, rhs_error, method, pass) = if k <= settings.max_quad_k {
        let r = multint::eval_j_adaptive(&ab, settings.quad_tol * 1e-2, settings.quad_start, settings.quad_max, ctx)?;
        let rhs = r.value.to_f64();
        let pass = (lhs - rhs).abs() <= settings.quad_tol * lhs.abs();
        (rhs, r.rel_err, RhsMethod::Quadrature, pass)
    } else {
        let r = multint::eval_j_mc(&ab, &settings.mc)?;
        let pass = (lhs - r.estimate).abs() <= settings.mc_sigmas * r.stderr;
        (r.estimate, r.stderr, RhsMethod::MonteCarlo, pass)
    };
    Ok(TheoremCheck { k, lhs, rhs, rhs_error, method, pass, conditions })
}

/// Whether the Monte Carlo estimator of `J_k(ab)` under Beta sampling has
/// finite variance, i.e. `Q_k^{-2 a_0}` is integrable against the weights.
pub fn mc_variance_finite(ab: &ABParams) -> bool {
    let doubled = ABParams::new(2.0 * ab.a0(), ab.a().to_vec(), ab.b().to_vec());
    doubled.map(|d| multint::singularity_margin(&d) > 0.0).unwrap_or(false)
}

/// `F_{k+2}(h) / prod_{j>=1} Gamma(h_j)`, symmetric in the lower parameters.
pub fn normalized_invariant(h: &HParams, ctx: &PrecisionContext) -> Result<HPReal, IdentityError> {
    let f = hyperseries::eval_F(h, ctx)?;
    let p = ctx.working_bits();
    let denom: Vec<HPReal> = h.lower().iter().map(|&x| HPReal::from_f64(x, p)).collect();
    let g = hyperseries::signed_gamma_quotient(&[], &denom, ctx)?;
    Ok(&f.value * &g)
}

/// `J_k(ab) / (prod_{j=1}^k Gamma(a_j) * Gamma(b_1 + a_2 - a_0 - a_1) * prod_j Gamma(b_j - a_j))`
/// from a given integral value.
pub fn normalized_j(ab: &ABParams, j_value: f64) -> f64 {
    use crate::numctx::ln_gamma_f64 as lg;
    let (a, b) = (ab.a(), ab.b());
    let first = if ab.k() >= 2 { b[0] + a[1] - ab.a0() - a[0] } else { b[0] - ab.a0() };
    let ln_den: f64 = a.iter().map(|&x| lg(x)).sum::<f64>()
        + lg(first)
        + a.iter().zip(b).map(|(&x, &y)| lg(y - x)).sum::<f64>();
    j_value * (-ln_den).exp()
}

/// Exact affine map `v -> M v + c` on `(h_0, h_1, ..., h_{k+2})`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineMap {
    matrix: Vec<Vec<ExactRational>>,
    offset: Vec<ExactRational>,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<ExactRational>>, offset: Vec<ExactRational>) -> Result<Self, IdentityError> {
        let n = offset.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(IdentityError::Dimension(matrix.len(), n));
        }
        let m = Self { matrix, offset };
        if m.determinant().is_zero() {
            return Err(IdentityError::Singular);
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ExactRational::one() } else { ExactRational::zero() }).collect())
            .collect();
        Self { matrix, offset: vec![ExactRational::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn matrix(&self) -> &[Vec<ExactRational>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[ExactRational] {
        &self.offset
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let n = self.dim();
        let mut matrix = vec![vec![ExactRational::zero(); n]; n];
        let mut offset = self.offset.clone();
        for i in 0..n {
            for l in 0..n {
                let a = self.matrix[i][l].as_big();
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a * other.matrix[l][j].as_big();
                    if !v.is_zero() {
                        matrix[i][j] = ExactRational::from(matrix[i][j].as_big() + v);
                    }
                }
                offset[i] = ExactRational::from(offset[i].as_big() + a * other.offset[l].as_big());
            }
        }
        AffineMap { matrix, offset }
    }

    fn big_matrix(&self) -> Vec<Vec<BigRational>> {
        self.matrix.iter().map(|r| r.iter().map(|v| v.as_big().clone()).collect()).collect()
    }

    pub fn determinant(&self) -> ExactRational {
        let mut m = self.big_matrix();
        let n = m.len();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return ExactRational::zero();
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det *= m[col][col].clone();
            for r in col + 1..n {
                let f = &m[r][col] / &m[col][col];
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = &f * &m[col][c];
                    m[r][c] -= v;
                }
            }
        }
        ExactRational::from(det)
    }

    pub fn inverse(&self) -> Result<AffineMap, IdentityError> {
        let n = self.dim();
        let mut m = self.big_matrix();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(IdentityError::Singular)?;
            m.swap(piv, col);
            inv.swap(piv, col);
            let d = m[col][col].recip();
            for c in 0..n {
                m[col][c] *= &d;
                inv[col][c] *= &d;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..n {
                        let (a, b) = (&f * &m[col][c], &f * &inv[col][c]);
                        m[r][c] -= a;
                        inv[r][c] -= b;
                    }
                }
            }
        }
        // v = M^{-1} (w - c)
        let offset = (0..n)
            .map(|i| {
                let s: BigRational = (0..n).map(|j| &inv[i][j] * self.offset[j].as_big()).sum();
                ExactRational::from(-s)
            })
            .collect();
        let matrix = inv.into_iter().map(|r| r.into_iter().map(ExactRational::from).collect()).collect();
        Ok(AffineMap { matrix, offset })
    }

    pub fn apply_exact(&self, v: &[ExactRational]) -> Vec<ExactRational> {
        (0..self.dim())
            .map(|i| {
                let s: BigRational = self.matrix[i].iter().zip(v).map(|(m, x)| m.as_big() * x.as_big()).sum();
                ExactRational::from(s + self.offset[i].as_big())
            })
            .collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.matrix[i].iter().zip(v).map(|(m, x)| m.to_f64() * x).sum::<f64>() + self.offset[i].to_f64())
            .collect()
    }

    /// Applies the map to `h` and returns the new parameter vector.
    pub fn apply_h(&self, h: &HParams) -> Result<HParams, IdentityError> {
        let v = h.to_vec();
        if v.len() != self.dim() {
            return Err(IdentityError::Dimension(v.len(), self.dim()));
        }
        Ok(HParams::from_slice(&self.apply(&v))?)
    }

    /// The induced action on well-poised integral parameters: `h_to_ab ∘ self ∘ ab_to_h`.
    pub fn apply_ab(&self, ab: &ABParams) -> Result<ABParams, IdentityError> {
        h_to_ab(&self.apply_h(&ab_to_h(ab)?)?)
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, c) in self.matrix.iter().zip(&self.offset) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}] + {}", cells.join(" "), c)?;
        }
        Ok(())
    }
}

impl Serialize for AffineMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let strs = |r: &[ExactRational]| r.iter().map(|v| v.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("AffineMap", 2)?;
        st.serialize_field("matrix", &self.matrix.iter().map(|r| strs(r)).collect::<Vec<_>>())?;
        st.serialize_field("offset", &strs(&self.offset))?;
        st.end()
    }
}

fn r(n: i64) -> ExactRational {
    ExactRational::from(n)
}

/// Builds a map from rows given as `(offset, [(column, coefficient)])`.
fn from_rows(n: usize, rows: Vec<(i64, Vec<(usize, i64)>)>) -> AffineMap {
    let mut matrix = vec![vec![ExactRational::zero(); n]; n];
    let mut offset = vec![ExactRational::zero(); n];
    for (i, (c, entries)) in rows.into_iter().enumerate() {
        offset[i] = r(c);
        for (j, v) in entries {
            matrix[i][j] = r(v);
        }
    }
    AffineMap { matrix, offset }
}

/// The map permuting `h_1..h_{k+2}` by `sigma` (a permutation of `1..=k+2`
/// given as images of `1, 2, ...`): the new `h_i` is the old `h_{sigma(i)}`.
pub fn induced_ab_action(k: usize, sigma: &[usize]) -> Result<AffineMap, IdentityError> {
    let m = k + 2;
    let mut seen = vec![false; m + 1];
    if sigma.len() != m || sigma.iter().any(|&s| s == 0 || s > m || std::mem::replace(&mut seen[s], true)) {
        return Err(IdentityError::BadPermutation(m));
    }
    let mut rows = vec![(0, vec![(0, 1)])];
    rows.extend(sigma.iter().map(|&s| (0, vec![(s, 1)])));
    Ok(from_rows(m + 1, rows))
}

/// The involution induced by `(x_{k-1}, x_k) -> (1 - x_k, 1 - x_{k-1})`.
pub fn c_transform(k: usize) -> Result<AffineMap, IdentityError> {
    if !(k == 2 || k == 3) {
        return Err(IdentityError::NoInvolution(k));
    }
    let n = k + 3;
    let mut rows: Vec<(i64, Vec<(usize, i64)>)> = (0..n).map(|i| (0, vec![(i, 1)])).collect();
    rows[0] = (1, vec![(0, 2), (k, -1), (k + 1, -1), (k + 2, -1)]);
    rows[k] = (1, vec![(0, 1), (k + 1, -1), (k + 2, -1)]);
    rows[k + 1] = (1, vec![(0, 1), (k, -1), (k + 1, -1)]);
    rows[k + 2] = (1, vec![(0, 1), (k, -1), (k + 2, -1)]);
    Ok(from_rows(n, rows))
}

/// Adjacent transpositions generating all permutations of `h_1..h_{k+2}`.
pub fn permutation_generators(k: usize) -> Vec<AffineMap> {
    (1..k + 2)
        .map(|i| {
            let mut sigma: Vec<usize> = (1..=k + 2).collect();
            sigma.swap(i - 1, i);
            induced_ab_action(k, &sigma).expect("valid transposition")
        })
        .collect()
}

pub const CLOSURE_CAP: usize = 100_000;

#[derive(Debug, Clone)]
pub struct GroupClosure {
    pub order: usize,
    pub elements: BTreeSet<AffineMap>,
}

/// Breadth-first closure of the generated group under composition.
pub fn group_closure(generators: &[AffineMap]) -> Result<GroupClosure, IdentityError> {
    let Some(first) = generators.first() else {
        return Ok(GroupClosure { order: 1, elements: BTreeSet::new() });
    };
    let id = AffineMap::identity(first.dim());
    let mut elements = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = s.compose(&g);
            if !elements.contains(&h) {
                if elements.len() >= CLOSURE_CAP {
                    return Err(IdentityError::ClosureCap(CLOSURE_CAP));
                }
                elements.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(GroupClosure { order: elements.len(), elements })
}

/// `e_{0l} = h_l - 1` and `e_{jl} = h_0 - h_j - h_l`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EParams {
    pub e0: Vec<f64>,
    pub e: BTreeMap<(usize, usize), f64>,
}

impl EParams {
    /// All values sorted, for multiset comparison.
    pub fn multiset(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.e0.iter().chain(self.e.values()).copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn e_parameters(h: &HParams) -> EParams {
    let m = h.k();
    let e0 = (1..=m).map(|l| h.get(l) - 1.0).collect();
    let mut e = BTreeMap::new();
    for j in 1..=m {
        for l in j + 1..=m {
            e.insert((j, l), h.h0() - h.get(j) - h.get(l));
        }
    }
    EParams { e0, e }
}

/// Whether the map sends every `h` to a vector whose e-multiset is a
/// permutation of the original one, tested on the given sample points.
pub fn permutes_e_multiset(map: &AffineMap, samples: &[HParams]) -> bool {
    samples.iter().all(|h| {
        let Ok(img) = map.apply_h(h) else { return false };
        let (a, b) = (e_parameters(h).multiset(), e_parameters(&img).multiset());
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(1.0))
    })
}

/// Absolute value of the determinant's sign check used by callers.
pub fn is_unimodular(map: &AffineMap) -> bool {
    map.determinant().as_big().abs().is_one()
}
