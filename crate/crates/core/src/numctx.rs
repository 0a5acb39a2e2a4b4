//! Precision model and special-function primitives.
//!
//! Every high-precision quantity in the crate is an [`HPReal`], a binary
//! floating-point number whose mantissa width is fixed by the
//! [`PrecisionContext`] that produced it. The context also carries the
//! relative tolerance used by iterative evaluations and caches zeta
//! constants, which are reused heavily by the exact linear-form code.
//!
//! Special functions:
//!
//! * [`log_gamma`] uses Stirling's series with exact Bernoulli coefficients
//!   after an upward shift by the functional equation, so that the
//!   truncation error is below `2^-working_bits` for any precision.
//! * [`digamma`] uses the matching asymptotic series.
//! * [`zeta_const`] uses Borwein's accelerated alternating series for
//!   `eta(s)` and converts with the exact factor `1 - 2^(1-s)`.

use std::cmp::Ordering;
use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

const RM: RoundingMode = RoundingMode::ToEven;

/// Extra mantissa bits used internally on top of the requested precision.
const GUARD_BITS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("precision_bits must be at least 64 (got {0})")]
    PrecisionTooLow(u32),
    #[error("rel_tol must be positive and above 2^-precision_bits (got {0:e})")]
    BadTolerance(f64),
    #[error("{func} requires a positive argument (got {arg})")]
    NonPositiveArgument { func: &'static str, arg: f64 },
    #[error("gamma pole at non-positive integer {0}")]
    GammaPole(f64),
    #[error("zeta(s) requires integer s >= 2 (got {0})")]
    ZetaDomain(i64),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("arithmetic produced a non-finite value")]
    NonFinite,
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision, tolerances and cached constants.
///
/// Cloning is cheap and clones share the zeta cache.
#[derive(Clone)]
pub struct PrecisionContext {
    precision_bits: u32,
    rel_tol: f64,
    max_terms: usize,
    zeta_cache: Arc<Mutex<HashMap<u32, HPReal>>>,
}

impl fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrecisionContext")
            .field("precision_bits", &self.precision_bits)
            .field("rel_tol", &self.rel_tol)
            .field("max_terms", &self.max_terms)
            .finish()
    }
}

pub const DEFAULT_MAX_TERMS: usize = 1 << 20;

/// Builds a context; rejects `precision_bits < 64` and non-positive tolerances.
pub fn make_context(precision_bits: u32, rel_tol: f64) -> Result<PrecisionContext, NumError> {
    PrecisionContext::new(precision_bits, rel_tol)
}

impl PrecisionContext {
    pub fn new(precision_bits: u32, rel_tol: f64) -> Result<Self, NumError> {
        Self::with_max_terms(precision_bits, rel_tol, DEFAULT_MAX_TERMS)
    }

    pub fn with_max_terms(precision_bits: u32, rel_tol: f64, max_terms: usize) -> Result<Self, NumError> {
        if precision_bits < 64 {
            return Err(NumError::PrecisionTooLow(precision_bits));
        }
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(NumError::BadTolerance(rel_tol));
        }
        // 2^-precision_bits < rel_tol; underflows to 0 for very wide contexts.
        if (-(precision_bits as f64)).exp2() >= rel_tol {
            return Err(NumError::BadTolerance(rel_tol));
        }
        Ok(Self {
            precision_bits,
            rel_tol,
            max_terms: max_terms.max(1),
            zeta_cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Mantissa width used for intermediate values.
    pub fn working_bits(&self) -> usize {
        self.precision_bits as usize + GUARD_BITS
    }

    pub fn real(&self, x: f64) -> HPReal {
        HPReal::from_f64(x, self.working_bits())
    }

    pub fn int(&self, n: i64) -> HPReal {
        HPReal::from_i64(n, self.working_bits())
    }

    pub fn rational(&self, q: &ExactRational) -> HPReal {
        HPReal::from_rational(q.as_big(), self.working_bits())
    }

    pub fn zero(&self) -> HPReal {
        self.int(0)
    }

    pub fn one(&self) -> HPReal {
        self.int(1)
    }

    pub fn pi(&self) -> HPReal {
        HPReal::pi(self.working_bits())
    }
}

/// A real number carried at a fixed binary precision.
#[derive(Debug)]
pub struct HPReal {
    v: BigFloat,
    p: usize,
}

impl Clone for HPReal {
    fn clone(&self) -> Self {
        Self { v: self.v.clone(), p: self.p }
    }
}

impl HPReal {
    pub fn from_f64(x: f64, p: usize) -> Self {
        Self { v: BigFloat::from_f64(x, p), p }
    }

    pub fn from_i64(n: i64, p: usize) -> Self {
        Self { v: BigFloat::from_i64(n, p), p }
    }

    pub fn from_bigint(n: &BigInt, p: usize) -> Self {
        if let Some(small) = n.to_i64() {
            return Self::from_i64(small, p);
        }
        // Assemble from 32-bit digits, most significant first.
        let (sign, digits) = n.to_u32_digits();
        let base = BigFloat::from_u64(1u64 << 32, p);
        let mut acc = BigFloat::from_u64(0, p);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d as u64, p), p, RM);
        }
        if sign == BigSign::Minus {
            acc.inv_sign();
        }
        Self { v: acc, p }
    }

    pub fn from_rational(q: &BigRational, p: usize) -> Self {
        let n = Self::from_bigint(q.numer(), p + 32);
        let d = Self::from_bigint(q.denom(), p + 32);
        let mut r = &n / &d;
        r.set_precision(p);
        r
    }

    pub fn pi(p: usize) -> Self {
        Self { v: with_consts(|cc| cc.pi(p, RM)), p }
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn set_precision(&mut self, p: usize) {
        // Precision is rounded up to whole words by the backend; errors only on p = 0.
        let _ = self.v.set_precision(p, RM);
        self.p = p;
    }

    pub fn with_precision(mut self, p: usize) -> Self {
        self.set_precision(p);
        self
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self { v: self.v.abs(), p: self.p }
    }

    pub fn ln(&self) -> Self {
        let p = self.p;
        Self { v: with_consts(|cc| self.v.ln(p, RM, cc)), p }
    }

    pub fn exp(&self) -> Self {
        let p = self.p;
        Self { v: with_consts(|cc| self.v.exp(p, RM, cc)), p }
    }

    pub fn sin(&self) -> Self {
        let p = self.p;
        Self { v: with_consts(|cc| self.v.sin(p, RM, cc)), p }
    }

    pub fn cos(&self) -> Self {
        let p = self.p;
        Self { v: with_consts(|cc| self.v.cos(p, RM, cc)), p }
    }

    pub fn sqrt(&self) -> Self {
        Self { v: self.v.sqrt(self.p, RM), p: self.p }
    }

    pub fn powi(&self, n: usize) -> Self {
        Self { v: self.v.powi(n, self.p, RM), p: self.p }
    }

    pub fn recip(&self) -> Self {
        Self { v: self.v.reciprocal(self.p, RM), p: self.p }
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`, or `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.v.is_zero() {
            return None;
        }
        self.v.exponent().map(|e| e as i64)
    }

    /// Mantissa as an unsigned integer `m` and a binary exponent `s` with `|x| = m * 2^s`.
    fn mantissa_parts(&self) -> Option<(BigUint, i64, bool)> {
        let (words, _bits, sign, e, _) = self.v.as_raw_parts()?;
        let word_bits = (std::mem::size_of_val(&words[0]) * 8) as i64;
        let mut digits: Vec<u32> = Vec::with_capacity(words.len() * 2);
        for w in words {
            let w = *w as u64;
            digits.push(w as u32);
            digits.push((w >> 32) as u32);
        }
        let m = BigUint::new(digits);
        let total = word_bits * words.len() as i64;
        Some((m, e as i64 - total, sign == Sign::Neg))
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let (m, shift, neg) = match self.mantissa_parts() {
            Some(x) => x,
            None => return f64::NAN,
        };
        // Keep the top 64 significant bits; the rest only affects rounding below f64 resolution.
        let bits = m.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&m >> drop as usize).to_u64().unwrap_or(0) as f64;
        let val = top * 2f64.powi(0) * pow2(shift + drop);
        if neg { -val } else { val }
    }

    /// Nearest integer (ties away from zero).
    pub fn round_to_bigint(&self) -> BigInt {
        if self.v.is_zero() {
            return BigInt::zero();
        }
        let (m, shift, neg) = self.mantissa_parts().expect("finite value");
        let mag: BigUint = if shift >= 0 {
            m << shift as usize
        } else {
            let s = (-shift) as usize;
            let half = if s > 0 { BigUint::one() << (s - 1) } else { BigUint::zero() };
            (m + half) >> s
        };
        let i = BigInt::from_biguint(BigSign::Plus, mag);
        if neg { -i } else { i }
    }

    /// Decimal rendering with `digits` total decimal digits in fixed notation
    /// (integer digits plus fractional digits), switching to scientific
    /// notation with `digits` significant digits for very small or large
    /// magnitudes.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        if self.is_zero() {
            return format!("0.{}", "0".repeat(digits.saturating_sub(1)));
        }
        let approx = self.to_f64().abs();
        if !(1e-6..1e30).contains(&approx) {
            return self.to_scientific_string(digits);
        }
        let int_digits = if approx < 1.0 { 1 } else { (approx.log10().floor() as usize) + 1 };
        let frac_digits = digits.saturating_sub(int_digits).max(1);
        let p = self.p + 64;
        let scale = HPReal::from_bigint(&BigInt::from(10u32).pow(frac_digits as u32), p);
        let scaled = &self.clone().with_precision(p) * &scale;
        let n = scaled.round_to_bigint();
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let s = if s.len() <= frac_digits {
            format!("{}{}", "0".repeat(frac_digits + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - frac_digits);
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
    }

    pub fn to_scientific_string(&self, digits: usize) -> String {
        let approx = self.to_f64().abs();
        let mut e10 = approx.log10().floor() as i64;
        let p = self.p + 64;
        let render = |e10: i64| -> BigInt {
            let shift = digits as i64 - 1 - e10;
            let ten = HPReal::from_i64(10, p);
            let factor = if shift >= 0 {
                ten.powi(shift as usize)
            } else {
                ten.powi((-shift) as usize).recip()
            };
            (&self.clone().with_precision(p) * &factor).round_to_bigint()
        };
        let mut n = render(e10);
        if n.abs().to_string().len() > digits {
            e10 += 1;
            n = render(e10);
        }
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let (lead, rest) = s.split_at(1);
        format!("{}{}.{}e{}", if neg { "-" } else { "" }, lead, rest, e10)
    }

    pub fn max_prec(&self, other: &Self) -> usize {
        self.p.max(other.p)
    }

    pub fn from_big(v: BigFloat, p: usize) -> Self {
        Self { v, p }
    }

    pub fn as_big(&self) -> &BigFloat {
        &self.v
    }
}

fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e < -1022 {
        2f64.powi(-1022) * 2f64.powi((e + 1022) as i32)
    } else {
        2f64.powi(e as i32)
    }
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.p as f64) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal_string(digits.max(2)))
    }
}

macro_rules! impl_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a HPReal> for &'a HPReal {
            type Output = HPReal;
            fn $m(self, rhs: &'a HPReal) -> HPReal {
                let p = self.max_prec(rhs);
                HPReal { v: self.v.$m(&rhs.v, p, RM), p }
            }
        }
        impl $tr<HPReal> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: HPReal) -> HPReal {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a HPReal> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: &'a HPReal) -> HPReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<f64> for &HPReal {
            type Output = HPReal;
            fn $m(self, rhs: f64) -> HPReal {
                let r = HPReal::from_f64(rhs, self.p);
                self.$m(&r)
            }
        }
        impl $tr<f64> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: f64) -> HPReal {
                (&self).$m(rhs)
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal { v: self.v.neg(), p: self.p }
    }
}

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal { v: self.v.clone().neg(), p: self.p }
    }
}

// ---------------------------------------------------------------------------
// Exact rationals

/// Rational number in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self)
    }
}

impl From<BigRational> for ExactRational {
    fn from(q: BigRational) -> Self {
        Self(q)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || NumError::ParseRational(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Self(BigRational::new(n, d)))
            }
            None => {
                if let Ok(n) = t.parse::<BigInt>() {
                    return Ok(Self::from_integer(n));
                }
                // Terminating decimals such as "0.25" are accepted exactly.
                let (ip, fp) = t.split_once('.').ok_or_else(bad)?;
                let neg = ip.starts_with('-');
                let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
                let n: BigInt = digits.parse().map_err(|_| bad())?;
                let d = BigInt::from(10u32).pow(fp.len() as u32);
                let q = BigRational::new(if neg { -n } else { n }, d);
                Ok(Self(q))
            }
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! impl_rat_op {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
    };
}

impl_rat_op!(Add, add);
impl_rat_op!(Sub, sub);
impl_rat_op!(Mul, mul);
impl_rat_op!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

/// `1 - 2^(1-s)`, so that `eta(s) = factor * zeta(s)`.
pub fn eta_to_zeta_factor(s: i64) -> Result<ExactRational, NumError> {
    if s < 2 {
        return Err(NumError::ZetaDomain(s));
    }
    let den = BigInt::one() << (s - 1) as usize;
    Ok(ExactRational::new(&den - BigInt::one(), den))
}

// ---------------------------------------------------------------------------
// Bernoulli numbers

static BERNOULLI: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();

/// Exact `B_{2m}` for `m = 1..=count`.
pub fn bernoulli_even(count: usize) -> Vec<BigRational> {
    let cache = BERNOULLI.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().expect("bernoulli cache poisoned");
    if guard.len() < count {
        *guard = compute_bernoulli_even(count.max(2 * guard.len()));
    }
    guard[..count].to_vec()
}

/// Akiyama–Tanigawa recurrence; returns `B_2, B_4, ..., B_{2count}`.
fn compute_bernoulli_even(count: usize) -> Vec<BigRational> {
    let n_max = 2 * count;
    let mut a: Vec<BigRational> = Vec::with_capacity(n_max + 1);
    let mut out = Vec::with_capacity(count);
    for m in 0..=n_max {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
        if m >= 2 && m % 2 == 0 {
            out.push(a[0].clone());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Gamma family

fn stirling_threshold(bits: usize) -> f64 {
    (bits as f64 * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI)).ceil() + 2.0
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal, NumError> {
    let xf = x.to_f64();
    if !(xf > 0.0) || x.is_zero() || x.is_negative() {
        return Err(NumError::NonPositiveArgument { func: "log_gamma", arg: xf });
    }
    let p = ctx.working_bits();
    let x = x.clone().with_precision(p);
    let threshold = stirling_threshold(p);
    let shift = if xf < threshold { (threshold - xf).ceil() as usize } else { 0 };

    let mut y = x.clone();
    let mut prod = HPReal::from_i64(1, p);
    for _ in 0..shift {
        prod = &prod * &y;
        y = &y + 1.0;
    }
    let mut result = stirling_ln_gamma(&y, p);
    if shift > 0 {
        result = &result - &prod.ln();
    }
    Ok(result)
}

/// Stirling series for `y` above the threshold.
fn stirling_ln_gamma(y: &HPReal, p: usize) -> HPReal {
    let half = HPReal::from_f64(0.5, p);
    let two_pi = &HPReal::pi(p) * 2.0;
    let mut s = &(&(y - &half) * &y.ln()) - y;
    s = &s + &(&two_pi.ln() * &half);

    let y2 = y * y;
    let mut ypow = y.clone(); // y^(2m-1)
    let eps_exp = -(p as i64) - 4;
    let mut m = 1usize;
    loop {
        let b = bernoulli_even(m);
        let bm = HPReal::from_rational(&b[m - 1], p);
        let denom = HPReal::from_i64(((2 * m) * (2 * m - 1)) as i64, p);
        let term = &bm / &(&denom * &ypow);
        s = &s + &term;
        let small = match (term.exponent(), s.exponent()) {
            (Some(te), Some(se)) => te - se < eps_exp,
            (None, _) => true,
            _ => false,
        };
        if small || m > 4 * p {
            break;
        }
        ypow = &ypow * &y2;
        m += 1;
    }
    s
}

/// `(ln |Gamma(x)|, sign Gamma(x))` for any real `x` that is not a pole.
pub fn log_gamma_signed(x: &HPReal, ctx: &PrecisionContext) -> Result<(HPReal, i8), NumError> {
    let xf = x.to_f64();
    if xf > 0.0 && !x.is_negative() {
        return Ok((log_gamma(x, ctx)?, 1));
    }
    let p = ctx.working_bits();
    let x = x.clone().with_precision(p);
    let frac = xf - xf.floor();
    if x.is_zero() || frac == 0.0 && (&x - xf).is_zero() {
        return Err(NumError::GammaPole(xf));
    }
    // Gamma(x) Gamma(1-x) = pi / sin(pi x); Gamma(1-x) > 0 here.
    let pi = HPReal::pi(p);
    let s = (&pi * &x).sin();
    if s.is_zero() {
        return Err(NumError::GammaPole(xf));
    }
    let one_minus = &HPReal::from_i64(1, p) - &x;
    let lg = log_gamma(&one_minus, ctx)?;
    let val = &(&pi.ln() - &s.abs().ln()) - &lg;
    Ok((val, if s.is_negative() { -1 } else { 1 }))
}

/// `Gamma(x)` for real `x` away from poles.
pub fn gamma(x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal, NumError> {
    let (l, s) = log_gamma_signed(x, ctx)?;
    let g = l.exp();
    Ok(if s < 0 { -g } else { g })
}

/// Digamma `psi(x)` for `x > 0`.
pub fn digamma(x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal, NumError> {
    let xf = x.to_f64();
    if !(xf > 0.0) || x.is_negative() || x.is_zero() {
        return Err(NumError::NonPositiveArgument { func: "digamma", arg: xf });
    }
    let p = ctx.working_bits();
    let mut y = x.clone().with_precision(p);
    let threshold = stirling_threshold(p);
    let mut acc = HPReal::from_i64(0, p);
    while y.to_f64() < threshold {
        acc = &acc - &y.recip();
        y = &y + 1.0;
    }
    // psi(y) ~ ln y - 1/(2y) - sum B_{2m} / (2m y^{2m})
    let mut s = &y.ln() - &(&y * 2.0).recip();
    let y2 = &y * &y;
    let mut ypow = y2.clone();
    let eps_exp = -(p as i64) - 4;
    let mut m = 1usize;
    loop {
        let b = bernoulli_even(m);
        let bm = HPReal::from_rational(&b[m - 1], p);
        let term = &bm / &(&ypow * (2 * m) as f64);
        s = &s - &term;
        let small = match (term.exponent(), s.exponent()) {
            (Some(te), Some(se)) => te - se < eps_exp,
            (None, _) => true,
            _ => false,
        };
        if small || m > 4 * p {
            break;
        }
        ypow = &ypow * &y2;
        m += 1;
    }
    Ok(&s + &acc)
}

/// `zeta(s)` for integer `s >= 2`, cached per context.
pub fn zeta_const(s: i64, ctx: &PrecisionContext) -> Result<HPReal, NumError> {
    if s < 2 {
        return Err(NumError::ZetaDomain(s));
    }
    let key = s as u32;
    if let Some(v) = ctx.zeta_cache.lock().expect("zeta cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let p = ctx.working_bits();
    let eta = borwein_eta(s as u32, p);
    let factor = eta_to_zeta_factor(s)?;
    let z = &eta / &ctx.rational(&factor);
    ctx.zeta_cache.lock().expect("zeta cache poisoned").insert(key, z.clone());
    Ok(z)
}

/// Borwein's algorithm for `eta(s) = sum_{k>=1} (-1)^(k-1) / k^s`.
fn borwein_eta(s: u32, p: usize) -> HPReal {
    // Error ~ 3 / (3 + sqrt 8)^n.
    let n = ((p as f64 + 8.0) * std::f64::consts::LN_2 / (3.0 + 8f64.sqrt()).ln()).ceil() as usize + 2;
    // d_k = n * sum_{i=0}^k (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let nb = BigInt::from(n);
    let mut term = BigRational::new(BigInt::one(), nb.clone()); // i = 0: (n-1)!/n! = 1/n
    let mut acc = BigRational::zero();
    for i in 0..=n {
        if i > 0 {
            // term_i / term_{i-1} = (n+i-1)(n-i+1) * 4 / ((2i)(2i-1))
            let num = BigInt::from(n + i - 1) * BigInt::from(n - i + 1) * BigInt::from(4);
            let den = BigInt::from(2 * i) * BigInt::from(2 * i - 1);
            term = term * BigRational::new(num, den);
        }
        acc = &acc + &term;
        let dk = &acc * BigRational::from_integer(nb.clone());
        debug_assert!(dk.is_integer());
        d.push(dk.to_integer());
    }
    let dn = d[n].clone();
    let mut sum = HPReal::from_i64(0, p);
    for k in 0..n {
        let c = HPReal::from_bigint(&(&d[k] - &dn), p);
        let kp = HPReal::from_i64((k + 1) as i64, p).powi(s as usize);
        let t = &c / &kp;
        sum = if k % 2 == 0 { &sum + &t } else { &sum - &t };
    }
    -(&sum / &HPReal::from_bigint(&dn, p))
}

/// `lcm(1, ..., n)` with `lcm() = 1`.
pub fn lcm_upto(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc = acc.lcm(&BigUint::from(i));
    }
    acc
}

// ---------------------------------------------------------------------------
// f64 companions for inner loops of quadrature and sampling.

/// `ln Gamma(x)` in double precision for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma_f64(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma_f64(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `ln B(a, b)` in double precision.
pub fn ln_beta_f64(a: f64, b: f64) -> f64 {
    ln_gamma_f64(a) + ln_gamma_f64(b) - ln_gamma_f64(a + b)
}
