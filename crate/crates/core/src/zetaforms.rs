//! Exact linear forms in zeta values for integer parameters.
//!
//! With integer `h`, every Gamma ratio in the series summand is a finite
//! product of linear factors, so the summand is a rational function of `mu`
//! with integer poles. Splitting it into partial fractions and summing each
//! term in closed form gives `F = q0 + sum_s q_s zeta(s)` with rational `q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::hyperseries::HParams;
use crate::numctx::{self, ExactRational, HPReal, NumError, PrecisionContext};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaFormError {
    #[error("parameter {index} = {value} is not a positive integer")]
    NonInteger { index: usize, value: f64 },
    #[error("lower parameter h_{index} = {value} exceeds h_0 = {h0}")]
    LowerExceedsTop { index: usize, value: i64, h0: i64 },
    #[error("denominator has a non-integer pole")]
    NonIntegerPole,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("pole at t = {0} lies on the summation range")]
    PoleOnSummationRange(i64),
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("non-zeta residue: aggregate ln 2 coefficient {0}")]
    NonZetaResidue(ExactRational),
    #[error("k must be {0}")]
    BadK(&'static str),
    #[error(transparent)]
    Num(#[from] NumError),
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense polynomial in `t` with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `t + m`.
    pub fn linear(m: BigRational) -> Self {
        Self::new(vec![m, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let z = BigRational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|v| v * c).collect())
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in d.0.iter().enumerate() {
                rem[shift + i] -= &c * dc;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading();
        a.scale(&l.recip())
    }

    /// Coefficients of `p(c + s)` as a polynomial in `s`.
    fn taylor_shift(&self, c: &BigRational) -> Poly {
        let mut out: Vec<BigRational> = Vec::new();
        for coef in self.0.iter().rev() {
            // out = out * (s + c) + coef
            let mut next = vec![BigRational::zero(); out.len() + 1];
            for (i, v) in out.iter().enumerate() {
                next[i + 1] += v;
                next[i] += v * c;
            }
            next[0] += coef;
            out = next;
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A reduced quotient of polynomials with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Poly,
    denominator: Poly,
}

impl RationalFunction {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self, ZetaFormError> {
        if denominator.is_zero() {
            return Err(ZetaFormError::ZeroDenominator);
        }
        let g = numerator.gcd(&denominator);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (numerator.div_rem(&g).0, denominator.div_rem(&g).0)
        } else {
            (numerator, denominator)
        };
        let lead = den.leading().recip();
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(Self { numerator: num, denominator: den })
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        let d = self.denominator.eval(t);
        (!d.is_zero()).then(|| self.numerator.eval(t) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

fn integer_params(h: &HParams) -> Result<Vec<i64>, ZetaFormError> {
    let v = h.to_vec();
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            if x >= 1.0 && x.fract() == 0.0 && x < 1e15 {
                Ok(x as i64)
            } else {
                Err(ZetaFormError::NonInteger { index: i, value: x })
            }
        })
        .collect()
}

/// The series summand for integer parameters as an exact rational function
/// of `mu`, and whether the series carries the sign `(-1)^mu`.
pub fn build_rational_term(h: &HParams) -> Result<(RationalFunction, bool), ZetaFormError> {
    let hv = integer_params(h)?;
    let h0 = hv[0];
    for (i, &hj) in hv.iter().enumerate().skip(1) {
        if hj > h0 {
            return Err(ZetaFormError::LowerExceedsTop { index: i, value: hj, h0 });
        }
    }
    // multiplicity of each linear factor (t + m): positive in the numerator
    let mut factors: BTreeMap<i64, i64> = BTreeMap::new();
    for &hj in &hv {
        // Gamma(hj + t) / Gamma(1 + h0 - hj + t)
        let g = 1 + h0 - hj;
        let (lo, hi, sign) = if hj >= g { (g, hj, 1) } else { (hj, g, -1) };
        for m in lo..hi {
            *factors.entry(m).or_insert(0) += sign;
        }
    }
    let mut num = Poly::new(vec![q(h0), q(2)]);
    let mut den = Poly::constant(BigRational::one());
    for (&m, &e) in &factors {
        let lin = Poly::linear(q(m));
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                num = num.mul(&lin);
            } else {
                den = den.mul(&lin);
            }
        }
    }
    Ok((RationalFunction::new(num, den)?, h.alternating()))
}

/// `A_{i j} / (t + j)^i` terms plus a polynomial part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFractions {
    /// Shifts `j` of the poles `t = -j`, ascending.
    pub poles: Vec<i64>,
    /// `(i, j) -> A_{i j}`.
    pub coeffs: BTreeMap<(u32, i64), ExactRational>,
    pub polynomial: Poly,
}

impl PartialFractions {
    /// Rebuilds `num / den` with the denominator `prod (t + j)^{max i}`.
    pub fn reconstruct(&self) -> Result<RationalFunction, ZetaFormError> {
        let mut mult: BTreeMap<i64, u32> = BTreeMap::new();
        for &(i, j) in self.coeffs.keys() {
            let e = mult.entry(j).or_insert(0);
            *e = (*e).max(i);
        }
        let pow = |j: i64, e: u32| (0..e).fold(Poly::constant(BigRational::one()), |p, _| p.mul(&Poly::linear(q(j))));
        let den = mult.iter().fold(Poly::constant(BigRational::one()), |p, (&j, &e)| p.mul(&pow(j, e)));
        let mut num = self.polynomial.mul(&den);
        for (&(i, j), a) in &self.coeffs {
            let mut rest = Poly::constant(a.as_big().clone());
            for (&l, &e) in &mult {
                let e = if l == j { e - i } else { e };
                rest = rest.mul(&pow(l, e));
            }
            num = num.add(&rest);
        }
        RationalFunction::new(num, den)
    }

    pub fn residue_sum(&self) -> BigRational {
        self.coeffs.iter().filter(|((i, _), _)| *i == 1).map(|(_, a)| a.as_big().clone()).sum()
    }
}

/// Integer roots of `p` (which must split over the integers) with multiplicities.
fn integer_roots(p: &Poly) -> Result<BTreeMap<i64, u32>, ZetaFormError> {
    let mut roots = BTreeMap::new();
    let d = p.degree().unwrap_or(0);
    if d == 0 {
        return Ok(roots);
    }
    // For a monic polynomial with real roots r_i, sum r_i^2 = e1^2 - 2 e2 bounds every |r_i|.
    let lead = p.leading();
    let c = |i: usize| p.coeffs()[i].clone() / &lead;
    let e1 = -c(d - 1);
    let e2 = if d >= 2 { c(d - 2) } else { BigRational::zero() };
    let p2 = &e1 * &e1 - q(2) * e2;
    if p2.is_negative() {
        return Err(ZetaFormError::NonIntegerPole);
    }
    let bound = p2.to_f64().unwrap_or(f64::INFINITY).sqrt().floor() as i64 + 1;
    let mut rest = p.clone();
    for r in -bound..=bound {
        let lin = Poly::linear(q(-r));
        loop {
            if rest.degree().unwrap_or(0) == 0 || !rest.eval(&q(r)).is_zero() {
                break;
            }
            rest = rest.div_rem(&lin).0;
            *roots.entry(r).or_insert(0) += 1;
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        return Err(ZetaFormError::NonIntegerPole);
    }
    Ok(roots)
}

/// Truncated power-series product of `a` and `b` to `order` terms.
fn series_mul(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order];
    for (i, x) in a.iter().enumerate().take(order) {
        for (j, y) in b.iter().enumerate().take(order - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Decomposition by Taylor expansion at each pole.
pub fn partial_fractions(rf: &RationalFunction) -> Result<PartialFractions, ZetaFormError> {
    let (polynomial, rem) = rf.numerator.div_rem(&rf.denominator);
    let roots = integer_roots(&rf.denominator)?;
    let mut coeffs = BTreeMap::new();
    for (&r, &m) in &roots {
        let j = -r;
        let order = m as usize;
        // g(t) = rem(t) / prod_{l != r} (t - l)^{m_l}, expanded at t = r + s
        let mut g: Vec<BigRational> = rem.taylor_shift(&q(r)).coeffs().to_vec();
        g.resize(order.max(g.len()), BigRational::zero());
        g.truncate(order);
        for (&l, &ml) in &roots {
            if l == r {
                continue;
            }
            // 1 / (s + (r - l)) = sum_n (-1)^n s^n / c^{n+1}
            let c = q(r - l);
            let inv: Vec<BigRational> = (0..order)
                .map(|n| {
                    let v = c.pow(-(n as i32 + 1));
                    if n % 2 == 0 { v } else { -v }
                })
                .collect();
            for _ in 0..ml {
                g = series_mul(&g, &inv, order);
            }
        }
        for (n, v) in g.into_iter().enumerate() {
            if !v.is_zero() {
                coeffs.insert(((order - n) as u32, j), ExactRational::from(v));
            }
        }
    }
    Ok(PartialFractions { poles: roots.keys().rev().map(|r| -r).collect(), coeffs, polynomial })
}

/// `q0 + sum_s q_s zeta(s)` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForm {
    pub q0: ExactRational,
    /// Nonzero coefficients only.
    pub qzeta: BTreeMap<u32, ExactRational>,
}

impl LinearForm {
    pub fn coeff(&self, s: u32) -> ExactRational {
        self.qzeta.get(&s).cloned().unwrap_or_else(ExactRational::zero)
    }

    fn add_zeta(&mut self, s: u32, v: BigRational) {
        let e = self.qzeta.entry(s).or_insert_with(ExactRational::zero);
        *e = ExactRational::from(e.as_big() + v);
        if e.is_zero() {
            self.qzeta.remove(&s);
        }
    }

    pub fn scale(&self, c: &BigRational) -> LinearForm {
        LinearForm {
            q0: ExactRational::from(self.q0.as_big() * c),
            qzeta: self
                .qzeta
                .iter()
                .map(|(&s, v)| (s, ExactRational::from(v.as_big() * c)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.q0.is_integer() && self.qzeta.values().all(|v| v.is_integer())
    }

    pub fn value(&self, ctx: &PrecisionContext) -> Result<HPReal, NumError> {
        let mut acc = ctx.rational(&self.q0);
        for (&s, c) in &self.qzeta {
            acc = &acc + &(&ctx.rational(c) * &numctx::zeta_const(s as i64, ctx)?);
        }
        Ok(acc)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q0)?;
        for (s, c) in &self.qzeta {
            write!(f, " + ({c})*zeta({s})")?;
        }
        Ok(())
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        struct Zeta<'a>(&'a BTreeMap<u32, ExactRational>);
        impl Serialize for Zeta<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
                let mut m = ser.serialize_map(Some(self.0.len()))?;
                for (s, v) in self.0 {
                    m.serialize_entry(&s.to_string(), &v.to_string())?;
                }
                m.end()
            }
        }
        let mut m = ser.serialize_map(Some(2))?;
        m.serialize_entry("q0", &self.q0.to_string())?;
        m.serialize_entry("zeta", &Zeta(&self.qzeta))?;
        m.end()
    }
}

/// `sum_{m=1}^{n} sign^{m-1} / m^i` exactly.
fn finite_power_sum(n: i64, i: u32, alternating: bool) -> BigRational {
    (1..=n)
        .map(|m| {
            let v = BigRational::new(BigInt::one(), BigInt::from(m).pow(i));
            if alternating && m % 2 == 0 { -v } else { v }
        })
        .sum()
}

/// Sums `sum_{mu >= 0} (+-1)^mu pf(mu)` in closed form.
///
/// An alternating summand tending to a nonzero constant `c` is summed in the
/// Abel sense, contributing `c/2`; this is the value the averaged partial
/// sums of the numerical series converge to.
pub fn sum_to_linear_form(pf: &PartialFractions, alternating: bool) -> Result<LinearForm, ZetaFormError> {
    let abel_constant = match pf.polynomial.degree() {
        None => BigRational::zero(),
        Some(0) if alternating => pf.polynomial.leading() / q(2),
        Some(_) => return Err(ZetaFormError::Divergent("summand does not tend to zero".into())),
    };
    if let Some(&j) = pf.poles.iter().find(|&&j| j <= 0) {
        return Err(ZetaFormError::PoleOnSummationRange(-j));
    }
    let mut form = LinearForm::default();
    let mut q0 = abel_constant;
    let mut ln2 = BigRational::zero();
    if !alternating && !pf.residue_sum().is_zero() {
        return Err(ZetaFormError::Divergent(format!("simple-pole residues sum to {}", pf.residue_sum())));
    }
    for (&(i, j), a) in &pf.coeffs {
        let a = a.as_big();
        if !alternating {
            // sum_{mu >= 0} 1/(mu + j)^i = zeta(i) - H_{j-1}^{(i)}; for i = 1 only the finite part survives
            q0 -= a * finite_power_sum(j - 1, i, false);
            if i >= 2 {
                form.add_zeta(i, a.clone());
            }
        } else {
            // sum_{mu >= 0} (-1)^mu/(mu + j)^i = (-1)^{j-1} (eta(i) - sum_{m<j} (-1)^{m-1}/m^i)
            let sign = if (j - 1) % 2 == 0 { q(1) } else { q(-1) };
            let sa = &sign * a;
            q0 -= &sa * finite_power_sum(j - 1, i, true);
            if i == 1 {
                ln2 += sa;
            } else {
                let f = numctx::eta_to_zeta_factor(i as i64)?;
                form.add_zeta(i, sa * f.as_big());
            }
        }
    }
    if !ln2.is_zero() {
        return Err(ZetaFormError::NonZetaResidue(ln2.into()));
    }
    form.q0 = q0.into();
    Ok(form)
}

/// Parameters `h_0 = (2r+1)n+2`, `h_j = rn+1` for `j = 1..k+2`.
pub fn specialization(k: usize, n: u64, r: u64) -> Result<HParams, ZetaFormError> {
    if k < 2 {
        return Err(ZetaFormError::BadK("at least 2"));
    }
    if r == 0 {
        return Err(ZetaFormError::BadK("paired with r >= 1"));
    }
    let h0 = ((2 * r + 1) * n + 2) as f64;
    let hj = (r * n + 1) as f64;
    HParams::new(h0, vec![hj; k + 2]).map_err(|e| ZetaFormError::Divergent(e.to_string()))
}

/// The exact linear form equal to `F_{k+2}` at the specialization above.
pub fn linear_form_for(k: usize, n: u64, r: u64) -> Result<LinearForm, ZetaFormError> {
    let h = specialization(k, n, r)?;
    let (rf, alt) = build_rational_term(&h)?;
    let pf = partial_fractions(&rf)?;
    sum_to_linear_form(&pf, alt)
}

/// `D_n = lcm(1..n)` and `Phi_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArithNormalizers {
    pub n: u64,
    #[serde(serialize_with = "ser_display", rename = "D_n")]
    pub d_n: BigUint,
    #[serde(serialize_with = "ser_display", rename = "Phi_n")]
    pub phi_n: BigUint,
}

fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Primes below `n` by the sieve of Eratosthenes.
pub fn primes_below(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            for m in (i * i..n).step_by(i) {
                sieve[m] = false;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &p)| p).map(|(p, _)| p as u64).collect()
}

/// Primes `p < n` with fractional part `{n/p}` in `[2/3, 1)`, tested exactly as `3 (n mod p) >= 2 p`.
pub fn phi_primes(n: u64) -> Vec<u64> {
    primes_below(n).into_iter().filter(|&p| 3 * (n % p) >= 2 * p).collect()
}

fn product(v: &[u64]) -> BigUint {
    match v.len() {
        0 => BigUint::one(),
        1 => BigUint::from(v[0]),
        _ => {
            let (a, b) = v.split_at(v.len() / 2);
            product(a) * product(b)
        }
    }
}

/// `D_n` and `Phi_n`, with `D_0 = Phi_0 = 1`.
pub fn normalizers(n: u64) -> ArithNormalizers {
    ArithNormalizers { n, d_n: numctx::lcm_upto(n), phi_n: product(&phi_primes(n)) }
}

/// `ln(Phi_n) / n`.
pub fn phi_growth(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let s: f64 = phi_primes(n).iter().map(|&p| (p as f64).ln()).sum();
    s / n as f64
}

/// Outcome of the integrality test for `D_n^e Phi_n^{-1} J_{k,n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionReport {
    pub k: usize,
    pub n: u64,
    /// `J_{k,n}` as a linear form.
    pub j_form: LinearForm,
    /// `D_n^{k+1} Phi_n^{-1} J_{k,n}`.
    pub scaled: LinearForm,
    /// Whether `scaled` has integer coefficients and only odd zeta values.
    pub included: bool,
    /// Smallest `e <= k+1` for which `D_n^e Phi_n^{-1} J_{k,n}` is integral, if any.
    pub min_exponent: Option<u32>,
}

/// `J_{k,n} = (n!)^{k-1} F_{k+2}` at `r = 1` and its normalized integrality.
pub fn inclusion_report(k: usize, n: u64) -> Result<InclusionReport, ZetaFormError> {
    if k < 3 || k % 2 == 0 {
        return Err(ZetaFormError::BadK("odd and at least 3"));
    }
    let f = linear_form_for(k, n, 1)?;
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    let j_form = f.scale(&BigRational::from_integer(fact.pow(k as u32 - 1)));
    let norm = normalizers(n);
    let d = BigRational::from_integer(BigInt::from(norm.d_n.clone()));
    let phi = BigRational::from_integer(BigInt::from(norm.phi_n.clone()));
    let scaled_by = |e: u32| j_form.scale(&(d.pow(e as i32) / &phi));
    let scaled = scaled_by(k as u32 + 1);
    let odd_only = scaled.qzeta.keys().all(|s| s % 2 == 1 && *s >= 3);
    let included = odd_only && scaled.is_integral();
    let min_exponent = (0..=k as u32 + 1).find(|&e| scaled_by(e).is_integral());
    Ok(InclusionReport { k, n, j_form, scaled, included, min_exponent })
}

pub fn inclusion_check(k: usize, n: u64) -> Result<bool, ZetaFormError> {
    Ok(inclusion_report(k, n)?.included)
}

/// Exact summand value at integer `mu` (for brute-force partial sums).
pub fn term_at(rf: &RationalFunction, alternating: bool, mu: u64) -> BigRational {
    let v = rf.eval(&q(mu as i64)).expect("summation index hits a pole");
    if alternating && mu.is_odd() { -v } else { v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den_roots: &[i64]) -> RationalFunction {
        let num = Poly::new(num.iter().map(|&c| q(c)).collect());
        let den = den_roots.iter().fold(Poly::constant(q(1)), |p, &j| p.mul(&Poly::linear(q(j))));
        RationalFunction::new(num, den).unwrap()
    }

    #[test]
    fn rational_terms_for_unit_parameters() {
        let h = HParams::new(2.0, vec![1.0; 5]).unwrap();
        let (r, alt) = build_rational_term(&h).unwrap();
        assert!(!alt);
        assert_eq!(r, rf(&[2], &[1, 1, 1]));
        let h = HParams::new(2.0, vec![1.0; 4]).unwrap();
        let (r, alt) = build_rational_term(&h).unwrap();
        assert!(alt);
        assert_eq!(r, rf(&[2], &[1, 1]));
        let h = HParams::new(3.0, vec![1.0, 1.0]).unwrap();
        let (r, alt) = build_rational_term(&h).unwrap();
        assert!(alt);
        assert_eq!(r, rf(&[3, 2], &[1, 2]));
        assert!(build_rational_term(&HParams::new(2.5, vec![1.0, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let pf = partial_fractions(&rf(&[1], &[1, 2])).unwrap();
        assert_eq!(pf.coeffs[&(1, 1)], ExactRational::from(1));
        assert_eq!(pf.coeffs[&(1, 2)], ExactRational::from(-1));
        let pf = partial_fractions(&rf(&[2], &[1, 1, 1])).unwrap();
        assert_eq!(pf.coeffs.len(), 1);
        assert_eq!(pf.coeffs[&(3, 1)], ExactRational::from(2));
        let pf = partial_fractions(&rf(&[3, 2], &[1, 2])).unwrap();
        assert_eq!(pf.coeffs[&(1, 1)], ExactRational::from(1));
        assert_eq!(pf.coeffs[&(1, 2)], ExactRational::from(1));
        let irreducible = RationalFunction::new(Poly::constant(q(1)), Poly::new(vec![q(1), q(0), q(1)])).unwrap();
        assert_eq!(partial_fractions(&irreducible), Err(ZetaFormError::NonIntegerPole));
    }

    #[test]
    fn closed_form_sums() {
        let f = sum_to_linear_form(&partial_fractions(&rf(&[1], &[1, 2])).unwrap(), false).unwrap();
        assert_eq!(f.q0, ExactRational::one());
        assert!(f.qzeta.is_empty());
        let f = sum_to_linear_form(&partial_fractions(&rf(&[2], &[1, 1, 1])).unwrap(), false).unwrap();
        assert_eq!((f.q0.clone(), f.coeff(3)), (ExactRational::zero(), ExactRational::from(2)));
        let f = sum_to_linear_form(&partial_fractions(&rf(&[2], &[1, 1])).unwrap(), true).unwrap();
        assert_eq!((f.q0.clone(), f.coeff(2)), (ExactRational::zero(), ExactRational::one()));
        // sum (-1)^mu / (mu + 1) = ln 2
        let r = sum_to_linear_form(&partial_fractions(&rf(&[1], &[1])).unwrap(), true);
        assert!(matches!(r, Err(ZetaFormError::NonZetaResidue(_))));
        let r = sum_to_linear_form(&partial_fractions(&rf(&[1], &[1])).unwrap(), false);
        assert!(matches!(r, Err(ZetaFormError::Divergent(_))));
        // (t+2)/(t+1) = 1 + 1/(t+1): Abel part 1/2 plus a ln 2 residue
        let r = sum_to_linear_form(&partial_fractions(&rf(&[2, 1], &[1])).unwrap(), true);
        assert!(matches!(r, Err(ZetaFormError::NonZetaResidue(_))));
        // t^2/(t+1)^2 = 1 - 2/(t+1) + 1/(t+1)^2 alternates to 1/2 - 2 ln 2 + zeta(2)/2
        let r = sum_to_linear_form(&partial_fractions(&rf(&[0, 0, 1], &[1, 1])).unwrap(), true);
        assert!(matches!(r, Err(ZetaFormError::NonZetaResidue(_))));
        let r = sum_to_linear_form(&partial_fractions(&rf(&[0, 0, 1], &[1])).unwrap(), true);
        assert!(matches!(r, Err(ZetaFormError::Divergent(_))));
    }

    #[test]
    fn specialized_forms() {
        let f = linear_form_for(3, 0, 1).unwrap();
        assert!(f.q0.is_zero());
        assert_eq!(f.qzeta, BTreeMap::from([(3, ExactRational::from(2))]));
        let f = linear_form_for(2, 0, 1).unwrap();
        assert!(f.q0.is_zero());
        assert_eq!(f.qzeta, BTreeMap::from([(2, ExactRational::one())]));
        let json = serde_json::to_string(&linear_form_for(3, 0, 1).unwrap()).unwrap();
        assert_eq!(json, r#"{"q0":"0","zeta":{"3":"2"}}"#);
    }

    #[test]
    fn normalizer_examples() {
        assert_eq!(normalizers(6).d_n, BigUint::from(60u32));
        assert_eq!(normalizers(5).phi_n, BigUint::from(3u32));
        assert_eq!(normalizers(10).phi_n, BigUint::one());
        assert_eq!(normalizers(0).d_n, BigUint::one());
        assert_eq!(normalizers(0).phi_n, BigUint::one());
        assert!((phi_growth(5) - 3f64.ln() / 5.0).abs() < 1e-15);
        assert_eq!(phi_growth(10), 0.0);
    }

    #[test]
    fn inclusion_small_cases() {
        assert!(inclusion_check(3, 0).unwrap());
        let r = inclusion_report(3, 1).unwrap();
        assert!(r.included, "{r:?}");
        let r = inclusion_report(5, 1).unwrap();
        assert!(r.included);
        assert!(r.scaled.qzeta.keys().all(|s| [3, 5].contains(s)));
        assert!(inclusion_check(4, 1).is_err());
    }
}
