//! Taylor coefficients of powers of the Blaschke factor
//! `b(z) = (z + λ)/(1 + conj(λ) z)` and the contraction factor `M_{a,λ}`.
//!
//! For `p ≥ 0` the power `b(z)^p = Σ_k α_{p,k} z^k` converges on every disk
//! of radius below `1/|λ|`; negative powers expand about infinity with the
//! conjugate coefficients, `α_{-p,k} = conj(α_{p,k})`, and are never stored.
//! Since `b` is inner, `Σ_k |α_{p,k}|² = 1` for `p ≠ 0`, and the weighted
//! tails obey `Σ_k |α_{p,k}|² e^{-2ak} ≤ M_{a,λ}^{|p|}` with
//! `M_{a,λ} = (|λ| + e^{-2a})/(1 + e^{-2a}|λ|) < 1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A Blaschke parameter `λ` with `|λ| < 1`, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeParam(Complex64);

impl BlaschkeParam {
    pub fn new(lambda: Complex64) -> Result<Self> {
        let modulus = lambda.norm();
        if !(modulus < 1.0) {
            return Err(Error::InvalidLambda { modulus });
        }
        Ok(Self(lambda))
    }

    pub fn real(lambda: f64) -> Result<Self> {
        Self::new(Complex64::new(lambda, 0.0))
    }

    pub fn lambda(&self) -> Complex64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }

    /// `λ^p` as a complex number (`p ≥ 0`).
    pub fn power(&self, p: u32) -> Complex64 {
        self.0.powu(p)
    }
}

/// The prefix `(α_{p,0}, …, α_{p,K})` of the Taylor expansion of `b^p`.
///
/// `power` is non-negative by construction; consumers obtain negative powers
/// through the conjugation convention `α_{-p,k} = conj(α_{p,k})`.
#[derive(Debug, Clone)]
pub struct BlaschkeCoefficients {
    pub param: BlaschkeParam,
    pub power: u32,
    pub coeffs: Arc<[Complex64]>,
}

impl BlaschkeCoefficients {
    /// Truncation order `K` (count of retained terms minus one).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `α_{p,k}` for the stored non-negative power.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    /// `Σ_{k=0}^{K} |α_{p,k}|²`; at most 1, tending to 1 as `K → ∞` (`p ≠ 0`).
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Coefficients of the single factor `b(z)` itself, by the closed form
/// `α_{1,0} = λ`, `α_{1,k} = (-conj λ)^{k-1}(1 - |λ|²)` for `k ≥ 1`.
fn single_factor(lambda: Complex64, order: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(order + 1);
    out.push(lambda);
    if order == 0 {
        return out;
    }
    let scale = Complex64::new(1.0 - lambda.norm_sqr(), 0.0);
    let ratio = -lambda.conj();
    let mut term = scale;
    out.push(term);
    for _ in 2..=order {
        term *= ratio;
        out.push(term);
    }
    out
}

/// Cauchy product of two series truncated at `order`; exact on the retained
/// prefix because higher-order terms cannot reach it.
fn convolve(a: &[Complex64], b: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    for (i, &ai) in a.iter().enumerate().take(order + 1) {
        for (j, &bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn power_series(lambda: Complex64, power: u32, order: usize) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); order + 1];
    acc[0] = Complex64::new(1.0, 0.0);
    if power == 0 {
        return acc;
    }
    let mut base = single_factor(lambda, order);
    let mut p = power;
    loop {
        if p & 1 == 1 {
            acc = convolve(&acc, &base, order);
        }
        p >>= 1;
        if p == 0 {
            break;
        }
        base = convolve(&base, &base, order);
    }
    acc
}

type CacheKey = (u64, u64, u32, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<[Complex64]>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<[Complex64]>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `(α_{p,0}, …, α_{p,K})` for `p = power ≥ 0` at truncation order `K`.
///
/// Computed by binary exponentiation of the closed-form single-factor series
/// with truncated Cauchy products; results are cached keyed by the exact bit
/// pattern of `λ`, so repeated queries are bit-identical regardless of call
/// or thread order.
pub fn coefficients(param: BlaschkeParam, power: u32, order: usize) -> BlaschkeCoefficients {
    let lambda = param.lambda();
    let key = (lambda.re.to_bits(), lambda.im.to_bits(), power, order);
    let mut guard = cache().lock().expect("coefficient cache poisoned");
    let coeffs = guard
        .entry(key)
        .or_insert_with(|| power_series(lambda, power, order).into())
        .clone();
    drop(guard);
    BlaschkeCoefficients { param, power, coeffs }
}

/// `α_{p,k}` for a signed power, applying `α_{-p,k} = conj(α_{p,k})`.
pub fn signed_coeff(coeffs: &BlaschkeCoefficients, signed_power: i64, k: usize) -> Complex64 {
    debug_assert_eq!(signed_power.unsigned_abs() as u32, coeffs.power);
    let c = coeffs.coeff(k);
    if signed_power < 0 {
        c.conj()
    } else {
        c
    }
}

/// `M_{a,λ} = max_{|z| = e^{-2a}} |b(z)| = (|λ| + e^{-2a})/(1 + e^{-2a}|λ|)`,
/// strictly inside `(0, 1)` for `a > 0`.
pub fn contraction_factor(param: BlaschkeParam, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidWeightExponent { a });
    }
    let r = (-2.0 * a).exp();
    let l = param.modulus();
    Ok((l + r) / (1.0 + r * l))
}

/// Partial weighted tail `Σ_{k=0}^{K} |α_{|p|,k}|² e^{-2ak}`.
///
/// Monotone nondecreasing in `K` and bounded by
/// `contraction_factor(λ, a)^{|p|}` for every `K`.
pub fn tail_energy(param: BlaschkeParam, power: i64, a: f64, order: usize) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidWeightExponent { a });
    }
    let coeffs = coefficients(param, power.unsigned_abs() as u32, order);
    let damp = (-2.0 * a).exp();
    let mut weight = 1.0;
    let mut sum = 0.0;
    for c in coeffs.coeffs.iter() {
        sum += c.norm_sqr() * weight;
        weight *= damp;
    }
    Ok(sum)
}

/// Smallest order `K` with `M_{a,λ}^K` below `tol`, so that the weighted
/// coefficient tail beyond `K` is below tolerance (geometric tail bound).
pub fn suggested_order(param: BlaschkeParam, a: f64, tol: f64) -> Result<usize> {
    let m = contraction_factor(param, a)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Ok(0);
    }
    Ok((tol.ln() / m.ln()).ceil().max(1.0) as usize)
}
