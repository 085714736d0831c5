//! Exact-rational Taylor jets at poles of the curvature profile.
//!
//! The reduced equation is multiplied through by sigma = s - s_star so that
//! the pole of h becomes the analytic series H(sigma) = sigma*h. Coefficients
//! are then matched order by order in exact rational arithmetic; the
//! unknown at each order enters affinely, so two residual evaluations pin it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::SignPair;
use crate::error::{Result, SolitonError};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Truncated power series of f at a center, exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet {
    pub center: f64,
    pub coeffs: Vec<Rat>,
}

impl TaylorJet {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff_f64(&self, k: usize) -> f64 {
        self.coeffs[k].to_f64().unwrap()
    }

    /// f(center + x), Horner in f64.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap();
        }
        acc
    }

    /// f'(center + x).
    pub fn eval_deriv(&self, x: f64) -> f64 {
        let mut v = 0.0;
        for k in (1..self.coeffs.len()).rev() {
            v = v * x + k as f64 * self.coeffs[k].to_f64().unwrap();
        }
        v
    }

    /// Exact evaluation at a rational offset, used by the gluing oracle.
    pub fn eval_rational(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Polynomial coefficients of f in the offset variable, as f64.
    pub fn poly_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap()).collect()
    }

    /// Polynomial coefficients of f' in the offset variable, as f64.
    pub fn deriv_poly_f64(&self) -> Vec<f64> {
        (1..self.coeffs.len())
            .map(|k| k as f64 * self.coeffs[k].to_f64().unwrap())
            .collect()
    }
}

fn mul_trunc(a: &[Rat], b: &[Rat], len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Taylor coefficients of sigma*coth(sigma) = cosh(sigma) / (sinh(sigma)/sigma).
pub fn s_coth_series(order: usize) -> Vec<Rat> {
    let len = order + 1;
    let mut num = vec![Rat::zero(); len]; // cosh
    let mut den = vec![Rat::zero(); len]; // sinh(sigma)/sigma
    let mut fact = Rat::one();
    for i in 0..len {
        if i > 0 {
            fact *= Rat::from_integer(BigInt::from(i as i64));
        }
        if i % 2 == 0 {
            num[i] = fact.recip();
        }
        let mut f2 = fact.clone();
        f2 *= Rat::from_integer(BigInt::from((i + 1) as i64));
        if i % 2 == 0 {
            den[i] = f2.recip();
        }
    }
    // q = num / den by forward substitution; den[0] = 1
    let mut q = vec![Rat::zero(); len];
    for i in 0..len {
        let mut acc = num[i].clone();
        for j in 0..i {
            acc -= &q[j] * &den[i - j];
        }
        q[i] = acc;
    }
    q
}

/// Coefficient of sigma^(k-1) in  sigma*f'' - (eps_tilde + eps*f'^2)(sigma - f'*H).
fn residual_coeff(signs: SignPair, h_sigma: &[Rat], a: &[Rat], k: usize) -> Rat {
    let len = k; // we need coefficients 0..=k-1
    let et = Rat::from_integer(BigInt::from(signs.epsilon_tilde as i64));
    let ep = Rat::from_integer(BigInt::from(signs.epsilon as i64));

    // f' coefficients: P[i] = (i+1) a[i+1]
    let mut p = vec![Rat::zero(); len];
    for i in 0..len {
        if i + 1 < a.len() {
            p[i] = Rat::from_integer(BigInt::from((i + 1) as i64)) * &a[i + 1];
        }
    }
    let p2 = mul_trunc(&p, &p, len);
    let ph = mul_trunc(&p, h_sigma, len);

    // RHS = (et + ep*P^2) * (sigma - P*H)
    let mut fac1 = vec![Rat::zero(); len];
    fac1[0] = et;
    for i in 0..len {
        fac1[i] += &ep * &p2[i];
    }
    let mut fac2 = vec![Rat::zero(); len];
    if len > 1 {
        fac2[1] = Rat::one();
    }
    for i in 0..len {
        fac2[i] -= &ph[i];
    }
    let rhs = mul_trunc(&fac1, &fac2, len);

    // LHS coefficient at sigma^(k-1): k(k-1) a_k
    let mut lhs = Rat::zero();
    if k < a.len() {
        lhs = Rat::from_integer(BigInt::from((k * (k - 1)) as i64)) * &a[k];
    }
    lhs - &rhs[k - 1]
}

/// Solve the formal jet recurrence for f at a pole of h.
///
/// `h_sigma` holds the Taylor coefficients of H(sigma) = sigma*h(s_star+sigma);
/// H(0) is the pole coefficient c. The jet has f(center) = a0 and f'(center) = 0.
pub fn jet_from_h_series(
    signs: SignPair,
    h_sigma: &[Rat],
    a0: Rat,
    order: usize,
    center: f64,
) -> Result<TaylorJet> {
    if order < 2 {
        return Err(SolitonError::JetFailure("jet order must be >= 2".into()));
    }
    let mut a = vec![Rat::zero(); order + 1];
    a[0] = a0;
    for k in 2..=order {
        a[k] = Rat::zero();
        let r0 = residual_coeff(signs, h_sigma, &a, k);
        a[k] = Rat::one();
        let r1 = residual_coeff(signs, h_sigma, &a, k);
        let lambda = r1 - &r0;
        if lambda.is_zero() {
            return Err(SolitonError::DegenerateJet { order: k });
        }
        a[k] = -r0 / lambda;
    }
    Ok(TaylorJet { center, coeffs: a })
}

/// Jet at a pure rational pole h(s) = c/(s - s_star), centered at the pole.
pub fn jet_at_pole(signs: SignPair, c: Rat, order: usize, center: f64) -> Result<TaylorJet> {
    let one_plus = Rat::one() + Rat::from_integer(BigInt::from(signs.epsilon_tilde as i64)) * &c;
    if one_plus.is_zero() {
        return Err(SolitonError::DegenerateJet { order: 2 });
    }
    jet_from_h_series(signs, &[c], Rat::zero(), order, center)
}

/// Residual series of a jet through sigma^(order-1); all entries vanish for a
/// correct jet. Exposed for the verification tests.
pub fn formal_residual(signs: SignPair, h_sigma: &[Rat], jet: &TaylorJet) -> Vec<Rat> {
    (1..=jet.order())
        .map(|k| residual_coeff(signs, h_sigma, &jet.coeffs, k))
        .collect()
}
