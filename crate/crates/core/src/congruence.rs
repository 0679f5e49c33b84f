//! Mod-p congruence of two curves, certified by comparing Frobenius traces up
//! to a Sturm bound, and irreducibility of E[p] for p in {3, 5, 7}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::cache::LocalCache;
use crate::error::{Error, Result};
use crate::local_reduction::{self, LocalReductionData, ReductionClass, SerreExponent};
use crate::places::BaseField;
use crate::poly::{self, ZPoly};
use crate::weierstrass::{EllipticCurve, PointCountConfig};

/// `floor((N / 6) prod_{l | N} (1 + 1/l))`.
pub fn sturm_bound(n: &BigInt) -> Result<BigInt> {
    let primes = arith::prime_divisors(n)?;
    let mut num = n.clone();
    let mut den = BigInt::from(6);
    for l in primes {
        num *= l + 1;
        den *= l;
    }
    Ok(num / den)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CongruenceStatus {
    ConsistentUpToBound,
    RefutedAt { ell: u64, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceVerdict {
    pub p: u64,
    #[serde(flatten)]
    pub status: CongruenceStatus,
    pub sturm_bound: String,
    pub bound_used: u64,
    /// The sweep stopped at the configured cap before reaching the Sturm bound.
    pub truncated: bool,
    #[serde(skip)]
    pub checked_primes: Vec<u64>,
    pub checked_count: usize,
}

impl CongruenceVerdict {
    pub fn is_consistent(&self) -> bool {
        self.status == CongruenceStatus::ConsistentUpToBound
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceConfig {
    /// Largest prime swept, regardless of the Sturm bound.
    pub max_prime: u64,
}

impl Default for CongruenceConfig {
    fn default() -> Self {
        CongruenceConfig { max_prime: 10_000 }
    }
}

pub fn congruent_mod_p(
    e1: &EllipticCurve,
    e2: &EllipticCurve,
    p: u64,
) -> Result<CongruenceVerdict> {
    congruent_mod_p_with(
        e1,
        e2,
        p,
        CongruenceConfig::default(),
        &LocalCache::in_memory(),
    )
}

/// Trace of Frobenius on E[p] at `ell`, or `None` when E[p] is ramified there.
fn residual_trace(
    curve: &EllipticCurve,
    red: &LocalReductionData,
    ell: u64,
    p: u64,
    cache: &LocalCache,
    count: PointCountConfig,
) -> Result<Option<i64>> {
    Ok(match red.reduction_class {
        ReductionClass::Good => Some(cache.trace(curve, ell, count)?),
        ReductionClass::SplitMultiplicative if red.v_delta_min.is_multiple_of(p as u32) => {
            Some(ell as i64 + 1)
        }
        ReductionClass::NonsplitMultiplicative if red.v_delta_min.is_multiple_of(p as u32) => {
            Some(-(ell as i64 + 1))
        }
        _ => None,
    })
}

fn check_prime(
    e1: &EllipticCurve,
    e2: &EllipticCurve,
    ell: u64,
    p: u64,
    cache: &LocalCache,
    count: PointCountConfig,
) -> Result<Option<String>> {
    let r1 = cache.local(e1, ell)?;
    let r2 = cache.local(e2, ell)?;
    let t1 = residual_trace(e1, &r1, ell, p, cache, count)?;
    let t2 = residual_trace(e2, &r2, ell, p, cache, count)?;
    let pi = p as i64;
    match (t1, t2) {
        (Some(a), Some(b)) if (a - b).rem_euclid(pi) != 0 => {
            return Ok(Some(format!(
                "traces {a} and {b} of Frobenius at {ell} differ mod {p}"
            )));
        }
        (Some(_), Some(_)) => return Ok(None),
        _ => {}
    }
    let x1 = local_reduction::serre_exponent(&r1, p)?.exponent;
    let x2 = local_reduction::serre_exponent(&r2, p)?.exponent;
    if let (SerreExponent::Known(a), SerreExponent::Known(b)) = (x1, x2) {
        if a != b {
            return Ok(Some(format!(
                "conductor exponents {a} and {b} of E[{p}] at {ell} differ"
            )));
        }
    }
    Ok(None)
}

pub fn congruent_mod_p_with(
    e1: &EllipticCurve,
    e2: &EllipticCurve,
    p: u64,
    config: CongruenceConfig,
    cache: &LocalCache,
) -> Result<CongruenceVerdict> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::InvalidP(p));
    }
    for e in [e1, e2] {
        if cache.local(e, p)?.reduction_class != ReductionClass::Good {
            return Err(Error::BadReductionAtP(p));
        }
    }
    let n1 = local_reduction::conductor(e1)?;
    let n2 = local_reduction::conductor(e2)?;
    let level = n1.lcm(&n2) * BigInt::from(p * p);
    let sturm = sturm_bound(&level)?;
    let (bound_used, truncated) = match sturm.to_u64() {
        Some(b) if b <= config.max_prime => (b, false),
        _ => (config.max_prime, true),
    };
    let count = PointCountConfig {
        max_prime: bound_used.max(2),
    };
    let primes: Vec<u64> = arith::primes_up_to(bound_used)
        .into_iter()
        .filter(|&l| l != p)
        .collect();
    let outcomes: Vec<Result<Option<String>>> = primes
        .par_iter()
        .map(|&ell| check_prime(e1, e2, ell, p, cache, count))
        .collect();
    let mut status = CongruenceStatus::ConsistentUpToBound;
    let mut checked = Vec::new();
    for (&ell, outcome) in primes.iter().zip(outcomes) {
        checked.push(ell);
        if let Some(reason) = outcome? {
            status = CongruenceStatus::RefutedAt { ell, reason };
            break;
        }
    }
    Ok(CongruenceVerdict {
        p,
        status,
        sturm_bound: sturm.to_string(),
        bound_used,
        truncated,
        checked_count: checked.len(),
        checked_primes: checked,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityVerdict {
    pub status: Irreducibility,
    pub witness: Option<String>,
}

impl IrreducibilityVerdict {
    fn new(status: Irreducibility, witness: impl Into<String>) -> Self {
        IrreducibilityVerdict {
            status,
            witness: Some(witness.into()),
        }
    }
}

pub fn irreducible_mod_p(curve: &EllipticCurve, p: u64) -> Result<IrreducibilityVerdict> {
    irreducible_mod_p_over(curve, p, BaseField::Rationals, &LocalCache::in_memory())
}

/// Irreducibility of E[p] as a module for the absolute Galois group of `field`.
///
/// A p-isogeny kernel over the field shows up as a root in the field of the
/// p-division polynomial. Over Q its absence settles p = 3 outright; for p = 5
/// and 7 a Frobenius whose characteristic polynomial is irreducible mod p
/// proves irreducibility, and otherwise the answer is Unknown.
pub fn irreducible_mod_p_over(
    curve: &EllipticCurve,
    p: u64,
    field: BaseField,
    cache: &LocalCache,
) -> Result<IrreducibilityVerdict> {
    if !matches!(p, 3 | 5 | 7) {
        return Err(Error::UnsupportedPrime(p));
    }
    let inv = curve.invariants();
    let fp = poly::division_polynomial(&inv, p as usize);
    if let Some((n, d)) = fp.rational_roots().into_iter().next() {
        return Ok(IrreducibilityVerdict::new(
            Irreducibility::Reducible,
            format!(
                "rational root x = {} of the {p}-division polynomial",
                fmt_frac(&n, &d)
            ),
        ));
    }
    if let BaseField::Quadratic { d } = field {
        if p == 3 {
            if let Some(w) = quadratic_kernel_over(&fp, d)? {
                return Ok(IrreducibilityVerdict::new(Irreducibility::Reducible, w));
            }
            return Ok(IrreducibilityVerdict::new(
                Irreducibility::Irreducible,
                format!("3-division polynomial has no root in {field}"),
            ));
        }
    } else if p == 3 {
        return Ok(IrreducibilityVerdict::new(
            Irreducibility::Irreducible,
            "3-division polynomial has no rational root",
        ));
    }
    if let Some(w) = frobenius_witness(curve, p, field, cache)? {
        return Ok(IrreducibilityVerdict::new(Irreducibility::Irreducible, w));
    }
    Ok(IrreducibilityVerdict {
        status: Irreducibility::Unknown,
        witness: None,
    })
}

fn fmt_frac(n: &BigInt, d: &BigInt) -> String {
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// Root of the quartic in Q(sqrt d) \ Q, via a rational quadratic factor
/// whose discriminant has squarefree part `d`.
fn quadratic_kernel_over(quartic: &ZPoly, d: i64) -> Result<Option<String>> {
    let monic = poly::monicize(quartic);
    for (u, v) in poly::monic_quartic_quadratic_factors(&monic) {
        let disc = &u * &u - 4 * &v;
        if disc == BigInt::from(0) {
            continue;
        }
        if arith::squarefree_part(&disc)? == BigInt::from(d) {
            return Ok(Some(format!(
                "quadratic factor y^2 + ({u})y + ({v}) of the scaled 3-division polynomial splits over Q(sqrt{{{d}}})"
            )));
        }
    }
    Ok(None)
}

/// A good prime whose Frobenius has irreducible characteristic polynomial mod p.
fn frobenius_witness(
    curve: &EllipticCurve,
    p: u64,
    field: BaseField,
    cache: &LocalCache,
) -> Result<Option<String>> {
    let count = PointCountConfig::default();
    for ell in arith::primes_up_to(2_000) {
        if ell == p || cache.local(curve, ell)?.reduction_class != ReductionClass::Good {
            continue;
        }
        let a = cache.trace(curve, ell, count)?;
        let (t, n, label) = match field {
            BaseField::Rationals => (a, ell as i64, format!("{ell}")),
            BaseField::Quadratic { .. } => match arith::kronecker(field.discriminant(), ell) {
                1 => (a, ell as i64, format!("a place above {ell}")),
                -1 => (
                    a * a - 2 * ell as i64,
                    (ell * ell) as i64,
                    format!("the inert place {ell}"),
                ),
                _ => continue,
            },
        };
        let disc = t * t - 4 * n;
        if arith::legendre(disc.rem_euclid(p as i64), p) == -1 {
            return Ok(Some(format!(
                "Frobenius at {label} has characteristic polynomial x^2 - ({t})x + {n}, irreducible mod {p}"
            )));
        }
    }
    Ok(None)
}
