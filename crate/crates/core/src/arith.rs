//! Small-integer number theory used throughout the crate: primes, valuations,
//! quadratic residue symbols and polynomial arithmetic over prime fields.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// All primes `p <= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut ps = num_prime::nt_funcs::primes(limit + 1);
    ps.retain(|&p| p <= limit);
    ps
}

/// Exponent of `p` in `n`. Zero is reported as `u32::MAX`.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Least non-negative residue of `n` modulo `m`.
pub fn mod_u64(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

pub fn mod_i64(n: i64, m: u64) -> u64 {
    n.rem_euclid(m as i64) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`; `None` when `p | a`.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Legendre symbol `(a / p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i8 {
    debug_assert!(p > 2);
    let a = mod_i64(a, p);
    legendre_residue(a, p)
}

pub fn legendre_big(a: &BigInt, p: u64) -> i8 {
    legendre_residue(mod_u64(a, p), p)
}

fn legendre_residue(a: u64, p: u64) -> i8 {
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d / l)` for a prime `l`, including `l = 2`.
pub fn kronecker(d: i64, l: u64) -> i8 {
    if l == 2 {
        if d % 2 == 0 {
            0
        } else {
            match d.rem_euclid(8) {
                1 | 7 => 1,
                _ => -1,
            }
        }
    } else {
        legendre(d, l)
    }
}

/// Whether `a` is a square in the residue field of size `l^f` (`l` odd).
/// Elements of the prime field are always squares in the quadratic extension.
pub fn is_square_in_residue_field(a: i64, l: u64, f: u8) -> bool {
    if f.is_multiple_of(2) {
        return true;
    }
    legendre(a, l) >= 0
}

/// Distinct prime divisors of a non-zero integer, ascending.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroHasNoFactorization);
    }
    let m: BigUint = n.abs().to_biguint().expect("absolute value");
    if m.is_one() {
        return Ok(Vec::new());
    }
    let (found, rest) = num_prime::nt_funcs::factors(m, None);
    if let Some(rest) = rest {
        return Err(ArithError::FactorizationFailed(
            rest.iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        ));
    }
    let mut out = Vec::with_capacity(found.len());
    for p in found.keys() {
        match p.to_u64() {
            Some(p) => out.push(p),
            None => return Err(ArithError::PrimeTooLarge(p.to_string())),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Squarefree part of a non-zero integer, keeping its sign.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroHasNoFactorization);
    }
    let mut out = BigInt::from(if n.sign() == Sign::Minus { -1 } else { 1 });
    for p in prime_divisors(n)? {
        if valuation(n, p) % 2 == 1 {
            out *= p;
        }
    }
    Ok(out)
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    match prime_divisors(&BigInt::from(d)) {
        Ok(ps) => ps.iter().all(|&p| valuation(&BigInt::from(d), p) == 1),
        Err(_) => false,
    }
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Dense polynomial over `F_p`, lowest degree first, always trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut poly = FpPoly { coeffs, p };
        poly.trim();
        poly
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(coeffs, self.p)
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p)
            .collect();
        FpPoly::new(coeffs, self.p)
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(Vec::new(), self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(coeffs, self.p)
    }

    /// Remainder of division by a non-zero divisor.
    fn rem(&self, divisor: &Self) -> Self {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(divisor.coeffs[d], self.p).expect("leading coefficient");
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let top = *r.last().unwrap();
            if top != 0 {
                let factor = mul_mod(top, lead_inv, self.p);
                let shift = r.len() - 1 - d;
                for (i, &c) in divisor.coeffs.iter().enumerate() {
                    let sub = mul_mod(factor, c, self.p);
                    r[shift + i] = (r[shift + i] + self.p - sub) % self.p;
                }
            }
            r.pop();
        }
        FpPoly::new(r, self.p)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.degree() {
            None => self.clone(),
            Some(d) => {
                let inv = inv_mod(self.coeffs[d], self.p).expect("non-zero leading coefficient");
                FpPoly::new(
                    self.coeffs
                        .iter()
                        .map(|&c| mul_mod(c, inv, self.p))
                        .collect(),
                    self.p,
                )
            }
        }
    }

    /// `x^e mod self`.
    fn x_pow_mod(&self, mut e: u64) -> Self {
        let mut base = FpPoly::new(vec![0, 1], self.p).rem(self);
        let mut acc = FpPoly::new(vec![1], self.p).rem(self);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(self);
            }
            base = base.mul(&base).rem(self);
            e >>= 1;
        }
        acc
    }

    /// Number of distinct roots in `F_p`.
    pub fn count_distinct_roots(&self) -> usize {
        match self.degree() {
            None => self.p as usize,
            Some(0) => 0,
            Some(_) if self.p <= 64 => (0..self.p).filter(|&x| self.eval(x) == 0).count(),
            Some(_) => {
                let xp = self.x_pow_mod(self.p);
                let xp_minus_x = xp.sub(&FpPoly::new(vec![0, 1], self.p));
                self.gcd(&xp_minus_x).degree().unwrap_or(0)
            }
        }
    }

    /// The root shared with the derivative, when there is exactly one.
    pub fn repeated_root(&self) -> Option<u64> {
        if self.p <= 64 {
            return (0..self.p).find(|&x| self.eval(x) == 0 && self.derivative().eval(x) == 0);
        }
        let g = self.gcd(&self.derivative());
        match g.degree() {
            Some(1) => Some((self.p - g.coeffs[0]) % self.p),
            _ => None,
        }
    }
}
