//! Integral Weierstrass models, their standard invariants, and Frobenius
//! traces at primes of good reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::local_reduction::{self, LocalReductionData, ReductionClass};

/// An elliptic curve over Q given by an integral model
/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EllipticCurve {
    a: [BigInt; 5],
    label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveInvariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub discriminant: BigInt,
    /// `j = j_num / j_den` in lowest terms with `j_den > 0`.
    pub j_num: BigInt,
    pub j_den: BigInt,
}

impl EllipticCurve {
    pub fn new(a: [BigInt; 5]) -> Result<Self> {
        let curve = EllipticCurve { a, label: None };
        if curve.discriminant().is_zero() {
            return Err(Error::SingularCurve(None));
        }
        Ok(curve)
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(BigInt::from))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coefficients(&self) -> &[BigInt; 5] {
        &self.a
    }

    pub fn a1(&self) -> &BigInt {
        &self.a[0]
    }
    pub fn a2(&self) -> &BigInt {
        &self.a[1]
    }
    pub fn a3(&self) -> &BigInt {
        &self.a[2]
    }
    pub fn a4(&self) -> &BigInt {
        &self.a[3]
    }
    pub fn a6(&self) -> &BigInt {
        &self.a[4]
    }

    fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = a1 * a3 + 2 * a4;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn invariants(&self) -> CurveInvariants {
        let (b2, b4, b6, b8) = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        let discriminant =
            -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
        let c4_cubed: BigInt = &c4 * &c4 * &c4;
        assert_eq!(&discriminant * 1728, &c4_cubed - &c6 * &c6);
        assert_eq!(&b8 * 4, &b2 * &b6 - &b4 * &b4);
        let g = c4_cubed.gcd(&discriminant);
        let mut j_num = &c4_cubed / &g;
        let mut j_den = &discriminant / &g;
        if j_den.is_negative() {
            j_num = -j_num;
            j_den = -j_den;
        }
        CurveInvariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            discriminant,
            j_num,
            j_den,
        }
    }

    /// Model after `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`. `None` if
    /// the result is not integral.
    pub fn change_coordinates(
        &self,
        u: &BigInt,
        r: &BigInt,
        s: &BigInt,
        t: &BigInt,
    ) -> Option<EllipticCurve> {
        let [a1, a2, a3, a4, a6] = &self.a;
        let n1 = a1 + 2 * s;
        let n2 = a2 - s * a1 + 3 * r - s * s;
        let n3 = a3 + r * a1 + 2 * t;
        let n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        let mut out = [n1, n2, n3, n4, n6];
        if !u.is_one() {
            for (c, k) in out.iter_mut().zip([1u32, 2, 3, 4, 6]) {
                let (q, rem) = c.div_rem(&u.pow(k));
                if !rem.is_zero() {
                    return None;
                }
                *c = q;
            }
        }
        Some(EllipticCurve {
            a: out,
            label: self.label.clone(),
        })
    }

    /// Shorthand for a change of coordinates with `u = 1`, which is always integral.
    pub fn translate(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> EllipticCurve {
        self.change_coordinates(&BigInt::one(), r, s, t)
            .expect("u = 1 keeps the model integral")
    }

    /// The quadratic twist by `d`, as `y^2 = x^3 + d b2 x^2 + 8 d^2 b4 x + 16 d^3 b6`.
    pub fn quadratic_twist(&self, d: i64) -> EllipticCurve {
        let (b2, b4, b6, _) = self.b_invariants();
        let d = BigInt::from(d);
        let a2 = &d * b2;
        let a4 = 8 * &d * &d * b4;
        let a6 = 16 * &d * &d * &d * b6;
        EllipticCurve {
            a: [BigInt::zero(), a2, BigInt::zero(), a4, a6],
            label: None,
        }
    }

    /// Primes dividing the discriminant of this model. Every prime of bad
    /// reduction is among them.
    pub fn discriminant_primes(&self) -> Result<Vec<u64>> {
        Ok(arith::prime_divisors(&self.discriminant())?)
    }

    fn reduce(&self, ell: u64) -> [u64; 5] {
        self.a.clone().map(|c| arith::mod_u64(&c, ell))
    }
}

impl fmt::Debug for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EllipticCurve({}", self)?;
        if let Some(l) = &self.label {
            write!(f, ", {l}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "[{a1},{a2},{a3},{a4},{a6}]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointCountConfig {
    pub max_prime: u64,
}

impl Default for PointCountConfig {
    fn default() -> Self {
        PointCountConfig { max_prime: 10_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointCount {
    pub ell: u64,
    /// `#E(F_ell)`, including the point at infinity.
    pub order: u64,
    /// `ell + 1 - order`.
    pub trace: i64,
}

/// Count points on the reduction at a prime of good reduction. A
/// non-minimal model at `ell` is replaced by a minimal one first.
pub fn count_points_mod(
    curve: &EllipticCurve,
    ell: u64,
    config: PointCountConfig,
) -> Result<PointCount> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell > config.max_prime {
        return Err(Error::BoundExceeded {
            ell,
            bound: config.max_prime,
        });
    }
    let minimal;
    let model = if arith::mod_u64(&curve.discriminant(), ell) == 0 {
        let (m, red) = local_reduction::local_minimal_model(curve, ell)?;
        if red.reduction_class != ReductionClass::Good {
            return Err(Error::BadReductionPrime(ell));
        }
        minimal = m;
        &minimal
    } else {
        curve
    };
    let order = if ell == 2 {
        count_by_enumeration(model.reduce(2), 2)
    } else {
        count_by_squares(model, ell)
    };
    let trace = ell as i64 + 1 - order as i64;
    assert!(
        (trace as i128).pow(2) <= 4 * ell as i128,
        "Hasse bound violated at {ell}"
    );
    Ok(PointCount { ell, order, trace })
}

/// Shorthand for the trace at a good prime with the default bound.
pub fn trace_of_frobenius(curve: &EllipticCurve, ell: u64) -> Result<i64> {
    count_points_mod(curve, ell, PointCountConfig::default()).map(|c| c.trace)
}

fn count_by_enumeration(a: [u64; 5], ell: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = a;
    let mut n = 1;
    for x in 0..ell {
        for y in 0..ell {
            let lhs = (y * y + a1 * x * y + a3 * y) % ell;
            let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % ell;
            if lhs == rhs {
                n += 1;
            }
        }
    }
    n
}

// Completing the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
fn count_by_squares(curve: &EllipticCurve, ell: u64) -> u64 {
    let (b2, b4, b6, _) = curve.b_invariants();
    let b2 = arith::mod_u64(&b2, ell);
    let b4 = arith::mod_u64(&(2 * b4), ell);
    let b6 = arith::mod_u64(&b6, ell);
    let mut is_square = vec![false; ell as usize];
    for y in 0..ell {
        is_square[arith::mul_mod(y, y, ell) as usize] = true;
    }
    let mut n = 1;
    for x in 0..ell {
        let f = ((arith::mul_mod(4 * x % ell + b2, x, ell) + b4) % ell * x % ell + b6) % ell;
        n += if f == 0 {
            1
        } else if is_square[f as usize] {
            2
        } else {
            0
        };
    }
    n
}

/// `a_v` at a bad place: 1 split, -1 non-split, 0 additive.
pub fn trace_at_bad(red: &LocalReductionData) -> Result<i64> {
    match red.reduction_class {
        ReductionClass::Good => Err(Error::GoodReduction),
        ReductionClass::SplitMultiplicative => Ok(1),
        ReductionClass::NonsplitMultiplicative => Ok(-1),
        ReductionClass::Additive => Ok(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e11a1() -> EllipticCurve {
        EllipticCurve::from_i64([0, -1, 1, -10, -20]).unwrap()
    }

    #[test]
    fn invariants_of_11a1() {
        let inv = e11a1().invariants();
        assert_eq!(inv.discriminant, BigInt::from(-161051));
        assert_eq!(inv.c4, BigInt::from(496));
        assert_eq!(inv.c6, BigInt::from(20008));
        assert_eq!(inv.j_num, BigInt::from(-122023936));
        assert_eq!(inv.j_den, BigInt::from(161051));
    }

    #[test]
    fn y2_equals_x3_plus_1() {
        let e = EllipticCurve::from_i64([0, 0, 0, 0, 1]).unwrap();
        let inv = e.invariants();
        assert!(inv.c4.is_zero());
        assert_eq!(inv.discriminant, BigInt::from(-432));
        let c = count_points_mod(&e, 5, PointCountConfig::default()).unwrap();
        assert_eq!((c.order, c.trace), (6, 0));
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            EllipticCurve::from_i64([0, 0, 0, 0, 0]),
            Err(Error::SingularCurve(_))
        ));
        assert!(EllipticCurve::from_i64([0, 0, 0, -3, 2]).is_err());
    }

    #[test]
    fn small_traces_of_11a1() {
        assert_eq!(trace_of_frobenius(&e11a1(), 2).unwrap(), -2);
        assert_eq!(trace_of_frobenius(&e11a1(), 3).unwrap(), -1);
        assert_eq!(trace_of_frobenius(&e11a1(), 5).unwrap(), 1);
        assert!(matches!(
            trace_of_frobenius(&e11a1(), 11),
            Err(Error::BadReductionPrime(11))
        ));
    }

    #[test]
    fn bound_is_enforced() {
        let cfg = PointCountConfig { max_prime: 100 };
        assert!(matches!(
            count_points_mod(&e11a1(), 101, cfg),
            Err(Error::BoundExceeded { ell: 101, .. })
        ));
    }

    #[test]
    fn twist_discriminant_scales() {
        let e = e11a1();
        let t = e.quadratic_twist(-3);
        assert_eq!(
            t.discriminant(),
            e.discriminant() * BigInt::from(4096) * BigInt::from(729)
        );
    }

    #[test]
    fn non_integral_change_refused() {
        let e = e11a1();
        let two = BigInt::from(2);
        let z = BigInt::zero();
        assert!(e.change_coordinates(&two, &z, &z, &z).is_none());
    }
}
