//! Tate's algorithm over Q: local minimal models, Kodaira symbols, conductor
//! exponents, split/non-split detection and the conductor exponent of E[p]
//! away from p.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, FpPoly};
use crate::error::{Error, Result};
use crate::places::Place;
use crate::weierstrass::EllipticCurve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionClass {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl ReductionClass {
    pub fn is_multiplicative(self) -> bool {
        matches!(
            self,
            ReductionClass::SplitMultiplicative | ReductionClass::NonsplitMultiplicative
        )
    }

    pub fn short_name(self) -> &'static str {
        match self {
            ReductionClass::Good => "good",
            ReductionClass::SplitMultiplicative => "split",
            ReductionClass::NonsplitMultiplicative => "nonsplit",
            ReductionClass::Additive => "additive",
        }
    }
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Kodaira symbol of the special fibre. `I(0)` is good reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kodaira {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    /// Order of the inertia image for potentially good additive types;
    /// `None` for `I_n` and for `I_n^*` with `n > 0`.
    pub fn semistability_defect(self) -> Option<u32> {
        match self {
            Kodaira::II | Kodaira::IIStar => Some(6),
            Kodaira::III | Kodaira::IIIStar => Some(4),
            Kodaira::IV | Kodaira::IVStar => Some(3),
            Kodaira::IStar(0) => Some(2),
            _ => None,
        }
    }

    /// Potentially good type with the given discriminant valuation, for tame places.
    pub fn from_tame_valuation(v: u32) -> Option<Kodaira> {
        match v {
            0 => Some(Kodaira::I(0)),
            2 => Some(Kodaira::II),
            3 => Some(Kodaira::III),
            4 => Some(Kodaira::IV),
            6 => Some(Kodaira::IStar(0)),
            8 => Some(Kodaira::IVStar),
            9 => Some(Kodaira::IIIStar),
            10 => Some(Kodaira::IIStar),
            _ => None,
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::II => f.write_str("II"),
            Kodaira::III => f.write_str("III"),
            Kodaira::IV => f.write_str("IV"),
            Kodaira::IVStar => f.write_str("IV*"),
            Kodaira::IIIStar => f.write_str("III*"),
            Kodaira::IIStar => f.write_str("II*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalReductionData {
    pub place: Place,
    pub kodaira: Kodaira,
    pub reduction_class: ReductionClass,
    pub f_v: u32,
    pub v_delta_min: u32,
    pub tamagawa_hint: Option<u32>,
}

impl LocalReductionData {
    pub fn good(place: Place) -> Self {
        LocalReductionData {
            place,
            kodaira: Kodaira::I(0),
            reduction_class: ReductionClass::Good,
            f_v: 0,
            v_delta_min: 0,
            tamagawa_hint: Some(1),
        }
    }

    /// Panics if the class/exponent invariants are violated.
    pub fn check_invariants(&self) {
        let c = self.reduction_class;
        assert_eq!(self.f_v == 0, c == ReductionClass::Good, "{self:?}");
        assert_eq!(self.f_v == 1, c.is_multiplicative(), "{self:?}");
        assert_eq!(self.f_v >= 2, c == ReductionClass::Additive, "{self:?}");
        if c.is_multiplicative() {
            assert!(self.v_delta_min >= 1);
            assert_eq!(self.kodaira, Kodaira::I(self.v_delta_min));
        }
    }
}

/// Local data of `curve` at the prime `ell`.
pub fn tate_algorithm(curve: &EllipticCurve, ell: u64) -> Result<LocalReductionData> {
    local_minimal_model(curve, ell).map(|(_, red)| red)
}

/// Tate's algorithm, also returning a model minimal at `ell`.
pub fn local_minimal_model(
    curve: &EllipticCurve,
    ell: u64,
) -> Result<(EllipticCurve, LocalReductionData)> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let (model, red) = Tate::new(ell).run(curve);
    red.check_invariants();
    Ok((model, red))
}

struct Tate {
    p: u64,
    pb: BigInt,
    half: BigInt,
}

struct Outcome {
    kodaira: Kodaira,
    class: ReductionClass,
    f: u32,
    c: u32,
}

impl Tate {
    fn new(p: u64) -> Self {
        let half = if p == 2 {
            BigInt::zero()
        } else {
            BigInt::from(p.div_ceil(2))
        };
        Tate {
            p,
            pb: BigInt::from(p),
            half,
        }
    }

    fn val(&self, x: &BigInt) -> u32 {
        arith::valuation(x, self.p)
    }

    fn divides(&self, x: &BigInt) -> bool {
        x.mod_floor(&self.pb).is_zero()
    }

    fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.pb)
    }

    fn inv(&self, x: &BigInt) -> BigInt {
        let r = arith::mod_u64(x, self.p);
        BigInt::from(arith::inv_mod(r, self.p).expect("unit mod p"))
    }

    fn pow(&self, k: u32) -> BigInt {
        self.pb.pow(k)
    }

    /// Whether `a X^2 + b X + c` has a root in F_p.
    fn quadratic_has_root(&self, a: &BigInt, b: &BigInt, c: &BigInt) -> bool {
        let p = self.p;
        let (a, b, c) = (
            arith::mod_u64(a, p),
            arith::mod_u64(b, p),
            arith::mod_u64(c, p),
        );
        if p == 2 {
            return (0..2).any(|x| (a * x * x + b * x + c) % 2 == 0);
        }
        if a == 0 {
            return b != 0 || c == 0;
        }
        let disc =
            (arith::mul_mod(b, b, p) + p - arith::mul_mod(4 % p, arith::mul_mod(a, c, p), p)) % p;
        arith::legendre(disc as i64, p) >= 0
    }

    fn cubic_root_count(&self, b: &BigInt, c: &BigInt, d: &BigInt) -> u32 {
        let poly = FpPoly::new(
            vec![
                arith::mod_u64(d, self.p),
                arith::mod_u64(c, self.p),
                arith::mod_u64(b, self.p),
                1,
            ],
            self.p,
        );
        poly.count_distinct_roots() as u32
    }

    fn run(&self, curve: &EllipticCurve) -> (EllipticCurve, LocalReductionData) {
        let zero = BigInt::zero();
        let mut e = curve.clone();
        loop {
            let delta = e.discriminant();
            let vd = self.val(&delta);
            if vd == 0 {
                return (
                    e,
                    self.finish(
                        vd,
                        Outcome {
                            kodaira: Kodaira::I(0),
                            class: ReductionClass::Good,
                            f: 0,
                            c: 1,
                        },
                    ),
                );
            }

            // Move the singular point of the reduction to (0, 0).
            let inv = e.invariants();
            let (r, t) = self.singular_point(&e, &inv);
            e = e.translate(&r, &zero, &t);
            let inv = e.invariants();

            if !self.divides(&inv.b2) {
                let split = self.quadratic_has_root(&BigInt::one(), e.a1(), &-e.a2());
                let (class, c) = if split {
                    (ReductionClass::SplitMultiplicative, vd)
                } else {
                    (
                        ReductionClass::NonsplitMultiplicative,
                        if vd.is_multiple_of(2) { 2 } else { 1 },
                    )
                };
                return (
                    e,
                    self.finish(
                        vd,
                        Outcome {
                            kodaira: Kodaira::I(vd),
                            class,
                            f: 1,
                            c,
                        },
                    ),
                );
            }
            let additive = |kodaira, f, c| Outcome {
                kodaira,
                class: ReductionClass::Additive,
                f,
                c,
            };
            if self.val(e.a6()) < 2 {
                return (e, self.finish(vd, additive(Kodaira::II, vd, 1)));
            }
            if self.val(&inv.b8) < 3 {
                return (e, self.finish(vd, additive(Kodaira::III, vd - 1, 2)));
            }
            if self.val(&inv.b6) < 3 {
                let a3t = e.a3() / &self.pb;
                let a6t = e.a6() / self.pow(2);
                let c = if self.quadratic_has_root(&BigInt::one(), &a3t, &-a6t) {
                    3
                } else {
                    1
                };
                return (e, self.finish(vd, additive(Kodaira::IV, vd - 2, c)));
            }

            // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
            let (s, t) = match self.p {
                2 => (
                    self.reduce(e.a2()),
                    &self.pb * self.reduce(&(e.a6() / self.pow(2))),
                ),
                3 => (e.a1().clone(), e.a3().clone()),
                _ => (-e.a1() * &self.half, -e.a3() * &self.half),
            };
            e = e.translate(&zero, &s, &t);

            let b = e.a2() / &self.pb;
            let c = e.a4() / self.pow(2);
            let d = e.a6() / self.pow(3);
            let w = 27 * &d * &d - &b * &b * &c * &c + 4 * &b * &b * &b * &d - 18 * &b * &c * &d
                + 4 * &c * &c * &c;
            let x = 3 * &c - &b * &b;

            if !self.divides(&w) {
                let roots = self.cubic_root_count(&b, &c, &d);
                return (
                    e,
                    self.finish(vd, additive(Kodaira::IStar(0), vd - 4, 1 + roots)),
                );
            }

            if !self.divides(&x) {
                // Double root: I_n^*.
                let r = match self.p {
                    2 => c.clone(),
                    3 => &c * self.inv(&b),
                    _ => (&b * &c - 9 * &d) * self.inv(&(2 * &x)),
                };
                let r = &self.pb * self.reduce(&r);
                e = e.translate(&r, &zero, &zero);
                let (mut ix, mut iy) = (3u32, 3u32);
                let mut mx = self.pow(2);
                let mut my = self.pow(2);
                let tamagawa;
                loop {
                    let a3t = e.a3() / &my;
                    let a6t = e.a6() / (&mx * &my);
                    if self.divides(&(&a3t * &a3t + 4 * &a6t)) {
                        let t = if self.p == 2 {
                            &my * self.reduce(&a6t)
                        } else {
                            &my * self.reduce(&(-&a3t * &self.half))
                        };
                        e = e.translate(&zero, &zero, &t);
                        my *= &self.pb;
                        iy += 1;
                        let a2t = e.a2() / &self.pb;
                        let a4t = e.a4() / (&self.pb * &mx);
                        let a6t = e.a6() / (&mx * &my);
                        if self.divides(&(&a4t * &a4t - 4 * &a6t * &a2t)) {
                            let r = if self.p == 2 {
                                &mx * self.reduce(&(&a6t * self.inv(&a2t)))
                            } else {
                                &mx * self.reduce(&(-&a4t * self.inv(&(2 * &a2t))))
                            };
                            e = e.translate(&r, &zero, &zero);
                            mx *= &self.pb;
                            ix += 1;
                        } else {
                            tamagawa = if self.quadratic_has_root(&a2t, &a4t, &a6t) {
                                4
                            } else {
                                2
                            };
                            break;
                        }
                    } else {
                        tamagawa = if self.quadratic_has_root(&BigInt::one(), &a3t, &-a6t) {
                            4
                        } else {
                            2
                        };
                        break;
                    }
                }
                let n = ix + iy - 5;
                return (
                    e,
                    self.finish(vd, additive(Kodaira::IStar(n), vd - ix - iy + 1, tamagawa)),
                );
            }

            // Triple root: move it to zero.
            let r = match self.p {
                2 => b.clone(),
                3 => -&d,
                _ => -&b * self.inv(&BigInt::from(3)),
            };
            let r = &self.pb * self.reduce(&r);
            e = e.translate(&r, &zero, &zero);
            let a3t = e.a3() / self.pow(2);
            let a6t = e.a6() / self.pow(4);
            if !self.divides(&(&a3t * &a3t + 4 * &a6t)) {
                let c = if self.quadratic_has_root(&BigInt::one(), &a3t, &-a6t) {
                    3
                } else {
                    1
                };
                return (e, self.finish(vd, additive(Kodaira::IVStar, vd - 6, c)));
            }
            let t = if self.p == 2 {
                -self.pow(2) * self.reduce(&a6t)
            } else {
                self.pow(2) * self.reduce(&(-&a3t * &self.half))
            };
            e = e.translate(&zero, &zero, &t);
            if self.val(e.a4()) < 4 {
                return (e, self.finish(vd, additive(Kodaira::IIIStar, vd - 7, 2)));
            }
            if self.val(e.a6()) < 6 {
                return (e, self.finish(vd, additive(Kodaira::IIStar, vd - 8, 1)));
            }
            // Not minimal: rescale by u = p.
            e = e
                .change_coordinates(&self.pb, &zero, &zero, &zero)
                .expect("divisibility established by the algorithm");
        }
    }

    /// Translation `(r, t)` moving the singular point of the reduction to the origin.
    fn singular_point(
        &self,
        e: &EllipticCurve,
        inv: &crate::weierstrass::CurveInvariants,
    ) -> (BigInt, BigInt) {
        let (a1, a2, a3, a4, a6) = (e.a1(), e.a2(), e.a3(), e.a4(), e.a6());
        let (r, t) = match self.p {
            2 => {
                if self.divides(&inv.b2) {
                    let r = self.reduce(a4);
                    let t = self.reduce(&(((&r + a2) * &r + a4) * &r + a6));
                    (r, t)
                } else {
                    let ia1 = self.inv(a1);
                    let r = &ia1 * a3;
                    let t = &ia1 * (a4 + &r * &r);
                    (r, t)
                }
            }
            3 => {
                let r = if self.divides(&inv.b2) {
                    -&inv.b6
                } else {
                    -self.inv(&inv.b2) * &inv.b4
                };
                let t = a1 * &r + a3;
                (r, t)
            }
            _ => {
                let r = if self.divides(&inv.c4) {
                    -self.inv(&BigInt::from(12)) * &inv.b2
                } else {
                    -self.inv(&(12 * &inv.c4)) * (&inv.c6 + &inv.b2 * &inv.c4)
                };
                let t = -&self.half * (a1 * &r + a3);
                (r, t)
            }
        };
        (self.reduce(&r), self.reduce(&t))
    }

    fn finish(&self, vd: u32, o: Outcome) -> LocalReductionData {
        LocalReductionData {
            place: Place::rational(self.p),
            kodaira: o.kodaira,
            reduction_class: o.class,
            f_v: o.f,
            v_delta_min: vd,
            tamagawa_hint: Some(o.c),
        }
    }
}

/// Split or non-split, decided from the tangent slopes at the node of the
/// reduced minimal model rather than from the branch taken inside Tate's
/// algorithm.
pub fn split_test(curve: &EllipticCurve, red: &LocalReductionData) -> Result<ReductionClass> {
    if !red.reduction_class.is_multiplicative() {
        return Err(Error::NotMultiplicative);
    }
    let ell = red
        .place
        .residue_char()
        .ok_or_else(|| Error::InfinitePlace(red.place.name()))?;
    if red.place.residue_degree == 2 {
        // Every quadratic over F_ell splits over F_{ell^2}.
        return Ok(ReductionClass::SplitMultiplicative);
    }
    let (model, _) = local_minimal_model(curve, ell)?;
    let split = if ell == 2 {
        node_splits_mod_2(&model)
    } else {
        node_splits_odd(&model, ell)
    };
    Ok(if split {
        ReductionClass::SplitMultiplicative
    } else {
        ReductionClass::NonsplitMultiplicative
    })
}

fn node_splits_odd(model: &EllipticCurve, ell: u64) -> bool {
    let inv = model.invariants();
    let g = FpPoly::new(
        vec![
            arith::mod_u64(&inv.b6, ell),
            arith::mod_u64(&(2 * &inv.b4), ell),
            arith::mod_u64(&inv.b2, ell),
            4 % ell,
        ],
        ell,
    );
    let x0 = g.repeated_root().expect("a node has a double root");
    let slope_disc = (arith::mod_u64(&inv.b2, ell) + arith::mul_mod(12 % ell, x0, ell)) % ell;
    arith::legendre(slope_disc as i64, ell) == 1
}

fn node_splits_mod_2(model: &EllipticCurve) -> bool {
    let a = model.coefficients().clone().map(|c| arith::mod_u64(&c, 2));
    let [a1, a2, a3, a4, a6] = a;
    let f =
        |x: u64, y: u64| (y * y + a1 * x * y + a3 * y + x * x * x + a2 * x * x + a4 * x + a6) % 2;
    let fx = |x: u64, y: u64| (a1 * y + x * x + a4) % 2;
    let fy = |x: u64, _y: u64| (a1 * x + a3) % 2;
    let (x0, y0) = (0..2)
        .flat_map(|x| (0..2).map(move |y| (x, y)))
        .find(|&(x, y)| f(x, y) == 0 && fx(x, y) == 0 && fy(x, y) == 0)
        .expect("reduction is singular");
    let zero = BigInt::zero();
    let moved = model.translate(&BigInt::from(x0), &zero, &BigInt::from(y0));
    // Tangent cone y^2 + a1 xy - a2 x^2 at the origin.
    let a1 = arith::mod_u64(moved.a1(), 2);
    let a2 = arith::mod_u64(moved.a2(), 2);
    (0..2u64).any(|s| (s * s + a1 * s + a2).is_multiple_of(2))
}

/// Conductor exponent of `E[p]` at a place away from `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SerreExponent {
    Known(u32),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModPConductorExponent {
    pub place: Place,
    pub p: u64,
    pub exponent: SerreExponent,
}

/// Tame inertia acts on `E[p]` through a cyclic group of order `e`; it has
/// fixed vectors only when `e = 3` and `p = 3`, where the action is unipotent.
pub fn serre_exponent(red: &LocalReductionData, p: u64) -> Result<ModPConductorExponent> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::InvalidP(p));
    }
    let ell = match red.place.residue_char() {
        Some(ell) if ell == p => return Err(Error::ResidueCharEqualsP(red.place.name())),
        Some(ell) => ell,
        None => return Err(Error::InfinitePlace(red.place.name())),
    };
    let exponent = match red.reduction_class {
        ReductionClass::Good => SerreExponent::Known(0),
        ReductionClass::SplitMultiplicative | ReductionClass::NonsplitMultiplicative => {
            SerreExponent::Known(if red.v_delta_min.is_multiple_of(p as u32) {
                0
            } else {
                1
            })
        }
        ReductionClass::Additive if ell >= 5 => match red.kodaira.semistability_defect() {
            Some(3) if p == 3 => SerreExponent::Known(1),
            _ => SerreExponent::Known(2),
        },
        ReductionClass::Additive => SerreExponent::Unknown,
    };
    if let SerreExponent::Known(x) = exponent {
        assert!(x <= red.f_v);
    }
    Ok(ModPConductorExponent {
        place: red.place.clone(),
        p,
        exponent,
    })
}

/// Local data at every prime of bad reduction, ascending.
pub fn bad_reduction(curve: &EllipticCurve) -> Result<Vec<LocalReductionData>> {
    let mut out = Vec::new();
    for ell in curve.discriminant_primes()? {
        let red = tate_algorithm(curve, ell)?;
        if red.reduction_class != ReductionClass::Good {
            out.push(red);
        }
    }
    Ok(out)
}

pub fn conductor(curve: &EllipticCurve) -> Result<BigInt> {
    Ok(bad_reduction(curve)?
        .iter()
        .map(|r| BigInt::from(r.place.residue_char().unwrap()).pow(r.f_v))
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(a: [i64; 5]) -> EllipticCurve {
        EllipticCurve::from_i64(a).unwrap()
    }

    #[test]
    fn eleven_a_one() {
        let e = curve([0, -1, 1, -10, -20]);
        let red = tate_algorithm(&e, 11).unwrap();
        assert_eq!(red.reduction_class, ReductionClass::SplitMultiplicative);
        assert_eq!(
            (red.kodaira, red.f_v, red.v_delta_min),
            (Kodaira::I(5), 1, 5)
        );
        let good = tate_algorithm(&e, 7).unwrap();
        assert_eq!(
            (good.reduction_class, good.kodaira, good.f_v),
            (ReductionClass::Good, Kodaira::I(0), 0)
        );
        assert_eq!(conductor(&e).unwrap(), BigInt::from(11));
    }

    #[test]
    fn one_two_one_c_one() {
        let e = curve([1, 1, 0, -2, -7]);
        let red = tate_algorithm(&e, 11).unwrap();
        assert_eq!(
            (red.reduction_class, red.kodaira, red.f_v, red.v_delta_min),
            (ReductionClass::Additive, Kodaira::IV, 2, 4)
        );
        assert_eq!(conductor(&e).unwrap(), BigInt::from(121));
    }

    #[test]
    fn serre_exponents() {
        let e = curve([0, -1, 1, -10, -20]);
        let red = tate_algorithm(&e, 11).unwrap();
        assert_eq!(
            serre_exponent(&red, 3).unwrap().exponent,
            SerreExponent::Known(1)
        );
        assert_eq!(
            serre_exponent(&red, 5).unwrap().exponent,
            SerreExponent::Known(0)
        );
        assert!(matches!(
            serre_exponent(&red, 11),
            Err(Error::ResidueCharEqualsP(_))
        ));
    }

    #[test]
    fn non_minimal_model_is_rescaled() {
        // 11a1 with x -> 4x, y -> 8y.
        let e = curve([0, -1, 1, -10, -20]);
        let big = e
            .change_coordinates(
                &BigInt::from(1),
                &BigInt::zero(),
                &BigInt::zero(),
                &BigInt::zero(),
            )
            .unwrap();
        let scaled = EllipticCurve::new(
            big.coefficients()
                .iter()
                .zip([1u32, 2, 3, 4, 6])
                .map(|(c, k)| c * BigInt::from(2).pow(k))
                .collect::<Vec<_>>()
                .try_into()
                .unwrap(),
        )
        .unwrap();
        let red = tate_algorithm(&scaled, 2).unwrap();
        assert_eq!(red.reduction_class, ReductionClass::Good);
        assert_eq!(red.v_delta_min, 0);
    }
}
