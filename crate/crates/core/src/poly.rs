//! Dense integer polynomials, division polynomials and exact rational root
//! search by Hensel lifting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, FpPoly};
use crate::weierstrass::CurveInvariants;

/// Coefficients lowest degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly(Vec<BigInt>);

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        ZPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        ZPoly::new((0..n).map(|i| self.get(i) + o.get(i)).collect())
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        ZPoly::new((0..n).map(|i| self.get(i) - o.get(i)).collect())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    fn get(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    fn derivative(&self) -> ZPoly {
        ZPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    fn reduce(&self, q: u64) -> FpPoly {
        FpPoly::new(self.0.iter().map(|c| arith::mod_u64(c, q)).collect(), q)
    }

    /// All rational roots, ascending, each once.
    pub fn rational_roots(&self) -> Vec<(BigInt, BigInt)> {
        let mut roots = Vec::new();
        let Some(d) = self.degree() else {
            return roots;
        };
        if d == 0 {
            return roots;
        }
        // Strip x^k.
        let k = self.0.iter().take_while(|c| c.is_zero()).count();
        let mut p = ZPoly::new(self.0[k..].to_vec()).primitive_part();
        if k > 0 {
            roots.push((BigInt::zero(), BigInt::one()));
        }
        if p.degree().unwrap_or(0) >= 1 {
            // G(y) = c^(d-1) P(y / c) is monic with integer roots y = c x.
            let ys = match monicize(&p).integer_roots_monic() {
                Some(ys) => ys,
                None => {
                    p = p.primitive_squarefree();
                    monicize(&p)
                        .integer_roots_monic()
                        .expect("squarefree polynomials have good primes")
                }
            };
            let c = p.leading();
            for y in ys {
                let g = y.gcd(&c);
                let mut num = &y / &g;
                let mut den = &c / &g;
                if den.is_negative() {
                    num = -num;
                    den = -den;
                }
                roots.push((num, den));
            }
        }
        roots.sort_by(|a, b| (&a.0 * &b.1).cmp(&(&b.0 * &a.1)));
        roots.dedup();
        roots
    }

    /// Divide out content and repeated factors (so Hensel lifting sees simple roots).
    fn primitive_squarefree(&self) -> ZPoly {
        let content = self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let p = ZPoly::new(self.0.iter().map(|c| c / &content).collect());
        let g = p.gcd(&p.derivative());
        match g.degree() {
            Some(0) | None => p,
            Some(_) => p.exact_div(&g),
        }
    }

    /// Primitive gcd over Z[x] by the subresultant-free primitive PRS.
    fn gcd(&self, o: &ZPoly) -> ZPoly {
        let mut a = self.primitive_part();
        let mut b = o.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_negative() {
            a = ZPoly::new(a.0.iter().map(|c| -c).collect());
        }
        a
    }

    fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let content = self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        ZPoly::new(self.0.iter().map(|c| c / &content).collect())
    }

    fn pseudo_rem(&self, b: &ZPoly) -> ZPoly {
        let db = b.degree().expect("non-zero divisor");
        let lb = b.leading();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            let mut shifted = vec![BigInt::zero(); dr - db];
            shifted.extend(b.0.iter().map(|c| c * &lr));
            let scaled = ZPoly::new(r.0.iter().map(|c| c * &lb).collect());
            r = scaled.sub(&ZPoly::new(shifted));
        }
        r
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &ZPoly) -> ZPoly {
        let dd = d.degree().expect("non-zero divisor");
        let ld = d.leading();
        let mut r = self.0.clone();
        let n = self.degree().unwrap_or(0);
        if n < dd {
            assert!(self.is_zero(), "inexact division");
            return ZPoly::new(Vec::new());
        }
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let (c, rem) = r[i + dd].div_rem(&ld);
            assert!(rem.is_zero(), "inexact division");
            for (j, dc) in d.0.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        assert!(r.iter().all(|x| x.is_zero()), "inexact division");
        ZPoly::new(q)
    }

    /// Integer roots of a monic polynomial; `None` if no small prime gives a
    /// squarefree reduction, which happens when the polynomial has repeated factors.
    fn integer_roots_monic(&self) -> Option<Vec<BigInt>> {
        let d = self.degree().unwrap_or(0);
        if d == 0 {
            return Some(Vec::new());
        }
        if d == 1 {
            return Some(vec![-&self.0[0]]);
        }
        // Roots lie in |y| < 1 + max |g_i|.
        let bound = self.0.iter().map(|c| c.abs()).max().unwrap() + 1u32;
        let deriv = self.derivative();
        let q = arith::primes_up_to(5_000).into_iter().find(|&q| {
            q > d as u64 && {
                let r = self.reduce(q);
                r.gcd(&deriv.reduce(q)).degree() == Some(0)
            }
        })?;
        let qb = BigInt::from(q);
        let start: Vec<u64> = (0..q).filter(|&x| self.reduce(q).eval(x) == 0).collect();
        let target = 2 * &bound + 1u32;
        let mut out = Vec::new();
        for r0 in start {
            let mut r = BigInt::from(r0);
            let mut modulus = qb.clone();
            while modulus <= target {
                let m2 = &modulus * &modulus;
                let f = self.eval(&r);
                let fp = deriv.eval(&r);
                let inv = mod_inverse(&fp, &m2).expect("simple root");
                r = (&r - f * inv).mod_floor(&m2);
                modulus = m2;
            }
            let mut cand = r.mod_floor(&modulus);
            if cand > &modulus / 2u32 {
                cand -= &modulus;
            }
            if self.eval(&cand).is_zero() {
                out.push(cand);
            }
        }
        out.sort();
        Some(out)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// `f_n` with `psi_n = f_n` for odd `n` and `psi_n = psi_2 f_n` for even `n`,
/// using `beta = psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`.
pub fn division_polynomial(inv: &CurveInvariants, n: usize) -> ZPoly {
    let mut cache: Vec<Option<ZPoly>> = vec![None; n + 3];
    division_rec(inv, n, &mut cache)
}

fn division_rec(inv: &CurveInvariants, n: usize, cache: &mut Vec<Option<ZPoly>>) -> ZPoly {
    if n >= cache.len() {
        cache.resize(n + 3, None);
    }
    if let Some(p) = &cache[n] {
        return p.clone();
    }
    let (b2, b4, b6, b8) = (&inv.b2, &inv.b4, &inv.b6, &inv.b8);
    let p = match n {
        0 => ZPoly::new(Vec::new()),
        1 | 2 => ZPoly::from_i64(&[1]),
        3 => ZPoly::new(vec![
            b8.clone(),
            3 * b6,
            3 * b4,
            b2.clone(),
            BigInt::from(3),
        ]),
        4 => ZPoly::new(vec![
            b4 * b8 - b6 * b6,
            b2 * b8 - b4 * b6,
            10 * b8,
            10 * b6,
            5 * b4,
            b2.clone(),
            BigInt::from(2),
        ]),
        _ => {
            let beta = ZPoly::new(vec![b6.clone(), 2 * b4, b2.clone(), BigInt::from(4)]);
            let beta2 = beta.mul(&beta);
            let m = n / 2;
            let cube = |x: &ZPoly| x.mul(x).mul(x);
            if n % 2 == 1 {
                let fm2 = division_rec(inv, m + 2, cache);
                let fm = division_rec(inv, m, cache);
                let fm1 = division_rec(inv, m - 1, cache);
                let fp1 = division_rec(inv, m + 1, cache);
                if m.is_multiple_of(2) {
                    beta2.mul(&fm2).mul(&cube(&fm)).sub(&fm1.mul(&cube(&fp1)))
                } else {
                    fm2.mul(&cube(&fm)).sub(&beta2.mul(&fm1).mul(&cube(&fp1)))
                }
            } else {
                let fm = division_rec(inv, m, cache);
                let fm2 = division_rec(inv, m + 2, cache);
                let fm1 = division_rec(inv, m - 1, cache);
                let fmm2 = division_rec(inv, m - 2, cache);
                let fp1 = division_rec(inv, m + 1, cache);
                fm.mul(&fm2.mul(&fm1.mul(&fm1)).sub(&fmm2.mul(&fp1.mul(&fp1))))
            }
        }
    };
    cache[n] = Some(p.clone());
    p
}

/// Rational quadratic factors `x^2 + u x + v` of a monic integer quartic,
/// found through integer roots of its resolvent cubic.
pub fn monic_quartic_quadratic_factors(q: &ZPoly) -> Vec<(BigInt, BigInt)> {
    assert_eq!(q.degree(), Some(4));
    assert!(q.leading().is_one());
    let d = &q.0[0];
    let c = &q.0[1];
    let b = &q.0[2];
    let a = &q.0[3];
    let resolvent = ZPoly::new(vec![
        -(a * a * d - BigInt::from(4) * b * d + c * c),
        a * c - BigInt::from(4) * d,
        -b.clone(),
        BigInt::one(),
    ]);
    let mut out = Vec::new();
    for (y, den) in resolvent.rational_roots() {
        if !den.is_one() {
            continue;
        }
        let (Some(s1), Some(s2)) = (
            arith::exact_sqrt(&(&y * &y - 4 * d)),
            arith::exact_sqrt(&(a * a - 4 * (b - &y))),
        ) else {
            continue;
        };
        for sign in [1, -1] {
            let v1: BigInt = &y + &s1;
            let v2: BigInt = &y - &s1;
            let u1: BigInt = a + sign * &s2;
            let u2: BigInt = a - sign * &s2;
            if [&v1, &v2, &u1, &u2].iter().any(|x| x.is_odd()) {
                continue;
            }
            let two = BigInt::from(2);
            let (v1, v2, u1, u2) = (&v1 / &two, &v2 / &two, &u1 / &two, &u2 / &two);
            let f1 = ZPoly::new(vec![v1.clone(), u1.clone(), BigInt::one()]);
            let f2 = ZPoly::new(vec![v2.clone(), u2.clone(), BigInt::one()]);
            if &f1.mul(&f2) == q {
                out.push((u1, v1));
                out.push((u2, v2));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `c^(d-1) P(x / c)` for leading coefficient `c`, which is monic.
pub fn monicize(p: &ZPoly) -> ZPoly {
    let d = p.degree().expect("non-zero polynomial");
    let c = p.leading();
    let mut out = vec![BigInt::zero(); d + 1];
    let mut pw = BigInt::one();
    for i in (0..d).rev() {
        out[i] = &p.0[i] * &pw;
        pw *= &c;
    }
    out[d] = BigInt::one();
    ZPoly::new(out)
}
