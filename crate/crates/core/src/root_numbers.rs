//! Local and global root numbers, their ratios for congruent pairs, and the
//! mod-p residue of the modified local constant.

use serde::Serialize;

use crate::arith;
use crate::cache::LocalCache;
use crate::error::{Error, Result};
use crate::local_reduction::{Kodaira, LocalReductionData, ReductionClass};
use crate::parity::{PairTable, Relation, Verdict};
use crate::places::{self, BaseField, Place};
use crate::weierstrass::EllipticCurve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootNumberRule {
    Archimedean,
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    /// Tame potentially good, with the order of the inertia image.
    TamePotentiallyGood {
        e: u32,
    },
    TamePotentiallyMultiplicative,
    WildAdditive,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RootNumber {
    pub value: Option<i8>,
    pub derivation: RootNumberRule,
}

impl RootNumber {
    fn known(value: i8, derivation: RootNumberRule) -> Self {
        RootNumber {
            value: Some(value),
            derivation,
        }
    }
}

/// Quadratic character of the residue field of `v` at the integer `a`.
fn residue_symbol(a: i64, v: &Place) -> i8 {
    let ell = v.residue_char().expect("finite place");
    if arith::is_square_in_residue_field(a, ell, v.residue_degree) {
        1
    } else {
        -1
    }
}

pub fn local_root_number(red: &LocalReductionData, v: &Place) -> RootNumber {
    let Some(ell) = v.residue_char() else {
        return RootNumber::known(-1, RootNumberRule::Archimedean);
    };
    match red.reduction_class {
        ReductionClass::Good => RootNumber::known(1, RootNumberRule::Good),
        ReductionClass::SplitMultiplicative => {
            RootNumber::known(-1, RootNumberRule::SplitMultiplicative)
        }
        ReductionClass::NonsplitMultiplicative => {
            RootNumber::known(1, RootNumberRule::NonsplitMultiplicative)
        }
        ReductionClass::Additive if ell < 5 => RootNumber {
            value: None,
            derivation: RootNumberRule::WildAdditive,
        },
        ReductionClass::Additive => match red.kodaira.semistability_defect() {
            Some(e) => {
                let a = match e {
                    3 => -3,
                    4 => -2,
                    _ => -1,
                };
                RootNumber::known(
                    residue_symbol(a, v),
                    RootNumberRule::TamePotentiallyGood { e },
                )
            }
            None => {
                debug_assert!(matches!(red.kodaira, Kodaira::IStar(n) if n > 0));
                RootNumber::known(
                    residue_symbol(-1, v),
                    RootNumberRule::TamePotentiallyMultiplicative,
                )
            }
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalRootNumber {
    pub root_number: RootNumber,
    pub infinite_places: usize,
    pub split_places: usize,
    pub semistable: bool,
    /// Local factors at the bad places, by place name.
    pub factors: Vec<(Place, RootNumber)>,
}

/// Data of `curve` at every place of `field` where it has bad reduction.
pub fn bad_places_over(
    curve: &EllipticCurve,
    field: BaseField,
    cache: &LocalCache,
) -> Result<Vec<LocalReductionData>> {
    let mut out = Vec::new();
    for ell in curve.discriminant_primes()? {
        let over_q = cache.local(curve, ell)?;
        if over_q.reduction_class == ReductionClass::Good {
            continue;
        }
        for v in places::places_above(field, ell)? {
            let red = places::base_change(curve, &over_q, &v)?;
            if red.reduction_class != ReductionClass::Good {
                out.push(red);
            }
        }
    }
    Ok(out)
}

/// Product of local root numbers. For semistable curves the result is
/// checked against `(-1)^(#infinite + #split)`.
pub fn global_root_number(
    curve: &EllipticCurve,
    field: BaseField,
    cache: &LocalCache,
) -> Result<GlobalRootNumber> {
    let infinite = places::infinite_places(field);
    let bad = bad_places_over(curve, field, cache)?;
    let mut value = Some((-1i8).pow(infinite.len() as u32));
    let mut factors = Vec::new();
    for red in &bad {
        let w = local_root_number(red, &red.place);
        value = match (value, w.value) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        factors.push((red.place.clone(), w));
    }
    let split_places = bad
        .iter()
        .filter(|r| r.reduction_class == ReductionClass::SplitMultiplicative)
        .count();
    let semistable = bad.iter().all(|r| r.reduction_class.is_multiplicative());
    if semistable {
        let closed = (-1i8).pow((infinite.len() + split_places) as u32);
        assert_eq!(
            value,
            Some(closed),
            "semistable closed form disagrees with the product"
        );
    }
    Ok(GlobalRootNumber {
        root_number: RootNumber {
            value,
            derivation: RootNumberRule::Product,
        },
        infinite_places: infinite.len(),
        split_places,
        semistable,
        factors,
    })
}

/// `w(E1/F_v) / w(E2/F_v)` for a pair of classes that congruent curves can
/// have at `v`, without needing either absolute value.
pub fn root_ratio_local(
    red1: &LocalReductionData,
    red2: &LocalReductionData,
    v: &Place,
    p: u64,
) -> Result<i8> {
    use ReductionClass::*;
    let q = v.residue_field_size() % p;
    let (c1, c2) = (red1.reduction_class, red2.reduction_class);
    if crate::parity::pair_relation(c1, c2, q, p) == Relation::ImpossiblePair {
        return Err(Error::InadmissiblePair(c1.to_string(), c2.to_string()));
    }
    let mu_p = places::mu_p_in_completion(v, p)?;
    let (a, b) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
    Ok(match (a, b) {
        _ if a == b => 1,
        (Good, NonsplitMultiplicative) => 1,
        (Good, SplitMultiplicative) | (SplitMultiplicative, NonsplitMultiplicative) => -1,
        (SplitMultiplicative, Additive) => {
            if mu_p {
                -1
            } else {
                1
            }
        }
        (NonsplitMultiplicative, Additive) => {
            if mu_p {
                1
            } else {
                -1
            }
        }
        _ => unreachable!("inadmissible pairs rejected above"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Epsilon0Residue {
    pub place: Place,
    pub p: u64,
    pub residue: Option<u64>,
    /// `det(-Frob_v | V^{I_v}) mod p`.
    pub det_factor: u64,
}

pub fn epsilon0_residue(
    red: &LocalReductionData,
    v: &Place,
    p: u64,
    w: RootNumber,
) -> Result<Epsilon0Residue> {
    match v.residue_char() {
        None => return Err(Error::InfinitePlace(v.name())),
        Some(ell) if ell == p => return Err(Error::ResidueCharEqualsP(v.name())),
        Some(_) => {}
    }
    let q = v.residue_field_size() % p;
    let det_factor = match red.reduction_class {
        ReductionClass::Good | ReductionClass::NonsplitMultiplicative => q,
        ReductionClass::SplitMultiplicative => (p - q) % p,
        ReductionClass::Additive => 1,
    };
    let residue = w.value.map(|s| {
        if s == 1 {
            det_factor
        } else {
            (p - det_factor) % p
        }
    });
    Ok(Epsilon0Residue {
        place: v.clone(),
        p,
        residue,
        det_factor,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalRatioVerdict {
    pub verdict: Verdict,
    /// `(-1)^(|S1| - |S2| + |T|)`.
    pub expected: i8,
    /// Product of local ratios over places where the classes differ.
    pub local_product: Option<i8>,
    /// `w(E1/F) / w(E2/F)` when both are determined.
    pub global_ratio: Option<i8>,
    pub notes: Vec<String>,
}

pub fn verify_global_ratio(
    table: &PairTable,
    congruent: bool,
    w1: Option<i8>,
    w2: Option<i8>,
) -> GlobalRatioVerdict {
    let s = &table.sets;
    let exponent = s.s1.len() + s.s2.len() + s.t.len();
    let expected = if exponent.is_multiple_of(2) { 1 } else { -1 };
    let mut notes = Vec::new();
    if !congruent {
        notes.push("congruence refuted".into());
        return GlobalRatioVerdict {
            verdict: Verdict::NotApplicable,
            expected,
            local_product: None,
            global_ratio: None,
            notes,
        };
    }
    let mut product = Some(1i8);
    for e in &table.entries {
        let c = &e.classification;
        if c.classes.0 == c.classes.1 {
            continue;
        }
        match root_ratio_local(&e.curves[0].local, &e.curves[1].local, &c.place, table.p) {
            Ok(r) => product = product.map(|x| x * r),
            Err(err) => {
                notes.push(format!("at {}: {err}", c.place));
                product = None;
            }
        }
    }
    let global_ratio = match (w1, w2) {
        (Some(a), Some(b)) => Some(a * b),
        _ => {
            notes.push(
                "a global root number is undetermined; only the local product is compared".into(),
            );
            None
        }
    };
    let verdict = match product {
        None => Verdict::NotApplicable,
        Some(x) if x == expected && global_ratio.is_none_or(|g| g == expected) => Verdict::Holds,
        Some(_) => Verdict::Fails,
    };
    GlobalRatioVerdict {
        verdict,
        expected,
        local_product: product,
        global_ratio,
        notes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRatioCheck {
    pub place: Place,
    pub ratio: Option<i8>,
    pub sigma_difference_mod_2: Option<u8>,
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRatioVerdict {
    pub verdict: Verdict,
    pub places: Vec<LocalRatioCheck>,
}

/// `w(E1/F_v) / w(E2/F_v) = (-1)^(sigma1 - sigma2)` at every finite place of
/// the table.
pub fn verify_local_ratios(table: &PairTable, congruent: bool) -> LocalRatioVerdict {
    let mut places = Vec::new();
    let mut verdict = if congruent {
        Verdict::Holds
    } else {
        Verdict::NotApplicable
    };
    for e in &table.entries {
        let c = &e.classification;
        let ratio =
            root_ratio_local(&e.curves[0].local, &e.curves[1].local, &c.place, table.p).ok();
        let diff = c.sigma_difference_parity();
        let holds = match (ratio, diff) {
            (Some(r), Some(d)) => Some((r == -1) == (d == 1)),
            _ => None,
        };
        if congruent {
            match holds {
                Some(false) => verdict = Verdict::Fails,
                None if verdict == Verdict::Holds => verdict = Verdict::NotApplicable,
                _ => {}
            }
        }
        places.push(LocalRatioCheck {
            place: c.place.clone(),
            ratio,
            sigma_difference_mod_2: diff,
            holds,
        });
    }
    LocalRatioVerdict { verdict, places }
}
