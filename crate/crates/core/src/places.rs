//! The base fields Q and Q(sqrt d), their places, and base change of local
//! reduction data from Q to a completion of the base field.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::local_reduction::{self, Kodaira, LocalReductionData, ReductionClass};
use crate::weierstrass::EllipticCurve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseField {
    Rationals,
    Quadratic { d: i64 },
}

impl BaseField {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 1 || !arith::is_squarefree(d) {
            return Err(Error::UnsupportedField(format!(
                "Q(sqrt{{{d}}}): radicand must be squarefree and different from 0 and 1"
            )));
        }
        Ok(BaseField::Quadratic { d })
    }

    pub fn degree(self) -> u8 {
        match self {
            BaseField::Rationals => 1,
            BaseField::Quadratic { .. } => 2,
        }
    }

    pub fn discriminant(self) -> i64 {
        match self {
            BaseField::Rationals => 1,
            BaseField::Quadratic { d } if d.rem_euclid(4) == 1 => d,
            BaseField::Quadratic { d } => 4 * d,
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => f.write_str("Q"),
            BaseField::Quadratic { d } => write!(f, "Q(sqrt{{{d}}})"),
        }
    }
}

impl FromStr for BaseField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" {
            return Ok(BaseField::Rationals);
        }
        let inner = t
            .strip_prefix("Q(sqrt{")
            .and_then(|r| r.strip_suffix("})"))
            .or_else(|| t.strip_prefix("Q(sqrt(").and_then(|r| r.strip_suffix("))")));
        match inner.and_then(|d| d.parse::<i64>().ok()) {
            Some(d) => BaseField::quadratic(d),
            None => Err(Error::UnsupportedField(format!(
                "{s}: expected Q or Q(sqrt{{d}}); fields of degree above 2 are not supported"
            ))),
        }
    }
}

impl Serialize for BaseField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A place of Q or of a quadratic field. Finite places carry their residue
/// characteristic; `index` separates the two places above a split prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    pub field: BaseField,
    residue_char: Option<u64>,
    pub ramification: u8,
    pub residue_degree: u8,
    pub is_real: bool,
    pub count_conjugates: u8,
    pub index: u8,
}

impl Place {
    pub fn rational(ell: u64) -> Self {
        Place {
            field: BaseField::Rationals,
            residue_char: Some(ell),
            ramification: 1,
            residue_degree: 1,
            is_real: false,
            count_conjugates: 1,
            index: 0,
        }
    }

    pub fn residue_char(&self) -> Option<u64> {
        self.residue_char
    }

    pub fn is_infinite(&self) -> bool {
        self.residue_char.is_none()
    }

    /// `q_v = ell^f`; zero for infinite places.
    pub fn residue_field_size(&self) -> u64 {
        match self.residue_char {
            Some(ell) => ell.pow(self.residue_degree as u32),
            None => 0,
        }
    }

    pub fn name(&self) -> String {
        let suffix = if self.count_conjugates == 2 {
            ["a", "b"][self.index as usize]
        } else {
            ""
        };
        match self.residue_char {
            Some(ell) => format!("{ell}{suffix}"),
            None if self.count_conjugates == 2 => format!("inf{}", self.index + 1),
            None => "inf".to_string(),
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |p: &Place| (p.residue_char.is_none(), p.residue_char, p.index);
        key(self)
            .cmp(&key(other))
            .then(self.field.cmp(&other.field))
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn places_above(field: BaseField, ell: u64) -> Result<Vec<Place>> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let base = Place {
        field,
        ..Place::rational(ell)
    };
    Ok(match field {
        BaseField::Rationals => vec![base],
        BaseField::Quadratic { .. } => match arith::kronecker(field.discriminant(), ell) {
            1 => (0..2)
                .map(|index| Place {
                    count_conjugates: 2,
                    index,
                    ..base.clone()
                })
                .collect(),
            -1 => vec![Place {
                residue_degree: 2,
                ..base
            }],
            _ => vec![Place {
                ramification: 2,
                ..base
            }],
        },
    })
}

pub fn infinite_places(field: BaseField) -> Vec<Place> {
    let real = |count_conjugates, index| Place {
        field,
        residue_char: None,
        ramification: 1,
        residue_degree: 1,
        is_real: true,
        count_conjugates,
        index,
    };
    match field {
        BaseField::Rationals => vec![real(1, 0)],
        BaseField::Quadratic { d } if d > 0 => vec![real(2, 0), real(2, 1)],
        BaseField::Quadratic { .. } => vec![Place {
            is_real: false,
            ..real(1, 0)
        }],
    }
}

fn finite_char(v: &Place, p: u64) -> Result<u64> {
    match v.residue_char {
        None => Err(Error::InfinitePlace(v.name())),
        Some(ell) if ell == p => Err(Error::ResidueCharEqualsP(v.name())),
        Some(ell) => Ok(ell),
    }
}

/// Whether the completion at `v` contains the `p`-th roots of unity.
pub fn mu_p_in_completion(v: &Place, p: u64) -> Result<bool> {
    finite_char(v, p)?;
    Ok((v.residue_field_size() - 1).is_multiple_of(p))
}

/// The mod-p cyclotomic character restricted to a decomposition group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterData {
    pub place: Place,
    pub p: u64,
    pub eps_trivial: bool,
    pub eps_equals_delta_possible: bool,
    pub eps_frob_mod_p: u64,
}

pub fn character_data(v: &Place, p: u64) -> Result<CharacterData> {
    finite_char(v, p)?;
    let q = v.residue_field_size() % p;
    Ok(CharacterData {
        place: v.clone(),
        p,
        eps_trivial: q == 1,
        eps_equals_delta_possible: q == p - 1,
        eps_frob_mod_p: q,
    })
}

/// Local data of `curve` over the completion at `v`, from its data over Q
/// at the prime below.
pub fn base_change(
    curve: &EllipticCurve,
    red: &LocalReductionData,
    v: &Place,
) -> Result<LocalReductionData> {
    let ell = red
        .place
        .residue_char()
        .ok_or_else(|| Error::InfinitePlace(red.place.name()))?;
    if v.residue_char != Some(ell) {
        return Err(Error::PlaceMismatch(v.name()));
    }
    let mut out = LocalReductionData {
        place: v.clone(),
        ..red.clone()
    };
    if v.ramification == 1 {
        if v.residue_degree == 2 && red.reduction_class == ReductionClass::NonsplitMultiplicative {
            out.reduction_class = ReductionClass::SplitMultiplicative;
        }
        out.tamagawa_hint = None;
        return Ok(out);
    }
    match red.reduction_class {
        ReductionClass::Good => Ok(out),
        ReductionClass::SplitMultiplicative | ReductionClass::NonsplitMultiplicative => {
            out.v_delta_min *= 2;
            out.kodaira = Kodaira::I(out.v_delta_min);
            out.tamagawa_hint = None;
            Ok(out)
        }
        ReductionClass::Additive if ell < 5 => Err(Error::WildRamifiedAdditive(v.clone())),
        ReductionClass::Additive => {
            let BaseField::Quadratic { d } = v.field else {
                unreachable!("ramified place of Q")
            };
            let twisted = local_reduction::tate_algorithm(&curve.quadratic_twist(d), ell)?;
            out.tamagawa_hint = None;
            match twisted.reduction_class {
                ReductionClass::Good => {
                    out.kodaira = Kodaira::I(0);
                    out.reduction_class = ReductionClass::Good;
                    out.f_v = 0;
                    out.v_delta_min = 0;
                }
                ReductionClass::SplitMultiplicative | ReductionClass::NonsplitMultiplicative => {
                    out.reduction_class = twisted.reduction_class;
                    out.v_delta_min = 2 * twisted.v_delta_min;
                    out.kodaira = Kodaira::I(out.v_delta_min);
                    out.f_v = 1;
                }
                ReductionClass::Additive => {
                    // Both twists additive: potentially good, and the
                    // discriminant valuation over the extension is 2v mod 12.
                    let vk = (2 * red.v_delta_min) % 12;
                    out.v_delta_min = vk;
                    out.kodaira =
                        Kodaira::from_tame_valuation(vk).expect("potentially good tame valuation");
                    out.f_v = 2;
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!("Q".parse::<BaseField>().unwrap(), BaseField::Rationals);
        assert_eq!(
            "Q(sqrt{-5})".parse::<BaseField>().unwrap(),
            BaseField::Quadratic { d: -5 }
        );
        assert!("Q(sqrt{4})".parse::<BaseField>().is_err());
        assert!("Q(sqrt{1})".parse::<BaseField>().is_err());
        assert!("Q(zeta_7)".parse::<BaseField>().is_err());
        assert_eq!(BaseField::Quadratic { d: -5 }.discriminant(), -20);
        assert_eq!(BaseField::Quadratic { d: 5 }.discriminant(), 5);
    }

    #[test]
    fn splitting_in_q_sqrt_minus_5() {
        let f = BaseField::Quadratic { d: -5 };
        let at11 = places_above(f, 11).unwrap();
        assert_eq!(at11.len(), 1);
        assert_eq!(
            (at11[0].residue_degree, at11[0].residue_field_size()),
            (2, 121)
        );
        let at5 = places_above(f, 5).unwrap();
        assert_eq!(
            (at5.len(), at5[0].ramification, at5[0].residue_field_size()),
            (1, 2, 5)
        );
        // -20 = 1 mod 3 is a square.
        assert_eq!(places_above(f, 3).unwrap().len(), 2);
        assert_eq!(places_above(f, 2).unwrap()[0].ramification, 2);
    }

    #[test]
    fn mu_p_membership() {
        assert!(!mu_p_in_completion(&Place::rational(11), 3).unwrap());
        assert!(mu_p_in_completion(&Place::rational(11), 5).unwrap());
        let inert = places_above(BaseField::Quadratic { d: -5 }, 11)
            .unwrap()
            .remove(0);
        assert!(mu_p_in_completion(&inert, 3).unwrap());
        assert!(matches!(
            mu_p_in_completion(&Place::rational(3), 3),
            Err(Error::ResidueCharEqualsP(_))
        ));
    }

    #[test]
    fn infinite_place_counts() {
        assert_eq!(infinite_places(BaseField::Rationals).len(), 1);
        assert_eq!(infinite_places(BaseField::Quadratic { d: 2 }).len(), 2);
        let c = infinite_places(BaseField::Quadratic { d: -1 });
        assert_eq!(c.len(), 1);
        assert!(!c[0].is_real);
    }
}
