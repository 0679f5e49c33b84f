//! Local coranks at places away from p, the pairwise relation between them
//! for congruent curves, the place sets that enter the parity formula, and
//! the check of that formula against supplied Selmer or lambda data.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cache::LocalCache;
use crate::congruence::{CongruenceVerdict, Irreducibility, IrreducibilityVerdict};
use crate::error::{Error, Result};
use crate::local_reduction::{self, LocalReductionData, ReductionClass, SerreExponent};
use crate::places::{self, BaseField, Place};
use crate::weierstrass::{EllipticCurve, PointCountConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaReason {
    Additive,
    SplitMultiplicative,
    NonsplitMultiplicative,
    GoodRootCount,
    GoodDoubleRootAtOne,
    TraceUnavailable,
}

/// Corank `sigma` at a place not above p: 0, 1, or `None` when undetermined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaValue {
    pub value: Option<u8>,
    pub reason: SigmaReason,
}

impl SigmaValue {
    fn known(value: bool, reason: SigmaReason) -> Self {
        SigmaValue {
            value: Some(value as u8),
            reason,
        }
    }
}

fn finite_not_above(v: &Place, p: u64) -> Result<u64> {
    match v.residue_char() {
        None => Err(Error::InfinitePlace(v.name())),
        Some(ell) if ell == p => Err(Error::ResidueCharEqualsP(v.name())),
        Some(_) => Ok(v.residue_field_size()),
    }
}

pub fn sigma(red: &LocalReductionData, v: &Place, p: u64, a_v: Option<i64>) -> Result<SigmaValue> {
    let q = finite_not_above(v, p)? % p;
    Ok(match red.reduction_class {
        ReductionClass::Additive => SigmaValue::known(false, SigmaReason::Additive),
        ReductionClass::SplitMultiplicative => {
            SigmaValue::known(q == 1, SigmaReason::SplitMultiplicative)
        }
        ReductionClass::NonsplitMultiplicative => {
            SigmaValue::known(q == p - 1, SigmaReason::NonsplitMultiplicative)
        }
        ReductionClass::Good => {
            let a = a_v.ok_or_else(|| Error::MissingTrace(v.name()))?;
            sigma_good(a.rem_euclid(p as i64) as u64, q, p)
        }
    })
}

/// Roots equal to 1 of `x^2 - a x + q` over F_p.
fn sigma_good(a: u64, q: u64, p: u64) -> SigmaValue {
    let at_one = (1 + q + p - a).is_multiple_of(p);
    let derivative_at_one = (2 + p - a).is_multiple_of(p);
    if at_one && derivative_at_one {
        SigmaValue {
            value: None,
            reason: SigmaReason::GoodDoubleRootAtOne,
        }
    } else {
        SigmaValue::known(at_one, SigmaReason::GoodRootCount)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    DiffersByOne,
    ImpossiblePair,
}

/// Relation between the coranks of two congruent curves with the given
/// classes at a place whose residue field has `q_mod_p` elements mod p.
pub fn pair_relation(c1: ReductionClass, c2: ReductionClass, q_mod_p: u64, p: u64) -> Relation {
    use ReductionClass::*;
    let (a, b) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
    let mu_p = q_mod_p % p == 1;
    match (a, b) {
        (Good, Good) | (Additive, Additive) | (Good, NonsplitMultiplicative) => Relation::Equal,
        (SplitMultiplicative, SplitMultiplicative)
        | (NonsplitMultiplicative, NonsplitMultiplicative) => Relation::Equal,
        (Good, SplitMultiplicative) => Relation::DiffersByOne,
        (SplitMultiplicative, NonsplitMultiplicative) if q_mod_p % p == p - 1 => {
            Relation::DiffersByOne
        }
        (SplitMultiplicative, NonsplitMultiplicative) => Relation::ImpossiblePair,
        (Good, Additive) => Relation::ImpossiblePair,
        (_, Additive) if p >= 5 => Relation::ImpossiblePair,
        (SplitMultiplicative, Additive) if mu_p => Relation::DiffersByOne,
        (SplitMultiplicative, Additive) => Relation::Equal,
        (NonsplitMultiplicative, Additive) if mu_p => Relation::Equal,
        (NonsplitMultiplicative, Additive) => Relation::DiffersByOne,
        _ => unreachable!("classes are sorted"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairClassification {
    pub place: Place,
    pub classes: (ReductionClass, ReductionClass),
    pub relation: Relation,
    pub sigma1: SigmaValue,
    pub sigma2: SigmaValue,
    pub in_sigma0: bool,
    pub in_s1: bool,
    pub in_s2: bool,
    pub in_t: bool,
}

impl PairClassification {
    /// `sigma1 - sigma2 mod 2`, from the pointwise values when both are
    /// known and from the pairwise relation otherwise.
    pub fn sigma_difference_parity(&self) -> Option<u8> {
        match (self.sigma1.value, self.sigma2.value) {
            (Some(a), Some(b)) => Some((a + b) % 2),
            _ => match self.relation {
                Relation::Equal => Some(0),
                Relation::DiffersByOne => Some(1),
                Relation::ImpossiblePair => None,
            },
        }
    }
}

fn sigma_or_unavailable(
    red: &LocalReductionData,
    v: &Place,
    p: u64,
    a: Option<i64>,
) -> Result<SigmaValue> {
    match sigma(red, v, p, a) {
        Err(Error::MissingTrace(_)) => Ok(SigmaValue {
            value: None,
            reason: SigmaReason::TraceUnavailable,
        }),
        other => other,
    }
}

/// Relation and coranks at one place; the set flags are filled in by
/// [`compute_sets`].
pub fn classify_pair(
    red1: &LocalReductionData,
    a1: Option<i64>,
    red2: &LocalReductionData,
    a2: Option<i64>,
    v: &Place,
    p: u64,
) -> Result<PairClassification> {
    let q = finite_not_above(v, p)? % p;
    Ok(PairClassification {
        place: v.clone(),
        classes: (red1.reduction_class, red2.reduction_class),
        relation: pair_relation(red1.reduction_class, red2.reduction_class, q, p),
        sigma1: sigma_or_unavailable(red1, v, p, a1)?,
        sigma2: sigma_or_unavailable(red2, v, p, a2)?,
        in_sigma0: false,
        in_s1: false,
        in_s2: false,
        in_t: false,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strictness {
    /// Exponents unknown for both curves at a wild additive place are taken equal to f_v.
    #[default]
    AssumeNoDrop,
    Strict,
}

impl fmt::Display for Strictness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strictness::AssumeNoDrop => "assume-no-drop",
            Strictness::Strict => "strict",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetOptions {
    pub strictness: Strictness,
    /// Largest residue characteristic at which good-place traces are counted.
    pub trace_limit: u64,
}

impl Default for SetOptions {
    fn default() -> Self {
        SetOptions {
            strictness: Strictness::AssumeNoDrop,
            trace_limit: 1_000_000,
        }
    }
}

/// Where a mod-p conductor exponent came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentSource {
    Computed,
    /// Unknown locally; congruent curves share mod-p conductors, so the
    /// partner's known exponent is used.
    Partner,
    /// Unknown on both sides and taken equal to f_v.
    AssumedNoDrop,
}

/// One curve's data at a finite place not above p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveAtPlace {
    pub local: LocalReductionData,
    pub trace: Option<i64>,
    pub serre_exponent: SerreExponent,
    pub exponent_source: ExponentSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceEntry {
    pub classification: PairClassification,
    pub curves: [CurveAtPlace; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PlaceSets {
    pub sigma: Vec<Place>,
    pub sigma0: Vec<Place>,
    pub s1: Vec<Place>,
    pub s2: Vec<Place>,
    pub t: Vec<Place>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairTable {
    pub field: BaseField,
    pub p: u64,
    pub entries: Vec<PlaceEntry>,
    pub above_p: Vec<Place>,
    pub infinite: Vec<Place>,
    pub sets: PlaceSets,
    pub caveats: Vec<String>,
}

/// Data of `curve` at a finite place of `field`, with its Frobenius trace when good.
pub fn curve_at_place(
    curve: &EllipticCurve,
    v: &Place,
    cache: &LocalCache,
    trace_limit: u64,
) -> Result<(LocalReductionData, Option<i64>)> {
    let ell = v
        .residue_char()
        .ok_or_else(|| Error::InfinitePlace(v.name()))?;
    let over_q = cache.local(curve, ell)?;
    let red = places::base_change(curve, &over_q, v)?;
    let trace = if red.reduction_class == ReductionClass::Good && ell <= trace_limit {
        let count = PointCountConfig {
            max_prime: trace_limit,
        };
        let model_trace = if over_q.reduction_class == ReductionClass::Good {
            cache.trace(curve, ell, count)?
        } else {
            // Good only after a ramified base change: the reduction is that of the twist.
            let BaseField::Quadratic { d } = v.field else {
                unreachable!("base change over Q is the identity")
            };
            cache.trace(&curve.quadratic_twist(d), ell, count)?
        };
        Some(if v.residue_degree == 2 {
            model_trace * model_trace - 2 * ell as i64
        } else {
            model_trace
        })
    } else {
        None
    };
    Ok((red, trace))
}

/// Places of `field` above primes of bad reduction of either curve over Q.
fn candidate_places(
    e1: &EllipticCurve,
    e2: &EllipticCurve,
    field: BaseField,
    cache: &LocalCache,
) -> Result<Vec<Place>> {
    let mut primes = BTreeSet::new();
    for e in [e1, e2] {
        for ell in e.discriminant_primes()? {
            if cache.local(e, ell)?.reduction_class != ReductionClass::Good {
                primes.insert(ell);
            }
        }
    }
    let mut out = Vec::new();
    for ell in primes {
        out.extend(places::places_above(field, ell)?);
    }
    Ok(out)
}

pub fn compute_sets(
    e1: &EllipticCurve,
    e2: &EllipticCurve,
    field: BaseField,
    p: u64,
    options: SetOptions,
    cache: &LocalCache,
) -> Result<PairTable> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::InvalidP(p));
    }
    let mut caveats = Vec::new();
    let mut entries = Vec::new();
    for v in candidate_places(e1, e2, field, cache)? {
        if v.residue_char() == Some(p) {
            continue;
        }
        let (r1, a1) = curve_at_place(e1, &v, cache, options.trace_limit)?;
        let (r2, a2) = curve_at_place(e2, &v, cache, options.trace_limit)?;
        if r1.reduction_class == ReductionClass::Good && r2.reduction_class == ReductionClass::Good
        {
            continue;
        }
        let x = [
            local_reduction::serre_exponent(&r1, p)?.exponent,
            local_reduction::serre_exponent(&r2, p)?.exponent,
        ];
        let mut curves = Vec::with_capacity(2);
        for (i, (red, trace)) in [(&r1, a1), (&r2, a2)].into_iter().enumerate() {
            let (serre_exponent, exponent_source) = match (x[i], x[1 - i]) {
                (SerreExponent::Unknown, SerreExponent::Known(other)) => {
                    caveats.push(format!(
                        "conductor exponent of E{}[{p}] at {v} is unknown (wild additive place); taken from the congruent partner as {other}",
                        i + 1
                    ));
                    (SerreExponent::Known(other), ExponentSource::Partner)
                }
                (SerreExponent::Unknown, SerreExponent::Unknown) => {
                    if options.strictness == Strictness::Strict {
                        return Err(Error::WildSerreExponent(v.name()));
                    }
                    caveats.push(format!(
                        "conductor exponent of E{}[{p}] at {v} is unknown (wild additive place); assumed equal to f_v = {}",
                        i + 1,
                        red.f_v
                    ));
                    (SerreExponent::Known(red.f_v), ExponentSource::AssumedNoDrop)
                }
                (known, _) => (known, ExponentSource::Computed),
            };
            curves.push(CurveAtPlace {
                local: red.clone(),
                trace,
                serre_exponent,
                exponent_source,
            });
        }
        let mut c = classify_pair(&r1, a1, &r2, a2, &v, p)?;
        let drops = |cur: &CurveAtPlace| match cur.serre_exponent {
            SerreExponent::Known(x) => x < cur.local.f_v,
            SerreExponent::Unknown => false,
        };
        c.in_sigma0 = drops(&curves[0]) || drops(&curves[1]);
        c.in_s1 = c.in_sigma0 && r1.reduction_class == ReductionClass::SplitMultiplicative;
        c.in_s2 = c.in_sigma0 && r2.reduction_class == ReductionClass::SplitMultiplicative;
        let mixed = (r1.reduction_class.is_multiplicative()
            && r2.reduction_class == ReductionClass::Additive)
            || (r2.reduction_class.is_multiplicative()
                && r1.reduction_class == ReductionClass::Additive);
        c.in_t = c.in_sigma0 && mixed && !places::mu_p_in_completion(&v, p)?;
        for (i, s) in [c.sigma1, c.sigma2].iter().enumerate() {
            if s.value.is_none() {
                caveats.push(format!(
                    "sigma of curve {} at {v} is indeterminate ({:?})",
                    i + 1,
                    s.reason
                ));
            }
        }
        let [c1, c2]: [CurveAtPlace; 2] = curves.try_into().expect("two curves");
        entries.push(PlaceEntry {
            classification: c,
            curves: [c1, c2],
        });
    }
    let above_p = places::places_above(field, p)?;
    let infinite = places::infinite_places(field);

    let pick = |f: fn(&PairClassification) -> bool| -> Vec<Place> {
        entries
            .iter()
            .filter(|e| f(&e.classification))
            .map(|e| e.classification.place.clone())
            .collect()
    };
    let mut sigma: Vec<Place> = entries
        .iter()
        .map(|e| e.classification.place.clone())
        .collect();
    sigma.extend(above_p.iter().cloned());
    sigma.extend(infinite.iter().cloned());
    sigma.sort();
    let sets = PlaceSets {
        sigma,
        sigma0: pick(|c| c.in_sigma0),
        s1: pick(|c| c.in_s1),
        s2: pick(|c| c.in_s2),
        t: pick(|c| c.in_t),
    };
    if !sets.t.is_empty() && p != 3 {
        caveats.push(format!(
            "internal inconsistency: T is non-empty at p = {p}; multiplicative against additive reduction cannot occur for congruent curves when p >= 5"
        ));
    }
    Ok(PairTable {
        field,
        p,
        entries,
        above_p,
        infinite,
        sets,
        caveats,
    })
}

/// `lambda + sum of sigma mod 2`; `None` if any corank is undetermined.
pub fn lambda_sigma0_relation(lambda: u64, taus: &[Option<u8>]) -> Option<u8> {
    let mut acc = (lambda % 2) as u8;
    for t in taus {
        acc = (acc + (*t)? % 2) % 2;
    }
    Some(acc)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerInput {
    pub s_p: Option<u64>,
    pub lambda: Option<u64>,
    pub lambda_minus: Option<u64>,
    pub mu: Option<u64>,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Ordinary,
    Supersingular,
    #[default]
    Auto,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ordinary => "ordinary",
            Mode::Supersingular => "supersingular",
            Mode::Auto => "auto",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordinary" => Ok(Mode::Ordinary),
            "supersingular" => Ok(Mode::Supersingular),
            "auto" => Ok(Mode::Auto),
            other => Err(Error::Parse {
                path: "mode".into(),
                line: 0,
                message: format!("unknown mode {other}; expected ordinary, supersingular or auto"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
    HypothesisUnverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelmerParityVerdict {
    pub mode: Mode,
    pub verdict: Verdict,
    /// Selmer corank parity used for each curve, with its source.
    pub inputs: Option<[(u64, &'static str); 2]>,
    pub lhs_mod_2: Option<u8>,
    pub rhs_mod_2: Option<u8>,
    pub notes: Vec<String>,
}

/// Hypotheses other than the place sets.
#[derive(Clone, Debug)]
pub struct ParityContext<'a> {
    pub congruence: &'a CongruenceVerdict,
    pub irreducibility: &'a IrreducibilityVerdict,
    /// `a_p` of both curves.
    pub a_p: (i64, i64),
    pub p_splits_completely: bool,
}

/// The mode `auto` stands for: ordinary iff p does not divide `a_p(E1)`.
pub fn resolve_mode(mode: Mode, a_p1: i64, p: u64) -> Mode {
    match mode {
        Mode::Auto if a_p1.rem_euclid(p as i64) == 0 => Mode::Supersingular,
        Mode::Auto => Mode::Ordinary,
        m => m,
    }
}

fn selmer_parity(s: &SelmerInput, mode: Mode, tag: &str) -> Result<(u64, &'static str)> {
    let minus_or_lambda = match mode {
        Mode::Supersingular => s.lambda_minus.map(|x| (x, "lambda_minus")),
        _ => s.lambda.map(|x| (x, "lambda")),
    };
    s.s_p
        .map(|x| (x, "s_p"))
        .or(minus_or_lambda)
        .ok_or_else(|| Error::MissingSelmerData(tag.to_string()))
}

/// `s_p(E1) + |S1| = s_p(E2) + |S2| + |T| mod 2`, with the hypotheses of the
/// chosen reduction type at p checked first.
pub fn verify_parity(
    table: &PairTable,
    ctx: &ParityContext<'_>,
    selmer: (&SelmerInput, &SelmerInput),
    mode: Mode,
) -> Result<SelmerParityVerdict> {
    let p = table.p;
    let mode = resolve_mode(mode, ctx.a_p.0, p);
    let mut notes = Vec::new();
    let not_applicable = |notes: Vec<String>| SelmerParityVerdict {
        mode,
        verdict: Verdict::NotApplicable,
        inputs: None,
        lhs_mod_2: None,
        rhs_mod_2: None,
        notes,
    };
    if !ctx.congruence.is_consistent() {
        notes.push("congruence refuted: the curves are not congruent mod p".into());
        return Ok(not_applicable(notes));
    }
    let supersingular = |a: i64| a.rem_euclid(p as i64) == 0;
    match mode {
        Mode::Ordinary if supersingular(ctx.a_p.0) || supersingular(ctx.a_p.1) => {
            notes.push(format!(
                "ordinary mode needs p not dividing a_p, got a_p = ({}, {})",
                ctx.a_p.0, ctx.a_p.1
            ));
            return Ok(not_applicable(notes));
        }
        Mode::Supersingular if !(supersingular(ctx.a_p.0) && supersingular(ctx.a_p.1)) => {
            notes.push(format!(
                "supersingular mode needs p dividing a_p, got a_p = ({}, {})",
                ctx.a_p.0, ctx.a_p.1
            ));
            return Ok(not_applicable(notes));
        }
        Mode::Supersingular if !ctx.p_splits_completely => {
            notes.push(format!(
                "supersingular mode needs p to split completely in {}",
                table.field
            ));
            return Ok(not_applicable(notes));
        }
        _ => {}
    }
    if ctx.irreducibility.status == Irreducibility::Reducible {
        notes.push("E1[p] is reducible, so the irreducibility hypothesis fails".into());
        return Ok(not_applicable(notes));
    }
    let s1 = selmer_parity(selmer.0, mode, "curve 1")?;
    let s2 = selmer_parity(selmer.1, mode, "curve 2")?;
    let lhs = ((s1.0 + table.sets.s1.len() as u64) % 2) as u8;
    let rhs = ((s2.0 + table.sets.s2.len() as u64 + table.sets.t.len() as u64) % 2) as u8;
    let mut verdict = if lhs == rhs {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    if ctx.irreducibility.status == Irreducibility::Unknown {
        notes.push("irreducibility of E1[p] could not be established".into());
        verdict = Verdict::HypothesisUnverified;
    }
    if selmer.0.mu.is_none() {
        notes.push(
            "finiteness of the cyclotomic Selmer group mod p of E1 is assumed, not supplied".into(),
        );
    } else if selmer.0.mu != Some(0) {
        notes.push("supplied mu of E1 is non-zero; the finiteness hypothesis fails".into());
        verdict = Verdict::NotApplicable;
    }
    Ok(SelmerParityVerdict {
        mode,
        verdict,
        inputs: Some([s1, s2]),
        lhs_mod_2: Some(lhs),
        rhs_mod_2: Some(rhs),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ReductionClass::*;

    #[test]
    fn sigma_examples() {
        let v = Place::rational(11);
        let red = |class| LocalReductionData {
            reduction_class: class,
            ..LocalReductionData::good(v.clone())
        };
        assert_eq!(
            sigma(&red(SplitMultiplicative), &v, 3, None).unwrap().value,
            Some(0)
        );
        assert_eq!(
            sigma(&red(NonsplitMultiplicative), &v, 3, None)
                .unwrap()
                .value,
            Some(1)
        );
        assert_eq!(sigma(&red(Additive), &v, 5, None).unwrap().value, Some(0));
        assert!(matches!(
            sigma(&red(Good), &v, 3, None),
            Err(Error::MissingTrace(_))
        ));
        // a = 12 = 1 + 11 and a != 2 mod 7: root 1 once.
        assert_eq!(sigma(&red(Good), &v, 7, Some(12)).unwrap().value, Some(1));
        assert_eq!(sigma(&red(Good), &v, 7, Some(3)).unwrap().value, Some(0));
        // q = 11 = 1 mod 5 and a = 2: double root at 1.
        assert_eq!(sigma(&red(Good), &v, 5, Some(2)).unwrap().value, None);
        assert!(matches!(
            sigma(&red(Good), &Place::rational(3), 3, Some(0)),
            Err(Error::ResidueCharEqualsP(_))
        ));
    }

    #[test]
    fn relation_examples() {
        assert_eq!(
            pair_relation(SplitMultiplicative, Additive, 11 % 3, 3),
            Relation::Equal
        );
        assert_eq!(
            pair_relation(Good, Additive, 1, 5),
            Relation::ImpossiblePair
        );
        assert_eq!(
            pair_relation(SplitMultiplicative, NonsplitMultiplicative, 4, 5),
            Relation::DiffersByOne
        );
        assert_eq!(
            pair_relation(SplitMultiplicative, NonsplitMultiplicative, 1, 5),
            Relation::ImpossiblePair
        );
        assert_eq!(
            pair_relation(NonsplitMultiplicative, Additive, 2, 3),
            Relation::DiffersByOne
        );
        assert_eq!(
            pair_relation(Additive, NonsplitMultiplicative, 1, 3),
            Relation::Equal
        );
    }

    #[test]
    fn lambda_relation() {
        assert_eq!(lambda_sigma0_relation(0, &[Some(0)]), Some(0));
        assert_eq!(lambda_sigma0_relation(1, &[]), Some(1));
        assert_eq!(lambda_sigma0_relation(2, &[Some(1), None]), None);
    }

    #[test]
    fn auto_mode() {
        assert_eq!(resolve_mode(Mode::Auto, -1, 3), Mode::Ordinary);
        assert_eq!(resolve_mode(Mode::Auto, 0, 5), Mode::Supersingular);
        assert_eq!(resolve_mode(Mode::Supersingular, 2, 5), Mode::Supersingular);
    }
}
