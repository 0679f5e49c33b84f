//! End-to-end verification of a pair and its JSON report.

use rayon::prelude::*;
use serde::Serialize;

use crate::cache::LocalCache;
use crate::congruence::{
    self, CongruenceConfig, CongruenceStatus, CongruenceVerdict, Irreducibility,
    IrreducibilityVerdict,
};
use crate::error::{Error, Result};
use crate::io::{Corpus, Sidecar, VerificationJob};
use crate::local_reduction::{self, Kodaira, ReductionClass, SerreExponent};
use crate::parity::{
    self, ExponentSource, Mode, ParityContext, PlaceSets, Relation, SelmerInput,
    SelmerParityVerdict, SetOptions, SigmaValue, Strictness, Verdict,
};
use crate::places::{self, BaseField, Place};
use crate::root_numbers::{self, GlobalRatioVerdict, LocalRatioVerdict, RootNumber};
use crate::weierstrass::{EllipticCurve, PointCountConfig};

pub const SCHEMA_VERSION: u32 = 1;

const CONGRUENCE_CAVEAT: &str =
    "congruence is certified only as consistent up to the trace bound; this is not a proof that the mod-p representations are isomorphic";

#[derive(Clone, Debug, Serialize)]
pub struct CurveSummary {
    pub label: String,
    pub coefficients: [String; 5],
    pub conductor: String,
    pub a_p: i64,
    pub global_root_number: Option<i8>,
    pub infinite_places: usize,
    pub split_places: usize,
    pub semistable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveColumn {
    pub class: ReductionClass,
    pub kodaira: String,
    pub f_v: u32,
    pub v_delta_min: u32,
    pub serre_exponent: SerreExponent,
    pub exponent_source: ExponentSource,
    pub trace: Option<i64>,
    pub sigma: SigmaValue,
    pub root_number: RootNumber,
    pub epsilon0_residue: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceRow {
    pub place: Place,
    pub residue_field_size: u64,
    pub mu_p: bool,
    pub curves: [CurveColumn; 2],
    pub relation: Relation,
    pub root_ratio: Option<i8>,
    pub in_sigma0: bool,
    pub in_s1: bool,
    pub in_s2: bool,
    pub in_t: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cardinalities {
    pub s1: usize,
    pub s2: usize,
    pub t: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InternalChecks {
    /// `sum sigma1 + |S1| = sum sigma2 + |S2| + |T| mod 2` over Sigma0.
    pub local_parity_identity: Option<bool>,
    /// `lambda + sum over Sigma0 of sigma mod 2`, per curve, when lambda is supplied.
    pub lambda_sigma0: [Option<u8>; 2],
    pub lambda_sigma0_equal: Option<bool>,
    /// Places where the classes cannot occur for congruent curves.
    pub impossible_pairs: Vec<Place>,
    /// Places of Sigma0 whose modified local constants differ mod p.
    pub epsilon0_mismatches: Vec<Place>,
    pub epsilon0_compared: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PParityNote {
    /// `w(E/F) = (-1)^s` per curve when both sides are known; informational only.
    pub consistent: [Option<bool>; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityReport {
    pub schema_version: u32,
    pub pair: String,
    pub field: BaseField,
    pub p: u64,
    pub requested_mode: Mode,
    pub strictness: Strictness,
    pub curves: [CurveSummary; 2],
    pub congruence: CongruenceVerdict,
    pub irreducibility: IrreducibilityVerdict,
    pub places: Vec<PlaceRow>,
    pub places_above_p: Vec<Place>,
    pub infinite_places: Vec<Place>,
    pub sets: PlaceSets,
    pub cardinalities: Cardinalities,
    pub selmer_parity: SelmerParityVerdict,
    pub global_root_ratio: GlobalRatioVerdict,
    pub local_root_ratios: LocalRatioVerdict,
    pub internal_checks: InternalChecks,
    pub p_parity: PParityNote,
    pub caveats: Vec<String>,
}

impl ParityReport {
    /// Whether any verdict or internal check failed.
    pub fn has_failure(&self) -> bool {
        let c = &self.internal_checks;
        self.selmer_parity.verdict == Verdict::Fails
            || self.global_root_ratio.verdict == Verdict::Fails
            || self.local_root_ratios.verdict == Verdict::Fails
            || c.local_parity_identity == Some(false)
            || c.lambda_sigma0_equal == Some(false)
            || (self.congruence.is_consistent()
                && (!c.impossible_pairs.is_empty() || !c.epsilon0_mismatches.is_empty()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalysisOptions {
    pub congruence: CongruenceConfig,
    pub sets: SetOptions,
}

fn summarize(
    curve: &EllipticCurve,
    field: BaseField,
    p: u64,
    cache: &LocalCache,
) -> Result<CurveSummary> {
    let g = root_numbers::global_root_number(curve, field, cache)?;
    Ok(CurveSummary {
        label: curve.label().unwrap_or("").to_string(),
        coefficients: curve.coefficients().clone().map(|c| c.to_string()),
        conductor: local_reduction::conductor(curve)?.to_string(),
        a_p: cache.trace(
            curve,
            p,
            PointCountConfig {
                max_prime: p.max(10_000),
            },
        )?,
        global_root_number: g.root_number.value,
        infinite_places: g.infinite_places,
        split_places: g.split_places,
        semistable: g.semistable,
    })
}

fn column(entry: &parity::PlaceEntry, i: usize, sigma: SigmaValue, p: u64) -> Result<CurveColumn> {
    let c = &entry.curves[i];
    let v = &entry.classification.place;
    let w = root_numbers::local_root_number(&c.local, v);
    let eps = root_numbers::epsilon0_residue(&c.local, v, p, w)?;
    Ok(CurveColumn {
        class: c.local.reduction_class,
        kodaira: kodaira_name(c.local.kodaira),
        f_v: c.local.f_v,
        v_delta_min: c.local.v_delta_min,
        serre_exponent: c.serre_exponent,
        exponent_source: c.exponent_source,
        trace: c.trace,
        sigma,
        root_number: w,
        epsilon0_residue: eps.residue,
    })
}

fn kodaira_name(k: Kodaira) -> String {
    k.to_string()
}

/// The full analysis of one pair.
#[allow(clippy::too_many_arguments)]
pub fn analyze_pair(
    e1: &EllipticCurve,
    e2: &EllipticCurve,
    field: BaseField,
    p: u64,
    mode: Mode,
    strictness: Strictness,
    selmer: (Option<&SelmerInput>, Option<&SelmerInput>),
    options: AnalysisOptions,
    cache: &LocalCache,
) -> Result<ParityReport> {
    let mut caveats = Vec::new();
    let congruence = congruence::congruent_mod_p_with(e1, e2, p, options.congruence, cache)?;
    match &congruence.status {
        CongruenceStatus::ConsistentUpToBound => {
            caveats.push(CONGRUENCE_CAVEAT.to_string());
            if congruence.truncated {
                caveats.push(format!(
                    "trace comparison stopped at {} below the Sturm bound {}",
                    congruence.bound_used, congruence.sturm_bound
                ));
            }
        }
        CongruenceStatus::RefutedAt { ell, reason } => {
            caveats.push(format!("congruence refuted at {ell}: {reason}"));
        }
    }
    let irreducibility =
        congruence::irreducible_mod_p_over(e1, p, field, cache).or_else(|e| match e {
            Error::UnsupportedPrime(_) => Ok(IrreducibilityVerdict {
                status: Irreducibility::Unknown,
                witness: Some(format!("no irreducibility test for p = {p}")),
            }),
            other => Err(other),
        })?;
    if irreducibility.status == Irreducibility::Unknown {
        caveats.push(format!("irreducibility of E1[{p}] over {field} is unknown"));
    }

    let set_options = SetOptions {
        strictness,
        ..options.sets
    };
    let table = parity::compute_sets(e1, e2, field, p, set_options, cache)?;
    caveats.extend(table.caveats.iter().cloned());

    let s1 = summarize(e1, field, p, cache)?;
    let s2 = summarize(e2, field, p, cache)?;
    for s in [&s1, &s2] {
        if s.global_root_number.is_none() {
            caveats.push(format!(
                "global root number of {} over {field} is unknown (additive reduction at 2 or 3)",
                s.label
            ));
        }
    }

    let mut rows = Vec::new();
    let mut impossible = Vec::new();
    let mut eps_mismatch = Vec::new();
    let mut eps_compared = 0;
    for entry in &table.entries {
        let c = &entry.classification;
        let v = &c.place;
        let col1 = column(entry, 0, c.sigma1, p)?;
        let col2 = column(entry, 1, c.sigma2, p)?;
        for col in [&col1, &col2] {
            if col.root_number.value.is_none() {
                caveats.push(format!("local root number at {v} is unknown ({} reduction over residue characteristic below 5)", col.class));
            }
        }
        if c.relation == Relation::ImpossiblePair {
            impossible.push(v.clone());
        }
        if c.in_sigma0 {
            if let (Some(a), Some(b)) = (col1.epsilon0_residue, col2.epsilon0_residue) {
                eps_compared += 1;
                if a != b {
                    eps_mismatch.push(v.clone());
                }
            }
        }
        rows.push(PlaceRow {
            place: v.clone(),
            residue_field_size: v.residue_field_size(),
            mu_p: places::mu_p_in_completion(v, p)?,
            root_ratio: root_numbers::root_ratio_local(
                &entry.curves[0].local,
                &entry.curves[1].local,
                v,
                p,
            )
            .ok(),
            curves: [col1, col2],
            relation: c.relation,
            in_sigma0: c.in_sigma0,
            in_s1: c.in_s1,
            in_s2: c.in_s2,
            in_t: c.in_t,
        });
    }
    if congruence.is_consistent() {
        for v in &impossible {
            caveats.push(format!(
                "internal inconsistency: the classes at {v} cannot occur for congruent curves"
            ));
        }
    }

    let congruent = congruence.is_consistent();
    let sigma0_sigmas = |k: usize| -> Vec<Option<u8>> {
        table
            .entries
            .iter()
            .filter(|e| e.classification.in_sigma0)
            .map(|e| {
                if k == 0 {
                    e.classification.sigma1.value
                } else {
                    e.classification.sigma2.value
                }
            })
            .collect()
    };
    let sum = |xs: &[Option<u8>]| xs.iter().try_fold(0u64, |acc, x| x.map(|x| acc + x as u64));
    let (sig1, sig2) = (sigma0_sigmas(0), sigma0_sigmas(1));
    let sets = &table.sets;
    let local_parity_identity = match (sum(&sig1), sum(&sig2)) {
        (Some(a), Some(b)) if congruent => Some(
            (a + sets.s1.len() as u64) % 2 == (b + sets.s2.len() as u64 + sets.t.len() as u64) % 2,
        ),
        _ => None,
    };

    let a_p = (s1.a_p, s2.a_p);
    let p_splits_completely = places::places_above(field, p)?.len() == field.degree() as usize;
    let ctx = ParityContext {
        congruence: &congruence,
        irreducibility: &irreducibility,
        a_p,
        p_splits_completely,
    };
    let empty = SelmerInput::default();
    let selmer_parity = match parity::verify_parity(
        &table,
        &ctx,
        (selmer.0.unwrap_or(&empty), selmer.1.unwrap_or(&empty)),
        mode,
    ) {
        Ok(v) => v,
        Err(Error::MissingSelmerData(which)) => {
            caveats.push(format!(
                "no Selmer or lambda data for {which}; the Selmer parity check was not run"
            ));
            SelmerParityVerdict {
                mode: parity::resolve_mode(mode, a_p.0, p),
                verdict: Verdict::NotApplicable,
                inputs: None,
                lhs_mod_2: None,
                rhs_mod_2: None,
                notes: vec![format!("missing Selmer data for {which}")],
            }
        }
        Err(e) => return Err(e),
    };
    for n in &selmer_parity.notes {
        caveats.push(format!("selmer parity: {n}"));
    }

    let lambda_of = |s: Option<&SelmerInput>| -> Option<u64> {
        let s = s?;
        match selmer_parity.mode {
            Mode::Supersingular => s.lambda_minus,
            _ => s.lambda,
        }
    };
    let lambda_sigma0 = [
        lambda_of(selmer.0).and_then(|l| parity::lambda_sigma0_relation(l, &sig1)),
        lambda_of(selmer.1).and_then(|l| parity::lambda_sigma0_relation(l, &sig2)),
    ];
    let lambda_sigma0_equal = match lambda_sigma0 {
        [Some(a), Some(b)] if congruent && selmer_parity.verdict != Verdict::NotApplicable => {
            Some(a == b)
        }
        _ => None,
    };

    let global_root_ratio = root_numbers::verify_global_ratio(
        &table,
        congruent,
        s1.global_root_number,
        s2.global_root_number,
    );
    for n in &global_root_ratio.notes {
        caveats.push(format!("root number ratio: {n}"));
    }
    let local_root_ratios = root_numbers::verify_local_ratios(&table, congruent);

    let s_of = |s: Option<&SelmerInput>| s.and_then(|s| s.s_p);
    let p_parity = PParityNote {
        consistent: [
            s1.global_root_number
                .zip(s_of(selmer.0))
                .map(|(w, s)| (w == 1) == (s % 2 == 0)),
            s2.global_root_number
                .zip(s_of(selmer.1))
                .map(|(w, s)| (w == 1) == (s % 2 == 0)),
        ],
    };
    caveats.sort();
    caveats.dedup();

    Ok(ParityReport {
        schema_version: SCHEMA_VERSION,
        pair: format!("{} ~ {}", s1.label, s2.label),
        field,
        p,
        requested_mode: mode,
        strictness,
        cardinalities: Cardinalities {
            s1: sets.s1.len(),
            s2: sets.s2.len(),
            t: sets.t.len(),
        },
        sets: table.sets.clone(),
        places: rows,
        places_above_p: table.above_p.clone(),
        infinite_places: table.infinite.clone(),
        curves: [s1, s2],
        congruence,
        irreducibility,
        selmer_parity,
        global_root_ratio,
        local_root_ratios,
        internal_checks: InternalChecks {
            local_parity_identity,
            lambda_sigma0,
            lambda_sigma0_equal,
            impossible_pairs: impossible,
            epsilon0_mismatches: eps_mismatch,
            epsilon0_compared: eps_compared,
        },
        p_parity,
        caveats,
    })
}

pub fn run_job(
    job: &VerificationJob,
    corpus: &Corpus,
    sidecar: &Sidecar,
    options: AnalysisOptions,
    cache: &LocalCache,
) -> Result<ParityReport> {
    let e1 = corpus.get(&job.labels.0)?;
    let e2 = corpus.get(&job.labels.1)?;
    let s1 = sidecar.selmer(&job.labels.0, job.field, job.p);
    let s2 = sidecar.selmer(&job.labels.1, job.field, job.p);
    analyze_pair(
        e1,
        e2,
        job.field,
        job.p,
        job.mode,
        job.strictness,
        (s1, s2),
        options,
        cache,
    )
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum BatchItem {
    Report(Box<ParityReport>),
    Error { job: String, error: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub schema_version: u32,
    pub jobs: usize,
    pub failures: usize,
    pub errors: usize,
    pub results: Vec<BatchItem>,
}

/// Runs all jobs in parallel; results keep the order of `jobs`.
pub fn run_batch(
    jobs: &[VerificationJob],
    corpus: &Corpus,
    sidecar: &Sidecar,
    options: AnalysisOptions,
    cache: &LocalCache,
) -> BatchReport {
    let results: Vec<BatchItem> = jobs
        .par_iter()
        .map(|job| match run_job(job, corpus, sidecar, options, cache) {
            Ok(r) => BatchItem::Report(Box::new(r)),
            Err(e) => BatchItem::Error {
                job: job.id(),
                error: e.to_string(),
            },
        })
        .collect();
    let failures = results
        .iter()
        .filter(|r| matches!(r, BatchItem::Report(r) if r.has_failure()))
        .count();
    let errors = results
        .iter()
        .filter(|r| matches!(r, BatchItem::Error { .. }))
        .count();
    BatchReport {
        schema_version: SCHEMA_VERSION,
        jobs: jobs.len(),
        failures,
        errors,
        results,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalRow {
    pub place: Place,
    pub residue_field_size: u64,
    pub class: ReductionClass,
    pub kodaira: String,
    pub f_v: u32,
    pub v_delta_min: u32,
    pub tamagawa_hint: Option<u32>,
    pub serre_exponent: Option<SerreExponent>,
    pub root_number: RootNumber,
    pub sigma: Option<SigmaValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    pub schema_version: u32,
    pub curve: CurveSummary,
    pub field: BaseField,
    pub p: u64,
    pub places: Vec<LocalRow>,
    pub irreducibility: Option<IrreducibilityVerdict>,
    pub caveats: Vec<String>,
}

/// Local table of a single curve over `field`, relative to `p`.
pub fn analyze_curve(
    curve: &EllipticCurve,
    field: BaseField,
    p: u64,
    cache: &LocalCache,
) -> Result<CurveReport> {
    if p < 3 || !crate::arith::is_prime(p) {
        return Err(Error::InvalidP(p));
    }
    let mut caveats = Vec::new();
    let mut rows = Vec::new();
    for red in root_numbers::bad_places_over(curve, field, cache)? {
        let v = red.place.clone();
        let above_p = v.residue_char() == Some(p);
        let serre = if above_p {
            None
        } else {
            Some(local_reduction::serre_exponent(&red, p)?.exponent)
        };
        if serre == Some(SerreExponent::Unknown) {
            caveats.push(format!(
                "conductor exponent of E[{p}] at {v} is unknown (wild additive place)"
            ));
        }
        let w = root_numbers::local_root_number(&red, &v);
        if w.value.is_none() {
            caveats.push(format!("local root number at {v} is unknown"));
        }
        let sigma = if above_p {
            None
        } else {
            Some(parity::sigma(&red, &v, p, None)?)
        };
        rows.push(LocalRow {
            residue_field_size: v.residue_field_size(),
            place: v,
            class: red.reduction_class,
            kodaira: red.kodaira.to_string(),
            f_v: red.f_v,
            v_delta_min: red.v_delta_min,
            tamagawa_hint: red.tamagawa_hint,
            serre_exponent: serre,
            root_number: w,
            sigma,
        });
    }
    let good_at_p = cache.local(curve, p)?.reduction_class == ReductionClass::Good;
    let summary = if good_at_p {
        summarize(curve, field, p, cache)?
    } else {
        caveats.push(format!("bad reduction at p = {p}"));
        let g = root_numbers::global_root_number(curve, field, cache)?;
        CurveSummary {
            label: curve.label().unwrap_or("").to_string(),
            coefficients: curve.coefficients().clone().map(|c| c.to_string()),
            conductor: local_reduction::conductor(curve)?.to_string(),
            a_p: crate::weierstrass::trace_at_bad(&cache.local(curve, p)?)?,
            global_root_number: g.root_number.value,
            infinite_places: g.infinite_places,
            split_places: g.split_places,
            semistable: g.semistable,
        }
    };
    let irreducibility = match congruence::irreducible_mod_p_over(curve, p, field, cache) {
        Ok(v) => Some(v),
        Err(Error::UnsupportedPrime(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CurveReport {
        schema_version: SCHEMA_VERSION,
        curve: summary,
        field,
        p,
        places: rows,
        irreducibility,
        caveats,
    })
}
