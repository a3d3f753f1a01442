//! Serializable report schema. Rationals travel as "p/q" strings (bare
//! integers drop the denominator); numeric eigenvalues as {re, im}.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::deciders::{Certificate, DecisionPath, PropertyVerdict, RankCheck, Witness};
use crate::harness::CrossValidationReport;
use crate::ratlin::{Rat, RationalMatrix};
use crate::spectra::EigenvalueValue;
use crate::synth::AugmentationResult;

pub const FORMAT_VERSION: &str = "1";

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Accepts "p", "p/q" and plain decimal strings like "-0.25".
pub fn rat_from_string(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den == BigInt::from(0) {
            return None;
        }
        return Some(Rat::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::from(0)
        } else {
            int_part.parse().ok()?
        };
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        let unsigned = int.magnitude().clone() * scale.magnitude().clone() + frac.magnitude();
        let mut value = Rat::new(BigInt::from(unsigned), scale);
        if negative {
            value = -value;
        }
        return Some(value);
    }
    let num: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(num))
}

pub fn matrix_to_rows(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| rat_to_string(&m[(i, j)])).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum EigenvalueRepr {
    Exact(String),
    Numeric { re: f64, im: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum WitnessRepr {
    Exact(Vec<Vec<String>>),
    Numeric(Vec<[f64; 2]>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CertificateReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<EigenvalueRepr>,
    pub chain_id: usize,
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRepr>,
    pub relation: String,
    pub vacuous: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RankCheckReport {
    pub description: String,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerdictReport {
    pub property: String,
    pub path: String,
    pub holds: bool,
    pub certificates: Vec<CertificateReport>,
    pub ranks_checked: Vec<RankCheckReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SynthesisReport {
    pub d: usize,
    pub h: usize,
    pub r1: Vec<Vec<String>>,
    pub r2: Vec<Vec<String>>,
    pub fbar: Vec<Vec<String>>,
    pub t: Vec<Vec<String>>,
    pub a_o: Vec<Vec<String>>,
    pub a_21: Vec<Vec<String>>,
    pub a_u: Vec<Vec<String>>,
    pub c_o: Vec<Vec<String>>,
    pub fbar_o: Vec<Vec<String>>,
    pub controller_conditions_ok: bool,
    pub observer_conditions_ok: bool,
    pub asymptotic_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MismatchReport {
    pub trial: usize,
    pub property: String,
    pub oracle: bool,
    pub chain: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ViolationReport {
    pub trial: usize,
    pub description: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FuzzReport {
    pub trials: usize,
    pub skipped: usize,
    pub mismatches: Vec<MismatchReport>,
    pub violations: Vec<ViolationReport>,
    pub clean: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportDocument {
    pub format_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthesis: Option<SynthesisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<FuzzReport>,
}

impl ReportDocument {
    pub fn new(name: Option<String>) -> Self {
        ReportDocument {
            format_version: FORMAT_VERSION.to_string(),
            name,
            verdicts: Vec::new(),
            synthesis: None,
            fuzz: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn eigenvalue_repr(c: &Certificate) -> Option<EigenvalueRepr> {
    c.eigenvalue.as_ref().map(|ev| match &ev.value {
        EigenvalueValue::Exact(r) => EigenvalueRepr::Exact(rat_to_string(r)),
        EigenvalueValue::Numeric(z) => EigenvalueRepr::Numeric { re: z.re, im: z.im },
    })
}

fn witness_repr(w: &Witness) -> WitnessRepr {
    match w {
        Witness::Exact(m) => WitnessRepr::Exact(matrix_to_rows(m)),
        Witness::Numeric(v) => WitnessRepr::Numeric(v.iter().map(|z| [z.re, z.im]).collect()),
    }
}

pub fn certificate_report(c: &Certificate) -> CertificateReport {
    CertificateReport {
        eigenvalue: eigenvalue_repr(c),
        chain_id: c.chain_id,
        index: c.index,
        witness: c.witness.as_ref().map(witness_repr),
        relation: c.relation.clone(),
        vacuous: c.vacuous,
    }
}

fn rank_check_report(r: &RankCheck) -> RankCheckReport {
    RankCheckReport {
        description: r.description.clone(),
        lhs: r.lhs,
        rhs: r.rhs,
    }
}

pub fn verdict_report(v: &PropertyVerdict) -> VerdictReport {
    VerdictReport {
        property: v.property.as_str().to_string(),
        path: match v.path {
            DecisionPath::SubspaceOracle => "subspace_oracle".to_string(),
            DecisionPath::PbhChain => "pbh_chain".to_string(),
        },
        holds: v.holds,
        certificates: v.certificates.iter().map(certificate_report).collect(),
        ranks_checked: v.ranks_checked.iter().map(rank_check_report).collect(),
    }
}

pub fn synthesis_report(out: &AugmentationResult) -> SynthesisReport {
    let dec = &out.decomposition;
    SynthesisReport {
        d: out.d,
        h: dec.h,
        r1: matrix_to_rows(&out.r1),
        r2: matrix_to_rows(&out.r2),
        fbar: matrix_to_rows(&out.fbar),
        t: matrix_to_rows(&dec.t),
        a_o: matrix_to_rows(&dec.a_o),
        a_21: matrix_to_rows(&dec.a_21),
        a_u: matrix_to_rows(&dec.a_u),
        c_o: matrix_to_rows(&dec.c_o),
        fbar_o: matrix_to_rows(&dec.fbar_o),
        controller_conditions_ok: out.controller_conditions_ok,
        observer_conditions_ok: out.observer_conditions_ok,
        asymptotic_ok: out.asymptotic_ok,
    }
}

pub fn fuzz_report(r: &CrossValidationReport) -> FuzzReport {
    FuzzReport {
        trials: r.trials,
        skipped: r.skipped,
        mismatches: r
            .mismatches
            .iter()
            .map(|m| MismatchReport {
                trial: m.trial,
                property: m.property.as_str().to_string(),
                oracle: m.oracle,
                chain: m.chain,
            })
            .collect(),
        violations: r
            .violations
            .iter()
            .map(|v| ViolationReport {
                trial: v.trial,
                description: v.description.clone(),
            })
            .collect(),
        clean: r.clean(),
    }
}
