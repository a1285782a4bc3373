//! JSON reports. Every report deserializes back into the same type, which
//! is how the published schema is checked.

use std::collections::BTreeMap;

use nilqi_core::classifier::{AssumptionReport, Outcome, Verdict};
use nilqi_core::growth::{Fingerprint, GrowthFiltration, GrowthRate, RateEntry};
use nilqi_core::jordan::{EigenKind, EigenRoot, RealJordanData};
use nilqi_core::oracle::RateCheck;
use nilqi_core::pajf::{PermutedAbsoluteJordanForm, WeightOrder};
use nilqi_core::scalar::format_rational;
use nilqi_core::AlgebraicReal;
use serde::{Deserialize, Serialize};

use crate::schema::RationalDoc;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum Report {
    Validate(ValidateReport),
    Weights(WeightsReport),
    Jordan(JordanReport),
    Pajf(PajfReport),
    Rates(RatesReport),
    Growth(GrowthReport),
    Compare(CompareReport),
    Oracle(OracleReport),
}

/// A real algebraic number: a root of `min_poly` (integer coefficients,
/// constant term first) isolated in `interval`. Rationals have a linear
/// `min_poly` and a degenerate interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraicDoc {
    pub approx: f64,
    pub min_poly: Vec<String>,
    pub interval: [String; 2],
}

impl From<&AlgebraicReal> for AlgebraicDoc {
    fn from(a: &AlgebraicReal) -> Self {
        let (lo, hi) = a.interval();
        AlgebraicDoc {
            approx: a.to_f64(),
            min_poly: a.min_poly().iter().map(ToString::to_string).collect(),
            interval: [format_rational(&lo), format_rational(&hi)],
        }
    }
}

/// Exact text for rationals, an approximation with its defining polynomial
/// otherwise.
pub fn algebraic_text(a: &AlgebraicReal) -> String {
    match a.as_rational() {
        Some(q) => format_rational(q),
        None => a.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationDoc {
    pub kind: String,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssumptionDoc {
    pub homomorphism: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homomorphism_violation: Option<[usize; 2]>,
    pub injective: bool,
    pub nonsurjective: bool,
    pub unipotent_free: bool,
    pub carnot: bool,
    pub weakly_preserves_grading: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree_valence: Option<String>,
    pub failures: Vec<String>,
}

impl AssumptionDoc {
    pub fn new(r: &AssumptionReport, weakly_preserves_grading: bool, tree_valence: Option<String>) -> Self {
        AssumptionDoc {
            homomorphism: r.homomorphism(),
            homomorphism_violation: r.homomorphism_violation.map(|(i, j)| [i + 1, j + 1]),
            injective: r.injective,
            nonsurjective: r.nonsurjective,
            unipotent_free: r.unipotent_free,
            carnot: r.carnot,
            weakly_preserves_grading,
            tree_valence,
            failures: r.failures().into_iter().map(String::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateReport {
    pub algebra: String,
    pub dim: usize,
    pub valid: bool,
    pub warnings: Vec<String>,
    pub violations: Vec<ViolationDoc>,
    pub errors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    pub endomorphisms: BTreeMap<String, EndomorphismCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum EndomorphismCheck {
    Checked(AssumptionDoc),
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsReport {
    pub algebra: String,
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub weights: Vec<u32>,
    pub grade_dims: Vec<usize>,
    pub nilpotency_class: usize,
    pub carnot: bool,
    pub carnot_failing_grades: Vec<u32>,
    /// New basis order sorting by weight (1-based original indices).
    pub weight_sorted_order: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum EigenDoc {
    Real { value: AlgebraicDoc },
    ComplexPair { re: AlgebraicDoc, im: AlgebraicDoc },
}

impl From<&EigenKind> for EigenDoc {
    fn from(k: &EigenKind) -> Self {
        match k {
            EigenKind::Real(v) => EigenDoc::Real { value: v.into() },
            EigenKind::ComplexPair { a, b } => EigenDoc::ComplexPair { re: a.into(), im: b.into() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDoc {
    pub eigenvalue: EigenDoc,
    pub modulus: AlgebraicDoc,
}

impl From<&EigenRoot> for RootDoc {
    fn from(r: &EigenRoot) -> Self {
        RootDoc { eigenvalue: (&r.kind).into(), modulus: (&r.modulus).into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub factor: String,
    pub block_sizes: Vec<usize>,
    pub roots: Vec<RootDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub eigenvalue: EigenDoc,
    pub modulus: AlgebraicDoc,
    pub size: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsoluteBlockDoc {
    pub modulus: AlgebraicDoc,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JordanReport {
    pub algebra: String,
    pub endomorphism: String,
    pub char_poly: String,
    pub components: Vec<ComponentDoc>,
    pub blocks: Vec<BlockDoc>,
    pub absolute_form: Vec<AbsoluteBlockDoc>,
}

impl JordanReport {
    pub fn new(algebra: &str, endomorphism: &str, data: &RealJordanData, absolute: &[(AlgebraicReal, usize)]) -> Self {
        JordanReport {
            algebra: algebra.to_string(),
            endomorphism: endomorphism.to_string(),
            char_poly: data.char_poly.to_string(),
            components: data
                .components
                .iter()
                .map(|c| ComponentDoc {
                    factor: c.factor.to_string(),
                    block_sizes: c.block_sizes.clone(),
                    roots: c.roots.iter().map(RootDoc::from).collect(),
                })
                .collect(),
            blocks: data
                .blocks
                .iter()
                .map(|b| BlockDoc {
                    eigenvalue: (&b.kind).into(),
                    modulus: (&b.modulus).into(),
                    size: b.size,
                    dimension: b.dimension(),
                })
                .collect(),
            absolute_form: absolute.iter().map(|(m, s)| AbsoluteBlockDoc { modulus: m.into(), size: *s }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedBlockDoc {
    pub modulus: AlgebraicDoc,
    pub size: usize,
    pub weights: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotDoc {
    /// 1-based index into `blocks`.
    pub block: usize,
    /// 0 for the chain generator.
    pub position: usize,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PajfReport {
    pub algebra: String,
    pub endomorphism: String,
    pub weight_order: String,
    pub blocks: Vec<WeightedBlockDoc>,
    pub slots: Vec<SlotDoc>,
    /// `sigma[i]` is the output position (1-based) of canonical slot `i`.
    pub sigma: Vec<usize>,
    pub slot_weights: Vec<u32>,
    pub matrix: Vec<Vec<String>>,
}

pub fn order_name(o: WeightOrder) -> &'static str {
    match o {
        WeightOrder::Ascending => "asc",
        WeightOrder::Descending => "desc",
    }
}

impl PajfReport {
    pub fn new(algebra: &str, endomorphism: &str, p: &PermutedAbsoluteJordanForm) -> Self {
        PajfReport {
            algebra: algebra.to_string(),
            endomorphism: endomorphism.to_string(),
            weight_order: order_name(p.order).to_string(),
            blocks: p
                .blocks
                .iter()
                .map(|b| WeightedBlockDoc { modulus: (&b.modulus).into(), size: b.size, weights: b.weights.clone() })
                .collect(),
            slots: p
                .slots
                .iter()
                .map(|s| SlotDoc { block: s.block + 1, position: s.position, weight: s.weight })
                .collect(),
            sigma: p.sigma.iter().map(|s| s + 1).collect(),
            slot_weights: p.slot_weights(),
            matrix: p.matrix().iter().map(|row| row.iter().map(algebraic_text).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateDoc {
    pub lam: AlgebraicDoc,
    pub k: u32,
    pub w: u32,
    pub display: String,
    pub base: f64,
    pub degree: f64,
}

impl From<&GrowthRate> for RateDoc {
    fn from(r: &GrowthRate) -> Self {
        RateDoc {
            lam: (&r.lam).into(),
            k: r.k,
            w: r.w,
            display: r.to_string(),
            base: r.base_f64(),
            degree: r.degree_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateEntryDoc {
    pub component: usize,
    pub root: usize,
    pub chain: usize,
    pub position: usize,
    pub conjugate: bool,
    /// Coordinates as polynomials in the eigenvalue `x`, reduced modulo
    /// `factor`.
    pub vector: Vec<String>,
    pub factor: String,
    pub rate: RateDoc,
}

impl RateEntryDoc {
    pub fn new(e: &RateEntry, vector: Vec<String>, factor: String) -> Self {
        RateEntryDoc {
            component: e.component + 1,
            root: e.root + 1,
            chain: e.chain + 1,
            position: e.position,
            conjugate: e.conjugate,
            vector,
            factor,
            rate: (&e.rate).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesReport {
    pub algebra: String,
    pub endomorphism: String,
    pub direction: String,
    pub entries: Vec<RateEntryDoc>,
    pub sorted: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FingerprintDoc {
    pub dim: usize,
    pub graded_dims: Vec<usize>,
    pub lcs_dims: Vec<usize>,
    pub center_dim: usize,
    pub abelianization_dim: usize,
}

impl From<&Fingerprint> for FingerprintDoc {
    fn from(f: &Fingerprint) -> Self {
        FingerprintDoc {
            dim: f.dim,
            graded_dims: f.graded_dims.clone(),
            lcs_dims: f.lcs_dims.clone(),
            center_dim: f.center_dim,
            abelianization_dim: f.abelianization_dim,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub threshold: RateDoc,
    pub dim: usize,
    /// 1-based indices into `chain_vectors`.
    pub members: Vec<usize>,
    pub basis: Vec<Vec<RationalDoc>>,
    pub fingerprint: FingerprintDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainVectorDoc {
    pub component: usize,
    pub chain: usize,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthReport {
    pub algebra: String,
    pub endomorphism: String,
    pub chain_vectors: Vec<ChainVectorDoc>,
    pub spaces: Vec<SpaceDoc>,
}

impl GrowthReport {
    pub fn new(algebra: &str, endomorphism: &str, f: &GrowthFiltration) -> Self {
        GrowthReport {
            algebra: algebra.to_string(),
            endomorphism: endomorphism.to_string(),
            chain_vectors: f
                .chain_vectors
                .iter()
                .map(|c| ChainVectorDoc { component: c.component + 1, chain: c.chain + 1, position: c.position })
                .collect(),
            spaces: f
                .spaces
                .iter()
                .map(|s| SpaceDoc {
                    threshold: (&s.threshold).into(),
                    dim: s.dim(),
                    members: s.members.iter().map(|m| m + 1).collect(),
                    basis: s.basis.iter().map(|v| v.iter().cloned().map(RationalDoc).collect()).collect(),
                    fingerprint: (&s.fingerprint).into(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceDoc {
    pub check: String,
    pub result: String,
    pub data: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Operand {
    pub file: String,
    pub endomorphism: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareReport {
    pub first: Operand,
    pub second: Operand,
    pub power_bound: u32,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub powers: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub evidence: Vec<EvidenceDoc>,
}

impl CompareReport {
    pub fn new(first: Operand, second: Operand, power_bound: u32, v: &Verdict) -> Self {
        let (powers, witness) = match &v.outcome {
            Outcome::QuasiIsometric { r1, r2 } => (Some([*r1, *r2]), None),
            Outcome::NotQuasiIsometric(w) => (None, Some(w.to_string())),
            Outcome::Unknown => (None, None),
        };
        CompareReport {
            first,
            second,
            power_bound,
            outcome: v.outcome.kind().to_string(),
            powers,
            witness,
            evidence: v
                .evidence
                .iter()
                .map(|e| EvidenceDoc { check: e.check.clone(), result: e.result.clone(), data: e.data.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheckDoc {
    /// 1-based index into the rate multiset.
    pub vector: usize,
    pub coordinates: Vec<f64>,
    pub symbolic: RateDoc,
    pub base_est: f64,
    pub polydeg_est: f64,
    pub r2: f64,
    pub t_range: [u32; 2],
    pub base_rel_err: f64,
    pub degree_err: f64,
    pub pass: bool,
}

impl From<&RateCheck> for OracleCheckDoc {
    fn from(c: &RateCheck) -> Self {
        OracleCheckDoc {
            vector: c.entry + 1,
            coordinates: c.vector.clone(),
            symbolic: (&c.symbolic).into(),
            base_est: c.estimate.base_est,
            polydeg_est: c.estimate.polydeg_est,
            r2: c.estimate.r2,
            t_range: [c.estimate.t_range.0, c.estimate.t_range.1],
            base_rel_err: c.base_rel_err,
            degree_err: c.degree_err,
            pass: c.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleReport {
    pub algebra: String,
    pub endomorphism: String,
    pub direction: String,
    pub grid: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub base_rel_tol: f64,
    pub degree_abs_tol: f64,
    pub all_pass: bool,
    pub checks: Vec<OracleCheckDoc>,
}
