//! Standing assumptions and the comparison pipeline for two endomorphisms
//! of the same Carnot algebra.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::endomorphism::Endomorphism;
use crate::growth::{
    endomorphism_rates, filtration_equivalent, growth_filtration, multiset_equal_up_to_power, Direction,
    MultisetWitness, PowerMatch,
};
use crate::lie_algebra::{validate, Violation};
use crate::pajf::{compute_pajf, pajf_power_equivalent, PowerEquivalence, WeightOrder};
use crate::scalar::format_rational;
use crate::{Error, Result};

pub const DEFAULT_POWER_BOUND: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionReport {
    /// First basis pair `(i, j)` where brackets are not preserved.
    pub homomorphism_violation: Option<(usize, usize)>,
    pub injective: bool,
    pub nonsurjective: bool,
    pub unipotent_free: bool,
    pub carnot: bool,
    pub carnot_failing_grades: Vec<u32>,
    /// Reported only; not part of the gate.
    pub jacobi_violations: Vec<Violation>,
}

impl AssumptionReport {
    pub fn homomorphism(&self) -> bool {
        self.homomorphism_violation.is_none()
    }

    pub fn all_hold(&self) -> bool {
        self.homomorphism() && self.injective && self.nonsurjective && self.unipotent_free && self.carnot
    }

    /// Names of the failed checks.
    pub fn failures(&self) -> Vec<&'static str> {
        let checks = [
            ("homomorphism", self.homomorphism()),
            ("injective", self.injective),
            ("nonsurjective", self.nonsurjective),
            ("unipotent-free", self.unipotent_free),
            ("carnot", self.carnot),
        ];
        checks.iter().filter(|c| !c.1).map(|c| c.0).collect()
    }
}

pub fn check_standing_assumptions(e: &Endomorphism) -> AssumptionReport {
    let carnot = e.algebra().is_carnot();
    let injective = e.is_injective();
    AssumptionReport {
        homomorphism_violation: e.homomorphism_violation(),
        injective,
        nonsurjective: e.is_nonsurjective(),
        // A singular map has eigenvalue 0, off the unit circle but never
        // relevant: the gate already fails on injectivity.
        unipotent_free: e.is_unipotent_free(),
        carnot: carnot.is_carnot,
        carnot_failing_grades: carnot.failing_grades,
        jacobi_violations: validate(e.algebra().sc())
            .into_iter()
            .filter(|v| matches!(v, Violation::Jacobi { .. }))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The divergence-rate multisets differ for every rescaling.
    Divergence(MultisetWitness),
    /// The sorted growth-space fingerprints differ at this position.
    Growth { position: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Divergence(w) => write!(f, "divergence rates: {}", w),
            Witness::Growth { position } => write!(f, "growth space fingerprints differ at position {}", position + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    QuasiIsometric { r1: u32, r2: u32 },
    NotQuasiIsometric(Witness),
    Unknown,
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::QuasiIsometric { .. } => "QuasiIsometric",
            Outcome::NotQuasiIsometric(_) => "NotQuasiIsometric",
            Outcome::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub check: String,
    pub result: String,
    pub data: String,
}

fn evidence(check: &str, result: &str, data: String) -> Evidence {
    Evidence { check: check.to_string(), result: result.to_string(), data }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub evidence: Vec<Evidence>,
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn assumption_evidence(label: &str, r: &AssumptionReport, out: &mut Vec<Evidence>) {
    let hom = match r.homomorphism_violation {
        Some((i, j)) => format!("{}: brackets of basis pair ({},{}) not preserved", label, i + 1, j + 1),
        None => label.to_string(),
    };
    out.push(evidence("homomorphism", pass(r.homomorphism()), hom));
    out.push(evidence("injective", pass(r.injective), label.to_string()));
    out.push(evidence("nonsurjective", pass(r.nonsurjective), label.to_string()));
    out.push(evidence("unipotent-free", pass(r.unipotent_free), label.to_string()));
    out.push(evidence("carnot", pass(r.carnot), format!("{}: failing grades {:?}", label, r.carnot_failing_grades)));
    let jac = if r.jacobi_violations.is_empty() { "info" } else { "warning" };
    let list: Vec<String> = r.jacobi_violations.iter().map(ToString::to_string).collect();
    out.push(evidence("jacobi", jac, format!("{}: {} violation(s) {}", label, list.len(), list.join("; "))));
}

/// Runs the comparison pipeline: permuted absolute Jordan forms up to
/// powers, then divergence-rate multisets, then growth-space fingerprints.
pub fn classify(e1: &Endomorphism, e2: &Endomorphism, bound: u32) -> Result<Verdict> {
    let mut ev = Vec::new();
    let r1 = check_standing_assumptions(e1);
    let r2 = check_standing_assumptions(e2);
    assumption_evidence("first", &r1, &mut ev);
    assumption_evidence("second", &r2, &mut ev);
    let mut failed: Vec<String> = Vec::new();
    failed.extend(r1.failures().iter().map(|f| format!("first: {}", f)));
    failed.extend(r2.failures().iter().map(|f| format!("second: {}", f)));
    let (g1, g2) = (e1.algebra(), e2.algebra());
    let same = g1.dim() == g2.dim() && g1.canonical_table() == g2.canonical_table() && {
        let (mut w1, mut w2) = (g1.weights().to_vec(), g2.weights().to_vec());
        w1.sort_unstable();
        w2.sort_unstable();
        w1 == w2
    };
    ev.push(evidence("same-carnot-group", pass(same), "canonical structure constants compared".into()));
    if !same {
        failed.push("algebras differ after canonical ordering".into());
    }
    if !failed.is_empty() {
        return Err(Error::AssumptionViolation(failed.join(", ")));
    }

    let v1 = e1.tree_valence()?;
    let v2 = e2.tree_valence()?;
    ev.push(evidence("tree-valence", "info", format!("{} vs {}", v1, v2)));

    let p1 = compute_pajf(e1.matrix(), e1.weights(), WeightOrder::Ascending)?;
    let p2 = compute_pajf(e2.matrix(), e2.weights(), WeightOrder::Ascending)?;
    match pajf_power_equivalent(&p1, &p2, bound) {
        PowerEquivalence::Equivalent { r1, r2 } => {
            let det_ok = e1.determinant().abs().pow(r1 as i32) == e2.determinant().abs().pow(r2 as i32);
            ev.push(evidence("pajf", "equivalent", format!("M1^{} ~ M2^{}", r1, r2)));
            ev.push(evidence(
                "tree-valence-power",
                pass(det_ok),
                format!(
                    "|det|^{} = {} vs |det|^{} = {}",
                    r1,
                    format_rational(&e1.determinant().abs().pow(r1 as i32)),
                    r2,
                    format_rational(&e2.determinant().abs().pow(r2 as i32))
                ),
            ));
            return Ok(Verdict { outcome: Outcome::QuasiIsometric { r1, r2 }, evidence: ev });
        }
        PowerEquivalence::NotEquivalent(w) => ev.push(evidence("pajf", "not-equivalent", w.to_string())),
        PowerEquivalence::UndecidedWithinBound => {
            ev.push(evidence("pajf", "undecided", format!("no powers up to {}", bound)))
        }
    }

    let d1 = endomorphism_rates(e1, Direction::Forward)?;
    let d2 = endomorphism_rates(e2, Direction::Forward)?;
    match multiset_equal_up_to_power(&d1, &d2, bound) {
        PowerMatch::Equal { p, q } => {
            let s = if q.is_one() { format!("{}", p) } else { format!("{}/{}", p, q) };
            ev.push(evidence("divergence-multiset", "equal", format!("s = {}", s)));
        }
        PowerMatch::NotEqual(w) => {
            ev.push(evidence("divergence-multiset", "not-equal", w.to_string()));
            return Ok(Verdict { outcome: Outcome::NotQuasiIsometric(Witness::Divergence(w)), evidence: ev });
        }
        PowerMatch::Undecided => ev.push(evidence("divergence-multiset", "undecided", format!("bound {}", bound))),
    }

    let f1 = growth_filtration(e1)?;
    let f2 = growth_filtration(e2)?;
    let cmp = filtration_equivalent(&f1, &f2);
    match cmp.first_mismatch {
        Some(position) => {
            ev.push(evidence(
                "growth-filtration",
                "not-equivalent",
                format!("first mismatch at position {}", position + 1),
            ));
            Ok(Verdict { outcome: Outcome::NotQuasiIsometric(Witness::Growth { position }), evidence: ev })
        }
        None => {
            ev.push(evidence("growth-filtration", "equivalent", format!("{} spaces", f1.spaces.len())));
            Ok(Verdict { outcome: Outcome::Unknown, evidence: ev })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::{GradedAlgebra, StructureConstants};
    use crate::matrix::Matrix;
    use crate::scalar::rat;
    use alloc::vec;

    fn heisenberg() -> GradedAlgebra {
        GradedAlgebra::new(StructureConstants::from_int_triples(3, &[(0, 1, 2, 1)]).unwrap()).unwrap()
    }

    #[test]
    fn assumptions_on_heisenberg_example() {
        let m = Matrix::from_i64(&[&[3, -1, 0], &[1, 1, 0], &[1, 0, 4]]);
        let e = Endomorphism::new(heisenberg(), m).unwrap();
        assert!(check_standing_assumptions(&e).all_hold());
        let id = Endomorphism::new(heisenberg(), Matrix::identity(3)).unwrap();
        let r = check_standing_assumptions(&id);
        assert_eq!(r.failures(), vec!["nonsurjective", "unipotent-free"]);
    }

    #[test]
    fn power_and_self_comparison() {
        let m = Matrix::from_i64(&[&[3, -1, 0], &[1, 1, 0], &[1, 0, 4]]);
        let e = Endomorphism::new(heisenberg(), m).unwrap();
        let v = classify(&e, &e, DEFAULT_POWER_BOUND).unwrap();
        assert_eq!(v.outcome, Outcome::QuasiIsometric { r1: 1, r2: 1 });
        let v = classify(&e, &e.pow(2), DEFAULT_POWER_BOUND).unwrap();
        assert_eq!(v.outcome, Outcome::QuasiIsometric { r1: 2, r2: 1 });
    }

    #[test]
    fn different_algebras_are_refused() {
        let e = Endomorphism::diagonal(heisenberg(), &[rat(2), rat(2), rat(4)]).unwrap();
        let a = Endomorphism::diagonal(GradedAlgebra::abelian(3), &[rat(2), rat(2), rat(4)]).unwrap();
        assert!(matches!(classify(&e, &a, 12), Err(Error::AssumptionViolation(_))));
    }
}
