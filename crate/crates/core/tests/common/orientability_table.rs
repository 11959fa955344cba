//! Golden orientability scenarios shared by the unit-level suite and the
//! acceptance run. Expected values were worked out by hand from the rule
//! statements, not by running the engine.

use std::sync::Arc;

use orientcalc::index::{OperatorDescriptor, OperatorKind};
use orientcalc::orientability::{evaluate, Choice, GroupDescriptor, Status};
use orientcalc::topology::ManifoldModel;

pub struct Scenario {
    pub model: &'static str,
    pub op: OperatorKind,
    pub complex_flag: bool,
    pub group: &'static str,
    pub status: Status,
    /// (rule id, group it was applied to), in firing order.
    pub trail: &'static [(&'static str, &'static str)],
    pub choices: &'static [Choice],
}

use Choice::*;
use OperatorKind::*;

pub const SCENARIOS: &[Scenario] = &[
    Scenario { model: "CP^2", op: SignatureType, complex_flag: false, group: "U(1)", status: Status::Canonical,
        trail: &[("abelian-group", "U(1)")], choices: &[DetDOrientation] },
    Scenario { model: "S^2", op: Dolbeault, complex_flag: false, group: "SU(2)", status: Status::Canonical,
        trail: &[("dolbeault", "SU(2)")], choices: &[] },
    Scenario { model: "T^2", op: DeRhamEvenOdd, complex_flag: false, group: "Sp(2)", status: Status::Canonical,
        trail: &[("de-rham-4k+2", "Sp(2)")], choices: &[] },
    Scenario { model: "S^3", op: Dirac, complex_flag: false, group: "SO(5)", status: Status::Canonical,
        trail: &[("dirac-complex-spinors", "SO(5)")], choices: &[] },
    Scenario { model: "S^4", op: PositiveDirac, complex_flag: false, group: "Spin(7)", status: Status::Canonical,
        trail: &[("positive-dirac-4-mod-8", "Spin(7)")], choices: &[] },
    Scenario { model: "S^2 x S^2", op: VafaWitten, complex_flag: false, group: "O(4)", status: Status::Canonical,
        trail: &[("self-adjoint-split", "O(4)"), ("vafa-witten", "O(4)")], choices: &[] },
    Scenario { model: "S^4", op: Asd4, complex_flag: false, group: "O(2)", status: Status::NotOrientable,
        trail: &[("odd-index-even-orthogonal", "O(2)")], choices: &[] },
    Scenario { model: "CP^2", op: DeRhamEvenOdd, complex_flag: false, group: "O(4)", status: Status::NotOrientable,
        trail: &[("odd-index-even-orthogonal", "O(4)")], choices: &[] },
    Scenario { model: "S^4 x S^4", op: Dirac, complex_flag: false, group: "U(2)", status: Status::Orientable,
        trail: &[("odd-cohomology-unitary", "U(2)")], choices: &[] },
    Scenario { model: "CP^2", op: SignatureType, complex_flag: false, group: "U(3)", status: Status::Orientable,
        trail: &[("odd-cohomology-unitary", "U(3)")], choices: &[] },
    Scenario { model: "S^4 x S^4", op: Dirac, complex_flag: false, group: "SU(2)", status: Status::Orientable,
        trail: &[("odd-cohomology-unitary", "U(2)"), ("unitary-to-special-unitary", "SU(2)")], choices: &[] },
    Scenario { model: "CP^2", op: SignatureType, complex_flag: false, group: "SO(3)", status: Status::Orientable,
        trail: &[("odd-cohomology-unitary", "U(2)"), ("so3-via-u2", "SO(3)")], choices: &[] },
    Scenario { model: "S^5", op: HaydysWitten, complex_flag: false, group: "U(2)", status: Status::Canonical,
        trail: &[
            ("haydys-witten-simply-connected", "SU(3)"),
            ("special-unitary-to-unitary", "U(2)"),
            ("haydys-witten-simply-connected", "Sp(2)"),
            ("symplectic-to-unitary", "U(2)"),
        ],
        choices: &[DetDOrientation] },
    Scenario { model: "S^5", op: HaydysWitten, complex_flag: false, group: "SO(3)", status: Status::Orientable,
        trail: &[
            ("haydys-witten-simply-connected", "SU(3)"),
            ("special-unitary-to-unitary", "U(2)"),
            ("haydys-witten-simply-connected", "Sp(2)"),
            ("symplectic-to-unitary", "U(2)"),
            ("so3-via-u2", "SO(3)"),
        ],
        choices: &[] },
    Scenario { model: "S^8", op: PositiveDirac, complex_flag: false, group: "U(2)", status: Status::Orientable,
        trail: &[("odd-cohomology-unitary", "U(2)")], choices: &[] },
    // The unitary-symplectic transfer is one way only.
    Scenario { model: "S^8", op: PositiveDirac, complex_flag: false, group: "Sp(2)", status: Status::Unknown,
        trail: &[], choices: &[] },
    Scenario { model: "T^2", op: FlatConnection2, complex_flag: false, group: "Spin(5)", status: Status::Canonical,
        trail: &[("flat-oriented-surface", "Spin(5)")], choices: &[] },
    Scenario { model: "S^3", op: FlatConnection3, complex_flag: false, group: "O(2)", status: Status::Canonical,
        trail: &[("flat-3d-two-form", "O(2)")], choices: &[NonvanishingTwoForm] },
    Scenario { model: "CP^2", op: Asd4, complex_flag: false, group: "SU(2)", status: Status::Canonical,
        trail: &[("connected-spinc", "SU(2)")], choices: &[DetDOrientation, LieAlgebraOrientation, SpincStructure] },
    Scenario { model: "CP^3", op: DtInstanton, complex_flag: false, group: "generic(5, disconnected)", status: Status::Canonical,
        trail: &[("dt-instanton", "generic(5, disconnected)")], choices: &[] },
    Scenario { model: "CP^2", op: SignatureType, complex_flag: false, group: "complex(6, simply-connected)", status: Status::Canonical,
        trail: &[("complex-group", "complex(6, simply-connected)")], choices: &[] },
    Scenario { model: "CP^2", op: Asd4, complex_flag: true, group: "O(2)", status: Status::Canonical,
        trail: &[("complex-symbol", "O(2)")], choices: &[] },
    Scenario { model: "CP^2", op: Asd4, complex_flag: false, group: "O(2)", status: Status::Unknown,
        trail: &[], choices: &[] },
];

/// Runs one scenario; `Err` carries a human-readable mismatch.
pub fn check(s: &Scenario) -> Result<(), String> {
    let m = Arc::new(ManifoldModel::parse(s.model).map_err(|e| e.to_string())?);
    let op = OperatorDescriptor::with_structure(s.op, &m, s.complex_flag).map_err(|e| e.to_string())?;
    let g: GroupDescriptor = s.group.parse().map_err(|e: orientcalc::orientability::GroupParseError| e.to_string())?;
    let v = evaluate(&op, &g);
    let trail: Vec<(&str, String)> = v.trail.iter().map(|e| (e.rule.id, e.group.clone())).collect();
    let want: Vec<(&str, String)> = s.trail.iter().map(|(r, g)| (*r, g.to_string())).collect();
    if v.status != s.status || trail != want || v.choices != s.choices {
        return Err(format!(
            "({}, {}, {}): got {} {:?} {:?}, want {} {:?} {:?}",
            s.model, s.op, s.group, v.status, trail, v.choices, s.status, want, s.choices
        ));
    }
    Ok(())
}
