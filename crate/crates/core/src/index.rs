//! Euler forms χ(α, β) = ind of an operator twisted by α ⊗ β̄, from index densities.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::fgab::{FgAbGroup, FgabError, GroupElement, IntMatrix};
use crate::topology::{CohClass, KClassData, ManifoldModel, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("inadmissible operator: {0}")]
    Admissibility(String),
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Fgab(#[from] FgabError),
}

impl IndexError {
    pub fn name(&self) -> &'static str {
        match self {
            IndexError::Admissibility(_) => "AdmissibilityError",
            IndexError::Internal(_) => "InternalConsistencyError",
            IndexError::Shape(_) => "ShapeError",
            IndexError::Topology(e) => e.name(),
            IndexError::Fgab(e) => e.name(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    DeRhamEvenOdd,
    SignatureType,
    Dirac,
    PositiveDirac,
    Dolbeault,
    Asd4,
    FlatConnection2,
    FlatConnection3,
    VafaWitten,
    KapustinWitten,
    HaydysWitten,
    DtInstanton,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 12] = [
        OperatorKind::DeRhamEvenOdd,
        OperatorKind::SignatureType,
        OperatorKind::Dirac,
        OperatorKind::PositiveDirac,
        OperatorKind::Dolbeault,
        OperatorKind::Asd4,
        OperatorKind::FlatConnection2,
        OperatorKind::FlatConnection3,
        OperatorKind::VafaWitten,
        OperatorKind::KapustinWitten,
        OperatorKind::HaydysWitten,
        OperatorKind::DtInstanton,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorKind::DeRhamEvenOdd => "de-rham",
            OperatorKind::SignatureType => "signature",
            OperatorKind::Dirac => "dirac",
            OperatorKind::PositiveDirac => "positive-dirac",
            OperatorKind::Dolbeault => "dolbeault",
            OperatorKind::Asd4 => "asd",
            OperatorKind::FlatConnection2 => "flat-2d",
            OperatorKind::FlatConnection3 => "flat-3d",
            OperatorKind::VafaWitten => "vafa-witten",
            OperatorKind::KapustinWitten => "kapustin-witten",
            OperatorKind::HaydysWitten => "haydys-witten",
            OperatorKind::DtInstanton => "dt-instanton",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorKind {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OperatorKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| IndexError::Admissibility(format!("unknown operator {s:?}")))
    }
}

/// An elliptic operator on a model manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDescriptor {
    pub kind: OperatorKind,
    pub model: Arc<ManifoldModel>,
    /// Extra structure some operators carry: an almost complex structure for
    /// `Asd4`, a flag (CR) structure for `HaydysWitten`.
    pub complex_structure: bool,
}

impl OperatorDescriptor {
    pub fn new(kind: OperatorKind, model: &Arc<ManifoldModel>) -> Result<Self, IndexError> {
        Self::with_structure(kind, model, false)
    }

    pub fn with_structure(kind: OperatorKind, model: &Arc<ManifoldModel>, complex_structure: bool) -> Result<Self, IndexError> {
        if let Some(why) = inadmissible(kind, model) {
            return Err(IndexError::Admissibility(format!("{kind} on {}: {why}", model.name)));
        }
        Ok(OperatorDescriptor { kind, model: model.clone(), complex_structure })
    }
}

fn inadmissible(kind: OperatorKind, m: &ManifoldModel) -> Option<&'static str> {
    use OperatorKind::*;
    let n = m.dim;
    match kind {
        DeRhamEvenOdd => None,
        SignatureType if !m.orientable || n % 4 != 0 => Some("needs an oriented model of dimension 4k"),
        Dirac if !m.spin => Some("needs a spin model"),
        PositiveDirac if !m.spin || n % 4 != 0 => Some("needs a spin model of dimension 4k"),
        Dolbeault if !m.complex => Some("needs an almost complex model"),
        Asd4 | VafaWitten | KapustinWitten if n != 4 || !m.orientable => Some("needs an oriented 4-manifold"),
        FlatConnection2 if n != 2 => Some("needs a surface"),
        FlatConnection3 if n != 3 => Some("needs a 3-manifold"),
        HaydysWitten if n != 5 => Some("needs a 5-manifold"),
        DtInstanton if n != 6 || !m.complex => Some("needs an almost complex 6-manifold"),
        _ => None,
    }
}

/// Conjugate bundle on the Chern character level: the degree-2k part picks up (−1)^k.
pub fn conjugate(ch: &CohClass) -> CohClass {
    ch.map_parts(|d| if d % 4 == 2 { -BigRational::one() } else { BigRational::one() })
}

/// Adams-type rescaling ψ: the degree-2k part is multiplied by 2^k.
fn psi2(ch: &CohClass) -> CohClass {
    ch.map_parts(|d| BigRational::from_integer(BigInt::one() << (d / 2)))
}

fn same_model(a: &ManifoldModel, b: &ManifoldModel) -> bool {
    a.ring == b.ring && a.name == b.name
}

/// χ(α, β): index of the operator twisted by α ⊗ β̄.
pub fn twisted_index(op: &OperatorDescriptor, a: &KClassData, b: &KClassData) -> Result<BigInt, IndexError> {
    for w in [a, b] {
        if !same_model(&w.model, &op.model) {
            return Err(IndexError::Shape(format!(
                "witness on {} used with an operator on {}",
                w.model.name, op.model.name
            )));
        }
    }
    let m = &op.model;
    let twist = &a.chern_character()? * &conjugate(&b.chern_character()?);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    use OperatorKind::*;
    let value = match op.kind {
        DeRhamEvenOdd | FlatConnection2 | FlatConnection3 | KapustinWitten => (&twist * &m.euler).integrate(),
        SignatureType | Asd4 => {
            ((&twist * &m.euler).integrate() + (&psi2(&twist) * &m.l_class()).integrate()) * &half
        }
        PositiveDirac => (&twist * &m.a_hat()).integrate(),
        Dolbeault | DtInstanton => {
            let td = m.todd().ok_or_else(|| IndexError::Admissibility("no Todd class".into()))?;
            (&(&twist + &conjugate(&twist)) * &td).integrate()
        }
        // Self-adjoint: the complex index vanishes.
        Dirac | VafaWitten | HaydysWitten => BigRational::zero(),
    };
    if !value.is_integer() {
        return Err(IndexError::Internal(format!(
            "{} index on {} came out as {value}",
            op.kind, m.name
        )));
    }
    Ok(value.to_integer())
}

/// Symmetric integer form on the free part of K^0(X); zero on torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerForm {
    group: FgAbGroup,
    matrix: IntMatrix,
}

impl EulerForm {
    pub fn new(group: FgAbGroup, matrix: IntMatrix) -> Result<Self, IndexError> {
        let r = group.free_rank();
        if matrix.rows() != r || matrix.cols() != r {
            return Err(IndexError::Shape(format!(
                "form is {}x{} but free rank is {r}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_symmetric() {
            return Err(IndexError::Shape("Euler form must be symmetric".into()));
        }
        Ok(EulerForm { group, matrix })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn entry(&self, h: usize, i: usize) -> &BigInt {
        self.matrix.get(h, i)
    }

    /// χ(α, β) = Σ a_h χ_hi b_i.
    pub fn pair(&self, alpha: &GroupElement, beta: &GroupElement) -> Result<BigInt, IndexError> {
        self.group.check(alpha)?;
        self.group.check(beta)?;
        let r = self.group.free_rank();
        let mut s = BigInt::zero();
        for h in 0..r {
            if alpha.free_coords[h].is_zero() {
                continue;
            }
            for i in 0..r {
                s += &alpha.free_coords[h] * self.matrix.get(h, i) * &beta.free_coords[i];
            }
        }
        Ok(s)
    }
}

/// Euler form on Z^r from one witness per free generator.
pub fn euler_form(op: &OperatorDescriptor, witnesses: &[KClassData]) -> Result<EulerForm, IndexError> {
    euler_form_on(op, FgAbGroup::free(witnesses.len()), witnesses)
}

/// Euler form on `group`, whose free generators are realized by `witnesses`.
pub fn euler_form_on(op: &OperatorDescriptor, group: FgAbGroup, witnesses: &[KClassData]) -> Result<EulerForm, IndexError> {
    let r = group.free_rank();
    if witnesses.len() != r {
        return Err(IndexError::Shape(format!("{} witnesses for free rank {r}", witnesses.len())));
    }
    let mut entries = Vec::with_capacity(r * r);
    for a in witnesses {
        for b in witnesses {
            entries.push(twisted_index(op, a, b)?);
        }
    }
    let matrix = IntMatrix::new(r, r, entries)?;
    if !matrix.is_symmetric() {
        return Err(IndexError::Internal(format!("{} density produced an asymmetric form", op.kind)));
    }
    EulerForm::new(group, matrix)
}

/// ind_P = χ(α, α).
pub fn ind_p(form: &EulerForm, alpha: &GroupElement) -> Result<BigInt, IndexError> {
    form.pair(alpha, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(s: &str) -> Arc<ManifoldModel> {
        Arc::new(ManifoldModel::parse(s).unwrap())
    }

    #[test]
    fn de_rham_on_s2_scales_with_ranks() {
        let m = model("S^2");
        let op = OperatorDescriptor::new(OperatorKind::DeRhamEvenOdd, &m).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let x = twisted_index(&op, &KClassData::trivial(&m, a), &KClassData::trivial(&m, b)).unwrap();
                assert_eq!(x, BigInt::from(2 * a * b));
            }
        }
    }

    #[test]
    fn admissibility() {
        assert!(OperatorDescriptor::new(OperatorKind::Dirac, &model("CP^2")).is_err());
        assert!(OperatorDescriptor::new(OperatorKind::PositiveDirac, &model("S^2")).is_err());
        assert!(OperatorDescriptor::new(OperatorKind::Dolbeault, &model("S^4")).is_err());
        assert!(OperatorDescriptor::new(OperatorKind::Asd4, &model("S^2 x S^2")).is_ok());
        assert!(OperatorDescriptor::new(OperatorKind::HaydysWitten, &model("S^4 x S^1")).is_ok());
        assert!(OperatorDescriptor::new(OperatorKind::DtInstanton, &model("CP^3")).is_ok());
        assert!(OperatorDescriptor::new(OperatorKind::DtInstanton, &model("S^6")).is_err());
    }

    #[test]
    fn ind_p_examples() {
        let f = EulerForm::new(FgAbGroup::free(1), IntMatrix::from_i64(1, 1, &[2]).unwrap()).unwrap();
        let g = f.group().clone();
        assert!(ind_p(&f, &g.zero()).unwrap().is_zero());
        assert_eq!(ind_p(&f, &g.from_i64(&[3], &[], &[]).unwrap()).unwrap(), BigInt::from(18));
        let f = EulerForm::new(FgAbGroup::free(2), IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]).unwrap()).unwrap();
        let g = f.group().clone();
        assert_eq!(ind_p(&f, &g.from_i64(&[1, 1], &[], &[]).unwrap()).unwrap(), BigInt::from(2));
        assert!(ind_p(&f, &FgAbGroup::free(1).zero()).is_err());
    }

    #[test]
    fn asymmetric_form_rejected() {
        let m = IntMatrix::from_i64(2, 2, &[0, 1, 2, 0]).unwrap();
        assert!(EulerForm::new(FgAbGroup::free(2), m).is_err());
    }

    #[test]
    fn dolbeault_is_symmetric_on_cp1() {
        let m = model("CP^1");
        let op = OperatorDescriptor::new(OperatorKind::Dolbeault, &m).unwrap();
        let o1 = KClassData::new(&m, 1.into(), vec![m.generator("x").unwrap()]).unwrap();
        let o = KClassData::trivial(&m, 1);
        let f = euler_form(&op, &[o1, o]).unwrap();
        assert!(f.matrix().is_symmetric());
    }

    #[test]
    fn operator_names_round_trip() {
        for k in OperatorKind::ALL {
            assert_eq!(k.as_str().parse::<OperatorKind>().unwrap(), k);
        }
    }
}
