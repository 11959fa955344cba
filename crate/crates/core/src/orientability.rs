//! Rule engine for orientability of connection moduli spaces.
//!
//! The engine never proves anything new. It matches a (model, operator,
//! structure group) triple against a fixed table of sufficient conditions and
//! reports which ones fired. No matching rule means [`Status::Unknown`].
//!
//! Rules are grouped in tiers that are tried in order:
//!
//! 1. obstruction: disconnected orthogonal groups with an odd index;
//! 2. canonical orientations from complex structure, abelian or complex
//!    groups, self-adjoint splittings and the gauge-theoretic instances;
//! 3. orientability of unitary groups from vanishing odd mod-2 cohomology;
//! 4. one-step transfers along group inclusions and quotients.
//!
//! Within the first tier that fires, every firing rule is recorded.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::index::{twisted_index, OperatorDescriptor, OperatorKind};
use crate::topology::{KClassData, ManifoldModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupFamily {
    Unitary,
    SpecialUnitary,
    SpecialOrthogonal,
    Orthogonal,
    Symplectic,
    Spin,
    Abelian,
    ComplexReductive,
    Generic,
}

/// A compact (or complex reductive) Lie group, described by family and the
/// topological facts the rules need.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    pub family: GroupFamily,
    /// Family parameter; for `Abelian`, `ComplexReductive` and `Generic` this
    /// is the real dimension.
    pub m: u32,
    pub connected: bool,
    pub simply_connected: bool,
    pub dim_g: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid group descriptor: {0}")]
pub struct GroupParseError(pub String);

impl GroupDescriptor {
    pub fn unitary(m: u32) -> Self {
        let m = m.max(1);
        GroupDescriptor { family: GroupFamily::Unitary, m, connected: true, simply_connected: false, dim_g: u64::from(m) * u64::from(m) }
    }

    pub fn special_unitary(m: u32) -> Self {
        let m = m.max(1);
        GroupDescriptor {
            family: GroupFamily::SpecialUnitary,
            m,
            connected: true,
            simply_connected: true,
            dim_g: u64::from(m) * u64::from(m) - 1,
        }
    }

    pub fn special_orthogonal(m: u32) -> Self {
        let m = m.max(1);
        GroupDescriptor {
            family: GroupFamily::SpecialOrthogonal,
            m,
            connected: true,
            simply_connected: m == 1,
            dim_g: u64::from(m) * u64::from(m - 1) / 2,
        }
    }

    pub fn orthogonal(m: u32) -> Self {
        let m = m.max(1);
        GroupDescriptor {
            family: GroupFamily::Orthogonal,
            m,
            connected: false,
            simply_connected: false,
            dim_g: u64::from(m) * u64::from(m - 1) / 2,
        }
    }

    pub fn symplectic(m: u32) -> Self {
        let m = m.max(1);
        GroupDescriptor {
            family: GroupFamily::Symplectic,
            m,
            connected: true,
            simply_connected: true,
            dim_g: u64::from(m) * u64::from(2 * m + 1),
        }
    }

    pub fn spin(m: u32) -> Self {
        let m = m.max(1);
        GroupDescriptor {
            family: GroupFamily::Spin,
            m,
            // Spin(1) = Z_2 and Spin(2) = U(1).
            connected: m >= 2,
            simply_connected: m >= 3,
            dim_g: u64::from(m) * u64::from(m - 1) / 2,
        }
    }

    /// A compact abelian group of the given dimension (a torus when connected).
    pub fn abelian(dim: u32, connected: bool) -> Self {
        GroupDescriptor {
            family: GroupFamily::Abelian,
            m: dim,
            connected,
            simply_connected: connected && dim == 0,
            dim_g: u64::from(dim),
        }
    }

    /// A complex Lie group such as SL(m, C), given by real dimension.
    pub fn complex_reductive(dim: u32, connected: bool, simply_connected: bool) -> Self {
        GroupDescriptor { family: GroupFamily::ComplexReductive, m: dim, connected, simply_connected, dim_g: u64::from(dim) }
    }

    pub fn generic(dim: u32, connected: bool, simply_connected: bool) -> Self {
        GroupDescriptor {
            family: GroupFamily::Generic,
            m: dim,
            connected,
            simply_connected: connected && simply_connected,
            dim_g: u64::from(dim),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self.family {
            GroupFamily::Abelian => true,
            GroupFamily::Unitary => self.m == 1,
            GroupFamily::SpecialUnitary => self.m == 1,
            GroupFamily::SpecialOrthogonal => self.m <= 2,
            GroupFamily::Orthogonal => self.m == 1,
            GroupFamily::Spin => self.m <= 2,
            _ => false,
        }
    }

    /// O(2m) for m ≥ 1: the groups whose adjoint action reverses orientation
    /// on the Lie algebra.
    pub fn is_even_orthogonal(&self) -> bool {
        self.family == GroupFamily::Orthogonal && self.m % 2 == 0
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m;
        match self.family {
            GroupFamily::Unitary => write!(f, "U({m})"),
            GroupFamily::SpecialUnitary => write!(f, "SU({m})"),
            GroupFamily::SpecialOrthogonal => write!(f, "SO({m})"),
            GroupFamily::Orthogonal => write!(f, "O({m})"),
            GroupFamily::Symplectic => write!(f, "Sp({m})"),
            GroupFamily::Spin => write!(f, "Spin({m})"),
            GroupFamily::Abelian if self.connected => write!(f, "abelian({m})"),
            GroupFamily::Abelian => write!(f, "abelian({m}, disconnected)"),
            GroupFamily::ComplexReductive | GroupFamily::Generic => {
                let name = if self.family == GroupFamily::Generic { "generic" } else { "complex" };
                let topo = match (self.connected, self.simply_connected) {
                    (_, true) => "simply-connected",
                    (true, false) => "connected",
                    (false, _) => "disconnected",
                };
                write!(f, "{name}({m}, {topo})")
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = GroupParseError;

    /// Accepts the forms produced by `Display`: `U(2)`, `SU(3)`, `SO(3)`,
    /// `O(4)`, `Sp(1)`, `Spin(7)`, `abelian(1)`, `abelian(0, disconnected)`,
    /// `complex(8, simply-connected)`, `generic(3, connected)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupParseError(s.to_string());
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s.strip_suffix(')').ok_or_else(bad)?[open + 1..].to_string();
        let head = s[..open].trim();
        let mut args = inner.split(',').map(str::trim);
        let m: u32 = args.next().and_then(|a| a.parse().ok()).ok_or_else(bad)?;
        let topo = args.next();
        if args.next().is_some() {
            return Err(bad());
        }
        let (connected, sc) = match topo {
            None => (true, false),
            Some("connected") => (true, false),
            Some("simply-connected") => (true, true),
            Some("disconnected") => (false, false),
            Some(_) => return Err(bad()),
        };
        let classical = |g: GroupDescriptor| if topo.is_some() || m == 0 { Err(bad()) } else { Ok(g) };
        match head {
            "U" => classical(GroupDescriptor::unitary(m)),
            "SU" => classical(GroupDescriptor::special_unitary(m)),
            "SO" => classical(GroupDescriptor::special_orthogonal(m)),
            "O" => classical(GroupDescriptor::orthogonal(m)),
            "Sp" => classical(GroupDescriptor::symplectic(m)),
            "Spin" => classical(GroupDescriptor::spin(m)),
            "abelian" if !sc => Ok(GroupDescriptor::abelian(m, connected)),
            "complex" => Ok(GroupDescriptor::complex_reductive(m, connected, sc)),
            "generic" => Ok(GroupDescriptor::generic(m, connected, sc)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    NotOrientable,
    Unknown,
    Orientable,
    Canonical,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::NotOrientable => "not-orientable",
            Status::Unknown => "unknown",
            Status::Orientable => "orientable",
            Status::Canonical => "canonical",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Status::NotOrientable, Status::Unknown, Status::Orientable, Status::Canonical]
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown status {s:?}"))
    }
}

/// Extra data a canonical orientation depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Choice {
    DetDOrientation,
    LieAlgebraOrientation,
    SpincStructure,
    NonvanishingTwoForm,
}

impl Choice {
    pub fn as_str(&self) -> &'static str {
        match self {
            Choice::DetDOrientation => "orientation of det D",
            Choice::LieAlgebraOrientation => "orientation of the Lie algebra",
            Choice::SpincStructure => "Spin^c structure",
            Choice::NonvanishingTwoForm => "nonvanishing unit 2-form",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Obstruction,
    Canonical,
    Orientable,
    Transfer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rule {
    pub id: &'static str,
    pub tier: Tier,
    pub statement: &'static str,
}

pub const RULES: &[Rule] = &[
    Rule {
        id: "odd-index-even-orthogonal",
        tier: Tier::Obstruction,
        statement: "for O(2m) and odd ind D, a reflection acts by -1 on the orientation fibre at the trivial connection",
    },
    Rule {
        id: "complex-symbol",
        tier: Tier::Canonical,
        statement: "a complex structure on E with complex linear symbol orients every moduli space canonically",
    },
    Rule {
        id: "de-rham-4k+2",
        tier: Tier::Canonical,
        statement: "in dimension 4k+2 the Hodge star makes d + d* complex linear",
    },
    Rule {
        id: "dirac-complex-spinors",
        tier: Tier::Canonical,
        statement: "in dimensions 1 to 6 mod 8 the real spinor bundle carries a complex structure making the Dirac symbol complex (anti)linear",
    },
    Rule {
        id: "positive-dirac-4-mod-8",
        tier: Tier::Canonical,
        statement: "in dimensions 4 mod 8 the half spinor bundles carry complex structures making D+ complex linear",
    },
    Rule {
        id: "dolbeault",
        tier: Tier::Canonical,
        statement: "the Dolbeault operator is complex linear",
    },
    Rule {
        id: "dt-instanton",
        tier: Tier::Canonical,
        statement: "the deformation operator of DT instantons on a complex 3-fold is complex linear",
    },
    Rule {
        id: "flat-oriented-surface",
        tier: Tier::Canonical,
        statement: "on an oriented surface the flat-connection operator is d-bar, so every G has canonical orientations",
    },
    Rule {
        id: "flat-3d-two-form",
        tier: Tier::Canonical,
        statement: "a nonvanishing unit 2-form on a 3-manifold makes the flat-connection operator complex linear (canonical n-orientation)",
    },
    Rule {
        id: "self-adjoint-split",
        tier: Tier::Canonical,
        statement: "an operator of the form T + T* has orientation bundle O(T) ⊗ O(T)* which is canonically trivial",
    },
    Rule {
        id: "vafa-witten",
        tier: Tier::Canonical,
        statement: "the Vafa-Witten deformation operator splits as T + T* up to isotopy",
    },
    Rule {
        id: "abelian-group",
        tier: Tier::Canonical,
        statement: "for abelian G the twisted determinant line is a fixed tensor power, giving a canonical n-orientation",
    },
    Rule {
        id: "complex-group",
        tier: Tier::Canonical,
        statement: "for complex G the adjoint bundle is complex and the twisted operator is complex linear",
    },
    Rule {
        id: "connected-spinc",
        tier: Tier::Canonical,
        statement: "for connected G on an oriented 4-manifold, a Spin^c structure and orientations of det D and g give canonical orientations (ASD and Kapustin-Witten)",
    },
    Rule {
        id: "haydys-witten-simply-connected",
        tier: Tier::Canonical,
        statement: "on a 5-manifold with a unit 4-form, connected simply connected G and an orientation of det D give canonical orientations",
    },
    Rule {
        id: "odd-cohomology-unitary",
        tier: Tier::Orientable,
        statement: "if H^odd(X, Z_2) = 0 then K^1(X) ⊗ Z_2 = 0 and every U(m) moduli space is orientable",
    },
    Rule {
        id: "unitary-to-special-unitary",
        tier: Tier::Transfer,
        statement: "SU(m) x U(1) / Z_m = U(m): orientations for all U(m) bundles induce orientations for all SU(m) bundles",
    },
    Rule {
        id: "special-unitary-to-unitary",
        tier: Tier::Transfer,
        statement: "U(m) ⊂ SU(m+1) with complex quotient: orientations for all SU(m+1) bundles induce orientations for all U(m) bundles",
    },
    Rule {
        id: "symplectic-to-unitary",
        tier: Tier::Transfer,
        statement: "U(m) ⊂ Sp(m) with complex quotient: orientations for all Sp(m) bundles induce orientations for all U(m) bundles (not conversely)",
    },
    Rule {
        id: "so3-via-u2",
        tier: Tier::Transfer,
        statement: "U(2) / ±1 = SO(3) x U(1): orientability for all U(2) bundles gives it for SO(3) bundles when H^3(X, Z) has no 2-torsion",
    },
];

pub fn rule(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

/// One fired rule, applied to the named group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrailEntry {
    pub rule: &'static Rule,
    pub group: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub trail: Vec<TrailEntry>,
    /// Sorted, without duplicates.
    pub choices: Vec<Choice>,
    /// Free-form remarks, e.g. independence of the Spin^c choice.
    pub notes: Vec<String>,
}

impl Verdict {
    fn unknown() -> Self {
        Verdict { status: Status::Unknown, trail: Vec::new(), choices: Vec::new(), notes: Vec::new() }
    }

    pub fn rule_ids(&self) -> Vec<&'static str> {
        self.trail.iter().map(|e| e.rule.id).collect()
    }
}

/// Which orientations the standard orientation at the trivial connection
/// needs: `(det D, g)`. The fibre there is Or(det D)^{dim g} ⊗ Or(g)^{ind D}.
pub fn standard_orientation_deps(dim_g: &BigInt, ind_d: &BigInt) -> (bool, bool) {
    (dim_g.is_odd(), ind_d.is_odd())
}

fn deps_as_choices(dim_g: u64, ind_d: &BigInt) -> Vec<Choice> {
    let (det, g) = standard_orientation_deps(&BigInt::from(dim_g), ind_d);
    let mut out = Vec::new();
    if det {
        out.push(Choice::DetDOrientation);
    }
    if g {
        out.push(Choice::LieAlgebraOrientation);
    }
    out
}

/// The index of the untwisted operator, ind D.
pub fn untwisted_index(op: &OperatorDescriptor) -> BigInt {
    let one = KClassData::trivial(&op.model, 1);
    // Densities for library models are integral by construction; a failure
    // here would be a bug in the index module.
    twisted_index(op, &one, &one).expect("untwisted index of a library model")
}

struct Ctx<'a> {
    model: &'a Arc<ManifoldModel>,
    op: &'a OperatorDescriptor,
    ind_d: BigInt,
    odd_mod2_vanishes: bool,
}

fn entry(id: &str, g: &GroupDescriptor) -> TrailEntry {
    TrailEntry { rule: rule(id).expect("rule id in table"), group: g.to_string() }
}

fn finish(status: Status, trail: Vec<TrailEntry>, mut choices: Vec<Choice>, notes: Vec<String>) -> Verdict {
    choices.sort();
    choices.dedup();
    Verdict { status, trail, choices, notes }
}

fn obstruction(cx: &Ctx, g: &GroupDescriptor) -> Option<Verdict> {
    (g.is_even_orthogonal() && cx.ind_d.is_odd())
        .then(|| finish(Status::NotOrientable, vec![entry("odd-index-even-orthogonal", g)], vec![], vec![]))
}

fn canonical(cx: &Ctx, g: &GroupDescriptor) -> Option<Verdict> {
    use OperatorKind::*;
    let n = cx.model.dim;
    let kind = cx.op.kind;
    let mut trail = Vec::new();
    let mut choices = Vec::new();
    let mut notes = Vec::new();
    let mut fire = |id: &str, cs: &[Choice]| {
        trail.push(entry(id, g));
        choices.extend_from_slice(cs);
    };

    if cx.op.complex_structure {
        fire("complex-symbol", &[]);
    }
    match kind {
        DeRhamEvenOdd if n % 4 == 2 => fire("de-rham-4k+2", &[]),
        Dirac if (1..=6).contains(&(n % 8)) => fire("dirac-complex-spinors", &[]),
        PositiveDirac if n % 8 == 4 => fire("positive-dirac-4-mod-8", &[]),
        Dolbeault => fire("dolbeault", &[]),
        DtInstanton => fire("dt-instanton", &[]),
        FlatConnection2 if cx.model.orientable => fire("flat-oriented-surface", &[]),
        FlatConnection3 => fire("flat-3d-two-form", &[Choice::NonvanishingTwoForm]),
        VafaWitten => {
            fire("self-adjoint-split", &[]);
            fire("vafa-witten", &[]);
        }
        _ => {}
    }
    if g.is_abelian() {
        fire("abelian-group", &deps_as_choices(g.dim_g, &cx.ind_d));
    }
    if g.family == GroupFamily::ComplexReductive {
        fire("complex-group", &[]);
    }
    if matches!(kind, Asd4 | KapustinWitten) && g.connected {
        fire(
            "connected-spinc",
            &[Choice::DetDOrientation, Choice::LieAlgebraOrientation, Choice::SpincStructure],
        );
        let independent = g.simply_connected || g.family == GroupFamily::Unitary;
        notes.push(if independent {
            "independent of the Spin^c structure".to_string()
        } else {
            "may depend on the Spin^c structure".to_string()
        });
    }
    if kind == HaydysWitten && g.simply_connected {
        fire("haydys-witten-simply-connected", &[Choice::DetDOrientation]);
    }
    (!trail.is_empty()).then(|| finish(Status::Canonical, trail, choices, notes))
}

fn orientable(cx: &Ctx, g: &GroupDescriptor) -> Option<Verdict> {
    (g.family == GroupFamily::Unitary && cx.odd_mod2_vanishes)
        .then(|| finish(Status::Orientable, vec![entry("odd-cohomology-unitary", g)], vec![], vec![]))
}

/// Tiers 1 to 3, no transfers.
fn direct(cx: &Ctx, g: &GroupDescriptor) -> Option<Verdict> {
    obstruction(cx, g).or_else(|| canonical(cx, g)).or_else(|| orientable(cx, g))
}

fn transfer(source: Verdict, id: &str, target: &GroupDescriptor, cap: Status) -> Verdict {
    let mut trail = source.trail;
    trail.push(entry(id, target));
    finish(source.status.min(cap), trail, source.choices, source.notes)
}

fn positive(v: &Option<Verdict>) -> bool {
    v.as_ref().is_some_and(|v| v.status >= Status::Orientable)
}

/// Tier 4 for unitary groups: one step from SU(m+1) and from Sp(m).
fn unitary_transfers(cx: &Ctx, m: u32) -> Option<Verdict> {
    let target = GroupDescriptor::unitary(m);
    let mut fired: Vec<Verdict> = Vec::new();
    let su = direct(cx, &GroupDescriptor::special_unitary(m + 1));
    if positive(&su) {
        fired.push(transfer(su.unwrap(), "special-unitary-to-unitary", &target, Status::Canonical));
    }
    let sp = direct(cx, &GroupDescriptor::symplectic(m));
    if positive(&sp) {
        fired.push(transfer(sp.unwrap(), "symplectic-to-unitary", &target, Status::Canonical));
    }
    merge(fired)
}

/// Combines independent derivations: best status wins, trails concatenate.
/// Choices are those of the best derivation.
fn merge(fired: Vec<Verdict>) -> Option<Verdict> {
    let best = fired.iter().map(|v| v.status).max()?;
    let mut out = Verdict::unknown();
    out.status = best;
    for v in fired {
        if v.status == best && out.trail.is_empty() {
            out.choices = v.choices.clone();
            out.notes = v.notes.clone();
        }
        out.trail.extend(v.trail);
    }
    Some(out)
}

fn with_transfers(cx: &Ctx, g: &GroupDescriptor) -> Verdict {
    if let Some(v) = direct(cx, g) {
        return v;
    }
    let found = match g.family {
        GroupFamily::SpecialUnitary => {
            let u = GroupDescriptor::unitary(g.m);
            direct(cx, &u)
                .filter(|v| v.status >= Status::Orientable)
                .map(|v| transfer(v, "unitary-to-special-unitary", g, Status::Canonical))
        }
        GroupFamily::Unitary => unitary_transfers(cx, g.m),
        GroupFamily::SpecialOrthogonal if g.m == 3 => {
            // Library cohomology is torsion free, so H^3(X, Z) has no 2-torsion.
            let u2 = GroupDescriptor::unitary(2);
            let source = direct(cx, &u2).filter(|v| v.status >= Status::Orientable).or_else(|| unitary_transfers(cx, 2));
            source.map(|v| {
                let mut v = transfer(v, "so3-via-u2", g, Status::Orientable);
                v.choices.clear();
                v.notes.clear();
                v
            })
        }
        _ => None,
    };
    found.unwrap_or_else(Verdict::unknown)
}

/// Orientability verdict for principal `group`-bundles over the operator's model.
pub fn evaluate(op: &OperatorDescriptor, group: &GroupDescriptor) -> Verdict {
    let model = &op.model;
    let cx = Ctx {
        model,
        op,
        ind_d: untwisted_index(op),
        odd_mod2_vanishes: crate::topology::betti_profile(model).odd_mod2_vanishes,
    };
    with_transfers(&cx, group)
}
