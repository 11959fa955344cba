//! Front end for `orient-calc`: config parsing, job dispatch and reports.
//!
//! Exit codes: 0 on success, 1 on domain errors (reported with the library's
//! error name), 2 on parse errors (reported with line and column).

pub mod config;
pub mod report;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::fgab::{snf_decompose, FgAbGroup, GroupElement, IntMatrix};
use crate::index::{euler_form, OperatorDescriptor, OperatorKind};
use crate::omega::{OmegaElement, OmegaGroup, Sign};
use crate::orientability::{evaluate, standard_orientation_deps, untwisted_index, GroupDescriptor};
use crate::skeleton;
use crate::topology::{parse_class, CohClass, KClassData, ManifoldModel, TopologyError};

pub use config::{Config, ConfigError};
pub use report::{Format, MapBuilder, Node, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JobKind {
    Group,
    EulerForm,
    Omega,
    Orientability,
    Skeleton,
}

impl JobKind {
    pub const ALL: [JobKind; 5] = [JobKind::Group, JobKind::EulerForm, JobKind::Omega, JobKind::Orientability, JobKind::Skeleton];

    pub fn as_str(&self) -> &'static str {
        match self {
            JobKind::Group => "group",
            JobKind::EulerForm => "euler-form",
            JobKind::Omega => "omega",
            JobKind::Orientability => "orientability",
            JobKind::Skeleton => "skeleton",
        }
    }
}

impl FromStr for JobKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        JobKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// Malformed input; `file` names the offending file when it is not the config.
    Parse { file: Option<String>, err: ConfigError },
    /// A well-formed request the library rejected.
    Domain { name: &'static str, message: String },
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain { .. } => 1,
            CliError::Parse { .. } | CliError::Io(_) => 2,
        }
    }

    fn domain(name: &'static str, message: impl ToString) -> Self {
        CliError::Domain { name, message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { file: None, err } => write!(f, "parse error at {err}"),
            CliError::Parse { file: Some(p), err } => write!(f, "parse error at {p}:{err}"),
            CliError::Domain { name, message } => write!(f, "{name}: {message}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        CliError::Parse { file: None, err }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::domain(e.name(), e)
            }
        }
    )*};
}

domain_from!(crate::fgab::FgabError, crate::index::IndexError, crate::omega::OmegaError, crate::topology::TopologyError);

impl From<skeleton::SkeletonError> for CliError {
    fn from(e: skeleton::SkeletonError) -> Self {
        CliError::domain(e.name(), e)
    }
}

/// Reads and runs a config file. `kind` is the subcommand; a `job` key in the
/// file, if present, must agree with it.
pub fn run_config(path: &Path, kind: Option<JobKind>) -> Result<Report, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    run_source(&src, base, kind)
}

pub fn run_source(src: &str, base: &Path, kind: Option<JobKind>) -> Result<Report, CliError> {
    let cfg = Config::parse(src)?;
    let declared = match cfg.optional_scalar("job")? {
        Some((s, e)) => Some(s.parse::<JobKind>().map_err(|_| e.error(format!("unknown job {s:?}")))?),
        None => None,
    };
    let kind = match (kind, declared) {
        (Some(a), Some(b)) if a != b => {
            let e = cfg.get("job").unwrap();
            return Err(e.error(format!("config declares job {} but {} was requested", b.as_str(), a.as_str())).into());
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(cfg.require("job").unwrap_err().into()),
    };
    match kind {
        JobKind::Group => group_job(&cfg),
        JobKind::EulerForm => euler_form_job(&cfg),
        JobKind::Omega => omega_job(&cfg),
        JobKind::Orientability => orientability_job(&cfg),
        JobKind::Skeleton => skeleton_job(&cfg, base),
    }
}

fn to_matrix(rows: &[Vec<BigInt>], e: &config::Entry) -> Result<IntMatrix, CliError> {
    if rows.is_empty() {
        return Err(e.error("matrix block is empty").into());
    }
    Ok(IntMatrix::from_rows(rows)?)
}

fn matrix_node(m: &IntMatrix) -> Node {
    Node::matrix((0..m.rows()).map(|r| m.row(r).to_vec()))
}

fn group_job(cfg: &Config) -> Result<Report, CliError> {
    cfg.check_keys(&["job", "presentation"])?;
    let (rows, e) = cfg.matrix("presentation")?;
    let a = to_matrix(rows, e)?;
    let snf = snf_decompose(&a);
    let check = snf.u.checked_mul(&a)?.checked_mul(&snf.v)? == snf.d;
    let g = &snf.group;
    let order = g.order().map_or("infinite".to_string(), |o| o.to_string());
    let result = MapBuilder::new()
        .s("group", g)
        .s("order", order)
        .put("factors", Node::list(g.factor_labels()))
        .put("invariant-factors", Node::list(&snf.diagonal))
        .put("u", matrix_node(&snf.u))
        .put("v", matrix_node(&snf.v))
        .put("d", matrix_node(&snf.d))
        .s("u-a-v-equals-d", check)
        .build();
    let context = MapBuilder::new().put("presentation", matrix_node(&a)).build();
    Ok(Report { job: "group".into(), context, result })
}

fn parse_model(cfg: &Config) -> Result<Arc<ManifoldModel>, CliError> {
    let (s, e) = cfg.scalar("model")?;
    match ManifoldModel::parse(s) {
        Ok(m) => Ok(Arc::new(m)),
        Err(TopologyError::Parse(msg)) => Err(e.error(msg).into()),
        Err(other) => Err(other.into()),
    }
}

fn parse_operator(cfg: &Config, model: &Arc<ManifoldModel>) -> Result<OperatorDescriptor, CliError> {
    let (s, e) = cfg.scalar("operator")?;
    let kind: OperatorKind = s.parse().map_err(|_| {
        let names: Vec<&str> = OperatorKind::ALL.iter().map(|k| k.as_str()).collect();
        e.error(format!("unknown operator {s:?}; expected one of {}", names.join(", ")))
    })?;
    Ok(OperatorDescriptor::with_structure(kind, model, cfg.flag("complex-structure")?)?)
}

fn class(model: &Arc<ManifoldModel>, e: &config::Entry, offset: usize, src: &str) -> Result<CohClass, CliError> {
    parse_class(&model.ring, src).map_err(|x| e.error_at(offset + x.col - 1, x.message).into())
}

/// Witness forms: `ch: <expr>`, `line: <c_1>`, `trivial: <rank>`,
/// `rank: <r>; c: <total Chern class>`.
fn parse_witness(model: &Arc<ManifoldModel>, e: &config::Entry) -> Result<KClassData, CliError> {
    let v = e.scalar()?;
    let (tag, rest) = v.split_once(':').ok_or_else(|| e.error("witness must start with ch:, line:, trivial: or rank:"))?;
    let lead = |s: &str| s.len() - s.trim_start().len();
    let off = tag.chars().count() + 1 + lead(rest);
    let body = rest.trim();
    match tag.trim() {
        "ch" => Ok(KClassData::from_chern_character(model, &class(model, e, off, body)?)?),
        "line" => Ok(KClassData::line_bundle(model, class(model, e, off, body)?)?),
        "trivial" => {
            let r: i64 = body.parse().map_err(|_| e.error_at(off, "rank must be an integer"))?;
            Ok(KClassData::trivial(model, r))
        }
        "rank" => {
            let (r, c) = body.split_once(';').ok_or_else(|| e.error_at(off, "expected `rank: <r>; c: <class>`"))?;
            let rank: BigInt = r.trim().parse().map_err(|_| e.error_at(off, "rank must be an integer"))?;
            let coff = off + r.chars().count() + 1;
            let (ctag, cbody) = c.split_once(':').ok_or_else(|| e.error_at(coff, "expected `c: <class>`"))?;
            if ctag.trim() != "c" {
                return Err(e.error_at(coff + lead(ctag), "expected `c:`").into());
            }
            let boff = coff + ctag.chars().count() + 1 + lead(cbody);
            let total = class(model, e, boff, cbody.trim())?;
            if total.part(0) != model.one() {
                return Err(e.error_at(boff, "total Chern class must have constant term 1").into());
            }
            let chern = (1..=model.dim / 2).map(|i| total.part(2 * i)).collect();
            Ok(KClassData::new(model, rank, chern)?)
        }
        other => Err(e.error(format!("unknown witness form {other:?}")).into()),
    }
}

fn euler_form_job(cfg: &Config) -> Result<Report, CliError> {
    cfg.check_keys(&["job", "model", "operator", "complex-structure", "witness"])?;
    let model = parse_model(cfg)?;
    let op = parse_operator(cfg, &model)?;
    let entries: Vec<&config::Entry> = cfg.all("witness").collect();
    if entries.is_empty() {
        return Err(cfg.require("witness").unwrap_err().into());
    }
    let ws = entries.iter().map(|e| parse_witness(&model, e)).collect::<Result<Vec<_>, _>>()?;
    let form = euler_form(&op, &ws)?;
    let n = ws.len();
    let diag: Vec<&BigInt> = (0..n).map(|i| form.entry(i, i)).collect();
    let result = MapBuilder::new()
        .s("group", form.group())
        .put("matrix", matrix_node(form.matrix()))
        .put("ind-p", Node::list(diag))
        .s("symmetric", form.matrix().is_symmetric())
        .build();
    let context = MapBuilder::new()
        .s("model", &model.name)
        .s("operator", op.kind)
        .s("complex-structure", op.complex_structure)
        .s("untwisted-index", untwisted_index(&op))
        .put("witnesses", Node::list(entries.iter().map(|e| e.scalar().unwrap_or(""))))
        .build();
    Ok(Report { job: "euler-form".into(), context, result })
}

/// `Z^2 x Z_4 x Z_3`, `Z × Z_2`, or `0`.
pub fn parse_group_spec(s: &str) -> Result<FgAbGroup, (usize, String)> {
    if s.trim() == "0" {
        return Ok(FgAbGroup::trivial());
    }
    let mut diag: Vec<BigInt> = Vec::new();
    let mut offset = 0;
    for part in s.split(['x', '×']) {
        let lead = part.len() - part.trim_start().len();
        let p = part.trim();
        let at = s[..offset].chars().count() + s[offset..offset + lead].chars().count();
        if p == "Z" {
            diag.push(BigInt::zero());
        } else if let Some(r) = p.strip_prefix("Z^") {
            let r: usize = r.parse().map_err(|_| (at, format!("bad rank in {p:?}")))?;
            diag.extend(std::iter::repeat(BigInt::zero()).take(r));
        } else if let Some(n) = p.strip_prefix("Z_") {
            let n: BigInt = n.parse().map_err(|_| (at, format!("bad modulus in {p:?}")))?;
            if n < BigInt::from(2) {
                return Err((at, format!("modulus must be at least 2 in {p:?}")));
            }
            diag.push(n);
        } else {
            return Err((at, format!("expected Z, Z^r or Z_n, found {p:?}")));
        }
        offset += part.len() + if s[offset + part.len()..].starts_with('×') { '×'.len_utf8() } else { 1 };
        offset = offset.min(s.len());
    }
    let k = diag.len();
    let m = IntMatrix::diagonal(k, k, &diag);
    Ok(snf_decompose(&m).group)
}

fn element_text(x: &OmegaElement) -> String {
    let mut parts: Vec<String> =
        x.coords.free_coords.iter().chain(&x.coords.two_coords).chain(&x.coords.odd_coords).map(ToString::to_string).collect();
    parts.push(x.sign.as_str().to_string());
    parts.join(" ")
}

/// Coordinates in group order followed by a sign, e.g. `1 0 3 -`.
fn parse_element(omega: &OmegaGroup, e: &config::Entry, offset: usize, src: &str) -> Result<OmegaElement, CliError> {
    let g = omega.k0();
    let toks: Vec<&str> = src.split_whitespace().collect();
    let want = g.free_rank() + g.two_primary().len() + g.odd_orders().len();
    let Some((sign_tok, coords)) = toks.split_last() else {
        return Err(e.error_at(offset, "empty element").into());
    };
    let sign = Sign::parse(sign_tok).ok_or_else(|| e.error_at(offset, format!("expected a trailing sign, found {sign_tok:?}")))?;
    if coords.len() != want {
        return Err(e.error_at(offset, format!("element needs {want} coordinates, found {}", coords.len())).into());
    }
    let nums = coords
        .iter()
        .map(|t| t.parse::<BigInt>().map_err(|_| e.error_at(offset, format!("bad coordinate {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let (free, rest) = nums.split_at(g.free_rank());
    let (two, odd) = rest.split_at(g.two_primary().len());
    let coords: GroupElement = g.element_reduced(free.to_vec(), two.to_vec(), odd.to_vec())?;
    Ok(omega.element(coords, sign)?)
}

fn omega_job(cfg: &Config) -> Result<Report, CliError> {
    cfg.check_keys(&["job", "k0", "chi", "xi", "multiply", "inverse", "power"])?;
    let (spec, ke) = cfg.scalar("k0")?;
    let g = parse_group_spec(spec).map_err(|(at, m)| ke.error_at(at, m))?;
    let r = g.free_rank();
    let chi = match cfg.get("chi") {
        None if r == 0 => IntMatrix::zeros(0, 0),
        _ => {
            let (rows, ce) = cfg.matrix("chi")?;
            if rows.is_empty() && r == 0 {
                IntMatrix::zeros(0, 0)
            } else {
                to_matrix(rows, ce)?
            }
        }
    };
    let form = crate::index::EulerForm::new(g.clone(), chi)?;
    let xi = match cfg.optional_scalar("xi")? {
        None => vec![Sign::Plus; g.two_primary().len()],
        Some((s, e)) => s
            .split_whitespace()
            .map(|t| Sign::parse(t).ok_or_else(|| e.error(format!("bad sign {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let omega = OmegaGroup::new(form, xi)?;
    let mut ops = Vec::new();
    for e in &cfg.entries {
        let v = match e.key.as_str() {
            "multiply" | "inverse" | "power" => e.scalar()?,
            _ => continue,
        };
        let node = match e.key.as_str() {
            "multiply" => {
                let (a, b) = v.split_once(',').ok_or_else(|| e.error("expected `a , b`"))?;
                let x = parse_element(&omega, e, 0, a)?;
                let y = parse_element(&omega, e, a.chars().count() + 1, b)?;
                let z = omega.multiply(&x, &y)?;
                MapBuilder::new().s("op", "multiply").put("args", Node::list([element_text(&x), element_text(&y)])).s("result", element_text(&z))
            }
            "inverse" => {
                let x = parse_element(&omega, e, 0, v)?;
                let z = omega.inverse(&x)?;
                MapBuilder::new().s("op", "inverse").put("args", Node::list([element_text(&x)])).s("result", element_text(&z))
            }
            _ => {
                let (a, n) = v.rsplit_once(',').ok_or_else(|| e.error("expected `a , n`"))?;
                let x = parse_element(&omega, e, 0, a)?;
                let k: BigInt = n.trim().parse().map_err(|_| e.error_at(a.chars().count() + 1, "exponent must be an integer"))?;
                let z = omega.power(&x, &k)?;
                MapBuilder::new().s("op", "power").put("args", Node::list([element_text(&x), k.to_string()])).s("result", element_text(&z))
            }
        };
        ops.push(node.build());
    }
    let xi_table: Vec<String> = omega.xi_table().iter().map(|(gamma, s)| format!("{gamma} {s}")).collect();
    let result = MapBuilder::new()
        .s("k0", &g)
        .put("chi", matrix_node(omega.chi().matrix()))
        .put("xi", Node::list(omega.xi_generators().iter().map(|s| s.as_str())))
        .put("operations", Node::List(ops))
        .build();
    let context = MapBuilder::new().s("k0-spec", spec).put("xi-table", Node::list(xi_table)).build();
    Ok(Report { job: "omega".into(), context, result })
}

fn orientability_job(cfg: &Config) -> Result<Report, CliError> {
    cfg.check_keys(&["job", "model", "operator", "group", "complex-structure"])?;
    let model = parse_model(cfg)?;
    let op = parse_operator(cfg, &model)?;
    let (gs, ge) = cfg.scalar("group")?;
    let group: GroupDescriptor = gs.parse().map_err(|_| ge.error(format!("invalid group descriptor {gs:?}")))?;
    let v = evaluate(&op, &group);
    let ind_d = untwisted_index(&op);
    let (det, lie) = standard_orientation_deps(&BigInt::from(group.dim_g), &ind_d);
    let trail = v
        .trail
        .iter()
        .map(|t| MapBuilder::new().s("rule", t.rule.id).s("group", &t.group).s("statement", t.rule.statement).build())
        .collect();
    let result = MapBuilder::new()
        .s("status", v.status)
        .put("trail", Node::List(trail))
        .put("choices", Node::list(v.choices.iter().map(|c| c.as_str())))
        .put("notes", Node::list(&v.notes))
        .build();
    let context = MapBuilder::new()
        .s("model", &model.name)
        .s("operator", op.kind)
        .s("complex-structure", op.complex_structure)
        .s("group", &group)
        .s("dim-g", group.dim_g)
        .s("ind-d", &ind_d)
        .s("standard-needs-det-d", det)
        .s("standard-needs-g", lie)
        .build();
    Ok(Report { job: "orientability".into(), context, result })
}

fn skeleton_job(cfg: &Config, base: &Path) -> Result<Report, CliError> {
    cfg.check_keys(&["job", "complex", "library", "d"])?;
    let (name, k) = match (cfg.optional_scalar("complex")?, cfg.optional_scalar("library")?) {
        (Some((path, _)), None) => {
            let full = base.join(path);
            let src = std::fs::read_to_string(&full).map_err(|e| CliError::Io(format!("cannot read {}: {e}", full.display())))?;
            let k = skeleton::parse_complex(&src).map_err(|e| match e {
                skeleton::SkeletonError::Parse { line, col, message } => {
                    CliError::Parse { file: Some(path.to_string()), err: ConfigError::new(line, col, message) }
                }
                other => other.into(),
            })?;
            (path.to_string(), k)
        }
        (None, Some((lib, e))) => {
            let k = skeleton::library()
                .into_iter()
                .find(|(n, _)| *n == lib)
                .map(|(_, k)| k)
                .ok_or_else(|| e.error(format!("unknown library complex {lib:?}")))?;
            (lib.to_string(), k)
        }
        (Some(_), Some(_)) => {
            let e = cfg.get("library").unwrap();
            return Err(ConfigError::new(e.line, 1, "give either complex or library, not both").into());
        }
        (None, None) => return Err(cfg.require("complex").unwrap_err().into()),
    };
    let n = k.dim();
    let ds: Vec<usize> = match cfg.optional_scalar("d")? {
        Some((s, e)) => vec![s.parse().map_err(|_| e.error("d must be a non-negative integer"))?],
        None => (1..=n).collect(),
    };
    let sd = skeleton::barycentric_subdivision(&k);
    let mut per_d = Vec::new();
    for d in ds {
        let c = skeleton::dual_skeleton(&k, &sd, d)?;
        let y = skeleton::relative_skeleton(&k, n - d)?;
        let y_sd = sd.embed(&y);
        let cells = skeleton::dual_cells(&k, &sd, d)?;
        let cell_counts: Vec<usize> = (0..d).map(|j| cells.iter().filter(|c| c.dim == j).count()).collect();
        per_d.push(
            MapBuilder::new()
                .s("d", d)
                .s("primal-dimension", n - d)
                .s("primal-faces", y.simplices.len())
                .s("dual-vertices", c.vertices().len())
                .s("dual-simplices", c.simplices.len())
                .put("dual-cells-by-dimension", Node::list(cell_counts))
                .s("disjoint", c.is_disjoint_from(&y_sd))
                .s("retracts", skeleton::retracts_onto(&sd, &y_sd, &c))
                .build(),
        );
    }
    let prism = skeleton::prism_triangulation(&k)?;
    let ends_match = prism.end_complex(0) == k && prism.end_complex(1) == k;
    let result = MapBuilder::new()
        .s("complex", &name)
        .s("dimension", n)
        .s("vertices", k.vertex_count())
        .s("top-cells", k.maximal().len())
        .put("f-vector", Node::list(k.f_vector()))
        .s("euler-characteristic", k.euler_characteristic())
        .s("subdivision-top-cells", sd.complex.maximal().len())
        .put("skeletons", Node::List(per_d))
        .s("prism-top-cells", prism.complex.maximal().len())
        .s("prism-ends-match", ends_match)
        .build();
    let context = MapBuilder::new().s("pure", k.is_pure()).put("maximal-simplices", Node::list(skeleton::write_complex(&k).lines())).build();
    Ok(Report { job: "skeleton".into(), context, result })
}
