use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::{CohClass, CohRing, Generator};
use super::TopologyError;

pub const MAX_PRODUCT_DIM: u32 = 16;

/// Descriptor of a library manifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModelSpec {
    Sphere(u32),
    ComplexProjective(u32),
    Torus(u32),
    Product(Box<ModelSpec>, Box<ModelSpec>),
}

impl ModelSpec {
    pub fn product(a: ModelSpec, b: ModelSpec) -> Self {
        ModelSpec::Product(Box::new(a), Box::new(b))
    }

    fn factors(&self) -> Vec<&ModelSpec> {
        match self {
            ModelSpec::Product(a, b) => {
                let mut v = a.factors();
                v.extend(b.factors());
                v
            }
            other => vec![other],
        }
    }

    pub fn dimension(&self) -> u32 {
        match self {
            ModelSpec::Sphere(n) | ModelSpec::Torus(n) => *n,
            ModelSpec::ComplexProjective(n) => 2 * n,
            ModelSpec::Product(a, b) => a.dimension() + b.dimension(),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Sphere(n) => write!(f, "S^{n}"),
            ModelSpec::ComplexProjective(n) => write!(f, "CP^{n}"),
            ModelSpec::Torus(n) => write!(f, "T^{n}"),
            ModelSpec::Product(a, b) => {
                let rhs = match **b {
                    ModelSpec::Product(..) => format!("({b})"),
                    _ => b.to_string(),
                };
                write!(f, "{a} x {rhs}")
            }
        }
    }
}

impl FromStr for ModelSpec {
    type Err = TopologyError;

    /// Accepts `S^n`, `CP^n`, `T^n`, joined by `x` or `×`, with optional parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let spec = parse_product(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(TopologyError::UnsupportedModel(format!("trailing input in model {s:?}")));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Times,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, TopologyError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<Tok>| {
        if !cur.is_empty() {
            if cur == "x" || cur == "X" {
                out.push(Tok::Times);
            } else {
                out.push(Tok::Atom(std::mem::take(cur)));
            }
            cur.clear();
        }
    };
    for ch in s.chars() {
        match ch {
            '×' | '*' => {
                flush(&mut cur, &mut out);
                out.push(Tok::Times);
            }
            '(' => {
                flush(&mut cur, &mut out);
                out.push(Tok::Open);
            }
            ')' => {
                flush(&mut cur, &mut out);
                out.push(Tok::Close);
            }
            c if c.is_whitespace() => flush(&mut cur, &mut out),
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut out);
    if out.is_empty() {
        return Err(TopologyError::UnsupportedModel("empty model descriptor".into()));
    }
    Ok(out)
}

fn parse_product(t: &[Tok], pos: &mut usize) -> Result<ModelSpec, TopologyError> {
    let mut acc = parse_factor(t, pos)?;
    while t.get(*pos) == Some(&Tok::Times) {
        *pos += 1;
        let rhs = parse_factor(t, pos)?;
        acc = ModelSpec::product(acc, rhs);
    }
    Ok(acc)
}

fn parse_factor(t: &[Tok], pos: &mut usize) -> Result<ModelSpec, TopologyError> {
    match t.get(*pos) {
        Some(Tok::Open) => {
            *pos += 1;
            let inner = parse_product(t, pos)?;
            if t.get(*pos) != Some(&Tok::Close) {
                return Err(TopologyError::UnsupportedModel("unbalanced parentheses".into()));
            }
            *pos += 1;
            Ok(inner)
        }
        Some(Tok::Atom(a)) => {
            *pos += 1;
            parse_atom(a)
        }
        _ => Err(TopologyError::UnsupportedModel("expected a model factor".into())),
    }
}

fn parse_atom(a: &str) -> Result<ModelSpec, TopologyError> {
    let bad = || TopologyError::UnsupportedModel(format!("unknown model {a:?}"));
    let (head, n) = a.split_once('^').ok_or_else(bad)?;
    let n: u32 = n.parse().map_err(|_| bad())?;
    match head {
        "S" => Ok(ModelSpec::Sphere(n)),
        "CP" => Ok(ModelSpec::ComplexProjective(n)),
        "T" => Ok(ModelSpec::Torus(n)),
        _ => Err(bad()),
    }
}

/// A closed connected manifold known through its rational cohomology ring
/// and tangent characteristic classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldModel {
    pub name: String,
    pub spec: ModelSpec,
    pub dim: u32,
    pub ring: Arc<CohRing>,
    pub betti: Vec<usize>,
    pub betti_mod2: Vec<usize>,
    pub orientable: bool,
    pub spin: bool,
    /// Carries a (stably) almost complex structure with Chern class `chern`.
    pub complex: bool,
    /// Total Chern class of the tangent bundle when `complex`.
    pub chern: Option<CohClass>,
    /// Total Pontryagin class.
    pub pontryagin: CohClass,
    pub euler: CohClass,
}

struct Factor {
    gens: Vec<Generator>,
    spin: bool,
    complex: bool,
    /// Chern, Pontryagin and Euler classes as polynomials in local generator indices.
    chern: Option<Vec<(Vec<u32>, i64)>>,
    pontryagin: Vec<(Vec<u32>, i64)>,
    euler: Vec<(Vec<u32>, i64)>,
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}

fn library_factor(spec: &ModelSpec) -> Result<Factor, TopologyError> {
    match *spec {
        ModelSpec::Sphere(n) if (1..=8).contains(&n) => {
            let e = if n % 2 == 0 { vec![(vec![1], 2)] } else { vec![] };
            Ok(Factor {
                gens: vec![Generator { name: "y".into(), degree: n, height: 2 }],
                spin: true,
                complex: n == 2,
                chern: (n == 2).then(|| vec![(vec![0], 1), (vec![1], 2)]),
                pontryagin: vec![(vec![0], 1)],
                euler: e,
            })
        }
        ModelSpec::ComplexProjective(n) if (1..=3).contains(&n) => {
            let chern = (0..=n).map(|k| (vec![k], binomial(n + 1, k))).collect();
            let pontryagin = (0..=n / 2).map(|k| (vec![2 * k], binomial(n + 1, k))).collect();
            Ok(Factor {
                gens: vec![Generator { name: "x".into(), degree: 2, height: n + 1 }],
                spin: n % 2 == 1,
                complex: true,
                chern: Some(chern),
                pontryagin,
                euler: vec![(vec![n], i64::from(n + 1))],
            })
        }
        ModelSpec::Torus(n) if (1..=8).contains(&n) => {
            let gens: Vec<Generator> = (1..=n)
                .map(|i| Generator { name: format!("e{i}"), degree: 1, height: 2 })
                .collect();
            let one = vec![0; n as usize];
            Ok(Factor {
                gens,
                spin: true,
                complex: n % 2 == 0,
                chern: (n % 2 == 0).then(|| vec![(one.clone(), 1)]),
                pontryagin: vec![(one, 1)],
                euler: vec![],
            })
        }
        _ => Err(TopologyError::UnsupportedModel(format!("{spec} is outside the model library"))),
    }
}

/// Build a library model: S^n (1 ≤ n ≤ 8), CP^n (1 ≤ n ≤ 3), T^n (1 ≤ n ≤ 8),
/// or a product of these of total dimension at most 16.
pub fn build_model(spec: &ModelSpec) -> Result<ManifoldModel, TopologyError> {
    let factor_specs = spec.factors();
    let dim = spec.dimension();
    if factor_specs.len() > 1 && dim > MAX_PRODUCT_DIM {
        return Err(TopologyError::UnsupportedModel(format!(
            "product dimension {dim} exceeds {MAX_PRODUCT_DIM}"
        )));
    }
    let factors: Vec<Factor> = factor_specs.iter().map(|s| library_factor(s)).collect::<Result<_, _>>()?;

    let suffix = factors.len() > 1;
    let mut gens = Vec::new();
    let mut offsets = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        offsets.push(gens.len());
        for g in &f.gens {
            let name = if suffix { format!("{}_{}", g.name, i + 1) } else { g.name.clone() };
            gens.push(Generator { name, ..g.clone() });
        }
    }
    let total = gens.len();
    let ring = Arc::new(CohRing::new(gens)?);

    let lift = |i: usize, poly: &[(Vec<u32>, i64)]| -> CohClass {
        let mut c = CohClass::zero(&ring);
        for (local, coeff) in poly {
            let mut m = vec![0; total];
            m[offsets[i]..offsets[i] + local.len()].copy_from_slice(local);
            let t = CohClass::monomial(&ring, m, BigRational::from_integer(BigInt::from(*coeff)));
            c = &c + &t;
        }
        c
    };
    let product_of = |pick: &dyn Fn(&Factor) -> Option<&Vec<(Vec<u32>, i64)>>| -> Option<CohClass> {
        let mut acc = CohClass::one(&ring);
        for (i, f) in factors.iter().enumerate() {
            acc = &acc * &lift(i, pick(f)?);
        }
        Some(acc)
    };

    let complex = factors.iter().all(|f| f.complex);
    let chern = if complex { product_of(&|f| f.chern.as_ref()) } else { None };
    let pontryagin = product_of(&|f| Some(&f.pontryagin)).expect("always present");
    let euler = product_of(&|f| Some(&f.euler)).expect("always present");

    let betti: Vec<usize> = (0..=dim).map(|k| ring.rank_in_degree(k)).collect();
    Ok(ManifoldModel {
        name: spec.to_string(),
        spec: spec.clone(),
        dim,
        betti_mod2: betti.clone(),
        betti,
        ring,
        orientable: true,
        spin: factors.iter().all(|f| f.spin),
        complex,
        chern,
        pontryagin,
        euler,
    })
}

impl ManifoldModel {
    pub fn parse(descriptor: &str) -> Result<Self, TopologyError> {
        build_model(&descriptor.parse()?)
    }

    pub fn euler_characteristic(&self) -> BigInt {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let b = BigInt::from(*b);
                if i % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .sum()
    }

    /// i-th Pontryagin class.
    pub fn pontryagin_class(&self, i: u32) -> CohClass {
        self.pontryagin.part(4 * i)
    }

    /// i-th Chern class of the tangent bundle, if complex.
    pub fn chern_class(&self, i: u32) -> Option<CohClass> {
        self.chern.as_ref().map(|c| c.part(2 * i))
    }

    pub fn generator(&self, name: &str) -> Result<CohClass, TopologyError> {
        CohClass::generator(&self.ring, name)
    }

    pub fn zero(&self) -> CohClass {
        CohClass::zero(&self.ring)
    }

    pub fn one(&self) -> CohClass {
        CohClass::one(&self.ring)
    }

    /// Fundamental class as a cohomology class (integrates to 1).
    pub fn top_class(&self) -> CohClass {
        CohClass::monomial(&self.ring, self.ring.top_monomial(), BigRational::one())
    }

    /// Signature of the intersection form on the middle degree computed by
    /// symmetric elimination over Q. None unless dim ≡ 0 mod 4.
    pub fn intersection_signature(&self) -> Option<i64> {
        if self.dim % 4 != 0 {
            return None;
        }
        let basis = self.ring.basis_in_degree(self.dim / 2);
        let classes: Vec<CohClass> = basis
            .into_iter()
            .map(|m| CohClass::monomial(&self.ring, m, BigRational::one()))
            .collect();
        let mut q: Vec<Vec<BigRational>> = classes
            .iter()
            .map(|a| classes.iter().map(|b| (a * b).integrate()).collect())
            .collect();
        Some(congruence_signature(&mut q))
    }

    /// b_+ of the middle-degree intersection form.
    pub fn b_plus(&self) -> Option<usize> {
        let sigma = self.intersection_signature()?;
        let mid = self.betti[(self.dim / 2) as usize] as i64;
        Some(((mid + sigma) / 2) as usize)
    }
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
fn congruence_signature(q: &mut [Vec<BigRational>]) -> i64 {
    let n = q.len();
    let mut sig = 0i64;
    let mut k = 0;
    while k < n {
        if q[k][k].is_zero() {
            // Bring a nonzero diagonal entry into place, or make one.
            if let Some(j) = (k + 1..n).find(|&j| !q[j][j].is_zero()) {
                q.swap(k, j);
                for row in q.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !q[k][j].is_zero()) {
                // row_k += row_j, col_k += col_j gives q_kk = 2 q_kj.
                for c in 0..n {
                    let v = q[j][c].clone();
                    q[k][c] += v;
                }
                for r in 0..n {
                    let v = q[r][j].clone();
                    q[r][k] += v;
                }
            } else {
                k += 1;
                continue;
            }
        }
        let pivot = q[k][k].clone();
        if pivot.is_positive() {
            sig += 1;
        } else {
            sig -= 1;
        }
        for i in k + 1..n {
            let f = &q[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = &q[k][c] * &f;
                q[i][c] -= v;
            }
            for r in 0..n {
                let v = &q[r][k] * &f;
                q[r][i] -= v;
            }
        }
        k += 1;
    }
    sig
}
