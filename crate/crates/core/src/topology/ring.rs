use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::TopologyError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Smallest power that vanishes.
    pub height: u32,
}

/// Exponent vector over the generators of a ring.
pub type Monomial = Vec<u32>;

/// Graded-commutative Q-algebra Q[g_1, …, g_k]/(g_i^{h_i}) with Koszul signs.
///
/// Odd-degree generators always have height 2. The monomial with every
/// exponent at h_i − 1 is the fundamental class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohRing {
    gens: Vec<Generator>,
    dim: u32,
    basis: Vec<Monomial>,
}

impl CohRing {
    pub fn new(gens: Vec<Generator>) -> Result<Self, TopologyError> {
        for g in &gens {
            if g.degree == 0 || g.height < 2 {
                return Err(TopologyError::UnsupportedModel(format!(
                    "generator {} needs positive degree and height ≥ 2",
                    g.name
                )));
            }
            if g.degree % 2 == 1 && g.height != 2 {
                return Err(TopologyError::UnsupportedModel(format!(
                    "odd generator {} must square to zero",
                    g.name
                )));
            }
        }
        let mut basis: Vec<Monomial> = vec![vec![]];
        for g in &gens {
            basis = basis
                .into_iter()
                .flat_map(|m| {
                    (0..g.height).map(move |e| {
                        let mut m = m.clone();
                        m.push(e);
                        m
                    })
                })
                .collect();
        }
        let dim = gens.iter().map(|g| g.degree * (g.height - 1)).sum();
        let mut ring = CohRing { gens, dim, basis: vec![] };
        basis.sort_by(|a, b| ring.degree_of(a).cmp(&ring.degree_of(b)).then_with(|| a.cmp(b)));
        ring.basis = basis;
        Ok(ring)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Degree of the fundamental class.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_in_degree(&self, k: u32) -> Vec<Monomial> {
        self.basis.iter().filter(|m| self.degree_of(m) == k).cloned().collect()
    }

    pub fn rank_in_degree(&self, k: u32) -> usize {
        self.basis.iter().filter(|m| self.degree_of(m) == k).count()
    }

    pub fn top_monomial(&self) -> Monomial {
        self.gens.iter().map(|g| g.height - 1).collect()
    }

    pub fn degree_of(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.gens).map(|(e, g)| e * g.degree).sum()
    }

    /// Product of basis monomials: None if it vanishes, otherwise the
    /// monomial and whether a Koszul sign flip occurred.
    pub fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Option<(Monomial, bool)> {
        let mut out = Vec::with_capacity(a.len());
        for (i, g) in self.gens.iter().enumerate() {
            let e = a[i] + b[i];
            if e >= g.height {
                return None;
            }
            out.push(e);
        }
        // Block b_j moves left past every a_i with i > j.
        let mut parity = 0u64;
        for j in 0..self.gens.len() {
            let bj = u64::from(b[j] * self.gens[j].degree);
            if bj % 2 == 0 {
                continue;
            }
            for i in j + 1..self.gens.len() {
                parity += u64::from(a[i] * self.gens[i].degree);
            }
        }
        Some((out, parity % 2 == 1))
    }

    pub fn monomial_name(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.gens)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Element of a [`CohRing`] with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct CohClass {
    ring: Arc<CohRing>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for CohClass {}

impl CohClass {
    pub fn zero(ring: &Arc<CohRing>) -> Self {
        CohClass { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<CohRing>, c: BigRational) -> Self {
        Self::monomial(ring, vec![0; ring.gens.len()], c)
    }

    pub fn one(ring: &Arc<CohRing>) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn from_int(ring: &Arc<CohRing>, c: i64) -> Self {
        Self::constant(ring, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(ring: &Arc<CohRing>, m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CohClass { ring: ring.clone(), terms }
    }

    pub fn generator(ring: &Arc<CohRing>, name: &str) -> Result<Self, TopologyError> {
        let i = ring
            .generator_index(name)
            .ok_or_else(|| TopologyError::Parse(format!("unknown generator {name}")))?;
        let mut m = vec![0; ring.gens.len()];
        m[i] = 1;
        Ok(Self::monomial(ring, m, BigRational::one()))
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Degree-k component.
    pub fn part(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree_of(m) == k)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        CohClass { ring: self.ring.clone(), terms }
    }

    /// Some(k) if every term has degree k; None for zero or mixed classes.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| self.ring.degree_of(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: u32) -> bool {
        self.terms.keys().all(|m| self.ring.degree_of(m) == k)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        CohClass { ring: self.ring.clone(), terms }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Multiply each degree-k component by f(k).
    pub fn map_parts(&self, f: impl Fn(u32) -> BigRational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v * f(self.ring.degree_of(m))))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        CohClass { ring: self.ring.clone(), terms }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, TopologyError> {
        self.require_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, TopologyError> {
        self.require_same(other)?;
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, flip)) = self.ring.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if flip { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    fn require_same(&self, other: &Self) -> Result<(), TopologyError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(TopologyError::Shape("classes live on different models".into()))
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.ring);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Coefficient of the fundamental class.
    pub fn integrate(&self) -> BigRational {
        self.coefficient(&self.ring.top_monomial())
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&vec![0; self.ring.gens.len()])
    }

    /// exp of a class with zero constant term (a finite sum by nilpotency).
    pub fn exp_nilpotent(&self) -> Self {
        debug_assert!(self.constant_term().is_zero());
        let mut out = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        let mut k = 1i64;
        loop {
            term = (&term * self).scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            if term.is_zero() {
                return out;
            }
            out = &out + &term;
            k += 1;
        }
    }

    pub fn to_expr(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let name = self.ring.monomial_name(m);
            if name == "1" {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&name);
            } else {
                s.push_str(&format!("{a}*{name}"));
            }
        }
        s
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        self.checked_add(rhs).expect("classes on the same model")
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        self.checked_add(&-rhs).expect("classes on the same model")
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        self.scale_int(-1)
    }
}

impl Mul for &CohClass {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        self.checked_mul(rhs).expect("classes on the same model")
    }
}
