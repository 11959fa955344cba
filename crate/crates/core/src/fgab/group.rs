use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::FgabError;

/// Z^r × Π Z_{2^{p_j}} × Π Z_{q_k} with each q_k odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    free_rank: usize,
    two_primary: Vec<u32>,
    odd_orders: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub free_coords: Vec<BigInt>,
    pub two_coords: Vec<BigInt>,
    pub odd_coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn is_torsion_coords_zero(&self) -> bool {
        self.two_coords.iter().chain(&self.odd_coords).all(Zero::is_zero)
    }
}

impl FgAbGroup {
    pub fn new(free_rank: usize, two_primary: Vec<u32>, odd_orders: Vec<BigInt>) -> Result<Self, FgabError> {
        if two_primary.iter().any(|&p| p == 0) {
            return Err(FgabError::InvalidGroup("2-primary exponents must be at least 1".into()));
        }
        if let Some(q) = odd_orders.iter().find(|q| **q <= BigInt::one() || q.is_even()) {
            return Err(FgabError::InvalidGroup(format!("odd order {q} must be odd and > 1")));
        }
        Ok(FgAbGroup { free_rank, two_primary, odd_orders })
    }

    pub fn trivial() -> Self {
        FgAbGroup { free_rank: 0, two_primary: vec![], odd_orders: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, two_primary: vec![], odd_orders: vec![] }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn two_primary(&self) -> &[u32] {
        &self.two_primary
    }

    pub fn odd_orders(&self) -> &[BigInt] {
        &self.odd_orders
    }

    pub fn two_modulus(&self, j: usize) -> BigInt {
        BigInt::one() << self.two_primary[j]
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        let two: BigInt = (0..self.two_primary.len()).map(|j| self.two_modulus(j)).product();
        two * self.odd_orders.iter().product::<BigInt>()
    }

    /// None when the free rank is positive.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion_order())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free_coords: vec![BigInt::zero(); self.free_rank],
            two_coords: vec![BigInt::zero(); self.two_primary.len()],
            odd_coords: vec![BigInt::zero(); self.odd_orders.len()],
        }
    }

    pub fn is_zero(&self, x: &GroupElement) -> bool {
        x.free_coords.iter().chain(&x.two_coords).chain(&x.odd_coords).all(Zero::is_zero)
    }

    /// Build an element, checking shape and residue ranges.
    pub fn element(
        &self,
        free: Vec<BigInt>,
        two: Vec<BigInt>,
        odd: Vec<BigInt>,
    ) -> Result<GroupElement, FgabError> {
        let x = GroupElement { free_coords: free, two_coords: two, odd_coords: odd };
        self.check(&x)?;
        Ok(x)
    }

    /// Build an element, reducing torsion coordinates into range.
    pub fn element_reduced(
        &self,
        free: Vec<BigInt>,
        two: Vec<BigInt>,
        odd: Vec<BigInt>,
    ) -> Result<GroupElement, FgabError> {
        self.check_shape(free.len(), two.len(), odd.len())?;
        Ok(self.reduce(GroupElement { free_coords: free, two_coords: two, odd_coords: odd }))
    }

    pub fn from_i64(&self, free: &[i64], two: &[i64], odd: &[i64]) -> Result<GroupElement, FgabError> {
        let conv = |v: &[i64]| v.iter().map(|&e| BigInt::from(e)).collect::<Vec<_>>();
        self.element_reduced(conv(free), conv(two), conv(odd))
    }

    fn check_shape(&self, f: usize, t: usize, o: usize) -> Result<(), FgabError> {
        if f != self.free_rank || t != self.two_primary.len() || o != self.odd_orders.len() {
            return Err(FgabError::Shape(format!(
                "element has shape ({f}, {t}, {o}) but group has ({}, {}, {})",
                self.free_rank,
                self.two_primary.len(),
                self.odd_orders.len()
            )));
        }
        Ok(())
    }

    pub fn check(&self, x: &GroupElement) -> Result<(), FgabError> {
        self.check_shape(x.free_coords.len(), x.two_coords.len(), x.odd_coords.len())?;
        for (j, b) in x.two_coords.iter().enumerate() {
            if b.is_negative() || *b >= self.two_modulus(j) {
                return Err(FgabError::InvalidElement(format!(
                    "2-primary coordinate {b} outside [0, {})",
                    self.two_modulus(j)
                )));
            }
        }
        for (c, q) in x.odd_coords.iter().zip(&self.odd_orders) {
            if c.is_negative() || c >= q {
                return Err(FgabError::InvalidElement(format!("odd coordinate {c} outside [0, {q})")));
            }
        }
        Ok(())
    }

    fn reduce(&self, mut x: GroupElement) -> GroupElement {
        for (j, b) in x.two_coords.iter_mut().enumerate() {
            *b = b.mod_floor(&self.two_modulus(j));
        }
        for (c, q) in x.odd_coords.iter_mut().zip(&self.odd_orders) {
            *c = c.mod_floor(q);
        }
        x
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, FgabError> {
        self.check(x)?;
        self.check(y)?;
        let sum = |a: &[BigInt], b: &[BigInt]| a.iter().zip(b).map(|(p, q)| p + q).collect::<Vec<_>>();
        Ok(self.reduce(GroupElement {
            free_coords: sum(&x.free_coords, &y.free_coords),
            two_coords: sum(&x.two_coords, &y.two_coords),
            odd_coords: sum(&x.odd_coords, &y.odd_coords),
        }))
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement, FgabError> {
        self.scale(x, &BigInt::from(-1))
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, FgabError> {
        self.add(x, &self.neg(y)?)
    }

    pub fn scale(&self, x: &GroupElement, k: &BigInt) -> Result<GroupElement, FgabError> {
        self.check(x)?;
        let mul = |a: &[BigInt]| a.iter().map(|e| e * k).collect::<Vec<_>>();
        Ok(self.reduce(GroupElement {
            free_coords: mul(&x.free_coords),
            two_coords: mul(&x.two_coords),
            odd_coords: mul(&x.odd_coords),
        }))
    }

    /// Order of an element; None if it has infinite order.
    pub fn order_of(&self, x: &GroupElement) -> Option<BigInt> {
        if x.free_coords.iter().any(|a| !a.is_zero()) {
            return None;
        }
        let mut ord = BigInt::one();
        for (j, b) in x.two_coords.iter().enumerate() {
            let m = self.two_modulus(j);
            ord = ord.lcm(&(&m / m.gcd(b)));
        }
        for (c, q) in x.odd_coords.iter().zip(&self.odd_orders) {
            ord = ord.lcm(&(q / q.gcd(c)));
        }
        Some(ord)
    }

    /// Generator e_i of the free part.
    pub fn free_generator(&self, i: usize) -> GroupElement {
        let mut x = self.zero();
        x.free_coords[i] = BigInt::one();
        x
    }

    /// Generator μ_j of Z_{2^{p_j}}.
    pub fn two_generator(&self, j: usize) -> GroupElement {
        let mut x = self.zero();
        x.two_coords[j] = BigInt::one();
        x
    }

    /// Generator ν_k of Z_{q_k}.
    pub fn odd_generator(&self, k: usize) -> GroupElement {
        let mut x = self.zero();
        x.odd_coords[k] = BigInt::one();
        x
    }

    /// The order-2 element 2^{p_j - 1} μ_j.
    pub fn two_torsion_generator(&self, j: usize) -> GroupElement {
        let mut x = self.zero();
        x.two_coords[j] = BigInt::one() << (self.two_primary[j] - 1);
        x
    }

    /// All γ with 2γ = 0, ordered by the bit pattern over 2-primary factors
    /// (bit j set means b_j = 2^{p_j - 1}).
    pub fn two_torsion(&self) -> Vec<GroupElement> {
        let t = self.two_primary.len();
        assert!(t < usize::BITS as usize, "too many 2-primary factors to enumerate");
        (0..1usize << t).map(|mask| self.two_torsion_from_mask(mask)).collect()
    }

    pub(crate) fn two_torsion_from_mask(&self, mask: usize) -> GroupElement {
        let mut x = self.zero();
        for j in 0..self.two_primary.len() {
            if mask >> j & 1 == 1 {
                x.two_coords[j] = BigInt::one() << (self.two_primary[j] - 1);
            }
        }
        x
    }

    /// Inverse of `two_torsion_from_mask`; None if `x` is not 2-torsion.
    pub fn two_torsion_mask(&self, x: &GroupElement) -> Option<usize> {
        if !x.free_coords.iter().all(Zero::is_zero) || !x.odd_coords.iter().all(Zero::is_zero) {
            return None;
        }
        let mut mask = 0;
        for (j, b) in x.two_coords.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            if *b != BigInt::one() << (self.two_primary[j] - 1) {
                return None;
            }
            mask |= 1 << j;
        }
        Some(mask)
    }

    /// Every element of the torsion subgroup (free coordinates zero).
    pub fn torsion_elements(&self) -> Vec<GroupElement> {
        let moduli: Vec<BigInt> = (0..self.two_primary.len())
            .map(|j| self.two_modulus(j))
            .chain(self.odd_orders.iter().cloned())
            .collect();
        let mut out = vec![Vec::<BigInt>::new()];
        for m in &moduli {
            let mut next = Vec::new();
            for prefix in &out {
                let mut r = BigInt::zero();
                while &r < m {
                    let mut v = prefix.clone();
                    v.push(r.clone());
                    next.push(v);
                    r += 1;
                }
            }
            out = next;
        }
        let t = self.two_primary.len();
        out.into_iter()
            .map(|mut v| {
                let odd = v.split_off(t);
                GroupElement { free_coords: vec![BigInt::zero(); self.free_rank], two_coords: v, odd_coords: odd }
            })
            .collect()
    }

    /// Elements with free coordinates in [-bound, bound] and all torsion coordinates.
    pub fn box_elements(&self, bound: i64) -> Vec<GroupElement> {
        let mut frees = vec![Vec::<BigInt>::new()];
        for _ in 0..self.free_rank {
            frees = frees
                .into_iter()
                .flat_map(|p| {
                    (-bound..=bound).map(move |a| {
                        let mut v = p.clone();
                        v.push(BigInt::from(a));
                        v
                    })
                })
                .collect();
        }
        let tors = self.torsion_elements();
        let mut out = Vec::with_capacity(frees.len() * tors.len());
        for f in &frees {
            for t in &tors {
                out.push(GroupElement { free_coords: f.clone(), ..t.clone() });
            }
        }
        out
    }

    /// Moduli of each torsion factor, in display order.
    pub fn factor_labels(&self) -> Vec<String> {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for j in 0..self.two_primary.len() {
            parts.push(format!("Z_{}", self.two_modulus(j)));
        }
        for q in &self.odd_orders {
            parts.push(format!("Z_{q}"));
        }
        parts
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.factor_labels();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" × "))
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<String> = self
            .free_coords
            .iter()
            .chain(&self.two_coords)
            .chain(&self.odd_coords)
            .map(|x| x.to_string())
            .collect();
        write!(f, "({})", all.join(", "))
    }
}
