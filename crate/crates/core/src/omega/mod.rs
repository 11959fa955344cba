//! The orientation group Ω(X): a central extension of K^0(X) by {±1}.
//!
//! Elements are stored in normal-form coordinates (α, s). Multiplication is
//!
//! ```text
//! (α, s) ⋆ (β, t) = (α + β, (−1)^e · Ξ(γ) · s · t),
//! e = Σ_{h<i} (χ_hi + χ_hh χ_ii) b_h a_i,
//! ```
//!
//! where a, b are the free coordinates of α, β and γ is the carry of the
//! 2-primary coordinates: γ_j = 2^{p_j − 1} exactly when a_j + b_j ≥ 2^{p_j}.

mod trivialization;

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::fgab::{FgAbGroup, FgabError, GroupElement};
use crate::index::{EulerForm, IndexError};

pub use trivialization::{compare_trivializations, normal_form, GaugedOmega, NormalForm, Trivialization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("inconsistent square oracle: {0}")]
    Inconsistent(String),
    #[error("non-conforming trivialization: {0}")]
    NonConforming(String),
    #[error(transparent)]
    Fgab(#[from] FgabError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

impl OmegaError {
    pub fn name(&self) -> &'static str {
        match self {
            OmegaError::Shape(_) => "ShapeError",
            OmegaError::Inconsistent(_) => "InconsistencyError",
            OmegaError::NonConforming(_) => "NonConformingError",
            OmegaError::Fgab(e) => e.name(),
            OmegaError::Index(e) => e.name(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// (−1)^n
    pub fn pow_of_minus_one(n: &BigInt) -> Self {
        Sign::from_parity(n.is_odd())
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "+" | "+1" | "1" => Some(Sign::Plus),
            "-" | "-1" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaElement {
    pub coords: GroupElement,
    pub sign: Sign,
}

impl OmegaElement {
    pub fn new(coords: GroupElement, sign: Sign) -> Self {
        OmegaElement { coords, sign }
    }
}

impl fmt::Display for OmegaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.coords, self.sign)
    }
}

/// Ω(X) presented by (K^0(X), χ, Ξ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaGroup {
    chi: EulerForm,
    /// Ξ on the order-2 element of each 2-primary factor.
    xi: Vec<Sign>,
    /// (χ_hi + χ_hh χ_ii) mod 2 for h < i, row-major r × r.
    parity: Vec<bool>,
}

impl OmegaGroup {
    pub fn new(chi: EulerForm, xi: Vec<Sign>) -> Result<Self, OmegaError> {
        let t = chi.group().two_primary().len();
        if xi.len() != t {
            return Err(OmegaError::Shape(format!("Ξ has {} values for {t} 2-primary factors", xi.len())));
        }
        let r = chi.group().free_rank();
        let mut parity = vec![false; r * r];
        for h in 0..r {
            for i in h + 1..r {
                let v = chi.entry(h, i) + chi.entry(h, h) * chi.entry(i, i);
                parity[h * r + i] = v.is_odd();
            }
        }
        Ok(OmegaGroup { chi, xi, parity })
    }

    /// Ξ ≡ +1.
    pub fn with_trivial_xi(chi: EulerForm) -> Self {
        let t = chi.group().two_primary().len();
        Self::new(chi, vec![Sign::Plus; t]).expect("lengths agree")
    }

    /// Build from an explicit table of Ξ on every 2-torsion element.
    pub fn from_xi_table(chi: EulerForm, table: &[(GroupElement, Sign)]) -> Result<Self, OmegaError> {
        let g = chi.group().clone();
        let lookup = |x: &GroupElement| -> Result<Sign, OmegaError> {
            table
                .iter()
                .find(|(e, _)| e == x)
                .map(|(_, s)| *s)
                .ok_or_else(|| OmegaError::Inconsistent(format!("Ξ table misses {x}")))
        };
        for (e, _) in table {
            if g.two_torsion_mask(e).is_none() {
                return Err(OmegaError::Inconsistent(format!("{e} is not 2-torsion")));
            }
        }
        xi_from_squares(chi, |x| lookup(x))
    }

    pub fn k0(&self) -> &FgAbGroup {
        self.chi.group()
    }

    pub fn chi(&self) -> &EulerForm {
        &self.chi
    }

    pub fn xi_generators(&self) -> &[Sign] {
        &self.xi
    }

    /// Ξ(γ) for a 2-torsion γ.
    pub fn xi(&self, gamma: &GroupElement) -> Result<Sign, OmegaError> {
        let mask = self
            .k0()
            .two_torsion_mask(gamma)
            .ok_or_else(|| OmegaError::Shape(format!("{gamma} is not 2-torsion")))?;
        Ok(self.xi_mask(mask))
    }

    fn xi_mask(&self, mask: usize) -> Sign {
        self.xi
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .fold(Sign::Plus, |acc, (_, s)| acc * *s)
    }

    /// Ξ on every 2-torsion element, in `two_torsion` order.
    pub fn xi_table(&self) -> Vec<(GroupElement, Sign)> {
        self.k0()
            .two_torsion()
            .into_iter()
            .enumerate()
            .map(|(mask, g)| (g, self.xi_mask(mask)))
            .collect()
    }

    pub fn identity(&self) -> OmegaElement {
        OmegaElement::new(self.k0().zero(), Sign::Plus)
    }

    pub fn element(&self, coords: GroupElement, sign: Sign) -> Result<OmegaElement, OmegaError> {
        self.k0().check(&coords)?;
        Ok(OmegaElement::new(coords, sign))
    }

    /// The sign factor of `x ⋆ y` apart from the operands' own signs.
    pub fn cocycle(&self, x: &GroupElement, y: &GroupElement) -> Result<Sign, OmegaError> {
        let g = self.k0();
        g.check(x)?;
        g.check(y)?;
        let r = g.free_rank();
        let mut odd = false;
        for h in 0..r {
            if y.free_coords[h].is_even() {
                continue;
            }
            for i in h + 1..r {
                if self.parity[h * r + i] && x.free_coords[i].is_odd() {
                    odd = !odd;
                }
            }
        }
        let mut mask = 0usize;
        for j in 0..g.two_primary().len() {
            if &x.two_coords[j] + &y.two_coords[j] >= g.two_modulus(j) {
                mask |= 1 << j;
            }
        }
        Ok(Sign::from_parity(odd) * self.xi_mask(mask))
    }

    pub fn multiply(&self, x: &OmegaElement, y: &OmegaElement) -> Result<OmegaElement, OmegaError> {
        let c = self.cocycle(&x.coords, &y.coords)?;
        let coords = self.k0().add(&x.coords, &y.coords)?;
        Ok(OmegaElement::new(coords, c * x.sign * y.sign))
    }

    pub fn inverse(&self, x: &OmegaElement) -> Result<OmegaElement, OmegaError> {
        let neg = self.k0().neg(&x.coords)?;
        let c = self.cocycle(&x.coords, &neg)?;
        Ok(OmegaElement::new(neg, c * x.sign))
    }

    /// x^n by repeated squaring; negative n uses the inverse.
    pub fn power(&self, x: &OmegaElement, n: &BigInt) -> Result<OmegaElement, OmegaError> {
        power_with(x, n, &self.identity(), |a, b| self.multiply(a, b), |a| self.inverse(a))
    }

    /// The coordinate projection Ω(X) → K^0(X).
    pub fn project<'a>(&self, x: &'a OmegaElement) -> &'a GroupElement {
        &x.coords
    }
}

pub(crate) fn power_with(
    x: &OmegaElement,
    n: &BigInt,
    identity: &OmegaElement,
    mul: impl Fn(&OmegaElement, &OmegaElement) -> Result<OmegaElement, OmegaError>,
    inv: impl Fn(&OmegaElement) -> Result<OmegaElement, OmegaError>,
) -> Result<OmegaElement, OmegaError> {
    let (mut base, mut e) = if n.sign() == num_bigint::Sign::Minus { (inv(x)?, -n) } else { (x.clone(), n.clone()) };
    let mut acc = identity.clone();
    let two = BigInt::from(2);
    while e > BigInt::from(0) {
        if e.is_odd() {
            acc = mul(&acc, &base)?;
        }
        base = mul(&base, &base)?;
        e /= &two;
    }
    Ok(acc)
}

/// Multiplication, free-function form.
pub fn multiply(g: &OmegaGroup, x: &OmegaElement, y: &OmegaElement) -> Result<OmegaElement, OmegaError> {
    g.multiply(x, y)
}

/// Recover Ξ from the signs of squares of 2-torsion elements.
///
/// The oracle is asked about every 2-torsion element; its answers must form a
/// morphism (Z_2)^t → {±1}.
pub fn xi_from_squares(
    chi: EulerForm,
    oracle: impl Fn(&GroupElement) -> Result<Sign, OmegaError>,
) -> Result<OmegaGroup, OmegaError> {
    let g = chi.group().clone();
    let t = g.two_primary().len();
    let values: Vec<Sign> = g.two_torsion().iter().map(&oracle).collect::<Result<_, _>>()?;
    let xi: Vec<Sign> = (0..t).map(|j| values[1 << j]).collect();
    for (mask, v) in values.iter().enumerate() {
        let expect = (0..t).filter(|j| mask >> j & 1 == 1).fold(Sign::Plus, |a, j| a * xi[j]);
        if *v != expect {
            return Err(OmegaError::Inconsistent(format!(
                "square of {} is {v} but the morphism forces {expect}",
                g.two_torsion_from_mask(mask)
            )));
        }
    }
    OmegaGroup::new(chi, xi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SwapFlavor {
    /// Sign of the swap isomorphism of determinant lines: (−1)^{ind_P · ind_Q}.
    TorsorLambda,
    /// Sign relating the two direct-sum orientations: (−1)^{χ(α,β) + χ(α,α)χ(β,β)}.
    TorsorPhi,
}

pub fn swap_sign(form: &EulerForm, alpha: &GroupElement, beta: &GroupElement, flavor: SwapFlavor) -> Result<Sign, OmegaError> {
    let aa = form.pair(alpha, alpha)?;
    let bb = form.pair(beta, beta)?;
    let both = aa.is_odd() && bb.is_odd();
    Ok(match flavor {
        SwapFlavor::TorsorLambda => Sign::from_parity(both),
        SwapFlavor::TorsorPhi => Sign::from_parity(form.pair(alpha, beta)?.is_odd() != both),
    })
}

/// The associativity isomorphisms of direct sums carry no sign.
pub fn associator_sign() -> Sign {
    Sign::Plus
}
