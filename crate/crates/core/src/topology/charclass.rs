use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::model::ManifoldModel;
use super::ring::CohClass;
use super::TopologyError;

/// A virtual complex bundle on a model: rank and Chern classes c_1, c_2, ….
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClassData {
    pub model: Arc<ManifoldModel>,
    pub rank: BigInt,
    /// `chern[i - 1]` is c_i. Entries past the end are treated as missing.
    pub chern: Vec<CohClass>,
}

impl KClassData {
    pub fn new(model: &Arc<ManifoldModel>, rank: BigInt, chern: Vec<CohClass>) -> Result<Self, TopologyError> {
        for (i, c) in chern.iter().enumerate() {
            if !Arc::ptr_eq(c.ring(), &model.ring) && **c.ring() != *model.ring {
                return Err(TopologyError::Shape(format!("c_{} lives on another model", i + 1)));
            }
            let deg = 2 * (i as u32 + 1);
            if !c.is_homogeneous_of(deg) {
                return Err(TopologyError::Shape(format!("c_{} is not of degree {deg}", i + 1)));
            }
        }
        Ok(KClassData { model: model.clone(), rank, chern })
    }

    /// Rank-r class with all Chern classes zero.
    pub fn trivial(model: &Arc<ManifoldModel>, rank: i64) -> Self {
        let chern = (1..=model.dim / 2).map(|_| model.zero()).collect();
        KClassData { model: model.clone(), rank: BigInt::from(rank), chern }
    }

    /// c_i, or an error if it is needed (H^{2i} ≠ 0) but absent.
    pub fn chern_class(&self, i: u32) -> Result<CohClass, TopologyError> {
        if i == 0 {
            return Ok(self.model.one());
        }
        if let Some(c) = self.chern.get(i as usize - 1) {
            return Ok(c.clone());
        }
        if 2 * i <= self.model.dim && self.model.ring.rank_in_degree(2 * i) > 0 {
            return Err(TopologyError::IncompleteData(format!("c_{i} is required on {}", self.model.name)));
        }
        Ok(self.model.zero())
    }

    pub fn chern_character(&self) -> Result<CohClass, TopologyError> {
        let n = self.model.dim / 2;
        let c: Vec<CohClass> = (1..=n).map(|i| self.chern_class(i)).collect::<Result<_, _>>()?;
        let s = newton_power_sums(&c);
        let mut ch = CohClass::constant(&self.model.ring, BigRational::from_integer(self.rank.clone()));
        let mut fact = BigInt::one();
        for (k, sk) in s.iter().enumerate() {
            fact *= k + 1;
            ch = &ch + &sk.scale(&BigRational::new(BigInt::one(), fact.clone()));
        }
        Ok(ch)
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, TopologyError> {
        let n = self.model.dim / 2;
        let total = |k: &Self| -> Result<CohClass, TopologyError> {
            let mut t = self.model.one();
            for i in 1..=n {
                t = t.checked_add(&k.chern_class(i)?)?;
            }
            Ok(t)
        };
        let prod = total(self)?.checked_mul(&total(other)?)?;
        let chern = (1..=n).map(|i| prod.part(2 * i)).collect();
        KClassData::new(&self.model, &self.rank + &other.rank, chern)
    }
}

impl KClassData {
    /// Line bundle with first Chern class `c1`.
    pub fn line_bundle(model: &Arc<ManifoldModel>, c1: CohClass) -> Result<Self, TopologyError> {
        let mut chern = vec![c1];
        chern.extend((2..=model.dim / 2).map(|_| model.zero()));
        KClassData::new(model, BigInt::one(), chern)
    }

    /// Recover rank and Chern classes from a Chern character.
    pub fn from_chern_character(model: &Arc<ManifoldModel>, ch: &CohClass) -> Result<Self, TopologyError> {
        let rank = ch.constant_term();
        if !rank.is_integer() {
            return Err(TopologyError::Shape(format!("rank {rank} is not an integer")));
        }
        let n = model.dim / 2;
        let mut fact = BigInt::one();
        let mut s = Vec::new();
        for k in 1..=n {
            fact *= k;
            s.push(ch.part(2 * k).scale(&BigRational::from_integer(fact.clone())));
        }
        // k c_k = Σ_{i=1}^{k} (−1)^{i−1} c_{k−i} s_i
        let mut c: Vec<CohClass> = vec![model.one()];
        for k in 1..=n as usize {
            let mut acc = model.zero();
            for i in 1..=k {
                let t = &c[k - i] * &s[i - 1];
                acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
            }
            c.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(k))));
        }
        c.remove(0);
        KClassData::new(model, rank.to_integer(), c)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, TopologyError> {
        let ch = self.chern_character()?.checked_mul(&other.chern_character()?)?;
        Self::from_chern_character(&self.model, &ch)
    }
}

/// Power sums s_1, …, s_n of the roots from elementary symmetric e_1, …, e_n.
pub(crate) fn newton_power_sums(e: &[CohClass]) -> Vec<CohClass> {
    let mut s: Vec<CohClass> = Vec::with_capacity(e.len());
    for k in 1..=e.len() {
        let sign = |j: usize| if j % 2 == 1 { 1 } else { -1 };
        let mut sk = e[k - 1].scale_int(sign(k) * k as i64);
        for i in 1..k {
            sk = &sk + &(&e[i - 1] * &s[k - i - 1]).scale_int(sign(i));
        }
        s.push(sk);
    }
    s
}

type Series = Vec<BigRational>;

fn series_mul(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![BigRational::zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn series_inv(a: &Series, n: usize) -> Series {
    let mut out = vec![BigRational::zero(); n];
    out[0] = a[0].recip();
    for k in 1..n {
        let mut acc = BigRational::zero();
        for i in 1..=k.min(a.len() - 1) {
            acc += &a[i] * &out[k - i];
        }
        out[k] = -acc / &a[0];
    }
    out
}

/// Coefficients of log Q for Q with constant term 1.
fn series_log(a: &Series, n: usize) -> Series {
    let deriv: Series = (1..n + 1).map(|k| a.get(k).cloned().unwrap_or_else(BigRational::zero) * BigInt::from(k)).collect();
    let q = series_mul(&deriv, &series_inv(a, n), n);
    let mut out = vec![BigRational::zero(); n];
    for k in 1..n {
        out[k] = &q[k - 1] / BigInt::from(k);
    }
    out
}

fn factorial(k: u64) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// Q(z) for Â, with z = x²: (√z/2) / sinh(√z/2).
pub(crate) fn a_hat_series(n: usize) -> Series {
    let denom: Series = (0..n)
        .map(|k| BigRational::new(BigInt::one(), (BigInt::one() << (2 * k)) * factorial(2 * k as u64 + 1)))
        .collect();
    series_inv(&denom, n)
}

/// Q(z) for L, with z = x²: √z / tanh √z.
pub(crate) fn l_series(n: usize) -> Series {
    let num: Series = (0..n).map(|k| BigRational::new(BigInt::one(), factorial(2 * k as u64))).collect();
    let den: Series = (0..n).map(|k| BigRational::new(BigInt::one(), factorial(2 * k as u64 + 1))).collect();
    series_mul(&num, &series_inv(&den, n), n)
}

/// Multiplicative sequence of Q evaluated on the total Pontryagin class.
fn genus(model: &ManifoldModel, q: impl Fn(usize) -> Series) -> CohClass {
    let m = (model.dim / 4) as usize;
    let n = m + 1;
    let logq = series_log(&q(n), n);
    let p: Vec<CohClass> = (1..=m as u32).map(|i| model.pontryagin_class(i)).collect();
    let sums = newton_power_sums(&p);
    let mut log_class = model.zero();
    for (k, pk) in sums.iter().enumerate() {
        log_class = &log_class + &pk.scale(&logq[k + 1]);
    }
    log_class.exp_nilpotent()
}

impl ManifoldModel {
    pub fn a_hat(&self) -> CohClass {
        genus(self, a_hat_series)
    }

    pub fn l_class(&self) -> CohClass {
        genus(self, l_series)
    }

    /// Td = e^{c_1/2} Â, for complex models.
    pub fn todd(&self) -> Option<CohClass> {
        let c1 = self.chern_class(1)?;
        Some(&c1.scale(&BigRational::new(BigInt::one(), BigInt::from(2))).exp_nilpotent() * &self.a_hat())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharClasses {
    pub chern_character: CohClass,
    pub a_hat: CohClass,
    pub l_class: CohClass,
}

pub fn char_classes(k: &KClassData) -> Result<CharClasses, TopologyError> {
    Ok(CharClasses {
        chern_character: k.chern_character()?,
        a_hat: k.model.a_hat(),
        l_class: k.model.l_class(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiProfile {
    pub euler_characteristic: BigInt,
    pub signature: Option<BigInt>,
    pub odd_mod2_vanishes: bool,
}

pub fn betti_profile(model: &ManifoldModel) -> BettiProfile {
    let signature = (model.orientable && model.dim % 4 == 0).then(|| {
        let s = model.l_class().integrate();
        assert!(s.is_integer(), "L-genus of {} is not integral", model.name);
        s.to_integer()
    });
    BettiProfile {
        euler_characteristic: model.euler_characteristic(),
        signature,
        odd_mod2_vanishes: model.betti_mod2.iter().skip(1).step_by(2).all(|b| *b == 0),
    }
}

/// Cup product and its integral over the fundamental class.
pub fn cup_and_integrate(a: &CohClass, b: &CohClass) -> Result<(CohClass, BigRational), TopologyError> {
    let p = a.checked_mul(b)?;
    let i = p.integrate();
    Ok((p, i))
}
