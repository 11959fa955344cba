use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{power_with, OmegaElement, OmegaError, OmegaGroup, Sign};
use crate::fgab::GroupElement;

/// Ω(X) with its orientations recorded against a hidden reference gauge φ.
///
/// A raw element (α, s) stands for the orientation s·φ(α) in normal-form
/// coordinates, so raw multiplication is the normal-form law twisted by the
/// coboundary φ(α)φ(β)φ(α+β). Trivializations have to rediscover φ up to a
/// character, which is what the normal-form construction does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugedOmega {
    group: OmegaGroup,
    seed: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl GaugedOmega {
    pub fn new(group: OmegaGroup, seed: u64) -> Self {
        GaugedOmega { group, seed }
    }

    pub fn group(&self) -> &OmegaGroup {
        &self.group
    }

    /// φ(α); φ(0) = +.
    pub fn gauge(&self, alpha: &GroupElement) -> Sign {
        if self.group.k0().is_zero(alpha) {
            return Sign::Plus;
        }
        let mut h = splitmix(self.seed);
        for c in alpha.free_coords.iter().chain(&alpha.two_coords).chain(&alpha.odd_coords) {
            for b in c.to_signed_bytes_le() {
                h = splitmix(h ^ u64::from(b));
            }
            h = splitmix(h ^ 0xff);
        }
        Sign::from_parity(h & 1 == 1)
    }

    pub fn identity(&self) -> OmegaElement {
        self.group.identity()
    }

    pub fn multiply(&self, x: &OmegaElement, y: &OmegaElement) -> Result<OmegaElement, OmegaError> {
        let p = self.group.multiply(x, y)?;
        let twist = self.gauge(&x.coords) * self.gauge(&y.coords) * self.gauge(&p.coords);
        Ok(OmegaElement::new(p.coords, p.sign * twist))
    }

    pub fn inverse(&self, x: &OmegaElement) -> Result<OmegaElement, OmegaError> {
        let neg = self.group.k0().neg(&x.coords)?;
        let probe = self.multiply(x, &OmegaElement::new(neg.clone(), Sign::Plus))?;
        Ok(OmegaElement::new(neg, probe.sign))
    }

    pub fn power(&self, x: &OmegaElement, n: &BigInt) -> Result<OmegaElement, OmegaError> {
        power_with(x, n, &self.identity(), |a, b| self.multiply(a, b), |a| self.inverse(a))
    }
}

/// A choice of orientation for every α, i.e. an identification of Ω(X) with
/// K^0(X) × {±1}.
pub trait Trivialization {
    fn realization(&self) -> &GaugedOmega;

    /// Raw sign of the chosen orientation over α.
    fn section(&self, alpha: &GroupElement) -> Result<Sign, OmegaError>;

    /// Λ: raw element to (α, sign).
    fn to_coords(&self, raw: &OmegaElement) -> Result<OmegaElement, OmegaError> {
        Ok(OmegaElement::new(raw.coords.clone(), raw.sign * self.section(&raw.coords)?))
    }

    /// Λ⁻¹.
    fn from_coords(&self, c: &OmegaElement) -> Result<OmegaElement, OmegaError> {
        Ok(OmegaElement::new(c.coords.clone(), c.sign * self.section(&c.coords)?))
    }

    /// Multiplication carried over to coordinates.
    fn transported_multiply(&self, x: &OmegaElement, y: &OmegaElement) -> Result<OmegaElement, OmegaError> {
        let r = self.realization();
        self.to_coords(&r.multiply(&self.from_coords(x)?, &self.from_coords(y)?)?)
    }
}

/// Trivialization built from generator orientations: the free generators get
/// η_i, the 2-primary generators ζ_j, and each odd generator the unique sign
/// whose q-th power is the identity. Over α = (a, b, c) it takes the word
/// e_1^{a_1} ⋆ … ⋆ e_r^{a_r} ⋆ μ_1^{b_1} ⋆ … ⋆ ν_1^{c_1} ⋆ ….
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    realization: GaugedOmega,
    eta: Vec<Sign>,
    zeta: Vec<Sign>,
    odd: Vec<Sign>,
}

pub fn normal_form(real: &GaugedOmega, eta: Vec<Sign>, zeta: Vec<Sign>) -> Result<NormalForm, OmegaError> {
    let g = real.group().k0().clone();
    if eta.len() != g.free_rank() || zeta.len() != g.two_primary().len() {
        return Err(OmegaError::Shape(format!(
            "need {} free and {} 2-primary signs, got {} and {}",
            g.free_rank(),
            g.two_primary().len(),
            eta.len(),
            zeta.len()
        )));
    }
    let mut odd = Vec::new();
    for (k, q) in g.odd_orders().iter().enumerate() {
        let p = real.power(&OmegaElement::new(g.odd_generator(k), Sign::Plus), q)?;
        debug_assert!(g.is_zero(&p.coords));
        // q is odd, so flipping the generator's sign flips the sign of its q-th power.
        odd.push(p.sign);
    }
    Ok(NormalForm { realization: real.clone(), eta, zeta, odd })
}

impl NormalForm {
    pub fn eta(&self) -> &[Sign] {
        &self.eta
    }

    pub fn zeta(&self) -> &[Sign] {
        &self.zeta
    }

    /// The forced orientations of the odd-order generators.
    pub fn odd_signs(&self) -> &[Sign] {
        &self.odd
    }

    fn word(&self, alpha: &GroupElement) -> Result<OmegaElement, OmegaError> {
        let r = &self.realization;
        let g = r.group().k0();
        g.check(alpha)?;
        let mut acc = r.identity();
        let mut push = |gen: GroupElement, s: Sign, n: &BigInt| -> Result<(), OmegaError> {
            if !n.is_zero() {
                let p = r.power(&OmegaElement::new(gen, s), n)?;
                acc = r.multiply(&acc, &p)?;
            }
            Ok(())
        };
        for (i, a) in alpha.free_coords.iter().enumerate() {
            push(g.free_generator(i), self.eta[i], a)?;
        }
        for (j, b) in alpha.two_coords.iter().enumerate() {
            push(g.two_generator(j), self.zeta[j], b)?;
        }
        for (k, c) in alpha.odd_coords.iter().enumerate() {
            push(g.odd_generator(k), self.odd[k], c)?;
        }
        debug_assert_eq!(&acc.coords, alpha);
        Ok(acc)
    }
}

impl Trivialization for NormalForm {
    fn realization(&self) -> &GaugedOmega {
        &self.realization
    }

    fn section(&self, alpha: &GroupElement) -> Result<Sign, OmegaError> {
        Ok(self.word(alpha)?.sign)
    }
}

/// Signs η_i, ζ_j with Λ′ ∘ Λ⁻¹ (α, ε) = (α, Π η_i^{a_i} Π ζ_j^{b_j} ε).
pub fn compare_trivializations(
    a: &dyn Trivialization,
    b: &dyn Trivialization,
) -> Result<(Vec<Sign>, Vec<Sign>), OmegaError> {
    if a.realization() != b.realization() {
        return Err(OmegaError::Shape("trivializations of different groups".into()));
    }
    let g = a.realization().group().k0().clone();
    let delta = |x: &GroupElement| -> Result<Sign, OmegaError> { Ok(a.section(x)? * b.section(x)?) };

    for k in 0..g.odd_orders().len() {
        let nu = g.odd_generator(k);
        if delta(&nu)? != Sign::Plus {
            return Err(OmegaError::NonConforming(format!("odd generator {nu} changes orientation")));
        }
    }
    let eta: Vec<Sign> = (0..g.free_rank()).map(|i| delta(&g.free_generator(i))).collect::<Result<_, _>>()?;
    let zeta: Vec<Sign> = (0..g.two_primary().len()).map(|j| delta(&g.two_generator(j))).collect::<Result<_, _>>()?;

    let predicted = |x: &GroupElement| -> Sign {
        let mut s = Sign::Plus;
        for (i, c) in x.free_coords.iter().enumerate() {
            if c.is_odd() {
                s = s * eta[i];
            }
        }
        for (j, c) in x.two_coords.iter().enumerate() {
            if c.is_odd() {
                s = s * zeta[j];
            }
        }
        s
    };

    for x in check_set(&g) {
        if delta(&x)? != predicted(&x) {
            return Err(OmegaError::NonConforming(format!(
                "transition over {x} is not a product of generator signs"
            )));
        }
    }
    Ok((eta, zeta))
}

fn check_set(g: &crate::fgab::FgAbGroup) -> Vec<GroupElement> {
    let mut gens: Vec<GroupElement> = (0..g.free_rank()).map(|i| g.free_generator(i)).collect();
    gens.extend((0..g.two_primary().len()).map(|j| g.two_generator(j)));
    gens.extend((0..g.odd_orders().len()).map(|k| g.odd_generator(k)));
    let mut out = vec![g.zero()];
    for x in &gens {
        for n in [-2i64, -1, 2, 3] {
            out.push(g.scale(x, &BigInt::from(n)).expect("valid"));
        }
        for y in &gens {
            out.push(g.add(x, y).expect("valid"));
        }
    }
    out.extend(gens);
    if g.torsion_order() <= BigInt::from(256) {
        out.extend(g.torsion_elements());
    }
    let box_size = BigInt::from(3).pow(g.free_rank() as u32) * g.torsion_order();
    if box_size <= BigInt::from(2000) {
        out.extend(g.box_elements(1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::{FgAbGroup, IntMatrix};
    use crate::index::EulerForm;

    fn omega(r: usize, p: &[u32], q: &[i64], chi: &[i64], xi: Vec<Sign>) -> OmegaGroup {
        let g = FgAbGroup::new(r, p.to_vec(), q.iter().map(|&x| BigInt::from(x)).collect()).unwrap();
        OmegaGroup::new(EulerForm::new(g, IntMatrix::from_i64(r, r, chi).unwrap()).unwrap(), xi).unwrap()
    }

    #[test]
    fn transported_law_is_the_normal_form_law() {
        let om = omega(2, &[1, 2], &[3], &[1, 1, 1, 2], vec![Sign::Minus, Sign::Plus]);
        let real = GaugedOmega::new(om.clone(), 7);
        let nf = normal_form(&real, vec![Sign::Minus, Sign::Plus], vec![Sign::Plus, Sign::Minus]).unwrap();
        let elems = om.k0().box_elements(1);
        for x in elems.iter().step_by(5) {
            for y in elems.iter().step_by(7) {
                for (s, t) in [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Minus)] {
                    let a = OmegaElement::new(x.clone(), s);
                    let b = OmegaElement::new(y.clone(), t);
                    assert_eq!(nf.transported_multiply(&a, &b).unwrap(), om.multiply(&a, &b).unwrap());
                }
            }
        }
    }

    #[test]
    fn odd_generator_sign_is_forced() {
        let om = omega(0, &[], &[3], &[], vec![]);
        let real = GaugedOmega::new(om.clone(), 11);
        let nf = normal_form(&real, vec![], vec![]).unwrap();
        let nu = om.k0().odd_generator(0);
        let hits: Vec<Sign> = [Sign::Plus, Sign::Minus]
            .into_iter()
            .filter(|s| {
                let p = real.power(&OmegaElement::new(nu.clone(), *s), &BigInt::from(3)).unwrap();
                p == real.identity()
            })
            .collect();
        assert_eq!(hits, nf.odd_signs());
    }

    #[test]
    fn free_choice_changes_by_eta_power() {
        let om = omega(1, &[], &[], &[3], vec![]);
        let real = GaugedOmega::new(om.clone(), 3);
        let plus = normal_form(&real, vec![Sign::Plus], vec![]).unwrap();
        let minus = normal_form(&real, vec![Sign::Minus], vec![]).unwrap();
        for a in -4..=4 {
            let x = om.k0().from_i64(&[a], &[], &[]).unwrap();
            let raw = plus.from_coords(&OmegaElement::new(x.clone(), Sign::Plus)).unwrap();
            let there = minus.to_coords(&raw).unwrap();
            assert_eq!(there.sign, Sign::from_parity(a % 2 != 0));
        }
        assert_eq!(compare_trivializations(&plus, &minus).unwrap(), (vec![Sign::Minus], vec![]));
        assert_eq!(compare_trivializations(&plus, &plus).unwrap(), (vec![Sign::Plus], vec![]));
    }

    #[test]
    fn z4_zeta() {
        let om = omega(0, &[2], &[], &[], vec![Sign::Minus]);
        let real = GaugedOmega::new(om.clone(), 5);
        let a = normal_form(&real, vec![], vec![Sign::Plus]).unwrap();
        let b = normal_form(&real, vec![], vec![Sign::Minus]).unwrap();
        assert_eq!(compare_trivializations(&a, &b).unwrap(), (vec![], vec![Sign::Minus]));
        let x = OmegaElement::new(om.k0().from_i64(&[], &[1], &[]).unwrap(), Sign::Plus);
        let y = b.to_coords(&a.from_coords(&x).unwrap()).unwrap();
        assert_eq!(y.sign, Sign::Minus);
    }

    #[test]
    fn trivial_group() {
        let om = omega(0, &[], &[], &[], vec![]);
        let real = GaugedOmega::new(om.clone(), 0);
        let nf = normal_form(&real, vec![], vec![]).unwrap();
        for s in [Sign::Plus, Sign::Minus] {
            let e = OmegaElement::new(om.k0().zero(), s);
            assert_eq!(nf.to_coords(&e).unwrap(), e);
        }
    }

    struct Skewed<'a>(&'a NormalForm);

    impl Trivialization for Skewed<'_> {
        fn realization(&self) -> &GaugedOmega {
            self.0.realization()
        }
        fn section(&self, alpha: &GroupElement) -> Result<Sign, OmegaError> {
            let flip = alpha.free_coords.first().is_some_and(|a| *a == BigInt::from(2));
            Ok(self.0.section(alpha)? * Sign::from_parity(flip))
        }
    }

    #[test]
    fn non_conforming_detected() {
        let om = omega(1, &[], &[], &[0], vec![]);
        let real = GaugedOmega::new(om, 9);
        let nf = normal_form(&real, vec![Sign::Plus], vec![]).unwrap();
        let err = compare_trivializations(&nf, &Skewed(&nf)).unwrap_err();
        assert!(matches!(err, OmegaError::NonConforming(_)));
    }
}
