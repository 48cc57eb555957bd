//! Characters of finite fields, Gauss sums and nilpotent character lifts.
//!
//! A multiplicative character of `F_Q^x` is stored as an exponent `e`:
//! it sends the field generator `g` to `zeta_{Q-1}^e`. The additive
//! character is `psi(x) = zeta_p^{Tr(x)}` with the trace to the prime field.

use std::sync::Arc;

use serde_json::json;

use crate::arith;
use crate::artin::{ArtinAlg, ArtinElem};
use crate::cyclo::{CycInt, CycRing};
use crate::error::{invalid, Error, Result};
use crate::ffield::{FqElem, FqField, Subfield};
use crate::reduce::ReductionMap;
use crate::ring::{Ring, RingElem};

/// A multiplicative character `g -> zeta_{Q-1}^exponent` of `F_Q^x`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultChar {
    field: FqField,
    exponent: u64,
}

impl MultChar {
    pub fn new(field: &FqField, exponent: i64) -> Self {
        MultChar {
            field: field.clone(),
            exponent: exponent.rem_euclid(field.units() as i64) as u64,
        }
    }

    pub fn trivial(field: &FqField) -> Self {
        Self::new(field, 0)
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The order of the character.
    pub fn order(&self) -> u64 {
        let n = self.field.units();
        n / arith::gcd(n, self.exponent)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// `k` with `chi(x) = zeta_{Q-1}^k`.
    pub fn value_exponent(&self, x: &FqElem) -> Result<u64> {
        let k = self.field.dlog(x)?;
        Ok(arith::mul_mod(self.exponent, k, self.field.units()))
    }

    /// `chi(x)` in `Z[zeta_{Q-1}]`.
    pub fn eval(&self, x: &FqElem) -> Result<CycInt> {
        self.eval_in(&CycRing::new(self.field.units())?, x)
    }

    /// `chi(x)` in a cyclotomic ring `Z[zeta_M]` with `Q - 1 | M`.
    pub fn eval_in(&self, ring: &CycRing, x: &FqElem) -> Result<CycInt> {
        let step = embedding_step(ring.order(), self.field.units())?;
        Ok(ring.zeta_pow((self.value_exponent(x)? * step) as i64))
    }

    pub fn inverse(&self) -> MultChar {
        Self::new(&self.field, -(self.exponent as i64))
    }

    pub fn mul(&self, rhs: &MultChar) -> Result<MultChar> {
        if self.field != rhs.field {
            return invalid("characters of different fields");
        }
        Ok(Self::new(
            &self.field,
            (self.exponent + rhs.exponent) as i64,
        ))
    }

    pub fn pow(&self, k: i64) -> MultChar {
        let n = self.field.units() as i128;
        Self::new(
            &self.field,
            ((self.exponent as i128 * k as i128).rem_euclid(n)) as i64,
        )
    }

    /// `chi o Frob`, with `Frob(x) = x^p`.
    pub fn frobenius(&self) -> MultChar {
        self.pow(self.field.characteristic() as i64)
    }

    /// `chi o N` for a character `chi` of the subfield.
    pub fn compose_norm(&self, sub: &Subfield) -> Result<MultChar> {
        if *sub.field() != self.field {
            return invalid("character is not defined on the given subfield");
        }
        Ok(Self::new(
            sub.top(),
            (self.exponent * sub.norm_exponent()) as i64,
        ))
    }

    /// Restriction to the subfield `F_q^x`.
    pub fn restrict(&self, sub: &Subfield) -> Result<MultChar> {
        if *sub.top() != self.field {
            return invalid("character is not defined on the subfield's top field");
        }
        Ok(Self::new(sub.field(), self.exponent as i64))
    }

    /// True iff `chi^{p^sub_deg} != chi`.
    pub fn is_regular(&self, sub_deg: u32) -> bool {
        let n = self.field.units();
        let r = self.field.characteristic().pow(sub_deg) % n;
        arith::mul_mod(self.exponent, r, n) != self.exponent
    }

    /// `{field: [p, f], exponent}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "field": [self.field.characteristic(), self.field.degree()],
            "exponent": self.exponent,
        })
    }
}

fn embedding_step(big: u64, small: u64) -> Result<u64> {
    if !big.is_multiple_of(small) {
        return invalid(format!("zeta_{small} does not lie in Z[zeta_{big}]"));
    }
    Ok(big / small)
}

/// The additive character `psi(x) = zeta_p^{Tr(x)}`.
#[derive(Clone, Debug)]
pub struct AddChar {
    field: FqField,
    traces: Arc<Vec<u32>>,
}

impl PartialEq for AddChar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.traces == other.traces
    }
}

impl AddChar {
    /// `zeta_p^{Tr_{F_Q/F_p}(x)}`.
    pub fn canonical(field: &FqField) -> Result<Self> {
        let p = field.characteristic();
        let f = field.degree() as usize;
        // Trace is F_p-linear, so the traces of 1, t, ..., t^{f-1} suffice.
        let basis: Vec<u64> = (0..f)
            .map(|i| {
                let mut c = vec![0; f];
                c[i] = 1;
                let ti = field.elem(&c)?;
                Ok(field.trace_norm_frob(&ti, 1)?.trace.index())
            })
            .collect::<Result<_>>()?;
        let traces = field
            .elements()
            .map(|x| {
                let s: u64 = x
                    .coeffs()
                    .iter()
                    .zip(&basis)
                    .map(|(&c, &b)| c as u64 * b)
                    .sum();
                (s % p) as u32
            })
            .collect();
        Ok(AddChar {
            field: field.clone(),
            traces: Arc::new(traces),
        })
    }

    /// `x -> psi_q(Tr_{F_Q/F_q}(x))` for the canonical character `psi_q`
    /// of the subfield of degree `sub_deg`. By transitivity of the trace it
    /// agrees with [`AddChar::canonical`]; it is built independently so the
    /// identity can be tested.
    pub fn through_trace(field: &FqField, sub_deg: u32) -> Result<Self> {
        let sub = field.subfield(sub_deg)?;
        let inner = AddChar::canonical(sub.field())?;
        let traces = field
            .elements()
            .map(|x| {
                let t = field.trace_norm_frob(&x, sub_deg)?.trace;
                Ok(inner.traces[sub.restrict(&t)?.index() as usize])
            })
            .collect::<Result<_>>()?;
        Ok(AddChar {
            field: field.clone(),
            traces: Arc::new(traces),
        })
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// `k` with `psi(x) = zeta_p^k`.
    pub fn value_exponent(&self, x: &FqElem) -> Result<u64> {
        if *x.field() != self.field {
            return invalid(format!("{x:?} is not in the character's field"));
        }
        Ok(self.traces[x.index() as usize] as u64)
    }

    pub fn eval(&self, x: &FqElem) -> Result<CycInt> {
        let ring = CycRing::new(self.field.characteristic())?;
        Ok(ring.zeta_pow(self.value_exponent(x)? as i64))
    }

    /// The character with values in a ring, given the image of `zeta_p`.
    pub fn realize<E: RingElem>(&self, zeta_p: E) -> Result<RealizedAddChar<E>> {
        let p = self.field.characteristic();
        let mut powers = Vec::with_capacity(p as usize);
        let mut acc = zeta_p.ring().one();
        for _ in 0..p {
            powers.push(acc.clone());
            acc = acc.mul(&zeta_p);
        }
        if !acc.sub(&zeta_p.ring().one()).is_zero() || powers.get(1).is_some_and(|z| z.is_one()) {
            return invalid(format!(
                "{zeta_p:?} is not a primitive {p}-th root of unity"
            ));
        }
        Ok(RealizedAddChar {
            chr: self.clone(),
            powers: Arc::new(powers),
        })
    }

    /// Pushes `psi` through a reduction map whose source contains `zeta_p`.
    pub fn reduce(&self, map: &ReductionMap) -> Result<RealizedAddChar<ArtinElem>> {
        let step = embedding_step(map.source().order(), self.field.characteristic())?;
        self.realize(map.zeta_image(step as i64))
    }
}

/// An additive character with values in a ring `R`.
#[derive(Clone, Debug)]
pub struct RealizedAddChar<E> {
    chr: AddChar,
    powers: Arc<Vec<E>>,
}

impl<E: RingElem> RealizedAddChar<E> {
    pub fn character(&self) -> &AddChar {
        &self.chr
    }

    pub fn field(&self) -> &FqField {
        &self.chr.field
    }

    pub fn eval(&self, x: &FqElem) -> Result<E> {
        Ok(self.powers[self.chr.value_exponent(x)? as usize].clone())
    }

    fn eval_index(&self, idx: u64) -> &E {
        &self.powers[self.chr.traces[idx as usize] as usize]
    }
}

/// `tau(chi, psi) = sum_{x != 0} chi(x) psi(x)` in `Z[zeta_M]`,
/// `M = lcm(Q - 1, p)`.
pub fn gauss_sum(chi: &MultChar, psi: &AddChar) -> Result<CycInt> {
    let m = arith::lcm(chi.field.units(), chi.field.characteristic());
    gauss_sum_in(chi, psi, &CycRing::new(m)?)
}

/// [`gauss_sum`] computed directly in `Z[zeta_M]` for a multiple `M` of
/// `lcm(Q - 1, p)`.
pub fn gauss_sum_in(chi: &MultChar, psi: &AddChar, ring: &CycRing) -> Result<CycInt> {
    if chi.field != psi.field {
        return invalid("multiplicative and additive characters on different fields");
    }
    let field = &chi.field;
    let m = ring.order();
    let (units, p) = (field.units(), field.characteristic());
    let mult_step = embedding_step(m, units)?;
    let add_step = embedding_step(m, p)?;
    let mut counts = vec![0i64; m as usize];
    for k in 0..units {
        let x = field.gen_pow(k as i64);
        let e =
            arith::mul_mod(chi.exponent, k, units) * mult_step + psi.value_exponent(&x)? * add_step;
        counts[(e % m) as usize] += 1;
    }
    ring.from_power_counts(&counts)
}

/// `sum_k v^k psi(g^k)` for the character sending the generator `g` to `v`.
pub fn gauss_sum_with<E: RingElem>(
    field: &FqField,
    value_at_generator: &E,
    psi: &RealizedAddChar<E>,
) -> Result<E> {
    if psi.field() != field {
        return invalid("multiplicative and additive characters on different fields");
    }
    let ring = value_at_generator.ring();
    let mut acc = ring.zero();
    let mut v = ring.one();
    for k in 0..field.units() {
        let x = field.gen_pow(k as i64);
        acc = acc.add(&v.mul(psi.eval_index(x.index())));
        v = v.mul(value_at_generator);
    }
    Ok(acc)
}

/// Gauss sum of a nilpotent lift against an `R`-valued additive character.
pub fn gauss_sum_artin(chi: &NilCharLift, psi: &RealizedAddChar<ArtinElem>) -> Result<ArtinElem> {
    if chi.value.alg() != psi.powers[0].alg() {
        return invalid("character and additive character take values in different algebras");
    }
    gauss_sum_with(&chi.field, &chi.value, psi)
}

/// A character of `F_Q^x` with values in `F_{l^d}[Y]/(Y^N)`, lifting the
/// `k`-valued character of exponent `residue_exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct NilCharLift {
    field: FqField,
    value: ArtinElem,
    residue_exponent: u64,
}

impl NilCharLift {
    /// Checks that `value^{Q-1} = 1` and that its residue is the residue of
    /// the image of `zeta_{Q-1}^residue_exponent` under `map`.
    pub fn new(
        field: &FqField,
        value_at_generator: ArtinElem,
        residue_exponent: i64,
        map: &ReductionMap,
    ) -> Result<Self> {
        let units = field.units();
        if value_at_generator.alg() != map.target() {
            return invalid("lift value does not lie in the map's target");
        }
        if !value_at_generator.pow(units).is_one() {
            return Err(Error::ContractViolation(format!(
                "{value_at_generator:?} has order not dividing {units}"
            )));
        }
        let step = embedding_step(map.source().order(), units)?;
        let e = residue_exponent.rem_euclid(units as i64) as u64;
        let expected = map.zeta_image((e * step) as i64).residue();
        if value_at_generator.residue() != expected {
            return Err(Error::ContractViolation(format!(
                "lift does not reduce to the character of exponent {e}"
            )));
        }
        Ok(NilCharLift {
            field: field.clone(),
            value: value_at_generator,
            residue_exponent: e,
        })
    }

    /// The image of a characteristic-zero character under `map`.
    pub fn from_mult_char(chi: &MultChar, map: &ReductionMap) -> Result<Self> {
        let step = embedding_step(map.source().order(), chi.field.units())?;
        let value = map.zeta_image((chi.exponent * step) as i64);
        Self::new(&chi.field, value, chi.exponent as i64, map)
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn value_at_generator(&self) -> &ArtinElem {
        &self.value
    }

    pub fn residue_exponent(&self) -> u64 {
        self.residue_exponent
    }

    pub fn algebra(&self) -> &ArtinAlg {
        self.value.alg()
    }

    /// `value^{dlog x}`.
    pub fn eval(&self, x: &FqElem) -> Result<ArtinElem> {
        Ok(self.value.pow(self.field.dlog(x)?))
    }

    pub fn inverse(&self) -> NilCharLift {
        NilCharLift {
            field: self.field.clone(),
            value: self.value.inverse().expect("character values are units"),
            residue_exponent: (self.field.units() - self.residue_exponent) % self.field.units(),
        }
    }

    pub fn mul(&self, rhs: &NilCharLift) -> Result<NilCharLift> {
        if self.field != rhs.field || self.algebra() != rhs.algebra() {
            return invalid("lifts on different fields or algebras");
        }
        Ok(NilCharLift {
            field: self.field.clone(),
            value: self.value.mul(&rhs.value),
            residue_exponent: (self.residue_exponent + rhs.residue_exponent) % self.field.units(),
        })
    }

    /// `chi o N` on the top field of `sub`. The subfield generator is the
    /// norm of the top generator, so the value at the generator is unchanged.
    pub fn compose_norm(&self, sub: &Subfield) -> Result<NilCharLift> {
        if *sub.field() != self.field {
            return invalid("lift is not defined on the given subfield");
        }
        Ok(NilCharLift {
            field: sub.top().clone(),
            value: self.value.clone(),
            residue_exponent: self.residue_exponent * sub.norm_exponent(),
        })
    }

    /// The unipotent factor `value / teichmuller(residue)`.
    pub fn unipotent_part(&self) -> ArtinElem {
        let r = self.algebra();
        let t = r
            .constant(&self.value.residue())
            .expect("residue lies in the residue field");
        self.value.mul(&t.inverse().expect("residue of a unit"))
    }

    /// `{field, residue_exponent, unipotent: [coeffs]}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "field": [self.field.characteristic(), self.field.degree()],
            "residue_exponent": self.residue_exponent,
            "unipotent": self.unipotent_part().to_json(),
        })
    }
}

/// Sums over a cyclic group `C` of order `l^a` in `F_l[Y]/(Y^N)`: the sum of
/// a `k`-valued character (necessarily trivial on `C`) and the sum of the
/// lift `c^j -> (1 + Y)^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletenessDemo {
    pub k_sum: ArtinElem,
    pub lift_sum: ArtinElem,
}

pub fn completeness_demo(ell: u64, a: u32, depth: usize) -> Result<CompletenessDemo> {
    if !arith::is_prime(ell) {
        return invalid(format!("{ell} is not prime"));
    }
    if a == 0 {
        return invalid("the group order exponent must be positive");
    }
    let order = ell
        .checked_pow(a)
        .filter(|&n| n <= 1 << 20)
        .ok_or_else(|| Error::Size(format!("{ell}^{a} is too large")))?;
    let r = ArtinAlg::new(ell, 1, depth)?;
    // The only k-valued character of an l-group is trivial.
    let chi_bar = r.one();
    let u = r.one().add(&r.y());
    let mut k_sum = r.zero();
    let mut lift_sum = r.zero();
    let (mut kv, mut lv) = (r.one(), r.one());
    for _ in 0..order {
        k_sum = k_sum.add(&kv);
        lift_sum = lift_sum.add(&lv);
        kv = kv.mul(&chi_bar);
        lv = lv.mul(&u);
    }
    Ok(CompletenessDemo { k_sum, lift_sum })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f25() -> FqField {
        FqField::new(5, 2).unwrap()
    }

    #[test]
    fn multiplicativity_and_trivial_character() {
        let k = FqField::new(3, 2).unwrap();
        for e in 0..8 {
            let chi = MultChar::new(&k, e);
            let ring = CycRing::new(8).unwrap();
            for x in k.elements().skip(1) {
                for y in k.elements().skip(1) {
                    let lhs = chi.eval_in(&ring, &x.mul(&y)).unwrap();
                    let rhs = &chi.eval_in(&ring, &x).unwrap() * &chi.eval_in(&ring, &y).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            assert!(matches!(chi.eval(&k.zero()), Err(Error::Domain(_))));
        }
        let triv = MultChar::trivial(&k);
        for x in k.elements().skip(1) {
            assert_eq!(triv.eval(&x).unwrap(), CycRing::new(8).unwrap().one());
        }
    }

    #[test]
    fn regularity() {
        let k = f25();
        assert!(MultChar::new(&k, 8).is_regular(1));
        assert!(!MultChar::new(&k, 0).is_regular(1));
        assert!(!MultChar::new(&k, 6).is_regular(1));
        let theta = MultChar::new(&k, 8);
        assert_eq!(
            theta.eval(&k.generator()).unwrap(),
            CycRing::new(24).unwrap().zeta_pow(8)
        );
        let sub = k.subfield(1).unwrap();
        assert!(theta.restrict(&sub).unwrap().is_trivial());
        let chi = MultChar::new(sub.field(), 1);
        assert_eq!(chi.compose_norm(&sub).unwrap().exponent(), 6);
    }

    #[test]
    fn additive_character_is_additive_and_trace_compatible() {
        let k = f25();
        let psi = AddChar::canonical(&k).unwrap();
        for x in k.elements() {
            for y in k.elements().step_by(3) {
                let lhs = psi.value_exponent(&x.add(&y)).unwrap();
                let rhs = (psi.value_exponent(&x).unwrap() + psi.value_exponent(&y).unwrap()) % 5;
                assert_eq!(lhs, rhs);
            }
        }
        assert!(k.elements().any(|x| psi.value_exponent(&x).unwrap() != 0));
        assert_eq!(AddChar::through_trace(&k, 1).unwrap(), psi);
        let k = FqField::new(2, 4).unwrap();
        assert_eq!(
            AddChar::through_trace(&k, 2).unwrap(),
            AddChar::canonical(&k).unwrap()
        );
    }

    #[test]
    fn trivial_gauss_sum_is_minus_one() {
        for (p, f) in [(5, 1), (5, 2), (3, 3), (2, 3)] {
            let k = FqField::new(p, f).unwrap();
            let g = gauss_sum(&MultChar::trivial(&k), &AddChar::canonical(&k).unwrap()).unwrap();
            assert_eq!(g.as_integer(), Some((-1).into()));
        }
    }

    #[test]
    fn exponent_8_gauss_sum_squares_to_25() {
        let k = f25();
        let psi = AddChar::through_trace(&k, 1).unwrap();
        let tau = gauss_sum(&MultChar::new(&k, 8), &psi).unwrap();
        assert_eq!(tau.pow(2).as_integer(), Some(25.into()));
    }

    #[test]
    fn pair_identity_small_fields() {
        for (p, f) in [(3u64, 2u32), (5, 1), (7, 1), (2, 3)] {
            let k = FqField::new(p, f).unwrap();
            let psi = AddChar::canonical(&k).unwrap();
            let minus_one = k.from_int(-1);
            for e in 1..k.units() as i64 {
                let chi = MultChar::new(&k, e);
                let a = gauss_sum(&chi, &psi).unwrap();
                let b = gauss_sum(&chi.inverse(), &psi).unwrap();
                let sign = chi.eval_in(a.ring(), &minus_one).unwrap();
                assert_eq!(&a * &b, &sign * &a.ring().from_int(k.size()));
            }
        }
    }

    #[test]
    fn frobenius_invariance() {
        let k = f25();
        let psi = AddChar::canonical(&k).unwrap();
        for e in 0..24 {
            let chi = MultChar::new(&k, e);
            assert_eq!(
                gauss_sum(&chi.frobenius(), &psi).unwrap(),
                gauss_sum(&chi, &psi).unwrap()
            );
        }
    }

    #[test]
    fn artin_pair_example() {
        let map = ReductionMap::new(120, 2).unwrap();
        let k5 = FqField::new(5, 1).unwrap();
        let r = map.target();
        let lift = NilCharLift::new(&k5, r.one().add(&r.y()), 0, &map).unwrap();
        let psi = AddChar::canonical(&k5).unwrap().reduce(&map).unwrap();
        let a = gauss_sum_artin(&lift, &psi).unwrap();
        let b = gauss_sum_artin(&lift.inverse(), &psi).unwrap();
        // Generator 2 of F_5 is the inverse of the subfield generator 3
        // of F_25, which swaps the two sums relative to the subfield model.
        assert_eq!(a.indices(), vec![1, 11, 12, 3]);
        assert_eq!(b.indices(), vec![1, 11, 7, 8]);
        assert_eq!(a.mul(&b).indices(), vec![1, 0, 1, 1]);
        let sq = a.mul(&a).indices();
        assert_eq!((sq[0], sq[1], sq[3]), (1, 0, 0));
        let c = r.residue_field().from_index(sq[2]).unwrap();
        assert!(c.mul(&c).add(&c).add(&r.residue_field().one()).is_zero());
    }

    #[test]
    fn lift_eval_and_checks() {
        let map = ReductionMap::new(8, 2).unwrap();
        let r = map.target();
        let k5 = FqField::new(5, 1).unwrap();
        let zeta = r.one().add(&r.y());
        let lift = NilCharLift::new(&k5, zeta.clone(), 0, &map).unwrap();
        assert_eq!(lift.eval(&k5.from_int(-1)).unwrap(), zeta.pow(2));
        assert_eq!(lift.unipotent_part(), zeta);
        let y = r.y();
        assert!(matches!(
            NilCharLift::new(&k5, y, 0, &map),
            Err(Error::ContractViolation(_))
        ));
        assert!(matches!(lift.eval(&k5.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn reduction_commutes_with_gauss_sums() {
        let map = ReductionMap::new(120, 2).unwrap();
        let k = f25();
        let psi = AddChar::canonical(&k).unwrap();
        let psi_r = psi.reduce(&map).unwrap();
        for e in 0..24 {
            let chi = MultChar::new(&k, e);
            let tau = gauss_sum_in(&chi, &psi, map.source()).unwrap();
            let lift = NilCharLift::from_mult_char(&chi, &map).unwrap();
            assert_eq!(
                map.reduce(&tau).unwrap(),
                gauss_sum_artin(&lift, &psi_r).unwrap()
            );
        }
    }

    #[test]
    fn completeness_boundaries() {
        let d = completeness_demo(2, 1, 2).unwrap();
        let r = ArtinAlg::new(2, 1, 2).unwrap();
        assert!(d.k_sum.is_zero());
        assert_eq!(d.lift_sum, r.y());
        let d = completeness_demo(2, 2, 4).unwrap();
        let r = ArtinAlg::new(2, 1, 4).unwrap();
        assert_eq!(d.lift_sum, r.y().pow(3));
        assert!(completeness_demo(2, 2, 2).unwrap().lift_sum.is_zero());
        for (ell, a) in [(2u64, 3u32), (3, 2), (5, 1), (2, 4)] {
            let n = ell.pow(a) as usize;
            for depth in 1..=n + 1 {
                let d = completeness_demo(ell, a, depth).unwrap();
                assert!(d.k_sum.is_zero());
                assert_eq!(!d.lift_sum.is_zero(), depth >= n, "{ell}^{a} at {depth}");
            }
        }
    }
}
