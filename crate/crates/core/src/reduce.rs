//! Reduction homomorphisms `Z[zeta_M] -> F_{l^d}[Y]/(Y^N)`.
//!
//! Write `M = l^a * M'` with `l` prime to `M'`. The residue degree is
//! `d = ord_l(M')`, the depth is `N = phi(l^a)`, and `zeta_M` maps to
//! `t * (1 + Y)` where `t = g^{(l^d - 1)/M'}` for the residue field's
//! generator `g`.

use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::arith;
use crate::artin::{ArtinAlg, ArtinElem};
use crate::cyclo::{CycInt, CycRing};
use crate::error::{invalid, Error, Result};
use crate::ring::{Ring, RingElem};

/// Knobs for [`ReductionMap::with_options`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionOptions {
    /// The residue degree is `ord_l(M') * degree_multiple`.
    pub degree_multiple: u32,
    /// Selects the residue-field generator, and with it the prime above `l`.
    pub seed: u64,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            degree_multiple: 1,
            seed: 0,
        }
    }
}

#[derive(Debug)]
struct MapData {
    source: CycRing,
    target: ArtinAlg,
    m_prime: u64,
    ell_part: u64,
    root_image: ArtinElem,
    powers: OnceLock<Vec<ArtinElem>>,
}

/// A ring homomorphism `Z[zeta_M] -> F_{l^d}[Y]/(Y^N)`. Cheap to clone.
#[derive(Debug, Clone)]
pub struct ReductionMap(Arc<MapData>);

impl ReductionMap {
    pub fn new(m: u64, ell: u64) -> Result<Self> {
        Self::with_options(m, ell, ReductionOptions::default())
    }

    pub fn with_options(m: u64, ell: u64, opts: ReductionOptions) -> Result<Self> {
        if !arith::is_prime(ell) {
            return invalid(format!("{ell} is not prime"));
        }
        if opts.degree_multiple == 0 {
            return invalid("degree multiple must be positive");
        }
        let source = CycRing::new(m)?;
        let (a, ell_part, m_prime) = arith::split_prime_part(m, ell);
        let base_degree = arith::mult_order(ell, m_prime).expect("l is prime to M'");
        let d = u32::try_from(base_degree)
            .ok()
            .and_then(|d| d.checked_mul(opts.degree_multiple))
            .ok_or_else(|| {
                Error::Size(format!("residue degree of {ell} mod {m_prime} too large"))
            })?;
        let depth = if a == 0 { 1 } else { arith::totient(ell_part) };
        let target = ArtinAlg::with_seed(ell, d, depth as usize, opts.seed)?;
        Self::onto(source, target, m_prime, ell_part)
    }

    /// Builds the map into a prescribed algebra, which must contain
    /// `M'`-th roots of unity and have depth at least `phi(l^a)`.
    fn onto(source: CycRing, target: ArtinAlg, m_prime: u64, ell_part: u64) -> Result<Self> {
        let k = target.residue_field();
        if !k.units().is_multiple_of(m_prime) {
            return Err(Error::ConstructionFailure(format!(
                "{k:?} has no primitive {m_prime}-th root of unity"
            )));
        }
        let t = target.constant(&k.gen_pow((k.units() / m_prime) as i64))?;
        let u = if ell_part == 1 {
            target.one()
        } else {
            target.one().add(&target.y())
        };
        let root_image = t.mul(&u);
        let map = ReductionMap(Arc::new(MapData {
            source,
            target,
            m_prime,
            ell_part,
            root_image,
            powers: OnceLock::new(),
        }));
        if !map
            .eval_poly(map.source().cyclotomic_coeffs().iter().cloned())
            .is_zero()
        {
            return Err(Error::ConstructionFailure(format!(
                "Phi_{} does not vanish at {:?}",
                map.source().order(),
                map.root_image()
            )));
        }
        Ok(map)
    }

    /// The same map followed by truncation to `Y^depth`.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        let target = self.target().truncated(depth)?;
        if depth > self.target().depth() {
            return invalid("truncation cannot deepen the target");
        }
        Self::onto(
            self.source().clone(),
            target,
            self.0.m_prime,
            self.0.ell_part,
        )
    }

    pub fn source(&self) -> &CycRing {
        &self.0.source
    }

    pub fn target(&self) -> &ArtinAlg {
        &self.0.target
    }

    pub fn ell(&self) -> u64 {
        self.target().ell()
    }

    pub fn m_prime(&self) -> u64 {
        self.0.m_prime
    }

    pub fn ell_part(&self) -> u64 {
        self.0.ell_part
    }

    /// Image of `zeta_M`.
    pub fn root_image(&self) -> &ArtinElem {
        &self.0.root_image
    }

    fn powers(&self) -> &[ArtinElem] {
        self.0.powers.get_or_init(|| {
            let m = self.source().order() as usize;
            let mut out = Vec::with_capacity(m);
            let mut acc = self.target().one();
            for _ in 0..m {
                out.push(acc.clone());
                acc = acc.mul(self.root_image());
            }
            out
        })
    }

    /// Image of `zeta_M^e`.
    pub fn zeta_image(&self, e: i64) -> ArtinElem {
        let m = self.source().order() as i64;
        self.powers()[e.rem_euclid(m) as usize].clone()
    }

    fn int_image(&self, c: &num_bigint::BigInt) -> ArtinElem {
        let r = c
            .mod_floor(&self.ell().into())
            .to_i64()
            .expect("residue fits");
        self.target().from_int(r)
    }

    fn eval_poly(&self, coeffs: impl DoubleEndedIterator<Item = num_bigint::BigInt>) -> ArtinElem {
        let mut acc = self.target().zero();
        for c in coeffs.rev() {
            acc = acc.mul(self.root_image()).add(&self.int_image(&c));
        }
        acc
    }

    pub fn reduce(&self, x: &CycInt) -> Result<ArtinElem> {
        if x.ring() != self.source() {
            return invalid(format!(
                "element of Z[zeta_{}] passed to a map from Z[zeta_{}]",
                x.ring().order(),
                self.source().order()
            ));
        }
        let mut acc = self.target().zero();
        for (i, c) in x.coeffs().iter().enumerate() {
            let ci = self.int_image(c);
            if !ci.is_zero() {
                acc = acc.add(&ci.mul(&self.zeta_image(i as i64)));
            }
        }
        Ok(acc)
    }

    /// Image of `sum_e counts[e] * zeta^e`, skipping the cyclotomic ring.
    pub fn reduce_power_counts(&self, counts: &[i64]) -> Result<ArtinElem> {
        if counts.len() as u64 != self.source().order() {
            return invalid(format!(
                "expected {} power counts, got {}",
                self.source().order(),
                counts.len()
            ));
        }
        let ell = self.ell() as i64;
        let mut acc = self.target().zero();
        for (e, &c) in counts.iter().enumerate() {
            let r = c.rem_euclid(ell);
            if r != 0 {
                acc = acc.add(&self.target().from_int(r).mul(&self.zeta_image(e as i64)));
            }
        }
        Ok(acc)
    }

    /// `{M, ell, d, N, root_image}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "M": self.source().order(),
            "ell": self.ell(),
            "d": self.target().residue_degree(),
            "N": self.target().depth(),
            "root_image": self.root_image().to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::unipotent_exponent;

    #[test]
    fn shapes_of_targets() {
        let m = ReductionMap::new(120, 2).unwrap();
        assert_eq!((m.target().residue_degree(), m.target().depth()), (4, 4));
        assert_eq!((m.m_prime(), m.ell_part()), (15, 8));

        let m = ReductionMap::new(3, 2).unwrap();
        assert_eq!(m.target().residue_field().size(), 4);
        assert_eq!(m.target().depth(), 1);
        assert_eq!(m.root_image().unit_order().unwrap(), 3);

        let m = ReductionMap::new(8, 2).unwrap();
        let r = m.target();
        assert_eq!(r.residue_field().size(), 2);
        assert_eq!(m.root_image(), &r.one().add(&r.y()));
        assert_eq!(m.root_image().unit_order().unwrap(), 4);
        assert!(m.root_image().pow(4).sub(&r.one()).is_zero());
    }

    #[test]
    fn constants_and_roots() {
        let m = ReductionMap::new(120, 2).unwrap();
        let src = m.source();
        assert_eq!(m.reduce(&src.one()).unwrap(), m.target().one());
        assert!(m.reduce(&src.zero()).unwrap().is_zero());
        assert_eq!(m.reduce(&src.from_int(25)).unwrap(), m.target().one());
        // zeta_120^15 has order 8; the image of an 8th root of unity in
        // depth phi(8) = 4 has unipotent order 4.
        let z8 = m.reduce(&src.zeta_pow(15)).unwrap();
        assert_eq!(z8.unit_order().unwrap(), unipotent_exponent(2, 4));
        assert_eq!(z8.residue(), m.target().residue_field().one());
        let other = CycRing::new(60).unwrap();
        assert!(matches!(
            m.reduce(&other.one()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn reduce_is_a_homomorphism() {
        let m = ReductionMap::new(24, 3).unwrap();
        let src = m.source();
        let elems: Vec<CycInt> = (0..24)
            .map(|e| &src.zeta_pow(e) + &src.from_int(e % 5 - 2))
            .collect();
        for a in &elems {
            for b in &elems {
                let (ra, rb) = (m.reduce(a).unwrap(), m.reduce(b).unwrap());
                assert_eq!(m.reduce(&(a + b)).unwrap(), ra.add(&rb));
                assert_eq!(m.reduce(&(a * b)).unwrap(), ra.mul(&rb));
            }
        }
    }

    #[test]
    fn power_counts_agree_with_reduce() {
        let m = ReductionMap::new(20, 2).unwrap();
        let counts: Vec<i64> = (0..20).map(|i| (i * 7 % 5) - 1).collect();
        let x = m.source().from_power_counts(&counts).unwrap();
        assert_eq!(
            m.reduce(&x).unwrap(),
            m.reduce_power_counts(&counts).unwrap()
        );
    }

    #[test]
    fn frobenius_compatibility() {
        // On Z[zeta_{M'}] the Galois element zeta -> zeta^l matches the
        // residue Frobenius.
        for (mp, ell_part, ell) in [(15u64, 8u64, 2u64), (8, 3, 3), (24, 5, 5)] {
            let m = ReductionMap::new(mp * ell_part, ell).unwrap();
            let small = CycRing::new(mp).unwrap();
            for e in 0..mp as i64 {
                let x = &small.zeta_pow(e) + &small.from_int(e);
                let lhs = m
                    .reduce(
                        &x.galois_apply(ell as i64)
                            .unwrap()
                            .embed_into(m.source())
                            .unwrap(),
                    )
                    .unwrap();
                let rhs = m
                    .reduce(&x.embed_into(m.source()).unwrap())
                    .unwrap()
                    .frobenius();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn prime_to_l_orders_are_preserved() {
        let m = ReductionMap::new(120, 2).unwrap();
        for e in (0..120i64).step_by(8) {
            let order = 120 / arith::gcd(e as u64, 120);
            assert_eq!(m.zeta_image(e).unit_order().unwrap(), order);
        }
        let m = ReductionMap::new(48, 5).unwrap();
        assert_eq!(m.target().depth(), 1);
        for e in 0..48i64 {
            let order = 48 / arith::gcd(e as u64, 48);
            assert_eq!(m.zeta_image(e).unit_order().unwrap(), order);
        }
    }

    #[test]
    fn seeds_give_valid_conjugate_maps() {
        for seed in 0..4 {
            let opts = ReductionOptions {
                degree_multiple: 2,
                seed,
            };
            let m = ReductionMap::with_options(15, 2, opts).unwrap();
            assert_eq!(m.target().residue_degree(), 8);
            assert_eq!(m.root_image().unit_order().unwrap(), 15);
        }
        let t = ReductionMap::new(40, 2).unwrap().truncated(2).unwrap();
        assert_eq!(t.target().depth(), 2);
        assert!(ReductionMap::new(12, 4).is_err());
    }

    #[test]
    fn json_shape() {
        let v = ReductionMap::new(8, 2).unwrap().to_json();
        assert_eq!(v["M"], 8);
        assert_eq!(v["N"], 4);
        assert_eq!(v["root_image"], json!(["1", "1", "0", "0"]));
    }
}
