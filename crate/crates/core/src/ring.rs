//! Coefficient-ring abstraction shared by Laurent polynomials and gamma
//! factors. Implemented by the truncated algebras of [`crate::artin`] and
//! by the cyclotomic fields of [`crate::cyclo`].

use std::fmt::Debug;

pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Elem: RingElem<Ring = Self>;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self::Elem;
}

pub trait RingElem: Clone + PartialEq + Debug + Send + Sync {
    type Ring: Ring<Elem = Self>;

    fn ring(&self) -> Self::Ring;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// Multiplicative inverse, `None` for non-units.
    fn inverse(&self) -> Option<Self>;
    fn to_json(&self) -> serde_json::Value;

    fn is_one(&self) -> bool {
        *self == self.ring().one()
    }

    fn pow(&self, mut n: u64) -> Self {
        let mut acc = self.ring().one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power; negative exponents require a unit.
    fn pow_signed(&self, n: i64) -> Option<Self> {
        if n >= 0 {
            Some(self.pow(n as u64))
        } else {
            self.inverse().map(|inv| inv.pow(n.unsigned_abs()))
        }
    }
}
