//! Artin local algebras `R = F_{l^d}[Y]/(Y^N)` and Laurent rational
//! functions over a coefficient ring.
//!
//! `R` is local with maximal ideal `(Y)`: an element is a unit exactly when
//! its `Y^0` coefficient is non-zero. Gamma factors live in `S^{-1} R[X, X^{-1}]`
//! where `S` is the set of Laurent polynomials whose leading and trailing
//! coefficients are units; [`LaurentRational`] enforces that contract.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::json;

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::ffield::{FqElem, FqField};
use crate::ring::{Ring, RingElem};

#[derive(Debug)]
struct ArtinData {
    residue: FqField,
    depth: usize,
}

/// The truncated polynomial algebra `F_{l^d}[Y]/(Y^N)`. Cheap to clone.
#[derive(Clone)]
pub struct ArtinAlg(Arc<ArtinData>);

impl PartialEq for ArtinAlg {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.depth == other.0.depth && self.0.residue == other.0.residue)
    }
}

impl fmt::Debug for ArtinAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[Y]/Y^{}", self.0.residue, self.0.depth)
    }
}

impl ArtinAlg {
    /// Builds `F_{l^d}[Y]/(Y^N)` over the default residue field.
    pub fn new(ell: u64, d: u32, depth: usize) -> Result<Self> {
        Self::with_seed(ell, d, depth, 0)
    }

    /// As [`ArtinAlg::new`], with the residue field generator chosen by
    /// `seed` (see [`FqField::with_seed`]).
    pub fn with_seed(ell: u64, d: u32, depth: usize, seed: u64) -> Result<Self> {
        let residue = FqField::with_seed(ell, d, seed)?;
        Self::over(residue, depth)
    }

    pub fn over(residue: FqField, depth: usize) -> Result<Self> {
        if depth == 0 {
            return invalid("nilpotency order must be at least 1");
        }
        Ok(ArtinAlg(Arc::new(ArtinData { residue, depth })))
    }

    pub fn ell(&self) -> u64 {
        self.0.residue.characteristic()
    }

    pub fn residue_degree(&self) -> u32 {
        self.0.residue.degree()
    }

    /// `N`, with `Y^N = 0`.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn residue_field(&self) -> &FqField {
        &self.0.residue
    }

    /// The same residue field truncated at `Y^depth`.
    pub fn truncated(&self, depth: usize) -> Result<ArtinAlg> {
        if depth == self.depth() {
            return Ok(self.clone());
        }
        ArtinAlg::over(self.0.residue.clone(), depth)
    }

    fn raw(&self, coeffs: Vec<u32>) -> ArtinElem {
        debug_assert_eq!(coeffs.len(), self.depth());
        ArtinElem {
            alg: self.clone(),
            coeffs,
        }
    }

    /// The nilpotent generator `Y` (zero when `N = 1`).
    pub fn y(&self) -> ArtinElem {
        let mut c = vec![0; self.depth()];
        if self.depth() > 1 {
            c[1] = 1;
        }
        self.raw(c)
    }

    /// Embeds a residue-field element as a constant.
    pub fn constant(&self, x: &FqElem) -> Result<ArtinElem> {
        if x.field() != self.residue_field() {
            return invalid(format!("{x:?} is not in the residue field of {self:?}"));
        }
        let mut c = vec![0; self.depth()];
        c[0] = x.raw();
        Ok(self.raw(c))
    }

    /// Element from residue-field coefficients of `Y^0, ..., Y^{N-1}`.
    pub fn from_coeffs(&self, coeffs: &[FqElem]) -> Result<ArtinElem> {
        if coeffs.len() != self.depth() {
            return invalid(format!(
                "expected {} coefficients, got {}",
                self.depth(),
                coeffs.len()
            ));
        }
        let mut raw = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.field() != self.residue_field() {
                return invalid(format!("{c:?} is not in the residue field"));
            }
            raw.push(c.raw());
        }
        Ok(self.raw(raw))
    }

    /// Element from canonical residue indices.
    pub fn from_indices(&self, idx: &[u64]) -> Result<ArtinElem> {
        let coeffs = idx
            .iter()
            .map(|&i| self.residue_field().from_index(i))
            .collect::<Result<Vec<_>>>()?;
        self.from_coeffs(&coeffs)
    }

    /// Every element, for exhaustive checks on small algebras.
    pub fn elements(&self) -> impl Iterator<Item = ArtinElem> + '_ {
        let q = self.residue_field().size();
        let total = q.pow(self.depth() as u32);
        (0..total).map(move |mut k| {
            let coeffs = (0..self.depth())
                .map(|_| {
                    let c = k % q;
                    k /= q;
                    c as u32
                })
                .collect();
            self.raw(coeffs)
        })
    }
}

impl Ring for ArtinAlg {
    type Elem = ArtinElem;

    fn zero(&self) -> ArtinElem {
        self.raw(vec![0; self.depth()])
    }

    fn one(&self) -> ArtinElem {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> ArtinElem {
        let mut c = vec![0; self.depth()];
        c[0] = self.residue_field().from_int(n).raw();
        self.raw(c)
    }
}

/// An element of `F_{l^d}[Y]/(Y^N)`, coefficients of `Y^0..Y^{N-1}` stored
/// by residue-field index.
#[derive(Clone, PartialEq)]
pub struct ArtinElem {
    alg: ArtinAlg,
    coeffs: Vec<u32>,
}

/// Operations exposed by [`artin_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtinOp {
    Add,
    Mul,
    Inv,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArtinValue {
    Elem(ArtinElem),
    Bool(bool),
}

/// Checked arithmetic; `Inv` inverts `a` and ignores `b` apart from the
/// algebra check.
pub fn artin_arith(a: &ArtinElem, b: &ArtinElem, op: ArtinOp) -> Result<ArtinValue> {
    if a.alg != b.alg {
        return invalid(format!("algebra mismatch: {:?} vs {:?}", a.alg, b.alg));
    }
    Ok(match op {
        ArtinOp::Add => ArtinValue::Elem(a.add(b)),
        ArtinOp::Mul => ArtinValue::Elem(a.mul(b)),
        ArtinOp::Inv => ArtinValue::Elem(a.try_inverse()?),
        ArtinOp::Eq => ArtinValue::Bool(a == b),
    })
}

impl ArtinElem {
    pub fn alg(&self) -> &ArtinAlg {
        &self.alg
    }

    /// Coefficient of `Y^i`.
    pub fn coeff(&self, i: usize) -> FqElem {
        self.alg
            .residue_field()
            .from_index(self.coeffs[i] as u64)
            .expect("stored indices are in range")
    }

    pub fn coeffs(&self) -> Vec<FqElem> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    /// Canonical residue indices of the coefficients.
    pub fn indices(&self) -> Vec<u64> {
        self.coeffs.iter().map(|&c| c as u64).collect()
    }

    /// Image under the residue map `R -> F_{l^d}`.
    pub fn residue(&self) -> FqElem {
        self.coeff(0)
    }

    /// True when the element has no nilpotent part.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Image in a shallower truncation `Y^M` (`M <= N`) over the same
    /// residue field.
    pub fn truncate_to(&self, target: &ArtinAlg) -> Result<ArtinElem> {
        if target.residue_field() != self.alg.residue_field() || target.depth() > self.alg.depth() {
            return invalid(format!("cannot truncate {:?} to {:?}", self.alg, target));
        }
        Ok(target.raw(self.coeffs[..target.depth()].to_vec()))
    }

    /// Applies the residue Frobenius `c -> c^l` to every coefficient,
    /// fixing `Y`.
    pub fn frobenius(&self) -> ArtinElem {
        let k = self.alg.residue_field();
        let ell = self.alg.ell();
        self.alg
            .raw(self.coeffs.iter().map(|&c| k.pow_idx(c, ell)).collect())
    }

    pub fn try_inverse(&self) -> Result<ArtinElem> {
        self.inverse()
            .ok_or_else(|| Error::Domain(format!("{self:?} is not a unit")))
    }

    /// Least `m >= 1` with `self^m = 1`. For `u = t * v` with `t` of order
    /// prime to `l` and `v` unipotent, the order is `ord(t) * ord(v)` and
    /// `ord(v) = ord(u^{ord(t)})`, an `l`-power.
    pub fn unit_order(&self) -> Result<u64> {
        if !self.is_unit() {
            return Err(Error::Domain(format!("{self:?} is not a unit")));
        }
        let prime_to_l = self.residue().order()?;
        let mut v = self.pow(prime_to_l);
        let mut l_part = 1;
        let one = self.alg.one();
        while v != one {
            v = v.pow(self.alg.ell());
            l_part *= self.alg.ell();
        }
        Ok(prime_to_l * l_part)
    }
}

impl fmt::Debug for ArtinElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.alg.residue_field();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("({})", k.compact_text(c)),
                1 => format!("({})Y", k.compact_text(c)),
                _ => format!("({})Y^{i}", k.compact_text(c)),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl RingElem for ArtinElem {
    type Ring = ArtinAlg;

    fn ring(&self) -> ArtinAlg {
        self.alg.clone()
    }

    fn add(&self, rhs: &Self) -> Self {
        assert!(self.alg == rhs.alg, "algebra mismatch");
        let k = self.alg.residue_field();
        self.alg.raw(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| k.add_idx(a, b))
                .collect(),
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert!(self.alg == rhs.alg, "algebra mismatch");
        let k = self.alg.residue_field();
        let n = self.coeffs.len();
        let mut out = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..n - i].iter().enumerate() {
                if b != 0 {
                    out[i + j] = k.add_idx(out[i + j], k.mul_idx(a, b));
                }
            }
        }
        self.alg.raw(out)
    }

    fn neg(&self) -> Self {
        let k = self.alg.residue_field();
        self.alg
            .raw(self.coeffs.iter().map(|&c| k.neg_idx(c)).collect())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }

    /// `(a0 (1 + n))^{-1} = a0^{-1} sum_i (-n)^i`, a finite sum since `n` is
    /// nilpotent.
    fn inverse(&self) -> Option<Self> {
        let k = self.alg.residue_field();
        let a0_inv = k.inv_idx(self.coeffs[0])?;
        let scale = |x: &ArtinElem, s: u32| -> ArtinElem {
            self.alg
                .raw(x.coeffs.iter().map(|&c| k.mul_idx(c, s)).collect())
        };
        let normalized = scale(self, a0_inv);
        let mut minus_n = normalized.sub(&self.alg.one()).neg();
        let mut acc = self.alg.one();
        while !minus_n.is_zero() {
            acc = acc.add(&minus_n);
            minus_n = minus_n.mul(&normalized.sub(&self.alg.one()).neg());
        }
        Some(scale(&acc, a0_inv))
    }

    fn to_json(&self) -> serde_json::Value {
        let k = self.alg.residue_field();
        json!(self
            .coeffs
            .iter()
            .map(|&c| k.index_text(c))
            .collect::<Vec<_>>())
    }
}

/// A Laurent polynomial in `X` over `R`, stored sparsely with zero
/// coefficients trimmed.
#[derive(Clone, PartialEq)]
pub struct Laurent<R: Ring> {
    ring: R,
    terms: BTreeMap<i64, R::Elem>,
}

impl<R: Ring> fmt::Debug for Laurent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("[{c:?}]X^{k}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<R: Ring> Laurent<R> {
    pub fn zero(ring: &R) -> Self {
        Laurent {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &R) -> Self {
        Self::monomial(ring.one(), 0)
    }

    pub fn constant(c: R::Elem) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * X^k`.
    pub fn monomial(c: R::Elem, k: i64) -> Self {
        Self::from_terms(&c.ring(), [(k, c)])
    }

    pub fn from_terms(ring: &R, terms: impl IntoIterator<Item = (i64, R::Elem)>) -> Self {
        let mut out = Self::zero(ring);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: i64, c: R::Elem) {
        let sum = match self.terms.remove(&k) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<i64, R::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the highest power of `X`.
    pub fn leading(&self) -> Option<&R::Elem> {
        self.terms.values().next_back()
    }

    /// Coefficient of the lowest power of `X`.
    pub fn trailing(&self) -> Option<&R::Elem> {
        self.terms.values().next()
    }

    /// Lowest exponent present.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Membership in `S`: non-zero with unit leading and trailing
    /// coefficients.
    pub fn in_multiplicative_system(&self) -> bool {
        matches!((self.leading(), self.trailing()), (Some(l), Some(t)) if l.is_unit() && t.is_unit())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Laurent {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(&k, c)| (k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.add_term(a + b, ca.mul(cb));
            }
        }
        out
    }

    /// Multiplication by `X^m`.
    pub fn shift(&self, m: i64) -> Self {
        Laurent {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k + m, c.clone()))
                .collect(),
        }
    }

    /// Substitution `X -> c * X^{sign}` with `sign = +1` or `-1`; `c` must
    /// be a unit whenever negative powers of `X` occur.
    pub fn substitute(&self, c: &R::Elem, sign: i64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return invalid("substitution sign must be +1 or -1");
        }
        let mut out = Self::zero(&self.ring);
        for (&k, a) in &self.terms {
            let ck = c.pow_signed(k).ok_or_else(|| {
                Error::ContractViolation(format!("substituted scalar {c:?} is not a unit"))
            })?;
            out.add_term(sign * k, a.mul(&ck));
        }
        Ok(out)
    }

    /// Applies a coefficient map (typically a ring homomorphism).
    pub fn map_coeffs<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> Laurent<S> {
        Laurent::from_terms(target, self.terms.iter().map(|(&k, c)| (k, f(c))))
    }

    /// `{exponent: coefficient}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, c)| (k.to_string(), c.to_json()))
            .collect();
        serde_json::Value::Object(map)
    }
}

/// An element `num / den` of `S^{-1} R[X, X^{-1}]`, with `den` in `S`.
/// Equality is by cross-multiplication, which is transitive because
/// elements of `S` are not zero divisors.
#[derive(Clone)]
pub struct LaurentRational<R: Ring> {
    num: Laurent<R>,
    den: Laurent<R>,
}

impl<R: Ring> fmt::Debug for LaurentRational<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl<R: Ring> LaurentRational<R> {
    pub fn new(num: Laurent<R>, den: Laurent<R>) -> Result<Self> {
        if num.ring != den.ring {
            return invalid("numerator and denominator over different rings");
        }
        if !den.in_multiplicative_system() {
            return Err(Error::ContractViolation(format!(
                "denominator {den:?} does not have unit leading and trailing coefficients"
            )));
        }
        Ok(LaurentRational { num, den })
    }

    pub fn from_laurent(num: Laurent<R>) -> Self {
        let den = Laurent::one(&num.ring);
        LaurentRational { num, den }
    }

    pub fn constant(c: R::Elem) -> Self {
        Self::from_laurent(Laurent::constant(c))
    }

    pub fn monomial(c: R::Elem, k: i64) -> Self {
        Self::from_laurent(Laurent::monomial(c, k))
    }

    pub fn ring(&self) -> &R {
        &self.num.ring
    }

    pub fn numerator(&self) -> &Laurent<R> {
        &self.num
    }

    pub fn denominator(&self) -> &Laurent<R> {
        &self.den
    }

    fn check_ring(&self, rhs: &Self) -> Result<()> {
        if self.num.ring != rhs.num.ring {
            return invalid(format!(
                "ring mismatch: {:?} vs {:?}",
                self.num.ring, rhs.num.ring
            ));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_ring(rhs)?;
        Ok(LaurentRational {
            num: self.num.mul(&rhs.num),
            den: self.den.mul(&rhs.den),
        })
    }

    /// The cross products `(num * rhs.den, rhs.num * den)`.
    fn cross(&self, rhs: &Self) -> Result<(Laurent<R>, Laurent<R>)> {
        self.check_ring(rhs)?;
        Ok((self.num.mul(&rhs.den), rhs.num.mul(&self.den)))
    }

    /// Exact equality in `S^{-1} R[X, X^{-1}]`.
    pub fn eq_exact(&self, rhs: &Self) -> Result<bool> {
        let (a, b) = self.cross(rhs)?;
        Ok(a == b)
    }

    /// Equality up to multiplication by a power of `X`.
    pub fn eq_up_to_x_power(&self, rhs: &Self) -> Result<bool> {
        let (a, b) = self.cross(rhs)?;
        Ok(match (a.valuation(), b.valuation()) {
            (None, None) => true,
            (Some(va), Some(vb)) => a.shift(vb - va) == b,
            _ => false,
        })
    }

    /// Substitution `X -> c * X^{sign}` for a unit `c`.
    pub fn substitute(&self, c: &R::Elem, sign: i64) -> Result<Self> {
        let num = self.num.substitute(c, sign)?;
        let den = self.den.substitute(c, sign)?;
        LaurentRational::new(num, den)
    }

    pub fn map_coeffs<S: Ring>(
        &self,
        target: &S,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> Result<LaurentRational<S>> {
        LaurentRational::new(
            self.num.map_coeffs(target, &f),
            self.den.map_coeffs(target, &f),
        )
    }

    /// `Some((c, k))` when the function equals `c * X^k` with a monomial
    /// denominator.
    pub fn as_monomial(&self) -> Option<(R::Elem, i64)> {
        if self.den.terms.len() != 1 || self.num.terms.len() > 1 {
            return None;
        }
        let (&dk, dc) = self.den.terms.iter().next()?;
        let dinv = dc.inverse()?;
        match self.num.terms.iter().next() {
            None => Some((self.ring().zero(), 0)),
            Some((&nk, nc)) => Some((nc.mul(&dinv), nk - dk)),
        }
    }

    /// `{"num": {exp: coeff}, "den": {exp: coeff}}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }
}

/// `ell^{ceil(log_ell N)}`: the exponent killing every unipotent unit of
/// `F_{l^d}[Y]/(Y^N)`.
pub fn unipotent_exponent(ell: u64, depth: usize) -> u64 {
    ell.pow(arith::ceil_log(ell, depth as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2y(n: usize) -> ArtinAlg {
        ArtinAlg::new(2, 1, n).unwrap()
    }

    #[test]
    fn fourth_root_of_unity() {
        let r = f2y(4);
        let zeta = r.one().add(&r.y());
        let y2 = r.y().mul(&r.y());
        assert_eq!(zeta.pow(2), r.one().add(&y2));
        assert_eq!(zeta.pow(4), r.one());
        assert_eq!(zeta.unit_order().unwrap(), 4);
        assert_eq!(r.one().unit_order().unwrap(), 1);
        let r2 = f2y(2);
        assert_eq!(r2.one().add(&r2.y()).unit_order().unwrap(), 2);
    }

    #[test]
    fn nilpotency_and_inverse() {
        for n in 1..6 {
            let r = ArtinAlg::new(3, 2, n).unwrap();
            assert!(r.y().mul(&r.y().pow(n as u64 - 1)).is_zero());
        }
        let r = f2y(4);
        let zeta = r.one().add(&r.y());
        let expected = r.from_indices(&[1, 1, 1, 1]).unwrap();
        assert_eq!(zeta.inverse().unwrap(), expected);
        assert_eq!(zeta.mul(&expected), r.one());
        assert!(matches!(r.y().try_inverse(), Err(Error::Domain(_))));
        assert!(matches!(r.y().unit_order(), Err(Error::Domain(_))));
    }

    #[test]
    fn artin_arith_checks_algebras() {
        let a = f2y(4).one();
        let b = f2y(3).one();
        assert!(matches!(
            artin_arith(&a, &b, ArtinOp::Add),
            Err(Error::InvalidArgument(_))
        ));
        assert_eq!(
            artin_arith(&a, &a, ArtinOp::Inv).unwrap(),
            ArtinValue::Elem(a.clone())
        );
    }

    #[test]
    fn units_are_exactly_residually_nonzero() {
        for (ell, d, n) in [(2u64, 1u32, 4usize), (3, 1, 3), (2, 2, 3), (5, 1, 2)] {
            let r = ArtinAlg::new(ell, d, n).unwrap();
            for x in r.elements() {
                let invertible = x.inverse().map(|i| i.mul(&x) == r.one());
                assert_eq!(x.is_unit(), !x.residue().is_zero());
                assert_eq!(invertible, x.is_unit().then_some(true));
            }
        }
    }

    #[test]
    fn unipotent_units_are_killed_by_the_l_power_exponent() {
        for (ell, n) in [(2u64, 4usize), (2, 3), (3, 4), (3, 2), (5, 3)] {
            let r = ArtinAlg::new(ell, 1, n).unwrap();
            let e = unipotent_exponent(ell, n);
            for x in r
                .elements()
                .filter(|x| x.residue() == r.residue_field().one())
            {
                assert_eq!(x.pow(e), r.one(), "{x:?}");
            }
        }
    }

    #[test]
    fn residue_map_is_a_homomorphism() {
        let r = ArtinAlg::new(2, 2, 3).unwrap();
        let all: Vec<ArtinElem> = r.elements().collect();
        for a in all.iter().step_by(3) {
            for b in all.iter().step_by(5) {
                assert_eq!(a.add(b).residue(), a.residue().add(&b.residue()));
                assert_eq!(a.mul(b).residue(), a.residue().mul(&b.residue()));
            }
        }
    }

    fn lr(terms_n: &[(i64, i64)], terms_d: &[(i64, i64)]) -> LaurentRational<ArtinAlg> {
        let r = ArtinAlg::new(3, 1, 2).unwrap();
        let mk =
            |t: &[(i64, i64)]| Laurent::from_terms(&r, t.iter().map(|&(k, c)| (k, r.from_int(c))));
        LaurentRational::new(mk(terms_n), mk(terms_d)).unwrap()
    }

    #[test]
    fn laurent_equality_by_cross_multiplication() {
        // (X^-1 - 1)/(1 - X^-1) = -1
        let f = lr(&[(-1, 1), (0, -1)], &[(0, 1), (-1, -1)]);
        let minus_one = lr(&[(0, -1)], &[(0, 1)]);
        assert!(f.eq_exact(&minus_one).unwrap());
        assert!(f.eq_exact(&f).unwrap());
        let g = lr(&[(0, 1)], &[(3, 1)]);
        let h = lr(&[(0, 1)], &[(0, 1)]);
        assert!(!g.eq_exact(&h).unwrap());
        assert!(g.eq_up_to_x_power(&h).unwrap());
        assert!(!g.eq_up_to_x_power(&minus_one).unwrap());
    }

    #[test]
    fn monomial_products() {
        let r = ArtinAlg::new(5, 1, 1).unwrap();
        let a: LaurentRational<ArtinAlg> = LaurentRational::monomial(r.from_int(2), 3);
        let b = LaurentRational::monomial(r.from_int(4), -5);
        let (c, k) = a.mul(&b).unwrap().as_monomial().unwrap();
        assert_eq!((c, k), (r.from_int(3), -2));
    }

    #[test]
    fn denominators_must_stay_in_s() {
        let r = f2y(2);
        let bad = Laurent::from_terms(&r, [(0, r.one()), (1, r.y())]);
        assert!(matches!(
            LaurentRational::new(Laurent::one(&r), bad),
            Err(Error::ContractViolation(_))
        ));
        let den = Laurent::from_terms(&r, [(0, r.one()), (1, r.one())]);
        let f = LaurentRational::new(Laurent::one(&r), den).unwrap();
        // X -> Y * X makes the leading coefficient nilpotent.
        assert!(matches!(
            f.substitute(&r.y(), 1),
            Err(Error::ContractViolation(_))
        ));
        let zeta = r.one().add(&r.y());
        assert!(f.substitute(&zeta, -1).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn alg() -> ArtinAlg {
            ArtinAlg::new(3, 2, 5).unwrap()
        }

        fn elem() -> impl Strategy<Value = ArtinElem> {
            proptest::collection::vec(0u64..9, 5).prop_map(|c| alg().from_indices(&c).unwrap())
        }

        proptest! {
            #[test]
            fn ring_axioms(a in elem(), b in elem(), c in elem()) {
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert!(a.sub(&a).is_zero());
            }

            #[test]
            fn inverse_and_frobenius(a in elem(), b in elem()) {
                if let Some(inv) = a.inverse() {
                    prop_assert_eq!(inv.mul(&a), alg().one());
                }
                prop_assert_eq!(a.mul(&b).frobenius(), a.frobenius().mul(&b.frobenius()));
                prop_assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
            }
        }
    }
}
