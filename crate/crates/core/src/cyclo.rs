//! Exact arithmetic in cyclotomic integer rings `Z[zeta_M] = Z[x]/(Phi_M)`.
//!
//! Every characteristic-zero character value and Gauss sum in the crate
//! lives here. Elements are coefficient vectors of length `phi(M)` with
//! arbitrary-precision entries, reduced modulo the cyclotomic polynomial so
//! that equality is coefficient-wise.
//!
//! [`CycFrac`] extends this to the cyclotomic field `Q(zeta_M)` with a
//! common integer denominator; inverses are computed through the norm.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::ring::{Ring, RingElem};

/// Largest root-of-unity order accepted by [`CycRing::new`].
pub const MAX_ORDER: u64 = 1_000_000;

#[derive(Debug)]
struct CycRingData {
    order: u64,
    /// `Phi_M`, little-endian, monic of length `degree + 1`.
    phi: Vec<BigInt>,
    /// Non-zero entries of `phi` below the leading term.
    phi_tail: Vec<(usize, BigInt)>,
    degree: usize,
}

/// The ring `Z[zeta_M]`. Cheap to clone.
#[derive(Clone)]
pub struct CycRing(Arc<CycRingData>);

impl PartialEq for CycRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.order == other.0.order
    }
}

impl Eq for CycRing {}

impl fmt::Debug for CycRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[zeta_{}]", self.0.order)
    }
}

/// `Phi_M` as the truncated power series `prod_{d | M} (1 - x^d)^{mu(M/d)}`.
///
/// Multiplying by `1 - x^d` and dividing by it are both exact in `Z[[x]]`;
/// since the product is a polynomial of degree `phi(M)`, truncating there
/// loses nothing.
fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    if m == 1 {
        return vec![BigInt::from(-1), BigInt::one()];
    }
    let deg = arith::totient(m) as usize;
    let mut series = vec![BigInt::zero(); deg + 1];
    series[0] = BigInt::one();
    let divs = arith::divisors(m);
    // Multiplications first keeps intermediate coefficients small.
    for &d in &divs {
        if arith::mobius(m / d) == 1 {
            let d = d as usize;
            for k in (d..=deg).rev() {
                let t = series[k - d].clone();
                series[k] -= t;
            }
        }
    }
    for &d in &divs {
        if arith::mobius(m / d) == -1 {
            let d = d as usize;
            for k in d..=deg {
                let t = series[k - d].clone();
                series[k] += t;
            }
        }
    }
    series
}

impl CycRing {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return invalid("root-of-unity order must be positive");
        }
        if order > MAX_ORDER {
            return Err(Error::Size(format!(
                "root-of-unity order {order} exceeds {MAX_ORDER}"
            )));
        }
        let phi = cyclotomic_poly(order);
        let degree = phi.len() - 1;
        if degree as u64 != arith::totient(order) || !phi[degree].is_one() {
            return Err(Error::ConstructionFailure(format!(
                "cyclotomic polynomial of order {order} is malformed"
            )));
        }
        let phi_tail = phi[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        Ok(CycRing(Arc::new(CycRingData {
            order,
            phi,
            phi_tail,
            degree,
        })))
    }

    /// The root-of-unity order `M`.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// `phi(M)`, the rank of the ring over `Z`.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Coefficients of `Phi_M`, constant term first.
    pub fn cyclotomic_coeffs(&self) -> &[BigInt] {
        &self.0.phi
    }

    pub fn zero(&self) -> CycInt {
        CycInt {
            ring: self.clone(),
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CycInt {
        self.from_int(1)
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> CycInt {
        let mut z = self.zero();
        z.coeffs[0] = n.into();
        z
    }

    /// Reduces a dense polynomial of any degree modulo `Phi_M`.
    fn reduce_dense(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let deg = self.degree();
        for k in (deg..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[k]);
            for (i, pc) in &self.0.phi_tail {
                v[k - deg + i] -= &c * pc;
            }
        }
        v.resize(deg, BigInt::zero());
        v
    }

    /// `zeta^e` with `e` read modulo `M`; `zeta_pow(0)` is one.
    pub fn zeta_pow(&self, e: i64) -> CycInt {
        let k = e.rem_euclid(self.order() as i64) as usize;
        let mut v = vec![BigInt::zero(); k.max(self.degree() - 1) + 1];
        v[k] = BigInt::one();
        CycInt {
            ring: self.clone(),
            coeffs: self.reduce_dense(v),
        }
    }

    /// Builds `sum_k counts[k] * zeta^k` from a vector of length `M`.
    /// This is the accumulation format used by Gauss sums.
    pub fn from_power_counts(&self, counts: &[i64]) -> Result<CycInt> {
        if counts.len() as u64 != self.order() {
            return invalid(format!(
                "expected {} power counts, got {}",
                self.order(),
                counts.len()
            ));
        }
        let v = counts.iter().map(|&c| BigInt::from(c)).collect();
        Ok(CycInt {
            ring: self.clone(),
            coeffs: self.reduce_dense(v),
        })
    }

    /// Builds an element from a coefficient vector of any length,
    /// reducing modulo `Phi_M`.
    pub fn from_coeffs(&self, coeffs: Vec<BigInt>) -> CycInt {
        let mut v = coeffs;
        if v.len() < self.degree() {
            v.resize(self.degree(), BigInt::zero());
        }
        CycInt {
            ring: self.clone(),
            coeffs: self.reduce_dense(v),
        }
    }
}

/// An element of `Z[zeta_M]`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycInt {
    ring: CycRing,
    coeffs: Vec<BigInt>,
}

/// The ring operations exposed by [`cyc_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Neg,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CycValue {
    Elem(CycInt),
    Bool(bool),
}

/// Checked binary arithmetic; `Neg` ignores `b` apart from the ring check.
pub fn cyc_arith(a: &CycInt, b: &CycInt, op: CycOp) -> Result<CycValue> {
    if a.ring != b.ring {
        return invalid(format!("ring mismatch: {:?} vs {:?}", a.ring, b.ring));
    }
    Ok(match op {
        CycOp::Add => CycValue::Elem(a + b),
        CycOp::Sub => CycValue::Elem(a - b),
        CycOp::Mul => CycValue::Elem(a * b),
        CycOp::Neg => CycValue::Elem(-a),
        CycOp::Eq => CycValue::Bool(a == b),
    })
}

impl CycInt {
    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(n)` when the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn pow(&self, mut n: u64) -> CycInt {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn div_exact(&self, k: &BigInt) -> CycInt {
        CycInt {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        }
    }

    /// The Galois automorphism `zeta -> zeta^a`.
    pub fn galois_apply(&self, a: i64) -> Result<CycInt> {
        let m = self.ring.order();
        let a = a.rem_euclid(m as i64) as u64;
        if arith::gcd(a, m) != 1 {
            return invalid(format!("{a} is not coprime to {m}"));
        }
        let mut v = vec![BigInt::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[(i as u64 * a % m) as usize] += c;
            }
        }
        Ok(CycInt {
            ring: self.ring.clone(),
            coeffs: self.ring.reduce_dense(v),
        })
    }

    /// Image under `Z[zeta_m] -> Z[zeta_M]`, `zeta_m -> zeta_M^{M/m}`;
    /// requires `m | M`.
    pub fn embed_into(&self, target: &CycRing) -> Result<CycInt> {
        let (m, big) = (self.ring.order(), target.order());
        if big % m != 0 {
            return invalid(format!("Z[zeta_{m}] does not embed in Z[zeta_{big}]"));
        }
        let step = (big / m) as usize;
        let mut v = vec![BigInt::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(target.from_coeffs(v))
    }

    /// Evaluates `Phi_M` at this element.
    pub fn eval_cyclotomic(&self) -> CycInt {
        let mut acc = self.ring.zero();
        for c in self.ring.cyclotomic_coeffs().iter().rev() {
            acc = &(&acc * self) + &self.ring.from_int(c.clone());
        }
        acc
    }

    /// `N(x) = prod over (Z/M)^x of sigma_a(x)`, with the cofactor
    /// `prod_{a != 1} sigma_a(x)`.
    fn norm_with_cofactor(&self) -> (BigInt, CycInt) {
        let m = self.ring.order();
        let mut cof = self.ring.one();
        for a in 2..m.max(2) {
            if arith::gcd(a, m) == 1 {
                cof = &cof * &self.galois_apply(a as i64).expect("unit exponent");
            }
        }
        let n = (self * &cof)
            .as_integer()
            .expect("norm of a cyclotomic integer is rational");
        (n, cof)
    }

    /// Canonical text form `[c0,c1,...]`.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "M": self.ring.order(),
            "coeffs": self.coeffs.iter().map(bigint_json).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn bigint_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.to_text(), self.ring)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn assert_same(a: &CycRing, b: &CycRing) {
    assert!(a == b, "ring mismatch: {a:?} vs {b:?}");
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        assert_same(&self.ring, &rhs.ring);
        CycInt {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        assert_same(&self.ring, &rhs.ring);
        CycInt {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        assert_same(&self.ring, &rhs.ring);
        let n = self.coeffs.len();
        let mut v = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        CycInt {
            ring: self.ring.clone(),
            coeffs: self.ring.reduce_dense(v),
        }
    }
}

/// The cyclotomic field `Q(zeta_M)`, used as the coefficient ring of
/// characteristic-zero gamma factors.
#[derive(Clone, PartialEq, Debug)]
pub struct CycField(pub CycRing);

/// An element `num / den` of `Q(zeta_M)` with `den > 0` and
/// `gcd(content(num), den) = 1`.
#[derive(Clone, PartialEq)]
pub struct CycFrac {
    num: CycInt,
    den: BigInt,
}

impl CycFrac {
    pub fn new(num: CycInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        let (num, den) = if den.is_negative() {
            (-&num, -den)
        } else {
            (num, den)
        };
        let g = num.content().gcd(&den);
        Ok(CycFrac {
            num: num.div_exact(&g),
            den: den / g,
        })
    }

    pub fn from_int(x: CycInt) -> Self {
        CycFrac {
            num: x,
            den: BigInt::one(),
        }
    }

    pub fn numerator(&self) -> &CycInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// `Some(x)` when the element is integral.
    pub fn as_cyc_int(&self) -> Option<CycInt> {
        self.den.is_one().then(|| self.num.clone())
    }
}

impl fmt::Debug for CycFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num.to_text(), self.den)
    }
}

impl Ring for CycField {
    type Elem = CycFrac;

    fn zero(&self) -> CycFrac {
        CycFrac::from_int(self.0.zero())
    }

    fn one(&self) -> CycFrac {
        CycFrac::from_int(self.0.one())
    }

    fn from_int(&self, n: i64) -> CycFrac {
        CycFrac::from_int(self.0.from_int(n))
    }
}

impl RingElem for CycFrac {
    type Ring = CycField;

    fn ring(&self) -> CycField {
        CycField(self.num.ring.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        let num = &self.num.scale(&rhs.den) + &rhs.num.scale(&self.den);
        CycFrac::new(num, &self.den * &rhs.den).expect("non-zero denominator")
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        CycFrac::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("non-zero denominator")
    }

    fn neg(&self) -> Self {
        CycFrac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (norm, cof) = self.num.norm_with_cofactor();
        CycFrac::new(cof.scale(&self.den), norm).ok()
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "M": self.num.ring.order(),
            "num": self.num.coeffs.iter().map(bigint_json).collect::<Vec<_>>(),
            "den": bigint_json(&self.den),
        })
    }
}
