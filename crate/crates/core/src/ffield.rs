//! Deterministically constructed finite fields `F_{p^f}`.
//!
//! A field is `F_p[t]/(h)` where `h` is the lexicographically smallest
//! monic irreducible of degree `f`, comparing coefficient vectors from the
//! constant term up. Elements are stored by their canonical index
//! `c0 + c1*p + ... + c_{f-1}*p^{f-1}`, which doubles as the key of the full
//! discrete-log table built at construction.

use std::fmt;
use std::sync::Arc;

use crate::arith;
use crate::error::{invalid, Error, Result};

/// Upper bound on `p^f`; keeps the discrete-log tables small.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// Dense polynomial helpers over `F_p`, little-endian, used only while
/// constructing a field.
mod fp {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        crate::arith::pow_mod(a, p - 2, p)
    }

    pub fn rem(a: &[u64], h: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dh = h.len() - 1;
        let lead_inv = inv(h[dh], p);
        while r.len() > dh {
            let k = r.len() - 1;
            let c = r[k] * lead_inv % p;
            for (i, hc) in h.iter().enumerate() {
                r[k - dh + i] = (r[k - dh + i] + p - c * hc % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], h: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, h, p)
    }

    pub fn pow_mod(a: &[u64], mut e: u64, h: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], h, p);
        let mut base = rem(a, h, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, h, p);
            }
            e >>= 1;
            if e > 0 {
                base = mul_mod(&base, &base, h, p);
            }
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^{p^k} mod h`.
    pub fn frobenius_x(k: u32, h: &[u64], p: u64) -> Vec<u64> {
        let mut y = rem(&[0, 1], h, p);
        for _ in 0..k {
            y = pow_mod(&y, p, h, p);
        }
        y
    }

    /// Rabin's test: `x^{p^f} = x mod h` and `gcd(x^{p^{f/r}} - x, h) = 1`
    /// for every prime `r | f`.
    pub fn is_irreducible(h: &[u64], p: u64) -> bool {
        let f = (h.len() - 1) as u32;
        if f == 1 {
            return true;
        }
        let x = [0u64, 1];
        if !sub(&frobenius_x(f, h, p), &x, p).is_empty() {
            return false;
        }
        crate::arith::prime_divisors(f as u64).into_iter().all(|r| {
            let d = sub(&frobenius_x(f / r as u32, h, p), &x, p);
            gcd(&d, h, p).len() == 1
        })
    }
}

struct FieldData {
    p: u32,
    f: u32,
    size: u32,
    modulus: Vec<u32>,
    generator: u32,
    /// `exp[k]` is the index of `generator^k`.
    exp: Vec<u32>,
    /// `log[index]`, `NO_LOG` for zero.
    log: Vec<u32>,
}

/// A finite field `F_{p^f}` with a fixed generator of its unit group.
/// Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FqField(Arc<FieldData>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.modulus == other.0.modulus
                && self.0.generator == other.0.generator)
    }
}

impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{}[gen {}]",
            self.0.p,
            self.0.f,
            self.index_text(self.0.generator)
        )
    }
}

enum GeneratorChoice {
    /// The `n`-th generator in increasing index order (wrapping).
    Nth(u64),
    Index(u32),
}

/// The three Galois-theoretic maps of [`FqField::trace_norm_frob`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNormFrob {
    pub trace: FqElem,
    pub norm: FqElem,
    pub frob: FqElem,
}

impl FqField {
    /// Builds `F_{p^f}` with the smallest generator.
    pub fn new(p: u64, f: u32) -> Result<Self> {
        Self::with_seed(p, f, 0)
    }

    /// Builds `F_{p^f}` using the `seed`-th generator (in increasing
    /// index order, wrapping around the number of generators). Seed 0 is
    /// the default field; other seeds give the same modulus with a
    /// different generator.
    pub fn with_seed(p: u64, f: u32, seed: u64) -> Result<Self> {
        Self::build(p, f, GeneratorChoice::Nth(seed))
    }

    fn build(p: u64, f: u32, choice: GeneratorChoice) -> Result<Self> {
        if !arith::is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if f == 0 {
            return invalid("extension degree must be positive");
        }
        let size = (p as u128).pow(f);
        if size > MAX_FIELD_SIZE as u128 {
            return Err(Error::Size(format!(
                "{p}^{f} exceeds the field size limit {MAX_FIELD_SIZE}"
            )));
        }
        let size = size as u64;
        let modulus = smallest_irreducible(p, f);
        let units = size - 1;
        let primes = arith::prime_divisors(units);
        let decode = |mut idx: u64| -> Vec<u64> {
            (0..f)
                .map(|_| {
                    let c = idx % p;
                    idx /= p;
                    c
                })
                .collect()
        };
        let has_full_order = |idx: u64| -> bool {
            let a = decode(idx);
            primes
                .iter()
                .all(|r| fp::pow_mod(&a, units / r, &modulus, p) != vec![1])
        };
        let generator = match choice {
            GeneratorChoice::Index(idx) => {
                if idx as u64 >= size || idx == 0 || !has_full_order(idx as u64) {
                    return invalid(format!("index {idx} is not a generator"));
                }
                idx as u64
            }
            GeneratorChoice::Nth(n) => {
                let count = arith::totient(units);
                let wanted = n % count;
                (1..size)
                    .filter(|&i| has_full_order(i))
                    .nth(wanted as usize)
                    .ok_or_else(|| Error::ConstructionFailure("no generator found".into()))?
            }
        };
        let encode = |v: &[u64]| -> u32 { v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32 };
        let g = decode(generator);
        let g_terms: Vec<(usize, u64)> = g
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        let fu = f as usize;
        let mut exp = Vec::with_capacity(units as usize);
        let mut log = vec![NO_LOG; size as usize];
        let mut x = vec![0u64; fu];
        x[0] = 1;
        let mut prod = vec![0u64; 2 * fu];
        for k in 0..units {
            let idx = encode(&x);
            if log[idx as usize] != NO_LOG {
                return Err(Error::ConstructionFailure(format!(
                    "generator powers repeat at exponent {k}"
                )));
            }
            log[idx as usize] = k as u32;
            exp.push(idx);
            // x <- x * g mod h, in fixed buffers (h is monic).
            prod.iter_mut().for_each(|c| *c = 0);
            for (i, &xc) in x.iter().enumerate() {
                if xc != 0 {
                    for &(j, gc) in &g_terms {
                        prod[i + j] = (prod[i + j] + xc * gc) % p;
                    }
                }
            }
            for top in (fu..2 * fu).rev() {
                let c = prod[top];
                if c != 0 {
                    for (i, &hc) in modulus[..fu].iter().enumerate() {
                        let t = &mut prod[top - fu + i];
                        *t = (*t + p - c * hc % p) % p;
                    }
                    prod[top] = 0;
                }
            }
            x.copy_from_slice(&prod[..fu]);
        }
        if fp::trim(x) != vec![1] {
            return Err(Error::ConstructionFailure(
                "generator order does not match the unit group".into(),
            ));
        }
        Ok(FqField(Arc::new(FieldData {
            p: p as u32,
            f,
            size: size as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            generator: generator as u32,
            exp,
            log,
        })))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.f
    }

    /// `p^f`.
    pub fn size(&self) -> u64 {
        self.0.size as u64
    }

    /// Order of the unit group, `p^f - 1`.
    pub fn units(&self) -> u64 {
        self.size() - 1
    }

    /// The defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.at(self.0.generator)
    }

    pub fn zero(&self) -> FqElem {
        self.at(0)
    }

    pub fn one(&self) -> FqElem {
        self.at(1)
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        self.at(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given canonical index.
    pub fn from_index(&self, index: u64) -> Result<FqElem> {
        if index >= self.size() {
            return invalid(format!("index {index} out of range for {self:?}"));
        }
        Ok(self.at(index as u32))
    }

    /// Element with the given coefficients (constant term first).
    pub fn elem(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() != self.0.f as usize {
            return invalid(format!(
                "expected {} coefficients, got {}",
                self.0.f,
                coeffs.len()
            ));
        }
        let p = self.0.p as u64;
        if let Some(c) = coeffs.iter().find(|&&c| c >= p) {
            return invalid(format!("coefficient {c} is not reduced mod {p}"));
        }
        Ok(self.at(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c) as u32))
    }

    /// `generator^k`.
    pub fn gen_pow(&self, k: i64) -> FqElem {
        let units = self.units() as i64;
        self.at(self.0.exp[k.rem_euclid(units) as usize])
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.size).map(move |i| self.at(i))
    }

    pub fn dlog(&self, x: &FqElem) -> Result<u64> {
        self.check(x)?;
        x.dlog()
    }

    /// Trace, norm and Frobenius relative to the subfield of degree
    /// `sub_deg`, all computed inside this field.
    pub fn trace_norm_frob(&self, x: &FqElem, sub_deg: u32) -> Result<TraceNormFrob> {
        self.check(x)?;
        if sub_deg == 0 || !self.0.f.is_multiple_of(sub_deg) {
            return invalid(format!("{sub_deg} does not divide the degree {}", self.0.f));
        }
        let r = (self.0.p as u64).pow(sub_deg);
        let steps = self.0.f / sub_deg;
        let mut trace = self.zero();
        let mut norm = self.one();
        let mut conj = x.clone();
        for _ in 0..steps {
            trace = trace.add(&conj);
            norm = norm.mul(&conj);
            conj = conj.pow(r);
        }
        let frob = x.pow(r);
        for z in [&trace, &norm] {
            if z.pow(r) != *z {
                return Err(Error::ConstructionFailure(
                    "trace or norm left the subfield".into(),
                ));
            }
        }
        Ok(TraceNormFrob { trace, norm, frob })
    }

    /// The subfield of degree `sub_deg`, realised as its own field whose
    /// generator is `g^{(p^f - 1)/(p^sub_deg - 1)}` for this field's
    /// generator `g`, together with the embedding.
    pub fn subfield(&self, sub_deg: u32) -> Result<Subfield> {
        if sub_deg == 0 || !self.0.f.is_multiple_of(sub_deg) {
            return invalid(format!("{sub_deg} does not divide the degree {}", self.0.f));
        }
        let p = self.characteristic();
        let small = FqField::new(p, sub_deg)?;
        // Root of the small modulus with the least index.
        let alpha = self
            .elements()
            .find(|a| {
                small
                    .modulus()
                    .iter()
                    .rev()
                    .fold(self.zero(), |acc, &c| {
                        acc.mul(a).add(&self.from_int(c as i64))
                    })
                    .is_zero()
            })
            .ok_or_else(|| Error::ConstructionFailure("subfield modulus has no root".into()))?;
        let alpha_pows: Vec<FqElem> = (0..sub_deg).map(|i| alpha.pow(i as u64)).collect();
        let embed: Vec<u32> = small
            .elements()
            .map(|y| {
                y.coeffs()
                    .iter()
                    .zip(&alpha_pows)
                    .fold(self.zero(), |acc, (&c, ap)| {
                        acc.add(&ap.mul(&self.from_int(c as i64)))
                    })
                    .index
            })
            .collect();
        let mut restrict = vec![NO_LOG; self.size() as usize];
        for (i, &t) in embed.iter().enumerate() {
            restrict[t as usize] = i as u32;
        }
        let step = self.units() / small.units();
        let sub_gen = self.gen_pow(step as i64);
        let pre = restrict[sub_gen.index as usize];
        if pre == NO_LOG {
            return Err(Error::ConstructionFailure(
                "subfield generator is not in the embedded image".into(),
            ));
        }
        let field = FqField::build(p, sub_deg, GeneratorChoice::Index(pre))?;
        Ok(Subfield {
            top: self.clone(),
            field,
            embed,
            restrict,
        })
    }

    fn at(&self, index: u32) -> FqElem {
        FqElem {
            field: self.clone(),
            index,
        }
    }

    fn check(&self, x: &FqElem) -> Result<()> {
        if x.field != *self {
            return invalid(format!("{:?} is not an element of {self:?}", x));
        }
        Ok(())
    }

    fn digits(&self, mut idx: u32) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.f)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c
            })
            .collect()
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.0.p + c)
    }

    pub(crate) fn add_idx(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.f == 1 {
            return (a + b) % p;
        }
        if p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
        self.undigits(&sum)
    }

    pub(crate) fn neg_idx(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (p - x) % p).collect();
        self.undigits(&d)
    }

    pub(crate) fn mul_idx(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let units = self.0.size - 1;
        let k = (self.0.log[a as usize] as u64 + self.0.log[b as usize] as u64) % units as u64;
        self.0.exp[k as usize]
    }

    pub(crate) fn inv_idx(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let units = self.0.size - 1;
        let k = (units - self.0.log[a as usize]) % units;
        Some(self.0.exp[k as usize])
    }

    pub(crate) fn pow_idx(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let units = (self.0.size - 1) as u64;
        let k = (self.0.log[a as usize] as u64 % units) * (n % units) % units;
        self.0.exp[k as usize]
    }

    pub(crate) fn log_idx(&self, a: u32) -> Option<u64> {
        let l = self.0.log[a as usize];
        (l != NO_LOG).then_some(l as u64)
    }

    pub(crate) fn index_text(&self, idx: u32) -> String {
        let d = self.digits(idx);
        d.iter()
            .enumerate()
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Human-readable form with zero terms dropped.
    pub(crate) fn compact_text(&self, idx: u32) -> String {
        let terms: Vec<String> = self
            .digits(idx)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Parses the canonical encoding `c0+c1*t+c2*t^2+...`.
    pub fn parse(&self, text: &str) -> Result<FqElem> {
        let parts: Vec<&str> = text.split('+').map(str::trim).collect();
        if parts.len() != self.0.f as usize {
            return invalid(format!("'{text}' does not have {} terms", self.0.f));
        }
        let mut coeffs = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            let expected_tail = match i {
                0 => String::new(),
                1 => "*t".to_string(),
                _ => format!("*t^{i}"),
            };
            let c = part
                .strip_suffix(expected_tail.as_str())
                .and_then(|c| c.parse::<u64>().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("malformed term '{part}'")))?;
            coeffs.push(c);
        }
        self.elem(&coeffs)
    }
}

fn smallest_irreducible(p: u64, f: u32) -> Vec<u64> {
    // Counter over (c0, ..., c_{f-1}) with c0 most significant.
    let mut tail = vec![0u64; f as usize];
    loop {
        let mut h = tail.clone();
        h.push(1);
        let has_root =
            f > 1 && (0..p).any(|x| h.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0);
        if !has_root && fp::is_irreducible(&h, p) {
            return h;
        }
        let mut i = f as usize;
        loop {
            i -= 1;
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
            assert!(i > 0, "irreducible polynomials exist in every degree");
        }
    }
}

/// An element of an [`FqField`], stored by canonical index.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    field: FqField,
    index: u32,
}

impl FqElem {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// Canonical index `sum c_i p^i`.
    pub fn index(&self) -> u64 {
        self.index as u64
    }

    pub(crate) fn raw(&self) -> u32 {
        self.index
    }

    /// Coefficients in the power basis of `t`, constant term first.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.index)
    }

    /// Canonical text encoding `c0+c1*t+...`.
    pub fn encode(&self) -> String {
        self.field.index_text(self.index)
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    pub fn add(&self, rhs: &FqElem) -> FqElem {
        self.field.at(self.field.add_idx(self.index, rhs.index))
    }

    pub fn sub(&self, rhs: &FqElem) -> FqElem {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FqElem {
        self.field.at(self.field.neg_idx(self.index))
    }

    pub fn mul(&self, rhs: &FqElem) -> FqElem {
        self.field.at(self.field.mul_idx(self.index, rhs.index))
    }

    pub fn inverse(&self) -> Result<FqElem> {
        self.field
            .inv_idx(self.index)
            .map(|i| self.field.at(i))
            .ok_or_else(|| Error::Domain("zero has no inverse".into()))
    }

    pub fn pow(&self, n: u64) -> FqElem {
        self.field.at(self.field.pow_idx(self.index, n))
    }

    /// Discrete logarithm to the field generator, in `[0, p^f - 2]`.
    pub fn dlog(&self) -> Result<u64> {
        self.field
            .log_idx(self.index)
            .ok_or_else(|| Error::Domain("discrete log of zero".into()))
    }

    /// Multiplicative order; zero has none.
    pub fn order(&self) -> Result<u64> {
        let k = self.dlog()?;
        let units = self.field.units();
        Ok(units / arith::gcd(k, units))
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// A subfield realised as a standalone [`FqField`] together with its
/// embedding into the top field. The subfield generator maps to
/// `g^{(Q-1)/(q-1)}` for the top generator `g`, so a character of the
/// subfield with exponent `e` composed with the norm has exponent
/// `e * (Q-1)/(q-1)` on the top field.
#[derive(Clone, Debug)]
pub struct Subfield {
    top: FqField,
    field: FqField,
    embed: Vec<u32>,
    restrict: Vec<u32>,
}

impl Subfield {
    pub fn top(&self) -> &FqField {
        &self.top
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn embed(&self, y: &FqElem) -> Result<FqElem> {
        self.field.check(y)?;
        Ok(self.top.at(self.embed[y.index as usize]))
    }

    /// Preimage of a top-field element lying in the subfield.
    pub fn restrict(&self, x: &FqElem) -> Result<FqElem> {
        self.top.check(x)?;
        match self.restrict[x.index as usize] {
            NO_LOG => invalid(format!("{x} does not lie in the subfield")),
            i => Ok(self.field.at(i)),
        }
    }

    /// `(Q - 1)/(q - 1)`, the exponent of the norm map.
    pub fn norm_exponent(&self) -> u64 {
        self.top.units() / self.field.units()
    }
}
