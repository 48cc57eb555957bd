//! Gamma factors of tame and level-zero data in `S^{-1} R[X, X^{-1}]`.
//!
//! A [`GammaContext`] fixes a residue field `F_q`, its quadratic extension
//! `F_{q^2}`, a coefficient ring `R` together with the images of the roots
//! of unity the characters need, and a square root `s` of `q` in `R`.
//! Characteristic-zero contexts use `Q(zeta_M)`; modular contexts use an
//! Artin algebra `F_{l^d}[Y]/(Y^N)`.
//!
//! Conventions, applied uniformly to both sides of every comparison:
//!
//! * unramified `GL_1`: `(c X^{-1} - s^{-1}) / (1 - c s^{-1} X^{-1})` with
//!   `c = chi(w)^{-1}`;
//! * ramified `GL_1`: the monomial `s^{-1} tau(chi^{-1}, psi) c X^{-1}`;
//! * principal series: `gamma(t chi_1)(s^{-1} X) * gamma(t chi_2)(s X)`;
//! * special: the principal series of `(chi, chi)`;
//! * cuspidal: the constant `-q tau(chi_E theta, psi~) chi(w)^{-2}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::json;

use crate::arith;
use crate::artin::{ArtinAlg, ArtinElem, Laurent, LaurentRational};
use crate::chars::{gauss_sum_with, AddChar, NilCharLift, RealizedAddChar};
use crate::cyclo::{CycField, CycFrac, CycRing};
use crate::error::{invalid, Error, Result};
use crate::ffield::{FqField, Subfield};
use crate::reduce::{ReductionMap, ReductionOptions};
use crate::ring::{Ring, RingElem};

/// A gamma factor: a Laurent rational function with denominator in `S`.
pub type GammaFactor<R> = LaurentRational<R>;

/// How [`GammaContext::gamma_eq`] compares two factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CompareMode {
    Exact,
    /// Equal after multiplying one side by a power of `X`.
    #[default]
    UpToMonomial,
}

impl CompareMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CompareMode::Exact => "exact",
            CompareMode::UpToMonomial => "up_to_monomial",
        }
    }
}

impl fmt::Display for CompareMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CompareMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CompareMode::Exact),
            "up_to_monomial" | "up-to-monomial" | "monomial" => Ok(CompareMode::UpToMonomial),
            _ => invalid(format!("unknown comparison mode {s:?}")),
        }
    }
}

/// A tame character of `F^x`: its value on the generator of `F_q^x`
/// (through the Teichmuller splitting) and its value on the uniformizer.
#[derive(Clone, Debug, PartialEq)]
pub struct TameCharData<E> {
    on_units: E,
    at_uniformizer: E,
}

impl<E: RingElem> TameCharData<E> {
    pub fn on_units(&self) -> &E {
        &self.on_units
    }

    pub fn at_uniformizer(&self) -> &E {
        &self.at_uniformizer
    }

    /// True when the character is trivial on `O^x`.
    pub fn is_unramified(&self) -> bool {
        self.on_units.is_one()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        TameCharData {
            on_units: self.on_units.mul(&rhs.on_units),
            at_uniformizer: self.at_uniformizer.mul(&rhs.at_uniformizer),
        }
    }

    pub fn inverse(&self) -> Self {
        TameCharData {
            on_units: self.on_units.inverse().expect("character values are units"),
            at_uniformizer: self
                .at_uniformizer
                .inverse()
                .expect("character values are units"),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "on_units": self.on_units.to_json(), "at_uniformizer": self.at_uniformizer.to_json() })
    }
}

/// A level-zero inertial class for `GL_2`, keyed by exponents of
/// characters of `F_{q^2}^x` (cuspidal) or `F_q^x` (principal, special).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InertialSupport {
    /// Frobenius orbit `{e, q e}` of a regular exponent modulo `q^2 - 1`,
    /// stored with `exponent < conjugate`.
    Cuspidal { exponent: u64, conjugate: u64 },
    /// Unordered pair of exponents modulo `q - 1`, `first <= second`.
    Principal { first: u64, second: u64 },
    /// The special representation twisted by the character of `exponent`.
    Special { exponent: u64 },
}

impl InertialSupport {
    /// The cuspidal class of the character `g -> zeta_{q^2-1}^e`.
    pub fn cuspidal(q: u64, e: u64) -> Result<Self> {
        let n = q * q - 1;
        let e = e % n;
        let c = arith::mul_mod(e, q, n);
        if c == e {
            return invalid(format!("exponent {e} is not regular for q = {q}"));
        }
        Ok(InertialSupport::Cuspidal {
            exponent: e.min(c),
            conjugate: e.max(c),
        })
    }

    pub fn principal(q: u64, a: u64, b: u64) -> Self {
        let (a, b) = (a % (q - 1), b % (q - 1));
        InertialSupport::Principal {
            first: a.min(b),
            second: a.max(b),
        }
    }

    pub fn special(q: u64, e: u64) -> Self {
        InertialSupport::Special {
            exponent: e % (q - 1),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InertialSupport::Cuspidal { .. } => "cuspidal",
            InertialSupport::Principal { .. } => "principal",
            InertialSupport::Special { .. } => "special",
        }
    }

    /// Canonical ordering key: exponents first, then kind.
    pub fn sort_key(&self) -> (u64, u64, u8) {
        match *self {
            InertialSupport::Cuspidal {
                exponent,
                conjugate,
            } => (exponent, conjugate, 0),
            InertialSupport::Principal { first, second } => (first, second, 1),
            InertialSupport::Special { exponent } => (exponent, exponent, 2),
        }
    }

    /// Exponent modulo `q - 1` of the central character restricted to
    /// `F_q^x`.
    pub fn central_exponent(&self, q: u64) -> u64 {
        match *self {
            InertialSupport::Cuspidal { exponent, .. } => exponent % (q - 1),
            InertialSupport::Principal { first, second } => (first + second) % (q - 1),
            InertialSupport::Special { exponent } => 2 * exponent % (q - 1),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            InertialSupport::Cuspidal {
                exponent,
                conjugate,
            } => {
                format!("cuspidal({exponent},{conjugate})")
            }
            InertialSupport::Principal { first, second } => format!("principal({first},{second})"),
            InertialSupport::Special { exponent } => format!("special({exponent})"),
        }
    }

    pub fn to_json(&self, q: u64) -> serde_json::Value {
        let exponents = match *self {
            InertialSupport::Cuspidal {
                exponent,
                conjugate,
            } => vec![exponent, conjugate],
            InertialSupport::Principal { first, second } => vec![first, second],
            InertialSupport::Special { exponent } => vec![exponent],
        };
        json!({
            "kind": self.kind(),
            "exponents": exponents,
            "central_exponent": self.central_exponent(q),
        })
    }
}

impl PartialOrd for InertialSupport {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InertialSupport {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Which character data a modular context carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContextScope {
    /// Roots of unity of order `q^2 - 1` and `p`: every gamma factor.
    #[default]
    Full,
    /// No `p`-th roots of unity, so no Gauss sums. Only unramified `GL_1`
    /// data is available, but the residue field stays small when
    /// `ord_l(p)` is large.
    Unramified,
}

/// The residue field data shared by all contexts for a given `q`.
#[derive(Clone, Debug)]
struct FieldPair {
    q: u64,
    p: u64,
    big: FqField,
    sub: Subfield,
    psi_small: AddChar,
    psi_big: AddChar,
}

impl FieldPair {
    fn new(q: u64) -> Result<Self> {
        let (p, r) = arith::prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        let big = FqField::new(p, 2 * r)?;
        let sub = big.subfield(r)?;
        let psi_small = AddChar::canonical(sub.field())?;
        let psi_big = AddChar::canonical(&big)?;
        Ok(FieldPair {
            q,
            p,
            big,
            sub,
            psi_small,
            psi_big,
        })
    }
}

/// `psi` on `F_q` and `psi~` on `F_{q^2}`.
type AdditivePair<E> = (RealizedAddChar<E>, RealizedAddChar<E>);

/// Coefficient ring, root-of-unity images and conventions for gamma factors.
#[derive(Clone, Debug)]
pub struct GammaContext<R: Ring> {
    ring: R,
    fields: Arc<FieldPair>,
    psi: Option<AdditivePair<R::Elem>>,
    unit_roots: Arc<Vec<R::Elem>>,
    q_image: R::Elem,
    s: R::Elem,
    s_inv: R::Elem,
    mode: CompareMode,
    info: serde_json::Value,
}

impl GammaContext<CycField> {
    /// Context over `Q(zeta_M)` with `M` large enough to hold the character
    /// values and `sqrt(q)`.
    pub fn characteristic_zero(q: u64, mode: CompareMode) -> Result<Self> {
        let fields = FieldPair::new(q)?;
        let p = fields.p;
        let extra = match p {
            2 => 8,
            _ if p % 4 == 3 => 4,
            _ => 1,
        };
        let m = arith::lcm(arith::lcm(q * q - 1, p), extra);
        let ring = CycField(CycRing::new(m)?);
        let zeta = |e: u64| CycFrac::from_int(ring.0.zeta_pow(e as i64));
        let s = sqrt_q_cyclotomic(&ring.0, q)?;
        let step = m / (q * q - 1);
        let unit_roots = (0..q * q - 1).map(|i| zeta(i * step)).collect();
        let info = json!({
            "coefficients": format!("Q(zeta_{m})"),
            "q": q,
            "sqrt_q": s.to_json(),
        });
        Self::assemble(
            ring.clone(),
            fields,
            Some(zeta(m / p)),
            unit_roots,
            s,
            mode,
            info,
        )
    }
}

/// `sqrt(q)` in `Z[zeta_M]` from the quadratic Gauss sum of `F_p`.
fn sqrt_q_cyclotomic(ring: &CycRing, q: u64) -> Result<CycFrac> {
    let (p, r) = arith::prime_power(q).expect("checked by caller");
    let m = ring.order() as i64;
    let sqrt_p = if p == 2 {
        &ring.zeta_pow(m / 8) + &ring.zeta_pow(-m / 8)
    } else {
        let mut counts = vec![0i64; m as usize];
        for x in 1..p {
            let legendre = if arith::pow_mod(x, (p - 1) / 2, p) == 1 {
                1
            } else {
                -1
            };
            counts[(x as i64 * (m / p as i64)) as usize] += legendre;
        }
        let g = ring.from_power_counts(&counts)?;
        if p % 4 == 1 {
            g
        } else {
            // g^2 = -p, so sqrt(p) = -i g.
            -&(&ring.zeta_pow(m / 4) * &g)
        }
    };
    let scale = ring.from_int(p.pow(r / 2));
    let s = if r % 2 == 0 { scale } else { &scale * &sqrt_p };
    if s.pow(2) != ring.from_int(q) {
        return Err(Error::ConstructionFailure(format!(
            "failed to build sqrt({q})"
        )));
    }
    Ok(CycFrac::from_int(s))
}

impl GammaContext<ArtinAlg> {
    /// Context over `F_{l^d}[Y]/(Y^depth)`. The residue degree is the least
    /// one holding the values of characters of `F_{q^2}^x` and `F_p`, doubled
    /// when `q` is not a square there. `seed` picks the residue-field
    /// generator, hence the prime above `l`.
    pub fn modular(q: u64, ell: u64, depth: usize, seed: u64, mode: CompareMode) -> Result<Self> {
        Self::modular_with(q, ell, depth, seed, mode, ContextScope::Full)
    }

    pub fn modular_with(
        q: u64,
        ell: u64,
        depth: usize,
        seed: u64,
        mode: CompareMode,
        scope: ContextScope,
    ) -> Result<Self> {
        if !arith::is_prime(ell) {
            return invalid(format!("{ell} is not prime"));
        }
        let fields = FieldPair::new(q)?;
        if fields.p == ell {
            return invalid(format!("l = {ell} equals the residue characteristic"));
        }
        if depth == 0 {
            return invalid("depth must be at least 1");
        }
        let base = match scope {
            ContextScope::Full => arith::lcm(q * q - 1, fields.p),
            ContextScope::Unramified => q * q - 1,
        };
        let (a, _, m_prime) = arith::split_prime_part(base, ell);
        let mut b = a.max(1);
        while arith::totient(ell.pow(b)) < depth as u64 {
            b += 1;
        }
        let m = m_prime
            .checked_mul(
                ell.checked_pow(b)
                    .ok_or_else(|| Error::Size("depth too large".into()))?,
            )
            .ok_or_else(|| Error::Size("depth too large".into()))?;
        let build = |degree_multiple| {
            ReductionMap::with_options(
                m,
                ell,
                ReductionOptions {
                    degree_multiple,
                    seed,
                },
            )
            .and_then(|map| map.truncated(depth))
        };
        let mut map = build(1)?;
        let sqrt = match residue_sqrt(map.target(), q) {
            Some(s) => s,
            None => {
                map = build(2)?;
                residue_sqrt(map.target(), q).ok_or_else(|| {
                    Error::ConstructionFailure(format!("no square root of {q} mod {ell}"))
                })?
            }
        };
        let r = map.target().clone();
        let teich = |x: ArtinElem| r.constant(&x.residue()).expect("same residue field");
        let t = teich(map.zeta_image((m / (q * q - 1)) as i64));
        let mut unit_roots = Vec::with_capacity((q * q - 1) as usize);
        let mut acc = r.one();
        for _ in 0..q * q - 1 {
            unit_roots.push(acc.clone());
            acc = acc.mul(&t);
        }
        let zeta_p =
            (scope == ContextScope::Full).then(|| teich(map.zeta_image((m / fields.p) as i64)));
        let s = r.constant(&sqrt)?;
        let info = json!({
            "coefficients": format!("F_{}^{}[Y]/Y^{}", ell, r.residue_degree(), depth),
            "q": q,
            "ell": ell,
            "depth": depth,
            "seed": seed,
            "scope": format!("{scope:?}").to_lowercase(),
            "residue_modulus": r.residue_field().modulus(),
            "residue_generator": r.residue_field().generator().encode(),
            "reduction": map.to_json(),
            "sqrt_q": s.to_json(),
        });
        Self::assemble(r, fields, zeta_p, unit_roots, s, mode, info)
    }

    /// The tame character `g_q -> teichmuller(zeta_{q-1}^e) * unipotent`.
    pub fn lift_char(
        &self,
        residue_exponent: i64,
        unipotent: &ArtinElem,
        at_uniformizer: ArtinElem,
    ) -> Result<TameCharData<ArtinElem>> {
        if unipotent.residue() != self.ring.residue_field().one() {
            return invalid(format!("{unipotent:?} is not unipotent"));
        }
        let base = self.k_char(residue_exponent).on_units;
        self.tame_char(base.mul(unipotent), at_uniformizer)
    }

    /// A [`NilCharLift`] of `F_q^x` as tame data.
    pub fn from_lift(
        &self,
        lift: &NilCharLift,
        at_uniformizer: ArtinElem,
    ) -> Result<TameCharData<ArtinElem>> {
        if lift.field() != self.small_field() {
            return invalid("lift is not defined on the context's residue field");
        }
        self.tame_char(lift.value_at_generator().clone(), at_uniformizer)
    }
}

/// A square root of `q` in the residue field of `r`, if one exists.
fn residue_sqrt(r: &ArtinAlg, q: u64) -> Option<crate::ffield::FqElem> {
    let k = r.residue_field();
    let x = k.from_int(q as i64);
    let units = k.units();
    let e = x.dlog().ok()?;
    let half = if units % 2 == 1 {
        arith::mul_mod(e, units.div_ceil(2), units)
    } else if e % 2 == 0 {
        e / 2
    } else {
        return None;
    };
    Some(k.gen_pow(half as i64))
}

impl<R: Ring> GammaContext<R> {
    fn assemble(
        ring: R,
        fields: FieldPair,
        zeta_p: Option<R::Elem>,
        unit_roots: Vec<R::Elem>,
        s: R::Elem,
        mode: CompareMode,
        info: serde_json::Value,
    ) -> Result<Self> {
        let q_image = ring.from_int(fields.q as i64);
        if !s.mul(&s).sub(&q_image).is_zero() {
            return Err(Error::ConstructionFailure("s^2 != q".into()));
        }
        let s_inv = s.inverse().ok_or_else(|| {
            Error::ConstructionFailure("q is not a unit in the coefficients".into())
        })?;
        let psi = match zeta_p {
            Some(z) => Some((
                fields.psi_small.realize(z.clone())?,
                fields.psi_big.realize(z)?,
            )),
            None => None,
        };
        Ok(GammaContext {
            ring,
            fields: Arc::new(fields),
            psi,
            unit_roots: Arc::new(unit_roots),
            q_image,
            s,
            s_inv,
            mode,
            info,
        })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn q(&self) -> u64 {
        self.fields.q
    }

    pub fn mode(&self) -> CompareMode {
        self.mode
    }

    pub fn with_mode(&self, mode: CompareMode) -> Self {
        GammaContext {
            mode,
            ..self.clone()
        }
    }

    /// `F_q`, realised inside `F_{q^2}` with generator `g^{q+1}`.
    pub fn small_field(&self) -> &FqField {
        self.fields.sub.field()
    }

    pub fn big_field(&self) -> &FqField {
        &self.fields.big
    }

    pub fn subfield(&self) -> &Subfield {
        &self.fields.sub
    }

    pub fn q_image(&self) -> &R::Elem {
        &self.q_image
    }

    pub fn sqrt_q(&self) -> &R::Elem {
        &self.s
    }

    /// Description of the coefficient ring and the choices made.
    pub fn info(&self) -> &serde_json::Value {
        &self.info
    }

    /// Image of `zeta_{q^2-1}^e`, the value of the exponent-`e` character of
    /// `F_{q^2}^x` at the generator.
    pub fn unit_root(&self, e: i64) -> R::Elem {
        let n = self.unit_roots.len() as i64;
        self.unit_roots[e.rem_euclid(n) as usize].clone()
    }

    /// Tame data from raw values; the value on units must have order
    /// dividing `q - 1` and the value at the uniformizer must be a unit.
    pub fn tame_char(
        &self,
        on_units: R::Elem,
        at_uniformizer: R::Elem,
    ) -> Result<TameCharData<R::Elem>> {
        if on_units.ring() != self.ring || at_uniformizer.ring() != self.ring {
            return invalid("character values lie in a different ring");
        }
        if !at_uniformizer.is_unit() {
            return invalid(format!("chi(w) = {at_uniformizer:?} is not a unit"));
        }
        if !on_units.pow(self.q() - 1).is_one() {
            return invalid(format!("{on_units:?} is not a (q-1)-th root of unity"));
        }
        Ok(TameCharData {
            on_units,
            at_uniformizer,
        })
    }

    /// The `k`-valued character `g_q -> zeta_{q-1}^e`, trivial at the
    /// uniformizer.
    pub fn k_char(&self, e: i64) -> TameCharData<R::Elem> {
        TameCharData {
            on_units: self.unit_root(e * (self.q() as i64 + 1)),
            at_uniformizer: self.ring.one(),
        }
    }

    /// `tau(chi, psi)` over `F_q` for the character with value `v` at the
    /// generator.
    pub fn gauss_small(&self, v: &R::Elem) -> Result<R::Elem> {
        gauss_sum_with(self.small_field(), v, &self.additive()?.0)
    }

    /// `tau(chi, psi~)` over `F_{q^2}` with `psi~ = psi o Tr`.
    pub fn gauss_big(&self, v: &R::Elem) -> Result<R::Elem> {
        gauss_sum_with(self.big_field(), v, &self.additive()?.1)
    }

    fn additive(&self) -> Result<&AdditivePair<R::Elem>> {
        self.psi
            .as_ref()
            .ok_or_else(|| Error::Domain("context was built without an additive character".into()))
    }

    fn check(&self, chi: &TameCharData<R::Elem>) -> Result<()> {
        if chi.on_units.ring() != self.ring || chi.at_uniformizer.ring() != self.ring {
            return invalid("character data over a different ring");
        }
        if !chi.at_uniformizer.is_unit() {
            return invalid(format!("chi(w) = {:?} is not a unit", chi.at_uniformizer));
        }
        Ok(())
    }

    pub fn gamma_gl1(&self, chi: &TameCharData<R::Elem>) -> Result<GammaFactor<R>> {
        self.check(chi)?;
        let c = chi.at_uniformizer.inverse().expect("checked unit");
        if chi.is_unramified() {
            let r = &self.ring;
            let num = Laurent::from_terms(r, [(-1, c.clone()), (0, self.s_inv.neg())]);
            let den = Laurent::from_terms(r, [(0, r.one()), (-1, c.mul(&self.s_inv).neg())]);
            LaurentRational::new(num, den)
        } else {
            let v_inv = chi.on_units.inverse().expect("character values are units");
            let tau = self.gauss_small(&v_inv)?;
            Ok(LaurentRational::monomial(self.s_inv.mul(&tau).mul(&c), -1))
        }
    }

    /// `gamma(twist chi_1)(s^{-1} X) * gamma(twist chi_2)(s X)`.
    pub fn gamma_principal(
        &self,
        chi1: &TameCharData<R::Elem>,
        chi2: &TameCharData<R::Elem>,
        twist: &TameCharData<R::Elem>,
    ) -> Result<GammaFactor<R>> {
        let a = self
            .gamma_gl1(&twist.mul(chi1))?
            .substitute(&self.s_inv, 1)?;
        let b = self.gamma_gl1(&twist.mul(chi2))?.substitute(&self.s, 1)?;
        a.mul(&b)
    }

    /// The special representation twisted by the `k`-valued character of
    /// exponent `e`, computed as `gamma(chi o det)`.
    pub fn gamma_special(&self, e: u64, twist: &TameCharData<R::Elem>) -> Result<GammaFactor<R>> {
        let chi = self.k_char(e as i64);
        self.gamma_principal(&chi, &chi, twist)
    }

    /// `-q tau(chi_E theta, psi~) chi(w)^{-2}` for the cuspidal class of
    /// `theta`, with `chi_E = chi o N`.
    pub fn gamma_cuspidal_twist(
        &self,
        support: &InertialSupport,
        twist: &TameCharData<R::Elem>,
    ) -> Result<GammaFactor<R>> {
        self.check(twist)?;
        let InertialSupport::Cuspidal { exponent, .. } = *support else {
            return invalid(format!("{} is not cuspidal", support.label()));
        };
        InertialSupport::cuspidal(self.q(), exponent)?;
        // The generator of F_q is the norm of the generator of F_{q^2}.
        let v = twist.on_units.mul(&self.unit_root(exponent as i64));
        let tau = self.gauss_big(&v)?;
        let c2 = twist.at_uniformizer.pow_signed(-2).expect("checked unit");
        Ok(LaurentRational::constant(
            self.q_image.neg().mul(&tau).mul(&c2),
        ))
    }

    /// The twisted gamma factor of any support.
    pub fn gamma_support(
        &self,
        support: &InertialSupport,
        twist: &TameCharData<R::Elem>,
    ) -> Result<GammaFactor<R>> {
        match *support {
            InertialSupport::Cuspidal { .. } => self.gamma_cuspidal_twist(support, twist),
            InertialSupport::Principal { first, second } => self.gamma_principal(
                &self.k_char(first as i64),
                &self.k_char(second as i64),
                twist,
            ),
            InertialSupport::Special { exponent } => self.gamma_special(exponent, twist),
        }
    }

    /// The product of `GL_1` factors of a sum of tame characters.
    pub fn gamma_galois_tame(&self, chars: &[TameCharData<R::Elem>]) -> Result<GammaFactor<R>> {
        let (first, rest) = chars
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("empty multiset of characters".into()))?;
        rest.iter().try_fold(self.gamma_gl1(first)?, |acc, chi| {
            acc.mul(&self.gamma_gl1(chi)?)
        })
    }

    /// Compares two factors in the context's mode.
    pub fn gamma_eq(&self, a: &GammaFactor<R>, b: &GammaFactor<R>) -> Result<bool> {
        match self.mode {
            CompareMode::Exact => a.eq_exact(b),
            CompareMode::UpToMonomial => a.eq_up_to_x_power(b),
        }
    }

    /// The normalizations in force, for report headers.
    pub fn conventions() -> serde_json::Value {
        json!({
            "gl1_unramified": "(c X^-1 - s^-1) / (1 - c s^-1 X^-1), c = chi(w)^-1",
            "gl1_ramified": "s^-1 tau(chi^-1, psi) chi(w)^-1 X^-1",
            "cuspidal": "-q tau(chi_E theta, psi~) chi(w)^-2 X^0, chi_E = chi o N",
            "principal": "gamma(t chi_1)(s^-1 X) gamma(t chi_2)(s X)",
            "special": "gamma(chi o det) = principal(chi, chi)",
            "sqrt_q": "s = g^(dlog(q)/2) in the residue field; quadratic Gauss sum in characteristic zero",
            "uniformizer": "chi(w) = 1 for every menu twist",
            "psi": "psi(x) = zeta_p^Tr(x) on F_q; psi~ = psi o Tr on F_q^2",
            "k_valued": "Teichmuller lift of the residue of zeta_(q^2-1)^e",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2y(ctx: &GammaContext<ArtinAlg>, idx: &[u64]) -> ArtinElem {
        ctx.ring().from_indices(idx).unwrap()
    }

    fn chi_tilde(ctx: &GammaContext<ArtinAlg>) -> TameCharData<ArtinElem> {
        let r = ctx.ring();
        ctx.lift_char(0, &r.one().add(&r.y()), r.one()).unwrap()
    }

    #[test]
    fn characteristic_zero_square_roots() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 25, 27] {
            let ctx = GammaContext::characteristic_zero(q, CompareMode::Exact).unwrap();
            let s = ctx.sqrt_q();
            assert_eq!(&s.mul(s), ctx.q_image(), "q = {q}");
        }
        assert!(GammaContext::characteristic_zero(6, CompareMode::Exact).is_err());
    }

    #[test]
    fn unramified_gl1_shape_in_characteristic_zero() {
        let ctx = GammaContext::characteristic_zero(5, CompareMode::Exact).unwrap();
        let g = ctx.gamma_gl1(&ctx.k_char(0)).unwrap();
        let one = ctx.ring().one();
        let s_inv = ctx.sqrt_q().inverse().unwrap();
        let num = Laurent::from_terms(ctx.ring(), [(-1, one.clone()), (0, s_inv.neg())]);
        let den = Laurent::from_terms(ctx.ring(), [(0, one), (-1, s_inv.neg())]);
        assert_eq!(g.numerator(), &num);
        assert_eq!(g.denominator(), &den);
    }

    #[test]
    fn unramified_gl1_is_minus_one_mod_l() {
        for (q, ell) in [(5, 2), (7, 3), (11, 5), (13, 3)] {
            let scope = ContextScope::Unramified;
            let ctx = GammaContext::modular_with(q, ell, 1, 0, CompareMode::Exact, scope).unwrap();
            assert!(matches!(
                ctx.gauss_small(&ctx.ring().one()),
                Err(Error::Domain(_))
            ));
            let g = ctx.gamma_gl1(&ctx.k_char(0)).unwrap();
            let minus_one = LaurentRational::constant(ctx.ring().from_int(-1));
            assert!(g.eq_exact(&minus_one).unwrap(), "q = {q}, l = {ell}");
        }
    }

    #[test]
    fn lift_pair_product() {
        let ctx = GammaContext::modular(5, 2, 4, 0, CompareMode::Exact).unwrap();
        let chi = chi_tilde(&ctx);
        let prod = ctx
            .gamma_gl1(&chi)
            .unwrap()
            .mul(&ctx.gamma_gl1(&chi.inverse()).unwrap())
            .unwrap();
        let (c, k) = prod.as_monomial().unwrap();
        assert_eq!((c.indices(), k), (vec![1, 0, 1, 1], -2));
        let single = ctx.gamma_galois_tame(std::slice::from_ref(&chi)).unwrap();
        assert!(single.eq_exact(&ctx.gamma_gl1(&chi).unwrap()).unwrap());
    }

    #[test]
    fn principal_twisted_by_lift() {
        let ctx = GammaContext::modular(5, 2, 4, 0, CompareMode::Exact).unwrap();
        let triv = ctx.k_char(0);
        let g = ctx.gamma_principal(&triv, &triv, &chi_tilde(&ctx)).unwrap();
        let (c, k) = g.as_monomial().unwrap();
        assert_eq!(k, -2);
        let idx = c.indices();
        assert_eq!((idx[0], idx[1], idx[3]), (1, 0, 0));
        let a = ctx.ring().residue_field().from_index(idx[2]).unwrap();
        assert!(a
            .mul(&a)
            .add(&a)
            .add(&ctx.ring().residue_field().one())
            .is_zero());
    }

    #[test]
    fn cuspidal_entries() {
        let theta = InertialSupport::cuspidal(5, 8).unwrap();
        let ctx = GammaContext::modular(5, 2, 4, 0, CompareMode::Exact).unwrap();
        let g = ctx.gamma_cuspidal_twist(&theta, &ctx.k_char(0)).unwrap();
        assert_eq!(g.as_monomial().unwrap(), (ctx.ring().one(), 0));
        let g = ctx.gamma_cuspidal_twist(&theta, &chi_tilde(&ctx)).unwrap();
        let (c, _) = g.as_monomial().unwrap();
        assert_eq!(c.indices(), vec![1, 1, 11, 10]);
        assert_eq!(c.mul(&c), f2y(&ctx, &[1, 0, 1, 0]));

        let ctx0 = GammaContext::characteristic_zero(5, CompareMode::Exact).unwrap();
        let g = ctx0.gamma_cuspidal_twist(&theta, &ctx0.k_char(0)).unwrap();
        let (c, k) = g.as_monomial().unwrap();
        assert_eq!(k, 0);
        assert_eq!(c.mul(&c), ctx0.ring().from_int(625));
        assert!(matches!(
            InertialSupport::cuspidal(5, 6),
            Err(Error::InvalidArgument(_))
        ));
        assert!(ctx0
            .gamma_cuspidal_twist(&InertialSupport::special(5, 0), &ctx0.k_char(0))
            .is_err());
    }

    #[test]
    fn naive_sides_agree_for_q5_l2() {
        let theta = InertialSupport::cuspidal(5, 8).unwrap();
        let sp = InertialSupport::special(5, 0);
        for mode in [CompareMode::Exact, CompareMode::UpToMonomial] {
            let ctx = GammaContext::modular(5, 2, 1, 0, mode).unwrap();
            for e in 0..4 {
                let twist = ctx.k_char(e);
                assert!(twist.is_unramified());
                let a = ctx.gamma_support(&theta, &twist).unwrap();
                let b = ctx.gamma_support(&sp, &twist).unwrap();
                assert!(ctx.gamma_eq(&a, &b).unwrap());
                assert!(ctx
                    .gamma_eq(&a, &LaurentRational::constant(ctx.ring().one()))
                    .unwrap());
            }
        }
    }

    #[test]
    fn compare_modes() {
        let ctx = GammaContext::modular(5, 3, 1, 0, CompareMode::Exact).unwrap();
        let c = ctx.ring().from_int(2);
        let a = LaurentRational::monomial(c.clone(), -1);
        let b = LaurentRational::constant(c);
        assert!(ctx.gamma_eq(&a, &a).unwrap());
        assert!(!ctx.gamma_eq(&a, &b).unwrap());
        assert!(ctx
            .with_mode(CompareMode::UpToMonomial)
            .gamma_eq(&a, &b)
            .unwrap());
        assert_eq!("exact".parse::<CompareMode>().unwrap(), CompareMode::Exact);
        assert!("fuzzy".parse::<CompareMode>().is_err());
    }

    #[test]
    fn galois_side_products() {
        let ctx = GammaContext::modular(5, 2, 1, 0, CompareMode::Exact).unwrap();
        let triv = ctx.k_char(0);
        let pair = ctx
            .gamma_galois_tame(&[triv.clone(), triv.clone()])
            .unwrap();
        let one = LaurentRational::constant(ctx.ring().one());
        assert!(pair.eq_exact(&one).unwrap());
        assert!(ctx
            .gamma_principal(&triv, &triv, &triv)
            .unwrap()
            .eq_up_to_x_power(&pair)
            .unwrap());
        assert!(ctx.gamma_galois_tame(&[]).is_err());

        // {chi, chi^-1} ramified: s^-2 chi(-1) q = chi(-1).
        let ctx0 = GammaContext::characteristic_zero(7, CompareMode::Exact).unwrap();
        for e in 1..6 {
            let chi = ctx0.k_char(e);
            let g = ctx0
                .gamma_galois_tame(&[chi.clone(), chi.inverse()])
                .unwrap();
            let (c, k) = g.as_monomial().unwrap();
            let sign = if e % 2 == 0 { 1 } else { -1 };
            assert_eq!((c, k), (ctx0.ring().from_int(sign), -2));
        }
    }

    #[test]
    fn cuspidal_square_matches_reduced_characteristic_zero_value() {
        let ctx = GammaContext::modular(5, 2, 1, 0, CompareMode::Exact).unwrap();
        let map = ReductionMap::new(120, 2).unwrap().truncated(1).unwrap();
        assert_eq!(map.target(), ctx.ring());
        let big = ctx.big_field();
        let psi = AddChar::canonical(big).unwrap();
        for e in 0..24 {
            let Ok(support) = InertialSupport::cuspidal(5, e) else {
                continue;
            };
            let g = ctx.gamma_cuspidal_twist(&support, &ctx.k_char(0)).unwrap();
            let (c, _) = g.as_monomial().unwrap();
            let chi = crate::chars::MultChar::new(big, e as i64);
            let tau = crate::chars::gauss_sum_in(&chi, &psi, map.source()).unwrap();
            let expected = map
                .reduce(&(&map.source().from_int(25) * &tau.pow(2)))
                .unwrap();
            assert_eq!(c.mul(&c), expected);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(GammaContext::modular(5, 5, 1, 0, CompareMode::Exact).is_err());
        assert!(GammaContext::modular(6, 2, 1, 0, CompareMode::Exact).is_err());
        assert!(GammaContext::modular(5, 4, 1, 0, CompareMode::Exact).is_err());
        let ctx = GammaContext::modular(5, 3, 1, 0, CompareMode::Exact).unwrap();
        let r = ctx.ring();
        assert!(ctx.tame_char(r.one(), r.zero()).is_err());
        assert!(ctx.tame_char(r.from_int(2).add(&r.one()), r.one()).is_err());
    }
}
