//! Exact arithmetic over ℚ and the cyclotomic fields ℚ(ζ_n).
//!
//! Elements of ℚ(ζ_n) are stored in the power basis 1, ζ, …, ζ^{φ(n)-1} of
//! ℚ[t]/Φ_n(t), so two elements of the same order are equal exactly when
//! their coefficient vectors are. Operands of different orders are lifted to
//! the field of order lcm(a, b) before combining.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer polynomial, coefficients from the constant term upwards.
pub type IntPoly = Vec<BigInt>;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim()).map_err(|_| Error::Parse(format!("invalid rational {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn cyclotomic_uncached(n: u32) -> IntPoly {
    // t^n - 1 divided by every Φ_e with e a proper divisor of n.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for e in divisors(n) {
        if e == n {
            continue;
        }
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(e));
    }
    poly
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> IntPoly {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn cyclo_cache() -> &'static RwLock<HashMap<u32, Arc<IntPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cyclotomic_shared(n: u32) -> Arc<IntPoly> {
    if let Some(p) = cyclo_cache()
        .read()
        .expect("cyclotomic cache poisoned")
        .get(&n)
    {
        return p.clone();
    }
    let p = Arc::new(cyclotomic_uncached(n));
    cyclo_cache()
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(n)
        .or_insert(p)
        .clone()
}

/// The n-th cyclotomic polynomial Φ_n, constant term first.
///
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: u32) -> IntPoly {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    cyclotomic_shared(n).as_ref().clone()
}

/// Reduce `poly` (arbitrary length) modulo the monic integer polynomial `modulus`.
fn reduce_mod(mut poly: Vec<Rational>, modulus: &[BigInt]) -> Vec<Rational> {
    let deg = modulus.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, mj) in modulus.iter().enumerate().take(deg) {
                if !mj.is_zero() {
                    poly[i - deg + j] -= &c * Rational::from_integer(mj.clone());
                }
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

// Dense polynomial helpers over ℚ, used by the extended Euclidean algorithm.

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    let lead_inv = den[dd].recip();
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    rem.truncate(dd);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// An element of ℚ(ζ_n) in the power basis modulo Φ_n.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    /// Builds an element from power-basis coefficients; longer inputs are
    /// reduced modulo Φ_n, shorter ones padded with zeros.
    pub fn new(order: u32, coeffs: Vec<Rational>) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        let phi = cyclotomic_shared(order);
        Self {
            order,
            coeffs: reduce_mod(coeffs, &phi),
        }
    }

    pub fn zero(order: u32) -> Self {
        Self::embed_rational(Rational::zero(), order)
    }

    pub fn one(order: u32) -> Self {
        Self::embed_rational(Rational::one(), order)
    }

    pub fn from_int(value: i64, order: u32) -> Self {
        Self::embed_rational(Rational::from_integer(value.into()), order)
    }

    /// Constant embedding ℚ → ℚ(ζ_n).
    pub fn embed_rational(q: Rational, order: u32) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        let mut coeffs = vec![Rational::zero(); euler_phi(order)];
        coeffs[0] = q;
        Self { order, coeffs }
    }

    /// ζ_n^power.
    pub fn zeta_pow(order: u32, power: u32) -> Self {
        let power = (power % order) as usize;
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = Rational::one();
        Self::new(order, coeffs)
    }

    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(order, 1)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Re-expresses this element in ℚ(ζ_target); `target` must be a multiple of the order.
    pub fn lift(&self, target: u32) -> Self {
        assert!(
            target.is_multiple_of(self.order),
            "cannot lift order {} to {target}",
            self.order
        );
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut spread = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            spread[i * step] = c.clone();
        }
        Self::new(target, spread)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let n = self.order.lcm(&other.order);
        (self.lift(n), other.lift(n))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_n.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order <= 2 {
            return Ok(Self::embed_rational(self.coeffs[0].recip(), self.order));
        }
        let modulus: Vec<Rational> = cyclotomic_shared(self.order)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // Invariant: s_i * self ≡ r_i (mod Φ_n).
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Φ_n is irreducible, so the last nonzero remainder is a constant.
        let c = r1[0].recip();
        let scaled = s1.into_iter().map(|x| x * &c).collect();
        Ok(Self::new(self.order, scaled))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Evaluates an integer polynomial at this element.
    pub fn eval_int_poly(&self, poly: &[BigInt]) -> Self {
        let mut acc = Self::zero(self.order);
        for c in poly.iter().rev() {
            acc = &(&acc * self)
                + &Self::embed_rational(Rational::from_integer(c.clone()), self.order);
        }
        acc
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    fn mul_same(&self, other: &Self) -> Self {
        if self.coeffs.len() == 1 {
            return Self {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let prod = poly_mul(&self.coeffs, &other.coeffs);
        Self {
            order: self.order,
            coeffs: reduce_mod(prod, &cyclotomic_shared(self.order)),
        }
    }

    /// Power-basis coefficients as canonical rational strings.
    pub fn to_canonical_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&CycloNumber> for &CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &CycloNumber) -> CycloNumber {
                if self.order == rhs.order {
                    $body(self, rhs)
                } else {
                    let (a, b) = self.aligned(rhs);
                    $body(&a, &b)
                }
            }
        }
        impl $trait<CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &CycloNumber) -> CycloNumber {
                (&self).$method(rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a: &CycloNumber, b: &CycloNumber| CycloNumber {
    order: a.order,
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
});
impl_binop!(Sub, sub, |a: &CycloNumber, b: &CycloNumber| CycloNumber {
    order: a.order,
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
});
impl_binop!(Mul, mul, |a: &CycloNumber, b: &CycloNumber| a.mul_same(b));

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => format!("ζ{}", self.order),
                (1, false) => format!("{mag}*ζ{}", self.order),
                (_, true) => format!("ζ{}^{i}", self.order),
                (_, false) => format!("{mag}*ζ{}^{i}", self.order),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// JSON form: array of rational strings, one per power-basis coefficient.
/// The order is carried by the enclosing document.
impl Serialize for CycloNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_canonical_strings().serialize(serializer)
    }
}

/// Order-free parsed form of a [`CycloNumber`]; resolved once the field order is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloLiteral(pub Vec<Rational>);

impl CycloLiteral {
    pub fn resolve(&self, order: u32) -> Result<CycloNumber> {
        let phi = euler_phi(order);
        if self.0.len() != 1 && self.0.len() != phi {
            return Err(Error::Parse(format!(
                "expected {phi} coefficients for cyclotomic order {order}, got {}",
                self.0.len()
            )));
        }
        Ok(CycloNumber::new(order, self.0.clone()))
    }

    pub fn parse_str(s: &str) -> Result<Self> {
        Ok(Self(vec![parse_rational(s)?]))
    }
}

impl From<&CycloNumber> for CycloLiteral {
    fn from(value: &CycloNumber) -> Self {
        Self(value.coeffs.clone())
    }
}

impl Serialize for CycloLiteral {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycloLiteral {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        fn scalar<E: de::Error>(v: &serde_json::Value) -> std::result::Result<Rational, E> {
            match v {
                serde_json::Value::String(s) => parse_rational(s).map_err(E::custom),
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(|i| Rational::from_integer(i.into()))
                    .ok_or_else(|| {
                        E::custom(format!("non-integer number {n}; use a \"p/q\" string"))
                    }),
                other => Err(E::custom(format!("expected rational, got {other}"))),
            }
        }
        let value = serde_json::Value::deserialize(deserializer)?;
        match &value {
            serde_json::Value::Array(items) if !items.is_empty() => items
                .iter()
                .map(scalar)
                .collect::<std::result::Result<_, _>>()
                .map(CycloLiteral),
            serde_json::Value::Array(_) => Err(de::Error::custom("empty coefficient array")),
            other => scalar(other).map(|q| CycloLiteral(vec![q])),
        }
    }
}
