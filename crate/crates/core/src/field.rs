//! Exact scalar fields: the rationals and prime fields `F_p` with `p < 2^31`.
//!
//! Every algorithm in the crate is generic over [`Field`]. A field value is a
//! small context object (for `F_p` it carries the modulus) and elements are
//! manipulated through it, so the same elimination code runs over `Q` and
//! `F_p` without dynamic dispatch in the inner loops.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which ground field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    /// Validates a prime modulus. Moduli must fit a machine-word fast path.
    pub fn prime(p: u64) -> Result<Self> {
        if !(2..(1u64 << 31)).contains(&p) {
            return Err(Error::InvalidField(format!(
                "modulus {p} outside the supported range 2 <= p < 2^31"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => u64::from(*p),
        }
    }

    /// Short token used in cache keys and reports: `Q` or `F<p>`.
    pub fn token(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("Fp")
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix("GF"))
            .map(str::trim)
            .ok_or_else(|| Error::InvalidField(format!("unknown field `{s}`")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("bad modulus in `{s}`")))?;
        FieldSpec::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact field arithmetic.
pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero; callers only invert pivots.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Exact rendering, `a/b` for rationals and the residue for `F_p`.
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }

    /// Cost used to choose among candidate pivots; smaller is preferred.
    fn pivot_weight(&self, _a: &Self::Elem) -> u64 {
        0
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `y += a * x`
    fn axpy(&self, y: &mut [Self::Elem], a: &Self::Elem, x: &[Self::Elem]) {
        debug_assert_eq!(y.len(), x.len());
        for (yi, xi) in y.iter_mut().zip(x) {
            if !self.is_zero(xi) {
                *yi = self.add(yi, &self.mul(a, xi));
            }
        }
    }

    fn scale(&self, y: &mut [Self::Elem], a: &Self::Elem) {
        for yi in y.iter_mut() {
            if !self.is_zero(yi) {
                *yi = self.mul(a, yi);
            }
        }
    }

    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem> {
        let d = self.from_i64(den);
        if self.is_zero(&d) {
            return Err(Error::InvalidField(format!(
                "denominator {den} is not invertible in {}",
                self.spec()
            )));
        }
        Ok(self.mul(&self.from_i64(num), &self.inv(&d)))
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// `F_p` with residues stored in a `u32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        match FieldSpec::prime(p)? {
            FieldSpec::Prime(p) => Ok(PrimeField { p }),
            FieldSpec::Rationals => unreachable!(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let p = u64::from(self.p);
        let mut acc = 1u64;
        base %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(i64::from(self.p)) as u32
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = u64::from(*a) + u64::from(*b);
        let p = u64::from(self.p);
        (if s >= p { s - p } else { s }) as u32
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (u64::from(*a) + u64::from(self.p) - u64::from(*b)) as u32
        }
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (u64::from(*a) * u64::from(*b) % u64::from(self.p)) as u32
    }

    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        self.pow(u64::from(*a), u64::from(self.p) - 2) as u32
    }

    fn format(&self, a: &u32) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u32> {
        let q = parse_rational(s)?;
        let p = BigInt::from(self.p);
        let num = q.numer().mod_floor(&p).to_u64().unwrap_or(0);
        let den = q.denom().mod_floor(&p).to_u64().unwrap_or(0);
        if den == 0 {
            return Err(Error::InvalidField(format!(
                "`{s}` has a denominator divisible by {}",
                self.p
            )));
        }
        Ok(self.mul(&(num as u32), &self.inv(&(den as u32))))
    }

    fn axpy(&self, y: &mut [u32], a: &u32, x: &[u32]) {
        if *a == 0 {
            return;
        }
        let p = u64::from(self.p);
        let a = u64::from(*a);
        for (yi, xi) in y.iter_mut().zip(x) {
            if *xi != 0 {
                *yi = ((u64::from(*yi) + a * u64::from(*xi)) % p) as u32;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// An exact rational in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit an `i64` are kept inline; all
/// others spill to a [`BigRational`]. The representation is canonical, so the
/// derived equality and hashing are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn from_integer(v: i64) -> Self {
        Rational::Small(v, 1)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::from_big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(q),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(q) => q.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    fn bits(&self) -> u64 {
        match self {
            Rational::Small(n, d) => {
                u64::from(64 - n.unsigned_abs().leading_zeros())
                    + u64::from(64 - d.unsigned_abs().leading_zeros())
            }
            Rational::Big(q) => q.numer().bits() + q.denom().bits(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Rational::Small(s, 1);
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(n) => Rational::from_i128(n, z),
                        None => Rational::from_big(self.to_big() + other.to_big()),
                    },
                    _ => Rational::from_big(self.to_big() + other.to_big()),
                }
            }
            _ => Rational::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_mul(*c) {
                        return Rational::Small(s, 1);
                    }
                }
                let n = (*a as i128) * (*c as i128);
                let z = (*b as i128) * (*d as i128);
                Rational::from_i128(n, z)
            }
            _ => Rational::from_big(self.to_big() * other.to_big()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, *d),
                None => Rational::from_big(-self.to_big()),
            },
            Rational::Big(q) => Rational::from_big(-q.clone()),
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational");
        match self {
            Rational::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Rational::Big(q) => Rational::from_big(q.recip()),
        }
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_big().cmp(&other.to_big())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::InvalidField(format!("cannot parse scalar `{s}`"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    let mut q = BigRational::new(n, d);
    if q.denom().is_negative() {
        q = BigRational::new(-q.numer().clone(), -q.denom().clone());
    }
    Ok(q)
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn one(&self) -> Rational {
        Rational::Small(1, 1)
    }

    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.add(b)
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a.add(&b.neg())
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a.mul(b)
    }

    fn neg(&self, a: &Rational) -> Rational {
        a.neg()
    }

    fn inv(&self, a: &Rational) -> Rational {
        a.inv()
    }

    fn format(&self, a: &Rational) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<Rational> {
        Ok(Rational::from_big(parse_rational(s)?))
    }

    fn pivot_weight(&self, a: &Rational) -> u64 {
        a.bits()
    }
}

/// Runs `$body` with `$f` bound to the concrete field named by a [`FieldSpec`].
#[macro_export]
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            $crate::field::FieldSpec::Rationals => {
                let $f = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldSpec::Prime(p) => {
                let $f = $crate::field::PrimeField::new(u64::from(p))
                    .expect("FieldSpec::Prime holds a validated modulus");
                $body
            }
        }
    };
}
