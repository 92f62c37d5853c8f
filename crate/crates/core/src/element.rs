//! Exact arithmetic in the Prüfer group Z(p^∞), realized as fractions
//! `a/p^n` taken modulo 1.
//!
//! Every [`Element`] is stored fully reduced (`p ∤ num` whenever `exp > 0`,
//! and zero is `0/p^0`), so structural equality is group equality and the
//! order of an element is read directly off its exponent.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element `num/p^exp mod 1` of Z(p^∞).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    // Field order fixes the derived ordering: by prime, then (exp, num).
    p: u32,
    exp: u32,
    num: BigUint,
}

impl Element {
    /// Reduced representative of `a/p^n mod 1`.
    pub fn new(p: u32, a: impl Into<BigInt>, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::from_parts_unchecked(p, &a.into(), n))
    }

    pub(crate) fn from_parts_unchecked(p: u32, a: &BigInt, n: u32) -> Self {
        let modulus = BigInt::from(p).pow(n);
        let residue = a.mod_floor(&modulus);
        let num = residue.to_biguint().expect("mod_floor is nonnegative");
        Self::reduce(p, num, n)
    }

    fn reduce(p: u32, mut num: BigUint, mut exp: u32) -> Self {
        if num.is_zero() {
            return Self::zero(p);
        }
        if p == 2 {
            let tz = num.trailing_zeros().unwrap_or(0);
            let shift = tz.min(exp as u64) as u32;
            num >>= shift;
            exp -= shift;
        } else {
            let bp = BigUint::from(p);
            while exp > 0 {
                let (q, r) = num.div_rem(&bp);
                if !r.is_zero() {
                    break;
                }
                num = q;
                exp -= 1;
            }
        }
        if exp == 0 {
            return Self::zero(p);
        }
        Element { p, exp, num }
    }

    pub fn zero(p: u32) -> Self {
        Element {
            p,
            exp: 0,
            num: BigUint::zero(),
        }
    }

    /// `e_n = 1/p^n`; `e_0` is zero.
    pub fn e(p: u32, n: u32) -> Result<Self> {
        Self::new(p, 1, n)
    }

    /// `e_n` in Z(2^∞).
    pub fn e2(n: u32) -> Self {
        Self::from_parts_unchecked(2, &BigInt::one(), n)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.exp == 0
    }

    pub fn order(&self) -> OrderValue {
        OrderValue {
            p: self.p,
            k: self.exp,
        }
    }

    fn lift(&self, exp: u32) -> BigUint {
        debug_assert!(exp >= self.exp);
        if self.p == 2 {
            &self.num << (exp - self.exp)
        } else {
            &self.num * BigUint::from(self.p).pow(exp - self.exp)
        }
    }

    fn modulus(&self, exp: u32) -> BigUint {
        if self.p == 2 {
            BigUint::one() << exp
        } else {
            BigUint::from(self.p).pow(exp)
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        let exp = self.exp.max(other.exp);
        let mut sum = self.lift(exp) + other.lift(exp);
        let modulus = self.modulus(exp);
        if sum >= modulus {
            sum -= modulus;
        }
        Ok(Self::reduce(self.p, sum, exp))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Element {
        if self.is_zero() {
            return self.clone();
        }
        Element {
            p: self.p,
            exp: self.exp,
            num: self.modulus(self.exp) - &self.num,
        }
    }

    /// `m · self`; any integer `m`, including zero and negatives.
    pub fn scalar_mul(&self, m: &BigInt) -> Element {
        if self.is_zero() || m.is_zero() {
            return Self::zero(self.p);
        }
        let a = BigInt::from_biguint(Sign::Plus, self.num.clone()) * m;
        Self::from_parts_unchecked(self.p, &a, self.exp)
    }

    pub fn times(&self, m: i64) -> Element {
        self.scalar_mul(&BigInt::from(m))
    }

    /// Parse a literal, using `p` for the bare `0`.
    pub fn parse_with_prime(s: &str, p: u32) -> Result<Element> {
        let s = s.trim();
        if s == "0" {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            return Ok(Self::zero(p));
        }
        let bad = || Error::InvalidLiteral(s.to_string());
        let (a, rest) = s.split_once('/').ok_or_else(bad)?;
        let (base, n) = rest.split_once('^').ok_or_else(bad)?;
        let a: BigInt = a.parse().map_err(|_| bad())?;
        let base: u32 = base.parse().map_err(|_| bad())?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        Self::new(base, a, n)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}^{}", self.num, self.p, self.exp)
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `0` parses as the zero of Z(2^∞).
impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_prime(s, 2)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// Operator forms panic on mismatched primes; use `try_add`/`try_sub` when
// the primes are not known to agree.
impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("adding elements of different Prüfer groups")
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs)
            .expect("subtracting elements of different Prüfer groups")
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.neg_ref()
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.neg_ref()
    }
}

/// The order `p^k` of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderValue {
    pub p: u32,
    pub k: u32,
}

impl OrderValue {
    pub fn new(p: u32, k: u32) -> Self {
        OrderValue { p, k }
    }

    pub fn value(&self) -> BigUint {
        BigUint::from(self.p).pow(self.k)
    }
}

impl PartialOrd for OrderValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.p == other.p).then(|| self.k.cmp(&other.k))
    }
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.k)
    }
}

impl Serialize for OrderValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All `p^n` elements of `A[p^n] = ⟨e_n⟩`, sorted by `(exp, num)`.
///
/// Inside Z(p^∞) the torsion subgroup `A[n]` for an arbitrary integer `n`
/// equals `A[p^v]` with `v` the `p`-adic valuation of `n`, so only
/// `p`-power levels are exposed here.
pub fn torsion_level(p: u32, n: u32) -> Result<Vec<Element>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let size = BigUint::from(p).pow(n);
    let mut out = Vec::new();
    let mut a = BigUint::zero();
    while a < size {
        out.push(Element::reduce(p, a.clone(), n));
        a += 1u32;
    }
    out.sort();
    Ok(out)
}

/// One summand `m · a_k` of a [`Combination`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub k: u64,
    pub m: i64,
}

/// A finite formal sum `m_1 a_{k_1} + ... + m_h a_{k_h}` with strictly
/// increasing indices and nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Combination {
    terms: Vec<Term>,
}

impl Combination {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.m == 0 {
                return Err(Error::InvalidCombination(format!(
                    "zero coefficient at index {}",
                    t.k
                )));
            }
            if t.k == 0 {
                return Err(Error::InvalidCombination("index 0".into()));
            }
        }
        if terms.windows(2).any(|w| w[0].k >= w[1].k) {
            return Err(Error::InvalidCombination(
                "indices must be strictly increasing".into(),
            ));
        }
        Ok(Combination { terms })
    }

    /// Builds from `(k, m)` pairs in any order, merging repeated indices and
    /// dropping zero coefficients.
    pub fn collect(pairs: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for (k, m) in pairs {
            *map.entry(k).or_insert(0i64) += m;
        }
        Self::new(
            map.into_iter()
                .filter(|&(_, m)| m != 0)
                .map(|(k, m)| Term { k, m })
                .collect(),
        )
    }

    pub fn single(k: u64, m: i64) -> Result<Self> {
        Self::new(vec![Term { k, m }])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |m_i|`.
    pub fn weight(&self) -> u64 {
        self.terms.iter().map(|t| t.m.unsigned_abs()).sum()
    }

    pub fn negated(&self) -> Combination {
        Combination {
            terms: self.terms.iter().map(|t| Term { k: t.k, m: -t.m }).collect(),
        }
    }

    pub fn last(&self) -> Option<&Term> {
        self.terms.last()
    }
}

impl<'de> Deserialize<'de> for Combination {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<Term>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Combination::new(raw.terms).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.m < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            match t.m.unsigned_abs() {
                1 => write!(f, "a_{}", t.k)?,
                a => write!(f, "{a}·a_{}", t.k)?,
            }
        }
        Ok(())
    }
}

/// An indexed family of elements (indices start at 1).
pub trait Sequence {
    fn prime(&self) -> u32;
    fn term(&self, k: u64) -> Result<Element>;
}

pub fn eval_combination<S: Sequence + ?Sized>(c: &Combination, seq: &S) -> Result<Element> {
    let mut acc = Element::zero(seq.prime());
    for t in c.terms() {
        let a = seq.term(t.k)?;
        acc = acc.try_add(&a.times(t.m))?;
    }
    Ok(acc)
}

/// 2-adic valuation of a nonzero integer.
pub fn two_adic_valuation(m: &BigInt) -> Option<u64> {
    if m.is_zero() {
        None
    } else {
        m.abs().trailing_zeros()
    }
}
