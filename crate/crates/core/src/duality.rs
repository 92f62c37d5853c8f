//! Characters of Z(2^∞) and the von Neumann radical of the topology
//! generated by `{d_k}`.
//!
//! Continuous characters of the discrete Z(2^∞) are 2-adic integers; those
//! that send `e_k → 0` are exactly the integer multiples `m χ₁` of the
//! natural embedding. The radical computation takes that classification as
//! given and searches only over `m χ₁`. Truncated 2-adics are kept for the
//! non-convergence probe.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::construction::{RadicalTarget, SequenceSpec};
use crate::element::{torsion_level, Element, Sequence};
use crate::error::{Error, Result};

/// A nonnegative dyadic rational `num / 2^exp`, reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigUint>, exp: u32) -> Self {
        let mut num = num.into();
        let mut exp = exp;
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let shift = num.trailing_zeros().unwrap_or(0).min(exp as u64) as u32;
        num >>= shift;
        exp -= shift;
        Dyadic { num, exp }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    /// `1/2^k`
    pub fn pow2_inv(k: u32) -> Self {
        Dyadic::new(BigUint::one(), k)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, factor: u64) -> Dyadic {
        Dyadic::new(&self.num * factor, self.exp)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A point of `T = R/Z` with dyadic representative in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CircleValue(Element);

impl CircleValue {
    pub fn from_element(x: Element) -> Result<Self> {
        if x.prime() != 2 {
            return Err(Error::NotDyadic(x.prime()));
        }
        Ok(CircleValue(x))
    }

    pub fn as_element(&self) -> &Element {
        &self.0
    }

    pub fn representative(&self) -> Dyadic {
        Dyadic::new(self.0.numerator().clone(), self.0.exponent())
    }

    /// `min(q, 1 - q)`.
    pub fn norm(&self) -> Dyadic {
        if self.0.is_zero() {
            return Dyadic::zero();
        }
        let exp = self.0.exponent();
        let q = self.0.numerator();
        let complement = (BigUint::one() << exp) - q;
        Dyadic::new(q.min(&complement).clone(), exp)
    }

    /// Circle distance between two points.
    pub fn distance(&self, other: &CircleValue) -> Dyadic {
        CircleValue(&self.0 - &other.0).norm()
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Character {
    /// `m χ₁`
    IntegerMultiple(BigInt),
    /// A 2-adic integer known modulo `2^precision`.
    TruncatedPadic { precision: u32, residue: BigUint },
}

impl Character {
    pub fn multiple(m: i64) -> Self {
        Character::IntegerMultiple(BigInt::from(m))
    }

    pub fn truncated(precision: u32, residue: impl Into<BigUint>) -> Self {
        let modulus = BigUint::one() << precision;
        Character::TruncatedPadic {
            precision,
            residue: residue.into() % modulus,
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Character::IntegerMultiple(m) => write!(f, "m:{m}"),
            Character::TruncatedPadic { precision, residue } => {
                write!(f, "padic:{residue}@{precision}")
            }
        }
    }
}

impl std::str::FromStr for Character {
    type Err = Error;

    /// `m:<int>` or `padic:<residue>@<precision>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCharacter(s.to_string());
        if let Some(m) = s.strip_prefix("m:") {
            return m.trim().parse::<BigInt>().map(Character::IntegerMultiple).map_err(|_| bad());
        }
        let rest = s.strip_prefix("padic:").ok_or_else(bad)?;
        let (r, n) = rest.split_once('@').ok_or_else(bad)?;
        let residue: BigUint = r.trim().parse().map_err(|_| bad())?;
        let precision: u32 = n.trim().parse().map_err(|_| bad())?;
        Ok(Character::truncated(precision, residue))
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn evaluate(chi: &Character, a: &Element) -> Result<CircleValue> {
    if a.prime() != 2 {
        return Err(Error::NotDyadic(a.prime()));
    }
    let value = match chi {
        Character::IntegerMultiple(m) => a.scalar_mul(m),
        Character::TruncatedPadic { precision, residue } => {
            if *precision < a.exponent() {
                return Err(Error::Precision {
                    needed: a.exponent(),
                    available: *precision,
                });
            }
            a.scalar_mul(&BigInt::from(residue.clone()))
        }
    };
    Ok(CircleValue(value))
}

/// `m χ₁` is continuous on Z(2^∞){d_k} iff `m x = 0`, i.e. `2^{k0} | m`.
pub fn converges_exact(m: &BigInt, target: &RadicalTarget) -> bool {
    target.x().scalar_mul(m).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub k: u64,
    pub value: CircleValue,
    pub norm: Dyadic,
}

/// `‖χ(a_k)‖` for `k = 1..=K`.
pub fn tail_profile(chi: &Character, seq: &SequenceSpec, max_k: u64) -> Result<Vec<ProfileEntry>> {
    (1..=max_k)
        .map(|k| {
            let value = evaluate(chi, &seq.term(k)?)?;
            Ok(ProfileEntry {
                k,
                norm: value.norm(),
                value,
            })
        })
        .collect()
}

/// `(k + 1)/2^{2(k³ - k²)}`, the bound on `‖χ₁(b_k) + x‖`.
pub fn b_limit_bound(k: u64) -> Dyadic {
    Dyadic::new(BigUint::from(k + 1), (2 * (k * k * k - k * k)) as u32)
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub accepted: Vec<i64>,
    pub rejected: Vec<i64>,
    /// `m` where the prefix test and [`converges_exact`] disagree.
    pub disagreements: Vec<i64>,
    /// The `d`-positions that were inspected.
    pub positions: Vec<u64>,
}

/// Numeric classification of `m χ₁` on a prefix `d_1..d_K`: `m` is accepted
/// iff `‖m χ₁(d_k)‖ ≤ ε` on every `b`-position `k` (odd `k`) in the second
/// half of the prefix. The `e`-positions are skipped: `m χ₁(e_k) → 0` for
/// every integer `m`, but a finite prefix cannot show it below a fixed `ε`.
pub fn classify_prefix(
    m_range: RangeInclusive<i64>,
    target: &RadicalTarget,
    max_k: u64,
    epsilon: &Dyadic,
) -> Result<Classification> {
    let d = SequenceSpec::d(target.clone());
    let positions: Vec<u64> = (max_k / 2 + 1..=max_k).filter(|k| k % 2 == 1).collect();
    let terms = positions
        .iter()
        .map(|&k| d.term(k))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Classification {
        accepted: Vec::new(),
        rejected: Vec::new(),
        disagreements: Vec::new(),
        positions,
    };
    for m in m_range {
        let chi = Character::multiple(m);
        let mut accept = true;
        for t in &terms {
            if evaluate(&chi, t)?.norm() > *epsilon {
                accept = false;
                break;
            }
        }
        if accept {
            out.accepted.push(m);
        } else {
            out.rejected.push(m);
        }
        if accept != converges_exact(&BigInt::from(m), target) {
            out.disagreements.push(m);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct RadicalReport {
    pub level: u32,
    pub generator: Element,
    #[serde(serialize_with = "serialize_display")]
    pub subgroup_size: BigUint,
    pub members: Vec<Element>,
    /// Nonzero `m` whose characters were intersected.
    pub characters_used: Vec<i64>,
    /// No nonzero continuous character in range, so nothing was cut out.
    pub degenerate: bool,
    /// `⟨generator⟩ = ⟨x⟩` as subgroups.
    pub equals_target_subgroup: bool,
}

fn serialize_display<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `⋂ ker(m χ₁) ∩ ⟨e_N⟩` over the continuous characters `m χ₁` with
/// `m ∈ m_range`, computed element by element.
pub fn radical_at_level(
    target: &RadicalTarget,
    m_range: RangeInclusive<i64>,
    level: u32,
) -> Result<RadicalReport> {
    if level < target.k0() {
        return Err(Error::Precondition(format!(
            "level N = {level} is below k0 = {}",
            target.k0()
        )));
    }
    let characters_used: Vec<i64> = m_range
        .filter(|&m| m != 0 && converges_exact(&BigInt::from(m), target))
        .collect();
    let members: Vec<Element> = torsion_level(2, level)?
        .into_iter()
        .filter(|a| characters_used.iter().all(|&m| a.times(m).is_zero()))
        .collect();
    // Members are sorted by (exp, num): the last exponent is the largest
    // order, and its first element is e_k.
    let top = members.last().map(|a| a.exponent()).unwrap_or(0);
    let generator = Element::e2(top);
    let subgroup_size = BigUint::from(members.len());
    let generated = BigUint::one() << top;
    let x = target.x();
    let equals_target_subgroup = generated == subgroup_size
        && x.exponent() == top
        && members.contains(x);
    Ok(RadicalReport {
        level,
        generator,
        subgroup_size,
        members,
        degenerate: characters_used.is_empty(),
        characters_used,
        equals_target_subgroup,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub character: Character,
    pub profile: Vec<ProfileEntry>,
    /// Largest norm over the second half of the prefix.
    pub max_tail_norm: Dyadic,
    /// `max_tail_norm ≥ 1/4`.
    pub persistent: bool,
    pub conclusive: bool,
    pub note: &'static str,
}

/// `‖χ(e_k)‖` for a truncated 2-adic over `k ≤ K`. A tail that stays at or
/// above `1/4` is a hint, never a proof, that `χ` is not an integer multiple.
pub fn nonconvergent_padic_probe(precision: u32, residue: impl Into<BigUint>, max_k: u64) -> Result<ProbeReport> {
    let character = Character::truncated(precision, residue);
    let profile = tail_profile(&character, &SequenceSpec::e(2), max_k)?;
    let max_tail_norm = profile
        .iter()
        .filter(|p| p.k > max_k / 2)
        .map(|p| p.norm.clone())
        .max()
        .unwrap_or_else(Dyadic::zero);
    Ok(ProbeReport {
        persistent: max_tail_norm >= Dyadic::pow2_inv(2),
        character,
        profile,
        max_tail_norm,
        conclusive: false,
        note: "finite prefix only; continuity depends on the whole 2-adic digit expansion",
    })
}
