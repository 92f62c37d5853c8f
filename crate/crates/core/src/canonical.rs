//! Canonical form on Z(2^∞).
//!
//! Every `y ∈ Z(2^∞)` has a unique representation `y = Σ σ_{2n} e_{2n}`
//! with `σ_{2n} ∈ {-1, 0, 1, 2}`. Supports are keyed by `n`, not by the
//! index `2n`: `Λ(y) = {n : σ_{2n} ≠ 0}`. The JSON form lists the
//! coefficients under their `e`-index `2n` instead (`"index": 4` is `σ_4`),
//! so keep the two keyings apart when reading reports.
//!
//! The certificate functions at the end turn the order lower bounds that
//! follow from uniqueness into checks against the exact order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::element::{Combination, Element, OrderValue, Term};
use crate::error::{Error, Result};

/// `f(x) = max(-2x, x)`.
pub fn f_weight(x: i64) -> u64 {
    let x = x as i128;
    (-2 * x).max(x) as u64
}

fn f_weight_big(x: &BigInt) -> BigInt {
    let minus_two = x * BigInt::from(-2);
    if &minus_two > x {
        minus_two
    } else {
        x.clone()
    }
}

/// Residue of `s` mod 4 chosen from `{-1, 0, 1, 2}`.
fn balanced_residue(s: &BigInt) -> i8 {
    let r = s.mod_floor(&BigInt::from(4)).to_i8().unwrap();
    if r == 3 {
        -1
    } else {
        r
    }
}

/// Rewrites odd indices via `e_{2n-1} = 2 e_{2n}`; output indices are even
/// with `σ'_{2n} = 2σ_{2n-1} + σ_{2n}`.
pub fn to_even_support(c: &Combination) -> Combination {
    Combination::collect(c.terms().iter().map(|t| {
        if t.k % 2 == 1 {
            (t.k + 1, 2 * t.m)
        } else {
            (t.k, t.m)
        }
    }))
    .expect("even-support rewrite keeps indices positive")
}

/// Signed base-4 digits of `m`, least significant first, each in
/// `{-1, 0, 1, 2}`.
pub fn expand_base4(m: &BigInt) -> Result<Vec<i8>> {
    if m.is_zero() {
        return Err(Error::Precondition(
            "base-4 expansion of 0 is empty; handle 0 separately".into(),
        ));
    }
    let four = BigInt::from(4);
    let mut digits = Vec::new();
    let mut rest = m.clone();
    while !rest.is_zero() {
        let r = balanced_residue(&rest);
        digits.push(r);
        rest = (rest - BigInt::from(r)) / &four;
    }
    Ok(digits)
}

/// Smallest `l` with `4^l ≥ |m|`, i.e. `⌈log₄|m|⌉` for `m ≠ 0`.
pub fn ceil_log4(m: &BigInt) -> u32 {
    let target = m.abs();
    let mut l = 0u32;
    let mut power = BigInt::from(1);
    while power < target {
        power <<= 2;
        l += 1;
    }
    l
}

/// The unique canonical representation of an element of Z(2^∞).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    coeffs: BTreeMap<u32, i8>,
    value: Element,
}

impl CanonicalForm {
    /// Nonzero `σ_{2n}` keyed by `n`.
    pub fn coeffs(&self) -> &BTreeMap<u32, i8> {
        &self.coeffs
    }

    pub fn value(&self) -> &Element {
        &self.value
    }

    /// `Σ f(σ_{2n})`.
    pub fn f_total(&self) -> u64 {
        self.coeffs.values().map(|&s| f_weight(s as i64)).sum()
    }

    pub fn support(&self) -> SupportReport {
        SupportReport::new(self.coeffs.keys().copied().collect())
    }

    /// Re-evaluates `Σ σ_{2n} e_{2n}`.
    pub fn evaluate(&self) -> Element {
        self.coeffs
            .iter()
            .fold(Element::zero(2), |acc, (&n, &s)| {
                acc + Element::e2(2 * n).times(s as i64)
            })
    }

    /// As a combination over `e`, indices `2n`.
    pub fn to_combination(&self) -> Combination {
        Combination::new(
            self.coeffs
                .iter()
                .map(|(&n, &s)| Term {
                    k: 2 * n as u64,
                    m: s as i64,
                })
                .collect(),
        )
        .expect("canonical coefficients are nonzero on increasing indices")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&n, &s)) in self.coeffs.iter().rev().enumerate() {
            let sep = match (i, s < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            match s.abs() {
                1 => write!(f, "{sep}e_{}", 2 * n)?,
                a => write!(f, "{sep}{a}e_{}", 2 * n)?,
            }
        }
        Ok(())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Coeff {
            index: u32,
            sigma: i8,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            value: &'a Element,
            coeffs: Vec<Coeff>,
        }
        Repr {
            value: &self.value,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&n, &sigma)| Coeff { index: 2 * n, sigma })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// Working coefficients keyed by `n` (index `2n`), folded from the top
/// index down: `σ_{2N} = r + 4q` with `r ∈ {-1,0,1,2}` and `q` carried into
/// `σ_{2N-2}` via `4 e_{2N} = e_{2N-2}`. The carry out of `n = 1` vanishes
/// because `4 e_2 = 0`.
fn fold_even(mut work: BTreeMap<u32, BigInt>) -> BTreeMap<u32, i8> {
    let mut out = BTreeMap::new();
    let Some(&top) = work.keys().next_back() else {
        return out;
    };
    let mut carry = BigInt::zero();
    for n in (1..=top).rev() {
        let s = work.remove(&n).unwrap_or_default() + &carry;
        let r = balanced_residue(&s);
        carry = (s - BigInt::from(r)) / 4;
        if r != 0 {
            out.insert(n, r);
        }
    }
    out
}

/// Canonical form of an even-support combination over `e`; odd indices are
/// first rewritten with [`to_even_support`].
pub fn canonicalize_combination(c: &Combination) -> CanonicalForm {
    let even = to_even_support(c);
    let mut work = BTreeMap::new();
    for t in even.terms() {
        work.insert((t.k / 2) as u32, BigInt::from(t.m));
    }
    let value = c.terms().iter().fold(Element::zero(2), |acc, t| {
        acc + Element::e2(t.k as u32).times(t.m)
    });
    CanonicalForm {
        coeffs: fold_even(work),
        value,
    }
}

/// Canonical form of an element of Z(2^∞).
pub fn canonicalize(x: &Element) -> Result<CanonicalForm> {
    if x.prime() != 2 {
        return Err(Error::NotDyadic(x.prime()));
    }
    if x.is_zero() {
        return Ok(CanonicalForm {
            coeffs: BTreeMap::new(),
            value: x.clone(),
        });
    }
    // x = a/2^exp = a' e_{2N} with 2N the even exponent at or above exp.
    let top = x.exponent().div_ceil(2);
    let a = BigInt::from(x.numerator().clone()) << (2 * top - x.exponent());
    let mut work = BTreeMap::new();
    work.insert(top, a);
    Ok(CanonicalForm {
        coeffs: fold_even(work),
        value: x.clone(),
    })
}

/// `Λ(y)` (ascending) and `λ(y) = |Λ(y)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub lambda_set: Vec<u32>,
    pub lambda_count: usize,
}

impl SupportReport {
    fn new(lambda_set: Vec<u32>) -> Self {
        SupportReport {
            lambda_count: lambda_set.len(),
            lambda_set,
        }
    }
}

pub fn support(x: &Element) -> Result<SupportReport> {
    Ok(canonicalize(x)?.support())
}

pub fn lambda(x: &Element) -> Result<usize> {
    Ok(canonicalize(x)?.coeffs.len())
}

/// Support of `m e_{2n}`; requires `n > ⌈log₄|m|⌉`.
pub fn support_of_multiple(m: &BigInt, n: u32) -> Result<SupportReport> {
    if m.is_zero() {
        return Err(Error::Precondition("multiplier must be nonzero".into()));
    }
    let l = ceil_log4(m);
    if n <= l {
        return Err(Error::Precondition(format!(
            "n = {n} must exceed ceil(log4 |m|) = {l}"
        )));
    }
    support(&Element::e2(2 * n).scalar_mul(m))
}

/// A lower bound `4^exp` on an order; `exp` may be zero or negative, in
/// which case the bound is the rational `1/4^|exp|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pow4Bound {
    pub exp: i64,
}

impl Pow4Bound {
    pub fn new(exp: i64) -> Self {
        Pow4Bound { exp }
    }

    /// `2^k > 4^exp`, compared exactly on exponents.
    pub fn exceeded_by(&self, order: OrderValue) -> bool {
        assert_eq!(order.p, 2, "4-power bounds compare against 2-power orders");
        (order.k as i64) > 2 * self.exp
    }
}

impl fmt::Display for Pow4Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "4^{}", self.exp)
    }
}

impl Serialize for Pow4Bound {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Outcome of comparing an analytic order bound against the exact order.
/// `holds == false` means a bug, since every bound checked here is a theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderCertificate {
    pub bound: Pow4Bound,
    /// The weaker bound `4^{n_1 - l - 1}`, only for the corollary form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_bound: Option<Pow4Bound>,
    pub actual: OrderValue,
    pub holds: bool,
}

/// `o(y - z) > 4^{k_{g-λ(z)} - 1}` where `Λ(y) = {k_1 < ... < k_g}` and
/// `λ(y) > λ(z)`.
pub fn order_bound_yz(y: &Element, z: &Element) -> Result<OrderCertificate> {
    let sy = support(y)?;
    let lz = lambda(z)?;
    if sy.lambda_count <= lz {
        return Err(Error::Precondition(format!(
            "lambda(y) = {} must exceed lambda(z) = {lz}",
            sy.lambda_count
        )));
    }
    // 1-based k_{g - λ(z)}
    let k = sy.lambda_set[sy.lambda_count - lz - 1];
    let bound = Pow4Bound::new(k as i64 - 1);
    let actual = y.try_sub(z)?.order();
    Ok(OrderCertificate {
        bound,
        weak_bound: None,
        actual,
        holds: bound.exceeded_by(actual),
    })
}

/// One summand `ν e_{2n}` of a structured element `y = Σ ν_i e_{2 n_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpacedTerm {
    pub nu: i64,
    pub n: u32,
}

fn check_spacing(terms: &[SpacedTerm]) -> Result<Vec<u32>> {
    if terms.is_empty() {
        return Err(Error::Precondition("y needs at least one summand".into()));
    }
    let mut ls = Vec::with_capacity(terms.len());
    for t in terms {
        if t.nu == 0 {
            return Err(Error::Precondition("coefficients must be nonzero".into()));
        }
        if t.n == 0 {
            return Err(Error::Precondition("indices must be positive".into()));
        }
        ls.push(ceil_log4(&BigInt::from(t.nu)));
    }
    for i in 1..terms.len() {
        if (terms[i - 1].n as i64) >= terms[i].n as i64 - ls[i] as i64 {
            return Err(Error::Precondition(format!(
                "spacing n_{i} < n_{} - l_{} fails ({} vs {} - {})",
                i + 1,
                i + 1,
                terms[i - 1].n,
                terms[i].n,
                ls[i]
            )));
        }
    }
    Ok(ls)
}

fn spaced_value(terms: &[SpacedTerm]) -> Element {
    terms.iter().fold(Element::zero(2), |acc, t| {
        acc + Element::e2(2 * t.n).times(t.nu)
    })
}

/// For `y = Σ ν_i e_{2n_i}` with `n_i < n_{i+1} - l_{i+1}` and
/// `l_i = ⌈log₄|ν_i|⌉`: checks `t ≤ λ(y)` and
/// `o(y - z) > 4^{n_{t-λ(z)} - l_{t-λ(z)} - 1}` whenever `λ(z) < λ(y)`.
/// Positions `t - λ(z) ≤ 0` fall back to `n_1, l_1`.
pub fn order_bound_struct(y_terms: &[SpacedTerm], z: &Element) -> Result<OrderCertificate> {
    let ls = check_spacing(y_terms)?;
    let y = spaced_value(y_terms);
    let ly = lambda(&y)?;
    let lz = lambda(z)?;
    if lz >= ly {
        return Err(Error::Precondition(format!(
            "lambda(z) = {lz} must be below lambda(y) = {ly}"
        )));
    }
    let t = y_terms.len();
    let pos = if t > lz { t - lz - 1 } else { 0 };
    let bound = Pow4Bound::new(y_terms[pos].n as i64 - ls[pos] as i64 - 1);
    let actual = y.try_sub(z)?.order();
    Ok(OrderCertificate {
        bound,
        weak_bound: None,
        actual,
        holds: t <= ly && bound.exceeded_by(actual),
    })
}

/// For `y = e_{2n_1} + ... + e_{2n_t}` with `t > 4l`, `n_i < n_{i+1} - l`,
/// `0 < |μ| ≤ l` and `z` of weight at most `l` over `e`: checks
/// `o(μy + z) > 4^{n_{t-4l} - l - 1} ≥ 4^{n_1 - l - 1}`.
pub fn order_bound_corollary(
    l: u32,
    mu: i64,
    y_indices: &[u32],
    z: &Combination,
) -> Result<OrderCertificate> {
    if l == 0 {
        return Err(Error::Precondition("l must be positive".into()));
    }
    if mu == 0 || mu.unsigned_abs() > l as u64 {
        return Err(Error::Precondition(format!(
            "mu = {mu} must satisfy 0 < |mu| <= l = {l}"
        )));
    }
    let t = y_indices.len();
    if t <= 4 * l as usize {
        return Err(Error::Precondition(format!(
            "need t = {t} > 4l = {}",
            4 * l
        )));
    }
    if y_indices[0] == 0 {
        return Err(Error::Precondition("indices must be positive".into()));
    }
    if let Some(i) = (1..t).find(|&i| y_indices[i - 1] as i64 >= y_indices[i] as i64 - l as i64) {
        return Err(Error::Precondition(format!(
            "spacing n_{i} < n_{} - l fails",
            i + 1
        )));
    }
    if z.weight() > l as u64 {
        return Err(Error::Precondition(format!(
            "z has weight {} > l = {l}",
            z.weight()
        )));
    }
    let y = y_indices
        .iter()
        .fold(Element::zero(2), |acc, &n| acc + Element::e2(2 * n));
    let z_value = canonicalize_combination(z).value;
    let value = y.times(mu) + z_value;
    let bound = Pow4Bound::new(y_indices[t - 4 * l as usize - 1] as i64 - l as i64 - 1);
    let weak = Pow4Bound::new(y_indices[0] as i64 - l as i64 - 1);
    let actual = value.order();
    Ok(OrderCertificate {
        bound,
        weak_bound: Some(weak),
        actual,
        holds: bound.exceeded_by(actual) && bound >= weak,
    })
}

/// `Σ f(σ)` for the coefficients of a combination.
pub fn f_total(c: &Combination) -> BigInt {
    c.terms()
        .iter()
        .map(|t| f_weight_big(&BigInt::from(t.m)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{eval_combination, torsion_level};
    use crate::construction::SequenceSpec;

    fn lit(s: &str) -> Element {
        s.parse().unwrap()
    }

    fn comb(pairs: &[(u64, i64)]) -> Combination {
        Combination::collect(pairs.iter().copied()).unwrap()
    }

    /// Exhaustive search for a representation with coefficients in
    /// {-1,0,1,2} on at most two even indices up to `2 * max_n`.
    fn brute_canonical(x: &Element, max_n: u32) -> Vec<BTreeMap<u32, i8>> {
        let digits = [-1i8, 1, 2];
        let mut hits = Vec::new();
        if x.is_zero() {
            hits.push(BTreeMap::new());
        }
        for a in 1..=max_n {
            for &da in &digits {
                let va = Element::e2(2 * a).times(da as i64);
                if &va == x {
                    hits.push(BTreeMap::from([(a, da)]));
                }
                for b in a + 1..=max_n {
                    for &db in &digits {
                        if &(&va + &Element::e2(2 * b).times(db as i64)) == x {
                            hits.push(BTreeMap::from([(a, da), (b, db)]));
                        }
                    }
                }
            }
        }
        hits
    }

    #[test]
    fn f_weight_values() {
        assert_eq!(f_weight(0), 0);
        assert_eq!(f_weight(-1), 2);
        assert_eq!(f_weight(1), 1);
        assert_eq!(f_weight(2), 2);
        assert_eq!(f_weight(-3), 6);
    }

    #[test]
    fn even_support() {
        let e = SequenceSpec::e(2);
        assert_eq!(to_even_support(&comb(&[(1, 1)])), comb(&[(2, 2)]));
        assert_eq!(to_even_support(&comb(&[(2, 1)])), comb(&[(2, 1)]));
        let c = comb(&[(1, 1), (2, 1)]);
        let even = to_even_support(&c);
        assert_eq!(even, comb(&[(2, 3)]));
        assert_eq!(
            eval_combination(&c, &e).unwrap(),
            eval_combination(&even, &e).unwrap()
        );
        // Cancellation drops the index entirely.
        assert!(to_even_support(&comb(&[(3, 1), (4, -2)])).is_empty());
    }

    #[test]
    fn canonical_examples_match_exhaustive_search() {
        let cases = [
            (Element::e2(2).times(3), BTreeMap::from([(1, -1)])),
            (Element::e2(4).times(4), BTreeMap::from([(1, 1)])),
            (Element::e2(2), BTreeMap::from([(1, 1)])),
            (Element::e2(4).times(5), BTreeMap::from([(1, 1), (2, 1)])),
        ];
        for (x, expected) in cases {
            let oracle = brute_canonical(&x, 4);
            assert_eq!(oracle, vec![expected.clone()], "oracle for {x}");
            assert_eq!(canonicalize(&x).unwrap().coeffs(), &expected, "{x}");
        }
    }

    #[test]
    fn canonicalize_rejects_odd_primes() {
        assert_eq!(
            canonicalize(&Element::e(3, 1).unwrap()),
            Err(Error::NotDyadic(3))
        );
    }

    #[test]
    fn combination_and_element_routes_agree() {
        let e = SequenceSpec::e(2);
        let c = comb(&[(1, -3), (4, 7), (6, 2), (7, -5)]);
        let from_comb = canonicalize_combination(&c);
        let value = eval_combination(&c, &e).unwrap();
        assert_eq!(from_comb.value(), &value);
        assert_eq!(canonicalize(&value).unwrap(), from_comb);
        assert_eq!(from_comb.evaluate(), value);
    }

    #[test]
    fn supports() {
        assert_eq!(
            support(&Element::zero(2)).unwrap(),
            SupportReport {
                lambda_set: vec![],
                lambda_count: 0
            }
        );
        assert_eq!(support(&Element::e2(6).times(3)).unwrap().lambda_set, vec![2, 3]);
        let s = support(&(Element::e2(2) + Element::e2(4))).unwrap();
        assert_eq!((s.lambda_set, s.lambda_count), (vec![1, 2], 2));
    }

    #[test]
    fn base4_expansions() {
        let eval = |d: &[i8]| d.iter().rev().fold(0i64, |acc, &x| 4 * acc + x as i64);
        assert_eq!(expand_base4(&2.into()).unwrap(), vec![2]);
        assert_eq!(expand_base4(&3.into()).unwrap(), vec![-1, 1]);
        assert_eq!(expand_base4(&6.into()).unwrap(), vec![2, 1]);
        assert!(expand_base4(&0.into()).is_err());
        for m in (-300i64..=300).filter(|&m| m != 0) {
            let d = expand_base4(&m.into()).unwrap();
            assert_eq!(eval(&d), m);
            assert!(d.len() as u32 <= ceil_log4(&m.into()) + 1, "m = {m}: {d:?}");
        }
    }

    #[test]
    fn ceil_log4_values() {
        let got: Vec<u32> = [1, 2, 4, 5, 16, 17, 64, 65]
            .iter()
            .map(|&m: &i64| ceil_log4(&m.into()))
            .collect();
        assert_eq!(got, vec![0, 1, 1, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn support_of_multiples() {
        let s = |m: i64, n| support_of_multiple(&m.into(), n).unwrap();
        assert_eq!(s(3, 3).lambda_set, vec![2, 3]);
        assert_eq!(s(1, 5).lambda_set, vec![5]);
        assert_eq!(s(2, 4).lambda_set, vec![4]);
        assert_eq!(
            canonicalize(&Element::e2(8).times(2)).unwrap().coeffs(),
            &BTreeMap::from([(4, 2)])
        );
        // l = ceil(log4 5) = 2 requires n > 2.
        assert!(support_of_multiple(&5.into(), 2).is_err());
        assert!(support_of_multiple(&0.into(), 4).is_err());
    }

    #[test]
    fn lemma_y_z_examples() {
        let y = Element::e2(2) + Element::e2(4) + Element::e2(6);
        let c = order_bound_yz(&y, &Element::e2(2)).unwrap();
        // Λ(y) = {1,2,3}, λ(z) = 1, k_2 = 2: bound 4^1; y - z = e_4 + e_6.
        assert_eq!(c.bound, Pow4Bound::new(1));
        assert_eq!(c.actual, OrderValue::new(2, 6));
        assert!(c.holds);

        let c = order_bound_yz(&Element::e2(2), &Element::zero(2)).unwrap();
        assert_eq!((c.bound, c.actual.k, c.holds), (Pow4Bound::new(0), 2, true));

        let c = order_bound_yz(&(Element::e2(2) + Element::e2(4)), &Element::e2(6)).unwrap();
        assert_eq!((c.bound, c.actual.k, c.holds), (Pow4Bound::new(0), 6, true));

        assert!(order_bound_yz(&Element::e2(2), &Element::e2(4)).is_err());
    }

    #[test]
    fn structured_bound_examples() {
        let st = |pairs: &[(i64, u32)]| {
            pairs
                .iter()
                .map(|&(nu, n)| SpacedTerm { nu, n })
                .collect::<Vec<_>>()
        };
        // λ(z) = 0 selects n_t - l_t - 1 = 6; o(y) = 2^14 > 4^6.
        let c = order_bound_struct(&st(&[(1, 1), (1, 4), (1, 7)]), &Element::zero(2)).unwrap();
        assert_eq!((c.bound, c.actual.k, c.holds), (Pow4Bound::new(6), 14, true));

        let c = order_bound_struct(&st(&[(3, 3), (1, 7)]), &Element::e2(2)).unwrap();
        assert_eq!(c.bound, Pow4Bound::new(1));
        assert!(c.holds && c.actual.k > 2);

        let c = order_bound_struct(&st(&[(1, 1)]), &Element::zero(2)).unwrap();
        assert_eq!((c.bound, c.actual.k, c.holds), (Pow4Bound::new(0), 2, true));

        // n_1 = 3 is not below n_2 - l_2 = 4 - 1.
        assert!(order_bound_struct(&st(&[(1, 3), (3, 4)]), &Element::zero(2)).is_err());
        assert!(order_bound_struct(&st(&[(0, 3)]), &Element::zero(2)).is_err());
        // λ(z) = 1 = λ(y)
        assert!(order_bound_struct(&st(&[(1, 3)]), &Element::e2(2)).is_err());
    }

    #[test]
    fn corollary_examples() {
        let c = order_bound_corollary(1, 1, &[1, 3, 5, 7, 9], &comb(&[(2, 1)])).unwrap();
        assert_eq!(c.bound, Pow4Bound::new(-1));
        assert!(c.holds);

        let c = order_bound_corollary(1, 1, &[3, 5, 7, 9, 11], &Combination::default()).unwrap();
        assert_eq!(c.bound, Pow4Bound::new(1));
        assert_eq!(c.actual, OrderValue::new(2, 22));
        assert!(c.holds);

        // μ = 0 leaves only z, for which no lower bound is available.
        assert!(order_bound_corollary(1, 0, &[3, 5, 7, 9, 11], &comb(&[(3, 1)])).is_err());
        assert!(order_bound_corollary(1, 1, &[3, 5, 7, 9], &Combination::default()).is_err());
        assert!(order_bound_corollary(1, 1, &[3, 4, 7, 9, 11], &Combination::default()).is_err());
        assert!(order_bound_corollary(1, 2, &[3, 5, 7, 9, 11], &Combination::default()).is_err());
        assert!(order_bound_corollary(1, 1, &[3, 5, 7, 9, 11], &comb(&[(1, 2)])).is_err());
    }

    #[test]
    fn bound_comparison_with_negative_exponents() {
        assert!(Pow4Bound::new(-1).exceeded_by(OrderValue::new(2, 0)));
        assert!(Pow4Bound::new(0).exceeded_by(OrderValue::new(2, 1)));
        assert!(!Pow4Bound::new(0).exceeded_by(OrderValue::new(2, 0)));
        assert!(!Pow4Bound::new(2).exceeded_by(OrderValue::new(2, 4)));
        assert!(Pow4Bound::new(2).exceeded_by(OrderValue::new(2, 5)));
    }

    #[test]
    fn canonical_json() {
        let cf = canonicalize(&lit("5/2^4")).unwrap();
        assert_eq!(
            serde_json::to_string(&cf).unwrap(),
            r#"{"value":"5/2^4","coeffs":[{"index":2,"sigma":1},{"index":4,"sigma":1}]}"#
        );
        assert_eq!(cf.to_string(), "e_4 + e_2");
    }

    #[test]
    fn level_ten_round_trip() {
        for x in torsion_level(2, 10).unwrap() {
            let cf = canonicalize(&x).unwrap();
            assert_eq!(cf.evaluate(), x);
            assert!(cf.coeffs().values().all(|s| (-1..=2).contains(s)));
        }
    }
}
