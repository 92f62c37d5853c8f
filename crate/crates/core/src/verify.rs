//! The acceptance criteria as runnable checks.
//!
//! Each criterion compares the library against an exhaustive or exact
//! oracle and counts violations. Oracles here work on plain machine
//! integers where the scale allows it, so they do not share code paths with
//! the implementation they check.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canonical::{
    canonicalize, f_weight, lambda, order_bound_corollary,
    order_bound_struct, order_bound_yz, SpacedTerm,
};
use crate::construction::{certify, order_law_b, RadicalTarget, SequenceSpec};
use crate::duality::{b_limit_bound, classify_prefix, evaluate, radical_at_level, CircleValue, Character, Dyadic};
use crate::element::{torsion_level, Combination, Element, Sequence};
use crate::tsequence::{enumerate_window, WindowParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Profile::Quick => quick,
            Profile::Full => full,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub violations: u64,
    pub detail: String,
    pub elapsed_ms: u128,
}

#[derive(Default)]
struct Tally {
    checked: u64,
    violations: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn finish(self, id: u8, name: &'static str, summary: String, start: Instant) -> CriterionResult {
        let detail = match self.first_failure {
            Some(f) => format!("{summary}; first violation: {f}"),
            None => summary,
        };
        CriterionResult {
            id,
            name,
            passed: self.violations == 0 && self.checked > 0,
            checked: self.checked,
            violations: self.violations,
            detail,
            elapsed_ms: start.elapsed().as_millis(),
        }
    }
}

fn targets(list: &[&str]) -> Vec<RadicalTarget> {
    list.iter()
        .map(|s| RadicalTarget::new(s.parse().unwrap()).unwrap())
        .collect()
}

/// Numerator of `x` over `2^level`.
fn as_level_integer(x: &Element, level: u32) -> u64 {
    let num: u64 = x.numerator().try_into().unwrap_or(0);
    num << (level - x.exponent())
}

pub fn canonical_soundness(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    const LEVEL: u32 = 16;
    let slots = LEVEL / 2;
    let modulus = 1u64 << LEVEL;
    let mut t = Tally::default();

    // Injectivity: every vector over {-1,0,1,2}^8 on indices 2..16.
    let digits = [-1i64, 0, 1, 2];
    let mut table: HashMap<u64, Vec<i64>> = HashMap::with_capacity(1 << LEVEL);
    let mut collisions = 0u64;
    for code in 0..(1u64 << (2 * slots)) {
        let vector: Vec<i64> = (0..slots)
            .map(|i| digits[((code >> (2 * i)) & 3) as usize])
            .collect();
        let value = vector.iter().enumerate().fold(0i64, |acc, (i, &s)| {
            let n = i as u32 + 1;
            acc + s * (1i64 << (LEVEL - 2 * n))
        });
        let value = value.rem_euclid(modulus as i64) as u64;
        if table.insert(value, vector).is_some() {
            collisions += 1;
        }
    }
    t.check(collisions == 0, || format!("{collisions} colliding coefficient vectors"));

    // Soundness on every element, cross-checked against the table.
    let level = profile.pick(LEVEL, 18);
    let big_modulus = 1i64 << level;
    for x in torsion_level(2, level).expect("p = 2 is prime") {
        let cf = canonicalize(&x).expect("p = 2");
        let in_range = cf.coeffs().values().all(|s| (-1..=2).contains(s));
        let sum = cf.coeffs().iter().fold(0i64, |acc, (&n, &s)| {
            acc + s as i64 * (1i64 << (level - 2 * n))
        });
        let target = as_level_integer(&x, level) as i64;
        let preserved = sum.rem_euclid(big_modulus) == target && cf.evaluate() == x;
        let matches_table = level != LEVEL || {
            let v = &table[&(target as u64)];
            (1..=slots).all(|n| cf.coeffs().get(&n).copied().unwrap_or(0) as i64 == v[n as usize - 1])
        };
        t.check(in_range && preserved && matches_table, || {
            format!("{x} -> {cf}")
        });
    }
    t.finish(
        1,
        "canonical form soundness and uniqueness",
        format!("4^{slots} vectors injective, all of <e_{level}> canonicalized"),
        start,
    )
}

pub fn lambda_bound(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    let max_index = profile.pick(20, 24);
    let e = SequenceSpec::e(2);
    let mut t = Tally::default();
    for l in 1..=3u32 {
        let w = WindowParams::new(l, 1, max_index, 0).expect("valid window");
        match enumerate_window(&e, &w, u128::MAX) {
            Ok(window) => {
                for z in window.values() {
                    let lz = lambda(z).expect("p = 2");
                    t.check(lz <= 4 * l as usize, || format!("lambda({z}) = {lz} > 4*{l}"));
                }
            }
            Err(err) => t.check(false, || err.to_string()),
        }
    }
    t.finish(
        2,
        "lambda(z) <= 4l on A(l,1)",
        format!("l in 1..=3, indices 1..={max_index}"),
        start,
    )
}

pub fn f_laws(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    let r = profile.pick(8i64, 16);
    let f = |x: i64| f_weight(x) as i64;
    let mut t = Tally::default();
    for a in -r..=r {
        t.check(f(a) <= 2 * a.abs(), || format!("(a) a={a}"));
        for b in -r..=r {
            let ab = b.abs();
            let lower = 2 * a >= -ab && a <= ab;
            t.check((f(a) <= ab) == lower, || format!("(b) a={a} b={b}"));
            let upper = 2 * a <= -ab || a >= ab;
            t.check((f(a) >= ab) == upper, || format!("(c) a={a} b={b}"));
            t.check(f(a + b) <= f(a) + f(b), || format!("(d) a={a} b={b}"));
            if (-1..=2).contains(&a) && (ab >= 1 || b == 0) {
                t.check(f(a) + f(b) <= f(a + 4 * b), || format!("(e) a={a} b={b}"));
            }
        }
    }
    t.finish(3, "f-weight laws (a)-(e)", format!("a, b in [-{r}, {r}]"), start)
}

fn random_element(rng: &mut ChaCha8Rng, max_level: u32) -> Element {
    let level = rng.gen_range(0..=max_level);
    let words = (level / 32 + 1) as usize;
    let digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
    let a = BigInt::from(num_bigint::BigUint::new(digits));
    Element::new(2, a, level).expect("p = 2 is prime")
}

/// `s` distinct indices in `1..=max_n` with coefficients from `{-1, 1, 2}`,
/// already canonical.
fn random_canonical(rng: &mut ChaCha8Rng, s: usize, max_n: u32) -> Element {
    let mut indices: Vec<u32> = Vec::new();
    while indices.len() < s {
        let n = rng.gen_range(1..=max_n);
        if !indices.contains(&n) {
            indices.push(n);
        }
    }
    indices.iter().fold(Element::zero(2), |acc, &n| {
        let c = [-1i64, 1, 2][rng.gen_range(0..3)];
        acc + Element::e2(2 * n).times(c)
    })
}

fn random_combination(rng: &mut ChaCha8Rng, weight: u32, max_k: u64) -> Combination {
    let pairs: Vec<(u64, i64)> = (0..weight)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            (rng.gen_range(1..=max_k), sign)
        })
        .collect();
    Combination::collect(pairs).expect("positive indices")
}

pub fn order_bounds(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    let per_lemma = profile.pick(10_000u64, 20_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut t = Tally::default();

    // y, z arbitrary with λ(y) > λ(z)
    let mut done = 0;
    while done < per_lemma {
        let y = random_element(&mut rng, 48);
        let z = random_element(&mut rng, 48);
        let (ly, lz) = (lambda(&y).unwrap(), lambda(&z).unwrap());
        let (y, z) = match ly.cmp(&lz) {
            std::cmp::Ordering::Greater => (y, z),
            std::cmp::Ordering::Less => (z, y),
            std::cmp::Ordering::Equal => continue,
        };
        done += 1;
        let cert = order_bound_yz(&y, &z).expect("lambda(y) > lambda(z)");
        t.check(cert.holds, || format!("y={y} z={z}: {:?}", cert));
    }

    // structured y = Σ ν_i e_{2n_i} with spacing, random z below λ(y)
    for _ in 0..per_lemma {
        let count = rng.gen_range(1..=6);
        let mut terms = Vec::with_capacity(count);
        let mut n = rng.gen_range(1..=4u32);
        for i in 0..count {
            let mut nu = rng.gen_range(-64i64..=64);
            if nu == 0 {
                nu = 1;
            }
            let l = crate::canonical::ceil_log4(&BigInt::from(nu));
            if i > 0 {
                n += l + 1 + rng.gen_range(0..=3);
            } else {
                n += l;
            }
            terms.push(SpacedTerm { nu, n });
        }
        let y = terms.iter().fold(Element::zero(2), |acc, s| {
            acc + Element::e2(2 * s.n).times(s.nu)
        });
        let ly = lambda(&y).unwrap();
        let lz = rng.gen_range(0..ly);
        let z = random_canonical(&mut rng, lz, terms.last().unwrap().n + 3);
        match order_bound_struct(&terms, &z) {
            Ok(cert) => t.check(cert.holds, || format!("{terms:?} z={z}: {cert:?}")),
            Err(err) => t.check(false, || format!("{terms:?} z={z}: {err}")),
        }
    }

    // μy + z with y a spaced sum of t > 4l unit terms
    for _ in 0..per_lemma {
        let l = rng.gen_range(1..=3u32);
        let count = 4 * l as usize + 1 + rng.gen_range(0..=3);
        let mut indices = Vec::with_capacity(count);
        let mut n = rng.gen_range(1..=6u32);
        for _ in 0..count {
            indices.push(n);
            n += l + 1 + rng.gen_range(0..=2);
        }
        let mut mu = rng.gen_range(-(l as i64)..=l as i64);
        if mu == 0 {
            mu = 1;
        }
        let zw = rng.gen_range(0..=l);
        let z = random_combination(&mut rng, zw, 2 * *indices.last().unwrap() as u64 + 2);
        match order_bound_corollary(l, mu, &indices, &z) {
            Ok(cert) => t.check(cert.holds, || format!("l={l} mu={mu} {indices:?} z={z}: {cert:?}")),
            Err(err) => t.check(false, || format!("l={l} mu={mu} {indices:?} z={z}: {err}")),
        }
    }
    t.finish(
        4,
        "order-bound lemmas on random structured instances",
        format!("{per_lemma} instances per lemma, seeded"),
        start,
    )
}

pub fn b_order_law(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    let max_k = profile.pick(6u64, 8);
    let mut t = Tally::default();
    for target in targets(&["1/2^1", "1/2^2", "3/2^2"]) {
        for k in target.k0() as u64..=max_k {
            let cert = order_law_b(&target, k).expect("k >= k0");
            // independent: the tail's top index 2k³ dominates -x
            let claimed = 2 * (k * k * k) as u32;
            t.check(cert.holds && cert.actual.k == claimed, || {
                format!("x={} k={k}: {} vs {}", target.x(), cert.actual, cert.claimed)
            });
        }
    }
    t.finish(5, "order law o(b_k) = 2^{2k^3}", format!("k0 <= k <= {max_k}"), start)
}

pub fn window_certificates(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    let max_index = profile.pick(8u64, 16);
    let target = &targets(&["1/2^1"])[0];
    let mut t = Tally::default();
    let mut pairs = 0usize;
    let mut windows = 0usize;
    for l in 1..=2u32 {
        for n in 0..=3u32 {
            match certify(target, l, n, max_index, u128::MAX) {
                Ok(bundle) => {
                    pairs += bundle.cross_terms.as_ref().map_or(0, |c| c.pairs_checked);
                    windows += bundle.windows.len() + bundle.d_windows.len();
                    t.check(bundle.pass, || {
                        format!(
                            "l={l} n={n}: m0={:?} searches {:?}/{:?}",
                            bundle.m0, bundle.search_e.m0, bundle.search_b.m0
                        )
                    });
                }
                Err(err) => t.check(false, || format!("l={l} n={n}: {err}")),
            }
        }
    }
    t.finish(
        6,
        "T-sequence window certificates for d",
        format!("x = e_1, l <= 2, n <= 3, M = {max_index}: {windows} windows, {pairs} cross-term pairs"),
        start,
    )
}

pub fn dual_classification(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    let max_k = profile.pick(12u64, 16);
    let epsilon = Dyadic::pow2_inv(8);
    let mut t = Tally::default();
    for target in targets(&["1/2^1", "1/2^2", "1/2^3", "3/2^2"]) {
        let c = classify_prefix(-64..=64, &target, max_k, &epsilon).expect("valid prefix");
        let divisor = 1i64 << target.k0();
        for m in -64i64..=64 {
            let numeric = c.accepted.contains(&m);
            t.check(numeric == (m % divisor == 0) && !c.disagreements.contains(&m), || {
                format!("x={} m={m}", target.x())
            });
        }
    }
    t.finish(
        7,
        "dual group is generated by 2^k0 chi_1",
        format!("|m| <= 64, K = {max_k}, eps = 1/2^8"),
        start,
    )
}

pub fn radical_identity(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    let max_level = profile.pick(12u32, 14);
    let mut t = Tally::default();
    for target in targets(&["1/2^1", "1/2^2", "1/2^3", "3/2^2"]) {
        let k0 = target.k0();
        let x_int = as_level_integer(target.x(), k0);
        for level in k0..=max_level {
            let report = radical_at_level(&target, -64..=64, level).expect("level >= k0");
            // brute force over a/2^N with integers only
            let modulus = 1u64 << level;
            let continuous: Vec<i64> = (-64i64..=64)
                .filter(|&m| m != 0 && (m * x_int as i64).rem_euclid(1 << k0) == 0)
                .collect();
            let kernel: Vec<u64> = (0..modulus)
                .filter(|&a| continuous.iter().all(|&m| (m * a as i64).rem_euclid(modulus as i64) == 0))
                .collect();
            let generated: Vec<u64> = {
                let step = modulus >> k0;
                let mut v: Vec<u64> = (0..1u64 << k0)
                    .map(|j| (j * x_int % (1 << k0)) * step)
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let mut reported: Vec<u64> = report
                .members
                .iter()
                .map(|a| as_level_integer(a, level))
                .collect();
            reported.sort_unstable();
            t.check(
                reported == kernel && kernel == generated && report.equals_target_subgroup,
                || format!("x={} N={level}: {} members", target.x(), reported.len()),
            );
        }
    }
    t.finish(
        8,
        "radical equals <x>",
        format!("levels k0..={max_level}, m in [-64, 64]"),
        start,
    )
}

pub fn limit_bound(profile: Profile) -> CriterionResult {
    let start = Instant::now();
    let max_k = profile.pick(6u64, 8);
    let chi = Character::multiple(1);
    let mut t = Tally::default();
    for target in targets(&["1/2^1", "1/2^2", "1/2^3", "3/2^2"]) {
        let b = SequenceSpec::b(target.clone());
        let minus_x = CircleValue::from_element(-target.x().clone()).expect("p = 2");
        for k in target.k0() as u64..=max_k {
            let value = evaluate(&chi, &b.term(k).expect("k >= 1")).expect("integer character");
            let distance = value.distance(&minus_x);
            let bound = b_limit_bound(k);
            t.check(distance <= bound, || {
                format!("x={} k={k}: {distance} > {bound}", target.x())
            });
        }
    }
    t.finish(
        9,
        "chi_1(b_k) -> -x within (k+1)/2^{2(k^3-k^2)}",
        format!("k0 <= k <= {max_k}"),
        start,
    )
}

pub type CriterionFn = fn(Profile) -> CriterionResult;

pub const CRITERIA: [CriterionFn; 9] = [
    canonical_soundness,
    lambda_bound,
    f_laws,
    order_bounds,
    b_order_law,
    window_certificates,
    dual_classification,
    radical_identity,
    limit_bound,
];

pub fn run_all(profile: Profile) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| c(profile)).collect()
}

pub fn format_line(r: &CriterionResult) -> String {
    format!(
        "[{}] criterion {}: {} ({} checks, {} violations, {} ms) - {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.checked,
        r.violations,
        r.elapsed_ms,
        r.detail
    )
}
