//! Truncated Zelenyuk–Protasov sets and finite T-sequence checks.
//!
//! `A(l, m)_a` is the set of sums `m_1 a_{k_1} + ... + m_h a_{k_h}` with
//! `m ≤ k_1 < ... < k_h`, nonzero `m_i` and `Σ|m_i| ≤ l`. It is infinite, so
//! everything here works on the window `k_h ≤ M` and says so in its output.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::element::{Combination, Element, OrderValue, Sequence, Term};
use crate::error::{Error, Result};

pub const DEFAULT_COMBINATION_CAP: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_COMBINATION_CAP`].
pub const COMBINATION_CAP_ENV: &str = "PRUFER_COMBINATION_CAP";

pub fn combination_cap_from_env() -> u128 {
    std::env::var(COMBINATION_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_COMBINATION_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowParams {
    pub l: u32,
    pub m: u64,
    #[serde(rename = "M")]
    pub max_index: u64,
    pub n_level: u32,
}

impl WindowParams {
    pub fn new(l: u32, m: u64, max_index: u64, n_level: u32) -> Result<Self> {
        let w = WindowParams {
            l,
            m,
            max_index,
            n_level,
        };
        w.validate()?;
        Ok(w)
    }

    /// `m > M` is allowed and denotes an empty window.
    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::Precondition("l must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::Precondition("m must be at least 1".into()));
        }
        Ok(())
    }

    fn span(&self) -> u64 {
        if self.m > self.max_index {
            0
        } else {
            self.max_index - self.m + 1
        }
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of combinations a window enumerates: `Σ_h C(span, h) 2^h C(l, h)`.
pub fn window_combination_count(l: u32, span: u64) -> u128 {
    (1..=(l as u64).min(span))
        .map(|h| {
            binomial(span, h)
                .saturating_mul(1u128 << h.min(127))
                .saturating_mul(binomial(l as u64, h))
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Nonzero coefficient vectors of length `h` with `Σ|c_i| ≤ l`, ordered by
/// total weight and then lexicographically.
fn coefficient_vectors(h: usize, l: u32) -> Vec<Vec<i64>> {
    fn rec(h: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == h {
            out.push(prefix.clone());
            return;
        }
        let remaining_slots = (h - prefix.len() - 1) as i64;
        let max_abs = budget - remaining_slots;
        for c in (-max_abs..=max_abs).filter(|&c| c != 0) {
            prefix.push(c);
            rec(h, budget - c.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(h, l as i64, &mut Vec::with_capacity(h), &mut out);
    out.sort_by(|a, b| {
        let wa: i64 = a.iter().map(|c| c.abs()).sum();
        let wb: i64 = b.iter().map(|c| c.abs()).sum();
        wa.cmp(&wb).then_with(|| a.cmp(b))
    });
    out
}

/// Calls `visit` on every combination of the window in enumeration order:
/// by number of summands, then lexicographic index sets, then coefficient
/// vectors by weight.
fn for_each_combination<S, F>(seq: &S, w: &WindowParams, cap: u128, mut visit: F) -> Result<u128>
where
    S: Sequence + ?Sized,
    F: FnMut(&[u64], &[i64], Element),
{
    w.validate()?;
    let span = w.span();
    let count = window_combination_count(w.l, span);
    if count > cap {
        return Err(Error::ResourceCap { count, cap });
    }
    if span == 0 {
        return Ok(0);
    }
    let l = w.l as i64;
    // multiples[i][c + l] = c · a_{m+i}
    let mut multiples = Vec::with_capacity(span as usize);
    for k in w.m..=w.max_index {
        let a = seq.term(k)?;
        multiples.push((-l..=l).map(|c| a.times(c)).collect::<Vec<_>>());
    }
    let max_h = (w.l as usize).min(span as usize);
    let n = span as usize;
    for h in 1..=max_h {
        let vectors = coefficient_vectors(h, w.l);
        let mut subset: Vec<usize> = (0..h).collect();
        let mut indices = vec![0u64; h];
        loop {
            for (slot, &i) in indices.iter_mut().zip(&subset) {
                *slot = w.m + i as u64;
            }
            for coeffs in &vectors {
                let value = subset
                    .iter()
                    .zip(coeffs)
                    .fold(Element::zero(seq.prime()), |acc, (&i, &c)| {
                        acc + multiples[i][(c + l) as usize].clone()
                    });
                visit(&indices, coeffs, value);
            }
            // next subset in lexicographic order
            let Some(pos) = (0..h).rev().find(|&j| subset[j] < n - h + j) else {
                break;
            };
            subset[pos] += 1;
            for j in pos + 1..h {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }
    Ok(count)
}

fn combination_from(indices: &[u64], coeffs: &[i64]) -> Combination {
    Combination::new(
        indices
            .iter()
            .zip(coeffs)
            .map(|(&k, &m)| Term { k, m })
            .collect(),
    )
    .expect("enumerated combinations are well formed")
}

/// The distinct values of a window, each with its first witness.
#[derive(Debug, Clone, Serialize)]
pub struct Window {
    pub params: WindowParams,
    pub combinations_enumerated: u128,
    pub entries: BTreeMap<Element, Combination>,
}

impl Window {
    pub fn contains(&self, x: &Element) -> bool {
        self.entries.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &Element> {
        self.entries.keys()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Element, &Combination)> {
        self.entries.iter().filter(|(x, _)| !x.is_zero())
    }
}

pub fn enumerate_window<S: Sequence + ?Sized>(
    seq: &S,
    w: &WindowParams,
    cap: u128,
) -> Result<Window> {
    let mut entries = BTreeMap::new();
    let count = for_each_combination(seq, w, cap, |indices, coeffs, value| {
        entries
            .entry(value)
            .or_insert_with(|| combination_from(indices, coeffs));
    })?;
    Ok(Window {
        params: *w,
        combinations_enumerated: count,
        entries,
    })
}

/// Every combination of the window with its value, in enumeration order.
pub fn enumerate_combinations<S: Sequence + ?Sized>(
    seq: &S,
    w: &WindowParams,
    cap: u128,
) -> Result<Vec<(Combination, Element)>> {
    let mut out = Vec::new();
    for_each_combination(seq, w, cap, |indices, coeffs, value| {
        out.push((combination_from(indices, coeffs), value));
    })?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub combination: Combination,
    pub value: Element,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionReport {
    pub params: WindowParams,
    pub window_size: usize,
    pub empty: bool,
    pub witnesses: Vec<Witness>,
}

/// Whether `A[2^n] ∩ A(l, m)` (truncated at `M`) is `{0}`; any nonzero
/// window value of order at most `2^n` is returned as a witness.
pub fn check_torsion_intersection<S: Sequence + ?Sized>(
    seq: &S,
    w: &WindowParams,
    cap: u128,
) -> Result<IntersectionReport> {
    let window = enumerate_window(seq, w, cap)?;
    let witnesses: Vec<Witness> = window
        .nonzero()
        .filter(|(x, _)| x.exponent() <= w.n_level)
        .map(|(x, c)| Witness {
            combination: c.clone(),
            value: x.clone(),
        })
        .collect();
    Ok(IntersectionReport {
        params: *w,
        window_size: window.len(),
        empty: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct M0Search {
    pub m0: Option<u64>,
    pub stable_through: u64,
    /// Emptiness re-checked for every `m` in `m0..=m_cap`.
    pub monotone: bool,
    pub scanned: Vec<(u64, bool)>,
    pub note: &'static str,
}

const TRUNCATION_NOTE: &str =
    "finite certificate on indices <= M; says nothing about the untruncated set";

/// Smallest `m ≤ m_cap` whose window `[m, M]` meets `A[2^n]` only in 0.
pub fn search_m0<S: Sequence + ?Sized>(
    seq: &S,
    l: u32,
    n_level: u32,
    max_index: u64,
    m_cap: u64,
    cap: u128,
) -> Result<M0Search> {
    if m_cap > max_index {
        return Err(Error::Precondition(format!(
            "m_cap = {m_cap} exceeds M = {max_index}"
        )));
    }
    let mut scanned = Vec::new();
    for m in 1..=m_cap {
        let w = WindowParams::new(l, m, max_index, n_level)?;
        scanned.push((m, check_torsion_intersection(seq, &w, cap)?.empty));
    }
    let m0 = scanned.iter().find(|(_, empty)| *empty).map(|(m, _)| *m);
    let monotone = match m0 {
        Some(m0) => scanned.iter().filter(|(m, _)| *m >= m0).all(|(_, e)| *e),
        None => true,
    };
    Ok(M0Search {
        m0,
        stable_through: max_index,
        monotone,
        scanned,
        note: TRUNCATION_NOTE,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapCertificate {
    pub ok: bool,
    /// `n_{k+1} - n_k` for `k ≥ window_start`.
    pub differences: Vec<i64>,
}

/// Finite evidence for `n_{k+1} - n_k → ∞` on orders `p^{n_k}`: the
/// differences from `window_start` (1-based, `orders[0]` is index 1) on
/// must be strictly increasing.
pub fn gap_growth_certificate(orders: &[OrderValue], window_start: usize) -> Result<GapCertificate> {
    if let Some(o) = orders.iter().find(|o| o.p != orders[0].p) {
        return Err(Error::PrimeMismatch {
            left: orders[0].p,
            right: o.p,
        });
    }
    let start = window_start.max(1) - 1;
    let differences: Vec<i64> = orders
        .windows(2)
        .skip(start)
        .map(|w| w[1].k as i64 - w[0].k as i64)
        .collect();
    let ok = differences.windows(2).all(|d| d[1] > d[0]);
    Ok(GapCertificate { ok, differences })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{RadicalTarget, SequenceSpec};
    use std::collections::BTreeSet;

    fn lit(s: &str) -> Element {
        s.parse().unwrap()
    }

    fn e() -> SequenceSpec {
        SequenceSpec::e(2)
    }

    fn values(l: u32, m: u64, max_index: u64) -> BTreeSet<Element> {
        let w = WindowParams::new(l, m, max_index, 0).unwrap();
        enumerate_window(&e(), &w, DEFAULT_COMBINATION_CAP)
            .unwrap()
            .values()
            .cloned()
            .collect()
    }

    #[test]
    fn single_weight_window() {
        // ±e_k for k in 1..=3, with -e_1 = e_1.
        let oracle: BTreeSet<Element> = (1..=3)
            .flat_map(|k| [Element::e2(k), -Element::e2(k)])
            .collect();
        let got = values(1, 1, 3);
        assert_eq!(got, oracle);
        assert_eq!(got.len(), 5);
        assert_eq!(
            values(1, 5, 5),
            BTreeSet::from([lit("1/2^5"), lit("31/2^5")])
        );
    }

    #[test]
    fn weight_two_window() {
        let w = WindowParams::new(2, 1, 2, 0).unwrap();
        let all = enumerate_combinations(&e(), &w, DEFAULT_COMBINATION_CAP).unwrap();
        assert_eq!(all.len(), 12);
        assert_eq!(window_combination_count(2, 2), 12);
        let got = values(2, 1, 2);
        assert!(got.contains(&Element::e2(1)));
        assert!(got.contains(&lit("3/2^2")));
        // 2e_1 = 0 arises by cancellation and is kept.
        assert!(got.contains(&Element::zero(2)));
        for (c, v) in &all {
            let direct = c
                .terms()
                .iter()
                .fold(Element::zero(2), |acc, t| acc + Element::e2(t.k as u32).times(t.m));
            assert_eq!(&direct, v);
        }
    }

    #[test]
    fn enumeration_order_is_deterministic() {
        let w = WindowParams::new(2, 1, 3, 0).unwrap();
        let all = enumerate_combinations(&e(), &w, DEFAULT_COMBINATION_CAP).unwrap();
        let first: Vec<String> = all.iter().take(6).map(|(c, _)| c.to_string()).collect();
        assert_eq!(
            first,
            ["-a_1", "a_1", "-2·a_1", "2·a_1", "-a_2", "a_2"]
        );
        let hs: Vec<usize> = all.iter().map(|(c, _)| c.len()).collect();
        assert!(hs.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(all.len() as u128, window_combination_count(2, 3));
    }

    #[test]
    fn resource_cap_is_explicit() {
        let w = WindowParams::new(3, 1, 20, 0).unwrap();
        let err = enumerate_window(&e(), &w, 100).unwrap_err();
        assert_eq!(
            err,
            Error::ResourceCap {
                count: window_combination_count(3, 20),
                cap: 100
            }
        );
    }

    #[test]
    fn empty_and_invalid_windows() {
        let w = WindowParams::new(2, 9, 8, 0).unwrap();
        assert!(enumerate_window(&e(), &w, 10).unwrap().is_empty());
        assert!(WindowParams::new(0, 1, 3, 0).is_err());
        assert!(WindowParams::new(1, 0, 3, 0).is_err());
    }

    #[test]
    fn torsion_intersections() {
        let cap = DEFAULT_COMBINATION_CAP;
        let r = check_torsion_intersection(&e(), &WindowParams::new(1, 2, 10, 1).unwrap(), cap)
            .unwrap();
        assert!(r.empty);

        let r = check_torsion_intersection(&e(), &WindowParams::new(2, 1, 4, 1).unwrap(), cap)
            .unwrap();
        assert!(!r.empty);
        let hits: Vec<&Element> = r.witnesses.iter().map(|w| &w.value).collect();
        assert_eq!(hits, vec![&Element::e2(1)]);

        let r = check_torsion_intersection(&e(), &WindowParams::new(1, 1, 6, 0).unwrap(), cap)
            .unwrap();
        assert!(r.empty && r.witnesses.is_empty());
    }

    #[test]
    fn m0_searches() {
        let cap = DEFAULT_COMBINATION_CAP;
        let s = search_m0(&e(), 1, 2, 12, 12, cap).unwrap();
        assert_eq!(s.m0, Some(3));
        assert!(s.monotone);
        assert_eq!(search_m0(&e(), 1, 0, 6, 6, cap).unwrap().m0, Some(1));

        // b_1 = 3/4 has order 4 <= 8; b_k for k >= 2 has order 2^{2k^3}.
        let b = SequenceSpec::b(RadicalTarget::new(Element::e2(1)).unwrap());
        let direct: Vec<u32> = (1..=5).map(|k| b.term(k).unwrap().exponent()).collect();
        assert_eq!(direct, vec![2, 16, 54, 128, 250]);
        assert_eq!(search_m0(&b, 1, 3, 5, 5, cap).unwrap().m0, Some(2));

        // level 20 is never reached by ±e_k with k <= 6
        assert_eq!(search_m0(&e(), 1, 20, 6, 6, cap).unwrap().m0, None);
        assert!(search_m0(&e(), 1, 2, 5, 6, cap).is_err());
    }

    #[test]
    fn gap_growth() {
        let orders = |ks: &[u32]| ks.iter().map(|&k| OrderValue::new(2, k)).collect::<Vec<_>>();
        let c = gap_growth_certificate(&orders(&[2, 16, 54, 128, 250, 432]), 1).unwrap();
        assert!(c.ok);
        assert_eq!(c.differences, vec![14, 38, 74, 122, 182]);
        let c = gap_growth_certificate(&orders(&[1, 2, 3, 4, 5]), 1).unwrap();
        assert!(!c.ok);
        assert!(gap_growth_certificate(&orders(&[7]), 1).unwrap().ok);
        // Only differences from index 3 on are judged.
        let c = gap_growth_certificate(&orders(&[1, 9, 10, 12, 15]), 3).unwrap();
        assert_eq!(c.differences, vec![2, 3]);
        assert!(c.ok);
        assert!(gap_growth_certificate(&[OrderValue::new(2, 1), OrderValue::new(3, 2)], 1).is_err());
    }

    #[test]
    fn coefficient_vector_counts() {
        for l in 1..=4u32 {
            for h in 1..=l as usize {
                let n = coefficient_vectors(h, l).len() as u128;
                assert_eq!(n, (1u128 << h) * binomial(l as u64, h as u64));
            }
        }
    }
}
