//! The sequences `e_k`, `b_k` and their interleaving `d_k` for a prescribed
//! target `x`, plus the certificates tying their orders to the window
//! checks in [`crate::tsequence`].
//!
//! `b_k = -x + Σ_{j=0}^{k} e_{2(k³ - k² + jk)}`, with `e_0 = 0`, and
//! `d = b_1, e_1, b_2, e_2, ...`.

use serde::Serialize;

use crate::canonical::{order_bound_corollary, OrderCertificate};
use crate::element::{Combination, Element, OrderValue, Sequence, Term};
use crate::error::{Error, Result};
use crate::tsequence::{
    check_torsion_intersection, enumerate_window, gap_growth_certificate, search_m0,
    GapCertificate, IntersectionReport, M0Search, WindowParams,
};

/// A nonzero `x ∈ Z(2^∞)` with `o(x) = 2^{k0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalTarget {
    x: Element,
    k0: u32,
}

impl RadicalTarget {
    pub fn new(x: Element) -> Result<Self> {
        if x.prime() != 2 {
            return Err(Error::NotDyadic(x.prime()));
        }
        if x.is_zero() {
            return Err(Error::Precondition("target x must be nonzero".into()));
        }
        Ok(RadicalTarget {
            k0: x.exponent(),
            x,
        })
    }

    pub fn x(&self) -> &Element {
        &self.x
    }

    pub fn k0(&self) -> u32 {
        self.k0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceKind {
    E,
    B(RadicalTarget),
    D(RadicalTarget),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    kind: SequenceKind,
    p: u32,
}

impl SequenceSpec {
    /// `e_k = 1/p^k`. Panics if `p` is not prime.
    pub fn e(p: u32) -> Self {
        assert!(crate::element::is_prime(p), "{p} is not a prime");
        SequenceSpec {
            kind: SequenceKind::E,
            p,
        }
    }

    pub fn b(target: RadicalTarget) -> Self {
        SequenceSpec {
            kind: SequenceKind::B(target),
            p: 2,
        }
    }

    pub fn d(target: RadicalTarget) -> Self {
        SequenceSpec {
            kind: SequenceKind::D(target),
            p: 2,
        }
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            SequenceKind::E => "e",
            SequenceKind::B(_) => "b",
            SequenceKind::D(_) => "d",
        }
    }

    pub fn target(&self) -> Option<&RadicalTarget> {
        match &self.kind {
            SequenceKind::E => None,
            SequenceKind::B(t) | SequenceKind::D(t) => Some(t),
        }
    }
}

impl Sequence for SequenceSpec {
    fn prime(&self) -> u32 {
        self.p
    }

    fn term(&self, k: u64) -> Result<Element> {
        if k == 0 {
            return Err(Error::UnresolvableIndex(k));
        }
        match &self.kind {
            SequenceKind::E => {
                let n = u32::try_from(k).map_err(|_| Error::UnresolvableIndex(k))?;
                Element::e(self.p, n)
            }
            SequenceKind::B(t) => b_term(t, k),
            SequenceKind::D(t) => {
                if k % 2 == 1 {
                    b_term(t, k.div_ceil(2))
                } else {
                    let n = u32::try_from(k / 2).map_err(|_| Error::UnresolvableIndex(k))?;
                    Ok(Element::e2(n))
                }
            }
        }
    }
}

/// The `k + 1` values `k³ - k² + jk`, `0 ≤ j ≤ k`; the summands of `b_k`
/// are `e_{2n}` for these `n`.
pub fn b_inner_indices(k: u64) -> Vec<u64> {
    let base = k * k * k - k * k;
    (0..=k).map(|j| base + j * k).collect()
}

/// `Σ_j e_{2(k³ - k² + jk)}`, i.e. `b_k + x`.
pub fn b_tail(k: u64) -> Result<Element> {
    let top = k
        .checked_pow(3)
        .and_then(|c| c.checked_mul(2))
        .filter(|&t| t <= u32::MAX as u64)
        .ok_or(Error::UnresolvableIndex(k))?;
    debug_assert!(top > 0);
    Ok(b_inner_indices(k)
        .into_iter()
        .fold(Element::zero(2), |acc, n| acc + Element::e2(2 * n as u32)))
}

fn b_term(target: &RadicalTarget, k: u64) -> Result<Element> {
    Ok(b_tail(k)? - target.x.clone())
}

/// Splits a combination over `d` into its `e`-part (even positions `2i ↦ i`)
/// and `b`-part (odd positions `2i - 1 ↦ i`).
pub fn split_interleaved(c: &Combination) -> (Combination, Combination) {
    let mut e_terms = Vec::new();
    let mut b_terms = Vec::new();
    for t in c.terms() {
        if t.k % 2 == 0 {
            e_terms.push(Term { k: t.k / 2, m: t.m });
        } else {
            b_terms.push(Term {
                k: t.k.div_ceil(2),
                m: t.m,
            });
        }
    }
    (
        Combination::new(e_terms).expect("subsequence of increasing indices"),
        Combination::new(b_terms).expect("subsequence of increasing indices"),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderLawCertificate {
    pub k: u64,
    pub claimed: OrderValue,
    pub actual: OrderValue,
    pub holds: bool,
}

/// `o(b_k) = 2^{2k³}` for `k ≥ k0`.
pub fn order_law_b(target: &RadicalTarget, k: u64) -> Result<OrderLawCertificate> {
    if k < target.k0 as u64 || k == 0 {
        return Err(Error::Precondition(format!(
            "order law is only claimed for k >= k0 = {} (got k = {k})",
            target.k0
        )));
    }
    let claimed = OrderValue::new(2, (2 * k * k * k) as u32);
    let actual = b_term(target, k)?.order();
    Ok(OrderLawCertificate {
        k,
        claimed,
        actual,
        holds: claimed == actual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct M0Certificate {
    pub m0: u64,
    #[serde(rename = "M1")]
    pub m1: u64,
    #[serde(rename = "M2")]
    pub m2: u64,
    /// `4l + n + k0`
    pub structural: u64,
}

/// `m0 = max{M1, M2, 4l + n + k0}`.
pub fn m0_certificate(target: &RadicalTarget, l: u32, n_level: u32, m1: u64, m2: u64) -> M0Certificate {
    let structural = 4 * l as u64 + n_level as u64 + target.k0 as u64;
    M0Certificate {
        m0: m1.max(m2).max(structural),
        m1,
        m2,
        structural,
    }
}

/// The inequality chain for one pair `z ∈ A(l,m)_e∖{0}`, `w ∈ A(l,m)_b∖{0}`,
/// where `w = m_1 b_{k_1} + ... + m_h b_{k_h}` and `y` is the `e`-tail of
/// `b_{k_h}`.
#[derive(Debug, Clone, Serialize)]
pub struct PairCertificate {
    pub z: Element,
    pub w: Element,
    pub w_combination: Combination,
    pub top_index: u64,
    pub top_coeff: i64,
    /// `o(m_h y + z) > 4^{n_{t-4l} - l - 1} ≥ 4^{k_h³ - k_h² - l - 1}`
    pub corollary: OrderCertificate,
    /// `k_h³ - k_h² - l - 1 > (k_h - 1)³`
    pub exponent_gap: bool,
    /// `o(-m_h x) ≤ 2^{k0} < 4^{(k_h - 1)³}`
    pub target_small: bool,
    /// `o(m_h b_{k_h} + z) = o(m_h y + z)`
    pub top_term_dominates: bool,
    /// `o(w - m_h b_{k_h}) ≤ 4^{(k_h - 1)³}`
    pub lower_terms_small: bool,
    pub order_w_plus_z: OrderValue,
    /// `o(w + z) > 4^{(k_h - 1)³} > 2^n`
    pub final_bound: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossTermReport {
    pub params: WindowParams,
    pub pairs_checked: usize,
    pub failures: Vec<PairCertificate>,
    pub all_hold: bool,
}

fn cube(k: u64) -> i128 {
    (k as i128).pow(3)
}

fn pair_certificate(
    target: &RadicalTarget,
    l: u32,
    n_level: u32,
    z: (&Element, &Combination),
    w: (&Element, &Combination),
) -> Result<PairCertificate> {
    let top = *w.1.last().expect("nonzero window values have a witness");
    let kh = top.k;
    let y_indices: Vec<u32> = b_inner_indices(kh).into_iter().map(|n| n as u32).collect();
    let corollary = order_bound_corollary(l, top.m, &y_indices, z.1)?;
    let paper_exponent = cube(kh) - (kh as i128).pow(2) - l as i128 - 1;
    let corollary_ok = corollary.holds
        && corollary.weak_bound.map(|b| b.exp as i128) == Some(paper_exponent);

    let prev_cube = cube(kh - 1);
    let exponent_gap = paper_exponent > prev_cube;

    let mx = target.x.times(-top.m);
    let target_small = mx.exponent() <= target.k0 && (target.k0 as i128) < 2 * prev_cube;

    let y = b_tail(kh)?;
    let b_top = &y - target.x();
    let my_z = y.times(top.m) + z.0.clone();
    let mb_z = b_top.times(top.m) + z.0.clone();
    let top_term_dominates = mb_z.order() == my_z.order();

    let rest = w.0 - &b_top.times(top.m);
    let lower_terms_small = (rest.exponent() as i128) <= 2 * prev_cube;

    let sum = w.0 + z.0;
    let order_w_plus_z = sum.order();
    let final_bound = (order_w_plus_z.k as i128) > 2 * prev_cube
        && 2 * prev_cube >= n_level as i128
        && order_w_plus_z.k > n_level;

    let holds = corollary_ok
        && exponent_gap
        && target_small
        && top_term_dominates
        && lower_terms_small
        && final_bound;
    Ok(PairCertificate {
        z: z.0.clone(),
        w: w.0.clone(),
        w_combination: w.1.clone(),
        top_index: kh,
        top_coeff: top.m,
        corollary,
        exponent_gap,
        target_small,
        top_term_dominates,
        lower_terms_small,
        order_w_plus_z,
        final_bound,
        holds,
    })
}

/// Checks the order chain on every pair of nonzero values from the `e` and
/// `b` windows `[m, M]`. Requires `m ≥ 4l + n + k0`.
pub fn cross_term_certificate(
    target: &RadicalTarget,
    l: u32,
    n_level: u32,
    m: u64,
    max_index: u64,
    cap: u128,
) -> Result<CrossTermReport> {
    let structural = 4 * l as u64 + n_level as u64 + target.k0 as u64;
    if m < structural {
        return Err(Error::Precondition(format!(
            "m = {m} is below 4l + n + k0 = {structural}"
        )));
    }
    let params = WindowParams::new(l, m, max_index, n_level)?;
    let e_window = enumerate_window(&SequenceSpec::e(2), &params, cap)?;
    let b_window = enumerate_window(&SequenceSpec::b(target.clone()), &params, cap)?;
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for z in e_window.nonzero() {
        for w in b_window.nonzero() {
            let cert = pair_certificate(target, l, n_level, z, w)?;
            pairs_checked += 1;
            if !cert.holds {
                failures.push(cert);
            }
        }
    }
    Ok(CrossTermReport {
        params,
        pairs_checked,
        all_hold: failures.is_empty(),
        failures,
    })
}

/// Everything the window-level argument for `{d_k}` consists of, at one
/// `(l, n)` and truncation `M`.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateBundle {
    pub target: RadicalTarget,
    pub l: u32,
    pub n_level: u32,
    #[serde(rename = "M")]
    pub max_index: u64,
    pub search_e: M0Search,
    pub search_b: M0Search,
    pub m0: Option<M0Certificate>,
    pub order_laws: Vec<OrderLawCertificate>,
    pub gap_growth: GapCertificate,
    /// Windows over `e` and `b` at every `m` in `m0..=M`.
    pub windows: Vec<IntersectionReport>,
    /// Windows over `d` at positions `[2m, 2M]` for `m` in `m0..=M`.
    pub d_windows: Vec<IntersectionReport>,
    pub cross_terms: Option<CrossTermReport>,
    pub pass: bool,
    pub note: &'static str,
}

pub fn certify(
    target: &RadicalTarget,
    l: u32,
    n_level: u32,
    max_index: u64,
    cap: u128,
) -> Result<CertificateBundle> {
    let e = SequenceSpec::e(2);
    let b = SequenceSpec::b(target.clone());
    let d = SequenceSpec::d(target.clone());
    let search_e = search_m0(&e, l, n_level, max_index, max_index, cap)?;
    let search_b = search_m0(&b, l, n_level, max_index, max_index, cap)?;

    let first = (target.k0 as u64).max(1);
    let order_laws = (first..=max_index.max(first))
        .map(|k| order_law_b(target, k))
        .collect::<Result<Vec<_>>>()?;
    let gap_growth = gap_growth_certificate(
        &order_laws.iter().map(|c| c.actual).collect::<Vec<_>>(),
        1,
    )?;

    let m0 = match (search_e.m0, search_b.m0) {
        (Some(m1), Some(m2)) => Some(m0_certificate(target, l, n_level, m1, m2)),
        _ => None,
    };
    let mut windows = Vec::new();
    let mut d_windows = Vec::new();
    let mut cross_terms = None;
    if let Some(cert) = m0 {
        for m in cert.m0..=max_index {
            let w = WindowParams::new(l, m, max_index, n_level)?;
            windows.push(check_torsion_intersection(&e, &w, cap)?);
            windows.push(check_torsion_intersection(&b, &w, cap)?);
            let wd = WindowParams::new(l, 2 * m, 2 * max_index, n_level)?;
            d_windows.push(check_torsion_intersection(&d, &wd, cap)?);
        }
        cross_terms = Some(cross_term_certificate(
            target, l, n_level, cert.m0, max_index, cap,
        )?);
    }
    let pass = m0.is_some()
        && order_laws.iter().all(|c| c.holds)
        && gap_growth.ok
        && windows.iter().chain(&d_windows).all(|r| r.empty)
        && cross_terms.as_ref().is_some_and(|c| c.all_hold);
    Ok(CertificateBundle {
        target: target.clone(),
        l,
        n_level,
        max_index,
        search_e,
        search_b,
        m0,
        order_laws,
        gap_growth,
        windows,
        d_windows,
        cross_terms,
        pass,
        note: "desk-scale certificate on indices <= M; the tail is covered by the order bounds, not by enumeration",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::eval_combination;
    use crate::tsequence::{enumerate_combinations, DEFAULT_COMBINATION_CAP};

    fn target(s: &str) -> RadicalTarget {
        RadicalTarget::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn targets() {
        let t = target("3/2^2");
        assert_eq!(t.k0(), 2);
        assert!(RadicalTarget::new(Element::zero(2)).is_err());
        assert!(RadicalTarget::new(Element::e(3, 1).unwrap()).is_err());
    }

    #[test]
    fn b_terms() {
        let b = SequenceSpec::b(target("1/2^1"));
        // -1/2 + 0 + 1/4
        assert_eq!(b.term(1).unwrap().to_string(), "3/2^2");
        let expected = -Element::e2(1) + Element::e2(8) + Element::e2(12) + Element::e2(16);
        assert_eq!(b.term(2).unwrap(), expected);
        assert_eq!(b_inner_indices(2), vec![4, 6, 8]);
        assert!(b.term(0).is_err());
    }

    #[test]
    fn d_interleaves() {
        let t = target("1/2^1");
        let (b, e, d) = (
            SequenceSpec::b(t.clone()),
            SequenceSpec::e(2),
            SequenceSpec::d(t),
        );
        let got: Vec<Element> = (1..=4).map(|k| d.term(k).unwrap()).collect();
        assert_eq!(
            got,
            vec![
                b.term(1).unwrap(),
                e.term(1).unwrap(),
                b.term(2).unwrap(),
                e.term(2).unwrap()
            ]
        );
    }

    #[test]
    fn index_formula() {
        for k in 1..=8u64 {
            let idx = b_inner_indices(k);
            assert_eq!(idx.len() as u64, k + 1);
            assert_eq!(idx[0], k * k * k - k * k);
            assert!(idx.windows(2).all(|w| w[1] - w[0] == k));
            assert_eq!(*idx.last().unwrap(), k * k * k);
        }
    }

    #[test]
    fn order_laws() {
        let c = order_law_b(&target("1/2^1"), 2).unwrap();
        assert_eq!(c.actual, OrderValue::new(2, 16));
        assert!(c.holds);
        let c = order_law_b(&target("1/2^1"), 1).unwrap();
        assert_eq!((c.claimed.k, c.actual.k, c.holds), (2, 2, true));
        let c = order_law_b(&target("1/2^3"), 3).unwrap();
        assert_eq!(c.claimed, OrderValue::new(2, 54));
        assert!(c.holds);
        assert!(order_law_b(&target("1/2^3"), 2).is_err());
    }

    #[test]
    fn below_k0_the_formula_still_applies() {
        // b_1 for x = e_3: -1/8 + 1/4 = 1/8, order 2^3 rather than 2^2.
        let b = SequenceSpec::b(target("1/2^3"));
        assert_eq!(b.term(1).unwrap().to_string(), "1/2^3");
    }

    #[test]
    fn m0_formula() {
        assert_eq!(m0_certificate(&target("1/2^1"), 1, 2, 3, 2).m0, 7);
        assert_eq!(m0_certificate(&target("1/2^1"), 1, 0, 1, 1).m0, 5);
        let c = m0_certificate(&target("1/2^2"), 2, 3, 10, 4);
        assert_eq!((c.m0, c.structural), (13, 13));
        assert_eq!(m0_certificate(&target("1/2^2"), 2, 3, 10, 20).m0, 20);
    }

    #[test]
    fn cross_terms() {
        let cap = DEFAULT_COMBINATION_CAP;
        let r = cross_term_certificate(&target("1/2^1"), 1, 2, 7, 8, cap).unwrap();
        assert_eq!(r.pairs_checked, 16);
        assert!(r.all_hold, "{:?}", r.failures);

        let r = cross_term_certificate(&target("1/2^1"), 1, 2, 9, 8, cap).unwrap();
        assert_eq!(r.pairs_checked, 0);
        assert!(r.all_hold);

        let r = cross_term_certificate(&target("1/2^2"), 1, 1, 8, 9, cap).unwrap();
        assert!(r.pairs_checked > 0 && r.all_hold);

        assert!(cross_term_certificate(&target("1/2^1"), 1, 2, 6, 8, cap).is_err());
    }

    #[test]
    fn interleaving_decomposition() {
        let t = target("1/2^1");
        let (e, b, d) = (
            SequenceSpec::e(2),
            SequenceSpec::b(t.clone()),
            SequenceSpec::d(t),
        );
        for l in 1..=2 {
            for m in 1..=2u64 {
                let w = WindowParams::new(l, 2 * m, 8, 0).unwrap();
                for (c, value) in enumerate_combinations(&d, &w, DEFAULT_COMBINATION_CAP).unwrap() {
                    let (ce, cb) = split_interleaved(&c);
                    assert_eq!(ce.weight() + cb.weight(), c.weight());
                    assert!(ce.terms().iter().all(|t| t.k >= m));
                    assert!(cb.terms().iter().all(|t| t.k >= m));
                    let recombined =
                        eval_combination(&ce, &e).unwrap() + eval_combination(&cb, &b).unwrap();
                    assert_eq!(recombined, value);
                }
            }
        }
    }

    #[test]
    fn certify_bundle() {
        let b = certify(&target("1/2^1"), 1, 2, 8, DEFAULT_COMBINATION_CAP).unwrap();
        assert_eq!(b.search_e.m0, Some(3));
        assert_eq!(b.search_b.m0, Some(2));
        assert_eq!(b.m0.unwrap().m0, 7);
        assert_eq!(b.windows.len(), 4);
        assert!(b.pass);
    }
}
