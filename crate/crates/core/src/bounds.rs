//! Closed-form bound calculators for 2-partitions of `F_2^7` and the
//! literature fixture table.
//!
//! The per-point bound `f` comes from the classified vector space
//! partition types of `F_2^6`: a point lying on `m3bar` planes admits at
//! most `f(m3bar)` further lines through it. Aggregating `f` over all 127
//! points against the point counts of the solid set yields the closed-form
//! bound on the number of planes.

use num_bigint::BigUint;
use serde::Deserialize;
use std::sync::OnceLock;

use crate::counting::{gaussian, q_pow};
use crate::error::{domain, Result};

/// `f(m3bar) = 21 - 5r + r^2 - 7j` where `m3bar = 3j + r`, `r in {0,1,2}`.
pub fn f_function(m3bar: u64) -> i64 {
    let j = (m3bar / 3) as i64;
    let r = (m3bar % 3) as i64;
    21 - 5 * r + r * r - 7 * j
}

/// Upper bound `q^{2(v-k)}` for the number of `k`-subspaces in a
/// 2-partition of type `(v-k+1)^1 k^a 2^*`, `k >= 3`, `v >= 2k`.
///
/// Both line-counting expressions of the underlying argument are
/// recomputed and their exact ratio asserted on every call.
pub fn mrd_like_bound(q: u64, v: u32, k: u32) -> Result<BigUint> {
    if q < 2 {
        return Err(domain("q must be at least 2"));
    }
    if k < 3 || v < 2 * k {
        return Err(domain(format!("need k >= 3 and v >= 2k, got v={v}, k={k}")));
    }
    let bound = q_pow(q, 2 * (v - k) as u64);
    // lines disjoint from the (v-k+1)-subspace:
    // [v,2] - [v-k+1,2] - (1/q) [v-k+1,1]([v,1] - [v-k+1,1])
    let w = (v - k + 1) as u64;
    let meet_in_point =
        gaussian(w, 1, q)? * (gaussian(v as u64, 1, q)? - gaussian(w, 1, q)?) / BigUint::from(q);
    let disjoint_total = gaussian(v as u64, 2, q)? - gaussian(w, 2, q)? - meet_in_point;
    // lines of a k-subspace missing a fixed point: [k,2] - [k-1,1]
    let per_member = gaussian(k as u64, 2, q)? - gaussian(k as u64 - 1, 1, q)?;
    assert_eq!(
        disjoint_total,
        &bound * &per_member,
        "line-counting ratio check failed"
    );
    Ok(bound)
}

/// Largest `m4` the closed-form bound covers; 17 is served by the fixture
/// table instead (the stronger computational value 240).
pub const CLOSED_FORM_MAX_M4: u32 = 16;

/// `m3 <= 381 - ceil(m4 (61 - m4) / 7)` for `0 <= m4 <= 16`; `m4 = 17`
/// returns the fixed computational value 240.
pub fn closed_form_m3_bound(m4: u32) -> Result<u64> {
    if m4 > 17 {
        return Err(domain(format!("m4 = {m4} exceeds 17")));
    }
    if m4 == 17 {
        return Ok(m3_table(17).expect("table covers 17").upper);
    }
    let m4 = m4 as u64;
    let product = m4 * (61 - m4);
    Ok(381 - product.div_ceil(7))
}

/// Point-count profile attaining the closed-form optimum: `a_i` points on
/// exactly `i` solids, maximizing `sum f(i) a_i` subject to the three
/// counting equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCountProfile {
    pub a0: u64,
    pub a1: u64,
    pub a2: u64,
    /// `sum f(i) a_i` at the optimum.
    pub objective: i64,
    /// `floor(objective / 7)`, the resulting bound on m3.
    pub m3_bound: u64,
}

/// Maximizes `sum_i f(i) a_i` over non-negative integers `a_i` subject to
/// `sum a_i = 127`, `sum i a_i = 15 m4`, `sum i(i-1) a_i = m4 (m4-1)`,
/// by exact dynamic programming over all supports (not just `{0,1,2}`),
/// and checks the result against the closed form.
pub fn point_count_optimize(m4: u32) -> Result<PointCountProfile> {
    if m4 > CLOSED_FORM_MAX_M4 {
        return Err(domain(format!("m4 = {m4} exceeds {CLOSED_FORM_MAX_M4}")));
    }
    let m4 = m4 as usize;
    let s1_target = 15 * m4;
    let s2_target = m4 * m4.saturating_sub(1);
    let points = 127usize;

    // dp[s1][s2][c] = max sum of f(i) a_i over multisets of items i >= 1
    // with sum i a_i = s1, sum i(i-1) a_i = s2, sum a_i = c
    const NEG: i64 = i64::MIN / 4;
    let dim1 = s1_target + 1;
    let dim2 = s2_target + 1;
    let dimc = points + 1;
    let idx = |s1: usize, s2: usize, c: usize| (s1 * dim2 + s2) * dimc + c;
    let mut dp = vec![NEG; dim1 * dim2 * dimc];
    dp[idx(0, 0, 0)] = 0;
    for i in 1..=m4.max(1) {
        let w1 = i;
        let w2 = i * (i - 1);
        let value = f_function(i as u64);
        if w1 > s1_target {
            break;
        }
        for s1 in w1..dim1 {
            for s2 in w2..dim2 {
                for c in 1..dimc {
                    let prev = dp[idx(s1 - w1, s2 - w2, c - 1)];
                    if prev > NEG {
                        let cand = prev + value;
                        let cur = &mut dp[idx(s1, s2, c)];
                        if cand > *cur {
                            *cur = cand;
                        }
                    }
                }
            }
        }
    }
    let mut best = NEG;
    for c in 0..=points {
        let at = dp[idx(s1_target, s2_target, c)];
        if at > NEG {
            let total = at + f_function(0) * (points - c) as i64;
            best = best.max(total);
        }
    }
    if best <= NEG {
        return Err(domain(format!("no feasible point-count profile for m4 = {m4}")));
    }

    // the optimum is attained on support {0,1,2}
    let a2 = (m4 * m4.saturating_sub(1) / 2) as u64;
    let a1 = (m4 * (16 - m4)) as u64;
    let a0 = 127 - a1 - a2;
    let formula_objective =
        f_function(0) * a0 as i64 + f_function(1) * a1 as i64 + f_function(2) * a2 as i64;
    assert_eq!(
        best, formula_objective,
        "dynamic program and exchange-argument profile disagree at m4 = {m4}"
    );
    let m3_bound = (best / 7) as u64;
    assert_eq!(
        m3_bound,
        closed_form_m3_bound(m4 as u32)?,
        "optimized profile and closed form disagree at m4 = {m4}"
    );
    Ok(PointCountProfile {
        a0,
        a1,
        a2,
        objective: best,
        m3_bound,
    })
}

/// A literature value or interval with its citation.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct FixtureEntry {
    pub q: u64,
    pub v: u32,
    pub d: u32,
    pub k: u32,
    pub lower: u64,
    pub upper: u64,
    pub cite: String,
}

/// A row of the m3-versus-m4 bound table for 2-partitions of `F_2^7` of
/// type `4^{m4} 3^{m3} 2^*`.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct M3TableRow {
    pub m4: u32,
    pub lower: u64,
    pub upper: u64,
    pub cite: String,
}

#[derive(Deserialize)]
struct FixtureFile {
    cdc: Vec<FixtureEntry>,
    m3_table: Vec<M3TableRow>,
}

fn fixtures() -> &'static FixtureFile {
    static FIXTURES: OnceLock<FixtureFile> = OnceLock::new();
    FIXTURES.get_or_init(|| {
        serde_json::from_str(include_str!("fixtures.json")).expect("bundled fixture table parses")
    })
}

/// Known values and intervals for the maximum constant-dimension code
/// sizes `A_q(v, d; k)`, served from the bundled table. Never computed.
pub fn known_values(q: u64, v: u32, d: u32, k: u32) -> Option<&'static FixtureEntry> {
    fixtures()
        .cdc
        .iter()
        .find(|e| e.q == q && e.v == v && e.d == d && e.k == k)
}

/// The m3 bound table row for a given solid count `m4` (0..=17).
pub fn m3_table(m4: u32) -> Option<&'static M3TableRow> {
    fixtures().m3_table.iter().find(|r| r.m4 == m4)
}

/// Footnote cross-check value: `(7 f(1) + 112 f(2) + 8 f(3)) / 7`.
pub fn seventeen_solid_average_bound() -> i64 {
    (7 * f_function(1) + 112 * f_function(2) + 8 * f_function(3)) / 7
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_values() {
        assert_eq!(f_function(0), 21);
        assert_eq!(f_function(1), 17);
        assert_eq!(f_function(2), 15);
        assert_eq!(f_function(3), 14);
        assert_eq!(f_function(4), 10);
        assert_eq!(f_function(9), 0);
        assert_eq!(f_function(16), -18);
    }

    #[test]
    fn seventeen_solid_footnote() {
        // (7*17 + 112*15 + 8*14)/7 = 1911/7 = 273
        assert_eq!(7 * 17 + 112 * 15 + 8 * 14, 1911);
        assert_eq!(seventeen_solid_average_bound(), 273);
    }

    #[test]
    fn mrd_like_values() {
        assert_eq!(mrd_like_bound(2, 7, 3).unwrap(), BigUint::from(256u32));
        assert_eq!(mrd_like_bound(2, 8, 4).unwrap(), BigUint::from(256u32));
        assert_eq!(mrd_like_bound(3, 7, 3).unwrap(), BigUint::from(6561u32));
        assert!(mrd_like_bound(2, 5, 3).is_err());
        assert!(mrd_like_bound(2, 7, 2).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_m3_bound(0).unwrap(), 381);
        assert_eq!(closed_form_m3_bound(14).unwrap(), 287);
        assert_eq!(closed_form_m3_bound(16).unwrap(), 278);
        assert_eq!(closed_form_m3_bound(17).unwrap(), 240);
        assert!(closed_form_m3_bound(18).is_err());
    }

    #[test]
    fn closed_form_matches_table_uppers() {
        let expected = [
            372, 364, 356, 348, 341, 333, 327, 320, 314, 308, 302, 297, 291, 287, 282,
        ];
        for (i, &want) in expected.iter().enumerate() {
            let m4 = i as u32 + 1;
            assert_eq!(closed_form_m3_bound(m4).unwrap(), want, "m4 = {m4}");
        }
    }

    #[test]
    fn point_count_profiles() {
        let p = point_count_optimize(16).unwrap();
        assert_eq!((p.a0, p.a1, p.a2), (7, 0, 120));
        assert_eq!(p.m3_bound, 278);
        let p = point_count_optimize(0).unwrap();
        assert_eq!((p.a0, p.a1, p.a2), (127, 0, 0));
        assert_eq!(p.objective, 127 * 21);
        assert_eq!(p.m3_bound, 381);
        let p = point_count_optimize(1).unwrap();
        assert_eq!(p.m3_bound, 372);
    }

    #[test]
    fn point_count_agrees_with_closed_form_everywhere() {
        for m4 in 0..=16u32 {
            let p = point_count_optimize(m4).unwrap();
            assert_eq!(p.m3_bound, closed_form_m3_bound(m4).unwrap(), "m4 = {m4}");
        }
    }

    #[test]
    fn fixture_lookups() {
        assert_eq!(known_values(2, 6, 4, 3).map(|e| (e.lower, e.upper)), Some((77, 77)));
        assert_eq!(known_values(2, 8, 6, 4).map(|e| (e.lower, e.upper)), Some((257, 257)));
        assert_eq!(known_values(2, 7, 4, 3).map(|e| (e.lower, e.upper)), Some((333, 381)));
        assert!(known_values(2, 9, 4, 3).is_none());
        let row = m3_table(17).unwrap();
        assert_eq!((row.lower, row.upper), (240, 240));
        assert_eq!(m3_table(16).map(|r| (r.lower, r.upper)), Some((247, 276)));
        assert!(!m3_table(13).unwrap().cite.is_empty());
    }
}
