//! Bounds on the extreme values of D over all arrangements.
//!
//! Upper bounds on D_max come from two constructions: the degree method
//! bounds each vertex's contribution by its degree, the edges method packs
//! the longest available lengths. Complementing the edges method on the
//! complement graph gives a constant-time lower bound on D_min, and the
//! first two moments give upper bounds on D_min.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{choose2, complete_graph_d, int, ratio, ExactScalar};
use crate::graph::{Graph, GraphStats};
use crate::moments::{expected_d, variance_from_stats};
use crate::montecarlo::{McEstimate, RngSeed};
use crate::significance::mc_central_moment;

fn check_edge_count(n: u64, m: u64) -> Result<()> {
    if m > choose2(n) {
        return Err(Error::domain(format!(
            "m = {m} exceeds C({n}, 2) = {}",
            choose2(n)
        )));
    }
    Ok(())
}

/// m(n−1)²: every edge is at most n − 1 long.
pub fn naive_max(n: u64, m: u64) -> u128 {
    let span = n.saturating_sub(1) as u128;
    m as u128 * span * span
}

/// Degree method: m(n − 1/2) − Σk²/4.
pub fn upper_dm_from_stats(stats: &GraphStats) -> ExactScalar {
    let n = stats.n as i128;
    let m = stats.m as i128;
    ratio(4 * m * n - 2 * m - stats.sum_k2 as i128, 4)
}

pub fn upper_dm(g: &Graph) -> ExactScalar {
    upper_dm_from_stats(&g.stats())
}

/// F(d₀) = (n − d₀)(n − d₀ + 1)/2, the number of vertex pairs at distance
/// at least d₀.
pub fn f_of_d0(n: u64, d0: u64) -> Result<u64> {
    if d0 > n {
        return Err(Error::domain(format!("d0 = {d0} is outside 0..={n}")));
    }
    let k = n - d0;
    Ok(k * (k + 1) / 2)
}

/// Smallest d₀ with F(d₀) ≤ m, by binary search on the decreasing F.
pub fn d_star(n: u64, m: u64) -> Result<u64> {
    check_edge_count(n, m)?;
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if f_of_d0(n, mid)? <= m {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Edges method: (m − F(d*))(d* − 1) + Σ_{d=d*}^{n−1} (n − d)d.
pub fn upper_em(n: u64, m: u64) -> Result<u128> {
    let d = d_star(n, m)?;
    let f = f_of_d0(n, d)?;
    let (n, m, d, f) = (n as i128, m as i128, d as i128, f as i128);
    let tail = (n - d) * (n * n + (n + 3) * d - 2 * d * d - 1) / 6;
    Ok(((m - f) * (d - 1) + tail) as u128)
}

/// The edges method with the tail summed term by term.
pub fn upper_em_direct(n: u64, m: u64) -> Result<u128> {
    let d = d_star(n, m)?;
    let f = f_of_d0(n, d)?;
    let tail: u128 = (d.max(1)..n).map(|len| ((n - len) * len) as u128).sum();
    let head = (m - f) as u128 * d.saturating_sub(1) as u128;
    Ok(head + tail)
}

/// min(degree method, edges method).
pub fn upper_combined(g: &Graph) -> ExactScalar {
    let stats = g.stats();
    let em = upper_em(stats.n, stats.m).expect("a simple graph fits in K_n");
    upper_dm_from_stats(&stats).min(int(em))
}

/// D_min ≥ D(K_n) − D_upper^EM(n, C(n,2) − m), floored at m.
pub fn minla_lower(n: u64, m: u64) -> Result<u128> {
    check_edge_count(n, m)?;
    let complement = upper_em(n, choose2(n) - m)?;
    let full = complete_graph_d(n) as u128;
    Ok(full.saturating_sub(complement).max(m as u128))
}

/// D_min ≤ E[D] − V/(s − E[D]) for any s ≥ D_max, from the Bhatia–Davis
/// variance inequality. With V = 0 every arrangement has D = E[D].
pub fn bhatia_davis_minla_upper(
    e_d: &ExactScalar,
    var_d: &ExactScalar,
    dmax_surrogate: &ExactScalar,
) -> Result<ExactScalar> {
    if var_d.is_zero() {
        return Ok(e_d.clone());
    }
    if dmax_surrogate <= e_d {
        return Err(Error::domain(format!(
            "the D_max surrogate {dmax_surrogate} must exceed E[D] = {e_d}"
        )));
    }
    Ok(e_d - var_d / (dmax_surrogate - e_d))
}

/// Bhatia–Davis bound with the combined upper bound as D_max surrogate.
pub fn bhatia_davis_for_graph(g: &Graph) -> Result<ExactScalar> {
    let stats = g.stats();
    let e = expected_d(stats.n, stats.m)?;
    bhatia_davis_minla_upper(&e, &variance_from_stats(&stats), &upper_combined(g))
}

/// D_min ≤ s − 2·(V + (W/(2V))²)^{1/2}, where W is the third central moment
/// and s ≥ D_max. Fails when V = 0.
pub fn sharma_minla_upper(dmax_surrogate: f64, var_d: f64, w: f64) -> Result<f64> {
    if var_d <= 0.0 {
        return Err(Error::Undefined {
            what: "the third-moment D_min bound",
            reason: "V[D] = 0".into(),
        });
    }
    let skew = w / (2.0 * var_d);
    Ok(dmax_surrogate - 2.0 * (var_d + skew * skew).sqrt())
}

/// Third-moment bound with W estimated by Monte Carlo. Approximate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharmaEstimate {
    pub bound: f64,
    pub w: McEstimate,
}

pub fn sharma_minla_upper_mc(g: &Graph, replicas: u64, seed: RngSeed) -> Result<SharmaEstimate> {
    let v = crate::exact::to_f64(&variance_from_stats(&g.stats()));
    let s = crate::exact::to_f64(&upper_combined(g));
    let w = mc_central_moment(g, 3, replicas, seed)?;
    Ok(SharmaEstimate {
        bound: sharma_minla_upper(s, v, w.mean)?,
        w,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: u64,
    pub m: u64,
    pub naive_max: u128,
    pub upper_dm: ExactScalar,
    pub upper_em: u128,
    pub upper: ExactScalar,
    pub d_star: u64,
    pub f_dstar: u64,
    pub minla_lower: u128,
    pub e_d: ExactScalar,
    pub bhatia_davis_minla_upper: ExactScalar,
}

impl BoundsReport {
    pub fn from_graph(g: &Graph) -> Self {
        let stats = g.stats();
        let (n, m) = (stats.n, stats.m);
        let fits = "a simple graph fits in K_n";
        let d_star = d_star(n, m).expect(fits);
        BoundsReport {
            n,
            m,
            naive_max: naive_max(n, m),
            upper_dm: upper_dm_from_stats(&stats),
            upper_em: upper_em(n, m).expect(fits),
            upper: upper_combined(g),
            d_star,
            f_dstar: f_of_d0(n, d_star).expect(fits),
            minla_lower: minla_lower(n, m).expect(fits),
            e_d: expected_d(n, m).expect(fits),
            bhatia_davis_minla_upper: bhatia_davis_for_graph(g).expect(fits),
        }
    }

    /// minla_lower ≤ Bhatia–Davis bound ≤ E[D] and upper = min(DM, EM).
    pub fn is_consistent(&self) -> bool {
        let lower = int(self.minla_lower);
        self.upper == self.upper_dm.clone().min(int(self.upper_em))
            && lower <= self.bhatia_davis_minla_upper
            && self.bhatia_davis_minla_upper <= self.e_d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::SpecialGraph;
    use proptest::prelude::*;

    #[test]
    fn naive() {
        assert_eq!(naive_max(17, 16), 4096);
        assert_eq!(naive_max(9, 0), 0);
        assert_eq!(naive_max(4, 6), 54);
        assert_eq!(naive_max(0, 0), 0);
    }

    #[test]
    fn degree_method() {
        let (g, _) = fixture::sentence();
        assert_eq!(upper_dm(&g), int(242));
        assert_eq!(upper_dm(&Graph::special(SpecialGraph::Complete, 4).unwrap()), int(12));
        assert_eq!(upper_dm(&Graph::special(SpecialGraph::SingleEdge, 2).unwrap()), int(1));
    }

    #[test]
    fn f_and_d_star() {
        assert_eq!(f_of_d0(17, 12).unwrap(), 15);
        assert_eq!(f_of_d0(9, 1).unwrap(), 36);
        assert_eq!(f_of_d0(9, 9).unwrap(), 0);
        assert!(f_of_d0(9, 10).is_err());
        assert_eq!(d_star(17, 16).unwrap(), 12);
        assert_eq!(d_star(11, 0).unwrap(), 11);
        assert_eq!(d_star(11, 55).unwrap(), 1);
        assert_eq!(d_star(0, 0).unwrap(), 0);
        assert!(d_star(4, 7).is_err());
    }

    #[test]
    fn d_star_matches_square_root_form_and_brackets_m() {
        for n in 1..=60u64 {
            for m in 1..=choose2(n) {
                let d = d_star(n, m).unwrap();
                assert!(f_of_d0(n, d).unwrap() <= m);
                assert!(m < f_of_d0(n, d - 1).unwrap());
                let approx = (n as f64 + 0.5 - ((8 * m + 1) as f64).sqrt() / 2.0).ceil();
                let disc = 8 * m + 1;
                let root = (disc as f64).sqrt().round() as u64;
                if root * root != disc {
                    assert_eq!(d as f64, approx, "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn edges_method() {
        assert_eq!(upper_em(17, 16).unwrap(), 211);
        assert_eq!(upper_em(4, 3).unwrap(), 7);
        for n in 0..=50u64 {
            assert_eq!(upper_em(n, 0).unwrap(), 0);
            assert_eq!(upper_em(n, choose2(n)).unwrap(), complete_graph_d(n) as u128);
            for m in 0..=choose2(n) {
                assert_eq!(upper_em(n, m).unwrap(), upper_em_direct(n, m).unwrap(), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn combined_and_lower() {
        let (g, _) = fixture::sentence();
        assert_eq!(upper_combined(&g), int(211));
        assert_eq!(upper_combined(&Graph::special(SpecialGraph::Complete, 4).unwrap()), int(10));
        assert_eq!(upper_combined(&Graph::empty(6)), int(0));
        assert_eq!(minla_lower(4, 3).unwrap(), 3);
        assert_eq!(minla_lower(8, 0).unwrap(), 0);
        for n in 0..20 {
            assert_eq!(minla_lower(n, choose2(n)).unwrap(), complete_graph_d(n) as u128);
        }
    }

    #[test]
    fn bhatia_davis() {
        let (g, _) = fixture::sentence();
        assert_eq!(bhatia_davis_for_graph(&g).unwrap(), ratio(54116, 575));
        let k5 = Graph::special(SpecialGraph::Complete, 5).unwrap();
        assert_eq!(bhatia_davis_for_graph(&k5).unwrap(), int(20));
        let path = Graph::special(SpecialGraph::LinearTree, 3).unwrap();
        assert_eq!(
            bhatia_davis_minla_upper(&ratio(8, 3), &ratio(2, 9), &int(4)).unwrap(),
            ratio(5, 2)
        );
        assert!(bhatia_davis_minla_upper(&ratio(8, 3), &ratio(2, 9), &ratio(8, 3)).is_err());
        assert!(BoundsReport::from_graph(&path).is_consistent());
    }

    #[test]
    fn sharma() {
        // 3-path: V = 2/9, W = −2/27, D_max = 3, D_min = 2
        let b = sharma_minla_upper(3.0, 2.0 / 9.0, -2.0 / 27.0).unwrap();
        assert!(b >= 2.0 - 1e-12, "{b}");
        assert!(sharma_minla_upper(10.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn report() {
        let (g, _) = fixture::sentence();
        let r = BoundsReport::from_graph(&g);
        assert_eq!((r.naive_max, r.upper_em, r.d_star, r.f_dstar), (4096, 211, 12, 15));
        assert_eq!(r.upper_dm, int(242));
        assert!(r.is_consistent());
    }

    proptest! {
        #[test]
        fn em_closed_form_is_monotone(n in 2u64..200, a in 0u64..20000, b in 0u64..20000) {
            let cap = choose2(n);
            let (lo, hi) = (a.min(b) % (cap + 1), a.max(b) % (cap + 1));
            let (lo, hi) = (lo.min(hi), lo.max(hi));
            prop_assert!(upper_em(n, lo).unwrap() <= upper_em(n, hi).unwrap());
            prop_assert!(minla_lower(n, lo).unwrap() <= minla_lower(n, hi).unwrap());
        }
    }
}
