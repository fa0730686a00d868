//! Closed-form moments of D under a uniformly random linear arrangement.
//!
//! Every value is an exact rational. The second moment and the variance
//! depend on the graph only through `n`, `m` and Σk².

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{choose2, int, ratio, ExactScalar};
use crate::graph::{Graph, GraphStats, SpecialGraph};

/// E[D] = (n + 1) m / 3.
pub fn expected_d(n: u64, m: u64) -> Result<ExactScalar> {
    if m > choose2(n) {
        return Err(Error::domain(format!(
            "m = {m} exceeds C({n}, 2) = {}",
            choose2(n)
        )));
    }
    Ok(ratio((n + 1) * m, 3u32))
}

/// Number of vertices shared by two edges of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairType {
    Disjoint = 0,
    Adjacent = 1,
    Identical = 2,
}

impl PairType {
    pub const ALL: [PairType; 3] = [PairType::Disjoint, PairType::Adjacent, PairType::Identical];

    pub fn from_shared(phi: u8) -> Result<Self> {
        match phi {
            0 => Ok(PairType::Disjoint),
            1 => Ok(PairType::Adjacent),
            2 => Ok(PairType::Identical),
            _ => Err(Error::domain(format!("two edges cannot share {phi} vertices"))),
        }
    }

    pub fn shared(self) -> u8 {
        self as u8
    }

    /// Distinct endpoints involved in the pair.
    pub fn endpoints(self) -> usize {
        4 - self as usize
    }
}

/// E_φ: expected product of the lengths of two edges sharing φ vertices.
///
/// Defined only when the pair fits, i.e. `n ≥ 4 − φ`.
pub fn e_phi(n: u64, phi: PairType) -> Result<ExactScalar> {
    if (n as usize) < phi.endpoints() {
        return Err(Error::domain(format!(
            "E_{} needs n >= {}, got {n}",
            phi.shared(),
            phi.endpoints()
        )));
    }
    let n = BigInt::from(n);
    let v = match phi {
        PairType::Identical => ExactScalar::new(&n * (&n + 1), BigInt::from(6)),
        PairType::Adjacent => ExactScalar::new((&n + 1) * (7 * &n + 4), BigInt::from(60)),
        PairType::Disjoint => ExactScalar::new((&n + 1) * (5 * &n + 4), BigInt::from(45)),
    };
    Ok(v)
}

/// Ordered edge pairs classified by shared-vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FCounts {
    pub f0: u64,
    pub f1: u64,
    pub f2: u64,
}

impl FCounts {
    /// From `m` and the number `q` of independent (unordered) pairs.
    pub fn from_pairs(m: u64, q: u64) -> Self {
        let f0 = 2 * q;
        FCounts {
            f0,
            f1: m * m.saturating_sub(1) - f0,
            f2: m,
        }
    }

    pub fn get(&self, phi: PairType) -> u64 {
        match phi {
            PairType::Disjoint => self.f0,
            PairType::Adjacent => self.f1,
            PairType::Identical => self.f2,
        }
    }

    pub fn total(&self) -> u64 {
        self.f0 + self.f1 + self.f2
    }
}

pub fn f_counts(g: &Graph) -> FCounts {
    FCounts::from_pairs(g.m() as u64, g.independent_pairs().q)
}

/// E[D²] as Σ_φ f_φ·E_φ, skipping the types that have no terms.
pub fn second_moment_from_f_counts(n: u64, f: &FCounts) -> Result<ExactScalar> {
    let mut acc = ExactScalar::zero();
    for phi in PairType::ALL {
        let count = f.get(phi);
        if count > 0 {
            acc += int(count) * e_phi(n, phi)?;
        }
    }
    Ok(acc)
}

/// 180 / (n + 1) times the bracketed term shared by E[D²] and V[D], with
/// the ⟨k²⟩ term taken as (n − 4)·Σk² so that n = 0 needs no division.
fn scaled_bracket(stats: &GraphStats, square_term: BigInt) -> BigInt {
    let n = BigInt::from(stats.n);
    let sum_k2 = BigInt::from(stats.sum_k2);
    4 * square_term + (n - 4) * sum_k2
}

/// E[D²] = (n+1)/45 · [m(m(5n+4) + 2(n−1)) + (n/4 − 1)·Σk²].
pub fn second_moment_from_stats(stats: &GraphStats) -> ExactScalar {
    let n = BigInt::from(stats.n);
    let m = BigInt::from(stats.m);
    let square = &m * (&m * (5 * &n + 4) + 2 * (&n - 1));
    ExactScalar::new((&n + 1) * scaled_bracket(stats, square), BigInt::from(180))
}

/// V[D] = (n+1)/45 · [m(2(n−1) − m) + (n/4 − 1)·Σk²].
pub fn variance_from_stats(stats: &GraphStats) -> ExactScalar {
    let n = BigInt::from(stats.n);
    let m = BigInt::from(stats.m);
    let square = &m * (2 * (&n - 1) - &m);
    ExactScalar::new((&n + 1) * scaled_bracket(stats, square), BigInt::from(180))
}

pub fn second_moment_d(g: &Graph) -> ExactScalar {
    second_moment_from_stats(&g.stats())
}

pub fn variance_d(g: &Graph) -> ExactScalar {
    variance_from_stats(&g.stats())
}

/// Smallest and largest Σk² over trees on `n` vertices (linear and star trees).
pub fn tree_sum_k2_range(n: u64) -> (u64, u64) {
    match n {
        0 | 1 => (0, 0),
        _ => (4 * n - 6, n * (n - 1)),
    }
}

/// Above this size only the necessary conditions on Σk² are checked.
const REALIZABILITY_CHECK_MAX_N: u64 = 64;

/// Whether some tree on `n` vertices has degree sequence with this Σk².
///
/// Degrees of a tree are k_i = 1 + e_i where the e_i ≥ 0 form a partition
/// of n − 2, so Σk² = Σe_i² + 3n − 4. Beyond
/// `REALIZABILITY_CHECK_MAX_N` only range and parity are checked.
pub fn tree_sum_k2_is_consistent(n: u64, sum_k2: u64) -> bool {
    let (lo, hi) = tree_sum_k2_range(n);
    if sum_k2 < lo || sum_k2 > hi || sum_k2 % 2 == 1 {
        return false;
    }
    if !(2..=REALIZABILITY_CHECK_MAX_N).contains(&n) {
        return true;
    }
    let total = (n - 2) as usize;
    let target = (sum_k2 + 4 - 3 * n) as usize;
    let width = total * total + 1;
    // reach[t][s]: some partition of t has squared-part sum s
    let mut reach = vec![vec![false; width]; total + 1];
    reach[0][0] = true;
    for part in 1..=total {
        let sq = part * part;
        for t in part..=total {
            let (lo_rows, hi_rows) = reach.split_at_mut(t);
            let src = &lo_rows[t - part];
            let dst = &mut hi_rows[0];
            for s in sq..width {
                if src[s - sq] {
                    dst[s] = true;
                }
            }
        }
    }
    reach[total][target]
}

/// (E[D²], V[D]) of any tree with `n` vertices and the given Σk².
pub fn tree_moments(n: u64, sum_k2: u64) -> Result<(ExactScalar, ExactScalar)> {
    if n == 0 {
        return Err(Error::domain("a tree needs at least one vertex"));
    }
    if !tree_sum_k2_is_consistent(n, sum_k2) {
        return Err(Error::domain(format!(
            "no tree on {n} vertices has sum of squared degrees {sum_k2}"
        )));
    }
    let n_big = BigInt::from(n);
    let k2 = BigInt::from(sum_k2);
    let k2_term = (&n_big - 4) * &k2;
    let nm1_sq = (&n_big - 1) * (&n_big - 1);
    let e2 = ExactScalar::new(
        (&n_big + 1) * (4 * &nm1_sq * (5 * &n_big + 6) + &k2_term),
        BigInt::from(180),
    );
    let var = ExactScalar::new((&n_big + 1) * (4 * nm1_sq + k2_term), BigInt::from(180));
    Ok((e2, var))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialMoments {
    pub e_d: ExactScalar,
    pub e_d2: ExactScalar,
    pub var_d: ExactScalar,
}

/// Smallest `n` for which the tabulated row holds.
pub fn special_table_min_n(kind: SpecialGraph) -> u64 {
    match kind {
        SpecialGraph::Empty | SpecialGraph::Complete => 0,
        SpecialGraph::StarTree => 1,
        SpecialGraph::SingleEdge | SpecialGraph::LinearTree => 2,
    }
}

/// Tabulated moments of the special graphs, written out as their own
/// polynomials rather than through the general formula.
pub fn special_table(kind: SpecialGraph, n: u64) -> Result<SpecialMoments> {
    if n < special_table_min_n(kind) {
        return Err(Error::domain(format!(
            "the {kind} row needs n >= {}, got {n}",
            special_table_min_n(kind)
        )));
    }
    let n = BigInt::from(n);
    let q = |num: BigInt, den: i64| ExactScalar::new(num, BigInt::from(den));
    let sq1: BigInt = &n * &n - 1;
    let row = match kind {
        SpecialGraph::Empty => SpecialMoments {
            e_d: ExactScalar::zero(),
            e_d2: ExactScalar::zero(),
            var_d: ExactScalar::zero(),
        },
        SpecialGraph::SingleEdge => SpecialMoments {
            e_d: q(&n + 1, 3),
            e_d2: q(&n * (&n + 1), 6),
            var_d: q((&n + 1) * (&n - 2), 18),
        },
        SpecialGraph::LinearTree => SpecialMoments {
            e_d: q(sq1.clone(), 3),
            e_d2: q(
                (&n + 1) * (10 * &n * &n * &n - 6 * &n * &n - 25 * &n + 24),
                90,
            ),
            var_d: q((&n + 1) * (&n - 2) * (4 * &n - 7), 90),
        },
        SpecialGraph::StarTree => SpecialMoments {
            e_d: q(sq1.clone(), 3),
            e_d2: q(&sq1 * (7 * &n * &n - 8), 60),
            var_d: q(&sq1 * (&n * &n - 4), 180),
        },
        SpecialGraph::Complete => {
            let d = q(&sq1 * &n, 6);
            SpecialMoments {
                e_d2: &d * &d,
                e_d: d,
                var_d: ExactScalar::zero(),
            }
        }
    };
    Ok(row)
}

/// Hubiness h = (Σk² − Σk²(linear)) / (Σk²(star) − Σk²(linear)) for trees;
/// 0 on the linear tree and 1 on the star.
///
/// Any Σk² in the closed range between the two extremes is accepted, so
/// that sweeps can treat n⟨k²⟩ as a continuous knob.
pub fn hubiness(n: u64, sum_k2: u64) -> Result<ExactScalar> {
    if n < 3 {
        return Err(Error::domain(format!("hubiness needs n >= 3, got {n}")));
    }
    if n == 3 {
        return Err(Error::Undefined {
            what: "hubiness",
            reason: "on 3 vertices the linear tree is the star tree".into(),
        });
    }
    let (lo, hi) = tree_sum_k2_range(n);
    if sum_k2 < lo || sum_k2 > hi {
        return Err(Error::domain(format!(
            "sum of squared degrees {sum_k2} is outside the tree range [{lo}, {hi}]"
        )));
    }
    Ok(ratio(sum_k2 - lo, hi - lo))
}

/// All moment-level statistics of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentsReport {
    pub n: u64,
    pub m: u64,
    pub sum_k2: u64,
    pub q: u64,
    pub f: FCounts,
    pub e_d: ExactScalar,
    pub e_d2: ExactScalar,
    pub var_d: ExactScalar,
}

impl MomentsReport {
    pub fn from_graph(g: &Graph) -> Self {
        let stats = g.stats();
        let q = g.independent_pairs().q;
        MomentsReport {
            n: stats.n,
            m: stats.m,
            sum_k2: stats.sum_k2,
            q,
            f: FCounts::from_pairs(stats.m, q),
            e_d: expected_d(stats.n, stats.m).expect("a simple graph fits in K_n"),
            e_d2: second_moment_from_stats(&stats),
            var_d: variance_from_stats(&stats),
        }
    }

    /// ⟨k²⟩, absent for the graph with no vertices.
    pub fn mean_k2(&self) -> Option<ExactScalar> {
        (self.n > 0).then(|| ratio(self.sum_k2, self.n))
    }

    pub fn is_consistent(&self) -> bool {
        self.f.total() == self.m * self.m
            && self.f.f2 == self.m
            && self.f.f0 == 2 * self.q
            && self.var_d == &self.e_d2 - &self.e_d * &self.e_d
            && !self.var_d.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn first_moment() {
        assert_eq!(expected_d(17, 16).unwrap(), int(96));
        assert_eq!(expected_d(9, 0).unwrap(), int(0));
        assert_eq!(expected_d(3, 2).unwrap(), ratio(8, 3));
        assert!(expected_d(3, 4).is_err());
    }

    #[test]
    fn e_phi_small_cases() {
        assert_eq!(e_phi(2, PairType::Identical).unwrap(), int(1));
        assert_eq!(e_phi(3, PairType::Adjacent).unwrap(), ratio(5, 3));
        assert_eq!(e_phi(4, PairType::Disjoint).unwrap(), ratio(8, 3));
        assert!(e_phi(3, PairType::Disjoint).is_err());
        assert!(e_phi(2, PairType::Adjacent).is_err());
        assert!(e_phi(1, PairType::Identical).is_err());
        assert!(PairType::from_shared(3).is_err());
    }

    #[test]
    fn f_counts_examples() {
        let (g, _) = fixture::sentence();
        let f = f_counts(&g);
        assert_eq!((f.f0, f.f1, f.f2), (184, 56, 16));
        assert_eq!(f.total(), 256);
        let k5 = Graph::special(SpecialGraph::Complete, 5).unwrap();
        let f = f_counts(&k5);
        assert_eq!((f.f0, f.f1, f.f2), (30, 60, 10));
        let star = Graph::special(SpecialGraph::StarTree, 9).unwrap();
        assert_eq!(f_counts(&star).f0, 0);
    }

    #[test]
    fn second_moment_examples() {
        let k4 = Graph::special(SpecialGraph::Complete, 4).unwrap();
        assert_eq!(second_moment_d(&k4), int(100));
        assert_eq!(second_moment_d(&path3()), ratio(22, 3));
        let edge = Graph::new(10, [(3, 7)]).unwrap();
        assert_eq!(second_moment_d(&edge), ratio(55, 3));
    }

    #[test]
    fn variance_examples() {
        let (g, _) = fixture::sentence();
        assert_eq!(variance_d(&g), ratio(1084, 5));
        for n in 0..12 {
            let k = Graph::special(SpecialGraph::Complete, n).unwrap();
            assert!(variance_d(&k).is_zero(), "K_{n}");
        }
        assert_eq!(variance_d(&path3()), ratio(2, 9));
        assert!(variance_d(&Graph::empty(0)).is_zero());
    }

    #[test]
    fn tree_formulas() {
        assert_eq!(tree_moments(17, 88).unwrap().1, ratio(1084, 5));
        // star on 4 vertices: (n²−1)(n²−4)/180
        assert_eq!(tree_moments(4, 12).unwrap().1, int(1));
        assert_eq!(tree_moments(3, 6).unwrap().1, ratio(2, 9));
        assert_eq!(tree_moments(1, 0).unwrap(), (int(0), int(0)));
        // 18 is even and in range for n = 5 but no degree sequence reaches it
        assert!(tree_moments(5, 18).is_err());
        assert!(tree_moments(5, 15).is_err());
        assert!(tree_moments(5, 22).is_err());
        assert!(tree_moments(0, 0).is_err());
    }

    #[test]
    fn realizable_tree_sums() {
        let ok: Vec<u64> = (0..=20).filter(|&s| tree_sum_k2_is_consistent(5, s)).collect();
        assert_eq!(ok, vec![14, 16, 20]);
        assert!(tree_sum_k2_is_consistent(17, 88));
        assert!(tree_sum_k2_is_consistent(2, 2));
    }

    #[test]
    fn special_table_rows() {
        let row = special_table(SpecialGraph::StarTree, 5).unwrap();
        assert_eq!(row.e_d, int(8));
        assert_eq!(row.var_d, ratio(14, 5));
        assert!(special_table(SpecialGraph::SingleEdge, 2).unwrap().var_d.is_zero());
        assert!(special_table(SpecialGraph::Complete, 7).unwrap().var_d.is_zero());
        assert!(special_table(SpecialGraph::LinearTree, 1).is_err());
        assert!(special_table(SpecialGraph::SingleEdge, 1).is_err());
    }

    #[test]
    fn hubiness_anchors() {
        for n in 4..30u64 {
            let (lo, hi) = tree_sum_k2_range(n);
            assert!(hubiness(n, lo).unwrap().is_zero());
            assert_eq!(hubiness(n, hi).unwrap(), int(1));
        }
        assert_eq!(hubiness(17, 88).unwrap(), ratio(13, 105));
        assert!(hubiness(2, 2).is_err());
        assert!(matches!(hubiness(3, 6), Err(Error::Undefined { .. })));
        assert!(hubiness(5, 12).is_err());
    }

    #[test]
    fn report_is_consistent() {
        let (g, _) = fixture::sentence();
        let r = MomentsReport::from_graph(&g);
        assert!(r.is_consistent());
        assert_eq!(r.mean_k2(), Some(ratio(88, 17)));
        assert_eq!(r.e_d, int(96));
    }

    proptest! {
        #[test]
        fn f_sum_matches_compact_form(n in 0u64..60, frac in 0.0f64..=1.0, k2_frac in 0.0f64..=1.0) {
            // Build stats from a real graph so q is non-negative.
            let n_us = n as usize;
            let all: Vec<(usize, usize)> = (1..=n_us)
                .flat_map(|u| (u + 1..=n_us).map(move |v| (u, v)))
                .collect();
            let m = ((all.len() as f64) * frac) as usize;
            // rotate the prefix to vary Σk² for the same m
            let shift = ((all.len() as f64) * k2_frac) as usize;
            let edges: Vec<_> = all.iter().cycle().skip(shift).take(m).copied().collect();
            let g = Graph::new(n_us, edges).unwrap();
            let via_f = second_moment_from_f_counts(n, &f_counts(&g)).unwrap();
            prop_assert_eq!(via_f, second_moment_d(&g));
            let r = MomentsReport::from_graph(&g);
            prop_assert!(r.is_consistent());
        }

        #[test]
        fn variance_monotone_in_sum_k2(n in 0u64..40, m in 0u64..50, k2 in 0u64..400) {
            let a = variance_from_stats(&GraphStats { n, m, sum_k2: k2 });
            let b = variance_from_stats(&GraphStats { n, m, sum_k2: k2 + 1 });
            if n >= 4 {
                prop_assert!(b >= a);
            } else {
                prop_assert!(b <= a);
            }
        }
    }
}
