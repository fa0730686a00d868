//! How unusual is an observed D under random arrangements?
//!
//! z-scores are kept as an exact square plus a sign so that the
//! distribution-free tail bounds derived from them stay exact rationals.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, ratio, to_f64, ExactScalar};
use crate::graph::{Graph, GraphStats};
use crate::moments::{expected_d, variance_from_stats};
use crate::montecarlo::{random_arrangement_d, replicate, McEstimate, RngSeed, RunningMoments};

/// A real number stored as its exact square and its sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedRoot {
    square: ExactScalar,
    sign: Ordering,
}

impl SignedRoot {
    /// The value `x` itself, for rational `x`.
    pub fn from_rational(x: &ExactScalar) -> Self {
        SignedRoot {
            square: x * x,
            sign: x.cmp(&ExactScalar::zero()),
        }
    }

    /// sign·√square; `square` must be non-negative.
    pub fn new(square: ExactScalar, sign: Ordering) -> Result<Self> {
        if square.is_negative() {
            return Err(Error::domain("a square cannot be negative"));
        }
        let sign = if square.is_zero() { Ordering::Equal } else { sign };
        Ok(SignedRoot { square, sign })
    }

    pub fn square(&self) -> &ExactScalar {
        &self.square
    }

    pub fn sign(&self) -> Ordering {
        self.sign
    }

    pub fn is_positive(&self) -> bool {
        self.sign == Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        let mag = to_f64(&self.square).sqrt();
        match self.sign {
            Ordering::Less => -mag,
            Ordering::Equal => 0.0,
            Ordering::Greater => mag,
        }
    }
}

impl std::ops::Neg for SignedRoot {
    type Output = SignedRoot;

    fn neg(self) -> SignedRoot {
        SignedRoot {
            square: self.square,
            sign: self.sign.reverse(),
        }
    }
}

/// z = (D − E[D]) / √V[D].
pub fn zscore_from_stats(stats: &GraphStats, d_observed: u64) -> Result<SignedRoot> {
    let v = variance_from_stats(stats);
    if v.is_zero() {
        return Err(Error::Undefined {
            what: "z-score",
            reason: "V[D] = 0, D is the same under every arrangement".into(),
        });
    }
    let diff = int(d_observed) - expected_d(stats.n, stats.m)?;
    SignedRoot::new(&diff * &diff / v, diff.cmp(&ExactScalar::zero()))
}

pub fn zscore(g: &Graph, d_observed: u64) -> Result<SignedRoot> {
    zscore_from_stats(&g.stats(), d_observed)
}

/// One-sided Chebyshev bound P(D ≤ E − c√V) ≤ 1/(1 + c²); vacuous (1) when
/// c ≤ 0.
pub fn cantelli_bound(c_star: &SignedRoot) -> ExactScalar {
    if !c_star.is_positive() {
        return ExactScalar::one();
    }
    (int(1) + c_star.square()).recip()
}

/// Tail bound for a symmetric unimodal distribution: 2/(9c²) when
/// c ≥ 2/3, otherwise 1/2; vacuous (1) when c ≤ 0.
pub fn unimodal_bound(c_star: &SignedRoot) -> ExactScalar {
    if !c_star.is_positive() {
        return ExactScalar::one();
    }
    if *c_star.square() >= ratio(4, 9) {
        ratio(2, 9) / c_star.square()
    } else {
        ratio(1, 2)
    }
}

/// Share of `replicas` random arrangements with D ≤ `d_observed`; with
/// `smoothing` the estimate is (k + 1)/(R + 1).
pub fn mc_pvalue(g: &Graph, d_observed: u64, replicas: u64, seed: RngSeed, smoothing: bool) -> Result<f64> {
    if replicas == 0 {
        return Err(Error::domain("a Monte Carlo p-value needs at least one replica"));
    }
    let mut hits = 0u64;
    replicate(
        replicas,
        seed,
        |rng| random_arrangement_d(g, rng) <= d_observed,
        |hit| hits += hit as u64,
    );
    Ok(if smoothing {
        (hits + 1) as f64 / (replicas + 1) as f64
    } else {
        hits as f64 / replicas as f64
    })
}

/// Central moment E[(D − E[D])^order] of D under random arrangements,
/// estimated as the sample mean of (D − E[D])^order about the exact mean.
pub fn mc_central_moment(g: &Graph, order: u32, replicas: u64, seed: RngSeed) -> Result<McEstimate> {
    if !(2..=4).contains(&order) {
        return Err(Error::domain(format!("central moment order {order} is not one of 2, 3, 4")));
    }
    if replicas < order as u64 {
        return Err(Error::domain(format!(
            "order {order} needs at least {order} replicas, got {replicas}"
        )));
    }
    let mean = to_f64(&expected_d(g.n() as u64, g.m() as u64)?);
    let mut acc = RunningMoments::new();
    replicate(
        replicas,
        seed,
        |rng| (random_arrangement_d(g, rng) as f64 - mean).powi(order as i32),
        |x| acc.push(x),
    );
    Ok(McEstimate {
        mean: acc.mean(),
        stderr: acc.stderr_of_mean(),
        replicas,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceReport {
    pub d_observed: u64,
    pub e_d: ExactScalar,
    pub var_d: ExactScalar,
    pub z: SignedRoot,
    pub c_star: SignedRoot,
    pub cantelli_bound: ExactScalar,
    /// Valid only if D under random arrangements is symmetric and unimodal.
    pub unimodal_bound: ExactScalar,
    pub mc_p: Option<f64>,
    pub mc_replicas: u64,
}

/// Monte Carlo settings for a p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PValuePlan {
    pub replicas: u64,
    pub seed: RngSeed,
    pub smoothing: bool,
}

impl SignificanceReport {
    pub fn new(g: &Graph, d_observed: u64, mc: Option<PValuePlan>) -> Result<Self> {
        let stats = g.stats();
        let z = zscore_from_stats(&stats, d_observed)?;
        let c_star = -z.clone();
        let mc_p = mc
            .map(|p| mc_pvalue(g, d_observed, p.replicas, p.seed, p.smoothing))
            .transpose()?;
        Ok(SignificanceReport {
            d_observed,
            e_d: expected_d(stats.n, stats.m)?,
            var_d: variance_from_stats(&stats),
            cantelli_bound: cantelli_bound(&c_star),
            unimodal_bound: unimodal_bound(&c_star),
            z,
            c_star,
            mc_p,
            mc_replicas: mc.map_or(0, |p| p.replicas),
        })
    }
}

/// Divisor of the summed z-scores in the collection mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZNormalization {
    /// Total number of edges M.
    #[default]
    Edges,
    /// Number of networks T.
    Networks,
}

/// What to do with a member whose z-score is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UndefinedPolicy {
    #[default]
    Skip,
    Fatal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectionStats {
    pub t: u64,
    pub n_total: u64,
    pub m_total: u64,
    /// Σ D / M.
    pub mean_d: ExactScalar,
    /// Σ z / M (or / T); absent when no member has a defined z.
    pub mean_z: Option<f64>,
    /// Indexes of members left out of `mean_z` because V = 0.
    pub skipped: Vec<usize>,
}

/// Mean edge length and mean z-score over a collection of (graph, D) pairs.
///
/// Skipped members are excluded from both the z-sum and its divisor.
pub fn collection_stats(
    items: &[(Graph, u64)],
    normalization: ZNormalization,
    policy: UndefinedPolicy,
) -> Result<CollectionStats> {
    let n_total: u64 = items.iter().map(|(g, _)| g.n() as u64).sum();
    let m_total: u64 = items.iter().map(|(g, _)| g.m() as u64).sum();
    if m_total == 0 {
        return Err(Error::Undefined {
            what: "mean edge length",
            reason: "the collection has no edges".into(),
        });
    }
    let d_total: u64 = items.iter().map(|(_, d)| d).sum();

    let mut skipped = Vec::new();
    let (mut z_sum, mut z_edges, mut z_count) = (0.0, 0u64, 0u64);
    for (i, (g, d)) in items.iter().enumerate() {
        match zscore(g, *d) {
            Ok(z) => {
                z_sum += z.to_f64();
                z_edges += g.m() as u64;
                z_count += 1;
            }
            Err(e @ Error::Undefined { .. }) => match policy {
                UndefinedPolicy::Skip => skipped.push(i),
                UndefinedPolicy::Fatal => return Err(e),
            },
            Err(e) => return Err(e),
        }
    }
    let divisor = match normalization {
        ZNormalization::Edges => z_edges,
        ZNormalization::Networks => z_count,
    };
    Ok(CollectionStats {
        t: items.len() as u64,
        n_total,
        m_total,
        mean_d: ratio(d_total, m_total),
        mean_z: (divisor > 0).then(|| z_sum / divisor as f64),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::SpecialGraph;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::special(SpecialGraph::LinearTree, 3).unwrap()
    }

    #[test]
    fn fixture_significance() {
        let (g, a) = fixture::sentence();
        let d = g.sum_edge_lengths(&a).unwrap();
        let r = SignificanceReport::new(&g, d, None).unwrap();
        assert_eq!(*r.z.square(), ratio(3920, 271));
        assert_eq!(r.z.sign(), Ordering::Less);
        assert!((r.z.to_f64() + 3.803).abs() < 5e-4);
        assert_eq!(r.cantelli_bound, ratio(271, 4191));
        assert_eq!(r.unimodal_bound, ratio(271, 17640));
        assert!(r.c_star.is_positive());
    }

    #[test]
    fn zscore_edge_cases() {
        let g = path3();
        assert_eq!(zscore(&g, 3).unwrap().sign(), Ordering::Greater);
        let k4 = Graph::special(SpecialGraph::Complete, 4).unwrap();
        assert!(matches!(zscore(&k4, 10), Err(Error::Undefined { .. })));
        // D = E[D]
        let s5 = Graph::special(SpecialGraph::StarTree, 5).unwrap();
        let z = zscore(&s5, 8).unwrap();
        assert!(z.square().is_zero());
        assert_eq!(z.to_f64(), 0.0);
    }

    #[test]
    fn tail_bounds() {
        let one = SignedRoot::from_rational(&int(1));
        assert_eq!(cantelli_bound(&one), ratio(1, 2));
        assert_eq!(unimodal_bound(&one), ratio(2, 9));
        let zero = SignedRoot::from_rational(&int(0));
        assert_eq!(cantelli_bound(&zero), int(1));
        assert_eq!(unimodal_bound(&zero), int(1));
        let neg = SignedRoot::from_rational(&int(-2));
        assert_eq!(cantelli_bound(&neg), int(1));
        let two_thirds = SignedRoot::from_rational(&ratio(2, 3));
        assert_eq!(unimodal_bound(&two_thirds), ratio(1, 2));
        let below = SignedRoot::from_rational(&ratio(1, 2));
        assert_eq!(unimodal_bound(&below), ratio(1, 2));
    }

    proptest! {
        #[test]
        fn z_square_times_v_is_squared_deviation(seed in 0u64..500, d in 0u64..200) {
            let g = crate::ensembles::gen_gnm(9, 14, &mut RngSeed::new(seed).replica(0)).unwrap();
            let stats = g.stats();
            let z = zscore_from_stats(&stats, d).unwrap();
            let dev = int(d) - expected_d(9, 14).unwrap();
            prop_assert_eq!(z.square() * variance_from_stats(&stats), &dev * &dev);
        }

        #[test]
        fn bound_ordering_per_case(p in 1i64..400, q in 1i64..400) {
            let c = SignedRoot::from_rational(&ratio(p, q));
            let c2 = c.square().clone();
            let cant = cantelli_bound(&c);
            let uni = unimodal_bound(&c);
            prop_assert!(cant > ExactScalar::zero() && cant <= int(1));
            prop_assert!(uni > ExactScalar::zero() && uni <= int(1));
            // 2/(9c²) < 1/(1+c²) iff c² > 2/7, which holds on the whole
            // 2/(9c²) branch; on the flat branch 1/2 < 9/13 ≤ 1/(1+c²).
            if c2 >= ratio(4, 9) {
                prop_assert_eq!(uni.clone(), ratio(2, 9) / &c2);
            } else {
                prop_assert_eq!(uni.clone(), ratio(1, 2));
            }
            prop_assert!(uni < cant);
        }
    }

    #[test]
    fn pvalues() {
        let k4 = Graph::special(SpecialGraph::Complete, 4).unwrap();
        assert_eq!(mc_pvalue(&k4, 10, 100, RngSeed::new(1), false).unwrap(), 1.0);
        let g = path3();
        assert_eq!(mc_pvalue(&g, 1, 100, RngSeed::new(1), false).unwrap(), 0.0);
        assert!((mc_pvalue(&g, 1, 100, RngSeed::new(1), true).unwrap() - 1.0 / 101.0).abs() < 1e-15);
        let p = mc_pvalue(&g, 2, 100_000, RngSeed::new(11), false).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 0.01, "{p}");
        assert!(mc_pvalue(&g, 2, 0, RngSeed::new(1), false).is_err());
        assert_eq!(
            mc_pvalue(&g, 2, 5000, RngSeed::new(4), false).unwrap(),
            mc_pvalue(&g, 2, 5000, RngSeed::new(4), false).unwrap()
        );
    }

    #[test]
    fn central_moments() {
        let k5 = Graph::special(SpecialGraph::Complete, 5).unwrap();
        for order in 2..=4 {
            assert_eq!(mc_central_moment(&k5, order, 50, RngSeed::new(3)).unwrap().mean, 0.0);
        }
        let g = path3();
        let v = mc_central_moment(&g, 2, 100_000, RngSeed::new(5)).unwrap();
        assert!((v.mean - 2.0 / 9.0).abs() < 3.0 * v.stderr, "{v:?}");
        let w = mc_central_moment(&g, 3, 100_000, RngSeed::new(6)).unwrap();
        assert!((w.mean + 2.0 / 27.0).abs() < 3.0 * w.stderr, "{w:?}");
        assert!(mc_central_moment(&g, 5, 100, RngSeed::new(1)).is_err());
        assert!(mc_central_moment(&g, 3, 2, RngSeed::new(1)).is_err());
    }

    #[test]
    fn collections() {
        let (g, a) = fixture::sentence();
        let d = g.sum_edge_lengths(&a).unwrap();
        let one = collection_stats(&[(g.clone(), d)], ZNormalization::Edges, UndefinedPolicy::Skip).unwrap();
        assert_eq!(one.mean_d, ratio(5, 2));
        assert!((one.mean_z.unwrap() + 3.803 / 16.0).abs() < 1e-3);
        let two = collection_stats(&[(g.clone(), d), (g.clone(), d)], ZNormalization::Edges, UndefinedPolicy::Skip)
            .unwrap();
        assert_eq!(two.mean_d, ratio(5, 2));
        assert_eq!((two.t, two.n_total, two.m_total), (2, 34, 32));
        let by_t = collection_stats(&[(g.clone(), d)], ZNormalization::Networks, UndefinedPolicy::Skip).unwrap();
        assert!((by_t.mean_z.unwrap() + 3.803).abs() < 1e-3);

        let k3 = Graph::special(SpecialGraph::Complete, 3).unwrap();
        let mixed = [(g.clone(), d), (k3, 4)];
        let skipped = collection_stats(&mixed, ZNormalization::Edges, UndefinedPolicy::Skip).unwrap();
        assert_eq!(skipped.skipped, vec![1]);
        assert_eq!(skipped.mean_z, one.mean_z);
        assert!(collection_stats(&mixed, ZNormalization::Edges, UndefinedPolicy::Fatal).is_err());
        assert!(collection_stats(&[(Graph::empty(3), 0)], ZNormalization::Edges, UndefinedPolicy::Skip).is_err());
    }
}
