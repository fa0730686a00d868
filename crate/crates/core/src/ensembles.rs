//! Arrangement statistics averaged over random-graph ensembles: the
//! fixed-edge-count ensemble G(n, m), the independent-edge ensemble G(n, π)
//! and uniformly random labelled trees.
//!
//! Exact expectations use arbitrary-precision binomials; approximations and
//! Monte Carlo estimates sit next to them in an [`EnsembleCurve`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{binomial, choose2, int, ratio, ExactScalar};
use crate::graph::{Graph, GraphStats};
use crate::moments::expected_d;
use crate::montecarlo::{random_positions, replicate_chunked, McEstimate, RngSeed, RunningMoments};

fn check_edge_count(n: u64, m: u64) -> Result<()> {
    if m > choose2(n) {
        return Err(Error::domain(format!(
            "m = {m} exceeds C({n}, 2) = {}",
            choose2(n)
        )));
    }
    Ok(())
}

/// Probability that a given vertex of a G(n, m) graph has degree `k`:
/// C(n−1, k)·C(C(n−1, 2), m − k) / C(C(n, 2), m).
pub fn gnm_degree_pmf(n: u64, m: u64, k: u64) -> Result<ExactScalar> {
    check_edge_count(n, m)?;
    if n == 0 || k > n - 1 {
        return Err(Error::domain(format!(
            "degree {k} is impossible on {n} vertices"
        )));
    }
    if k > m {
        return Ok(ExactScalar::zero());
    }
    let num = binomial(n - 1, k) * binomial(choose2(n - 1), m - k);
    Ok(ExactScalar::new(num, binomial(choose2(n), m)))
}

/// E[⟨k²⟩] over G(n, m), by summing the exact degree distribution.
pub fn gnm_expected_k2(n: u64, m: u64) -> Result<ExactScalar> {
    check_edge_count(n, m)?;
    if n == 0 {
        return Ok(ExactScalar::zero());
    }
    let mut acc = ExactScalar::zero();
    for k in 1..=m.min(n - 1) {
        acc += gnm_degree_pmf(n, m, k)? * int(k * k);
    }
    Ok(acc)
}

/// (n+1)/45·[m(2(n−1) − m) + (n/4 − 1)·n·k2] for an (expected) ⟨k²⟩.
fn variance_with_k2(n: u64, m: u64, mean_k2: &ExactScalar) -> ExactScalar {
    let nb = BigInt::from(n);
    let mb = BigInt::from(m);
    let square = int(&mb * (2 * (&nb - 1) - &mb));
    let k2_term = ratio(&nb - 4, 4) * int(nb.clone()) * mean_k2;
    ratio(&nb + 1, 45) * (square + k2_term)
}

/// E over G(n, m) of the arrangement variance of D, using the exact ⟨k²⟩.
pub fn gnm_expected_variance_exact(n: u64, m: u64) -> Result<ExactScalar> {
    Ok(variance_with_k2(n, m, &gnm_expected_k2(n, m)?))
}

/// E over G(n, m) of the arrangement second moment of D (E[D] is fixed by n, m).
pub fn gnm_expected_second_moment_exact(n: u64, m: u64) -> Result<ExactScalar> {
    let e = expected_d(n, m)?;
    Ok(gnm_expected_variance_exact(n, m)? + &e * &e)
}

/// Density of links m / C(n, 2); zero when no edge fits.
pub fn density(n: u64, m: u64) -> ExactScalar {
    match choose2(n) {
        0 => ExactScalar::zero(),
        cap => ratio(m, cap),
    }
}

/// Binomial-degree approximation ⟨k²⟩ ≈ (n−1)δ((n−2)δ + 1) with δ = m / C(n, 2).
pub fn binomial_k2(n: u64, m: u64) -> ExactScalar {
    if n < 2 {
        return ExactScalar::zero();
    }
    let delta = density(n, m);
    int(n - 1) * &delta * (int(n - 2) * &delta + int(1))
}

/// Closed form of the expected variance under the binomial approximation:
/// (n+1)m/45 · [(8 − 5n)m / (n(n−1)) + 2(5n/4 − 2)].
pub fn gnm_expected_variance_binomial(n: u64, m: u64) -> Result<ExactScalar> {
    check_edge_count(n, m)?;
    if n < 2 {
        return Ok(ExactScalar::zero());
    }
    let nb = BigInt::from(n);
    let mb = BigInt::from(m);
    let slope = ExactScalar::new(8 - 5 * &nb, &nb * (&nb - 1));
    let bracket = slope * int(mb.clone()) + int(2) * (ratio(5 * &nb, 4) - int(2));
    Ok(ratio((&nb + 1) * mb, 45) * bracket)
}

/// Expected second moment under the binomial approximation:
/// m(n+1)/90 · [2m(5n(n²−2) + 8) / (n(n−1)) + 5n − 8].
pub fn gnm_expected_second_moment_binomial(n: u64, m: u64) -> Result<ExactScalar> {
    check_edge_count(n, m)?;
    if n < 2 {
        return Ok(ExactScalar::zero());
    }
    let nb = BigInt::from(n);
    let mb = BigInt::from(m);
    let lead = ExactScalar::new(
        2 * &mb * (5 * &nb * (&nb * &nb - 2) + 8),
        &nb * (&nb - 1),
    );
    Ok(ratio(&mb * (&nb + 1), 90) * (lead + int(5 * &nb - 8)))
}

/// Poisson approximation ⟨k²⟩ ≈ λ(1 + λ) with λ = 2m/n.
pub fn poisson_k2(n: u64, m: u64) -> Result<ExactScalar> {
    if n == 0 {
        return Err(Error::domain("the Poisson approximation needs n >= 1"));
    }
    let lambda = ratio(2 * m, n);
    Ok(&lambda * (int(1) + &lambda))
}

/// Expected variance with the Poisson ⟨k²⟩ substituted.
pub fn gnm_expected_variance_poisson(n: u64, m: u64) -> Result<ExactScalar> {
    check_edge_count(n, m)?;
    if n == 0 {
        return Ok(ExactScalar::zero());
    }
    Ok(variance_with_k2(n, m, &poisson_k2(n, m)?))
}

/// Location n(n−1)/4 of the maximum of the binomial-approximation curve.
pub fn gnm_mstar(n: u64) -> Result<ExactScalar> {
    if n < 2 {
        return Err(Error::domain(format!("m* needs n >= 2, got {n}")));
    }
    Ok(ratio(n * (n - 1), 4))
}

/// All C(n, 2) vertex pairs in lexicographic order.
pub fn complete_edges(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect()
}

/// Uniform G(n, m) sample: shuffle the complete edge list and keep the
/// first `m` pairs.
pub fn gen_gnm<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    check_edge_count(n as u64, m as u64)?;
    let mut pairs = complete_edges(n);
    pairs.shuffle(rng);
    pairs.truncate(m);
    Graph::new(n, pairs)
}

/// G(n, π) sample: every pair is linked independently with probability `pi`.
pub fn gen_gnp<R: Rng + ?Sized>(n: usize, pi: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&pi) {
        return Err(Error::domain(format!("probability {pi} is outside [0, 1]")));
    }
    let edges: Vec<_> = complete_edges(n)
        .into_iter()
        .filter(|_| rng.random_bool(pi))
        .collect();
    Graph::new(n, edges)
}

/// E over G(n, π) of the arrangement variance of D.
///
/// The variance is a polynomial in m and Σk², whose G(n, π) expectations are
/// E[m] = Nπ, E[m²] = Nπ(1−π) + N²π², E[Σk²] = n(n−1)π((n−2)π + 1).
pub fn gnp_expected_variance(n: u64, pi: &ExactScalar) -> Result<ExactScalar> {
    if *pi < ExactScalar::zero() || *pi > ExactScalar::one() {
        return Err(Error::domain(format!("probability {pi} is outside [0, 1]")));
    }
    let nb = int(n);
    let cap = int(choose2(n));
    let one = int(1);
    let e_m = &cap * pi;
    let e_m2 = &cap * pi * (&one - pi) + &e_m * &e_m;
    let e_k2 = if n < 2 {
        ExactScalar::zero()
    } else {
        int(n * (n - 1)) * pi * (int(n - 2) * pi + &one)
    };
    let bracket = int(2) * (&nb - &one) * e_m - e_m2 + (&nb - int(4)) / int(4) * e_k2;
    Ok((&nb + &one) / int(45) * bracket)
}

/// Labelled tree on `n = code.len() + 2` vertices encoded by a Prüfer code
/// over `1..=n`.
pub fn prufer_decode(code: &[usize], n: usize) -> Result<Graph> {
    if n < 2 || code.len() != n - 2 {
        return Err(Error::domain(format!(
            "a Prüfer code for {n} vertices has length {}, got {}",
            n.saturating_sub(2),
            code.len()
        )));
    }
    let mut degree = vec![1usize; n + 1];
    for &a in code {
        if a == 0 || a > n {
            return Err(Error::domain(format!("Prüfer symbol {a} outside 1..={n}")));
        }
        degree[a] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (1..=n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in code {
        let Reverse(leaf) = leaves.pop().expect("a Prüfer code always leaves a leaf");
        edges.push((leaf, a));
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.push(Reverse(a));
        }
    }
    let Reverse(u) = leaves.pop().expect("two vertices remain");
    let Reverse(v) = leaves.pop().expect("two vertices remain");
    edges.push((u, v));
    Graph::new(n, edges)
}

/// Uniformly random labelled tree via a uniformly random Prüfer code.
pub fn gen_random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    match n {
        0 => Err(Error::domain("a tree needs at least one vertex")),
        1 => Ok(Graph::empty(1)),
        _ => {
            let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
            prufer_decode(&code, n)
        }
    }
}

fn check_tree_size(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("a tree needs at least one vertex"));
    }
    Ok(())
}

/// E[⟨k²⟩] over uniformly random labelled trees, (1 − 1/n)(5 − 6/n).
pub fn rlt_expected_k2(n: u64) -> Result<ExactScalar> {
    check_tree_size(n)?;
    Ok(ratio(n - 1, n) * ratio(5 * n as i64 - 6, n))
}

/// Expected variance of D over random labelled trees, obtained by putting
/// the expected ⟨k²⟩ into the tree variance formula. Simplifies to
/// (n+1)(n−1)(n−2)(3n−4) / (60n).
pub fn rlt_expected_variance(n: u64) -> Result<ExactScalar> {
    let k2 = rlt_expected_k2(n)?;
    let nb = int(n);
    let one = int(1);
    let nm1 = &nb - &one;
    Ok((&nb + &one) / int(45) * (&nm1 * &nm1 + (&nb - int(4)) / int(4) * &nb * k2))
}

/// The polynomial (n+1)(n−1)(13n² − 54n + 48)/(360n) that circulates as the
/// expected variance over random labelled trees. It disagrees with
/// exhaustive enumeration (5/12 instead of 1 at n = 4) and is kept only for
/// diagnostics.
pub fn rlt_expected_variance_printed(n: u64) -> Result<ExactScalar> {
    check_tree_size(n)?;
    let nb = BigInt::from(n);
    Ok(ExactScalar::new(
        (&nb + 1) * (&nb - 1) * (13 * &nb * &nb - 54 * &nb + 48),
        360 * nb,
    ))
}

/// Expected second moment of D over random labelled trees,
/// (n+2)(n+1)(n−1)(4n−3)(5n−4) / (180n).
pub fn rlt_expected_second_moment(n: u64) -> Result<ExactScalar> {
    check_tree_size(n)?;
    let nb = BigInt::from(n);
    Ok(ExactScalar::new(
        (&nb + 2) * (&nb + 1) * (&nb - 1) * (4 * &nb - 3) * (5 * &nb - 4),
        180 * nb,
    ))
}

/// What a curve reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Variance,
    SecondMoment,
}

/// Approximate column for G(n, m) curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Approximation {
    None,
    Binomial,
    Poisson,
}

/// Monte Carlo estimator used for a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum McStatistic {
    /// Mean over sampled graphs of the closed-form arrangement variance.
    MeanGraphVariance,
    /// Sample variance of D over joint (graph, arrangement) draws. Since
    /// E[D] is fixed by n and m, this targets the expected variance.
    SampleVariance,
    /// Mean of D² over joint (graph, arrangement) draws.
    MeanSquare,
}

impl McStatistic {
    fn min_replicas(self) -> u64 {
        match self {
            McStatistic::SampleVariance => 2,
            _ => 1,
        }
    }

    fn estimate(self, acc: &RunningMoments) -> McEstimate {
        let (mean, stderr) = match self {
            McStatistic::SampleVariance => (acc.sample_variance(), acc.stderr_of_variance()),
            _ => (acc.mean(), acc.stderr_of_mean()),
        };
        McEstimate {
            mean,
            stderr,
            replicas: acc.count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McPlan {
    pub statistic: McStatistic,
    pub replicas: u64,
    pub seed: RngSeed,
}

impl McPlan {
    fn validate(&self, quantity: Quantity) -> Result<()> {
        let ok = matches!(
            (quantity, self.statistic),
            (Quantity::Variance, McStatistic::MeanGraphVariance | McStatistic::SampleVariance)
                | (Quantity::SecondMoment, McStatistic::MeanSquare)
        );
        if !ok {
            return Err(Error::domain(format!(
                "{:?} does not estimate the {:?}",
                self.statistic, quantity
            )));
        }
        if self.replicas < self.statistic.min_replicas() {
            return Err(Error::domain(format!(
                "{:?} needs at least {} replicas, got {}",
                self.statistic,
                self.statistic.min_replicas(),
                self.replicas
            )));
        }
        Ok(())
    }
}

/// Which ensemble family a curve sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnsembleSpec {
    /// G(n, m) with n fixed, swept over edge counts.
    Gnm { n: u64, ms: Vec<u64> },
    /// Random labelled trees swept over sizes.
    RandomLabelledTree { ns: Vec<u64> },
}

impl EnsembleSpec {
    /// Every edge count from 0 to C(n, 2).
    pub fn gnm_full(n: u64) -> Self {
        EnsembleSpec::Gnm {
            n,
            ms: (0..=choose2(n)).collect(),
        }
    }

    /// Roughly `per_decade` sizes per decade from `lo` to `hi`, deduplicated.
    pub fn tree_log_grid(lo: u64, hi: u64, per_decade: u32) -> Self {
        let mut ns = Vec::new();
        let (llo, lhi) = ((lo.max(1) as f64).log10(), (hi.max(1) as f64).log10());
        let steps = ((lhi - llo) * per_decade as f64).ceil().max(0.0) as u64;
        for i in 0..=steps {
            let x = llo + (lhi - llo) * i as f64 / steps.max(1) as f64;
            let n = 10f64.powf(x).round() as u64;
            if ns.last() != Some(&n) {
                ns.push(n);
            }
        }
        EnsembleSpec::RandomLabelledTree { ns }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    /// m for G(n, m) sweeps, n for tree sweeps.
    pub parameter: u64,
    pub n: u64,
    pub m: u64,
    pub exact: ExactScalar,
    pub approx: Option<ExactScalar>,
    pub mc: Option<McEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleCurve {
    pub spec: EnsembleSpec,
    pub quantity: Quantity,
    pub approximation: Approximation,
    pub rows: Vec<CurveRow>,
}

/// Bytes of per-replica samples held in memory at once.
const MC_BATCH_BUDGET: usize = 1 << 24;

/// Exact curve, optional approximation and optional Monte Carlo estimate
/// for every point of the sweep. Rows come out sorted by parameter.
pub fn mc_curve(
    spec: &EnsembleSpec,
    quantity: Quantity,
    approximation: Approximation,
    mc: Option<McPlan>,
) -> Result<EnsembleCurve> {
    if let Some(plan) = &mc {
        plan.validate(quantity)?;
    }
    let mut rows = match spec {
        EnsembleSpec::Gnm { n, ms } => gnm_rows(*n, ms, quantity, approximation, mc)?,
        EnsembleSpec::RandomLabelledTree { ns } => tree_rows(ns, quantity, mc)?,
    };
    rows.sort_by_key(|r| r.parameter);
    Ok(EnsembleCurve {
        spec: spec.clone(),
        quantity,
        approximation,
        rows,
    })
}

fn gnm_rows(
    n: u64,
    ms: &[u64],
    quantity: Quantity,
    approximation: Approximation,
    mc: Option<McPlan>,
) -> Result<Vec<CurveRow>> {
    let mut ms = ms.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut rows = Vec::with_capacity(ms.len());
    for &m in &ms {
        let exact = match quantity {
            Quantity::Variance => gnm_expected_variance_exact(n, m)?,
            Quantity::SecondMoment => gnm_expected_second_moment_exact(n, m)?,
        };
        let approx = match (approximation, quantity) {
            (Approximation::None, _) => None,
            (Approximation::Binomial, Quantity::Variance) => {
                Some(gnm_expected_variance_binomial(n, m)?)
            }
            (Approximation::Binomial, Quantity::SecondMoment) => {
                Some(gnm_expected_second_moment_binomial(n, m)?)
            }
            (Approximation::Poisson, q) => {
                let v = gnm_expected_variance_poisson(n, m)?;
                Some(match q {
                    Quantity::Variance => v,
                    Quantity::SecondMoment => {
                        let e = expected_d(n, m)?;
                        v + &e * &e
                    }
                })
            }
        };
        rows.push(CurveRow {
            parameter: m,
            n,
            m,
            exact,
            approx,
            mc: None,
        });
    }
    if let Some(plan) = mc {
        let estimates = gnm_monte_carlo(n as usize, &ms, plan);
        for (row, est) in rows.iter_mut().zip(estimates) {
            row.mc = Some(est);
        }
    }
    Ok(rows)
}

/// One shuffle of the complete edge list per replica serves every m: the
/// first m pairs of the shuffled list are a uniform G(n, m) graph.
fn gnm_monte_carlo(n: usize, ms: &[u64], plan: McPlan) -> Vec<McEstimate> {
    let pairs = complete_edges(n);
    let mut accs = vec![RunningMoments::new(); ms.len()];
    let chunk = (MC_BATCH_BUDGET / (8 * ms.len().max(1))).max(1);
    let statistic = plan.statistic;
    let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
        let mut order = pairs.clone();
        order.shuffle(rng);
        let positions = random_positions(n, rng);
        let mut degrees = vec![0u64; n];
        let mut sum_k2 = 0u64;
        let mut d = 0u64;
        let mut out = Vec::with_capacity(ms.len());
        let mut next = 0;
        for (added, &(u, v)) in std::iter::once(&(0, 0)).chain(order.iter()).enumerate() {
            if added > 0 {
                for w in [u, v] {
                    // (k+1)² − k² = 2k + 1
                    sum_k2 += 2 * degrees[w - 1] + 1;
                    degrees[w - 1] += 1;
                }
                d += positions[u - 1].abs_diff(positions[v - 1]) as u64;
            }
            while next < ms.len() && ms[next] == added as u64 {
                let stats = GraphStats {
                    n: n as u64,
                    m: added as u64,
                    sum_k2,
                };
                out.push(sample_value(statistic, &stats, d));
                next += 1;
            }
            if next == ms.len() {
                break;
            }
        }
        out
    };
    replicate_chunked(plan.replicas, plan.seed, chunk, sample, |values: Vec<f64>| {
        for (acc, x) in accs.iter_mut().zip(values) {
            acc.push(x);
        }
    });
    accs.iter().map(|a| statistic.estimate(a)).collect()
}

/// 180·V is an integer, so the per-graph variance is computed exactly
/// before conversion.
fn graph_variance_f64(stats: &GraphStats) -> f64 {
    let n = stats.n as i128;
    let m = stats.m as i128;
    let k2 = stats.sum_k2 as i128;
    let scaled = (n + 1) * (4 * m * (2 * (n - 1) - m) + (n - 4) * k2);
    scaled as f64 / 180.0
}

fn sample_value(statistic: McStatistic, stats: &GraphStats, d: u64) -> f64 {
    match statistic {
        McStatistic::MeanGraphVariance => graph_variance_f64(stats),
        McStatistic::SampleVariance => d as f64,
        McStatistic::MeanSquare => (d as f64) * (d as f64),
    }
}

fn tree_rows(ns: &[u64], quantity: Quantity, mc: Option<McPlan>) -> Result<Vec<CurveRow>> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.iter()
        .map(|&n| {
            let exact = match quantity {
                Quantity::Variance => rlt_expected_variance(n)?,
                Quantity::SecondMoment => rlt_expected_second_moment(n)?,
            };
            let mc = mc.map(|plan| tree_monte_carlo(n as usize, plan));
            Ok(CurveRow {
                parameter: n,
                n,
                m: n - 1,
                exact,
                approx: None,
                mc,
            })
        })
        .collect()
}

fn tree_monte_carlo(n: usize, plan: McPlan) -> McEstimate {
    let seed = plan.seed.derive(n as u64);
    let statistic = plan.statistic;
    let mut acc = RunningMoments::new();
    let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
        let tree = gen_random_tree(n, rng).expect("n >= 1 was checked");
        let positions = random_positions(n, rng);
        let d = tree.sum_edge_lengths_unchecked(&positions);
        sample_value(statistic, &tree.stats(), d)
    };
    replicate_chunked(plan.replicas, seed, 1 << 14, sample, |x| acc.push(x));
    statistic.estimate(&acc)
}

/// Expected variance of a given graph's D estimated by Monte Carlo, used for
/// fixed reference graphs (linear and star trees) next to tree sweeps.
pub fn fixed_graph_variance_mc(g: &Graph, replicas: u64, seed: RngSeed) -> McEstimate {
    let mut acc = RunningMoments::new();
    replicate_chunked(
        replicas,
        seed,
        1 << 14,
        |rng| {
            let pos = random_positions(g.n(), rng);
            g.sum_edge_lengths_unchecked(&pos) as f64
        },
        |x| acc.push(x),
    );
    McStatistic::SampleVariance.estimate(&acc)
}
