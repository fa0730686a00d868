//! Brute-force ground truth.
//!
//! Everything here enumerates: all n! arrangements of a graph, all
//! placements of an edge pair, all labelled trees, all graphs of an
//! ensemble. Nothing is derived from the closed forms it is used to check.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;

use crate::ensembles::{complete_edges, prufer_decode};
use crate::error::{Error, Result};
use crate::exact::{binomial, complete_graph_d, int, ratio, ExactScalar};
use crate::graph::Graph;
use crate::moments::{FCounts, PairType};

/// Size caps. Exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest n for which all n! arrangements are enumerated.
    pub max_arrangement_n: usize,
    /// Largest n for edge-pair placement enumeration.
    pub max_pair_n: u64,
    /// Largest n for labelled tree enumeration.
    pub max_tree_n: usize,
    /// Largest number of graphs an ensemble enumeration may produce.
    pub max_graphs: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_arrangement_n: 10,
            max_pair_n: 15,
            max_tree_n: 8,
            max_graphs: 1 << 22,
        }
    }
}

fn cap_check(what: impl FnOnce() -> String, value: u64, cap: u64) -> Result<()> {
    if value > cap {
        return Err(Error::CapExceeded { what: what(), cap });
    }
    Ok(())
}

/// Number of arrangements with each value of D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl ExactDistribution {
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// n!, the number of arrangements.
    pub fn total(&self) -> u64 {
        self.total
    }

    fn raw_moment(&self, k: u32) -> ExactScalar {
        let sum: u128 = self
            .counts
            .iter()
            .map(|(&d, &c)| (d as u128).pow(k) * c as u128)
            .sum();
        ratio(sum, self.total)
    }

    pub fn mean(&self) -> ExactScalar {
        self.raw_moment(1)
    }

    pub fn second_moment(&self) -> ExactScalar {
        self.raw_moment(2)
    }

    pub fn variance(&self) -> ExactScalar {
        let mu = self.mean();
        self.second_moment() - &mu * &mu
    }

    /// Third central moment W = E[(D − E[D])³].
    pub fn third_central_moment(&self) -> ExactScalar {
        let mu = self.mean();
        self.raw_moment(3) - int(3) * &mu * self.second_moment() + int(2) * &mu * &mu * &mu
    }

    pub fn min(&self) -> u64 {
        *self.counts.keys().next().expect("a distribution is never empty")
    }

    pub fn max(&self) -> u64 {
        *self.counts.keys().next_back().expect("a distribution is never empty")
    }

    /// P(D ≤ x).
    pub fn cdf(&self, x: u64) -> ExactScalar {
        let below: u64 = self.counts.range(..=x).map(|(_, c)| c).sum();
        ratio(below, self.total)
    }

    /// (D, count, P(D ≤ D)) for every attained D in increasing order.
    pub fn rows(&self) -> Vec<(u64, u64, ExactScalar)> {
        let mut cumulative = 0;
        self.counts
            .iter()
            .map(|(&d, &c)| {
                cumulative += c;
                (d, c, ratio(cumulative, self.total))
            })
            .collect()
    }
}

/// Exact distribution of D over all n! arrangements.
pub fn enumerate_distribution(g: &Graph, config: &OracleConfig) -> Result<ExactDistribution> {
    let n = g.n();
    cap_check(
        || format!("arrangement enumeration on {n} vertices"),
        n as u64,
        config.max_arrangement_n as u64,
    )?;
    if n <= 1 {
        return Ok(ExactDistribution {
            counts: BTreeMap::from([(0, 1)]),
            total: 1,
        });
    }
    let csr = Csr::new(g);
    let max_d = g.m() * (n - 1);
    // Partition by the vertex at the last position; Heap's algorithm
    // permutes the rest.
    let hist = (0..n)
        .into_par_iter()
        .map(|last| heap_histogram(&csr, n, last, max_d))
        .reduce(
            || vec![0u64; max_d + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let counts: BTreeMap<u64, u64> = hist
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(d, c)| (d as u64, c))
        .collect();
    let total = counts.values().sum();
    Ok(ExactDistribution { counts, total })
}

/// Compressed adjacency with 0-based vertices.
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    fn new(g: &Graph) -> Self {
        let adj = g.adjacency();
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        for nbrs in &adj {
            targets.extend(nbrs.iter().map(|&w| w - 1));
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    fn neighbours(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

fn heap_histogram(csr: &Csr, n: usize, last: usize, max_d: usize) -> Vec<u64> {
    let mut hist = vec![0u64; max_d + 1];
    let mut order: Vec<usize> = (0..n).filter(|&v| v != last).collect();
    order.push(last);
    let mut pos = vec![0isize; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p as isize;
    }
    let mut d: isize = (0..n)
        .flat_map(|u| csr.neighbours(u).iter().filter(move |&&w| w > u).map(move |&w| (u, w)))
        .map(|(u, w)| (pos[u] - pos[w]).abs())
        .sum();
    hist[d as usize] += 1;

    let k = n - 1;
    let mut c = vec![0usize; k];
    let mut i = 1;
    while i < k {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            let (a, b) = (order[j], order[i]);
            let (pa, pb) = (j as isize, i as isize);
            for &w in csr.neighbours(a) {
                if w != b {
                    d += (pb - pos[w]).abs() - (pa - pos[w]).abs();
                }
            }
            for &w in csr.neighbours(b) {
                if w != a {
                    d += (pa - pos[w]).abs() - (pb - pos[w]).abs();
                }
            }
            pos[a] = pb;
            pos[b] = pa;
            order.swap(i, j);
            hist[d as usize] += 1;
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hist
}

/// Average of d_i·d_j over all arrangements, for two edges sharing `phi`
/// vertices, by enumerating the injective placements of their endpoints.
pub fn enumerate_e_phi(n: u64, phi: PairType, config: &OracleConfig) -> Result<ExactScalar> {
    let endpoints = phi.endpoints() as u64;
    if n < endpoints {
        return Err(Error::domain(format!(
            "two edges sharing {} vertices need n >= {endpoints}, got {n}",
            phi.shared()
        )));
    }
    cap_check(|| format!("pair placement enumeration on {n} vertices"), n, config.max_pair_n)?;
    let product = |p: &[u64]| -> u64 {
        match phi {
            PairType::Identical => p[0].abs_diff(p[1]).pow(2),
            PairType::Adjacent => p[0].abs_diff(p[1]) * p[0].abs_diff(p[2]),
            PairType::Disjoint => p[0].abs_diff(p[1]) * p[2].abs_diff(p[3]),
        }
    };
    let (sum, count) = (1..=n)
        .permutations(endpoints as usize)
        .fold((0u64, 0u64), |(s, c), p| (s + product(&p), c + 1));
    Ok(ratio(sum, count))
}

/// D of the star tree whose hub sits at position τ:
/// τ² − (n+1)τ + n(n+1)/2.
pub fn star_d_tau(n: u64, tau: u64) -> Result<u64> {
    if tau == 0 || tau > n {
        return Err(Error::domain(format!("hub position {tau} is outside 1..={n}")));
    }
    Ok(tau * tau + n * (n + 1) / 2 - (n + 1) * tau)
}

/// Recovers (E₀, E₁) from two graphs whose second moments are known
/// independently of the closed forms: the complete graph (D is constant)
/// and the star tree (D depends only on the hub position). E₂ comes from
/// pair enumeration.
pub fn solve_e01_system(n: u64, config: &OracleConfig) -> Result<(ExactScalar, ExactScalar)> {
    if n < 4 {
        return Err(Error::domain(format!("the system is singular below n = 4, got {n}")));
    }
    let e2 = enumerate_e_phi(n, PairType::Identical, config)?;

    let f_complete = f_counts_by_classification(&Graph::special(crate::SpecialGraph::Complete, n as usize)?);
    let dk = int(complete_graph_d(n));
    let rhs_complete = &dk * &dk - int(f_complete.f2) * &e2;

    let f_star = f_counts_by_classification(&Graph::special(crate::SpecialGraph::StarTree, n as usize)?);
    let star_sq: u64 = (1..=n).map(|t| star_d_tau(n, t).map(|d| d * d)).sum::<Result<u64>>()?;
    let rhs_star = ratio(star_sq, n) - int(f_star.f2) * &e2;

    // [f0(K) f1(K)] [E0]   [rhs_K]
    // [f0(S) f1(S)] [E1] = [rhs_S]
    let (a, b) = (int(f_complete.f0), int(f_complete.f1));
    let (c, d) = (int(f_star.f0), int(f_star.f1));
    let det = &a * &d - &b * &c;
    assert!(!det.is_zero(), "the system is regular for n >= 4");
    let e0 = (&rhs_complete * &d - &b * &rhs_star) / &det;
    let e1 = (&a * &rhs_star - &rhs_complete * &c) / &det;
    Ok((e0, e1))
}

/// f_φ by classifying every ordered pair of edges.
pub fn f_counts_by_classification(g: &Graph) -> FCounts {
    let mut f = [0u64; 3];
    for &(a, b) in g.edges() {
        for &(c, d) in g.edges() {
            let shared = [a == c || a == d, b == c || b == d].iter().filter(|&&s| s).count();
            f[shared] += 1;
        }
    }
    FCounts {
        f0: f[0],
        f1: f[1],
        f2: f[2],
    }
}

/// All n^(n−2) labelled trees on `1..=n`, one per Prüfer code.
pub fn enumerate_labelled_trees(n: usize, config: &OracleConfig) -> Result<Box<dyn Iterator<Item = Graph>>> {
    if n == 0 {
        return Err(Error::domain("a tree needs at least one vertex"));
    }
    cap_check(|| format!("labelled tree enumeration on {n} vertices"), n as u64, config.max_tree_n as u64)?;
    if n == 1 {
        return Ok(Box::new(std::iter::once(Graph::empty(1))));
    }
    if n == 2 {
        return Ok(Box::new(std::iter::once(Graph::new(2, [(1, 2)])?)));
    }
    Ok(Box::new(
        std::iter::repeat_n(1..=n, n - 2)
            .multi_cartesian_product()
            .map(move |code| prufer_decode(&code, n).expect("every code decodes")),
    ))
}

/// Every graph with exactly `m` edges on `1..=n`, each once.
pub fn enumerate_gnm(n: usize, m: usize, config: &OracleConfig) -> Result<impl Iterator<Item = Graph>> {
    let cap = complete_edges(n).len();
    if m > cap {
        return Err(Error::domain(format!("m = {m} exceeds C({n}, 2) = {cap}")));
    }
    let count = binomial(cap as u64, m as u64);
    if count > config.max_graphs.into() {
        return Err(Error::CapExceeded {
            what: format!("G({n}, {m}) enumeration with {count} graphs"),
            cap: config.max_graphs,
        });
    }
    Ok(complete_edges(n)
        .into_iter()
        .combinations(m)
        .map(move |edges| Graph::new(n, edges).expect("distinct pairs form a simple graph")))
}

/// Every simple graph on `1..=n`, by edge subset.
pub fn enumerate_all_graphs(n: usize, config: &OracleConfig) -> Result<impl Iterator<Item = Graph>> {
    let pairs = complete_edges(n);
    if pairs.len() >= 63 || (1u64 << pairs.len()) > config.max_graphs {
        return Err(Error::CapExceeded {
            what: format!("enumeration of all graphs on {n} vertices"),
            cap: config.max_graphs,
        });
    }
    Ok((0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).expect("distinct pairs form a simple graph")
    }))
}

/// Outcome of one self-test line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    /// Informational comparison that is not expected to agree.
    Diagnostic(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfCheck {
    pub name: String,
    pub outcome: CheckOutcome,
}

fn compare(name: String, mismatches: Vec<String>) -> SelfCheck {
    let outcome = if mismatches.is_empty() {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(mismatches.join("; "))
    };
    SelfCheck { name, outcome }
}

/// Closed forms against enumeration: the E_φ matrix, the E₀/E₁ linear
/// system, star-tree hub positions and labelled-tree averages, plus a
/// diagnostic for the circulating random-tree variance polynomial.
pub fn selftest(max_pair_n: u64, max_tree_n: usize, config: &OracleConfig) -> Result<Vec<SelfCheck>> {
    use crate::ensembles::{rlt_expected_k2, rlt_expected_second_moment, rlt_expected_variance, rlt_expected_variance_printed};
    use crate::moments::{e_phi, second_moment_d, variance_d};

    let mut checks = Vec::new();
    for phi in PairType::ALL {
        let lo = 4 - phi.shared() as u64;
        let mut bad = Vec::new();
        for n in lo..=max_pair_n {
            let (brute, closed) = (enumerate_e_phi(n, phi, config)?, e_phi(n, phi)?);
            if brute != closed {
                bad.push(format!("n={n}: enumerated {brute}, closed form {closed}"));
            }
        }
        checks.push(compare(format!("e_phi phi={} n={lo}..={max_pair_n}", phi.shared()), bad));
    }

    let mut bad = Vec::new();
    for n in 4..=max_pair_n {
        let (e0, e1) = solve_e01_system(n, config)?;
        for (phi, got) in [(PairType::Disjoint, e0), (PairType::Adjacent, e1)] {
            let want = e_phi(n, phi)?;
            if got != want {
                bad.push(format!("n={n} phi={}: solved {got}, closed form {want}", phi.shared()));
            }
        }
    }
    checks.push(compare(format!("linear system E0,E1 n=4..={max_pair_n}"), bad));

    let mut bad = Vec::new();
    for n in 1..=max_pair_n {
        let star = Graph::special(crate::SpecialGraph::StarTree, n as usize)?;
        let sq: u64 = (1..=n).map(|t| star_d_tau(n, t).map(|d| d * d)).sum::<Result<u64>>()?;
        if ratio(sq, n) != second_moment_d(&star) {
            bad.push(format!("n={n}"));
        }
    }
    checks.push(compare(format!("star hub positions n=1..={max_pair_n}"), bad));

    let mut bad = Vec::new();
    let mut diagnostics = Vec::new();
    for n in 3..=max_tree_n {
        let trees: Vec<Graph> = enumerate_labelled_trees(n, config)?.collect();
        let count = int(trees.len() as u64);
        let mean = |f: &dyn Fn(&Graph) -> ExactScalar| trees.iter().map(f).sum::<ExactScalar>() / &count;
        let k2 = mean(&|t| ratio(t.sum_k2(), n as u64));
        let var = mean(&|t| variance_d(t));
        let e2 = mean(&|t| second_moment_d(t));
        let nn = n as u64;
        for (what, got, want) in [
            ("<k^2>", &k2, rlt_expected_k2(nn)?),
            ("variance", &var, rlt_expected_variance(nn)?),
            ("second moment", &e2, rlt_expected_second_moment(nn)?),
        ] {
            if *got != want {
                bad.push(format!("n={n} {what}: trees {got}, closed form {want}"));
            }
        }
        let printed = rlt_expected_variance_printed(nn)?;
        if printed != var {
            diagnostics.push(format!("n={n}: printed polynomial {printed}, trees {var}"));
        }
    }
    checks.push(compare(format!("random labelled trees n=3..={max_tree_n}"), bad));
    checks.push(SelfCheck {
        name: "printed random-tree variance polynomial".into(),
        outcome: if diagnostics.is_empty() {
            CheckOutcome::Diagnostic("agrees with enumeration".into())
        } else {
            CheckOutcome::Diagnostic(format!("disagrees with enumeration at {}", diagnostics.join("; ")))
        },
    });
    Ok(checks)
}
