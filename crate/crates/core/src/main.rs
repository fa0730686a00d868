use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rla::bounds::{sharma_minla_upper_mc, BoundsReport};
use rla::conllu::parse_conllu_lite;
use rla::ensembles::{mc_curve, Approximation, EnsembleSpec, McPlan, McStatistic, Quantity};
use rla::io::{read_arrangement_file, read_graph_file};
use rla::montecarlo::RngSeed;
use rla::oracle::{enumerate_distribution, selftest, CheckOutcome, OracleConfig};
use rla::report::{self, CurveOptions, Format, NetworkRow};
use rla::significance::{collection_stats, PValuePlan, SignificanceReport, UndefinedPolicy, ZNormalization};
use rla::{Error, MomentsReport, Result};

/// Statistics of the sum of edge lengths D under uniformly random linear
/// arrangements.
#[derive(Parser)]
#[command(name = "rla", version)]
struct Cli {
    /// Output delimiter.
    #[arg(long, value_enum, global = true, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// E[D], E[D²], V[D] and pair counts of a graph.
    Moments { graph: PathBuf },
    /// Bounds on D_max and D_min.
    Bounds {
        graph: PathBuf,
        /// Also estimate the third-moment D_min bound with this many replicas.
        #[arg(long)]
        sharma_mc: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// z-score and tail bounds of an observed D.
    Sig(SigArgs),
    /// Per-sentence significance and collection means for a CoNLL-U file.
    Treebank {
        conllu: PathBuf,
        #[arg(long)]
        exclude_punct: bool,
        /// Divide the z-sum by the number of sentences instead of edges.
        #[arg(long)]
        per_network: bool,
        /// Fail on sentences whose z-score is undefined instead of skipping them.
        #[arg(long)]
        strict: bool,
    },
    /// Expected statistics over random-graph ensembles.
    #[command(subcommand)]
    Ensemble(EnsembleCommand),
    /// Hubiness against tree variance for every realizable Σk².
    Hubiness {
        #[arg(long)]
        n: u64,
    },
    /// Exact distribution of D by enumerating every arrangement.
    Oracle {
        graph: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Closed forms against enumeration.
    Selftest {
        #[arg(long, default_value_t = 12)]
        max_pair_n: u64,
        #[arg(long, default_value_t = 7)]
        max_tree_n: usize,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("observed").required(true))]
struct SigArgs {
    graph: PathBuf,
    /// Arrangement file giving the observed positions.
    #[arg(long, group = "observed")]
    arrangement: Option<PathBuf>,
    /// Observed D.
    #[arg(long = "D", group = "observed")]
    d: Option<u64>,
    /// Monte Carlo p-value with this many random arrangements.
    #[arg(long)]
    mc: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Report (k + 1)/(R + 1) instead of k/R.
    #[arg(long)]
    smoothing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantityArg {
    Variance,
    SecondMoment,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatisticArg {
    MeanGraphVariance,
    SampleVariance,
    MeanSquare,
}

#[derive(Args)]
struct McArgs {
    /// Monte Carlo replicas per row.
    #[arg(long)]
    mc: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo estimator; defaults to the natural one for the quantity.
    #[arg(long, value_enum)]
    statistic: Option<StatisticArg>,
    #[arg(long, value_enum, default_value_t = QuantityArg::Variance)]
    quantity: QuantityArg,
    /// Exact columns as p/q.
    #[arg(long)]
    rational: bool,
    /// Add density and D(K_n)-normalized columns.
    #[arg(long)]
    normalized: bool,
}

#[derive(Subcommand)]
enum EnsembleCommand {
    /// G(n, m) swept over m.
    Gnm {
        #[arg(long)]
        n: u64,
        /// Only the exact column (the default).
        #[arg(long, group = "approx")]
        exact: bool,
        /// Add the binomial-degree approximation.
        #[arg(long, group = "approx")]
        binomial: bool,
        /// Add the Poisson-degree approximation.
        #[arg(long, group = "approx")]
        poisson: bool,
        /// Edge counts to evaluate (default: all of 0..=C(n,2)).
        #[arg(long, value_delimiter = ',')]
        m_list: Option<Vec<u64>>,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Uniformly random labelled trees swept over n.
    Tree {
        /// Sizes to evaluate (default: a log grid from 10 to 10000).
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<u64>>,
        #[command(flatten)]
        mc: McArgs,
    },
}

impl McArgs {
    fn quantity(&self) -> Quantity {
        match self.quantity {
            QuantityArg::Variance => Quantity::Variance,
            QuantityArg::SecondMoment => Quantity::SecondMoment,
        }
    }

    fn plan(&self, default: McStatistic) -> Option<McPlan> {
        let statistic = match self.statistic {
            None => match self.quantity() {
                Quantity::SecondMoment => McStatistic::MeanSquare,
                Quantity::Variance => default,
            },
            Some(StatisticArg::MeanGraphVariance) => McStatistic::MeanGraphVariance,
            Some(StatisticArg::SampleVariance) => McStatistic::SampleVariance,
            Some(StatisticArg::MeanSquare) => McStatistic::MeanSquare,
        };
        self.mc.map(|replicas| McPlan {
            statistic,
            replicas,
            seed: RngSeed::new(self.seed),
        })
    }

    fn options(&self) -> CurveOptions {
        CurveOptions {
            rational: self.rational,
            normalized: self.normalized,
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Tsv => Format::Tsv,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Moments { graph } => {
            let g = read_graph_file(&graph)?;
            report::write_moments(&MomentsReport::from_graph(&g), &mut out, format)?;
        }
        Command::Bounds { graph, sharma_mc, seed } => {
            let g = read_graph_file(&graph)?;
            report::write_bounds(&BoundsReport::from_graph(&g), &mut out, format)?;
            if let Some(replicas) = sharma_mc {
                let est = sharma_minla_upper_mc(&g, replicas, RngSeed::new(seed))?;
                report::write_sharma(&est, &mut out, format)?;
            }
        }
        Command::Sig(args) => {
            let g = read_graph_file(&args.graph)?;
            let d = match (args.d, &args.arrangement) {
                (Some(d), _) => d,
                (None, Some(path)) => g.sum_edge_lengths(&read_arrangement_file(path)?)?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let plan = args.mc.map(|replicas| PValuePlan {
                replicas,
                seed: RngSeed::new(args.seed),
                smoothing: args.smoothing,
            });
            report::write_significance(&SignificanceReport::new(&g, d, plan)?, &mut out, format)?;
        }
        Command::Treebank {
            conllu,
            exclude_punct,
            per_network,
            strict,
        } => {
            let sentences = parse_conllu_lite(rla::io::open(&conllu)?, exclude_punct)?;
            let mut items = Vec::with_capacity(sentences.len());
            let mut rows = Vec::with_capacity(sentences.len());
            for (i, s) in sentences.iter().enumerate() {
                let g = s.graph()?;
                let d = s.sum_dependency_lengths();
                let m = MomentsReport::from_graph(&g);
                let significance = match SignificanceReport::new(&g, d, None) {
                    Ok(r) => Some(r),
                    Err(Error::Undefined { .. }) if !strict => None,
                    Err(e) => return Err(e),
                };
                rows.push(NetworkRow {
                    index: i + 1,
                    n: m.n,
                    m: m.m,
                    d,
                    e_d: m.e_d,
                    var_d: m.var_d,
                    significance,
                });
                items.push((g, d));
            }
            let norm = if per_network {
                ZNormalization::Networks
            } else {
                ZNormalization::Edges
            };
            let policy = if strict {
                UndefinedPolicy::Fatal
            } else {
                UndefinedPolicy::Skip
            };
            let summary = collection_stats(&items, norm, policy)?;
            report::write_collection(&rows, &summary, &mut out, format)?;
        }
        Command::Ensemble(EnsembleCommand::Gnm {
            n,
            exact: _,
            binomial,
            poisson,
            m_list,
            mc,
        }) => {
            let spec = match m_list {
                Some(ms) => EnsembleSpec::Gnm { n, ms },
                None => EnsembleSpec::gnm_full(n),
            };
            let approx = if binomial {
                Approximation::Binomial
            } else if poisson {
                Approximation::Poisson
            } else {
                Approximation::None
            };
            let curve = mc_curve(&spec, mc.quantity(), approx, mc.plan(McStatistic::MeanGraphVariance))?;
            report::write_curve(&curve, &mut out, format, mc.options())?;
        }
        Command::Ensemble(EnsembleCommand::Tree { n_list, mc }) => {
            let spec = match n_list {
                Some(ns) => EnsembleSpec::RandomLabelledTree { ns },
                None => EnsembleSpec::tree_log_grid(10, 10_000, 4),
            };
            let curve = mc_curve(&spec, mc.quantity(), Approximation::None, mc.plan(McStatistic::SampleVariance))?;
            report::write_curve(&curve, &mut out, format, mc.options())?;
        }
        Command::Hubiness { n } => report::write_hubiness(n, &mut out, format)?,
        Command::Oracle { graph, max_n } => {
            let g = read_graph_file(&graph)?;
            let config = OracleConfig {
                max_arrangement_n: max_n,
                ..OracleConfig::default()
            };
            report::write_distribution(&enumerate_distribution(&g, &config)?, &mut out, format)?;
        }
        Command::Selftest { max_pair_n, max_tree_n } => {
            let checks = selftest(max_pair_n, max_tree_n, &OracleConfig::default())?;
            let mut ok = true;
            for c in &checks {
                match &c.outcome {
                    CheckOutcome::Pass => writeln!(out, "PASS {}", c.name)?,
                    CheckOutcome::Fail(why) => {
                        ok = false;
                        writeln!(out, "FAIL {}: {why}", c.name)?;
                    }
                    CheckOutcome::Diagnostic(msg) => writeln!(out, "DIAG {}: {msg}", c.name)?,
                }
            }
            return Ok(ok);
        }
    }
    out.flush()?;
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
