//! CSV/TSV serialization of every report type.
//!
//! Exact values are written as `p/q` and, where useful, next to a decimal
//! rendering. Floats use Rust's shortest round-trip formatting, so output
//! is byte-for-byte reproducible.

use std::io::Write;

use crate::bounds::BoundsReport;
use crate::ensembles::{EnsembleCurve, EnsembleSpec, Quantity};
use crate::error::Result;
use crate::exact::{complete_graph_d, int, render, render_decimal, ExactScalar};
use crate::graph::SpecialGraph;
use crate::moments::{special_table, tree_moments, tree_sum_k2_is_consistent, tree_sum_k2_range, hubiness, MomentsReport};
use crate::oracle::ExactDistribution;
use crate::significance::{CollectionStats, SignificanceReport};

const DECIMALS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

fn writer<W: Write>(w: W, format: Format) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .delimiter(match format {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        })
        .from_writer(w)
}

fn dec(x: &ExactScalar) -> String {
    render_decimal(x, DECIMALS)
}

fn float(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        x.to_string()
    }
}

/// key,value,decimal records.
struct KeyValue<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> KeyValue<W> {
    fn new(w: W, format: Format) -> Result<Self> {
        let mut inner = writer(w, format);
        inner.write_record(["key", "value", "decimal"])?;
        Ok(KeyValue { inner })
    }

    fn int(&mut self, key: &str, v: impl ToString) -> Result<()> {
        let v = v.to_string();
        self.inner.write_record([key, &v, &v])?;
        Ok(())
    }

    fn exact(&mut self, key: &str, v: &ExactScalar) -> Result<()> {
        self.inner.write_record([key, &render(v), &dec(v)])?;
        Ok(())
    }

    fn text(&mut self, key: &str, v: &str) -> Result<()> {
        self.inner.write_record([key, v, ""])?;
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

pub fn write_moments<W: Write>(r: &MomentsReport, w: W, format: Format) -> Result<()> {
    let mut kv = KeyValue::new(w, format)?;
    kv.int("n", r.n)?;
    kv.int("m", r.m)?;
    kv.int("sum_k2", r.sum_k2)?;
    match r.mean_k2() {
        Some(k2) => kv.exact("mean_k2", &k2)?,
        None => kv.text("mean_k2", "")?,
    }
    kv.int("q", r.q)?;
    kv.int("f0", r.f.f0)?;
    kv.int("f1", r.f.f1)?;
    kv.int("f2", r.f.f2)?;
    kv.exact("e_d", &r.e_d)?;
    kv.exact("e_d2", &r.e_d2)?;
    kv.exact("var_d", &r.var_d)?;
    kv.finish()
}

pub fn write_bounds<W: Write>(r: &BoundsReport, w: W, format: Format) -> Result<()> {
    let mut kv = KeyValue::new(w, format)?;
    kv.int("n", r.n)?;
    kv.int("m", r.m)?;
    kv.int("naive_max", r.naive_max)?;
    kv.exact("upper_dm", &r.upper_dm)?;
    kv.int("upper_em", r.upper_em)?;
    kv.exact("upper", &r.upper)?;
    kv.int("d_star", r.d_star)?;
    kv.int("f_dstar", r.f_dstar)?;
    kv.int("minla_lower", r.minla_lower)?;
    kv.exact("e_d", &r.e_d)?;
    kv.exact("bhatia_davis_minla_upper", &r.bhatia_davis_minla_upper)?;
    kv.finish()
}

/// Third-moment D_min bound, written after a bounds report when requested.
pub fn write_sharma<W: Write>(est: &crate::bounds::SharmaEstimate, w: W, format: Format) -> Result<()> {
    let mut kv = KeyValue::new(w, format)?;
    kv.text("sharma_minla_upper_approx", &float(est.bound))?;
    kv.text("w_mc_mean", &float(est.w.mean))?;
    kv.text("w_mc_stderr", &float(est.w.stderr))?;
    kv.int("w_mc_replicas", est.w.replicas)?;
    kv.finish()
}

pub fn write_significance<W: Write>(r: &SignificanceReport, w: W, format: Format) -> Result<()> {
    let mut kv = KeyValue::new(w, format)?;
    kv.int("d_observed", r.d_observed)?;
    kv.exact("e_d", &r.e_d)?;
    kv.exact("var_d", &r.var_d)?;
    kv.exact("z_squared", r.z.square())?;
    kv.text("z", &float(r.z.to_f64()))?;
    kv.text("c_star", &float(r.c_star.to_f64()))?;
    kv.exact("cantelli_bound", &r.cantelli_bound)?;
    kv.exact("unimodal_bound", &r.unimodal_bound)?;
    kv.text("unimodal_bound_note", "assumes symmetric unimodal D under random arrangements")?;
    match r.mc_p {
        Some(p) => kv.text("mc_p", &float(p))?,
        None => kv.text("mc_p", "")?,
    }
    kv.int("mc_replicas", r.mc_replicas)?;
    kv.finish()
}

/// Per-network significance row used in collection output.
#[derive(Debug, Clone)]
pub struct NetworkRow {
    pub index: usize,
    pub n: u64,
    pub m: u64,
    pub d: u64,
    pub e_d: ExactScalar,
    pub var_d: ExactScalar,
    /// Absent when V = 0.
    pub significance: Option<SignificanceReport>,
}

/// One row per network followed by a `collection` summary row.
pub fn write_collection<W: Write>(rows: &[NetworkRow], summary: &CollectionStats, w: W, format: Format) -> Result<()> {
    let mut out = writer(w, format);
    out.write_record([
        "scope", "index", "n", "m", "d", "e_d", "var_d", "z", "cantelli_bound", "unimodal_bound", "mean_d",
    ])?;
    for r in rows {
        let (z, cant, uni) = match &r.significance {
            Some(s) => (float(s.z.to_f64()), render(&s.cantelli_bound), render(&s.unimodal_bound)),
            None => Default::default(),
        };
        let mean_d = if r.m > 0 { render(&(int(r.d) / int(r.m))) } else { String::new() };
        out.write_record([
            "network".to_string(),
            r.index.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.d.to_string(),
            render(&r.e_d),
            render(&r.var_d),
            z,
            cant,
            uni,
            mean_d,
        ])?;
    }
    let d_total: u64 = rows.iter().map(|r| r.d).sum();
    out.write_record([
        "collection".to_string(),
        summary.t.to_string(),
        summary.n_total.to_string(),
        summary.m_total.to_string(),
        d_total.to_string(),
        String::new(),
        String::new(),
        summary.mean_z.map(float).unwrap_or_default(),
        String::new(),
        String::new(),
        render(&summary.mean_d),
    ])?;
    out.flush()?;
    Ok(())
}

/// Options for curve output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CurveOptions {
    /// Write exact columns as `p/q` instead of decimals.
    pub rational: bool,
    /// Add density and D(K_n)-normalized columns.
    pub normalized: bool,
}

fn tree_reference(kind: SpecialGraph, n: u64, quantity: Quantity) -> Option<ExactScalar> {
    let row = special_table(kind, n).ok()?;
    Some(match quantity {
        Quantity::Variance => row.var_d,
        Quantity::SecondMoment => row.e_d2,
    })
}

pub fn write_curve<W: Write>(curve: &EnsembleCurve, w: W, format: Format, opts: CurveOptions) -> Result<()> {
    let mut out = writer(w, format);
    let is_tree = matches!(curve.spec, EnsembleSpec::RandomLabelledTree { .. });
    let mut header = vec!["parameter", "exact", "approx", "mc_mean", "mc_stderr", "replicas"];
    if is_tree {
        header.extend(["linear", "star"]);
    }
    if opts.normalized {
        header.extend(["delta", "exact_norm", "approx_norm", "mc_mean_norm", "mc_stderr_norm"]);
    }
    out.write_record(&header)?;
    let show = |x: &ExactScalar| if opts.rational { render(x) } else { dec(x) };
    for row in &curve.rows {
        let mut rec = vec![
            row.parameter.to_string(),
            show(&row.exact),
            row.approx.as_ref().map(show).unwrap_or_default(),
            row.mc.map(|e| float(e.mean)).unwrap_or_default(),
            row.mc.map(|e| float(e.stderr)).unwrap_or_default(),
            row.mc.map(|e| e.replicas.to_string()).unwrap_or_default(),
        ];
        if is_tree {
            for kind in [SpecialGraph::LinearTree, SpecialGraph::StarTree] {
                rec.push(tree_reference(kind, row.n, curve.quantity).as_ref().map(show).unwrap_or_default());
            }
        }
        if opts.normalized {
            let dk = complete_graph_d(row.n);
            let delta = crate::ensembles::density(row.n, row.m);
            rec.push(show(&delta));
            if dk == 0 {
                rec.extend(std::iter::repeat_n(String::new(), 4));
            } else {
                let scale = int(dk);
                rec.push(show(&(&row.exact / &scale)));
                rec.push(row.approx.as_ref().map(|a| show(&(a / &scale))).unwrap_or_default());
                rec.push(row.mc.map(|e| float(e.mean / dk as f64)).unwrap_or_default());
                rec.push(row.mc.map(|e| float(e.stderr / dk as f64)).unwrap_or_default());
            }
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Hubiness against tree variance for every realizable Σk² on `n` vertices.
pub fn write_hubiness<W: Write>(n: u64, w: W, format: Format) -> Result<()> {
    let mut out = writer(w, format);
    out.write_record(["n", "sum_k2", "mean_k2", "h", "h_decimal", "e_d2", "var_d", "var_d_decimal"])?;
    let (lo, hi) = tree_sum_k2_range(n);
    for k2 in (lo..=hi).step_by(2).filter(|&k2| tree_sum_k2_is_consistent(n, k2)) {
        let h = hubiness(n, k2)?;
        let (e2, v) = tree_moments(n, k2)?;
        out.write_record([
            n.to_string(),
            k2.to_string(),
            render(&(int(k2) / int(n))),
            render(&h),
            dec(&h),
            render(&e2),
            render(&v),
            dec(&v),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_distribution<W: Write>(dist: &ExactDistribution, w: W, format: Format) -> Result<()> {
    let mut out = writer(w, format);
    out.write_record(["d", "count", "cumulative", "cumulative_float"])?;
    for (d, count, cum) in dist.rows() {
        out.write_record([d.to_string(), count.to_string(), render(&cum), float(crate::exact::to_f64(&cum))])?;
    }
    out.flush()?;
    Ok(())
}
