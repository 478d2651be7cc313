//! Per-modulus analysis: closed forms next to their brute-force values.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BuildOptions, CleanGraph, DEFAULT_VERTEX_CAP};
use crate::matching::{
    construct_perfect_matching, matching_number_closed, maximum_matching, verify_matching,
    DEFAULT_BLOSSOM_CAP,
};
use crate::metrics::{
    diameter_closed, distance_summary, wiener_closed, wiener_closed_corrected,
    wiener_decomposition_closed, wiener_decomposition_oracle, Distance, WienerDecomposition,
    WienerIndex,
};
use crate::ring::{count_self_inverse_closed, euler_phi, factorize, RingData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub oracle: bool,
    pub vertex_cap: usize,
    pub blossom_cap: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            oracle: true,
            vertex_cap: DEFAULT_VERTEX_CAP,
            blossom_cap: DEFAULT_BLOSSOM_CAP,
        }
    }
}

/// `Some(closed == oracle)` when both sides were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Agreement {
    pub diameter: Option<bool>,
    pub wiener: Option<bool>,
    pub decomposition: Option<bool>,
    pub matching: Option<bool>,
}

impl Agreement {
    fn flags(&self) -> [Option<bool>; 4] {
        [
            self.diameter,
            self.wiener,
            self.decomposition,
            self.matching,
        ]
    }

    /// No computed pair disagrees.
    pub fn all(&self) -> bool {
        self.flags().iter().all(|f| *f != Some(false))
    }

    pub fn any_checked(&self) -> bool {
        self.flags().iter().any(Option::is_some)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
    pub phi: u64,
    pub k_total: usize,
    pub k_odd: usize,
    pub m: u32,
    pub r: u64,
    pub vertices: u64,
    pub edges: Option<u64>,
    pub diameter_closed: Distance,
    pub diameter_oracle: Option<Distance>,
    pub wiener_closed: WienerIndex,
    pub wiener_corrected: WienerIndex,
    pub wiener_oracle: Option<WienerIndex>,
    pub decomposition_closed: Option<WienerDecomposition>,
    pub decomposition_oracle: Option<WienerDecomposition>,
    pub matching_closed: Option<u64>,
    pub matching_oracle: Option<u64>,
    pub perfect_matching_verified: Option<bool>,
    pub agreement: Agreement,
    pub notices: Vec<String>,
}

/// Wall time per phase, kept out of the report so the report itself is
/// deterministic.
#[derive(Debug, Clone, Default)]
pub struct PhaseTimings(pub Vec<(&'static str, Duration)>);

impl PhaseTimings {
    fn time<T>(&mut self, phase: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.push((phase, start.elapsed()));
        out
    }
}

pub fn analyze(n: u64, opts: &AnalyzeOptions) -> Result<(AnalysisReport, PhaseTimings)> {
    if n < 2 {
        return Err(Error::ModulusTooSmall { n, min: 2 });
    }
    let mut timings = PhaseTimings::default();
    let fact = &timings.time("factorize", || factorize(n))?;
    let k = fact.k_total();
    let phi = euler_phi(fact);
    let connected_form = k >= 2;

    let (wiener_c, wiener_fixed, diameter_c, decomposition_c, matching_c) =
        timings.time("closed forms", || {
            Ok::<_, Error>((
                wiener_closed(fact)?,
                wiener_closed_corrected(fact)?,
                diameter_closed(fact)?,
                connected_form
                    .then(|| wiener_decomposition_closed(fact))
                    .transpose()?,
                connected_form
                    .then(|| matching_number_closed(fact))
                    .transpose()?,
            ))
        })?;

    let mut notices = Vec::new();
    if k == 1 && n > 2 {
        notices.push(format!(
            "n = {n} is a prime power: Cl2 is disconnected ((1,1) is isolated), so the diameter and Wiener index are infinite and no perfect matching exists"
        ));
    }
    if n == 2 {
        notices.push("n = 2: Cl2 is the single vertex (1,1)".to_string());
    }

    let mut report = AnalysisReport {
        n,
        factors: fact.factors().to_vec(),
        phi,
        k_total: k,
        k_odd: fact.k_odd(),
        m: fact.two_adic(),
        r: count_self_inverse_closed(fact)?,
        vertices: ((1u64 << k) - 1) * phi,
        edges: None,
        diameter_closed: diameter_c,
        diameter_oracle: None,
        wiener_closed: wiener_c,
        wiener_corrected: wiener_fixed,
        wiener_oracle: None,
        decomposition_closed: decomposition_c,
        decomposition_oracle: None,
        matching_closed: matching_c,
        matching_oracle: None,
        perfect_matching_verified: None,
        agreement: Agreement::default(),
        notices,
    };

    if opts.oracle {
        if report.vertices > opts.vertex_cap as u64 {
            return Err(Error::VertexCapExceeded {
                vertices: report.vertices,
                cap: opts.vertex_cap,
            });
        }
        let build = BuildOptions {
            include_zero_block: false,
            vertex_cap: opts.vertex_cap,
        };
        let g = timings.time("build graph", || {
            CleanGraph::from_ring(RingData::from_factorization(fact.clone())?, build)
        })?;
        run_oracles(&g, opts, &mut report, &mut timings)?;
    }
    Ok((report, timings))
}

fn run_oracles(
    g: &CleanGraph,
    opts: &AnalyzeOptions,
    report: &mut AnalysisReport,
    timings: &mut PhaseTimings,
) -> Result<()> {
    report.edges = Some(g.edge_count() as u64);
    let summary = timings.time("bfs sweep", || distance_summary(g));
    report.diameter_oracle = Some(summary.diameter);
    report.wiener_oracle = Some(summary.wiener);
    report.agreement.diameter = Some(summary.diameter == report.diameter_closed);
    report.agreement.wiener = Some(summary.wiener == report.wiener_closed);

    if let Some(closed) = report.decomposition_closed {
        let oracle = timings.time("class sums", || wiener_decomposition_oracle(g))?;
        report.decomposition_oracle = Some(oracle);
        report.agreement.decomposition = Some(oracle == closed);
    }

    if g.vertex_count() <= opts.blossom_cap {
        let m = timings.time("blossom", || maximum_matching(g, opts.blossom_cap))?;
        report.matching_oracle = Some(m.size() as u64);
        if let Some(closed) = report.matching_closed {
            report.agreement.matching = Some(closed == m.size() as u64);
        }
    } else {
        report.notices.push(format!(
            "blossom oracle skipped: {} vertices above the matching cap of {}",
            g.vertex_count(),
            opts.blossom_cap
        ));
    }
    if report.k_total >= 2 {
        let built = timings.time("perfect matching", || construct_perfect_matching(g))?;
        report.perfect_matching_verified = Some(verify_matching(g, &built).perfect);
    }
    Ok(())
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn verdict(flag: Option<bool>) -> &'static str {
    match flag {
        Some(true) => "agree",
        Some(false) => "DISAGREE",
        None => "not checked",
    }
}

impl AnalysisReport {
    pub fn all_agree(&self) -> bool {
        self.agreement.all()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let factors: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, a)| {
                if a == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{a}")
                }
            })
            .collect();
        let _ = writeln!(
            s,
            "n = {} = {}",
            self.n,
            if factors.is_empty() {
                "1".into()
            } else {
                factors.join(" * ")
            }
        );
        let _ = writeln!(
            s,
            "phi = {}  k = {}  k_odd = {}  m = {}  r = {}",
            self.phi, self.k_total, self.k_odd, self.m, self.r
        );
        let _ = writeln!(
            s,
            "vertices = {}  edges = {}",
            self.vertices,
            opt(&self.edges)
        );
        let _ = writeln!(
            s,
            "diameter: closed {}  oracle {}  [{}]",
            self.diameter_closed,
            opt(&self.diameter_oracle),
            verdict(self.agreement.diameter)
        );
        let _ = writeln!(
            s,
            "wiener:   closed {}  oracle {}  [{}]  (corrected closed form {})",
            self.wiener_closed,
            opt(&self.wiener_oracle),
            verdict(self.agreement.wiener),
            self.wiener_corrected
        );
        if let Some(closed) = &self.decomposition_closed {
            let oracle = self.decomposition_oracle.as_ref();
            for (i, (name, value)) in closed.components().into_iter().enumerate() {
                let o = oracle.map_or_else(|| "-".to_string(), |d| d.components()[i].1.to_string());
                let _ = writeln!(s, "  {name}: closed {value}  oracle {o}");
            }
            let _ = writeln!(
                s,
                "  decomposition [{}]",
                verdict(self.agreement.decomposition)
            );
        }
        let _ = writeln!(
            s,
            "matching: closed {}  oracle {}  [{}]",
            opt(&self.matching_closed),
            opt(&self.matching_oracle),
            verdict(self.agreement.matching)
        );
        if let Some(ok) = self.perfect_matching_verified {
            let _ = writeln!(
                s,
                "constructed perfect matching: {}",
                if ok { "verified" } else { "INVALID" }
            );
        }
        for note in &self.notices {
            let _ = writeln!(s, "note: {note}");
        }
        let verdict = if !self.all_agree() {
            "closed form and oracle DISAGREE"
        } else if self.agreement.any_checked() {
            "all checks agree"
        } else {
            "closed forms only, no oracle run"
        };
        let _ = writeln!(s, "{verdict}");
        s
    }
}
