use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use super::{corrupt, generate, skeleton_size, BenchError, Corruption, GraphKind};
use crate::connect::{ConnConfig, Connected, ModConnected};
use crate::diameter::{DiamConfig, SmallDiam};
use crate::error::QueryError;
use crate::exact::Property;
use crate::graph::{SparseGraph, Vertex};
use crate::kconn::{KConnConfig, KConnected, DEFAULT_VERIFY_LIMIT};
use crate::oracle::{EdgeOracle, OracleHandle};
use crate::random::mix64;
use crate::strong::{StrongConnConfig, StronglyConnected};

/// Which reconstructor a run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Conn,
    ModConn,
    Strong,
    KConn,
    Diam,
}

impl Target {
    pub fn tag(&self) -> &'static str {
        match self {
            Target::Conn => "conn",
            Target::ModConn => "modconn",
            Target::Strong => "strong",
            Target::KConn => "kconn",
            Target::Diam => "diam",
        }
    }

    fn kind(&self, k: usize, diameter: usize) -> GraphKind {
        match self {
            Target::Conn | Target::ModConn => GraphKind::Connected,
            Target::Strong => GraphKind::StronglyConnected,
            Target::KConn => GraphKind::KConnected { k },
            Target::Diam => GraphKind::LowDiameter { diameter },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Evaluate every pair and verify the corrected graph exactly.
    #[default]
    Materialize,
    /// Answer sampled queries and record only query counts.
    Queries,
}

/// Values to sweep; every combination becomes one grid point.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n: Option<Vec<usize>>,
    pub m: Option<Vec<usize>>,
    pub eps: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub c: Option<Vec<f64>>,
    pub k: Option<Vec<usize>>,
}

fn default_trials() -> usize {
    10
}
fn default_alpha() -> f64 {
    1.0
}
fn default_delta() -> f64 {
    0.2
}
fn default_small() -> f64 {
    0.1
}
fn default_k() -> usize {
    2
}
fn default_diameter() -> usize {
    3
}
fn default_queries() -> usize {
    1000
}
fn default_verify_limit() -> usize {
    DEFAULT_VERIFY_LIMIT
}

/// One experiment, read from TOML.
///
/// ```toml
/// property = "conn"
/// n = 200
/// m = 400
/// eps = 0.05
/// trials = 20
/// [grid]
/// alpha = [1.0, 2.0]
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub property: Target,
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_small")]
    pub gamma: f64,
    #[serde(default = "default_small")]
    pub c: f64,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_diameter", rename = "D")]
    pub diameter: usize,
    #[serde(default)]
    pub mode: Mode,
    /// Sampled queries per trial in query mode.
    #[serde(default = "default_queries")]
    pub queries: usize,
    /// Record wall-clock time (makes the CSV nondeterministic).
    #[serde(default)]
    pub timing: bool,
    /// Random edges on top of the generated skeleton; defaults to half the
    /// remaining budget.
    pub extra: Option<usize>,
    /// Corruption size: components − 1, sources (= sinks), removed edges
    /// or removed spokes. Defaults to what `eps` allows.
    pub defects: Option<usize>,
    #[serde(default = "default_verify_limit")]
    pub verify_limit: usize,
    #[serde(default)]
    pub grid: Option<Grid>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Experiment(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Grid points in lexicographic sweep order (the config itself if no grid).
    pub fn points(&self) -> Vec<ExperimentConfig> {
        let mut base = self.clone();
        base.grid = None;
        let mut out = vec![base];
        let Some(grid) = &self.grid else {
            return out;
        };
        fn sweep<T: Copy>(out: Vec<ExperimentConfig>, values: &Option<Vec<T>>, set: fn(&mut ExperimentConfig, T)) -> Vec<ExperimentConfig> {
            match values {
                None => out,
                Some(vs) => out
                    .into_iter()
                    .flat_map(|p| {
                        vs.iter().map(move |&v| {
                            let mut q = p.clone();
                            set(&mut q, v);
                            q
                        })
                    })
                    .collect(),
            }
        }
        out = sweep(out, &grid.n, |p, v| p.n = v);
        out = sweep(out, &grid.m, |p, v| p.m = v);
        out = sweep(out, &grid.eps, |p, v| p.eps = v);
        out = sweep(out, &grid.alpha, |p, v| p.alpha = v);
        out = sweep(out, &grid.delta, |p, v| p.delta = v);
        out = sweep(out, &grid.c, |p, v| p.c = v);
        out = sweep(out, &grid.k, |p, v| p.k = v);
        out
    }

    fn kind(&self) -> GraphKind {
        self.property.kind(self.k, self.diameter)
    }

    fn corruption(&self) -> Corruption {
        let property = self.kind().property();
        match self.defects {
            None => Corruption::for_eps(property, self.eps, self.m),
            Some(d) => match property {
                Property::Connected => Corruption::Components { components: d + 1 },
                Property::StronglyConnected => Corruption::SourcesSinks { count: d },
                Property::KEdgeConnected(k) => Corruption::KCuts { k, max_removed: d },
                Property::DiameterAtMost(diameter) => Corruption::Spokes { diameter, spokes: d },
            },
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: &str| Err(BenchError::Experiment(msg.into()));
        if self.n < 2 {
            return bad("n must be at least 2");
        }
        if self.trials == 0 {
            return bad("trials must be positive");
        }
        if self.mode == Mode::Queries && self.queries == 0 {
            return bad("queries must be positive in query mode");
        }
        let skel = skeleton_size(self.kind(), self.n);
        if skel > self.m {
            return Err(BenchError::Experiment(format!(
                "generated skeleton needs {skel} edges but m = {}",
                self.m
            )));
        }
        Ok(())
    }

    fn extra(&self) -> usize {
        self.extra
            .unwrap_or_else(|| (self.m - skeleton_size(self.kind(), self.n)) / 2)
    }

    /// The closeness bound the run checks edge additions against.
    pub fn bound(&self) -> Result<f64, BenchError> {
        let m = self.m as f64;
        Ok(match self.property {
            Target::Conn => (1.0 + self.alpha) * self.eps * m,
            Target::ModConn => {
                let n0 = self.conn_config(0).super_node_count(self.n)?;
                (1.0 + self.alpha) * self.eps * m + (n0 - 1) as f64
            }
            Target::Strong => {
                let big_k = self.strong_config(0).search_cap(self.m)?;
                2.0 * self.n as f64 / (self.delta * big_k as f64) + 4.0 * self.eps * m + 2.0
            }
            Target::KConn => {
                let k = self.k as f64;
                (2.0 + self.alpha) * k * self.eps * m + self.c * k * m / 2.0
            }
            Target::Diam => 2.0 * self.eps * m + 1.0,
        })
    }

    fn conn_config(&self, seed: u64) -> ConnConfig {
        ConnConfig::new(self.eps, self.alpha, self.delta, self.c, seed)
    }

    fn strong_config(&self, seed: u64) -> StrongConnConfig {
        StrongConnConfig::new(self.eps, self.alpha, self.delta, seed)
    }

    fn kconn_config(&self, seed: u64) -> KConnConfig {
        let mut cfg = KConnConfig::new(self.eps, self.alpha, self.delta, self.gamma, self.c, self.k, seed);
        cfg.verify_limit = self.verify_limit;
        cfg
    }

    fn diam_config(&self, seed: u64) -> DiamConfig {
        DiamConfig::new(self.eps, self.alpha, self.delta, self.c, self.diameter, seed)
    }

    /// Builds the reconstructor once to surface parameter errors up front.
    fn check_parameters(&self) -> Result<(), BenchError> {
        let g = SparseGraph::empty(self.n, self.m, self.property == Target::Strong);
        let h = OracleHandle::new(&g);
        match self.property {
            Target::Conn => drop(Connected::new(&h, &self.conn_config(0))?),
            Target::ModConn => drop(ModConnected::new(&h, &self.conn_config(0))?),
            Target::Strong => drop(StronglyConnected::new(&h, &self.strong_config(0))?),
            Target::KConn => drop(KConnected::new(&h, &self.kconn_config(0))?),
            Target::Diam => drop(SmallDiam::new(&h, &self.diam_config(0))?),
        }
        self.bound()?;
        Ok(())
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub property: &'static str,
    pub n: usize,
    pub m_bound: usize,
    pub eps: f64,
    pub alpha: f64,
    pub delta: f64,
    pub gamma: f64,
    pub c: f64,
    pub k: usize,
    pub diameter: usize,
    pub seed: u64,
    pub property_holds: Option<bool>,
    pub edges_added: Option<usize>,
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
    pub max_queries: u64,
    pub wall_ms: u64,
    /// `ok`, or the error that aborted the trial.
    pub status: String,
}

/// Aggregate over the trials of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub point: usize,
    pub trials: usize,
    pub failures: usize,
    pub holds: usize,
    pub within: usize,
    pub max_queries: u64,
    /// Wilson 95% interval for the within-bound frequency.
    pub ci: (f64, f64),
}

impl Summary {
    pub fn holds_fraction(&self) -> f64 {
        self.holds as f64 / self.trials as f64
    }

    pub fn within_fraction(&self) -> f64 {
        self.within as f64 / self.trials as f64
    }
}

/// Result of a run: trial rows of every grid point followed by their summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub points: Vec<ExperimentConfig>,
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<Summary>,
}

/// `x` rounded to 9 significant digits, printed in shortest form.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("scientific notation parses");
    format!("{rounded}")
}

fn wilson(successes: usize, trials: usize) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + Z * Z / n;
    let centre = (p + Z * Z / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + Z * Z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

struct Outcome {
    holds: Option<bool>,
    added: Option<usize>,
    max_queries: u64,
}

/// Evaluates every ordered (directed) or unordered pair, recording the most
/// base-oracle calls any single answer needed.
fn evaluate_all<E: EdgeOracle + ?Sized>(
    recon: &E,
    handle: &OracleHandle<'_>,
) -> Result<(SparseGraph, u64), BenchError> {
    let n = recon.vertex_count();
    let directed = recon.is_directed();
    let mut edges = Vec::new();
    let mut max = 0;
    for u in 1..=n {
        let start = if directed { 1 } else { u + 1 };
        for v in start..=n {
            if u == v {
                continue;
            }
            handle.reset();
            if recon.has_edge(u, v)? {
                edges.push((u, v));
            }
            max = max.max(handle.queries());
        }
    }
    let m = recon.edge_budget().max(edges.len());
    let g = if directed {
        SparseGraph::directed(n, m, edges)?
    } else {
        SparseGraph::undirected(n, m, edges)?
    };
    Ok((g, max))
}

fn sample_queries<E: EdgeOracle + ?Sized>(
    recon: &E,
    handle: &OracleHandle<'_>,
    count: usize,
    seed: u64,
) -> Result<u64, QueryError> {
    let n = recon.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = 0;
    for _ in 0..count {
        let u: Vertex = rng.random_range(1..=n);
        let mut v: Vertex = rng.random_range(1..n);
        if v >= u {
            v += 1;
        }
        handle.reset();
        recon.has_edge(u, v)?;
        max = max.max(handle.queries());
    }
    Ok(max)
}

fn measure<E: EdgeOracle + ?Sized>(
    cfg: &ExperimentConfig,
    recon: &E,
    handle: &OracleHandle<'_>,
    input: &SparseGraph,
    property: Property,
    seed: u64,
) -> Result<Outcome, BenchError> {
    match cfg.mode {
        Mode::Queries => Ok(Outcome {
            holds: None,
            added: None,
            max_queries: sample_queries(recon, handle, cfg.queries, seed)?,
        }),
        Mode::Materialize => {
            let (out, max_queries) = evaluate_all(recon, handle)?;
            Ok(Outcome {
                holds: Some(property.holds(&out)?),
                added: Some(out.edge_count() - input.edge_count()),
                max_queries,
            })
        }
    }
}

fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<(Outcome, u64), (BenchError, u64)> {
    let seed = mix64(cfg.seed ^ mix64(trial as u64 + 1));
    let inner = || -> Result<Outcome, BenchError> {
        let g = generate(cfg.kind(), cfg.n, cfg.m, cfg.extra(), seed)?;
        let (h, _cert) = corrupt(&g, cfg.corruption(), mix64(seed ^ 1))?;
        let handle = OracleHandle::new(&h);
        let rseed = mix64(seed ^ 2);
        let qseed = mix64(seed ^ 3);
        match cfg.property {
            Target::Conn => {
                let r = Connected::new(&handle, &cfg.conn_config(rseed))?;
                measure(cfg, &r, &handle, &h, Property::Connected, qseed)
            }
            Target::ModConn => {
                let r = ModConnected::new(&handle, &cfg.conn_config(rseed))?;
                measure(cfg, &r, &handle, &h, Property::Connected, qseed)
            }
            Target::Strong => {
                let r = StronglyConnected::new(&handle, &cfg.strong_config(rseed))?;
                measure(cfg, &r, &handle, &h, Property::StronglyConnected, qseed)
            }
            Target::KConn => {
                let r = KConnected::new(&handle, &cfg.kconn_config(rseed))?;
                measure(cfg, &r, &handle, &h, Property::KEdgeConnected(cfg.k), qseed)
            }
            Target::Diam => {
                let r = SmallDiam::new(&handle, &cfg.diam_config(rseed))?;
                let target = Property::DiameterAtMost(2 * r.params().radius + 2);
                if cfg.mode == Mode::Queries {
                    return measure(cfg, &r, &handle, &h, target, qseed);
                }
                let (out, max_queries) = evaluate_all(&r, &handle)?;
                // count only what the dominating-set step adds on top of G′
                let (gp, _) = evaluate_all(r.g_prime(), &handle)?;
                Ok(Outcome {
                    holds: Some(target.holds(&out)?),
                    added: Some(out.edge_count() - gp.edge_count()),
                    max_queries,
                })
            }
        }
    };
    match inner() {
        Ok(o) => Ok((o, seed)),
        Err(e) => Err((e, seed)),
    }
}

fn record(cfg: &ExperimentConfig, trial: usize, bound: f64) -> TrialRecord {
    let start = Instant::now();
    let result = run_trial(cfg, trial);
    let wall_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let mut r = TrialRecord {
        trial,
        property: cfg.property.tag(),
        n: cfg.n,
        m_bound: cfg.m,
        eps: cfg.eps,
        alpha: cfg.alpha,
        delta: cfg.delta,
        gamma: cfg.gamma,
        c: cfg.c,
        k: cfg.k,
        diameter: cfg.diameter,
        seed: 0,
        property_holds: None,
        edges_added: None,
        bound: None,
        within_bound: None,
        max_queries: 0,
        wall_ms,
        status: "ok".into(),
    };
    match result {
        Ok((o, seed)) => {
            r.seed = seed;
            r.property_holds = o.holds;
            r.edges_added = o.added;
            r.max_queries = o.max_queries;
            if let Some(a) = o.added {
                r.bound = Some(bound);
                r.within_bound = Some(a as f64 <= bound + 1e-9);
            }
        }
        Err((e, seed)) => {
            r.seed = seed;
            r.status = format!("error: {e}");
        }
    }
    r
}

/// Runs every grid point, trials in parallel, rows in trial order.
///
/// Parameter problems (bad config, unsatisfiable constraints) are reported
/// as errors; failures inside a trial become rows with an error status.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, BenchError> {
    let points = config.points();
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for (i, p) in points.iter().enumerate() {
        p.validate()?;
        p.check_parameters()?;
        let bound = p.bound()?;
        let rows: Vec<TrialRecord> = (0..p.trials).into_par_iter().map(|t| record(p, t, bound)).collect();
        let failures = rows.iter().filter(|r| r.status != "ok").count();
        let holds = rows.iter().filter(|r| r.property_holds == Some(true)).count();
        let within = rows.iter().filter(|r| r.within_bound == Some(true)).count();
        summaries.push(Summary {
            point: i,
            trials: p.trials,
            failures,
            holds,
            within,
            max_queries: rows.iter().map(|r| r.max_queries).max().unwrap_or(0),
            ci: wilson(within, p.trials),
        });
        records.extend(rows);
    }
    Ok(ExperimentResult {
        points,
        records,
        summaries,
    })
}

pub const CSV_HEADER: [&str; 21] = [
    "trial",
    "property",
    "n",
    "m_bound",
    "eps",
    "alpha",
    "delta",
    "gamma",
    "c",
    "k",
    "D",
    "seed",
    "property_holds",
    "edges_added",
    "bound",
    "within_bound",
    "max_queries",
    "wall_ms",
    "status",
    "ci_low",
    "ci_high",
];

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn point_fields(p: &ExperimentConfig) -> [String; 10] {
    [
        p.property.tag().to_string(),
        p.n.to_string(),
        p.m.to_string(),
        format_float(p.eps),
        format_float(p.alpha),
        format_float(p.delta),
        format_float(p.gamma),
        format_float(p.c),
        p.k.to_string(),
        p.diameter.to_string(),
    ]
}

impl ExperimentResult {
    /// Writes trial rows then one summary row per grid point. In summary
    /// rows `property_holds` and `within_bound` carry frequencies.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), BenchError> {
        let csv_err = |e: csv::Error| BenchError::Experiment(format!("writing CSV: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in &self.records {
            let mut row = vec![r.trial.to_string()];
            row.extend([
                r.property.to_string(),
                r.n.to_string(),
                r.m_bound.to_string(),
                format_float(r.eps),
                format_float(r.alpha),
                format_float(r.delta),
                format_float(r.gamma),
                format_float(r.c),
                r.k.to_string(),
                r.diameter.to_string(),
                r.seed.to_string(),
                opt(r.property_holds),
                opt(r.edges_added),
                opt(r.bound.map(format_float)),
                opt(r.within_bound),
                r.max_queries.to_string(),
                r.wall_ms.to_string(),
                r.status.clone(),
                String::new(),
                String::new(),
            ]);
            w.write_record(&row).map_err(csv_err)?;
        }
        for (s, p) in self.summaries.iter().zip(&self.points) {
            let mut row = vec!["summary".to_string()];
            row.extend(point_fields(p));
            row.extend([
                p.seed.to_string(),
                format_float(s.holds_fraction()),
                String::new(),
                opt(p.bound().ok().map(format_float)),
                format_float(s.within_fraction()),
                s.max_queries.to_string(),
                String::new(),
                format!("failures={}", s.failures),
                format_float(s.ci.0),
                format_float(s.ci.1),
            ]);
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|source| BenchError::Io {
            path: "<csv output>".into(),
            source,
        })?;
        Ok(())
    }
}

/// Reads a config file, runs it, and writes the CSV to `out`.
pub fn run_experiment_file(config: &Path, out: &Path) -> Result<ExperimentResult, BenchError> {
    let cfg = ExperimentConfig::load(config)?;
    let result = run_experiment(&cfg)?;
    let file = std::fs::File::create(out).map_err(|source| BenchError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    result.write_csv(std::io::BufWriter::new(file))?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
property = "conn"
n = 100
m = 200
eps = 0.05
trials = 6
seed = 3
"#;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(100.0), "100");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333");
        assert_eq!(format_float(123456789012.0), "123456789000");
    }

    #[test]
    fn wilson_interval_brackets() {
        let (lo, hi) = wilson(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((hi - lo - 0.19).abs() < 0.01);
        assert_eq!(wilson(0, 10).0, 0.0);
    }

    #[test]
    fn rows_plus_summary_and_deterministic() {
        let cfg = ExperimentConfig::parse(SMALL).unwrap();
        let a = run_experiment(&cfg).unwrap();
        assert_eq!(a.records.len(), 6);
        assert_eq!(a.summaries.len(), 1);
        assert!(a.records.iter().all(|r| r.status == "ok" && r.property_holds == Some(true)));
        let bound = a.records[0].bound.unwrap();
        assert!((bound - 2.0 * 0.05 * 200.0).abs() < 1e-12);
        let mut x = Vec::new();
        let mut y = Vec::new();
        a.write_csv(&mut x).unwrap();
        run_experiment(&cfg).unwrap().write_csv(&mut y).unwrap();
        assert_eq!(x, y);
        let text = String::from_utf8(x).unwrap();
        assert_eq!(text.lines().count(), 1 + 6 + 1);
        assert!(text.starts_with("trial,property,n,m_bound,eps,alpha,delta,gamma,c,k,D,seed,property_holds"));
    }

    #[test]
    fn grid_expands() {
        let text = format!("{SMALL}\n[grid]\nalpha = [1.0, 2.0]\nk = [2, 3]\n");
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let pts = cfg.points();
        assert_eq!(pts.len(), 4);
        assert_eq!((pts[1].alpha, pts[1].k), (1.0, 3));
    }

    #[test]
    fn query_mode_leaves_verification_blank() {
        let text = SMALL.replace("trials = 6", "trials = 2\nmode = \"queries\"\nqueries = 50");
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let r = run_experiment(&cfg).unwrap();
        for rec in &r.records {
            assert_eq!(rec.property_holds, None);
            assert!(rec.max_queries > 0);
        }
    }

    #[test]
    fn parameter_errors_surface() {
        assert!(ExperimentConfig::parse("property = \"conn\"").is_err());
        assert!(ExperimentConfig::parse(&format!("{SMALL}\nbogus = 1")).is_err());
        // δαεm = 0.2 ≤ 1
        let cfg = ExperimentConfig::parse(&SMALL.replace("eps = 0.05", "eps = 0.005")).unwrap();
        assert!(run_experiment(&cfg).unwrap_err().is_parameter_error());
    }

    #[test]
    fn every_target_runs() {
        for (prop, extra) in [
            ("modconn", ""),
            ("strong", "n = 60\nm = 180\ndefects = 4"),
            ("diam", "n = 60\nm = 180"),
            ("kconn", "n = 60\nm = 180\nalpha = 22.5\nk = 2"),
        ] {
            let mut text = format!("property = \"{prop}\"\neps = 0.1\ntrials = 2\n");
            if extra.is_empty() {
                text.push_str("n = 100\nm = 200\n");
            } else {
                text.push_str(extra);
            }
            let cfg = ExperimentConfig::parse(&text).unwrap();
            let r = run_experiment(&cfg).unwrap();
            for rec in &r.records {
                assert_eq!(rec.status, "ok", "{prop}");
                assert_eq!(rec.property_holds, Some(true), "{prop}");
            }
        }
    }
}
