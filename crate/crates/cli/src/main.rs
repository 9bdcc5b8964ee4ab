use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graph_recon::bench::{self, BenchError, Certificate, Corruption, GraphKind};
use graph_recon::connect::{ConnConfig, Connected, ModConnected};
use graph_recon::diameter::{DiamConfig, SmallDiam};
use graph_recon::error::{GraphError, ReconError};
use graph_recon::exact::Property;
use graph_recon::graph::{SparseGraph, Vertex};
use graph_recon::kconn::{KConnConfig, KConnected};
use graph_recon::oracle::{materialize_edges, EdgeOracle, OracleHandle};
use graph_recon::strong::{StrongConnConfig, StronglyConnected};
use graph_recon::tolerant::{tolerant_connectivity, ConnectivityTester, ExactTester, PropertyTester};

#[derive(Parser)]
#[command(name = "grecon", version, about = "Local reconstruction of sparse graph properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance that has a property.
    Gen(GenArgs),
    /// Delete edges from an instance and write a distance certificate.
    Corrupt(CorruptArgs),
    /// Answer queries about, or materialize, the corrected graph.
    Reconstruct(ReconArgs),
    /// Run the property tester or the tolerant tester.
    Test(TestArgs),
    /// Run an experiment config and write CSV.
    Bench(BenchArgs),
    /// Re-validate a certificate against a corrupted graph.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Connected,
    Kconn,
    Strong,
    Lowdiam,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prop {
    Conn,
    Modconn,
    Strong,
    Kconn,
    Diam,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long = "D", default_value_t = 3)]
    diameter: usize,
    /// Random edges on top of the skeleton (default: half the spare budget).
    #[arg(long)]
    extra: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CorruptArgs {
    #[arg(long)]
    property: Prop,
    /// Target distance; the corruption is sized to stay within it.
    #[arg(long, required_unless_present = "defects")]
    eps: Option<f64>,
    /// Exact corruption size instead of `--eps`.
    #[arg(long)]
    defects: Option<usize>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long = "D", default_value_t = 3)]
    diameter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long, default_value_t = 0.1)]
    c: f64,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long = "D", default_value_t = 3)]
    diameter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReconArgs {
    #[arg(long)]
    property: Prop,
    #[command(flatten)]
    params: Params,
    #[arg(long = "in")]
    input: PathBuf,
    /// Ask about a single pair.
    #[arg(long, num_args = 2, value_names = ["U", "V"], conflicts_with = "materialize")]
    query: Option<Vec<Vertex>>,
    /// Write the whole corrected graph.
    #[arg(long, required_unless_present = "query")]
    materialize: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TestMode {
    Tester,
    Tolerant,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    mode: TestMode,
    #[arg(long)]
    property: Prop,
    /// Closeness the tolerant tester accepts (and the tester's ε in tester mode).
    #[arg(long)]
    eps1: f64,
    /// Tester parameter ε′ in tolerant mode.
    #[arg(long = "eps-prime", default_value_t = 0.05)]
    eps_prime: f64,
    #[arg(long, default_value_t = 0.02)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    #[arg(long, default_value_t = 0.01)]
    c: f64,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long = "D", default_value_t = 3)]
    diameter: usize,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Defaults to `<in>.cert`.
    #[arg(long)]
    cert: Option<PathBuf>,
}

/// Failure classes, one per exit code.
enum Failure {
    Parameter(String),
    Verification(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parameter(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parameter(m) | Failure::Verification(m) | Failure::Io(m) => m,
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        let msg = e.to_string();
        if e.is_io_error() || matches!(e, BenchError::Graph(GraphError::Parse { .. })) {
            Failure::Io(msg)
        } else if matches!(e, BenchError::Certificate(_)) {
            Failure::Verification(msg)
        } else {
            Failure::Parameter(msg)
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        BenchError::from(e).into()
    }
}

impl From<ReconError> for Failure {
    fn from(e: ReconError) -> Self {
        BenchError::from(e).into()
    }
}

impl From<graph_recon::error::ConfigError> for Failure {
    fn from(e: graph_recon::error::ConfigError) -> Self {
        Failure::Parameter(e.to_string())
    }
}

impl From<graph_recon::error::QueryError> for Failure {
    fn from(e: graph_recon::error::QueryError) -> Self {
        Failure::Parameter(e.to_string())
    }
}

impl From<graph_recon::error::CheckError> for Failure {
    fn from(e: graph_recon::error::CheckError) -> Self {
        Failure::Parameter(e.to_string())
    }
}

fn load(path: &Path) -> Result<SparseGraph, Failure> {
    Ok(SparseGraph::load(path)?)
}

fn save(g: &SparseGraph, path: &Path) -> Result<(), Failure> {
    Ok(g.save(path)?)
}

fn property_of(p: Prop, k: usize, diameter: usize) -> Property {
    match p {
        Prop::Conn | Prop::Modconn => Property::Connected,
        Prop::Strong => Property::StronglyConnected,
        Prop::Kconn => Property::KEdgeConnected(k),
        Prop::Diam => Property::DiameterAtMost(diameter),
    }
}

fn gen(a: GenArgs) -> Result<(), Failure> {
    let kind = match a.kind {
        Kind::Connected => GraphKind::Connected,
        Kind::Kconn => GraphKind::KConnected { k: a.k },
        Kind::Strong => GraphKind::StronglyConnected,
        Kind::Lowdiam => GraphKind::LowDiameter { diameter: a.diameter },
    };
    let skel = bench::skeleton_size(kind, a.n);
    let extra = a.extra.unwrap_or(a.m.saturating_sub(skel) / 2);
    let g = bench::generate(kind, a.n, a.m, extra, a.seed)?;
    save(&g, &a.out)?;
    println!("wrote {} vertices, {} edges, budget {}", g.n(), g.edge_count(), g.m_bound());
    Ok(())
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".cert");
    PathBuf::from(s)
}

fn corrupt(a: CorruptArgs) -> Result<(), Failure> {
    let g = load(&a.input)?;
    let property = property_of(a.property, a.k, a.diameter);
    let how = match (a.defects, a.eps) {
        (Some(d), _) => match property {
            Property::Connected => Corruption::Components { components: d + 1 },
            Property::StronglyConnected => Corruption::SourcesSinks { count: d },
            Property::KEdgeConnected(k) => Corruption::KCuts { k, max_removed: d },
            Property::DiameterAtMost(diameter) => Corruption::Spokes { diameter, spokes: d },
        },
        (None, Some(eps)) => Corruption::for_eps(property, eps, g.m_bound()),
        (None, None) => return Err(Failure::Parameter("give --eps or --defects".into())),
    };
    let (h, cert) = bench::corrupt(&g, how, a.seed)?;
    save(&h, &a.out)?;
    let cert_path = sidecar(&a.out);
    cert.save(&cert_path)?;
    // re-read to make sure what was written still validates
    Certificate::load(&cert_path)?.validate(&load(&a.out)?)?;
    println!(
        "removed {} edges; distance {} {} ({} pairs); certificate {}",
        cert.removed.len(),
        if cert.exact { "=" } else { "≤" },
        bench::format_float(cert.distance()),
        cert.distance_pairs,
        cert_path.display()
    );
    Ok(())
}

fn answer<E: EdgeOracle + ?Sized>(
    recon: &E,
    handle: &OracleHandle<'_>,
    input: &SparseGraph,
    target: Property,
    a: &ReconArgs,
) -> Result<(), Failure> {
    if let Some(q) = &a.query {
        handle.reset();
        let bit = recon.has_edge(q[0], q[1])?;
        println!("{}", u8::from(bit));
        println!("queries: {}", handle.queries());
        return Ok(());
    }
    let out = materialize_edges(recon)?;
    let path = a.materialize.as_ref().expect("clap requires --query or --materialize");
    save(&out, path)?;
    let added = out.edge_count() - input.edge_count();
    let holds = target.holds(&out)?;
    println!("edges added: {added}");
    println!("property holds: {holds}");
    if holds {
        Ok(())
    } else {
        Err(Failure::Verification(format!("corrected graph fails {target:?}")))
    }
}

fn reconstruct(a: ReconArgs) -> Result<(), Failure> {
    let g = load(&a.input)?;
    let handle = OracleHandle::new(&g);
    let p = &a.params;
    let conn = ConnConfig::new(p.eps, p.alpha, p.delta, p.c, p.seed);
    match a.property {
        Prop::Conn => answer(&Connected::new(&handle, &conn)?, &handle, &g, Property::Connected, &a),
        Prop::Modconn => answer(&ModConnected::new(&handle, &conn)?, &handle, &g, Property::Connected, &a),
        Prop::Strong => {
            let cfg = StrongConnConfig::new(p.eps, p.alpha, p.delta, p.seed);
            answer(&StronglyConnected::new(&handle, &cfg)?, &handle, &g, Property::StronglyConnected, &a)
        }
        Prop::Kconn => {
            let cfg = KConnConfig::new(p.eps, p.alpha, p.delta, p.gamma, p.c, p.k, p.seed);
            answer(&KConnected::new(&handle, &cfg)?, &handle, &g, Property::KEdgeConnected(p.k), &a)
        }
        Prop::Diam => {
            let cfg = DiamConfig::new(p.eps, p.alpha, p.delta, p.c, p.diameter, p.seed);
            let r = SmallDiam::new(&handle, &cfg)?;
            let target = Property::DiameterAtMost(2 * r.params().radius + 2);
            answer(&r, &handle, &g, target, &a)
        }
    }
}

fn test(a: TestArgs) -> Result<(), Failure> {
    let g = load(&a.input)?;
    let mut accepted = 0;
    match a.mode {
        TestMode::Tester => {
            let property = property_of(a.property, a.k, a.diameter);
            for t in 0..a.trials {
                let seed = a.seed.wrapping_add(t);
                let ok = if a.property == Prop::Conn || a.property == Prop::Modconn {
                    ConnectivityTester::new(a.eps1).run(&g, seed)?.accept
                } else {
                    PropertyTester::<SparseGraph>::test(&ExactTester { property }, &g, seed)?
                };
                accepted += u64::from(ok);
            }
        }
        TestMode::Tolerant => {
            if !matches!(a.property, Prop::Conn | Prop::Modconn) {
                return Err(Failure::Parameter("tolerant mode supports --property conn only".into()));
            }
            for t in 0..a.trials {
                let seed = a.seed.wrapping_add(t);
                let cfg = ConnConfig::new(a.eps1, a.alpha, a.delta, a.c, seed);
                let v = tolerant_connectivity(&g, &cfg, a.eps_prime, a.beta, seed)?;
                accepted += u64::from(v.accept);
            }
        }
    }
    println!("accepted {accepted} of {} trials", a.trials);
    Ok(())
}

fn run_bench(a: BenchArgs) -> Result<(), Failure> {
    let result = bench::run_experiment_file(&a.config, &a.out)?;
    for (s, p) in result.summaries.iter().zip(&result.points) {
        println!(
            "{} n={} m={} eps={} alpha={}: property {}/{}, within bound {}/{} (95% CI {}..{}), failures {}",
            p.property.tag(),
            p.n,
            p.m,
            bench::format_float(p.eps),
            bench::format_float(p.alpha),
            s.holds,
            s.trials,
            s.within,
            s.trials,
            bench::format_float(s.ci.0),
            bench::format_float(s.ci.1),
            s.failures
        );
    }
    Ok(())
}

fn check(a: CheckArgs) -> Result<(), Failure> {
    let g = load(&a.input)?;
    let path = a.cert.unwrap_or_else(|| sidecar(&a.input));
    let cert = Certificate::load(&path)?;
    cert.validate(&g)?;
    println!("certificate valid: distance {} pairs", cert.distance_pairs);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Corrupt(a) => corrupt(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Test(a) => test(a),
        Command::Bench(a) => run_bench(a),
        Command::Check(a) => check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("grecon: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
