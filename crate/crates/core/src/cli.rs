//! The `cftspan` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::baselines::{baswana_sen, greedy_cft, parter_vft, BsConfig, ParterConfig, GREEDY_BUDGET};
use crate::colorset::ColorSet;
use crate::distsim::{simulate, Model, SimConfig, Variant};
use crate::ecft::{build_ecft_spanner, warmup_3spanner, CftConfig, Repetition};
use crate::engine::{Symmetry, Voting};
use crate::error::{Error, Result};
use crate::ftgame::{bob_forcing, check_certificate, parse_stream, play, Strategy, GAME_BUDGET};
use crate::graph::{generate_random, parse_graph, serialize_graph, ColorMode, ColoredGraph, ColoringPolicy, GenParams, Size};
use crate::params::{parse_rational, ParamConfig, ParamMode};
use crate::result::{parse_spanner_file, write_spanner_file, SpannerResult};
use crate::vcft::build_vcft_spanner;
use crate::verifier::{spanner_stats, verify_cft, verify_plain, verify_vft, VerifyMode, VerifyOptions, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cftspan", version, about = "Color fault-tolerant spanners: build, verify, simulate")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generate a random colored graph.
    Gen(GenArgs),
    /// Build a spanner.
    Span(SpanArgs),
    /// Check a spanner by fault enumeration.
    Verify(VerifyArgs),
    /// Run a construction as a synchronous distributed protocol.
    Sim(SimArgs),
    /// Play the online fault-tolerance game.
    Game(GameArgs),
    /// Sweep seeds over random graphs and print a stats table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Ecft,
    Vcft,
}

impl From<ModeArg> for ColorMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ecft => ColorMode::Ecft,
            ModeArg::Vcft => ColorMode::Vcft,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PolicyArg {
    Uniform,
    Legal,
    MonoBiased,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "ecft")]
    pub mode: ModeArg,
    #[arg(long)]
    pub n: usize,
    /// Number of edges.
    #[arg(long, conflicts_with = "density")]
    pub m: Option<usize>,
    /// Fraction of vertex pairs.
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub colors: u32,
    #[arg(long, default_value_t = 1.0)]
    pub wmin: f64,
    #[arg(long, default_value_t = 10.0)]
    pub wmax: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    pub policy: PolicyArg,
    #[arg(long)]
    pub multigraph: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "graph.txt")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Ecft,
    Vcft,
    Warmup3,
    BaswanaSen,
    ParterVft,
    Greedy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ParamArg {
    Paper,
    Practical,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VotingArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SymmetryArg {
    Sequential,
    Distributed,
}

/// Options shared by `span`, `sim` and `bench`.
#[derive(Args, Debug, Clone)]
pub struct BuildOpts {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub f: usize,
    /// Parameter regime of the park constructions.
    #[arg(long = "mode", value_enum, default_value = "practical")]
    pub params: ParamArg,
    /// Base D of the level parameters, e.g. 16 or 5/4.
    #[arg(long)]
    pub d_const: Option<String>,
    /// Constant c_ρ in ρ = p/(c_ρ·k(ln n + k²)).
    #[arg(long)]
    pub rho_const: Option<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    pub voting: VotingArg,
    /// Sampled voting draws c_s·⌈ln n⌉ voters (48 for parter-vft when unset).
    #[arg(long)]
    pub c_s: Option<u32>,
    #[arg(long, value_enum, default_value = "sequential")]
    pub symmetry: SymmetryArg,
    /// Global-cap constant of Baswana-Sen and the 3-spanner's first level.
    #[arg(long, default_value_t = 4.0)]
    pub c_g: f64,
    /// Cap constant of parter-vft.
    #[arg(long, default_value_t = 1.0)]
    pub c_parter: f64,
    /// Rerun the vertex-colored construction up to c_r·⌈ln n⌉ times while it is large.
    #[arg(long)]
    pub repeat: Option<u32>,
    #[arg(long, default_value_t = 8.0)]
    pub repeat_multiple: f64,
    #[arg(long, default_value_t = GREEDY_BUDGET)]
    pub greedy_budget: u128,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Machine-check invariants and replay safe decisions.
    #[arg(long)]
    pub audit: bool,
    /// Record per-edge decisions in the report.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug)]
pub struct SpanArgs {
    #[arg(long, value_enum, default_value = "ecft")]
    pub algo: Algo,
    #[command(flatten)]
    pub build: BuildOpts,
    #[arg(long, default_value = "graph.txt")]
    pub graph: PathBuf,
    /// Spanner file: header plus one kept edge id per line.
    #[arg(long, default_value = "spanner.txt")]
    pub out: PathBuf,
    /// JSON run report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Cft,
    Vft,
    Plain,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "cft")]
    pub kind: KindArg,
    /// Enumerate every fault set (the default).
    #[arg(long, conflicts_with = "sample")]
    pub exact: bool,
    /// Check the empty set plus N random fault sets.
    #[arg(long)]
    pub sample: Option<usize>,
    /// Compare all vertex pairs against G − F instead of edge by edge.
    #[arg(long)]
    pub all_pairs: bool,
    /// Override f from the spanner file.
    #[arg(long)]
    pub f: Option<usize>,
    /// Override k from the spanner file.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "graph.txt")]
    pub graph: PathBuf,
    #[arg(long, default_value = "spanner.txt")]
    pub spanner: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SimAlgo {
    Ecft,
    Vcft,
    BaswanaSen,
    ParterVft,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModelArg {
    Local,
    Congest,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    #[arg(long, value_enum, default_value = "ecft")]
    pub algo: SimAlgo,
    #[arg(long, value_enum, default_value = "local")]
    pub model: ModelArg,
    /// Words per edge and direction per round (CONGEST).
    #[arg(long, default_value_t = 64)]
    pub word_budget: usize,
    #[command(flatten)]
    pub build: BuildOpts,
    #[arg(long, default_value = "graph.txt")]
    pub graph: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AliceArg {
    Optimal,
    Park,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BobArg {
    Forcing,
    File,
}

#[derive(Args, Debug)]
pub struct GameArgs {
    #[arg(long, value_enum, default_value = "park")]
    pub alice: AliceArg,
    #[arg(long, value_enum, default_value = "forcing")]
    pub bob: BobArg,
    #[arg(long, default_value_t = 1)]
    pub f: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Set stream for `--bob file`.
    #[arg(long)]
    pub stream: Option<PathBuf>,
    /// Write "<keep|discard> <set>" lines here.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Coloring mode of the generated graphs.
    #[arg(long, value_enum, default_value = "ecft")]
    pub graph_mode: ModeArg,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 60)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub colors: u32,
    #[arg(long, value_enum, default_value = "uniform")]
    pub policy: PolicyArg,
    /// Algorithms to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "ecft,greedy")]
    pub algos: Vec<Algo>,
    /// Number of seeds, starting at --seed.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[command(flatten)]
    pub build: BuildOpts,
    /// Verify every output exactly.
    #[arg(long)]
    pub verify: bool,
}

fn seed_or_draw(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s: u64 = rand::random();
        eprintln!("seed: {s}");
        s
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_graph(path: &Path) -> Result<ColoredGraph> {
    parse_graph(&read(path)?)
}

impl BuildOpts {
    fn params(&self) -> Result<ParamConfig> {
        let mut p = match self.params {
            ParamArg::Paper => ParamConfig::paper(),
            ParamArg::Practical => ParamConfig::practical(),
        };
        if let Some(d) = &self.d_const {
            p.d = parse_rational(d)?;
        }
        if let Some(r) = self.rho_const {
            p.c_rho = r;
        }
        if p.mode == ParamMode::Paper && self.d_const.is_some() && p.d != ParamConfig::paper().d {
            return Err(Error::InvalidParams("paper mode fixes D = 16".into()));
        }
        Ok(p)
    }

    fn voting(&self, default_c_s: u32) -> Voting {
        match self.voting {
            VotingArg::Exact => Voting::Exact,
            VotingArg::Sampled => Voting::Sampled {
                c_s: self.c_s.unwrap_or(default_c_s),
            },
        }
    }

    fn cft(&self, seed: u64) -> Result<CftConfig> {
        Ok(CftConfig {
            params: self.params()?,
            seed,
            voting: self.voting(8),
            audit: self.audit,
            trace: self.trace,
            symmetry: match self.symmetry {
                SymmetryArg::Sequential => Symmetry::Sequential,
                SymmetryArg::Distributed => Symmetry::Distributed,
            },
            repetition: self.repeat.map(|c_r| Repetition {
                c_r,
                multiple: self.repeat_multiple,
            }),
            c_g: self.c_g,
        })
    }

    fn parter(&self, seed: u64) -> ParterConfig {
        ParterConfig {
            c: self.c_parter,
            voting: self.voting(48),
            seed,
            audit: self.audit,
        }
    }

    fn bs(&self, seed: u64) -> BsConfig {
        BsConfig {
            c_g: self.c_g,
            seed,
            audit: self.audit,
        }
    }

    fn build(&self, algo: Algo, g: &ColoredGraph, seed: u64) -> Result<SpannerResult> {
        let (f, k) = (self.f, self.k);
        match algo {
            Algo::Ecft => build_ecft_spanner(g, f, k, &self.cft(seed)?),
            Algo::Vcft => build_vcft_spanner(g, f, k, &self.cft(seed)?),
            Algo::Warmup3 => warmup_3spanner(g, f, &self.cft(seed)?),
            Algo::BaswanaSen => baswana_sen(g, k, &self.bs(seed)),
            Algo::ParterVft => parter_vft(g, f, k, &self.parter(seed)),
            Algo::Greedy => greedy_cft(g, f, k, self.greedy_budget),
        }
    }
}

fn policy(p: PolicyArg) -> ColoringPolicy {
    match p {
        PolicyArg::Uniform => ColoringPolicy::Uniform,
        PolicyArg::Legal => ColoringPolicy::Legal,
        PolicyArg::MonoBiased => ColoringPolicy::MonoBiased,
    }
}

fn cmd_gen(a: &GenArgs) -> Result<i32> {
    let seed = seed_or_draw(a.seed);
    let size = match (a.m, a.density) {
        (Some(m), _) => Size::Edges(m),
        (None, Some(d)) => Size::Density(d),
        (None, None) => return Err(Error::InvalidParams("give --m or --density".into())),
    };
    let g = generate_random(&GenParams {
        mode: a.mode.into(),
        n: a.n,
        size,
        color_count: a.colors,
        weight_range: (a.wmin, a.wmax),
        policy: policy(a.policy),
        multigraph: a.multigraph,
        seed,
    })?;
    write(&a.out, &serialize_graph(&g))?;
    println!("wrote {} ({} vertices, {} edges, {} colors)", a.out.display(), g.n(), g.m(), g.color_count());
    Ok(EXIT_OK)
}

fn cmd_span(a: &SpanArgs) -> Result<i32> {
    let seed = seed_or_draw(a.build.seed);
    let g = load_graph(&a.graph)?;
    let res = a.build.build(a.algo, &g, seed)?;
    let k = if a.algo == Algo::Warmup3 { 2 } else { res.k };
    write(&a.out, &write_spanner_file(k, res.f.max(a.build.f), &res.kept))?;
    if let Some(r) = &a.report {
        write(r, &res.report_json())?;
    }
    for w in &res.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{}: kept {} of {} edges (k={}, f={}, seed={}) -> {}",
        res.algorithm,
        res.size(),
        g.m(),
        k,
        res.f.max(a.build.f),
        seed,
        a.out.display()
    );
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let g = load_graph(&a.graph)?;
    let sp = parse_spanner_file(&read(&a.spanner)?, g.m())?;
    let (f, k) = (a.f.unwrap_or(sp.f), a.k.unwrap_or(sp.k));
    let opts = VerifyOptions {
        mode: match a.sample {
            Some(n) => VerifyMode::Sampled(n),
            None => VerifyMode::Exact,
        },
        seed: a.seed.unwrap_or(0),
        budget: a.budget,
        all_pairs: a.all_pairs,
        jobs: a.jobs,
    };
    let rep = match a.kind {
        KindArg::Cft => verify_cft(&g, &sp.kept, f, k, &opts)?,
        KindArg::Vft => verify_vft(&g, &sp.kept, f, k, &opts)?,
        KindArg::Plain => verify_plain(&g, &sp.kept, k, &opts)?,
    };
    let out = serde_json::to_string_pretty(&json!({
        "report": rep,
        "stats": spanner_stats(&g, &sp.kept, k, f),
    }))
    .expect("serializes");
    match &a.report {
        Some(p) => write(p, &out)?,
        None => println!("{out}"),
    }
    println!("{}", if rep.pass { "PASS" } else { "FAIL" });
    Ok(if rep.pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_sim(a: &SimArgs) -> Result<i32> {
    let seed = seed_or_draw(a.build.seed);
    let g = load_graph(&a.graph)?;
    let cfg = SimConfig {
        cft: a.build.cft(seed)?,
        parter: a.build.parter(seed),
        bs: a.build.bs(seed),
    };
    let variant = match a.algo {
        SimAlgo::Ecft => Variant::Ecft,
        SimAlgo::Vcft => Variant::Vcft,
        SimAlgo::BaswanaSen => Variant::BaswanaSen,
        SimAlgo::ParterVft => Variant::ParterVft,
    };
    let model = match a.model {
        ModelArg::Local => Model::Local,
        ModelArg::Congest => Model::Congest(a.word_budget),
    };
    let (res, log) = simulate(&g, a.build.f, a.build.k, variant, model, &cfg, seed)?;
    if let Some(o) = &a.out {
        write(o, &write_spanner_file(res.k, res.f, &res.kept))?;
    }
    let out = serde_json::to_string_pretty(&json!({ "spanner_size": res.size(), "rounds": log })).expect("serializes");
    match &a.report {
        Some(p) => write(p, &out)?,
        None => println!("{out}"),
    }
    Ok(EXIT_OK)
}

fn cmd_game(a: &GameArgs) -> Result<i32> {
    let (universe, sets): (u32, Vec<ColorSet>) = match a.bob {
        BobArg::Forcing => bob_forcing(a.f, a.k),
        BobArg::File => {
            let p = a
                .stream
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("--bob file needs --stream".into()))?;
            parse_stream(&read(p)?)?
        }
    };
    let strategy = match a.alice {
        AliceArg::Optimal => Strategy::Optimal,
        AliceArg::Park => Strategy::Park,
    };
    let game = play(universe, a.f, a.k, strategy, &sets)?;
    let ok = check_certificate(universe, game.all(), game.kept(), a.f, GAME_BUDGET)?;
    if let Some(t) = &a.trace_out {
        write(t, &game.trace())?;
    }
    println!("{}", serde_json::to_string_pretty(&game.summary(Some(ok))).expect("serializes"));
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn algo_name(a: Algo) -> &'static str {
    match a {
        Algo::Ecft => "ecft",
        Algo::Vcft => "vcft",
        Algo::Warmup3 => "warmup3",
        Algo::BaswanaSen => "baswana-sen",
        Algo::ParterVft => "parter-vft",
        Algo::Greedy => "greedy",
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<i32> {
    let base = a.build.seed.unwrap_or(0);
    let (f, k) = (a.build.f, a.build.k);
    let reference = (a.n as f64).powf(1.0 + 1.0 / k as f64);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>6} {:>12} {:>5} {:>5} {:>6} {:>10} {:>9} {:>9} {:>6}",
        "seed", "algo", "n", "m", "size", "size/n^1+", "postpone", "fallback", "pass"
    );
    let mut failed = false;
    for s in base..base + a.seeds {
        let g = generate_random(&GenParams {
            mode: a.graph_mode.into(),
            n: a.n,
            size: Size::Edges(a.m),
            color_count: a.colors,
            weight_range: (1.0, 10.0),
            policy: policy(a.policy),
            multigraph: false,
            seed: s,
        })?;
        for &algo in &a.algos {
            let res = a.build.build(algo, &g, s)?;
            let post: usize = res.levels.iter().map(|l| l.postponed_edges).sum();
            let fb: usize = res
                .levels
                .iter()
                .map(|l| l.fallback_sampler + l.fallback_no_witness + l.fallback_last_level)
                .sum();
            let pass = if a.verify {
                let kk = if algo == Algo::Warmup3 { 2 } else { k };
                let opts = VerifyOptions::default();
                let rep = match algo {
                    Algo::BaswanaSen => verify_plain(&g, &res.kept, kk, &opts)?,
                    Algo::ParterVft => verify_vft(&g, &res.kept, f, kk, &opts)?,
                    _ => verify_cft(&g, &res.kept, f, kk, &opts)?,
                };
                failed |= !rep.pass;
                if rep.pass { "yes" } else { "NO" }
            } else {
                "-"
            };
            let _ = writeln!(
                out,
                "{:>6} {:>12} {:>5} {:>5} {:>6} {:>10.4} {:>9} {:>9} {:>6}",
                s,
                algo_name(algo),
                g.n(),
                g.m(),
                res.size(),
                res.size() as f64 / reference,
                post,
                fb,
                pass
            );
        }
    }
    print!("{out}");
    Ok(if failed { EXIT_FAIL } else { EXIT_OK })
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::LemmaViolation(_) | Error::ParkViolation { .. } | Error::SimulationFault(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Span(a) => cmd_span(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Sim(a) => cmd_sim(a),
        Cmd::Game(a) => cmd_game(a),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
