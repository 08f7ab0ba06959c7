//! `fdt` command line: generators, solvers, certificate checks and batch experiments.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fdt::ec2::{fdt_2ec, verify_2ec_certificate, SubtourPoint};
use fdt::fdt::{fdt_dive, fdt_tree};
use fdt::gen::{cv::fig3_matching, enumerate_cv, gen_cv, gen_tap, gen_vc, random_graph, read_pace};
use fdt::graph::Graph;
use fdt::harness::{self, lp_optimum, ExperimentReport, VcOptions};
use fdt::model::{load_point, write_json};
use fdt::scalar::convert_vec;
use fdt::{verify_certificate, Certificate, FdtError, IpInstance, Mode, Rational, Result, Scalar};

#[derive(Parser)]
#[command(name = "fdt", version, about = "Fractional decomposition trees for binary and 2EC programs")]
struct Cli {
    /// Exact rational arithmetic.
    #[arg(long, global = true, conflicts_with = "float")]
    rational: bool,
    /// Floating-point arithmetic even for small instances.
    #[arg(long, global = true)]
    float: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batch runs (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output file, directory or report stem depending on the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Decompose a point of a binary program, or dive from it.
    Solve(SolveArgs),
    /// Decompose a subtour point into 2-edge-connected multigraphs.
    #[command(name = "solve-2ec")]
    Solve2ec {
        #[arg(long)]
        point: PathBuf,
    },
    /// Turn a point of the dominant into a dominated feasible solution.
    Domtoip {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Check a certificate against a binary instance or a 2EC graph.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, required_unless_present = "graph")]
        instance: Option<PathBuf>,
        /// Point/graph JSON for 2EC certificates.
        #[arg(long, conflicts_with = "instance")]
        graph: Option<PathBuf>,
    },
    /// Tree augmentation on full binary trees.
    BenchTap {
        #[arg(long, default_value_t = 3)]
        min_levels: u32,
        #[arg(long, default_value_t = 5)]
        max_levels: u32,
        /// Instances per tree size.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// 2EC factors on enumerated cycle-and-paths points.
    BenchCv {
        #[arg(long, value_delimiter = ',', default_value = "10,12")]
        k: Vec<usize>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Vertex cover on graph files or random graphs.
    BenchVc {
        /// Edge-list graph files.
        graphs: Vec<PathBuf>,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        p: f64,
        /// Random graphs to draw when no files are given.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        dive_seeds: u64,
        /// Skip the full tree when the LP support is larger than this.
        #[arg(long, default_value_t = 60)]
        tree_limit: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
}

#[derive(Args)]
struct ReportArgs {
    /// Add wall time to the CSV.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Vertex cover from an edge-list file or a random graph.
    Vc {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        p: f64,
    },
    /// Tree augmentation cut LP; `--count` above 1 writes a batch and a manifest into `--out`.
    Tap {
        #[arg(long, default_value_t = 3)]
        levels: u32,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Cycle-and-paths subtour point.
    Cv {
        #[arg(long, default_value_t = 8)]
        k: usize,
        /// Pairs such as `0-4,1-6,2-5,3-7`; defaults to the standard 8-cycle example.
        #[arg(long)]
        matching: Option<String>,
        /// Path length per pair, comma separated (default all 1).
        #[arg(long, value_delimiter = ',')]
        paths: Vec<usize>,
        /// Write every enumerated point into `--out` instead.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Start point; the LP optimum when omitted.
    #[arg(long)]
    point: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Tree)]
    mode: Method,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Tree,
    Dive,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Float,
    Rational,
}

impl Cli {
    fn mode(&self, n: usize) -> Mode {
        if self.rational {
            Mode::Rational
        } else if self.float {
            Mode::Float
        } else {
            Mode::auto(n)
        }
    }

    fn require_out(&self) -> Result<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| FdtError::Validation("this command needs --out".into()))
    }
}

/// Writes to `--out` when given, stdout otherwise.
fn emit(out: Option<&Path>, value: &Value) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value).expect("JSON values always serialize"));
            Ok(())
        }
    }
}

fn parse_matching(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(|pair| {
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| FdtError::Parse(format!("pair `{pair}` should look like `a-b`")))?;
            let num = |s: &str| s.trim().parse::<usize>().map_err(|_| FdtError::Parse(format!("bad vertex `{s}`")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| FdtError::io(path, e))?;
    read_pace(&text)
}

fn cv_json(inst: &fdt::gen::CvInstance) -> Value {
    let mut v = inst.point.to_json();
    v["cycle_len"] = json!(inst.cycle_len);
    v["matching"] = json!(inst.matching.iter().map(|(a, b)| [*a, *b]).collect::<Vec<_>>());
    v["path_lengths"] = json!(inst.path_lengths);
    v
}

fn run_gen(cli: &Cli, cmd: &GenCommand) -> Result<()> {
    match cmd {
        GenCommand::Vc { graph, n, p } => {
            let g = match graph {
                Some(path) => load_graph(path)?,
                None => random_graph(*n, *p, cli.seed),
            };
            emit(cli.out.as_deref(), &gen_vc(&g, None)?.to_json(true))
        }
        GenCommand::Tap { levels, count } => {
            if *count <= 1 {
                let (_, ip) = gen_tap(*levels, cli.seed)?;
                return emit(cli.out.as_deref(), &ip.to_json(true));
            }
            let dir = cli.require_out()?;
            std::fs::create_dir_all(dir).map_err(|e| FdtError::io(dir, e))?;
            let mut shape = (0, 0);
            for i in 0..*count as u64 {
                let s = cli.seed.wrapping_add(i);
                let (tap, ip) = gen_tap(*levels, s)?;
                shape = (tap.tree.num_edges(), tap.links.len());
                ip.save(dir.join(format!("{}.json", ip.name)), true)?;
            }
            let manifest = json!({"levels": levels, "edges": shape.0, "links": shape.1, "count": count});
            write_json(dir.join("manifest.json"), &manifest)?;
            println!("{}", manifest);
            Ok(())
        }
        GenCommand::Cv { k, matching, paths, all } => {
            if *all {
                let dir = cli.require_out()?;
                std::fs::create_dir_all(dir).map_err(|e| FdtError::io(dir, e))?;
                let e = enumerate_cv(*k, cli.seed)?;
                for (i, inst) in e.instances.iter().enumerate() {
                    write_json(dir.join(format!("cv{k}-{i:03}.json")), &cv_json(inst))?;
                }
                println!(
                    "{}",
                    json!({"k": k, "classes": e.classes, "points": e.instances.len(), "labeled": e.labeled})
                );
                return Ok(());
            }
            let matching = match matching {
                Some(m) => parse_matching(m)?,
                None if *k == 8 => fig3_matching(),
                None => return Err(FdtError::Validation("--matching is required unless k = 8".into())),
            };
            let paths = if paths.is_empty() { vec![1; matching.len()] } else { paths.clone() };
            emit(cli.out.as_deref(), &cv_json(&gen_cv(*k, &matching, &paths, cli.seed)?))
        }
    }
}

fn solve_typed<S: Scalar>(cli: &Cli, inst: &IpInstance, point: Option<&[Rational]>, method: Method) -> Result<Value> {
    let x: Vec<S> = match point {
        Some(p) => convert_vec(p),
        None => lp_optimum::<S>(inst)?.0,
    };
    match method {
        Method::Tree => {
            let cert = fdt_tree(inst, &x)?;
            if let Some((i, c)) = cert.cheapest_by(|z| inst.integer_cost(z)) {
                eprintln!("factor {} with {} solutions; cheapest is #{i} at cost {c}", cert.factor, cert.len());
            }
            Ok(cert.to_json())
        }
        Method::Dive => {
            let run = fdt_dive(inst, &x, cli.seed)?;
            Ok(json!({
                "solution": run.solution,
                "cost": fdt::scalar::format_rational(&inst.integer_cost(&run.solution)),
                "seed": cli.seed,
            }))
        }
    }
}

fn verify_typed<S: Scalar>(cert_json: &Value, instance: Option<&Path>, graph: Option<&Path>) -> Result<bool> {
    let cert = Certificate::<S>::from_json(cert_json)?;
    let report = match (instance, graph) {
        (Some(p), _) => verify_certificate(&cert, &IpInstance::load(p)?)?,
        (None, Some(p)) => verify_2ec_certificate(&cert, &SubtourPoint::<Rational>::load(p)?.graph)?,
        (None, None) => return Err(FdtError::Validation("give --instance or --graph".into())),
    };
    match report.failure {
        None => {
            println!("valid: factor {}, {} solutions", cert.factor, cert.len());
            Ok(true)
        }
        Some(f) => {
            eprintln!("invalid certificate: {f}");
            Ok(false)
        }
    }
}

fn finish_report(cli: &Cli, report: &ExperimentReport, timing: bool) -> Result<()> {
    print!("{}", report.summary());
    match &cli.out {
        Some(stem) => report.save(stem, timing),
        None => {
            print!("{}", report.to_csv(timing)?);
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Gen(cmd) => run_gen(cli, cmd)?,
        Command::Solve(args) => {
            let inst = IpInstance::load(&args.instance)?;
            let point = args.point.as_ref().map(load_point).transpose()?;
            let value = match cli.mode(inst.num_vars) {
                Mode::Float => solve_typed::<f64>(cli, &inst, point.as_deref(), args.mode)?,
                Mode::Rational => solve_typed::<Rational>(cli, &inst, point.as_deref(), args.mode)?,
            };
            emit(cli.out.as_deref(), &value)?;
        }
        Command::Solve2ec { point } => {
            let p = SubtourPoint::<Rational>::load(point)?;
            let value = match cli.mode(p.graph.num_edges()) {
                Mode::Float => fdt_2ec(&p.convert::<f64>())?.to_json(),
                Mode::Rational => fdt_2ec(&p)?.to_json(),
            };
            emit(cli.out.as_deref(), &value)?;
        }
        Command::Domtoip { instance, point, mode } => {
            let inst = IpInstance::load(instance)?;
            let p = load_point(point)?;
            let mode = match mode {
                Some(ModeArg::Float) => Mode::Float,
                Some(ModeArg::Rational) => Mode::Rational,
                None => cli.mode(inst.num_vars),
            };
            let solution = match mode {
                Mode::Float => fdt::domtoip::dom_to_ip_from_fractional::<f64>(&inst, &convert_vec(&p))?,
                Mode::Rational => fdt::domtoip::dom_to_ip_from_fractional::<Rational>(&inst, &p)?,
            };
            emit(cli.out.as_deref(), &json!({ "solution": solution }))?;
        }
        Command::Verify { cert, instance, graph } => {
            let text = std::fs::read_to_string(cert).map_err(|e| FdtError::io(cert, e))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| FdtError::Parse(format!("certificate JSON at line {} column {}: {e}", e.line(), e.column())))?;
            let ok = match value.get("mode").and_then(Value::as_str) {
                Some("float") => verify_typed::<f64>(&value, instance.as_deref(), graph.as_deref())?,
                _ => verify_typed::<Rational>(&value, instance.as_deref(), graph.as_deref())?,
            };
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::BenchTap { min_levels, max_levels, count, report } => {
            let mode = cli.rational.then_some(Mode::Rational).or(cli.float.then_some(Mode::Float));
            let rep = harness::run_tap_experiment(*min_levels..=*max_levels, *count, cli.seed, mode);
            finish_report(cli, &rep, report.timing)?;
        }
        Command::BenchCv { k, report } => {
            let mode = cli.rational.then_some(Mode::Rational);
            let rep = harness::run_cv_experiment(k, cli.seed, mode)?;
            finish_report(cli, &rep, report.timing)?;
        }
        Command::BenchVc { graphs, n, p, count, dive_seeds, tree_limit, report } => {
            let inputs: Vec<(String, Graph)> = if graphs.is_empty() {
                (0..*count as u64)
                    .map(|i| {
                        let s = cli.seed.wrapping_add(i);
                        (format!("gnp-n{n}-s{s}"), random_graph(*n, *p, s))
                    })
                    .collect()
            } else {
                graphs
                    .iter()
                    .map(|g| Ok((g.display().to_string(), load_graph(g)?)))
                    .collect::<Result<_>>()?
            };
            let opts = VcOptions {
                dive_seeds: *dive_seeds,
                seed: cli.seed,
                tree_limit: *tree_limit,
                mode: cli.rational.then_some(Mode::Rational).or(cli.float.then_some(Mode::Float)),
            };
            let rep = harness::run_vc_experiment(&inputs, &opts);
            finish_report(cli, &rep, report.timing)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("FDT_LOG")).init();
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_unbounded_gap() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
