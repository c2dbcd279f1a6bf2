//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cases::{capacity_pair, classify, classify_one_way, partition7, partition9, CaseType, Major, Sub};
use crate::detmodel::{DiamondParams, Direction, LevelVector, Node, OneWay, Relay};
use crate::gaussian::{
    baseline_compare, corollary_sum_rate, diamond_achievable, log_grid, parse_reals, twr_achievable, write_compare_csv,
    GainSet,
};
use crate::strategies::{strategy2_repeats, strategy6_repeats};
use crate::verifier::oracle::{exhaustive, Precoders, Verdict};
use crate::verifier::{
    build_end_to_end, decode, sweep, verify_tuple_with, Diagram, SearchBudget, VerifyOptions, VerifyReport,
};

pub const JOBS_ENV: &str = "DIAMOND_JOBS";

#[derive(Debug, Parser)]
#[command(name = "diamond", about = "Two-way diamond channel: capacities, relay strategies and rank verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the cut-set capacities C_AB and C_BA.
    Capacity { params: DiamondParams },
    /// Print the case label of each direction.
    Classify { params: DiamondParams },
    /// Send random messages both ways and show every level.
    Simulate {
        params: DiamondParams,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that the chosen strategies reach both capacities.
    Verify {
        params: DiamondParams,
        #[command(flatten)]
        pipeline: Pipeline,
        /// Also print the level diagram.
        #[arg(long)]
        diagram: bool,
    },
    /// Verify every tuple with gains in 0..=max.
    Sweep(SweepArgs),
    /// Gaussian rate calculators.
    #[command(subcommand)]
    Gaussian(GaussianCommand),
    /// Search every linear one-block scheme of a small tuple.
    Certify {
        params: DiamondParams,
        /// Give up when the search space exceeds 2^limit points.
        #[arg(long, default_value_t = 30.0)]
        limit: f64,
        /// Only place message bits on distinct levels.
        #[arg(long)]
        placements: bool,
    },
    /// Write the repetition placements of strategies 2 and 6.
    Tables {
        #[arg(long, default_value_t = 8)]
        max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Pipeline {
    /// Skip overlap suppression, local search and exhaustive search.
    #[arg(long)]
    table_only: bool,
    /// Rank evaluations allowed for local search.
    #[arg(long, default_value_t = SearchBudget::default().evaluations)]
    budget: usize,
}

impl Pipeline {
    fn options(&self) -> VerifyOptions {
        if self.table_only {
            VerifyOptions::table_only()
        } else {
            VerifyOptions {
                search: Some(SearchBudget { evaluations: self.budget, depth: 2 }),
                ..VerifyOptions::default()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    max: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = JOBS_ENV, default_value_t = 0)]
    jobs: usize,
    /// Write per-tuple records here, and failing diagrams next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Only tuples whose forward label starts with this, e.g. Case3.1.2
    #[arg(long)]
    forward: Option<String>,
    #[arg(long)]
    backward: Option<String>,
    #[command(flatten)]
    pipeline: Pipeline,
}

#[derive(Debug, Subcommand)]
pub enum GaussianCommand {
    /// Two-way relay channel: hA1,h1B,hB1,h1A (or all eight gains).
    Relay { gains: String },
    /// Symmetric diamond: a,b,c,d.
    Diamond { gains: String },
    /// Strongest-path sum rate from eight gains.
    Corollary { gains: String },
    /// Cut-set bound, strongest-path rate and prior baseline over scaled gains, as CSV.
    Compare {
        #[arg(long)]
        h1: f64,
        #[arg(long)]
        h2: f64,
        #[arg(long, default_value_t = 0.01)]
        lo: f64,
        #[arg(long, default_value_t = 100.0)]
        hi: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Outcome {
    code: i32,
    stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout }
    }
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 when verification fails, 2 on bad input.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Like [`run`], writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn io::Write, err: &mut dyn io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            o.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn execute(cmd: Command) -> Result<Outcome, String> {
    match cmd {
        Command::Capacity { params } => {
            let c = capacity_pair(&params);
            Ok(Outcome::ok(format!("C_AB={} C_BA={}\n", c.ab, c.ba)))
        }
        Command::Classify { params } => Ok(Outcome::ok(classify_text(&params))),
        Command::Simulate { params, seed } => Ok(simulate_text(&params, seed)),
        Command::Verify { params, pipeline, diagram } => {
            let r = verify_tuple_with(&params, &pipeline.options());
            let mut s = format!("{r}\n");
            if diagram || !r.pass {
                s.push('\n');
                s.push_str(&r.diagram().to_string());
            }
            Ok(Outcome { code: if r.pass { 0 } else { 1 }, stdout: s })
        }
        Command::Sweep(args) => run_sweep(&args),
        Command::Gaussian(g) => gaussian(g),
        Command::Certify { params, limit, placements } => {
            let mode = if placements { Precoders::Placements } else { Precoders::Linear };
            Ok(certify_text(&params, mode, limit))
        }
        Command::Tables { max, out } => {
            let text = repetition_table(max);
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(Outcome::ok(format!("wrote {} records to {}\n", text.lines().count(), path.display())))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
    }
}

fn certify_text(params: &DiamondParams, mode: Precoders, limit: f64) -> Outcome {
    match exhaustive(params, mode, limit) {
        Verdict::Feasible { precoders, relays } => Outcome::ok(format!(
            "feasible precoders A={:?} B={:?} relays R1={:?} R2={:?}\n",
            precoders[0], precoders[1], relays[0].rows, relays[1].rows
        )),
        Verdict::Infeasible => Outcome { code: 1, stdout: "infeasible: no linear one-block scheme reaches both capacities\n".into() },
        Verdict::TooLarge { log2_size } => {
            Outcome { code: 2, stdout: format!("undecided: search space is 2^{log2_size:.1} points\n") }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn subspace(g: &OneWay) -> Option<String> {
    let label = classify_one_way(g).ok()?;
    let g1 = if label.typ == CaseType::Type1 { *g } else { g.swap_relays() };
    match (label.major, label.sub) {
        (Major::Case3, Sub::S12) => partition9(&g1).ok().map(|s| s.to_string()),
        (Major::Case4, Sub::S12) => partition7(&g1).ok().map(|s| s.to_string()),
        _ => None,
    }
}

pub fn classify_text(params: &DiamondParams) -> String {
    let mut s = String::new();
    for dir in [Direction::Forward, Direction::Backward] {
        let label = classify(params, dir).map_or_else(|_| "degenerate".to_string(), |l| l.to_string());
        let name = if dir == Direction::Forward { "forward " } else { "backward" };
        let _ = write!(s, "{name} {label}");
        if let Some(sub) = subspace(&params.direction(dir)) {
            let _ = write!(s, " {sub}");
        }
        s.push('\n');
    }
    s
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> LevelVector {
    LevelVector::from_bits((0..n).map(|_| rng.random::<bool>()).collect())
}

fn simulate_text(params: &DiamondParams, seed: u64) -> Outcome {
    let report = verify_tuple_with(params, &VerifyOptions::default());
    let a = &report.assignment;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ma = random_bits(&mut rng, a.plans[0].message_len());
    let mb = random_bits(&mut rng, a.plans[1].message_len());
    let mut s = format!("params {params}  strategies R1 {} / R2 {}  stage {}\n", report.strategies[0], report.strategies[1], report.stage);
    let _ = writeln!(s, "message A {ma}\nmessage B {mb}\n");
    s.push_str(&Diagram::concrete(params, a, &ma, &mb).to_string());
    s.push('\n');
    let mut ok = true;
    match build_end_to_end(params, a) {
        Ok(maps) => {
            for (dir, dst, own, want) in [(Direction::Forward, Node::B, &mb, &ma), (Direction::Backward, Node::A, &ma, &mb)] {
                let rx = maps.received(dst, &ma, &mb);
                let verdict = match decode(&maps, &rx, own, dir) {
                    Ok(got) if &got == want => format!("decoded {got}"),
                    Ok(got) => {
                        ok = false;
                        format!("WRONG {got}")
                    }
                    Err(e) => {
                        ok = false;
                        format!("FAIL {e}")
                    }
                };
                let _ = writeln!(s, "{} at {dst}: {verdict}", if dir == Direction::Forward { "A -> B" } else { "B -> A" });
            }
        }
        Err(e) => {
            ok = false;
            let _ = writeln!(s, "FAIL {e}");
        }
    }
    Outcome { code: if ok { 0 } else { 1 }, stdout: s }
}

fn label_matches(r: &DiamondParams, dir: Direction, prefix: &Option<String>) -> bool {
    match prefix {
        None => true,
        Some(p) => classify(r, dir).map_or_else(|_| "degenerate".to_string(), |l| l.to_string()).starts_with(p.as_str()),
    }
}

fn failure_dump(failures: &[VerifyReport]) -> String {
    let mut s = String::new();
    for r in failures {
        let _ = writeln!(s, "{}\n{}\n{}", r.record(), r, r.diagram());
    }
    s
}

fn run_sweep(args: &SweepArgs) -> Result<Outcome, String> {
    if args.max == 0 {
        return Err("--max must be at least 1".into());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build().map_err(|e| e.to_string())?;
    let keep = |p: &DiamondParams| label_matches(p, Direction::Forward, &args.forward) && label_matches(p, Direction::Backward, &args.backward);
    let filtered = args.forward.is_some() || args.backward.is_some();
    let opts = args.pipeline.options();
    let report = pool.install(|| sweep(args.max, filtered.then_some(&keep as _), &opts));
    let mut s = String::new();
    match args.format {
        Format::Records => s.push_str(&report.records()),
        Format::Text => {
            s.push_str(&report.to_string());
            for r in &report.failures {
                let _ = writeln!(s, "FAIL {}", r.record());
            }
        }
    }
    if let Some(path) = &args.out {
        write_file(path, &report.records())?;
        let mut cells = path.clone().into_os_string();
        cells.push(".cells");
        write_file(Path::new(&cells), &report.cell_table())?;
        if !report.failures.is_empty() {
            let mut name = path.clone().into_os_string();
            name.push(".failures");
            write_file(Path::new(&name), &failure_dump(&report.failures))?;
        }
    }
    Ok(Outcome { code: if report.all_pass() { 0 } else { 1 }, stdout: s })
}

fn gaussian(cmd: GaussianCommand) -> Result<Outcome, String> {
    match cmd {
        GaussianCommand::Relay { gains } => {
            let h: GainSet = gains.parse().map_err(|e| format!("{e}"))?;
            let r = twr_achievable(&h);
            let mut s = String::new();
            let _ = writeln!(s, "outer_ab={:.6} outer_ba={:.6}", r.outer.0, r.outer.1);
            let _ = writeln!(s, "r_ab={:.6} r_ba={:.6} r_u={:.6} r_v={:.6}", r.r_ab, r.r_ba, r.r_u, r.r_v);
            let _ = writeln!(s, "raw_u={:.6} raw_v={:.6} alpha1={:.6} alpha2={:.6} swapped={}", r.raw_u, r.raw_v, r.alpha1, r.alpha2, r.swapped);
            let _ = writeln!(s, "gap_ab={:.6} gap_ba={:.6}", r.gap_ab(), r.gap_ba());
            Ok(Outcome::ok(s))
        }
        GaussianCommand::Diamond { gains } => {
            let v = parse_reals(&gains).map_err(|e| e.to_string())?;
            let [a, b, c, d]: [f64; 4] = v.try_into().map_err(|v: Vec<f64>| format!("expected 4 gains a,b,c,d, got {}", v.len()))?;
            let r = diamond_achievable(a, b, c, d).map_err(|e| e.to_string())?;
            let mut s = String::new();
            let _ = writeln!(s, "outer={:.6} r_total={:.6} r_u={:.6} r_v={:.6} gap={:.6}", r.outer, r.r_total, r.r_u, r.r_v, r.gap());
            let _ = writeln!(s, "raw_u={:.6} raw_v={:.6} alpha_sq={:.6}", r.raw_u, r.raw_v, r.alpha_sq);
            for c in r.chains() {
                let _ = writeln!(s, "{} value={:.6} lower={:.6} holds={}", c.name, c.value, c.lower, c.holds(1e-9));
            }
            Ok(Outcome::ok(s))
        }
        GaussianCommand::Corollary { gains } => {
            let v = parse_reals(&gains).map_err(|e| e.to_string())?;
            let g: [f64; 8] = v.try_into().map_err(|v: Vec<f64>| format!("expected 8 gains, got {}", v.len()))?;
            let r = corollary_sum_rate(&GainSet::new(g).map_err(|e| e.to_string())?);
            Ok(Outcome::ok(format!("sum_rate={:.6} raw={:.6}\n", r.rate, r.raw)))
        }
        GaussianCommand::Compare { h1, h2, lo, hi, points, out } => {
            if !(lo > 0.0 && hi >= lo) {
                return Err(format!("need 0 < lo <= hi, got lo={lo} hi={hi}"));
            }
            let rows = baseline_compare(h1, h2, &log_grid(lo, hi, points)).map_err(|e| e.to_string())?;
            let mut buf = Vec::new();
            write_compare_csv(&rows, &mut buf).map_err(|e| e.to_string())?;
            let text = String::from_utf8(buf).expect("csv output is ASCII");
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(Outcome::ok(format!("wrote {} rows to {}\n", rows.len(), path.display())))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
    }
}

/// One record per one-way gain tuple in `{1..=max}^4` that needs
/// repetitions: label, subspace, strategy and its `source>position` copies.
pub fn repetition_table(max: usize) -> String {
    let mut s = String::from("# gains label subspace strategy repeats (received level > output position)\n");
    for a1 in 1..=max {
        for a2 in 1..=max {
            for b1 in 1..=max {
                for b2 in 1..=max {
                    let g = OneWay::new(a1, a2, b1, b2);
                    let Ok(label) = classify_one_way(&g) else { continue };
                    if label.typ != CaseType::Type1 || label.sub != Sub::S12 {
                        continue;
                    }
                    let (id, reps, relay) = match label.major {
                        Major::Case3 => ("S2", strategy2_repeats(&g), Relay::R2),
                        Major::Case4 => ("S6", strategy6_repeats(&g), Relay::R1),
                        _ => continue,
                    };
                    let list: Vec<String> = reps.iter().map(|(src, pos)| format!("{src}>{pos}")).collect();
                    let _ = writeln!(
                        s,
                        "gains={g} label={label} subspace={} strategy={id}@{relay} repeats={}",
                        subspace(&g).unwrap_or_else(|| "-".into()),
                        if list.is_empty() { "-".to_string() } else { list.join(",") }
                    );
                }
            }
        }
    }
    s
}
