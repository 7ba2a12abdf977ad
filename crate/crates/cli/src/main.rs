use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperekr::ekr::{self, EkrSet, DEFAULT_CLIQUE_CAP};
use hyperekr::formulas as f;
use hyperekr::quadric::{cache, QuadricModel, DEFAULT_GENERATOR_CAP};
use hyperekr::report::{Report, Row};
use hyperekr::verify::{self, SuiteOptions};
use hyperekr::{Error, GeneratorSet};

#[derive(Parser, Debug)]
#[command(name = "hyperekr", version, about = "Generators and EKR sets of hyperbolic quadrics Q+(2m+1,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Seed for sampled parameters.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Generator cache directory.
    #[arg(long, global = true, env = "HYPEREKR_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Never read or write the generator cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Record per-row wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args, Debug, Clone)]
struct QuadricArgs {
    /// Generator dimension: the quadric is Q+(2m+1,q).
    #[arg(long, conflicts_with = "n")]
    m: Option<usize>,
    /// Half the generator dimension: the quadric is Q+(4n+1,q).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
}

impl QuadricArgs {
    fn m(&self) -> Option<usize> {
        self.m.or(self.n.map(|n| 2 * n))
    }

    fn require(&self) -> Result<(usize, u32), Failure> {
        match (self.m(), self.q) {
            (Some(m), Some(q)) => Ok((m, q)),
            _ => Err(Failure::Usage("this command needs --m (or --n) and --q".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the generators of Q+(2m+1,q) and store them in the cache.
    Enumerate {
        #[command(flatten)]
        quadric: QuadricArgs,
        /// Lift the generator cap.
        #[arg(long)]
        force: bool,
    },
    /// Check closed forms against brute force, identities and inequalities.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[command(flatten)]
        quadric: QuadricArgs,
        /// Upper end of the t grid for the inequality suite.
        #[arg(long, default_value_t = 10)]
        t: i64,
        /// Sampled parameter choices per case on large quadrics.
        #[arg(long, default_value_t = 24)]
        samples: usize,
        /// Also check maximality of every construction.
        #[arg(long)]
        check_maximal: bool,
        /// Lift the generator and clique caps.
        #[arg(long)]
        force: bool,
    },
    /// Build one EKR set on Q+(4n+1,q), check it and optionally export it.
    Construct {
        #[arg(long = "type", value_enum, ignore_case = true)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        /// Dimension of the fixed singular subspace (I and II).
        #[arg(long)]
        k: Option<i32>,
        /// Meet dimension (I).
        #[arg(long)]
        j: Option<i32>,
        /// Class of a one-class or second set, or the primary class of I.
        #[arg(long)]
        class: Option<u8>,
        #[arg(long)]
        check_maximal: bool,
        /// Write the set as JSON to this path.
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Classify all maximal EKR sets of Q+(5,q) by clique search.
    Classify {
        #[arg(long)]
        q: u32,
        /// Lift the clique cap.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Counts,
    Skew,
    Identities,
    Anchored,
    Inequalities,
    Constructions,
    Classify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    OneClass,
    Second,
    PointPencil,
    I,
    Ii,
    Iii,
}

enum Failure {
    /// Bad parameters or infeasible sizes.
    Usage(String),
    /// A check did not hold.
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotEkr(..) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Ctx {
    seed: u64,
    timing: bool,
    cache_dir: Option<PathBuf>,
}

impl Ctx {
    fn generators(&self, m: usize, q: u32, force: bool) -> Result<GeneratorSet, Failure> {
        let cap = if force { u64::MAX } else { DEFAULT_GENERATOR_CAP };
        let start = Instant::now();
        let (gs, cached) = match &self.cache_dir {
            Some(dir) => cache::load_or_enumerate(dir, m, q, cap)?,
            None => (QuadricModel::new(m, q)?.enumerate_generators(cap)?, false),
        };
        eprintln!(
            "Q+({},{}): {} generators {} in {:.3} s",
            2 * m + 1,
            q,
            gs.len(),
            if cached { "loaded from cache" } else { "enumerated" },
            start.elapsed().as_secs_f64()
        );
        Ok(gs)
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("hyperekr"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx {
        seed: cli.seed,
        timing: cli.timing,
        cache_dir: if cli.no_cache { None } else { cli.cache_dir.clone().or_else(default_cache_dir) },
    };
    let outcome = run(&cli, &ctx).and_then(|mut report| {
        report.canonical_sort();
        let text = match cli.format {
            Format::Json => report.to_json().map(|s| s + "\n"),
            Format::Csv => report.to_csv(),
            Format::Table => Ok(report.to_table()),
        }?;
        print!("{text}");
        match report.first_unexpected() {
            None => Ok(()),
            Some(row) => Err(Failure::Mismatch(format!(
                "{} [{}]: closed form {} vs oracle {}",
                row.formula, row.params, row.closed_form, row.oracle_value
            ))),
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<Report, Failure> {
    match &cli.command {
        Command::Enumerate { quadric, force } => {
            let (m, q) = quadric.require()?;
            let gs = ctx.generators(m, q, *force)?;
            let mut report = Report::new("enumerate", ctx.seed);
            report.extend(verify::enumeration_rows(&gs));
            Ok(report)
        }
        Command::Verify { suite, quadric, t, samples, check_maximal, force } => {
            let opts = SuiteOptions {
                seed: ctx.seed,
                samples: *samples,
                check_maximal: *check_maximal,
                timing: ctx.timing,
                ..SuiteOptions::default()
            };
            run_verify(ctx, *suite, quadric, *t, &opts, *force)
        }
        Command::Construct { kind, n, q, k, j, class, check_maximal, export, force } => {
            let gs = ctx.generators(2 * n, *q, *force)?;
            let set = build(&gs, *kind, *k, *j, *class)?;
            let mut report = Report::new("construct", ctx.seed);
            report.extend(construction_report(&set, *kind, *k, *j, *check_maximal)?);
            if let Some(path) = export {
                std::fs::write(path, set.to_json()? + "\n").map_err(|e| Failure::Usage(e.to_string()))?;
            }
            Ok(report)
        }
        Command::Classify { q, force } => {
            let gs = ctx.generators(2, *q, false)?;
            let cap = if *force { usize::MAX } else { DEFAULT_CLIQUE_CAP };
            let mut report = Report::new("classify", ctx.seed);
            report.extend(verify::classification_rows(&gs, cap)?);
            Ok(report)
        }
    }
}

fn run_verify(
    ctx: &Ctx,
    suite: Suite,
    quadric: &QuadricArgs,
    t_max: i64,
    opts: &SuiteOptions,
    force: bool,
) -> Result<Report, Failure> {
    let name = format!("{suite:?}").to_lowercase();
    let mut report = Report::new(&name, ctx.seed);
    let grid_n = quadric.n.map(|n| n as i64);
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Skew) {
        let qs = quadric.q.map_or(vec![2, 3], |q| vec![q]);
        report.extend(verify::skew_subspace_rows(grid_n.unwrap_or(4) as usize, &qs, opts)?);
    }
    if wants(Suite::Identities) {
        report.extend(verify::identity_rows(grid_n.unwrap_or(4))?);
    }
    if wants(Suite::Anchored) {
        report.extend(verify::anchored_value_rows()?);
    }
    if wants(Suite::Inequalities) {
        report.extend(verify::ladder_rows(t_max, 2..=9)?);
        report.extend(verify::key_inequality_rows(grid_n.unwrap_or(6), 2..=9)?);
        report.extend(verify::product_bound_rows(t_max, 3..=9)?);
        report.extend(verify::family_order_rows(grid_n.unwrap_or(4))?);
    }
    let needs_quadric = matches!(suite, Suite::Counts | Suite::Constructions);
    if needs_quadric || (suite == Suite::All && quadric.m().is_some() && quadric.q.is_some()) {
        let (m, q) = quadric.require()?;
        let gs = ctx.generators(m, q, force)?;
        if wants(Suite::Counts) {
            report.extend(verify::counts_suite(&gs, opts)?);
        }
        if suite == Suite::Constructions || (suite == Suite::All && m % 2 == 0 && m > 0) {
            report.extend(verify::construction_rows(&gs, opts)?);
        }
    }
    if suite == Suite::Classify {
        let q = quadric.q.ok_or_else(|| Failure::Usage("the classify suite needs --q".into()))?;
        let gs = ctx.generators(2, q, false)?;
        let cap = if force { usize::MAX } else { DEFAULT_CLIQUE_CAP };
        report.extend(verify::classification_rows(&gs, cap)?);
    }
    Ok(report)
}

fn need(v: Option<i32>, flag: &str, kind: Kind) -> Result<i32, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--type {kind:?} needs --{flag}")))
}

/// Builds the requested set from coordinate subspaces of the reference
/// generator `⟨e0, e2, …, e2m⟩`.
fn build<'a>(gs: &'a GeneratorSet, kind: Kind, k: Option<i32>, j: Option<i32>, class: Option<u8>) -> Result<EkrSet<'a>, Failure> {
    let model = gs.model();
    let set = match kind {
        Kind::OneClass => ekr::one_class(gs, class.unwrap_or(0))?,
        Kind::Second => ekr::second(gs, &model.swapped_generator(class.unwrap_or(0) as usize)?)?,
        Kind::PointPencil => ekr::point_pencil(gs, &model.reference_subspace(0)?)?,
        Kind::I => {
            let tau = model.reference_subspace(need(k, "k", kind)?)?;
            ekr::family_i(gs, &tau, need(j, "j", kind)?, class)?
        }
        Kind::Ii => {
            let k = need(k, "k", kind)?;
            if k < 0 || k > gs.m() as i32 - 2 {
                return Err(Failure::Usage(format!("family II needs 0 <= k <= {}", gs.m() as i32 - 2)));
            }
            ekr::family_ii(gs, &model.reference_generator(), &model.reference_subspace(k)?)?
        }
        Kind::Iii => ekr::family_iii(gs, &model.reference_generator(), &model.swapped_generator(4)?)?,
    };
    Ok(set)
}

fn construction_report(
    set: &EkrSet<'_>,
    kind: Kind,
    k: Option<i32>,
    j: Option<i32>,
    check_maximal: bool,
) -> Result<Vec<Row>, Failure> {
    let gs = set.generator_set();
    let n = ekr::half_rank(gs)?;
    let q = gs.q() as u64;
    let (k, j) = (k.unwrap_or(0) as i64, j.unwrap_or(0) as i64);
    let expected = match kind {
        Kind::OneClass => f::size_one_class(n, q),
        Kind::Second => f::size_second(n, q),
        Kind::PointPencil => f::size_point_pencil(n, q),
        Kind::I => f::size_i(n, k, j, q),
        Kind::Ii => f::size_ii(n, k, q),
        Kind::Iii => f::size_iii(n, q),
    }?;
    let mut params = format!("n={n} q={q}");
    match kind {
        Kind::I => params += &format!(" k={k} j={j}"),
        Kind::Ii => params += &format!(" k={k}"),
        _ => {}
    }
    let tag = set.construction().name();
    let anchor = "EKR family sizes";
    let mut rows = vec![
        Row::equality(&format!("size_{tag}"), params.clone(), expected.to_string(), set.len().to_string(), anchor),
        Row::equality(&format!("ekr_{tag}"), params.clone(), true, set.is_ekr(), anchor),
    ];
    if check_maximal {
        rows.push(Row::equality(&format!("maximal_{tag}"), params, true, set.is_maximal()?, anchor));
    }
    Ok(rows)
}
