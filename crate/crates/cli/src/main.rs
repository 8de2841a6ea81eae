use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use freecurrents::automorphisms::{cancellation_constants, outer_ball, DEFAULT_BALL_CAP};
use freecurrents::currents::{counting_table, monte_carlo_stretch, realize_table, stretching_factor, uniform_table, DEFAULT_DEPTH};
use freecurrents::experiments::{self, ExperimentReport, SpectrumCurrent};
use freecurrents::format;
use freecurrents::rational;
use freecurrents::trees::{bbt_bounds, ll_deviation, sample_marked_graph, CurrentRef};
use freecurrents::{Automorphism, Basis, CyclicWord, Error, MarkedMetricGraph, RationalCurrent, StallingsGraph, Tree, Word};

#[derive(Parser)]
#[command(name = "fcur", version, about = "Exact currents, Stallings graphs and trees over free groups")]
struct Cli {
    /// Rank of the free basis.
    #[arg(long, global = true, default_value_t = 2)]
    basis: usize,
    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run sequentially even when built with parallel support.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Word arithmetic.
    #[command(subcommand)]
    Word(WordCmd),
    /// Automorphisms, given inline as `a=ab,b=b` or as a file.
    #[command(subcommand)]
    Aut(AutCmd),
    /// Stallings graphs of subgroups given by `--gens aa,b`.
    #[command(subcommand)]
    Stallings(StallingsCmd),
    /// Frequency tables and rational currents.
    #[command(subcommand)]
    Current(CurrentCmd),
    /// Marked metric graphs and splittings read from files.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Experiments; each accepts `--config file.toml`.
    #[command(subcommand)]
    Exp(ExpCmd),
}

#[derive(Subcommand)]
enum WordCmd {
    /// Free reduction.
    Reduce { word: String },
    /// Canonical cyclic form (`1` for the trivial class).
    Cyclic { word: String },
    /// Occurrences of `pattern` in the cyclic word `word`, wrapping around.
    Occ { pattern: String, word: String },
}

#[derive(Subcommand)]
enum AutCmd {
    Apply {
        aut: String,
        word: String,
        /// Treat the word as a conjugacy class.
        #[arg(long)]
        cyclic: bool,
    },
    /// `first ∘ second`: apply `second`, then `first`.
    Compose { first: String, second: String },
    Invert { aut: String },
    /// Outer classes within the given Whitehead radius.
    Ball {
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
        cap: usize,
    },
    /// Lipschitz, bounded cancellation and double cancellation constants.
    Constants {
        aut: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

#[derive(Args)]
struct Gens {
    /// Comma-separated subgroup generators.
    #[arg(long, value_delimiter = ',', required = true)]
    gens: Vec<String>,
}

#[derive(Subcommand)]
enum StallingsCmd {
    Fold(Gens),
    Member {
        #[command(flatten)]
        gens: Gens,
        word: String,
    },
    Readable {
        #[command(flatten)]
        gens: Gens,
        word: String,
    },
    Intersect {
        #[command(flatten)]
        gens: Gens,
        #[arg(long, value_delimiter = ',', required = true)]
        other: Vec<String>,
    },
    Conjint {
        #[command(flatten)]
        gens: Gens,
        word: String,
    },
    Malnormal(Gens),
}

#[derive(Subcommand)]
enum CurrentCmd {
    Counting {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    Uniform {
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    Validate { table: PathBuf },
    Support { table: PathBuf },
    /// Restrict a rational current to a subgroup.
    Restrict {
        #[arg(long)]
        current: String,
        #[command(flatten)]
        gens: Gens,
    },
    Realize { table: PathBuf },
    /// Generic stretching factor, exact; `--mc n` adds a Monte Carlo estimate.
    Stretch {
        aut: String,
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum TreeCmd {
    Length {
        #[arg(long)]
        tree: PathBuf,
        word: String,
    },
    Bslength {
        #[arg(long)]
        tree: PathBuf,
        word: String,
    },
    /// Intersection number with a rational current or a table file.
    Pair {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, conflicts_with = "table")]
        current: Option<String>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    L2 {
        #[arg(long)]
        tree: PathBuf,
        word: String,
    },
    Suppl2 {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        current: String,
    },
    Bbt {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value_t = 8)]
        len: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct MainArgs {
    #[arg(long)]
    tree: Option<PathBuf>,
    #[arg(long)]
    current: Option<String>,
    /// Sweep all cyclic words up to this length over the tree instead.
    #[arg(long)]
    maxlen: Option<usize>,
}

#[derive(Args, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SpectrumArgs {
    /// Tree file; the unit rose when absent.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Rational current; the uniform current when absent.
    #[arg(long)]
    current: Option<String>,
    #[arg(long)]
    radius: Option<usize>,
    /// Sublevel thresholds.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    threshold: Vec<String>,
}

#[derive(Args, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct NsArgs {
    #[arg(long)]
    aut: Option<String>,
    #[arg(long)]
    current: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FillingArgs {
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    radius: Option<usize>,
}

#[derive(Args, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct BteArgs {
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    h: Option<String>,
    /// Tree files.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    trees: Vec<PathBuf>,
    /// Additional sampled marked graphs.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct BilipArgs {
    #[arg(long)]
    s1: Option<PathBuf>,
    #[arg(long)]
    s2: Option<PathBuf>,
    /// Reference marked graph; the unit rose when absent.
    #[arg(long)]
    tree: Option<PathBuf>,
    #[arg(long)]
    maxlen: Option<usize>,
}

#[derive(Args)]
struct Exp<T: Args> {
    /// TOML file supplying any option not given on the command line.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    args: T,
}

#[derive(Subcommand)]
enum ExpCmd {
    Main(Exp<MainArgs>),
    Spectrum(Exp<SpectrumArgs>),
    Ns(Exp<NsArgs>),
    Filling(Exp<FillingArgs>),
    Bte(Exp<BteArgs>),
    Bilip(Exp<BilipArgs>),
}

/// Failure of a command, with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_) | Error::UnknownLetter(..) | Error::RankMismatch { .. } | Error::BadRank(_) => 2,
            Error::ResourceLimit(_) | Error::SearchBoundExceeded { .. } => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Out = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// An inline value, or the contents of the file it names.
fn inline_or_file(s: &str) -> std::result::Result<String, Failure> {
    let p = Path::new(s);
    if !s.contains('=') && p.is_file() {
        read(p)
    } else {
        Ok(s.to_string())
    }
}

fn aut(basis: Basis, s: &str) -> std::result::Result<Automorphism, Failure> {
    Ok(format::parse_automorphism(basis, &inline_or_file(s)?)?)
}

fn cyclic(basis: Basis, s: &str) -> std::result::Result<CyclicWord, Failure> {
    basis.parse_cyclic(s)?.ok_or_else(|| usage(format!("`{s}` is the trivial class")))
}

fn subgroup(basis: Basis, gens: &[String]) -> std::result::Result<StallingsGraph, Failure> {
    let words = gens.iter().map(|g| basis.parse_word(g.trim())).collect::<freecurrents::Result<Vec<Word>>>()?;
    Ok(StallingsGraph::fold(basis, &words)?)
}

fn tree(basis: Basis, path: &Path) -> std::result::Result<Tree, Failure> {
    Ok(format::parse_tree(basis, &read(path)?)?)
}

fn marked(basis: Basis, path: Option<&PathBuf>) -> std::result::Result<MarkedMetricGraph, Failure> {
    match path {
        None => Ok(MarkedMetricGraph::unit_rose(basis)),
        Some(p) => match tree(basis, p)? {
            Tree::Graph(g) => Ok(g),
            Tree::Splitting(_) => Err(Failure { code: 3, message: format!("{} is not a marked metric graph", p.display()) }),
        },
    }
}

fn splitting(basis: Basis, path: &Path) -> std::result::Result<freecurrents::Splitting, Failure> {
    match tree(basis, path)? {
        Tree::Splitting(s) => Ok(s),
        Tree::Graph(_) => Err(Failure { code: 3, message: format!("{} is not a splitting", path.display()) }),
    }
}

fn table(path: &Path) -> std::result::Result<freecurrents::FrequencyTable, Failure> {
    Ok(format::parse_table(&read(path)?)?)
}

fn lines<I: IntoIterator<Item = S>, S: ToString>(items: I) -> String {
    items.into_iter().map(|s| s.to_string() + "\n").collect()
}

fn run_word(basis: Basis, cmd: &WordCmd) -> Out {
    Ok(match cmd {
        WordCmd::Reduce { word } => format!("{}\n", basis.parse_word(word)?),
        WordCmd::Cyclic { word } => match basis.parse_cyclic(word)? {
            Some(c) => format!("{c}\n"),
            None => "1\n".into(),
        },
        WordCmd::Occ { pattern, word } => {
            let g = cyclic(basis, word)?;
            format!("{}\n", g.occurrences(&basis.parse_word(pattern)?)?)
        }
    })
}

fn run_aut(basis: Basis, cmd: &AutCmd) -> Out {
    Ok(match cmd {
        AutCmd::Apply { aut: a, word, cyclic: true } => format!("{}\n", aut(basis, a)?.apply_cyclic(&cyclic(basis, word)?)),
        AutCmd::Apply { aut: a, word, cyclic: false } => format!("{}\n", aut(basis, a)?.apply(&basis.parse_word(word)?)),
        AutCmd::Compose { first, second } => format::emit_automorphism(&aut(basis, first)?.compose(&aut(basis, second)?)),
        AutCmd::Invert { aut: a } => format::emit_automorphism(&aut(basis, a)?.invert()),
        AutCmd::Ball { radius, cap } => {
            let ball = outer_ball(basis, *radius, *cap)?;
            let mut out = format!("classes {}\n", ball.len());
            out.push_str(&lines(ball.iter().map(|e| format!("{} {}", e.radius, e.key))));
            out
        }
        AutCmd::Constants { aut: a, bound } => {
            let c = cancellation_constants(&aut(basis, a)?, *bound)?;
            format!(
                "lipschitz {}\nbcc {}\nbcc_certified {}\ndouble_bcc {}\n",
                c.lipschitz, c.bcc, c.bcc_certified, c.double_bcc
            )
        }
    })
}

fn run_stallings(basis: Basis, cmd: &StallingsCmd) -> Out {
    Ok(match cmd {
        StallingsCmd::Fold(g) => format::emit_graph(&subgroup(basis, &g.gens)?),
        StallingsCmd::Member { gens, word } => {
            format!("{}\n", subgroup(basis, &gens.gens)?.member(&basis.parse_word(word)?))
        }
        StallingsCmd::Readable { gens, word } => {
            let v = basis.parse_word(word)?;
            if v.is_empty() {
                return Err(usage("readability needs a nonempty word"));
            }
            format!("{}\n", subgroup(basis, &gens.gens)?.readable_in_core(&v))
        }
        StallingsCmd::Intersect { gens, other } => {
            let comps = subgroup(basis, &gens.gens)?.intersect(&subgroup(basis, other)?);
            let mut out = String::new();
            for (i, c) in comps.iter().enumerate() {
                let label = if i == 0 { "base".to_string() } else { format!("conjugate {i}") };
                let gens: Vec<String> = c.subgroup_basis().iter().map(|w| w.to_string()).collect();
                out.push_str(&format!("component {label} rank {} generators {}\n", c.rank(), gens.join(",")));
                out.push_str(&format::emit_graph(c));
            }
            out
        }
        StallingsCmd::Conjint { gens, word } => {
            let r = subgroup(basis, &gens.gens)?.conjugacy_intersection(&cyclic(basis, word)?);
            let mut out = format!("m {}\nd {}\n", r.reps.len(), r.d);
            out.push_str(&lines(r.reps.iter().map(|c| format!("rep {} chart {}", c.ambient, c.chart))));
            out
        }
        StallingsCmd::Malnormal(g) => format!("{}\n", subgroup(basis, &g.gens)?.is_malnormal()),
    })
}

fn run_current(basis: Basis, cmd: &CurrentCmd) -> Out {
    Ok(match cmd {
        CurrentCmd::Counting { word, depth } => format::emit_table(&counting_table(basis, &cyclic(basis, word)?, *depth)),
        CurrentCmd::Uniform { depth } => format::emit_table(&uniform_table(basis, *depth)),
        CurrentCmd::Validate { table: p } => {
            let report = table(p)?.validate();
            if report.is_valid() {
                "valid\n".into()
            } else {
                format!("invalid\n{}", lines(report.violations.iter()))
            }
        }
        CurrentCmd::Support { table: p } => lines(table(p)?.support()?.iter()),
        CurrentCmd::Restrict { current, gens } => {
            let mu = RationalCurrent::parse(basis, current)?;
            let r = mu.restrict(&subgroup(basis, &gens.gens)?)?;
            format!("{r}\n")
        }
        CurrentCmd::Realize { table: p } => format!("{}\n", realize_table(&table(p)?)?),
        CurrentCmd::Stretch { aut: a, mc, seed } => {
            let phi = aut(basis, a)?;
            let mut out = format!("{}\n", rational::fmt(&stretching_factor(&phi)?));
            if let Some(n) = mc {
                out.push_str(&format!("approx {:.6}\n", monte_carlo_stretch(&phi, *n, *seed)?));
            }
            out
        }
    })
}

fn run_tree(basis: Basis, cmd: &TreeCmd) -> Out {
    Ok(match cmd {
        TreeCmd::Length { tree: p, word } => format!("{}\n", rational::fmt(&tree(basis, p)?.length(&cyclic(basis, word)?))),
        TreeCmd::Bslength { tree: p, word } => format!("{}\n", splitting(basis, p)?.bass_serre_length(&cyclic(basis, word)?)),
        TreeCmd::Pair { tree: p, current, table: t } => {
            let tr = tree(basis, p)?;
            let v = match (current, t) {
                (Some(c), None) => tr.intersection_number(CurrentRef::Rational(&RationalCurrent::parse(basis, c)?))?,
                (None, Some(t)) => tr.intersection_number(CurrentRef::Table(&table(t)?))?,
                _ => return Err(usage("give exactly one of --current and --table")),
            };
            format!("{}\n", rational::fmt(&v))
        }
        TreeCmd::L2 { tree: p, word } => {
            let v = basis.parse_word(word)?;
            if v.is_empty() {
                return Err(usage("the laminary language has no empty word"));
            }
            format!("{}\n", tree(basis, p)?.l2_contains(&v))
        }
        TreeCmd::Suppl2 { tree: p, current } => {
            format!("{}\n", tree(basis, p)?.supp_subset_l2(&RationalCurrent::parse(basis, current)?))
        }
        TreeCmd::Bbt { tree: p, len, samples, seed } => {
            let g = marked(basis, Some(p))?;
            let b = bbt_bounds(&g, *len, *samples, &mut ChaCha8Rng::seed_from_u64(*seed));
            let dev = ll_deviation(&g, *len, *samples, &mut ChaCha8Rng::seed_from_u64(*seed));
            format!(
                "lower {}\nupper {}\nll_deviation {}\n",
                rational::fmt(&b.lower),
                rational::fmt(&b.upper),
                rational::fmt(&dev)
            )
        }
    })
}

fn load<T: Args + for<'de> Deserialize<'de> + Default>(exp: &Exp<T>) -> std::result::Result<T, Failure> {
    match &exp.config {
        None => Ok(T::default()),
        Some(p) => toml::from_str(&read(p)?).map_err(|e| usage(format!("bad config {}: {e}", p.display()))),
    }
}

fn pick<T: Clone>(flag: &Option<T>, config: Option<T>, name: &str) -> std::result::Result<T, Failure> {
    flag.clone().or(config).ok_or_else(|| usage(format!("missing --{name}")))
}

fn run_exp(basis: Basis, cmd: &ExpCmd) -> std::result::Result<ExperimentReport, Failure> {
    Ok(match cmd {
        ExpCmd::Main(e) => {
            let c = load(e)?;
            let path = pick(&e.args.tree, c.tree, "tree")?;
            let t = tree(basis, &path)?;
            let name = path.display().to_string();
            match e.args.maxlen.or(c.maxlen) {
                Some(n) => experiments::main_theorem_sweep(basis, &[(name, t)], n)?,
                None => {
                    let mu = RationalCurrent::parse(basis, &pick(&e.args.current, c.current, "current")?)?;
                    experiments::main_theorem_report(&name, &t, &mu)?
                }
            }
        }
        ExpCmd::Spectrum(e) => {
            let c = load(e)?;
            let path = e.args.tree.clone().or(c.tree);
            let t = match &path {
                Some(p) => tree(basis, p)?,
                None => Tree::Graph(MarkedMetricGraph::unit_rose(basis)),
            };
            let (mu, mu_name) = match e.args.current.clone().or(c.current) {
                Some(s) => (SpectrumCurrent::Rational(RationalCurrent::parse(basis, &s)?), s),
                None => (SpectrumCurrent::Uniform, "uniform".to_string()),
            };
            let radius = e.args.radius.or(c.radius).unwrap_or(2);
            let th = if e.args.threshold.is_empty() { c.threshold } else { e.args.threshold.clone() };
            let th = th.iter().map(|s| rational::parse(s)).collect::<freecurrents::Result<Vec<_>>>()?;
            let s = experiments::length_spectrum(&t, &mu, radius, &th, DEFAULT_BALL_CAP)?;
            let name = path.map_or("unit rose".to_string(), |p| p.display().to_string());
            experiments::length_spectrum_report(&name, &mu_name, radius, &s)
        }
        ExpCmd::Ns(e) => {
            let c = load(e)?;
            let phi = aut(basis, &pick(&e.args.aut, c.aut, "aut")?)?;
            let mu = RationalCurrent::parse(basis, &pick(&e.args.current, c.current, "current")?)?;
            let steps = e.args.steps.or(c.steps).unwrap_or(20);
            let depth = e.args.depth.or(c.depth).unwrap_or(2);
            let burn_in = e.args.burn_in.or(c.burn_in).unwrap_or(10);
            let tol = e.args.tol.or(c.tol).unwrap_or(1e-3);
            experiments::north_south_report(&phi, &mu, steps, depth, burn_in, tol)
        }
        ExpCmd::Filling(e) => {
            let c = load(e)?;
            let g = cyclic(basis, &pick(&e.args.word, c.word, "word")?)?;
            let radius = e.args.radius.or(c.radius).unwrap_or(1);
            let cert = experiments::filling_search(basis, &g, radius, DEFAULT_BALL_CAP)?;
            experiments::filling_report(&g, radius, &cert)
        }
        ExpCmd::Bte(e) => {
            let c = load(e)?;
            let g = cyclic(basis, &pick(&e.args.g, c.g, "g")?)?;
            let h = cyclic(basis, &pick(&e.args.h, c.h, "h")?)?;
            let paths = if e.args.trees.is_empty() { c.trees } else { e.args.trees.clone() };
            let mut names = Vec::new();
            let mut trees = Vec::new();
            for p in &paths {
                trees.push(tree(basis, p)?);
                names.push(p.display().to_string());
            }
            let seed = e.args.seed.or(c.seed).unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..e.args.samples.or(c.samples).unwrap_or(0) {
                trees.push(Tree::Graph(sample_marked_graph(basis, &mut rng)));
                names.push(format!("sample{i}"));
            }
            let b = experiments::bte_bounds(&g, &h, &trees)?;
            let mut r = experiments::bte_report(&g, &h, &names, &b);
            r.seed = Some(seed);
            r
        }
        ExpCmd::Bilip(e) => {
            let c = load(e)?;
            let s1 = splitting(basis, &pick(&e.args.s1, c.s1, "s1")?)?;
            let s2 = splitting(basis, &pick(&e.args.s2, c.s2, "s2")?)?;
            let t0 = marked(basis, e.args.tree.as_ref().or(c.tree.as_ref()))?;
            let maxlen = e.args.maxlen.or(c.maxlen).unwrap_or(8);
            let scan = experiments::bilipschitz_scan(&s1, &s2, &t0, maxlen)?;
            experiments::bilipschitz_report(maxlen, &Ok(scan))
        }
    })
}

fn run(cli: &Cli) -> std::result::Result<(String, bool), Failure> {
    let basis = Basis::new(cli.basis)?;
    let out = match &cli.command {
        Command::Word(c) => run_word(basis, c)?,
        Command::Aut(c) => run_aut(basis, c)?,
        Command::Stallings(c) => run_stallings(basis, c)?,
        Command::Current(c) => run_current(basis, c)?,
        Command::Tree(c) => run_tree(basis, c)?,
        Command::Exp(c) => {
            let r = run_exp(basis, c)?;
            let summary = r.summary_text();
            return Ok(match &cli.out {
                Some(p) => {
                    fs::write(p, r.to_csv()).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
                    (summary, r.passed())
                }
                None => (format!("{summary}\n{}", r.to_csv()), r.passed()),
            });
        }
    };
    if let Some(p) = &cli.out {
        fs::write(p, &out).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
        return Ok((String::new(), true));
    }
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    freecurrents::par::set_enabled(!cli.sequential);
    match run(&cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: a build-failing verdict failed");
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
