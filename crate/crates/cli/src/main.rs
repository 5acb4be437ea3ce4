//! `echelon`: command-line front end for echelon-core.

mod io;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use echelon_core::amalgam::{amalgamate, jep, AmalgamResult};
use echelon_core::canon::{are_isomorphic, canonical_form};
use echelon_core::colgraph::{
    check_star, from_coloured_graph, random_coloured_graph, to_coloured_graph, GeometricColouring, StarDemand,
};
use echelon_core::enumerate::enumerate_spaces;
use echelon_core::json::{self, FORMAT};
use echelon_core::katetov::{katetov_map, katetov_space, realize_extension};
use echelon_core::limit::{back_and_forth, LimitModel, Mode};
use echelon_core::metrize::metrize_dull;
use echelon_core::ramsey::{arrow_check, copies, witness_search};
use echelon_core::rational::format_rational;
use echelon_core::space::{pair_at, EchelonedSpace, PointId};
use serde_json::{json, Value};

use io::{fail, read_input, read_json_arg, write_output, CliError, OutputFormat};

#[derive(Parser)]
#[command(name = "echelon", version, about = "Finite echeloned spaces and their Fraïssé limit")]
struct Cli {
    /// Seed for every randomized subcommand.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Output layout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DocKind {
    Space,
    Metric,
    Graph,
    Ordered,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document and report its size.
    Validate {
        /// Path, or "-" for stdin.
        input: String,
        #[arg(long, value_enum, default_value_t = DocKind::Space)]
        kind: DocKind,
    },
    /// List the pairs of a space rank by rank.
    Echelon { input: String },
    /// Realize a space by a dull rational metric.
    Metrize { input: String },
    /// The echeloned space induced by a metric.
    FromMetric { input: String },
    /// Strong amalgam of B1 and B2 over A.
    Amalgamate {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
        /// Embedding A → B1: a map document, a path, or an inline array.
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
    },
    /// Joint embedding of two spaces.
    Jep {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
    },
    /// The Katětov space K(X), or K(φ) with --map and --target.
    Katetov {
        #[arg(long)]
        space: String,
        #[arg(long, requires = "target")]
        map: Option<String>,
        /// Codomain of --map.
        #[arg(long)]
        target: Option<String>,
        /// Embed a one-point extension of X into K(X).
        #[arg(long, conflicts_with = "map")]
        extend: Option<String>,
    },
    /// Embed a one-point extension of X into K(X) over the identity.
    Extend {
        #[arg(long)]
        space: String,
        #[arg(long)]
        extension: String,
    },
    /// Finite views of the universal homogeneous space.
    Limit {
        #[command(subcommand)]
        command: LimitCommand,
    },
    /// Partition arrows for ordered spaces.
    Ramsey {
        #[command(subcommand)]
        command: RamseyCommand,
    },
    /// All spaces on m points.
    Enumerate {
        #[arg(long)]
        m: usize,
        /// One representative per isomorphism class.
        #[arg(long)]
        iso: bool,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Decide isomorphism, or print the canonical form of one space.
    Iso { x: String, y: Option<String> },
    /// Edge-coloured complete graphs.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitMode {
    Random,
    Deterministic,
}

#[derive(Subcommand)]
enum LimitCommand {
    /// The first n points, with their rational ranks.
    Sample {
        #[arg(long, value_enum, default_value_t = LimitMode::Deterministic)]
        mode: LimitMode,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Back-and-forth between a random and a deterministic model.
    Bnf {
        #[arg(long, default_value_t = 0)]
        seed1: u64,
        #[arg(long, default_value_t = 1)]
        seed2: u64,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
}

#[derive(Args)]
struct RamseyArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Subcommand)]
enum RamseyCommand {
    /// Decide C → (B)^A_k.
    Check {
        #[arg(long)]
        c: String,
        #[command(flatten)]
        args: RamseyArgs,
    },
    /// Look for some C with C → (B)^A_k.
    Search {
        #[command(flatten)]
        args: RamseyArgs,
        #[arg(long, default_value_t = 4)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Geometric random colouring on n vertices.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// The coloured graph of a space.
    FromSpace { input: String },
    /// The space of a coloured graph.
    ToSpace { input: String },
    /// Least vertex joined to each set by its colour.
    Star {
        #[arg(long)]
        graph: String,
        /// Inline array of vertex sets, e.g. [[0,1],[2,3]].
        #[arg(long)]
        sets: String,
        /// Inline array of colour positions, one per set.
        #[arg(long)]
        colours: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { io::EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli).and_then(|doc| write_output(&doc, cli.out.as_deref(), cli.format)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn space(arg: &str) -> Result<EchelonedSpace, CliError> {
    Ok(json::space_from_str(&read_input(arg)?)?)
}

fn point_map(arg: &str) -> Result<Vec<PointId>, CliError> {
    Ok(json::map_from_str(&read_json_arg(arg)?)?)
}

fn amalgam_doc(r: &AmalgamResult) -> Value {
    json!({ "format": FORMAT, "c": json::space_to_value(&r.c), "g1": r.g1, "g2": r.g2 })
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    match &cli.command {
        Command::Validate { input, kind } => {
            let text = read_input(input)?;
            let (points, ranks) = match kind {
                DocKind::Space => {
                    let x = json::space_from_str(&text)?;
                    (x.len(), Some(x.rank_count()))
                }
                DocKind::Ordered => {
                    let x = json::ordered_from_str(&text)?;
                    (x.len(), Some(x.space().rank_count()))
                }
                DocKind::Metric => (json::metric_from_str(&text)?.len(), None),
                DocKind::Graph => (json::graph_from_str(&text)?.vertex_count(), None),
            };
            let mut doc = json!({ "format": FORMAT, "valid": true, "points": points });
            if let Some(r) = ranks {
                doc["ranks"] = json!(r);
            }
            Ok(doc)
        }
        Command::Echelon { input } => {
            let x = space(input)?;
            let mut classes = vec![Vec::new(); x.rank_count() as usize];
            for (i, &r) in x.pair_ranks().iter().enumerate() {
                let (hi, lo) = pair_at(i);
                classes[r as usize - 1].push([lo, hi]);
            }
            Ok(json!({ "format": FORMAT, "ranks": x.rank_count(), "classes": classes }))
        }
        Command::Metrize { input } => Ok(json::metric_to_value(metrize_dull(&space(input)?).metric())),
        Command::FromMetric { input } => {
            let d = json::metric_from_str(&read_input(input)?)?;
            Ok(json::space_to_value(&EchelonedSpace::from_metric(&d)))
        }
        Command::Amalgamate { a, b1, b2, f1, f2 } => {
            let r = amalgamate(&space(a)?, &space(b1)?, &space(b2)?, &point_map(f1)?, &point_map(f2)?)
                .map_err(|e| CliError::invalid(e.code(), e))?;
            Ok(amalgam_doc(&r))
        }
        Command::Jep { b1, b2 } => Ok(amalgam_doc(&jep(&space(b1)?, &space(b2)?))),
        Command::Katetov { space: x, map, target, extend } => {
            let x = space(x)?;
            let kerr = |e: echelon_core::katetov::KatetovError| CliError::invalid(e.code(), e);
            if let (Some(map), Some(target)) = (map, target) {
                let k = katetov_map(&x, &space(target)?, &point_map(map)?).map_err(kerr)?;
                return Ok(json::map_to_value(&k));
            }
            if let Some(y) = extend {
                let g = realize_extension(&x, &space(y)?).map_err(kerr)?;
                return Ok(json::map_to_value(&g));
            }
            let k = katetov_space(&x).map_err(kerr)?;
            Ok(json!({
                "format": FORMAT,
                "space": json::space_to_value(&k.space),
                "lambda": k.lambda,
                "chain": k.chain.len(),
            }))
        }
        Command::Extend { space: x, extension } => {
            let g = realize_extension(&space(x)?, &space(extension)?).map_err(|e| CliError::invalid(e.code(), e))?;
            Ok(json::map_to_value(&g))
        }
        Command::Limit { command } => limit(cli.seed, command),
        Command::Ramsey { command } => ramsey(cli.seed, command),
        Command::Enumerate { m, iso, count } => {
            let spaces = enumerate_spaces(*m, *iso).map_err(|e| CliError::invalid(e.code(), e))?;
            if *count {
                return Ok(json!({ "format": FORMAT, "m": m, "count": spaces.count() }));
            }
            let list: Vec<Value> = spaces.map(|x| json::space_to_value(&x)).collect();
            Ok(json!({ "format": FORMAT, "m": m, "count": list.len(), "spaces": list }))
        }
        Command::Iso { x, y } => {
            let x = space(x)?;
            match y {
                Some(y) => {
                    let map = are_isomorphic(&x, &space(y)?);
                    Ok(json!({ "format": FORMAT, "isomorphic": map.is_some(), "map": map }))
                }
                None => {
                    let c = canonical_form(&x);
                    Ok(json!({ "format": FORMAT, "canonical": json::space_to_value(&c.space), "perm": c.perm }))
                }
            }
        }
        Command::Graph { command } => graph(cli.seed, command),
    }
}

fn limit(seed: u64, command: &LimitCommand) -> Result<Value, CliError> {
    let lerr = |e: echelon_core::limit::LimitError| CliError::invalid(e.code(), e);
    match command {
        LimitCommand::Sample { mode, n, p } => {
            let mode = match mode {
                LimitMode::Random => Mode::Random { p: *p },
                LimitMode::Deterministic => Mode::Deterministic,
            };
            let mut m = LimitModel::new(mode, seed).map_err(lerr)?;
            let x = m.sample_prefix(*n);
            let labels = (0..*n)
                .map(|u| (0..u).map(|v| m.rank(u, v).map(|q| format_rational(&q))).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(lerr)?;
            let mut doc = json::space_to_value(&x);
            doc["labels"] = json!(labels);
            Ok(doc)
        }
        LimitCommand::Bnf { seed1, seed2, depth, p } => {
            let mut m1 = LimitModel::new(Mode::Random { p: *p }, *seed1).map_err(lerr)?;
            let mut m2 = LimitModel::new(Mode::Deterministic, *seed2).map_err(lerr)?;
            let iso = back_and_forth(&mut m1, &mut m2, *depth).map_err(lerr)?;
            let verified = iso.verify(&m1, &m2);
            if !verified {
                return Err(CliError::invalid("E_NOT_ISOMORPHISM", "back-and-forth produced an invalid certificate"));
            }
            Ok(json!({
                "format": FORMAT,
                "depth": depth,
                "pairs": iso.pairs,
                "verified": verified,
                "space": json::space_to_value(&m1.induced(&iso.domain())),
            }))
        }
    }
}

fn ramsey(seed: u64, command: &RamseyCommand) -> Result<Value, CliError> {
    let ordered = |arg: &str| -> Result<_, CliError> { Ok(json::ordered_from_str(&read_input(arg)?)?) };
    match command {
        RamseyCommand::Check { c, args } => {
            let (c, a, b) = (ordered(c)?, ordered(&args.a)?, ordered(&args.b)?);
            let arrow = arrow_check(&c, &a, &b, args.k).map_err(|e| CliError::invalid(e.code(), e))?;
            Ok(json!({
                "format": FORMAT,
                "arrow": arrow,
                "copies_a": copies(&a, &c).len(),
                "copies_b": copies(&b, &c).len(),
            }))
        }
        RamseyCommand::Search { args, cap } => {
            let (a, b) = (ordered(&args.a)?, ordered(&args.b)?);
            if args.k == 0 {
                return Err(CliError::invalid("E_PARAMETER", "k must be at least 1"));
            }
            let c = witness_search(&a, &b, args.k, *cap, seed);
            Ok(json!({ "format": FORMAT, "found": c.is_some(), "c": c.as_ref().map(json::ordered_to_value) }))
        }
    }
}

fn graph(seed: u64, command: &GraphCommand) -> Result<Value, CliError> {
    let gerr = |e: echelon_core::colgraph::GraphError| CliError::invalid(e.code(), e);
    match command {
        GraphCommand::Random { n, p } => {
            let g = random_coloured_graph(*n, &GeometricColouring::new(*p, seed).map_err(gerr)?).map_err(gerr)?;
            Ok(json::graph_to_value(&g))
        }
        GraphCommand::FromSpace { input } => Ok(json::graph_to_value(&to_coloured_graph(&space(input)?))),
        GraphCommand::ToSpace { input } => {
            let g = json::graph_from_str(&read_input(input)?)?;
            let x = from_coloured_graph(&g).map_err(|e| CliError::invalid(e.code(), e))?;
            Ok(json::space_to_value(&x))
        }
        GraphCommand::Star { graph, sets, colours } => {
            let g = json::graph_from_str(&read_input(graph)?)?;
            let sets: Vec<Vec<PointId>> = io::parse_json(&read_json_arg(sets)?)?;
            let colours: Vec<usize> = io::parse_json(&read_json_arg(colours)?)?;
            let witness = check_star(&g, &StarDemand { sets, colours }).map_err(gerr)?;
            Ok(json!({ "format": FORMAT, "witness": witness }))
        }
    }
}
