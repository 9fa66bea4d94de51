use clap::{Args, Parser, Subcommand, ValueEnum};
use metacirc::analysis::{classify, ClassifyOptions, SearchOptions};
use metacirc::graph::{
    cayley_graph, circulant, coset_graph_from_arc, generalized_petersen, lexicographic_product,
    multilayer_generalized_petersen, Graph, MPParams,
};
use metacirc::groups::{mp_cayley_group, split_metacyclic_group, xu_zhang_group, FiniteGroup, XuZhangParams};
use metacirc::scenarios::{run_scenario, scenario_ids, ScenarioResult, Status, VerifyOptions};
use metacirc::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_INPUT: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "metacirc", version, about = "Weak metacirculants of odd prime-power order: constructions and exact classification")]
struct Cli {
    /// Largest group whose elements may be listed explicitly.
    #[arg(long, global = true, default_value = "2000000", value_parser = parse_count)]
    max_group_order: u128,
    /// Largest graph handed to the automorphism search.
    #[arg(long, global = true, default_value_t = 512)]
    max_aut_degree: usize,
    /// Node budget of each subgroup search; accepts forms such as 5e7.
    #[arg(long, global = true, default_value = "5e7", value_parser = parse_count)]
    search_nodes: u128,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for running scenarios (0 = one per core).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write it out.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Classify the graph in an edge-list file and print the JSON report.
    Classify {
        file: PathBuf,
        /// The prime `p` with |V| a power of `p`; inferred when omitted.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Print the structure report of a group presentation.
    Group {
        /// `cyclic:N`, `split:M,N,E`, `mp:P,M,N,LAMBDA` or `xz:P,R,S,T,U`.
        spec: String,
    },
    /// Run verification scenarios (`all` for every one).
    VerifyPaper {
        scenario: String,
        /// One JSON object per scenario instead of the summary table.
        #[arg(long)]
        json: bool,
    },
    /// Convert an edge-list file to DOT.
    ExportDot {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dot,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "edgelist")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// Circulant `Cay(Z_n, S)`.
    Circulant {
        #[arg(long)]
        n: usize,
        /// Connection set, comma-separated; must be closed under negation.
        #[arg(long, value_delimiter = ',', required = true)]
        connection: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Cayley graph of a presented group on element ids.
    Cayley {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',', required = true)]
        connection: Vec<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// `Cos(G, H, H{g, g^-1}H)` with `H` generated by the given ids.
    Coset {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',', required = true)]
        h: Vec<u32>,
        #[arg(long)]
        g: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Generalized Petersen graph `P(n, t)`.
    Petersen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Multilayer generalized Petersen graph `MP_{m,n,s,t}`.
    Mp {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Lexicographic product of two edge-list files.
    Lex {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

/// Integers written plainly or in exponent form (`2000000`, `5e7`).
fn parse_count(s: &str) -> std::result::Result<u128, String> {
    if let Ok(v) = s.parse::<u128>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v < 3.4e38) {
        return Err(format!("`{s}` is not a nonnegative integer"));
    }
    Ok(v as u128)
}

fn parse_group(spec: &str, cap: usize) -> Result<FiniteGroup> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("group spec `{spec}` has no `kind:`")))?;
    let nums = rest
        .split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| Error::Parse(format!("`{x}` in `{spec}`: {e}"))))
        .collect::<Result<Vec<u64>>>()?;
    let arity = |k: usize| -> Result<()> {
        if nums.len() == k {
            Ok(())
        } else {
            Err(Error::Parse(format!("`{kind}` takes {k} parameters, got {}", nums.len())))
        }
    };
    let small = |x: u64| -> Result<u32> { u32::try_from(x).map_err(|_| Error::InvalidParameters(format!("{x} is too large"))) };
    match kind {
        "cyclic" => {
            arity(1)?;
            split_metacyclic_group(nums[0], 1, 1, cap)
        }
        "split" => {
            arity(3)?;
            split_metacyclic_group(nums[0], nums[1], nums[2], cap)
        }
        "mp" => {
            arity(4)?;
            mp_cayley_group(nums[0], small(nums[1])?, small(nums[2])?, nums[3], cap)
        }
        "xz" | "xu-zhang" => {
            arity(5)?;
            let q = XuZhangParams::new(nums[0], small(nums[1])?, small(nums[2])?, small(nums[3])?, small(nums[4])?)?;
            xu_zhang_group(q, cap)
        }
        _ => Err(Error::Parse(format!("unknown group kind `{kind}`; expected cyclic, split, mp or xz"))),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Graph::parse_edge_list(&text)
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn construct(family: Family, cap: usize) -> Result<()> {
    let (graph, out) = match family {
        Family::Circulant { n, connection, out } => (circulant(n, &connection)?, out),
        Family::Cayley { group, connection, out } => (cayley_graph(&parse_group(&group, cap)?, &connection)?, out),
        Family::Coset { group, h, g, out } => {
            let grp = parse_group(&group, cap)?;
            if let Some(&x) = h.iter().chain([&g]).find(|&&x| x as usize >= grp.order()) {
                return Err(Error::InvalidParameters(format!("element id {x} is outside 0..{}", grp.order())));
            }
            let sub = grp.subgroup(&h);
            (coset_graph_from_arc(&grp, &sub, g)?, out)
        }
        Family::Petersen { n, t, out } => (generalized_petersen(n, t)?, out),
        Family::Mp { m, n, s, t, out } => (multilayer_generalized_petersen(MPParams::new(m, n, s, t)?)?, out),
        Family::Lex { first, second, out } => (lexicographic_product(&read_graph(&first)?, &read_graph(&second)?)?, out),
    };
    let text = match out.format {
        Format::Edgelist => graph.to_edge_list(),
        Format::Dot => graph.to_dot(),
        Format::Json => graph.to_json() + "\n",
    };
    emit(&text, out.output.as_deref())
}

#[derive(Serialize)]
struct GroupSummary<'a> {
    spec: &'a str,
    #[serde(flatten)]
    structure: metacirc::groups::StructureReport,
    metacyclic: bool,
    split_metacyclic: bool,
}

fn group(spec: &str, cap: usize) -> Result<()> {
    let g = parse_group(spec, cap)?;
    let summary = GroupSummary {
        spec,
        structure: g.structure_report(cap)?,
        metacyclic: g.is_metacyclic(cap)?.is_some(),
        split_metacyclic: g.is_split_metacyclic(cap)?.is_some(),
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(())
}

fn verify(ids: Vec<&str>, opts: &VerifyOptions, json: bool) -> Result<u8> {
    let results = ids.par_iter().map(|id| run_scenario(id, opts)).collect::<Result<Vec<ScenarioResult>>>()?;
    let width = ids.iter().map(|s| s.len()).max().unwrap_or(8).max(8);
    if !json {
        println!("{:width$}  {:12}  checks", "scenario", "status");
    }
    for r in &results {
        eprintln!("{}: {:.2?}", r.id, r.wall);
        if json {
            println!("{}", r.to_json());
            continue;
        }
        println!("{:width$}  {:12}  {}/{}", r.id, r.status.as_str(), r.passed_checks(), r.evidence.len());
        for c in r.evidence.iter().filter(|c| !c.passed) {
            let tag = if c.inconclusive { "inconclusive" } else { "FAILED" };
            println!("    {tag}: {} (expected {}, observed {})", c.name, c.expected, c.observed);
        }
    }
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    if !json {
        println!(
            "{} scenarios: {} pass, {} fail, {} inconclusive",
            results.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Inconclusive)
        );
    }
    Ok(if count(Status::Fail) > 0 {
        EXIT_INPUT
    } else if count(Status::Inconclusive) > 0 {
        EXIT_INCONCLUSIVE
    } else {
        0
    })
}

fn run(cli: Cli) -> Result<u8> {
    let cap = cli.max_group_order.min(usize::MAX as u128) as usize;
    let search_nodes = cli.search_nodes.min(u64::MAX as u128) as u64;
    match cli.command {
        Command::Construct { family } => construct(family, cap)?,
        Command::Classify { file, p } => {
            let graph = read_graph(&file)?;
            let opts = ClassifyOptions {
                search: SearchOptions { max_group_order: cli.max_group_order, search_nodes, seed: cli.seed, ..SearchOptions::default() },
                max_aut_degree: cli.max_aut_degree,
                sylow_seed: None,
            };
            let report = classify(&graph, p, &opts)?;
            println!("{}", report.to_json());
            if !report.flags.is_conclusive() {
                return Ok(EXIT_INCONCLUSIVE);
            }
        }
        Command::Group { spec } => group(&spec, cap)?,
        Command::VerifyPaper { scenario, json } => {
            let ids = if scenario == "all" {
                scenario_ids()
            } else {
                let known = scenario_ids();
                let Some(&id) = known.iter().find(|&&s| s == scenario) else {
                    return Err(Error::InvalidParameters(format!(
                        "unknown scenario `{scenario}`; valid: all, {}",
                        known.join(", ")
                    )));
                };
                vec![id]
            };
            let opts = VerifyOptions {
                max_group_order: cli.max_group_order,
                max_aut_degree: cli.max_aut_degree,
                search_nodes,
                seed: cli.seed,
            };
            return verify(ids, &opts, json);
        }
        Command::ExportDot { file, output } => emit(&read_graph(&file)?.to_dot(), output.as_deref())?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
