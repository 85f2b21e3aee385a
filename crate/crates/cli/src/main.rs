use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use higher_operads::cubes::{endpoints, realize, CubeConfig};
use higher_operads::hoperad::{chain_category, enumerate_chains};
use higher_operads::omega::{hom_set, prune, MorphismJson};
use higher_operads::polytopes::{associahedron, braid_polytope, permutohedron, tonks_projection};
use higher_operads::quotient::{collapse, generators_for};
use higher_operads::{
    enumerate_trees_bounded, nerve_profile, CategoryJson, ChainOptions, Error, ErrorKind,
    FinCategory, Poset, RelationKind, RelationOptions, Tree, TreeMorphism,
};
use serde::Deserialize;
use serde_json::{json, Value};

/// Trees, tree morphisms, chain operads and coherence polytopes.
///
/// Trees are written in bracket notation, e.g. `[[*,*],[*]]`. Any argument
/// may be given as `@path` to read it from a file.
#[derive(Parser, Debug)]
#[command(name = "hop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-tree operations.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// List the morphisms between two trees of equal height.
    Hom {
        source: String,
        target: String,
        /// Keep only morphisms surjective on tips.
        #[arg(long)]
        surjective: bool,
        /// Keep only morphisms bijective on tips.
        #[arg(long)]
        bijective: bool,
        /// Print the number of morphisms only.
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
    },
    /// Fibers of a morphism over the leaves of its target.
    Fibers {
        #[command(flatten)]
        morphism: MorphismArg,
        #[arg(long)]
        json: bool,
    },
    /// Chains from a tree down to the unit tree.
    Chains {
        tree: String,
        #[command(flatten)]
        options: ChainArgs,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
    },
    /// Face posets of coherence polytopes.
    #[command(subcommand)]
    Polytope(PolytopeCommand),
    /// Little-cube realizations.
    #[command(subcommand)]
    Cubes(CubesCommand),
    /// Simplex counts of the nerve of a category.
    Nerve {
        /// Category as JSON (`objects`, `arrows`, `identities`, `composition`).
        category: Option<String>,
        /// Use the chain category of this tree instead.
        #[arg(long, conflicts_with = "category")]
        chains: Option<String>,
        #[command(flatten)]
        options: ChainArgs,
        /// Highest dimension counted.
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Quotient of a chain category by relation families.
    Collapse {
        tree: String,
        /// Comma-separated relation families.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "tu,tt")]
        relations: Vec<Relation>,
        /// Treat steps that prune to identities as units in tensor relations.
        #[arg(long)]
        prune_units: bool,
        #[command(flatten)]
        options: ChainArgs,
        #[command(flatten)]
        output: PosetOutput,
    },
}

#[derive(Subcommand, Debug)]
enum TreeCommand {
    /// Parse and print in normal form.
    Parse {
        tree: String,
        #[arg(long)]
        json: bool,
    },
    /// Number of tips.
    Tips { tree: String },
    /// Pruned subtree.
    Prune {
        tree: String,
        /// Also print the inclusion into the original tree.
        #[arg(long)]
        json: bool,
    },
    /// Composite `left ⊗_k right`.
    Compose {
        left: String,
        right: String,
        /// Direction k.
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// All trees of a height with bounded tips.
    Enumerate {
        height: usize,
        max_tips: usize,
        /// Pruned trees only.
        #[arg(long)]
        pruned: bool,
        /// Level cap for non-pruned trees (default: max(max_tips, 1)).
        #[arg(long)]
        max_width: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum PolytopeCommand {
    /// Associahedron on l inputs.
    Assoc {
        l: usize,
        #[command(flatten)]
        output: PosetOutput,
    },
    /// Permutohedron on l inputs.
    Perm {
        l: usize,
        #[command(flatten)]
        output: PosetOutput,
    },
    /// Projection from the permutohedron onto the associahedron.
    Tonks {
        l: usize,
        #[arg(long)]
        json: bool,
    },
    /// Braiding polytope of a pruned 2-tree.
    Braid {
        tree: String,
        /// Also impose strict associativity.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: PosetOutput,
    },
}

#[derive(Subcommand, Debug)]
enum CubesCommand {
    /// Box configuration of a tree.
    Realize {
        tree: String,
        #[command(flatten)]
        output: CubeOutput,
    },
    /// Both ends of the path attached to a morphism of pruned trees.
    Endpoints {
        #[command(flatten)]
        morphism: MorphismArg,
        #[command(flatten)]
        output: CubeOutput,
    },
}

#[derive(Args, Debug)]
struct MorphismArg {
    /// Either a morphism as JSON, or `SOURCE TARGET INDEX` picking the
    /// INDEX-th (1-based) entry of `hom SOURCE TARGET`.
    #[arg(num_args = 1..=3, required = true)]
    morphism: Vec<String>,
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Allow steps that are not surjective on tips (needs --max-len).
    #[arg(long)]
    non_surjective: bool,
    /// Allow identity steps (needs --max-len).
    #[arg(long)]
    identity_steps: bool,
    /// Allow intermediate trees that are not pruned.
    #[arg(long)]
    unpruned: bool,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    max_width: Option<usize>,
}

impl ChainArgs {
    fn options(&self) -> ChainOptions {
        ChainOptions {
            surjective_only: !self.non_surjective,
            no_identity_steps: !self.identity_steps,
            pruned_only: !self.unpruned,
            max_len: self.max_len,
            max_width: self.max_width,
        }
    }
}

#[derive(Args, Debug)]
struct PosetOutput {
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    /// Hasse diagram in DOT.
    #[arg(long)]
    dot: bool,
}

#[derive(Args, Debug)]
struct CubeOutput {
    #[arg(long, conflicts_with = "svg")]
    json: bool,
    /// SVG drawing (dimension 2 only).
    #[arg(long)]
    svg: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Relation {
    Tu,
    Tt,
    Tensor,
    Prune,
    Strict,
}

impl From<Relation> for RelationKind {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Tu => RelationKind::TU,
            Relation::Tt => RelationKind::TT,
            Relation::Tensor => RelationKind::Tensor,
            Relation::Prune => RelationKind::Prune,
            Relation::Strict => RelationKind::StrictAssoc,
        }
    }
}

/// Failures outside the library: unreadable files, bad JSON, bad indices.
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Input(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Lib(e) => match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Bounds => 3,
                ErrorKind::Invariant => 4,
            },
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Input(m) => ("parse", m.clone()),
            Failure::Lib(e) => (
                match e.kind() {
                    ErrorKind::Parse => "parse",
                    ErrorKind::Bounds => "bounds",
                    ErrorKind::Invariant => "invariant",
                },
                e.to_string(),
            ),
        };
        json!({ "error": kind, "message": message })
    }
}

type Output = Result<String, Failure>;

fn read_arg(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_owned())
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_owned()),
    }
}

fn tree(arg: &str) -> Result<Tree, Failure> {
    Ok(read_arg(arg)?.parse()?)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("malformed JSON: {e}")))
}

fn morphism(arg: &MorphismArg) -> Result<TreeMorphism, Failure> {
    match arg.morphism.as_slice() {
        [one] => Ok(TreeMorphism::from_json(&parse_json::<MorphismJson>(
            &read_arg(one)?,
        )?)?),
        [s, t, i] => {
            let homs = hom_set(&tree(s)?, &tree(t)?)?;
            let index: usize = read_arg(i)?
                .parse()
                .map_err(|_| Failure::Usage(format!("index {i} is not a number")))?;
            index
                .checked_sub(1)
                .and_then(|k| homs.get(k).cloned())
                .ok_or_else(|| {
                    Failure::Usage(format!("index {index} out of range 1..={}", homs.len()))
                })
        }
        _ => Err(Failure::Usage(
            "expected a morphism JSON or SOURCE TARGET INDEX".into(),
        )),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn tuple(values: &[impl ToString]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn poset_json(p: &Poset) -> Result<Value, Failure> {
    let elements: Vec<Value> = (0..p.len())
        .map(|a| json!({ "label": p.labels()[a], "rank": p.rank(a) }))
        .collect();
    Ok(json!({
        "f_vector": p.f_vector()?,
        "elements": elements,
        "covers": p.covers(),
    }))
}

fn show_poset(p: &Poset, name: &str, output: &PosetOutput) -> Output {
    if output.dot {
        Ok(p.to_dot(name))
    } else if output.json {
        Ok(pretty(&poset_json(p)?))
    } else {
        Ok(format!("f-vector: {}", tuple(&p.f_vector()?)))
    }
}

fn show_cubes(c: &CubeConfig, output: &CubeOutput) -> Output {
    if output.svg {
        Ok(c.to_svg(SVG_SIZE)?)
    } else if output.json {
        Ok(pretty(&json!(c.to_json())))
    } else {
        Ok(cube_lines(c))
    }
}

const SVG_SIZE: u32 = 400;

fn cube_lines(c: &CubeConfig) -> String {
    c.cubes()
        .enumerate()
        .map(|(i, b)| {
            let sides: Vec<String> = b
                .intervals
                .iter()
                .map(|(lo, hi)| format!("[{lo},{hi}]"))
                .collect();
            format!("{}: {}", i + 1, sides.join(" x "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn run_tree(cmd: &TreeCommand) -> Output {
    match cmd {
        TreeCommand::Parse { tree: t, json } => {
            let t = tree(t)?;
            Ok(if *json {
                pretty(&json!(t.to_json()))
            } else {
                t.to_string()
            })
        }
        TreeCommand::Tips { tree: t } => Ok(tree(t)?.tips().to_string()),
        TreeCommand::Prune { tree: t, json } => {
            let (p, inclusion) = prune(&tree(t)?)?;
            Ok(if *json {
                pretty(&json!({ "tree": p.to_string(), "inclusion": inclusion.to_json() }))
            } else {
                p.to_string()
            })
        }
        TreeCommand::Compose {
            left,
            right,
            k,
            json,
        } => {
            let c = tree(left)?.compose(&tree(right)?, *k)?;
            Ok(if *json {
                pretty(&json!(c.to_json()))
            } else {
                c.to_string()
            })
        }
        TreeCommand::Enumerate {
            height,
            max_tips,
            pruned,
            max_width,
            json,
        } => {
            let width = max_width.unwrap_or((*max_tips).max(1));
            let trees = enumerate_trees_bounded(*height, *max_tips, width, *pruned)?;
            let names: Vec<String> = trees.iter().map(Tree::to_string).collect();
            Ok(if *json {
                pretty(&json!(names))
            } else {
                names.join("\n")
            })
        }
    }
}

fn run_polytope(cmd: &PolytopeCommand) -> Output {
    match cmd {
        PolytopeCommand::Assoc { l, output } => {
            show_poset(&associahedron(*l)?, &format!("K{l}"), output)
        }
        PolytopeCommand::Perm { l, output } => {
            show_poset(&permutohedron(*l)?, &format!("P{l}"), output)
        }
        PolytopeCommand::Tonks { l, json } => {
            let tp = tonks_projection(*l)?;
            let collapsed = tp.collapsed_fibers();
            if *json {
                Ok(pretty(&json!({
                    "permutohedron": poset_json(&tp.permutohedron)?,
                    "associahedron": poset_json(&tp.associahedron)?,
                    "map": tp.map,
                    "collapsed": collapsed,
                })))
            } else {
                let mut lines = vec![format!(
                    "{} -> {} faces",
                    tp.permutohedron.len(),
                    tp.associahedron.len()
                )];
                for fiber in &collapsed {
                    let mut ranks: Vec<usize> =
                        fiber.iter().map(|&a| tp.permutohedron.rank(a)).collect();
                    ranks.sort_unstable();
                    lines.push(format!("collapsed: ranks {}", tuple(&ranks)));
                }
                Ok(lines.join("\n"))
            }
        }
        PolytopeCommand::Braid {
            tree: t,
            strict,
            output,
        } => show_poset(&braid_polytope(&tree(t)?, *strict)?, "braid", output),
    }
}

fn run_cubes(cmd: &CubesCommand) -> Output {
    match cmd {
        CubesCommand::Realize { tree: t, output } => show_cubes(&realize(&tree(t)?)?, output),
        CubesCommand::Endpoints {
            morphism: m,
            output,
        } => {
            let (left, right) = endpoints(&morphism(m)?)?;
            if output.svg {
                let (l, r) = (left.to_svg(SVG_SIZE)?, right.to_svg(SVG_SIZE)?);
                let gap = SVG_SIZE / 8;
                let width = 2 * SVG_SIZE + gap;
                Ok(format!(
                    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{SVG_SIZE}\">\n<g>\n{l}</g>\n<g transform=\"translate({},0)\">\n{r}</g>\n</svg>\n",
                    SVG_SIZE + gap
                ))
            } else if output.json {
                Ok(pretty(
                    &json!({ "left": left.to_json(), "right": right.to_json() }),
                ))
            } else {
                Ok(format!(
                    "left:\n{}\nright:\n{}",
                    cube_lines(&left),
                    cube_lines(&right)
                ))
            }
        }
    }
}

fn run(cli: &Cli) -> Output {
    match &cli.command {
        Command::Tree(cmd) => run_tree(cmd),
        Command::Polytope(cmd) => run_polytope(cmd),
        Command::Cubes(cmd) => run_cubes(cmd),
        Command::Hom {
            source,
            target,
            surjective,
            bijective,
            count,
            json,
        } => {
            let homs: Vec<TreeMorphism> = hom_set(&tree(source)?, &tree(target)?)?
                .into_iter()
                .filter(|s| !*surjective || s.is_tip_surjective())
                .filter(|s| !*bijective || s.is_tip_bijective())
                .collect();
            Ok(if *count {
                homs.len().to_string()
            } else if *json {
                let all: Vec<MorphismJson> = homs.iter().map(TreeMorphism::to_json).collect();
                pretty(&json!(all))
            } else {
                homs.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Command::Fibers { morphism: m, json } => {
            let fibers = morphism(m)?.fibers();
            Ok(if *json {
                let all: Vec<Value> = fibers
                    .iter()
                    .map(|(leaf, t)| {
                        json!({ "leaf": [leaf.height, leaf.position + 1], "fiber": t.to_string() })
                    })
                    .collect();
                pretty(&json!(all))
            } else {
                fibers
                    .iter()
                    .map(|(leaf, t)| format!("{leaf}: {t}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Command::Chains {
            tree: t,
            options,
            count,
            json,
        } => {
            let chains = enumerate_chains(&tree(t)?, &options.options())?;
            Ok(if *count {
                chains.len().to_string()
            } else if *json {
                let all: Vec<Value> = chains.iter().map(|c| json!(c.to_json())).collect();
                pretty(&json!(all))
            } else {
                chains
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Command::Nerve {
            category,
            chains,
            options,
            max_dim,
            json,
        } => {
            let cat = match (category, chains) {
                (Some(c), None) => {
                    FinCategory::from_json(&parse_json::<CategoryJson>(&read_arg(c)?)?)?
                }
                (None, Some(t)) => chain_category(&tree(t)?, &options.options())?.category,
                _ => {
                    return Err(Failure::Usage(
                        "give a category JSON or --chains TREE".into(),
                    ))
                }
            };
            let profile = nerve_profile(&cat, *max_dim)?;
            Ok(if *json {
                pretty(&json!(profile))
            } else {
                let chi = profile
                    .euler_characteristic
                    .map_or("n/a (truncated)".to_owned(), |c| c.to_string());
                format!(
                    "f-vector: {}\neuler characteristic: {chi}",
                    tuple(&profile.f_vector)
                )
            })
        }
        Command::Collapse {
            tree: t,
            relations,
            prune_units,
            options,
            output,
        } => {
            let chains = chain_category(&tree(t)?, &options.options())?;
            let kinds: Vec<RelationKind> = relations.iter().map(|&r| r.into()).collect();
            let gens = generators_for(
                &chains,
                &kinds,
                RelationOptions {
                    prune_units: *prune_units,
                },
            )?;
            let q = collapse(&chains.category, &gens)?;
            show_poset(&Poset::from_category(&q.category)?, "quotient", output)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let failure = Failure::Usage(e.to_string().trim().to_owned());
            eprintln!("{}", failure.to_json());
            return ExitCode::from(failure.exit_code());
        }
    };
    match run(&cli) {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            ExitCode::from(failure.exit_code())
        }
    }
}
