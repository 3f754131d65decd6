mod config;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use p2flis::dualgraph::{build_dual, tile_sidecar, DualGraph};
use p2flis::leaf_formula::{
    check_equivalence, check_equivalence_with, leaf_closed, leaf_closed_published, leaf_recursive, upper_bound_k,
};
use p2flis::solver::{leaf_table, BoundKind, Mode, SearchConfig};
use p2flis::structure::{
    caterpillar_check, corridor_caterpillar_search, enumerate_3regular, plan_from_walk, walk_prefix, CaterpillarPlan,
    FamilyBuilder, FAMILY_DEPTHS, POSET_SEARCH_LIMIT,
};
use p2flis::tiling::{generate, VertexConfig};
use p2flis::FastPatch;

use config::{FileConfig, Flags, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "p2flis", version, about = "Kite/dart tilings and fully leafed induced subtrees")]
struct Cli {
    /// TOML file with default values for any run option.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for search and enumeration.
    #[arg(long, global = true, env = "P2FLIS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Default)]
struct PatchArgs {
    /// Read the patch from a JSON file instead of generating it.
    #[arg(long)]
    patch: Option<PathBuf>,
    /// Seed vertex configuration: ace, deuce, jack, queen, king, star, sun.
    #[arg(long)]
    seed: Option<String>,
    /// Number of substitution steps.
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a patch as JSON.
    Generate {
        #[command(flatten)]
        patch: PatchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the tile-adjacency graph as an edge list (`PREFIX.edges`) and a
    /// tile sidecar (`PREFIX.tiles.json`); without `--out`, print the edges.
    Dual {
        #[command(flatten)]
        patch: PatchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact maximum leaf counts for a range of orders, as CSV.
    LeafTable {
        #[command(flatten)]
        patch: PatchArgs,
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        /// verify or witness
        #[arg(long)]
        mode: Option<String>,
        /// degree or potential
        #[arg(long)]
        bound: Option<String>,
        #[arg(long)]
        node_budget: Option<u64>,
        /// Allow schedule-dependent witnesses.
        #[arg(long)]
        nondeterministic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the witness tile ids as JSON.
        #[arg(long)]
        witnesses: Option<PathBuf>,
    },
    /// Derived trees of 3-internal-regular subtrees, graded by size.
    Poset {
        #[command(flatten)]
        patch: PatchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A fully leafed caterpillar with n tiles.
    Caterpillar {
        #[arg(long)]
        n: usize,
        /// Sun-patch depth; by default the smallest depth that works.
        #[arg(long)]
        depth: Option<u32>,
        /// Always build by walking a larger host caterpillar.
        #[arg(long)]
        walk: bool,
        /// Witness JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Patch JSON the witness ids refer to.
        #[arg(long)]
        patch_out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Evaluate or check the leaf function.
    Formula {
        #[arg(long)]
        n: Option<u64>,
        /// Also print the upper bound L(n - k) + ceil(k / 2).
        #[arg(long)]
        k: Option<u64>,
        /// Check closed form against the recursion for all n up to LIMIT.
        #[arg(long)]
        check: Option<u64>,
    },
    /// Draw a patch, optionally with a witness, as SVG.
    Render {
        #[arg(long)]
        patch: PathBuf,
        /// JSON array of tile ids, or an object with a "tiles" array.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("usage error: {m}"),
                CliError::Runtime(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let threads = cli.threads.or(file.threads);
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let base = |p: &PatchArgs| Flags {
        seed: p.seed.clone(),
        depth: p.depth,
        threads,
        ..Flags::default()
    };
    match cli.cmd {
        Cmd::Generate { patch, out } => {
            let cfg = RunConfig::resolve(Flags { out, ..base(&patch) }, file)?;
            let tp = load_or_generate(&patch, &cfg)?;
            emit(cfg.out.as_deref(), &tp.to_json())
        }
        Cmd::Dual { patch, out } => {
            let cfg = RunConfig::resolve(Flags { out, ..base(&patch) }, file)?;
            let tp = load_or_generate(&patch, &cfg)?;
            let g = build_dual(&tp);
            match cfg.out {
                Some(prefix) => {
                    write(&with_suffix(&prefix, ".edges"), &g.edge_list())?;
                    write(&with_suffix(&prefix, ".tiles.json"), &tile_sidecar(&tp))
                }
                None => emit(None, &g.edge_list()),
            }
        }
        Cmd::LeafTable {
            patch,
            margin,
            n_min,
            n_max,
            mode,
            bound,
            node_budget,
            nondeterministic,
            out,
            witnesses,
        } => {
            let flags = Flags {
                margin,
                n_min,
                n_max,
                mode,
                bound,
                node_budget,
                deterministic: nondeterministic.then_some(false),
                out,
                ..base(&patch)
            };
            let cfg = RunConfig::resolve(flags, file)?;
            let tp = load_or_generate(&patch, &cfg)?;
            let g = build_dual(&tp);
            let mut sc = SearchConfig::new(cfg.n_min, g.interior_region(cfg.margin));
            sc.mode = match cfg.mode.as_str() {
                "verify" => Mode::Verify,
                "witness" => Mode::Witness,
                m => return Err(CliError::Usage(format!("unknown mode {m:?}"))),
            };
            sc.bound = match cfg.bound.as_str() {
                "degree" => BoundKind::Degree,
                "potential" => BoundKind::Potential,
                b => return Err(CliError::Usage(format!("unknown bound {b:?}"))),
            };
            sc.deterministic = cfg.deterministic;
            sc.node_budget = cfg.node_budget;
            let mut table = leaf_table(&g, &sc, cfg.n_max);
            table.rows.retain(|r| r.n >= cfg.n_min);
            if let Some(w) = witnesses {
                write(&w, &table.witnesses_json())?;
            }
            emit(cfg.out.as_deref(), &table.to_csv())
        }
        Cmd::Poset { patch, out } => {
            let cfg = RunConfig::resolve(Flags { out, ..base(&patch) }, file)?;
            let tp = load_or_generate(&patch, &cfg)?;
            let g = build_dual(&tp);
            let poset = enumerate_3regular(&tp, &g, &g.interior_region(2), POSET_SEARCH_LIMIT)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            if let Some(p) = &cfg.out {
                write(p, &poset.to_json())?;
            }
            let sizes: Vec<String> = (1..=POSET_SEARCH_LIMIT)
                .map(|k| poset.rows.get(&k).map_or(0, Vec::len).to_string())
                .collect();
            println!("rows {}", sizes.join(" "));
            println!("covers {}", poset.covers.len());
            println!("caterpillar_check {}", caterpillar_check(&poset));
            Ok(())
        }
        Cmd::Caterpillar { n, depth, walk, out, patch_out, svg } => {
            let (tp, g, plan) = find_caterpillar(n, depth, walk)?;
            let vertices = plan.vertices();
            let p = g.profile(&vertices);
            let formula = leaf_recursive(n as u64);
            let ok = p.n1 as u64 == formula && (n < 2 || p.is_tree);
            println!("n {n} n1 {} n2 {} n3 {} formula {formula} {}", p.n1, p.n2, p.n3, if ok { "PASS" } else { "FAIL" });
            if n == 116 {
                println!("note: the value 54 quoted for n = 116 is n3; the leaf count is n1 = {}", p.n1);
            }
            let witness = serde_json::json!({
                "n": n,
                "n1": p.n1,
                "n2": p.n2,
                "n3": p.n3,
                "formula": formula,
                "depth": tp.depth,
                "tiles": vertices,
                "path": plan.path,
                "word": plan.word_string(),
            });
            if let Some(o) = &out {
                write(o, &serde_json::to_string_pretty(&witness).expect("json"))?;
            }
            if let Some(o) = &patch_out {
                write(o, &tp.to_json())?;
            }
            if let Some(o) = &svg {
                write(o, &render::render_svg(&tp, &g, &vertices))?;
            }
            if ok {
                Ok(())
            } else {
                Err(CliError::Runtime("caterpillar does not reach the leaf function".into()))
            }
        }
        Cmd::Formula { n, k, check } => {
            if n.is_none() && check.is_none() {
                return Err(CliError::Usage("give --n or --check".into()));
            }
            if let Some(n) = n {
                println!("n {n} recursive {} closed {}", leaf_recursive(n), leaf_closed(n));
                if let Some(k) = k {
                    let b = upper_bound_k(n, k).map_err(|e| CliError::Usage(e.to_string()))?;
                    println!("upper_bound k {k} {b}");
                }
            }
            if let Some(limit) = check {
                match check_equivalence(limit) {
                    Ok(()) => println!("closed form agrees with recursion on [0, {limit}]"),
                    Err(m) => return Err(CliError::Runtime(format!("closed form disagrees at n = {m}"))),
                }
                if let Err(m) = check_equivalence_with(limit, leaf_closed_published) {
                    println!(
                        "uncorrected closed form first disagrees at n = {m} ({} vs {})",
                        leaf_closed_published(m),
                        leaf_recursive(m)
                    );
                }
            }
            Ok(())
        }
        Cmd::Render { patch, witness, out } => {
            let tp = read_patch(&patch)?;
            let g = build_dual(&tp);
            let ids = match witness {
                Some(w) => read_witness(&w, tp.len())?,
                None => Vec::new(),
            };
            emit(out.as_deref(), &render::render_svg(&tp, &g, &ids))
        }
    }
}

fn find_caterpillar(n: usize, depth: Option<u32>, walk: bool) -> Result<(FastPatch, DualGraph, CaterpillarPlan), CliError> {
    let depths: Vec<u32> = match depth {
        Some(d) => vec![d],
        None => FAMILY_DEPTHS.collect(),
    };
    for d in depths {
        let tp = generate::<i64>(VertexConfig::Sun, d).map_err(|e| CliError::Runtime(e.to_string()))?;
        let g = build_dual(&tp);
        let plan = if walk {
            FamilyBuilder::new(&tp, g.clone(), n)
                .ok()
                .and_then(|b| walk_prefix(&b.host, n).map(|vs| plan_from_walk(&g, &vs, &b.host)))
        } else {
            corridor_caterpillar_search(&tp, &g, n).ok()
        };
        if let Some(plan) = plan {
            return Ok((tp, g, plan));
        }
    }
    Err(CliError::Runtime(format!(
        "no caterpillar with {n} tiles found within the patch; increase the substitution depth"
    )))
}

fn load_or_generate(p: &PatchArgs, cfg: &RunConfig) -> Result<FastPatch, CliError> {
    if let Some(path) = &p.patch {
        return read_patch(path);
    }
    let seed = VertexConfig::parse(&cfg.seed).ok_or_else(|| CliError::Usage(format!("unknown seed {:?}", cfg.seed)))?;
    generate::<i64>(seed, cfg.depth).map_err(|e| CliError::Runtime(e.to_string()))
}

fn read_patch(path: &Path) -> Result<FastPatch, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    FastPatch::from_json(&text).map_err(|e| CliError::Runtime(format!("bad patch {}: {e}", path.display())))
}

fn read_witness(path: &Path, tiles: usize) -> Result<Vec<usize>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Runtime(format!("bad witness {}: {e}", path.display())))?;
    let arr = v.get("tiles").unwrap_or(&v);
    let ids: Vec<usize> = serde_json::from_value(arr.clone())
        .map_err(|e| CliError::Runtime(format!("bad witness {}: {e}", path.display())))?;
    if let Some(&bad) = ids.iter().find(|&&i| i >= tiles) {
        return Err(CliError::Runtime(format!("witness tile {bad} not in patch")));
    }
    Ok(ids)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
