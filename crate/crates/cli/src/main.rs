use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hamsub::bistellar::{recognize_sphere, FlipConfig};
use hamsub::complex::{format_facet_list, parse_facet_list, SimplicialComplex};
use hamsub::homology::{homology, intersection_form, Coefficients};
use hamsub::pipelines::{
    build_minimal_bundle, build_prop4, regular_case_table, verify_prop1, verify_prop2, verify_prop3, verify_remark2,
    verify_theorem2_on, fixtures, PipelineReport, SurfaceOptions, Theorem2Options, TightnessChoice,
};
use hamsub::polytope::{build_regular_4_polytope, cross_polytope, simplex_boundary, Regular4};
use hamsub::search::{search_hamiltonian_surfaces, solution_complex, Budget, SearchMode, SearchProblem};

#[derive(Parser)]
#[command(name = "hamsub", version, about = "Hamiltonian subcomplexes of regular polytopes")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Wall-clock budget for searches, in seconds.
    #[arg(long, global = true)]
    budget_secs: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification pipeline.
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    /// Genus table of regular cases for k-Hamiltonian 2k-manifolds in cross polytopes.
    Tables {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 30)]
        dmax: i64,
    },
    /// Simplicial homology of a facet-list file.
    Homology {
        file: PathBuf,
        #[arg(long, default_value = "Z")]
        coefficients: Coefficients,
    },
    /// Intersection form of a closed 4-manifold given as a facet-list file.
    IntersectionForm {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive search for Hamiltonian (pinched) surfaces.
    Search {
        #[arg(long)]
        polytope: Regular4,
        #[arg(long, value_enum, default_value = "surface")]
        mode: Mode,
        #[arg(long)]
        budget_nodes: Option<u64>,
        /// Resumable state file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Directory receiving one facet-list file per solution class.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Reduce a triangulated sphere to a simplex boundary by bistellar flips.
    FlipReduce {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        max_moves: usize,
    },
    /// Generate polytope boundaries.
    Polytope {
        #[command(subcommand)]
        action: PolytopeAction,
    },
}

#[derive(Subcommand)]
enum Target {
    Theorem2 {
        #[arg(long, value_enum, default_value = "halfspaces")]
        tightness: Tightness,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Read the complex from a file instead of the embedded fixture (label checks off).
        #[arg(long)]
        file: Option<PathBuf>,
    },
    Remark2,
    Prop1,
    Prop2,
    Prop3 {
        /// Accept an unfinished 600-cell search.
        #[arg(long)]
        allow_budget_exceeded: bool,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    Prop4 {
        #[arg(long)]
        k: usize,
        /// Also build the `2k+5`-vertex bundle.
        #[arg(long)]
        bundle: bool,
    },
}

#[derive(Subcommand)]
enum PolytopeAction {
    /// Print a polytope boundary: cell24, cell120, cell600, cross:D or simplex:D.
    Gen {
        name: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Surface,
    Pinched,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tightness {
    Halfspaces,
    All,
    Sampled,
    Skip,
}

fn read_complex(path: &PathBuf) -> Result<SimplicialComplex> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_facet_list(&text).with_context(|| format!("parsing {}", path.display()))?.0)
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        println!("{}", text());
    }
    Ok(())
}

fn render(r: &PipelineReport) -> String {
    let mut out = format!("{}: {}\n", r.name, if r.passed { "PASS" } else { "FAIL" });
    for s in &r.stages {
        out += &format!("  [{}] {:<22} {} ({:.2}s)\n", if s.passed { "ok" } else { "FAIL" }, s.name, s.detail, s.secs);
    }
    out.trim_end().to_string()
}

fn report(json: bool, r: &PipelineReport) -> Result<bool> {
    emit(json, r, || render(r))?;
    Ok(r.passed)
}

fn budget(cli: &Cli, nodes: Option<u64>) -> Budget {
    Budget { max_nodes: nodes, max_time: cli.budget_secs.map(Duration::from_secs) }
}

fn run(cli: &Cli) -> Result<bool> {
    let json = cli.json;
    match &cli.command {
        Command::Verify { target } => match target {
            Target::Theorem2 { tightness, samples, seed, file } => {
                let tightness = match tightness {
                    Tightness::Halfspaces => TightnessChoice::Halfspaces,
                    Tightness::All => TightnessChoice::AllSubsets,
                    Tightness::Sampled => TightnessChoice::Sampled { samples: *samples, seed: *seed },
                    Tightness::Skip => TightnessChoice::Skip,
                };
                let (k, label_checks) = match file {
                    Some(f) => (read_complex(f)?, false),
                    None => (fixtures::theorem2_complex(), true),
                };
                let opts = Theorem2Options { label_checks, tightness, ..Default::default() };
                report(json, &verify_theorem2_on(&k, &opts))
            }
            Target::Remark2 => report(json, &verify_remark2()),
            Target::Prop1 => report(json, &verify_prop1(&SurfaceOptions::default())),
            Target::Prop2 => report(json, &verify_prop2(&SurfaceOptions::default())),
            Target::Prop3 { allow_budget_exceeded, checkpoint } => {
                let mut opts = SurfaceOptions {
                    allow_budget_exceeded: *allow_budget_exceeded,
                    checkpoint: checkpoint.clone(),
                    ..Default::default()
                };
                if cli.budget_secs.is_some() {
                    opts.budget = budget(cli, None);
                }
                report(json, &verify_prop3(&opts))
            }
            Target::Prop4 { k, bundle } => {
                if *k == 0 {
                    bail!("k must be at least 1");
                }
                let (c, r) = build_prop4(*k);
                let mut ok = report(json, &r)?;
                if !json {
                    println!("  f-vector {:?}", c.f_vector());
                }
                if *bundle {
                    let (_, b) = build_minimal_bundle(*k);
                    emit(json, &b, || format!("bundle on {} vertices: {:?}", b.n_vertices, b))?;
                    ok &= b.passed;
                }
                Ok(ok)
            }
        },
        Command::Tables { k, dmax } => {
            let rows = regular_case_table(*k, *dmax)?;
            let ok = rows.iter().all(|r| r.matches_printed());
            emit(json, &rows, || {
                let mut out = format!("{:>4} {:>8} {:>8}  {:<16} {}\n", "d", "value", "genus", "printed", "existence");
                for r in &rows {
                    let printed = r.printed.as_ref().map_or("-".to_string(), |p| {
                        format!("{}{}", p.genus_text, if r.matches_printed() { "" } else { " (MISMATCH)" })
                    });
                    out += &format!("{:>4} {:>8} {:>8}  {:<16} {:?}\n", r.d, r.value, r.genus, printed, r.existence);
                }
                out.trim_end().to_string()
            })?;
            Ok(ok)
        }
        Command::Homology { file, coefficients } => {
            let h = homology(&read_complex(file)?, *coefficients);
            emit(json, &h, || h.to_string())?;
            Ok(true)
        }
        Command::IntersectionForm { file, seed } => {
            let k = read_complex(file)?;
            let cfg = FlipConfig { seed: *seed, ..Default::default() };
            let m = hamsub::bistellar::certify_combinatorial_manifold(&k, &cfg);
            if !m.certified {
                bail!("vertex links not certified as spheres ({} failures)", m.failures.len());
            }
            let f = intersection_form(&k, true)?;
            emit(json, &f, || {
                format!("rank {}, {:?}, signature {}, determinant {}", f.rank, f.parity, f.signature, f.determinant)
            })?;
            Ok(true)
        }
        Command::Search { polytope, mode, budget_nodes, checkpoint, out, no_symmetry } => {
            let m = build_regular_4_polytope(*polytope)?;
            let mode = match mode {
                Mode::Surface => SearchMode::Surface,
                Mode::Pinched => SearchMode::Pinched,
            };
            let mut p = SearchProblem::new(m.complex.clone(), mode);
            if !no_symmetry {
                p.symmetry = Some(m.symmetry_group().clone());
            }
            p.budget = budget(cli, *budget_nodes);
            p.checkpoint = checkpoint.clone();
            let o = search_hamiltonian_surfaces(&p)?;
            if let Some(dir) = out {
                fs::create_dir_all(dir)?;
                for (i, c) in o.classes.iter().chain(&o.disconnected).enumerate() {
                    let k = solution_complex(&m.complex, &c.faces);
                    let note = format!("{} pinch points, genus {}, |Aut| {}", c.profile.pinch_count(), c.profile.normalized_genus, c.automorphism_order);
                    fs::write(dir.join(format!("class{:02}.txt", i + 1)), format_facet_list(&k, &[note]))?;
                }
            }
            emit(json, &o, || {
                let mut s = format!(
                    "{:?}: {} solutions, {} classes, {} disconnected, {} nodes, {}/{} subtrees, {:.1}s",
                    o.status,
                    o.solutions.len(),
                    o.classes.len(),
                    o.disconnected.len(),
                    o.nodes,
                    o.subtrees_completed,
                    o.subtrees_total,
                    o.wall_secs
                );
                for c in &o.classes {
                    s += &format!(
                        "\n  {} pinch points, genus {}, |Aut| {}, {} solutions",
                        c.profile.pinch_count(),
                        c.profile.normalized_genus,
                        c.automorphism_order,
                        c.multiplicity
                    );
                }
                s
            })?;
            Ok(o.exhausted())
        }
        Command::FlipReduce { file, seed, max_moves } => {
            let k = read_complex(file)?;
            let cfg = FlipConfig { seed: *seed, max_moves: *max_moves, ..Default::default() };
            let r = recognize_sphere(&k, &cfg)?;
            emit(json, &r, || format!("{:?} after {} moves; f-vector {:?}", r.status, r.moves.len(), r.f_trace.last()))?;
            Ok(r.reduced())
        }
        Command::Polytope { action: PolytopeAction::Gen { name, out } } => {
            let text = polytope_text(name, json)?;
            match out {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct PolytopeDump {
    name: String,
    f_vector: Vec<usize>,
    coordinates: Vec<Vec<String>>,
    edges: Vec<(u32, u32)>,
    faces2: Vec<Vec<u32>>,
    cells3: Vec<Vec<u32>>,
}

fn polytope_text(name: &str, json: bool) -> Result<String> {
    let simplicial = |k: SimplicialComplex, note: String| -> Result<String> {
        if json {
            Ok(serde_json::to_string_pretty(&k.labeled_facets())? + "\n")
        } else {
            Ok(format_facet_list(&k, &[note]))
        }
    };
    if let Some((family, d)) = name.split_once(':') {
        let d: usize = d.parse().with_context(|| format!("dimension in {name:?}"))?;
        return match family {
            "cross" => simplicial(cross_polytope(d).0, format!("boundary of the {d}-dimensional cross polytope")),
            "simplex" => simplicial(simplex_boundary(d), format!("boundary of the {d}-simplex")),
            _ => bail!("unknown family {family:?} (use cross:D or simplex:D)"),
        };
    }
    let m = build_regular_4_polytope(name.parse()?)?;
    let one = |v: &[u32]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    let dump = PolytopeDump {
        name: m.name.to_string(),
        f_vector: m.complex.f_vector(),
        coordinates: m.coords.iter().map(|p| p.iter().map(|x| x.to_string()).collect()).collect(),
        edges: m.complex.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect(),
        faces2: m.complex.faces2.iter().map(|f| one(f)).collect(),
        cells3: m.facets.iter().map(|f| one(f)).collect(),
    };
    if json {
        return Ok(serde_json::to_string_pretty(&dump)? + "\n");
    }
    let mut out = format!("# {} f-vector {:?}, vertices 1..{}\n", dump.name, dump.f_vector, dump.coordinates.len());
    for (i, c) in dump.coordinates.iter().enumerate() {
        out += &format!("v {} {}\n", i + 1, c.join(" "));
    }
    for f in &dump.faces2 {
        out += &format!("f {}\n", f.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }
    for c in &dump.cells3 {
        out += &format!("c {}\n", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }
    Ok(out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
