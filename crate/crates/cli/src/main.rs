//! `dyckpaint` command-line front end.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dyckpaint::choose::{is_colorable, lemma2_assignment, m_c_small, phi_kappa, ListAssignment};
use dyckpaint::graphcore::{GraphKind, GraphSpec, Instance, TokenMap};
use dyckpaint::paintgame::{
    m_p_with, GameInstance, GameState, Round, Side, Solver, SolverStrategy, DEFAULT_MAX_POSITIONS,
};
use dyckpaint::pathcount::{enumerate_paths, psi, x_of_f, Method, XVector, DEFAULT_PATH_CAP};
use dyckpaint::verify::{self, Report, Status};

#[derive(Parser)]
#[command(name = "dyckpaint", version, about = "Dominated lattice paths, list colouring and the painting game")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    /// Position limit for each game solver.
    #[arg(long, global = true, env = "DYCKPAINT_MAX_POSITIONS", default_value_t = DEFAULT_MAX_POSITIONS)]
    max_positions: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Number of x-dominated lattice paths.
    Psi {
        #[arg(allow_hyphen_values = true)]
        x: XVector,
        #[arg(long, default_value = "auto")]
        method: Method,
    },
    /// Reduced form of a vector.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        x: XVector,
    },
    /// List the dominated paths.
    Paths {
        #[arg(allow_hyphen_values = true)]
        x: XVector,
        /// Print the up-step positions of each path instead of its steps.
        #[arg(long)]
        encode: bool,
        #[arg(long, env = "DYCKPAINT_PATH_CAP", default_value_t = DEFAULT_PATH_CAP)]
        cap: u64,
    },
    /// x(f) for a weakly increasing token vector, and its reduced form.
    Xvec {
        #[arg(allow_hyphen_values = true)]
        f: XVector,
    },
    /// m_p of an instance's base graph.
    Mp {
        instance: PathBuf,
        #[arg(long)]
        stats: bool,
    },
    /// m_c of an instance's base graph by enumeration, or Φ and κ for given lists.
    Mc {
        instance: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
    },
    /// Uncolourable list assignment on K_n joined with ψ(x(f)) vertices.
    Badlist { f: TokenMap },
    /// Run a verification sweep.
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
        /// Write the report here instead of stdout.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Play the painting game against the solver.
    Play {
        instance: PathBuf,
        #[arg(long = "as", value_enum)]
        role: Role,
        /// Save the round transcript as JSON.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Time the three ψ algorithms and check that they agree.
    Bench {
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[arg(long, default_value_t = 3)]
        reps: u32,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Edgeless graphs: m_p = m_c = product of f.
    Thm1 {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        f_max: u32,
    },
    /// Complete graphs: m_p = m_c = ψ(x(f)).
    Thm2 {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        f_max: u32,
    },
    /// Multiplicativity over disjoint unions of catalog parts.
    Mult {
        #[arg(long, default_value_t = 3)]
        f_max: u32,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// m_p and m_c of the path on three vertices.
    P3 {
        #[arg(long, default_value_t = 3)]
        f_max: u32,
    },
    /// Constructive Painter and solver Lister against exhaustive opponents.
    Duel {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        f_max: u32,
    },
    /// Uncolourability of the path-encoding list assignments.
    Badlists {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 6)]
        f_max: u32,
        #[arg(long, default_value_t = 200)]
        psi_max: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Role {
    Painter,
    Lister,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("value serializes"));
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Instance::from_json(&text)?)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Psi { x, method } => {
            let value = psi(x, *method);
            if cli.json {
                print_json(&json!({ "x": x, "method": method.to_string(), "psi": value }));
            } else {
                println!("{value}");
            }
        }
        Cmd::Reduce { x } => {
            let r = x.reduce();
            if cli.json {
                print_json(&json!({ "x": x, "reduced": r }));
            } else {
                println!("{r}");
            }
        }
        Cmd::Paths { x, encode, cap } => {
            let paths = enumerate_paths(x, *cap)?;
            let lines: Vec<String> = if *encode {
                paths
                    .iter()
                    .map(|p| {
                        let ups: Vec<String> = p.encode().iter().map(usize::to_string).collect();
                        format!("{{{}}}", ups.join(","))
                    })
                    .collect()
            } else {
                paths.iter().map(|p| p.to_string()).collect()
            };
            if cli.json {
                if *encode {
                    let sets: Vec<Vec<usize>> = paths.iter().map(|p| p.encode().into_iter().collect()).collect();
                    print_json(&json!({ "x": x, "count": paths.len(), "encodings": sets }));
                } else {
                    print_json(&json!({ "x": x, "count": paths.len(), "paths": paths }));
                }
            } else {
                for l in lines {
                    println!("{l}");
                }
            }
        }
        Cmd::Xvec { f } => {
            let x = x_of_f(f.entries())?;
            let r = x.reduce();
            if cli.json {
                print_json(&json!({ "f": f, "x": x, "reduced": r }));
            } else {
                println!("{x}");
                println!("reduced {r}");
            }
        }
        Cmd::Mp { instance, stats } => {
            let inst = read_instance(instance)?;
            let (g, f) = inst.base()?;
            let mut solver = Solver::new(&g)?.with_max_positions(cli.max_positions);
            let mp = m_p_with(&mut solver, f.values())?;
            let paintable = (inst.m as u64) < mp;
            let st = solver.stats();
            if cli.json {
                let mut v = json!({ "m_p": mp, "m": inst.m, "paintable": paintable });
                if *stats {
                    v["stats"] = json!(st);
                }
                print_json(&v);
            } else {
                println!("m_p = {mp}");
                println!("m = {}: {}", inst.m, if paintable { "paintable" } else { "not paintable" });
                if *stats {
                    println!("positions {} memo hits {}", st.positions, st.memo_hits);
                }
            }
        }
        Cmd::Mc { instance, lists } => {
            let inst = read_instance(instance)?;
            let (g, f) = inst.base()?;
            match lists {
                None => {
                    let mc = m_c_small(&g, &f)?;
                    if cli.json {
                        print_json(&json!({ "m_c": mc }));
                    } else {
                        println!("m_c = {mc}");
                    }
                }
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let l: ListAssignment = serde_json::from_str(&text).context("list assignment JSON")?;
                    let (phi, kappa) = phi_kappa(&g, &l)?;
                    let extendable = kappa.exceeds(inst.m as u64);
                    if cli.json {
                        print_json(&json!({ "phi": phi, "kappa": kappa, "m": inst.m, "extendable": extendable }));
                    } else {
                        for s in &phi {
                            let cs: Vec<String> = s.iter().map(u32::to_string).collect();
                            println!("{{{}}}", cs.join(","));
                        }
                        println!("kappa = {kappa}");
                        println!("{}-extendable: {}", inst.m, if extendable { "yes" } else { "no" });
                    }
                }
            }
        }
        Cmd::Badlist { f } => {
            let bad = lemma2_assignment(f)?;
            let colourable = is_colorable(&bad.graph, &bad.lists)?;
            let inst = Instance {
                graph: GraphSpec { kind: GraphKind::Complete, n: f.len(), edges: Vec::new() },
                f: f.values().to_vec(),
                m: bad.m as usize,
            };
            if cli.json {
                print_json(&json!({ "instance": inst, "lists": bad.lists.lists, "colourable": colourable }));
            } else {
                println!("K{} f={} joined with {} vertices", f.len(), f, bad.m);
                for (v, l) in bad.lists.lists.iter().enumerate() {
                    let cs: Vec<String> = l.iter().map(u32::to_string).collect();
                    println!("{v}\t{{{}}}", cs.join(","));
                }
                println!("colourable: {}", if colourable { "yes" } else { "no" });
            }
            if colourable {
                return Ok(1);
            }
        }
        Cmd::Verify { which, out } => {
            let report = match which {
                VerifyCmd::Thm1 { n_max, f_max } => verify::verify_theorem1(*n_max, *f_max),
                VerifyCmd::Thm2 { n_max, f_max } => verify::verify_theorem2(*n_max, *f_max),
                VerifyCmd::Mult { f_max, arity } => {
                    verify::verify_multiplicativity(&verify::default_catalog(*f_max), *arity)
                }
                VerifyCmd::P3 { f_max } => verify::explore_p3(*f_max),
                VerifyCmd::Duel { n_max, f_max } => verify::verify_duels(*n_max, *f_max),
                VerifyCmd::Badlists { n_max, f_max, psi_max } => verify::verify_bad_lists(*n_max, *f_max, *psi_max),
            };
            return emit_report(&report, cli.json, out.as_deref());
        }
        Cmd::Play { instance, role, transcript } => {
            let inst = read_instance(instance)?;
            let (g, f) = inst.base()?;
            let game = GameInstance::new(g, f, inst.m)?;
            let stdin = io::stdin();
            let record = play(&game, *role, cli.max_positions, &mut stdin.lock(), cli.json)?;
            if let Some(path) = transcript {
                fs::write(path, serde_json::to_string_pretty(&record.1)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if cli.json {
                print_json(&json!({ "winner": record.0, "transcript": record.1 }));
            }
        }
        Cmd::Bench { nmax, reps } => return bench(*nmax, *reps, cli.json),
    }
    Ok(0)
}

fn emit_report(report: &Report, json: bool, out: Option<&Path>) -> Result<u8> {
    let text = if json { report.to_json() + "\n" } else { report.to_tsv() };
    match out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    let s = report.summary();
    eprintln!("{}: {} pass, {} violation, {} cap exceeded", report.name, s.pass, s.violation, s.cap_exceeded);
    for r in report.rows.iter().filter(|r| r.status != Status::Pass) {
        eprintln!("  {} {}: {}", r.status, r.instance, r.note.as_deref().unwrap_or(""));
    }
    Ok(if s.violation > 0 {
        1
    } else if s.cap_exceeded > 0 {
        2
    } else {
        0
    })
}

fn render(state: &GameState, out: &mut dyn Write) -> io::Result<()> {
    let n = state.n_base;
    let base_is_clique = state.graph.induced(&(0..n).collect::<Vec<_>>()).is_complete();
    let cell = |v: usize| {
        if state.coloured[v] {
            format!("{v}:*")
        } else {
            format!("{v}:{}", state.tokens[v])
        }
    };
    let row = |range: std::ops::Range<usize>| range.map(cell).collect::<Vec<_>>().join("  ");
    let label = if base_is_clique { "clique side" } else { "base side" };
    writeln!(out, "  {label:<17}| {}", row(0..n))?;
    writeln!(out, "  {:<17}| {}", "independent side", row(n..state.graph.n_vertices()))
}

fn parse_ids(line: &str) -> Result<Vec<usize>> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty() && *s != "-")
        .map(|s| s.parse::<usize>().with_context(|| format!("bad vertex id {s:?}")))
        .collect()
}

fn prompt(input: &mut dyn BufRead, out: &mut dyn Write, text: &str) -> Result<String> {
    write!(out, "{text}")?;
    out.flush()?;
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        bail!("input ended before the game finished");
    }
    Ok(line.trim().to_string())
}

/// Interactive game; the human takes `role` and the solver the other side.
/// The board goes to stdout, or to stderr when stdout carries JSON.
fn play(
    game: &GameInstance,
    role: Role,
    max_positions: usize,
    input: &mut dyn BufRead,
    json: bool,
) -> Result<(Side, Vec<Round>)> {
    let mut stdout = io::stdout();
    let mut stderr = io::stderr();
    let out: &mut dyn Write = if json { &mut stderr } else { &mut stdout };
    let mut solver = SolverStrategy::new(game)?.with_max_positions(max_positions);
    let mut state = game.initial_state()?;
    let favoured = if solver.painter_wins(&state)? { "Painter" } else { "Lister" };
    writeln!(out, "{favoured} wins with best play")?;
    let mut transcript = Vec::new();
    loop {
        if let Some(winner) = state.winner() {
            let you = matches!((winner, role), (Side::Painter, Role::Painter) | (Side::Lister, Role::Lister));
            writeln!(out, "{} wins; you {}", side_name(winner), if you { "win" } else { "lose" })?;
            return Ok((winner, transcript));
        }
        writeln!(out, "round {}", transcript.len() + 1)?;
        render(&state, out)?;
        let (marked, colored) = match role {
            Role::Lister => {
                let marked = loop {
                    let mut ids = parse_ids(&prompt(input, out, "mark> ")?).unwrap_or_else(|e| {
                        let _ = writeln!(out, "{e}");
                        Vec::new()
                    });
                    ids.sort_unstable();
                    match state.check_marks(&ids) {
                        Ok(()) => break ids,
                        Err(e) => writeln!(out, "{e}")?,
                    }
                };
                let mut colored = solver.best_colours(&state, &marked)?;
                colored.sort_unstable();
                writeln!(out, "Painter colours {colored:?}")?;
                (marked, colored)
            }
            Role::Painter => {
                let mut marked = solver.best_marks(&state)?;
                marked.sort_unstable();
                writeln!(out, "Lister marks {marked:?}")?;
                let colored = loop {
                    let Ok(mut ids) = parse_ids(&prompt(input, out, "colour> ")?) else {
                        writeln!(out, "enter vertex ids separated by commas, or - for none")?;
                        continue;
                    };
                    ids.sort_unstable();
                    match state.check_colours(&marked, &ids) {
                        Ok(()) => break ids,
                        Err(e) => writeln!(out, "{e}")?,
                    }
                };
                (marked, colored)
            }
        };
        state = state.play_round(&marked, &colored)?;
        transcript.push(Round { marked, colored });
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Painter => "Painter",
        Side::Lister => "Lister",
    }
}

fn bench(nmax: usize, reps: u32, json: bool) -> Result<u8> {
    let families: [(&str, fn(i64) -> i64); 2] = [("staircase", |i| i), ("double", |i| 2 * i)];
    let mut rows = Vec::new();
    let mut disagreements = 0;
    for (name, entry) in families {
        for n in 1..=nmax as i64 {
            let x = XVector::new((0..n).map(entry).collect());
            let mut values = Vec::new();
            let mut times = Vec::new();
            for method in [Method::Dp, Method::Rec, Method::Det] {
                let mut best = Duration::MAX;
                let mut value = None;
                for _ in 0..reps.max(1) {
                    let start = Instant::now();
                    let v = psi(&x, method);
                    best = best.min(start.elapsed());
                    value = Some(v);
                }
                values.push(value.expect("at least one repetition"));
                times.push(best.as_secs_f64() * 1e6);
            }
            let agree = values.iter().all(|v| *v == values[0]);
            if !agree {
                disagreements += 1;
            }
            rows.push(json!({
                "family": name,
                "n": n,
                "psi": values[0],
                "dp_us": times[0],
                "rec_us": times[1],
                "det_us": times[2],
                "agree": agree,
            }));
        }
    }
    if json {
        print_json(&json!(rows));
    } else {
        println!("family\tn\tpsi\tdp_us\trec_us\tdet_us\tagree");
        for r in &rows {
            println!(
                "{}\t{}\t{}\t{:.1}\t{:.1}\t{:.1}\t{}",
                r["family"].as_str().unwrap_or_default(),
                r["n"],
                r["psi"].as_str().unwrap_or_default(),
                r["dp_us"].as_f64().unwrap_or_default(),
                r["rec_us"].as_f64().unwrap_or_default(),
                r["det_us"].as_f64().unwrap_or_default(),
                r["agree"]
            );
        }
    }
    Ok(if disagreements > 0 { 1 } else { 0 })
}
