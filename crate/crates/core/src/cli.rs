//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::designs::{scheme_to_design, verify_design};
use crate::fission::{base_number, point_fission, FissionError, FissionReport};
use crate::groups::{
    automorphism_group, cyclotomic_frobenius, frobenius_check, frobenius_witness, orbital_scheme, vector_frobenius,
    Permutation, DEFAULT_BOUND,
};
use crate::io::{read_asc, read_perm, write_asc, write_perm, FormatError};
use crate::planes::{build_plane, orbit_color_table, valid_bases, Plane, DEFAULT_RADIUS};
use crate::products::{phi_psi, verify_structure_lemmas};
use crate::report::{run_report, ReportOptions};
use crate::scheme::Scheme;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub const THREADS_ENV: &str = "SCHEME_FORGE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "scheme-forge", version, about = "Construct and verify 4-equivalenced association schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate the orbital scheme of a Frobenius group
    #[command(subcommand)]
    Gen(Gen),
    /// Validate the scheme axioms
    Check { file: PathBuf },
    /// Print valencies, symmetry, pseudocyclicity and the φ/ψ maps
    Props {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check the product statements exhaustively
    Lemmas {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the s-plane at α from the first valid base
    Plane {
        file: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
        #[arg(long)]
        json: bool,
    },
    /// Individualize points and stabilize
    Fission {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Smallest set of points whose fission is complete
    Base {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        #[arg(long)]
        json: bool,
    },
    /// Automorphism group by backtracking
    Aut {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check a .perm group, or find a Frobenius group for an .asc scheme
    Frobenius {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// The 2-(n,4,3) design of the rows
    Design {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run every applicable check
    Report {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Z_p ⋊ C_4 for a prime p ≡ 1 mod 4
    Cyclotomic {
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// (Z_p)^d ⋊ C_4
    Vector {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: GenOutput,
    },
}

#[derive(Args, Debug)]
struct GenOutput {
    /// Scheme output (.asc); stdout when absent
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the group generators (.perm)
    #[arg(long)]
    perm: Option<PathBuf>,
}

/// A failure carrying its exit code and message.
struct Exit(i32, String);

impl From<FormatError> for Exit {
    fn from(e: FormatError) -> Self {
        Exit(EXIT_INPUT, e.to_string())
    }
}

type CmdResult = Result<i32, Exit>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut buf = String::new();
    let result = pool.install(|| dispatch(cli.command, &mut buf));
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}

fn read_text(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| Exit(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Scheme, Exit> {
    read_asc(&read_text(path)?).map_err(|e| Exit(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    std::fs::write(path, text).map_err(|e| Exit(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn dispatch(cmd: Command, out: &mut String) -> CmdResult {
    match cmd {
        Command::Gen(gen) => cmd_gen(gen, out),
        Command::Check { file } => {
            match read_asc(&read_text(&file)?) {
                Ok(s) => {
                    writeln!(out, "ok: n = {}, rank = {}", s.n(), s.rank()).unwrap();
                    Ok(EXIT_OK)
                }
                Err(FormatError::Scheme(e)) => Err(Exit(EXIT_FAIL, e.to_string())),
                Err(e) => Err(e.into()),
            }
        }
        Command::Props { file, json: as_json } => cmd_props(&load(&file)?, as_json, out),
        Command::Lemmas { file, json: as_json } => {
            let s = load(&file)?;
            let rep = verify_structure_lemmas(s.tensor());
            if as_json {
                out.push_str(&json(&rep));
            } else {
                writeln!(out, "{:?}", rep.counts).unwrap();
                for f in &rep.findings {
                    writeln!(out, "{}: {}", serde_json::to_string(&f.check).unwrap().trim_matches('"'), f.detail).unwrap();
                }
                writeln!(out, "{}", if rep.passed() { "pass" } else { "fail" }).unwrap();
            }
            Ok(code(rep.passed()))
        }
        Command::Plane {
            file,
            s,
            alpha,
            radius,
            json: as_json,
        } => cmd_plane(&load(&file)?, s, alpha, radius, as_json, out),
        Command::Fission {
            file,
            points,
            json: as_json,
        } => {
            let s = load(&file)?;
            let cc = point_fission(&s, &points).map_err(|e| match e {
                FissionError::PointOutOfRange(..) | FissionError::EmptyPointSet => Exit(EXIT_USAGE, e.to_string()),
                e => Exit(EXIT_FAIL, e.to_string()),
            })?;
            let rep = FissionReport::new(&points, &cc);
            if as_json {
                out.push_str(&json(&rep));
            } else {
                writeln!(out, "colors: {}", rep.num_colors).unwrap();
                writeln!(out, "fibers: {}", rep.num_fibers).unwrap();
                for f in &rep.fibers {
                    writeln!(out, "  {f:?}").unwrap();
                }
                if let Some(semi) = rep.semiregular_off {
                    writeln!(out, "semiregular off {}: {semi}", points[0]).unwrap();
                }
                writeln!(out, "complete: {}", rep.complete).unwrap();
            }
            Ok(EXIT_OK)
        }
        Command::Base {
            file,
            cutoff,
            json: as_json,
        } => {
            let s = load(&file)?;
            let b = base_number(&s, cutoff).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
            if as_json {
                out.push_str(&json(&b));
            } else {
                writeln!(out, "b = {}", b.size).unwrap();
                writeln!(out, "witness: {:?}", b.witness).unwrap();
            }
            Ok(EXIT_OK)
        }
        Command::Aut {
            file,
            bound,
            output,
            json: as_json,
        } => {
            let s = load(&file)?;
            let g = automorphism_group(&s, bound).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
            let order = g.order(bound).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
            if let Some(path) = output {
                write_file(&path, &write_perm(&g))?;
            }
            let gens: Vec<Vec<usize>> = g.generators().iter().map(Permutation::images).collect();
            if as_json {
                #[derive(Serialize)]
                struct AutOut {
                    order: usize,
                    transitive: bool,
                    generators: Vec<Vec<usize>>,
                }
                out.push_str(&json(&AutOut {
                    order,
                    transitive: g.is_transitive(),
                    generators: gens,
                }));
            } else {
                writeln!(out, "order: {order}").unwrap();
                writeln!(out, "transitive: {}", g.is_transitive()).unwrap();
                for gen in gens {
                    writeln!(out, "{}", join(&gen)).unwrap();
                }
            }
            Ok(EXIT_OK)
        }
        Command::Frobenius {
            file,
            bound,
            json: as_json,
        } => cmd_frobenius(&file, bound, as_json, out),
        Command::Design { file, json: as_json } => {
            let s = load(&file)?;
            let d = scheme_to_design(&s).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
            let ok = verify_design(&d, 2, 4, 3);
            #[derive(Serialize)]
            struct DesignOut {
                n: usize,
                b: usize,
                k: usize,
                lambda: Option<usize>,
                two_design_4_3: bool,
            }
            let params = d.parameters();
            let rec = DesignOut {
                n: d.n,
                b: d.blocks.len(),
                k: 4,
                lambda: params.map(|p| p.lambda),
                two_design_4_3: ok,
            };
            if as_json {
                out.push_str(&json(&rec));
            } else {
                let lambda = rec.lambda.map_or("none".to_string(), |l| l.to_string());
                writeln!(out, "n = {}, b = {}, k = 4, lambda = {lambda}", rec.n, rec.b).unwrap();
                writeln!(out, "2-(n,4,3): {}", if ok { "pass" } else { "fail" }).unwrap();
            }
            Ok(code(ok))
        }
        Command::Report {
            file,
            json: as_json,
            bound,
            cutoff,
            radius,
        } => {
            let s = load(&file)?;
            let rep = run_report(&s, &file.display().to_string(), ReportOptions { bound, cutoff, radius });
            if as_json {
                out.push_str(&rep.to_json());
            } else {
                writeln!(out, "{rep}").unwrap();
            }
            Ok(code(rep.passed))
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_gen(gen: Gen, out: &mut String) -> CmdResult {
    let (group, dest) = match gen {
        Gen::Cyclotomic { p, out } => (cyclotomic_frobenius(p), out),
        Gen::Vector { p, d, out } => (vector_frobenius(p, d), out),
    };
    let group = group.map_err(|e| Exit(EXIT_USAGE, e.to_string()))?;
    let scheme = orbital_scheme(&group).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
    let text = write_asc(&scheme);
    match dest.output {
        Some(path) => write_file(&path, &text)?,
        None => out.push_str(&text),
    }
    if let Some(path) = dest.perm {
        write_file(&path, &write_perm(&group))?;
    }
    Ok(EXIT_OK)
}

fn cmd_props(s: &Scheme, as_json: bool, out: &mut String) -> CmdResult {
    #[derive(Serialize)]
    struct Props {
        n: usize,
        rank: usize,
        valencies: Vec<usize>,
        k_equivalenced: Option<usize>,
        symmetric: bool,
        commutative: bool,
        pseudocyclic: bool,
        indistinguishing: Vec<usize>,
        s2: Option<Vec<usize>>,
        s3: Option<Vec<usize>>,
        phi: Option<Vec<usize>>,
        psi: Option<Vec<usize>>,
    }
    let pp = phi_psi(s.tensor()).ok();
    let p = Props {
        n: s.n(),
        rank: s.rank(),
        valencies: s.valencies(),
        k_equivalenced: s.is_k_equivalenced(),
        symmetric: s.is_symmetric(),
        commutative: s.is_commutative(),
        pseudocyclic: s.is_pseudocyclic(),
        indistinguishing: (1..s.rank()).map(|c| s.tensor().indistinguishing(c)).collect(),
        s2: pp.as_ref().map(|pp| pp.s2.iter().copied().collect()),
        s3: pp.as_ref().map(|pp| pp.s3.iter().copied().collect()),
        phi: pp.as_ref().map(|pp| pp.phi.clone()),
        psi: pp.as_ref().map(|pp| pp.psi.clone()),
    };
    if as_json {
        out.push_str(&json(&p));
        return Ok(EXIT_OK);
    }
    writeln!(out, "n: {}", p.n).unwrap();
    writeln!(out, "rank: {}", p.rank).unwrap();
    writeln!(out, "valencies: {:?}", p.valencies).unwrap();
    match p.k_equivalenced {
        Some(k) => writeln!(out, "k-equivalenced: {k}").unwrap(),
        None => writeln!(out, "k-equivalenced: no").unwrap(),
    }
    writeln!(out, "symmetric: {}", p.symmetric).unwrap();
    writeln!(out, "commutative: {}", p.commutative).unwrap();
    writeln!(out, "pseudocyclic: {}", p.pseudocyclic).unwrap();
    writeln!(out, "c(s): {:?}", p.indistinguishing).unwrap();
    if let (Some(s2), Some(s3), Some(phi), Some(psi)) = (&p.s2, &p.s3, &p.phi, &p.psi) {
        writeln!(out, "S2: {s2:?}").unwrap();
        writeln!(out, "S3: {s3:?}").unwrap();
        writeln!(out, "phi: {phi:?}").unwrap();
        writeln!(out, "psi: {psi:?}").unwrap();
    }
    Ok(EXIT_OK)
}

fn cmd_plane(s: &Scheme, color: usize, alpha: usize, radius: usize, as_json: bool, out: &mut String) -> CmdResult {
    if color == 0 || color >= s.rank() {
        return Err(Exit(EXIT_USAGE, format!("--s must be in 1..{}", s.rank())));
    }
    if alpha >= s.n() {
        return Err(Exit(EXIT_USAGE, format!("--alpha must be in 0..{}", s.n())));
    }
    let pp = phi_psi(s.tensor()).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
    let base = *valid_bases(s, &pp, color, alpha)
        .first()
        .ok_or_else(|| Exit(EXIT_FAIL, format!("no valid base for s = {color} at {alpha}")))?;
    let plane = build_plane(s, &pp, color, base, radius).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
    let table = orbit_color_table(s, &plane);
    let invariant = crate::planes::check_rotation_invariance(s, &plane);
    if as_json {
        #[derive(Serialize)]
        struct PlaneOut<'a> {
            plane: &'a Plane,
            cells: Vec<((i32, i32), usize)>,
            orbit_colors: &'a [((i32, i32), Vec<usize>)],
            rotation_invariant: bool,
            column_axis: &'static str,
        }
        out.push_str(&json(&PlaneOut {
            plane: &plane,
            cells: plane.cells().collect(),
            orbit_colors: &table,
            rotation_invariant: invariant,
            column_axis: "P(0,i)",
        }));
    } else {
        writeln!(out, "s = {color}, base {:?}", plane.base).unwrap();
        write!(out, "{}", render_grid(&plane)).unwrap();
        writeln!(out, "color(α, P) by σ-orbit:").unwrap();
        for (cell, colors) in &table {
            writeln!(out, "  {cell:?}: {}", join(colors)).unwrap();
        }
        writeln!(out, "column axis read as P(0,i)").unwrap();
        writeln!(out, "rotation invariant: {invariant}").unwrap();
    }
    Ok(code(invariant))
}

/// Rows from `j = R` down to `−R`, columns `i = −R..R`; empty cells print `.`.
fn render_grid(plane: &Plane) -> String {
    let r = plane.cells().map(|((i, j), _)| i.abs().max(j.abs())).max().unwrap_or(0);
    let width = plane.points().last().map_or(1, |p| p.to_string().len());
    let mut s = String::new();
    for j in (-r..=r).rev() {
        let row: Vec<String> = (-r..=r)
            .map(|i| match plane.get((i, j)) {
                Some(p) => format!("{p:>width$}"),
                None => format!("{:>width$}", "."),
            })
            .collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}

fn cmd_frobenius(file: &Path, bound: usize, as_json: bool, out: &mut String) -> CmdResult {
    if file.extension().is_some_and(|e| e == "perm") {
        let g = read_perm(&read_text(file)?)?;
        let ok = frobenius_check(&g, bound).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
        if as_json {
            out.push_str(&json(&serde_json::json!({ "frobenius": ok })));
        } else {
            writeln!(out, "frobenius: {ok}").unwrap();
        }
        return Ok(code(ok));
    }
    let s = load(file)?;
    let cert = frobenius_witness(&s, bound).map_err(|e| Exit(EXIT_FAIL, e.to_string()))?;
    let found = cert.is_some();
    match cert {
        Some(c) if as_json => out.push_str(&json(&c)),
        Some(c) => {
            writeln!(out, "order: {}", c.group_order).unwrap();
            writeln!(out, "kernel: {}", c.kernel_size).unwrap();
            writeln!(out, "stabilizer: {}", c.stabilizer_order).unwrap();
            for g in c.group.generators() {
                writeln!(out, "{}", join(&g.images())).unwrap();
            }
        }
        None if as_json => out.push_str(&json(&serde_json::Value::Null)),
        None => writeln!(out, "no Frobenius group found").unwrap(),
    }
    Ok(code(found))
}
