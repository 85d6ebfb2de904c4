use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use minkdiam::exactlinalg::{frac, Rational};
use minkdiam::generators::{
    cube, pi_polygon, prop21, prop22, random_polytope, rational_polygon, simplex, theta, xi,
    xi_tilde, PiParams, XiParams,
};
use minkdiam::graph::{build_graph, diameter};
use minkdiam::io::{emit_polytope_file, parse_polytope_file, parse_rational, Format};
use minkdiam::minkowski::{
    erosion, has_homothetic_summand, is_summand, is_zonotope, max_summand_scale, minkowski_sum,
    MinkowskiError,
};
use minkdiam::polytope::{fan_refines, fans_equal, ExactPolytope};
use minkdiam::verify::{
    check_decomposability, check_diameter_bounds, check_random_pairs, check_structure_lemmas,
    ratio_csv, ratio_tables, run_suite, RatioKind, VerificationReport,
};

/// Exact Minkowski sums, polytope graphs and diameters.
#[derive(Parser)]
#[command(name = "minkdiam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a polytope
    Gen(GenArgs),
    /// Minkowski sum of two polytopes
    Sum {
        a: String,
        b: String,
        /// Print the summand vertex pair of every sum vertex instead of the polytope
        #[arg(long)]
        decomposition: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Graph diameter with a realizing vertex pair
    Diameter { p: String },
    /// Vertex and edge lists of the graph
    Graph { p: String },
    /// Summand tests of Q in P
    Summand {
        p: String,
        q: String,
        /// Width of the scale bracket
        #[arg(long, default_value = "1/1024")]
        tolerance: String,
    },
    /// Zonotope test with the peeled generators
    IsZonotope { p: String },
    /// Minkowski difference {x : x + Q ⊆ P}
    Erode {
        p: String,
        q: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare normal fans
    Fans {
        relation: FanRelation,
        p: String,
        q: String,
    },
    /// Run verification suites
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output file, `-` for standard output
    #[arg(long, default_value = "-")]
    out: String,
    /// Output format
    #[arg(long, default_value = "ext")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Cube,
    Simplex,
    Polygon,
    Prop21,
    Prop22,
    Xi,
    Pi,
    Theta,
    Xitilde,
    Random,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Number of polygon vertices or random points
    #[arg(long)]
    n: Option<usize>,
    /// Chain lift of `xi`, `theta` and `xitilde`
    #[arg(long)]
    eps: Option<String>,
    /// Inward reach of the quadrilateral planes
    #[arg(long)]
    s: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coordinate bound of random points
    #[arg(long, default_value_t = 10)]
    bound: i64,
    /// For `prop22`, emit the second pyramid
    #[arg(long)]
    second: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FanRelation {
    Equal,
    Refines,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Bounds,
    Lemmas,
    Decomp,
    /// Ξ(k,4) against Ξ(k,4) plus a vertical segment
    #[value(name = "thm41")]
    XiSegment,
    /// Ξ̃(k,2m+4,m) against Ξ̃ plus Π
    #[value(name = "thm42")]
    XiTildePi,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    /// For `bounds` and `lemmas`: check this pair instead of random pairs
    files: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value = "json")]
    report: ReportFormat,
    /// Values of k for `thm41` and `thm42`
    #[arg(long, value_delimiter = ',')]
    k_values: Option<Vec<usize>>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Write the ratio table of `thm41`/`thm42` as CSV
    #[arg(long)]
    table: Option<String>,
    /// Report file, `-` for standard output
    #[arg(long, default_value = "-")]
    out: String,
}

/// Usage and input errors exit with 2, failed checks with 1.
enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Check(e.into())
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(usage)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {path}")).map_err(usage)
    }
}

fn load(path: &str) -> Result<ExactPolytope, Failure> {
    let text = read_input(path)?;
    parse_polytope_file(&text).with_context(|| format!("in {path}")).map_err(usage)
}

fn load_pair(a: &str, b: &str) -> Result<(ExactPolytope, ExactPolytope), Failure> {
    if a == "-" && b == "-" {
        return Err(usage(anyhow!("only one input can be read from standard input")));
    }
    let (p, q) = (load(a)?, load(b)?);
    if p.ambient_dim() != q.ambient_dim() {
        return Err(usage(anyhow!(
            "dimension mismatch: {} vs {}",
            p.ambient_dim(),
            q.ambient_dim()
        )));
    }
    Ok((p, q))
}

/// Exits quietly when the reader of standard output has gone away.
fn stdout_ok(r: io::Result<()>) -> io::Result<()> {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
        r => r,
    }
}

macro_rules! out {
    ($($arg:tt)*) => {
        stdout_ok(writeln!(io::stdout(), $($arg)*))?
    };
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    if path == "-" {
        stdout_ok(io::stdout().write_all(text.as_bytes()))?;
    } else {
        fs::write(path, text).with_context(|| format!("cannot write {path}"))?;
    }
    Ok(())
}

fn rational_arg(s: &Option<String>) -> Result<Option<Rational>, Failure> {
    s.as_ref()
        .map(|t| parse_rational(t).ok_or_else(|| usage(anyhow!("invalid rational '{t}'"))))
        .transpose()
}

fn need(v: Option<usize>, name: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| usage(anyhow!("--{name} is required")))
}

fn xi_params(g: &GenArgs) -> Result<XiParams, Failure> {
    let mut p = XiParams::new(need(g.k, "k")?, need(g.l, "l")?);
    if let Some(e) = rational_arg(&g.eps)? {
        p.eps = e;
    }
    if let Some(s) = rational_arg(&g.s)? {
        p.s = s;
    }
    p.validate().map_err(usage)?;
    Ok(p)
}

fn generate(g: &GenArgs) -> Result<ExactPolytope, Failure> {
    let poly = match g.kind {
        GenKind::Cube => cube(need(g.d, "d")?),
        GenKind::Simplex => simplex(need(g.d, "d")?),
        GenKind::Polygon => {
            let n = need(g.n, "n")?;
            if n < 3 {
                return Err(usage(anyhow!("a polygon needs n ≥ 3")));
            }
            rational_polygon(n)
        }
        GenKind::Prop21 => prop21(need(g.d, "d")?, need(g.k, "k")?).map_err(usage)?,
        GenKind::Prop22 => {
            let (p, q) = prop22(need(g.d, "d")?, need(g.k, "k")?).map_err(usage)?;
            if g.second {
                q
            } else {
                p
            }
        }
        GenKind::Xi => xi(&xi_params(g)?)?.0,
        GenKind::Pi => pi_polygon(&PiParams::new(need(g.m, "m")?))?,
        GenKind::Theta => theta(&xi_params(g)?)?.0,
        GenKind::Xitilde => xi_tilde(&xi_params(g)?, &PiParams::new(need(g.m, "m")?))?.0,
        GenKind::Random => {
            let d = need(g.d, "d")?;
            let n = need(g.n, "n")?;
            if n <= d || g.bound < 1 {
                return Err(usage(anyhow!("random needs n > d and bound ≥ 1")));
            }
            random_polytope(d, n, g.bound, g.seed)
        }
    };
    Ok(poly)
}

fn emit_report(rep: &VerificationReport, a: &VerifyArgs) -> Result<(), Failure> {
    let text = match a.report {
        ReportFormat::Json => rep.to_json(),
        ReportFormat::Csv => rep.to_csv(),
    };
    write_output(&a.out, &text)?;
    eprintln!(
        "{}: {} checks, {} passed, {} failed",
        rep.suite, rep.summary.total, rep.summary.passed, rep.summary.failed
    );
    for f in rep.failures().iter().take(10) {
        eprintln!("FAIL {} / {}: {}", f.instance, f.check, f.witness);
    }
    if rep.passes() {
        Ok(())
    } else {
        Err(Failure::Check(anyhow!("{} checks failed", rep.summary.failed)))
    }
}

fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let pair = match a.files.as_slice() {
        [] => None,
        [p, q] => Some(load_pair(p, q)?),
        _ => return Err(usage(anyhow!("expected two polytope files or none"))),
    };
    let rep = match (a.suite, &pair) {
        (Suite::Bounds, Some((p, q))) => check_diameter_bounds(p, q),
        (Suite::Lemmas, Some((p, q))) => check_structure_lemmas(p, q),
        (Suite::Bounds | Suite::Lemmas, None) => check_random_pairs(a.seed, a.trials),
        (_, Some(_)) => return Err(usage(anyhow!("only bounds and lemmas take polytope files"))),
        (Suite::Decomp, None) => check_decomposability(a.trials.max(1), a.seed),
        (Suite::XiSegment | Suite::XiTildePi, None) => {
            let (kind, default_ks) = if matches!(a.suite, Suite::XiSegment) {
                (RatioKind::XiSegment, (3..=10).collect())
            } else {
                (RatioKind::XiTildePi, vec![5, 9])
            };
            let ks = a.k_values.clone().unwrap_or(default_ks);
            let (rep, rows) = ratio_tables(kind, &ks, a.m)?;
            if let Some(path) = &a.table {
                write_output(path, &ratio_csv(&rows))?;
            }
            rep
        }
        (Suite::All, None) => run_suite(a.seed, a.trials),
    };
    emit_report(&rep, a)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen(g) => {
            let p = generate(&g)?;
            write_output(&g.out.out, &emit_polytope_file(&p, g.out.format))
        }
        Command::Sum { a, b, decomposition, out } => {
            let (p, q) = load_pair(&a, &b)?;
            let s = minkowski_sum(&p, &q)?;
            if decomposition {
                let mut text = String::new();
                for (w, (u, v)) in s.decomposition.iter().enumerate() {
                    text.push_str(&format!("{w} {u} {v}\n"));
                }
                write_output(&out.out, &text)
            } else {
                write_output(&out.out, &emit_polytope_file(&s.sum, out.format))
            }
        }
        Command::Diameter { p } => {
            let p = load(&p)?;
            let d = diameter(&build_graph(&p));
            out!("diameter: {}", d.value);
            out!("witness: {} {}", d.witness.0, d.witness.1);
            Ok(())
        }
        Command::Graph { p } => {
            let p = load(&p)?;
            let g = build_graph(&p);
            out!("vertices: {}", g.vertex_count());
            out!("edges: {}", g.edge_count());
            for (u, v) in g.edges() {
                out!("{u} {v}");
            }
            Ok(())
        }
        Command::Summand { p, q, tolerance } => {
            let (p, q) = load_pair(&p, &q)?;
            let tol = parse_rational(&tolerance)
                .filter(|t| *t > frac(0, 1))
                .ok_or_else(|| usage(anyhow!("tolerance must be a positive rational")))?;
            let b = max_summand_scale(&p, &q, &tol);
            out!("is-summand: {}", is_summand(&p, &q));
            out!("homothetic-summand: {}", has_homothetic_summand(&p, &q));
            out!(
                "scale-bracket: [{}, {}]{}",
                b.alpha_lo,
                b.alpha_hi,
                if b.certified { "" } else { " (uncertified)" }
            );
            Ok(())
        }
        Command::IsZonotope { p } => {
            let z = is_zonotope(&load(&p)?);
            out!("zonotope: {}", z.is_zonotope);
            out!("generators: {}", z.generators.len());
            for (dir, scale) in &z.generators {
                out!("{} {}", dir.scale(scale), scale);
            }
            Ok(())
        }
        Command::Erode { p, q, out } => {
            let (p, q) = load_pair(&p, &q)?;
            match erosion(&p, &q) {
                Ok(r) => write_output(&out.out, &emit_polytope_file(&r, out.format)),
                Err(MinkowskiError::EmptyErosion) => {
                    Err(Failure::Check(anyhow!("erosion is empty")))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Fans { relation, p, q } => {
            let (p, q) = load_pair(&p, &q)?;
            let r = match relation {
                FanRelation::Equal => fans_equal(&p, &q),
                FanRelation::Refines => fan_refines(&p, &q),
            };
            out!("{r}");
            Ok(())
        }
        Command::Verify(a) => verify(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
