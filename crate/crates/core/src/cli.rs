//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on usage or input errors, 1 when a numerical
//! routine fails (non-convergence, quadrature) or output cannot be written.
//! Stochastic commands require `--seed`. Files written with `-o` (and all
//! figure files) are replaced atomically; stochastic ones start with a
//! `# seed=...` comment line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bodies::{
    boundary_mesh, circumradius_bound, direction_net, hausdorff_estimate, write_csv_points, write_obj_points,
    DirectionNet, Operatope,
};
use crate::ensembles::{EnsembleSpec, RngStream};
use crate::error::Error;
use crate::faces::face_at_direction;
use crate::freeprob::{mp_plus_semicircle_support, FreeZonoidSpec, MpSemicircle, SpectralLaw};
use crate::hypersurface::{
    associated_operanoid_support, mean_intersection_count, simulate, zero_chamber_grid, DirectionalLaw,
    HypersurfaceModel,
};
use crate::io::{fmt_float, write_atomic};
use crate::lift::{LiftBase, LiftBody};
use crate::montecarlo::{
    calibrate_planner, convergence_rate_experiment, empirical_operatope, support_mc, OperanoidSampler,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "operanoid", version, about = "Operatopes, operanoids and free zonoids")]
pub struct Cli {
    /// Seed for every stochastic command.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Significant digits in CSV output.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Support function of an operatope file.
    Support {
        #[arg(long)]
        body: PathBuf,
        #[arg(short = 'u', allow_hyphen_values = true, value_parser = parse_list)]
        u: Floats,
    },
    /// Boundary points of an operatope over a direction net.
    Mesh {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 720)]
        net: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// OBJ vertex lines instead of CSV (d = 3).
        #[arg(long)]
        obj: bool,
    },
    /// Hausdorff distance bracket between two operatopes.
    Hausdorff {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long, default_value_t = 720)]
        net: usize,
    },
    /// Random operatopes and their limits.
    #[command(subcommand)]
    Operanoid(OperanoidCmd),
    /// Free zonoids.
    #[command(subcommand)]
    Freezonoid(FreeCmd),
    /// Lift bodies.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Exposed face of an operatope, as JSON.
    Faces {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        xi: Floats,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Poisson hypersurface model.
    #[command(subcommand)]
    Hypersurface(HyperCmd),
    /// Empirical constant for the sample-size planner.
    Calibrate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        entry_bound: f64,
        #[arg(long, value_parser = parse_list)]
        eps: Floats,
        #[arg(long, default_value_t = 720)]
        net: usize,
        #[arg(long, default_value_t = 4096)]
        max_n: usize,
        #[arg(long)]
        normalized: bool,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Data behind figures fig1 to fig5, written to the output directory.
    Figures {
        id: String,
        #[arg(long, default_value_t = 720)]
        net: usize,
    },
}

#[derive(Subcommand, Debug)]
enum OperanoidCmd {
    /// Monte Carlo support value: `value,std_error,N`.
    Support {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(short = 'u', allow_hyphen_values = true, value_parser = parse_list)]
        u: Floats,
        #[arg(short = 'N', default_value_t = 10_000)]
        n: usize,
    },
    /// Hausdorff brackets of `Z_N` against a larger reference: `N,d_lower,d_upper`.
    Rate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_parser = parse_usize_list)]
        ns: Counts,
        #[arg(long, default_value_t = 720)]
        net: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Ensemble spec JSON.
    #[arg(long)]
    spec: PathBuf,
    /// Divide each draw by its matrix size.
    #[arg(long)]
    normalized: bool,
}

#[derive(Subcommand, Debug)]
enum FreeCmd {
    /// Support value of a free zonoid.
    Support {
        /// Comma-separated laws: `semicircle:σ`, `mp:κ[:σ]`, `wishart:κ`, `point:x`.
        #[arg(long, value_parser = parse_laws)]
        law: Option<Laws>,
        /// Free zonoid spec JSON, instead of `--law`.
        #[arg(long, conflicts_with = "law")]
        spec: Option<PathBuf>,
        #[arg(long, value_parser = parse_list)]
        weights: Option<Floats>,
        #[arg(short = 'u', allow_hyphen_values = true, value_parser = parse_list)]
        u: Floats,
    },
    /// Normalized density of `u₁(Y - κ^{-1/2}) + u₂βS` on a grid: `x,rho`.
    Density {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        beta: f64,
        #[arg(short = 'u', allow_hyphen_values = true, value_parser = parse_list)]
        u: Floats,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum LiftCmd {
    /// Lift support value; Monte Carlo bodies also print the standard error.
    Support {
        /// Operatope, ensemble spec or spectral law JSON.
        #[arg(long)]
        body: PathBuf,
        #[arg(short = 'u', allow_hyphen_values = true, value_parser = parse_list)]
        u: Floats,
        /// Keep the raw trace instead of dividing by the matrix size.
        #[arg(long)]
        raw: bool,
        #[arg(short = 'N', default_value_t = 10_000)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum HyperCmd {
    /// `empirical_mean,std_err,operanoid_support,support_std_err`.
    Count {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'v', allow_hyphen_values = true, value_parser = parse_list)]
        v: Floats,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        /// Draws for the trace-norm Monte Carlo (defaults to `reps`).
        #[arg(long)]
        mc: Option<usize>,
    },
    /// Zero-chamber membership grid `x,y,inside` of one realization (d = 2).
    Chamber {
        #[command(flatten)]
        model: ModelArgs,
        /// `xmin,xmax,ymin,ymax`.
        #[arg(long = "box", allow_hyphen_values = true, value_parser = parse_list, default_value = "-1,1,-1,1")]
        bbox: Floats,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    d: usize,
}

// Comma-separated argument lists, wrapped so clap treats each as one value.
#[derive(Clone, Debug)]
struct Floats(Vec<f64>);

#[derive(Clone, Debug)]
struct Counts(Vec<usize>);

#[derive(Clone, Debug)]
struct Laws(Vec<SpectralLaw>);

macro_rules! list_deref {
    ($t:ty, $item:ty) => {
        impl std::ops::Deref for $t {
            type Target = [$item];

            fn deref(&self) -> &[$item] {
                &self.0
            }
        }
    };
}

list_deref!(Floats, f64);
list_deref!(Counts, usize);
list_deref!(Laws, SpectralLaw);

fn parse_list(s: &str) -> Result<Floats, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect::<Result<_, _>>()
        .map(Floats)
}

fn parse_usize_list(s: &str) -> Result<Counts, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("not a count: {t:?}")))
        .collect::<Result<_, _>>()
        .map(Counts)
}

fn parse_law(s: &str) -> Result<SpectralLaw, String> {
    let mut parts = s.split(':');
    let name = parts.next().unwrap_or_default().trim();
    let args: Vec<f64> = parts
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad law parameter in {s:?}")))
        .collect::<Result<_, _>>()?;
    let law = match (name, args.as_slice()) {
        ("semicircle", [sigma]) => SpectralLaw::Semicircle { sigma: *sigma },
        ("mp", [kappa]) => SpectralLaw::MarchenkoPastur { kappa: *kappa, sigma: 1.0 },
        ("mp", [kappa, sigma]) => SpectralLaw::MarchenkoPastur { kappa: *kappa, sigma: *sigma },
        ("wishart", [kappa]) => SpectralLaw::wishart_limit(*kappa, 1.0),
        ("point", [x0]) => SpectralLaw::PointMass { x0: *x0 },
        _ => return Err(format!("unknown law {s:?}")),
    };
    law.validate().map_err(|e| e.to_string())?;
    Ok(law)
}

fn parse_laws(s: &str) -> Result<Laws, String> {
    s.split(',').map(parse_law).collect::<Result<_, _>>().map(Laws)
}

enum Failure {
    Usage(String),
    Op(&'static str, Error),
}

type CmdResult<T> = std::result::Result<T, Failure>;

trait Context<T> {
    fn op(self, name: &'static str) -> CmdResult<T>;
}

impl<T> Context<T> for crate::Result<T> {
    fn op(self, name: &'static str) -> CmdResult<T> {
        self.map_err(|e| Failure::Op(name, e))
    }
}

fn usage<T>(msg: impl Into<String>) -> CmdResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Standard output receives the results; diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("usage error"));
            return 2;
        }
    };
    if let Err(e) = crate::parallel::configure_from_env() {
        eprintln!("error: {e}");
        return 2;
    }
    let mut stdout = String::new();
    let code = match execute(&cli, &mut stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Op(name, e)) => {
            eprintln!("error: {name} failed: {e}");
            if e.is_numerical() || matches!(e, Error::Io(_)) {
                1
            } else {
                2
            }
        }
    };
    print!("{stdout}");
    code
}

struct Ctx<'a> {
    cli: &'a Cli,
    command: &'static str,
}

impl Ctx<'_> {
    fn seed(&self) -> CmdResult<u64> {
        match self.cli.seed {
            Some(s) => Ok(s),
            None => usage(format!("{} is stochastic and needs --seed", self.command)),
        }
    }

    fn fmt(&self, x: f64) -> String {
        fmt_float(x, self.cli.precision)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.cli.output_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    fn header(&self, seed: u64) -> String {
        stochastic_header(seed, self.command)
    }

    /// Writes `body` to `path` when given, otherwise appends it to `stdout`.
    fn emit(&self, path: Option<&Path>, header: Option<&str>, body: &str, stdout: &mut String) -> CmdResult<()> {
        match path {
            Some(p) => write_file(&self.resolve(p), header, body.as_bytes()),
            None => {
                stdout.push_str(body);
                Ok(())
            }
        }
    }
}

fn stochastic_header(seed: u64, command: &str) -> String {
    format!(
        "# seed={seed} streams=chacha8(seed,index) reference_base=2^63 command={command} operanoid={VERSION}\n"
    )
}

fn write_file(path: &Path, header: Option<&str>, body: &[u8]) -> CmdResult<()> {
    write_atomic(path, |w| {
        if let Some(h) = header {
            w.write_all(h.as_bytes())?;
        }
        w.write_all(body)?;
        Ok(())
    })
    .op("write output")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CmdResult<T> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}", path.display())),
    };
    serde_json::from_str(&text).or_else(|e| usage(format!("invalid {}: {e}", path.display())))
}

fn load_net(d: usize, count: usize, seed: Option<u64>) -> CmdResult<DirectionNet> {
    if d > 3 && seed.is_none() {
        return usage("nets in dimension above 3 are random and need --seed");
    }
    direction_net(d, count, seed.unwrap_or(0)).op("direction_net")
}

fn check_dim(what: &str, expected: usize, got: usize) -> CmdResult<()> {
    if expected != got {
        return usage(format!("{what} has {got} entries, expected {expected}"));
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut String) -> CmdResult<()> {
    match &cli.command {
        Command::Support { body, u } => {
            let ctx = Ctx { cli, command: "support" };
            let z: Operatope = read_json(body)?;
            check_dim("-u", z.d(), u.len())?;
            let h = z.support(u).op("support")?;
            writeln!(out, "{}", ctx.fmt(h)).ok();
        }
        Command::Mesh { body, net, output, obj } => {
            let ctx = Ctx { cli, command: "mesh" };
            let z: Operatope = read_json(body)?;
            if *obj && z.d() != 3 {
                return usage("--obj needs a body in dimension 3");
            }
            let net = load_net(z.d(), *net, cli.seed)?;
            let pts = boundary_mesh(&z, &net).op("boundary_mesh")?;
            let mut buf = Vec::new();
            if *obj {
                write_obj_points(&mut buf, &pts, cli.precision).op("mesh")?;
            } else {
                write_csv_points(&mut buf, &pts, cli.precision).op("mesh")?;
            }
            let header = (z.d() > 3).then(|| ctx.header(cli.seed.unwrap_or(0)));
            ctx.emit(output.as_deref(), header.as_deref(), &String::from_utf8_lossy(&buf), out)?;
        }
        Command::Hausdorff { body, other, net } => {
            let ctx = Ctx { cli, command: "hausdorff" };
            let a: Operatope = read_json(body)?;
            let b: Operatope = read_json(other)?;
            check_dim("--other body", a.d(), b.d())?;
            let net = load_net(a.d(), *net, cli.seed)?;
            let ra = circumradius_bound(&a, &net).op("circumradius_bound")?;
            let rb = circumradius_bound(&b, &net).op("circumradius_bound")?;
            let br = hausdorff_estimate(|u| a.support(u), |u| b.support(u), &net, ra, rb).op("hausdorff_estimate")?;
            writeln!(out, "{},{}", ctx.fmt(br.lower), ctx.fmt(br.upper)).ok();
        }
        Command::Operanoid(cmd) => operanoid_cmd(cli, cmd, out)?,
        Command::Freezonoid(cmd) => free_cmd(cli, cmd, out)?,
        Command::Lift(LiftCmd::Support { body, u, raw, n }) => {
            let ctx = Ctx { cli, command: "lift support" };
            let value: serde_json::Value = read_json(body)?;
            let base = if value.get("summands").is_some() {
                let z: Operatope = serde_json::from_value(value).or_else(|e| usage(format!("invalid operatope: {e}")))?;
                LiftBody::from_operatope(&z).op("lift")?.base
            } else if let Ok(spec) = serde_json::from_value::<EnsembleSpec>(value.clone()) {
                if let EnsembleSpec::Deterministic { tuple } = spec {
                    LiftBase::Tuples(vec![tuple])
                } else {
                    let sampler = OperanoidSampler::from_spec(&spec).op("ensemble")?;
                    LiftBase::Sampler { sampler, n: *n, seed: ctx.seed()? }
                }
            } else {
                let law: SpectralLaw =
                    serde_json::from_value(value).or_else(|e| usage(format!("unrecognized lift body: {e}")))?;
                LiftBase::Law(law)
            };
            let mc = matches!(base, LiftBase::Sampler { .. });
            let body = LiftBody::new(base).with_normalize(!raw);
            check_dim("-u", body.ambient_dim(), u.len())?;
            let e = body.support(u).op("lift support")?;
            if mc {
                writeln!(out, "{},{},{}", ctx.fmt(e.value), ctx.fmt(e.std_error), e.n_samples).ok();
            } else {
                writeln!(out, "{}", ctx.fmt(e.value)).ok();
            }
        }
        Command::Faces { body, xi, tol, output } => {
            let ctx = Ctx { cli, command: "faces" };
            let z: Operatope = read_json(body)?;
            check_dim("--xi", z.d(), xi.len())?;
            let fd = face_at_direction(&z, xi, *tol).op("face_at_direction")?;
            #[derive(Serialize)]
            struct FaceJson {
                xi: Vec<f64>,
                translation: Vec<f64>,
                kernel_dims: Vec<usize>,
                face: Operatope,
            }
            let j = FaceJson {
                xi: fd.xi.clone(),
                translation: fd.translation.clone(),
                kernel_dims: fd.summands.iter().map(|s| s.kernel_dim).collect(),
                face: fd.to_operatope().op("faces")?,
            };
            let mut s = serde_json::to_string(&j).map_err(|e| Failure::Op("faces", e.into()))?;
            s.push('\n');
            ctx.emit(output.as_deref(), None, &s, out)?;
        }
        Command::Hypersurface(cmd) => hyper_cmd(cli, cmd, out)?,
        Command::Calibrate { spec, entry_bound, eps, net, max_n, normalized, output } => {
            let ctx = Ctx { cli, command: "calibrate" };
            let seed = ctx.seed()?;
            let spec: EnsembleSpec = read_json(spec)?;
            let sampler = OperanoidSampler::from_spec(&spec).op("ensemble")?.normalized(*normalized);
            let net = load_net(sampler.d(), *net, Some(seed))?;
            let cal = calibrate_planner(&sampler, *entry_bound, eps, &net, *max_n, seed).op("calibrate_planner")?;
            let mut s = String::from("eps,n_needed,c\n");
            for r in &cal.rows {
                let n = r.n_needed.map_or(String::new(), |n| n.to_string());
                let c = r.c.map_or(String::new(), |c| ctx.fmt(c));
                writeln!(s, "{},{n},{c}", ctx.fmt(r.eps)).ok();
            }
            let cp = cal.c_planner.map_or("none".to_string(), |c| ctx.fmt(c));
            writeln!(s, "# c_planner={cp} reference_n={}", cal.reference_n).ok();
            let header = ctx.header(seed);
            ctx.emit(output.as_deref(), Some(&header), &s, out)?;
        }
        Command::Figures { id, net } => {
            let ctx = Ctx { cli, command: "figures" };
            let seed = ctx.seed()?;
            let dir = cli.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
            if let Err(e) = std::fs::create_dir_all(&dir) {
                return Err(Failure::Op("figures", e.into()));
            }
            let files = reproduce_figures(id, *net, seed, &dir, cli.precision).map_err(|e| match e {
                Error::UnknownFigure(_) => Failure::Usage(e.to_string()),
                e => Failure::Op("reproduce_figures", e),
            })?;
            for f in files {
                writeln!(out, "{}", f.display()).ok();
            }
        }
    }
    Ok(())
}

fn operanoid_cmd(cli: &Cli, cmd: &OperanoidCmd, out: &mut String) -> CmdResult<()> {
    match cmd {
        OperanoidCmd::Support { spec, u, n } => {
            let ctx = Ctx { cli, command: "operanoid support" };
            let seed = ctx.seed()?;
            let es: EnsembleSpec = read_json(&spec.spec)?;
            let sampler = OperanoidSampler::from_spec(&es).op("ensemble")?.normalized(spec.normalized);
            check_dim("-u", sampler.d(), u.len())?;
            let e = support_mc(&sampler, u, *n, seed).op("support_mc")?;
            writeln!(out, "{},{},{}", ctx.fmt(e.value), ctx.fmt(e.std_error), e.n_samples).ok();
        }
        OperanoidCmd::Rate { spec, ns, net, output } => {
            let ctx = Ctx { cli, command: "operanoid rate" };
            let seed = ctx.seed()?;
            let es: EnsembleSpec = read_json(&spec.spec)?;
            let sampler = OperanoidSampler::from_spec(&es).op("ensemble")?.normalized(spec.normalized);
            let net = load_net(sampler.d(), *net, Some(seed))?;
            let exp = convergence_rate_experiment(&sampler, ns, &net, seed).op("convergence_rate_experiment")?;
            let mut s = String::from("N,d_lower,d_upper\n");
            for r in &exp.rows {
                writeln!(s, "{},{},{}", r.n, ctx.fmt(r.d_lower), ctx.fmt(r.d_upper)).ok();
            }
            let header = ctx.header(seed);
            ctx.emit(output.as_deref(), Some(&header), &s, out)?;
        }
    }
    Ok(())
}

fn free_cmd(cli: &Cli, cmd: &FreeCmd, out: &mut String) -> CmdResult<()> {
    match cmd {
        FreeCmd::Support { law, spec, weights, u } => {
            let ctx = Ctx { cli, command: "freezonoid support" };
            let mut fz = match (law, spec) {
                (Some(laws), None) => FreeZonoidSpec::new(laws.to_vec()),
                (None, Some(p)) => read_json(p)?,
                _ => return usage("freezonoid support needs --law or --spec"),
            };
            if let Some(w) = weights {
                fz.weights = Some(w.to_vec());
            }
            check_dim("-u", fz.d(), u.len())?;
            let h = fz.support(u).op("free zonoid support")?;
            writeln!(out, "{}", ctx.fmt(h)).ok();
        }
        FreeCmd::Density { kappa, beta, u, grid, output } => {
            let ctx = Ctx { cli, command: "freezonoid density" };
            check_dim("-u", 2, u.len())?;
            if *grid < 2 {
                return usage("--grid must be at least 2");
            }
            let r = u[0].hypot(u[1]);
            if r == 0.0 {
                return usage("-u must be nonzero");
            }
            let dens = MpSemicircle::new(*kappa, *beta, [u[0] / r, u[1] / r]).op("density")?;
            let (lo, hi) = dens.support();
            let mut s = format!("# raw_mass={} kappa={kappa} beta={beta}\nx,rho\n", ctx.fmt(dens.raw_mass()));
            for k in 0..*grid {
                let x = lo + (hi - lo) * k as f64 / (*grid - 1) as f64;
                writeln!(s, "{},{}", ctx.fmt(x), ctx.fmt(dens.density(x))).ok();
            }
            ctx.emit(output.as_deref(), None, &s, out)?;
        }
    }
    Ok(())
}

fn hyper_cmd(cli: &Cli, cmd: &HyperCmd, out: &mut String) -> CmdResult<()> {
    let build = |a: &ModelArgs| HypersurfaceModel::new(a.gamma, a.m, a.d, DirectionalLaw::Uniform).op("hypersurface model");
    match cmd {
        HyperCmd::Count { model, v, reps, mc } => {
            let ctx = Ctx { cli, command: "hypersurface count" };
            let seed = ctx.seed()?;
            let hm = build(model)?;
            check_dim("-v", model.d, v.len())?;
            let c = mean_intersection_count(&hm, v, *reps, seed).op("mean_intersection_count")?;
            let h = associated_operanoid_support(&hm, v, mc.unwrap_or(*reps), seed).op("associated_operanoid_support")?;
            writeln!(out, "{},{},{},{}", ctx.fmt(c.value), ctx.fmt(c.std_error), ctx.fmt(h.value), ctx.fmt(h.std_error))
                .ok();
        }
        HyperCmd::Chamber { model, bbox, grid, output } => {
            let ctx = Ctx { cli, command: "hypersurface chamber" };
            let seed = ctx.seed()?;
            if model.d != 2 {
                return usage("chamber grids are planar; use --d 2");
            }
            check_dim("--box", 4, bbox.len())?;
            let hm = build(model)?;
            let b = [(bbox[0], bbox[1]), (bbox[2], bbox[3])];
            let far = [b[0].0.abs().max(b[0].1.abs()), b[1].0.abs().max(b[1].1.abs())];
            let horizon = crate::hypersurface::required_horizon(&far, model.m).max(f64::MIN_POSITIVE);
            let r = simulate(&hm, horizon, &mut RngStream::new(seed, 0).rng()).op("simulate")?;
            let cells = zero_chamber_grid(&r, b, *grid).op("zero_chamber_grid")?;
            let mut s = String::from("x,y,inside\n");
            for (x, y, inside) in cells {
                writeln!(s, "{},{},{}", ctx.fmt(x), ctx.fmt(y), u8::from(inside)).ok();
            }
            let header = ctx.header(seed);
            ctx.emit(output.as_deref(), Some(&header), &s, out)?;
        }
    }
    Ok(())
}

/// Writes the data for one figure into `dir` and returns the file paths.
///
/// * `fig1`: three one-summand GOE operatopes, `m = 3`, `d = 2`, `σ = 1`.
/// * `fig2`: permutation operatopes (Jordan–Wielandt lifts), `m ∈ {3, 6, 10}`, `N = 150`.
/// * `fig3`: Wishart operatopes, `m = 6`, `κ ∈ {1/2, 1, 2}`, `N = 150`.
/// * `fig4`: one summand at `m = 500` from permutations and from Wishart (`κ = 1`), divided by the matrix size.
/// * `fig5`: the MP ⊞ semicircle free zonoid at `κ = 5`, `β ∈ {0.75, 1, 1.25}`,
///   as `u1,u2,h,x,y` with `(x, y)` the envelope point.
///
/// Operatope figures are boundary meshes over an equally spaced net of `net`
/// directions, one CSV per panel.
pub fn reproduce_figures(id: &str, net: usize, seed: u64, dir: &Path, precision: usize) -> crate::Result<Vec<PathBuf>> {
    let circle = direction_net(2, net, 0)?;
    let header = stochastic_header(seed, &format!("figures {id}"));
    let mesh_file = |name: String, z: &Operatope, label: String| -> crate::Result<PathBuf> {
        let pts = boundary_mesh(z, &circle)?;
        let path = dir.join(name);
        write_atomic(&path, |w| {
            w.write_all(header.as_bytes())?;
            writeln!(w, "# {label}")?;
            write_csv_points(w, &pts, precision)
        })?;
        Ok(path)
    };
    let sampled = |spec: EnsembleSpec, n: usize, normalized: bool| -> crate::Result<Operatope> {
        let s = OperanoidSampler::from_spec(&spec)?.normalized(normalized);
        empirical_operatope(&s, n, seed)
    };
    let mut files = Vec::new();
    match id {
        "fig1" => {
            let s = OperanoidSampler::from_spec(&EnsembleSpec::Goe { m: 3, d: 2, sigma: 1.0 })?;
            for k in 0..3u64 {
                let z = Operatope::from_tuple(s.draw(RngStream::new(seed, k))?);
                files.push(mesh_file(format!("fig1_goe_{k}.csv"), &z, format!("goe m=3 d=2 sigma=1 draw={k}"))?);
            }
        }
        "fig2" => {
            for m in [3, 6, 10] {
                let z = sampled(EnsembleSpec::PermutationJw { m, d: 2 }, 150, false)?;
                files.push(mesh_file(format!("fig2_perm_m{m}.csv"), &z, format!("permutation_jw m={m} d=2 N=150"))?);
            }
        }
        "fig3" => {
            for (tag, kappa) in [("0.5", 0.5), ("1", 1.0), ("2", 2.0)] {
                let z = sampled(EnsembleSpec::Wishart { m: 6, d: 2, kappa, sigma: 1.0 }, 150, false)?;
                let label = format!("wishart m=6 kappa={tag} sigma=1 d=2 N=150");
                files.push(mesh_file(format!("fig3_wishart_kappa{tag}.csv"), &z, label)?);
            }
        }
        "fig4" => {
            let z = sampled(EnsembleSpec::PermutationJw { m: 500, d: 2 }, 1, true)?;
            files.push(mesh_file("fig4_perm.csv".into(), &z, "permutation_jw m=500 d=2 N=1 normalized".into())?);
            let z = sampled(EnsembleSpec::Wishart { m: 500, d: 2, kappa: 1.0, sigma: 1.0 }, 1, true)?;
            files.push(mesh_file("fig4_wishart.csv".into(), &z, "wishart m=500 kappa=1 d=2 N=1 normalized".into())?);
        }
        "fig5" => {
            let dirs = circle.directions();
            let n = dirs.len();
            let dtheta = 2.0 * std::f64::consts::PI / n as f64;
            for (tag, beta) in [("0.75", 0.75), ("1", 1.0), ("1.25", 1.25)] {
                let h = dirs.iter().map(|u| mp_plus_semicircle_support(5.0, beta, u)).collect::<crate::Result<Vec<_>>>()?;
                let path = dir.join(format!("fig5_beta{tag}.csv"));
                write_atomic(&path, |w| {
                    writeln!(w, "# free zonoid mp+semicircle kappa=5 beta={tag} operanoid={VERSION}")?;
                    writeln!(w, "u1,u2,h,x,y")?;
                    for k in 0..n {
                        let u = &dirs[k];
                        let dh = (h[(k + 1) % n] - h[(k + n - 1) % n]) / (2.0 * dtheta);
                        let x = h[k] * u[0] - dh * u[1];
                        let y = h[k] * u[1] + dh * u[0];
                        let f = |v: f64| fmt_float(v, precision);
                        writeln!(w, "{},{},{},{},{}", f(u[0]), f(u[1]), f(h[k]), f(x), f(y))?;
                    }
                    Ok(())
                })?;
                files.push(path);
            }
        }
        other => return Err(Error::UnknownFigure(other.to_string())),
    }
    Ok(files)
}
