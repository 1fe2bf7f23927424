//! Command-line front end: tables, trajectories, grids and self-checks.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::ansatz::{compute_qk, compute_yk, AnsatzSpec, Parity};
use crate::dynsys::{integrate, parse_poles, DynState, HeatSystem, MobiusParam, RationalH};
use crate::error::{Error, Result};
use crate::grpoly::{Family, GradedPoly};
use crate::operators::compute_dk;
use crate::output::{emit_csv, emit_float_csv, format_float};
use crate::scalar::{parse_rational, Rational};
use crate::solution::{
    assemble_psi, burgers_residual_numeric, burgers_residual_series, closed_form_0ansatz,
    closed_form_1ansatz, cole_hopf, heat_residual_numeric, heat_residual_series, BurgersProfile,
    GridSpec, HSource, Profile, DEFAULT_ORDER,
};
use crate::verify::{run_suite, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "heat-ansatz",
    version,
    about = "Series and closed-form solutions of the heat and Burgers equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a coefficient table, one polynomial per line
    Phi(PhiArgs),
    /// Print the jet polynomials D_1..D_k
    Dk {
        #[arg(long)]
        k: usize,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Integrate a reduced heat dynamical system from rational initial data
    Trajectory(TrajectoryArgs),
    /// Sample a heat-equation solution on a grid
    Eval(EvalArgs),
    /// Sample the Cole-Hopf image of a solution on a grid
    Burgers {
        #[command(flatten)]
        eval: EvalArgs,
        /// Viscosity in v_t + v v_z = mu v_zz
        #[arg(long, default_value = "1/2", value_parser = rational)]
        mu: Rational,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Operators,
    Ansatz,
    Dynsys,
    Solution,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Operators => Suite::Operators,
            SuiteArg::Ansatz => Suite::Ansatz,
            SuiteArg::Dynsys => Suite::Dynsys,
            SuiteArg::Solution => Suite::Solution,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    General,
    Reduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Table {
    /// n-ansatz coefficients in x_2..x_{n+1}
    Phi,
    /// jet form Y_k(y_1..y_k)
    Y,
    /// remainders Q_k in the D_j symbols
    Q,
}

#[derive(Debug, Args)]
struct PhiArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0, value_parser = parity_value)]
    delta: u8,
    #[arg(long, default_value_t = 6)]
    qmax: usize,
    #[arg(long, value_enum, default_value_t = Mode::Reduced)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Table::Phi)]
    table: Table,
    /// Top polynomial P_n in x_2..x_n
    #[arg(long, default_value = "0")]
    pn: String,
    /// Right-hand sides p_2..p_{n+2} of a general system, in order (repeat the flag)
    #[arg(long = "p")]
    p: Vec<String>,
    /// Emit one JSON object per line instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TrajectoryArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Poles of h(t) as alpha:beta pairs, comma separated
    #[arg(long)]
    poles: String,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    t0: Rational,
    #[arg(long, allow_hyphen_values = true)]
    t1: f64,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Top polynomial P_n in x_2..x_n
    #[arg(long, default_value = "0")]
    pn: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "0ansatz")]
    Zero,
    #[value(name = "1ansatz")]
    One,
    #[value(name = "nansatz")]
    N,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0, value_parser = parity_value)]
    delta: u8,
    /// Pole of the 0-ansatz
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = rational)]
    alpha: Rational,
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = rational)]
    beta: Rational,
    /// Poles for the 1-ansatz and n-ansatz families, alpha:beta pairs, comma separated
    #[arg(long)]
    poles: Option<String>,
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = rational)]
    r0: Rational,
    /// Parameter count of the n-ansatz
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Top polynomial P_n of the n-ansatz
    #[arg(long, default_value = "0")]
    pn: String,
    /// Truncation order of the n-ansatz series
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Sample times, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
    t: Vec<f64>,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    zmin: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    zmax: f64,
    #[arg(long, default_value_t = 81)]
    nz: usize,
    /// Print a residual report as JSON instead of the grid. `grid` uses central
    /// differences on z in [zmin, zmax] and t from the smallest to the largest
    /// --t value; `series` checks the exact coefficients at each --t (n-ansatz only)
    #[arg(long, value_enum)]
    report: Option<ReportMode>,
    /// Finite-difference spacing for `--report grid`
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportMode {
    Grid,
    Series,
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parity_value(s: &str) -> std::result::Result<u8, String> {
    match s {
        "0" => Ok(0),
        "1" => Ok(1),
        _ => Err(format!("delta must be 0 or 1, got {s}")),
    }
}

fn parity(d: u8) -> Parity {
    if d == 1 {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn x_poly(text: &str) -> Result<GradedPoly> {
    GradedPoly::parse(text, Family::X)
}

fn phi_command(a: &PhiArgs, out: &mut dyn Write) -> Result<()> {
    let par = parity(a.delta);
    let lines: Vec<GradedPoly> = match a.table {
        Table::Y => compute_yk(par, a.qmax).entries().to_vec(),
        Table::Q => compute_qk(par, a.qmax),
        Table::Phi => {
            let spec = match a.mode {
                Mode::Reduced => {
                    if !a.p.is_empty() {
                        return Err(Error::Parse("--p applies to --mode general only".into()));
                    }
                    AnsatzSpec::reduced(a.n, par, x_poly(&a.pn)?)?
                }
                Mode::General => {
                    let p = if a.p.is_empty() {
                        // chain form with the given top polynomial
                        let mut p: Vec<GradedPoly> =
                            (2..=a.n + 1).map(|k| GradedPoly::var(Family::X, k)).collect();
                        p.push(x_poly(&a.pn)?);
                        p
                    } else {
                        a.p.iter().map(|s| x_poly(s)).collect::<Result<_>>()?
                    };
                    AnsatzSpec::general(a.n, par, p)?
                }
            };
            spec.phi_table(a.qmax)?.entries().to_vec()
        }
    };
    for p in lines {
        let line = if a.json { p.to_json() } else { p.to_string() };
        writeln!(out, "{line}").map_err(io_error)?;
    }
    Ok(())
}

fn trajectory_command(a: &TrajectoryArgs, out: &mut dyn Write) -> Result<()> {
    let h = RationalH::new(parse_poles(&a.poles)?)?;
    let sys = HeatSystem::reduced(a.n, &x_poly(&a.pn)?)?;
    let x0: Vec<f64> = h
        .chain_state(&a.t0, a.n)?
        .iter()
        .map(crate::scalar::to_f64)
        .collect();
    let t0 = crate::scalar::to_f64(&a.t0);
    let tr = integrate(|x: &[f64]| sys.field(x), &DynState::new(t0, x0), a.t1, a.step)?;
    let mut header = tr.header();
    if header.len() == 1 {
        header.extend((1..=sys.dim()).map(|k| format!("x{k}")));
    }
    write!(out, "{}", emit_float_csv(&header, &tr.rows())?).map_err(io_error)
}

fn grid_rows(profile: &dyn Profile, e: &EvalArgs) -> Result<Vec<Vec<String>>> {
    if e.nz == 0 || e.zmax < e.zmin || !e.zmin.is_finite() || !e.zmax.is_finite() {
        return Err(Error::Parse("bad z range".into()));
    }
    let zs: Vec<f64> = if e.nz == 1 {
        vec![e.zmin]
    } else {
        (0..e.nz)
            .map(|i| e.zmin + (e.zmax - e.zmin) * i as f64 / (e.nz - 1) as f64)
            .collect()
    };
    let mut rows = Vec::with_capacity(zs.len() * e.t.len());
    for &t in &e.t {
        for &z in &zs {
            let v = profile.eval(z, t)?;
            rows.push(vec![format_float(t), format_float(z), format_float(v)]);
        }
    }
    Ok(rows)
}

fn poles_of(e: &EvalArgs, count: Option<usize>) -> Result<Vec<MobiusParam>> {
    let poles = match &e.poles {
        Some(p) => parse_poles(p)?,
        None if count == Some(1) => vec![MobiusParam::new(e.alpha.clone(), e.beta.clone())?],
        None => return Err(Error::Parse("--poles is required for this family".into())),
    };
    if let Some(c) = count {
        if poles.len() != c {
            return Err(Error::Parse(format!("expected {c} poles, got {}", poles.len())));
        }
    }
    Ok(poles)
}

fn nansatz_series(e: &EvalArgs) -> Result<crate::solution::SeriesSolution> {
    let spec = AnsatzSpec::reduced(e.n, parity(e.delta), x_poly(&e.pn)?)?;
    let h = RationalH::new(poles_of(e, None)?)?;
    assemble_psi(&spec, HSource::Rational(h), e.r0.clone(), e.order)
}

fn eval_command(e: &EvalArgs, mu: Option<&Rational>, out: &mut dyn Write) -> Result<()> {
    let par = parity(e.delta);
    let mu_f = mu.map(crate::scalar::to_f64);
    let profile: Box<dyn Profile> = match (e.family, mu_f) {
        (FamilyArg::Zero, None) => {
            let p = poles_of(e, Some(1))?.remove(0);
            Box::new(closed_form_0ansatz(par, p, e.r0.clone()))
        }
        (FamilyArg::Zero, Some(m)) => {
            let p = poles_of(e, Some(1))?.remove(0);
            Box::new(BurgersProfile::new(closed_form_0ansatz(par, p, e.r0.clone()), m)?)
        }
        (FamilyArg::One, None) => {
            let mut p = poles_of(e, Some(2))?;
            let m2 = p.pop().expect("two poles");
            let m1 = p.pop().expect("two poles");
            Box::new(closed_form_1ansatz(par, m1, m2, e.r0.clone()))
        }
        (FamilyArg::One, Some(m)) => {
            let mut p = poles_of(e, Some(2))?;
            let m2 = p.pop().expect("two poles");
            let m1 = p.pop().expect("two poles");
            Box::new(BurgersProfile::new(closed_form_1ansatz(par, m1, m2, e.r0.clone()), m)?)
        }
        (FamilyArg::N, None) => Box::new(nansatz_series(e)?),
        (FamilyArg::N, Some(_)) => {
            let b = cole_hopf(&nansatz_series(e)?)?;
            Box::new(b.with_mu(mu.cloned().expect("mu given"))?)
        }
    };
    let report = match e.report {
        None => {
            let rows = grid_rows(profile.as_ref(), e)?;
            return write!(out, "{}", emit_csv(&["t", "z", "value"], &rows)?).map_err(io_error);
        }
        Some(ReportMode::Grid) => {
            let lo = e.t.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = e.t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let grid = GridSpec::new(e.zmin, e.zmax, e.nz, lo, hi, e.t.len(), e.step, e.step)
                .map_err(|err| Error::Parse(err.to_string()))?;
            let r = match mu_f {
                None => heat_residual_numeric(profile.as_ref(), &grid)?,
                Some(m) => burgers_residual_numeric(profile.as_ref(), &grid, m)?,
            };
            json!({
                "max_residual": r,
                "mode": "grid",
                "grid": {
                    "z_min": grid.z_min, "z_max": grid.z_max, "nz": grid.nz,
                    "t_min": grid.t_min, "t_max": grid.t_max, "nt": grid.nt,
                    "dz": grid.dz, "dt": grid.dt,
                },
            })
        }
        Some(ReportMode::Series) => {
            if e.family != FamilyArg::N {
                return Err(Error::Parse("--report series needs --family nansatz".into()));
            }
            let times: Vec<Rational> = e
                .t
                .iter()
                .map(|&t| Rational::from_float(t).ok_or_else(|| Error::Parse(format!("bad time {t}"))))
                .collect::<Result<_>>()?;
            let s = nansatz_series(e)?;
            let r = match mu {
                None => heat_residual_series(&s, &times)?,
                Some(m) => burgers_residual_series(&cole_hopf(&s)?.with_mu(m.clone())?, &times)?,
            };
            json!({
                "max_residual": crate::scalar::to_f64(&r),
                "exact": r.to_string(),
                "mode": "series",
                "grid": { "t": e.t, "order": e.order },
            })
        }
    };
    writeln!(out, "{report}").map_err(io_error)
}

fn io_error(e: std::io::Error) -> Error {
    Error::Invalid(format!("write failed: {e}"))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Phi(a) => phi_command(&a, out)?,
        Command::Dk { k } => {
            for d in compute_dk(k) {
                writeln!(out, "{d}").map_err(io_error)?;
            }
        }
        Command::Verify { suite } => {
            let checks = run_suite(suite.into());
            for c in &checks {
                writeln!(out, "{c}").map_err(io_error)?;
            }
            if checks.iter().any(|c| !c.passed) {
                return Ok(1);
            }
        }
        Command::Trajectory(a) => trajectory_command(&a, out)?,
        Command::Eval(e) => eval_command(&e, None, out)?,
        Command::Burgers { eval, mu } => eval_command(&eval, Some(&mu), out)?,
    }
    Ok(0)
}

/// Runs the CLI on `args` (program name first); returns the exit code.
/// 0 success, 1 domain error, 2 usage error.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Parse(_) => 2,
                _ => 1,
            }
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run_with(args, &mut out, &mut err);
    let _ = out.flush();
    code
}
