//! geotrans: gluing equations, collapsed solutions and geometric transitions
//! for punctured torus bundles.

mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geotrans::real_variety::{
    follow_from, follow_path, kernel_tangent, log_jacobian, sol_solution, Branch, PathOptions,
    RealSolution, RealSolutionFile,
};
use geotrans::transition::{
    linspace, regenerate_point, tachyon, transition_path, Geometry, RealPoint, SolveOptions,
};
use geotrans::triangulation::{build_triangulation, figure_eight, TriangulationFile};
use geotrans::word::{factor_anosov, parse_matrix, LRWord};

#[derive(Parser)]
#[command(name = "geotrans", version, about = "Geometric transitions on punctured torus bundles")]
struct Cli {
    /// Tolerance for solves and verification (default 1e-10, scaled by GEOTRANS_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Monodromy {
    /// Cyclic word in R and L, e.g. RRLLL.
    #[arg(long)]
    word: Option<String>,
    /// Anosov matrix "a,b,c,d" in SL(2,Z), row-major.
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
}

impl Monodromy {
    fn word(&self) -> anyhow::Result<LRWord> {
        match (&self.word, &self.matrix) {
            (Some(w), _) => Ok(w.parse()?),
            (_, Some(m)) => Ok(factor_anosov(parse_matrix(m)?)?),
            _ => unreachable!("clap enforces one input"),
        }
    }
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct RealInput {
    #[arg(long)]
    word: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Real solution JSON written by `sol` or `path`.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

impl RealInput {
    fn solution(&self, branch: Branch) -> anyhow::Result<RealSolution> {
        if let Some(p) = &self.input {
            let f: RealSolutionFile = output::read_json(p)?;
            return Ok(f.solution()?);
        }
        let m = Monodromy { word: self.word.clone(), matrix: self.matrix.clone() };
        Ok(sol_solution(&m.word()?, branch)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Factor an Anosov matrix as a canonical RL-word.
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Gluing equations and boundary monomials of the monodromy triangulation.
    Triangulate {
        #[command(flatten)]
        input: Monodromy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sol solution on one of the two components.
    Sol {
        #[command(flatten)]
        input: Monodromy,
        #[arg(long, default_value = "plus")]
        branch: Branch,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Follow the real component until H(eps) reaches a target.
    Path {
        #[command(flatten)]
        input: RealInput,
        #[arg(long, default_value = "plus")]
        branch: Branch,
        #[arg(long = "target-h")]
        target_h: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate an H3, AdS or half-pipe structure from a real solution.
    Regenerate {
        #[command(flatten)]
        input: RealInput,
        #[arg(long, default_value = "plus")]
        branch: Branch,
        #[arg(long)]
        geometry: Geometry,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the transition through B_t, k_t^2 = -t|t|, as CSV. Without a
    /// word this runs the figure-eight example with H(l) = e^(-k_t).
    Transition {
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value = "plus")]
        branch: Branch,
        #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// AdS structure whose puncture is a tachyon of the given (negative) mass.
    Tachyon {
        #[command(flatten)]
        input: Monodromy,
        #[arg(long, allow_hyphen_values = true)]
        mass: f64,
        #[arg(long, default_value = "plus")]
        branch: Branch,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-evaluate a JSON file written by any other command.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Triangulation JSON for solutions that do not name a word.
        #[arg(long)]
        triangulation: Option<PathBuf>,
        /// Boundary monomial of the triangulation file used for the completion.
        #[arg(long)]
        boundary: Option<String>,
    },
}

/// Default tolerance times GEOTRANS_TOL, unless overridden on the command line.
fn tolerance(flag: Option<f64>) -> anyhow::Result<f64> {
    let scale = match std::env::var("GEOTRANS_TOL") {
        Ok(s) => s.parse::<f64>().map_err(|_| output::UsageError(format!("GEOTRANS_TOL must be a number, got {s:?}")))?,
        Err(_) => 1.0,
    };
    Ok(flag.unwrap_or(1e-10) * scale)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let tol = tolerance(cli.tol)?;
    let opts = SolveOptions { tol, ..Default::default() };
    match cli.command {
        Command::Factor { matrix } => {
            println!("{}", factor_anosov(parse_matrix(&matrix)?)?);
        }
        Command::Triangulate { input, out } => {
            let t = build_triangulation(&input.word()?);
            output::write_json(out.as_deref(), &TriangulationFile::from_triangulation(&t))?;
        }
        Command::Sol { input, branch, out } => {
            let s = sol_solution(&input.word()?, branch)?;
            output::write_json(out.as_deref(), &s.to_file())?;
        }
        Command::Path { input, branch, target_h, out } => {
            let s = match &input.input {
                Some(_) => follow_from(&input.solution(branch)?, target_h, &PathOptions::default())?.0,
                None => {
                    let m = Monodromy { word: input.word.clone(), matrix: input.matrix.clone() };
                    follow_path(&m.word()?, branch, target_h)?
                }
            };
            output::write_json(out.as_deref(), &s.to_file())?;
        }
        Command::Regenerate { input, branch, geometry, t, out } => {
            let s = input.solution(branch)?;
            let v = kernel_tangent(&log_jacobian(&s.word, &s)?)?;
            let z = regenerate_point(&RealPoint::from_solution(&s, &v), geometry, t, &opts)?;
            let mut f = z.to_file();
            f.word = Some(s.word.to_string());
            f.branch = Some(s.branch);
            output::write_json(out.as_deref(), &f)?;
        }
        Command::Transition { word, branch, t_min, t_max, steps, out } => {
            if steps == 0 || t_min > t_max {
                return Err(output::UsageError("need steps >= 1 and t-min <= t-max".into()).into());
            }
            let ts = linspace(t_min, t_max, steps);
            let result = match word {
                None => {
                    let (sys, b) = figure_eight();
                    let target = |t: f64| geotrans::algebra::exp_imaginary(geotrans::AlgebraTag::transition(t), -1.0);
                    transition_path(&sys, &b["H_l"], &target, &[(-0.6, 0.2), (1.6, 0.2)], &ts, &opts)
                }
                Some(w) => {
                    let w: LRWord = w.parse()?;
                    let s = sol_solution(&w, branch)?;
                    let v = kernel_tangent(&log_jacobian(&w, &s)?)?;
                    let p = RealPoint::from_solution(&s, &v);
                    let seed: Vec<(f64, f64)> = p.z.iter().zip(&p.v).map(|(&a, &b)| (a, b)).collect();
                    let target = |t: f64| p.target(geotrans::AlgebraTag::transition(t), 1.0);
                    transition_path(&p.system, &p.boundary, &target, &seed, &ts, &opts)
                }
            };
            match result {
                Ok(path) => output::write_transition_csv(out.as_deref(), &path)?,
                Err(fail) => {
                    if !fail.partial.samples.is_empty() {
                        output::write_transition_csv(out.as_deref(), &fail.partial)?;
                    }
                    let last = fail.partial.samples.last().map(|s| s.t);
                    return Err(output::TransitionError { t: fail.t, last_good: last, source: fail.error }.into());
                }
            }
        }
        Command::Tachyon { input, mass, branch, out } => {
            let t = tachyon(&input.word()?, branch, mass)?;
            output::write_json(out.as_deref(), &t.to_file())?;
        }
        Command::Verify { input, triangulation, boundary } => {
            let report = verify::verify_file(&input, triangulation.as_deref(), boundary.as_deref(), tol)?;
            output::write_json(None, &report)?;
            if !report.ok {
                return Err(output::VerificationFailed.into());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            output::report_error("usage", &e.to_string());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, detail, status) = output::classify(&e);
            output::report_error(code, &detail);
            ExitCode::from(status)
        }
    }
}
