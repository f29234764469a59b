//! Command-line front end: problem ingestion, reports, sweep emission.
//!
//! Exit codes: 0 success, 2 validation failure, 3 zero-error
//! zero-disturbance synthesis requested in the tradeoff regime, 64 usage.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use backaction::bound::{realized_err_dis, tradeoff_bound};
use backaction::divergence::{err_dis_sum, relative_entropy};
use backaction::error::Error;
use backaction::majorization::{majorizes, sort_desc};
use backaction::numerics::{random_unitary, Seed};
use backaction::oracle::{s2_min_numeric, sample_sequential, sweep_qubit};
use backaction::problem::{parse_problem, Problem};
use backaction::quantum::{born_distribution, disturbed_distribution, post_measurement_state};
use backaction::report::{
    canonical_json, sweep_csv, AnalyzeReport, BoundCliReport, BoundSection, BranchReport,
    OracleSection, SampleReport, SynthesizeReport,
};
use backaction::synthesis::{all_sign_strings, mixed_qubit_zezd, verify_conditions, zezd_basis};
use backaction::{Basis, Scenario};

#[derive(Parser)]
#[command(
    name = "backaction",
    version,
    about = "Decide when a projective measurement can be error- and disturbance-free, \
             synthesize the bases that achieve it, and bound the tradeoff otherwise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Ideal distributions, majorization verdict, and the tradeoff bound.
    Analyze {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Also run the numerical oracle with this evaluation budget.
        #[arg(long, requires = "seed")]
        oracle_budget: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Zero-error zero-disturbance measurement bases (majorization regime).
    Synthesize {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Branch bitstring of length d-1, e.g. "010".
        #[arg(long, conflicts_with = "all_branches")]
        signs: Option<String>,
        /// Emit every one of the 2^(d-1) branches.
        #[arg(long)]
        all_branches: bool,
    },
    /// Full bound report, optionally listing every valid partition.
    Bound {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        list_partitions: bool,
    },
    /// Numerical minimization of error + disturbance over candidate bases.
    Oracle {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: u64,
    },
    /// The qubit sigma-z/sigma-x state family: bound and oracle per theta.
    Sweep {
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        theta_start: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta_end: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Finite-shot sequential sampling with the ideal A apparatus.
    Sample {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        shots: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Run the instance-level consistency checks and report pass/fail lines.
    Verify {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        /// Oracle budget for the tradeoff-regime soundness check.
        #[arg(long, default_value_t = 20_000)]
        budget: u64,
        /// Random bases per randomized check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{e}");
                    std::process::exit(64);
                }
            }
        }
    };
    match run(cli.command) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::exit(64);
        }
        Err(CliError::Core(Error::NoZezd(msg))) => {
            eprintln!("error: no zero-error zero-disturbance basis exists: {msg}");
            std::process::exit(3);
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

fn load_problem(path: &PathBuf) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_problem(&text)?)
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn require_json(format: Option<Format>, command: &str) -> Result<(), CliError> {
    if format == Some(Format::Csv) {
        return Err(CliError::Usage(format!(
            "{command} supports only --format json"
        )));
    }
    Ok(())
}

fn verdict_string(s: &Scenario) -> Result<String, CliError> {
    let sp = sort_desc(&s.ideal_p()?);
    let sq = sort_desc(&s.ideal_q()?);
    let p_maj = majorizes(&sp, &sq)?;
    let q_maj = majorizes(&sq, &sp)?;
    Ok(match (p_maj, q_maj) {
        (true, _) => "P>Q".to_string(),
        (false, true) => "Q>P".to_string(),
        (false, false) => "incomparable".to_string(),
    })
}

fn parse_signs(signs: &str, d: usize) -> Result<Vec<bool>, CliError> {
    if signs.len() != d - 1 || signs.chars().any(|c| c != '0' && c != '1') {
        return Err(CliError::Usage(format!(
            "--signs must be a bitstring of length {}, got {signs:?}",
            d - 1
        )));
    }
    Ok(signs.chars().map(|c| c == '1').collect())
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze {
            input,
            output,
            format,
            oracle_budget,
            seed,
        } => {
            require_json(format, "analyze")?;
            let problem = load_problem(&input)?;
            let s = &problem.scenario;
            let p = s.ideal_p()?;
            let q = s.ideal_q()?;
            let report = tradeoff_bound(&p, &q)?;
            let oracle = match oracle_budget {
                Some(budget) => {
                    let seed = seed.expect("clap enforces --seed with --oracle-budget");
                    let r = s2_min_numeric(s, budget, Seed(seed))?;
                    Some(OracleSection::new(&r, budget, seed))
                }
                None => None,
            };
            let out = AnalyzeReport {
                dimension: s.dim(),
                eta: problem.eta,
                p: p.values().to_vec(),
                q: q.values().to_vec(),
                verdict: verdict_string(s)?,
                bound: BoundSection::from_report(&report),
                oracle,
            };
            emit(&output, &canonical_json(&out)?)
        }
        Command::Synthesize {
            input,
            output,
            format,
            signs,
            all_branches,
        } => {
            require_json(format, "synthesize")?;
            let problem = load_problem(&input)?;
            let s = &problem.scenario;
            let d = s.dim();
            let report = if s.state().is_pure() {
                let branch_list = if all_branches {
                    all_sign_strings(d)
                } else {
                    vec![match &signs {
                        Some(text) => parse_signs(text, d)?,
                        None => vec![false; d - 1],
                    }]
                };
                let mut branches = Vec::new();
                for branch in branch_list {
                    branches.push(synthesize_branch(s, &branch)?);
                }
                SynthesizeReport {
                    dimension: d,
                    method: "induction".to_string(),
                    branches,
                }
            } else if d == 2 {
                let basis = mixed_qubit_zezd(s)?;
                let (err, dis) = err_dis_of_basis(s, &basis)?;
                SynthesizeReport {
                    dimension: d,
                    method: "bloch-rotation".to_string(),
                    branches: vec![BranchReport {
                        signs: String::new(),
                        basis: basis_pairs(&basis),
                        unitarity_residual: 0.0,
                        condition_residual_1: 0.0,
                        condition_residual_2: 0.0,
                        err_nats: err,
                        dis_nats: dis,
                    }],
                }
            } else {
                return Err(CliError::Core(Error::Unsupported(
                    "synthesis for mixed states beyond qubits is not defined; \
                     use the depolarized family or a pure state"
                        .into(),
                )));
            };
            emit(&output, &canonical_json(&report)?)
        }
        Command::Bound {
            input,
            output,
            format,
            list_partitions,
        } => {
            require_json(format, "bound")?;
            let problem = load_problem(&input)?;
            let s = &problem.scenario;
            let p = s.ideal_p()?;
            let q = s.ideal_q()?;
            let report = tradeoff_bound(&p, &q)?;
            let out = BoundCliReport {
                dimension: s.dim(),
                p: p.values().to_vec(),
                q: q.values().to_vec(),
                bound: BoundSection::from_report(&report),
                valid_partitions: list_partitions.then(|| {
                    report
                        .valid_partitions
                        .iter()
                        .map(|part| part.cuts().to_vec())
                        .collect()
                }),
            };
            emit(&output, &canonical_json(&out)?)
        }
        Command::Oracle {
            input,
            output,
            format,
            budget,
            seed,
        } => {
            require_json(format, "oracle")?;
            let problem = load_problem(&input)?;
            let r = s2_min_numeric(&problem.scenario, budget, Seed(seed))?;
            let out = OracleSection::new(&r, budget, seed);
            emit(&output, &canonical_json(&out)?)
        }
        Command::Sweep {
            theta_start,
            theta_end,
            steps,
            budget,
            seed,
            output,
            format,
        } => {
            let rows = sweep_qubit(theta_start, theta_end, steps, budget, Seed(seed))?;
            let content = match format.unwrap_or(Format::Csv) {
                Format::Csv => sweep_csv(&rows),
                Format::Json => canonical_json(&rows)?,
            };
            emit(&output, &content)
        }
        Command::Sample {
            input,
            output,
            format,
            shots,
            seed,
        } => {
            let problem = load_problem(&input)?;
            let s = &problem.scenario;
            let (emp_p, emp_qt) = sample_sequential(s, s.basis_a(), shots, Seed(seed))?;
            let content = match format.unwrap_or(Format::Json) {
                Format::Json => canonical_json(&SampleReport::new(shots, seed, &emp_p, &emp_qt))?,
                Format::Csv => {
                    let mut text = String::from("outcome,empirical_p,empirical_q_tilde\n");
                    for (i, (a, b)) in emp_p.values().iter().zip(emp_qt.values()).enumerate() {
                        text.push_str(&format!(
                            "{i},{},{}\n",
                            backaction::report::fmt_f64(*a),
                            backaction::report::fmt_f64(*b)
                        ));
                    }
                    text
                }
            };
            emit(&output, &content)
        }
        Command::Verify {
            input,
            output,
            seed,
            budget,
            samples,
        } => {
            let problem = load_problem(&input)?;
            let (text, all_passed) = run_verify(&problem, Seed(seed), budget, samples)?;
            emit(&output, &text)?;
            if all_passed {
                Ok(())
            } else {
                Err(CliError::Core(Error::Validation(
                    "instance verification failed; see report".into(),
                )))
            }
        }
    }
}

fn basis_pairs(b: &Basis) -> Vec<Vec<[f64; 2]>> {
    b.vectors()
        .iter()
        .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn err_dis_of_basis(s: &Scenario, basis: &Basis) -> Result<(f64, f64), CliError> {
    let p = s.ideal_p()?;
    let q = s.ideal_q()?;
    let pp = born_distribution(s.state(), basis)?;
    let qt = disturbed_distribution(s.state(), basis, s.basis_b())?;
    Ok((relative_entropy(&p, &pp)?, relative_entropy(&q, &qt)?))
}

fn synthesize_branch(s: &Scenario, signs: &[bool]) -> Result<BranchReport, CliError> {
    let basis = zezd_basis(s, signs)?;
    let sp = sort_desc(&s.ideal_p()?);
    let sq = sort_desc(&s.ideal_q()?);
    // Reconstruct the branch unitary's residuals from the basis actually
    // returned: overlaps with the phase-aligned B basis in sorted order.
    let aligned = backaction::quantum::phase_align(s.state(), s.basis_b())?;
    let d = s.dim();
    let u = backaction::numerics::ComplexMatrix::from_fn(d, d, |i, j| {
        backaction::numerics::inner(
            basis.vector(sp.perm()[i]),
            aligned.vector(sq.perm()[j]),
        )
    });
    let (r1, r2) = verify_conditions(&u, &sp, &sq)?;
    let unit = backaction::numerics::unitarity_residual(&u)?;
    let (err, dis) = err_dis_of_basis(s, &basis)?;
    Ok(BranchReport {
        signs: signs.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        basis: basis_pairs(&basis),
        unitarity_residual: unit,
        condition_residual_1: r1,
        condition_residual_2: r2,
        err_nats: err,
        dis_nats: dis,
    })
}

struct VerifyLog {
    lines: Vec<String>,
    all_passed: bool,
}

impl VerifyLog {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            all_passed: true,
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.all_passed &= passed;
        self.lines.push(format!(
            "{} {name}: {detail}",
            if passed { "PASS" } else { "FAIL" }
        ));
    }
}

fn run_verify(
    problem: &Problem,
    seed: Seed,
    budget: u64,
    samples: usize,
) -> Result<(String, bool), CliError> {
    let s = &problem.scenario;
    let d = s.dim();
    let mut log = VerifyLog::new();

    let p = s.ideal_p()?;
    let q = s.ideal_q()?;
    let p_sum: f64 = p.values().iter().sum();
    let q_sum: f64 = q.values().iter().sum();
    log.check(
        "born-normalization",
        (p_sum - 1.0).abs() <= 1e-12 && (q_sum - 1.0).abs() <= 1e-12,
        format!("sums {p_sum:.15} / {q_sum:.15}"),
    );

    // Two routes to the disturbed distribution agree, and the sorted
    // apparatus distribution majorizes the sorted disturbed one.
    let mut worst_route_gap = 0.0f64;
    let mut majorization_ok = true;
    for k in 0..samples {
        let u = random_unitary(d, seed.child(k as u64))?;
        let meas = Basis::new((0..d).map(|c| u.column(c)).collect())?;
        let direct = disturbed_distribution(s.state(), &meas, s.basis_b())?;
        let via_state =
            born_distribution(&post_measurement_state(s.state(), &meas)?, s.basis_b())?;
        for (a, b) in direct.values().iter().zip(via_state.values()) {
            worst_route_gap = worst_route_gap.max((a - b).abs());
        }
        let pp = born_distribution(s.state(), &meas)?;
        majorization_ok &= majorizes(&sort_desc(&pp), &sort_desc(&direct))?;
    }
    log.check(
        "disturbed-two-routes",
        worst_route_gap <= 1e-12,
        format!("max gap {worst_route_gap:.3e} over {samples} random bases"),
    );
    log.check(
        "apparatus-majorizes-disturbed",
        majorization_ok,
        format!("sorted P' > sorted Q-tilde for {samples} random bases"),
    );

    let report = tradeoff_bound(&p, &q)?;
    log.check(
        "bound-consistency",
        report.bound >= 0.0 && (report.zezd_possible == (report.bound == 0.0)),
        format!(
            "bound {:.6e} nats, zezd_possible {}",
            report.bound, report.zezd_possible
        ),
    );
    let mut extreme_gap = 0.0f64;
    for part in &report.coarsest {
        let (pp, qt) = backaction::bound::extreme_point(&report.sorted_p, &report.sorted_q, part)?;
        let lhs = err_dis_sum(
            &backaction::ProbDist::new(report.sorted_p.values().to_vec())?,
            &backaction::ProbDist::new(report.sorted_q.values().to_vec())?,
            &pp,
            &qt,
        )?;
        let cjs = backaction::divergence::js_divergence(
            &backaction::majorization::coarse_grain(&report.sorted_p, part)?,
            &backaction::majorization::coarse_grain(&report.sorted_q, part)?,
        )?;
        extreme_gap = extreme_gap.max((lhs - cjs).abs());
    }
    log.check(
        "extreme-point-identity",
        extreme_gap <= 1e-12,
        format!("max |err+dis - coarse JS| = {extreme_gap:.3e}"),
    );

    if report.zezd_possible {
        if s.state().is_pure() {
            let branches = if d <= 6 {
                all_sign_strings(d)
            } else {
                vec![vec![false; d - 1]]
            };
            let mut worst = 0.0f64;
            for branch in &branches {
                let basis = zezd_basis(s, branch)?;
                let (err, dis) = err_dis_of_basis(s, &basis)?;
                worst = worst.max(err + dis);
            }
            log.check(
                "zezd-branches",
                worst <= 1e-12,
                format!("max err+dis {worst:.3e} over {} branches", branches.len()),
            );
            if problem.eta > 0.0 {
                if let Some(pure) = &problem.pure_scenario {
                    let basis = zezd_basis(pure, &vec![false; d - 1])?;
                    let (err, dis) =
                        backaction::synthesis::depolarized_zezd_check(pure, problem.eta, &basis)?;
                    log.check(
                        "depolarized-robustness",
                        err <= 1e-9 && dis <= 1e-9,
                        format!("eta {}: err {err:.3e}, dis {dis:.3e}", problem.eta),
                    );
                }
            }
        } else if d == 2 {
            let basis = mixed_qubit_zezd(s)?;
            let (err, dis) = err_dis_of_basis(s, &basis)?;
            log.check(
                "mixed-qubit-zezd",
                err <= 1e-9 && dis <= 1e-9,
                format!("err {err:.3e}, dis {dis:.3e}"),
            );
        }
    } else {
        if d <= 6 {
            let oracle = s2_min_numeric(s, budget, seed.child(u64::MAX))?;
            log.check(
                "oracle-soundness",
                oracle.min_value >= report.bound - 1e-9,
                format!(
                    "oracle {:.6e} >= bound {:.6e} - 1e-9",
                    oracle.min_value, report.bound
                ),
            );
        }
        if s.state().is_pure() {
            let (a_basis, b_basis) =
                backaction::bound::realize_s1_point(s, &report.extreme_point, &vec![false; d - 1])?;
            let achieved = realized_err_dis(s, &a_basis, &b_basis)?;
            log.check(
                "extreme-point-realization",
                (achieved - report.bound).abs() <= 1e-6,
                format!("achieved {achieved:.9e} vs bound {:.9e}", report.bound),
            );
        }
    }

    let mut text = log.lines.join("\n");
    text.push('\n');
    text.push_str(if log.all_passed {
        "RESULT: all checks passed\n"
    } else {
        "RESULT: some checks FAILED\n"
    });
    Ok((text, log.all_passed))
}
