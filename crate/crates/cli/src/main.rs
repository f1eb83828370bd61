//! Command-line front end: matrix I/O, subcommand dispatch, deterministic
//! report emission.
//!
//! Exit codes: 0 success; 1 domain/input error; 2 a result carries a
//! failure/budget-exhausted status and --strict was given.

mod io;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gknorms_core::experiments::{
    block_embedding, inequality_suite, ratio_scan, Ensemble, ScanKind,
};
use gknorms_core::fact::{
    cbb_factorization, cbf_vector, duality_witness, fact_split, schur_factorization, DualityPair,
};
use gknorms_core::geometry::{
    alpha_feasibility, decompose_geo, decompose_geo2, v_membership, K_LITTLE,
};
use gknorms_core::haagerup::{
    cbb_bound_chain, eigen_and_determinant_checks, haagerup_construction,
    verify_haagerup_inequalities,
};
use gknorms_core::linalg::min_eigenvalue;
use gknorms_core::norms::{norm, norm_table, NormKind};
use gknorms_core::sdp::{solve_diag_dominance, solve_two_sided_scaling, ScalingMode};
use gknorms_core::torus::max_bilinear_torus;
use gknorms_core::{Budget, BracketStatus, DenseMatrix};

use report::{Report, Value};

#[derive(Parser)]
#[command(
    name = "gknorms",
    version,
    about = "Certified computation of the Grothendieck-family matrix norms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Input matrix file (JSON or CSV, see --format)
    #[arg(long = "in")]
    input: Option<String>,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<String>,
    /// Master seed for all randomized internals
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Feasibility tolerance for decompositions and status checks
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Effort knob: number of multistarts / FW iteration scale
    #[arg(long, default_value_t = 32)]
    budget: u64,
    /// Matrix file format
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Validate inputs and flags without computing
    #[arg(long)]
    dry_run: bool,
    /// Exit 2 when any result has a failed/budget-exhausted status
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a norm bracket (or all ten with --kind all)
    Norm {
        #[command(flatten)]
        common: CommonArgs,
        /// op|hs|F|cbF|B|cbB|S|T|proj_inf_inf|proj_2_inf|all
        #[arg(long, default_value = "all")]
        kind: String,
    },
    /// Extract an optimal factorization
    Factorize {
        #[command(flatten)]
        common: CommonArgs,
        /// cbb|cbf|schur|split|witness_cbb_s|witness_t_cbf
        #[arg(long, default_value = "cbb")]
        kind: String,
    },
    /// Run the optimal-phase construction and its verifications
    Haagerup {
        #[command(flatten)]
        common: CommonArgs,
        /// Monte-Carlo samples for the inequality verifier
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Elliptope decompositions Q = alpha R - P (and variants)
    Decompose {
        #[command(flatten)]
        common: CommonArgs,
        /// geo|geo2|v|alpha
        #[arg(long, default_value = "geo")]
        kind: String,
        #[arg(long, default_value_t = K_LITTLE)]
        alpha: f64,
        /// Recursion depth for geo2 / v
        #[arg(long, default_value_t = 40)]
        depth: usize,
    },
    /// Block embedding of X with cbB = 4 certificates
    Embed {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Constant-ratio scan over a random ensemble
    Scan {
        #[command(flatten)]
        common: CommonArgs,
        /// positive|general|little
        #[arg(long, default_value = "positive")]
        kind: String,
        /// ginibre|gram|nonneg|rank_one
        #[arg(long, default_value = "gram")]
        ensemble: String,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// Run the consolidated inequality suite
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn make_budget(common: &CommonArgs) -> Budget {
    let mut b = Budget::default();
    b.seed = common.seed;
    b.multistarts = common.budget.max(1) as usize;
    b.fw_max_iters = (100 * common.budget.max(1) as usize).max(2000);
    b
}

fn tolerances() -> gknorms_core::Tolerances {
    gknorms_core::Tolerances::default()
}

fn command_echo() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn load(common: &CommonArgs) -> anyhow::Result<DenseMatrix> {
    let path = common
        .input
        .as_deref()
        .ok_or_else(|| anyhow::anyhow!("--in is required for this subcommand"))?;
    io::read_matrix(path, &common.format)
}

fn finish(
    common: &CommonArgs,
    report: Report,
    any_failed_status: bool,
) -> anyhow::Result<ExitCode> {
    let text = report.render();
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    if any_failed_status && common.strict {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn bracket_value(b: &gknorms_core::NormBracket) -> Value {
    Value::object(vec![
        ("lower", Value::F64(b.lower)),
        ("upper", Value::F64(b.upper)),
        ("status", Value::str(status_name(b.status))),
    ])
}

fn status_name(s: BracketStatus) -> &'static str {
    match s {
        BracketStatus::Certified => "certified",
        BracketStatus::Heuristic => "heuristic",
        BracketStatus::BudgetExhausted => "budget_exhausted",
        BracketStatus::Inconsistent => "inconsistent",
    }
}

fn matrix_value(m: &DenseMatrix) -> Value {
    Value::object(vec![
        ("rows", Value::U64(m.rows() as u64)),
        ("cols", Value::U64(m.cols() as u64)),
        (
            "entries",
            Value::Array(
                m.entries()
                    .iter()
                    .map(|z| Value::Array(vec![Value::F64(z.re), Value::F64(z.im)]))
                    .collect(),
            ),
        ),
    ])
}

fn real_vec_value(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| Value::F64(x)).collect())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Norm { common, kind } => cmd_norm(common, kind),
        Command::Factorize { common, kind } => cmd_factorize(common, kind),
        Command::Haagerup { common, samples } => cmd_haagerup(common, samples),
        Command::Decompose {
            common,
            kind,
            alpha,
            depth,
        } => cmd_decompose(common, kind, alpha, depth),
        Command::Embed { common } => cmd_embed(common),
        Command::Scan {
            common,
            kind,
            ensemble,
            rows,
            cols,
            count,
        } => cmd_scan(common, kind, ensemble, rows, cols, count),
        Command::Verify { common } => cmd_verify(common),
    }
}

fn cmd_norm(common: CommonArgs, kind: String) -> anyhow::Result<ExitCode> {
    let x = load(&common)?;
    let kinds: Vec<NormKind> = if kind == "all" {
        NormKind::ALL.to_vec()
    } else {
        vec![NormKind::parse(&kind).map_err(|e| anyhow::anyhow!("{e}"))?]
    };
    let mut report = Report::new("norm", command_echo(), common.seed);
    if common.dry_run {
        report.push("dry_run", Value::Bool(true));
        return finish(&common, report, false);
    }
    let budget = make_budget(&common);
    let tol = tolerances();
    let mut failed = false;
    if kind == "all" {
        for (k, b) in norm_table(&x, &budget, &tol).map_err(|e| anyhow::anyhow!("{e}"))? {
            failed |= matches!(
                b.status,
                BracketStatus::BudgetExhausted | BracketStatus::Inconsistent
            );
            report.push(k.name(), bracket_value(&b));
        }
    } else {
        for k in kinds {
            let b = norm(&x, k, &budget, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
            failed |= matches!(
                b.status,
                BracketStatus::BudgetExhausted | BracketStatus::Inconsistent
            );
            report.push(k.name(), bracket_value(&b));
        }
    }
    finish(&common, report, failed)
}

fn cmd_factorize(common: CommonArgs, kind: String) -> anyhow::Result<ExitCode> {
    let x = load(&common)?;
    let mut report = Report::new("factorize", command_echo(), common.seed);
    if common.dry_run {
        report.push("dry_run", Value::Bool(true));
        return finish(&common, report, false);
    }
    let tol = tolerances();
    match kind.as_str() {
        "cbb" => {
            let f = cbb_factorization(&x, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
            report.push("cbb", Value::F64(f.cbb));
            report.push("eta", real_vec_value(&f.eta));
            report.push("xi", real_vec_value(&f.xi));
            report.push("B", matrix_value(&f.b));
        }
        "cbf" => {
            let (xi, z) = cbf_vector(&x, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
            report.push("xi", real_vec_value(&xi));
            report.push("Z", matrix_value(&z));
            report.push(
                "cbf",
                Value::F64(gknorms_core::linalg::operator_norm(&z)),
            );
        }
        "schur" => {
            let f = schur_factorization(&x, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
            report.push("s_norm", Value::F64(f.s_norm));
            report.push("column_norm_product", Value::F64(f.column_norm_product()));
            report.push("L", matrix_value(&f.l));
            report.push("R", matrix_value(&f.r));
        }
        "split" => {
            let f = fact_split(&x, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
            let residual = f.d.mul(&f.c).sub(&x).hs_norm() / x.hs_norm();
            report.push("residual", Value::F64(residual));
            report.push("C", matrix_value(&f.c));
            report.push("D", matrix_value(&f.d));
            report.push("W", matrix_value(&f.w));
            report.push("P", matrix_value(&f.p));
        }
        "witness_cbb_s" | "witness_t_cbf" => {
            let pair = if kind == "witness_cbb_s" {
                DualityPair::CbbS
            } else {
                DualityPair::TCbf
            };
            let y = duality_witness(&x, pair, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
            report.push("pairing", Value::F64(x.inner_re(&y)));
            report.push("Y", matrix_value(&y));
        }
        other => anyhow::bail!("unknown factorization kind: {other}"),
    }
    finish(&common, report, false)
}

fn cmd_haagerup(common: CommonArgs, samples: usize) -> anyhow::Result<ExitCode> {
    let x = load(&common)?;
    let mut report = Report::new("haagerup", command_echo(), common.seed);
    if common.dry_run {
        report.push("dry_run", Value::Bool(true));
        return finish(&common, report, false);
    }
    let budget = make_budget(&common);
    let tol = tolerances();
    let data = haagerup_construction(&x, &budget, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
    report.push("f_norm", bracket_value(&data.f_norm_bracket));
    report.push("u_phases", real_vec_value(data.u.phases()));
    report.push("lambda", real_vec_value(&data.lambda));
    report.push("xi", real_vec_value(&data.xi));
    report.push(
        "z_operator_norm",
        Value::F64(gknorms_core::linalg::operator_norm(&data.z)),
    );
    let ineq = verify_haagerup_inequalities(&x, &data, samples, common.seed);
    report.push(
        "inequalities",
        Value::object(vec![
            ("skipped", Value::Bool(ineq.skipped)),
            ("samples", Value::U64(ineq.samples as u64)),
            ("violations", Value::U64(ineq.violations as u64)),
            ("max_slack_real", Value::F64(ineq.max_slack_real)),
            ("max_slack_complex", Value::F64(ineq.max_slack_complex)),
        ]),
    );
    let chain = cbb_bound_chain(&x, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
    report.push(
        "cbb_bound_chain",
        Value::object(vec![
            ("trace", Value::F64(chain.trace)),
            ("cbb", Value::F64(chain.cbb)),
            ("middle_sum", Value::F64(chain.middle_sum)),
            ("upper", Value::F64(chain.upper)),
            ("equality", Value::Bool(chain.equality)),
        ]),
    );
    let eig = eigen_and_determinant_checks(&x, &data, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
    report.push(
        "eigen_det",
        Value::object(vec![
            ("eigen_residual", Value::F64(eig.eigen_residual)),
            ("det_f", Value::F64(eig.det_f)),
            ("det_cbb", Value::F64(eig.det_cbb)),
            ("det_scale", Value::F64(eig.det_scale)),
            ("support_degenerate", Value::Bool(eig.support_degenerate)),
        ]),
    );
    let failed = !data.certified();
    finish(&common, report, failed)
}

fn cmd_decompose(
    common: CommonArgs,
    kind: String,
    alpha: f64,
    depth: usize,
) -> anyhow::Result<ExitCode> {
    let x = load(&common)?;
    let mut report = Report::new("decompose", command_echo(), common.seed);
    report.push("alpha", Value::F64(alpha));
    if common.dry_run {
        report.push("dry_run", Value::Bool(true));
        return finish(&common, report, false);
    }
    let budget = make_budget(&common);
    let tol = tolerances();
    let failed;
    match kind.as_str() {
        "geo" => {
            let d = decompose_geo(&x, alpha, &budget, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
            failed = !d.success;
            report.push("success", Value::Bool(d.success));
            report.push("min_eig_achieved", Value::F64(d.min_eig_achieved));
            report.push("atom_count", Value::U64(d.r.atoms.len() as u64));
            report.push("weights", real_vec_value(&d.r.weights));
        }
        "geo2" => {
            let d = decompose_geo2(&x, alpha, depth, &budget, &tol)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            failed = d.failure_depth.is_some();
            report.push("residual", Value::F64(d.residual));
            report.push(
                "failure_depth",
                match d.failure_depth {
                    Some(k) => Value::U64(k as u64),
                    None => Value::Null,
                },
            );
            report.push("plus_atoms", Value::U64(d.r_plus.atoms.len() as u64));
            report.push("minus_atoms", Value::U64(d.r_minus.atoms.len() as u64));
        }
        "v" => {
            // v-membership is scale-free up to the S-norm, so normalize first.
            let s = solve_two_sided_scaling(&x, ScalingMode::Schur, &tol)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .primal_value;
            let xn = x.scale_real(1.0 / s);
            report.push("s_norm", Value::F64(s));
            let v = v_membership(&xn, alpha, depth, &budget, &tol)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            failed = v.residual > common.tol;
            report.push("rho", Value::F64(v.rho));
            report.push("residual", Value::F64(v.residual));
            report.push("atom_count", Value::U64(v.mixture.atoms.len() as u64));
        }
        "alpha" => {
            let r = alpha_feasibility(&x, alpha, true, &budget, &tol)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            failed = !r.feasible;
            report.push("feasible", Value::Bool(r.feasible));
            report.push("min_eig_achieved", Value::F64(r.min_eig_achieved));
            report.push(
                "two_sided_min_eig",
                match r.two_sided_min_eig {
                    Some(v) => Value::F64(v),
                    None => Value::Null,
                },
            );
        }
        other => anyhow::bail!("unknown decomposition kind: {other}"),
    }
    finish(&common, report, failed)
}

fn cmd_embed(common: CommonArgs) -> anyhow::Result<ExitCode> {
    let x = load(&common)?;
    let mut report = Report::new("embed", command_echo(), common.seed);
    if common.dry_run {
        report.push("dry_run", Value::Bool(true));
        return finish(&common, report, false);
    }
    let budget = make_budget(&common);
    let tol = tolerances();
    let emb = block_embedding(&x, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
    let cbb_p = solve_diag_dominance(&emb.p, &tol)
        .map_err(|e| anyhow::anyhow!("{e}"))?
        .primal_value;
    let s_q = solve_two_sided_scaling(&emb.q, ScalingMode::Schur, &tol)
        .map_err(|e| anyhow::anyhow!("{e}"))?
        .primal_value;
    let b_x = max_bilinear_torus(&emb.x, &budget, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
    report.push("cbb_of_P", Value::F64(cbb_p));
    report.push("trace_QP", Value::F64(emb.p.inner_re(&emb.q)));
    report.push("s_norm_of_Q", Value::F64(s_q));
    report.push(
        "min_eig_of_P",
        Value::F64(min_eigenvalue(&emb.p).map_err(|e| anyhow::anyhow!("{e}"))?),
    );
    report.push("b_norm_of_X", bracket_value(&b_x.bracket));
    report.push("gamma", real_vec_value(&emb.gamma));
    report.push("P", matrix_value(&emb.p));
    report.push("Q", matrix_value(&emb.q));
    finish(&common, report, false)
}

fn cmd_scan(
    common: CommonArgs,
    kind: String,
    ensemble: String,
    rows: usize,
    cols: usize,
    count: usize,
) -> anyhow::Result<ExitCode> {
    let mut report = Report::new("scan", command_echo(), common.seed);
    let kind = ScanKind::parse(&kind).map_err(|e| anyhow::anyhow!("{e}"))?;
    let ensemble = Ensemble::parse(&ensemble).map_err(|e| anyhow::anyhow!("{e}"))?;
    report.push("kind", Value::str(kind.name()));
    report.push("ensemble", Value::str(ensemble.name()));
    if common.dry_run {
        report.push("dry_run", Value::Bool(true));
        return finish(&common, report, false);
    }
    let budget = make_budget(&common);
    let tol = tolerances();
    let rep = ratio_scan(kind, ensemble, rows, cols, count, common.seed, &budget, &tol)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    report.push("samples", Value::U64(rep.samples as u64));
    report.push("max_ratio", Value::F64(rep.max_ratio));
    report.push("argmax_index", Value::U64(rep.argmax_index as u64));
    report.push(
        "histogram",
        Value::Array(rep.histogram.iter().map(|&c| Value::U64(c as u64)).collect()),
    );
    finish(&common, report, false)
}

fn cmd_verify(common: CommonArgs) -> anyhow::Result<ExitCode> {
    let mut report = Report::new("verify", command_echo(), common.seed);
    if common.dry_run {
        report.push("dry_run", Value::Bool(true));
        return finish(&common, report, false);
    }
    let budget = make_budget(&common);
    let tol = tolerances();
    let suite = inequality_suite(common.seed, &budget, &tol).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut failed = false;
    let mut items = Vec::new();
    for r in &suite.results {
        failed |= !r.pass;
        items.push(Value::object(vec![
            ("name", Value::String(r.name.clone())),
            ("pass", Value::Bool(r.pass)),
            ("slack", Value::F64(r.slack)),
        ]));
    }
    report.push("results", Value::Array(items));
    report.push("all_pass", Value::Bool(suite.all_pass()));
    finish(&common, report, failed)
}
