//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the exit code together with the rendered report.

pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::capacity::{self, CapacityOptions, DEFAULT_GP_RESTARTS, DEFAULT_SEED, DEFAULT_TOL};
use crate::channel::{builtin_product_xs, builtin_z0z1, load_channel_file, BlockStateSource, ChannelWithState};
use crate::classical::{classical_opt_success, explicit_z0z1_strategy};
use crate::error::{Error, Result};
use crate::lp::{
    self, build_lp1, build_lp2, build_lp4_z0z1, lp1_to_lp2, paper_certificate_z0z1, parse_assignment, solve_exact,
    verify_certificate, LpStatus,
};
use crate::rational::{parse_rational, Rational};
use crate::scheme::{
    self, materialize_tensor, success_decomposition, success_exact, success_monte_carlo, toy_representative,
    toy_scheme, verify_conditions, AuthScheme, ConditionReport, TOY_STATES,
};
use crate::seq;
use crate::typemap;

pub use report::{fmt_float, Report};

/// Denominator used when rounding a floating strategy to rationals.
pub const STRATEGY_DENOM: u32 = 64;
/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "ns-state", version, about = "Channels with state: capacities, NS coding programs and schemes")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Append wall-clock timings (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Four capacity cells: classical/NS, causal/non-causal.
    Capacity(CapacityArgs),
    /// Exact NS coding programs and the dual certificate.
    #[command(subcommand)]
    Lp(LpCommand),
    /// Exact optimal classical success by encoder enumeration.
    Classical(ClassicalArgs),
    /// Build, verify or simulate the authentication scheme.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Map one sequence onto the fixed type.
    Typemap(TypemapArgs),
    /// The Z0/Z1 separation between NS-assisted causal coding and CSIR.
    Theorem2,
    /// The three-use Y = XS example with correlated states.
    Toy,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Channel file or builtin name.
    #[arg(value_name = "CHANNEL")]
    pub channel_pos: Option<String>,
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_GP_RESTARTS)]
    pub gp_restarts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Use the channel with the state appended to the output.
    #[arg(long)]
    pub csir: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LpForm {
    Lp1,
    Lp2,
}

#[derive(Debug, Subcommand)]
pub enum LpCommand {
    /// Solve LP1 or LP2 exactly.
    Solve {
        #[arg(long)]
        channel: String,
        #[arg(long = "M", alias = "m")]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = LpForm::Lp2)]
        form: LpForm,
        #[arg(long)]
        noncausal: bool,
        #[arg(long)]
        csir: bool,
        /// Write the optimal point as `name = p/q` lines.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Check a dual point for the Z0/Z1 relaxation.
    Certificate {
        #[arg(long, default_value = "z0z1")]
        builtin: String,
        /// `name = p/q` file; defaults to the built-in point.
        #[arg(long)]
        point: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long)]
    pub channel: String,
    #[arg(long = "M", alias = "m")]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub csir: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long)]
    pub channel: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub eps: String,
    /// TOML file with `p_x_given_s = [[...], ...]`; defaults to the rounded
    /// maximizer of the conditional mutual information.
    #[arg(long)]
    pub strategy_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum SchemeCommand {
    /// Parameters μ, M, λ and budgets.
    Build(SchemeArgs),
    /// Materialize the tensor and check every condition.
    Verify(SchemeArgs),
    /// Success probability, exact or sampled.
    Simulate(SchemeArgs),
}

#[derive(Debug, Args)]
pub struct TypemapArgs {
    #[arg(long)]
    pub n: usize,
    /// Comma-separated target distribution, e.g. `3/5,2/5`.
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    pub eps: String,
    /// Symbols as digits (`01101`) or comma-separated.
    #[arg(long)]
    pub seq: String,
}

/// Parses and runs; returns the exit code and the text to print.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .filter(|a| a != "--json" && a != "--timings")
        .collect();
    let mut report = Report::new(echo.join(" "));
    let started = Instant::now();
    match dispatch(&cli.command, &mut report) {
        Ok(()) => {
            if cli.timings {
                report.timing("total", started.elapsed());
            }
            let text = if cli.json {
                report.render_json()
            } else {
                report.render_text()
            };
            (if report.all_passed() { 0 } else { 1 }, text)
        }
        Err(e) => (1, format!("error: {e}\n")),
    }
}

fn dispatch(cmd: &Command, report: &mut Report) -> Result<()> {
    match cmd {
        Command::Capacity(a) => cmd_capacity(a, report),
        Command::Lp(LpCommand::Solve {
            channel,
            m,
            n,
            form,
            noncausal,
            csir,
            export,
        }) => cmd_lp_solve(channel, *m, *n, *form, !*noncausal, *csir, export.as_deref(), report),
        Command::Lp(LpCommand::Certificate { builtin, point }) => cmd_certificate(builtin, point.as_deref(), report),
        Command::Classical(a) => cmd_classical(a, report),
        Command::Scheme(sc) => cmd_scheme(sc, report),
        Command::Typemap(a) => cmd_typemap(a, report),
        Command::Theorem2 => cmd_theorem2(report),
        Command::Toy => cmd_toy(report),
    }
}

/// Builtin name or channel file, with the block state source if any.
pub fn resolve_channel(spec: &str) -> Result<(ChannelWithState, Option<BlockStateSource>)> {
    match spec {
        "z0z1" => Ok((builtin_z0z1(), None)),
        "product-xs" => {
            let (ch, src) = builtin_product_xs();
            Ok((ch, Some(src)))
        }
        path => load_channel_file(Path::new(path)),
    }
}

fn cmd_capacity(a: &CapacityArgs, report: &mut Report) -> Result<()> {
    let spec = a
        .channel
        .as_deref()
        .or(a.channel_pos.as_deref())
        .ok_or_else(|| Error::InvalidArgument("a channel is required".into()))?;
    let (mut ch, _) = resolve_channel(spec)?;
    if a.csir {
        ch = ch.lift_csir();
    }
    report.channel_digest = Some(ch.digest());
    report.seed = Some(a.seed);
    let opts = CapacityOptions {
        tol: a.tol,
        gp_restarts: a.gp_restarts,
        seed: a.seed,
    };
    let t = capacity::capacity_table(&ch, &opts)?;
    let flag = |approx: bool| if approx { " (approximate)" } else { "" };
    report.entry(
        "C classical causal",
        format!("{}{}", fmt_float(t.c_classical_causal), flag(t.flags.classical_causal_approximate)),
    );
    report.entry(
        "C classical non-causal",
        format!("{}{}", fmt_float(t.c_classical_noncausal), flag(t.flags.classical_noncausal_approximate)),
    );
    report.entry("C NS causal", format!("{}{}", fmt_float(t.c_ns_causal), flag(t.flags.ns_causal_approximate)));
    report.entry(
        "C NS non-causal",
        format!("{}{}", fmt_float(t.c_ns_noncausal), flag(t.flags.ns_noncausal_approximate)),
    );
    let mut body = String::new();
    for (s, row) in t.ns_strategy.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&p| fmt_float(p)).collect();
        body.push_str(&format!("s={s}: {}\n", cells.join(" ")));
    }
    report.table("maximizing P(x|s)", body);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_lp_solve(
    channel: &str,
    m: usize,
    n: usize,
    form: LpForm,
    causal: bool,
    csir: bool,
    export: Option<&Path>,
    report: &mut Report,
) -> Result<()> {
    let (mut ch, _) = resolve_channel(channel)?;
    if csir {
        ch = ch.lift_csir();
    }
    report.channel_digest = Some(ch.digest());
    let (program, _) = match form {
        LpForm::Lp1 => build_lp1(&ch, m, n, causal)?,
        LpForm::Lp2 => build_lp2(&ch, m, n, causal)?,
    };
    report.entry("form", if form == LpForm::Lp1 { "LP1" } else { "LP2" });
    report.entry("causal", causal);
    report.entry("variables", program.num_vars());
    report.entry("rows", program.rows().len());
    let sol = solve_exact(&program);
    report.entry("status", format!("{:?}", sol.status).to_lowercase());
    report.entry("pivots", sol.pivots);
    if sol.status == LpStatus::Optimal {
        report.entry("optimum", &sol.value);
        report.float("optimum (float)", sol.value.to_f64());
        report.check("solution satisfies every row", program.violations(&sol.assignment).is_empty());
        if let Some(path) = export {
            std::fs::write(path, program.export_assignment(&sol.assignment))?;
            report.entry("exported", path.display());
        }
    } else {
        report.check("optimal", false);
    }
    Ok(())
}

fn cmd_certificate(builtin: &str, point: Option<&Path>, report: &mut Report) -> Result<()> {
    if builtin != "z0z1" {
        return Err(Error::InvalidArgument(format!("no builtin certificate named {builtin}")));
    }
    let program = build_lp4_z0z1();
    let values = match point {
        Some(p) => parse_assignment(&std::fs::read_to_string(p)?)?,
        None => paper_certificate_z0z1(),
    };
    let check = verify_certificate(&program, &values)?;
    report.channel_digest = Some(builtin_z0z1().digest());
    report.entry("certificate objective", &check.objective);
    report.entry("violated rows", check.violations.len());
    if !check.violations.is_empty() {
        report.table("violations", check.violations.join("\n"));
    }
    report.check("LP4 feasible", check.feasible);
    if point.is_none() {
        report.check("objective = 13/16", check.objective == Rational::new(13, 16));
    }
    Ok(())
}

fn cmd_classical(a: &ClassicalArgs, report: &mut Report) -> Result<()> {
    let (ch, _) = resolve_channel(&a.channel)?;
    report.channel_digest = Some(ch.digest());
    let opt = classical_opt_success(&ch, a.m, a.n, a.csir)?;
    report.entry("csir", a.csir);
    report.entry("optimum", &opt.value);
    report.float("optimum (float)", opt.value.to_f64());
    report.entry("encoders searched", opt.encoders_searched);
    report.entry("profiles kept", opt.profiles_kept);
    report.table("witness encoder", opt.encoder.render());
    let dec: Vec<String> = opt.decoder.iter().map(|w| (w + 1).to_string()).collect();
    report.table("MAP decoder (messages by packed output)", dec.join(" "));
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrategyFile {
    p_x_given_s: Vec<Vec<Rational>>,
}

/// Rational strategy from a file, or the rounded capacity maximizer.
pub fn load_strategy(ch: &ChannelWithState, path: Option<&Path>) -> Result<Vec<Vec<Rational>>> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let parsed: StrategyFile = toml::from_str(&text).map_err(|e| Error::ChannelFile {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            Ok(parsed.p_x_given_s)
        }
        None => {
            let (_, strategy) = capacity::ns_capacity(ch, DEFAULT_TOL)?;
            Ok(scheme::rational_strategy(&strategy, STRATEGY_DENOM))
        }
    }
}

fn add_conditions(report: &mut Report, rep: &ConditionReport) {
    let rows = [
        ("nonnegativity", &rep.nonnegativity),
        ("normalization", &rep.normalization),
        ("C1", &rep.c1),
        ("C2", &rep.c2),
        ("C3", &rep.c3),
        ("remark marginal", &rep.remark),
        ("message marginal 1/M", &rep.message_marginal),
    ];
    for (name, c) in rows {
        report.entry(format!("{name} cells"), c.cells);
        report.entry(format!("{name} violations"), c.violations);
        if !c.examples.is_empty() {
            report.table(format!("{name} violations"), c.examples.join("\n"));
        }
    }
    for (name, c) in rows {
        report.check(name, c.passed());
    }
}

fn cmd_scheme(sc: &SchemeCommand, report: &mut Report) -> Result<()> {
    let a = match sc {
        SchemeCommand::Build(a) | SchemeCommand::Verify(a) | SchemeCommand::Simulate(a) => a,
    };
    let (ch, block) = resolve_channel(&a.channel)?;
    report.channel_digest = Some(ch.digest());
    let eps = parse_rational(&a.eps)?;
    let strategy = load_strategy(&ch, a.strategy_file.as_deref())?;
    let sch = AuthScheme::new(&ch, strategy, eps, a.n)?;
    for (s, row) in sch.p_x_given_s().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        report.entry(format!("P(x|s={s})"), cells.join(" "));
    }
    report.entry("n", sch.n());
    report.entry("eps", sch.eps());
    report.entry("n_sigma", join(sch.n_sigma()));
    report.entry("n_tilde", join(&sch.n_tilde()));
    report.entry("mu", sch.mu());
    report.entry("M", sch.m());
    report.entry("lambda", sch.lambda());
    let mi = capacity::conditional_mi(
        &ch,
        &capacity::InputStrategy::new(
            sch.p_x_given_s().iter().map(|r| r.iter().map(Rational::to_f64).collect()).collect(),
        )?,
    )?;
    let rate = (sch.m().to_string().parse::<f64>().unwrap_or(f64::INFINITY)).log2() / sch.n() as f64;
    report.float("log2(M)/n", rate);
    report.float("I(X;Y|S)", mi);
    match sc {
        SchemeCommand::Build(_) => {}
        SchemeCommand::Verify(_) => {
            let t = materialize_tensor(&sch)?;
            add_conditions(report, &verify_conditions(&t));
        }
        SchemeCommand::Simulate(_) => {
            let source = match block {
                Some(b) => b,
                None => BlockStateSource::iid(&ch, a.n)?,
            };
            match a.mode {
                Mode::Exact => {
                    let d = success_decomposition(&sch, &source)?;
                    report.entry("success", &d.success);
                    report.float("success (float)", d.success.to_f64());
                    report.entry("Pr(F=1)", &d.p_flag);
                    report.entry("Pr(pass | F=1)", &d.p_pass_given_flag);
                    report.entry("lower bound", &d.lower_bound);
                    report.check("success >= lambda Pr(F=1) Pr(pass | F=1)", d.success >= d.lower_bound);
                }
                Mode::Mc => {
                    report.seed = Some(a.seed);
                    let est = success_monte_carlo(&sch, &source, a.samples, a.seed)?;
                    report.entry("samples", est.samples);
                    report.entry("successes", est.successes);
                    report.float("success estimate", est.estimate);
                    report.entry("95% CI", format!("[{}, {}]", fmt_float(est.ci_low), fmt_float(est.ci_high)));
                }
            }
        }
    }
    Ok(())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|p| parse_rational(p.trim()).map_err(Error::from))
        .collect()
}

fn parse_symbols(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("cannot read symbols from {text:?}"));
    if text.contains(',') {
        text.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect()
    } else {
        text.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
    }
}

fn render_mapped(out: &[usize], padding: usize) -> String {
    out.iter()
        .map(|&a| if a == padding { "φ".to_string() } else { a.to_string() })
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_typemap(a: &TypemapArgs, report: &mut Report) -> Result<()> {
    let dist = parse_list(&a.dist)?;
    let eps = parse_rational(&a.eps)?;
    let input = parse_symbols(&a.seq)?;
    if input.len() != a.n {
        return Err(Error::InvalidArgument(format!("sequence has length {}, expected {}", input.len(), a.n)));
    }
    let b = typemap::budgets(a.n, &dist, &eps)?;
    let mapped = typemap::map_with_budgets(&input, &b)?;
    report.entry("budgets", join(b.per_symbol()));
    report.entry("padding budget", b.extra());
    report.entry("input", join(&input).replace(' ', ","));
    report.entry("output", render_mapped(&mapped.output, b.padding()));
    report.entry("flag", u8::from(mapped.flag));
    report.check("flag matches budget predicate", mapped.flag == typemap::flag_predicate(&input, &b));
    Ok(())
}

fn cmd_theorem2(report: &mut Report) -> Result<()> {
    let ch = builtin_z0z1();
    report.channel_digest = Some(ch.digest());
    let seven_eighths = Rational::new(7, 8);
    let bound = Rational::new(13, 16);

    let cert = verify_certificate(&build_lp4_z0z1(), &paper_certificate_z0z1())?;
    report.entry("certificate objective", &cert.objective);
    report.check("certificate LP4 feasible", cert.feasible);
    report.check("certificate objective = 13/16", cert.objective == bound);

    let (lp2, shape) = build_lp2(&ch, 2, 2, true)?;
    let sol = solve_exact(&lp2);
    report.entry("LP2 causal optimum", &sol.value);
    report.check("LP2 optimal", sol.status == LpStatus::Optimal);
    report.check("NS causal <= 13/16", sol.value <= bound);

    // the solved point mapped back to LP1 keeps its value
    let (lp1, _) = build_lp1(&ch, 2, 2, true)?;
    let z = lp::lp2_to_lp1(&shape, &sol.assignment);
    report.check("LP2 optimum is LP1-feasible", lp1.violations(&z).is_empty());
    report.check("LP1 value matches", lp1.objective_value(&z) == sol.value);
    report.check("round trip", lp1_to_lp2(&shape, &z) == sol.assignment);

    let classical = classical_opt_success(&ch, 2, 2, true)?;
    report.entry("classical CSIR optimum", &classical.value);
    report.check("classical CSIR ≥ 7/8", classical.value >= seven_eighths);

    let explicit = explicit_z0z1_strategy()?;
    report.entry("explicit strategy success", &explicit.success);
    report.entry("explicit Pr(ŵ=1|w=1)", &explicit.per_message[0]);
    report.entry("explicit Pr(ŵ=2|w=2)", &explicit.per_message[1]);
    report.check("explicit strategy = 7/8", explicit.success == seven_eighths);
    report.check("strict gap NS causal < classical CSIR", sol.value < classical.value);
    Ok(())
}

fn cmd_toy(report: &mut Report) -> Result<()> {
    let (ch, source) = builtin_product_xs();
    report.channel_digest = Some(ch.digest());
    let t = toy_scheme()?;
    report.entry("M", t.m);
    report.entry("n", t.n);

    // A1-A3: every state sequence copies the cells of its representative
    let mut a_ok = true;
    for s in 0..t.sn() {
        let rep = seq::encode(&toy_representative(&seq::decode(s, 2, 3)), 2);
        for x in 0..t.xn() {
            for wh in 0..t.m {
                for w in 0..t.m {
                    for y in 0..t.yn() {
                        a_ok &= t.get(x, wh, w, s, y) == t.get(x, wh, w, rep, y);
                    }
                }
            }
        }
    }
    report.check("A1-A3", a_ok);

    let quarter = Rational::new(1, 4);
    let mut marginal_ok = true;
    for s in TOY_STATES {
        let si = seq::encode(&s, 2);
        for wh in 0..t.m {
            for w in 0..t.m {
                for y in 0..t.yn() {
                    let total: Rational = (0..t.xn()).map(|x| t.get(x, wh, w, si, y)).sum();
                    marginal_ok &= total == quarter;
                }
            }
        }
    }
    report.check("marginal 1/4", marginal_ok);

    let rep = verify_conditions(&t);
    report.check("valid distribution", rep.nonnegativity.passed() && rep.normalization.passed());
    report.check("C1/C2/C3", rep.c1.passed() && rep.c2.passed() && rep.c3.passed());
    let success = t.success_probability(&ch, &source)?;
    report.entry("success", &success);
    report.check("always decodes", success.is_one());
    Ok(())
}

/// Exact success of a scheme with the i.i.d. state law.
pub fn scheme_success_iid(sch: &AuthScheme) -> Result<Rational> {
    let source = BlockStateSource::iid(sch.channel(), sch.n())?;
    success_exact(sch, &source)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> String {
        let mut argv = vec!["ns-state"];
        argv.extend_from_slice(args);
        let (code, out) = run(argv);
        assert_eq!(code, 0, "{out}");
        out
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["ns-state", "nonsense"]).0, 2);
        assert_eq!(run(["ns-state", "lp", "solve", "--channel", "z0z1"]).0, 2);
    }

    #[test]
    fn module_errors_exit_one() {
        let (code, out) = run(["ns-state", "classical", "--channel", "missing.toml", "--M", "2", "--n", "1"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("error:"));
    }

    #[test]
    fn certificate_report() {
        let out = run_ok(&["lp", "certificate", "--builtin", "z0z1"]);
        assert!(out.contains("certificate objective = 13/16"));
        assert!(out.contains("LP4 feasible: pass"));
    }

    #[test]
    fn toy_report() {
        let out = run_ok(&["toy"]);
        assert!(out.contains("success = 1\n"));
        assert!(out.contains("C1/C2/C3: pass"));
    }

    #[test]
    fn typemap_report() {
        let out = run_ok(&["typemap", "--n", "10", "--dist", "3/5,2/5", "--eps", "1/10", "--seq", "0000000000"]);
        assert!(out.contains("budgets = 5 3\n"));
        assert!(out.contains("flag = 0\n"));
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_ok(&["--json", "typemap", "--n", "4", "--dist", "1/2,1/2", "--eps", "1/4", "--seq", "0110"]);
        let b = run_ok(&["--json", "typemap", "--n", "4", "--dist", "1/2,1/2", "--eps", "1/4", "--seq", "0110"]);
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["results"]["budgets"], "1 1");
    }
}
