use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quasimodular::brackets::{
    family_first, family_second, family_third, rc1_modular_triple, rc_quasimodular,
};
use quasimodular::qseries::evaluate;
use quasimodular::verify::{run_all, run_check, CheckOutcome, Family, Options, CHECKS};
use quasimodular::{parse, parse_scalar, Poly, Scalar};

#[derive(Parser)]
#[command(
    name = "quasimodular",
    version,
    about = "Poisson brackets and Rankin-Cohen deformations on quasimodular forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a bracket {f, g}.
    Bracket {
        /// first, second, third, rc1 or rcn
        family: String,
        f: String,
        g: String,
        #[command(flatten)]
        params: Params,
    },
    /// Run a named check, or `all` for the fixed suite.
    Verify(VerifyArgs),
    /// Print the q-expansion of an expression up to q^order.
    Qexpand { expr: String, order: usize },
}

#[derive(Args)]
struct VerifyArgs {
    check: String,
    #[command(flatten)]
    params: Params,
    /// Family for structural checks: first, second, third, rc1
    #[arg(long)]
    family: Option<String>,
    /// Deformation rule: eholzer, zagier, kappa, cm, mr
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    maxweight: Option<u32>,
    /// Element whose centralizer is computed
    #[arg(long)]
    element: Option<String>,
    /// Invert the expected outcome
    #[arg(long)]
    expect_fail: bool,
    /// Print the JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Params {
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    order: Option<usize>,
}

struct Usage(String);

fn scalar(name: &str, v: &Option<String>) -> Result<Option<Scalar>, Usage> {
    v.as_deref()
        .map(|s| parse_scalar(s).map_err(|e| Usage(format!("--{name} {s:?}: {e}"))))
        .transpose()
}

fn poly(text: &str) -> Result<Poly, Usage> {
    parse(text).map_err(|e| Usage(format!("{text:?}: {e}")))
}

fn one_or(v: Option<Scalar>) -> Scalar {
    v.unwrap_or_else(Scalar::one)
}

fn bracket(family: &str, f: &str, g: &str, p: &Params) -> Result<String, Usage> {
    let (f, g) = (poly(f)?, poly(g)?);
    let value = match family {
        "first" => family_first(&one_or(scalar("lambda", &p.lambda)?)).apply(&f, &g),
        "second" => family_second(&one_or(scalar("alpha", &p.alpha)?)).apply(&f, &g),
        "third" => family_third(&one_or(scalar("mu", &p.mu)?)).apply(&f, &g),
        "rc1" => rc1_modular_triple().apply(&f, &g),
        "rcn" => {
            let n = p.order.ok_or_else(|| Usage("rcn needs --order".into()))?;
            rc_quasimodular(n, &f, &g)
        }
        other => return Err(Usage(format!("unknown family {other:?}"))),
    };
    Ok(value.to_string())
}

fn print_outcome(o: &CheckOutcome, json: bool) {
    if json {
        return;
    }
    let r = &o.report;
    let params: Vec<String> = r
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    println!("{} [{}]", r.check, params.join(" "));
    for l in &o.lines {
        println!("  {l}");
    }
    println!("  status: {}", if o.passed() { "pass" } else { "fail" });
}

fn verify(args: VerifyArgs) -> Result<bool, Usage> {
    let VerifyArgs {
        check,
        params: p,
        family,
        rule,
        maxweight,
        element,
        expect_fail,
        json,
    } = args;
    let check = check.as_str();
    let outcomes = if check == "all" {
        run_all().map_err(|e| Usage(e.to_string()))?
    } else {
        if !CHECKS.contains(&check) {
            return Err(Usage(format!(
                "unknown check {check:?}; expected one of {} or all",
                CHECKS.join(", ")
            )));
        }
        let family = family
            .map(|f| Family::parse(&f).ok_or_else(|| Usage(format!("unknown family {f:?}"))))
            .transpose()?;
        let opts = Options {
            family,
            lambda: scalar("lambda", &p.lambda)?,
            alpha: scalar("alpha", &p.alpha)?,
            mu: scalar("mu", &p.mu)?,
            a: scalar("a", &p.a)?,
            b: scalar("b", &p.b)?,
            order: p.order,
            maxweight,
            rule,
            element: element.as_deref().map(poly).transpose()?,
            expect_fail,
        };
        vec![run_check(check, &opts).map_err(|e| Usage(e.to_string()))?]
    };
    for o in &outcomes {
        print_outcome(o, json);
    }
    if json {
        let reports: Vec<_> = outcomes.iter().map(|o| &o.report).collect();
        let text = if reports.len() == 1 {
            serde_json::to_string_pretty(reports[0])
        } else {
            serde_json::to_string_pretty(&reports)
        };
        println!("{}", text.expect("serializable report"));
    }
    Ok(outcomes.iter().all(CheckOutcome::passed))
}

fn run(cli: Cli) -> Result<bool, Usage> {
    match cli.command {
        Command::Bracket {
            family,
            f,
            g,
            params,
        } => {
            println!("{}", bracket(&family, &f, &g, &params)?);
            Ok(true)
        }
        Command::Verify(args) => verify(args),
        Command::Qexpand { expr, order } => {
            let f = poly(&expr)?;
            let s = evaluate(&f, order, None).map_err(|e| Usage(format!("{expr:?}: {e}")))?;
            println!("{s}");
            Ok(true)
        }
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
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
