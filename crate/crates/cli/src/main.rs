//! `mvfint` command-line front end.
//!
//! Exit codes: 0 success, 1 negative answer (integral fails, array invalid,
//! nothing found), 2 input error, 3 internal contradiction.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mvfint::algebra::parse_rational;
use mvfint::array::{search, synthesize, validate, IntegralArray, SEARCH_LIMIT};
use mvfint::derivative::{derive, verify, CollectedDerivative};
use mvfint::families::{
    extend_case1, extend_case2, log_family, planar_branch, ExtensionParams, LogFamilyParams,
    PlanarBranch, PlanarTheta,
};
use mvfint::monomial::{monomial_integrals, separation_check};
use mvfint::numeric::{drift, rk4};
use mvfint::system::SystemReport;
use mvfint::{Error, Integral, MultinomialSystem, RatVector, Rational, ScalarOde};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "mvfint",
    version,
    about = "First integrals of multinomial ODE systems"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a system, ODE, integral or array file and print its canonical form.
    Parse { file: PathBuf },
    /// Rewrite a scalar ODE as a multinomial system.
    Reduce { ode: PathBuf },
    /// Print the collected derivative of an integral along a system.
    Derive {
        system: PathBuf,
        #[arg(long)]
        integral: PathBuf,
    },
    /// Check that an integral is a first integral of a system.
    Verify {
        system: PathBuf,
        #[arg(long)]
        integral: PathBuf,
    },
    /// List a basis of monomial first integrals.
    Monomials { system: PathBuf },
    /// Test whether `z_i = Y^{H_i}` decouples the system.
    Separate { system: PathBuf },
    /// Check an integral array against the six conditions.
    ValidateArray { system: PathBuf, array: PathBuf },
    /// Build the algebraic integral of a valid array.
    Synthesize { system: PathBuf, array: PathBuf },
    /// Enumerate valid arrays up to the given size.
    Search {
        system: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_p: usize,
        #[arg(long, default_value_t = 3)]
        max_q: usize,
    },
    /// Closed-form parameter families.
    #[command(subcommand)]
    Family(Family),
    /// Scale every exponent of a system (and optionally an integral) by alpha.
    Scale {
        system: PathBuf,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        alpha: Rational,
        #[arg(long)]
        integral: Option<PathBuf>,
    },
    /// Integrate with RK4 and report the drift of an integral.
    Simulate {
        system: PathBuf,
        #[arg(long)]
        integral: PathBuf,
        /// Initial state, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        y0: Vec<f64>,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        t: f64,
    },
    /// Flag ODE terms whose coefficients stay out of integral exponents.
    Independence { ode: PathBuf },
}

#[derive(Args)]
struct ThetaArgs {
    /// c11 c21 c12 c22 h11 h12 h21 h22
    #[arg(long, num_args = 8, value_parser = rational, allow_hyphen_values = true, required = true)]
    theta: Vec<Rational>,
}

#[derive(Args)]
struct ExtendArgs {
    #[command(flatten)]
    theta: ThetaArgs,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    l1: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    l2: Rational,
    /// h31 h32
    #[arg(long, num_args = 2, value_parser = rational, allow_hyphen_values = true, required = true)]
    h3: Vec<Rational>,
}

#[derive(Subcommand)]
enum Family {
    /// Two-term planar system and its branch.
    Planar(ThetaArgs),
    /// Third term with l1 * l2 != 0.
    Extend1(ExtendArgs),
    /// Third term with l1 = 0.
    Extend2(ExtendArgs),
    /// Second-order logarithmic family.
    Log {
        #[arg(long)]
        q: usize,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        h21: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        h32: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        c22: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        c23: Rational,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational (expected e.g. -16/3)"))
}

/// What a command produced: exit code plus the text and JSON renderings.
struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            code: 0,
            text,
            json,
        }
    }

    fn negative(text: String, json: Value) -> Self {
        Outcome {
            code: 1,
            text,
            json,
        }
    }

    fn verdict(positive: bool, text: String, json: Value) -> Self {
        Outcome {
            code: if positive { 0 } else { 1 },
            text,
            json,
        }
    }
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(..) => 2,
            Failure::Core(e) => match e {
                Error::AbnormalArray { .. }
                | Error::Disconnected { .. }
                | Error::ArrayRejected(_) => 1,
                Error::Contradiction(_) => 3,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(path, e) => format!("cannot read {}: {e}", path.display()),
            Failure::Core(e) => e.to_string(),
        }
    }
}

type Run = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn with_file<T>(path: &Path, r: mvfint::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Syntax { .. } => Failure::Core(Error::Invalid(format!("{}: {e}", path.display()))),
        other => Failure::Core(other),
    })
}

fn load_system(path: &Path) -> Result<SystemReport, Failure> {
    with_file(path, MultinomialSystem::parse(&read(path)?))
}

fn load_integral(path: &Path) -> Result<Integral, Failure> {
    with_file(path, Integral::parse(&read(path)?))
}

fn load_array(path: &Path) -> Result<IntegralArray, Failure> {
    with_file(path, IntegralArray::parse(&read(path)?))
}

fn load_ode(path: &Path) -> Result<ScalarOde, Failure> {
    with_file(path, ScalarOde::parse(&read(path)?))
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn derivative_text(d: &CollectedDerivative) -> String {
    if d.is_empty() {
        return "0\n".into();
    }
    d.rows
        .iter()
        .map(|r| format!("{} | {}\n", r.coeff, r.expo))
        .collect()
}

fn merge_notes(report: &SystemReport) {
    for m in &report.merges {
        let inputs: Vec<String> = m.inputs.iter().map(|i| (i + 1).to_string()).collect();
        eprintln!(
            "note: terms {} share exponent ({}) and were merged{}",
            inputs.join(", "),
            m.expo,
            if m.dropped {
                "; their coefficients cancel, term dropped"
            } else {
                ""
            }
        );
    }
}

fn header_keyword(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(';'))
        .find_map(|s| s.split_whitespace().next())
}

fn cmd_parse(file: &Path) -> Run {
    let text = read(file)?;
    match header_keyword(&text) {
        Some("mvf") => {
            let report = with_file(file, MultinomialSystem::parse(&text))?;
            merge_notes(&report);
            Ok(Outcome::ok(
                report.system.to_string(),
                json!({"kind": "system", "system": value(&report.system), "merges": value(&report.merges)}),
            ))
        }
        Some("ode") => {
            let ode = with_file(file, ScalarOde::parse(&text))?;
            Ok(Outcome::ok(
                ode.to_string(),
                json!({"kind": "ode", "ode": value(&ode)}),
            ))
        }
        Some("integral") => {
            let i = with_file(file, Integral::parse(&text))?;
            Ok(Outcome::ok(
                i.to_string(),
                json!({"kind": "integral", "integral": value(&i)}),
            ))
        }
        Some("array") => {
            let a = with_file(file, IntegralArray::parse(&text))?;
            Ok(Outcome::ok(
                a.to_string(),
                json!({"kind": "array", "array": array_json(&a)}),
            ))
        }
        other => Err(Failure::Core(Error::Invalid(format!(
            "{}: unknown file kind {:?}, expected mvf, ode, integral or array",
            file.display(),
            other.unwrap_or("")
        )))),
    }
}

fn array_json(a: &IntegralArray) -> Value {
    let rows: Vec<Vec<Value>> = a
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| c.map_or(Value::Null, |x| json!(x + 1)))
                .collect()
        })
        .collect();
    json!({"p": a.p(), "q": a.q(), "rows": rows})
}

fn cmd_verify(system: &Path, integral: &Path, only_derive: bool) -> Run {
    let s = load_system(system)?.system;
    let i = load_integral(integral)?;
    if only_derive {
        let d = derive(&i, &s)?;
        return Ok(Outcome::ok(derivative_text(&d), value(&d)));
    }
    let v = verify(&i, &s)?;
    let mut text = String::from(if v.holds {
        "holds\n"
    } else {
        "fails\nresidual:\n"
    });
    if !v.holds {
        text.push_str(&derivative_text(&v.residual));
    }
    Ok(Outcome::verdict(v.holds, text, value(&v)))
}

fn cmd_monomials(system: &Path) -> Run {
    let s = load_system(system)?.system;
    let list = monomial_integrals(&s);
    let text = if list.is_empty() {
        "# no monomial integrals\n".to_string()
    } else {
        list.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n")
    };
    Ok(Outcome::verdict(
        !list.is_empty(),
        text,
        json!({"count": list.len(), "integrals": value(&list)}),
    ))
}

fn cmd_separate(system: &Path) -> Run {
    let s = load_system(system)?.system;
    match separation_check(&s) {
        Some(sep) => {
            let mut text = String::new();
            for (i, (h, d)) in sep.substitutions.iter().zip(&sep.diagonal).enumerate() {
                let _ = writeln!(text, "z{} = Y^({h})  z{}' = {d} z{}^2", i + 1, i + 1, i + 1);
            }
            Ok(Outcome::ok(
                text,
                json!({"separable": true, "result": value(&sep)}),
            ))
        }
        None => Ok(Outcome::negative(
            "not separable\n".into(),
            json!({"separable": false}),
        )),
    }
}

fn cmd_validate(system: &Path, array: &Path) -> Run {
    let s = load_system(system)?.system;
    let a = load_array(array)?;
    let report = validate(&a, &s)?;
    Ok(Outcome::verdict(
        report.passes(),
        report.to_string(),
        value(&report),
    ))
}

fn cmd_synthesize(system: &Path, array: &Path) -> Run {
    let s = load_system(system)?.system;
    let a = load_array(array)?;
    let syn = synthesize(&a, &s)?;
    let mut text = syn.integral.to_string();
    for (i, e) in syn.row_exponents.iter().enumerate() {
        let _ = writeln!(text, "# E{} = {e}", i + 1);
    }
    Ok(Outcome::ok(text, value(&syn)))
}

fn cmd_search(system: &Path, max_p: usize, max_q: usize) -> Run {
    let s = load_system(system)?.system;
    if max_p > SEARCH_LIMIT || max_q > SEARCH_LIMIT {
        return Err(Error::Limit(format!("bounds above {SEARCH_LIMIT} are not supported")).into());
    }
    let hits = search(&s, max_p, max_q)?;
    let mut text = format!("# {} array(s) up to {max_p}x{max_q}\n", hits.len());
    for hit in &hits {
        text.push('\n');
        text.push_str(&hit.array.to_string());
        text.push_str(&hit.synthesis.integral.to_string());
    }
    let list: Vec<Value> = hits
        .iter()
        .map(|h| json!({"array": array_json(&h.array), "synthesis": value(&h.synthesis)}))
        .collect();
    Ok(Outcome::verdict(
        !hits.is_empty(),
        text,
        json!({"count": hits.len(), "hits": list}),
    ))
}

fn theta(args: &ThetaArgs) -> Result<PlanarTheta, Failure> {
    Ok(PlanarTheta::from_slice(&args.theta)?)
}

fn family_output(
    branch: &str,
    system: &MultinomialSystem,
    integral: Option<String>,
    extra: Value,
) -> Outcome {
    let mut text = format!("# branch: {branch}\n{system}");
    if let Some(i) = &integral {
        text.push('\n');
        text.push_str(i);
    }
    let json = json!({"branch": branch, "system": value(system), "details": extra});
    if integral.is_some() {
        Outcome::ok(text, json)
    } else {
        Outcome::negative(text, json)
    }
}

fn cmd_family(f: &Family) -> Run {
    match f {
        Family::Planar(args) => {
            let t = theta(args)?;
            let branch = planar_branch(&t)?;
            let system = t.system()?;
            let integral = match &branch {
                PlanarBranch::Algebraic { integral } => Some(integral.to_string()),
                PlanarBranch::LogStar { integral } | PlanarBranch::LogStarStar { integral } => {
                    Some(integral.to_string())
                }
                PlanarBranch::Monomial { exponents } => Some(
                    exponents
                        .iter()
                        .map(|b| format!("integral algebraic\nterm 1 | {b}\n"))
                        .collect::<Vec<_>>()
                        .join("\n"),
                ),
                PlanarBranch::Degenerate { .. } => None,
            };
            let mut extra = value(&branch);
            extra["d"] = json!(t.d().to_string());
            extra["a1"] = json!(t.a1().to_string());
            extra["a2"] = json!(t.a2().to_string());
            Ok(family_output(branch.name(), &system, integral, extra))
        }
        Family::Extend1(args) | Family::Extend2(args) => {
            let params = ExtensionParams {
                base: theta(&args.theta)?,
                l1: args.l1.clone(),
                l2: args.l2.clone(),
                h3: RatVector::new(args.h3.clone()),
            };
            let (name, ext) = if matches!(f, Family::Extend1(_)) {
                ("extension case 1", extend_case1(&params)?)
            } else {
                ("extension case 2", extend_case2(&params)?)
            };
            let mut integral = ext.integral.to_string();
            if let Some(det) = &ext.determinant {
                let _ = writeln!(integral, "# coupling determinant = {det}");
            }
            Ok(family_output(
                name,
                &ext.system,
                Some(integral),
                value(&ext),
            ))
        }
        Family::Log {
            q,
            h21,
            h32,
            c22,
            c23,
        } => {
            let fam = log_family(&LogFamilyParams {
                q: *q,
                h21: h21.clone(),
                h32: h32.clone(),
                c22: c22.clone(),
                c23: c23.clone(),
            })?;
            let mut text = format!(
                "# branch: logarithmic\n# alpha = {}, beta = {}\n{}\n",
                fam.alpha, fam.beta, fam.ode
            );
            text.push_str(&fam.system.to_string());
            text.push('\n');
            text.push_str(&fam.integral.to_string());
            Ok(Outcome::ok(text, value(&fam)))
        }
    }
}

fn cmd_scale(system: &Path, alpha: &Rational, integral: Option<&Path>) -> Run {
    let s = load_system(system)?.system;
    let scaled = s.sigma_alpha(alpha)?;
    let mut text = scaled.to_string();
    let mut json = json!({"system": value(&scaled)});
    if let Some(path) = integral {
        let i = load_integral(path)?.scale_exponents(alpha)?;
        text.push('\n');
        text.push_str(&i.to_string());
        json["integral"] = value(&i);
    }
    Ok(Outcome::ok(text, json))
}

fn cmd_simulate(system: &Path, integral: &Path, y0: &[f64], h: f64, t: f64) -> Run {
    let s = load_system(system)?.system;
    let i = load_integral(integral)?;
    let tr = rk4(&s, y0, h, t)?;
    let rep = drift(&i, &tr)?;
    let final_state: Vec<String> = tr
        .states
        .last()
        .map_or(vec![], |y| y.iter().map(|v| format!("{v:.16e}")).collect());
    let text = format!(
        "steps: {}\nstep: {:.16e}\nhorizon: {:.16e}\ninitial: {:.16e}\nmax_drift: {:.16e}\nfinal_state: {}\n",
        tr.states.len() - 1,
        rep.step,
        rep.horizon,
        rep.initial,
        rep.max_drift,
        final_state.join(", ")
    );
    Ok(Outcome::ok(
        text,
        json!({"steps": tr.states.len() - 1, "report": value(&rep)}),
    ))
}

fn cmd_independence(ode: &Path) -> Run {
    let o = load_ode(ode)?;
    let flags = o.exponent_independence();
    let mut text = String::new();
    for (t, ok) in o.terms().iter().zip(&flags) {
        let _ = writeln!(
            text,
            "term {} | {}  {}",
            t.l,
            t.m,
            if *ok {
                "independent"
            } else {
                "enters exponents"
            }
        );
    }
    let rows: Vec<Value> = o
        .terms()
        .iter()
        .zip(&flags)
        .map(|(t, ok)| json!({"term": value(t), "independent": ok}))
        .collect();
    Ok(Outcome::ok(text, Value::Array(rows)))
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Parse { file } => cmd_parse(file),
        Command::Reduce { ode } => {
            let s = load_ode(ode)?.reduce()?;
            Ok(Outcome::ok(s.to_string(), value(&s)))
        }
        Command::Derive { system, integral } => cmd_verify(system, integral, true),
        Command::Verify { system, integral } => cmd_verify(system, integral, false),
        Command::Monomials { system } => cmd_monomials(system),
        Command::Separate { system } => cmd_separate(system),
        Command::ValidateArray { system, array } => cmd_validate(system, array),
        Command::Synthesize { system, array } => cmd_synthesize(system, array),
        Command::Search {
            system,
            max_p,
            max_q,
        } => cmd_search(system, *max_p, *max_q),
        Command::Family(f) => cmd_family(f),
        Command::Scale {
            system,
            alpha,
            integral,
        } => cmd_scale(system, alpha, integral.as_deref()),
        Command::Simulate {
            system,
            integral,
            y0,
            h,
            t,
        } => cmd_simulate(system, integral, y0, *h, *t),
        Command::Independence { ode } => cmd_independence(ode),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({"error": f.message(), "exit": f.code()}));
            }
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
