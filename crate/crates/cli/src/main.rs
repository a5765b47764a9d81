use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use numerosity::approx::ApproxError;
use numerosity::cointoss::{parse_event, parse_outcomes};
use numerosity::lambda::{
    build_from_description, verify_from_description, Check, DescError, LambdaError, LambdaReport, SpaceDescription,
    Verdict,
};
use numerosity::{CoinError, FieldElement, FieldError, RealSet, RealSetError};

#[derive(Parser)]
#[command(
    name = "numerosity",
    version,
    about = "Exact numerosities, probabilities and finite samples"
)]
struct Cli {
    /// Output format. `json` writes exact rationals as strings.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression in the field Q(a): canonical form, sign, shadow.
    FieldEval { expr: String },
    /// Numerosity of a real-line set and its shadow ratio to a unit.
    RealNum {
        set: String,
        /// Unit for the shadow ratio (a field expression); defaults to num([0,1)) = a.
        #[arg(long, default_value = "a")]
        unit: String,
    },
    /// Lebesgue measure of a real-line set.
    RealMeasure { set: String },
    /// Probability of a coin-toss event.
    CoinProb { event: String },
    /// Conditional probability P(E | F) for a finite set of outcomes F.
    CoinCond {
        event: String,
        /// Finite conditioning set, e.g. "{O(H|T), O(|H)}".
        #[arg(long)]
        given: String,
    },
    /// Build a finite sample for a measure-space description file.
    LambdaBuild {
        description: PathBuf,
        /// Write the JSON report here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-check a sample against a description. SAMPLE is either a report
    /// written by lambda-build or a JSON array of points.
    LambdaVerify { description: PathBuf, sample: PathBuf },
}

#[derive(Clone, Copy)]
enum Category {
    Parse,
    Domain,
    Approximation,
    Verification,
    Io,
}

impl Category {
    fn name(self) -> &'static str {
        match self {
            Category::Parse => "parse-error",
            Category::Domain => "domain-error",
            Category::Approximation => "approximation-failure",
            Category::Verification => "verification-failed",
            Category::Io => "io-error",
        }
    }

    fn code(self) -> u8 {
        match self {
            Category::Parse => 10,
            Category::Domain => 11,
            Category::Approximation => 12,
            Category::Verification => 13,
            Category::Io => 14,
        }
    }
}

struct Failure {
    category: Category,
    message: String,
    /// Output still worth printing (the failing verdict).
    output: Option<Box<Output>>,
}

impl Failure {
    fn new(category: Category, message: impl Display) -> Self {
        Self {
            category,
            message: message.to_string(),
            output: None,
        }
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        let category = match e {
            FieldError::Parse { .. } => Category::Parse,
            FieldError::DivisionByZero => Category::Domain,
        };
        Failure::new(category, e)
    }
}

impl From<RealSetError> for Failure {
    fn from(e: RealSetError) -> Self {
        let category = match e {
            RealSetError::Parse { .. } => Category::Parse,
            _ => Category::Domain,
        };
        Failure::new(category, e)
    }
}

impl From<CoinError> for Failure {
    fn from(e: CoinError) -> Self {
        let category = match e {
            CoinError::Parse { .. } => Category::Parse,
            _ => Category::Domain,
        };
        Failure::new(category, e)
    }
}

impl From<DescError> for Failure {
    fn from(e: DescError) -> Self {
        let category = match &e {
            DescError::Format(_) | DescError::Parse(_) => Category::Parse,
            DescError::Lambda(LambdaError::Approximation(ApproxError::CeilingExceeded { .. })) => {
                Category::Approximation
            }
            DescError::Lambda(_) => Category::Domain,
        };
        Failure::new(category, e)
    }
}

/// Text lines and the equivalent JSON document.
struct Output {
    text: Vec<String>,
    json: Value,
}

type Run = Result<Output, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(Category::Io, format!("{}: {e}", path.display())))
}

fn field_eval(expr: &str) -> Run {
    let x: FieldElement = expr.parse()?;
    let sign = match x.signum() {
        std::cmp::Ordering::Less => "negative",
        std::cmp::Ordering::Equal => "zero",
        std::cmp::Ordering::Greater => "positive",
    };
    let class = if x.is_infinite() {
        "infinite"
    } else if x.is_zero() {
        "zero"
    } else if x.is_infinitesimal() {
        "infinitesimal"
    } else {
        "finite"
    };
    Ok(Output {
        text: vec![
            format!("value: {x}"),
            format!("sign: {sign}"),
            format!("class: {class}"),
            format!("shadow: {}", x.shadow()),
        ],
        json: json!({
            "value": x.to_string(),
            "sign": sign,
            "class": class,
            "shadow": x.shadow().to_string(),
        }),
    })
}

fn real_num(set: &str, unit: &str) -> Run {
    let a: RealSet = set.parse()?;
    let unit: FieldElement = unit.parse()?;
    let ratio = a.shadow_ratio(&unit)?;
    let num = a.numerosity();
    Ok(Output {
        text: vec![
            format!("set: {a}"),
            format!("numerosity: {num}"),
            format!("lebesgue: {}", a.lebesgue()),
            format!("shadow-ratio: {ratio}"),
        ],
        json: json!({
            "set": a.to_string(),
            "numerosity": num.to_string(),
            "lebesgue": a.lebesgue().to_string(),
            "unit": unit.to_string(),
            "shadow_ratio": ratio.to_string(),
        }),
    })
}

fn real_measure(set: &str) -> Run {
    let a: RealSet = set.parse()?;
    Ok(Output {
        text: vec![format!("set: {a}"), format!("lebesgue: {}", a.lebesgue())],
        json: json!({ "set": a.to_string(), "lebesgue": a.lebesgue().to_string() }),
    })
}

fn coin_prob(event: &str) -> Run {
    let e = parse_event(event)?;
    let num = e.numerosity();
    let p = e.probability();
    let in_field = if num.to_string().contains(' ') {
        format!("({num}) / a")
    } else {
        format!("{num} / a")
    };
    Ok(Output {
        text: vec![
            format!("event: {e}"),
            format!("numerosity: {num}"),
            format!("probability: {p} (exact in field: {in_field})"),
            format!("shadow: {}", p.shadow()),
            format!("kolmogorov: {}", e.kolmogorov()),
        ],
        json: json!({
            "event": e.to_string(),
            "numerosity": num.to_string(),
            "probability": p.to_string(),
            "in_field": in_field,
            "shadow": p.shadow().to_string(),
            "kolmogorov": e.kolmogorov().to_string(),
        }),
    })
}

fn coin_cond(event: &str, given: &str) -> Run {
    let e = parse_event(event)?;
    let f = parse_outcomes(given)?;
    let counted = e.conditional(&f)?;
    let in_field = e.conditional_in_field(&f)?;
    let hits = f.iter().filter(|w| e.contains(w)).count();
    Ok(Output {
        text: vec![
            format!("event: {e}"),
            format!("given: {} outcomes, {hits} in the event", f.len()),
            format!("conditional: {counted}"),
            format!("in field: {in_field}"),
        ],
        json: json!({
            "event": e.to_string(),
            "given": f.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "hits": hits,
            "conditional": counted.to_string(),
            "in_field": in_field.to_string(),
        }),
    })
}

fn lambda_build(description: &Path, output: Option<&Path>) -> Run {
    let desc = SpaceDescription::from_json(&read(description)?)?;
    let report = build_from_description(&desc)?;
    let doc = report.to_json();
    if let Some(path) = output {
        fs::write(path, format!("{doc}\n"))
            .map_err(|e| Failure::new(Category::Io, format!("{}: {e}", path.display())))?;
    }
    let mut text = vec![
        format!("universe: {}", report.universe),
        format!("m: {}, k: {}", report.m, report.k),
        format!(
            "positive cells: {}, null cells: {}",
            report.positive_cells.len(),
            report.null_cells.len()
        ),
        format!("alpha: {}, c: {}", report.alpha, report.c_min),
        format!("N: {} (bound {}, minimum {})", report.n, report.n_bound, report.n_min),
        format!("lambda: {} points", report.lambda.len()),
    ];
    for (i, t) in report.sets.iter().enumerate() {
        text.push(format!(
            "A{}: mu = {}, trace = {}, epsilon = {}, eta = {}, theta = {}",
            i + 1,
            t.measure,
            report.verdict.traces[i],
            t.epsilon,
            t.eta,
            t.theta
        ));
    }
    text.extend(verdict_lines(&report.verdict, &report.checks));
    let json = serde_json::from_str(&doc).expect("report is valid JSON");
    let out = Output { text, json };
    if report.all_ok() {
        Ok(out)
    } else {
        Err(Failure {
            category: Category::Verification,
            message: "the constructed sample failed its own checks".into(),
            output: Some(Box::new(out)),
        })
    }
}

fn verdict_lines(v: &Verdict, checks: &[Check]) -> Vec<String> {
    let mark = |ok: bool| if ok { "ok" } else { "FAILED" };
    let mut lines = vec![
        format!("property (1) required points: {}", mark(v.property1)),
        format!("property (2) equal subring traces: {}", mark(v.property2)),
        format!("property (3) ratios within {}: {}", v.tolerance, mark(v.property3)),
    ];
    if !v.missing_points.is_empty() {
        lines.push(format!("missing points: {}", v.missing_points.join(", ")));
    }
    for c in checks.iter().filter(|c| !c.ok) {
        let detail = if c.detail.is_empty() {
            String::new()
        } else {
            format!(" ({})", c.detail)
        };
        lines.push(format!("check failed: {}{detail}", c.name));
    }
    lines
}

fn lambda_verify(description: &Path, sample: &Path) -> Run {
    let desc = SpaceDescription::from_json(&read(description)?)?;
    let src = read(sample)?;
    let value: Value =
        serde_json::from_str(&src).map_err(|e| Failure::new(Category::Parse, format!("{}: {e}", sample.display())))?;
    let (points, recorded) = if value.is_array() {
        let points: Vec<String> = serde_json::from_value(value)
            .map_err(|e| Failure::new(Category::Parse, format!("{}: {e}", sample.display())))?;
        (points, None)
    } else {
        let report = LambdaReport::from_json(&src)
            .map_err(|e| Failure::new(Category::Parse, format!("{}: {e}", sample.display())))?;
        if report.universe != desc.universe.name() {
            return Err(Failure::new(
                Category::Domain,
                format!(
                    "report is for universe {} but the description is {}",
                    report.universe,
                    desc.universe.name()
                ),
            ));
        }
        (report.lambda.clone(), Some(report))
    };
    let (verdict, checks) = verify_from_description(&desc, &points, recorded.as_ref())?;
    let ok = verdict.holds() && checks.iter().all(|c| c.ok);
    let mut text = vec![format!("lambda: {} points", points.len())];
    text.push(format!(
        "traces: {}",
        verdict
            .traces
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    ));
    text.extend(verdict_lines(&verdict, &checks));
    text.push(format!("verdict: {}", if ok { "pass" } else { "fail" }));
    let json = json!({ "ok": ok, "verdict": verdict, "checks": checks });
    let out = Output { text, json };
    if ok {
        Ok(out)
    } else {
        Err(Failure {
            category: Category::Verification,
            message: "sample does not satisfy the required properties".into(),
            output: Some(Box::new(out)),
        })
    }
}

fn emit(out: &Output, format: Format) {
    let mut stdout = io::stdout().lock();
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = match format {
        Format::Text => out.text.iter().try_for_each(|line| writeln!(stdout, "{line}")),
        Format::Json => writeln!(
            stdout,
            "{}",
            serde_json::to_string_pretty(&out.json).expect("serializable")
        ),
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::FieldEval { expr } => field_eval(expr),
        Command::RealNum { set, unit } => real_num(set, unit),
        Command::RealMeasure { set } => real_measure(set),
        Command::CoinProb { event } => coin_prob(event),
        Command::CoinCond { event, given } => coin_cond(event, given),
        Command::LambdaBuild { description, output } => lambda_build(description, output.as_deref()),
        Command::LambdaVerify { description, sample } => lambda_verify(description, sample),
    };
    match result {
        Ok(out) => {
            emit(&out, cli.format);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(out) = &failure.output {
                emit(out, cli.format);
            }
            match cli.format {
                Format::Text => eprintln!("error[{}]: {}", failure.category.name(), failure.message),
                Format::Json => eprintln!(
                    "{}",
                    json!({ "error": { "category": failure.category.name(), "message": failure.message } })
                ),
            }
            ExitCode::from(failure.category.code())
        }
    }
}
