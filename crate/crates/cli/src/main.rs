//! `topograph`: continued fractions, Conway topographs, and growth rates of
//! integer binary quadratic forms, all in exact arithmetic.
//!
//! Exit codes: 0 on success, 2 when an input fails to parse (including bad
//! command lines), 3 when a well-formed input is outside an operation's
//! domain (a river of a definite form, a growth path to a negative target).
//! Any positional input may be `-`, which takes the next nonempty line of
//! standard input instead.

use std::fmt::Write as _;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use topograph::biglog;
use topograph::{
    find_lakes, find_river, lambda_for_form, lambda_monoid_exact, parse_value, sketch, to_dot,
    to_svg, ContinuedFraction, Error as CoreError, FormGrowth, GrowthSeries, GrowthStep,
    LakeDescription, Mat2, MonoidSeries, PathSpec, QuadraticForm, QuadraticIrrational,
    RiverDescription, SketchNode, TopographSketch, TurnWord,
};

#[derive(Parser)]
#[command(
    name = "topograph",
    version,
    about = "Exact continued fractions, Conway topographs, and value growth of binary quadratic forms"
)]
struct Cli {
    /// Output format; dot and svg apply to `form render` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Decimal digits for printed logarithms and ratios.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=40))]
    precision: u32,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued fractions of exact rational and quadratic values.
    #[command(subcommand)]
    Cf(CfCmd),
    /// Classification, roots, rivers, lakes, and pictures of forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// Growth of matrix products and form values along topograph paths.
    #[command(subcommand)]
    Lyapunov(LyCmd),
}

#[derive(Subcommand)]
enum CfCmd {
    /// Expand a value such as "(6+sqrt(2))/17" into its digits.
    Expand {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Evaluate a digit string such as "[0,2,3;(2)]" back to a value.
    Value {
        #[arg(allow_hyphen_values = true)]
        cf: String,
    },
    /// Digits of the algebraic conjugate.
    Conjugate {
        #[arg(allow_hyphen_values = true)]
        cf: String,
    },
    /// Digits of the negated value.
    Negate {
        #[arg(allow_hyphen_values = true)]
        cf: String,
    },
    /// Whether the value is reduced: above 1 with conjugate in (-1,0).
    Galois {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
}

#[derive(Subcommand)]
enum FormCmd {
    /// Sign class and discriminant.
    Classify {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Values at the root superbase: (Q(1,0), Q(0,1), Q(1,1)).
    Values {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Roots of Q(x,1) = 0, dominant first.
    Roots {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Whether the root triple satisfies the reduced-root criterion.
    Galois {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Periodic line separating positive from negative values.
    River {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Zero regions of an isotropic form and the shore path between them.
    Lakes {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Draw the topograph near the root edge (dot, svg, or json).
    Render {
        #[arg(allow_hyphen_values = true)]
        form: String,
        /// Levels of the edge tree on each side of the root.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum LyCmd {
    /// Value growth of a form along the path toward a target.
    Form {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Farey-weight growth of the path matrices alone.
    Monoid {
        #[arg(allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// ln|Q_n| / ln(w_n^2) at the last step; tends to 1 off rivers.
    Ratio {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Closed-form rate of a periodic path: Lambda = ln(rho)/m.
    Exact { target: String },
}

/// Failures split by exit code; core parse errors stay parse failures.
enum Failure {
    Parse(String),
    Domain(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(_) => Failure::Parse(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if out.ends_with('\n') {
                print!("{out}");
            } else {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

/// Replaces `-` positionals with successive nonempty stdin lines.
struct Stdin {
    lines: Option<Vec<String>>,
}

impl Stdin {
    fn new() -> Self {
        Self { lines: None }
    }

    fn resolve(&mut self, arg: String) -> Result<String, Failure> {
        if arg != "-" {
            return Ok(arg);
        }
        if self.lines.is_none() {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Parse(format!("cannot read stdin: {e}")))?;
            let mut lines: Vec<String> = buf
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::to_owned)
                .collect();
            lines.reverse();
            self.lines = Some(lines);
        }
        self.lines
            .as_mut()
            .unwrap()
            .pop()
            .ok_or_else(|| Failure::Parse("stdin had no line for a `-` argument".into()))
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut stdin = Stdin::new();
    let fmt = cli.format;
    let digits = cli.precision as usize;
    match cli.command {
        Cmd::Cf(op) => {
            let fmt = text_or_json(fmt)?;
            match op {
                CfCmd::Expand { value } => {
                    let x = parse_value(&stdin.resolve(value)?)?;
                    Ok(render_cf(&ContinuedFraction::expand(&x)?, fmt))
                }
                CfCmd::Value { cf } => {
                    let v = parse_cf(&stdin.resolve(cf)?)?.value()?;
                    Ok(render_value(&v, fmt))
                }
                CfCmd::Conjugate { cf } => {
                    let c = parse_cf(&stdin.resolve(cf)?)?.conjugate()?;
                    Ok(render_cf(&c, fmt))
                }
                CfCmd::Negate { cf } => {
                    let c = parse_cf(&stdin.resolve(cf)?)?.negate()?;
                    Ok(render_cf(&c, fmt))
                }
                CfCmd::Galois { input } => {
                    let raw = stdin.resolve(input)?;
                    let x = parse_cf_or_value(&raw)?;
                    let flag = x.is_galois();
                    Ok(match fmt {
                        Format::Json => json!({
                            "kind": "galois",
                            "input": x.to_string(),
                            "galois": flag,
                        })
                        .to_string(),
                        _ => flag.to_string(),
                    })
                }
            }
        }
        Cmd::Form(op) => run_form(op, fmt, &mut stdin),
        Cmd::Lyapunov(op) => run_lyapunov(op, fmt, digits, &mut stdin),
    }
}

fn run_form(op: FormCmd, fmt: Format, stdin: &mut Stdin) -> Result<String, Failure> {
    match op {
        FormCmd::Classify { form } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let fmt = text_or_json(fmt)?;
            let class = q.classify();
            Ok(match fmt {
                Format::Json => json!({
                    "kind": "classification",
                    "form": q.to_string(),
                    "coefficients": coeff_strings(&q),
                    "class": class.as_str(),
                    "discriminant": q.discriminant().to_string(),
                })
                .to_string(),
                _ => format!("{class}, discriminant {}", q.discriminant()),
            })
        }
        FormCmd::Values { form } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let fmt = text_or_json(fmt)?;
            let t = q.root_triple();
            Ok(match fmt {
                Format::Json => json!({
                    "kind": "triple",
                    "form": q.to_string(),
                    "coefficients": coeff_strings(&q),
                    "triple": [t.a.to_string(), t.b.to_string(), t.c.to_string()],
                    "text": t.to_string(),
                })
                .to_string(),
                _ => t.to_string(),
            })
        }
        FormCmd::Roots { form } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let fmt = text_or_json(fmt)?;
            let (dominant, conjugate) = q.roots()?;
            Ok(match fmt {
                Format::Json => json!({
                    "kind": "roots",
                    "form": q.to_string(),
                    "coefficients": coeff_strings(&q),
                    "dominant": dominant.to_string(),
                    "conjugate": conjugate.to_string(),
                })
                .to_string(),
                _ => format!("{dominant}\n{conjugate}"),
            })
        }
        FormCmd::Galois { form } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let fmt = text_or_json(fmt)?;
            let flag = q.is_galois();
            Ok(match fmt {
                Format::Json => json!({
                    "kind": "galois",
                    "form": q.to_string(),
                    "galois": flag,
                })
                .to_string(),
                _ => flag.to_string(),
            })
        }
        FormCmd::River { form } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let fmt = text_or_json(fmt)?;
            let r = find_river(&q)?;
            Ok(match fmt {
                Format::Json => river_json(&q, &r).to_string(),
                _ => river_text(&r),
            })
        }
        FormCmd::Lakes { form } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let fmt = text_or_json(fmt)?;
            let l = find_lakes(&q)?;
            Ok(match fmt {
                Format::Json => lakes_json(&q, &l).to_string(),
                _ => lakes_text(&l),
            })
        }
        FormCmd::Render { form, depth } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let s = sketch(&q, depth)?;
            Ok(match fmt {
                Format::Svg => to_svg(&s),
                Format::Json => sketch_json(&q, &s).to_string(),
                // text defaults to the DOT drawing
                _ => to_dot(&s),
            })
        }
    }
}

fn run_lyapunov(
    op: LyCmd,
    fmt: Format,
    digits: usize,
    stdin: &mut Stdin,
) -> Result<String, Failure> {
    let fmt = text_or_json(fmt)?;
    match op {
        LyCmd::Form {
            form,
            target,
            steps,
        } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let xi = parse_value(&stdin.resolve(target)?)?;
            let path = PathSpec::new(xi.clone())?;
            let growth = lambda_for_form(&q, &xi)?;
            let recorded: Vec<GrowthStep> =
                GrowthSeries::new(&q, &path).take(steps + 1).collect();
            form_series_report(&q, &xi, steps, &recorded, &growth, fmt, digits)
        }
        LyCmd::Monoid { target, steps } => {
            let xi = parse_value(&stdin.resolve(target)?)?;
            let path = PathSpec::new(xi.clone())?;
            let descriptor = lambda_monoid_exact(&xi)?;
            monoid_series_report(&xi, steps, &path, &descriptor, fmt, digits)
        }
        LyCmd::Ratio {
            form,
            target,
            steps,
        } => {
            let q = parse_form(&stdin.resolve(form)?)?;
            let xi = parse_value(&stdin.resolve(target)?)?;
            let path = PathSpec::new(xi.clone())?;
            let growth = lambda_for_form(&q, &xi)?;
            let last = GrowthSeries::new(&q, &path)
                .take(steps + 1)
                .last()
                .filter(|s| s.n > 0)
                .ok_or_else(|| {
                    Failure::Domain("the path has no steps to measure a ratio on".into())
                })?;
            let ratio = last
                .log_ratio
                .as_ref()
                .map(|v| biglog::fixed_to_decimal(v, digits))
                .unwrap_or_else(|| "0".into());
            Ok(match fmt {
                Format::Json => json!({
                    "kind": "ratio",
                    "form": q.to_string(),
                    "target": xi.to_string(),
                    "n": last.n,
                    "ratio": ratio,
                    "expected_limit": i32::from(growth.doubled),
                })
                .to_string(),
                _ => ratio,
            })
        }
        LyCmd::Exact { target } => {
            let xi = parse_value(&stdin.resolve(target)?)?;
            let d = lambda_monoid_exact(&xi)?;
            let lambda = d.lambda_decimal(digits)?;
            Ok(match fmt {
                Format::Json => json!({
                    "kind": "exact",
                    "target": xi.to_string(),
                    "rho": d.rho.to_string(),
                    "period_turns": d.period_turns.to_string(),
                    "lambda": lambda,
                })
                .to_string(),
                _ => format!("rho={}, m={}, lambda={}", d.rho, d.period_turns, lambda),
            })
        }
    }
}

fn text_or_json(fmt: Format) -> Result<Format, Failure> {
    match fmt {
        Format::Dot | Format::Svg => Err(Failure::Parse(
            "dot and svg formats apply only to `form render`".into(),
        )),
        other => Ok(other),
    }
}

fn parse_cf(s: &str) -> Result<ContinuedFraction, Failure> {
    s.parse::<ContinuedFraction>().map_err(Into::into)
}

fn parse_form(s: &str) -> Result<QuadraticForm, Failure> {
    s.parse::<QuadraticForm>().map_err(Into::into)
}

/// Digit strings start with `[` (possibly under a minus sign); anything
/// else must be a value expression.
fn parse_cf_or_value(s: &str) -> Result<QuadraticIrrational, Failure> {
    let t = s.trim();
    if t.starts_with('[') || t.starts_with("-[") {
        Ok(parse_cf(t)?.value()?)
    } else {
        Ok(parse_value(t)?)
    }
}

fn render_cf(cf: &ContinuedFraction, fmt: Format) -> String {
    match fmt {
        Format::Json => cf_json(cf).to_string(),
        _ => cf.to_string(),
    }
}

fn render_value(x: &QuadraticIrrational, fmt: Format) -> String {
    match fmt {
        Format::Json => json!({
            "kind": "value",
            "text": x.to_string(),
            "numerator": x.a().to_string(),
            "coefficient": x.b().to_string(),
            "radicand": x.d().to_string(),
            "denominator": x.c().to_string(),
            "rational": x.is_rational(),
        })
        .to_string(),
        _ => x.to_string(),
    }
}

fn cf_json(cf: &ContinuedFraction) -> Value {
    let digits = |ds: &[BigInt]| -> Vec<String> { ds.iter().map(BigInt::to_string).collect() };
    json!({
        "kind": "cf",
        "preperiod": digits(cf.preperiod()),
        "period": digits(cf.period()),
        "sign": cf.global_sign(),
        "text": cf.to_string(),
    })
}

fn coeff_strings(q: &QuadraticForm) -> Vec<String> {
    let (a, h, b) = q.coeffs();
    vec![a.to_string(), h.to_string(), b.to_string()]
}

fn mat_json(m: &Mat2) -> Value {
    json!([
        [m.m[0][0].to_string(), m.m[0][1].to_string()],
        [m.m[1][0].to_string(), m.m[1][1].to_string()],
    ])
}

fn word_text(w: &TurnWord) -> String {
    if w.is_empty() {
        "(empty)".into()
    } else {
        w.to_string()
    }
}

fn river_json(q: &QuadraticForm, r: &RiverDescription) -> Value {
    let period: Vec<Value> = r
        .period
        .iter()
        .map(|s| {
            json!({
                "triple": [s.triple.a.to_string(), s.triple.b.to_string(), s.triple.c.to_string()],
                "left": s.triple.a.to_string(),
                "right": s.triple.b.to_string(),
                "turn": s.turn.to_string(),
            })
        })
        .collect();
    json!({
        "kind": "river",
        "form": q.to_string(),
        "coefficients": coeff_strings(q),
        "entry": r.entry_path.to_string(),
        "mirrored": r.mirrored,
        "reversed": r.reversed,
        "approach": r.approach.to_string(),
        "start_basis": mat_json(&r.start_basis),
        "period_word": r.period_word().to_string(),
        "period": period,
        "automorphism": mat_json(&r.automorphism),
        "dominant_root": r.dominant_root.to_string(),
        "conjugate_root": r.conjugate_root.to_string(),
    })
}

fn river_text(r: &RiverDescription) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "entry: {}{}",
        word_text(&r.entry_path),
        if r.mirrored {
            " (from the reversed root edge)"
        } else {
            ""
        }
    );
    let _ = writeln!(
        out,
        "approach: {}{}",
        word_text(&r.approach),
        if r.reversed {
            " (edge reversed first)"
        } else {
            ""
        }
    );
    let _ = writeln!(out, "period word: {}", r.period_word());
    let states: Vec<String> = r
        .period
        .iter()
        .map(|s| format!("{}{}", s.triple, s.turn))
        .collect();
    let _ = writeln!(out, "period states: {}", states.join(" "));
    let _ = writeln!(out, "start basis: {}", r.start_basis);
    let _ = writeln!(out, "automorphism: {}", r.automorphism);
    let _ = writeln!(out, "dominant root: {}", r.dominant_root);
    let _ = write!(out, "conjugate root: {}", r.conjugate_root);
    out
}

fn lakes_json(q: &QuadraticForm, l: &LakeDescription) -> Value {
    let dirs: Vec<Value> = l
        .zero_directions
        .iter()
        .map(|(x, y)| json!([x.to_string(), y.to_string()]))
        .collect();
    json!({
        "kind": "lakes",
        "form": q.to_string(),
        "coefficients": coeff_strings(q),
        "zero_directions": dirs,
        "reduced_pair": [l.reduced_pair.0.to_string(), l.reduced_pair.1.to_string()],
        "reduction": mat_json(&l.reduction),
        "connecting_word": l.connecting_word.to_string(),
        "adjacent": l.adjacent,
    })
}

fn lakes_text(l: &LakeDescription) -> String {
    let dirs: Vec<String> = l
        .zero_directions
        .iter()
        .map(|(x, y)| format!("({x},{y})"))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "zero directions: {}", dirs.join(" "));
    let _ = writeln!(
        out,
        "reduced pair: ({},{})",
        l.reduced_pair.0, l.reduced_pair.1
    );
    let _ = writeln!(out, "reduction: {}", l.reduction);
    let _ = writeln!(out, "connecting word: {}", word_text(&l.connecting_word));
    let _ = write!(out, "adjacent: {}", l.adjacent);
    out
}

fn sketch_json(q: &QuadraticForm, s: &TopographSketch) -> Value {
    let node_json = |n: &SketchNode| {
        json!({
            "id": n.id,
            "parent": n.parent,
            "turn": n.turn.map(|t| t.to_string()),
            "back_side": n.back_side,
            "word": n.word.to_string(),
            "left": n.left.to_string(),
            "right": n.right.to_string(),
            "forward": n.forward.to_string(),
            "river": n.on_river(),
        })
    };
    json!({
        "kind": "sketch",
        "form": q.to_string(),
        "coefficients": coeff_strings(q),
        "depth": s.depth,
        "nodes": s.nodes.iter().map(node_json).collect::<Vec<_>>(),
    })
}

/// `ln(x)/n` in the shared fixed-point scale; `None` when degenerate.
fn rate_fixed(x: &BigInt, n: usize) -> Option<BigInt> {
    if n == 0 || x < &BigInt::one() {
        return None;
    }
    let ln = biglog::ln_fixed_int(x);
    Some(biglog::fixed_div_int(&ln, &BigInt::from(n)))
}

fn decimal_opt(v: &Option<BigInt>, digits: usize) -> Option<String> {
    v.as_ref().map(|f| biglog::fixed_to_decimal(f, digits))
}

/// Largest fixed-point entry among the last tenth of the recorded steps.
fn tail_max(rates: &[Option<BigInt>]) -> Option<BigInt> {
    let measured: Vec<&BigInt> = rates.iter().flatten().collect();
    if measured.is_empty() {
        return None;
    }
    let k = (measured.len() + 9) / 10;
    measured[measured.len() - k..].iter().max().map(|v| (*v).clone())
}

fn short_int(x: &BigInt) -> String {
    let s = x.to_string();
    if s.len() <= 40 {
        s
    } else {
        format!("({} digits)", s.len())
    }
}

#[allow(clippy::too_many_arguments)]
fn form_series_report(
    q: &QuadraticForm,
    xi: &QuadraticIrrational,
    requested: usize,
    steps: &[GrowthStep],
    growth: &FormGrowth,
    fmt: Format,
    digits: usize,
) -> Result<String, Failure> {
    let rates: Vec<Option<BigInt>> = steps
        .iter()
        .map(|s| rate_fixed(&s.norm, s.n))
        .collect();
    let tail = tail_max(&rates);
    let last_n = steps.last().map_or(0, |s| s.n);
    let exhausted = last_n < requested;
    let lambda = growth.lambda_decimal(digits)?;
    if fmt == Format::Json {
        let step_values: Vec<Value> = steps
            .iter()
            .zip(&rates)
            .map(|(s, r)| {
                json!({
                    "n": s.n,
                    "turn": s.turn.map(|t| t.to_string()),
                    "w_n": s.w.to_string(),
                    "abs_Q_n": s.norm.to_string(),
                    "abs_Q_n_h": s.height.to_string(),
                    "log_ratio": decimal_opt(r, digits),
                })
            })
            .collect();
        return Ok(json!({
            "kind": "form",
            "form": q.to_string(),
            "target": xi.to_string(),
            "steps": step_values,
            "exhausted": exhausted,
            "tail_max": decimal_opt(&tail, digits),
            "exact": {
                "rho": growth.monoid.rho.to_string(),
                "period_turns": growth.monoid.period_turns.to_string(),
                "doubled": growth.doubled,
                "lambda": lambda,
            },
        })
        .to_string());
    }
    let mut out = String::new();
    let _ = writeln!(out, "form: {q}");
    let _ = writeln!(out, "target: {xi}");
    if exhausted {
        let _ = writeln!(out, "path ended after {last_n} turns (finite target)");
    }
    if let Some(s) = steps.last() {
        let _ = writeln!(
            out,
            "final: n={}, w_n={}, |Q_n|={}, ln|Q_n|/n={}",
            s.n,
            short_int(&s.w),
            short_int(&s.norm),
            decimal_opt(&rates[rates.len() - 1], digits).unwrap_or_else(|| "n/a".into()),
        );
    }
    let _ = writeln!(
        out,
        "tail max ln|Q_n|/n: {}",
        decimal_opt(&tail, digits).unwrap_or_else(|| "n/a".into())
    );
    let _ = write!(
        out,
        "exact: rho={}, m={}, lambda={}{}",
        growth.monoid.rho,
        growth.monoid.period_turns,
        lambda,
        if growth.doubled {
            " (doubled matrix rate)"
        } else {
            " (bounded path, rate 0)"
        }
    );
    Ok(out)
}

fn monoid_series_report(
    xi: &QuadraticIrrational,
    requested: usize,
    path: &PathSpec,
    descriptor: &topograph::LambdaDescriptor,
    fmt: Format,
    digits: usize,
) -> Result<String, Failure> {
    let steps: Vec<topograph::MonoidStep> =
        MonoidSeries::new(path).take(requested + 1).collect();
    let rates: Vec<Option<BigInt>> = steps.iter().map(|s| s.rate_fixed()).collect();
    let tail = tail_max(&rates);
    let last_n = steps.last().map_or(0, |s| s.n);
    let exhausted = last_n < requested;
    let lambda = descriptor.lambda_decimal(digits)?;
    if fmt == Format::Json {
        let step_values: Vec<Value> = steps
            .iter()
            .zip(&rates)
            .map(|(s, r)| {
                json!({
                    "n": s.n,
                    "turn": s.turn.map(|t| t.to_string()),
                    "w_n": s.w.to_string(),
                    "log_ratio": decimal_opt(r, digits),
                })
            })
            .collect();
        return Ok(json!({
            "kind": "monoid",
            "target": xi.to_string(),
            "steps": step_values,
            "exhausted": exhausted,
            "tail_max": decimal_opt(&tail, digits),
            "exact": {
                "rho": descriptor.rho.to_string(),
                "period_turns": descriptor.period_turns.to_string(),
                "lambda": lambda,
            },
        })
        .to_string());
    }
    let mut out = String::new();
    let _ = writeln!(out, "target: {xi}");
    if exhausted {
        let _ = writeln!(out, "path ended after {last_n} turns (finite target)");
    }
    if let Some(s) = steps.last() {
        let _ = writeln!(
            out,
            "final: n={}, w_n={}, ln(w_n)/n={}",
            s.n,
            short_int(&s.w),
            decimal_opt(&rates[rates.len() - 1], digits).unwrap_or_else(|| "n/a".into()),
        );
    }
    let _ = writeln!(
        out,
        "tail max ln(w_n)/n: {}",
        decimal_opt(&tail, digits).unwrap_or_else(|| "n/a".into())
    );
    let _ = write!(
        out,
        "exact: rho={}, m={}, lambda={}",
        descriptor.rho, descriptor.period_turns, lambda
    );
    Ok(out)
}
