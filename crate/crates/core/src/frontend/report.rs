//! Command dispatch and the JSON report document.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value as Json};

use super::Script;
use crate::constfield::{self, ConstExpr};
use crate::corpus::Corpus;
use crate::ddeq::{self, display_wpoly, DelayEquation, Obstruction, ReducedForm};
use crate::error::{Error, Result};
use crate::expoly::ExpoPoly;
use crate::nevanlinna::{self, RatioCurve};
use crate::ratfun::RatFun;
use crate::synthesis::{self, SolutionFamily};

pub const SCHEMA: &str = "malmquist-lab/1";

/// `m(r, w(z+c)/w(z))/T(r, w)` at the largest radius must not exceed this.
pub const LOG_DIFF_THRESHOLD: f64 = 0.05;
/// Allowed relative deviation of `T(r, R(z,w))/T(r, w)` from `deg_w R`.
pub const VALIRON_TOLERANCE: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Classify,
    Invert,
    Synthesize,
    Nevan,
    CheckLemma,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Verify,
        Command::Classify,
        Command::Invert,
        Command::Synthesize,
        Command::Nevan,
        Command::CheckLemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Classify => "classify",
            Command::Invert => "invert",
            Command::Synthesize => "synthesize",
            Command::Nevan => "nevan",
            Command::CheckLemma => "check-lemma",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    /// Radii for the numerical commands.
    pub grid: Vec<f64>,
    /// Maximum working precision of the zero test, in bits.
    pub precision: Option<u32>,
    /// Seed for generated inputs.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            grid: nevanlinna::geometric_grid(10.0, 1000.0, 24).expect("valid grid"),
            precision: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Command,
    pub seed: u64,
    pub precision_bits: u32,
    /// Definitions echoed in canonical syntax.
    pub inputs: BTreeMap<String, String>,
    pub verdict: Option<bool>,
    pub result: Json,
    pub error: Option<String>,
    pub exit_code: i32,
    /// Wall time; the only field that varies between identical runs.
    pub timing_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timing field zeroed, for reproducibility checks.
    pub fn to_json_untimed(&self) -> String {
        Report {
            timing_ms: 0.0,
            ..self.clone()
        }
        .to_json()
    }
}

/// A report together with the optional CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }

    /// Exit-2 report for failures before the command runs, such as parse errors.
    pub fn failed(command: Command, opts: &Options, err: &Error) -> Outcome {
        let report = Report {
            schema: SCHEMA,
            command,
            seed: opts.seed,
            precision_bits: opts.precision.unwrap_or_else(constfield::max_precision),
            inputs: BTreeMap::new(),
            verdict: None,
            result: Json::Null,
            error: Some(err.to_string()),
            exit_code: 2,
            timing_ms: 0.0,
        };
        Outcome { report, csv: None }
    }
}

struct Done {
    verdict: Option<bool>,
    result: Json,
    csv: Option<String>,
    generated: Vec<(&'static str, String)>,
}

impl Done {
    fn new(verdict: Option<bool>, result: Json) -> Done {
        Done {
            verdict,
            result,
            csv: None,
            generated: Vec::new(),
        }
    }
}

/// Runs `command` on the definitions of `script`.
///
/// Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for errors
/// and undecided zero tests.
pub fn run(command: Command, script: &Script, opts: &Options) -> Outcome {
    let start = Clock::start();
    let saved = constfield::max_precision();
    let outcome = opts
        .precision
        .map_or(Ok(()), constfield::set_max_precision)
        .and_then(|()| dispatch(command, script, opts));
    let precision_bits = constfield::max_precision();
    let _ = constfield::set_max_precision(saved);

    let mut inputs: BTreeMap<String, String> = script
        .defs
        .iter()
        .map(|(n, _, v)| (n.clone(), v.canonical()))
        .collect();
    let (verdict, result, csv, error, exit_code) = match outcome {
        Ok(done) => {
            inputs.extend(done.generated.into_iter().map(|(k, v)| (k.to_string(), v)));
            let code = if done.verdict == Some(false) { 1 } else { 0 };
            (done.verdict, done.result, done.csv, None, code)
        }
        Err(e) => (None, Json::Null, None, Some(e.to_string()), 2),
    };
    let report = Report {
        schema: SCHEMA,
        command,
        seed: opts.seed,
        precision_bits,
        inputs,
        verdict,
        result,
        error,
        exit_code,
        timing_ms: start.millis(),
    };
    Outcome { report, csv }
}

fn dispatch(command: Command, s: &Script, opts: &Options) -> Result<Done> {
    match command {
        Command::Verify => verify(s),
        Command::Classify => classify(s),
        Command::Invert => invert(s, opts),
        Command::Synthesize => synthesize(s, opts),
        Command::Nevan => nevan(s, opts),
        Command::CheckLemma => check_lemma(s, opts),
    }
}

fn equation_json(eq: &DelayEquation) -> Json {
    json!({
        "a": eq.a.to_string(),
        "rhs": eq.rhs.to_string(),
        "p": display_wpoly(eq.rhs.p()),
        "q": display_wpoly(eq.rhs.q()),
    })
}

/// The candidate solution, under the name `w` or `f`.
fn function(s: &Script) -> Result<ExpoPoly> {
    if s.contains("w") || !s.contains("f") {
        s.expopoly("w")
    } else {
        s.expopoly("f")
    }
}

fn optional_const(s: &Script, name: &str, default: ConstExpr) -> Result<ConstExpr> {
    if s.contains(name) {
        s.constant(name)
    } else {
        Ok(default)
    }
}

fn verify(s: &Script) -> Result<Done> {
    let eq = s.equation()?;
    let w = function(s)?;
    let ok = ddeq::verify_solution(&eq, &w)?;
    Ok(Done::new(
        Some(ok),
        json!({ "equation": equation_json(&eq), "w": w.to_string(), "solution": ok }),
    ))
}

fn classify(s: &Script) -> Result<Done> {
    let eq = s.equation()?;
    let form = ddeq::classify(&eq);
    let coefficients = match &form {
        ReducedForm::Linear { a1, a0 } => json!({ "a1": a1.to_string(), "a0": a0.to_string() }),
        ReducedForm::DividedQuadratic { a2, a1, a0 } => {
            json!({ "a2": a2.to_string(), "a1": a1.to_string(), "a0": a0.to_string() })
        }
        ReducedForm::NotReduced => Json::Null,
    };
    let obstruction = match ddeq::entire_obstruction(&eq) {
        Obstruction::Obstructed { root } => {
            json!({ "status": "obstructed", "root": root.to_string() })
        }
        Obstruction::NotObstructed => json!({ "status": "not_obstructed" }),
        Obstruction::Undetermined { reason } => {
            json!({ "status": "undetermined", "reason": reason })
        }
    };
    let reduced = form != ReducedForm::NotReduced;
    Ok(Done::new(
        Some(reduced),
        json!({
            "equation": equation_json(&eq),
            "form": form.name(),
            "coefficients": coefficients,
            "deg_p": eq.rhs.deg_p(),
            "deg_q": eq.rhs.deg_q(),
            "obstruction": obstruction,
        }),
    ))
}

fn invert(s: &Script, opts: &Options) -> Result<Done> {
    let mut generated = Vec::new();
    let (h, d, r, a) = if s.contains("H") {
        let r = if s.contains("r") {
            s.ratfun("r")?
        } else {
            RatFun::zero()
        };
        (s.polynomial("H")?, s.constant("d")?, r, s.ratfun("a")?)
    } else {
        let case = Corpus::new(opts.seed).invert_case();
        generated.push(("H", case.h.display_z()));
        generated.push(("d", case.d.to_string()));
        generated.push(("r", case.r.to_string()));
        generated.push(("a", case.a.to_string()));
        (case.h, case.d, case.r, case.a)
    };
    let eq = ddeq::invert(&h, &d, &r, &a)?;
    let w = ExpoPoly::term(d, RatFun::from_poly(h))?.add(&ExpoPoly::from_ratfun(r))?;
    let ok = ddeq::verify_solution(&eq, &w)?;
    let mut done = Done::new(
        Some(ok),
        json!({ "equation": equation_json(&eq), "w": w.to_string(), "solution": ok }),
    );
    done.generated = generated;
    Ok(done)
}

fn synthesize(s: &Script, opts: &Options) -> Result<Done> {
    let mut generated = Vec::new();
    let (a, a1, a0) = if s.contains("a1") || s.contains("a0") {
        (s.ratfun("a")?, s.ratfun("a1")?, s.ratfun("a0")?)
    } else {
        let case = Corpus::new(opts.seed).linear_case();
        generated.push(("a", case.a.to_string()));
        generated.push(("a1", case.a1.to_string()));
        generated.push(("a0", case.a0.to_string()));
        (case.a, case.a1, case.a0)
    };
    let family = synthesis::solve_linear_form(&a, &a1, &a0)?;
    let explanation = synthesis::explain(&a, &a1, &a0, &family);
    let detail = match &family {
        SolutionFamily::None => Json::Null,
        SolutionFamily::Scalar { h, d, branch } => json!({
            "h": h.display_z(),
            "d": d.to_string(),
            "branch": branch,
        }),
    };
    let mut done = Done::new(
        Some(!family.is_none()),
        json!({ "family": family.to_string(), "solution": detail, "explanation": explanation }),
    );
    done.generated = generated;
    Ok(done)
}

fn nevan(s: &Script, opts: &Options) -> Result<Done> {
    let f = function(s)?;
    let b = optional_const(s, "b", ConstExpr::zero())?.to_c64();
    let profile = nevanlinna::characteristic_profile(&f, b, &opts.grid)?;
    let csv = profile.to_csv();
    let mut done = Done::new(
        None,
        json!({ "f": f.to_string(), "b": [b.re, b.im], "profile": profile }),
    );
    done.csv = Some(csv);
    Ok(done)
}

fn curve_json(curve: &RatioCurve, holds: bool, bound: (&str, f64)) -> Json {
    json!({ "r": curve.r, "ratio": curve.ratio, "asymptote": curve.asymptote, bound.0: bound.1, "holds": holds })
}

fn check_lemma(s: &Script, opts: &Options) -> Result<Done> {
    let w = function(s)?;
    let c = optional_const(s, "c", ConstExpr::one())?;
    let ld = nevanlinna::log_diff_lemma_check(&w, &c, &opts.grid)?;
    let last = |c: &RatioCurve| *c.ratio.last().expect("nonempty grid");
    let ld_holds = last(&ld) <= LOG_DIFF_THRESHOLD;
    let mut result = json!({
        "w": w.to_string(),
        "c": c.to_string(),
        "log_diff": curve_json(&ld, ld_holds, ("threshold", LOG_DIFF_THRESHOLD)),
    });
    let mut holds = ld_holds;
    if s.contains("rhs") {
        let rhs = s.wrational("rhs")?;
        let vm = nevanlinna::valiron_mohonko_check(&rhs, &w, &opts.grid)?;
        let deg = rhs.degree() as f64;
        let vm_holds = ((last(&vm) - deg) / deg).abs() <= VALIRON_TOLERANCE;
        holds &= vm_holds;
        result["rhs"] = json!(rhs.to_string());
        result["valiron"] = curve_json(&vm, vm_holds, ("tolerance", VALIRON_TOLERANCE));
    }
    Ok(Done::new(Some(holds), result))
}

/// Wall clock; reads zero on the browser target, which has no monotonic timer in `std`.
struct Clock(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Clock {
    fn start() -> Clock {
        Clock(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn millis(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_secs_f64() * 1e3;
        #[cfg(target_arch = "wasm32")]
        0.0
    }
}
