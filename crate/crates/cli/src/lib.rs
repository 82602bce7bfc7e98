//! Batch front end: each command reads one input text and produces an exit
//! status with its output, so tests can drive it without spawning processes.

use std::ffi::OsString;
use std::str::FromStr;

use clap::Parser;

use hsk_core::arith::{self, DiophantineFormula};
use hsk_core::models::{self, construct_alpha, m_alpha, AlphaAssignment, StructureRegistry};
use hsk_core::qcheck::{Decider, DeciderRegistry, DEFAULT_DECIDER};
use hsk_core::skeleton::{self, ExistentialFormula, SearchOptions};
use hsk_core::sreu;
use hsk_core::syntax::{parse_formula, signature_of, Formula, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Skeleton,
    Solve,
    Sreu,
    Encode,
    Eval,
    Countermodel,
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "check" => Command::Check,
            "skeleton" => Command::Skeleton,
            "solve" => Command::Solve,
            "sreu" => Command::Sreu,
            "encode" => Command::Encode,
            "eval" => Command::Eval,
            "countermodel" => Command::Countermodel,
            _ => return Err(format!("unknown command `{s}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    /// One line per result of tab-separated `key=value` fields.
    Records,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "records" => Ok(Format::Records),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Path or `-` for standard input; only used in messages here.
    pub input: String,
    pub n: usize,
    pub max_size: usize,
    pub structure: String,
    /// `name=J(j,k)` or `name=NAT`.
    pub alpha: Vec<String>,
    pub format: Format,
    pub decider: String,
    pub jobs: usize,
    /// `sreu`: also search each problem.
    pub solve: bool,
    /// `encode`: distinguished variable, defaulting to the first one.
    pub var: Option<String>,
    /// `encode`: numeral substituted for the distinguished variable.
    pub m: u64,
    pub color: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: "-".into(),
            n: 1,
            max_size: 6,
            structure: "two-point".into(),
            alpha: Vec::new(),
            format: Format::Text,
            decider: DEFAULT_DECIDER.into(),
            jobs: 1,
            solve: false,
            var: None,
            m: 0,
            color: false,
        }
    }
}

/// Herbrand skeletons: quasitautology checking, skeleton search, SREU
/// conversion, arithmetic encodings and countermodels.
#[derive(Parser, Debug)]
#[command(name = "hsk", version)]
pub struct Args {
    /// check | skeleton | solve | sreu | encode | eval | countermodel
    pub command: Command,
    /// Input file, or `-` for standard input.
    #[arg(default_value = "-")]
    pub input: String,
    /// Skeleton size (number of matrix copies or variants).
    #[arg(short = 'n', default_value_t = 1)]
    pub n: usize,
    /// Largest term size tried for each unknown.
    #[arg(long, default_value_t = 6)]
    pub max_size: usize,
    /// Structure for `eval`: two-point, table, plain-table or m-alpha.
    #[arg(long, default_value = "two-point")]
    pub structure: String,
    /// Interpretation of a special constant for m-alpha, e.g. `z_1=J(0,4)`.
    #[arg(long = "alpha")]
    pub alpha: Vec<String>,
    /// Output format: text or records.
    #[arg(long, default_value = "text")]
    pub format: Format,
    /// Quasitautology decider: tableau or assignments.
    #[arg(long, default_value = hsk_core::qcheck::DEFAULT_DECIDER)]
    pub decider: String,
    /// Search threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// With `sreu`, also search each problem for a solution.
    #[arg(long)]
    pub solve: bool,
    /// With `encode`, read the input as a Diophantine system (the default).
    #[arg(long)]
    pub dioph: bool,
    /// With `encode`, the distinguished variable (defaults to the first one).
    #[arg(long)]
    pub var: Option<String>,
    /// With `encode`, the numeral substituted for the distinguished variable.
    #[arg(short = 'm', default_value_t = 0)]
    pub m: u64,
}

impl Args {
    /// The run configuration; `HSK_COLOR=1` turns on styled diagnostics.
    pub fn into_config(self) -> RunConfig {
        RunConfig {
            command: self.command,
            input: self.input,
            n: self.n,
            max_size: self.max_size,
            structure: self.structure,
            alpha: self.alpha,
            format: self.format,
            decider: self.decider,
            jobs: self.jobs,
            solve: self.solve,
            var: self.var,
            m: self.m,
            color: std::env::var("HSK_COLOR").is_ok_and(|v| v == "1"),
        }
    }
}

/// Parses a command line, program name first.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Ok(Args::try_parse_from(args)?.into_config())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Out {
    format: Format,
    text: String,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn record(&mut self, fields: &[(&str, String)]) {
        let parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        self.line(parts.join("\t"));
    }
}

pub fn run(config: &RunConfig, input: &str) -> RunOutcome {
    let mut out = Out {
        format: config.format,
        text: String::new(),
    };
    match dispatch(config, input, &mut out) {
        Ok(positive) => RunOutcome {
            status: if positive { 0 } else { 1 },
            stdout: out.text,
            stderr: String::new(),
        },
        Err(Failure(msg)) => {
            let label = if config.color {
                "\x1b[1;31merror\x1b[0m"
            } else {
                "error"
            };
            RunOutcome {
                status: 2,
                stdout: out.text,
                stderr: format!("{label}: {}: {msg}\n", config.input),
            }
        }
    }
}

fn dispatch(c: &RunConfig, input: &str, out: &mut Out) -> Result<bool, Failure> {
    if c.n == 0 {
        return Err(Failure("-n must be positive".into()));
    }
    let registry = DeciderRegistry::default();
    let decider = registry.get(&c.decider).ok_or_else(|| {
        Failure(format!(
            "unknown decider `{}` (known: {})",
            c.decider,
            registry.names().join(", ")
        ))
    })?;
    match c.command {
        Command::Check => check(input, decider, out),
        Command::Skeleton => emit_skeleton(c, input, out),
        Command::Solve => solve(c, input, decider, out),
        Command::Sreu => convert(c, input, decider, out),
        Command::Encode => encode(c, input, out),
        Command::Eval => eval(c, input, out),
        Command::Countermodel => countermodel(input, decider, out),
    }
}

fn check(input: &str, decider: &dyn Decider, out: &mut Out) -> Result<bool, Failure> {
    let phi = parse_formula(input)?;
    let valid = decider.is_quasitautology(&phi)?;
    match out.format {
        Format::Text => out.line(if valid {
            "QUASITAUTOLOGY"
        } else {
            "NOT A QUASITAUTOLOGY"
        }),
        Format::Records => out.record(&[(
            "verdict",
            verdict(valid, "quasitautology", "not_quasitautology"),
        )]),
    }
    Ok(valid)
}

fn verdict(b: bool, yes: &str, no: &str) -> String {
    (if b { yes } else { no }).to_string()
}

fn existential(input: &str) -> Result<ExistentialFormula, Failure> {
    Ok(ExistentialFormula::from_formula(&parse_formula(input)?)?)
}

fn emit_skeleton(c: &RunConfig, input: &str, out: &mut Out) -> Result<bool, Failure> {
    let sk = skeleton::make_skeleton(&existential(input)?, c.n)?;
    match out.format {
        Format::Text => out.line(sk.formula().to_string()),
        Format::Records => out.record(&[
            ("verdict", "skeleton".into()),
            ("formula", sk.formula().to_string()),
        ]),
    }
    Ok(true)
}

fn options(c: &RunConfig, decider: &dyn Decider) -> SearchOptions {
    let decider = DeciderRegistry::default()
        .shared(decider.name())
        .expect("registered");
    SearchOptions {
        max_size: c.max_size,
        jobs: c.jobs,
        guided: true,
        decider,
    }
}

fn witness(sol: &skeleton::Solution) -> String {
    sol.iter()
        .map(|(u, t)| format!("{u}:={t}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn solve(
    c: &RunConfig,
    input: &str,
    decider: &dyn Decider,
    out: &mut Out,
) -> Result<bool, Failure> {
    let sk = skeleton::make_skeleton(&existential(input)?, c.n)?;
    let found = skeleton::solve_with(&sk, &sk.default_signature(), &options(c, decider));
    match (&found, out.format) {
        (Some(sol), Format::Text) => out.line(sol.to_string()),
        (None, Format::Text) => out.line(format!("NO SOLUTION WITHIN BOUND {}", c.max_size)),
        (Some(sol), Format::Records) => {
            out.record(&[("verdict", "solved".into()), ("witness", witness(sol))])
        }
        (None, Format::Records) => out.record(&[
            ("verdict", "no_solution".into()),
            ("bound", c.max_size.to_string()),
        ]),
    }
    Ok(found.is_some())
}

/// Accepts a quantifier-free formula with unknowns, or an existential formula
/// whose size-`n` skeleton is converted.
fn convert(
    c: &RunConfig,
    input: &str,
    decider: &dyn Decider,
    out: &mut Out,
) -> Result<bool, Failure> {
    let phi = parse_formula(input)?;
    let (target, sig) = if matches!(phi, Formula::Exists(..)) {
        let sk = skeleton::make_skeleton(&ExistentialFormula::from_formula(&phi)?, c.n)?;
        let sig = sk.default_signature();
        (sk.formula().clone(), sig)
    } else if phi.is_quantifier_free() {
        let sig = skeleton::with_constant(signature_of(&phi));
        (phi, sig)
    } else {
        return Err(Failure(
            "expected a quantifier-free formula or an existential formula".into(),
        ));
    };
    let problems = sreu::convert_to_sreu(&target);
    if problems.is_empty() {
        match out.format {
            Format::Text => out.line("NO PROBLEMS"),
            Format::Records => out.record(&[("verdict", "no_problems".into())]),
        }
        return Ok(false);
    }
    let opts = options(c, decider);
    let mut any = false;
    for (i, p) in problems.iter().enumerate() {
        let i = i + 1;
        let found = if c.solve {
            sreu::solve_sreu_with(p, &sig, &opts)
        } else {
            None
        };
        any |= found.is_some();
        match out.format {
            Format::Text => {
                out.line(format!("PROBLEM {i}"));
                for (j, rc) in p.constraints().iter().enumerate() {
                    out.line(format!("[{i}.{}] {rc}", j + 1));
                }
                if c.solve {
                    match &found {
                        Some(sol) if sol.is_empty() => out.line("  solved by any assignment"),
                        Some(sol) => out.line(format!(
                            "  solution: {}",
                            witness(sol).replace(":=", " := ").replace(';', ", ")
                        )),
                        None => out.line(format!("  no solution within bound {}", c.max_size)),
                    }
                }
            }
            Format::Records => {
                let mut fields = vec![("problem_index", i.to_string())];
                if c.solve {
                    fields.push(("verdict", verdict(found.is_some(), "solved", "no_solution")));
                    if let Some(sol) = &found {
                        fields.push(("witness", witness(sol)));
                    }
                } else {
                    fields.push(("verdict", "problem".into()));
                }
                fields.push(("problem", p.to_string()));
                out.record(&fields);
            }
        }
    }
    Ok(!c.solve || any)
}

fn encode(c: &RunConfig, input: &str, out: &mut Out) -> Result<bool, Failure> {
    let psi: DiophantineFormula = input.parse()?;
    let x = match &c.var {
        Some(name) => Some(Variable::new(name.trim_start_matches('?'))),
        None => psi.variables().into_iter().next(),
    };
    let f = arith::reduction_f(&psi, x.as_ref(), c.m, c.n)?;
    match out.format {
        Format::Text => out.line(f.to_string()),
        Format::Records => out.record(&[("verdict", "encoded".into()), ("formula", f.to_string())]),
    }
    Ok(true)
}

fn alpha(c: &RunConfig) -> Result<AlphaAssignment, Failure> {
    let mut a = AlphaAssignment::new();
    for b in &c.alpha {
        let (k, v) = AlphaAssignment::parse_binding(b)?;
        a.set(k, v);
    }
    Ok(a)
}

fn eval(c: &RunConfig, input: &str, out: &mut Out) -> Result<bool, Failure> {
    let phi = parse_formula(input)?;
    let m = StructureRegistry::default().build(&c.structure, &alpha(c)?)?;
    let truth = models::holds(m.as_ref(), &phi)?;
    match out.format {
        Format::Text => out.line(if truth { "TRUE" } else { "FALSE" }),
        Format::Records => out.record(&[("verdict", verdict(truth, "true", "false"))]),
    }
    Ok(truth)
}

/// Input: a disjunction of ground instances of variants in distinct languages.
fn countermodel(input: &str, decider: &dyn Decider, out: &mut Out) -> Result<bool, Failure> {
    let phi = parse_formula(input)?;
    let mut failing = Vec::new();
    for (idx, d) in phi.disjuncts().into_iter().enumerate() {
        let inst = arith::recognize_instance(d).ok_or_else(|| {
            Failure(format!(
                "disjunct {} is not an instance of the arithmetic encoding",
                idx + 1
            ))
        })?;
        if inst.language() == 0 || failing.iter().any(|(l, _)| *l == inst.language()) {
            return Err(Failure(format!(
                "disjunct {} must use its own language index >= 1",
                idx + 1
            )));
        }
        match arith::classify_failures(&inst, decider) {
            Ok(diag) => failing.push((inst.language(), diag)),
            Err(arith::ArithError::AllValid) => {
                match out.format {
                    Format::Text => {
                        out.line(format!("INSTANCE {} IS VALID; NO COUNTERMODEL", idx + 1))
                    }
                    Format::Records => out.record(&[
                        ("verdict", "valid_instance".into()),
                        ("index", (idx + 1).to_string()),
                    ]),
                }
                return Ok(false);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let alpha = construct_alpha(&failing)?;
    let falsified = !models::holds(&m_alpha(alpha.clone()), &phi)?;
    match out.format {
        Format::Text => {
            for (l, diag) in &failing {
                out.line(format!("language {l}: case {diag}"));
            }
            for (k, v) in alpha.iter() {
                out.line(format!("{} = {}", k.name(), models::show_element(v)));
            }
            out.line(if falsified {
                "FALSIFIED"
            } else {
                "NOT FALSIFIED"
            });
        }
        Format::Records => {
            let cases: Vec<String> = failing.iter().map(|(l, d)| format!("{l}:{d}")).collect();
            out.record(&[
                ("verdict", verdict(falsified, "falsified", "not_falsified")),
                ("cases", cases.join(",")),
                ("alpha", alpha.to_string()),
            ]);
        }
    }
    Ok(falsified)
}
