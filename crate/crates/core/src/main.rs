use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use phimod::arith::gcd_u64;
use phimod::classify::{classify, is_simple, simples_equal};
use phimod::decompose::{decompose_i, decompose_ii, decompose_iii};
use phimod::eigen::find_eigen;
use phimod::lift::lift_base_change;
use phimod::matrix::Matrix;
use phimod::module::{make_standard, PhiModule, DEFAULT_PRECISION};
use phimod::rb::{rb_length, rb_reduce};
use phimod::{Error, FFElem, FieldConfig};

mod selftest;

#[derive(Parser)]
#[command(name = "phimod", version, about = "Etale phi-modules over F_q((u)): construction, decomposition, classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical class of num/den in R_b.
    RbReduce(Opts),
    /// Periodic digit word of the class of num/den.
    RbDigits(Opts),
    /// Multiplicative order of b modulo den.
    RbLength(Opts),
    /// The standard module D(d, n, a).
    MakeStandard(Opts),
    /// Jordan-Holder constituents of a module.
    Classify(Opts),
    /// Whether a module has a single Jordan-Holder constituent.
    IsSimple(Opts),
    /// Explicit splitting of D(d, n, a) into copies of D(d', n', .).
    Decompose(Opts),
    /// Base change P with P G phi(P)^{-1} = H for H close to G.
    Lift(Opts),
    /// z with phi^Gamma(z) = u^n z.
    FindEigen(Opts),
    /// Whether two simple objects D(r1, a1), D(r2, a2) are isomorphic.
    SimplesEqual(Opts),
    /// Randomized invariant suites.
    Selftest(Opts),
}

#[derive(Args, Clone, Debug)]
struct Opts {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    b: Option<u64>,
    /// Comma-separated coefficients, constant term first, monic.
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<i64>,
    /// Field element as comma-separated coefficients over F_p.
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    num: Option<i64>,
    #[arg(long)]
    den: Option<i64>,
    /// d' for decompose.
    #[arg(long)]
    dprime: Option<usize>,
    /// Path to a JSON document, or the JSON itself.
    #[arg(long = "in")]
    input: Option<String>,
    /// Target matrix H for lift (module or matrix JSON).
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, env = "PHIMOD_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// selftest: largest dimension.
    #[arg(long, default_value_t = 2)]
    max_d: usize,
    /// selftest: largest field order.
    #[arg(long, default_value_t = 4)]
    max_q: u32,
    /// selftest: comma-separated twists b.
    #[arg(long, default_value = "2")]
    bs: String,
    /// selftest: random cases per suite.
    #[arg(long, default_value_t = 8)]
    cases: usize,
}

/// Exit 1: bad flags, unreadable or malformed input. Exit 2: domain errors.
enum Failure {
    Input(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = std::result::Result<Value, Failure>;

fn need<T: Clone>(v: &Option<T>, flag: &str) -> std::result::Result<T, Failure> {
    v.clone().ok_or_else(|| Failure::Input(format!("--{flag} is required")))
}

fn parse_list(s: &str, flag: &str) -> std::result::Result<Vec<u32>, Failure> {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| Failure::Input(format!("--{flag}: bad integer {x:?}"))))
        .collect()
}

fn read_json(arg: &str) -> std::result::Result<Value, Failure> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("invalid JSON: {e}")))
}

fn cfg_from_flags(o: &Opts) -> std::result::Result<FieldConfig, Failure> {
    let modulus = o.modulus.as_deref().map(|s| parse_list(s, "modulus")).transpose()?;
    Ok(FieldConfig::new(need(&o.p, "p")?, o.m.unwrap_or(1), o.s.unwrap_or(0), need(&o.b, "b")?, modulus)?)
}

fn elem_from_flag(cfg: &FieldConfig, s: &str) -> std::result::Result<FFElem, Failure> {
    let c = parse_list(s, "a")?;
    Ok(cfg.field().from_coeffs(&c)?)
}

fn module_input(o: &Opts) -> std::result::Result<PhiModule, Failure> {
    let v = read_json(&need(&o.input, "in")?)?;
    // `make-standard` output nests the module
    let v = v.get("module").cloned().unwrap_or(v);
    PhiModule::from_json(&v).map_err(|e| Failure::Input(e.to_string()))
}

fn with_context(mut v: Value, cfg: Option<&FieldConfig>, precision: i64) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("precision".into(), json!(precision));
        if let Some(c) = cfg {
            map.insert("cfg".into(), c.to_json());
        }
    }
    v
}

fn rb_flags(o: &Opts) -> std::result::Result<(i64, i64, u64), Failure> {
    Ok((need(&o.num, "num")?, need(&o.den, "den")?, need(&o.b, "b")?))
}

fn run(cmd: &Command) -> Out {
    match cmd {
        Command::RbReduce(o) => {
            let (num, den, b) = rb_flags(o)?;
            Ok(with_context(rb_reduce(num, den, b)?.to_json(), None, o.precision))
        }
        Command::RbDigits(o) => {
            let (num, den, b) = rb_flags(o)?;
            let r = rb_reduce(num, den, b)?;
            Ok(with_context(
                json!({"b": b, "digits": r.digit_string(), "digit_list": r.digits(), "length": r.length()}),
                None,
                o.precision,
            ))
        }
        Command::RbLength(o) => {
            let den = need(&o.den, "den")?;
            let b = need(&o.b, "b")?;
            Ok(with_context(json!({"b": b, "den": den, "length": rb_length(den, b)?}), None, o.precision))
        }
        Command::MakeStandard(o) => {
            let cfg = cfg_from_flags(o)?;
            let a = elem_from_flag(&cfg, o.a.as_deref().unwrap_or("1"))?;
            let std = make_standard(&cfg, need(&o.d, "d")?, need(&o.n, "n")?, a)?;
            let v = json!({
                "d": std.d,
                "n": std.n,
                "a": cfg.field().elem_to_json(a),
                "gamma": std.module.gamma(),
                "module": std.module.to_json(),
            });
            Ok(with_context(v, Some(&cfg), o.precision))
        }
        Command::Classify(o) => {
            let m = module_input(o)?;
            let rep = classify(&m, o.precision)?;
            Ok(with_context(rep.to_json(), Some(m.cfg()), o.precision))
        }
        Command::IsSimple(o) => {
            let m = module_input(o)?;
            let (simple, rep) = is_simple(&m, o.precision)?;
            Ok(with_context(json!({"simple": simple, "report": rep.to_json()}), Some(m.cfg()), o.precision))
        }
        Command::Decompose(o) => decompose_cmd(o),
        Command::Lift(o) => {
            let m = module_input(o)?;
            let h = read_json(&need(&o.target, "target")?)?;
            let h = h.get("module").cloned().unwrap_or(h);
            let h = h.get("matrix").cloned().unwrap_or(h);
            let h = Matrix::from_json(&h, m.cfg().field()).map_err(|e| Failure::Input(e.to_string()))?;
            let res = lift_base_change(&m, &h, o.precision)?;
            Ok(with_context(res.to_json(&m), Some(m.cfg()), o.precision))
        }
        Command::FindEigen(o) => {
            let m = module_input(o)?;
            let e = find_eigen(&m, o.precision, o.precision / 2)?;
            let mut v = e.to_json(&m);
            let r = phimod::rb::rb_reduce_periodic(&e.n, e.delta, m.cfg().b())?;
            v["r"] = r.to_json();
            Ok(with_context(v, Some(m.cfg()), o.precision))
        }
        Command::SimplesEqual(o) => simples_equal_cmd(o),
        Command::Selftest(o) => selftest::run(o),
    }
}

/// Picks the case from sigma and t = d/d'; d' defaults to the least divisor
/// for which n' is an integer.
fn decompose_cmd(o: &Opts) -> Out {
    let cfg = cfg_from_flags(o)?;
    let a = elem_from_flag(&cfg, o.a.as_deref().unwrap_or("1"))?;
    let d = need(&o.d, "d")?;
    let std = make_standard(&cfg, d, need(&o.n, "n")?, a)?;
    let b = cfg.b() as i128;
    let nprime_for = |dp: usize| -> Option<i64> {
        let bd = b.checked_pow(d as u32)? - 1;
        let bdp = b.checked_pow(dp as u32)? - 1;
        let num = (std.n as i128).checked_mul(bdp)?;
        (num % bd == 0).then(|| (num / bd) as i64)
    };
    let dprime = match o.dprime {
        Some(dp) => dp,
        None => (1..=d).find(|&dp| d % dp == 0 && nprime_for(dp).is_some()).unwrap_or(d),
    };
    if dprime == 0 || d % dprime != 0 {
        return Err(Failure::Input(format!("--dprime {dprime} must divide d = {d}")));
    }
    let nprime = nprime_for(dprime).ok_or(Error::RatioMismatch)?;
    let t = (d / dprime) as u64;
    let check = o.precision;
    let dec = if !cfg.sigma_is_identity() {
        decompose_i(&std, dprime, nprime, check)?
    } else if t == cfg.p() as u64 {
        decompose_iii(&std, dprime, nprime, check)?
    } else if gcd_u64(t, cfg.p() as u64) == 1 {
        decompose_ii(&std, dprime, nprime, check)?
    } else {
        return Err(Failure::Domain(Error::TNotP(t)));
    };
    let mut v = dec.to_json();
    if dec.kind == "iii" {
        v["flag_stable"] = json!(dec.flag_is_stable());
    }
    Ok(with_context(v, Some(&cfg), o.precision))
}

fn simples_equal_cmd(o: &Opts) -> Out {
    let v = read_json(&need(&o.input, "in")?)?;
    let bad = |e: Error| Failure::Input(e.to_string());
    let cfg = FieldConfig::from_json(v.get("cfg").ok_or_else(|| Failure::Input("cfg is missing".into()))?)
        .map_err(bad)?;
    let side = |k: &str| -> std::result::Result<(phimod::rb::RbClass, Option<FFElem>), Failure> {
        let s = v.get(k).ok_or_else(|| Failure::Input(format!("{k} is missing")))?;
        let num = s.get("num").and_then(Value::as_i64).ok_or_else(|| Failure::Input(format!("{k}.num")))?;
        let den = s.get("den").and_then(Value::as_i64).ok_or_else(|| Failure::Input(format!("{k}.den")))?;
        let r = rb_reduce(num, den, cfg.b())?;
        let a = match s.get("a") {
            None | Some(Value::Null) => None,
            Some(x) => Some(cfg.field().elem_from_json(x).map_err(bad)?),
        };
        Ok((r, a))
    };
    let (r1, a1) = side("left")?;
    let (r2, a2) = side("right")?;
    let eq = simples_equal(&cfg, &r1, a1, &r2, a2)?;
    Ok(with_context(json!({"equal": eq, "left": r1.to_json(), "right": r2.to_json()}), Some(&cfg), o.precision))
}

fn opts(cmd: &Command) -> &Opts {
    match cmd {
        Command::RbReduce(o)
        | Command::RbDigits(o)
        | Command::RbLength(o)
        | Command::MakeStandard(o)
        | Command::Classify(o)
        | Command::IsSimple(o)
        | Command::Decompose(o)
        | Command::Lift(o)
        | Command::FindEigen(o)
        | Command::SimplesEqual(o)
        | Command::Selftest(o) => o,
    }
}

fn emit(v: &Value, out: Option<&str>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn error_doc(code: &str, message: &str) -> Value {
    let mut e = Map::new();
    e.insert("code".into(), json!(code));
    e.insert("message".into(), json!(message));
    json!({ "error": e })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let o = opts(&cli.command);
    let result = if o.precision < 8 {
        Err(Failure::Input(format!("precision {} is below 8", o.precision)))
    } else {
        run(&cli.command)
    };
    let (doc, code) = match result {
        Ok(v) => (v, 0),
        Err(Failure::Input(msg)) => (error_doc("InputError", &msg), 1),
        Err(Failure::Domain(e)) => (error_doc(e.code(), &e.to_string()), 2),
    };
    // failing selftests report through the document but exit nonzero
    let code = if code == 0 && doc.get("status").and_then(Value::as_str) == Some("fail") { 2 } else { code };
    if let Err(e) = emit(&doc, o.out.as_deref()) {
        eprintln!("phimod: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
