//! `dp8`: rational parametrization of degree-8 Del Pezzo surfaces in `P^8`.
//!
//! Every subcommand prints one JSON document on standard output (or to
//! `--out`) and reports through its exit status: 0 success, 1 invalid input
//! or I/O error, 2 not rational, 3 inconclusive.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dp8::conic::{
    solve_conic_q, solve_conic_qext, verify_certificate_q, verify_certificate_qext, TernaryForm,
    Verdict, DEFAULT_HEIGHT,
};
use dp8::dp8::pipeline::{classify, PipelineConfig};
use dp8::dp8::{
    classify_and_parametrize, generate_instance, verify_parametrization, ModelKind, ParamMap,
    QuadricIdeal,
};
use dp8::field::{normalize_extension, QuadExt, Rational};
use dp8::linalg::Mat;

#[derive(Parser)]
#[command(
    name = "dp8",
    version,
    about = "Parametrize degree-8 Del Pezzo surfaces given by quadrics in P^8"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the surface and parametrize it when it is rational over Q.
    Parametrize {
        /// Height bound for conic searches over quadratic fields.
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u32,
        /// Input ideal (JSON); standard input when absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check by exact substitution that a map parametrizes the surface.
    Verify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// A random linear image of a canonical model.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Extension parameter of the sphere (squarefree part is used).
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i64>,
        /// Bound on the entries of the random transform.
        #[arg(long)]
        perturb: u32,
        #[arg(long)]
        seed: u64,
    },
    /// A point on a ternary form over Q or Q(sqrt(a)), or an obstruction.
    Conic {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u32,
    },
    /// Lie algebra dimension, semisimplicity and type, without parametrizing.
    Info {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    P1xp1,
    Blowup,
    Sphere,
}

#[derive(Clone, Copy)]
enum Status {
    Ok = 0,
    Invalid = 1,
    NotRational = 2,
    Inconclusive = 3,
}

struct Failure {
    stage: &'static str,
    reason: String,
}

fn failure(stage: &'static str) -> impl Fn(dp8::error::Error) -> Failure {
    move |e| Failure {
        stage,
        reason: e.to_string(),
    }
}

fn log(msg: &str) {
    eprintln!("dp8: {msg}");
}

fn read_json(path: Option<&Path>) -> Result<Value, Failure> {
    let text = match path {
        Some(p) => {
            log(&format!("reading {}", p.display()));
            fs::read_to_string(p).map_err(|e| Failure {
                stage: "io",
                reason: format!("{}: {e}", p.display()),
            })?
        }
        None => {
            log("reading standard input");
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure {
                stage: "io",
                reason: e.to_string(),
            })?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure {
        stage: "input",
        reason: format!("malformed JSON: {e}"),
    })
}

fn read_ideal(path: Option<&Path>) -> Result<QuadricIdeal, Failure> {
    QuadricIdeal::from_json(&read_json(path)?).map_err(failure("input"))
}

fn write_json(v: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    let io_err = |e: io::Error| Failure {
        stage: "io",
        reason: e.to_string(),
    };
    match out {
        Some(p) => fs::write(p, text).map_err(io_err),
        None => io::stdout().write_all(text.as_bytes()).map_err(io_err),
    }
}

fn status_of(tag: &str) -> Status {
    match tag {
        "parametrization" => Status::Ok,
        "not_rational" => Status::NotRational,
        "inconclusive" => Status::Inconclusive,
        _ => Status::Invalid,
    }
}

fn parametrize(height: u32, input: Option<&Path>, out: Option<&Path>) -> Result<Status, Failure> {
    let ideal = read_ideal(input)?;
    log("computing the Lie algebra and identifying the surface");
    let output = classify_and_parametrize(&ideal, &PipelineConfig { height });
    let v = output.to_json();
    log(&format!("result: {}", output.result.tag()));
    write_json(&v, out)?;
    Ok(status_of(output.result.tag()))
}

fn verify(map: &Path, input: &Path) -> Result<Status, Failure> {
    let mv = read_json(Some(map))?;
    if let Some(tag) = mv.get("result").and_then(Value::as_str) {
        if tag != "parametrization" {
            return Err(Failure {
                stage: "input",
                reason: format!("{} holds a `{tag}` result, not a map", map.display()),
            });
        }
    }
    let m = ParamMap::from_json(&mv).map_err(failure("input"))?;
    let ideal = read_ideal(Some(input))?;
    log("substituting the map into the quadrics");
    let ok = verify_parametrization(&ideal, &m);
    write_json(&json!({ "verified": ok }), None)?;
    Ok(if ok { Status::Ok } else { Status::Invalid })
}

fn generate(kind: Kind, a: Option<i64>, perturb: u32, seed: u64) -> Result<Status, Failure> {
    let model = match kind {
        Kind::P1xp1 => ModelKind::P1xP1,
        Kind::Blowup => ModelKind::Blowup,
        Kind::Sphere => {
            ModelKind::Sphere(normalize_extension(a.unwrap_or(-1)).map_err(failure("input"))?)
        }
    };
    if a.is_some() && !matches!(kind, Kind::Sphere) {
        return Err(Failure {
            stage: "input",
            reason: "--a only applies to --kind sphere".into(),
        });
    }
    let (ideal, transform) =
        generate_instance(model, perturb, seed).map_err(failure("generate"))?;
    let mut v = ideal.to_json();
    v["kind"] = json!(model.name());
    if let ModelKind::Sphere(d) = model {
        v["a"] = json!(d);
    }
    v["perturb"] = json!(perturb);
    v["seed"] = json!(seed);
    v["transform"] = transform.to_json();
    write_json(&v, None)?;
    Ok(Status::Ok)
}

fn conic(input: &Path, height: u32) -> Result<Status, Failure> {
    let v = read_json(Some(input))?;
    let form_json = v.get("form").ok_or_else(|| Failure {
        stage: "input",
        reason: "missing `form`".into(),
    })?;
    let status = |verdict: Verdict| match verdict {
        Verdict::Solvable => Status::Ok,
        Verdict::Unsolvable => Status::NotRational,
        Verdict::Inconclusive { .. } => Status::Inconclusive,
    };
    match v.get("a") {
        None => {
            let m = Mat::<Rational>::from_json(form_json).map_err(failure("input"))?;
            let form = TernaryForm::new(m).map_err(failure("input"))?;
            let cert = solve_conic_q(&form).map_err(failure("conic"))?;
            let ok = verify_certificate_q(&form, &cert);
            write_json(
                &json!({ "field": "Q", "certificate": cert.to_json(), "verified": ok }),
                None,
            )?;
            Ok(status(cert.verdict))
        }
        Some(av) => {
            let raw = av.as_i64().ok_or_else(|| Failure {
                stage: "input",
                reason: "`a` must be an integer".into(),
            })?;
            let a = normalize_extension(raw).map_err(failure("input"))?;
            let m = Mat::<QuadExt>::from_json(form_json).map_err(failure("input"))?;
            if m.entries().iter().any(|z| z.ext() != 0 && z.ext() != a) {
                return Err(Failure {
                    stage: "input",
                    reason: format!("form entries live outside Q(sqrt({a}))"),
                });
            }
            let tagged =
                m.map(|z| QuadExt::new(z.x.clone(), z.y.clone(), a).expect("normalized extension"));
            let form = TernaryForm::new(tagged).map_err(failure("input"))?;
            let cert = solve_conic_qext(&form, height).map_err(failure("conic"))?;
            let ok = verify_certificate_qext(&form, &cert);
            let field = format!("Q(sqrt({a}))");
            write_json(
                &json!({ "field": field, "certificate": cert.to_json(), "verified": ok }),
                None,
            )?;
            Ok(status(cert.verdict))
        }
    }
}

fn info(input: &Path) -> Result<Status, Failure> {
    let ideal = read_ideal(Some(input))?;
    log("computing the Lie algebra");
    let c = classify(&ideal).map_err(|(stage, reason)| Failure { stage, reason })?;
    let mut v = json!({
        "lie_dim": c.lie_dim,
        "semisimple": c.semisimple,
        "classification": c.kind.name(),
    });
    if let ModelKind::Sphere(a) = c.kind {
        v["a"] = json!(a);
    }
    write_json(&v, None)?;
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Parametrize { height, input, out } => {
            parametrize(*height, input.as_deref(), out.as_deref())
        }
        Command::Verify { map, input } => verify(map, input),
        Command::Generate {
            kind,
            a,
            perturb,
            seed,
        } => generate(*kind, *a, *perturb, *seed),
        Command::Conic { input, height } => conic(input, *height),
        Command::Info { input } => info(input),
    };
    let status = result.unwrap_or_else(|f| {
        log(&format!("{} error: {}", f.stage, f.reason));
        let _ = write_json(
            &json!({ "result": "invalid", "stage": f.stage, "reason": f.reason }),
            None,
        );
        Status::Invalid
    });
    ExitCode::from(status as u8)
}
