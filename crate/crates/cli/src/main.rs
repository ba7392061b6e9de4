//! `fredkit` command-line front end.
//!
//! Exit codes: 0 success, 2 domain error (error object on stdout), 1 usage,
//! I/O or malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use fredkit::bfredholm::{bclassify, dis, stabilization_check};
use fredkit::doc::{self, DocError};
use fredkit::exactcore::ExactMatrix;
use fredkit::family::{
    family_index, homotopy_check, is_weyl_family, local_constancy_check, synthesize_family,
};
use fredkit::fredholm::{
    is_fredholm, nullity_defect, FiniteSection, NullityMode, DEFAULT_FS_SIZE, DEFAULT_FS_TOL,
};
use fredkit::opmodel::{pad_with_identity_blocks, Block};
use fredkit::pathconnect::{connect_equal_index, tbp_demo, verify_path, ConnectMode, DEFAULT_GRID};
use fredkit::random;
use fredkit::weyl::{check_weyl_browder, spectral_report};

#[derive(Parser, Debug)]
#[command(
    name = "fredkit",
    version,
    about = "Exact Fredholm and B-Fredholm index computations"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Bfredholm,
    FredholmPreserving,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct FsArgs {
    /// Finite-section truncation size for uncertified nullity estimates.
    #[arg(long, default_value_t = DEFAULT_FS_SIZE)]
    fs_size: usize,
    /// Relative singular-value threshold for finite sections.
    #[arg(long, default_value_t = DEFAULT_FS_TOL)]
    fs_tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fredholm verdict, index, nullity and defect of an operator.
    OpIndex {
        file: PathBuf,
        #[command(flatten)]
        fs: FsArgs,
    },
    /// B-Fredholm verdict of an operator.
    OpBindex { file: PathBuf },
    /// Degree of stable iteration of an operator.
    OpDis {
        file: PathBuf,
        /// Also run the stabilization check (single finite block only).
        #[arg(long)]
        stabilization: bool,
    },
    /// Spectral sets of a normal diagonal operator or a finite block.
    OpSpectral { file: PathBuf },
    /// Index vector of an operator family.
    FamilyIndex {
        file: PathBuf,
        /// Random perturbation trials below the certified margin.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weyl-family test (operator family) or Weyl/Browder check (spectral family).
    FamilyWeyl { file: PathBuf },
    /// Constant family realizing an index vector on a complex.
    FamilySynthesize { complex: PathBuf, indices: PathBuf },
    /// Verifies a sampled homotopy H between families S and T.
    HomotopyCheck { h: PathBuf, s: PathBuf, t: PathBuf },
    /// The path t ↦ [1] ⊕ T_{t·z⁻¹} and its index profile.
    PathTbp {
        #[arg(long, default_value_t = 10)]
        grid: usize,
        /// Include the path document in the output.
        #[arg(long)]
        emit_path: bool,
    },
    /// Sampled path between two operators of equal B-Fredholm index.
    PathConnect {
        s: PathBuf,
        t: PathBuf,
        /// Steps per path segment.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Mode::Bfredholm)]
        mode: Mode,
        /// Pad to a common signature: S ⊕ I and I ⊕ T.
        #[arg(long)]
        pad_identity: bool,
    },
    /// Classifies every sample of a path document.
    PathVerify { file: PathBuf },
}

enum Failure {
    /// Usage, I/O or malformed input.
    Input(Value),
    /// The computation ran and the answer is an error.
    Domain(Value),
}

type Outcome = Result<Value, Failure>;

fn error_object(code: &str, message: impl ToString, extra: Value) -> Value {
    let mut e = Map::new();
    e.insert("code".into(), json!(code));
    e.insert("message".into(), json!(message.to_string()));
    if let Value::Object(x) = extra {
        e.extend(x);
    }
    json!({ "error": Value::Object(e) })
}

fn domain(code: &str, message: impl ToString) -> Failure {
    Failure::Domain(error_object(code, message, Value::Null))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::Input(error_object(
            "IoError",
            format!("{}: {e}", path.display()),
            json!({ "file": path.display().to_string() }),
        ))
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, DocError>) -> Result<T, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e| {
        Failure::Input(error_object(
            "MalformedDocument",
            &e,
            json!({ "file": path.display().to_string(), "location": e.location }),
        ))
    })
}

fn op_index(file: &Path, fs: FsArgs) -> Outcome {
    let a = load(file, doc::parse_operator)?;
    let v = is_fredholm(&a);
    if !v.is_fredholm {
        return Err(Failure::Domain(error_object(
            "NotFredholm",
            format!("operator is not Fredholm: {}", v.reason),
            json!({ "reason": v.reason.as_str(), "hint": "try op-bindex" }),
        )));
    }
    let nd = nullity_defect(
        &a,
        NullityMode::Exact(FiniteSection {
            size: fs.fs_size,
            tol: fs.fs_tol,
        }),
    )
    .map_err(|e| domain(e.code(), &e))?;
    Ok(json!({
        "index": v.index,
        "nullity": nd.nullity,
        "defect": nd.defect,
        "certified": nd.certified,
    }))
}

fn op_dis(file: &Path, stabilization: bool) -> Outcome {
    let a = load(file, doc::parse_operator)?;
    let mut out = json!({ "dis": doc::dis_to_json(&dis(&a)) });
    if stabilization {
        let m: &ExactMatrix = match a.blocks() {
            [Block::Finite(m)] => m,
            _ => {
                return Err(domain(
                    "Unsupported",
                    "--stabilization needs a single finite block",
                ))
            }
        };
        let r = stabilization_check(m).map_err(|e| domain("StabilizationUnsupported", e))?;
        out["stabilization"] = doc::stabilization_to_json(&r);
    }
    Ok(out)
}

fn family_index_cmd(file: &Path, trials: usize, seed: u64) -> Outcome {
    let f = load(file, doc::parse_family)?;
    let u = family_index(&f).map_err(|e| Failure::Domain(family_error(&e)))?;
    let mut out = doc::index_vector_to_json(&u);
    if trials > 0 {
        let r = local_constancy_check(&f, trials, &mut random::rng(seed))
            .map_err(|e| Failure::Domain(family_error(&e)))?;
        out["local_constancy"] = doc::local_constancy_to_json(&r);
    }
    Ok(out)
}

fn family_error(e: &fredkit::family::FamilyError) -> Value {
    use fredkit::family::FamilyError as E;
    let extra = match e {
        E::NonFredholmAt {
            vertex,
            layer,
            reason,
        } => json!({ "vertex": vertex, "layer": layer, "reason": reason.as_str() }),
        E::IndexMismatchWithinComponent {
            u,
            v,
            index_u,
            index_v,
        }
        | E::IndexChangedAlongHomotopy {
            u,
            v,
            index_u,
            index_v,
        } => {
            json!({ "edge": [u, v], "indices": [index_u, index_v] })
        }
        E::EndpointMismatch { layer, vertex } => json!({ "layer": layer, "vertex": vertex }),
        _ => Value::Null,
    };
    error_object(e.code(), e, extra)
}

fn family_weyl(file: &Path) -> Outcome {
    let text = read(file)?;
    let is_operator_family = doc::parse_json(&text)
        .ok()
        .and_then(|v| {
            v.get("operators")?
                .as_object()?
                .values()
                .next()
                .map(|o| o.get("blocks").is_some())
        })
        .unwrap_or(false);
    if is_operator_family {
        let f = load(file, doc::parse_family)?;
        let index = family_index(&f).ok().map(|u| doc::index_vector_to_json(&u));
        Ok(json!({ "is_weyl_family": is_weyl_family(&f), "index": index }))
    } else {
        let f = load(file, doc::parse_spectral_family)?;
        Ok(doc::weyl_check_to_json(&check_weyl_browder(&f)))
    }
}

fn path_connect(s: &Path, t: &Path, grid: usize, mode: Mode, pad: bool) -> Outcome {
    let a = load(s, doc::parse_operator)?;
    let b = load(t, doc::parse_operator)?;
    let (a, b) = if pad {
        pad_with_identity_blocks(&a, &b)
    } else {
        (a, b)
    };
    let mode = match mode {
        Mode::Bfredholm => ConnectMode::BFredholm,
        Mode::FredholmPreserving => ConnectMode::FredholmPreserving,
    };
    let p = connect_equal_index(&a, &b, grid, mode).map_err(|e| domain(e.code(), &e))?;
    Ok(json!({
        "mode": mode.as_str(),
        "report": doc::path_report_to_json(&verify_path(&p)),
        "path": doc::path_to_json(&p),
    }))
}

fn execute(cmd: &Command) -> Outcome {
    match cmd {
        Command::OpIndex { file, fs } => op_index(file, *fs),
        Command::OpBindex { file } => Ok(doc::bverdict_to_json(&bclassify(&load(
            file,
            doc::parse_operator,
        )?))),
        Command::OpDis {
            file,
            stabilization,
        } => op_dis(file, *stabilization),
        Command::OpSpectral { file } => Ok(doc::spectral_report_to_json(&spectral_report(&load(
            file,
            doc::parse_spectral_input,
        )?))),
        Command::FamilyIndex { file, trials, seed } => family_index_cmd(file, *trials, *seed),
        Command::FamilyWeyl { file } => family_weyl(file),
        Command::FamilySynthesize { complex, indices } => {
            let c = load(complex, doc::parse_complex)?;
            let u = load(indices, |t| doc::parse_index_vector(t, &c))?;
            let f = synthesize_family(&c, &u).map_err(|e| Failure::Domain(family_error(&e)))?;
            Ok(doc::family_to_json(&f))
        }
        Command::HomotopyCheck { h, s, t } => {
            let (h, s, t) = (
                load(h, doc::parse_family)?,
                load(s, doc::parse_family)?,
                load(t, doc::parse_family)?,
            );
            let r = homotopy_check(&h, &s, &t).map_err(|e| Failure::Domain(family_error(&e)))?;
            Ok(doc::homotopy_report_to_json(&r))
        }
        Command::PathTbp { grid, emit_path } => {
            if *grid == 0 {
                return Err(Failure::Input(error_object(
                    "Usage",
                    "--grid must be at least 1",
                    Value::Null,
                )));
            }
            let (p, r) = tbp_demo(*grid);
            let mut out = doc::path_report_to_json(&r);
            if *emit_path {
                out["path"] = doc::path_to_json(&p);
            }
            Ok(out)
        }
        Command::PathConnect {
            s,
            t,
            grid,
            mode,
            pad_identity,
        } => path_connect(s, t, *grid, *mode, *pad_identity),
        Command::PathVerify { file } => Ok(doc::path_report_to_json(&verify_path(&load(
            file,
            doc::parse_path,
        )?))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Object(m) if m.contains_key("re") && m.len() <= 2 => {
            let re = m["re"].as_str().unwrap_or("0");
            let im = m.get("im").and_then(Value::as_str).unwrap_or("0");
            match im.strip_prefix('-') {
                Some(abs) => format!("{re}-{abs}i"),
                None => format!("{re}+{im}i"),
            }
        }
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    match v {
        Value::Array(_) => false,
        Value::Object(m) => m.contains_key("re") && m.len() <= 2,
        _ => true,
    }
}

/// Indented `key: value` rendering; arrays of scalars go on one line.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x)));
                } else if x.as_array().is_some_and(|a| a.iter().all(is_scalar)) {
                    let items: Vec<String> =
                        x.as_array().unwrap().iter().map(scalar_text).collect();
                    out.push_str(&format!("{pad}{k}: [{}]\n", items.join(", ")));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_text(x, indent + 1, out);
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(x)));
                } else {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    render_text(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn emit(v: &Value, format: Format) {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        Format::Text => {
            let mut s = String::new();
            render_text(v, 0, &mut s);
            s
        }
    };
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
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
    match execute(&cli.command) {
        Ok(v) => {
            emit(&v, cli.format);
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(v)) => {
            emit(&v, cli.format);
            ExitCode::from(2)
        }
        Err(Failure::Input(v)) => {
            emit(&v, cli.format);
            ExitCode::from(1)
        }
    }
}
