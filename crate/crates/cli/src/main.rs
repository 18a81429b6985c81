//! `paratower`: build and re-check tower, coloring, comparison and isometry
//! certificates.
//!
//! Exit codes: 0 pass, 2 a check or construction failed, 3 malformed input,
//! 64 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use paratower::certificate::{Kind, TowersPayload};
use paratower::comparison::{depth_cap_from_env, Witness};
use paratower::towers::{
    extension_towers, f2_strengthened_towers, f2_towers, finite_normal_ext_towers, more_towers, towers_from_filling, union_towers,
    boundary_filling,
};
use paratower::{
    boost, build_comparison, build_isometry, compose, configure_threads, greedy_color, verify_envelope, BoundaryPoint, CayleyGroup, Clopen,
    ComparisonInstance, Element, Envelope, Error, FreeGroup, IsometryParams, TowerFamily, Transversal, VerifyMode, VerifyReport, Word,
};

const EXIT_FAIL: u8 = 2;
const EXIT_MALFORMED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "paratower", version, about = "Paradoxical towers, boundary comparison and crossed-product isometries with exact certificates")]
struct Cli {
    /// Write the certificate to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Recorded in the certificate; every construction is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for ball sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Record wall-clock time in the certificate (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
    /// Suppress the report on stdout.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Ball,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtKind {
    /// `F₂ × ℤ/k` from towers on `F₂`.
    Finite,
    /// `F₂ × F₂` from towers on both factors.
    Extension,
}

#[derive(Subcommand)]
enum Command {
    /// Explicit towers in F₂ for a finite set D.
    F2Towers {
        #[arg(long = "D", default_value = "e,a,A,b,B", allow_hyphen_values = true)]
        d: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        /// All three towers with the complement list.
        #[arg(long)]
        strengthened: bool,
    },
    /// m independent copies of the F₂ towers.
    MoreTowers {
        #[arg(long = "D", default_value = "e,a,A,b,B")]
        d: String,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        radius: usize,
    },
    /// Towers for F₂ × ℤ/k or F₂ × F₂.
    ExtTowers {
        #[arg(long, value_enum)]
        kind: ExtKind,
        /// Translating set; defaults to the generators with the identity.
        #[arg(long = "F")]
        f: Option<String>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Towers for F₃ as a union of cosets of ⟨a, b⟩.
    UnionTowers {
        #[arg(long = "D", default_value = "e,a,A,b,B")]
        d: String,
        /// `shortest:L` or `explicit:e,c,C,...`
        #[arg(long, default_value = "shortest:5")]
        transversal: String,
        #[arg(long, default_value_t = 5)]
        radius: usize,
    },
    /// Towers from the filling boundary action of F₂.
    FillingTowers {
        #[arg(long = "D", default_value = "e,a,A,b,B")]
        d: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// `ab-powers` or `periodic:HEAD:CYCLE`
        #[arg(long, default_value = "ab-powers")]
        point: String,
        #[arg(long, default_value_t = 8)]
        radius: usize,
    },
    /// Verify a tower family (a towers certificate or a bare family).
    VerifyTowers {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 8)]
        radius: usize,
    },
    /// Greedy coloring of Cay(K, E²) for K = ℤ or ℤ/k.
    Color {
        #[arg(long, default_value = "Z")]
        group: String,
        #[arg(long = "E", default_value = "-1,0,1", allow_hyphen_values = true)]
        e: String,
        /// Half-width of the recorded window for ℤ.
        #[arg(long, default_value_t = 100)]
        window: i64,
    },
    /// Witness X ≺ U for a clopen U.
    Compare {
        /// Cylinder words of U, comma separated.
        #[arg(long = "U", default_value = "ab")]
        u: String,
        /// Order of the finite factor (1 for ∂F₂ itself).
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        fiber: usize,
        /// Also write the final witness as its own certificate.
        #[arg(long, value_name = "PATH")]
        witness_out: Option<PathBuf>,
    },
    /// Compose two witness certificates.
    Compose { first: PathBuf, second: PathBuf },
    /// Turn an r-comparison witness into a single-copy witness.
    Boost {
        input: PathBuf,
        /// Cylinder words of the new target; defaults to the old one.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 0)]
        fiber: usize,
    },
    /// The non-unitary isometry in the crossed product.
    Isometry {
        #[arg(long, default_value = "a")]
        h: String,
        #[arg(long = "N", default_value_t = 200)]
        n: usize,
    },
    /// Re-check any certificate.
    Verify { input: PathBuf },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }

    fn malformed(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_MALFORMED, message: e.to_string() }
    }
}

/// Bad parameters are usage errors; anything else a construction hits is a
/// failed check.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Invalid(_) | Error::RadiusTooLarge { .. } => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn words(s: &str) -> CliResult<Vec<Word>> {
    s.split(',').map(Word::parse).collect::<Result<_, _>>().map_err(Failure::usage)
}

fn cylinders(s: &str, k: usize, fiber: usize) -> CliResult<Clopen> {
    if fiber >= k {
        return Err(Failure::usage(format!("fiber {fiber} out of range for k = {k}")));
    }
    let ws = words(s)?;
    Ok(Clopen::from_cylinders(k, ws.iter().map(|w| (fiber, w))))
}

fn verify_mode(mode: Mode, radius: usize) -> VerifyMode {
    match mode {
        Mode::Exact => VerifyMode::Exact,
        Mode::Ball => VerifyMode::Ball { radius },
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) })?;
    serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn read_envelope(path: &Path) -> CliResult<Envelope> {
    serde_json::from_value(read_json(path)?).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn read_witness(path: &Path) -> CliResult<Witness> {
    let env = read_envelope(path)?;
    if env.kind != Kind::Witness {
        return Err(Failure::malformed(format!("{} is a {:?} certificate, not a witness", path.display(), env.kind)));
    }
    let report = verify_envelope(&env).map_err(Failure::malformed)?;
    if !report.pass() {
        return Err(Failure { code: EXIT_FAIL, message: format!("{} does not verify", path.display()) });
    }
    env.payload().map_err(Failure::malformed)
}

fn parse_point(s: &str) -> CliResult<BoundaryPoint> {
    match s.split(':').collect::<Vec<_>>().as_slice() {
        ["ab-powers"] => Ok(BoundaryPoint::AbPowers),
        ["periodic", head, cycle] => {
            let head = if head.is_empty() { Word::identity() } else { Word::parse(head).map_err(Failure::usage)? };
            BoundaryPoint::periodic(head, Word::parse(cycle).map_err(Failure::usage)?).map_err(Failure::usage)
        }
        _ => Err(Failure::usage(format!("unknown point {s:?}"))),
    }
}

fn parse_transversal(s: &str) -> CliResult<Transversal> {
    match s.split_once(':') {
        Some(("shortest", n)) => Ok(Transversal::Shortest { max_len: n.parse().map_err(Failure::usage)? }),
        Some(("explicit", reps)) => Ok(Transversal::Explicit { reps: words(reps)? }),
        _ => Err(Failure::usage(format!("unknown transversal {s:?}"))),
    }
}

fn parse_cayley(s: &str) -> CliResult<CayleyGroup> {
    serde_json::from_value(Value::String(s.into())).map_err(Failure::usage)
}

fn parse_ints(s: &str) -> CliResult<Vec<i64>> {
    s.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(Failure::usage)
}

fn towers_payload(family: TowerFamily, mode: VerifyMode, complements: Option<Vec<Word>>) -> CliResult<(Kind, Value)> {
    let report = family.verify(mode)?;
    let payload = TowersPayload { family, report, complements };
    Ok((Kind::Towers, serde_json::to_value(&payload).map_err(Failure::malformed)?))
}

fn default_finite_f(k: u32) -> Vec<Element> {
    FreeGroup::F2
        .ball(1)
        .map(|b| b.words)
        .unwrap_or_default()
        .into_iter()
        .flat_map(|w| (0..k).map(move |r| Element::pair(w.clone(), r, k)))
        .collect()
}

fn default_product_f() -> Vec<Element> {
    ["(e,e)", "(a,e)", "(b,e)", "(e,a)", "(e,b)"].iter().map(|s| Element::parse(s).expect("literal")).collect()
}

/// Output of a subcommand: the certificate kind and payload, or a verdict
/// on an existing certificate.
enum Outcome {
    Built { kind: Kind, payload: Value, extra: Option<(PathBuf, Kind, Value)> },
    Checked(VerifyReport),
}

fn run(cmd: Command) -> CliResult<Outcome> {
    let built = |(kind, payload): (Kind, Value)| Outcome::Built { kind, payload, extra: None };
    Ok(match cmd {
        Command::F2Towers { d, mode, radius, strengthened } => {
            let d = words(&d)?;
            let mode = verify_mode(mode, radius);
            if strengthened {
                let s = f2_strengthened_towers(&d)?;
                built(towers_payload(s.family, mode, Some(s.complements))?)
            } else {
                built(towers_payload(f2_towers(&d)?, mode, None)?)
            }
        }
        Command::MoreTowers { d, m, mode, radius } => {
            let family = more_towers(f2_towers, m, &words(&d)?)?;
            built(towers_payload(family, verify_mode(mode, radius), None)?)
        }
        Command::ExtTowers { kind, f, k, radius } => match kind {
            ExtKind::Finite => {
                let f = match f {
                    Some(s) => Element::parse_list(&s).map_err(Failure::usage)?,
                    None => default_finite_f(k),
                };
                built(towers_payload(finite_normal_ext_towers(f2_towers, &f, k)?, VerifyMode::Exact, None)?)
            }
            ExtKind::Extension => {
                let f = match f {
                    Some(s) => Element::parse_list(&s).map_err(Failure::usage)?,
                    None => default_product_f(),
                };
                let family = extension_towers(f2_towers, f2_towers, &f, radius)?;
                built(towers_payload(family, VerifyMode::Ball { radius }, None)?)
            }
        },
        Command::UnionTowers { d, transversal, radius } => {
            let family = union_towers(f2_towers, &words(&d)?, parse_transversal(&transversal)?, radius)?;
            built(towers_payload(family, VerifyMode::Ball { radius }, None)?)
        }
        Command::FillingTowers { d, n, point, radius } => {
            let t = towers_from_filling(&words(&d)?, n, parse_point(&point)?, boundary_filling, radius)?;
            built(towers_payload(t.family, VerifyMode::Ball { radius }, None)?)
        }
        Command::VerifyTowers { input, mode, radius } => {
            let value = read_json(&input)?;
            let (family, recorded) = if value.get("kind").is_some() {
                let env: Envelope = serde_json::from_value(value).map_err(Failure::malformed)?;
                let p: TowersPayload = env.payload().map_err(Failure::malformed)?;
                (p.family, Some(p.report.mode))
            } else {
                (serde_json::from_value::<TowerFamily>(value).map_err(Failure::malformed)?, None)
            };
            let mode = mode.map(|m| verify_mode(m, radius)).or(recorded).unwrap_or(VerifyMode::Exact);
            built(towers_payload(family, mode, None)?)
        }
        Command::Color { group, e, window } => {
            let c = greedy_color(parse_cayley(&group)?, &parse_ints(&e)?)?;
            built((Kind::Coloring, serde_json::to_value(c.snapshot(window)).map_err(Failure::malformed)?))
        }
        Command::Compare { u, k, fiber, witness_out } => {
            if k == 0 {
                return Err(Failure::usage("k must be positive"));
            }
            let target = cylinders(&u, k as usize, fiber)?;
            let cert = build_comparison(ComparisonInstance { k }, &target, depth_cap_from_env())?;
            let extra = witness_out.map(|p| serde_json::to_value(&cert.boosted).map(|w| (p, Kind::Witness, w))).transpose().map_err(Failure::malformed)?;
            Outcome::Built { kind: Kind::Comparison, payload: serde_json::to_value(&cert).map_err(Failure::malformed)?, extra }
        }
        Command::Compose { first, second } => {
            let w = compose(&read_witness(&first)?, &read_witness(&second)?)?;
            built((Kind::Witness, serde_json::to_value(&w).map_err(Failure::malformed)?))
        }
        Command::Boost { input, target, fiber } => {
            let w = read_witness(&input)?;
            let v = match target {
                Some(s) => cylinders(&s, w.fiber_count(), fiber)?,
                None => w.targets.first().cloned().ok_or_else(|| Failure::malformed("witness has no target"))?,
            };
            let b = boost(&w, &v)?;
            built((Kind::Witness, serde_json::to_value(&b).map_err(Failure::malformed)?))
        }
        Command::Isometry { h, n } => {
            let params = IsometryParams { h: Word::parse(&h).map_err(Failure::usage)?, n };
            let cert = build_isometry(&params)?;
            built((Kind::Isometry, serde_json::to_value(&cert).map_err(Failure::malformed)?))
        }
        Command::Verify { input } => {
            let env = read_envelope(&input)?;
            Outcome::Checked(verify_envelope(&env).map_err(Failure::malformed)?)
        }
    })
}

fn write_envelope(path: &Path, env: &Envelope) -> CliResult<()> {
    let text = env.to_json().map_err(Failure::malformed)?;
    fs::write(path, text).map_err(|e| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn execute(cli: Cli) -> CliResult<bool> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        configure_threads(t)?;
    }
    let start = Instant::now();
    let elapsed = |timing: bool| timing.then(|| start.elapsed().as_millis() as u64);
    let report = match run(cli.command)? {
        Outcome::Checked(report) => report,
        Outcome::Built { kind, payload, extra } => {
            let env = Envelope::new(kind, cli.seed, &payload, elapsed(cli.timing))?;
            let report = verify_envelope(&env).map_err(Failure::malformed)?;
            if let Some(path) = &cli.json {
                write_envelope(path, &env)?;
            }
            if let Some((path, kind, payload)) = extra {
                write_envelope(&path, &Envelope::new(kind, cli.seed, &payload, elapsed(cli.timing))?)?;
            }
            report
        }
    };
    if !cli.quiet {
        print!("{}", report.render());
    }
    Ok(report.pass())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_lists() {
        assert_eq!(words("e,a,Ab").unwrap().len(), 3);
        assert!(words("e,e").unwrap().iter().all(Word::is_identity));
        assert_eq!(words("aA").err().map(|f| f.code), Some(EXIT_USAGE));
    }

    #[test]
    fn empty_cylinder_list_is_the_whole_fiber() {
        let u = cylinders("", 2, 1).unwrap();
        assert_eq!(u, Clopen::cylinder_in(2, 1, &Word::identity()));
        assert_eq!(cylinders("a", 2, 2).err().map(|f| f.code), Some(EXIT_USAGE));
    }

    #[test]
    fn option_parsers() {
        assert_eq!(parse_cayley("Z/5").ok(), Some(CayleyGroup::Cyclic(5)));
        assert!(parse_cayley("Z/0").is_err());
        assert_eq!(parse_ints("-1, 0,1").ok(), Some(vec![-1, 0, 1]));
        assert!(matches!(parse_transversal("shortest:4"), Ok(Transversal::Shortest { max_len: 4 })));
        assert!(parse_transversal("longest:4").is_err());
        assert!(matches!(parse_point("ab-powers"), Ok(BoundaryPoint::AbPowers)));
        assert!(parse_point("periodic::ab").is_ok());
        assert!(parse_point("periodic:a:").is_err());
    }
}
