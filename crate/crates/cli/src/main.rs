use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hgeom_core::certificate::{certify, verify, CertificateDocument};
use hgeom_core::config::{Config, Mode};
use hgeom_core::corpus::{generate, run_parallel, Family};
use hgeom_core::decide::{Conditionality, Verdict};
use hgeom_core::document::{parse_poly_document, InstanceDocument};
use hgeom_core::exactnum::rational::format_rational;
use hgeom_core::gammacanon::canonical_limit;
use hgeom_core::recognizers::assumption1::check_assumption1;
use hgeom_core::recognizers::classc::{
    check_radical_family, detect_shifted_even, recognize_classc, ClassC,
};
use hgeom_core::sequence::{brute_force_capped, terms};
use hgeom_core::strategy::StrategyRegistry;
use hgeom_core::Error;

const EXIT_UNSUPPORTED: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
const EXIT_INVALID: u8 = 5;

#[derive(Parser)]
#[command(
    name = "hgeom",
    version,
    about = "Membership and threshold problems for hypergeometric sequences"
)]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Largest precision in bits any enclosure may use.
    #[arg(long, global = true, value_name = "BITS")]
    precision_cap: Option<u64>,
    /// Largest index any exact scan may reach.
    #[arg(long, global = true, value_name = "N")]
    scan_cap: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and print its certificate.
    Decide {
        file: PathBuf,
        /// Limit strategy; overrides the document's mode.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        /// Shorthand for `--mode conditional`.
        #[arg(long, conflicts_with = "mode")]
        conditional: bool,
        /// Tag every conditional-path comparison as conditional.
        #[arg(long)]
        no_degeneration: bool,
        /// Write the certificate here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print the first terms exactly.
    Eval {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        terms: u64,
    },
    /// Brute-force scan of u_0 .. u_{N-1}.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        upto: u64,
    },
    /// Print the canonical form of the limit and an enclosure.
    Canon {
        file: PathBuf,
        #[arg(long, default_value_t = 128)]
        bits: u64,
    },
    /// Report the structural classes of a polynomial.
    Recognize {
        polyfile: PathBuf,
        /// Print the matching certificate as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write seeded instance files for one family.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, short)]
        out: PathBuf,
        /// Also decide every instance and write its certificate.
        #[arg(long)]
        certify: bool,
    },
    /// Replay a certificate.
    Verify { cert: PathBuf },
    /// List the registered limit strategies.
    Strategies,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_unsupported() || matches!(e, Error::WrongClass(_)) {
            EXIT_UNSUPPORTED
        } else if e.is_resource() {
            EXIT_RESOURCE
        } else if matches!(e, Error::Parse(_) | Error::InvalidInstance(_)) {
            EXIT_PARSE
        } else {
            EXIT_INVALID
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        code: EXIT_INVALID,
        message: format!("{}: {e}", path.display()),
    })
}

fn load(path: &Path) -> Result<InstanceDocument, Failure> {
    InstanceDocument::parse(&read(path)?).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })
}

fn verdict_code(v: &Verdict) -> u8 {
    match (v.outcome.is_positive(), v.conditionality) {
        (true, Conditionality::Unconditional) => 0,
        (false, Conditionality::Unconditional) => 1,
        (true, Conditionality::ConditionalOnSchanuel) => 10,
        (false, Conditionality::ConditionalOnSchanuel) => 11,
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mut cfg = Config::from_env().map_err(|e| Failure {
        code: EXIT_PARSE,
        message: e.to_string(),
    })?;
    if let Some(c) = cli.caps.precision_cap {
        cfg.precision_cap = c;
    }
    if let Some(c) = cli.caps.scan_cap {
        cfg.scan_cap = c;
    }
    let registry = StrategyRegistry::with_defaults();
    match cli.command {
        Command::Decide {
            file,
            mode,
            conditional,
            no_degeneration,
            out,
        } => {
            let doc = load(&file)?;
            cfg.mode = if conditional {
                Mode::Conditional
            } else {
                mode.or(doc.mode).unwrap_or_default()
            };
            cfg.degeneration = !no_degeneration;
            let cert = certify(&doc.instance()?, &cfg, &registry)?;
            eprintln!("{}", cert.verdict);
            match out {
                Some(path) => write(&path, &cert.to_json())?,
                None => println!("{}", cert.to_json()),
            }
            Ok(verdict_code(&cert.verdict))
        }
        Command::Eval { file, terms: n } => {
            let inst = load(&file)?.instance()?;
            for (i, u) in terms(&inst, n, cfg.scan_cap)?.iter().enumerate() {
                println!("u_{i} = {}", format_rational(u));
            }
            Ok(0)
        }
        Command::Oracle { file, upto } => {
            let inst = load(&file)?.instance()?;
            println!("{}", brute_force_capped(&inst, upto, cfg.scan_cap)?);
            Ok(0)
        }
        Command::Canon { file, bits } => {
            let inst = load(&file)?.instance()?;
            let c = canonical_limit(&inst)?;
            println!("{c}");
            println!("value = {}", c.value_expr());
            println!(
                "enclosure ({bits} bits) = {}",
                c.enclosure(bits, cfg.precision_cap.max(bits))?
            );
            Ok(0)
        }
        Command::Recognize { polyfile, json } => {
            let text = read(&polyfile)?;
            let f = parse_poly_document(&text).map_err(|e| Failure {
                code: EXIT_PARSE,
                message: e.to_string(),
            })?;
            let a = check_assumption1(&f)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&a).expect("serializable")
                );
                return Ok(0);
            }
            println!("{a}");
            if f.is_monic() {
                match recognize_classc(&f.to_q()) {
                    ClassC::Witness(w) => println!("class C: {}", w.describe()),
                    ClassC::Linear(r) => println!("class C: rational root {}", format_rational(&r)),
                    ClassC::NotInC => println!("class C: no"),
                }
            }
            if let Some(rho) = detect_shifted_even(&f) {
                println!("shifted even: f(x + {}) is even", format_rational(&rho));
            }
            println!("radical family: {}", check_radical_family(&f));
            Ok(0)
        }
        Command::Corpus {
            seed,
            count,
            family,
            out,
            certify: with_certs,
        } => {
            fs::create_dir_all(&out).map_err(|e| Failure {
                code: EXIT_INVALID,
                message: format!("{}: {e}", out.display()),
            })?;
            let entries = generate(seed, count, family);
            for e in &entries {
                let path = out.join(format!("{}.json", e.name));
                write(
                    &path,
                    &InstanceDocument::from_instance(&e.instance, None).to_json(),
                )?;
                println!("{}", path.display());
            }
            if with_certs {
                let certs = run_parallel(&entries, |e| certify(&e.instance, &cfg, &registry));
                for (e, c) in entries.iter().zip(certs) {
                    let path = out.join(format!("{}.cert.json", e.name));
                    match c {
                        Ok(c) => write(&path, &c.to_json())?,
                        Err(err) => eprintln!("{}: {err}", e.name),
                    }
                }
            }
            Ok(0)
        }
        Command::Verify { cert } => {
            let c = CertificateDocument::parse(&read(&cert)?)?;
            let checks = verify(&c, &cfg).map_err(|e| Failure {
                code: EXIT_INVALID,
                message: e.to_string(),
            })?;
            for line in &checks {
                println!("ok  {line}");
            }
            println!("certificate valid: {}", c.verdict);
            Ok(0)
        }
        Command::Strategies => {
            for name in registry.names() {
                println!("{name}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
