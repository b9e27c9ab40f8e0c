use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gogauto::automata::{async_to_dot, async_to_text, fsa_to_dot, fsa_to_text};
use gogauto::gog::{GraphOfGroups, Letter};
use gogauto::gogfile;
use gogauto::structure::{
    build_multiplier, build_verified_multiplier, compute_eta, compute_zeta, default_k,
    exact_or_empirical, measure_kappa, verify_structure, DepartureRegistry, DepartureRequest,
    LanguageFsa, VerifyOptions,
};
use gogauto::Error;

/// Worker threads for the parallel sweeps; defaults to all cores.
const WORKERS_VAR: &str = "GOGAUTO_WORKERS";

#[derive(Parser)]
#[command(
    name = "gogauto",
    version,
    about = "Asynchronously automatic structures for graphs of groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Graph-of-groups description (`.gog` file).
    file: PathBuf,
    /// Upper bound on enumerated words and ball sizes.
    #[arg(long, default_value_t = 4_000_000)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check the input and print its diagnostics.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Edge-group ball radius for the injectivity check.
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Print the structure alphabet with the image of each letter.
    Letters {
        #[command(flatten)]
        common: Common,
    },
    /// Normal form of a word over the structure alphabet.
    NormalForm {
        #[command(flatten)]
        common: Common,
        word: String,
    },
    /// Build the normal-form language automaton.
    BuildFsa {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the line-based text format.
        #[arg(long)]
        text: Option<PathBuf>,
    },
    /// List accepted words in shortlex order.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_len: usize,
    },
    /// Compute eta, zeta and the measured fellow-traveller constant.
    Constants {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_len: usize,
    },
    /// Departure function, exact or from a scan of words up to --max-len.
    Departure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rmax: usize,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Fellow-traveller measurement per word length.
    Kappa {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_len: usize,
    },
    /// Build (and optionally verify) the multiplier of one letter.
    Multiplier {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        letter: String,
        /// Word-difference bound; escalation is only automatic without it.
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long)]
        verify: Option<usize>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        text: Option<PathBuf>,
    },
    /// Run every check and print PASS/FAIL per clause.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        rmax: usize,
    },
}

/// Exit status of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var(WORKERS_VAR) {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: {WORKERS_VAR} must be a positive integer, got `{n}`");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}

fn load(path: &Path) -> gogauto::Result<GraphOfGroups> {
    gogfile::load(path).map_err(|e| match e {
        Error::Parse { span, message } => {
            Error::Input(format!("{}:{span}: {message}", path.display()))
        }
        other => other,
    })
}

fn write_file(path: &Path, text: &str) -> gogauto::Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn parse_letter(g: &GraphOfGroups, s: &str) -> gogauto::Result<Letter> {
    let w = g.alphabet().parse_word(s)?;
    match w.as_slice() {
        [l] => Ok(*l),
        _ => Err(Error::Input(format!("`{s}` is not a single letter"))),
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cmd: Command) -> gogauto::Result<Outcome> {
    match cmd {
        Command::Validate { common, radius } => {
            let g = load(&common.file)?;
            print!("{}", g.validate(radius)?);
            println!("STATUS=PASS");
        }
        Command::Letters { common } => {
            let g = load(&common.file)?;
            let a = g.alphabet();
            println!("LETTERS={}", a.len());
            let width = a
                .names()
                .iter()
                .map(|n| n.chars().count())
                .max()
                .unwrap_or(0);
            for l in a.letters() {
                println!("{:width$}  {}", a.name(l), a.image(l));
            }
        }
        Command::NormalForm { common, word } => {
            let g = load(&common.file)?;
            let w = g.alphabet().parse_word(&word)?;
            let nf = g.normalize_word(&w)?;
            let a = g.alphabet();
            println!("WORD={}", a.format_word(&w));
            println!("NORMAL_FORM={}", a.format_word(&g.serialize(&nf)));
            println!("PATH={}", a.format_word(&g.serialize_path(&nf)));
            println!("TAIL={}", g.base_generators().format_word(&nf.tail));
            println!("LEVEL={}", nf.tree_level());
        }
        Command::BuildFsa { common, dot, text } => {
            let g = load(&common.file)?;
            let lang = LanguageFsa::build(&g);
            println!("STATES={}", lang.fsa.state_count());
            println!("EDGES={}", lang.fsa.edge_count());
            let c = lang.census;
            println!("CENSUS.ORIGIN={}", c.origin);
            println!("CENSUS.START={}", c.start);
            println!("CENSUS.SYLLABLE={}", c.syllable);
            println!("CENSUS.BETWEEN={}", c.between);
            println!("CENSUS.CONE={}", c.cone);
            if let Some(p) = dot {
                write_file(&p, &fsa_to_dot(&lang.fsa))?;
            }
            if let Some(p) = text {
                write_file(&p, &fsa_to_text(&lang.fsa))?;
            }
        }
        Command::Enumerate { common, max_len } => {
            let g = load(&common.file)?;
            let lang = LanguageFsa::build(&g);
            for w in lang.fsa.enumerate(max_len, common.cap)? {
                println!("{}", g.alphabet().format_word(&w));
            }
        }
        Command::Constants { common, max_len } => {
            let g = load(&common.file)?;
            let lang = LanguageFsa::build(&g);
            let eta = compute_eta(&g);
            println!("ETA={eta}");
            println!("ZETA={}", compute_zeta(&g, eta, common.cap)?);
            let k = measure_kappa(&g, &lang, max_len, common.cap)?;
            println!("KAPPA={}", k.kappa());
            println!("CHECK_LENGTH={max_len}");
        }
        Command::Departure {
            common,
            rmax,
            exact,
            max_len,
        } => {
            let g = load(&common.file)?;
            let lang = LanguageFsa::build(&g);
            let req = DepartureRequest {
                gog: &g,
                lang: &lang,
                r_max: rmax,
                cap: common.cap,
                max_len: max_len.unwrap_or(8),
            };
            let table = match (exact, max_len) {
                (true, Some(_)) => exact_or_empirical(&req)?,
                (true, None) => DepartureRegistry::default().compute("exact", &req)?,
                (false, Some(_)) => DepartureRegistry::default().compute("empirical", &req)?,
                (false, None) => {
                    return Err(Error::Input("departure needs --exact or --max-len".into()))
                }
            };
            print!("{table}");
            println!("DEPARTURE.MONOTONE={}", status(table.is_monotone()));
            if !table.is_monotone() {
                return Ok(Outcome::Fail);
            }
        }
        Command::Kappa { common, max_len } => {
            let g = load(&common.file)?;
            let lang = LanguageFsa::build(&g);
            let k = measure_kappa(&g, &lang, max_len, common.cap)?;
            for (n, v) in k.by_length.iter().enumerate() {
                println!("KAPPA.{n}={v}");
            }
            println!("KAPPA={}", k.kappa());
            println!("PAIRS={}", k.pairs);
            if let Some((v, w)) = &k.witness {
                let a = g.alphabet();
                println!("WITNESS={} / {}", a.format_word(v), a.format_word(w));
            }
            println!("KAPPA.STABLE={}", status(k.stabilized()));
        }
        Command::Multiplier {
            common,
            letter,
            k,
            verify,
            dot,
            text,
        } => {
            let g = load(&common.file)?;
            let lang = LanguageFsa::build(&g);
            let x = parse_letter(&g, &letter)?;
            let name = g.alphabet().name(x).to_string();
            let (k, escalations) = match k {
                Some(k) => (k, 0),
                None => {
                    let kappa_len = verify.unwrap_or(6).clamp(1, 7);
                    let kappa = measure_kappa(&g, &lang, kappa_len, common.cap)?.kappa();
                    (default_k(&g, kappa, compute_eta(&g), x), 3)
                }
            };
            let (mult, report) = match verify {
                Some(n) => {
                    let (m, r) =
                        build_verified_multiplier(&g, &lang, x, k, escalations, n, common.cap)?;
                    (m, Some(r))
                }
                None => (build_multiplier(&g, &lang, x, k, common.cap)?, None),
            };
            let shape = mult.automaton.validate_shape();
            println!("MULTIPLIER.{name}.K={}", mult.k);
            println!("MULTIPLIER.{name}.STATES={}", mult.automaton.state_count());
            println!("MULTIPLIER.{name}.EDGES={}", mult.automaton.edge_count());
            println!("MULTIPLIER.{name}.SHAPE={}", status(shape.passed()));
            for v in &shape.violations {
                println!("MULTIPLIER.{name}.SHAPE_VIOLATION={v}");
            }
            if let Some(p) = dot {
                write_file(&p, &async_to_dot(&mult.automaton))?;
            }
            if let Some(p) = text {
                write_file(&p, &async_to_text(&mult.automaton))?;
            }
            let mut ok = shape.passed();
            if let Some(r) = report {
                let a = g.alphabet();
                println!("MULTIPLIER.{name}.ESCALATIONS={}", r.escalations);
                println!("MULTIPLIER.{name}.PAIRS={}", r.accepted_pairs);
                println!("MULTIPLIER.{name}.FALSE_ACCEPTS={}", r.false_accepts.len());
                println!("MULTIPLIER.{name}.FALSE_REJECTS={}", r.false_rejects.len());
                if let Some((l, rr)) = r.false_accepts.first() {
                    println!(
                        "MULTIPLIER.{name}.FALSE_ACCEPT={} / {}",
                        a.format_word(l),
                        a.format_word(rr)
                    );
                }
                if let Some((l, rr)) = r.false_rejects.first() {
                    println!(
                        "MULTIPLIER.{name}.FALSE_REJECT={} / {}",
                        a.format_word(l),
                        a.format_word(rr)
                    );
                    if r.false_accepts.is_empty() {
                        println!("MULTIPLIER.{name}.SUGGESTED_K={}", r.k + 1);
                    }
                }
                ok &= r.passed();
                println!("MULTIPLIER.{name}.STATUS={}", status(ok));
            }
            if !ok {
                return Ok(Outcome::Fail);
            }
        }
        Command::Verify {
            common,
            max_len,
            rmax,
        } => {
            let g = load(&common.file)?;
            let mut opts = VerifyOptions::new(max_len);
            opts.r_max = rmax;
            opts.cap = common.cap;
            let report = verify_structure(&g, &opts)?;
            print!("{report}");
            if !report.passed() {
                return Ok(Outcome::Fail);
            }
        }
    }
    Ok(Outcome::Pass)
}
