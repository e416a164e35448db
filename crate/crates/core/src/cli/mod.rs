//! Command-line interface.
//!
//! Exit codes: 0 affirmative verdict or success, 1 negative verdict,
//! 2 inconclusive, 3 input error.

mod document;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebraic::{format_rational, parse_rational};
use crate::exppoly::{default_im_max, find_zeros, ExponentialPolynomial};
use crate::fourier::{self, Equality};
use crate::ifs_core::{self, check_derived_weights, is_derived_from, DerivedVerdict, SscVerdict};
use crate::ritt::{self, ConditionZ, EpVerdict, HlcVerdict, MinimalityVerdict};

pub use document::{parse_document, DocumentError, IfsDocument};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Weighted IFS toolkit: composition, Fourier transforms, zeros and minimality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Product,
    Recursive,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compose two systems: maps φ_i∘ψ_j with weights p_i q_j
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// k-fold self-composition
    Iterate {
        a: PathBuf,
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Exact moments M_0..M_N of the self-similar measure
    Moments {
        a: PathBuf,
        #[arg(short = 'n', default_value_t = 10)]
        n: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Fourier transform on a grid
    Fourier {
        a: PathBuf,
        #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
        min: f64,
        #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
        max: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Mode::Product)]
        mode: Mode,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Zeros of the exponential polynomial of a homogeneous system
    Zeros {
        a: PathBuf,
        #[arg(long)]
        im_max: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Zero branch of condition (Z)
    CheckZ {
        a: PathBuf,
        #[arg(long)]
        im_max: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Commensurability of the contraction ratios of two homogeneous systems
    CheckHlc { a: PathBuf, b: PathBuf },
    /// Irreducibility of the normalized exponential polynomial
    Irreducible { a: PathBuf },
    /// Whether CANDIDATE is an iteration of BASE
    Minimal { base: PathBuf, candidate: PathBuf },
    /// Whether every CANDIDATE map is a composite of BASE maps
    Derived {
        base: PathBuf,
        candidate: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
    },
    /// Compare two self-similar measures by moments and Fourier values
    Equal {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 20)]
        moments: usize,
        #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
        grid_min: f64,
        #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
        grid_max: f64,
        #[arg(long, default_value_t = 41)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Four-map system {f, f∘f, f∘g, g} against its two-map base
    VerifyExample4 {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Strong separation condition
    Ssc {
        a: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
}

/// What a command printed and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn report(stdout: String, code: i32) -> Self {
        Self { stdout, stderr: String::new(), code }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        Self { stdout: String::new(), stderr: format!("error: {message}\n"), code: EXIT_INPUT }
    }
}

struct InputError(String);

impl<E: std::error::Error> From<E> for InputError {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

type Res<T> = Result<T, InputError>;

fn load(path: &Path) -> Res<IfsDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn label(doc: &IfsDocument, path: &Path) -> String {
    doc.name.clone().unwrap_or_else(|| path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned()))
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Writes `data` to `output` and reports where, or returns the data itself.
fn emit(output: &Option<PathBuf>, data: &str, summary: &str) -> Res<String> {
    match output {
        Some(path) => {
            write_file(path, data)?;
            Ok(format!("{summary}\nwrote {}\n", path.display()))
        }
        None => Ok(data.to_string()),
    }
}

/// Runs the command line and returns the report instead of printing it.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_INPUT }
            } else {
                Outcome::report(text, EXIT_YES)
            };
        }
    };
    match execute(cli.command) {
        Ok(o) => o,
        Err(InputError(m)) => Outcome::input_error(m),
    }
}

fn execute(command: Command) -> Res<Outcome> {
    match command {
        Command::Compose { a, b, output } => {
            let (da, db) = (load(&a)?, load(&b)?);
            let ifs = ifs_core::compose(&da.ifs, &db.ifs)?;
            let doc = IfsDocument::new(Some(format!("compose({}, {})", label(&da, &a), label(&db, &b))), ifs);
            let out = emit(&output, &doc.to_string(), &format!("composed system with {} maps", doc.ifs.len()))?;
            Ok(Outcome::report(out, EXIT_YES))
        }
        Command::Iterate { a, n, output } => {
            let da = load(&a)?;
            let ifs = ifs_core::iterate(&da.ifs, n)?;
            let doc = IfsDocument::new(Some(format!("iterate({}, {n})", label(&da, &a))), ifs);
            let out = emit(&output, &doc.to_string(), &format!("iterated system with {} maps", doc.ifs.len()))?;
            Ok(Outcome::report(out, EXIT_YES))
        }
        Command::Moments { a, n, output } => {
            let da = load(&a)?;
            let m = fourier::moments(&da.ifs, n)?;
            let mut out = m.to_string();
            if let Some(path) = &output {
                write_file(path, &m.to_csv())?;
                writeln!(out, "wrote {}", path.display()).ok();
            }
            Ok(Outcome::report(out, EXIT_YES))
        }
        Command::Fourier { a, min, max, samples, tol, mode, output } => {
            let da = load(&a)?;
            let eval = match mode {
                Mode::Product => fourier::fourier_product,
                Mode::Recursive => fourier::fourier_recursive,
            };
            let values = fourier::grid(min, max, samples)
                .into_iter()
                .map(|xi| eval(&da.ifs, xi, tol))
                .collect::<Result<Vec<_>, _>>()?;
            let worst = values.iter().map(|s| s.error_bound).fold(0.0, f64::max);
            let summary = format!("fourier samples={} mode={mode:?} max_error_bound={worst:e}", values.len()).to_lowercase();
            Ok(Outcome::report(emit(&output, &fourier::samples_to_csv(&values), &summary)?, EXIT_YES))
        }
        Command::Zeros { a, im_max, tol, output } => {
            let da = load(&a)?;
            let f = ExponentialPolynomial::from_weighted_ifs(&da.ifs)?;
            let im_max = im_max.unwrap_or_else(|| default_im_max(&f));
            let report = find_zeros(&f, im_max, tol)?;
            let n = f.normalize().poly;
            let mut out = String::new();
            writeln!(out, "polynomial: {n}").ok();
            writeln!(out, "strip: re in [{:e}, {:e}]", report.strip.re_lo, report.strip.re_hi).ok();
            let w = report.window;
            writeln!(out, "window: re in [{:e}, {:e}] im in [{:e}, {:e}]", w.re_lo, w.re_hi, w.im_lo, w.im_hi).ok();
            writeln!(
                out,
                "zeros={} total_multiplicity={} complete_in_window={}",
                report.zeros.len(),
                report.total_multiplicity(),
                report.complete_in_window
            )
            .ok();
            match &output {
                Some(path) => {
                    write_file(path, &report.to_csv())?;
                    writeln!(out, "wrote {}", path.display()).ok();
                }
                None => out.push_str(&report.to_csv()),
            }
            let code = if report.complete_in_window { EXIT_YES } else { EXIT_INCONCLUSIVE };
            Ok(Outcome::report(out, code))
        }
        Command::CheckZ { a, im_max, tol } => {
            let da = load(&a)?;
            let v = ritt::check_condition_z(&da.ifs, im_max, tol)?;
            let code = match v {
                ConditionZ::Satisfied(_) => EXIT_YES,
                ConditionZ::ZeroBranchFails { .. } => EXIT_NO,
                ConditionZ::Inconclusive(_) => EXIT_INCONCLUSIVE,
            };
            Ok(Outcome::report(format!("{v}\n"), code))
        }
        Command::CheckHlc { a, b } => {
            let (da, db) = (load(&a)?, load(&b)?);
            let v = ritt::check_hlc_pair(&da.ifs, &db.ifs)?;
            let code = match v {
                HlcVerdict::Commensurable { .. } => EXIT_YES,
                HlcVerdict::Incommensurable => EXIT_NO,
                HlcVerdict::Unknown(_) => EXIT_INCONCLUSIVE,
            };
            Ok(Outcome::report(format!("{v}\n"), code))
        }
        Command::Irreducible { a } => {
            let da = load(&a)?;
            let f = ExponentialPolynomial::from_weighted_ifs(&da.ifs)?.normalize().poly;
            let v = ritt::is_irreducible_ep(&f)?;
            let code = match v {
                EpVerdict::Irreducible => EXIT_YES,
                EpVerdict::SimpleBinomial | EpVerdict::Reducible(_) => EXIT_NO,
                EpVerdict::OutOfScope(_) => EXIT_INCONCLUSIVE,
            };
            Ok(Outcome::report(format!("polynomial: {f}\n{v}\n"), code))
        }
        Command::Minimal { base, candidate } => {
            let (db, dc) = (load(&base)?, load(&candidate)?);
            let m = ritt::minimality_check(&db.ifs, &dc.ifs)?;
            let code = match m.verdict {
                MinimalityVerdict::IterationOf(_) => EXIT_YES,
                MinimalityVerdict::NotIteration(_) => EXIT_NO,
                MinimalityVerdict::Unknown(_) => EXIT_INCONCLUSIVE,
            };
            Ok(Outcome::report(format!("{m}\n"), code))
        }
        Command::Derived { base, candidate, max_depth } => {
            let (db, dc) = (load(&base)?, load(&candidate)?);
            let v = is_derived_from(&dc.ifs, &db.ifs, max_depth)?;
            Ok(match v {
                DerivedVerdict::Yes(words) => {
                    let weights = check_derived_weights(&dc.ifs, &db.ifs, &words)?;
                    let list: Vec<String> = words.iter().map(ToString::to_string).collect();
                    let text = format!("Yes words={} product_weights={weights}\n", list.join(","));
                    Outcome::report(text, if weights { EXIT_YES } else { EXIT_NO })
                }
                DerivedVerdict::No(why) => Outcome::report(format!("No reason=\"{why}\"\n"), EXIT_NO),
                DerivedVerdict::Unknown(why) => Outcome::report(format!("Unknown reason=\"{why}\"\n"), EXIT_INCONCLUSIVE),
            })
        }
        Command::Equal { a, b, moments, grid_min, grid_max, samples, tol } => {
            let (da, db) = (load(&a)?, load(&b)?);
            let grid = fourier::grid(grid_min, grid_max, samples);
            let v = fourier::measures_equal(&da.ifs, &db.ifs, moments, &grid, tol)?;
            let code = if matches!(v, Equality::EqualUpToChecks { .. }) { EXIT_YES } else { EXIT_NO };
            Ok(Outcome::report(format!("{v}\n"), code))
        }
        Command::VerifyExample4 { p, q } => {
            let (p, q) = (parse_rational(&p)?, parse_rational(&q)?);
            let r = fourier::verify_section4_example(&p, &q)?;
            let code = if r.holds() { EXIT_YES } else { EXIT_NO };
            Ok(Outcome::report(format!("p={} q={} {r}\n", format_rational(&p), format_rational(&q)), code))
        }
        Command::Ssc { a, depth } => {
            let da = load(&a)?;
            Ok(match ifs_core::check_ssc(&da.ifs, depth)? {
                SscVerdict::Verified { depth } => Outcome::report(format!("Verified depth={depth}\n"), EXIT_YES),
                SscVerdict::Refuted { point, maps } => Outcome::report(
                    format!("Refuted point={point} maps={},{}\n", maps.0 + 1, maps.1 + 1),
                    EXIT_NO,
                ),
                SscVerdict::Unknown => Outcome::report("Unknown\n".into(), EXIT_INCONCLUSIVE),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> String {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn tmp() -> PathBuf {
        let d = std::env::temp_dir().join(format!("selfsim-cli-unit-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn exit_codes() {
        let d = tmp();
        let half = write(&d, "half.ifs", "map: r=1/2 b=0 p=1/2\nmap: r=1/2 b=1/2 p=1/2\n");
        let third = write(&d, "third.ifs", "map: r=1/3 b=0 p=1/3\nmap: r=1/3 b=1/3 p=1/3\nmap: r=1/3 b=2/3 p=1/3\n");
        let o = run(["selfsim", "equal", &half, &third]);
        assert_eq!(o.code, EXIT_YES, "{o:?}");
        assert!(o.stdout.starts_with("EqualUpToChecks"));
        let o = run(["selfsim", "check-hlc", &half, &third]);
        assert_eq!((o.code, o.stdout.as_str()), (EXIT_NO, "Incommensurable\n"));
        let o = run(["selfsim", "verify-example4", "--p", "2/3", "--q", "1/4"]);
        assert_eq!(o.code, EXIT_YES, "{o:?}");
        let o = run(["selfsim", "moments", "/nonexistent/x.ifs"]);
        assert_eq!(o.code, EXIT_INPUT);
        let o = run(["selfsim", "bogus"]);
        assert_eq!(o.code, EXIT_INPUT);
        let o = run(["selfsim", "fourier", &half, "--min", "-1", "--max", "1", "--samples", "3"]);
        assert_eq!(o.code, EXIT_YES, "{o:?}");
        assert_eq!(o.stdout.lines().count(), 4);
    }
}
