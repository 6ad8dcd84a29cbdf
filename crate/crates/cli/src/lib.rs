//! Command-line front end: every subcommand prints a versioned JSON document
//! (or newline-delimited JSON for scans) with complex numbers encoded as
//! decimal-string pairs, so identical invocations produce byte-identical
//! artifacts.
//!
//! Exit codes: 0 success, 1 computation error (JSON error object on stdout),
//! 2 argument error (usage message on stderr).

mod output;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use lawson_core::monodromy::{self, ApparentPoint, ToleranceBudget};
use lawson_core::{analysis, divisors, localmodel, potential, symmetry, Complex, Error};
use output::*;
use std::io::Write;

pub const SCHEMA: &str = "lawson/1";

/// Parse `"1.5"`, `"0.3-0.2i"`, `"i"`, `"2e-3i"` and friends.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let t: String = s.trim().chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let parse_re = |x: &str| -> Result<f64, String> {
        x.parse::<f64>()
            .map_err(|_| format!("bad real part in complex literal '{s}'"))
    };
    if !t.ends_with('i') {
        return Ok(Complex::new(parse_re(&t)?, 0.0));
    }
    let body = &t[..t.len() - 1];
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let ch = bytes[idx] as char;
        if (ch == '+' || ch == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
            split = Some(idx);
            break;
        }
    }
    let parse_im = |x: &str| -> Result<f64, String> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x
                .parse::<f64>()
                .map_err(|_| format!("bad imaginary part in complex literal '{s}'")),
        }
    };
    match split {
        None => Ok(Complex::new(0.0, parse_im(body)?)),
        Some(idx) => Ok(Complex::new(parse_re(&body[..idx])?, parse_im(&body[idx..])?)),
    }
}

fn parse_nonzero_complex(s: &str) -> Result<Complex, String> {
    let z = parse_complex(s)?;
    if z.norm() == 0.0 {
        return Err("zeta = 0 is not admissible".into());
    }
    Ok(z)
}

#[derive(Parser)]
#[command(
    name = "lawson",
    about = "Divisor classes, connection family and monodromy of the Lawson genus-2 surface",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApparentArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "inf")]
    Inf,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the sixteen spin-structure classes and their pullbacks.
    #[command(name = "spin-table")]
    SpinTable {
        #[command(flatten)]
        out: OutArg,
    },
    /// Residue matrices of the connection form at the four punctures.
    Residues {
        #[arg(long, value_parser = parse_nonzero_complex, allow_hyphen_values = true)]
        zeta: Complex,
        #[arg(long = "A", value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex,
        #[arg(long = "G", value_parser = parse_complex, allow_hyphen_values = true)]
        g: Complex,
        #[command(flatten)]
        out: OutArg,
    },
    /// Monodromy around one puncture, or an apparent-singularity probe.
    Monodromy {
        #[arg(long, value_parser = parse_nonzero_complex, allow_hyphen_values = true)]
        zeta: Complex,
        #[arg(long = "A", value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex,
        #[arg(long = "G", value_parser = parse_complex, allow_hyphen_values = true)]
        g: Complex,
        /// Puncture index 1..4.
        #[arg(long, conflicts_with = "apparent")]
        k: Option<u8>,
        /// Probe the apparent point instead: 0 or inf.
        #[arg(long, value_enum)]
        apparent: Option<ApparentArg>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Pointwise form identities and monodromy trace identities.
    #[command(name = "symmetry-check")]
    SymmetryCheck {
        #[arg(long, value_parser = parse_nonzero_complex, allow_hyphen_values = true)]
        zeta: Complex,
        #[arg(long = "A", value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex,
        #[arg(long = "G", value_parser = parse_complex, allow_hyphen_values = true)]
        g: Complex,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Trace profiles over the unit circle, newline-delimited JSON.
    Scan {
        #[arg(long = "A", value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex,
        #[arg(long = "G", value_parser = parse_complex, allow_hyphen_values = true)]
        g: Complex,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Solve for accessory parameters hitting word-trace targets.
    Unitarize {
        #[arg(long, value_parser = parse_nonzero_complex, allow_hyphen_values = true)]
        zeta: Complex,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        t12: Complex,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        t14: Complex,
        #[arg(long = "init-A", value_parser = parse_complex, allow_hyphen_values = true)]
        init_a: Complex,
        #[arg(long = "init-G", value_parser = parse_complex, allow_hyphen_values = true)]
        init_g: Complex,
        /// Newton residual target.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Flatness, holomorphy and unitarity defects of the local chart model.
    Localmodel {
        #[arg(long = "u-const", default_value_t = 0.0, allow_hyphen_values = true)]
        u_const: f64,
        #[arg(long = "q-const", value_parser = parse_complex, allow_hyphen_values = true)]
        q_const: Complex,
        #[arg(long, value_parser = parse_nonzero_complex, allow_hyphen_values = true)]
        zeta: Complex,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Run with the given argument list, writing success output to `stdout`.
/// Returns the process exit code.
pub fn run<W: Write>(args: &[String], stdout: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    2
                }
            };
        }
    };
    match dispatch(cli) {
        Ok(Rendered { document, out_path }) => match out_path {
            Some(path) => match std::fs::write(&path, document) {
                Ok(()) => 0,
                Err(e) => {
                    let err = Error::Io(format!("{}: {e}", path.display()));
                    let _ = writeln!(stdout, "{}", error_json(&err));
                    1
                }
            },
            None => {
                let _ = stdout.write_all(document.as_bytes());
                0
            }
        },
        Err(e) => {
            let _ = writeln!(stdout, "{}", error_json(&e));
            1
        }
    }
}

struct Rendered {
    document: String,
    out_path: Option<std::path::PathBuf>,
}

fn dispatch(cli: Cli) -> Result<Rendered, Error> {
    match cli.command {
        Command::SpinTable { out } => {
            let lattice = divisors::RelationLattice::lawson();
            let classes = lattice.enumerate_spin_classes();
            let fixed = lattice.fixed_spin_classes();
            let mut rows = Vec::new();
            for c in &classes {
                let image = c.phi3_pullback().canonical();
                let is_fixed = fixed
                    .iter()
                    .any(|f| f.class_eq(c).unwrap_or(false));
                rows.push(SpinRow {
                    class: c.to_string(),
                    pullback: image.to_string(),
                    fixed: is_fixed,
                });
            }
            render(&SpinTableDoc::new(rows), out.out)
        }
        Command::Residues { zeta, a, g, out } => {
            let p = potential::close_params(zeta, a, g)?;
            let residues = (1..=4)
                .map(|k| ResidueEntry {
                    point: format!("p{k}"),
                    location: cx(potential::puncture(k)),
                    matrix: mat_json(&potential::residue_matrix(&p, k)),
                })
                .collect();
            let doc = ResiduesDoc::new(zeta, a, g, residues, potential::sum_of_residues_check(&p));
            render(&doc, out.out)
        }
        Command::Monodromy {
            zeta,
            a,
            g,
            k,
            apparent,
            tol,
            out,
        } => {
            let p = potential::close_params(zeta, a, g)?;
            let budget = ToleranceBudget::new(tol, 1e-12, 2_000_000);
            let (m, loop_name) = match (k, apparent) {
                (_, Some(which)) => {
                    let which = match which {
                        ApparentArg::Zero => ApparentPoint::Zero,
                        ApparentArg::Inf => ApparentPoint::Infinity,
                    };
                    let m = monodromy::apparent_monodromy(&p, which, &budget)?;
                    let name = match which {
                        ApparentPoint::Zero => "apparent-0".to_string(),
                        ApparentPoint::Infinity => "apparent-inf".to_string(),
                    };
                    (m, name)
                }
                (k, None) => {
                    let k = k.unwrap_or(1);
                    if !(1..=4).contains(&k) {
                        return Err(Error::InvalidArgument(format!(
                            "puncture index {k} outside 1..4"
                        )));
                    }
                    let m = monodromy::generator(&p, k as usize, &budget)?;
                    (m, format!("gamma{k}"))
                }
            };
            render(&MonodromyDoc::new(loop_name, zeta, a, g, &m), out.out)
        }
        Command::SymmetryCheck {
            zeta,
            a,
            g,
            samples,
            tol,
            out,
        } => {
            let p_pos = potential::close_params(zeta, a, g)?;
            let p_neg = potential::close_params(-zeta, a, g)?;
            let budget = ToleranceBudget::new(tol, 1e-12, 2_000_000);
            let mut reports = vec![
                symmetry::check_phi2_form(&p_pos, samples),
                symmetry::check_tau_form(&p_pos, &p_neg, samples)?,
            ];
            reports.extend(symmetry::check_trace_symmetries(a, g, zeta, &budget)?);
            render(&SymmetryDoc::new(zeta, a, g, &reports), out.out)
        }
        Command::Scan { a, g, n, tol, out } => {
            let budget = ToleranceBudget::new(tol, 1e-12, 2_000_000);
            let profiles = analysis::circle_scan(a, g, n, &budget)?;
            let mut document = String::new();
            for p in &profiles {
                document.push_str(&profile_json(p));
                document.push('\n');
            }
            Ok(Rendered {
                document,
                out_path: out.out,
            })
        }
        Command::Unitarize {
            zeta,
            t12,
            t14,
            init_a,
            init_g,
            tol,
            out,
        } => {
            let budget = ToleranceBudget::default();
            let sol = analysis::find_trace_target(zeta, t12, t14, init_a, init_g, tol, &budget)?;
            let profile = analysis::profile_at(zeta, sol.a, sol.g, &budget);
            render(&UnitarizeDoc::new(zeta, &sol, &profile), out.out)
        }
        Command::Localmodel {
            u_const,
            q_const,
            zeta,
            n,
            h,
            out,
        } => {
            let data = localmodel::ChartData::constant(u_const, q_const, n, h)?;
            let doc = LocalModelDoc {
                schema: SCHEMA,
                flatness_defect: localmodel::flatness_defect(&data, zeta)?,
                holomorphy_defect: localmodel::holomorphy_defect(&data)?,
                unitarity_defect: localmodel::unitarity_defect(&data, zeta)?,
            };
            render(&doc, out.out)
        }
    }
}

fn render<T: serde::Serialize>(
    doc: &T,
    out_path: Option<std::path::PathBuf>,
) -> Result<Rendered, Error> {
    let mut document =
        serde_json::to_string_pretty(doc).map_err(|e| Error::Io(e.to_string()))?;
    document.push('\n');
    Ok(Rendered { document, out_path })
}

/// Newline-delimited JSON emission for trace profiles, one object per line,
/// keys in fixed order.
pub fn emit_profiles<W: Write>(
    profiles: &[analysis::TraceProfile],
    w: &mut W,
) -> std::io::Result<()> {
    for p in profiles {
        writeln!(w, "{}", profile_json(p))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex::new(1.5, 0.0));
        assert_eq!(
            parse_complex("0.3-0.2i").unwrap(),
            Complex::new(0.3, -0.2)
        );
        assert_eq!(parse_complex("i").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex::new(0.0, -1.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex::new(0.0, 2.0));
        assert_eq!(parse_complex("1e-3i").unwrap(), Complex::new(0.0, 1e-3));
        assert_eq!(
            parse_complex("-1.25e2+3e-1i").unwrap(),
            Complex::new(-125.0, 0.3)
        );
        assert!(parse_complex("").is_err());
        assert!(parse_complex("banana").is_err());
        assert!(parse_complex("1+2j").is_err());
    }

    #[test]
    fn zero_zeta_is_an_argument_error() {
        let args: Vec<String> = ["lawson", "monodromy", "--zeta", "0", "--A", "0", "--G", "1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut out = Vec::new();
        assert_eq!(run(&args, &mut out), 2);
    }

    #[test]
    fn unknown_flags_are_rejected() {
        let args: Vec<String> = ["lawson", "spin-table", "--bogus"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut out = Vec::new();
        assert_eq!(run(&args, &mut out), 2);
    }
}
