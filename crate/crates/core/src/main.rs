//! Command-line surface over the library: exact partition counts, volumes and
//! volume polynomials, tensor weight multiplicities, duality-algebra reports,
//! and the presentation-ring cross-check.
//!
//! Exit codes: 0 success, 2 validation error, 3 a verified-claim check failed
//! on the given instance (falsification finding).

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use weightvol::cohomring::{cross_validate, hilbert_function, PresentationIdeal};
use weightvol::dualalgebra::{
    annihilator_degree, graded_algebra_report, intersection_pairing, solve_nice_volume,
    verify_generation, verify_nst_system, MergedCoordinateMap,
};
use weightvol::flowpoly::{
    chamber_volume_polynomial, ehrhart_volume, partition_count, Chamber, MultiplicityMatrix,
};
use weightvol::multiplicity::{
    asymptotic_volume_probe, sufficiently_close_reduction_check, tensor_weight_multiplicity,
    MultiplicityQuery,
};
use weightvol::poly::{q_names, Monomial};
use weightvol::rootsys::{sufficiently_close, Weight};
use weightvol::Rat;

#[derive(Parser)]
#[command(
    name = "weightvol",
    about = "Exact flow-polytope volumes, weight multiplicities, and duality algebras for type A",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Basis {
    Alpha,
    Fundamental,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChamberArg {
    Nice,
    Custom,
}

/// Shared multiplicity-matrix selector: uniform (--n) or explicit (--m).
#[derive(clap::Args)]
struct MatrixArgs {
    /// Rank l of the root system A_l
    #[arg(long)]
    l: usize,
    /// Uniform edge multiplicity: every m_{i,j} = n
    #[arg(long, conflicts_with = "m")]
    n: Option<u32>,
    /// Explicit multiplicities m_{i,j}, comma-separated in (i,j) lexicographic
    /// order: m_{1,2},m_{1,3},...,m_{1,l+1},m_{2,3},...
    #[arg(long)]
    m: Option<String>,
}

impl MatrixArgs {
    fn build(&self) -> Result<MultiplicityMatrix, String> {
        match (&self.n, &self.m) {
            (Some(n), None) => MultiplicityMatrix::uniform(self.l, *n).map_err(|e| e.to_string()),
            (None, Some(list)) => {
                let values: Vec<u32> = list
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| format!("bad multiplicity '{t}'")))
                    .collect::<Result<_, String>>()?;
                MultiplicityMatrix::from_list(self.l, &values).map_err(|e| e.to_string())
            }
            _ => Err("exactly one of --n or --m is required".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Kostant-type partition count p_{l,m}(h)
    Partition {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Target weight h in alpha coordinates, comma-separated integers
        #[arg(long)]
        h: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Lattice-normalized flow-polytope volume at one point
    Volume {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Evaluation point in alpha coordinates, comma-separated integers
        #[arg(long)]
        h: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Volume polynomial on one chamber
    Volpoly {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_enum, default_value = "nice")]
        chamber: ChamberArg,
        /// Interior sample points for a custom chamber: "1,2;3,4;..."
        #[arg(long)]
        samples: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tensor-product weight multiplicity [V_{l1} x ... x V_{ln} : W_mu]
    Multiplicity {
        #[arg(long)]
        l: usize,
        /// Highest weight, repeatable once per tensor factor
        #[arg(long)]
        lambda: Vec<String>,
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum, default_value = "fundamental")]
        basis: Basis,
        /// Also print the scaled-multiplicity volume probe up to this k
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Test the sufficiently-close condition on (lambda_1..lambda_n; mu)
    CloseCheck {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        lambda: Vec<String>,
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum, default_value = "fundamental")]
        basis: Basis,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Betti numbers and Poincare polynomial of D/Ann(v) for the nice volume
    Betti {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Intersection pairing: mixed partial of the volume in merged raw
    /// variables p_{1,1..l},...,p_{n,1..l},x_1..x_l
    Pairings {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: u32,
        /// Exponent pattern over the n*l+l raw variables, comma-separated
        #[arg(long)]
        exponents: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Basis of the degree-k annihilator of the nice volume polynomial
    Annihilator {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Solve the characterizing differential system for the nice volume
    SolveOde {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check degreewise that the system operators generate Ann(v)
    VerifyGen {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Relation ideal and Hilbert function of the presentation ring
    Presentation {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cross-check the presentation ring against the duality algebra
    CrossValidate {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn rat_str(r: &Rat) -> String {
    if r.denom() == &num::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_weight(s: &str, l: usize, basis: Basis) -> Result<Weight, String> {
    let w = match basis {
        Basis::Alpha => Weight::parse_alpha(s),
        Basis::Fundamental => Weight::parse_fundamental(s),
    }
    .map_err(|e| e.to_string())?;
    if w.rank() != l {
        return Err(format!("weight '{s}' has rank {}, expected {l}", w.rank()));
    }
    Ok(w)
}

fn parse_h(s: &str, l: usize) -> Result<Weight, String> {
    let w = Weight::parse_alpha(s).map_err(|e| e.to_string())?;
    if w.rank() != l {
        return Err(format!("h has rank {}, expected {l}", w.rank()));
    }
    Ok(w)
}

fn parse_query(
    l: usize,
    lambdas: &[String],
    mu: &str,
    basis: Basis,
) -> Result<MultiplicityQuery, String> {
    let lams = lambdas
        .iter()
        .map(|s| parse_weight(s, l, basis))
        .collect::<Result<Vec<_>, _>>()?;
    let mu = parse_weight(mu, l, basis)?;
    MultiplicityQuery::new(lams, mu).map_err(|e| e.to_string())
}

/// A verified mathematical claim failed on this instance.
struct Falsified(String);

fn run(cli: Cli) -> Result<Result<(), Falsified>, String> {
    match cli.command {
        Command::Partition { matrix, h, format } => {
            let m = matrix.build()?;
            let h = parse_h(&h, m.rank())?;
            let count = partition_count(&m, &h).map_err(|e| e.to_string())?;
            match format {
                Format::Text => println!("{count}"),
                Format::Json => println!("{}", json!({ "count": count.to_string() })),
            }
        }
        Command::Volume { matrix, h, format } => {
            let m = matrix.build()?;
            let h = parse_h(&h, m.rank())?;
            let vol = ehrhart_volume(&m, &h).map_err(|e| e.to_string())?;
            match format {
                Format::Text => println!("{}", rat_str(&vol)),
                Format::Json => println!("{}", json!({ "volume": rat_str(&vol) })),
            }
        }
        Command::Volpoly {
            matrix,
            chamber,
            samples,
            format,
        } => {
            let m = matrix.build()?;
            let ch = match (chamber, samples) {
                (ChamberArg::Nice, None) => Chamber::Nice,
                (ChamberArg::Custom, Some(list)) => {
                    let points = list
                        .split(';')
                        .map(|pt| {
                            pt.split(',')
                                .map(|t| t.trim().parse().map_err(|_| format!("bad sample '{pt}'")))
                                .collect::<Result<Vec<i64>, String>>()
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Chamber::Custom(points)
                }
                (ChamberArg::Custom, None) => {
                    return Err("--chamber custom requires --samples".into())
                }
                (ChamberArg::Nice, Some(_)) => {
                    return Err("--samples only applies to --chamber custom".into())
                }
            };
            let poly = chamber_volume_polynomial(&m, &ch).map_err(|e| e.to_string())?;
            match format {
                Format::Text => println!("{poly}"),
                Format::Json => println!("{}", json!({ "volume_polynomial": poly.to_string() })),
            }
        }
        Command::Multiplicity {
            l,
            lambda,
            mu,
            basis,
            kmax,
            format,
        } => {
            let q = parse_query(l, &lambda, &mu, basis)?;
            let count = tensor_weight_multiplicity(&q).map_err(|e| e.to_string())?;
            let close = sufficiently_close(q.lambdas(), q.mu()).map_err(|e| e.to_string())?;
            let reduced = if close {
                let ok = sufficiently_close_reduction_check(&q).map_err(|e| e.to_string())?;
                if !ok {
                    return Ok(Err(Falsified(
                        "sufficiently-close reduction failed: multiplicity differs from the \
                         partition count at lambda - mu"
                            .into(),
                    )));
                }
                true
            } else {
                false
            };
            let probe = match kmax {
                Some(k) if close => {
                    Some(asymptotic_volume_probe(&q, k).map_err(|e| e.to_string())?)
                }
                Some(_) => {
                    return Err("--kmax requires a sufficiently-close instance".into());
                }
                None => None,
            };
            match format {
                Format::Text => {
                    println!("{count}");
                    if let Some(seq) = &probe {
                        let parts: Vec<String> = seq.iter().map(rat_str).collect();
                        println!("probe: {}", parts.join(", "));
                    }
                }
                Format::Json => {
                    let mut out = json!({
                        "multiplicity": count.to_string(),
                        "reduced_to_partition_function": reduced,
                    });
                    if let Some(seq) = &probe {
                        out["probe"] =
                            json!(seq.iter().map(rat_str).collect::<Vec<_>>());
                    }
                    println!("{out}");
                }
            }
        }
        Command::CloseCheck {
            l,
            lambda,
            mu,
            basis,
            format,
        } => {
            let lams = lambda
                .iter()
                .map(|s| parse_weight(s, l, basis))
                .collect::<Result<Vec<_>, _>>()?;
            let mu = parse_weight(&mu, l, basis)?;
            let close = sufficiently_close(&lams, &mu).map_err(|e| e.to_string())?;
            match format {
                Format::Text => println!("{close}"),
                Format::Json => println!("{}", json!({ "sufficiently_close": close })),
            }
        }
        Command::Betti { matrix, format } => {
            let m = matrix.build()?;
            let v = chamber_volume_polynomial(&m, &Chamber::Nice).map_err(|e| e.to_string())?;
            let report = graded_algebra_report(&v).map_err(|e| e.to_string())?;
            match format {
                Format::Text => {
                    let parts: Vec<String> =
                        report.betti.iter().map(|b| b.to_string()).collect();
                    println!("{}", parts.join(","));
                    println!("{}", report.poincare_polynomial);
                }
                Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
            }
        }
        Command::Pairings {
            l,
            n,
            exponents,
            format,
        } => {
            let m = MultiplicityMatrix::uniform(l, n).map_err(|e| e.to_string())?;
            let v = chamber_volume_polynomial(&m, &Chamber::Nice).map_err(|e| e.to_string())?;
            let map = MergedCoordinateMap::new(n as usize, l);
            let raw = map.expand(&v);
            let exps: Vec<u32> = exponents
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| format!("bad exponent '{t}'")))
                .collect::<Result<_, String>>()?;
            if exps.len() != map.raw_nvars() {
                return Err(format!(
                    "expected {} exponents (raw variables {}), got {}",
                    map.raw_nvars(),
                    map.raw_names().join(","),
                    exps.len()
                ));
            }
            let value =
                intersection_pairing(&raw, &Monomial(exps)).map_err(|e| e.to_string())?;
            match format {
                Format::Text => println!("{}", rat_str(&value)),
                Format::Json => println!("{}", json!({ "pairing": rat_str(&value) })),
            }
        }
        Command::Annihilator {
            matrix,
            degree,
            format,
        } => {
            let m = matrix.build()?;
            let v = chamber_volume_polynomial(&m, &Chamber::Nice).map_err(|e| e.to_string())?;
            let basis = annihilator_degree(&v, degree).map_err(|e| e.to_string())?;
            let strings: Vec<String> = basis.iter().map(|op| op.to_string()).collect();
            match format {
                Format::Text => {
                    for s in &strings {
                        println!("{s}");
                    }
                }
                Format::Json => println!("{}", json!({ "basis": strings })),
            }
        }
        Command::SolveOde { matrix, format } => {
            let m = matrix.build()?;
            let solved = solve_nice_volume(&m).map_err(|e| e.to_string())?;
            // The solution must agree with the interpolated chamber volume.
            let interpolated =
                chamber_volume_polynomial(&m, &Chamber::Nice).map_err(|e| e.to_string())?;
            if solved != interpolated {
                return Ok(Err(Falsified(format!(
                    "differential-system solution {solved} differs from the interpolated \
                     nice-chamber volume {interpolated}"
                ))));
            }
            if !verify_nst_system(&m, &solved) {
                return Ok(Err(Falsified(
                    "solution does not satisfy the differential system".into(),
                )));
            }
            match format {
                Format::Text => println!("{solved}"),
                Format::Json => {
                    println!("{}", json!({ "volume_polynomial": solved.to_string() }))
                }
            }
        }
        Command::VerifyGen { matrix, format } => {
            let m = matrix.build()?;
            let v = chamber_volume_polynomial(&m, &Chamber::Nice).map_err(|e| e.to_string())?;
            let report = verify_generation(&m, &v).map_err(|e| e.to_string())?;
            match format {
                Format::Text => {
                    for c in &report.degrees {
                        println!(
                            "degree {}: ann {} ideal {}{}",
                            c.degree,
                            c.ann_dim,
                            c.ideal_dim,
                            if c.ann_dim == c.ideal_dim { "" } else { "  MISMATCH" }
                        );
                    }
                    let names = q_names(m.rank());
                    let witness: Vec<String> = report
                        .witness_exponents
                        .iter()
                        .zip(&names)
                        .map(|(e, n)| format!("{n}^{e}"))
                        .collect();
                    println!(
                        "witness {}: {}",
                        witness.join(" "),
                        if report.witness_nonzero { "nonzero" } else { "ZERO" }
                    );
                }
                Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
            }
            if !report.passed() {
                return Ok(Err(Falsified(format!(
                    "annihilator generation check failed at degrees {:?} (witness nonzero: {})",
                    report.gaps(),
                    report.witness_nonzero
                ))));
            }
        }
        Command::Presentation { l, n, format } => {
            if l == 0 || n == 0 {
                return Err("--l and --n must be at least 1".into());
            }
            let ideal = PresentationIdeal::new(l, n);
            let hilbert = hilbert_function(&ideal).map_err(|e| e.to_string())?;
            match format {
                Format::Text => {
                    println!("{}", ideal.generator_strings().join(", "));
                    let parts: Vec<String> = hilbert.iter().map(|h| h.to_string()).collect();
                    println!("{}", parts.join(","));
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "generators": ideal.generator_strings(),
                        "hilbert": hilbert,
                    })
                ),
            }
        }
        Command::CrossValidate { l, n, format } => {
            if l == 0 || n == 0 {
                return Err("--l and --n must be at least 1".into());
            }
            let report = cross_validate(l, n).map_err(|e| e.to_string())?;
            match format {
                Format::Text => {
                    println!("generators: {}", report.generators.join(", "));
                    let h: Vec<String> = report.hilbert.iter().map(|x| x.to_string()).collect();
                    let b: Vec<String> = report.betti.iter().map(|x| x.to_string()).collect();
                    println!("hilbert: {}", h.join(","));
                    println!("betti: {}", b.join(","));
                    println!("matches: {}", report.matches_dual_algebra);
                }
                Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
            }
            if !report.matches_dual_algebra {
                return Ok(Err(Falsified(format!(
                    "presentation ring disagrees with the duality algebra \
                     (bad generators {:?}, mismatched degrees {:?})",
                    report.non_annihilating_generators, report.mismatched_degrees
                ))));
            }
        }
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Falsified(msg))) => {
            eprintln!("falsification: {msg}");
            ExitCode::from(3)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
