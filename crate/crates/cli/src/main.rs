use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use intdist::constructions::{build_in, predicted_distribution, ConstructionSpec, Family};
use intdist::distribution::{complete_from_tail, poly_distribution_with, set_distribution};
use intdist::equivalence::{inverse_comparison, nucleus_swap, transform, EquivTransform};
use intdist::geometry::Plane;
use intdist::monomial::{bound_report, degree_table, BoundReport, DegreeRow, DEFAULT_TABLE_CAP};
use intdist::poly::{distinct_roots, irreducible_count_fixed_trace};
use intdist::spectrum::{
    arcs_through_quadrangle, max_value_probe, parse_arcs, spectrum, SpectrumOptions, SpectrumResult,
};
use intdist::text::{parse_elem, parse_poly, parse_triple};
use intdist::{parse_field_spec, Error, Field, IntersectionDistribution, Kind, PointSet, Poly};

#[derive(Parser)]
#[command(
    name = "intdist",
    version,
    about = "Intersection distributions over GF(q) and PG(2,q)"
)]
struct Cli {
    /// Worker threads; never changes the output.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distribution v of a polynomial.
    Dist {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
    },
    /// Distribution u of a (q+1)-set given as a JSON array of "(x:y:z)".
    SetDist {
        #[arg(long)]
        field: String,
        #[arg(long)]
        points: String,
    },
    /// Converts between v and u, or completes a distribution from its tail.
    Convert(ConvertArgs),
    /// Degree of S_{x^d} for 2 <= d <= q-1 with bounds and rules.
    DegreeTable {
        #[arg(long)]
        field: String,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        cap: u64,
    },
    /// Bound report for x^d.
    Bounds {
        #[arg(long)]
        field: String,
        #[arg(long)]
        d: u64,
    },
    /// Builds a two-line family member.
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 0)]
        c: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail unless the built set has the predicted distribution.
        #[arg(long)]
        verify: bool,
    },
    /// Projective-equivalence transforms.
    Equiv {
        #[command(subcommand)]
        op: EquivCmd,
    },
    /// Non-hitting spectrum.
    Spectrum {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = SpectrumOptions::DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        exhaustive: bool,
        /// Sample freely instead of fixing the fundamental quadrangle.
        #[arg(long)]
        no_quadrangle: bool,
        #[arg(long, default_value_t = 64)]
        local_restarts: u64,
        #[arg(long, default_value_t = 4000)]
        local_steps: u64,
        /// q = 9 only: rule out u0 = 34 by extending 8-arcs.
        #[arg(long)]
        probe_max: bool,
        /// 8-arcs, one per line; all 8-arcs through the quadrangle when absent.
        #[arg(long, requires = "probe_max")]
        arcs: Option<std::path::PathBuf>,
    },
    /// Monic irreducible cubics with x^2 coefficient gamma.
    IrreducibleCount {
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "0")]
        gamma: String,
    },
}

#[derive(Args)]
struct ConvertArgs {
    /// A distribution document as printed by dist or set-dist.
    #[arg(long, conflicts_with_all = ["tail", "kind", "q"])]
    input: Option<String>,
    #[arg(long, value_enum, requires_all = ["q", "tail"])]
    kind: Option<KindArg>,
    #[arg(long)]
    q: Option<u64>,
    /// Entries from index 3 upward, comma separated.
    #[arg(long, value_delimiter = ',')]
    tail: Option<Vec<u64>>,
}

#[derive(Subcommand)]
enum EquivCmd {
    /// e*f^sigma(a*x + b) + c*x + d.
    Transform {
        #[arg(long)]
        field: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "0")]
        b: String,
        #[arg(long, default_value = "0")]
        c: String,
        #[arg(long, default_value = "0")]
        d: String,
        #[arg(long, default_value = "1")]
        e: String,
        #[arg(long, default_value_t = 0)]
        sigma: u32,
    },
    /// Exchanges the nuclei (0:1:0) and (0:0:1).
    Swap {
        #[arg(long)]
        field: String,
        #[arg(long)]
        f: String,
    },
    /// Compares a permutation polynomial with its inverse.
    InverseCompare {
        #[arg(long)]
        field: String,
        #[arg(long)]
        f: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    TwoLinesExcl,
    TwoLinesIncl,
    TwoLinesNucleus,
    TwoLinesParallelNucleus,
    TwoLinesTwoPoints,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::TwoLinesExcl => Family::TwoLinesExcl,
            FamilyArg::TwoLinesIncl => Family::TwoLinesIncl,
            FamilyArg::TwoLinesNucleus => Family::TwoLinesNucleus,
            FamilyArg::TwoLinesParallelNucleus => Family::TwoLinesParallelNucleus,
            FamilyArg::TwoLinesTwoPoints => Family::TwoLinesTwoPoints,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    V,
    U,
}

#[derive(Serialize, Deserialize)]
struct ErrorDoc {
    error: String,
    message: String,
}

#[derive(Serialize, Deserialize)]
struct ConstructDoc {
    spec: ConstructionSpec,
    set: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polynomial: Option<String>,
    predicted: IntersectionDistribution,
    computed: IntersectionDistribution,
    matches: bool,
}

#[derive(Serialize, Deserialize)]
struct TransformDoc {
    input: String,
    output: String,
    before: IntersectionDistribution,
    after: IntersectionDistribution,
    same_distribution: bool,
}

#[derive(Serialize, Deserialize)]
struct InverseDoc {
    input: String,
    inverse: String,
    distribution: IntersectionDistribution,
    inverse_distribution: IntersectionDistribution,
    equal: bool,
}

#[derive(Serialize, Deserialize)]
struct IrreducibleDoc {
    q: u64,
    gamma: String,
    degree: u32,
    count: u64,
    brute_force: u64,
}

/// Any failure with the exit code it maps to.
struct Failure {
    code: u8,
    doc: ErrorDoc,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let name = format!("{e:?}");
        let name = name
            .split(['(', ' ', '{'])
            .next()
            .unwrap_or_default()
            .to_string();
        let code = if matches!(e, Error::Parse(_)) { 1 } else { 2 };
        Failure {
            code,
            doc: ErrorDoc {
                error: name,
                message: e.to_string(),
            },
        }
    }
}

fn parse_failure(message: String) -> Failure {
    Failure {
        code: 1,
        doc: ErrorDoc {
            error: "Parse".into(),
            message,
        },
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize")
}

fn field(spec: &str) -> Result<Arc<Field>, Failure> {
    Ok(parse_field_spec(spec)?)
}

fn poly(field: &Arc<Field>, text: &str) -> Result<Poly, Failure> {
    Ok(parse_poly(field, text)?)
}

fn rules_cell(row: &DegreeRow) -> String {
    let r: &BoundReport = &row.report;
    if !r.exact_rules.is_empty() {
        let mut names: Vec<String> = r
            .exact_rules
            .iter()
            .map(|x| format!("{:?}", x.rule))
            .collect();
        names.dedup();
        names.join(";")
    } else {
        format!("{:?};{:?}", r.lower.rule, r.upper.rule)
    }
}

fn degree_csv(rows: &[DegreeRow]) -> String {
    let mut out = String::from("d,exact,lower,upper,rules,sample_line\n");
    for row in rows {
        let r = &row.report;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.d,
            row.degree,
            r.lower.value,
            r.upper.value,
            rules_cell(row),
            row.sample_line.line
        ));
    }
    out
}

fn run(cli: Cli) -> Result<String, Failure> {
    let workers = cli.workers.max(1);
    match cli.cmd {
        Cmd::Dist {
            field: fs,
            poly: ps,
        } => {
            let f = field(&fs)?;
            Ok(json(&poly_distribution_with(&poly(&f, &ps)?, workers)))
        }
        Cmd::SetDist { field: fs, points } => {
            let f = field(&fs)?;
            let texts: Vec<String> =
                serde_json::from_str(&points).map_err(|e| parse_failure(format!("points: {e}")))?;
            let pts = texts
                .iter()
                .map(|t| parse_triple(&f, t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json(&set_distribution(&PointSet::new(&f, pts)?)?))
        }
        Cmd::Convert(args) => {
            let d = match (args.input, args.kind, args.q, args.tail) {
                (Some(text), ..) => {
                    let d: IntersectionDistribution = serde_json::from_str(&text)
                        .map_err(|e| parse_failure(format!("input: {e}")))?;
                    d.convert()?
                }
                (None, Some(kind), Some(q), Some(tail)) => {
                    let kind = match kind {
                        KindArg::V => Kind::Poly,
                        KindArg::U => Kind::Set,
                    };
                    complete_from_tail(kind, q, &tail)?
                }
                _ => {
                    return Err(parse_failure(
                        "give --input, or --kind with --q and --tail".into(),
                    ))
                }
            };
            Ok(json(&d))
        }
        Cmd::DegreeTable {
            field: fs,
            csv,
            json: _,
            cap,
        } => {
            let f = field(&fs)?;
            let rows = degree_table(&f, cap, workers)?;
            Ok(if csv { degree_csv(&rows) } else { json(&rows) })
        }
        Cmd::Bounds { field: fs, d } => {
            let f = field(&fs)?;
            let q = f.q() as u64;
            if d < 2 || d >= q {
                return Err(
                    Error::ParameterOutOfRange(format!("d={d} must lie in 2..={}", q - 1)).into(),
                );
            }
            Ok(json(&bound_report(&f, d)))
        }
        Cmd::Construct {
            family,
            q,
            t,
            c,
            seed,
            verify,
        } => {
            let spec = ConstructionSpec {
                family: family.into(),
                q,
                t,
                c,
                seed,
            };
            let predicted = predicted_distribution(&spec)?;
            let f = intdist::ff::field_of_order(q)?;
            let built = build_in(&f, &spec)?;
            let computed = match &built.poly {
                Some(p) => poly_distribution_with(p, workers),
                None => set_distribution(&built.set)?,
            };
            let matches = computed == predicted;
            if verify && !matches {
                return Err(Error::CertificationFailed(
                    "built set differs from the closed form".into(),
                )
                .into());
            }
            Ok(json(&ConstructDoc {
                spec,
                set: built.set.to_strings(),
                polynomial: built.poly.map(|p| p.to_string()),
                predicted,
                computed,
                matches,
            }))
        }
        Cmd::Equiv { op } => match op {
            EquivCmd::Transform {
                field: fs,
                f: ps,
                a,
                b,
                c,
                d,
                e,
                sigma,
            } => {
                let f = field(&fs)?;
                let p = poly(&f, &ps)?;
                let el = |s: &str| parse_elem(&f, s);
                let t = EquivTransform {
                    a: el(&a)?,
                    b: el(&b)?,
                    c: el(&c)?,
                    d: el(&d)?,
                    e: el(&e)?,
                    sigma,
                };
                let g = transform(&p, &t)?;
                Ok(json(&pair_doc(&p, &g, workers)))
            }
            EquivCmd::Swap { field: fs, f: ps } => {
                let f = field(&fs)?;
                let p = poly(&f, &ps)?;
                let g = nucleus_swap(&p)?;
                Ok(json(&pair_doc(&p, &g, workers)))
            }
            EquivCmd::InverseCompare { field: fs, f: ps } => {
                let f = field(&fs)?;
                let p = poly(&f, &ps)?;
                let r = inverse_comparison(&p)?;
                Ok(json(&InverseDoc {
                    input: p.to_string(),
                    inverse: r.inverse.to_string(),
                    distribution: r.distribution,
                    inverse_distribution: r.inverse_distribution,
                    equal: r.equal,
                }))
            }
        },
        Cmd::Spectrum {
            field: fs,
            trials,
            seed,
            exhaustive,
            no_quadrangle,
            local_restarts,
            local_steps,
            probe_max,
            arcs,
        } => {
            let f = field(&fs)?;
            let opts = SpectrumOptions {
                trials,
                seed,
                fix_quadrangle: !no_quadrangle,
                exhaustive,
                local_restarts,
                local_steps,
                workers,
            };
            let mut result: SpectrumResult = spectrum(&f, &opts)?;
            if probe_max {
                let plane = Plane::new(&f)?;
                let reps = match arcs {
                    Some(path) => {
                        let text = std::fs::read_to_string(&path)
                            .map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
                        parse_arcs(&f, &text)?
                    }
                    None if f.q() == 9 => arcs_through_quadrangle(&plane, 8),
                    None => Vec::new(),
                };
                result.probe = Some(max_value_probe(&plane, &reps)?);
            }
            Ok(json(&result))
        }
        Cmd::IrreducibleCount { field: fs, gamma } => {
            let f = field(&fs)?;
            let g = parse_elem(&f, &gamma)?;
            let count = irreducible_count_fixed_trace(&f, 3, g);
            let mut brute = 0;
            for a in f.elements() {
                for b in f.elements() {
                    let cubic = Poly::new(&f, vec![b, a, g, intdist::Elem::ONE]);
                    if distinct_roots(&cubic)?.count == 0 {
                        brute += 1;
                    }
                }
            }
            Ok(json(&IrreducibleDoc {
                q: f.q() as u64,
                gamma: f.fmt_elem(g),
                degree: 3,
                count,
                brute_force: brute,
            }))
        }
    }
}

fn pair_doc(p: &Poly, g: &Poly, workers: usize) -> TransformDoc {
    let before = poly_distribution_with(p, workers);
    let after = poly_distribution_with(g, workers);
    TransformDoc {
        input: p.to_string(),
        output: g.to_string(),
        same_distribution: before == after,
        before,
        after,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let f = parse_failure(e.kind().to_string());
            println!("{}", json(&f.doc));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            println!("{}", json(&f.doc));
            ExitCode::from(f.code)
        }
    }
}
