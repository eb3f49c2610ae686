//! `specdyn`: command-line front end for specdyn-core.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use specdyn_core::classification::classify_point;
use specdyn_core::dihedral::{iterate_f, limit_f, limit_f_star, tau};
use specdyn_core::fixed_points::{fixed_points_f, fixed_points_g, Domain};
use specdyn_core::geometry::{format_complex, parse_complex};
use specdyn_core::grigorchuk::{apply_g, classify_gm, hecke_intervals, in_m, j_orbit_facts};
use specdyn_core::indeterminacy::{generate_in_prime, in_in, Arithmetic};
use specdyn_core::koopman::{
    build_dihedral_level, build_grigorchuk_level, eigenvalues_csv, empirical_spectrum_params,
    max_gap, min_singular_value, pencil_eigenvalues, schur_reduction_check, GroupKind,
};
use specdyn_core::render::{render_slice, thread_pool_from_env, RenderConfig, RenderMode};
use specdyn_core::spectrum::spectrum_membership;
use specdyn_core::verify::{run_verify, VerifyOptions};
use specdyn_core::{ComplexScalar, Error, Point2, Point4};

#[derive(Parser, Debug)]
#[command(name = "specdyn", version, about = "Spectral dynamics of dihedral and Grigorchuk pencils")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MapArg {
    F,
    G,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupArg {
    Dihedral,
    Grigorchuk,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a point of P^2 as Julia (spectrum or indeterminacy) or Fatou.
    Classify {
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Iterate F and print the orbit with τ values (text, json, or csv with --csv).
    Orbit {
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Iterate raw vectors instead of renormalizing each step.
        #[arg(long)]
        raw: bool,
        /// Emit CSV instead of text/json.
        #[arg(long)]
        csv: bool,
    },
    /// Render a real slice to a binary PPM file.
    Render {
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        /// classification | escape_time | arg_f
        #[arg(long, default_value = "classification")]
        mode: String,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Coordinate pinned to 1 (0, 1 or 2).
        #[arg(long, default_value_t = 0)]
        chart: usize,
        #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
        x_range: String,
        #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
        y_range: String,
    },
    /// Report fixed points of F or G with their types.
    FixedPoints {
        #[arg(long, value_enum, default_value_t = MapArg::F)]
        map: MapArg,
        #[arg(long)]
        projective: bool,
    },
    /// Finite-level Koopman representation: pencil spectra and singular values.
    Koopman {
        #[arg(long, value_enum, default_value_t = GroupArg::Dihedral)]
        group: GroupArg,
        #[arg(long, default_value_t = 6)]
        level: u32,
        /// Comma-separated real weights of the generators (a,t or a,b,c,d).
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        /// Point z = (z0,z1,z2): report the minimal singular value and Schur check.
        #[arg(long)]
        point: Option<String>,
        /// Print the generator permutations as JSON.
        #[arg(long)]
        generators: bool,
    },
    /// Apply G to a point of C^5 and classify it on the invariant slice.
    Grigorchuk {
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run the verification suite (`all` or one named check).
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Spectrum of a + b + c + d: predicted intervals and a finite-level check.
    Hecke {
        #[arg(long, default_value_t = 10)]
        level: u32,
    },
    /// Indeterminacy depth of a point, or generated points of I_n' for a ζ.
    Indeterminacy {
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        exact: bool,
        /// Generate points of I_n' for this ζ instead of testing a point.
        #[arg(long, allow_hyphen_values = true)]
        zeta: Option<String>,
    },
}

enum Failure {
    Core(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::InvalidConfig(_)
        | Error::LevelTooLarge { .. }
        | Error::DimensionMismatch { .. }
        | Error::NonRealWeights
        | Error::NotInM
        | Error::NotOnJ => 2,
        _ => 3,
    }
}

fn parse_reals(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("'{t}' is not a real number")).into()))
        .collect()
}

fn parse_range(s: &str) -> CliResult<(f64, f64)> {
    match parse_reals(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Parse(format!("range '{s}' must be lo,hi")).into()),
    }
}

fn c_text(c: ComplexScalar) -> String {
    format_complex(c)
}

fn emit(cli: &Cli, text: String, value: Value) -> CliResult<()> {
    let body = match cli.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&value).map_err(Error::from)?,
    };
    write_out(cli, body.as_bytes())
}

fn write_out(cli: &Cli, bytes: &[u8]) -> CliResult<()> {
    match &cli.out {
        Some(path) => fs::write(path, bytes).map_err(Error::from)?,
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(bytes).map_err(Error::from)?;
            if !bytes.ends_with(b"\n") {
                o.write_all(b"\n").map_err(Error::from)?;
            }
        }
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(v).map_err(Error::from)?)
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Classify { point, max_iter, tol } => {
            let p: Point2 = point.parse()?;
            let c = classify_point(&p, *max_iter, *tol)?;
            let spec = spectrum_membership(&p, *tol);
            let text = format!(
                "point  {p}\ntau    {}\nclass  {}\nmargin {:e}",
                tau(&p),
                c.label(),
                spec.margin
            );
            let value = json!({ "point": to_value(&p)?, "tau": to_value(&tau(&p))?, "classification": to_value(&c)?, "spectrum": to_value(&spec)? });
            emit(cli, text, value)
        }
        Command::Orbit { point, max_iter, raw, csv } => {
            let p: Point2 = point.parse()?;
            let trace = iterate_f(&p, *max_iter, !raw)?;
            if *csv {
                let mut buf = Vec::new();
                trace.write_csv(&mut buf)?;
                return write_out(cli, &buf);
            }
            let mut text = String::new();
            for (k, (q, t)) in trace.points.iter().zip(&trace.tau_values).enumerate() {
                text.push_str(&format!("{k:>4}  {q}  tau={t}\n"));
            }
            if let Some(k) = trace.terminated_at_indeterminacy {
                text.push_str(&format!("F vanishes at step {k}: indeterminacy\n"));
            }
            let f = limit_f(&p);
            text.push_str(&format!("f = {}", c_text(f)));
            let star = limit_f_star(&p).ok();
            if let Some(s) = &star {
                text.push_str(&format!("\nF_* = {s}"));
            }
            let value = json!({
                "points": to_value(&trace.points)?,
                "tau": to_value(&trace.tau_values)?,
                "terminated_at_indeterminacy": trace.terminated_at_indeterminacy,
                "limit_f": [f.re, f.im],
                "limit_f_star": star.map(|s| to_value(&s)).transpose()?,
            });
            emit(cli, text, value)
        }
        Command::Render { resolution, mode, max_iter, tol, chart, x_range, y_range } => {
            let cfg = RenderConfig {
                chart: *chart,
                x_range: parse_range(x_range)?,
                y_range: parse_range(y_range)?,
                resolution: *resolution,
                mode: mode.parse::<RenderMode>()?,
                max_iter: *max_iter,
                tol: *tol,
            };
            cfg.validate()?;
            let Some(path) = &cli.out else {
                return Err(Error::InvalidConfig("render needs --out PATH".into()).into());
            };
            let img = thread_pool_from_env()?.install(|| render_slice(&cfg))?;
            img.save_ppm(path)?;
            eprintln!("wrote {}x{} image to {}", img.width, img.height, path.display());
            Ok(())
        }
        Command::FixedPoints { map, projective } => {
            let domain = if *projective { Domain::Projective } else { Domain::Affine };
            let value = match map {
                MapArg::F => to_value(&fixed_points_f(domain)?)?,
                MapArg::G => {
                    let gammas: Vec<ComplexScalar> =
                        (0..5).map(|k| ComplexScalar::new(-1.0 + 0.5 * k as f64, 0.25)).collect();
                    to_value(&fixed_points_g(&gammas)?)?
                }
            };
            let text = fixed_point_text(&value);
            emit(cli, text, value)
        }
        Command::Koopman { group, level, weights, point, generators } => {
            let rep = match group {
                GroupArg::Dihedral => build_dihedral_level(*level)?,
                GroupArg::Grigorchuk => build_grigorchuk_level(*level)?,
            };
            if *generators {
                return write_out(cli, rep.to_json()?.as_bytes());
            }
            if let Some(pt) = point {
                if rep.group != GroupKind::Dihedral {
                    return Err(Error::InvalidArgument("--point needs --group dihedral".into()).into());
                }
                let z: Point2 = pt.parse()?;
                let c = z.lift().0;
                let sv = min_singular_value(&rep, c[0], &c[1..])?;
                let schur = if *level >= 1 { schur_reduction_check(*level - 1, &c).ok() } else { None };
                let text = format!(
                    "level {level}: min singular value of z0 I + z1 a + z2 t = {sv:e}{}",
                    schur.map(|s| format!("\nschur: big {:e} (thr {:e}), small {:e} (thr {:e}), indicator diff {}", s.big_min_sv, s.big_threshold, s.small_min_sv, s.small_threshold, s.indicator_difference)).unwrap_or_default()
                );
                return emit(cli, text, json!({ "level": level, "min_singular_value": sv, "schur": to_value(&schur)? }));
            }
            let default = match group {
                GroupArg::Dihedral => "1,1",
                GroupArg::Grigorchuk => "1,1,1,1",
            };
            let w = parse_reals(weights.as_deref().unwrap_or(default))?;
            let wc: Vec<ComplexScalar> = w.iter().map(|&x| ComplexScalar::new(x, 0.0)).collect();
            let ev = pencil_eigenvalues(&rep, &wc)?;
            let readout = match (group, w.as_slice()) {
                (GroupArg::Dihedral, [w1, w2]) if w1 * w2 != 0.0 => Some(empirical_spectrum_params(&rep, *w1, *w2)?),
                _ => None,
            };
            if cli.format == Format::Text && readout.is_none() {
                return write_out(cli, eigenvalues_csv(&ev).as_bytes());
            }
            let gap = readout.as_ref().map(|x| max_gap(x));
            let text = format!(
                "{}{}",
                eigenvalues_csv(&ev),
                gap.map(|g| format!("readout max gap {g}")).unwrap_or_default()
            );
            emit(cli, text, json!({ "level": level, "weights": w, "eigenvalues": ev, "readouts": readout, "max_gap": gap }))
        }
        Command::Grigorchuk { point, max_iter, tol } => {
            let z: Point4 = point.parse()?;
            let g = apply_g(&z);
            let on_m = in_m(&z);
            let class = if on_m { Some(classify_gm(&z, *max_iter, *tol)?) } else { None };
            let facts = j_orbit_facts(&z).ok();
            let text = format!(
                "point   {z}\nG(z)    {g}\non M    {on_m}\nclass   {}\nJ facts {}",
                class.map(|c| c.label()).unwrap_or("n/a (not on the slice)"),
                facts
                    .map(|f| format!("G(z) in spectrum: {}, G^2(z) = 0: {}", f.image_in_spectrum, f.second_image_zero))
                    .unwrap_or_else(|| "n/a (not on J)".into())
            );
            let value = json!({ "point": to_value(&z)?, "image": to_value(&g)?, "in_m": on_m, "classification": to_value(&class)?, "j_facts": to_value(&facts)? });
            emit(cli, text, value)
        }
        Command::Verify { suite, seed } => {
            let mut opts = VerifyOptions::default();
            if let Some(s) = seed {
                opts.seed = *s;
            }
            let reports = run_verify(suite, &opts)?;
            let ok = reports.iter().all(|r| r.passed);
            let mut text: String = reports.iter().map(|r| r.line() + "\n").collect();
            text.push_str(&format!(
                "{} of {} checks passed",
                reports.iter().filter(|r| r.passed).count(),
                reports.len()
            ));
            emit(cli, text, json!({ "passed": ok, "checks": to_value(&reports)? }))?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Hecke { level } => {
            let intervals = hecke_intervals();
            let rep = build_grigorchuk_level(*level)?;
            let one = ComplexScalar::new(1.0, 0.0);
            let ev = pencil_eigenvalues(&rep, &[one; 4])?;
            let (lo, hi) = (ev[0], ev[ev.len() - 1]);
            let text = format!(
                "predicted spectrum: {}\nlevel {level}: {} eigenvalues in [{lo:.12}, {hi:.12}]",
                intervals.iter().map(|(a, b)| format!("[{a}, {b}]")).collect::<Vec<_>>().join(" u "),
                ev.len()
            );
            emit(cli, text, json!({ "intervals": intervals, "level": level, "eigenvalues": ev }))
        }
        Command::Indeterminacy { point, n, exact, zeta } => {
            if let Some(zs) = zeta {
                let z = parse_complex(zs)?;
                let mut pts = generate_in_prime(*n, z, 1)?;
                pts.extend(generate_in_prime(*n, z, -1)?);
                let text = pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n");
                return emit(cli, text, json!({ "n": n, "zeta": [z.re, z.im], "points": pts.iter().map(|p| p.to_string()).collect::<Vec<_>>() }));
            }
            let Some(pt) = point else {
                return Err(Error::InvalidArgument("give --point or --zeta".into()).into());
            };
            let p: Point2 = pt.parse()?;
            let mode = if *exact { Arithmetic::Exact } else { Arithmetic::Float };
            let v = in_in(&p, *n, mode)?;
            let text = match v.first_hit_step {
                Some(k) => format!("{p} lies in I_{}: F vanishes at step {k}", k + 1),
                None => format!("{p} is not in I_{n}"),
            };
            emit(cli, text, to_value(&v)?)
        }
    }
}

fn fixed_point_text(value: &Value) -> String {
    let mut out = String::new();
    let mut line = |r: &Value| {
        let loc = r["location"]
            .as_array()
            .map(|a| {
                a.iter()
                    .map(|c| c_text(ComplexScalar::new(c[0].as_f64().unwrap_or(f64::NAN), c[1].as_f64().unwrap_or(f64::NAN))))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .unwrap_or_default();
        out.push_str(&format!(
            "{:<16} ({loc})  residual {:.1e}\n",
            r["type"].as_str().unwrap_or("?"),
            r["residual"].as_f64().unwrap_or(f64::NAN)
        ));
    };
    for (key, v) in value.as_object().into_iter().flatten() {
        match v {
            Value::Array(items) => {
                for item in items {
                    if let Some(samples) = item.get("samples").and_then(|s| s.as_array()) {
                        for s in samples {
                            line(s);
                        }
                    } else {
                        line(item);
                    }
                }
            }
            _ => line(&json!({ "type": key })),
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
