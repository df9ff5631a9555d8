use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use copula_diag::asymmetry::run_mu_algorithm;
use copula_diag::bounds::{
    a_quasi, bertino, cbar, grid_csv, k_copula, splice, u_delta, BoundFamily, DiagonalData,
    Evaluator,
};
use copula_diag::geometry::{classify_point, curves_csv, g_curves, HSet};
use copula_diag::sample::{sample_u_delta, samples_csv};
use copula_diag::svg::{render_svg, Layer};
use copula_diag::verify::{check_copula_grid, order_chain_check, sup_diff_on_grid};
use copula_diag::{DiagonalSection, Error, Rational};

#[derive(Parser)]
#[command(name = "copula-diag", version, about = "Exact bounds, asymmetry and plots for copulas with a prescribed piecewise-linear diagonal section")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    U,
    Cbar,
    A,
    B,
    K,
    Splice,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a .diag file and check the diagonal-section conditions.
    Validate { input: PathBuf },
    /// Print one value of a named construction at a point.
    Eval {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "cbar", ignore_case = true)]
        kind: Kind,
        /// Point as "x,y"; fractions or decimals.
        #[arg(long)]
        at: String,
        /// Print this many decimals instead of the exact fraction.
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Export evaluator values on the uniform n-grid as CSV.
    Grid {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "cbar", ignore_case = true)]
        kind: Kind,
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Emit exact p/q tokens instead of decimals.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 12)]
        precision: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Order-chain check and the two equality characterizations.
    Bounds {
        input: PathBuf,
        #[arg(long, default_value_t = 128)]
        n: usize,
    },
    /// Maximal-asymmetry report via all routes.
    Asym { input: PathBuf },
    /// Region curve CSV and optional point classification.
    Regions {
        input: PathBuf,
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG plot: curve overlay by default, heatmap with --kind, scatter
    /// with --count.
    Plot {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, ignore_case = true)]
        kind: Option<Kind>,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Draw seeded samples of the copula U as CSV.
    Sample {
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zigzag-perturb the first slope-1 run and report how far the upper
    /// bound moves.
    Perturb {
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn evaluator(kind: Kind, data: &Arc<DiagonalData>) -> Evaluator {
    match kind {
        Kind::U => u_delta(data),
        Kind::Cbar => cbar(data),
        Kind::A => a_quasi(data),
        Kind::B => bertino(data),
        Kind::K => k_copula(data),
        Kind::Splice => splice(cbar(data), bertino(data)).expect("shared diagonal"),
    }
}

fn parse_point(s: &str) -> Result<(Rational, Rational), Error> {
    let mut it = s.split(',');
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(Error::ParseNumber(s.to_string()));
    };
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn emit(text: String, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Validate { input } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            println!(
                "ok: {} breakpoints, {} segments",
                d.pl().points().len(),
                d.pl().num_segments()
            );
        }
        Command::Eval {
            input,
            kind,
            at,
            precision,
        } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            let data = DiagonalData::new(d);
            let (x, y) = parse_point(&at)?;
            let v = evaluator(kind, &data).try_eval(x, y)?;
            match precision {
                Some(p) => println!("{}", v.to_decimal_string(p)),
                None => println!("{v}"),
            }
        }
        Command::Grid {
            input,
            kind,
            n,
            exact,
            precision,
            out,
        } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            let data = DiagonalData::new(d);
            let q = evaluator(kind, &data);
            let prec = if exact { None } else { Some(precision) };
            emit(grid_csv(&q, n, prec), out.as_ref())?;
        }
        Command::Bounds { input, n } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            let data = DiagonalData::new(d.clone());
            let family = BoundFamily::new(&data);
            let chain = order_chain_check(&family, n);
            println!("order_chain = {chain}");
            println!("cbar_equals_K = {}", copula_diag::verify::cbar_equals_k(&d));
            println!("cbar_equals_A = {}", copula_diag::verify::cbar_equals_a(&d));
            let report = check_copula_grid(&family.u, n, true);
            println!("u_delta_is_copula_on_grid = {}", report.is_copula_on_grid);
            if !chain || !report.is_copula_on_grid {
                return Err(Error::RouteMismatch(
                    "bound consistency check failed".into(),
                ));
            }
        }
        Command::Asym { input } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            let report = run_mu_algorithm(&d)?;
            print!("{}", report.to_text());
        }
        Command::Regions { input, at, out } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            let data = DiagonalData::new(d);
            let (g_u, g_l) = g_curves(&data.fsplit);
            let h = HSet::new(&data.hat);
            let mut text = curves_csv(&g_u, &g_l, &h);
            if let Some(at) = at {
                let (x, y) = parse_point(&at)?;
                let label = classify_point(&g_u, &g_l, x, y)?;
                text.push_str(&format!("# classify({x},{y}) = {label:?}\n"));
            }
            emit(text, out.as_ref())?;
        }
        Command::Plot {
            input,
            out,
            kind,
            n,
            count,
            seed,
        } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            let data = DiagonalData::new(d.clone());
            let mut layers = Vec::new();
            match kind {
                Some(kind) => {
                    let q = evaluator(kind, &data);
                    let mut values = Vec::with_capacity(n * n);
                    for i in 0..n as i128 {
                        for j in 0..n as i128 {
                            values.push(
                                q.eval(
                                    Rational::new(2 * i + 1, 2 * n as i128),
                                    Rational::new(2 * j + 1, 2 * n as i128),
                                )
                                .to_f64(),
                            );
                        }
                    }
                    layers.push(Layer::Heatmap { n, values });
                }
                None => {
                    let (g_u, _) = g_curves(&data.fsplit);
                    let h = HSet::new(&data.hat);
                    let hat_pts = data
                        .hat
                        .pl()
                        .points()
                        .iter()
                        .map(|&(x, v)| (x.to_f64(), v.to_f64()))
                        .collect();
                    layers.push(Layer::Function {
                        points: hat_pts,
                        color: "gray".into(),
                        dashed: false,
                    });
                    layers.push(Layer::Segments {
                        segments: curve_segments(&h.curve),
                        color: "black".into(),
                        dashed: false,
                    });
                    layers.push(Layer::Segments {
                        segments: h
                            .verticals
                            .iter()
                            .map(|&(x, lo, hi)| {
                                ((x.to_f64(), lo.to_f64()), (x.to_f64(), hi.to_f64()))
                            })
                            .collect(),
                        color: "black".into(),
                        dashed: false,
                    });
                    layers.push(Layer::Segments {
                        segments: curve_segments(&g_u),
                        color: "blue".into(),
                        dashed: true,
                    });
                }
            }
            if let Some(count) = count {
                layers.push(Layer::Scatter {
                    points: sample_u_delta(&d, count, seed),
                    color: "red".into(),
                });
            }
            render_svg(&layers, &out)?;
        }
        Command::Sample {
            input,
            count,
            seed,
            out,
        } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            let samples = sample_u_delta(&d, count, seed);
            emit(samples_csv(&samples), out.as_ref())?;
        }
        Command::Perturb { input, n, out } => {
            let d = DiagonalSection::from_diag_file(&input)?;
            let dn = d.zigzag_perturb(n)?;
            let dist = d.pl().sup_norm_diff(dn.pl());
            let base = DiagonalData::new(d);
            let pert = DiagonalData::new(dn.clone());
            let gap = sup_diff_on_grid(&cbar(&base), &cbar(&pert), 6 * n as usize);
            println!("sup_norm_distance = {dist}");
            println!("cbar_sup_gap_on_grid = {gap}");
            if let Some(path) = out {
                std::fs::write(path, dn.to_diag_string())?;
            }
        }
    }
    Ok(())
}

fn curve_segments(c: &copula_diag::geometry::StepCurve) -> Vec<((f64, f64), (f64, f64))> {
    (0..c.num_pieces())
        .map(|i| {
            let x0 = c.cuts()[i].to_f64();
            let x1 = c.cuts()[i + 1].to_f64();
            let (a, b) = c.piece(i);
            let (a, b) = (a.to_f64(), b.to_f64());
            ((x0, a + b * x0), (x1, a + b * x1))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::IoFailure(_) => ExitCode::from(3),
                Error::RouteMismatch(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
