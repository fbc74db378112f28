//! Command-line surface of the conformal systems laboratory.
//!
//! Every command reads a JSON system config and/or scalar flags, writes a
//! deterministic key=value report plus CSV artifacts into the output
//! directory, and prints a one-line summary. Exit codes: 0 success, 2
//! validation failure, 3 unresolved numeric enclosure.

use clap::{Args, Parser, Subcommand};
use conformal_lab::ba;
use conformal_lab::config;
use conformal_lab::diffuse;
use conformal_lab::error::Error;
use conformal_lab::fit;
use conformal_lab::gdms::PointSample;
use conformal_lab::julia;
use conformal_lab::measure::EmpiricalMeasure;
use conformal_lab::pressure;
use conformal_lab::region::Point;
use conformal_lab::report::{self, RunReport};
use conformal_lab::util::fmt_g17;
use num_complex::Complex64;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "conformal-lab", version, about)]
struct Cli {
    /// RNG seed shared by all sampled computations
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory for reports and CSV artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = library default); results are identical for any
    /// thread count
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArg {
    /// Path to a system config (JSON)
    #[arg(long)]
    system: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the limit set via the zero of the pressure
    Dim {
        #[command(flatten)]
        sys: SystemArg,
        /// Bisection tolerance on the dimension value
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Word-enumeration node budget
        #[arg(long, default_value_t = 4_000_000)]
        budget: u64,
        /// Cylinder depth cap
        #[arg(long, default_value_t = 16)]
        depth_cap: usize,
    },
    /// Sample the limit set by random admissible words
    Sample {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Weight points by d_max^s of their cylinder
        #[arg(long)]
        exponent: Option<f64>,
    },
    /// Badly-approximable quality scan for one point or a sampled limit set
    Ba {
        /// Point to scan: a number or one of golden, sqrt2m1, pi-3, e-2
        #[arg(long, conflicts_with = "system")]
        x: Option<String>,
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        q: u64,
        #[arg(long, default_value_t = 400)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Continued-fraction expansion with a bounded-digit certificate
    Cf {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Hyperplane diffuseness estimate over a scale grid
    Diffuse {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        centers: usize,
        /// Comma-separated radii; defaults to a geometric grid
        #[arg(long)]
        scales: Option<String>,
    },
    /// Absolute-decay verification on the natural cylinder measure
    Decay {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 400)]
        trials: usize,
        /// Comma-separated relative thicknesses
        #[arg(long, default_value = "0.02,0.05,0.1")]
        eps: String,
        /// Also test the iterated mass inequality at this diffuseness
        #[arg(long)]
        gamma: Option<f64>,
        /// Iteration order for the mass inequality
        #[arg(long, default_value_t = 1)]
        claim_n: usize,
    },
    /// Ahlfors regularity and doubling fit
    Ahlfors {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long)]
        scales: Option<String>,
    },
    /// Build an inverse-branch system of z² + c and emit it as a config
    JuliaIfs {
        /// Parameter c as "re,im"
        #[arg(long, default_value = "0,0")]
        c: String,
        /// Base ball center as "re,im"
        #[arg(long, default_value = "1,0")]
        center: String,
        #[arg(long, default_value_t = 0.3)]
        radius: f64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Julia sample size written alongside
        #[arg(long, default_value_t = 2000)]
        count: usize,
    },
    /// Dimension estimate for the radial Julia set of z² + c
    JuliaDim {
        #[arg(long, default_value = "0,0")]
        c: String,
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// Validate a config: certification, symbolic checks, OSC evidence
    Check {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long, default_value_t = 3)]
        osc_depth: usize,
        #[arg(long, default_value_t = 1e-12)]
        osc_tol: f64,
    },
}

fn parse_x(s: &str) -> Result<f64, Error> {
    match s {
        "golden" => Ok((5f64.sqrt() - 1.0) / 2.0),
        "sqrt2m1" => Ok(2f64.sqrt() - 1.0),
        "pi-3" => Ok(std::f64::consts::PI - 3.0),
        "e-2" => Ok(std::f64::consts::E - 2.0),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse x = `{other}`"))),
    }
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected \"re,im\", got `{s}`"
        )));
    }
    let re = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("bad real part in `{s}`")))?;
    let im = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("bad imaginary part in `{s}`")))?;
    Ok(Complex64::new(re, im))
}

fn parse_scales(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad scale `{p}`")))
        })
        .collect()
}

fn load_system(path: &Path, rep: &mut RunReport) -> Result<config::LoadedSystem, Error> {
    let bytes = std::fs::read(path)?;
    rep.config_hash = Some(report::config_hash_hex(&bytes));
    let cfg: config::SystemConfig = serde_json::from_slice(&bytes)?;
    config::from_config(&cfg)
}

fn natural_cloud(
    loaded: &config::LoadedSystem,
    depth: usize,
    seed: u64,
) -> Result<PointSample, Error> {
    // deterministic cylinder cloud when it fits the enumeration budget,
    // seeded random words otherwise
    let words = conformal_lab::symbolic::word_count(&loaded.system.matrix, depth);
    if words <= 300_000 {
        loaded.system.cylinder_sample(depth, None)
    } else {
        loaded.system.sample_limit_set(60_000, depth, seed, None)
    }
}

fn run(cli: Cli) -> Result<RunReport, Error> {
    // record the semantic arguments only: the output location and worker
    // count must not influence report bytes
    let mut argv: Vec<String> = Vec::new();
    let mut skip_value = false;
    for a in std::env::args().skip(1) {
        if skip_value {
            skip_value = false;
            continue;
        }
        if a == "--out" || a == "--threads" {
            skip_value = true;
            continue;
        }
        if a.starts_with("--out=") || a.starts_with("--threads=") {
            continue;
        }
        argv.push(a);
    }
    let mut rep = RunReport::new(argv.join(" "));
    rep.seed = Some(cli.seed);
    let out = &cli.out;
    match cli.command {
        Command::Dim {
            sys,
            tol,
            budget,
            depth_cap,
        } => {
            let loaded = load_system(&sys.system, &mut rep)?;
            match &loaded.filtration {
                Some(filtration) => {
                    let dims = pressure::dimension_infinite(&loaded.system, filtration, tol)?;
                    for (k, est) in dims.estimates.iter().enumerate() {
                        rep.push_f64(&format!("dim_{k}"), est.value);
                        rep.push(&format!("dim_{k}_method"), est.method.tag());
                    }
                    rep.push_f64("sup_lower_bound", dims.sup_lower_bound);
                    rep.push_usize("filtration_levels", dims.estimates.len());
                }
                None => {
                    let est =
                        pressure::bowen_root_with_budget(&loaded.system, tol, budget, depth_cap)?;
                    rep.push_f64("value", est.value);
                    rep.push_f64("bracket_lo", est.lo);
                    rep.push_f64("bracket_hi", est.hi);
                    rep.push_f64("rigorous_lo", est.rigorous_lo);
                    rep.push_f64("rigorous_hi", est.rigorous_hi);
                    rep.push("method", est.method.tag());
                    rep.push_usize("depth", est.depth);
                    rep.push(
                        "ba_full_dim_regime",
                        if est.exceeds_codim_one() {
                            "true"
                        } else {
                            "false"
                        },
                    );
                    let rows: Vec<_> = (1..=est.depth.min(8))
                        .map(|n| pressure::pressure(&loaded.system, est.value, n))
                        .collect::<Result<_, _>>()?;
                    report::write_text(out, "dim_pressure.csv", &report::pressure_csv(&rows))?;
                }
            }
            rep.write(out, "dim.report")?;
        }
        Command::Sample {
            sys,
            count,
            depth,
            exponent,
        } => {
            let loaded = load_system(&sys.system, &mut rep)?;
            let sample = loaded
                .system
                .sample_limit_set(count, depth, cli.seed, exponent)?;
            report::write_text(
                out,
                "sample.csv",
                &report::sample_csv(&sample, Some(&loaded.system.alphabet)),
            )?;
            rep.push_usize("count", sample.len());
            rep.push_usize("depth", depth);
            rep.write(out, "sample.report")?;
        }
        Command::Ba {
            x,
            system,
            q,
            count,
            depth,
        } => {
            if q > 10_000_000 {
                return Err(Error::InvalidParameter(
                    "q capped at 1e7 to keep scans desk-scale".into(),
                ));
            }
            let sample = match (&x, &system) {
                (Some(xs), None) => {
                    PointSample::bare(1, vec![Point::new(parse_x(xs)?, 0.0)])
                }
                (None, Some(path)) => {
                    let loaded = load_system(path, &mut rep)?;
                    loaded.system.sample_limit_set(count, depth, cli.seed, None)?
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "exactly one of --x and --system required".into(),
                    ))
                }
            };
            let stats = ba::ba_statistics(&sample, q)?;
            rep.push_usize("points", stats.profiles.len());
            rep.push_f64("min_c", stats.min);
            rep.push_f64("median_c", stats.median);
            if let Some(p) = stats.profiles.first() {
                if stats.profiles.len() == 1 {
                    rep.push_f64("c", p.quality);
                    rep.push("argmin_q", p.argmin_q.to_string());
                    rep.push_f64("tail_c", p.tail_quality);
                }
            }
            rep.push(
                "histogram",
                stats
                    .histogram
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(":"),
            );
            report::write_text(out, "ba.csv", &report::ba_csv(&stats, sample.dim))?;
            rep.write(out, "ba.report")?;
        }
        Command::Cf { x, n } => {
            let value = parse_x(&x)?;
            let cert = ba::cf_expand(value, n)?;
            rep.push_f64("x", value);
            rep.push(
                "digits",
                cert.digits
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            rep.push("bound_m", cert.bound_m.to_string());
            rep.push_f64("c_bound", cert.c_bound);
            rep.push_f64("reconstruction", cert.reconstruct());
            rep.push_f64("reconstruction_error_bound", cert.reconstruction_error_bound());
            rep.push("truncated", if cert.truncated { "true" } else { "false" });
            rep.write(out, "cf.report")?;
        }
        Command::Diffuse {
            sys,
            depth,
            centers,
            scales,
        } => {
            let loaded = load_system(&sys.system, &mut rep)?;
            let sample = natural_cloud(&loaded, depth, cli.seed)?;
            let measure = EmpiricalMeasure::from_sample(&sample)?;
            let grid = match scales {
                Some(s) => parse_scales(&s)?,
                None => diffuse::default_scale_grid(&measure, 6),
            };
            let report_d = diffuse::estimate_diffuseness(&sample, &grid, centers, cli.seed)?;
            rep.push_f64("gamma", report_d.gamma);
            rep.push_usize("entries", report_d.entries.len());
            rep.push_usize("skipped_underdense", report_d.skipped_underdense);
            report::write_text(out, "diffuse.csv", &report::diffuse_csv(&report_d, sample.dim))?;
            rep.write(out, "diffuse.report")?;
        }
        Command::Decay {
            sys,
            depth,
            trials,
            eps,
            gamma,
            claim_n,
        } => {
            let loaded = load_system(&sys.system, &mut rep)?;
            let sample = natural_cloud(&loaded, depth, cli.seed)?;
            let measure = EmpiricalMeasure::from_sample(&sample)?;
            let eps_grid = parse_scales(&eps)?;
            let decay = diffuse::verify_decay(&measure, trials, &eps_grid, cli.seed)?;
            rep.push_f64("alpha", decay.alpha);
            rep.push_f64("c_env", decay.c_env);
            rep.push("decays", if decay.decays { "true" } else { "false" });
            rep.push_usize("trials_evaluated", decay.trials_evaluated);
            rep.push_usize("trials_skipped", decay.trials_skipped);
            if let Some(g) = gamma {
                let claim =
                    diffuse::verify_claim_iteration(&measure, g, claim_n, trials, cli.seed)?;
                rep.push_f64("claim_gamma", g);
                rep.push_f64("claim_k", claim.constants.k);
                rep.push_f64("claim_eps", claim.constants.eps);
                rep.push_f64("claim_alpha", claim.constants.alpha);
                rep.push_f64("claim_pass_rate", claim.pass_rate);
                rep.push_usize("claim_evaluated", claim.evaluated);
                rep.push_usize("claim_violations", claim.violations);
            }
            report::write_text(out, "decay.csv", &report::decay_csv(&decay, sample.dim))?;
            rep.write(out, "decay.report")?;
        }
        Command::Ahlfors { sys, depth, scales } => {
            let loaded = load_system(&sys.system, &mut rep)?;
            let sample = natural_cloud(&loaded, depth, cli.seed)?;
            let measure = EmpiricalMeasure::from_sample(&sample)?;
            let grid = match scales {
                Some(s) => parse_scales(&s)?,
                None => diffuse::default_scale_grid(&measure, 6),
            };
            let fit = diffuse::ahlfors_fit(&measure, &grid)?;
            let dbl = diffuse::doubling_fit(&measure, &grid)?;
            rep.push_f64("delta", fit.delta);
            rep.push_f64("c_env", fit.c_env);
            rep.push_f64("residual", fit.residual);
            rep.push_usize("rows", fit.rows);
            rep.push_f64("c_dbl", dbl.c_dbl);
            rep.write(out, "ahlfors.report")?;
        }
        Command::JuliaIfs {
            c,
            center,
            radius,
            depth,
            count,
        } => {
            let cv = parse_complex(&c)?;
            let map = julia::QuadraticMap::new(cv);
            let bs = julia::build_branch_system(&map, parse_complex(&center)?, radius, depth)?;
            let cfg = config::to_config(&bs.system);
            report::write_text(out, "julia_system.json", &config::emit_config(&cfg))?;
            let sample = map.sample_julia(count, cli.seed);
            report::write_text(out, "julia_sample.csv", &report::sample_csv(&sample, None))?;
            rep.push_usize("branches_retained", bs.system.alphabet.len());
            rep.push_usize("branches_candidates", bs.candidates);
            rep.push_f64("lambda", bs.system.lambda);
            rep.write(out, "julia_ifs.report")?;
        }
        Command::JuliaDim { c, budget } => {
            let cv = parse_complex(&c)?;
            let map = julia::QuadraticMap::new(cv);
            let est = julia::ifs_dimension(&map, budget)?;
            rep.push_f64("value_lower_bound", est.value);
            rep.push_f64("rigorous_lo", est.rigorous_lo);
            rep.push_f64("rigorous_hi", est.rigorous_hi);
            rep.push_usize("depth", est.depth);
            rep.push(
                "ba_full_dim_regime",
                if est.exceeds_codim_one() { "true" } else { "false" },
            );
            rep.write(out, "julia_dim.report")?;
        }
        Command::Check {
            sys,
            osc_depth,
            osc_tol,
        } => {
            let loaded = load_system(&sys.system, &mut rep)?;
            rep.push_f64("lambda", loaded.system.lambda);
            rep.push_usize("edges", loaded.system.alphabet.len());
            rep.push_usize("vertices", loaded.system.alphabet.vertices.len());
            let (irr, witness) = conformal_lab::symbolic::is_finitely_irreducible(
                &loaded.system.matrix,
                &loaded.system.alphabet,
            );
            rep.push("finitely_irreducible", if irr { "true" } else { "false" });
            if let Some(w) = witness {
                rep.push_usize("irreducibility_witness_words", w.omega().len());
            }
            let (prim, m) = conformal_lab::symbolic::is_finitely_primitive(
                &loaded.system.matrix,
                &loaded.system.alphabet,
            );
            rep.push("finitely_primitive", if prim { "true" } else { "false" });
            if let Some(m) = m {
                rep.push_usize("primitivity_power", m);
            }
            let osc = loaded.system.check_osc(osc_depth, osc_tol)?;
            rep.push("osc_evidence", if osc.certified { "true" } else { "false" });
            rep.push_usize("osc_depth", osc.depth);
            rep.push_usize("osc_pairs_checked", osc.pairs_checked);
            if let Some((w1, w2)) = &osc.violating {
                rep.push(
                    "osc_violating_pair",
                    format!(
                        "{}|{}",
                        w1.display(&loaded.system.alphabet),
                        w2.display(&loaded.system.alphabet)
                    ),
                );
            }
            // planar systems: generalized-circle fit and triangle test
            if loaded.system.dim == 2 {
                let sample = loaded.system.sample_limit_set(1000, 10, cli.seed, None)?;
                let fitted = fit::generalized_sphere_fit(&sample)?;
                rep.push_f64("sphere_fit_residual", fitted.residual());
                rep.push(
                    "sphere_fit_variant",
                    match fitted {
                        fit::SphereFit::Circle { .. } => "circle",
                        fit::SphereFit::Line { .. } => "line",
                    },
                );
                let (c0, r0) = loaded.system.extensions[0].bounding_ball();
                let ball = conformal_lab::region::Region::Ball {
                    center: c0,
                    radius: r0,
                };
                let verdict = fit::koebe_triangle_irreducibility(&sample, &ball)?;
                rep.push(
                    "triangle_test",
                    match verdict {
                        fit::IrreducibilityVerdict::Irreducible { .. } => "irreducible",
                        fit::IrreducibilityVerdict::Inconclusive => "inconclusive",
                    },
                );
            }
            rep.write(out, "check.report")?;
        }
    }
    Ok(rep)
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // results are thread-count independent; the pool size only affects speed
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let start = Instant::now();
    match run(cli) {
        Ok(rep) => {
            eprintln!(
                "ok: {} ({} ms)",
                rep.command,
                start.elapsed().as_millis()
            );
            if let Some(h) = &rep.config_hash {
                eprintln!("config_hash={h}");
            }
        }
        Err(Error::Unresolved { depth, lo, hi }) => {
            eprintln!(
                "unresolved: enclosure [{}, {}] at depth {depth} does not certify a sign",
                fmt_g17(lo),
                fmt_g17(hi)
            );
            std::process::exit(3);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
