//! Batch front-end: configuration, pipelines, artifact emission.

mod config;
mod plots;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use config::RunConfig;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wkam_core::io as wio;
use wkam_core::minplus::cache;
use wkam_core::systems::{self, FlowOptions, PhasePoint};
use wkam_core::verifier;
use wkam_core::weakkam::{
    conjugate_pair, critical_value, peierls_barrier, weak_kam_solve, BarrierOptions,
    CriticalValueOptions, SolveOptions,
};
use wkam_core::{ActionKernel, Semigroup, TorusGrid};

#[derive(Parser)]
#[command(
    name = "wkam",
    about = "Weak KAM / Aubry-Mather toolkit with a Lagrangian graph verifier",
    version
)]
struct Cli {
    /// Run configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides WKAM_OUT and the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap worker threads; outputs are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    plot: bool,
    /// Kernel cache path (read when present and matching, written by
    /// `kernel`).
    #[arg(long, global = true)]
    kernel_cache: Option<PathBuf>,
    /// Reserved; no stochastic component yet.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the Lagrangian L(q, v) over the grid and a velocity window.
    Legendre {
        #[arg(long, default_value_t = 4.0)]
        vmax: f64,
        #[arg(long, default_value_t = 33)]
        vsteps: usize,
    },
    /// Assemble the action kernel and write the binary cache.
    Kernel,
    /// Mañé critical value with cross-check diagnostics.
    CriticalValue,
    /// Solve the weak KAM pair u₋, u₊.
    WeakKam,
    /// Peierls barrier matrix, Aubry mask and binary export.
    Barrier,
    /// Aubry mask only.
    Aubry,
    /// Decompose a curve and emit the selector Φ.
    Selector,
    /// Full verification pipeline; exit code encodes the verdict.
    Verify,
    /// Integrate one orbit and dump the trajectory.
    Flow {
        #[arg(long)]
        q0: f64,
        #[arg(long, default_value_t = 0.0)]
        q1: f64,
        #[arg(long)]
        p0: f64,
        #[arg(long, default_value_t = 0.0)]
        p1: f64,
        #[arg(long, default_value_t = 10.0)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    // --seed is reserved: no stochastic component yet
    let _ = cli.seed;
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("initializing the thread pool")?;
    }

    let config_path = cli
        .config
        .as_deref()
        .context("--config <file> is required")?;
    let cfg = config::load(config_path)?;

    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("WKAM_OUT").map(PathBuf::from))
        .unwrap_or_else(|| cfg.out_dir.clone());
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let plot = cli.plot || cfg.plot;
    let cache_path = cli
        .kernel_cache
        .clone()
        .or_else(|| cfg.kernel_cache.clone());

    match cli.command {
        Command::Legendre { vmax, vsteps } => {
            legendre_cmd(&cfg, &out_dir, vmax, vsteps)?;
        }
        Command::Kernel => {
            let kernel = assemble(&cfg)?;
            let dest = cache_path.unwrap_or_else(|| out_dir.join("kernel.bin"));
            cache::write_kernel(&dest, &kernel)?;
            println!(
                "kernel: n={} t={} W={} m={} -> {}",
                cfg.n,
                cfg.kernel_t,
                cfg.kernel_winding,
                cfg.kernel_substeps,
                dest.display()
            );
        }
        Command::CriticalValue => {
            let kernel = load_or_assemble(&cfg, cache_path.as_deref())?;
            let cv = critical_value(&kernel, &cfg.spec, CriticalValueOptions::default())?;
            println!("c={}", cv.c);
            let line = serde_json::json!({
                "stage": "critical_value",
                "c": cv.c,
                "lambda": cv.lambda,
                "inf_max_upper_bound": cv.c_hat,
                "kernel_t": kernel.t(),
            });
            std::fs::write(out_dir.join("critical_value.jsonl"), format!("{line}\n"))?;
        }
        Command::WeakKam => {
            let kernel = load_or_assemble(&cfg, cache_path.as_deref())?;
            let cv = critical_value(&kernel, &cfg.spec, CriticalValueOptions::default())?;
            let opts = SolveOptions {
                tol: cfg.weak_kam_tol,
                ..SolveOptions::default()
            };
            let sol = weak_kam_solve(&kernel, cv.shift, Semigroup::Negative, opts)?;
            let pair = conjugate_pair(&kernel, cv.shift, cv.c, &sol, opts)?;
            let grid = kernel.grid();
            wio::write_columns_csv(
                &out_dir.join("weak_kam.csv"),
                "node,q,u_minus,u_plus",
                (0..grid.node_count()).map(|i| {
                    vec![
                        i as f64,
                        grid.node(i)[0],
                        pair.u_minus.get(i),
                        pair.u_plus.get(i),
                    ]
                }),
            )?;
            println!(
                "weak-kam: c={} residuals {:.3e}/{:.3e} -> {}",
                cv.c,
                pair.residual_minus,
                pair.residual_plus,
                out_dir.join("weak_kam.csv").display()
            );
            if plot {
                let pts = |u: &wkam_core::GridField| {
                    (0..grid.node_count())
                        .map(|i| (grid.node(i)[0], u.get(i)))
                        .collect::<Vec<_>>()
                };
                plots::write_svg(
                    &out_dir.join("weak_kam.svg"),
                    "weak KAM pair",
                    &[
                        plots::Series {
                            label: "u_minus",
                            points: pts(&pair.u_minus),
                            markers: false,
                        },
                        plots::Series {
                            label: "u_plus",
                            points: pts(&pair.u_plus),
                            markers: false,
                        },
                    ],
                )?;
            }
        }
        Command::Barrier | Command::Aubry => {
            let kernel = load_or_assemble(&cfg, cache_path.as_deref())?;
            let cv = critical_value(&kernel, &cfg.spec, CriticalValueOptions::default())?;
            let barrier = peierls_barrier(
                &kernel,
                cv.shift,
                BarrierOptions {
                    tol: cfg.verifier.barrier_tol,
                    aubry_tol: cfg.verifier.aubry_tol,
                    ..BarrierOptions::default()
                },
            )?;
            wio::write_aubry_csv(&out_dir.join("aubry.csv"), barrier.aubry_mask())?;
            let aubry_count = barrier.aubry_mask().iter().filter(|&&m| m).count();
            if matches!(cli.command, Command::Barrier) {
                wio::write_barrier_csv(&out_dir.join("barrier.csv"), &barrier)?;
                let export = ActionKernel::from_entries(
                    barrier.grid(),
                    barrier.t(),
                    barrier.h_matrix().to_vec(),
                )?;
                cache::write_kernel(&out_dir.join("barrier.bin"), &export)?;
                println!(
                    "barrier: c={} diag min {:.3e}, {} aubry nodes -> {}",
                    barrier.c(),
                    barrier.diag_min(),
                    aubry_count,
                    out_dir.join("barrier.csv").display()
                );
                if plot {
                    let grid = barrier.grid();
                    let n = grid.node_count();
                    let slice = |q1: usize| {
                        (0..n)
                            .map(|q2| (grid.node(q2)[0], barrier.h_value(q1, q2)))
                            .collect::<Vec<_>>()
                    };
                    plots::write_svg(
                        &out_dir.join("barrier.svg"),
                        "Peierls barrier slices h(q1, .)",
                        &[
                            plots::Series {
                                label: "q1 = 0",
                                points: slice(0),
                                markers: false,
                            },
                            plots::Series {
                                label: "q1 = n/4",
                                points: slice(n / 4),
                                markers: false,
                            },
                            plots::Series {
                                label: "q1 = n/2",
                                points: slice(n / 2),
                                markers: false,
                            },
                            plots::Series {
                                label: "diag",
                                points: (0..n)
                                    .map(|i| (grid.node(i)[0], barrier.diag(i)))
                                    .collect(),
                                markers: false,
                            },
                        ],
                    )?;
                }
            } else {
                println!(
                    "aubry: {} nodes at tol {} -> {}",
                    aubry_count,
                    barrier.aubry_tol(),
                    out_dir.join("aubry.csv").display()
                );
            }
        }
        Command::Selector => {
            let curve_path = cfg
                .curve_path
                .as_deref()
                .context("selector needs [curve] path in the config")?;
            let curve = wio::read_curve_csv(&resolve(config_path, curve_path))?;
            let grid = TorusGrid::new(1, cfg.n)?;
            let table = match wkam_core::BranchTable::decompose(&curve, grid, 0.0) {
                Ok(t) => t,
                Err(wkam_core::SelectorError::FoldOnNode { .. }) => {
                    wkam_core::BranchTable::decompose(&curve, grid, 0.5)?
                }
                Err(e) => return Err(e.into()),
            };
            let phi = wkam_core::selector::select(&table)?;
            let axioms = wkam_core::selector::axiom_check(
                &phi,
                &table,
                &curve,
                wkam_core::selector::AxiomCheckOptions::default(),
            );
            wio::write_phi_csv(&out_dir.join("phi.csv"), &phi, &table)?;
            println!(
                "selector: {} nodes, exceptional fraction {:.4}, liouville {:.3e} -> {}",
                cfg.n,
                axioms.exceptional_fraction,
                curve.liouville_integral(),
                out_dir.join("phi.csv").display()
            );
            if plot {
                let branch_points: Vec<(f64, f64)> = (0..cfg.n)
                    .flat_map(|i| {
                        let q = table.node_position(i);
                        table
                            .branches(i)
                            .iter()
                            .map(move |b| (q, b.s))
                            .collect::<Vec<_>>()
                    })
                    .collect();
                plots::write_svg(
                    &out_dir.join("selector.svg"),
                    "selector vs curve branches",
                    &[
                        plots::Series {
                            label: "branch values",
                            points: branch_points,
                            markers: true,
                        },
                        plots::Series {
                            label: "phi",
                            points: (0..cfg.n)
                                .map(|i| (table.node_position(i), phi.get(i)))
                                .collect(),
                            markers: false,
                        },
                    ],
                )?;
            }
        }
        Command::Verify => {
            let report = if cfg.dim == 1 {
                let curve_path = cfg
                    .curve_path
                    .as_deref()
                    .context("verify needs [curve] path for a 1-dimensional system")?;
                let curve = wio::read_curve_csv(&resolve(config_path, curve_path))?;
                verifier::verify_birkhoff(&cfg.spec, &curve, cfg.n, &cfg.verifier)
            } else {
                let terms = cfg
                    .graph_terms
                    .as_ref()
                    .context("verify needs [graph] terms for a 2-dimensional system")?;
                verifier::verify_graph_form(&cfg.spec, terms, cfg.n, &cfg.verifier)
            };
            std::fs::write(out_dir.join("report.jsonl"), report.to_jsonl())?;
            std::fs::write(out_dir.join("report.txt"), report.render_text())?;
            print!("{}", report.render_text());
            return Ok(ExitCode::from(report.verdict.exit_code() as u8));
        }
        Command::Flow {
            q0,
            q1,
            p0,
            p1,
            t,
            dt,
        } => {
            let x0 = PhasePoint::new([q0, q1], [p0, p1]);
            let traj = systems::integrate(&cfg.spec, x0, t, dt, FlowOptions::default())?;
            let step = traj.dt_signed * traj.store_every as f64;
            let dim = cfg.dim;
            let spec = cfg.spec.clone();
            wio::write_columns_csv(
                &out_dir.join("flow.csv"),
                if dim == 1 {
                    "t,q,p,energy"
                } else {
                    "t,q1,q2,p1,p2,energy"
                },
                traj.points.iter().enumerate().map(move |(i, pt)| {
                    let mut row = vec![i as f64 * step];
                    if dim == 1 {
                        row.extend([pt.q[0], pt.p[0]]);
                    } else {
                        row.extend([pt.q[0], pt.q[1], pt.p[0], pt.p[1]]);
                    }
                    row.push(spec.eval_point(*pt));
                    row
                }),
            )?;
            println!(
                "flow: {} stored points over t={} -> {}",
                traj.points.len(),
                t,
                out_dir.join("flow.csv").display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn legendre_cmd(cfg: &RunConfig, out_dir: &Path, vmax: f64, vsteps: usize) -> Result<()> {
    if vsteps < 2 {
        bail!("--vsteps must be at least 2");
    }
    let grid = TorusGrid::new(cfg.dim, cfg.n)?;
    let mut rows = Vec::new();
    for i in 0..grid.node_count() {
        let q = grid.node(i);
        for j in 0..vsteps {
            let v = -vmax + 2.0 * vmax * j as f64 / (vsteps - 1) as f64;
            let l = cfg.spec.lagrangian(q, [v, 0.0])?;
            rows.push(vec![q[0], v, l]);
        }
    }
    wio::write_columns_csv(&out_dir.join("legendre.csv"), "q,v,L", rows.into_iter())?;
    println!(
        "legendre: {} nodes x {} velocities -> {}",
        grid.node_count(),
        vsteps,
        out_dir.join("legendre.csv").display()
    );
    Ok(())
}

fn assemble(cfg: &RunConfig) -> Result<ActionKernel> {
    let grid = TorusGrid::new(cfg.dim, cfg.n)?;
    Ok(ActionKernel::assemble(
        &cfg.spec,
        grid,
        cfg.kernel_t,
        cfg.kernel_winding,
        cfg.kernel_substeps,
    )?)
}

/// Read the kernel from the cache when present and matching, else assemble.
fn load_or_assemble(cfg: &RunConfig, cache_path: Option<&Path>) -> Result<ActionKernel> {
    if let Some(path) = cache_path {
        if path.exists() {
            return Ok(cache::read_kernel_matching(
                path,
                cfg.dim,
                cfg.n,
                cfg.kernel_t,
                cfg.kernel_winding,
                cfg.kernel_substeps,
            )?);
        }
    }
    assemble(cfg)
}

/// Paths in the config resolve relative to the config file.
fn resolve(config_path: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        config_path.parent().unwrap_or(Path::new(".")).join(p)
    }
}
