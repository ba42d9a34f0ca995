//! Run configuration: flat key-value TOML with section headers.
//!
//! Trigonometric terms are encoded as flat strings "amplitude k1 k2 phase"
//! so each key stays a single diff-friendly line. See the README for the
//! full key list.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use wkam_core::defaults;
use wkam_core::systems::{HamiltonianSpec, TrigPoly, TrigTerm};
use wkam_core::verifier::VerifierConfig;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub system: SystemSection,
    pub grid: GridSection,
    #[serde(default)]
    pub kernel: KernelSection,
    #[serde(default)]
    pub tolerances: ToleranceSection,
    #[serde(default)]
    pub curve: CurveSection,
    #[serde(default)]
    pub graph: GraphSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub family: String,
    #[serde(default = "one")]
    pub dim: usize,
    #[serde(default)]
    pub terms: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    #[serde(default = "default_t")]
    pub t: f64,
    #[serde(default = "default_winding")]
    pub winding: i32,
    pub substeps: Option<usize>,
    pub cache: Option<PathBuf>,
}

impl Default for KernelSection {
    fn default() -> Self {
        Self {
            t: default_t(),
            winding: default_winding(),
            substeps: None,
            cache: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub exact: Option<f64>,
    pub level: Option<f64>,
    pub invariance: Option<f64>,
    pub domination: Option<f64>,
    pub k_equals_c: Option<f64>,
    pub barrier: Option<f64>,
    pub aubry: Option<f64>,
    pub graph: Option<f64>,
    pub weak_kam: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    #[serde(default)]
    pub terms: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub plot: bool,
}

fn one() -> usize {
    1
}

fn default_t() -> f64 {
    0.5
}

fn default_winding() -> i32 {
    defaults::KERNEL_WINDING
}

/// Validated configuration with the Hamiltonian constructed.
pub struct RunConfig {
    pub spec: HamiltonianSpec,
    pub dim: usize,
    pub n: usize,
    pub kernel_t: f64,
    pub kernel_winding: i32,
    pub kernel_substeps: usize,
    pub kernel_cache: Option<PathBuf>,
    pub curve_path: Option<PathBuf>,
    pub graph_terms: Option<TrigPoly>,
    pub out_dir: PathBuf,
    pub plot: bool,
    pub weak_kam_tol: f64,
    pub verifier: VerifierConfig,
}

pub fn parse_terms(strings: &[String]) -> Result<TrigPoly> {
    let mut terms = Vec::with_capacity(strings.len());
    for (i, s) in strings.iter().enumerate() {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 4 {
            bail!("term {i} must be \"amplitude k1 k2 phase\", got {s:?}");
        }
        let amplitude: f64 = parts[0].parse().context("term amplitude")?;
        let k1: i32 = parts[1].parse().context("term k1")?;
        let k2: i32 = parts[2].parse().context("term k2")?;
        let phase: f64 = parts[3].parse().context("term phase")?;
        terms.push(TrigTerm::new(amplitude, [k1, k2], phase));
    }
    Ok(TrigPoly::new(terms))
}

pub fn load(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let raw: RawConfig = toml::from_str(&text).context("parsing config")?;

    let n = raw.grid.n;
    if !n.is_power_of_two() {
        bail!("grid n = {n} must be a power of two (refinement stages double it)");
    }
    let dim = raw.system.dim;
    let poly = parse_terms(&raw.system.terms)?;
    let spec = match raw.system.family.as_str() {
        "mechanical" => HamiltonianSpec::mechanical(dim, poly)?,
        "adapted" => HamiltonianSpec::adapted(dim, poly)?,
        other => bail!("unknown family {other:?} (expected mechanical | adapted)"),
    };

    let tol = &raw.tolerances;
    for (name, value) in [
        ("exact", tol.exact),
        ("level", tol.level),
        ("invariance", tol.invariance),
        ("domination", tol.domination),
        ("k_equals_c", tol.k_equals_c),
        ("barrier", tol.barrier),
        ("aubry", tol.aubry),
        ("graph", tol.graph),
        ("weak_kam", tol.weak_kam),
    ] {
        if let Some(v) = value {
            if !v.is_finite() || v <= 0.0 {
                bail!("tolerance {name} must be positive, got {v}");
            }
        }
    }

    let kernel_t = raw.kernel.t;
    if kernel_t <= 0.0 {
        bail!("kernel t must be positive");
    }
    let kernel_substeps = raw
        .kernel
        .substeps
        .unwrap_or_else(|| defaults::default_substeps(kernel_t));

    let mut verifier = VerifierConfig {
        kernel_t,
        kernel_winding: raw.kernel.winding,
        kernel_substeps: Some(kernel_substeps),
        ..VerifierConfig::default()
    };
    if let Some(v) = tol.exact {
        verifier.exact_tol = v;
    }
    if let Some(v) = tol.level {
        verifier.level_tol = v;
    }
    if let Some(v) = tol.invariance {
        verifier.invariance_tol = v;
    }
    if let Some(v) = tol.domination {
        verifier.domination_tol = v;
    }
    if let Some(v) = tol.k_equals_c {
        verifier.k_equals_c_tol = v;
    }
    if let Some(v) = tol.barrier {
        verifier.barrier_tol = v;
    }
    verifier.aubry_tol = tol.aubry;
    verifier.graph_tol = tol.graph;

    let graph_terms = if raw.graph.terms.is_empty() {
        None
    } else {
        Some(parse_terms(&raw.graph.terms)?)
    };

    Ok(RunConfig {
        spec,
        dim,
        n,
        kernel_t,
        kernel_winding: raw.kernel.winding,
        kernel_substeps,
        kernel_cache: raw.kernel.cache,
        curve_path: raw.curve.path,
        graph_terms,
        out_dir: raw.output.dir.unwrap_or_else(|| PathBuf::from("out")),
        plot: raw.output.plot,
        weak_kam_tol: tol.weak_kam.unwrap_or(defaults::WEAKKAM_TOL),
        verifier,
    })
}
