//! Command-line front end for the exact patchworking toolkit.
//!
//! Subcommands wrap the library: polytope inspection, triangulation
//! construction, sign-based hypersurface assembly, layered-construction
//! cycle certificates, multi-equation intersection models, and the closed
//! Betti-number formulas.  Reports are JSON on standard output (or
//! `--out FILE`); meshes export as OBJ or SVG.  Exit codes: 0 on success,
//! 1 when a computation rejects its input, 2 when a file cannot be read,
//! written, or parsed.

mod formats;
mod mesh;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use viro_core::cayley::{
    cayley_polytope, ci_betti_lower_bound, ci_narrow_cycles, mixed_subdivision, sturmfels_ci,
    verify_ci_witness, CiFactor,
};
use viro_core::complex::PLComplex;
use viro_core::formulas::{
    ci_betti_3d, euler_char_ci_compact, euler_char_ci_torus, hypersurface_betti_3d,
    layered_lower_bound, projective_hypersurface_betti, skew_simplex,
};
use viro_core::layered::{
    asymptotic_patchwork_data, layered_triangulation, narrow_cycles, verify_cycles,
};
use viro_core::patchwork::{
    build_hypersurface, extend_symmetric, hypersurface_quotient, orthant_mixed,
    patchwork_real_betti,
};
use viro_core::polytope::{convex_hull, LatticePolytope};
use viro_core::triangulation::{is_primitive, primitive_convex_2d, regular_subdivision, Triangulation};
use viro_core::{int, Int, Rat};

use formats::{
    int_json, lifting_json, load_json, parse_i64_list, parse_polytope, parse_signs, parse_system,
    parse_triangulation, points_json, polytope_json, rat_json, triangulation_json,
};

/// Failures split by exit code: input plumbing (2) versus the mathematics
/// rejecting its input (1).
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Domain(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl From<viro_core::error::Error> for CliError {
    fn from(e: viro_core::error::Error) -> Self {
        use viro_core::error::Error;
        match e {
            Error::Io(_) | Error::Json(_) => CliError::Io(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "viro",
    version,
    about = "Exact combinatorial patchworking of piecewise-linear hypersurfaces"
)]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads (reports are identical for every value).
    #[arg(long, global = true, default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect lattice polytopes.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Build and certify triangulations.
    #[command(subcommand)]
    Triangulate(TriangulateCmd),
    /// Assemble sign-symmetric hypersurfaces and their topology.
    #[command(subcommand)]
    Patchwork(PatchworkCmd),
    /// Layered constructions: bounds, cycle certificates, dilation data.
    #[command(subcommand)]
    Layered(LayeredCmd),
    /// Multi-polytope joins, mixed subdivisions, intersection models.
    #[command(subcommand)]
    Cayley(CayleyCmd),
    /// Closed formulas for Betti numbers and Euler characteristics.
    #[command(subcommand)]
    Formulas(FormulasCmd),
    /// Run a named end-to-end construction.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
}

#[derive(Subcommand)]
enum PolytopeCmd {
    /// Report dimensions, lattice data, volume, and facet count.
    Info {
        /// Polytope file: {"dim", "vertices"}.
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
    },
}

#[derive(Subcommand)]
enum TriangulateCmd {
    /// Subdivision induced by a lifting (points + lifting in the file).
    Regular {
        /// Triangulation file; `simplices` may be omitted, `lifting` not.
        #[arg(long, value_name = "FILE")]
        triangulation: PathBuf,
    },
    /// Unit-triangle triangulation of a planar polytope, with a
    /// certifying lifting.
    #[command(name = "primitive2d")]
    Primitive2d {
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
    },
    /// Layered triangulation of the dilated standard simplex.
    Layered {
        /// Ambient dimension.
        #[arg(long)]
        d: usize,
        /// Dilation factor.
        #[arg(long)]
        m: i64,
    },
}

#[derive(Subcommand)]
enum PatchworkCmd {
    /// Build the hypersurface in the union of reflected copies and its
    /// boundary-identified quotient; report cell counts.
    Build {
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
        #[arg(long, value_name = "FILE")]
        triangulation: PathBuf,
        #[arg(long, value_name = "FILE")]
        signs: PathBuf,
    },
    /// Z/2 Betti numbers of the quotient hypersurface.
    Betti {
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
        #[arg(long, value_name = "FILE")]
        triangulation: PathBuf,
        #[arg(long, value_name = "FILE")]
        signs: PathBuf,
    },
    /// Export the hypersurface (before boundary identification) as a mesh.
    Export {
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
        #[arg(long, value_name = "FILE")]
        triangulation: PathBuf,
        #[arg(long, value_name = "FILE")]
        signs: PathBuf,
        /// Output format.
        #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
        format: ExportFormat,
    },
}

#[derive(Subcommand)]
enum LayeredCmd {
    /// Closed lower bound for the number of independent cycles.
    Bound {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: i64,
    },
    /// Construct the cycle witnesses and count them by dimension.
    Cycles {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: i64,
    },
    /// Construct the witnesses and check them: cycle conditions, dual
    /// cycles avoiding the hypersurface, and rank-certified independence.
    Verify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: i64,
    },
    /// Glue dilated copies of a coarse triangulation and report the real
    /// Betti numbers of the resulting patchwork.
    Asymptotic {
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
        /// Coarse triangulation with a strictly convex lifting.
        #[arg(long, value_name = "FILE")]
        triangulation: PathBuf,
        /// Dilation factor (must exceed d + 1).
        #[arg(long)]
        lambda: i64,
    },
}

#[derive(Subcommand)]
enum CayleyCmd {
    /// Join the polytopes of a system file into one lifted polytope.
    Build {
        /// System file: JSON array of {"polytope", "triangulation", "signs"}.
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
    },
    /// Mixed subdivision induced by the system's triangulations.
    Mixed {
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
    },
    /// Piecewise-linear intersection model of the signed system.
    Ci {
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
    },
    /// Cycle witnesses for the layered intersection construction.
    Cycles {
        /// Ambient dimension.
        #[arg(long)]
        d: usize,
        /// Number of equations.
        #[arg(long)]
        k: usize,
        /// Comma-separated dilation sizes, one per equation.
        #[arg(long, value_name = "LIST")]
        sizes: String,
    },
}

#[derive(Subcommand)]
enum FormulasCmd {
    /// Total Betti number of the hypersurface attached to a simple
    /// 3-polytope, from lattice-point counts.
    #[command(name = "betti3")]
    Betti3 {
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
    },
    /// Total Betti number of a smooth degree-m hypersurface of projective
    /// d-space.
    Projective {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: i64,
    },
    /// Euler characteristic of a complete intersection: torus part from a
    /// system file, or the compact version from a base polytope with
    /// per-equation dilation factors.
    #[command(name = "euler-ci")]
    EulerCi {
        /// System file (torus Euler characteristic of its polytopes).
        #[arg(long, value_name = "FILE")]
        system: Option<PathBuf>,
        /// Base polytope for the compact version.
        #[arg(long, value_name = "FILE")]
        polytope: Option<PathBuf>,
        /// Comma-separated dilation factors for the compact version.
        #[arg(long, value_name = "LIST")]
        lambdas: Option<String>,
    },
    /// Total Betti number of a surface cut out by two dilates of a simple
    /// 3-polytope.
    #[command(name = "ci-betti")]
    CiBetti {
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
        /// Two comma-separated dilation factors.
        #[arg(long, value_name = "L1,L2")]
        lambdas: String,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// Run a named construction: `harnack --m M` (maximal plane curve) or
    /// `skew-simplex --k K` (volume-k tetrahedron counterexample).
    Run {
        #[arg(value_name = "NAME")]
        name: String,
        /// Degree for the plane-curve scenario.
        #[arg(long)]
        m: Option<i64>,
        /// Volume for the skewed-tetrahedron scenario.
        #[arg(long)]
        k: Option<i64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Json,
    Obj,
    Svg,
}

fn main() {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli).and_then(|text| emit(out.as_deref(), &text));
    match result {
        Ok(()) => {}
        Err(CliError::Domain(m)) => {
            eprintln!("error: {m}");
            std::process::exit(1);
        }
        Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            std::process::exit(2);
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON reports are always serializable");
    s.push('\n');
    s
}

fn bare_int(n: &Int) -> String {
    format!("{n}\n")
}

fn load_polytope(path: &Path) -> Result<LatticePolytope, CliError> {
    parse_polytope(&load_json(path)?, &path.display().to_string())
}

fn load_triangulation(path: &Path) -> Result<Triangulation, CliError> {
    parse_triangulation(&load_json(path)?, &path.display().to_string())
}

fn load_signs(path: &Path) -> Result<Vec<i8>, CliError> {
    parse_signs(&load_json(path)?, &path.display().to_string())
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Polytope(PolytopeCmd::Info { polytope }) => {
            let p = load_polytope(&polytope)?;
            let mut obj = Map::new();
            obj.insert("ambient_dim".into(), json!(p.ambient_dim()));
            obj.insert("dim".into(), json!(p.dim()));
            obj.insert("vertex_count".into(), json!(p.vertices().len()));
            obj.insert("vertices".into(), points_json(p.vertices())?);
            obj.insert("facet_count".into(), json!(p.facets().len()));
            obj.insert("lattice_points".into(), json!(p.lattice_points().len()));
            obj.insert(
                "interior_lattice_points".into(),
                json!(p.interior_lattice_count()),
            );
            obj.insert(
                "boundary_lattice_points".into(),
                json!(p.boundary_lattice_count()),
            );
            obj.insert("lattice_volume".into(), int_json(&p.lattice_volume())?);
            obj.insert(
                "simple".into(),
                p.is_simple().map(Value::Bool).unwrap_or(Value::Null),
            );
            Ok(pretty(&Value::Object(obj)))
        }

        Command::Triangulate(cmd) => run_triangulate(cmd),
        Command::Patchwork(cmd) => run_patchwork(cmd),
        Command::Layered(cmd) => run_layered(cmd),
        Command::Cayley(cmd) => run_cayley(cmd),
        Command::Formulas(cmd) => run_formulas(cmd),
        Command::Scenario(ScenarioCmd::Run { name, m, k }) => run_scenario(&name, m, k),
    }
}

fn run_triangulate(cmd: TriangulateCmd) -> Result<String, CliError> {
    match cmd {
        TriangulateCmd::Regular { triangulation } => {
            let t = load_triangulation(&triangulation)?;
            let lifting = t.lifting.as_ref().ok_or_else(|| {
                CliError::Domain("the regular subdivision needs a lifting in the file".into())
            })?;
            let sub = regular_subdivision(&t.points, lifting)?;
            let cell_size = sub.points.first().map_or(1, |p| p.len()) + 1;
            let simplicial = sub.cells.iter().all(|c| c.len() == cell_size);
            let mut obj = Map::new();
            obj.insert("points".into(), points_json(&sub.points)?);
            obj.insert(
                "cells".into(),
                Value::Array(
                    sub.cells
                        .iter()
                        .map(|c| Value::Array(c.iter().map(|&i| json!(i)).collect()))
                        .collect(),
                ),
            );
            obj.insert("lifting".into(), lifting_json(&sub.lifting));
            obj.insert("simplicial".into(), json!(simplicial));
            Ok(pretty(&Value::Object(obj)))
        }
        TriangulateCmd::Primitive2d { polytope } => {
            let p = load_polytope(&polytope)?;
            let t = primitive_convex_2d(&p)?;
            Ok(pretty(&triangulation_json(&t)?))
        }
        TriangulateCmd::Layered { d, m } => {
            let lt = layered_triangulation(d, m)?;
            let mut obj = Map::new();
            obj.insert("dim".into(), json!(lt.dim));
            obj.insert("size".into(), json!(lt.size));
            obj.insert(
                "triangulation".into(),
                triangulation_json(&lt.triangulation)?,
            );
            Ok(pretty(&Value::Object(obj)))
        }
    }
}

fn complex_stats(c: &PLComplex) -> Value {
    json!({
        "vertex_count": c.vertices.len(),
        "cell_counts": c.cell_counts(),
        "euler_char": c.euler_char(),
    })
}

fn complex_json(c: &PLComplex) -> Value {
    let vertices: Vec<Value> = c
        .vertices
        .iter()
        .map(|v| Value::Array(v.iter().map(rat_json).collect()))
        .collect();
    let cells: Vec<Value> = c
        .cells
        .iter()
        .map(|layer| {
            Value::Array(
                layer
                    .iter()
                    .map(|cell| {
                        Value::Array(cell.vertex_indices.iter().map(|&i| json!(i)).collect())
                    })
                    .collect(),
            )
        })
        .collect();
    json!({"vertices": vertices, "cells": cells})
}

fn run_patchwork(cmd: PatchworkCmd) -> Result<String, CliError> {
    match cmd {
        PatchworkCmd::Build {
            polytope,
            triangulation,
            signs,
        } => {
            let p = load_polytope(&polytope)?;
            let t = load_triangulation(&triangulation)?;
            let sg = load_signs(&signs)?;
            let s = extend_symmetric(&p, &t, &sg)?;
            let ambient = build_hypersurface(&s);
            let quotient = hypersurface_quotient(&s)?;
            Ok(pretty(&json!({
                "dim": s.dim,
                "hypersurface": complex_stats(&ambient),
                "quotient": complex_stats(&quotient),
            })))
        }
        PatchworkCmd::Betti {
            polytope,
            triangulation,
            signs,
        } => {
            let p = load_polytope(&polytope)?;
            let t = load_triangulation(&triangulation)?;
            let sg = load_signs(&signs)?;
            let (betti, total) = patchwork_real_betti(&p, &t, &sg)?;
            Ok(pretty(&json!({"betti": betti, "total": total})))
        }
        PatchworkCmd::Export {
            polytope,
            triangulation,
            signs,
            format,
        } => {
            let p = load_polytope(&polytope)?;
            let t = load_triangulation(&triangulation)?;
            let sg = load_signs(&signs)?;
            let s = extend_symmetric(&p, &t, &sg)?;
            let c = build_hypersurface(&s);
            match format {
                ExportFormat::Json => Ok(pretty(&complex_json(&c))),
                ExportFormat::Obj => mesh::export_obj(&c),
                ExportFormat::Svg => mesh::export_svg(&c),
            }
        }
    }
}

/// Size `s` when the polytope is `s` times the standard simplex (vertex
/// set `{0, s e_1, ..., s e_d}`), otherwise `None`.
fn standard_simplex_size(p: &LatticePolytope) -> Option<i64> {
    let d = p.ambient_dim();
    let verts = p.vertices();
    if p.dim() != d || verts.len() != d + 1 {
        return None;
    }
    let mut size: Option<Int> = None;
    let mut seen_origin = false;
    let mut seen_axis = vec![false; d];
    for v in verts {
        let support: Vec<usize> = (0..d).filter(|&i| !v[i].is_zero()).collect();
        match support.len() {
            0 => seen_origin = true,
            1 => {
                let i = support[0];
                let s = v[i].clone();
                if s <= Int::zero() || seen_axis[i] {
                    return None;
                }
                match &size {
                    None => size = Some(s),
                    Some(t) if *t == s => {}
                    _ => return None,
                }
                seen_axis[i] = true;
            }
            _ => return None,
        }
    }
    if seen_origin && seen_axis.iter().all(|&b| b) {
        size.and_then(|s| s.to_i64())
    } else {
        None
    }
}

fn run_layered(cmd: LayeredCmd) -> Result<String, CliError> {
    match cmd {
        LayeredCmd::Bound { d, m } => {
            let bound = layered_lower_bound(d, m);
            Ok(pretty(&json!({
                "d": d,
                "m": m,
                "lower_bound": int_json(&bound)?,
            })))
        }
        LayeredCmd::Cycles { d, m } => {
            let witnesses = narrow_cycles(d, m)?;
            let mut by_dim: BTreeMap<String, usize> = BTreeMap::new();
            for w in &witnesses {
                *by_dim.entry(w.narrow_dim.to_string()).or_insert(0) += 1;
            }
            Ok(pretty(&json!({
                "d": d,
                "m": m,
                "witness_count": witnesses.len(),
                "by_narrow_dim": by_dim,
                "lower_bound": int_json(&layered_lower_bound(d, m))?,
            })))
        }
        LayeredCmd::Verify { d, m } => {
            let witnesses = narrow_cycles(d, m)?;
            let report = verify_cycles(d, m, &witnesses)?;
            Ok(pretty(&json!({
                "d": d,
                "m": m,
                "witness_count": report.witness_count,
                "narrow_failures": report.narrow_failures,
                "dual_failures": report.dual_failures,
                "dual_touches_hypersurface": report.dual_touches_hypersurface,
                "independent_rank": report.independent_rank,
                "independence_ok": report.independence_ok,
                "pass": report.pass,
            })))
        }
        LayeredCmd::Asymptotic {
            polytope,
            triangulation,
            lambda,
        } => {
            let base = load_polytope(&polytope)?;
            let coarse = load_triangulation(&triangulation)?;
            let (fine, signs) = asymptotic_patchwork_data(&base, &coarse, lambda)?;
            let big = base.dilate(&int(lambda));
            let (betti, total) = patchwork_real_betti(&big, &fine, &signs)?;
            let mut obj = Map::new();
            obj.insert("lambda".into(), json!(lambda));
            obj.insert("dim".into(), json!(base.ambient_dim()));
            obj.insert("point_count".into(), json!(fine.points.len()));
            obj.insert("betti".into(), json!(betti));
            obj.insert("real_total".into(), json!(total));
            if let Some(s) = standard_simplex_size(&base) {
                let complex =
                    projective_hypersurface_betti(base.ambient_dim(), s * lambda)?;
                if let (Some(c), Some(r)) = (complex.to_f64(), total.to_f64()) {
                    if c > 0.0 {
                        obj.insert("ratio".into(), json!(r / c));
                    }
                }
                obj.insert("complex_total".into(), int_json(&complex)?);
            }
            Ok(pretty(&Value::Object(obj)))
        }
    }
}

fn run_cayley(cmd: CayleyCmd) -> Result<String, CliError> {
    match cmd {
        CayleyCmd::Build { system } => {
            let entries = parse_system(&load_json(&system)?)?;
            let polys: Vec<LatticePolytope> =
                entries.into_iter().map(|e| e.polytope).collect();
            let cp = cayley_polytope(&polys)?;
            Ok(pretty(&json!({
                "k": cp.k,
                "dim": cp.dim,
                "polytope": polytope_json(&cp.polytope)?,
            })))
        }
        CayleyCmd::Mixed { system } => {
            let entries = parse_system(&load_json(&system)?)?;
            let ts: Vec<Triangulation> =
                entries.into_iter().map(|e| e.triangulation).collect();
            let ms = mixed_subdivision(&ts)?;
            let cells: Vec<Value> = ms
                .normal_form()
                .iter()
                .map(|cell| {
                    let parts: Result<Vec<Value>, CliError> =
                        cell.iter().map(|pts| points_json(pts)).collect();
                    parts.map(Value::Array)
                })
                .collect::<Result<_, _>>()?;
            let mut obj = Map::new();
            obj.insert("dim".into(), json!(ms.dim));
            obj.insert("k".into(), json!(ms.k));
            obj.insert("cell_count".into(), json!(ms.cells.len()));
            obj.insert("cells".into(), Value::Array(cells));
            obj.insert("total".into(), polytope_json(&ms.total)?);
            if ms.k == ms.dim {
                obj.insert(
                    "mixed_cells_volume".into(),
                    int_json(&ms.mixed_cells_volume()?)?,
                );
            }
            Ok(pretty(&Value::Object(obj)))
        }
        CayleyCmd::Ci { system } => {
            let entries = parse_system(&load_json(&system)?)?;
            let factors: Vec<CiFactor> = entries
                .into_iter()
                .map(|e| CiFactor {
                    triangulation: e.triangulation,
                    signs: e.signs,
                })
                .collect();
            let model = sturmfels_ci(&factors)?;
            let points: Vec<Value> = model
                .points
                .iter()
                .map(|p| Value::Array(p.iter().map(rat_json).collect()))
                .collect();
            Ok(pretty(&json!({
                "dim": model.dim,
                "k": model.k,
                "cells_by_dim": model.cells_by_dim,
                "point_count": model.points.len(),
                "points": points,
            })))
        }
        CayleyCmd::Cycles { d, k, sizes } => {
            let sizes = parse_i64_list(&sizes, "--sizes")?;
            let witnesses = ci_narrow_cycles(d, k, &sizes)?;
            let verified = witnesses.iter().filter(|w| verify_ci_witness(w)).count();
            let bound = ci_betti_lower_bound(d, k, &sizes)?;
            Ok(pretty(&json!({
                "d": d,
                "k": k,
                "sizes": sizes,
                "witness_count": witnesses.len(),
                "verified_count": verified,
                "lower_bound": int_json(&bound)?,
            })))
        }
    }
}

fn run_formulas(cmd: FormulasCmd) -> Result<String, CliError> {
    match cmd {
        FormulasCmd::Betti3 { polytope } => {
            let p = load_polytope(&polytope)?;
            Ok(bare_int(&hypersurface_betti_3d(&p)?))
        }
        FormulasCmd::Projective { d, m } => Ok(bare_int(&projective_hypersurface_betti(d, m)?)),
        FormulasCmd::EulerCi {
            system,
            polytope,
            lambdas,
        } => match (system, polytope, lambdas) {
            (Some(path), None, None) => {
                let entries = parse_system(&load_json(&path)?)?;
                let polys: Vec<LatticePolytope> =
                    entries.into_iter().map(|e| e.polytope).collect();
                Ok(bare_int(&euler_char_ci_torus(&polys)?))
            }
            (None, Some(path), Some(ls)) => {
                let base = load_polytope(&path)?;
                let lambdas: Vec<Int> = parse_i64_list(&ls, "--lambdas")?
                    .into_iter()
                    .map(int)
                    .collect();
                Ok(bare_int(&euler_char_ci_compact(&base, &lambdas)?))
            }
            _ => Err(CliError::Io(
                "pass either --system FILE, or --polytope FILE with --lambdas LIST".into(),
            )),
        },
        FormulasCmd::CiBetti { polytope, lambdas } => {
            let base = load_polytope(&polytope)?;
            let ls = parse_i64_list(&lambdas, "--lambdas")?;
            if ls.len() != 2 {
                return Err(CliError::Io(format!(
                    "--lambdas needs exactly two factors, got {}",
                    ls.len()
                )));
            }
            Ok(bare_int(&ci_betti_3d(&base, &int(ls[0]), &int(ls[1]))?))
        }
    }
}

/// For every closed orthant of `R^d`, whether the complex has a vertex in
/// it.  Cells lie inside single reflected copies, so their intersections
/// with orthant walls are again cells; a nonempty intersection with a
/// closed orthant therefore always shows up at a vertex.
fn copies_met(h: &PLComplex, d: usize) -> Vec<bool> {
    let mut met = vec![false; 1 << d];
    for v in &h.vertices {
        for (o, flag) in met.iter_mut().enumerate() {
            if !*flag
                && (0..d).all(|i| {
                    if o >> i & 1 == 1 {
                        !v[i].is_positive()
                    } else {
                        !v[i].is_negative()
                    }
                })
            {
                *flag = true;
            }
        }
    }
    met
}

fn verdict(real: &Int, complex: &Int) -> &'static str {
    match real.cmp(complex) {
        std::cmp::Ordering::Less => "non-maximal",
        std::cmp::Ordering::Equal => "maximal",
        std::cmp::Ordering::Greater => "exceeds",
    }
}

fn run_scenario(name: &str, m: Option<i64>, k: Option<i64>) -> Result<String, CliError> {
    match name {
        "harnack" => {
            let m = m.ok_or_else(|| CliError::Io("scenario harnack needs --m".into()))?;
            if m < 1 {
                return Err(CliError::Domain("the degree must be at least 1".into()));
            }
            let verts = vec![
                vec![int(0), int(0)],
                vec![int(m), int(0)],
                vec![int(0), int(m)],
            ];
            let p = convex_hull(&verts)?;
            let t = primitive_convex_2d(&p)?;
            let even = |c: &Int| (c % int(2)).is_zero();
            let signs: Vec<i8> = t
                .points
                .iter()
                .map(|q| if even(&q[0]) && even(&q[1]) { -1 } else { 1 })
                .collect();
            let (betti, total) = patchwork_real_betti(&p, &t, &signs)?;
            let components = betti[0];
            let expected = (m - 1) * (m - 2) / 2 + 1;
            let complex_total = projective_hypersurface_betti(2, m)?;
            let real_total = int(total as i64);
            Ok(pretty(&json!({
                "scenario": "harnack",
                "m": m,
                "components": components,
                "expected_components": expected,
                "betti": betti,
                "real_total": total,
                "complex_total": int_json(&complex_total)?,
                "verdict": verdict(&real_total, &complex_total),
            })))
        }
        "skew-simplex" => {
            let k = k.ok_or_else(|| CliError::Io("scenario skew-simplex needs --k".into()))?;
            let p = skew_simplex(3, k)?;
            let t = Triangulation {
                points: p.vertices().to_vec(),
                simplices: vec![vec![0, 1, 2, 3]],
                lifting: Some(vec![Rat::zero(); 4]),
            };
            // Search sign choices in a fixed order and keep the first one
            // whose hypersurface crosses the most reflected copies.  For
            // even k a choice crossing all eight copies exists; for odd k
            // the three nonzero vertex parities are independent characters
            // of the reflection group, so every choice leaves exactly one
            // copy untouched (and indeed all choices give reflections of
            // one and the same hypersurface).
            let mut chosen: Option<(usize, usize, Vec<i8>)> = None;
            for mask in 0..16u32 {
                let signs: Vec<i8> = (0..4)
                    .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                let s = extend_symmetric(&p, &t, &signs)?;
                let crossed = orthant_mixed(&s).iter().filter(|&&b| b).count();
                let met = copies_met(&build_hypersurface(&s), 3)
                    .iter()
                    .filter(|&&b| b)
                    .count();
                if chosen.as_ref().map_or(true, |c| crossed > c.0) {
                    chosen = Some((crossed, met, signs));
                }
                if crossed == 8 {
                    break;
                }
            }
            let (crossed, met, signs) =
                chosen.ok_or_else(|| CliError::Domain("empty sign search".into()))?;
            let (betti, total) = patchwork_real_betti(&p, &t, &signs)?;
            let complex_total = hypersurface_betti_3d(&p)?;
            let real_total = int(total as i64);
            Ok(pretty(&json!({
                "scenario": "skew-simplex",
                "k": k,
                "signs": signs,
                "copies_met": met,
                "copies_crossed": crossed,
                "betti": betti,
                "real_total": total,
                "complex_total": int_json(&complex_total)?,
                "primitive": is_primitive(&t),
                "verdict": verdict(&real_total, &complex_total),
            })))
        }
        other => Err(CliError::Io(format!(
            "unknown scenario `{other}` (available: harnack, skew-simplex)"
        ))),
    }
}
