//! `sas` — exact spline-space dimensions over meshes with curved edges.
//!
//! Subcommands mirror the library: validate a mesh file, sweep dimension
//! tables, fit Hilbert polynomials, evaluate the Euler-identity breakdown,
//! run genericity checks with the closed-form dimension, transfer through a
//! net, and tabulate ideal-complex homology.
//!
//! Exit codes: 0 success, 1 computation error (validation failure, not
//! stabilized, not generic, ...), 2 I/O or schema error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sas_core::generic::{self, GenericityOptions};
use sas_core::hilbert;
use sas_core::homology;
use sas_core::mesh::{Mesh, ValidatedMesh};
use sas_core::net::{self, ImageHilbert, NetSpec};
use sas_core::splinespace;

#[derive(Parser)]
#[command(
    name = "sas",
    about = "Exact spline space dimensions over curved meshes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Mesh JSON file.
    mesh: PathBuf,
    /// Smoothness order.
    #[arg(long, default_value_t = 0)]
    r: u32,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run all mesh validation checks and print the report.
    Validate {
        mesh: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Dimension of the smoothness space for each degree 0..=dmax.
    Dim {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        dmax: u32,
    },
    /// Hilbert polynomial, postulation number and series numerator.
    Hilbert {
        #[command(flatten)]
        common: CommonArgs,
        /// Degree cap; omit to derive one from the genericity bound.
        #[arg(long)]
        dmax: Option<u32>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Per-degree Euler-identity breakdown with a consistency column.
    Formula {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        dmax: u32,
    },
    /// Genericity report; optionally the closed-form dimension at a degree.
    Generic {
        #[command(flatten)]
        common: CommonArgs,
        /// Also evaluate the closed-form dimension at this degree.
        #[arg(long)]
        dim: Option<u32>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Include boundary vertices in the tangent condition.
        #[arg(long)]
        strict: bool,
    },
    /// Net transfer: image mesh, tensor reconstruction, polynomial
    /// transform.
    Net {
        #[command(flatten)]
        common: CommonArgs,
        /// Net JSON file ({"forms": [f, g, h]}).
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        dmax: u32,
    },
    /// Per-degree dimensions of the ideal-complex homology.
    Homology {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        dmax: u32,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SAS_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let msg = format!("{e:#}");
            if msg.contains("schema error")
                || msg.contains("cannot read")
                || msg.contains("os error")
            {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn read_file(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}

fn load_mesh(path: &PathBuf) -> anyhow::Result<ValidatedMesh> {
    let mesh = Mesh::parse_json(&read_file(path)?)?;
    Ok(ValidatedMesh::new(mesh)?)
}

struct TableOut {
    command: &'static str,
    input: String,
    r: u32,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    footer: Vec<String>,
}

impl TableOut {
    fn print(&self, format: Format) {
        match format {
            Format::Table => {
                let widths: Vec<usize> = self
                    .header
                    .iter()
                    .enumerate()
                    .map(|(i, h)| {
                        self.rows
                            .iter()
                            .map(|r| r[i].len())
                            .chain([h.len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let mut line = String::new();
                for (h, w) in self.header.iter().zip(&widths) {
                    let _ = write!(line, "{h:>w$} ");
                }
                println!("{}", line.trim_end());
                for row in &self.rows {
                    let mut line = String::new();
                    for (cell, w) in row.iter().zip(&widths) {
                        let _ = write!(line, "{cell:>w$} ");
                    }
                    println!("{}", line.trim_end());
                }
                for f in &self.footer {
                    println!("{f}");
                }
            }
            Format::Csv => {
                println!("{}", self.header.join(","));
                for row in &self.rows {
                    println!("{}", row.join(","));
                }
                for f in &self.footer {
                    println!("# {f}");
                }
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: serde_json::Map<String, serde_json::Value> = self
                            .header
                            .iter()
                            .zip(r)
                            .map(|(h, v)| {
                                let val = v
                                    .parse::<i64>()
                                    .map(serde_json::Value::from)
                                    .unwrap_or_else(|_| serde_json::Value::from(v.clone()));
                                (h.to_string(), val)
                            })
                            .collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let out = serde_json::json!({
                    "command": self.command,
                    "input": self.input,
                    "r": self.r,
                    "rows": rows,
                    "notes": self.footer,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Validate { mesh, format } => {
            let parsed = Mesh::parse_json(&read_file(&mesh)?)?;
            let report = parsed.validate();
            match format {
                Format::Json => {
                    let checks: Vec<serde_json::Value> = report
                        .checks()
                        .iter()
                        .map(|(name, c)| {
                            serde_json::json!({
                                "check": name,
                                "passed": c.passed(),
                                "failures": c.failures,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "command": "validate",
                            "input": mesh.display().to_string(),
                            "checks": checks,
                            "all_passed": report.all_passed(),
                        }))
                        .unwrap()
                    );
                }
                _ => print!("{report}"),
            }
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Dim { common, dmax } => {
            let vm = load_mesh(&common.mesh)?;
            let values = splinespace::hf_table(&vm, common.r, dmax);
            let rows = values
                .iter()
                .enumerate()
                .map(|(d, v)| vec![d.to_string(), v.to_string()])
                .collect();
            TableOut {
                command: "dim",
                input: common.mesh.display().to_string(),
                r: common.r,
                header: vec!["d", "dim"],
                rows,
                footer: vec![],
            }
            .print(common.format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Hilbert { common, dmax, tol } => {
            let vm = load_mesh(&common.mesh)?;
            let window = 4usize;
            let dmax = match dmax {
                Some(d) => d,
                None => {
                    let opts = GenericityOptions {
                        tol,
                        ..Default::default()
                    };
                    let report = generic::genericity_report(&vm, &opts)?;
                    if !report.all_passed() {
                        anyhow::bail!(
                            "mesh is not generic ({:?}); pass --dmax explicitly",
                            report.failing()
                        );
                    }
                    let bound = generic::regularity_bound(&vm, common.r);
                    (bound.d_max.saturating_sub(2) as u32 + 3).max(window as u32 + 3)
                }
            };
            let values = splinespace::hf_table(&vm, common.r, dmax);
            let data = hilbert::analyze(&values, window)?;
            let numer: Vec<String> = data
                .series_numerator
                .iter()
                .map(|c| c.to_string())
                .collect();
            let rows = values
                .iter()
                .enumerate()
                .map(|(d, v)| vec![d.to_string(), v.to_string()])
                .collect();
            TableOut {
                command: "hilbert",
                input: common.mesh.display().to_string(),
                r: common.r,
                header: vec!["d", "dim"],
                rows,
                footer: vec![
                    format!("hilbert_polynomial: {}", data.hp),
                    format!("postulation: {}", data.postulation),
                    format!("series_numerator: [{}]", numer.join(", ")),
                ],
            }
            .print(common.format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Formula { common, dmax } => {
            let vm = load_mesh(&common.mesh)?;
            use rayon::prelude::*;
            let per_degree: Vec<(homology::DimBreakdown, u64)> = (0..=dmax)
                .into_par_iter()
                .map(|d| {
                    (
                        homology::dim_formula(&vm, common.r, d),
                        splinespace::spline_dim(&vm, common.r, d),
                    )
                })
                .collect();
            let rows = per_degree
                .iter()
                .enumerate()
                .map(|(d, (b, direct))| {
                    vec![
                        d.to_string(),
                        b.faces_term.to_string(),
                        b.edges_term.to_string(),
                        b.vertices_term.to_string(),
                        b.h0_term.to_string(),
                        b.total.to_string(),
                        direct.to_string(),
                    ]
                })
                .collect();
            let consistent = per_degree.iter().all(|(b, direct)| b.total == *direct);
            TableOut {
                command: "formula",
                input: common.mesh.display().to_string(),
                r: common.r,
                header: vec![
                    "d",
                    "term_faces",
                    "term_edges",
                    "term_vertices",
                    "term_h0",
                    "total",
                    "direct",
                ],
                rows,
                footer: vec![format!("consistent: {consistent}")],
            }
            .print(common.format);
            if consistent {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Generic {
            common,
            dim,
            tol,
            strict,
        } => {
            let vm = load_mesh(&common.mesh)?;
            let opts = GenericityOptions {
                tol,
                strict_condition1: strict,
                ..Default::default()
            };
            let report = generic::genericity_report(&vm, &opts)?;
            print!("{report}");
            if let Some(d) = dim {
                let bound = generic::regularity_bound(&vm, common.r);
                match generic::generic_dim(&vm, common.r, d, &report) {
                    Ok(v) => {
                        println!("generic_dim(r={}, d={d}): {v}", common.r);
                        println!(
                            "certified for d >= {} (bound {})",
                            bound.d_max.saturating_sub(2),
                            bound.d_max
                        );
                    }
                    Err(e) => anyhow::bail!(e),
                }
            }
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Net { common, net, dmax } => {
            let vm = load_mesh(&common.mesh)?;
            let spec = NetSpec::parse_json(&read_file(&net)?)?;
            let (image, warnings) = net::image_mesh(&vm, &spec)?;
            let image_vm = ValidatedMesh::new(image)?;
            let image_cap = dmax / spec.n + 4;
            let image_hf = splinespace::hf_table(&image_vm, common.r, image_cap);
            let direct = splinespace::hf_table(&vm, common.r, dmax);
            let img_data = ImageHilbert::from_table(image_hf.clone());
            let mut rows = Vec::new();
            let mut consistent = true;
            for d in 0..=dmax as usize {
                let tensor = net::tensor_dim(&img_data, spec.n, d as u32)?;
                consistent &= tensor == direct[d];
                rows.push(vec![
                    d.to_string(),
                    image_hf.get(d).map_or_else(String::new, u64::to_string),
                    direct[d].to_string(),
                    tensor.to_string(),
                ]);
            }
            let mut footer = Vec::new();
            for w in &warnings {
                footer.push(format!("warning: {w}"));
            }
            footer.push(format!("tensor_consistent: {consistent}"));
            let window = 4usize;
            if let Ok(img_fit) = hilbert::fit_hp(&image_hf, window) {
                let post = hilbert::postulation(&image_hf, &img_fit);
                let (q, bound) = net::hp_transform(&img_fit, spec.n, Some(post));
                footer.push(format!("image_hp: {img_fit}"));
                footer.push(format!("mesh_hp: {q}"));
                if let Some(b) = bound {
                    footer.push(format!("postulation_bound: {b}"));
                }
            }
            TableOut {
                command: "net",
                input: common.mesh.display().to_string(),
                r: common.r,
                header: vec!["d", "dim_image", "dim_mesh", "dim_tensor"],
                rows,
                footer,
            }
            .print(common.format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Homology { common, dmax } => {
            let vm = load_mesh(&common.mesh)?;
            let table = homology::homology_table(&vm, common.r, dmax);
            let rows = table
                .iter()
                .enumerate()
                .map(|(d, (h0, h1, sv))| {
                    vec![
                        d.to_string(),
                        h0.to_string(),
                        h1.to_string(),
                        sv.to_string(),
                    ]
                })
                .collect();
            TableOut {
                command: "homology",
                input: common.mesh.display().to_string(),
                r: common.r,
                header: vec!["d", "h0", "h1", "sum_s_mod_jv"],
                rows,
                footer: vec![],
            }
            .print(common.format);
            Ok(ExitCode::SUCCESS)
        }
    }
}
