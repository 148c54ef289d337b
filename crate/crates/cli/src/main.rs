//! `geotri`: triangulate a piecewise-flat surface, verify a result, draw it.

mod svg;

use clap::{Args, Parser, Subcommand};
use geotri_core::diameter::surface_diameter_lower;
use geotri_core::format::{ResultFile, RunConfig};
use geotri_core::mesh::{load_mesh_files, LoadError};
use geotri_core::IntrinsicMesh;
use geotri_pipeline::{triangulate_surface, PipelineError};
use geotri_verify::{verify_triangulation, VerifyError, VerifyOptions, DEFAULT_ORACLE_N, DEFAULT_SAMPLES, DEFAULT_SEED};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_STAGE_FAILED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
/// Unreadable input or unwritable output.
const EXIT_IO: u8 = 66;

#[derive(Parser)]
#[command(name = "geotri", version, about = "Convex triangulations of piecewise-flat surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decompose a surface into small non-overlapping convex triangles.
    Triangulate {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol_len: Option<f64>,
        #[arg(long)]
        tol_area: Option<f64>,
        #[arg(long)]
        tol_angle: Option<f64>,
        #[arg(long)]
        h_net: Option<f64>,
        #[arg(long)]
        h_arc: Option<f64>,
        /// Record the regions after every stage.
        #[arg(long)]
        snapshots: bool,
        /// Result file; standard output when absent.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Re-check a result file against its mesh.
    Verify {
        #[command(flatten)]
        mesh: MeshArgs,
        result: PathBuf,
        /// Diameter target; the run's epsilon when absent.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_ORACLE_N)]
        oracle_n: usize,
        /// Print the full JSON report instead of the summary.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report here.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Draw every triangle of a result.
    ExportSvg {
        #[command(flatten)]
        mesh: MeshArgs,
        result: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Summarize a mesh, and a result computed on it if given.
    Info {
        #[command(flatten)]
        mesh: MeshArgs,
        result: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MeshArgs {
    /// OFF file; `<stem>.lengths` and `<stem>.ident` beside it are read when present.
    mesh: PathBuf,
    /// Intrinsic edge lengths, one `edge length` pair per line.
    #[arg(long)]
    lengths: Option<PathBuf>,
    /// Edge identifications, one `face edge face edge` line per gluing.
    #[arg(long)]
    ident: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

impl MeshArgs {
    fn sidecar(&self, given: &Option<PathBuf>, ext: &str) -> Option<PathBuf> {
        given.clone().or_else(|| Some(self.mesh.with_extension(ext)).filter(|p| p.is_file()))
    }

    fn load(&self) -> Result<IntrinsicMesh, Failure> {
        let lengths = self.sidecar(&self.lengths, "lengths");
        let ident = self.sidecar(&self.ident, "ident");
        load_mesh_files(&self.mesh, lengths.as_deref(), ident.as_deref()).map_err(|e| match e {
            LoadError::Io(..) => fail(EXIT_IO, e.to_string()),
            _ => fail(EXIT_DATA, format!("{}: {e}", self.mesh.display())),
        })
    }
}

fn read_result(path: &Path) -> Result<ResultFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    ResultFile::from_json(&text).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| fail(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

fn check_hash(m: &IntrinsicMesh, r: &ResultFile) -> Result<(), Failure> {
    let h = m.hash();
    if r.mesh_hash != h {
        return Err(fail(EXIT_DATA, format!("result belongs to mesh {}, this mesh is {h}", r.mesh_hash)));
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Triangulate { mesh, epsilon, seed, tol_len, tol_area, tol_angle, h_net, h_arc, snapshots, output } => {
            let cfg = RunConfig { epsilon, seed, tol_len, tol_area, tol_angle, h_net, h_arc, snapshots };
            cfg.validate().map_err(|e| fail(EXIT_USAGE, e))?;
            let m = mesh.load()?;
            let result = triangulate_surface(&m, &cfg).map_err(|e| match e {
                PipelineError::InvalidEpsilon(_) => fail(EXIT_USAGE, e.to_string()),
                _ => fail(EXIT_STAGE_FAILED, format!("triangulation failed: {e}")),
            })?;
            for s in &result.stages {
                eprintln!("{:<12} {:>6} regions  area {:.12}  {:.3} s", s.stage.as_str(), s.regions, s.area, s.seconds);
            }
            eprintln!("{} triangles", result.triangles.len());
            let json = result.to_file(&m).to_json();
            match output {
                Some(p) => write_out(&p, &json)?,
                None => println!("{json}"),
            }
            Ok(EXIT_OK)
        }
        Cmd::Verify { mesh, result, epsilon, seed, samples, oracle_n, json, output } => {
            if let Some(e) = epsilon.filter(|e| !(*e > 0.0 && e.is_finite())) {
                return Err(fail(EXIT_USAGE, format!("epsilon must be positive, got {e}")));
            }
            let m = mesh.load()?;
            let r = read_result(&result)?;
            check_hash(&m, &r)?;
            let opts = VerifyOptions { epsilon, seed, samples, oracle_n };
            let report = verify_triangulation(&m, &r, &opts).map_err(|e| match e {
                VerifyError::MeshMismatch { .. } => fail(EXIT_DATA, e.to_string()),
                VerifyError::OracleTooCoarse(_) => fail(EXIT_USAGE, e.to_string()),
            })?;
            if let Some(p) = output {
                write_out(&p, &report.to_json())?;
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.passed {
                Ok(EXIT_OK)
            } else {
                let names: Vec<&str> = report.failed_checks().iter().map(|k| k.name()).collect();
                eprintln!("failed checks: {}", names.join(", "));
                Ok(EXIT_VERIFY_FAILED)
            }
        }
        Cmd::ExportSvg { mesh, result, output } => {
            let m = mesh.load()?;
            let r = read_result(&result)?;
            check_hash(&m, &r)?;
            write_out(&output, &svg::render(&m, &r))?;
            Ok(EXIT_OK)
        }
        Cmd::Info { mesh, result } => {
            let m = mesh.load()?;
            print_info(&m);
            if let Some(p) = result {
                let r = read_result(&p)?;
                check_hash(&m, &r)?;
                print_result_info(&r);
            }
            Ok(EXIT_OK)
        }
    }
}

fn print_info(m: &IntrinsicMesh) {
    println!("hash          {}", m.hash());
    println!("faces         {}", m.n_faces());
    println!("edges         {}", m.n_edges());
    println!("vertices      {}", m.n_vertices());
    println!("euler char    {}", m.euler_characteristic());
    println!("boundary      {} loops", m.boundary_loops().len());
    println!("area          {}", m.area());
    println!("diameter  >=  {}", surface_diameter_lower(m));
    for v in 0..m.n_vertices() as u32 {
        let a = m.angle_sum(v);
        let flat = if m.is_boundary_vertex(v) { std::f64::consts::PI } else { std::f64::consts::TAU };
        if (a - flat).abs() > 1e-9 {
            let kind = if m.is_boundary_vertex(v) { "boundary corner" } else { "cone point" };
            println!("{kind:<14}{v}  angle {:.6} ({:.4} pi)", a, a / std::f64::consts::PI);
        }
    }
}

fn print_result_info(r: &ResultFile) {
    println!();
    println!("triangles     {}", r.triangles.len());
    println!("epsilon       {}", r.config.epsilon);
    let area_by_stage = |name: &str| r.triangles.iter().filter(|t| t.stage == name).count();
    for s in ["cover", "refine", "non_overlap", "triangulate", "bigon"] {
        let n = area_by_stage(s);
        if n > 0 {
            println!("  from {s:<12}{n}");
        }
    }
    let max_d = r.triangles.iter().map(|t| t.diameter).fold(0.0, f64::max);
    let min_s = r.triangles.iter().map(|t| t.slack).fold(f64::INFINITY, f64::min);
    println!("max diameter  {max_d}");
    println!("min slack     {min_s}");
    println!("side length   {}", r.total_side_length());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("geotri: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
