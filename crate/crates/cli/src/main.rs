//! Command-line front end for the building-block invariant library.
//!
//! Exit codes: 0 success, 1 malformed input, 2 mathematical inconsistency
//! or overflow.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::BigInt;
use serde_json::{json, Value};

use blockinv_core::blocks::{block_report, fano_rank1_rows, rank1_table_row, BlockDescriptor};
use blockinv_core::error::{Error, Result};
use blockinv_core::lattice::{
    is_isometric_bounded, orthogonal_complement, represent, GramLattice, LatticeProfile,
};
use blockinv_core::mat::{parse_matrix_text, smith_normal_form, Mat, Q};
use blockinv_core::toric::{
    build_resolution, enumerate_resolutions, fan_invariants, parse_polytope_batch,
    polytope_profile, projectivity, resolution_classes, LatticePolytope, PolytopeProfile,
};

#[derive(Parser)]
#[command(name = "blockinv", version, about = "Topological invariants of building blocks from weak Fano 3-folds")]
struct Cli {
    /// Emit structured JSON instead of the human-readable layout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integral lattice computations on Gram matrix files.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Building-block invariants from a JSON descriptor.
    Block(BlockArgs),
    /// Reflexive polytopes, crepant resolutions, and fan invariants.
    #[command(subcommand)]
    Toric(ToricCmd),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Rank, signature, parity, and discriminant group of a Gram matrix.
    Profile { file: PathBuf },
    /// Smith normal form D = U M V of an integer matrix.
    Snf { file: PathBuf },
    /// Orthogonal complement of a sublattice inside an ambient lattice.
    Complement {
        /// Gram matrix of the ambient lattice.
        #[arg(long)]
        ambient: PathBuf,
        /// Basis of the sublattice, one row per generator.
        #[arg(long)]
        sub: PathBuf,
    },
    /// Search for an isometry between two lattices.
    Isometric {
        a: PathBuf,
        b: PathBuf,
        /// Coefficient box for the basis-image search.
        #[arg(long, default_value_t = 4)]
        bound: i64,
    },
    /// All vectors of a given square with coordinates in a box.
    Represent {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        value: i64,
        #[arg(long, default_value_t = 4)]
        bound: i64,
    },
}

#[derive(Args)]
struct BlockArgs {
    /// Block descriptor JSON file.
    #[arg(required_unless_present = "table", conflicts_with = "table")]
    descriptor: Option<PathBuf>,
    /// Print a built-in table instead ("fano-rank1").
    #[arg(long)]
    table: Option<String>,
}

#[derive(Subcommand)]
enum ToricCmd {
    /// Reflexivity, terminality, node count, and resolution invariants.
    Profile { file: PathBuf },
    /// Census of crepant small resolutions.
    Resolutions {
        file: PathBuf,
        /// Also count isomorphism classes under lattice automorphisms.
        #[arg(long)]
        classes: bool,
        /// Print a projectivity certificate for every resolution.
        #[arg(long)]
        certificates: bool,
    },
    /// Smoothness, intersection numbers, and rigidity of one resolution.
    FanInvariants {
        file: PathBuf,
        /// One 0/1 digit per parallelogram facet, leftmost digit first.
        #[arg(long)]
        choice: String,
    },
}

fn main() -> ExitCode {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Lattice(sub) => run_lattice(sub, cli.json),
        Cmd::Block(args) => run_block(args, cli.json),
        Cmd::Toric(sub) => run_toric(sub, cli.json),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))
}

/// Invariant factors rendered as a product with exponents, e.g. "3^5".
fn render_disc(factors: &[BigInt]) -> String {
    if factors.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let run = factors[i..].iter().take_while(|f| **f == factors[i]).count();
        if run > 1 {
            parts.push(format!("{}^{}", factors[i], run));
        } else {
            parts.push(factors[i].to_string());
        }
        i += run;
    }
    parts.join("*")
}

fn render_signature(sig: (usize, usize, usize)) -> String {
    let (plus, zero, minus) = sig;
    if zero == 0 {
        format!("({plus},{minus})")
    } else {
        format!("({plus},{minus}; null {zero})")
    }
}

fn profile_value(p: &LatticeProfile) -> Value {
    json!({
        "rank": p.rank,
        "signature": [p.signature.0, p.signature.1, p.signature.2],
        "det": p.det.to_string(),
        "even": p.even,
        "disc_invariant_factors": p.disc_invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "p_elementary": p.p_elementary.as_ref().map(|(p, l)| json!({"p": p.to_string(), "l": l})),
    })
}

fn print_profile_human(p: &LatticeProfile) {
    println!("rank {}", p.rank);
    println!("signature {}", render_signature(p.signature));
    println!("det {}", p.det);
    println!("even {}", p.even);
    println!("disc {}", render_disc(&p.disc_invariant_factors));
    if let Some((prime, l)) = &p.p_elementary {
        println!("{prime}-elementary l={l}");
    }
}

fn mat_strings(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn run_lattice(cmd: &LatticeCmd, json_out: bool) -> Result<()> {
    match cmd {
        LatticeCmd::Profile { file } => {
            let g = GramLattice::from_text(&read(file)?)?;
            let p = g.profile();
            if json_out {
                println!("{}", serde_json::to_string_pretty(&profile_value(&p)).unwrap());
            } else {
                print_profile_human(&p);
            }
        }
        LatticeCmd::Snf { file } => {
            let m = parse_any_matrix(&read(file)?)?;
            let s = smith_normal_form(&m);
            if json_out {
                let doc = json!({
                    "d": mat_strings(&s.d),
                    "u": mat_strings(&s.u),
                    "v": mat_strings(&s.v),
                    "rank": s.rank(),
                    "invariant_factors": s.invariant_factors().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                let factors: Vec<String> =
                    s.invariant_factors().iter().map(|f| f.to_string()).collect();
                println!("rank {}", s.rank());
                println!("invariant factors {}", factors.join(" "));
                println!("d {:?}", mat_rows_display(&s.d));
                println!("u {:?}", mat_rows_display(&s.u));
                println!("v {:?}", mat_rows_display(&s.v));
            }
        }
        LatticeCmd::Complement { ambient, sub } => {
            let g = GramLattice::from_text(&read(ambient)?)?;
            let basis = parse_matrix_text(&read(sub)?)?;
            let (comp, induced) = orthogonal_complement(&g, &basis)?;
            let p = induced.profile();
            if json_out {
                let doc = json!({
                    "basis": comp.to_i64_rows()?,
                    "gram": induced.gram().to_i64_rows()?,
                    "profile": profile_value(&p),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("complement rank {}", comp.rows());
                println!("basis {:?}", comp.to_i64_rows()?);
                println!("gram {:?}", induced.gram().to_i64_rows()?);
                print_profile_human(&p);
            }
        }
        LatticeCmd::Isometric { a, b, bound } => {
            let ga = GramLattice::from_text(&read(a)?)?;
            let gb = GramLattice::from_text(&read(b)?)?;
            let found = is_isometric_bounded(&ga, &gb, *bound)?;
            if json_out {
                let doc = json!({
                    "isometric": found.is_some(),
                    "transform": found.as_ref().map(|m| m.to_i64_rows()).transpose()?,
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("isometric {}", found.is_some());
                if let Some(m) = &found {
                    println!("transform {:?}", m.to_i64_rows()?);
                }
            }
        }
        LatticeCmd::Represent { file, value, bound } => {
            let g = GramLattice::from_text(&read(file)?)?;
            let vectors = represent(&g, *value, *bound);
            if json_out {
                let doc = json!({"count": vectors.len(), "vectors": vectors});
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("count {}", vectors.len());
                for v in &vectors {
                    println!("{v:?}");
                }
            }
        }
    }
    Ok(())
}

/// Accept either a Gram file (`n` header) or a rectangular file
/// (`rows cols` header).
fn parse_any_matrix(text: &str) -> Result<Mat> {
    let nums = blockinv_core::mat::parse_ints(text)?;
    if let Some(n) = nums.first() {
        if let Ok(n) = usize::try_from(n.clone()) {
            if nums.len() == 1 + n * n {
                let g = GramLattice::from_text(text);
                if let Ok(g) = g {
                    return Ok(g.gram().clone());
                }
            }
        }
    }
    parse_matrix_text(text)
}

fn mat_rows_display(m: &Mat) -> Vec<Vec<String>> {
    mat_strings(m)
}

fn run_block(args: &BlockArgs, json_out: bool) -> Result<()> {
    if let Some(table) = &args.table {
        if table != "fano-rank1" {
            return Err(Error::MalformedInput(format!(
                "unknown table {table:?}; available: fano-rank1"
            )));
        }
        let rows: Vec<Value> = fano_rank1_rows()
            .iter()
            .map(|w| {
                let row = rank1_table_row(w)?;
                Ok(json!({
                    "name": w.name,
                    "degree": w.degree,
                    "b3_Z": row.b3_z,
                    "div_c2": row.div_c2,
                }))
            })
            .collect::<Result<_>>()?;
        if json_out {
            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        } else {
            println!("{:<6} {:>5} {:>5} {:>7}", "name", "-K^3", "b3_Z", "div_c2");
            for r in &rows {
                println!(
                    "{:<6} {:>5} {:>5} {:>7}",
                    r["name"].as_str().unwrap(),
                    r["degree"].to_string(),
                    r["b3_Z"].to_string(),
                    r["div_c2"].to_string()
                );
            }
        }
        return Ok(());
    }
    let path = args.descriptor.as_ref().unwrap();
    let descriptor = BlockDescriptor::from_json(&read(path)?)?;
    let report = block_report(&descriptor)?;
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("name: {}", report.name);
        println!("degree: {}", report.degree);
        println!("h2_Z: {}", report.h2_z);
        println!("N_gram: {:?}", report.n_gram);
        println!("rank_K: {}", report.rank_k);
        println!("b3_Z: {}", report.b3_z);
        println!("div_c2: {}", report.div_c2);
        println!("e: {}", report.e);
        println!("checks:");
        for c in &report.checks {
            println!("  - {c}");
        }
    }
    Ok(())
}

#[derive(serde::Serialize)]
#[serde(untagged)]
enum BatchRecord {
    Ok(PolytopeProfile),
    Err { error: String },
}

fn load_records(path: &Path) -> Result<Vec<Result<LatticePolytope>>> {
    let records = parse_polytope_batch(&read(path)?)?;
    if records.is_empty() {
        return Err(Error::MalformedInput("no polytope record found".into()));
    }
    Ok(records)
}

fn print_polytope_profile(p: &PolytopeProfile) {
    println!("vertices {}", p.vertices);
    println!("facets {}", p.facets);
    println!("lattice_points {}", p.lattice_points);
    println!("reflexive {}", p.reflexive);
    if let Some(v) = p.self_dual {
        println!("self_dual {v}");
    }
    if let Some(v) = p.terminal {
        println!("terminal {v}");
    }
    if let Some(v) = p.semismall {
        println!("semismall {v}");
    }
    if let Some(v) = p.e {
        println!("e {v}");
    }
    if let Some(v) = p.rho_resolution {
        println!("rho_resolution {v}");
    }
    if let Some(v) = p.degree {
        println!("degree {v}");
    }
    if let Some(v) = p.genus {
        println!("genus {v}");
    }
    if let Some(v) = p.rho_x {
        println!("rho_X {v}");
    }
    if let Some(v) = p.sigma {
        println!("sigma {v}");
    }
}

fn render_q(q: &Q) -> String {
    q.to_string()
}

fn mask_bits(mask: u64, e: usize) -> String {
    (0..e)
        .map(|p| if (mask >> p) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn run_toric(cmd: &ToricCmd, json_out: bool) -> Result<()> {
    match cmd {
        ToricCmd::Profile { file } => {
            let records = load_records(file)?;
            if records.len() == 1 {
                let poly = records.into_iter().next().unwrap()?;
                let p = polytope_profile(&poly)?;
                if json_out {
                    println!("{}", serde_json::to_string_pretty(&p).unwrap());
                } else {
                    print_polytope_profile(&p);
                }
                return Ok(());
            }
            let results: Vec<BatchRecord> = records
                .into_iter()
                .map(|r| match r.and_then(|poly| polytope_profile(&poly)) {
                    Ok(p) => BatchRecord::Ok(p),
                    Err(e) => BatchRecord::Err { error: e.to_string() },
                })
                .collect();
            if json_out {
                println!("{}", serde_json::to_string_pretty(&results).unwrap());
            } else {
                for (i, rec) in results.iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    println!("record {}", i + 1);
                    match rec {
                        BatchRecord::Ok(p) => print_polytope_profile(p),
                        BatchRecord::Err { error } => println!("error: {error}"),
                    }
                }
            }
        }
        ToricCmd::Resolutions { file, classes, certificates } => {
            let records = load_records(file)?;
            let single = records.len() == 1;
            let mut docs = Vec::new();
            let mut failures = Vec::new();
            for (i, rec) in records.into_iter().enumerate() {
                match rec.and_then(|poly| resolutions_doc(&poly, *classes, *certificates)) {
                    Ok(doc) => docs.push((i, Ok(doc))),
                    Err(e) if single => return Err(e),
                    Err(e) => {
                        failures.push(i);
                        docs.push((i, Err(e.to_string())));
                    }
                }
            }
            if json_out {
                let values: Vec<Value> = docs
                    .iter()
                    .map(|(_, d)| match d {
                        Ok(v) => v.clone(),
                        Err(e) => json!({"error": e}),
                    })
                    .collect();
                if single {
                    println!("{}", serde_json::to_string_pretty(&values[0]).unwrap());
                } else {
                    println!("{}", serde_json::to_string_pretty(&values).unwrap());
                }
            } else {
                for (i, doc) in &docs {
                    if !single {
                        if *i > 0 {
                            println!();
                        }
                        println!("record {}", i + 1);
                    }
                    match doc {
                        Ok(v) => print_resolutions_human(v),
                        Err(e) => println!("error: {e}"),
                    }
                }
            }
        }
        ToricCmd::FanInvariants { file, choice } => {
            let records = load_records(file)?;
            if records.len() != 1 {
                return Err(Error::MalformedInput(
                    "fan-invariants requires a single-polytope file".into(),
                ));
            }
            let poly = records.into_iter().next().unwrap()?;
            let bits: Vec<u8> = choice
                .chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(Error::MalformedInput(format!(
                        "choice digits must be 0 or 1, found {other:?}"
                    ))),
                })
                .collect::<Result<_>>()?;
            let fan = build_resolution(&poly, &bits)?;
            let inv = fan_invariants(&poly, &fan)?;
            if json_out {
                let doc = json!({
                    "smooth": inv.smooth,
                    "anti_K_cubed": inv.anti_k_cubed,
                    "boundary_gram": inv.boundary_gram.gram().to_i64_rows()?,
                    "row_sums": inv.row_sums,
                    "c2_D": inv.c2_d,
                    "c2_c1sq_D": inv.c2_c1sq_d,
                    "demazure_roots": inv.demazure_roots,
                    "h1_tangent": inv.h1_tangent,
                    "rigid": inv.rigid,
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("smooth {}", inv.smooth);
                println!("anti_K_cubed {}", inv.anti_k_cubed);
                println!("row_sums {:?}", inv.row_sums);
                println!("c2_D {:?}", inv.c2_d);
                println!("c2_c1sq_D {:?}", inv.c2_c1sq_d);
                println!("boundary_gram {:?}", inv.boundary_gram.gram().to_i64_rows()?);
                println!("demazure_roots {}", inv.demazure_roots);
                println!("h1_tangent {}", inv.h1_tangent);
                println!("rigid {}", inv.rigid);
            }
        }
    }
    Ok(())
}

fn resolutions_doc(poly: &LatticePolytope, classes: bool, certificates: bool) -> Result<Value> {
    let census = resolution_classes(poly)?;
    let mut doc = json!({
        "e": census.e,
        "total": census.total,
        "projective": census.projective,
    });
    if classes {
        doc["classes"] = json!(census.classes);
    }
    if certificates {
        let fans = enumerate_resolutions(poly)?;
        let mut certs = Vec::new();
        for (mask, fan) in fans.iter().enumerate() {
            let cert = projectivity(fan)?;
            certs.push(json!({
                "mask": mask_bits(mask as u64, census.e),
                "projective": cert.projective,
                "epsilon": render_q(&cert.epsilon),
                "heights": cert.heights.as_ref().map(|hs| {
                    hs.iter().map(render_q).collect::<Vec<_>>()
                }),
            }));
        }
        doc["certificates"] = Value::Array(certs);
    }
    Ok(doc)
}

fn print_resolutions_human(doc: &Value) {
    println!("e {}", doc["e"]);
    println!("total {}", doc["total"]);
    println!("projective {}", doc["projective"]);
    if let Some(classes) = doc.get("classes") {
        println!("classes {classes}");
    }
    if let Some(certs) = doc.get("certificates").and_then(|c| c.as_array()) {
        for c in certs {
            let heights = match c.get("heights") {
                Some(Value::Array(hs)) => {
                    let rendered: Vec<&str> = hs.iter().map(|h| h.as_str().unwrap()).collect();
                    format!(" heights [{}]", rendered.join(", "))
                }
                _ => String::new(),
            };
            println!(
                "mask {} projective {} epsilon {}{heights}",
                c["mask"].as_str().unwrap(),
                c["projective"],
                c["epsilon"].as_str().unwrap()
            );
        }
    }
}
