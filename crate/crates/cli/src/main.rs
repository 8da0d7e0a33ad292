//! Command-line entry point: SVP, contact-polar construction, orbit
//! classification, table verification, group orders, and Delone diagrams.
//! Formats are documented in docs/formats.md.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use contactpoly::classify::{classify_diagram, classify_orbit, delone_diagram, format_component_names, ClassifiedRow};
use contactpoly::engine::{
    enumerate_vertex_orbits, split_shared_additional, total_object_count, RecursionPolicy,
};
use contactpoly::exactalg::{parse_rat, rat_str, QVec, Rat};
use contactpoly::golay::{bundled_co0_group, bundled_table1, bundled_table2, parse_table};
use contactpoly::io as fmt_io;
use contactpoly::lattice::{
    build_named_lattice, closest_vectors, parse_lattice_name, shortest_vectors, Lattice,
    NamedLattice,
};
use contactpoly::symmetry::{
    action_on_min, group_order, named_automorphism_gens, parse_group_file, MatrixGroupGens,
};
use contactpoly::{Error, Result};
use num::Zero;

#[derive(Parser)]
#[command(name = "contactpoly", about = "Exact contact-polytope computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Named lattice ("leech", "an 3", "dn 4", "en 8", "zn 2") or a path to
    /// a lattice file
    #[arg(long)]
    lattice: String,
    /// Output directory (results print to stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the shortest nonzero vectors
    Svp {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Build the scaled polar of the contact polytope (H-representation)
    Contact {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate and classify vertex orbits of the contact polar
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        /// Group file path ("auto" = the lattice's own symmetry group)
        #[arg(long, default_value = "auto")]
        group: String,
        /// Seed vertex from this Table 2 row (1-indexed, Leech only)
        #[arg(long)]
        seed_row: Option<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Backtrack-search node budget
        #[arg(long)]
        budget: Option<u64>,
        /// Allow long runs and write a checkpoint
        #[arg(long)]
        extended: bool,
    },
    /// Check the bundled tables against recomputation
    VerifyTables {
        /// Check every row instead of the CI subset
        #[arg(long)]
        extended: bool,
    },
    /// Order of the symmetry group acting on the shortest vectors
    GroupOrder {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "auto")]
        group: String,
    },
    /// Coxeter-Dynkin diagram of the Delone cell around a point
    Delone {
        #[command(flatten)]
        common: CommonArgs,
        /// Take the center from this Table 1 row (1-indexed)
        #[arg(long)]
        seed_row: Option<usize>,
        /// File with ambient coordinates of the center (one line of rationals)
        vector_file: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Config(_)
        | Error::TableConsistency(_)
        | Error::Dimension { .. }
        | Error::Shape(_)
        | Error::RuleDomain(_)
        | Error::Io(_) => 2,
        Error::ActionMismatch(_) | Error::NotASymmetry(_) | Error::BadSeed(_) => 3,
        Error::Undecided(_) => 4,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}

fn resolve_lattice(spec: &str) -> Result<Lattice> {
    if let Ok(name) = parse_lattice_name(spec) {
        return build_named_lattice(&name);
    }
    let path = Path::new(spec);
    if path.exists() {
        return fmt_io::parse_lattice_file(&fs::read_to_string(path)?);
    }
    Err(Error::Config(format!(
        "{spec:?} is neither a known lattice name nor an existing file"
    )))
}

fn resolve_group(spec: &str, l: &Lattice) -> Result<(MatrixGroupGens, String)> {
    let text = if spec == "auto" {
        match &l.name {
            Some(NamedLattice::LeechMOG) => bundled_co0_group().to_string(),
            Some(name) => {
                let gens = named_automorphism_gens(name)?;
                gens.verify(l)?;
                return Ok((gens, "auto".into()));
            }
            None => {
                return Err(Error::Config(
                    "unnamed lattice: pass --group with a generator file".into(),
                ))
            }
        }
    } else {
        fs::read_to_string(spec)?
    };
    let gens = parse_group_file(&text)?;
    gens.verify(l)?;
    Ok((gens, text))
}

fn sha_hex(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

fn write_out(dir: &Option<PathBuf>, name: &str, text: &str) -> Result<()> {
    match dir {
        Some(d) => {
            fs::create_dir_all(d)?;
            fs::write(d.join(name), text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn epoch_secs() -> u64 {
    SystemTime::now()
        .duration_since(SystemTime::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Svp { common } => {
            let l = resolve_lattice(&common.lattice)?;
            let min = shortest_vectors(&l);
            println!(
                "lattice {} rank {}: {} shortest vectors, min norm^2 = {}",
                common.lattice,
                l.dim(),
                min.len(),
                rat_str(&min.min_norm_sq)
            );
            if common.out.is_some() {
                write_out(&common.out, "min.txt", &fmt_io::write_min_file(&min))?;
            }
            Ok(0)
        }
        Command::Contact { common } => {
            let l = resolve_lattice(&common.lattice)?;
            let min = shortest_vectors(&l);
            let h = contactpoly::polytope::contact_polar_from_min(&l, &min);
            let mut text = format!("H {} {}\n", h.dim, h.ineqs.len());
            for (a, b) in &h.ineqs {
                let row: Vec<String> = a.iter().map(rat_str).collect();
                text.push_str(&format!("{} | {}\n", row.join(" "), rat_str(b)));
            }
            println!(
                "contact polar of {}: {} inequalities in dimension {}",
                common.lattice,
                h.ineqs.len(),
                h.dim
            );
            if common.out.is_some() {
                write_out(&common.out, "contact.txt", &text)?;
            }
            Ok(0)
        }
        Command::Classify {
            common,
            group,
            seed_row,
            workers,
            budget,
            extended,
        } => cmd_classify(common, group, seed_row, workers, budget, extended),
        Command::VerifyTables { extended } => cmd_verify_tables(extended),
        Command::GroupOrder { common, group } => {
            let l = resolve_lattice(&common.lattice)?;
            let min = shortest_vectors(&l);
            let (gens, _) = resolve_group(&group, &l)?;
            let action = action_on_min(&gens, &min, &l)?;
            println!("{}", group_order(&action));
            Ok(0)
        }
        Command::Delone {
            common,
            seed_row,
            vector_file,
        } => {
            let l = resolve_lattice(&common.lattice)?;
            let v: QVec = match (seed_row, vector_file) {
                (Some(k), None) => {
                    let rows = parse_table(bundled_table1())?;
                    let row = rows
                        .get(k.checked_sub(1).ok_or_else(|| {
                            Error::Config("row numbers are 1-indexed".into())
                        })?)
                        .ok_or_else(|| Error::Config(format!("table has no row {k}")))?;
                    row.vector.ambient()
                }
                (None, Some(path)) => {
                    let text = fs::read_to_string(path)?;
                    text.split_whitespace()
                        .map(parse_rat)
                        .collect::<Result<QVec>>()?
                }
                _ => {
                    return Err(Error::Config(
                        "pass exactly one of --seed-row or a vector file".into(),
                    ))
                }
            };
            let (verts, diag) = delone_diagram(&l, &v)?;
            let comps = classify_diagram(&diag)?;
            println!("delone cell: {} vertices", verts.len());
            let names: Vec<String> = comps
                .iter()
                .map(|c| format!("{}({} nodes)", c.name, c.nodes.len()))
                .collect();
            println!("components: {}", names.join(" "));
            Ok(0)
        }
    }
}

fn seed_vertices(l: &Lattice, seed_row: Option<usize>) -> Result<Option<Vec<QVec>>> {
    let Some(k) = seed_row else { return Ok(None) };
    if l.name != Some(NamedLattice::LeechMOG) {
        return Err(Error::Config("--seed-row only applies to the Leech lattice".into()));
    }
    let rows = parse_table(bundled_table2())?;
    let row = rows
        .get(k.checked_sub(1).ok_or_else(|| Error::Config("row numbers are 1-indexed".into()))?)
        .ok_or_else(|| Error::Config(format!("table 2 has no row {k}")))?;
    let ambient = row.vector.ambient();
    let (coords, orth) = l.project(&ambient)?;
    if !orth.is_zero() {
        return Err(Error::Config("seed vector lies outside the lattice span".into()));
    }
    Ok(Some(vec![coords]))
}

/// Rebuilds the orbit bank from a completed checkpoint, re-certifying every
/// record against the current polytope. Returns None when there is nothing
/// usable (no file, or it belongs to a different run).
fn load_checkpoint(
    path: &Option<PathBuf>,
    extended: bool,
    g_order: u128,
    l: &Lattice,
    h: &contactpoly::polytope::HPolytope,
    action: &contactpoly::symmetry::PermAction,
) -> Result<Option<Vec<contactpoly::engine::OrbitRecord>>> {
    let Some(path) = path else { return Ok(None) };
    if !extended || !path.exists() {
        return Ok(None);
    }
    let (order, reports) = fmt_io::parse_checkpoint(&fs::read_to_string(path)?)?;
    if order != g_order {
        return Err(Error::Config(format!(
            "checkpoint group order {order} does not match this run's {g_order}"
        )));
    }
    let mut records = Vec::with_capacity(reports.len());
    for r in reports {
        let inc = contactpoly::polytope::incidence_set(h, &r.vertex)?;
        if inc.indices != r.tight {
            return Err(Error::Config(
                "checkpoint tight set disagrees with the current polytope".into(),
            ));
        }
        let mut norm = Rat::zero();
        for (i, yi) in r.vertex.iter().enumerate() {
            for (j, yj) in r.vertex.iter().enumerate() {
                norm += yi * yj * &l.gram.rows[i][j];
            }
        }
        if norm != r.norm_sq {
            return Err(Error::Config("checkpoint vertex norm disagrees".into()));
        }
        let key = contactpoly::symmetry::set_key(action, &r.tight);
        records.push(contactpoly::engine::OrbitRecord {
            rep_vertex: r.vertex,
            tight: inc,
            key,
            stabilizer_order: r.stabilizer_order,
            incidence_count: r.incidence_count,
            norm_sq: r.norm_sq,
        });
    }
    Ok(Some(records))
}

fn cmd_classify(
    common: CommonArgs,
    group: String,
    seed_row: Option<usize>,
    workers: usize,
    budget: Option<u64>,
    extended: bool,
) -> Result<i32> {
    let started = epoch_secs();
    let l = resolve_lattice(&common.lattice)?;
    let min = shortest_vectors(&l);
    let (gens, group_text) = resolve_group(&group, &l)?;
    let action = action_on_min(&gens, &min, &l)?;
    let h = contactpoly::polytope::contact_polar_from_min(&l, &min);
    let mut policy = RecursionPolicy {
        workers: workers.max(1),
        ..RecursionPolicy::default()
    };
    if let Some(b) = budget {
        policy.budget = b;
    }
    let seeds = seed_vertices(&l, seed_row)?;
    let g_order = group_order(&action);

    // a finished checkpoint lets extended reruns skip the enumeration
    let checkpoint_path = common.out.as_ref().map(|d| d.join("checkpoint.txt"));
    let budget_used = policy.budget;
    let records = match load_checkpoint(&checkpoint_path, extended, g_order, &l, &h, &action)? {
        Some(records) => {
            println!("resuming from checkpoint: {} orbits", records.len());
            records
        }
        None => enumerate_vertex_orbits(&h, &action, &l.gram, seeds.as_deref(), policy)?,
    };

    let (shared_idx, additional_idx) = split_shared_additional(&records, &l)?;
    let total = total_object_count(&records, g_order)?;

    let mut classified: Vec<ClassifiedRow> = Vec::with_capacity(records.len());
    for r in &records {
        match classify_orbit(r, &l, &min) {
            Ok(row) => classified.push(row),
            Err(Error::RuleDomain(_)) => {
                // non-Leech conventions have no diagram catalog; report the
                // orbit without a name
                let mut ambient = vec![Rat::zero(); l.ambient_dim()];
                for (yi, brow) in r.rep_vertex.iter().zip(&l.basis.rows) {
                    for (xj, bj) in ambient.iter_mut().zip(brow) {
                        *xj += yi * bj;
                    }
                }
                let (dist_sq, _) = closest_vectors(&l, &ambient)?;
                classified.push(ClassifiedRow {
                    name: "-".into(),
                    norm_sq: r.norm_sq.clone(),
                    n_count: r.incidence_count,
                    stabilizer_order: r.stabilizer_order,
                    vertex: ambient,
                    shared: dist_sq == r.norm_sq,
                    delone_count: None,
                });
            }
            Err(e) => return Err(e),
        }
    }

    let report = fmt_io::write_orbit_report(&records);
    let classified_text = fmt_io::write_classified_report(&classified);
    println!(
        "{} orbits ({} shared, {} additional), {} vertices total, group order {}",
        records.len(),
        shared_idx.len(),
        additional_idx.len(),
        total,
        g_order
    );
    write_out(&common.out, "report.txt", &report)?;
    write_out(&common.out, "classified.txt", &classified_text)?;
    if extended {
        if let Some(path) = &checkpoint_path {
            fs::write(path, fmt_io::write_checkpoint(g_order, &records))?;
        }
    }
    if common.out.is_some() {
        let manifest = format!(
            "command: classify\nlattice: {}\nlattice_sha256: {}\ngroup: {}\ngroup_sha256: {}\n\
             workers: {}\nbudget: {}\nseed_row: {}\nextended: {}\nstarted: {}\nfinished: {}\n\
             orbits: {}\nvertices_total: {}\nreport_sha256: {}\nclassified_sha256: {}\n",
            common.lattice,
            sha_hex(&fmt_io::write_lattice_file(&l)),
            group,
            sha_hex(&group_text),
            workers,
            budget_used,
            seed_row.map_or("-".to_string(), |k| k.to_string()),
            extended,
            started,
            epoch_secs(),
            records.len(),
            total,
            sha_hex(&report),
            sha_hex(&classified_text),
        );
        write_out(&common.out, "manifest.txt", &manifest)?;
    }
    Ok(0)
}

/// Table 1 rows whose printed name disagrees with their own vector under the
/// distance rule (the vectors compute to a1^22 a3 and a1^23 a2; the genuine
/// a1^25 pair is rows 163/164). Reported, not failed.
const TABLE1_NAME_EXCEPTIONS: [usize; 2] = [161, 162];

fn cmd_verify_tables(extended: bool) -> Result<i32> {
    let l = build_named_lattice(&NamedLattice::LeechMOG)?;
    let t1 = parse_table(bundled_table1())?;
    let t2 = parse_table(bundled_table2())?;
    let min = shortest_vectors(&l);

    // CI gates on a fixed sample; --extended checks every row
    let sample = |len: usize, stride: usize| -> Vec<usize> {
        if extended {
            (0..len).collect()
        } else {
            (0..len).step_by(stride).collect()
        }
    };
    let t1_rows = sample(t1.len(), 11); // 15 rows
    let t2_rows = sample(t2.len(), 13); // 6 rows

    let mut failures: Vec<String> = Vec::new();
    for &i in &t1_rows {
        let row = &t1[i];
        let v = row.vector.ambient();
        let (dist_sq, _) = closest_vectors(&l, &v)?;
        if dist_sq != row.norm_sq {
            failures.push(format!(
                "table1 row {}: dist^2 {} != norm^2 {}",
                i + 1,
                rat_str(&dist_sq),
                rat_str(&row.norm_sq)
            ));
            continue;
        }
        let (verts, diag) = delone_diagram(&l, &v)?;
        let comps = classify_diagram(&diag)?;
        let name = format_component_names(comps.into_iter().map(|c| c.name).collect(), false);
        let row_no = i + 1;
        if name != row.name {
            if TABLE1_NAME_EXCEPTIONS.contains(&row_no) {
                println!(
                    "table1 row {row_no}: printed name {} but vector computes to {} (known data note)",
                    row.name, name
                );
            } else {
                failures.push(format!(
                    "table1 row {row_no}: diagram {} != printed {}",
                    name, row.name
                ));
            }
        }
        if row.n != verts.len() as u64 {
            failures.push(format!(
                "table1 row {row_no}: {} delone vertices != N {}",
                verts.len(),
                row.n
            ));
        }
        println!("table1 row {row_no}: ok ({})", row.name);
    }

    let min_ambient: Vec<QVec> = min
        .vectors
        .iter()
        .map(|w| l.ambient(&w.coords))
        .collect();
    for &i in &t2_rows {
        let row = &t2[i];
        let v = row.vector.ambient();
        let (dist_sq, _) = closest_vectors(&l, &v)?;
        if dist_sq >= row.norm_sq {
            failures.push(format!(
                "table2 row {}: dist^2 {} not below norm^2 {}",
                i + 1,
                rat_str(&dist_sq),
                rat_str(&row.norm_sq)
            ));
            continue;
        }
        let two = contactpoly::exactalg::rat(2);
        let tight = min_ambient
            .iter()
            .filter(|w| l.inner(w, &v) == two)
            .count() as u64;
        if tight != row.n {
            failures.push(format!(
                "table2 row {}: tight count {} != N {}",
                i + 1,
                tight,
                row.n
            ));
        }
        println!("table2 row {}: ok ({})", i + 1, row.name);
    }

    if failures.is_empty() {
        println!(
            "verified {} table1 rows and {} table2 rows",
            t1_rows.len(),
            t2_rows.len()
        );
        Ok(0)
    } else {
        for f in &failures {
            eprintln!("FAIL {f}");
        }
        Ok(5)
    }
}
