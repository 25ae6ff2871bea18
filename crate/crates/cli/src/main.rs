//! Command-line front end.
//!
//! Exit codes: 0 = true verdict / tiling / success, 1 = negative verdict,
//! 2 = usage or data error, 3 = search budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use simplex_sidon_core::bounds::bounds_report;
use simplex_sidon_core::catalog;
use simplex_sidon_core::construct::{
    construct_bh, construct_tiling, regenerate_stored, stored_certificates,
};
use simplex_sidon_core::correspond::{
    basis_to_covering, bh_to_packing, covering_to_basis, discretize_lattice, packing_to_bh,
    smallest_packing_height,
};
use simplex_sidon_core::group::SetFile;
use simplex_sidon_core::render::{render_svg, Window};
use simplex_sidon_core::search::{
    search_phi, search_psi, search_tiling, verify_certificate, Certificate, TilingSearch,
    DEFAULT_SEARCH_BUDGET,
};
use simplex_sidon_core::snf::snf;
use simplex_sidon_core::verify::{
    classify_arrangement, is_bh_set, is_generalized_basis, is_h_basis, ArrangementClass,
};
use simplex_sidon_core::{
    hnf, AbelianGroup, Error, IntMatrix, Lattice, Rat, Result, SearchConfig, ShapeSpec,
};

const BUDGET_ENV: &str = "SIMPLEX_SIDON_BUDGET";

#[derive(Parser)]
#[command(name = "simplex-sidon", version, about = "Exact Sidon-set and lattice-arrangement toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonicalize an integer basis into Hermite normal form.
    Hnf(MatrixArgs),
    /// Smith normal form with unimodular transforms.
    Snf(MatrixArgs),
    /// Check a set or an arrangement, with witnesses.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Translate between group-side sets and lattice-side arrangements.
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Round a rational basis onto the 1/h grid and classify the result.
    Discretize(DiscretizeArgs),
    /// Exhaustive extremal searches producing certificates.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Verified closed-form constructions.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Evaluate the exact bound formulas at (h, n).
    Bounds(BoundsArgs),
    /// Render a planar arrangement as SVG.
    Render(RenderArgs),
    /// Inspect or rebuild certificate catalogs.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Args)]
struct MatrixArgs {
    /// JSON file: {"n": N, "basis": [[...], ...]}
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Are all h-fold sums of the set distinct?
    Bh(SetArgs),
    /// Does every group element arise as an h-fold sum?
    Basis(SetArgs),
    /// Basis check with difference-body coefficients.
    Genbasis(GenBasisArgs),
    /// Classify (shape, lattice) as packing / covering / tiling / neither.
    Arrangement(ArrangementArgs),
}

#[derive(Args)]
struct SetArgs {
    /// Group file: {"factors": [...]}
    #[arg(long)]
    group: PathBuf,
    /// Set file: {"group": {...}, "elements": [[...], ...]}
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    h: u32,
}

#[derive(Args)]
struct GenBasisArgs {
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    t: u32,
}

#[derive(Args)]
struct ArrangementArgs {
    /// Shape spec, e.g. simplex:n=2,h=4 | diff:n=2,r=3,t=2 | cross:n=2,r=1
    #[arg(long)]
    shape: ShapeSpec,
    /// Lattice file (canonicalized on load).
    #[arg(long)]
    lattice: PathBuf,
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// B_h set -> kernel lattice packing.
    BhToLattice(SetArgs),
    /// Simplex packing -> B_h set in the quotient.
    LatticeToBh(LatticeHArgs),
    /// h-basis -> kernel lattice covering.
    BasisToLattice(SetArgs),
    /// Simplex covering -> h-basis in the quotient.
    LatticeToBasis(LatticeHArgs),
}

#[derive(Args)]
struct LatticeHArgs {
    #[arg(long)]
    lattice: PathBuf,
    #[arg(long)]
    h: u32,
}

#[derive(Args)]
struct DiscretizeArgs {
    /// Rational basis file: {"n": N, "basis": [["7/4", 0], ...]}
    #[arg(long)]
    basis: PathBuf,
    #[arg(long)]
    h: u32,
    /// Shrink factor in [0, 1), e.g. 1/3.
    #[arg(long, default_value = "0")]
    eps: Rat,
    /// Treat --h as a cap and report the smallest grid height that packs.
    #[arg(long)]
    scan: bool,
}

#[derive(Args, Clone, Copy)]
struct SearchTuning {
    /// Point-reduction budget (overrides SIMPLEX_SIDON_BUDGET).
    #[arg(long)]
    budget: Option<u64>,
    /// Worker threads (0 = default pool).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Smallest group order with a B_h set of cardinality n+1.
    Phi(SearchPhiArgs),
    /// Largest group order with an h-basis of cardinality n+1.
    Psi(SearchPsiArgs),
    /// Perfect tiling at the shape's own cardinality.
    Tiling(SearchTilingArgs),
}

#[derive(Args)]
struct SearchPhiArgs {
    #[arg(long)]
    h: u32,
    #[arg(long)]
    n: usize,
    /// Restrict to cyclic quotient groups.
    #[arg(long)]
    cyclic: bool,
    #[command(flatten)]
    tuning: SearchTuning,
    /// Append the certificate to this JSONL catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
struct SearchPsiArgs {
    #[arg(long)]
    h: u32,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    tuning: SearchTuning,
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
struct SearchTilingArgs {
    #[arg(long)]
    shape: ShapeSpec,
    #[command(flatten)]
    tuning: SearchTuning,
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Verified extremal B_h certificate from the supported families.
    Bh(ConstructBhArgs),
    /// Verified difference-body tiling certificate.
    Tiling(ConstructTilingArgs),
}

#[derive(Args)]
struct ConstructBhArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    h: u32,
    #[command(flatten)]
    tuning: SearchTuning,
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructTilingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    t: u32,
    #[command(flatten)]
    tuning: SearchTuning,
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsFormat {
    Table,
    Json,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    h: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = BoundsFormat::Table)]
    format: BoundsFormat,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    shape: ShapeSpec,
    #[arg(long)]
    lattice: PathBuf,
    /// Inclusive viewing box X0:X1,Y0:Y1.
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Print one summary line per catalog record.
    List(CatalogListArgs),
    /// Rebuild all shipped certificates from scratch and compare.
    Regen(CatalogRegenArgs),
}

#[derive(Args)]
struct CatalogListArgs {
    #[arg(long)]
    catalog: PathBuf,
}

#[derive(Args)]
struct CatalogRegenArgs {
    #[command(flatten)]
    tuning: SearchTuning,
    /// Also write the regenerated certificates to this JSONL file.
    #[arg(long)]
    write: Option<PathBuf>,
}

#[derive(Deserialize)]
struct RawMatrixFile {
    n: usize,
    basis: Vec<Vec<i128>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatLit {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
struct RationalBasisFile {
    n: usize,
    basis: Vec<Vec<RatLit>>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn read_matrix(path: &Path) -> Result<IntMatrix> {
    let file: RawMatrixFile = read_json(path)?;
    if file.basis.len() != file.n || file.basis.iter().any(|r| r.len() != file.n) {
        return Err(Error::Io(format!("{}: basis must be n x n", path.display())));
    }
    IntMatrix::from_rows(file.basis)
}

fn read_lattice(path: &Path) -> Result<Lattice> {
    read_json(path)
}

fn read_group(path: &Path) -> Result<AbelianGroup> {
    read_json(path)
}

/// Load a set file and cross-check it against the --group file.
fn read_set(group_path: &Path, set_path: &Path) -> Result<(AbelianGroup, Vec<simplex_sidon_core::GroupElement>)> {
    let group = read_group(group_path)?;
    let set: SetFile = read_json(set_path)?;
    if set.group != group {
        return Err(Error::Io(format!(
            "group file {} and set file {} disagree on the group",
            group_path.display(),
            set_path.display()
        )));
    }
    let elements = set.reduced_elements()?;
    Ok((group, elements))
}

fn search_config(tuning: &SearchTuning) -> SearchConfig {
    let env_budget =
        std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse::<u64>().ok());
    SearchConfig {
        budget: tuning.budget.or(env_budget).unwrap_or(DEFAULT_SEARCH_BUDGET),
        threads: tuning.threads,
    }
}

fn parse_window(s: &str) -> Result<Window> {
    let bad = || Error::Io(format!("window must be X0:X1,Y0:Y1, got {s:?}"));
    let (xs, ys) = s.split_once(',').ok_or_else(bad)?;
    let parse_range = |part: &str| -> Result<(i128, i128)> {
        let (a, b) = part.split_once(':').ok_or_else(bad)?;
        Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
    };
    let (x0, x1) = parse_range(xs)?;
    let (y0, y1) = parse_range(ys)?;
    Ok(Window { x0, x1, y0, y1 })
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn emit_certificate(cert: &Certificate, catalog_path: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = catalog_path {
        catalog::append(path, cert)?;
    }
    println!("{}", cert.to_json());
    Ok(())
}

/// 0 = true/tiling, 1 = negative verdict.
fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Hnf(args) => {
            let lattice = hnf(&read_matrix(&args.matrix)?)?;
            print_json(&lattice);
            Ok(0)
        }
        Command::Snf(args) => {
            let res = snf(&read_matrix(&args.matrix)?)?;
            print_json(&serde_json::json!({
                "d": res.d,
                "u": res.u.to_rows(),
                "v": res.v.to_rows(),
            }));
            Ok(0)
        }
        Command::Verify(cmd) => match cmd {
            VerifyCmd::Bh(args) => {
                let (group, set) = read_set(&args.group, &args.set)?;
                let verdict = is_bh_set(&group, &set, args.h)?;
                print_json(&verdict);
                Ok(if verdict.is_bh_set { 0 } else { 1 })
            }
            VerifyCmd::Basis(args) => {
                let (group, set) = read_set(&args.group, &args.set)?;
                let verdict = is_h_basis(&group, &set, args.h)?;
                print_json(&verdict);
                Ok(if verdict.is_basis { 0 } else { 1 })
            }
            VerifyCmd::Genbasis(args) => {
                let (group, set) = read_set(&args.group, &args.set)?;
                let verdict = is_generalized_basis(&group, &set, args.r, args.t)?;
                print_json(&verdict);
                Ok(if verdict.is_basis { 0 } else { 1 })
            }
            VerifyCmd::Arrangement(args) => {
                let lattice = read_lattice(&args.lattice)?;
                let verdict = classify_arrangement(&args.shape.points(), &lattice)?;
                print_json(&verdict);
                Ok(if verdict.class == ArrangementClass::Tiling { 0 } else { 1 })
            }
        },
        Command::Convert(cmd) => match cmd {
            ConvertCmd::BhToLattice(args) => {
                let (group, set) = read_set(&args.group, &args.set)?;
                let (lattice, verdict) = bh_to_packing(&group, &set, args.h)?;
                print_json(&serde_json::json!({ "lattice": lattice, "verdict": verdict }));
                Ok(if verdict.class.is_packing() { 0 } else { 1 })
            }
            ConvertCmd::LatticeToBh(args) => {
                let lattice = read_lattice(&args.lattice)?;
                let out = packing_to_bh(&lattice, args.h)?;
                print_json(&out);
                Ok(if out.verdict.is_bh_set { 0 } else { 1 })
            }
            ConvertCmd::BasisToLattice(args) => {
                let (group, set) = read_set(&args.group, &args.set)?;
                let (lattice, verdict) = basis_to_covering(&group, &set, args.h)?;
                print_json(&serde_json::json!({ "lattice": lattice, "verdict": verdict }));
                Ok(if verdict.class.is_covering() { 0 } else { 1 })
            }
            ConvertCmd::LatticeToBasis(args) => {
                let lattice = read_lattice(&args.lattice)?;
                let out = covering_to_basis(&lattice, args.h)?;
                print_json(&out);
                Ok(if out.verdict.is_basis { 0 } else { 1 })
            }
        },
        Command::Discretize(args) => {
            let file: RationalBasisFile = read_json(&args.basis)?;
            if file.basis.len() != file.n || file.basis.iter().any(|r| r.len() != file.n) {
                return Err(Error::Io("rational basis must be n x n".into()));
            }
            let basis: Vec<Vec<Rat>> = file
                .basis
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|lit| match lit {
                            RatLit::Int(v) => Ok(Rat::int(v as i128)),
                            RatLit::Str(s) => s.parse(),
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            if args.scan {
                return match smallest_packing_height(&basis, &args.eps, args.h)? {
                    Some((h, out)) => {
                        print_json(&serde_json::json!({ "h": h, "discretization": out }));
                        Ok(0)
                    }
                    None => {
                        print_json(&serde_json::json!({ "h": null }));
                        Ok(1)
                    }
                };
            }
            let out = discretize_lattice(&basis, args.h, &args.eps)?;
            print_json(&out);
            Ok(if out.verdict.class.is_packing() { 0 } else { 1 })
        }
        Command::Search(cmd) => match cmd {
            SearchCmd::Phi(args) => {
                let cfg = search_config(&args.tuning);
                let cert = search_phi(args.h, args.n, args.cyclic, &cfg)?;
                emit_certificate(&cert, &args.catalog)?;
                Ok(0)
            }
            SearchCmd::Psi(args) => {
                let cfg = search_config(&args.tuning);
                let cert = search_psi(args.h, args.n, &cfg)?;
                emit_certificate(&cert, &args.catalog)?;
                Ok(0)
            }
            SearchCmd::Tiling(args) => {
                let cfg = search_config(&args.tuning);
                match search_tiling(&args.shape, &cfg)? {
                    TilingSearch::Found { certificate } => {
                        emit_certificate(&certificate, &args.catalog)?;
                        Ok(0)
                    }
                    not_found => {
                        print_json(&not_found);
                        Ok(1)
                    }
                }
            }
        },
        Command::Construct(cmd) => match cmd {
            ConstructCmd::Bh(args) => {
                let cfg = search_config(&args.tuning);
                let cert = construct_bh(args.n, args.h, &cfg)?;
                emit_certificate(&cert, &args.catalog)?;
                Ok(0)
            }
            ConstructCmd::Tiling(args) => {
                let cfg = search_config(&args.tuning);
                let cert = construct_tiling(args.n, args.r, args.t, &cfg)?;
                emit_certificate(&cert, &args.catalog)?;
                Ok(0)
            }
        },
        Command::Bounds(args) => {
            let table = bounds_report(args.h, args.n)?;
            match args.format {
                BoundsFormat::Table => print!("{}", table.to_text()),
                BoundsFormat::Json => print_json(&table),
            }
            Ok(0)
        }
        Command::Render(args) => {
            let lattice = read_lattice(&args.lattice)?;
            let window = parse_window(&args.window)?;
            let svg = render_svg(&args.shape, &lattice, &window)?;
            match args.out {
                Some(path) => std::fs::write(&path, svg)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
                None => print!("{svg}"),
            }
            Ok(0)
        }
        Command::Catalog(cmd) => match cmd {
            CatalogCmd::List(args) => {
                for (i, rec) in catalog::read(&args.catalog)?.iter().enumerate() {
                    println!(
                        "{i}: {:?} h={} n={} value={} shape={} verified={} timestamp={}",
                        rec.kind, rec.h, rec.n, rec.value, rec.shape, rec.verified, rec.timestamp
                    );
                }
                Ok(0)
            }
            CatalogCmd::Regen(args) => {
                let cfg = search_config(&args.tuning);
                let shipped = stored_certificates()?;
                let fresh = regenerate_stored(&cfg)?;
                if let Some(path) = &args.write {
                    let mut out = String::new();
                    for cert in &fresh {
                        out.push_str(&cert.to_json());
                        out.push('\n');
                    }
                    std::fs::write(path, out)
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                }
                if shipped.len() != fresh.len() {
                    return Err(Error::CatalogMismatch(format!(
                        "shipped {} certificates, regenerated {}",
                        shipped.len(),
                        fresh.len()
                    )));
                }
                for (i, (s, f)) in shipped.iter().zip(&fresh).enumerate() {
                    if s.to_json() != f.to_json() {
                        return Err(Error::CatalogMismatch(format!(
                            "entry {i}: shipped {} regenerated {}",
                            s.to_json(),
                            f.to_json()
                        )));
                    }
                    if !verify_certificate(f)? {
                        return Err(Error::CatalogMismatch(format!(
                            "entry {i} fails verification"
                        )));
                    }
                    println!("{i}: ok {}", f.to_json());
                }
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Error::BudgetExceeded { budget, watermark }) => {
            eprintln!("error: search budget of {budget} exhausted at determinant {watermark}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
