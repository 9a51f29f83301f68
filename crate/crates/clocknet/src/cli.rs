//! Command-line front end: every table and curve of the model as
//! machine-readable CSV or JSON.
//!
//! Exit codes: 0 success, 1 computation failure, 2 invalid arguments. Every
//! artifact carries a manifest (command, parameters, config digest, tool
//! version); floating-point output is pinned to nine significant digits so
//! identical manifests produce identical bytes.

use crate::budget::{error_budget, ErrorInputs, Variant};
use crate::config::{config_digest, SystemParams};
use crate::geometry::{integral_i, integral_j, lattice_sum_average, Dim, LatticeGeometry};
use crate::metrology::{average_fisher, average_fisher_approx, gain, GhzMeasurementModel};
use crate::optimize::{maximize_gain, minimize_error, scan_principal_numbers, OmegaMode};
use crate::params::RydbergConfig;
use crate::sim::{parity_distribution, Protocol, RunMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "clocknet", version, about = "Entangled neutral-atom clock network modeling toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Constants file overriding the built-in defaults (flat key=value).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output format for tabular commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled protocol runs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DimArg {
    #[value(name = "2d")]
    TwoD,
    #[value(name = "3d")]
    ThreeD,
    Both,
}

impl DimArg {
    fn dims(self) -> Vec<Dim> {
        match self {
            DimArg::TwoD => vec![Dim::TwoD],
            DimArg::ThreeD => vec![Dim::ThreeD],
            DimArg::Both => vec![Dim::TwoD, Dim::ThreeD],
        }
    }

    fn label(self) -> &'static str {
        match self {
            DimArg::TwoD => "2d",
            DimArg::ThreeD => "3d",
            DimArg::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Photonic,
    Messenger,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Photonic => Variant::Photonic,
            VariantArg::Messenger => Variant::Messenger,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-atom error budget at one operating point.
    Budget(BudgetArgs),
    /// Optimal ensemble size (and optionally Rabi frequency) at one principal quantum number.
    Optimize(OptimizeArgs),
    /// Scan the Rydberg principal quantum number and plan the network per point.
    Scan(ScanArgs),
    /// Stability gain versus total entangled atom number.
    Gain(GainArgs),
    /// Averaged Fisher information versus contrast.
    Fisher(FisherArgs),
    /// Continuum geometry integrals and the lattice-sum oracle.
    Geometry(GeometryArgs),
    /// Run the five-step entangling protocol on a desk-scale network.
    Simulate(SimulateArgs),
    /// Resolved physical constants (and derived Rydberg data).
    Params(ParamsArgs),
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub ntilde: f64,
    #[arg(long, default_value_t = 1e5)]
    pub omega: f64,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum)]
    pub dim: DimArg,
    #[arg(long, value_enum, default_value_t = VariantArg::Photonic)]
    pub variant: VariantArg,
    /// Override the atoms-per-clock budget from the config.
    #[arg(long)]
    pub atoms_per_clock: Option<u32>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub ntilde: f64,
    #[arg(long, value_enum)]
    pub dim: DimArg,
    #[arg(long, default_value_t = 1e5)]
    pub omega: f64,
    /// Minimize over the Rabi frequency instead of pinning it.
    #[arg(long)]
    pub free_omega: bool,
    #[arg(long, value_enum, default_value_t = VariantArg::Photonic)]
    pub variant: VariantArg,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Inclusive principal-quantum-number range.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [50, 150])]
    pub range: Vec<u32>,
    #[arg(long, value_enum, default_value_t = DimArg::Both)]
    pub dim: DimArg,
    #[arg(long, default_value_t = 1e5)]
    pub omega: f64,
    #[arg(long)]
    pub free_omega: bool,
    #[arg(long, value_enum, default_value_t = VariantArg::Photonic)]
    pub variant: VariantArg,
}

#[derive(Debug, Args)]
pub struct GainArgs {
    /// Per-atom error of the prepared GHZ state.
    #[arg(long)]
    pub e_min: f64,
    /// Points on the geometric N grid.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = 100)]
    pub n_min: u64,
    /// Upper end of the grid; defaults to 10/E.
    #[arg(long)]
    pub n_max: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FisherArgs {
    /// Number of contrast grid points from 0 to 1 inclusive.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    #[arg(long, value_enum, default_value_t = DimArg::Both)]
    pub dim: DimArg,
    /// Ensemble sizes for the lattice-sum comparison (defaults: 1000 in 2D, 146 in 3D).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = 6)]
    pub exponent: u32,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 2)]
    pub clocks: u32,
    #[arg(long, default_value_t = 1)]
    pub ensembles: u32,
    #[arg(long, default_value_t = 3)]
    pub atoms: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Photonic)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Sample,
    Exhaustive,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    /// Also derive the Rydberg data for this principal quantum number.
    #[arg(long)]
    pub ntilde: Option<f64>,
}

/// Manifest recorded in every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub config_digest: String,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, out: &Option<PathBuf>, digest: String) -> Self {
        Self {
            command: command.to_owned(),
            parameters: BTreeMap::new(),
            config_digest: digest,
            tool_version: TOOL_VERSION.to_owned(),
            outputs: out.iter().map(|p| p.display().to_string()).collect(),
        }
    }

    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_owned(), value.to_string());
        self
    }

    fn csv_header(&self) -> String {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "# clocknet {} v{}\n# parameters: {}\n# config: {}\n",
            self.command,
            self.tool_version,
            params.join(" "),
            self.config_digest
        )
    }
}

/// Nine significant digits, locale-free.
fn g9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Entry point used by the binary. Returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn load_system(cli_config: &Option<PathBuf>) -> Result<(SystemParams, String), String> {
    match cli_config {
        None => Ok((SystemParams::default(), config_digest(None))),
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            let text = String::from_utf8(bytes.clone()).map_err(|e| format!("config is not UTF-8: {e}"))?;
            let params = SystemParams::from_config_text(&text).map_err(|e| e.to_string())?;
            for warning in params.rates.validate().map_err(|e| e.to_string())? {
                eprintln!("warning: {warning}");
            }
            Ok((params, config_digest(Some(&bytes))))
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
        Some(path) => std::fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display())),
    }
}

fn execute(cli: Cli) -> Result<(), String> {
    let (system, digest) = load_system(&cli.config)?;
    let content = match &cli.command {
        Command::Budget(args) => cmd_budget(args, &cli, &system, digest)?,
        Command::Optimize(args) => cmd_optimize(args, &cli, &system, digest)?,
        Command::Scan(args) => cmd_scan(args, &cli, &system, digest)?,
        Command::Gain(args) => cmd_gain(args, &cli, digest)?,
        Command::Fisher(args) => cmd_fisher(args, &cli, digest)?,
        Command::Geometry(args) => cmd_geometry(args, &cli, digest)?,
        Command::Simulate(args) => cmd_simulate(args, &cli, digest)?,
        Command::Params(args) => cmd_params(args, &cli, &system, digest)?,
    };
    emit(&cli.out, &content)
}

#[derive(Serialize)]
struct BudgetReport {
    manifest: RunManifest,
    inputs: BudgetInputsView,
    terms: BTreeMap<String, f64>,
    shares_percent: BTreeMap<String, f64>,
    aggregates: BudgetAggregatesView,
}

#[derive(Serialize)]
struct BudgetInputsView {
    ntilde: f64,
    omega: f64,
    n: u32,
    dim: String,
    variant: String,
    atoms_per_clock: u32,
}

#[derive(Serialize)]
struct BudgetAggregatesView {
    eps_local: f64,
    eps_nonlocal: f64,
    total_per_atom: f64,
    tau_pulse_s: f64,
    p_double: f64,
}

const TERM_NAMES: [&str; 7] = ["e1", "e2", "e3", "e4", "e5", "e6", "e7"];
const TERM_LABELS: [&str; 7] = [
    "imperfect blockade",
    "Rydberg decay",
    "self-blockade",
    "r2 decay (non-local)",
    "photon detection",
    "memory error",
    "photon collection",
];

fn variant_label(v: Variant) -> &'static str {
    match v {
        Variant::Photonic => "photonic",
        Variant::Messenger => "messenger",
    }
}

fn cmd_budget(args: &BudgetArgs, cli: &Cli, system: &SystemParams, digest: String) -> Result<String, String> {
    let dims = args.dim.dims();
    if dims.len() != 1 {
        return Err("budget needs a single --dim (2d or 3d)".into());
    }
    let dim = dims[0];
    let variant: Variant = args.variant.into();
    let mut system = *system;
    if let Some(apc) = args.atoms_per_clock {
        system.atoms_per_clock = apc;
    }
    let rydberg = RydbergConfig::new(args.ntilde).map_err(|e| e.to_string())?;
    let inputs = ErrorInputs { n: args.n, omega: args.omega, dim, rydberg, system, variant };
    let budget = error_budget(&inputs).map_err(|e| e.to_string())?;

    let manifest = RunManifest::new("budget", &cli.out, digest)
        .with("ntilde", args.ntilde)
        .with("omega", args.omega)
        .with("n", args.n)
        .with("dim", dim.label())
        .with("variant", variant_label(variant))
        .with("atoms_per_clock", system.atoms_per_clock);

    let terms = budget.terms();
    let shares = budget.shares_percent(variant);
    match cli.format {
        Format::Json => {
            let report = BudgetReport {
                manifest,
                inputs: BudgetInputsView {
                    ntilde: args.ntilde,
                    omega: args.omega,
                    n: args.n,
                    dim: dim.label().to_owned(),
                    variant: variant_label(variant).to_owned(),
                    atoms_per_clock: system.atoms_per_clock,
                },
                terms: TERM_NAMES.iter().map(|s| s.to_string()).zip(terms).collect(),
                shares_percent: TERM_NAMES.iter().map(|s| s.to_string()).zip(shares).collect(),
                aggregates: BudgetAggregatesView {
                    eps_local: budget.eps_local,
                    eps_nonlocal: budget.eps_nonlocal,
                    total_per_atom: budget.total_per_atom,
                    tau_pulse_s: budget.tau_pulse,
                    p_double: budget.p_double,
                },
            };
            serde_json::to_string_pretty(&report).map_err(|e| e.to_string()).map(|s| s + "\n")
        }
        Format::Csv => {
            let mut out = manifest.csv_header();
            out.push_str("term,label,value,share_percent\n");
            for i in 0..7 {
                out.push_str(&format!("{},{},{},{}\n", TERM_NAMES[i], TERM_LABELS[i], g9(terms[i]), g9(shares[i])));
            }
            out.push_str(&format!("total,total error per atom,{},{}\n", g9(budget.total_per_atom), g9(100.0)));
            out.push_str(&format!("tau_pulse,photon pulse width (s),{},\n", g9(budget.tau_pulse)));
            out.push_str(&format!("p_double,double excitation at bound,{},\n", g9(budget.p_double)));
            Ok(out)
        }
    }
}

const PLAN_COLUMNS: &str = "ntilde,dim,n_opt,omega_opt,E_min,e1,e2,e3,e4,e5,e6,e7,N_max,K_opt,G_max,F";

#[derive(Serialize)]
struct PlanRow {
    ntilde: f64,
    dim: String,
    n_opt: u32,
    omega_opt: f64,
    e_min: f64,
    e1: f64,
    e2: f64,
    e3: f64,
    e4: f64,
    e5: f64,
    e6: f64,
    e7: f64,
    n_max: u64,
    k_opt: u32,
    gain_max: f64,
    fidelity: f64,
}

fn plan_row(
    result: &crate::optimize::OptimizationResult,
    system: &SystemParams,
) -> Result<PlanRow, String> {
    let plan = maximize_gain(result.e_min, system.atoms_per_clock, result.n_opt).map_err(|e| e.to_string())?;
    let t = result.budget_at_opt.terms();
    Ok(PlanRow {
        ntilde: result.n_tilde,
        dim: result.dim.label().to_owned(),
        n_opt: result.n_opt,
        omega_opt: result.omega_opt,
        e_min: result.e_min,
        e1: t[0],
        e2: t[1],
        e3: t[2],
        e4: t[3],
        e5: t[4],
        e6: t[5],
        e7: t[6],
        n_max: plan.n_max,
        k_opt: plan.k_opt,
        gain_max: plan.gain_max,
        fidelity: plan.fidelity,
    })
}

fn plan_row_csv(row: &PlanRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        row.ntilde,
        row.dim,
        row.n_opt,
        g9(row.omega_opt),
        g9(row.e_min),
        g9(row.e1),
        g9(row.e2),
        g9(row.e3),
        g9(row.e4),
        g9(row.e5),
        g9(row.e6),
        g9(row.e7),
        row.n_max,
        row.k_opt,
        g9(row.gain_max),
        g9(row.fidelity)
    )
}

fn omega_mode(omega: f64, free: bool) -> OmegaMode {
    if free {
        OmegaMode::Free
    } else {
        OmegaMode::Fixed(omega)
    }
}

fn cmd_optimize(args: &OptimizeArgs, cli: &Cli, system: &SystemParams, digest: String) -> Result<String, String> {
    let dims = args.dim.dims();
    if dims.len() != 1 {
        return Err("optimize needs a single --dim (2d or 3d)".into());
    }
    let variant: Variant = args.variant.into();
    let result = minimize_error(args.ntilde, dims[0], omega_mode(args.omega, args.free_omega), variant, system)
        .map_err(|e| e.to_string())?;
    let row = plan_row(&result, system)?;
    let manifest = RunManifest::new("optimize", &cli.out, digest)
        .with("ntilde", args.ntilde)
        .with("dim", dims[0].label())
        .with("omega", if args.free_omega { "free".to_owned() } else { args.omega.to_string() })
        .with("variant", variant_label(variant));
    match cli.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                manifest: RunManifest,
                row: PlanRow,
            }
            serde_json::to_string_pretty(&Report { manifest, row }).map_err(|e| e.to_string()).map(|s| s + "\n")
        }
        Format::Csv => {
            let mut out = manifest.csv_header();
            out.push_str(PLAN_COLUMNS);
            out.push('\n');
            out.push_str(&plan_row_csv(&row));
            Ok(out)
        }
    }
}

fn cmd_scan(args: &ScanArgs, cli: &Cli, system: &SystemParams, digest: String) -> Result<String, String> {
    let (lo, hi) = (args.range[0], args.range[1]);
    let variant: Variant = args.variant.into();
    let mode = omega_mode(args.omega, args.free_omega);
    let mut rows: Vec<PlanRow> = Vec::new();
    for ntilde in lo..=hi {
        for dim in args.dim.dims() {
            let point = scan_principal_numbers(ntilde, ntilde, dim, mode, variant, system)
                .pop()
                .expect("single-point scan");
            match point.result {
                Ok(result) => rows.push(plan_row(&result, system)?),
                Err(err) => eprintln!("warning: ntilde={ntilde} {}: {err}", dim.label()),
            }
        }
    }
    let manifest = RunManifest::new("scan", &cli.out, digest)
        .with("range", format!("{lo}..{hi}"))
        .with("dim", args.dim.label())
        .with("omega", if args.free_omega { "free".to_owned() } else { args.omega.to_string() })
        .with("variant", variant_label(variant));
    match cli.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                manifest: RunManifest,
                rows: Vec<PlanRow>,
            }
            serde_json::to_string_pretty(&Report { manifest, rows }).map_err(|e| e.to_string()).map(|s| s + "\n")
        }
        Format::Csv => {
            let mut out = manifest.csv_header();
            out.push_str(PLAN_COLUMNS);
            out.push('\n');
            for row in &rows {
                out.push_str(&plan_row_csv(row));
            }
            Ok(out)
        }
    }
}

fn cmd_gain(args: &GainArgs, cli: &Cli, digest: String) -> Result<String, String> {
    if !(args.e_min > 0.0) {
        return Err("--e-min must be positive".into());
    }
    let n_max = args.n_max.unwrap_or((10.0 / args.e_min) as u64).max(args.n_min + 1);
    let manifest = RunManifest::new("gain", &cli.out, digest)
        .with("e_min", args.e_min)
        .with("points", args.points)
        .with("n_min", args.n_min)
        .with("n_max", n_max);
    let ratio = (n_max as f64 / args.n_min as f64).powf(1.0 / (args.points.max(2) - 1) as f64);
    let mut rows: Vec<(u64, f64)> = Vec::new();
    let mut x = args.n_min as f64;
    for _ in 0..args.points.max(2) {
        let n = x.round() as u64;
        if rows.last().map(|(last, _)| *last != n).unwrap_or(true) {
            rows.push((n, gain(n as f64, args.e_min)));
        }
        x *= ratio;
    }
    match cli.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                manifest: RunManifest,
                rows: Vec<(u64, f64)>,
            }
            serde_json::to_string_pretty(&Report { manifest, rows }).map_err(|e| e.to_string()).map(|s| s + "\n")
        }
        Format::Csv => {
            let mut out = manifest.csv_header();
            out.push_str("N,G\n");
            for (n, g) in rows {
                out.push_str(&format!("{n},{}\n", g9(g)));
            }
            Ok(out)
        }
    }
}

fn cmd_fisher(args: &FisherArgs, cli: &Cli, digest: String) -> Result<String, String> {
    if args.grid < 2 {
        return Err("--grid needs at least 2 points".into());
    }
    let manifest = RunManifest::new("fisher", &cli.out, digest).with("grid", args.grid);
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..args.grid {
        let c = i as f64 / (args.grid - 1) as f64;
        let model = GhzMeasurementModel::from_contrast(2, c).map_err(|e| e.to_string())?;
        let exact = average_fisher(&model).map_err(|e| e.to_string())? / 4.0;
        rows.push((c, exact, average_fisher_approx(c)));
    }
    match cli.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                manifest: RunManifest,
                rows: Vec<(f64, f64, f64)>,
            }
            serde_json::to_string_pretty(&Report { manifest, rows }).map_err(|e| e.to_string()).map(|s| s + "\n")
        }
        Format::Csv => {
            let mut out = manifest.csv_header();
            out.push_str("c,exact,approx\n");
            for (c, exact, approx) in rows {
                out.push_str(&format!("{},{},{}\n", g9(c), g9(exact), g9(approx)));
            }
            Ok(out)
        }
    }
}

fn cmd_geometry(args: &GeometryArgs, cli: &Cli, digest: String) -> Result<String, String> {
    let manifest = RunManifest::new("geometry", &cli.out, digest)
        .with("dim", args.dim.label())
        .with("exponent", args.exponent);

    #[derive(Serialize)]
    struct Row {
        quantity: String,
        dim: String,
        n: Option<u32>,
        exponent: u32,
        continuum: f64,
        lattice: Option<f64>,
        rel_err: Option<f64>,
    }
    let mut rows: Vec<Row> = Vec::new();
    for dim in args.dim.dims() {
        let i_val = integral_i(dim).map_err(|e| e.to_string())?;
        let j_val = integral_j(dim).map_err(|e| e.to_string())?;
        rows.push(Row {
            quantity: "I".into(),
            dim: dim.label().into(),
            n: None,
            exponent: 6,
            continuum: i_val,
            lattice: None,
            rel_err: None,
        });
        rows.push(Row {
            quantity: "J".into(),
            dim: dim.label().into(),
            n: None,
            exponent: 12,
            continuum: j_val,
            lattice: None,
            rel_err: None,
        });
        let defaults = match dim {
            Dim::TwoD => vec![1000u32],
            Dim::ThreeD => vec![146u32],
        };
        let sizes = if args.n.is_empty() { defaults } else { args.n.clone() };
        for n in sizes {
            let geom = LatticeGeometry::new(dim, n, 1.0).map_err(|e| e.to_string())?;
            let lattice = lattice_sum_average(&geom, args.exponent).map_err(|e| e.to_string())?;
            let integral = if args.exponent == 6 { i_val } else { j_val };
            let continuum = geom.radius.powi(args.exponent as i32) * integral;
            rows.push(Row {
                quantity: "pair_avg".into(),
                dim: dim.label().into(),
                n: Some(n),
                exponent: args.exponent,
                continuum,
                lattice: Some(lattice),
                rel_err: Some((lattice / continuum - 1.0).abs()),
            });
        }
    }
    match cli.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                manifest: RunManifest,
                rows: Vec<Row>,
            }
            serde_json::to_string_pretty(&Report { manifest, rows }).map_err(|e| e.to_string()).map(|s| s + "\n")
        }
        Format::Csv => {
            let mut out = manifest.csv_header();
            out.push_str("quantity,dim,n,exponent,continuum,lattice,rel_err\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.quantity,
                    r.dim,
                    r.n.map(|v| v.to_string()).unwrap_or_default(),
                    r.exponent,
                    g9(r.continuum),
                    r.lattice.map(g9).unwrap_or_default(),
                    r.rel_err.map(g9).unwrap_or_default()
                ));
            }
            Ok(out)
        }
    }
}

fn cmd_simulate(args: &SimulateArgs, cli: &Cli, digest: String) -> Result<String, String> {
    let variant: Variant = args.variant.into();
    let protocol =
        Protocol::new(args.clocks, args.ensembles, args.atoms, variant).map_err(|e| e.to_string())?;
    let mode = match args.mode {
        ModeArg::Sample => RunMode::Sample { seed: cli.seed },
        ModeArg::Exhaustive => RunMode::Exhaustive,
    };
    let outcome = protocol.run(mode).map_err(|e| e.to_string())?;
    let manifest = RunManifest::new("simulate", &cli.out, digest)
        .with("clocks", args.clocks)
        .with("ensembles", args.ensembles)
        .with("atoms", args.atoms)
        .with("variant", variant_label(variant))
        .with("mode", format!("{:?}", args.mode).to_lowercase())
        .with("seed", cli.seed);

    #[derive(Serialize)]
    struct WorldView {
        weight: f64,
        heralds: Vec<crate::sim::HeraldRecord>,
        s_outcomes: Vec<(u32, u8)>,
        messenger_outcome: Option<i8>,
        fidelity: f64,
        final_amplitudes: Vec<crate::sim::AmplitudeRecord>,
    }
    #[derive(Serialize)]
    struct Report {
        manifest: RunManifest,
        total_atoms: u64,
        min_fidelity: f64,
        parity_check_max_dev: f64,
        worlds: Vec<WorldView>,
        trace: Vec<crate::sim::StepTrace>,
    }

    let mut min_fidelity = f64::INFINITY;
    let mut parity_dev: f64 = 0.0;
    let mut worlds = Vec::new();
    for world in &outcome.worlds {
        min_fidelity = min_fidelity.min(world.fidelity);
        // parity statistics of the final state against the ideal fringe
        let n_total = outcome.total_atoms;
        for i in 0..32 {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / 32.0 / n_total as f64;
            if let Ok([p_even, _]) = parity_distribution(&world.final_state, phi) {
                let ideal = (1.0 + (n_total as f64 * phi).cos()) / 2.0;
                parity_dev = parity_dev.max((p_even - ideal).abs());
            }
        }
        let mut final_amplitudes: Vec<crate::sim::AmplitudeRecord> = world
            .final_state
            .amplitudes
            .iter()
            .filter(|(_, a)| a.norm() > 1e-12)
            .map(|(l, a)| crate::sim::AmplitudeRecord { basis: l.display(), re: a.re, im: a.im })
            .collect();
        final_amplitudes.sort_by(|a, b| a.basis.cmp(&b.basis));
        worlds.push(WorldView {
            weight: world.weight,
            heralds: world.heralds.clone(),
            s_outcomes: world.s_outcomes.clone(),
            messenger_outcome: world.messenger_outcome,
            fidelity: world.fidelity,
            final_amplitudes,
        });
    }
    let report = Report {
        manifest,
        total_atoms: outcome.total_atoms,
        min_fidelity,
        parity_check_max_dev: parity_dev,
        worlds,
        trace: outcome.trace,
    };
    serde_json::to_string_pretty(&report).map_err(|e| e.to_string()).map(|s| s + "\n")
}

fn cmd_params(args: &ParamsArgs, cli: &Cli, system: &SystemParams, digest: String) -> Result<String, String> {
    let manifest = RunManifest::new("params", &cli.out, digest)
        .with("ntilde", args.ntilde.map(|v| v.to_string()).unwrap_or_else(|| "none".into()));
    let rydberg = match args.ntilde {
        None => None,
        Some(nt) => Some(RydbergConfig::new(nt).map_err(|e| e.to_string())?),
    };
    #[derive(Serialize)]
    struct Report {
        manifest: RunManifest,
        hbar: f64,
        speed_of_light: f64,
        atomic_unit_c6: f64,
        atomic_unit_c3: f64,
        rates: crate::params::LowerLevelRates,
        atoms_per_clock: u32,
        rydberg: Option<RydbergConfig>,
    }
    let report = Report {
        manifest,
        hbar: crate::params::HBAR,
        speed_of_light: crate::params::SPEED_OF_LIGHT,
        atomic_unit_c6: crate::params::ATOMIC_UNIT_C6,
        atomic_unit_c3: crate::params::ATOMIC_UNIT_C3,
        rates: system.rates,
        atoms_per_clock: system.atoms_per_clock,
        rydberg,
    };
    match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).map_err(|e| e.to_string()).map(|s| s + "\n"),
        Format::Csv => {
            let mut out = report.manifest.csv_header();
            out.push_str("key,value\n");
            out.push_str(&format!("hbar,{}\n", g9(report.hbar)));
            out.push_str(&format!("speed_of_light,{}\n", g9(report.speed_of_light)));
            out.push_str(&format!("atomic_unit_c6,{}\n", g9(report.atomic_unit_c6)));
            out.push_str(&format!("atomic_unit_c3,{}\n", g9(report.atomic_unit_c3)));
            out.push_str(&format!("gamma_s,{}\n", g9(report.rates.gamma_s)));
            out.push_str(&format!("gamma_e,{}\n", g9(report.rates.gamma_e)));
            out.push_str(&format!("gamma_dark,{}\n", g9(report.rates.gamma_dark)));
            out.push_str(&format!("link_length_L,{}\n", g9(report.rates.link_length)));
            out.push_str(&format!("lattice_a,{}\n", g9(report.rates.lattice_a)));
            out.push_str(&format!("k_e,{}\n", g9(report.rates.k_e)));
            out.push_str(&format!("finesse_f,{}\n", g9(report.rates.finesse)));
            out.push_str(&format!("atoms_per_clock,{}\n", report.atoms_per_clock));
            if let Some(r) = &report.rydberg {
                out.push_str(&format!("gamma,{}\n", g9(r.gamma)));
                out.push_str(&format!("c6_self,{}\n", g9(r.c6_self)));
                out.push_str(&format!("c3_cross,{}\n", g9(r.c3_cross)));
            }
            Ok(out)
        }
    }
}
