//! Command implementations behind the `tangle3` binary.
//!
//! Every command writes its report to the given writer and returns the
//! process exit code. Errors bubble up as `anyhow::Error`; the binary prints
//! them to standard error and exits with code 2.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use tangle3_core::ckw::{family_ckw_sweep, family_ckw_sweep_numeric, pair_concurrences};
use tangle3_core::family::{detect_family, g1, ghz_w_rank2, roof_axis_value, tangle_z};
use tangle3_core::measures::{monogamy_residual, one_tangle, three_tangle};
use tangle3_core::nalgebra::DMatrix;
use tangle3_core::roof::{minimize_roof, Objective, RoofConfig};
use tangle3_core::state::spectral_rank2;
use tangle3_core::zero::{has_vanishing_tangle_with, ZeroDecision};
use tangle3_core::{DensityMatrix, Ket, PureState3, Qubit, Rank2State, Tolerances, C64};

/// Orthonormality slack for kets read from files.
pub const FILE_ORTHONORMAL_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// State files

/// JSON state file: exactly one of `amplitudes` (8 `[re, im]` pairs, flat
/// index `4a + 2b + c`) or `density` (8 rows of 8 `[re, im]` pairs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState3),
    Mixed(DensityMatrix),
}

impl LoadedState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(k) => k.density(),
            LoadedState::Mixed(rho) => rho.clone(),
        }
    }
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl StateFile {
    pub fn from_ket(ket: &PureState3, label: Option<String>) -> Self {
        StateFile {
            label,
            amplitudes: Some(ket.amplitudes().iter().map(|&z| pair(z)).collect()),
            density: None,
        }
    }

    pub fn from_density(rho: &DensityMatrix, label: Option<String>) -> Self {
        let m = rho.matrix();
        let rows = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect()).collect();
        StateFile {
            label,
            amplitudes: None,
            density: Some(rows),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("state file is not valid JSON of the expected shape")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Validates the file against the state invariants. Amplitude vectors
    /// are normalized; density matrices must already be valid.
    pub fn to_state(&self) -> Result<LoadedState> {
        match (&self.amplitudes, &self.density) {
            (Some(_), Some(_)) => bail!("state file has both \"amplitudes\" and \"density\"; exactly one is allowed"),
            (None, None) => bail!("state file needs one of \"amplitudes\" or \"density\""),
            (Some(a), None) => {
                if a.len() != 8 {
                    bail!("\"amplitudes\" must hold 8 [re, im] pairs, found {}", a.len());
                }
                let amps: [C64; 8] = std::array::from_fn(|i| C64::new(a[i][0], a[i][1]));
                Ok(LoadedState::Pure(Ket::new(amps)?))
            }
            (None, Some(rows)) => {
                if rows.len() != 8 || rows.iter().any(|r| r.len() != 8) {
                    bail!("\"density\" must be an 8x8 array of [re, im] pairs");
                }
                let m = DMatrix::from_fn(8, 8, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
                Ok(LoadedState::Mixed(DensityMatrix::new(m)?))
            }
        }
    }
}

pub fn load_state(path: &Path) -> Result<LoadedState> {
    StateFile::read(path)?.to_state().with_context(|| format!("in {}", path.display()))
}

fn load_ket(path: &Path) -> Result<PureState3> {
    match load_state(path)? {
        LoadedState::Pure(k) => Ok(k),
        LoadedState::Mixed(_) => bail!("{} holds a density matrix; a ket is required", path.display()),
    }
}

fn rank2_from_kets(k1: &Path, k2: &Path, p: f64) -> Result<Rank2State> {
    let tol = Tolerances {
        orthonormal: FILE_ORTHONORMAL_TOL,
        ..Tolerances::DEFAULT
    };
    Ok(Rank2State::with_tolerances(load_ket(k1)?, load_ket(k2)?, p, &tol)?)
}

// ---------------------------------------------------------------------------
// Number formatting

/// `x` with 12 significant digits, fixed-point where that stays readable.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        format!("{:.11e}", x)
    }
}

fn fixed12(x: f64) -> String {
    // Avoid printing "-0.000000000000".
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

// ---------------------------------------------------------------------------
// Command-line surface

#[derive(Debug, Parser)]
#[command(name = "tangle3", version, about = "Three-qubit entanglement: 3-tangle, convex roofs, CKW checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pure-state measures of a state file, or reduced concurrences and the
    /// zero-tangle decision of a density matrix.
    Measure(MeasureArgs),
    /// CSV tables along the GHZ/W family.
    Sweep(SweepArgs),
    /// Decides whether a rank-2 state has vanishing 3-tangle.
    /// Exit 0: vanishes, 1: does not vanish, 2: error.
    Zerotest(ZerotestArgs),
    /// Numerical convex roof of a rank-2 state.
    Roofmin(RoofminArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QubitArg {
    A,
    B,
    C,
}

impl From<QubitArg> for Qubit {
    fn from(q: QubitArg) -> Self {
        match q {
            QubitArg::A => Qubit::A,
            QubitArg::B => Qubit::B,
            QubitArg::C => Qubit::C,
        }
    }
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, ignore_case = true, default_value = "a")]
    pub qubit: QubitArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    #[value(name = "tangle-z", alias = "tangle_z")]
    TangleZ,
    Roof,
    Ckw,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub what: SweepKind,
    /// Number of equally spaced p values on [0, 1].
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Phases for `tangle-z`, in radians. Defaults to gamma * 2 pi / 3 for
    /// gamma in 1/2, 1/3, 1/5, 1/10, 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi_values: Option<Vec<f64>>,
    /// Adds the optimizer's 1-tangle roof to the `ckw` table.
    #[arg(long)]
    pub numeric: bool,
    #[command(flatten)]
    pub roof: RoofArgs,
}

#[derive(Debug, Args)]
pub struct ZerotestArgs {
    /// Two ket files (with --p) or one rank-2 density file.
    #[arg(required = true, num_args = 1..=2)]
    pub files: Vec<PathBuf>,
    /// Weight of the first ket.
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Tau3,
    #[value(alias = "one_tangle")]
    OneTangle,
}

#[derive(Debug, Clone, Args)]
pub struct RoofArgs {
    /// Decomposition lengths to search.
    #[arg(long = "m", value_delimiter = ',', default_values_t = vec![2usize, 3, 4])]
    pub m_values: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, env = "TANGLE_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl RoofArgs {
    pub fn config(&self) -> RoofConfig {
        RoofConfig {
            m_values: self.m_values.clone(),
            restarts: self.restarts,
            seed: self.seed,
            ..RoofConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct RoofminArgs {
    /// Use rho(p) = p |GHZ><GHZ| + (1 - p) |W><W|.
    #[arg(long, conflicts_with_all = ["kets", "density"])]
    pub family: Option<f64>,
    /// Two orthonormal ket files; requires --p.
    #[arg(long, num_args = 2, value_names = ["KET1", "KET2"], requires = "p", conflicts_with = "density")]
    pub kets: Option<Vec<PathBuf>>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Density file of rank at most two.
    #[arg(long)]
    pub density: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tau3")]
    pub objective: ObjectiveArg,
    /// Focus qubit of the 1-tangle objective.
    #[arg(long, value_enum, ignore_case = true, default_value = "a")]
    pub qubit: QubitArg,
    #[command(flatten)]
    pub roof: RoofArgs,
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Measure(a) => cmd_measure(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Zerotest(a) => cmd_zerotest(a, out),
        Command::Roofmin(a) => cmd_roofmin(a, out),
    }
}

// ---------------------------------------------------------------------------
// measure

fn write_zero_summary(s: &mut String, d: &ZeroDecision) {
    let _ = writeln!(s, "tau3_vanishes = {}", d.vanishes);
    if d.boundary {
        let _ = writeln!(s, "tau3_boundary = true");
    }
}

pub fn cmd_measure(args: &MeasureArgs, out: &mut dyn Write) -> Result<i32> {
    let file = StateFile::read(&args.file)?;
    let state = file.to_state().with_context(|| format!("in {}", args.file.display()))?;
    let q: Qubit = args.qubit.into();
    let mut s = String::new();
    if let Some(label) = &file.label {
        let _ = writeln!(s, "label = {label}");
    }
    let [r1, r2] = q.others();
    match &state {
        LoadedState::Pure(psi) => {
            let [c1, c2] = pair_concurrences(&psi.density(), q)?;
            let _ = writeln!(s, "kind = pure");
            let _ = writeln!(s, "tau3 = {}", fixed12(three_tangle(psi)));
            let _ = writeln!(s, "one_tangle_{q} = {}", fixed12(one_tangle(psi, q)));
            let _ = writeln!(s, "concurrence_{q}{r1} = {}", fixed12(c1));
            let _ = writeln!(s, "concurrence_{q}{r2} = {}", fixed12(c2));
            let _ = writeln!(s, "monogamy_residual_{q} = {}", sig12(monogamy_residual(psi, q)));
        }
        LoadedState::Mixed(rho) => {
            let [c1, c2] = pair_concurrences(rho, q)?;
            let _ = writeln!(s, "kind = density");
            if let Some(p) = detect_family(rho, tangle3_core::ckw::FAMILY_DETECT_TOL) {
                let _ = writeln!(s, "family_p = {}", fixed12(p));
                let _ = writeln!(s, "tau3 = {}", fixed12(roof_axis_value(p)?));
            }
            let _ = writeln!(s, "concurrence_{q}{r1} = {}", fixed12(c1));
            let _ = writeln!(s, "concurrence_{q}{r2} = {}", fixed12(c2));
            match spectral_rank2::<8>(rho) {
                Ok(spec) => {
                    let tol = Tolerances::DEFAULT;
                    if spec.state.p() > 1.0 - tol.rank {
                        let _ = writeln!(s, "rank = 1");
                        let _ = writeln!(s, "tau3 = {}", fixed12(three_tangle(spec.state.ket1())));
                    } else {
                        let _ = writeln!(s, "rank = 2");
                        match has_vanishing_tangle_with(&spec.state, &tol) {
                            Ok(d) => write_zero_summary(&mut s, &d),
                            Err(e) => {
                                let _ = writeln!(s, "tau3_vanishes = undecided ({e})");
                            }
                        }
                    }
                }
                Err(tangle3_core::Error::RankTooHigh(_)) => {
                    let _ = writeln!(s, "rank = >2 (zero-tangle test needs rank <= 2)");
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// sweep

pub fn default_phi_values() -> Vec<f64> {
    [0.5, 1.0 / 3.0, 0.2, 0.1, 0.0].iter().map(|g| g * TAU / 3.0).collect()
}

pub fn unit_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        bail!("--grid must be at least 2, got {n}");
    }
    Ok((0..n).map(|i| i as f64 / (n - 1) as f64).collect())
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let grid = unit_grid(args.grid)?;
    let mut s = String::new();
    match args.what {
        SweepKind::TangleZ => {
            let phis = args.phi_values.clone().unwrap_or_else(default_phi_values);
            if phis.is_empty() {
                bail!("--phi-values is empty");
            }
            s.push_str("p,phi,tau3\n");
            for &phi in &phis {
                for &p in &grid {
                    let _ = writeln!(s, "{},{},{}", sig12(p), sig12(phi), sig12(tangle_z(p, phi)));
                }
            }
        }
        SweepKind::Roof => {
            s.push_str("p,roof,g1_clamped,trivial_bound\n");
            for &p in &grid {
                let roof = roof_axis_value(p)?;
                let g = g1(p).unwrap_or(0.0);
                let _ = writeln!(s, "{},{},{},{}", sig12(p), sig12(roof), sig12(g), sig12(p));
            }
        }
        SweepKind::Ckw => {
            let rows = if args.numeric {
                family_ckw_sweep_numeric(&grid, &args.roof.config())?
            } else {
                family_ckw_sweep(&grid)?
            };
            s.push_str("p,one_tangle_min,concurrence_sum,tau3_roof");
            s.push_str(if args.numeric { ",one_tangle_numeric\n" } else { "\n" });
            for r in rows {
                let _ = write!(
                    s,
                    "{},{},{},{}",
                    sig12(r.p),
                    sig12(r.one_tangle_min),
                    sig12(r.concurrence_sum),
                    sig12(r.tau3_roof)
                );
                if let Some(v) = r.one_tangle_numeric {
                    let _ = write!(s, ",{}", sig12(v));
                }
                s.push('\n');
            }
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// zerotest

fn cplx(z: C64) -> String {
    format!("{}{}{}i", sig12(z.re), if z.im < 0.0 { "-" } else { "+" }, sig12(z.im.abs()))
}

pub fn cmd_zerotest(args: &ZerotestArgs, out: &mut dyn Write) -> Result<i32> {
    let state = match (args.files.as_slice(), args.p) {
        ([k1, k2], Some(p)) => rank2_from_kets(k1, k2, p)?,
        ([_, _], None) => bail!("two ket files need --p"),
        ([file], None) => match load_state(file)? {
            LoadedState::Mixed(rho) => spectral_rank2::<8>(&rho)?.state,
            LoadedState::Pure(k) => Rank2State::new(k, orthogonal_partner(&k), 1.0)?,
        },
        ([_], Some(_)) => bail!("--p applies to two ket files, not to a density file"),
        _ => bail!("zerotest takes one density file or two ket files"),
    };
    let d = has_vanishing_tangle_with(&state, &Tolerances::DEFAULT)?;
    let mut s = String::new();
    let _ = writeln!(s, "p = {}", sig12(state.p()));
    let coeffs: Vec<String> = d.polynomial.coeffs.iter().map(|&c| cplx(c)).collect();
    let _ = writeln!(s, "polynomial = [{}]", coeffs.join(", "));
    if d.zeros.degenerate_all_zero {
        let _ = writeln!(s, "polynomial vanishes identically");
    }
    for r in &d.zeros.finite_roots {
        let _ = writeln!(s, "root = {} (multiplicity {})", cplx(r.value), r.multiplicity);
    }
    if d.zeros.root_at_infinity > 0 {
        let _ = writeln!(s, "root = infinity (multiplicity {})", d.zeros.root_at_infinity);
    }
    if let Some(simplex) = &d.simplex {
        let _ = writeln!(s, "simplex_dimension = {}", simplex.dimension);
        for v in simplex.cartesian_vertices() {
            let _ = writeln!(s, "vertex = ({}, {}, {})", sig12(v[0]), sig12(v[1]), sig12(v[2]));
        }
        if simplex.repeated_roots {
            let _ = writeln!(s, "repeated_roots = true");
        }
    }
    write_zero_summary(&mut s, &d);
    if let Some(wit) = &d.witness {
        for (wt, k) in wit.items() {
            let _ = writeln!(s, "witness_weight = {} tau3 = {}", sig12(*wt), sig12(three_tangle(k)));
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(if d.vanishes { 0 } else { 1 })
}

/// Any unit vector orthogonal to `k`, for treating a pure state as rank 2.
fn orthogonal_partner(k: &PureState3) -> PureState3 {
    (0..8)
        .map(PureState3::basis)
        .filter_map(|b| {
            let ov = k.inner(&b);
            Ket::superpose(C64::new(1.0, 0.0), &b, -ov, k).ok().filter(|_| ov.norm() < 0.9)
        })
        .next()
        .expect("some basis vector has small overlap")
}

// ---------------------------------------------------------------------------
// roofmin

pub fn cmd_roofmin(args: &RoofminArgs, out: &mut dyn Write) -> Result<i32> {
    let (state, family_p) = match (&args.family, &args.kets, &args.density) {
        (Some(p), None, None) => (ghz_w_rank2(*p)?, Some(*p)),
        (None, Some(k), None) => {
            let p = args.p.context("--kets needs --p")?;
            (rank2_from_kets(&k[0], &k[1], p)?, None)
        }
        (None, None, Some(path)) => {
            let rho = load_state(path)?.density();
            (spectral_rank2::<8>(&rho)?.state, detect_family(&rho, tangle3_core::ckw::FAMILY_DETECT_TOL))
        }
        _ => bail!("give exactly one of --family, --kets or --density"),
    };
    let objective = match args.objective {
        ObjectiveArg::Tau3 => Objective::Tau3,
        ObjectiveArg::OneTangle => Objective::OneTangle(args.qubit.into()),
    };
    let config = args.roof.config();
    let r = minimize_roof(&state, objective, &config)?;

    let mut s = String::new();
    let _ = writeln!(s, "objective = {objective}");
    let _ = writeln!(s, "value = {}", fixed12(r.value));
    let _ = writeln!(s, "best_m = {}", r.best_m);
    for (m, v) in &r.per_m {
        let _ = writeln!(s, "best_value_m{m} = {}", fixed12(*v));
    }
    let _ = writeln!(s, "restarts = {}", r.restarts_used);
    let _ = writeln!(s, "converged = {}", r.converged);
    if let (Some(p), Objective::Tau3) = (family_p, objective) {
        let reference = roof_axis_value(p)?;
        let _ = writeln!(s, "reference = {}", fixed12(reference));
        let _ = writeln!(s, "restarts_below_reference = {}", r.beating(reference, 1e-8).count());
    }
    for (wt, k) in r.ensemble.items() {
        let amps: Vec<String> = k.amplitudes().iter().map(|&z| cplx(z)).collect();
        let _ = writeln!(
            s,
            "member weight = {} {objective} = {} amplitudes = [{}]",
            fixed12(*wt),
            fixed12(objective.eval(k)),
            amps.join(", ")
        );
    }
    out.write_all(s.as_bytes())?;
    Ok(0)
}
