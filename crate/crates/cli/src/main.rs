//! `geomom` — batch CLI over the surface-quantum-mechanics library.
//!
//! Every verb is deterministic: identical argv produces byte-identical
//! output. Tables go out as CSV (`k,density` / `k,re_q,im_q`) or JSON with
//! metadata; verification verbs report worst-case residuals rather than bare
//! booleans so regressions are visible as drift long before a threshold
//! breaks. Exit codes: 0 success, 1 numerical failure (machine-readable JSON
//! on stderr), 2 usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geomom::Complex64;
use serde::Serialize;

use geomom::momentum::{
    align_phase, compare_ho, difference_residual, ho_momentum_density, l2u_residual,
    m_reflection_defect, momentum_uncertainty_au, orthogonality_matrix, q_lm_closed,
    q_lm_numeric, AmplitudeSource, AmplitudeTable, MomentumError, MomentumGrid, WidthMatching,
};
use geomom::operators::{
    rotation_equivalence_residual, so31_residual_table, OperatorError, OperatorFamily,
    OperatorSet, RotationTarget,
};
use geomom::output::{amplitude_csv, density_csv, format_float, AmplitudeDocument, DensityDocument};
use geomom::surface::{
    geometric_potential, geometry_at, laplacian_limit_coefficient, normal_divergence,
    shell_metric, GeometryError, SurfaceChart,
};
use geomom::OpId;

#[derive(Parser)]
#[command(
    name = "geomom",
    version,
    about = "Quantum mechanics on embedded surfaces: curvature potentials, sphere operators, \
             and geometric-momentum distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Momentum distribution |Q_lm(k)|² on a symmetric grid.
    Qdist(TableArgs),
    /// Complex amplitude Q_lm(k) on a symmetric grid.
    Qamp(TableArgs),
    /// Worst-case residuals of the momentum-amplitude contracts.
    VerifyQlm {
        /// Largest angular quantum number exercised.
        #[arg(long, default_value_t = 4)]
        lmax: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Worst-case residuals of the operator algebra on the sphere.
    VerifyAlgebra {
        /// Band limit of the truncated basis.
        #[arg(long, default_value_t = 8)]
        lmax: u32,
        /// Interior block for commutator checks (default lmax − 2).
        #[arg(long)]
        interior: Option<u32>,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Curvatures, geometric potential, and shell metric of a chart point.
    Surface {
        /// Chart description: sphere:r=<v>, cylinder:R=<v>, torus:R=<v>,a=<v>, plane.
        #[arg(long)]
        chart: String,
        #[arg(long, allow_negative_numbers = true)]
        q1: f64,
        #[arg(long, allow_negative_numbers = true)]
        q2: f64,
        /// Offset along the normal; adds the shell-metric block.
        #[arg(long, allow_negative_numbers = true)]
        q3: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Geometric-momentum uncertainty ħ/(√3 r) in atomic units.
    Uncertainty {
        /// Sphere radius in Ångström.
        #[arg(long)]
        radius_angstrom: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Distance between |Q_l0|² and a harmonic-oscillator level.
    CompareHo {
        #[arg(long)]
        l: u32,
        /// Oscillator level (default l).
        #[arg(long)]
        n: Option<u32>,
        /// Manual width; default matches the oscillator variance to ⟨k²⟩.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Write the CSV curves behind one of the three distribution figures.
    Figure {
        /// 1: ground state vs oscillator; 2: the four l = 3 states; 3: l = 10 vs n = 10.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        id: u32,
        /// Output directory.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    l: u32,
    #[arg(long, allow_hyphen_values = true)]
    m: i32,
    /// Grid half-width; points are j·step for integer j.
    #[arg(long, default_value_t = 20.0)]
    kmax: f64,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy)]
enum TableFormat {
    Csv,
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy)]
enum ReportFormat {
    Json,
    Text,
}

enum AppError {
    /// Wrong invocation: message to stderr, exit 2.
    Usage(String),
    /// The computation itself refused: JSON to stderr, exit 1.
    Numerical { code: &'static str, message: String },
}

impl AppError {
    fn report_and_code(self) -> ExitCode {
        match self {
            AppError::Usage(message) => {
                eprintln!("error: {message}");
                ExitCode::from(2)
            }
            AppError::Numerical { code, message } => {
                eprintln!("{}", serde_json::json!({ "error": code, "message": message }));
                ExitCode::from(1)
            }
        }
    }
}

impl From<MomentumError> for AppError {
    fn from(err: MomentumError) -> Self {
        let code = match err {
            MomentumError::PoleSingularity { .. } => "pole_singularity",
            MomentumError::PoleHit { .. } => "pole_hit",
            MomentumError::AccuracyLoss { .. } => "accuracy_loss",
            MomentumError::NonpositiveRadius { .. } => "nonpositive_radius",
        };
        AppError::Numerical { code, message: err.to_string() }
    }
}

impl From<GeometryError> for AppError {
    fn from(err: GeometryError) -> Self {
        match err {
            GeometryError::InvalidChart(_) => AppError::Usage(err.to_string()),
            GeometryError::DegenerateChart { .. } => {
                AppError::Numerical { code: "degenerate_chart", message: err.to_string() }
            }
            GeometryError::ShellFold { .. } => {
                AppError::Numerical { code: "shell_fold", message: err.to_string() }
            }
        }
    }
}

impl From<OperatorError> for AppError {
    fn from(err: OperatorError) -> Self {
        let code = match err {
            OperatorError::GridTooCoarse { .. } => "grid_too_coarse",
            OperatorError::TruncationTooTight { .. } => "truncation_too_tight",
            OperatorError::PoleSingularity { .. } => "pole_singularity",
        };
        AppError::Numerical { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::Numerical { code: "io", message: err.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => err.report_and_code(),
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::Qdist(args) => table_verb(args, true),
        Command::Qamp(args) => table_verb(args, false),
        Command::VerifyQlm { lmax, format } => verify_qlm(lmax, format),
        Command::VerifyAlgebra { lmax, interior, hbar, format } => {
            verify_algebra(lmax, interior, hbar, format)
        }
        Command::Surface { chart, q1, q2, q3, mass, hbar, format } => {
            surface_verb(&chart, q1, q2, q3, mass, hbar, format)
        }
        Command::Uncertainty { radius_angstrom, format } => uncertainty_verb(radius_angstrom, format),
        Command::CompareHo { l, n, beta, format } => compare_ho_verb(l, n, beta, format),
        Command::Figure { id, dir, format } => figure_verb(id, &dir, format),
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), AppError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize infallibly");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// qdist / qamp
// ---------------------------------------------------------------------------

fn build_grid(args: &TableArgs) -> Result<MomentumGrid, AppError> {
    if args.m.unsigned_abs() > args.l {
        return Err(AppError::Usage(format!(
            "|m| must not exceed l, got l = {} m = {}",
            args.l, args.m
        )));
    }
    if !(args.step > 0.0) || !(args.kmax >= args.step) {
        return Err(AppError::Usage(format!(
            "need 0 < step <= kmax, got step = {} kmax = {}",
            args.step, args.kmax
        )));
    }
    if !(args.hbar > 0.0) {
        return Err(AppError::Usage(format!("hbar must be positive, got {}", args.hbar)));
    }
    Ok(MomentumGrid::symmetric(args.kmax, args.step))
}

fn table_verb(args: TableArgs, density: bool) -> Result<(), AppError> {
    let grid = build_grid(&args)?;
    let table = AmplitudeTable::compute(args.l, args.m, grid, args.hbar)?;
    let content = match (args.format, density) {
        (TableFormat::Csv, true) => {
            let rows: Vec<(f64, f64)> = table
                .grid
                .k_values
                .iter()
                .copied()
                .zip(table.densities())
                .collect();
            density_csv(&rows)
        }
        (TableFormat::Csv, false) => {
            let rows: Vec<(f64, Complex64)> = table
                .grid
                .k_values
                .iter()
                .copied()
                .zip(table.values.iter().copied())
                .collect();
            amplitude_csv(&rows)
        }
        (TableFormat::Json, true) => json_line(&DensityDocument::new(&table)),
        (TableFormat::Json, false) => json_line(&AmplitudeDocument::new(&table)),
        (TableFormat::Text, _) => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "Q_({},{}) on [{}, {}], {} points, source {}",
                table.index.l,
                table.index.m,
                format_float(table.grid.k_values[0]),
                format_float(*table.grid.k_values.last().unwrap()),
                table.grid.k_values.len(),
                table.source.name()
            );
            let _ = writeln!(s, "normalization = {}", format_float(table.normalization()));
            s
        }
    };
    emit(args.out.as_deref(), &content)
}

// ---------------------------------------------------------------------------
// verify-qlm
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct QlmThresholds {
    oracle_deviation: f64,
    normalization: f64,
    gram_offdiagonal: f64,
    m_reflection: f64,
    k_parity: f64,
    difference_equation: f64,
    l2_residual: f64,
}

#[derive(Serialize)]
struct QlmReport {
    lmax: u32,
    /// Max phase-aligned |closed − quadrature| over the nine closed forms.
    oracle_deviation: f64,
    normalization_worst: f64,
    gram_offdiagonal_worst: f64,
    m_reflection_worst: f64,
    k_parity_worst: f64,
    /// Residual of the recursion in k, relative to 1 + |Q|.
    difference_equation_worst: f64,
    l2_residual_worst: f64,
    thresholds: QlmThresholds,
    pass: bool,
}

fn verify_qlm(lmax: u32, format: ReportFormat) -> Result<(), AppError> {
    let ks: Vec<f64> = (-100..=100).map(|j| j as f64 * 0.1).collect();
    let mut oracle_dev: f64 = 0.0;
    let mut diff_worst: f64 = 0.0;
    for l in 0..=2u32 {
        for m in -(l as i32)..=l as i32 {
            let closed: Vec<Complex64> = ks
                .iter()
                .map(|&k| q_lm_closed(l, m, Complex64::new(k, 0.0), 1.0))
                .collect::<Result<_, _>>()?;
            let numeric: Vec<Complex64> = ks
                .iter()
                .map(|&k| q_lm_numeric(l, m, k, 1.0))
                .collect::<Result<_, _>>()?;
            let (_, dev) = align_phase(&closed, &numeric);
            oracle_dev = oracle_dev.max(dev);
            for (&k, c) in ks.iter().zip(&closed) {
                let r = difference_residual(l, m, k, 1.0)?;
                diff_worst = diff_worst.max(r / (1.0 + c.norm()));
            }
        }
    }

    let mut norm_worst: f64 = 0.0;
    let mut gram_worst: f64 = 0.0;
    for m in -(lmax as i32)..=lmax as i32 {
        let gram = orthogonality_matrix(m, lmax, 1.0);
        for a in 0..gram.nrows() {
            for b in 0..gram.ncols() {
                if a == b {
                    norm_worst = norm_worst.max((gram[(a, b)] - 1.0).abs());
                } else {
                    gram_worst = gram_worst.max(gram[(a, b)].abs());
                }
            }
        }
    }

    let grid = MomentumGrid::symmetric(6.0, 0.4);
    let mut m_worst: f64 = 0.0;
    let mut k_worst: f64 = 0.0;
    let us: Vec<f64> = (-40..=40).map(|j| j as f64 * 0.25).collect();
    let mut l2_worst: f64 = 0.0;
    for l in 0..=lmax {
        for m in 0..=l as i32 {
            if m > 0 {
                m_worst = m_worst.max(m_reflection_defect(l, m, &grid, 1.0));
            }
            let table =
                AmplitudeTable::compute_with(l, m, grid.clone(), 1.0, AmplitudeSource::Quadrature)?;
            k_worst = k_worst.max(table.k_parity_defect());
            l2_worst = l2_worst.max(l2u_residual(l, m, &us));
        }
    }

    let thresholds = QlmThresholds {
        oracle_deviation: 1e-8,
        normalization: 1e-6,
        gram_offdiagonal: 1e-6,
        m_reflection: 1e-10,
        k_parity: 1e-10,
        difference_equation: 1e-10,
        l2_residual: 1e-9,
    };
    let report = QlmReport {
        lmax,
        oracle_deviation: oracle_dev,
        normalization_worst: norm_worst,
        gram_offdiagonal_worst: gram_worst,
        m_reflection_worst: m_worst,
        k_parity_worst: k_worst,
        difference_equation_worst: diff_worst,
        l2_residual_worst: l2_worst,
        pass: oracle_dev <= thresholds.oracle_deviation
            && norm_worst <= thresholds.normalization
            && gram_worst <= thresholds.gram_offdiagonal
            && m_worst <= thresholds.m_reflection
            && k_worst <= thresholds.k_parity
            && diff_worst <= thresholds.difference_equation
            && l2_worst <= thresholds.l2_residual,
        thresholds,
    };

    match format {
        ReportFormat::Json => print!("{}", json_line(&report)),
        ReportFormat::Text => {
            println!("lmax                      = {}", report.lmax);
            println!("oracle deviation          = {}", format_float(report.oracle_deviation));
            println!("normalization worst       = {}", format_float(report.normalization_worst));
            println!("gram off-diagonal worst   = {}", format_float(report.gram_offdiagonal_worst));
            println!("m-reflection worst        = {}", format_float(report.m_reflection_worst));
            println!("k-parity worst            = {}", format_float(report.k_parity_worst));
            println!("difference equation worst = {}", format_float(report.difference_equation_worst));
            println!("L2 residual worst         = {}", format_float(report.l2_residual_worst));
            println!("pass                      = {}", report.pass);
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(AppError::Numerical {
            code: "verification_failed",
            message: "a momentum-amplitude residual exceeded its threshold".to_string(),
        })
    }
}

// ---------------------------------------------------------------------------
// verify-algebra
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AlgebraThresholds {
    commutator: f64,
    rotation: f64,
    hermiticity: f64,
}

#[derive(Serialize)]
struct ResidualEntry {
    name: String,
    residual: f64,
}

#[derive(Serialize)]
struct AlgebraReport {
    l_max: u32,
    l_interior: u32,
    hbar: f64,
    commutators: Vec<ResidualEntry>,
    commutator_worst: f64,
    rotations: Vec<ResidualEntry>,
    rotation_worst: f64,
    hermiticity_worst: f64,
    thresholds: AlgebraThresholds,
    pass: bool,
}

fn verify_algebra(
    lmax: u32,
    interior: Option<u32>,
    hbar: f64,
    format: ReportFormat,
) -> Result<(), AppError> {
    if !(hbar > 0.0) {
        return Err(AppError::Usage(format!("hbar must be positive, got {hbar}")));
    }
    let l_interior = interior.unwrap_or(lmax.saturating_sub(2));
    let set = OperatorSet::new(lmax, hbar);
    let commutators: Vec<ResidualEntry> = so31_residual_table(&set, l_interior)?
        .into_iter()
        .map(|(label, residual)| ResidualEntry { name: label.to_string(), residual })
        .collect();
    let commutator_worst = commutators.iter().map(|e| e.residual).fold(0.0f64, f64::max);

    let mut rotations = Vec::new();
    for (family, fname) in [
        (OperatorFamily::Momentum, "p"),
        (OperatorFamily::AngularMomentum, "L"),
    ] {
        for (target, tname) in [(RotationTarget::XFromZ, "x"), (RotationTarget::YFromZ, "y")] {
            let residual = rotation_equivalence_residual(&set, family, target, l_interior)?;
            rotations.push(ResidualEntry { name: format!("{fname}_{tname} from {fname}_z"), residual });
        }
    }
    let rotation_worst = rotations.iter().map(|e| e.residual).fold(0.0f64, f64::max);

    let hermiticity_worst = [OpId::Px, OpId::Py, OpId::Pz, OpId::Lx, OpId::Ly, OpId::Lz]
        .into_iter()
        .map(|op| set.get(op).hermiticity_defect())
        .fold(0.0f64, f64::max);

    let thresholds = AlgebraThresholds {
        commutator: 1e-8 * hbar * hbar,
        rotation: 1e-6 * hbar,
        hermiticity: 1e-10 * hbar,
    };
    let report = AlgebraReport {
        l_max: lmax,
        l_interior,
        hbar,
        commutator_worst,
        rotation_worst,
        hermiticity_worst,
        pass: commutator_worst <= thresholds.commutator
            && rotation_worst <= thresholds.rotation
            && hermiticity_worst <= thresholds.hermiticity,
        commutators,
        rotations,
        thresholds,
    };

    match format {
        ReportFormat::Json => print!("{}", json_line(&report)),
        ReportFormat::Text => {
            println!("l_max = {}, interior l <= {}, hbar = {}", report.l_max, report.l_interior, report.hbar);
            for e in &report.commutators {
                println!("{:28} residual = {}", e.name, format_float(e.residual));
            }
            for e in &report.rotations {
                println!("{:28} residual = {}", e.name, format_float(e.residual));
            }
            println!("hermiticity worst            = {}", format_float(report.hermiticity_worst));
            println!("pass = {}", report.pass);
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(AppError::Numerical {
            code: "verification_failed",
            message: "an operator-algebra residual exceeded its threshold".to_string(),
        })
    }
}

// ---------------------------------------------------------------------------
// surface
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ShellReport {
    q3: f64,
    det: f64,
    det_closed_form: f64,
    expansion_factor: f64,
}

#[derive(Serialize)]
struct SurfaceReport {
    chart: String,
    q1: f64,
    q2: f64,
    mass: f64,
    hbar: f64,
    mean_curvature: f64,
    gaussian_curvature: f64,
    geometric_potential: f64,
    laplacian_limit_coefficient: f64,
    normal_divergence: f64,
    det_metric: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    shell: Option<ShellReport>,
}

fn surface_verb(
    chart_text: &str,
    q1: f64,
    q2: f64,
    q3: Option<f64>,
    mass: f64,
    hbar: f64,
    format: ReportFormat,
) -> Result<(), AppError> {
    if !(mass > 0.0) || !(hbar > 0.0) {
        return Err(AppError::Usage(format!(
            "mass and hbar must be positive, got mass = {mass} hbar = {hbar}"
        )));
    }
    let chart = SurfaceChart::parse(chart_text)?;
    let geo = geometry_at(&chart, q1, q2)?;
    let shell = match q3 {
        Some(q3) => {
            let s = shell_metric(&chart, q1, q2, q3)?;
            Some(ShellReport {
                q3,
                det: s.det,
                det_closed_form: s.det_closed_form,
                expansion_factor: s.expansion_factor,
            })
        }
        None => None,
    };
    let report = SurfaceReport {
        chart: chart_text.to_string(),
        q1,
        q2,
        mass,
        hbar,
        mean_curvature: geo.mean_curvature,
        gaussian_curvature: geo.gaussian_curvature,
        geometric_potential: geometric_potential(
            geo.mean_curvature,
            geo.gaussian_curvature,
            mass,
            hbar,
        ),
        laplacian_limit_coefficient: laplacian_limit_coefficient(
            geo.mean_curvature,
            geo.gaussian_curvature,
        ),
        normal_divergence: normal_divergence(&chart, q1, q2)?,
        det_metric: geo.det_metric,
        shell,
    };
    match format {
        ReportFormat::Json => print!("{}", json_line(&report)),
        ReportFormat::Text => {
            println!("chart                = {}", report.chart);
            println!("point                = ({}, {})", format_float(q1), format_float(q2));
            println!("mean curvature M     = {}", format_float(report.mean_curvature));
            println!("gaussian curvature K = {}", format_float(report.gaussian_curvature));
            println!("geometric potential  = {}", format_float(report.geometric_potential));
            println!("M^2 - K              = {}", format_float(report.laplacian_limit_coefficient));
            println!("div n                = {}", format_float(report.normal_divergence));
            println!("det g                = {}", format_float(report.det_metric));
            if let Some(s) = &report.shell {
                println!("shell q3             = {}", format_float(s.q3));
                println!("shell det G          = {}", format_float(s.det));
                println!("shell det (closed)   = {}", format_float(s.det_closed_form));
                println!("expansion factor     = {}", format_float(s.expansion_factor));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// uncertainty / compare-ho
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct UncertaintyReport {
    radius_angstrom: f64,
    delta_p_au: f64,
}

fn uncertainty_verb(radius_angstrom: f64, format: ReportFormat) -> Result<(), AppError> {
    let delta_p_au = momentum_uncertainty_au(radius_angstrom)?;
    let report = UncertaintyReport { radius_angstrom, delta_p_au };
    match format {
        ReportFormat::Json => print!("{}", json_line(&report)),
        ReportFormat::Text => {
            println!("radius     = {} Angstrom", format_float(radius_angstrom));
            println!("delta_p_au = {} a.u.", format_float(delta_p_au));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareHoReport {
    l: u32,
    n: u32,
    matching: String,
    beta: f64,
    sup_diff: f64,
    l1_diff: f64,
    q_support: f64,
    ho_support: f64,
}

fn compare_ho_verb(
    l: u32,
    n: Option<u32>,
    beta: Option<f64>,
    format: ReportFormat,
) -> Result<(), AppError> {
    let n = n.unwrap_or(l);
    let (matching, name) = match beta {
        Some(b) if b > 0.0 => (WidthMatching::Manual(b), "manual"),
        Some(b) => {
            return Err(AppError::Usage(format!("beta must be positive, got {b}")));
        }
        None => (WidthMatching::Variance, "variance"),
    };
    let cmp = compare_ho(l, n, matching);
    let report = CompareHoReport {
        l,
        n,
        matching: name.to_string(),
        beta: cmp.beta,
        sup_diff: cmp.sup_diff,
        l1_diff: cmp.l1_diff,
        q_support: cmp.q_support,
        ho_support: cmp.ho_support,
    };
    match format {
        ReportFormat::Json => print!("{}", json_line(&report)),
        ReportFormat::Text => {
            println!("l = {}, oscillator n = {}, {} width beta = {}", l, n, name, format_float(cmp.beta));
            println!("sup distance = {}", format_float(cmp.sup_diff));
            println!("L1 distance  = {}", format_float(cmp.l1_diff));
            println!("supports     = {} vs {}", format_float(cmp.q_support), format_float(cmp.ho_support));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// figure
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FigureManifest {
    figure: u32,
    files: Vec<String>,
}

fn write_density_file(
    dir: &Path,
    name: &str,
    rows: &[(f64, f64)],
    files: &mut Vec<String>,
) -> Result<(), AppError> {
    let path = dir.join(name);
    std::fs::write(&path, density_csv(rows))?;
    files.push(path.to_string_lossy().into_owned());
    Ok(())
}

fn density_rows(l: u32, m: i32, grid: MomentumGrid) -> Result<Vec<(f64, f64)>, AppError> {
    let table = AmplitudeTable::compute(l, m, grid, 1.0)?;
    Ok(table.grid.k_values.iter().copied().zip(table.densities()).collect())
}

fn oscillator_rows(n: u32, beta: f64, grid: &MomentumGrid) -> Vec<(f64, f64)> {
    grid.k_values
        .iter()
        .map(|&k| (k, ho_momentum_density(n, k, beta)))
        .collect()
}

fn figure_verb(id: u32, dir: &Path, format: ReportFormat) -> Result<(), AppError> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    match id {
        1 => {
            let grid = MomentumGrid::symmetric(6.0, 0.02);
            write_density_file(dir, "figure1_q00_density.csv", &density_rows(0, 0, grid.clone())?, &mut files)?;
            let beta = compare_ho(0, 0, WidthMatching::Variance).beta;
            write_density_file(dir, "figure1_oscillator_n0.csv", &oscillator_rows(0, beta, &grid), &mut files)?;
        }
        2 => {
            let grid = MomentumGrid::symmetric(8.0, 0.02);
            for m in 0..=3 {
                write_density_file(
                    dir,
                    &format!("figure2_q3{m}_density.csv"),
                    &density_rows(3, m, grid.clone())?,
                    &mut files,
                )?;
            }
        }
        3 => {
            let grid = MomentumGrid::default_grid();
            write_density_file(dir, "figure3_q10_density.csv", &density_rows(10, 0, grid.clone())?, &mut files)?;
            let beta = compare_ho(10, 10, WidthMatching::Variance).beta;
            write_density_file(dir, "figure3_oscillator_n10.csv", &oscillator_rows(10, beta, &grid), &mut files)?;
        }
        _ => unreachable!("clap bounds id to 1..=3"),
    }
    let manifest = FigureManifest { figure: id, files };
    match format {
        ReportFormat::Json => print!("{}", json_line(&manifest)),
        ReportFormat::Text => {
            for f in &manifest.files {
                println!("wrote {f}");
            }
        }
    }
    Ok(())
}
