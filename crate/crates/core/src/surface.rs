//! Differential geometry of parametrized surfaces embedded in R³.
//!
//! A chart maps `(q¹, q²)` into R³. From its first and second derivatives we
//! assemble the metric, the unit normal, the second fundamental form and the
//! Weingarten map `α = -g⁻¹ b`, whose trace and determinant give the mean and
//! Gaussian curvatures through `M = -tr(α)/2`, `K = det(α)`. The sign is
//! fixed so that a sphere of radius `r` with outward normal has `M = -1/r`
//! and `K = 1/r²`.
//!
//! The same data builds the metric of a thin shell of points `r(q¹,q²) + q³ n`
//! and the curvature-induced potential `V_g = -ħ²/(2μ) (M² - K)` that appears
//! when the shell is squeezed onto the surface.

use nalgebra::{Matrix2, Matrix3, Vector3};
use thiserror::Error;

/// Absolute lower bound on `det g` below which a chart point is rejected.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Relative step used for finite-difference derivatives of user charts and
/// for the normal-divergence check (scaled by the domain span).
const FD_STEP_FRACTION: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum GeometryError {
    /// The tangent vectors fail to span a plane at this point.
    #[error("degenerate chart point: det g = {det_g:.3e} <= {tol:.1e}")]
    DegenerateChart { det_g: f64, tol: f64 },
    /// The shell self-intersects: `1 - 2M q³ + K (q³)²` is not positive.
    #[error("shell folds at q3 = {q3}: expansion factor {factor:.3e} <= 0")]
    ShellFold { q3: f64, factor: f64 },
    /// A chart description string could not be understood.
    #[error("invalid chart: {0}")]
    InvalidChart(String),
}

/// Rectangular parameter domain of a chart.
#[derive(Debug, Clone, Copy)]
pub struct Domain {
    pub q1: (f64, f64),
    pub q2: (f64, f64),
}

impl Domain {
    pub fn new(q1: (f64, f64), q2: (f64, f64)) -> Self {
        assert!(q1.1 > q1.0 && q2.1 > q2.0, "domain must have positive extent");
        Self { q1, q2 }
    }

    fn spans(&self) -> (f64, f64) {
        (self.q1.1 - self.q1.0, self.q2.1 - self.q2.0)
    }
}

/// Position and derivatives of the chart map at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct ChartJet {
    pub point: Vector3<f64>,
    pub d1: Vector3<f64>,
    pub d2: Vector3<f64>,
    pub d11: Vector3<f64>,
    pub d12: Vector3<f64>,
    pub d22: Vector3<f64>,
}

type MapFn = dyn Fn(f64, f64) -> [f64; 3] + Send + Sync;
type JetFn = dyn Fn(f64, f64) -> ChartJet + Send + Sync;

/// A parametrized surface patch. Built-in charts carry closed-form
/// derivatives and an orientation chosen so the normal points outward;
/// user-supplied charts fall back on central finite differences with step
/// `1e-5` of the domain span per coordinate.
pub struct SurfaceChart {
    name: String,
    map: Box<MapFn>,
    jet: Option<Box<JetFn>>,
    domain: Domain,
    orientation: f64,
}

impl std::fmt::Debug for SurfaceChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfaceChart")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl SurfaceChart {
    /// Sphere of radius `r` in polar/azimuthal coordinates `(θ, φ)`,
    /// outward normal.
    pub fn sphere(radius: f64) -> Self {
        assert!(radius > 0.0, "sphere radius must be positive");
        let r = radius;
        Self {
            name: format!("sphere:r={radius}"),
            map: Box::new(move |th: f64, ph: f64| {
                [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()]
            }),
            jet: Some(Box::new(move |th: f64, ph: f64| {
                let (st, ct) = th.sin_cos();
                let (sp, cp) = ph.sin_cos();
                ChartJet {
                    point: Vector3::new(r * st * cp, r * st * sp, r * ct),
                    d1: Vector3::new(r * ct * cp, r * ct * sp, -r * st),
                    d2: Vector3::new(-r * st * sp, r * st * cp, 0.0),
                    d11: Vector3::new(-r * st * cp, -r * st * sp, -r * ct),
                    d12: Vector3::new(-r * ct * sp, r * ct * cp, 0.0),
                    d22: Vector3::new(-r * st * cp, -r * st * sp, 0.0),
                }
            })),
            domain: Domain::new((0.0, std::f64::consts::PI), (0.0, 2.0 * std::f64::consts::PI)),
            orientation: 1.0,
        }
    }

    /// Infinite circular cylinder of radius `R` in coordinates `(φ, z)`,
    /// outward normal. The `z` domain is a unit window used only for
    /// sampling and step scaling; the geometry does not depend on `z`.
    pub fn cylinder(radius: f64) -> Self {
        assert!(radius > 0.0, "cylinder radius must be positive");
        let r = radius;
        Self {
            name: format!("cylinder:R={radius}"),
            map: Box::new(move |ph: f64, z: f64| [r * ph.cos(), r * ph.sin(), z]),
            jet: Some(Box::new(move |ph: f64, z: f64| {
                let (sp, cp) = ph.sin_cos();
                ChartJet {
                    point: Vector3::new(r * cp, r * sp, z),
                    d1: Vector3::new(-r * sp, r * cp, 0.0),
                    d2: Vector3::new(0.0, 0.0, 1.0),
                    d11: Vector3::new(-r * cp, -r * sp, 0.0),
                    d12: Vector3::zeros(),
                    d22: Vector3::zeros(),
                }
            })),
            domain: Domain::new((0.0, 2.0 * std::f64::consts::PI), (-1.0, 1.0)),
            orientation: 1.0,
        }
    }

    /// Torus with ring (center-circle) radius `R` and tube radius `a`, in
    /// coordinates `(θ, φ)` where `θ` runs around the tube and `φ` around
    /// the symmetry axis; outward normal.
    pub fn torus(ring_radius: f64, tube_radius: f64) -> Self {
        assert!(
            ring_radius > tube_radius && tube_radius > 0.0,
            "torus needs R > a > 0"
        );
        let (rr, a) = (ring_radius, tube_radius);
        Self {
            name: format!("torus:R={ring_radius},a={tube_radius}"),
            map: Box::new(move |th: f64, ph: f64| {
                let w = rr + a * th.cos();
                [w * ph.cos(), w * ph.sin(), a * th.sin()]
            }),
            jet: Some(Box::new(move |th: f64, ph: f64| {
                let (st, ct) = th.sin_cos();
                let (sp, cp) = ph.sin_cos();
                let w = rr + a * ct;
                ChartJet {
                    point: Vector3::new(w * cp, w * sp, a * st),
                    d1: Vector3::new(-a * st * cp, -a * st * sp, a * ct),
                    d2: Vector3::new(-w * sp, w * cp, 0.0),
                    d11: Vector3::new(-a * ct * cp, -a * ct * sp, -a * st),
                    d12: Vector3::new(a * st * sp, -a * st * cp, 0.0),
                    d22: Vector3::new(-w * cp, -w * sp, 0.0),
                }
            })),
            domain: Domain::new(
                (0.0, 2.0 * std::f64::consts::PI),
                (0.0, 2.0 * std::f64::consts::PI),
            ),
            // With (θ, φ) ordered this way the raw cross product points
            // into the tube; flip it so the normal is outward.
            orientation: -1.0,
        }
    }

    /// The plane `z = 0` in Cartesian coordinates, normal `+z`.
    pub fn plane() -> Self {
        Self {
            name: "plane".to_string(),
            map: Box::new(|x: f64, y: f64| [x, y, 0.0]),
            jet: Some(Box::new(|x: f64, y: f64| ChartJet {
                point: Vector3::new(x, y, 0.0),
                d1: Vector3::new(1.0, 0.0, 0.0),
                d2: Vector3::new(0.0, 1.0, 0.0),
                d11: Vector3::zeros(),
                d12: Vector3::zeros(),
                d22: Vector3::zeros(),
            })),
            domain: Domain::new((-1.0, 1.0), (-1.0, 1.0)),
            orientation: 1.0,
        }
    }

    /// Chart from a user-supplied map; derivatives are taken by central
    /// finite differences. The normal is `t₁ × t₂` normalized.
    pub fn from_fn<F>(name: &str, domain: Domain, map: F) -> Self
    where
        F: Fn(f64, f64) -> [f64; 3] + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            map: Box::new(map),
            jet: None,
            domain,
            orientation: 1.0,
        }
    }

    /// Parses the chart names accepted on the command line:
    /// `sphere:r=<v>`, `cylinder:R=<v>`, `torus:R=<v>,a=<v>`, `plane`.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let bad = |msg: String| GeometryError::InvalidChart(msg);
        let parse_val = |s: &str, key: &str| -> Result<f64, GeometryError> {
            let rest = s
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| bad(format!("expected `{key}=<value>` in `{text}`")))?;
            rest.parse::<f64>()
                .map_err(|_| bad(format!("`{rest}` is not a number in `{text}`")))
        };
        match text {
            "plane" => Ok(Self::plane()),
            _ if text.starts_with("sphere:") => {
                let r = parse_val(&text["sphere:".len()..], "r")?;
                if r <= 0.0 {
                    return Err(bad(format!("sphere radius must be positive, got {r}")));
                }
                Ok(Self::sphere(r))
            }
            _ if text.starts_with("cylinder:") => {
                let r = parse_val(&text["cylinder:".len()..], "R")?;
                if r <= 0.0 {
                    return Err(bad(format!("cylinder radius must be positive, got {r}")));
                }
                Ok(Self::cylinder(r))
            }
            _ if text.starts_with("torus:") => {
                let body = &text["torus:".len()..];
                let mut parts = body.splitn(2, ',');
                let r = parse_val(parts.next().unwrap_or(""), "R")?;
                let a = parse_val(parts.next().unwrap_or(""), "a")?;
                if !(r > a && a > 0.0) {
                    return Err(bad(format!("torus needs R > a > 0, got R={r}, a={a}")));
                }
                Ok(Self::torus(r, a))
            }
            _ => Err(bad(format!(
                "unknown chart `{text}` (expected sphere:r=<v>, cylinder:R=<v>, torus:R=<v>,a=<v> or plane)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn position(&self, q1: f64, q2: f64) -> Vector3<f64> {
        let p = (self.map)(q1, q2);
        Vector3::new(p[0], p[1], p[2])
    }

    fn fd_steps(&self) -> (f64, f64) {
        let (s1, s2) = self.domain.spans();
        (FD_STEP_FRACTION * s1, FD_STEP_FRACTION * s2)
    }

    /// Derivatives at a point: closed form when available, otherwise
    /// second-order central differences.
    pub fn jet(&self, q1: f64, q2: f64) -> ChartJet {
        if let Some(jet) = &self.jet {
            return jet(q1, q2);
        }
        let (h1, h2) = self.fd_steps();
        let f = |a: f64, b: f64| self.position(a, b);
        let p = f(q1, q2);
        let fp1 = f(q1 + h1, q2);
        let fm1 = f(q1 - h1, q2);
        let fp2 = f(q1, q2 + h2);
        let fm2 = f(q1, q2 - h2);
        ChartJet {
            point: p,
            d1: (fp1 - fm1) / (2.0 * h1),
            d2: (fp2 - fm2) / (2.0 * h2),
            d11: (fp1 - 2.0 * p + fm1) / (h1 * h1),
            d22: (fp2 - 2.0 * p + fm2) / (h2 * h2),
            d12: (f(q1 + h1, q2 + h2) - f(q1 + h1, q2 - h2) - f(q1 - h1, q2 + h2)
                + f(q1 - h1, q2 - h2))
                / (4.0 * h1 * h2),
        }
    }
}

/// First and second fundamental data of a chart at one point.
#[derive(Debug, Clone)]
pub struct SurfaceGeometry {
    pub position: Vector3<f64>,
    pub tangent1: Vector3<f64>,
    pub tangent2: Vector3<f64>,
    /// First fundamental form `g_{μν} = t_μ · t_ν`.
    pub metric: Matrix2<f64>,
    pub det_metric: f64,
    /// Unit normal (orientation of the chart applied).
    pub normal: Vector3<f64>,
    /// Second fundamental form `b_{μν} = n · ∂_μ∂_ν r`.
    pub second_form: Matrix2<f64>,
    /// Weingarten matrix `α = -g⁻¹ b`; `∂_μ n = α^λ_μ t_λ`.
    pub weingarten: Matrix2<f64>,
    /// `M = -tr(α)/2`; sphere with outward normal gives `-1/r`.
    pub mean_curvature: f64,
    /// `K = det(α)`.
    pub gaussian_curvature: f64,
}

/// Evaluates the full curvature data of `chart` at `(q1, q2)`.
pub fn geometry_at(
    chart: &SurfaceChart,
    q1: f64,
    q2: f64,
) -> Result<SurfaceGeometry, GeometryError> {
    let jet = chart.jet(q1, q2);
    let g11 = jet.d1.dot(&jet.d1);
    let g12 = jet.d1.dot(&jet.d2);
    let g22 = jet.d2.dot(&jet.d2);
    let metric = Matrix2::new(g11, g12, g12, g22);
    let det_metric = g11 * g22 - g12 * g12;
    if det_metric <= DEGENERACY_TOL {
        return Err(GeometryError::DegenerateChart {
            det_g: det_metric,
            tol: DEGENERACY_TOL,
        });
    }
    let cross = jet.d1.cross(&jet.d2);
    let normal = cross * (chart.orientation / cross.norm());
    let b11 = normal.dot(&jet.d11);
    let b12 = normal.dot(&jet.d12);
    let b22 = normal.dot(&jet.d22);
    let second_form = Matrix2::new(b11, b12, b12, b22);
    let metric_inv = Matrix2::new(g22, -g12, -g12, g11) / det_metric;
    let weingarten = -metric_inv * second_form;
    let mean_curvature = -0.5 * weingarten.trace();
    let gaussian_curvature = weingarten.determinant();
    Ok(SurfaceGeometry {
        position: jet.point,
        tangent1: jet.d1,
        tangent2: jet.d2,
        metric,
        det_metric,
        normal,
        second_form,
        weingarten,
        mean_curvature,
        gaussian_curvature,
    })
}

/// Curvature-induced potential `V_g = -ħ²/(2μ) (M² - K)` of a particle of
/// mass `μ` confined to the surface. Never positive, and zero exactly on
/// spheres and planes where the two principal curvatures coincide.
pub fn geometric_potential(
    mean_curvature: f64,
    gaussian_curvature: f64,
    mass: f64,
    hbar: f64,
) -> f64 {
    assert!(mass > 0.0, "mass must be positive");
    -hbar * hbar / (2.0 * mass) * (mean_curvature * mean_curvature - gaussian_curvature)
}

/// The curvature scalar `M² - K` by which the squeezed three-dimensional
/// Laplacian exceeds the surface Laplace–Beltrami operator.
pub fn laplacian_limit_coefficient(mean_curvature: f64, gaussian_curvature: f64) -> f64 {
    mean_curvature * mean_curvature - gaussian_curvature
}

/// Metric of the shell point `r(q¹,q²) + q³ n(q¹,q²)`.
#[derive(Debug, Clone)]
pub struct ShellMetric {
    /// Full 3×3 metric; the `q³` row and column are exactly `(0, 0, 1)`.
    pub matrix: Matrix3<f64>,
    /// Determinant of `matrix`, computed from the assembled entries.
    pub det: f64,
    /// The closed form `det g · (1 - 2M q³ + K (q³)²)²`.
    pub det_closed_form: f64,
    /// Expansion factor `1 - 2M q³ + K (q³)²` (positive away from folds).
    pub expansion_factor: f64,
}

/// Assembles the shell metric at normal offset `q3`. Errors with
/// [`GeometryError::ShellFold`] when the offset reaches a focal point.
pub fn shell_metric(
    chart: &SurfaceChart,
    q1: f64,
    q2: f64,
    q3: f64,
) -> Result<ShellMetric, GeometryError> {
    let geo = geometry_at(chart, q1, q2)?;
    let m = geo.mean_curvature;
    let k = geo.gaussian_curvature;
    let factor = 1.0 - 2.0 * m * q3 + k * q3 * q3;
    if factor <= 0.0 {
        return Err(GeometryError::ShellFold { q3, factor });
    }
    let g = geo.metric;
    let a = geo.weingarten;
    let ga = g * a;
    let upper = g + (ga + ga.transpose()) * q3 + a.transpose() * g * a * (q3 * q3);
    let mut matrix = Matrix3::zeros();
    matrix.fixed_view_mut::<2, 2>(0, 0).copy_from(&upper);
    matrix[(2, 2)] = 1.0;
    let det = matrix.determinant();
    let det_closed_form = geo.det_metric * factor * factor;
    Ok(ShellMetric {
        matrix,
        det,
        det_closed_form,
        expansion_factor: factor,
    })
}

/// Surface divergence of the unit normal, `∇₂·n = Σ_μ t^μ · ∂_μ n`, with the
/// normal differentiated by central finite differences along the coordinate
/// curves and contracted with the dual tangents. Equals `-2M` up to the
/// finite-difference error; kept numerical on purpose as an independent
/// check of the Weingarten route.
pub fn normal_divergence(
    chart: &SurfaceChart,
    q1: f64,
    q2: f64,
) -> Result<f64, GeometryError> {
    let geo = geometry_at(chart, q1, q2)?;
    let (h1, h2) = chart.fd_steps();
    let n = |a: f64, b: f64| -> Result<Vector3<f64>, GeometryError> {
        Ok(geometry_at(chart, a, b)?.normal)
    };
    let dn1 = (n(q1 + h1, q2)? - n(q1 - h1, q2)?) / (2.0 * h1);
    let dn2 = (n(q1, q2 + h2)? - n(q1, q2 - h2)?) / (2.0 * h2);
    let inv = Matrix2::new(
        geo.metric[(1, 1)],
        -geo.metric[(0, 1)],
        -geo.metric[(0, 1)],
        geo.metric[(0, 0)],
    ) / geo.det_metric;
    let dual1 = geo.tangent1 * inv[(0, 0)] + geo.tangent2 * inv[(1, 0)];
    let dual2 = geo.tangent1 * inv[(0, 1)] + geo.tangent2 * inv[(1, 1)];
    Ok(dual1.dot(&dn1) + dual2.dot(&dn2))
}
