//! Serializable views of period computations.

use std::fmt::Write as _;

use polyperiod_core::dec::EnergyReport;
use polyperiod_core::linalg::CMatrix;
use polyperiod_core::mesh::TopologyReport;
use polyperiod_core::periods::PeriodResult;
use polyperiod_core::siegel::ReducedMatrix;
use polyperiod_core::C64;
use serde::{Deserialize, Serialize};

/// Complex matrix as separate real and imaginary row arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        Self { re: m.re(), im: m.im() }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        let n = self.re.len();
        let square = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !square(&self.re) || !square(&self.im) {
            return Err("matrix must be square with matching re/im shapes".into());
        }
        Ok(CMatrix::from_fn(n, n, |i, j| C64::new(self.re[i][j], self.im[i][j])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceJson {
    /// `mesh`, `spec` or `generator`.
    pub kind: String,
    pub name: String,
    pub refine: usize,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedJson {
    pub omega: MatrixJson,
    pub transform: Vec<Vec<i64>>,
    pub canonical: bool,
}

impl From<&ReducedMatrix> for ReducedJson {
    fn from(r: &ReducedMatrix) -> Self {
        Self {
            omega: (&r.omega).into(),
            transform: r.transform.to_rows(),
            canonical: r.canonical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualsJson {
    pub harmonic: f64,
    pub closedness: f64,
    pub normalization: f64,
    pub symmetry: f64,
    pub pi_pi_star: f64,
    pub reading_gap: f64,
    pub solver: f64,
    pub type_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshJson {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub min_angle_deg: Option<f64>,
    pub min_rho: f64,
    pub max_rho: f64,
}

/// Output of `compute`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub genus: usize,
    pub scheme: String,
    pub pi: MatrixJson,
    pub pi_star: MatrixJson,
    /// One-sided b-period readings on the `Γ` and `Γ*` representatives;
    /// `pi` is their mean.
    pub pi_gamma: MatrixJson,
    pub pi_gamma_star: MatrixJson,
    pub reduced: ReducedJson,
    pub residuals: ResidualsJson,
    pub positivity_margin: f64,
    pub condition: f64,
    /// Riemann relations hold within the run tolerance and the
    /// normalization was well conditioned.
    pub valid: bool,
    pub mesh: MeshJson,
    pub source: SourceJson,
}

impl PeriodReport {
    pub fn new(result: &PeriodResult, reduced: &ReducedMatrix, source: SourceJson, tol: f64) -> Self {
        let r = &result.residuals;
        let scale = result.pi.max_abs().max(1.0);
        Self {
            genus: result.genus,
            scheme: result.scheme.as_str().to_string(),
            pi: (&result.pi).into(),
            pi_star: (&result.pi_star).into(),
            pi_gamma: (&result.pi_gamma).into(),
            pi_gamma_star: (&result.pi_gamma_star).into(),
            reduced: reduced.into(),
            residuals: ResidualsJson {
                harmonic: r.harmonic,
                closedness: r.closedness,
                normalization: r.normalization,
                symmetry: r.symmetry,
                pi_pi_star: r.pi_pi_star,
                reading_gap: r.reading_gap,
                solver: r.solver,
                type_defect: r.type_defect,
            },
            positivity_margin: result.positivity_margin,
            condition: result.condition,
            valid: result.is_valid() && r.symmetry <= tol * scale,
            mesh: MeshJson {
                vertices: result.mesh.vertices,
                edges: result.mesh.edges,
                faces: result.mesh.faces,
                min_angle_deg: result.mesh.min_angle_deg,
                min_rho: result.mesh.min_rho,
                max_rho: result.mesh.max_rho,
            },
            source,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let m = &self.mesh;
        let _ = writeln!(s, "source     {} {} (refine {}, root {})", self.source.kind, self.source.name, self.source.refine, self.source.root);
        let _ = writeln!(s, "surface    V={} E={} F={} genus {}", m.vertices, m.edges, m.faces, self.genus);
        let _ = writeln!(s, "weights    {} (rho in [{:.4e}, {:.4e}])", self.scheme, m.min_rho, m.max_rho);
        if let Some(a) = m.min_angle_deg {
            let _ = writeln!(s, "min angle  {a:.3} deg");
        }
        write_matrix(&mut s, "Pi", &self.pi);
        write_matrix(&mut s, "Pi*", &self.pi_star);
        write_matrix(&mut s, "Pi read on Gamma", &self.pi_gamma);
        write_matrix(&mut s, "Pi read on Gamma*", &self.pi_gamma_star);
        write_matrix(&mut s, "reduced Pi", &self.reduced.omega);
        if !self.reduced.canonical {
            let _ = writeln!(s, "  (reduction is not canonical for this genus)");
        }
        let r = &self.residuals;
        let _ = writeln!(s, "residuals  harmonic {:.2e}  closedness {:.2e}  normalization {:.2e}", r.harmonic, r.closedness, r.normalization);
        let _ = writeln!(s, "           symmetry {:.2e}  |Pi - Pi*| {:.2e}  reading gap {:.2e}", r.symmetry, r.pi_pi_star, r.reading_gap);
        let _ = writeln!(s, "           solver {:.2e}  type {:.2e}", r.solver, r.type_defect);
        let _ = writeln!(s, "min eig Im Pi {:.6e}, condition {:.3e}, {}", self.positivity_margin, self.condition, if self.valid { "valid" } else { "INVALID" });
        s
    }
}

pub fn write_matrix(s: &mut String, label: &str, m: &MatrixJson) {
    let _ = writeln!(s, "{label}");
    for (re, im) in m.re.iter().zip(&m.im) {
        let row: Vec<String> = re
            .iter()
            .zip(im)
            .map(|(a, b)| format!("{a:>+.12} {b:>+.12}i"))
            .collect();
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
}

/// Output of `compare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub genus: usize,
    pub reference: String,
    pub computed: ReducedJson,
    pub expected: ReducedJson,
    pub distance: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

impl CompareReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        write_matrix(&mut s, "reduced computed", &self.computed.omega);
        write_matrix(&mut s, &format!("reduced {}", self.reference), &self.expected.omega);
        let _ = writeln!(
            s,
            "distance {:.6e} ({} tolerance {:.1e})",
            self.distance,
            if self.within_tolerance { "within" } else { "outside" },
            self.tolerance
        );
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaunayJson {
    pub scheme: String,
    pub min_rho: Option<f64>,
    /// Edges with `ρ ≤ 0`, as `(edge, tail, head, rho)`.
    pub violations: Vec<(usize, usize, usize, f64)>,
}

/// Output of `validate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub genus: usize,
    pub min_angle_deg: Option<f64>,
    pub min_edge_length: Option<f64>,
    pub max_edge_length: Option<f64>,
    pub delaunay: Vec<DelaunayJson>,
    pub warnings: Vec<String>,
}

impl ValidateReport {
    pub fn new(t: TopologyReport) -> Self {
        Self {
            valid: true,
            vertices: t.vertex_count,
            edges: t.edge_count,
            faces: t.face_count,
            euler_characteristic: t.euler_characteristic,
            genus: t.genus,
            min_angle_deg: None,
            min_edge_length: None,
            max_edge_length: None,
            delaunay: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "V={} E={} F={} chi={} genus {}",
            self.vertices, self.edges, self.faces, self.euler_characteristic, self.genus
        );
        if let Some(a) = self.min_angle_deg {
            let _ = writeln!(s, "min angle {a:.3} deg");
        }
        if let (Some(a), Some(b)) = (self.min_edge_length, self.max_edge_length) {
            let _ = writeln!(s, "edge lengths in [{a:.6e}, {b:.6e}]");
        }
        for d in &self.delaunay {
            match d.min_rho {
                Some(r) => {
                    let _ = writeln!(s, "{} min rho {r:.6e}, {} violation(s)", d.scheme, d.violations.len());
                }
                None => {
                    let _ = writeln!(s, "{} weights unavailable", d.scheme);
                }
            }
            for (e, a, b, rho) in &d.violations {
                let _ = writeln!(s, "  edge {e} ({a}, {b}) rho={rho:.6e}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let _ = writeln!(s, "{}", if self.valid { "valid" } else { "INVALID" });
        s
    }
}

/// Output of `diagnose`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyJson {
    pub subject: String,
    pub dirichlet: f64,
    pub conformal: f64,
    pub area: f64,
    pub identity_residual: f64,
    /// Residual divided by `max(1, E_D)`.
    pub relative_residual: f64,
}

impl EnergyJson {
    pub fn new(subject: impl Into<String>, e: &EnergyReport) -> Self {
        Self {
            subject: subject.into(),
            dirichlet: e.dirichlet,
            conformal: e.conformal,
            area: e.area,
            identity_residual: e.identity_residual,
            relative_residual: e.identity_residual.abs() / e.dirichlet.abs().max(1.0),
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "{}\nE_D {:.12e}\nE_C {:.12e}\nA   {:.12e}\nE_C - (E_D - 2A) = {:.3e} (relative {:.3e})\n",
            self.subject, self.dirichlet, self.conformal, self.area, self.identity_residual, self.relative_residual
        )
    }
}
