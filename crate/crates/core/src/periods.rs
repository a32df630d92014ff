//! Holomorphic bases and period matrices.
//!
//! Every harmonic `ω_j` gives a type-(1,0) form `θ_j = ω_j + i*ω_j` on `Λ`.
//! The `2g` forms span the discrete holomorphic space, so each normalized
//! `ζ_k = Σ_j R_kj θ_j` is pinned down by asking for `δ_kℓ` a-periods on both
//! the `Γ` and the `Γ*` representatives. `Π` reads b-periods of `ζ` along
//! the `◊` cycle, which is the mean of the `Γ` and `Γ*` readings: the two
//! one-sided readings differ by the same amount in opposite directions and
//! are kept as diagnostics. `Π*` repeats the computation from harmonic forms
//! solved on `Γ*`.

use alloc::vec::Vec;

use crate::conformal::{WeightScheme, WeightedSurfaceGraph};
use crate::dec::{d1, hodge_star, Cochain1};
use crate::harmonic::{harmonic_family, holonomy, HarmonicForm, HarmonicOptions};
use crate::homology::{canonical_basis, HomologyBasis, Host};
use crate::linalg::{min_symmetric_eigenvalue, CMatrix};
use crate::solver::SolverKind;
use crate::{Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Condition number above which a normalization solve is flagged.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Normalized holomorphic forms `ζ_1..ζ_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicBasis {
    pub zetas: Vec<Cochain1>,
    /// `g × 2g` coefficients over `θ_j = (Id + i*)ω_j`.
    pub coefficients: CMatrix,
    /// Graph the underlying harmonic forms were solved on.
    pub host: Host,
    /// Max deviation of the a-periods from `δ_kℓ` on either graph.
    pub normalization_residual: f64,
    /// Condition number of the normalization system.
    pub condition: f64,
}

/// `θ = ω + i*ω`.
fn theta(g: &WeightedSurfaceGraph, form: &HarmonicForm) -> Cochain1 {
    form.omega.axpy(I, &hodge_star(g, &form.omega))
}

/// Solves for `R` and assembles the `ζ_k`.
pub fn holomorphic_basis(
    g: &WeightedSurfaceGraph,
    basis: &HomologyBasis,
    forms: &[HarmonicForm],
) -> Result<HolomorphicBasis> {
    let genus = basis.genus;
    let n = 2 * genus;
    if genus == 0 {
        return Err(Error::GenusZero);
    }
    if forms.len() != n || !basis.symplectic {
        return Err(Error::LengthMismatch {
            expected: n,
            found: forms.len(),
        });
    }
    let host = forms[0].host;
    let thetas: Vec<Cochain1> = forms.iter().map(|f| theta(g, f)).collect();
    // rows: a_ℓ on Γ, then a_ℓ on Γ*; columns: θ_j
    let mut a = CMatrix::zeros(n, n);
    for (j, t) in thetas.iter().enumerate() {
        for l in 0..genus {
            a[(l, j)] = holonomy(t, &basis.gamma_reps[l])?;
            a[(genus + l, j)] = holonomy(t, &basis.dual_reps[l])?;
        }
    }
    let condition = a.condition();
    let lu = a.lu().map_err(|_| Error::SingularSystem { condition })?;
    let mut coefficients = CMatrix::zeros(genus, n);
    let mut zetas = Vec::with_capacity(genus);
    for k in 0..genus {
        let mut rhs = alloc::vec![C64::new(0.0, 0.0); n];
        rhs[k] = C64::new(1.0, 0.0);
        rhs[genus + k] = C64::new(1.0, 0.0);
        let r = lu.solve(&rhs);
        let mut zeta = thetas[0].scaled(r[0]);
        for j in 1..n {
            zeta = zeta.axpy(r[j], &thetas[j]);
            coefficients[(k, j)] = r[j];
        }
        coefficients[(k, 0)] = r[0];
        zetas.push(zeta);
    }
    let mut normalization_residual: f64 = 0.0;
    for (k, z) in zetas.iter().enumerate() {
        for l in 0..genus {
            let want = if k == l { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            normalization_residual = normalization_residual
                .max((holonomy(z, &basis.gamma_reps[l])? - want).norm())
                .max((holonomy(z, &basis.dual_reps[l])? - want).norm());
        }
    }
    Ok(HolomorphicBasis {
        zetas,
        coefficients,
        host,
        normalization_residual,
        condition,
    })
}

/// Mesh summary carried along with a result.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeshStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// Smallest triangle angle in degrees, when the surface came from a mesh.
    pub min_angle_deg: Option<f64>,
    pub min_rho: f64,
    pub max_rho: f64,
}

impl MeshStats {
    pub fn of(g: &WeightedSurfaceGraph) -> Self {
        let (min_rho, max_rho) = g.rho_range();
        Self {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            faces: g.face_count(),
            min_angle_deg: None,
            min_rho,
            max_rho,
        }
    }
}

/// Residuals of one period computation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residuals {
    /// Max co-closedness defect over all harmonic forms (both families).
    pub harmonic: f64,
    /// Max closedness defect over all `ζ` on `Γ` and `Γ*`.
    pub closedness: f64,
    /// Max a-period deviation from `δ_kℓ` (both bases, both graphs).
    pub normalization: f64,
    /// `‖Π − Πᵀ‖∞`.
    pub symmetry: f64,
    /// `‖Π − Π*‖∞`.
    pub pi_pi_star: f64,
    /// `‖Π_Γ − Π_Γ*‖∞`, the gap between the one-sided b-period readings.
    pub reading_gap: f64,
    /// Worst relative residual of the linear solves.
    pub solver: f64,
    /// `‖*ζ + iζ‖∞` over all `ζ`.
    pub type_defect: f64,
}

/// Period matrices with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodResult {
    pub genus: usize,
    pub pi: CMatrix,
    pub pi_star: CMatrix,
    /// b-periods of the `ζ_k` on the `Γ` representatives.
    pub pi_gamma: CMatrix,
    /// b-periods of the `ζ_k` on the `Γ*` representatives.
    pub pi_gamma_star: CMatrix,
    pub residuals: Residuals,
    /// Smallest eigenvalue of `Im Π`.
    pub positivity_margin: f64,
    /// Worst normalization condition number.
    pub condition: f64,
    pub scheme: WeightScheme,
    pub mesh: MeshStats,
}

impl PeriodResult {
    pub fn is_positive_definite(&self) -> bool {
        self.positivity_margin > 0.0
    }

    pub fn is_well_conditioned(&self) -> bool {
        self.condition <= CONDITION_LIMIT
    }

    /// `Π` is accepted only if `Im Π` is positive definite and the
    /// normalization was well conditioned.
    pub fn is_valid(&self) -> bool {
        self.is_positive_definite() && self.is_well_conditioned()
    }
}

fn b_periods(basis: &HomologyBasis, hb: &HolomorphicBasis, on: Host) -> Result<CMatrix> {
    let g = basis.genus;
    let mut pi = CMatrix::zeros(g, g);
    for (k, z) in hb.zetas.iter().enumerate() {
        for l in 0..g {
            let rep = match on {
                Host::Primal => &basis.gamma_reps[g + l],
                _ => &basis.dual_reps[g + l],
            };
            pi[(k, l)] = holonomy(z, rep)?;
        }
    }
    Ok(pi)
}

fn zeta_defects(g: &WeightedSurfaceGraph, hb: &HolomorphicBasis) -> (f64, f64) {
    let mut closed: f64 = 0.0;
    let mut ty: f64 = 0.0;
    for z in &hb.zetas {
        closed = closed.max(d1(g, z).max_abs());
        ty = ty.max(hodge_star(g, z).axpy(I, z).max_abs());
    }
    (closed, ty)
}

fn mean(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.add(b).map(|z| z * 0.5)
}

/// `Π` from the `primal` basis and `Π*` from the `dual` one.
pub fn period_matrix(
    g: &WeightedSurfaceGraph,
    basis: &HomologyBasis,
    primal: &HolomorphicBasis,
    dual: &HolomorphicBasis,
) -> Result<PeriodResult> {
    let pi_gamma = b_periods(basis, primal, Host::Primal)?;
    let pi_gamma_star = b_periods(basis, primal, Host::Dual)?;
    let pi = mean(&pi_gamma, &pi_gamma_star);
    let pi_star = mean(
        &b_periods(basis, dual, Host::Primal)?,
        &b_periods(basis, dual, Host::Dual)?,
    );
    let (c1, t1) = zeta_defects(g, primal);
    let (c2, t2) = zeta_defects(g, dual);
    let positivity_margin = min_symmetric_eigenvalue(&pi.im());
    Ok(PeriodResult {
        genus: basis.genus,
        residuals: Residuals {
            harmonic: 0.0,
            closedness: c1.max(c2),
            normalization: primal.normalization_residual.max(dual.normalization_residual),
            symmetry: pi.symmetry_defect(),
            pi_pi_star: pi.sub(&pi_star).max_abs(),
            reading_gap: pi_gamma.sub(&pi_gamma_star).max_abs(),
            solver: 0.0,
            type_defect: t1.max(t2),
        },
        positivity_margin,
        condition: primal.condition.max(dual.condition),
        scheme: g.scheme(),
        mesh: MeshStats::of(g),
        pi,
        pi_star,
        pi_gamma,
        pi_gamma_star,
    })
}

/// Validity summary of a period matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannReport {
    pub symmetry_defect: f64,
    /// Symmetry defect relative to `max |Π|`.
    pub relative_symmetry_defect: f64,
    pub positivity_margin: f64,
    pub pi_pi_star: f64,
}

impl RiemannReport {
    pub fn passes(&self, relative_tolerance: f64) -> bool {
        self.relative_symmetry_defect <= relative_tolerance && self.positivity_margin > 0.0
    }
}

pub fn riemann_check(result: &PeriodResult) -> RiemannReport {
    let scale = result.pi.max_abs().max(f64::MIN_POSITIVE);
    RiemannReport {
        symmetry_defect: result.residuals.symmetry,
        relative_symmetry_defect: result.residuals.symmetry / scale,
        positivity_margin: result.positivity_margin,
        pi_pi_star: result.residuals.pi_pi_star,
    }
}

/// Settings for [`compute_periods`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PeriodOptions {
    /// Primal vertex the homology basis is rooted at.
    pub root: usize,
    pub solver: SolverKind,
}

/// Everything produced along the way, for diagnostics.
#[derive(Debug, Clone)]
pub struct PeriodComputation {
    pub basis: HomologyBasis,
    pub forms: Vec<HarmonicForm>,
    pub dual_forms: Vec<HarmonicForm>,
    pub holomorphic: HolomorphicBasis,
    pub dual_holomorphic: HolomorphicBasis,
    pub result: PeriodResult,
}

/// Homology basis, harmonic forms on both graphs, holomorphic bases, `Π`, `Π*`.
pub fn compute_periods(g: &WeightedSurfaceGraph, options: PeriodOptions) -> Result<PeriodComputation> {
    if g.genus() == 0 {
        return Err(Error::GenusZero);
    }
    if options.root >= g.vertex_count() {
        return Err(Error::InvalidParameter(alloc::format!(
            "root {} out of range for {} vertices",
            options.root,
            g.vertex_count()
        )));
    }
    let basis = canonical_basis(g, options.root)?;
    let harmonic = HarmonicOptions {
        root_vertex: options.root,
        root_face: 0,
        solver: options.solver,
    };
    let forms = harmonic_family(g, &basis, Host::Primal, harmonic)?;
    let dual_forms = harmonic_family(g, &basis, Host::Dual, harmonic)?;
    let holomorphic = holomorphic_basis(g, &basis, &forms)?;
    let dual_holomorphic = holomorphic_basis(g, &basis, &dual_forms)?;
    let mut result = period_matrix(g, &basis, &holomorphic, &dual_holomorphic)?;
    for f in forms.iter().chain(&dual_forms) {
        result.residuals.harmonic = result.residuals.harmonic.max(f.residuals.max());
        result.residuals.solver = result.residuals.solver.max(f.residuals.solver);
    }
    Ok(PeriodComputation {
        basis,
        forms,
        dual_forms,
        holomorphic,
        dual_holomorphic,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::grid_torus;
    use crate::siegel::siegel_reduce;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_torus_has_modulus_i() {
        for n in [1, 2, 4, 7] {
            let g = grid_torus(n);
            let c = compute_periods(&g, PeriodOptions::default()).unwrap();
            let tau = siegel_reduce(&c.result.pi).unwrap().omega[(0, 0)];
            assert!((tau - I).norm() < 1e-10, "n={n}: {tau}");
            let tau_star = siegel_reduce(&c.result.pi_star).unwrap().omega[(0, 0)];
            assert!((tau_star - I).norm() < 1e-10);
            assert!(c.result.pi.sub(&c.result.pi_star).max_abs() < 1e-10);
            assert!(c.result.positivity_margin > 0.0);
            assert!(c.result.residuals.type_defect < 1e-13);
            assert!(c.holomorphic.normalization_residual < 1e-8);
        }
    }

    #[test]
    fn zeta_is_flat_coordinate_on_square_torus() {
        let n = 3;
        let g = grid_torus(n);
        let c = compute_periods(&g, PeriodOptions::default()).unwrap();
        let z = &c.holomorphic.zetas[0];
        // ζ = c·dz: |ζ| equal on every primal edge, rotated by i on its dual
        let m = z.primal[0].norm();
        for e in 0..g.edge_count() {
            assert!((z.primal[e].norm() - m).abs() < 1e-12);
            assert!((z.dual[e] - I * z.primal[e]).norm() < 1e-12);
        }
    }

    #[test]
    fn perturbed_weights_stay_symmetric() {
        let g = grid_torus(4);
        let base = compute_periods(&g, PeriodOptions::default()).unwrap().result;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let w: Vec<f64> = (0..g.edge_count()).map(|_| 1.0 + 0.01 * rng.gen_range(0.0..1.0)).collect();
        let g2 = g.with_weights(w).unwrap();
        let r = compute_periods(&g2, PeriodOptions::default()).unwrap().result;
        assert!(r.residuals.symmetry <= 1e-6);
        assert!(r.pi.sub(&base.pi).max_abs() > 1e-6);
        assert!(riemann_check(&r).passes(1e-6));
    }

    #[test]
    fn genus_zero_is_refused() {
        let g = crate::conformal::build_structure(
            &crate::mesh::tests::tetrahedron(),
            WeightScheme::Intrinsic,
        )
        .unwrap();
        assert!(matches!(compute_periods(&g, PeriodOptions::default()), Err(Error::GenusZero)));
    }
}
