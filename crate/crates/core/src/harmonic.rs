//! Real harmonic 1-forms with prescribed periods.
//!
//! For a `Γ*` cycle `c*` the form `ω = df + h` on `Γ` uses the cut cochain
//! `h(e) = (signed number of times c* crosses e)`; then `∮_γ ω = γ ∘ c*` for
//! every closed `γ` on `Γ`, and `f` solves the Laplace equation with the jump
//! moved to the right-hand side. The same construction on `Γ*` with a `Γ`
//! cycle as the cut gives the dual family.

use alloc::vec;
use alloc::vec::Vec;

use crate::conformal::WeightedSurfaceGraph;
use crate::dec::{d1, hodge_star, Cochain1, Support};
use crate::homology::{Cycle, HomologyBasis, Host};
use crate::solver::{LaplaceSystem, SolverKind};
use crate::{Error, Result, C64};

/// Residuals recorded with every solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HarmonicResiduals {
    /// Max face sum of `ω` on its own graph.
    pub closedness: f64,
    /// Max face sum of `*ω` on the other graph (the jump-corrected Laplacian).
    pub coclosedness: f64,
    /// Relative residual reported by the linear solver.
    pub solver: f64,
}

impl HarmonicResiduals {
    pub fn max(&self) -> f64 {
        self.closedness.max(self.coclosedness)
    }
}

/// A real harmonic form on one graph together with its conjugate on the other.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicForm {
    /// Basis cycle whose representative served as the cut.
    pub source: usize,
    /// Graph carrying `ω` ([`Host::Primal`] or [`Host::Dual`]).
    pub host: Host,
    pub omega: Cochain1,
    pub star_omega: Cochain1,
    /// Jump-harmonic potential on the vertices of `host`, zero at the root.
    pub potential: Vec<f64>,
    pub residuals: HarmonicResiduals,
}

/// Solver settings shared by all solves on one structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HarmonicOptions {
    pub root_vertex: usize,
    pub root_face: usize,
    pub solver: SolverKind,
}

/// Laplace systems on `Γ` and `Γ*`, each factored once.
#[derive(Debug, Clone)]
pub struct HarmonicSolver {
    primal: LaplaceSystem,
    dual: LaplaceSystem,
}

fn primal_links(g: &WeightedSurfaceGraph) -> Vec<(usize, usize, f64)> {
    (0..g.edge_count()).map(|e| (g.tail(e), g.head(e), g.rho(e))).collect()
}

fn dual_links(g: &WeightedSurfaceGraph) -> Vec<(usize, usize, f64)> {
    (0..g.edge_count())
        .map(|e| (g.right_face(e), g.left_face(e), g.dual_rho(e)))
        .collect()
}

/// Cut cochain of a cycle: net signed traversals per edge index.
pub fn cut_cochain(g: &WeightedSurfaceGraph, cut: &Cycle) -> Vec<f64> {
    cut.edge_counts(g.edge_count()).iter().map(|&c| c as f64).collect()
}

impl HarmonicSolver {
    pub fn new(g: &WeightedSurfaceGraph, options: HarmonicOptions) -> Result<Self> {
        let primal = LaplaceSystem::new(g.vertex_count(), &primal_links(g), options.root_vertex, options.solver)?;
        let dual = LaplaceSystem::new(g.face_count(), &dual_links(g), options.root_face, options.solver)?;
        Ok(Self { primal, dual })
    }

    /// Harmonic form on `host` whose periods are intersection numbers with `cut`
    /// (a cycle on the other graph).
    pub fn solve_cut(&self, g: &WeightedSurfaceGraph, host: Host, cut: &Cycle, source: usize) -> Result<HarmonicForm> {
        let expected = match host {
            Host::Primal => Host::Dual,
            Host::Dual => Host::Primal,
            Host::Diamond => return Err(Error::HostMismatch),
        };
        if cut.host() != expected {
            return Err(Error::HostMismatch);
        }
        self.solve_jump(g, host, &cut_cochain(g, cut), source)
    }

    /// Harmonic form `df + h` on `host` for an arbitrary closed jump cochain `h`.
    pub fn solve_jump(&self, g: &WeightedSurfaceGraph, host: Host, jump: &[f64], source: usize) -> Result<HarmonicForm> {
        let (links, system, n) = match host {
            Host::Primal => (primal_links(g), &self.primal, g.vertex_count()),
            Host::Dual => (dual_links(g), &self.dual, g.face_count()),
            Host::Diamond => return Err(Error::HostMismatch),
        };
        let mut rhs = vec![0.0; n];
        for (e, &(t, h, w)) in links.iter().enumerate() {
            rhs[t] += w * jump[e];
            rhs[h] -= w * jump[e];
        }
        let (f, stats) = system.solve(&rhs)?;
        let values: Vec<f64> = links
            .iter()
            .enumerate()
            .map(|(e, &(t, h, _))| f[h] - f[t] + jump[e])
            .collect();
        let omega = match host {
            Host::Primal => Cochain1::from_primal_real(&values),
            _ => Cochain1::from_dual_real(&values),
        };
        let star_omega = hodge_star(g, &omega);
        let (closedness, coclosedness) = closedness_pair(g, &omega, &star_omega, host);
        Ok(HarmonicForm {
            source,
            host,
            omega,
            star_omega,
            potential: f,
            residuals: HarmonicResiduals {
                closedness,
                coclosedness,
                solver: stats.relative_residual,
            },
        })
    }
}

fn closedness_pair(g: &WeightedSurfaceGraph, omega: &Cochain1, star: &Cochain1, host: Host) -> (f64, f64) {
    let a = d1(g, omega);
    let b = d1(g, star);
    match host {
        Host::Primal => (a.max_abs_primal(), b.max_abs_dual()),
        _ => (a.max_abs_dual(), b.max_abs_primal()),
    }
}

/// `ω_k` on `Γ`, cut along the `Γ*` representative of the `k`-th basis cycle.
pub fn solve_harmonic(g: &WeightedSurfaceGraph, basis: &HomologyBasis, k: usize) -> Result<HarmonicForm> {
    let solver = HarmonicSolver::new(g, HarmonicOptions::default())?;
    solver.solve_cut(g, Host::Primal, &basis.dual_reps[k], k)
}

/// The dual family: `ω*_k` on `Γ*`, cut along the `Γ` representative.
pub fn solve_dual_harmonic(g: &WeightedSurfaceGraph, basis: &HomologyBasis, k: usize) -> Result<HarmonicForm> {
    let solver = HarmonicSolver::new(g, HarmonicOptions::default())?;
    solver.solve_cut(g, Host::Dual, &basis.gamma_reps[k], k)
}

/// All `2g` forms on `host`, reusing one factorisation.
pub fn harmonic_family(
    g: &WeightedSurfaceGraph,
    basis: &HomologyBasis,
    host: Host,
    options: HarmonicOptions,
) -> Result<Vec<HarmonicForm>> {
    let solver = HarmonicSolver::new(g, options)?;
    (0..basis.len())
        .map(|k| {
            let cut = match host {
                Host::Primal => &basis.dual_reps[k],
                _ => &basis.gamma_reps[k],
            };
            solver.solve_cut(g, host, cut, k)
        })
        .collect()
}

/// `*ω` on `Γ*` for a form on `Γ`: `ρ(e)·ω(e)` on each dual edge.
pub fn conjugate_form(g: &WeightedSurfaceGraph, omega: &Cochain1) -> Cochain1 {
    let mut out = Cochain1::zeros(g, Support::Dual);
    for e in 0..g.edge_count() {
        out.dual[e] = omega.primal[e] * g.rho(e);
    }
    out
}

/// Max of the closedness defect of `form` on `host` and of `*form` on the other graph.
pub fn verify_harmonic(g: &WeightedSurfaceGraph, form: &Cochain1, host: Host) -> Result<f64> {
    if host == Host::Diamond {
        return Err(Error::HostMismatch);
    }
    let star = hodge_star(g, form);
    let (a, b) = closedness_pair(g, form, &star, host);
    Ok(a.max(b))
}

/// `∮_c α`, reading the part of `α` on the cycle's graph.
pub fn holonomy(form: &Cochain1, cycle: &Cycle) -> Result<C64> {
    let values = match (cycle.host(), form.support()) {
        (Host::Primal, Support::Primal | Support::Full) => &form.primal,
        (Host::Dual, Support::Dual | Support::Full) => &form.dual,
        _ => return Err(Error::HostMismatch),
    };
    Ok(cycle
        .steps()
        .iter()
        .map(|s| values[s.edge] * (s.sign() as f64))
        .sum())
}

/// `P[j][ℓ] = ∮_{ℵ_ℓ} ω_j` over the representatives on the forms' own graph.
pub fn holonomy_matrix(basis: &HomologyBasis, forms: &[HarmonicForm]) -> Result<Vec<Vec<f64>>> {
    forms
        .iter()
        .map(|f| {
            let reps = match f.host {
                Host::Primal => &basis.gamma_reps,
                _ => &basis.dual_reps,
            };
            reps.iter().map(|c| holonomy(&f.omega, c).map(|z| z.re)).collect()
        })
        .collect()
}
