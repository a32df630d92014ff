//! Discrete exterior calculus on the double graph `Λ` and the quad-graph `◊`.
//!
//! Functions live on `Λ₀ = Γ₀ ⊔ Γ*₀`, 1-forms on `Λ₁ = Γ₁ ⊔ Γ*₁` (one value
//! per reference orientation), 2-forms on the quads `◊₂`, one per edge.
//! Every value is complex; real forms just have zero imaginary parts.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::conformal::WeightedSurfaceGraph;
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Which half of `Λ` a cochain is supported on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Support {
    Primal,
    Dual,
    Full,
}

impl Support {
    fn union(self, other: Support) -> Support {
        if self == other {
            self
        } else {
            Support::Full
        }
    }

    fn swapped(self) -> Support {
        match self {
            Support::Primal => Support::Dual,
            Support::Dual => Support::Primal,
            Support::Full => Support::Full,
        }
    }
}

/// A function on `Λ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain0 {
    /// Values on `Γ₀`.
    pub primal: Vec<C64>,
    /// Values on `Γ*₀ = Γ₂`.
    pub dual: Vec<C64>,
}

impl Cochain0 {
    pub fn zeros(g: &WeightedSurfaceGraph) -> Self {
        Self {
            primal: vec![C64::new(0.0, 0.0); g.vertex_count()],
            dual: vec![C64::new(0.0, 0.0); g.face_count()],
        }
    }

    pub fn constant(g: &WeightedSurfaceGraph, c: C64) -> Self {
        Self {
            primal: vec![c; g.vertex_count()],
            dual: vec![c; g.face_count()],
        }
    }

    /// Values listed as `Γ₀` followed by `Γ*₀`.
    pub fn from_concatenated(g: &WeightedSurfaceGraph, values: &[C64]) -> crate::Result<Self> {
        let nv = g.vertex_count();
        if values.len() != g.diamond_vertex_count() {
            return Err(crate::Error::LengthMismatch {
                expected: g.diamond_vertex_count(),
                found: values.len(),
            });
        }
        Ok(Self {
            primal: values[..nv].to_vec(),
            dual: values[nv..].to_vec(),
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            primal: self.primal.iter().map(|z| z.conj()).collect(),
            dual: self.dual.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            primal: self.primal.iter().map(|&z| f(z)).collect(),
            dual: self.dual.iter().map(|&z| f(z)).collect(),
        }
    }
}

/// A 1-form on `Λ₁`, stored on reference orientations: `∫_{−e} α = −∫_e α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain1 {
    /// `∫_e α` for `e ∈ Γ₁`.
    pub primal: Vec<C64>,
    /// `∫_{e*} α` for `e* ∈ Γ*₁`, indexed by the primal edge.
    pub dual: Vec<C64>,
    support: Support,
}

impl Cochain1 {
    pub fn zeros(g: &WeightedSurfaceGraph, support: Support) -> Self {
        let ne = g.edge_count();
        Self {
            primal: vec![C64::new(0.0, 0.0); ne],
            dual: vec![C64::new(0.0, 0.0); ne],
            support,
        }
    }

    pub fn new(primal: Vec<C64>, dual: Vec<C64>, support: Support) -> Self {
        assert_eq!(primal.len(), dual.len(), "primal and dual parts differ in length");
        Self {
            primal,
            dual,
            support,
        }
    }

    /// Real form on `Γ` only.
    pub fn from_primal_real(values: &[f64]) -> Self {
        Self {
            primal: values.iter().map(|&x| C64::new(x, 0.0)).collect(),
            dual: vec![C64::new(0.0, 0.0); values.len()],
            support: Support::Primal,
        }
    }

    /// Real form on `Γ*` only.
    pub fn from_dual_real(values: &[f64]) -> Self {
        Self {
            primal: vec![C64::new(0.0, 0.0); values.len()],
            dual: values.iter().map(|&x| C64::new(x, 0.0)).collect(),
            support: Support::Dual,
        }
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn len(&self) -> usize {
        self.primal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primal.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self {
            primal: self.primal.iter().map(|z| z.conj()).collect(),
            dual: self.dual.iter().map(|z| z.conj()).collect(),
            support: self.support,
        }
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            primal: self.primal.iter().map(|&z| z * s).collect(),
            dual: self.dual.iter().map(|&z| z * s).collect(),
            support: self.support,
        }
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: C64, other: &Cochain1) -> Self {
        Self {
            primal: self.primal.iter().zip(&other.primal).map(|(&a, &b)| a + s * b).collect(),
            dual: self.dual.iter().zip(&other.dual).map(|(&a, &b)| a + s * b).collect(),
            support: self.support.union(other.support),
        }
    }

    /// Largest absolute value over all of `Λ₁`.
    pub fn max_abs(&self) -> f64 {
        self.primal
            .iter()
            .chain(&self.dual)
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest absolute entrywise difference.
    pub fn max_diff(&self, other: &Cochain1) -> f64 {
        self.primal
            .iter()
            .zip(&other.primal)
            .chain(self.dual.iter().zip(&other.dual))
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

impl Add for &Cochain1 {
    type Output = Cochain1;
    fn add(self, rhs: &Cochain1) -> Cochain1 {
        self.axpy(C64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &Cochain1 {
    type Output = Cochain1;
    fn sub(self, rhs: &Cochain1) -> Cochain1 {
        self.axpy(C64::new(-1.0, 0.0), rhs)
    }
}

impl Neg for &Cochain1 {
    type Output = Cochain1;
    fn neg(self) -> Cochain1 {
        self.scaled(C64::new(-1.0, 0.0))
    }
}

impl Mul<C64> for &Cochain1 {
    type Output = Cochain1;
    fn mul(self, rhs: C64) -> Cochain1 {
        self.scaled(rhs)
    }
}

/// A 2-form: one value per quad `(x, y, x', y')`, indexed by its primal edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain2 {
    pub values: Vec<C64>,
}

impl Cochain2 {
    /// `∬_◊ ·`
    pub fn integral(&self) -> C64 {
        self.values.iter().sum()
    }
}

/// Oriented boundary sums of a 1-form: per face of `Γ` and per face of `Γ*`
/// (the latter indexed by the primal vertex it surrounds).
#[derive(Debug, Clone, PartialEq)]
pub struct FaceSums {
    pub primal: Vec<C64>,
    pub dual: Vec<C64>,
}

impl FaceSums {
    pub fn max_abs(&self) -> f64 {
        self.primal.iter().chain(&self.dual).fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_primal(&self) -> f64 {
        self.primal.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_dual(&self) -> f64 {
        self.dual.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Exterior derivative of a function: `(df)(x, x') = f(x') − f(x)` on both graphs.
pub fn d0(g: &WeightedSurfaceGraph, f: &Cochain0) -> Cochain1 {
    let ne = g.edge_count();
    let mut primal = Vec::with_capacity(ne);
    let mut dual = Vec::with_capacity(ne);
    for e in 0..ne {
        primal.push(f.primal[g.head(e)] - f.primal[g.tail(e)]);
        dual.push(f.dual[g.left_face(e)] - f.dual[g.right_face(e)]);
    }
    Cochain1 {
        primal,
        dual,
        support: Support::Full,
    }
}

/// Boundary sums of `α` around every face of `Γ` and of `Γ*`. `α` is closed
/// exactly when all of them vanish.
pub fn d1(g: &WeightedSurfaceGraph, alpha: &Cochain1) -> FaceSums {
    let primal = (0..g.face_count())
        .map(|f| {
            g.face_half_edges(f)
                .map(|h| {
                    let d = g.dart(h);
                    alpha.primal[d.edge] * d.sign()
                })
                .sum()
        })
        .collect();
    // the dual face around x crosses outgoing edges along e* and incoming ones against it
    let mut dual = vec![C64::new(0.0, 0.0); g.vertex_count()];
    for e in 0..g.edge_count() {
        dual[g.tail(e)] += alpha.dual[e];
        dual[g.head(e)] -= alpha.dual[e];
    }
    FaceSums { primal, dual }
}

/// Hodge star: `∫_{e*} *α = ρ(e) ∫_e α` and, since `e** = −e`,
/// `∫_e *α = −ρ(e)⁻¹ ∫_{e*} α`. Squares to `−Id`.
pub fn hodge_star(g: &WeightedSurfaceGraph, alpha: &Cochain1) -> Cochain1 {
    let ne = g.edge_count();
    let mut primal = Vec::with_capacity(ne);
    let mut dual = Vec::with_capacity(ne);
    for e in 0..ne {
        dual.push(alpha.primal[e] * g.rho(e));
        primal.push(-alpha.dual[e] * g.dual_rho(e));
    }
    Cochain1 {
        primal,
        dual,
        support: alpha.support.swapped(),
    }
}

/// Wedge product on `Λ`-forms: `½(α(e)β(e*) − α(e*)β(e))` on each quad.
pub fn wedge(g: &WeightedSurfaceGraph, alpha: &Cochain1, beta: &Cochain1) -> Cochain2 {
    let values = (0..g.edge_count())
        .map(|e| 0.5 * (alpha.primal[e] * beta.dual[e] - alpha.dual[e] * beta.primal[e]))
        .collect();
    Cochain2 { values }
}

/// Hermitian product `(α, β) = ½ Σ_{Λ₁} ρ ∫α ∫β̄`.
pub fn inner_product(g: &WeightedSurfaceGraph, alpha: &Cochain1, beta: &Cochain1) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for e in 0..g.edge_count() {
        acc += alpha.primal[e] * beta.primal[e].conj() * g.rho(e);
        acc += alpha.dual[e] * beta.dual[e].conj() * g.dual_rho(e);
    }
    acc * 0.5
}

/// `‖α‖² = (α, α)`.
pub fn norm_sqr(g: &WeightedSurfaceGraph, alpha: &Cochain1) -> f64 {
    inner_product(g, alpha, alpha).re
}

/// `(Δf)(x) = Σ_{x'∼x} ρ(x, x')(f(x) − f(x'))` on each graph separately,
/// with the dual weights `1/ρ` on `Γ*`.
pub fn laplacian(g: &WeightedSurfaceGraph, f: &Cochain0) -> Cochain0 {
    let mut out = Cochain0::zeros(g);
    for e in 0..g.edge_count() {
        let (t, h) = (g.tail(e), g.head(e));
        let flow = (f.primal[t] - f.primal[h]) * g.rho(e);
        out.primal[t] += flow;
        out.primal[h] -= flow;
        let (r, l) = (g.right_face(e), g.left_face(e));
        let flow = (f.dual[r] - f.dual[l]) * g.dual_rho(e);
        out.dual[r] += flow;
        out.dual[l] -= flow;
    }
    out
}

/// Type of a 1-form: `(1,0)` means `*α = −iα`, `(0,1)` means `*α = iα`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormType {
    Holomorphic,
    AntiHolomorphic,
}

/// `π₁₀ = ½(Id + i*)` and `π₀₁ = ½(Id − i*)`.
pub fn type_projection(g: &WeightedSurfaceGraph, alpha: &Cochain1, ty: FormType) -> Cochain1 {
    let star = hodge_star(g, alpha);
    let s = match ty {
        FormType::Holomorphic => I,
        FormType::AntiHolomorphic => -I,
    };
    alpha.axpy(s, &star).scaled(C64::new(0.5, 0.0))
}

/// Dirichlet energy of a 1-form, `‖α‖²`.
pub fn form_dirichlet_energy(g: &WeightedSurfaceGraph, alpha: &Cochain1) -> f64 {
    norm_sqr(g, alpha)
}

/// Conformal energy of a 1-form, `½‖α − i*α‖²`.
pub fn form_conformal_energy(g: &WeightedSurfaceGraph, alpha: &Cochain1) -> f64 {
    let star = hodge_star(g, alpha);
    0.5 * norm_sqr(g, &alpha.axpy(-I, &star))
}

/// Area `(i/2) ∬ α ∧ ᾱ` of a 1-form.
pub fn form_area(g: &WeightedSurfaceGraph, alpha: &Cochain1) -> f64 {
    (I * 0.5 * wedge(g, alpha, &alpha.conj()).integral()).re
}

/// `E_D(f) = ½ Σ_{Λ₁} ρ |f(x') − f(x)|²`.
pub fn dirichlet_energy(g: &WeightedSurfaceGraph, f: &Cochain0) -> f64 {
    form_dirichlet_energy(g, &d0(g, f))
}

/// `E_D(f|Γ)`: the usual weighted Dirichlet energy on the primal graph.
pub fn primal_dirichlet_energy(g: &WeightedSurfaceGraph, f: &Cochain0) -> f64 {
    (0..g.edge_count())
        .map(|e| g.rho(e) * (f.primal[g.head(e)] - f.primal[g.tail(e)]).norm_sqr())
        .sum()
}

/// `E_D(f|Γ*)`: the usual weighted Dirichlet energy on the dual graph.
pub fn dual_dirichlet_energy(g: &WeightedSurfaceGraph, f: &Cochain0) -> f64 {
    (0..g.edge_count())
        .map(|e| g.dual_rho(e) * (f.dual[g.left_face(e)] - f.dual[g.right_face(e)]).norm_sqr())
        .sum()
}

/// `E_C(f) = ½‖df − i*df‖²`; vanishes exactly on holomorphic functions.
pub fn conformal_energy(g: &WeightedSurfaceGraph, f: &Cochain0) -> f64 {
    form_conformal_energy(g, &d0(g, f))
}

/// Signed area of the image of `f`, `𝒜(f) = (i/2) ∬ df ∧ d̄f`.
pub fn area(g: &WeightedSurfaceGraph, f: &Cochain0) -> f64 {
    form_area(g, &d0(g, f))
}

/// The three energies of a form together with the residual of
/// `E_C = E_D − 2𝒜`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub dirichlet: f64,
    pub conformal: f64,
    pub area: f64,
    pub identity_residual: f64,
}

pub fn form_energy_report(g: &WeightedSurfaceGraph, alpha: &Cochain1) -> EnergyReport {
    let dirichlet = form_dirichlet_energy(g, alpha);
    let conformal = form_conformal_energy(g, alpha);
    let area = form_area(g, alpha);
    EnergyReport {
        dirichlet,
        conformal,
        area,
        identity_residual: conformal - (dirichlet - 2.0 * area),
    }
}

pub fn energy_report(g: &WeightedSurfaceGraph, f: &Cochain0) -> EnergyReport {
    form_energy_report(g, &d0(g, f))
}
