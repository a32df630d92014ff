use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// An edge rejected by the Delaunay test, with the weight that was computed for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelaunayEdge {
    pub edge: usize,
    pub endpoints: [usize; 2],
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A face repeats a vertex or has zero area.
    DegenerateFace { face: usize },
    /// A face references a vertex that does not exist.
    InvalidVertexIndex { face: usize, index: usize },
    /// An undirected edge is not shared by exactly two faces.
    NonManifoldEdge { endpoints: [usize; 2], faces: usize },
    /// A directed edge is used twice, so neighbouring faces disagree on orientation.
    InconsistentOrientation { endpoints: [usize; 2] },
    /// The corners around a vertex do not form a single fan.
    NonManifoldVertex { vertex: usize },
    /// A vertex that no face touches.
    IsolatedVertex { vertex: usize },
    Disconnected { components: usize },
    ZeroLengthEdge { endpoints: [usize; 2] },
    CollinearTriangle,
    DelaunayViolation(Vec<DelaunayEdge>),
    NonPositiveWeight { edge: usize, value: f64 },
    InvalidCells(String),
    InvalidGluing(String),
    InvalidParameter(String),
    LengthMismatch { expected: usize, found: usize },
    HostMismatch,
    GenusZero,
    GenusMismatch { left: usize, right: usize },
    DegenerateIntersection,
    SolverDidNotConverge { iterations: usize, residual: f64 },
    NotPositiveDefinite,
    SingularSystem { condition: f64 },
}

/// Violating edges listed in the message; the error keeps all of them.
const SHOWN_EDGES: usize = 8;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateFace { face } => write!(f, "degenerate face {face}"),
            Error::InvalidVertexIndex { face, index } => {
                write!(f, "face {face} references missing vertex {index}")
            }
            Error::NonManifoldEdge { endpoints, faces } => write!(
                f,
                "non-manifold edge ({}, {}) is shared by {faces} faces",
                endpoints[0], endpoints[1]
            ),
            Error::InconsistentOrientation { endpoints } => write!(
                f,
                "inconsistent orientation across edge ({}, {})",
                endpoints[0], endpoints[1]
            ),
            Error::NonManifoldVertex { vertex } => write!(f, "non-manifold vertex {vertex}"),
            Error::IsolatedVertex { vertex } => write!(f, "vertex {vertex} belongs to no face"),
            Error::Disconnected { components } => {
                write!(f, "surface is disconnected ({components} components)")
            }
            Error::ZeroLengthEdge { endpoints } => write!(
                f,
                "edge ({}, {}) has zero length",
                endpoints[0], endpoints[1]
            ),
            Error::CollinearTriangle => write!(f, "triangle vertices are collinear"),
            Error::DelaunayViolation(edges) => {
                write!(f, "{} edge(s) violate the Delaunay condition:", edges.len())?;
                for e in edges.iter().take(SHOWN_EDGES) {
                    write!(
                        f,
                        " [edge {} ({}, {}) rho={:.3e}]",
                        e.edge, e.endpoints[0], e.endpoints[1], e.rho
                    )?;
                }
                if edges.len() > SHOWN_EDGES {
                    write!(f, " and {} more", edges.len() - SHOWN_EDGES)?;
                }
                Ok(())
            }
            Error::NonPositiveWeight { edge, value } => {
                write!(f, "edge {edge} has non-positive weight {value}")
            }
            Error::InvalidCells(msg) => write!(f, "invalid cellular surface: {msg}"),
            Error::InvalidGluing(msg) => write!(f, "invalid gluing: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} values, found {found}")
            }
            Error::HostMismatch => write!(f, "cycle and form live on different graphs"),
            Error::GenusZero => write!(f, "surface has genus 0, there are no periods"),
            Error::GenusMismatch { left, right } => {
                write!(f, "genus mismatch: {left} vs {right}")
            }
            Error::DegenerateIntersection => {
                write!(f, "intersection matrix of the homology basis is not unimodular")
            }
            Error::SolverDidNotConverge {
                iterations,
                residual,
            } => write!(
                f,
                "linear solver stopped after {iterations} iterations at residual {residual:.3e}"
            ),
            Error::NotPositiveDefinite => write!(f, "imaginary part is not positive definite"),
            Error::SingularSystem { condition } => {
                write!(f, "normalization system is singular (condition {condition:.3e})")
            }
        }
    }
}

impl core::error::Error for Error {}
