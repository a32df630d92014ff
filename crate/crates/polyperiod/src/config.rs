//! Run configuration and input loading.

use std::path::PathBuf;
use std::str::FromStr;

use polyperiod_core::conformal::{build_structure, WeightScheme, WeightedSurfaceGraph};
use polyperiod_core::mesh::EmbeddedMesh;
use polyperiod_core::surfaces::{build_square_tiled, flat_torus, GluingSpec};
use polyperiod_core::C64;

use crate::data::{bundled_gluing, BUNDLED};
use crate::error::CliError;
use crate::gluing::load_gluing;
use crate::obj::load_obj;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Json,
    #[default]
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            _ => Err(format!("unknown output format `{s}` (expected json or text)")),
        }
    }
}

pub fn parse_scheme(s: &str) -> Result<WeightScheme, String> {
    match s {
        "intrinsic" => Ok(WeightScheme::Intrinsic),
        "extrinsic" => Ok(WeightScheme::Extrinsic),
        "unit" => Ok(WeightScheme::Unit),
        _ => Err(format!("unknown weight scheme `{s}` (expected intrinsic, extrinsic or unit)")),
    }
}

/// Built-in surfaces selected with `--generate NAME[:ARGS]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `flat-torus:NxM[:RE,IM]`, an `n × m` grid on the lattice spanned by
    /// 1 and `tau` (default `i`).
    FlatTorus { n: usize, m: usize, tau: C64 },
    /// `square-torus`, one square with opposite sides glued.
    SquareTorus,
    /// `omega1`, `omega2`, `omega3`.
    Bundled(String),
    /// `torus:N,M,R,r`, a triangulated torus of revolution in `R³`.
    Revolution { n: usize, m: usize, big: f64, small: f64 },
}

impl Generator {
    pub fn is_embedded(&self) -> bool {
        matches!(self, Generator::Revolution { .. })
    }
}

fn number<T: FromStr>(s: &str, what: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("invalid {what} `{s}`"))
}

impl FromStr for Generator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        match (name, args) {
            ("flat-torus", Some(args)) => {
                let (size, tau) = match args.split_once(':') {
                    Some((size, tau)) => (size, Some(tau)),
                    None => (args, None),
                };
                let (n, m) = size
                    .split_once('x')
                    .ok_or_else(|| format!("flat-torus expects NxM, got `{size}`"))?;
                let tau = match tau {
                    None => C64::new(0.0, 1.0),
                    Some(t) => {
                        let (re, im) = t
                            .split_once(',')
                            .ok_or_else(|| format!("tau expects RE,IM, got `{t}`"))?;
                        C64::new(number(re, "real part")?, number(im, "imaginary part")?)
                    }
                };
                Ok(Generator::FlatTorus {
                    n: number(n, "grid size")?,
                    m: number(m, "grid size")?,
                    tau,
                })
            }
            ("square-torus", None) => Ok(Generator::SquareTorus),
            (b, None) if BUNDLED.contains(&b) => Ok(Generator::Bundled(b.to_string())),
            ("torus", Some(args)) => {
                let parts: Vec<&str> = args.split(',').collect();
                let [n, m, big, small] = parts[..] else {
                    return Err(format!("torus expects N,M,R,r, got `{args}`"));
                };
                Ok(Generator::Revolution {
                    n: number(n, "ring count")?,
                    m: number(m, "tube count")?,
                    big: number(big, "radius")?,
                    small: number(small, "radius")?,
                })
            }
            _ => Err(format!(
                "unknown generator `{s}` (expected flat-torus:NxM[:RE,IM], square-torus, \
                 omega1, omega2, omega3 or torus:N,M,R,r)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Mesh(PathBuf),
    Spec(PathBuf),
    Generate(Generator),
}

impl InputSource {
    /// Whether the input is an embedded mesh, so that weights come from
    /// geometry rather than being fixed.
    pub fn is_embedded(&self) -> bool {
        match self {
            InputSource::Mesh(_) => true,
            InputSource::Spec(_) => false,
            InputSource::Generate(g) => g.is_embedded(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InputSource::Mesh(_) => "mesh",
            InputSource::Spec(_) => "spec",
            InputSource::Generate(_) => "generator",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: InputSource,
    /// `None` picks intrinsic for meshes and unit for abstract surfaces.
    pub scheme: Option<WeightScheme>,
    pub refine: usize,
    pub root: Option<usize>,
    pub out: OutputFormat,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn new(input: InputSource) -> Self {
        Self {
            input,
            scheme: None,
            refine: 1,
            root: None,
            out: OutputFormat::default(),
            tol: None,
        }
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme.unwrap_or(if self.input.is_embedded() {
            WeightScheme::Intrinsic
        } else {
            WeightScheme::Unit
        })
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.refine == 0 {
            return Err(CliError::Usage("--refine must be at least 1".into()));
        }
        if self.input.is_embedded() && self.refine != 1 {
            return Err(CliError::Usage("--refine applies to gluings and flat tori only".into()));
        }
        if !self.input.is_embedded() && self.scheme() != WeightScheme::Unit {
            return Err(CliError::Usage(format!(
                "abstract surfaces carry their own weights; scheme `{}` needs a mesh",
                self.scheme().as_str()
            )));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage("--tol must be positive".into()));
            }
        }
        Ok(())
    }

    /// Reads or generates the input surface.
    pub fn load(&self) -> Result<Loaded, CliError> {
        self.check()?;
        let (label, surface) = match &self.input {
            InputSource::Mesh(path) => (path.display().to_string(), Surface::Mesh(load_obj(path)?)),
            InputSource::Spec(path) => (path.display().to_string(), Surface::Gluing(load_gluing(path)?)),
            InputSource::Generate(g) => {
                let label = match g {
                    Generator::FlatTorus { n, m, tau } => format!("flat-torus:{n}x{m}:{},{}", tau.re, tau.im),
                    Generator::SquareTorus => "square-torus".into(),
                    Generator::Bundled(name) => name.clone(),
                    Generator::Revolution { n, m, big, small } => format!("torus:{n},{m},{big},{small}"),
                };
                let surface = match g {
                    Generator::FlatTorus { n, m, tau } => Surface::FlatTorus {
                        n: *n,
                        m: *m,
                        tau: *tau,
                    },
                    Generator::SquareTorus => Surface::Gluing(GluingSpec::square_torus()),
                    Generator::Bundled(name) => Surface::Gluing(bundled_gluing(name).expect("checked by the parser")),
                    Generator::Revolution { n, m, big, small } => {
                        Surface::Mesh(EmbeddedMesh::torus_of_revolution(*n, *m, *big, *small)?.with_name(label.clone()))
                    }
                };
                (label, surface)
            }
        };
        Ok(Loaded { label, surface })
    }
}

#[derive(Debug, Clone)]
pub enum Surface {
    Mesh(EmbeddedMesh),
    Gluing(GluingSpec),
    FlatTorus { n: usize, m: usize, tau: C64 },
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub label: String,
    pub surface: Surface,
}

impl Loaded {
    /// Weighted graph under `scheme`; abstract surfaces are refined `refine` times.
    pub fn graph(&self, scheme: WeightScheme, refine: usize) -> Result<WeightedSurfaceGraph, CliError> {
        Ok(match &self.surface {
            Surface::Mesh(mesh) => build_structure(mesh, scheme)?,
            Surface::Gluing(spec) => build_square_tiled(spec, refine)?,
            Surface::FlatTorus { n, m, tau } => flat_torus(n * refine, m * refine, *tau)?,
        })
    }

    pub fn mesh(&self) -> Option<&EmbeddedMesh> {
        match &self.surface {
            Surface::Mesh(m) => Some(m),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_names() {
        assert_eq!(
            "flat-torus:4x6".parse::<Generator>().unwrap(),
            Generator::FlatTorus {
                n: 4,
                m: 6,
                tau: C64::new(0.0, 1.0)
            }
        );
        assert_eq!(
            "flat-torus:3x3:0.5,0.75".parse::<Generator>().unwrap(),
            Generator::FlatTorus {
                n: 3,
                m: 3,
                tau: C64::new(0.5, 0.75)
            }
        );
        assert_eq!("omega2".parse::<Generator>().unwrap(), Generator::Bundled("omega2".into()));
        assert_eq!(
            "torus:12,8,2,0.5".parse::<Generator>().unwrap(),
            Generator::Revolution {
                n: 12,
                m: 8,
                big: 2.0,
                small: 0.5
            }
        );
        for bad in ["flat-torus", "flat-torus:4", "flat-torus:4x4:1", "omega4", "torus:1,2", "omega1:3"] {
            assert!(bad.parse::<Generator>().is_err(), "{bad}");
        }
    }

    #[test]
    fn config_invariants() {
        let abstract_input = RunConfig::new(InputSource::Generate(Generator::SquareTorus));
        assert_eq!(abstract_input.scheme(), WeightScheme::Unit);
        assert!(abstract_input.check().is_ok());
        let wrong = RunConfig {
            scheme: Some(WeightScheme::Intrinsic),
            ..abstract_input.clone()
        };
        assert!(wrong.check().is_err());
        let zero = RunConfig {
            refine: 0,
            ..abstract_input
        };
        assert!(zero.check().is_err());

        let mesh = RunConfig::new(InputSource::Mesh("x.obj".into()));
        assert_eq!(mesh.scheme(), WeightScheme::Intrinsic);
        let refined = RunConfig { refine: 2, ..mesh };
        assert!(refined.check().is_err());
    }
}
