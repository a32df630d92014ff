#![allow(dead_code)]

use polyperiod_core::conformal::{build_structure, WeightScheme, WeightedSurfaceGraph};
use polyperiod_core::mesh::EmbeddedMesh;
use polyperiod_core::surfaces::{build_square_tiled, flat_torus, GlueKind, GluingSpec, Identification, Side};
use polyperiod_core::C64;

fn spec(squares: usize, pairs: &[(usize, Side, usize, Side, GlueKind)]) -> GluingSpec {
    let spec = GluingSpec {
        squares,
        identifications: pairs
            .iter()
            .map(|&(a, sa, b, sb, k)| Identification::new((a, sa), (b, sb), k))
            .collect(),
    };
    spec.validate().unwrap();
    spec
}

/// Three squares in an L, genus two, all translations.
pub fn l_shape() -> GluingSpec {
    use GlueKind::Translation as T;
    use Side::*;
    spec(
        3,
        &[
            (0, E, 2, W, T),
            (0, N, 1, S, T),
            (1, E, 1, W, T),
            (1, N, 0, S, T),
            (2, E, 0, W, T),
            (2, N, 2, S, T),
        ],
    )
}

/// Four squares with two half-turn gluings, genus two.
pub fn half_turn_surface() -> GluingSpec {
    use GlueKind::{HalfTurn as H, Translation as T};
    use Side::*;
    spec(
        4,
        &[
            (0, N, 2, S, T),
            (0, S, 2, N, T),
            (1, N, 3, S, T),
            (1, S, 3, N, T),
            (2, E, 3, W, T),
            (2, W, 3, E, T),
            (0, E, 1, E, H),
            (0, W, 1, W, H),
        ],
    )
}

pub fn octahedron() -> EmbeddedMesh {
    let v = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let f = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    EmbeddedMesh::new(v, f).unwrap()
}

pub fn revolution_torus() -> EmbeddedMesh {
    EmbeddedMesh::torus_of_revolution(24, 10, 3.0, 1.0).unwrap()
}

/// Named weighted graphs covering flat, embedded, square-tiled and genus-zero inputs.
pub fn test_surfaces() -> Vec<(&'static str, WeightedSurfaceGraph)> {
    vec![
        ("flat torus 4x4", flat_torus(4, 4, C64::new(0.0, 1.0)).unwrap()),
        ("slanted torus", flat_torus(5, 3, C64::new(0.3, 0.9)).unwrap()),
        ("torus of revolution", build_structure(&revolution_torus(), WeightScheme::Intrinsic).unwrap()),
        ("L-shape", build_square_tiled(&l_shape(), 2).unwrap()),
        ("half-turn surface", build_square_tiled(&half_turn_surface(), 2).unwrap()),
        ("octahedron", build_structure(&octahedron(), WeightScheme::Intrinsic).unwrap()),
    ]
}
