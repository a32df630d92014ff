mod common;

use polyperiod_core::conformal::{mesh_weights, WeightScheme};
use polyperiod_core::mesh::{EmbeddedMesh, Point3};
use proptest::prelude::*;

/// Rotation from a (not necessarily unit) quaternion.
fn rotation(q: [f64; 4]) -> [[f64; 3]; 3] {
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|c| c / n);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn moved(mesh: &EmbeddedMesh, r: [[f64; 3]; 3], t: Point3, s: f64) -> EmbeddedMesh {
    mesh.map_positions(|p| {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = s * (r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2]) + t[i];
        }
        out
    })
    .unwrap()
}

fn quaternion() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0f64..1.0).prop_filter("nonzero", |q| q.iter().map(|x| x * x).sum::<f64>() > 1e-2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rigid_motions_preserve_lengths_and_weights(
        q in quaternion(),
        t in prop::array::uniform3(-10.0f64..10.0),
    ) {
        for mesh in [common::revolution_torus(), common::octahedron()] {
            let image = moved(&mesh, rotation(q), t, 1.0);
            let before = mesh.edge_lengths().unwrap();
            let after = image.edge_lengths().unwrap();
            for ((e, a), (f, b)) in before.iter().zip(&after) {
                prop_assert_eq!(e, f);
                prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
            }
            for scheme in [WeightScheme::Intrinsic, WeightScheme::Extrinsic] {
                let a = mesh_weights(&mesh, scheme).unwrap();
                let b = mesh_weights(&image, scheme).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn weights_are_scale_invariant(s in 0.01f64..100.0) {
        let mesh = common::revolution_torus();
        let image = moved(&mesh, rotation([1.0, 0.0, 0.0, 0.0]), [0.0; 3], s);
        for scheme in [WeightScheme::Intrinsic, WeightScheme::Extrinsic] {
            let a = mesh_weights(&mesh, scheme).unwrap();
            let b = mesh_weights(&image, scheme).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }
    }
}
