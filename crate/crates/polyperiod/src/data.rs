//! Gluings shipped with the crate.
//!
//! Each file is already subdivided to the coarsest level of its convergence
//! study, so refinements 1, 2, 4, 8 give the vertex counts
//!
//! | name     | squares | vertices              |
//! |----------|---------|-----------------------|
//! | `omega1` | 27      | 25, 106, 430, 1726    |
//! | `omega2` | 16      | 14, 62, 254, 1022     |
//! | `omega3` | 24      | 22, 94, 382, 1534     |
//!
//! The period matrix of each surface is the reference matrix of the same
//! name in [`polyperiod_core::surfaces::reference_matrices`].

use polyperiod_core::surfaces::GluingSpec;

use crate::gluing::parse_gluing;

pub const OMEGA1_JSON: &str = include_str!("../data/omega1.json");
pub const OMEGA2_JSON: &str = include_str!("../data/omega2.json");
pub const OMEGA3_JSON: &str = include_str!("../data/omega3.json");

/// JSON Schema of the `compute` report.
pub const REPORT_SCHEMA: &str = include_str!("../data/report.schema.json");

pub const BUNDLED: [&str; 3] = ["omega1", "omega2", "omega3"];

pub fn bundled_json(name: &str) -> Option<&'static str> {
    match name {
        "omega1" => Some(OMEGA1_JSON),
        "omega2" => Some(OMEGA2_JSON),
        "omega3" => Some(OMEGA3_JSON),
        _ => None,
    }
}

pub fn bundled_gluing(name: &str) -> Option<GluingSpec> {
    bundled_json(name).map(|text| parse_gluing(text).expect("bundled gluings are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyperiod_core::surfaces::build_square_tiled;

    #[test]
    fn bundled_gluings_have_genus_two() {
        for name in BUNDLED {
            let spec = bundled_gluing(name).unwrap();
            let g = build_square_tiled(&spec, 1).unwrap();
            assert_eq!(g.genus(), 2, "{name}");
        }
        assert!(bundled_gluing("omega4").is_none());
        assert!(bundled_gluing("omega1").unwrap().is_translation_surface());
        assert!(!bundled_gluing("omega2").unwrap().is_translation_surface());
        assert!(!bundled_gluing("omega3").unwrap().is_translation_surface());
    }
}
