use serde::{Deserialize, Serialize};

use super::parse::{ObjFace, ObjMesh};
use super::ObjError;
use crate::model::{PolyhedralModelFile, SimplexRecord};

/// Per-channel tolerance used when a rule does not set one.
pub const DEFAULT_TOLERANCE: u8 = 10;

fn default_tolerance() -> u8 {
    DEFAULT_TOLERANCE
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleScope {
    Vertex,
    /// Edges carry no color; only fallback atoms apply to them.
    Edge,
    Face,
}

/// Assigns `atoms` to cells of `scope` whose color is within `tolerance` of
/// `color` on every channel. A rule without a color never matches and only
/// contributes its fallback atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AtomMappingRule {
    pub scope: RuleScope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<[u8; 3]>,
    #[serde(default = "default_tolerance")]
    pub tolerance: u8,
    #[serde(default)]
    pub atoms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_atoms: Option<Vec<String>>,
}

impl AtomMappingRule {
    pub fn color(scope: RuleScope, color: [u8; 3], tolerance: u8, atoms: &[&str]) -> Self {
        AtomMappingRule {
            scope,
            color: Some(color),
            tolerance,
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            fallback_atoms: None,
        }
    }

    pub fn matches(&self, rgb: [u8; 3]) -> bool {
        self.color.is_some_and(|c| {
            c.iter()
                .zip(rgb)
                .all(|(&a, b)| a.abs_diff(b) <= self.tolerance)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ConvertConfig {
    #[serde(default = "default_scale")]
    pub object_scale: f64,
    /// Atom names of the output model, in this order.
    pub atom_names: Vec<String>,
    #[serde(default)]
    pub rules: Vec<AtomMappingRule>,
}

impl ConvertConfig {
    pub fn from_json(text: &str) -> Result<Self, ObjError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ConvertConfig = serde_path_to_error::deserialize(de).map_err(|e| ObjError::Config {
            message: format!("at {}: {}", e.path(), e.inner()),
        })?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Rejects rules that could emit an atom missing from `atom_names`, and
    /// colored edge rules.
    pub fn check(&self) -> Result<(), ObjError> {
        for (i, r) in self.rules.iter().enumerate() {
            if r.scope == RuleScope::Edge && r.color.is_some() {
                return Err(ObjError::Config {
                    message: format!("rule {i}: edges have no color to match"),
                });
            }
            let emitted = r.atoms.iter().chain(r.fallback_atoms.iter().flatten());
            for a in emitted {
                if !self.atom_names.contains(a) {
                    return Err(ObjError::UndeclaredAtom {
                        rule: i,
                        atom: a.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn atoms_for(&self, scope: RuleScope, rgb: Option<[u8; 3]>) -> Vec<String> {
        let mut rules = self.rules.iter().filter(|r| r.scope == scope);
        if let Some(rgb) = rgb {
            if let Some(r) = rules.clone().find(|r| r.matches(rgb)) {
                return r.atoms.clone();
            }
        }
        rules
            .find_map(|r| r.fallback_atoms.clone())
            .unwrap_or_default()
    }

    /// The rule table of the coral-branch conversion: white marks the root,
    /// twelve further colors mark branch tips, and four face colors mark
    /// regions of the mesh.
    pub fn coral_reference() -> Self {
        let mut atom_names: Vec<String> = ["hack1", "hack2", "hack3", "border", "root"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        atom_names.extend((0..13).map(|i| format!("b{i}")));
        let vertex: [([u8; 3], &[&str]); 13] = [
            ([255, 255, 255], &["root", "b0"]),
            ([100, 255, 255], &["b1"]),
            ([255, 100, 255], &["b2"]),
            ([255, 255, 100], &["b3"]),
            ([100, 100, 255], &["b4"]),
            ([100, 255, 100], &["b5"]),
            ([255, 100, 100], &["b6"]),
            ([50, 255, 255], &["b7"]),
            ([255, 50, 255], &["b8"]),
            ([255, 255, 50], &["b9"]),
            ([50, 50, 255], &["b10"]),
            ([50, 255, 50], &["b11"]),
            ([255, 50, 50], &["b12"]),
        ];
        let face: [([u8; 3], &[&str]); 4] = [
            ([12, 7, 133], &["hack1"]),
            ([107, 0, 167], &["hack2"]),
            ([179, 45, 140], &["hack3"]),
            ([100, 100, 100], &["border"]),
        ];
        let mut rules: Vec<AtomMappingRule> = vertex
            .iter()
            .map(|(c, a)| AtomMappingRule::color(RuleScope::Vertex, *c, DEFAULT_TOLERANCE, a))
            .collect();
        rules.extend(
            face.iter()
                .map(|(c, a)| AtomMappingRule::color(RuleScope::Face, *c, DEFAULT_TOLERANCE, a)),
        );
        ConvertConfig {
            object_scale: 50.0,
            atom_names,
            rules,
        }
    }
}

/// The sides of every face as sorted vertex pairs, without repeats, in order
/// of first occurrence.
pub fn derive_edges(faces: &[ObjFace]) -> Vec<[u32; 2]> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for f in faces {
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let (a, b) = (f.vertices[i], f.vertices[j]);
            let e = [a.min(b), a.max(b)];
            if seen.insert(e) {
                out.push(e);
            }
        }
    }
    out
}

/// Builds the model: points `P<i>`, then edges `E<i>`, then triangles
/// `T<i>`, with atoms from the first matching rule of the cell's scope.
pub fn convert(mesh: &ObjMesh, cfg: &ConvertConfig) -> Result<PolyhedralModelFile, ObjError> {
    cfg.check()?;
    let edges = derive_edges(&mesh.faces);
    let mut simplexes = Vec::with_capacity(mesh.vertices.len() + edges.len() + mesh.faces.len());
    for (i, v) in mesh.vertices.iter().enumerate() {
        simplexes.push(SimplexRecord::new(
            format!("P{i}"),
            vec![i as u32],
            cfg.atoms_for(RuleScope::Vertex, v.rgb),
        ));
    }
    for (i, e) in edges.iter().enumerate() {
        simplexes.push(SimplexRecord::new(
            format!("E{i}"),
            e.to_vec(),
            cfg.atoms_for(RuleScope::Edge, None),
        ));
    }
    for (i, f) in mesh.faces.iter().enumerate() {
        simplexes.push(SimplexRecord::new(
            format!("T{i}"),
            f.vertices.to_vec(),
            cfg.atoms_for(RuleScope::Face, Some(f.material_rgb)),
        ));
    }
    Ok(PolyhedralModelFile {
        atom_names: cfg.atom_names.clone(),
        number_of_points: mesh.vertices.len(),
        coordinates_of_points: mesh
            .vertices
            .iter()
            .map(|v| v.position.map(|x| x * cfg.object_scale))
            .collect(),
        simplexes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_complex;
    use crate::obj::{parse_mtl, parse_obj, ObjVertex};
    use proptest::prelude::*;

    fn face(v: [u32; 3]) -> ObjFace {
        ObjFace {
            vertices: v,
            material_rgb: [0, 0, 0],
        }
    }

    fn vertex(rgb: Option<[u8; 3]>) -> ObjVertex {
        ObjVertex {
            position: [0.0; 3],
            rgb,
        }
    }

    #[test]
    fn edges_of_one_and_two_faces() {
        assert_eq!(derive_edges(&[face([0, 1, 2])]), vec![[0, 1], [1, 2], [0, 2]]);
        let two = derive_edges(&[face([0, 1, 2]), face([2, 1, 3])]);
        assert_eq!(two, vec![[0, 1], [1, 2], [0, 2], [1, 3], [2, 3]]);
        assert!(derive_edges(&[]).is_empty());
    }

    #[test]
    fn curvature_margin() {
        let cfg = ConvertConfig {
            object_scale: 1.0,
            atom_names: vec!["concave".into()],
            rules: vec![AtomMappingRule::color(RuleScope::Vertex, [255, 0, 0], 30, &["concave"])],
        };
        let mesh = ObjMesh {
            vertices: vec![vertex(Some([250, 5, 20])), vertex(Some([200, 0, 0])), vertex(None)],
            faces: vec![],
        };
        let m = convert(&mesh, &cfg).unwrap();
        assert_eq!(m.simplexes[0].atoms, vec!["concave"]);
        assert!(m.simplexes[1].atoms.is_empty());
        assert!(m.simplexes[2].atoms.is_empty());
    }

    #[test]
    fn coral_table_white_is_root() {
        let cfg = ConvertConfig::coral_reference();
        let mesh = ObjMesh {
            vertices: vec![vertex(Some([255, 255, 255])), vertex(Some([100, 255, 255]))],
            faces: vec![],
        };
        let m = convert(&mesh, &cfg).unwrap();
        assert_eq!(m.simplexes[0].atoms, vec!["root", "b0"]);
        assert_eq!(m.simplexes[1].atoms, vec!["b1"]);
        assert_eq!(m.atom_names.len(), 18);
    }

    #[test]
    fn tolerance_zero_boundary() {
        let mut cfg = ConvertConfig {
            object_scale: 1.0,
            atom_names: vec!["hit".into(), "miss".into()],
            rules: vec![AtomMappingRule::color(RuleScope::Vertex, [10, 20, 30], 0, &["hit"])],
        };
        cfg.rules.push(AtomMappingRule {
            scope: RuleScope::Vertex,
            color: None,
            tolerance: 0,
            atoms: vec![],
            fallback_atoms: Some(vec!["miss".into()]),
        });
        let mesh = ObjMesh {
            vertices: vec![vertex(Some([10, 20, 30])), vertex(Some([10, 21, 30]))],
            faces: vec![],
        };
        let m = convert(&mesh, &cfg).unwrap();
        assert_eq!(m.simplexes[0].atoms, vec!["hit"]);
        assert_eq!(m.simplexes[1].atoms, vec!["miss"]);
    }

    #[test]
    fn undeclared_atom_is_rejected() {
        let cfg = ConvertConfig {
            object_scale: 1.0,
            atom_names: vec![],
            rules: vec![AtomMappingRule::color(RuleScope::Face, [0, 0, 0], 0, &["x"])],
        };
        assert!(matches!(
            convert(&ObjMesh::default(), &cfg),
            Err(ObjError::UndeclaredAtom { rule: 0, .. })
        ));
    }

    #[test]
    fn config_json_round_trip_and_defaults() {
        let cfg = ConvertConfig::from_json(
            r#"{"atomNames":["a","e"],"rules":[{"scope":"face","color":[1,2,3],"atoms":["a"]},{"scope":"edge","fallbackAtoms":["e"]}]}"#,
        )
        .unwrap();
        assert_eq!(cfg.object_scale, 1.0);
        assert_eq!(cfg.rules[0].tolerance, DEFAULT_TOLERANCE);
        assert_eq!(ConvertConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        let err = ConvertConfig::from_json(r#"{"atomNames":[],"rules":[{"scope":"edge","color":[0,0,0]}]}"#);
        assert!(matches!(err, Err(ObjError::Config { .. })));
        let err = ConvertConfig::from_json(r#"{"atomNames":[],"rules":[{"scope":"cell"}]}"#).unwrap_err();
        assert!(err.to_string().contains("rules[0]"), "{err}");
    }

    // Hand trace of the reference conversion on two triangles sharing an
    // edge, one material, scale 50.
    #[test]
    fn two_triangle_conformance() {
        let mtl = "newmtl border\nKd 0.392 0.392 0.392\n";
        let obj = "v 0 0 0 1 1 1\nv 1 0 0\nv 0 1 0\nv 1 1 0 0.392 1 1\nusemtl border\nf 1//1 2//1 3//1\nf 2//1 4//1 3//1\n";
        let lib = parse_mtl(mtl).unwrap();
        let m = convert(&parse_obj(obj, &lib).unwrap(), &ConvertConfig::coral_reference()).unwrap();
        let cells: Vec<(&str, &[u32], Vec<&str>)> = m
            .simplexes
            .iter()
            .map(|s| (s.id.as_str(), s.points.as_slice(), s.atoms.iter().map(String::as_str).collect()))
            .collect();
        let expected: Vec<(&str, &[u32], Vec<&str>)> = vec![
            ("P0", &[0], vec!["root", "b0"]),
            ("P1", &[1], vec![]),
            ("P2", &[2], vec![]),
            ("P3", &[3], vec!["b1"]),
            ("E0", &[0, 1], vec![]),
            ("E1", &[1, 2], vec![]),
            ("E2", &[0, 2], vec![]),
            ("E3", &[1, 3], vec![]),
            ("E4", &[2, 3], vec![]),
            ("T0", &[0, 1, 2], vec!["border"]),
            ("T1", &[1, 3, 2], vec!["border"]),
        ];
        assert_eq!(cells, expected);
        assert_eq!(m.coordinates_of_points[3], [50.0, 50.0, 0.0]);
        assert!(validate_complex(&m).is_empty());
    }

    proptest! {
        #[test]
        fn edge_count_matches_brute_force(raw in proptest::collection::vec((0u32..12, 0u32..12, 0u32..12), 0..100)) {
            let mut seen = std::collections::HashSet::new();
            let faces: Vec<ObjFace> = raw
                .into_iter()
                .filter(|(a, b, c)| a != b && b != c && a != c)
                .filter(|(a, b, c)| { let mut k = [*a, *b, *c]; k.sort(); seen.insert(k) })
                .map(|(a, b, c)| face([a, b, c]))
                .collect();
            let mut pairs = std::collections::BTreeSet::new();
            for f in &faces {
                for i in 0..3 {
                    for j in 0..3 {
                        if f.vertices[i] < f.vertices[j] {
                            pairs.insert((f.vertices[i], f.vertices[j]));
                        }
                    }
                }
            }
            prop_assert_eq!(derive_edges(&faces).len(), pairs.len());

            let mesh = ObjMesh { vertices: (0..12).map(|_| vertex(None)).collect(), faces };
            let cfg = ConvertConfig { object_scale: 1.0, atom_names: vec![], rules: vec![] };
            let m = convert(&mesh, &cfg).unwrap();
            prop_assert!(validate_complex(&m).is_empty());
            let again = convert(&mesh, &cfg).unwrap();
            prop_assert_eq!(crate::model::write_model(&m), crate::model::write_model(&again));
        }
    }
}
