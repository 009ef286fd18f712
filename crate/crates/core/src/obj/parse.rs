use std::collections::BTreeMap;

use super::ObjError;

/// Colors of one material, as 8-bit triples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Material {
    pub ambient: Option<[u8; 3]>,
    pub diffuse: Option<[u8; 3]>,
    pub specular: Option<[u8; 3]>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MaterialLibrary {
    pub materials: BTreeMap<String, Material>,
}

impl MaterialLibrary {
    pub fn get(&self, name: &str) -> Option<&Material> {
        self.materials.get(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjVertex {
    pub position: [f64; 3],
    pub rgb: Option<[u8; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjFace {
    /// 0-based vertex indices in declaration order.
    pub vertices: [u32; 3],
    /// Diffuse color of the material active when the face was declared,
    /// black before any `usemtl`.
    pub material_rgb: [u8; 3],
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObjMesh {
    pub vertices: Vec<ObjVertex>,
    pub faces: Vec<ObjFace>,
}

/// Maps a color component in `[0, 1]` to `0..=255`, rounding ties to even.
pub fn float_color_to_8bit(value: f64) -> Option<u8> {
    let scaled = (value * 255.0).round_ties_even();
    (0.0..=255.0).contains(&scaled).then_some(scaled as u8)
}

fn number(line: usize, tok: Option<&str>) -> Result<f64, ObjError> {
    let tok = tok.ok_or_else(|| ObjError::Malformed {
        line,
        message: "missing number".into(),
    })?;
    tok.parse::<f64>().map_err(|_| ObjError::Malformed {
        line,
        message: format!("{tok:?} is not a number"),
    })
}

fn color<'a>(line: usize, toks: &mut impl Iterator<Item = &'a str>) -> Result<[u8; 3], ObjError> {
    let mut out = [0u8; 3];
    for c in &mut out {
        let v = number(line, toks.next())?;
        *c = float_color_to_8bit(v).ok_or_else(|| ObjError::Malformed {
            line,
            message: format!("color component {v} is outside [0, 1]"),
        })?;
    }
    Ok(out)
}

/// Reads `newmtl`, `Ka`, `Kd` and `Ks` statements; everything else is
/// ignored.
pub fn parse_mtl(text: &str) -> Result<MaterialLibrary, ObjError> {
    let mut lib = MaterialLibrary::default();
    let mut current: Option<(String, Material)> = None;
    let finish = |lib: &mut MaterialLibrary, cur: Option<(String, Material)>, line| {
        if let Some((name, m)) = cur {
            if lib.materials.insert(name.clone(), m).is_some() {
                return Err(ObjError::DuplicateMaterial { line, name });
            }
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(keyword) = toks.next() else { continue };
        match keyword {
            "newmtl" => {
                let name = toks.next().ok_or_else(|| ObjError::Malformed {
                    line,
                    message: "newmtl without a name".into(),
                })?;
                finish(&mut lib, current.take(), line)?;
                current = Some((name.to_string(), Material::default()));
            }
            "Ka" | "Kd" | "Ks" => {
                let Some((_, m)) = current.as_mut() else {
                    return Err(ObjError::Malformed {
                        line,
                        message: format!("{keyword} before any newmtl"),
                    });
                };
                let c = Some(color(line, &mut toks)?);
                match keyword {
                    "Ka" => m.ambient = c,
                    "Kd" => m.diffuse = c,
                    _ => m.specular = c,
                }
            }
            _ => {}
        }
    }
    let last = text.lines().count();
    finish(&mut lib, current, last)?;
    Ok(lib)
}

fn face_index(line: usize, tok: &str) -> Result<u32, ObjError> {
    let head = tok.split('/').next().unwrap_or("");
    match head.parse::<i64>() {
        Ok(i) if i >= 1 && i <= u32::MAX as i64 => Ok((i - 1) as u32),
        _ => Err(ObjError::Malformed {
            line,
            message: format!("bad face vertex {tok:?}"),
        }),
    }
}

/// Reads vertices (`v x y z` or `v x y z r g b`), triangular faces and
/// `usemtl` switches. Faces may reference vertices declared later.
pub fn parse_obj(text: &str, lib: &MaterialLibrary) -> Result<ObjMesh, ObjError> {
    let mut mesh = ObjMesh::default();
    let mut face_lines = Vec::new();
    let mut material = [0u8; 3];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first().copied() {
            Some("v") => {
                let mut it = toks[1..].iter().copied();
                let position = [
                    number(line, it.next())?,
                    number(line, it.next())?,
                    number(line, it.next())?,
                ];
                let rgb = if toks.len() == 7 {
                    Some(color(line, &mut it)?)
                } else {
                    None
                };
                mesh.vertices.push(ObjVertex { position, rgb });
            }
            Some("f") => {
                if toks.len() != 4 {
                    return Err(ObjError::NonTriangular {
                        line,
                        count: toks.len() - 1,
                    });
                }
                let vertices = [
                    face_index(line, toks[1])?,
                    face_index(line, toks[2])?,
                    face_index(line, toks[3])?,
                ];
                if vertices[0] == vertices[1] || vertices[1] == vertices[2] || vertices[0] == vertices[2] {
                    return Err(ObjError::DegenerateFace { line });
                }
                mesh.faces.push(ObjFace {
                    vertices,
                    material_rgb: material,
                });
                face_lines.push(line);
            }
            Some("usemtl") => {
                let name = toks.get(1).copied().unwrap_or("");
                let m = lib.get(name).ok_or_else(|| ObjError::UnknownMaterial {
                    line,
                    name: name.to_string(),
                })?;
                material = m.diffuse.ok_or_else(|| ObjError::MissingDiffuse {
                    line,
                    name: name.to_string(),
                })?;
            }
            _ => {}
        }
    }
    let n = mesh.vertices.len();
    for (face, &line) in mesh.faces.iter().zip(&face_lines) {
        if let Some(&v) = face.vertices.iter().find(|&&v| v as usize >= n) {
            return Err(ObjError::BadIndex {
                line,
                index: v as usize + 1,
                vertex_count: n,
            });
        }
    }
    let mut seen = std::collections::HashSet::new();
    for (face, &line) in mesh.faces.iter().zip(&face_lines) {
        let mut key = face.vertices;
        key.sort_unstable();
        if !seen.insert(key) {
            return Err(ObjError::DuplicateFace { line });
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diffuse_conversion_rounds_half_to_even() {
        let lib = parse_mtl("newmtl a\nKd 1.0 0.0 0.0\nnewmtl b\nKd 0 0 0\nnewmtl c\nKa 0.1 0.2 0.3\nKd 0.5 0.5 0.5\nKs 1 1 1\n").unwrap();
        assert_eq!(lib.get("a").unwrap().diffuse, Some([255, 0, 0]));
        assert_eq!(lib.get("b").unwrap().diffuse, Some([0, 0, 0]));
        let c = lib.get("c").unwrap();
        assert_eq!(c.diffuse, Some([128, 128, 128]));
        assert_eq!(c.ambient, Some([26, 51, 76]));
        assert_eq!(c.specular, Some([255, 255, 255]));
    }

    #[test]
    fn half_way_values() {
        // 0.5 * 255 = 127.5 rounds to the even 128; 2.5/255 * 255 = 2.5
        // rounds to 2 (assuming the product is exact, which it is here).
        assert_eq!(float_color_to_8bit(0.5), Some(128));
        assert_eq!(float_color_to_8bit(1.5 / 255.0), Some(2));
        assert_eq!(float_color_to_8bit(1.2), None);
        assert_eq!(float_color_to_8bit(-0.5), None);
    }

    #[test]
    fn malformed_numbers() {
        assert!(matches!(parse_mtl("newmtl a\nKd 1 x 0"), Err(ObjError::Malformed { line: 2, .. })));
        assert!(matches!(parse_mtl("newmtl a\nKd 1 0"), Err(ObjError::Malformed { line: 2, .. })));
        assert!(matches!(parse_mtl("newmtl a\nnewmtl a"), Err(ObjError::DuplicateMaterial { .. })));
    }

    #[test]
    fn faces_shift_to_zero_based() {
        let m = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1//1 2//1 3//1\n", &MaterialLibrary::default()).unwrap();
        assert_eq!(m.faces[0].vertices, [0, 1, 2]);
        assert_eq!(m.faces[0].material_rgb, [0, 0, 0]);
        assert_eq!(m.vertices[0].rgb, None);
    }

    #[test]
    fn seven_field_vertex_has_color() {
        let m = parse_obj("v 0 0 0 1.0 0 0", &MaterialLibrary::default()).unwrap();
        assert_eq!(m.vertices[0].rgb, Some([255, 0, 0]));
    }

    #[test]
    fn face_errors() {
        let lib = MaterialLibrary::default();
        let quad = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4";
        assert!(matches!(parse_obj(quad, &lib), Err(ObjError::NonTriangular { line: 5, count: 4 })));
        assert!(matches!(parse_obj("v 0 0 0\nf 1 2 3", &lib), Err(ObjError::BadIndex { index: 2, .. })));
        assert!(matches!(parse_obj("usemtl nope", &lib), Err(ObjError::UnknownMaterial { .. })));
        assert!(matches!(parse_obj("v 0 0 0\nv 1 0 0\nf 1 2 1", &lib), Err(ObjError::DegenerateFace { .. })));
        let twice = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nf 3 1 2";
        assert!(matches!(parse_obj(twice, &lib), Err(ObjError::DuplicateFace { line: 5 })));
    }

    #[test]
    fn active_material_is_tracked() {
        let lib = parse_mtl("newmtl red\nKd 1 0 0\nnewmtl grey\nKd 0.392 0.392 0.392").unwrap();
        let obj = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 3\nusemtl red\nf 2 4 3\nusemtl grey\n";
        let m = parse_obj(obj, &lib).unwrap();
        assert_eq!(m.faces[0].material_rgb, [0, 0, 0]);
        assert_eq!(m.faces[1].material_rgb, [255, 0, 0]);
        assert_eq!(lib.get("grey").unwrap().diffuse, Some([100, 100, 100]));
    }
}
