use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ResultFile, ResultsError};
use crate::model::PolyhedralModelFile;

fn default_opacity() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Highlight {
    pub result: String,
    pub rgb: [u8; 3],
    #[serde(default = "default_opacity")]
    pub opacity: f64,
}

fn default_unsat_rgb() -> [u8; 3] {
    [190, 190, 190]
}

fn default_unsat_opacity() -> f64 {
    0.2
}

/// How results are rendered. Earlier highlights take priority where
/// results overlap; cells satisfying none get the faded default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ColorMap {
    pub highlights: Vec<Highlight>,
    #[serde(default = "default_unsat_rgb")]
    pub unsatisfied_rgb: [u8; 3],
    #[serde(default = "default_unsat_opacity")]
    pub unsatisfied_opacity: f64,
}

impl Default for ColorMap {
    fn default() -> Self {
        ColorMap {
            highlights: Vec::new(),
            unsatisfied_rgb: default_unsat_rgb(),
            unsatisfied_opacity: default_unsat_opacity(),
        }
    }
}

impl ColorMap {
    pub fn from_json(text: &str) -> Result<Self, ResultsError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let map: ColorMap = serde_path_to_error::deserialize(de)
            .map_err(|e| ResultsError::ColorMap(format!("at {}: {}", e.path(), e.inner())))?;
        map.check()?;
        Ok(map)
    }

    fn check(&self) -> Result<(), ResultsError> {
        let opacities = self
            .highlights
            .iter()
            .map(|h| h.opacity)
            .chain([self.unsatisfied_opacity]);
        for o in opacities {
            if !(0.0..=1.0).contains(&o) {
                return Err(ResultsError::ColorMap(format!("opacity {o} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredMesh {
    pub obj: String,
    pub mtl: String,
    pub warnings: Vec<String>,
}

pub const UNSATISFIED_MATERIAL: &str = "unsatisfied";

fn material_name(k: usize, result: &str) -> String {
    let clean: String = result
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("r{k}_{clean}")
}

fn unit(c: u8) -> String {
    format!("{:.6}", c as f64 / 255.0)
}

fn write_material(mtl: &mut String, name: &str, rgb: [u8; 3], opacity: f64) {
    let [r, g, b] = rgb.map(unit);
    let _ = writeln!(mtl, "newmtl {name}");
    let _ = writeln!(mtl, "Ka {r} {g} {b}");
    let _ = writeln!(mtl, "Kd {r} {g} {b}");
    let _ = writeln!(mtl, "Ks 0.000000 0.000000 0.000000");
    let _ = writeln!(mtl, "d {opacity:.6}");
    let _ = writeln!(mtl, "Tr {:.6}", 1.0 - opacity);
    let _ = writeln!(mtl, "illum 1");
    mtl.push('\n');
}

/// Writes the model's vertices and triangles as a colored mesh. `mtl_name`
/// is the file name the `.obj` refers to in its `mtllib` line.
pub fn export_colored_obj(
    model: &PolyhedralModelFile,
    results: &ResultFile,
    colors: &ColorMap,
    mtl_name: &str,
) -> Result<ColoredMesh, ResultsError> {
    colors.check()?;
    results.validate(model.simplexes.len())?;
    let layers: Vec<&Vec<bool>> = colors
        .highlights
        .iter()
        .map(|h| results.entry(&h.result).map(|e| &e.values))
        .collect::<Result<_, _>>()?;
    let first_hit = |cell: usize| layers.iter().position(|v| v[cell]);

    let mut vertex_rgb = vec![colors.unsatisfied_rgb; model.number_of_points];
    for (i, s) in model.simplexes.iter().enumerate() {
        if let [p] = s.points[..] {
            if let Some(k) = first_hit(i) {
                vertex_rgb[p as usize] = colors.highlights[k].rgb;
            }
        }
    }

    let mut groups: Vec<Vec<[u32; 3]>> = vec![Vec::new(); colors.highlights.len() + 1];
    for (i, s) in model.simplexes.iter().enumerate() {
        if let [a, b, c] = s.points[..] {
            let g = first_hit(i).unwrap_or(colors.highlights.len());
            groups[g].push([a, b, c]);
        }
    }

    let mut warnings = Vec::new();
    if groups.iter().all(Vec::is_empty) {
        warnings.push("the model has no triangles; only vertices were written".to_string());
    }

    let mut mtl = String::new();
    for (k, h) in colors.highlights.iter().enumerate() {
        write_material(&mut mtl, &material_name(k, &h.result), h.rgb, h.opacity);
    }
    write_material(&mut mtl, UNSATISFIED_MATERIAL, colors.unsatisfied_rgb, colors.unsatisfied_opacity);

    let mut obj = String::new();
    let _ = writeln!(obj, "mtllib {mtl_name}");
    for (p, rgb) in model.coordinates_of_points.iter().zip(&vertex_rgb) {
        let [r, g, b] = rgb.map(unit);
        let _ = writeln!(obj, "v {} {} {} {r} {g} {b}", p[0], p[1], p[2]);
    }
    for (g, faces) in groups.iter().enumerate() {
        if faces.is_empty() {
            continue;
        }
        let name = match colors.highlights.get(g) {
            Some(h) => material_name(g, &h.result),
            None => UNSATISFIED_MATERIAL.to_string(),
        };
        let _ = writeln!(obj, "usemtl {name}");
        for f in faces {
            let _ = writeln!(obj, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
    }
    Ok(ColoredMesh { obj, mtl, warnings })
}
