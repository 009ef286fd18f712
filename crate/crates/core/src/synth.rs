//! Small hand-built fixtures and synthetic model generators used by tests,
//! benchmarks and the CLI examples.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::lang::{FormulaArena, FormulaId};
use crate::model::{PolyhedralModelFile, SimplexRecord, VertexSet};

fn atoms(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// The six-vertex model of two red triangles, one green and one gray
/// triangle. Cells are named by their vertices (`"A"`, `"CD"`, `"CDE"`) and
/// listed points first, then segments, then triangles.
pub fn sample_model() -> PolyhedralModelFile {
    let letters = ['A', 'B', 'C', 'D', 'E', 'F'];
    let coords = [
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [1.0, 0.0, 0.0],
        [2.0, 1.0, 0.0],
        [2.0, 0.0, 0.0],
    ];
    let cells: [(&str, &str); 19] = [
        ("A", "gray"),
        ("B", "red"),
        ("C", "red"),
        ("D", "gray"),
        ("E", "gray"),
        ("F", "gray"),
        ("AB", "red"),
        ("BD", "red"),
        ("BC", "red"),
        ("AC", "red"),
        ("CD", "red"),
        ("DF", "gray"),
        ("DE", "gray"),
        ("CE", "gray"),
        ("EF", "gray"),
        ("BCD", "red"),
        ("ABC", "red"),
        ("DEF", "gray"),
        ("CDE", "green"),
    ];
    let simplexes = cells
        .iter()
        .map(|(name, atom)| {
            let points = name
                .chars()
                .map(|c| letters.iter().position(|l| *l == c).unwrap() as u32)
                .collect();
            SimplexRecord::new(*name, points, atoms(&[atom]))
        })
        .collect();
    PolyhedralModelFile {
        atom_names: atoms(&["red", "green", "gray"]),
        number_of_points: 6,
        coordinates_of_points: coords.to_vec(),
        simplexes,
    }
}

pub fn single_point(atom: &str) -> PolyhedralModelFile {
    PolyhedralModelFile {
        atom_names: atoms(&[atom]),
        number_of_points: 1,
        coordinates_of_points: vec![[0.0; 3]],
        simplexes: vec![SimplexRecord::new("P0", vec![0], atoms(&[atom]))],
    }
}

/// Closes the given top simplexes under faces; cells are ordered by
/// dimension, then by first appearance.
pub fn complex_from_tops(
    coordinates: Vec<[f64; 3]>,
    tops: &[Vec<u32>],
) -> PolyhedralModelFile {
    let mut by_dim: Vec<Vec<VertexSet>> = vec![Vec::new(); 4];
    let mut seen = std::collections::HashSet::new();
    for top in tops {
        let key = VertexSet::new(top);
        for face in std::iter::once(key).chain(key.proper_faces()) {
            if seen.insert(face) {
                by_dim[face.dimension()].push(face);
            }
        }
    }
    let prefix = ['P', 'E', 'T', 'H'];
    let mut simplexes = Vec::new();
    for (d, cells) in by_dim.iter_mut().enumerate() {
        cells.sort();
        for (i, c) in cells.iter().enumerate() {
            simplexes.push(SimplexRecord::new(
                format!("{}{i}", prefix[d]),
                c.as_slice().to_vec(),
                Vec::new(),
            ));
        }
    }
    PolyhedralModelFile {
        atom_names: Vec::new(),
        number_of_points: coordinates.len(),
        coordinates_of_points: coordinates,
        simplexes,
    }
}

pub fn single_triangle() -> PolyhedralModelFile {
    complex_from_tops(
        vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        &[vec![0, 1, 2]],
    )
}

pub fn single_tetrahedron() -> PolyhedralModelFile {
    complex_from_tops(
        vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ],
        &[vec![0, 1, 2, 3]],
    )
}

/// A random simplicial complex with at most `max_cells` cells in shuffled
/// order. Each cell carries each atom independently with probability
/// `density`.
pub fn random_complex<R: Rng>(
    rng: &mut R,
    max_cells: usize,
    atom_names: &[&str],
    density: f64,
) -> PolyhedralModelFile {
    let vertex_count = rng.gen_range(1..=7u32);
    let mut tops: Vec<Vec<u32>> = Vec::new();
    let mut cells = std::collections::HashSet::new();
    for _ in 0..rng.gen_range(1..=8) {
        let size = rng.gen_range(1..=4.min(vertex_count as usize));
        let mut all: Vec<u32> = (0..vertex_count).collect();
        all.shuffle(rng);
        let top = all[..size].to_vec();
        let key = VertexSet::new(&top);
        let mut grown = cells.clone();
        grown.insert(key);
        grown.extend(key.proper_faces());
        if grown.len() <= max_cells {
            cells = grown;
            tops.push(top);
        }
    }
    if tops.is_empty() {
        tops.push(vec![0]);
    }
    let coords = (0..vertex_count)
        .map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()])
        .collect();
    let mut model = complex_from_tops(coords, &tops);
    model.atom_names = atoms(atom_names);
    for s in &mut model.simplexes {
        s.atoms = atom_names
            .iter()
            .filter(|_| rng.gen_bool(density))
            .map(|a| a.to_string())
            .collect();
    }
    model.simplexes.shuffle(rng);
    model
}

/// Reorders the simplex records: record `i` of the result is record
/// `order[i]` of the input.
pub fn permute_cells(model: &PolyhedralModelFile, order: &[usize]) -> PolyhedralModelFile {
    let mut out = model.clone();
    out.simplexes = order.iter().map(|&i| model.simplexes[i].clone()).collect();
    out
}

/// Atoms used by [`maze_model`].
pub const MAZE_ATOMS: [&str; 6] = ["G", "W", "B", "R", "corridor", "wall"];

/// A cube of `rooms^3` rooms, each `room_size` unit cubes wide, tetrahedralised
/// with the Freudenthal (Kuhn) split of every unit cube into six tetrahedra.
///
/// Outer rooms are green, the central room red, the rest white or black in a
/// fixed pseudo-random pattern. A shell of half a unit around each room is
/// wall, except for a square door in the middle of each side, which is
/// corridor.
pub fn maze_model(rooms: usize, room_size: usize) -> PolyhedralModelFile {
    let n = rooms * room_size;
    let side = n + 1;
    let vid = |x: usize, y: usize, z: usize| (x + side * (y + side * z)) as u32;

    let mut coordinates = Vec::with_capacity(side * side * side);
    for z in 0..side {
        for y in 0..side {
            for x in 0..side {
                coordinates.push([x as f64, y as f64, z as f64]);
            }
        }
    }

    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for z in 0..n {
        for y in 0..n {
            for x in 0..n {
                for perm in PERMS {
                    let mut p = [x, y, z];
                    let mut tet = vec![vid(p[0], p[1], p[2])];
                    for axis in perm {
                        p[axis] += 1;
                        tet.push(vid(p[0], p[1], p[2]));
                    }
                    tets.push(tet);
                }
            }
        }
    }

    let mut model = complex_from_tops_fast(coordinates, &tets);
    model.atom_names = atoms(&MAZE_ATOMS);

    let centre = rooms / 2;
    let colour = |r: [usize; 3]| -> &'static str {
        if r.iter().any(|&c| c == 0 || c == rooms - 1) {
            "G"
        } else if r == [centre; 3] {
            "R"
        } else {
            let h = (r[0] * 73 + r[1] * 151 + r[2] * 283) % 7;
            if h < 5 {
                "W"
            } else {
                "B"
            }
        }
    };
    let rs = room_size as f64;
    let half_door = (room_size as f64 / 4.0).max(0.75);
    for s in &mut model.simplexes {
        let mut c = [0.0; 3];
        for &p in &s.points {
            let q = model.coordinates_of_points[p as usize];
            for k in 0..3 {
                c[k] += q[k] / s.points.len() as f64;
            }
        }
        let room = c.map(|v| ((v / rs).floor() as usize).min(rooms - 1));
        let local: Vec<f64> = (0..3).map(|k| c[k] - room[k] as f64 * rs).collect();
        let in_shell: Vec<bool> = local.iter().map(|&l| l < 0.5 || l > rs - 0.5).collect();
        let shell_axes = in_shell.iter().filter(|b| **b).count();
        let atom = if shell_axes == 0 {
            colour(room)
        } else {
            let at_outer = (0..3).any(|k| in_shell[k] && (c[k] < 0.5 || c[k] > n as f64 - 0.5));
            let in_door = (0..3)
                .filter(|&k| !in_shell[k])
                .all(|k| (local[k] - rs / 2.0).abs() < half_door);
            if shell_axes == 1 && in_door && !at_outer {
                "corridor"
            } else {
                "wall"
            }
        };
        s.atoms = vec![atom.to_string()];
    }
    model
}

/// Face closure for large inputs: same ordering as [`complex_from_tops`]
/// except that cells within a dimension keep first-appearance order.
fn complex_from_tops_fast(coordinates: Vec<[f64; 3]>, tops: &[Vec<u32>]) -> PolyhedralModelFile {
    let mut by_dim: Vec<Vec<VertexSet>> = vec![Vec::new(); 4];
    let mut seen: HashMap<VertexSet, ()> = HashMap::with_capacity(tops.len() * 5);
    for top in tops {
        let key = VertexSet::new(top);
        for face in std::iter::once(key).chain(key.proper_faces()) {
            if seen.insert(face, ()).is_none() {
                by_dim[face.dimension()].push(face);
            }
        }
    }
    let prefix = ['P', 'E', 'T', 'H'];
    let mut simplexes = Vec::with_capacity(seen.len());
    for (d, cells) in by_dim.iter().enumerate() {
        for (i, c) in cells.iter().enumerate() {
            simplexes.push(SimplexRecord::new(
                format!("{}{i}", prefix[d]),
                c.as_slice().to_vec(),
                Vec::new(),
            ));
        }
    }
    PolyhedralModelFile {
        atom_names: Vec::new(),
        number_of_points: coordinates.len(),
        coordinates_of_points: coordinates,
        simplexes,
    }
}

/// A random formula over `atom_names` of nesting depth at most `depth`,
/// built in `arena`. Every operator of the core language can appear.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    arena: &mut FormulaArena,
    atom_names: &[&str],
    depth: usize,
) -> FormulaId {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..8) {
            0 => arena.top(),
            1 => arena.bottom(),
            _ => arena.atom(atom_names.choose(rng).expect("at least one atom")),
        };
    }
    let sub = |rng: &mut R, arena: &mut FormulaArena| random_formula(rng, arena, atom_names, depth - 1);
    match rng.gen_range(0..7) {
        0 => {
            let a = sub(rng, arena);
            arena.not(a)
        }
        1 => {
            let (a, b) = (sub(rng, arena), sub(rng, arena));
            arena.and(a, b)
        }
        2 => {
            let (a, b) = (sub(rng, arena), sub(rng, arena));
            arena.or(a, b)
        }
        3 => {
            let (a, b) = (sub(rng, arena), sub(rng, arena));
            arena.xor(a, b)
        }
        4 => {
            let a = sub(rng, arena);
            arena.cv_near(a)
        }
        _ => {
            let (a, b) = (sub(rng, arena), sub(rng, arena));
            arena.gamma(a, b)
        }
    }
}

/// Vertex colours marking the selected vertices of the coral-like mesh.
pub const CORAL_ROOT_RGB: [u8; 3] = [255, 255, 255];
pub const CORAL_B1_RGB: [u8; 3] = [100, 255, 255];
pub const CORAL_B2_RGB: [u8; 3] = [255, 100, 255];
/// Diffuse colour of the border material.
pub const CORAL_BORDER_RGB: [u8; 3] = [100, 100, 100];

/// A flat triangulated sheet shaped like a root region with two sibling
/// branches on top, as Wavefront `.obj` and `.mtl` text.
///
/// Faces in row 4 and, above it, in column 6 use the `border` material, so
/// the border is a T that separates the root (rows 0..4) from the left branch
/// (columns 0..6) and the right branch (columns 7..). One vertex inside each
/// region is coloured to mark it as selected.
pub fn coral_obj() -> (String, String) {
    let (w, h) = (13usize, 10usize);
    let mut obj = String::from("# synthetic coral-like sheet\nmtllib coral.mtl\n");
    let marked: HashMap<(usize, usize), [u8; 3]> = [
        ((2, 1), CORAL_ROOT_RGB),
        ((2, 8), CORAL_B1_RGB),
        ((10, 8), CORAL_B2_RGB),
    ]
    .into_iter()
    .collect();
    for y in 0..=h {
        for x in 0..=w {
            let rgb = marked.get(&(x, y)).copied().unwrap_or([128, 128, 128]);
            let f = rgb.map(|c| c as f64 / 255.0);
            writeln!(
                obj,
                "v {x}.0 {y}.0 0.0 {:.6} {:.6} {:.6}",
                f[0], f[1], f[2]
            )
            .unwrap();
        }
    }
    let vid = |x: usize, y: usize| x + (w + 1) * y + 1;
    let mut current = "";
    for y in 0..h {
        for x in 0..w {
            let material = if y == 4 || (y > 4 && x == 6) {
                "border"
            } else {
                "skin"
            };
            if material != current {
                writeln!(obj, "usemtl {material}").unwrap();
                current = material;
            }
            let (a, b, c, d) = (vid(x, y), vid(x + 1, y), vid(x + 1, y + 1), vid(x, y + 1));
            writeln!(obj, "f {a}//1 {b}//1 {c}//1").unwrap();
            writeln!(obj, "f {a}//1 {c}//1 {d}//1").unwrap();
        }
    }
    let b = CORAL_BORDER_RGB.map(|c| c as f64 / 255.0);
    let mtl = format!(
        "newmtl skin\nKa 0 0 0\nKd 0.8 0.6 0.4\nKs 0 0 0\n\
         newmtl border\nKa 0 0 0\nKd {:.6} {:.6} {:.6}\nKs 0 0 0\n",
        b[0], b[1], b[2]
    );
    (obj, mtl)
}
