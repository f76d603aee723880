//! Triangle mesh of a crooked plane in R^3.

use std::fmt::Write;

use super::{CrookedError, CrookedHalfspace};
use crate::numcore::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// 0-based vertex indices.
    pub faces: Vec<[usize; 3]>,
}

/// Corners in basis coordinates, scaled by the bound `b`.
const CORNERS: [[i8; 3]; 13] = [
    [0, 0, 0],
    [1, 0, 0],
    [-1, 0, 0],
    [0, 0, 1],
    [0, 0, -1],
    [1, 0, 1],
    [-1, 0, -1],
    // wing x = 0, y <= 0
    [0, -1, 1],
    [0, -1, 0],
    [0, -1, -1],
    // wing z = 0, y >= 0
    [1, 1, 0],
    [0, 1, 0],
    [-1, 1, 0],
];

const FACES: [[usize; 3]; 12] = [
    // stem: the quadrants of the (e_1, e_3) plane with equal signs
    [0, 1, 5],
    [0, 5, 3],
    [0, 2, 6],
    [0, 6, 4],
    [0, 3, 7],
    [0, 7, 8],
    [0, 8, 9],
    [0, 9, 4],
    [0, 1, 10],
    [0, 10, 11],
    [0, 11, 12],
    [0, 12, 2],
];

/// Vertex permutation induced by `(x, y, z) -> (z, -y, x)` in basis
/// coordinates, which exchanges `E` and its opposite basis and fixes the
/// crooked plane.
pub const STEM_INVOLUTION: [usize; 13] = [0, 3, 4, 1, 2, 5, 6, 10, 11, 12, 7, 8, 9];

/// The crooked plane of `h` (two wings and the stem) clipped to the box of
/// half-width `bound` in the coordinates of its basis.
pub fn mesh_emit<T: Scalar>(h: &CrookedHalfspace<T>, bound: f64) -> Result<Mesh, CrookedError> {
    if h.dim() != 3 {
        return Err(CrookedError::Unsupported(format!(
            "meshes exist only in dimension 3 (n = 1), not {}",
            h.dim()
        )));
    }
    if !(bound > 0.0) {
        return Err(CrookedError::Invalid(format!("bound must be positive, got {bound}")));
    }
    let vertices = CORNERS
        .iter()
        .map(|c| {
            let coords: Vec<T> = c.iter().map(|&k| T::from_f64(f64::from(k) * bound)).collect();
            let p = h.point(&coords);
            [p[0].to_f64(), p[1].to_f64(), p[2].to_f64()]
        })
        .collect();
    Ok(Mesh {
        vertices,
        faces: FACES.to_vec(),
    })
}

impl Mesh {
    /// ASCII OBJ: vertices, then 1-based faces.
    pub fn to_obj(&self) -> String {
        let mut s = String::from("# crooked plane\n");
        for v in &self.vertices {
            writeln!(s, "v {:.12} {:.12} {:.12}", v[0], v[1], v[2]).expect("write to string");
        }
        for f in &self.faces {
            writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).expect("write to string");
        }
        s
    }

    /// Each undirected edge with its number of incident faces.
    pub fn edge_counts(&self) -> std::collections::BTreeMap<(usize, usize), usize> {
        let mut out = std::collections::BTreeMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *out.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        out
    }
}
