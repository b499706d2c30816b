//! Incremental 3-D convex hull of a boundary cloud.

use serde::Serialize;

use super::{embed, BoundaryCloud};
use crate::error::{Error, Result};

type P3 = [f64; 3];

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: P3) -> f64 {
    dot(a, a).sqrt()
}

/// Triangle mesh of a convex hull. Faces are counter-clockwise seen from
/// outside; `source` maps each vertex to its index in the input points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mesh {
    pub vertices: Vec<P3>,
    pub faces: Vec<[usize; 3]>,
    pub source: Vec<usize>,
}

impl Mesh {
    pub fn volume(&self) -> f64 {
        let n = self.vertices.len() as f64;
        let mut c = [0.0; 3];
        for v in &self.vertices {
            for k in 0..3 {
                c[k] += v[k] / n;
            }
        }
        self.faces
            .iter()
            .map(|f| {
                let [a, b, d] = f.map(|i| sub(self.vertices[i], c));
                dot(a, cross(b, d)) / 6.0
            })
            .sum()
    }

    /// Wavefront OBJ text (1-based face indices).
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            s.push_str(&format!("v {:.12} {:.12} {:.12}\n", v[0], v[1], v[2]));
        }
        for f in &self.faces {
            s.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
        }
        s
    }
}

struct Face {
    v: [usize; 3],
    normal: P3,
    offset: f64,
}

impl Face {
    fn new(pts: &[P3], v: [usize; 3]) -> Face {
        let n = cross(sub(pts[v[1]], pts[v[0]]), sub(pts[v[2]], pts[v[0]]));
        let l = norm(n);
        let normal = [n[0] / l, n[1] / l, n[2] / l];
        Face { v, normal, offset: dot(normal, pts[v[0]]) }
    }

    fn distance(&self, p: P3) -> f64 {
        dot(self.normal, p) - self.offset
    }
}

/// Convex hull of arbitrary points in R³. Points within `eps` of the current
/// hull (scaled by the cloud diameter) are treated as inside.
pub fn convex_hull(pts: &[P3]) -> Result<Mesh> {
    if pts.len() < 4 {
        return Err(Error::DegenerateCloud(format!("{} points, need at least 4", pts.len())));
    }
    let scale = pts.iter().map(|p| norm(sub(*p, pts[0]))).fold(0.0, f64::max);
    let eps = 1e-12 * scale.max(1.0);

    // Initial tetrahedron from extreme points.
    let i0 = 0;
    let i1 = (0..pts.len())
        .max_by(|&a, &b| norm(sub(pts[a], pts[i0])).total_cmp(&norm(sub(pts[b], pts[i0]))))
        .unwrap();
    let line = sub(pts[i1], pts[i0]);
    let i2 = (0..pts.len())
        .max_by(|&a, &b| {
            let da = norm(cross(line, sub(pts[a], pts[i0])));
            let db = norm(cross(line, sub(pts[b], pts[i0])));
            da.total_cmp(&db)
        })
        .unwrap();
    let plane = cross(line, sub(pts[i2], pts[i0]));
    if norm(plane) <= eps * scale {
        return Err(Error::DegenerateCloud("all points are collinear".into()));
    }
    let i3 = (0..pts.len())
        .max_by(|&a, &b| dot(plane, sub(pts[a], pts[i0])).abs().total_cmp(&dot(plane, sub(pts[b], pts[i0])).abs()))
        .unwrap();
    if dot(plane, sub(pts[i3], pts[i0])).abs() / norm(plane) <= eps {
        return Err(Error::DegenerateCloud("all points are coplanar".into()));
    }

    let mut faces: Vec<Face> = Vec::new();
    let centroid = {
        let mut c = [0.0; 3];
        for i in [i0, i1, i2, i3] {
            for k in 0..3 {
                c[k] += pts[i][k] / 4.0;
            }
        }
        c
    };
    for tri in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        let mut f = Face::new(pts, tri);
        if f.distance(centroid) > 0.0 {
            f = Face::new(pts, [tri[0], tri[2], tri[1]]);
        }
        faces.push(f);
    }

    for (pi, &p) in pts.iter().enumerate() {
        if [i0, i1, i2, i3].contains(&pi) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| f.distance(p) > eps).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
            let [a, b, c] = f.v;
            edges.extend([(a, b), (b, c), (c, a)]);
        }
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .filter(|(a, b)| !edges.contains(&(*b, *a)))
            .copied()
            .collect();
        let mut kept: Vec<Face> = faces.into_iter().zip(visible).filter(|(_, v)| !v).map(|(f, _)| f).collect();
        for (a, b) in horizon {
            kept.push(Face::new(pts, [a, b, pi]));
        }
        faces = kept;
    }

    // Reindex to the vertices actually used.
    let mut map = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::new();
    let mut source = Vec::new();
    let mut out_faces = Vec::with_capacity(faces.len());
    for f in &faces {
        let mut t = [0; 3];
        for (k, &i) in f.v.iter().enumerate() {
            if map[i] == usize::MAX {
                map[i] = vertices.len();
                vertices.push(pts[i]);
                source.push(i);
            }
            t[k] = map[i];
        }
        out_faces.push(t);
    }
    Ok(Mesh { vertices, faces: out_faces, source })
}

/// Hull of the cloud midpoints embedded in the simplex's 3-plane.
pub fn convex_hull_export(cloud: &BoundaryCloud) -> Result<Mesh> {
    let pts: Vec<P3> = cloud.points.iter().map(|b| embed(&b.point)).collect();
    convex_hull(&pts)
}
