//! Reference tesseract topology, multilinear element maps, entity charts and
//! entity quadrature.
//!
//! Orientation convention: every entity is parametrized by its free axes in
//! increasing order, so edge tangents are `+e_axis` (pointing from the
//! lexicographically smaller vertex to the larger one) and face frames are
//! `(e_a, e_b)` with `a < b`. Facet normals point out of the cell.

use std::sync::OnceLock;

use nalgebra::{Matrix4, Vector4};

use crate::tensorpoly::{gauss_legendre, TensorPoly4};
use crate::{Error, Result};

/// Vertices `v1..v16` of the reference tesseract, in the documented order.
pub const REFERENCE_VERTICES: [[f64; 4]; 16] = [
    [-1.0, -1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0, -1.0],
    [1.0, 1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0, -1.0],
    [-1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, 1.0, 1.0, -1.0],
    [-1.0, 1.0, 1.0, -1.0],
    [-1.0, -1.0, -1.0, 1.0],
    [1.0, -1.0, -1.0, 1.0],
    [1.0, 1.0, -1.0, 1.0],
    [-1.0, 1.0, -1.0, 1.0],
    [-1.0, -1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0, 1.0],
    [-1.0, 1.0, 1.0, 1.0],
];

/// A vertex, edge, face or facet of the reference tesseract, described by the
/// axes it leaves free and the coordinates it freezes.
#[derive(Clone, Debug, PartialEq)]
pub struct EntityChart {
    pub dim: usize,
    pub index: usize,
    /// Free axes in increasing order.
    pub free: Vec<usize>,
    /// Frozen `(axis, value)` pairs, value `+-1`, axes increasing.
    pub frozen: Vec<(usize, f64)>,
    /// Indices into [`REFERENCE_VERTICES`].
    pub vertices: Vec<usize>,
}

impl EntityChart {
    /// Embeds reference coordinates `t` of `C^dim` into `C^4`.
    pub fn embed(&self, t: &[f64]) -> [f64; 4] {
        let mut x = [0.0; 4];
        for (a, &axis) in self.free.iter().enumerate() {
            x[axis] = t[a];
        }
        for &(axis, v) in &self.frozen {
            x[axis] = v;
        }
        x
    }

    /// Unit tangent frame, one column per free axis.
    pub fn tangents(&self) -> Vec<[f64; 4]> {
        self.free
            .iter()
            .map(|&a| {
                let mut e = [0.0; 4];
                e[a] = 1.0;
                e
            })
            .collect()
    }

    /// Outward unit normal; facets only.
    pub fn normal(&self) -> Option<[f64; 4]> {
        (self.dim == 3).then(|| {
            let (axis, sign) = self.frozen[0];
            let mut n = [0.0; 4];
            n[axis] = sign;
            n
        })
    }

    /// For a facet, the frozen axis and the sign of its outward normal.
    pub fn facet_axis(&self) -> Option<(usize, f64)> {
        (self.dim == 3).then(|| self.frozen[0])
    }

    /// Whether `other` is a sub-entity of `self`.
    pub fn contains(&self, other: &EntityChart) -> bool {
        self.frozen.iter().all(|f| other.frozen.contains(f))
    }

    pub fn contains_point(&self, x: [f64; 4]) -> bool {
        self.frozen.iter().all(|&(a, v)| (x[a] - v).abs() < 1e-14)
            && self.free.iter().all(|&a| x[a].abs() <= 1.0 + 1e-14)
    }
}

/// Entity lists of the reference tesseract.
#[derive(Clone, Debug)]
pub struct TesseractTopology {
    pub vertices: Vec<EntityChart>,
    pub edges: Vec<EntityChart>,
    pub faces: Vec<EntityChart>,
    pub facets: Vec<EntityChart>,
}

impl TesseractTopology {
    pub fn entities(&self, dim: usize) -> &[EntityChart] {
        match dim {
            0 => &self.vertices,
            1 => &self.edges,
            2 => &self.faces,
            3 => &self.facets,
            _ => &[],
        }
    }

    pub fn entity(&self, dim: usize, index: usize) -> Result<&EntityChart> {
        self.entities(dim).get(index).ok_or(Error::InvalidEntity {
            kind: ["vertex", "edge", "face", "facet"].get(dim).copied().unwrap_or("entity"),
            index,
        })
    }
}

fn axis_subsets(d: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = (0u32..16)
        .filter(|m| m.count_ones() as usize == d)
        .map(|m| (0..4).filter(|a| m & (1 << a) != 0).collect())
        .collect();
    subsets.sort();
    subsets
}

fn build_entities(dim: usize) -> Vec<EntityChart> {
    if dim == 0 {
        return REFERENCE_VERTICES
            .iter()
            .enumerate()
            .map(|(i, v)| EntityChart {
                dim: 0,
                index: i,
                free: vec![],
                frozen: (0..4).map(|a| (a, v[a])).collect(),
                vertices: vec![i],
            })
            .collect();
    }
    let mut out = Vec::new();
    for free in axis_subsets(dim) {
        let frozen_axes: Vec<usize> = (0..4).filter(|a| !free.contains(a)).collect();
        let nf = frozen_axes.len();
        for bits in 0..(1usize << nf) {
            // first frozen axis varies slowest, -1 before +1
            let frozen: Vec<(usize, f64)> = frozen_axes
                .iter()
                .enumerate()
                .map(|(p, &a)| (a, if bits >> (nf - 1 - p) & 1 == 1 { 1.0 } else { -1.0 }))
                .collect();
            let vertices = REFERENCE_VERTICES
                .iter()
                .enumerate()
                .filter(|(_, v)| frozen.iter().all(|&(a, s)| v[a] == s))
                .map(|(i, _)| i)
                .collect();
            out.push(EntityChart {
                dim,
                index: out.len(),
                free: free.clone(),
                frozen,
                vertices,
            });
        }
    }
    out
}

/// The reference tesseract with 16 vertices, 32 edges, 24 faces, 8 facets.
pub fn reference_topology() -> &'static TesseractTopology {
    static TOPO: OnceLock<TesseractTopology> = OnceLock::new();
    TOPO.get_or_init(|| TesseractTopology {
        vertices: build_entities(0),
        edges: build_entities(1),
        faces: build_entities(2),
        facets: build_entities(3),
    })
}

/// Constant outward normal of a facet.
pub fn facet_normal(facet: usize) -> Result<[f64; 4]> {
    Ok(reference_topology().entity(3, facet)?.normal().unwrap())
}

/// Constant unit tangent of an edge.
pub fn edge_tangent(edge: usize) -> Result<[f64; 4]> {
    Ok(reference_topology().entity(1, edge)?.tangents()[0])
}

/// Index of the facet `{x_axis = sign}`.
pub fn facet_index(axis: usize, sign: f64) -> usize {
    reference_topology()
        .facets
        .iter()
        .position(|f| f.frozen[0] == (axis, sign))
        .expect("facet exists")
}

/// Trilinear shape functions `N_i = prod_j (1 + v_ij x_j) / 16`.
pub fn shape_functions(x: [f64; 4]) -> [f64; 16] {
    std::array::from_fn(|i| {
        let v = REFERENCE_VERTICES[i];
        (0..4).map(|j| 1.0 + v[j] * x[j]).product::<f64>() / 16.0
    })
}

fn shape_poly(i: usize) -> TensorPoly4 {
    let v = REFERENCE_VERTICES[i];
    (0..4).fold(TensorPoly4::constant(1.0 / 16.0), |acc, j| {
        let lin = &TensorPoly4::constant(1.0) + &TensorPoly4::coordinate(j).scale(v[j]);
        &acc * &lin
    })
}

/// Multilinear map `phi(x) = sum_i v'_i N_i(x)` onto a physical tesseract.
#[derive(Clone, Debug)]
pub struct TesseractMap {
    pub vertices: [[f64; 4]; 16],
    components: [TensorPoly4; 4],
    jacobian: [[TensorPoly4; 4]; 4],
}

impl TesseractMap {
    pub fn new(vertices: [[f64; 4]; 16]) -> Self {
        let shapes: Vec<TensorPoly4> = (0..16).map(shape_poly).collect();
        let components: [TensorPoly4; 4] = std::array::from_fn(|c| {
            shapes
                .iter()
                .zip(&vertices)
                .fold(TensorPoly4::zero(), |acc, (n, v)| &acc + &n.scale(v[c]))
        });
        let jacobian = std::array::from_fn(|i| std::array::from_fn(|j| components[i].diff(j)));
        Self {
            vertices,
            components,
            jacobian,
        }
    }

    pub fn identity() -> Self {
        Self::new(REFERENCE_VERTICES)
    }

    pub fn eval(&self, x: [f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| self.components[i].eval(x))
    }

    /// `[D phi]_ij = d_j phi_i`.
    pub fn jacobian(&self, x: [f64; 4]) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.jacobian[i][j].eval(x))
    }

    /// The affine map when every jacobian entry is constant.
    pub fn affine_part(&self) -> Option<AffineMap> {
        let constant = self
            .jacobian
            .iter()
            .flatten()
            .all(|p| p.terms().all(|(e, c)| e == [0; 4] || c.abs() < 1e-13));
        constant.then(|| {
            let j = self.jacobian([0.0; 4]);
            let b = self.eval([0.0; 4]);
            AffineMap::new(std::array::from_fn(|r| std::array::from_fn(|c| j[(r, c)])), b)
        })
    }
}

/// Evaluates the element map for given physical vertices.
pub fn map_eval(map: &TesseractMap, x: [f64; 4]) -> [f64; 4] {
    map.eval(x)
}

pub fn jacobian(map: &TesseractMap, x: [f64; 4]) -> Matrix4<f64> {
    map.jacobian(x)
}

/// `x -> A x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub a: [[f64; 4]; 4],
    pub b: [f64; 4],
}

impl AffineMap {
    pub fn new(a: [[f64; 4]; 4], b: [f64; 4]) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(
            std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 })),
            [0.0; 4],
        )
    }

    pub fn scaling(s: f64) -> Self {
        Self::diagonal([s; 4])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        Self::new(
            std::array::from_fn(|i| std::array::from_fn(|j| if i == j { d[i] } else { 0.0 })),
            [0.0; 4],
        )
    }

    pub fn translation(b: [f64; 4]) -> Self {
        Self {
            b,
            ..Self::identity()
        }
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.a[i][j])
    }

    pub fn det(&self) -> f64 {
        self.matrix().determinant()
    }

    pub fn inverse_matrix(&self) -> Result<Matrix4<f64>> {
        let det = self.det();
        if det.abs() < 1e-12 {
            return Err(Error::SingularJacobian(det));
        }
        self.matrix()
            .try_inverse()
            .ok_or(Error::SingularJacobian(det))
    }

    pub fn apply(&self, x: [f64; 4]) -> [f64; 4] {
        let y = self.matrix() * Vector4::from(x) + Vector4::from(self.b);
        [y[0], y[1], y[2], y[3]]
    }

    /// `self o inner`: `x -> self(inner(x))`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let a = self.matrix() * inner.matrix();
        let b = self.apply(inner.b);
        AffineMap::new(std::array::from_fn(|i| std::array::from_fn(|j| a[(i, j)])), b)
    }

    pub fn to_tesseract_map(&self) -> TesseractMap {
        TesseractMap::new(REFERENCE_VERTICES.map(|v| self.apply(v)))
    }
}

/// Tensor Gauss rule on an entity, pushed through its chart.
#[derive(Clone, Debug)]
pub struct QuadEntityRule {
    pub chart: EntityChart,
    pub points: Vec<([f64; 4], f64)>,
}

impl QuadEntityRule {
    pub fn integrate(&self, f: impl Fn([f64; 4]) -> f64) -> f64 {
        self.points.iter().map(|(x, w)| w * f(*x)).sum()
    }

    pub fn integrate_poly(&self, p: &TensorPoly4) -> f64 {
        self.integrate(|x| p.eval(x))
    }
}

/// Rule with `k + 1` Gauss nodes per free axis, exact for per-axis degree
/// `2k + 1`.
pub fn entity_quadrature(chart: &EntityChart, k: usize) -> Result<QuadEntityRule> {
    let rule = gauss_legendre(k + 1)?;
    let d = chart.free.len();
    let n = rule.len();
    let total = n.pow(d as u32);
    let mut points = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut t = vec![0.0; d];
        let mut w = 1.0;
        for a in (0..d).rev() {
            let i = rem % n;
            rem /= n;
            t[a] = rule.nodes[i];
            w *= rule.weights[i];
        }
        points.push((chart.embed(&t), w));
    }
    Ok(QuadEntityRule {
        chart: chart.clone(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_counts_and_vertices() {
        let t = reference_topology();
        assert_eq!(t.vertices.len(), 16);
        assert_eq!(t.edges.len(), 32);
        assert_eq!(t.faces.len(), 24);
        assert_eq!(t.facets.len(), 8);
        assert_eq!(REFERENCE_VERTICES[0], [-1.0; 4]);
        assert_eq!(REFERENCE_VERTICES[2], [1.0, 1.0, -1.0, -1.0]);
        for e in &t.edges {
            assert_eq!(e.vertices.len(), 2);
            assert_eq!(e.frozen.len(), 3);
            let (a, b) = (REFERENCE_VERTICES[e.vertices[0]], REFERENCE_VERTICES[e.vertices[1]]);
            assert_eq!((0..4).filter(|&i| a[i] != b[i]).count(), 1);
        }
        assert!(t.faces.iter().all(|f| f.vertices.len() == 4 && f.frozen.len() == 2));
        assert!(t.facets.iter().all(|f| f.vertices.len() == 8 && f.frozen.len() == 1));
    }

    #[test]
    fn incidence() {
        let t = reference_topology();
        for f in &t.faces {
            assert_eq!(t.facets.iter().filter(|c| c.contains(f)).count(), 2);
        }
        for e in &t.edges {
            assert_eq!(t.facets.iter().filter(|c| c.contains(e)).count(), 3);
        }
    }

    #[test]
    fn normals_and_tangents() {
        assert_eq!(facet_normal(facet_index(3, 1.0)).unwrap(), [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(facet_normal(facet_index(0, -1.0)).unwrap(), [-1.0, 0.0, 0.0, 0.0]);
        let t = reference_topology();
        let e = t.edges.iter().find(|e| e.vertices == vec![0, 1]).unwrap();
        assert_eq!(edge_tangent(e.index).unwrap(), [1.0, 0.0, 0.0, 0.0]);
        assert!(facet_normal(8).is_err());
        assert!(edge_tangent(32).is_err());
    }

    #[test]
    fn shape_function_properties() {
        let n = shape_functions(REFERENCE_VERTICES[6]);
        for (i, v) in n.iter().enumerate() {
            assert_eq!(*v, if i == 6 { 1.0 } else { 0.0 });
        }
        for x in [[0.1, -0.3, 0.7, 0.2], [0.9, 0.9, -0.95, 0.0], [-0.5; 4]] {
            let s: f64 = shape_functions(x).iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
        let id = TesseractMap::identity();
        for x in [[0.1, -0.3, 0.7, 0.2], [0.0; 4]] {
            assert!((id.jacobian(x) - Matrix4::identity()).abs().max() < 1e-14);
            let y = id.eval(x);
            assert!((0..4).all(|i| (y[i] - x[i]).abs() < 1e-14));
        }
    }

    #[test]
    fn affine_map_jacobian_is_constant() {
        let a = [
            [1.2, 0.1, 0.0, -0.2],
            [0.0, 0.9, 0.3, 0.0],
            [0.1, 0.0, 1.1, 0.0],
            [0.0, -0.1, 0.0, 1.4],
        ];
        let m = AffineMap::new(a, [0.5, -1.0, 2.0, 0.0]);
        let t = m.to_tesseract_map();
        for x in [[0.3, -0.2, 0.9, -1.0], [0.0; 4], [1.0, 1.0, -0.5, 0.25]] {
            assert!((t.jacobian(x) - m.matrix()).abs().max() < 1e-12);
        }
        assert_eq!(t.affine_part().map(|p| p.det() > 0.0), Some(true));
    }

    #[test]
    fn entity_quadrature_examples() {
        let t = reference_topology();
        let facet = &t.facets[facet_index(3, 1.0)];
        let r = entity_quadrature(facet, 1).unwrap();
        assert!((r.integrate(|_| 1.0) - 8.0).abs() < 1e-14);
        let face = &t.faces[0];
        let r = entity_quadrature(face, 2).unwrap();
        let a = face.free[0];
        assert!(r.integrate(|x| x[a]).abs() < 1e-15);
        let edge = &t.edges[5];
        let r = entity_quadrature(edge, 1).unwrap();
        let a = edge.free[0];
        assert!((r.integrate(|x| x[a] * x[a]) - 2.0 / 3.0).abs() < 1e-15);
        assert!(r.points.iter().all(|(x, _)| edge.contains_point(*x)));
    }
}
