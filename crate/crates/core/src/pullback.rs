//! Proxy pullbacks under element maps:
//!
//! | s | reference proxy |
//! |---|-----------------|
//! | 0 | `u o phi` |
//! | 1 | `Dphi^T (E o phi)` |
//! | 2 | `Dphi^T (F o phi) Dphi` |
//! | 3 | `det(Dphi) Dphi^{-1} (G o phi)` |
//! | 4 | `det(Dphi) (q o phi)` |
//!
//! Affine maps produce polynomial output; general multilinear maps are
//! evaluated pointwise through [`pull_at`].

use nalgebra::Matrix4;
use serde::Serialize;

use crate::dofs::{build_dofset, dof_apply, AxisTest, DofFunctional, DofKind};
use crate::exterior::{apply_d, levi_civita, FormField, Skew4P, Vec4P, PAIRS};
use crate::geometry::{entity_quadrature, AffineMap, TesseractMap, REFERENCE_VERTICES};
use crate::rng::{random_field, sample_points, FieldRng};
use crate::tensorpoly::{gauss_legendre, legendre_family, QuadRule4D, TensorPoly4};
use crate::Result;

fn lin_comb(terms: impl Iterator<Item = (f64, TensorPoly4)>) -> TensorPoly4 {
    terms
        .filter(|(c, _)| *c != 0.0)
        .fold(TensorPoly4::zero(), |acc, (c, p)| &acc + &p.scale(c))
}

/// Applies the proxy transformation with a constant jacobian `j` to a field
/// already composed with the map.
fn transform(f: &FormField, j: &Matrix4<f64>) -> Result<FormField> {
    Ok(match f {
        FormField::Scalar0(u) => FormField::Scalar0(u.clone()),
        FormField::Vector1(e) => FormField::Vector1(Vec4P(std::array::from_fn(|i| {
            lin_comb((0..4).map(|k| (j[(k, i)], e.0[k].clone())))
        }))),
        FormField::Skew2(m) => FormField::Skew2(Skew4P::from_upper(|i, jj| {
            lin_comb(
                (0..4)
                    .flat_map(|k| (0..4).map(move |l| (k, l)))
                    .filter(|(k, l)| k != l)
                    .map(|(k, l)| (j[(k, i)] * j[(l, jj)], m.entry(k, l))),
            )
        })),
        FormField::Vector3(g) => {
            let det = j.determinant();
            let inv = j
                .try_inverse()
                .ok_or(crate::Error::SingularJacobian(det))?;
            FormField::Vector3(Vec4P(std::array::from_fn(|i| {
                lin_comb((0..4).map(|k| (det * inv[(i, k)], g.0[k].clone())))
            })))
        }
        FormField::Scalar4(q) => FormField::Scalar4(q.scale(j.determinant())),
    })
}

/// Pullback of a physical field through an affine map.
pub fn pull(f: &FormField, map: &AffineMap) -> Result<FormField> {
    let det = map.det();
    if det.abs() < 1e-12 {
        return Err(crate::Error::SingularJacobian(det));
    }
    let composed = f.map_components(|p| p.compose_affine(&map.a, &map.b));
    transform(&composed, &map.matrix())
}

/// Push-forward of a reference field to the physical element, the inverse
/// of [`pull`].
pub fn push(f: &FormField, map: &AffineMap) -> Result<FormField> {
    let inv = map.inverse_matrix()?;
    let a = std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)]));
    let b = std::array::from_fn(|i| -(0..4).map(|j| inv[(i, j)] * map.b[j]).sum::<f64>());
    pull(f, &AffineMap::new(a, b))
}

/// Physical proxy components at `phi(x)` of a reference field, evaluated
/// pointwise without composing polynomials.
pub fn push_at(f: &FormField, map: &AffineMap, x: [f64; 4]) -> Result<Vec<f64>> {
    let inv = map.inverse_matrix()?;
    let frozen = f.map_components(|p| TensorPoly4::constant(p.eval(x)));
    Ok(transform(&frozen, &inv)?.eval([0.0; 4]))
}

/// Pointwise pullback through a general multilinear map: the reference
/// proxy's stored components at `x`.
pub fn pull_at(f: &FormField, map: &TesseractMap, x: [f64; 4]) -> Result<Vec<f64>> {
    let j = map.jacobian(x);
    let det = j.determinant();
    if det.abs() < 1e-12 {
        return Err(crate::Error::SingularJacobian(det));
    }
    let y = map.eval(x);
    let frozen = f.map_components(|p| TensorPoly4::constant(p.eval(y)));
    Ok(transform(&frozen, &j)?.eval([0.0; 4]))
}

/// Stored-component max-norm distance at the points, relative to the
/// larger of 1 and the values' magnitude.
pub fn sampled_residual(a: &FormField, b: &FormField, points: &[[f64; 4]]) -> f64 {
    let mut diff = 0.0f64;
    let mut scale = 1.0f64;
    for &x in points {
        for (u, v) in a.eval(x).into_iter().zip(b.eval(x)) {
            diff = diff.max((u - v).abs());
            scale = scale.max(u.abs()).max(v.abs());
        }
    }
    diff / scale
}

/// `d(phi^* w)` against `phi^*(d w)` at 20 reference points.
pub fn naturality_check(f: &FormField, map: &AffineMap, rng: &mut FieldRng) -> Result<f64> {
    let lhs = apply_d(&pull(f, map)?)?;
    let rhs = pull(&apply_d(f)?, map)?;
    Ok(sampled_residual(&lhs, &rhs, &sample_points(rng, 20)))
}

/// `(phi o psi)^* = psi^* phi^*` at 20 reference points: the composite map
/// applied in one step against `psi` applied to the polynomial `phi^* f`.
pub fn functoriality_check(
    f: &FormField,
    phi: &AffineMap,
    psi: &AffineMap,
    rng: &mut FieldRng,
) -> Result<f64> {
    let composite = phi.compose(psi).to_tesseract_map();
    let staged = pull(f, phi)?;
    let psi_map = psi.to_tesseract_map();
    let mut diff = 0.0f64;
    let mut scale = 1.0f64;
    for x in sample_points(rng, 20) {
        let a = pull_at(f, &composite, x)?;
        let b = pull_at(&staged, &psi_map, x)?;
        for (u, v) in a.into_iter().zip(b) {
            diff = diff.max((u - v).abs());
            scale = scale.max(u.abs()).max(v.abs());
        }
    }
    Ok(diff / scale)
}

#[derive(Clone, Debug, Serialize)]
pub struct DofInvarianceReport {
    pub k: usize,
    pub s: usize,
    pub det: f64,
    pub checked: usize,
    pub max_discrepancy: f64,
    /// Set when the map reverses orientation.
    pub flagged: bool,
    pub pass: bool,
}

/// Generalized cross product `[u x v x w]_m = eps_{mjkl} u_j v_k w_l`.
pub fn cross3(u: [f64; 4], v: [f64; 4], w: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for &([m, j, k, l], sign) in crate::exterior::levi_civita_terms() {
        out[m] += sign * u[j] * v[k] * w[l];
    }
    out
}

fn dot(a: [f64; 4], b: [f64; 4]) -> f64 {
    (0..4).map(|i| a[i] * b[i]).sum()
}

/// Physical edge vectors `T_a = (phi(v + 2e_a) - phi(v)) / 2` read off the
/// mapped vertices.
pub fn physical_frame(vertices: &[[f64; 4]; 16]) -> [[f64; 4]; 4] {
    std::array::from_fn(|a| {
        let hi = REFERENCE_VERTICES
            .iter()
            .position(|v| (0..4).all(|b| v[b] == if b == a { 1.0 } else { -1.0 }))
            .unwrap();
        std::array::from_fn(|i| (vertices[hi][i] - vertices[0][i]) / 2.0)
    })
}

/// Value at a physical point of the entity quantity that the reference
/// component `c` of an s-form proxy represents.
fn physical_component(s: usize, c: usize, vals: &[f64], t: &[[f64; 4]; 4]) -> f64 {
    match s {
        0 => vals[0],
        1 => dot([vals[0], vals[1], vals[2], vals[3]], t[c]),
        2 => {
            let full = crate::exterior::lmap(vals.try_into().unwrap());
            let (g, h) = PAIRS[c];
            (0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .map(|(i, j)| t[g][i] * full[i][j] * t[h][j])
                .sum()
        }
        3 => {
            let o: Vec<usize> = (0..4).filter(|&a| a != c).collect();
            let n = cross3(t[o[0]], t[o[1]], t[o[2]]);
            levi_civita(c, o[0], o[1], o[2]) * dot([vals[0], vals[1], vals[2], vals[3]], n)
        }
        _ => {
            let m = Matrix4::from_fn(|i, j| t[j][i]);
            vals[0] * m.determinant().abs()
        }
    }
}

/// Integral of a functional's integrand over the physical entity, computed
/// with quadrature in the entity parameters and physical tangent vectors.
fn physical_dof(
    l: &DofFunctional,
    phys: &FormField,
    map: &TesseractMap,
    frame: &[[f64; 4]; 4],
    nodes: usize,
) -> Result<f64> {
    let points: Vec<([f64; 4], f64)> = match l.chart() {
        Some(chart) => entity_quadrature(chart, nodes - 1)?.points,
        None => QuadRule4D::uniform(nodes)?.points(),
    };
    let maxdeg = l.test.iter().copied().max().unwrap_or(0);
    let fam = legendre_family(maxdeg);
    let mut total = 0.0;
    for (x, w) in points {
        let test: f64 = (0..4)
            .map(|a| match l.axes[a] {
                AxisTest::Legendre(i) => fam[i].eval(x[a]),
                AxisTest::Point(_) => 1.0,
            })
            .product();
        let vals = phys.eval(map.eval(x));
        let integrand: f64 = l
            .terms
            .iter()
            .map(|&(c, coef)| coef * physical_component(l.s, c, &vals, frame))
            .sum();
        total += w * test * integrand;
    }
    if l.s == 0 {
        total *= entity_measure(l, frame);
    }
    Ok(total)
}

fn entity_measure(l: &DofFunctional, frame: &[[f64; 4]; 4]) -> f64 {
    let Some(chart) = l.chart() else { return 1.0 };
    let d = chart.free.len();
    if d == 0 {
        return 1.0;
    }
    let g = nalgebra::DMatrix::from_fn(d, d, |i, j| dot(frame[chart.free[i]], frame[chart.free[j]]));
    g.determinant().sqrt()
}

/// Compares reference functionals of a pulled-back random field with the
/// same functionals evaluated on the physical entities.
pub fn dof_invariance_check(
    k: usize,
    s: usize,
    map: &AffineMap,
    rng: &mut FieldRng,
    tol: f64,
) -> Result<DofInvarianceReport> {
    let phys = random_field(rng, s, k);
    let reference = pull(&phys, map)?;
    let tmap = map.to_tesseract_map();
    let frame = physical_frame(&tmap.vertices);
    let det = map.det();
    let orientation = det.signum();
    let nodes = gauss_legendre_nodes(k);
    let set = build_dofset(k, s)?;
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    let mut checked = 0;
    for l in set.dofs.iter().filter(|l| l.is_trace() || s == 4) {
        let r = dof_apply(l, &reference)?;
        let p = physical_dof(l, &phys, &tmap, &frame, nodes)?;
        let expected = match (s, l.kind) {
            (0, DofKind::Vertex) => p,
            (0, _) => p / entity_measure(l, &frame),
            (4, _) => orientation * p,
            _ => p,
        };
        worst = worst.max((r - expected).abs());
        scale = scale.max(expected.abs());
        checked += 1;
    }
    let worst = worst / scale;
    Ok(DofInvarianceReport {
        k,
        s,
        det,
        checked,
        max_discrepancy: worst,
        flagged: det < 0.0,
        pass: worst < tol,
    })
}

/// Node count exact for a degree-`k` field composed with an affine map
/// (per-axis degree up to `4k`) times a degree-`k` test function.
fn gauss_legendre_nodes(k: usize) -> usize {
    let n = (5 * k) / 2 + 1;
    debug_assert!(gauss_legendre(n).is_ok());
    n
}
