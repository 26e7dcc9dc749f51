//! The polynomial form spaces `V^{k,s}` on the reference tesseract, their
//! bubble subspaces, and closed-form dimension counts.

use nalgebra::{DMatrix, DVector};

use crate::exterior::{component_count, FormField, PAIRS};
use crate::tensorpoly::{legendre_family, Poly1D, TensorPoly4};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    pub k: usize,
    pub s: usize,
}

impl SpaceSpec {
    pub fn new(k: usize, s: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("order k must be >= 1".into()));
        }
        if s > 4 {
            return Err(Error::InvalidArgument(format!("form degree {s} out of range 0..=4")));
        }
        Ok(Self { k, s })
    }
}

/// One tensor-product block of a space: a single stored component, an
/// optional product of `(1 - x_n^2)` factors, and per-axis Legendre degree
/// bounds (a negative bound makes the block empty).
#[derive(Clone, Debug, PartialEq)]
pub struct Slot {
    pub component: usize,
    pub bubble_axes: Vec<usize>,
    pub degrees: [i64; 4],
}

impl Slot {
    pub fn len(&self) -> usize {
        self.degrees
            .iter()
            .map(|&d| if d < 0 { 0 } else { d as usize + 1 })
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Legendre multi-indices in lexicographic order.
    pub fn indices(&self) -> Vec<[usize; 4]> {
        tensor_indices(self.degrees)
    }
}

/// Lexicographic multi-indices `0..=d_a` per axis; empty if any bound is negative.
pub fn tensor_indices(degrees: [i64; 4]) -> Vec<[usize; 4]> {
    if degrees.iter().any(|&d| d < 0) {
        return Vec::new();
    }
    let d = degrees.map(|d| d as usize);
    let mut out = Vec::with_capacity(d.iter().map(|x| x + 1).product());
    for i in 0..=d[0] {
        for j in 0..=d[1] {
            for l in 0..=d[2] {
                for m in 0..=d[3] {
                    out.push([i, j, l, m]);
                }
            }
        }
    }
    out
}

/// Where a basis member comes from: slot number and Legendre multi-index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisLabel {
    pub slot: usize,
    pub component: usize,
    pub index: [usize; 4],
}

#[derive(Clone, Debug)]
pub struct BasisSet {
    pub spec: SpaceSpec,
    pub members: Vec<FormField>,
    pub labels: Vec<BasisLabel>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `sum_j c_j b_j`.
    pub fn combine(&self, coeffs: &[f64]) -> FormField {
        assert_eq!(coeffs.len(), self.len());
        let ncomp = component_count(self.spec.s);
        let mut comps = vec![TensorPoly4::zero(); ncomp];
        for ((m, l), &c) in self.members.iter().zip(&self.labels).zip(coeffs) {
            if c != 0.0 {
                let p = m.components()[l.component];
                comps[l.component] = &comps[l.component] + &p.scale(c);
            }
        }
        FormField::from_components(self.spec.s, comps)
    }
}

fn axis_degrees(k: usize, lowered: &[usize], by: i64) -> [i64; 4] {
    let k = k as i64;
    std::array::from_fn(|a| if lowered.contains(&a) { k - by } else { k })
}

/// Tensor blocks of `V^{k,s}`, in display order.
pub fn space_slots(spec: SpaceSpec) -> Vec<Slot> {
    let SpaceSpec { k, s } = spec;
    let plain = |component, degrees| Slot {
        component,
        bubble_axes: vec![],
        degrees,
    };
    match s {
        0 => vec![plain(0, axis_degrees(k, &[], 0))],
        1 => (0..4).map(|c| plain(c, axis_degrees(k, &[c], 1))).collect(),
        2 => PAIRS
            .iter()
            .enumerate()
            .map(|(slot, &(a, b))| plain(slot, axis_degrees(k, &[a, b], 1)))
            .collect(),
        3 => (0..4)
            .map(|c| {
                let others: Vec<usize> = (0..4).filter(|&a| a != c).collect();
                plain(c, axis_degrees(k, &others, 1))
            })
            .collect(),
        4 => vec![plain(0, axis_degrees(k, &[0, 1, 2, 3], 1))],
        _ => vec![],
    }
}

/// Tensor blocks of the bubble space; degrees refer to the Legendre factor
/// multiplying the `(1 - x_n^2)` weights.
pub fn bubble_slots(spec: SpaceSpec) -> Result<Vec<Slot>> {
    let SpaceSpec { k, s } = spec;
    let k = k as i64;
    let all: Vec<usize> = (0..4).collect();
    let slots = match s {
        0 => vec![Slot {
            component: 0,
            bubble_axes: all,
            degrees: [k - 2; 4],
        }],
        1 => (0..4)
            .map(|c| Slot {
                component: c,
                bubble_axes: (0..4).filter(|&n| n != c).collect(),
                degrees: std::array::from_fn(|a| if a == c { k - 1 } else { k - 2 }),
            })
            .collect(),
        2 => PAIRS
            .iter()
            .enumerate()
            .map(|(slot, &(a, b))| Slot {
                component: slot,
                bubble_axes: (0..4).filter(|&n| n != a && n != b).collect(),
                degrees: std::array::from_fn(|n| if n == a || n == b { k - 1 } else { k - 2 }),
            })
            .collect(),
        3 => (0..4)
            .map(|c| Slot {
                component: c,
                bubble_axes: vec![c],
                degrees: std::array::from_fn(|a| if a == c { k - 2 } else { k - 1 }),
            })
            .collect(),
        _ => return Err(Error::UnsupportedFormDegree(s)),
    };
    Ok(slots)
}

fn bubble_weight(axis: usize) -> TensorPoly4 {
    let x = TensorPoly4::coordinate(axis);
    &TensorPoly4::constant(1.0) - &(&x * &x)
}

fn expand(spec: SpaceSpec, slots: &[Slot]) -> BasisSet {
    let maxdeg = slots
        .iter()
        .flat_map(|s| s.degrees)
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let fam: Vec<Poly1D> = legendre_family(maxdeg);
    let ncomp = component_count(spec.s);
    let mut members = Vec::new();
    let mut labels = Vec::new();
    for (slot_no, slot) in slots.iter().enumerate() {
        let weight = slot
            .bubble_axes
            .iter()
            .fold(TensorPoly4::constant(1.0), |acc, &a| &acc * &bubble_weight(a));
        for idx in slot.indices() {
            let p = TensorPoly4::from_1d_product([
                &fam[idx[0]],
                &fam[idx[1]],
                &fam[idx[2]],
                &fam[idx[3]],
            ]);
            let p = if slot.bubble_axes.is_empty() { p } else { &weight * &p };
            let mut comps = vec![TensorPoly4::zero(); ncomp];
            comps[slot.component] = p;
            members.push(FormField::from_components(spec.s, comps));
            labels.push(BasisLabel {
                slot: slot_no,
                component: slot.component,
                index: idx,
            });
        }
    }
    BasisSet {
        spec,
        members,
        labels,
    }
}

/// Tensor-Legendre basis of `V^{k,s}`.
pub fn space_basis(spec: SpaceSpec) -> BasisSet {
    expand(spec, &space_slots(spec))
}

/// Basis of the bubble subspace (fields with vanishing facet traces); `s = 4`
/// is rejected.
pub fn bubble_basis(spec: SpaceSpec) -> Result<BasisSet> {
    Ok(expand(spec, &bubble_slots(spec)?))
}

pub fn space_dim(spec: SpaceSpec) -> usize {
    let k = spec.k;
    match spec.s {
        0 => (k + 1).pow(4),
        1 => 4 * k * (k + 1).pow(3),
        2 => 6 * k * k * (k + 1).pow(2),
        3 => 4 * k.pow(3) * (k + 1),
        4 => k.pow(4),
        _ => 0,
    }
}

pub fn trace_dof_dim(spec: SpaceSpec) -> usize {
    let k = spec.k;
    match spec.s {
        0 => 8 * k * (k * k + 1),
        1 => 8 * k * (3 * k * k + 1),
        2 => 24 * k.pow(3),
        3 => 8 * k.pow(3),
        _ => 0,
    }
}

pub fn vol_dof_dim(spec: SpaceSpec) -> usize {
    let k = spec.k;
    let km = k - 1;
    match spec.s {
        0 => km.pow(4),
        1 => 4 * k * km.pow(3),
        2 => 6 * k * k * km * km,
        3 => 4 * k.pow(3) * km,
        4 => k.pow(4),
        _ => 0,
    }
}

/// Least-squares membership test against the span of a basis, working on
/// monomial coefficient vectors. Coefficients outside the basis' degree box
/// count fully toward the residual.
pub struct SpanProjector {
    s: usize,
    boxdeg: [usize; 4],
    q: DMatrix<f64>,
}

impl SpanProjector {
    pub fn new(basis: &BasisSet) -> Self {
        let mut boxdeg = [0usize; 4];
        for m in &basis.members {
            for p in m.components() {
                let d = p.trimmed().degrees();
                for a in 0..4 {
                    boxdeg[a] = boxdeg[a].max(d[a]);
                }
            }
        }
        let s = basis.spec.s;
        let rows = component_count(s) * boxdeg.iter().map(|d| d + 1).product::<usize>();
        let mut a = DMatrix::zeros(rows, basis.len());
        for (j, m) in basis.members.iter().enumerate() {
            let (v, _) = Self::flatten(s, boxdeg, m);
            a.set_column(j, &v);
        }
        let q = if basis.is_empty() {
            DMatrix::zeros(rows, 0)
        } else {
            a.qr().q()
        };
        Self { s, boxdeg, q }
    }

    fn flatten(s: usize, boxdeg: [usize; 4], f: &FormField) -> (DVector<f64>, f64) {
        let per: usize = boxdeg.iter().map(|d| d + 1).product();
        let mut v = DVector::zeros(component_count(s) * per);
        let mut overflow = 0.0;
        for (c, p) in f.components().iter().enumerate() {
            for (e, val) in p.terms() {
                if (0..4).all(|a| e[a] <= boxdeg[a]) {
                    let mut idx = 0;
                    for a in 0..4 {
                        idx = idx * (boxdeg[a] + 1) + e[a];
                    }
                    v[c * per + idx] += val;
                } else {
                    overflow += val * val;
                }
            }
        }
        (v, overflow)
    }

    /// Relative distance `|f - P f| / max(|f|, tiny)`.
    pub fn residual(&self, f: &FormField) -> Result<f64> {
        if f.degree() != self.s {
            return Err(Error::FormDegreeMismatch {
                expected: self.s,
                found: f.degree(),
            });
        }
        let (v, overflow) = Self::flatten(self.s, self.boxdeg, f);
        let proj = &self.q * (self.q.transpose() * &v);
        let inside = (&v - proj).norm_squared();
        let total = v.norm_squared() + overflow;
        if total == 0.0 {
            return Ok(0.0);
        }
        Ok(((inside + overflow) / total).sqrt())
    }
}
