//! Degrees of freedom on the reference tesseract, Gram assembly and
//! unisolvence certification.
//!
//! Every functional is a moment of one or more stored proxy components
//! against a tensor test function: point evaluation on the axes an entity
//! freezes, a Legendre polynomial on each free axis. Entity orientation
//! follows [`crate::geometry`]: free axes increasing, frames `+e_axis`.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::exterior::{levi_civita, pair_slot, FormField, PAIRS};
use crate::geometry::{reference_topology, EntityChart};
use crate::spaces::{space_basis, space_dim, BasisSet, SpaceSpec};
use crate::tensorpoly::legendre_family;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DofKind {
    Vertex,
    Edge,
    Face,
    Facet,
    Volume,
}

impl DofKind {
    pub const ALL: [DofKind; 5] = [
        DofKind::Vertex,
        DofKind::Edge,
        DofKind::Face,
        DofKind::Facet,
        DofKind::Volume,
    ];

    pub fn entity_dim(self) -> usize {
        match self {
            DofKind::Vertex => 0,
            DofKind::Edge => 1,
            DofKind::Face => 2,
            DofKind::Facet => 3,
            DofKind::Volume => 4,
        }
    }

    pub fn name(self) -> &'static str {
        ["vertex", "edge", "face", "facet", "volume"][self.entity_dim()]
    }
}

/// Per-axis factor of a test function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxisTest {
    Point(f64),
    Legendre(usize),
}

/// Which rotated tangential component of a face 1-form pairs with which
/// test block. `Standard` is the unisolvent choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FacePairing {
    #[default]
    Standard,
    Swapped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DofFunctional {
    pub kind: DofKind,
    pub entity: usize,
    pub s: usize,
    /// Test block within the entity.
    pub slot: usize,
    /// Legendre index for each free axis of the entity, in axis order.
    pub test: Vec<usize>,
    /// `(stored component, coefficient)` pairs of the integrand.
    pub terms: Vec<(usize, f64)>,
    pub axes: [AxisTest; 4],
}

impl DofFunctional {
    pub fn is_trace(&self) -> bool {
        self.kind != DofKind::Volume
    }

    /// The entity this functional lives on (`None` for volume functionals).
    pub fn chart(&self) -> Option<&'static EntityChart> {
        let dim = self.kind.entity_dim();
        (dim < 4).then(|| &reference_topology().entities(dim)[self.entity])
    }
}

#[derive(Clone, Debug)]
pub struct DofSet {
    pub k: usize,
    pub s: usize,
    pub dofs: Vec<DofFunctional>,
}

impl DofSet {
    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    pub fn count(&self, kind: DofKind) -> usize {
        self.dofs.iter().filter(|d| d.kind == kind).count()
    }

    pub fn trace_count(&self) -> usize {
        self.dofs.iter().filter(|d| d.is_trace()).count()
    }
}

/// Lexicographic index tuples with `0..=bounds[p]` in position `p`.
fn test_indices(bounds: &[i64]) -> Vec<Vec<usize>> {
    if bounds.iter().any(|&b| b < 0) {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b as usize).map(move |i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

struct Builder {
    s: usize,
    dofs: Vec<DofFunctional>,
}

impl Builder {
    fn push_block(
        &mut self,
        kind: DofKind,
        entity: usize,
        slot: usize,
        free: &[usize],
        frozen: &[(usize, f64)],
        bounds: &[i64],
        terms: Vec<(usize, f64)>,
    ) {
        for test in test_indices(bounds) {
            let mut axes = [AxisTest::Point(0.0); 4];
            for &(a, v) in frozen {
                axes[a] = AxisTest::Point(v);
            }
            for (p, &a) in free.iter().enumerate() {
                axes[a] = AxisTest::Legendre(test[p]);
            }
            self.dofs.push(DofFunctional {
                kind,
                entity,
                s: self.s,
                slot,
                test,
                terms: terms.clone(),
                axes,
            });
        }
    }
}

fn slot_of(a: usize, b: usize) -> usize {
    pair_slot(a, b).unwrap().0
}

/// The functionals of `V^{k,s}`: vertices, edges, faces, facets, volume.
pub fn build_dofset(k: usize, s: usize) -> Result<DofSet> {
    build_dofset_with(k, s, FacePairing::Standard)
}

pub fn build_dofset_with(k: usize, s: usize, pairing: FacePairing) -> Result<DofSet> {
    SpaceSpec::new(k, s)?;
    let topo = reference_topology();
    let k = k as i64;
    let mut b = Builder { s, dofs: Vec::new() };

    if s == 0 {
        for v in &topo.vertices {
            b.push_block(DofKind::Vertex, v.index, 0, &[], &v.frozen, &[], vec![(0, 1.0)]);
        }
    }
    if s <= 1 {
        for e in &topo.edges {
            let a = e.free[0];
            let (bound, comp) = if s == 0 { (k - 2, 0) } else { (k - 1, a) };
            b.push_block(DofKind::Edge, e.index, 0, &e.free, &e.frozen, &[bound], vec![(comp, 1.0)]);
        }
    }
    if s <= 2 {
        for f in &topo.faces {
            let (fa, fb) = (f.free[0], f.free[1]);
            let mut block = |slot, bounds: [i64; 2], terms| {
                b.push_block(DofKind::Face, f.index, slot, &f.free, &f.frozen, &bounds, terms)
            };
            match s {
                0 => block(0, [k - 2, k - 2], vec![(0, 1.0)]),
                1 => {
                    let (first, second) = match pairing {
                        FacePairing::Standard => ([k - 2, k - 1], [k - 1, k - 2]),
                        FacePairing::Swapped => ([k - 1, k - 2], [k - 2, k - 1]),
                    };
                    block(0, first, vec![(fb, 1.0)]);
                    block(1, second, vec![(fa, -1.0)]);
                }
                _ => block(0, [k - 1, k - 1], vec![(slot_of(fa, fb), 1.0)]),
            }
        }
    }
    if s <= 3 {
        for c in &topo.facets {
            let (i, _) = c.facet_axis().unwrap();
            let free = &c.free;
            let mut block = |slot, bounds: Vec<i64>, terms| {
                b.push_block(DofKind::Facet, c.index, slot, free, &c.frozen, &bounds, terms)
            };
            match s {
                0 => block(0, vec![k - 2; 3], vec![(0, 1.0)]),
                1 => {
                    for (p, &f) in free.iter().enumerate() {
                        let bounds = free.iter().map(|&g| if g == f { k - 1 } else { k - 2 }).collect();
                        block(p, bounds, vec![(f, 1.0)]);
                    }
                }
                2 => {
                    for (p, &f) in free.iter().enumerate() {
                        let others: Vec<usize> = free.iter().copied().filter(|&g| g != f).collect();
                        let (g, h) = (others[0], others[1]);
                        let coef = 2.0 * levi_civita(f, i, g, h);
                        let bounds = free.iter().map(|&g| if g == f { k - 2 } else { k - 1 }).collect();
                        block(p, bounds, vec![(slot_of(g, h), coef)]);
                    }
                }
                _ => block(0, vec![k - 1; 3], vec![(i, 1.0)]),
            }
        }
    }

    let all = [0, 1, 2, 3];
    let lowered = |axes: &[usize], hi: i64, lo: i64| -> Vec<i64> {
        all.iter().map(|a| if axes.contains(a) { hi } else { lo }).collect()
    };
    let mut vol = |slot, bounds: Vec<i64>, terms| {
        b.push_block(DofKind::Volume, 0, slot, &all, &[], &bounds, terms)
    };
    match s {
        0 => vol(0, vec![k - 2; 4], vec![(0, 1.0)]),
        1 => {
            for c in 0..4 {
                vol(c, lowered(&[c], k - 1, k - 2), vec![(c, 1.0)]);
            }
        }
        2 => {
            for (slot, &(a, bb)) in PAIRS.iter().enumerate() {
                vol(slot, lowered(&[a, bb], k - 1, k - 2), vec![(slot, 2.0)]);
            }
        }
        3 => {
            for c in 0..4 {
                vol(c, lowered(&[c], k - 2, k - 1), vec![(c, 1.0)]);
            }
        }
        _ => vol(0, vec![k - 1; 4], vec![(0, 1.0)]),
    }

    Ok(DofSet {
        k: k as usize,
        s,
        dofs: b.dofs,
    })
}

/// `int_{-1}^{1} x^j P_i(x) dx` for `j = 0..=degree`.
pub fn legendre_moments(i: usize, degree: usize) -> Vec<f64> {
    const MAX_I: usize = 16;
    const MAX_J: usize = 40;
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    let compute = |i: usize, degree: usize| -> Vec<f64> {
        let p = &legendre_family(i)[i];
        (0..=degree)
            .map(|j| {
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(m, c)| if (j + m) % 2 == 0 { 2.0 * c / (j + m + 1) as f64 } else { 0.0 })
                    .sum()
            })
            .collect()
    };
    if i <= MAX_I && degree <= MAX_J {
        let table = TABLE.get_or_init(|| (0..=MAX_I).map(|i| compute(i, MAX_J)).collect());
        return table[i][..=degree].to_vec();
    }
    compute(i, degree)
}

fn axis_vector(t: AxisTest, degree: usize) -> Vec<f64> {
    match t {
        AxisTest::Point(v) => {
            let mut out = Vec::with_capacity(degree + 1);
            let mut acc = 1.0;
            for _ in 0..=degree {
                out.push(acc);
                acc *= v;
            }
            out
        }
        AxisTest::Legendre(i) => legendre_moments(i, degree),
    }
}

/// `l(F)`.
pub fn dof_apply(l: &DofFunctional, f: &FormField) -> Result<f64> {
    if f.degree() != l.s {
        return Err(Error::FormDegreeMismatch {
            expected: l.s,
            found: f.degree(),
        });
    }
    let comps = f.components();
    let mut total = 0.0;
    for &(c, coef) in &l.terms {
        let p = comps[c];
        if p.is_zero() {
            continue;
        }
        let d = p.degrees();
        let v: [Vec<f64>; 4] = std::array::from_fn(|a| axis_vector(l.axes[a], d[a]));
        total += coef * p.contract([&v[0], &v[1], &v[2], &v[3]]);
    }
    Ok(total)
}

/// All functionals applied to one field.
pub fn dof_values(set: &DofSet, f: &FormField) -> Result<Vec<f64>> {
    set.dofs.iter().map(|l| dof_apply(l, f)).collect()
}

/// `M_ij = l_i(b_j)`.
pub fn gram_of(set: &DofSet, basis: &BasisSet) -> Result<DMatrix<f64>> {
    if set.s != basis.spec.s {
        return Err(Error::FormDegreeMismatch {
            expected: set.s,
            found: basis.spec.s,
        });
    }
    let n = basis.len();
    let rows: Vec<Vec<f64>> = set
        .dofs
        .par_iter()
        .map(|l| {
            basis
                .members
                .iter()
                .zip(&basis.labels)
                .map(|(b, label)| {
                    if l.terms.iter().any(|&(c, _)| c == label.component) {
                        dof_apply(l, b).unwrap()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    Ok(DMatrix::from_fn(set.len(), n, |i, j| rows[i][j]))
}

pub fn gram(k: usize, s: usize) -> Result<DMatrix<f64>> {
    let spec = SpaceSpec::new(k, s)?;
    gram_of(&build_dofset(k, s)?, &space_basis(spec))
}

/// `min |U_ii| / max |U_ii|` of a partially pivoted LU factorization;
/// zero for non-square input.
pub fn pivot_ratio(m: &DMatrix<f64>) -> f64 {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return 0.0;
    }
    let u = m.clone().lu().u();
    let diag = u.diagonal();
    let max = diag.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let min = diag.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}

pub const PIVOT_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct KindCount {
    pub kind: DofKind,
    pub count: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnisolvenceReport {
    pub k: usize,
    pub s: usize,
    pub size: usize,
    pub pivot_ratio: f64,
    pub counts: Vec<KindCount>,
    pub pass: bool,
}

/// Per-kind functional counts from the closed-form entity tallies.
pub fn expected_kind_count(k: usize, s: usize, kind: DofKind) -> usize {
    let km = k - 1;
    match (s, kind) {
        (0, DofKind::Vertex) => 16,
        (0, DofKind::Edge) => 32 * km,
        (0, DofKind::Face) => 24 * km * km,
        (0, DofKind::Facet) => 8 * km.pow(3),
        (0, DofKind::Volume) => km.pow(4),
        (1, DofKind::Edge) => 32 * k,
        (1, DofKind::Face) => 24 * 2 * k * km,
        (1, DofKind::Facet) => 8 * 3 * k * km * km,
        (1, DofKind::Volume) => 4 * k * km.pow(3),
        (2, DofKind::Face) => 24 * k * k,
        (2, DofKind::Facet) => 8 * 3 * k * k * km,
        (2, DofKind::Volume) => 6 * k * k * km * km,
        (3, DofKind::Facet) => 8 * k.pow(3),
        (3, DofKind::Volume) => 4 * k.pow(3) * km,
        (4, DofKind::Volume) => k.pow(4),
        _ => 0,
    }
}

pub fn check_unisolvence(k: usize, s: usize) -> Result<UnisolvenceReport> {
    check_unisolvence_with(k, s, FacePairing::Standard)
}

pub fn check_unisolvence_with(k: usize, s: usize, pairing: FacePairing) -> Result<UnisolvenceReport> {
    let spec = SpaceSpec::new(k, s)?;
    let set = build_dofset_with(k, s, pairing)?;
    let basis = space_basis(spec);
    let m = gram_of(&set, &basis)?;
    let ratio = pivot_ratio(&m);
    let counts: Vec<KindCount> = DofKind::ALL
        .iter()
        .map(|&kind| KindCount {
            kind,
            count: set.count(kind),
            expected: expected_kind_count(k, s, kind),
        })
        .collect();
    let counts_ok = counts.iter().all(|c| c.count == c.expected) && set.len() == space_dim(spec);
    Ok(UnisolvenceReport {
        k,
        s,
        size: set.len(),
        pivot_ratio: ratio,
        pass: counts_ok && m.is_square() && ratio > PIVOT_THRESHOLD,
        counts,
    })
}
