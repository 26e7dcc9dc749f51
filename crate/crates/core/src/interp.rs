//! Facet traces, canonical interpolation, and the structural checks built on
//! them: commuting diagram, integration-by-parts identities, two-element
//! conformity and the Maxwell proxies.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DVector, Dyn, LU};
use serde::Serialize;

use crate::dofs::{
    build_dofset, dof_apply, dof_values, gram_of, pivot_ratio, DofFunctional, DofSet,
    PIVOT_THRESHOLD,
};
use crate::exterior::{
    apply_d, aux_curl, aux_div, cross_ss, cross_vs, cross_vv, curl4, div4, grad4, levi_civita,
    pair_slot, skw_grad, FormField, Skew4P, Vec4P,
};
use crate::geometry::{entity_quadrature, reference_topology, AffineMap, EntityChart};
use crate::pullback::{cross3, physical_frame, push_at};
use crate::rng::{random_field, random_poly, FieldRng};
use crate::spaces::{space_basis, BasisSet, SpaceSpec};
use crate::tensorpoly::TensorPoly4;
use crate::{Error, Result};

/// Trace of a form on a facet `{x_i = sigma}`. Components are polynomials
/// independent of `x_i`:
///
/// * `s = 0`: `[u]`
/// * `s = 1`: tangential components `[E_f]` for the free axes `f`
/// * `s = 2`: `n x F` on the free axes (the normal slot vanishes)
/// * `s = 3`: `[G . n]`
#[derive(Clone, Debug, PartialEq)]
pub struct TraceResult {
    pub facet: usize,
    pub s: usize,
    pub axis: usize,
    pub sign: f64,
    pub free: [usize; 3],
    pub comps: Vec<TensorPoly4>,
}

impl TraceResult {
    pub fn eval(&self, x: [f64; 4]) -> Vec<f64> {
        self.comps.iter().map(|p| p.eval(x)).collect()
    }
}

pub fn hyperplane_trace(f: &FormField, facet: usize) -> Result<TraceResult> {
    let chart = reference_topology().entity(3, facet)?;
    let (axis, sign) = chart.facet_axis().unwrap();
    let free: [usize; 3] = chart.free.clone().try_into().unwrap();
    let n = chart.normal().unwrap();
    let restrict = |p: &TensorPoly4| p.restrict(axis, sign);
    let comps = match f {
        FormField::Scalar0(u) => vec![restrict(u)],
        FormField::Vector1(e) => free.iter().map(|&a| restrict(&e.0[a])).collect(),
        FormField::Skew2(m) => {
            let nf = cross_vs(&Vec4P::constant(n), m);
            free.iter().map(|&a| restrict(&nf.0[a])).collect()
        }
        FormField::Vector3(g) => vec![restrict(&g.0[axis]).scale(sign)],
        FormField::Scalar4(_) => return Err(Error::UnsupportedFormDegree(4)),
    };
    Ok(TraceResult {
        facet,
        s: f.degree(),
        axis,
        sign,
        free,
        comps,
    })
}

/// Applies an edge or face functional through the trace on a facet that
/// contains its entity, rebuilding only the components the functional reads.
pub fn dof_via_facet(l: &DofFunctional, f: &FormField, facet: usize) -> Result<f64> {
    let topo = reference_topology();
    let chart = l.chart().ok_or_else(|| {
        Error::InvalidArgument("volume functionals have no facet".into())
    })?;
    let host = topo.entity(3, facet)?;
    if !host.contains(chart) || chart.dim == 3 {
        return Err(Error::InvalidEntity {
            kind: "facet",
            index: facet,
        });
    }
    let tr = hyperplane_trace(f, facet)?;
    let pos = |a: usize| tr.free.iter().position(|&g| g == a).unwrap();
    let mut comps = vec![TensorPoly4::zero(); f.components().len()];
    match l.s {
        0 => comps[0] = tr.comps[0].clone(),
        1 => {
            for &a in &chart.free {
                comps[a] = tr.comps[pos(a)].clone();
            }
        }
        2 => {
            let (a, b) = (chart.free[0], chart.free[1]);
            let third = *tr.free.iter().find(|&&g| g != a && g != b).unwrap();
            let eps = levi_civita(third, tr.axis, a, b);
            let (slot, _) = pair_slot(a, b).unwrap();
            comps[slot] = tr.comps[pos(third)].scale(1.0 / (2.0 * eps * tr.sign));
        }
        s => return Err(Error::UnsupportedFormDegree(s)),
    }
    dof_apply(l, &FormField::from_components(l.s, comps))
}

/// Basis, functionals and the factored Gram matrix of `V^{k,s}`.
pub struct FiniteElement {
    pub spec: SpaceSpec,
    pub basis: BasisSet,
    pub dofs: DofSet,
    pub pivot_ratio: f64,
    lu: LU<f64, Dyn, Dyn>,
}

impl FiniteElement {
    pub fn new(k: usize, s: usize) -> Result<Self> {
        let spec = SpaceSpec::new(k, s)?;
        let basis = space_basis(spec);
        let dofs = build_dofset(k, s)?;
        let m = gram_of(&dofs, &basis)?;
        let ratio = pivot_ratio(&m);
        if !m.is_square() || ratio <= PIVOT_THRESHOLD {
            return Err(Error::SingularGram { k, s });
        }
        Ok(Self {
            spec,
            basis,
            dofs,
            pivot_ratio: ratio,
            lu: m.lu(),
        })
    }

    /// Shared instance per `(k, s)`.
    pub fn cached(k: usize, s: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<FiniteElement>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(fe) = cache.lock().unwrap().get(&(k, s)) {
            return Ok(fe.clone());
        }
        let fe = Arc::new(Self::new(k, s)?);
        Ok(cache.lock().unwrap().entry((k, s)).or_insert(fe).clone())
    }

    /// Basis coefficients whose functionals take the given values.
    pub fn solve(&self, values: &[f64]) -> Result<Vec<f64>> {
        let rhs = DVector::from_column_slice(values);
        let c = self.lu.solve(&rhs).ok_or(Error::SingularGram {
            k: self.spec.k,
            s: self.spec.s,
        })?;
        Ok(c.iter().copied().collect())
    }

    pub fn interpolate(&self, target: &FormField) -> Result<Interpolant> {
        let values = dof_values(&self.dofs, target)?;
        let coeffs = self.solve(&values)?;
        let field = self.basis.combine(&coeffs);
        Ok(Interpolant {
            k: self.spec.k,
            s: self.spec.s,
            coeffs,
            dof_values: values,
            field,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Interpolant {
    pub k: usize,
    pub s: usize,
    pub coeffs: Vec<f64>,
    pub dof_values: Vec<f64>,
    pub field: FormField,
}

pub fn interpolate(k: usize, s: usize, target: &FormField) -> Result<Interpolant> {
    FiniteElement::cached(k, s)?.interpolate(target)
}

/// Largest coefficient of `a - b`.
pub fn coeff_distance(a: &FormField, b: &FormField) -> f64 {
    a.sub(b).max_abs_coeff()
}

#[derive(Clone, Debug, Serialize)]
pub struct CommuteReport {
    pub k: usize,
    pub s: usize,
    pub residual: f64,
    pub scale: f64,
}

/// `d(Pi^s p)` against `Pi^{s+1}(d p)`, coefficientwise.
pub fn commuting_check(k: usize, s: usize, p: &FormField) -> Result<CommuteReport> {
    if s > 3 {
        return Err(Error::UnsupportedFormDegree(s));
    }
    if p.degree() != s {
        return Err(Error::FormDegreeMismatch {
            expected: s,
            found: p.degree(),
        });
    }
    let lhs = apply_d(&interpolate(k, s, p)?.field)?;
    let dp = apply_d(p)?;
    let rhs = interpolate(k, s + 1, &dp)?.field;
    Ok(CommuteReport {
        k,
        s,
        residual: coeff_distance(&lhs, &rhs),
        scale: dp.max_abs_coeff().max(1.0),
    })
}

/// The six integration-by-parts trace identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IbpIdentity {
    #[serde(rename = "1A")]
    OneA,
    #[serde(rename = "1C")]
    OneC,
    #[serde(rename = "2A")]
    TwoA,
    #[serde(rename = "2C")]
    TwoC,
    #[serde(rename = "2D")]
    TwoD,
    #[serde(rename = "3")]
    Three,
}

impl IbpIdentity {
    pub const ALL: [IbpIdentity; 6] = [
        IbpIdentity::OneA,
        IbpIdentity::OneC,
        IbpIdentity::TwoA,
        IbpIdentity::TwoC,
        IbpIdentity::TwoD,
        IbpIdentity::Three,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            IbpIdentity::OneA => "1A",
            IbpIdentity::OneC => "1C",
            IbpIdentity::TwoA => "2A",
            IbpIdentity::TwoC => "2C",
            IbpIdentity::TwoD => "2D",
            IbpIdentity::Three => "3",
        }
    }

    /// Form degrees of the two arguments.
    pub fn argument_degrees(self) -> (usize, usize) {
        match self {
            IbpIdentity::OneA | IbpIdentity::OneC => (1, 2),
            IbpIdentity::TwoA | IbpIdentity::TwoC | IbpIdentity::TwoD => (2, 1),
            IbpIdentity::Three => (3, 0),
        }
    }
}

impl FromStr for IbpIdentity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IbpIdentity::ALL
            .into_iter()
            .find(|id| id.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IbpReport {
    pub which: IbpIdentity,
    pub boundary: f64,
    pub volume: f64,
    pub residual: f64,
    pub scale: f64,
}

fn integrate_facet(p: &TensorPoly4, chart: &EntityChart) -> Result<f64> {
    let d = chart.free.iter().map(|&a| p.degrees()[a]).max().unwrap_or(0);
    Ok(entity_quadrature(chart, d.max(1))?.integrate_poly(p))
}

/// Boundary side minus volume side of one identity. For `1A`/`1C` the
/// arguments are `(E, F)`, for `2A`/`2C`/`2D` `(F or M, E)`, for `3`
/// `(G, u)`.
pub fn ibp_identity_check(which: IbpIdentity, a: &FormField, b: &FormField) -> Result<IbpReport> {
    let (sa, sb) = which.argument_degrees();
    for (f, s) in [(a, sa), (b, sb)] {
        if f.degree() != s {
            return Err(Error::FormDegreeMismatch {
                expected: s,
                found: f.degree(),
            });
        }
    }
    let vec = |f: &FormField| match f {
        FormField::Vector1(v) | FormField::Vector3(v) => v.clone(),
        _ => unreachable!(),
    };
    let skew = |f: &FormField| match f {
        FormField::Skew2(m) => m.clone(),
        _ => unreachable!(),
    };
    let scalar = |f: &FormField| match f {
        FormField::Scalar0(u) => u.clone(),
        _ => unreachable!(),
    };

    let boundary_integrand = |n: [f64; 4]| -> TensorPoly4 {
        let nv = Vec4P::constant(n);
        match which {
            IbpIdentity::OneA => cross_vv(&nv, &vec(a)).frobenius(&skew(b)),
            IbpIdentity::OneC => vec(a).dot(&skew(b).mul_const_vec(n)),
            IbpIdentity::TwoA => cross_vs(&nv, &skew(a)).dot(&vec(b)),
            IbpIdentity::TwoC | IbpIdentity::TwoD => skew(a).mul_const_vec(n).dot(&vec(b)),
            IbpIdentity::Three => &vec(a).dot(&nv) * &scalar(b),
        }
    };
    let volume_integrand = match which {
        IbpIdentity::OneA => {
            let (e, f) = (vec(a), skew(b));
            &aux_curl(&e).frobenius(&f) - &curl4(&f).dot(&e)
        }
        IbpIdentity::OneC => {
            let (e, f) = (vec(a), skew(b));
            &aux_div(&f).dot(&e) - &f.frobenius(&skw_grad(&e))
        }
        IbpIdentity::TwoA => {
            let (f, e) = (skew(a), vec(b));
            &curl4(&f).dot(&e) - &aux_curl(&e).frobenius(&f)
        }
        IbpIdentity::TwoC => {
            let (m, e) = (skew(a), vec(b));
            &aux_div(&m).dot(&e) - &m.frobenius(&skw_grad(&e))
        }
        IbpIdentity::TwoD => {
            let (m, e) = (skew(a), vec(b));
            &aux_div(&m).dot(&e) - &cross_ss(&m, &aux_curl(&e))
        }
        IbpIdentity::Three => {
            let (g, u) = (vec(a), scalar(b));
            &(&div4(&g) * &u) + &g.dot(&grad4(&u))
        }
    };

    let mut boundary = 0.0;
    let mut magnitude = 0.0f64;
    for chart in &reference_topology().facets {
        let v = integrate_facet(&boundary_integrand(chart.normal().unwrap()), chart)?;
        boundary += v;
        magnitude = magnitude.max(v.abs());
    }
    let volume = volume_integrand.integrate_exact();
    Ok(IbpReport {
        which,
        boundary,
        volume,
        residual: (boundary - volume).abs(),
        scale: magnitude.max(volume.abs()).max(1.0),
    })
}

/// Random argument pair for an identity, every component of per-axis
/// degree `degree`.
pub fn random_ibp_fields(which: IbpIdentity, rng: &mut FieldRng, degree: usize) -> (FormField, FormField) {
    let (sa, sb) = which.argument_degrees();
    (random_field(rng, sa, degree), random_field(rng, sb, degree))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConformityReport {
    pub k: usize,
    pub s: usize,
    pub facet_a: usize,
    pub facet_b: usize,
    pub shared_dofs: usize,
    pub max_mismatch: f64,
    pub pass: bool,
}

/// Finds facets `{x_i = sigma}` of A and `{x_i = -sigma}` of B whose images
/// coincide pointwise, i.e. `phi_A(x) = phi_B(x - 2 sigma e_i)` there.
pub fn shared_facet(a: &AffineMap, b: &AffineMap) -> Result<(usize, usize)> {
    let topo = reference_topology();
    let close = |p: [f64; 4], q: [f64; 4]| (0..4).all(|i| (p[i] - q[i]).abs() < 1e-12 * (1.0 + p[i].abs()));
    for fa in &topo.facets {
        let (i, sigma) = fa.facet_axis().unwrap();
        let matches = fa.vertices.iter().all(|&v| {
            let x = crate::geometry::REFERENCE_VERTICES[v];
            let mut xb = x;
            xb[i] -= 2.0 * sigma;
            close(a.apply(x), b.apply(xb))
        });
        if matches {
            return Ok((fa.index, crate::geometry::facet_index(i, -sigma)));
        }
    }
    Err(Error::NoSharedFacet)
}

/// Functionals of one element living on the closure of `facet`, paired with
/// the matching functional of the neighbour across it.
fn shared_dof_pairs(set: &DofSet, facet_a: usize, facet_b: usize) -> Vec<(usize, usize)> {
    let topo = reference_topology();
    let fa = &topo.facets[facet_a];
    let fb = &topo.facets[facet_b];
    let (axis, _) = fa.facet_axis().unwrap();
    let (_, sign_b) = fb.facet_axis().unwrap();
    let mut pairs = Vec::new();
    for (ia, la) in set.dofs.iter().enumerate() {
        let Some(ca) = la.chart() else { continue };
        if !fa.contains(ca) {
            continue;
        }
        let frozen_b: Vec<(usize, f64)> = ca
            .frozen
            .iter()
            .map(|&(a, v)| if a == axis { (a, sign_b) } else { (a, v) })
            .collect();
        let ib = set
            .dofs
            .iter()
            .position(|lb| {
                lb.kind == la.kind
                    && lb.slot == la.slot
                    && lb.test == la.test
                    && lb.chart().is_some_and(|cb| cb.frozen == frozen_b)
            })
            .expect("neighbour functional exists");
        pairs.push((ia, ib));
    }
    pairs
}

/// Builds fields on two elements that agree on all functionals of their
/// shared facet (the rest random) and compares their physical traces at
/// 20 random interface points.
pub fn conformity_pair_check(
    k: usize,
    s: usize,
    map_a: &AffineMap,
    map_b: &AffineMap,
    rng: &mut FieldRng,
    tol: f64,
) -> Result<ConformityReport> {
    conformity_pair_check_with(k, s, map_a, map_b, rng, tol, true)
}

/// As [`conformity_pair_check`]; with `share = false` the neighbour keeps
/// independent values on the shared functionals.
pub fn conformity_pair_check_with(
    k: usize,
    s: usize,
    map_a: &AffineMap,
    map_b: &AffineMap,
    rng: &mut FieldRng,
    tol: f64,
    share: bool,
) -> Result<ConformityReport> {
    use rand::Rng;
    if s > 3 {
        return Err(Error::UnsupportedFormDegree(s));
    }
    let (facet_a, facet_b) = shared_facet(map_a, map_b)?;
    let fe = FiniteElement::cached(k, s)?;
    let pairs = shared_dof_pairs(&fe.dofs, facet_a, facet_b);
    let n = fe.dofs.len();
    let va: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let mut vb: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    if share {
        for &(ia, ib) in &pairs {
            vb[ib] = va[ia];
        }
    }
    let ref_a = fe.basis.combine(&fe.solve(&va)?);
    let ref_b = fe.basis.combine(&fe.solve(&vb)?);

    let topo = reference_topology();
    let chart_a = &topo.facets[facet_a];
    let free = chart_a.free.clone();
    let frame = physical_frame(&map_a.to_tesseract_map().vertices);
    let quantities = |vals: &[f64]| -> Vec<f64> {
        let v4 = |v: &[f64]| [v[0], v[1], v[2], v[3]];
        match s {
            0 => vec![vals[0]],
            1 => free.iter().map(|&f| dot4(v4(vals), frame[f])).collect(),
            2 => {
                let m = crate::exterior::lmap(vals.try_into().unwrap());
                [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .map(|&(p, q)| {
                        let (g, h) = (free[p], free[q]);
                        (0..4)
                            .flat_map(|i| (0..4).map(move |j| (i, j)))
                            .map(|(i, j)| frame[g][i] * m[i][j] * frame[h][j])
                            .sum()
                    })
                    .collect()
            }
            _ => vec![dot4(v4(vals), cross3(frame[free[0]], frame[free[1]], frame[free[2]]))],
        }
    };

    let chart_b = &topo.facets[facet_b];
    let mut diff = 0.0f64;
    let mut scale = 1.0f64;
    for _ in 0..20 {
        let t: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let (xa, xb) = (chart_a.embed(&t), chart_b.embed(&t));
        let qa = quantities(&push_at(&ref_a, map_a, xa)?);
        let qb = quantities(&push_at(&ref_b, map_b, xb)?);
        for (u, v) in qa.iter().zip(&qb) {
            diff = diff.max((u - v).abs());
            scale = scale.max(u.abs()).max(v.abs());
        }
    }
    let worst = diff / scale;
    Ok(ConformityReport {
        k,
        s,
        facet_a,
        facet_b,
        shared_dofs: pairs.len(),
        max_mismatch: worst,
        pass: worst < tol,
    })
}

fn dot4(a: [f64; 4], b: [f64; 4]) -> f64 {
    (0..4).map(|i| a[i] * b[i]).sum()
}

/// Electromagnetic proxies on space-time `(t, x, y, z)`.
#[derive(Clone, Debug)]
pub struct MaxwellFields {
    /// Maxwell 2-form proxy.
    pub f: Skew4P,
    /// Faraday 2-form proxy.
    pub h: Skew4P,
    /// Source 3-form proxy `-(rho, j)`.
    pub g: Vec4P,
}

pub fn maxwell_fields(
    e: &[TensorPoly4; 3],
    b: &[TensorPoly4; 3],
    rho: &TensorPoly4,
    j: &[TensorPoly4; 3],
    c: f64,
) -> MaxwellFields {
    let h = |p: &TensorPoly4, a: f64| p.scale(0.5 * a);
    let f = Skew4P([
        h(&b[0], -c),
        h(&b[1], -c),
        h(&b[2], -c),
        h(&e[2], -1.0),
        h(&e[1], 1.0),
        h(&e[0], -1.0),
    ]);
    let hh = Skew4P([
        h(&e[0], -c),
        h(&e[1], -c),
        h(&e[2], -c),
        h(&b[2], 1.0),
        h(&b[1], -1.0),
        h(&b[0], 1.0),
    ]);
    let g = Vec4P([rho.scale(-1.0), j[0].scale(-1.0), j[1].scale(-1.0), j[2].scale(-1.0)]);
    MaxwellFields { f, h: hh, g }
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxwellReport {
    /// Largest coefficient of `div(curl F)`.
    pub div_curl_f: f64,
    /// Largest coefficient of `div(G')` with `G' = curl F / (4 pi)`.
    pub div_g_prime: f64,
    /// Largest coefficient of `curl F - 4 pi G`.
    pub source_residual: f64,
    /// Largest coefficient of `curl H`.
    pub curl_h: f64,
}

pub fn maxwell_demo(
    e: &[TensorPoly4; 3],
    b: &[TensorPoly4; 3],
    rho: &TensorPoly4,
    j: &[TensorPoly4; 3],
    c: f64,
) -> MaxwellReport {
    let m = maxwell_fields(e, b, rho, j, c);
    let four_pi = 4.0 * std::f64::consts::PI;
    let curl_f = curl4(&m.f);
    let g_prime = curl_f.scale(1.0 / four_pi);
    let max = |v: &Vec4P| v.0.iter().fold(0.0f64, |a, p| a.max(p.max_abs_coeff()));
    MaxwellReport {
        div_curl_f: div4(&curl_f).max_abs_coeff(),
        div_g_prime: div4(&g_prime).max_abs_coeff(),
        source_residual: max(&curl_f.sub(&m.g.scale(four_pi))),
        curl_h: max(&curl4(&m.h)),
    }
}

/// Random `(E, B, rho, j)` with per-axis degree `degree`.
pub fn random_maxwell_inputs(
    rng: &mut FieldRng,
    degree: usize,
) -> ([TensorPoly4; 3], [TensorPoly4; 3], TensorPoly4, [TensorPoly4; 3]) {
    let mut p = || random_poly(rng, [degree; 4]);
    let e = [p(), p(), p()];
    let b = [p(), p(), p()];
    let rho = p();
    let j = [p(), p(), p()];
    (e, b, rho, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::facet_index;

    fn x(a: usize) -> TensorPoly4 {
        TensorPoly4::coordinate(a)
    }

    #[test]
    fn trace_examples() {
        let top = facet_index(3, 1.0);
        let g = FormField::Vector3(Vec4P([
            TensorPoly4::zero(),
            TensorPoly4::zero(),
            TensorPoly4::zero(),
            x(3),
        ]));
        let t = hyperplane_trace(&g, top).unwrap();
        assert_eq!(t.eval([0.2, 0.1, -0.5, 0.0]), vec![1.0]);

        let u = FormField::Scalar0(&x(0) + &x(3));
        let t = hyperplane_trace(&u, facet_index(3, -1.0)).unwrap();
        assert_eq!(t.comps[0].trimmed(), (&x(0) - &TensorPoly4::constant(1.0)).trimmed());

        let f = FormField::Skew2(Skew4P::constant([0.0, 0.0, 0.0, 1.0, 0.0, 0.0]));
        let t = hyperplane_trace(&f, top).unwrap();
        assert_eq!(t.eval([0.0; 4]), vec![2.0, 0.0, 0.0]);

        let q = FormField::Scalar4(TensorPoly4::constant(1.0));
        assert!(hyperplane_trace(&q, top).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let target = FormField::Scalar0(&(&x(0) * &x(1)) * &(&x(2) * &x(3)));
        let i = interpolate(1, 0, &target).unwrap();
        assert!(coeff_distance(&i.field, &target) < 1e-12);
        let zero = interpolate(2, 2, &FormField::zero(2)).unwrap();
        assert!(zero.coeffs.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn commuting_quadratic_scalar() {
        let p = FormField::Scalar0(&x(0) * &x(0));
        let r = commuting_check(1, 0, &p).unwrap();
        assert!(r.residual < 1e-12, "{r:?}");
    }

    #[test]
    fn ibp_examples() {
        let g = FormField::Vector3(Vec4P([
            TensorPoly4::zero(),
            TensorPoly4::zero(),
            TensorPoly4::zero(),
            x(3),
        ]));
        let u = FormField::Scalar0(TensorPoly4::constant(1.0));
        let r = ibp_identity_check(IbpIdentity::Three, &g, &u).unwrap();
        assert!((r.boundary - 16.0).abs() < 1e-13 && (r.volume - 16.0).abs() < 1e-13);
        let r = ibp_identity_check(IbpIdentity::OneA, &FormField::zero(1), &FormField::zero(2)).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!("4Z".parse::<IbpIdentity>().is_err());
        assert_eq!("2d".parse::<IbpIdentity>().unwrap(), IbpIdentity::TwoD);
    }

    #[test]
    fn maxwell_uniform_b() {
        let z = TensorPoly4::zero;
        let e = [z(), z(), z()];
        let b = [TensorPoly4::constant(1.0), z(), z()];
        let r = maxwell_demo(&e, &b, &z(), &[z(), z(), z()], 1.0);
        assert_eq!(r.div_curl_f, 0.0);
        assert_eq!(r.source_residual, 0.0);
    }
}
