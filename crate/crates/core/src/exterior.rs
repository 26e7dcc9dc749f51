//! Multilinear algebra in four dimensions: skew proxies through the L map,
//! Levi-Civita contractions, the form proxies and the first-order operators
//! `grad`, `skwGrad`, `curl`, `div`, `Curl` and `Div`.
//!
//! A [`Skew4P`] stores the six upper-triangle entries `(w12, w13, w14, w23,
//! w24, w34)` of a skew 4x4 matrix. The factor `1/2` that appears when a
//! 2-form is converted to its proxy is applied only in [`upsilon`] and
//! [`upsilon_inv`].

use std::sync::OnceLock;

use crate::tensorpoly::TensorPoly4;
use crate::{Error, Result};

/// Index pairs `(i, j)`, `i < j`, in L-map order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot of the unordered pair `{i, j}` in L-map order together with the sign
/// of entry `(i, j)`; `None` on the diagonal.
pub fn pair_slot(i: usize, j: usize) -> Option<(usize, f64)> {
    if i == j {
        return None;
    }
    let (a, b, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
    let slot = PAIRS.iter().position(|&p| p == (a, b)).unwrap();
    Some((slot, sign))
}

/// All 24 permutations of `(0,1,2,3)` with their signs.
pub fn levi_civita_terms() -> &'static [([usize; 4], f64)] {
    static TERMS: OnceLock<Vec<([usize; 4], f64)>> = OnceLock::new();
    TERMS.get_or_init(|| {
        let mut out = Vec::with_capacity(24);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let p = [i, j, k, l];
                        let distinct = (0..4).all(|a| (a + 1..4).all(|b| p[a] != p[b]));
                        if !distinct {
                            continue;
                        }
                        let inversions = (0..4)
                            .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
                            .filter(|&(a, b)| p[a] > p[b])
                            .count();
                        out.push((p, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
        out
    })
}

/// `eps_{ijkl}` for 0-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize, l: usize) -> f64 {
    levi_civita_terms()
        .iter()
        .find(|(p, _)| *p == [i, j, k, l])
        .map_or(0.0, |t| t.1)
}

/// The L map on numbers.
pub fn lmap(w: [f64; 6]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (s, &(i, j)) in PAIRS.iter().enumerate() {
        m[i][j] = w[s];
        m[j][i] = -w[s];
    }
    m
}

/// Inverse of [`lmap`]; reads the upper triangle.
pub fn lmap_inv(m: &[[f64; 4]; 4]) -> [f64; 6] {
    PAIRS.map(|(i, j)| m[i][j])
}

/// 4-vector of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Vec4P(pub [TensorPoly4; 4]);

/// Skew 4x4 matrix of polynomials stored through the L map.
#[derive(Clone, Debug, PartialEq)]
pub struct Skew4P(pub [TensorPoly4; 6]);

impl Vec4P {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| TensorPoly4::zero()))
    }

    pub fn constant(c: [f64; 4]) -> Self {
        Self(c.map(TensorPoly4::constant))
    }

    pub fn eval(&self, x: [f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| self.0[i].eval(x))
    }

    pub fn scale(&self, a: f64) -> Self {
        Self(std::array::from_fn(|i| self.0[i].scale(a)))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn dot(&self, o: &Self) -> TensorPoly4 {
        (0..4).fold(TensorPoly4::zero(), |acc, i| &acc + &(&self.0[i] * &o.0[i]))
    }
}

impl Skew4P {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| TensorPoly4::zero()))
    }

    pub fn from_slots(w: [TensorPoly4; 6]) -> Self {
        Self(w)
    }

    pub fn constant(w: [f64; 6]) -> Self {
        Self(w.map(TensorPoly4::constant))
    }

    /// Builds the skew matrix whose `(i, j)` entry for `i < j` is `f(i, j)`.
    pub fn from_upper(f: impl Fn(usize, usize) -> TensorPoly4) -> Self {
        Self(PAIRS.map(|(i, j)| f(i, j)))
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn entry(&self, i: usize, j: usize) -> TensorPoly4 {
        match pair_slot(i, j) {
            None => TensorPoly4::zero(),
            Some((s, sign)) if sign > 0.0 => self.0[s].clone(),
            Some((s, _)) => -&self.0[s],
        }
    }

    /// Full matrix at a point.
    pub fn full_at(&self, x: [f64; 4]) -> [[f64; 4]; 4] {
        lmap(std::array::from_fn(|s| self.0[s].eval(x)))
    }

    pub fn scale(&self, a: f64) -> Self {
        Self(std::array::from_fn(|i| self.0[i].scale(a)))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    /// Full contraction `A : B = sum_ij A_ij B_ij`.
    pub fn frobenius(&self, o: &Self) -> TensorPoly4 {
        (0..6).fold(TensorPoly4::zero(), |acc, s| {
            &acc + &(&self.0[s] * &o.0[s]).scale(2.0)
        })
    }

    /// Matrix-vector product `M n` for a constant vector `n`.
    pub fn mul_const_vec(&self, n: [f64; 4]) -> Vec4P {
        Vec4P(std::array::from_fn(|i| {
            (0..4).fold(TensorPoly4::zero(), |acc, j| {
                if n[j] == 0.0 {
                    acc
                } else {
                    &acc + &self.entry(i, j).scale(n[j])
                }
            })
        }))
    }
}

/// Number of components of an s-form: `C(4, s)`.
pub fn component_count(s: usize) -> usize {
    [1, 4, 6, 4, 1][s]
}

/// Increasing multi-indices of length `s` in lexicographic order.
pub fn multi_indices(s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..4 {
            cur.push(i);
            rec(i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, s, &mut Vec::new(), &mut out);
    out
}

/// Proxy of an s-form with polynomial components.
#[derive(Clone, Debug, PartialEq)]
pub enum FormField {
    Scalar0(TensorPoly4),
    Vector1(Vec4P),
    Skew2(Skew4P),
    Vector3(Vec4P),
    Scalar4(TensorPoly4),
}

impl FormField {
    pub fn degree(&self) -> usize {
        match self {
            FormField::Scalar0(_) => 0,
            FormField::Vector1(_) => 1,
            FormField::Skew2(_) => 2,
            FormField::Vector3(_) => 3,
            FormField::Scalar4(_) => 4,
        }
    }

    pub fn zero(s: usize) -> Self {
        Self::from_components(s, vec![TensorPoly4::zero(); component_count(s)])
    }

    /// Builds a field from its stored components (1, 4, 6, 4 or 1 of them).
    pub fn from_components(s: usize, comps: Vec<TensorPoly4>) -> Self {
        assert_eq!(comps.len(), component_count(s), "component count for s={s}");
        let arr4 = |c: Vec<TensorPoly4>| -> [TensorPoly4; 4] { c.try_into().unwrap() };
        match s {
            0 => FormField::Scalar0(comps.into_iter().next().unwrap()),
            1 => FormField::Vector1(Vec4P(arr4(comps))),
            2 => FormField::Skew2(Skew4P(comps.try_into().unwrap())),
            3 => FormField::Vector3(Vec4P(arr4(comps))),
            4 => FormField::Scalar4(comps.into_iter().next().unwrap()),
            _ => panic!("form degree {s} out of range"),
        }
    }

    pub fn components(&self) -> Vec<&TensorPoly4> {
        match self {
            FormField::Scalar0(p) | FormField::Scalar4(p) => vec![p],
            FormField::Vector1(v) | FormField::Vector3(v) => v.0.iter().collect(),
            FormField::Skew2(m) => m.0.iter().collect(),
        }
    }

    pub fn into_components(self) -> Vec<TensorPoly4> {
        match self {
            FormField::Scalar0(p) | FormField::Scalar4(p) => vec![p],
            FormField::Vector1(v) | FormField::Vector3(v) => v.0.into(),
            FormField::Skew2(m) => m.0.into(),
        }
    }

    pub fn map_components(&self, f: impl Fn(&TensorPoly4) -> TensorPoly4) -> Self {
        Self::from_components(self.degree(), self.components().into_iter().map(f).collect())
    }

    /// Stored components at a point.
    pub fn eval(&self, x: [f64; 4]) -> Vec<f64> {
        self.components().iter().map(|p| p.eval(x)).collect()
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map_components(|p| p.scale(a))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree(), o.degree());
        let comps = self
            .components()
            .into_iter()
            .zip(o.components())
            .map(|(a, b)| a + b)
            .collect();
        Self::from_components(self.degree(), comps)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.components()
            .iter()
            .fold(0.0, |m, p| m.max(p.max_abs_coeff()))
    }

    /// Largest per-axis degree over all components.
    pub fn max_axis_degree(&self) -> usize {
        self.components()
            .iter()
            .flat_map(|p| p.degrees())
            .max()
            .unwrap_or(0)
    }

    pub fn trimmed(&self) -> Self {
        self.map_components(TensorPoly4::trimmed)
    }
}

/// Coefficient functions of an s-form on increasing multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffForm {
    pub s: usize,
    pub comps: Vec<TensorPoly4>,
}

impl CoeffForm {
    pub fn new(s: usize, comps: Vec<TensorPoly4>) -> Result<Self> {
        if s > 4 || comps.len() != component_count(s) {
            return Err(Error::InvalidArgument(format!(
                "{}-form needs {} coefficients, got {}",
                s,
                component_count(s.min(4)),
                comps.len()
            )));
        }
        Ok(Self { s, comps })
    }

    pub fn zero(s: usize) -> Self {
        Self {
            s,
            comps: vec![TensorPoly4::zero(); component_count(s)],
        }
    }

    /// Coefficient on the sorted multi-index `idx`.
    pub fn get(&self, idx: &[usize]) -> &TensorPoly4 {
        let pos = multi_indices(self.s).iter().position(|m| m == idx).unwrap();
        &self.comps[pos]
    }
}

/// Form-to-proxy conversion.
pub fn upsilon(f: &CoeffForm) -> FormField {
    let c = &f.comps;
    match f.s {
        0 => FormField::Scalar0(c[0].clone()),
        1 => FormField::Vector1(Vec4P([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()])),
        2 => FormField::Skew2(Skew4P(std::array::from_fn(|s| c[s].scale(0.5)))),
        // multi-index order: 123, 124, 134, 234
        3 => FormField::Vector3(Vec4P([c[3].clone(), -&c[2], c[1].clone(), -&c[0]])),
        4 => FormField::Scalar4(c[0].clone()),
        _ => unreachable!(),
    }
}

/// Proxy-to-form conversion, the exact inverse of [`upsilon`].
pub fn upsilon_inv(f: &FormField) -> CoeffForm {
    let comps = match f {
        FormField::Scalar0(p) | FormField::Scalar4(p) => vec![p.clone()],
        FormField::Vector1(v) => v.0.to_vec(),
        FormField::Skew2(m) => m.0.iter().map(|p| p.scale(2.0)).collect(),
        FormField::Vector3(v) => vec![-&v.0[3], v.0[2].clone(), -&v.0[1], v.0[0].clone()],
    };
    CoeffForm { s: f.degree(), comps }
}

/// Exterior derivative on coefficient functions, by sorting `dx^j ^ dx^I`.
pub fn exterior_derivative(f: &CoeffForm) -> Result<CoeffForm> {
    if f.s >= 4 {
        return Err(Error::UnsupportedFormDegree(f.s));
    }
    let src = multi_indices(f.s);
    let dst = multi_indices(f.s + 1);
    let mut out = CoeffForm::zero(f.s + 1);
    for (idx, coeff) in src.iter().zip(&f.comps) {
        for j in 0..4 {
            if idx.contains(&j) {
                continue;
            }
            // moving dx^j past the smaller indices of I
            let swaps = idx.iter().filter(|&&i| i < j).count();
            let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
            let mut merged = idx.clone();
            merged.push(j);
            merged.sort_unstable();
            let pos = dst.iter().position(|m| *m == merged).unwrap();
            out.comps[pos] = &out.comps[pos] + &coeff.diff(j).scale(sign);
        }
    }
    Ok(out)
}

/// `[grad u]_i = d_i u`.
pub fn grad4(u: &TensorPoly4) -> Vec4P {
    Vec4P(std::array::from_fn(|i| u.diff(i)))
}

/// `skwGrad E = (Grad E^T - Grad E) / 2` with `[Grad E]_ij = d_j E_i`.
pub fn skw_grad(e: &Vec4P) -> Skew4P {
    Skew4P::from_upper(|i, j| (&e.0[j].diff(i) - &e.0[i].diff(j)).scale(0.5))
}

/// `[curl F]_i = sum eps_ijkl d_j F_kl`.
pub fn curl4(f: &Skew4P) -> Vec4P {
    let mut out = Vec4P::zero();
    for &([i, j, k, l], sign) in levi_civita_terms() {
        out.0[i] = &out.0[i] + &f.entry(k, l).diff(j).scale(sign);
    }
    out
}

/// `div G = sum_i d_i G_i`.
pub fn div4(g: &Vec4P) -> TensorPoly4 {
    (0..4).fold(TensorPoly4::zero(), |acc, i| &acc + &g.0[i].diff(i))
}

/// `[Curl E]_ij = sum eps_ijkl d_k E_l`.
pub fn aux_curl(e: &Vec4P) -> Skew4P {
    let mut out = Skew4P::zero();
    for &([i, j, k, l], sign) in levi_civita_terms() {
        if i < j {
            let (s, _) = pair_slot(i, j).unwrap();
            out.0[s] = &out.0[s] + &e.0[l].diff(k).scale(sign);
        }
    }
    out
}

/// `[Div F]_i = sum_j d_j F_ij`.
pub fn aux_div(f: &Skew4P) -> Vec4P {
    Vec4P(std::array::from_fn(|i| {
        (0..4).fold(TensorPoly4::zero(), |acc, j| &acc + &f.entry(i, j).diff(j))
    }))
}

/// `[M x N]_ij = sum eps_ijkl M_k N_l`.
pub fn cross_vv(m: &Vec4P, n: &Vec4P) -> Skew4P {
    let mut out = Skew4P::zero();
    for &([i, j, k, l], sign) in levi_civita_terms() {
        if i < j {
            let (s, _) = pair_slot(i, j).unwrap();
            out.0[s] = &out.0[s] + &(&m.0[k] * &n.0[l]).scale(sign);
        }
    }
    out
}

/// `[M x U]_i = sum eps_ijkl M_j U_kl`.
pub fn cross_vs(m: &Vec4P, u: &Skew4P) -> Vec4P {
    let mut out = Vec4P::zero();
    for &([i, j, k, l], sign) in levi_civita_terms() {
        out.0[i] = &out.0[i] + &(&m.0[j] * &u.entry(k, l)).scale(sign);
    }
    out
}

/// `U x V = sum_{i<j, k<l} eps_ijkl U_ij V_kl`.
pub fn cross_ss(u: &Skew4P, v: &Skew4P) -> TensorPoly4 {
    let mut out = TensorPoly4::zero();
    for &([i, j, k, l], sign) in levi_civita_terms() {
        if i < j && k < l {
            out = &out + &(&u.entry(i, j) * &v.entry(k, l)).scale(sign);
        }
    }
    out
}

/// The s-th operator of the complex: grad, skwGrad, curl, div.
pub fn apply_d(f: &FormField) -> Result<FormField> {
    Ok(match f {
        FormField::Scalar0(u) => FormField::Vector1(grad4(u)),
        FormField::Vector1(e) => FormField::Skew2(skw_grad(e)),
        FormField::Skew2(m) => FormField::Vector3(curl4(m)),
        FormField::Vector3(g) => FormField::Scalar4(div4(g)),
        FormField::Scalar4(_) => return Err(Error::UnsupportedFormDegree(4)),
    })
}
