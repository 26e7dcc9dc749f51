//! Independent oracles shared by the integration tests: operator formulas
//! written out component by component, and central differences.

#![allow(dead_code)]

use feec4d::exterior::{Skew4P, Vec4P};
use feec4d::tensorpoly::TensorPoly4;

/// Slot order `(0,1) (0,2) (0,3) (1,2) (1,3) (2,3)`; `dual(p)` is the slot of
/// the complementary pair and `DUAL_SIGN[p]` the sign of the permutation
/// `(pair, complement)`.
pub const DUAL_SIGN: [f64; 6] = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0];
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn dual(p: usize) -> usize {
    5 - p
}

/// For each `i`, the three `(j, slot(k,l), eps_ijkl)` with `k < l`.
pub const CURL_TABLE: [[(usize, usize, f64); 3]; 4] = [
    [(1, 5, 1.0), (2, 4, -1.0), (3, 3, 1.0)],
    [(0, 5, -1.0), (2, 2, 1.0), (3, 1, -1.0)],
    [(0, 4, 1.0), (1, 2, -1.0), (3, 0, 1.0)],
    [(0, 3, -1.0), (1, 1, 1.0), (2, 0, -1.0)],
];

fn lin(terms: &[(f64, TensorPoly4)]) -> TensorPoly4 {
    terms
        .iter()
        .fold(TensorPoly4::zero(), |acc, (c, p)| &acc + &p.scale(*c))
}

pub fn entry(f: &Skew4P, i: usize, j: usize) -> TensorPoly4 {
    match i.cmp(&j) {
        std::cmp::Ordering::Equal => TensorPoly4::zero(),
        std::cmp::Ordering::Less => f.0[PAIRS.iter().position(|&p| p == (i, j)).unwrap()].clone(),
        std::cmp::Ordering::Greater => f.0[PAIRS.iter().position(|&p| p == (j, i)).unwrap()].scale(-1.0),
    }
}

pub fn grad(u: &TensorPoly4) -> Vec4P {
    Vec4P([u.diff(0), u.diff(1), u.diff(2), u.diff(3)])
}

pub fn skw_grad(e: &Vec4P) -> Skew4P {
    let s = |i: usize, j: usize| (&e.0[j].diff(i) - &e.0[i].diff(j)).scale(0.5);
    Skew4P([s(0, 1), s(0, 2), s(0, 3), s(1, 2), s(1, 3), s(2, 3)])
}

pub fn curl(f: &Skew4P) -> Vec4P {
    Vec4P(std::array::from_fn(|i| {
        let t: Vec<_> = CURL_TABLE[i]
            .iter()
            .map(|&(j, p, e)| (2.0 * e, f.0[p].diff(j)))
            .collect();
        lin(&t)
    }))
}

pub fn div(g: &Vec4P) -> TensorPoly4 {
    lin(&[
        (1.0, g.0[0].diff(0)),
        (1.0, g.0[1].diff(1)),
        (1.0, g.0[2].diff(2)),
        (1.0, g.0[3].diff(3)),
    ])
}

pub fn aux_curl(e: &Vec4P) -> Skew4P {
    Skew4P(std::array::from_fn(|p| {
        let (c, d) = PAIRS[dual(p)];
        (&e.0[d].diff(c) - &e.0[c].diff(d)).scale(DUAL_SIGN[p])
    }))
}

pub fn aux_div(f: &Skew4P) -> Vec4P {
    Vec4P(std::array::from_fn(|i| {
        let t: Vec<_> = (0..4).map(|j| (1.0, entry(f, i, j).diff(j))).collect();
        lin(&t)
    }))
}

pub fn cross_vv(m: &Vec4P, n: &Vec4P) -> Skew4P {
    Skew4P(std::array::from_fn(|p| {
        let (c, d) = PAIRS[dual(p)];
        (&(&m.0[c] * &n.0[d]) - &(&m.0[d] * &n.0[c])).scale(DUAL_SIGN[p])
    }))
}

pub fn cross_vs(m: &Vec4P, u: &Skew4P) -> Vec4P {
    Vec4P(std::array::from_fn(|i| {
        let t: Vec<_> = CURL_TABLE[i]
            .iter()
            .map(|&(j, p, e)| (2.0 * e, &m.0[j] * &u.0[p]))
            .collect();
        lin(&t)
    }))
}

pub fn cross_ss(u: &Skew4P, v: &Skew4P) -> TensorPoly4 {
    let t: Vec<_> = (0..6)
        .map(|p| (DUAL_SIGN[p], &u.0[p] * &v.0[dual(p)]))
        .collect();
    lin(&t)
}

pub const FD_STEP: f64 = 1e-4;

/// Central difference of `p` along `axis` at `x`.
pub fn fd(p: &TensorPoly4, axis: usize, x: [f64; 4]) -> f64 {
    let mut a = x;
    let mut b = x;
    a[axis] += FD_STEP;
    b[axis] -= FD_STEP;
    (p.eval(a) - p.eval(b)) / (2.0 * FD_STEP)
}

pub fn fd_entry(f: &Skew4P, i: usize, j: usize, axis: usize, x: [f64; 4]) -> f64 {
    fd(&entry(f, i, j), axis, x)
}

/// Largest coefficient difference over the larger of 1 and the largest
/// coefficient of either side.
pub fn rel_max_diff(a: &[TensorPoly4], b: &[TensorPoly4]) -> f64 {
    let mut diff = 0.0f64;
    let mut scale = 1.0f64;
    for (p, q) in a.iter().zip(b) {
        diff = diff.max((p - q).max_abs_coeff());
        scale = scale.max(p.max_abs_coeff()).max(q.max_abs_coeff());
    }
    diff / scale
}

pub fn vec_max_diff(a: &Vec4P, b: &Vec4P) -> f64 {
    rel_max_diff(&a.0, &b.0)
}

pub fn skew_max_diff(a: &Skew4P, b: &Skew4P) -> f64 {
    rel_max_diff(&a.0, &b.0)
}

pub fn scalar_max_diff(a: &TensorPoly4, b: &TensorPoly4) -> f64 {
    rel_max_diff(std::slice::from_ref(a), std::slice::from_ref(b))
}

/// Sign of a permutation of `0..n` by counting inversions.
pub fn perm_sign(p: &[usize]) -> f64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
