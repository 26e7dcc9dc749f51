//! Univariate and 4-variate tensor-product polynomials in the monomial basis,
//! Legendre families and Gauss-Legendre quadrature on `[-1, 1]^d`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::{Error, Result};

/// Univariate polynomial, monomial coefficients `c[0] + c[1] x + ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1D {
    coeffs: Vec<f64>,
}

impl Poly1D {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * a).collect())
    }

    /// Exact integral over `[-1, 1]`.
    pub fn integral(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .map(|(i, c)| 2.0 * c / (i as f64 + 1.0))
            .sum()
    }
}

impl Add for &Poly1D {
    type Output = Poly1D;
    fn add(self, rhs: &Poly1D) -> Poly1D {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + rhs.coeffs.get(i).unwrap_or(&0.0))
            .collect();
        Poly1D::new(c)
    }
}

impl Sub for &Poly1D {
    type Output = Poly1D;
    fn sub(self, rhs: &Poly1D) -> Poly1D {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Poly1D {
    type Output = Poly1D;
    fn mul(self, rhs: &Poly1D) -> Poly1D {
        if self.is_zero() || rhs.is_zero() {
            return Poly1D::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly1D::new(c)
    }
}

/// Legendre polynomials `P_0..=P_k` via the three-term recurrence
/// `(n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}`.
pub fn legendre_family(k: usize) -> Vec<Poly1D> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(Poly1D::constant(1.0));
    if k >= 1 {
        out.push(Poly1D::x());
    }
    for n in 1..k {
        let xp = &Poly1D::x() * &out[n];
        let next = &xp.scale((2 * n + 1) as f64 / (n + 1) as f64)
            - &out[n - 1].scale(n as f64 / (n + 1) as f64);
        out.push(next);
    }
    out
}

/// Legendre family for a possibly negative degree bound; empty below zero.
pub fn legendre_upto(k: i32) -> Vec<Poly1D> {
    if k < 0 {
        Vec::new()
    } else {
        legendre_family(k as usize)
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct QuadRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest monomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// `m[j] = sum_n w_n x_n^j` for `j = 0..=degree`.
    pub fn monomial_moments(&self, degree: usize) -> Vec<f64> {
        let mut m = vec![0.0; degree + 1];
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let mut p = w;
            for mj in m.iter_mut() {
                *mj += p;
                p *= x;
            }
        }
        m
    }
}

/// Evaluates `P_n(x)` and `P_n'(x)` with the recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 1..n {
        let p2 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p0) / (j + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule with `n` nodes, exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Result<QuadRule1D> {
    if n == 0 {
        return Err(Error::InvalidArgument("gauss_legendre needs n >= 1".into()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Chebyshev-like initial guess for the i-th largest root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { nodes: n });
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w *= 2.0 / total);
    Ok(QuadRule1D { nodes, weights })
}

/// Cached rule; `n` must be in `1..=64`.
pub fn cached_gauss_legendre(n: usize) -> &'static QuadRule1D {
    static RULES: OnceLock<Vec<QuadRule1D>> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        (1..=64)
            .map(|n| gauss_legendre(n).expect("Gauss-Legendre converges for n <= 64"))
            .collect()
    });
    &rules[n - 1]
}

/// Number of Gauss nodes needed to integrate degree `d` exactly.
pub fn nodes_for_degree(d: usize) -> usize {
    d / 2 + 1
}

/// Tensor grid of four 1D rules.
#[derive(Clone, Debug)]
pub struct QuadRule4D {
    pub axes: [QuadRule1D; 4],
}

impl QuadRule4D {
    pub fn uniform(n: usize) -> Result<Self> {
        let r = gauss_legendre(n)?;
        Ok(Self {
            axes: [r.clone(), r.clone(), r.clone(), r],
        })
    }

    /// Weighted points of the full grid.
    pub fn points(&self) -> Vec<([f64; 4], f64)> {
        let [a, b, c, d] = &self.axes;
        let mut out = Vec::with_capacity(a.len() * b.len() * c.len() * d.len());
        for (x1, w1) in a.nodes.iter().zip(&a.weights) {
            for (x2, w2) in b.nodes.iter().zip(&b.weights) {
                for (x3, w3) in c.nodes.iter().zip(&c.weights) {
                    for (x4, w4) in d.nodes.iter().zip(&d.weights) {
                        out.push(([*x1, *x2, *x3, *x4], w1 * w2 * w3 * w4));
                    }
                }
            }
        }
        out
    }
}

/// Polynomial in `Q^{l,m,n,q}(x1,x2,x3,x4)`, dense monomial coefficient tensor.
///
/// The coefficient of `x1^a x2^b x3^c x4^d` lives at the row-major index of
/// `(a, b, c, d)` in a tensor of shape `(l+1, m+1, n+1, q+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorPoly4 {
    degrees: [usize; 4],
    coeffs: Vec<f64>,
}

fn shape_len(d: [usize; 4]) -> usize {
    d.iter().map(|x| x + 1).product()
}

impl TensorPoly4 {
    pub fn zero() -> Self {
        Self {
            degrees: [0; 4],
            coeffs: vec![0.0],
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            degrees: [0; 4],
            coeffs: vec![c],
        }
    }

    /// Zero polynomial with room for the given degrees.
    pub fn zeros(degrees: [usize; 4]) -> Self {
        Self {
            degrees,
            coeffs: vec![0.0; shape_len(degrees)],
        }
    }

    pub fn from_coeffs(degrees: [usize; 4], coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != shape_len(degrees) {
            return Err(Error::InvalidArgument(format!(
                "coefficient tensor of length {} does not match degrees {:?}",
                coeffs.len(),
                degrees
            )));
        }
        Ok(Self { degrees, coeffs })
    }

    /// The coordinate function `x_axis` (axis in `0..4`).
    pub fn coordinate(axis: usize) -> Self {
        let mut deg = [0; 4];
        deg[axis] = 1;
        let mut p = Self::zeros(deg);
        p.coeffs[1] = 1.0;
        p
    }

    /// Single monomial `c * x^exponents`.
    pub fn monomial(exponents: [usize; 4], c: f64) -> Self {
        let mut p = Self::zeros(exponents);
        let last = p.coeffs.len() - 1;
        p.coeffs[last] = c;
        p
    }

    /// `f1(x1) f2(x2) f3(x3) f4(x4)`.
    pub fn from_1d_product(factors: [&Poly1D; 4]) -> Self {
        if factors.iter().any(|f| f.is_zero()) {
            return Self::zero();
        }
        let degrees = factors.map(|f| f.degree().unwrap_or(0));
        let mut p = Self::zeros(degrees);
        let mut idx = 0;
        for a in factors[0].coeffs() {
            for b in factors[1].coeffs() {
                for c in factors[2].coeffs() {
                    for d in factors[3].coeffs() {
                        p.coeffs[idx] = a * b * c * d;
                        idx += 1;
                    }
                }
            }
        }
        p
    }

    pub fn degrees(&self) -> [usize; 4] {
        self.degrees
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    fn index(&self, e: [usize; 4]) -> usize {
        let d = self.degrees;
        ((e[0] * (d[1] + 1) + e[1]) * (d[2] + 1) + e[2]) * (d[3] + 1) + e[3]
    }

    /// Coefficient of `x^e`; zero outside the stored shape.
    pub fn coeff(&self, e: [usize; 4]) -> f64 {
        if (0..4).any(|a| e[a] > self.degrees[a]) {
            0.0
        } else {
            self.coeffs[self.index(e)]
        }
    }

    /// Iterates `(exponents, coefficient)` over the stored tensor.
    pub fn terms(&self) -> impl Iterator<Item = ([usize; 4], f64)> + '_ {
        let d = self.degrees;
        (0..=d[0]).flat_map(move |a| {
            (0..=d[1]).flat_map(move |b| {
                (0..=d[2]).flat_map(move |c| {
                    (0..=d[3]).map(move |e| {
                        let ex = [a, b, c, e];
                        (ex, self.coeffs[self.index(ex)])
                    })
                })
            })
        })
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Re-pads the tensor to larger degrees.
    pub fn padded(&self, degrees: [usize; 4]) -> Self {
        if degrees == self.degrees {
            return self.clone();
        }
        let degrees = [0, 1, 2, 3].map(|a| degrees[a].max(self.degrees[a]));
        let mut p = Self::zeros(degrees);
        for (e, c) in self.terms() {
            let i = p.index(e);
            p.coeffs[i] = c;
        }
        p
    }

    /// Drops trailing all-zero slices on every axis.
    pub fn trimmed(&self) -> Self {
        let mut deg = [0; 4];
        for (e, c) in self.terms() {
            if c != 0.0 {
                for a in 0..4 {
                    deg[a] = deg[a].max(e[a]);
                }
            }
        }
        if deg == self.degrees {
            return self.clone();
        }
        let mut p = Self::zeros(deg);
        for (e, c) in self.terms() {
            if c != 0.0 {
                let i = p.index(e);
                p.coeffs[i] = c;
            }
        }
        p
    }

    /// Nested Horner evaluation.
    pub fn eval(&self, x: [f64; 4]) -> f64 {
        let d = self.degrees;
        let mut acc0 = 0.0;
        for a in (0..=d[0]).rev() {
            let mut acc1 = 0.0;
            for b in (0..=d[1]).rev() {
                let mut acc2 = 0.0;
                for c in (0..=d[2]).rev() {
                    let base = self.index([a, b, c, 0]);
                    let mut acc3 = 0.0;
                    for e in (0..=d[3]).rev() {
                        acc3 = acc3 * x[3] + self.coeffs[base + e];
                    }
                    acc2 = acc2 * x[2] + acc3;
                }
                acc1 = acc1 * x[1] + acc2;
            }
            acc0 = acc0 * x[0] + acc1;
        }
        acc0
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            degrees: self.degrees,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Partial derivative along `axis` (0-based).
    pub fn diff(&self, axis: usize) -> Self {
        if self.degrees[axis] == 0 {
            let mut deg = self.degrees;
            deg[axis] = 0;
            return Self::zeros(deg);
        }
        let mut deg = self.degrees;
        deg[axis] -= 1;
        let mut p = Self::zeros(deg);
        for (e, c) in self.terms() {
            if e[axis] == 0 {
                continue;
            }
            let mut f = e;
            f[axis] -= 1;
            let i = p.index(f);
            p.coeffs[i] = c * e[axis] as f64;
        }
        p
    }

    /// Restriction to the hyperplane `x_axis = value`; the axis degree becomes 0.
    pub fn restrict(&self, axis: usize, value: f64) -> Self {
        let mut deg = self.degrees;
        deg[axis] = 0;
        let mut p = Self::zeros(deg);
        for (e, c) in self.terms() {
            let mut f = e;
            f[axis] = 0;
            let i = p.index(f);
            p.coeffs[i] += c * value.powi(e[axis] as i32);
        }
        p
    }

    /// Contracts the coefficient tensor with one vector per axis:
    /// `sum_e c_e v0[e0] v1[e1] v2[e2] v3[e3]`.
    ///
    /// Each vector must cover the polynomial's degree on its axis.
    pub fn contract(&self, v: [&[f64]; 4]) -> f64 {
        let d = self.degrees;
        debug_assert!((0..4).all(|a| v[a].len() > d[a]));
        let mut total = 0.0;
        let mut idx = 0;
        for a in 0..=d[0] {
            let mut s1 = 0.0;
            for b in 0..=d[1] {
                let mut s2 = 0.0;
                for c in 0..=d[2] {
                    let mut s3 = 0.0;
                    for e in 0..=d[3] {
                        s3 += self.coeffs[idx] * v[3][e];
                        idx += 1;
                    }
                    s2 += s3 * v[2][c];
                }
                s1 += s2 * v[1][b];
            }
            total += s1 * v[0][a];
        }
        total
    }

    /// Integral over `[-1,1]^4` with the given tensor rule; refuses rules that
    /// would under-integrate.
    pub fn integrate(&self, rule: &QuadRule4D) -> Result<f64> {
        for a in 0..4 {
            if self.degrees[a] > rule.axes[a].exactness() {
                return Err(Error::RuleTooWeak {
                    axis: a,
                    degree: self.degrees[a],
                    nodes: rule.axes[a].len(),
                });
            }
        }
        let m: Vec<Vec<f64>> = (0..4)
            .map(|a| rule.axes[a].monomial_moments(self.degrees[a]))
            .collect();
        Ok(self.contract([&m[0], &m[1], &m[2], &m[3]]))
    }

    /// Integral over `[-1,1]^4` using a rule sized from the polynomial's degrees.
    pub fn integrate_exact(&self) -> f64 {
        let m: Vec<Vec<f64>> = (0..4)
            .map(|a| {
                cached_gauss_legendre(nodes_for_degree(self.degrees[a]))
                    .monomial_moments(self.degrees[a])
            })
            .collect();
        self.contract([&m[0], &m[1], &m[2], &m[3]])
    }

    /// Composition with an affine map `x_i = sum_j a[i][j] y_j + b[i]`.
    ///
    /// The result's degree on each axis is bounded by the total degree of `self`.
    pub fn compose_affine(&self, a: &[[f64; 4]; 4], b: &[f64; 4]) -> Self {
        let lin: Vec<TensorPoly4> = (0..4)
            .map(|i| {
                let mut p = Self::constant(b[i]).padded([1; 4]);
                for j in 0..4 {
                    let mut e = [0; 4];
                    e[j] = 1;
                    let idx = p.index(e);
                    p.coeffs[idx] = a[i][j];
                }
                p.trimmed()
            })
            .collect();
        let powers: Vec<Vec<TensorPoly4>> = (0..4)
            .map(|i| {
                let mut v = vec![Self::constant(1.0)];
                for _ in 0..self.degrees[i] {
                    let next = v.last().unwrap() * &lin[i];
                    v.push(next);
                }
                v
            })
            .collect();
        let [d0, d1, d2, d3] = self.degrees;
        let mut out = Self::zero();
        for e0 in 0..=d0 {
            let mut s1 = Self::zero();
            for e1 in 0..=d1 {
                let mut s2 = Self::zero();
                for e2 in 0..=d2 {
                    let mut s3 = Self::zero();
                    for e3 in 0..=d3 {
                        let c = self.coeffs[self.index([e0, e1, e2, e3])];
                        if c != 0.0 {
                            s3 = &s3 + &powers[3][e3].scale(c);
                        }
                    }
                    if !s3.is_zero() {
                        s2 = &s2 + &(&powers[2][e2] * &s3);
                    }
                }
                if !s2.is_zero() {
                    s1 = &s1 + &(&powers[1][e1] * &s2);
                }
            }
            if !s1.is_zero() {
                out = &out + &(&powers[0][e0] * &s1);
            }
        }
        out.trimmed()
    }
}

impl Add for &TensorPoly4 {
    type Output = TensorPoly4;
    fn add(self, rhs: &TensorPoly4) -> TensorPoly4 {
        let deg = [0, 1, 2, 3].map(|a| self.degrees[a].max(rhs.degrees[a]));
        let mut p = self.padded(deg);
        if rhs.degrees == deg {
            for (x, y) in p.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            for (e, c) in rhs.terms() {
                let i = p.index(e);
                p.coeffs[i] += c;
            }
        }
        p
    }
}

impl Sub for &TensorPoly4 {
    type Output = TensorPoly4;
    fn sub(self, rhs: &TensorPoly4) -> TensorPoly4 {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &TensorPoly4 {
    type Output = TensorPoly4;
    fn neg(self) -> TensorPoly4 {
        self.scale(-1.0)
    }
}

impl Mul for &TensorPoly4 {
    type Output = TensorPoly4;
    fn mul(self, rhs: &TensorPoly4) -> TensorPoly4 {
        let deg = [0, 1, 2, 3].map(|a| self.degrees[a] + rhs.degrees[a]);
        let mut p = TensorPoly4::zeros(deg);
        let rt: Vec<([usize; 4], f64)> = rhs.terms().filter(|t| t.1 != 0.0).collect();
        for (e, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            for (f, d) in &rt {
                let i = p.index([e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]]);
                p.coeffs[i] += c * d;
            }
        }
        p
    }
}

impl Add for TensorPoly4 {
    type Output = TensorPoly4;
    fn add(self, rhs: TensorPoly4) -> TensorPoly4 {
        &self + &rhs
    }
}

impl Sub for TensorPoly4 {
    type Output = TensorPoly4;
    fn sub(self, rhs: TensorPoly4) -> TensorPoly4 {
        &self - &rhs
    }
}

impl Mul for TensorPoly4 {
    type Output = TensorPoly4;
    fn mul(self, rhs: TensorPoly4) -> TensorPoly4 {
        &self * &rhs
    }
}

/// Free-function aliases matching the operation names used across the crate.
pub fn tp_eval(p: &TensorPoly4, x: [f64; 4]) -> f64 {
    p.eval(x)
}

pub fn tp_mul(a: &TensorPoly4, b: &TensorPoly4) -> TensorPoly4 {
    a * b
}

pub fn tp_add(a: &TensorPoly4, b: &TensorPoly4) -> TensorPoly4 {
    a + b
}

pub fn tp_scale(a: &TensorPoly4, s: f64) -> TensorPoly4 {
    a.scale(s)
}

/// Partial derivative; `axis` is 1-based to match coordinate names.
pub fn tp_diff(p: &TensorPoly4, axis: usize) -> TensorPoly4 {
    p.diff(axis - 1)
}

pub fn tp_integrate(p: &TensorPoly4, rule: &QuadRule4D) -> Result<f64> {
    p.integrate(rule)
}

/// Relative closeness of two polynomials, scaled by the largest coefficient.
pub fn rel_diff(a: &TensorPoly4, b: &TensorPoly4) -> f64 {
    let d = a - b;
    let scale = a.max_abs_coeff().max(b.max_abs_coeff()).max(1e-300);
    d.max_abs_coeff() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(axis: usize) -> TensorPoly4 {
        TensorPoly4::coordinate(axis)
    }

    #[test]
    fn legendre_small_cases() {
        let l = legendre_family(2);
        assert_eq!(l.len(), 3);
        assert_eq!(l[0].coeffs(), &[1.0]);
        assert_eq!(l[1].coeffs(), &[0.0, 1.0]);
        assert_eq!(l[2].coeffs(), &[-0.5, 0.0, 1.5]);
        let r = gauss_legendre(3).unwrap();
        let ip = r.integrate(|t| l[1].eval(t) * l[2].eval(t));
        assert!(ip.abs() < 1e-15);
        assert!(legendre_upto(-1).is_empty());
    }

    #[test]
    fn legendre_orthogonality() {
        for k in 0..=8 {
            let l = legendre_family(k);
            let r = gauss_legendre(k + 1).unwrap();
            for i in 0..=k {
                assert_eq!(l[i].degree(), Some(i));
                for j in 0..i {
                    let g = r.integrate(|t| l[i].eval(t) * l[j].eval(t));
                    assert!(g.abs() < 1e-13, "k={k} i={i} j={j} g={g}");
                }
                let diag = r.integrate(|t| l[i].eval(t).powi(2));
                assert!((diag - 2.0 / (2 * i + 1) as f64).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn gauss_small_rules() {
        let r1 = gauss_legendre(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert_eq!(r1.weights, vec![2.0]);
        let r2 = gauss_legendre(2).unwrap();
        assert!((r2.nodes[1] - 0.5773502691896258).abs() < 1e-15);
        assert!((r2.nodes[0] + 0.5773502691896258).abs() < 1e-15);
        assert!((r2.weights[0] - 1.0).abs() < 1e-15);
        let r3 = gauss_legendre(3).unwrap();
        assert!((r3.integrate(|t| t.powi(4)) - 0.4).abs() < 1e-14);
        assert!(gauss_legendre(0).is_err());
    }

    #[test]
    fn gauss_exactness_and_weight_sum() {
        for n in 1..=32 {
            let r = gauss_legendre(n).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}");
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for d in 0..=(2 * n - 1) {
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                let got = r.integrate(|t| t.powi(d as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(TensorPoly4::constant(1.0).eval([0.3, -0.2, 0.9, -1.0]), 1.0);
        assert_eq!((&x(0) * &x(3)).eval([-1.0, 0.0, 0.0, 1.0]), -1.0);
        assert_eq!((&x(1) * &x(1)).eval([0.0, 0.5, 0.0, 0.0]), 0.25);
    }

    #[test]
    fn mul_examples() {
        let one_minus = &TensorPoly4::constant(1.0) - &(&x(0) * &x(0));
        let p = &one_minus * &TensorPoly4::constant(1.0);
        assert_eq!(p.degrees(), [2, 0, 0, 0]);
        assert_eq!(p.eval([1.0, 0.3, 0.2, 0.1]), 0.0);
        assert_eq!(p.eval([-1.0, 0.3, 0.2, 0.1]), 0.0);
        assert_eq!(&x(0) * &x(0), TensorPoly4::monomial([2, 0, 0, 0], 1.0));
        let one = TensorPoly4::constant(1.0);
        let q = &(&one + &x(2)) * &(&one - &x(2));
        assert_eq!(q.trimmed(), (&one - &(&x(2) * &x(2))).trimmed());
    }

    #[test]
    fn diff_examples() {
        let x1sq = TensorPoly4::monomial([2, 0, 0, 0], 1.0);
        assert_eq!(tp_diff(&x1sq, 1), TensorPoly4::monomial([1, 0, 0, 0], 2.0));
        assert_eq!(tp_diff(&(&x(0) * &x(3)), 4).trimmed(), x(0));
        assert!(tp_diff(&TensorPoly4::constant(3.0), 2).is_zero());
    }

    #[test]
    fn integrate_examples() {
        let rule = QuadRule4D::uniform(2).unwrap();
        assert!((TensorPoly4::constant(1.0).integrate(&rule).unwrap() - 16.0).abs() < 1e-14);
        assert!(x(0).integrate(&rule).unwrap().abs() < 1e-15);
        let p = TensorPoly4::monomial([2, 2, 0, 0], 1.0);
        assert!((p.integrate(&rule).unwrap() - 16.0 / 9.0).abs() < 1e-14);
        let too_high = TensorPoly4::monomial([4, 0, 0, 0], 1.0);
        assert!(matches!(too_high.integrate(&rule), Err(Error::RuleTooWeak { .. })));
    }

    #[test]
    fn restrict_and_compose() {
        let p = &x(0) + &x(3);
        let r = p.restrict(3, -1.0);
        assert_eq!(r.eval([0.4, 0.0, 0.0, 123.0]), 0.4 - 1.0);
        let a = [
            [2.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        let b = [0.5, 0.0, -1.0, 0.0];
        let q = &(&x(0) * &x(1)) * &x(3);
        let c = q.compose_affine(&a, &b);
        let y = [0.3, -0.7, 0.2, 0.9];
        let xm = [2.0 * y[0] + 0.5, y[1] + y[2], y[2] - 1.0, -y[3]];
        assert!((c.eval(y) - q.eval(xm)).abs() < 1e-14);
    }
}
