//! Seeded generators for random polynomial fields and affine maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{component_count, FormField};
use crate::geometry::AffineMap;
use crate::tensorpoly::{legendre_family, TensorPoly4};

pub type FieldRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> FieldRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial with per-axis degrees `degrees`: Legendre tensor
/// coefficients drawn uniformly from `[-1, 1]`.
pub fn random_poly(rng: &mut FieldRng, degrees: [usize; 4]) -> TensorPoly4 {
    let fams = degrees.map(legendre_family);
    let mut out = TensorPoly4::zeros(degrees);
    for i in 0..=degrees[0] {
        for j in 0..=degrees[1] {
            for l in 0..=degrees[2] {
                for m in 0..=degrees[3] {
                    let c: f64 = rng.gen_range(-1.0..=1.0);
                    let t = TensorPoly4::from_1d_product([
                        &fams[0][i],
                        &fams[1][j],
                        &fams[2][l],
                        &fams[3][m],
                    ]);
                    out = &out + &t.scale(c);
                }
            }
        }
    }
    out
}

/// Random s-form proxy with every component of per-axis degree `degree`.
pub fn random_field(rng: &mut FieldRng, s: usize, degree: usize) -> FormField {
    let comps = (0..component_count(s))
        .map(|_| random_poly(rng, [degree; 4]))
        .collect();
    FormField::from_components(s, comps)
}

/// Random affine map `x -> A x + b` with `A` a perturbation of a scaled
/// identity; the determinant sign is negative when `negative` is set.
pub fn random_affine(rng: &mut FieldRng, negative: bool) -> AffineMap {
    loop {
        let mut a = [[0.0; 4]; 4];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = rng.gen_range(-0.4..=0.4);
                if i == j {
                    *v += rng.gen_range(0.8..=1.6);
                }
            }
        }
        if negative {
            for row in a.iter_mut() {
                row[0] = -row[0];
            }
        }
        let b = [0; 4].map(|_| rng.gen_range(-1.0..=1.0));
        let map = AffineMap::new(a, b);
        let det = map.det();
        if det.abs() > 0.05 && (det < 0.0) == negative {
            return map;
        }
    }
}

/// Uniform points in `[-1, 1]^4`.
pub fn sample_points(rng: &mut FieldRng, n: usize) -> Vec<[f64; 4]> {
    (0..n)
        .map(|_| [0; 4].map(|_| rng.gen_range(-1.0..=1.0)))
        .collect()
}
