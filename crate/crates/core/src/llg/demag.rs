// SPDX-License-Identifier: Apache-2.0
//! Demagnetizing factors of a uniformly magnetized rectangular prism.

use std::f64::consts::PI;

use crate::vec3::Vec3;

/// N along the third side for a prism with full side lengths `lx, ly, lz`
/// (Aharoni's closed form).
fn factor_along_last(lx: f64, ly: f64, lz: f64) -> f64 {
    let (a, b, c) = (0.5 * lx, 0.5 * ly, 0.5 * lz);
    let r = (a * a + b * b + c * c).sqrt();
    let ab = (a * a + b * b).sqrt();
    let bc = (b * b + c * c).sqrt();
    let ac = (a * a + c * c).sqrt();
    let abc = a * b * c;
    let t = (b * b - c * c) / (2.0 * b * c) * ((r - a) / (r + a)).ln()
        + (a * a - c * c) / (2.0 * a * c) * ((r - b) / (r + b)).ln()
        + b / (2.0 * c) * ((ab + a) / (ab - a)).ln()
        + a / (2.0 * c) * ((ab + b) / (ab - b)).ln()
        + c / (2.0 * a) * ((bc - b) / (bc + b)).ln()
        + c / (2.0 * b) * ((ac - a) / (ac + a)).ln()
        + 2.0 * (a * b / (c * r)).atan()
        + (a.powi(3) + b.powi(3) - 2.0 * c.powi(3)) / (3.0 * abc)
        + (a * a + b * b - 2.0 * c * c) * r / (3.0 * abc)
        + c * (ac + bc) / (a * b)
        - (ab.powi(3) + bc.powi(3) + ac.powi(3)) / (3.0 * abc);
    t / PI
}

/// (N_x, N_y, N_z) for a prism of side lengths `lx × ly × lz`.
pub fn prism_factors(lx: f64, ly: f64, lz: f64) -> Vec3 {
    [
        factor_along_last(ly, lz, lx),
        factor_along_last(lz, lx, ly),
        factor_along_last(lx, ly, lz),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_is_one_third() {
        let n = prism_factors(1.0, 1.0, 1.0);
        for k in n {
            assert!((k - 1.0 / 3.0).abs() < 1e-12, "{n:?}");
        }
    }

    #[test]
    fn factors_sum_to_one() {
        for dims in [(30e-9, 15e-9, 1e-9), (2.0, 1.0, 0.1), (5.0, 0.3, 0.7)] {
            let n = prism_factors(dims.0, dims.1, dims.2);
            assert!((n.iter().sum::<f64>() - 1.0).abs() < 1e-10, "{n:?}");
        }
    }

    #[test]
    fn thin_film_limit() {
        let n = prism_factors(1000.0, 1000.0, 1.0);
        assert!(n[2] > 0.99);
        let n = prism_factors(30e-9, 15e-9, 1e-9);
        // long axis is the easiest
        assert!(n[0] < n[1] && n[1] < n[2]);
    }
}
