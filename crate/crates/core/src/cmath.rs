//! Principal-branch complex elementary functions used by the angle code.

use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Principal arccosine, `-i log(z + i sqrt(1 - z^2))` with principal `log`
/// and `sqrt`. The real part of the result lies in `[0, pi]`.
pub fn acos(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let root = (one - z * z).sqrt();
    -I * (z + I * root).ln()
}

pub fn cot(z: Complex64) -> Complex64 {
    z.cos() / z.sin()
}

pub fn csc(z: Complex64) -> Complex64 {
    z.sin().inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn acos_real_values() {
        assert!(close(acos(Complex64::new(1.0, 0.0)), Complex64::new(0.0, 0.0), 1e-15));
        assert!(close(acos(Complex64::new(0.0, 0.0)), Complex64::new(FRAC_PI_2, 0.0), 1e-15));
        assert!(close(acos(Complex64::new(-1.0, 0.0)), Complex64::new(PI, 0.0), 1e-15));
        assert!(close(acos(Complex64::new(0.5, 0.0)), Complex64::new(PI / 3.0, 0.0), 1e-15));
    }

    #[test]
    fn acos_inverts_cos_on_principal_strip() {
        for &(re, im) in &[(0.3, 0.7), (2.0, -1.5), (1.1, 0.0), (0.0, 3.0), (3.0, 0.2)] {
            let w = Complex64::new(re, im);
            let back = acos(w.cos());
            // cos is even: either w or -w is recovered
            assert!(close(back, w, 1e-12) || close(back, -w, 1e-12), "{w} -> {back}");
            assert!(back.re >= -1e-15 && back.re <= PI + 1e-15);
        }
    }

    #[test]
    fn acos_outside_unit_interval_is_imaginary() {
        let w = acos(Complex64::new(2.0, 0.0));
        assert!(w.re.abs() < 1e-15);
        assert!((w.im.abs() - 2.0f64.acosh()).abs() < 1e-14);
    }

    #[test]
    fn cot_and_csc() {
        let z = Complex64::new(0.4, -0.3);
        assert!(close(cot(z) * z.tan(), Complex64::new(1.0, 0.0), 1e-14));
        assert!(close(csc(z) * z.sin(), Complex64::new(1.0, 0.0), 1e-14));
    }
}
