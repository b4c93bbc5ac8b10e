//! Matrix exponential for the small fixed-size matrices used throughout the
//! crate, and the integral operator built on top of it.

use nalgebra::{Matrix3, SMatrix};

use crate::heisenberg::{Mat2, Vec2};

const TAYLOR_TERMS: usize = 20;
// ‖A / 2^s‖₁ is kept below this before the series is summed.
const SCALED_NORM: f64 = 0.5;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// After scaling the 1-norm is at most 1/2, so twenty terms leave a
/// truncation error far below one ulp of the result.
pub fn expm<const N: usize>(a: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    let norm = one_norm(a);
    if !norm.is_finite() {
        return SMatrix::from_element(f64::NAN);
    }
    let squarings = if norm > SCALED_NORM { (norm / SCALED_NORM).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(squarings);

    let mut sum = SMatrix::<f64, N, N>::identity();
    let mut term = SMatrix::<f64, N, N>::identity();
    for k in 1..=TAYLOR_TERMS {
        term = term * scaled / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

fn one_norm<const N: usize>(a: &SMatrix<f64, N, N>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `Λ_t^B(η) = ∫₀ᵗ e^{sBᵀ} η ds`.
///
/// Read off the top-right column of `exp(t [[Bᵀ, η], [0, 0]])`, which is valid
/// for any `B`, singular or not.
pub fn lambda_operator(b: &Mat2, eta: &Vec2, t: f64) -> Vec2 {
    let bt = b.transpose();
    #[rustfmt::skip]
    let augmented = Matrix3::new(
        bt[(0, 0)], bt[(0, 1)], eta.x,
        bt[(1, 0)], bt[(1, 1)], eta.y,
        0.0,        0.0,        0.0,
    );
    let e = expm(&(augmented * t));
    Vec2::new(e[(0, 2)], e[(1, 2)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Matrix2;

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(expm(&Matrix3::<f64>::zeros()), Matrix3::identity());
    }

    #[test]
    fn exp_of_diagonal() {
        let a = Matrix2::new(1.0, 0.0, 0.0, -3.0);
        let e = expm(&a);
        assert_relative_eq!(e[(0, 0)], 1f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(e[(1, 1)], (-3f64).exp(), max_relative = 1e-14);
        assert_eq!(e[(0, 1)], 0.0);
    }

    #[test]
    fn exp_of_rotation_generator() {
        let t = 2.3;
        let a = Matrix2::new(0.0, -t, t, 0.0);
        let e = expm(&a);
        assert_relative_eq!(e[(0, 0)], t.cos(), epsilon = 1e-14);
        assert_relative_eq!(e[(1, 0)], t.sin(), epsilon = 1e-14);
    }

    #[test]
    fn exp_of_large_norm_nilpotent() {
        // exp([[0, 50], [0, 0]]) = [[1, 50], [0, 1]]
        let e = expm(&Matrix2::new(0.0, 50.0, 0.0, 0.0));
        assert_relative_eq!(e, Matrix2::new(1.0, 50.0, 0.0, 1.0), epsilon = 1e-11);
    }

    #[test]
    fn lambda_with_zero_matrix_is_linear_in_t() {
        let eta = Vec2::new(0.3, -1.2);
        let l = lambda_operator(&Mat2::zeros(), &eta, 2.5);
        assert_relative_eq!(l, eta * 2.5, epsilon = 1e-15);
    }

    #[test]
    fn lambda_identity_matrix() {
        let l = lambda_operator(&Mat2::identity(), &Vec2::new(1.0, 0.0), 1.0);
        assert_relative_eq!(l.x, 1f64.exp() - 1.0, epsilon = 1e-14);
        assert_eq!(l.y, 0.0);
    }

    #[test]
    fn lambda_at_zero_time_vanishes() {
        let b = Mat2::new(0.4, -2.0, 1.0, 3.0);
        assert_eq!(lambda_operator(&b, &Vec2::new(1.0, 2.0), 0.0), Vec2::zeros());
    }

    #[test]
    fn lambda_derivative_matches_integrand() {
        let b = Mat2::new(0.4, -2.0, 1.0, -0.7);
        let eta = Vec2::new(1.5, -0.5);
        let h = 1e-5;
        for &t in &[-1.5, 0.0, 0.8, 2.0] {
            let fd = (lambda_operator(&b, &eta, t + h) - lambda_operator(&b, &eta, t - h)) / (2.0 * h);
            let integrand = expm(&(b.transpose() * t)) * eta;
            assert_relative_eq!(fd, integrand, epsilon = 1e-8);
        }
    }
}
