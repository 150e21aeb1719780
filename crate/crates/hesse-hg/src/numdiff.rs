//! Central finite differences for mixed partial derivatives of complex
//! functions of two complex variables (steps taken along the real
//! direction of each coordinate).

use num_complex::Complex64;

type C = Complex64;

/// Stencil coefficients for the m-th derivative, second-order accurate,
/// over offsets -2..=2.
fn stencil(m: u32) -> [f64; 5] {
    match m {
        0 => [0.0, 0.0, 1.0, 0.0, 0.0],
        1 => [0.0, -0.5, 0.0, 0.5, 0.0],
        2 => [0.0, 1.0, -2.0, 1.0, 0.0],
        3 => [-0.5, 1.0, 0.0, -1.0, 0.5],
        4 => [1.0, -4.0, 6.0, -4.0, 1.0],
        _ => panic!("stencil order above 4"),
    }
}

/// Central-difference estimate of `d^(m1+m2) f / dx1^m1 dx2^m2` at `x`.
pub fn central_partial(
    f: &dyn Fn(C, C) -> C,
    x: (C, C),
    order: (u32, u32),
    h: f64,
) -> C {
    let s1 = stencil(order.0);
    let s2 = stencil(order.1);
    let mut acc = C::new(0.0, 0.0);
    for (i, &c1) in s1.iter().enumerate() {
        if c1 == 0.0 {
            continue;
        }
        let x1 = x.0 + (i as f64 - 2.0) * h;
        for (j, &c2) in s2.iter().enumerate() {
            if c2 == 0.0 {
                continue;
            }
            let x2 = x.1 + (j as f64 - 2.0) * h;
            acc += c1 * c2 * f(x1, x2);
        }
    }
    acc / h.powi((order.0 + order.1) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_a_polynomial() {
        // f = x1^3 x2 + 2 x2^2
        let f = |x1: C, x2: C| x1 * x1 * x1 * x2 + 2.0 * x2 * x2;
        // Roundoff scales like eps/h^(m1+m2), so the steps are chosen per
        // order.
        let x = (C::new(0.7, 0.1), C::new(-0.3, 0.2));
        let d = central_partial(&f, x, (2, 1), 1e-3);
        let expect = 6.0 * x.0;
        assert!((d - expect).norm() < 1e-5);
        let d = central_partial(&f, x, (3, 0), 1e-3);
        let expect = 6.0 * x.1;
        assert!((d - expect).norm() < 1e-5);
        let d = central_partial(&f, x, (0, 2), 1e-4);
        assert!((d - 4.0).norm() < 1e-6);
    }

    #[test]
    fn derivative_of_exponential() {
        let f = |x1: C, x2: C| (x1 * 2.0 + x2).exp();
        let x = (C::new(0.1, 0.0), C::new(0.2, 0.0));
        let expect = 8.0 * f(x.0, x.1);
        let d = central_partial(&f, x, (3, 0), 1e-3);
        assert!((d - expect).norm() < 1e-5 * expect.norm());
    }
}
