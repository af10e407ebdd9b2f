//! Small numerical kernels shared by the oracles: composite Simpson,
//! five-point stencils, classical RK4 and bisection.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Composite Simpson rule on a uniform grid with spacing `h`.
/// An even number of samples gets a 3/8 rule on the last four points.
pub fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (y[0] + y[1]),
        3 => h / 3.0 * (y[0] + 4.0 * y[1] + y[2]),
        _ if n % 2 == 1 => simpson_odd(y, h),
        _ => {
            let m = n - 3;
            let head = if m >= 3 { simpson_odd(&y[..m], h) } else { 0.0 };
            let t = &y[m - 1..];
            head + 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3])
        }
    }
}

fn simpson_odd(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    let mut s = y[0] + y[n - 1];
    for (i, v) in y.iter().enumerate().take(n - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// First derivative, fourth order: central in the interior, one-sided at the two
/// points nearest each edge.
pub fn d1_5pt(f: &[Complex64], h: f64) -> Result<Vec<Complex64>> {
    let n = f.len();
    if n < 5 {
        return Err(Error::Grid(format!("need at least 5 points, got {n}")));
    }
    let mut g = vec![Complex64::new(0.0, 0.0); n];
    let c = 1.0 / (12.0 * h);
    for i in 2..n - 2 {
        g[i] = (f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) * c;
    }
    g[0] = (f[0] * -25.0 + f[1] * 48.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * c;
    g[1] = (f[0] * -3.0 - f[1] * 10.0 + f[2] * 18.0 - f[3] * 6.0 + f[4]) * c;
    g[n - 1] = (f[n - 1] * 25.0 - f[n - 2] * 48.0 + f[n - 3] * 36.0 - f[n - 4] * 16.0
        + f[n - 5] * 3.0)
        * c;
    g[n - 2] = (f[n - 1] * 3.0 + f[n - 2] * 10.0 - f[n - 3] * 18.0 + f[n - 4] * 6.0 - f[n - 5])
        * c;
    Ok(g)
}

/// Second derivative: five-point central stencil in the interior, one-sided
/// six-point stencils (fourth order) at the edges.
pub fn d2_5pt(f: &[Complex64], h: f64) -> Result<Vec<Complex64>> {
    let n = f.len();
    if n < 6 {
        return Err(Error::Grid(format!("need at least 6 points, got {n}")));
    }
    let mut g = vec![Complex64::new(0.0, 0.0); n];
    let c = 1.0 / (12.0 * h * h);
    for i in 2..n - 2 {
        g[i] = (-f[i - 2] + f[i - 1] * 16.0 - f[i] * 30.0 + f[i + 1] * 16.0 - f[i + 2]) * c;
    }
    let e0 = |a: &dyn Fn(usize) -> Complex64| {
        (a(0) * 45.0 - a(1) * 154.0 + a(2) * 214.0 - a(3) * 156.0 + a(4) * 61.0 - a(5) * 10.0) * c
    };
    let e1 = |a: &dyn Fn(usize) -> Complex64| {
        (a(0) * 10.0 - a(1) * 15.0 - a(2) * 4.0 + a(3) * 14.0 - a(4) * 6.0 + a(5)) * c
    };
    g[0] = e0(&|k| f[k]);
    g[1] = e1(&|k| f[k]);
    g[n - 1] = e0(&|k| f[n - 1 - k]);
    g[n - 2] = e1(&|k| f[n - 1 - k]);
    Ok(g)
}

/// One classical fourth-order Runge-Kutta step for y' = f(t, y).
pub fn rk4_step<Y, F>(f: &F, t: f64, y: Y, h: f64) -> Y
where
    Y: Copy + Add<Output = Y> + Mul<f64, Output = Y>,
    F: Fn(f64, Y) -> Y,
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, y + k1 * (0.5 * h));
    let k3 = f(t + 0.5 * h, y + k2 * (0.5 * h));
    let k4 = f(t + h, y + k3 * h);
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Integrates from `t0` to `t1` in `steps` equal steps, calling `visit` after each.
pub fn rk4_integrate<Y, F, V>(f: F, t0: f64, y0: Y, t1: f64, steps: usize, mut visit: V) -> Y
where
    Y: Copy + Add<Output = Y> + Mul<f64, Output = Y>,
    F: Fn(f64, Y) -> Y,
    V: FnMut(f64, &Y),
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        let t = t0 + h * i as f64;
        y = rk4_step(&f, t, y, h);
        visit(t0 + h * (i + 1) as f64, &y);
    }
    y
}

/// Plain vector state for the RK4 helpers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec4(pub [f64; 4]);

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, s: f64) -> Vec4 {
        Vec4(self.0.map(|v| v * s))
    }
}

/// Bisection on a sign change; stops when the bracket is narrower than `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Uniform grid of `n` points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect()
        }
    }
}
