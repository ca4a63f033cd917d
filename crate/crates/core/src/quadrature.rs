//! Gauss–Legendre panels and a panel-doubling adaptive integrator.
//!
//! Every integration routine reports an error estimate alongside the value;
//! callers treat "estimate above tolerance" as a hard failure rather than a
//! silent degradation.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Tolerances and subdivision limits for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_doublings: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_doublings: 14,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec { abs_tol, rel_tol, ..Default::default() }
    }

    /// Tolerance threshold for a result of the given magnitude.
    pub fn threshold(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }

    /// Same tolerances shrunk by a factor (for oracle double-checks).
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            max_doublings: self.max_doublings + 4,
        }
    }
}

/// Result of an integration with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
}

/// Cached Gauss–Legendre rule: leaked so nodes live for the program.
type GlRule = &'static (Vec<f64>, Vec<f64>);

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence and cached.
pub fn gauss_legendre(n: usize) -> GlRule {
    static CACHE: OnceLock<std::sync::Mutex<std::collections::HashMap<usize, GlRule>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(std::collections::HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(&r) = guard.get(&n) {
        return r;
    }
    let computed: GlRule = Box::leak(Box::new(compute_gauss_legendre(n)));
    guard.insert(n, computed);
    computed
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P'_n(x) by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed n-point Gauss–Legendre on [a, b].
pub fn integrate_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        s += w * f(c + h * x);
    }
    s * h
}

/// Adaptive integration of a smooth function on [a, b]: composite 15-point
/// Gauss–Legendre with panel doubling until two refinements agree.
pub fn integrate_auto<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
    }
    let mut panels = 4usize;
    let mut prev = composite_gl(f, a, b, panels);
    for _ in 0..spec.max_doublings {
        panels *= 2;
        let cur = composite_gl(f, a, b, panels);
        let est = (cur - prev).abs();
        if est <= spec.threshold(cur.abs()) {
            return Ok(Integral { value: cur, error_estimate: est });
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        estimate: (composite_gl(f, a, b, panels * 2) - prev).abs(),
        message: format!("no convergence on [{a}, {b}] after {panels} panels"),
    })
}

fn composite_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for i in 0..panels {
        s += integrate_gl(f, a + i as f64 * h, a + (i + 1) as f64 * h, 15);
    }
    s
}
