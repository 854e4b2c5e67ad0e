//! One-dimensional rules: Gauss-Legendre, geometrically graded radial
//! panels, and the periodic trapezoid rule.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    if m == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// Nodes and weights of a rule on an interval.
#[derive(Debug, Clone, Default)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    fn push_panel(&mut self, a: f64, b: f64, gl: &(Vec<f64>, Vec<f64>)) {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        for (x, w) in gl.0.iter().zip(&gl.1) {
            self.nodes.push(c + h * x);
            self.weights.push(h * w);
        }
    }
}

/// Composite Gauss-Legendre on `[0, r_max]`: `outer` equal panels on
/// `[r_max * ratio, r_max]`, then `graded` panels shrinking by `ratio`
/// toward 0, and a final cubically stretched panel touching 0. Resolves `r^alpha` endpoint
/// behaviour and thin rings at any scale above `r_max * ratio^graded`.
pub fn radial_rule(r_max: f64, outer: usize, graded: usize, ratio: f64, m: usize) -> Rule {
    let gl = gauss_legendre(m);
    let mut rule = Rule::default();
    let split = r_max * ratio;
    let outer = outer.max(1);
    if graded == 0 {
        let h = r_max / outer as f64;
        for i in 0..outer {
            rule.push_panel(i as f64 * h, (i + 1) as f64 * h, &gl);
        }
        return rule;
    }
    let h = (r_max - split) / outer as f64;
    for i in 0..outer {
        rule.push_panel(split + i as f64 * h, split + (i + 1) as f64 * h, &gl);
    }
    let mut b = split;
    for _ in 1..graded {
        let a = b * ratio;
        rule.push_panel(a, b, &gl);
        b = a;
    }
    // r = b u^3 on the innermost panel flattens r^alpha for alpha near -1
    for (x, w) in gl.0.iter().zip(&gl.1) {
        let u = 0.5 * (x + 1.0);
        rule.nodes.push(b * u * u * u);
        rule.weights.push(0.5 * w * 3.0 * b * u * u);
    }
    rule
}

/// Trapezoid nodes on the circle; all weights equal `2π / n`.
pub fn trapezoid_angles(n: usize) -> Vec<(f64, f64)> {
    (0..n).map(|k| ((k as f64 + 0.5) * 2.0 * PI / n as f64, 2.0 * PI / n as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for m in 1..12 {
            let (x, w) = gauss_legendre(m);
            for deg in 0..2 * m {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((s - exact).abs() < 1e-13, "m={m} deg={deg}");
            }
        }
    }

    #[test]
    fn graded_rule_handles_fractional_powers() {
        let r = radial_rule(1.0, 2, 24, 0.2, 10);
        let s = r.integrate(|x| x.powf(-0.5));
        assert!((s - 2.0).abs() < 1e-6);
    }
}
