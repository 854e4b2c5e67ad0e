//! Truncated Taylor series in one real variable.
//!
//! `Jet(c)` stores `c[j] = f^(j)(t0) / j!`. Arithmetic is truncated at the
//! shorter order of the operands.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = c;
        Jet(v)
    }

    /// The identity function expanded at `t0`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = t0;
        if order > 0 {
            v[1] = 1.0;
        }
        Jet(v)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `f^(j)(t0)`.
    pub fn derivative(&self, j: usize) -> f64 {
        let mut f = 1.0;
        for k in 2..=j {
            f *= k as f64;
        }
        self.0.get(j).copied().unwrap_or(0.0) * f
    }

    pub fn scale(&self, s: f64) -> Self {
        Jet(self.0.iter().map(|x| x * s).collect())
    }

    pub fn add_const(&self, c: f64) -> Self {
        let mut v = self.0.clone();
        v[0] += c;
        Jet(v)
    }

    pub fn recip(&self) -> Self {
        let a = &self.0;
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = 1.0 / a[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b[k] = -s / a[0];
        }
        Jet(b)
    }

    pub fn exp(&self) -> Self {
        let a = &self.0;
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
            b[k] = s / k as f64;
        }
        Jet(b)
    }

    pub fn div(&self, other: &Jet) -> Self {
        self * &other.recip()
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        let n = self.0.len().min(o.0.len());
        Jet((0..n).map(|i| self.0[i] + o.0[i]).collect())
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        let n = self.0.len().min(o.0.len());
        Jet((0..n).map(|i| self.0[i] - o.0[i]).collect())
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.0.len().min(o.0.len());
        let mut v = vec![0.0; n];
        for i in 0..n {
            for j in 0..n - i {
                v[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_variable_matches_closed_form() {
        let j = Jet::variable(0.3, 5).scale(-1.0).exp();
        for k in 0..=5 {
            let exact = if k % 2 == 0 { 1.0 } else { -1.0 } * (-0.3f64).exp();
            assert!((j.derivative(k) - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn reciprocal_of_geometric() {
        // 1/(1 - t) at t0 = 0.5 has f^(k) = k! / 0.5^(k+1)
        let j = Jet::variable(0.5, 4).scale(-1.0).add_const(1.0).recip();
        for k in 0..=4 {
            assert!((j.0[k] - 2f64.powi(k as i32 + 1)).abs() < 1e-12);
        }
    }
}
