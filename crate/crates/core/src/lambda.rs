//! Affine forms in the Mellin parameters and products of them.

use std::fmt;

use num_complex::Complex64;

/// `c0 + Σ c_j λ_j` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    pub constant: i64,
    pub coeffs: Vec<i64>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl AffineForm {
    pub fn zero(m: usize) -> Self {
        AffineForm { constant: 0, coeffs: vec![0; m] }
    }

    pub fn constant(m: usize, c: i64) -> Self {
        AffineForm { constant: c, coeffs: vec![0; m] }
    }

    /// The coordinate `λ_j` (zero-based `j`).
    pub fn lambda(m: usize, j: usize) -> Self {
        let mut f = Self::zero(m);
        f.coeffs[j] = 1;
        f
    }

    pub fn new(constant: i64, coeffs: Vec<i64>) -> Self {
        AffineForm { constant, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        AffineForm {
            constant: self.constant + o.constant,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> Self {
        AffineForm { constant: self.constant * s, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add_constant(&self, c: i64) -> Self {
        AffineForm { constant: self.constant + c, coeffs: self.coeffs.clone() }
    }

    pub fn eval(&self, lam: &[Complex64]) -> Complex64 {
        let mut v = Complex64::new(self.constant as f64, 0.0);
        for (c, l) in self.coeffs.iter().zip(lam) {
            if *c != 0 {
                v += *c as f64 * l;
            }
        }
        v
    }

    /// Splits `self = content * primitive` with the primitive part having
    /// coprime entries and a positive leading λ-coefficient. Constant forms
    /// have primitive part `1`.
    pub fn primitive(&self) -> (i64, AffineForm) {
        if self.is_constant() {
            return (self.constant, AffineForm::constant(self.dim(), 1));
        }
        let g = self.coeffs.iter().fold(self.constant.abs(), |acc, &c| gcd(acc, c));
        let lead = *self.coeffs.iter().find(|&&c| c != 0).unwrap();
        let g = if lead < 0 { -g } else { g };
        (
            g,
            AffineForm {
                constant: self.constant / g,
                coeffs: self.coeffs.iter().map(|c| c / g).collect(),
            },
        )
    }

    /// Integer normal vector `(c_1, …, c_m)` of the hyperplane `self = 0`.
    pub fn normal(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn passes_through_origin(&self) -> bool {
        self.constant == 0 && !self.is_constant()
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = c.abs();
            let m = if mag == 1 { String::new() } else { mag.to_string() };
            out.push_str(&format!("{sign}{m}λ{}", j + 1));
        }
        if self.constant != 0 || out.is_empty() {
            if self.constant >= 0 && !out.is_empty() {
                out.push('+');
            }
            out.push_str(&self.constant.to_string());
        }
        write!(f, "{out}")
    }
}

/// A rational function `∏ numerator / ∏ denominator` of affine forms, kept in
/// primitive, cancelled form. Denominators are the pole hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PoleFactor {
    pub numerator: Vec<AffineForm>,
    pub denominator: Vec<AffineForm>,
}

impl PoleFactor {
    pub fn one() -> Self {
        PoleFactor::default()
    }

    /// Builds a cancelled factor; returns the scalar content separately.
    pub fn from_parts(num: &[AffineForm], den: &[AffineForm]) -> (f64, PoleFactor) {
        let mut scalar = 1.0;
        let mut n: Vec<AffineForm> = Vec::new();
        let mut d: Vec<AffineForm> = Vec::new();
        for f in num {
            let (c, p) = f.primitive();
            scalar *= c as f64;
            if !p.is_constant() {
                n.push(p);
            }
        }
        for f in den {
            let (c, p) = f.primitive();
            scalar /= c as f64;
            if !p.is_constant() {
                d.push(p);
            }
        }
        let mut i = 0;
        while i < n.len() {
            if let Some(j) = d.iter().position(|x| *x == n[i]) {
                d.remove(j);
                n.remove(i);
            } else {
                i += 1;
            }
        }
        n.sort();
        d.sort();
        (scalar, PoleFactor { numerator: n, denominator: d })
    }

    pub fn mul(&self, other: &PoleFactor) -> (f64, PoleFactor) {
        let num: Vec<_> = self.numerator.iter().chain(&other.numerator).cloned().collect();
        let den: Vec<_> = self.denominator.iter().chain(&other.denominator).cloned().collect();
        Self::from_parts(&num, &den)
    }

    pub fn is_one(&self) -> bool {
        self.numerator.is_empty() && self.denominator.is_empty()
    }

    pub fn eval(&self, lam: &[Complex64]) -> Complex64 {
        let mut v = Complex64::new(1.0, 0.0);
        for f in &self.numerator {
            v *= f.eval(lam);
        }
        for f in &self.denominator {
            v /= f.eval(lam);
        }
        v
    }

    /// The denominator closest to vanishing at `lam`, with its relative
    /// distance `|form(λ)| / (|λ| + 1)`.
    pub fn nearest_pole(&self, lam: &[Complex64]) -> Option<(&AffineForm, f64)> {
        let scale = lam.iter().map(|l| l.norm_sqr()).sum::<f64>().sqrt() + 1.0;
        self.denominator
            .iter()
            .map(|f| (f, f.eval(lam).norm() / scale))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn hyperplanes(&self) -> &[AffineForm] {
        &self.denominator
    }
}

impl fmt::Display for PoleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[AffineForm]| {
            if v.is_empty() {
                "1".to_string()
            } else {
                v.iter()
                    .map(|x| if x.coeffs.iter().filter(|c| **c != 0).count() > 1 || x.constant != 0 {
                        format!("({x})")
                    } else {
                        x.to_string()
                    })
                    .collect::<Vec<_>>()
                    .join("·")
            }
        };
        if self.denominator.is_empty() {
            write!(f, "{}", side(&self.numerator))
        } else {
            write!(f, "{}/{}", side(&self.numerator), side(&self.denominator))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_and_display() {
        let l2 = AffineForm::lambda(3, 1);
        let l3 = AffineForm::lambda(3, 2);
        let s = l2.add(&l3);
        let (c, f) = PoleFactor::from_parts(&[l2.clone(), l3.clone()], &[s.clone(), l3.scale(-2)]);
        assert_eq!(c, -0.5);
        assert_eq!(f.to_string(), "λ2/(λ2+λ3)");
    }

    #[test]
    fn primitive_of_constant_shift() {
        let f = AffineForm::new(-2, vec![0, 3, 0]);
        assert_eq!(f.primitive(), (1, f.clone()));
        assert_eq!(f.to_string(), "3λ2-2");
        assert!(!f.passes_through_origin());
    }
}
