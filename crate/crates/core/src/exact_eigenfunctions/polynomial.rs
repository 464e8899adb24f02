//! Dense polynomials over the Gaussian rationals, stored by ascending
//! power with a nonzero trailing coefficient (except the zero polynomial).

use super::rational::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexPolynomial {
    coeffs: Vec<GaussianRational>,
}

impl ComplexPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = Self { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<GaussianRational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficients by ascending power.
    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> GaussianRational {
        self.coeffs.get(power).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs =
            vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplication by `x`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(GaussianRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(coeffs)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| &GaussianRational::from_int(k as i64) * c)
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(GaussianRational::conj).collect())
    }

    /// True when only powers of the given parity carry nonzero coefficients.
    pub fn has_parity(&self, parity: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| k % 2 == parity % 2 || c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn mul_and_derivative() {
        // (1 + 2x)(3 + x) = 3 + 7x + 2x^2
        let p = ComplexPolynomial::from_coeffs(vec![gr(1), gr(2)]);
        let q = ComplexPolynomial::from_coeffs(vec![gr(3), gr(1)]);
        let r = p.mul(&q);
        assert_eq!(r.coeffs(), &[gr(3), gr(7), gr(2)]);
        assert_eq!(r.derivative().coeffs(), &[gr(7), gr(4)]);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = ComplexPolynomial::from_coeffs(vec![gr(1), gr(0), gr(0)]);
        assert_eq!(p.degree(), Some(0));
        let z = p.sub(&p);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }
}
