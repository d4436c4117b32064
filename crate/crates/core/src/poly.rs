//! Dense bivariate polynomials over `f64` with a total-degree bound.
//!
//! Coefficients are stored in a triangular layout: for each power of `x`
//! the powers of `y` that keep the total degree within the bound.

use std::fmt;

#[derive(Clone, PartialEq)]
pub struct BivariatePoly {
    degree: usize,
    coeffs: Vec<f64>,
}

#[inline]
fn offset(degree: usize, i: usize) -> usize {
    // Sum over k < i of (degree - k + 1).
    i * (degree + 1) - i * i.saturating_sub(1) / 2
}

/// Number of monomials x^i y^j with i + j ≤ degree.
pub const fn monomial_count(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

impl BivariatePoly {
    pub fn zero(degree: usize) -> Self {
        BivariatePoly { degree, coeffs: vec![0.0; monomial_count(degree)] }
    }

    pub fn constant(c: f64) -> Self {
        BivariatePoly { degree: 0, coeffs: vec![c] }
    }

    /// `a·x + b·y + c`.
    pub fn linear(a: f64, b: f64, c: f64) -> Self {
        let mut p = BivariatePoly::zero(1);
        p.set(0, 0, c);
        p.set(1, 0, a);
        p.set(0, 1, b);
        p
    }

    /// `(x − x0)² + (y − y0)²`.
    pub fn squared_distance(x0: f64, y0: f64) -> Self {
        let mut p = BivariatePoly::zero(2);
        p.set(2, 0, 1.0);
        p.set(0, 2, 1.0);
        p.set(1, 0, -2.0 * x0);
        p.set(0, 1, -2.0 * y0);
        p.set(0, 0, x0 * x0 + y0 * y0);
        p
    }

    pub fn degree_bound(&self) -> usize {
        self.degree
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + j <= self.degree);
        offset(self.degree, i) + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i + j > self.degree {
            0.0
        } else {
            self.coeffs[self.index(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, c: f64) {
        assert!(i + j <= self.degree, "monomial x^{i} y^{j} exceeds degree {}", self.degree);
        let k = self.index(i, j);
        self.coeffs[k] = c;
    }

    /// Iterates `((i, j), c)` over every stored monomial, `i` major.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let d = self.degree;
        (0..=d).flat_map(move |i| (0..=d - i).map(move |j| ((i, j), self.get(i, j))))
    }

    /// Highest total degree with a nonzero coefficient, or `None` for zero.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms().filter(|&(_, c)| c != 0.0).map(|((i, j), _)| i + j).max()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Re-stores the polynomial with a different degree bound. Panics if a
    /// nonzero coefficient would be dropped.
    pub fn with_degree_bound(&self, degree: usize) -> Self {
        let mut out = BivariatePoly::zero(degree);
        for ((i, j), c) in self.terms() {
            if i + j <= degree {
                out.set(i, j, c);
            } else {
                assert!(c == 0.0, "coefficient of x^{i} y^{j} is nonzero");
            }
        }
        out
    }

    /// Horner evaluation: inner in `y`, outer in `x`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let d = self.degree;
        let mut acc = 0.0;
        for i in (0..=d).rev() {
            let base = offset(d, i);
            let mut inner = 0.0;
            for j in (0..=d - i).rev() {
                inner = inner * y + self.coeffs[base + j];
            }
            acc = acc * x + inner;
        }
        acc
    }

    /// Sum of `|c_ij| |x|^i |y|^j`, the natural scale for rounding error in
    /// [`eval`](Self::eval).
    pub fn eval_abs(&self, x: f64, y: f64) -> f64 {
        BivariatePoly { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c.abs()).collect() }
            .eval(x.abs(), y.abs())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let d = self.degree.max(other.degree);
        let mut out = BivariatePoly::zero(d);
        for i in 0..=d {
            for j in 0..=d - i {
                out.set(i, j, self.get(i, j) + sign * other.get(i, j));
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        BivariatePoly { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Product with compensated accumulation of each output coefficient.
    pub fn mul(&self, other: &Self) -> Self {
        let d = self.degree + other.degree;
        let mut acc = vec![Neumaier::default(); monomial_count(d)];
        for ((i1, j1), c1) in self.terms() {
            if c1 == 0.0 {
                continue;
            }
            for ((i2, j2), c2) in other.terms() {
                if c2 == 0.0 {
                    continue;
                }
                let (i, j) = (i1 + i2, j1 + j2);
                acc[offset(d, i) + j].add(c1 * c2);
            }
        }
        BivariatePoly { degree: d, coeffs: acc.into_iter().map(|n| n.sum()).collect() }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((i, j), c) in self.terms().filter(|&(_, c)| c != 0.0) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}·x^{i}y^{j}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut n = Neumaier::default();
        for v in iter {
            n.add(v);
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout_covers_all_monomials() {
        for d in 0..10 {
            let mut p = BivariatePoly::zero(d);
            let mut k = 0.0;
            for i in 0..=d {
                for j in 0..=d - i {
                    k += 1.0;
                    p.set(i, j, k);
                }
            }
            assert_eq!(p.terms().count(), monomial_count(d));
            let mut k = 0.0;
            for ((_, _), c) in p.terms() {
                k += 1.0;
                assert_eq!(c, k);
            }
        }
        assert_eq!(monomial_count(8), 45);
    }

    #[test]
    fn zero_evaluates_to_zero() {
        assert_eq!(BivariatePoly::zero(8).eval(3.5, -2.0), 0.0);
        assert_eq!(BivariatePoly::zero(8).total_degree(), None);
    }

    #[test]
    fn square_of_linear() {
        // (x + 2y - 1)^2 = x^2 + 4xy + 4y^2 - 2x - 4y + 1
        let p = BivariatePoly::linear(1.0, 2.0, -1.0).square();
        assert_eq!(p.get(2, 0), 1.0);
        assert_eq!(p.get(1, 1), 4.0);
        assert_eq!(p.get(0, 2), 4.0);
        assert_eq!(p.get(1, 0), -2.0);
        assert_eq!(p.get(0, 1), -4.0);
        assert_eq!(p.get(0, 0), 1.0);
        assert_eq!(p.total_degree(), Some(2));
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let n: Neumaier = [1e16, 1.0, -1e16].into_iter().collect();
        assert_eq!(n.sum(), 1.0);
    }

    fn small_poly(d: usize) -> impl Strategy<Value = BivariatePoly> {
        prop::collection::vec(-3.0..3.0f64, monomial_count(d)).prop_map(move |c| {
            let mut p = BivariatePoly::zero(d);
            let mut it = c.into_iter();
            for i in 0..=d {
                for j in 0..=d - i {
                    p.set(i, j, it.next().unwrap());
                }
            }
            p
        })
    }

    proptest! {
        #[test]
        fn product_evaluates_pointwise(p in small_poly(3), q in small_poly(4),
                                       x in -2.0..2.0f64, y in -2.0..2.0f64) {
            let lhs = p.mul(&q).eval(x, y);
            let rhs = p.eval(x, y) * q.eval(x, y);
            let scale = p.eval_abs(x, y) * q.eval_abs(x, y) + 1.0;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn sum_evaluates_pointwise(p in small_poly(2), q in small_poly(5),
                                   x in -2.0..2.0f64, y in -2.0..2.0f64) {
            let lhs = p.sub(&q).eval(x, y);
            let rhs = p.eval(x, y) - q.eval(x, y);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (p.eval_abs(x, y) + q.eval_abs(x, y) + 1.0));
        }
    }
}
