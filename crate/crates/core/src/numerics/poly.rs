//! Univariate polynomials over the rationals, coefficients stored lowest degree first.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::mat::Mat;
use super::rational::{to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip();
        Poly::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Quotient and remainder of polynomial long division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (Poly::new(Vec::new()), self.clone());
        }
        let dl = d.coeffs.len();
        let mut quot = vec![Rational::zero(); rem.len() - dl + 1];
        let inv = d.lead().recip();
        for k in (0..quot.len()).rev() {
            let f = &rem[k + dl - 1] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &f * c;
            }
            quot[k] = f;
        }
        rem.truncate(dl - 1);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors: same roots, all simple.
    pub fn squarefree(&self) -> Poly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }
}

/// Characteristic polynomial `det(λI − A)` by the Faddeev–LeVerrier recursion, exactly.
pub fn characteristic(a: &Mat) -> Poly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        m = next;
        let am = a.mul(&m);
        c[n - k] = -am.trace() / Rational::from_integer((k as i64).into());
    }
    Poly::new(c)
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

/// All complex roots of a real polynomial with simple roots (coefficients lowest first).
///
/// Degrees 1 and 2 are solved in closed form; higher degrees use Aberth–Ehrlich
/// simultaneous iteration followed by a Newton polish.
pub fn simple_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    for v in &mut c {
        *v /= lead;
    }
    match d {
        1 => return vec![Complex64::new(-c[0], 0.0)],
        2 => return quadratic(c[1], c[0]),
        _ => {}
    }
    // Fujiwara bound on root moduli.
    let bound = (0..d)
        .map(|i| {
            let v = libm::fabs(c[i]);
            let v = if i == 0 { v / 2.0 } else { v };
            libm::pow(v, 1.0 / (d - i) as f64)
        })
        .fold(0.0, f64::max)
        * 2.0;
    let radius = if bound > 0.0 { bound } else { 1.0 };
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = horner(&c, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-17 {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *zi);
            let step = p / dp;
            if !step.is_finite() || step.norm() == 0.0 {
                break;
            }
            *zi -= step;
        }
    }
    z
}

fn quadratic(b: f64, c: f64) -> Vec<Complex64> {
    // x^2 + b x + c
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let s = libm::sqrt(disc);
        let q = -0.5 * (b + if b >= 0.0 { s } else { -s });
        if q == 0.0 {
            return vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        vec![Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / 2.0;
        let im = libm::sqrt(-disc) / 2.0;
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Relative backward error `|p(z)| / Σ|c_i||z|^i` of a computed root.
pub fn backward_error(coeffs: &[f64], z: Complex64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let r = z.norm();
    let scale = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + libm::fabs(*c));
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn characteristic_of_2x2() {
        // [[0.5,-0.5],[1,0.5]] -> l^2 - l + 3/4
        let a: Mat = "0.5, -0.5; 1, 0.5".parse().unwrap();
        assert_eq!(characteristic(&a), Poly::new(vec![ratio(3, 4), int(-1), int(1)]));
        let b: Mat = "0.5, -0.25; 1, 1.5".parse().unwrap();
        assert_eq!(characteristic(&b), p(&[1, -2, 1]));
    }

    #[test]
    fn characteristic_of_triangular() {
        let a = Mat::from_i64(&[&[2, 1, 0], &[0, 3, 5], &[0, 0, -1]]);
        // (l-2)(l-3)(l+1) = l^3 - 4l^2 + l + 6
        assert_eq!(characteristic(&a), p(&[6, 1, -4, 1]));
    }

    #[test]
    fn squarefree_removes_multiplicity() {
        let q = p(&[1, -2, 1]);
        assert_eq!(q.squarefree(), p(&[-1, 1]));
        // (l-1)^2 (l+2) = l^3 - 3l + 2
        assert_eq!(p(&[2, -3, 0, 1]).squarefree(), p(&[-2, 1, 1]));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[5, 0, 3, 2]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        let mut back = vec![Rational::zero(); 4];
        for (i, qi) in q.coeffs().iter().enumerate() {
            for (j, bj) in b.coeffs().iter().enumerate() {
                back[i + j] += qi * bj;
            }
        }
        for (i, ri) in r.coeffs().iter().enumerate() {
            back[i] += ri;
        }
        assert_eq!(Poly::new(back), a);
    }

    #[test]
    fn aberth_finds_cubic_roots() {
        // (x-1)(x+2)(x-3) = x^3 - 2x^2 - 5x + 6
        let mut roots = simple_roots(&[6.0, -5.0, -2.0, 1.0]);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (r, e) in roots.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((r.re - e).abs() < 1e-12 && r.im.abs() < 1e-12, "{r}");
        }
    }

    #[test]
    fn aberth_finds_complex_roots() {
        // x^4 + 1
        let roots = simple_roots(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(roots.len(), 4);
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-13);
            assert!(backward_error(&[1.0, 0.0, 0.0, 0.0, 1.0], r) < 1e-14);
        }
    }
}
