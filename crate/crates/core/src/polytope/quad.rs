//! Exact arithmetic in Q(√5).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

type Q = Ratio<i64>;

/// `a + b√5` with rational `a`, `b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    pub a: Q,
    pub b: Q,
}

impl QuadField {
    pub fn new(a: Q, b: Q) -> Self {
        QuadField { a, b }
    }

    pub fn int(n: i64) -> Self {
        QuadField { a: Q::from_integer(n), b: Q::zero() }
    }

    pub fn rational(p: i64, q: i64) -> Self {
        QuadField { a: Q::new(p, q), b: Q::zero() }
    }

    /// The golden ratio (1 + √5)/2.
    pub fn phi() -> Self {
        QuadField { a: Q::new(1, 2), b: Q::new(1, 2) }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadField { a: self.a, b: -self.b }
    }

    /// `a² − 5b²`, the product with the conjugate.
    pub fn norm(&self) -> Q {
        self.a * self.a - Q::from_integer(5) * self.b * self.b
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == 0 || sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        // opposite signs: compare a² with 5b²
        match (self.a * self.a).cmp(&(Q::from_integer(5) * self.b * self.b)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("√5 is irrational"),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in Q(√5)");
        QuadField { a: self.a / n, b: -self.b / n }
    }

    /// Floating-point value; diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let f = |q: &Q| *q.numer() as f64 / *q.denom() as f64;
        f(&self.a) + f(&self.b) * 5f64.sqrt()
    }
}

fn sign(q: &Q) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for QuadField {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QuadField { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for QuadField {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QuadField { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Mul for QuadField {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        QuadField {
            a: self.a * o.a + Q::from_integer(5) * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

impl Div for QuadField {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for QuadField {
    type Output = Self;
    fn neg(self) -> Self {
        QuadField { a: -self.a, b: -self.b }
    }
}

impl Ord for QuadField {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl PartialOrd for QuadField {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Zero for QuadField {
    fn zero() -> Self {
        QuadField::zero()
    }
    fn is_zero(&self) -> bool {
        QuadField::is_zero(self)
    }
}

impl One for QuadField {
    fn one() -> Self {
        QuadField::one()
    }
}

impl fmt::Debug for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}√5", self.a, self.b)
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Rank of a set of vectors by exact elimination.
pub fn rank(rows: &[Vec<QuadField>]) -> usize {
    let mut m: Vec<Vec<QuadField>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c] * inv;
            for j in c..cols {
                let t = m[r][j];
                m[i][j] = m[i][j] - f * t;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Dimension of the affine hull of a point set.
pub fn affine_dim(points: &[&[QuadField]]) -> isize {
    let Some(first) = points.first() else { return -1 };
    let rows: Vec<Vec<QuadField>> =
        points[1..].iter().map(|p| p.iter().zip(first.iter()).map(|(&x, &y)| x - y).collect()).collect();
    rank(&rows) as isize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn golden_ratio_identities() {
        let phi = QuadField::phi();
        assert_eq!(phi * phi, phi + QuadField::one());
        assert_eq!(phi.recip(), phi - QuadField::one());
        assert_eq!(phi.signum(), 1);
        assert_eq!((QuadField::one() - phi).signum(), -1);
        assert!((phi.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn affine_dimension() {
        let p = |v: [i64; 3]| v.map(QuadField::int).to_vec();
        let pts = [p([0, 0, 0]), p([1, 0, 0]), p([0, 1, 0]), p([1, 1, 0])];
        let refs: Vec<&[QuadField]> = pts.iter().map(|v| v.as_slice()).collect();
        assert_eq!(affine_dim(&refs), 2);
    }

    proptest! {
        #[test]
        fn norm_is_product_with_conjugate(a in -50i64..50, b in -50i64..50, c in 1i64..9) {
            let x = QuadField::new(Q::new(a, c), Q::new(b, c));
            let p = x * x.conjugate();
            prop_assert!(p.b.is_zero());
            prop_assert_eq!(p.a, x.norm());
            let approx = x.to_f64() * x.conjugate().to_f64();
            let exact = *p.a.numer() as f64 / *p.a.denom() as f64;
            prop_assert!((approx - exact).abs() < 1e-6);
            if !x.is_zero() {
                prop_assert_eq!(x.signum() as f64, x.to_f64().signum());
                prop_assert_eq!(x * x.recip(), QuadField::one());
            }
        }
    }
}
