//! Exact roots of unity, `exp(2πi·num/den)` with `0 <= num < den` in lowest terms.

use std::ops::Mul;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let n = num.rem_euclid(den as i64) as u64;
        let g = gcd(n, den);
        Self { num: n / g, den: den / g }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn pow(&self, k: i64) -> Self {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Self::new(n as i64, self.den)
    }

    pub fn inverse(&self) -> Self {
        Self::new(-(self.num as i64), self.den)
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn to_complex(&self) -> Complex64 {
        // exact values on the axes avoid 6e-17 noise in printed tables
        match (self.num * 4) % self.den {
            0 => match self.num * 4 / self.den {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            },
            _ => Complex64::from_polar(1.0, std::f64::consts::TAU * self.num as f64 / self.den as f64),
        }
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let l = lcm(self.den, rhs.den);
        let n = self.num * (l / self.den) + rhs.num * (l / rhs.den);
        RootOfUnity::new((n % l) as i64, l)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let i = RootOfUnity::new(1, 4);
        assert_eq!(i * i, RootOfUnity::new(1, 2));
        assert_eq!(i * i * i * i, RootOfUnity::ONE);
        assert_eq!(i.inverse(), RootOfUnity::new(3, 4));
        assert_eq!(RootOfUnity::new(2, 6), RootOfUnity::new(1, 3));
        assert_eq!(RootOfUnity::new(1, 3) * RootOfUnity::new(1, 2), RootOfUnity::new(5, 6));
        assert_eq!(i.pow(-1), i.inverse());
        assert_eq!(i.to_complex(), Complex64::new(0.0, 1.0));
        assert!((RootOfUnity::new(1, 3).to_complex() - Complex64::new(-0.5, 0.75f64.sqrt())).norm() < 1e-15);
    }
}
