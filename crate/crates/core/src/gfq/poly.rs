//! Dense univariate polynomials over a [`Field`], coefficients in ascending
//! powers. The zero polynomial has an empty coefficient vector.

use serde::{Deserialize, Serialize};

use super::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(f: &Field) -> Self {
        Poly {
            coeffs: vec![f.one()],
        }
    }

    /// The indeterminate `X`.
    pub fn x(f: &Field) -> Self {
        Poly {
            coeffs: vec![0, f.one()],
        }
    }

    pub fn constant(c: u32) -> Self {
        Self::new(vec![c])
    }

    /// `X - c`.
    pub fn linear(f: &Field, c: u32) -> Self {
        Poly {
            coeffs: vec![f.neg(c), f.one()],
        }
    }

    pub fn monomial(f: &Field, c: u32, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        let _ = f;
        Self::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; only for callers that
    /// have already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self, f: &Field) -> bool {
        self.lead() == f.one()
    }

    pub fn is_one(&self, f: &Field) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == f.one()
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(c)
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(c)
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: u32, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Poly, f: &Field) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let inv_lead = f.inv(d.lead()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![0u32; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dd], inv_lead);
            q[k] = c;
            if c != 0 {
                for (j, &b) in d.coeffs.iter().enumerate() {
                    r[k + j] = f.sub(r[k + j], f.mul(c, b));
                }
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly, f: &Field) -> Poly {
        self.divrem(d, f).1
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.lead()).expect("nonzero");
        self.scale(inv, f)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly, f: &Field) -> Poly {
        self.mul(other, f).rem(m, f)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly, f: &Field) -> Poly {
        let mut base = self.rem(m, f);
        let mut acc = Poly::one(f).rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m, f);
            }
        }
        acc
    }

    pub fn pow(&self, e: u32, f: &Field) -> Poly {
        let mut acc = Poly::one(f);
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(f.from_int(i as u64), a))
            .collect();
        Poly::new(c)
    }

    pub fn eval(&self, x: u32, f: &Field) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Lists the coefficients as `p`-adic coefficient vectors, the format
    /// used for serialization.
    pub fn to_coeff_vectors(&self, f: &Field) -> Vec<Vec<u32>> {
        self.coeffs.iter().map(|&c| f.coeffs(c)).collect()
    }

    pub fn display(&self, f: &Field) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = f.display(c);
            let coef = if c == f.one() && i > 0 {
                String::new()
            } else if cs.contains('+') && i > 0 {
                format!("({cs})")
            } else {
                cs
            };
            let var = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            let sep = if !coef.is_empty() && !var.is_empty() { "*" } else { "" };
            parts.push(format!("{coef}{sep}{var}"));
        }
        parts.join(" + ")
    }
}
