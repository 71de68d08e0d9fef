//! Finite fields GF(p^m).
//!
//! Elements are stored as `u32` codes. The code of an element is the integer
//! whose base-`p` digits, most significant first, are the coefficients of the
//! element in ascending powers. Numeric order on codes is therefore the
//! lexicographic order on coefficient vectors (constant term compared
//! first), and that order is used for every canonical choice downstream.
//!
//! Extensions are towers: `GF(q^d) = GF(q)[Y]/(g)` with `g` the smallest
//! monic irreducible of degree `d` over the base. Because the base sits in the
//! leading digits of the code, a tower over `F_p` coincides with
//! [`make_field`].

mod poly;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matq::Mat;
pub use poly::Poly;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 1024;
const MUL_TABLE_LIMIT: u32 = 256;

/// Serializable description of a field. For a field built over a prime
/// field, `modulus` lists the coefficients of the defining polynomial over
/// `F_p`. For a tower over a non-prime base, `base` is present and the
/// modulus coefficients are base elements given by their canonical rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<FieldSpec>>,
}

impl FieldSpec {
    /// Rebuilds the runtime field described by this spec.
    pub fn build(&self) -> Result<Arc<Field>> {
        let base = match &self.base {
            Some(b) => b.build()?,
            None => Field::prime(self.p)?,
        };
        if self.base.is_none() && self.m == 1 && self.modulus == [0, 1] {
            return Ok(base);
        }
        let g = Poly::new(self.modulus.clone());
        let d = g
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Invalid("modulus must have positive degree".into()))?;
        if d as u32 * base.m != self.m {
            return Err(Error::Invalid("modulus degree does not match m".into()));
        }
        if self.modulus.iter().any(|&c| c >= base.q) || !g.is_monic(&base) {
            return Err(Error::Invalid("modulus must be monic over the base".into()));
        }
        if !crate::matq::poly_is_irreducible(&g, &base) {
            return Err(Error::Reducible);
        }
        Field::tower(base, g)
    }
}

#[derive(Debug)]
enum AddRule {
    Xor,
    Table(Vec<u32>),
    Digits,
}

/// Runtime field with arithmetic tables.
#[derive(Debug)]
pub struct Field {
    spec: FieldSpec,
    p: u32,
    m: u32,
    q: u32,
    base: Option<Arc<Field>>,
    modulus: Poly,
    one: u32,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: AddRule,
    mul_table: Option<Vec<u32>>,
    q_minus_one_factors: Vec<u64>,
}

fn cache() -> &'static Mutex<HashMap<FieldSpec, Arc<Field>>> {
    static CACHE: OnceLock<Mutex<HashMap<FieldSpec, Arc<Field>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds GF(p^m) with the lexicographically smallest monic irreducible
/// modulus of degree `m` over `F_p`.
pub fn make_field(p: u64, m: u32) -> Result<Arc<Field>> {
    if m == 0 {
        return Err(Error::Invalid("extension degree must be at least 1".into()));
    }
    let prime = Field::prime(p)?;
    check_bound(p, m)?;
    prime.extension(m)
}

fn check_bound(p: u64, m: u32) -> Result<()> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.saturating_mul(p);
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge { p, m });
        }
    }
    Ok(())
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn mod_pow_u64(b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = (b % m) as u128;
    let mut acc: u128 = 1;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

impl Field {
    /// The prime field `F_p`, with modulus `X`.
    pub fn prime(p: u64) -> Result<Arc<Field>> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_ORDER {
            return Err(Error::FieldTooLarge { p, m: 1 });
        }
        let spec = FieldSpec {
            p,
            m: 1,
            modulus: vec![0, 1],
            base: None,
        };
        if let Some(f) = cache().lock().unwrap().get(&spec) {
            return Ok(f.clone());
        }
        let pp = p as u32;
        let factors = prime_factors_u64(p - 1);
        let mulp = |a: u32, b: u32| ((a as u64 * b as u64) % p) as u32;
        let powp = |a: u32, e: u64| mod_pow_u64(a as u64, e, p) as u32;
        let generator = if p == 2 {
            1
        } else {
            (2..pp)
                .find(|&g| factors.iter().all(|&r| powp(g, (p - 1) / r) != 1))
                .expect("primitive root exists")
        };
        let mut f = Field {
            spec: spec.clone(),
            p: pp,
            m: 1,
            q: pp,
            base: None,
            modulus: Poly::new(vec![0, 1]),
            one: 1,
            generator,
            exp: Vec::new(),
            log: Vec::new(),
            neg: (0..pp).map(|a| (pp - a) % pp).collect(),
            add: AddRule::Digits,
            mul_table: None,
            q_minus_one_factors: factors,
        };
        f.fill_tables(mulp);
        let f = Arc::new(f);
        cache().lock().unwrap().insert(spec, f.clone());
        Ok(f)
    }

    /// Degree-`d` extension of `self`, built over the smallest monic
    /// irreducible of degree `d` in the canonical order.
    pub fn extension(self: &Arc<Self>, d: u32) -> Result<Arc<Field>> {
        if d == 0 {
            return Err(Error::Invalid("extension degree must be at least 1".into()));
        }
        check_bound(self.p as u64, self.m * d)?;
        if d == 1 && self.base.is_none() {
            return Ok(self.clone());
        }
        let g = smallest_irreducible(self, d as usize);
        Field::tower(self.clone(), g)
    }

    fn tower(base: Arc<Field>, g: Poly) -> Result<Arc<Field>> {
        let d = g.deg() as u32;
        let m = base.m * d;
        check_bound(base.p as u64, m)?;
        let base_spec = if base.base.is_none() {
            None
        } else {
            Some(Box::new(base.spec.clone()))
        };
        let spec = FieldSpec {
            p: base.p as u64,
            m,
            modulus: g.coeffs().to_vec(),
            base: base_spec,
        };
        if let Some(f) = cache().lock().unwrap().get(&spec) {
            return Ok(f.clone());
        }
        let q0 = base.q;
        let q = q0.pow(d);
        let p = base.p;
        let one = base.one * q0.pow(d - 1);
        let to_poly = |a: u32| -> Poly {
            let c = (0..d)
                .map(|i| (a / q0.pow(d - 1 - i)) % q0)
                .collect::<Vec<_>>();
            Poly::new(c)
        };
        let from_poly = |f: &Poly| -> u32 {
            (0..d).fold(0u32, |acc, i| acc * q0 + f.coeff(i as usize))
        };
        let slow_mul = |a: u32, b: u32| -> u32 {
            from_poly(&to_poly(a).mulmod(&to_poly(b), &g, &base))
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let mut acc = one;
            let mut b = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, b);
                }
                b = slow_mul(b, b);
                e >>= 1;
            }
            acc
        };
        let factors = prime_factors_u64(q as u64 - 1);
        let generator = (1..q)
            .find(|&a| {
                slow_pow(a, q as u64 - 1) == one
                    && factors
                        .iter()
                        .all(|&r| slow_pow(a, (q as u64 - 1) / r) != one)
            })
            .expect("multiplicative group is cyclic");
        let neg = (0..q).map(|a| digit_neg(a, p, m)).collect();
        let mut f = Field {
            spec: spec.clone(),
            p,
            m,
            q,
            base: Some(base.clone()),
            modulus: g.clone(),
            one,
            generator,
            exp: Vec::new(),
            log: Vec::new(),
            neg,
            add: AddRule::Digits,
            mul_table: None,
            q_minus_one_factors: factors,
        };
        f.fill_tables(slow_mul);
        let f = Arc::new(f);
        cache().lock().unwrap().insert(spec, f.clone());
        Ok(f)
    }

    fn fill_tables(&mut self, mul: impl Fn(u32, u32) -> u32) {
        let q = self.q;
        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n);
        let mut x = self.one;
        for _ in 0..n {
            exp.push(x);
            x = mul(x, self.generator);
        }
        debug_assert_eq!(x, self.one);
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        exp.extend_from_within(..n);
        self.exp = exp;
        self.log = log;
        self.add = if self.p == 2 {
            AddRule::Xor
        } else if q <= ADD_TABLE_LIMIT {
            let (p, m) = (self.p, self.m);
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, m);
                }
            }
            AddRule::Table(t)
        } else {
            AddRule::Digits
        };
        if q <= MUL_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 1..q {
                for b in 1..q {
                    let s = self.log[a as usize] + self.log[b as usize];
                    t[(a * q + b) as usize] = self.exp[s as usize];
                }
            }
            self.mul_table = Some(t);
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.base.is_none()
    }

    /// The field this one was built over (`None` for a prime field).
    pub fn base(&self) -> Option<&Arc<Field>> {
        self.base.as_ref()
    }

    /// Degree over [`Field::base`].
    pub fn relative_degree(&self) -> u32 {
        self.modulus.deg() as u32
    }

    /// Defining polynomial over the base field.
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn same_as(&self, other: &Field) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        self.one
    }

    /// The smallest primitive element in canonical order.
    pub fn primitive_element(&self) -> u32 {
        self.generator
    }

    /// Image of the integer `k` under `Z -> F_p -> GF(q)`.
    pub fn from_int(&self, k: u64) -> u32 {
        ((k % self.p as u64) as u32) * (self.one)
    }

    /// Image of a signed integer.
    pub fn from_i64(&self, k: i64) -> u32 {
        let p = self.p as i64;
        self.from_int(k.rem_euclid(p) as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            AddRule::Xor => a ^ b,
            AddRule::Table(t) => t[(a * self.q + b) as usize],
            AddRule::Digits => digit_add(a, b, self.p, self.m),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.mul_table {
            return t[(a * self.q + b) as usize];
        }
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; the exponent is reduced mod `q - 1` for nonzero `a`.
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { self.one } else { 0 };
        }
        let n = (self.q - 1) as u64;
        let k = (self.log[a as usize] as u64 * (e % n)) % n;
        self.exp[k as usize]
    }

    /// `a^e` for a signed exponent (`a` must be nonzero when `e < 0`).
    pub fn pow_i(&self, a: u32, e: i64) -> Result<u32> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// `a^(base^k)`. With `base = p` this is the `k`-th power of the absolute
    /// Frobenius.
    pub fn frobenius(&self, a: u32, base: u64, k: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        let e = mod_pow_u64(base, k as u64, n);
        // base^k ≡ 0 mod n only when n = 1
        let e = if e == 0 { n } else { e };
        self.pow(a, e)
    }

    /// Multiplicative order, by descending through the prime factors of q-1.
    pub fn element_order(&self, a: u32) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let mut t = (self.q - 1) as u64;
        for &r in &self.q_minus_one_factors {
            while t.is_multiple_of(r) && self.pow(a, t / r) == self.one {
                t /= r;
            }
        }
        Ok(t)
    }

    /// All `x` with `x^n = 1`, in canonical order.
    pub fn roots_of_unity(&self, n: u64) -> Vec<u32> {
        let qm1 = (self.q - 1) as u64;
        let g = num_gcd(n, qm1);
        let step = qm1 / g;
        let mut v: Vec<u32> = (0..g)
            .map(|i| self.exp[(i * step) as usize])
            .collect();
        v.sort_unstable();
        v
    }

    /// Discrete logarithm to the base [`Field::primitive_element`].
    pub fn log(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.log[a as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize].is_multiple_of(2)
    }

    /// Some square root, if one exists (the smaller of the two in canonical
    /// order).
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        if self.p == 2 {
            return Some(self.pow(a, (self.q as u64) / 2));
        }
        let l = self.log[a as usize];
        if l % 2 == 1 {
            return None;
        }
        let r = self.exp[(l / 2) as usize];
        Some(r.min(self.neg(r)))
    }

    /// Coefficient vector over `F_p` (ascending powers, flattened through
    /// the tower).
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.m as usize];
        let mut x = a;
        for i in (0..self.m as usize).rev() {
            out[i] = x % self.p;
            x /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<u32> {
        if c.len() != self.m as usize || c.iter().any(|&d| d >= self.p) {
            return Err(Error::Invalid(format!(
                "expected {} residues mod {}",
                self.m, self.p
            )));
        }
        Ok(c.iter().fold(0u32, |acc, &d| acc * self.p + d))
    }

    /// Coordinates over the base field in the power basis `1, Y, ..., Y^{d-1}`.
    pub fn base_coords(&self, a: u32) -> Vec<u32> {
        let d = self.relative_degree();
        let q0 = self.base_order();
        (0..d).map(|i| (a / q0.pow(d - 1 - i)) % q0).collect()
    }

    pub fn from_base_coords(&self, c: &[u32]) -> u32 {
        let q0 = self.base_order();
        c.iter().fold(0u32, |acc, &b| acc * q0 + b)
    }

    fn base_order(&self) -> u32 {
        self.base.as_ref().map_or(self.q, |b| b.q)
    }

    /// Embeds a base-field element.
    pub fn embed_base(&self, b: u32) -> u32 {
        let d = self.relative_degree();
        b * self.base_order().pow(d - 1)
    }

    /// Inverse of [`Field::embed_base`] on elements of the base field.
    pub fn restrict_to_base(&self, a: u32) -> Option<u32> {
        let d = self.relative_degree();
        let s = self.base_order().pow(d - 1);
        a.is_multiple_of(s).then_some(a / s)
    }

    /// The power-basis generator `Y` of this field over its base.
    pub fn base_generator(&self) -> u32 {
        let d = self.relative_degree();
        if d == 1 {
            return self.neg(self.embed_base(self.modulus.coeff(0)));
        }
        let base_one = self.base.as_ref().map_or(1, |b| b.one);
        base_one * self.base_order().pow(d - 2)
    }

    /// Matrix of multiplication by `alpha` over the base field, columns
    /// indexed by the power basis.
    pub fn regular_representation(&self, alpha: u32) -> Mat {
        let base = self
            .base
            .clone()
            .expect("regular representation needs an extension");
        let d = self.relative_degree() as usize;
        let y = self.base_generator();
        let mut m = Mat::zero(&base, d);
        let mut col = alpha;
        for j in 0..d {
            for (i, c) in self.base_coords(col).into_iter().enumerate() {
                m.set(i, j, c);
            }
            col = self.mul(col, y);
        }
        m
    }

    pub fn display(&self, a: u32) -> String {
        if self.m == 1 {
            a.to_string()
        } else {
            let c = self.coeffs(a);
            format!(
                "[{}]",
                c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            )
        }
    }
}

fn digit_add(a: u32, b: u32, p: u32, m: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..m {
        let d = (a % p + b % p) % p;
        out += d * scale;
        scale *= p;
        a /= p;
        b /= p;
    }
    out
}

fn digit_neg(a: u32, p: u32, m: u32) -> u32 {
    let mut a = a;
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..m {
        out += ((p - a % p) % p) * scale;
        scale *= p;
        a /= p;
    }
    out
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest monic irreducible of degree `d` over `f`, comparing the tail
/// coefficients `(a_0, ..., a_{d-1})` lexicographically.
pub fn smallest_irreducible(f: &Field, d: usize) -> Poly {
    let q = f.order() as u64;
    let total = q.pow(d as u32);
    for c in 0..total {
        let mut coeffs = vec![0u32; d + 1];
        for (i, slot) in coeffs.iter_mut().take(d).enumerate() {
            *slot = ((c / q.pow((d - 1 - i) as u32)) % q) as u32;
        }
        coeffs[d] = f.one();
        if d > 1 && coeffs[0] == 0 {
            continue;
        }
        let g = Poly::new(coeffs);
        if crate::matq::poly_is_irreducible(&g, f) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
