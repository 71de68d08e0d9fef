//! Integer arithmetic around q-numbers, gcd identities and primitive prime
//! divisors of q^n - 1.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use crate::gfq::{is_prime_u64, make_field};
use crate::gfq::Poly;
use crate::matq::poly_is_irreducible;
use crate::{Error, Result};

/// Inputs above this many bits are not handed to the factoring routine.
pub const FACTOR_BITS: u64 = 256;

/// (n)_q = 1 + q + ... + q^{n-1}.
pub fn q_number(n: u32, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut acc = BigUint::zero();
    for _ in 0..n {
        acc = acc * &q + 1u32;
    }
    acc
}

pub fn q_power_minus_one(q: u64, n: u32) -> BigUint {
    Pow::pow(BigUint::from(q), n) - 1u32
}

/// Splits q = p^m, or returns `None` when q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).find(|d| q.is_multiple_of(*d) || d * d > q).filter(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GcdCheck {
    pub label: &'static str,
    pub statement: &'static str,
    /// False when the hypothesis of a conditional identity is not met.
    pub applies: bool,
    #[serde(serialize_with = "ser_big_vec")]
    pub lhs: Vec<BigUint>,
    #[serde(serialize_with = "ser_big")]
    pub rhs: BigUint,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GcdIdentities {
    pub n: u64,
    pub q: u64,
    pub checks: Vec<GcdCheck>,
}

impl GcdIdentities {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| !c.applies || c.holds)
    }
}

/// Evaluates both sides of the four gcd identities relating n, q - 1 and
/// (n)_q for an odd prime n.
pub fn gcd_identities(n: u64, q: u64) -> Result<GcdIdentities> {
    if n.is_multiple_of(2) || !is_prime_u64(n) {
        return Err(Error::Precondition(format!("n = {n} must be an odd prime")));
    }
    if q < 2 {
        return Err(Error::Precondition(format!("q = {q} must be at least 2")));
    }
    let nn = BigUint::from(n);
    let qm1 = BigUint::from(q - 1);
    let qn = q_number(n as u32, q);
    let n_qm1 = nn.gcd(&qm1);
    let mut checks = Vec::with_capacity(4);

    let applies = n_qm1.is_one();
    let a = nn.gcd(&q_power_minus_one(q, n as u32));
    let b = nn.gcd(&qn);
    checks.push(GcdCheck {
        label: "i",
        statement: "(n, q-1) = 1 implies (n, q^n-1) = (n, (n)_q) = 1",
        applies,
        holds: a.is_one() && b.is_one(),
        lhs: vec![a, b],
        rhs: BigUint::one(),
    });

    let applies = n_qm1 == nn;
    let a = (&nn * &nn).gcd(&qn);
    let b = nn.gcd(&qn);
    checks.push(GcdCheck {
        label: "ii",
        statement: "(n, q-1) = n implies (n^2, (n)_q) = (n, (n)_q) = n",
        applies,
        holds: a == nn && b == nn,
        lhs: vec![a, b],
        rhs: nn.clone(),
    });

    let a = qm1.gcd(&qn);
    checks.push(GcdCheck {
        label: "iii",
        statement: "(q-1, (n)_q) = (n, q-1)",
        applies: true,
        holds: a == n_qm1,
        lhs: vec![a],
        rhs: n_qm1.clone(),
    });

    let a = (&nn * &qm1).gcd(&qn);
    checks.push(GcdCheck {
        label: "iv",
        statement: "(n(q-1), (n)_q) = (n, q-1)",
        applies: true,
        holds: a == n_qm1,
        lhs: vec![a],
        rhs: n_qm1,
    });
    Ok(GcdIdentities { n, q, checks })
}

/// Both sides of (n(q0-1), q0^d - 1) = (q0-1)(n, (d)_{q0}).
pub fn subfield_gcd(n: u64, q0: u64, d: u32) -> (BigUint, BigUint) {
    let qm1 = BigUint::from(q0 - 1);
    let lhs = (BigUint::from(n) * &qm1).gcd(&q_power_minus_one(q0, d));
    let rhs = &qm1 * BigUint::from(n).gcd(&q_number(d, q0));
    (lhs, rhs)
}

/// Complete prime factorization, failing when the input is too large or the
/// factoring routine gives up on a cofactor.
pub fn factorize(x: &BigUint) -> Result<BTreeMap<BigUint, usize>> {
    if x.is_zero() {
        return Err(Error::Invalid("cannot factor 0".into()));
    }
    let bits = x.bits();
    if bits > FACTOR_BITS {
        return Err(Error::bound("factoring input bits", FACTOR_BITS as usize, bits as usize));
    }
    if x.is_one() {
        return Ok(BTreeMap::new());
    }
    if let Some(small) = x.to_u128() {
        return Ok(num_prime::nt_funcs::factorize128(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect());
    }
    let (found, rest) = num_prime::nt_funcs::factors(x.clone(), None);
    match rest {
        Some(rest) if !rest.is_empty() => Err(Error::bound(
            "factoring: unfactored cofactor bits",
            0,
            rest.iter().map(|r| r.bits() as usize).max().unwrap_or(0),
        )),
        _ => Ok(found),
    }
}

/// Primes dividing q^n - 1 but no q^e - 1 with e < n, in increasing order.
pub fn primitive_prime_divisors(q: u64, n: u32) -> Result<Vec<BigUint>> {
    if q < 2 || n == 0 {
        return Err(Error::Precondition(format!("need q >= 2 and n >= 1, got q = {q}, n = {n}")));
    }
    let qb = BigUint::from(q);
    let mut out = Vec::new();
    for l in factorize(&q_power_minus_one(q, n))?.into_keys() {
        let r = &qb % &l;
        let mut pw = r.clone();
        let mut primitive = true;
        for _ in 1..n {
            if pw.is_one() {
                primitive = false;
                break;
            }
            pw = pw * &r % &l;
        }
        if primitive {
            out.push(l);
        }
    }
    Ok(out)
}

/// Whether some primitive prime divisor of q^n - 1 divides `order`.
pub fn ppd_element_check(order: &BigUint, q: u64, n: u32) -> Result<bool> {
    if order.is_zero() {
        return Err(Error::Precondition("order must be positive".into()));
    }
    Ok(primitive_prime_divisors(q, n)?
        .iter()
        .any(|l| (order % l).is_zero()))
}

/// Irreducibility of X^n + eps over F_q for n >= 2, by the closed form:
/// only X^2 + 1 with q = 3 mod 4 is irreducible.
pub fn xn_eps_irreducible(n: u32, eps: i8, q: u64) -> bool {
    n == 2 && eps == 1 && q % 4 == 3
}

/// The same question answered by factoring X^n + eps in F_q[X].
pub fn xn_eps_irreducible_direct(n: u32, eps: i8, q: u64) -> Result<bool> {
    let (p, m) = prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
    if eps != 1 && eps != -1 {
        return Err(Error::Precondition("eps must be 1 or -1".into()));
    }
    let f = make_field(p, m)?;
    let c = if eps == 1 { f.one() } else { f.neg(f.one()) };
    let mut coeffs = vec![f.zero(); n as usize + 1];
    coeffs[0] = c;
    coeffs[n as usize] = f.one();
    Ok(poly_is_irreducible(&Poly::new(coeffs), &f))
}

/// Big integers go to JSON as decimal strings.
pub(crate) fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn ser_big_vec<S: serde::Serializer>(
    xs: &[BigUint],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

#[cfg(test)]
mod tests;
