//! Weyl groups of types B/C (signed permutations) and A (permutations),
//! with the reflection-representation invariants used to pick out cuspidal
//! classes and to compute orders of F-stable maximal tori.
//!
//! A signed permutation of rank `n` is stored as a permutation of
//! `{1, ..., 2n}` commuting with `j -> 2n+1-j`. On the reflection
//! representation `Q^n` the point `2n+1-j` stands for `-e_j`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SignedPermJson")]
pub struct SignedPerm {
    n: usize,
    images: Vec<usize>,
}

#[derive(Deserialize)]
struct SignedPermJson {
    n: usize,
    images: Vec<usize>,
}

impl TryFrom<SignedPermJson> for SignedPerm {
    type Error = Error;
    fn try_from(j: SignedPermJson) -> Result<Self> {
        SignedPerm::new(j.n, j.images)
    }
}

impl SignedPerm {
    /// Validates that `images` (1-based) is a permutation of `{1..2n}`
    /// commuting with `j -> 2n+1-j`.
    pub fn new(n: usize, images: Vec<usize>) -> Result<Self> {
        if images.len() != 2 * n {
            return Err(Error::Invalid(format!("expected {} images, got {}", 2 * n, images.len())));
        }
        let mut seen = vec![false; 2 * n + 1];
        for &x in &images {
            if x == 0 || x > 2 * n || seen[x] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation of 1..{}", 2 * n)));
            }
            seen[x] = true;
        }
        let bar = |j: usize| 2 * n + 1 - j;
        for j in 1..=2 * n {
            if images[bar(j) - 1] != bar(images[j - 1]) {
                return Err(Error::Invalid(format!("images break the symmetry at {j}")));
            }
        }
        Ok(SignedPerm { n, images })
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm { n, images: (1..=2 * n).collect() }
    }

    /// Product of the given cycles (1-based points), each cycle applied as
    /// written; the cycles must describe a symmetric permutation.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=2 * n).collect();
        for c in cycles.iter().rev() {
            let mut step: Vec<usize> = (1..=2 * n).collect();
            for (i, &x) in c.iter().enumerate() {
                if x == 0 || x > 2 * n {
                    return Err(Error::Invalid(format!("point {x} out of range")));
                }
                step[x - 1] = c[(i + 1) % c.len()];
            }
            images = images.iter().map(|&x| step[x - 1]).collect();
        }
        SignedPerm::new(n, images)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    /// `(self * other)(j) = self(other(j))`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        assert_eq!(self.n, other.n, "rank mismatch");
        SignedPerm { n: self.n, images: other.images.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut images = vec![0; 2 * self.n];
        for (j, &x) in self.images.iter().enumerate() {
            images[x - 1] = j + 1;
        }
        SignedPerm { n: self.n, images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &x)| x == j + 1)
    }

    /// Matrix on `Q^n`: column `j` is the image of `e_j`.
    pub fn reflection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut m = vec![vec![0i64; n]; n];
        for j in 1..=n {
            let x = self.apply(j);
            if x <= n {
                m[x - 1][j - 1] = 1;
            } else {
                m[2 * n - x][j - 1] = -1;
            }
        }
        m
    }

    /// Cycles of the underlying permutation of `{1..n}` with the sign
    /// picked up around each cycle, as sorted `(length, negative)` pairs.
    pub fn signed_cycle_type(&self) -> Vec<(usize, bool)> {
        let n = self.n;
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let (mut len, mut neg, mut j) = (0, false, start);
            loop {
                seen[j] = true;
                len += 1;
                let x = self.apply(j);
                let (next, flip) = if x <= n { (x, false) } else { (2 * n + 1 - x, true) };
                neg ^= flip;
                j = next;
                if j == start {
                    break;
                }
            }
            out.push((len, neg));
        }
        out.sort_unstable();
        out
    }

    /// Disjoint cycles on `{1..2n}`, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; 2 * self.n + 1];
        let mut out = Vec::new();
        for start in 1..=2 * self.n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                c.push(j);
                j = self.apply(j);
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n`, largest first part first, in reverse
/// lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The cycle `(h h+1 ... k 2n+1-h ... 2n+1-k)` in rank `n`.
pub fn c_block(h: usize, k: usize, n: usize) -> Result<SignedPerm> {
    if !(1 <= h && h <= k && k <= n) {
        return Err(Error::Invalid(format!("need 1 <= h <= k <= n, got h = {h}, k = {k}, n = {n}")));
    }
    let mut cycle: Vec<usize> = (h..=k).collect();
    cycle.extend((h..=k).map(|j| 2 * n + 1 - j));
    SignedPerm::from_cycles(n, &[cycle])
}

/// Product of the blocks `c_{1,d1} c_{d1+1,d1+d2} ...` for `lambda = (d1, d2, ...)`.
pub fn c_lambda(lambda: &Partition) -> SignedPerm {
    let n = lambda.size();
    let mut w = SignedPerm::identity(n);
    let mut start = 1;
    for &d in lambda.parts() {
        let b = c_block(start, start + d - 1, n).expect("blocks stay in range");
        w = w.compose(&b);
        start += d;
    }
    w
}

/// The Coxeter element `c_{(n)}` of type B/C.
pub fn coxeter_b(n: usize) -> SignedPerm {
    c_lambda(&Partition(vec![n]))
}

/// rk(id - w) on the reflection representation.
pub fn absolute_length(w: &SignedPerm) -> usize {
    rank(&id_minus(&w.reflection_matrix()))
}

pub fn is_cuspidal(w: &SignedPerm) -> bool {
    absolute_length(w) == w.rank()
}

/// |det(q id - w)| on the reflection representation.
pub fn torus_order(w: &SignedPerm, q: u64) -> BigUint {
    det(&q_id_minus(&w.reflection_matrix(), q)).magnitude().clone()
}

/// Permutation matrix of a 0-based permutation of `{0..n-1}`.
fn perm_matrix(sigma: &[usize]) -> Vec<Vec<i64>> {
    let n = sigma.len();
    let mut m = vec![vec![0i64; n]; n];
    for (j, &x) in sigma.iter().enumerate() {
        m[x][j] = 1;
    }
    m
}

fn check_perm(sigma: &[usize]) -> Result<()> {
    let mut seen = vec![false; sigma.len()];
    for &x in sigma {
        if x >= sigma.len() || seen[x] {
            return Err(Error::Invalid(format!("{sigma:?} is not a permutation of 0..{}", sigma.len())));
        }
        seen[x] = true;
    }
    Ok(())
}

/// |det(q id - sigma)| on the natural permutation representation `Q^n`
/// (the torus of GL_n attached to `sigma`).
pub fn torus_order_type_a(sigma: &[usize], q: u64) -> Result<BigUint> {
    check_perm(sigma)?;
    Ok(det(&q_id_minus(&perm_matrix(sigma), q)).magnitude().clone())
}

/// Cuspidal in type A_{n-1}: no nonzero fixed vector in the reflection
/// representation, i.e. rk(id - sigma) = n - 1 on `Q^n`.
pub fn type_a_cuspidal_check(sigma: &[usize]) -> Result<bool> {
    check_perm(sigma)?;
    let n = sigma.len();
    Ok(n >= 1 && rank(&id_minus(&perm_matrix(sigma))) == n - 1)
}

/// One `c_lambda` for every partition of `n`.
pub fn cuspidal_representatives(n: usize) -> Vec<(Partition, SignedPerm)> {
    partitions(n).into_iter().map(|l| { let w = c_lambda(&l); (l, w) }).collect()
}

/// Every element of W(B_n), in no particular order.
pub fn all_signed_perms(n: usize) -> Vec<SignedPerm> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k + 1);
                next.push(q);
            }
        }
        perms = next;
    }
    let mut out = Vec::with_capacity(perms.len() << n);
    for p in &perms {
        for signs in 0u32..(1 << n) {
            let mut images = vec![0; 2 * n];
            for j in 1..=n {
                let x = if signs >> (j - 1) & 1 == 1 { 2 * n + 1 - p[j - 1] } else { p[j - 1] };
                images[j - 1] = x;
                images[2 * n - j] = 2 * n + 1 - x;
            }
            out.push(SignedPerm { n, images });
        }
    }
    out
}

fn id_minus(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    q_id_minus(m, 1)
}

fn q_id_minus(m: &[Vec<i64>], q: u64) -> Vec<Vec<BigInt>> {
    m.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| {
                    let d = if i == j { BigInt::from(q) } else { BigInt::zero() };
                    d - x
                })
                .collect()
        })
        .collect()
}

/// Fraction-free Gaussian elimination; returns (rank, determinant when
/// square).
fn bareiss(mut a: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        if piv != r {
            a.swap(piv, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    let det = if rows == cols && r == rows {
        if rows == 0 { BigInt::one() } else { sign * &a[rows - 1][cols - 1] }
    } else {
        BigInt::zero()
    };
    (r, det)
}

fn rank(a: &[Vec<BigInt>]) -> usize {
    bareiss(a.to_vec()).0
}

fn det(a: &[Vec<BigInt>]) -> BigInt {
    bareiss(a.to_vec()).1
}
