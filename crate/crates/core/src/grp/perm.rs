//! Permutation groups on a handful of points, used as small models
//! (symmetric and alternating groups) for rack computations.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// From disjoint cycles written with 1-based points.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Self {
        let mut img: Vec<u8> = (0..n as u8).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                img[x as usize - 1] = c[(i + 1) % c.len()] - 1;
            }
        }
        Perm(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x as usize] = i as u8;
        }
        Perm(v)
    }

    /// `g self g⁻¹`.
    pub fn conj_by(&self, g: &Perm) -> Perm {
        g.compose(self).compose(&g.inverse())
    }

    pub fn is_even(&self) -> bool {
        self.cycle_type().iter().filter(|&&l| l % 2 == 0).count() % 2 == 0
    }

    /// Cycle lengths including fixed points, in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut j = s;
            while !seen[j] {
                seen[j] = true;
                j = self.0[j] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, num_integer::lcm)
    }
}

/// The subgroup generated by `gens`, sorted.
pub fn closure(n: usize, gens: &[Perm]) -> Vec<Perm> {
    let mut seen: HashSet<Perm> = HashSet::from([Perm::identity(n)]);
    let mut queue = VecDeque::from([Perm::identity(n)]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<Perm> = seen.into_iter().collect();
    v.sort();
    v
}

pub fn symmetric(n: usize) -> Vec<Perm> {
    let gens = if n < 2 {
        vec![]
    } else {
        let cyc: Vec<u8> = (1..=n as u8).collect();
        vec![Perm::from_cycles(n, &[&[1, 2]]), Perm::from_cycles(n, &[&cyc])]
    };
    closure(n, &gens)
}

pub fn alternating(n: usize) -> Vec<Perm> {
    symmetric(n).into_iter().filter(Perm::is_even).collect()
}

/// Orbit of `x` under conjugation by `group`, sorted.
pub fn class_in(group: &[Perm], x: &Perm) -> Vec<Perm> {
    let set: HashSet<Perm> = group.iter().map(|g| x.conj_by(g)).collect();
    let mut v: Vec<Perm> = set.into_iter().collect();
    v.sort();
    v
}

/// Elements of `group` commuting with `x`.
pub fn centralizer_in(group: &[Perm], x: &Perm) -> Vec<Perm> {
    group.iter().filter(|g| g.compose(x) == x.compose(g)).cloned().collect()
}
