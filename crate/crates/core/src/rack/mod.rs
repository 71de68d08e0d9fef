//! Finite racks: a set with a self-distributive operation `▷` whose left
//! translations are bijections. Conjugacy classes with `x ▷ y = x y x⁻¹`
//! are the main source.
//!
//! Small racks keep the whole operation table. Large conjugation racks keep
//! only the elements and compute `x ▷ y` through the group on demand.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grp::perm::Perm;
use crate::grp::{ConjClass, GroupCtx};
use crate::matq::Mat;
use crate::{Error, Result};

/// Largest rack stored as a full table.
pub const TABLE_LIMIT: usize = 4096;
/// Largest rack whose subracks are enumerated exhaustively by default.
pub const EXHAUSTIVE_BOUND: usize = 22;
/// Hard cap for subset enumeration (subsets are bitmasks).
const MASK_BITS: usize = 64;

#[derive(Clone)]
enum Ops {
    Table(Vec<u32>),
    Conj {
        ctx: GroupCtx,
        inverses: Vec<Mat>,
        index: HashMap<Vec<u8>, u32>,
    },
}

/// An indexed finite rack, `op(i, j)` being the index of `x_i ▷ x_j`.
#[derive(Clone)]
pub struct FiniteRack {
    size: usize,
    ops: Ops,
    labels: Option<Vec<Mat>>,
}

impl fmt::Debug for FiniteRack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.ops {
            Ops::Table(_) => "table",
            Ops::Conj { .. } => "conjugation",
        };
        write!(f, "FiniteRack {{ size: {}, ops: {kind} }}", self.size)
    }
}

/// Why a table fails to be a rack.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RackViolation {
    /// An entry outside `0..size`, or a row of the wrong length.
    Malformed { row: u32 },
    /// `φ_x` is not a bijection.
    NotBijective { x: u32 },
    /// `x ▷ (y ▷ z) != (x ▷ y) ▷ (x ▷ z)`.
    NotSelfDistributive { x: u32, y: u32, z: u32 },
}

/// `{"size": n, "op": [[…], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackJson {
    pub size: usize,
    pub op: Vec<Vec<u32>>,
}

impl FiniteRack {
    /// Rack from an explicit table; the axioms are not checked here.
    pub fn from_table(op: Vec<Vec<u32>>) -> Result<Self> {
        let size = op.len();
        let mut flat = Vec::with_capacity(size * size);
        for (i, row) in op.iter().enumerate() {
            if row.len() != size || row.iter().any(|&v| v as usize >= size) {
                return Err(Error::Invalid(format!("rack table row {i} is malformed")));
            }
            flat.extend_from_slice(row);
        }
        if size == 0 {
            return Err(Error::Invalid("a rack needs at least one element".into()));
        }
        Ok(FiniteRack { size, ops: Ops::Table(flat), labels: None })
    }

    pub fn from_json(j: &RackJson) -> Result<Self> {
        if j.op.len() != j.size {
            return Err(Error::Invalid("rack size does not match the table".into()));
        }
        Self::from_table(j.op.clone())
    }

    pub fn to_json(&self) -> RackJson {
        RackJson { size: self.size, op: (0..self.size).map(|i| self.row(i)).collect() }
    }

    /// Conjugation rack on one class.
    pub fn from_class(class: &ConjClass) -> Self {
        Self::from_sorted_elements(class.ctx(), class.elements().to_vec())
    }

    /// Conjugation rack on a union of classes of one group, which must be
    /// closed under mutual conjugation.
    pub fn from_classes(classes: &[&ConjClass]) -> Result<Self> {
        let first = classes.first().ok_or_else(|| Error::Invalid("no classes given".into()))?;
        let ctx = first.ctx();
        let mut elems = Vec::new();
        for c in classes {
            if c.ctx().header() != ctx.header() {
                return Err(Error::Invalid("classes live in different groups".into()));
            }
            elems.extend_from_slice(c.elements());
        }
        Self::from_elements(ctx, elems)
    }

    /// Conjugation rack on an arbitrary ▷-closed set of group elements.
    pub fn from_elements(ctx: &GroupCtx, elems: Vec<Mat>) -> Result<Self> {
        let mut elems: Vec<Mat> = elems.iter().map(|x| ctx.canonicalize(x)).collect();
        elems.sort();
        elems.dedup();
        if elems.is_empty() {
            return Err(Error::Invalid("a rack needs at least one element".into()));
        }
        let r = Self::from_sorted_elements(ctx, elems);
        if let Ops::Table(t) = &r.ops {
            if t.contains(&u32::MAX) {
                return Err(Error::Invalid("element set is not closed under conjugation".into()));
            }
        } else {
            let labels = r.labels.as_ref().expect("conjugation racks are labelled");
            for x in labels {
                for y in labels {
                    if r.find(&ctx.conj(x, y)).is_none() {
                        return Err(Error::Invalid("element set is not closed under conjugation".into()));
                    }
                }
            }
        }
        Ok(r)
    }

    fn from_sorted_elements(ctx: &GroupCtx, elems: Vec<Mat>) -> Self {
        let size = elems.len();
        let index: HashMap<Vec<u8>, u32> =
            elems.iter().enumerate().map(|(i, x)| (x.pack(), i as u32)).collect();
        let inverses: Vec<Mat> = elems.iter().map(|x| x.inv().expect("group elements are invertible")).collect();
        let ops = if size <= TABLE_LIMIT {
            let mut t = vec![0u32; size * size];
            for i in 0..size {
                for j in 0..size {
                    let y = ctx.canonicalize(&elems[i].mul(&elems[j]).mul(&inverses[i]));
                    t[i * size + j] = index.get(&y.pack()).copied().unwrap_or(u32::MAX);
                }
            }
            Ops::Table(t)
        } else {
            Ops::Conj { ctx: ctx.clone(), inverses, index }
        };
        FiniteRack { size, ops, labels: Some(elems) }
    }

    /// Conjugation rack on a ▷-closed set of permutations.
    pub fn from_perms(elems: &[Perm]) -> Result<Self> {
        let mut elems = elems.to_vec();
        elems.sort();
        elems.dedup();
        let index: HashMap<&Perm, u32> = elems.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let mut op = Vec::with_capacity(elems.len());
        for x in &elems {
            let mut row = Vec::with_capacity(elems.len());
            for y in &elems {
                let z = y.conj_by(x);
                row.push(*index.get(&z).ok_or_else(|| {
                    Error::Invalid("permutation set is not closed under conjugation".into())
                })?);
            }
            op.push(row);
        }
        Self::from_table(op)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[Mat]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&Mat> {
        self.labels.as_ref().map(|l| &l[i])
    }

    /// Index of a group element in a conjugation rack.
    pub fn find(&self, x: &Mat) -> Option<usize> {
        match &self.ops {
            Ops::Conj { index, .. } => index.get(&x.pack()).map(|&i| i as usize),
            Ops::Table(_) => self.labels.as_ref()?.binary_search(x).ok(),
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.ops, Ops::Table(_))
    }

    /// `x_i ▷ x_j`.
    pub fn op(&self, i: usize, j: usize) -> usize {
        match &self.ops {
            Ops::Table(t) => t[i * self.size + j] as usize,
            Ops::Conj { ctx, inverses, index } => {
                let l = self.labels.as_ref().expect("conjugation racks are labelled");
                let y = ctx.canonicalize(&l[i].mul(&l[j]).mul(&inverses[i]));
                index[&y.pack()] as usize
            }
        }
    }

    pub fn row(&self, i: usize) -> Vec<u32> {
        (0..self.size).map(|j| self.op(i, j) as u32).collect()
    }

    /// Exhaustive check of bijectivity and self-distributivity.
    pub fn check_rack_axioms(&self) -> std::result::Result<(), RackViolation> {
        let n = self.size;
        if let Ops::Table(t) = &self.ops {
            if let Some(k) = t.iter().position(|&v| v as usize >= n) {
                return Err(RackViolation::Malformed { row: (k / n) as u32 });
            }
        }
        let rows: Vec<Vec<u32>> = (0..n).map(|i| self.row(i)).collect();
        for (x, row) in rows.iter().enumerate() {
            let mut seen = vec![false; n];
            for &v in row {
                if std::mem::replace(&mut seen[v as usize], true) {
                    return Err(RackViolation::NotBijective { x: x as u32 });
                }
            }
        }
        for x in 0..n {
            let rx = &rows[x];
            for y in 0..n {
                let xy = rx[y] as usize;
                let ry = &rows[y];
                let rxy = &rows[xy];
                for z in 0..n {
                    if rx[ry[z] as usize] != rxy[rx[z] as usize] {
                        return Err(RackViolation::NotSelfDistributive { x: x as u32, y: y as u32, z: z as u32 });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_rack(&self) -> bool {
        self.check_rack_axioms().is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        let all: Vec<usize> = (0..self.size).collect();
        self.is_abelian_on(&all)
    }

    /// Whether `x ▷ y = y` for all `x, y` in `set`.
    pub fn is_abelian_on(&self, set: &[usize]) -> bool {
        set.iter().all(|&x| set.iter().all(|&y| self.op(x, y) == y))
    }

    /// Orbits of the inner group on the whole rack, each sorted, ordered by
    /// smallest element.
    pub fn inn_orbits(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.size).collect();
        self.inn_orbits_on(&all)
    }

    /// Orbits of `Inn(Y)` on a subrack `Y`.
    pub fn inn_orbits_on(&self, set: &[usize]) -> Vec<Vec<usize>> {
        let pos: HashMap<usize, usize> = set.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let mut uf = UnionFind::new(set.len());
        for &y in set {
            for (k, &z) in set.iter().enumerate() {
                let w = self.op(y, z);
                let kw = *pos.get(&w).expect("inn_orbits_on needs a ▷-closed set");
                uf.union(k, kw);
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, &x) in set.iter().enumerate() {
            groups.entry(uf.find(k)).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        for o in &mut out {
            o.sort_unstable();
        }
        out.sort();
        out
    }

    pub fn is_indecomposable(&self) -> bool {
        self.inn_orbits().len() == 1
    }

    pub fn is_indecomposable_on(&self, set: &[usize]) -> bool {
        self.inn_orbits_on(set).len() == 1
    }

    /// Orbit of `x` under the group generated by `φ_a`, `a ∈ gens`.
    pub fn orbit_under(&self, gens: &[usize], x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        seen[x] = true;
        let mut out = vec![x];
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for &a in gens {
                let z = self.op(a, y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                    queue.push_back(z);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Smallest ▷-closed superset of `seed`, sorted.
    pub fn subrack_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.size];
        let mut members: Vec<usize> = Vec::new();
        let mut queue = VecDeque::new();
        for &x in seed {
            if !inside[x] {
                inside[x] = true;
                members.push(x);
                queue.push_back(x);
            }
        }
        while let Some(x) = queue.pop_front() {
            let mut k = 0;
            while k < members.len() {
                let y = members[k];
                for z in [self.op(x, y), self.op(y, x)] {
                    if !inside[z] {
                        inside[z] = true;
                        members.push(z);
                        queue.push_back(z);
                    }
                }
                k += 1;
            }
        }
        members.sort_unstable();
        members
    }

    pub fn is_subrack(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.size];
        for &x in set {
            inside[x] = true;
        }
        !set.is_empty() && set.iter().all(|&x| set.iter().all(|&y| inside[self.op(x, y)]))
    }

    /// The subrack on `set` as a rack in its own right, indices renumbered
    /// in the order of `set`.
    pub fn restrict(&self, set: &[usize]) -> Result<FiniteRack> {
        let pos: HashMap<usize, u32> = set.iter().enumerate().map(|(k, &x)| (x, k as u32)).collect();
        let mut op = Vec::with_capacity(set.len());
        for &x in set {
            let mut row = Vec::with_capacity(set.len());
            for &y in set {
                row.push(*pos.get(&self.op(x, y)).ok_or_else(|| Error::Invalid("set is not a subrack".into()))?);
            }
            op.push(row);
        }
        let mut r = FiniteRack::from_table(op)?;
        r.labels = self.labels.as_ref().map(|l| set.iter().map(|&x| l[x].clone()).collect());
        Ok(r)
    }

    /// Every subrack, by increasing size and then lexicographically on the
    /// sorted index lists. Refused above `bound` elements.
    pub fn enumerate_subracks(&self, bound: usize) -> Result<impl Iterator<Item = Vec<usize>>> {
        let masks = self.subrack_masks(bound)?;
        Ok(masks.into_iter().map(mask_to_vec))
    }

    /// Subracks as bitmasks, in the same order as `enumerate_subracks`.
    pub fn subrack_masks(&self, bound: usize) -> Result<Vec<u64>> {
        let n = self.size;
        if n > bound.min(MASK_BITS) {
            return Err(Error::bound("exhaustive subrack enumeration", bound.min(MASK_BITS), n));
        }
        let rows: Vec<Vec<u32>> = (0..n).map(|i| self.row(i)).collect();
        let closure = |seed: u64| -> u64 {
            let mut set = seed;
            let mut queue = mask_to_vec(seed);
            while let Some(a) = queue.pop() {
                let mut rest = set;
                while rest != 0 {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    for c in [rows[a][b] as usize, rows[b][a] as usize] {
                        if set & (1 << c) == 0 {
                            set |= 1 << c;
                            queue.push(c);
                        }
                    }
                }
            }
            set
        };
        // Ganter's next-closure walk over all closed sets
        let mut out = Vec::new();
        let mut current: u64 = 0;
        'outer: loop {
            let mut found = false;
            for i in (0..n).rev() {
                if current & (1 << i) != 0 {
                    continue;
                }
                let low = current & ((1u64 << i) - 1);
                let next = closure(low | (1 << i));
                if next & !current & ((1u64 << i) - 1) == 0 {
                    current = next;
                    found = true;
                    break;
                }
            }
            if !found {
                break 'outer;
            }
            out.push(current);
            if current.count_ones() as usize == n {
                break;
            }
        }
        out.sort_by(|&a, &b| {
            a.count_ones().cmp(&b.count_ones()).then_with(|| {
                if a == b {
                    std::cmp::Ordering::Equal
                } else {
                    let d = a ^ b;
                    if a & (d & d.wrapping_neg()) != 0 {
                        std::cmp::Ordering::Less
                    } else {
                        std::cmp::Ordering::Greater
                    }
                }
            })
        });
        Ok(out)
    }

    /// Every subrack is abelian or indecomposable (exhaustive, bounded).
    pub fn is_sober(&self, bound: usize) -> Result<Option<Vec<usize>>> {
        for s in self.enumerate_subracks(bound)? {
            if !self.is_abelian_on(&s) && !self.is_indecomposable_on(&s) {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    /// Every subrack generated by two elements is abelian or
    /// indecomposable. Returns the first offending pair. For a homogeneous
    /// rack the first element may be fixed.
    pub fn austere_violation(&self, homogeneous: bool) -> Option<(usize, usize)> {
        let firsts: Vec<usize> = if homogeneous { vec![0] } else { (0..self.size).collect() };
        for &a in &firsts {
            for b in 0..self.size {
                if a == b {
                    continue;
                }
                let y = self.subrack_closure(&[a, b]);
                if !self.is_abelian_on(&y) && !self.is_indecomposable_on(&y) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

fn mask_to_vec(mut m: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}
