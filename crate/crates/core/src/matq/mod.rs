//! Dense matrices over finite fields and the linear algebra built on them.

mod charpoly;
mod factor;
mod forms;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfq::{Field, FieldSpec, Poly};

pub use charpoly::{charpoly, is_regular, is_semisimple, minpoly};
pub use factor::{
    eigenvalue_orbit, is_squarefree, poly_factor, poly_is_irreducible, EigenOrbit,
};
pub use forms::{antidiag, form_membership, gram, phi, Form};

/// A dense matrix over a finite field, row-major.
///
/// Equality, hashing and ordering look only at the shape and entries; the
/// field is assumed shared by the operands being compared.
#[derive(Clone)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Arc<Field>,
    e: Vec<u32>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.e == other.e
    }
}

impl Eq for Mat {}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.e.hash(state);
    }
}

impl PartialOrd for Mat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Row-major entry sequence compared in the canonical element order.
impl Ord for Mat {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols, &self.e).cmp(&(other.rows, other.cols, &other.e))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.display(self.get(i, j)))
                .collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zero(field: &Arc<Field>, n: usize) -> Mat {
        Self::zeros(field, n, n)
    }

    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            field: field.clone(),
            e: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Mat {
        Self::scalar(field, n, field.one())
    }

    pub fn scalar(field: &Arc<Field>, n: usize, c: u32) -> Mat {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn diag(field: &Arc<Field>, d: &[u32]) -> Mat {
        let mut m = Self::zero(field, d.len());
        for (i, &c) in d.iter().enumerate() {
            m.set(i, i, c);
        }
        m
    }

    /// Builds from rows of element codes.
    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<u32>]) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        if rows.iter().flatten().any(|&x| x >= field.order()) {
            return Err(Error::Invalid("entry outside the field".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            field: field.clone(),
            e: rows.concat(),
        })
    }

    /// Builds from rows of signed integers mapped into the prime field.
    pub fn from_ints(field: &Arc<Field>, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(x));
            }
        }
        m
    }

    pub fn from_fn(field: &Arc<Field>, n: usize, mut f: impl FnMut(usize, usize) -> u32) -> Mat {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn entries(&self) -> &[u32] {
        &self.e
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.e[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.e[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.e[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn check_field(&self, other: &Mat) {
        debug_assert!(
            self.field.same_as(&other.field),
            "matrices over different fields"
        );
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.check_field(other);
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = &*self.field;
        let (r, k, c) = (self.rows, self.cols, other.cols);
        let mut out = vec![0u32; r * c];
        for i in 0..r {
            let orow = &mut out[i * c..(i + 1) * c];
            for t in 0..k {
                let a = self.e[i * k + t];
                if a == 0 {
                    continue;
                }
                let brow = &other.e[t * c..(t + 1) * c];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    if b != 0 {
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        Mat {
            rows: r,
            cols: c,
            field: self.field.clone(),
            e: out,
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.check_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &*self.field;
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            e: self.e.iter().zip(&other.e).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        self.map(|f, a| f.neg(a))
    }

    pub fn scale(&self, c: u32) -> Mat {
        self.map(|f, a| f.mul(a, c))
    }

    pub fn map(&self, g: impl Fn(&Field, u32) -> u32) -> Mat {
        let f = &*self.field;
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            e: self.e.iter().map(|&a| g(f, a)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn trace(&self) -> u32 {
        (0..self.n()).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar() == Some(self.field.one())
    }

    /// The scalar `c` if this matrix is `c·I`.
    pub fn as_scalar(&self) -> Option<u32> {
        if !self.is_square() {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { c } else { 0 };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn det(&self) -> u32 {
        let n = self.n();
        let f = &*self.field;
        let mut a = self.e.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    a.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[c * n + c];
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = f.mul(a[r * n + c], pinv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.mul(factor, a[c * n + j]);
                    a[r * n + j] = f.sub(a[r * n + j], v);
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse, pivoting on the first nonzero entry of each column.
    pub fn inv(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &*self.field;
        let w = 2 * n;
        let mut a = vec![0u32; n * w];
        for i in 0..n {
            for j in 0..n {
                a[i * w + j] = self.get(i, j);
            }
            a[i * w + n + i] = f.one();
        }
        for c in 0..n {
            let piv = (c..n).find(|&r| a[r * w + c] != 0).ok_or(Error::Singular)?;
            if piv != c {
                for j in 0..w {
                    a.swap(piv * w + j, c * w + j);
                }
            }
            let pinv = f.inv(a[c * w + c])?;
            for j in 0..w {
                a[c * w + j] = f.mul(a[c * w + j], pinv);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let factor = a[r * w + c];
                if factor == 0 {
                    continue;
                }
                for j in 0..w {
                    let v = f.mul(factor, a[c * w + j]);
                    a[r * w + j] = f.sub(a[r * w + j], v);
                }
            }
        }
        let mut m = Self::zero(&self.field, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, a[i * w + n + j]);
            }
        }
        Ok(m)
    }

    /// `self^e`; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Mat> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::identity(&self.field, self.n());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// `g · self · g⁻¹`.
    pub fn conj_by(&self, g: &Mat) -> Result<Mat> {
        Ok(g.mul(self).mul(&g.inv()?))
    }

    /// Entrywise `a ↦ a^(base^k)`.
    pub fn frobenius(&self, base: u64, k: u32) -> Mat {
        self.map(|f, a| f.frobenius(a, base, k))
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let f = &*self.field;
        let (r, c) = (self.rows, self.cols);
        let mut a = self.e.clone();
        let mut rank = 0;
        for col in 0..c {
            let Some(piv) = (rank..r).find(|&i| a[i * c + col] != 0) else {
                continue;
            };
            for j in 0..c {
                a.swap(piv * c + j, rank * c + j);
            }
            let pinv = f.inv(a[rank * c + col]).expect("nonzero");
            for i in rank + 1..r {
                let factor = f.mul(a[i * c + col], pinv);
                if factor == 0 {
                    continue;
                }
                for j in col..c {
                    let v = f.mul(factor, a[rank * c + j]);
                    a[i * c + j] = f.sub(a[i * c + j], v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// A basis of the right kernel `{v : self·v = 0}`, from the reduced row
    /// echelon form.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = &*self.field;
        let (r, c) = (self.rows, self.cols);
        let mut a = self.e.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            let Some(piv) = (row..r).find(|&i| a[i * c + col] != 0) else {
                continue;
            };
            for j in 0..c {
                a.swap(piv * c + j, row * c + j);
            }
            let pinv = f.inv(a[row * c + col]).expect("nonzero");
            for j in 0..c {
                a[row * c + j] = f.mul(a[row * c + j], pinv);
            }
            for i in 0..r {
                let factor = a[i * c + col];
                if i == row || factor == 0 {
                    continue;
                }
                for j in 0..c {
                    let v = f.mul(factor, a[row * c + j]);
                    a[i * c + j] = f.sub(a[i * c + j], v);
                }
            }
            pivots.push(col);
            row += 1;
            if row == r {
                break;
            }
        }
        (0..c)
            .filter(|j| !pivots.contains(j))
            .map(|free| {
                let mut v = vec![0; c];
                v[free] = f.one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(a[k * c + free]);
                }
                v
            })
            .collect()
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let f = &*self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Block-diagonal matrix.
    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let field = blocks[0].field.clone();
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(&field, n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.put(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Assembles a block matrix; every row of blocks must have matching heights
    /// and every column matching widths.
    pub fn from_blocks(grid: &[Vec<Mat>]) -> Mat {
        let field = grid[0][0].field.clone();
        let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let mut m = Self::zeros(&field, heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (heights[bi], widths[bj]), "block shape");
                m.put(r0, c0, b);
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        m
    }

    /// Writes `b` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Self::zeros(&self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        m
    }

    /// Compact byte key used for set membership during enumeration.
    pub fn pack(&self) -> Vec<u8> {
        if self.field.order() <= 256 {
            self.e.iter().map(|&x| x as u8).collect()
        } else {
            self.e
                .iter()
                .flat_map(|&x| [x as u8, (x >> 8) as u8, (x >> 16) as u8])
                .collect()
        }
    }

    pub fn unpack(field: &Arc<Field>, n: usize, bytes: &[u8]) -> Mat {
        let e = if field.order() <= 256 {
            bytes.iter().map(|&b| b as u32).collect()
        } else {
            bytes
                .chunks(3)
                .map(|c| c[0] as u32 | (c[1] as u32) << 8 | (c[2] as u32) << 16)
                .collect()
        };
        Mat {
            rows: n,
            cols: n,
            field: field.clone(),
            e,
        }
    }

    /// Matrix over `base` obtained by replacing each entry with its regular
    /// representation over the base of `self.field()`.
    pub fn restrict_scalars(&self) -> Mat {
        let f = &self.field;
        let base = f.base().expect("restriction needs an extension field").clone();
        let d = f.relative_degree() as usize;
        let mut m = Self::zeros(&base, self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.put(i * d, j * d, &f.regular_representation(self.get(i, j)));
            }
        }
        m
    }

    /// Maps every entry from the base field into `ext`.
    pub fn embed_into(&self, ext: &Arc<Field>) -> Mat {
        let mut m = Self::zeros(ext, self.rows, self.cols);
        for (slot, &a) in m.e.iter_mut().zip(&self.e) {
            *slot = ext.embed_base(a);
        }
        m
    }

    pub fn to_json(&self) -> MatJson {
        MatJson {
            n: self.rows,
            field: self.field.spec().clone(),
            rows: (0..self.rows)
                .map(|i| self.row(i).iter().map(|&a| self.field.coeffs(a)).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &MatJson) -> Result<Mat> {
        let field = j.field.build()?;
        Self::from_json_in(j, &field)
    }

    /// Parses a matrix whose field is already known.
    pub fn from_json_in(j: &MatJson, field: &Arc<Field>) -> Result<Mat> {
        if field.spec() != &j.field {
            return Err(Error::FieldMismatch);
        }
        if j.rows.len() != j.n {
            return Err(Error::Dimension("row count differs from n".into()));
        }
        let rows = j
            .rows
            .iter()
            .map(|r| r.iter().map(|c| field.from_coeffs(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = Self::from_rows(field, &rows)?;
        if m.cols != j.n {
            return Err(Error::Dimension("matrix is not n×n".into()));
        }
        Ok(m)
    }
}

/// Serialized matrix: `{"n", "field", "rows"}` with entries as coefficient
/// arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatJson {
    pub n: usize,
    pub field: FieldSpec,
    pub rows: Vec<Vec<Vec<u32>>>,
}

impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatJson::deserialize(d)?;
        Mat::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// Companion matrix of a monic polynomial: ones on the subdiagonal and the
/// negated low coefficients in the last column, so its characteristic
/// polynomial is `f` itself.
pub fn companion(f: &Poly, field: &Arc<Field>) -> Result<Mat> {
    let n = f
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Precondition("companion needs degree ≥ 1".into()))?;
    if !f.is_monic(field) {
        return Err(Error::Precondition("companion needs a monic polynomial".into()));
    }
    let mut m = Mat::zero(field, n);
    for i in 1..n {
        m.set(i, i - 1, field.one());
    }
    for i in 0..n {
        m.set(i, n - 1, field.neg(f.coeff(i)));
    }
    Ok(m)
}
