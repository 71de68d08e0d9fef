use crate::gfq::{Field, Poly};

use super::Mat;

/// Characteristic polynomial via reduction to upper Hessenberg form and the
/// determinant recurrence on its leading principal minors.
pub fn charpoly(a: &Mat) -> Poly {
    let n = a.n();
    let f: &Field = a.field();
    let mut h: Vec<Vec<u32>> = a.to_rows();

    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let pinv = f.inv(h[j + 1][j]).expect("nonzero pivot");
        for i in j + 2..n {
            let u = f.mul(h[i][j], pinv);
            if u == 0 {
                continue;
            }
            for k in 0..n {
                let v = f.mul(u, h[j + 1][k]);
                h[i][k] = f.sub(h[i][k], v);
            }
            for row in h.iter_mut() {
                let v = f.mul(u, row[i]);
                row[j + 1] = f.add(row[j + 1], v);
            }
        }
    }

    // p[m] is the characteristic polynomial of the leading m×m block.
    let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
    p.push(Poly::one(f));
    for m in 1..=n {
        let mm = m - 1;
        let lin = Poly::new(vec![f.neg(h[mm][mm]), f.one()]);
        let mut cur = lin.mul(&p[m - 1], f);
        let mut t = f.one();
        for i in (1..m).rev() {
            // t = h[i][i-1] * ... * h[m-1][m-2]
            t = f.mul(t, h[i][i - 1]);
            if t == 0 {
                break;
            }
            let c = f.mul(t, h[i - 1][mm]);
            cur = cur.sub(&p[i - 1].scale(c, f), f);
        }
        p.push(cur);
    }
    p.pop().unwrap()
}

/// Minimal polynomial as the least common multiple of the local minimal
/// polynomials of the standard basis vectors, each read off from the first
/// linear dependence in its Krylov sequence.
pub fn minpoly(a: &Mat) -> Poly {
    let n = a.n();
    let f: &Field = a.field();
    let mut acc = Poly::one(f);
    for i in 0..n {
        let mut v = vec![0u32; n];
        v[i] = f.one();
        let local = krylov_annihilator(a, v);
        let g = acc.gcd(&local, f);
        acc = acc.mul(&local, f).divrem(&g, f).0;
        if acc.deg() == n {
            break;
        }
    }
    acc.monic(f)
}

fn krylov_annihilator(a: &Mat, v0: Vec<u32>) -> Poly {
    let n = a.n();
    let f: &Field = a.field();
    // reduced Krylov vectors with pivots and the polynomial combination that
    // produced them
    let mut basis: Vec<(Vec<u32>, Vec<u32>, usize)> = Vec::new();
    let mut v = v0;
    for k in 0..=n {
        let mut w = v.clone();
        let mut comb = vec![0u32; n + 1];
        comb[k] = f.one();
        for (b, c, piv) in &basis {
            if w[*piv] == 0 {
                continue;
            }
            let factor = f.div(w[*piv], b[*piv]).expect("pivot nonzero");
            for (x, &y) in w.iter_mut().zip(b) {
                *x = f.sub(*x, f.mul(factor, y));
            }
            for (x, &y) in comb.iter_mut().zip(c) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
        match w.iter().position(|&x| x != 0) {
            None => return Poly::new(comb),
            Some(piv) => basis.push((w, comb, piv)),
        }
        v = a.apply(&v);
    }
    unreachable!("Krylov sequence has a dependence within n+1 steps")
}

/// Semisimple means the minimal polynomial is squarefree.
pub fn is_semisimple(a: &Mat) -> bool {
    super::is_squarefree(&minpoly(a), a.field())
}

/// Regular (cyclic) means the minimal and characteristic polynomials agree.
pub fn is_regular(a: &Mat) -> bool {
    minpoly(a).deg() == a.n()
}
