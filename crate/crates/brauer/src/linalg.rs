//! Dense linear algebra over a finite field: rank, kernels, span tests,
//! and complement construction. Vectors are `Vec<Elem>` in the ambient
//! coordinates; matrices are row lists.

use crate::field::{Elem, FqField};

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped)
/// and the pivot column of each.
pub fn rref(field: &FqField, rows: &[Vec<Elem>]) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = field.inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    let sub = field.mul(f, m[row][c]);
                    m[r][c] = field.sub(m[r][c], sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank(field: &FqField, rows: &[Vec<Elem>]) -> usize {
    rref(field, rows).0.len()
}

pub fn is_independent(field: &FqField, vecs: &[Vec<Elem>]) -> bool {
    rank(field, vecs) == vecs.len()
}

/// Whether `v` lies in the span of `vecs`.
pub fn in_span(field: &FqField, vecs: &[Vec<Elem>], v: &[Elem]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    let r0 = rank(field, vecs);
    let mut all: Vec<Vec<Elem>> = vecs.to_vec();
    all.push(v.to_vec());
    rank(field, &all) == r0
}

/// Basis of the kernel of the linear map with the given rows (acting on
/// column vectors of length `ncols`), in a fixed deterministic order
/// (free columns ascending).
pub fn kernel_basis(field: &FqField, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| {
                let mut v = vec![0; ncols];
                v[i] = 1;
                v
            })
            .collect();
    }
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    let (m, pivots) = rref(field, rows);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0 as Elem; ncols];
        v[free] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(m[ri][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solve `A x = b` for one solution, rows of `a` as equations.
pub fn solve(field: &FqField, a: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let (m, pivots) = rref(field, &aug);
    if pivots.contains(&ncols) {
        return None; // inconsistent
    }
    let mut x = vec![0 as Elem; ncols];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = m[ri][ncols];
    }
    Some(x)
}

/// Extend `vecs` (assumed independent) to a basis of the ambient space by
/// standard vectors, returning only the added complement vectors.
pub fn complement_basis(field: &FqField, vecs: &[Vec<Elem>], ambient: usize) -> Vec<Vec<Elem>> {
    let mut span: Vec<Vec<Elem>> = vecs.to_vec();
    let mut out = Vec::new();
    for i in 0..ambient {
        let mut e = vec![0 as Elem; ambient];
        e[i] = 1;
        if !in_span(field, &span, &e) {
            span.push(e.clone());
            out.push(e);
        }
    }
    out
}

/// Scale and add: `u + c * v`.
pub fn axpy(field: &FqField, u: &[Elem], c: Elem, v: &[Elem]) -> Vec<Elem> {
    u.iter().zip(v).map(|(&a, &b)| field.add(a, field.mul(c, b))).collect()
}

pub fn scale(field: &FqField, c: Elem, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&a| field.mul(c, a)).collect()
}

/// All nonzero vectors of length `n`, in the fixed total order (last
/// coordinate fastest). For sweep fallbacks at tiny scale.
pub fn nonzero_vectors(field: &FqField, n: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let q = field.q() as u64;
    let total = q.checked_pow(n as u32).unwrap_or(u64::MAX);
    (1..total).map(move |code| decode_vector(field, code, n))
}

/// Vector with the given code in the fixed order (big-endian digits).
pub fn decode_vector(field: &FqField, code: u64, n: usize) -> Vec<Elem> {
    let q = field.q() as u64;
    let mut v = vec![0 as Elem; n];
    let mut c = code;
    for i in (0..n).rev() {
        v[i] = (c % q) as Elem;
        c /= q;
    }
    v
}

pub fn is_zero_vec(v: &[Elem]) -> bool {
    v.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let f = FqField::new(5, 1).unwrap();
        let rows = vec![vec![1, 2, 3], vec![2, 4, 2], vec![0, 0, 0]];
        assert_eq!(rank(&f, &rows), 2);
        assert!(is_independent(&f, &rows[..2].to_vec()));
        assert!(!is_independent(&f, &rows));
    }

    #[test]
    fn kernel_solves() {
        let f = FqField::new(3, 1).unwrap();
        let rows = vec![vec![1, 1, 1]];
        let ker = kernel_basis(&f, &rows, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let s = v.iter().fold(0, |acc, &x| f.add(acc, x));
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn solve_system() {
        let f = FqField::new(7, 1).unwrap();
        let a = vec![vec![2, 1], vec![1, 3]];
        let b = vec![5, 4];
        let x = solve(&f, &a, &b).unwrap();
        for (row, &bi) in a.iter().zip(&b) {
            let mut acc = 0;
            for (&c, &xi) in row.iter().zip(&x) {
                acc = f.add(acc, f.mul(c, xi));
            }
            assert_eq!(acc, bi);
        }
        // inconsistent
        let a = vec![vec![1, 1], vec![1, 1]];
        assert!(solve(&f, &a, &[1, 2]).is_none());
    }

    #[test]
    fn complement_fills_dimension() {
        let f = FqField::new(2, 1).unwrap();
        let vecs = vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]];
        let comp = complement_basis(&f, &vecs, 4);
        assert_eq!(comp.len(), 2);
        let mut all = vecs.clone();
        all.extend(comp);
        assert_eq!(rank(&f, &all), 4);
    }

    #[test]
    fn vector_order() {
        let f = FqField::new(3, 1).unwrap();
        let first: Vec<Vec<Elem>> = nonzero_vectors(&f, 2).take(3).collect();
        assert_eq!(first, vec![vec![0, 1], vec![0, 2], vec![1, 0]]);
    }
}
