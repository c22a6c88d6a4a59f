//! Dense linear algebra over F_p.

use crate::gf::Prime;

/// Reduced row echelon basis of a subspace of F_p^n.
#[derive(Clone, Debug)]
pub struct Echelon {
    prime: Prime,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(prime: Prime, ncols: usize) -> Self {
        Echelon { prime, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<u32>>>(prime: Prime, ncols: usize, rows: I) -> Self {
        let mut e = Echelon::new(prime, ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Rows sorted by pivot column.
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, mut v: Vec<u32>) -> Vec<u32> {
        let p = self.prime;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                axpy(p, &mut v, p.neg(f), row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Adds a vector; returns false if it was already in the span.
    pub fn insert(&mut self, v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        let p = self.prime;
        let mut v = self.reduce(v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = p.inv(v[c]);
        for x in v.iter_mut() {
            *x = p.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let f = row[c];
            if f != 0 {
                axpy(p, row, p.neg(f), &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, v);
        true
    }
}

/// `y += a * x` over F_p.
#[inline]
pub fn axpy(p: Prime, y: &mut [u32], a: u32, x: &[u32]) {
    if a == 0 {
        return;
    }
    let q = p.get();
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = (*yi + a * xi) % q;
    }
}

pub fn rank(prime: Prime, ncols: usize, rows: &[Vec<u32>]) -> usize {
    Echelon::from_rows(prime, ncols, rows.iter().cloned()).rank()
}

/// Basis of `{c : sum_j c_j cols[j] = 0}`, where each column has length `m`.
pub fn kernel(prime: Prime, m: usize, cols: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = cols.len();
    let mut aug = Echelon::new(prime, m + n);
    let mut out = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut row = Vec::with_capacity(m + n);
        row.extend_from_slice(col);
        row.resize(m + n, 0);
        row[m + j] = 1;
        aug.insert(row);
    }
    for row in aug.rows() {
        if row[..m].iter().all(|&x| x == 0) {
            out.push(row[m..].to_vec());
        }
    }
    out
}

/// Dimension of the intersection of two subspaces given by spanning sets.
pub fn intersection_dim(prime: Prime, ncols: usize, a: &[Vec<u32>], b: &[Vec<u32>]) -> usize {
    let ra = rank(prime, ncols, a);
    let rb = rank(prime, ncols, b);
    let rab = Echelon::from_rows(prime, ncols, a.iter().chain(b).cloned()).rank();
    ra + rb - rab
}

/// Matrix-vector product where `cols[j]` is column j.
pub fn combine(prime: Prime, m: usize, cols: &[Vec<u32>], coeffs: &[u32]) -> Vec<u32> {
    let mut out = vec![0; m];
    for (c, col) in coeffs.iter().zip(cols) {
        axpy(prime, &mut out, *c, col);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_rank(p: u32, rows: &[Vec<u32>]) -> usize {
        // Count distinct vectors in the span; rank = log_p of that count.
        let n = rows.first().map_or(0, Vec::len);
        let mut span = std::collections::BTreeSet::from([vec![0u32; n]]);
        for r in rows {
            let mut next = span.clone();
            for s in &span {
                for c in 1..p {
                    next.insert(s.iter().zip(r).map(|(a, b)| (a + c * b) % p).collect());
                }
            }
            span = next;
        }
        let mut k = 0;
        let mut size = 1;
        while size < span.len() {
            size *= p as usize;
            k += 1;
        }
        k
    }

    proptest! {
        #[test]
        fn rank_matches_span_count(rows in prop::collection::vec(prop::collection::vec(0u32..3, 4), 0..5)) {
            let p = Prime::new(3).unwrap();
            prop_assert_eq!(rank(p, 4, &rows), brute_rank(3, &rows));
        }

        #[test]
        fn kernel_vectors_vanish(cols in prop::collection::vec(prop::collection::vec(0u32..5, 3), 1..6)) {
            let p = Prime::new(5).unwrap();
            let ker = kernel(p, 3, &cols);
            prop_assert_eq!(ker.len() + rank(p, 3, &cols), cols.len());
            for c in &ker {
                prop_assert!(combine(p, 3, &cols, c).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn intersection() {
        let p = Prime::new(7).unwrap();
        let a = vec![vec![1, 0, 0], vec![0, 1, 0]];
        let b = vec![vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(intersection_dim(p, 3, &a, &b), 1);
    }
}
