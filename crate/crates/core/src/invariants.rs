//! Fixed subspaces, averaging operators and invariant Poincaré series.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::action::{substitute_binary, weyl_swap, ymon_action};
use crate::error::{Error, Result};
use crate::gf::{Mat2, MatrixGroup, Prime};
use crate::graded::{be_ring, degree_basis, r_basis, Algebra, GradedElement, Monomial, SimpleModuleSpec, YTerm};
use crate::linalg::{kernel, rank, Echelon};

/// Which substitution rule a matrix acts by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `y1 -> a*y1 + b*y2`, `y2 -> c*y1 + d*y2` (first variable first).
    Module,
    /// Matrices in the basis (c, ab^i) acting on (y, u); see `weyl_act_on_ba`.
    Weyl,
}

/// Echelonized basis of an invariant subspace in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub degree: u32,
    pub vectors: Vec<GradedElement>,
}

impl SubspaceBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }
}

/// A subspace of one degree component, in coordinates.
#[derive(Clone, Debug)]
pub struct DenseSubspace {
    pub alg: Algebra,
    pub degree: u32,
    pub basis: Vec<Monomial>,
    pub vectors: Vec<Vec<u32>>,
}

impl DenseSubspace {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn to_basis(&self) -> SubspaceBasis {
        let e = Echelon::from_rows(self.alg.prime(), self.basis.len(), self.vectors.iter().cloned());
        SubspaceBasis {
            degree: self.degree,
            vectors: e.rows().iter().map(|v| GradedElement::from_dense(self.alg, &self.basis, v)).collect(),
        }
    }
}

/// Precomputed action of a generating set on H*(BE).
pub struct BeFixer {
    prime: Prime,
    gens: Vec<(Vec<Vec<YTerm>>, u32)>,
}

impl BeFixer {
    pub fn new(prime: Prime, gens: &[Mat2]) -> Self {
        BeFixer { prime, gens: gens.iter().map(|g| (ymon_action(g), g.det())).collect() }
    }

    /// Kernel vectors (over `r_basis(m)`) of all `det^b * g - 1`.
    pub fn block_kernel(&self, b: u32, m: u32) -> Vec<Vec<u32>> {
        let p = self.prime;
        let ring = be_ring(p);
        let rb = r_basis(ring, m);
        let n = rb.len();
        if n == 0 {
            return Vec::new();
        }
        if self.gens.is_empty() {
            return (0..n).map(|j| unit(n, j)).collect();
        }
        let index: HashMap<(u32, u32, u32), usize> = rb.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let rows = n * self.gens.len();
        let mut cols = vec![vec![0u32; rows]; n];
        for (gi, (table, det)) in self.gens.iter().enumerate() {
            let s = p.pow(*det, b as u64);
            for (j, &(c, i, jj)) in rb.iter().enumerate() {
                let col = &mut cols[j];
                for t in &table[ring.ymon_index(i, jj)] {
                    let r = index[&(c + t.dc, t.i, t.j)];
                    let slot = &mut col[gi * n + r];
                    *slot = p.add(*slot, p.mul(s, t.coeff));
                }
                let slot = &mut col[gi * n + j];
                *slot = p.sub(*slot, 1);
            }
        }
        kernel(p, rows, &cols)
    }

    /// Fixed vectors in degree 2t, over the full `degree_basis`.
    pub fn fixed(&self, t: u32) -> DenseSubspace {
        let p = self.prime;
        let q = p.get();
        let alg = Algebra::BE(p);
        let basis = degree_basis(alg, 2 * t);
        let n = basis.len();
        let mut vectors = Vec::new();
        let mut offset = 0;
        for b in 0..=t / q {
            let m = t - b * q;
            let size = r_basis(be_ring(p), m).len();
            for kv in self.block_kernel(b, m) {
                let mut v = vec![0; n];
                v[offset..offset + size].copy_from_slice(&kv);
                vectors.push(v);
            }
            offset += size;
        }
        debug_assert_eq!(offset, n);
        DenseSubspace { alg, degree: 2 * t, basis, vectors }
    }

    /// Dimension of the fixed space in degree 2t.
    pub fn fixed_dim(&self, t: u32) -> usize {
        let q = self.prime.get();
        (0..=t / q).map(|b| self.block_kernel(b, t - b * q).len()).sum()
    }
}

fn unit(n: usize, j: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

/// Matrix (as columns) of the substitution by `m` on binary forms of degree t.
pub fn substitution_columns(m: &Mat2, t: usize) -> Vec<Vec<u32>> {
    (0..=t).map(|j| substitute_binary(m, &unit(t + 1, j))).collect()
}

/// Fixed vectors of binary forms of degree t under `det^k * g` for every g.
pub fn fixed_binary(prime: Prime, gens: &[Mat2], t: usize, k: u32) -> Vec<Vec<u32>> {
    let n = t + 1;
    if gens.is_empty() {
        return (0..n).map(|j| unit(n, j)).collect();
    }
    let mut cols = vec![Vec::with_capacity(n * gens.len()); n];
    for g in gens {
        let s = prime.pow(g.det(), k as u64);
        for (j, mut c) in substitution_columns(g, t).into_iter().enumerate() {
            for x in c.iter_mut() {
                *x = prime.mul(*x, s);
            }
            c[j] = prime.sub(c[j], 1);
            cols[j].extend(c);
        }
    }
    kernel(prime, n * gens.len(), &cols)
}

fn convention_gens(g: &MatrixGroup, alg: Algebra, conv: Convention) -> Result<Vec<Mat2>> {
    match (alg, conv) {
        (_, Convention::Module) => Ok(g.generators().to_vec()),
        (Algebra::BA(_), Convention::Weyl) => Ok(g.generators().iter().map(weyl_swap).collect()),
        _ => Err(Error::Invalid(format!("the Weyl convention applies to BA only, not {alg}"))),
    }
}

/// Dense fixed subspace of the degree-d component.
pub fn fixed_dense(g: &MatrixGroup, alg: Algebra, d: u32, conv: Convention) -> Result<DenseSubspace> {
    if d % 2 == 1 {
        return Err(Error::Invalid(format!("degree {d} is odd")));
    }
    if alg.prime() != g.prime() {
        return Err(Error::Invalid(format!("group over F_{} acting on {alg}", g.prime())));
    }
    let gens = convention_gens(g, alg, conv)?;
    Ok(match alg {
        Algebra::BE(p) => BeFixer::new(p, &gens).fixed(d / 2),
        _ => {
            let t = (d / 2) as usize;
            DenseSubspace {
                alg,
                degree: d,
                basis: degree_basis(alg, d),
                vectors: fixed_binary(alg.prime(), &gens, t, 0),
            }
        }
    })
}

pub fn fixed_subspace(g: &MatrixGroup, alg: Algebra, d: u32, conv: Convention) -> Result<SubspaceBasis> {
    Ok(fixed_dense(g, alg, d, conv)?.to_basis())
}

/// Rank of `sum_g det(g)^k g` on S^q (module convention).
pub fn averaging_rank(g: &MatrixGroup, spec: SimpleModuleSpec) -> usize {
    rank(g.prime(), spec.dim(), &averaging_image(g, spec))
}

/// Image of the averaging operator, as a spanning set (module convention).
pub fn averaging_image(g: &MatrixGroup, spec: SimpleModuleSpec) -> Vec<Vec<u32>> {
    let p = g.prime();
    let n = spec.dim();
    let mut acc = vec![vec![0u32; n]; n];
    for x in g.elements() {
        let s = p.pow(x.det(), spec.k as u64);
        for (j, col) in substitution_columns(x, spec.q as usize).into_iter().enumerate() {
            for (a, c) in acc[j].iter_mut().zip(col) {
                *a = p.add(*a, p.mul(s, c));
            }
        }
    }
    acc
}

/// dim of (S^q ⊗ det^k)^G.
pub fn fixed_module_dim(g: &MatrixGroup, spec: SimpleModuleSpec) -> usize {
    fixed_binary(g.prime(), g.generators(), spec.q as usize, spec.k).len()
}

/// Invariant dimensions in degrees 0, 2, ..., d_max.
pub fn invariant_poincare(g: &MatrixGroup, alg: Algebra, d_max: u32) -> Result<Vec<usize>> {
    invariant_poincare_with(g, alg, d_max, Convention::Module)
}

pub fn invariant_poincare_with(g: &MatrixGroup, alg: Algebra, d_max: u32, conv: Convention) -> Result<Vec<usize>> {
    if d_max % 2 == 1 {
        return Err(Error::Invalid(format!("degree {d_max} is odd")));
    }
    if alg.prime() != g.prime() {
        return Err(Error::Invalid(format!("group over F_{} acting on {alg}", g.prime())));
    }
    let gens = convention_gens(g, alg, conv)?;
    let ts: Vec<u32> = (0..=d_max / 2).collect();
    Ok(match alg {
        Algebra::BE(p) => {
            let fixer = BeFixer::new(p, &gens);
            ts.par_iter().map(|&t| fixer.fixed_dim(t)).collect()
        }
        _ => ts.par_iter().map(|&t| fixed_binary(alg.prime(), &gens, t as usize, 0).len()).collect(),
    })
}
