//! H*(BG) degree by degree as stable elements, plus the odd-degree and
//! nilpotent dimensions.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::action::{restrict_monomial, weyl_act_dense, SubgroupIndex};
use crate::error::{Error, Result};
use crate::fusion::{weyl_generators, FusionDescriptor, Sylow};
use crate::gf::{det_image, Mat2, Prime};
use crate::graded::{be_ring, r_basis, Algebra, Monomial};
use crate::invariants::{fixed_binary, BeFixer, DenseSubspace};
use crate::linalg::{axpy, kernel, Echelon};

struct RadicalCondition {
    rep: SubgroupIndex,
    gens: Vec<Mat2>,
}

/// Per-descriptor engine holding precomputed actions and a basis cache.
pub struct CohomologyEngine {
    desc: FusionDescriptor,
    fixer: Option<BeFixer>,
    radical: Vec<RadicalCondition>,
    cache: Mutex<HashMap<u32, Arc<DenseSubspace>>>,
}

impl CohomologyEngine {
    pub fn new(desc: &FusionDescriptor) -> Result<Self> {
        let mut radical = Vec::new();
        for c in desc.radical_classes() {
            radical.push(RadicalCondition { rep: c.representative(), gens: weyl_generators(desc, c)? });
        }
        let fixer = (desc.sylow == Sylow::E).then(|| BeFixer::new(desc.prime, desc.weyl.generators()));
        Ok(CohomologyEngine { desc: desc.clone(), fixer, radical, cache: Mutex::new(HashMap::new()) })
    }

    pub fn descriptor(&self) -> &FusionDescriptor {
        &self.desc
    }

    pub fn prime(&self) -> Prime {
        self.desc.prime
    }

    /// The ambient algebra: BE for E-Sylow, POLY2 for A-Sylow.
    pub fn ambient(&self) -> Algebra {
        match self.desc.sylow {
            Sylow::E => Algebra::BE(self.desc.prime),
            Sylow::A => Algebra::Poly2(self.desc.prime),
        }
    }

    /// Basis of H^d(BG), cached.
    pub fn basis(&self, d: u32) -> Result<Arc<DenseSubspace>> {
        if d % 2 == 1 {
            return Err(Error::Invalid(format!("degree {d} is odd")));
        }
        if let Some(s) = self.cache.lock().expect("cache lock").get(&d) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.compute(d / 2));
        let mut cache = self.cache.lock().expect("cache lock");
        Ok(cache.entry(d).or_insert(s).clone())
    }

    fn compute(&self, t: u32) -> DenseSubspace {
        let p = self.desc.prime;
        match &self.fixer {
            None => DenseSubspace {
                alg: Algebra::Poly2(p),
                degree: 2 * t,
                basis: crate::graded::degree_basis(Algebra::Poly2(p), 2 * t),
                vectors: fixed_binary(p, self.desc.weyl.generators(), t as usize, 0),
            },
            Some(fixer) => {
                let mut space = fixer.fixed(t);
                for cond in &self.radical {
                    if space.vectors.is_empty() {
                        break;
                    }
                    space.vectors = radical_solve(p, t, &space, cond);
                }
                space
            }
        }
    }

    pub fn dim(&self, d: u32) -> Result<usize> {
        Ok(self.basis(d)?.dim())
    }

    /// Dimensions in degrees 0, 2, ..., d_max.
    pub fn poincare(&self, d_max: u32) -> Result<Vec<usize>> {
        if d_max % 2 == 1 {
            return Err(Error::Invalid(format!("degree {d_max} is odd")));
        }
        (0..=d_max / 2).into_par_iter().map(|t| self.dim(2 * t)).collect()
    }

    /// Odd-degree dimensions for odd degrees up to d_max, via Q1-images.
    pub fn odd_dims(&self, d_max: u32) -> Result<BTreeMap<u32, usize>> {
        let p = self.desc.prime;
        let q = p.get();
        let shift = 2 * q - 1;
        if self.desc.sylow == Sylow::A && self.desc.weyl.order().is_multiple_of(q as usize) {
            return Err(Error::OutOfScope(format!(
                "odd part of {}: |W| = {} is divisible by p",
                self.desc.id,
                self.desc.weyl.order()
            )));
        }
        let evens: Vec<u32> = (0..=(d_max + shift) / 2).map(|t| 2 * t).filter(|&e| e > shift).collect();
        let dims: Result<Vec<(u32, usize)>> = evens
            .par_iter()
            .map(|&e| {
                let h = self.basis(e)?;
                let n = match self.desc.sylow {
                    Sylow::E => be_ideal_intersection(p, e / 2, &h),
                    Sylow::A => poly_ideal_intersection(p, &h),
                };
                Ok((e - shift, n))
            })
            .collect();
        let mut out: BTreeMap<u32, usize> = (0..=d_max).filter(|d| d % 2 == 1).map(|d| (d, 0)).collect();
        for (d, n) in dims? {
            out.insert(d, n);
        }
        Ok(out)
    }

    /// Dimensions of the nilpotent part N(G) in even degrees up to d_max.
    pub fn nilpotent_dims(&self, d_max: u32) -> Result<BTreeMap<u32, usize>> {
        if self.desc.sylow != Sylow::E {
            return Err(Error::OutOfScope(format!("nilpotent part of A-Sylow descriptor {}", self.desc.id)));
        }
        Ok(nilpotent_dims_for(self.desc.prime, det_image(&self.desc.weyl).len() as u32, d_max))
    }
}

/// Basis vectors of `space` whose restriction to A_rep is fixed by `cond.gens`.
fn radical_solve(p: Prime, t: u32, space: &DenseSubspace, cond: &RadicalCondition) -> Vec<Vec<u32>> {
    let len = t as usize + 1;
    let restricted: Vec<Vec<(usize, u32)>> = space
        .basis
        .iter()
        .map(|m| restrict_monomial(p, m, cond.rep).into_iter().map(|(ye, _, c)| (ye as usize, c)).collect())
        .collect();
    // Restrict each vector and track combinations: rows [restriction | identity].
    let k = space.vectors.len();
    let mut aug = Echelon::new(p, len + k);
    for (j, v) in space.vectors.iter().enumerate() {
        let mut row = vec![0u32; len + k];
        for (idx, &c) in v.iter().enumerate() {
            if c != 0 {
                for &(ye, rc) in &restricted[idx] {
                    row[ye] = p.add(row[ye], p.mul(c, rc));
                }
            }
        }
        row[len + j] = 1;
        aug.insert(row);
    }
    let mut combos: Vec<Vec<u32>> = Vec::new();
    let mut images: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for row in aug.rows() {
        let (img, comb) = row.split_at(len);
        if img.iter().all(|&x| x == 0) {
            combos.push(comb.to_vec());
        } else {
            images.push((img.to_vec(), comb.to_vec()));
        }
    }
    if !images.is_empty() {
        let cols: Vec<Vec<u32>> = images
            .iter()
            .map(|(img, _)| {
                let mut col = Vec::with_capacity(len * cond.gens.len());
                for h in &cond.gens {
                    let mut moved = weyl_act_dense(h, img);
                    for (a, b) in moved.iter_mut().zip(img) {
                        *a = p.sub(*a, *b);
                    }
                    col.extend(moved);
                }
                col
            })
            .collect();
        for c in kernel(p, len * cond.gens.len(), &cols) {
            let mut comb = vec![0u32; k];
            for (ci, (_, cj)) in c.iter().zip(&images) {
                axpy(p, &mut comb, *ci, cj);
            }
            combos.push(comb);
        }
    }
    let n = space.basis.len();
    combos
        .into_iter()
        .map(|comb| {
            let mut v = vec![0u32; n];
            for (c, w) in comb.iter().zip(&space.vectors) {
                axpy(p, &mut v, *c, w);
            }
            v
        })
        .collect()
}

/// dim(H ∩ Ideal(y1 v, y2 v)) in half-degree t.
fn be_ideal_intersection(p: Prime, t: u32, h: &DenseSubspace) -> usize {
    if h.vectors.is_empty() {
        return 0;
    }
    let q = p.get();
    let ring = be_ring(p);
    // Blocks of the degree basis by v-exponent, with a reducer for (y1, y2)R.
    let mut blocks: Vec<(usize, usize, Option<Echelon>)> = Vec::new();
    let mut offset = 0;
    for b in 0..=t / q {
        let m = t - b * q;
        let rb = r_basis(ring, m);
        let size = rb.len();
        let reducer = (b >= 1).then(|| ideal_echelon(p, m, &rb));
        blocks.push((offset, size, reducer));
        offset += size;
    }
    let cols: Vec<Vec<u32>> = h
        .vectors
        .iter()
        .map(|v| {
            let mut col = Vec::new();
            for (off, size, reducer) in &blocks {
                let part = v[*off..off + size].to_vec();
                match reducer {
                    None => col.extend(part),
                    Some(e) => col.extend(e.reduce(part)),
                }
            }
            col
        })
        .collect();
    let rows = cols.first().map_or(0, Vec::len);
    kernel(p, rows, &cols).len()
}

/// Echelon basis of ((y1, y2) R)_m in the coordinates of `r_basis(m)`.
fn ideal_echelon(p: Prime, m: u32, rb: &[(u32, u32, u32)]) -> Echelon {
    let ring = be_ring(p);
    let index: HashMap<(u32, u32, u32), usize> = rb.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let mut e = Echelon::new(p, rb.len());
    if m == 0 {
        return e;
    }
    for (c, i, j) in r_basis(ring, m - 1) {
        for (di, dj) in [(1, 0), (0, 1)] {
            let mut v = vec![0u32; rb.len()];
            for term in ring.ymul(i, j, di, dj) {
                let slot = &mut v[index[&(c + term.dc, term.i, term.j)]];
                *slot = p.add(*slot, term.coeff);
            }
            e.insert(v);
        }
    }
    e
}

/// dim(H ∩ (y1^p y2 - y1 y2^p)) for binary forms: divisibility by the
/// product of all p+1 lines is vanishing at (1, i) and (0, 1).
fn poly_ideal_intersection(p: Prime, h: &DenseSubspace) -> usize {
    if h.vectors.is_empty() {
        return 0;
    }
    let q = p.get();
    let t = h.basis.len() - 1;
    let cols: Vec<Vec<u32>> = h
        .vectors
        .iter()
        .map(|v| {
            // v indexed by exponent of y1; f(1, i) = sum_e v[e] i^(t-e).
            let mut col: Vec<u32> = (0..q)
                .map(|i| v.iter().enumerate().fold(0, |acc, (e, &c)| p.add(acc, p.mul(c, p.pow(i, (t - e) as u64)))))
                .collect();
            col.push(v[0]);
            col
        })
        .collect();
    kernel(p, q as usize + 1, &cols).len()
}

/// N(G) modelled as the span of b_i v^j (degree 2i+2+2pj) with g acting by
/// det(g)^(i+1+j); `det_order` is |Det(G)|.
pub fn nilpotent_dims_for(p: Prime, det_order: u32, d_max: u32) -> BTreeMap<u32, usize> {
    let q = p.get();
    let mut out: BTreeMap<u32, usize> = (0..=d_max / 2).map(|t| (2 * t, 0)).collect();
    for i in 1..q.saturating_sub(2) {
        let mut j = 0;
        loop {
            let d = 2 * i + 2 + 2 * q * j;
            if d > d_max {
                break;
            }
            if (i + 1 + j) % det_order == 0 {
                *out.get_mut(&d).expect("even degree") += 1;
            }
            j += 1;
        }
    }
    out
}

/// Dimensions, keyed by degree, for one descriptor.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyTable {
    pub id: String,
    pub even_dims: BTreeMap<u32, usize>,
    pub odd_dims: Option<BTreeMap<u32, usize>>,
    pub nilpotent_dims: Option<BTreeMap<u32, usize>>,
    /// Set for descriptors whose odd part is obtained by analogy with groups.
    pub by_analogy: bool,
}

pub fn cohomology_table(desc: &FusionDescriptor, d_max: u32, odd: bool, nilpotent: bool) -> Result<CohomologyTable> {
    let eng = engine(desc)?;
    let even = eng.poincare(d_max - d_max % 2)?;
    Ok(CohomologyTable {
        id: desc.id.clone(),
        even_dims: even.into_iter().enumerate().map(|(t, n)| (2 * t as u32, n)).collect(),
        odd_dims: if odd { Some(eng.odd_dims(d_max)?) } else { None },
        nilpotent_dims: if nilpotent { Some(eng.nilpotent_dims(d_max)?) } else { None },
        by_analogy: desc.by_analogy,
    })
}

/// Shared engine per descriptor, created on first use.
pub fn engine(desc: &FusionDescriptor) -> Result<Arc<CohomologyEngine>> {
    static ENGINES: OnceLock<Mutex<HashMap<String, Arc<CohomologyEngine>>>> = OnceLock::new();
    let key = fingerprint(desc);
    let map = ENGINES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(e) = map.lock().expect("engine lock").get(&key) {
        return Ok(e.clone());
    }
    let e = Arc::new(CohomologyEngine::new(desc)?);
    Ok(map.lock().expect("engine lock").entry(key).or_insert(e).clone())
}

fn fingerprint(desc: &FusionDescriptor) -> String {
    format!("{}|{}|{:?}|{:?}|{:?}", desc.id, desc.prime, desc.sylow, desc.weyl.generators(), desc.classes)
}

pub fn stable_elements(desc: &FusionDescriptor, d: u32) -> Result<crate::invariants::SubspaceBasis> {
    if desc.sylow != Sylow::E {
        return Err(Error::Invalid(format!("{} is not an E-Sylow descriptor", desc.id)));
    }
    Ok(engine(desc)?.basis(d)?.to_basis())
}

pub fn cohomology_poincare(desc: &FusionDescriptor, d_max: u32) -> Result<Vec<usize>> {
    engine(desc)?.poincare(d_max)
}

pub fn odd_dims(desc: &FusionDescriptor, d_max: u32) -> Result<BTreeMap<u32, usize>> {
    engine(desc)?.odd_dims(d_max)
}

pub fn nilpotent_dims(desc: &FusionDescriptor, d_max: u32) -> Result<BTreeMap<u32, usize>> {
    engine(desc)?.nilpotent_dims(d_max)
}

/// Materialized ideal Ideal(y1 v, y2 v) in degree 2t, as vectors over the
/// degree basis; used to cross-check the blockwise membership test.
pub fn be_ideal_span(p: Prime, t: u32) -> (Vec<Monomial>, Vec<Vec<u32>>) {
    use crate::graded::{degree_basis, GradedElement};
    let alg = Algebra::BE(p);
    let basis = degree_basis(alg, 2 * t);
    let q = p.get();
    let mut out = Vec::new();
    if t > q {
        let v = GradedElement::var(alg, "v").expect("v");
        for x in degree_basis(alg, 2 * (t - q - 1)) {
            let x = GradedElement::from_terms(alg, [(x, 1)]).mul(&v).expect("same algebra");
            for y in ["y1", "y2"] {
                let e = x.mul(&GradedElement::var(alg, y).expect("y")).expect("same algebra");
                out.push(e.to_dense(&basis).expect("in degree"));
            }
        }
    }
    (basis, out)
}
