//! Checks a descriptor's computed cohomology and splitting against its
//! expectation record.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::action::{act_be, act_poly, restrict_to_a, weyl_act_on_ba};
use crate::cohomology::engine;
use crate::error::{Error, Result};
use crate::fusion::{weyl_generators, FusionDescriptor, Sylow};
use crate::gf::Prime;
use crate::graded::{degree_basis, Algebra, GradedElement};
use crate::linalg::Echelon;
use crate::presentation::{expand_all_degrees, ExpectationRecord, ModulePresentation, Scope};
use crate::splitting::{full_splitting, SplittingTable};

/// Default comparison bound for even series.
pub fn default_d_max(p: Prime) -> u32 {
    match p.get() {
        3 => 96,
        7 => 400,
        13 => 912,
        q => 8 * q * q,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// First degree at which computed and expected values differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: true, degree: None, detail: detail.into() }
    }
    fn fail(name: &str, degree: Option<u32>, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: false, degree, detail: detail.into() }
    }
    fn error(name: &str, e: &Error) -> Self {
        Self::fail(name, None, e.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub group: String,
    pub prime: u32,
    pub by_analogy: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Verifies the descriptor against its own expectation record.
pub fn verify_group(desc: &FusionDescriptor) -> VerifyReport {
    match &desc.expectations {
        Some(rec) => verify_with(desc, rec),
        None => VerifyReport {
            group: desc.id.clone(),
            prime: desc.prime.get(),
            by_analogy: desc.by_analogy,
            checks: Vec::new(),
        },
    }
}

pub fn verify_with(desc: &FusionDescriptor, rec: &ExpectationRecord) -> VerifyReport {
    let p = desc.prime;
    let d_max = rec.d_max.unwrap_or_else(|| default_d_max(p));
    let mut checks = Vec::new();

    let alg = match desc.sylow {
        Sylow::E => Algebra::BE(p),
        Sylow::A => Algebra::Poly2(p),
    };
    let mut scope = Scope::new(alg);
    let scope_ok = match scope.define_all(&rec.symbols) {
        Ok(()) => true,
        Err(e) => {
            checks.push(CheckResult::error("symbols", &e));
            false
        }
    };

    if let Some(even) = &rec.even {
        checks.push(even_series(desc, even, d_max));
        if scope_ok && has_explicit(even) {
            checks.extend(generator_checks(desc, &scope, even, d_max));
        }
    }
    if scope_ok {
        for (lhs, rhs) in &rec.identities {
            checks.push(identity(&scope, lhs, rhs));
        }
    }
    if let Some(s) = &rec.splitting {
        checks.push(splitting(desc, s));
    }
    if let Some(nil) = &rec.nilpotent {
        checks.push(nilpotent(desc, nil, d_max));
    }
    if let Some(odd) = &rec.odd {
        checks.push(odd_series(desc, odd, rec.odd_d_max.unwrap_or(d_max)));
    }
    VerifyReport { group: desc.id.clone(), prime: p.get(), by_analogy: desc.by_analogy, checks }
}

fn has_explicit(pres: &ModulePresentation) -> bool {
    pres.summands.iter().any(|s| s.gens.iter().any(|g| g.expr().is_some()))
}

/// First index where the two sequences differ, treating missing entries as 0.
fn first_mismatch(a: &[u64], b: &[u64]) -> Option<usize> {
    (0..a.len().max(b.len())).find(|&i| a.get(i).copied().unwrap_or(0) != b.get(i).copied().unwrap_or(0))
}

fn compare(name: &str, computed: &[u64], expected: &[u64], degree_of: impl Fn(usize) -> u32, bound: u32) -> CheckResult {
    match first_mismatch(computed, expected) {
        None => CheckResult::pass(name, format!("equal up to degree {bound}")),
        Some(i) => {
            let d = degree_of(i);
            CheckResult::fail(
                name,
                Some(d),
                format!(
                    "degree {d}: computed {}, expected {}",
                    computed.get(i).copied().unwrap_or(0),
                    expected.get(i).copied().unwrap_or(0)
                ),
            )
        }
    }
}

fn even_series(desc: &FusionDescriptor, pres: &ModulePresentation, d_max: u32) -> CheckResult {
    const NAME: &str = "even series";
    let run = || -> Result<CheckResult> {
        let computed: Vec<u64> = engine(desc)?.poincare(d_max)?.into_iter().map(|n| n as u64).collect();
        let all = expand_all_degrees(pres, desc.prime, d_max)?;
        if let Some(d) = all.iter().enumerate().position(|(d, &c)| d % 2 == 1 && c != 0) {
            return Ok(CheckResult::fail(NAME, Some(d as u32), "even presentation has an odd generator"));
        }
        let expected: Vec<u64> = all.into_iter().step_by(2).collect();
        Ok(compare(NAME, &computed, &expected, |i| 2 * i as u32, d_max))
    };
    run().unwrap_or_else(|e| CheckResult::error(NAME, &e))
}

fn odd_series(desc: &FusionDescriptor, pres: &ModulePresentation, d_max: u32) -> CheckResult {
    const NAME: &str = "odd series";
    let run = || -> Result<CheckResult> {
        let dims = engine(desc)?.odd_dims(d_max)?;
        let computed: Vec<u64> = dims.values().map(|&n| n as u64).collect();
        let degrees: Vec<u32> = dims.keys().copied().collect();
        let all = expand_all_degrees(pres, desc.prime, d_max)?;
        let expected: Vec<u64> = degrees.iter().map(|&d| all[d as usize]).collect();
        if let Some(d) = all.iter().enumerate().position(|(d, &c)| d % 2 == 0 && c != 0) {
            return Ok(CheckResult::fail(NAME, Some(d as u32), "odd presentation has an even generator"));
        }
        Ok(compare(NAME, &computed, &expected, |i| degrees[i], d_max))
    };
    run().unwrap_or_else(|e| CheckResult::error(NAME, &e))
}

fn nilpotent(desc: &FusionDescriptor, pres: &ModulePresentation, d_max: u32) -> CheckResult {
    const NAME: &str = "nilpotent series";
    let run = || -> Result<CheckResult> {
        let dims = engine(desc)?.nilpotent_dims(d_max)?;
        let computed: Vec<u64> = dims.values().map(|&n| n as u64).collect();
        let expected: Vec<u64> = expand_all_degrees(pres, desc.prime, d_max)?.into_iter().step_by(2).collect();
        Ok(compare(NAME, &computed, &expected, |i| 2 * i as u32, d_max))
    };
    run().unwrap_or_else(|e| CheckResult::error(NAME, &e))
}

fn splitting(desc: &FusionDescriptor, expected: &str) -> CheckResult {
    const NAME: &str = "splitting";
    let run = || -> Result<CheckResult> {
        let want = SplittingTable::parse(expected, desc.prime)?;
        let got = full_splitting(desc)?;
        Ok(if got.same_counts(&want) {
            CheckResult::pass(NAME, got.render())
        } else {
            CheckResult::fail(NAME, None, format!("computed {}, expected {}", got.render(), want.render()))
        })
    };
    run().unwrap_or_else(|e| CheckResult::error(NAME, &e))
}

fn identity(scope: &Scope, lhs: &str, rhs: &str) -> CheckResult {
    let name = format!("identity {lhs} = {rhs}");
    match (scope.eval(lhs), scope.eval(rhs)) {
        (Ok(a), Ok(b)) if a == b => CheckResult::pass(&name, "holds"),
        (Ok(a), Ok(b)) => match a.sub(&b) {
            Ok(diff) => CheckResult::fail(&name, diff.degree(), format!("difference {diff}")),
            Err(e) => CheckResult::error(&name, &e),
        },
        (Err(e), _) | (_, Err(e)) => CheckResult::error(&name, &e),
    }
}

struct Explicit {
    label: String,
    value: GradedElement,
}

fn generator_checks(desc: &FusionDescriptor, scope: &Scope, pres: &ModulePresentation, d_max: u32) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut gens = Vec::new();
    let mut bad_degree = Vec::new();
    for s in &pres.summands {
        for g in &s.gens {
            if let Some(expr) = g.expr() {
                match scope.eval(expr) {
                    Ok(value) => {
                        let homogeneous = value.components().len() == 1 && value.degree() == Some(g.degree());
                        if !homogeneous {
                            bad_degree.push(format!("{expr} (declared {})", g.degree()));
                        }
                        gens.push(Explicit { label: expr.to_string(), value });
                    }
                    Err(e) => {
                        out.push(CheckResult::error("generator degrees", &e));
                        return out;
                    }
                }
            }
        }
    }
    out.push(if bad_degree.is_empty() {
        CheckResult::pass("generator degrees", format!("{} generators", gens.len()))
    } else {
        CheckResult::fail("generator degrees", None, format!("not homogeneous of the declared degree: {}", bad_degree.join(", ")))
    });

    let moved: Vec<&str> = gens
        .iter()
        .filter(|g| {
            desc.weyl.generators().iter().any(|w| {
                let image = match desc.sylow {
                    Sylow::E => act_be(w, &g.value),
                    Sylow::A => act_poly(w, &g.value, 0),
                };
                image != g.value
            })
        })
        .map(|g| g.label.as_str())
        .collect();
    out.push(if moved.is_empty() {
        CheckResult::pass("generator invariance", "fixed by the Weyl group")
    } else {
        CheckResult::fail("generator invariance", None, format!("moved: {}", moved.join(", ")))
    });

    if desc.sylow == Sylow::E && desc.radical_classes().next().is_some() {
        let mut failures = Vec::new();
        for c in desc.radical_classes() {
            let hs = match weyl_generators(desc, c) {
                Ok(h) => h,
                Err(e) => {
                    out.push(CheckResult::error("radical restrictions", &e));
                    return out;
                }
            };
            for g in &gens {
                let r = restrict_to_a(&g.value, c.representative());
                if hs.iter().any(|h| weyl_act_on_ba(h, &r) != r) {
                    failures.push(format!("{} at A_{}", g.label, c.representative()));
                }
            }
        }
        out.push(if failures.is_empty() {
            CheckResult::pass("radical restrictions", "restrictions are Weyl-invariant")
        } else {
            CheckResult::fail("radical restrictions", None, failures.join(", "))
        });
    }

    out.push(span_check(desc, scope, pres, d_max));
    out
}

/// One summand, ready for products: generators, ring generators, C-shifts.
struct SpanSummand {
    gens: Vec<GradedElement>,
    ring: Vec<GradedElement>,
    shifts: Vec<GradedElement>,
}

fn span_check(desc: &FusionDescriptor, scope: &Scope, pres: &ModulePresentation, d_max: u32) -> CheckResult {
    const NAME: &str = "generator span";
    let p = desc.prime;
    let mut summands = Vec::new();
    for s in &pres.summands {
        if s.gens.iter().any(|g| g.expr().is_none()) {
            return CheckResult::pass(NAME, "skipped: some generators are given by degree only");
        }
        let Some(exprs) = s.ring_exprs.clone().or_else(|| s.ring.be_exprs()) else {
            return CheckResult::pass(NAME, "skipped: ring generators unknown");
        };
        let eval_all = |xs: Vec<&str>| xs.into_iter().map(|e| scope.eval(e)).collect::<Result<Vec<_>>>();
        let parts = (|| -> Result<SpanSummand> {
            let gens = eval_all(s.gens.iter().filter_map(|g| g.expr()).collect())?;
            let ring = eval_all(exprs.iter().map(String::as_str).collect())?;
            let c = scope.get("C").cloned();
            let shifts = s
                .ring
                .shifts(p)
                .into_iter()
                .map(|(_, j)| match (&c, j) {
                    (_, 0) => Ok(GradedElement::one(scope.algebra())),
                    (Some(c), j) => Ok(c.pow(j)),
                    (None, _) => Err(Error::Invalid("C-shifted ring outside H*(BE)".into())),
                })
                .collect::<Result<_>>()?;
            Ok(SpanSummand { gens, ring, shifts })
        })();
        match parts {
            Ok(x) => summands.push(x),
            Err(e) => return CheckResult::error(NAME, &e),
        }
    }
    let eng = match engine(desc) {
        Ok(e) => e,
        Err(e) => return CheckResult::error(NAME, &e),
    };
    let alg = eng.ambient();
    let degrees: Vec<u32> = (0..=d_max / 2).map(|t| 2 * t).collect();
    use rayon::prelude::*;
    let results: Vec<Result<Option<(u32, String)>>> = degrees
        .par_iter()
        .map(|&d| {
            let h = eng.basis(d)?;
            let basis = degree_basis(alg, d);
            let mut span = Echelon::new(p, basis.len());
            for s in &summands {
                for g in &s.gens {
                    for shift in &s.shifts {
                        let base = g.mul(shift)?;
                        let Some(bd) = base.degree() else { continue };
                        if bd > d {
                            continue;
                        }
                        for m in ring_monomials(alg, &s.ring, d - bd) {
                            let x = base.mul(&m)?;
                            if let Some(v) = x.to_dense(&basis) {
                                span.insert(v);
                            }
                        }
                    }
                }
            }
            let computed = Echelon::from_rows(p, basis.len(), h.vectors.iter().cloned());
            let inside = span.rows().iter().all(|v| computed.contains(v));
            if !inside {
                return Ok(Some((d, "a product lies outside the computed space".into())));
            }
            if span.rank() != h.dim() {
                return Ok(Some((d, format!("products span {} of {}", span.rank(), h.dim()))));
            }
            Ok(None)
        })
        .collect();
    for r in results {
        match r {
            Err(e) => return CheckResult::error(NAME, &e),
            Ok(Some((d, msg))) => return CheckResult::fail(NAME, Some(d), format!("degree {d}: {msg}")),
            Ok(None) => {}
        }
    }
    CheckResult::pass(NAME, format!("products span every degree up to {d_max}"))
}

/// All monomials in `ring` of total degree exactly `d`.
fn ring_monomials(alg: Algebra, ring: &[GradedElement], d: u32) -> Vec<GradedElement> {
    let Some((first, rest)) = ring.split_first() else {
        return if d == 0 { vec![GradedElement::one(alg)] } else { vec![] };
    };
    let mut out = Vec::new();
    let Some(fd) = first.degree() else { return out };
    let mut power = GradedElement::one(alg);
    let mut used = 0;
    loop {
        if rest.is_empty() {
            if used == d {
                out.push(power.clone());
            }
        } else {
            for m in ring_monomials(alg, rest, d - used) {
                out.push(power.mul(&m).expect("same algebra"));
            }
        }
        if fd == 0 || used + fd > d {
            break;
        }
        used += fd;
        power = power.mul(first).expect("same algebra");
    }
    out
}

/// Expected-vs-computed series for a map of summand presentations, keyed by label.
pub fn series_of(pres: &ModulePresentation, p: Prime, d_max: u32) -> Result<Vec<u64>> {
    Ok(expand_all_degrees(pres, p, d_max)?.into_iter().step_by(2).collect())
}

/// Checks the closed forms of u6, u8, u12, u12' against their definitions as
/// products of the linear forms y2 - i*y1 over the A-subgroup classes of the
/// group 3x4S4 at p = 13 (the factor for A_inf is y1). Returns, per form, the
/// scalar relating the product to the closed form.
pub fn linear_form_products() -> Result<BTreeMap<&'static str, u32>> {
    let p = Prime::new(13)?;
    let alg = Algebra::Poly2(p);
    let scope = Scope::new(alg);
    let y1 = scope.eval("y1")?;
    let y2 = scope.eval("y2")?;
    let line = |i: Option<u32>| -> Result<GradedElement> {
        match i {
            None => Ok(y1.clone()),
            Some(i) => y2.sub(&y1.scale(i)),
        }
    };
    let product = |idx: &[Option<u32>], power: u32| -> Result<GradedElement> {
        let mut acc = GradedElement::one(alg);
        for &i in idx {
            acc = acc.mul(&line(i)?.pow(power))?;
        }
        Ok(acc)
    };
    let c1: Vec<Option<u32>> = [1, 2, 3, 5, 6, 9].into_iter().map(Some).collect();
    let c2: Vec<Option<u32>> = [0, 4, 10, 12].into_iter().map(Some).collect();
    let c3: Vec<Option<u32>> = vec![None, Some(7), Some(8), Some(11)];
    let c23: Vec<Option<u32>> = c2.iter().chain(&c3).copied().collect();
    let forms = [
        ("u6", "y2^6 - 9*y1^3*y2^3 + 8*y1^6", product(&c1, 1)?),
        ("u8", "y1*y2*(y2^6 + 9*y1^3*y2^3 + 8*y1^6)", product(&c23, 1)?),
        ("u12", "(y2^4 + y1^3*y2)^3", product(&c2, 3)?),
        ("u12'", "(y1*y2^3 + 8*y1^4)^3", product(&c3, 3)?),
    ];
    let mut out = BTreeMap::new();
    for (name, closed, prod) in forms {
        let closed = scope.eval(closed)?;
        let scalar = proportionality(&prod, &closed)
            .ok_or_else(|| Error::Inconsistent(format!("{name}: closed form is not a multiple of the product")))?;
        out.insert(name, scalar);
    }
    Ok(out)
}

/// The nonzero c with a = c*b, if any.
fn proportionality(a: &GradedElement, b: &GradedElement) -> Option<u32> {
    let p = a.algebra().prime();
    let (m, &cb) = b.terms().next()?;
    let c = p.mul(a.coeff(m), p.inv(cb));
    (c != 0 && *a == b.scale(c)).then_some(c)
}
