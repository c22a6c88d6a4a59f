//! Acceptance suite: one PASS/FAIL line per criterion. Reference values are
//! either transcribed literally below or computed by independent code here.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use plfg_core::action::{act_be, induced_matrix, restrict_to_a, weyl_act_on_ba, SubgroupIndex};
use plfg_core::catalog::{catalog, lookup};
use plfg_core::cohomology::{nilpotent_dims_for, odd_dims};
use plfg_core::fusion::{mobius_image, FusionDescriptor, Sylow};
use plfg_core::gf::{group_closure, Mat2, Prime};
use plfg_core::graded::{ambient_dims, be_reduce_with, Algebra, GradedElement, Monomial, SimpleModuleSpec, Strategy};
use plfg_core::invariants::{averaging_rank, fixed_module_dim, invariant_poincare_with, Convention};
use plfg_core::presentation::{expand_all_degrees, ModulePresentation, Ring, Scope};
use plfg_core::splitting::{class_ranks, full_splitting, SplittingTable};
use plfg_core::verify::{linear_form_products, verify_group, VerifyReport};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Criteria that cannot pass against their literal reference values.
const UNATTAINABLE: &[(u32, &str)] = &[(
    9,
    "the reference odd series for RV1, DA{51,115,179,179}, omits the class in degree 83 \
     whose Q1-image is (Y1+Y2)V = D2'' + 2*D2; the computed series is DA{51,83,115,179}",
)];

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn from_failures(failures: Vec<String>, summary: String) -> Self {
        if failures.is_empty() {
            Outcome { ok: true, detail: summary }
        } else {
            Outcome { ok: false, detail: failures.join("; ") }
        }
    }
}

fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

fn pres(ring: &str, gens: &[u32]) -> ModulePresentation {
    ModulePresentation::single(Ring::Named(ring.into()), gens.to_vec())
}

/// Failed checks of a report, restricted to those `keep` selects.
fn failed_checks(r: &VerifyReport, keep: impl Fn(&str) -> bool) -> Vec<String> {
    let mut out: Vec<String> =
        r.checks.iter().filter(|c| keep(&c.name) && !c.passed).map(|c| format!("{} {}: {}", r.group, c.name, c.detail)).collect();
    if !r.checks.iter().any(|c| keep(&c.name)) {
        out.push(format!("{}: no applicable checks", r.group));
    }
    out
}

fn cohomology_checks(name: &str) -> bool {
    name == "even series" || name.starts_with("generator") || name.starts_with("identity") || name == "radical restrictions"
}

/// Reports for the named groups, keeping only cohomology checks.
fn cohomology_of(ids: &[&str]) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for id in ids {
        let r = verify_group(lookup(id).unwrap());
        n += r.checks.iter().filter(|c| cohomology_checks(&c.name)).count();
        failures.extend(failed_checks(&r, cohomology_checks));
    }
    Outcome::from_failures(failures, format!("{} groups, {n} checks", ids.len()))
}

// Power series helpers over the integers, in half-degree t.
fn series_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len();
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate() {
        if x != 0 {
            for (j, &y) in b.iter().enumerate().take(n - i) {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn geometric(step: usize, n: usize) -> Vec<i64> {
    (0..n).map(|i| (i % step == 0) as i64).collect()
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    let t_max = 456;
    let n = t_max + 1;
    for p in [3u32, 5, 7, 13] {
        let q = p as usize;
        // ((1 - t^{p+1})/(1-t)^2 + t^{p-1}) / (1 - t^p)
        let mut head = series_mul(&geometric(1, n), &geometric(1, n));
        let shifted: Vec<i64> = (0..n).map(|i| if i > q { head[i - q - 1] } else { 0 }).collect();
        for i in 0..n {
            head[i] -= shifted[i];
        }
        head[q - 1] += 1;
        let oracle = series_mul(&head, &geometric(q, n));
        let computed: Vec<i64> = ambient_dims(Algebra::BE(prime(p)), t_max as u32).into_iter().map(|x| x as i64).collect();
        if let Some(t) = (0..n).find(|&t| oracle[t] != computed[t]) {
            failures.push(format!("p={p}: degree {} computed {} closed form {}", 2 * t, computed[t], oracle[t]));
        }
        let s = Scope::new(Algebra::BE(prime(p)));
        for (lhs, rhs) in [("y1^p*y2", "y1*y2^p"), ("C^2", "Y1^2 + Y2^2 - Y1*Y2"), ("C*y1", "y1^p"), ("C*y2", "y2^p")] {
            let lhs = lhs.replace('p', &p.to_string());
            let rhs = rhs.replace('p', &p.to_string());
            if s.eval(&lhs).unwrap() != s.eval(&rhs).unwrap() {
                failures.push(format!("p={p}: {lhs} != {rhs}"));
            }
        }
    }
    Outcome::from_failures(failures, "p in {3,5,7,13} to degree 912, relations hold".into())
}

const A3: [&str; 9] = ["A:1", "A:Z2", "A:Z2'", "A:Z4", "A:Z8", "A:Q8", "A:D8", "A:V4", "A:SD16"];

fn criterion_2() -> Outcome {
    let mut out = cohomology_of(&A3);
    // The Weyl-convention action on BA gives the same series as the
    // module-convention action on POLY2.
    for id in A3 {
        let d = lookup(id).unwrap();
        let a = invariant_poincare_with(&d.weyl, Algebra::BA(d.prime), 96, Convention::Weyl).unwrap();
        let b = invariant_poincare_with(&d.weyl, Algebra::Poly2(d.prime), 96, Convention::Module).unwrap();
        if a != b {
            out.ok = false;
            out.detail.push_str(&format!("; {id}: BA and POLY2 series differ"));
        }
    }
    out
}

fn graph_agreement(graph: &str, expected_nodes: usize) -> Vec<String> {
    let cat = catalog().unwrap();
    let mut failures = Vec::new();
    let nodes = cat.graph_splittings(graph).unwrap();
    if nodes.len() != expected_nodes {
        failures.push(format!("graph {graph} has {} nodes, expected {expected_nodes}", nodes.len()));
    }
    for (id, want) in &nodes {
        let desc = cat.get(id).unwrap();
        match full_splitting(desc) {
            Ok(got) if got.same_counts(want) && got.tilde == (desc.sylow == Sylow::A) => {}
            Ok(got) => failures.push(format!("{id}: computed {got}, graph {want}")),
            Err(e) => failures.push(format!("{id}: {e}")),
        }
        if let Some(s) = desc.expectations.as_ref().and_then(|r| r.splitting.as_ref()) {
            if !SplittingTable::parse(s, desc.prime).unwrap().same_counts(want) {
                failures.push(format!("{id}: record and graph disagree"));
            }
        }
    }
    failures
}

fn criterion_3() -> Outcome {
    let mut failures = graph_agreement("A3", 9);
    failures.extend(graph_agreement("E3", 15));
    let cat = catalog().unwrap();
    let edge = cat.edges().iter().find(|e| e.to == "F3^2:SL2(3)");
    match edge {
        Some(e) if e.label == "X(1,0) v X(1,1) v L(2,1) v L(1,1)" => {}
        _ => failures.push("F3^2:SL2(3) edge label missing".into()),
    }
    Outcome::from_failures(failures, "24 graph nodes equal their computed tables".into())
}

fn criterion_4() -> Outcome {
    let mut out = cohomology_of(&["J4", "2F4(2)'", "M24"]);
    let j4 = verify_group(lookup("J4").unwrap());
    let r = j4.check("even series").map(|c| c.passed).unwrap_or(false);
    let da = lookup("J4").unwrap().expectations.as_ref().unwrap().even.clone().unwrap() == pres("DA", &[0]);
    let m24 = verify_group(lookup("M24").unwrap());
    let span = m24.check("generator span").map(|c| c.passed && !c.detail.starts_with("skipped")).unwrap_or(false);
    if !(r && da && span) {
        out.ok = false;
        out.detail.push_str("; J4 = DA or the M24 generator span failed");
    }
    out
}

fn criterion_5() -> Outcome {
    cohomology_of(&["E:3D8", "E:3SD16", "E:3SD32", "ON", "ON:2", "RV2", "RV3"])
}

fn criterion_6() -> Outcome {
    let mut out = cohomology_of(&["E:3S3", "E:6S3", "E:6^2:2", "He", "He:2", "Fi24'", "Fi24", "RV1"]);
    let rv1 = verify_group(lookup("RV1").unwrap());
    match rv1.check("identity bb^6 = D2^2 + D2pp*D2") {
        Some(c) if c.passed => {}
        _ => {
            out.ok = false;
            out.detail.push_str("; the RV1 ring identity was not verified");
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let failures = graph_agreement("E7", 9);
    Outcome::from_failures(failures, "nine tables, L(2,k) counts from rank sums".into())
}

fn criterion_8() -> Outcome {
    let mut out = cohomology_of(&["E:xy", "E:3x4S4", "M13"]);
    let mut failures = graph_agreement("E13", 2);
    let m13 = full_splitting(lookup("M13").unwrap()).unwrap();
    let want = SplittingTable::parse("X(0,0) v X(12,0) v X(12,6) v X(6,3) v X(8,8) v M(2)", prime(13)).unwrap();
    if m13 != want {
        failures.push(format!("M13 splitting {m13}"));
    }
    if let Err(e) = linear_form_products() {
        failures.push(e.to_string());
    }
    if !failures.is_empty() {
        out.ok = false;
        out.detail.push_str(&format!("; {}", failures.join("; ")));
    }
    out
}

/// Degrees of b_i v^j with ring generated by v^r, for the literal N(G) rows.
fn nil_rows_p7() -> Vec<(u32, ModulePresentation)> {
    let deg = |i: u32, j: u32| 2 * i + 2 + 14 * j;
    vec![
        (6, ModulePresentation::single(Ring::Degrees(vec![84]), vec![deg(1, 4), deg(2, 3), deg(3, 2), deg(4, 1)])),
        (3, ModulePresentation::single(Ring::Degrees(vec![42]), vec![deg(1, 1), deg(2, 0), deg(3, 2), deg(4, 1)])),
        (2, ModulePresentation::single(Ring::Degrees(vec![28]), vec![deg(1, 0), deg(2, 1), deg(3, 0), deg(4, 1)])),
        (1, ModulePresentation::single(Ring::Degrees(vec![14]), vec![deg(1, 0), deg(2, 0), deg(3, 0), deg(4, 0)])),
    ]
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let p7 = prime(7);
    for (order, row) in nil_rows_p7() {
        let got: Vec<u64> = nilpotent_dims_for(p7, order, 400).values().map(|&n| n as u64).collect();
        let want: Vec<u64> = expand_all_degrees(&row, p7, 400).unwrap().into_iter().step_by(2).collect();
        if got != want {
            failures.push(format!("N(G) row for |Det| = {order}"));
        }
    }
    let p13 = prime(13);
    let gens: Vec<u32> = (1..=10).map(|i| 2 * i + 2 + 26 * (11 - i)).collect();
    let want: Vec<u64> =
        expand_all_degrees(&ModulePresentation::single(Ring::Degrees(vec![312]), gens), p13, 912).unwrap().into_iter().step_by(2).collect();
    let got: Vec<u64> = nilpotent_dims_for(p13, 12, 912).values().map(|&n| n as u64).collect();
    if got != want {
        failures.push("N(G) at p=13".into());
    }

    let s = |gens: &[u32]| ModulePresentation::single(Ring::Named("S".into()), gens.to_vec());
    let da = |gens: &[u32]| pres("DA", gens);
    let mut m13 = da(&[199, 423, 647]);
    m13.summands.extend(pres("CA", &[65, 155, 245, 335]).summands);
    let odd: Vec<(&str, ModulePresentation)> = vec![
        ("A:Z8", s(&[7, 11, 11, 23])),
        ("A:D8", s(&[11, 15, 19, 23])),
        ("A:SD16", s(&[11, 23])),
        ("2F4(2)'", da(&[11, 27])),
        ("RV3", da(&[51, 115, 179])),
        ("RV2", da(&[19, 51, 83, 115, 147, 179])),
        ("RV1", da(&[51, 115, 179, 179])),
        ("M13", m13),
    ];
    for (id, reference) in odd {
        let desc = lookup(id).unwrap();
        let got = odd_dims(desc, 300).unwrap();
        let want = expand_all_degrees(&reference, desc.prime, 300).unwrap();
        if let Some((d, n)) = got.iter().find(|(d, n)| want[**d as usize] as usize != **n) {
            failures.push(format!("{id} odd degree {d}: computed {n}, reference {}", want[*d as usize]));
        }
    }
    Outcome::from_failures(failures, "N(G) tables and eight odd series to degree 300".into())
}

fn criterion_10() -> Outcome {
    let mut failures = Vec::new();
    for p in [3u32, 7, 13] {
        let mut be = SplittingTable::default();
        let mut ba = SplittingTable { tilde: true, ..Default::default() };
        for q in 0..p {
            for k in 0..p - 1 {
                be.dominant.insert((q, k), q + 1);
                ba.dominant.insert((q, k), q + 1);
            }
        }
        for k in 0..p - 1 {
            be.l2.insert(k, p + 1);
        }
        for q in 1..p {
            *be.l1.entry(q % (p - 1)).or_insert(0) += q + 1;
            *ba.l1.entry(q % (p - 1)).or_insert(0) += q + 1;
        }
        *be.l1.entry(0).or_insert(0) += 1;
        let (e_id, a_id) = if p == 3 { ("E:1".to_string(), "A:1".to_string()) } else { (format!("E{p}:1"), format!("A{p}:1")) };
        for (id, want) in [(e_id, be), (a_id, ba)] {
            match full_splitting(lookup(&id).unwrap()) {
                Ok(got) if got == want => {}
                Ok(got) => failures.push(format!("{id}: {got}")),
                Err(e) => failures.push(format!("{id}: {e}")),
            }
        }
    }
    Outcome::from_failures(failures, "BE and BA at p in {3,7,13}".into())
}

fn random_mat(rng: &mut StdRng, p: Prime) -> Mat2 {
    loop {
        let q = p.get() as i64;
        let m = Mat2::new(p, rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q));
        if m.is_invertible() {
            return m;
        }
    }
}

fn random_be(rng: &mut StdRng, p: Prime, t: u32) -> GradedElement {
    let alg = Algebra::BE(p);
    let basis = plfg_core::graded::degree_basis(alg, 2 * t);
    let q = p.get();
    GradedElement::from_terms(alg, basis.into_iter().map(|m| (m, rng.gen_range(0..q))))
}

fn criterion_11() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();

    // Averaging rank equals the fixed dimension for groups of order prime to p.
    let mut groups = 0;
    while groups < 50 {
        let p = prime([3, 5, 7, 11, 13][rng.gen_range(0..5)]);
        let gens: Vec<Mat2> = (0..rng.gen_range(1..3)).map(|_| random_mat(&mut rng, p)).collect();
        let g = group_closure(p, &gens).unwrap();
        if g.order().is_multiple_of(p.get() as usize) {
            continue;
        }
        groups += 1;
        for _ in 0..3 {
            let spec = SimpleModuleSpec { q: rng.gen_range(0..p.get()), k: rng.gen_range(0..p.get() - 1) };
            if averaging_rank(&g, spec) != fixed_module_dim(&g, spec) {
                failures.push(format!("averaging vs fixed for {gens:?} on {spec:?}"));
            }
        }
    }

    // Functoriality and ring homomorphism of the BE action.
    for _ in 0..200 {
        let p = prime([3, 5, 7][rng.gen_range(0..3)]);
        let (g, h) = (random_mat(&mut rng, p), random_mat(&mut rng, p));
        let tx = rng.gen_range(0..3 * p.get());
        let x = random_be(&mut rng, p, tx);
        let ty = rng.gen_range(0..3 * p.get());
        let y = random_be(&mut rng, p, ty);
        if act_be(&g, &act_be(&h, &x)) != act_be(&h.mul(&g), &x) {
            failures.push(format!("functoriality for {g:?}, {h:?}"));
        }
        if act_be(&g, &x.mul(&y).unwrap()) != act_be(&g, &x).mul(&act_be(&g, &y)).unwrap() {
            failures.push(format!("homomorphism for {g:?}"));
        }
    }

    // Restriction squares for every Weyl element stabilizing an A-subgroup.
    for desc in catalog().unwrap().descriptors().iter().filter(|d| d.sylow == Sylow::E) {
        let xs: Vec<GradedElement> = (0..2).map(|_| { let t = rng.gen_range(1..2 * desc.prime.get()); random_be(&mut rng, desc.prime, t) }).collect();
        failures.extend(restriction_squares(desc, &xs));
    }

    // Confluence of the rewriting system.
    for _ in 0..500 {
        let p = prime([3, 5, 7, 13][rng.gen_range(0..4)]);
        let q = p.get();
        let m = Monomial::be(rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(0..6 * q), rng.gen_range(0..6 * q));
        let a = be_reduce_with(p, m, Strategy::R1First);
        if a != be_reduce_with(p, m, Strategy::Interleaved) || a != be_reduce_with(p, m, Strategy::R2First) {
            failures.push(format!("rewriting of {m:?} at p={p}"));
        }
    }

    // m(G,2)_0: class count minus radical count against the rank sum.
    for desc in catalog().unwrap().descriptors().iter().filter(|d| d.sylow == Sylow::E) {
        let by_count = desc.classes.iter().filter(|c| !c.radical).count() as u32;
        let by_rank: u32 = class_ranks(desc).unwrap().iter().map(|r| r[0]).sum();
        if by_count != by_rank {
            failures.push(format!("{}: m(2)_0 {by_count} vs {by_rank}", desc.id));
        }
    }
    Outcome::from_failures(failures, "all property suites hold".into())
}

fn restriction_squares(desc: &FusionDescriptor, xs: &[GradedElement]) -> Vec<String> {
    let mut out = Vec::new();
    for i in SubgroupIndex::all(desc.prime) {
        for g in desc.weyl.elements().iter().filter(|g| mobius_image(g, i) == i) {
            let m = induced_matrix(g, i);
            for x in xs {
                if restrict_to_a(&act_be(g, x), i) != weyl_act_on_ba(&m, &restrict_to_a(x, i)) {
                    out.push(format!("{}: square fails for {g:?} at A_{i}", desc.id));
                }
            }
        }
    }
    out
}

type Criterion = fn() -> Outcome;

// Runs without the libtest harness so the criterion lines are always shown.
fn main() -> ExitCode {
    let criteria: [(u32, Duration, Criterion); 11] = [
        (1, Duration::from_secs(1), criterion_1),
        (2, Duration::from_secs(1), criterion_2),
        (3, Duration::from_secs(5), criterion_3),
        (4, Duration::from_secs(5), criterion_4),
        (5, Duration::from_secs(60), criterion_5),
        (6, Duration::from_secs(60), criterion_6),
        (7, Duration::from_secs(30), criterion_7),
        (8, Duration::from_secs(600), criterion_8),
        (9, Duration::from_secs(60), criterion_9),
        (10, Duration::from_secs(5), criterion_10),
        (11, Duration::from_secs(30), criterion_11),
    ];
    let mut failing = BTreeMap::new();
    for (n, limit, run) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if took > limit {
            outcome.ok = false;
            outcome.detail.push_str(&format!("; took {took:.2?}, limit {limit:?}"));
        }
        println!("criterion {n}: {} ({:.2?}) {}", if outcome.ok { "PASS" } else { "FAIL" }, took, outcome.detail);
        if !outcome.ok {
            failing.insert(n, outcome.detail);
        }
    }
    for (n, why) in UNATTAINABLE {
        println!("criterion {n} is expected to fail: {why}");
    }
    let expected: Vec<u32> = UNATTAINABLE.iter().map(|(n, _)| *n).collect();
    let actual: Vec<u32> = failing.keys().copied().collect();
    if actual == expected {
        println!("acceptance: failing criteria are exactly the known ones {expected:?}");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcomes, failing {actual:?}, expected {expected:?}");
        ExitCode::FAILURE
    }
}
