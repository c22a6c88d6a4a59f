//! Computed Poincaré series along inclusions of fusion systems differ by the
//! series of a known free module.

use plfg_core::catalog::lookup;
use plfg_core::cohomology::engine;
use plfg_core::gf::Prime;
use plfg_core::presentation::{expand_presentation, ModulePresentation, Ring, Summand};

fn computed(id: &str, d_max: u32) -> Vec<usize> {
    engine(lookup(id).unwrap()).unwrap().poincare(d_max).unwrap()
}

fn module(parts: &[(&str, &[u32])]) -> ModulePresentation {
    let mut pres = ModulePresentation { summands: Vec::<Summand>::new() };
    for (ring, gens) in parts {
        pres.summands.extend(ModulePresentation::single(Ring::Named((*ring).into()), gens.to_vec()).summands);
    }
    pres
}

fn assert_sum(larger: &str, smaller: Option<&str>, extra: &[(&str, &[u32])], p: u32, d_max: u32) {
    let p = Prime::new(p).unwrap();
    let add = expand_presentation(&module(extra), p, d_max).unwrap();
    let base = smaller.map(|s| computed(s, d_max)).unwrap_or_else(|| vec![0; add.len()]);
    let want: Vec<usize> = base.iter().zip(&add).map(|(a, b)| a + b).collect();
    let got = computed(larger, d_max);
    if let Some(i) = (0..want.len()).find(|&i| want[i] != got[i]) {
        panic!("{larger}: degree {} computed {} but the sum gives {}", 2 * i, got[i], want[i]);
    }
}

#[test]
fn ca_is_a_free_da_module() {
    let p = Prime::new(3).unwrap();
    let ca = expand_presentation(&module(&[("CA", &[0])]), p, 400).unwrap();
    let da = expand_presentation(&module(&[("DA", &[0, 4, 8, 12])]), p, 400).unwrap();
    assert_eq!(ca, da);
}

#[test]
fn chain_at_three() {
    assert_sum("J4", None, &[("DA", &[0])], 3, 96);
    assert_sum("2F4(2)'", Some("J4"), &[("DA", &[16])], 3, 96);
    assert_sum("M24", Some("2F4(2)'"), &[("DA", &[4, 8, 12])], 3, 96);
}

#[test]
fn o_nan_chain() {
    assert_sum("RV2", Some("RV3"), &[("DA", &[32, 96, 160])], 7, 400);
    assert_sum("RV3", None, &[("DA", &[0, 64, 128])], 7, 400);
    assert_sum("ON:2", Some("RV2"), &[("M", &[12, 44, 76])], 7, 400);
    assert_sum("ON", Some("ON:2"), &[("DA", &[64, 96, 128]), ("CA", &[22, 54, 86])], 7, 400);
}

#[test]
fn fischer_held_chain() {
    assert_sum("Fi24", Some("RV1"), &[("M", &[12])], 7, 400);
    // bbar (32), abar^2 V (96), c'bbar^2 V (160), abar dbar (54)
    assert_sum("Fi24'", Some("Fi24"), &[("DA", &[32, 96, 160]), ("CA", &[54])], 7, 400);
    assert_sum("He:2", Some("Fi24'"), &[("M", &[12, 44, 76])], 7, 400);
}
