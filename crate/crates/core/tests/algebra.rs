use std::collections::BTreeMap;

use proptest::prelude::*;
use rayon::prelude::*;
use strandcat::algebra::{
    diff_element, diff_generator, enumerate_basis, enumerate_full_basis, maslov2, mul_elements,
    mul_generators, SymElement, SymGenerator,
};
use strandcat::corpus::generate_corpus;
use strandcat::{ArcDiagram, StrandDiagram};

fn diag(sizes: &[usize], matching: &[usize]) -> ArcDiagram {
    ArcDiagram::new(sizes.to_vec(), matching.to_vec()).unwrap()
}

/// Every strand diagram whose start and end places each meet a pair at most once, found by
/// trying all upward partial injections.
fn brute_force_constrained(d: &ArcDiagram) -> Vec<StrandDiagram> {
    fn go(
        d: &ArcDiagram,
        p: usize,
        used: &mut Vec<bool>,
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<StrandDiagram>,
    ) {
        if p > d.place_count() {
            let mut starts: Vec<usize> = acc.iter().map(|&(a, _)| d.label(a)).collect();
            let mut ends: Vec<usize> = acc.iter().map(|&(_, b)| d.label(b)).collect();
            starts.sort_unstable();
            ends.sort_unstable();
            let injective = |v: &[usize]| v.windows(2).all(|w| w[0] != w[1]);
            if injective(&starts) && injective(&ends) {
                out.push(StrandDiagram::new(acc.clone()));
            }
            return;
        }
        go(d, p + 1, used, acc, out);
        for q in p..=d.place_count() {
            if d.same_segment(p, q) && !used[q] {
                used[q] = true;
                acc.push((p, q));
                go(d, p + 1, used, acc, out);
                acc.pop();
                used[q] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(
        d,
        1,
        &mut vec![false; d.place_count() + 1],
        &mut Vec::new(),
        &mut out,
    );
    out
}

#[test]
fn expansions_partition_constrained_diagrams() {
    for d in generate_corpus(3, 3) {
        let mut from_basis: Vec<StrandDiagram> = enumerate_full_basis(&d)
            .iter()
            .flat_map(|g| g.expand(&d))
            .collect();
        from_basis.sort();
        let mut brute = brute_force_constrained(&d);
        brute.sort();
        assert_eq!(from_basis, brute, "{d}");
    }
}

#[test]
fn basis_sizes_of_punctured_torus() {
    let d = diag(&[4], &[1, 2, 1, 2]);
    let sizes: Vec<usize> = (0..=2).map(|i| enumerate_basis(&d, i).len()).collect();
    assert_eq!(sizes, vec![1, 8, 7]);
}

#[test]
fn gradings_do_not_depend_on_twin_choices() {
    for d in generate_corpus(3, 3) {
        for g in enumerate_full_basis(&d) {
            let terms = g.expand(&d);
            let m = g.maslov2(&d);
            let h = g.hom_grading(&d);
            for e in &terms {
                assert_eq!(maslov2(&d, e), m, "{d} {g:?}");
                assert_eq!(e.step_multiplicities(&d), h.multiplicities(), "{d} {g:?}");
            }
        }
    }
}

#[test]
fn differential_squares_to_zero_and_lowers_maslov_by_one() {
    for d in generate_corpus(3, 3) {
        for g in enumerate_full_basis(&d) {
            let dg = diff_generator(&d, &g).unwrap();
            for term in dg.iter() {
                assert_eq!(term.maslov2(&d), g.maslov2(&d) - 2, "{d} {g:?}");
                assert_eq!(term.hom_grading(&d), g.hom_grading(&d));
            }
            assert!(diff_element(&d, &dg).unwrap().is_zero(), "{d} {g:?}");
        }
    }
}

fn by_idempotents(basis: &[SymGenerator]) -> BTreeMap<strandcat::LabelSet, Vec<&SymGenerator>> {
    let mut out: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for g in basis {
        out.entry(g.s).or_default().push(g);
    }
    out
}

#[test]
fn leibniz_rule_on_composable_pairs() {
    for d in generate_corpus(3, 3) {
        let basis = enumerate_full_basis(&d);
        let starts = by_idempotents(&basis);
        basis.par_iter().for_each(|a| {
            let da = diff_generator(&d, a).unwrap();
            let sa = SymElement::single(a.clone());
            for b in starts.get(&a.t).into_iter().flatten() {
                let ab = mul_generators(&d, a, b).unwrap();
                let lhs = diff_element(&d, &ab).unwrap();
                let sb = SymElement::single((*b).clone());
                let db = diff_generator(&d, b).unwrap();
                let rhs = mul_elements(&d, &da, &sb)
                    .unwrap()
                    .add(&mul_elements(&d, &sa, &db).unwrap());
                assert_eq!(lhs, rhs, "{d} {a:?} {b:?}");
            }
        });
    }
}

#[test]
fn products_are_associative_on_small_diagrams() {
    for d in generate_corpus(2, 3) {
        let basis = enumerate_full_basis(&d);
        let starts = by_idempotents(&basis);
        for a in &basis {
            for b in starts.get(&a.t).into_iter().flatten() {
                let ab = mul_generators(&d, a, b).unwrap();
                for c in starts.get(&b.t).into_iter().flatten() {
                    let sc = SymElement::single((*c).clone());
                    let left = mul_elements(&d, &ab, &sc).unwrap();
                    let bc = mul_generators(&d, b, c).unwrap();
                    let right = mul_elements(&d, &SymElement::single(a.clone()), &bc).unwrap();
                    assert_eq!(left, right, "{d} {a:?} {b:?} {c:?}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn associativity_on_random_triples(seed in any::<[usize; 4]>()) {
        let corpus = generate_corpus(3, 3);
        let d = &corpus[seed[0] % corpus.len()];
        let basis = enumerate_full_basis(d);
        let a = &basis[seed[1] % basis.len()];
        let next = |s: strandcat::LabelSet, pick: usize| {
            let options: Vec<&SymGenerator> = basis.iter().filter(|g| g.s == s).collect();
            options[pick % options.len()].clone()
        };
        let b = next(a.t, seed[2]);
        let c = next(b.t, seed[3]);
        let one = |g: &SymGenerator| SymElement::single(g.clone());
        let left = mul_elements(d, &mul_generators(d, a, &b).unwrap(), &one(&c)).unwrap();
        let right = mul_elements(d, &one(a), &mul_generators(d, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}
