use strandcat::algebra::HomClass;
use strandcat::corpus::generate_corpus;
use strandcat::homology::{
    build_summand, check_ambiguous_summands, key_nonzero, nonzero_by_conditions, summand_nonzero,
    DiagramHomology, SummandKey,
};
use strandcat::{ArcDiagram, LabelSet, StepSet};

fn diag(sizes: &[usize], matching: &[usize]) -> ArcDiagram {
    ArcDiagram::new(sizes.to_vec(), matching.to_vec()).unwrap()
}

#[test]
fn summands_are_at_most_one_dimensional() {
    for d in generate_corpus(3, 3) {
        let hom = DiagramHomology::compute(&d).unwrap();
        for (key, dims) in &hom.dims {
            assert!(dims.len() <= 1, "{d} {key:?} {dims:?}");
            assert!(dims.values().all(|&n| n == 1), "{d} {key:?} {dims:?}");
            assert_eq!(key_nonzero(&d, key), !dims.is_empty(), "{d} {key:?}");
            assert_eq!(
                nonzero_by_conditions(&d, &hom.summands[key]),
                !dims.is_empty(),
                "{d} {key:?}"
            );
        }
    }
}

#[test]
fn closed_form_vanishes_off_the_chain_support() {
    for d in generate_corpus(3, 3) {
        let hom = DiagramHomology::compute(&d).unwrap();
        let n = d.interior_count();
        for s in LabelSet::all_subsets(d.k()) {
            for t in LabelSet::all_subsets(d.k()) {
                for u in StepSet::all_subsets(n) {
                    let key = SummandKey {
                        s,
                        t,
                        h: HomClass::indicator(n, u),
                    };
                    assert_eq!(
                        summand_nonzero(&d, s, t, &key.h),
                        hom.dim(&key) == 1,
                        "{d} {key:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn boundary_matrices_compose_to_zero() {
    for d in generate_corpus(3, 3) {
        let hom = DiagramHomology::compute(&d).unwrap();
        for sum in hom.summands.values() {
            assert!(
                sum.boundary_squares().iter().all(|m| m.is_zero()),
                "{d} {:?}",
                sum.key
            );
        }
    }
}

#[test]
fn single_summand_build_matches_bulk_build() {
    let d = diag(&[4], &[1, 2, 1, 2]);
    let hom = DiagramHomology::compute(&d).unwrap();
    for (key, sum) in &hom.summands {
        let alone = build_summand(&d, key.s, key.t, key.h.clone()).unwrap();
        assert_eq!(alone.graded_basis, sum.graded_basis);
        assert_eq!(alone.homology_dims(), sum.homology_dims());
    }
}

#[test]
fn paired_crossingless_generators_are_homologous() {
    let mut seen = 0;
    for d in generate_corpus(3, 3) {
        let hom = DiagramHomology::compute(&d).unwrap();
        for check in check_ambiguous_summands(&d, &hom).unwrap() {
            assert!(check.homologous, "{d} {check:?}");
            seen += 1;
        }
    }
    assert!(seen > 0, "the corpus exercises the ambiguous configuration");
}

#[test]
fn punctured_torus_totals() {
    let d = diag(&[4], &[1, 2, 1, 2]);
    let hom = DiagramHomology::compute(&d).unwrap();
    assert_eq!(hom.generator_count(), 16);
    let by_strands: Vec<usize> = (0..=2)
        .map(|i| hom.nonzero_keys().filter(|k| k.s.len() == i).count())
        .collect();
    // one strand: no crossings are possible, so all eight generators survive
    assert_eq!(by_strands, vec![1, 8, 1]);
    assert_eq!(hom.total_dim(), 10);
}
