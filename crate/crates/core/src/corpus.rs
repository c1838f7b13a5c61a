//! Exhaustive enumeration of small valid arc diagrams.

use std::collections::BTreeSet;

use crate::arcdiag::ArcDiagram;

/// All valid arc diagrams with `1 ≤ k ≤ max_k` pairs and `1 ≤ l ≤ max_l` segments, one per
/// class under reordering of segments (and relabelling of pairs). Ordered by `(k, l)` and
/// then by canonical form.
pub fn generate_corpus(max_k: usize, max_l: usize) -> Vec<ArcDiagram> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        let matchings = pairings(2 * k);
        for l in 1..=max_l.min(2 * k) {
            let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
            for sizes in compositions(2 * k, l) {
                for m in &matchings {
                    let form = canonical_form(&sizes, m);
                    if seen.contains(&form) {
                        continue;
                    }
                    let d = ArcDiagram::new(form.0.clone(), form.1.clone())
                        .expect("enumerated diagrams are well formed");
                    if d.is_valid() {
                        seen.insert(form);
                    }
                }
            }
            out.extend(
                seen.into_iter()
                    .map(|(sizes, m)| ArcDiagram::new(sizes, m).expect("well formed")),
            );
        }
    }
    out
}

/// Ordered ways to write `n` as a sum of `parts` positive integers.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All perfect matchings of `n` places, as label sequences numbered by first appearance.
pub fn pairings(n: usize) -> Vec<Vec<usize>> {
    fn go(seq: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
        let Some(first) = seq.iter().position(|&x| x == 0) else {
            out.push(seq.clone());
            return;
        };
        seq[first] = next;
        for j in first + 1..seq.len() {
            if seq[j] == 0 {
                seq[j] = next;
                go(seq, next + 1, out);
                seq[j] = 0;
            }
        }
        seq[first] = 0;
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        go(&mut vec![0; n], 1, &mut out);
    }
    out
}

/// Renumbers labels in order of first appearance.
fn relabel(matching: &[usize]) -> Vec<usize> {
    let mut map = vec![0; matching.len() + 1];
    let mut next = 1;
    matching
        .iter()
        .map(|&x| {
            if map[x] == 0 {
                map[x] = next;
                next += 1;
            }
            map[x]
        })
        .collect()
}

/// Least `(sizes, labels)` over all reorderings of the segments.
pub fn canonical_form(sizes: &[usize], matching: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut starts = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &n in sizes {
        starts.push(acc);
        acc += n;
    }
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for perm in permutations(sizes.len()) {
        let new_sizes: Vec<usize> = perm.iter().map(|&i| sizes[i]).collect();
        let seq: Vec<usize> = perm
            .iter()
            .flat_map(|&i| matching[starts[i]..starts[i] + sizes[i]].iter().copied())
            .collect();
        let cand = (new_sizes, relabel(&seq));
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.expect("at least one permutation")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}
