//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured numbers. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use alc::algebra::{make_algebra, make_algebra_unchecked, neat_reduct, ra_reduct};
use alc::element::Element;
use alc::games;
use alc::graphs;
use alc::repsearch::{self, RepOptions, RepOutcome};
use alc::structures::{
    bridge, graph_alg, named, surgery, validate_ca, validate_pea, validate_ra, AtomStructure,
    CaAtomStructure, PeaAtomStructure, RaAtomStructure, RelBits, TripleSet,
};
use alc::synth;
use alc::termlang::{parse_term, print_term, suites, CheckOptions, TermAst, Verdict};
use alc::FiniteAlgebra;

fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(cur, max.max(b + 1), n, out);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), 0, n, &mut out);
    out
}

fn rel_of_blocks(blocks: &[usize]) -> RelBits {
    let n = blocks.len();
    let mut r = RelBits::empty(n);
    for a in 0..n {
        for b in 0..n {
            if blocks[a] == blocks[b] {
                r.insert(a, b);
            }
        }
    }
    r
}

fn atom_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("a{i}")).collect()
}

fn ca_candidate(n: usize, t: [RelBits; 3], e01: Element, e02: Element, e12: Element) -> CaAtomStructure {
    let full = Element::one(n);
    let e = vec![
        full.clone(),
        e01.clone(),
        e02.clone(),
        e01,
        full.clone(),
        e12.clone(),
        e02,
        e12,
        full,
    ];
    CaAtomStructure::new(3, atom_names(n), t.to_vec(), e)
}

fn subsets(n: usize) -> Vec<Element> {
    (0..1u128 << n).map(|m| Element::from_index(n, m)).collect()
}

/// Exhaustive dim-3 candidate family: every equivalence triple with
/// symmetric diagonal data on up to 3 atoms, plus constrained 4- and 5-atom
/// slices.
fn candidate_family() -> Vec<CaAtomStructure> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let parts: Vec<RelBits> = partitions(n).iter().map(|b| rel_of_blocks(b)).collect();
        let subs = subsets(n);
        for t0 in &parts {
            for t1 in &parts {
                for t2 in &parts {
                    for e01 in &subs {
                        for e02 in &subs {
                            for e12 in &subs {
                                out.push(ca_candidate(
                                    n,
                                    [t0.clone(), t1.clone(), t2.clone()],
                                    e01.clone(),
                                    e02.clone(),
                                    e12.clone(),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    for n in 4..=5usize {
        let parts: Vec<RelBits> = partitions(n).iter().map(|b| rel_of_blocks(b)).collect();
        let subs = subsets(n);
        for t0 in &parts {
            for uniform in [RelBits::identity(n), RelBits::full(n)] {
                for d in &subs {
                    out.push(ca_candidate(
                        n,
                        [t0.clone(), uniform.clone(), uniform.clone()],
                        d.clone(),
                        d.clone(),
                        d.clone(),
                    ));
                }
            }
        }
    }
    out
}

fn random_relation(rng: &mut ChaCha8Rng, n: usize) -> RelBits {
    match rng.gen_range(0..10) {
        0..=4 => {
            let blocks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n.max(1))).collect();
            rel_of_blocks(&blocks)
        }
        5..=7 => {
            // reflexive symmetric, possibly not transitive
            let mut r = RelBits::identity(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.3) {
                        r.insert(a, b);
                        r.insert(b, a);
                    }
                }
            }
            r
        }
        _ => {
            let mut r = RelBits::empty(n);
            for a in 0..n {
                for b in 0..n {
                    if rng.gen_bool(0.4) {
                        r.insert(a, b);
                    }
                }
            }
            r
        }
    }
}

fn random_candidate(rng: &mut ChaCha8Rng, n: usize) -> CaAtomStructure {
    let rand_subset = |rng: &mut ChaCha8Rng| {
        Element::from_bits(n, (0..n).filter(|_| rng.gen_bool(0.5)))
    };
    let full = Element::one(n);
    let mut e = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                e.push(if rng.gen_bool(0.8) {
                    full.clone()
                } else {
                    rand_subset(rng)
                });
            } else {
                e.push(rand_subset(rng));
            }
        }
    }
    // symmetrize most of the time
    if rng.gen_bool(0.7) {
        for i in 0..3 {
            for j in i + 1..3 {
                let v = e[i * 3 + j].clone();
                e[j * 3 + i] = v;
            }
        }
    }
    CaAtomStructure::new(
        3,
        atom_names(n),
        vec![
            random_relation(rng, n),
            random_relation(rng, n),
            random_relation(rng, n),
        ],
        e,
    )
}

fn ca_suite_exhaustive_pass(s: &CaAtomStructure) -> bool {
    let alg = make_algebra_unchecked(&AtomStructure::Ca(s.clone()));
    let report =
        suites::axiom_suite(&alg, suites::SuiteKind::Ca, CheckOptions::default()).unwrap();
    for item in &report.items {
        assert!(
            !matches!(item.verdict, Verdict::HoldsSampled { .. }),
            "suite must stay exhaustive at this scale"
        );
    }
    report.pass()
}

#[test]
fn criterion_01_structure_axioms_biconditional() {
    let started = std::time::Instant::now();
    let mut family = candidate_family();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        family.push(random_candidate(&mut rng, n));
    }
    let total = family.len();
    let outcomes: Vec<(bool, bool)> = family
        .par_iter()
        .map(|s| (validate_ca(s).is_valid(), ca_suite_exhaustive_pass(s)))
        .collect();
    let mut valid_count = 0;
    for (i, (valid, pass)) in outcomes.iter().enumerate() {
        assert_eq!(
            valid, pass,
            "biconditional failed on candidate {i}: validator {valid}, suite {pass}"
        );
        if *valid {
            valid_count += 1;
        }
    }
    assert!(valid_count > 0, "family must contain valid structures");
    assert!(valid_count < total, "family must contain invalid structures");
    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 120.0, "criterion 1 exceeded 2 minutes: {secs:.1}s");
    println!(
        "criterion 1 (structure/axioms biconditional): PASS — {total} candidates, {valid_count} valid, zero discrepancies, {secs:.1}s"
    );
}

/// Dimension-3 algebras the merry-go-round criteria run on: valid family
/// members plus the named triple structures and set structures.
fn mgr_corpus() -> Vec<(String, CaAtomStructure)> {
    let mut out: Vec<(String, CaAtomStructure)> = Vec::new();
    for (i, s) in candidate_family()
        .into_iter()
        .filter(|s| validate_ca(s).is_valid())
        .enumerate()
    {
        out.push((format!("family{i}"), s));
    }
    for k in 1..=4 {
        out.push((
            format!("triples(monk{k})"),
            bridge::ca3_from_ra(&named::monk_ek(k).unwrap()).unwrap(),
        ));
    }
    out.push((
        "triples(lyndon4)".into(),
        bridge::ca3_from_ra(&named::lyndon(4).unwrap()).unwrap(),
    ));
    out.push((
        "triples(anr313)".into(),
        bridge::ca3_from_ra(&named::a_n_r(3, 1, 3).unwrap()).unwrap(),
    ));
    out.push(("set(2,3)".into(), named::full_ca_set_structure(2, 3)));
    out.push(("set(3,3)".into(), named::full_ca_set_structure(3, 3)));
    out
}

fn mgr_item_verdicts(s: &CaAtomStructure) -> Vec<(String, bool)> {
    let alg = make_algebra_unchecked(&AtomStructure::Ca(s.clone()));
    let report =
        suites::axiom_suite(&alg, suites::SuiteKind::Mgr, CheckOptions::default()).unwrap();
    report
        .items
        .iter()
        .map(|i| (i.name.clone(), i.verdict.holds()))
        .collect()
}

#[test]
fn criterion_02_mgr_coherence() {
    let corpus = mgr_corpus();
    let count = corpus.len();
    for (name, s) in &corpus {
        let items = mgr_item_verdicts(s);
        let mgr: Vec<bool> = items
            .iter()
            .filter(|(n, _)| !n.contains("idem"))
            .map(|(_, v)| *v)
            .collect();
        let idem: Vec<bool> = items
            .iter()
            .filter(|(n, _)| n.contains("idem"))
            .map(|(_, v)| *v)
            .collect();
        assert_eq!(mgr.len(), 3);
        assert!(
            mgr.iter().all(|&v| v == mgr[0]),
            "{name}: MGR_k verdicts disagree: {mgr:?}"
        );
        for k in 0..3 {
            assert_eq!(
                mgr[k], idem[k],
                "{name}: MGR_{k} disagrees with its idempotence form"
            );
        }
    }
    println!("criterion 2 (MGR coherence): PASS — {count} dim-3 algebras, zero discrepancies");
}

#[test]
fn criterion_03_surgery_soundness() {
    // dilation seeds with their candidate coordinate sequences
    let seeds: Vec<(String, CaAtomStructure)> = vec![
        ("set(3,3)".into(), named::full_ca_set_structure(3, 3)),
        (
            "triples(monk2)".into(),
            bridge::ca3_from_ra(&named::monk_ek(2).unwrap()).unwrap(),
        ),
        (
            "triples(monk3)".into(),
            bridge::ca3_from_ra(&named::monk_ek(3).unwrap()).unwrap(),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut dilations_done = 0;
    'dilations: loop {
        for (name, s) in &seeds {
            let cands = surgery::dilation_candidates(s, 40);
            if cands.is_empty() {
                continue;
            }
            // one to three sequences per dilation
            let count = 1 + rng.gen_range(0..3usize).min(cands.len() - 1);
            let mut chosen = Vec::new();
            for _ in 0..count {
                chosen.push(cands[rng.gen_range(0..cands.len())].clone());
            }
            chosen.sort();
            chosen.dedup();
            let before = mgr_item_verdicts(s);
            let out = surgery::dilate(s, &chosen).unwrap_or_else(|e| {
                panic!("{name}: candidate dilation rejected: {e}");
            });
            assert!(
                validate_ca(&out).is_valid(),
                "{name}: dilation output fails validation"
            );
            let after = mgr_item_verdicts(&out);
            assert_eq!(before, after, "{name}: dilation changed an MGR verdict");
            dilations_done += 1;
            if dilations_done >= 100 {
                break 'dilations;
            }
        }
    }

    // twists: corpus of structures with usable twist parameters
    let twist_seeds: Vec<CaAtomStructure> = vec![
        bridge::ca3_from_ra(&named::monk_ek(2).unwrap()).unwrap(),
        bridge::ca3_from_ra(&named::monk_ek(3).unwrap()).unwrap(),
    ];
    let mut twists_done = 0;
    let mut twisted_pool: Vec<CaAtomStructure> = Vec::new();
    for s in &twist_seeds {
        for params in surgery::twist_candidates(s, 60) {
            let out = surgery::twist(s, &params).unwrap();
            assert!(
                validate_ca(&out).is_valid(),
                "twist output fails validation"
            );
            twisted_pool.push(out);
            twists_done += 1;
            if twists_done >= 100 {
                break;
            }
        }
        if twists_done >= 100 {
            break;
        }
    }
    assert!(twists_done >= 100, "need 100 twists, got {twists_done}");

    // at least one twist (of a twisted structure in the search corpus)
    // flips a MGR verdict
    let seed = bridge::ca3_from_ra(&named::monk_ek(3).unwrap()).unwrap();
    let base_mgr = mgr_item_verdicts(&seed);
    let depth1: Vec<CaAtomStructure> = surgery::twist_candidates(&seed, 800)
        .iter()
        .map(|p| surgery::twist(&seed, p).unwrap())
        .filter(|s| validate_ca(s).is_valid())
        .take(60)
        .collect();
    let flip = depth1.par_iter().enumerate().find_map_any(|(i, s)| {
        let before = mgr_item_verdicts(s);
        for params in surgery::twist_candidates(s, 800) {
            let out = surgery::twist(s, &params).unwrap();
            if !validate_ca(&out).is_valid() {
                continue;
            }
            let after = mgr_item_verdicts(&out);
            if after != before {
                return Some((i, params, before, after));
            }
        }
        None
    });
    let (source, params, before, after) = flip.expect("some twist must flip an MGR verdict");
    println!(
        "criterion 3 (surgery): PASS — {dilations_done} dilations and {twists_done} twists re-validate; \
         MGR flip witness: twisted triples(monk3) #{source}, twist t={} xi={:?}, {:?} -> {:?}; \
         baseline {:?}",
        params.t,
        params.xi,
        before.iter().filter(|(_, v)| *v).count(),
        after.iter().filter(|(_, v)| *v).count(),
        base_mgr.iter().all(|(_, v)| *v)
    );
}

#[test]
fn criterion_04_graph_constructions() {
    let started = std::time::Instant::now();
    let graphs5 = graphs::nonisomorphic_graphs(5);
    assert_eq!(graphs5.len(), 34);
    graphs5.par_iter().for_each(|g| {
        let alpha = graph_alg::alpha_graph(g, 3).unwrap();
        assert!(validate_ra(&alpha).is_valid(), "alpha(G) must validate");
        let (_, induced, basis) = bridge::basic_matrices(&alpha, 3).unwrap();
        assert!(
            basis.induced_valid && validate_ca(&induced).is_valid(),
            "matrix structure must validate"
        );
    });
    // monochromatic law over the edgeless graph
    let edgeless = graphs5.iter().find(|g| g.edge_count() == 0).unwrap();
    let alpha = graph_alg::alpha_graph(edgeless, 3).unwrap();
    let alg = make_algebra(&AtomStructure::Ra(alpha)).unwrap();
    let mut checked = 0;
    for colour in 0..3 {
        let class: Vec<usize> = (0..alg.atom_count())
            .filter(|&a| alg.atom_names()[a].ends_with(&format!(":{colour}")))
            .collect();
        for mask in 1u32..1 << class.len() {
            let p = Element::from_bits(
                alg.atom_count(),
                class
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &a)| a),
            );
            let pp = alg.comp_el(&p, &p).meet(&p);
            assert!(pp.is_zero(), "monochromatic law fails on edgeless graph");
            checked += 1;
        }
    }
    // the identity-bounded case genuinely violates the law, which is why it
    // is excluded from the monochromatic sweep
    let id = alg.identity_element().unwrap();
    assert_eq!(alg.comp_el(&id, &id).meet(&id), id);
    // with an edge present a non-zero witness exists
    let edged = graphs5.iter().find(|g| g.edge_count() > 0).unwrap();
    let alpha_e = graph_alg::alpha_graph(edged, 3).unwrap();
    let alg_e = make_algebra(&AtomStructure::Ra(alpha_e)).unwrap();
    let mut witness = false;
    'outer: for colour in 0..3 {
        let class: Vec<usize> = (0..alg_e.atom_count())
            .filter(|&a| alg_e.atom_names()[a].ends_with(&format!(":{colour}")))
            .collect();
        for mask in 1u32..1 << class.len() {
            let p = Element::from_bits(
                alg_e.atom_count(),
                class
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &a)| a),
            );
            if !alg_e.comp_el(&p, &p).meet(&p).is_zero() {
                witness = true;
                break 'outer;
            }
        }
    }
    assert!(witness, "edged graph must yield a non-zero monochromatic product");
    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 300.0, "criterion 4 exceeded 5 minutes: {secs:.1}s");
    println!(
        "criterion 4 (graph constructions): PASS — 34 graphs, {checked} monochromatic elements, {secs:.1}s"
    );
}

fn involutions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(map: &mut Vec<usize>, pos: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if pos == n {
            out.push(map.clone());
            return;
        }
        if map[pos] != usize::MAX {
            rec(map, pos + 1, n, out);
            return;
        }
        map[pos] = pos;
        rec(map, pos + 1, n, out);
        map[pos] = usize::MAX;
        for q in pos + 1..n {
            if map[q] == usize::MAX {
                map[pos] = q;
                map[q] = pos;
                rec(map, pos + 1, n, out);
                map[pos] = usize::MAX;
                map[q] = usize::MAX;
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    rec(&mut map, 0, n, &mut out);
    out
}

/// Exhaustive valid polyadic-equality structures with at most 3 atoms, up to
/// renaming the atoms.
fn pea_corpus() -> Vec<PeaAtomStructure> {
    let mut out: Vec<PeaAtomStructure> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for n in 1..=3usize {
        let parts: Vec<RelBits> = partitions(n).iter().map(|b| rel_of_blocks(b)).collect();
        let subs = subsets(n);
        let invs = involutions(n);
        let node_perms = alc_permutations(n);
        for t0 in &parts {
            for t1 in &parts {
                for t2 in &parts {
                    for e01 in &subs {
                        for e02 in &subs {
                            for e12 in &subs {
                                let ca = ca_candidate(
                                    n,
                                    [t0.clone(), t1.clone(), t2.clone()],
                                    e01.clone(),
                                    e02.clone(),
                                    e12.clone(),
                                );
                                if !validate_ca(&ca).is_valid() {
                                    continue;
                                }
                                for s01 in &invs {
                                    for s02 in &invs {
                                        for s12 in &invs {
                                            let pea = PeaAtomStructure::new(
                                                ca.clone(),
                                                vec![s01.clone(), s02.clone(), s12.clone()],
                                            );
                                            if !validate_pea(&pea).is_valid() {
                                                continue;
                                            }
                                            let key = pea_canon_key(&pea, &node_perms);
                                            if seen.insert(key) {
                                                out.push(pea);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn alc_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

fn pea_canon_key(p: &PeaAtomStructure, perms: &[Vec<usize>]) -> Vec<u8> {
    let n = p.atom_count();
    let d = p.dim();
    let mut best: Option<Vec<u8>> = None;
    for perm in perms {
        let mut key = Vec::new();
        for i in 0..d {
            for a in 0..n {
                for b in 0..n {
                    key.push(u8::from(p.ca.t[i].contains(perm[a], perm[b])));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for a in 0..n {
                    key.push(u8::from(p.ca.e(i, j).contains(perm[a])));
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                for a in 0..n {
                    let mapped = perms
                        .iter()
                        .find(|q| q[..] == perm[..])
                        .map(|_| p.swap(i, j)[perm[a]])
                        .unwrap();
                    // position of mapped under perm inverse
                    let inv = perm.iter().position(|&x| x == mapped).unwrap();
                    key.push(inv as u8);
                }
            }
        }
        if best.as_ref().map_or(true, |b| &key < b) {
            best = Some(key);
        }
    }
    best.unwrap()
}

#[test]
fn criterion_05_psi_game_equivalence() {
    let corpus = pea_corpus();
    assert!(!corpus.is_empty(), "the polyadic corpus must be non-empty");
    let cases: Vec<(usize, usize, usize)> = corpus
        .iter()
        .enumerate()
        .flat_map(|(si, s)| {
            (0..s.atom_count()).flat_map(move |a| (0..=2usize).map(move |n| (si, a, n)))
        })
        .collect();
    let discrepancies: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .flat_map(|(si, s)| {
            let alg = make_algebra(&AtomStructure::Pea(s.clone())).unwrap();
            let jx = synth::j_x(3, "x");
            let mut evaluator = synth::PsiEvaluator::new(&alg);
            let mut bad = Vec::new();
            for a in 0..alg.atom_count() {
                let mut env = BTreeMap::new();
                env.insert("x".to_string(), alg.atom(a));
                for n in 0..=2usize {
                    let by_psi = evaluator.eval(&jx, n, &env).unwrap();
                    let sol = games::solve_element_game(
                        &alg,
                        &alg.atom(a),
                        n,
                        games::ElementGameOptions::default(),
                    )
                    .unwrap();
                    assert!(
                        !sol.verdict.restricted_forall,
                        "corpus algebras must get the exact opponent sweep"
                    );
                    let by_game = sol.verdict.winner == games::Winner::Exists;
                    if by_psi != by_game {
                        bad.push(format!(
                            "structure {si} atom {a} depth {n}: psi {by_psi} game {by_game}"
                        ));
                    }
                }
            }
            bad
        })
        .collect();
    assert!(discrepancies.is_empty(), "{discrepancies:?}");
    println!(
        "criterion 5 (psi/game equivalence): PASS — {} structures, {} cases, zero discrepancies",
        corpus.len(),
        cases.len()
    );
}

/// Exhaustive valid relation structures with at most 3 atoms: all identity
/// subsets, converse involutions fixing identity, and unions of transform
/// orbits as consistency predicates, filtered by the validator.
fn ra_corpus() -> Vec<RaAtomStructure> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        for id_mask in 1u32..1 << n {
            let identity: std::collections::BTreeSet<usize> =
                (0..n).filter(|i| id_mask >> i & 1 == 1).collect();
            for conv in involutions(n) {
                if identity.iter().any(|&e| conv[e] != e) {
                    continue;
                }
                // orbits of all triples under the Peircean transforms
                let mut orbit_of = vec![usize::MAX; n * n * n];
                let mut orbits: Vec<Vec<(usize, usize, usize)>> = Vec::new();
                for b in 0..n {
                    for c in 0..n {
                        for a in 0..n {
                            let idx = (b * n + c) * n + a;
                            if orbit_of[idx] != usize::MAX {
                                continue;
                            }
                            let mut members = vec![(b, c, a)];
                            let mut frontier = vec![(b, c, a)];
                            while let Some(t) = frontier.pop() {
                                for tr in alc::structures::peircean_transforms(&conv, t) {
                                    let i2 = (tr.0 * n + tr.1) * n + tr.2;
                                    if orbit_of[i2] == usize::MAX {
                                        orbit_of[i2] = orbits.len();
                                        members.push(tr);
                                        frontier.push(tr);
                                    }
                                }
                            }
                            members.sort_unstable();
                            members.dedup();
                            orbits.push(members);
                        }
                    }
                }
                let k = orbits.len();
                if k > 14 {
                    continue;
                }
                for mask in 0u32..1 << k {
                    let mut consistent = TripleSet::empty(n);
                    for (oi, members) in orbits.iter().enumerate() {
                        if mask >> oi & 1 == 1 {
                            for &(b, c, a) in members {
                                consistent.insert(b, c, a);
                            }
                        }
                    }
                    let s = RaAtomStructure {
                        atoms: atom_names(n),
                        identity: identity.clone(),
                        converse: conv.clone(),
                        consistent,
                    };
                    if validate_ra(&s).is_valid() {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn criterion_06_oracle_triangle() {
    let corpus = ra_corpus();
    assert!(corpus.len() >= 4, "corpus too small: {}", corpus.len());
    let results: Vec<(usize, RepOutcome, games::Winner, RepOutcome)> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let alg = make_algebra(&AtomStructure::Ra(s.clone())).unwrap();
            let rep = repsearch::find_representation(&alg, 6, RepOptions::default()).unwrap();
            let game = games::atomic_game_on_ra(
                s,
                6,
                games::Rounds::Fixpoint,
                games::AtomicGameOptions {
                    position_budget: 150_000,
                    fresh_nodes_only: false,
                },
            )
            .unwrap();
            let ca = bridge::ca3_from_ra(s).unwrap();
            let ca_alg = make_algebra_unchecked(&AtomStructure::Ca(ca));
            let ca_rep = repsearch::find_representation(
                &ca_alg,
                4,
                RepOptions {
                    step_budget: 20_000_000,
                },
            )
            .unwrap();
            (i, rep, game.verdict.winner, ca_rep)
        })
        .collect();
    let mut found_and_exists = 0;
    let mut forall_and_none = 0;
    let mut transfer_checked = 0;
    let mut unknowns = 0;
    for (i, rep, winner, ca_rep) in &results {
        match (rep, winner) {
            (RepOutcome::Found(_), games::Winner::Exists) => found_and_exists += 1,
            (RepOutcome::Found(r), games::Winner::Forall) => {
                panic!("structure {i}: representation at base {} but opponent wins the atomic game", r.base)
            }
            (RepOutcome::NoneUpTo(_), games::Winner::Forall) => forall_and_none += 1,
            (_, games::Winner::Unknown) => unknowns += 1,
            (RepOutcome::Unknown(_), _) => unknowns += 1,
            (RepOutcome::NoneUpTo(_), games::Winner::Exists) => {
                // consistent: bounded search not finding a representation
                // does not contradict a surviving game
            }
        }
        // transfer: compare bounded verdicts at the same base bound where
        // both decided
        let alg = make_algebra(&AtomStructure::Ra(corpus[*i].clone())).unwrap();
        let ra4 = repsearch::find_representation(&alg, 4, RepOptions::default()).unwrap();
        match (&ra4, ca_rep) {
            (RepOutcome::Found(_), RepOutcome::Found(_)) => transfer_checked += 1,
            (RepOutcome::NoneUpTo(_), RepOutcome::NoneUpTo(_)) => transfer_checked += 1,
            (RepOutcome::Unknown(_), _) | (_, RepOutcome::Unknown(_)) => unknowns += 1,
            (a, b) => panic!(
                "structure {i}: transfer verdicts disagree at base 4: relation {a:?} vs triples {b:?}"
            ),
        }
    }
    assert!(found_and_exists > 0, "need representable corpus members");
    assert!(
        forall_and_none > 0,
        "need a non-representable corpus member with an opponent certificate"
    );
    println!(
        "criterion 6 (oracle triangle): PASS — {} structures, {found_and_exists} found/exists, \
         {forall_and_none} forall/none, {transfer_checked} transfer agreements, {unknowns} budget skips",
        corpus.len()
    );
}

#[test]
fn criterion_07_named_construction_regressions() {
    let lyndon = named::lyndon(4).unwrap();
    assert_eq!(lyndon.atoms.len(), 5);
    let lyndon_alg = make_algebra(&AtomStructure::Ra(lyndon)).unwrap();
    let ra_report =
        suites::axiom_suite(&lyndon_alg, suites::SuiteKind::Ra, CheckOptions::default()).unwrap();
    assert!(ra_report.pass());

    let monk3 = named::monk_ek(3).unwrap();
    let (a0, a1, a2) = (
        monk3.atoms.iter().position(|a| a == "a0").unwrap(),
        monk3.atoms.iter().position(|a| a == "a1").unwrap(),
        monk3.atoms.iter().position(|a| a == "a2").unwrap(),
    );
    assert!(monk3.consistent.contains(a0, a1, a2));

    assert_eq!(named::a_n_r(3, 1, 3).unwrap().atoms.len(), 7);

    let e1 = make_algebra(&AtomStructure::Ra(named::monk_ek(1).unwrap())).unwrap();
    match repsearch::find_representation(&e1, 2, RepOptions::default()).unwrap() {
        RepOutcome::Found(rep) => {
            assert_eq!(rep.base, 2);
            let mut pairs = rep.interp["a0"].clone();
            pairs.sort();
            assert_eq!(pairs, vec![vec![0, 1], vec![1, 0]]);
        }
        other => panic!("expected a base-2 representation, got {other:?}"),
    }

    match repsearch::find_representation(&lyndon_alg, 4, RepOptions::default()).unwrap() {
        RepOutcome::NoneUpTo(4) => {}
        other => panic!("expected none up to 4, got {other:?}"),
    }
    println!("criterion 7 (named constructions): PASS — all exact values match");
}

#[test]
fn criterion_08_erdos_desk_witness() {
    match graphs::erdos_search(4, 4, 2000, 0) {
        graphs::ErdosOutcome::Found(g) => {
            assert_eq!(g.vertex_count(), 11);
            assert_eq!(graphs::chromatic_number(&g).unwrap(), 4);
            let girth = graphs::girth(&g).expect("the witness has cycles");
            assert!(girth >= 4, "triangle-free needed, girth {girth}");
            println!(
                "criterion 8 (desk-scale graph witness): PASS — 11 vertices, chromatic 4, girth {girth}"
            );
        }
        other => panic!("expected the 11-vertex witness, got {other:?}"),
    }
}

fn random_term(rng: &mut ChaCha8Rng, depth: usize) -> TermAst {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..6) {
        0 => TermAst::Zero,
        1 => TermAst::One,
        2 => TermAst::Ident,
        3 => TermAst::Diag(rng.gen_range(0..4), rng.gen_range(0..4)),
        4 => TermAst::var(["x", "y", "z"][rng.gen_range(0..3)]),
        _ => TermAst::var(["foo", "bar_1", "w0w"][rng.gen_range(0..3)]),
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..9) {
        0 => TermAst::join(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        1 => TermAst::meet(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        2 => TermAst::comp(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        3 => TermAst::compl(random_term(rng, depth - 1)),
        4 => TermAst::conv(random_term(rng, depth - 1)),
        5 => TermAst::cyl(rng.gen_range(0..12), random_term(rng, depth - 1)),
        6 => TermAst::sub(
            rng.gen_range(0..4),
            rng.gen_range(0..4),
            random_term(rng, depth - 1),
        ),
        7 => TermAst::transp(
            rng.gen_range(0..4),
            rng.gen_range(0..4),
            random_term(rng, depth - 1),
        ),
        _ => leaf(rng),
    }
}

#[test]
fn criterion_09_roundtrips() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..1000 {
        let t = random_term(&mut rng, 1 + i % 5);
        let printed = print_term(&t);
        let back = parse_term(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(t, back, "parse(print) must reproduce the tree: {printed}");
        assert_eq!(print_term(&back), printed, "printing must be stable");
    }
    // every emitted JSON document round-trips byte-exactly
    let g = graphs::grotzsch();
    let mut structures: Vec<AtomStructure> = vec![
        AtomStructure::Ra(named::lyndon(4).unwrap()),
        AtomStructure::Ra(named::monk_ek(2).unwrap()),
        AtomStructure::Ra(named::a_n_r(3, 1, 3).unwrap()),
        AtomStructure::Ca(named::full_ca_set_structure(2, 3)),
        AtomStructure::Pea(named::full_pea_set_structure(2, 3)),
        AtomStructure::Ra(graph_alg::alpha_graph(&g, 3).unwrap()),
        AtomStructure::Ca(bridge::ca3_from_ra(&named::monk_ek(1).unwrap()).unwrap()),
    ];
    let small = graphs::generate(graphs::GraphKind::Cycle(4));
    structures.push(AtomStructure::Pea(graph_alg::eta_graph(&small, 3).unwrap()));
    for s in &structures {
        let text = alc::structures::jsonio::to_json(s);
        let back = alc::structures::jsonio::from_json(&text).unwrap();
        assert_eq!(alc::structures::jsonio::to_json(&back), text);
    }
    let gtext = graphs::graph_to_json(&g);
    assert_eq!(
        graphs::graph_to_json(&graphs::graph_from_json(&gtext).unwrap()),
        gtext
    );
    let e1 = make_algebra(&AtomStructure::Ra(named::monk_ek(1).unwrap())).unwrap();
    let RepOutcome::Found(rep) = repsearch::find_representation(&e1, 2, RepOptions::default()).unwrap()
    else {
        panic!()
    };
    let rtext = repsearch::representation_to_json(&rep);
    assert_eq!(
        repsearch::representation_to_json(&repsearch::representation_from_json(&rtext).unwrap()),
        rtext
    );
    println!(
        "criterion 9 (round-trips): PASS — 1000 terms and {} JSON documents byte-exact",
        structures.len() + 2
    );
}

#[test]
fn criterion_10_reduct_coherence() {
    let cube = make_algebra(&AtomStructure::Ca(named::full_ca_set_structure(2, 3))).unwrap();
    let ra = ra_reduct(&cube).unwrap();
    assert_eq!(ra.atom_count(), 4);
    // atoms of the reduct are cylinders over pairs; recover the pair from
    // the first point name
    let pair_of = |alg: &FiniteAlgebra, atom: usize| -> (usize, usize) {
        let name = &alg.atom_names()[atom];
        let first = name.split('|').next().unwrap();
        let digits: Vec<usize> = first
            .chars()
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect();
        (digits[0], digits[1])
    };
    let rel_of = |alg: &FiniteAlgebra, e: &Element| -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = e.iter().map(|a| pair_of(alg, a)).collect();
        out.sort_unstable();
        out
    };
    let compose = |r: &[(usize, usize)], s: &[(usize, usize)]| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &(x, y) in r {
            for &(y2, z) in s {
                if y == y2 && !out.contains(&(x, z)) {
                    out.push((x, z));
                }
            }
        }
        out.sort_unstable();
        out
    };
    let mut checked = 0;
    for x in ra.elements() {
        for y in ra.elements() {
            let lhs = rel_of(&ra, &ra.comp_el(&x, &y));
            let rhs = compose(&rel_of(&ra, &x), &rel_of(&ra, &y));
            assert_eq!(lhs, rhs, "composition must be relational composition");
            checked += 1;
        }
    }
    // converse and identity
    let id = ra.identity_element().unwrap();
    assert_eq!(rel_of(&ra, &id), vec![(0, 0), (1, 1)]);
    for x in ra.elements() {
        let conv: Vec<(usize, usize)> = {
            let mut v: Vec<(usize, usize)> =
                rel_of(&ra, &x).into_iter().map(|(a, b)| (b, a)).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(rel_of(&ra, &ra.conv_el(&x)), conv);
    }
    // neat reduct tower law on the 3- and 4-dimensional cubes
    for (base, dim) in [(2usize, 3usize), (2, 4)] {
        let alg = make_algebra(&AtomStructure::Ca(named::full_ca_set_structure(base, dim))).unwrap();
        for k in 1..dim {
            for j in 1..=k {
                let nested = neat_reduct(&neat_reduct(&alg, k).unwrap(), j).unwrap();
                let direct = neat_reduct(&alg, j).unwrap();
                assert_eq!(nested.atom_count(), direct.atom_count());
                for a in 0..nested.atom_count() {
                    for i in 0..j {
                        assert_eq!(
                            nested.cyl(i, &nested.atom(a)),
                            direct.cyl(i, &direct.atom(a)),
                            "tower law must hold tablewise"
                        );
                    }
                }
            }
        }
    }
    println!(
        "criterion 10 (reduct coherence): PASS — {checked} composition pairs relational, tower law holds"
    );
}
