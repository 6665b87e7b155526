//! Bounded-base brute-force representation search and verification — the
//! independent oracle for representability claims at desk scale.
//!
//! The verdict vocabulary is three-valued: found, none up to the bound, or
//! unknown when the step budget runs out. "None up to N" is never a
//! non-representability proof.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, Signature};
use crate::element::Element;
use crate::error::{AlcError, Result};
use crate::games::{rank, unrank};

/// A square representation: atoms interpreted as sets of base tuples that
/// partition the unit and compute the operations set-theoretically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub base: usize,
    pub arity: usize,
    pub interp: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
pub enum RepOutcome {
    Found(Representation),
    NoneUpTo(usize),
    Unknown(String),
}

impl RepOutcome {
    pub fn found(&self) -> bool {
        matches!(self, RepOutcome::Found(_))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RepOptions {
    /// backtracking node budget per call
    pub step_budget: u64,
}

impl Default for RepOptions {
    fn default() -> Self {
        RepOptions {
            step_budget: 40_000_000,
        }
    }
}

/// Search base sizes `1..=max_base` in order and return the first
/// representation in canonical search order.
pub fn find_representation(
    alg: &FiniteAlgebra,
    max_base: usize,
    opts: RepOptions,
) -> Result<RepOutcome> {
    match alg.signature() {
        Signature::Ra => find_ra(alg, max_base, opts),
        Signature::Ca(_) | Signature::Qpea(_) => find_ca(alg, max_base, opts),
        other => Err(AlcError::SignatureMismatch {
            op: "representation search".into(),
            sig: other.name(),
        }),
    }
}

fn atom_sets(alg: &FiniteAlgebra) -> (Vec<usize>, Vec<usize>) {
    let id = alg.identity_element().unwrap_or_else(|| alg.zero());
    let identity: Vec<usize> = id.iter().collect();
    let diversity: Vec<usize> = (0..alg.atom_count()).filter(|a| !id.contains(*a)).collect();
    (identity, diversity)
}

fn find_ra(alg: &FiniteAlgebra, max_base: usize, opts: RepOptions) -> Result<RepOutcome> {
    let (identity, diversity) = atom_sets(alg);
    if identity.is_empty() {
        return Err(AlcError::InvalidStructure("no identity atoms".into()));
    }
    let mut budget = opts.step_budget;
    for base in 1..=max_base {
        match search_ra_base(alg, base, &identity, &diversity, &mut budget) {
            SearchResult::Found(rep) => return Ok(RepOutcome::Found(rep)),
            SearchResult::Exhausted => {}
            SearchResult::Budget => {
                return Ok(RepOutcome::Unknown(format!(
                    "step budget exhausted at base {base}"
                )))
            }
        }
    }
    Ok(RepOutcome::NoneUpTo(max_base))
}

enum SearchResult {
    Found(Representation),
    Exhausted,
    Budget,
}

/// Labels of ordered pairs over a square base: the diagonal carries identity
/// atoms, off-diagonal cells diversity atoms with converse symmetry.
/// Triangles are checked during assignment, composition saturation at the
/// end.
fn search_ra_base(
    alg: &FiniteAlgebra,
    base: usize,
    identity: &[usize],
    diversity: &[usize],
    budget: &mut u64,
) -> SearchResult {
    let cells: Vec<(usize, usize)> = (0..base)
        .flat_map(|x| (x + 1..base).map(move |y| (x, y)))
        .collect();
    let n = alg.atom_count();
    // one identity atom forces the diagonal, and renaming points 1..base-1
    // sorts the first row: a sound symmetry cut
    let sorted_cut = identity.len() == 1;
    // triangles through the cell assigned last
    let triangles_ok = |label: &[Vec<usize>], x: usize, y: usize| -> bool {
        for z in 0..base {
            let tri = [
                (label[x][y], label[y][z], label[x][z]),
                (label[x][z], label[z][y], label[x][y]),
                (label[z][x], label[x][y], label[z][y]),
            ];
            for (a, b, c) in tri {
                if a == usize::MAX || b == usize::MAX || c == usize::MAX {
                    continue;
                }
                if !alg
                    .comp_el(&Element::atom(n, a), &Element::atom(n, b))
                    .contains(c)
                {
                    return false;
                }
            }
        }
        true
    };
    fn fill(
        alg: &FiniteAlgebra,
        base: usize,
        cells: &[(usize, usize)],
        diversity: &[usize],
        sorted_cut: bool,
        triangles_ok: &dyn Fn(&[Vec<usize>], usize, usize) -> bool,
        label: &mut Vec<Vec<usize>>,
        pos: usize,
        budget: &mut u64,
    ) -> Option<SearchResult> {
        if *budget == 0 {
            return Some(SearchResult::Budget);
        }
        *budget -= 1;
        if pos == cells.len() {
            if saturated_ra(alg, label, base) {
                return Some(SearchResult::Found(extract_ra(alg, label, base)));
            }
            return None;
        }
        let (x, y) = cells[pos];
        let n = alg.atom_count();
        for &a in diversity {
            if sorted_cut && x == 0 && y > 1 && label[0][y - 1] > a {
                continue;
            }
            label[x][y] = a;
            label[y][x] = alg
                .conv_el(&Element::atom(n, a))
                .sole_atom()
                .expect("converse of an atom is an atom");
            if triangles_ok(label, x, y) {
                if let Some(res) = fill(
                    alg,
                    base,
                    cells,
                    diversity,
                    sorted_cut,
                    triangles_ok,
                    label,
                    pos + 1,
                    budget,
                ) {
                    return Some(res);
                }
            }
            label[x][y] = usize::MAX;
            label[y][x] = usize::MAX;
        }
        None
    }
    let id_choices: Vec<Vec<usize>> = if identity.len() == 1 {
        vec![vec![identity[0]; base]]
    } else {
        let mut acc = vec![Vec::new()];
        for _ in 0..base {
            let mut next = Vec::new();
            for prefix in &acc {
                for &e in identity {
                    let mut p = prefix.clone();
                    p.push(e);
                    next.push(p);
                }
            }
            acc = next;
        }
        acc
    };
    for choice in id_choices {
        let mut label = vec![vec![usize::MAX; base]; base];
        for x in 0..base {
            label[x][x] = choice[x];
        }
        if !(0..base).all(|x| triangles_ok(&label, x, x)) {
            continue;
        }
        match fill(
            alg,
            base,
            &cells,
            diversity,
            sorted_cut,
            &triangles_ok,
            &mut label,
            0,
            budget,
        ) {
            Some(SearchResult::Found(rep)) => return SearchResult::Found(rep),
            Some(SearchResult::Budget) => return SearchResult::Budget,
            _ => {}
        }
    }
    SearchResult::Exhausted
}

/// Composition saturation plus atom surjectivity for a complete square
/// labelling.
fn saturated_ra(alg: &FiniteAlgebra, label: &[Vec<usize>], base: usize) -> bool {
    let n = alg.atom_count();
    for a in 0..n {
        let appears = (0..base).any(|x| (0..base).any(|y| label[x][y] == a));
        if !appears {
            return false;
        }
    }
    for x in 0..base {
        for z in 0..base {
            let c = label[x][z];
            for a in 0..n {
                for b in 0..n {
                    if alg
                        .comp_el(&Element::atom(n, a), &Element::atom(n, b))
                        .contains(c)
                    {
                        let witness = (0..base).any(|y| label[x][y] == a && label[y][z] == b);
                        if !witness {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

fn extract_ra(alg: &FiniteAlgebra, label: &[Vec<usize>], base: usize) -> Representation {
    let mut interp: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
    for name in alg.atom_names() {
        interp.insert(name.clone(), Vec::new());
    }
    for x in 0..base {
        for y in 0..base {
            interp
                .get_mut(&alg.atom_names()[label[x][y]])
                .expect("atom name")
                .push(vec![x, y]);
        }
    }
    Representation {
        base,
        arity: 2,
        interp,
    }
}

fn find_ca(alg: &FiniteAlgebra, max_base: usize, opts: RepOptions) -> Result<RepOutcome> {
    let mut budget = opts.step_budget;
    for base in 1..=max_base {
        match search_ca_base(alg, base, &mut budget) {
            SearchResult::Found(rep) => return Ok(RepOutcome::Found(rep)),
            SearchResult::Exhausted => {}
            SearchResult::Budget => {
                return Ok(RepOutcome::Unknown(format!(
                    "step budget exhausted at base {base}"
                )))
            }
        }
    }
    Ok(RepOutcome::NoneUpTo(max_base))
}

fn search_ca_base(alg: &FiniteAlgebra, base: usize, budget: &mut u64) -> SearchResult {
    let d = alg.dim();
    let cell_count = base.pow(d as u32);
    // admissible atoms per cell: the exact diagonal profile of the tuple
    let mut profile: Vec<Element> = Vec::with_capacity(cell_count);
    for r in 0..cell_count {
        let s = unrank(r, base, d);
        let mut ok = alg.one();
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let dij = match alg.diagonal(i, j) {
                    Ok(e) => e,
                    Err(_) => return SearchResult::Exhausted,
                };
                if s[i] == s[j] {
                    ok = ok.meet(&dij);
                } else {
                    ok = ok.meet(&dij.complement());
                }
            }
        }
        profile.push(ok);
    }
    let has_p = alg.signature().has_transpositions();
    let candidates = |labels: &[usize], r: usize| -> Element {
        let s = unrank(r, base, d);
        let mut out = profile[r].clone();
        for i in 0..d {
            let mut t = s.clone();
            for x in 0..base {
                t[i] = x;
                let tr = rank(&t, base);
                if labels[tr] != usize::MAX && tr != r {
                    out = out.meet(&alg.cyl(i, &alg.atom(labels[tr])));
                }
            }
        }
        if has_p {
            for i in 0..d {
                for j in i + 1..d {
                    let mut t = s.clone();
                    t.swap(i, j);
                    let tr = rank(&t, base);
                    if labels[tr] != usize::MAX && tr != r {
                        if let Ok(img) = alg.transp_el(i, j, &alg.atom(labels[tr])) {
                            out = out.meet(&img);
                        }
                    }
                }
            }
        }
        out
    };
    let mut labels = vec![usize::MAX; cell_count];
    fn fill(
        labels: &mut Vec<usize>,
        r: usize,
        alg: &FiniteAlgebra,
        base: usize,
        candidates: &dyn Fn(&[usize], usize) -> Element,
        budget: &mut u64,
    ) -> Option<SearchResult> {
        if *budget == 0 {
            return Some(SearchResult::Budget);
        }
        *budget -= 1;
        if r == labels.len() {
            if saturated_ca(alg, labels, base) {
                return Some(SearchResult::Found(extract_ca(alg, labels, base)));
            }
            return None;
        }
        let cands = candidates(labels, r);
        for a in cands.iter() {
            labels[r] = a;
            if let Some(res) = fill(labels, r + 1, alg, base, candidates, budget) {
                return Some(res);
            }
            labels[r] = usize::MAX;
        }
        None
    }
    match fill(&mut labels, 0, alg, base, &candidates, budget) {
        Some(r) => r,
        None => SearchResult::Exhausted,
    }
}

/// Cylindrification saturation, atom surjectivity (transposition
/// faithfulness holds by construction) for a complete cell labelling.
fn saturated_ca(alg: &FiniteAlgebra, labels: &[usize], base: usize) -> bool {
    let d = alg.dim();
    let n = alg.atom_count();
    for a in 0..n {
        if !labels.contains(&a) {
            return false;
        }
    }
    for (r, &row_label) in labels.iter().enumerate() {
        let s = unrank(r, base, d);
        for i in 0..d {
            let reach = alg.cyl(i, &alg.atom(row_label));
            for b in reach.iter() {
                let mut t = s.clone();
                let witness = (0..base).any(|x| {
                    t[i] = x;
                    labels[rank(&t, base)] == b
                });
                if !witness {
                    return false;
                }
            }
        }
    }
    true
}

fn extract_ca(alg: &FiniteAlgebra, labels: &[usize], base: usize) -> Representation {
    let d = alg.dim();
    let mut interp: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
    for name in alg.atom_names() {
        interp.insert(name.clone(), Vec::new());
    }
    for (r, &a) in labels.iter().enumerate() {
        interp
            .get_mut(&alg.atom_names()[a])
            .expect("atom name")
            .push(unrank(r, base, d));
    }
    Representation {
        base,
        arity: d,
        interp,
    }
}

/// Exhaustive faithfulness check of a representation against an algebra:
/// partition of the unit, non-empty atom images, and set-theoretic agreement
/// of every operation on atoms.
pub fn verify_representation(alg: &FiniteAlgebra, rep: &Representation) -> Result<Vec<String>> {
    let mut violations = Vec::new();
    let n = alg.atom_count();
    let arity = rep.arity;
    let cell_count = rep.base.pow(arity as u32);
    let mut labels = vec![usize::MAX; cell_count];
    for (name, tuples) in &rep.interp {
        let Some(a) = alg.atom_index(name) else {
            violations.push(format!("unknown atom {name}"));
            continue;
        };
        if tuples.is_empty() {
            violations.push(format!("atom {name} has empty image"));
        }
        for t in tuples {
            if t.len() != arity || t.iter().any(|&x| x >= rep.base) {
                violations.push(format!("malformed tuple for {name}"));
                continue;
            }
            let r = rank(t, rep.base);
            if labels[r] != usize::MAX {
                violations.push(format!("tuple {t:?} labelled twice"));
            }
            labels[r] = a;
        }
    }
    if labels.contains(&usize::MAX) {
        violations.push("atom images do not cover the unit".into());
    }
    if !violations.is_empty() {
        return Ok(violations);
    }
    let rep_of = |e: &Element| -> Vec<bool> {
        let mut out = vec![false; cell_count];
        for (r, &a) in labels.iter().enumerate() {
            if e.contains(a) {
                out[r] = true;
            }
        }
        out
    };
    match alg.signature() {
        Signature::Ra => {
            for a in 0..n {
                let ra = rep_of(&alg.atom(a));
                let conv_alg = rep_of(&alg.conv_el(&alg.atom(a)));
                for r in 0..cell_count {
                    let t = unrank(r, rep.base, 2);
                    let swapped = rank(&[t[1], t[0]], rep.base);
                    if ra[r] != conv_alg[swapped] {
                        violations.push(format!("converse mismatch at atom {a}"));
                        break;
                    }
                }
                for b in 0..n {
                    let rb = rep_of(&alg.atom(b));
                    let rab = rep_of(&alg.comp_el(&alg.atom(a), &alg.atom(b)));
                    'cells: for x in 0..rep.base {
                        for z in 0..rep.base {
                            let set_comp = (0..rep.base).any(|y| {
                                ra[rank(&[x, y], rep.base)] && rb[rank(&[y, z], rep.base)]
                            });
                            if set_comp != rab[rank(&[x, z], rep.base)] {
                                violations.push(format!(
                                    "composition mismatch at atoms {a},{b} cell ({x},{z})"
                                ));
                                break 'cells;
                            }
                        }
                    }
                }
            }
            if let Some(id) = alg.identity_element() {
                let rid = rep_of(&id);
                for r in 0..cell_count {
                    let t = unrank(r, rep.base, 2);
                    if rid[r] != (t[0] == t[1]) {
                        violations.push("identity is not the diagonal".into());
                        break;
                    }
                }
            }
        }
        Signature::Ca(d) | Signature::Qpea(d) => {
            for i in 0..d {
                for j in 0..d {
                    let dij = rep_of(&alg.diagonal(i, j)?);
                    for r in 0..cell_count {
                        let t = unrank(r, rep.base, d);
                        if dij[r] != (t[i] == t[j]) {
                            violations.push(format!("diagonal {i},{j} mismatch"));
                            break;
                        }
                    }
                }
            }
            for a in 0..n {
                let ra = rep_of(&alg.atom(a));
                for i in 0..d {
                    let ca = rep_of(&alg.cyl(i, &alg.atom(a)));
                    for r in 0..cell_count {
                        let t = unrank(r, rep.base, d);
                        let mut u = t.clone();
                        let set_cyl = (0..rep.base).any(|x| {
                            u[i] = x;
                            ra[rank(&u, rep.base)]
                        });
                        if set_cyl != ca[r] {
                            violations.push(format!("cylindrification {i} mismatch at atom {a}"));
                            break;
                        }
                    }
                }
                if alg.signature().has_transpositions() {
                    for i in 0..d {
                        for j in i + 1..d {
                            let pa = rep_of(&alg.transp_el(i, j, &alg.atom(a))?);
                            for r in 0..cell_count {
                                let t = unrank(r, rep.base, d);
                                let mut u = t.clone();
                                u.swap(i, j);
                                if pa[r] != ra[rank(&u, rep.base)] {
                                    violations
                                        .push(format!("transposition {i}{j} mismatch at atom {a}"));
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        }
        _ => {
            violations.push("unsupported signature".into());
        }
    }
    Ok(violations)
}

/// JSON document for representations, schema `alc-representation-v1`.
#[derive(Serialize, Deserialize)]
struct RepDto {
    schema: String,
    base: usize,
    arity: usize,
    interp: BTreeMap<String, Vec<Vec<usize>>>,
}

pub fn representation_to_json(rep: &Representation) -> String {
    let mut interp = rep.interp.clone();
    for tuples in interp.values_mut() {
        tuples.sort();
    }
    let dto = RepDto {
        schema: "alc-representation-v1".into(),
        base: rep.base,
        arity: rep.arity,
        interp,
    };
    serde_json::to_string_pretty(&dto).expect("representation serializes")
}

pub fn representation_from_json(text: &str) -> Result<Representation> {
    let dto: RepDto = serde_json::from_str(text)?;
    if dto.schema != "alc-representation-v1" {
        return Err(AlcError::Malformed(format!(
            "expected schema alc-representation-v1, got {}",
            dto.schema
        )));
    }
    Ok(Representation {
        base: dto.base,
        arity: dto.arity,
        interp: dto.interp,
    })
}
