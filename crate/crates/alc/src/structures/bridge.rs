//! Bridges between relation-algebra and cylindric atom structures: the
//! consistent-triple structure `Ca_3` and the basic-matrix structure `M_d`.

use crate::element::Element;
use crate::error::{AlcError, Result};
use crate::structures::{
    validate_ca, validate_ra, BasicMatrix, CaAtomStructure, RaAtomStructure, RelBits,
};

/// Dimension-3 cylindric atom structure on the consistent triples of a
/// relation atom structure. A triple `t` is taken to label a triangle with
/// `t_k` on the edge avoiding vertex `k`, so `t` is an atom exactly when
/// `t_1` lies below `t_2;t_0`. `T_i` relates triples with equal `i`-th
/// coordinate, and the diagonal `E_ij` (for distinct `i`, `j`) collects the
/// triples whose remaining coordinate is an identity atom.
pub fn ca3_from_ra(s: &RaAtomStructure) -> Result<CaAtomStructure> {
    let report = validate_ra(s);
    if !report.is_valid() {
        return Err(AlcError::InvalidStructure(report.summary()));
    }
    let n = s.atoms.len();
    let mut triples = Vec::new();
    for t0 in 0..n {
        for t1 in 0..n {
            for t2 in 0..n {
                if s.consistent.contains(t2, t0, t1) {
                    triples.push([t0, t1, t2]);
                }
            }
        }
    }
    let count = triples.len();
    let atoms: Vec<String> = triples
        .iter()
        .map(|t| {
            format!(
                "{}|{}|{}",
                s.atoms[t[0]], s.atoms[t[1]], s.atoms[t[2]]
            )
        })
        .collect();
    let mut t_rels = Vec::with_capacity(3);
    for i in 0..3 {
        let mut rel = RelBits::empty(count);
        for (a, ta) in triples.iter().enumerate() {
            for (b, tb) in triples.iter().enumerate() {
                if ta[i] == tb[i] {
                    rel.insert(a, b);
                }
            }
        }
        t_rels.push(rel);
    }
    let mut e = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let mut set = Element::zero(count);
            if i == j {
                set = Element::one(count);
            } else {
                let k = 3 - i - j;
                for (a, t) in triples.iter().enumerate() {
                    if s.identity.contains(&t[k]) {
                        set.insert(a);
                    }
                }
            }
            e.push(set);
        }
    }
    Ok(CaAtomStructure::new(3, atoms, t_rels, e))
}

/// Outcome of the cylindric-basis test on a matrix set.
#[derive(Clone, Debug)]
pub struct BasisReport {
    pub matrix_count: usize,
    pub induced_valid: bool,
    /// atom with no matrix carrying it at entry (0,1), if any
    pub missing_atom: Option<String>,
    /// first failing cylindrifier-extension instance, if any
    pub missing_extension: Option<String>,
}

impl BasisReport {
    pub fn is_basis(&self) -> bool {
        self.induced_valid && self.missing_atom.is_none() && self.missing_extension.is_none()
    }
}

/// All `d x d` basic matrices of an atom structure, the induced cylindric
/// atom structure (T_i: agree off row and column `i`; E_ij: identity at
/// `(i,j)`), and a report on whether the set forms a `d`-dimensional
/// cylindric basis.
pub fn basic_matrices(
    s: &RaAtomStructure,
    d: usize,
) -> Result<(Vec<BasicMatrix>, CaAtomStructure, BasisReport)> {
    if !(3..=5).contains(&d) {
        return Err(AlcError::InvalidParameter(
            "matrix dimension must be between 3 and 5".into(),
        ));
    }
    let report = validate_ra(s);
    if !report.is_valid() {
        return Err(AlcError::InvalidStructure(report.summary()));
    }
    let n = s.atoms.len();
    let cells: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    let identity_atoms: Vec<usize> = s.identity.iter().copied().collect();
    let mut matrices: Vec<BasicMatrix> = Vec::new();
    // choose the diagonal entries, then the upper triangle, pruning on
    // triangle consistency as soon as all three edges of a triangle exist
    let mut diag_choice = vec![0usize; d];
    fn fill_diag(
        pos: usize,
        d: usize,
        identity_atoms: &[usize],
        diag_choice: &mut Vec<usize>,
        s: &RaAtomStructure,
        cells: &[(usize, usize)],
        n: usize,
        matrices: &mut Vec<BasicMatrix>,
    ) {
        if pos == d {
            let mut entries = vec![usize::MAX; d * d];
            for i in 0..d {
                entries[i * d + i] = diag_choice[i];
            }
            fill_cells(0, d, s, cells, n, &mut entries, matrices);
            return;
        }
        for &e in identity_atoms {
            diag_choice[pos] = e;
            fill_diag(pos + 1, d, identity_atoms, diag_choice, s, cells, n, matrices);
        }
    }
    fn triangle_ok(s: &RaAtomStructure, entries: &[usize], d: usize) -> bool {
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    let (fij, fjl, fil) = (entries[i * d + j], entries[j * d + l], entries[i * d + l]);
                    if fij == usize::MAX || fjl == usize::MAX || fil == usize::MAX {
                        continue;
                    }
                    if !s.consistent.contains(fij, fjl, fil) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn fill_cells(
        pos: usize,
        d: usize,
        s: &RaAtomStructure,
        cells: &[(usize, usize)],
        n: usize,
        entries: &mut Vec<usize>,
        matrices: &mut Vec<BasicMatrix>,
    ) {
        if pos == cells.len() {
            matrices.push(BasicMatrix {
                dim: d,
                entries: entries.clone(),
            });
            return;
        }
        let (i, j) = cells[pos];
        for a in 0..n {
            entries[i * d + j] = a;
            entries[j * d + i] = s.converse[a];
            if triangle_ok(s, entries, d) {
                fill_cells(pos + 1, d, s, cells, n, entries, matrices);
            }
        }
        entries[i * d + j] = usize::MAX;
        entries[j * d + i] = usize::MAX;
    }
    fill_diag(0, d, &identity_atoms, &mut diag_choice, s, &cells, n, &mut matrices);
    matrices.sort();
    matrices.dedup();

    let count = matrices.len();
    let atom_names: Vec<String> = matrices
        .iter()
        .map(|m| {
            let cells: Vec<&str> = m.entries.iter().map(|&a| s.atoms[a].as_str()).collect();
            format!("[{}]", cells.join("|"))
        })
        .collect();
    let mut t_rels = Vec::with_capacity(d);
    for i in 0..d {
        let mut rel = RelBits::empty(count);
        for (a, ma) in matrices.iter().enumerate() {
            'next: for (b, mb) in matrices.iter().enumerate() {
                for p in 0..d {
                    for q in 0..d {
                        if p != i && q != i && ma.get(p, q) != mb.get(p, q) {
                            continue 'next;
                        }
                    }
                }
                rel.insert(a, b);
            }
        }
        t_rels.push(rel);
    }
    let mut e = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut set = Element::zero(count);
            for (a, m) in matrices.iter().enumerate() {
                if i == j || s.identity.contains(&m.get(i, j)) {
                    set.insert(a);
                }
            }
            e.push(set);
        }
    }
    let induced = CaAtomStructure::new(d, atom_names, t_rels, e);
    let induced_valid = validate_ca(&induced).is_valid();

    let missing_atom = (0..n)
        .find(|&a| !matrices.iter().any(|m| m.get(0, 1) == a))
        .map(|a| s.atoms[a].clone());
    // group matrices by their restriction away from each index so the
    // extension lookups stay linear in the group size
    let restrict = |m: &BasicMatrix, k: usize| -> Vec<usize> {
        let mut key = m.entries.clone();
        for p in 0..d {
            key[p * d + k] = usize::MAX;
            key[k * d + p] = usize::MAX;
        }
        key
    };
    let mut groups: Vec<std::collections::HashMap<Vec<usize>, Vec<usize>>> =
        vec![std::collections::HashMap::new(); d];
    for (idx, m) in matrices.iter().enumerate() {
        for (k, group) in groups.iter_mut().enumerate() {
            group.entry(restrict(m, k)).or_default().push(idx);
        }
    }
    let mut missing_extension = None;
    'ext: for (mi, m) in matrices.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                for k in 0..d {
                    if k == i || k == j {
                        continue;
                    }
                    let candidates = &groups[k][&restrict(m, k)];
                    for a in 0..n {
                        for b in 0..n {
                            if !s.consistent.contains(a, b, m.get(i, j)) {
                                continue;
                            }
                            let witness = candidates.iter().any(|&gi| {
                                let g = &matrices[gi];
                                g.get(i, k) == a && g.get(k, j) == b
                            });
                            if !witness {
                                missing_extension = Some(format!(
                                    "matrix {mi} has no ({},{},{k}) extension for {};{}",
                                    i, j, s.atoms[a], s.atoms[b]
                                ));
                                break 'ext;
                            }
                        }
                    }
                }
            }
        }
    }
    let report = BasisReport {
        matrix_count: count,
        induced_valid,
        missing_atom,
        missing_extension,
    };
    Ok((matrices, induced, report))
}
