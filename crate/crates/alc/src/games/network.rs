//! Element-labelled prenetworks and the four network clauses.

use crate::algebra::FiniteAlgebra;
use crate::element::Element;
use crate::error::{AlcError, Result};
use crate::games::{rank, unrank};

/// A complete labelling of the `dim`-tuples over nodes `0..nodes` by
/// algebra elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreNetwork {
    pub dim: usize,
    pub nodes: usize,
    labels: Vec<Element>,
}

impl PreNetwork {
    pub fn constant(alg: &FiniteAlgebra, dim: usize, nodes: usize, value: Element) -> PreNetwork {
        let _ = alg;
        PreNetwork {
            dim,
            nodes,
            labels: vec![value; nodes.pow(dim as u32)],
        }
    }

    pub fn label(&self, tuple: &[usize]) -> &Element {
        &self.labels[rank(tuple, self.nodes)]
    }

    pub fn set_label(&mut self, tuple: &[usize], value: Element) {
        let r = rank(tuple, self.nodes);
        self.labels[r] = value;
    }

    pub fn label_by_rank(&self, r: usize) -> &Element {
        &self.labels[r]
    }

    pub fn tuple_count(&self) -> usize {
        self.labels.len()
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.labels.len()).map(|r| unrank(r, self.nodes, self.dim))
    }

    /// Extend with one fresh node; labels of new tuples are the diagonal
    /// products of their repeated coordinates.
    pub fn with_fresh_node(&self, alg: &FiniteAlgebra) -> PreNetwork {
        let nodes = self.nodes + 1;
        let mut labels = Vec::with_capacity(nodes.pow(self.dim as u32));
        for r in 0..nodes.pow(self.dim as u32) {
            let tuple = unrank(r, nodes, self.dim);
            if tuple.iter().all(|&x| x < self.nodes) {
                labels.push(self.label(&tuple).clone());
            } else {
                labels.push(diagonal_product(alg, &tuple));
            }
        }
        PreNetwork {
            dim: self.dim,
            nodes,
            labels,
        }
    }

    /// Canonical key under node renaming: the least label matrix over all
    /// permutations of the nodes.
    pub fn canonical_key(&self) -> Vec<u64> {
        let perms = crate::graphs::permutations(self.nodes);
        let mut best: Option<Vec<u64>> = None;
        for perm in &perms {
            let mut key: Vec<u64> = vec![self.nodes as u64, self.dim as u64];
            for r in 0..self.labels.len() {
                let tuple = unrank(r, self.nodes, self.dim);
                let image: Vec<usize> = tuple.iter().map(|&x| perm[x]).collect();
                let e = self.label(&image);
                key.extend(element_words(e));
            }
            if best.as_ref().map_or(true, |b| &key < b) {
                best = Some(key);
            }
        }
        best.unwrap_or_else(|| vec![0, self.dim as u64])
    }
}

pub(crate) fn element_words(e: &Element) -> Vec<u64> {
    let mut words = Vec::new();
    let mut cur = 0u64;
    let mut filled = 0;
    for i in 0..e.width() {
        if e.contains(i) {
            cur |= 1 << filled;
        }
        filled += 1;
        if filled == 64 {
            words.push(cur);
            cur = 0;
            filled = 0;
        }
    }
    if filled > 0 || words.is_empty() {
        words.push(cur);
    }
    words
}

/// Product of the diagonals over the equal coordinate pairs of a tuple.
pub fn diagonal_product(alg: &FiniteAlgebra, tuple: &[usize]) -> Element {
    let mut out = alg.one();
    for i in 0..tuple.len() {
        for j in 0..tuple.len() {
            if i != j && tuple[i] == tuple[j] {
                if let Ok(d) = alg.diagonal(i, j) {
                    out = out.meet(&d);
                }
            }
        }
    }
    out
}

/// The network `I_a`: nodes `0..d`, main tuple labelled `a`, every other
/// tuple labelled by its diagonal product.
pub fn initial_network(alg: &FiniteAlgebra, a: &Element, d: usize) -> Result<PreNetwork> {
    if a.is_zero() {
        return Err(AlcError::InvalidParameter(
            "the game starts from a non-zero element".into(),
        ));
    }
    if a.width() != alg.atom_count() {
        return Err(AlcError::WidthMismatch {
            expected: alg.atom_count(),
            got: a.width(),
        });
    }
    let mut n = PreNetwork {
        dim: d,
        nodes: d,
        labels: (0..d.pow(d as u32))
            .map(|r| diagonal_product(alg, &unrank(r, d, d)))
            .collect(),
    };
    let main: Vec<usize> = (0..d).collect();
    n.set_label(&main, a.clone());
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum NetClause {
    Diagonal,
    Cylinder,
    Polyadic,
    Merge,
}

#[derive(Clone, Debug)]
pub struct NetworkReport {
    pub violations: Vec<(NetClause, Vec<Vec<usize>>)>,
}

impl NetworkReport {
    pub fn is_network(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Clause-by-clause check of the network conditions. Clause order: diagonal
/// bound on repeating tuples, cylindrifier compatibility, polyadic
/// compatibility (skipped without transpositions), and the diagonal-merge
/// implication.
pub fn validate_network(alg: &FiniteAlgebra, n: &PreNetwork) -> Result<NetworkReport> {
    let mut report = NetworkReport {
        violations: Vec::new(),
    };
    let d = n.dim;
    let v = n.nodes;
    if alg.dim() < d {
        return Err(AlcError::IndexOverflow {
            index: d,
            dim: alg.dim(),
        });
    }
    for tuple in n.tuples() {
        for i in 0..d {
            for j in 0..d {
                if i != j && tuple[i] == tuple[j] {
                    let dij = alg.diagonal(i, j)?;
                    if !n.label(&tuple).le(&dij) {
                        report
                            .violations
                            .push((NetClause::Diagonal, vec![tuple.clone()]));
                    }
                }
            }
        }
    }
    for tuple in n.tuples() {
        for i in 0..d {
            let mut other = tuple.clone();
            for x in 0..v {
                other[i] = x;
                let ci = alg.cyl(i, n.label(&other));
                if !n.label(&tuple).meets(&ci) {
                    report
                        .violations
                        .push((NetClause::Cylinder, vec![tuple.clone(), other.clone()]));
                }
            }
        }
    }
    if alg.signature().has_transpositions() {
        for tuple in n.tuples() {
            for i in 0..d {
                for j in i + 1..d {
                    let mut swapped = tuple.clone();
                    swapped.swap(i, j);
                    let p = alg.transp_el(i, j, n.label(&swapped))?;
                    if !n.label(&tuple).meets(&p) {
                        report
                            .violations
                            .push((NetClause::Polyadic, vec![tuple.clone(), swapped.clone()]));
                    }
                }
            }
        }
    }
    for tuple in n.tuples() {
        for i in 0..d {
            let mut other = tuple.clone();
            for yi in 0..v {
                other[i] = yi;
                for j in 0..d {
                    for k in 0..d {
                        // z ranges over tuples with z_j = x_i, z_k = y_i
                        let mut z = vec![0usize; d];
                        let free: Vec<usize> = (0..d).filter(|&p| p != j && p != k).collect();
                        let combos = v.pow(free.len() as u32);
                        for c in 0..combos {
                            let values = unrank(c, v, free.len());
                            z[j] = tuple[i];
                            z[k] = other[i];
                            if j == k && tuple[i] != other[i] {
                                continue;
                            }
                            for (slot, &p) in free.iter().enumerate() {
                                z[p] = values[slot];
                            }
                            let djk = alg.diagonal(j, k)?;
                            if n.label(&z).le(&djk) && !n.label(&tuple).meets(n.label(&other)) {
                                report.violations.push((
                                    NetClause::Merge,
                                    vec![tuple.clone(), other.clone(), z.clone()],
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Short-circuit version of the clause check, for the solvers.
pub(crate) fn is_network(alg: &FiniteAlgebra, n: &PreNetwork) -> bool {
    let d = n.dim;
    let v = n.nodes;
    let poly = alg.signature().has_transpositions();
    for tuple in n.tuples() {
        let label = n.label(&tuple);
        for i in 0..d {
            for j in 0..d {
                if i != j && tuple[i] == tuple[j] {
                    match alg.diagonal(i, j) {
                        Ok(dij) if label.le(&dij) => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    for tuple in n.tuples() {
        let label = n.label(&tuple);
        for i in 0..d {
            let mut other = tuple.clone();
            for x in 0..v {
                other[i] = x;
                if !label.meets(&alg.cyl(i, n.label(&other))) {
                    return false;
                }
            }
        }
    }
    if poly {
        for tuple in n.tuples() {
            let label = n.label(&tuple);
            for i in 0..d {
                for j in i + 1..d {
                    let mut swapped = tuple.clone();
                    swapped.swap(i, j);
                    match alg.transp_el(i, j, n.label(&swapped)) {
                        Ok(p) if label.meets(&p) => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    // merge clause
    for tuple in n.tuples() {
        for i in 0..d {
            let mut other = tuple.clone();
            for yi in 0..v {
                other[i] = yi;
                if n.label(&tuple).meets(n.label(&other)) {
                    continue;
                }
                for j in 0..d {
                    for k in 0..d {
                        if j == k && tuple[i] != yi {
                            continue;
                        }
                        let Ok(djk) = alg.diagonal(j, k) else {
                            return false;
                        };
                        let mut z = vec![0usize; d];
                        let free: Vec<usize> = (0..d).filter(|&p| p != j && p != k).collect();
                        for c in 0..v.pow(free.len() as u32) {
                            let values = unrank(c, v, free.len());
                            z[j] = tuple[i];
                            z[k] = yi;
                            for (slot, &p) in free.iter().enumerate() {
                                z[p] = values[slot];
                            }
                            if n.label(&z).le(&djk) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::structures::{named, AtomStructure};

    fn pea_cube() -> FiniteAlgebra {
        make_algebra(&AtomStructure::Pea(named::full_pea_set_structure(2, 3))).unwrap()
    }

    #[test]
    fn initial_network_of_atom_is_a_network() {
        let alg = pea_cube();
        for a in 0..alg.atom_count() {
            let n = initial_network(&alg, &alg.atom(a), 3).unwrap();
            let report = validate_network(&alg, &n).unwrap();
            assert!(report.is_network(), "atom {a}: {:?}", report.violations);
            assert!(is_network(&alg, &n));
        }
    }

    #[test]
    fn initial_network_of_unit() {
        let alg = pea_cube();
        let n = initial_network(&alg, &alg.one(), 3).unwrap();
        assert_eq!(n.label(&[0, 1, 2]), &alg.one());
        assert!(initial_network(&alg, &alg.zero(), 3).is_err());
    }

    #[test]
    fn diagonal_violation_detected() {
        let alg = pea_cube();
        let mut n = initial_network(&alg, &alg.atom(0), 3).unwrap();
        n.set_label(&[0, 0, 1], alg.one());
        let report = validate_network(&alg, &n).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|(c, _)| *c == NetClause::Diagonal));
    }

    #[test]
    fn zero_label_breaks_cylinder_clause() {
        let alg = pea_cube();
        let mut n = initial_network(&alg, &alg.atom(0), 3).unwrap();
        n.set_label(&[0, 1, 2], alg.zero());
        let report = validate_network(&alg, &n).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|(c, _)| *c == NetClause::Cylinder));
    }

    #[test]
    fn canonical_key_invariant_under_renaming() {
        let alg = pea_cube();
        let n = initial_network(&alg, &alg.atom(3), 3).unwrap();
        // relabel nodes by the cycle 0 -> 1 -> 2 -> 0
        let perm = [1usize, 2, 0];
        let mut m = n.clone();
        for tuple in n.tuples() {
            let image: Vec<usize> = tuple.iter().map(|&x| perm[x]).collect();
            m.set_label(&image, n.label(&tuple).clone());
        }
        assert_eq!(n.canonical_key(), m.canonical_key());
    }
}
