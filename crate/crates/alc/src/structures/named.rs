//! Named atom-structure constructions: Lyndon algebras, Monk algebras,
//! the rainbow-style algebras A(n,r) and full set-algebra structures.

use std::collections::BTreeSet;

use crate::element::Element;
use crate::error::{AlcError, Result};
use crate::structures::{CaAtomStructure, PeaAtomStructure, RaAtomStructure, RelBits, TripleSet};

/// The Lyndon algebra structure on a set of `u_size >= 4` points: atoms are
/// the identity `e` together with the points, all self-converse, with
/// composition determined by `u.u = {e,u}`, `u.v = U minus {u,v}` and the
/// identity rules.
pub fn lyndon(u_size: usize) -> Result<RaAtomStructure> {
    if u_size < 4 {
        return Err(AlcError::InvalidParameter(format!(
            "Lyndon algebras need |U| >= 4, got {u_size}"
        )));
    }
    let n = u_size + 1;
    let mut atoms = vec!["e".to_string()];
    atoms.extend((0..u_size).map(|i| format!("u{i}")));
    let mut consistent = TripleSet::empty(n);
    let e = 0;
    consistent.insert(e, e, e);
    for u in 1..n {
        consistent.insert(u, e, u);
        consistent.insert(e, u, u);
        consistent.insert(u, u, e);
        consistent.insert(u, u, u);
        for v in 1..n {
            if v == u {
                continue;
            }
            for w in 1..n {
                if w != u && w != v {
                    consistent.insert(u, v, w);
                }
            }
        }
    }
    Ok(RaAtomStructure {
        atoms,
        identity: BTreeSet::from([e]),
        converse: (0..n).collect(),
        consistent,
    })
}

/// Monk's algebra `E_k(2,3)`: `k` self-converse non-identity atoms where a
/// diversity triple `(a_i, a_j, a_l)` is consistent exactly when the index
/// multiset has at least two distinct values.
pub fn monk_ek(k: usize) -> Result<RaAtomStructure> {
    if k == 0 {
        return Err(AlcError::InvalidParameter(
            "E_k(2,3) needs at least one non-identity atom".into(),
        ));
    }
    let n = k + 1;
    let mut atoms = vec!["id".to_string()];
    atoms.extend((0..k).map(|i| format!("a{i}")));
    let mut consistent = TripleSet::empty(n);
    consistent.insert(0, 0, 0);
    for a in 1..n {
        consistent.insert(0, a, a);
        consistent.insert(a, 0, a);
        consistent.insert(a, a, 0);
    }
    for i in 1..n {
        for j in 1..n {
            for l in 1..n {
                let distinct = [i, j, l].iter().collect::<BTreeSet<_>>().len();
                if distinct >= 2 {
                    consistent.insert(i, j, l);
                }
            }
        }
    }
    Ok(RaAtomStructure {
        atoms,
        identity: BTreeSet::from([0]),
        converse: (0..n).collect(),
        consistent,
    })
}

/// The algebras `A(n,r)` with atoms `id` and `a^k(i,j)` for `i < n-1`,
/// `j < r`, `k < psi`; forbidden diversity triples are the permutations of
/// pairs sharing `(i,j)` against a third with the same `i` and colour
/// `j' >= j`.
pub fn a_n_r(n: usize, r: usize, psi: usize) -> Result<RaAtomStructure> {
    if n < 3 || r < 1 {
        return Err(AlcError::InvalidParameter(
            "A(n,r) needs n >= 3 and r >= 1".into(),
        ));
    }
    if psi < n.max(r) {
        return Err(AlcError::InvalidParameter(format!(
            "A(n,r) needs psi >= max(n,r), got psi={psi}"
        )));
    }
    let mut atoms = vec!["id".to_string()];
    let mut params = vec![None];
    for i in 0..n - 1 {
        for j in 0..r {
            for k in 0..psi {
                atoms.push(format!("a{k}_{i}_{j}"));
                params.push(Some((i, j, k)));
            }
        }
    }
    let count = atoms.len();
    let mut consistent = TripleSet::empty(count);
    consistent.insert(0, 0, 0);
    for a in 1..count {
        consistent.insert(0, a, a);
        consistent.insert(a, 0, a);
        consistent.insert(a, a, 0);
    }
    let forbidden = |x: usize, y: usize, z: usize| -> bool {
        let (ix, jx, _) = params[x].unwrap();
        let (iy, jy, _) = params[y].unwrap();
        let (iz, jz, _) = params[z].unwrap();
        if ix != iy || iy != iz {
            return false;
        }
        let mut js = [jx, jy, jz];
        js.sort_unstable();
        js[0] == js[1]
    };
    for x in 1..count {
        for y in 1..count {
            for z in 1..count {
                if !forbidden(x, y, z) {
                    consistent.insert(x, y, z);
                }
            }
        }
    }
    Ok(RaAtomStructure {
        atoms,
        identity: BTreeSet::from([0]),
        converse: (0..count).collect(),
        consistent,
    })
}

fn point_name(point: &[usize]) -> String {
    point.iter().map(|d| d.to_string()).collect()
}

fn points(base: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for p in &out {
            for d in 0..base {
                let mut q = p.clone();
                q.push(d);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Atom structure of the full cylindric set algebra over `^dim base`:
/// atoms are the points, `T_i` relates points agreeing off coordinate `i`,
/// `E_ij` holds the points with equal `i`-th and `j`-th coordinates.
pub fn full_ca_set_structure(base: usize, dim: usize) -> CaAtomStructure {
    assert!(base >= 1 && base <= 9, "base must be between 1 and 9");
    let pts = points(base, dim);
    let n = pts.len();
    let atoms: Vec<String> = pts.iter().map(|p| point_name(p)).collect();
    let mut t = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut rel = RelBits::empty(n);
        for (a, p) in pts.iter().enumerate() {
            for (b, q) in pts.iter().enumerate() {
                if p.iter()
                    .zip(q)
                    .enumerate()
                    .all(|(k, (x, y))| k == i || x == y)
                {
                    rel.insert(a, b);
                }
            }
        }
        t.push(rel);
    }
    let mut e = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut set = Element::zero(n);
            for (a, p) in pts.iter().enumerate() {
                if p[i] == p[j] {
                    set.insert(a);
                }
            }
            e.push(set);
        }
    }
    CaAtomStructure::new(dim, atoms, t, e)
}

/// The polyadic version: adds the coordinate-swap bijections.
pub fn full_pea_set_structure(base: usize, dim: usize) -> PeaAtomStructure {
    let ca = full_ca_set_structure(base, dim);
    let pts = points(base, dim);
    let index_of = |p: &[usize]| pts.iter().position(|q| q == p).unwrap();
    let mut swaps = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let mut map = Vec::with_capacity(pts.len());
            for p in &pts {
                let mut q = p.clone();
                q.swap(i, j);
                map.push(index_of(&q));
            }
            swaps.push(map);
        }
    }
    PeaAtomStructure::new(ca, swaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_triples() {
        let s = lyndon(4).unwrap();
        assert_eq!(s.atoms.len(), 5);
        let u = 1;
        let v = 2;
        let e = 0;
        assert!(s.consistent.contains(u, u, e));
        assert!(!s.consistent.contains(u, v, u));
        assert!(lyndon(3).is_err());
    }

    #[test]
    fn monk_triples() {
        let s = monk_ek(3).unwrap();
        assert!(s.consistent.contains(1, 2, 3));
        let s2 = monk_ek(2).unwrap();
        assert!(!s2.consistent.contains(1, 1, 1));
        let s1 = monk_ek(1).unwrap();
        assert!(s1.consistent.contains(1, 1, 0));
        assert!(!s1.consistent.contains(1, 1, 1));
    }

    #[test]
    fn anr_counts_and_forbidden_family() {
        let s = a_n_r(3, 1, 3).unwrap();
        assert_eq!(s.atoms.len(), 7);
        let a0 = s.atoms.iter().position(|x| x == "a0_0_0").unwrap();
        let a1 = s.atoms.iter().position(|x| x == "a1_0_0").unwrap();
        let a2 = s.atoms.iter().position(|x| x == "a2_0_0").unwrap();
        assert!(!s.consistent.contains(a0, a1, a2));
        let b0 = s.atoms.iter().position(|x| x == "a0_1_0").unwrap();
        for z in 1..s.atoms.len() {
            assert!(s.consistent.contains(a0, b0, z), "i differs, should be consistent");
        }
        assert!(a_n_r(3, 1, 2).is_err());
    }

    #[test]
    fn set_structure_shapes() {
        let s = full_ca_set_structure(2, 3);
        assert_eq!(s.atom_count(), 8);
        assert_eq!(s.e(0, 1).count(), 4);
        let p = full_pea_set_structure(2, 3);
        let a = p.ca.atom_index("010").unwrap();
        let swapped = p.swap(0, 1)[a];
        assert_eq!(p.ca.atoms[swapped], "100");
    }
}
