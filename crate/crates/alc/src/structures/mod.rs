//! Atom-structure presentations of relation, cylindric and polyadic-equality
//! algebras, their validators, named constructions, graph bridges and
//! structure surgery.

pub mod bridge;
pub mod graph_alg;
pub mod jsonio;
pub mod named;
pub mod surgery;

use std::collections::BTreeSet;

use crate::element::Element;

/// Binary relation on atom indices, stored as a bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelBits {
    n: usize,
    rows: Vec<Element>,
}

impl RelBits {
    pub fn empty(n: usize) -> Self {
        RelBits {
            n,
            rows: (0..n).map(|_| Element::zero(n)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = RelBits::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        RelBits {
            n,
            rows: (0..n).map(|_| Element::one(n)).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.rows[a].insert(b);
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn row(&self, a: usize) -> &Element {
        &self.rows[a]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.rows[a].iter().map(move |b| (a, b)))
    }

    /// Relational composition `{(x,y) : exists z, x R z and z S y}`.
    pub fn compose(&self, other: &RelBits) -> RelBits {
        let mut out = RelBits::empty(self.n);
        for a in 0..self.n {
            for z in self.rows[a].iter() {
                out.rows[a].join_assign(&other.rows[z]);
            }
        }
        out
    }

    /// Image of a set of atoms under the relation.
    pub fn image(&self, xs: &Element) -> Element {
        let mut out = Element::zero(self.n);
        for a in xs.iter() {
            out.join_assign(&self.rows[a]);
        }
        out
    }

    pub fn is_reflexive(&self) -> Option<usize> {
        (0..self.n).find(|&a| !self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(a, b)| !self.contains(b, a))
    }

    pub fn is_transitive(&self) -> Option<(usize, usize, usize)> {
        for (a, b) in self.pairs() {
            for c in self.rows[b].iter() {
                if !self.contains(a, c) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    /// Equivalence classes, each as a bit set, in order of least member.
    pub fn classes(&self) -> Vec<Element> {
        let mut seen = Element::zero(self.n);
        let mut out = Vec::new();
        for a in 0..self.n {
            if !seen.contains(a) {
                out.push(self.rows[a].clone());
                seen.join_assign(&self.rows[a]);
            }
        }
        out
    }
}

/// Ternary consistency predicate on atoms, stored as a bit cube.
/// `contains(b, c, a)` reads: atom `a` lies below the composition `b;c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSet {
    n: usize,
    bits: Vec<u64>,
}

impl TripleSet {
    pub fn empty(n: usize) -> Self {
        TripleSet {
            n,
            bits: vec![0; (n * n * n).div_ceil(64).max(1)],
        }
    }

    fn idx(&self, b: usize, c: usize, a: usize) -> usize {
        (b * self.n + c) * self.n + a
    }

    pub fn insert(&mut self, b: usize, c: usize, a: usize) {
        let i = self.idx(b, c, a);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, b: usize, c: usize, a: usize) {
        let i = self.idx(b, c, a);
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, b: usize, c: usize, a: usize) -> bool {
        let i = self.idx(b, c, a);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |b| {
            (0..n).flat_map(move |c| (0..n).filter_map(move |a| self.contains(b, c, a).then_some((b, c, a))))
        })
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }
}

/// Relation algebra atom structure: named atoms, identity subset, converse
/// involution and the Peircean-closed set of consistent triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaAtomStructure {
    pub atoms: Vec<String>,
    pub identity: BTreeSet<usize>,
    pub converse: Vec<usize>,
    pub consistent: TripleSet,
}

/// Cylindric atom structure of finite dimension: per-index relations `T_i`
/// and diagonal sets `E_ij` (stored for every ordered pair, `E_ii`
/// conventionally the whole atom set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaAtomStructure {
    pub dim: usize,
    pub atoms: Vec<String>,
    pub t: Vec<RelBits>,
    e: Vec<Element>,
}

impl CaAtomStructure {
    pub fn new(dim: usize, atoms: Vec<String>, t: Vec<RelBits>, e: Vec<Element>) -> Self {
        assert_eq!(t.len(), dim);
        assert_eq!(e.len(), dim * dim);
        CaAtomStructure { dim, atoms, t, e }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn e(&self, i: usize, j: usize) -> &Element {
        &self.e[i * self.dim + j]
    }

    pub fn e_mut(&mut self, i: usize, j: usize) -> &mut Element {
        &mut self.e[i * self.dim + j]
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }
}

/// Quasipolyadic-equality atom structure: a cylindric structure plus one
/// involutive atom bijection per transposition `[i,j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeaAtomStructure {
    pub ca: CaAtomStructure,
    swaps: Vec<Vec<usize>>,
}

fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    i * (2 * dim - i - 1) / 2 + (j - i - 1)
}

impl PeaAtomStructure {
    pub fn new(ca: CaAtomStructure, swaps: Vec<Vec<usize>>) -> Self {
        assert_eq!(swaps.len(), ca.dim * (ca.dim - 1) / 2);
        PeaAtomStructure { ca, swaps }
    }

    pub fn dim(&self) -> usize {
        self.ca.dim
    }

    pub fn atom_count(&self) -> usize {
        self.ca.atoms.len()
    }

    pub fn swap(&self, i: usize, j: usize) -> &Vec<usize> {
        &self.swaps[pair_index(self.ca.dim, i.min(j), i.max(j))]
    }
}

/// A `k x k` atom-valued matrix with identity diagonal, converse symmetry and
/// consistent triangles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicMatrix {
    pub dim: usize,
    pub entries: Vec<usize>,
}

impl BasicMatrix {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.dim + j]
    }
}

/// Diagonal-free atom structure: cylindrification relations only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfAtomStructure {
    pub dim: usize,
    pub atoms: Vec<String>,
    pub t: Vec<RelBits>,
}

/// Any of the structure kinds.
#[derive(Clone, Debug)]
pub enum AtomStructure {
    Ra(RaAtomStructure),
    Ca(CaAtomStructure),
    Pea(PeaAtomStructure),
    Df(DfAtomStructure),
}

impl AtomStructure {
    pub fn atom_names(&self) -> &[String] {
        match self {
            AtomStructure::Ra(s) => &s.atoms,
            AtomStructure::Ca(s) => &s.atoms,
            AtomStructure::Pea(s) => &s.ca.atoms,
            AtomStructure::Df(s) => &s.atoms,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            AtomStructure::Ra(s) => validate_ra(s),
            AtomStructure::Ca(s) => validate_ca(s),
            AtomStructure::Pea(s) => validate_pea(s),
            AtomStructure::Df(s) => validate_df(s),
        }
    }
}

/// Equivalence and commuting clauses for diagonal-free structures.
pub fn validate_df(s: &DfAtomStructure) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = s.atoms.len();
    if s.t.len() != s.dim || s.t.iter().any(|t| t.size() != n) {
        report.push("shape", "relation family has wrong arity");
        return report;
    }
    for i in 0..s.dim {
        if s.t[i].is_reflexive().is_some()
            || s.t[i].is_symmetric().is_some()
            || s.t[i].is_transitive().is_some()
        {
            report.push("(i) equivalence", format!("T{i} is not an equivalence"));
        }
    }
    for i in 0..s.dim {
        for j in 0..s.dim {
            if s.t[i].compose(&s.t[j]) != s.t[j].compose(&s.t[i]) {
                report.push("(ii) commuting", format!("T{i}|T{j} != T{j}|T{i}"));
            }
        }
    }
    report
}

/// One violated clause with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: String,
    pub witness: String,
}

/// Clause-by-clause validation outcome; empty means valid.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, clause: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation {
            clause: clause.into(),
            witness: witness.into(),
        });
    }

    pub fn summary(&self) -> String {
        if self.is_valid() {
            "valid".into()
        } else {
            self.violations
                .iter()
                .map(|v| format!("{}: {}", v.clause, v.witness))
                .collect::<Vec<_>>()
                .join("; ")
        }
    }
}

/// The six Peircean transforms of a consistent triple `(b, c, a)`, read as
/// `a <= b;c`.
pub fn peircean_transforms(conv: &[usize], t: (usize, usize, usize)) -> [(usize, usize, usize); 6] {
    let (b, c, a) = t;
    let v = |x: usize| conv[x];
    [
        (b, c, a),
        (v(c), v(b), v(a)),
        (v(b), a, c),
        (a, v(c), b),
        (c, v(a), v(b)),
        (v(a), b, v(c)),
    ]
}

/// Check the relation-algebra atom-structure clauses: converse involution,
/// Peircean closure of the consistency predicate, and the identity law.
pub fn validate_ra(s: &RaAtomStructure) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = s.atoms.len();
    if s.converse.len() != n {
        report.push("shape", "converse map length differs from atom count");
        return report;
    }
    if s.converse.iter().any(|&b| b >= n) {
        report.push("shape", "converse image out of range");
        return report;
    }
    let name = |a: usize| s.atoms[a].as_str();
    for a in 0..n {
        if s.converse[s.converse[a]] != a {
            report.push(
                "converse-involution",
                format!("conv(conv({})) = {}", name(a), name(s.converse[s.converse[a]])),
            );
        }
    }
    for &e in &s.identity {
        if s.converse[e] != e {
            report.push("converse-fixes-identity", name(e).to_string());
        }
    }
    for (b, c, a) in s.consistent.iter() {
        for (i, tr) in peircean_transforms(&s.converse, (b, c, a)).iter().enumerate() {
            if !s.consistent.contains(tr.0, tr.1, tr.2) {
                report.push(
                    "peircean-closure",
                    format!(
                        "({},{},{}) consistent but transform {i} ({},{},{}) is not",
                        name(b),
                        name(c),
                        name(a),
                        name(tr.0),
                        name(tr.1),
                        name(tr.2)
                    ),
                );
            }
        }
    }
    for &e in &s.identity {
        for x in 0..n {
            for y in 0..n {
                if s.consistent.contains(e, x, y) && x != y {
                    report.push(
                        "identity-law",
                        format!("({},{},{}) consistent with distinct arguments", name(e), name(x), name(y)),
                    );
                }
            }
        }
    }
    for x in 0..n {
        let doms: Vec<usize> = s
            .identity
            .iter()
            .copied()
            .filter(|&e| s.consistent.contains(e, x, x))
            .collect();
        if doms.is_empty() {
            report.push("identity-law", format!("atom {} has no identity domain", name(x)));
        } else if doms.len() > 1 {
            report.push(
                "identity-law",
                format!("atom {} has several identity domains", name(x)),
            );
        }
    }
    report
}

/// Conditions (i)-(v) of the cylindric atom-structure definition.
pub fn validate_ca(s: &CaAtomStructure) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = s.atoms.len();
    let d = s.dim;
    if s.t.len() != d || s.e.len() != d * d {
        report.push("shape", "relation or diagonal family has wrong arity");
        return report;
    }
    if s.t.iter().any(|t| t.size() != n) || s.e.iter().any(|e| e.width() != n) {
        report.push("shape", "relation width differs from atom count");
        return report;
    }
    let name = |a: usize| s.atoms[a].as_str();
    for i in 0..d {
        if let Some(a) = s.t[i].is_reflexive() {
            report.push("(i) equivalence", format!("T{i} not reflexive at {}", name(a)));
        }
        if let Some((a, b)) = s.t[i].is_symmetric() {
            report.push(
                "(i) equivalence",
                format!("T{i} not symmetric at ({},{})", name(a), name(b)),
            );
        }
        if let Some((a, b, c)) = s.t[i].is_transitive() {
            report.push(
                "(i) equivalence",
                format!("T{i} not transitive at ({},{},{})", name(a), name(b), name(c)),
            );
        }
    }
    for i in 0..d {
        for j in 0..d {
            let ij = s.t[i].compose(&s.t[j]);
            let ji = s.t[j].compose(&s.t[i]);
            if ij != ji {
                let witness = ij
                    .pairs()
                    .find(|&(a, b)| !ji.contains(a, b))
                    .or_else(|| ji.pairs().find(|&(a, b)| !ij.contains(a, b)));
                let w = witness
                    .map(|(a, b)| format!("({},{})", name(a), name(b)))
                    .unwrap_or_default();
                report.push("(ii) commuting", format!("T{i}|T{j} != T{j}|T{i} at {w}"));
            }
        }
    }
    let full = Element::one(n);
    for i in 0..d {
        if s.e(i, i) != &full {
            report.push("(iii) E_ii total", format!("E{i}{i} misses some atom"));
        }
    }
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if k == i || k == j {
                    continue;
                }
                let meet = s.e(i, k).meet(s.e(k, j));
                let image = s.t[k].image(&meet);
                if &image != s.e(i, j) {
                    report.push(
                        "(iv) diagonal glue",
                        format!("E{i}{j} != T{k}(E{i}{k} & E{k}{j})"),
                    );
                }
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            'outer: for a in s.e(i, j).iter() {
                for b in s.e(i, j).iter() {
                    if a != b && s.t[j].contains(a, b) {
                        report.push(
                            "(v) diagonal discreteness",
                            format!("{} T{j} {} inside E{i}{j}", name(a), name(b)),
                        );
                        break 'outer;
                    }
                }
            }
        }
    }
    report
}

/// Cylindric validation plus the transposition clauses: involutive atom
/// bijections compatible with the `T`/`E` data, satisfying the braid law and
/// the substitution-swap law.
pub fn validate_pea(s: &PeaAtomStructure) -> ValidationReport {
    let mut report = validate_ca(&s.ca);
    let n = s.ca.atoms.len();
    let d = s.ca.dim;
    let name = |a: usize| s.ca.atoms[a].as_str();
    for i in 0..d {
        for j in i + 1..d {
            let m = s.swap(i, j);
            if m.len() != n || m.iter().any(|&b| b >= n) {
                report.push("swap-shape", format!("p{i}{j} is not a total atom map"));
                return report;
            }
            for a in 0..n {
                if m[m[a]] != a {
                    report.push(
                        "swap-involution",
                        format!("p{i}{j}(p{i}{j}({})) = {}", name(a), name(m[m[a]])),
                    );
                }
            }
            let tau = |x: usize| {
                if x == i {
                    j
                } else if x == j {
                    i
                } else {
                    x
                }
            };
            for k in 0..d {
                for l in 0..d {
                    for a in 0..n {
                        let lhs = s.ca.e(k, l).contains(a);
                        let rhs = s.ca.e(tau(k), tau(l)).contains(m[a]);
                        if lhs != rhs {
                            report.push(
                                "swap-diagonal",
                                format!("p{i}{j} moves {} across E{k}{l}", name(a)),
                            );
                        }
                    }
                }
            }
            for k in 0..d {
                for a in 0..n {
                    for b in 0..n {
                        let lhs = s.ca.t[k].contains(a, b);
                        let rhs = s.ca.t[tau(k)].contains(m[a], m[b]);
                        if lhs != rhs {
                            report.push(
                                "swap-cylinder",
                                format!("p{i}{j} breaks T{k} at ({},{})", name(a), name(b)),
                            );
                        }
                    }
                }
            }
        }
    }
    // braid: p_ij p_ik = p_jk p_ij on atoms, all distinct i,j,k
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if i == j || j == k || i == k {
                    continue;
                }
                let pij = |a: usize| s.swap(i, j)[a];
                let pik = |a: usize| s.swap(i, k)[a];
                let pjk = |a: usize| s.swap(j, k)[a];
                for a in 0..n {
                    if pij(pik(a)) != pjk(pij(a)) {
                        report.push("swap-braid", format!("braid fails at {} ({i},{j},{k})", name(a)));
                    }
                }
            }
        }
    }
    // substitution-swap law: p_ij(s(j,i) a) = s(i,j) a atomwise, where
    // s(i,j)x = T_i-image of x meet E_ij.
    let sub_img = |i: usize, j: usize, a: usize| -> Element {
        if s.ca.e(i, j).contains(a) {
            s.ca.t[i].row(a).clone()
        } else {
            Element::zero(n)
        }
    };
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let m = s.swap(i, j);
            for a in 0..n {
                let lhs = Element::from_bits(n, sub_img(j, i, a).iter().map(|x| m[x]));
                let rhs = sub_img(i, j, a);
                if lhs != rhs {
                    report.push(
                        "swap-substitution",
                        format!("p{i}{j} s{j}{i} != s{i}{j} at {}", name(a)),
                    );
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::named;

    #[test]
    fn lyndon_is_valid() {
        let s = named::lyndon(4).unwrap();
        assert!(validate_ra(&s).is_valid());
    }

    #[test]
    fn peircean_violation_detected() {
        let mut s = named::lyndon(4).unwrap();
        // remove (u0,u0,e) but keep its transforms
        let u0 = s.atoms.iter().position(|a| a == "u0").unwrap();
        let e = s.atoms.iter().position(|a| a == "e").unwrap();
        s.consistent.remove(u0, u0, e);
        let report = validate_ra(&s);
        assert!(report
            .violations
            .iter()
            .any(|v| v.clause == "peircean-closure"));
    }

    #[test]
    fn monk_structures_valid() {
        for k in 1..=4 {
            let s = named::monk_ek(k).unwrap();
            assert!(validate_ra(&s).is_valid(), "E_{k}(2,3)");
        }
    }

    #[test]
    fn full_set_structure_valid() {
        let s = named::full_ca_set_structure(2, 3);
        assert!(validate_ca(&s).is_valid());
        let p = named::full_pea_set_structure(2, 3);
        assert!(validate_pea(&p).is_valid());
    }

    #[test]
    fn enlarged_diagonal_breaks_condition_v() {
        let mut s = named::full_ca_set_structure(2, 3);
        // add an off-diagonal atom to E_01
        let outside = (0..s.atom_count())
            .find(|&a| !s.e(0, 1).contains(a))
            .unwrap();
        s.e_mut(0, 1).insert(outside);
        let report = validate_ca(&s);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.clause.starts_with("(v)") || v.clause.starts_with("(iv)")));
    }
}
