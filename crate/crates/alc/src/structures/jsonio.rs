//! JSON serialization for atom structures, schema `alc-atomstructure-v1`.
//! Lists are emitted in canonical (lexicographic) order so that emitting,
//! parsing and emitting again is byte-exact.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{AlcError, Result};
use crate::structures::{
    AtomStructure, CaAtomStructure, DfAtomStructure, PeaAtomStructure, RaAtomStructure, RelBits,
    TripleSet,
};

#[derive(Serialize, Deserialize)]
struct StructureDto {
    schema: String,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    atoms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identity: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converse: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistent: Option<Vec<[String; 3]>>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    t: Option<Vec<Vec<[String; 2]>>>,
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    e: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    swap: Option<BTreeMap<String, Vec<[String; 2]>>>,
}

const SCHEMA: &str = "alc-atomstructure-v1";

pub fn to_json(s: &AtomStructure) -> String {
    let dto = match s {
        AtomStructure::Ra(ra) => ra_dto(ra),
        AtomStructure::Ca(ca) => ca_dto(ca, None),
        AtomStructure::Pea(p) => ca_dto(&p.ca, Some(p)),
        AtomStructure::Df(df) => df_dto(df),
    };
    serde_json::to_string_pretty(&dto).expect("structure serializes")
}

fn ra_dto(s: &RaAtomStructure) -> StructureDto {
    let name = |a: usize| s.atoms[a].clone();
    let mut consistent: Vec<[String; 3]> = s
        .consistent
        .iter()
        .map(|(b, c, a)| [name(b), name(c), name(a)])
        .collect();
    consistent.sort();
    StructureDto {
        schema: SCHEMA.into(),
        kind: "ra".into(),
        dim: None,
        atoms: s.atoms.clone(),
        identity: Some({
            let mut ids: Vec<String> = s.identity.iter().map(|&a| name(a)).collect();
            ids.sort();
            ids
        }),
        converse: Some(
            (0..s.atoms.len())
                .map(|a| (name(a), name(s.converse[a])))
                .collect(),
        ),
        consistent: Some(consistent),
        t: None,
        e: None,
        swap: None,
    }
}

fn df_dto(s: &DfAtomStructure) -> StructureDto {
    let name = |a: usize| s.atoms[a].clone();
    let mut t = Vec::with_capacity(s.dim);
    for i in 0..s.dim {
        let mut pairs: Vec<[String; 2]> = s.t[i].pairs().map(|(a, b)| [name(a), name(b)]).collect();
        pairs.sort();
        t.push(pairs);
    }
    StructureDto {
        schema: SCHEMA.into(),
        kind: "df".into(),
        dim: Some(s.dim),
        atoms: s.atoms.clone(),
        identity: None,
        converse: None,
        consistent: None,
        t: Some(t),
        e: None,
        swap: None,
    }
}

fn ca_dto(s: &CaAtomStructure, pea: Option<&PeaAtomStructure>) -> StructureDto {
    let name = |a: usize| s.atoms[a].clone();
    let mut t = Vec::with_capacity(s.dim);
    for i in 0..s.dim {
        let mut pairs: Vec<[String; 2]> = s.t[i].pairs().map(|(a, b)| [name(a), name(b)]).collect();
        pairs.sort();
        t.push(pairs);
    }
    let mut e = BTreeMap::new();
    for i in 0..s.dim {
        for j in 0..s.dim {
            let mut members: Vec<String> = s.e(i, j).iter().map(name).collect();
            members.sort();
            e.insert(format!("{i},{j}"), members);
        }
    }
    let swap = pea.map(|p| {
        let mut out = BTreeMap::new();
        for i in 0..s.dim {
            for j in i + 1..s.dim {
                let mut pairs: Vec<[String; 2]> = p
                    .swap(i, j)
                    .iter()
                    .enumerate()
                    .map(|(a, &b)| [name(a), name(b)])
                    .collect();
                pairs.sort();
                out.insert(format!("{i},{j}"), pairs);
            }
        }
        out
    });
    StructureDto {
        schema: SCHEMA.into(),
        kind: if pea.is_some() { "pea".into() } else { "ca".into() },
        dim: Some(s.dim),
        atoms: s.atoms.clone(),
        identity: None,
        converse: None,
        consistent: None,
        t: Some(t),
        e: Some(e),
        swap,
    }
}

pub fn from_json(text: &str) -> Result<AtomStructure> {
    let dto: StructureDto = serde_json::from_str(text)?;
    if dto.schema != SCHEMA {
        return Err(AlcError::Malformed(format!(
            "expected schema {SCHEMA}, got {}",
            dto.schema
        )));
    }
    let atoms = dto.atoms.clone();
    if atoms.iter().any(|a| a.is_empty()) {
        return Err(AlcError::Malformed("empty atom name".into()));
    }
    if atoms.iter().collect::<BTreeSet<_>>().len() != atoms.len() {
        return Err(AlcError::Malformed("duplicate atom names".into()));
    }
    let index = |name: &str| -> Result<usize> {
        atoms
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| AlcError::UnknownAtom(name.into()))
    };
    match dto.kind.as_str() {
        "ra" => {
            let n = atoms.len();
            let identity_names = dto
                .identity
                .ok_or_else(|| AlcError::Malformed("ra structure needs identity".into()))?;
            let mut identity = BTreeSet::new();
            for a in identity_names {
                identity.insert(index(&a)?);
            }
            let conv_map = dto
                .converse
                .ok_or_else(|| AlcError::Malformed("ra structure needs converse".into()))?;
            let mut converse = vec![usize::MAX; n];
            for (a, b) in conv_map {
                converse[index(&a)?] = index(&b)?;
            }
            if converse.iter().any(|&b| b == usize::MAX) {
                return Err(AlcError::Malformed("converse map not total".into()));
            }
            let triples = dto
                .consistent
                .ok_or_else(|| AlcError::Malformed("ra structure needs consistent triples".into()))?;
            let mut consistent = TripleSet::empty(n);
            for [b, c, a] in triples {
                consistent.insert(index(&b)?, index(&c)?, index(&a)?);
            }
            Ok(AtomStructure::Ra(RaAtomStructure {
                atoms,
                identity,
                converse,
                consistent,
            }))
        }
        "df" => {
            let n = atoms.len();
            let dim = dto
                .dim
                .ok_or_else(|| AlcError::Malformed("df structure needs dim".into()))?;
            let t_lists = dto
                .t
                .ok_or_else(|| AlcError::Malformed("df structure needs T".into()))?;
            if t_lists.len() != dim {
                return Err(AlcError::Malformed("T family arity differs from dim".into()));
            }
            let mut t = Vec::with_capacity(dim);
            for pairs in t_lists {
                let mut rel = RelBits::empty(n);
                for [a, b] in pairs {
                    rel.insert(index(&a)?, index(&b)?);
                }
                t.push(rel);
            }
            Ok(AtomStructure::Df(DfAtomStructure { dim, atoms, t }))
        }
        "ca" | "pea" => {
            let n = atoms.len();
            let dim = dto
                .dim
                .ok_or_else(|| AlcError::Malformed("cylindric structure needs dim".into()))?;
            let t_lists = dto
                .t
                .ok_or_else(|| AlcError::Malformed("cylindric structure needs T".into()))?;
            if t_lists.len() != dim {
                return Err(AlcError::Malformed("T family arity differs from dim".into()));
            }
            let mut t = Vec::with_capacity(dim);
            for pairs in t_lists {
                let mut rel = RelBits::empty(n);
                for [a, b] in pairs {
                    rel.insert(index(&a)?, index(&b)?);
                }
                t.push(rel);
            }
            let e_map = dto
                .e
                .ok_or_else(|| AlcError::Malformed("cylindric structure needs E".into()))?;
            let mut e = vec![Element::zero(n); dim * dim];
            for (key, members) in e_map {
                let (i, j) = parse_pair(&key, dim)?;
                let mut set = Element::zero(n);
                for a in members {
                    set.insert(index(&a)?);
                }
                e[i * dim + j] = set;
            }
            let ca = CaAtomStructure::new(dim, atoms, t, e);
            if dto.kind == "ca" {
                Ok(AtomStructure::Ca(ca))
            } else {
                let swap_map = dto
                    .swap
                    .ok_or_else(|| AlcError::Malformed("pea structure needs swap".into()))?;
                let mut swaps = vec![Vec::new(); dim * (dim - 1) / 2];
                for (key, pairs) in swap_map {
                    let (i, j) = parse_pair(&key, dim)?;
                    if i >= j {
                        return Err(AlcError::Malformed(format!("swap key {key} not i<j")));
                    }
                    let mut map = vec![usize::MAX; n];
                    for [a, b] in pairs {
                        map[ca.atom_index(&a).ok_or_else(|| AlcError::UnknownAtom(a.clone()))?] =
                            ca.atom_index(&b).ok_or_else(|| AlcError::UnknownAtom(b.clone()))?;
                    }
                    if map.iter().any(|&b| b == usize::MAX) {
                        return Err(AlcError::Malformed(format!("swap {key} not total")));
                    }
                    let slot = i * (2 * dim - i - 1) / 2 + (j - i - 1);
                    swaps[slot] = map;
                }
                if swaps.iter().any(|m| m.is_empty() && n > 0) {
                    return Err(AlcError::Malformed("missing swap relation".into()));
                }
                Ok(AtomStructure::Pea(PeaAtomStructure::new(ca, swaps)))
            }
        }
        other => Err(AlcError::Malformed(format!("unknown kind {other}"))),
    }
}

fn parse_pair(key: &str, dim: usize) -> Result<(usize, usize)> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != 2 {
        return Err(AlcError::Malformed(format!("bad index pair {key}")));
    }
    let i: usize = parts[0]
        .parse()
        .map_err(|_| AlcError::Malformed(format!("bad index pair {key}")))?;
    let j: usize = parts[1]
        .parse()
        .map_err(|_| AlcError::Malformed(format!("bad index pair {key}")))?;
    if i >= dim || j >= dim {
        return Err(AlcError::IndexOverflow {
            index: i.max(j),
            dim,
        });
    }
    Ok((i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::named;

    #[test]
    fn ra_roundtrip_byte_exact() {
        let s = AtomStructure::Ra(named::lyndon(4).unwrap());
        let text = to_json(&s);
        let back = from_json(&text).unwrap();
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn ca_roundtrip_byte_exact() {
        let s = AtomStructure::Ca(named::full_ca_set_structure(2, 3));
        let text = to_json(&s);
        let back = from_json(&text).unwrap();
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn pea_roundtrip_byte_exact() {
        let s = AtomStructure::Pea(named::full_pea_set_structure(2, 3));
        let text = to_json(&s);
        let back = from_json(&text).unwrap();
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn rejects_bad_schema() {
        let text = to_json(&AtomStructure::Ra(named::monk_ek(1).unwrap()))
            .replace("alc-atomstructure-v1", "other");
        assert!(from_json(&text).is_err());
    }
}
