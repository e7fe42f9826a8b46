//! The JSON file formats shared by the library and the CLI.
//!
//! A collection file stores a partition or a set of subspaces as
//! `{ "q": .., "v": .., "t": .., "members": [[row, ...], ...] }` with each
//! member given by its canonical text rows. Serialization is bit-exact:
//! keys in that order, rows of a member sorted lexicographically, members
//! sorted lexicographically by their row lists, compact JSON plus a
//! trailing newline.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::divisibility::{HyperplaneSpectrum, SubspaceSet};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::partition::TPartition;
use crate::subspace::Subspace;

/// On-disk form of a partition or subspace set.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CollectionFile {
    pub q: u32,
    pub v: u32,
    pub t: u32,
    pub members: Vec<Vec<String>>,
}

fn member_rows(s: &Subspace) -> Vec<String> {
    let mut rows = s.text_rows();
    rows.sort();
    rows
}

fn sorted_members<'a>(members: impl Iterator<Item = &'a Subspace>) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = members.map(member_rows).collect();
    out.sort();
    out
}

impl CollectionFile {
    pub fn from_partition(p: &TPartition) -> CollectionFile {
        CollectionFile {
            q: p.q(),
            v: p.ambient(),
            t: p.t(),
            members: sorted_members(p.members()),
        }
    }

    pub fn from_set(s: &SubspaceSet) -> CollectionFile {
        CollectionFile {
            q: s.q(),
            v: s.ambient(),
            t: s.t(),
            members: sorted_members(s.members().iter()),
        }
    }

    /// A plain subspace list with an explicit `t` tag (used for
    /// constant-dimension codes, where `t` is the codeword dimension).
    pub fn from_subspaces(q: u32, v: u32, t: u32, members: &[Subspace]) -> CollectionFile {
        CollectionFile {
            q,
            v,
            t,
            members: sorted_members(members.iter()),
        }
    }

    /// Canonical byte representation.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<CollectionFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reconstructs the field and the member subspaces; members are
    /// canonicalized on load.
    pub fn decode(&self) -> Result<(Arc<FieldContext>, Vec<Subspace>)> {
        let field = field_for_order(self.q)?;
        let mut members = Vec::with_capacity(self.members.len());
        for rows in &self.members {
            members.push(Subspace::from_text_rows(&field, self.v, rows)?);
        }
        Ok((field, members))
    }
}

/// Spectrum report: cardinality, sparse hyperplane counts, and the
/// maximum divisibility exponent.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpectrumFile {
    pub n: u64,
    pub a: std::collections::BTreeMap<String, u64>,
    pub r_star: u32,
}

impl SpectrumFile {
    pub fn from_spectrum(s: &HyperplaneSpectrum) -> SpectrumFile {
        SpectrumFile {
            n: s.n,
            a: s.counts
                .iter()
                .map(|(&i, &c)| (i.to_string(), c))
                .collect(),
            r_star: s.r_star,
        }
    }
}

/// Rebuilds the base field `F_q` from its order.
pub fn field_for_order(q: u32) -> Result<Arc<FieldContext>> {
    if q < 2 {
        return Err(Error::Parse(format!("invalid field order {q}")));
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    let p = if q % p == 0 { p } else { q };
    let mut e = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::Parse(format!("{q} is not a prime power")));
    }
    FieldContext::make_field(p, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::partition::complete_with_t_subspaces;
    use crate::subspace::enumerate_subspaces;

    #[test]
    fn field_reconstruction() {
        assert_eq!(field_for_order(2).unwrap().order(), 2);
        assert_eq!(field_for_order(9).unwrap().order(), 9);
        assert_eq!(field_for_order(16).unwrap().order(), 16);
        assert!(field_for_order(6).is_err());
        assert!(field_for_order(1).is_err());
    }

    #[test]
    fn partition_roundtrip_bitexact() {
        let f = FieldContext::make_field(2, 1).unwrap();
        let b = Budget::default();
        let planes = enumerate_subspaces(&f, 4, 3, &b).unwrap();
        let p = complete_with_t_subspaces(&f, 2, &planes[..1], &b).unwrap();
        let file = CollectionFile::from_partition(&p);
        let json = file.to_json();
        let parsed = CollectionFile::from_json(&json).unwrap();
        assert_eq!(parsed, file);
        assert_eq!(parsed.to_json(), json);
        // decode and re-encode through subspaces
        let (_, members) = parsed.decode().unwrap();
        let file2 = CollectionFile::from_subspaces(2, 4, 2, &members);
        assert_eq!(file2.members, file.members);
    }

    #[test]
    fn key_order_is_pinned() {
        let f = FieldContext::make_field(2, 1).unwrap();
        let b = Budget::default();
        let lines = enumerate_subspaces(&f, 3, 2, &b).unwrap();
        let set = SubspaceSet::new(&f, 3, 2, lines[..2].to_vec()).unwrap();
        let json = CollectionFile::from_set(&set).to_json();
        assert!(json.starts_with("{\"q\":2,\"v\":3,\"t\":2,\"members\":"));
        assert!(json.ends_with("\n"));
    }

    #[test]
    fn member_rows_are_sorted() {
        let f = FieldContext::make_field(2, 1).unwrap();
        let full = Subspace::full(3);
        let file = CollectionFile::from_subspaces(2, 3, 3, &[full]);
        assert_eq!(file.members, vec![vec!["001", "010", "100"]]);
        let _ = f;
    }

    #[test]
    fn spectrum_file_shape() {
        let f = FieldContext::make_field(2, 1).unwrap();
        let b = Budget::default();
        let lines = enumerate_subspaces(&f, 3, 2, &b).unwrap();
        let set = SubspaceSet::new(&f, 3, 2, lines).unwrap();
        let spec = crate::divisibility::spectrum(&f, &set, &b).unwrap();
        let file = SpectrumFile::from_spectrum(&spec);
        let json = serde_json::to_string(&file).unwrap();
        assert_eq!(json, "{\"n\":7,\"a\":{\"1\":7},\"r_star\":1}");
    }
}
