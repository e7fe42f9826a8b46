//! Vector space t-partitions: verification, type signatures, the packing
//! and dimension conditions, and the structural operations on partitions.
//!
//! A set of subspaces (each of dimension at least `t`) is a vector space
//! t-partition when every t-subspace of the ambient space lies in exactly
//! one member. Verification walks the members and marks their t-subspaces
//! in an indexed table of all t-subspaces, which costs one enumeration per
//! member dimension instead of a search per t-subspace.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::budget::Budget;
use crate::counting::gaussian;
use crate::error::{domain, invalid, Result};
use crate::field::FieldContext;
use crate::matrix::Matrix;
use crate::subspace::{enumerate_subspaces, transport, Subspace};

/// The multiset of member dimensions of a partition, written
/// `v^{m_v} ... t^{m_t}` with zero exponents omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionType {
    v: u32,
    t: u32,
    mult: BTreeMap<u32, u64>,
}

impl PartitionType {
    pub fn new(v: u32, t: u32, mult: BTreeMap<u32, u64>) -> Result<PartitionType> {
        if t == 0 || t > v {
            return Err(domain(format!("need 1 <= t <= v, got t={t}, v={v}")));
        }
        if let Some((&d, _)) = mult.iter().find(|&(&d, &m)| m > 0 && (d < t || d > v)) {
            return Err(domain(format!("dimension {d} outside [{t}, {v}]")));
        }
        Ok(PartitionType { v, t, mult })
    }

    pub fn from_dims(v: u32, t: u32, dims: impl IntoIterator<Item = u32>) -> Result<PartitionType> {
        let mut mult = BTreeMap::new();
        for d in dims {
            *mult.entry(d).or_insert(0) += 1;
        }
        Self::new(v, t, mult)
    }

    pub fn ambient(&self) -> u32 {
        self.v
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Multiplicity of dimension `d`.
    pub fn multiplicity(&self, d: u32) -> u64 {
        self.mult.get(&d).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &BTreeMap<u32, u64> {
        &self.mult
    }

    /// Rendering with the t-subspace count replaced by `*`, the shorthand
    /// used when the exact hole count is implied by the packing condition.
    pub fn render_star(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (&d, &m) in self.mult.iter().rev() {
            if m == 0 {
                continue;
            }
            if d == self.t {
                parts.push(format!("{d}^*"));
            } else {
                parts.push(format!("{d}^{m}"));
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&d, &m) in self.mult.iter().rev() {
            if m == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{d}^{m}")?;
            first = false;
        }
        if first {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}

/// Packing condition: `sum_i m_i [i choose t]_q = [v choose t]_q`.
pub fn packing_check(ptype: &PartitionType, q: u64) -> Result<bool> {
    let mut total = BigUint::zero();
    for (&d, &m) in ptype.multiplicities() {
        if m == 0 {
            continue;
        }
        total += gaussian(d as u64, ptype.t() as u64, q)? * BigUint::from(m);
    }
    Ok(total == gaussian(ptype.ambient() as u64, ptype.t() as u64, q)?)
}

/// Dimension condition: `m_i <= 1` whenever `2i > v + t - 1`, and
/// `m_i m_j = 0` whenever `i + j > v + t - 1` for `i < j`.
pub fn dimension_check(ptype: &PartitionType) -> bool {
    let limit = ptype.ambient() as u64 + ptype.t() as u64 - 1;
    let occupied: Vec<(u32, u64)> = ptype
        .multiplicities()
        .iter()
        .filter(|&(_, &m)| m > 0)
        .map(|(&d, &m)| (d, m))
        .collect();
    for &(i, m) in &occupied {
        if 2 * i as u64 > limit && m > 1 {
            return false;
        }
    }
    for (a, &(i, _)) in occupied.iter().enumerate() {
        for &(j, _) in &occupied[a + 1..] {
            if i as u64 + j as u64 > limit {
                return false;
            }
        }
    }
    true
}

/// Witness of a cover-count violation: a t-subspace covered zero times or
/// more than once.
#[derive(Clone, Debug)]
pub struct CoverWitness {
    pub subspace: Subspace,
    pub count: u64,
}

/// Outcome of [`verify_partition`].
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub valid: bool,
    /// Present on success.
    pub ptype: Option<PartitionType>,
    /// First violation in enumeration order, present on failure.
    pub witness: Option<CoverWitness>,
}

fn common_ambient(members: &[Subspace]) -> Result<u32> {
    let mut ambient = None;
    for m in members {
        match ambient {
            None => ambient = Some(m.ambient()),
            Some(v) if v != m.ambient() => {
                return Err(domain(format!(
                    "mixed ambient dimensions {v} and {}",
                    m.ambient()
                )))
            }
            _ => {}
        }
    }
    ambient.ok_or_else(|| domain("empty member list has no ambient dimension"))
}

/// Cover counts of all t-subspaces by the given members, next to the
/// sorted enumeration they index into.
fn cover_counts(
    field: &FieldContext,
    v: u32,
    t: u32,
    members: &[Subspace],
    budget: &Budget,
) -> Result<(Vec<Subspace>, Vec<u64>)> {
    let all_t = enumerate_subspaces(field, v, t, budget)?;
    let index: HashMap<&Subspace, usize> =
        all_t.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut counts = vec![0u64; all_t.len()];
    // abstract t-subspace generators per member dimension, computed once
    let mut abstract_cache: HashMap<u32, Vec<Matrix>> = HashMap::new();
    for member in members {
        let k = member.dim();
        if k == t {
            counts[index[member]] += 1;
            continue;
        }
        let gens = match abstract_cache.get(&k) {
            Some(g) => g,
            None => {
                let enums = enumerate_subspaces(field, k, t, budget)?;
                let gens: Vec<Matrix> = enums.into_iter().map(|s| s.generator().clone()).collect();
                abstract_cache.entry(k).or_insert(gens)
            }
        };
        for g in gens {
            let sub = transport(field, member, g);
            counts[index[&sub]] += 1;
        }
    }
    Ok((all_t, counts))
}

fn validate_members(field: &FieldContext, t: u32, members: &[Subspace]) -> Result<u32> {
    let v = common_ambient(members)?;
    if let Some(m) = members.iter().find(|m| m.dim() < t) {
        return Err(domain(format!(
            "member of dimension {} below t = {t}",
            m.dim()
        )));
    }
    let distinct: BTreeSet<&Subspace> = members.iter().collect();
    if distinct.len() != members.len() {
        return Err(invalid("duplicate member listed"));
    }
    let _ = field;
    Ok(v)
}

/// Checks whether `members` is a vector space t-partition of its ambient
/// space: every t-subspace covered exactly once.
///
/// On failure the report carries the first t-subspace (in enumeration
/// order) with cover count zero or at least two.
pub fn verify_partition(
    field: &FieldContext,
    t: u32,
    members: &[Subspace],
    budget: &Budget,
) -> Result<VerificationReport> {
    if t == 0 {
        return Err(domain("t must be positive"));
    }
    let v = validate_members(field, t, members)?;
    let (all_t, counts) = cover_counts(field, v, t, members, budget)?;
    match counts.iter().position(|&c| c != 1) {
        Some(i) => Ok(VerificationReport {
            valid: false,
            ptype: None,
            witness: Some(CoverWitness {
                subspace: all_t[i].clone(),
                count: counts[i],
            }),
        }),
        None => Ok(VerificationReport {
            valid: true,
            ptype: Some(PartitionType::from_dims(
                v,
                t,
                members.iter().map(|m| m.dim()),
            )?),
            witness: None,
        }),
    }
}

/// A verified vector space t-partition.
#[derive(Clone, Debug)]
pub struct TPartition {
    q: u32,
    v: u32,
    t: u32,
    members: BTreeSet<Subspace>,
    ptype: PartitionType,
}

impl TPartition {
    /// Verifies and wraps a member set; fails with the witness message when
    /// the cover property does not hold.
    pub fn verify_new(
        field: &FieldContext,
        t: u32,
        members: Vec<Subspace>,
        budget: &Budget,
    ) -> Result<TPartition> {
        let report = verify_partition(field, t, &members, budget)?;
        match report {
            VerificationReport {
                valid: true,
                ptype: Some(ptype),
                ..
            } => Ok(TPartition {
                q: field.order(),
                v: ptype.ambient(),
                t,
                members: members.into_iter().collect(),
                ptype,
            }),
            VerificationReport {
                witness: Some(w), ..
            } => Err(invalid(format!(
                "not a t-partition: t-subspace [{}] covered {} times",
                w.subspace.text_rows().join(", "),
                w.count
            ))),
            _ => unreachable!("report is valid with type or invalid with witness"),
        }
    }

    /// Trusted constructor for member sets whose cover counts were already
    /// established by the caller.
    pub(crate) fn from_verified_parts(
        q: u32,
        v: u32,
        t: u32,
        members: BTreeSet<Subspace>,
    ) -> Result<TPartition> {
        let ptype = PartitionType::from_dims(v, t, members.iter().map(|m| m.dim()))?;
        Ok(TPartition {
            q,
            v,
            t,
            members,
            ptype,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ambient(&self) -> u32 {
        self.v
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn members(&self) -> impl Iterator<Item = &Subspace> {
        self.members.iter()
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn contains_member(&self, s: &Subspace) -> bool {
        self.members.contains(s)
    }

    pub fn ptype(&self) -> &PartitionType {
        &self.ptype
    }

    /// Members of a given dimension.
    pub fn members_of_dim(&self, d: u32) -> Vec<Subspace> {
        self.members.iter().filter(|m| m.dim() == d).cloned().collect()
    }

    /// Trivial means all members have dimension `t` or all have dimension `v`.
    pub fn is_trivial(&self) -> bool {
        self.members.iter().all(|m| m.dim() == self.t)
            || self.members.iter().all(|m| m.dim() == self.v)
    }
}

/// Replaces the member `u` of `p` by a t-partition of `u` itself, given in
/// the abstract coordinates of `F_q^{dim u}`; the inner members are
/// transported through the canonical basis of `u`.
pub fn derive(
    field: &FieldContext,
    p: &TPartition,
    u: &Subspace,
    inner: &TPartition,
    budget: &Budget,
) -> Result<TPartition> {
    if !p.contains_member(u) {
        return Err(domain("subspace to replace is not a member of the partition"));
    }
    if inner.ambient() != u.dim() {
        return Err(domain(format!(
            "inner partition lives in dimension {}, the member has dimension {}",
            inner.ambient(),
            u.dim()
        )));
    }
    if inner.t() != p.t() {
        return Err(domain("inner partition has a different t"));
    }
    if inner.q() != p.q() {
        return Err(domain("inner partition is over a different field"));
    }
    let mut members: Vec<Subspace> = p.members().filter(|m| *m != u).cloned().collect();
    for m in inner.members() {
        members.push(transport(field, u, m.generator()));
    }
    TPartition::verify_new(field, p.t(), members, budget)
}

/// Outcome of restricting a member set to a hyperplane: the multiset of
/// intersections in input order, plus the index pairs that collided onto
/// the same subspace.
#[derive(Clone, Debug)]
pub struct HyperplaneRestriction {
    pub intersections: Vec<Subspace>,
    pub collisions: Vec<(usize, usize)>,
}

/// Intersects every member with the hyperplane `h`. Dimensions drop by at
/// most one; coordinates stay in the ambient space.
pub fn restrict_to_hyperplane(
    field: &FieldContext,
    members: &[Subspace],
    h: &Subspace,
) -> Result<HyperplaneRestriction> {
    if members.is_empty() {
        return Ok(HyperplaneRestriction {
            intersections: Vec::new(),
            collisions: Vec::new(),
        });
    }
    let v = common_ambient(members)?;
    if h.ambient() != v || h.dim() + 1 != v {
        return Err(domain("restriction subspace is not a hyperplane of the common ambient"));
    }
    let mut intersections = Vec::with_capacity(members.len());
    for m in members {
        intersections.push(m.meet(h, field)?);
    }
    let mut seen: HashMap<&Subspace, usize> = HashMap::new();
    let mut collisions = Vec::new();
    for (i, s) in intersections.iter().enumerate() {
        if let Some(&first) = seen.get(s) {
            collisions.push((first, i));
        } else {
            seen.insert(s, i);
        }
    }
    Ok(HyperplaneRestriction {
        intersections,
        collisions,
    })
}

/// Completes a partial member set to a t-partition by adding every
/// uncovered t-subspace. Fails with a witness when some t-subspace is
/// already covered twice.
pub fn complete_with_t_subspaces(
    field: &FieldContext,
    t: u32,
    partial: &[Subspace],
    budget: &Budget,
) -> Result<TPartition> {
    if t == 0 {
        return Err(domain("t must be positive"));
    }
    if partial.is_empty() {
        return Err(domain(
            "completion of an empty set has no ambient dimension; pass the trivial partition instead",
        ));
    }
    let v = validate_members(field, t, partial)?;
    let (all_t, counts) = cover_counts(field, v, t, partial, budget)?;
    if let Some(i) = counts.iter().position(|&c| c > 1) {
        return Err(invalid(format!(
            "t-subspace [{}] covered {} times; cannot complete",
            all_t[i].text_rows().join(", "),
            counts[i]
        )));
    }
    let mut members: BTreeSet<Subspace> = partial.iter().cloned().collect();
    for (i, s) in all_t.iter().enumerate() {
        if counts[i] == 0 {
            members.insert(s.clone());
        }
    }
    TPartition::from_verified_parts(field.order(), v, t, members)
}
