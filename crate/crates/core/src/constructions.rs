//! Explicit constructions: lifted MRD codes, the MRD-based partitions, the
//! two partitions of `F_q^7` carved out of a hyperplane section, subfield
//! spreads, unions of disjoint spreads, full grids, lifts, and direct sums
//! of divisible sets.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::budget::Budget;
use crate::counting::{gaussian_u64, q_pow};
use crate::divisibility::SubspaceSet;
use crate::error::{budget as budget_err, domain, invalid, Result};
use crate::field::FieldContext;
use crate::gabidulin::{gabidulin_codeword, polynomial_basis};
use crate::matrix::Matrix;
use crate::partition::{complete_with_t_subspaces, restrict_to_hyperplane, TPartition};
use crate::subspace::{
    coordinates_in, enumerate_subspaces, is_disjoint_from, min_distance, points, subspaces_of,
    Subspace,
};

/// A lifted maximum rank distance code: `k`-subspaces of `F_q^v` with
/// minimum subspace distance `d`, all meeting a fixed `(v-k)`-subspace
/// trivially.
#[derive(Clone, Debug)]
pub struct LiftedMrdCode {
    pub q: u32,
    pub v: u32,
    pub k: u32,
    pub d: u32,
    pub codewords: Vec<Subspace>,
    /// The `(v-k)`-subspace every codeword is disjoint from.
    pub special: Subspace,
}

impl LiftedMrdCode {
    pub fn size(&self) -> u64 {
        self.codewords.len() as u64
    }

    /// `M(q,k,v,d) = q^{max(k, v-k) * (min(k, v-k) - d/2 + 1)}`.
    pub fn expected_size(q: u64, k: u32, v: u32, d: u32) -> BigUint {
        let m = k.max(v - k) as u64;
        let l = (k.min(v - k) - d / 2 + 1) as u64;
        q_pow(q, m * l)
    }

    /// Full verification: exact minimum distance, disjointness from the
    /// special subspace, and the perfect cover of the
    /// `(min(k,v-k) - d/2 + 1)`-subspaces disjoint from it. Quadratic in
    /// the code size; intended for desk-scale parameters.
    pub fn verify(&self, field: &FieldContext, budget: &Budget) -> Result<()> {
        let dist = min_distance(field, &self.codewords)?;
        if dist != self.d {
            return Err(invalid(format!(
                "minimum distance {dist} differs from the design distance {}",
                self.d
            )));
        }
        if !is_disjoint_from(field, &self.codewords, &self.special)? {
            return Err(invalid("a codeword meets the special subspace"));
        }
        // perfect cover of the small subspaces avoiding the special one
        let small = self.k.min(self.v - self.k) - self.d / 2 + 1;
        let mut covered: BTreeSet<Subspace> = BTreeSet::new();
        let mut covered_total = 0u64;
        for c in &self.codewords {
            for s in subspaces_of(field, c, small, budget)? {
                covered_total += 1;
                if !covered.insert(s) {
                    return Err(invalid("a small subspace is covered twice"));
                }
            }
        }
        let mut expected = 0u64;
        for s in enumerate_subspaces(field, self.v, small, budget)? {
            if s.is_disjoint(&self.special, field)? {
                expected += 1;
                if !covered.contains(&s) {
                    return Err(invalid("a small subspace disjoint from the special one is uncovered"));
                }
            }
        }
        if expected != covered_total {
            return Err(invalid("cover count mismatch"));
        }
        Ok(())
    }
}

/// Builds the lifted MRD code of `k`-subspaces in `F_q^v` with designed
/// minimum subspace distance `d` (even).
///
/// Codewords are the row spaces of `[I_k | A]` where `A` runs over a
/// Gabidulin code of `k x (v-k)` matrices with minimum rank distance
/// `d/2`; when `k > v-k` the evaluation happens on the transposed side.
/// The special subspace is the row space of `[0 | I_{v-k}]`.
pub fn lifted_mrd(
    field: &FieldContext,
    v: u32,
    k: u32,
    d: u32,
    budget: &Budget,
) -> Result<LiftedMrdCode> {
    if k == 0 || k >= v {
        return Err(domain(format!("need 0 < k < v, got k={k}, v={v}")));
    }
    if d == 0 || d % 2 != 0 || d > 2 * k.min(v - k) {
        return Err(domain(format!(
            "need even d with 0 < d <= 2*min(k, v-k) = {}, got {d}",
            2 * k.min(v - k)
        )));
    }
    let q = field.order() as u64;
    let m = k.max(v - k);
    let nn = k.min(v - k);
    let delta = d / 2;
    let l = nn - delta + 1;
    let size = LiftedMrdCode::expected_size(q, k, v, d);
    let size: u64 = u64::try_from(&size)
        .ok()
        .filter(|&s| s <= budget.max_subspaces)
        .ok_or_else(|| {
            budget_err(format!(
                "code size {size} exceeds the budget of {}",
                budget.max_subspaces
            ))
        })?;
    let ext = field.extension_of(m)?;
    let basis = polynomial_basis(&ext, nn as usize)?;
    let qm = ext.order() as u64;
    let mut codewords = Vec::with_capacity(size as usize);
    for idx in 0..size {
        let mut coeffs = Vec::with_capacity(l as usize);
        let mut rest = idx;
        for _ in 0..l {
            coeffs.push((rest % qm) as u32);
            rest /= qm;
        }
        let eval = gabidulin_codeword(&ext, &basis, &coeffs)?;
        let a = if k <= v - k { eval } else { eval.transpose() };
        debug_assert_eq!(a.n_rows(), k as usize);
        debug_assert_eq!(a.n_cols(), (v - k) as usize);
        let mut mat = Matrix::zeros(k as usize, v as usize);
        for r in 0..k as usize {
            mat.set(r, r, 1);
            for c in 0..(v - k) as usize {
                mat.set(r, k as usize + c, a.get(r, c));
            }
        }
        codewords.push(Subspace::from_matrix(field, v, &mat)?);
    }
    let mut special = Matrix::zeros((v - k) as usize, v as usize);
    for r in 0..(v - k) as usize {
        special.set(r, k as usize + r, 1);
    }
    Ok(LiftedMrdCode {
        q: field.order(),
        v,
        k,
        d,
        codewords,
        special: Subspace::from_matrix(field, v, &special)?,
    })
}

/// The `(t+1)`-partition built from a lifted MRD code: the codewords, one
/// `(v-k+t)`-subspace containing the special subspace, and the uncovered
/// `(t+1)`-subspaces.
///
/// Requires `k >= t+2` and `v >= 2k-t`; at `v = 2k-t` the added subspace
/// has dimension `k` as well.
pub fn mrd_partition(
    field: &FieldContext,
    v: u32,
    k: u32,
    t: u32,
    budget: &Budget,
) -> Result<TPartition> {
    if t == 0 || k < t + 2 {
        return Err(domain(format!("need t >= 1 and k >= t+2, got k={k}, t={t}")));
    }
    if v < 2 * k - t {
        return Err(domain(format!("need v >= 2k-t = {}, got {v}", 2 * k - t)));
    }
    let d = 2 * (k - t);
    let code = lifted_mrd(field, v, k, d, budget)?;
    // span of the special subspace and the first t unit vectors
    let mut extra = Matrix::zeros(t as usize, v as usize);
    for r in 0..t as usize {
        extra.set(r, r, 1);
    }
    let stacked = code.special.generator().stack(&extra);
    let added = Subspace::from_matrix(field, v, &stacked)?;
    debug_assert_eq!(added.dim(), v - k + t);
    let mut members = code.codewords;
    members.push(added);
    complete_with_t_subspaces(field, t + 1, &members, budget)
}

/// Variant selector for the hyperplane-section construction in dimension 7.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F27Variant {
    /// Adds one solid through the cut of the special subspace:
    /// type `4^{q^4+1} 3^{q^8-q^4} 2^*`.
    A,
    /// Adds `q^2+q+1` planes, one through each line of the cut:
    /// type `4^{q^4} 3^{q^8-q^4+q^2+q+1} 2^*`.
    B,
}

/// Builds a vector space 2-partition of `F_q^7` by cutting the lifted MRD
/// code of `q^8` solids in `F_q^8` with a hyperplane `H` not containing
/// the special solid `U`, then extending inside `H`.
///
/// The hyperplane is pinned to the least coordinate hyperplane `x_i = 0`
/// not containing `U`; all remaining choices are lexicographically least,
/// so the output is deterministic.
pub fn f27_construction(
    field: &FieldContext,
    variant: F27Variant,
    budget: &Budget,
) -> Result<TPartition> {
    let code = lifted_mrd(field, 8, 4, 6, budget)?;
    let u = &code.special;
    // least coordinate hyperplane x_i = 0 with U not inside it
    let mut hyperplane = None;
    for i in 0..8usize {
        let rows: Vec<Vec<u32>> = (0..8usize)
            .filter(|&j| j != i)
            .map(|j| {
                let mut r = vec![0u32; 8];
                r[j] = 1;
                r
            })
            .collect();
        let h = Subspace::from_rows(field, 8, &rows)?;
        if !h.contains(u, field)? {
            hyperplane = Some(h);
            break;
        }
    }
    let h = hyperplane.expect("some coordinate hyperplane misses the special solid");
    let cut = restrict_to_hyperplane(field, &code.codewords, &h)?;
    if !cut.collisions.is_empty() {
        return Err(invalid("hyperplane section collapsed two codewords"));
    }
    let w = u.meet(&h, field)?;
    debug_assert_eq!(w.dim(), 3);

    let mut members = cut.intersections;
    match variant {
        F27Variant::A => {
            // least solid of H through W: span W with the least point of H
            // outside W
            let p = points(field, 8, budget)?
                .into_iter()
                .find(|p| h.contains(p, field).unwrap() && !w.contains(p, field).unwrap())
                .expect("H strictly contains W");
            let solid = w.span(&p, field)?;
            debug_assert_eq!(solid.dim(), 4);
            members.push(solid);
        }
        F27Variant::B => {
            // the lex-least q^2+q+1 solids of H through W, paired with the
            // lines of W in enumeration order
            let r = gaussian_u64(3, 1, field.order() as u64)? as usize;
            let mut solids: BTreeSet<Subspace> = BTreeSet::new();
            for p in points(field, 8, budget)? {
                if h.contains(&p, field)? && !w.contains(&p, field)? {
                    solids.insert(w.span(&p, field)?);
                }
            }
            let solids: Vec<Subspace> = solids.into_iter().take(r).collect();
            if solids.len() != r {
                return Err(invalid("not enough solids through the cut"));
            }
            let lines_of_w = subspaces_of(field, &w, 2, budget)?;
            debug_assert_eq!(lines_of_w.len(), r);
            for (line, solid) in lines_of_w.iter().zip(&solids) {
                // least plane strictly between the line and the solid,
                // other than W itself
                let mut planes: BTreeSet<Subspace> = BTreeSet::new();
                for p in subspaces_of(field, solid, 1, budget)? {
                    if !line.contains(&p, field)? {
                        planes.insert(line.span(&p, field)?);
                    }
                }
                let plane = planes
                    .into_iter()
                    .find(|e| *e != w)
                    .expect("a solid holds q+1 planes through each of its lines");
                members.push(plane);
            }
        }
    }

    // move everything from H onto F_q^7 through the canonical basis of H
    let mut transported = Vec::with_capacity(members.len());
    for m in &members {
        let coords = coordinates_in(field, &h, m)?;
        transported.push(Subspace::from_matrix(field, 7, &coords)?);
    }
    complete_with_t_subspaces(field, 2, &transported, budget)
}

/// A t-spread of `F_q^{a t}`: pairwise disjoint t-subspaces covering every
/// point exactly once.
#[derive(Clone, Debug)]
pub struct Spread {
    pub q: u32,
    pub t: u32,
    pub a: u32,
    pub members: Vec<Subspace>,
}

impl Spread {
    pub fn ambient(&self) -> u32 {
        self.a * self.t
    }

    pub fn to_set(&self, field: &FieldContext) -> Result<SubspaceSet> {
        SubspaceSet::new(field, self.ambient(), self.t, self.members.clone())
    }
}

/// The subfield spread: each point of `F_{q^t}^a`, read through the
/// coordinate map of the degree-`t` extension, becomes a t-subspace of
/// `F_q^{at}`; together they partition the points.
pub fn subfield_spread(field: &FieldContext, t: u32, a: u32, budget: &Budget) -> Result<Spread> {
    if t == 0 || a < 2 {
        return Err(domain("need t >= 1 and a >= 2"));
    }
    let v = a * t;
    let q = field.order() as u64;
    let expected = (q_pow(q, v as u64) - BigUint::from(1u32)) / (q_pow(q, t as u64) - BigUint::from(1u32));
    let expected: u64 = u64::try_from(&expected)
        .ok()
        .filter(|&e| e <= budget.max_subspaces)
        .ok_or_else(|| budget_err(format!("spread size {expected} exceeds the budget")))?;
    let ext = field.extension_of(t)?;
    let qt = ext.order();
    let mut members = Vec::with_capacity(expected as usize);
    // projective representatives: last nonzero coordinate normalized to 1
    let mut vector = vec![0u32; a as usize];
    'outer: loop {
        // advance odometer
        let mut slot = 0usize;
        loop {
            if slot == vector.len() {
                break 'outer;
            }
            vector[slot] += 1;
            if vector[slot] < qt {
                break;
            }
            vector[slot] = 0;
            slot += 1;
        }
        let last_nonzero = vector.iter().rposition(|&x| x != 0).expect("nonzero vector");
        if vector[last_nonzero] != 1 {
            continue;
        }
        // rows: beta_j * w for the basis 1, x, ..., x^{t-1}
        let mut rows = Vec::with_capacity(t as usize);
        for j in 0..t as usize {
            let mut coords = vec![0u32; t as usize];
            coords[j] = 1;
            let beta = ext.from_coordinates(&coords)?;
            let mut row = Vec::with_capacity(v as usize);
            for &w in &vector {
                row.extend(ext.coordinates(ext.mul(beta, w)));
            }
            rows.push(row);
        }
        members.push(Subspace::from_rows(field, v, &rows)?);
    }
    if members.len() as u64 != expected {
        return Err(invalid("subfield spread has the wrong cardinality"));
    }
    Ok(Spread {
        q: field.order(),
        t,
        a,
        members,
    })
}

/// Finds `count` pairwise disjoint t-spreads of `F_q^{at}` (disjoint as
/// sets of t-subspaces), seeded with the subfield spread and extended by
/// exact-cover backtracking over the unused t-subspaces.
///
/// Search failure inside the node budget is an explicit refusal, not a
/// non-existence statement.
pub fn disjoint_spreads(
    field: &FieldContext,
    t: u32,
    a: u32,
    count: u32,
    budget: &Budget,
) -> Result<Vec<Spread>> {
    if count == 0 {
        return Err(domain("need at least one spread"));
    }
    let first = subfield_spread(field, t, a, budget)?;
    let v = first.ambient();
    let mut spreads = vec![first];
    if count == 1 {
        return Ok(spreads);
    }
    let pool = enumerate_subspaces(field, v, t, budget)?;
    let pts = points(field, v, budget)?;
    // point indices covered by each pool member
    let member_points: Vec<Vec<usize>> = pool
        .iter()
        .map(|m| {
            pts.iter()
                .enumerate()
                .filter(|(_, p)| m.contains(p, field).unwrap())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let index_of: std::collections::HashMap<&Subspace, usize> =
        pool.iter().enumerate().map(|(i, s)| (s, i)).collect();
    for m in &spreads[0].members {
        used.insert(index_of[m]);
    }
    let per_point: Vec<Vec<usize>> = {
        let mut by_point = vec![Vec::new(); pts.len()];
        for (mi, pts_of_m) in member_points.iter().enumerate() {
            for &pi in pts_of_m {
                by_point[pi].push(mi);
            }
        }
        by_point
    };
    let mut nodes = 0u64;
    for _ in 1..count {
        let mut covered = vec![false; pts.len()];
        let mut chosen: Vec<usize> = Vec::new();
        if !cover_dfs(
            &per_point,
            &member_points,
            &used,
            &mut covered,
            &mut chosen,
            &mut nodes,
            budget.max_nodes,
        ) {
            return Err(budget_err(format!(
                "no further disjoint spread found within {} search nodes; existence is not settled",
                budget.max_nodes
            )));
        }
        for &c in &chosen {
            used.insert(c);
        }
        spreads.push(Spread {
            q: field.order(),
            t,
            a,
            members: chosen.iter().map(|&c| pool[c].clone()).collect(),
        });
    }
    Ok(spreads)
}

/// Exact cover search: always branches on the least uncovered point.
fn cover_dfs(
    per_point: &[Vec<usize>],
    member_points: &[Vec<usize>],
    used: &BTreeSet<usize>,
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
    max_nodes: u64,
) -> bool {
    *nodes += 1;
    if *nodes > max_nodes {
        return false;
    }
    let Some(point) = covered.iter().position(|&c| !c) else {
        return true;
    };
    for &cand in &per_point[point] {
        if used.contains(&cand) || chosen.contains(&cand) {
            continue;
        }
        if member_points[cand].iter().any(|&p| covered[p]) {
            continue;
        }
        for &p in &member_points[cand] {
            covered[p] = true;
        }
        chosen.push(cand);
        if cover_dfs(per_point, member_points, used, covered, chosen, nodes, max_nodes) {
            return true;
        }
        chosen.pop();
        for &p in &member_points[cand] {
            covered[p] = false;
        }
    }
    false
}

/// The set of all t-subspaces of `F_q^v`.
pub fn all_t_subspaces(field: &FieldContext, v: u32, t: u32, budget: &Budget) -> Result<SubspaceSet> {
    let members = enumerate_subspaces(field, v, t, budget)?;
    SubspaceSet::new(field, v, t, members)
}

/// Lifts a set of t-subspaces of `F_q^v` to a set of `(t+s)`-subspaces of
/// `F_q^{v+s}` by summing each member with a fixed `s`-dimensional
/// complement on the appended coordinates. Cardinality is preserved; the
/// divisibility exponent carries over whenever `q^r` divides the
/// cardinality (callers check with the spectrum).
pub fn lift_set(field: &FieldContext, set: &SubspaceSet, s: u32) -> Result<SubspaceSet> {
    if s == 0 {
        return Ok(set.clone());
    }
    let v = set.ambient() + s;
    let t = set.t() + s;
    let mut members = Vec::with_capacity(set.len());
    for m in set.members() {
        let old = m.generator();
        let mut mat = Matrix::zeros(t as usize, v as usize);
        for r in 0..old.n_rows() {
            for c in 0..old.n_cols() {
                mat.set(r, c, old.get(r, c));
            }
        }
        for j in 0..s as usize {
            mat.set(old.n_rows() + j, set.ambient() as usize + j, 1);
        }
        members.push(Subspace::from_matrix(field, v, &mat)?);
    }
    SubspaceSet::new(field, v, t, members)
}

/// Direct-sum embedding of two sets of t-subspaces into
/// `F_q^{v1+v2}`; cardinalities add.
pub fn concat_sets(
    field: &FieldContext,
    n1: &SubspaceSet,
    n2: &SubspaceSet,
) -> Result<SubspaceSet> {
    if n1.q() != n2.q() {
        return Err(domain("sets over different fields"));
    }
    if n1.t() != n2.t() {
        return Err(domain("sets of different member dimensions"));
    }
    let t = n1.t();
    let v = n1.ambient() + n2.ambient();
    let mut members = Vec::with_capacity(n1.len() + n2.len());
    for m in n1.members() {
        let old = m.generator();
        let mut mat = Matrix::zeros(t as usize, v as usize);
        for r in 0..old.n_rows() {
            for c in 0..old.n_cols() {
                mat.set(r, c, old.get(r, c));
            }
        }
        members.push(Subspace::from_matrix(field, v, &mat)?);
    }
    for m in n2.members() {
        let old = m.generator();
        let mut mat = Matrix::zeros(t as usize, v as usize);
        for r in 0..old.n_rows() {
            for c in 0..old.n_cols() {
                mat.set(r, n1.ambient() as usize + c, old.get(r, c));
            }
        }
        members.push(Subspace::from_matrix(field, v, &mat)?);
    }
    SubspaceSet::new(field, v, t, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisibility::{is_divisible, max_divisibility, spectrum};
    use crate::partition::{dimension_check, packing_check, verify_partition};

    fn f2() -> std::sync::Arc<FieldContext> {
        FieldContext::make_field(2, 1).unwrap()
    }

    #[test]
    fn lifted_mrd_sizes() {
        let f = f2();
        let b = Budget::default();
        assert_eq!(lifted_mrd(&f, 8, 4, 6, &b).unwrap().size(), 256);
        assert_eq!(lifted_mrd(&f, 7, 3, 4, &b).unwrap().size(), 256);
        assert_eq!(lifted_mrd(&f, 4, 2, 4, &b).unwrap().size(), 4);
        assert_eq!(
            LiftedMrdCode::expected_size(2, 4, 8, 6),
            BigUint::from(256u32)
        );
    }

    #[test]
    fn lifted_mrd_small_checks() {
        let f = f2();
        let b = Budget::default();
        let code = lifted_mrd(&f, 4, 2, 4, &b).unwrap();
        assert_eq!(min_distance(&f, &code.codewords).unwrap(), 4);
        code.verify(&f, &b).unwrap();
        let code = lifted_mrd(&f, 6, 3, 4, &b).unwrap();
        assert_eq!(code.size(), 64);
        code.verify(&f, &b).unwrap();
    }

    #[test]
    fn lifted_mrd_parameter_validation() {
        let f = f2();
        let b = Budget::default();
        assert!(lifted_mrd(&f, 4, 2, 3, &b).is_err()); // odd d
        assert!(lifted_mrd(&f, 4, 2, 6, &b).is_err()); // d too large
        assert!(lifted_mrd(&f, 4, 4, 2, &b).is_err()); // k = v
    }

    #[test]
    fn mrd_partition_v5_edge_case() {
        // v = 2k - t: type k^{q^k + 1} (t+1)^*
        let f = f2();
        let b = Budget::default();
        let p = mrd_partition(&f, 5, 3, 1, &b).unwrap();
        assert_eq!(p.ptype().multiplicity(3), 9);
        assert_eq!(p.t(), 2);
        assert!(packing_check(p.ptype(), 2).unwrap());
        assert!(dimension_check(p.ptype()));
    }

    #[test]
    fn mrd_partition_v7() {
        let f = f2();
        let b = Budget::default();
        let p = mrd_partition(&f, 7, 3, 1, &b).unwrap();
        assert_eq!(p.ptype().multiplicity(5), 1);
        assert_eq!(p.ptype().multiplicity(3), 256);
        // m_2 from the packing condition:
        // [7,2] - [5,2] - 256*[3,2] = 2667 - 155 - 1792 = 720
        assert_eq!(p.ptype().multiplicity(2), 720);
    }

    #[test]
    fn mrd_partition_rejects_small_k() {
        let f = f2();
        let b = Budget::default();
        assert!(mrd_partition(&f, 5, 2, 1, &b).is_err());
    }

    #[test]
    fn f27_variant_a_type() {
        let f = f2();
        let b = Budget::default();
        let p = f27_construction(&f, F27Variant::A, &b).unwrap();
        assert_eq!(p.ambient(), 7);
        assert_eq!(p.ptype().multiplicity(4), 17);
        assert_eq!(p.ptype().multiplicity(3), 240);
        // m_2 from the packing condition: 2667 - 17*35 - 240*7 = 392
        assert_eq!(p.ptype().multiplicity(2), 392);
        // the 17 solids pairwise meet in exactly a point
        let solids = p.members_of_dim(4);
        for i in 0..solids.len() {
            for j in (i + 1)..solids.len() {
                assert_eq!(solids[i].meet(&solids[j], &f).unwrap().dim(), 1);
            }
        }
    }

    #[test]
    fn f27_variant_b_type() {
        let f = f2();
        let b = Budget::default();
        let p = f27_construction(&f, F27Variant::B, &b).unwrap();
        assert_eq!(p.ptype().multiplicity(4), 16);
        assert_eq!(p.ptype().multiplicity(3), 247);
        // 2667 - 16*35 - 247*7 = 378
        assert_eq!(p.ptype().multiplicity(2), 378);
    }

    #[test]
    fn f27_outputs_verify_from_scratch() {
        let f = f2();
        let b = Budget::default();
        for variant in [F27Variant::A, F27Variant::B] {
            let p = f27_construction(&f, variant, &b).unwrap();
            let members: Vec<Subspace> = p.members().cloned().collect();
            let report = verify_partition(&f, 2, &members, &b).unwrap();
            assert!(report.valid);
        }
    }

    #[test]
    fn subfield_spread_small() {
        let f = f2();
        let b = Budget::default();
        let s = subfield_spread(&f, 2, 2, &b).unwrap();
        assert_eq!(s.members.len(), 5);
        let s = subfield_spread(&f, 3, 2, &b).unwrap();
        assert_eq!(s.members.len(), 9);
        // every point of the ambient covered exactly once
        let pts = points(&f, 6, &b).unwrap();
        for p in &pts {
            let covering = s
                .members
                .iter()
                .filter(|m| m.contains(p, &f).unwrap())
                .count();
            assert_eq!(covering, 1);
        }
    }

    #[test]
    fn spread_min_distance() {
        let f = f2();
        let b = Budget::default();
        let s = subfield_spread(&f, 2, 2, &b).unwrap();
        assert_eq!(min_distance(&f, &s.members).unwrap(), 4);
    }

    #[test]
    fn disjoint_spreads_pair_and_union_divisibility() {
        let f = f2();
        let b = Budget::default();
        let spreads = disjoint_spreads(&f, 2, 2, 2, &b).unwrap();
        assert_eq!(spreads.len(), 2);
        let mut all = spreads[0].members.clone();
        all.extend(spreads[1].members.clone());
        let union = SubspaceSet::new(&f, 4, 2, all).unwrap();
        assert_eq!(union.len(), 10);
        // q^{(a-1)t+s} with a=2, t=2, s=1: 8-divisible
        assert!(is_divisible(&f, &union, 3, &b).unwrap());
        let spec = spectrum(&f, &union, &b).unwrap();
        assert_eq!(spec.counts, std::collections::BTreeMap::from([(2u64, 15u64)]));
    }

    #[test]
    fn disjoint_spreads_count_one_is_subfield() {
        let f = f2();
        let b = Budget::default();
        let spreads = disjoint_spreads(&f, 2, 2, 1, &b).unwrap();
        let direct = subfield_spread(&f, 2, 2, &b).unwrap();
        assert_eq!(spreads[0].members, direct.members);
    }

    #[test]
    fn all_grid_divisibility() {
        let f = f2();
        let b = Budget::default();
        let grid = all_t_subspaces(&f, 3, 2, &b).unwrap();
        assert_eq!(grid.len(), 7);
        assert_eq!(max_divisibility(&f, &grid, &b).unwrap(), 1);
        let grid = all_t_subspaces(&f, 4, 2, &b).unwrap();
        assert_eq!(grid.len(), 35);
        // q^{v-t} = 4
        assert!(is_divisible(&f, &grid, 2, &b).unwrap());
    }

    /// 2-divisible point sets used as lift seeds: the affine plane of
    /// F_2^3 (the four points off a hyperplane).
    fn affine_plane_points(f: &FieldContext) -> SubspaceSet {
        let b = Budget::default();
        let hyper = crate::subspace::hyperplanes(f, 3, &b).unwrap();
        let pts = points(f, 3, &b).unwrap();
        let outside: Vec<Subspace> = pts
            .into_iter()
            .filter(|p| !hyper[0].contains(p, f).unwrap())
            .collect();
        assert_eq!(outside.len(), 4);
        SubspaceSet::new(f, 3, 1, outside).unwrap()
    }

    #[test]
    fn lift_affine_plane_to_lines() {
        let f = f2();
        let b = Budget::default();
        let affine = affine_plane_points(&f);
        assert!(is_divisible(&f, &affine, 1, &b).unwrap());
        let lifted = lift_set(&f, &affine, 1).unwrap();
        assert_eq!(lifted.len(), 4);
        assert_eq!(lifted.t(), 2);
        assert_eq!(lifted.ambient(), 4);
        assert!(is_divisible(&f, &lifted, 1, &b).unwrap());
    }

    #[test]
    fn lift_zero_is_identity() {
        let f = f2();
        let affine = affine_plane_points(&f);
        assert_eq!(lift_set(&f, &affine, 0).unwrap(), affine);
    }

    #[test]
    fn lift_affine_solid_keeps_original_exponent() {
        let f = f2();
        let b = Budget::default();
        // affine solid: 8 points of F_2^4 off a hyperplane; 4-divisible
        let hyper = crate::subspace::hyperplanes(&f, 4, &b).unwrap();
        let outside: Vec<Subspace> = points(&f, 4, &b)
            .unwrap()
            .into_iter()
            .filter(|p| !hyper[0].contains(p, &f).unwrap())
            .collect();
        let solid = SubspaceSet::new(&f, 4, 1, outside).unwrap();
        assert_eq!(solid.len(), 8);
        assert!(is_divisible(&f, &solid, 2, &b).unwrap());
        let lifted = lift_set(&f, &solid, 1).unwrap();
        assert!(max_divisibility(&f, &lifted, &b).unwrap() >= 2);
    }

    #[test]
    fn concat_adds_cardinalities() {
        let f = f2();
        let b = Budget::default();
        let affine = affine_plane_points(&f);
        let lifted = lift_set(&f, &affine, 1).unwrap(); // 4 lines in F_2^4
        let spread = subfield_spread(&f, 2, 2, &b).unwrap().to_set(&f).unwrap();
        let sum = concat_sets(&f, &lifted, &spread).unwrap();
        assert_eq!(sum.len(), 9);
        assert_eq!(sum.ambient(), 8);
        assert!(is_divisible(&f, &sum, 1, &b).unwrap());
    }

    #[test]
    fn concat_rejects_mismatched_t() {
        let f = f2();
        let b = Budget::default();
        let affine = affine_plane_points(&f);
        let spread = subfield_spread(&f, 2, 2, &b).unwrap().to_set(&f).unwrap();
        assert!(concat_sets(&f, &affine, &spread).is_err());
    }

    #[test]
    fn hole_sets_of_partitions_are_divisible() {
        // the 2-subspace members of a 2-partition whose other members all
        // have dimension >= k are q^{k-t}-divisible
        let f = f2();
        let b = Budget::default();
        let p = mrd_partition(&f, 5, 3, 1, &b).unwrap();
        let holes = SubspaceSet::new(&f, 5, 2, p.members_of_dim(2)).unwrap();
        // k = 3, t = 2: 2-divisible
        assert!(is_divisible(&f, &holes, 1, &b).unwrap());
    }
}
