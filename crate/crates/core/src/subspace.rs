//! Canonical subspaces of `F_q^v`: enumeration, lattice operations,
//! duality, and the subspace metric.
//!
//! A subspace is identified with its reduced-row-echelon generator matrix,
//! which is unique per row space. Two `Subspace` values are equal exactly
//! when they are the same subspace of the same ambient space. Enumeration
//! order is ascending lexicographic on the flattened canonical matrix and
//! is pinned: golden files and witnesses depend on it.

use crate::budget::Budget;
use crate::counting::gaussian;
use crate::error::{budget as budget_err, domain, Result};
use crate::field::FieldContext;
use crate::matrix::Matrix;

const DIGITS: &[u8; 16] = b"0123456789abcdef";

/// A `k`-subspace of `F_q^v` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    ambient: u32,
    mat: Matrix,
}

impl Subspace {
    /// Canonicalizes an arbitrary generator matrix.
    pub fn from_matrix(field: &FieldContext, ambient: u32, mat: &Matrix) -> Result<Subspace> {
        if mat.n_cols() != ambient as usize {
            return Err(domain(format!(
                "generator has {} columns for ambient dimension {ambient}",
                mat.n_cols()
            )));
        }
        if mat.entries().iter().any(|&x| x >= field.order()) {
            return Err(domain("matrix entry is not a valid field element index"));
        }
        Ok(Subspace {
            ambient,
            mat: mat.rref(field).matrix,
        })
    }

    pub fn from_rows(field: &FieldContext, ambient: u32, rows: &[Vec<u32>]) -> Result<Subspace> {
        let mat = Matrix::from_rows(rows, ambient as usize)?;
        Self::from_matrix(field, ambient, &mat)
    }

    /// Trusted constructor for matrices already in canonical form.
    pub(crate) fn from_canonical(ambient: u32, mat: Matrix) -> Subspace {
        Subspace { ambient, mat }
    }

    pub fn zero(ambient: u32) -> Subspace {
        Subspace {
            ambient,
            mat: Matrix::zeros(0, ambient as usize),
        }
    }

    pub fn full(ambient: u32) -> Subspace {
        Subspace {
            ambient,
            mat: Matrix::identity(ambient as usize),
        }
    }

    pub fn dim(&self) -> u32 {
        self.mat.n_rows() as u32
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    /// Canonical generator matrix (rref, full rank, no zero rows).
    pub fn generator(&self) -> &Matrix {
        &self.mat
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(domain(format!(
                "ambient mismatch: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Row space of the stacked generators.
    pub fn span(&self, other: &Subspace, field: &FieldContext) -> Result<Subspace> {
        self.check_ambient(other)?;
        let stacked = self.mat.stack(&other.mat);
        Ok(Subspace {
            ambient: self.ambient,
            mat: stacked.rref(field).matrix,
        })
    }

    /// Intersection, computed as `dual(span(dual(A), dual(B)))`.
    pub fn meet(&self, other: &Subspace, field: &FieldContext) -> Result<Subspace> {
        self.check_ambient(other)?;
        let da = self.dual(field);
        let db = other.dual(field);
        Ok(da.span(&db, field)?.dual(field))
    }

    /// Orthogonal complement under the standard dot product.
    pub fn dual(&self, field: &FieldContext) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        Subspace {
            ambient: self.ambient,
            mat: self.mat.kernel_basis(field),
        }
    }

    /// True when `other` is contained in `self`.
    pub fn contains(&self, other: &Subspace, field: &FieldContext) -> Result<bool> {
        self.check_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(other
            .mat
            .rows_iter()
            .all(|row| self.reduces_to_zero(row, field)))
    }

    /// Reduces a vector against the canonical generators; zero remainder
    /// means membership in the row space.
    fn reduces_to_zero(&self, row: &[u32], field: &FieldContext) -> bool {
        let mut v = row.to_vec();
        for r in 0..self.mat.n_rows() {
            let pivot = match self.mat.row(r).iter().position(|&x| x != 0) {
                Some(p) => p,
                None => continue,
            };
            let c = v[pivot];
            if c != 0 {
                for j in 0..v.len() {
                    let t = field.mul(c, self.mat.get(r, j));
                    v[j] = field.sub(v[j], t);
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Subspace metric `dim(U+W) - dim(U \cap W)`.
    pub fn distance(&self, other: &Subspace, field: &FieldContext) -> Result<u32> {
        self.check_ambient(other)?;
        let span_rank = self.mat.stack(&other.mat).rank(field) as u32;
        Ok(2 * span_rank - self.dim() - other.dim())
    }

    /// True when the intersection is the zero space.
    pub fn is_disjoint(&self, other: &Subspace, field: &FieldContext) -> Result<bool> {
        self.check_ambient(other)?;
        let span_rank = self.mat.stack(&other.mat).rank(field) as u32;
        Ok(span_rank == self.dim() + other.dim())
    }

    /// Canonical text rows: one string of `v` digits per generator row,
    /// entries rendered as hex digits (`q <= 16`).
    pub fn text_rows(&self) -> Vec<String> {
        self.mat
            .rows_iter()
            .map(|row| row.iter().map(|&e| DIGITS[e as usize] as char).collect())
            .collect()
    }

    /// Parses rows in the canonical text form and canonicalizes.
    pub fn from_text_rows(field: &FieldContext, ambient: u32, rows: &[String]) -> Result<Subspace> {
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != ambient as usize {
                return Err(crate::error::Error::Parse(format!(
                    "row '{row}' does not have {ambient} digits"
                )));
            }
            let mut entries = Vec::with_capacity(row.len());
            for ch in row.chars() {
                let val = DIGITS
                    .iter()
                    .position(|&d| d as char == ch)
                    .ok_or_else(|| crate::error::Error::Parse(format!("bad digit '{ch}'")))?;
                entries.push(val as u32);
            }
            parsed.push(entries);
        }
        Self::from_rows(field, ambient, &parsed)
    }
}

fn enumeration_guard(v: u32, k: u32, q: u64, budget: &Budget) -> Result<u64> {
    let count = gaussian(v as u64, k as u64, q)?;
    match u64::try_from(&count) {
        Ok(c) if c <= budget.max_subspaces => Ok(c),
        _ => Err(budget_err(format!(
            "enumeration of [{v} choose {k}]_{q} = {count} subspaces exceeds the budget of {}",
            budget.max_subspaces
        ))),
    }
}

/// All `k`-subspaces of `F_q^v` in ascending lexicographic order of their
/// canonical matrices.
pub fn enumerate_subspaces(
    field: &FieldContext,
    v: u32,
    k: u32,
    budget: &Budget,
) -> Result<Vec<Subspace>> {
    if k > v {
        return Err(domain(format!("k = {k} exceeds v = {v}")));
    }
    let expected = enumeration_guard(v, k, field.order() as u64, budget)?;
    let v = v as usize;
    let k = k as usize;
    let q = field.order();
    let mut out = Vec::with_capacity(expected as usize);
    if k == 0 {
        out.push(Subspace::zero(v as u32));
        return Ok(out);
    }

    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row, col) with col right of the row's pivot and
        // not a pivot column itself
        let mut free = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in (p + 1)..v {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let mut assignment = vec![0u32; free.len()];
        loop {
            let mut mat = Matrix::zeros(k, v);
            for (r, &p) in pivots.iter().enumerate() {
                mat.set(r, p, 1);
            }
            for (slot, &(r, c)) in free.iter().enumerate() {
                mat.set(r, c, assignment[slot]);
            }
            out.push(Subspace::from_canonical(v as u32, mat));
            // odometer
            let mut slot = 0;
            loop {
                if slot == assignment.len() {
                    break;
                }
                assignment[slot] += 1;
                if assignment[slot] < q {
                    break;
                }
                assignment[slot] = 0;
                slot += 1;
            }
            if slot == assignment.len() {
                break;
            }
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if pivots[i] < v - (k - i) {
                pivots[i] += 1;
                for j in (i + 1)..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                pivots.clear();
                break;
            }
        }
        if pivots.is_empty() {
            break;
        }
    }
    debug_assert_eq!(out.len() as u64, expected);
    out.sort_unstable();
    Ok(out)
}

/// All points (1-subspaces) of `F_q^v`.
pub fn points(field: &FieldContext, v: u32, budget: &Budget) -> Result<Vec<Subspace>> {
    enumerate_subspaces(field, v, 1, budget)
}

/// All hyperplanes of `F_q^v`, enumerated as duals of the points.
pub fn hyperplanes(field: &FieldContext, v: u32, budget: &Budget) -> Result<Vec<Subspace>> {
    Ok(points(field, v, budget)?
        .iter()
        .map(|p| p.dual(field))
        .collect())
}

/// `k'`-subspaces contained in `outer`, transported from an abstract
/// enumeration of `F_q^{dim outer}` through the canonical generators.
pub fn subspaces_of(
    field: &FieldContext,
    outer: &Subspace,
    k: u32,
    budget: &Budget,
) -> Result<Vec<Subspace>> {
    let inner = enumerate_subspaces(field, outer.dim(), k, budget)?;
    Ok(inner
        .iter()
        .map(|s| transport(field, outer, s.generator()))
        .collect())
}

/// Maps a subspace of the abstract space `F_q^{dim outer}` (given by its
/// generator matrix) onto a subspace of the ambient space through the
/// canonical basis of `outer`.
pub fn transport(field: &FieldContext, outer: &Subspace, abstract_gen: &Matrix) -> Subspace {
    debug_assert_eq!(abstract_gen.n_cols(), outer.dim() as usize);
    let rows = abstract_gen.mul(outer.generator(), field);
    Subspace::from_canonical(outer.ambient(), rows.rref(field).matrix)
}

/// Coordinates of `member` with respect to the canonical basis of `outer`;
/// errors when `member` is not contained in `outer`.
pub fn coordinates_in(
    field: &FieldContext,
    outer: &Subspace,
    member: &Subspace,
) -> Result<Matrix> {
    let gen = outer.generator();
    let pivots: Vec<usize> = gen
        .rows_iter()
        .map(|row| row.iter().position(|&x| x != 0).expect("canonical row"))
        .collect();
    let k = outer.dim() as usize;
    let mut rows = Vec::with_capacity(member.dim() as usize);
    for row in member.generator().rows_iter() {
        let coords: Vec<u32> = pivots.iter().map(|&p| row[p]).collect();
        rows.push(coords);
    }
    let coords = Matrix::from_rows(&rows, k)?;
    // containment check: coords * gen must reproduce the member rows
    let back = coords.mul(gen, field);
    if back != *member.generator() {
        return Err(domain("subspace is not contained in the given outer subspace"));
    }
    Ok(coords)
}

/// Minimum pairwise subspace distance of a code.
pub fn min_distance(field: &FieldContext, code: &[Subspace]) -> Result<u32> {
    if code.len() < 2 {
        return Err(domain("minimum distance needs at least two codewords"));
    }
    let mut best = u32::MAX;
    for i in 0..code.len() {
        for j in (i + 1)..code.len() {
            best = best.min(code[i].distance(&code[j], field)?);
        }
    }
    Ok(best)
}

/// True when every codeword meets `u` in the zero space only.
pub fn is_disjoint_from(field: &FieldContext, code: &[Subspace], u: &Subspace) -> Result<bool> {
    for c in code {
        if !c.is_disjoint(u, field)? {
            return Ok(false);
        }
    }
    Ok(true)
}
