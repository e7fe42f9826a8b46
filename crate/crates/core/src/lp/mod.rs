//! Exact rational linear and integer programs over the plane variables of
//! `F_2^v`, with a deterministic textual export.
//!
//! Everything is exact: coefficients, right-hand sides, and optima are
//! `BigRational`; there is no floating point on any path.

mod branch;
mod export;
mod simplex;

pub use branch::{solve_ilp_small, IlpResult, IlpStatus, DEFAULT_ILP_NODE_BUDGET};
pub use export::export_lp;
pub use simplex::{solve_lp, solve_lp_with_deadline, LpSolution, LpStatus};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::budget::Budget;
use crate::bounds::f_function;
use crate::error::{domain, Result};
use crate::field::FieldContext;
use crate::subspace::{enumerate_subspaces, subspaces_of, Subspace};

/// Constraint relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// A variable of the model, optionally tagged with the subspace it stands
/// for.
#[derive(Clone, Debug)]
pub struct LpVar {
    pub name: String,
    pub binary: bool,
    pub subspace: Option<Subspace>,
}

/// One linear constraint: sparse terms, relation, exact right-hand side.
#[derive(Clone, Debug)]
pub struct LpConstraint {
    pub name: String,
    pub terms: Vec<(usize, BigRational)>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// An exact linear/integer program. Objective sense is maximization.
#[derive(Clone, Debug, Default)]
pub struct LpModel {
    pub vars: Vec<LpVar>,
    /// Sparse objective coefficients.
    pub objective: Vec<(usize, BigRational)>,
    pub constraints: Vec<LpConstraint>,
}

impl LpModel {
    pub fn new() -> LpModel {
        LpModel::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, binary: bool) -> usize {
        self.vars.push(LpVar {
            name: name.into(),
            binary,
            subspace: None,
        });
        self.vars.len() - 1
    }

    pub fn add_tagged_var(&mut self, name: impl Into<String>, binary: bool, s: Subspace) -> usize {
        self.vars.push(LpVar {
            name: name.into(),
            binary,
            subspace: Some(s),
        });
        self.vars.len() - 1
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, BigRational)>) -> Result<()> {
        for &(j, _) in &terms {
            self.check_var(j)?;
        }
        self.objective = terms;
        Ok(())
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, BigRational)>,
        relation: Relation,
        rhs: BigRational,
    ) -> Result<()> {
        for &(j, _) in &terms {
            self.check_var(j)?;
        }
        self.constraints.push(LpConstraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
        Ok(())
    }

    fn check_var(&self, j: usize) -> Result<()> {
        if j >= self.vars.len() {
            return Err(domain(format!("variable index {j} out of range")));
        }
        Ok(())
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }
}

pub(crate) fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Builds the plane-packing integer program for `F_2^v` around a set of
/// solids pairwise meeting in exactly a point.
///
/// One binary variable per plane, objective `sum x_E`. Every line yields a
/// constraint: equality with zero when the line lies in a solid of `S`,
/// else `<= 1`. For `v = 7` the per-point cap `sum_{P <= E} x_E <=
/// f(tau(P))` is added, where `tau(P)` counts the solids through `P`; the
/// cap is backed by the classified partition types of `F_2^6` and is
/// unsound elsewhere, so it is emitted for `v = 7` only.
pub fn build_ilp(
    field: &FieldContext,
    v: u32,
    solids: &[Subspace],
    budget: &Budget,
) -> Result<LpModel> {
    if field.order() != 2 {
        return Err(domain("the plane-packing model is specific to q = 2"));
    }
    if v < 4 {
        return Err(domain("need v >= 4"));
    }
    if !solids.is_empty() && v != 7 {
        return Err(domain("solid sets are only supported in the v = 7 model"));
    }
    for (i, s) in solids.iter().enumerate() {
        if s.dim() != 4 || s.ambient() != v {
            return Err(domain("set members must be solids of the ambient space"));
        }
        for other in &solids[i + 1..] {
            if s.meet(other, field)?.dim() != 1 {
                return Err(domain("solids must pairwise intersect in exactly a point"));
            }
        }
    }
    let planes = enumerate_subspaces(field, v, 3, budget)?;
    let lines = enumerate_subspaces(field, v, 2, budget)?;
    let line_index: std::collections::HashMap<&Subspace, usize> =
        lines.iter().enumerate().map(|(i, l)| (l, i)).collect();

    let mut model = LpModel::new();
    let mut objective = Vec::with_capacity(planes.len());
    for (i, p) in planes.iter().enumerate() {
        let var = model.add_tagged_var(format!("xE{i}"), true, p.clone());
        objective.push((var, BigRational::one()));
    }
    model.set_objective(objective)?;

    // planes through each line
    let mut planes_on_line: Vec<Vec<usize>> = vec![Vec::new(); lines.len()];
    for (pi, p) in planes.iter().enumerate() {
        for l in subspaces_of(field, p, 2, budget)? {
            planes_on_line[line_index[&l]].push(pi);
        }
    }
    let covered: Vec<bool> = lines
        .iter()
        .map(|l| {
            solids
                .iter()
                .any(|s| s.contains(l, field).expect("same ambient"))
        })
        .collect();
    for (li, on_line) in planes_on_line.iter().enumerate() {
        let terms: Vec<(usize, BigRational)> =
            on_line.iter().map(|&pi| (pi, BigRational::one())).collect();
        let (rel, rhs) = if covered[li] {
            (Relation::Eq, rational(0))
        } else {
            (Relation::Le, rational(1))
        };
        model.add_constraint(format!("c{li}"), terms, rel, rhs)?;
    }

    if v == 7 {
        let points = enumerate_subspaces(field, v, 1, budget)?;
        let point_index: std::collections::HashMap<&Subspace, usize> =
            points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut planes_on_point: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
        for (pi, p) in planes.iter().enumerate() {
            for pt in subspaces_of(field, p, 1, budget)? {
                planes_on_point[point_index[&pt]].push(pi);
            }
        }
        for (qi, q) in points.iter().enumerate() {
            let tau = solids
                .iter()
                .filter(|s| s.contains(q, field).expect("same ambient"))
                .count() as u64;
            let terms: Vec<(usize, BigRational)> = planes_on_point[qi]
                .iter()
                .map(|&pi| (pi, BigRational::one()))
                .collect();
            model.add_constraint(
                format!("c{}", lines.len() + qi),
                terms,
                Relation::Le,
                rational(f_function(tau)),
            )?;
        }
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> std::sync::Arc<FieldContext> {
        FieldContext::make_field(2, 1).unwrap()
    }

    #[test]
    fn empty_solid_set_v7_model_shape() {
        let f = f2();
        let b = Budget::default();
        let model = build_ilp(&f, 7, &[], &b).unwrap();
        assert_eq!(model.var_count(), 11811);
        assert_eq!(model.constraint_count(), 2667 + 127);
        // all line constraints are <= 1, all point constraints <= f(0) = 21
        for c in &model.constraints[..2667] {
            assert_eq!(c.relation, Relation::Le);
            assert_eq!(c.rhs, rational(1));
        }
        for c in &model.constraints[2667..] {
            assert_eq!(c.relation, Relation::Le);
            assert_eq!(c.rhs, rational(21));
        }
    }

    #[test]
    fn v5_analog_has_no_point_constraints() {
        let f = f2();
        let b = Budget::default();
        let model = build_ilp(&f, 5, &[], &b).unwrap();
        assert_eq!(model.var_count(), 155);
        assert_eq!(model.constraint_count(), 155);
    }

    #[test]
    fn line_constraint_sizes() {
        let f = f2();
        let b = Budget::default();
        let model = build_ilp(&f, 5, &[], &b).unwrap();
        // every line of F_2^5 lies on [3 choose 1]_2 = 7 planes
        for c in &model.constraints {
            assert_eq!(c.terms.len(), 7);
        }
    }

    #[test]
    fn rejects_q3_and_bad_solids() {
        let f3 = FieldContext::make_field(3, 1).unwrap();
        let b = Budget::default();
        assert!(build_ilp(&f3, 7, &[], &b).is_err());
        let f = f2();
        let lines = enumerate_subspaces(&f, 7, 2, &b).unwrap();
        assert!(build_ilp(&f, 7, &lines[..1], &b).is_err());
    }
}
