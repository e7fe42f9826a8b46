//! Dense two-phase primal simplex over exact rationals.
//!
//! Pivot selection is Bland's rule throughout (least eligible index
//! entering, least basic index on ratio ties), which rules out cycling and
//! guarantees termination; speed is a non-goal compared to exactness.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{budget as budget_err, Result};

use super::{LpModel, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Exact solution of the LP relaxation.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value; zero for infeasible/unbounded outcomes.
    pub objective: BigRational,
    /// Primal values per model variable; empty unless optimal.
    pub primal: Vec<BigRational>,
}

/// Solves the LP relaxation of the model (binary flags relax to
/// `0 <= x <= 1`, other variables to `x >= 0`).
pub fn solve_lp(model: &LpModel) -> Result<LpSolution> {
    solve_lp_with_deadline(model, None)
}

/// As [`solve_lp`] with a wall-clock deadline checked at every pivot.
pub fn solve_lp_with_deadline(model: &LpModel, deadline: Option<Instant>) -> Result<LpSolution> {
    let n = model.var_count();
    // presolve: variables forced to zero by all-positive rows with zero rhs
    let fixed_zero = zero_fixed_vars(model);

    // dense objective
    let mut objective = vec![BigRational::zero(); n];
    for &(j, ref c) in &model.objective {
        objective[j] = &objective[j] + c;
    }

    // rows: dense coefficients, relation, rhs, skipping fixed variables
    let mut rows: Vec<(Vec<BigRational>, Relation, BigRational)> = Vec::new();
    for c in &model.constraints {
        let mut coeffs = vec![BigRational::zero(); n];
        for &(j, ref a) in &c.terms {
            if !fixed_zero[j] {
                coeffs[j] = &coeffs[j] + a;
            }
        }
        rows.push((coeffs, c.relation, c.rhs.clone()));
    }
    // upper bounds for binary variables not already implied
    for j in 0..n {
        if model.vars[j].binary && !fixed_zero[j] && !upper_bound_implied(model, j) {
            let mut coeffs = vec![BigRational::zero(); n];
            coeffs[j] = BigRational::one();
            rows.push((coeffs, Relation::Le, BigRational::one()));
        }
    }

    // normalize rhs >= 0
    for (coeffs, rel, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for a in coeffs.iter_mut() {
                *a = -a.clone();
            }
            *rhs = -rhs.clone();
            *rel = match *rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = rows.len();
    let n_slack = rows
        .iter()
        .filter(|(_, rel, _)| !matches!(rel, Relation::Eq))
        .count();
    let n_art = rows
        .iter()
        .filter(|(_, rel, _)| !matches!(rel, Relation::Le))
        .count();
    let cols = n + n_slack + n_art;

    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    let mut slack_at = n;
    let mut art_at = n + n_slack;
    let art_start = n + n_slack;
    for (r, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        let mut row = vec![BigRational::zero(); cols + 1];
        row[..n].clone_from_slice(coeffs);
        row[cols] = rhs.clone();
        match rel {
            Relation::Le => {
                row[slack_at] = BigRational::one();
                basis[r] = slack_at;
                slack_at += 1;
            }
            Relation::Ge => {
                row[slack_at] = -BigRational::one();
                slack_at += 1;
                row[art_at] = BigRational::one();
                basis[r] = art_at;
                art_at += 1;
            }
            Relation::Eq => {
                row[art_at] = BigRational::one();
                basis[r] = art_at;
                art_at += 1;
            }
        }
        tab.push(row);
    }

    // phase 1: maximize -sum(artificials)
    if n_art > 0 {
        let mut obj1 = vec![BigRational::zero(); cols + 1];
        for j in art_start..cols {
            obj1[j] = -BigRational::one();
        }
        for r in 0..m {
            if basis[r] >= art_start {
                let row = tab[r].clone();
                for j in 0..=cols {
                    obj1[j] = &obj1[j] + &row[j];
                }
            }
        }
        run_simplex(&mut tab, &mut obj1, &mut basis, cols, None, deadline)?;
        let value = -obj1[cols].clone();
        if !value.is_zero() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                objective: BigRational::zero(),
                primal: Vec::new(),
            });
        }
        // drive artificials out of the basis or drop redundant rows
        let mut r = 0;
        while r < tab.len() {
            if basis[r] >= art_start {
                let pivot_col = (0..art_start).find(|&j| !tab[r][j].is_zero());
                match pivot_col {
                    Some(c) => pivot(&mut tab, &mut basis, r, c, None),
                    None => {
                        tab.remove(r);
                        basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // phase 2 objective, expressed over the current basis
    let mut obj2 = vec![BigRational::zero(); cols + 1];
    obj2[..n].clone_from_slice(&objective);
    for j in 0..n {
        if fixed_zero[j] {
            obj2[j] = BigRational::zero();
        }
    }
    for r in 0..tab.len() {
        let b = basis[r];
        if !obj2[b].is_zero() {
            let factor = obj2[b].clone();
            let row = tab[r].clone();
            for j in 0..=cols {
                obj2[j] = &obj2[j] - &factor * &row[j];
            }
        }
    }
    let status = run_simplex(&mut tab, &mut obj2, &mut basis, cols, Some(art_start), deadline)?;
    if status == LpStatus::Unbounded {
        return Ok(LpSolution {
            status,
            objective: BigRational::zero(),
            primal: Vec::new(),
        });
    }
    let mut primal = vec![BigRational::zero(); n];
    for r in 0..tab.len() {
        if basis[r] < n {
            primal[basis[r]] = tab[r][cols].clone();
        }
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: -obj2[cols].clone(),
        primal,
    })
}

/// Variables that some zero-rhs constraint with all-positive coefficients
/// pins to zero (equality or `<=`).
fn zero_fixed_vars(model: &LpModel) -> Vec<bool> {
    let mut fixed = vec![false; model.var_count()];
    for c in &model.constraints {
        if !c.rhs.is_zero() || matches!(c.relation, Relation::Ge) || c.terms.is_empty() {
            continue;
        }
        if c.terms.iter().all(|(_, a)| a.is_positive()) {
            for &(j, _) in &c.terms {
                fixed[j] = true;
            }
        }
    }
    fixed
}

/// True when some all-nonnegative `<=` row with rhs at most 1 already caps
/// the variable at 1.
fn upper_bound_implied(model: &LpModel, var: usize) -> bool {
    model.constraints.iter().any(|c| {
        matches!(c.relation, Relation::Le)
            && c.rhs <= BigRational::one()
            && c.terms.iter().all(|(_, a)| !a.is_negative())
            && c.terms.iter().any(|&(j, ref a)| j == var && *a >= BigRational::one())
    })
}

/// Bland-rule simplex loop; `banned_from` closes columns (the artificials)
/// to entry during phase 2.
fn run_simplex(
    tab: &mut Vec<Vec<BigRational>>,
    obj: &mut [BigRational],
    basis: &mut [usize],
    cols: usize,
    banned_from: Option<usize>,
    deadline: Option<Instant>,
) -> Result<LpStatus> {
    let limit = banned_from.unwrap_or(cols);
    loop {
        if let Some(d) = deadline {
            if Instant::now() > d {
                return Err(budget_err("wall-clock budget exhausted during simplex"));
            }
        }
        // Bland: least-index column with positive reduced cost
        let Some(entering) = (0..limit).find(|&j| obj[j].is_positive()) else {
            return Ok(LpStatus::Optimal);
        };
        // ratio test, ties by least basic index
        let mut best: Option<(usize, BigRational)> = None;
        for r in 0..tab.len() {
            if tab[r][entering].is_positive() {
                let ratio = &tab[r][cols] / &tab[r][entering];
                match &best {
                    None => best = Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < *bratio || (ratio == *bratio && basis[r] < basis[*br]) {
                            best = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((row, _)) = best else {
            return Ok(LpStatus::Unbounded);
        };
        pivot(tab, basis, row, entering, Some(obj));
    }
}

fn pivot(
    tab: &mut [Vec<BigRational>],
    basis: &mut [usize],
    row: usize,
    col: usize,
    obj: Option<&mut [BigRational]>,
) {
    let cols = tab[row].len() - 1;
    let inv = tab[row][col].clone().recip();
    if !inv.is_one() {
        for j in 0..=cols {
            if !tab[row][j].is_zero() {
                tab[row][j] = &tab[row][j] * &inv;
            }
        }
    }
    let pivot_row = tab[row].clone();
    for (r, t_row) in tab.iter_mut().enumerate() {
        if r == row || t_row[col].is_zero() {
            continue;
        }
        let factor = t_row[col].clone();
        for j in 0..=cols {
            if !pivot_row[j].is_zero() {
                t_row[j] = &t_row[j] - &factor * &pivot_row[j];
            }
        }
    }
    if let Some(obj) = obj {
        if !obj[col].is_zero() {
            let factor = obj[col].clone();
            for j in 0..=cols {
                if !pivot_row[j].is_zero() {
                    obj[j] = &obj[j] - &factor * &pivot_row[j];
                }
            }
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::rational;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binary_relaxation_caps_at_one() {
        // maximize x subject to x <= 3/2 with x binary: relaxation gives 1
        let mut m = LpModel::new();
        let x = m.add_var("x", true);
        m.set_objective(vec![(x, rational(1))]).unwrap();
        m.add_constraint("c0", vec![(x, rational(1))], Relation::Le, frac(3, 2))
            .unwrap();
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, rational(1));
    }

    #[test]
    fn fractional_optimum() {
        // maximize x + y, x + 2y <= 2, 2x + y <= 2: optimum 4/3
        let mut m = LpModel::new();
        let x = m.add_var("x", false);
        let y = m.add_var("y", false);
        m.set_objective(vec![(x, rational(1)), (y, rational(1))]).unwrap();
        m.add_constraint(
            "c0",
            vec![(x, rational(1)), (y, rational(2))],
            Relation::Le,
            rational(2),
        )
        .unwrap();
        m.add_constraint(
            "c1",
            vec![(x, rational(2)), (y, rational(1))],
            Relation::Le,
            rational(2),
        )
        .unwrap();
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.objective, frac(4, 3));
        assert_eq!(sol.primal[x], frac(2, 3));
        assert_eq!(sol.primal[y], frac(2, 3));
    }

    #[test]
    fn equality_and_ge_rows() {
        // maximize x + y with x + y = 2 and x >= 1/2: optimum 2
        let mut m = LpModel::new();
        let x = m.add_var("x", false);
        let y = m.add_var("y", false);
        m.set_objective(vec![(x, rational(1)), (y, rational(1))]).unwrap();
        m.add_constraint(
            "c0",
            vec![(x, rational(1)), (y, rational(1))],
            Relation::Eq,
            rational(2),
        )
        .unwrap();
        m.add_constraint("c1", vec![(x, rational(1))], Relation::Ge, frac(1, 2))
            .unwrap();
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, rational(2));
    }

    #[test]
    fn infeasible_detected() {
        let mut m = LpModel::new();
        let x = m.add_var("x", false);
        m.set_objective(vec![(x, rational(1))]).unwrap();
        m.add_constraint("c0", vec![(x, rational(1))], Relation::Ge, rational(2))
            .unwrap();
        m.add_constraint("c1", vec![(x, rational(1))], Relation::Le, rational(1))
            .unwrap();
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let mut m = LpModel::new();
        let x = m.add_var("x", false);
        m.set_objective(vec![(x, rational(1))]).unwrap();
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn zero_rhs_equality_fixes_vars() {
        let mut m = LpModel::new();
        let x = m.add_var("x", true);
        let y = m.add_var("y", true);
        m.set_objective(vec![(x, rational(1)), (y, rational(1))]).unwrap();
        m.add_constraint("c0", vec![(x, rational(1))], Relation::Eq, rational(0))
            .unwrap();
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.objective, rational(1));
        assert_eq!(sol.primal[x], rational(0));
        assert_eq!(sol.primal[y], rational(1));
    }

    #[test]
    fn degenerate_lp_terminates() {
        // a classic degenerate instance; Bland must terminate
        let mut m = LpModel::new();
        let x = m.add_var("x1", false);
        let y = m.add_var("x2", false);
        let z = m.add_var("x3", false);
        m.set_objective(vec![(x, frac(3, 4)), (y, rational(-150)), (z, frac(1, 50))])
            .unwrap();
        m.add_constraint(
            "c0",
            vec![(x, frac(1, 4)), (y, rational(-60)), (z, frac(-1, 25))],
            Relation::Le,
            rational(0),
        )
        .unwrap();
        m.add_constraint(
            "c1",
            vec![(x, frac(1, 2)), (y, rational(-90)), (z, frac(-1, 50))],
            Relation::Le,
            rational(0),
        )
        .unwrap();
        m.add_constraint("c2", vec![(z, rational(1))], Relation::Le, rational(1))
            .unwrap();
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, frac(1, 20));
    }
}
