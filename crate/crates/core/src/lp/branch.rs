//! Exact branch and bound for the binary models at desk scale.
//!
//! Models whose constraints are all-ones packing rows (the plane-packing
//! family) are solved by a depth-first set-packing search with capacity
//! propagation and a candidate-count bound; the LP relaxation of those
//! instances sits far above the integer optimum, so bounding through the
//! relaxation alone cannot close them at any reasonable node count.
//! Everything else falls back to LP-based branch and bound on the most
//! fractional variable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

use super::simplex::{solve_lp, LpStatus};
use super::{LpModel, Relation};

/// Default node budget for integer solves; the packing search visits
/// hundreds of millions of cheap nodes on the mid-size instances.
pub const DEFAULT_ILP_NODE_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IlpStatus {
    /// The returned objective is the proven optimum.
    Optimal,
    /// The node budget ran out; the objective is the best incumbent and
    /// `upper_bound` caps everything left unexplored.
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct IlpResult {
    pub status: IlpStatus,
    /// Best integer objective found.
    pub objective: BigRational,
    /// Valid upper bound on the optimum (equals `objective` when proven).
    pub upper_bound: BigRational,
    pub nodes: u64,
    /// Indices of variables at one in the incumbent.
    pub support: Vec<usize>,
}

/// Solves a binary integer program exactly within the node budget.
pub fn solve_ilp_small(model: &LpModel, node_budget: u64) -> Result<IlpResult> {
    if model.vars.iter().any(|v| !v.binary) {
        return Err(domain("integer solving supports binary variables only"));
    }
    if let Some(packing) = PackingForm::try_from_model(model) {
        return Ok(packing.solve(node_budget));
    }
    solve_generic(model, node_budget)
}

/// All-ones packing structure: maximize the count of chosen variables
/// subject to per-row capacities.
struct PackingForm {
    n: usize,
    words: usize,
    /// conflict_free[i]: bitset of variables compatible with i under all
    /// capacity-1 rows.
    conflict_free: Vec<Vec<u64>>,
    /// rows with capacity >= 2: (member list, capacity)
    capacity_rows: Vec<(Vec<usize>, u64)>,
    /// per-variable list of capacity-row indices
    rows_of_var: Vec<Vec<usize>>,
    /// variables fixed to zero by zero-capacity rows
    excluded: Vec<bool>,
}

impl PackingForm {
    fn try_from_model(model: &LpModel) -> Option<PackingForm> {
        let n = model.var_count();
        // objective must be exactly "count everything"
        let mut seen = vec![false; n];
        for &(j, ref c) in &model.objective {
            if !c.is_one() || seen[j] {
                return None;
            }
            seen[j] = true;
        }
        if !seen.iter().all(|&s| s) {
            return None;
        }
        let mut excluded = vec![false; n];
        let mut pair_rows: Vec<Vec<usize>> = Vec::new();
        let mut capacity_rows: Vec<(Vec<usize>, u64)> = Vec::new();
        for c in &model.constraints {
            if c.terms.iter().any(|(_, a)| !a.is_one()) {
                return None;
            }
            let members: Vec<usize> = c.terms.iter().map(|&(j, _)| j).collect();
            if c.rhs.is_negative() || !c.rhs.is_integer() {
                return None;
            }
            let rhs = c.rhs.to_integer();
            let rhs: u64 = u64::try_from(&rhs).ok()?;
            match c.relation {
                Relation::Eq if rhs == 0 => {
                    for j in members {
                        excluded[j] = true;
                    }
                }
                Relation::Le => match rhs {
                    0 => {
                        for j in members {
                            excluded[j] = true;
                        }
                    }
                    1 => pair_rows.push(members),
                    _ if rhs >= members.len() as u64 => {} // never binding
                    _ => capacity_rows.push((members, rhs)),
                },
                _ => return None,
            }
        }
        let words = n.div_ceil(64);
        let mut conflict_free = vec![vec![u64::MAX; words]; n];
        for bits in conflict_free.iter_mut() {
            // mask tail bits
            if n % 64 != 0 {
                bits[words - 1] = (1u64 << (n % 64)) - 1;
            }
        }
        for row in &pair_rows {
            for &a in row {
                for &b in row {
                    if a != b {
                        conflict_free[a][b / 64] &= !(1u64 << (b % 64));
                    }
                }
            }
        }
        let mut rows_of_var = vec![Vec::new(); n];
        for (ri, (members, _)) in capacity_rows.iter().enumerate() {
            for &j in members {
                rows_of_var[j].push(ri);
            }
        }
        Some(PackingForm {
            n,
            words,
            conflict_free,
            capacity_rows,
            rows_of_var,
            excluded,
        })
    }

    fn solve(&self, node_budget: u64) -> IlpResult {
        let mut cands = vec![0u64; self.words];
        for j in 0..self.n {
            if !self.excluded[j] {
                cands[j / 64] |= 1 << (j % 64);
            }
        }
        let root_bound = count_from(&cands, 0);
        let mut caps: Vec<u64> = self.capacity_rows.iter().map(|&(_, c)| c).collect();
        let mut state = PackingSearch {
            form: self,
            best: 0,
            best_support: Vec::new(),
            chosen: Vec::new(),
            nodes: 0,
            node_budget,
            exhausted: false,
        };
        state.dfs(&mut cands, 0, &mut caps);
        let objective = BigRational::from_integer(BigInt::from(state.best));
        let (status, upper) = if state.exhausted {
            // an incomplete search certifies nothing beyond the root bound
            (
                IlpStatus::BudgetExhausted,
                BigRational::from_integer(BigInt::from(root_bound.max(state.best))),
            )
        } else {
            (IlpStatus::Optimal, objective.clone())
        };
        IlpResult {
            status,
            objective,
            upper_bound: upper,
            nodes: state.nodes,
            support: state.best_support,
        }
    }
}

struct PackingSearch<'a> {
    form: &'a PackingForm,
    best: u64,
    best_support: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    node_budget: u64,
    exhausted: bool,
}

impl PackingSearch<'_> {
    fn dfs(&mut self, cands: &mut [u64], start: usize, caps: &mut [u64]) {
        self.nodes += 1;
        let chosen = self.chosen.len() as u64;
        if chosen > self.best {
            self.best = chosen;
            self.best_support = self.chosen.clone();
        }
        let available = count_from(cands, start);
        if self.nodes > self.node_budget {
            self.exhausted = true;
            return;
        }
        if chosen + available <= self.best {
            return;
        }
        let mut j = next_set(cands, start);
        let mut skipped = 0u64;
        while let Some(var) = j {
            if self.exhausted {
                return;
            }
            // capacity feasibility
            if self.form.rows_of_var[var].iter().all(|&r| caps[r] > 0) {
                for &r in &self.form.rows_of_var[var] {
                    caps[r] -= 1;
                }
                self.chosen.push(var);
                let mut next_cands: Vec<u64> = cands
                    .iter()
                    .zip(&self.form.conflict_free[var])
                    .map(|(a, b)| a & b)
                    .collect();
                self.dfs(&mut next_cands, var + 1, caps);
                self.chosen.pop();
                for &r in &self.form.rows_of_var[var] {
                    caps[r] += 1;
                }
            }
            skipped += 1;
            // bound after excluding this variable from the remainder
            if chosen + available - skipped <= self.best {
                return;
            }
            j = next_set(cands, var + 1);
        }
    }
}

fn count_from(bits: &[u64], start: usize) -> u64 {
    let word = start / 64;
    if word >= bits.len() {
        return 0;
    }
    let mut total = (bits[word] & (u64::MAX << (start % 64))).count_ones() as u64;
    for w in bits.iter().skip(word + 1) {
        total += w.count_ones() as u64;
    }
    total
}

fn next_set(bits: &[u64], start: usize) -> Option<usize> {
    let mut word = start / 64;
    if word >= bits.len() {
        return None;
    }
    let mut cur = bits[word] & (u64::MAX << (start % 64));
    loop {
        if cur != 0 {
            return Some(word * 64 + cur.trailing_zeros() as usize);
        }
        word += 1;
        if word >= bits.len() {
            return None;
        }
        cur = bits[word];
    }
}

/// LP-based branch and bound: depth-first, branch on the most fractional
/// variable (ties to the lowest index), prune on bound <= incumbent.
fn solve_generic(model: &LpModel, node_budget: u64) -> Result<IlpResult> {
    // the root relaxation bounds everything an exhausted search leaves open
    let root = solve_lp(model)?;
    let root_bound = match root.status {
        LpStatus::Infeasible => BigRational::zero(),
        LpStatus::Unbounded => return Err(domain("integer model has an unbounded relaxation")),
        LpStatus::Optimal => root.objective,
    };
    let mut state = GenericSearch {
        best: None,
        best_support: Vec::new(),
        nodes: 0,
        node_budget,
        exhausted: false,
    };
    let mut fixings: Vec<Option<bool>> = vec![None; model.var_count()];
    state.recurse(model, &mut fixings)?;
    let objective = state.best.clone().unwrap_or_else(BigRational::zero);
    let upper = if state.exhausted {
        root_bound.max(objective.clone())
    } else {
        objective.clone()
    };
    Ok(IlpResult {
        status: if state.exhausted {
            IlpStatus::BudgetExhausted
        } else {
            IlpStatus::Optimal
        },
        objective,
        upper_bound: upper,
        nodes: state.nodes,
        support: state.best_support,
    })
}

struct GenericSearch {
    best: Option<BigRational>,
    best_support: Vec<usize>,
    nodes: u64,
    node_budget: u64,
    exhausted: bool,
}

impl GenericSearch {
    fn recurse(&mut self, model: &LpModel, fixings: &mut Vec<Option<bool>>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.exhausted = true;
            return Ok(());
        }
        let sub = apply_fixings(model, fixings)?;
        let sol = solve_lp(&sub)?;
        match sol.status {
            LpStatus::Infeasible => return Ok(()),
            LpStatus::Unbounded => {
                return Err(domain("integer model has an unbounded relaxation"))
            }
            LpStatus::Optimal => {}
        }
        if let Some(best) = &self.best {
            if sol.objective <= *best {
                return Ok(());
            }
        }
        // most fractional binary variable
        let mut branch_var: Option<(usize, BigRational)> = None;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for (j, value) in sol.primal.iter().enumerate() {
            if fixings[j].is_some() || !model.vars[j].binary {
                continue;
            }
            if value.is_integer() {
                continue;
            }
            let frac = value - value.floor();
            let dist = if frac > half {
                &frac - &half
            } else {
                &half - &frac
            };
            match &branch_var {
                None => branch_var = Some((j, dist)),
                Some((_, bd)) if dist < *bd => branch_var = Some((j, dist)),
                _ => {}
            }
        }
        match branch_var {
            None => {
                // integral solution
                let better = match &self.best {
                    None => true,
                    Some(b) => sol.objective > *b,
                };
                if better {
                    self.best = Some(sol.objective.clone());
                    self.best_support = sol
                        .primal
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(j, _)| j)
                        .collect();
                }
                Ok(())
            }
            Some((j, _)) => {
                for value in [true, false] {
                    fixings[j] = Some(value);
                    self.recurse(model, fixings)?;
                    fixings[j] = None;
                    if self.exhausted {
                        break;
                    }
                }
                Ok(())
            }
        }
    }
}

/// The model with pin rows for the given binary fixings; the objective and
/// original rows are untouched, so fixed contributions stay in the value.
fn apply_fixings(model: &LpModel, fixings: &[Option<bool>]) -> Result<LpModel> {
    let mut sub = model.clone();
    for (j, fix) in fixings.iter().enumerate() {
        if let Some(value) = fix {
            sub.add_constraint(
                format!("fix{j}"),
                vec![(j, BigRational::one())],
                Relation::Eq,
                if *value {
                    BigRational::one()
                } else {
                    BigRational::zero()
                },
            )?;
        }
    }
    Ok(sub)
}
