//! Depth-first branch and bound for small mixed-integer programs.

use super::{solve_lp, LinearProgram, LpSolution, LpStatus, VarId, OPTIMALITY_TOL};
use crate::error::LpError;

const INTEGRALITY_TOL: f64 = 1e-6;

/// Solves `p` with the variables in `integer` restricted to integers.
///
/// Branches on the lowest-indexed fractional variable, down branch first.
/// When more than `node_limit` relaxations have been solved the search
/// stops with [`LpStatus::ResourceLimit`], carrying the incumbent if one
/// was found.
pub fn solve_ilp_small(
    p: &LinearProgram,
    integer: &[VarId],
    node_limit: usize,
) -> Result<LpSolution, LpError> {
    p.validate()?;
    let mut is_int = vec![false; p.num_vars()];
    for v in integer {
        if v.0 >= is_int.len() {
            return Err(LpError::Malformed(format!("integer variable {} undeclared", v.0)));
        }
        is_int[v.0] = true;
    }
    let mut best: Option<LpSolution> = None;
    let mut nodes = 0usize;
    let mut stack = vec![p.clone()];
    let mut root_status = None;
    while let Some(sub) = stack.pop() {
        if nodes >= node_limit {
            return Ok(match best {
                Some(b) => LpSolution {
                    status: LpStatus::ResourceLimit,
                    ..b
                },
                None => LpSolution::status_only(LpStatus::ResourceLimit),
            });
        }
        nodes += 1;
        let relax = solve_lp(&sub)?;
        if root_status.is_none() {
            root_status = Some(relax.status);
        }
        if relax.status != LpStatus::Optimal {
            if relax.status == LpStatus::Unbounded && nodes == 1 {
                return Ok(relax);
            }
            continue;
        }
        if let Some(b) = &best {
            let bound = b.objective_value - OPTIMALITY_TOL * b.objective_value.abs().max(1.0);
            if relax.objective_value >= bound {
                continue;
            }
        }
        let frac = (0..relax.values.len()).find(|&i| {
            is_int[i] && (relax.values[i] - relax.values[i].round()).abs() > INTEGRALITY_TOL
        });
        match frac {
            None => {
                let mut sol = relax;
                for (i, x) in sol.values.iter_mut().enumerate() {
                    if is_int[i] {
                        *x = x.round();
                    }
                }
                sol.objective_value = p.objective_value(&sol.values);
                best = Some(sol);
            }
            Some(i) => {
                let x = relax.values[i];
                let mut down = sub.clone();
                down.var_mut(VarId(i)).upper = x.floor();
                let mut up = sub;
                up.var_mut(VarId(i)).lower = x.ceil();
                // down branch is explored first
                stack.push(up);
                stack.push(down);
            }
        }
    }
    Ok(best.unwrap_or_else(|| LpSolution::status_only(LpStatus::Infeasible)))
}
