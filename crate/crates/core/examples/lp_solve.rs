//! Solves a small program with the LP engine, then again with integer
//! variables.

use aqfp_bsopt::lp::{solve_ilp_small, solve_lp, LinearProgram, Sense};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // min -x - y  s.t.  2x + 2y <= 3, x - y <= 0.5
    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", 0.0, f64::INFINITY);
    let y = lp.add_var("y", 0.0, f64::INFINITY);
    lp.set_objective(x, -1.0);
    lp.set_objective(y, -1.0);
    lp.add_constraint(vec![(x, 2.0), (y, 2.0)], Sense::Le, 3.0);
    lp.add_constraint(vec![(x, 1.0), (y, -1.0)], Sense::Le, 0.5);
    print!("{}", lp.to_lp_format());

    let relaxed = solve_lp(&lp)?;
    println!("relaxed: {:?} x={} y={} obj={}", relaxed.status, relaxed.value(x), relaxed.value(y), relaxed.objective_value);
    let int = solve_ilp_small(&lp, &[x, y], 1000)?;
    println!("integer: {:?} x={} y={} obj={}", int.status, int.value(x), int.value(y), int.objective_value);
    Ok(())
}
