//! Generic linear programs and a two-phase solve on top of the revised
//! simplex core.

use super::simplex::{Column, RevisedSimplex, SolveStatus};
use super::LpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

/// One sparse constraint row `sum coeffs . x  <relation>  rhs`.
#[derive(Clone, Debug)]
pub struct ConstraintRow {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `min objective . x` subject to the rows and per-variable lower bounds
/// (zero by default; no upper bounds).
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<ConstraintRow>,
    pub lower_bounds: Vec<f64>,
}

impl LinearProgram {
    pub fn new(num_vars: usize, objective: Vec<f64>) -> Self {
        assert_eq!(objective.len(), num_vars);
        LinearProgram { num_vars, objective, rows: Vec::new(), lower_bounds: vec![0.0; num_vars] }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        self.rows.push(ConstraintRow { coeffs, relation, rhs });
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars || self.lower_bounds.len() != self.num_vars {
            return Err(LpError::Precondition("objective/bounds length mismatch".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::Precondition(format!("row {i} has non-finite rhs")));
            }
            for &(var, coeff) in &row.coeffs {
                if var >= self.num_vars {
                    return Err(LpError::Precondition(format!(
                        "row {i} references variable {var} >= {}",
                        self.num_vars
                    )));
                }
                if !coeff.is_finite() {
                    return Err(LpError::Precondition(format!("row {i} has non-finite coefficient")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

const PHASE1_TOL: f64 = 1e-7;

/// Solve a general program with the two-phase revised simplex.
pub fn lp_solve(p: &LinearProgram) -> Result<LpOutcome, LpError> {
    p.validate()?;
    let nv = p.num_vars;
    let m = p.rows.len();

    if m == 0 {
        // Nothing constrains the variables: each sits at its lower bound
        // unless a negative cost lets it grow without bound.
        if p.objective.iter().any(|&c| c < -1e-12) {
            return Ok(LpOutcome::Unbounded);
        }
        let x = p.lower_bounds.clone();
        let objective = x.iter().zip(&p.objective).map(|(a, b)| a * b).sum();
        return Ok(LpOutcome::Optimal { x, objective });
    }

    // Shift out the lower bounds: x = lb + x', x' >= 0.
    let mut rhs = Vec::with_capacity(m);
    let mut flipped = Vec::with_capacity(m);
    for row in &p.rows {
        let shift: f64 = row.coeffs.iter().map(|&(v, c)| c * p.lower_bounds[v]).sum();
        let b = row.rhs - shift;
        let flip = b < 0.0;
        rhs.push(if flip { -b } else { b });
        flipped.push(flip);
    }

    let mut s = RevisedSimplex::new(rhs.clone());
    // structural columns
    for var in 0..nv {
        let mut entries = Vec::new();
        for (i, row) in p.rows.iter().enumerate() {
            let coeff: f64 = row
                .coeffs
                .iter()
                .filter(|&&(v, _)| v == var)
                .map(|&(_, c)| c)
                .sum();
            if coeff != 0.0 {
                entries.push((i as u32, if flipped[i] { -coeff } else { coeff }));
            }
        }
        s.add_column(Column::new(entries), 0.0);
    }
    // slack / surplus columns and the phase-1 start basis
    let mut basis = Vec::with_capacity(m);
    let mut artificials = Vec::new();
    for (i, row) in p.rows.iter().enumerate() {
        let rel = match (row.relation, flipped[i]) {
            (Relation::Ge, false) | (Relation::Le, true) => Relation::Ge,
            (Relation::Le, false) | (Relation::Ge, true) => Relation::Le,
            (Relation::Eq, _) => Relation::Eq,
        };
        match rel {
            Relation::Le => {
                let slack = s.add_column(Column::new(vec![(i as u32, 1.0)]), 0.0);
                basis.push(slack);
            }
            Relation::Ge => {
                let _surplus = s.add_column(Column::new(vec![(i as u32, -1.0)]), 0.0);
                let art = s.add_column(Column::new(vec![(i as u32, 1.0)]), 0.0);
                artificials.push(art);
                basis.push(art);
            }
            Relation::Eq => {
                let art = s.add_column(Column::new(vec![(i as u32, 1.0)]), 0.0);
                artificials.push(art);
                basis.push(art);
            }
        }
    }

    let pivot_budget = 20_000 + 200 * (m as u64 + s.num_cols() as u64);

    s.set_identity_basis(basis);
    if !artificials.is_empty() {
        for &a in &artificials {
            s.set_cost(a, 1.0);
        }
        match s.solve(pivot_budget)? {
            SolveStatus::Optimal => {}
            SolveStatus::Unbounded => unreachable!("phase 1 objective is bounded below by zero"),
        }
        if s.objective() > PHASE1_TOL {
            return Ok(LpOutcome::Infeasible);
        }
        for &a in &artificials {
            s.set_cost(a, 0.0);
        }
        s.retire_columns(&artificials);
    }

    for var in 0..nv {
        s.set_cost(var, p.objective[var]);
    }
    match s.solve(pivot_budget)? {
        SolveStatus::Unbounded => Ok(LpOutcome::Unbounded),
        SolveStatus::Optimal => {
            let x: Vec<f64> = (0..nv).map(|v| p.lower_bounds[v] + s.value(v)).collect();
            let objective = x.iter().zip(&p.objective).map(|(a, b)| a * b).sum();
            Ok(LpOutcome::Optimal { x, objective })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(p: &LinearProgram) -> (Vec<f64>, f64) {
        match lp_solve(p).unwrap() {
            LpOutcome::Optimal { x, objective } => (x, objective),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn min_x_with_lower_bound_row() {
        // min x s.t. x >= 3/4
        let mut p = LinearProgram::new(1, vec![1.0]);
        p.add_row(vec![(0, 1.0)], Relation::Ge, 0.75);
        let (x, obj) = optimal(&p);
        assert!((x[0] - 0.75).abs() < 1e-9);
        assert!((obj - 0.75).abs() < 1e-9);
    }

    #[test]
    fn min_sum_with_joint_row() {
        // min x+y s.t. x+y >= 1
        let mut p = LinearProgram::new(2, vec![1.0, 1.0]);
        p.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Ge, 1.0);
        let (_, obj) = optimal(&p);
        assert!((obj - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        // min x s.t. x <= -1, x >= 0
        let mut p = LinearProgram::new(1, vec![1.0]);
        p.add_row(vec![(0, 1.0)], Relation::Le, -1.0);
        assert_eq!(lp_solve(&p).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // min -x s.t. x >= 1
        let mut p = LinearProgram::new(1, vec![-1.0]);
        p.add_row(vec![(0, 1.0)], Relation::Ge, 1.0);
        assert_eq!(lp_solve(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_rows_and_lower_bounds() {
        // min 2x + y s.t. x + y = 3, y - x <= 1, x >= 0.5
        let mut p = LinearProgram::new(2, vec![2.0, 1.0]);
        p.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 3.0);
        p.add_row(vec![(1, 1.0), (0, -1.0)], Relation::Le, 1.0);
        p.lower_bounds[0] = 0.5;
        let (x, obj) = optimal(&p);
        assert!((x[0] + x[1] - 3.0).abs() < 1e-8);
        // optimum pushes x down to the kink max(0.5, (3-1)/2) = 1
        assert!((x[0] - 1.0).abs() < 1e-8, "{x:?}");
        assert!((obj - 4.0).abs() < 1e-8);
    }

    #[test]
    fn no_rows_cases() {
        let p = LinearProgram::new(2, vec![1.0, 0.0]);
        let (x, obj) = optimal(&p);
        assert_eq!(x, vec![0.0, 0.0]);
        assert_eq!(obj, 0.0);
        let p = LinearProgram::new(1, vec![-1.0]);
        assert_eq!(lp_solve(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn bad_program_rejected() {
        let mut p = LinearProgram::new(1, vec![1.0]);
        p.add_row(vec![(3, 1.0)], Relation::Ge, 0.0);
        assert!(matches!(lp_solve(&p), Err(LpError::Precondition(_))));
        let mut p = LinearProgram::new(1, vec![1.0]);
        p.add_row(vec![(0, f64::NAN)], Relation::Ge, 0.0);
        assert!(matches!(lp_solve(&p), Err(LpError::Precondition(_))));
    }

    /// Degenerate-but-feasible system exercising artificial retirement.
    #[test]
    fn redundant_equalities() {
        // x + y = 2 stated twice, min x
        let mut p = LinearProgram::new(2, vec![1.0, 0.0]);
        p.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 2.0);
        p.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 2.0);
        let (x, obj) = optimal(&p);
        assert!(obj.abs() < 1e-9);
        assert!((x[0] + x[1] - 2.0).abs() < 1e-8);
    }
}
