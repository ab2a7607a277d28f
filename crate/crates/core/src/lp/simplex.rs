//! Two-phase dense primal simplex with Bland's rule.
//!
//! The problem is rewritten over nonnegative standard-form variables (finite
//! lower bounds shifted away, upper bounds turned into extra `≤` rows, free
//! variables split), then phase 1 minimises the artificial total and phase 2
//! the real objective. Bland's rule (smallest eligible index enters, smallest
//! basic index leaves among minimal ratios) keeps the pivot sequence
//! deterministic and cycle-free. When a candidate pivot falls below the
//! pivot tolerance the tableau is rebuilt from the pristine system once; a
//! tiny pivot that survives the rebuild is reported as numerical breakdown.

use super::{LinearProgram, LpError, LpSolution, LpStatus, RowSense, Sense};
use crate::real::{Real, Tolerances};

const MAX_PIVOTS: usize = 100_000;

enum VarMap<T> {
    /// `x = offset + x'`
    Shifted { col: usize, offset: T },
    /// `x = offset − x'`
    Flipped { col: usize, offset: T },
    /// `x = x⁺ − x⁻`
    Split { pos: usize, neg: usize },
}

struct Engine<'a, T: Real> {
    /// Pristine standard-form system, `m × (ncols+1)`, rhs last. Used for
    /// tableau rebuilds.
    orig: Vec<Vec<T>>,
    tab: Vec<Vec<T>>,
    basis: Vec<usize>,
    n_struct: usize,
    first_artificial: usize,
    ncols: usize,
    /// Reduced-cost row, `ncols+1` wide; last entry holds `−z`.
    cost: Vec<T>,
    /// Phase-2 costs over structural columns (minimisation orientation).
    struct_cost: Vec<T>,
    rebuilt: bool,
    pivots: usize,
    tol: &'a Tolerances<T>,
}

enum LoopEnd {
    Optimal,
    Unbounded,
}

pub fn solve<T: Real>(lp: &LinearProgram<T>, tol: &Tolerances<T>) -> Result<LpSolution<T>, LpError> {
    validate(lp)?;
    let cs = &lp.constraints;
    let n = cs.num_vars();

    if cs.lower.iter().zip(&cs.upper).any(|(&lo, &hi)| lo > hi) {
        return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
    }

    // Minimisation orientation for the engine.
    let min_obj: Vec<T> = match lp.sense {
        Sense::Minimize => lp.objective.clone(),
        Sense::Maximize => lp.objective.iter().map(|&c| -c).collect(),
    };

    // Map original variables onto nonnegative structural columns.
    let mut maps: Vec<VarMap<T>> = Vec::with_capacity(n);
    let mut n_struct = 0usize;
    // (structural column, width) for shifted variables with finite upper bound
    let mut ub_rows: Vec<(usize, T)> = Vec::new();
    for j in 0..n {
        let (lo, hi) = (cs.lower[j], cs.upper[j]);
        if lo.is_finite() {
            maps.push(VarMap::Shifted { col: n_struct, offset: lo });
            if hi.is_finite() {
                ub_rows.push((n_struct, hi - lo));
            }
            n_struct += 1;
        } else if hi.is_finite() {
            maps.push(VarMap::Flipped { col: n_struct, offset: hi });
            n_struct += 1;
        } else {
            maps.push(VarMap::Split { pos: n_struct, neg: n_struct + 1 });
            n_struct += 2;
        }
    }

    let mut struct_cost = vec![T::zero(); n_struct];
    for (j, map) in maps.iter().enumerate() {
        match *map {
            VarMap::Shifted { col, .. } => struct_cost[col] = min_obj[j],
            VarMap::Flipped { col, .. } => struct_cost[col] = -min_obj[j],
            VarMap::Split { pos, neg } => {
                struct_cost[pos] = min_obj[j];
                struct_cost[neg] = -min_obj[j];
            }
        }
    }

    // Substituted rows (constraint rows first, then upper-bound rows),
    // normalised to rhs ≥ 0.
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(cs.rows.len() + ub_rows.len());
    let mut senses: Vec<RowSense> = Vec::with_capacity(rows.capacity());
    let mut rhs: Vec<T> = Vec::with_capacity(rows.capacity());
    for (i, row) in cs.rows.iter().enumerate() {
        let mut coeffs = vec![T::zero(); n_struct];
        let mut b = cs.rhs[i];
        for (j, &a) in row.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            match maps[j] {
                VarMap::Shifted { col, offset } => {
                    coeffs[col] += a;
                    b -= a * offset;
                }
                VarMap::Flipped { col, offset } => {
                    coeffs[col] -= a;
                    b -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
            }
        }
        rows.push(coeffs);
        senses.push(cs.senses[i]);
        rhs.push(b);
    }
    for &(col, width) in &ub_rows {
        let mut coeffs = vec![T::zero(); n_struct];
        coeffs[col] = T::one();
        rows.push(coeffs);
        senses.push(RowSense::Le);
        rhs.push(width);
    }
    for i in 0..rows.len() {
        if rhs[i] < T::zero() {
            for a in rows[i].iter_mut() {
                *a = -*a;
            }
            rhs[i] = -rhs[i];
            senses[i] = match senses[i] {
                RowSense::Le => RowSense::Ge,
                RowSense::Eq => RowSense::Eq,
                RowSense::Ge => RowSense::Le,
            };
        }
    }

    // Column layout: structural | slack+surplus | artificial.
    let m = rows.len();
    let n_slack = senses.iter().filter(|s| !matches!(s, RowSense::Eq)).count();
    let n_art = senses.iter().filter(|s| !matches!(s, RowSense::Le)).count();
    let first_artificial = n_struct + n_slack;
    let ncols = first_artificial + n_art;

    let mut orig = vec![vec![T::zero(); ncols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut slack_at = n_struct;
    let mut art_at = first_artificial;
    for i in 0..m {
        orig[i][..n_struct].copy_from_slice(&rows[i]);
        orig[i][ncols] = rhs[i];
        match senses[i] {
            RowSense::Le => {
                orig[i][slack_at] = T::one();
                basis[i] = slack_at;
                slack_at += 1;
            }
            RowSense::Ge => {
                orig[i][slack_at] = -T::one();
                slack_at += 1;
                orig[i][art_at] = T::one();
                basis[i] = art_at;
                art_at += 1;
            }
            RowSense::Eq => {
                orig[i][art_at] = T::one();
                basis[i] = art_at;
                art_at += 1;
            }
        }
    }

    let mut engine = Engine {
        tab: orig.clone(),
        orig,
        basis,
        n_struct,
        first_artificial,
        ncols,
        cost: Vec::new(),
        struct_cost,
        rebuilt: false,
        pivots: 0,
        tol,
    };

    // Phase 1: minimise artificial total.
    engine.reset_cost_phase1();
    match engine.iterate(1)? {
        LoopEnd::Unbounded => unreachable!("phase-1 objective is bounded below"),
        LoopEnd::Optimal => {}
    }
    let infeasibility = -engine.cost[engine.ncols];
    if infeasibility > tol.feas {
        return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
    }
    engine.drop_artificials()?;

    // Phase 2: minimise the real objective.
    engine.reset_cost_phase2();
    if let LoopEnd::Unbounded = engine.iterate(2)? {
        return Ok(LpSolution::non_optimal(LpStatus::Unbounded));
    }

    // Reconstruct original variables.
    let mut x_std = vec![T::zero(); engine.ncols];
    for (i, &b) in engine.basis.iter().enumerate() {
        x_std[b] = engine.tab[i][engine.ncols];
    }
    let x: Vec<T> = maps
        .iter()
        .map(|map| match *map {
            VarMap::Shifted { col, offset } => offset + x_std[col],
            VarMap::Flipped { col, offset } => offset - x_std[col],
            VarMap::Split { pos, neg } => x_std[pos] - x_std[neg],
        })
        .collect();
    debug_assert!(cs.is_feasible(&x, T::of(1e3) * tol.feas), "simplex returned infeasible point");

    let objective_value: T = lp.objective.iter().zip(&x).map(|(&c, &v)| c * v).sum();
    let active_rows = cs.active_rows(&x, tol.feas);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value,
        variable_values: x,
        active_rows,
    })
}

fn validate<T: Real>(lp: &LinearProgram<T>) -> Result<(), LpError> {
    let cs = &lp.constraints;
    let n = cs.num_vars();
    if lp.objective.len() != n {
        return Err(LpError::Shape(format!(
            "objective has {} coefficients for {} variables",
            lp.objective.len(),
            n
        )));
    }
    if cs.upper.len() != n {
        return Err(LpError::Shape("lower/upper bound lengths differ".into()));
    }
    if cs.senses.len() != cs.rows.len() || cs.rhs.len() != cs.rows.len() {
        return Err(LpError::Shape("rows, senses and rhs lengths differ".into()));
    }
    for (i, row) in cs.rows.iter().enumerate() {
        if row.len() != n {
            return Err(LpError::Shape(format!("row {i} has {} coefficients for {n} variables", row.len())));
        }
        if row.iter().any(|a| !a.is_finite()) {
            return Err(LpError::Shape(format!("row {i} contains a non-finite coefficient")));
        }
    }
    if cs.rhs.iter().any(|b| !b.is_finite()) || lp.objective.iter().any(|c| !c.is_finite()) {
        return Err(LpError::Shape("non-finite objective or rhs entry".into()));
    }
    if cs.lower.iter().any(|l| l.is_nan() || *l == T::infinity())
        || cs.upper.iter().any(|u| u.is_nan() || *u == T::neg_infinity())
    {
        return Err(LpError::Shape("invalid variable bound".into()));
    }
    Ok(())
}

impl<T: Real> Engine<'_, T> {
    fn reset_cost_phase1(&mut self) {
        let mut cost = vec![T::zero(); self.ncols + 1];
        for c in cost.iter_mut().take(self.ncols).skip(self.first_artificial) {
            *c = T::one();
        }
        self.eliminate_basic(&mut cost);
        self.cost = cost;
    }

    fn reset_cost_phase2(&mut self) {
        let mut cost = vec![T::zero(); self.ncols + 1];
        cost[..self.n_struct].copy_from_slice(&self.struct_cost);
        self.eliminate_basic(&mut cost);
        self.cost = cost;
    }

    fn eliminate_basic(&self, cost: &mut [T]) {
        for (i, &b) in self.basis.iter().enumerate() {
            let factor = cost[b];
            if factor != T::zero() {
                for (c, &t) in cost.iter_mut().zip(&self.tab[i]) {
                    *c -= factor * t;
                }
            }
        }
    }

    fn iterate(&mut self, phase: u8) -> Result<LoopEnd, LpError> {
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(LpError::NumericalBreakdown);
            }
            let entering = (0..self.ncols).find(|&j| self.cost[j] < -self.tol.opt);
            let entering = match entering {
                Some(j) => j,
                None => return Ok(LoopEnd::Optimal),
            };

            let mut leaving: Option<(T, usize, usize)> = None; // (ratio, basic index, row)
            let mut tiny_candidate = false;
            for i in 0..self.tab.len() {
                let a = self.tab[i][entering];
                if a > self.tol.pivot {
                    let ratio = self.tab[i][self.ncols] / a;
                    let replace = match leaving {
                        None => true,
                        Some((best, basic, _)) => {
                            ratio < best || (ratio == best && self.basis[i] < basic)
                        }
                    };
                    if replace {
                        leaving = Some((ratio, self.basis[i], i));
                    }
                } else if a > T::zero() {
                    tiny_candidate = true;
                }
            }

            match leaving {
                Some((_, _, row)) => {
                    self.pivot(row, entering);
                    self.rebuilt = false;
                }
                None if tiny_candidate || phase == 1 => {
                    // Either a candidate pivot sits below tolerance, or the
                    // bounded phase-1 objective looks unbounded; both are
                    // numerical artefacts. Rebuild once, then give up.
                    if self.rebuilt {
                        return Err(LpError::NumericalBreakdown);
                    }
                    self.rebuild(phase)?;
                    self.rebuilt = true;
                }
                None => return Ok(LoopEnd::Unbounded),
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.tab[row][col];
        let inv = T::one() / pivot;
        for v in self.tab[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..self.tab.len() {
            if i == row {
                continue;
            }
            let factor = self.tab[i][col];
            if factor != T::zero() {
                for k in 0..=self.ncols {
                    let delta = factor * self.tab[row][k];
                    self.tab[i][k] -= delta;
                }
            }
        }
        let factor = self.cost[col];
        if factor != T::zero() {
            for k in 0..=self.ncols {
                let delta = factor * self.tab[row][k];
                self.cost[k] -= delta;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Recompute the tableau from the pristine system under the current
    /// basis (Gaussian elimination with partial pivoting), then restore the
    /// phase cost row.
    fn rebuild(&mut self, phase: u8) -> Result<(), LpError> {
        let m = self.tab.len();
        // Augmented [B | orig]: reduce B to the identity.
        let mut aug: Vec<Vec<T>> = (0..m)
            .map(|i| {
                let mut row = Vec::with_capacity(m + self.ncols + 1);
                for &b in &self.basis {
                    row.push(self.orig[i][b]);
                }
                row.extend_from_slice(&self.orig[i]);
                row
            })
            .collect();
        for col in 0..m {
            let pivot_row = (col..m)
                .max_by(|&a, &b| {
                    aug[a][col]
                        .abs()
                        .partial_cmp(&aug[b][col].abs())
                        .expect("no NaN in tableau")
                })
                .expect("nonempty pivot candidates");
            if aug[pivot_row][col].abs() <= self.tol.pivot {
                return Err(LpError::NumericalBreakdown);
            }
            aug.swap(col, pivot_row);
            let inv = T::one() / aug[col][col];
            for v in aug[col].iter_mut() {
                *v *= inv;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let factor = aug[r][col];
                if factor != T::zero() {
                    for k in 0..m + self.ncols + 1 {
                        let delta = factor * aug[col][k];
                        aug[r][k] -= delta;
                    }
                }
            }
        }
        for (i, row) in aug.into_iter().enumerate() {
            self.tab[i] = row[m..].to_vec();
        }
        match phase {
            1 => self.reset_cost_phase1(),
            _ => self.reset_cost_phase2(),
        }
        Ok(())
    }

    /// After a feasible phase 1: pivot basic artificials out (degenerately)
    /// or drop their rows as redundant, then cut the artificial columns.
    fn drop_artificials(&mut self) -> Result<(), LpError> {
        let mut redundant: Vec<usize> = Vec::new();
        for i in 0..self.tab.len() {
            if self.basis[i] < self.first_artificial {
                continue;
            }
            let best = (0..self.first_artificial)
                .max_by(|&a, &b| {
                    self.tab[i][a]
                        .abs()
                        .partial_cmp(&self.tab[i][b].abs())
                        .expect("no NaN in tableau")
                })
                .filter(|&j| self.tab[i][j].abs() > self.tol.pivot);
            match best {
                Some(col) => {
                    // The basic artificial sits at level ≈ 0, so this pivot
                    // is degenerate and preserves feasibility whatever the
                    // pivot sign.
                    self.pivot(i, col);
                }
                None => redundant.push(i),
            }
        }
        for &i in redundant.iter().rev() {
            self.tab.remove(i);
            self.orig.remove(i);
            self.basis.remove(i);
        }
        for row in self.tab.iter_mut().chain(self.orig.iter_mut()) {
            let rhs = row[self.ncols];
            row.truncate(self.first_artificial);
            row.push(rhs);
        }
        self.ncols = self.first_artificial;
        Ok(())
    }
}
